//! Small linear-algebra toolkit: 3-vectors, symmetric eigen solves for plane
//! fitting, and dense row-major matrices with LU / GMRES solvers sized for
//! desk-scale collocation systems.

use crate::error::{Error, Result};
use crate::exec;
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Point or vector in ambient 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const fn v3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3 { x, y, z }
}

impl Vec3 {
    pub const ZERO: Vec3 = v3(0.0, 0.0, 0.0);

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        v3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 {
            Vec3::ZERO
        } else {
            self / n
        }
    }

    pub fn min_by_coord(self, o: Vec3) -> Vec3 {
        v3(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max_by_coord(self, o: Vec3) -> Vec3 {
        v3(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn coord(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    /// An arbitrary unit vector orthogonal to `self` (assumed nonzero).
    pub fn any_orthonormal(self) -> Vec3 {
        let a = if self.x.abs() < 0.9 { v3(1.0, 0.0, 0.0) } else { v3(0.0, 1.0, 0.0) };
        self.cross(a).normalized()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        v3(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        v3(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        v3(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        v3(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        v3(self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

/// Symmetric 3x3 eigendecomposition by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` sorted ascending; eigenvectors are
/// the columns, returned as rows of the array for convenience.
pub fn sym_eigen_3x3(m: [[f64; 3]; 3]) -> ([f64; 3], [Vec3; 3]) {
    let mut a = m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for p in 0..2 {
            for q in (p + 1)..3 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..3 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..3 {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let vals = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let vecs = [
        v3(v[0][order[0]], v[1][order[0]], v[2][order[0]]).normalized(),
        v3(v[0][order[1]], v[1][order[1]], v[2][order[1]]).normalized(),
        v3(v[0][order[2]], v[1][order[2]], v[2][order[2]]).normalized(),
    ];
    (vals, vecs)
}

/// Dense row-major matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// y = A x, rows evaluated in parallel, order-preserving.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        exec::map_indexed(self.rows, |i| {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            acc
        })
    }

    /// y = A^T x.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let cols = self.cols;
        let mut y = vec![0.0; cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                *yj += self.data[i * cols + j] * xi;
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest singular value estimate by power iteration on A^T A.
    pub fn op_norm_estimate(&self, iters: usize) -> f64 {
        let mut x = vec![1.0; self.cols];
        let mut norm = 0.0;
        for _ in 0..iters {
            let y = self.matvec(&x);
            let z = self.matvec_transpose(&y);
            norm = exec::sum(&z.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt().sqrt();
            let zn = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if zn == 0.0 {
                return 0.0;
            }
            x = z.iter().map(|v| v / zn).collect();
        }
        norm
    }
}

/// LU factorization with partial pivoting.
pub struct LuFactor {
    lu: DenseMatrix,
    piv: Vec<usize>,
}

impl LuFactor {
    /// Factor `a` in place. Fails on (near-)singular pivots, reporting a
    /// rough condition estimate.
    pub fn new(mut a: DenseMatrix) -> Result<Self> {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut piv: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(1e-300);
        for k in 0..n {
            // Pivot search in column k.
            let mut p = k;
            let mut best = a.get(k, k).abs();
            for i in (k + 1)..n {
                let v = a.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-14 * scale {
                return Err(Error::Solve(format!(
                    "singular system: pivot {:.3e} at step {k} (scale {:.3e})",
                    best, scale
                )));
            }
            if p != k {
                piv.swap(k, p);
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, t);
                }
            }
            let inv = 1.0 / a.get(k, k);
            // Split rows below the pivot; each row update is independent.
            let cols = a.cols;
            let (upper, lower) = a.data.split_at_mut((k + 1) * cols);
            let pivot_row = &upper[k * cols..(k + 1) * cols];
            exec::for_each_chunk_mut(lower, cols, |_, row| {
                let m = row[k] * inv;
                row[k] = m;
                if m != 0.0 {
                    for j in (k + 1)..cols {
                        row[j] -= m * pivot_row[j];
                    }
                }
            });
        }
        Ok(LuFactor { lu: a, piv })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            let row = self.lu.row(i);
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        x
    }
}

/// Restarted GMRES with diagonal preconditioning, for systems past the dense
/// LU size threshold.
pub fn gmres(
    a: &DenseMatrix,
    b: &[f64],
    restart: usize,
    max_outer: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = a.rows;
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let d = a.get(i, i);
            if d.abs() > 1e-300 {
                1.0 / d
            } else {
                1.0
            }
        })
        .collect();
    let precond = |v: &[f64]| -> Vec<f64> { v.iter().zip(&diag).map(|(x, d)| x * d).collect() };

    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let mut x = vec![0.0; n];
    for _ in 0..max_outer {
        let ax = a.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let r = precond(&r);
        let beta = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if beta / bnorm < tol {
            return Ok(x);
        }
        let m = restart;
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        v.push(r.iter().map(|t| t / beta).collect());
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            let w0 = a.matvec(&v[k]);
            let mut w = precond(&w0);
            for i in 0..=k {
                let hik: f64 = w.iter().zip(&v[i]).map(|(a, b)| a * b).sum();
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= hik * vj;
                }
            }
            let hk1 = w.iter().map(|t| t * t).sum::<f64>().sqrt();
            h[k + 1][k] = hk1;
            if hk1 > 1e-300 {
                v.push(w.iter().map(|t| t / hk1).collect());
            } else {
                v.push(vec![0.0; n]);
            }
            // Apply accumulated Givens rotations.
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = (h[k][k] * h[k][k] + h[k + 1][k] * h[k + 1][k]).sqrt();
            if denom < 1e-300 {
                k_used = k + 1;
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if g[k + 1].abs() / bnorm < tol {
                break;
            }
        }
        // Back substitution for the least-squares coefficients.
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut acc = g[i];
            for j in (i + 1)..k_used {
                acc -= h[i][j] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        for (i, yi) in y.iter().enumerate() {
            for (xj, vj) in x.iter_mut().zip(&v[i]) {
                *xj += yi * vj;
            }
        }
    }
    let ax = a.matvec(&x);
    let res = b
        .iter()
        .zip(&ax)
        .map(|(bi, ai)| (bi - ai) * (bi - ai))
        .sum::<f64>()
        .sqrt()
        / bnorm;
    if res < tol * 100.0 {
        Ok(x)
    } else {
        Err(Error::Solve(format!("gmres stalled at relative residual {res:.3e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eigen_diagonal() {
        let (vals, vecs) = sym_eigen_3x3([[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]);
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[2], 3.0, epsilon = 1e-12);
        assert!(vecs[0].dot(v3(0.0, 1.0, 0.0)).abs() > 0.999);
    }

    #[test]
    fn eigen_rotated() {
        // Rank-1 + isotropic: smallest eigenvector along the rank-1 axis complement.
        let n = v3(1.0, 2.0, -1.0).normalized();
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let ni = [n.x, n.y, n.z][i];
                let nj = [n.x, n.y, n.z][j];
                m[i][j] = if i == j { 1.0 } else { 0.0 };
                m[i][j] -= ni * nj; // projector onto plane orthogonal to n
            }
        }
        let (vals, vecs) = sym_eigen_3x3(m);
        assert_relative_eq!(vals[0], 0.0, epsilon = 1e-12);
        assert!(vecs[0].dot(n).abs() > 0.999999);
    }

    #[test]
    fn lu_solves_random_system() {
        let n = 40;
        let mut a = DenseMatrix::zeros(n, n);
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                let v = rnd() + if i == j { 4.0 } else { 0.0 };
                a.set(i, j, v);
            }
        }
        let xtrue: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.matvec(&xtrue);
        let f = LuFactor::new(a).unwrap();
        let x = f.solve(&b);
        for (xi, ti) in x.iter().zip(&xtrue) {
            assert_relative_eq!(xi, ti, epsilon = 1e-9);
        }
    }

    #[test]
    fn gmres_matches_lu() {
        let n = 30;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = 1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { 3.0 } else { 0.0 };
                a.set(i, j, v);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.11).cos()).collect();
        let x1 = LuFactor::new(a.clone()).unwrap().solve(&b);
        let x2 = gmres(&a, &b, 20, 50, 1e-12).unwrap();
        for (u, v) in x1.iter().zip(&x2) {
            assert_relative_eq!(u, v, epsilon = 1e-8);
        }
    }
}
