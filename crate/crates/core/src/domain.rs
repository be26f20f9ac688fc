//! Built-in discrete domains: balls, flat patches, Lipschitz graph boxes,
//! and the cone-in-cylinder domain with its graded meshes. Every builder
//! carries an exact analytic inside predicate alongside the mesh.

use crate::error::{Error, Result};
use crate::la::{v3, Vec3};
use crate::mesh::SurfaceMesh;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

/// A solid with a triangulated boundary and an exact membership test.
#[derive(Clone)]
pub struct Domain {
    pub mesh: SurfaceMesh,
    inside: Arc<dyn Fn(Vec3) -> bool + Send + Sync>,
    pub bbox: (Vec3, Vec3),
    pub diam_boundary: f64,
    pub label: String,
}

impl Domain {
    pub fn new(
        mesh: SurfaceMesh,
        inside: Arc<dyn Fn(Vec3) -> bool + Send + Sync>,
        label: &str,
    ) -> Self {
        let (lo, hi) = mesh.bbox();
        let margin = (hi - lo).norm() * 0.05 + 1e-9;
        let bbox = (lo - v3(margin, margin, margin), hi + v3(margin, margin, margin));
        let diam_boundary = mesh.diam();
        Domain { mesh, inside, bbox, diam_boundary, label: label.to_string() }
    }

    pub fn inside(&self, x: Vec3) -> bool {
        (self.inside)(x)
    }
}

impl std::fmt::Debug for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Domain")
            .field("label", &self.label)
            .field("panels", &self.mesh.panel_count())
            .finish()
    }
}

/// Variant of the cone-in-cylinder domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeVariant {
    /// Flat cylinder bottom.
    FlatBottom,
    /// Bottom face replaced by a tent graph whose reentrant ridge has
    /// interior opening angle `alpha` (in (pi, 2*pi)).
    VertexBottom { alpha: f64 },
}

// ---------------------------------------------------------------------------
// Ball
// ---------------------------------------------------------------------------

/// Unit ball boundary as a subdivided icosahedron (20 * 4^subdiv panels).
pub fn ball(subdiv: u32) -> Domain {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut verts = vec![
        v3(-1.0, phi, 0.0),
        v3(1.0, phi, 0.0),
        v3(-1.0, -phi, 0.0),
        v3(1.0, -phi, 0.0),
        v3(0.0, -1.0, phi),
        v3(0.0, 1.0, phi),
        v3(0.0, -1.0, -phi),
        v3(0.0, 1.0, -phi),
        v3(phi, 0.0, -1.0),
        v3(phi, 0.0, 1.0),
        v3(-phi, 0.0, -1.0),
        v3(-phi, 0.0, 1.0),
    ];
    for v in verts.iter_mut() {
        *v = v.normalized();
    }
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdiv {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[k] = *midpoint.entry(key).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) * 0.5).normalized());
                    verts.len() - 1
                });
            }
            new_faces.push([f[0], mid[0], mid[2]]);
            new_faces.push([f[1], mid[1], mid[0]]);
            new_faces.push([f[2], mid[2], mid[1]]);
            new_faces.push([mid[0], mid[1], mid[2]]);
        }
        faces = new_faces;
    }
    let mesh = SurfaceMesh::new(verts, faces).expect("icosphere construction");
    Domain::new(mesh, Arc::new(|x: Vec3| x.norm2() < 1.0), "ball")
}

/// Smallest icosphere level with at least `target` panels (capped at level 6).
pub fn ball_with_target(target: usize) -> Domain {
    let mut subdiv = 0u32;
    while 20 * 4usize.pow(subdiv) < target && subdiv < 6 {
        subdiv += 1;
    }
    ball(subdiv)
}

// ---------------------------------------------------------------------------
// Flat patches
// ---------------------------------------------------------------------------

/// Open rectangular patch in the plane z = 0, normals +z.
/// The inside predicate treats it as the roof of the lower half space.
pub fn flat_patch_grid(nx: usize, ny: usize, half_x: f64, half_y: f64) -> Domain {
    assert!(nx >= 1 && ny >= 1);
    let mut verts = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = -half_x + 2.0 * half_x * i as f64 / nx as f64;
            let y = -half_y + 2.0 * half_y * j as f64 / ny as f64;
            verts.push(v3(x, y, 0.0));
        }
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    let mesh = SurfaceMesh::new(verts, faces).expect("flat patch construction");
    let (hx, hy) = (half_x, half_y);
    Domain::new(
        mesh,
        Arc::new(move |x: Vec3| x.z < 0.0 && x.x.abs() < hx && x.y.abs() < hy),
        "flat-patch",
    )
}

/// Square flat patch [-1,1]^2 with an n x n grid.
pub fn flat_patch(n: usize) -> Domain {
    flat_patch_grid(n, n, 1.0, 1.0)
}

// ---------------------------------------------------------------------------
// Lipschitz graph box
// ---------------------------------------------------------------------------

/// Closed domain between the graph z = height(x, y) over [-1,1]^2 and a flat
/// lid, with side walls. Fails if sampled slopes exceed `lip_bound`.
pub fn graph_domain<F>(height: F, lip_bound: f64, n: usize) -> Result<Domain>
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    assert!(n >= 2);
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / n as f64;
    let mut hmax = f64::NEG_INFINITY;
    let mut grid = vec![vec![0.0; n + 1]; n + 1];
    for j in 0..=n {
        for i in 0..=n {
            grid[j][i] = height(coord(i), coord(j));
            hmax = hmax.max(grid[j][i]);
        }
    }
    let tol = 1e-9;
    for j in 0..=n {
        for i in 0..=n {
            let here = (coord(i), coord(j), grid[j][i]);
            let mut check = |i2: usize, j2: usize| -> Result<()> {
                let dx = ((coord(i2) - here.0).powi(2) + (coord(j2) - here.1).powi(2)).sqrt();
                let slope = (grid[j2][i2] - here.2).abs() / dx;
                if slope > lip_bound + tol {
                    return Err(Error::Domain(format!(
                        "height slope {:.4} exceeds bound {:.4} between ({:.3},{:.3}) and ({:.3},{:.3})",
                        slope,
                        lip_bound,
                        here.0,
                        here.1,
                        coord(i2),
                        coord(j2)
                    )));
                }
                Ok(())
            };
            if i + 1 <= n {
                check(i + 1, j)?;
            }
            if j + 1 <= n {
                check(i, j + 1)?;
            }
            if i + 1 <= n && j + 1 <= n {
                check(i + 1, j + 1)?;
            }
        }
    }
    let lid = hmax + 1.0;

    let mut verts = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    // Bottom graph sheet, outward normal pointing below the graph.
    let bot = |i: usize, j: usize| j * (n + 1) + i;
    for j in 0..=n {
        for i in 0..=n {
            verts.push(v3(coord(i), coord(j), grid[j][i]));
        }
    }
    for j in 0..n {
        for i in 0..n {
            faces.push([bot(i, j), bot(i + 1, j + 1), bot(i + 1, j)]);
            faces.push([bot(i, j), bot(i, j + 1), bot(i + 1, j + 1)]);
        }
    }
    // Lid, outward normal +z.
    let lid0 = verts.len();
    let top = |i: usize, j: usize| lid0 + j * (n + 1) + i;
    for j in 0..=n {
        for i in 0..=n {
            verts.push(v3(coord(i), coord(j), lid));
        }
    }
    for j in 0..n {
        for i in 0..n {
            faces.push([top(i, j), top(i + 1, j), top(i + 1, j + 1)]);
            faces.push([top(i, j), top(i + 1, j + 1), top(i, j + 1)]);
        }
    }
    // Walls reuse the sheet rims so edges are shared exactly.
    let mut wall = |rim: Vec<(usize, usize)>, outward_flip: bool| {
        for w in rim.windows(2) {
            let (a_b, a_t) = w[0];
            let (b_b, b_t) = w[1];
            if outward_flip {
                faces.push([a_b, b_b, b_t]);
                faces.push([a_b, b_t, a_t]);
            } else {
                faces.push([a_b, b_t, b_b]);
                faces.push([a_b, a_t, b_t]);
            }
        }
    };
    let south: Vec<(usize, usize)> = (0..=n).map(|i| (bot(i, 0), top(i, 0))).collect();
    let north: Vec<(usize, usize)> = (0..=n).map(|i| (bot(i, n), top(i, n))).collect();
    let west: Vec<(usize, usize)> = (0..=n).map(|j| (bot(0, j), top(0, j))).collect();
    let east: Vec<(usize, usize)> = (0..=n).map(|j| (bot(n, j), top(n, j))).collect();
    wall(south, false);
    wall(north, true);
    wall(west, true);
    wall(east, false);

    let mesh = SurfaceMesh::new(verts, faces)?;
    let h = Arc::new(height);
    Ok(Domain::new(
        mesh,
        Arc::new(move |x: Vec3| {
            x.x.abs() < 1.0 && x.y.abs() < 1.0 && x.z > h(x.x, x.y) && x.z < lid
        }),
        "box-graph",
    ))
}

// ---------------------------------------------------------------------------
// Cone-in-cylinder domain
// ---------------------------------------------------------------------------

struct RingMesher {
    verts: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
}

impl RingMesher {
    fn new() -> Self {
        RingMesher { verts: Vec::new(), faces: Vec::new() }
    }

    fn push_ring(&mut self, pts: &[Vec3]) -> Vec<usize> {
        let base = self.verts.len();
        self.verts.extend_from_slice(pts);
        (base..base + pts.len()).collect()
    }

    fn push_vertex(&mut self, p: Vec3) -> usize {
        self.verts.push(p);
        self.verts.len() - 1
    }

    fn push_face(&mut self, f: [usize; 3]) {
        if f[0] != f[1] && f[1] != f[2] && f[0] != f[2] {
            self.faces.push(f);
        }
    }

    /// Stitch two closed rings of equal length. `flip` reverses orientation.
    fn stitch(&mut self, a: &[usize], b: &[usize], flip: bool) {
        let k = a.len();
        assert_eq!(k, b.len());
        for i in 0..k {
            let j = (i + 1) % k;
            if flip {
                self.push_face([a[i], b[i], b[j]]);
                self.push_face([a[i], b[j], a[j]]);
            } else {
                self.push_face([a[i], b[j], b[i]]);
                self.push_face([a[i], a[j], b[j]]);
            }
        }
    }

    fn fan(&mut self, ring: &[usize], apex: usize, flip: bool) {
        let k = ring.len();
        for i in 0..k {
            let j = (i + 1) % k;
            if flip {
                self.push_face([ring[i], apex, ring[j]]);
            } else {
                self.push_face([ring[i], ring[j], apex]);
            }
        }
    }

    /// Stitch two closed rings with different angular grids by a merged
    /// angular walk; each triangle advances on one ring. Triangles with a
    /// repeated vertex id (collapsed skirt segments) are dropped.
    fn stitch_unequal(
        &mut self,
        a_ids: &[usize],
        a_angles: &[f64],
        b_ids: &[usize],
        b_angles: &[f64],
        flip: bool,
    ) {
        let na = a_ids.len();
        let nb = b_ids.len();
        let mut i = 0usize;
        let mut j = 0usize;
        while i < na || j < nb {
            let next_a = if i < na {
                if i + 1 < na {
                    a_angles[i + 1]
                } else {
                    a_angles[0] + 2.0 * PI
                }
            } else {
                f64::INFINITY
            };
            let next_b = if j < nb {
                if j + 1 < nb {
                    b_angles[j + 1]
                } else {
                    b_angles[0] + 2.0 * PI
                }
            } else {
                f64::INFINITY
            };
            let ai = a_ids[i % na];
            let bj = b_ids[j % nb];
            if next_a <= next_b {
                let an = a_ids[(i + 1) % na];
                if flip {
                    self.push_face([ai, bj, an]);
                } else {
                    self.push_face([ai, an, bj]);
                }
                i += 1;
            } else {
                let bn = b_ids[(j + 1) % nb];
                if flip {
                    self.push_face([ai, bj, bn]);
                } else {
                    self.push_face([ai, bn, bj]);
                }
                j += 1;
            }
        }
    }
}

fn circle(r: f64, z: f64, angles: &[f64]) -> Vec<Vec3> {
    angles.iter().map(|&t| v3(r * t.cos(), r * t.sin(), z)).collect()
}

fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// Radial ladder from `outer` down to about `inner_min`: anchor levels plus
/// dyadic halving, with the ratio between consecutive levels capped at 2.
fn graded_levels(outer: f64, inner_min: f64, anchors: &[f64]) -> Vec<f64> {
    let mut levels: Vec<f64> = vec![outer];
    for &a in anchors {
        if a < outer && a > 0.0 {
            levels.push(a);
        }
    }
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut t = *levels.last().unwrap();
    while t > inner_min * 1.0000001 {
        t = (t * 0.5).max(inner_min);
        levels.push(t);
    }
    let mut out: Vec<f64> = vec![levels[0]];
    for &l in &levels[1..] {
        loop {
            let prev = *out.last().unwrap();
            if prev / l > 2.000001 {
                out.push(prev * 0.5);
            } else {
                break;
            }
        }
        if (out.last().unwrap() - l).abs() > 1e-12 * outer {
            out.push(l);
        }
    }
    out
}

/// The cone-in-cylinder domain: open cylinder of radius 2 and height 2 minus
/// a solid truncated cone with unit base circle at z = 0 and apex (0,0,1)
/// touching the center of the top face. With `ConeVariant::VertexBottom`,
/// the flat bottom is replaced by a tent graph whose reentrant ridge has
/// interior angle `alpha`.
///
/// `resolution` is a target panel count; `grading` is the smallest feature
/// scale to resolve near the apex (panels shrink geometrically to about a
/// quarter of it). Dyadic fractions of 0.4 down to `grading` are ring circles
/// of the cone mesh, so piecewise-linear boundary data with kinks on those
/// rings is represented exactly.
pub fn cone_cylinder(resolution: usize, grading: f64, variant: ConeVariant) -> Result<Domain> {
    if resolution < 200 {
        return Err(Error::Domain(format!("resolution {resolution} too small (need >= 200)")));
    }
    if !(grading > 0.0) || grading > 1.0 {
        return Err(Error::Domain(format!("grading {grading} outside (0, 1]")));
    }
    if let ConeVariant::VertexBottom { alpha } = variant {
        if !(alpha > PI && alpha < 2.0 * PI) {
            return Err(Error::Domain(format!("vertex angle {alpha} outside (pi, 2*pi)")));
        }
    }
    let mut n_theta = ((resolution as f64 / 2.4).sqrt().round() as usize).clamp(16, 160);
    n_theta -= n_theta % 4; // keep the ridge angles on the grid
    let cut = grading / 4.0;
    if cut < 3e-4 {
        return Err(Error::Domain(format!("grading {grading} too small to resolve at this scale")));
    }
    let angles = uniform_angles(n_theta);
    let mut m = RingMesher::new();

    // Cylinder side wall |x'| = 2, z in [-1, 1]; the base ring occupies
    // indices 0..n_theta.
    let nz = (n_theta / 3).max(6);
    let wall_base: Vec<usize> = m.push_ring(&circle(2.0, -1.0, &angles));
    let mut prev = wall_base.clone();
    for k in 1..=nz {
        let z = -1.0 + 2.0 * k as f64 / nz as f64;
        let ring = m.push_ring(&circle(2.0, z, &angles));
        m.stitch(&prev, &ring, false);
        prev = ring;
    }
    let side_top_ring = prev;

    // Top disk z = 1, graded toward the junction at the center.
    let top_levels = graded_levels(2.0, cut, &[1.0, 0.5]);
    let mut prev = side_top_ring;
    for &r in top_levels.iter().skip(1) {
        let ring = m.push_ring(&circle(r, 1.0, &angles));
        m.stitch(&prev, &ring, false);
        prev = ring;
    }
    let top_center = m.push_vertex(v3(0.0, 0.0, 1.0));
    m.fan(&prev, top_center, false);

    // Bottom: flat disk or tent sheet, attached to the wall base ring.
    match variant {
        ConeVariant::FlatBottom => {
            let bottom_levels = graded_levels(2.0, 0.4, &[1.0]);
            let mut prev = wall_base;
            for &r in bottom_levels.iter().skip(1) {
                let ring = m.push_ring(&circle(r, -1.0, &angles));
                m.stitch(&prev, &ring, true);
                prev = ring;
            }
            let bottom_center = m.push_vertex(v3(0.0, 0.0, -1.0));
            m.fan(&prev, bottom_center, true);
        }
        ConeVariant::VertexBottom { alpha } => {
            build_tent_bottom(&mut m, &wall_base, &angles, alpha, cut);
        }
    }

    // Cone lateral surface: rings at levels t (radius t, z = 1 - t); normals
    // point into the cone, outward from the domain.
    let cone_levels = graded_levels(1.0, cut, &[0.8, 0.4, 0.2, 0.1, 0.05, 0.025]);
    let apex = m.push_vertex(v3(0.0, 0.0, 1.0));
    let base_ring = m.push_ring(&circle(cone_levels[0], 1.0 - cone_levels[0], &angles));
    let mut prev = base_ring.clone();
    for &t in cone_levels.iter().skip(1) {
        let ring = m.push_ring(&circle(t, 1.0 - t, &angles));
        m.stitch(&prev, &ring, true);
        prev = ring;
    }
    m.fan(&prev, apex, true);

    // Cone base disk z = 0, |x'| <= 1; outward normal +z points into the cone.
    let base_levels = graded_levels(1.0, 0.25, &[]);
    let mut prev = base_ring;
    for &r in base_levels.iter().skip(1) {
        let ring = m.push_ring(&circle(r, 0.0, &angles));
        m.stitch(&prev, &ring, false);
        prev = ring;
    }
    let base_center = m.push_vertex(v3(0.0, 0.0, 0.0));
    m.fan(&prev, base_center, false);

    let mesh = SurfaceMesh::new(m.verts, m.faces)?;
    let label = match variant {
        ConeVariant::FlatBottom => "cone-cylinder".to_string(),
        ConeVariant::VertexBottom { alpha } => format!("cone-cylinder-vertex:{alpha:.4}"),
    };
    let inside: Arc<dyn Fn(Vec3) -> bool + Send + Sync> = match variant {
        ConeVariant::FlatBottom => Arc::new(|x: Vec3| {
            let r2 = x.x * x.x + x.y * x.y;
            r2 < 4.0 && x.z.abs() < 1.0 && !in_cone(x, r2)
        }),
        ConeVariant::VertexBottom { alpha } => {
            let eps = tent_eps(alpha);
            Arc::new(move |x: Vec3| {
                let r2 = x.x * x.x + x.y * x.y;
                r2 < 4.0 && x.z < 1.0 && x.z > tent_height(x.x, eps) && !in_cone(x, r2)
            })
        }
    };
    Ok(Domain::new(mesh, inside, &label))
}

fn in_cone(x: Vec3, r2: f64) -> bool {
    x.z >= 0.0 && x.z <= 1.0 && r2 <= (1.0 - x.z) * (1.0 - x.z)
}

/// Tent half-width parameter from the interior ridge angle.
pub fn tent_eps(alpha: f64) -> f64 {
    ((2.0 * PI - alpha) / 2.0).tan()
}

/// Tent profile: peak -1 on the ridge x1 = 0, sloping to -2 at |x1| = eps,
/// flat at -2 beyond.
pub fn tent_height(x1: f64, eps: f64) -> f64 {
    if x1.abs() >= eps {
        -2.0
    } else {
        -1.0 - x1.abs() / eps
    }
}

/// Bottom tent sheet in polar coordinates. The ridge diameter runs along the
/// angular grid lines pi/2 and 3*pi/2, so the height kink is exact; the grid
/// is refined dyadically toward those angles and toward the center.
fn build_tent_bottom(
    m: &mut RingMesher,
    wall_base: &[usize],
    wall_angles: &[f64],
    alpha: f64,
    cut: f64,
) {
    let eps = tent_eps(alpha);
    let n_theta = wall_base.len();
    let mut angs: Vec<f64> = wall_angles.to_vec();
    for &ridge in &[PI / 2.0, 3.0 * PI / 2.0] {
        let mut gap = PI / n_theta as f64;
        while gap > cut / 2.0 {
            gap *= 0.5;
            angs.push(ridge - gap);
            angs.push(ridge + gap);
        }
    }
    angs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    // Tent rim at radius 2. At the ridge angles the rim touches the wall base
    // circle (z = -1); reuse those wall vertices so the surface stays closed.
    let ridge_a = n_theta / 4;
    let ridge_b = 3 * n_theta / 4;
    let mut rim_ids = Vec::with_capacity(angs.len());
    for &t in &angs {
        let x1 = 2.0 * t.cos();
        let z = tent_height(x1, eps);
        if (t - PI / 2.0).abs() < 1e-12 {
            rim_ids.push(wall_base[ridge_a]);
        } else if (t - 3.0 * PI / 2.0).abs() < 1e-12 {
            rim_ids.push(wall_base[ridge_b]);
        } else {
            rim_ids.push(m.push_vertex(v3(x1, 2.0 * t.sin(), z)));
        }
    }
    // Skirt from the wall base circle down to the rim.
    m.stitch_unequal(wall_base, wall_angles, &rim_ids, &angs, true);

    // Radial rings inward, geometric toward the center (which lies on the
    // ridge).
    let levels = graded_levels(2.0, cut, &[1.0, eps.min(1.9)]);
    let mut prev = rim_ids;
    for &r in levels.iter().skip(1) {
        let pts: Vec<Vec3> = angs
            .iter()
            .map(|&t| v3(r * t.cos(), r * t.sin(), tent_height(r * t.cos(), eps)))
            .collect();
        let ring = m.push_ring(&pts);
        m.stitch_unequal(&prev, &angs, &ring, &angs, true);
        prev = ring;
    }
    let center = m.push_vertex(v3(0.0, 0.0, tent_height(0.0, eps)));
    m.fan(&prev, center, true);
}

// ---------------------------------------------------------------------------
// Name registry
// ---------------------------------------------------------------------------

/// Resolve a CLI domain name. `sector:<alpha>` is two-dimensional and handled
/// by the planar solver; this function covers the 3-d domains.
pub fn by_name(name: &str, resolution: usize, grading: f64) -> Result<Domain> {
    if name == "ball" {
        return Ok(ball_with_target(resolution));
    }
    if name == "box-graph" {
        let n = ((resolution as f64 / 12.0).sqrt().round() as usize).max(4);
        return graph_domain(|_, _| 0.0, 0.1, n);
    }
    if name == "cone-cylinder" {
        return cone_cylinder(resolution, grading, ConeVariant::FlatBottom);
    }
    if let Some(rest) = name.strip_prefix("cone-cylinder-vertex:") {
        let alpha: f64 =
            rest.parse().map_err(|e| Error::Parse(format!("bad alpha in {name}: {e}")))?;
        return cone_cylinder(resolution, grading, ConeVariant::VertexBottom { alpha });
    }
    Err(Error::Domain(format!("unknown domain name: {name}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_inside_excludes_boundary_vertices() {
        let d = ball(2);
        for &v in &d.mesh.vertices {
            assert!(!d.inside(v));
        }
        assert!(d.inside(v3(0.0, 0.0, 0.0)));
    }

    #[test]
    fn ball_area_and_diam() {
        let d = ball(3);
        let sphere_area = 4.0 * PI;
        assert!((d.mesh.total_measure() - sphere_area).abs() / sphere_area < 0.01);
        assert_relative_eq!(d.diam_boundary, 2.0, epsilon = 1e-2);
    }

    #[test]
    fn graph_domain_box_is_closed_axis_aligned() {
        let d = graph_domain(|_, _| 0.0, 0.1, 6).unwrap();
        let report = d.mesh.validate();
        assert!(report.closed, "box mesh must be closed");
        assert!(report.closedness_defect < 1e-12);
        for i in 0..d.mesh.panel_count() {
            let n = d.mesh.normal(i);
            let axis_aligned =
                n.x.abs() > 1.0 - 1e-12 || n.y.abs() > 1.0 - 1e-12 || n.z.abs() > 1.0 - 1e-12;
            assert!(axis_aligned, "normal {n:?} not axis aligned");
        }
    }

    #[test]
    fn graph_domain_rejects_steep_heights() {
        let err = graph_domain(|x, _| x, 0.1, 6).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("slope"), "unexpected message {msg}");
    }

    #[test]
    fn graph_domain_piecewise_slope_measured() {
        let d = graph_domain(|x, _| 0.3 * x.abs(), 0.3, 8).unwrap();
        for i in 0..d.mesh.panel_count() {
            let n = d.mesh.normal(i);
            if n.z < -0.5 {
                let slope = (n.x * n.x + n.y * n.y).sqrt() / n.z.abs();
                assert!(slope <= 0.3 + 1e-9, "graph slope {slope}");
            }
        }
    }

    #[test]
    fn graph_domain_inside_agrees_with_height_test() {
        let d = graph_domain(|x, y| 0.2 * (3.0 * x).sin() * (2.0 * y).cos(), 0.9, 10).unwrap();
        let mut rng = crate::rng::stream_with_seed(7, 1);
        use rand::Rng;
        for _ in 0..10_000 {
            let x = rng.gen_range(-1.2..1.2);
            let y = rng.gen_range(-1.2..1.2);
            let z = rng.gen_range(-1.5..2.5);
            let expected = x.abs() < 1.0
                && y.abs() < 1.0
                && z > 0.2 * (3.0 * x).sin() * (2.0 * y).cos()
                && z < 1.2;
            assert_eq!(d.inside(v3(x, y, z)), expected);
        }
    }

    #[test]
    fn cone_cylinder_closed_and_measure() {
        let d = cone_cylinder(1500, 0.05, ConeVariant::FlatBottom).unwrap();
        let report = d.mesh.validate();
        assert!(report.closed);
        assert!(report.closedness_defect < 1e-8, "flux defect {}", report.closedness_defect);
        let exact = (17.0 + 2.0f64.sqrt()) * PI;
        let got = d.mesh.total_measure();
        assert!((got - exact).abs() / exact < 0.02, "measure {got} vs {exact}");
    }

    #[test]
    fn cone_cylinder_refinement_converges() {
        let coarse = cone_cylinder(900, 0.1, ConeVariant::FlatBottom).unwrap();
        let fine = cone_cylinder(3600, 0.1, ConeVariant::FlatBottom).unwrap();
        let a = coarse.mesh.total_measure();
        let b = fine.mesh.total_measure();
        assert!((a - b).abs() / b < 0.01, "coarse {a} fine {b}");
    }

    #[test]
    fn cone_cylinder_normal_orientation() {
        let d = cone_cylinder(1200, 0.05, ConeVariant::FlatBottom).unwrap();
        let mut good = 0usize;
        let total = d.mesh.panel_count();
        for i in 0..total {
            let c = d.mesh.centroid(i);
            let n = d.mesh.normal(i);
            let t = 0.1 * d.mesh.panel_diam(i);
            if d.inside(c - n * t) && !d.inside(c + n * t) {
                good += 1;
            }
        }
        assert!(good as f64 >= 0.99 * total as f64, "only {good}/{total} panels oriented");
    }

    #[test]
    fn cone_cylinder_vertex_variant_closed() {
        let alpha = 7.0 * PI / 4.0;
        let d = cone_cylinder(1500, 0.05, ConeVariant::VertexBottom { alpha }).unwrap();
        let report = d.mesh.validate();
        assert!(report.closed, "vertex-bottom mesh must be closed");
        assert!(report.closedness_defect < 1e-8, "flux defect {}", report.closedness_defect);
        assert!(!d.inside(v3(0.0, 0.5, -1.0)));
        assert!(d.inside(v3(0.0, 0.5, -0.9)));
        assert!(d.inside(v3(0.3, 0.5, -1.2)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(cone_cylinder(100, 0.05, ConeVariant::FlatBottom).is_err());
        assert!(cone_cylinder(1000, 0.05, ConeVariant::VertexBottom { alpha: PI / 2.0 }).is_err());
        assert!(by_name("nonsense", 1000, 0.05).is_err());
    }
}
