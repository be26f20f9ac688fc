//! Triangulated boundary surfaces: the discrete carrier of the surface
//! measure. Panels are flat triangles with area weights at centroids; all
//! surface integrals in the crate are sums of `value(centroid) * area`.

use crate::error::{Error, Result};
use crate::la::{v3, Vec3};
use std::collections::HashMap;

/// A triangulated surface in ambient 3-space.
///
/// The mesh may be closed (boundary of a solid) or an open patch. Normals
/// follow panel orientation: counterclockwise seen from the outward side.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub panels: Vec<[usize; 3]>,
    areas: Vec<f64>,
    centroids: Vec<Vec3>,
    normals: Vec<Vec3>,
    adjacency: Vec<Vec<usize>>,
    vertex_panels: Vec<Vec<usize>>,
    total_measure: f64,
    diam: f64,
    closed: bool,
}

/// Validation summary for the mesh invariants.
#[derive(Debug, Clone)]
pub struct MeshReport {
    pub max_normal_defect: f64,
    pub min_area: f64,
    /// |sum over panels of normal * area| / total measure; near zero for closed meshes.
    pub closedness_defect: f64,
    pub closed: bool,
    pub panel_count: usize,
    pub vertex_count: usize,
}

impl SurfaceMesh {
    pub fn new(vertices: Vec<Vec3>, panels: Vec<[usize; 3]>) -> Result<Self> {
        if panels.is_empty() {
            return Err(Error::Mesh("empty panel list".into()));
        }
        let nv = vertices.len();
        let mut areas = Vec::with_capacity(panels.len());
        let mut centroids = Vec::with_capacity(panels.len());
        let mut normals = Vec::with_capacity(panels.len());
        for (pi, p) in panels.iter().enumerate() {
            if p.iter().any(|&i| i >= nv) {
                return Err(Error::Mesh(format!("panel {pi} references missing vertex")));
            }
            let [a, b, c] = [vertices[p[0]], vertices[p[1]], vertices[p[2]]];
            let n2 = (b - a).cross(c - a);
            let doubled = n2.norm();
            if doubled <= 0.0 || !doubled.is_finite() {
                return Err(Error::Mesh(format!("degenerate panel {pi}")));
            }
            areas.push(0.5 * doubled);
            centroids.push((a + b + c) / 3.0);
            normals.push(n2 / doubled);
        }
        // Edge map: sorted vertex pair -> panels.
        let mut edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (pi, p) in panels.iter().enumerate() {
            for k in 0..3 {
                let (u, v) = (p[k], p[(k + 1) % 3]);
                let key = (u.min(v), u.max(v));
                edges.entry(key).or_default().push(pi);
            }
        }
        let mut adjacency = vec![Vec::new(); panels.len()];
        let mut closed = true;
        for (_, ps) in edges.iter() {
            if ps.len() != 2 {
                closed = false;
            }
            for i in 0..ps.len() {
                for j in 0..ps.len() {
                    if i != j && !adjacency[ps[i]].contains(&ps[j]) {
                        adjacency[ps[i]].push(ps[j]);
                    }
                }
            }
        }
        for adj in adjacency.iter_mut() {
            adj.sort_unstable();
        }
        let mut vertex_panels = vec![Vec::new(); nv];
        for (pi, p) in panels.iter().enumerate() {
            for &vi in p {
                vertex_panels[vi].push(pi);
            }
        }
        let total_measure = areas.iter().sum();
        let diam = diameter(&vertices);
        Ok(SurfaceMesh {
            vertices,
            panels,
            areas,
            centroids,
            normals,
            adjacency,
            vertex_panels,
            total_measure,
            diam,
            closed,
        })
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self, panel: usize) -> f64 {
        self.areas[panel]
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn centroid(&self, panel: usize) -> Vec3 {
        self.centroids[panel]
    }

    pub fn centroids(&self) -> &[Vec3] {
        &self.centroids
    }

    pub fn normal(&self, panel: usize) -> Vec3 {
        self.normals[panel]
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn adjacency(&self, panel: usize) -> &[usize] {
        &self.adjacency[panel]
    }

    pub fn vertex_panels(&self, vertex: usize) -> &[usize] {
        &self.vertex_panels[vertex]
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn diam(&self) -> f64 {
        self.diam
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn panel_vertices(&self, panel: usize) -> [Vec3; 3] {
        let p = self.panels[panel];
        [self.vertices[p[0]], self.vertices[p[1]], self.vertices[p[2]]]
    }

    pub fn panel_diam(&self, panel: usize) -> f64 {
        let [a, b, c] = self.panel_vertices(panel);
        a.dist(b).max(b.dist(c)).max(c.dist(a))
    }

    pub fn max_panel_diam(&self) -> f64 {
        (0..self.panel_count()).map(|i| self.panel_diam(i)).fold(0.0, f64::max)
    }

    /// Surface-measure weight attached to each vertex (1/3 of incident areas).
    pub fn vertex_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.vertex_count()];
        for (pi, p) in self.panels.iter().enumerate() {
            let share = self.areas[pi] / 3.0;
            for &vi in p {
                w[vi] += share;
            }
        }
        w
    }

    pub fn bbox(&self) -> (Vec3, Vec3) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for &v in &self.vertices {
            lo = lo.min_by_coord(v);
            hi = hi.max_by_coord(v);
        }
        (lo, hi)
    }

    /// sigma(B(x, r)): total area of panels whose centroid lies in the ball.
    pub fn ball_measure(&self, x: Vec3, r: f64) -> f64 {
        let r2 = r * r;
        let mut acc = 0.0;
        for (c, a) in self.centroids.iter().zip(&self.areas) {
            if (*c - x).norm2() <= r2 {
                acc += a;
            }
        }
        acc
    }

    pub fn validate(&self) -> MeshReport {
        let mut flux = Vec3::ZERO;
        let mut max_normal_defect = 0.0f64;
        let mut min_area = f64::INFINITY;
        for i in 0..self.panel_count() {
            flux += self.normals[i] * self.areas[i];
            max_normal_defect = max_normal_defect.max((self.normals[i].norm() - 1.0).abs());
            min_area = min_area.min(self.areas[i]);
        }
        MeshReport {
            max_normal_defect,
            min_area,
            closedness_defect: flux.norm() / self.total_measure,
            closed: self.closed,
            panel_count: self.panel_count(),
            vertex_count: self.vertex_count(),
        }
    }

    /// Serialize in OFF text format.
    pub fn to_off(&self) -> String {
        let mut s = String::with_capacity(32 * self.vertex_count());
        s.push_str("OFF\n");
        s.push_str(&format!("{} {} 0\n", self.vertex_count(), self.panel_count()));
        for v in &self.vertices {
            s.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", v.x, v.y, v.z));
        }
        for p in &self.panels {
            s.push_str(&format!("3 {} {} {}\n", p[0], p[1], p[2]));
        }
        s
    }

    pub fn from_off(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split_whitespace())
            .peekable();
        match tokens.next() {
            Some("OFF") => {}
            _ => return Err(Error::Parse("missing OFF header".into())),
        }
        let mut next_usize = |what: &str, tokens: &mut dyn Iterator<Item = &str>| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("unexpected EOF reading {what}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let nv = next_usize("vertex count", &mut tokens)?;
        let np = next_usize("face count", &mut tokens)?;
        let _ne = next_usize("edge count", &mut tokens)?;
        let mut next_f64 = |tokens: &mut dyn Iterator<Item = &str>| -> Result<f64> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse("unexpected EOF reading coordinate".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad coordinate: {e}")))
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let x = next_f64(&mut tokens)?;
            let y = next_f64(&mut tokens)?;
            let z = next_f64(&mut tokens)?;
            vertices.push(v3(x, y, z));
        }
        let mut panels = Vec::with_capacity(np);
        for _ in 0..np {
            let k = next_usize("face arity", &mut tokens)?;
            if k != 3 {
                return Err(Error::Parse(format!("only triangles supported, got {k}-gon")));
            }
            let a = next_usize("face index", &mut tokens)?;
            let b = next_usize("face index", &mut tokens)?;
            let c = next_usize("face index", &mut tokens)?;
            panels.push([a, b, c]);
        }
        SurfaceMesh::new(vertices, panels)
    }
}

fn diameter(vertices: &[Vec3]) -> f64 {
    // Exact for small meshes, hull-free two-sweep approximation plus bbox
    // correction for large ones (scales only feed coarse decisions).
    if vertices.len() <= 4000 {
        let mut d2 = 0.0f64;
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                d2 = d2.max((vertices[i] - vertices[j]).norm2());
            }
        }
        d2.sqrt()
    } else {
        let far_from = |p: Vec3| -> Vec3 {
            let mut best = vertices[0];
            let mut bd = -1.0;
            for &v in vertices {
                let d = (v - p).norm2();
                if d > bd {
                    bd = d;
                    best = v;
                }
            }
            best
        };
        let a = far_from(vertices[0]);
        let b = far_from(a);
        let c = far_from(b);
        b.dist(c).max(a.dist(b))
    }
}

/// Exact distance from a point to a triangle (Ericson, Real-Time Collision
/// Detection, section 5.1.5).
pub fn point_triangle_distance(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return ap.norm();
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return bp.norm();
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (p - (a + ab * v)).norm();
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return cp.norm();
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (p - (a + ac * w)).norm();
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + (c - b) * w)).norm();
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (p - (a + ab * v + ac * w)).norm()
}

/// Uniform spatial hash over panels, for nearest-panel and distance queries.
pub struct MeshIndex<'m> {
    mesh: &'m SurfaceMesh,
    lo: Vec3,
    cell: f64,
    dims: [usize; 3],
    cells: Vec<Vec<u32>>,
}

impl<'m> MeshIndex<'m> {
    pub fn new(mesh: &'m SurfaceMesh) -> Self {
        let (lo, hi) = mesh.bbox();
        let span = hi - lo;
        let target = (mesh.panel_count() as f64).cbrt().ceil().max(1.0);
        let cell = (span.x.max(span.y).max(span.z) / target).max(mesh.max_panel_diam()).max(1e-12);
        let dims = [
            ((span.x / cell).floor() as usize + 1).max(1),
            ((span.y / cell).floor() as usize + 1).max(1),
            ((span.z / cell).floor() as usize + 1).max(1),
        ];
        let mut cells = vec![Vec::new(); dims[0] * dims[1] * dims[2]];
        for pi in 0..mesh.panel_count() {
            let [a, b, c] = mesh.panel_vertices(pi);
            let plo = a.min_by_coord(b).min_by_coord(c);
            let phi = a.max_by_coord(b).max_by_coord(c);
            let i0 = Self::clampf((plo.x - lo.x) / cell, dims[0]);
            let i1 = Self::clampf((phi.x - lo.x) / cell, dims[0]);
            let j0 = Self::clampf((plo.y - lo.y) / cell, dims[1]);
            let j1 = Self::clampf((phi.y - lo.y) / cell, dims[1]);
            let k0 = Self::clampf((plo.z - lo.z) / cell, dims[2]);
            let k1 = Self::clampf((phi.z - lo.z) / cell, dims[2]);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    for k in k0..=k1 {
                        cells[(i * dims[1] + j) * dims[2] + k].push(pi as u32);
                    }
                }
            }
        }
        MeshIndex { mesh, lo, cell, dims, cells }
    }

    fn clampf(v: f64, n: usize) -> usize {
        (v.floor().max(0.0) as usize).min(n - 1)
    }

    fn cell_of(&self, p: Vec3) -> [usize; 3] {
        [
            Self::clampf((p.x - self.lo.x) / self.cell, self.dims[0]),
            Self::clampf((p.y - self.lo.y) / self.cell, self.dims[1]),
            Self::clampf((p.z - self.lo.z) / self.cell, self.dims[2]),
        ]
    }

    /// Exact distance from `p` to the surface.
    pub fn distance(&self, p: Vec3) -> f64 {
        let home = self.cell_of(p);
        let mut best = f64::INFINITY;
        let mut ring = 0usize;
        loop {
            let mut any = false;
            for i in home[0].saturating_sub(ring)..=(home[0] + ring).min(self.dims[0] - 1) {
                for j in home[1].saturating_sub(ring)..=(home[1] + ring).min(self.dims[1] - 1) {
                    for k in home[2].saturating_sub(ring)..=(home[2] + ring).min(self.dims[2] - 1) {
                        // Only the new shell at this ring.
                        let on_shell = [i, j, k]
                            .iter()
                            .zip(home.iter())
                            .any(|(&a, &h)| a + ring == h || a == h + ring);
                        if ring > 0 && !on_shell {
                            continue;
                        }
                        any = true;
                        for &pi in &self.cells[(i * self.dims[1] + j) * self.dims[2] + k] {
                            let [a, b, c] = self.mesh.panel_vertices(pi as usize);
                            let d = point_triangle_distance(p, a, b, c);
                            best = best.min(d);
                        }
                    }
                }
            }
            // The searched region certainly covers a ball of radius ring*cell
            // around p; stop once no closer panel can exist outside it.
            if best <= ring as f64 * self.cell {
                return best;
            }
            if !any && ring > self.dims[0] + self.dims[1] + self.dims[2] {
                return best;
            }
            ring += 1;
        }
    }

    /// Panels whose bounding cells intersect the ball B(p, r).
    pub fn panels_near(&self, p: Vec3, r: f64) -> Vec<usize> {
        let lo = self.cell_of(p - v3(r, r, r));
        let hi = self.cell_of(p + v3(r, r, r));
        let mut out = Vec::new();
        for i in lo[0]..=hi[0] {
            for j in lo[1]..=hi[1] {
                for k in lo[2]..=hi[2] {
                    out.extend(
                        self.cells[(i * self.dims[1] + j) * self.dims[2] + k]
                            .iter()
                            .map(|&v| v as usize),
                    );
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn triangle_distance_cases() {
        let a = v3(0.0, 0.0, 0.0);
        let b = v3(1.0, 0.0, 0.0);
        let c = v3(0.0, 1.0, 0.0);
        assert_relative_eq!(point_triangle_distance(v3(0.2, 0.2, 0.5), a, b, c), 0.5);
        assert_relative_eq!(point_triangle_distance(v3(-1.0, 0.0, 0.0), a, b, c), 1.0);
        assert_relative_eq!(
            point_triangle_distance(v3(1.0, 1.0, 0.0), a, b, c),
            (0.5f64).sqrt()
        );
    }

    #[test]
    fn sphere_mesh_invariants() {
        let mesh = domain::ball(3).mesh;
        let report = mesh.validate();
        assert!(report.closed);
        assert!(report.max_normal_defect < 1e-12);
        assert!(report.min_area > 0.0);
        assert!(report.closedness_defect < 1e-8);
        // Area converges to 4*pi from below for an inscribed polyhedron.
        let sphere_area = 4.0 * std::f64::consts::PI;
        assert!((mesh.total_measure() - sphere_area).abs() / sphere_area < 0.01);
        assert_relative_eq!(mesh.diam(), 2.0, epsilon = 1e-2);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let mesh = domain::ball(2).mesh;
        for p in 0..mesh.panel_count() {
            assert_eq!(mesh.adjacency(p).len(), 3);
            for &q in mesh.adjacency(p) {
                assert!(mesh.adjacency(q).contains(&p));
            }
        }
    }

    #[test]
    fn index_distance_matches_bruteforce() {
        let mesh = domain::ball(2).mesh;
        let index = MeshIndex::new(&mesh);
        let probes = [
            v3(0.0, 0.0, 0.0),
            v3(0.5, 0.2, -0.1),
            v3(2.0, 0.0, 0.0),
            v3(-0.9, 0.1, 0.0),
        ];
        for p in probes {
            let brute = (0..mesh.panel_count())
                .map(|i| {
                    let [a, b, c] = mesh.panel_vertices(i);
                    point_triangle_distance(p, a, b, c)
                })
                .fold(f64::INFINITY, f64::min);
            assert_relative_eq!(index.distance(p), brute, epsilon = 1e-12);
        }
    }

    #[test]
    fn off_round_trip() {
        let mesh = domain::ball(1).mesh;
        let text = mesh.to_off();
        let back = SurfaceMesh::from_off(&text).unwrap();
        assert_eq!(back.panel_count(), mesh.panel_count());
        assert_relative_eq!(back.total_measure(), mesh.total_measure(), epsilon = 1e-15);
        assert_eq!(back.to_off(), text);
    }

    proptest! {
        #[test]
        fn point_triangle_distance_is_metric_lower_bound(
            px in -2.0f64..2.0, py in -2.0f64..2.0, pz in -2.0f64..2.0,
        ) {
            // Distance to the triangle never exceeds distance to any vertex
            // and is nonnegative.
            let a = v3(0.0, 0.0, 0.0);
            let b = v3(1.0, 0.1, 0.0);
            let c = v3(0.2, 1.0, 0.3);
            let p = v3(px, py, pz);
            let d = point_triangle_distance(p, a, b, c);
            prop_assert!(d >= 0.0);
            prop_assert!(d <= p.dist(a) + 1e-12);
            prop_assert!(d <= p.dist(b) + 1e-12);
            prop_assert!(d <= p.dist(c) + 1e-12);
        }
    }
}
