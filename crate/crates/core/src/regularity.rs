//! Measured regularity constants of a discrete boundary: the ball-measure
//! ratio sigma(B(x,r))/r^n over sampled centers and radii, and a sampled
//! corkscrew constant.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec;
use crate::la::{v3, Vec3};
use crate::mesh::{MeshIndex, SurfaceMesh};
use crate::rng;
use rand::Rng;

/// Measured regularity constants. `c_lower`/`c_upper` bound the ratio
/// sigma(B(x,r))/r^n over the sampled centers and radii; `corkscrew_c` is the
/// worst sampled interior-ball fraction.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub c_lower: f64,
    pub c_upper: f64,
    pub corkscrew_c: f64,
    pub sampled_radii: Vec<f64>,
}

/// Ratio sigma(B(x,r))/r^n over sampled boundary centers (n = 2 here). Panels
/// count by centroid membership, so the error is O(panel size / r).
pub fn estimate_ad_constants(
    mesh: &SurfaceMesh,
    radii: &[f64],
    sample_count: usize,
) -> Result<RegularityReport> {
    if radii.is_empty() {
        return Err(Error::Domain("empty radii list".into()));
    }
    let mut rng = rng::stream(0x41D0);
    let n_panels = mesh.panel_count();
    let centers: Vec<Vec3> = (0..sample_count.max(1))
        .map(|_| mesh.centroid(rng.gen_range(0..n_panels)))
        .collect();
    let ratios: Vec<f64> = exec::map_indexed(centers.len() * radii.len(), |k| {
        let x = centers[k / radii.len()];
        let r = radii[k % radii.len()];
        mesh.ball_measure(x, r) / r.powi(2)
    });
    let mut c_lower = f64::INFINITY;
    let mut c_upper: f64 = 0.0;
    for &r in &ratios {
        c_lower = c_lower.min(r);
        c_upper = c_upper.max(r);
    }
    Ok(RegularityReport {
        c_lower,
        c_upper,
        corkscrew_c: f64::NAN,
        sampled_radii: radii.to_vec(),
    })
}

/// Sampled corkscrew constant: for boundary balls B(x, r), the best interior
/// ball found by rejection sampling, normalized by r; the report carries the
/// worst case over the sampled (x, r).
pub fn estimate_corkscrew(domain: &Domain, radii: &[f64], sample_count: usize) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::Domain("empty radii list".into()));
    }
    let mesh = &domain.mesh;
    let index = MeshIndex::new(mesh);
    let mut rng = rng::stream(0xC0CC);
    let n_panels = mesh.panel_count();
    let mut worst = f64::INFINITY;
    for _ in 0..sample_count.max(1) {
        let x = mesh.centroid(rng.gen_range(0..n_panels));
        for &r in radii {
            let mut best = 0.0f64;
            for _ in 0..200 {
                let y = x
                    + v3(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ) * r;
                if (y - x).norm() >= r || !domain.inside(y) {
                    continue;
                }
                let d = index.distance(y).min(r - (y - x).norm());
                best = best.max(d / r);
            }
            worst = worst.min(best);
        }
    }
    Ok(worst)
}

/// Full regularity report for a domain.
pub fn regularity_report(
    domain: &Domain,
    radii: &[f64],
    sample_count: usize,
) -> Result<RegularityReport> {
    for &r in radii {
        if !(r > 0.0 && r <= domain.diam_boundary * 1.0000001) {
            return Err(Error::Domain(format!(
                "radius {r} outside (0, diam = {}]",
                domain.diam_boundary
            )));
        }
    }
    let mut report = estimate_ad_constants(&domain.mesh, radii, sample_count)?;
    report.corkscrew_c = estimate_corkscrew(domain, radii, sample_count.min(24))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn flat_patch_ratio_is_pi() {
        // Interior-centered small ball on a flat plane: sigma(B)/r^2 = pi.
        let d = domain::flat_patch(40);
        let mesh = &d.mesh;
        let r = 0.3;
        let ratio = mesh.ball_measure(crate::la::v3(0.0, 0.0, 0.0), r) / (r * r);
        assert_relative_eq!(ratio, PI, epsilon = 0.15);
    }

    #[test]
    fn sphere_cap_ratio_is_pi_for_all_radii() {
        // Euclidean cap of radius r on the unit sphere has area exactly pi r^2.
        let d = domain::ball(4);
        let mesh = &d.mesh;
        let x = mesh.centroid(0);
        for r in [0.3, 0.7, 1.2, 1.8] {
            let ratio = mesh.ball_measure(x, r) / (r * r);
            assert_relative_eq!(ratio, PI, epsilon = 0.12);
        }
    }

    #[test]
    fn degenerate_radius_monotone() {
        let d = domain::ball(2);
        let total = d.mesh.total_measure();
        let x = d.mesh.centroid(0);
        let r1 = 2.5;
        let r2 = 4.0;
        let v1 = d.mesh.ball_measure(x, r1) / (r1 * r1);
        let v2 = d.mesh.ball_measure(x, r2) / (r2 * r2);
        assert_relative_eq!(v1, total / (r1 * r1), epsilon = 1e-12);
        assert!(v2 < v1);
    }

    #[test]
    fn empty_radii_rejected() {
        let d = domain::ball(1);
        assert!(estimate_ad_constants(&d.mesh, &[], 4).is_err());
    }

    #[test]
    fn counterexample_corkscrew_positive() {
        let d = domain::cone_cylinder(900, 0.1, domain::ConeVariant::FlatBottom).unwrap();
        let c = estimate_corkscrew(&d, &[0.5, 1.0], 12).unwrap();
        assert!(c > 0.05, "corkscrew estimate {c}");
    }

    #[test]
    fn counterexample_constants_stable_under_refinement() {
        let radii = [0.25, 0.5, 1.0];
        let coarse = domain::cone_cylinder(800, 0.1, domain::ConeVariant::FlatBottom).unwrap();
        let fine = domain::cone_cylinder(3200, 0.1, domain::ConeVariant::FlatBottom).unwrap();
        let a = estimate_ad_constants(&coarse.mesh, &radii, 40).unwrap();
        let b = estimate_ad_constants(&fine.mesh, &radii, 40).unwrap();
        assert!(a.c_lower / b.c_lower < 2.0 && b.c_lower / a.c_lower < 2.0);
        assert!(a.c_upper / b.c_upper < 2.0 && b.c_upper / a.c_upper < 2.0);
    }
}
