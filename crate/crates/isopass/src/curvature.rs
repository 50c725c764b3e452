//! Mean curvature estimation by local quadric fits over boundary atoms.
//!
//! Sign convention: H is the trace of the shape operator taken with the
//! outward normal as the graph direction, so a disk of radius r has
//! H = +1/r, a sphere H = +2/r, and a geodesic slab wall H = 0. Under this
//! convention a positive H is the inward normal speed of perimeter descent
//! (disks shrink).

use crate::boundary::BoundaryVarifold;
use crate::sdf::PointLookup;
use nalgebra::{DMatrix, DVector, Matrix2};

/// Fit window radius in cells.
pub const FIT_RADIUS_CELLS: f64 = 6.0;
pub const MIN_NEIGHBORS_2D: usize = 8;
pub const MIN_NEIGHBORS_3D: usize = 20;

#[derive(Debug, Clone)]
pub struct CurvatureEstimate {
    /// Per-atom mean curvature (sum of principal curvatures in 3D).
    pub h: Vec<f64>,
    /// Per-atom squared norm of the second fundamental form: H² in 2D,
    /// κ₁² + κ₂² in 3D.
    pub shape_sq: Vec<f64>,
    /// Atoms with enough neighbors for a trustworthy fit.
    pub reliable: Vec<bool>,
}

impl CurvatureEstimate {
    pub fn reliable_fraction(&self) -> f64 {
        if self.reliable.is_empty() {
            return 1.0;
        }
        self.reliable.iter().filter(|&&r| r).count() as f64 / self.reliable.len() as f64
    }

    /// Weight-averaged mean and standard deviation of H over reliable atoms.
    pub fn h_stats(&self, boundary: &BoundaryVarifold) -> (f64, f64) {
        let mut wsum = 0.0;
        let mut mean = 0.0;
        for (i, a) in boundary.atoms.iter().enumerate() {
            if self.reliable[i] {
                wsum += a.weight;
                mean += a.weight * self.h[i];
            }
        }
        if wsum == 0.0 {
            return (0.0, 0.0);
        }
        mean /= wsum;
        let mut var = 0.0;
        for (i, a) in boundary.atoms.iter().enumerate() {
            if self.reliable[i] {
                var += a.weight * (self.h[i] - mean).powi(2);
            }
        }
        (mean, (var / wsum).sqrt())
    }
}

/// Estimate per-atom curvature by weighted least-squares quadric fits over
/// the atoms within [`FIT_RADIUS_CELLS`] cells.
pub fn mean_curvature(boundary: &BoundaryVarifold) -> CurvatureEstimate {
    let n = boundary.len();
    if n == 0 {
        return CurvatureEstimate { h: Vec::new(), shape_sq: Vec::new(), reliable: Vec::new() };
    }
    let grid = &boundary.grid;
    let dim = grid.dim();
    let radius = FIT_RADIUS_CELLS * grid.h_max();
    let min_nb = if dim == 2 { MIN_NEIGHBORS_2D } else { MIN_NEIGHBORS_3D };
    let points = boundary.points();
    let lookup = PointLookup::build(grid, &points);
    let sigma_w = 0.5 * radius;

    let mut h = vec![0.0; n];
    let mut shape_sq = vec![0.0; n];
    let mut reliable = vec![false; n];

    for i in 0..n {
        let a = &boundary.atoms[i];
        let nb = lookup.within(grid, a.point, radius);
        if nb.len() < min_nb {
            continue;
        }
        let nrm = a.normal;
        if dim == 2 {
            let tang = [-nrm[1], nrm[0]];
            // Weighted quartic graph fit y = Σ cₖ xᵏ in the (tangent, normal)
            // frame, coordinates normalized by the window radius. The quartic
            // terms absorb the circle's higher-order shape, so the curvature
            // read off c₂ is unbiased even when the window is a sizable
            // fraction of the osculating radius.
            let mut ata = [[0.0f64; 5]; 5];
            let mut atb = [0.0f64; 5];
            for &j in &nb {
                let d = grid.delta(a.point, boundary.atoms[j].point);
                let x = (d[0] * tang[0] + d[1] * tang[1]) / radius;
                let y = (d[0] * nrm[0] + d[1] * nrm[1]) / radius;
                let w = boundary.atoms[j].weight
                    * (-(x * x + y * y) * radius * radius / (2.0 * sigma_w * sigma_w)).exp();
                let basis = [1.0, x, x * x, x * x * x, x * x * x * x];
                for r in 0..5 {
                    for c in 0..5 {
                        ata[r][c] += w * basis[r] * basis[c];
                    }
                    atb[r] += w * basis[r] * y;
                }
            }
            let m = nalgebra::Matrix5::from_fn(|r, c| ata[r][c]);
            let rhs = nalgebra::Vector5::from_column_slice(&atb);
            if let Some(sol) = m.lu().solve(&rhs) {
                let slope = sol[1];
                let kappa = -(2.0 * sol[2] / radius) / (1.0 + slope * slope).powf(1.5);
                h[i] = kappa;
                shape_sq[i] = kappa * kappa;
                reliable[i] = true;
            }
        } else {
            // frame (t1, t2, n)
            let t1 = {
                let pick = if nrm[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let d = pick[0] * nrm[0] + pick[1] * nrm[1] + pick[2] * nrm[2];
                let mut v = [pick[0] - d * nrm[0], pick[1] - d * nrm[1], pick[2] - d * nrm[2]];
                let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                v.iter_mut().for_each(|x| *x /= vn);
                v
            };
            let t2 = [
                nrm[1] * t1[2] - nrm[2] * t1[1],
                nrm[2] * t1[0] - nrm[0] * t1[2],
                nrm[0] * t1[1] - nrm[1] * t1[0],
            ];
            // z = c0 x^2 + c1 xy + c2 y^2 + c3 x + c4 y + c5
            let mut rows = DMatrix::zeros(nb.len(), 6);
            let mut rhs = DVector::zeros(nb.len());
            for (k, &j) in nb.iter().enumerate() {
                let d = grid.delta(a.point, boundary.atoms[j].point);
                let x = d[0] * t1[0] + d[1] * t1[1] + d[2] * t1[2];
                let y = d[0] * t2[0] + d[1] * t2[1] + d[2] * t2[2];
                let z = d[0] * nrm[0] + d[1] * nrm[1] + d[2] * nrm[2];
                let w = (boundary.atoms[j].weight
                    * (-(x * x + y * y + z * z) / (2.0 * sigma_w * sigma_w)).exp())
                .sqrt();
                rows[(k, 0)] = w * x * x;
                rows[(k, 1)] = w * x * y;
                rows[(k, 2)] = w * y * y;
                rows[(k, 3)] = w * x;
                rows[(k, 4)] = w * y;
                rows[(k, 5)] = w;
                rhs[k] = w * z;
            }
            let ata = rows.transpose() * &rows;
            let atb = rows.transpose() * rhs;
            if let Some(sol) = ata.lu().solve(&atb) {
                let (c0, c1, c2, c3, c4) = (sol[0], sol[1], sol[2], sol[3], sol[4]);
                let slope = (1.0 + c3 * c3 + c4 * c4).powf(1.5);
                let second = Matrix2::new(-2.0 * c0, -c1, -c1, -2.0 * c2) / slope;
                let eig = second.symmetric_eigenvalues();
                let (k1, k2) = (eig[0], eig[1]);
                h[i] = k1 + k2;
                shape_sq[i] = k1 * k1 + k2 * k2;
                reliable[i] = true;
            }
        }
    }
    CurvatureEstimate { h, shape_sq, reliable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::extract_boundary;
    use crate::field::IndicatorField;
    use crate::grid::TorusGrid;

    #[test]
    fn disk_curvature_5_percent() {
        let g = TorusGrid::unit(2, 256).unwrap();
        let b = IndicatorField::ball(&g, [0.5, 0.5, 0.0], 0.2).unwrap();
        let bd = extract_boundary(&b);
        let est = mean_curvature(&bd);
        let (mean, std) = est.h_stats(&bd);
        assert!((mean - 5.0).abs() / 5.0 <= 0.05, "mean H {mean}");
        assert!(std / mean.abs() <= 0.05, "std/mean {}", std / mean.abs());
    }

    #[test]
    fn slab_curvature_near_zero() {
        let g = TorusGrid::unit(2, 256).unwrap();
        let s = IndicatorField::slab(&g, 0, 0.2, 0.5).unwrap();
        let bd = extract_boundary(&s);
        let est = mean_curvature(&bd);
        let (mean, _) = est.h_stats(&bd);
        assert!(mean.abs() <= 0.1, "mean H {mean}");
    }

    #[test]
    fn curvature_scales_with_radius() {
        let g = TorusGrid::unit(2, 256).unwrap();
        for r in [8.0 / 256.0, 0.1, 0.25, 0.4] {
            let b = IndicatorField::ball(&g, [0.5, 0.5, 0.0], r).unwrap();
            let bd = extract_boundary(&b);
            let est = mean_curvature(&bd);
            let (mean, _) = est.h_stats(&bd);
            assert!(
                (mean - 1.0 / r).abs() * r <= 0.05,
                "r={r}: mean {mean} vs {}",
                1.0 / r
            );
        }
    }

    #[test]
    fn sphere_curvature_8_percent() {
        let g = TorusGrid::unit(3, 64).unwrap();
        let b = IndicatorField::ball(&g, [0.5, 0.5, 0.5], 0.25).unwrap();
        let bd = extract_boundary(&b);
        let est = mean_curvature(&bd);
        let (mean, _) = est.h_stats(&bd);
        assert!((mean - 8.0).abs() / 8.0 <= 0.08, "mean H {mean} vs 8");
    }
}
