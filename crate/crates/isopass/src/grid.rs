//! Discretized flat tori.
//!
//! A grid is a periodic box `[0,L₀) × [0,L₁) (× [0,L₂))` sampled at cell
//! centers. 2D grids are stored as 3D grids with a single z-layer of unit
//! period, so indexing and cell volumes are uniform across dimensions.

use crate::error::{Error, Result};
use std::sync::Arc;

/// Points and vectors are `[f64; 3]`; the z component is 0 on 2D grids.
pub type Point = [f64; 3];

pub const MIN_RESOLUTION: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    res: [usize; 3],
    lengths: [f64; 3],
    spacing: [f64; 3],
    cell_volume: f64,
}

impl TorusGrid {
    pub fn new_2d(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Self>> {
        Self::new(2, [nx, ny, 1], [lx, ly, 1.0])
    }

    pub fn new_3d(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<Arc<Self>> {
        Self::new(3, [nx, ny, nz], [lx, ly, lz])
    }

    /// Unit torus `[0,1)^d` at resolution `n` per axis.
    pub fn unit(dim: usize, n: usize) -> Result<Arc<Self>> {
        match dim {
            2 => Self::new_2d(n, n, 1.0, 1.0),
            3 => Self::new_3d(n, n, n, 1.0, 1.0, 1.0),
            _ => Err(Error::Parameter(format!("dim must be 2 or 3, got {dim}"))),
        }
    }

    fn new(dim: usize, res: [usize; 3], lengths: [f64; 3]) -> Result<Arc<Self>> {
        if dim != 2 && dim != 3 {
            return Err(Error::Parameter(format!("dim must be 2 or 3, got {dim}")));
        }
        for a in 0..dim {
            if res[a] < MIN_RESOLUTION {
                return Err(Error::Parameter(format!(
                    "resolution {} on axis {a} below minimum {MIN_RESOLUTION}",
                    res[a]
                )));
            }
            if !(lengths[a] > 0.0) {
                return Err(Error::Parameter(format!(
                    "length {} on axis {a} must be positive",
                    lengths[a]
                )));
            }
        }
        let mut spacing = [1.0; 3];
        let mut cell_volume = 1.0;
        for a in 0..dim {
            spacing[a] = lengths[a] / res[a] as f64;
            cell_volume *= spacing[a];
        }
        Ok(Arc::new(TorusGrid { dim, res, lengths, spacing, cell_volume }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn res(&self) -> [usize; 3] {
        self.res
    }

    #[inline]
    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    #[inline]
    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    /// Smallest cell spacing over the active axes.
    #[inline]
    pub fn h_min(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing[a]).fold(f64::INFINITY, f64::min)
    }

    #[inline]
    pub fn h_max(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing[a]).fold(0.0, f64::max)
    }

    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.lengths[a]).product()
    }

    #[inline]
    pub fn ncells(&self) -> usize {
        self.res[0] * self.res[1] * self.res[2]
    }

    #[inline]
    pub fn index(&self, c: [usize; 3]) -> usize {
        (c[2] * self.res[1] + c[1]) * self.res[0] + c[0]
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let x = idx % self.res[0];
        let rest = idx / self.res[0];
        let y = rest % self.res[1];
        let z = rest / self.res[1];
        [x, y, z]
    }

    /// Periodic index on one axis.
    #[inline]
    pub fn wrap(&self, i: isize, axis: usize) -> usize {
        i.rem_euclid(self.res[axis] as isize) as usize
    }

    /// Flat index of the cell offset from `c` by `d` cells per axis, with wrap.
    #[inline]
    pub fn neighbor(&self, c: [usize; 3], d: [isize; 3]) -> usize {
        let x = self.wrap(c[0] as isize + d[0], 0);
        let y = self.wrap(c[1] as isize + d[1], 1);
        let z = self.wrap(c[2] as isize + d[2], 2);
        self.index([x, y, z])
    }

    #[inline]
    pub fn cell_center(&self, idx: usize) -> Point {
        let c = self.coords(idx);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = (c[a] as f64 + 0.5) * self.spacing[a];
        }
        p
    }

    /// Wrap a point coordinate-wise into the fundamental domain.
    pub fn wrap_point(&self, p: Point) -> Point {
        let mut q = [0.0; 3];
        for a in 0..self.dim {
            q[a] = p[a].rem_euclid(self.lengths[a]);
        }
        q
    }

    /// Minimum-image displacement `b - a` per axis, each component in `[-L/2, L/2)`.
    #[inline]
    pub fn delta(&self, a: Point, b: Point) -> [f64; 3] {
        let mut d = [0.0; 3];
        for ax in 0..self.dim {
            let l = self.lengths[ax];
            let mut v = (b[ax] - a[ax]) % l;
            if v < -l / 2.0 {
                v += l;
            } else if v >= l / 2.0 {
                v -= l;
            }
            d[ax] = v;
        }
        d
    }

    /// Periodic (geodesic) distance between two points.
    #[inline]
    pub fn distance(&self, a: Point, b: Point) -> f64 {
        let d = self.delta(a, b);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    /// Cell containing a point (coordinates wrapped first).
    pub fn cell_of(&self, p: Point) -> usize {
        let q = self.wrap_point(p);
        let mut c = [0usize; 3];
        for a in 0..self.dim {
            let i = (q[a] / self.spacing[a]).floor() as isize;
            c[a] = self.wrap(i, a);
        }
        self.index(c)
    }

    pub fn same_grid(&self, other: &TorusGrid) -> bool {
        self == other
    }
}
