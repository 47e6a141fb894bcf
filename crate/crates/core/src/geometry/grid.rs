use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub const fn new(x: f64, xi: f64) -> Self {
        PhasePoint { x, xi }
    }

    pub fn norm(&self) -> f64 {
        libm::hypot(self.x, self.xi)
    }

    /// Image under J(x, ξ) = (ξ, −x).
    pub fn j(&self) -> Self {
        PhasePoint::new(self.xi, -self.x)
    }

    /// Preimage under J.
    pub fn j_inv(&self) -> Self {
        PhasePoint::new(-self.xi, self.x)
    }
}

/// Centred uniform lattice on [−x_max, x_max] × [−xi_max, xi_max].
///
/// Cells are stored row-major with ξ as the row index: `index(i, j) = j·nx + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGrid {
    pub x_max: f64,
    pub xi_max: f64,
    pub nx: usize,
    pub nxi: usize,
}

impl Default for PhaseGrid {
    fn default() -> Self {
        PhaseGrid { x_max: 20.0, xi_max: 20.0, nx: 257, nxi: 257 }
    }
}

impl PhaseGrid {
    pub fn new(x_max: f64, xi_max: f64, nx: usize, nxi: usize) -> Result<Self> {
        let g = PhaseGrid { x_max, xi_max, nx, nxi };
        g.validate()?;
        Ok(g)
    }

    pub fn square(r: f64, n: usize) -> Result<Self> {
        PhaseGrid::new(r, r, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > 0.0 && self.xi_max > 0.0 && self.x_max.is_finite() && self.xi_max.is_finite()) {
            return Err(invalid("phase grid extents must be positive"));
        }
        if self.nx < 8 || self.nxi < 8 {
            return Err(invalid("phase grid needs at least 8 points per axis"));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.x_max / (self.nx - 1) as f64
    }
    pub fn hxi(&self) -> f64 {
        2.0 * self.xi_max / (self.nxi - 1) as f64
    }
    pub fn len(&self) -> usize {
        self.nx * self.nxi
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn x(&self, i: usize) -> f64 {
        -self.x_max + i as f64 * self.hx()
    }
    pub fn xi(&self, j: usize) -> f64 {
        -self.xi_max + j as f64 * self.hxi()
    }
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }
    pub fn point(&self, i: usize, j: usize) -> PhasePoint {
        PhasePoint::new(self.x(i), self.xi(j))
    }
    pub fn point_at(&self, idx: usize) -> PhasePoint {
        let (i, j) = self.coords(idx);
        self.point(i, j)
    }

    /// Fractional lattice coordinates of a point.
    pub fn frac(&self, z: PhasePoint) -> (f64, f64) {
        ((z.x + self.x_max) / self.hx(), (z.xi + self.xi_max) / self.hxi())
    }

    /// Nearest lattice cell, if the point lies within half a cell of the grid.
    pub fn nearest(&self, z: PhasePoint) -> Option<(usize, usize)> {
        let (fi, fj) = self.frac(z);
        let (ri, rj) = (libm::round(fi), libm::round(fj));
        if ri < 0.0 || rj < 0.0 || ri > (self.nx - 1) as f64 || rj > (self.nxi - 1) as f64 {
            return None;
        }
        Some((ri as usize, rj as usize))
    }

    pub fn contains(&self, z: PhasePoint) -> bool {
        z.x.abs() <= self.x_max && z.xi.abs() <= self.xi_max
    }

    /// Grid of the J-image: axes swapped.
    pub fn transposed(&self) -> Self {
        PhaseGrid { x_max: self.xi_max, xi_max: self.x_max, nx: self.nxi, nxi: self.nx }
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.len()).map(move |idx| self.point_at(idx))
    }

    /// Lattice index of J(point(i, j)) on the transposed grid.
    pub fn j_index(&self, i: usize, j: usize) -> usize {
        // J(x_i, ξ_j) = (ξ_j, −x_i): new column j, new row nx−1−i
        let t = self.transposed();
        t.index(j, self.nx - 1 - i)
    }
}
