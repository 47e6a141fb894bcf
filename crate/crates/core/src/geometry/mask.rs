use super::{AnisoParams, PhaseGrid, PhasePoint, Region};
use crate::error::{Error, Result};
use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Predicate behind a [`RegionMask`].
#[derive(Clone)]
pub enum Shape {
    Analytic(Region),
    /// Existential box predicate over a finite set of source points.
    Neighborhood { sources: Arc<Vec<PhasePoint>>, eps: f64, params: AnisoParams },
    Not(Box<Shape>),
    And(Vec<Shape>),
    Or(Vec<Shape>),
    Custom(Arc<dyn Fn(PhasePoint) -> bool + Send + Sync>),
    /// Nearest-cell lookup into a stored raster.
    Raster { grid: PhaseGrid, raster: Arc<Vec<bool>> },
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Analytic(r) => f.debug_tuple("Analytic").field(r).finish(),
            Shape::Neighborhood { sources, eps, params } => f
                .debug_struct("Neighborhood")
                .field("sources", &sources.len())
                .field("eps", eps)
                .field("params", params)
                .finish(),
            Shape::Not(s) => f.debug_tuple("Not").field(s).finish(),
            Shape::And(v) => f.debug_tuple("And").field(v).finish(),
            Shape::Or(v) => f.debug_tuple("Or").field(v).finish(),
            Shape::Custom(_) => f.write_str("Custom"),
            Shape::Raster { grid, .. } => f.debug_struct("Raster").field("grid", grid).finish(),
        }
    }
}

impl Shape {
    pub fn contains(&self, z: PhasePoint) -> bool {
        match self {
            Shape::Analytic(r) => r.contains(z),
            Shape::Neighborhood { sources, eps, params } => {
                let (k, rho) = (params.k() as f64, params.rho());
                let s = params.sigma();
                sources.iter().any(|y| {
                    let th = 1.0 + libm::fabs(y.x) + libm::pow(libm::fabs(y.xi), params.m() as f64 / k);
                    libm::fabs(z.x - y.x) < eps * libm::pow(th, rho)
                        && libm::fabs(z.xi - y.xi) < eps * libm::pow(th, rho * s)
                })
            }
            Shape::Not(s) => !s.contains(z),
            Shape::And(v) => v.iter().all(|s| s.contains(z)),
            Shape::Or(v) => v.iter().any(|s| s.contains(z)),
            Shape::Custom(f) => f(z),
            Shape::Raster { grid, raster } => match grid.nearest(z) {
                Some((i, j)) => raster[grid.index(i, j)],
                None => false,
            },
        }
    }
}

/// A phase-plane region: predicate plus its raster on a [`PhaseGrid`].
#[derive(Debug, Clone)]
pub struct RegionMask {
    grid: PhaseGrid,
    raster: Vec<bool>,
    shape: Shape,
}

impl RegionMask {
    pub fn from_shape(shape: Shape, grid: PhaseGrid) -> Self {
        let raster = grid.points().map(|z| shape.contains(z)).collect();
        RegionMask { grid, raster, shape }
    }

    pub fn from_region(region: Region, grid: PhaseGrid) -> Self {
        RegionMask::from_shape(Shape::Analytic(region), grid)
    }

    pub fn from_predicate(grid: PhaseGrid, f: impl Fn(PhasePoint) -> bool + Send + Sync + 'static) -> Self {
        RegionMask::from_shape(Shape::Custom(Arc::new(f)), grid)
    }

    /// Mask whose predicate is a lookup into the given raster.
    pub fn from_raster(grid: PhaseGrid, raster: Vec<bool>) -> Result<Self> {
        if raster.len() != grid.len() {
            return Err(Error::MismatchedGrids("raster length does not match grid".into()));
        }
        let shape = Shape::Raster { grid, raster: Arc::new(raster.clone()) };
        Ok(RegionMask { grid, raster, shape })
    }

    /// Pairs an explicit raster with a predicate; used where the raster is a
    /// deliberate superset of the predicate's lattice values.
    pub(crate) fn from_parts(grid: PhaseGrid, raster: Vec<bool>, shape: Shape) -> Self {
        RegionMask { grid, raster, shape }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }
    pub fn raster(&self) -> &[bool] {
        &self.raster
    }
    pub fn shape(&self) -> &Shape {
        &self.shape
    }
    pub fn region(&self) -> Option<&Region> {
        match &self.shape {
            Shape::Analytic(r) => Some(r),
            _ => None,
        }
    }

    pub fn contains(&self, z: PhasePoint) -> bool {
        self.shape.contains(z)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.raster[self.grid.index(i, j)]
    }

    pub fn count(&self) -> usize {
        self.raster.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.raster.iter().any(|&b| b)
    }

    pub fn complement(&self) -> RegionMask {
        RegionMask {
            grid: self.grid,
            raster: self.raster.iter().map(|b| !b).collect(),
            shape: Shape::Not(Box::new(self.shape.clone())),
        }
    }

    fn check_grid(&self, other: &RegionMask) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::MismatchedGrids("region masks live on different grids".into()));
        }
        Ok(())
    }

    pub fn intersection(&self, other: &RegionMask) -> Result<RegionMask> {
        self.check_grid(other)?;
        Ok(RegionMask {
            grid: self.grid,
            raster: self.raster.iter().zip(&other.raster).map(|(a, b)| *a && *b).collect(),
            shape: Shape::And(alloc::vec![self.shape.clone(), other.shape.clone()]),
        })
    }

    pub fn union(&self, other: &RegionMask) -> Result<RegionMask> {
        self.check_grid(other)?;
        Ok(RegionMask {
            grid: self.grid,
            raster: self.raster.iter().zip(&other.raster).map(|(a, b)| *a || *b).collect(),
            shape: Shape::Or(alloc::vec![self.shape.clone(), other.shape.clone()]),
        })
    }

    /// Raster inclusion self ⊆ other.
    pub fn is_subset_of(&self, other: &RegionMask) -> Result<bool> {
        self.check_grid(other)?;
        Ok(self.raster.iter().zip(&other.raster).all(|(a, b)| !*a || *b))
    }

    /// Image under J(x, ξ) = (ξ, −x), exact on the lattice of the transposed grid.
    pub fn j_image(&self) -> RegionMask {
        let t = self.grid.transposed();
        let mut raster = alloc::vec![false; t.len()];
        for j in 0..self.grid.nxi {
            for i in 0..self.grid.nx {
                raster[self.grid.j_index(i, j)] = self.get(i, j);
            }
        }
        let inner = self.shape.clone();
        let shape = Shape::Custom(Arc::new(move |z: PhasePoint| inner.contains(z.j_inv())));
        RegionMask { grid: t, raster, shape }
    }

    /// Run-length encoding of the row-major raster: value of the first run and run lengths.
    pub fn to_rle(&self) -> (bool, Vec<usize>) {
        let mut runs = Vec::new();
        let first = self.raster.first().copied().unwrap_or(false);
        let mut cur = first;
        let mut len = 0usize;
        for &b in &self.raster {
            if b == cur {
                len += 1;
            } else {
                runs.push(len);
                cur = b;
                len = 1;
            }
        }
        runs.push(len);
        (first, runs)
    }

    pub fn from_rle(grid: PhaseGrid, first: bool, runs: &[usize]) -> Result<Self> {
        let mut raster = Vec::with_capacity(grid.len());
        let mut cur = first;
        for &r in runs {
            raster.extend(core::iter::repeat(cur).take(r));
            cur = !cur;
        }
        RegionMask::from_raster(grid, raster)
    }
}
