//! Short-time Fourier analysis and synthesis with the normalisation
//! V_φu(x, ξ) = (2π)^{-1/2} ∫ u(y) conj(φ(y − x)) e^{−iyξ} dy.
//!
//! Both directions are evaluated by direct quadrature over the spatial grid,
//! restricted to the window support, at exactly the phase-grid lattice. The
//! discrete synthesis is the exact adjoint of the discrete analysis.

use crate::error::{invalid, Error, Result};
use crate::geometry::{PhaseGrid, Region};
use crate::signal::{SampledSignal, SpatialGrid};
use crate::special::hermite_function;
use crate::Complex64;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowKind {
    Gaussian,
    Hermite { order: usize },
}

impl Default for WindowKind {
    fn default() -> Self {
        WindowKind::Gaussian
    }
}

impl WindowKind {
    fn base(&self, y: f64) -> f64 {
        match self {
            WindowKind::Gaussian => PI.powf(-0.25) * (-0.5 * y * y).exp(),
            WindowKind::Hermite { order } => hermite_function(*order, y),
        }
    }

    fn order(&self) -> usize {
        match self {
            WindowKind::Gaussian => 0,
            WindowKind::Hermite { order } => *order,
        }
    }

    /// Radius beyond which the base window is below 1e-17 of its peak.
    fn support(&self) -> f64 {
        let peak = (0..400).map(|i| self.base(0.05 * i as f64).abs()).fold(0.0, f64::max);
        let mut r = 0.0;
        for i in 0..1200 {
            let y = 0.05 * i as f64;
            if self.base(y).abs() >= 1e-17 * peak {
                r = y;
            }
        }
        r + 0.05
    }
}

/// Window φ(y) = c·|A|^{1/2}·φ₀(Ay), with φ₀ a Gaussian or Hermite function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub kind: WindowKind,
    pub dilation: f64,
    pub phase: Complex64,
    pub samples: SampledSignal,
    pub l2_norm: f64,
    reach: f64,
}

impl Window {
    pub fn new(kind: WindowKind, grid: SpatialGrid) -> Result<Self> {
        Window::build(kind, 1.0, Complex64::new(1.0, 0.0), grid)
    }

    pub fn gaussian(grid: SpatialGrid) -> Self {
        Window::new(WindowKind::Gaussian, grid).expect("gaussian window")
    }

    fn build(kind: WindowKind, dilation: f64, phase: Complex64, grid: SpatialGrid) -> Result<Self> {
        if dilation == 0.0 || !dilation.is_finite() {
            return Err(invalid("window dilation must be finite and non-zero"));
        }
        let reach = kind.support() / dilation.abs();
        let mut w = Window {
            kind,
            dilation,
            phase,
            samples: SampledSignal::zeros(grid),
            l2_norm: 0.0,
            reach,
        };
        w.samples = SampledSignal::from_fn(grid, "window", |y| w.eval(y));
        w.l2_norm = w.samples.l2_norm();
        if !(w.l2_norm > 0.0) {
            return Err(invalid("window vanishes on the grid"));
        }
        Ok(w)
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        self.phase * (self.dilation.abs().sqrt() * self.kind.base(self.dilation * y))
    }

    pub fn grid(&self) -> SpatialGrid {
        self.samples.grid
    }

    /// Half-width of the numerical support.
    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// μ_A φ(y) = |A|^{1/2} φ(Ay), sampled on `grid`.
    pub fn dilated(&self, a: f64, grid: SpatialGrid) -> Result<Self> {
        Window::build(self.kind.clone(), self.dilation * a, self.phase, grid)
    }

    /// Fourier transform of the window, sampled on `grid`.
    ///
    /// Hermite functions are eigenfunctions: F h_n = (−i)^n h_n, and
    /// F(μ_A f) = μ_{1/A} F f.
    pub fn fourier(&self, grid: SpatialGrid) -> Result<Self> {
        let n = self.kind.order() % 4;
        let rot = [Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)][n];
        Window::build(self.kind.clone(), 1.0 / self.dilation, self.phase * rot, grid)
    }
}

/// STFT values on a phase grid, row-major with ξ as the row index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct STFTField {
    pub grid: PhaseGrid,
    pub values: Vec<Complex64>,
    pub window: WindowKind,
    pub source_label: String,
}

impl STFTField {
    pub fn new(grid: PhaseGrid, values: Vec<Complex64>, window: WindowKind, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::MismatchedGrids("field size does not match phase grid".into()));
        }
        Ok(STFTField { grid, values, window, source_label: label.into() })
    }

    pub fn zeros(grid: PhaseGrid, window: WindowKind) -> Self {
        STFTField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], window, source_label: "zero".into() }
    }

    /// Indicator of a region on the phase grid.
    pub fn indicator(region: &Region, grid: PhaseGrid, window: &Window) -> Self {
        let values = grid
            .points()
            .map(|z| Complex64::new(if region.contains(z) { 1.0 } else { 0.0 }, 0.0))
            .collect();
        STFTField { grid, values, window: window.kind.clone(), source_label: "indicator".into() }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise product with a real symbol sampled on the same grid.
    pub fn multiplied(&self, symbol: &[f64]) -> Result<Self> {
        if symbol.len() != self.values.len() {
            return Err(Error::MismatchedGrids("symbol size does not match field".into()));
        }
        let values = self.values.iter().zip(symbol).map(|(v, a)| v * *a).collect();
        Ok(STFTField { grid: self.grid, values, window: self.window.clone(), source_label: self.source_label.clone() })
    }
}

/// Exact field of δ₀: V_φδ₀(x, ξ) = (2π)^{-1/2} conj(φ(−x)).
pub fn exact_delta_field(window: &Window, grid: PhaseGrid) -> STFTField {
    let c = (2.0 * PI).powf(-0.5);
    let values = grid.points().map(|z| window.eval(-z.x).conj() * c).collect();
    STFTField { grid, values, window: window.kind.clone(), source_label: "delta(exact)".into() }
}

/// Range of spatial indices within the window reach of position x.
fn support(grid: &SpatialGrid, x: f64, reach: f64) -> core::ops::Range<usize> {
    let h = grid.h();
    let lo = ((x - reach + grid.x_max) / h).ceil().max(0.0) as usize;
    let hi = (((x + reach + grid.x_max) / h).floor() + 1.0).max(0.0) as usize;
    lo.min(grid.n)..hi.min(grid.n)
}

const ANCHOR: usize = 16;

pub fn analyze(u: &SampledSignal, w: &Window, grid: PhaseGrid) -> Result<STFTField> {
    if u.grid != w.grid() {
        return Err(Error::MismatchedGrids("signal and window use different spatial grids".into()));
    }
    grid.validate()?;
    let sg = u.grid;
    let h = sg.h();
    let c = (2.0 * PI).powf(-0.5) * h;
    let (xi0, hxi) = (grid.xi(0), grid.hxi());
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.nxi];
    for i in 0..grid.nx {
        let x = grid.x(i);
        acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for n in support(&sg, x, w.reach()) {
            let un = u.values[n];
            if un.re == 0.0 && un.im == 0.0 {
                continue;
            }
            let y = sg.x(n);
            let b = un * w.eval(y - x).conj();
            let r = Complex64::from_polar(1.0, -y * hxi);
            // the recurrence is re-anchored every block to keep round-off from piling up
            for (blk, chunk) in acc.chunks_mut(ANCHOR).enumerate() {
                let mut a = b * Complex64::from_polar(c, -y * (xi0 + (blk * ANCHOR) as f64 * hxi));
                for s in chunk.iter_mut() {
                    *s += a;
                    a *= r;
                }
            }
        }
        for (j, s) in acc.iter().enumerate() {
            values[grid.index(i, j)] = *s;
        }
    }
    Ok(STFTField { grid, values, window: w.kind.clone(), source_label: u.label.clone() })
}

/// Adjoint STFT (2π)^{-1/2} ∬ F(z) M_ξT_xφ dz by lattice quadrature.
pub fn synthesize(f: &STFTField, w: &Window) -> Result<SampledSignal> {
    let grid = f.grid;
    let sg = w.grid();
    let c = (2.0 * PI).powf(-0.5) * grid.hx() * grid.hxi();
    let (xi0, hxi) = (grid.xi(0), grid.hxi());
    let mut out = vec![Complex64::new(0.0, 0.0); sg.n];
    for i in 0..grid.nx {
        let row: Vec<Complex64> = (0..grid.nxi).map(|j| f.get(i, j)).collect();
        if row.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            continue;
        }
        let x = grid.x(i);
        for n in support(&sg, x, w.reach()) {
            let y = sg.x(n);
            let r = Complex64::from_polar(1.0, y * hxi);
            let mut g = Complex64::new(0.0, 0.0);
            for (blk, chunk) in row.chunks(ANCHOR).enumerate() {
                let mut e = Complex64::from_polar(1.0, y * (xi0 + (blk * ANCHOR) as f64 * hxi));
                for v in chunk {
                    g += v * e;
                    e *= r;
                }
            }
            out[n] += g * w.eval(y - x) * c;
        }
    }
    SampledSignal::new(sg, out, f.source_label.clone())
}

/// Unitary Fourier transform (2π)^{-1/2} ∫ u e^{−ixξ} dx, sampled on the same grid.
pub fn fourier(u: &SampledSignal) -> SampledSignal {
    let g = u.grid;
    let h = g.h();
    let c = (2.0 * PI).powf(-0.5) * h;
    let mut out = vec![Complex64::new(0.0, 0.0); g.n];
    for n in 0..g.n {
        let un = u.values[n];
        if un.re == 0.0 && un.im == 0.0 {
            continue;
        }
        let y = g.x(n);
        let r = Complex64::from_polar(1.0, -y * h);
        for (blk, chunk) in out.chunks_mut(ANCHOR).enumerate() {
            let mut a = un * Complex64::from_polar(c, -y * g.x(blk * ANCHOR));
            for s in chunk.iter_mut() {
                *s += a;
                a *= r;
            }
        }
    }
    SampledSignal { grid: g, values: out, label: alloc::format!("fourier({})", u.label) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metaplectic {
    /// χ = J, μ(χ) = F.
    Fourier,
    /// χ_A(x, ξ) = (x/A, Aξ), μ_A f(x) = |A|^{1/2} f(Ax).
    Dilation { a: f64 },
}

/// Max over the grid of ||V_{μφ}(μu)(χz)| − |V_φu(z)||.
pub fn metaplectic_check(u: &SampledSignal, w: &Window, op: Metaplectic, grid: PhaseGrid) -> Result<f64> {
    let base = analyze(u, w, grid)?;
    match op {
        Metaplectic::Fourier => {
            let uh = fourier(u);
            let wh = w.fourier(u.grid)?;
            let jgrid = grid.transposed();
            let img = analyze(&uh, &wh, jgrid)?;
            let mut dev = 0.0f64;
            for j in 0..grid.nxi {
                for i in 0..grid.nx {
                    let a = img.values[grid.j_index(i, j)].norm();
                    dev = dev.max((a - base.get(i, j).norm()).abs());
                }
            }
            Ok(dev)
        }
        Metaplectic::Dilation { a } => {
            if a == 0.0 || !a.is_finite() {
                return Err(invalid("dilation must be finite and non-zero"));
            }
            let s = a.abs();
            let sg = SpatialGrid::new(u.grid.x_max / s, u.grid.n)?;
            // samples of μ_A u on the rescaled lattice are the original samples
            let mut vals: Vec<Complex64> = u.values.iter().map(|v| v * s.sqrt()).collect();
            if a < 0.0 {
                vals.reverse();
            }
            let v = SampledSignal::new(sg, vals, u.label.clone())?;
            let wd = w.dilated(a, sg)?;
            let g2 = PhaseGrid::new(grid.x_max / s, grid.xi_max * s, grid.nx, grid.nxi)?;
            let img = analyze(&v, &wd, g2)?;
            let mut dev = 0.0f64;
            for j in 0..grid.nxi {
                for i in 0..grid.nx {
                    let (ii, jj) = if a < 0.0 { (grid.nx - 1 - i, grid.nxi - 1 - j) } else { (i, j) };
                    dev = dev.max((img.get(ii, jj).norm() - base.get(i, j).norm()).abs());
                }
            }
            Ok(dev)
        }
    }
}
