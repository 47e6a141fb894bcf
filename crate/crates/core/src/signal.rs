//! Sampled test distributions on a uniform one-dimensional grid.

use crate::error::{invalid, Error, Result};
use crate::geometry::{PhaseGrid, Region};
use crate::special::hermite_function;
use crate::stft::{self, STFTField, Window, WindowKind};
use crate::Complex64;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Uniform grid of `n` points on [−x_max, x_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialGrid {
    pub x_max: f64,
    pub n: usize,
}

impl SpatialGrid {
    pub fn new(x_max: f64, n: usize) -> Result<Self> {
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(invalid("spatial extent must be positive"));
        }
        if n < 16 {
            return Err(invalid("spatial grid needs at least 16 points"));
        }
        Ok(SpatialGrid { x_max, n })
    }

    /// Smallest odd-sized grid with spacing at most `h` covering [−x_max, x_max].
    pub fn with_spacing(x_max: f64, h: f64) -> Result<Self> {
        let mut n = (2.0 * x_max / h).ceil() as usize + 1;
        if n % 2 == 0 {
            n += 1;
        }
        SpatialGrid::new(x_max, n.max(17))
    }

    /// Grid able to carry the STFT on `phase`: it covers the positions plus
    /// `margin` and resolves frequencies up to `xi_max + margin` with factor 1.5.
    pub fn for_phase_grid(phase: &PhaseGrid, margin: f64) -> Result<Self> {
        let x_max = phase.x_max + margin;
        let h = PI / (1.5 * (phase.xi_max + margin));
        SpatialGrid::with_spacing(x_max, h.min(0.1))
    }

    pub fn h(&self) -> f64 {
        2.0 * self.x_max / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.x_max + i as f64 * self.h()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub grid: SpatialGrid,
    pub values: Vec<Complex64>,
    pub label: String,
}

impl SampledSignal {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::MismatchedGrids("sample count does not match grid".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("non-finite sample"));
        }
        Ok(SampledSignal { grid, values, label: label.into() })
    }

    pub fn from_fn(grid: SpatialGrid, label: impl Into<String>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        SampledSignal { grid, values, label: label.into() }
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        SampledSignal { grid, values: alloc::vec![Complex64::new(0.0, 0.0); grid.n], label: "zero".into() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    /// Quadrature inner product (u, v) = Σ h u conj(v).
    pub fn inner(&self, other: &SampledSignal) -> Complex64 {
        let h = self.h();
        self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum::<Complex64>() * h
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.h()).sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> SampledSignal {
        SampledSignal { grid: self.grid, values: self.values.iter().map(|v| v * c).collect(), label: self.label.clone() }
    }

    /// L² distance; grids must agree.
    pub fn distance(&self, other: &SampledSignal) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::MismatchedGrids("signals live on different grids".into()));
        }
        let h = self.h();
        Ok((self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * h).sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Catalog of test distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalKind {
    /// L²-normalised Gaussian of the given width.
    Gaussian { width: f64 },
    /// Orthonormal Hermite function.
    Hermite { order: usize },
    /// L¹-normalised Gaussian of standard deviation `width`, approximating δ₀.
    DeltaApprox { width: f64 },
    Constant,
    /// Unit Gaussian with quadratic phase e^{i·rate·x²/2}.
    Chirp { rate: f64 },
    /// Adjoint STFT of the indicator of a region, restricted to a phase grid.
    IndicatorSynth { region: Region, window: WindowKind, phase_grid: PhaseGrid },
}

impl SignalKind {
    pub fn label(&self) -> String {
        match self {
            SignalKind::Gaussian { width } => format!("gaussian({width})"),
            SignalKind::Hermite { order } => format!("hermite({order})"),
            SignalKind::DeltaApprox { width } => format!("delta_approx({width})"),
            SignalKind::Constant => "constant".into(),
            SignalKind::Chirp { rate } => format!("chirp({rate})"),
            SignalKind::IndicatorSynth { .. } => "indicator_synth".into(),
        }
    }
}

/// Squared-mass fraction of h_n outside [−x_max, x_max], by quadrature.
fn hermite_tail(n: usize, x_max: f64) -> f64 {
    let end = x_max.max((2.0 * n as f64 + 1.0).sqrt()) + 40.0;
    let steps = 4000;
    let h = (end - x_max) / steps as f64;
    let mut acc = 0.0;
    for i in 0..=steps {
        let y = x_max + i as f64 * h;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        acc += w * hermite_function(n, y).powi(2);
    }
    2.0 * acc * h
}

const TAIL: f64 = 1e-10;

fn truncation(msg: String) -> Error {
    Error::GridTruncation(msg)
}

/// Samples a catalog signal on `grid`.
///
/// Gaussian, Hermite and chirp signals must keep all but 1e-10 of their squared
/// mass inside the grid. `constant` is simply cut off at the grid ends and
/// `delta_approx` only needs the spacing to resolve its width.
pub fn make_catalog_signal(kind: &SignalKind, grid: SpatialGrid) -> Result<SampledSignal> {
    let label = kind.label();
    let x_max = grid.x_max;
    match kind {
        SignalKind::Gaussian { width } => {
            let w = *width;
            if !(w > 0.0) {
                return Err(invalid("width must be positive"));
            }
            if libm::erfc(x_max / w) > TAIL || grid.h() > w {
                return Err(truncation(format!("gaussian({w}) does not fit on [-{x_max}, {x_max}]")));
            }
            let c = PI.powf(-0.25) / w.sqrt();
            Ok(SampledSignal::from_fn(grid, label, |x| Complex64::new(c * (-0.5 * x * x / (w * w)).exp(), 0.0)))
        }
        SignalKind::Hermite { order } => {
            let n = *order;
            if hermite_tail(n, x_max) > TAIL || grid.h() > PI / (2.0 * (2.0 * n as f64 + 1.0).sqrt() + 8.0) {
                return Err(truncation(format!("hermite({n}) does not fit on [-{x_max}, {x_max}]")));
            }
            Ok(SampledSignal::from_fn(grid, label, |x| Complex64::new(hermite_function(n, x), 0.0)))
        }
        SignalKind::DeltaApprox { width } => {
            let w = *width;
            if !(w > 0.0) {
                return Err(invalid("width must be positive"));
            }
            if grid.h() > 0.5 * w {
                return Err(truncation(format!("spacing {} does not resolve width {w}", grid.h())));
            }
            let c = 1.0 / ((2.0 * PI).sqrt() * w);
            Ok(SampledSignal::from_fn(grid, label, |x| Complex64::new(c * (-0.5 * x * x / (w * w)).exp(), 0.0)))
        }
        SignalKind::Constant => Ok(SampledSignal::from_fn(grid, label, |_| Complex64::new(1.0, 0.0))),
        SignalKind::Chirp { rate } => {
            if libm::erfc(x_max) > TAIL {
                return Err(truncation(format!("chirp does not fit on [-{x_max}, {x_max}]")));
            }
            let c = PI.powf(-0.25);
            let r = *rate;
            Ok(SampledSignal::from_fn(grid, label, |x| {
                Complex64::from_polar(c * (-0.5 * x * x).exp(), 0.5 * r * x * x)
            }))
        }
        SignalKind::IndicatorSynth { region, window, phase_grid } => {
            let w = Window::new(window.clone(), grid)?;
            let field = STFTField::indicator(region, *phase_grid, &w);
            let mut u = stft::synthesize(&field, &w)?;
            u.label = label;
            Ok(u)
        }
    }
}
