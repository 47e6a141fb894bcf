use super::PhasePoint;
use alloc::boxed::Box;
use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

fn one() -> u32 {
    1
}

/// Closed catalog of analytic phase-plane regions.
///
/// Exponents involving σ = k/m are evaluated from the integer pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    Whole,
    Empty,
    /// A single point, matched up to 1e-9.
    Point { x: f64, xi: f64 },
    /// Frequency-axis cone {C|x|^σ ≤ |ξ|}.
    FreqCone {
        c: f64,
        #[serde(default = "one")]
        k: u32,
        #[serde(default = "one")]
        m: u32,
    },
    /// Position-axis cone {C|ξ|^{1/σ} ≤ |x|}.
    PosCone {
        c: f64,
        #[serde(default = "one")]
        k: u32,
        #[serde(default = "one")]
        m: u32,
    },
    /// {⟨ξ⟩ ≤ C⟨x⟩^σ}.
    BracketFreq {
        c: f64,
        #[serde(default = "one")]
        k: u32,
        #[serde(default = "one")]
        m: u32,
    },
    /// {⟨x⟩ ≤ C⟨ξ⟩^{1/σ}}.
    BracketPos {
        c: f64,
        #[serde(default = "one")]
        k: u32,
        #[serde(default = "one")]
        m: u32,
    },
    /// {a·x + b·ξ ≥ c}.
    HalfPlane { a: f64, b: f64, c: f64 },
    /// {r_in ≤ |z| ≤ r_out}, Euclidean.
    Annulus { r_in: f64, r_out: f64 },
    /// {|x − x0| ≤ rx, |ξ − xi0| ≤ rxi}.
    AnisoBox { x0: f64, xi0: f64, rx: f64, rxi: f64 },
    Complement { inner: Box<Region> },
    Union { items: Vec<Region> },
    Intersection { items: Vec<Region> },
    /// Image of `inner` under clockwise rotation by `angle`.
    Rotated { inner: Box<Region>, angle: f64 },
    /// Image of `inner` under J(x, ξ) = (ξ, −x).
    JImage { inner: Box<Region> },
}

fn bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

impl Region {
    pub fn contains(&self, z: PhasePoint) -> bool {
        match self {
            Region::Whole => true,
            Region::Empty => false,
            Region::Point { x, xi } => (z.x - x).abs() <= 1e-9 && (z.xi - xi).abs() <= 1e-9,
            Region::FreqCone { c, k, m } => c * z.x.abs().powf(*k as f64 / *m as f64) <= z.xi.abs(),
            Region::PosCone { c, k, m } => c * z.xi.abs().powf(*m as f64 / *k as f64) <= z.x.abs(),
            Region::BracketFreq { c, k, m } => bracket(z.xi) <= c * bracket(z.x).powf(*k as f64 / *m as f64),
            Region::BracketPos { c, k, m } => bracket(z.x) <= c * bracket(z.xi).powf(*m as f64 / *k as f64),
            Region::HalfPlane { a, b, c } => a * z.x + b * z.xi >= *c,
            Region::Annulus { r_in, r_out } => {
                let r = z.norm();
                *r_in <= r && r <= *r_out
            }
            Region::AnisoBox { x0, xi0, rx, rxi } => (z.x - x0).abs() <= *rx && (z.xi - xi0).abs() <= *rxi,
            Region::Complement { inner } => !inner.contains(z),
            Region::Union { items } => items.iter().any(|r| r.contains(z)),
            Region::Intersection { items } => items.iter().all(|r| r.contains(z)),
            Region::Rotated { inner, angle } => {
                // undo a clockwise rotation by rotating counter-clockwise
                let (s, c) = angle.sin_cos();
                inner.contains(PhasePoint::new(c * z.x - s * z.xi, s * z.x + c * z.xi))
            }
            Region::JImage { inner } => inner.contains(z.j_inv()),
        }
    }

    pub fn complement(self) -> Region {
        Region::Complement { inner: Box::new(self) }
    }

    pub fn rotated(self, angle: f64) -> Region {
        Region::Rotated { inner: Box::new(self), angle }
    }

    pub fn j_image(self) -> Region {
        Region::JImage { inner: Box::new(self) }
    }

    /// Whether the region is σ-conic (dilation invariant) for the given (k, m).
    pub fn is_sigma_conic(&self, k: u32, m: u32) -> bool {
        match self {
            Region::Whole | Region::Empty => true,
            Region::FreqCone { k: a, m: b, .. } | Region::PosCone { k: a, m: b, .. } => *a == k && *b == m,
            Region::HalfPlane { a, b, c } => *c == 0.0 && (*a == 0.0 || *b == 0.0 || k == m),
            Region::Complement { inner } => inner.is_sigma_conic(k, m),
            Region::Union { items } | Region::Intersection { items } => {
                items.iter().all(|r| r.is_sigma_conic(k, m))
            }
            Region::Rotated { inner, angle } => (k == m || *angle == 0.0) && inner.is_sigma_conic(k, m),
            Region::JImage { inner } => inner.is_sigma_conic(m, k),
            _ => false,
        }
    }
}
