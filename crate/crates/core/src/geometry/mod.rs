//! Anisotropic weights, structural constants, σ-conic regions and
//! anisotropic neighbourhoods on the phase plane.

mod grid;
mod mask;
mod neighborhood;
pub mod properties;
mod region;

pub use grid::{PhaseGrid, PhasePoint};
pub use mask::{RegionMask, Shape};
pub use neighborhood::{aniso_neighborhood, dilate_raster, separation_mu};
pub use region::Region;

use crate::error::{invalid, Error, Result};
use crate::special::gcd;
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Anisotropy data: σ = k/m kept as the integer pair, plus regularity ρ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct AnisoParams {
    k: u32,
    m: u32,
    rho: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    k: u32,
    m: u32,
    #[serde(default = "one")]
    rho: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawParams> for AnisoParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        AnisoParams::new(r.k, r.m, r.rho)
    }
}

impl From<AnisoParams> for RawParams {
    fn from(p: AnisoParams) -> Self {
        RawParams { k: p.k, m: p.m, rho: p.rho }
    }
}

impl AnisoParams {
    pub fn new(k: u32, m: u32, rho: f64) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(invalid("k and m must be positive"));
        }
        if gcd(k, m) != 1 {
            return Err(invalid("k and m must be coprime"));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(invalid("rho must lie in (0, 1]"));
        }
        Ok(AnisoParams { k, m, rho })
    }

    /// Isotropic parameters with ρ = 1.
    pub fn isotropic() -> Self {
        AnisoParams { k: 1, m: 1, rho: 1.0 }
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn sigma(&self) -> f64 {
        self.k as f64 / self.m as f64
    }
    pub fn inv_sigma(&self) -> f64 {
        self.m as f64 / self.k as f64
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        AnisoParams::new(self.k, self.m, rho)
    }

    /// Parameters for 1/σ, as used after a Fourier transform.
    pub fn dual(&self) -> Self {
        AnisoParams { k: self.m, m: self.k, rho: self.rho }
    }
}

/// θ_σ(z) = 1 + |x| + |ξ|^{1/σ}.
pub fn theta_weight(p: &AnisoParams, z: PhasePoint) -> f64 {
    1.0 + z.x.abs() + z.xi.abs().powf(p.inv_sigma())
}

/// w(z) = (1 + x^{2k} + ξ^{2m})^{1/2}.
pub fn wkm_weight(p: &AnisoParams, z: PhasePoint) -> f64 {
    (1.0 + z.x.powi(2 * p.k as i32) + z.xi.powi(2 * p.m as i32)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralConstants {
    pub c_sigma: f64,
    pub b_sigma: f64,
    pub c_k: f64,
}

/// C_s for the power 1/s, where s = num/den: 1 if s ≥ 1, else 2^{1/s − 1}.
fn quasi_constant(num: u32, den: u32) -> f64 {
    if num >= den {
        1.0
    } else {
        2.0f64.powf(den as f64 / num as f64 - 1.0)
    }
}

pub fn structural_constants(p: &AnisoParams) -> StructuralConstants {
    let c_sigma = quasi_constant(p.k, p.m);
    let b_sigma = 2.0f64.powf((p.inv_sigma() - 1.0).max(0.0));
    let c_k = 2.0f64.powi(2 * p.k as i32 - 1);
    StructuralConstants { c_sigma, b_sigma, c_k }
}

/// A constant K with θ_σ(z+w)^s ≤ K θ_σ(z)^s θ_σ(w)^{|s|}, namely (2B_σ)^{|s|}.
pub fn peetre_constant(p: &AnisoParams, s: f64) -> f64 {
    (2.0 * structural_constants(p).b_sigma).powf(s.abs())
}

/// The two scalar conditions on ε; both must be negative for ε to be admissible.
pub fn epsilon_conditions(p: &AnisoParams, eps: f64) -> (f64, f64) {
    let c_sigma = quasi_constant(p.k, p.m);
    let c_inv = quasi_constant(p.m, p.k);
    let f1 = eps + eps.powf(p.inv_sigma()) * c_sigma - 1.0;
    let f2 = eps * (1.0 - eps).powf(-p.sigma()) * c_inv * c_inv - 1.0;
    (f1, f2)
}

/// Supremum of the admissible ε in (0, 1), by bisection.
pub fn feasible_epsilon_bound(p: &AnisoParams) -> f64 {
    let ok = |e: f64| {
        let (a, b) = epsilon_conditions(p, e);
        a < 0.0 && b < 0.0
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// (λx, λ^σ ξ).
pub fn sigma_dilate(p: &AnisoParams, z: PhasePoint, lambda: f64) -> PhasePoint {
    PhasePoint::new(lambda * z.x, lambda.powf(p.sigma()) * z.xi)
}
