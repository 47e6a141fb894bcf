//! Sampled checks of the weight inequalities with fixed-seed max-ratio fits.

use super::{structural_constants, theta_weight, wkm_weight, AnisoParams, PhasePoint};
use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest observed ratio against the constant it is supposed to respect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub max_ratio: f64,
    pub bound: f64,
    pub samples: usize,
    pub violations: usize,
}

impl Fit {
    fn new(bound: f64) -> Self {
        Fit { max_ratio: 0.0, bound, samples: 0, violations: 0 }
    }

    fn push(&mut self, ratio: f64) {
        self.samples += 1;
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
        }
        if !(ratio <= self.bound * (1.0 + 1e-12)) {
            self.violations += 1;
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Signed magnitude, log-uniform over [1e-3, 1e3].
fn scalar(rng: &mut ChaCha8Rng) -> f64 {
    let mag = 10f64.powf(rng.gen_range(-3.0..3.0));
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

fn point(rng: &mut ChaCha8Rng) -> PhasePoint {
    PhasePoint::new(scalar(rng), scalar(rng))
}

/// |x+y|^{1/σ} ≤ C_σ(|x|^{1/σ} + |y|^{1/σ}).
pub fn quasi_triangle(p: &AnisoParams, n: usize, seed: u64) -> Fit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = p.inv_sigma();
    let mut fit = Fit::new(structural_constants(p).c_sigma);
    for _ in 0..n {
        let (x, y) = (scalar(&mut rng), scalar(&mut rng));
        fit.push((x + y).abs().powf(e) / (x.abs().powf(e) + y.abs().powf(e)));
    }
    fit
}

/// θ_σ(z+w) ≤ B_σ(θ_σ(z) + θ_σ(w)).
pub fn aniso_triangle(p: &AnisoParams, n: usize, seed: u64) -> Fit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fit = Fit::new(structural_constants(p).b_sigma);
    for _ in 0..n {
        let (z, w) = (point(&mut rng), point(&mut rng));
        let s = PhasePoint::new(z.x + w.x, z.xi + w.xi);
        fit.push(theta_weight(p, s) / (theta_weight(p, z) + theta_weight(p, w)));
    }
    fit
}

/// θ_σ(z+w)^s ≤ K θ_σ(z)^s θ_σ(w)^{|s|}, reported against `bound`.
pub fn peetre(p: &AnisoParams, s: f64, bound: f64, n: usize, seed: u64) -> Fit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fit = Fit::new(bound);
    for _ in 0..n {
        let (z, w) = (point(&mut rng), point(&mut rng));
        let zw = PhasePoint::new(z.x + w.x, z.xi + w.xi);
        // log form keeps large |s| from overflowing
        let l = s * theta_weight(p, zw).ln() - s * theta_weight(p, z).ln() - s.abs() * theta_weight(p, w).ln();
        fit.push(l.exp());
    }
    fit
}

/// c_k^{-1}θ_σ^k ≤ w ≤ θ_σ^k; returns fits for θ^k/(c_k w) and w/θ^k, both bounded by 1.
pub fn weight_sandwich(p: &AnisoParams, n: usize, seed: u64) -> (Fit, Fit) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ck = structural_constants(p).c_k;
    let (mut lower, mut upper) = (Fit::new(1.0), Fit::new(1.0));
    for _ in 0..n {
        let z = point(&mut rng);
        let th = theta_weight(p, z).powi(p.k() as i32);
        let w = wkm_weight(p, z);
        lower.push(th / (ck * w));
        upper.push(w / th);
    }
    (lower, upper)
}

/// ⟨z⟩^{min(1,1/σ)} ≤ K₁θ_σ(z) and θ_σ(z) ≤ K₂⟨z⟩^{max(1,1/σ)}, checked against `bound`.
pub fn bracket_sandwich(p: &AnisoParams, bound: f64, n: usize, seed: u64) -> (Fit, Fit) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = p.inv_sigma();
    let (mut k1, mut k2) = (Fit::new(bound), Fit::new(bound));
    for _ in 0..n {
        let z = point(&mut rng);
        let br = (1.0 + z.x * z.x + z.xi * z.xi).sqrt();
        let th = theta_weight(p, z);
        k1.push(br.powf(e.min(1.0)) / th);
        k2.push(th / br.powf(e.max(1.0)));
    }
    (k1, k2)
}

/// Fitted C in θ_σ(y, η) ≤ C θ_σ(x, ξ) over points (x, ξ) in the anisotropic
/// ε-box around (y, η); the least favourable box corner is used for each sample.
pub fn neighborhood_bound(p: &AnisoParams, eps: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rho, sigma) = (p.rho(), p.sigma());
    let mut c = 1.0f64;
    for _ in 0..n {
        let y = point(&mut rng);
        let th = theta_weight(p, y);
        let corner = PhasePoint::new(
            (y.x.abs() - eps * th.powf(rho)).max(0.0),
            (y.xi.abs() - eps * th.powf(rho * sigma)).max(0.0),
        );
        c = c.max(th / theta_weight(p, corner));
    }
    c
}

/// [`neighborhood_bound`] along an ε ladder, with a shared sample stream.
pub fn neighborhood_bound_ladder(p: &AnisoParams, eps: &[f64], n: usize, seed: u64) -> Vec<f64> {
    eps.iter().map(|&e| neighborhood_bound(p, e, n, seed)).collect()
}
