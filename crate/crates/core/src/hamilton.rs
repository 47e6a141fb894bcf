//! Hamiltonian flows of the excised power hamiltonians
//! a(x, ξ) = ψ_μ(x, ξ)(x^{2k} + ξ^{2m})^p.

use crate::error::{invalid, Error, Result};
use crate::geometry::{AnisoParams, PhasePoint, RegionMask, Shape};
use crate::special::{excision, excision_prime, gamma};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct HamiltonianSpec {
    k: u32,
    m: u32,
    p: f64,
    mu: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    k: u32,
    m: u32,
    p: f64,
    mu: f64,
}

impl TryFrom<RawSpec> for HamiltonianSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        HamiltonianSpec::new(r.k, r.m, r.p, r.mu)
    }
}

impl From<HamiltonianSpec> for RawSpec {
    fn from(h: HamiltonianSpec) -> Self {
        RawSpec { k: h.k, m: h.m, p: h.p, mu: h.mu }
    }
}

/// Which propagation statement applies for a given (p, ρ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Critical,
    Subcritical,
    Supercritical,
    Uncovered,
}

impl HamiltonianSpec {
    pub fn new(k: u32, m: u32, p: f64, mu: f64) -> Result<Self> {
        AnisoParams::new(k, m, 1.0)?;
        if p == 0.0 || !p.is_finite() {
            return Err(invalid("exponent p must be finite and non-zero"));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(invalid("mu must be positive"));
        }
        Ok(HamiltonianSpec { k, m, p, mu })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn sigma(&self) -> f64 {
        self.k as f64 / self.m as f64
    }

    /// p_c = (1/k + 1/m)/2.
    pub fn p_c(&self) -> f64 {
        (self.k + self.m) as f64 / (2 * self.k * self.m) as f64
    }

    pub fn params(&self, rho: f64) -> Result<AnisoParams> {
        AnisoParams::new(self.k, self.m, rho)
    }

    /// p_c < p ≤ p_c + min(1/k, 1/m)/4.
    pub fn supercritical_admissible(&self) -> bool {
        let pc = self.p_c();
        let width = 0.25 / self.k.max(self.m) as f64;
        self.p > pc && self.p <= pc + width + 1e-15
    }

    /// [1/2, 1 − 2max(k,m)(p − p_c)].
    pub fn rho_interval(&self) -> (f64, f64) {
        (0.5, 1.0 - 2.0 * self.k.max(self.m) as f64 * (self.p - self.p_c()))
    }

    pub fn regime(&self, rho: f64) -> Regime {
        let pc = self.p_c();
        if (self.p - pc).abs() <= 1e-12 * pc {
            Regime::Critical
        } else if 2.0 * self.k as f64 * self.p < rho * (1.0 + self.sigma()) {
            Regime::Subcritical
        } else if self.supercritical_admissible() {
            let (lo, hi) = self.rho_interval();
            if rho >= lo && rho <= hi + 1e-15 {
                Regime::Supercritical
            } else {
                Regime::Uncovered
            }
        } else {
            Regime::Uncovered
        }
    }

    /// x^{2k} + ξ^{2m}.
    pub fn energy_core(&self, z: PhasePoint) -> f64 {
        z.x.powi(2 * self.k as i32) + z.xi.powi(2 * self.m as i32)
    }

    pub fn value(&self, z: PhasePoint) -> f64 {
        let g = excision(z.x * z.x + z.xi * z.xi, self.mu);
        if g == 0.0 {
            return 0.0;
        }
        g * self.energy_core(z).powf(self.p)
    }

    /// (∂_x a, ∂_ξ a), including the excision factor.
    pub fn gradient(&self, z: PhasePoint) -> (f64, f64) {
        let t = z.x * z.x + z.xi * z.xi;
        let g = excision(t, self.mu);
        if g == 0.0 {
            return (0.0, 0.0);
        }
        let dg = excision_prime(t, self.mu);
        let e = self.energy_core(z);
        let ep = e.powf(self.p);
        let epm = self.p * e.powf(self.p - 1.0);
        let (k, m) = (self.k as i32, self.m as i32);
        let ex = 2.0 * k as f64 * z.x.powi(2 * k - 1);
        let exi = 2.0 * m as f64 * z.xi.powi(2 * m - 1);
        (dg * 2.0 * z.x * ep + g * epm * ex, dg * 2.0 * z.xi * ep + g * epm * exi)
    }

    /// Hamilton's equations: x' = ∂_ξ a, ξ' = −∂_x a.
    pub fn velocity(&self, z: PhasePoint) -> PhasePoint {
        let (ax, axi) = self.gradient(z);
        PhasePoint::new(axi, -ax)
    }

    /// Period of the orbit through z where the excision plays no role.
    pub fn period(&self, z: PhasePoint) -> f64 {
        let (a, b) = (0.5 / self.k as f64, 0.5 / self.m as f64);
        let c = gamma(a) * gamma(b) / ((self.k * self.m) as f64 * self.p * gamma(a + b));
        c * self.energy_core(z).powf(self.p_c() - self.p)
    }

    /// Smallest Euclidean radius on the level set x^{2k} + ξ^{2m} = e.
    fn level_set_min_radius(&self, e: f64) -> f64 {
        let (k, m) = (self.k as f64, self.m as f64);
        let mut r = f64::INFINITY;
        for i in 0..=512 {
            let s = 0.5 * PI * i as f64 / 512.0;
            let (c, sn) = (s.cos().powi(2), s.sin().powi(2));
            let x = (e * c).powf(0.5 / k);
            let xi = (e * sn).powf(0.5 / m);
            r = r.min(libm::hypot(x, xi));
        }
        r
    }

    /// Whether the whole orbit through z stays where ψ_μ ≡ 1.
    pub fn orbit_is_clean(&self, z: PhasePoint) -> bool {
        // the sampled minimum is refined by a small safety factor
        z.norm() >= self.mu && self.level_set_min_radius(self.energy_core(z)) >= 1.02 * self.mu
    }

    /// Closed-form flow for k = m = 1: clockwise rotation by 2p(x²+ξ²)^{p−1}t.
    pub fn flow_closed_form(&self, z: PhasePoint, t: f64) -> Result<PhasePoint> {
        if self.k != 1 || self.m != 1 {
            return Err(invalid("closed form needs k = m = 1"));
        }
        if z.norm() < self.mu {
            return Err(Error::InsideExcision);
        }
        let r2 = z.x * z.x + z.xi * z.xi;
        let ang = 2.0 * self.p * r2.powf(self.p - 1.0) * t;
        let (s, c) = ang.sin_cos();
        Ok(PhasePoint::new(c * z.x + s * z.xi, -s * z.x + c * z.xi))
    }

    fn rk4_step(&self, z: PhasePoint, dt: f64) -> PhasePoint {
        let f = |p: PhasePoint| self.velocity(p);
        let k1 = f(z);
        let k2 = f(PhasePoint::new(z.x + 0.5 * dt * k1.x, z.xi + 0.5 * dt * k1.xi));
        let k3 = f(PhasePoint::new(z.x + 0.5 * dt * k2.x, z.xi + 0.5 * dt * k2.xi));
        let k4 = f(PhasePoint::new(z.x + dt * k3.x, z.xi + dt * k3.xi));
        PhasePoint::new(
            z.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            z.xi + dt / 6.0 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi),
        )
    }

    fn steps(&self, z: PhasePoint, t: f64, dt_max: f64) -> (usize, f64) {
        let dt = dt_max.min(self.period(z) / 2000.0);
        let n = (t.abs() / dt).ceil().max(1.0) as usize;
        (n, t / n as f64)
    }

    /// Classic RK4 with step min(dt_max, T/2000), recording every step.
    pub fn flow_rk4(&self, z: PhasePoint, t: f64, dt_max: f64) -> Result<Trajectory> {
        if z.x == 0.0 && z.xi == 0.0 {
            return Err(invalid("the origin is excluded"));
        }
        let quarter = 0.25 * self.mu;
        let (n, dt) = self.steps(z, t, dt_max);
        let mut tr = Trajectory { times: Vec::with_capacity(n + 1), points: Vec::with_capacity(n + 1), energy: Vec::with_capacity(n + 1) };
        let mut cur = z;
        for s in 0..=n {
            if cur.norm() < quarter {
                return Err(Error::DegenerateFlow);
            }
            tr.times.push(s as f64 * dt);
            tr.points.push(cur);
            tr.energy.push(self.value(cur));
            if s < n {
                cur = self.rk4_step(cur, dt);
            }
        }
        Ok(tr)
    }

    fn integrate(&self, z: PhasePoint, t: f64) -> PhasePoint {
        let (n, dt) = self.steps(z, t, f64::INFINITY);
        let mut cur = z;
        for _ in 0..n {
            cur = self.rk4_step(cur, dt);
        }
        cur
    }

    /// χ_t(z). Points where ψ_μ vanishes are fixed; k = m = 1 outside B_μ uses the
    /// closed form; otherwise RK4, with t reduced modulo the period when the orbit
    /// stays clear of the excision.
    pub fn map(&self, z: PhasePoint, t: f64) -> PhasePoint {
        if t == 0.0 || excision(z.x * z.x + z.xi * z.xi, self.mu) == 0.0 {
            return z;
        }
        if self.k == 1 && self.m == 1 && z.norm() >= self.mu {
            return self.flow_closed_form(z, t).unwrap_or(z);
        }
        if self.orbit_is_clean(z) {
            let per = self.period(z);
            let r = t - per * libm::round(t / per);
            return self.integrate(z, r);
        }
        self.integrate(z, t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    pub energy: Vec<f64>,
}

impl Trajectory {
    pub fn end(&self) -> PhasePoint {
        *self.points.last().expect("non-empty trajectory")
    }

    pub fn relative_energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE)
    }
}

/// χ_t(Ω): the raster is built by pulling each cell centre back with χ_{−t}.
pub fn transport_region(h: &HamiltonianSpec, region: &RegionMask, t: f64) -> RegionMask {
    if t == 0.0 {
        return region.clone();
    }
    let base = region.shape().clone();
    let spec = *h;
    let shape = Shape::Custom(Arc::new(move |z: PhasePoint| base.contains(spec.map(z, -t))));
    RegionMask::from_shape(shape, *region.grid())
}

/// Fraction of boundary cells of `region` whose forward image lands within one
/// cell of the transported raster. Images leaving the grid are not counted.
pub fn forward_consistency(h: &HamiltonianSpec, region: &RegionMask, transported: &RegionMask, t: f64) -> f64 {
    let g = *region.grid();
    let (mut hit, mut total) = (0usize, 0usize);
    for j in 0..g.nxi {
        for i in 0..g.nx {
            if !region.get(i, j) {
                continue;
            }
            let boundary = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().any(|(di, dj)| {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                a >= 0 && b >= 0 && (a as usize) < g.nx && (b as usize) < g.nxi && !region.get(a as usize, b as usize)
            });
            if !boundary {
                continue;
            }
            let img = h.map(g.point(i, j), t);
            let Some((ci, cj)) = g.nearest(img) else { continue };
            total += 1;
            let mut found = false;
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (a, b) = (ci as i64 + di, cj as i64 + dj);
                    if a >= 0 && b >= 0 && (a as usize) < g.nx && (b as usize) < g.nxi && transported.get(a as usize, b as usize) {
                        found = true;
                    }
                }
            }
            if found {
                hit += 1;
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        hit as f64 / total as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityReport {
    /// Max relative deviation of a₀(λx, λ^σξ) from λ^{1+σ}a₀(x, ξ).
    pub max_deviation: f64,
    pub p_c: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_interval_nonempty: bool,
    pub supercritical_admissible: bool,
}

pub fn homogeneity_check(h: &HamiltonianSpec, samples: usize, seed: u64) -> HomogeneityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pc = h.p_c();
    let s = h.sigma();
    let mut dev = 0.0f64;
    for _ in 0..samples {
        let z = PhasePoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let lam: f64 = 10f64.powf(rng.gen_range(-2.0..2.0));
        let a0 = h.energy_core(z).powf(pc);
        let zl = PhasePoint::new(lam * z.x, lam.powf(s) * z.xi);
        let a1 = h.energy_core(zl).powf(pc);
        let want = lam.powf(1.0 + s) * a0;
        if want > 0.0 {
            dev = dev.max((a1 - want).abs() / want);
        }
    }
    let (lo, hi) = h.rho_interval();
    HomogeneityReport {
        max_deviation: dev,
        p_c: pc,
        rho_min: lo,
        rho_max: hi,
        rho_interval_nonempty: hi >= lo,
        supercritical_admissible: h.supercritical_admissible(),
    }
}

/// |χ_t(dilate(z, λ)) − dilate(χ_t(z), λ)|.
pub fn dilation_commutation(h: &HamiltonianSpec, z: PhasePoint, lambda: f64, t: f64) -> f64 {
    let s = h.sigma();
    let a = h.map(PhasePoint::new(lambda * z.x, lambda.powf(s) * z.xi), t);
    let b = h.map(z, t);
    libm::hypot(a.x - lambda * b.x, a.xi - lambda.powf(s) * b.xi)
}
