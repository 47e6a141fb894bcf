//! Decay-exponent estimation on the phase plane and the numerical filter.
//!
//! "Rapid decay" is a finite-scale surrogate: an exponent is the negative
//! log-log slope of the tail supremum of |V| against θ_σ over the outer half of
//! the resolvable radial range, capped at `n_cap`.

use crate::error::{invalid, Error, Result};
use crate::geometry::{aniso_neighborhood, theta_weight, AnisoParams, PhaseGrid, PhasePoint, RegionMask};
use crate::special::regression_slope;
use crate::stft::STFTField;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayConfig {
    pub n_cap: f64,
    pub n_threshold: f64,
    pub r_min: f64,
    pub n_rays: usize,
    pub ladder: usize,
    /// Values below floor_rel·max|V| count as numerically zero.
    pub floor_rel: f64,
    /// Ratio between consecutive shell radii.
    pub shell_ratio: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            n_cap: 12.0,
            n_threshold: 8.0,
            r_min: 2.0,
            n_rays: 720,
            ladder: 48,
            floor_rel: 1e-12,
            shell_ratio: 2f64.powf(0.25),
        }
    }
}

impl DecayConfig {
    fn validate(&self) -> Result<()> {
        if !(self.n_cap > 0.0 && self.r_min > 0.0 && self.floor_rel > 0.0 && self.shell_ratio > 1.0) {
            return Err(invalid("decay configuration out of range"));
        }
        if self.n_rays < 8 || self.ladder < 8 {
            return Err(invalid("need at least 8 rays and 8 ladder steps"));
        }
        Ok(())
    }
}

/// Shell [r_lo, r_hi) in θ_σ with the largest |V| found there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub j: usize,
    pub r_lo: f64,
    pub r_hi: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayMap {
    pub grid: PhaseGrid,
    /// Per-cell exponent; unresolved cells hold NaN.
    pub exponents: Vec<f64>,
    pub resolved: Vec<bool>,
    /// Ray parameters t ∈ [0, 2π) on the unit curve x^{2k} + ξ^{2m} = 1.
    pub ray_params: Vec<f64>,
    pub ray_exponents: Vec<f64>,
    pub shells: Vec<Shell>,
    pub n_cap: f64,
    pub r_min: f64,
}

/// Point of the unit curve x^{2k} + ξ^{2m} = 1 at parameter t.
pub fn unit_curve_point(p: &AnisoParams, t: f64) -> PhasePoint {
    let (s, c) = t.sin_cos();
    let x = c.abs().powf(1.0 / p.k() as f64).copysign(c);
    let xi = s.abs().powf(1.0 / p.m() as f64).copysign(s);
    PhasePoint::new(x, xi)
}

/// Ray parameter of the σ-conic ray through z ≠ 0.
pub fn ray_param(p: &AnisoParams, z: PhasePoint) -> f64 {
    let (k, m) = (p.k() as i32, p.m() as i32);
    let e = z.x.powi(2 * k) + z.xi.powi(2 * m);
    let lam = e.powf(0.5 / k as f64);
    let bx = z.x / lam;
    let bxi = z.xi / lam.powf(p.sigma());
    let t = libm::atan2(bxi.abs().powi(m).copysign(bxi), bx.abs().powi(k).copysign(bx));
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

fn bilinear(grid: &PhaseGrid, a: &[f64], z: PhasePoint) -> Option<f64> {
    let (fi, fj) = grid.frac(z);
    if fi < 0.0 || fj < 0.0 || fi > (grid.nx - 1) as f64 || fj > (grid.nxi - 1) as f64 {
        return None;
    }
    let (i0, j0) = ((fi.floor() as usize).min(grid.nx - 2), (fj.floor() as usize).min(grid.nxi - 2));
    let (u, v) = (fi - i0 as f64, fj - j0 as f64);
    let g = |i: usize, j: usize| a[grid.index(i, j)];
    Some(
        (1.0 - u) * (1.0 - v) * g(i0, j0)
            + u * (1.0 - v) * g(i0 + 1, j0)
            + (1.0 - u) * v * g(i0, j0 + 1)
            + u * v * g(i0 + 1, j0 + 1),
    )
}

/// Exponent from increasing θ and non-increasing tail suprema.
fn tail_exponent(theta: &[f64], tail: &[f64], floor: f64, n_cap: f64) -> f64 {
    if tail.is_empty() || tail[0] <= floor {
        return n_cap;
    }
    let above = tail.iter().take_while(|&&v| v > floor).count();
    let fit = |n: usize| {
        let lx: Vec<f64> = theta[..n].iter().map(|t| t.ln()).collect();
        let ly: Vec<f64> = tail[..n].iter().map(|v| v.ln()).collect();
        -regression_slope(&lx, &ly)
    };
    if above == tail.len() {
        return fit(above).min(n_cap);
    }
    let bound = (tail[0] / floor).ln() / (theta[above] / theta[0]).ln();
    let est = if above >= 2 { fit(above).max(bound) } else { bound };
    est.min(n_cap)
}

/// Largest θ_σ whose whole level set lies inside the grid.
fn outer_radius(p: &AnisoParams, grid: &PhaseGrid) -> f64 {
    (1.0 + grid.x_max).min(1.0 + grid.xi_max.powf(p.inv_sigma()))
}

fn shell_edges(cfg: &DecayConfig, r_out: f64) -> Vec<f64> {
    let mut e = vec![cfg.r_min];
    while *e.last().unwrap() * cfg.shell_ratio <= r_out * (1.0 + 1e-12) {
        let next = e.last().unwrap() * cfg.shell_ratio;
        e.push(next);
    }
    e
}

fn check_range(p: &AnisoParams, grid: &PhaseGrid, cfg: &DecayConfig) -> Result<f64> {
    let r_out = outer_radius(p, grid);
    if r_out < 8.0 * cfg.r_min {
        return Err(Error::InsufficientRadialRange(format!(
            "grid reaches theta = {r_out:.3}, need {} (three octaves above r_min)",
            8.0 * cfg.r_min
        )));
    }
    Ok(r_out)
}

pub fn decay_map(f: &STFTField, p: &AnisoParams, cfg: &DecayConfig) -> Result<DecayMap> {
    cfg.validate()?;
    let grid = f.grid;
    let r_out = check_range(p, &grid, cfg)?;
    let a = f.abs();
    let floor = cfg.floor_rel * a.iter().cloned().fold(0.0, f64::max);
    let sigma = p.sigma();
    let nr = cfg.n_rays;
    let mut ray_params = Vec::with_capacity(nr);
    let mut ray_exponents = Vec::with_capacity(nr);
    for r in 0..nr {
        let t = 2.0 * PI * r as f64 / nr as f64;
        let b = unit_curve_point(p, t);
        let at = |lam: f64| PhasePoint::new(lam * b.x, lam.powf(sigma) * b.xi);
        // λ range: from θ = r_min out to the grid edge
        let mut lam_max = f64::INFINITY;
        if b.x != 0.0 {
            lam_max = lam_max.min(grid.x_max / b.x.abs());
        }
        if b.xi != 0.0 {
            lam_max = lam_max.min((grid.xi_max / b.xi.abs()).powf(1.0 / sigma));
        }
        let (mut lo, mut hi) = (0.0, lam_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if theta_weight(p, at(mid)) < cfg.r_min {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lam_min = hi;
        let n = cfg.ladder;
        let mut theta = Vec::with_capacity(n);
        let mut vals = Vec::with_capacity(n);
        for l in 0..n {
            let lam = lam_min * (lam_max / lam_min).powf(l as f64 / (n - 1) as f64) * (1.0 - 1e-12);
            let z = at(lam);
            theta.push(theta_weight(p, z));
            vals.push(bilinear(&grid, &a, z).unwrap_or(0.0));
        }
        for l in (0..n - 1).rev() {
            vals[l] = vals[l].max(vals[l + 1]);
        }
        let h = n / 2;
        ray_params.push(t);
        ray_exponents.push(tail_exponent(&theta[h..], &vals[h..], floor, cfg.n_cap));
    }
    let mut exponents = vec![f64::NAN; grid.len()];
    let mut resolved = vec![false; grid.len()];
    for (idx, z) in grid.points().enumerate() {
        if z.norm() < cfg.r_min {
            continue;
        }
        let t = ray_param(p, z);
        let r = (libm::round(t / (2.0 * PI) * nr as f64) as usize) % nr;
        exponents[idx] = ray_exponents[r];
        resolved[idx] = true;
    }
    let edges = shell_edges(cfg, r_out);
    let mut shells: Vec<Shell> = edges
        .windows(2)
        .enumerate()
        .map(|(j, w)| Shell { j, r_lo: w[0], r_hi: w[1], max_abs: 0.0 })
        .collect();
    for (idx, z) in grid.points().enumerate() {
        let th = theta_weight(p, z);
        if let Some(s) = shells.iter_mut().find(|s| th >= s.r_lo && th < s.r_hi) {
            s.max_abs = s.max_abs.max(a[idx]);
        }
    }
    Ok(DecayMap { grid, exponents, resolved, ray_params, ray_exponents, shells, n_cap: cfg.n_cap, r_min: cfg.r_min })
}

/// Ray parameters whose exponent falls below the threshold.
pub fn wavefront_extract(f: &STFTField, p: &AnisoParams, cfg: &DecayConfig) -> Result<Vec<f64>> {
    let d = decay_map(f, p, cfg)?;
    Ok(d.ray_params.iter().zip(&d.ray_exponents).filter(|(_, e)| **e < cfg.n_threshold).map(|(t, _)| *t).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellRow {
    pub j: usize,
    pub max_abs: f64,
    pub radius: f64,
}

pub const FINITE_SCALE_CAVEAT: &str = "finite-scale surrogate: decay is estimated over the resolvable shells only";

/// Verdict on rapid STFT decay over Ω_{ρ,ε}. `member` means the complement of Ω
/// belongs to the filter, i.e. u is numerically smooth in Ω.
#[derive(Debug, Clone)]
pub struct FilterReport {
    pub region: RegionMask,
    pub eps: f64,
    pub member: bool,
    pub estimated_exponent: f64,
    pub n_threshold: f64,
    pub shell_table: Vec<ShellRow>,
    pub caveat: String,
}

/// Decay test over the raster of Ω_{ρ,ε}.
pub fn filter_membership(
    f: &STFTField,
    p: &AnisoParams,
    omega: &RegionMask,
    eps: f64,
    cfg: &DecayConfig,
) -> Result<FilterReport> {
    cfg.validate()?;
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if *omega.grid() != f.grid {
        return Err(Error::MismatchedGrids("region and field use different phase grids".into()));
    }
    let grid = f.grid;
    let r_out = check_range(p, &grid, cfg)?;
    let nb = aniso_neighborhood(p, omega, eps)?;
    let a = f.abs();
    let floor = cfg.floor_rel * a.iter().cloned().fold(0.0, f64::max);
    let edges = shell_edges(cfg, r_out);
    let ns = edges.len() - 1;
    let mut maxima = vec![0.0f64; ns];
    let mut seen = false;
    for (idx, z) in grid.points().enumerate() {
        if !nb.raster()[idx] {
            continue;
        }
        let th = theta_weight(p, z);
        if th < edges[0] || th >= edges[ns] {
            continue;
        }
        let j = ((th / edges[0]).ln() / cfg.shell_ratio.ln()).floor() as usize;
        let j = j.min(ns - 1);
        seen = true;
        maxima[j] = maxima[j].max(a[idx]);
    }
    if !seen {
        return Err(Error::EmptyRegion);
    }
    let mut tail = maxima.clone();
    for j in (0..ns - 1).rev() {
        tail[j] = tail[j].max(tail[j + 1]);
    }
    let h = ns / 2;
    let exponent = tail_exponent(&edges[h..ns], &tail[h..], floor, cfg.n_cap);
    let shell_table = maxima.iter().enumerate().map(|(j, m)| ShellRow { j, max_abs: *m, radius: edges[j] }).collect();
    Ok(FilterReport {
        region: omega.clone(),
        eps,
        member: exponent >= cfg.n_threshold,
        estimated_exponent: exponent,
        n_threshold: cfg.n_threshold,
        shell_table,
        caveat: FINITE_SCALE_CAVEAT.into(),
    })
}

/// Whether Γ belongs to the filter: u is smooth in the complement of Γ.
pub fn in_filter(f: &STFTField, p: &AnisoParams, gamma: &RegionMask, eps: f64, cfg: &DecayConfig) -> Result<bool> {
    match filter_membership(f, p, &gamma.complement(), eps, cfg) {
        Ok(r) => Ok(r.member),
        // nothing left outside Γ beyond r_min: trivially smooth there
        Err(Error::EmptyRegion) => Ok(true),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomsReport {
    pub members: Vec<bool>,
    pub upward_closed: bool,
    pub intersection_closed: bool,
}

impl AxiomsReport {
    pub fn holds(&self) -> bool {
        self.upward_closed && self.intersection_closed
    }
}

/// Upward closure and closure under intersection over a family of candidates Γ.
pub fn filter_axioms_check(
    f: &STFTField,
    p: &AnisoParams,
    regions: &[RegionMask],
    eps: f64,
    cfg: &DecayConfig,
) -> Result<AxiomsReport> {
    if regions.len() < 2 {
        return Err(invalid("need at least two regions"));
    }
    let members: Vec<bool> = regions.iter().map(|g| in_filter(f, p, g, eps, cfg)).collect::<Result<_>>()?;
    let mut upward = true;
    let mut inter = true;
    for (a, ra) in regions.iter().enumerate() {
        for (b, rb) in regions.iter().enumerate() {
            if a == b {
                continue;
            }
            if members[a] && ra.is_subset_of(rb)? && !members[b] {
                upward = false;
            }
            if a < b && members[a] && members[b] && !in_filter(f, p, &ra.intersection(rb)?, eps, cfg)? {
                inter = false;
            }
        }
    }
    Ok(AxiomsReport { members, upward_closed: upward, intersection_closed: inter })
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(2.0 * PI - d)
}

/// Angle reduced to [0, 2π).
pub fn wrap_angle(a: f64) -> f64 {
    a - 2.0 * PI * (a / (2.0 * PI)).floor()
}

/// Hausdorff distance between two finite sets of angles on the circle.
pub fn direction_set_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return PI;
    }
    let one = |x: &[f64], y: &[f64]| {
        x.iter().map(|s| y.iter().map(|t| circle_dist(*s, *t)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Groups angles into runs of neighbouring rays; returns (centre, half-width) per run.
pub fn direction_clusters(angles: &[f64], n_rays: usize) -> Vec<(f64, f64)> {
    if angles.is_empty() {
        return Vec::new();
    }
    let step = 2.0 * PI / n_rays as f64;
    let mut s: Vec<f64> = angles.iter().map(|a| wrap_angle(*a)).collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut runs: Vec<Vec<f64>> = vec![vec![s[0]]];
    for w in s.windows(2) {
        if w[1] - w[0] > 1.5 * step {
            runs.push(Vec::new());
        }
        runs.last_mut().unwrap().push(w[1]);
    }
    if runs.len() > 1 && s[0] + 2.0 * PI - s[s.len() - 1] <= 1.5 * step {
        let first = runs.remove(0);
        runs.last_mut().unwrap().extend(first.iter().map(|a| a + 2.0 * PI));
    }
    runs.iter()
        .map(|r| {
            let (lo, hi) = (r[0], r[r.len() - 1]);
            (wrap_angle((lo + hi) / 2.0), (hi - lo) / 2.0)
        })
        .collect()
}
