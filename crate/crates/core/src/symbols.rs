//! Phase-space symbols: excised power hamiltonians, the mollified cutoff
//! q_{ε,δ,ρ,Ω}, ellipticity and symbol-class checks, and the Anti-Wick operator.

use crate::error::{invalid, Error, Result};
use crate::geometry::{dilate_raster, separation_mu, theta_weight, wkm_weight, AnisoParams, PhaseGrid, RegionMask};
use crate::hamilton::HamiltonianSpec;
use crate::signal::SampledSignal;
use crate::special::bump_profile;
use crate::stft::{analyze, synthesize, Window};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Real symbol sampled on a phase grid, with its nominal order r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolField {
    pub grid: PhaseGrid,
    pub values: Vec<f64>,
    pub order_r: f64,
    pub params: AnisoParams,
    pub label: String,
}

impl SymbolField {
    pub fn new(grid: PhaseGrid, values: Vec<f64>, order_r: f64, params: AnisoParams, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::MismatchedGrids("symbol size does not match grid".into()));
        }
        let s = SymbolField { grid, values, order_r, params, label: label.into() };
        if !s.order_bound().is_finite() {
            return Err(invalid("symbol is not bounded by a finite multiple of theta^r"));
        }
        Ok(s)
    }

    pub fn constant(grid: PhaseGrid, params: AnisoParams, c: f64) -> Self {
        SymbolField { grid, values: vec![c; grid.len()], order_r: 0.0, params, label: format!("constant({c})") }
    }

    /// max |a(z)| θ_σ(z)^{−r} over the grid.
    pub fn order_bound(&self) -> f64 {
        self.grid
            .points()
            .zip(&self.values)
            .map(|(z, v)| v.abs() * theta_weight(&self.params, z).powf(-self.order_r))
            .fold(0.0, f64::max)
    }
}

/// a = ψ_μ (x^{2k} + ξ^{2m})^p on the grid; order 2kp.
pub fn power_hamiltonian(p_exp: f64, k: u32, m: u32, mu: f64, grid: PhaseGrid) -> Result<SymbolField> {
    let h = HamiltonianSpec::new(k, m, p_exp, mu)?;
    let params = AnisoParams::new(k, m, 1.0)?;
    let values = grid.points().map(|z| h.value(z)).collect();
    SymbolField::new(grid, values, 2.0 * k as f64 * p_exp, params, format!("power(p={p_exp}, k={k}, m={m}, mu={mu})"))
}

/// Data of the cutoff q_{ε,δ,ρ,Ω}.
#[derive(Debug, Clone)]
pub struct CutoffSpec {
    pub eps: f64,
    pub delta: f64,
    pub mu: f64,
    pub params: AnisoParams,
    pub omega: RegionMask,
}

impl CutoffSpec {
    /// Chooses μ by the raster separation search.
    pub fn new(params: AnisoParams, omega: RegionMask, eps: f64, delta: f64) -> Result<Self> {
        let mu = separation_mu(&params, &omega, eps, delta)?;
        Ok(CutoffSpec { eps, delta, mu, params, omega })
    }

    /// Uses a given μ after checking the separation property on the raster.
    pub fn with_mu(params: AnisoParams, omega: RegionMask, eps: f64, delta: f64, mu: f64) -> Result<Self> {
        if !(0.0 < eps && eps < delta && delta < 1.0) {
            return Err(invalid("need 0 < eps < delta < 1"));
        }
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(invalid("mu must lie in (0, 1]"));
        }
        let g = *omega.grid();
        let inner = dilate_raster(&g, omega.raster(), &params, eps);
        let outer: Vec<bool> = dilate_raster(&g, omega.raster(), &params, delta).iter().map(|b| !b).collect();
        let a = dilate_raster(&g, &inner, &params, mu);
        let b = dilate_raster(&g, &outer, &params, mu);
        if a.iter().zip(&b).any(|(x, y)| *x && *y) {
            return Err(invalid("mu does not separate the neighbourhoods on this grid"));
        }
        Ok(CutoffSpec { eps, delta, mu, params, omega })
    }
}

/// Summed-area table of a boolean raster.
struct Sat {
    nx: usize,
    s: Vec<u32>,
}

impl Sat {
    fn new(grid: &PhaseGrid, r: &[bool]) -> Self {
        let nx = grid.nx + 1;
        let mut s = vec![0u32; nx * (grid.nxi + 1)];
        for j in 0..grid.nxi {
            for i in 0..grid.nx {
                s[(j + 1) * nx + i + 1] = r[grid.index(i, j)] as u32 + s[j * nx + i + 1] + s[(j + 1) * nx + i] - s[j * nx + i];
            }
        }
        Sat { nx, s }
    }

    /// Count over the inclusive box [i0, i1] × [j0, j1].
    fn count(&self, i0: usize, i1: usize, j0: usize, j1: usize) -> u32 {
        let n = self.nx;
        self.s[(j1 + 1) * n + i1 + 1] + self.s[j0 * n + i0] - self.s[j0 * n + i1 + 1] - self.s[(j1 + 1) * n + i0]
    }
}

/// q_{ε,δ,ρ,Ω} by lattice quadrature of the double mollification.
///
/// The kernel ψ(|x−y|²/(μw^{ρ/k})²)ψ(|ξ−η|²/(μw^{ρ/m})²) is normalised by its own
/// lattice sum, so q is exactly 1 where the kernel box lies inside the raster of
/// (Ω_{ρ,ε})_{ρ,μ} and exactly 0 where it misses it. The raster is extended past
/// the grid edge by clamping.
pub fn mollified_cutoff(spec: &CutoffSpec, grid: &PhaseGrid) -> Result<SymbolField> {
    if spec.omega.grid() != grid {
        return Err(Error::MismatchedGrids("cutoff region and output grid differ".into()));
    }
    let p = &spec.params;
    let (hx, hxi) = (grid.hx(), grid.hxi());
    let min_cells = (0.5 * spec.mu / hx).min(0.5 * spec.mu / hxi);
    if min_cells < 8.0 {
        return Err(Error::UnderResolvedMollifier(format!(
            "{min_cells:.2} cells per kernel radius, need 8 (mu = {}, hx = {hx}, hxi = {hxi})",
            spec.mu
        )));
    }
    let eps_r = dilate_raster(grid, spec.omega.raster(), p, spec.eps);
    let support = dilate_raster(grid, &eps_r, p, spec.mu);
    let sat = Sat::new(grid, &support);
    let (rk, rm) = (p.rho() / p.k() as f64, p.rho() / p.m() as f64);
    let mut values = vec![0.0; grid.len()];
    let mut kx = Vec::new();
    let mut kxi = Vec::new();
    for j in 0..grid.nxi {
        for i in 0..grid.nx {
            let z = grid.point(i, j);
            let w = wkm_weight(p, z);
            let (sx, sxi) = (spec.mu * w.powf(rk), spec.mu * w.powf(rm));
            let cx = (0.5 * sx / hx).floor() as usize;
            let cxi = (0.5 * sxi / hxi).floor() as usize;
            let (i0, i1) = (i.saturating_sub(cx), (i + cx).min(grid.nx - 1));
            let (j0, j1) = (j.saturating_sub(cxi), (j + cxi).min(grid.nxi - 1));
            let inside = sat.count(i0, i1, j0, j1) as usize;
            if inside == 0 {
                continue;
            }
            if inside == (i1 - i0 + 1) * (j1 - j0 + 1) {
                values[grid.index(i, j)] = 1.0;
                continue;
            }
            kx.clear();
            kx.extend((0..=2 * cx).map(|d| bump_profile(((d as f64 - cx as f64) * hx / sx).powi(2))));
            kxi.clear();
            kxi.extend((0..=2 * cxi).map(|d| bump_profile(((d as f64 - cxi as f64) * hxi / sxi).powi(2))));
            let norm = kx.iter().sum::<f64>() * kxi.iter().sum::<f64>();
            let mut acc = 0.0;
            // Cells beyond the grid edge take the value of the nearest edge cell.
            for (dj, wy) in kxi.iter().enumerate() {
                let jj = (j + dj).saturating_sub(cxi).min(grid.nxi - 1);
                let mut row = 0.0;
                for (di, wx) in kx.iter().enumerate() {
                    let ii = (i + di).saturating_sub(cx).min(grid.nx - 1);
                    if support[grid.index(ii, jj)] {
                        row += wx;
                    }
                }
                acc += wy * row;
            }
            values[grid.index(i, j)] = (acc / norm).min(1.0);
        }
    }
    SymbolField::new(
        *grid,
        values,
        0.0,
        *p,
        format!("cutoff(eps={}, delta={}, mu={})", spec.eps, spec.delta, spec.mu),
    )
}

/// Ellipticity floor below which a symbol is not considered elliptic.
pub const ELLIPTIC_FLOOR: f64 = 1e-9;

/// min |a(z)| θ_σ(z)^{−r} over the raster of Ω outside the Euclidean ball B_R.
pub fn ellipticity_test(a: &SymbolField, omega: &RegionMask, r: f64) -> Result<(bool, f64)> {
    if *omega.grid() != a.grid {
        return Err(Error::MismatchedGrids("region and symbol use different grids".into()));
    }
    let mut best = f64::INFINITY;
    for (idx, z) in a.grid.points().enumerate() {
        if !omega.raster()[idx] || z.norm() < r {
            continue;
        }
        best = best.min(a.values[idx].abs() * theta_weight(&a.params, z).powf(-a.order_r));
    }
    if best == f64::INFINITY {
        return Err(Error::NothingToTest);
    }
    Ok((best > ELLIPTIC_FLOOR, best))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeConstant {
    pub alpha: usize,
    pub beta: usize,
    pub constant: f64,
}

fn stencil(order: usize) -> &'static [(i64, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        _ => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
    }
}

/// max over interior points with |z| ≥ `exclude_radius` of
/// |∂_x^α ∂_ξ^β a| θ_σ^{−r + ρ(α + σβ)}, by central differences, for α + β ≤ max_order.
pub fn symbol_estimate_check(a: &SymbolField, max_order: usize, exclude_radius: f64) -> Result<Vec<DerivativeConstant>> {
    if max_order > 3 {
        return Err(invalid("max_order must be at most 3"));
    }
    let g = a.grid;
    let (hx, hxi) = (g.hx(), g.hxi());
    let (rho, sigma) = (a.params.rho(), a.params.sigma());
    let mut out = Vec::new();
    for total in 0..=max_order {
        for alpha in (0..=total).rev() {
            let beta = total - alpha;
            let (sa, sb) = (stencil(alpha), stencil(beta));
            let scale = hx.powi(alpha as i32) * hxi.powi(beta as i32);
            let mut c = 0.0f64;
            for j in 2..g.nxi - 2 {
                for i in 2..g.nx - 2 {
                    let z = g.point(i, j);
                    if z.norm() < exclude_radius {
                        continue;
                    }
                    let mut d = 0.0;
                    for (di, wa) in sa {
                        for (dj, wb) in sb {
                            d += wa * wb * a.values[g.index((i as i64 + di) as usize, (j as i64 + dj) as usize)];
                        }
                    }
                    let weight = theta_weight(&a.params, z).powf(-a.order_r + rho * (alpha as f64 + sigma * beta as f64));
                    c = c.max((d / scale).abs() * weight);
                }
            }
            out.push(DerivativeConstant { alpha, beta, constant: c });
        }
    }
    Ok(out)
}

/// Whether two constant tables agree within a factor 2; entries below `floor`
/// in both tables count as equal.
pub fn refinement_stable(coarse: &[DerivativeConstant], fine: &[DerivativeConstant], floor: f64) -> bool {
    coarse.len() == fine.len()
        && coarse.iter().zip(fine).all(|(a, b)| {
            let (x, y) = (a.constant, b.constant);
            x.is_finite() && y.is_finite() && ((x < floor && y < floor) || (x <= 2.0 * y && y <= 2.0 * x))
        })
}

/// A_a u = V_ψ*(a · V_ψ u) with the unit Gaussian window ψ.
pub fn antiwick_apply(a: &SymbolField, u: &SampledSignal) -> Result<SampledSignal> {
    let w = Window::gaussian(u.grid);
    let f = analyze(u, &w, a.grid)?;
    let mut out = synthesize(&f.multiplied(&a.values)?, &w)?;
    out.label = format!("antiwick({}, {})", a.label, u.label);
    Ok(out)
}
