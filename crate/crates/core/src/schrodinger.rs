//! Spectral solver for ∂_t u + i a^w u = f with a^w = x^{2k} + (−d²/dx²)^m in the
//! Hermite-function basis, powers by functional calculus, and the propagation
//! experiment comparing filter memberships before and after evolution.

use crate::error::{Error, Result};
use crate::geometry::{PhaseGrid, RegionMask};
use crate::hamilton::{transport_region, HamiltonianSpec, Regime};
use crate::signal::{SampledSignal, SpatialGrid};
use crate::singularity::{
    direction_set_distance, filter_membership, ray_param, unit_curve_point, wavefront_extract, DecayConfig,
};
use crate::special::hermite_functions;
use crate::stft::{analyze, Window, WindowKind};
use crate::Complex64;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Threshold on expansion residual and on mass carried by uncertified modes.
pub const BASIS_TOLERANCE: f64 = 1e-6;

/// Eigen-decomposition of x^{2k} + (−d²/dx²)^m on the first M Hermite functions.
///
/// `eigenvectors` is column-major M×M: column j holds φ_j in Hermite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBasis {
    pub k: u32,
    pub m: u32,
    pub basis_size: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Leading modes whose residual is within tolerance, at most M/2.
    pub certified: usize,
    pub shift_c: f64,
}

/// (X v)_n = √(n/2) v_{n−1} + √((n+1)/2) v_{n+1}.
fn apply_x(v: &[f64], out: &mut [f64]) {
    let n = v.len();
    for i in 0..n {
        let lo = if i > 0 { (i as f64 / 2.0).sqrt() * v[i - 1] } else { 0.0 };
        let hi = if i + 1 < n { ((i + 1) as f64 / 2.0).sqrt() * v[i + 1] } else { 0.0 };
        out[i] = lo + hi;
    }
}

/// (D v)_n = √((n+1)/2) v_{n+1} − √(n/2) v_{n−1}.
fn apply_d(v: &[f64], out: &mut [f64]) {
    let n = v.len();
    for i in 0..n {
        let lo = if i > 0 { (i as f64 / 2.0).sqrt() * v[i - 1] } else { 0.0 };
        let hi = if i + 1 < n { ((i + 1) as f64 / 2.0).sqrt() * v[i + 1] } else { 0.0 };
        out[i] = hi - lo;
    }
}

/// x^{2k} v + (−D²)^m v. Exact on the first len − 2max(k,m) coordinates of the image.
fn apply_operator(k: u32, m: u32, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut a = v.to_vec();
    let mut tmp = vec![0.0; n];
    for _ in 0..2 * k {
        apply_x(&a, &mut tmp);
        core::mem::swap(&mut a, &mut tmp);
    }
    let mut b = v.to_vec();
    for _ in 0..m {
        apply_d(&b, &mut tmp);
        apply_d(&tmp, &mut b);
        b.iter_mut().for_each(|x| *x = -*x);
    }
    a.iter().zip(&b).map(|(x, y)| x + y).collect()
}

impl SpectralBasis {
    pub fn build(k: u32, m: u32, basis_size: usize) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(crate::error::invalid("k and m must be positive"));
        }
        if basis_size < 32 {
            return Err(Error::BasisTooSmall(format!("basis size {basis_size} below 32")));
        }
        let nm = basis_size;
        let ext = nm + 2 * k.max(m) as usize + 2;
        let mut mat = vec![0.0; nm * nm];
        let mut e = vec![0.0; ext];
        for col in 0..nm {
            e[col] = 1.0;
            let img = apply_operator(k, m, &e);
            e[col] = 0.0;
            mat[col * nm..(col + 1) * nm].copy_from_slice(&img[..nm]);
        }
        let scale = mat.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let mut off = 0.0f64;
        for i in 0..nm {
            for j in 0..i {
                let (a, b) = (mat[j * nm + i], mat[i * nm + j]);
                if (a - b).abs() > 1e-12 * scale {
                    return Err(Error::Internal(format!("operator matrix not symmetric at ({i}, {j})")));
                }
                off = off.max(a.abs());
            }
        }
        let (mut values, mut vectors) = if off == 0.0 {
            let mut ident = vec![0.0; nm * nm];
            for i in 0..nm {
                ident[i * nm + i] = 1.0;
            }
            ((0..nm).map(|i| mat[i * nm + i]).collect::<Vec<_>>(), ident)
        } else {
            let eig = SymmetricEigen::new(DMatrix::from_column_slice(nm, nm, &mat));
            (eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors.as_slice().to_vec())
        };
        let mut order: Vec<usize> = (0..nm).collect();
        order.sort_by(|a, b| values[*a].partial_cmp(&values[*b]).unwrap_or(core::cmp::Ordering::Equal));
        let sorted_vals: Vec<f64> = order.iter().map(|i| values[*i]).collect();
        let mut sorted_vecs = vec![0.0; nm * nm];
        for (dst, src) in order.iter().enumerate() {
            let col = &vectors[src * nm..(src + 1) * nm];
            let big = col.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
            let sign = if big < 0.0 { -1.0 } else { 1.0 };
            for (d, s) in sorted_vecs[dst * nm..(dst + 1) * nm].iter_mut().zip(col) {
                *d = sign * s;
            }
        }
        values = sorted_vals;
        vectors = sorted_vecs;
        let mut residuals = Vec::with_capacity(nm);
        let mut padded = vec![0.0; ext];
        for j in 0..nm {
            padded[..nm].copy_from_slice(&vectors[j * nm..(j + 1) * nm]);
            let img = apply_operator(k, m, &padded);
            let lam = values[j];
            let r: f64 = img.iter().zip(&padded).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            residuals.push(r);
        }
        let certified = (0..nm / 2).take_while(|j| residuals[*j] <= 1e-8 * values[*j].abs().max(1.0)).count();
        let shift_c = if values[0] <= 0.0 { values[0].abs() + 1.0 } else { 0.0 };
        Ok(SpectralBasis { k, m, basis_size: nm, eigenvalues: values, eigenvectors: vectors, residuals, certified, shift_c })
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.eigenvectors[j * self.basis_size..(j + 1) * self.basis_size]
    }

    /// (λ_j + C)^p − C^p.
    pub fn powered(&self, j: usize, p: f64) -> f64 {
        let c = self.shift_c;
        (self.eigenvalues[j] + c).powf(p) - if c > 0.0 { c.powf(p) } else { 0.0 }
    }

    /// Hermite coordinates → eigen coordinates.
    pub fn to_eigen(&self, hermite: &[Complex64]) -> Vec<Complex64> {
        (0..self.basis_size)
            .map(|j| self.column(j).iter().zip(hermite).map(|(v, c)| c * *v).sum())
            .collect()
    }

    /// Eigen coordinates → Hermite coordinates.
    pub fn to_hermite(&self, eigen: &[Complex64]) -> Vec<Complex64> {
        let nm = self.basis_size;
        let mut out = vec![Complex64::new(0.0, 0.0); nm];
        for (j, a) in eigen.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.column(j)) {
                *o += a * *v;
            }
        }
        out
    }

    /// e^{−i λ̃_j t} a_j.
    pub fn evolve(&self, eigen: &[Complex64], p: f64, t: f64) -> Vec<Complex64> {
        eigen.iter().enumerate().map(|(j, a)| a * Complex64::from_polar(1.0, -self.powered(j, p) * t)).collect()
    }

    /// Σ_j a_j φ_j sampled on `grid`.
    pub fn reconstruct(&self, eigen: &[Complex64], grid: SpatialGrid, label: impl Into<String>) -> SampledSignal {
        let herm = self.to_hermite(eigen);
        let nmax = self.basis_size - 1;
        let values = grid
            .points()
            .map(|x| hermite_functions(nmax, x).iter().zip(&herm).map(|(h, c)| c * *h).sum())
            .collect();
        SampledSignal { grid, values, label: label.into() }
    }

    /// Eigen coefficients of u with the expansion checks.
    pub fn expand(&self, u: &SampledSignal) -> Result<Expansion> {
        let nmax = self.basis_size - 1;
        let mut herm = vec![Complex64::new(0.0, 0.0); self.basis_size];
        let h = u.h();
        for (x, v) in u.grid.points().zip(&u.values) {
            if *v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (c, hn) in herm.iter_mut().zip(hermite_functions(nmax, x)) {
                *c += v * (h * hn);
            }
        }
        let norm2 = u.l2_norm().powi(2);
        let captured: f64 = herm.iter().map(|c| c.norm_sqr()).sum();
        let residual = if norm2 > 0.0 { ((norm2 - captured).max(0.0) / norm2).sqrt() } else { 0.0 };
        let eigen = self.to_eigen(&herm);
        let total: f64 = eigen.iter().map(|c| c.norm_sqr()).sum();
        let uncertified = if total > 0.0 {
            eigen[self.certified..].iter().map(|c| c.norm_sqr()).sum::<f64>() / total
        } else {
            0.0
        };
        if residual > BASIS_TOLERANCE || uncertified > BASIS_TOLERANCE {
            return Err(Error::BasisTooSmall(format!(
                "expansion residual {residual:.3e}, uncertified mass {uncertified:.3e} with M = {} ({} certified)",
                self.basis_size, self.certified
            )));
        }
        Ok(Expansion { eigen, residual, uncertified_mass: uncertified })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub eigen: Vec<Complex64>,
    /// Relative L² norm of the part of u outside the span of the basis.
    pub residual: f64,
    /// Fraction of ∑|a_j|² carried by uncertified modes.
    pub uncertified_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    /// Eigen coordinates at each requested time.
    pub coefficients: Vec<Vec<Complex64>>,
    pub snapshots: Vec<SampledSignal>,
    pub expansion_residual: f64,
    pub basis_size: usize,
}

/// Solves ∂_t u + i a^w u = f with a^w replaced by the shifted power of the operator.
///
/// `forcing`, when given, holds f sampled at every entry of `times`, which must then
/// start at 0 and increase; the Duhamel integral uses the trapezoid rule on that grid.
pub fn propagate(
    basis: &SpectralBasis,
    u0: &SampledSignal,
    p: f64,
    times: &[f64],
    forcing: Option<&[SampledSignal]>,
) -> Result<EvolutionResult> {
    let c0 = basis.expand(u0)?;
    let forcing_coeffs = match forcing {
        None => None,
        Some(f) => {
            if f.len() != times.len() {
                return Err(crate::error::invalid("forcing needs one sample per time"));
            }
            if times.first() != Some(&0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
                return Err(crate::error::invalid("forcing requires increasing times starting at 0"));
            }
            Some(f.iter().map(|s| basis.expand(s).map(|e| e.eigen)).collect::<Result<Vec<_>>>()?)
        }
    };
    let nm = basis.basis_size;
    let mut coefficients = Vec::with_capacity(times.len());
    let mut integral = vec![Complex64::new(0.0, 0.0); nm];
    for (ti, &t) in times.iter().enumerate() {
        if let Some(fc) = &forcing_coeffs {
            if ti > 0 {
                let (t0, t1) = (times[ti - 1], t);
                for (j, acc) in integral.iter_mut().enumerate() {
                    let lam = basis.powered(j, p);
                    let g0 = fc[ti - 1][j] * Complex64::from_polar(1.0, lam * t0);
                    let g1 = fc[ti][j] * Complex64::from_polar(1.0, lam * t1);
                    *acc += (g0 + g1) * (0.5 * (t1 - t0));
                }
            }
        }
        let start: Vec<Complex64> = c0.eigen.iter().zip(&integral).map(|(a, b)| a + b).collect();
        coefficients.push(basis.evolve(&start, p, t));
    }
    let snapshots = coefficients
        .iter()
        .zip(times)
        .map(|(c, t)| basis.reconstruct(c, u0.grid, format!("{} at t={t}", u0.label)))
        .collect();
    Ok(EvolutionResult { times: times.to_vec(), coefficients, snapshots, expansion_residual: c0.residual, basis_size: nm })
}

/// (Σ_j (λ_j + C)^{s/(kp)} |(u, φ_j)|²)^{1/2}.
pub fn modulation_norm(basis: &SpectralBasis, u: &SampledSignal, s: f64, k: u32, p: f64) -> Result<f64> {
    let e = basis.expand(u)?;
    Ok(modulation_norm_coeffs(basis, &e.eigen, s, k, p))
}

pub fn modulation_norm_coeffs(basis: &SpectralBasis, eigen: &[Complex64], s: f64, k: u32, p: f64) -> f64 {
    let ex = s / (k as f64 * p);
    eigen
        .iter()
        .enumerate()
        .map(|(j, a)| (basis.eigenvalues[j] + basis.shift_c).powf(ex) * a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Settings of the propagation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PropagationConfig {
    pub phase_grid: PhaseGrid,
    pub window: WindowKind,
    pub decay: DecayConfig,
    pub eps: f64,
    pub rho: f64,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            phase_grid: PhaseGrid::default(),
            window: WindowKind::Gaussian,
            decay: DecayConfig::default(),
            eps: 0.1,
            rho: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub name: String,
    pub member_at_0: bool,
    pub exponent_at_0: f64,
    /// Membership of the transported region (critical) or of the same region at time t.
    pub member_at_t: bool,
    pub exponent_at_t: f64,
    pub implication_holds: bool,
    pub converse_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationReport {
    pub t: f64,
    pub regime: Regime,
    pub rho_at_0: f64,
    pub rho_at_t: f64,
    /// Set when only an inclusion is available and the two ρ differ.
    pub rho_gap: Option<String>,
    pub regions: Vec<RegionVerdict>,
    pub directions_at_0: Vec<f64>,
    pub directions_at_t: Vec<f64>,
    /// Flow image of the time-0 directions; only defined in the critical regime.
    pub directions_predicted: Option<Vec<f64>>,
    pub direction_distance: Option<f64>,
    pub basis_size: usize,
    pub expansion_residual: f64,
    pub pass: bool,
}

/// Evolves u0 to time t and compares filter memberships at 0 and t.
pub fn verify_propagation(
    basis: &SpectralBasis,
    h: &HamiltonianSpec,
    u0: &SampledSignal,
    t: f64,
    regions: &[(String, RegionMask)],
    cfg: &PropagationConfig,
) -> Result<PropagationReport> {
    if basis.k != h.k() || basis.m != h.m() {
        return Err(crate::error::invalid("basis and hamiltonian use different (k, m)"));
    }
    let grid = cfg.phase_grid;
    // a supercritical p is tested with the largest admissible ρ whatever the configured one
    let regime = match h.regime(cfg.rho) {
        Regime::Uncovered if h.supercritical_admissible() => Regime::Supercritical,
        r => r,
    };
    let (rho0, rho_t, gap) = match regime {
        Regime::Supercritical => {
            let hi = h.rho_interval().1;
            (1.0, hi, Some(format!("inclusion only: time 0 tested with rho = 1, time t with rho = {hi}")))
        }
        _ => (cfg.rho, cfg.rho, None),
    };
    let p0 = h.params(rho0)?;
    let pt = h.params(rho_t)?;

    let evo = propagate(basis, u0, h.p(), &[0.0, t], None)?;
    let sg = u0.grid;
    let limit = sg.x_max.min(core::f64::consts::PI / sg.h());
    let herm = basis.to_hermite(&evo.coefficients[1]);
    let total: f64 = herm.iter().map(|c| c.norm_sqr()).sum();
    let escaped: f64 = herm.iter().enumerate().filter(|(n, _)| ((2 * n + 1) as f64).sqrt() > limit).map(|(_, c)| c.norm_sqr()).sum();
    if total > 0.0 && escaped / total > BASIS_TOLERANCE {
        return Err(Error::GridEscape(format!(
            "{:.3e} of the mass at t = {t} sits in modes beyond the spatial grid",
            escaped / total
        )));
    }
    let w = Window::new(cfg.window.clone(), sg)?;
    let f0 = analyze(&evo.snapshots[0], &w, grid)?;
    let ft = analyze(&evo.snapshots[1], &w, grid)?;

    let mut verdicts = Vec::with_capacity(regions.len());
    for (name, omega) in regions {
        if *omega.grid() != grid {
            return Err(Error::MismatchedGrids(format!("region {name} is not on the configured phase grid")));
        }
        let r0 = filter_membership(&f0, &p0, omega, cfg.eps, &cfg.decay)?;
        let target = if regime == Regime::Subcritical { omega.clone() } else { transport_region(h, omega, t) };
        let rt = filter_membership(&ft, &pt, &target, cfg.eps, &cfg.decay)?;
        verdicts.push(RegionVerdict {
            name: name.clone(),
            member_at_0: r0.member,
            exponent_at_0: r0.estimated_exponent,
            member_at_t: rt.member,
            exponent_at_t: rt.estimated_exponent,
            implication_holds: !r0.member || rt.member,
            converse_holds: !rt.member || r0.member,
        });
    }
    let d0 = wavefront_extract(&f0, &p0, &cfg.decay)?;
    let dt = wavefront_extract(&ft, &pt, &cfg.decay)?;
    let predicted = match regime {
        Regime::Critical => Some(
            d0.iter()
                .map(|a| ray_param(&p0, h.map(unit_curve_point(&p0, *a), t)))
                .collect::<Vec<_>>(),
        ),
        _ => None,
    };
    let distance = predicted.as_ref().map(|p| direction_set_distance(p, &dt));
    let pass = verdicts.iter().all(|v| v.implication_holds);
    Ok(PropagationReport {
        t,
        regime,
        rho_at_0: rho0,
        rho_at_t: rho_t,
        rho_gap: gap,
        regions: verdicts,
        directions_at_0: d0,
        directions_at_t: dt,
        directions_predicted: predicted,
        direction_distance: distance,
        basis_size: basis.basis_size,
        expansion_residual: evo.expansion_residual,
        pass,
    })
}
