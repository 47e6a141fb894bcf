//! Acceptance suite: one line per criterion, failing criteria reported as such.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach stdout.

use anisofilter::commands::{cmd_figure, Figure, FigureParams};
use anisofilter::io;
use anisofilter_core::geometry::properties::*;
use anisofilter_core::geometry::*;
use anisofilter_core::hamilton::*;
use anisofilter_core::schrodinger::*;
use anisofilter_core::signal::*;
use anisofilter_core::singularity::*;
use anisofilter_core::stft::*;
use anisofilter_core::symbols::*;
use anisofilter_core::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

// Γ(1/4) to 20 digits
const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_311_9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn default_grids() -> (PhaseGrid, SpatialGrid) {
    let pg = PhaseGrid::default();
    (pg, SpatialGrid::for_phase_grid(&pg, 12.0).unwrap())
}

fn c1_delta_field() -> Outcome {
    let (pg, sg) = default_grids();
    let f = exact_delta_field(&Window::gaussian(sg), pg);
    let mut dev = 0.0f64;
    for (idx, z) in pg.points().enumerate() {
        let want = (2.0 * PI).powf(-0.5) * PI.powf(-0.25) * (-0.5 * z.x * z.x).exp();
        dev = dev.max((f.values[idx].norm() - want).abs());
    }
    outcome(dev < 1e-10, format!("max deviation {dev:.2e} (limit 1e-10)"))
}

fn c2_inversion() -> Outcome {
    let (pg, sg) = default_grids();
    let w = Window::gaussian(sg);
    let wn = w.samples.l2_norm().powi(2);
    let mut worst = 0.0f64;
    for kind in [SignalKind::Gaussian { width: 1.0 }, SignalKind::Hermite { order: 3 }, SignalKind::Chirp { rate: 1.0 }] {
        let u = make_catalog_signal(&kind, sg).unwrap();
        let back = synthesize(&analyze(&u, &w, pg).unwrap(), &w).unwrap();
        let err = back.distance(&u.scaled(Complex64::new(wn, 0.0))).unwrap() / u.l2_norm();
        worst = worst.max(err);
    }
    outcome(worst < 1e-6, format!("worst relative error {worst:.2e} (limit 1e-6)"))
}

fn sigma_grid(k: u32) -> PhaseGrid {
    if k == 1 {
        PhaseGrid::default()
    } else {
        PhaseGrid::new(20.0, 400.0, 257, 257).unwrap()
    }
}

fn verdict(f: &STFTField, p: &AnisoParams, r: Region) -> FilterReport {
    filter_membership(f, p, &RegionMask::from_region(r, f.grid), 0.1, &DecayConfig::default()).unwrap()
}

fn c3_metaplectic() -> Outcome {
    let (pg, sg) = default_grids();
    let w = Window::gaussian(sg);
    let mut worst = 0.0f64;
    for kind in [SignalKind::Gaussian { width: 1.0 }, SignalKind::Chirp { rate: 1.0 }] {
        let u = make_catalog_signal(&kind, sg).unwrap();
        for op in [Metaplectic::Fourier, Metaplectic::Dilation { a: 2.0 }] {
            worst = worst.max(metaplectic_check(&u, &w, op, pg).unwrap());
        }
    }
    let mut mismatched = 0;
    let mut compared = 0;
    for k in [1u32, 2] {
        let pg = sigma_grid(k);
        let p = AnisoParams::new(k, 1, 1.0).unwrap();
        let sg = SpatialGrid::for_phase_grid(&pg, 12.0).unwrap();
        let delta = exact_delta_field(&Window::gaussian(sg), pg);
        let jg = pg.transposed();
        let cg = SpatialGrid::with_spacing(jg.x_max + 12.0, (PI / (1.5 * jg.xi_max)).min(0.05)).unwrap();
        let cons = analyze(&make_catalog_signal(&SignalKind::Constant, cg).unwrap(), &Window::gaussian(cg), jg).unwrap();
        for r in [
            Region::FreqCone { c: 1.0, k, m: 1 },
            Region::PosCone { c: 1.0, k, m: 1 },
            Region::BracketFreq { c: 1.0, k, m: 1 },
        ] {
            compared += 1;
            if verdict(&delta, &p, r.clone()).member != verdict(&cons, &p.dual(), r.j_image()).member {
                mismatched += 1;
            }
        }
    }
    outcome(
        worst < 1e-6 && mismatched == 0,
        format!("covariance deviation {worst:.2e} (limit 1e-6), J-transported verdicts {}/{compared} agree", compared - mismatched),
    )
}

fn c4_delta_and_constant() -> Outcome {
    let mut wrong = Vec::new();
    let mut ambiguous = 0;
    let mut n = 0;
    for k in [1u32, 2] {
        let pg = sigma_grid(k);
        let p = AnisoParams::new(k, 1, 1.0).unwrap();
        let sg = SpatialGrid::for_phase_grid(&pg, 12.0).unwrap();
        let delta = exact_delta_field(&Window::gaussian(sg), pg);
        let wide = SpatialGrid::with_spacing(40.0, sg.h()).unwrap();
        let cons = analyze(&make_catalog_signal(&SignalKind::Constant, wide).unwrap(), &Window::gaussian(wide), pg).unwrap();
        // (region, δ smooth there, constant smooth there)
        let cases = [
            (Region::BracketFreq { c: 1.0, k, m: 1 }, true, false),
            (Region::PosCone { c: 1.0, k, m: 1 }, true, false),
            (Region::FreqCone { c: 1.0, k, m: 1 }, false, true),
            (Region::FreqCone { c: 5.0, k, m: 1 }, false, true),
            (Region::BracketPos { c: 1.0, k, m: 1 }, false, true),
        ];
        for (r, d_want, c_want) in cases {
            for (f, want, who) in [(&delta, d_want, "delta"), (&cons, c_want, "constant")] {
                let v = verdict(f, &p, r.clone());
                n += 1;
                let e = v.estimated_exponent;
                if !(e < 2.0 || e > 8.0) {
                    ambiguous += 1;
                }
                if v.member != want {
                    wrong.push(format!("k={k} {who} {r:?}: exponent {e:.2}"));
                }
            }
        }
    }
    outcome(
        wrong.is_empty() && ambiguous == 0,
        format!("{}/{n} verdicts correct, {ambiguous} ambiguous{}", n - wrong.len(), if wrong.is_empty() { String::new() } else { format!("; wrong: {}", wrong.join("; ")) }),
    )
}

/// T = B(1/2k, 1/2m)/(k m p) · R^{1/2k + 1/2m − p} on the level x^{2k} + ξ^{2m} = R.
fn period_oracle(k: u32, m: u32, p: f64, z: PhasePoint) -> f64 {
    let r = z.x.powi(2 * k as i32) + z.xi.powi(2 * m as i32);
    let beta = match (k, m) {
        (1, 1) => PI,
        // B(1/4, 1/2) = Γ(1/4)²/√(2π)
        (2, 1) => GAMMA_QUARTER * GAMMA_QUARTER / (2.0 * PI).sqrt(),
        _ => unreachable!(),
    };
    let (kf, mf) = (k as f64, m as f64);
    beta / (kf * mf * p) * r.powf(0.5 / kf + 0.5 / mf - p)
}

fn c5_period() -> Outcome {
    let mut closure = 0.0f64;
    let mut drift = 0.0f64;
    let mut formula = 0.0f64;
    for (k, m, p) in [(1, 1, 1.2), (2, 1, 0.875)] {
        let h = HamiltonianSpec::new(k, m, p, 0.5).unwrap();
        for z in [PhasePoint::new(1.0, 0.0), PhasePoint::new(0.0, 2.0), PhasePoint::new(1.5, -1.5)] {
            let t = period_oracle(k, m, p, z);
            formula = formula.max((h.period(z) - t).abs() / t);
            let tr = h.flow_rk4(z, t, f64::INFINITY).unwrap();
            let end = tr.end();
            closure = closure.max((end.x - z.x).hypot(end.xi - z.xi) / z.norm());
            drift = drift.max(tr.relative_energy_drift());
        }
    }
    outcome(
        closure < 1e-6 && drift < 1e-8 && formula < 1e-10,
        format!("closure {closure:.2e} (limit 1e-6), energy drift {drift:.2e} (limit 1e-8), period vs Beta-function form {formula:.1e}"),
    )
}

fn c6_regimes() -> Outcome {
    let h1 = HamiltonianSpec::new(1, 1, 1.2, 0.5).unwrap();
    let h2 = HamiltonianSpec::new(2, 1, 0.875, 0.5).unwrap();
    let (a1, b1) = h1.rho_interval();
    let (a2, b2) = h2.rho_interval();
    let ok = (a1 - 0.5).abs() < 1e-12
        && (b1 - (3.0 - 2.0 * 1.2)).abs() < 1e-12
        && (a2 - 0.5).abs() < 1e-12
        && (b2 - 4.0 * (1.0 - 0.875)).abs() < 1e-12
        && h1.p_c() == 1.0
        && h2.p_c() == 0.75;
    let hom = homogeneity_check(&HamiltonianSpec::new(2, 1, 0.75, 0.5).unwrap(), 1000, 7);
    outcome(
        ok && hom.max_deviation < 1e-10,
        format!("rho intervals [{a1}, {b1}] and [{a2}, {b2}], p_c = {} and {}, homogeneity deviation {:.1e}", h1.p_c(), h2.p_c(), hom.max_deviation),
    )
}

/// Ground state of −d² + x⁴ by dense diagonalisation of the Fourier collocation matrix.
fn quartic_dense_oracle(n: usize, half_width: f64) -> f64 {
    let l = 2.0 * half_width;
    let h = 2.0 * PI / n as f64;
    let scale = (2.0 * PI / l).powi(2);
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let x = -half_width + i as f64 * l / n as f64;
        for j in 0..n {
            // second-derivative matrix of the periodic sinc interpolant, N even
            let d2 = if i == j {
                -PI * PI / (3.0 * h * h) - 1.0 / 6.0
            } else {
                let s = ((i as f64 - j as f64) * h / 2.0).sin();
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                -sign / (2.0 * s * s)
            };
            a[(i, j)] = -scale * d2;
        }
        a[(i, i)] += x.powi(4);
    }
    a.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

fn c7_spectra() -> Outcome {
    let b = SpectralBasis::build(1, 1, 200).unwrap();
    let harm = (0..20).map(|j| (b.eigenvalues[j] - (2 * j + 1) as f64).abs()).fold(0.0, f64::max);
    let q = SpectralBasis::build(2, 1, 200).unwrap();
    let oracle = quartic_dense_oracle(256, 8.0);
    let d = (q.eigenvalues[0] - oracle).abs();
    outcome(
        harm < 1e-8 && d < 1e-6,
        format!("harmonic max |λ_j − (2j+1)| {harm:.1e} (limit 1e-8); quartic ground {:.12} vs dense oracle {oracle:.12}, diff {d:.1e} (limit 1e-6)", q.eigenvalues[0]),
    )
}

fn c8_evolution() -> Outcome {
    let sg = SpatialGrid::new(16.0, 801).unwrap();
    let b = SpectralBasis::build(1, 1, 200).unwrap();
    let u0 = SampledSignal::from_fn(sg, "packet", |x| Complex64::from_polar(PI.powf(-0.25) * (-0.5 * (x - 1.5).powi(2)).exp(), 0.8 * x));
    let e0 = b.expand(&u0).unwrap().eigen;
    let n0: f64 = e0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut unit = 0.0f64;
    for t in [0.3, 1.0, 2.5, 7.0, 40.0] {
        let n: f64 = b.evolve(&e0, 1.0, t).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        unit = unit.max((n / n0 - 1.0).abs());
    }
    let rev = propagate(&b, &u0, 1.0, &[2.0 * PI], None).unwrap();
    let revival = rev.snapshots[0].distance(&u0).unwrap() / u0.l2_norm();
    let (s, t) = (0.4, 1.1);
    let a = propagate(&b, &u0, 1.0, &[s], None).unwrap();
    let ab = propagate(&b, &a.snapshots[0], 1.0, &[t], None).unwrap();
    let direct = propagate(&b, &u0, 1.0, &[s + t], None).unwrap();
    let group = ab.snapshots[0].distance(&direct.snapshots[0]).unwrap() / u0.l2_norm();
    outcome(
        unit < 1e-9 && revival < 1e-7 && group < 1e-8,
        format!("unitarity {unit:.1e} (limit 1e-9), revival {revival:.1e} (limit 1e-7), group law {group:.1e} (limit 1e-8)"),
    )
}

fn suite(g: PhaseGrid, regions: &[(&str, Region)]) -> Vec<(String, RegionMask)> {
    regions.iter().map(|(n, r)| (n.to_string(), RegionMask::from_region(r.clone(), g))).collect()
}

fn propagation_data() -> (SpectralBasis, SampledSignal, PropagationConfig) {
    let b = SpectralBasis::build(1, 1, 1600).unwrap();
    let sg = SpatialGrid::new(50.0, 3335).unwrap();
    let u0 = make_catalog_signal(&SignalKind::DeltaApprox { width: 0.1 }, sg).unwrap();
    (b, u0, PropagationConfig::default())
}

fn c9_critical(b: &SpectralBasis, u0: &SampledSignal, cfg: &PropagationConfig) -> Outcome {
    let h = HamiltonianSpec::new(1, 1, 1.0, 0.5).unwrap();
    let regions = suite(
        cfg.phase_grid,
        &[
            ("freq_cone", Region::FreqCone { c: 1.0, k: 1, m: 1 }),
            ("freq_cone_complement", Region::FreqCone { c: 1.0, k: 1, m: 1 }.complement()),
            ("pos_cone", Region::PosCone { c: 1.0, k: 1, m: 1 }),
            ("pos_cone_2", Region::PosCone { c: 2.0, k: 1, m: 1 }),
            ("bracket_freq", Region::BracketFreq { c: 1.0, k: 1, m: 1 }),
            ("bracket_pos", Region::BracketPos { c: 1.0, k: 1, m: 1 }),
        ],
    );
    let t = PI / 4.0;
    let r = match verify_propagation(b, &h, u0, t, &regions, cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    // independent prediction: the harmonic flow turns every direction clockwise by 2t
    let rotated: Vec<f64> = r.directions_at_0.iter().map(|a| wrap_angle(a - 2.0 * t)).collect();
    let d = direction_set_distance(&rotated, &r.directions_at_t).to_degrees();
    let held = r.regions.iter().filter(|v| v.implication_holds).count();
    outcome(
        r.pass && d <= 5.0 && !r.directions_at_0.is_empty(),
        format!(
            "{} singular rays at 0, {} at t; distance to the rotated set {d:.2}° (limit 5°); implication holds for {held}/{} regions",
            r.directions_at_0.len(),
            r.directions_at_t.len(),
            r.regions.len()
        ),
    )
}

fn c10_supercritical(b: &SpectralBasis, u0: &SampledSignal, cfg: &PropagationConfig) -> Outcome {
    let h = HamiltonianSpec::new(1, 1, 1.2, 0.5).unwrap();
    let cone = Region::FreqCone { c: 5.0, k: 1, m: 1 };
    let regions = suite(
        cfg.phase_grid,
        &[
            ("omega_c", cone.clone()),
            ("omega_c_complement", cone.clone().complement()),
            ("pos_cone", Region::PosCone { c: 1.0, k: 1, m: 1 }),
        ],
    );
    let r = match verify_propagation(b, &h, u0, 2.0 / 1.2, &regions, cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let labelled = r.regime == Regime::Supercritical && r.rho_gap.is_some() && r.directions_predicted.is_none();
    let verdicts: Vec<String> = r
        .regions
        .iter()
        .map(|v| {
            format!(
                "{} {}->{} ({:.2}/{:.2})",
                v.name,
                if v.member_at_0 { "smooth" } else { "singular" },
                if v.member_at_t { "smooth" } else { "singular" },
                v.exponent_at_0,
                v.exponent_at_t
            )
        })
        .collect();
    outcome(
        r.pass && labelled,
        format!("regime {:?}, rho {} at 0 and {:.2} at t, gap labelled: {labelled}; {}", r.regime, r.rho_at_0, r.rho_at_t, verdicts.join(", ")),
    )
}

fn cutoff_on(n: usize, mu: Option<f64>) -> (CutoffSpec, SymbolField) {
    let g = PhaseGrid::square(2.2, n).unwrap();
    let om = RegionMask::from_region(Region::AnisoBox { x0: 0.0, xi0: 0.0, rx: 0.25, rxi: 0.25 }, g);
    let p = AnisoParams::isotropic();
    let spec = match mu {
        None => CutoffSpec::new(p, om, 0.05, 0.95).unwrap(),
        Some(mu) => CutoffSpec::with_mu(p, om, 0.05, 0.95, mu).unwrap(),
    };
    let q = mollified_cutoff(&spec, &g).unwrap();
    (spec, q)
}

fn c11_cutoff() -> Outcome {
    let (spec, q) = cutoff_on(641, None);
    let inner = aniso_neighborhood(&spec.params, &spec.omega, spec.eps).unwrap();
    let outer = aniso_neighborhood(&spec.params, &spec.omega, spec.delta).unwrap();
    let mut bad = 0;
    for (idx, v) in q.values.iter().enumerate() {
        let range = (0.0..=1.0 + 1e-12).contains(v);
        let one = !inner.raster()[idx] || (v - 1.0).abs() < 1e-12;
        let zero = outer.raster()[idx] || *v == 0.0;
        if !(range && one && zero) {
            bad += 1;
        }
    }
    let (_, fine) = cutoff_on(1281, Some(spec.mu));
    let a = symbol_estimate_check(&q, 3, 0.0).unwrap();
    let b = symbol_estimate_check(&fine, 3, 0.0).unwrap();
    let stable = refinement_stable(&a, &b, 1e-9);
    let worst = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| x.constant >= 1e-9 || y.constant >= 1e-9)
        .map(|(x, y)| (x.constant / y.constant).max(y.constant / x.constant))
        .fold(1.0, f64::max);
    outcome(
        bad == 0 && stable,
        format!("mu = {}, {bad} cells violate range/plateaus, {} constants, worst coarse/fine ratio {worst:.3} (limit 2)", spec.mu, a.len()),
    )
}

fn c12_geometry() -> Outcome {
    let mut violations = 0;
    let mut monotone = true;
    for (i, (k, m)) in [(1u32, 3u32), (1, 2), (1, 1), (2, 1), (3, 1)].into_iter().enumerate() {
        let p = AnisoParams::new(k, m, 1.0).unwrap();
        let seed = 1000 + i as u64;
        let (lo, hi) = weight_sandwich(&p, 10_000, seed);
        let mut fits = vec![quasi_triangle(&p, 10_000, seed), aniso_triangle(&p, 10_000, seed), lo, hi];
        for s in [-2.0, 1.0, 2.0] {
            fits.push(peetre(&p, s, peetre_constant(&p, s), 10_000, seed));
        }
        violations += fits.iter().map(|f| f.violations).sum::<usize>();
        if structural_constants(&p).c_k != 2f64.powi(2 * k as i32 - 1) {
            violations += 1;
        }
        let top = feasible_epsilon_bound(&p);
        let ladder: Vec<f64> = [0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|f| f * top).collect();
        let c = neighborhood_bound_ladder(&p, &ladder, 10_000, seed);
        monotone &= c.windows(2).all(|w| w[0] <= w[1]);
    }
    outcome(violations == 0 && monotone, format!("{violations} violations over 5 anisotropies, fitted neighbourhood constants monotone: {monotone}"))
}

fn c13_figures() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut identical = true;
    for (f, name) in [(Figure::Fig1a, "fig1a"), (Figure::Fig1b, "fig1b"), (Figure::Fig2a, "fig2a"), (Figure::Fig2b, "fig2b")] {
        cmd_figure(f, a.path()).unwrap();
        cmd_figure(f, b.path()).unwrap();
        let x = std::fs::read(a.path().join(format!("{name}.csv"))).unwrap();
        let y = std::fs::read(b.path().join(format!("{name}.csv"))).unwrap();
        identical &= x == y;
    }
    // fig1b against the rotation field: z is inside iff turning it back by 2p|z|^{2(p−1)}t lands in Ω_5
    let fp = FigureParams::of(Figure::Fig1b);
    let moved = io::read_mask_csv(&a.path().join("fig1b.csv")).unwrap();
    let g = *moved.grid();
    let (p, t) = (1.2, 2.0 / 1.2);
    let mut off = 0;
    let mut cells = 0;
    for (idx, z) in g.points().enumerate() {
        let r2 = z.x * z.x + z.xi * z.xi;
        if r2.sqrt() < fp.hamiltonian.mu() {
            continue;
        }
        let ang = 2.0 * p * r2.powf(p - 1.0) * t;
        let (s, c) = ang.sin_cos();
        let (x, xi) = (c * z.x - s * z.xi, s * z.x + c * z.xi);
        cells += 1;
        if (5.0 * x.abs() <= xi.abs()) != moved.raster()[idx] {
            off += 1;
        }
    }
    let q = FigureParams::of(Figure::Fig2b);
    let base = io::read_mask_csv(&a.path().join("fig2a.csv")).unwrap();
    let moved2 = io::read_mask_csv(&a.path().join("fig2b.csv")).unwrap();
    let fc = forward_consistency(&q.hamiltonian, &base, &moved2, q.t);
    outcome(
        identical && off == 0 && fc >= 0.99,
        format!("byte-identical reruns: {identical}; fig1b differs from the rotation field in {off}/{cells} cells; fig2b consistency {fc:.4} (limit 0.99)"),
    )
}

fn main() {
    // `cargo test` passes harness flags such as --quiet; only a name filter is honoured
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = Vec::new();
    let mut run = |id: usize, title: &str, limit_s: f64, f: &mut dyn FnMut() -> Outcome| {
        if let Some(flt) = &filter {
            if !title.contains(flt.as_str()) {
                return;
            }
        }
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs < limit_s;
        println!(
            "criterion {id:2} {} {title}: {} [{secs:.1} s, budget {limit_s} s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass {
            failed.push(id);
        }
    };
    run(1, "stft exactness", 1.0, &mut c1_delta_field);
    run(2, "inversion", 10.0, &mut c2_inversion);
    run(3, "metaplectic covariance", 30.0, &mut c3_metaplectic);
    run(4, "delta and constant filters", 30.0, &mut c4_delta_and_constant);
    run(5, "period formula", 10.0, &mut c5_period);
    run(6, "regime bookkeeping", 1.0, &mut c6_regimes);
    run(7, "spectral solver", 60.0, &mut c7_spectra);
    run(8, "evolution", 30.0, &mut c8_evolution);
    // the first propagation criterion to run pays for the shared basis
    let data = std::sync::OnceLock::new();
    run(9, "critical propagation", 60.0, &mut || {
        let (b, u0, cfg) = data.get_or_init(propagation_data);
        c9_critical(b, u0, cfg)
    });
    run(10, "supercritical inclusion", 60.0, &mut || {
        let (b, u0, cfg) = data.get_or_init(propagation_data);
        c10_supercritical(b, u0, cfg)
    });
    run(11, "excision symbol", 30.0, &mut c11_cutoff);
    run(12, "geometry properties", 10.0, &mut c12_geometry);
    run(13, "figure reproduction", 60.0, &mut c13_figures);
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
