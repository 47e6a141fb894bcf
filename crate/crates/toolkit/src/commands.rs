//! The subcommands. Each writes its data files, `resolved_config.json` and
//! `report.json` into the output directory.

use crate::config::{ExperimentConfig, SignalSpec};
use crate::error::{Context, Result, ToolError};
use crate::io;
use crate::plot;
use anisofilter_core::geometry::{PhaseGrid, PhasePoint, Region, RegionMask};
use anisofilter_core::hamilton::{forward_consistency, transport_region, HamiltonianSpec};
use anisofilter_core::schrodinger::{modulation_norm_coeffs, propagate, verify_propagation, PropagationConfig, SpectralBasis};
use anisofilter_core::signal::{make_catalog_signal, SampledSignal, SignalKind};
use anisofilter_core::singularity::{decay_map, filter_membership, wavefront_extract};
use anisofilter_core::stft::{analyze, exact_delta_field, synthesize, STFTField, Window};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(with = "crate::io::loose_f64")]
    pub value: f64,
    #[serde(with = "crate::io::loose_f64")]
    pub limit: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), pass: value <= limit, value, limit, note: String::new() }
    }

    /// Passes when `value >= limit`.
    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), pass: value >= limit, value, limit, note: String::new() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub files: Vec<String>,
    #[serde(default)]
    pub details: serde_json::Value,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { command: command.into(), pass: true, checks: Vec::new(), files: Vec::new(), details: serde_json::Value::Null }
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn file(&mut self, p: &Path) {
        let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.files.push(name);
    }

    fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Stft,
    Decay,
    Flow,
    Transport,
    Evolve,
    Verify,
    Figure(Figure),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stft => "stft",
            Command::Decay => "decay",
            Command::Flow => "flow",
            Command::Transport => "transport",
            Command::Evolve => "evolve",
            Command::Verify => "verify",
            Command::Figure(_) => "figure",
        }
    }
}

/// Resolves the config, runs the command in `out` and writes `report.json`.
pub fn run(cmd: Command, cfg: ExperimentConfig, out: &Path) -> Result<Report> {
    std::fs::create_dir_all(out).map_err(|e| ToolError::io(out, e))?;
    let mut cfg = cfg.resolve()?;
    cfg.output_dir = out.to_path_buf();
    let report = match cmd {
        Command::Figure(f) => {
            io::write_json(&out.join("resolved_config.json"), &FigureParams::of(f))?;
            cmd_figure(f, out)?
        }
        _ => {
            io::write_json(&out.join("resolved_config.json"), &cfg)?;
            match cmd {
                Command::Stft => cmd_stft(&cfg, out)?,
                Command::Decay => cmd_decay(&cfg, out)?,
                Command::Flow => cmd_flow(&cfg, out)?,
                Command::Transport => cmd_transport(&cfg, out)?,
                Command::Evolve => cmd_evolve(&cfg, out)?,
                Command::Verify => cmd_verify(&cfg, out)?,
                Command::Figure(_) => unreachable!(),
            }
        }
    };
    io::write_json(&out.join("report.json"), &report)?;
    Ok(report)
}

fn sampled(cfg: &ExperimentConfig) -> Result<SampledSignal> {
    match &cfg.signal {
        SignalSpec::Delta => Err(ToolError::Config("signal `delta` has no samples here; use `delta_approx`".into())),
        SignalSpec::Catalog(k) => make_catalog_signal(k, cfg.spatial()).context("signal"),
    }
}

fn window(cfg: &ExperimentConfig) -> Result<Window> {
    Window::new(cfg.window.clone(), cfg.spatial()).context("window")
}

/// The STFT of the configured signal; δ₀ uses its exact field.
fn field(cfg: &ExperimentConfig, w: &Window) -> Result<(STFTField, Option<SampledSignal>)> {
    match cfg.signal {
        SignalSpec::Delta => Ok((exact_delta_field(w, cfg.phase_grid), None)),
        SignalSpec::Catalog(_) => {
            let u = sampled(cfg)?;
            let f = analyze(&u, w, cfg.phase_grid).context("stft")?;
            Ok((f, Some(u)))
        }
    }
}

fn region_masks(cfg: &ExperimentConfig, grid: PhaseGrid) -> Vec<(String, RegionMask)> {
    cfg.regions.iter().map(|r| (r.name.clone(), RegionMask::from_region(r.region.clone(), grid))).collect()
}

pub fn cmd_stft(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let mut rep = Report::new("stft");
    let w = window(cfg)?;
    let (f, u) = field(cfg, &w)?;
    let g = f.grid;
    if let Some(u) = &u {
        let p = out.join("signal.csv");
        io::write_signal_csv(&p, u)?;
        rep.file(&p);
        let p = out.join("signal.json");
        io::write_signal_json(&p, u)?;
        rep.file(&p);
        let p = out.join("signal.gp");
        io::write_text(&p, &plot::signal("signal.csv", &u.label))?;
        rep.file(&p);
    }
    let p = out.join("stft.csv");
    io::write_stft_csv(&p, &f)?;
    rep.file(&p);
    let p = out.join("stft.bin");
    io::write_stft_bin(&p, &f)?;
    rep.file(&p);
    rep.file(&io::sidecar(&p));
    let p = out.join("stft.gp");
    io::write_text(&p, &plot::heatmap("stft.csv", 5, &format!("|V u|, u = {}", f.source_label), true))?;
    rep.file(&p);

    match (&cfg.signal, &u) {
        (SignalSpec::Delta, _) => {
            let a = f.abs();
            let mut spread: f64 = 0.0;
            let mut dev: f64 = 0.0;
            let c = (2.0 * PI).powf(-0.5);
            for i in 0..g.nx {
                let col: Vec<f64> = (0..g.nxi).map(|j| a[g.index(i, j)]).collect();
                let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = col.iter().cloned().fold(0.0, f64::max);
                spread = spread.max(hi - lo);
                let want = c * w.eval(-g.x(i)).norm();
                dev = dev.max((hi - want).abs());
            }
            rep.push(Check::at_most("abs_is_xi_independent", spread, 1e-12));
            rep.push(Check::at_most("abs_matches_window", dev, 1e-10));
        }
        (SignalSpec::Catalog(k), Some(u)) => {
            let smooth = matches!(k, SignalKind::Gaussian { .. } | SignalKind::Hermite { .. } | SignalKind::Chirp { .. });
            if smooth {
                let back = synthesize(&f, &w).context("synthesis")?;
                let wn = w.samples.l2_norm().powi(2);
                let err = back.distance(&u.scaled(anisofilter_core::Complex64::new(wn, 0.0))).context("synthesis")? / u.l2_norm();
                rep.push(Check::at_most("inversion_relative_error", err, 1e-6));
            }
        }
        _ => {}
    }
    rep.details = serde_json::json!({ "grid": g, "max_abs": f.max_abs(), "source": f.source_label });
    Ok(rep.finish())
}

/// Exponents in [2, threshold) are treated as inconclusive.
const AMBIGUOUS_BELOW: f64 = 2.0;

pub fn cmd_decay(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let mut rep = Report::new("decay");
    let w = window(cfg)?;
    let (f, _) = field(cfg, &w)?;
    let dm = decay_map(&f, &cfg.params, &cfg.thresholds).context("decay map")?;
    let p = out.join("decay.csv");
    io::write_decay_csv(&p, &dm)?;
    rep.file(&p);
    let p = out.join("decay.gp");
    io::write_text(&p, &plot::heatmap("decay.csv", 3, "decay exponent", false))?;
    rep.file(&p);
    let mut verdicts = Vec::new();
    for (name, mask) in region_masks(cfg, f.grid) {
        let r = filter_membership(&f, &cfg.params, &mask, cfg.eps, &cfg.thresholds).context(&format!("region {name}"))?;
        let p = out.join(format!("filter_{name}.json"));
        io::write_filter_json(&p, &r)?;
        rep.file(&p);
        let e = r.estimated_exponent;
        let clear = e < AMBIGUOUS_BELOW || e >= r.n_threshold;
        rep.push(Check {
            name: format!("{name}_verdict_unambiguous"),
            pass: clear,
            value: e,
            limit: r.n_threshold,
            note: format!("smooth in region: {}", r.member),
        });
        verdicts.push(serde_json::json!({ "region": name, "smooth": r.member, "exponent": e }));
    }
    let dirs = wavefront_extract(&f, &cfg.params, &cfg.thresholds).context("wavefront")?;
    let p = out.join("wavefront.json");
    io::write_json(&p, &dirs)?;
    rep.file(&p);
    rep.details = serde_json::json!({ "regions": verdicts, "singular_directions": dirs.len() });
    Ok(rep.finish())
}

pub fn cmd_flow(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let mut rep = Report::new("flow");
    let h = cfg.hamiltonian;
    let t = cfg.final_time();
    let mut names = Vec::new();
    for (i, z) in cfg.starts.iter().enumerate() {
        let tr = h.flow_rk4(*z, t, f64::INFINITY).context(&format!("start {i}"))?;
        let p = out.join(format!("trajectory_{i:03}.csv"));
        io::write_trajectory_csv(&p, &tr)?;
        rep.file(&p);
        names.push(format!("trajectory_{i:03}.csv"));
        rep.push(Check::at_most(format!("start_{i}_energy_drift"), tr.relative_energy_drift(), 1e-8));
        if h.orbit_is_clean(*z) {
            let per = h.period(*z);
            let end = h.flow_rk4(*z, per, f64::INFINITY).context("period")?.end();
            let gap = (end.x - z.x).hypot(end.xi - z.xi) / z.norm();
            rep.push(Check::at_most(format!("start_{i}_closes_after_period"), gap, 1e-6).with_note(format!("T = {per}")));
        }
    }
    let p = out.join("trajectories.gp");
    io::write_text(&p, &plot::trajectories(&names, "hamiltonian flow"))?;
    rep.file(&p);
    rep.details = serde_json::json!({ "t": t, "p_c": h.p_c(), "rho_interval": h.rho_interval() });
    Ok(rep.finish())
}

pub fn cmd_transport(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let mut rep = Report::new("transport");
    let h = cfg.hamiltonian;
    for (name, mask) in region_masks(cfg, cfg.phase_grid) {
        let p = out.join(format!("{name}.csv"));
        io::write_mask_csv(&p, &mask)?;
        rep.file(&p);
        for (ti, &t) in cfg.times.iter().enumerate().filter(|(_, t)| **t != 0.0) {
            let moved = transport_region(&h, &mask, t);
            let stem = format!("{name}_t{ti:02}");
            for ext in ["csv", "json"] {
                let p = out.join(format!("{stem}.{ext}"));
                if ext == "csv" {
                    io::write_mask_csv(&p, &moved)?;
                } else {
                    io::write_mask_json(&p, &moved)?;
                }
                rep.file(&p);
            }
            let p = out.join(format!("{stem}.gp"));
            io::write_text(&p, &plot::mask(&format!("{stem}.csv"), &format!("{name} transported to t = {t}")))?;
            rep.file(&p);
            let fc = forward_consistency(&h, &mask, &moved, t);
            rep.push(Check::at_least(format!("{stem}_forward_consistency"), fc, 0.99));
        }
    }
    Ok(rep.finish())
}

/// Loads `basis.bin` from the output directory when it matches, otherwise builds and caches it.
fn basis(cfg: &ExperimentConfig, out: &Path) -> Result<(SpectralBasis, PathBuf)> {
    let p = out.join("basis.bin");
    let h = cfg.hamiltonian;
    if p.exists() {
        if let Ok(b) = io::read_basis(&p) {
            if b.k == h.k() && b.m == h.m() && b.basis_size == cfg.basis_size {
                return Ok((b, p));
            }
        }
    }
    let b = SpectralBasis::build(h.k(), h.m(), cfg.basis_size).context("basis")?;
    io::write_basis(&p, &b)?;
    Ok((b, p))
}

pub fn cmd_evolve(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let mut rep = Report::new("evolve");
    let u0 = sampled(cfg)?;
    let (b, bp) = basis(cfg, out)?;
    rep.file(&bp);
    rep.file(&io::sidecar(&bp));
    let p = cfg.hamiltonian.p();
    let evo = propagate(&b, &u0, p, &cfg.times, None).context("evolution")?;
    for f in io::write_evolution(out, &evo)? {
        rep.file(&f);
    }
    let n0: f64 = evo.coefficients.first().map_or(0.0, |c| c.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt());
    let k = cfg.hamiltonian.k();
    let mut unitarity: f64 = 0.0;
    let mut growth = [0.0f64; 2];
    let m0 = [0.0, 2.0].map(|s| modulation_norm_coeffs(&b, &evo.coefficients[0], s, k, p));
    for c in &evo.coefficients {
        let n: f64 = c.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        unitarity = unitarity.max((n / n0 - 1.0).abs());
        for (i, s) in [0.0, 2.0].iter().enumerate() {
            growth[i] = growth[i].max(modulation_norm_coeffs(&b, c, *s, k, p) / m0[i]);
        }
    }
    rep.push(Check::at_most("unitarity", unitarity, 1e-9));
    rep.push(Check::at_most("modulation_norm_ratio_s0", growth[0], 1.0 + 1e-6));
    rep.push(Check::at_most("modulation_norm_ratio_s2", growth[1], 1.0 + 1e-6));
    rep.details = serde_json::json!({
        "basis_size": b.basis_size,
        "certified": b.certified,
        "expansion_residual": evo.expansion_residual,
    });
    Ok(rep.finish())
}

pub fn cmd_verify(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let mut rep = Report::new("verify");
    let u0 = sampled(cfg)?;
    let (b, bp) = basis(cfg, out)?;
    rep.file(&bp);
    let pc = PropagationConfig {
        phase_grid: cfg.phase_grid,
        window: cfg.window.clone(),
        decay: cfg.thresholds,
        eps: cfg.eps,
        rho: cfg.params.rho(),
    };
    let t = cfg.final_time();
    let regions = region_masks(cfg, cfg.phase_grid);
    let r = verify_propagation(&b, &cfg.hamiltonian, &u0, t, &regions, &pc).context("propagation")?;
    let p = out.join("propagation.json");
    io::write_json(&p, &r)?;
    rep.file(&p);
    for v in &r.regions {
        rep.push(Check {
            name: format!("{}_implication", v.name),
            pass: v.implication_holds,
            value: v.exponent_at_t,
            limit: cfg.thresholds.n_threshold,
            note: format!("member at 0: {}, member at t: {}", v.member_at_0, v.member_at_t),
        });
    }
    if let Some(d) = r.direction_distance {
        rep.push(Check::at_most("singular_directions_rotate", d.to_degrees(), 5.0).with_note("degrees"));
    }
    rep.details = serde_json::json!({ "regime": r.regime, "rho_gap": r.rho_gap, "t": t });
    Ok(rep.finish())
}

/// Baked parameters of the two figure pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureParams {
    pub figure: Figure,
    pub hamiltonian: HamiltonianSpec,
    pub region: Region,
    pub t: f64,
    pub grid: PhaseGrid,
}

impl FigureParams {
    pub fn of(f: Figure) -> Self {
        let grid = PhaseGrid::square(6.0, 201).expect("valid grid");
        let (hamiltonian, region) = match f {
            Figure::Fig1a | Figure::Fig1b => {
                (HamiltonianSpec::new(1, 1, 1.2, 0.5).expect("valid"), Region::FreqCone { c: 5.0, k: 1, m: 1 })
            }
            Figure::Fig2a | Figure::Fig2b => {
                (HamiltonianSpec::new(2, 1, 0.875, 0.5).expect("valid"), Region::FreqCone { c: 3.0, k: 2, m: 1 })
            }
        };
        let t = match f {
            Figure::Fig1a | Figure::Fig2a => 0.0,
            Figure::Fig1b | Figure::Fig2b => 2.0 / hamiltonian.p(),
        };
        FigureParams { figure: f, hamiltonian, region, t, grid }
    }
}

/// Cells with |z| ≥ μ where the transported raster and the rotation construction differ.
pub fn rotation_mismatches(fp: &FigureParams, moved: &RegionMask) -> (usize, usize) {
    let p = fp.hamiltonian.p();
    let (mut bad, mut total) = (0, 0);
    for (idx, z) in fp.grid.points().enumerate() {
        let r2 = z.x * z.x + z.xi * z.xi;
        if r2.sqrt() < fp.hamiltonian.mu() {
            continue;
        }
        // pull back: undo a clockwise turn by 2p r^{2(p-1)} t
        let a = 2.0 * p * r2.powf(p - 1.0) * fp.t;
        let back = PhasePoint::new(a.cos() * z.x - a.sin() * z.xi, a.sin() * z.x + a.cos() * z.xi);
        total += 1;
        if fp.region.contains(back) != moved.raster()[idx] {
            bad += 1;
        }
    }
    (bad, total)
}

pub fn cmd_figure(f: Figure, out: &Path) -> Result<Report> {
    let mut rep = Report::new("figure");
    let fp = FigureParams::of(f);
    let name = serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let base = RegionMask::from_region(fp.region.clone(), fp.grid);
    let mask = if fp.t == 0.0 { base.clone() } else { transport_region(&fp.hamiltonian, &base, fp.t) };
    let p = out.join(format!("{name}.csv"));
    io::write_mask_csv(&p, &mask)?;
    rep.file(&p);
    let p = out.join(format!("{name}.json"));
    io::write_mask_json(&p, &mask)?;
    rep.file(&p);
    let p = out.join(format!("{name}.gp"));
    io::write_text(&p, &plot::mask(&format!("{name}.csv"), &name))?;
    rep.file(&p);
    match f {
        Figure::Fig1a | Figure::Fig2a => {
            rep.push(Check::at_least("cells_inside", mask.count() as f64, 1.0));
        }
        Figure::Fig1b => {
            let (bad, total) = rotation_mismatches(&fp, &mask);
            rep.push(Check::at_most("rotation_field_mismatches", bad as f64, 0.0).with_note(format!("{total} cells compared")));
        }
        Figure::Fig2b => {
            let fc = forward_consistency(&fp.hamiltonian, &base, &mask, fp.t);
            rep.push(Check::at_least("forward_backward_consistency", fc, 0.99));
        }
    }
    rep.details = serde_json::to_value(&fp).unwrap_or_default();
    Ok(rep.finish())
}
