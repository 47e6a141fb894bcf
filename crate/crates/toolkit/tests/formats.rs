use anisofilter::io::*;
use anisofilter_core::geometry::*;
use anisofilter_core::hamilton::HamiltonianSpec;
use anisofilter_core::schrodinger::{propagate, SpectralBasis};
use anisofilter_core::signal::*;
use anisofilter_core::singularity::{decay_map, filter_membership, DecayConfig};
use anisofilter_core::stft::*;
use anisofilter_core::symbols::*;
use anisofilter_core::Complex64;

fn small() -> (PhaseGrid, SpatialGrid) {
    let pg = PhaseGrid::new(6.0, 4.0, 25, 17).unwrap();
    (pg, SpatialGrid::for_phase_grid(&pg, 10.0).unwrap())
}

#[test]
fn masks_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = small();
    let m = RegionMask::from_region(Region::FreqCone { c: 1.5, k: 1, m: 1 }.complement(), g);
    write_mask_csv(&dir.path().join("m.csv"), &m).unwrap();
    write_mask_json(&dir.path().join("m.json"), &m).unwrap();
    let a = read_mask_csv(&dir.path().join("m.csv")).unwrap();
    let b = read_mask_json(&dir.path().join("m.json")).unwrap();
    assert_eq!(*a.grid(), g);
    assert_eq!(a.raster(), m.raster());
    assert_eq!(b.raster(), m.raster());
    let text = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert!(text.starts_with("x,xi,inside\n-6,-4,"));
    let f: MaskFile = read_json(&dir.path().join("m.json")).unwrap();
    assert!(f.region.is_some());
    assert_eq!(f.runs.iter().sum::<usize>(), g.len());
}

#[test]
fn signals_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (_, sg) = small();
    let u = make_catalog_signal(&SignalKind::Chirp { rate: 0.7 }, sg).unwrap();
    write_signal_csv(&dir.path().join("chirp.csv"), &u).unwrap();
    write_signal_json(&dir.path().join("chirp.json"), &u).unwrap();
    let a = read_signal_csv(&dir.path().join("chirp.csv")).unwrap();
    assert_eq!(a.grid, u.grid);
    assert_eq!(a.values, u.values);
    assert_eq!(a.label, "chirp");
    assert_eq!(read_signal_json(&dir.path().join("chirp.json")).unwrap(), u);
}

#[test]
fn stft_and_symbols_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (pg, sg) = small();
    let w = Window::new(WindowKind::Hermite { order: 1 }, sg).unwrap();
    let f = analyze(&make_catalog_signal(&SignalKind::Hermite { order: 2 }, sg).unwrap(), &w, pg).unwrap();
    write_stft_csv(&dir.path().join("f.csv"), &f).unwrap();
    write_stft_bin(&dir.path().join("f.bin"), &f).unwrap();
    assert_eq!(read_stft_csv(&dir.path().join("f.csv"), f.window.clone(), &f.source_label).unwrap(), f);
    assert_eq!(read_stft_bin(&dir.path().join("f.bin")).unwrap(), f);
    assert_eq!(std::fs::metadata(dir.path().join("f.bin")).unwrap().len(), 16 * pg.len() as u64);

    let a = power_hamiltonian(0.875, 2, 1, 0.5, pg).unwrap();
    write_symbol_csv(&dir.path().join("a.csv"), &a).unwrap();
    write_symbol_bin(&dir.path().join("a.bin"), &a).unwrap();
    assert_eq!(read_symbol_csv(&dir.path().join("a.csv"), a.order_r, a.params, &a.label).unwrap(), a);
    assert_eq!(read_symbol_bin(&dir.path().join("a.bin")).unwrap(), a);
    // a complex sidecar is not a symbol
    assert!(read_symbol_bin(&dir.path().join("f.bin")).is_err());
}

#[test]
fn cutoff_spec_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g = PhaseGrid::square(2.2, 161).unwrap();
    let om = RegionMask::from_region(Region::AnisoBox { x0: 0.0, xi0: 0.0, rx: 0.25, rxi: 0.25 }, g);
    let spec = CutoffSpec::new(AnisoParams::isotropic(), om, 0.05, 0.95).unwrap();
    let p = dir.path().join("cut.json");
    write_cutoff_json(&p, &spec).unwrap();
    let back = read_cutoff_json(&p).unwrap();
    assert_eq!((back.eps, back.delta, back.mu, back.params), (spec.eps, spec.delta, spec.mu, spec.params));
    assert_eq!(back.omega.raster(), spec.omega.raster());
}

#[test]
fn decay_and_filter_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pg = PhaseGrid::default();
    let sg = SpatialGrid::for_phase_grid(&pg, 12.0).unwrap();
    let f = exact_delta_field(&Window::gaussian(sg), pg);
    let p = AnisoParams::isotropic();
    let d = decay_map(&f, &p, &DecayConfig::default()).unwrap();
    write_decay_csv(&dir.path().join("d.csv"), &d).unwrap();
    let (g, e) = read_decay_csv(&dir.path().join("d.csv")).unwrap();
    assert_eq!(g, pg);
    for (a, b) in e.iter().zip(&d.exponents) {
        assert!(a == b || (a.is_nan() && b.is_nan()));
    }
    let mask = RegionMask::from_region(Region::PosCone { c: 1.0, k: 1, m: 1 }, pg);
    let r = filter_membership(&f, &p, &mask, 0.1, &DecayConfig::default()).unwrap();
    write_filter_json(&dir.path().join("r.json"), &r).unwrap();
    let back = read_filter_json(&dir.path().join("r.json")).unwrap();
    assert_eq!(back.member, r.member);
    assert_eq!(back.estimated_exponent, r.estimated_exponent);
    assert_eq!(back.shell_table, r.shell_table);
    assert_eq!(back.region.raster(), r.region.raster());
}

#[test]
fn trajectories_bases_and_evolutions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let h = HamiltonianSpec::new(2, 1, 0.875, 0.5).unwrap();
    let tr = h.flow_rk4(PhasePoint::new(1.0, 0.5), 1.0, 0.01).unwrap();
    write_trajectory_csv(&dir.path().join("t.csv"), &tr).unwrap();
    assert_eq!(read_trajectory_csv(&dir.path().join("t.csv")).unwrap(), tr);

    let b = SpectralBasis::build(2, 1, 64).unwrap();
    write_basis(&dir.path().join("basis.bin"), &b).unwrap();
    assert_eq!(read_basis(&dir.path().join("basis.bin")).unwrap(), b);
    let header: serde_json::Value = read_json(&dir.path().join("basis.json")).unwrap();
    assert_eq!(header["M"], 64);
    assert_eq!(header["residuals"].as_array().unwrap().len(), 64);

    let hb = SpectralBasis::build(1, 1, 64).unwrap();
    let sg = SpatialGrid::new(10.0, 201).unwrap();
    let u = make_catalog_signal(&SignalKind::Hermite { order: 1 }, sg).unwrap();
    let evo = propagate(&hb, &u, 1.0, &[0.0, 0.5, 1.0], None).unwrap();
    let files = write_evolution(dir.path(), &evo).unwrap();
    assert_eq!(files.len(), 5);
    let (times, snaps) = read_evolution(dir.path()).unwrap();
    assert_eq!(times, evo.times);
    for (a, b) in snaps.iter().zip(&evo.snapshots) {
        assert_eq!(a.values, b.values);
    }
}

#[test]
fn malformed_files_are_rejected_with_paths() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    std::fs::write(&p, "x,xi,wrong\n0,0,1\n").unwrap();
    let e = read_mask_csv(&p).unwrap_err().to_string();
    assert!(e.contains("bad.csv") && e.contains("x,xi,inside"), "{e}");
    std::fs::write(&p, "x,re,im\n-1,0,abc\n").unwrap();
    assert!(read_signal_csv(&p).is_err());
    let missing = read_basis(&dir.path().join("none.bin")).unwrap_err().to_string();
    assert!(missing.contains("none.json"), "{missing}");
    let s = SampledSignal::new(SpatialGrid::new(1.0, 16).unwrap(), vec![Complex64::new(1.0, 0.0); 16], "one").unwrap();
    write_signal_csv(&p, &s).unwrap();
    assert!(read_mask_csv(&p).is_err());
}
