use anisofilter_core::geometry::*;
use anisofilter_core::signal::*;
use anisofilter_core::singularity::*;
use anisofilter_core::stft::*;
use anisofilter_core::Error;
use std::f64::consts::PI;
use std::sync::OnceLock;

struct Fields {
    p: AnisoParams,
    delta: STFTField,
    constant: STFTField,
    gauss: STFTField,
}

/// The σ = 2 grid reaches θ = 21 along the frequency axis.
fn phase_grid(k: u32) -> PhaseGrid {
    if k == 1 {
        PhaseGrid::default()
    } else {
        PhaseGrid::new(20.0, 400.0, 257, 257).unwrap()
    }
}

fn build(k: u32, kind: WindowKind) -> Fields {
    let pg = phase_grid(k);
    let sg = SpatialGrid::for_phase_grid(&pg, 12.0).unwrap();
    let w = Window::new(kind.clone(), sg).unwrap();
    let delta = exact_delta_field(&w, pg);
    let gauss = analyze(&make_catalog_signal(&SignalKind::Gaussian { width: 1.0 }, sg).unwrap(), &w, pg).unwrap();
    // the constant is sampled well past the phase grid so the cut-off edge stays out of reach
    let wide = SpatialGrid::with_spacing(40.0, sg.h()).unwrap();
    let wc = Window::new(kind, wide).unwrap();
    let constant = analyze(&make_catalog_signal(&SignalKind::Constant, wide).unwrap(), &wc, pg).unwrap();
    Fields { p: AnisoParams::new(k, 1, 1.0).unwrap(), delta, constant, gauss }
}

fn fields(k: u32) -> &'static Fields {
    static ONE: OnceLock<Fields> = OnceLock::new();
    static TWO: OnceLock<Fields> = OnceLock::new();
    let cell = if k == 1 { &ONE } else { &TWO };
    cell.get_or_init(|| build(k, WindowKind::Gaussian))
}

fn hermite_fields() -> &'static Fields {
    static CELL: OnceLock<Fields> = OnceLock::new();
    CELL.get_or_init(|| build(1, WindowKind::Hermite { order: 2 }))
}

fn report(f: &STFTField, p: &AnisoParams, r: Region) -> FilterReport {
    let mask = RegionMask::from_region(r, f.grid);
    filter_membership(f, p, &mask, 0.1, &DecayConfig::default()).unwrap()
}

fn unambiguous(r: &FilterReport) -> bool {
    r.estimated_exponent < 2.0 || r.estimated_exponent > 8.0
}

#[test]
fn delta_and_constant_verdicts() {
    for k in [1, 2] {
        let fs = fields(k);
        let p = fs.p;
        let cases = [
            (Region::FreqCone { c: 1.0, k, m: 1 }, false, true),
            (Region::FreqCone { c: 5.0, k, m: 1 }, false, true),
            (Region::BracketFreq { c: 1.0, k, m: 1 }, true, false),
            (Region::PosCone { c: 1.0, k, m: 1 }, true, false),
            (Region::BracketPos { c: 1.0, k, m: 1 }, false, true),
        ];
        for (region, delta_member, const_member) in cases {
            let d = report(&fs.delta, &p, region.clone());
            let c = report(&fs.constant, &p, region.clone());
            assert_eq!(d.member, delta_member, "k={k} delta {region:?}: {}", d.estimated_exponent);
            assert_eq!(c.member, const_member, "k={k} constant {region:?}: {}", c.estimated_exponent);
            assert!(unambiguous(&d) && unambiguous(&c), "k={k} {region:?}");
            assert!(!d.caveat.is_empty() && !d.shell_table.is_empty());
        }
        for region in [Region::Annulus { r_in: 3.0, r_out: 30.0 }, Region::Whole] {
            assert!(report(&fs.gauss, &p, region).member);
        }
    }
}

#[test]
fn delta_decays_at_the_cap_away_from_the_frequency_axis() {
    let fs = fields(1);
    let cfg = DecayConfig::default();
    let d = decay_map(&fs.delta, &fs.p, &cfg).unwrap();
    for (t, e) in d.ray_params.iter().zip(&d.ray_exponents) {
        let off = (t - PI / 2.0).abs().min((t - 3.0 * PI / 2.0).abs());
        if off > 20f64.to_radians() {
            assert_eq!(*e, cfg.n_cap, "ray {t}");
        }
    }
    assert!(d.resolved.iter().any(|r| *r) && d.resolved.iter().any(|r| !*r));
}

#[test]
fn singular_directions() {
    let fs = fields(1);
    let cfg = DecayConfig::default();
    let tol = 2.0 * (2.0 * PI / cfg.n_rays as f64);
    let centres = |f: &STFTField| -> Vec<f64> {
        let wf = wavefront_extract(f, &fs.p, &cfg).unwrap();
        direction_clusters(&wf, cfg.n_rays).iter().map(|c| c.0).collect()
    };
    let d = centres(&fs.delta);
    assert_eq!(d.len(), 2);
    assert!(direction_set_distance(&d, &[PI / 2.0, 3.0 * PI / 2.0]) <= tol, "{d:?}");
    let c = centres(&fs.constant);
    assert_eq!(c.len(), 2);
    assert!(direction_set_distance(&c, &[0.0, PI]) <= tol, "{c:?}");
    assert!(wavefront_extract(&fs.gauss, &fs.p, &cfg).unwrap().is_empty());
}

#[test]
fn filter_axioms() {
    let fs = fields(1);
    let g = fs.delta.grid;
    let cfg = DecayConfig::default();
    let mask = |r: Region| RegionMask::from_region(r, g);
    let family = vec![
        mask(Region::FreqCone { c: 1.0, k: 1, m: 1 }),
        mask(Region::PosCone { c: 3.0, k: 1, m: 1 }.complement()),
        mask(Region::FreqCone { c: 1.0, k: 1, m: 1 }.rotated(0.2)),
        mask(Region::Union { items: vec![Region::FreqCone { c: 1.0, k: 1, m: 1 }, Region::HalfPlane { a: 1.0, b: 0.0, c: 5.0 }] }),
        mask(Region::PosCone { c: 1.0, k: 1, m: 1 }),
        mask(Region::Whole),
    ];
    let rep = filter_axioms_check(&fs.delta, &fs.p, &family, 0.1, &cfg).unwrap();
    assert_eq!(rep.members, vec![true, true, true, true, false, true]);
    assert!(rep.holds());
    let with_empty = vec![mask(Region::Empty), mask(Region::PosCone { c: 1.0, k: 1, m: 1 }), mask(Region::Whole)];
    let rep = filter_axioms_check(&fs.gauss, &fs.p, &with_empty, 0.1, &cfg).unwrap();
    assert!(rep.members.iter().all(|m| *m) && rep.holds());
    assert!(filter_axioms_check(&fs.gauss, &fs.p, &with_empty[..1], 0.1, &cfg).is_err());
}

#[test]
fn membership_is_monotone_in_the_region() {
    let fs = fields(1);
    let p = fs.p;
    // shrinking a member region keeps it a member; growing a non-member keeps it out
    let ladder = [1.0, 2.0, 4.0, 8.0];
    let verdicts: Vec<bool> = ladder.iter().map(|c| report(&fs.delta, &p, Region::PosCone { c: *c, k: 1, m: 1 }).member).collect();
    assert!(verdicts.iter().all(|v| *v));
    let verdicts: Vec<bool> =
        ladder.iter().map(|c| report(&fs.delta, &p, Region::FreqCone { c: 1.0 / c, k: 1, m: 1 }).member).collect();
    assert!(verdicts.iter().all(|v| !*v));
}

#[test]
fn verdicts_do_not_depend_on_the_window() {
    let (a, b) = (fields(1), hermite_fields());
    let p = a.p;
    let regions = [
        Region::FreqCone { c: 1.0, k: 1, m: 1 },
        Region::PosCone { c: 1.0, k: 1, m: 1 },
        Region::BracketFreq { c: 1.0, k: 1, m: 1 },
        Region::Annulus { r_in: 3.0, r_out: 30.0 },
    ];
    for r in regions {
        for (fa, fb) in [(&a.delta, &b.delta), (&a.constant, &b.constant), (&a.gauss, &b.gauss)] {
            let (ra, rb) = (report(fa, &p, r.clone()), report(fb, &p, r.clone()));
            assert_eq!(ra.member, rb.member, "{r:?}");
        }
    }
    // ray by ray the two windows agree up to the width of the transition band
    let cfg = DecayConfig::default();
    for (fa, fb) in [(&a.delta, &b.delta), (&a.constant, &b.constant)] {
        let wa = wavefront_extract(fa, &p, &cfg).unwrap();
        let wb = wavefront_extract(fb, &p, &cfg).unwrap();
        assert!(direction_set_distance(&wa, &wb) <= 3f64.to_radians());
    }
}

#[test]
fn verdicts_transport_under_the_fourier_transform() {
    // F δ is a constant and V_{Fφ}(Fu)(Jz) = V_φu(z) up to a phase, so a verdict for δ
    // on Ω with σ matches the verdict for the constant on JΩ with 1/σ
    for k in [1u32, 2] {
        let pg = phase_grid(k);
        let jg = pg.transposed();
        let p = AnisoParams::new(k, 1, 1.0).unwrap();
        let q = p.dual();
        let sg = SpatialGrid::with_spacing(jg.x_max + 12.0, (PI / (1.5 * jg.xi_max)).min(0.05)).unwrap();
        let w = Window::gaussian(sg);
        let cons = analyze(&make_catalog_signal(&SignalKind::Constant, sg).unwrap(), &w, jg).unwrap();
        let delta = &fields(k).delta;
        for r in [
            Region::FreqCone { c: 1.0, k, m: 1 },
            Region::PosCone { c: 1.0, k, m: 1 },
            Region::BracketFreq { c: 1.0, k, m: 1 },
        ] {
            let a = report(delta, &p, r.clone());
            let b = report(&cons, &q, r.clone().j_image());
            assert_eq!(a.member, b.member, "k={k} {r:?}: {} vs {}", a.estimated_exponent, b.estimated_exponent);
        }
    }
}

#[test]
fn short_radial_range_is_rejected() {
    let pg = PhaseGrid::square(5.0, 41).unwrap();
    let sg = SpatialGrid::for_phase_grid(&pg, 12.0).unwrap();
    let f = exact_delta_field(&Window::gaussian(sg), pg);
    let p = AnisoParams::isotropic();
    assert!(matches!(decay_map(&f, &p, &DecayConfig::default()), Err(Error::InsufficientRadialRange(_))));
    let mask = RegionMask::from_region(Region::Whole, pg);
    assert!(filter_membership(&f, &p, &mask, 0.1, &DecayConfig::default()).is_err());
}

#[test]
fn empty_target_and_bad_inputs() {
    let fs = fields(1);
    let g = fs.delta.grid;
    let cfg = DecayConfig::default();
    let empty = RegionMask::from_region(Region::Empty, g);
    assert!(matches!(filter_membership(&fs.delta, &fs.p, &empty, 0.1, &cfg), Err(Error::EmptyRegion)));
    assert!(in_filter(&fs.delta, &fs.p, &RegionMask::from_region(Region::Whole, g), 0.1, &cfg).unwrap());
    let whole = RegionMask::from_region(Region::Whole, g);
    assert!(filter_membership(&fs.delta, &fs.p, &whole, 0.0, &cfg).is_err());
    let bad = DecayConfig { n_rays: 4, ..cfg.clone() };
    assert!(decay_map(&fs.delta, &fs.p, &bad).is_err());
    let other = RegionMask::from_region(Region::Whole, PhaseGrid::square(20.0, 129).unwrap());
    assert!(matches!(filter_membership(&fs.delta, &fs.p, &other, 0.1, &cfg), Err(Error::MismatchedGrids(_))));
}

#[test]
fn decay_config_json() {
    let cfg: DecayConfig = serde_json::from_str(r#"{"n_rays": 360}"#).unwrap();
    assert_eq!(cfg.n_rays, 360);
    assert_eq!(cfg.n_cap, 12.0);
    assert!(serde_json::from_str::<DecayConfig>(r#"{"rays": 360}"#).is_err());
}
