//! Experiment configuration: one JSON document per run.

use crate::error::{Context, Result, ToolError};
use anisofilter_core::geometry::{AnisoParams, PhaseGrid, PhasePoint, Region};
use anisofilter_core::hamilton::HamiltonianSpec;
use anisofilter_core::signal::{SignalKind, SpatialGrid};
use anisofilter_core::singularity::DecayConfig;
use anisofilter_core::stft::WindowKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::path::{Path, PathBuf};

/// Input signal: the exact δ₀ or a sampled catalog signal.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Delta,
    Catalog(SignalKind),
}

impl Serialize for SignalSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SignalSpec::Delta => serde_json::json!({ "kind": "delta" }).serialize(s),
            SignalSpec::Catalog(k) => k.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SignalSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(d)?;
        if v.get("kind").and_then(|k| k.as_str()) == Some("delta") {
            if v.as_object().map_or(0, |o| o.len()) != 1 {
                return Err(D::Error::custom("signal kind `delta` takes no parameters"));
            }
            return Ok(SignalSpec::Delta);
        }
        SignalKind::deserialize(v).map(SignalSpec::Catalog).map_err(D::Error::custom)
    }
}

impl SignalSpec {
    pub fn label(&self) -> String {
        match self {
            SignalSpec::Delta => "delta".into(),
            SignalSpec::Catalog(k) => k.label(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedRegion {
    pub name: String,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub signal: SignalSpec,
    /// Sampling grid of the signal; derived from the phase grid when absent.
    pub spatial_grid: Option<SpatialGrid>,
    pub window: WindowKind,
    pub params: AnisoParams,
    pub phase_grid: PhaseGrid,
    pub hamiltonian: HamiltonianSpec,
    pub times: Vec<f64>,
    pub regions: Vec<NamedRegion>,
    pub thresholds: DecayConfig,
    pub eps: f64,
    pub basis_size: usize,
    /// Starting points of `flow`; `random_starts` more are drawn from the seed.
    pub starts: Vec<PhasePoint>,
    pub random_starts: usize,
    pub seed: u64,
    pub threads: usize,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            signal: SignalSpec::Catalog(SignalKind::Gaussian { width: 1.0 }),
            spatial_grid: None,
            window: WindowKind::Gaussian,
            params: AnisoParams::isotropic(),
            phase_grid: PhaseGrid::default(),
            hamiltonian: HamiltonianSpec::new(1, 1, 1.0, 0.5).expect("valid default"),
            times: vec![0.0, std::f64::consts::FRAC_PI_4],
            regions: vec![
                NamedRegion { name: "freq_cone".into(), region: Region::FreqCone { c: 1.0, k: 1, m: 1 } },
                NamedRegion { name: "pos_cone".into(), region: Region::PosCone { c: 1.0, k: 1, m: 1 } },
            ],
            thresholds: DecayConfig::default(),
            eps: 0.1,
            basis_size: 200,
            starts: vec![PhasePoint::new(1.0, 0.0), PhasePoint::new(0.0, 2.0)],
            random_starts: 0,
            seed: 0,
            threads: 1,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ToolError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ToolError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            ToolError::Config(m) => ToolError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Checks ranges and fills every derived default, so the result is the
    /// configuration that actually runs.
    pub fn resolve(mut self) -> Result<Self> {
        let bad = |m: &str| Err(ToolError::Config(m.to_string()));
        self.phase_grid.validate().context("phase_grid")?;
        if self.times.iter().any(|t| !t.is_finite()) {
            return bad("times must be finite");
        }
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if self.basis_size < 32 {
            return bad("basis_size must be at least 32");
        }
        if self.threads == 0 {
            return bad("threads must be at least 1");
        }
        for (i, r) in self.regions.iter().enumerate() {
            let ok = !r.name.is_empty() && r.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !ok {
                return bad(&format!("region name {:?} must be non-empty and use [A-Za-z0-9_-]", r.name));
            }
            if self.regions[..i].iter().any(|o| o.name == r.name) {
                return bad(&format!("duplicate region name {:?}", r.name));
            }
        }
        let sg = match self.spatial_grid {
            Some(g) => SpatialGrid::new(g.x_max, g.n).context("spatial_grid")?,
            None => SpatialGrid::for_phase_grid(&self.phase_grid, 12.0).context("spatial_grid")?,
        };
        self.spatial_grid = Some(sg);
        if self.random_starts > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let r = self.phase_grid.x_max.min(self.phase_grid.xi_max);
            let mu = self.hamiltonian.mu();
            for _ in 0..self.random_starts {
                let rad = rng.gen_range(mu.max(0.1)..r);
                let ang = rng.gen_range(0.0..std::f64::consts::TAU);
                self.starts.push(PhasePoint::new(rad * ang.cos(), rad * ang.sin()));
            }
            self.random_starts = 0;
        }
        Ok(self)
    }

    pub fn spatial(&self) -> SpatialGrid {
        self.spatial_grid.unwrap_or_else(|| SpatialGrid::for_phase_grid(&self.phase_grid, 12.0).expect("validated grid"))
    }

    /// The largest requested time, or 0.
    pub fn final_time(&self) -> f64 {
        self.times.iter().cloned().fold(0.0, |a, t| if t.abs() > a.abs() { t } else { a })
    }
}
