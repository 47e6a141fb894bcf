//! File formats. Every writer has a loader that reads its output back.
//!
//! Phase-plane CSVs are row-major with ξ as the slow index, matching
//! [`PhaseGrid::index`]. Binary payloads are little-endian f64.

use crate::error::{Context, Result, ToolError};
use anisofilter_core::geometry::{AnisoParams, PhaseGrid, Region, RegionMask};
use anisofilter_core::hamilton::Trajectory;
use anisofilter_core::schrodinger::{EvolutionResult, SpectralBasis};
use anisofilter_core::signal::{SampledSignal, SpatialGrid};
use anisofilter_core::singularity::{DecayMap, FilterReport, ShellRow};
use anisofilter_core::stft::{STFTField, WindowKind};
use anisofilter_core::symbols::{CutoffSpec, SymbolField};
use anisofilter_core::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

/// Shortest round-trip text, in exponent form outside [1e-4, 1e15).
fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let cerr = |source| ToolError::Csv { path: path.to_path_buf(), source };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(cerr)?;
    for r in rows {
        w.write_record(&r).map_err(cerr)?;
    }
    w.flush().map_err(|e| ToolError::io(path, e))
}

/// Reads a numeric CSV, checking the header.
fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let cerr = |source| ToolError::Csv { path: path.to_path_buf(), source };
    let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
    let mut r = csv::Reader::from_reader(BufReader::new(f));
    let h = r.headers().map_err(cerr)?.clone();
    if h.iter().ne(header.iter().copied()) {
        return Err(ToolError::format(path, format!("expected header {}", header.join(","))));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(cerr)?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|_| ToolError::format(path, format!("not a number: {s:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        out.push(row);
    }
    Ok(out)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| ToolError::Json { path: path.to_path_buf(), source })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| ToolError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
    serde_json::from_reader(BufReader::new(f)).map_err(|source| ToolError::Json { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| ToolError::io(path, e))
}

fn write_f64s(path: &Path, data: &[f64]) -> Result<()> {
    let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
    let mut w = BufWriter::new(f);
    for v in data {
        w.write_all(&v.to_le_bytes()).map_err(|e| ToolError::io(path, e))?;
    }
    w.flush().map_err(|e| ToolError::io(path, e))
}

fn read_f64s(path: &Path, expected: usize) -> Result<Vec<f64>> {
    let mut bytes = Vec::new();
    File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| ToolError::io(path, e))?;
    if bytes.len() != 8 * expected {
        return Err(ToolError::format(path, format!("expected {} bytes, found {}", 8 * expected, bytes.len())));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

/// `stem.json` next to `stem.bin`.
pub fn sidecar(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

/// Recovers the lattice from the leading (x, ξ) columns of a row-major table.
fn infer_grid(path: &Path, rows: &[Vec<f64>]) -> Result<PhaseGrid> {
    let Some(first) = rows.first() else {
        return Err(ToolError::format(path, "no rows"));
    };
    let nx = rows.iter().take_while(|r| r[1] == first[1]).count();
    if nx == 0 || rows.len() % nx != 0 {
        return Err(ToolError::format(path, "rows do not form a rectangular grid"));
    }
    let g = PhaseGrid::new(-first[0], -first[1], nx, rows.len() / nx)
        .map_err(|e| ToolError::format(path, e.to_string()))?;
    for (idx, r) in rows.iter().enumerate() {
        let z = g.point_at(idx);
        let tol = 1e-9 * (1.0 + z.x.abs().max(z.xi.abs()));
        if (r[0] - z.x).abs() > tol || (r[1] - z.xi).abs() > tol {
            return Err(ToolError::format(path, format!("row {idx} is off the lattice")));
        }
    }
    Ok(g)
}

// ---- region masks ----

pub fn write_mask_csv(path: &Path, mask: &RegionMask) -> Result<()> {
    let g = *mask.grid();
    let rows = g.points().zip(mask.raster()).map(|(z, b)| vec![num(z.x), num(z.xi), (*b as u8).to_string()]);
    write_rows(path, &["x", "xi", "inside"], rows)
}

pub fn read_mask_csv(path: &Path) -> Result<RegionMask> {
    let rows = read_rows(path, &["x", "xi", "inside"])?;
    let g = infer_grid(path, &rows)?;
    let raster = rows.iter().map(|r| r[2] != 0.0).collect();
    RegionMask::from_raster(g, raster).context("mask")
}

/// JSON form of a mask: grid, run-length raster and, when known, the predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskFile {
    pub grid: PhaseGrid,
    pub first: bool,
    pub runs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

impl MaskFile {
    pub fn from_mask(mask: &RegionMask) -> Self {
        let (first, runs) = mask.to_rle();
        MaskFile { grid: *mask.grid(), first, runs, region: mask.region().cloned() }
    }

    pub fn to_mask(&self) -> anisofilter_core::Result<RegionMask> {
        RegionMask::from_rle(self.grid, self.first, &self.runs)
    }
}

pub fn write_mask_json(path: &Path, mask: &RegionMask) -> Result<()> {
    write_json(path, &MaskFile::from_mask(mask))
}

pub fn read_mask_json(path: &Path) -> Result<RegionMask> {
    let f: MaskFile = read_json(path)?;
    f.to_mask().map_err(|e| ToolError::format(path, e.to_string()))
}

// ---- signals ----

pub fn write_signal_csv(path: &Path, u: &SampledSignal) -> Result<()> {
    let rows = u.grid.points().zip(&u.values).map(|(x, v)| vec![num(x), num(v.re), num(v.im)]);
    write_rows(path, &["x", "re", "im"], rows)
}

/// The label is taken from the file stem.
pub fn read_signal_csv(path: &Path) -> Result<SampledSignal> {
    let rows = read_rows(path, &["x", "re", "im"])?;
    let n = rows.len();
    let x_max = rows.first().map(|r| -r[0]).unwrap_or(0.0);
    let grid = SpatialGrid::new(x_max, n).map_err(|e| ToolError::format(path, e.to_string()))?;
    for (i, r) in rows.iter().enumerate() {
        if (r[0] - grid.x(i)).abs() > 1e-9 * (1.0 + x_max) {
            return Err(ToolError::format(path, format!("row {i} is off the uniform grid")));
        }
    }
    let values = rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    SampledSignal::new(grid, values, label).context("signal")
}

pub fn write_signal_json(path: &Path, u: &SampledSignal) -> Result<()> {
    write_json(path, u)
}

pub fn read_signal_json(path: &Path) -> Result<SampledSignal> {
    let u: SampledSignal = read_json(path)?;
    SampledSignal::new(u.grid, u.values, u.label).map_err(|e| ToolError::format(path, e.to_string()))
}

// ---- STFT fields ----

pub fn write_stft_csv(path: &Path, f: &STFTField) -> Result<()> {
    let rows = f.grid.points().zip(&f.values).map(|(z, v)| vec![num(z.x), num(z.xi), num(v.re), num(v.im), num(v.norm())]);
    write_rows(path, &["x", "xi", "re", "im", "abs"], rows)
}

pub fn read_stft_csv(path: &Path, window: WindowKind, label: &str) -> Result<STFTField> {
    let rows = read_rows(path, &["x", "xi", "re", "im", "abs"])?;
    let g = infer_grid(path, &rows)?;
    let values = rows.iter().map(|r| Complex64::new(r[2], r[3])).collect();
    STFTField::new(g, values, window, label).context("stft")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub grid: PhaseGrid,
    /// "complex" (re, im interleaved) or "real".
    pub values: String,
    pub layout: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<AnisoParams>,
    pub label: String,
}

const LAYOUT: &str = "little-endian f64, row-major, xi slow, x fast";

pub fn write_stft_bin(path: &Path, f: &STFTField) -> Result<()> {
    let data: Vec<f64> = f.values.iter().flat_map(|v| [v.re, v.im]).collect();
    write_f64s(path, &data)?;
    let h = FieldHeader {
        grid: f.grid,
        values: "complex".into(),
        layout: LAYOUT.into(),
        window: Some(f.window.clone()),
        order_r: None,
        params: None,
        label: f.source_label.clone(),
    };
    write_json(&sidecar(path), &h)
}

pub fn read_stft_bin(path: &Path) -> Result<STFTField> {
    let h: FieldHeader = read_json(&sidecar(path))?;
    if h.values != "complex" {
        return Err(ToolError::format(path, "not a complex field"));
    }
    let data = read_f64s(path, 2 * h.grid.len())?;
    let values = data.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    STFTField::new(h.grid, values, h.window.unwrap_or_default(), h.label).context("stft")
}

// ---- symbols ----

pub fn write_symbol_csv(path: &Path, a: &SymbolField) -> Result<()> {
    let rows = a.grid.points().zip(&a.values).map(|(z, v)| vec![num(z.x), num(z.xi), num(*v)]);
    write_rows(path, &["x", "xi", "value"], rows)
}

pub fn read_symbol_csv(path: &Path, order_r: f64, params: AnisoParams, label: &str) -> Result<SymbolField> {
    let rows = read_rows(path, &["x", "xi", "value"])?;
    let g = infer_grid(path, &rows)?;
    SymbolField::new(g, rows.iter().map(|r| r[2]).collect(), order_r, params, label).context("symbol")
}

pub fn write_symbol_bin(path: &Path, a: &SymbolField) -> Result<()> {
    write_f64s(path, &a.values)?;
    let h = FieldHeader {
        grid: a.grid,
        values: "real".into(),
        layout: LAYOUT.into(),
        window: None,
        order_r: Some(a.order_r),
        params: Some(a.params),
        label: a.label.clone(),
    };
    write_json(&sidecar(path), &h)
}

pub fn read_symbol_bin(path: &Path) -> Result<SymbolField> {
    let h: FieldHeader = read_json(&sidecar(path))?;
    let (Some(order_r), Some(params)) = (h.order_r, h.params) else {
        return Err(ToolError::format(path, "symbol header needs order_r and params"));
    };
    let values = read_f64s(path, h.grid.len())?;
    SymbolField::new(h.grid, values, order_r, params, h.label).context("symbol")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffFile {
    pub eps: f64,
    pub delta: f64,
    pub mu: f64,
    pub params: AnisoParams,
    pub omega: MaskFile,
}

pub fn write_cutoff_json(path: &Path, spec: &CutoffSpec) -> Result<()> {
    let f = CutoffFile { eps: spec.eps, delta: spec.delta, mu: spec.mu, params: spec.params, omega: MaskFile::from_mask(&spec.omega) };
    write_json(path, &f)
}

pub fn read_cutoff_json(path: &Path) -> Result<CutoffSpec> {
    let f: CutoffFile = read_json(path)?;
    let omega = f.omega.to_mask().map_err(|e| ToolError::format(path, e.to_string()))?;
    if !(0.0 < f.eps && f.eps < f.delta && f.delta < 1.0 && f.mu > 0.0 && f.mu <= 1.0) {
        return Err(ToolError::format(path, "need 0 < eps < delta < 1 and 0 < mu <= 1"));
    }
    Ok(CutoffSpec { eps: f.eps, delta: f.delta, mu: f.mu, params: f.params, omega })
}

// ---- decay ----

pub fn write_decay_csv(path: &Path, d: &DecayMap) -> Result<()> {
    let rows = d.grid.points().zip(&d.exponents).map(|(z, e)| vec![num(z.x), num(z.xi), num(*e)]);
    write_rows(path, &["x", "xi", "exponent"], rows)
}

/// Grid and per-cell exponents; unresolved cells read back as NaN.
pub fn read_decay_csv(path: &Path) -> Result<(PhaseGrid, Vec<f64>)> {
    let rows = read_rows(path, &["x", "xi", "exponent"])?;
    let g = infer_grid(path, &rows)?;
    Ok((g, rows.iter().map(|r| r[2]).collect()))
}

/// Non-finite floats are written as strings ("NaN", "inf") since JSON has no literal for them.
pub(crate) mod loose_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Loose {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Loose::deserialize(d)? {
            Loose::Num(v) => Ok(v),
            Loose::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterFile {
    pub region: MaskFile,
    pub eps: f64,
    pub member: bool,
    #[serde(with = "loose_f64")]
    pub estimated_exponent: f64,
    pub n_threshold: f64,
    pub shell_table: Vec<ShellRow>,
    pub caveat: String,
}

impl FilterFile {
    pub fn from_report(r: &FilterReport) -> Self {
        FilterFile {
            region: MaskFile::from_mask(&r.region),
            eps: r.eps,
            member: r.member,
            estimated_exponent: r.estimated_exponent,
            n_threshold: r.n_threshold,
            shell_table: r.shell_table.clone(),
            caveat: r.caveat.clone(),
        }
    }
}

pub fn write_filter_json(path: &Path, r: &FilterReport) -> Result<()> {
    write_json(path, &FilterFile::from_report(r))
}

pub fn read_filter_json(path: &Path) -> Result<FilterReport> {
    let f: FilterFile = read_json(path)?;
    let region = f.region.to_mask().map_err(|e| ToolError::format(path, e.to_string()))?;
    Ok(FilterReport {
        region,
        eps: f.eps,
        member: f.member,
        estimated_exponent: f.estimated_exponent,
        n_threshold: f.n_threshold,
        shell_table: f.shell_table,
        caveat: f.caveat,
    })
}

// ---- flows ----

pub fn write_trajectory_csv(path: &Path, tr: &Trajectory) -> Result<()> {
    let rows = tr.times.iter().zip(&tr.points).zip(&tr.energy).map(|((t, z), e)| vec![num(*t), num(z.x), num(z.xi), num(*e)]);
    write_rows(path, &["t", "x", "xi", "energy"], rows)
}

pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory> {
    let rows = read_rows(path, &["t", "x", "xi", "energy"])?;
    Ok(Trajectory {
        times: rows.iter().map(|r| r[0]).collect(),
        points: rows.iter().map(|r| anisofilter_core::geometry::PhasePoint::new(r[1], r[2])).collect(),
        energy: rows.iter().map(|r| r[3]).collect(),
    })
}

// ---- spectral bases ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisHeader {
    pub k: u32,
    pub m: u32,
    #[serde(rename = "M")]
    pub basis_size: usize,
    pub residuals: Vec<f64>,
    pub certified: usize,
    pub shift_c: f64,
    pub layout: String,
}

/// Eigenvalues followed by the column-major eigenvector matrix in `path`,
/// header in the JSON sidecar.
pub fn write_basis(path: &Path, b: &SpectralBasis) -> Result<()> {
    let mut data = b.eigenvalues.clone();
    data.extend_from_slice(&b.eigenvectors);
    write_f64s(path, &data)?;
    let h = BasisHeader {
        k: b.k,
        m: b.m,
        basis_size: b.basis_size,
        residuals: b.residuals.clone(),
        certified: b.certified,
        shift_c: b.shift_c,
        layout: "little-endian f64: M eigenvalues, then M x M eigenvectors column-major in Hermite coordinates".into(),
    };
    write_json(&sidecar(path), &h)
}

pub fn read_basis(path: &Path) -> Result<SpectralBasis> {
    let h: BasisHeader = read_json(&sidecar(path))?;
    let n = h.basis_size;
    if h.residuals.len() != n {
        return Err(ToolError::format(path, "residual count differs from M"));
    }
    let data = read_f64s(path, n + n * n)?;
    Ok(SpectralBasis {
        k: h.k,
        m: h.m,
        basis_size: n,
        eigenvalues: data[..n].to_vec(),
        eigenvectors: data[n..].to_vec(),
        residuals: h.residuals,
        certified: h.certified,
        shift_c: h.shift_c,
    })
}

// ---- evolution ----

/// One `x,re,im` snapshot per time, `evolution_<index>.csv`, plus
/// `evolution_times.csv` with `index,t,norm` and `coefficients.csv` with `t,j,re,im`.
pub fn write_evolution(dir: &Path, evo: &EvolutionResult) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for (i, s) in evo.snapshots.iter().enumerate() {
        let p = dir.join(format!("evolution_{i:03}.csv"));
        write_signal_csv(&p, s)?;
        files.push(p);
    }
    let p = dir.join("evolution_times.csv");
    let rows = evo.times.iter().zip(&evo.snapshots).enumerate().map(|(i, (t, s))| vec![i.to_string(), num(*t), num(s.l2_norm())]);
    write_rows(&p, &["index", "t", "norm"], rows)?;
    files.push(p);
    let p = dir.join("coefficients.csv");
    let rows = evo.times.iter().zip(&evo.coefficients).flat_map(|(t, c)| {
        c.iter().enumerate().map(move |(j, v)| vec![num(*t), j.to_string(), num(v.re), num(v.im)])
    });
    write_rows(&p, &["t", "j", "re", "im"], rows)?;
    files.push(p);
    Ok(files)
}

/// Times and snapshots written by [`write_evolution`].
pub fn read_evolution(dir: &Path) -> Result<(Vec<f64>, Vec<SampledSignal>)> {
    let rows = read_rows(&dir.join("evolution_times.csv"), &["index", "t", "norm"])?;
    let times = rows.iter().map(|r| r[1]).collect();
    let snaps = (0..rows.len())
        .map(|i| read_signal_csv(&dir.join(format!("evolution_{i:03}.csv"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((times, snaps))
}
