use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::mapfile::{MapData, MapFile, WaveletHeader};
use serde::{Deserialize, Serialize};
use spinlet::denoise::{denoise_with, snr, synthetic_filaments, NoiseModel, ScaleSummary};
use spinlet::so3::RotationMap;
use spinlet::sphere::HarmonicCoeffs;
use spinlet::wavelet::{
    analyze_with, build_family, synthesize_with, KernelTable, TransformOptions, WaveletCoefficients, WaveletParams,
};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Parameters of one harness run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub band_limit: usize,
    pub spin: i32,
    pub azimuthal_band_limit: usize,
    pub alpha: f64,
    pub j_min: usize,
    pub j_max: usize,
    pub multires: bool,
    pub seed: u64,
}

/// Accuracy at one band-limit; deterministic for a fixed seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub parameters: RunParameters,
    pub trials: usize,
    /// `max_{ℓm} |f^r − f^o|` per trial.
    pub errors: Vec<f64>,
    pub mean_error: f64,
    pub max_error: f64,
}

/// Wall-clock of analysis plus synthesis at one band-limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub band_limit: usize,
    pub trial_seconds: Vec<f64>,
    pub mean_seconds: f64,
}

/// Timings live apart from the entries so that everything outside
/// `timing` is bit-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub entries: Vec<BenchEntry>,
    pub timing: Vec<Timing>,
}

pub fn cmd_roundtrip(band_limit: usize, h: &HarnessArgs) -> CliResult<BenchReport> {
    cmd_bench(&[band_limit], h)
}

pub fn cmd_bench(band_limits: &[usize], h: &HarnessArgs) -> CliResult<BenchReport> {
    if h.trials == 0 {
        return Err(CliError::Validation("--trials must be at least 1".into()));
    }
    if band_limits.is_empty() {
        return Err(CliError::Validation("at least one band-limit is required".into()));
    }
    let mut report = BenchReport {
        entries: Vec::new(),
        timing: Vec::new(),
    };
    for &l in band_limits {
        let (entry, timing) = harness(l, h)?;
        report.entries.push(entry);
        report.timing.push(timing);
    }
    Ok(report)
}

fn harness(band_limit: usize, h: &HarnessArgs) -> CliResult<(BenchEntry, Timing)> {
    let f = &h.family;
    let params = WaveletParams::new(band_limit, f.alpha, f.jmin, f.nband, h.spin)?;
    let family = build_family(&params)?;
    let options = TransformOptions {
        multires: h.multires,
        real: false,
    };
    let mut errors = Vec::with_capacity(h.trials);
    let mut seconds = Vec::with_capacity(h.trials);
    for k in 0..h.trials {
        let x = HarmonicCoeffs::random_uniform(band_limit, h.spin, h.seed.wrapping_add(k as u64))?;
        let start = Instant::now();
        let w = analyze_with(&x, &family, options)?;
        let y = synthesize_with(&w, &family, options)?;
        seconds.push(start.elapsed().as_secs_f64());
        errors.push(x.max_abs_diff(&y)?);
    }
    let n = h.trials as f64;
    let entry = BenchEntry {
        parameters: RunParameters {
            band_limit,
            spin: h.spin,
            azimuthal_band_limit: f.nband,
            alpha: f.alpha,
            j_min: f.jmin,
            j_max: params.j_max(),
            multires: h.multires,
            seed: h.seed,
        },
        trials: h.trials,
        mean_error: errors.iter().sum::<f64>() / n,
        max_error: errors.iter().copied().fold(0.0, f64::max),
        errors,
    };
    let timing = Timing {
        band_limit,
        mean_seconds: seconds.iter().sum::<f64>() / n,
        trial_seconds: seconds,
    };
    Ok((entry, timing))
}

/// Squared kernels per degree: column names and one row per `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tiling {
    pub columns: Vec<String>,
    pub rows: Vec<(usize, Vec<f64>)>,
}

/// `k_α(ℓ/α^{J₀})`, then `κ^{(j)}(ℓ)²` for each scale, then their sum.
pub fn cmd_tiling(band_limit: usize, alpha: f64, j_min: usize) -> CliResult<Tiling> {
    let params = WaveletParams::new(band_limit, alpha, j_min, 1, 0)?;
    let table = KernelTable::new(&params)?;
    let mut columns = vec!["l".to_string(), "scaling".to_string()];
    columns.extend(params.scales().map(|j| format!("j{j}")));
    columns.push("sum".into());
    let mut rows = Vec::with_capacity(band_limit);
    for l in 0..band_limit {
        let mut row = vec![table.scaling_profile()[l]];
        for j in params.scales() {
            row.push(table.kappa(j, l)?.powi(2));
        }
        row.push(row.iter().sum());
        rows.push((l, row));
    }
    Ok(Tiling { columns, rows })
}

pub fn write_tiling(tiling: &Tiling, out: Option<&Path>) -> CliResult<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let path = out.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let csv_err = |e: csv::Error| CliError::io(&path, e.into());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&tiling.columns).map_err(csv_err)?;
    for (l, values) in &tiling.rows {
        let mut record = vec![l.to_string()];
        record.extend(values.iter().map(|v| format!("{v:e}")));
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))
}

pub fn cmd_generate(a: &GenerateArgs) -> CliResult<()> {
    let coeffs = match a.signal {
        Signal::Random => HarmonicCoeffs::random_uniform(a.bandlimit, a.spin, a.seed)?,
        Signal::Filaments => {
            if a.spin != 2 {
                return Err(CliError::Validation(format!("filaments are spin 2, got --spin {}", a.spin)));
            }
            synthetic_filaments(a.bandlimit, a.count, a.width, a.seed)?
        }
    };
    MapFile::new(MapData::Harmonic(coeffs)).write(&a.out)
}

fn read_harmonic(path: &Path) -> CliResult<HarmonicCoeffs> {
    match MapFile::read(path)?.data {
        MapData::Harmonic(h) => Ok(h),
        other => Err(CliError::Validation(format!(
            "{}: expected a harmonic file, found {:?}",
            path.display(),
            MapFile::new(other).header().kind
        ))),
    }
}

fn conflict<T: PartialEq + std::fmt::Display>(flag: &str, given: Option<T>, stored: T) -> CliResult<()> {
    match given {
        Some(v) if v != stored => Err(CliError::Validation(format!(
            "{flag} {v} conflicts with the stored value {stored}"
        ))),
        _ => Ok(()),
    }
}

pub fn scale_path(dir: &Path, j: usize) -> PathBuf {
    dir.join(format!("scale-{j}.smap"))
}

pub fn scaling_path(dir: &Path) -> PathBuf {
    dir.join("scaling.smap")
}

/// Writes `scale-{j}.smap` for every scale and `scaling.smap` into `a.out`.
pub fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    let x = read_harmonic(&a.input)?;
    conflict("--bandlimit", a.bandlimit, x.band_limit())?;
    conflict("--spin", a.spin, x.spin())?;
    let f = &a.family;
    let header = WaveletHeader {
        band_limit: x.band_limit(),
        alpha: f.alpha,
        j_min: f.jmin,
        azimuthal_band_limit: f.nband,
        spin: x.spin(),
        multires: a.multires,
    };
    let family = build_family(&header.params()?)?;
    let options = TransformOptions {
        multires: a.multires,
        real: false,
    };
    let w = analyze_with(&x, &family, options)?;
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    for (j, map) in (w.j_min()..).zip(w.scales()) {
        let mut file = MapFile::new(MapData::Rotation(map.clone()));
        file.scale = Some(j);
        file.wavelet = Some(header);
        file.write(&scale_path(&a.out, j))?;
    }
    let mut file = MapFile::new(MapData::Sphere(w.scaling().clone()));
    file.wavelet = Some(header);
    file.write(&scaling_path(&a.out))
}

pub fn cmd_synth(a: &SynthArgs) -> CliResult<()> {
    let path = scaling_path(&a.input);
    let file = MapFile::read(&path)?;
    let header = file
        .wavelet
        .ok_or_else(|| CliError::Validation(format!("{}: no wavelet parameters in header", path.display())))?;
    let MapData::Sphere(scaling) = file.data else {
        return Err(CliError::Validation(format!("{}: expected a sphere map", path.display())));
    };
    conflict("--bandlimit", a.bandlimit, header.band_limit)?;
    conflict("--nband", a.nband, header.azimuthal_band_limit)?;
    conflict("--alpha", a.alpha, header.alpha)?;
    conflict("--jmin", a.jmin, header.j_min)?;
    let params = header.params()?;
    let family = build_family(&params)?;

    let mut scales: Vec<RotationMap> = Vec::with_capacity(params.scale_count());
    for j in params.scales() {
        let path = scale_path(&a.input, j);
        let file = MapFile::read(&path)?;
        if file.wavelet != Some(header) || file.scale != Some(j) {
            return Err(CliError::Validation(format!(
                "{}: header does not belong to scale {j} of this family",
                path.display()
            )));
        }
        let MapData::Rotation(map) = file.data else {
            return Err(CliError::Validation(format!("{}: expected a rotation map", path.display())));
        };
        scales.push(map);
    }
    let w = WaveletCoefficients::new(header.spin, header.azimuthal_band_limit, header.j_min, scales, scaling)?;
    let options = TransformOptions {
        multires: header.multires,
        real: false,
    };
    let x = synthesize_with(&w, &family, options)?;
    MapFile::new(MapData::Harmonic(x)).write(&a.out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub j: usize,
    pub sigma: f64,
    pub threshold: f64,
    pub survivors: usize,
    pub total: usize,
}

impl From<ScaleSummary> for ScaleReport {
    fn from(s: ScaleSummary) -> Self {
        ScaleReport {
            j: s.j,
            sigma: s.sigma,
            threshold: s.threshold,
            survivors: s.survivors,
            total: s.total,
        }
    }
}

/// SNRs are JSON numbers, `"inf"` for an exact match, or null without a
/// reference signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseReport {
    pub band_limit: usize,
    pub spin: i32,
    pub sigma: f64,
    pub alpha: f64,
    pub azimuthal_band_limit: usize,
    pub j_min: usize,
    pub multires: bool,
    pub input_snr_db: serde_json::Value,
    pub output_snr_db: serde_json::Value,
    pub scales: Vec<ScaleReport>,
}

fn decibels(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v > 0.0 {
        serde_json::json!("inf")
    } else {
        serde_json::json!("-inf")
    }
}

pub fn cmd_denoise(a: &DenoiseArgs) -> CliResult<DenoiseReport> {
    let model = NoiseModel::new(a.sigma)?;
    let input = read_harmonic(&a.input)?;
    let (y, reference) = if a.add_noise {
        if a.reference.is_some() {
            return Err(CliError::Validation("--add-noise and --reference are exclusive".into()));
        }
        let noise = model.sample(input.band_limit(), input.spin(), a.seed)?;
        (&input + &noise, Some(input))
    } else {
        let reference = a.reference.as_deref().map(read_harmonic).transpose()?;
        (input, reference)
    };
    let f = &a.family;
    let params = WaveletParams::new(y.band_limit(), f.alpha, f.jmin, f.nband, y.spin())?;
    let family = build_family(&params)?;
    let options = TransformOptions {
        multires: !a.full_resolution,
        real: false,
    };
    let (out, summary) = denoise_with(&y, &family, model, options)?;
    let (input_snr, output_snr) = match &reference {
        Some(x) => (decibels(snr(x, &y)?), decibels(snr(x, &out)?)),
        None => (serde_json::Value::Null, serde_json::Value::Null),
    };
    MapFile::new(MapData::Harmonic(out)).write(&a.out)?;
    Ok(DenoiseReport {
        band_limit: y.band_limit(),
        spin: y.spin(),
        sigma: a.sigma,
        alpha: f.alpha,
        azimuthal_band_limit: f.nband,
        j_min: f.jmin,
        multires: options.multires,
        input_snr_db: input_snr,
        output_snr_db: output_snr,
        scales: summary.into_iter().map(ScaleReport::from).collect(),
    })
}

/// Pretty JSON to `path`, or to stdout.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialises");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}
