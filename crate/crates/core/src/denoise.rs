//! Hard-thresholding denoiser in the wavelet domain.
//!
//! For white noise with `E|n_{ℓm}|² = σ²` the coefficients of scale `j` are
//! zero-mean with variance `σ_j² = σ² Σ_{ℓn} |ψ^{(j)}_{ℓn}|²`. Coefficients
//! with `|W| < 3σ_j` are set to zero; scaling coefficients are kept.

use crate::error::{parameter, Result};
use crate::sphere::{forward_sht, HarmonicCoeffs, SphereGrid, SphereMap};
use crate::wavelet::{analyze_with, synthesize_with, TransformOptions, WaveletCoefficients, WaveletFamily};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;

/// Threshold multiplier applied to `σ_j`.
pub const THRESHOLD_FACTOR: f64 = 3.0;

/// Complex white noise in harmonic space with `E|n_{ℓm}|² = σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    sigma: f64,
}

impl NoiseModel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return parameter(format!("noise sigma must be finite and non-negative, got {sigma}"));
        }
        Ok(NoiseModel { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One realisation; real and imaginary parts are independent
    /// `N(0, σ²/2)`, rows `ℓ < |s|` zero.
    pub fn sample(&self, band_limit: usize, spin: i32, seed: u64) -> Result<HarmonicCoeffs> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, self.sigma / 2f64.sqrt()).expect("sigma validated");
        HarmonicCoeffs::from_fn(band_limit, spin, |_, _| {
            Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
        })
    }
}

/// Per-scale noise level `σ_j` and threshold `t_j = 3σ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPlan {
    j_min: usize,
    sigmas: Vec<f64>,
}

impl ThresholdPlan {
    pub fn j_min(&self) -> usize {
        self.j_min
    }

    pub fn j_max(&self) -> usize {
        self.j_min + self.sigmas.len() - 1
    }

    /// `σ_j`; panics if `j` is not a scale of the plan.
    pub fn sigma(&self, j: usize) -> f64 {
        self.sigmas[j - self.j_min]
    }

    pub fn threshold(&self, j: usize) -> f64 {
        THRESHOLD_FACTOR * self.sigma(j)
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.sigmas.iter().map(|s| THRESHOLD_FACTOR * s).collect()
    }
}

/// `σ_j = σ √(Σ_{ℓn} |ψ^{(j)}_{ℓn}|²)` for every scale of `family`.
pub fn noise_sigma_per_scale(family: &WaveletFamily, sigma: f64) -> Result<ThresholdPlan> {
    let model = NoiseModel::new(sigma)?;
    let p = family.params();
    let sigmas = p
        .scales()
        .map(|j| Ok(model.sigma() * family.wavelet_energy(j)?.sqrt()))
        .collect::<Result<_>>()?;
    Ok(ThresholdPlan {
        j_min: p.j_min(),
        sigmas,
    })
}

/// What thresholding kept at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSummary {
    pub j: usize,
    pub sigma: f64,
    pub threshold: f64,
    pub survivors: usize,
    pub total: usize,
}

/// Zeroes every wavelet coefficient with `|W| < t_j` in place; phases of the
/// survivors are untouched. Idempotent for a fixed plan.
pub fn hard_threshold(w: &mut WaveletCoefficients, plan: &ThresholdPlan) -> Result<Vec<ScaleSummary>> {
    if w.j_min() != plan.j_min() || w.j_max() != plan.j_max() {
        return parameter(format!(
            "plan covers scales {}..={}, coefficients {}..={}",
            plan.j_min(),
            plan.j_max(),
            w.j_min(),
            w.j_max()
        ));
    }
    let mut out = Vec::with_capacity(plan.sigmas.len());
    for j in plan.j_min()..=plan.j_max() {
        let t = plan.threshold(j);
        let samples = w.scale_mut(j)?.samples_mut();
        let mut survivors = 0;
        for v in samples.iter_mut() {
            if v.norm() < t {
                *v = Complex64::new(0.0, 0.0);
            } else {
                survivors += 1;
            }
        }
        out.push(ScaleSummary {
            j,
            sigma: plan.sigma(j),
            threshold: t,
            survivors,
            total: samples.len(),
        });
    }
    Ok(out)
}

/// Multiresolution denoising of `y`.
pub fn denoise(y: &HarmonicCoeffs, family: &WaveletFamily, model: NoiseModel) -> Result<HarmonicCoeffs> {
    let options = TransformOptions {
        multires: true,
        real: false,
    };
    Ok(denoise_with(y, family, model, options)?.0)
}

/// `synthesize(threshold(analyze(y)))` with explicit transform options, plus
/// a per-scale summary.
pub fn denoise_with(
    y: &HarmonicCoeffs,
    family: &WaveletFamily,
    model: NoiseModel,
    options: TransformOptions,
) -> Result<(HarmonicCoeffs, Vec<ScaleSummary>)> {
    let plan = noise_sigma_per_scale(family, model.sigma())?;
    let mut w = analyze_with(y, family, options)?;
    let summary = hard_threshold(&mut w, &plan)?;
    Ok((synthesize_with(&w, family, options)?, summary))
}

/// `10 log₁₀(‖x‖² / ‖y − x‖²)` in decibels; `+∞` when `y = x`.
pub fn snr(x: &HarmonicCoeffs, y: &HarmonicCoeffs) -> Result<f64> {
    x.max_abs_diff(y)?;
    let err = (y - x).energy();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (x.energy() / err).log10())
}

/// Factor `c` such that `snr(x, x + c·noise)` equals `target_db`.
pub fn noise_scale_for_snr(x: &HarmonicCoeffs, noise: &HarmonicCoeffs, target_db: f64) -> Result<f64> {
    let e = noise.energy();
    if e == 0.0 {
        return parameter("noise realisation has zero energy");
    }
    Ok((x.energy() / (e * 10f64.powf(target_db / 10.0))).sqrt())
}

/// Deterministic spin-2 test signal: `count` elongated Gaussian filaments in
/// `Q + iU`, polarised along their axes, projected to band-limit `L`.
///
/// Each filament has width `width` and length `4 · width` (radians).
pub fn synthetic_filaments(band_limit: usize, count: usize, width: f64, seed: u64) -> Result<HarmonicCoeffs> {
    if !(width > 0.0) {
        return parameter("filament width must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filaments: Vec<([f64; 3], [f64; 3], f64)> = (0..count)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let r = (1.0 - z * z).sqrt();
            let c = [r * phi.cos(), r * phi.sin(), z];
            let (et, ep) = tangent_frame(z.acos(), phi);
            let chi: f64 = rng.gen_range(0.0..PI);
            let t = [0, 1, 2].map(|k| chi.cos() * et[k] + chi.sin() * ep[k]);
            (c, t, rng.gen_range(0.5..1.5))
        })
        .collect();
    let length = 4.0 * width;
    let grid = SphereGrid::new(band_limit)?;
    let map = SphereMap::from_fn(grid, 2, |theta, phi| {
        let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let (et, ep) = tangent_frame(theta, phi);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, t, amp) in &filaments {
            if dot(&x, c) <= 0.0 {
                continue;
            }
            let b = cross(c, t);
            let (u, v) = (dot(&x, t), dot(&x, &b));
            let profile = (-(u * u) / (2.0 * length * length) - (v * v) / (2.0 * width * width)).exp();
            if profile < 1e-16 {
                continue;
            }
            let angle = dot(t, &ep).atan2(dot(t, &et));
            acc += Complex64::from_polar(amp * profile, 2.0 * angle);
        }
        acc
    });
    forward_sht(&map)
}

fn tangent_frame(theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let et = [theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin()];
    let ep = [-phi.sin(), phi.cos(), 0.0];
    (et, ep)
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
