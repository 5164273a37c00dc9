//! Smooth compactly supported harmonic kernels.

use super::params::WaveletParams;
use crate::error::{parameter, Error, Result};
use std::f64::consts::PI;

/// Requested absolute accuracy of the `k_α` integrals.
const QUAD_TOLERANCE: f64 = 1e-14;

/// `exp(−1/(1 − t²))` on `(−1, 1)`, zero elsewhere.
pub fn schwartz_s(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// `s` mapped onto `[α⁻¹, 1]`.
pub fn schwartz_s_alpha(t: f64, alpha: f64) -> f64 {
    schwartz_s(2.0 * alpha / (alpha - 1.0) * (t - 1.0 / alpha) - 1.0)
}

/// The decreasing profile `k_α(t) = ∫_t^1 s_α²(u)/u du / ∫_{α⁻¹}^1 s_α²(u)/u du`,
/// with its normalising integral precomputed.
#[derive(Debug, Clone, Copy)]
pub struct KAlpha {
    alpha: f64,
    norm: f64,
}

impl KAlpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return parameter(format!("dilation alpha = {alpha} must exceed 1"));
        }
        let mut k = KAlpha { alpha, norm: 1.0 };
        k.norm = k.tail(1.0 / alpha);
        Ok(k)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn tail(&self, t: f64) -> f64 {
        let alpha = self.alpha;
        quadrature::integrate(
            |u| {
                let s = schwartz_s_alpha(u, alpha);
                s * s / u
            },
            t,
            1.0,
            QUAD_TOLERANCE,
        )
        .integral
    }

    /// `k_α(t)`: 1 for `t ≤ α⁻¹`, 0 for `t ≥ 1`, decreasing in between.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 1.0 / self.alpha {
            1.0
        } else if t >= 1.0 {
            0.0
        } else {
            (self.tail(t) / self.norm).clamp(0.0, 1.0)
        }
    }
}

/// `k_α(t)` for a single argument.
pub fn k_alpha(t: f64, alpha: f64) -> Result<f64> {
    Ok(KAlpha::new(alpha)?.eval(t))
}

/// `κ^{(j)}(ℓ) = √(k_α(ℓ/α^{j+1}) − k_α(ℓ/α^j))` for a single `(j, ℓ)`.
pub fn kernel(j: usize, l: usize, params: &WaveletParams) -> Result<f64> {
    params.check_scale(j)?;
    if l >= params.band_limit() {
        return Err(Error::Domain(format!(
            "degree {l} outside [0, L = {})",
            params.band_limit()
        )));
    }
    let k = KAlpha::new(params.alpha())?;
    let a = params.alpha();
    let lf = l as f64;
    Ok((k.eval(lf / a.powi(j as i32 + 1)) - k.eval(lf / a.powi(j as i32)))
        .max(0.0)
        .sqrt())
}

/// Kernel values `κ^{(j)}(ℓ)` for every scale and the scaling profile `Φ_ℓ`,
/// all derived from one cache of `k_α(ℓ/α^j)`, `J₀ ≤ j ≤ J + 1`.
///
/// Squared kernels telescope against the cache, so
/// `k_α(ℓ/α^{J₀}) + Σ_j κ^{(j)}(ℓ)² = k_α(ℓ/α^{J+1}) = 1` up to rounding.
#[derive(Debug, Clone)]
pub struct KernelTable {
    params: WaveletParams,
    lattice: Vec<Vec<f64>>,
    kappa: Vec<Vec<f64>>,
    scaling: Vec<f64>,
}

impl KernelTable {
    pub fn new(params: &WaveletParams) -> Result<Self> {
        let k = KAlpha::new(params.alpha())?;
        let band_limit = params.band_limit();
        let lattice: Vec<Vec<f64>> = (params.j_min()..=params.j_max() + 1)
            .map(|j| {
                let scale = params.alpha().powi(j as i32);
                (0..band_limit).map(|l| k.eval(l as f64 / scale)).collect()
            })
            .collect();
        let kappa = lattice
            .windows(2)
            .map(|w| {
                w[1].iter()
                    .zip(&w[0])
                    .map(|(coarse, fine)| (coarse - fine).max(0.0).sqrt())
                    .collect()
            })
            .collect();
        let scaling = lattice[0]
            .iter()
            .enumerate()
            .map(|(l, kv)| ((2 * l + 1) as f64 / (4.0 * PI)).sqrt() * kv.sqrt())
            .collect();
        Ok(KernelTable {
            params: params.clone(),
            lattice,
            kappa,
            scaling,
        })
    }

    pub fn params(&self) -> &WaveletParams {
        &self.params
    }

    /// `κ^{(j)}(ℓ)` for `0 ≤ ℓ < L`.
    pub fn kappa_row(&self, j: usize) -> Result<&[f64]> {
        self.params.check_scale(j)?;
        Ok(&self.kappa[j - self.params.j_min()])
    }

    pub fn kappa(&self, j: usize, l: usize) -> Result<f64> {
        Ok(self.kappa_row(j)?[l])
    }

    /// `Φ_{ℓ0} = √((2ℓ+1)/4π) √(k_α(ℓ/α^{J₀}))`.
    pub fn scaling(&self) -> &[f64] {
        &self.scaling
    }

    /// `k_α(ℓ/α^{J₀})`, the scaling profile before normalisation.
    pub fn scaling_profile(&self) -> &[f64] {
        &self.lattice[0]
    }
}
