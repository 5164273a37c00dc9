//! Steering: wavelet coefficients at any orientation γ from `N` fixed ones.

use super::transform::WaveletCoefficients;
use crate::error::Result;
use crate::so3::RotationMap;
use crate::sphere::{SphereGrid, SphereMap};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Basis orientations `γ_g = gπ/N`, `g = 0..N`, and the interpolating
/// function `z(γ) = (1/N) Σ_m e^{imγ}` over the `N` orders `|m| < N` with
/// `m ≡ N − 1 (mod 2)`.
///
/// For any function of γ spanned by those orders,
/// `f(γ) = Σ_g z(γ − γ_g) f(γ_g)` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteeringWeights {
    azimuthal: usize,
}

impl SteeringWeights {
    pub fn new(azimuthal: usize) -> Self {
        assert!(azimuthal >= 1, "azimuthal band-limit must be at least 1");
        SteeringWeights { azimuthal }
    }

    pub fn basis_count(&self) -> usize {
        self.azimuthal
    }

    pub fn angle(&self, g: usize) -> f64 {
        g as f64 * PI / self.azimuthal as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.azimuthal).map(|g| self.angle(g)).collect()
    }

    /// The orders `m` with nonzero Fourier coefficient `1/N`.
    pub fn orders(&self) -> impl Iterator<Item = i64> {
        let n = self.azimuthal as i64;
        (-(n - 1)..n).step_by(2)
    }

    /// `z(γ)`; real because the order set is symmetric.
    pub fn z(&self, gamma: f64) -> f64 {
        self.orders().map(|m| (m as f64 * gamma).cos()).sum::<f64>() / self.azimuthal as f64
    }

    /// `z(γ − γ_g)` for every basis orientation.
    pub fn weights(&self, gamma: f64) -> Vec<f64> {
        (0..self.azimuthal).map(|g| self.z(gamma - self.angle(g))).collect()
    }
}

/// The `(β, α)` slice of `map` at an arbitrary orientation γ, by exact
/// trigonometric interpolation of the `2N − 1` stored γ samples.
pub fn gamma_slice_at(map: &RotationMap, gamma: f64) -> Vec<Complex64> {
    let grid = map.grid();
    let ng = grid.n_gamma();
    let nm = grid.azimuthal_band_limit() as i64 - 1;
    let plane = grid.n_alpha() * grid.n_beta();
    let mut out = vec![Complex64::new(0.0, 0.0); plane];
    for g in 0..ng {
        let x = gamma - grid.gamma(g);
        let kernel = (-nm..=nm).map(|n| (n as f64 * x).cos()).sum::<f64>() / ng as f64;
        if kernel == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(map.gamma_slice(g)) {
            *o += v * kernel;
        }
    }
    out
}

/// Coefficients of scale `j` at orientation `γ`, assembled as
/// `Σ_g z(γ − γ_g) W(·, ·, γ_g)`. The result is a spin-0 map on the sphere
/// grid of the scale with `θ = β` and `φ = α`.
pub fn steer(w: &WaveletCoefficients, j: usize, gamma: f64) -> Result<SphereMap> {
    let map = w.scale(j)?;
    let weights = SteeringWeights::new(w.azimuthal_band_limit());
    let grid = map.grid();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n_alpha() * grid.n_beta()];
    for (g, z) in weights.weights(gamma).into_iter().enumerate() {
        let basis = gamma_slice_at(map, weights.angle(g));
        for (o, v) in out.iter_mut().zip(&basis) {
            *o += v * z;
        }
    }
    SphereMap::new(SphereGrid::new(grid.band_limit())?, 0, out)
}
