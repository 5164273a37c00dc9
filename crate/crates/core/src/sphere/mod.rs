//! Band-limited spin signals on the sphere: coefficient storage, the exact
//! sampling grid, and forward/inverse spin spherical harmonic transforms.

mod quadrature;
mod rotation;
mod sht;
pub(crate) mod wigner;

pub use quadrature::gauss_legendre;
pub use rotation::{rotate_harmonics, EulerAngles};
pub use sht::{forward_sht, forward_sht_real, inverse_sht, inverse_sht_real};
pub use wigner::{wigner_d, wigner_d_slice, WignerDTable};

use crate::error::{dimension, parameter, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Flat index of `(ℓ, m)` in triangular storage.
#[inline]
pub fn lm_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Spherical harmonic coefficients `ₛf_{ℓm}` of a spin-`s` signal band-limited
/// at `L`, stored triangularly (`L²` entries, index `ℓ² + ℓ + m`).
///
/// Rows with `ℓ < |s|` are kept as explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoeffs {
    band_limit: usize,
    spin: i32,
    values: Vec<Complex64>,
}

pub(crate) fn check_spin(band_limit: usize, spin: i32) -> Result<()> {
    if band_limit == 0 {
        return parameter("band-limit must be at least 1");
    }
    if spin.unsigned_abs() as usize >= band_limit {
        return parameter(format!("|spin| = {} must be below L = {band_limit}", spin.abs()));
    }
    Ok(())
}

impl HarmonicCoeffs {
    pub fn zeros(band_limit: usize, spin: i32) -> Result<Self> {
        check_spin(band_limit, spin)?;
        Ok(HarmonicCoeffs {
            band_limit,
            spin,
            values: vec![Complex64::new(0.0, 0.0); band_limit * band_limit],
        })
    }

    /// Builds coefficients from `f(ℓ, m)`; `f` is not called for `ℓ < |s|`.
    pub fn from_fn(
        band_limit: usize,
        spin: i32,
        mut f: impl FnMut(usize, i64) -> Complex64,
    ) -> Result<Self> {
        let mut out = Self::zeros(band_limit, spin)?;
        for l in out.min_l()..band_limit {
            let li = l as i64;
            for m in -li..=li {
                out.values[lm_index(l, m)] = f(l, m);
            }
        }
        Ok(out)
    }

    /// Wraps a raw `L²` vector. Entries in rows `ℓ < |s|` are cleared.
    pub fn from_vec(band_limit: usize, spin: i32, values: Vec<Complex64>) -> Result<Self> {
        check_spin(band_limit, spin)?;
        if values.len() != band_limit * band_limit {
            return dimension(format!(
                "expected {} coefficients for L = {band_limit}, got {}",
                band_limit * band_limit,
                values.len()
            ));
        }
        let mut out = HarmonicCoeffs {
            band_limit,
            spin,
            values,
        };
        let cut = out.min_l() * out.min_l();
        out.values[..cut].iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        Ok(out)
    }

    /// Coefficients with real and imaginary parts drawn uniformly from
    /// `[-1, 1]`, reproducible from `seed`.
    pub fn random_uniform(band_limit: usize, spin: i32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(band_limit, spin, |_, _| {
            Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
        })
    }

    /// Spin-0 coefficients of a random real field,
    /// `f_{ℓ,−m} = (−1)^m conj(f_{ℓm})`, reproducible from `seed`.
    pub fn random_real(band_limit: usize, seed: u64) -> Result<Self> {
        let raw = Self::random_uniform(band_limit, 0, seed)?;
        Self::from_fn(band_limit, 0, |l, m| {
            let mirror = raw.get(l, m.abs());
            match m.cmp(&0) {
                std::cmp::Ordering::Equal => Complex64::new(mirror.re, 0.0),
                std::cmp::Ordering::Greater => mirror,
                std::cmp::Ordering::Less if m % 2 == 0 => mirror.conj(),
                std::cmp::Ordering::Less => -mirror.conj(),
            }
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn spin(&self) -> i32 {
        self.spin
    }

    /// Smallest populated degree, `|s|`.
    pub fn min_l(&self) -> usize {
        self.spin.unsigned_abs() as usize
    }

    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.values[lm_index(l, m)]
    }

    /// Sets `ₛf_{ℓm}`. Writes to rows `ℓ < |s|` are ignored.
    pub fn set(&mut self, l: usize, m: i64, value: Complex64) {
        if l >= self.min_l() {
            self.values[lm_index(l, m)] = value;
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// `Σ_{ℓm} |ₛf_{ℓm}|²`, the signal energy.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `max_{ℓm} |a_{ℓm} − b_{ℓm}|`.
    pub fn max_abs_diff(&self, other: &HarmonicCoeffs) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_shape(&self, other: &HarmonicCoeffs) -> Result<()> {
        if self.band_limit != other.band_limit || self.spin != other.spin {
            return dimension(format!(
                "(L, s) = ({}, {}) vs ({}, {})",
                self.band_limit, self.spin, other.band_limit, other.spin
            ));
        }
        Ok(())
    }

    /// Copy at another band-limit, truncating or zero-padding in ℓ.
    pub fn with_band_limit(&self, band_limit: usize) -> Result<Self> {
        let mut out = Self::zeros(band_limit, self.spin)?;
        let keep = band_limit.min(self.band_limit);
        out.values[..keep * keep].copy_from_slice(&self.values[..keep * keep]);
        Ok(out)
    }

    /// Same coefficients reinterpreted at spin `spin`, rows `ℓ < |spin|` cleared.
    pub fn with_spin(&self, spin: i32) -> Result<Self> {
        Self::from_vec(self.band_limit, spin, self.values.clone())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// `a · self + b · other`.
    pub fn linear_combination(
        &self,
        a: Complex64,
        other: &HarmonicCoeffs,
        b: Complex64,
    ) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (o, y) in out.values.iter_mut().zip(&other.values) {
            *o = a * *o + b * y;
        }
        Ok(out)
    }

    /// Point evaluation `Σ_{ℓm} ₛf_{ℓm} ₛY_{ℓm}(θ, φ)`.
    pub fn evaluate(&self, theta: f64, phi: f64) -> Result<Complex64> {
        let l_max = self.band_limit - 1;
        let table = wigner_d_slice(l_max, theta, -self.spin)?;
        let sign = if self.spin % 2 == 0 { 1.0 } else { -1.0 };
        let mut acc = Complex64::new(0.0, 0.0);
        for l in self.min_l()..self.band_limit {
            let norm = sign * ((2 * l + 1) as f64 / (4.0 * PI)).sqrt();
            let li = l as i64;
            for m in -li..=li {
                let y = Complex64::from_polar(norm * table.get(l, m as i32), m as f64 * phi);
                acc += self.values[lm_index(l, m)] * y;
            }
        }
        Ok(acc)
    }
}

impl std::ops::Add for &HarmonicCoeffs {
    type Output = HarmonicCoeffs;

    fn add(self, rhs: &HarmonicCoeffs) -> HarmonicCoeffs {
        let one = Complex64::new(1.0, 0.0);
        self.linear_combination(one, rhs, one)
            .expect("adding coefficients of different shape")
    }
}

impl std::ops::Sub for &HarmonicCoeffs {
    type Output = HarmonicCoeffs;

    fn sub(self, rhs: &HarmonicCoeffs) -> HarmonicCoeffs {
        let one = Complex64::new(1.0, 0.0);
        self.linear_combination(one, rhs, -one)
            .expect("subtracting coefficients of different shape")
    }
}

/// Exact sampling grid for band-limit `L`: `L` Gauss–Legendre nodes in
/// `cos θ` and `2L − 1` equiangular longitudes.
///
/// Products of two spin-`s` harmonics below `L` are polynomials of degree at
/// most `2L − 2` in `cos θ` times `e^{i(m−m')φ}` with `|m − m'| ≤ 2L − 2`, so
/// the rule integrates them exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    band_limit: usize,
    thetas: Vec<f64>,
    weights: Vec<f64>,
    n_phi: usize,
}

impl SphereGrid {
    pub fn new(band_limit: usize) -> Result<Self> {
        if band_limit == 0 {
            return parameter("band-limit must be at least 1");
        }
        let (x, weights) = gauss_legendre(band_limit);
        let thetas = x.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect();
        Ok(SphereGrid {
            band_limit,
            thetas,
            weights,
            n_phi: 2 * band_limit - 1,
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    /// Colatitude nodes in increasing order.
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Gauss–Legendre weights in `cos θ`; they sum to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_phi as f64
    }

    pub fn phis(&self) -> Vec<f64> {
        (0..self.n_phi).map(|k| self.phi(k)).collect()
    }

    pub fn sample_count(&self) -> usize {
        self.n_theta() * self.n_phi
    }

    /// Quadrature of a sampled integrand over the sphere.
    pub fn integrate(&self, samples: &[Complex64]) -> Complex64 {
        assert_eq!(samples.len(), self.sample_count());
        let dphi = 2.0 * PI / self.n_phi as f64;
        samples
            .chunks(self.n_phi)
            .zip(&self.weights)
            .map(|(row, w)| row.iter().sum::<Complex64>() * (w * dphi))
            .sum()
    }
}

/// Exact grid for band-limit `L`.
pub fn build_grid(band_limit: usize) -> Result<SphereGrid> {
    SphereGrid::new(band_limit)
}

/// Samples of a spin-`s` signal on a [`SphereGrid`], row-major in `(θ, φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMap {
    grid: SphereGrid,
    spin: i32,
    samples: Vec<Complex64>,
}

impl SphereMap {
    pub fn new(grid: SphereGrid, spin: i32, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.sample_count() {
            return dimension(format!(
                "grid has {} samples, got {}",
                grid.sample_count(),
                samples.len()
            ));
        }
        Ok(SphereMap {
            grid,
            spin,
            samples,
        })
    }

    pub fn zeros(grid: SphereGrid, spin: i32) -> Self {
        let n = grid.sample_count();
        SphereMap {
            grid,
            spin,
            samples: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Samples `f(θ, φ)` at every grid node.
    pub fn from_fn(grid: SphereGrid, spin: i32, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut samples = Vec::with_capacity(grid.sample_count());
        for &theta in grid.thetas() {
            for k in 0..grid.n_phi() {
                samples.push(f(theta, grid.phi(k)));
            }
        }
        SphereMap {
            grid,
            spin,
            samples,
        }
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn spin(&self) -> i32 {
        self.spin
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn get(&self, theta_index: usize, phi_index: usize) -> Complex64 {
        self.samples[theta_index * self.grid.n_phi() + phi_index]
    }

    /// `∫ |f|² dΩ` by the grid quadrature.
    pub fn energy(&self) -> f64 {
        let sq: Vec<Complex64> = self
            .samples
            .iter()
            .map(|v| Complex64::new(v.norm_sqr(), 0.0))
            .collect();
        self.grid.integrate(&sq).re
    }
}
