//! Band-limited functions on the rotation group SO(3) and their exact
//! Wigner transforms.

mod transform;

pub(crate) use transform::forward_wigner_batch_ranges;
pub use transform::{
    forward_wigner, forward_wigner_batch, forward_wigner_real, inverse_wigner,
    inverse_wigner_batch, inverse_wigner_real,
};

use crate::error::{dimension, parameter, Result};
use crate::sphere::gauss_legendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// `8π²`, the volume of SO(3) in the `dα sin β dβ dγ` measure.
pub const SO3_VOLUME: f64 = 8.0 * PI * PI;

pub(crate) fn check_azimuthal(band_limit: usize, azimuthal: usize) -> Result<()> {
    if band_limit == 0 {
        return parameter("band-limit must be at least 1");
    }
    if azimuthal == 0 || azimuthal > band_limit {
        return parameter(format!(
            "azimuthal band-limit N = {azimuthal} must lie in [1, L = {band_limit}]"
        ));
    }
    Ok(())
}

/// Wigner coefficients `f^ℓ_{mn}` with `ℓ < L`, `|m| ≤ ℓ`, `|n| ≤ min(ℓ, N−1)`.
///
/// Storage is n-major: each `n` owns a full `L²` triangle in `(ℓ, m)`, so the
/// flat index is `(n + N − 1) L² + ℓ² + ℓ + m`. Entries with `ℓ < |n|` are
/// held at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerCoeffs {
    band_limit: usize,
    azimuthal: usize,
    values: Vec<Complex64>,
}

impl WignerCoeffs {
    pub fn zeros(band_limit: usize, azimuthal: usize) -> Result<Self> {
        check_azimuthal(band_limit, azimuthal)?;
        Ok(WignerCoeffs {
            band_limit,
            azimuthal,
            values: vec![Complex64::new(0.0, 0.0); (2 * azimuthal - 1) * band_limit * band_limit],
        })
    }

    /// Builds coefficients from `f(ℓ, m, n)` over the valid index set.
    pub fn from_fn(
        band_limit: usize,
        azimuthal: usize,
        mut f: impl FnMut(usize, i64, i64) -> Complex64,
    ) -> Result<Self> {
        let mut out = Self::zeros(band_limit, azimuthal)?;
        let nm = azimuthal as i64 - 1;
        for n in -nm..=nm {
            for l in n.unsigned_abs() as usize..band_limit {
                let li = l as i64;
                for m in -li..=li {
                    let idx = out.index(l, m, n);
                    out.values[idx] = f(l, m, n);
                }
            }
        }
        Ok(out)
    }

    /// Real and imaginary parts uniform in `[-1, 1]`, reproducible from `seed`.
    pub fn random_uniform(band_limit: usize, azimuthal: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(band_limit, azimuthal, |_, _, _| {
            Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn azimuthal_band_limit(&self) -> usize {
        self.azimuthal
    }

    /// Whether `(ℓ, m, n)` belongs to the index set.
    pub fn is_valid(&self, l: usize, m: i64, n: i64) -> bool {
        l < self.band_limit
            && m.unsigned_abs() as usize <= l
            && n.unsigned_abs() as usize <= l
            && n.unsigned_abs() < self.azimuthal as u64
    }

    #[inline]
    pub(crate) fn index(&self, l: usize, m: i64, n: i64) -> usize {
        let slice = (n + self.azimuthal as i64 - 1) as usize;
        slice * self.band_limit * self.band_limit + ((l * l + l) as i64 + m) as usize
    }

    /// `f^ℓ_{mn}`, zero outside the index set.
    pub fn get(&self, l: usize, m: i64, n: i64) -> Complex64 {
        if self.is_valid(l, m, n) {
            self.values[self.index(l, m, n)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Sets `f^ℓ_{mn}`; writes outside the index set are ignored.
    pub fn set(&mut self, l: usize, m: i64, n: i64, value: Complex64) {
        if self.is_valid(l, m, n) {
            let idx = self.index(l, m, n);
            self.values[idx] = value;
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// `Σ (2ℓ+1)/(8π²) |f^ℓ_{mn}|²`, equal to `∫ |f|² dρ`.
    pub fn energy(&self) -> f64 {
        let l2 = self.band_limit * self.band_limit;
        self.values
            .chunks(l2)
            .map(|slice| {
                (0..self.band_limit)
                    .map(|l| {
                        let row = &slice[l * l..(l + 1) * (l + 1)];
                        (2 * l + 1) as f64 / SO3_VOLUME * row.iter().map(|v| v.norm_sqr()).sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn max_abs_diff(&self, other: &WignerCoeffs) -> Result<f64> {
        if self.band_limit != other.band_limit || self.azimuthal != other.azimuthal {
            return dimension(format!(
                "(L, N) = ({}, {}) vs ({}, {})",
                self.band_limit, self.azimuthal, other.band_limit, other.azimuthal
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Copy with a different azimuthal band-limit, truncating or zero-padding in `n`.
    pub fn with_azimuthal_band_limit(&self, azimuthal: usize) -> Result<Self> {
        let mut out = Self::zeros(self.band_limit, azimuthal)?;
        let keep = azimuthal.min(self.azimuthal) as i64 - 1;
        let l2 = self.band_limit * self.band_limit;
        for n in -keep..=keep {
            let src = (n + self.azimuthal as i64 - 1) as usize * l2;
            let dst = (n + azimuthal as i64 - 1) as usize * l2;
            out.values[dst..dst + l2].copy_from_slice(&self.values[src..src + l2]);
        }
        Ok(out)
    }

    /// Smallest and largest `ℓ` holding a nonzero entry.
    pub(crate) fn degree_support(&self) -> Option<(usize, usize)> {
        let l2 = self.band_limit * self.band_limit;
        let mut lo = usize::MAX;
        let mut hi = 0;
        for slice in self.values.chunks(l2) {
            for l in 0..self.band_limit {
                if slice[l * l..(l + 1) * (l + 1)].iter().any(|v| v.re != 0.0 || v.im != 0.0) {
                    lo = lo.min(l);
                    hi = hi.max(l);
                }
            }
        }
        (lo != usize::MAX).then_some((lo, hi))
    }
}

/// Exact quadrature grid on SO(3): `2L − 1` equiangular α, `L` Gauss–Legendre
/// β and `2N − 1` equiangular γ.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationGrid {
    band_limit: usize,
    azimuthal: usize,
    betas: Vec<f64>,
    weights: Vec<f64>,
}

impl RotationGrid {
    pub fn new(band_limit: usize, azimuthal: usize) -> Result<Self> {
        check_azimuthal(band_limit, azimuthal)?;
        let (x, weights) = gauss_legendre(band_limit);
        let betas = x.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect();
        Ok(RotationGrid {
            band_limit,
            azimuthal,
            betas,
            weights,
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn azimuthal_band_limit(&self) -> usize {
        self.azimuthal
    }

    pub fn n_alpha(&self) -> usize {
        2 * self.band_limit - 1
    }

    pub fn n_beta(&self) -> usize {
        self.band_limit
    }

    pub fn n_gamma(&self) -> usize {
        2 * self.azimuthal - 1
    }

    pub fn alpha(&self, a: usize) -> f64 {
        2.0 * PI * a as f64 / self.n_alpha() as f64
    }

    pub fn gamma(&self, g: usize) -> f64 {
        2.0 * PI * g as f64 / self.n_gamma() as f64
    }

    /// Increasing β nodes.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Gauss–Legendre weights in `cos β`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sample_count(&self) -> usize {
        self.n_alpha() * self.n_beta() * self.n_gamma()
    }

    /// Flat index in `(γ, β, α)` row-major order.
    #[inline]
    pub fn index(&self, a: usize, b: usize, g: usize) -> usize {
        (g * self.n_beta() + b) * self.n_alpha() + a
    }

    /// Quadrature of a sampled integrand over SO(3).
    pub fn integrate(&self, samples: &[Complex64]) -> Complex64 {
        assert_eq!(samples.len(), self.sample_count());
        let cell = (2.0 * PI / self.n_alpha() as f64) * (2.0 * PI / self.n_gamma() as f64);
        let na = self.n_alpha();
        samples
            .chunks(na)
            .enumerate()
            .map(|(row, chunk)| chunk.iter().sum::<Complex64>() * (self.weights[row % self.n_beta()] * cell))
            .sum()
    }
}

/// Samples of a function on a [`RotationGrid`], stored `(γ, β, α)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMap {
    grid: RotationGrid,
    samples: Vec<Complex64>,
}

impl RotationMap {
    pub fn new(grid: RotationGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.sample_count() {
            return dimension(format!(
                "grid has {} samples, got {}",
                grid.sample_count(),
                samples.len()
            ));
        }
        Ok(RotationMap { grid, samples })
    }

    pub fn zeros(grid: RotationGrid) -> Self {
        let n = grid.sample_count();
        RotationMap {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn grid(&self) -> &RotationGrid {
        &self.grid
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

    /// Sample at `(α_a, β_b, γ_g)`.
    pub fn get(&self, a: usize, b: usize, g: usize) -> Complex64 {
        self.samples[self.grid.index(a, b, g)]
    }

    /// The `(β, α)` slice at orientation index `g`, row-major in β.
    pub fn gamma_slice(&self, g: usize) -> &[Complex64] {
        let len = self.grid.n_alpha() * self.grid.n_beta();
        &self.samples[g * len..(g + 1) * len]
    }

    /// `∫ |f|² dρ` by the grid quadrature.
    pub fn energy(&self) -> f64 {
        let sq: Vec<Complex64> = self
            .samples
            .iter()
            .map(|v| Complex64::new(v.norm_sqr(), 0.0))
            .collect();
        self.grid.integrate(&sq).re
    }

    pub fn max_abs_diff(&self, other: &RotationMap) -> Result<f64> {
        if self.grid != other.grid {
            return dimension("rotation maps live on different grids");
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sample_count() {
        let g = RotationGrid::new(8, 3).unwrap();
        assert_eq!(g.sample_count(), 15 * 8 * 5);
        assert!(RotationGrid::new(4, 5).is_err());
        assert!(RotationGrid::new(4, 0).is_err());
    }

    #[test]
    fn grid_volume() {
        let g = RotationGrid::new(6, 2).unwrap();
        let one = vec![Complex64::new(1.0, 0.0); g.sample_count()];
        assert!((g.integrate(&one).re - SO3_VOLUME).abs() < 1e-12);
    }

    #[test]
    fn invalid_entries_stay_zero() {
        let mut c = WignerCoeffs::zeros(5, 3).unwrap();
        c.set(1, 0, 2, Complex64::new(1.0, 0.0));
        c.set(4, 0, 3, Complex64::new(1.0, 0.0));
        assert!(c.values().iter().all(|v| v.norm() == 0.0));
        let r = WignerCoeffs::random_uniform(5, 3, 1).unwrap();
        assert_eq!(r.get(1, 1, 2), Complex64::new(0.0, 0.0));
        assert_eq!(r.values()[r.index(1, 1, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn azimuthal_padding_round_trips() {
        let c = WignerCoeffs::random_uniform(6, 2, 9).unwrap();
        let padded = c.with_azimuthal_band_limit(5).unwrap();
        assert_eq!(padded.with_azimuthal_band_limit(2).unwrap(), c);
        assert_eq!(c.degree_support(), Some((0, 5)));
        assert_eq!(WignerCoeffs::zeros(6, 2).unwrap().degree_support(), None);
    }
}
