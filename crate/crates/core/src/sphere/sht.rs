//! Forward and inverse spin spherical harmonic transforms on [`SphereGrid`].
//!
//! With `ₛY_{ℓm}(θ, φ) = (−1)^s √((2ℓ+1)/4π) e^{imφ} d^ℓ_{m,−s}(θ)` both
//! directions separate into a Legendre-like sum over ℓ at each `(θ, m)` and a
//! length `2L − 1` FFT along φ.

use super::wigner::{DRecursion, HalfAngle, RecursionCoeffs};
use super::{check_spin, lm_index, HarmonicCoeffs, SphereGrid, SphereMap};
use crate::error::{dimension, parameter, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_grid(band_limit: usize, spin: i32, grid: &SphereGrid) -> Result<()> {
    check_spin(band_limit, spin)?;
    if grid.band_limit() != band_limit {
        return dimension(format!(
            "coefficients have L = {band_limit}, grid has L = {}",
            grid.band_limit()
        ));
    }
    Ok(())
}

/// `(−1)^s √((2ℓ+1)/4π)` for `ℓ < L`.
fn harmonic_norms(band_limit: usize, spin: i32) -> Vec<f64> {
    let sign = if spin % 2 == 0 { 1.0 } else { -1.0 };
    (0..band_limit)
        .map(|l| sign * ((2 * l + 1) as f64 / (4.0 * PI)).sqrt())
        .collect()
}

#[inline]
fn fft_slot(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// Synthesises `Σ ₛf_{ℓm} ₛY_{ℓm}` at every node of `grid`.
pub fn inverse_sht(coeffs: &HarmonicCoeffs, grid: &SphereGrid) -> Result<SphereMap> {
    inverse_impl(coeffs, grid, false)
}

/// Inverse transform of a spin-0 signal whose coefficients satisfy
/// `f_{ℓ,−m} = (−1)^m f*_{ℓm}`. Only `m ≥ 0` is read and the output is real.
pub fn inverse_sht_real(coeffs: &HarmonicCoeffs, grid: &SphereGrid) -> Result<SphereMap> {
    if coeffs.spin() != 0 {
        return parameter("real-signal transform needs spin 0");
    }
    inverse_impl(coeffs, grid, true)
}

fn inverse_impl(coeffs: &HarmonicCoeffs, grid: &SphereGrid, real: bool) -> Result<SphereMap> {
    let band_limit = coeffs.band_limit();
    let spin = coeffs.spin();
    check_grid(band_limit, spin, grid)?;

    let l_max = band_limit - 1;
    let n_phi = grid.n_phi();
    let rec = DRecursion::new(l_max);
    let halves: Vec<HalfAngle> = grid.thetas().iter().map(|&t| HalfAngle::new(t)).collect();
    let norms = harmonic_norms(band_limit, spin);
    let values = coeffs.values();

    let mut spectrum = vec![ZERO; grid.sample_count()];
    let mut rc = RecursionCoeffs::default();
    let mut d = vec![0.0; band_limit];
    let mut g = vec![ZERO; band_limit];
    let lm = l_max as i64;
    let m_start = if real { 0 } else { -lm };

    for m in m_start..=lm {
        rec.coeffs_into(m, -(spin as i64), &mut rc);
        let l0 = rc.l0;
        for l in l0..band_limit {
            g[l] = values[lm_index(l, m)] * norms[l];
        }
        if g[l0..].iter().all(|v| *v == ZERO) {
            continue;
        }
        let slot = fft_slot(m, n_phi);
        let mirror = fft_slot(-m, n_phi);
        for (t, half) in halves.iter().enumerate() {
            rec.fill(&rc, half, &mut d);
            let mut acc = ZERO;
            for l in l0..band_limit {
                acc += g[l] * d[l];
            }
            spectrum[t * n_phi + slot] = acc;
            if real && m > 0 {
                spectrum[t * n_phi + mirror] = acc.conj();
            }
        }
    }

    let fft = FftPlanner::new().plan_fft_inverse(n_phi);
    fft.process(&mut spectrum);
    if real {
        spectrum.iter_mut().for_each(|v| v.im = 0.0);
    }
    SphereMap::new(grid.clone(), spin, spectrum)
}

/// Projects a sampled band-limited signal onto `ₛY_{ℓm}`. Exact for inputs
/// produced by [`inverse_sht`] on the same grid.
pub fn forward_sht(map: &SphereMap) -> Result<HarmonicCoeffs> {
    forward_impl(map, false)
}

/// Forward transform of a real spin-0 map: computes `m ≥ 0` and fills
/// `m < 0` by conjugate symmetry. Imaginary parts of the samples are ignored.
pub fn forward_sht_real(map: &SphereMap) -> Result<HarmonicCoeffs> {
    if map.spin() != 0 {
        return parameter("real-signal transform needs spin 0");
    }
    forward_impl(map, true)
}

fn forward_impl(map: &SphereMap, real: bool) -> Result<HarmonicCoeffs> {
    let grid = map.grid();
    let band_limit = grid.band_limit();
    let spin = map.spin();
    check_grid(band_limit, spin, grid)?;

    let l_max = band_limit - 1;
    let n_phi = grid.n_phi();
    let mut rows: Vec<Complex64> = if real {
        map.samples().iter().map(|v| Complex64::new(v.re, 0.0)).collect()
    } else {
        map.samples().to_vec()
    };
    FftPlanner::new().plan_fft_forward(n_phi).process(&mut rows);
    let dphi = 2.0 * PI / n_phi as f64;

    let rec = DRecursion::new(l_max);
    let halves: Vec<HalfAngle> = grid.thetas().iter().map(|&t| HalfAngle::new(t)).collect();
    let norms = harmonic_norms(band_limit, spin);
    let weights = grid.weights();

    let mut out = HarmonicCoeffs::zeros(band_limit, spin)?;
    let mut rc = RecursionCoeffs::default();
    let mut d = vec![0.0; band_limit];
    let mut acc = vec![ZERO; band_limit];
    let lm = l_max as i64;
    let m_start = if real { 0 } else { -lm };

    for m in m_start..=lm {
        rec.coeffs_into(m, -(spin as i64), &mut rc);
        let l0 = rc.l0;
        if l0 >= band_limit {
            continue;
        }
        acc[l0..].iter_mut().for_each(|v| *v = ZERO);
        let slot = fft_slot(m, n_phi);
        for (t, half) in halves.iter().enumerate() {
            let gm = rows[t * n_phi + slot] * (weights[t] * dphi);
            rec.fill(&rc, half, &mut d);
            for l in l0..band_limit {
                acc[l] += gm * d[l];
            }
        }
        let values = out.values_mut();
        for l in l0..band_limit {
            let v = acc[l] * norms[l];
            values[lm_index(l, m)] = v;
            if real && m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                values[lm_index(l, -m)] = v.conj() * sign;
            }
        }
    }
    Ok(out)
}
