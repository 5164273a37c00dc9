//! Wigner transforms factorised as an FFT over `(α, γ)` and a per-`(m, n)`
//! projection onto `d^ℓ_{mn}(β)`, `O(N L³)` overall.
//!
//! Batched entry points evaluate each d-function column once and apply it to
//! every coefficient set sharing the grid.

use super::{RotationGrid, RotationMap, WignerCoeffs, SO3_VOLUME};
use crate::error::{dimension, Result};
use crate::sphere::wigner::{DRecursion, HalfAngle, RecursionCoeffs};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
fn slot(k: i64, len: usize) -> usize {
    k.rem_euclid(len as i64) as usize
}

struct Plans {
    alpha: Arc<dyn Fft<f64>>,
    gamma: Arc<dyn Fft<f64>>,
}

impl Plans {
    fn new(grid: &RotationGrid, inverse: bool) -> Self {
        let mut planner = FftPlanner::new();
        if inverse {
            Plans {
                alpha: planner.plan_fft_inverse(grid.n_alpha()),
                gamma: planner.plan_fft_inverse(grid.n_gamma()),
            }
        } else {
            Plans {
                alpha: planner.plan_fft_forward(grid.n_alpha()),
                gamma: planner.plan_fft_forward(grid.n_gamma()),
            }
        }
    }

    /// Applies the α transform to every row and the γ transform to every
    /// `(β, α)` column of a `(γ, β, α)` array.
    fn apply(&self, grid: &RotationGrid, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.alpha.process(data);
        let ng = grid.n_gamma();
        if ng == 1 {
            return;
        }
        let plane = grid.n_alpha() * grid.n_beta();
        scratch.resize(plane * ng, ZERO);
        for (p, col) in scratch.chunks_mut(ng).enumerate() {
            for (g, v) in col.iter_mut().enumerate() {
                *v = data[g * plane + p];
            }
        }
        self.gamma.process(scratch);
        for (p, col) in scratch.chunks(ng).enumerate() {
            for (g, v) in col.iter().enumerate() {
                data[g * plane + p] = *v;
            }
        }
    }
}

fn check_shape(coeffs: &WignerCoeffs, grid: &RotationGrid) -> Result<()> {
    if coeffs.band_limit() != grid.band_limit()
        || coeffs.azimuthal_band_limit() != grid.azimuthal_band_limit()
    {
        return dimension(format!(
            "coefficients have (L, N) = ({}, {}), grid has ({}, {})",
            coeffs.band_limit(),
            coeffs.azimuthal_band_limit(),
            grid.band_limit(),
            grid.azimuthal_band_limit()
        ));
    }
    Ok(())
}

/// Evaluates `f(ρ) = Σ (2ℓ+1)/(8π²) f^ℓ_{mn} D^{ℓ*}_{mn}(ρ)` on `grid`.
pub fn inverse_wigner(coeffs: &WignerCoeffs, grid: &RotationGrid) -> Result<RotationMap> {
    Ok(inverse_wigner_batch(&[coeffs], grid, false)?.pop().expect("one map"))
}

/// Inverse transform of coefficients with `f^{ℓ*}_{mn} = (−1)^{m+n} f^ℓ_{−m,−n}`.
/// Only `m ≥ 0` is read and the output is real.
pub fn inverse_wigner_real(coeffs: &WignerCoeffs, grid: &RotationGrid) -> Result<RotationMap> {
    Ok(inverse_wigner_batch(&[coeffs], grid, true)?.pop().expect("one map"))
}

/// Inverse transform of several coefficient sets on one grid.
///
/// With `real` set, every set is assumed to obey the real-function symmetry
/// and only `m ≥ 0` is read.
pub fn inverse_wigner_batch(
    coeffs: &[&WignerCoeffs],
    grid: &RotationGrid,
    real: bool,
) -> Result<Vec<RotationMap>> {
    for c in coeffs {
        check_shape(c, grid)?;
    }
    let band_limit = grid.band_limit();
    let l_max = band_limit - 1;
    let (na, nb, ng) = (grid.n_alpha(), grid.n_beta(), grid.n_gamma());
    let rec = DRecursion::new(l_max);
    let halves: Vec<HalfAngle> = grid.betas().iter().map(|&b| HalfAngle::new(b)).collect();
    let norms: Vec<f64> = (0..band_limit)
        .map(|l| (2 * l + 1) as f64 / SO3_VOLUME)
        .collect();
    let supports: Vec<Option<(usize, usize)>> = coeffs.iter().map(|c| c.degree_support()).collect();

    let mut spectra: Vec<Vec<Complex64>> = coeffs.iter().map(|_| vec![ZERO; grid.sample_count()]).collect();
    let mut rc = RecursionCoeffs::default();
    let mut d = vec![0.0; band_limit];
    let mut gathered = vec![ZERO; coeffs.len() * band_limit];
    let mut active: Vec<(usize, usize, usize)> = Vec::with_capacity(coeffs.len());

    let nm = grid.azimuthal_band_limit() as i64 - 1;
    let lm = l_max as i64;
    for n in -nm..=nm {
        let m_start = if real { 0 } else { -lm };
        for m in m_start..=lm {
            rec.coeffs_into(m, n, &mut rc);
            let l0 = rc.l0;
            active.clear();
            for (k, c) in coeffs.iter().enumerate() {
                let Some((lo, hi)) = supports[k] else { continue };
                let lo = lo.max(l0);
                if lo > hi {
                    continue;
                }
                let g = &mut gathered[k * band_limit..(k + 1) * band_limit];
                let mut any = false;
                for l in lo..=hi {
                    g[l] = c.values()[c.index(l, m, n)] * norms[l];
                    any |= g[l] != ZERO;
                }
                if any {
                    active.push((k, lo, hi));
                }
            }
            let Some(top) = active.iter().map(|a| a.2).max() else { continue };

            let gs = slot(n, ng);
            let ms = slot(m, na);
            let mirror = (slot(-n, ng), slot(-m, na));
            for (b, half) in halves.iter().enumerate() {
                rec.fill_to(&rc, half, &mut d, top);
                for &(k, lo, hi) in &active {
                    let g = &gathered[k * band_limit..(k + 1) * band_limit];
                    let mut acc = ZERO;
                    for l in lo..=hi {
                        acc += g[l] * d[l];
                    }
                    let spec = &mut spectra[k];
                    spec[(gs * nb + b) * na + ms] = acc;
                    if real && m > 0 {
                        spec[(mirror.0 * nb + b) * na + mirror.1] = acc.conj();
                    }
                }
            }
        }
    }

    let plans = Plans::new(grid, true);
    let mut scratch = Vec::new();
    spectra
        .into_iter()
        .map(|mut s| {
            plans.apply(grid, &mut s, &mut scratch);
            if real {
                s.iter_mut().for_each(|v| v.im = 0.0);
            }
            RotationMap::new(grid.clone(), s)
        })
        .collect()
}

/// Projects a sampled band-limited function onto `D^{ℓ*}_{mn}`:
/// `f^ℓ_{mn} = ∫ f(ρ) D^ℓ_{mn}(ρ) dρ`, exact on the grid.
pub fn forward_wigner(map: &RotationMap) -> Result<WignerCoeffs> {
    Ok(forward_wigner_batch(&[map], false)?.pop().expect("one set"))
}

/// Forward transform of a real-valued map; imaginary parts are ignored and
/// `m < 0` is filled by conjugate symmetry.
pub fn forward_wigner_real(map: &RotationMap) -> Result<WignerCoeffs> {
    Ok(forward_wigner_batch(&[map], true)?.pop().expect("one set"))
}

/// Forward transform of several maps sharing one grid.
pub fn forward_wigner_batch(maps: &[&RotationMap], real: bool) -> Result<Vec<WignerCoeffs>> {
    let Some(first) = maps.first() else {
        return Ok(Vec::new());
    };
    let full = vec![(0, first.grid().band_limit() - 1); maps.len()];
    forward_wigner_batch_ranges(maps, real, &full)
}

/// As [`forward_wigner_batch`] but only degrees `lo ≤ ℓ ≤ hi` of each
/// `ranges` entry are computed; the rest are left at zero.
pub(crate) fn forward_wigner_batch_ranges(
    maps: &[&RotationMap],
    real: bool,
    ranges: &[(usize, usize)],
) -> Result<Vec<WignerCoeffs>> {
    let Some(first) = maps.first() else {
        return Ok(Vec::new());
    };
    assert_eq!(maps.len(), ranges.len());
    let grid = first.grid();
    if maps.iter().any(|m| m.grid() != grid) {
        return dimension("batched maps must share one grid");
    }
    let band_limit = grid.band_limit();
    let azimuthal = grid.azimuthal_band_limit();
    let l_max = band_limit - 1;
    let (na, nb, ng) = (grid.n_alpha(), grid.n_beta(), grid.n_gamma());
    let cell = (2.0 * PI / na as f64) * (2.0 * PI / ng as f64);

    let plans = Plans::new(grid, false);
    let mut scratch = Vec::new();
    let spectra: Vec<Vec<Complex64>> = maps
        .iter()
        .map(|m| {
            let mut s: Vec<Complex64> = if real {
                m.samples().iter().map(|v| Complex64::new(v.re, 0.0)).collect()
            } else {
                m.samples().to_vec()
            };
            plans.apply(grid, &mut s, &mut scratch);
            s
        })
        .collect();

    let rec = DRecursion::new(l_max);
    let halves: Vec<HalfAngle> = grid.betas().iter().map(|&b| HalfAngle::new(b)).collect();
    let weights: Vec<f64> = grid.weights().iter().map(|w| w * cell).collect();
    let mut outs: Vec<WignerCoeffs> = maps
        .iter()
        .map(|_| WignerCoeffs::zeros(band_limit, azimuthal))
        .collect::<Result<_>>()?;

    let mut rc = RecursionCoeffs::default();
    let mut d = vec![0.0; band_limit];
    let mut acc = vec![ZERO; maps.len() * band_limit];
    let nm = azimuthal as i64 - 1;
    let lm = l_max as i64;
    for n in -nm..=nm {
        let m_start = if real { 0 } else { -lm };
        for m in m_start..=lm {
            rec.coeffs_into(m, n, &mut rc);
            let l0 = rc.l0;
            if l0 > l_max {
                continue;
            }
            let top = ranges
                .iter()
                .filter(|r| r.1 >= l0 && r.0 <= r.1)
                .map(|r| r.1)
                .max();
            let Some(top) = top else { continue };
            acc.iter_mut().for_each(|v| *v = ZERO);
            let gs = slot(n, ng);
            let ms = slot(m, na);
            for (b, half) in halves.iter().enumerate() {
                rec.fill_to(&rc, half, &mut d, top);
                for (k, spec) in spectra.iter().enumerate() {
                    let (lo, hi) = (ranges[k].0.max(l0), ranges[k].1.min(l_max));
                    if lo > hi {
                        continue;
                    }
                    let g = spec[(gs * nb + b) * na + ms] * weights[b];
                    let a = &mut acc[k * band_limit..(k + 1) * band_limit];
                    for l in lo..=hi {
                        a[l] += g * d[l];
                    }
                }
            }
            for (k, out) in outs.iter_mut().enumerate() {
                let a = &acc[k * band_limit..(k + 1) * band_limit];
                let (lo, hi) = (ranges[k].0.max(l0), ranges[k].1.min(l_max));
                for l in lo..=hi {
                    let idx = out.index(l, m, n);
                    out.values_mut()[idx] = a[l];
                    if real && m > 0 {
                        let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                        let mirror = out.index(l, -m, -n);
                        out.values_mut()[mirror] = a[l].conj() * sign;
                    }
                }
            }
        }
    }
    Ok(outs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_from_monopole() {
        let mut c = WignerCoeffs::zeros(4, 2).unwrap();
        c.set(0, 0, 0, Complex64::new(SO3_VOLUME, 0.0));
        let map = inverse_wigner(&c, &RotationGrid::new(4, 2).unwrap()).unwrap();
        for v in map.samples() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn azimuthal_one_is_constant_in_gamma() {
        let c = WignerCoeffs::random_uniform(6, 1, 4).unwrap();
        let grid = RotationGrid::new(6, 1).unwrap();
        let map = inverse_wigner(&c, &grid).unwrap();
        assert_eq!(grid.n_gamma(), 1);
        // Padding to N = 3 must give three identical γ slices.
        let padded = c.with_azimuthal_band_limit(3).unwrap();
        let map3 = inverse_wigner(&padded, &RotationGrid::new(6, 3).unwrap()).unwrap();
        for g in 0..5 {
            for (a, b) in map3.gamma_slice(g).iter().zip(map.gamma_slice(0)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_coefficient_recovers() {
        let grid = RotationGrid::new(6, 3).unwrap();
        let mut c = WignerCoeffs::zeros(6, 3).unwrap();
        c.set(2, 1, -1, Complex64::new(1.0, 0.0));
        let back = forward_wigner(&inverse_wigner(&c, &grid).unwrap()).unwrap();
        assert!(back.max_abs_diff(&c).unwrap() < 1e-12);
    }

    #[test]
    fn round_trip_l32_n4() {
        let grid = RotationGrid::new(32, 4).unwrap();
        let c = WignerCoeffs::random_uniform(32, 4, 21).unwrap();
        let back = forward_wigner(&inverse_wigner(&c, &grid).unwrap()).unwrap();
        assert!(back.max_abs_diff(&c).unwrap() < 1e-12);
    }

    #[test]
    fn batch_equals_individual() {
        let grid = RotationGrid::new(10, 3).unwrap();
        let a = WignerCoeffs::random_uniform(10, 3, 1).unwrap();
        let mut b = WignerCoeffs::zeros(10, 3).unwrap();
        b.set(5, -2, 1, Complex64::new(0.5, -1.0));
        let batch = inverse_wigner_batch(&[&a, &b], &grid, false).unwrap();
        assert_eq!(batch[0], inverse_wigner(&a, &grid).unwrap());
        assert_eq!(batch[1], inverse_wigner(&b, &grid).unwrap());
        let fwd = forward_wigner_batch(&[&batch[0], &batch[1]], false).unwrap();
        assert_eq!(fwd[0], forward_wigner(&batch[0]).unwrap());
    }

    #[test]
    fn real_map_has_symmetric_coefficients_and_fast_path_agrees() {
        let grid = RotationGrid::new(9, 3).unwrap();
        let raw = WignerCoeffs::random_uniform(9, 3, 8).unwrap();
        let map = inverse_wigner(&raw, &grid).unwrap();
        let real: Vec<Complex64> = map.samples().iter().map(|v| Complex64::new(v.re, 0.0)).collect();
        let real_map = RotationMap::new(grid.clone(), real).unwrap();
        let c = forward_wigner(&real_map).unwrap();
        for l in 0..9usize {
            let li = l as i64;
            for m in -li..=li {
                for n in -(li.min(2))..=li.min(2) {
                    let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                    let lhs = c.get(l, m, n).conj();
                    let rhs = c.get(l, -m, -n) * sign;
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
        let fast = forward_wigner_real(&real_map).unwrap();
        assert!(fast.max_abs_diff(&c).unwrap() < 1e-12);
        let back = inverse_wigner_real(&fast, &grid).unwrap();
        assert!(back.max_abs_diff(&real_map).unwrap() < 1e-12);
    }

    #[test]
    fn parseval() {
        let grid = RotationGrid::new(12, 4).unwrap();
        let c = WignerCoeffs::random_uniform(12, 4, 5).unwrap();
        let map = inverse_wigner(&c, &grid).unwrap();
        let rel = (map.energy() - c.energy()).abs() / c.energy();
        assert!(rel < 1e-12, "rel={rel}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let c = WignerCoeffs::zeros(6, 2).unwrap();
        assert!(inverse_wigner(&c, &RotationGrid::new(6, 3).unwrap()).is_err());
    }
}
