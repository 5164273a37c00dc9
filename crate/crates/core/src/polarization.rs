//! Spin-2 polarisation: `Q ± iU` harmonics, E/B modes and their wavelet
//! coefficients.
//!
//! With `λ_ℓ = √((ℓ+2)!/(ℓ−2)!)`,
//!
//! ```text
//! ±2a_{ℓm} = −(E_{ℓm} ± i B_{ℓm}),    Ẽ_{ℓm} = λ_ℓ E_{ℓm},    B̃_{ℓm} = λ_ℓ B_{ℓm}.
//! ```

use crate::error::{dimension, parameter, Result};
use crate::sphere::{forward_sht, HarmonicCoeffs, SphereMap};
use crate::wavelet::{analyze_with, TransformOptions, WaveletCoefficients, WaveletFamily};
use crate::so3::RotationMap;
use num_complex::Complex64;

/// Harmonic coefficients of `₊₂(Q + iU)` and `₋₂(Q − iU)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesQU {
    plus: HarmonicCoeffs,
    minus: HarmonicCoeffs,
}

impl StokesQU {
    pub fn new(plus: HarmonicCoeffs, minus: HarmonicCoeffs) -> Result<Self> {
        if plus.spin() != 2 || minus.spin() != -2 {
            return dimension(format!(
                "expected spins (2, -2), got ({}, {})",
                plus.spin(),
                minus.spin()
            ));
        }
        if plus.band_limit() != minus.band_limit() {
            return dimension(format!(
                "band-limits differ: {} vs {}",
                plus.band_limit(),
                minus.band_limit()
            ));
        }
        Ok(StokesQU { plus, minus })
    }

    /// Pair for real `Q`, `U`: `₋₂a_{ℓm} = (−1)^m conj(₂a_{ℓ,−m})`.
    pub fn from_plus(plus: HarmonicCoeffs) -> Result<Self> {
        if plus.spin() != 2 {
            return dimension(format!("expected spin 2, got {}", plus.spin()));
        }
        let minus = HarmonicCoeffs::from_fn(plus.band_limit(), -2, |l, m| {
            let v = plus.get(l, -m).conj();
            if m % 2 == 0 {
                v
            } else {
                -v
            }
        })?;
        Ok(StokesQU { plus, minus })
    }

    /// From samples of `Q + iU` on a sphere grid.
    pub fn from_map(map: &SphereMap) -> Result<Self> {
        if map.spin() != 2 {
            return dimension(format!("expected a spin-2 map, got spin {}", map.spin()));
        }
        Self::from_plus(forward_sht(map)?)
    }

    pub fn plus(&self) -> &HarmonicCoeffs {
        &self.plus
    }

    pub fn minus(&self) -> &HarmonicCoeffs {
        &self.minus
    }

    pub fn band_limit(&self) -> usize {
        self.plus.band_limit()
    }
}

/// Which normalisation an [`EBPair`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EBVariant {
    /// `E`, `B`.
    Physical,
    /// `Ẽ = λ_ℓ E`, `B̃ = λ_ℓ B`.
    DerivativeWeighted,
}

/// Scalar E and B mode harmonics. Rows `ℓ < 2` are always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EBPair {
    e: HarmonicCoeffs,
    b: HarmonicCoeffs,
    variant: EBVariant,
}

impl EBPair {
    /// Rows `ℓ < 2` of the inputs are discarded.
    pub fn new(e: HarmonicCoeffs, b: HarmonicCoeffs, variant: EBVariant) -> Result<Self> {
        if e.spin() != 0 || b.spin() != 0 {
            return dimension("E and B must have spin 0");
        }
        if e.band_limit() != b.band_limit() {
            return dimension(format!(
                "band-limits differ: {} vs {}",
                e.band_limit(),
                b.band_limit()
            ));
        }
        let clear = |c: &HarmonicCoeffs| {
            HarmonicCoeffs::from_fn(c.band_limit(), 0, |l, m| {
                if l < 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c.get(l, m)
                }
            })
        };
        Ok(EBPair {
            e: clear(&e)?,
            b: clear(&b)?,
            variant,
        })
    }

    pub fn e(&self) -> &HarmonicCoeffs {
        &self.e
    }

    pub fn b(&self) -> &HarmonicCoeffs {
        &self.b
    }

    pub fn variant(&self) -> EBVariant {
        self.variant
    }

    pub fn band_limit(&self) -> usize {
        self.e.band_limit()
    }

    pub fn to_physical(&self) -> EBPair {
        match self.variant {
            EBVariant::Physical => self.clone(),
            EBVariant::DerivativeWeighted => self.reweight(|l| 1.0 / eb_weight(l), EBVariant::Physical),
        }
    }

    pub fn to_weighted(&self) -> EBPair {
        match self.variant {
            EBVariant::DerivativeWeighted => self.clone(),
            EBVariant::Physical => self.reweight(eb_weight, EBVariant::DerivativeWeighted),
        }
    }

    fn reweight(&self, w: impl Fn(usize) -> f64, variant: EBVariant) -> EBPair {
        let apply = |c: &HarmonicCoeffs| {
            HarmonicCoeffs::from_fn(c.band_limit(), 0, |l, m| {
                if l < 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c.get(l, m) * w(l)
                }
            })
            .expect("band-limit already validated")
        };
        EBPair {
            e: apply(&self.e),
            b: apply(&self.b),
            variant,
        }
    }
}

/// `λ_ℓ = √((ℓ+2)!/(ℓ−2)!) = √((ℓ−1)ℓ(ℓ+1)(ℓ+2))`; zero for `ℓ < 2`.
pub fn eb_weight(l: usize) -> f64 {
    if l < 2 {
        return 0.0;
    }
    let l = l as f64;
    ((l - 1.0) * l * (l + 1.0) * (l + 2.0)).sqrt()
}

/// Physical E and B modes of `qu`.
pub fn qu_to_eb(qu: &StokesQU) -> Result<EBPair> {
    let (p, q) = (&qu.plus, &qu.minus);
    let half = Complex64::new(0.5, 0.0);
    let i_half = Complex64::new(0.0, 0.5);
    let e = HarmonicCoeffs::from_fn(qu.band_limit(), 0, |l, m| -(p.get(l, m) + q.get(l, m)) * half)?;
    let b = HarmonicCoeffs::from_fn(qu.band_limit(), 0, |l, m| (p.get(l, m) - q.get(l, m)) * i_half)?;
    EBPair::new(e, b, EBVariant::Physical)
}

/// Inverse of [`qu_to_eb`]; accepts either variant.
pub fn eb_to_qu(eb: &EBPair) -> Result<StokesQU> {
    let eb = eb.to_physical();
    let i = Complex64::new(0.0, 1.0);
    let plus = HarmonicCoeffs::from_fn(eb.band_limit(), 2, |l, m| -(eb.e.get(l, m) + i * eb.b.get(l, m)))?;
    let minus = HarmonicCoeffs::from_fn(eb.band_limit(), -2, |l, m| -(eb.e.get(l, m) - i * eb.b.get(l, m)))?;
    StokesQU::new(plus, minus)
}

/// Harmonic action of `ð̄^times`: spin `s` becomes `s − times` and, per step,
/// `ð̄ ₛY_{ℓm} = −√((ℓ+s)(ℓ−s+1)) ₛ₋₁Y_{ℓm}`.
///
/// Rows with `ℓ < |s − times|` are zero in the output.
pub fn spin_lower_harmonic(coeffs: &HarmonicCoeffs, times: u32) -> Result<HarmonicCoeffs> {
    let s = coeffs.spin();
    let target = s - times as i32;
    HarmonicCoeffs::from_fn(coeffs.band_limit(), target, |l, m| {
        coeffs.get(l, m) * lowering_factor(l, s, times)
    })
}

/// `∏_{k<times} −√((ℓ+s−k)(ℓ−s+k+1))`, zero when a step leaves `|s| ≤ ℓ`.
pub fn lowering_factor(l: usize, spin: i32, times: u32) -> f64 {
    let l = l as i64;
    let mut s = spin as i64;
    if s.abs() > l {
        return 0.0;
    }
    let mut factor = 1.0;
    for _ in 0..times {
        let p = (l + s) * (l - s + 1);
        if p <= 0 {
            return 0.0;
        }
        factor *= -(p as f64).sqrt();
        s -= 1;
    }
    factor
}

/// The scalar family `ψ̃` with `ð² ψ̃ = ₂ψ`, i.e. `ψ̃_{ℓn} = ψ_{ℓn}/λ_ℓ` and
/// `Φ̃_ℓ = Φ_ℓ/λ_ℓ`, rows `ℓ < 2` zero.
///
/// Analysing `Ẽ` with `ψ̃` reproduces `−Re` of the spin-2 coefficients of
/// `₂(Q + iU)`.
pub fn scalar_companion(family: &WaveletFamily) -> Result<WaveletFamily> {
    if family.params().spin() != 2 {
        return parameter(format!("need a spin-2 family, got spin {}", family.params().spin()));
    }
    let inv = |l: usize| if l < 2 { 0.0 } else { 1.0 / eb_weight(l) };
    family.reweighted(0, inv, inv)
}

/// Splits the spin-2 wavelet coefficients of `₂(Q + iU)` into
/// `(−Re W, −Im W)`, the scalar coefficients of `Ẽ` and `B̃` with respect
/// to [`scalar_companion`]. Scaling coefficients are split the same way.
pub fn eb_wavelet_connection(
    qu: &StokesQU,
    family: &WaveletFamily,
    options: TransformOptions,
) -> Result<(WaveletCoefficients, WaveletCoefficients)> {
    if family.params().spin() != 2 {
        return parameter(format!("need a spin-2 family, got spin {}", family.params().spin()));
    }
    let w = analyze_with(qu.plus(), family, options)?;
    let part = |f: fn(Complex64) -> f64| -> Result<WaveletCoefficients> {
        let scales = w
            .scales()
            .iter()
            .map(|m| {
                let samples = m.samples().iter().map(|&v| Complex64::new(f(v), 0.0)).collect();
                RotationMap::new(m.grid().clone(), samples)
            })
            .collect::<Result<Vec<_>>>()?;
        let sc = w.scaling();
        let scaling = SphereMap::new(
            sc.grid().clone(),
            0,
            sc.samples().iter().map(|&v| Complex64::new(f(v), 0.0)).collect(),
        )?;
        WaveletCoefficients::new(0, w.azimuthal_band_limit(), w.j_min(), scales, scaling)
    };
    Ok((part(|v| -v.re)?, part(|v| -v.im)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::lm_index;

    fn delta(l: usize, s: i32, at: (usize, i64), v: Complex64) -> HarmonicCoeffs {
        let mut c = HarmonicCoeffs::zeros(l, s).unwrap();
        c.set(at.0, at.1, v);
        c
    }

    #[test]
    fn pure_modes() {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let qu = StokesQU::new(delta(8, 2, (2, 0), -one), delta(8, -2, (2, 0), -one)).unwrap();
        let eb = qu_to_eb(&qu).unwrap();
        assert_eq!(eb.e().get(2, 0), one);
        assert_eq!(eb.b().energy(), 0.0);

        let qu = StokesQU::new(delta(8, 2, (2, 0), -i), delta(8, -2, (2, 0), i)).unwrap();
        let eb = qu_to_eb(&qu).unwrap();
        assert_eq!(eb.b().get(2, 0), one);
        assert_eq!(eb.e().energy(), 0.0);
    }

    #[test]
    fn conversions_invert() {
        let qu = StokesQU::new(
            HarmonicCoeffs::random_uniform(16, 2, 1).unwrap(),
            HarmonicCoeffs::random_uniform(16, -2, 2).unwrap(),
        )
        .unwrap();
        let back = eb_to_qu(&qu_to_eb(&qu).unwrap()).unwrap();
        assert!(back.plus().max_abs_diff(qu.plus()).unwrap() < 1e-12);
        assert!(back.minus().max_abs_diff(qu.minus()).unwrap() < 1e-12);

        let eb = EBPair::new(
            HarmonicCoeffs::random_uniform(16, 0, 3).unwrap(),
            HarmonicCoeffs::random_uniform(16, 0, 4).unwrap(),
            EBVariant::DerivativeWeighted,
        )
        .unwrap();
        let again = qu_to_eb(&eb_to_qu(&eb).unwrap()).unwrap().to_weighted();
        assert!(again.e().max_abs_diff(eb.e()).unwrap() < 1e-12 * eb_weight(15));
        assert!(again.b().max_abs_diff(eb.b()).unwrap() < 1e-12 * eb_weight(15));
    }

    #[test]
    fn swapping_spins_flips_b() {
        let p = HarmonicCoeffs::random_uniform(12, 2, 5).unwrap();
        let q = HarmonicCoeffs::random_uniform(12, -2, 6).unwrap();
        let eb = qu_to_eb(&StokesQU::new(p.clone(), q.clone()).unwrap()).unwrap();
        let swapped = StokesQU::new(q.with_spin(2).unwrap(), p.with_spin(-2).unwrap()).unwrap();
        let eb2 = qu_to_eb(&swapped).unwrap();
        assert!(eb2.e().max_abs_diff(eb.e()).unwrap() < 1e-15);
        assert!(eb2.b().max_abs_diff(&eb.b().scaled(-1.0)).unwrap() < 1e-15);
    }

    #[test]
    fn weighting_clears_low_rows() {
        let e = HarmonicCoeffs::random_uniform(6, 0, 7).unwrap();
        let eb = EBPair::new(e.clone(), e, EBVariant::Physical).unwrap();
        for idx in 0..4 {
            assert_eq!(eb.e().values()[idx], Complex64::new(0.0, 0.0));
        }
        let w = eb.to_weighted();
        assert!((w.e().get(3, 1) - eb.e().get(3, 1) * 120f64.sqrt()).norm() < 1e-12);
        assert_eq!(w.e().values()[lm_index(2, 0)], eb.e().get(2, 0) * 24f64.sqrt());
    }

    #[test]
    fn lowering_factors() {
        assert_eq!(spin_lower_harmonic(&delta(4, 2, (2, 0), Complex64::new(1.0, 0.0)), 0).unwrap(),
            delta(4, 2, (2, 0), Complex64::new(1.0, 0.0)));
        let out = spin_lower_harmonic(&delta(4, 2, (2, 1), Complex64::new(0.0, 2.0)), 2).unwrap();
        assert_eq!(out.spin(), 0);
        assert!((out.get(2, 1) - Complex64::new(0.0, 2.0 * 24f64.sqrt())).norm() < 1e-14);
        for l in 2..20 {
            assert!((lowering_factor(l, 2, 2) - eb_weight(l)).abs() < 1e-12 * eb_weight(l));
        }
        assert_eq!(lowering_factor(1, 2, 2), 0.0);
        assert_eq!(lowering_factor(2, -2, 1), 0.0);
    }

    #[test]
    fn low_rows_lower_to_zero() {
        let c = HarmonicCoeffs::from_fn(6, 0, |l, _| Complex64::new(if l == 1 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let lifted = c.with_spin(2).unwrap();
        assert_eq!(spin_lower_harmonic(&lifted, 2).unwrap().energy(), 0.0);
    }

    #[test]
    fn real_field_partner() {
        let qu = StokesQU::from_plus(HarmonicCoeffs::random_uniform(10, 2, 9).unwrap()).unwrap();
        let eb = qu_to_eb(&qu).unwrap();
        for l in 2..10usize {
            for m in 0..=l as i64 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((eb.e().get(l, -m) - eb.e().get(l, m).conj() * sign).norm() < 1e-15);
                assert!((eb.b().get(l, -m) - eb.b().get(l, m).conj() * sign).norm() < 1e-15);
            }
        }
    }
}
