use super::params::WaveletParams;
use crate::sphere::wigner::LnFactorial;
use num_complex::Complex64;
use std::f64::consts::LN_2;

/// Directionality coefficients `ζ_{ℓm}`, `0 ≤ ℓ < L`, `|m| < N`.
///
/// `ζ_{ℓm} = η υ √(2^{−p} C(p, (p−m)/2))` with `η = 1` for `N − 1` even and
/// `i` otherwise, `υ = [1 − (−1)^{N+m}]/2` and
/// `p = min(N − 1, ℓ − [1 + (−1)^{N+ℓ}]/2)`. Each populated row has unit norm
/// and `ζ_{ℓ,−m} = (−1)^{N−1} ζ*_{ℓm}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Directionality {
    band_limit: usize,
    azimuthal: usize,
    values: Vec<Complex64>,
}

impl Directionality {
    pub fn new(band_limit: usize, azimuthal: usize) -> Self {
        assert!(azimuthal >= 1, "azimuthal band-limit must be at least 1");
        let width = 2 * azimuthal - 1;
        let n = azimuthal as i64;
        let eta = if (n - 1) % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        let ln_fact = LnFactorial::new(azimuthal);
        let mut values = vec![Complex64::new(0.0, 0.0); band_limit * width];
        for l in 0..band_limit {
            let li = l as i64;
            let p = (n - 1).min(li - if (n + li) % 2 == 0 { 1 } else { 0 });
            if p < 0 {
                continue;
            }
            for m in -(n - 1)..=(n - 1) {
                // υ = 0 unless m and N have opposite parity; p shares m's parity.
                if (n + m) % 2 == 0 || m.abs() > p {
                    continue;
                }
                let k = ((p - m) / 2) as usize;
                let pu = p as usize;
                let ln_binom = ln_fact.get(pu) - ln_fact.get(k) - ln_fact.get(pu - k);
                let mag = (0.5 * (ln_binom - p as f64 * LN_2)).exp();
                values[l * width + (m + n - 1) as usize] = eta * mag;
            }
        }
        Directionality {
            band_limit,
            azimuthal,
            values,
        }
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn azimuthal_band_limit(&self) -> usize {
        self.azimuthal
    }

    /// `ζ_{ℓm}`, zero for `|m| ≥ N`.
    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        let n = self.azimuthal as i64;
        if m.abs() >= n || l >= self.band_limit {
            return Complex64::new(0.0, 0.0);
        }
        self.values[l * (2 * self.azimuthal - 1) + (m + n - 1) as usize]
    }

    /// `Σ_m |ζ_{ℓm}|²`.
    pub fn row_norm_sqr(&self, l: usize) -> f64 {
        let w = 2 * self.azimuthal - 1;
        self.values[l * w..(l + 1) * w].iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Directionality component of the system described by `params`.
pub fn directionality(params: &WaveletParams) -> Directionality {
    Directionality::new(params.band_limit(), params.azimuthal_band_limit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axisymmetric_limit() {
        let z = Directionality::new(10, 1);
        for l in 0..10 {
            assert_eq!(z.get(l, 0), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn two_orientations() {
        let z = Directionality::new(10, 2);
        let h = (0.5f64).sqrt();
        assert_eq!(z.row_norm_sqr(0), 0.0);
        for l in 1..10 {
            assert!((z.get(l, 1) - Complex64::new(0.0, h)).norm() < 1e-15);
            assert!((z.get(l, -1) - Complex64::new(0.0, h)).norm() < 1e-15);
            assert_eq!(z.get(l, 0), Complex64::new(0.0, 0.0));
            assert!((z.row_norm_sqr(l) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rows_normalised_parity_and_symmetry() {
        for n in 1..=8usize {
            let z = Directionality::new(20, n);
            let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
            for l in 0..20 {
                let norm = z.row_norm_sqr(l);
                assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-14, "N={n} l={l}");
                if l >= n {
                    assert!((norm - 1.0).abs() < 1e-14);
                }
                for m in -(n as i64) + 1..n as i64 {
                    let v = z.get(l, m);
                    if (n as i64 + m) % 2 == 0 {
                        assert_eq!(v, Complex64::new(0.0, 0.0));
                    }
                    if (n - 1) % 2 == 0 {
                        assert_eq!(v.im, 0.0);
                    } else {
                        assert_eq!(v.re, 0.0);
                    }
                    assert!((z.get(l, -m) - v.conj() * sign).norm() < 1e-15);
                }
                assert_eq!(z.get(l, n as i64), Complex64::new(0.0, 0.0));
            }
        }
    }
}
