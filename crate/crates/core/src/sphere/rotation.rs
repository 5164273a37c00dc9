//! Rotation of band-limited signals in harmonic space.

use super::wigner::{check_beta, DRecursion, HalfAngle, RecursionCoeffs};
use super::{lm_index, HarmonicCoeffs};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// zyz Euler angles of the rotation `R_z(α) R_y(β) R_z(γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

type Matrix = [[f64; 3]; 3];

fn rz(a: f64) -> Matrix {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn ry(b: f64) -> Matrix {
    let (s, c) = b.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn wrap(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl EulerAngles {
    /// Validated angles with `α, γ ∈ [0, 2π)` and `β ∈ [0, π]`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_beta(beta)?;
        for (name, v) in [("alpha", alpha), ("gamma", gamma)] {
            if !(0.0..TAU).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} outside [0, 2pi)")));
            }
        }
        Ok(EulerAngles { alpha, beta, gamma })
    }

    pub fn identity() -> Self {
        EulerAngles {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        matmul(&matmul(&rz(self.alpha), &ry(self.beta)), &rz(self.gamma))
    }

    /// Angles of a proper rotation matrix. At the poles of β the split between
    /// α and γ is arbitrary and γ is set to zero.
    pub fn from_matrix(r: &Matrix) -> Self {
        let beta = r[2][2].clamp(-1.0, 1.0).acos();
        let sin_beta = r[0][2].hypot(r[1][2]);
        let (alpha, gamma) = if sin_beta > 1e-12 {
            (r[1][2].atan2(r[0][2]), r[2][1].atan2(-r[2][0]))
        } else if r[2][2] > 0.0 {
            (r[1][0].atan2(r[0][0]), 0.0)
        } else {
            ((-r[1][0]).atan2(-r[0][0]), 0.0)
        };
        EulerAngles {
            alpha: wrap(alpha),
            beta: beta.min(PI),
            gamma: wrap(gamma),
        }
    }

    /// The rotation `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &EulerAngles) -> EulerAngles {
        EulerAngles::from_matrix(&matmul(&self.to_matrix(), &other.to_matrix()))
    }

    /// The inverse rotation, from the transposed matrix.
    pub fn inverse(&self) -> EulerAngles {
        let r = self.to_matrix();
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = r[j][i];
            }
        }
        EulerAngles::from_matrix(&t)
    }
}

/// `(ℛ_ρ f)_{ℓm} = Σ_n D^ℓ_{mn}(ρ) ₛf_{ℓn}`; the spin is unchanged.
pub fn rotate_harmonics(coeffs: &HarmonicCoeffs, rho: &EulerAngles) -> Result<HarmonicCoeffs> {
    check_beta(rho.beta)?;
    let band_limit = coeffs.band_limit();
    let l_max = band_limit - 1;
    let min_l = coeffs.min_l();
    let rec = DRecursion::new(l_max);
    let half = HalfAngle::new(rho.beta);
    let src = coeffs.values();

    let mut out = HarmonicCoeffs::zeros(band_limit, coeffs.spin())?;
    let dst = out.values_mut();
    let mut rc = RecursionCoeffs::default();
    let mut d = vec![0.0; band_limit];
    let lm = l_max as i64;
    for n in -lm..=lm {
        let phase_n = Complex64::from_polar(1.0, -(n as f64) * rho.gamma);
        for m in -lm..=lm {
            rec.coeffs_into(m, n, &mut rc);
            let start = rc.l0.max(min_l);
            if start >= band_limit {
                continue;
            }
            rec.fill(&rc, &half, &mut d);
            let phase = Complex64::from_polar(1.0, -(m as f64) * rho.alpha) * phase_n;
            for l in start..band_limit {
                dst[lm_index(l, m)] += phase * d[l] * src[lm_index(l, n)];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{build_grid, inverse_sht, SphereMap};

    #[test]
    fn identity_rotation_is_identity() {
        let f = HarmonicCoeffs::random_uniform(10, 1, 2).unwrap();
        let g = rotate_harmonics(&f, &EulerAngles::identity()).unwrap();
        assert!(g.max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn gamma_only_is_diagonal_phase() {
        let f = HarmonicCoeffs::random_uniform(9, 0, 5).unwrap();
        let gamma = 0.83;
        let g = rotate_harmonics(&f, &EulerAngles::new(0.0, 0.0, gamma).unwrap()).unwrap();
        for l in 0..9usize {
            for m in -(l as i64)..=(l as i64) {
                let want = f.get(l, m) * Complex64::from_polar(1.0, -(m as f64) * gamma);
                assert!((g.get(l, m) - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rotating_y10_tilts_the_axis() {
        // Y10 ∝ z; under R_y(β) it becomes ∝ sin β x + cos β z.
        let l = 4;
        let beta = 0.7;
        let mut f = HarmonicCoeffs::zeros(l, 0).unwrap();
        f.set(1, 0, Complex64::new(1.0, 0.0));
        let g = rotate_harmonics(&f, &EulerAngles::new(0.0, beta, 0.0).unwrap()).unwrap();
        let grid = build_grid(l).unwrap();
        let map = inverse_sht(&g, &grid).unwrap();
        let norm = (3.0 / (4.0 * PI)).sqrt();
        let want = SphereMap::from_fn(grid, 0, |t, p| {
            Complex64::new(norm * (beta.sin() * t.sin() * p.cos() + beta.cos() * t.cos()), 0.0)
        });
        for (a, b) in map.samples().iter().zip(want.samples()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn matrix_round_trip() {
        let e = EulerAngles::new(1.2, 0.4, 5.9).unwrap();
        let back = EulerAngles::from_matrix(&e.to_matrix());
        assert!((back.alpha - e.alpha).abs() < 1e-12);
        assert!((back.beta - e.beta).abs() < 1e-12);
        assert!((back.gamma - e.gamma).abs() < 1e-12);
    }

    #[test]
    fn rotations_compose_and_invert() {
        let f = HarmonicCoeffs::random_uniform(12, 2, 8).unwrap();
        let r1 = EulerAngles::new(0.4, 1.1, 2.5).unwrap();
        let r2 = EulerAngles::new(5.0, 2.3, 0.7).unwrap();
        let twice = rotate_harmonics(&rotate_harmonics(&f, &r2).unwrap(), &r1).unwrap();
        let once = rotate_harmonics(&f, &r1.compose(&r2)).unwrap();
        assert!(twice.max_abs_diff(&once).unwrap() < 1e-12);
        let back = rotate_harmonics(&rotate_harmonics(&f, &r1).unwrap(), &r1.inverse()).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_angles() {
        assert!(EulerAngles::new(TAU, 0.0, 0.0).is_err());
        assert!(EulerAngles::new(0.0, -0.1, 0.0).is_err());
    }
}
