//! Transforms against direct summation with an explicit-sum Wigner d.

use spinlet::so3::{forward_wigner, inverse_wigner, RotationGrid, RotationMap, WignerCoeffs};
use spinlet::sphere::{forward_sht, inverse_sht, HarmonicCoeffs, SphereGrid, SphereMap};
use spinlet::Complex64;
use std::f64::consts::PI;

mod common;
use common::{big_d, d_sum, sy};

const L: usize = 8;
const TOL: f64 = 1e-12;

#[test]
fn explicit_sum_matches_known_values() {
    assert!((d_sum(1, 1, 0, 0.7) + 0.7f64.sin() / 2f64.sqrt()).abs() < 1e-15);
    assert!((d_sum(1, 0, 0, 0.7) - 0.7f64.cos()).abs() < 1e-15);
    assert!((d_sum(2, 2, 2, 0.3) - ((1.0 + 0.3f64.cos()) / 2.0).powi(2)).abs() < 1e-15);
}

#[test]
fn spin_sht_matches_direct_summation() {
    let grid = SphereGrid::new(L).unwrap();
    for s in -2..=2 {
        let f = HarmonicCoeffs::random_uniform(L, s, (100 + s) as u64).unwrap();
        let map = inverse_sht(&f, &grid).unwrap();
        for (t, &theta) in grid.thetas().iter().enumerate() {
            for k in 0..grid.n_phi() {
                let mut want = Complex64::new(0.0, 0.0);
                for l in f.min_l()..L {
                    for m in -(l as i64)..=l as i64 {
                        want += f.get(l, m) * sy(s, l, m, theta, grid.phi(k));
                    }
                }
                assert!((map.get(t, k) - want).norm() < TOL, "inverse s={s}");
            }
        }

        let samples = HarmonicCoeffs::random_uniform(L, s, (200 + s) as u64).unwrap();
        let g = SphereMap::from_fn(grid.clone(), s, |theta, phi| samples.evaluate(theta, phi).unwrap() * 0.5);
        let got = forward_sht(&g).unwrap();
        let dphi = 2.0 * PI / grid.n_phi() as f64;
        for l in got.min_l()..L {
            for m in -(l as i64)..=l as i64 {
                let mut want = Complex64::new(0.0, 0.0);
                for (t, (&theta, &w)) in grid.thetas().iter().zip(grid.weights()).enumerate() {
                    for k in 0..grid.n_phi() {
                        want += g.get(t, k) * sy(s, l, m, theta, grid.phi(k)).conj() * (w * dphi);
                    }
                }
                assert!((got.get(l, m) - want).norm() < TOL, "forward s={s} l={l} m={m}");
            }
        }
    }
}

#[test]
fn wigner_transforms_match_direct_summation() {
    for n_az in [1, 3] {
        let grid = RotationGrid::new(L, n_az).unwrap();
        let nm = n_az as i64 - 1;
        let coeffs = WignerCoeffs::random_uniform(L, n_az, 7 + n_az as u64).unwrap();
        let map = inverse_wigner(&coeffs, &grid).unwrap();
        for a in 0..grid.n_alpha() {
            for (b, &beta) in grid.betas().iter().enumerate() {
                for g in 0..grid.n_gamma() {
                    let mut want = Complex64::new(0.0, 0.0);
                    for l in 0..L {
                        let li = l as i64;
                        for n in -nm.min(li)..=nm.min(li) {
                            for m in -li..=li {
                                let norm = (2 * l + 1) as f64 / (8.0 * PI * PI);
                                want += coeffs.get(l, m, n)
                                    * big_d(l, m, n, grid.alpha(a), beta, grid.gamma(g)).conj()
                                    * norm;
                            }
                        }
                    }
                    assert!((map.get(a, b, g) - want).norm() < TOL, "inverse N={n_az}");
                }
            }
        }

        let other = inverse_wigner(&WignerCoeffs::random_uniform(L, n_az, 70 + n_az as u64).unwrap(), &grid).unwrap();
        let probe = RotationMap::new(grid.clone(), other.samples().to_vec()).unwrap();
        let got = forward_wigner(&probe).unwrap();
        let cell = 2.0 * PI / grid.n_alpha() as f64 * 2.0 * PI / grid.n_gamma() as f64;
        for l in 0..L {
            let li = l as i64;
            for n in -nm.min(li)..=nm.min(li) {
                for m in -li..=li {
                    let mut want = Complex64::new(0.0, 0.0);
                    for a in 0..grid.n_alpha() {
                        for (b, (&beta, &w)) in grid.betas().iter().zip(grid.weights()).enumerate() {
                            for g in 0..grid.n_gamma() {
                                want += probe.get(a, b, g)
                                    * big_d(l, m, n, grid.alpha(a), beta, grid.gamma(g))
                                    * (w * cell);
                            }
                        }
                    }
                    assert!((got.get(l, m, n) - want).norm() < TOL, "forward N={n_az} l={l} m={m} n={n}");
                }
            }
        }
    }
}
