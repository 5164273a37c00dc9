//! Explicit-sum Wigner d and spin harmonics, independent of the library's
//! recursion.
#![allow(dead_code)]

use spinlet::Complex64;
use std::f64::consts::PI;

pub fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Wigner's closed-form sum for `d^ℓ_{mn}(β)`.
pub fn d_sum(l: i64, m: i64, n: i64, beta: f64) -> f64 {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let pre = (fact(l + m) * fact(l - m) * fact(l + n) * fact(l - n)).sqrt();
    let mut acc = 0.0;
    for k in 0..=2 * l {
        let a = [l + n - k, k, m - n + k, l - m - k];
        if a.iter().any(|&x| x < 0) {
            continue;
        }
        let sign = if (m - n + k) % 2 == 0 { 1.0 } else { -1.0 };
        let denom: f64 = a.iter().map(|&x| fact(x)).product();
        acc += sign * pre / denom * c.powi((2 * l + n - m - 2 * k) as i32) * s.powi((m - n + 2 * k) as i32);
    }
    acc
}

/// `ₛY_{ℓm}(θ, φ) = (−1)^s √((2ℓ+1)/4π) e^{imφ} d^ℓ_{m,−s}(θ)`.
pub fn sy(s: i32, l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
    let amp = sign * ((2 * l + 1) as f64 / (4.0 * PI)).sqrt() * d_sum(l as i64, m, -s as i64, theta);
    Complex64::from_polar(amp, m as f64 * phi)
}

/// `D^ℓ_{mn}(α, β, γ) = e^{−imα} d^ℓ_{mn}(β) e^{−inγ}`.
pub fn big_d(l: usize, m: i64, n: i64, a: f64, b: f64, g: f64) -> Complex64 {
    Complex64::from_polar(d_sum(l as i64, m, n, b), -(m as f64) * a - (n as f64) * g)
}
