//! Wigner d-functions `d^ℓ_{mn}(β)` by three-term recursion in ℓ.
//!
//! For fixed `(m, n)` the sequence `ℓ ↦ d^ℓ_{mn}(β)` obeys
//!
//! ```text
//! d^{ℓ+1} = a_ℓ (cos β − b_ℓ) d^ℓ − c_ℓ d^{ℓ−1}
//! a_ℓ = (ℓ+1)(2ℓ+1) / √(((ℓ+1)²−m²)((ℓ+1)²−n²))
//! b_ℓ = mn / (ℓ(ℓ+1))
//! c_ℓ = (ℓ+1) √((ℓ²−m²)(ℓ²−n²)) / (ℓ √(((ℓ+1)²−m²)((ℓ+1)²−n²)))
//! ```
//!
//! seeded at `ℓ₀ = max(|m|, |n|)` from the closed form, which is a single
//! product of half-angle powers. Seeds are formed as products carried with a
//! separate binary exponent, so rows whose leading values underflow `f64`
//! still recover once the recursion grows them back into range, and the
//! seed's relative error stays at a few ulps for any ℓ₀.
//!
//! The convention is the one in which
//! `D^ℓ_{mn}(α, β, γ) = e^{−imα} d^ℓ_{mn}(β) e^{−inγ}` represents the zyz
//! rotation `R_z(α) R_y(β) R_z(γ)`, so for instance `d¹₁₀(β) = −sin β / √2`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Precomputed `ln k!` for `0 ≤ k ≤ n`.
#[derive(Debug, Clone)]
pub(crate) struct LnFactorial(Vec<f64>);

impl LnFactorial {
    pub(crate) fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        table.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            table.push(acc);
        }
        LnFactorial(table)
    }

    #[inline]
    pub(crate) fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
}

/// `x · 2^e` with `x` in `[0.5, 1)` or zero, for products far outside the
/// `f64` exponent range.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Scaled {
    mant: f64,
    exp: i32,
}

impl Scaled {
    fn new(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Scaled { mant: x, exp: 0 };
        }
        let mut x = x;
        let mut exp = 0;
        // Lift subnormals into the normal range first.
        if x.abs() < f64::MIN_POSITIVE {
            x *= 2f64.powi(64);
            exp -= 64;
        }
        let bits = x.to_bits();
        let raw = ((bits >> 52) & 0x7ff) as i32;
        let mant = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
        Scaled { mant, exp: exp + raw - 1022 }
    }

    fn mul(self, other: Scaled) -> Scaled {
        let p = Scaled::new(self.mant * other.mant);
        Scaled {
            mant: p.mant,
            exp: p.exp + self.exp + other.exp,
        }
    }

    fn powi(self, mut k: u64) -> Scaled {
        let mut acc = Scaled { mant: 0.5, exp: 1 };
        let mut base = self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    fn sqrt(self) -> Scaled {
        let (mant, exp) = if self.exp % 2 == 0 {
            (self.mant, self.exp)
        } else {
            (self.mant * 2.0, self.exp - 1)
        };
        let r = Scaled::new(mant.sqrt());
        Scaled {
            mant: r.mant,
            exp: r.exp + exp / 2,
        }
    }
}

/// `cos β` together with the half-angle cosine and sine.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HalfAngle {
    pub(crate) cos_beta: f64,
    cos_half: Scaled,
    sin_half: Scaled,
    pole: Pole,
}

/// `β = 0` and `β = π` exactly, where d is a signed permutation.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Pole {
    None,
    North,
    South,
}

impl HalfAngle {
    pub(crate) fn new(beta: f64) -> Self {
        let half = 0.5 * beta;
        let pole = if beta == 0.0 {
            Pole::North
        } else if beta == PI {
            Pole::South
        } else {
            Pole::None
        };
        HalfAngle {
            cos_beta: beta.cos(),
            cos_half: Scaled::new(half.cos().max(0.0)),
            sin_half: Scaled::new(half.sin().max(0.0)),
            pole,
        }
    }
}

/// Recursion coefficients for one `(m, n)` pair, indexed from `ℓ₀`.
#[derive(Debug, Clone)]
pub(crate) struct RecursionCoeffs {
    m: i64,
    n: i64,
    pub(crate) l0: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    /// `±√C(2ℓ₀, ℓ₀ − |k|)` and the half-angle powers of the seed.
    seed_norm: Scaled,
    cos_power: u64,
    sin_power: u64,
}

/// Shared tables for evaluating d-functions up to `l_max`.
#[derive(Debug, Clone)]
pub(crate) struct DRecursion {
    l_max: usize,
}

const RESCALE_BITS: i32 = 200;

impl DRecursion {
    pub(crate) fn new(l_max: usize) -> Self {
        DRecursion { l_max }
    }

    /// Fills `rc` with the β-independent coefficients for `(m, n)`.
    pub(crate) fn coeffs_into(&self, m: i64, n: i64, rc: &mut RecursionCoeffs) {
        let l0 = m.unsigned_abs().max(n.unsigned_abs()) as usize;
        rc.m = m;
        rc.n = n;
        rc.l0 = l0;
        rc.a.clear();
        rc.b.clear();
        rc.c.clear();
        seed_factors(m, n, rc);
        let (mf, nf) = (m as f64, n as f64);
        let (m2, n2) = (mf * mf, nf * nf);
        for l in l0..self.l_max {
            let lf = l as f64;
            let lp = lf + 1.0;
            let inv_next = 1.0 / ((lp * lp - m2) * (lp * lp - n2)).sqrt();
            rc.a.push(lp * (2.0 * lf + 1.0) * inv_next);
            if l == 0 {
                rc.b.push(0.0);
                rc.c.push(0.0);
            } else {
                rc.b.push(mf * nf / (lf * lp));
                let cur = ((lf * lf - m2) * (lf * lf - n2)).max(0.0).sqrt();
                rc.c.push(lp * cur * inv_next / lf);
            }
        }
    }

    pub(crate) fn coeffs(&self, m: i64, n: i64) -> RecursionCoeffs {
        let mut rc = RecursionCoeffs::default();
        self.coeffs_into(m, n, &mut rc);
        rc
    }

    /// Writes `d^ℓ_{mn}(β)` into `out[ℓ]` for `ℓ₀ ≤ ℓ ≤ l_max`. Entries below
    /// `ℓ₀` are left untouched.
    pub(crate) fn fill(&self, rc: &RecursionCoeffs, half: &HalfAngle, out: &mut [f64]) {
        self.fill_to(rc, half, out, self.l_max);
    }

    /// As [`DRecursion::fill`] but stops at `l_hi ≤ l_max`.
    pub(crate) fn fill_to(&self, rc: &RecursionCoeffs, half: &HalfAngle, out: &mut [f64], l_hi: usize) {
        let l0 = rc.l0;
        if l0 > l_hi {
            return;
        }
        match half.pole {
            Pole::North => {
                let v = if rc.m == rc.n { 1.0 } else { 0.0 };
                out[l0..=l_hi].iter_mut().for_each(|o| *o = v);
                return;
            }
            Pole::South => {
                for (l, o) in out.iter_mut().enumerate().take(l_hi + 1).skip(l0) {
                    *o = if rc.m != -rc.n {
                        0.0
                    } else if (l as i64 - rc.n).rem_euclid(2) == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                }
                return;
            }
            Pole::None => {}
        }
        let seed = rc
            .seed_norm
            .mul(half.cos_half.powi(rc.cos_power))
            .mul(half.sin_half.powi(rc.sin_power));
        if seed.mant == 0.0 || !seed.mant.is_finite() {
            out[l0..=l_hi].iter_mut().for_each(|v| *v = 0.0);
            return;
        }

        let mut scale_exp: i32 = 0;
        let mut cur = if seed.exp >= -1000 {
            seed.mant * 2f64.powi(seed.exp)
        } else {
            scale_exp = seed.exp;
            seed.mant
        };
        let mut prev = 0.0;
        out[l0] = ldexp(cur, scale_exp);

        let x = half.cos_beta;
        let up = 2f64.powi(RESCALE_BITS);
        let down = 2f64.powi(-RESCALE_BITS);
        for (i, l) in (l0..l_hi).enumerate() {
            let next = rc.a[i] * (x - rc.b[i]) * cur - rc.c[i] * prev;
            prev = cur;
            cur = next;
            if scale_exp < 0 {
                if cur.abs() > up {
                    cur *= down;
                    prev *= down;
                    scale_exp += RESCALE_BITS;
                    if scale_exp > 0 {
                        let fix = 2f64.powi(scale_exp);
                        cur *= fix;
                        prev *= fix;
                        scale_exp = 0;
                    }
                }
                out[l + 1] = ldexp(cur, scale_exp);
            } else {
                out[l + 1] = cur;
            }
        }
    }
}

impl Default for RecursionCoeffs {
    fn default() -> Self {
        RecursionCoeffs {
            m: 0,
            n: 0,
            l0: 0,
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
            seed_norm: Scaled { mant: 0.5, exp: 1 },
            cos_power: 0,
            sin_power: 0,
        }
    }
}

/// The seed `d^{ℓ₀}_{mn}(β) = ±√C(2ℓ₀, ℓ₀ + k) cos^p(β/2) sin^q(β/2)`.
fn seed_factors(m: i64, n: i64, rc: &mut RecursionCoeffs) {
    let j = m.abs().max(n.abs());
    // (sign exponent, other index, cos power, sin power)
    let (sign_exp, k, pc, ps) = if m == j {
        (j - n, n, j + n, j - n)
    } else if m == -j {
        (0, n, j - n, j + n)
    } else if n == j {
        (0, m, j + m, j - m)
    } else {
        (j + m, m, j - m, j + m)
    };
    let mut binom = Scaled { mant: 0.5, exp: 1 };
    for i in 0..(j - k.abs()) {
        binom = binom.mul(Scaled::new((2 * j - i) as f64 / (i + 1) as f64));
    }
    let mut norm = binom.sqrt();
    if sign_exp.rem_euclid(2) == 1 {
        norm.mant = -norm.mant;
    }
    rc.seed_norm = norm;
    rc.cos_power = pc as u64;
    rc.sin_power = ps as u64;
}

/// `x · 2^e` for `e ≤ 0`, flushing to zero far below the subnormal range.
#[inline]
fn ldexp(x: f64, e: i32) -> f64 {
    if e == 0 {
        x
    } else if e >= -1000 {
        x * 2f64.powi(e)
    } else if e >= -2000 {
        x * 2f64.powi(-1000) * 2f64.powi(e + 1000)
    } else {
        0.0
    }
}

/// Values `d^ℓ_{mn}(β)` for all `0 ≤ ℓ ≤ ℓ_max`, `|m| ≤ ℓ`, at one fixed `n`.
///
/// Entries with `ℓ < |n|` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerDTable {
    l_max: usize,
    beta: f64,
    n: i32,
    values: Vec<f64>,
}

impl WignerDTable {
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    /// `d^ℓ_{mn}(β)`; panics if `ℓ > ℓ_max` or `|m| > ℓ`.
    pub fn get(&self, l: usize, m: i32) -> f64 {
        assert!(l <= self.l_max && m.unsigned_abs() as usize <= l);
        self.values[((l * l + l) as i64 + m as i64) as usize]
    }

    /// Raw storage in `ℓ² + ℓ + m` order.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Computes `d^ℓ_{mn}(β)` for every `ℓ ≤ l_max` and `|m| ≤ ℓ` at fixed `n`.
pub fn wigner_d_slice(l_max: usize, beta: f64, n: i32) -> Result<WignerDTable> {
    check_beta(beta)?;
    if n.unsigned_abs() as usize > l_max {
        return Err(Error::Domain(format!("|n| = {} exceeds l_max = {l_max}", n.abs())));
    }
    let rec = DRecursion::new(l_max);
    let half = HalfAngle::new(beta);
    let size = (l_max + 1) * (l_max + 1);
    let mut values = vec![0.0; size];
    let mut column = vec![0.0; l_max + 1];
    let mut rc = RecursionCoeffs::default();
    let lm = l_max as i64;
    for m in -lm..=lm {
        rec.coeffs_into(m, n as i64, &mut rc);
        rec.fill(&rc, &half, &mut column);
        for l in rc.l0..=l_max {
            let idx = (l * l + l) as i64 + m;
            values[idx as usize] = column[l];
        }
    }
    Ok(WignerDTable {
        l_max,
        beta,
        n,
        values,
    })
}

/// Single value `d^ℓ_{mn}(β)`; zero when `max(|m|, |n|) > ℓ`.
pub fn wigner_d(l: usize, m: i32, n: i32, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let l0 = m.unsigned_abs().max(n.unsigned_abs()) as usize;
    if l0 > l {
        return Ok(0.0);
    }
    let rec = DRecursion::new(l);
    let rc = rec.coeffs(m as i64, n as i64);
    let mut column = vec![0.0; l + 1];
    rec.fill(&rc, &HalfAngle::new(beta), &mut column);
    Ok(column[l])
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&beta) {
        return Err(Error::Domain(format!("beta = {beta} outside [0, pi]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    fn factorial(n: i64) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, k| acc * k)
    }

    /// `d^ℓ_{m'm}(β)` from the explicit factorial sum, exact over the
    /// rationals for half-angles with rational `cos²(β/2)` and `sin²(β/2)`.
    ///
    /// Every term carries `c^{pc} s^{ps}` with `pc + ps = 2ℓ` and `pc ≡ m − m'`
    /// (mod 2), so `d = √F · (cs)^{odd} · R` with `R` rational; returns
    /// `d` rounded to `f64` from the exact value of `d²` and the sign of `R`.
    fn oracle(l: i64, mp: i64, m: i64, c2: &BigRational, s2: &BigRational) -> f64 {
        let odd = (m - mp).rem_euclid(2) == 1;
        let f = factorial(l + m) * factorial(l - m) * factorial(l + mp) * factorial(l - mp);
        let mut r = BigRational::zero();
        let k_lo = 0.max(m - mp);
        let k_hi = (l + m).min(l - mp);
        for k in k_lo..=k_hi {
            let den = factorial(l + m - k) * factorial(k) * factorial(l - k - mp) * factorial(k - m + mp);
            let pc = 2 * l - 2 * k + m - mp;
            let ps = 2 * k - m + mp;
            let (hc, hs) = if odd { ((pc - 1) / 2, (ps - 1) / 2) } else { (pc / 2, ps / 2) };
            let mut term = BigRational::new(BigInt::one(), den);
            term *= num_traits::pow(c2.clone(), hc as usize);
            term *= num_traits::pow(s2.clone(), hs as usize);
            if (k - m + mp).rem_euclid(2) == 1 {
                term = -term;
            }
            r += term;
        }
        let mut square = BigRational::from_integer(f) * &r * &r;
        if odd {
            square = square * c2 * s2;
        }
        let magnitude = square.to_f64().unwrap().sqrt();
        if r.is_negative() {
            -magnitude
        } else {
            magnitude
        }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn check_against_oracle(l_max: usize, n: i32, beta: f64, c2: &BigRational, s2: &BigRational, only_top: bool) {
        let table = wigner_d_slice(l_max, beta, n).unwrap();
        let lo = if only_top { l_max } else { n.unsigned_abs() as usize };
        for l in lo..=l_max {
            for m in -(l as i32)..=(l as i32) {
                let want = oracle(l as i64, m as i64, n as i64, c2, s2);
                let got = table.get(l, m);
                // Each row has unit norm, so this is the error relative to
                // the row scale; pointwise relative error is undefined at
                // the exact zeros of d and is checked only on large entries.
                let err = (got - want).abs();
                assert!(err <= 1e-12, "l={l} m={m} n={n} beta={beta}: got {got:e}, want {want:e}");
                if want.abs() >= 1e-2 {
                    assert!(err <= 1e-12 * want.abs(), "l={l} m={m} n={n}: relative {}", err / want.abs());
                }
            }
        }
    }

    #[test]
    fn identity_at_beta_zero() {
        for n in -4..=4 {
            let t = wigner_d_slice(4, 0.0, n).unwrap();
            for l in n.unsigned_abs() as usize..=4 {
                for m in -(l as i32)..=(l as i32) {
                    let want = if m == n { 1.0 } else { 0.0 };
                    assert_eq!(t.get(l, m), want);
                }
            }
        }
    }

    #[test]
    fn closed_forms_at_l1() {
        for beta in [0.0, 0.3, 1.1, 2.0, PI] {
            let t = wigner_d_slice(1, beta, 0).unwrap();
            assert!((t.get(1, 0) - beta.cos()).abs() < 1e-15);
            assert!((t.get(1, 1) + beta.sin() / 2f64.sqrt()).abs() < 1e-15);
            assert!((t.get(1, -1) - beta.sin() / 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_oracle_low_degree() {
        let cases = [
            (PI / 3.0, rat(3, 4), rat(1, 4)),
            (PI / 2.0, rat(1, 2), rat(1, 2)),
            (2.0 * PI / 3.0, rat(1, 4), rat(3, 4)),
        ];
        for (beta, c2, s2) in &cases {
            for n in -8..=8 {
                check_against_oracle(8, n, *beta, c2, s2, false);
            }
        }
    }

    #[test]
    fn exact_oracle_up_to_degree_64() {
        let (c2, s2) = (rat(3, 4), rat(1, 4));
        for l in [24usize, 40, 64] {
            for n in [0, 1, 2, -5, 17, l as i32] {
                check_against_oracle(l, n, PI / 3.0, &c2, &s2, true);
            }
        }
    }

    #[test]
    fn rows_are_orthonormal() {
        let l_max = 60;
        for beta in [0.2, 1.3, 2.9] {
            let tables: Vec<_> = (-3..=3).map(|n| wigner_d_slice(l_max, beta, n).unwrap()).collect();
            for l in [3usize, 17, 60] {
                for (i, a) in tables.iter().enumerate() {
                    for (j, b) in tables.iter().enumerate() {
                        let dot: f64 = (-(l as i32)..=(l as i32)).map(|m| a.get(l, m) * b.get(l, m)).sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((dot - want).abs() < 1e-12, "l={l} beta={beta}");
                    }
                }
            }
        }
    }

    #[test]
    fn stable_at_high_degree() {
        let l_max = 2048;
        let t = wigner_d_slice(l_max, 1.0, 2).unwrap();
        assert!(t.as_slice().iter().all(|v| v.is_finite() && v.abs() <= 1.0 + 1e-12));
        let sum: f64 = (-(l_max as i32)..=(l_max as i32)).map(|m| t.get(l_max, m).powi(2)).sum();
        assert!((sum - 1.0).abs() < 1e-10, "sum={sum}");
    }

    #[test]
    fn south_pole_is_signed_flip() {
        for n in -3..=3 {
            let t = wigner_d_slice(5, PI, n).unwrap();
            for l in n.unsigned_abs() as usize..=5 {
                for m in -(l as i32)..=(l as i32) {
                    let want = if m != -n {
                        0.0
                    } else if (l as i32 - n) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    assert_eq!(t.get(l, m), want);
                }
            }
        }
        let near = wigner_d_slice(5, PI - 1e-9, 1).unwrap();
        assert!((near.get(3, -1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_pole_values_are_finite() {
        let t = wigner_d_slice(300, 1e-3, 0).unwrap();
        assert!(t.as_slice().iter().all(|v| v.is_finite()));
        assert!((t.get(300, 0) - 1.0).abs() < 0.1);
        assert!(t.get(300, 300).abs() < 1e-300 || t.get(300, 300) == 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(wigner_d_slice(4, -0.1, 0).is_err());
        assert!(wigner_d_slice(4, 3.2, 0).is_err());
        assert!(wigner_d_slice(4, 1.0, 5).is_err());
    }

    #[test]
    fn single_value_agrees_with_slice() {
        let t = wigner_d_slice(12, 0.9, -3).unwrap();
        for m in -12..=12 {
            assert_eq!(wigner_d(12, m, -3, 0.9).unwrap(), t.get(12, m));
        }
        assert_eq!(wigner_d(2, 3, 0, 0.4).unwrap(), 0.0);
    }
}
