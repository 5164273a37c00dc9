use spinlet::polarization::*;
use spinlet::sphere::HarmonicCoeffs;
use spinlet::wavelet::{analyze_with, build_family, TransformOptions, WaveletParams};
use spinlet::Complex64;

fn real_field(band_limit: usize, seed: u64) -> HarmonicCoeffs {
    HarmonicCoeffs::random_real(band_limit, seed).unwrap()
}

/// `ð̄η = −sin^{−s}θ (∂_θ − (i/sinθ) ∂_φ)(sin^s θ η)` by central differences.
fn lower_fd(f: &dyn Fn(f64, f64) -> Complex64, spin: i32, theta: f64, phi: f64, h: f64) -> Complex64 {
    let g = |t: f64, p: f64| f(t, p) * t.sin().powi(spin);
    let dt = (g(theta + h, phi) - g(theta - h, phi)) / (2.0 * h);
    let dp = (g(theta, phi + h) - g(theta, phi - h)) / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    -(dt - i * dp / theta.sin()) / theta.sin().powi(spin)
}

const POINTS: [(f64, f64); 4] = [(0.7, 0.3), (1.3, 2.1), (2.2, 4.0), (1.57, 5.5)];

#[test]
fn single_lowering_matches_finite_differences() {
    for spin in [2, 1, 0, -1] {
        let f = HarmonicCoeffs::random_uniform(6, spin, (13 + spin) as u64).unwrap();
        let lowered = spin_lower_harmonic(&f, 1).unwrap();
        let eval = |t: f64, p: f64| f.evaluate(t, p).unwrap();
        for (t, p) in POINTS {
            let want = lower_fd(&eval, spin, t, p, 1e-5);
            let got = lowered.evaluate(t, p).unwrap();
            assert!((got - want).norm() < 1e-6 * (1.0 + want.norm()), "s={spin} {got} vs {want}");
        }
    }
}

#[test]
fn double_lowering_of_spin_two_delta() {
    let mut f = HarmonicCoeffs::zeros(4, 2).unwrap();
    f.set(2, 0, Complex64::new(1.0, 0.0));
    let lowered = spin_lower_harmonic(&f, 2).unwrap();
    assert!((lowered.get(2, 0).re - 24f64.sqrt()).abs() < 1e-14);

    let eval = |t: f64, p: f64| f.evaluate(t, p).unwrap();
    let once = |t: f64, p: f64| lower_fd(&eval, 2, t, p, 1e-5);
    for (t, p) in POINTS {
        let want = lower_fd(&once, 1, t, p, 1e-3);
        let got = lowered.evaluate(t, p).unwrap();
        assert!((got - want).norm() < 1e-5, "{got} vs {want}");
    }
}

fn two_path(band_limit: usize, n: usize, seed: u64) {
    let params = WaveletParams::new(band_limit, 2.0, 0, n, 2).unwrap();
    let family = build_family(&params).unwrap();
    let scalar = scalar_companion(&family).unwrap();
    let eb = EBPair::new(real_field(band_limit, seed), real_field(band_limit, seed + 1), EBVariant::Physical).unwrap();
    let qu = eb_to_qu(&eb).unwrap();
    let opts = TransformOptions::default();
    let (we, wb) = eb_wavelet_connection(&qu, &family, opts).unwrap();
    let weighted = eb.to_weighted();
    for (direct, via) in [(analyze_with(weighted.e(), &scalar, opts).unwrap(), &we), (analyze_with(weighted.b(), &scalar, opts).unwrap(), &wb)] {
        for (a, b) in direct.scales().iter().zip(via.scales()) {
            assert!(a.max_abs_diff(b).unwrap() < 1e-8);
        }
        let d = direct
            .scaling()
            .samples()
            .iter()
            .zip(via.scaling().samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-8);
    }
}

#[test]
fn spin_and_scalar_paths_agree() {
    for n in [1, 3] {
        two_path(16, n, 40 + n as u64);
        two_path(32, n, 50 + n as u64);
    }
}

#[test]
fn pure_modes_stay_pure() {
    let params = WaveletParams::new(32, 2.0, 0, 3, 2).unwrap();
    let family = build_family(&params).unwrap();
    let zero = HarmonicCoeffs::zeros(32, 0).unwrap();
    let field = real_field(32, 77);
    let max = |w: &spinlet::wavelet::WaveletCoefficients| {
        w.scales()
            .iter()
            .flat_map(|m| m.samples().iter())
            .chain(w.scaling().samples())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    };
    let pure_e = eb_to_qu(&EBPair::new(field.clone(), zero.clone(), EBVariant::Physical).unwrap()).unwrap();
    let (we, wb) = eb_wavelet_connection(&pure_e, &family, TransformOptions::default()).unwrap();
    assert!(max(&wb) < 1e-10);
    assert!(max(&we) > 1e-2);
    let pure_b = eb_to_qu(&EBPair::new(zero, field, EBVariant::Physical).unwrap()).unwrap();
    let (we, _) = eb_wavelet_connection(&pure_b, &family, TransformOptions::default()).unwrap();
    assert!(max(&we) < 1e-10);
}

#[test]
fn scalar_family_requires_spin_two() {
    let params = WaveletParams::new(8, 2.0, 0, 1, 0).unwrap();
    let family = build_family(&params).unwrap();
    assert!(scalar_companion(&family).is_err());
}
