//! Wavelet analysis and synthesis through harmonic space.
//!
//! Analysis forms `W^ℓ_{mn} = 8π²/(2ℓ+1) ₛf_{ℓm} ψ*_{ℓn}` and applies an
//! inverse Wigner transform per scale; synthesis applies the forward Wigner
//! transform and sums `W^ℓ_{mn} ψ_{ℓn}` over scales and orientations.

use super::family::WaveletFamily;
use crate::error::{dimension, parameter, Result};
use crate::so3::{
    forward_wigner_batch_ranges, inverse_wigner_batch, RotationGrid, RotationMap, WignerCoeffs,
    SO3_VOLUME,
};
use crate::sphere::{
    forward_sht, forward_sht_real, inverse_sht, inverse_sht_real, HarmonicCoeffs, SphereGrid,
    SphereMap,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// How a transform is executed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransformOptions {
    /// Carry scale `j` at `L_j = min(⌈α^{j+1}⌉, L)` instead of `L`.
    pub multires: bool,
    /// Assume a real spin-0 signal and use the conjugate-symmetric transforms.
    pub real: bool,
}

/// Wavelet coefficients `W^{ψ(j)}` on SO(3) for each scale and the spin-0
/// scaling coefficients `W^Φ` on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoefficients {
    spin: i32,
    azimuthal: usize,
    j_min: usize,
    scales: Vec<RotationMap>,
    scaling: SphereMap,
}

impl WaveletCoefficients {
    /// Assembles coefficients; `scales[k]` belongs to scale `j_min + k` and
    /// `azimuthal` is the family's `N`.
    pub fn new(
        spin: i32,
        azimuthal: usize,
        j_min: usize,
        scales: Vec<RotationMap>,
        scaling: SphereMap,
    ) -> Result<Self> {
        if scaling.spin() != 0 {
            return parameter("scaling coefficients must have spin 0");
        }
        if scales.is_empty() {
            return parameter("at least one wavelet scale is required");
        }
        if scales.iter().any(|m| m.grid().azimuthal_band_limit() > azimuthal) {
            return parameter("a scale exceeds the azimuthal band-limit");
        }
        Ok(WaveletCoefficients {
            spin,
            azimuthal,
            j_min,
            scales,
            scaling,
        })
    }

    /// Spin of the analysed signal.
    pub fn spin(&self) -> i32 {
        self.spin
    }

    /// Azimuthal band-limit `N` of the analysing family.
    pub fn azimuthal_band_limit(&self) -> usize {
        self.azimuthal
    }

    pub fn j_min(&self) -> usize {
        self.j_min
    }

    pub fn j_max(&self) -> usize {
        self.j_min + self.scales.len() - 1
    }

    pub fn scale(&self, j: usize) -> Result<&RotationMap> {
        self.check(j)?;
        Ok(&self.scales[j - self.j_min])
    }

    pub fn scale_mut(&mut self, j: usize) -> Result<&mut RotationMap> {
        self.check(j)?;
        Ok(&mut self.scales[j - self.j_min])
    }

    pub fn scales(&self) -> &[RotationMap] {
        &self.scales
    }

    pub fn scaling(&self) -> &SphereMap {
        &self.scaling
    }

    pub fn scaling_mut(&mut self) -> &mut SphereMap {
        &mut self.scaling
    }

    fn check(&self, j: usize) -> Result<()> {
        if j < self.j_min || j > self.j_max() {
            return Err(crate::Error::Scale {
                j: j as i64,
                j0: self.j_min,
                j_max: self.j_max(),
            });
        }
        Ok(())
    }

    /// `Σ_j ∫ |W^{ψ(j)}|² dρ + ∫ |W^Φ|² dΩ` by quadrature.
    pub fn energy(&self) -> f64 {
        self.scales.iter().map(|m| m.energy()).sum::<f64>() + self.scaling.energy()
    }

    /// Total number of stored samples.
    pub fn sample_count(&self) -> usize {
        self.scales.iter().map(|m| m.samples().len()).sum::<usize>() + self.scaling.samples().len()
    }
}

fn check_signal(f: &HarmonicCoeffs, family: &WaveletFamily, options: TransformOptions) -> Result<()> {
    let p = family.params();
    if f.band_limit() != p.band_limit() || f.spin() != p.spin() {
        return dimension(format!(
            "signal has (L, s) = ({}, {}), family has ({}, {})",
            f.band_limit(),
            f.spin(),
            p.band_limit(),
            p.spin()
        ));
    }
    if options.real && f.spin() != 0 {
        return parameter("the real-signal path needs spin 0");
    }
    Ok(())
}

/// `(L_j, N_j)` used for scale `j`.
fn scale_shape(family: &WaveletFamily, j: usize, multires: bool) -> (usize, usize) {
    let p = family.params();
    if multires {
        (p.scale_band_limit(j), p.scale_azimuthal_band_limit(j))
    } else {
        (p.band_limit(), p.azimuthal_band_limit())
    }
}

fn scaling_band_limit(family: &WaveletFamily, multires: bool) -> usize {
    if multires {
        family.params().scaling_band_limit()
    } else {
        family.params().band_limit()
    }
}

/// Wigner coefficients `W^ℓ_{mn} = 8π²/(2ℓ+1) ₛf_{ℓm} ψ^{(j)*}_{ℓn}` of scale `j`.
pub fn wavelet_harmonics(
    f: &HarmonicCoeffs,
    family: &WaveletFamily,
    j: usize,
    multires: bool,
) -> Result<WignerCoeffs> {
    check_signal(f, family, TransformOptions::default())?;
    family.params().check_scale(j)?;
    let (lj, nj) = scale_shape(family, j, multires);
    let mut w = WignerCoeffs::zeros(lj, nj)?;
    let Some((lo, hi)) = family.wavelet_support(j)? else {
        return Ok(w);
    };
    let nm = nj as i64 - 1;
    for l in lo.max(f.min_l())..=hi.min(lj - 1) {
        let li = l as i64;
        let norm = SO3_VOLUME / (2 * l + 1) as f64;
        for n in -nm.min(li)..=nm.min(li) {
            let psi = family.psi(j, l, n).conj() * norm;
            if psi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for m in -li..=li {
                w.set(l, m, n, f.get(l, m) * psi);
            }
        }
    }
    Ok(w)
}

/// Harmonic coefficients `√(4π/(2ℓ+1)) ₛf_{ℓm} Φ_{ℓ0}` of the spin-0 scaling
/// coefficients.
pub fn scaling_harmonics(f: &HarmonicCoeffs, family: &WaveletFamily, multires: bool) -> Result<HarmonicCoeffs> {
    check_signal(f, family, TransformOptions::default())?;
    let band_limit = scaling_band_limit(family, multires);
    let phi = family.scaling();
    HarmonicCoeffs::from_fn(band_limit, 0, |l, m| {
        f.get(l, m) * ((4.0 * PI / (2 * l + 1) as f64).sqrt() * phi[l])
    })
}

/// Full-resolution analysis.
pub fn analyze(f: &HarmonicCoeffs, family: &WaveletFamily) -> Result<WaveletCoefficients> {
    analyze_with(f, family, TransformOptions::default())
}

/// Multiresolution analysis: scale `j` is carried at band-limit `L_j`.
pub fn analyze_multires(f: &HarmonicCoeffs, family: &WaveletFamily) -> Result<WaveletCoefficients> {
    analyze_with(
        f,
        family,
        TransformOptions {
            multires: true,
            real: false,
        },
    )
}

pub fn analyze_with(
    f: &HarmonicCoeffs,
    family: &WaveletFamily,
    options: TransformOptions,
) -> Result<WaveletCoefficients> {
    check_signal(f, family, options)?;
    let p = family.params();
    let harmonics: Vec<WignerCoeffs> = p
        .scales()
        .map(|j| wavelet_harmonics(f, family, j, options.multires))
        .collect::<Result<_>>()?;

    // Scales sharing a grid are transformed together.
    let mut maps: Vec<Option<RotationMap>> = vec![None; harmonics.len()];
    for group in group_by_shape(harmonics.iter().map(|w| (w.band_limit(), w.azimuthal_band_limit()))) {
        let (l, n) = (harmonics[group[0]].band_limit(), harmonics[group[0]].azimuthal_band_limit());
        let grid = RotationGrid::new(l, n)?;
        let refs: Vec<&WignerCoeffs> = group.iter().map(|&k| &harmonics[k]).collect();
        for (k, map) in group.iter().zip(inverse_wigner_batch(&refs, &grid, options.real)?) {
            maps[*k] = Some(map);
        }
    }

    let scaling = analyze_scaling_with(f, family, options)?;
    WaveletCoefficients::new(
        f.spin(),
        p.azimuthal_band_limit(),
        p.j_min(),
        maps.into_iter().map(|m| m.expect("every scale mapped")).collect(),
        scaling,
    )
}

/// Wavelet coefficients of a single scale.
pub fn analyze_scale(
    f: &HarmonicCoeffs,
    family: &WaveletFamily,
    j: usize,
    options: TransformOptions,
) -> Result<RotationMap> {
    check_signal(f, family, options)?;
    let w = wavelet_harmonics(f, family, j, options.multires)?;
    let grid = RotationGrid::new(w.band_limit(), w.azimuthal_band_limit())?;
    Ok(inverse_wigner_batch(&[&w], &grid, options.real)?.pop().expect("one map"))
}

/// Scaling coefficients alone.
pub fn analyze_scaling_with(
    f: &HarmonicCoeffs,
    family: &WaveletFamily,
    options: TransformOptions,
) -> Result<SphereMap> {
    check_signal(f, family, options)?;
    let h = scaling_harmonics(f, family, options.multires)?;
    let grid = SphereGrid::new(h.band_limit())?;
    if options.real {
        inverse_sht_real(&h, &grid)
    } else {
        inverse_sht(&h, &grid)
    }
}

fn group_by_shape(shapes: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, shape) in shapes.enumerate() {
        match keys.iter().position(|s| *s == shape) {
            Some(i) => groups[i].push(k),
            None => {
                keys.push(shape);
                groups.push(vec![k]);
            }
        }
    }
    groups
}

/// Reconstructs `ₛf_{ℓm}` from coefficients produced by any analysis variant.
pub fn synthesize(w: &WaveletCoefficients, family: &WaveletFamily) -> Result<HarmonicCoeffs> {
    synthesize_with(w, family, TransformOptions::default())
}

/// Synthesis; `options.multires` is ignored because each scale's resolution
/// is read from its grid.
pub fn synthesize_with(
    w: &WaveletCoefficients,
    family: &WaveletFamily,
    options: TransformOptions,
) -> Result<HarmonicCoeffs> {
    let p = family.params();
    if w.spin() != p.spin()
        || w.j_min() != p.j_min()
        || w.j_max() != p.j_max()
        || w.azimuthal_band_limit() != p.azimuthal_band_limit()
    {
        return dimension(format!(
            "coefficients (s, J0, J) = ({}, {}, {}) do not match family ({}, {}, {})",
            w.spin(),
            w.j_min(),
            w.j_max(),
            p.spin(),
            p.j_min(),
            p.j_max()
        ));
    }
    if options.real && p.spin() != 0 {
        return parameter("the real-signal path needs spin 0");
    }
    let mut out = HarmonicCoeffs::zeros(p.band_limit(), p.spin())?;
    let mut ranges = Vec::with_capacity(w.scales().len());
    for (k, map) in w.scales().iter().enumerate() {
        let j = p.j_min() + k;
        let g = map.grid();
        let (l_full, n_full) = (p.band_limit(), p.azimuthal_band_limit());
        let (l_multi, n_multi) = (p.scale_band_limit(j), p.scale_azimuthal_band_limit(j));
        let ok = (g.band_limit(), g.azimuthal_band_limit()) == (l_full, n_full)
            || (g.band_limit(), g.azimuthal_band_limit()) == (l_multi, n_multi);
        if !ok {
            return dimension(format!(
                "scale {j} grid (L, N) = ({}, {}) fits neither ({l_full}, {n_full}) nor ({l_multi}, {n_multi})",
                g.band_limit(),
                g.azimuthal_band_limit()
            ));
        }
        let range = family
            .wavelet_support(j)?
            .map(|(lo, hi)| (lo, hi.min(g.band_limit() - 1)))
            .unwrap_or((1, 0));
        ranges.push(range);
    }

    for group in group_by_shape(
        w.scales()
            .iter()
            .map(|m| (m.grid().band_limit(), m.grid().azimuthal_band_limit())),
    ) {
        let maps: Vec<&RotationMap> = group.iter().map(|&k| &w.scales()[k]).collect();
        let group_ranges: Vec<(usize, usize)> = group.iter().map(|&k| ranges[k]).collect();
        let coeffs = forward_wigner_batch_ranges(&maps, options.real, &group_ranges)?;
        for (&k, c) in group.iter().zip(&coeffs) {
            accumulate_scale(&mut out, c, family, p.j_min() + k);
        }
    }

    let scaling = if options.real {
        forward_sht_real(w.scaling())?
    } else {
        forward_sht(w.scaling())?
    };
    let phi = family.scaling();
    let values = out.values_mut();
    for l in p.spin().unsigned_abs() as usize..scaling.band_limit().min(p.band_limit()) {
        let factor = (4.0 * PI / (2 * l + 1) as f64).sqrt() * phi[l];
        let li = l as i64;
        for m in -li..=li {
            values[crate::sphere::lm_index(l, m)] += scaling.get(l, m) * factor;
        }
    }
    Ok(out)
}

/// `f_{ℓm} += Σ_n W^ℓ_{mn} ψ^{(j)}_{ℓn}`.
fn accumulate_scale(out: &mut HarmonicCoeffs, w: &WignerCoeffs, family: &WaveletFamily, j: usize) {
    let min_l = out.min_l();
    let nm = w.azimuthal_band_limit() as i64 - 1;
    let values = out.values_mut();
    for l in min_l..w.band_limit() {
        let li = l as i64;
        for n in -nm.min(li)..=nm.min(li) {
            let psi = family.psi(j, l, n);
            if psi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for m in -li..=li {
                values[crate::sphere::lm_index(l, m)] += w.get(l, m, n) * psi;
            }
        }
    }
}

/// Contribution of a single scale's coefficients to the reconstruction.
pub fn synthesize_scale(map: &RotationMap, family: &WaveletFamily, j: usize) -> Result<HarmonicCoeffs> {
    let p = family.params();
    p.check_scale(j)?;
    let mut out = HarmonicCoeffs::zeros(p.band_limit(), p.spin())?;
    let Some((lo, hi)) = family.wavelet_support(j)? else {
        return Ok(out);
    };
    let range = (lo, hi.min(map.grid().band_limit() - 1));
    let c = forward_wigner_batch_ranges(&[map], false, &[range])?;
    accumulate_scale(&mut out, &c[0], family, j);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::{build_family, WaveletParams};

    fn family(l: usize, n: usize, s: i32) -> WaveletFamily {
        build_family(&WaveletParams::new(l, 2.0, 0, n, s).unwrap()).unwrap()
    }

    #[test]
    fn zero_signal_gives_zero_coefficients() {
        let fam = family(16, 3, 1);
        let f = HarmonicCoeffs::zeros(16, 1).unwrap();
        let w = analyze(&f, &fam).unwrap();
        assert_eq!(w.energy(), 0.0);
        assert!(w.scales().iter().all(|m| m.samples().iter().all(|v| v.norm() == 0.0)));
    }

    #[test]
    fn round_trip_and_energy_spin2() {
        let fam = family(32, 5, 2);
        let f = HarmonicCoeffs::random_uniform(32, 2, 1).unwrap();
        let w = analyze(&f, &fam).unwrap();
        let back = synthesize(&w, &fam).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        let rel = (w.energy() - f.energy()).abs() / f.energy();
        assert!(rel < 1e-12, "rel={rel}");
    }

    #[test]
    fn multires_round_trip() {
        let fam = family(32, 3, -1);
        let f = HarmonicCoeffs::random_uniform(32, -1, 2).unwrap();
        let w = analyze_multires(&f, &fam).unwrap();
        assert_eq!(w.scale(fam.params().j_max()).unwrap().grid().band_limit(), 32);
        assert!(w.scale(2).unwrap().grid().band_limit() < 32);
        let back = synthesize(&w, &fam).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        let rel = (w.energy() - f.energy()).abs() / f.energy();
        assert!(rel < 1e-12);
    }

    #[test]
    fn real_path_matches_general_path() {
        let fam = family(24, 4, 0);
        let raw = HarmonicCoeffs::random_uniform(24, 0, 3).unwrap();
        let grid = SphereGrid::new(24).unwrap();
        let mut map = inverse_sht(&raw, &grid).unwrap();
        map.samples_mut().iter_mut().for_each(|v| v.im = 0.0);
        let f = forward_sht(&map).unwrap();
        let opts = TransformOptions {
            multires: false,
            real: true,
        };
        let general = analyze(&f, &fam).unwrap();
        let fast = analyze_with(&f, &fam, opts).unwrap();
        for (a, b) in general.scales().iter().zip(fast.scales()) {
            assert!(a.max_abs_diff(b).unwrap() < 1e-12);
        }
        let back = synthesize_with(&fast, &fam, opts).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        assert!(analyze_with(&HarmonicCoeffs::zeros(24, 1).unwrap(), &family(24, 4, 1), opts).is_err());
    }

    #[test]
    fn mismatched_signal_rejected() {
        let fam = family(16, 2, 0);
        assert!(analyze(&HarmonicCoeffs::zeros(17, 0).unwrap(), &fam).is_err());
        assert!(analyze(&HarmonicCoeffs::zeros(16, 1).unwrap(), &fam).is_err());
    }

    #[test]
    fn single_scale_paths_agree_with_batch() {
        let fam = family(20, 3, 1);
        let f = HarmonicCoeffs::random_uniform(20, 1, 9).unwrap();
        let w = analyze(&f, &fam).unwrap();
        let mut total = HarmonicCoeffs::zeros(20, 1).unwrap();
        for j in fam.params().scales() {
            let single = analyze_scale(&f, &fam, j, TransformOptions::default()).unwrap();
            assert!(single.max_abs_diff(w.scale(j).unwrap()).unwrap() < 1e-14);
            total = &total + &synthesize_scale(&single, &fam, j).unwrap();
        }
        let scaling_only = synthesize(
            &WaveletCoefficients::new(
                1,
                3,
                0,
                w.scales().iter().map(|m| RotationMap::zeros(m.grid().clone())).collect(),
                w.scaling().clone(),
            )
            .unwrap(),
            &fam,
        )
        .unwrap();
        total = &total + &scaling_only;
        assert!(total.max_abs_diff(&f).unwrap() < 1e-12);
    }
}
