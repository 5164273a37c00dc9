use super::directionality::Directionality;
use super::kernel::KernelTable;
use super::params::WaveletParams;
use crate::error::Result;
use crate::so3::SO3_VOLUME;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Harmonic coefficients of one wavelet system: `ₛψ^{(j)}_{ℓn}` for every
/// scale and the axisymmetric scaling function `Φ_{ℓ0}`.
///
/// `ψ^{(j)}_{ℓn} = √((2ℓ+1)/8π²) κ^{(j)}(ℓ) ζ_{ℓn}`, with rows `ℓ < |s|` zero.
#[derive(Debug, Clone)]
pub struct WaveletFamily {
    params: WaveletParams,
    kernels: KernelTable,
    directionality: Directionality,
    wavelets: Vec<Vec<Complex64>>,
    scaling: Vec<f64>,
}

/// Builds the family for `params`.
pub fn build_family(params: &WaveletParams) -> Result<WaveletFamily> {
    WaveletFamily::new(params)
}

impl WaveletFamily {
    pub fn new(params: &WaveletParams) -> Result<Self> {
        let kernels = KernelTable::new(params)?;
        let band_limit = params.band_limit();
        let directionality = Directionality::new(band_limit, params.azimuthal_band_limit());
        let width = 2 * params.azimuthal_band_limit() - 1;
        let nm = params.azimuthal_band_limit() as i64 - 1;
        let min_l = params.spin().unsigned_abs() as usize;
        let wavelets = params
            .scales()
            .map(|j| {
                let kappa = kernels.kappa_row(j).expect("scale in range");
                let mut psi = vec![Complex64::new(0.0, 0.0); band_limit * width];
                for l in min_l..band_limit {
                    let amp = ((2 * l + 1) as f64 / SO3_VOLUME).sqrt() * kappa[l];
                    if amp == 0.0 {
                        continue;
                    }
                    for n in -nm..=nm {
                        psi[l * width + (n + nm) as usize] = directionality.get(l, n) * amp;
                    }
                }
                psi
            })
            .collect();
        let scaling = kernels.scaling().to_vec();
        Ok(WaveletFamily {
            params: params.clone(),
            kernels,
            directionality,
            wavelets,
            scaling,
        })
    }

    pub fn params(&self) -> &WaveletParams {
        &self.params
    }

    pub fn kernels(&self) -> &KernelTable {
        &self.kernels
    }

    pub fn directionality(&self) -> &Directionality {
        &self.directionality
    }

    fn width(&self) -> usize {
        2 * self.params.azimuthal_band_limit() - 1
    }

    /// `ψ^{(j)}_{ℓn}` stored as `ℓ (2N − 1) + n + N − 1`.
    pub fn wavelet(&self, j: usize) -> Result<&[Complex64]> {
        self.params.check_scale(j)?;
        Ok(&self.wavelets[j - self.params.j_min()])
    }

    /// `ψ^{(j)}_{ℓn}`; zero for `|n| ≥ N`. Panics if `j` is not a scale.
    pub fn psi(&self, j: usize, l: usize, n: i64) -> Complex64 {
        let nm = self.params.azimuthal_band_limit() as i64 - 1;
        if n.abs() > nm {
            return Complex64::new(0.0, 0.0);
        }
        self.wavelet(j).expect("scale in range")[l * self.width() + (n + nm) as usize]
    }

    /// `Φ_{ℓ0}` for `0 ≤ ℓ < L`.
    pub fn scaling(&self) -> &[f64] {
        &self.scaling
    }

    /// Smallest and largest degree at which scale `j` is nonzero.
    pub fn wavelet_support(&self, j: usize) -> Result<Option<(usize, usize)>> {
        let w = self.width();
        let psi = self.wavelet(j)?;
        let rows: Vec<usize> = (0..self.params.band_limit())
            .filter(|&l| psi[l * w..(l + 1) * w].iter().any(|v| v.norm_sqr() > 0.0))
            .collect();
        Ok(rows.first().map(|&lo| (lo, *rows.last().expect("nonempty"))))
    }

    /// `Σ_{ℓn} |ψ^{(j)}_{ℓn}|²`.
    pub fn wavelet_energy(&self, j: usize) -> Result<f64> {
        Ok(self.wavelet(j)?.iter().map(|v| v.norm_sqr()).sum())
    }

    /// The family rotated by `(0, 0, γ)`: `ψ_{ℓn} ↦ e^{−inγ} ψ_{ℓn}`.
    pub fn rotate_orientation(&self, gamma: f64) -> WaveletFamily {
        let nm = self.params.azimuthal_band_limit() as i64 - 1;
        let w = self.width();
        self.map_wavelets(|_, idx, psi| {
            let n = (idx % w) as i64 - nm;
            psi * Complex64::from_polar(1.0, -(n as f64) * gamma)
        })
    }

    /// Copy with scale `j` set to zero; breaks admissibility on purpose.
    pub fn without_scale(&self, j: usize) -> Result<WaveletFamily> {
        self.params.check_scale(j)?;
        Ok(self.map_wavelets(|jj, _, psi| if jj == j { Complex64::new(0.0, 0.0) } else { psi }))
    }

    fn map_wavelets(&self, mut f: impl FnMut(usize, usize, Complex64) -> Complex64) -> WaveletFamily {
        let mut out = self.clone();
        let j0 = self.params.j_min();
        for (k, psi) in out.wavelets.iter_mut().enumerate() {
            for (idx, v) in psi.iter_mut().enumerate() {
                *v = f(j0 + k, idx, *v);
            }
        }
        out
    }

    /// Family for spin `spin` with `ψ_{ℓn} ↦ g(ℓ) ψ_{ℓn}` and `Φ_ℓ ↦ h(ℓ) Φ_ℓ`,
    /// rows `ℓ < |spin|` cleared. The result need not be admissible.
    pub fn reweighted(
        &self,
        spin: i32,
        mut g: impl FnMut(usize) -> f64,
        mut h: impl FnMut(usize) -> f64,
    ) -> Result<WaveletFamily> {
        let params = self.params.with_spin(spin)?;
        let w = self.width();
        let min_l = spin.unsigned_abs() as usize;
        let mut out = self.map_wavelets(|_, idx, psi| {
            let l = idx / w;
            if l < min_l {
                Complex64::new(0.0, 0.0)
            } else {
                psi * g(l)
            }
        });
        for (l, v) in out.scaling.iter_mut().enumerate() {
            *v *= h(l);
        }
        out.params = params;
        Ok(out)
    }
}

/// `(4π/(2ℓ+1)) |Φ_{ℓ0}|² + (8π²/(2ℓ+1)) Σ_{j,n} |ψ^{(j)}_{ℓn}|²` for each `ℓ < L`.
pub fn admissibility_profile(family: &WaveletFamily) -> Vec<f64> {
    let params = family.params();
    let w = 2 * params.azimuthal_band_limit() - 1;
    (0..params.band_limit())
        .map(|l| {
            let norm = (2 * l + 1) as f64;
            let mut total = 4.0 * PI / norm * family.scaling()[l].powi(2);
            for j in params.scales() {
                let psi = family.wavelet(j).expect("scale in range");
                total += SO3_VOLUME / norm * psi[l * w..(l + 1) * w].iter().map(|v| v.norm_sqr()).sum::<f64>();
            }
            total
        })
        .collect()
}

/// `max_ℓ |profile(ℓ) − 1|` over the degrees `|s| ≤ ℓ < L` a spin-`s` signal
/// can occupy.
pub fn check_admissibility(family: &WaveletFamily) -> f64 {
    let min_l = family.params().spin().unsigned_abs() as usize;
    admissibility_profile(family)
        .iter()
        .skip(min_l)
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max)
}
