use crate::error::{parameter, Error, Result};

/// Parameters `(L, α, J₀, N, s)` of one wavelet system.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletParams {
    band_limit: usize,
    alpha: f64,
    j_min: usize,
    azimuthal: usize,
    spin: i32,
    j_max: usize,
}

/// Smallest `J ≥ 0` with `α^J ≥ L − 1`.
pub fn max_scale(band_limit: usize, alpha: f64) -> usize {
    let target = band_limit.saturating_sub(1) as f64;
    let mut j = 0usize;
    while alpha.powi(j as i32) < target {
        j += 1;
    }
    j
}

impl WaveletParams {
    /// Validates `L ≥ 2`, `α > 1`, `1 ≤ N ≤ L`, `|s| < L` and `J₀ ≤ J`.
    pub fn new(band_limit: usize, alpha: f64, j_min: usize, azimuthal: usize, spin: i32) -> Result<Self> {
        if band_limit < 2 {
            return parameter(format!("band-limit L = {band_limit} must be at least 2"));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return parameter(format!("dilation alpha = {alpha} must exceed 1"));
        }
        if azimuthal == 0 || azimuthal > band_limit {
            return parameter(format!(
                "azimuthal band-limit N = {azimuthal} must lie in [1, L = {band_limit}]"
            ));
        }
        if spin.unsigned_abs() as usize >= band_limit {
            return parameter(format!("|spin| = {} must be below L = {band_limit}", spin.abs()));
        }
        let j_max = max_scale(band_limit, alpha);
        if j_min > j_max {
            return parameter(format!("J0 = {j_min} exceeds the maximum scale J = {j_max}"));
        }
        Ok(WaveletParams {
            band_limit,
            alpha,
            j_min,
            azimuthal,
            spin,
            j_max,
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn j_min(&self) -> usize {
        self.j_min
    }

    /// `J`, the smallest integer with `α^J ≥ L − 1`.
    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn azimuthal_band_limit(&self) -> usize {
        self.azimuthal
    }

    pub fn spin(&self) -> i32 {
        self.spin
    }

    pub fn scale_count(&self) -> usize {
        self.j_max - self.j_min + 1
    }

    pub fn scales(&self) -> std::ops::RangeInclusive<usize> {
        self.j_min..=self.j_max
    }

    pub(crate) fn check_scale(&self, j: usize) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::Scale {
                j: j as i64,
                j0: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok(())
    }

    /// `L_j = min(⌈α^{j+1}⌉, L)`; the kernel of scale `j` vanishes from there on.
    pub fn scale_band_limit(&self, j: usize) -> usize {
        ceil_power(self.alpha, j as i32 + 1).min(self.band_limit)
    }

    /// `min(N, L_j)`; orientations `|n| ≥ L_j` carry nothing at scale `j`.
    pub fn scale_azimuthal_band_limit(&self, j: usize) -> usize {
        self.azimuthal.min(self.scale_band_limit(j))
    }

    /// Band-limit of the scaling function, `min(L, ⌈α^{J₀}⌉)` and at least 1.
    pub fn scaling_band_limit(&self) -> usize {
        ceil_power(self.alpha, self.j_min as i32).clamp(1, self.band_limit)
    }

    /// Same system with a different spin.
    pub fn with_spin(&self, spin: i32) -> Result<Self> {
        Self::new(self.band_limit, self.alpha, self.j_min, self.azimuthal, spin)
    }
}

fn ceil_power(alpha: f64, e: i32) -> usize {
    let v = alpha.powi(e).ceil();
    if v >= usize::MAX as f64 {
        usize::MAX
    } else {
        v as usize
    }
}
