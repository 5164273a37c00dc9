//! Directional spin scale-discretised wavelets: construction, analysis,
//! synthesis and steering.

mod directionality;
mod family;
mod kernel;
mod params;
mod steer;
mod transform;

pub use directionality::{directionality, Directionality};
pub use family::{admissibility_profile, build_family, check_admissibility, WaveletFamily};
pub use kernel::{k_alpha, kernel, schwartz_s, schwartz_s_alpha, KAlpha, KernelTable};
pub use params::{max_scale, WaveletParams};
pub use steer::{gamma_slice_at, steer, SteeringWeights};
pub use transform::{
    analyze, analyze_multires, analyze_scale, analyze_scaling_with, analyze_with, scaling_harmonics,
    synthesize, synthesize_scale, synthesize_with, wavelet_harmonics, TransformOptions,
    WaveletCoefficients,
};
