//! Directional spin scale-discretised wavelets on the sphere.
//!
//! The crate provides exact spin spherical harmonic transforms, exact Wigner
//! transforms on the rotation group, the wavelet construction (kernels,
//! directionality and scaling function), steerable wavelet analysis and
//! synthesis with a multiresolution variant, spin-2 E/B utilities, and a
//! hard-thresholding denoiser.

pub mod denoise;
pub mod error;
pub mod polarization;
pub mod so3;
pub mod sphere;
pub mod wavelet;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub struct $name;
        };
    }
    chapter!(Introduction, "introduction.md");
    chapter!(Harmonics, "harmonics.md");
    chapter!(Rotations, "rotations.md");
    chapter!(Wavelets, "wavelets.md");
    chapter!(Transform, "transform.md");
    chapter!(Polarization, "polarization.md");
    chapter!(Denoising, "denoising.md");
    chapter!(Cli, "cli.md");
}
