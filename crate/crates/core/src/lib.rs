//! Casimir-preserving integrators for Lie–Poisson systems on magnetic
//! extensions `g ⋉ g*`.
//!
//! The crate covers quantized incompressible MHD and Hazeltine's plasma
//! model on the sphere, represented in `su(N)`, and Kirchhoff's equations
//! for a rigid body in an ideal fluid on `so(3) ⋉ so(3)*`. All of them are
//! advanced by implicit-midpoint schemes that keep the Casimirs constant up
//! to rounding.
//!
//! ```
//! use semidirect::quantization::{build_basis, laplacian_apply, SphCoeffs};
//! use num_complex::Complex64;
//!
//! let ctx = build_basis(6).unwrap();
//! let mut c = SphCoeffs::zeros(3);
//! c.set_real_pair(3, 2, Complex64::new(0.5, 0.25));
//! let w = ctx.project(&c).unwrap();
//! let lap = laplacian_apply(&w, &ctx).unwrap();
//! let back = ctx.to_coeffs(&lap).unwrap();
//! assert!((back.get(3, 2) - c.get(3, 2) * -12.0).norm() < 1e-10);
//! ```

pub mod algebra;
pub mod cli_io;
pub mod diagnostics;
pub mod error;
pub mod integrators;
pub mod models;
pub mod quantization;

pub use algebra::{AlgebraElement, AlgebraTag, CMat};
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/quantization.md")]
    struct Quantization;
    #[doc = include_str!("../../../book/src/integrators.md")]
    struct Integrators;
    #[doc = include_str!("../../../book/src/models.md")]
    struct Models;
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    struct Diagnostics;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct CommandLine;
}
