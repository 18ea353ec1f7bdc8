//! Numerical checks for the decay of wave fields scattered by periodic surfaces.
//!
//! The crate builds every object needed to test decay and radiation-condition claims for
//! Helmholtz fields above a periodic (or locally perturbed periodic) surface:
//!
//! - [`specfun`]: Fresnel integrals, Γ, Hankel functions of orders 0 and 1.
//! - [`bump`]: smooth compactly supported densities with derivatives up to order 4.
//! - [`oscint`]: the model oscillatory integrals with endpoint and interior singularities.
//! - [`decayfit`]: power-law fits `|F(r)| ≈ C r^{-p}`.
//! - [`fbt`]: discrete Floquet-Bloch transform on cell-sampled data.
//! - [`modes`]: Rayleigh expansions, mode classification, mode fields and radiation residuals.
//! - [`potential`]: half-space Green's function, layer-potential kernels, upward propagating
//!   representation.
//! - [`perturb`]: the surface-flattening diffeomorphism and transformed coefficients.
//! - [`harness`]: verification campaigns, reports and the JSON/CSV formats used by the CLI.
//!
//! The guide under `book/` walks through the same material; its snippets are compiled as
//! doc-tests of this crate.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bump;
pub mod decayfit;
pub mod error;
pub mod fbt;
pub mod harness;
pub mod modes;
pub mod oscint;
pub mod perturb;
pub mod potential;
pub mod specfun;

mod cplx;
mod interp;
mod jet;
mod quad;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/special-functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/densities.md")]
    mod densities {}
    #[doc = include_str!("../../../book/src/oscillatory-integrals.md")]
    mod oscillatory_integrals {}
    #[doc = include_str!("../../../book/src/decay-fits.md")]
    mod decay_fits {}
    #[doc = include_str!("../../../book/src/floquet-bloch.md")]
    mod floquet_bloch {}
    #[doc = include_str!("../../../book/src/modes.md")]
    mod modes {}
    #[doc = include_str!("../../../book/src/layer-potentials.md")]
    mod layer_potentials {}
    #[doc = include_str!("../../../book/src/perturbed-surfaces.md")]
    mod perturbed_surfaces {}
    #[doc = include_str!("../../../book/src/campaigns.md")]
    mod campaigns {}
}
