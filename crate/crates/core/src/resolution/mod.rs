//! Resolutions of the identity for both models at finite cutoffs, applied
//! to concrete test functions.

pub mod coeffs;
pub mod eps_chain;
pub mod kernels;
pub mod testfn;
pub mod trig;
pub mod spectral;
pub mod schemes;
