//! Special functions with explicit convergence control.

mod bessel;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_i, ln_bessel_i};
pub use gamma::{
    digamma, gamma, ln_gamma, regularized_gamma_p, regularized_gamma_q, upper_incomplete_gamma,
    EULER_GAMMA,
};
pub use hypergeometric::{
    hyp2f2_unit_negative, hyp_pfq, hyp_pfq_scaled, kummer_bessel_rhs, ln_hyp1f1_positive,
    partial_sums, pochhammer, PfqParams, ScaledValue, SeriesControl,
};

pub(crate) use gamma::{digamma_unchecked, ln_gamma_unchecked};
