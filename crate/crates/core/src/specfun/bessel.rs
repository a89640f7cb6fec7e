//! Modified Bessel function of the first kind for real order ν > −1.

use super::gamma::ln_gamma_unchecked;
use super::hypergeometric::{hyp_pfq_scaled, PfqParams, SeriesControl};
use crate::{Error, Result};

/// I_ν(z) for z ≥ 0 and ν > −1. Overflows to `inf` for large z; use
/// [`ln_bessel_i`] there.
pub fn bessel_i(nu: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    ln_bessel_i(nu, z, ctrl).map(f64::exp)
}

/// ln I_ν(z) for z ≥ 0 and ν > −1.
///
/// Uses (z/2)^ν/Γ(ν+1)·₀F₁(ν+1; z²/4) with a scaled series, or the
/// Hankel expansion e^z/√(2πz)·Σ(−1)^k a_k(ν)/z^k for large z once it
/// reaches the requested tolerance.
pub fn ln_bessel_i(nu: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::domain(format!("bessel_i requires order > -1, got {nu}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("bessel_i requires z >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(if nu == 0.0 {
            0.0
        } else if nu > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
    }
    if z > 60.0 && z > nu * nu {
        if let Some(v) = ln_bessel_i_hankel(nu, z, ctrl.rel_tol()) {
            return Ok(v);
        }
    }
    let params = PfqParams::new(&[], &[nu + 1.0], z * z / 4.0)?;
    let series = hyp_pfq_scaled(&params, ctrl)?;
    Ok(nu * (z / 2.0).ln() - ln_gamma_unchecked(nu + 1.0) + series.ln_abs())
}

fn ln_bessel_i_hankel(nu: f64, z: f64, tol: f64) -> Option<f64> {
    let mu4 = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu4 - odd * odd) / (8.0 * k as f64 * z);
        if term == 0.0 {
            break;
        }
        if term.abs() > last {
            return None;
        }
        last = term.abs();
        sum += term;
        if term.abs() < 1e-2 * tol * sum.abs() {
            break;
        }
    }
    if sum <= 0.0 {
        return None;
    }
    Some(z - 0.5 * (2.0 * std::f64::consts::PI * z).ln() + sum.ln())
}
