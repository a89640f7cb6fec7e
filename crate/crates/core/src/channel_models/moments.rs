use super::ShadowedParams;
use crate::specfun::{hyp_pfq, hyp_pfq_scaled, ln_gamma_unchecked, pochhammer, PfqParams, SeriesControl};
use crate::{Error, Result};

fn integer_order(n: f64) -> Option<i32> {
    ((0.0..=64.0).contains(&n) && n.fract() == 0.0).then_some(n as i32)
}

/// Γ(μ+n)/Γ(μ).
fn gamma_ratio(mu: f64, n: f64) -> f64 {
    match integer_order(n) {
        Some(k) => pochhammer(mu, k as usize),
        None => (ln_gamma_unchecked(mu + n) - ln_gamma_unchecked(mu)).exp(),
    }
}

fn check_order(p: &ShadowedParams, n: f64) -> Result<()> {
    if n.is_finite() && n > -p.mu() {
        Ok(())
    } else {
        Err(Error::domain(format!("moment order must be finite and > −μ = {}, got {n}", -p.mu())))
    }
}

/// E[γⁿ]/γ̄ⁿ for any real n > −μ.
///
/// Uses Γ(μ+n)/Γ(μ)·A^n·₂F₁(μ−m, −n; μ; x) with A = (μκ+m)/(μm(1+κ)) and
/// x = μκ/(μκ+m). The Gauss series terminates for integer n.
pub fn normalized_moment(p: &ShadowedParams, n: f64) -> Result<f64> {
    check_order(p, n)?;
    if n == 0.0 {
        return Ok(1.0);
    }
    let (kappa, mu, m) = (p.kappa(), p.mu(), p.m());
    let a = (mu * kappa + m) / (mu * m * (1.0 + kappa));
    let a_pow = match integer_order(n) {
        Some(k) => a.powi(k),
        None => (n * a.ln()).exp(),
    };
    let params = PfqParams::new(&[mu - m, -n], &[mu], p.series_argument())?;
    let f21 = hyp_pfq(&params, &SeriesControl::default())?;
    Ok(gamma_ratio(mu, n) * a_pow * f21)
}

/// n-th moment E[γⁿ] of the κ-μ shadowed SNR, n > 0.
pub fn moment(p: &ShadowedParams, n: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::domain(format!("moment order must be > 0, got {n}")));
    }
    let scale = match integer_order(n) {
        Some(k) => p.gamma_bar().powi(k),
        None => p.gamma_bar().powf(n),
    };
    Ok(scale * normalized_moment(p, n)?)
}

/// E[γⁿ] through the equivalent non-terminating form
/// γ̄ⁿ·Γ(μ+n)/Γ(μ)·(μ(1+κ))^{−n}·(1−x)^m·₂F₁(m, μ+n; μ; x).
///
/// Slower than [`moment`] and kept as an independent cross-check.
pub fn moment_direct_form(p: &ShadowedParams, n: f64) -> Result<f64> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::domain(format!("moment order must be > 0, got {n}")));
    }
    let (kappa, mu, m, gb) = (p.kappa(), p.mu(), p.m(), p.gamma_bar());
    let params = PfqParams::new(&[m, mu + n], &[mu], p.series_argument())?;
    let f21 = hyp_pfq_scaled(&params, &SeriesControl::default())?;
    let ln_v = n * gb.ln() + ln_gamma_unchecked(mu + n) - ln_gamma_unchecked(mu) - n * (mu.ln() + kappa.ln_1p())
        - m * (mu * kappa / m).ln_1p()
        + f21.ln_abs();
    Ok(ln_v.exp())
}

/// Amount of fading of order n: E[γⁿ]/γ̄ⁿ − 1.
pub fn amount_of_fading(p: &ShadowedParams, n: f64) -> Result<f64> {
    Ok(normalized_moment(p, n)? - 1.0)
}
