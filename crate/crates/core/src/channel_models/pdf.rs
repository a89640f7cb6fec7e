use std::f64::consts::PI;

use super::{fold_eta, reduce_to_shadowed, FadingModel, LimitPolicy, ShadowedParams};
use crate::specfun::{ln_bessel_i, ln_gamma_unchecked, ln_hyp1f1_positive, SeriesControl};
use crate::{Error, Result};

fn check_snr(gamma: f64) -> Result<()> {
    if gamma >= 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("SNR value must be finite and >= 0, got {gamma}")))
    }
}

/// Density of a power law behaving like c·γ^{s−1} at the origin, evaluated
/// at γ = 0: +∞ when s < 1, ln_c when s = 1 and zero otherwise.
fn origin_value(shape: f64, ln_c: impl FnOnce() -> f64) -> f64 {
    if shape < 1.0 {
        f64::INFINITY
    } else if shape == 1.0 {
        ln_c().exp()
    } else {
        0.0
    }
}

/// ln f_γ(γ) of the κ-μ shadowed law. Returns +∞ at γ = 0 when μ < 1.
pub fn ln_pdf_kappa_mu_shadowed(p: &ShadowedParams, gamma: f64) -> Result<f64> {
    check_snr(gamma)?;
    let (kappa, mu, m, gb) = (p.kappa(), p.mu(), p.m(), p.gamma_bar());
    // m^m/(μκ+m)^m = (1 + μκ/m)^{−m}, which stays accurate for huge m.
    let ln_const = mu * mu.ln() + mu * kappa.ln_1p() - ln_gamma_unchecked(mu) - gb.ln() - m * (mu * kappa / m).ln_1p();
    if gamma == 0.0 {
        return Ok(match origin_value(mu, || ln_const) {
            0.0 => f64::NEG_INFINITY,
            v => v.ln(),
        });
    }
    let u = gamma / gb;
    let z = mu * mu * kappa * (1.0 + kappa) / (mu * kappa + m) * u;
    let ln_f11 = ln_hyp1f1_positive(m, mu, z, &SeriesControl::default())?;
    Ok(ln_const + (mu - 1.0) * u.ln() - mu * (1.0 + kappa) * u + ln_f11)
}

/// PDF of the instantaneous SNR under κ-μ shadowed fading.
///
/// At γ = 0 the value is +∞ for μ < 1, finite for μ = 1 and zero for μ > 1.
pub fn pdf_kappa_mu_shadowed(p: &ShadowedParams, gamma: f64) -> Result<f64> {
    ln_pdf_kappa_mu_shadowed(p, gamma).map(f64::exp)
}

/// Gamma(α, β) density β^α w^{α−1} e^{−βw}/Γ(α) (rate parametrization).
pub fn pdf_gamma(alpha: f64, beta: f64, w: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::domain(format!("Gamma density needs α > 0, β > 0, got α={alpha}, β={beta}")));
    }
    check_snr(w)?;
    let ln_c = alpha * beta.ln() - ln_gamma_unchecked(alpha);
    if w == 0.0 {
        return Ok(origin_value(alpha, || ln_c));
    }
    Ok((ln_c + (alpha - 1.0) * w.ln() - beta * w).exp())
}

/// PDF of the instantaneous SNR under κ-μ fading.
pub fn pdf_kappa_mu(kappa: f64, mu: f64, gamma_bar: f64, gamma: f64) -> Result<f64> {
    if !(kappa >= 0.0 && mu > 0.0 && gamma_bar > 0.0) || !kappa.is_finite() || !mu.is_finite() || !gamma_bar.is_finite() {
        return Err(Error::domain(format!(
            "κ-μ density needs κ >= 0, μ > 0, γ̄ > 0; got κ={kappa}, μ={mu}, γ̄={gamma_bar}"
        )));
    }
    check_snr(gamma)?;
    if kappa == 0.0 {
        return pdf_gamma(mu, mu / gamma_bar, gamma);
    }
    let ln_c = mu.ln() + kappa.ln_1p() - gamma_bar.ln() - mu * kappa;
    if gamma == 0.0 {
        // I_{μ−1}(x) ~ (x/2)^{μ−1}/Γ(μ) cancels the κ^{(μ−1)/2} factor.
        return Ok(origin_value(mu, || ln_c));
    }
    let u = gamma / gamma_bar;
    let nu = mu - 1.0;
    let x = 2.0 * mu * (kappa * (1.0 + kappa) * u).sqrt();
    let ln_i = ln_bessel_i(nu, x, &SeriesControl::default())?;
    let ln_f = ln_c + 0.5 * nu * (u.ln() + kappa.ln_1p() - kappa.ln()) - mu * (1.0 + kappa) * u + ln_i;
    Ok(ln_f.exp())
}

/// PDF of the instantaneous SNR under η-μ fading, format 1.
///
/// The law is invariant under η ↔ 1/η; values above one are folded first.
/// η = 1 is the Gamma(2μ, 2μ/γ̄) limit.
pub fn pdf_eta_mu(eta: f64, mu: f64, gamma_bar: f64, gamma: f64) -> Result<f64> {
    if !(eta > 0.0 && mu > 0.0 && gamma_bar > 0.0) || !eta.is_finite() || !mu.is_finite() || !gamma_bar.is_finite() {
        return Err(Error::domain(format!(
            "η-μ density needs η > 0, μ > 0, γ̄ > 0; got η={eta}, μ={mu}, γ̄={gamma_bar}"
        )));
    }
    check_snr(gamma)?;
    let eta = fold_eta(eta);
    if eta == 1.0 {
        return pdf_gamma(2.0 * mu, 2.0 * mu / gamma_bar, gamma);
    }
    let ln_c = 0.5 * PI.ln() + (mu + 0.5) * (eta.ln_1p() + mu.ln())
        - ln_gamma_unchecked(mu)
        - gamma_bar.ln()
        - 0.5 * eta.ln()
        - (mu - 0.5) * (-eta).ln_1p();
    if gamma == 0.0 {
        // u^{μ−1/2}·I_{μ−1/2}(c·u) behaves like u^{2μ−1}; at μ = 1/2 the
        // Bessel factor is I_0(0) = 1.
        return Ok(origin_value(2.0 * mu, || ln_c));
    }
    let c = mu * (1.0 - eta * eta) / (2.0 * eta);
    let u = gamma / gamma_bar;
    let nu = mu - 0.5;
    let ln_i = ln_bessel_i(nu, c * u, &SeriesControl::default())?;
    let ln_f = ln_c + nu * u.ln() - mu * (1.0 + eta).powi(2) * u / (2.0 * eta) + ln_i;
    Ok(ln_f.exp())
}

/// PDF of any model in its own closed form (not via the reduction), used as
/// the reference side of the unification identities.
pub fn pdf_model(model: &FadingModel, gamma: f64) -> Result<f64> {
    model.validate()?;
    let gb = model.gamma_bar();
    match *model {
        FadingModel::OneSidedGaussian { .. } => pdf_gamma(0.5, 0.5 / gb, gamma),
        FadingModel::Rayleigh { .. } => pdf_gamma(1.0, 1.0 / gb, gamma),
        FadingModel::NakagamiM { m, .. } => pdf_gamma(m, m / gb, gamma),
        // Hoyt is η-μ with μ = 1/2 and η = q².
        FadingModel::NakagamiQ { q, .. } => pdf_eta_mu(q * q, 0.5, gb, gamma),
        FadingModel::Rician { k, .. } => pdf_kappa_mu(k, 1.0, gb, gamma),
        FadingModel::KappaMu { kappa, mu, .. } => pdf_kappa_mu(kappa, mu, gb, gamma),
        FadingModel::EtaMu { eta, mu, .. } => pdf_eta_mu(eta, mu, gb, gamma),
        FadingModel::RicianShadowed { .. } | FadingModel::KappaMuShadowed { .. } => {
            pdf_kappa_mu_shadowed(&reduce_to_shadowed(model, &LimitPolicy::default())?, gamma)
        }
    }
}
