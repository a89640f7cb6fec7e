//! High-SNR ergodic capacity.
//!
//! At high SNR the ergodic capacity approaches log₂γ̄ − L, where the loss
//! L = −log₂(e)·E[ln(γ/γ̄)] is the derivative of the amount of fading at
//! order zero. This module has the closed forms of L for every member of
//! the family, exact capacity by quadrature and a Monte Carlo estimator.

use std::f64::consts::LOG2_E;

use serde::{Deserialize, Serialize};

use crate::channel_models::{
    amount_of_fading, fold_eta, pdf_model, reduce_to_shadowed, FadingModel, LimitPolicy, ShadowedParams,
};
use crate::quadrature::{integrate_from_origin, OriginLayout, QuadOptions};
use crate::sampler::SampleBatch;
use crate::specfun::{
    digamma_unchecked, hyp2f2_unit_negative, hyp_pfq, ln_gamma_unchecked, upper_incomplete_gamma, PfqParams,
    SeriesControl, EULER_GAMMA,
};
use crate::stats::mean_and_standard_error;
use crate::{Error, Result};

/// High-SNR capacity loss relative to AWGN, in bps/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityLoss {
    pub loss_bits: f64,
    /// The model the loss was computed for. The loss does not depend on γ̄,
    /// so constructors that take no γ̄ record 1.
    pub model: FadingModel,
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateCI {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

fn ctrl() -> SeriesControl {
    SeriesControl::default()
}

/// ₃F₂(1, 1, a; 2, b; x).
fn f32_unit(a: f64, b: f64, x: f64) -> Result<f64> {
    hyp_pfq(&PfqParams::new(&[1.0, 1.0, a], &[2.0, b], x)?, &ctrl())
}

fn check_shadowed(kappa: f64, mu: f64, m: f64) -> Result<ShadowedParams> {
    ShadowedParams::new(kappa, mu, m, 1.0)
}

/// Loss of κ-μ shadowed fading:
/// −log₂e·ψ(μ) − log₂((μκ+m)/(μm(1+κ))) + log₂e·κ(μ−m)/(μκ+m)·₃F₂(1,1,μ−m+1; 2,μ+1; μκ/(μκ+m)).
///
/// When m > μ+1 the ₃F₂ series alternates and cancels heavily once
/// m·μκ/(μκ+m) is large; there the same quantity is summed through its
/// negative-binomial mixture form (see [`loss_kappa_mu_shadowed_mixture`]).
pub fn loss_kappa_mu_shadowed(kappa: f64, mu: f64, m: f64) -> Result<CapacityLoss> {
    let p = check_shadowed(kappa, mu, m)?;
    let x = p.series_argument();
    let loss_bits = if m > mu + 1.0 && m * x > 10.0 {
        mixture_loss(&p)?
    } else {
        closed_form_loss(&p)?
    };
    Ok(CapacityLoss {
        loss_bits,
        model: FadingModel::KappaMuShadowed { kappa, mu, m, gamma_bar: 1.0 },
    })
}

/// The closed form of [`loss_kappa_mu_shadowed`] summed as printed, with no
/// switch to the mixture form.
pub fn loss_kappa_mu_shadowed_closed_form(kappa: f64, mu: f64, m: f64) -> Result<CapacityLoss> {
    let p = check_shadowed(kappa, mu, m)?;
    Ok(CapacityLoss {
        loss_bits: closed_form_loss(&p)?,
        model: FadingModel::KappaMuShadowed { kappa, mu, m, gamma_bar: 1.0 },
    })
}

fn closed_form_loss(p: &ShadowedParams) -> Result<f64> {
    let (kappa, mu, m) = (p.kappa(), p.mu(), p.m());
    // ln((μκ+m)/(μm(1+κ))) written to survive m → ∞.
    let ln_ratio = (mu * kappa / m).ln_1p() - mu.ln() - kappa.ln_1p();
    let mut l = -LOG2_E * digamma_unchecked(mu) - LOG2_E * ln_ratio;
    if mu != m && kappa > 0.0 {
        let coeff = kappa * (mu - m) / (mu * kappa + m);
        l += LOG2_E * coeff * f32_unit(mu - m + 1.0, mu + 1.0, p.series_argument())?;
    }
    Ok(l)
}

/// The κ-μ shadowed loss as log₂(μ(1+κ)) − log₂e·E[ψ(μ+N)], where
/// N is negative binomial with P(N=k) = (m)_k/k!·(1−x)^m·x^k and
/// x = μκ/(μκ+m). Every term is positive, so this form is free of
/// cancellation; it is slower than the closed form for x near one.
pub fn loss_kappa_mu_shadowed_mixture(kappa: f64, mu: f64, m: f64) -> Result<CapacityLoss> {
    let p = check_shadowed(kappa, mu, m)?;
    Ok(CapacityLoss {
        loss_bits: mixture_loss(&p)?,
        model: FadingModel::KappaMuShadowed { kappa, mu, m, gamma_bar: 1.0 },
    })
}

fn mixture_loss(p: &ShadowedParams) -> Result<f64> {
    let (kappa, mu, m) = (p.kappa(), p.mu(), p.m());
    let base = mu.ln() + kappa.ln_1p();
    if kappa == 0.0 {
        return Ok(LOG2_E * (base - digamma_unchecked(mu)));
    }
    let x = p.series_argument();
    let ln_x = x.ln();
    // ln(1−x) = −ln(1 + μκ/m).
    let ln_1mx = -(mu * kappa / m).ln_1p();
    let ln_w = |k: f64| ln_gamma_unchecked(m + k) - ln_gamma_unchecked(m) - ln_gamma_unchecked(k + 1.0) + m * ln_1mx + k * ln_x;
    let mode = if m > 1.0 { ((m - 1.0) * x / (1.0 - x)).floor() } else { 0.0 };
    let budget = ctrl().max_terms() * 10;
    let eps = 1e-18;

    let mut weight_sum: f64 = 0.0;
    let mut acc = 0.0;
    // Upward from the mode, with ψ and the weight by recurrence.
    let mut k = mode;
    let mut w = ln_w(k).exp();
    let mut psi = digamma_unchecked(mu + k);
    let mut steps = 0;
    while steps == 0 || w > eps * weight_sum {
        weight_sum += w;
        acc += w * psi;
        w *= (m + k) / (k + 1.0) * x;
        psi += 1.0 / (mu + k);
        k += 1.0;
        steps += 1;
        if steps > budget {
            return Err(Error::non_convergence("negative-binomial loss series", budget));
        }
    }
    // Downward.
    let mut k = mode;
    let mut w = ln_w(k).exp();
    let mut psi = digamma_unchecked(mu + k);
    while k > 0.0 {
        w *= k / ((m + k - 1.0) * x);
        psi -= 1.0 / (mu + k - 1.0);
        k -= 1.0;
        weight_sum += w;
        acc += w * psi;
        if w < eps * weight_sum {
            break;
        }
    }
    Ok(LOG2_E * (base - acc / weight_sum))
}

/// Loss of κ-μ fading:
/// −log₂e·ψ(μ) + log₂μ + log₂(1+κ) − κ·log₂e·₂F₂(1,1; 2,μ+1; −μκ).
pub fn loss_kappa_mu(kappa: f64, mu: f64) -> Result<CapacityLoss> {
    if !(kappa >= 0.0 && mu > 0.0) || !kappa.is_finite() || !mu.is_finite() {
        return Err(Error::domain(format!("κ-μ loss needs κ >= 0 and μ > 0, got κ={kappa}, μ={mu}")));
    }
    let mut l = -LOG2_E * digamma_unchecked(mu) + mu.log2() + kappa.ln_1p() * LOG2_E;
    if kappa > 0.0 {
        l -= kappa * LOG2_E * hyp2f2_unit_negative(mu + 1.0, mu * kappa, &ctrl())?;
    }
    Ok(CapacityLoss {
        loss_bits: l,
        model: FadingModel::KappaMu { kappa, mu, gamma_bar: 1.0 },
    })
}

fn eta_mu_formula(eta: f64, mu: f64) -> Result<f64> {
    let mut l = -LOG2_E * digamma_unchecked(2.0 * mu) + mu.log2() + eta.ln_1p() * LOG2_E;
    if eta != 1.0 {
        l += LOG2_E * (1.0 - eta) / 2.0 * f32_unit(mu + 1.0, 2.0 * mu + 1.0, 1.0 - eta)?;
    }
    Ok(l)
}

fn check_eta_mu(eta: f64, mu: f64) -> Result<()> {
    if eta > 0.0 && mu > 0.0 && eta.is_finite() && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("η-μ loss needs η > 0 and μ > 0, got η={eta}, μ={mu}")))
    }
}

/// Loss of η-μ fading (format 1):
/// −log₂e·ψ(2μ) + log₂μ + log₂(1+η) + log₂e·(1−η)/2·₃F₂(1,1,μ+1; 2,2μ+1; 1−η).
///
/// η > 1 is folded to 1/η first, which keeps the series argument in [0, 1).
pub fn loss_eta_mu(eta: f64, mu: f64) -> Result<CapacityLoss> {
    check_eta_mu(eta, mu)?;
    Ok(CapacityLoss {
        loss_bits: eta_mu_formula(fold_eta(eta), mu)?,
        model: FadingModel::EtaMu { eta, mu, gamma_bar: 1.0 },
    })
}

/// The η-μ formula evaluated at η as given, without folding. Valid for
/// η < 2, where the series argument 1−η stays inside the unit disk.
pub fn loss_eta_mu_unfolded(eta: f64, mu: f64) -> Result<CapacityLoss> {
    check_eta_mu(eta, mu)?;
    if eta >= 2.0 {
        return Err(Error::domain(format!("unfolded η-μ loss needs η < 2, got {eta}")));
    }
    Ok(CapacityLoss {
        loss_bits: eta_mu_formula(eta, mu)?,
        model: FadingModel::EtaMu { eta, mu, gamma_bar: 1.0 },
    })
}

/// The model-specific closed form of the loss.
pub fn loss_special_case(model: &FadingModel) -> Result<CapacityLoss> {
    model.validate()?;
    let euler_bits = EULER_GAMMA * LOG2_E;
    let loss_bits = match *model {
        FadingModel::OneSidedGaussian { .. } => 1.0 + euler_bits,
        FadingModel::Rayleigh { .. } => euler_bits,
        FadingModel::NakagamiM { m, .. } => m.log2() - LOG2_E * digamma_unchecked(m),
        FadingModel::NakagamiQ { q, .. } => 1.0 + euler_bits + ((1.0 + q * q) / (1.0 + q).powi(2)).log2(),
        FadingModel::Rician { k, .. } => {
            if k == 0.0 {
                euler_bits
            } else {
                (1.0 / k).ln_1p() * LOG2_E - LOG2_E * upper_incomplete_gamma(0.0, k)?
            }
        }
        FadingModel::KappaMu { kappa, mu, .. } => loss_kappa_mu(kappa, mu)?.loss_bits,
        FadingModel::EtaMu { eta, mu, .. } => loss_eta_mu(eta, mu)?.loss_bits,
        FadingModel::RicianShadowed { k, m, .. } => {
            let mut l = euler_bits - ((k + m) / (m * (1.0 + k))).log2();
            if m != 1.0 && k > 0.0 {
                l += LOG2_E * k * (1.0 - m) / (k + m) * f32_unit(2.0 - m, 2.0, k / (k + m))?;
            }
            l
        }
        FadingModel::KappaMuShadowed { kappa, mu, m, .. } => loss_kappa_mu_shadowed(kappa, mu, m)?.loss_bits,
    };
    Ok(CapacityLoss { loss_bits, model: *model })
}

/// The κ-μ shadowed loss evaluated at the model's reduced parameters.
pub fn loss_via_reduction(model: &FadingModel, policy: &LimitPolicy) -> Result<CapacityLoss> {
    let p = reduce_to_shadowed(model, policy)?;
    Ok(CapacityLoss {
        loss_bits: loss_kappa_mu_shadowed(p.kappa(), p.mu(), p.m())?.loss_bits,
        model: *model,
    })
}

/// log₂γ̄ − L(model).
pub fn asymptotic_capacity(model: &FadingModel, gamma_bar: f64) -> Result<f64> {
    if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
        return Err(Error::domain(format!("γ̄ must be positive, got {gamma_bar}")));
    }
    Ok(gamma_bar.log2() - loss_special_case(model)?.loss_bits)
}

/// E[log₂(1+γ)] by adaptive quadrature of the model's own density, with
/// absolute error at most `tol`.
pub fn ergodic_capacity_quadrature(model: &FadingModel, gamma_bar: f64, tol: f64) -> Result<f64> {
    if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
        return Err(Error::domain(format!("γ̄ must be positive, got {gamma_bar}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    // Integrate over u = γ/γ̄ against the unit-mean density.
    let unit = model.with_gamma_bar(1.0);
    let mu = reduce_to_shadowed(&unit, &LimitPolicy::default())?.mu();
    let layout = OriginLayout {
        scale: 1.0,
        origin_power: (2.0 / mu).max(1.0),
    };
    let r = integrate_from_origin(
        |u| {
            if u <= 0.0 {
                return Ok(0.0);
            }
            let f = pdf_model(&unit, u)?;
            Ok(if f == 0.0 { 0.0 } else { (gamma_bar * u).ln_1p() * LOG2_E * f })
        },
        f64::INFINITY,
        layout,
        &QuadOptions::new(tol, 0.0),
    )?;
    Ok(r.value)
}

/// Sample mean and standard error of log₂(1+γ) over a batch.
pub fn ergodic_capacity_mc(batch: &SampleBatch) -> Result<EstimateCI> {
    if batch.is_empty() {
        return Err(Error::domain("Monte Carlo capacity needs a non-empty batch"));
    }
    let rates: Vec<f64> = batch.snr_values.iter().map(|&g| g.ln_1p() * LOG2_E).collect();
    let (mean, std_error) = mean_and_standard_error(&rates);
    Ok(EstimateCI {
        mean,
        std_error,
        n_samples: rates.len(),
    })
}

/// Step used by [`loss_finite_difference`].
pub const FD_STEP: f64 = 1e-4;

/// Independent oracle for the loss: −log₂e times the derivative of the
/// amount of fading at n = 0, from central differences at steps h and h/2
/// combined by one Richardson extrapolation.
pub fn loss_finite_difference(p: &ShadowedParams, h: f64) -> Result<f64> {
    if !(h > 0.0 && h < p.mu()) {
        return Err(Error::domain(format!("finite-difference step must lie in (0, μ), got {h}")));
    }
    let central = |h: f64| -> Result<f64> { Ok((amount_of_fading(p, h)? - amount_of_fading(p, -h)?) / (2.0 * h)) };
    let d = (4.0 * central(0.5 * h)? - central(h)?) / 3.0;
    Ok(-LOG2_E * d)
}
