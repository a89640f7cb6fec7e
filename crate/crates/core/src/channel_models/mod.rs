//! Analytic layer of the κ-μ shadowed family: parameter records, the
//! reduction of classic and generalized models, power PDFs, moments and
//! amount of fading.

mod cdf;
mod moments;
mod pdf;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use cdf::{cdf_numeric, expectation, CdfTable};
pub use moments::{amount_of_fading, moment, moment_direct_form, normalized_moment};
pub use pdf::{ln_pdf_kappa_mu_shadowed, pdf_eta_mu, pdf_gamma, pdf_kappa_mu, pdf_kappa_mu_shadowed, pdf_model};

/// Parameters (κ, μ, m, γ̄) of the κ-μ shadowed distribution.
///
/// κ is the dominant-to-scattered power ratio, μ the (real) cluster count,
/// m the Nakagami shadowing severity of the dominant components and γ̄ the
/// linear mean SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowedParams {
    kappa: f64,
    mu: f64,
    m: f64,
    gamma_bar: f64,
}

impl ShadowedParams {
    pub fn new(kappa: f64, mu: f64, m: f64, gamma_bar: f64) -> Result<Self> {
        let finite = [kappa, mu, m, gamma_bar].iter().all(|v| v.is_finite());
        if !finite || !(kappa >= 0.0) || !(mu > 0.0) || !(m > 0.0) || !(gamma_bar > 0.0) {
            return Err(Error::domain(format!(
                "κ-μ shadowed parameters need κ >= 0, μ > 0, m > 0, γ̄ > 0; got κ={kappa}, μ={mu}, m={m}, γ̄={gamma_bar}"
            )));
        }
        Ok(Self {
            kappa,
            mu,
            m,
            gamma_bar,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn with_gamma_bar(&self, gamma_bar: f64) -> Result<Self> {
        Self::new(self.kappa, self.mu, self.m, gamma_bar)
    }

    /// μκ/(μκ+m): the argument of the Gauss and ₃F₂ series in the moment
    /// and capacity-loss formulas.
    pub fn series_argument(&self) -> f64 {
        let mk = self.mu * self.kappa;
        mk / (mk + self.m)
    }
}

/// Numerical stand-ins for the limits (m → ∞, κ → 0) used by the reductions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPolicy {
    m_infinity: f64,
    kappa_zero: f64,
}

impl LimitPolicy {
    pub const DEFAULT_M_INFINITY: f64 = 1e6;
    pub const DEFAULT_KAPPA_ZERO: f64 = 1e-9;

    pub fn new(m_infinity: f64, kappa_zero: f64) -> Result<Self> {
        if !(m_infinity >= 1e3) || !m_infinity.is_finite() {
            return Err(Error::domain(format!("m_infinity must be >= 1e3, got {m_infinity}")));
        }
        if !(kappa_zero > 0.0 && kappa_zero <= 1e-6) {
            return Err(Error::domain(format!("kappa_zero must lie in (0, 1e-6], got {kappa_zero}")));
        }
        Ok(Self {
            m_infinity,
            kappa_zero,
        })
    }

    pub fn m_infinity(&self) -> f64 {
        self.m_infinity
    }

    pub fn kappa_zero(&self) -> f64 {
        self.kappa_zero
    }
}

impl Default for LimitPolicy {
    fn default() -> Self {
        Self {
            m_infinity: Self::DEFAULT_M_INFINITY,
            kappa_zero: Self::DEFAULT_KAPPA_ZERO,
        }
    }
}

/// Any model of the unified family, in its native parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FadingModel {
    OneSidedGaussian { gamma_bar: f64 },
    Rayleigh { gamma_bar: f64 },
    NakagamiM { m: f64, gamma_bar: f64 },
    /// Hoyt fading, q ∈ (0, 1].
    NakagamiQ { q: f64, gamma_bar: f64 },
    Rician { k: f64, gamma_bar: f64 },
    KappaMu { kappa: f64, mu: f64, gamma_bar: f64 },
    /// η-μ in format 1, η > 0.
    EtaMu { eta: f64, mu: f64, gamma_bar: f64 },
    RicianShadowed { k: f64, m: f64, gamma_bar: f64 },
    KappaMuShadowed { kappa: f64, mu: f64, m: f64, gamma_bar: f64 },
}

/// Which route to take for models reachable two ways (Nakagami-m, Rayleigh, one-sided Gaussian).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ReductionRoute {
    /// m = μ: exact for every κ.
    #[default]
    Exact,
    /// κ → 0, realized with the policy's small-κ surrogate and m → ∞.
    KappaLimit,
}

impl FadingModel {
    pub fn gamma_bar(&self) -> f64 {
        match *self {
            FadingModel::OneSidedGaussian { gamma_bar }
            | FadingModel::Rayleigh { gamma_bar }
            | FadingModel::NakagamiM { gamma_bar, .. }
            | FadingModel::NakagamiQ { gamma_bar, .. }
            | FadingModel::Rician { gamma_bar, .. }
            | FadingModel::KappaMu { gamma_bar, .. }
            | FadingModel::EtaMu { gamma_bar, .. }
            | FadingModel::RicianShadowed { gamma_bar, .. }
            | FadingModel::KappaMuShadowed { gamma_bar, .. } => gamma_bar,
        }
    }

    pub fn with_gamma_bar(mut self, value: f64) -> Self {
        match &mut self {
            FadingModel::OneSidedGaussian { gamma_bar }
            | FadingModel::Rayleigh { gamma_bar }
            | FadingModel::NakagamiM { gamma_bar, .. }
            | FadingModel::NakagamiQ { gamma_bar, .. }
            | FadingModel::Rician { gamma_bar, .. }
            | FadingModel::KappaMu { gamma_bar, .. }
            | FadingModel::EtaMu { gamma_bar, .. }
            | FadingModel::RicianShadowed { gamma_bar, .. }
            | FadingModel::KappaMuShadowed { gamma_bar, .. } => *gamma_bar = value,
        }
        self
    }

    /// Short human-readable name with parameters.
    pub fn label(&self) -> String {
        match *self {
            FadingModel::OneSidedGaussian { .. } => "one-sided Gaussian".into(),
            FadingModel::Rayleigh { .. } => "Rayleigh".into(),
            FadingModel::NakagamiM { m, .. } => format!("Nakagami-m (m={m})"),
            FadingModel::NakagamiQ { q, .. } => format!("Nakagami-q (q={q})"),
            FadingModel::Rician { k, .. } => format!("Rician (K={k})"),
            FadingModel::KappaMu { kappa, mu, .. } => format!("kappa-mu (kappa={kappa}, mu={mu})"),
            FadingModel::EtaMu { eta, mu, .. } => format!("eta-mu (eta={eta}, mu={mu})"),
            FadingModel::RicianShadowed { k, m, .. } => format!("Rician shadowed (K={k}, m={m})"),
            FadingModel::KappaMuShadowed { kappa, mu, m, .. } => {
                format!("kappa-mu shadowed (kappa={kappa}, mu={mu}, m={m})")
            }
        }
    }

    /// Checks every native parameter against its own domain.
    pub fn validate(&self) -> Result<()> {
        fn need(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::domain(msg()))
            }
        }
        let g = self.gamma_bar();
        need(g > 0.0 && g.is_finite(), || format!("γ̄ must be positive, got {g}"))?;
        match *self {
            FadingModel::OneSidedGaussian { .. } | FadingModel::Rayleigh { .. } => Ok(()),
            FadingModel::NakagamiM { m, .. } => need(m > 0.0 && m.is_finite(), || format!("Nakagami m must be > 0, got {m}")),
            FadingModel::NakagamiQ { q, .. } => need(q > 0.0 && q <= 1.0, || format!("Hoyt q must lie in (0, 1], got {q}")),
            FadingModel::Rician { k, .. } => need(k >= 0.0 && k.is_finite(), || format!("Rician K must be >= 0, got {k}")),
            FadingModel::KappaMu { kappa, mu, .. } => need(
                kappa >= 0.0 && kappa.is_finite() && mu > 0.0 && mu.is_finite(),
                || format!("κ-μ needs κ >= 0 and μ > 0, got κ={kappa}, μ={mu}"),
            ),
            FadingModel::EtaMu { eta, mu, .. } => need(
                eta > 0.0 && eta.is_finite() && mu > 0.0 && mu.is_finite(),
                || format!("η-μ needs η > 0 and μ > 0, got η={eta}, μ={mu}"),
            ),
            FadingModel::RicianShadowed { k, m, .. } => need(
                k >= 0.0 && k.is_finite() && m > 0.0 && m.is_finite(),
                || format!("Rician shadowed needs K >= 0 and m > 0, got K={k}, m={m}"),
            ),
            FadingModel::KappaMuShadowed { kappa, mu, m, gamma_bar } => {
                ShadowedParams::new(kappa, mu, m, gamma_bar).map(|_| ())
            }
        }
    }
}

/// Maps a model onto κ-μ shadowed parameters, preferring the exact (m = μ)
/// derivation for one-sided Gaussian, Rayleigh and Nakagami-m.
pub fn reduce_to_shadowed(model: &FadingModel, policy: &LimitPolicy) -> Result<ShadowedParams> {
    reduce_to_shadowed_via(model, policy, ReductionRoute::Exact)
}

/// Like [`reduce_to_shadowed`] but lets the caller choose the derivation
/// for the models that have two.
pub fn reduce_to_shadowed_via(model: &FadingModel, policy: &LimitPolicy, route: ReductionRoute) -> Result<ShadowedParams> {
    model.validate()?;
    let g = model.gamma_bar();
    let k0 = policy.kappa_zero;
    let central = |mu: f64| match route {
        ReductionRoute::Exact => ShadowedParams::new(k0, mu, mu, g),
        ReductionRoute::KappaLimit => ShadowedParams::new(k0, mu, policy.m_infinity, g),
    };
    match *model {
        FadingModel::OneSidedGaussian { .. } => central(0.5),
        FadingModel::Rayleigh { .. } => central(1.0),
        FadingModel::NakagamiM { m, .. } => central(m),
        FadingModel::NakagamiQ { q, .. } => ShadowedParams::new((1.0 - q * q) / (2.0 * q * q), 1.0, 0.5, g),
        FadingModel::Rician { k, .. } => ShadowedParams::new(k, 1.0, policy.m_infinity, g),
        FadingModel::KappaMu { kappa, mu, .. } => ShadowedParams::new(kappa, mu, policy.m_infinity, g),
        FadingModel::EtaMu { eta, mu, .. } => {
            let eta = fold_eta(eta);
            ShadowedParams::new((1.0 - eta) / (2.0 * eta), 2.0 * mu, mu, g)
        }
        FadingModel::RicianShadowed { k, m, .. } => ShadowedParams::new(k, 1.0, m, g),
        FadingModel::KappaMuShadowed { kappa, mu, m, .. } => ShadowedParams::new(kappa, mu, m, g),
    }
}

/// Format-1 η-μ is symmetric under η ↔ 1/η; fold onto (0, 1].
pub(crate) fn fold_eta(eta: f64) -> f64 {
    if eta > 1.0 {
        1.0 / eta
    } else {
        eta
    }
}
