//! Monte Carlo draws of the instantaneous SNR.
//!
//! Two generative constructions sum μ clusters of circular Gaussian scatter
//! plus shadowed dominant components: [`GenerativeModel::CommonShadow`]
//! shares one Nakagami-m shadow across all clusters, while
//! [`GenerativeModel::IidShadow`] shadows each cluster independently. Both
//! need an integer cluster count. [`GenerativeModel::ConditionalGamma`]
//! handles real μ through the Gamma–Poisson–Gamma hierarchy
//! S ~ Γ(m, m), N | S ~ Poisson(μκS), γ | N ~ Γ(μ+N, μ(1+κ)/γ̄).
//!
//! Draws are produced in fixed-size chunks; chunk `c` uses a ChaCha20
//! stream `c` keyed by the seed, so output is identical for any number of
//! worker threads.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel_models::ShadowedParams;
use crate::textfmt::sci12;
use crate::{Error, Result};

/// Draws per RNG stream.
pub const CHUNK_SIZE: usize = 16_384;

/// Source of SNR draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum GenerativeModel {
    /// Ω = Σᵢ |zᵢ + ξ·ρᵢ|² with one shadow ξ per realization.
    CommonShadow {
        mu: u32,
        sigma2: f64,
        rho: Vec<Complex64>,
        m: f64,
    },
    /// Ω = Σᵢ |zᵢ + ξᵢ·ρ|² with i.i.d. shadows |ξᵢ|² ~ Γ(m̂, m̂).
    IidShadow {
        mu: u32,
        sigma2: f64,
        rho_magnitude: f64,
        m_hat: f64,
    },
    ConditionalGamma { params: ShadowedParams },
}

impl GenerativeModel {
    /// Common-shadow construction with `mu` equal dominant components that
    /// realizes the given (κ, m) at unit scatter variance.
    pub fn common_shadow_for(kappa: f64, mu: u32, m: f64) -> Result<Self> {
        let sigma2 = 0.5;
        // Σ|ρᵢ|² = 2σ²μκ split evenly.
        let amp = (2.0 * sigma2 * kappa).sqrt();
        let model = GenerativeModel::CommonShadow {
            mu,
            sigma2,
            rho: vec![Complex64::new(amp, 0.0); mu as usize],
            m,
        };
        model.validate()?;
        Ok(model)
    }

    /// Independent-shadow construction realizing (κ, μ, m), so m̂ = m/μ.
    pub fn iid_shadow_for(kappa: f64, mu: u32, m: f64) -> Result<Self> {
        let sigma2 = 0.5;
        let model = GenerativeModel::IidShadow {
            mu,
            sigma2,
            rho_magnitude: (2.0 * sigma2 * kappa).sqrt(),
            m_hat: m / mu as f64,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            GenerativeModel::CommonShadow { mu, sigma2, rho, m } => {
                if *mu < 1 {
                    return Err(Error::domain("physical models need an integer cluster count μ >= 1"));
                }
                if rho.len() != *mu as usize {
                    return Err(Error::domain(format!("expected {mu} dominant amplitudes, got {}", rho.len())));
                }
                if rho.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
                    return Err(Error::domain("dominant amplitudes must be finite"));
                }
                positive("σ²", *sigma2)?;
                positive("m", *m)
            }
            GenerativeModel::IidShadow { mu, sigma2, rho_magnitude, m_hat } => {
                if *mu < 1 {
                    return Err(Error::domain("physical models need an integer cluster count μ >= 1"));
                }
                if !(*rho_magnitude >= 0.0) || !rho_magnitude.is_finite() {
                    return Err(Error::domain(format!("|ρ| must be >= 0, got {rho_magnitude}")));
                }
                positive("σ²", *sigma2)?;
                positive("m̂", *m_hat)
            }
            GenerativeModel::ConditionalGamma { .. } => Ok(()),
        }
    }

    /// The κ-μ shadowed law this source follows, at mean SNR `gamma_bar`.
    pub fn derived_params(&self, gamma_bar: f64) -> Result<ShadowedParams> {
        self.validate()?;
        match self {
            GenerativeModel::CommonShadow { mu, sigma2, rho, m } => {
                let dominant: f64 = rho.iter().map(|r| r.norm_sqr()).sum();
                ShadowedParams::new(dominant / (2.0 * sigma2 * *mu as f64), *mu as f64, *m, gamma_bar)
            }
            GenerativeModel::IidShadow { mu, sigma2, rho_magnitude, m_hat } => {
                // Each cluster carries dominant power |ρ|², so the total
                // dominant-to-scatter ratio is μ|ρ|²/(2σ²μ).
                ShadowedParams::new(rho_magnitude.powi(2) / (2.0 * sigma2), *mu as f64, *mu as f64 * m_hat, gamma_bar)
            }
            GenerativeModel::ConditionalGamma { params } => params.with_gamma_bar(gamma_bar),
        }
    }

    fn tag(&self) -> String {
        match self {
            GenerativeModel::CommonShadow { mu, rho, m, .. } => {
                format!("common_shadow(mu={mu}, clusters_with_los={}, m={m})", rho.iter().filter(|r| r.norm_sqr() > 0.0).count())
            }
            GenerativeModel::IidShadow { mu, rho_magnitude, m_hat, .. } => {
                format!("iid_shadow(mu={mu}, rho={rho_magnitude}, m_hat={m_hat})")
            }
            GenerativeModel::ConditionalGamma { params } => conditional_tag(params),
        }
    }
}

fn conditional_tag(p: &ShadowedParams) -> String {
    format!("conditional_gamma(kappa={}, mu={}, m={})", p.kappa(), p.mu(), p.m())
}

/// A batch of linear SNR draws with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub snr_values: Vec<f64>,
    pub seed: u64,
    pub model_tag: String,
    pub gamma_bar_target: f64,
}

/// Metadata written next to a CSV sample column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub seed: u64,
    pub model: String,
    pub gamma_bar: f64,
    pub gamma_bar_db: f64,
    pub count: usize,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.snr_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snr_values.is_empty()
    }

    /// One `snr` column in `%.12e` format, LF line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut buf = String::with_capacity(20 * (self.len() + 1));
        buf.push_str("snr\n");
        for &v in &self.snr_values {
            buf.push_str(&sci12(v));
            buf.push('\n');
        }
        out.write_all(buf.as_bytes())
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            seed: self.seed,
            model: self.model_tag.clone(),
            gamma_bar: self.gamma_bar_target,
            gamma_bar_db: 10.0 * self.gamma_bar_target.log10(),
            count: self.len(),
        }
    }
}

/// Fills `count` values, chunk by chunk, each chunk on its own RNG stream.
fn generate<F>(count: usize, seed: u64, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha20Rng) -> f64 + Sync,
{
    let chunks = count.div_ceil(CHUNK_SIZE);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK_SIZE.min(count - c * CHUNK_SIZE);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

fn check_inputs(count: usize, gamma_bar: f64) -> Result<()> {
    if count == 0 {
        return Err(Error::domain("sample count must be >= 1"));
    }
    if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
        return Err(Error::domain(format!("γ̄ must be positive, got {gamma_bar}")));
    }
    Ok(())
}

fn shadow_power(m: f64) -> Result<Gamma<f64>> {
    Gamma::new(m, 1.0 / m).map_err(|e| Error::domain(format!("shadow Gamma({m}, {m}): {e}")))
}

fn scatter(sigma2: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, sigma2.sqrt()).map_err(|e| Error::domain(format!("scatter variance {sigma2}: {e}")))
}

fn complex_normal<R: Rng>(n: &Normal<f64>, rng: &mut R) -> Complex64 {
    Complex64::new(n.sample(rng), n.sample(rng))
}

fn unit_phasor<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
}

/// Draws from the common-shadow construction, scaled so that E[γ] = γ̄.
pub fn sample_common_shadow(model: &GenerativeModel, gamma_bar: f64, count: usize, seed: u64) -> Result<SampleBatch> {
    check_inputs(count, gamma_bar)?;
    model.validate()?;
    let GenerativeModel::CommonShadow { mu, sigma2, rho, m } = model else {
        return Err(Error::domain("sample_common_shadow needs a CommonShadow model"));
    };
    let shadow = shadow_power(*m)?;
    let z = scatter(*sigma2)?;
    let omega_bar = 2.0 * sigma2 * *mu as f64 + rho.iter().map(|r| r.norm_sqr()).sum::<f64>();
    let values = generate(count, seed, |rng| {
        let xi = unit_phasor(rng) * shadow.sample(rng).sqrt();
        let omega: f64 = rho.iter().map(|r| (complex_normal(&z, rng) + xi * r).norm_sqr()).sum();
        gamma_bar * omega / omega_bar
    });
    Ok(SampleBatch {
        snr_values: values,
        seed,
        model_tag: model.tag(),
        gamma_bar_target: gamma_bar,
    })
}

/// Draws from the independent-shadow construction, scaled so that E[γ] = γ̄.
pub fn sample_iid_shadow(model: &GenerativeModel, gamma_bar: f64, count: usize, seed: u64) -> Result<SampleBatch> {
    check_inputs(count, gamma_bar)?;
    model.validate()?;
    let GenerativeModel::IidShadow { mu, sigma2, rho_magnitude, m_hat } = model else {
        return Err(Error::domain("sample_iid_shadow needs an IidShadow model"));
    };
    let shadow = shadow_power(*m_hat)?;
    let z = scatter(*sigma2)?;
    let n = *mu as usize;
    let rho = *rho_magnitude;
    let omega_bar = n as f64 * (2.0 * sigma2 + rho * rho);
    let values = generate(count, seed, |rng| {
        let mut omega = 0.0;
        for _ in 0..n {
            let xi = unit_phasor(rng) * shadow.sample(rng).sqrt();
            omega += (complex_normal(&z, rng) + xi * rho).norm_sqr();
        }
        gamma_bar * omega / omega_bar
    });
    Ok(SampleBatch {
        snr_values: values,
        seed,
        model_tag: model.tag(),
        gamma_bar_target: gamma_bar,
    })
}

fn conditional_draw<R: Rng>(p: &ShadowedParams, shadow: Option<&Gamma<f64>>, rng: &mut R) -> f64 {
    let s = shadow.map_or(1.0, |g| g.sample(rng));
    let lambda = p.mu() * p.kappa() * s;
    let n = if lambda > 0.0 {
        Poisson::new(lambda).map_or(0.0, |d| d.sample(rng))
    } else {
        0.0
    };
    let rate = p.mu() * (1.0 + p.kappa()) / p.gamma_bar();
    Gamma::new(p.mu() + n, 1.0 / rate).map_or(0.0, |d| d.sample(rng))
}

/// Draws from the Gamma–Poisson–Gamma hierarchy; valid for any real μ > 0.
pub fn sample_conditional(p: &ShadowedParams, count: usize, seed: u64) -> Result<SampleBatch> {
    check_inputs(count, p.gamma_bar())?;
    let shadow = shadow_power(p.m())?;
    let values = generate(count, seed, |rng| conditional_draw(p, Some(&shadow), rng));
    Ok(SampleBatch {
        snr_values: values,
        seed,
        model_tag: conditional_tag(p),
        gamma_bar_target: p.gamma_bar(),
    })
}

/// The conditional sampler with the shadow power pinned at S = 1, which
/// yields κ-μ draws (m is ignored).
pub fn sample_conditional_unshadowed(p: &ShadowedParams, count: usize, seed: u64) -> Result<SampleBatch> {
    check_inputs(count, p.gamma_bar())?;
    let values = generate(count, seed, |rng| conditional_draw(p, None, rng));
    Ok(SampleBatch {
        snr_values: values,
        seed,
        model_tag: format!("kappa_mu_conditional(kappa={}, mu={})", p.kappa(), p.mu()),
        gamma_bar_target: p.gamma_bar(),
    })
}

/// Dispatches on the model variant.
pub fn sample(model: &GenerativeModel, gamma_bar: f64, count: usize, seed: u64) -> Result<SampleBatch> {
    match model {
        GenerativeModel::CommonShadow { .. } => sample_common_shadow(model, gamma_bar, count, seed),
        GenerativeModel::IidShadow { .. } => sample_iid_shadow(model, gamma_bar, count, seed),
        GenerativeModel::ConditionalGamma { params } => sample_conditional(&params.with_gamma_bar(gamma_bar)?, count, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::mean_and_standard_error;

    #[test]
    fn chunking_is_seamless() {
        let p = ShadowedParams::new(1.0, 1.5, 2.0, 1.0).unwrap();
        let long = sample_conditional(&p, CHUNK_SIZE + 10, 9).unwrap();
        let short = sample_conditional(&p, 10, 9).unwrap();
        assert_eq!(&long.snr_values[..10], &short.snr_values[..]);
        assert_eq!(long.len(), CHUNK_SIZE + 10);
        let other = sample_conditional(&p, 10, 10).unwrap();
        assert_ne!(short.snr_values, other.snr_values);
    }

    #[test]
    fn derived_kappa() {
        let rho = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let model = GenerativeModel::CommonShadow { mu: 2, sigma2: 0.25, rho, m: 3.0 };
        let p = model.derived_params(1.0).unwrap();
        assert!((p.kappa() - 5.0).abs() < 1e-15);
        let model = GenerativeModel::iid_shadow_for(2.5, 3, 1.5).unwrap();
        let p = model.derived_params(2.0).unwrap();
        assert!((p.kappa() - 2.5).abs() < 1e-12);
        assert_eq!((p.mu(), p.m()), (3.0, 1.5));
    }

    #[test]
    fn rejects_bad_models() {
        let m = GenerativeModel::CommonShadow { mu: 2, sigma2: 1.0, rho: vec![Complex64::new(1.0, 0.0)], m: 1.0 };
        assert!(m.validate().is_err());
        let m = GenerativeModel::IidShadow { mu: 0, sigma2: 1.0, rho_magnitude: 1.0, m_hat: 1.0 };
        assert!(sample_iid_shadow(&m, 1.0, 10, 0).is_err());
        let p = ShadowedParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(sample_conditional(&p, 0, 0).is_err());
    }

    #[test]
    fn means_are_normalized() {
        let p = ShadowedParams::new(1.5, 2.0, 2.3, 3.0).unwrap();
        for model in [
            GenerativeModel::common_shadow_for(1.5, 2, 2.3).unwrap(),
            GenerativeModel::iid_shadow_for(1.5, 2, 2.3).unwrap(),
            GenerativeModel::ConditionalGamma { params: p },
        ] {
            let b = sample(&model, 3.0, 50_000, 4).unwrap();
            let (mean, se) = mean_and_standard_error(&b.snr_values);
            assert!((mean - 3.0).abs() < 4.0 * se, "{model:?}: {mean} ± {se}");
        }
    }

    #[test]
    fn csv_and_sidecar() {
        let b = SampleBatch { snr_values: vec![1.0, 0.25], seed: 3, model_tag: "x".into(), gamma_bar_target: 10.0 };
        let mut out = Vec::new();
        b.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "snr\n1.000000000000e+00\n2.500000000000e-01\n");
        let s = b.sidecar();
        assert_eq!((s.count, s.gamma_bar_db), (2, 10.0));
    }
}
