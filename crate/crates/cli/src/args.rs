use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fadinglab::channel_models::FadingModel;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Osg,
    Rayleigh,
    Nakagami,
    Hoyt,
    Rician,
    Kmu,
    Emu,
    Rs,
    Kms,
}

impl ModelKind {
    pub fn token(self) -> &'static str {
        match self {
            ModelKind::Osg => "osg",
            ModelKind::Rayleigh => "rayleigh",
            ModelKind::Nakagami => "nakagami",
            ModelKind::Hoyt => "hoyt",
            ModelKind::Rician => "rician",
            ModelKind::Kmu => "kmu",
            ModelKind::Emu => "emu",
            ModelKind::Rs => "rs",
            ModelKind::Kms => "kms",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Fading model.
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Shadowing severity (rs, kms) or Nakagami m.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Hoyt parameter, 0 < q <= 1.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Rician factor.
    #[arg(long = "K", allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Mean SNR, linear.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "gbar_db")]
    pub gbar: Option<f64>,
    /// Mean SNR in dB.
    #[arg(long = "gbar-db", allow_negative_numbers = true)]
    pub gbar_db: Option<f64>,
}

fn need(value: Option<f64>, flag: &str, model: ModelKind) -> CliResult<f64> {
    value.ok_or_else(|| CliError::Usage(format!("--model {} requires --{flag}", model.token())))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl ModelArgs {
    pub fn gamma_bar(&self) -> f64 {
        match (self.gbar, self.gbar_db) {
            (Some(g), _) => g,
            (None, Some(db)) => db_to_linear(db),
            (None, None) => 1.0,
        }
    }

    /// The model at the mean SNR given by the flags, with every native
    /// parameter checked.
    pub fn model(&self) -> CliResult<FadingModel> {
        self.model_at(self.gamma_bar())
    }

    pub fn model_at(&self, gamma_bar: f64) -> CliResult<FadingModel> {
        let kind = self.model;
        let model = match kind {
            ModelKind::Osg => FadingModel::OneSidedGaussian { gamma_bar },
            ModelKind::Rayleigh => FadingModel::Rayleigh { gamma_bar },
            ModelKind::Nakagami => FadingModel::NakagamiM { m: need(self.m, "m", kind)?, gamma_bar },
            ModelKind::Hoyt => FadingModel::NakagamiQ { q: need(self.q, "q", kind)?, gamma_bar },
            ModelKind::Rician => FadingModel::Rician { k: need(self.k, "K", kind)?, gamma_bar },
            ModelKind::Kmu => FadingModel::KappaMu {
                kappa: need(self.kappa, "kappa", kind)?,
                mu: need(self.mu, "mu", kind)?,
                gamma_bar,
            },
            ModelKind::Emu => FadingModel::EtaMu {
                eta: need(self.eta, "eta", kind)?,
                mu: need(self.mu, "mu", kind)?,
                gamma_bar,
            },
            ModelKind::Rs => FadingModel::RicianShadowed {
                k: need(self.k, "K", kind)?,
                m: need(self.m, "m", kind)?,
                gamma_bar,
            },
            ModelKind::Kms => FadingModel::KappaMuShadowed {
                kappa: need(self.kappa, "kappa", kind)?,
                mu: need(self.mu, "mu", kind)?,
                m: need(self.m, "m", kind)?,
                gamma_bar,
            },
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Gamma–Poisson–Gamma hierarchy, any real μ.
    Conditional,
    /// Common shadow across clusters; integer μ.
    Common,
    /// Independent per-cluster shadows; integer μ.
    Iid,
    /// Alias of `common`.
    Physical,
}

/// Parses an inclusive `start:stop:step` grid.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("grid must be start:stop:step with step > 0 and stop >= start, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !nums.iter().all(|v| v.is_finite()) || !(step > 0.0) || stop < start {
        return Err(bad());
    }
    let span = (stop - start) / step;
    // Tolerate representation error in the step so that 0:5:0.1 has 51 points.
    let count = (span + 1e-9 * span.max(1.0)).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(CliError::Usage(format!("grid '{spec}' has too many points")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}
