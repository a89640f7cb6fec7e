//! Quick invariant suite behind `fadinglab verify`.

use std::f64::consts::{E, LOG2_E};

use fadinglab::capacity::{
    ergodic_capacity_quadrature, loss_eta_mu, loss_finite_difference, loss_kappa_mu, loss_kappa_mu_shadowed,
    loss_special_case, FD_STEP,
};
use fadinglab::channel_models::{
    expectation, moment, pdf_eta_mu, pdf_gamma, pdf_kappa_mu_shadowed, FadingModel, ShadowedParams,
};
use fadinglab::quadrature::QuadOptions;
use fadinglab::sampler::sample_conditional;
use fadinglab::specfun::upper_incomplete_gamma;
use fadinglab::stats::mean_and_standard_error;
use serde::Serialize;

pub const SCHEMA: &str = "fadinglab.verify/1";

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Error measure; the check passes when it does not exceed `tolerance`.
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Probe {
    name: &'static str,
    tolerance: f64,
    detail: &'static str,
    run: fn(u64) -> fadinglab::Result<f64>,
}

fn sup_on_grid(f: impl Fn(f64) -> fadinglab::Result<f64>, g: impl Fn(f64) -> fadinglab::Result<f64>) -> fadinglab::Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..=50 {
        let x = 6.0 * i as f64 / 50.0;
        worst = worst.max((f(x)? - g(x)?).abs());
    }
    Ok(worst)
}

fn loss_of(model: FadingModel) -> fadinglab::Result<f64> {
    Ok(loss_special_case(&model)?.loss_bits)
}

const PROBES: &[Probe] = &[
    Probe {
        name: "rayleigh_loss_anchor",
        tolerance: 5e-4,
        detail: "|L_rayleigh - 0.8327|",
        run: |_| Ok((loss_of(FadingModel::Rayleigh { gamma_bar: 1.0 })? - 0.8327).abs()),
    },
    Probe {
        name: "one_sided_gaussian_loss_anchor",
        tolerance: 5e-4,
        detail: "|L_osg - 1.8327|",
        run: |_| Ok((loss_of(FadingModel::OneSidedGaussian { gamma_bar: 1.0 })? - 1.8327).abs()),
    },
    Probe {
        name: "density_normalization",
        tolerance: 1e-8,
        detail: "|integral of f - 1| for (kappa, mu, m) = (1.5, 1.2, 2.3)",
        run: |_| {
            let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0)?;
            Ok((expectation(&p, |_| 1.0, &QuadOptions::new(1e-12, 1e-12))? - 1.0).abs())
        },
    },
    Probe {
        name: "eta_mu_density_identity",
        tolerance: 1e-10,
        detail: "sup |f_eta_mu - f_shadowed| on 50 points, eta=0.5, mu=1.2",
        run: |_| {
            let p = ShadowedParams::new(0.5, 2.4, 1.2, 1.0)?;
            sup_on_grid(|x| pdf_eta_mu(0.5, 1.2, 1.0, x), |x| pdf_kappa_mu_shadowed(&p, x))
        },
    },
    Probe {
        name: "gamma_density_identity",
        tolerance: 1e-10,
        detail: "sup |f_gamma - f_shadowed| on 50 points, m = mu = 2.5, kappa = 4",
        run: |_| {
            let p = ShadowedParams::new(4.0, 2.5, 2.5, 1.0)?;
            sup_on_grid(|x| pdf_gamma(2.5, 2.5, x), |x| pdf_kappa_mu_shadowed(&p, x))
        },
    },
    Probe {
        name: "eta_mu_loss_identity",
        tolerance: 1e-9,
        detail: "|L_eta_mu(0.5, 1.2) - L_shadowed(0.5, 2.4, 1.2)|",
        run: |_| Ok((loss_eta_mu(0.5, 1.2)?.loss_bits - loss_kappa_mu_shadowed(0.5, 2.4, 1.2)?.loss_bits).abs()),
    },
    Probe {
        name: "nakagami_loss_identity",
        tolerance: 1e-9,
        detail: "|L_shadowed(5, 2, 2) - L_nakagami(2)|",
        run: |_| {
            let naka = loss_of(FadingModel::NakagamiM { m: 2.0, gamma_bar: 1.0 })?;
            Ok((loss_kappa_mu_shadowed(5.0, 2.0, 2.0)?.loss_bits - naka).abs())
        },
    },
    Probe {
        name: "rician_loss_identity",
        tolerance: 1e-9,
        detail: "|L_rician(10) - L_kappa_mu(10, 1)|",
        run: |_| Ok((loss_of(FadingModel::Rician { k: 10.0, gamma_bar: 1.0 })? - loss_kappa_mu(10.0, 1.0)?.loss_bits).abs()),
    },
    Probe {
        name: "kappa_mu_shadowed_surrogate",
        tolerance: 1e-4,
        detail: "|L_kappa_mu(2.7, 2.4) - L_shadowed(2.7, 2.4, 1e6)|",
        run: |_| Ok((loss_kappa_mu(2.7, 2.4)?.loss_bits - loss_kappa_mu_shadowed(2.7, 2.4, 1e6)?.loss_bits).abs()),
    },
    Probe {
        name: "eta_mu_symmetry",
        tolerance: 1e-9,
        detail: "max |L(eta, 1.2) - L(1/eta, 1.2)| over eta in {0.01, 0.1, 0.5}",
        run: |_| {
            let mut w: f64 = 0.0;
            for eta in [0.01, 0.1, 0.5] {
                w = w.max((loss_eta_mu(eta, 1.2)?.loss_bits - loss_eta_mu(1.0 / eta, 1.2)?.loss_bits).abs());
            }
            Ok(w)
        },
    },
    Probe {
        name: "moment_oracle",
        tolerance: 1e-8,
        detail: "max relative error of E[g^n], n = 1..4, closed form vs quadrature at (1.5, 1.2, 2.3)",
        run: |_| {
            let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0)?;
            let mut w: f64 = 0.0;
            for n in 1..=4 {
                let closed = moment(&p, n as f64)?;
                let quad = expectation(&p, |g| g.powi(n), &QuadOptions::new(1e-14, 1e-12))?;
                w = w.max(((closed - quad) / closed).abs());
            }
            Ok(w)
        },
    },
    Probe {
        name: "loss_derivative_oracle",
        tolerance: 1e-5,
        detail: "|closed-form loss - finite-difference dAF/dn| at (1.5, 1.2, 2.3)",
        run: |_| {
            let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0)?;
            Ok((loss_kappa_mu_shadowed(1.5, 1.2, 2.3)?.loss_bits - loss_finite_difference(&p, FD_STEP)?).abs())
        },
    },
    Probe {
        name: "rayleigh_capacity_oracle",
        tolerance: 1e-8,
        detail: "|quadrature capacity - e*E1(1)/ln 2| at gbar = 1",
        run: |_| {
            let oracle = E * upper_incomplete_gamma(0.0, 1.0)? * LOG2_E;
            Ok((ergodic_capacity_quadrature(&FadingModel::Rayleigh { gamma_bar: 1.0 }, 1.0, 1e-11)? - oracle).abs())
        },
    },
    Probe {
        name: "sampler_mean",
        tolerance: 4.0,
        detail: "|sample mean - gbar| / standard error, 1e5 conditional draws at (1.5, 1.2, 2.3)",
        run: |seed| {
            let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0)?;
            let b = sample_conditional(&p, 100_000, seed)?;
            let (mean, se) = mean_and_standard_error(&b.snr_values);
            Ok((mean - 1.0).abs() / se)
        },
    },
];

/// Runs every check. `tol_override` replaces each check's tolerance.
pub fn run(seed: u64, tol_override: Option<f64>) -> Report {
    let checks: Vec<Check> = PROBES
        .iter()
        .map(|probe| {
            let tolerance = tol_override.unwrap_or(probe.tolerance);
            match (probe.run)(seed) {
                Ok(observed) => Check {
                    name: probe.name,
                    passed: observed <= tolerance,
                    observed,
                    tolerance,
                    detail: probe.detail.to_string(),
                },
                Err(e) => Check {
                    name: probe.name,
                    passed: false,
                    observed: f64::NAN,
                    tolerance,
                    detail: format!("{}: error: {e}", probe.detail),
                },
            }
        })
        .collect();
    Report {
        schema: SCHEMA,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
