//! CSV data for figures 1 to 8: capacity against mean SNR (1, 2) and
//! high-SNR capacity loss sweeps (3 to 8).

use std::fs;
use std::path::{Path, PathBuf};

use fadinglab::capacity::{asymptotic_capacity, ergodic_capacity_quadrature, loss_eta_mu, loss_kappa_mu, loss_kappa_mu_shadowed};
use fadinglab::channel_models::FadingModel;

use crate::args::{db_to_linear, parse_grid};
use crate::error::{CliError, CliResult};
use crate::output::Table;

pub const GBAR_DB_GRID: &str = "0:30:1";
pub const KAPPA_GRID: &str = "0:20:0.1";
pub const MU_SET: [f64; 6] = [0.5, 0.7, 1.0, 1.5, 3.0, 20.0];
/// Shadowing severity of figures 3 to 6.
pub const M_BY_FIGURE: [f64; 4] = [0.5, 1.0, 3.0, 20.0];
pub const QUADRATURE_TOL: f64 = 1e-10;

/// One curve: a file label and the model it plots (`None` is AWGN).
pub struct CapacityCurve {
    pub label: &'static str,
    pub model: Option<FadingModel>,
}

pub fn capacity_curves(figure: u8) -> Vec<CapacityCurve> {
    let g = 1.0;
    let c = |label, model| CapacityCurve { label, model };
    match figure {
        1 => vec![
            c("awgn", None),
            c("rician_k10", Some(FadingModel::Rician { k: 10.0, gamma_bar: g })),
            c("nakagami_m1p5", Some(FadingModel::NakagamiM { m: 1.5, gamma_bar: g })),
            c("rayleigh", Some(FadingModel::Rayleigh { gamma_bar: g })),
            c("hoyt_q0p2", Some(FadingModel::NakagamiQ { q: 0.2, gamma_bar: g })),
            c("osg", Some(FadingModel::OneSidedGaussian { gamma_bar: g })),
        ],
        2 => vec![
            c("awgn", None),
            c("kmu_k2p7_mu2p4", Some(FadingModel::KappaMu { kappa: 2.7, mu: 2.4, gamma_bar: g })),
            c("emu_eta0p5_mu1p2", Some(FadingModel::EtaMu { eta: 0.5, mu: 1.2, gamma_bar: g })),
            c("kms_k1p5_mu1p2_m2p3", Some(FadingModel::KappaMuShadowed { kappa: 1.5, mu: 1.2, m: 2.3, gamma_bar: g })),
        ],
        _ => Vec::new(),
    }
}

/// `0.5` → `0p5`, `20` → `20`.
pub fn number_label(x: f64) -> String {
    format!("{x}").replace('.', "p")
}

/// η grid of figure 8: 10^{−3 + k/20}, k = 0..=120.
pub fn eta_grid() -> Vec<f64> {
    (0..=120).map(|k| 10f64.powf(-3.0 + k as f64 / 20.0)).collect()
}

/// Renders every file of a figure as (file name, table). Stops at the first
/// numerical failure, returning what was produced so far with the error.
pub fn build(figure: u8) -> (Vec<(String, Table)>, Option<CliError>) {
    let mut files = Vec::new();
    let result = match figure {
        1 | 2 => build_capacity(figure, &mut files),
        3..=6 => build_shadowed_loss(figure, M_BY_FIGURE[figure as usize - 3], &mut files),
        7 => build_loss_sweep(figure, "kappa", &parse_grid(KAPPA_GRID).expect("fixed grid"), &mut files, |kappa, mu| {
            loss_kappa_mu(kappa, mu)
        }),
        8 => build_loss_sweep(figure, "eta", &eta_grid(), &mut files, loss_eta_mu),
        _ => Err(CliError::Usage(format!("figure id must be 1..8, got {figure}"))),
    };
    (files, result.err())
}

fn file_name(figure: u8, label: &str) -> String {
    format!("fig{figure}_{label}.csv")
}

fn build_capacity(figure: u8, files: &mut Vec<(String, Table)>) -> CliResult<()> {
    let grid = parse_grid(GBAR_DB_GRID).expect("fixed grid");
    for curve in capacity_curves(figure) {
        let mut t = Table::new(&["gbar_db", "gbar_linear", "capacity_quadrature", "capacity_asymptotic"]);
        let mut failure = None;
        for &db in &grid {
            let g = db_to_linear(db);
            let row = match &curve.model {
                None => Ok((g.ln_1p() * std::f64::consts::LOG2_E, g.log2())),
                Some(model) => ergodic_capacity_quadrature(model, g, QUADRATURE_TOL)
                    .and_then(|c| Ok((c, asymptotic_capacity(model, g)?)))
                    .map_err(|e| CliError::at(e, format!("figure {figure}, {}, gbar_db={db}", curve.label))),
            };
            match row {
                Ok((c, a)) => t.push(vec![db, g, c, a]),
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        files.push((file_name(figure, curve.label), t));
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(())
}

fn build_shadowed_loss(figure: u8, m: f64, files: &mut Vec<(String, Table)>) -> CliResult<()> {
    build_loss_sweep(figure, "kappa", &parse_grid(KAPPA_GRID).expect("fixed grid"), files, |kappa, mu| {
        loss_kappa_mu_shadowed(kappa, mu, m)
    })
}

fn build_loss_sweep<F>(figure: u8, x_name: &str, xs: &[f64], files: &mut Vec<(String, Table)>, loss: F) -> CliResult<()>
where
    F: Fn(f64, f64) -> fadinglab::Result<fadinglab::capacity::CapacityLoss>,
{
    for &mu in &MU_SET {
        let label = format!("mu{}", number_label(mu));
        let mut t = Table::new(&[x_name, "loss_bits"]);
        let mut failure = None;
        for &x in xs {
            match loss(x, mu) {
                Ok(l) => t.push(vec![x, l.loss_bits]),
                Err(e) => {
                    failure = Some(CliError::at(e, format!("figure {figure}, mu={mu}, {x_name}={x}")));
                    break;
                }
            }
        }
        files.push((file_name(figure, &label), t));
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(())
}

/// Writes a figure's files into `dir`. On failure the files produced so far
/// are written with a `.partial.csv` suffix on the one that stopped.
pub fn write(figure: u8, dir: &Path) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let (files, failure) = build(figure);
    let count = files.len();
    let mut written = Vec::with_capacity(count);
    for (i, (name, table)) in files.into_iter().enumerate() {
        let name = if failure.is_some() && i + 1 == count {
            name.replace(".csv", ".partial.csv")
        } else {
            name
        };
        let path = dir.join(name);
        fs::write(&path, table.to_csv())?;
        written.push(path);
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(written),
    }
}
