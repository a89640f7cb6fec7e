mod args;
mod error;
mod figures;
mod output;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fadinglab::capacity::{asymptotic_capacity, ergodic_capacity_mc, ergodic_capacity_quadrature, loss_special_case};
use fadinglab::channel_models::{pdf_model, reduce_to_shadowed, CdfTable, LimitPolicy, ShadowedParams};
use fadinglab::sampler::{sample_common_shadow, sample_conditional, sample_iid_shadow, GenerativeModel, SampleBatch};
use fadinglab::stats::chi_square_equal_probability;
use serde_json::json;

use args::{linear_to_db, parse_grid, Engine, Format, ModelArgs, OutputArgs};
use error::{CliError, CliResult};
use output::{emit, Cell, Table};

#[derive(Debug, Parser)]
#[command(name = "fadinglab", version, about = "κ-μ shadowed fading: densities, capacity losses, samples and figure data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the SNR density on a grid.
    Pdf(PdfArgs),
    /// Print the high-SNR capacity loss.
    Loss(LossArgs),
    /// Exact (quadrature) and asymptotic ergodic capacity, optionally Monte Carlo.
    Capacity(CapacityArgs),
    /// Write the CSV files behind a figure.
    Figure(FigureArgs),
    /// Draw SNR samples.
    Sample(SampleArgs),
    /// Run the invariant suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SeedArgs {
    #[arg(long, env = "FADINGLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct PdfArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// SNR grid start:stop:step (inclusive, linear units).
    #[arg(long, default_value = "0:5:0.1")]
    grid: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct LossArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Mean-SNR sweep start:stop:step in dB; overrides --gbar/--gbar-db.
    #[arg(long)]
    grid: Option<String>,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Add a Monte Carlo estimate from this many draws per point.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value = "conditional")]
    engine: Engine,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Figure number, 1 to 8.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=8))]
    id: u8,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    seed: SeedArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "conditional")]
    engine: Engine,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[command(flatten)]
    seed: SeedArgs,
    /// Report a 30-bin chi-square test against the density on stderr.
    #[arg(long)]
    gof: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Use this tolerance for every check instead of the built-in ones.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    seed: SeedArgs,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

const MIN_MC_SAMPLES: usize = 1_000;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Pdf(a) => cmd_pdf(a),
        Command::Loss(a) => cmd_loss(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                eprintln!("fadinglab: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn model_meta(a: &ModelArgs, gamma_bar: f64) -> serde_json::Value {
    json!({
        "model": a.model.token(),
        "gbar_linear": gamma_bar,
        "gbar_db": linear_to_db(gamma_bar),
    })
}

fn cmd_pdf(a: PdfArgs) -> CliResult<()> {
    let model = a.model.model()?;
    let grid = parse_grid(&a.grid)?;
    if grid[0] < 0.0 {
        return Err(CliError::Usage("SNR grid must start at a value >= 0".into()));
    }
    let mut t = Table::new(&["gamma", "density"]);
    for &g in &grid {
        let f = pdf_model(&model, g).map_err(|e| CliError::at(e, format!("{}, gamma={g}", model.label())))?;
        t.push(vec![g, f]);
    }
    emit(&t.render(a.output.format, model_meta(&a.model, model.gamma_bar())), a.output.out.as_deref())
}

fn cmd_loss(a: LossArgs) -> CliResult<()> {
    let model = a.model.model()?;
    let loss = loss_special_case(&model).map_err(|e| CliError::at(e, model.label()))?;
    let mut t = Table::new(&["model", "loss_bits"]);
    t.push_cells(vec![Cell::Text(a.model.model.token().into()), Cell::Num(loss.loss_bits)]);
    emit(&t.render(a.output.format, json!({ "model": a.model.model.token(), "label": model.label() })), a.output.out.as_deref())
}

fn shadowed_params(model_args: &ModelArgs, gamma_bar: f64) -> CliResult<ShadowedParams> {
    let model = model_args.model_at(gamma_bar)?;
    Ok(reduce_to_shadowed(&model, &LimitPolicy::default())?)
}

fn integer_mu(p: &ShadowedParams) -> CliResult<u32> {
    let mu = p.mu();
    if mu >= 1.0 && mu.fract() == 0.0 && mu <= u32::MAX as f64 {
        Ok(mu as u32)
    } else {
        Err(CliError::Usage(format!("physical engines require integer μ >= 1, got μ = {mu}")))
    }
}

fn draw(engine: Engine, p: &ShadowedParams, count: usize, seed: u64) -> CliResult<SampleBatch> {
    let batch = match engine {
        Engine::Conditional => sample_conditional(p, count, seed)?,
        Engine::Common | Engine::Physical => {
            let model = GenerativeModel::common_shadow_for(p.kappa(), integer_mu(p)?, p.m())?;
            sample_common_shadow(&model, p.gamma_bar(), count, seed)?
        }
        Engine::Iid => {
            let model = GenerativeModel::iid_shadow_for(p.kappa(), integer_mu(p)?, p.m())?;
            sample_iid_shadow(&model, p.gamma_bar(), count, seed)?
        }
    };
    Ok(batch)
}

fn cmd_capacity(a: CapacityArgs) -> CliResult<()> {
    if let Some(n) = a.samples {
        if n < MIN_MC_SAMPLES {
            return Err(CliError::Usage(format!("--samples must be >= {MIN_MC_SAMPLES}, got {n}")));
        }
    }
    let gbars: Vec<f64> = match &a.grid {
        Some(spec) => parse_grid(spec)?.into_iter().map(args::db_to_linear).collect(),
        None => vec![a.model.gamma_bar()],
    };
    let mut columns = vec!["gbar_db", "gbar_linear", "capacity_quadrature", "capacity_asymptotic"];
    if a.samples.is_some() {
        columns.extend(["capacity_mc", "mc_std_error"]);
    }
    let mut t = Table::new(&columns);
    for &g in &gbars {
        let model = a.model.model_at(g)?;
        let at = |e| CliError::at(e, format!("{}, gbar={g}", model.label()));
        let exact = ergodic_capacity_quadrature(&model, g, a.tol).map_err(at)?;
        let asym = asymptotic_capacity(&model, g).map_err(at)?;
        let mut row = vec![linear_to_db(g), g, exact, asym];
        if let Some(n) = a.samples {
            let batch = draw(a.engine, &shadowed_params(&a.model, g)?, n, a.seed.seed)?;
            let est = ergodic_capacity_mc(&batch)?;
            row.extend([est.mean, est.std_error]);
        }
        t.push(row);
    }
    let meta = json!({ "model": a.model.model.token(), "seed": a.seed.seed, "samples": a.samples });
    emit(&t.render(a.output.format, meta), a.output.out.as_deref())
}

fn cmd_figure(a: FigureArgs) -> CliResult<()> {
    for path in figures::write(a.id, &a.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn cmd_sample(a: SampleArgs) -> CliResult<()> {
    if a.samples < 1 {
        return Err(CliError::Usage("--samples must be >= 1".into()));
    }
    let p = shadowed_params(&a.model, a.model.gamma_bar())?;
    let mut batch = draw(a.engine, &p, a.samples, a.seed.seed)?;
    batch.model_tag = format!("{} via {}", a.model.model_at(p.gamma_bar())?.label(), batch.model_tag);

    match a.output.format {
        Format::Csv => {
            let mut csv = Vec::new();
            batch.write_csv(&mut csv)?;
            match &a.output.out {
                Some(path) => {
                    std::fs::write(path, &csv)?;
                    let mut side = serde_json::to_string_pretty(&batch.sidecar()).expect("sidecar is serializable");
                    side.push('\n');
                    std::fs::write(sidecar_path(path), side)?;
                }
                None => emit(std::str::from_utf8(&csv).expect("CSV is ASCII"), None)?,
            }
        }
        Format::Json => {
            let mut s = serde_json::to_string(&batch).expect("batch is serializable");
            s.push('\n');
            emit(&s, a.output.out.as_deref())?;
        }
    }

    if a.gof {
        let table = CdfTable::new(&p)?;
        let out = chi_square_equal_probability(&batch.snr_values, &table, 30)?;
        eprintln!(
            "gof: chi2={:.4} dof={} p={:.6}",
            out.statistic, out.degrees_of_freedom, out.p_value
        );
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CliResult<()> {
    if let Some(t) = a.tol {
        if !(t >= 0.0) {
            return Err(CliError::Usage(format!("--tol must be >= 0, got {t}")));
        }
    }
    let report = verify::run(a.seed.seed, a.tol);
    let mut s = serde_json::to_string_pretty(&report).expect("report is serializable");
    s.push('\n');
    emit(&s, a.out.as_deref())?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
