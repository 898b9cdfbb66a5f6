//! `ringpair` — command-line front end: config loading, subcommand
//! dispatch, deterministic runs, JSON/CSV emission.
//!
//! Exit codes: 0 success, 2 input/parse error, 3 numerical failure.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ringpair::counting::{
    coincidence_rates, correlate, extract_pgr, heralded_g2, simulate_tags, DetectionChain,
    PowerSweepRecord, SourceTruth,
};
use ringpair::franson::{
    chsh_margin, fringe_fit, peak_integrals, simulate_franson, FransonConfig,
};
use ringpair::link::{compose_budget, db_chain, marcuse_mfd, v_number, FiberSpec, LossBudget};
use ringpair::material::{fit_dispersion, ResonanceGrid, DEFAULT_FIT_WINDOW};
use ringpair::sfwm::{design_report, ModeTriple};
use ringpair::spectra::{fit_all_resonances, SpectrumTrace};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "ringpair", version, about = "Microresonator photon-pair source toolkit")]
struct Cli {
    /// RNG seed; required by the stochastic subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format for tabular results.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit FSR/dispersion from a resonance-grid CSV (mu,frequency_hz).
    Dispersion(DispersionArgs),
    /// Locate and fit every resonance dip in a transmission trace.
    FitSpectrum(FitSpectrumArgs),
    /// Closed-form design report for a mode-triple JSON.
    Design(DesignArgs),
    /// Simulate time tags and run the coincidence analyses.
    Simulate(SimulateArgs),
    /// Simulate an interferometer phase sweep and fit the fringe.
    Franson(FransonArgs),
    /// Extract the pair-generation rate from a power-sweep CSV.
    ExtractPgr(ExtractArgs),
    /// Compose loss budgets, dB chains and fiber-mode numbers.
    Linkbudget(LinkArgs),
    /// Simulate a power sweep and extract the source parameters.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct DispersionArgs {
    /// Resonance grid CSV with header mu,frequency_hz.
    #[arg(long)]
    grid: PathBuf,
    /// Fit window half-width in FSRs around μ=0.
    #[arg(long, default_value_t = DEFAULT_FIT_WINDOW)]
    window: i32,
}

#[derive(Args)]
struct FitSpectrumArgs {
    /// Transmission trace CSV with header frequency_hz,transmission.
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    min_depth: f64,
    #[arg(long, default_value_t = 100e9)]
    min_separation_hz: f64,
    /// Per-dip fit window half-width as a multiple of 1 GHz.
    #[arg(long, default_value_t = 4.0)]
    window_linewidths: f64,
}

#[derive(Args)]
struct DesignArgs {
    /// ModeTriple JSON file.
    #[arg(long)]
    triple: PathBuf,
    /// Pump powers in W (one report per power).
    #[arg(long, value_delimiter = ',', default_value = "0.001")]
    power: Vec<f64>,
    /// Dimensionless threshold coefficient A.
    #[arg(long)]
    threshold_a: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct SimFixture {
    truth: SourceTruth,
    chain: DetectionChain,
}

#[derive(Args)]
struct SimulateArgs {
    /// Fixture JSON: {"truth": SourceTruth, "chain": DetectionChain}.
    #[arg(long)]
    fixture: PathBuf,
    /// Simulated acquisition, s.
    #[arg(long)]
    duration: f64,
    /// Split the signal channel onto two detectors for g²ₕ.
    #[arg(long, default_value_t = true)]
    hbt: bool,
    #[arg(long, default_value_t = 1e-10)]
    bin_width: f64,
    #[arg(long, default_value_t = 3.2e-8)]
    max_offset: f64,
    /// Coincidence window, s.
    #[arg(long, default_value_t = 0.7e-9)]
    window: f64,
    /// Center of the accidental-estimation window, s.
    #[arg(long, default_value_t = 2.5e-8)]
    accidental_offset: f64,
}

#[derive(Serialize, Deserialize)]
struct FransonFixture {
    truth: SourceTruth,
    chain: DetectionChain,
    config: FransonConfig,
}

#[derive(Args)]
struct FransonArgs {
    /// Fixture JSON: {"truth", "chain", "config"}.
    #[arg(long)]
    fixture: PathBuf,
    /// Phase points in rad.
    #[arg(long, value_delimiter = ',')]
    phases: Vec<f64>,
    #[arg(long)]
    duration: f64,
    #[arg(long, default_value_t = 5e-11)]
    bin_width: f64,
    #[arg(long, default_value_t = 1e-8)]
    max_offset: f64,
}

#[derive(Args)]
struct ExtractArgs {
    /// Power sweep CSV with header power_w,ns_hz,ni_hz,nnet_hz.
    #[arg(long)]
    sweep: PathBuf,
}

#[derive(Serialize, Deserialize, Default)]
struct LinkConfig {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rate_in_hz: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    losses_db: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    budget: Option<LossBudget>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    fiber: Option<FiberSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    thermal_coefficient_hz_per_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    delta_t_k: Option<f64>,
}

#[derive(Args)]
struct LinkArgs {
    /// Link configuration JSON.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Fixture JSON, as for `simulate`.
    #[arg(long)]
    fixture: PathBuf,
    /// Pump powers in W.
    #[arg(long, value_delimiter = ',')]
    powers: Vec<f64>,
    /// Simulated acquisition per power, s.
    #[arg(long)]
    duration: f64,
    #[arg(long, default_value_t = 1e-10)]
    bin_width: f64,
    #[arg(long, default_value_t = 3.2e-8)]
    max_offset: f64,
    #[arg(long, default_value_t = 2e-9)]
    window: f64,
    #[arg(long, default_value_t = 2.5e-8)]
    accidental_offset: f64,
}

enum CliError {
    Input(String),
    Numerical(String),
}

impl From<ringpair::Error> for CliError {
    fn from(e: ringpair::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON parse error: {e}"))
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let file = File::open(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_reader(file)?)
}

/// Every artifact embeds the tool version, the resolved config echo
/// and the seed so a run can be reproduced from its own output.
fn envelope(config: Value, seed: Option<u64>, result: Value) -> Value {
    json!({
        "version": VERSION,
        "config": config,
        "seed": seed,
        "result": result,
    })
}

fn emit(out: &Option<PathBuf>, name: &str, doc: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).expect("report serialization");
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let mut f = File::create(dir.join(name))?;
            f.write_all(text.as_bytes())?;
            f.write_all(b"\n")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn write_csv(out: &Option<PathBuf>, name: &str, body: &[u8]) -> CliResult<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), body)?;
        }
        None => {
            std::io::stdout().write_all(body)?;
        }
    }
    Ok(())
}

fn require_seed(seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| CliError::Input("--seed is required for stochastic commands".into()))
}

fn cmd_dispersion(cli: &Cli, args: &DispersionArgs) -> CliResult<()> {
    let file = File::open(&args.grid)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.grid.display())))?;
    let grid = ResonanceGrid::from_csv(file)?;
    let fit = fit_dispersion(&grid, (-args.window, args.window))?;
    let config = json!({"grid": args.grid.display().to_string(), "window": args.window});
    let result = serde_json::to_value(&fit).expect("fit serialization");
    emit(&cli.out, "dispersion.json", &envelope(config, None, result))
}

fn cmd_fit_spectrum(cli: &Cli, args: &FitSpectrumArgs) -> CliResult<()> {
    let file = File::open(&args.trace)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.trace.display())))?;
    let trace = SpectrumTrace::from_csv(file)?;
    let reports = fit_all_resonances(
        &trace,
        args.min_depth,
        args.min_separation_hz,
        args.window_linewidths,
    )?;
    let config = json!({
        "trace": args.trace.display().to_string(),
        "min_depth": args.min_depth,
        "min_separation_hz": args.min_separation_hz,
    });
    let result = serde_json::to_value(&reports).expect("report serialization");
    emit(&cli.out, "resonances.json", &envelope(config, None, result))
}

fn cmd_design(cli: &Cli, args: &DesignArgs) -> CliResult<()> {
    let triple: ModeTriple = read_json(&args.triple)?;
    let mut reports = Vec::new();
    let mut powers = args.power.clone();
    powers.sort_by(|a, b| a.total_cmp(b));
    for &p in &powers {
        reports.push(serde_json::to_value(design_report(&triple, p, args.threshold_a)?)
            .expect("report serialization"));
    }
    let config = json!({
        "triple": serde_json::to_value(&triple).expect("triple echo"),
        "power": powers,
        "threshold_a": args.threshold_a,
    });
    emit(&cli.out, "design.json", &envelope(config, None, Value::Array(reports)))
}

fn cmd_simulate(cli: &Cli, args: &SimulateArgs) -> CliResult<()> {
    let seed = require_seed(cli.seed)?;
    let fixture: SimFixture = read_json(&args.fixture)?;
    let streams = simulate_tags(&fixture.truth, &fixture.chain, args.duration, seed, args.hbt)?;
    for s in &streams {
        let mut buf = Vec::new();
        s.to_csv(&mut buf)?;
        write_csv(&cli.out, &format!("tags_{}.csv", s.channel), &buf)?;
    }
    let (signal, idler) = if args.hbt {
        // Merge both signal detectors for the pair histogram.
        let mut merged = streams[0].clone();
        merged.tags.extend_from_slice(&streams[1].tags);
        merged.tags.sort_by(|a, b| a.total_cmp(b));
        merged.channel = "signal".into();
        (merged, &streams[2])
    } else {
        (streams[0].clone(), &streams[1])
    };
    let hist = correlate(&signal, idler, args.bin_width, args.max_offset)?;
    let mut buf = Vec::new();
    hist.to_csv(&mut buf)?;
    write_csv(&cli.out, "histogram.csv", &buf)?;

    let rates = coincidence_rates(&hist, args.window, args.accidental_offset).ok();
    let g2 = if args.hbt {
        heralded_g2(&streams[2], &streams[0], &streams[1], args.window).ok()
    } else {
        None
    };
    let config = json!({
        "fixture": serde_json::to_value(&fixture).expect("fixture echo"),
        "duration": args.duration,
        "hbt": args.hbt,
        "bin_width": args.bin_width,
        "max_offset": args.max_offset,
        "window": args.window,
        "accidental_offset": args.accidental_offset,
    });
    let result = json!({
        "singles_hz": streams.iter().map(|s| json!({"channel": s.channel, "rate_hz": s.rate_hz()})).collect::<Vec<_>>(),
        "coincidences": rates,
        "g2h": g2.map(|(v, s)| json!({"value": v, "sigma": s})),
        "histogram_fwhm_s": hist.fwhm_s().ok(),
    });
    emit(&cli.out, "analysis.json", &envelope(config, Some(seed), result))
}

fn cmd_franson(cli: &Cli, args: &FransonArgs) -> CliResult<()> {
    let seed = require_seed(cli.seed)?;
    let fixture: FransonFixture = read_json(&args.fixture)?;
    if args.phases.is_empty() {
        return Err(CliError::Input("at least one phase point is required".into()));
    }
    let mut rows = Vec::new();
    for (i, &phase) in args.phases.iter().enumerate() {
        let mut cfg = fixture.config.clone();
        cfg.phase_rad = phase;
        let hist = simulate_franson(
            &fixture.truth,
            &cfg,
            &fixture.chain,
            args.duration,
            seed.wrapping_add(i as u64),
            args.bin_width,
            args.max_offset,
        )?;
        let (left, center, right) = peak_integrals(&hist, cfg.delta_t_s, cfg.window_s);
        rows.push((phase, center as f64 / hist.acquisition_s, left, right));
    }
    let mut csv_body = String::from("phase_rad,ncc_hz\n");
    for &(phase, rate, ..) in &rows {
        csv_body.push_str(&format!("{phase:.9},{rate:.9e}\n"));
    }
    write_csv(&cli.out, "fringe.csv", csv_body.as_bytes())?;

    let phases: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let rates: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let fit = fringe_fit(&phases, &rates)?;
    let (passes, margin) = chsh_margin(fit.visibility.clamp(0.0, 1.0))?;
    let config = json!({
        "fixture": serde_json::to_value(&fixture).expect("fixture echo"),
        "phases": phases,
        "duration": args.duration,
    });
    let result = json!({
        "fit": fit,
        "chsh": {"passes": passes, "margin": margin},
        "side_peaks": rows.iter().map(|r| json!([r.2, r.3])).collect::<Vec<_>>(),
    });
    emit(&cli.out, "franson.json", &envelope(config, Some(seed), result))
}

fn cmd_extract(cli: &Cli, args: &ExtractArgs) -> CliResult<()> {
    let file = File::open(&args.sweep)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.sweep.display())))?;
    let sweep = PowerSweepRecord::from_csv(file)?;
    let extraction = extract_pgr(&sweep)?;
    let config = json!({"sweep": args.sweep.display().to_string()});
    let result = serde_json::to_value(&extraction).expect("report serialization");
    emit(&cli.out, "extraction.json", &envelope(config, None, result))
}

fn cmd_linkbudget(cli: &Cli, args: &LinkArgs) -> CliResult<()> {
    let config: LinkConfig = read_json(&args.config)?;
    let mut result = serde_json::Map::new();
    if let Some(rate) = config.rate_in_hz {
        result.insert(
            "rate_out_hz".into(),
            json!(db_chain(rate, &config.losses_db)?),
        );
    }
    if let Some(budget) = &config.budget {
        result.insert("budget".into(), json!(compose_budget(budget)?));
    }
    if let Some(fiber) = &config.fiber {
        let (v, single_mode) = v_number(fiber)?;
        result.insert(
            "fiber".into(),
            json!({
                "v_number": v,
                "single_mode": single_mode,
                "mfd_um": marcuse_mfd(fiber)?,
            }),
        );
    }
    if let (Some(coeff), Some(dt)) = (config.thermal_coefficient_hz_per_k, config.delta_t_k) {
        result.insert(
            "thermal_shift_hz".into(),
            json!(ringpair::link::thermal_shift(coeff, dt)),
        );
    }
    let config_echo = serde_json::to_value(&config).expect("config echo");
    emit(
        &cli.out,
        "linkbudget.json",
        &envelope(config_echo, None, Value::Object(result)),
    )
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    let seed = require_seed(cli.seed)?;
    let fixture: SimFixture = read_json(&args.fixture)?;
    if args.powers.len() < 4 {
        return Err(CliError::Input("sweep needs ≥ 4 powers".into()));
    }
    let mut powers = args.powers.clone();
    powers.sort_by(|a, b| a.total_cmp(b));
    let mut rows = Vec::new();
    for (i, &p) in powers.iter().enumerate() {
        let truth = fixture.truth.with_power(p);
        let streams = simulate_tags(
            &truth,
            &fixture.chain,
            args.duration,
            seed.wrapping_add(i as u64),
            false,
        )?;
        let hist = correlate(&streams[0], &streams[1], args.bin_width, args.max_offset)?;
        let rates = coincidence_rates(&hist, args.window, args.accidental_offset)?;
        rows.push((p, streams[0].rate_hz(), streams[1].rate_hz(), rates.n_net_hz));
    }
    let record = PowerSweepRecord { rows };
    let mut buf = Vec::new();
    record.to_csv(&mut buf)?;
    write_csv(&cli.out, "sweep.csv", &buf)?;
    let extraction = extract_pgr(&record)?;
    let config = json!({
        "fixture": serde_json::to_value(&fixture).expect("fixture echo"),
        "powers": powers,
        "duration": args.duration,
    });
    let result = serde_json::to_value(&extraction).expect("report serialization");
    emit(&cli.out, "extraction.json", &envelope(config, Some(seed), result))
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Dispersion(args) => cmd_dispersion(cli, args),
        Command::FitSpectrum(args) => cmd_fit_spectrum(cli, args),
        Command::Design(args) => cmd_design(cli, args),
        Command::Simulate(args) => cmd_simulate(cli, args),
        Command::Franson(args) => cmd_franson(cli, args),
        Command::ExtractPgr(args) => cmd_extract(cli, args),
        Command::Linkbudget(args) => cmd_linkbudget(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
