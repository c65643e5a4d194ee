//! `lhp4d`: build, inspect and simulate lifted-product codes.

mod config;

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lhp4d_core::chain4d::{self, build_complex, parse_seed_file, preset, to_css, validate_chain, FourSeeds, SeedMapping};
use lhp4d_core::montecarlo::{read_rows, run_grid_point, write_rows, ResultRow};
use lhp4d_core::product::CssCode;
use thiserror::Error;

use config::ExperimentConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "lhp4d", version, about = "Bias-tailored lifted-product codes with single-shot BP+OSD decoding")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write it to a code file.
    Build(BuildArgs),
    /// Report dimensions, ranks, weights and validity of a code file.
    Inspect { file: PathBuf },
    /// Run the experiment grid described by a config file.
    Simulate {
        config: PathBuf,
        /// Overrides `run.output`.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run several config files in sequence.
    Sweep {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct BuildArgs {
    /// Named preset (paper-L<lift>, trivial-scalar, rep2).
    #[arg(long, conflicts_with = "seeds")]
    preset: Option<String>,
    /// Preset name or a seed file with sections [A]..[D].
    #[arg(long)]
    seeds: Option<String>,
    /// Seed mapping for the seed-protograph presets: rows, quadrants, default, or
    /// r0:r1,c0:c1/... blocks.
    #[arg(long)]
    mapping: Option<String>,
    /// Lift for seed files (presets carry their own).
    #[arg(long, default_value_t = 3)]
    lift: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Build(args) => cmd_build(&args, &mut out),
        Command::Inspect { file } => cmd_inspect(&file, &mut out),
        Command::Simulate { config, output } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(o) = output {
                cfg.run.output = o;
            }
            cmd_simulate(&cfg, &mut out)
        }
        Command::Sweep { configs } => {
            for path in configs {
                writeln!(out, "== {}", path.display()).map_err(io_err)?;
                let cfg = ExperimentConfig::load(&path)?;
                cmd_simulate(&cfg, &mut out)?;
            }
            Ok(())
        }
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn chain_err(e: chain4d::ChainError) -> CliError {
    CliError::Validation(e.to_string())
}

fn is_preset(source: &str) -> bool {
    chain4d::PRESET_NAMES.contains(&source) || source.starts_with("paper-L")
}

/// Resolves a preset name or a seed file.
fn load_seeds(source: &str, mapping: Option<&SeedMapping>, lift: usize) -> Result<FourSeeds, CliError> {
    if is_preset(source) {
        return preset(source, mapping).map_err(chain_err);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| CliError::Validation(format!("{source:?} is neither a preset nor a readable seed file: {e}")))?;
    parse_seed_file(&text, lift).map_err(|e| CliError::Validation(format!("{source}: {e}")))
}

fn build_code(source: &str, mapping: Option<&str>, lift: usize) -> Result<CssCode, CliError> {
    let mapping = mapping.map(SeedMapping::parse).transpose().map_err(chain_err)?;
    let cc = build_complex(&load_seeds(source, mapping.as_ref(), lift)?).map_err(chain_err)?;
    to_css(&cc).map_err(chain_err)
}

fn cmd_build(args: &BuildArgs, out: &mut impl Write) -> Result<(), CliError> {
    let source = args
        .preset
        .as_deref()
        .or(args.seeds.as_deref())
        .ok_or_else(|| CliError::Usage("give --preset or --seeds".into()))?;
    let mapping = args.mapping.as_deref().map(SeedMapping::parse).transpose().map_err(chain_err)?;
    let cc = build_complex(&load_seeds(source, mapping.as_ref(), args.lift)?).map_err(chain_err)?;
    let report = validate_chain(&cc);
    let code = to_css(&cc).map_err(chain_err)?;
    writeln!(out, "{report}").map_err(io_err)?;
    if source.starts_with("paper-L") {
        let m = mapping.unwrap_or_else(SeedMapping::preset_default);
        writeln!(out, "seed mapping: {m}").map_err(io_err)?;
        writeln!(out, "achieved [[n, k]] = [[{}, {}]]; target [[384, 48, 6]]", code.n, code.k).map_err(io_err)?;
    }
    writeln!(
        out,
        "k check: n - rank(hx) - rank(hz) = {} - {} - {} = {}",
        code.n,
        report.rank_hx,
        report.rank_hz,
        code.n - report.rank_hx - report.rank_hz
    )
    .map_err(io_err)?;
    if let Some(path) = &args.output {
        std::fs::write(path, code.export()).map_err(io_err)?;
        writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    }
    Ok(())
}

fn weight_summary(w: &[usize]) -> String {
    if w.is_empty() {
        return "none".into();
    }
    let mut hist = std::collections::BTreeMap::new();
    for &x in w {
        *hist.entry(x).or_insert(0usize) += 1;
    }
    let mean = w.iter().sum::<usize>() as f64 / w.len() as f64;
    let parts: Vec<String> = hist.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("mean {mean:.2} [{}]", parts.join(" "))
}

fn cmd_inspect(path: &Path, out: &mut impl Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let code = CssCode::import(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let mut w = |s: String| writeln!(out, "{s}").map_err(io_err);
    w(format!("n = {}, k (recorded) = {}, split = {}", code.n, code.k, code.split))?;
    let rx = code.hx.rank();
    let rz = code.hz.rank();
    w(format!("hx {}x{} rank {rx}", code.hx.rows(), code.hx.cols()))?;
    w(format!("hz {}x{} rank {rz}", code.hz.rows(), code.hz.cols()))?;
    for (name, m) in [("mx", &code.mx), ("mz", &code.mz)] {
        match m {
            Some(m) => w(format!("{name} {}x{} rank {}", m.rows(), m.cols(), m.rank()))?,
            None => w(format!("{name} absent"))?,
        }
    }
    w(format!("k (n - rank hx - rank hz) = {}", code.n as i64 - rx as i64 - rz as i64))?;
    let mut rows = code.hx.row_weights();
    rows.extend(code.hz.row_weights());
    w(format!("stabilizer row weights: {}", weight_summary(&rows)))?;
    w(format!("hx column weights: {}", weight_summary(&code.hx.col_weights())))?;
    w(format!("hz column weights: {}", weight_summary(&code.hz.col_weights())))?;
    for (name, m) in [("mx", &code.mx), ("mz", &code.mz)] {
        if let Some(m) = m {
            w(format!("{name} row weights: {}", weight_summary(&m.row_weights())))?;
            w(format!("{name} column weights: {}", weight_summary(&m.col_weights())))?;
        }
    }
    let consistent_k = code.n >= rx + rz && code.n - rx - rz == code.k;
    match code.check() {
        Ok(()) if consistent_k => {
            w("status: valid (hx·hzᵀ = 0, metachecks annihilate their checks, logicals commute)".into())?;
            Ok(())
        }
        Ok(()) => {
            w("status: INVALID (recorded k disagrees with the ranks)".into())?;
            Err(CliError::Validation(format!("{}: recorded k is inconsistent", path.display())))
        }
        Err(e) => {
            w(format!("status: INVALID ({e})"))?;
            Err(CliError::Validation(format!("{}: {e}", path.display())))
        }
    }
}

fn load_code(cfg: &ExperimentConfig) -> Result<CssCode, CliError> {
    let c = &cfg.code;
    if let Some(path) = &c.code_file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        let code = CssCode::import(&text).map_err(|e| CliError::Validation(e.to_string()))?;
        code.check().map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        return Ok(code);
    }
    let lift = c.lift.unwrap_or(3);
    if let Some(path) = &c.seeds {
        return build_code(&path.to_string_lossy(), c.mapping.as_deref(), lift);
    }
    let name = c.preset.as_deref().unwrap_or("paper-L3");
    build_code(name, c.mapping.as_deref(), lift)
}

fn cmd_simulate(cfg: &ExperimentConfig, out: &mut impl Write) -> Result<(), CliError> {
    let code = load_code(cfg)?;
    let bp = cfg.bp_config()?;
    let grid = cfg.grid()?;
    let path = &cfg.run.output;

    let done: std::collections::HashSet<String> = if path.exists() && std::fs::metadata(path).map_err(io_err)?.len() > 0 {
        let file = File::open(path).map_err(io_err)?;
        read_rows(file)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
            .iter()
            .map(ResultRow::key)
            .collect()
    } else {
        Default::default()
    };
    let needs_header = done.is_empty() && !(path.exists() && std::fs::metadata(path).map_err(io_err)?.len() > 0);
    let sidecar = PathBuf::from(format!("{}.config.toml", path.display()));
    std::fs::write(&sidecar, cfg.resolved()).map_err(io_err)?;

    writeln!(out, "code: n = {}, k = {}; {} grid points -> {}", code.n, code.k, grid.len(), path.display())
        .map_err(io_err)?;
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
    let mut header = needs_header;
    for point in &grid {
        let probe = ResultRow::new(&point.channel, &point.opts, &Default::default(), 0.0);
        if done.contains(&probe.key()) {
            writeln!(out, "skip (done): {}", probe.key()).map_err(io_err)?;
            continue;
        }
        let row = run_grid_point(&code, &point.channel, &bp, &point.opts, cfg.run.record_timing)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        write_rows(&mut file, std::slice::from_ref(&row), header).map_err(|e| CliError::Runtime(e.to_string()))?;
        header = false;
        writeln!(
            out,
            "p={} q={} eta={} tailored={} ss={}: wer {:.4} ± {:.4} ({} / {})",
            row.p, row.q, row.eta, row.tailored, row.single_shot, row.wer, row.wer_stderr, row.failures, row.trials
        )
        .map_err(io_err)?;
    }
    Ok(())
}
