use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use orbit_bergman_cli::{CliError, Command, RunConfig, emit_results, run_experiment};

/// Numerical laboratory for weighted Bergman spaces over Fuchsian orbits.
///
/// Settings come from command defaults, then `--config`, then flags.
#[derive(Parser, Debug)]
#[command(name = "orbit-bergman", version)]
struct Cli {
    /// Subcommand; may instead be given as `command=` in the config file.
    #[arg(value_enum)]
    command: Option<Command>,
    /// key=value file (keys as the long flag names).
    #[arg(long)]
    config: Option<PathBuf>,
    /// pslz or gamma2.
    #[arg(long)]
    preset: Option<String>,
    /// Weights, comma separated.
    #[arg(long)]
    s: Option<String>,
    /// Points as "re+imi"; repeat or separate with commas.
    #[arg(long)]
    z: Vec<String>,
    #[arg(long)]
    budget_word: Option<String>,
    #[arg(long)]
    budget_norm: Option<String>,
    #[arg(long)]
    basis_n: Option<String>,
    /// nx,ny,y_max for fundamental-domain grids.
    #[arg(long)]
    grid: Option<String>,
    /// Disc radii, comma separated and increasing.
    #[arg(long)]
    radii: Option<String>,
    /// Modular weight.
    #[arg(long)]
    k: Option<String>,
    /// e4, e6, delta, cusp, j, eta or rw.
    #[arg(long)]
    form: Option<String>,
    /// Target value of j for the vanishing function.
    #[arg(long)]
    w: Option<String>,
    /// Eta exponent of the vanishing function.
    #[arg(long)]
    r: Option<String>,
    /// Number of orbit points used as constraints.
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// fast or full.
    #[arg(long)]
    level: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut push = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        };
        push("preset", &self.preset);
        push("s", &self.s);
        push("budget_word", &self.budget_word);
        push("budget_norm", &self.budget_norm);
        push("basis_n", &self.basis_n);
        push("grid", &self.grid);
        push("radii", &self.radii);
        push("k", &self.k);
        push("form", &self.form);
        push("w", &self.w);
        push("r", &self.r);
        push("points", &self.points);
        push("out", &self.out);
        push("format", &self.format);
        push("seed", &self.seed);
        push("level", &self.level);
        if !self.z.is_empty() {
            out.push(("z".to_string(), self.z.join(",")));
        }
        out
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("ORBIT_BERGMAN_THREADS").ok().and_then(|v| v.parse::<usize>().ok())
        && n > 0
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::from_sources(cli.command, cli.config.as_deref(), &cli.overrides())?;
    let start = Instant::now();
    let record = run_experiment(&cfg)?;
    eprintln!("elapsed_seconds={:.3}", start.elapsed().as_secs_f64());
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    emit_results(&record, cfg.out.as_deref(), cfg.format)?;
    let failed = cfg.command == Command::Verify && record.payload["passed"] != serde_json::json!(true);
    Ok(!failed)
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let bytes = orbit_bergman_cli::emit::to_json(&e.payload()).unwrap_or_default();
            eprint!("{}", String::from_utf8_lossy(&bytes));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

