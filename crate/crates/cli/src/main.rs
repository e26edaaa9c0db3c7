use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clfsec::config::ScenarioConfig;
use clfsec::pipeline::{self, RunOptions};
use clfsec::Error;

/// Security evaluation of pattern classifiers under simulated attacks.
#[derive(Debug, Parser)]
#[command(name = "clfsec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest the configured data and write canonical dataset files.
    Prepare(RunArgs),
    /// Run the security sweep and write curves and reports.
    #[command(alias = "sweep")]
    Evaluate(RunArgs),
    /// Merge report files into per-figure CSV and SVG files.
    Report {
        /// Report files written by `evaluate`.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
    /// Check a config without reading data or training.
    Validate(ConfigArgs),
    /// List the canned scenarios.
    Scenarios,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Scenario config file.
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    config: Option<PathBuf>,
    /// Name of a canned scenario.
    #[arg(long)]
    scenario: Option<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

impl ConfigArgs {
    fn load(&self) -> clfsec::Result<ScenarioConfig> {
        match (&self.config, &self.scenario) {
            (Some(path), _) => ScenarioConfig::load(path),
            (None, Some(name)) => ScenarioConfig::canned(name),
            (None, None) => Err(Error::Config("--config or --scenario is required".into())),
        }
    }
}

impl RunArgs {
    fn resolve(&self) -> clfsec::Result<(ScenarioConfig, RunOptions)> {
        let cfg = self.config.load()?;
        let out = self
            .out
            .clone()
            .or_else(|| cfg.output.dir.as_ref().map(|d| cfg.resolve_path(d)))
            .unwrap_or_else(|| PathBuf::from("out"));
        let opts = RunOptions {
            seed: self.seed,
            out,
            jobs: self.jobs.map(|j| j as usize),
        };
        Ok((cfg, opts))
    }
}

fn color_enabled() -> bool {
    std::env::var_os("CLFSEC_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn run(cli: Cli) -> clfsec::Result<()> {
    let mut stdout = std::io::stdout().lock();
    let mut emit = |line: String| {
        let _ = writeln!(stdout, "{line}");
    };
    match cli.command {
        Command::Prepare(args) => {
            let (cfg, opts) = args.resolve()?;
            let manifest = pipeline::prepare(&cfg, &opts)?;
            emit(format!("manifest={}", opts.out.join("manifest.json").display()));
            for f in manifest.files {
                emit(format!("{}.sha256={}", f.path, f.sha256));
                emit(format!("{}.samples={}", f.path, f.samples));
            }
        }
        Command::Evaluate(args) => {
            let (cfg, opts) = args.resolve()?;
            for line in pipeline::evaluate(&cfg, &opts)?.lines {
                emit(line);
            }
        }
        Command::Report { reports, out } => {
            for fig in pipeline::report(&reports, &out)? {
                emit(format!("figure={}", out.join(&fig.data).display()));
                emit(format!("{}.x_scale={}", fig.data, fig.x_scale));
            }
        }
        Command::Validate(args) => {
            let cfg = args.load()?;
            for w in pipeline::validate(&cfg)? {
                emit(format!("warning={w}"));
            }
            emit(format!("valid={}", if cfg.name.is_empty() { "config" } else { &cfg.name }));
        }
        Command::Scenarios => {
            for name in ScenarioConfig::canned_names() {
                emit(name.to_owned());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let color = color_enabled();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .write_style(if color {
            env_logger::WriteStyle::Auto
        } else {
            env_logger::WriteStyle::Never
        })
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let prefix = if color { "\x1b[1;31merror\x1b[0m" } else { "error" };
            eprintln!("{prefix}: {e}");
            if e.is_configuration() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
