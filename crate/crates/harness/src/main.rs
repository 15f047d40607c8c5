use std::fs::{self, File};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bicriteria_harness::accept::CRITERIA;
use bicriteria_harness::{accept, corpus, record, run, sweep, InstanceSpec, RunParams};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bicriteria", version, about = "Run, sweep and check the bicriteria submodular solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver on one instance file.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solver: String,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long)]
        delta: Option<f64>,
        /// Horizon T of the continuous solvers.
        #[arg(long)]
        horizon: Option<f64>,
        /// Euler step of the continuous solvers.
        #[arg(long)]
        step: Option<f64>,
        /// Monte-Carlo samples per multilinear evaluation.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of optima assumed by mcg_multi_opt.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Ratio curve of mcg_multi_opt over a β grid.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        ell: Vec<usize>,
        #[arg(long, default_value_t = 3.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 31)]
        points: usize,
        /// Euler steps per run.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run acceptance criteria (all when none are listed).
    Accept {
        criteria: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded instance corpus as JSON files.
    Gen {
        #[arg(long, default_value = "monotone")]
        corpus: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run { instance, solver, epsilon, delta, horizon, step, samples, seed, ell, out, format } => {
            let text = fs::read_to_string(&instance).with_context(|| format!("reading {}", instance.display()))?;
            let spec = InstanceSpec::from_json(&text)?;
            let mut params = RunParams::new(epsilon, seed);
            params.delta = delta;
            params.horizon = horizon;
            params.step = step;
            params.samples = samples;
            params.ell = ell;
            let rec = run(&spec, &solver, &params)?;
            let w = sink(&out)?;
            match format {
                Format::Csv => record::write_csv(w, &[rec])?,
                Format::Json => record::write_json(w, &[rec])?,
            }
            Ok(true)
        }
        Command::Sweep { ell, beta_max, points, steps, out, format } => {
            if points < 2 || !(beta_max.is_finite() && beta_max > 0.0) {
                bail!("need at least two points and a positive finite --beta-max");
            }
            let betas: Vec<f64> = (0..points).map(|i| beta_max * i as f64 / (points - 1) as f64).collect();
            let pts = sweep::sweep_curve(&ell, &betas, steps)?;
            let mut w = sink(&out)?;
            match format {
                Format::Csv => sweep::write_csv(w, &pts)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &pts)?;
                    writeln!(w)?;
                }
            }
            Ok(true)
        }
        Command::Accept { criteria, out } => {
            let ids: Vec<usize> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria };
            let mut w = sink(&out)?;
            let report = accept(&ids)?;
            for c in &report.criteria {
                writeln!(w, "{c}")?;
                for f in &c.failures {
                    writeln!(w, "    {f}")?;
                }
            }
            Ok(report.passed())
        }
        Command::Gen { corpus: name, out } => {
            let Some(specs) = corpus::named(&name) else {
                bail!("unknown corpus `{name}`; expected one of {}", corpus::CORPORA.join(", "));
            };
            fs::create_dir_all(&out)?;
            for spec in &specs {
                let path = out.join(format!("{}.json", spec.id.replace('/', "-")));
                fs::write(&path, spec.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            eprintln!("wrote {} instances to {}", specs.len(), out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
