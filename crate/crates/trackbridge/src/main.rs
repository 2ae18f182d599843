use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use trackbridge::config::{Config, Override};
use trackbridge::{benchmark, output, verify};
use trackbridge_core::sim::{self, Simulation};

#[derive(Parser)]
#[command(name = "trackbridge", version, about = "Vehicle-rail-bridge crossing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a crossing and write the time-history table.
    Run(Common),
    /// Run the bundled benchmark and compare with the modal reference.
    Benchmark(Common),
    /// Static, modal, moving-force, integrator and symmetry self checks.
    Verify(Common),
    /// Write the coupled M, C, K at t = 0 as `row col value` triplets.
    DumpMatrices(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file (TOML). Defaults to the bundled benchmark except for `run`.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file. For dump-matrices, a prefix for `<prefix>M.txt`, `C.txt`, `K.txt`.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Override a config value, e.g. `vehicle.speed=30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<Override>,
    /// Time step, s (shorthand for `integrator.dt`).
    #[arg(long)]
    dt: Option<f64>,
    /// Newmark β (shorthand for `integrator.beta`).
    #[arg(long)]
    beta: Option<f64>,
    /// Number of elements (shorthand for `mesh.elements`).
    #[arg(long)]
    elements: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Vec<Override> {
        let mut out = self.set.clone();
        let mut push = |key: &str, value: toml::Value| {
            out.push(Override {
                section: key.split('.').next().unwrap().into(),
                key: key.split('.').nth(1).unwrap().into(),
                value,
            })
        };
        if let Some(dt) = self.dt {
            push("integrator.dt", toml::Value::Float(dt));
        }
        if let Some(beta) = self.beta {
            push("integrator.beta", toml::Value::Float(beta));
        }
        if let Some(n) = self.elements {
            push("mesh.elements", toml::Value::Integer(n as i64));
        }
        out
    }

    fn load(&self, required: bool) -> Result<(Config, String)> {
        let ov = self.overrides();
        match &self.config {
            Some(path) => Ok((Config::load(path, &ov)?, path.display().to_string())),
            None if required => anyhow::bail!("--config PATH is required"),
            None => Ok((benchmark::config_with(&ov)?, "<bundled benchmark>".into())),
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn metadata(command: &str, origin: &str, cfg: &Config) -> Vec<String> {
    vec![
        format!("trackbridge {} {command}", env!("CARGO_PKG_VERSION")),
        format!("config: {origin}"),
        cfg.to_toml(),
    ]
}

fn run(args: &Common) -> Result<()> {
    let (cfg, origin) = args.load(true)?;
    let history = sim::run(cfg.sim_config()?)?;
    let mut out = open_output(args.output.as_deref())?;
    output::write_history(&mut out, &metadata("run", &origin, &cfg), &history)?;
    out.flush()?;
    Ok(())
}

fn run_benchmark(args: &Common) -> Result<()> {
    let (cfg, origin) = args.load(false)?;
    let report = benchmark::run(&cfg.sim_config()?)?;
    print!("{report}");
    if let Some(path) = &args.output {
        let mut out = open_output(Some(path))?;
        output::write_history(&mut out, &metadata("benchmark", &origin, &cfg), &report.history)?;
        out.flush()?;
        println!("\nhistories written to {}", path.display());
    }
    Ok(())
}

fn run_verify(args: &Common) -> Result<bool> {
    let (cfg, _) = args.load(false)?;
    let checks = verify::run_all(&cfg.sim_config()?)?;
    for c in &checks {
        println!("{c}");
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn dump_matrices(args: &Common) -> Result<()> {
    let (cfg, _) = args.load(false)?;
    let sim = Simulation::new(cfg.sim_config()?)?;
    let sys = sim.system();
    match &args.output {
        Some(prefix) => {
            for (tag, m) in [("M", &sys.m), ("C", &sys.c), ("K", &sys.k)] {
                let path = PathBuf::from(format!("{}{tag}.txt", prefix.display()));
                let mut out = open_output(Some(&path))?;
                output::write_sparse(&mut out, m)?;
                out.flush()?;
            }
        }
        None => {
            let mut out = open_output(None)?;
            for (tag, m) in [("M", &sys.m), ("C", &sys.c), ("K", &sys.k)] {
                writeln!(out, "# {tag} {}x{}", m.nrows(), m.ncols())?;
                output::write_sparse(&mut out, m)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run(a).map(|_| true),
        Command::Benchmark(a) => run_benchmark(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
        Command::DumpMatrices(a) => dump_matrices(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
