//! `netrct`: generate graphs, run the content-production process and
//! controlled-trial experiments, and sweep them, writing CSV and JSON.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netrct::{AssignmentStrategy, BoostTarget, ProductionModel, RegularizationMode};

use config::{AssignmentSection, Command, ScenarioConfig};

#[derive(Debug)]
pub enum Failure {
    /// Bad configuration or parameters; exit code 2.
    Invalid(String),
    Io(String),
    Run(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Io(_) | Failure::Run(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "invalid configuration: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Run(m) => write!(f, "run failed: {m}"),
        }
    }
}

impl From<netrct::Error> for Failure {
    fn from(e: netrct::Error) -> Self {
        use netrct::Error::*;
        match e {
            InvalidParameter(_) | Unstable { .. } | Parse(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "netrct",
    version,
    about = "Network content-production simulator and trial harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run whichever command the scenario file names.
    Run(Overrides),
    /// Write a graph edge list and its degree histogram.
    Generate(Overrides),
    /// Run the bare process for each production model.
    Simulate(Overrides),
    /// Run a treatment/control experiment and report its effects.
    Experiment(Overrides),
    /// Sweep treatment size or rewiring probability.
    Sweep(Overrides),
}

#[derive(clap::Args, Debug, Default)]
struct Overrides {
    /// Scenario JSON file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long = "k")]
    k: Option<usize>,
    #[arg(long = "p")]
    p: Option<f64>,
    /// Sets the graph, dynamics and assignment seeds together.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    /// One model or a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    model: Option<Vec<ProductionModel>>,
    #[arg(long)]
    nu_damp: Option<f64>,
    #[arg(long)]
    lambda_int: Option<f64>,
    #[arg(long)]
    delta_lambda: Option<f64>,
    #[arg(long)]
    boost: Option<BoostTarget>,
    /// Treatment group as a fraction of n.
    #[arg(long, conflicts_with = "size")]
    frac: Option<f64>,
    /// Treatment group size.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    assignment: Option<AssignmentStrategy>,
    #[arg(long)]
    regularization: Option<RegularizationMode>,
    #[arg(long)]
    nu_max: Option<f64>,
    #[arg(long)]
    c_max: Option<f64>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Validate the scenario and print it resolved, without running it.
    #[arg(long)]
    dry_run: bool,
    /// Worker threads; 0 or unset uses every core.
    #[arg(long, env = "NETRCT_THREADS")]
    threads: Option<usize>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(n) = self.n {
            cfg.graph.n = n;
        }
        if let Some(k) = self.k {
            cfg.graph.k = k;
        }
        if let Some(p) = self.p {
            cfg.graph.p = p;
        }
        if let Some(seed) = self.seed {
            cfg.graph.seed = seed;
            cfg.dynamics.seed = seed;
            if let Some(a) = cfg.assignment.as_mut() {
                a.seed = seed;
            }
        }
        if let Some(steps) = self.steps {
            cfg.dynamics.steps = steps;
        }
        if let Some(models) = &self.model {
            if let Some(first) = models.first() {
                cfg.dynamics.model = *first;
            }
            cfg.models = Some(models.clone());
        }
        if let Some(v) = self.nu_damp {
            cfg.dynamics.nu_damp = v;
        }
        if let Some(v) = self.lambda_int {
            cfg.dynamics.lambda_int = v;
        }
        if let Some(v) = self.delta_lambda {
            cfg.dynamics.delta_lambda = v;
        }
        if let Some(b) = self.boost {
            cfg.dynamics.boost = b;
        }
        if self.frac.is_some() || self.size.is_some() || self.assignment.is_some() {
            let seed = self.seed.unwrap_or(1);
            let a = cfg.assignment.get_or_insert_with(|| AssignmentSection {
                seed,
                ..AssignmentSection::default()
            });
            if let Some(f) = self.frac {
                a.fraction = Some(f);
                a.size = None;
            }
            if let Some(s) = self.size {
                a.size = Some(s);
                a.fraction = None;
            }
            if let Some(s) = self.assignment {
                a.strategy = s;
            }
        }
        let r = &mut cfg.dynamics.regularization;
        if let Some(mode) = self.regularization {
            r.mode = mode;
        }
        if let Some(v) = self.nu_max {
            r.nu_max = Some(v);
        }
        if let Some(v) = self.c_max {
            r.c_max = Some(v);
        }
        if let Some(r) = self.replications {
            cfg.replications = Some(r);
        }
        if let Some(dir) = &self.out_dir {
            cfg.out_dir = Some(dir.clone());
        }
    }
}

fn resolve(
    requested: Option<Command>,
    overrides: &Overrides,
) -> Result<(Command, ScenarioConfig), Failure> {
    let mut cfg = match &overrides.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    overrides.apply(&mut cfg);
    let command = match (requested, cfg.command) {
        (Some(r), Some(c)) if r != c => {
            return Err(Failure::Invalid(format!(
                "scenario is for `{}` but `{}` was requested",
                name(c),
                name(r)
            )))
        }
        (Some(r), _) => r,
        (None, Some(c)) => c,
        (None, None) => {
            return Err(Failure::Invalid(
                "scenario names no command; set \"command\" or use a subcommand".into(),
            ))
        }
    };
    Ok((command, cfg))
}

fn name(c: Command) -> &'static str {
    match c {
        Command::Generate => "generate",
        Command::Simulate => "simulate",
        Command::Experiment => "experiment",
        Command::Sweep => "sweep",
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (requested, overrides) = match cli.command {
        Cmd::Run(o) => (None, o),
        Cmd::Generate(o) => (Some(Command::Generate), o),
        Cmd::Simulate(o) => (Some(Command::Simulate), o),
        Cmd::Experiment(o) => (Some(Command::Experiment), o),
        Cmd::Sweep(o) => (Some(Command::Sweep), o),
    };
    let (command, cfg) = resolve(requested, &overrides)?;
    output::check(command, &cfg)?;
    if overrides.dry_run {
        let mut resolved = cfg;
        resolved.command = Some(command);
        println!(
            "{}",
            serde_json::to_string_pretty(&resolved).expect("config serializes")
        );
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(overrides.threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Run(e.to_string()))?;
    pool.install(|| match command {
        Command::Generate => output::generate(&cfg),
        Command::Simulate => output::simulate(&cfg),
        Command::Experiment => output::experiment(&cfg),
        Command::Sweep => output::sweep(&cfg),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("netrct: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
