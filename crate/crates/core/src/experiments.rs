//! Randomized controlled trials on a simulated network.
//!
//! An experiment boosts a treatment group, runs the dynamics to steady state
//! and compares group means against a bare run on the same graph:
//!
//! | metric                  | definition                       |
//! |-------------------------|----------------------------------|
//! | `e_degree_distribution` | `c_base′ / c_base − 1`           |
//! | `e_spillover`           | `c_control / c_base′ − 1`        |
//! | `e_treatment`           | `c_treatment / c_control − 1`    |
//! | `e_dampening`           | `e_treatment / Δλ`               |
//! | `e_intrinsic`           | `c_treatment / c_base′ − 1`      |
//!
//! `c_base` is the mean-field value `λ_int / (1 − k·ν_damp)`; `c_base′` is
//! the simulated bare steady state, which includes the degree-spread effect.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    analytic_c_base, simulate, BoostTarget, ContentState, DynamicsParams, ProductionModel,
    RunStatus, TimeSeries,
};
use crate::error::{invalid, Error, Result};
use crate::graph::{
    generate_watts_strogatz, mean_degree_of, partition_by_treatment, within_group_edge_fraction,
    Graph, GroupPartition, NodeId, WattsStrogatzParams,
};
use crate::rng::{sequential, Purpose};
use crate::sig::fmt_sig;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignmentStrategy {
    #[default]
    Random,
    /// Contiguous block of pre-rewiring ring positions `0..N`.
    Clustered,
}

impl fmt::Display for AssignmentStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignmentStrategy::Random => "random",
            AssignmentStrategy::Clustered => "clustered",
        })
    }
}

impl std::str::FromStr for AssignmentStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(AssignmentStrategy::Random),
            "clustered" => Ok(AssignmentStrategy::Clustered),
            other => Err(invalid(format!(
                "unknown assignment '{other}' (random, clustered)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assignment {
    #[serde(default)]
    pub strategy: AssignmentStrategy,
    pub size: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Assignment {
    pub fn random(size: usize, seed: u64) -> Self {
        Self {
            strategy: AssignmentStrategy::Random,
            size,
            seed,
        }
    }

    pub fn clustered(size: usize) -> Self {
        Self {
            strategy: AssignmentStrategy::Clustered,
            size,
            seed: 0,
        }
    }

    pub fn assign(&self, g: &Graph) -> Result<Vec<NodeId>> {
        match self.strategy {
            AssignmentStrategy::Random => assign_random(g, self.size, self.seed),
            AssignmentStrategy::Clustered => assign_clustered(g, self.size),
        }
    }
}

fn check_size(g: &Graph, size: usize) -> Result<()> {
    if size == 0 || size > g.n() {
        return Err(invalid(format!(
            "treatment size must lie in 1..={}, got {size}",
            g.n()
        )));
    }
    Ok(())
}

/// Uniform `size`-subset of the nodes, sorted ascending.
pub fn assign_random(g: &Graph, size: usize, seed: u64) -> Result<Vec<NodeId>> {
    check_size(g, size)?;
    let mut rng = sequential(seed, Purpose::Assignment, 0);
    let mut ids: Vec<NodeId> = index::sample(&mut rng, g.n(), size)
        .into_iter()
        .map(|i| i as NodeId)
        .collect();
    ids.sort_unstable();
    Ok(ids)
}

/// Nodes `0..size`, which are contiguous on the original ring.
pub fn assign_clustered(g: &Graph, size: usize) -> Result<Vec<NodeId>> {
    check_size(g, size)?;
    Ok((0..size as NodeId).collect())
}

/// Steady-state averaging: the last `window` of the run's steps are averaged,
/// and at least `burn_in` steps must precede them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyWindow {
    pub burn_in: usize,
    pub window: usize,
}

impl Default for SteadyWindow {
    fn default() -> Self {
        Self {
            burn_in: 20,
            window: 10,
        }
    }
}

impl SteadyWindow {
    pub fn validate(&self, steps: usize) -> Result<()> {
        if self.burn_in == 0 || self.window == 0 {
            return Err(invalid("burn_in and window must be positive"));
        }
        if self.burn_in + self.window > steps {
            return Err(invalid(format!(
                "burn_in + window = {} exceeds the {steps} simulated steps",
                self.burn_in + self.window
            )));
        }
        Ok(())
    }
}

/// Bare steady state `c_base′`: the all-node mean averaged over the window,
/// with the boost switched off.
pub fn run_baseline(g: &Graph, params: &DynamicsParams, window: SteadyWindow) -> Result<f64> {
    window.validate(params.steps)?;
    let bare = params.with_delta_lambda(0.0);
    let ts = simulate(g, &bare, None)?;
    Ok(ts.window_mean(window.window)?.all)
}

/// `c̄ / c_base − 1` on `g`, with `c_base` taken at the graph's mean degree.
pub fn degree_distribution_effect(
    g: &Graph,
    params: &DynamicsParams,
    window: SteadyWindow,
) -> Result<f64> {
    let c_base = analytic_c_base(params.lambda_int, g.mean_degree(), params.nu_damp)?;
    let c_bar = run_baseline(g, params, window)?;
    Ok(c_bar / c_base - 1.0)
}

/// Mean content per degree value, in ascending degree order.
pub fn content_by_degree(g: &Graph, state: &ContentState) -> Result<BTreeMap<usize, f64>> {
    if state.values.len() != g.n() {
        return Err(invalid("state does not match graph size"));
    }
    let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (i, &v) in state.values.iter().enumerate() {
        let e = acc.entry(g.degree(i)).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(d, (sum, count))| (d, sum / count as f64))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: WattsStrogatzParams,
    pub dynamics: DynamicsParams,
    pub assignment: Assignment,
    #[serde(default)]
    pub window: SteadyWindow,
    /// Production model of the bare run. Defaults to constant.
    #[serde(default)]
    pub baseline_model: Option<ProductionModel>,
    /// Skip the stability check, for deliberate divergence studies.
    #[serde(default)]
    pub allow_unstable: bool,
}

impl ExperimentConfig {
    pub fn new(
        graph: WattsStrogatzParams,
        dynamics: DynamicsParams,
        assignment: Assignment,
    ) -> Self {
        Self {
            graph,
            dynamics,
            assignment,
            window: SteadyWindow::default(),
            baseline_model: None,
            allow_unstable: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        self.dynamics.validate()?;
        self.window.validate(self.dynamics.steps)?;
        if self.assignment.size == 0 || self.assignment.size > self.graph.n {
            return Err(invalid(format!(
                "treatment size must lie in 1..={}, got {}",
                self.graph.n, self.assignment.size
            )));
        }
        if !self.allow_unstable && !self.dynamics.regularization.is_active() {
            let margin = self.dynamics.boost.stability_margin(
                self.graph.k as f64,
                self.dynamics.nu_damp,
                self.dynamics.delta_lambda,
            );
            if margin <= 0.0 {
                return Err(Error::Unstable { margin });
            }
        }
        Ok(())
    }

    fn baseline_params(&self) -> DynamicsParams {
        self.dynamics
            .with_model(self.baseline_model.unwrap_or(ProductionModel::Constant))
            .with_delta_lambda(0.0)
    }
}

/// Every measured quantity of one experiment. Quantities that are undefined
/// (empty group, zero boost, divergent run) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectReport {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub graph_seed: u64,
    pub treatment_size: usize,
    pub fraction: f64,
    pub delta_lambda: f64,
    pub lambda_int: f64,
    pub nu_damp: f64,
    pub model: ProductionModel,
    pub boost: BoostTarget,
    pub strategy: AssignmentStrategy,
    pub status: RunStatus,

    pub c_base: Option<f64>,
    pub c_base_prime: Option<f64>,
    pub c_treatment: Option<f64>,
    pub c_control: Option<f64>,
    pub c_neighbours: Option<f64>,
    pub c_rest: Option<f64>,

    pub size_treatment: usize,
    pub size_control: usize,
    pub size_neighbours: usize,
    pub size_rest: usize,

    pub mean_degree_treatment: f64,
    pub mean_degree_control: Option<f64>,
    pub mean_degree_neighbours: Option<f64>,
    pub mean_degree_rest: Option<f64>,
    pub within_treatment_edge_fraction: f64,

    pub e_degree_distribution: Option<f64>,
    pub e_spillover: Option<f64>,
    pub e_treatment: Option<f64>,
    pub e_dampening: Option<f64>,
    pub e_intrinsic: Option<f64>,
}

impl EffectReport {
    /// `c / c_base′` for a group mean.
    pub fn relative(&self, group_mean: Option<f64>) -> Option<f64> {
        Some(group_mean? / self.c_base_prime?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Report plus the treated run's time series.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub report: EffectReport,
    pub treated: Option<TimeSeries>,
}

fn subset_mean_degree(g: &Graph, nodes: &[NodeId]) -> Option<f64> {
    mean_degree_of(g, nodes).ok()
}

/// Runs the experiment on an existing graph. `c_base_prime` may be supplied
/// when several experiments share a graph; otherwise the bare run is done here.
pub fn run_experiment_on(
    g: &Graph,
    config: &ExperimentConfig,
    c_base_prime: Option<f64>,
) -> Result<ExperimentRun> {
    config.validate()?;
    if g.n() != config.graph.n {
        return Err(invalid("graph size does not match the configuration"));
    }
    let treatment = config.assignment.assign(g)?;
    let partition = partition_by_treatment(g, &treatment)?;
    let mut report = skeleton_report(g, config, &partition)?;

    let c_base_prime = match c_base_prime {
        Some(c) => c,
        None => match run_baseline(g, &config.baseline_params(), config.window) {
            Ok(c) => c,
            Err(Error::Divergent { step }) => {
                report.status = RunStatus::Divergent { step };
                return Ok(ExperimentRun {
                    report,
                    treated: None,
                });
            }
            Err(e) => return Err(e),
        },
    };
    report.c_base_prime = Some(c_base_prime);
    report.e_degree_distribution = report.c_base.map(|c| c_base_prime / c - 1.0);

    let treated = simulate(g, &config.dynamics, Some(&partition))?;
    report.status = treated.status;
    if treated.status.is_divergent() {
        return Ok(ExperimentRun {
            report,
            treated: Some(treated),
        });
    }
    let steady = treated.window_mean(config.window.window)?;
    report.c_treatment = steady.treatment;
    report.c_control = steady.control;
    report.c_neighbours = steady.neighbours;
    report.c_rest = steady.rest;

    report.e_spillover = steady.control.map(|c| c / c_base_prime - 1.0);
    report.e_intrinsic = steady.treatment.map(|c| c / c_base_prime - 1.0);
    report.e_treatment = match (steady.treatment, steady.control) {
        (Some(t), Some(c)) => Some(t / c - 1.0),
        _ => None,
    };
    report.e_dampening = report
        .e_treatment
        .filter(|_| config.dynamics.delta_lambda > 0.0)
        .map(|e| e / config.dynamics.delta_lambda);

    Ok(ExperimentRun {
        report,
        treated: Some(treated),
    })
}

fn skeleton_report(
    g: &Graph,
    config: &ExperimentConfig,
    partition: &GroupPartition,
) -> Result<EffectReport> {
    let d = &config.dynamics;
    let control = partition.control();
    Ok(EffectReport {
        n: g.n(),
        k: config.graph.k,
        p: config.graph.p,
        graph_seed: config.graph.seed,
        treatment_size: partition.treatment().len(),
        fraction: partition.treatment().len() as f64 / g.n() as f64,
        delta_lambda: d.delta_lambda,
        lambda_int: d.lambda_int,
        nu_damp: d.nu_damp,
        model: d.model,
        boost: d.boost,
        strategy: config.assignment.strategy,
        status: RunStatus::Completed,
        c_base: analytic_c_base(d.lambda_int, g.mean_degree(), d.nu_damp).ok(),
        c_base_prime: None,
        c_treatment: None,
        c_control: None,
        c_neighbours: None,
        c_rest: None,
        size_treatment: partition.treatment().len(),
        size_control: control.len(),
        size_neighbours: partition.neighbours().len(),
        size_rest: partition.rest().len(),
        mean_degree_treatment: mean_degree_of(g, partition.treatment())?,
        mean_degree_control: subset_mean_degree(g, &control),
        mean_degree_neighbours: subset_mean_degree(g, partition.neighbours()),
        mean_degree_rest: subset_mean_degree(g, partition.rest()),
        within_treatment_edge_fraction: within_group_edge_fraction(g, partition.treatment())?,
        e_degree_distribution: None,
        e_spillover: None,
        e_treatment: None,
        e_dampening: None,
        e_intrinsic: None,
    })
}

/// Builds the graph, assigns treatment, runs the bare and treated simulations
/// and fills in every metric.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EffectReport> {
    Ok(run_experiment_detailed(config)?.report)
}

pub fn run_experiment_detailed(config: &ExperimentConfig) -> Result<ExperimentRun> {
    config.validate()?;
    let g = generate_watts_strogatz(&config.graph)?;
    run_experiment_on(&g, config, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// Treatment fraction × mean degree.
    Size,
    /// Rewiring probability, bare runs only.
    P,
}

/// Per-point aggregate over replications.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MetricSummary {
    pub c_base_prime: Option<f64>,
    pub c_treatment: Option<f64>,
    pub c_control: Option<f64>,
    pub c_neighbours: Option<f64>,
    pub c_rest: Option<f64>,
    pub e_spillover: Option<f64>,
    pub e_treatment: Option<f64>,
    pub e_dampening: Option<f64>,
    pub e_intrinsic: Option<f64>,
    pub e_degree_distribution: Option<f64>,
}

type Getter = fn(&EffectReport) -> Option<f64>;

const METRICS: [(&str, Getter); 10] = [
    ("c_base_prime", |r| r.c_base_prime),
    ("c_treatment", |r| r.c_treatment),
    ("c_control", |r| r.c_control),
    ("c_neighbours", |r| r.c_neighbours),
    ("c_rest", |r| r.c_rest),
    ("e_spillover", |r| r.e_spillover),
    ("e_treatment", |r| r.e_treatment),
    ("e_dampening", |r| r.e_dampening),
    ("e_intrinsic", |r| r.e_intrinsic),
    ("e_degree_distribution", |r| r.e_degree_distribution),
];

impl MetricSummary {
    fn from_values(values: [Option<f64>; 10]) -> Self {
        let [c_base_prime, c_treatment, c_control, c_neighbours, c_rest, e_spillover, e_treatment, e_dampening, e_intrinsic, e_degree_distribution] =
            values;
        Self {
            c_base_prime,
            c_treatment,
            c_control,
            c_neighbours,
            c_rest,
            e_spillover,
            e_treatment,
            e_dampening,
            e_intrinsic,
            e_degree_distribution,
        }
    }

    fn values(&self) -> [Option<f64>; 10] {
        [
            self.c_base_prime,
            self.c_treatment,
            self.c_control,
            self.c_neighbours,
            self.c_rest,
            self.e_spillover,
            self.e_treatment,
            self.e_dampening,
            self.e_intrinsic,
            self.e_degree_distribution,
        ]
    }
}

/// Mean and sample standard deviation (`None` for fewer than two values).
pub fn mean_and_stddev(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (Some(mean), None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k: usize,
    pub p: f64,
    pub n: usize,
    pub size: usize,
    pub frac: f64,
    pub delta_lambda: f64,
    /// Replications that completed without divergence or error.
    pub replications: usize,
    pub mean: MetricSummary,
    pub stddev: Option<MetricSummary>,
    pub status: String,
    pub reports: Vec<EffectReport>,
}

impl SweepPoint {
    fn aggregate(
        (k, p, n, size, frac, delta_lambda): (usize, f64, usize, usize, f64, f64),
        outcomes: Vec<Result<EffectReport>>,
    ) -> Self {
        let total = outcomes.len();
        let mut reports = Vec::with_capacity(total);
        let mut failures = Vec::new();
        for outcome in outcomes {
            match outcome {
                Ok(r) if !r.status.is_divergent() => reports.push(r),
                Ok(r) => failures.push(format!("divergent at step {}", divergent_step(&r.status))),
                Err(e) => failures.push(e.to_string()),
            }
        }
        let mut means = [None; 10];
        let mut stddevs = [None; 10];
        for (slot, (_, get)) in METRICS.iter().enumerate() {
            let vals: Vec<f64> = reports.iter().filter_map(get).collect();
            // a metric is reported only when every completed replicate defines it
            if vals.len() == reports.len() {
                (means[slot], stddevs[slot]) = mean_and_stddev(&vals);
            }
        }
        let status = if failures.is_empty() {
            "ok".to_string()
        } else {
            format!("{}/{} failed: {}", failures.len(), total, failures[0])
        };
        Self {
            k,
            p,
            n,
            size,
            frac,
            delta_lambda,
            replications: reports.len(),
            mean: MetricSummary::from_values(means),
            stddev: (reports.len() > 1).then(|| MetricSummary::from_values(stddevs)),
            status,
            reports,
        }
    }
}

fn divergent_step(status: &RunStatus) -> usize {
    match status {
        RunStatus::Divergent { step } => *step,
        RunStatus::Completed => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn csv_header() -> String {
        let mut cols: Vec<String> = ["k", "p", "n", "N", "frac", "delta_lambda"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        cols.extend(METRICS.iter().map(|(name, _)| name.to_string()));
        cols.extend(METRICS.iter().map(|(name, _)| format!("stddev_{name}")));
        cols.push("replications".into());
        cols.push("status".into());
        cols.join(",")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::csv_header())?;
        let cell = |v: Option<f64>| v.map_or_else(|| "NaN".to_string(), fmt_sig);
        for pt in &self.points {
            let mut row = vec![
                pt.k.to_string(),
                fmt_sig(pt.p),
                pt.n.to_string(),
                pt.size.to_string(),
                fmt_sig(pt.frac),
                fmt_sig(pt.delta_lambda),
            ];
            row.extend(pt.mean.values().into_iter().map(cell));
            let sd = pt.stddev.map(|s| s.values()).unwrap_or([None; 10]);
            row.extend(sd.into_iter().map(cell));
            row.push(pt.replications.to_string());
            // commas would break the row
            row.push(pt.status.replace(',', ";"));
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()
    }
}

fn replicate_seed(seed: u64, r: usize) -> u64 {
    seed.wrapping_add(r as u64)
}

/// Treatment size for a fraction of `n`, rounded and clamped to `1..=n`.
pub fn size_for_fraction(n: usize, frac: f64) -> usize {
    ((frac * n as f64).round() as usize).clamp(1, n)
}

/// Experiment-size sweep over `ks × fractions`, `replications` seeds per point.
///
/// Replicate `r` uses graph seed `base.graph.seed + r` and assignment seed
/// `base.assignment.seed + r`; within a replicate every fraction shares the
/// graph and its bare run. Points are returned in `ks`-major order.
pub fn run_size_sweep(
    base: &ExperimentConfig,
    fractions: &[f64],
    ks: &[usize],
    replications: usize,
) -> Result<SweepResult> {
    if fractions.is_empty() || ks.is_empty() {
        return Err(invalid("sweep axes must not be empty"));
    }
    if replications == 0 {
        return Err(invalid("replications must be at least 1"));
    }
    if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(invalid(format!("fractions must lie in (0, 1], got {f}")));
    }
    for &k in ks {
        let mut cfg = *base;
        cfg.graph.k = k;
        cfg.assignment.size = 1;
        cfg.validate()?;
    }
    check_distinct(fractions, "fractions")?;
    check_distinct(&ks.iter().map(|&k| k as f64).collect::<Vec<_>>(), "ks")?;

    let jobs: Vec<(usize, usize)> = ks
        .iter()
        .flat_map(|&k| (0..replications).map(move |r| (k, r)))
        .collect();
    let per_job: Vec<Vec<Result<EffectReport>>> = jobs
        .par_iter()
        .map(|&(k, r)| size_sweep_job(base, k, r, fractions))
        .collect();

    let n = base.graph.n;
    let mut points = Vec::with_capacity(ks.len() * fractions.len());
    for (ki, &k) in ks.iter().enumerate() {
        let mut job_results: Vec<_> = per_job[ki * replications..(ki + 1) * replications]
            .iter()
            .map(|v| v.clone().into_iter())
            .collect();
        for &frac in fractions {
            let outcomes: Vec<_> = job_results
                .iter_mut()
                .map(|it| it.next().expect("one outcome per fraction"))
                .collect();
            let size = size_for_fraction(n, frac);
            points.push(SweepPoint::aggregate(
                (k, base.graph.p, n, size, frac, base.dynamics.delta_lambda),
                outcomes,
            ));
        }
    }
    Ok(SweepResult {
        kind: SweepKind::Size,
        points,
    })
}

fn size_sweep_job(
    base: &ExperimentConfig,
    k: usize,
    r: usize,
    fractions: &[f64],
) -> Vec<Result<EffectReport>> {
    let mut cfg = *base;
    cfg.graph.k = k;
    cfg.graph.seed = replicate_seed(base.graph.seed, r);
    cfg.assignment.seed = replicate_seed(base.assignment.seed, r);
    cfg.dynamics.seed = replicate_seed(base.dynamics.seed, r);
    let fail_all = |e: Error| fractions.iter().map(|_| Err(e.clone())).collect();
    let g = match generate_watts_strogatz(&cfg.graph) {
        Ok(g) => g,
        Err(e) => return fail_all(e),
    };
    let c_base_prime = match run_baseline(&g, &cfg.baseline_params(), cfg.window) {
        Ok(c) => c,
        Err(e) => return fail_all(e),
    };
    fractions
        .iter()
        .map(|&frac| {
            let mut point = cfg;
            point.assignment.size = size_for_fraction(cfg.graph.n, frac);
            run_experiment_on(&g, &point, Some(c_base_prime)).map(|run| run.report)
        })
        .collect()
}

fn check_distinct(values: &[f64], what: &str) -> Result<()> {
    for (i, a) in values.iter().enumerate() {
        if values[..i].contains(a) {
            return Err(invalid(format!("{what} contains {a} twice")));
        }
    }
    Ok(())
}

/// Degree-distribution sweep over rewiring probabilities, bare runs only.
/// Uses `base.graph.{n, k, seed}`, `base.dynamics` and `base.window`.
pub fn run_p_sweep(
    base: &ExperimentConfig,
    ps: &[f64],
    replications: usize,
) -> Result<SweepResult> {
    if ps.is_empty() {
        return Err(invalid("sweep axes must not be empty"));
    }
    if replications == 0 {
        return Err(invalid("replications must be at least 1"));
    }
    check_distinct(ps, "ps")?;
    for &p in ps {
        let mut cfg = *base;
        cfg.graph.p = p;
        cfg.graph.validate()?;
    }
    base.dynamics.validate()?;
    base.window.validate(base.dynamics.steps)?;
    analytic_c_base(
        base.dynamics.lambda_int,
        base.graph.k as f64,
        base.dynamics.nu_damp,
    )?;

    let jobs: Vec<(f64, usize)> = ps
        .iter()
        .flat_map(|&p| (0..replications).map(move |r| (p, r)))
        .collect();
    let outcomes: Vec<Result<EffectReport>> = jobs
        .par_iter()
        .map(|&(p, r)| p_sweep_job(base, p, r))
        .collect();
    let mut outcomes = outcomes.into_iter();
    let points = ps
        .iter()
        .map(|&p| {
            let chunk: Vec<_> = outcomes.by_ref().take(replications).collect();
            SweepPoint::aggregate((base.graph.k, p, base.graph.n, 0, 0.0, 0.0), chunk)
        })
        .collect();
    Ok(SweepResult {
        kind: SweepKind::P,
        points,
    })
}

fn p_sweep_job(base: &ExperimentConfig, p: f64, r: usize) -> Result<EffectReport> {
    let mut graph = base.graph;
    graph.p = p;
    graph.seed = replicate_seed(base.graph.seed, r);
    let g = generate_watts_strogatz(&graph)?;
    let d = base.dynamics.with_delta_lambda(0.0);
    let c_base = analytic_c_base(d.lambda_int, g.mean_degree(), d.nu_damp)?;
    let mut status = RunStatus::Completed;
    let c_base_prime = match run_baseline(&g, &d, base.window) {
        Ok(c) => Some(c),
        Err(Error::Divergent { step }) => {
            status = RunStatus::Divergent { step };
            None
        }
        Err(e) => return Err(e),
    };
    Ok(EffectReport {
        n: g.n(),
        k: graph.k,
        p,
        graph_seed: graph.seed,
        treatment_size: 0,
        fraction: 0.0,
        delta_lambda: 0.0,
        lambda_int: d.lambda_int,
        nu_damp: d.nu_damp,
        model: d.model,
        boost: d.boost,
        strategy: base.assignment.strategy,
        status,
        c_base: Some(c_base),
        c_base_prime,
        c_treatment: None,
        c_control: None,
        c_neighbours: None,
        c_rest: None,
        size_treatment: 0,
        size_control: g.n(),
        size_neighbours: 0,
        size_rest: g.n(),
        mean_degree_treatment: f64::NAN,
        mean_degree_control: Some(g.mean_degree()),
        mean_degree_neighbours: None,
        mean_degree_rest: Some(g.mean_degree()),
        within_treatment_edge_fraction: f64::NAN,
        e_degree_distribution: c_base_prime.map(|c| c / c_base - 1.0),
        e_spillover: None,
        e_treatment: None,
        e_dampening: None,
        e_intrinsic: None,
    })
}
