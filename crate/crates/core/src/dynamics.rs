//! Discrete-time content production with neighbour feedback.
//!
//! At every step each node reads its neighbours' content from the previous
//! step, turns it into a feedback rate, and draws new content from the
//! production model. All nodes update from the same snapshot.

use std::fmt;
use std::io::Write;

use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, Group, GroupPartition};
use crate::rng::CounterRng;
use crate::sig::fmt_sig;

/// Any tracked group mean above this (or non-finite) stops a run as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Absolute tolerance of [`regularized_fixed_point`].
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;
const FIXED_POINT_MAX_ITERATIONS: usize = 100_000;

/// Nodes per parallel work item. Also fixes the reduction order of group sums.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductionModel {
    /// `c = λ`
    Constant,
    /// `c ~ U(0, 2λ)`
    Uniform,
    /// `c ~ Pois(λ)`
    Poisson,
}

impl ProductionModel {
    pub const ALL: [ProductionModel; 3] = [
        ProductionModel::Constant,
        ProductionModel::Uniform,
        ProductionModel::Poisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProductionModel::Constant => "constant",
            ProductionModel::Uniform => "uniform",
            ProductionModel::Poisson => "poisson",
        }
    }

    /// Draws one value with mean `lambda`. Non-finite or out-of-range rates
    /// yield `f64::INFINITY`, which the caller treats as divergence.
    #[inline]
    pub fn draw(self, lambda: f64, rng: &mut CounterRng) -> f64 {
        match self {
            ProductionModel::Constant => lambda,
            ProductionModel::Uniform => 2.0 * lambda * rng.next_f64(),
            ProductionModel::Poisson => {
                if lambda <= 0.0 {
                    0.0
                } else {
                    match Poisson::new(lambda) {
                        Ok(dist) => dist.sample(rng),
                        Err(_) => f64::INFINITY,
                    }
                }
            }
        }
    }
}

impl fmt::Display for ProductionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProductionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(ProductionModel::Constant),
            "uniform" => Ok(ProductionModel::Uniform),
            "poisson" => Ok(ProductionModel::Poisson),
            other => Err(invalid(format!(
                "unknown production model '{other}' (constant, uniform, poisson)"
            ))),
        }
    }
}

/// Which part of a treated node's rate the boost multiplies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoostTarget {
    /// `λ_i = λ_int·(1 + Δλ) + ν_i`
    #[default]
    Intrinsic,
    /// `λ_i = (λ_int + ν_i)·(1 + Δλ)`
    Total,
}

impl BoostTarget {
    #[inline]
    pub fn rate(self, lambda_int: f64, feedback: f64, boost: f64) -> f64 {
        match self {
            BoostTarget::Intrinsic => lambda_int * (1.0 + boost) + feedback,
            BoostTarget::Total => (lambda_int + feedback) * (1.0 + boost),
        }
    }

    /// Stability margin of the fully boosted linear system under this rule.
    pub fn stability_margin(self, k: f64, nu_damp: f64, delta_lambda: f64) -> f64 {
        match self {
            BoostTarget::Intrinsic => stability_margin(k, nu_damp, 0.0),
            BoostTarget::Total => stability_margin(k, nu_damp, delta_lambda),
        }
    }
}

impl std::str::FromStr for BoostTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intrinsic" => Ok(BoostTarget::Intrinsic),
            "total" => Ok(BoostTarget::Total),
            other => Err(invalid(format!(
                "unknown boost target '{other}' (intrinsic, total)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularizationMode {
    #[default]
    None,
    HardCap,
    Sigmoid,
}

impl std::str::FromStr for RegularizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RegularizationMode::None),
            "hard_cap" => Ok(RegularizationMode::HardCap),
            "sigmoid" => Ok(RegularizationMode::Sigmoid),
            other => Err(invalid(format!(
                "unknown regularization '{other}' (none, hard_cap, sigmoid)"
            ))),
        }
    }
}

/// Optional limits on the feedback term (`nu_max`) and on produced content
/// (`c_max`). A limit left unset is not applied.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regularization {
    #[serde(default)]
    pub mode: RegularizationMode,
    #[serde(default)]
    pub nu_max: Option<f64>,
    #[serde(default)]
    pub c_max: Option<f64>,
}

impl Regularization {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn sigmoid_feedback(nu_max: f64) -> Self {
        Self {
            mode: RegularizationMode::Sigmoid,
            nu_max: Some(nu_max),
            c_max: None,
        }
    }

    pub fn hard_cap(nu_max: Option<f64>, c_max: Option<f64>) -> Self {
        Self {
            mode: RegularizationMode::HardCap,
            nu_max,
            c_max,
        }
    }

    pub fn is_active(&self) -> bool {
        self.mode != RegularizationMode::None
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_active() {
            return Ok(());
        }
        if self.nu_max.is_none() && self.c_max.is_none() {
            return Err(invalid("regularization needs nu_max, c_max or both"));
        }
        for (name, value) in [("nu_max", self.nu_max), ("c_max", self.c_max)] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(format!("{name} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn feedback(&self, raw: f64) -> f64 {
        match (self.mode, self.nu_max) {
            (RegularizationMode::HardCap, Some(cap)) => raw.min(cap),
            (RegularizationMode::Sigmoid, Some(cap)) => cap * sigmoid(raw),
            _ => raw,
        }
    }

    #[inline]
    fn content(&self, draw: f64) -> f64 {
        match (self.mode, self.c_max) {
            (RegularizationMode::HardCap, Some(cap)) => draw.min(cap),
            (RegularizationMode::Sigmoid, Some(cap)) => cap * sigmoid(draw),
            _ => draw,
        }
    }
}

/// Logistic function.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsParams {
    pub lambda_int: f64,
    pub nu_damp: f64,
    #[serde(default)]
    pub delta_lambda: f64,
    pub model: ProductionModel,
    #[serde(default)]
    pub boost: BoostTarget,
    #[serde(default)]
    pub regularization: Regularization,
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
}

impl DynamicsParams {
    /// Constant model, no experiment, no regularization.
    pub fn constant(lambda_int: f64, nu_damp: f64, steps: usize) -> Self {
        Self {
            lambda_int,
            nu_damp,
            delta_lambda: 0.0,
            model: ProductionModel::Constant,
            boost: BoostTarget::default(),
            regularization: Regularization::none(),
            steps,
            seed: 0,
        }
    }

    pub fn with_model(mut self, model: ProductionModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_delta_lambda(mut self, delta_lambda: f64) -> Self {
        self.delta_lambda = delta_lambda;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_regularization(mut self, regularization: Regularization) -> Self {
        self.regularization = regularization;
        self
    }

    pub fn with_boost(mut self, boost: BoostTarget) -> Self {
        self.boost = boost;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("lambda_int", self.lambda_int),
            ("nu_damp", self.nu_damp),
            ("delta_lambda", self.delta_lambda),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(invalid(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        if self.steps == 0 {
            return Err(invalid("steps must be at least 1"));
        }
        self.regularization.validate()
    }
}

/// Per-node content at one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentState {
    pub t: usize,
    pub values: Vec<f64>,
}

impl ContentState {
    pub fn zeros(n: usize) -> Self {
        Self {
            t: 0,
            values: vec![0.0; n],
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

#[inline]
fn update_node(
    g: &Graph,
    prev: &[f64],
    params: &DynamicsParams,
    t: usize,
    i: usize,
    treated: bool,
) -> f64 {
    let inflow: f64 = g.neighbours(i).iter().map(|&j| prev[j as usize]).sum();
    let reg = &params.regularization;
    let feedback = reg.feedback(params.nu_damp * inflow);
    let boost = if treated { params.delta_lambda } else { 0.0 };
    let lambda = params.boost.rate(params.lambda_int, feedback, boost);
    let draw = match params.model {
        ProductionModel::Constant => lambda,
        model => model.draw(
            lambda,
            &mut CounterRng::new(params.seed, t as u64, i as u64),
        ),
    };
    reg.content(draw)
}

fn step_into(
    g: &Graph,
    prev: &ContentState,
    next: &mut ContentState,
    params: &DynamicsParams,
    treated: Option<&[Group]>,
) -> Result<()> {
    let t = prev.t + 1;
    let src = &prev.values;
    next.t = t;
    next.values
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let base = c * CHUNK;
            for (off, slot) in chunk.iter_mut().enumerate() {
                let i = base + off;
                let is_treated = treated.is_some_and(|labels| labels[i] == Group::Treatment);
                *slot = update_node(g, src, params, t, i, is_treated);
            }
        });
    if !params.regularization.is_active() && next.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergent { step: t });
    }
    Ok(())
}

fn check_state(g: &Graph, state: &ContentState) -> Result<()> {
    if state.values.len() != g.n() {
        return Err(invalid(format!(
            "state has {} values, graph has {} nodes",
            state.values.len(),
            g.n()
        )));
    }
    Ok(())
}

fn check_partition(g: &Graph, partition: Option<&GroupPartition>) -> Result<()> {
    match partition {
        Some(p) if p.n() != g.n() => Err(invalid(format!(
            "partition covers {} nodes, graph has {}",
            p.n(),
            g.n()
        ))),
        _ => Ok(()),
    }
}

/// Advances `state` by one step. Treated nodes are those labelled
/// [`Group::Treatment`] in `partition`; with `None` nobody is treated.
///
/// Fails with [`Error::Divergent`] if an unregularized step produces a
/// non-finite value.
pub fn step(
    g: &Graph,
    state: &ContentState,
    params: &DynamicsParams,
    partition: Option<&GroupPartition>,
) -> Result<ContentState> {
    params.validate()?;
    check_state(g, state)?;
    check_partition(g, partition)?;
    let mut next = ContentState::zeros(g.n());
    step_into(g, state, &mut next, params, partition.map(|p| p.labels()))?;
    Ok(next)
}

/// Group means at one step. Groups that are empty, or untracked because the
/// run had no partition, are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupMeans {
    pub t: usize,
    pub all: f64,
    pub treatment: Option<f64>,
    pub neighbours: Option<f64>,
    pub rest: Option<f64>,
    pub control: Option<f64>,
}

impl GroupMeans {
    pub fn within_bounds(&self) -> bool {
        [
            Some(self.all),
            self.treatment,
            self.neighbours,
            self.rest,
            self.control,
        ]
        .iter()
        .flatten()
        .all(|v| v.is_finite() && *v <= DIVERGENCE_THRESHOLD)
    }
}

fn ratio(sum: f64, count: usize) -> Option<f64> {
    (count > 0).then(|| sum / count as f64)
}

fn group_means(state: &ContentState, partition: Option<&GroupPartition>) -> GroupMeans {
    let n = state.values.len();
    match partition {
        None => {
            let partials: Vec<f64> = state
                .values
                .par_chunks(CHUNK)
                .map(|c| c.iter().sum::<f64>())
                .collect();
            GroupMeans {
                t: state.t,
                all: partials.iter().sum::<f64>() / n as f64,
                treatment: None,
                neighbours: None,
                rest: None,
                control: None,
            }
        }
        Some(part) => {
            let partials: Vec<[f64; 3]> = state
                .values
                .par_chunks(CHUNK)
                .zip(part.labels().par_chunks(CHUNK))
                .map(|(vals, labels)| {
                    let mut acc = [0.0; 3];
                    for (v, l) in vals.iter().zip(labels) {
                        acc[*l as usize] += v;
                    }
                    acc
                })
                .collect();
            let mut sums = [0.0; 3];
            for p in &partials {
                for g in 0..3 {
                    sums[g] += p[g];
                }
            }
            let [st, sn, sr] = sums;
            let (nt, nn, nr) = (
                part.treatment().len(),
                part.neighbours().len(),
                part.rest().len(),
            );
            GroupMeans {
                t: state.t,
                all: (st + sn + sr) / n as f64,
                treatment: ratio(st, nt),
                neighbours: ratio(sn, nn),
                rest: ratio(sr, nr),
                control: ratio(sn + sr, nn + nr),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Divergent { step: usize },
}

impl RunStatus {
    pub fn is_divergent(&self) -> bool {
        matches!(self, RunStatus::Divergent { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Completed => "ok",
            RunStatus::Divergent { .. } => "divergent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    /// One entry per completed step, `t = 1..`.
    pub rows: Vec<GroupMeans>,
    pub status: RunStatus,
    /// State after the last completed step.
    pub final_state: ContentState,
}

impl TimeSeries {
    /// Averages each group mean over the last `window` steps.
    pub fn window_mean(&self, window: usize) -> Result<GroupMeans> {
        if let RunStatus::Divergent { step } = self.status {
            return Err(Error::Divergent { step });
        }
        if window == 0 || window > self.rows.len() {
            return Err(invalid(format!(
                "window {window} does not fit a run of {} steps",
                self.rows.len()
            )));
        }
        let tail = &self.rows[self.rows.len() - window..];
        let avg = |f: fn(&GroupMeans) -> Option<f64>| -> Option<f64> {
            tail.iter()
                .map(f)
                .sum::<Option<f64>>()
                .map(|s| s / window as f64)
        };
        Ok(GroupMeans {
            t: self.rows.last().map_or(0, |r| r.t),
            all: avg(|r| Some(r.all)).unwrap_or(f64::NAN),
            treatment: avg(|r| r.treatment),
            neighbours: avg(|r| r.neighbours),
            rest: avg(|r| r.rest),
            control: avg(|r| r.control),
        })
    }

    pub const CSV_HEADER: &'static str =
        "t,mean_all,mean_treatment,mean_neighbours,mean_rest,mean_control";

    /// CSV form, 12 significant digits; missing groups are written as `NaN`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        let cell = |v: Option<f64>| v.map_or_else(|| "NaN".to_string(), fmt_sig);
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.t,
                fmt_sig(r.all),
                cell(r.treatment),
                cell(r.neighbours),
                cell(r.rest),
                cell(r.control)
            )?;
        }
        out.flush()
    }
}

/// Runs `params.steps` steps from the all-zero state, recording group means
/// after every step. Divergence stops the run early and is reported through
/// [`TimeSeries::status`] rather than as an error.
pub fn simulate(
    g: &Graph,
    params: &DynamicsParams,
    partition: Option<&GroupPartition>,
) -> Result<TimeSeries> {
    params.validate()?;
    check_partition(g, partition)?;
    let labels = partition.map(|p| p.labels());
    let mut cur = ContentState::zeros(g.n());
    let mut next = ContentState::zeros(g.n());
    let mut rows = Vec::with_capacity(params.steps);
    let mut status = RunStatus::Completed;
    for _ in 0..params.steps {
        match step_into(g, &cur, &mut next, params, labels) {
            Ok(()) => {}
            Err(Error::Divergent { step }) => {
                status = RunStatus::Divergent { step };
                break;
            }
            Err(e) => return Err(e),
        }
        std::mem::swap(&mut cur, &mut next);
        let means = group_means(&cur, partition);
        rows.push(means);
        if !means.within_bounds() {
            status = RunStatus::Divergent { step: cur.t };
            break;
        }
    }
    Ok(TimeSeries {
        rows,
        status,
        final_state: cur,
    })
}

/// `1 − (1 + Δλ)·k·ν_damp`: positive is stable, zero grows linearly,
/// negative diverges.
pub fn stability_margin(k: f64, nu_damp: f64, delta_lambda: f64) -> f64 {
    1.0 - (1.0 + delta_lambda) * k * nu_damp
}

/// Mean-field steady state `λ_int / (1 − k·ν_damp)` of a graph with mean degree `k`.
pub fn analytic_c_base(lambda_int: f64, k: f64, nu_damp: f64) -> Result<f64> {
    let margin = stability_margin(k, nu_damp, 0.0);
    if margin <= 0.0 {
        return Err(Error::Unstable { margin });
    }
    Ok(lambda_int / margin)
}

/// Steady state when every node is treated, under the given boost rule.
///
/// * `Total`: `(1+Δλ)·λ_int / (1 − (1+Δλ)·k·ν_damp)`
/// * `Intrinsic`: `(1+Δλ)·λ_int / (1 − k·ν_damp)`
pub fn analytic_c_full(
    lambda_int: f64,
    k: f64,
    nu_damp: f64,
    delta_lambda: f64,
    boost: BoostTarget,
) -> Result<f64> {
    let margin = boost.stability_margin(k, nu_damp, delta_lambda);
    if margin <= 0.0 {
        return Err(Error::Unstable { margin });
    }
    Ok((1.0 + delta_lambda) * lambda_int / margin)
}

/// Solves `c = λ_int + ν_max·σ(c·k·ν_damp)` by damped fixed-point iteration.
pub fn regularized_fixed_point(lambda_int: f64, k: f64, nu_damp: f64, nu_max: f64) -> Result<f64> {
    if !(nu_max >= 0.0 && nu_max.is_finite()) {
        return Err(invalid(format!(
            "nu_max must be non-negative, got {nu_max}"
        )));
    }
    let map = |c: f64| lambda_int + nu_max * sigmoid(c * k * nu_damp);
    let mut c = lambda_int;
    for _ in 0..FIXED_POINT_MAX_ITERATIONS {
        let next = 0.5 * c + 0.5 * map(c);
        if (next - c).abs() < FIXED_POINT_TOLERANCE
            && (map(next) - next).abs() < FIXED_POINT_TOLERANCE
        {
            return Ok(next);
        }
        c = next;
    }
    Err(Error::NonConvergence {
        iterations: FIXED_POINT_MAX_ITERATIONS,
    })
}
