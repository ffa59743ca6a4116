//! Scenario files: one JSON document per run, every section optional.

use std::path::{Path, PathBuf};

use netrct::experiments::size_for_fraction;
use netrct::{
    Assignment, AssignmentStrategy, BoostTarget, DynamicsParams, ExperimentConfig, ProductionModel,
    Regularization, SteadyWindow, WattsStrogatzParams,
};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Generate,
    Simulate,
    Experiment,
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GraphSection {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

impl Default for GraphSection {
    fn default() -> Self {
        Self {
            n: 10_000,
            k: 50,
            p: 0.1,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsSection {
    pub lambda_int: f64,
    pub nu_damp: f64,
    pub delta_lambda: f64,
    pub model: ProductionModel,
    pub boost: BoostTarget,
    pub regularization: Regularization,
    pub steps: usize,
    pub seed: u64,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        Self {
            lambda_int: 1.0,
            nu_damp: 0.01,
            delta_lambda: 0.0,
            model: ProductionModel::Constant,
            boost: BoostTarget::Intrinsic,
            regularization: Regularization::none(),
            steps: 50,
            seed: 1,
        }
    }
}

/// Treatment group, by absolute `size` or by `fraction` of `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AssignmentSection {
    pub strategy: AssignmentStrategy,
    pub size: Option<usize>,
    pub fraction: Option<f64>,
    pub seed: u64,
}

impl Default for AssignmentSection {
    fn default() -> Self {
        Self {
            strategy: AssignmentStrategy::Random,
            size: None,
            fraction: None,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Size,
    P,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub kind: SweepAxis,
    #[serde(default = "default_ks")]
    pub ks: Vec<usize>,
    #[serde(default = "default_fractions")]
    pub fractions: Vec<f64>,
    #[serde(default = "default_ps")]
    pub ps: Vec<f64>,
}

fn default_ks() -> Vec<usize> {
    vec![10, 20, 30, 40, 50]
}

fn default_fractions() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

fn default_ps() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub command: Option<Command>,
    pub graph: GraphSection,
    pub dynamics: DynamicsSection,
    /// Production models to run; defaults to `dynamics.model` alone.
    pub models: Option<Vec<ProductionModel>>,
    pub assignment: Option<AssignmentSection>,
    pub window: SteadyWindow,
    pub baseline_model: Option<ProductionModel>,
    pub allow_unstable: bool,
    pub sweep: Option<SweepSection>,
    pub replications: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn graph_params(&self) -> WattsStrogatzParams {
        let g = &self.graph;
        WattsStrogatzParams::new(g.n, g.k, g.p, g.seed)
    }

    pub fn dynamics_params(&self, model: ProductionModel) -> DynamicsParams {
        let d = &self.dynamics;
        DynamicsParams::constant(d.lambda_int, d.nu_damp, d.steps)
            .with_delta_lambda(d.delta_lambda)
            .with_model(model)
            .with_boost(d.boost)
            .with_regularization(d.regularization)
            .with_seed(d.seed)
    }

    pub fn models(&self) -> Result<Vec<ProductionModel>, Failure> {
        match &self.models {
            None => Ok(vec![self.dynamics.model]),
            Some(m) if m.is_empty() => Err(Failure::Invalid("models must not be empty".into())),
            Some(m) => {
                let mut seen = Vec::new();
                for model in m {
                    if seen.contains(model) {
                        return Err(Failure::Invalid(format!("model {model} listed twice")));
                    }
                    seen.push(*model);
                }
                Ok(seen)
            }
        }
    }

    /// The configured assignment, or `None` when the scenario has none.
    pub fn assignment(&self) -> Result<Option<Assignment>, Failure> {
        let Some(a) = &self.assignment else {
            return Ok(None);
        };
        let size = match (a.size, a.fraction) {
            (Some(size), None) => size,
            (None, Some(f)) if f > 0.0 && f <= 1.0 => size_for_fraction(self.graph.n, f),
            (None, Some(f)) => {
                return Err(Failure::Invalid(format!(
                    "assignment fraction must lie in (0, 1], got {f}"
                )))
            }
            (Some(_), Some(_)) => {
                return Err(Failure::Invalid(
                    "assignment takes either size or fraction, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Failure::Invalid(
                    "assignment needs a size or a fraction".into(),
                ))
            }
        };
        Ok(Some(Assignment {
            strategy: a.strategy,
            size,
            seed: a.seed,
        }))
    }

    pub fn experiment(&self, model: ProductionModel) -> Result<ExperimentConfig, Failure> {
        let assignment = self
            .assignment()?
            .ok_or_else(|| Failure::Invalid("experiment needs an assignment section".into()))?;
        Ok(ExperimentConfig {
            graph: self.graph_params(),
            dynamics: self.dynamics_params(model),
            assignment,
            window: self.window,
            baseline_model: self.baseline_model,
            allow_unstable: self.allow_unstable,
        })
    }

    /// Base configuration of a sweep. The treatment size is a placeholder
    /// that size sweeps replace per point.
    pub fn sweep_base(&self) -> ExperimentConfig {
        let assignment = self
            .assignment
            .as_ref()
            .map(|a| Assignment {
                strategy: a.strategy,
                size: 1,
                seed: a.seed,
            })
            .unwrap_or_else(|| Assignment::random(1, 1));
        ExperimentConfig {
            graph: self.graph_params(),
            dynamics: self.dynamics_params(self.dynamics.model),
            assignment,
            window: self.window,
            baseline_model: self.baseline_model,
            allow_unstable: self.allow_unstable,
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}
