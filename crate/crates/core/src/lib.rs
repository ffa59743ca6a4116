//! Monte Carlo simulation of content production on Watts-Strogatz graphs,
//! and of randomized controlled trials run on top of it.
//!
//! * [`graph`]: connected Watts-Strogatz generation, degree statistics and
//!   treatment / neighbours / rest partitions.
//! * [`dynamics`]: the discrete-time feedback process, its production models
//!   and regularizers, and closed-form steady states.
//! * [`experiments`]: treatment assignment, effect metrics and sweeps.
//!
//! Every run is a pure function of its parameters (seeds included) and gives
//! the same bits regardless of the rayon thread count.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod rng;
pub mod sig;

pub use dynamics::{
    analytic_c_base, analytic_c_full, regularized_fixed_point, simulate, stability_margin, step,
    BoostTarget, ContentState, DynamicsParams, GroupMeans, ProductionModel, Regularization,
    RegularizationMode, RunStatus, TimeSeries,
};
pub use error::{Error, Result};
pub use experiments::{
    assign_clustered, assign_random, content_by_degree, degree_distribution_effect, run_baseline,
    run_experiment, run_p_sweep, run_size_sweep, Assignment, AssignmentStrategy, EffectReport,
    ExperimentConfig, SteadyWindow, SweepResult,
};
pub use graph::{
    degree_histogram, generate_watts_strogatz, mean_degree_of, partition_by_treatment,
    within_group_edge_fraction, DegreeHistogram, Graph, GroupPartition, NodeId,
    WattsStrogatzParams,
};
