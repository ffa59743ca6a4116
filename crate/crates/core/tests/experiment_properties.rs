use netrct::experiments::mean_and_stddev;
use netrct::*;

fn ws(n: usize, k: usize, p: f64, seed: u64) -> Graph {
    generate_watts_strogatz(&WattsStrogatzParams::new(n, k, p, seed)).unwrap()
}

fn trial(n: usize, k: usize, seed: u64, assignment: Assignment, delta: f64) -> EffectReport {
    let cfg = ExperimentConfig::new(
        WattsStrogatzParams::new(n, k, 0.1, seed),
        DynamicsParams::constant(1.0, 0.01, 50).with_delta_lambda(delta),
        assignment,
    );
    run_experiment(&cfg).unwrap()
}

#[test]
fn content_rises_with_degree() {
    let g = ws(10_000, 50, 0.1, 1);
    let ts = simulate(&g, &DynamicsParams::constant(1.0, 0.01, 50), None).unwrap();
    let buckets = content_by_degree(&g, &ts.final_state).unwrap();
    let means: Vec<f64> = buckets.values().cloned().collect();
    assert!(means.len() > 10);
    assert!(means.windows(2).all(|w| w[0] < w[1]), "{buckets:?}");
    let at_k = buckets[&50];
    assert!((at_k / 2.0 - 1.0).abs() < 0.02, "{at_k}");
}

#[test]
fn lattice_has_one_degree_bucket_at_c_base() {
    let g = ws(2_000, 20, 0.0, 1);
    let ts = simulate(&g, &DynamicsParams::constant(1.0, 0.01, 60), None).unwrap();
    let buckets = content_by_degree(&g, &ts.final_state).unwrap();
    assert_eq!(buckets.len(), 1);
    assert!((buckets[&20] - 1.25).abs() < 1e-9);
}

#[test]
fn degree_effect_larger_at_higher_rewiring() {
    let base = ExperimentConfig::new(
        WattsStrogatzParams::new(10_000, 50, 0.0, 1),
        DynamicsParams::constant(1.0, 0.01, 50),
        Assignment::random(1, 0),
    );
    let sweep = run_p_sweep(&base, &[0.1, 0.5], 5).unwrap();
    let low = sweep.points[0].mean.e_degree_distribution.unwrap();
    let high = sweep.points[1].mean.e_degree_distribution.unwrap();
    assert!(low > 0.0 && high > low, "{low} {high}");
}

#[test]
fn random_trial_is_dampened_and_spills_over() {
    let r = trial(10_000, 50, 3, Assignment::random(500, 3), 0.2);
    let e_t = r.e_treatment.unwrap();
    assert!(0.0 < e_t && e_t < 0.2, "{e_t}");
    assert!(r.e_intrinsic.unwrap() > e_t);
    assert!(r.e_spillover.unwrap() > 0.0);
    assert!(r.c_neighbours.unwrap() > r.c_rest.unwrap());
    for c in [r.c_treatment, r.c_control, r.c_neighbours, r.c_rest] {
        assert!(c.unwrap() > 0.0);
    }
}

#[test]
fn clustering_reduces_spillover_over_seeds() {
    let (mut damp, mut spill) = (Vec::new(), Vec::new());
    for seed in 1..=5 {
        let random = trial(10_000, 50, seed, Assignment::random(200, seed), 0.05);
        let clustered = trial(10_000, 50, seed, Assignment::clustered(200), 0.05);
        damp.push(clustered.e_dampening.unwrap() - random.e_dampening.unwrap());
        spill.push(random.e_spillover.unwrap() - clustered.e_spillover.unwrap());
    }
    let (damp, _) = mean_and_stddev(&damp);
    let (spill, _) = mean_and_stddev(&spill);
    assert!(damp.unwrap() > 0.0, "{damp:?}");
    assert!(spill.unwrap() > 0.0, "{spill:?}");
}

fn model_gap(n: usize, model: ProductionModel) -> f64 {
    let g = ws(n, 50, 0.1, 1);
    let window = SteadyWindow::default();
    let constant = run_baseline(&g, &DynamicsParams::constant(1.0, 0.01, 50), window).unwrap();
    let gaps: Vec<f64> = (0..5)
        .map(|seed| {
            let params = DynamicsParams::constant(1.0, 0.01, 50)
                .with_model(model)
                .with_seed(seed);
            (run_baseline(&g, &params, window).unwrap() - constant).abs()
        })
        .collect();
    mean_and_stddev(&gaps).0.unwrap()
}

#[test]
fn stochastic_models_approach_constant_as_n_grows() {
    for model in [ProductionModel::Uniform, ProductionModel::Poisson] {
        let small = model_gap(10_000, model);
        let large = model_gap(100_000, model);
        assert!(large < small, "{model}: {small} -> {large}");
    }
}

fn large_trial(k: usize, size: usize, strategy: AssignmentStrategy) -> EffectReport {
    let cfg = ExperimentConfig::new(
        WattsStrogatzParams::new(500_000, k, 0.1, 1),
        DynamicsParams::constant(1.0, 0.01, 50).with_delta_lambda(0.05),
        Assignment {
            strategy,
            size,
            seed: 1,
        },
    );
    run_experiment(&cfg).unwrap()
}

#[test]
fn sparse_graph_trial_intrinsic_effect() {
    let r = large_trial(10, 5_000, AssignmentStrategy::Random);
    let e = r.e_intrinsic.unwrap();
    assert!((e / 0.0450 - 1.0).abs() <= 0.06, "{e}");
    let spill = r.e_spillover.unwrap();
    assert!((spill - 0.00005).abs() < 0.0001, "{spill}");
}

#[test]
fn clustered_trial_lifts_neighbours() {
    let r = large_trial(50, 10_000, AssignmentStrategy::Clustered);
    let ratio = r.relative(r.c_neighbours).unwrap();
    assert!((ratio - 1.0052).abs() <= 0.003, "{ratio}");
    let spill = r.e_spillover.unwrap();
    assert!((spill - 0.0001).abs() < 0.0001, "{spill}");
}

#[test]
fn aa_trial_random_assignment_has_no_effect() {
    let r = trial(10_000, 50, 4, Assignment::random(1_000, 4), 0.0);
    assert!(r.e_treatment.unwrap().abs() < 0.01);
    assert_eq!(r.e_dampening, None);
}
