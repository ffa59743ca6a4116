//! Command bodies and the files they write.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use netrct::experiments::{run_experiment_on, SweepResult};
use netrct::graph::{write_edge_list, Group};
use netrct::sig::fmt_sig;
use netrct::{
    content_by_degree, degree_histogram, generate_watts_strogatz, partition_by_treatment,
    run_p_sweep, run_size_sweep, Graph, GroupPartition, TimeSeries,
};

use crate::config::{Command, ScenarioConfig, SweepAxis};
use crate::Failure;

const DEFAULT_REPLICATIONS: usize = 5;

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(|e| Failure::Io(format!("creating {}: {e}", path.display())))?;
    Ok((path, BufWriter::new(file)))
}

fn out_dir(cfg: &ScenarioConfig) -> Result<PathBuf, Failure> {
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir)
        .map_err(|e| Failure::Io(format!("creating {}: {e}", dir.display())))?;
    Ok(dir)
}

fn build_graph(cfg: &ScenarioConfig) -> Result<Graph, Failure> {
    let params = cfg.graph_params();
    params.validate()?;
    Ok(generate_watts_strogatz(&params)?)
}

fn partition(cfg: &ScenarioConfig, g: &Graph) -> Result<Option<GroupPartition>, Failure> {
    match cfg.assignment()? {
        None => Ok(None),
        Some(a) => {
            let treated = a.assign(g)?;
            Ok(Some(partition_by_treatment(g, &treated)?))
        }
    }
}

fn group_name(g: Group) -> &'static str {
    match g {
        Group::Treatment => "treatment",
        Group::Neighbours => "neighbours",
        Group::Rest => "rest",
    }
}

/// Every validation a command performs before doing any work.
pub fn check(command: Command, cfg: &ScenarioConfig) -> Result<(), Failure> {
    let graph = cfg.graph_params();
    graph.validate()?;
    match command {
        Command::Generate => {
            if let Some(a) = cfg.assignment()? {
                check_size(a.size, graph.n)?;
            }
        }
        Command::Simulate => {
            for m in cfg.models()? {
                cfg.dynamics_params(m).validate()?;
            }
            cfg.window.validate(cfg.dynamics.steps)?;
            if let Some(a) = cfg.assignment()? {
                check_size(a.size, graph.n)?;
            }
        }
        Command::Experiment => {
            for m in cfg.models()? {
                cfg.experiment(m)?.validate()?;
            }
        }
        Command::Sweep => {
            let s = sweep_section(cfg)?;
            let base = cfg.sweep_base();
            match s.kind {
                SweepAxis::Size => {
                    nonempty("ks", s.ks.len())?;
                    nonempty("fractions", s.fractions.len())?;
                    for &k in &s.ks {
                        let mut c = base;
                        c.graph.k = k;
                        c.validate()?;
                    }
                }
                SweepAxis::P => {
                    nonempty("ps", s.ps.len())?;
                    for &p in &s.ps {
                        let mut g = base.graph;
                        g.p = p;
                        g.validate()?;
                    }
                    base.dynamics.validate()?;
                    base.window.validate(base.dynamics.steps)?;
                }
            }
            if cfg.replications == Some(0) {
                return Err(Failure::Invalid("replications must be at least 1".into()));
            }
        }
    }
    Ok(())
}

fn check_size(size: usize, n: usize) -> Result<(), Failure> {
    if size == 0 || size > n {
        return Err(Failure::Invalid(format!(
            "treatment size must lie in 1..={n}, got {size}"
        )));
    }
    Ok(())
}

fn nonempty(axis: &str, len: usize) -> Result<(), Failure> {
    if len == 0 {
        Err(Failure::Invalid(format!(
            "sweep axis `{axis}` must not be empty"
        )))
    } else {
        Ok(())
    }
}

fn sweep_section(cfg: &ScenarioConfig) -> Result<&crate::config::SweepSection, Failure> {
    cfg.sweep
        .as_ref()
        .ok_or_else(|| Failure::Invalid("sweep needs a sweep section".into()))
}

pub fn generate(cfg: &ScenarioConfig) -> Result<(), Failure> {
    let g = build_graph(cfg)?;
    let groups = partition(cfg, &g)?;
    let dir = out_dir(cfg)?;

    let (path, mut w) = create(&dir, "graph.edges")?;
    write_edge_list(&g, &cfg.graph_params(), &mut w)?;
    w.flush()?;
    eprintln!("wrote {}", path.display());

    let hist = degree_histogram(&g);
    let (_, mut w) = create(&dir, "degree_histogram.csv")?;
    writeln!(w, "degree,count")?;
    for (d, c) in &hist.counts {
        writeln!(w, "{d},{c}")?;
    }
    w.flush()?;

    if let Some(groups) = &groups {
        let (_, mut w) = create(&dir, "groups.csv")?;
        writeln!(w, "node,group")?;
        for (i, label) in groups.labels().iter().enumerate() {
            writeln!(w, "{i},{}", group_name(*label))?;
        }
        w.flush()?;
    }

    println!(
        "n={} edges={} mean_degree={} min_degree={} max_degree={} degree_variance={}",
        g.n(),
        g.edge_count(),
        fmt_sig(hist.mean()),
        hist.min_degree().unwrap_or(0),
        hist.max_degree().unwrap_or(0),
        fmt_sig(hist.variance()),
    );
    Ok(())
}

fn write_series(dir: &Path, name: &str, ts: &TimeSeries) -> Result<(), Failure> {
    let (_, w) = create(dir, name)?;
    ts.write_csv(w)?;
    Ok(())
}

pub fn simulate(cfg: &ScenarioConfig) -> Result<(), Failure> {
    let models = cfg.models()?;
    let g = build_graph(cfg)?;
    let groups = partition(cfg, &g)?;
    let dir = out_dir(cfg)?;

    let (_, mut summary) = create(&dir, "summary.csv")?;
    writeln!(
        summary,
        "model,status,divergent_step,steps_run,final_mean_all,steady_mean_all"
    )?;
    for model in models {
        let ts = netrct::simulate(&g, &cfg.dynamics_params(model), groups.as_ref())?;
        write_series(&dir, &format!("timeseries_{model}.csv"), &ts)?;

        let state = &ts.final_state;
        let (_, mut w) = create(&dir, &format!("final_{model}.csv"))?;
        writeln!(w, "node,degree,content")?;
        for (i, c) in state.values.iter().enumerate() {
            writeln!(w, "{i},{},{}", g.degree(i), fmt_sig(*c))?;
        }
        w.flush()?;

        let hist = degree_histogram(&g);
        let (_, mut w) = create(&dir, &format!("content_by_degree_{model}.csv"))?;
        writeln!(w, "degree,nodes,mean_content")?;
        for (d, c) in content_by_degree(&g, state)? {
            writeln!(w, "{d},{},{}", hist.counts[&d], fmt_sig(c))?;
        }
        w.flush()?;

        let divergent_step = match ts.status {
            netrct::RunStatus::Divergent { step } => step.to_string(),
            netrct::RunStatus::Completed => String::new(),
        };
        let steady = ts
            .window_mean(cfg.window.window)
            .map(|m| m.all)
            .unwrap_or(f64::NAN);
        let last = ts.rows.last().map(|r| r.all).unwrap_or(f64::NAN);
        writeln!(
            summary,
            "{model},{},{divergent_step},{},{},{}",
            ts.status.label(),
            ts.rows.len(),
            fmt_sig(last),
            fmt_sig(steady)
        )?;
        eprintln!(
            "simulate {model}: {} after {} steps, mean {}",
            ts.status.label(),
            ts.rows.len(),
            fmt_sig(last)
        );
    }
    summary.flush()?;
    Ok(())
}

pub fn experiment(cfg: &ScenarioConfig) -> Result<(), Failure> {
    let models = cfg.models()?;
    let configs = models
        .iter()
        .map(|&m| cfg.experiment(m))
        .collect::<Result<Vec<_>, Failure>>()?;
    let g = build_graph(cfg)?;
    let dir = out_dir(cfg)?;

    // the bare run does not depend on the treated run's model
    let mut c_base_prime = None;
    for (model, exp) in models.iter().zip(&configs) {
        let run = run_experiment_on(&g, exp, c_base_prime)?;
        c_base_prime = c_base_prime.or(run.report.c_base_prime);

        let (_, mut w) = create(&dir, &format!("report_{model}.json"))?;
        writeln!(w, "{}", run.report.to_json())?;
        w.flush()?;
        if let Some(ts) = &run.treated {
            write_series(&dir, &format!("timeseries_{model}.csv"), ts)?;
        }
        eprintln!(
            "experiment {model}: {}, e_treatment {}, e_dampening {}",
            run.report.status.label(),
            fmt_sig(run.report.e_treatment.unwrap_or(f64::NAN)),
            fmt_sig(run.report.e_dampening.unwrap_or(f64::NAN))
        );
    }
    Ok(())
}

pub fn sweep(cfg: &ScenarioConfig) -> Result<(), Failure> {
    let s = sweep_section(cfg)?;
    let replications = cfg.replications.unwrap_or(DEFAULT_REPLICATIONS);
    let base = cfg.sweep_base();
    let result: SweepResult = match s.kind {
        SweepAxis::Size => {
            nonempty("ks", s.ks.len())?;
            nonempty("fractions", s.fractions.len())?;
            run_size_sweep(&base, &s.fractions, &s.ks, replications)?
        }
        SweepAxis::P => {
            nonempty("ps", s.ps.len())?;
            run_p_sweep(&base, &s.ps, replications)?
        }
    };
    let dir = out_dir(cfg)?;
    let (path, w) = create(&dir, "sweep.csv")?;
    result.write_csv(w)?;
    eprintln!(
        "sweep: {} points -> {}",
        result.points.len(),
        path.display()
    );

    if s.kind == SweepAxis::P {
        let (_, mut w) = create(&dir, "degree_histograms.csv")?;
        writeln!(w, "p,degree,count")?;
        for &p in &s.ps {
            let mut params = cfg.graph_params();
            params.p = p;
            let hist = degree_histogram(&generate_watts_strogatz(&params)?);
            for (d, c) in &hist.counts {
                writeln!(w, "{},{d},{c}", fmt_sig(p))?;
            }
        }
        w.flush()?;
    }
    Ok(())
}
