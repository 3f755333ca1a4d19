use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use active_cover::analysis::{
    compare_learners, fit_power_law, read_sweep_csv, summarize_sweep, write_rate_fit_csv,
    write_sweep_csv, RateFitRow, SweepResult,
};
use active_cover::distributions::{load_dataset, make_preset, write_dataset, Dataset};
use active_cover::learners::{LearnerConfig, LearnerKind};
use active_cover::simulation::{run_on_dataset, run_trial, trial_seed, QueryLog, RunResult};

use crate::config::{hex, stop_name, ExperimentConfig, LearnerEntry};
use crate::output::{meta_line, with_meta, write_file};

/// All trials of one (learner, n) pair.
struct Cell {
    learner: LearnerEntry,
    config: LearnerConfig,
    n: usize,
    results: Vec<RunResult>,
    logs: Vec<QueryLog>,
}

enum Source {
    Sampled,
    Loaded(Dataset<f64>),
}

fn prepare(cfg: &ExperimentConfig) -> Result<(Source, Vec<usize>)> {
    match &cfg.data {
        Some(path) => {
            let ds = load_dataset::<f64>(path)
                .with_context(|| format!("field 'data': cannot load {}", path.display()))?;
            let n = ds.n();
            Ok((Source::Loaded(ds), vec![n]))
        }
        None => {
            let mut ns = cfg.n.clone();
            ns.sort_unstable();
            ns.dedup();
            Ok((Source::Sampled, ns))
        }
    }
}

fn run_cells(cfg: &ExperimentConfig, keep_logs: bool) -> Result<Vec<Cell>> {
    let (source, ns) = prepare(cfg)?;
    let dim = match &source {
        Source::Loaded(ds) => ds.dim(),
        Source::Sampled => cfg.dim(),
    };
    cfg.validate(&ns)?;
    let stop = cfg.stop_rule()?;
    let spec = match source {
        Source::Sampled => Some(cfg.spec()?),
        Source::Loaded(_) => None,
    };
    let mut cells = Vec::new();
    for learner in &cfg.learners {
        for &n in &ns {
            let config = learner.config(n, dim);
            let runs: Vec<(QueryLog, RunResult)> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = trial_seed(cfg.base_seed, t);
                    match (&spec, &source) {
                        (Some(spec), _) => run_trial(spec, n, &config, stop, seed, cfg.checkpoints),
                        (None, Source::Loaded(ds)) => {
                            run_on_dataset(ds, &config, stop, seed, cfg.checkpoints)
                        }
                        (None, Source::Sampled) => unreachable!(),
                    }
                })
                .collect::<active_cover::Result<_>>()
                .with_context(|| format!("{} at n={n}", learner.kind))?;
            let (logs, results): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
            cells.push(Cell {
                learner: learner.clone(),
                config,
                n,
                results,
                logs: if keep_logs { logs } else { Vec::new() },
            });
        }
    }
    Ok(cells)
}

fn summary_line(s: &SweepResult) -> Vec<String> {
    s.rows
        .iter()
        .map(|r| {
            let ci = r
                .ci95
                .map_or("n/a".to_string(), |(lo, hi)| format!("[{lo:.2}, {hi:.2}]"));
            format!(
                "{} D={} n={} trials={} mean_excess={:.2} ci95={ci} mean_Q={:.1} mean_auc={:.4}",
                s.kind, s.dim, r.n, r.trials, r.mean_excess, r.mean_q, r.mean_auc
            )
        })
        .collect()
}

fn summarize(cells: &[Cell], cfg: &ExperimentConfig) -> Result<Vec<SweepResult>> {
    // cells are learner-major with the same pool sizes for every learner
    cells
        .chunks(cells.len() / cfg.learners.len())
        .map(|chunk| {
            let per_n: Vec<Vec<RunResult>> = chunk.iter().map(|c| c.results.clone()).collect();
            Ok(summarize_sweep(&per_n)?)
        })
        .collect()
}

pub fn run(cfg: &ExperimentConfig, emit_logs: bool) -> Result<()> {
    let cells = run_cells(cfg, emit_logs)?;
    let meta = meta_line(&cfg.hash(), &cfg.base_seed.to_string());
    let stop = stop_name(cfg.stop_rule()?);

    let mut results = String::from(
        "kind,D,n,trial,seed,m,sigma,stop,Q,Q_opt,q_opt_kind,excess,n_pos,auc,fallback_steps\n",
    );
    let mut recall = String::from("kind,D,n,trial,checkpoint,fraction_queried,recall\n");
    for c in &cells {
        let lc = &c.config;
        for (t, r) in c.results.iter().enumerate() {
            let seed = trial_seed(cfg.base_seed, t);
            let m = if lc.kind.has_explore_phase() {
                lc.initial_sample_m.to_string()
            } else {
                String::new()
            };
            let sigma = if lc.kind == LearnerKind::Ucb {
                lc.sigma.to_string()
            } else {
                String::new()
            };
            writeln!(
                results,
                "{},{},{},{t},{seed},{m},{sigma},{},{},{},{},{},{},{},{}",
                r.kind,
                r.dim,
                r.n,
                stop,
                r.q,
                r.q_opt,
                r.q_opt_kind.name(),
                r.excess,
                r.n_pos,
                r.auc,
                r.fallback_steps
            )?;
            let b = r.recall_curve.len();
            for (k, v) in r.recall_curve.iter().enumerate() {
                writeln!(
                    recall,
                    "{},{},{},{t},{},{},{v}",
                    r.kind,
                    r.dim,
                    r.n,
                    k + 1,
                    (k + 1) as f64 / b as f64
                )?;
            }
        }
        for (t, log) in c.logs.iter().enumerate() {
            let mut buf = Vec::new();
            log.write_csv(&mut buf)?;
            let name = format!("logs/{}-n{}-trial{t}.csv", c.learner.kind, c.n);
            write_file(&cfg.out.join(name), &with_meta(&meta, &buf))?;
        }
    }
    write_file(
        &cfg.out.join("results.csv"),
        &with_meta(&meta, results.as_bytes()),
    )?;
    write_file(
        &cfg.out.join("recall.csv"),
        &with_meta(&meta, recall.as_bytes()),
    )?;
    for s in summarize(&cells, cfg)? {
        for line in summary_line(&s) {
            println!("{line}");
        }
    }
    Ok(())
}

fn fit_rows(sweeps: &[SweepResult]) -> Vec<RateFitRow> {
    let mut rows = Vec::new();
    for s in sweeps {
        let distinct: BTreeSet<usize> = s.rows.iter().map(|r| r.n).collect();
        if distinct.len() < 3 {
            eprintln!(
                "warning: {} (D={}) has {} pool size(s); at least 3 are needed for a rate fit, skipped",
                s.kind,
                s.dim,
                distinct.len()
            );
            continue;
        }
        match fit_power_law(&s.ns(), &s.mean_excesses()) {
            Ok(fit) => rows.push(RateFitRow {
                kind: s.kind,
                dim: s.dim,
                fit,
            }),
            Err(e) => eprintln!("warning: {} (D={}) rate fit skipped: {e}", s.kind, s.dim),
        }
    }
    rows
}

fn print_fits(rows: &[RateFitRow]) {
    for r in rows {
        println!(
            "fit {} D={} slope={:.4} ci95=[{:.4}, {:.4}] r2={:.4} theoretical={:.4}",
            r.kind,
            r.dim,
            r.fit.slope,
            r.fit.slope_ci95.0,
            r.fit.slope_ci95.1,
            r.fit.r_squared,
            r.theoretical()
        );
    }
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<()> {
    let cells = run_cells(cfg, false)?;
    let meta = meta_line(&cfg.hash(), &cfg.base_seed.to_string());
    let sweeps = summarize(&cells, cfg)?;
    for s in &sweeps {
        for line in summary_line(s) {
            println!("{line}");
        }
    }

    let mut buf = Vec::new();
    write_sweep_csv(&sweeps, &meta, &mut buf)?;
    write_file(&cfg.out.join("sweep.csv"), &buf)?;

    let fits = fit_rows(&sweeps);
    print_fits(&fits);
    let mut buf = Vec::new();
    write_rate_fit_csv(&fits, &meta, &mut buf)?;
    write_file(&cfg.out.join("rate_fit.csv"), &buf)?;

    let largest = cells.iter().map(|c| c.n).max().expect("at least one cell");
    let report = compare_learners(&sweeps, largest)?;
    let mut text = String::from("kind,n,rank,mean_excess,ci_low,ci_high\n");
    for (rank, e) in report.entries.iter().enumerate() {
        let (lo, hi) = e.ci95.map_or((String::new(), String::new()), |(l, h)| {
            (l.to_string(), h.to_string())
        });
        writeln!(
            text,
            "{},{largest},{},{},{lo},{hi}",
            e.kind,
            rank + 1,
            e.mean_excess
        )?;
    }
    write_file(
        &cfg.out.join("comparison.csv"),
        &with_meta(&meta, text.as_bytes()),
    )?;
    match &report.strict_order {
        Some(order) => {
            let names: Vec<&str> = order.iter().map(|k| k.name()).collect();
            println!(
                "order at n={largest}: {} (all 95% intervals disjoint)",
                names.join(" < ")
            );
        }
        None => println!("order at n={largest}: not separated (some 95% intervals overlap)"),
    }
    Ok(())
}

pub fn gen_data(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let [n] = cfg.n[..] else {
        bail!(
            "field 'n': gen-data takes exactly one pool size, got {}",
            cfg.n.len()
        );
    };
    if n == 0 {
        bail!("field 'n': pool size must be at least 1");
    }
    let spec = match &cfg.distribution {
        Some(_) => cfg.spec()?,
        None => make_preset(cfg.preset, cfg.dim, cfg.p).context("fields 'preset'/'dim'/'p'")?,
    };
    let ds = spec.sample_dataset(n, cfg.base_seed)?;
    let mut buf = Vec::new();
    write_dataset(&ds, &mut buf, true)?;
    let meta = meta_line(&cfg.hash(), &cfg.base_seed.to_string());
    write_file(path, &with_meta(&meta, &buf))?;
    println!(
        "wrote {} points (D={}, {} positive) to {}",
        n,
        ds.dim(),
        ds.positive_count(),
        path.display()
    );
    Ok(())
}

pub fn fit_rate(input: &Path, out_dir: &Path) -> Result<()> {
    let bytes = std::fs::read(input).with_context(|| format!("cannot read {}", input.display()))?;
    let sweeps = read_sweep_csv(&bytes[..]).with_context(|| format!("{}", input.display()))?;
    if sweeps.is_empty() {
        bail!("{}: no sweep rows", input.display());
    }
    let base_seed = std::str::from_utf8(&bytes)
        .ok()
        .and_then(|t| t.lines().next())
        .filter(|l| l.starts_with('#'))
        .and_then(|l| {
            l.split_whitespace()
                .find_map(|w| w.strip_prefix("base_seed="))
        })
        .unwrap_or("unknown")
        .to_string();
    let fits = fit_rows(&sweeps);
    print_fits(&fits);
    let meta = meta_line(&hex(&Sha256::digest(&bytes)), &base_seed);
    let mut buf = Vec::new();
    write_rate_fit_csv(&fits, &meta, &mut buf)?;
    write_file(&out_dir.join("rate_fit.csv"), &buf)
}
