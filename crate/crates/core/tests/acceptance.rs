//! Acceptance checks, one line per criterion.
//!
//! The two simulation studies (criteria 5 and 6) take most of an hour each
//! on one core and run only with `ERGM_EE_FULL_ACCEPTANCE=1`; otherwise they
//! are reported as SKIP.

mod common;

use std::fmt;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::*;
use ergm_ee::attributes::AttributeSet;
use ergm_ee::change_stats::{change_stats_all, Direction};
use ergm_ee::estimator::{cd_initialize, init_d, EeChain, EeConfig, OuterStep, ThetaTrace};
use ergm_ee::fit::fit;
use ergm_ee::graph::{Digraph, TwoPathKind};
use ergm_ee::inference::*;
use ergm_ee::model::{EffectKind, ModelSpec};
use ergm_ee::rng::{stream, Purpose};
use ergm_ee::sampler::{arc_param_from_v, ifd_sampler, SamplerKind, SamplerState};
use ergm_ee::simulate::{default_burnin, simulate, AttributeRule, SimSpec};
use ergm_ee::study::{run_study, EeStudy, StudyResult};
use rand::Rng;
use rand_distr::StandardNormal;

enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

type Outcome = (Status, String);

fn verdict(ok: bool, detail: String) -> Outcome {
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

fn change_statistics() -> Outcome {
    let mut worst = 0.0f64;
    let mut toggles = 0;
    let mut graphs = 0;
    for seed in 0..200 {
        let mut r = rng(1000 + seed);
        let n = r.random_range(2..=30);
        let density = r.random_range(0.0..=0.2);
        let mut g = random_graph(&mut r, n, density);
        let attrs = random_attributes(&mut r, n);
        let model = full_model(&attrs, 2.0);
        for _ in 0..10 {
            let (i, j) = g.random_dyad(&mut r);
            let before = full_statistics(&model, &g, &attrs);
            let direction = if g.is_arc(i, j) {
                Direction::Delete
            } else {
                Direction::Add
            };
            let delta = change_stats_all(&model, &mut g, &attrs, i, j, direction).unwrap();
            match direction {
                Direction::Add => g.insert_arc(i, j).unwrap(),
                Direction::Delete => g.delete_arc(i, j).unwrap(),
            }
            let after = full_statistics(&model, &g, &attrs);
            for k in 0..model.len() {
                let diff = after[k] - before[k];
                worst = worst.max((delta[k] - diff).abs() / diff.abs().max(1.0));
            }
            toggles += 1;
        }
        graphs += 1;
    }
    verdict(
        worst <= 1e-9,
        format!("{graphs} graphs, {toggles} toggles, all effects, max relative error {worst:.1e}"),
    )
}

fn two_path_tables() -> Outcome {
    let mut mismatches = 0;
    let mut ops = 0;
    for seed in 0..2 {
        let mut r = rng(2000 + seed);
        let mut g = random_graph(&mut r, 50, 0.05);
        for step in 1..=10_000 {
            let (i, j) = g.random_dyad(&mut r);
            if g.is_arc(i, j) {
                g.delete_arc(i, j).unwrap();
            } else {
                g.insert_arc(i, j).unwrap();
            }
            ops += 1;
            if step % 1000 == 0 {
                let d = Dense::new(&g);
                for i in 0..50 {
                    for j in 0..50 {
                        if i != j {
                            mismatches += usize::from(g.two_path_count(TwoPathKind::Mix, i, j) != d.mix[i][j]);
                            mismatches += usize::from(g.two_path_count(TwoPathKind::In, i, j) != d.ind[i][j]);
                            mismatches += usize::from(g.two_path_count(TwoPathKind::Out, i, j) != d.outd[i][j]);
                        }
                    }
                }
            }
        }
    }
    verdict(
        mismatches == 0,
        format!("{ops} operations on N=50, {mismatches} mismatched entries"),
    )
}

/// Bernoulli graph with N = 500 at density 0.005, drawn by the simulator.
fn bernoulli_graph() -> Digraph {
    let p: f64 = 0.005;
    let spec = SimSpec {
        n: 500,
        model: ModelSpec::structural(&[EffectKind::Arc]),
        theta: vec![(p / (1.0 - p)).ln()],
        burnin: default_burnin(500, p),
        interval: 1,
        n_samples: 1,
        seed: 31,
    };
    simulate(&spec, &AttributeSet::new(500)).unwrap().graphs.pop().unwrap()
}

fn log_odds(g: &Digraph) -> f64 {
    let p = g.density();
    (p / (1.0 - p)).ln()
}

fn bernoulli_recovery(g: &Digraph) -> Outcome {
    let attrs = AttributeSet::new(g.num_nodes());
    let model = ModelSpec::structural(&[EffectKind::Arc]);
    let f = fit(g, &attrs, &model, &EeConfig::default(), 5, 8).unwrap();
    let Some(p) = f.pooled else {
        return verdict(false, "no run converged".into());
    };
    let mle = log_odds(g);
    let max_t = f
        .runs
        .iter()
        .filter(|r| r.converged)
        .map(|r| r.t_ratio[0].abs())
        .fold(0.0, f64::max);
    let ok = (p.theta[0] - mle).abs() <= 0.1 && max_t <= 0.3;
    verdict(
        ok,
        format!(
            "theta_L {:.4} vs MLE {mle:.4} (arcs {}), {} of 8 runs converged, max |t| {max_t:.3}",
            p.theta[0],
            g.num_arcs(),
            p.n_runs_used
        ),
    )
}

fn ifd_invariants(g: &Digraph) -> Outcome {
    let n = g.num_nodes();
    let attrs = AttributeSet::new(n);
    let model = ModelSpec::new();
    let cfg = EeConfig {
        sampler: SamplerKind::Ifd,
        ..EeConfig::default()
    };
    let mut state = SamplerState::new(stream(6, Purpose::Estimation, 0)).with_ifd_k(cfg.ifd_k);
    let theta0 = cd_initialize(g, &attrs, &model, &cfg, &mut state).unwrap();
    let d0 = init_d(g, &attrs, &model);
    let mut chain = EeChain::new(g, &attrs, &model, &cfg, theta0.clone(), d0, state).unwrap();
    let mut trace = ThetaTrace {
        run_index: 0,
        effect_names: Vec::new(),
        sampler: SamplerKind::Ifd,
        theta0,
        observed: Vec::new(),
        records: Vec::new(),
        diverged: None,
    };
    let mut max_gap = 0;
    for _ in 0..cfg.ee_steps {
        match chain.outer_iteration().unwrap() {
            OuterStep::Record(rec) => trace.records.push(rec),
            OuterStep::Diverged(reason) => return verdict(false, format!("diverged: {reason}")),
        }
        max_gap = max_gap.max(chain.graph().num_arcs().abs_diff(g.num_arcs()));
    }
    let est = estimate_run(&trace, DEFAULT_RETAIN_FRACTION);
    let theta_l = est.theta_hat[0];
    let v = trace.records.last().unwrap().v;
    let from_v = arc_param_from_v(v, g.num_arcs() as u64, n as u64).unwrap();
    let mle = log_odds(g);

    // at θ = 0 and V = 0 every proposal is accepted, so adds and deletes
    // alternate and V stays at 0
    let mut h = g.clone();
    let recip = ModelSpec::structural(&[EffectKind::Reciprocity]);
    let mut st = SamplerState::new(stream(7, Purpose::Estimation, 0));
    let out = ifd_sampler(&mut h, &attrs, &recip, &[0.0], 10_000, &mut st).unwrap();
    let rate = out.accepted as f64 / 10_000.0;

    let ok = max_gap <= 1 && (theta_l - mle).abs() <= 0.15 && rate == 1.0 && st.v == 0.0;
    verdict(
        ok,
        format!(
            "max |L-L_obs| {max_gap}, theta_L {theta_l:.4} (final V gives {from_v:.4}) vs MLE {mle:.4}, \
             theta=0 acceptance {rate} and V {}",
            st.v
        ),
    )
}

fn run_full_study(effects: &[(&str, f64)], rule: AttributeRule) -> StudyResult {
    let study = EeStudy {
        n: 500,
        effects: effects.iter().map(|(s, v)| (s.to_string(), *v)).collect(),
        attribute_rule: rule,
        binary_name: "b".into(),
        categorical_name: "c".into(),
        burnin: 10_000_000,
        ee: EeConfig::default(),
        n_runs: 8,
        seed: 11,
    };
    run_study(&study.truth().unwrap(), 20, &study).unwrap()
}

fn print_study(result: &StudyResult) {
    for e in &result.effects {
        println!(
            "    {:<22} bias {:>8.4} rmse {:>7.4} rate {:>5.1} [{:>5.1}, {:>5.1}] in C.I. {:>5.1}",
            e.effect, e.bias, e.rmse, e.rate, e.rate_lower, e.rate_upper, e.coverage
        );
    }
    println!(
        "    N_C {} of {}, mean runs {:.2}",
        result.n_converged, result.n_networks, result.mean_runs
    );
}

fn binary_study(full: bool) -> Outcome {
    if !full {
        return (
            Status::Skip,
            "set ERGM_EE_FULL_ACCEPTANCE=1 (about 40 min on one core)".into(),
        );
    }
    let result = run_full_study(
        &[
            ("Arc", -1.0),
            ("Reciprocity", 4.25),
            ("AinSpread", -2.0),
            ("AoutSpread", -1.5),
            ("AltKTrianglesT", 0.6),
            ("AltTwoPathTD", -0.15),
            ("Interaction(b)", 2.0),
            ("Sender(b)", 1.5),
            ("Receiver(b)", 1.0),
        ],
        AttributeRule {
            binary_true_fraction: Some(0.1),
            num_categories: None,
        },
    );
    print_study(&result);
    let get = |name: &str| result.effects.iter().find(|e| e.effect == name).unwrap();
    let zero_fnr = [
        "Reciprocity",
        "AinSpread",
        "AoutSpread",
        "Sender_b",
        "Receiver_b",
        "Interaction_b",
    ]
    .iter()
    .filter(|n| get(n).rate > 0.0)
    .map(|n| n.to_string())
    .collect::<Vec<_>>();
    let recip = get("Reciprocity");
    let sender = get("Sender_b");
    let ok = zero_fnr.is_empty() && recip.coverage >= 80.0 && recip.rmse <= 0.5 && sender.bias < 0.0;
    verdict(
        ok,
        format!(
            "nonzero Type II rates {zero_fnr:?}, Reciprocity coverage {:.0}% RMSE {:.3}, Sender bias {:.3}",
            recip.coverage, recip.rmse, sender.bias
        ),
    )
}

fn categorical_study(full: bool) -> Outcome {
    if !full {
        return (
            Status::Skip,
            "set ERGM_EE_FULL_ACCEPTANCE=1 (about 45 min on one core)".into(),
        );
    }
    let result = run_full_study(
        &[
            ("Arc", -1.0),
            ("Reciprocity", 0.0),
            ("AinSpread", -2.0),
            ("AoutSpread", -1.5),
            ("AltKTrianglesT", 1.0),
            ("AltTwoPathTD", -0.15),
            ("Matching(c)", 1.5),
            ("MatchingReciprocity(c)", 2.0),
        ],
        AttributeRule {
            binary_true_fraction: None,
            num_categories: Some(3),
        },
    );
    print_study(&result);
    let r = result.effects.iter().find(|e| e.effect == "Reciprocity").unwrap();
    verdict(
        r.rate <= 10.0 && r.rate_lower <= 5.0,
        format!(
            "Reciprocity FPR {:.1}% [{:.1}, {:.1}] over {} networks",
            r.rate, r.rate_lower, r.rate_upper, result.n_converged
        ),
    )
}

fn inference_oracles() -> Outcome {
    let (_, hi) = wilson_interval(0, 100).unwrap();
    let run = |t: f64| RunEstimate {
        names: vec!["x".into()],
        theta_hat: vec![t],
        se: vec![0.2],
        t_ratio: vec![0.0],
        converged: true,
        diverged_reason: None,
    };
    let pooled = pool_runs(&[run(1.0), run(2.0), run(6.0)]).unwrap();
    let rho: f64 = 0.5;
    let n = 40_000;
    let mut r = rng(77);
    let mut x: f64 = r.sample::<f64, _>(StandardNormal) / (1.0 - rho * rho).sqrt();
    let chain: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            x = rho * x + r.sample::<f64, _>(StandardNormal);
            vec![x]
        })
        .collect();
    let bm = batch_means_cov(&chain).unwrap().cov[(0, 0)];
    let nf = n as f64;
    let sum: f64 = (1..n).map(|k| (1.0 - k as f64 / nf) * rho.powi(k)).sum();
    let exact = (1.0 + 2.0 * sum) / (1.0 - rho * rho) / nf;
    let ratio = bm / exact;
    let ok = (hi - 0.0370).abs() < 1e-4 && (pooled.theta[0] - 3.0).abs() < 1e-12 && (ratio - 1.0).abs() <= 0.4;
    verdict(
        ok,
        format!(
            "Wilson(0,100) upper {hi:.4}, equal-se pooled mean {:.6} of (1,2,6), AR(1) batch-means ratio {ratio:.3}",
            pooled.theta[0]
        ),
    )
}

fn peak_memory_mb() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

/// Random graph on `n` nodes with about `n · degree` arcs, a tenth of them
/// reciprocated.
fn sparse_graph(n: usize, degree: f64, seed: u64) -> Digraph {
    let mut r = rng(seed);
    let target = (n as f64 * degree) as usize;
    let mut arcs = rustc_hash::FxHashSet::default();
    while arcs.len() < target {
        let i = r.random_range(0..n);
        let j = r.random_range(0..n);
        if i == j {
            continue;
        }
        arcs.insert((i, j));
        if r.random::<f64>() < 0.1 && arcs.len() < target {
            arcs.insert((j, i));
        }
    }
    let mut arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
    arcs.sort_unstable();
    Digraph::from_arcs(n, arcs).unwrap()
}

fn scale_smoke() -> Outcome {
    let start = Instant::now();
    let g = sparse_graph(100_000, 5.0, 8);
    let built = start.elapsed().as_secs_f64();
    let attrs = AttributeSet::new(g.num_nodes());
    let model = ModelSpec::structural(&[EffectKind::Reciprocity]);
    // large-network settings (long CD, larger K_A, IFD); only the number
    // of outer iterations is cut to 100
    let cfg = EeConfig {
        sampler: SamplerKind::Ifd,
        aca_ee: 1e-7,
        ee_steps: 100,
        s_steps: 1000,
        ifd_k: 0.1,
        ..EeConfig::default()
    };
    let trace = ergm_ee::estimator::ee_estimate(&g, &attrs, &model, &cfg, 9, 0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mem = peak_memory_mb();
    let done = trace.records.len() == 100 && trace.diverged.is_none();
    let ok = done && secs < 1800.0 && mem.is_none_or(|m| m < 4096.0);
    let est = estimate_run(&trace, DEFAULT_RETAIN_FRACTION);
    verdict(
        ok,
        format!(
            "N=100000, {} arcs, {} outer iterations in {secs:.0}s (graph built in {built:.1}s), peak memory {}, \
             theta (Arc, Reciprocity) = ({:.3}, {:.3}), max |t| {:.3}",
            g.num_arcs(),
            trace.records.len(),
            mem.map_or("unknown".into(), |m| format!("{m:.0} MB")),
            est.theta_hat[0],
            est.theta_hat[1],
            est.t_ratio.iter().fold(0.0f64, |m, t| m.max(t.abs())),
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let g = random_graph(&mut rng(12), 150, 0.03);
    ergm_ee::io::save_arclist(&g, &dir.path().join("g.net")).unwrap();
    std::fs::write(
        dir.path().join("est.cfg"),
        "EEsteps = 200\narclistFile = g.net\nstructParams = {Arc, Reciprocity, AinSpread, AltKTrianglesT}\n",
    )
    .unwrap();
    let run = |out: &str| {
        Command::new(env!("CARGO_BIN_EXE_ergm-ee"))
            .args(["--seed", "21", "--runs", "3", "--out-dir", out, "estimate", "est.cfg"])
            .current_dir(dir.path())
            .env("RUST_LOG", "error")
            .output()
            .unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    let mut files = 0;
    let mut differ = Vec::new();
    for r in 0..3 {
        for prefix in ["theta_trace", "dzA_trace"] {
            let name = format!("{prefix}_{r}.csv");
            let read = |d: &str| std::fs::read(dir.path().join(d).join(&name)).unwrap_or_default();
            let (x, y) = (read("a"), read("b"));
            files += 1;
            if x.is_empty() || x != y {
                differ.push(name);
            }
        }
    }
    let same_status = a.status.code() == b.status.code();
    verdict(
        differ.is_empty() && same_status && Path::new(&dir.path().join("a/summary.txt")).exists(),
        format!("{files} trace files compared byte for byte, differing: {differ:?}"),
    )
}

fn main() {
    let full = std::env::var("ERGM_EE_FULL_ACCEPTANCE").is_ok_and(|v| v == "1");
    let g = bernoulli_graph();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(change_statistics)),
        (2, Box::new(two_path_tables)),
        (3, Box::new(|| bernoulli_recovery(&g))),
        (4, Box::new(|| ifd_invariants(&g))),
        (5, Box::new(move || binary_study(full))),
        (6, Box::new(move || categorical_study(full))),
        (7, Box::new(inference_oracles)),
        (8, Box::new(scale_smoke)),
        (9, Box::new(determinism)),
    ];
    let mut failed = 0;
    for (k, check) in criteria {
        let start = Instant::now();
        let (status, detail) = check();
        if matches!(status, Status::Fail) {
            failed += 1;
        }
        println!(
            "criterion {k}: {status} ({detail}; {:.1}s)",
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
