//! Command-line front end.
//!
//! ```text
//! ergm-ee estimate <config>      EE estimation of the network in arclistFile
//! ergm-ee simulate <config>      draw networks at the configured parameter values
//! ergm-ee validate <config>      simulation study: simulate, estimate, summarise
//! ergm-ee diagnostics <arclist>  summary statistics of a network
//! ```
//!
//! Exit status is 0 on success, 2 when estimation found no converged run
//! (or a study no converged network), and 1 on input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::attributes::{AttributeKind, AttributeSet};
use crate::config::Config;
use crate::fit::fit;
use crate::graph::Digraph;
use crate::io;
use crate::model::EffectKind;
use crate::simulate::{default_burnin, diagnostics_summary, generate_attributes, simulate, AttributeRule, SimSpec};
use crate::study::{run_study, write_study_report, EeStudy};
use crate::{Error, Result};

const BINARY_EFFECTS: &[&str] = &["Sender", "Receiver", "Interaction"];
const CATEGORICAL_EFFECTS: &[&str] = &[
    "Matching",
    "Mismatching",
    "MatchingReciprocity",
    "MismatchingReciprocity",
];

#[derive(Debug, Parser)]
#[command(
    name = "ergm-ee",
    version,
    about = "Equilibrium Expectation ERGM estimation for sparse directed networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Master random seed (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of parallel estimation runs (overrides numRuns).
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the configured model on arclistFile.
    Estimate { config: PathBuf },
    /// Simulate networks at the configured parameter values.
    Simulate { config: PathBuf },
    /// Simulation study of estimator bias, coverage and error rates.
    Validate { config: PathBuf },
    /// Summary statistics of a Pajek arc list.
    Diagnostics { arclist: PathBuf },
}

/// Outcome of a successful command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    NotConverged,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Converged => ExitCode::SUCCESS,
            Outcome::NotConverged => ExitCode::from(2),
        }
    }
}

fn load_config(path: &Path, cli: &Cli) -> Result<Config> {
    let mut cfg = Config::from_file(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(runs) = cli.runs {
        if runs == 0 {
            return Err(Error::Config("--runs must be positive".into()));
        }
        cfg.num_runs = runs;
    }
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Attributes from the files named in `cfg`, for `n` nodes.
pub fn load_attributes(cfg: &Config, n: usize) -> Result<AttributeSet> {
    let mut attrs = AttributeSet::new(n);
    let files = [
        (&cfg.binattr_file, AttributeKind::Binary),
        (&cfg.catattr_file, AttributeKind::Categorical),
        (&cfg.contattr_file, AttributeKind::Continuous),
    ];
    for (file, kind) in files {
        if let Some(path) = file {
            attrs.merge(io::read_attributes(path, kind, n)?)?;
        }
    }
    Ok(attrs)
}

fn attribute_rule(cfg: &Config) -> Result<(AttributeRule, String, String)> {
    let bin_cols = cfg.referenced_columns(BINARY_EFFECTS);
    let cat_cols = cfg.referenced_columns(CATEGORICAL_EFFECTS);
    if bin_cols.len() > 1 || cat_cols.len() > 1 {
        return Err(Error::Config(
            "generated attributes support one binary and one categorical column".into(),
        ));
    }
    if cfg.contattr_file.is_none()
        && !cfg
            .referenced_columns(&["ContinuousSender", "ContinuousReceiver", "Diff"])
            .is_empty()
    {
        return Err(Error::Config(
            "continuous attributes cannot be generated; set contattrFile".into(),
        ));
    }
    let rule = AttributeRule {
        binary_true_fraction: if bin_cols.is_empty() {
            None
        } else {
            Some(
                cfg.bin_true_fraction
                    .ok_or_else(|| Error::Config("binary effects need binTrueFraction (or binattrFile)".into()))?,
            )
        },
        num_categories: if cat_cols.is_empty() {
            None
        } else {
            Some(
                cfg.num_categories
                    .ok_or_else(|| Error::Config("categorical effects need numCategories (or catattrFile)".into()))?,
            )
        },
    };
    let name = |c: Vec<String>| c.into_iter().next().unwrap_or_default();
    Ok((rule, name(bin_cols), name(cat_cols)))
}

/// Burn-in for simulation when none is configured: from the density of
/// arclistFile if given, else from the Arc parameter.
fn burnin_for(cfg: &Config, n: usize, arc_theta: Option<f64>) -> Result<u64> {
    if let Some(b) = cfg.burnin {
        return Ok(b);
    }
    let density = match &cfg.arclist_file {
        Some(path) => io::read_arclist(path)?.density(),
        None => arc_theta.map_or(0.5, |t| 1.0 / (1.0 + (-t).exp())),
    };
    Ok(default_burnin(n, density))
}

pub fn estimate_command(cfg: &Config, out_dir: &Path) -> Result<Outcome> {
    let path = cfg
        .arclist_file
        .as_ref()
        .ok_or_else(|| Error::Config("estimate needs arclistFile".into()))?;
    let g = io::read_arclist(path)?;
    let attrs = load_attributes(cfg, g.num_nodes())?;
    let model = cfg.model(&attrs)?;
    log::info!(
        "estimating {} effects on {} nodes, {} arcs, {} runs",
        model.len(),
        g.num_nodes(),
        g.num_arcs(),
        cfg.num_runs
    );
    let f = fit(&g, &attrs, &model, &cfg.ee, cfg.seed, cfg.num_runs)?;
    io::emit_results(f.pooled.as_ref(), &f.runs, &f.traces, out_dir)?;
    match &f.pooled {
        Some(p) => {
            print!("{}", io::format_summary(p, &f.runs));
            Ok(Outcome::Converged)
        }
        None => {
            eprintln!("no run converged; see {}", out_dir.join("summary.txt").display());
            Ok(Outcome::NotConverged)
        }
    }
}

pub fn simulate_command(cfg: &Config, out_dir: &Path) -> Result<Outcome> {
    let n = cfg
        .num_nodes
        .ok_or_else(|| Error::Config("simulate needs numNodes".into()))?;
    let (rule, bin_name, cat_name) = attribute_rule(cfg)?;
    let mut attrs = load_attributes(cfg, n)?;
    let generate = AttributeRule {
        binary_true_fraction: rule.binary_true_fraction.filter(|_| cfg.binattr_file.is_none()),
        num_categories: rule.num_categories.filter(|_| cfg.catattr_file.is_none()),
    };
    let generated = generate_attributes(n, &generate, &bin_name, &cat_name, cfg.seed, 0)?;
    create_dir(out_dir)?;
    if !generated.binary.is_empty() {
        write_attr_file(&generated, AttributeKind::Binary, &out_dir.join("binattr.txt"))?;
    }
    if !generated.categorical.is_empty() {
        write_attr_file(&generated, AttributeKind::Categorical, &out_dir.join("catattr.txt"))?;
    }
    attrs.merge(generated)?;
    let (model, theta) = cfg.model_with_values(&attrs)?;
    let arc = model.index_of("Arc").map(|k| theta[k]);
    let burnin = burnin_for(cfg, n, arc)?;
    let spec = SimSpec {
        n,
        model,
        theta,
        burnin,
        interval: cfg.interval.unwrap_or((burnin / 10).max(1)),
        n_samples: cfg.num_samples,
        seed: cfg.seed,
    };
    log::info!(
        "simulating {} samples, burn-in {}, interval {}",
        spec.n_samples,
        spec.burnin,
        spec.interval
    );
    let sim = simulate(&spec, &attrs)?;
    for (k, g) in sim.graphs.iter().enumerate() {
        io::save_arclist(g, &out_dir.join(format!("sim_{k}.net")))?;
    }
    io::write_sim_stats(&sim, &spec.model.names(), &out_dir.join("sim_stats.csv"))?;
    for (k, s) in sim.summaries.iter().enumerate() {
        println!(
            "sample {k}: arcs {} mean degree {:.4} density {:.6} components {} giant {} clustering {:.5} reciprocity {:.4}",
            s.arcs, s.mean_degree, s.density, s.components, s.giant_component, s.global_clustering, s.reciprocity
        );
    }
    Ok(Outcome::Converged)
}

fn write_attr_file(attrs: &AttributeSet, kind: AttributeKind, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    io::write_attributes(attrs, kind, std::io::BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn validate_command(cfg: &Config, out_dir: &Path) -> Result<Outcome> {
    let n = cfg
        .num_nodes
        .ok_or_else(|| Error::Config("validate needs numNodes".into()))?;
    let (rule, bin_name, cat_name) = attribute_rule(cfg)?;
    let effects = cfg
        .effect_entries()
        .map(|e| {
            e.value
                .map(|v| (e.spec.clone(), v))
                .ok_or_else(|| Error::Config(format!("effect {} needs a true value", e.spec)))
        })
        .collect::<Result<Vec<_>>>()?;
    let arc = effects
        .iter()
        .find(|e| e.0 == EffectKind::Arc.config_name())
        .map(|e| e.1);
    let study = EeStudy {
        n,
        effects,
        attribute_rule: rule,
        binary_name: bin_name,
        categorical_name: cat_name,
        burnin: burnin_for(cfg, n, arc)?,
        ee: cfg.ee.clone(),
        n_runs: cfg.num_runs,
        seed: cfg.seed,
    };
    let truth = study.truth()?;
    create_dir(out_dir)?;
    log::info!(
        "study: {} networks of {n} nodes, {} runs each",
        cfg.num_networks,
        cfg.num_runs
    );
    match run_study(&truth, cfg.num_networks, &study) {
        Ok(result) => {
            write_study_report(&result, &out_dir.join("study_report.csv"))?;
            println!(
                "{:<28} {:>8} {:>8} {:>6} {:>6} {:>6} {:>9}",
                "Effect", "Bias", "RMSE", "estim.", "lower", "upper", "in C.I."
            );
            for e in &result.effects {
                println!(
                    "{:<28} {:>8.4} {:>8.4} {:>6.0} {:>6.0} {:>6.0} {:>9.0}",
                    e.effect, e.bias, e.rmse, e.rate, e.rate_lower, e.rate_upper, e.coverage
                );
            }
            println!(
                "N_C = {} of {}, mean runs {:.2}",
                result.n_converged, result.n_networks, result.mean_runs
            );
            Ok(Outcome::Converged)
        }
        Err(Error::Estimation(msg)) => {
            let path = out_dir.join("study_report.txt");
            std::fs::write(&path, format!("{msg}\n")).map_err(|e| Error::io(&path, e))?;
            eprintln!("{msg}");
            Ok(Outcome::NotConverged)
        }
        Err(e) => Err(e),
    }
}

pub fn diagnostics_command(arclist: &Path, out_dir: &Path) -> Result<Outcome> {
    let g: Digraph = io::read_arclist(arclist)?;
    let s = diagnostics_summary(&g);
    create_dir(out_dir)?;
    let sim = crate::simulate::Simulation {
        graphs: Vec::new(),
        summaries: vec![s.clone()],
        statistics: vec![Vec::new()],
    };
    io::write_sim_stats(&sim, &[], &out_dir.join("diagnostics.csv"))?;
    io::write_degree_histogram(&s, &out_dir.join("degree_histogram.csv"))?;
    println!("nodes                  {}", s.nodes);
    println!("arcs                   {}", s.arcs);
    println!("mean degree            {:.4}", s.mean_degree);
    println!("density                {:.6e}", s.density);
    println!("reciprocity            {:.4}", s.reciprocity);
    println!("components             {}", s.components);
    println!("giant component        {}", s.giant_component);
    println!("global clustering      {:.5}", s.global_clustering);
    println!("mean local clustering  {:.5}", s.mean_local_clustering);
    Ok(Outcome::Converged)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Estimate { config } => estimate_command(&load_config(config, cli)?, &cli.out_dir),
        Command::Simulate { config } => simulate_command(&load_config(config, cli)?, &cli.out_dir),
        Command::Validate { config } => validate_command(&load_config(config, cli)?, &cli.out_dir),
        Command::Diagnostics { arclist } => diagnostics_command(arclist, &cli.out_dir),
    }
}

/// Parses arguments, runs the command and maps the result to an exit code.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    // usage errors are input errors (1), not clap's default 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
