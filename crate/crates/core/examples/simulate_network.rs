//! Forward simulation of the binary-attribute model and per-sample summary
//! statistics.

use ergm_ee::model::{Effect, ModelSpec};
use ergm_ee::simulate::{generate_attributes, simulate, AttributeRule, SimSpec};

fn main() -> ergm_ee::Result<()> {
    let n = 500;
    let rule = AttributeRule {
        binary_true_fraction: Some(0.1),
        num_categories: None,
    };
    let attrs = generate_attributes(n, &rule, "b", "", 5, 0)?;
    let effects = [
        ("Arc", -1.0),
        ("Reciprocity", 4.25),
        ("AinSpread", -2.0),
        ("AoutSpread", -1.5),
        ("AltKTrianglesT", 0.6),
        ("AltTwoPathTD", -0.15),
        ("Interaction(b)", 2.0),
        ("Sender(b)", 1.5),
        ("Receiver(b)", 1.0),
    ];
    let mut model = ModelSpec::new();
    for (spec, _) in effects {
        model.push(Effect::parse(spec, &attrs)?)?;
    }
    let spec = SimSpec {
        n,
        model,
        theta: effects.iter().map(|e| e.1).collect(),
        burnin: 10_000_000,
        interval: 2_000_000,
        n_samples: 4,
        seed: 5,
    };
    let sim = simulate(&spec, &attrs)?;
    println!("sample  arcs  mean_degree  density   components  clustering  reciprocity");
    for (k, s) in sim.summaries.iter().enumerate() {
        println!(
            "{k:>6} {:>5} {:>12.4} {:>9.6} {:>11} {:>11.5} {:>12.4}",
            s.arcs, s.mean_degree, s.density, s.components, s.global_clustering, s.reciprocity
        );
    }
    Ok(())
}
