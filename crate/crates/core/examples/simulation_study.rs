//! A small simulation study: simulate networks at known parameters,
//! estimate each, and report bias, RMSE, coverage and error rates. Here
//! Reciprocity is zero in the generating model, so its row reports the
//! false positive rate.

use ergm_ee::estimator::EeConfig;
use ergm_ee::simulate::AttributeRule;
use ergm_ee::study::{run_study, EeStudy};

fn main() -> ergm_ee::Result<()> {
    let study = EeStudy {
        n: 200,
        effects: vec![
            ("Arc".into(), -3.0),
            ("Reciprocity".into(), 0.0),
            ("Matching(c)".into(), 1.0),
        ],
        attribute_rule: AttributeRule {
            binary_true_fraction: None,
            num_categories: Some(3),
        },
        binary_name: String::new(),
        categorical_name: "c".into(),
        burnin: 2_000_000,
        ee: EeConfig {
            ee_steps: 200,
            ..EeConfig::default()
        },
        n_runs: 2,
        seed: 17,
    };
    let result = run_study(&study.truth()?, 6, &study)?;
    println!(
        "{:<14} {:>7} {:>7} {:>6} {:>6} {:>6} {:>8}",
        "effect", "bias", "rmse", "rate", "lower", "upper", "in C.I."
    );
    for e in &result.effects {
        println!(
            "{:<14} {:>7.3} {:>7.3} {:>6.0} {:>6.0} {:>6.0} {:>8.0}",
            e.effect, e.bias, e.rmse, e.rate, e.rate_lower, e.rate_upper, e.coverage
        );
    }
    println!(
        "N_C {} of {}, mean runs {:.2}",
        result.n_converged, result.n_networks, result.mean_runs
    );
    Ok(())
}
