//! EE estimation of the Arc-only model, whose MLE is the log-odds of the
//! observed density.

use ergm_ee::attributes::AttributeSet;
use ergm_ee::estimator::EeConfig;
use ergm_ee::fit::fit;
use ergm_ee::io::format_summary;
use ergm_ee::model::{EffectKind, ModelSpec};
use ergm_ee::simulate::{default_burnin, simulate, SimSpec};

fn main() -> ergm_ee::Result<()> {
    let (n, p) = (500, 0.005f64);
    let model = ModelSpec::structural(&[EffectKind::Arc]);
    let attrs = AttributeSet::new(n);
    let spec = SimSpec {
        n,
        model: model.clone(),
        theta: vec![(p / (1.0 - p)).ln()],
        burnin: default_burnin(n, p),
        interval: 1,
        n_samples: 1,
        seed: 1,
    };
    let g = simulate(&spec, &attrs)?.graphs.remove(0);

    let f = fit(&g, &attrs, &model, &EeConfig::default(), 7, 4)?;
    let pooled = f.pooled.expect("Arc-only runs converge");
    print!("{}", format_summary(&pooled, &f.runs));
    let d = g.density();
    println!("log-odds of observed density {:.6}", (d / (1.0 - d)).ln());
    Ok(())
}
