//! Standard errors from a θ chain and a statistics chain, pooling of runs
//! and Wilson intervals.

use ergm_ee::inference::{pool_runs, run_se, wilson_interval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// AR(1) chain around `mean`.
fn chain(rng: &mut ChaCha8Rng, mean: f64, rho: f64, scale: f64, n: usize) -> Vec<f64> {
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x = rho * x + scale * (rng.random::<f64>() - 0.5);
            mean + x
        })
        .collect()
}

fn main() -> ergm_ee::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let names = vec!["Arc".to_string(), "Reciprocity".to_string()];
    let mut runs = Vec::new();
    for _ in 0..4 {
        let a = chain(&mut rng, -4.0, 0.9, 0.02, 250);
        let b = chain(&mut rng, 2.0, 0.9, 0.05, 250);
        let theta: Vec<Vec<f64>> = a.into_iter().zip(b).map(|(x, y)| vec![x, y]).collect();
        let stats: Vec<Vec<f64>> = (0..250)
            .map(|_| vec![40.0 * (rng.random::<f64>() - 0.5), 15.0 * (rng.random::<f64>() - 0.5)])
            .collect();
        let est = run_se(&theta, &stats, names.clone())?;
        println!(
            "run: theta {:.4?} se {:.4?} t {:.3?} converged {}",
            est.theta_hat, est.se, est.t_ratio, est.converged
        );
        runs.push(est);
    }
    let pooled = pool_runs(&runs)?;
    for k in 0..pooled.names.len() {
        let (lo, hi) = pooled.ci(k);
        println!(
            "pooled {}: {:.4} ± {:.4}  95% CI [{lo:.4}, {hi:.4}]",
            pooled.names[k], pooled.theta[k], pooled.se[k]
        );
    }
    for (k, n) in [(0, 20), (1, 20), (0, 100)] {
        let (lo, hi) = wilson_interval(k, n)?;
        println!("Wilson {k}/{n}: [{:.2}%, {:.2}%]", 100.0 * lo, 100.0 * hi);
    }
    Ok(())
}
