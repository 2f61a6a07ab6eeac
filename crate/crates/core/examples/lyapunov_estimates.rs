//! Bernoulli-measure analysis: entropy, Lyapunov exponents, energy, and the
//! variational lower bound against the certified upper bound.
//!
//! ```text
//! cargo run --release --example lyapunov_estimates
//! ```

use affinity::linalg::Matrix;
use affinity::measures::{
    energy_estimate, entropy, lyapunov_mc, variational_lower_from, BernoulliWeights,
};
use affinity::pressure::{pressure_upper, LinearTuple, Potential};

fn main() -> affinity::Result<()> {
    let tuple = LinearTuple::new(vec![
        Matrix::diagonal(&[0.5, 1.0 / 3.0]),
        Matrix::diagonal(&[0.25, 0.2]),
    ])?;
    let p = BernoulliWeights::uniform(2);
    println!("uniform Bernoulli weights, h = {:.10}", entropy(&p));

    let analysis = lyapunov_mc(&tuple, &p, 100_000, 16, 42)?;
    println!(
        "lambda_1 = {:.7} +- {:.1e}   (closed form {:.7})",
        analysis.lambda1,
        analysis.stderr1,
        0.5 * (0.5f64.ln() + 0.25f64.ln())
    );
    println!(
        "lambda_2 = {:.7} +- {:.1e}   (from the exact determinant identity)",
        analysis.lambda2, analysis.stderr2
    );
    println!("splitting: {:?} (direction spread {:.4})", analysis.splitting, analysis.direction_spread);

    let s = 1.5;
    let energy = energy_estimate(&analysis, s)?;
    println!("\nenergy of phi^{s}: {:.7} +- {:.1e}", energy.value, energy.stderr);

    let bound = variational_lower_from(&analysis, s)?;
    let upper = pressure_upper(&tuple, s, 10, Potential::Svf)?.upper;
    println!("variational lower bound h + E - 3 se = {:.7}  (NOT certified)", bound.value);
    println!("certified upper bound                = {upper:.7}");
    println!("gap = Bernoulli suboptimality + Monte Carlo slack = {:.4}", upper - bound.value);

    // sweeping the weights tightens the variational side
    println!("\nsweeping p1:");
    for k in [2usize, 4, 5, 6, 8] {
        let w = BernoulliWeights::new(vec![k as f64 / 10.0, 1.0 - k as f64 / 10.0])?;
        let a = lyapunov_mc(&tuple, &w, 20_000, 8, 7)?;
        let b = variational_lower_from(&a, s)?;
        println!("  p1 = 0.{k}: bound {:.7}", b.value);
    }
    Ok(())
}
