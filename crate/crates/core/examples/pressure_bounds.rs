//! Partition sums and rigorous upper bounds on the pressure.
//!
//! The example tuple is diagonal, so the sums factorize and the exact
//! pressure is known: every level must reproduce it.
//!
//! ```text
//! cargo run --release --example pressure_bounds
//! ```

use affinity::linalg::Matrix;
use affinity::pressure::{lipschitz_bracket, partition_sum, pressure_upper, LinearTuple, Potential};

fn main() -> affinity::Result<()> {
    let tuple = LinearTuple::new(vec![
        Matrix::diagonal(&[0.5, 1.0 / 3.0]),
        Matrix::diagonal(&[0.25, 0.2]),
    ])?;
    let s = 1.5;
    let exact = (0.5 * (1.0f64 / 3.0).sqrt() + 0.25 * 0.2f64.sqrt()).ln();
    println!("diagonal pair, s = {s}; exact pressure = {exact:.10}");

    println!("\n n    S_n / n");
    for n in 1..=10 {
        let sn = partition_sum(&tuple, s, n, Potential::Svf)?;
        println!("{n:>2}   {:.12}", sn / n as f64);
    }

    let bounds = pressure_upper(&tuple, s, 12, Potential::Svf)?;
    println!(
        "\nupper bound min_n S_n/n = {:.12} (attained at n = {})",
        bounds.upper, bounds.attained_n
    );

    // the matrix pressure M uses ||.||^s and dominates P above s = 1
    let m = pressure_upper(&tuple, s, 12, Potential::Norm)?;
    println!("matrix pressure upper   = {:.12} (M >= P)", m.upper);

    // slope bracket: how fast the pressure moves in s
    let (lo, hi) = lipschitz_bracket(&tuple);
    println!("\nslope bracket: log alpha_* = {lo:.6}, log alpha^* = {hi:.6}");
    println!("so P(s + eps) - P(s) always lies in [eps log alpha_*, eps log alpha^*]");
    Ok(())
}
