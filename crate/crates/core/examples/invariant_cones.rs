//! Invariant cone search and certified two-sided pressure bounds.
//!
//! ```text
//! cargo run --release --example invariant_cones
//! ```

use affinity::cones::{
    find_invariant_cone, pressure_lower_cone, DEFAULT_MAX_ITER, DEFAULT_MIN_GAP,
};
use affinity::linalg::Matrix;
use affinity::pressure::{pressure_upper, LinearTuple, Potential};

fn main() -> affinity::Result<()> {
    let tuple = LinearTuple::new(vec![
        Matrix::diagonal(&[0.5, 1.0 / 3.0]),
        Matrix::diagonal(&[0.25, 0.2]),
    ])?;

    let pair = find_invariant_cone(&tuple, DEFAULT_MAX_ITER, DEFAULT_MIN_GAP)?
        .expect("diagonal contractions admit a cone around the x-axis");
    println!(
        "outer cone: [{:.6}, {:.6}] (length {:.6} rad)",
        pair.outer.lo(),
        pair.outer.hi(),
        pair.outer.len()
    );
    println!(
        "inner cone: [{:.6}, {:.6}], certified gap {:.6} rad",
        pair.inner.lo(),
        pair.inner.hi(),
        pair.gap
    );
    println!("supermultiplicativity constant c = {:.6e}", pair.c);
    println!("guarantee: phi^s(B1 B2) >= c phi^s(B1) phi^s(B2) for verified maps, s in [0,2]");

    let s = 1.5;
    let exact = (0.5 * (1.0f64 / 3.0).sqrt() + 0.25 * 0.2f64.sqrt()).ln();
    println!("\ncertified sandwich around P (exact value {exact:.10}):");
    println!(" n     lower           upper           width");
    for n in [4usize, 8, 16, 32] {
        let lower = pressure_lower_cone(&tuple, s, n, &pair, Potential::Svf)?;
        let upper = pressure_upper(&tuple, s, n, Potential::Svf)?.upper;
        println!(
            "{n:>3}   {lower:.10}   {upper:.10}   {:.2e}",
            upper - lower
        );
    }
    println!("\nthe width shrinks like |log c| / n: the sandwich closes on the true pressure");

    // a single rotation has no invariant direction interval
    let rot = LinearTuple::new(vec![Matrix::rotation(0.3)])?;
    assert!(find_invariant_cone(&rot, DEFAULT_MAX_ITER, DEFAULT_MIN_GAP)?.is_none());
    println!("rotation by 0.3: no invariant cone, as expected");
    Ok(())
}
