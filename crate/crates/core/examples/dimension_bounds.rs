//! Similarity dimension and certified affinity-dimension bounds.
//!
//! ```text
//! cargo run --release --example dimension_bounds
//! ```

use affinity::dimension::{
    affinity_dimension_bounds, affinity_dimension_upper, similarity_dimension,
};
use affinity::linalg::Matrix;
use affinity::pressure::LinearTuple;

fn main() -> affinity::Result<()> {
    // self-similar warm-up: three ratio-1/2 maps
    let sim = similarity_dimension(&[0.5, 0.5, 0.5])?;
    println!("similarity dimension of three ratio-1/2 maps: {sim:.10} (= log 3 / log 2)");

    let conformal = LinearTuple::new(vec![
        Matrix::rotation(0.2).scale(0.5),
        Matrix::rotation(1.7).scale(0.5),
        Matrix::rotation(-0.9).scale(0.5),
    ])?;
    println!(
        "affinity dimension of the same ratios as rotations: {:.10} (level 1 suffices)",
        affinity_dimension_upper(&conformal, 1)?
    );

    // genuinely affine: three copies of diag(1/2, 1/4)
    let t = LinearTuple::new(vec![Matrix::diagonal(&[0.5, 0.25]); 3])?;
    let closed_form = 1.0 + 1.5f64.ln() / 4.0f64.ln();
    println!("\nthree copies of diag(1/2, 1/4); closed-form dimension {closed_form:.10}");
    println!(" n    lower        upper");
    for n in [2usize, 4, 8, 12] {
        let b = affinity_dimension_bounds(&t, n, true)?;
        println!(
            "{n:>2}   {}   {:.10}",
            b.lower
                .map(|l| format!("{l:.10}"))
                .unwrap_or_else(|| "   (none)   ".into()),
            b.upper
        );
    }
    println!("the upper root is already exact here; the certified lower side closes in like 1/n");
    Ok(())
}
