//! Singular values, the singular value function, and exterior norms.
//!
//! ```text
//! cargo run --release --example singular_values
//! ```

use affinity::linalg::{exterior_norm, singular_values, svf, Matrix};

fn main() -> affinity::Result<()> {
    let a = Matrix::from_rows(&[vec![0.8, 0.3], vec![-0.1, 0.5]])?;
    let sv = singular_values(&a)?;
    println!("A = [[0.8, 0.3], [-0.1, 0.5]]");
    println!("singular values: alpha_1 = {:.12}, alpha_2 = {:.12}", sv.alpha(1), sv.alpha(2));
    println!("operator norm   = {:.12}  (alpha_1)", a.norm());
    println!("|det A|         = {:.12}  (alpha_1 * alpha_2)", a.det().abs());

    // phi^s interpolates between 1, the norm, and |det|^{s/d}
    println!("\nsingular value function of A:");
    for s in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        println!("  phi^{s:<4} = {:.12}", svf(&a, s)?);
    }

    // the interpolation identity through exterior norms
    let s = 1.3;
    let via_norms = exterior_norm(&a, 1)?.powf(2.0 - s) * exterior_norm(&a, 2)?.powf(s - 1.0);
    println!("\nphi^{s} via exterior norms: {:.12} (same value, different route)", via_norms);

    // submultiplicativity, the property everything else rests on
    let b = Matrix::from_rows(&[vec![0.4, -0.2], vec![0.3, 0.7]])?;
    let ab = a.mul(&b)?;
    for s in [0.5, 1.5] {
        println!(
            "phi^{s}(AB) = {:.9} <= phi^{s}(A) phi^{s}(B) = {:.9}",
            svf(&ab, s)?,
            svf(&a, s)? * svf(&b, s)?
        );
    }
    Ok(())
}
