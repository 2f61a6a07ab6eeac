//! Chaos-game sampling, PGM rendering, and box-counting of two classic
//! attractors.
//!
//! Writes `sierpinski.pgm` and `barnsley_like.pgm` into the working
//! directory.
//!
//! ```text
//! cargo run --release --example attractor_render
//! ```

use std::fs::File;
use std::io::BufWriter;

use affinity::linalg::Matrix;
use affinity::pressure::LinearTuple;
use affinity::selfaffine::{box_dimension_estimate, chaos_game, sierpinski_gasket, AffineIFS};

fn main() -> affinity::Result<()> {
    let gasket = sierpinski_gasket();
    let cloud = chaos_game(&gasket, 1_000_000, 64, 42)?;
    println!(
        "gasket: {} points inside the invariant ball of radius {:.4}",
        cloud.count(),
        cloud.radius()
    );
    let est = box_dimension_estimate(&cloud, 2.0f64.powi(-9), 2.0f64.powi(-4), 6)?;
    println!(
        "box-counting slope {:.4} +- {:.4}   (log 3 / log 2 = {:.4})",
        est.slope,
        est.stderr,
        3.0f64.ln() / 2.0f64.ln()
    );
    let mut w = BufWriter::new(File::create("sierpinski.pgm").expect("create sierpinski.pgm"));
    cloud.write_occupancy_pgm(512, &mut w)?;
    println!("wrote sierpinski.pgm (512x512, P5)");

    // a genuinely affine system: shears with uneven contraction
    let linear = LinearTuple::new(vec![
        Matrix::from_rows(&[vec![0.45, 0.1], vec![0.0, 0.25]])?,
        Matrix::from_rows(&[vec![0.4, 0.0], vec![0.15, 0.3]])?,
        Matrix::from_rows(&[vec![0.35, -0.1], vec![0.1, 0.35]])?,
    ])?;
    let ifs = AffineIFS::new(
        linear,
        vec![vec![0.0, 0.0], vec![0.5, 0.3], vec![0.2, 0.6]],
    )?;
    let cloud = chaos_game(&ifs, 1_000_000, 64, 7)?;
    let est = box_dimension_estimate(&cloud, 2.0f64.powi(-9), 2.0f64.powi(-4), 6)?;
    println!(
        "\naffine three-map attractor: box-counting slope {:.4} +- {:.4}",
        est.slope, est.stderr
    );
    let mut w = BufWriter::new(File::create("barnsley_like.pgm").expect("create barnsley_like.pgm"));
    cloud.write_occupancy_pgm(512, &mut w)?;
    println!("wrote barnsley_like.pgm (512x512, P5)");
    Ok(())
}
