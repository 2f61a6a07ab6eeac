//! Ellipsoid covers of a self-affine set and the Hausdorff-content upper
//! bound they induce.
//!
//! ```text
//! cargo run --release --example ellipsoid_covers
//! ```

use affinity::dimension::affinity_dimension_upper;
use affinity::linalg::Matrix;
use affinity::pressure::LinearTuple;
use affinity::selfaffine::{chaos_game, covering_count, ellipsoid_cover, AffineIFS};

fn main() -> affinity::Result<()> {
    let linear = LinearTuple::new(vec![Matrix::diagonal(&[0.45, 0.2]); 3])?;
    let ifs = AffineIFS::new(
        linear.clone(),
        vec![vec![0.0, 0.0], vec![0.5, 0.1], vec![0.2, 0.6]],
    )?;

    // the cover refines geometrically: m^k ellipsoids at level k
    for k in [0usize, 1, 2, 4] {
        let cover = ellipsoid_cover(&ifs, k)?;
        println!(
            "level {k}: {} ellipsoids, ball radius {:.4}",
            cover.elements.len(),
            cover.radius
        );
    }

    // every sampled attractor point lies inside every cover level
    let cloud = chaos_game(&ifs, 2_000, 64, 3)?;
    let cover = ellipsoid_cover(&ifs, 6)?;
    let all_in = cloud.iter().all(|p| cover.contains(p, 1e-9));
    println!("all {} sampled points inside the level-6 cover: {all_in}", cloud.count());

    // content bounds force the dimension estimate: above the affinity
    // dimension they decay geometrically, below they blow up
    let dim = affinity_dimension_upper(&linear, 8)?;
    println!("\naffinity dimension upper bound: {dim:.7}");
    for s in [dim - 0.15, dim + 0.15] {
        println!("  content bound at s = {s:.4}:");
        for k in [2usize, 5, 8, 11] {
            let (_, content) = covering_count(&ifs, k, s)?;
            println!("    level {k:>2}: {content:.6e}");
        }
    }
    println!("(decay above, growth below: the root is the dimension candidate)");
    Ok(())
}
