//! Continuity scan: perturb the maps along rotation generators and watch the
//! certified upper bound move continuously.
//!
//! At fixed level n the upper bound is a finite minimum of continuous
//! functions of the matrix entries, so the scan demonstrates - it does not
//! prove - that the limiting pressure is continuous in the maps.
//!
//! ```text
//! cargo run --release --example continuity_scan
//! ```

use affinity::cli::{continuity_scan, IFSDocument, MapEntry, ScanSpec};

fn main() -> affinity::Result<()> {
    let base = IFSDocument {
        d: 2,
        maps: vec![
            MapEntry {
                a: vec![vec![0.5, 0.0], vec![0.0, 1.0 / 3.0]],
                t: None,
            },
            MapEntry {
                a: vec![vec![0.25, 0.0], vec![0.0, 0.2]],
                t: None,
            },
        ],
    };
    // A_i(t) = (I + t J) A_i: an infinitesimal rotation of each map
    let spec = ScanSpec::rotation_default(base, 1.5, 8, 0.1, 21);
    let result = continuity_scan(&spec, true)?;

    println!("    t        upper(t)        lower(t)");
    for row in &result.rows {
        println!(
            "{:>6.3}   {:.10}   {}",
            row.t,
            row.upper,
            row.lower
                .map(|l| format!("{l:.10}"))
                .unwrap_or_else(|| "(no cone)".into())
        );
    }
    println!(
        "\nmax adjacent jump of the upper bound: {:.3e} over {} grid points",
        result.max_adjacent_jump,
        result.rows.len()
    );
    Ok(())
}
