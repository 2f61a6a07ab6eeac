//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (visible under `cargo test --test acceptance --
//! --nocapture`). Every tolerance is pinned in code.

use std::time::Instant;

use affinity::cones::{self, DEFAULT_MAX_ITER, DEFAULT_MIN_GAP};
use affinity::dimension;
use affinity::linalg::{self, Matrix};
use affinity::measures::{self, BernoulliWeights, Splitting};
use affinity::pressure::{self, LinearTuple, Potential};
use affinity::selfaffine::{self, sierpinski_gasket, unit_square_ifs};
use affinity::cli::{continuity_scan, IFSDocument, MapEntry, ScanSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn diag_pair() -> LinearTuple {
    LinearTuple::new(vec![
        Matrix::diagonal(&[0.5, 1.0 / 3.0]),
        Matrix::diagonal(&[0.25, 0.2]),
    ])
    .unwrap()
}

/// Closed-form pressure of the diagonal pair at s = 1.5:
/// log(a_1 b_1^{1/2} + a_2 b_2^{1/2}).
fn diag_pair_pressure() -> f64 {
    (0.5 * (1.0f64 / 3.0).sqrt() + 0.25 * 0.2f64.sqrt()).ln()
}

fn random_invertible_2x2(rng: &mut ChaCha8Rng, scale: f64) -> Matrix {
    loop {
        let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(-scale..scale)).collect();
        if let Ok(a) = Matrix::from_flat(2, entries) {
            if a.check_invertible().is_ok() {
                return a;
            }
        }
    }
}

fn random_contractive_tuple(rng: &mut ChaCha8Rng, m: usize) -> LinearTuple {
    let mats = (0..m)
        .map(|_| loop {
            let a = random_invertible_2x2(rng, 1.0);
            let norm = a.norm();
            if norm > 1e-3 {
                let b = a.scale(rng.gen_range(0.2..0.95) / norm);
                if b.check_invertible().is_ok() {
                    break b;
                }
            }
        })
        .collect();
    LinearTuple::new(mats).unwrap()
}

#[test]
fn criterion_01_diagonal_pressure_oracle() {
    let start = Instant::now();
    let t = diag_pair();
    let s = 1.5;
    let want = diag_pair_pressure();

    let bounds = pressure::pressure_upper(&t, s, 12, Potential::Svf).unwrap();
    assert!(
        (bounds.upper - want).abs() < 1e-10,
        "upper {} vs closed form {}",
        bounds.upper,
        want
    );

    // brute force at n = 3: same leaf arithmetic, canonical pairwise tree
    let n = 3;
    let scale = t
        .matrices()
        .iter()
        .map(|a| linalg::svf(a, s).unwrap())
        .fold(0.0f64, f64::max);
    let inv_scale_n = (-(n as f64) * scale.ln()).exp();
    let mut leaves = Vec::new();
    for w in 0..t.len().pow(n as u32) {
        let mut word = Vec::new();
        let mut x = w;
        for _ in 0..n {
            word.push(x % t.len());
            x /= t.len();
        }
        word.reverse();
        let mut p = Matrix::identity(2);
        for &sym in &word {
            p = t.matrix(sym).mul(&p).unwrap();
        }
        leaves.push(linalg::svf(&p, s).unwrap() * inv_scale_n);
    }
    let brute = pressure::pairwise_sum(&leaves).ln() + n as f64 * scale.ln();
    let fast = pressure::partition_sum(&t, s, n, Potential::Svf).unwrap();
    assert_eq!(brute.to_bits(), fast.to_bits(), "brute force diverged");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    println!(
        "criterion 01 PASS: upper {:.10} = log(0.4004785...) within 1e-10, n=3 brute force bit-identical, {elapsed:?}",
        bounds.upper
    );
}

#[test]
fn criterion_02_similarity_reduction() {
    let t = LinearTuple::new(vec![
        Matrix::rotation(0.1).scale(0.5),
        Matrix::rotation(2.0).scale(0.5),
        Matrix::rotation(-1.2).scale(0.5),
    ])
    .unwrap();
    let got = dimension::affinity_dimension_upper(&t, 1).unwrap();
    let want = 3.0f64.ln() / 2.0f64.ln();
    assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
    println!("criterion 02 PASS: affinity upper {got:.10} matches log3/log2 within 1e-8 at n=1");
}

#[test]
fn criterion_03_diagonal_affinity_dimension() {
    let t = LinearTuple::new(vec![Matrix::diagonal(&[0.5, 0.25]); 3]).unwrap();
    let want = 1.0 + 1.5f64.ln() / 4.0f64.ln();
    let upper1 = dimension::affinity_dimension_upper(&t, 1).unwrap();
    assert!((upper1 - want).abs() < 1e-8, "upper {upper1} vs {want}");

    let n = 12;
    let b = dimension::affinity_dimension_bounds(&t, n, true).unwrap();
    let lower = b.lower.expect("cone lower bound must exist");
    let c = b.cone.as_ref().unwrap().c;
    let gap_cap = c.ln().abs() / (n as f64 * 2.0f64.ln());
    assert!(
        b.upper - lower <= gap_cap + 1e-12,
        "gap {} exceeds |log c|/(12 log 2) = {gap_cap}",
        b.upper - lower
    );
    assert!(
        lower <= want && want <= b.upper,
        "closed form {want} outside [{lower}, {}]",
        b.upper
    );
    println!(
        "criterion 03 PASS: upper {:.10} within 1e-8 of {want:.10}; [{lower:.6}, {:.6}] brackets it, gap <= {gap_cap:.4}",
        upper1, b.upper
    );
}

#[test]
fn criterion_04_submultiplicativity_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_001);
    let mut violations = 0u32;
    for _ in 0..10_000 {
        let a = random_invertible_2x2(&mut rng, 2.0);
        let b = random_invertible_2x2(&mut rng, 2.0);
        let ab = a.mul(&b).unwrap();
        if ab.check_invertible().is_err() {
            continue;
        }
        let mut s = 0.0;
        while s <= 2.0 {
            let lhs = linalg::svf(&ab, s).unwrap();
            let rhs = linalg::svf(&a, s).unwrap() * linalg::svf(&b, s).unwrap();
            if lhs > rhs * (1.0 + 1e-9) {
                violations += 1;
            }
            s += 0.25;
        }
    }
    assert_eq!(violations, 0, "{violations} submultiplicativity violations");
    println!("criterion 04 PASS: 0 violations of phi^s(AB) <= phi^s(A) phi^s(B) (1 + 1e-9) over 1e4 pairs x 9 exponents");
}

#[test]
fn criterion_05_lipschitz_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_005);
    for tuple_idx in 0..100 {
        let t = random_contractive_tuple(&mut rng, 2);
        let (lo, hi) = pressure::lipschitz_bracket(&t);
        for n in 1..=6usize {
            for s in [0.4, 1.3] {
                for eps in [0.1, 0.01] {
                    let base = pressure::partition_sum(&t, s, n, Potential::Svf).unwrap();
                    let bumped = pressure::partition_sum(&t, s + eps, n, Potential::Svf).unwrap();
                    let nf = n as f64;
                    assert!(
                        bumped >= base + nf * eps * lo - 1e-9,
                        "tuple {tuple_idx} n={n} s={s} eps={eps}: lower bracket"
                    );
                    assert!(
                        bumped <= base + nf * eps * hi + 1e-9,
                        "tuple {tuple_idx} n={n} s={s} eps={eps}: upper bracket"
                    );
                }
            }
        }
    }
    println!("criterion 05 PASS: slope bracket holds within 1e-9 for 100 tuples, n <= 6, eps in {{0.1, 0.01}}");
}

#[test]
fn criterion_06_norm_vs_svf_pressure() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_006);
    for _ in 0..40 {
        let t = if rng.gen_bool(0.5) {
            random_contractive_tuple(&mut rng, 2)
        } else {
            LinearTuple::new(vec![
                random_invertible_2x2(&mut rng, 2.0),
                random_invertible_2x2(&mut rng, 2.0),
            ])
            .unwrap()
        };
        for n in [1usize, 3, 5] {
            for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let p = pressure::partition_sum(&t, s, n, Potential::Svf).unwrap();
                let m = pressure::partition_sum(&t, s, n, Potential::Norm).unwrap();
                assert!(
                    (p - m).abs() <= 1e-12 * p.abs().max(1.0),
                    "s={s} n={n}: M and P disagree below 1"
                );
            }
            for s in [1.25, 1.5, 1.75, 2.0] {
                let p = pressure::partition_sum(&t, s, n, Potential::Svf).unwrap();
                let m = pressure::partition_sum(&t, s, n, Potential::Norm).unwrap();
                assert!(m >= p - 1e-12, "s={s} n={n}: NORM fell below SVF");
            }
        }
    }
    println!("criterion 06 PASS: M = P within rel 1e-12 on [0,1]; M >= P on (1,2]");
}

#[test]
fn criterion_07_cone_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_007);
    let mut fuzz_total = 0u64;
    for tuple_idx in 0..50 {
        let mats: Vec<Matrix> = (0..2)
            .map(|_| loop {
                let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
                let a = Matrix::from_flat(2, entries).unwrap();
                if a.check_invertible().is_ok() {
                    break a.scale(0.9 / a.norm());
                }
            })
            .collect();
        let t = LinearTuple::new(mats).unwrap();
        let pair = cones::find_invariant_cone(&t, DEFAULT_MAX_ITER, DEFAULT_MIN_GAP)
            .unwrap()
            .unwrap_or_else(|| panic!("tuple {tuple_idx}: no cone found for a positive tuple"));

        // fuzz ||B w|| >= c ||B||: word products are verified by composition
        for _ in 0..2000 {
            fuzz_total += 1;
            let len = rng.gen_range(1..=6);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..t.len())).collect();
            let b = pressure::word_product(&t, &word).unwrap();
            let w_angle = pair.inner.lo() + rng.gen_range(0.0..pair.inner.len());
            let w = [w_angle.cos(), w_angle.sin()];
            let img = b.apply(&w);
            let norm_bw = f64::hypot(img[0], img[1]);
            assert!(
                norm_bw >= pair.c * b.norm(),
                "tuple {tuple_idx}: ||Bw|| = {norm_bw} < c ||B|| = {}",
                pair.c * b.norm()
            );
        }

        for potential in [Potential::Svf, Potential::Norm] {
            for s in [0.0, 0.5, 1.0, 1.5, 2.0] {
                let upper = pressure::pressure_upper(&t, s, 6, potential).unwrap().upper;
                for n in [2usize, 4, 6] {
                    let lower =
                        cones::pressure_lower_cone(&t, s, n, &pair, potential).unwrap();
                    assert!(
                        lower <= upper + 1e-9,
                        "tuple {tuple_idx} s={s} n={n}: lower {lower} above upper {upper}"
                    );
                }
            }
        }
    }
    assert!(fuzz_total >= 100_000);
    println!("criterion 07 PASS: 50/50 positive tuples certified; {fuzz_total} fuzz trials with no ||Bw|| >= c||B|| violation; lower <= upper + 1e-9 throughout");
}

#[test]
fn criterion_08_joint_spectral_radius() {
    // symmetric single matrix: rho from the quadratic formula
    let a = Matrix::from_flat(2, vec![0.9, 0.2, 0.2, 0.4]).unwrap();
    let rho = {
        let tr = 1.3f64;
        let det = 0.9 * 0.4 - 0.2 * 0.2;
        0.5 * (tr + (tr * tr - 4.0 * det).sqrt())
    };
    let t = LinearTuple::new(vec![a]).unwrap();
    let (lo, hi) = dimension::joint_spectral_radius_bounds(&t, 32).unwrap();
    assert!((lo - rho).abs() < 1e-6 && (hi - rho).abs() < 1e-6, "single matrix: [{lo}, {hi}] vs rho {rho}");

    let (lo2, hi2) = dimension::joint_spectral_radius_bounds(&diag_pair(), 1).unwrap();
    assert!((hi2 - 0.5).abs() < 1e-6 && (lo2 - 0.5).abs() < 1e-6, "diagonal pair: [{lo2}, {hi2}]");
    println!("criterion 08 PASS: single matrix JSR in [{lo:.8}, {hi:.8}] around rho {rho:.8}; diagonal pair lo=hi=1/2 at n=1");
}

#[test]
fn criterion_09_lyapunov_monte_carlo() {
    let t = diag_pair();
    let p = BernoulliWeights::uniform(2);
    let a = measures::lyapunov_mc(&t, &p, 100_000, 16, 42).unwrap();
    let want1 = 0.5 * (0.5f64.ln() + 0.25f64.ln()); // -1.0397208
    assert!(
        (a.lambda1 - want1).abs() < 3.0 * a.stderr1,
        "lambda1 {} vs {want1} (3 stderr = {})",
        a.lambda1,
        3.0 * a.stderr1
    );
    assert!(a.stderr1 < 0.01, "stderr {} too large", a.stderr1);
    assert!(
        (a.lambda1 + a.lambda2 - a.log_det_mean).abs() < 1e-15,
        "determinant identity broken"
    );
    assert_eq!(a.splitting, Splitting::Distinct);

    let conformal = LinearTuple::new(vec![
        Matrix::rotation(0.7).scale(0.5),
        Matrix::rotation(-0.4).scale(0.3),
    ])
    .unwrap();
    let ac = measures::lyapunov_mc(&conformal, &p, 100_000, 16, 42).unwrap();
    assert_eq!(ac.splitting, Splitting::Equal);
    println!(
        "criterion 09 PASS: lambda1 {:.7} within 3 x {:.5} of {want1:.7}, splitting distinct; conformal tuple splits equal",
        a.lambda1, a.stderr1
    );
}

#[test]
fn criterion_10_variational_below_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_010);
    let mut tested = 0;
    for _ in 0..12 {
        let mats: Vec<Matrix> = (0..2)
            .map(|_| loop {
                let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
                let a = Matrix::from_flat(2, entries).unwrap();
                if a.check_invertible().is_ok() {
                    break a.scale(rng.gen_range(0.4..0.9) / a.norm());
                }
            })
            .collect();
        let t = LinearTuple::new(mats).unwrap();
        if cones::find_invariant_cone(&t, DEFAULT_MAX_ITER, DEFAULT_MIN_GAP)
            .unwrap()
            .is_none()
        {
            continue;
        }
        tested += 1;
        let p = BernoulliWeights::uniform(2);
        let analysis = measures::lyapunov_mc(&t, &p, 20_000, 16, 77).unwrap();
        for s in [0.5, 1.0, 1.5] {
            let bound = measures::variational_lower_from(&analysis, s).unwrap();
            let upper = pressure::pressure_upper(&t, s, 8, Potential::Svf).unwrap().upper;
            assert!(
                bound.value <= upper + 3.0 * bound.energy.stderr,
                "s={s}: variational {} above certified {upper}",
                bound.value
            );
        }
    }
    assert!(tested >= 8, "only {tested} cone-certified tuples drawn");
    println!("criterion 10 PASS: variational lower <= certified upper + 3 stderr on {tested} cone-certified tuples x 3 exponents");
}

#[test]
fn criterion_11_box_counting() {
    let gasket_dim = 3.0f64.ln() / 2.0f64.ln();
    let start = Instant::now();
    let mut gasket_hits = 0;
    for seed in 1..=10u64 {
        let cloud = selfaffine::chaos_game(&sierpinski_gasket(), 1_000_000, 64, seed).unwrap();
        let est =
            selfaffine::box_dimension_estimate(&cloud, 2.0f64.powi(-9), 2.0f64.powi(-4), 6)
                .unwrap();
        if (est.slope - gasket_dim).abs() < 0.08 {
            gasket_hits += 1;
        }
    }
    let gasket_elapsed = start.elapsed();
    assert!(gasket_hits >= 9, "gasket slope hit only {gasket_hits}/10 seeds");
    assert!(gasket_elapsed.as_secs_f64() < 30.0, "gasket batch took {gasket_elapsed:?}");

    let start = Instant::now();
    let mut square_hits = 0;
    for seed in 1..=10u64 {
        let cloud = selfaffine::chaos_game(&unit_square_ifs(), 1_000_000, 64, seed).unwrap();
        let est =
            selfaffine::box_dimension_estimate(&cloud, 2.0f64.powi(-9), 2.0f64.powi(-4), 6)
                .unwrap();
        if (est.slope - 2.0).abs() < 0.05 {
            square_hits += 1;
        }
    }
    let square_elapsed = start.elapsed();
    assert!(square_hits >= 9, "square slope hit only {square_hits}/10 seeds");
    assert!(square_elapsed.as_secs_f64() < 30.0, "square batch took {square_elapsed:?}");
    println!(
        "criterion 11 PASS: gasket {gasket_hits}/10 within 0.08 of {gasket_dim:.7} ({gasket_elapsed:?}); square {square_hits}/10 within 0.05 of 2 ({square_elapsed:?})"
    );
}

#[test]
fn criterion_12_falconer_smoke() {
    let start = Instant::now();
    let t = LinearTuple::new(vec![Matrix::diagonal(&[0.45, 0.2]); 3]).unwrap();
    // closed form: root of 3 * 0.45 * 0.2^{s-1} = 1
    let want = 1.0 + (1.0f64 / 1.35).ln() / 0.2f64.ln();
    let report = selfaffine::falconer_experiment(&t, 20, 1_000_000, 1).unwrap();
    assert!((report.affinity_upper - want).abs() < 1e-6);
    assert!(
        (report.median_box_estimate - want).abs() < 0.15,
        "median {} vs closed form {want}",
        report.median_box_estimate
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}, budget 10 min");
    println!(
        "criterion 12 PASS: median box estimate {:.4} within 0.15 of affinity dimension {want:.7} over 20 draws ({elapsed:?})",
        report.median_box_estimate
    );
}

#[test]
fn criterion_13_continuity_smoke_scan() {
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
    let spec = ScanSpec::rotation_default(base, 1.5, 10, 0.1, 101);
    let result = continuity_scan(&spec, true).unwrap();
    assert_eq!(result.rows.len(), 101);
    assert!(
        result.max_adjacent_jump < 0.05,
        "max adjacent jump {} exceeds 0.05",
        result.max_adjacent_jump
    );
    let want = diag_pair_pressure();
    assert!(
        (result.rows[0].upper - want).abs() < 1e-10,
        "upper(0) = {} drifted from the diagonal oracle {want}",
        result.rows[0].upper
    );
    println!(
        "criterion 13 PASS: 101-point rotation scan, max adjacent jump {:.3e} < 0.05, upper(0) matches the diagonal oracle",
        result.max_adjacent_jump
    );
}
