//! Bernoulli measures on the full shift: entropy, Monte Carlo Lyapunov
//! exponents with Oseledets splitting detection (d = 2), the subadditive
//! energy of the SVF potential, and the variational lower bound.
//!
//! Products follow the cocycle order `B(i, n) = B_{i_n} ... B_{i_1}`: each
//! sampled symbol prepends its matrix on the left, which is exactly applying
//! it to the current vector. The second exponent comes from the determinant
//! identity `lambda_1 + lambda_2 = sum_i p_i log |det A_i|`, exact in d = 2,
//! which halves the variance compared to a second QR vector.
//!
//! Everything here is statistical: bounds derived from these estimates are
//! explicitly *not* certified, in contrast to the cone bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pressure::LinearTuple;
use crate::{Error, Result};

/// Number of histogram bins over `[0, pi)` for direction diagnostics.
const DIRECTION_BINS: usize = 64;

/// Probability weights of a Bernoulli measure.
#[derive(Debug, Clone)]
pub struct BernoulliWeights {
    p: Vec<f64>,
}

impl BernoulliWeights {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Input("weights must be nonempty".into()));
        }
        if p.iter().any(|&x| !x.is_finite() || x <= 0.0) {
            return Err(Error::Input("weights must be strictly positive".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Input(format!(
                "weights must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(BernoulliWeights { p })
    }

    pub fn uniform(m: usize) -> Self {
        BernoulliWeights {
            p: vec![1.0 / m as f64; m],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let x: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, &pi) in self.p.iter().enumerate() {
            acc += pi;
            if x < acc {
                return i;
            }
        }
        self.p.len() - 1
    }
}

/// Shannon entropy `h = -sum_i p_i log p_i` in nats. For a Bernoulli measure
/// this closed form equals the per-symbol Shannon-McMillan-Breiman limit.
pub fn entropy(p: &BernoulliWeights) -> f64 {
    -p.p.iter().map(|&x| x * x.ln()).sum::<f64>()
}

/// Outcome of the Oseledets dichotomy test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Equal,
    Distinct,
    Undetermined,
}

impl Splitting {
    pub fn tag(self) -> &'static str {
        match self {
            Splitting::Equal => "equal",
            Splitting::Distinct => "distinct",
            Splitting::Undetermined => "undetermined",
        }
    }
}

/// Monte Carlo estimates for a Bernoulli measure on a 2x2 tuple.
#[derive(Debug, Clone)]
pub struct BernoulliAnalysis {
    /// Entropy of the weights, nats.
    pub h: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub stderr1: f64,
    pub stderr2: f64,
    pub splitting: Splitting,
    /// `sum_i p_i log |det A_i|`, the exact value of `lambda1 + lambda2`.
    pub log_det_mean: f64,
    /// Circular variance (on doubled angles) of the final directions.
    pub direction_spread: f64,
    /// Direction histograms over `[0, pi)`: trajectory directions of the
    /// renormalized vector, and final contracted (smallest singular)
    /// directions per replica. Diagnostic only.
    pub directions: Option<(Vec<u32>, Vec<u32>)>,
}

fn bin_of(theta: f64) -> usize {
    let t = theta.rem_euclid(std::f64::consts::PI);
    ((t / std::f64::consts::PI * DIRECTION_BINS as f64) as usize).min(DIRECTION_BINS - 1)
}

/// Monte Carlo Lyapunov exponents for i.i.d. products drawn from `p`.
///
/// Each replica renormalizes a random start vector through `steps` draws and
/// averages `log ||A v||`; replicas use seeds `seed + rep`. The second
/// exponent is recovered from the determinant identity, and the splitting is
/// classified as distinct only when the gap clears five combined standard
/// errors *and* the final directions cluster (circular variance < 0.1).
pub fn lyapunov_mc(
    tuple: &LinearTuple,
    p: &BernoulliWeights,
    steps: usize,
    reps: usize,
    seed: u64,
) -> Result<BernoulliAnalysis> {
    if tuple.dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "Lyapunov Monte Carlo requires d = 2".into(),
        ));
    }
    if p.len() != tuple.len() {
        return Err(Error::Input(format!(
            "{} weights for {} maps",
            p.len(),
            tuple.len()
        )));
    }
    if steps < 1000 {
        return Err(Error::Input("steps must be >= 1000".into()));
    }
    if reps < 8 {
        return Err(Error::Input("reps must be >= 8".into()));
    }

    let log_det_mean: f64 = p
        .weights()
        .iter()
        .zip(tuple.matrices())
        .map(|(&pi, a)| pi * a.det().abs().ln())
        .sum();

    let sample_every = (steps / DIRECTION_BINS).max(1);
    let mut rep_means = Vec::with_capacity(reps);
    let mut final_dirs = Vec::with_capacity(reps);
    let mut hist_traj = vec![0u32; DIRECTION_BINS];
    let mut hist_contracted = vec![0u32; DIRECTION_BINS];

    for rep in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(rep as u64));
        let theta0: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let mut v = [theta0.cos(), theta0.sin()];
        // renormalized running product, for the contracted-direction diagnostic
        let mut prod = [1.0f64, 0.0, 0.0, 1.0];
        let mut acc = 0.0f64;
        for step in 0..steps {
            let i = p.sample(&mut rng);
            let e = tuple.matrix(i).entries();
            let w = [e[0] * v[0] + e[1] * v[1], e[2] * v[0] + e[3] * v[1]];
            let norm = f64::hypot(w[0], w[1]);
            acc += norm.ln();
            v = [w[0] / norm, w[1] / norm];
            let np = [
                e[0] * prod[0] + e[1] * prod[2],
                e[0] * prod[1] + e[1] * prod[3],
                e[2] * prod[0] + e[3] * prod[2],
                e[2] * prod[1] + e[3] * prod[3],
            ];
            let scale = np.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            prod = [np[0] / scale, np[1] / scale, np[2] / scale, np[3] / scale];
            if step % sample_every == 0 {
                hist_traj[bin_of(v[1].atan2(v[0]))] += 1;
            }
        }
        rep_means.push(acc / steps as f64);
        final_dirs.push(v[1].atan2(v[0]));
        // smallest-singular-value right direction of the renormalized product
        let g = [
            prod[0] * prod[0] + prod[2] * prod[2],
            prod[0] * prod[1] + prod[2] * prod[3],
            prod[1] * prod[1] + prod[3] * prod[3],
        ];
        let tr = g[0] + g[2];
        let disc = (0.25 * (g[0] - g[2]).powi(2) + g[1] * g[1]).max(0.0).sqrt();
        let l_min = 0.5 * tr - disc;
        let (ex, ey) = if g[1].abs() > (l_min - g[0]).abs() {
            (g[1], l_min - g[0])
        } else {
            (l_min - g[2], g[1])
        };
        if ex != 0.0 || ey != 0.0 {
            hist_contracted[bin_of(ey.atan2(ex))] += 1;
        }
    }

    let lambda1: f64 = rep_means.iter().sum::<f64>() / reps as f64;
    let var: f64 = rep_means
        .iter()
        .map(|x| (x - lambda1).powi(2))
        .sum::<f64>()
        / (reps - 1) as f64;
    let stderr1 = (var / reps as f64).sqrt();
    let lambda2 = log_det_mean - lambda1;
    let stderr2 = stderr1;

    // circular variance on RP^1: double the angles so theta and theta + pi
    // identify
    let (mut cs, mut sn) = (0.0f64, 0.0f64);
    for &d in &final_dirs {
        cs += (2.0 * d).cos();
        sn += (2.0 * d).sin();
    }
    let direction_spread = 1.0 - f64::hypot(cs, sn) / reps as f64;

    // absolute floor so exact isometries (zero variance, rounding-level
    // exponents) classify as equal instead of tripping on 0 <= 0 comparisons
    let diff = lambda1 - lambda2;
    let sigma = stderr1 + stderr2;
    let splitting = if diff > 5.0 * sigma + 1e-12 && direction_spread < 0.1 {
        Splitting::Distinct
    } else if diff.abs() <= 2.0 * sigma + 1e-12 {
        Splitting::Equal
    } else {
        Splitting::Undetermined
    };

    Ok(BernoulliAnalysis {
        h: entropy(p),
        lambda1,
        lambda2,
        stderr1,
        stderr2,
        splitting,
        log_det_mean,
        direction_spread,
        directions: Some((hist_traj, hist_contracted)),
    })
}

/// Energy of the SVF potential at exponent `s`, with propagated standard
/// error.
#[derive(Debug, Clone, Copy)]
pub struct EnergyEstimate {
    pub s: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Energy `E_mu(Phi)` of the SVF potential from Lyapunov estimates (d = 2).
///
/// `phi^s = alpha_1^{2-s} (alpha_1 alpha_2)^{s-1}` for `1 <= s <= 2`, so the
/// Kingman limit is piecewise linear in the exponents:
/// `s lambda_1` for `s <= 1`, `lambda_1 + (s-1) lambda_2` for `1 <= s <= 2`,
/// and `(s/2)(lambda_1 + lambda_2)` (exact, no sampling error) for `s >= 2`.
pub fn energy_estimate(analysis: &BernoulliAnalysis, s: f64) -> Result<EnergyEstimate> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Input(format!("s must be finite and >= 0, got {s}")));
    }
    let (value, stderr) = if s <= 1.0 {
        (s * analysis.lambda1, s * analysis.stderr1)
    } else if s < 2.0 {
        // (2-s) lambda1 + (s-1)(lambda1 + lambda2), and the sum is exact
        (
            analysis.lambda1 + (s - 1.0) * analysis.lambda2,
            (2.0 - s) * analysis.stderr1,
        )
    } else {
        (0.5 * s * analysis.log_det_mean, 0.0)
    };
    Ok(EnergyEstimate { s, value, stderr })
}

/// A variational lower bound that carries Monte Carlo confidence, not a
/// proof.
#[derive(Debug, Clone, Copy)]
pub struct VariationalBound {
    /// `h + E - 3 stderr(E)`; in expectation a lower bound for `P(A, s)`.
    pub value: f64,
    pub h: f64,
    pub energy: EnergyEstimate,
}

/// Non-certified variational lower bound `h(p) + E_hat - 3 stderr` from a
/// completed analysis. Bernoulli measures are a subclass of the ergodic
/// measures in the variational principle, so in expectation this sits below
/// the pressure.
pub fn variational_lower_from(analysis: &BernoulliAnalysis, s: f64) -> Result<VariationalBound> {
    let energy = energy_estimate(analysis, s)?;
    Ok(VariationalBound {
        value: analysis.h + energy.value - 3.0 * energy.stderr,
        h: analysis.h,
        energy,
    })
}

/// Convenience wrapper: run the Monte Carlo and form the variational bound.
pub fn variational_lower(
    tuple: &LinearTuple,
    p: &BernoulliWeights,
    s: f64,
    steps: usize,
    reps: usize,
    seed: u64,
) -> Result<VariationalBound> {
    let analysis = lyapunov_mc(tuple, p, steps, reps, seed)?;
    variational_lower_from(&analysis, s)
}
