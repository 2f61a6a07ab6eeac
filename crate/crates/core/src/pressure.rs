//! Partition sums over matrix words and rigorous upper pressure bounds.
//!
//! For a tuple `A = (A_1, ..., A_m)` and a word `i = (i_1 ... i_n)` the word
//! product is `A(i) = A_{i_n} ... A_{i_1}` (new symbols multiply on the
//! left). The partition sum at level `n` is
//!
//! ```text
//! S_n(A, s) = log sum_{|i| = n} phi^s(A(i))        (SVF potential)
//! S_n(A, s) = log sum_{|i| = n} ||A(i)||^s         (NORM potential)
//! ```
//!
//! Both potentials are submultiplicative, so `S_n / n` decreases to the
//! pressure (`P` for SVF, `M` for NORM) and every finite level is a rigorous
//! upper bound.
//!
//! Evaluation is a depth-first traversal with a stack of partial products
//! (one `d x d` multiply per node). Leaves are accumulated in a scaled
//! linear domain - each leaf divided by `(max_i pot(A_i))^n` - with pairwise
//! summation in lexicographic word order. The reduction tree depends only on
//! `(m, n, prefix_depth)`, never on the worker count, so results are
//! bit-identical across thread pools.

use rayon::prelude::*;

use crate::linalg::{self, Matrix, SvdScratch};
use crate::{Error, Result};

/// A tuple `(A_1, ..., A_m)` of invertible `d x d` matrices.
#[derive(Debug, Clone)]
pub struct LinearTuple {
    d: usize,
    matrices: Vec<Matrix>,
}

impl LinearTuple {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let m = matrices.len();
        if m == 0 {
            return Err(Error::Input("tuple must contain at least one map".into()));
        }
        let d = matrices[0].dim();
        for a in &matrices {
            if a.dim() != d {
                return Err(Error::Input("all maps must share one dimension".into()));
            }
            a.check_invertible()?;
        }
        Ok(LinearTuple { d, matrices })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Alphabet size `m`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    /// `min_i alpha_d(A_i)`: the slowest singular value over the tuple.
    pub fn alpha_star(&self) -> f64 {
        self.matrices
            .iter()
            .map(|a| linalg::singular_values(a).expect("validated tuple").min())
            .fold(f64::INFINITY, f64::min)
    }

    /// `max_i alpha_1(A_i)`: the largest operator norm over the tuple.
    pub fn alpha_sup(&self) -> f64 {
        self.matrices.iter().map(Matrix::norm).fold(0.0, f64::max)
    }

    /// All maps are strict contractions (`||A_i|| < 1`).
    pub fn is_contractive(&self) -> bool {
        self.alpha_sup() < 1.0
    }

    /// All maps are scalar multiples of isometries, within relative 1e-12.
    pub fn is_conformal(&self) -> bool {
        self.matrices.iter().all(|a| {
            let sv = linalg::singular_values(a).expect("validated tuple");
            sv.max() <= sv.min() * (1.0 + 1e-12)
        })
    }
}

/// Which subadditive potential the partition sum uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    /// Singular value function `phi^s` (pressure `P`).
    Svf,
    /// Operator norm to the `s`, `||.||^s` (matrix pressure `M`).
    Norm,
}

impl Potential {
    #[inline]
    fn value_from_parts(self, d: usize, alphas: &[f64], det: f64, s: f64) -> f64 {
        match self {
            Potential::Svf => linalg::svf_from_parts(d, alphas, det, s),
            Potential::Norm => {
                if s == 0.0 {
                    1.0
                } else {
                    alphas[0].powf(s)
                }
            }
        }
    }

    #[inline]
    fn log_from_parts(self, d: usize, alphas: &[f64], det: f64, s: f64) -> f64 {
        match self {
            Potential::Svf => linalg::log_svf_from_parts(d, alphas, det, s),
            Potential::Norm => {
                if s == 0.0 {
                    0.0
                } else {
                    s * alphas[0].ln()
                }
            }
        }
    }

    pub fn quantity_tag(self) -> &'static str {
        match self {
            Potential::Svf => "svf-pressure",
            Potential::Norm => "matrix-pressure",
        }
    }
}

/// Tuning knobs for the word-tree traversal.
#[derive(Debug, Clone)]
pub struct PressureOptions {
    /// Maximum number of leaves `m^n` a single partition sum may touch.
    pub leaf_cap: u64,
    /// Depth at which the word tree is split into independent subtrees.
    /// Partial sums are reduced in prefix order, so this only affects
    /// parallel grain size, not the result.
    pub prefix_depth: usize,
}

impl Default for PressureOptions {
    fn default() -> Self {
        PressureOptions {
            leaf_cap: 1 << 24,
            prefix_depth: 4,
        }
    }
}

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    /// `min_n S_n / n`, rigorous by subadditivity.
    SubadditiveInf,
    /// Cone-certified supermultiplicative lower bound.
    ConeCertified,
    /// Bernoulli variational bound, Monte Carlo (not certified).
    VariationalMc,
    /// Conformal tuples: `S_n / n` is exact at every level.
    ExactConformal,
}

impl BoundMethod {
    pub fn tag(self) -> &'static str {
        match self {
            BoundMethod::SubadditiveInf => "subadditive-inf",
            BoundMethod::ConeCertified => "cone-certified",
            BoundMethod::VariationalMc => "variational-MC",
            BoundMethod::ExactConformal => "exact-conformal",
        }
    }
}

/// A certified sandwich around `P(A, s)` or `M(A, s)`.
#[derive(Debug, Clone)]
pub struct PressureBounds {
    pub s: f64,
    /// Deepest level used.
    pub n: usize,
    /// Level at which the upper bound `min_n S_n / n` was attained.
    pub attained_n: usize,
    pub upper: f64,
    pub lower: Option<f64>,
    pub potential: Potential,
    pub method: BoundMethod,
    pub lower_method: Option<BoundMethod>,
    pub cone: Option<crate::cones::ConePair>,
    /// `min_i alpha_d(A_i)` - slope bracket floor `log alpha_*`.
    pub alpha_star: f64,
    /// `max_i alpha_1(A_i)` - slope bracket ceiling `log alpha^*`.
    pub alpha_sup: f64,
}

/// Deterministic pairwise summation: a binary-counter reduction over the
/// inputs in order. The tree shape depends only on the element count.
#[derive(Debug, Default)]
pub(crate) struct PairwiseAccumulator {
    stack: Vec<(u32, f64)>,
}

impl PairwiseAccumulator {
    pub fn new() -> Self {
        PairwiseAccumulator { stack: Vec::new() }
    }

    #[inline]
    pub fn push(&mut self, value: f64) {
        let mut level = 0u32;
        let mut v = value;
        while let Some(&(top_level, top_val)) = self.stack.last() {
            if top_level != level {
                break;
            }
            self.stack.pop();
            v += top_val;
            level += 1;
        }
        self.stack.push((level, v));
    }

    /// Folds the remaining partials from the most recent (smallest) upward.
    pub fn finish(self) -> f64 {
        let mut acc = 0.0;
        for &(_, v) in self.stack.iter().rev() {
            acc += v;
        }
        acc
    }
}

/// Pairwise sum of a slice: the canonical binary-counter reduction over the
/// values in order. Partition sums reduce leaves and prefix partials through
/// exactly this tree, so independent enumerations can reproduce them
/// bit-for-bit.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    let mut acc = PairwiseAccumulator::new();
    for &v in values {
        acc.push(v);
    }
    acc.finish()
}

/// Word product `A(i) = A_{i_n} ... A_{i_1}` for a word over `0..m`.
pub fn word_product(tuple: &LinearTuple, word: &[usize]) -> Result<Matrix> {
    if word.is_empty() {
        return Err(Error::Input("word must have length >= 1".into()));
    }
    let mut p = Matrix::identity(tuple.d);
    for &sym in word {
        if sym >= tuple.len() {
            return Err(Error::Input(format!(
                "word symbol {sym} out of range for alphabet of size {}",
                tuple.len()
            )));
        }
        p = tuple.matrix(sym).mul(&p)?;
    }
    Ok(p)
}

struct SumSpec {
    d: usize,
    s: f64,
    n: usize,
    potential: Potential,
    /// `log max_i pot(A_i)`; each leaf is divided by its `n`-th power.
    log_scale: f64,
    /// Precomputed `exp(-n log_scale)` when the linear domain is safe.
    inv_scale_n: f64,
    linear_ok: bool,
}

impl SumSpec {
    #[inline]
    fn leaf(&self, product: &[f64], scratch: &mut SvdScratch) -> f64 {
        let d = self.d;
        linalg::singular_values_slice(d, product, scratch);
        let det = linalg::det_slice(d, product);
        if self.linear_ok {
            self.potential.value_from_parts(d, &scratch.values, det, self.s) * self.inv_scale_n
        } else {
            (self.potential.log_from_parts(d, &scratch.values, det, self.s)
                - self.n as f64 * self.log_scale)
                .exp()
        }
    }
}

/// Recursive descent over the word tree. `buf` holds one partial product per
/// level; level `level` is complete and levels above are scratch.
fn descend(
    mats: &[Matrix],
    level: usize,
    remaining: usize,
    buf: &mut [f64],
    scratch: &mut SvdScratch,
    spec: &SumSpec,
    acc: &mut PairwiseAccumulator,
) {
    let dd = spec.d * spec.d;
    if remaining == 0 {
        let product = &buf[level * dd..(level + 1) * dd];
        acc.push(spec.leaf(product, scratch));
        return;
    }
    for a in mats {
        let (done, rest) = buf.split_at_mut((level + 1) * dd);
        let src = &done[level * dd..];
        linalg::mat_mul(spec.d, a.entries(), src, &mut rest[..dd]);
        descend(mats, level + 1, remaining - 1, buf, scratch, spec, acc);
    }
}

fn subtree_sum(tuple: &LinearTuple, root: &[f64], depth: usize, spec: &SumSpec) -> f64 {
    let d = tuple.d;
    let dd = d * d;
    let mut buf = vec![0.0; (depth + 1) * dd];
    buf[..dd].copy_from_slice(root);
    let mut scratch = SvdScratch::new(d);
    let mut acc = PairwiseAccumulator::new();
    descend(
        tuple.matrices(),
        0,
        depth,
        &mut buf,
        &mut scratch,
        spec,
        &mut acc,
    );
    acc.finish()
}

/// Enumerates all length-`p` prefixes in lexicographic order together with
/// their partial products `A_{i_p} ... A_{i_1}`.
fn prefix_products(tuple: &LinearTuple, p: usize) -> Vec<Vec<f64>> {
    let d = tuple.d;
    let dd = d * d;
    let mut out = Vec::new();
    let mut stack_buf = vec![0.0; (p + 1) * dd];
    let ident = Matrix::identity(d);
    stack_buf[..dd].copy_from_slice(ident.entries());
    fn rec(
        tuple: &LinearTuple,
        level: usize,
        p: usize,
        buf: &mut [f64],
        out: &mut Vec<Vec<f64>>,
        dd: usize,
        d: usize,
    ) {
        if level == p {
            out.push(buf[level * dd..(level + 1) * dd].to_vec());
            return;
        }
        for a in tuple.matrices() {
            let (done, rest) = buf.split_at_mut((level + 1) * dd);
            let src = &done[level * dd..];
            linalg::mat_mul(d, a.entries(), src, &mut rest[..dd]);
            rec(tuple, level + 1, p, buf, out, dd, d);
        }
    }
    rec(tuple, 0, p, &mut stack_buf, &mut out, dd, d);
    out
}

fn checked_leaf_count(m: usize, n: usize, cap: u64) -> Result<u64> {
    let mut leaves: u64 = 1;
    for _ in 0..n {
        leaves = match leaves.checked_mul(m as u64) {
            Some(l) if l <= cap => l,
            _ => {
                return Err(Error::Resource(format!(
                    "level {n} needs {m}^{n} > {cap} word products"
                )))
            }
        };
    }
    Ok(leaves)
}

/// Partition sum `S_n` with default options.
pub fn partition_sum(tuple: &LinearTuple, s: f64, n: usize, potential: Potential) -> Result<f64> {
    partition_sum_with(tuple, s, n, potential, &PressureOptions::default())
}

/// Partition sum `S_n(A, s)` for the chosen potential.
///
/// Deterministic: two runs with different worker counts produce bit-identical
/// results.
pub fn partition_sum_with(
    tuple: &LinearTuple,
    s: f64,
    n: usize,
    potential: Potential,
    opts: &PressureOptions,
) -> Result<f64> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Input(format!("s must be finite and >= 0, got {s}")));
    }
    if n == 0 {
        return Err(Error::Input("level n must be >= 1".into()));
    }
    checked_leaf_count(tuple.len(), n, opts.leaf_cap)?;

    let d = tuple.d;
    let mut scratch = SvdScratch::new(d);
    let mut log_scale = f64::NEG_INFINITY;
    for a in tuple.matrices() {
        linalg::singular_values_slice(d, a.entries(), &mut scratch);
        let v = potential.log_from_parts(d, &scratch.values, a.det(), s);
        log_scale = log_scale.max(v);
    }
    if !log_scale.is_finite() {
        return Err(Error::Numerical(
            "potential of a generator is out of range".into(),
        ));
    }
    let nf = n as f64;
    let linear_ok = (nf * log_scale).abs() < 600.0;
    let spec = SumSpec {
        d,
        s,
        n,
        potential,
        log_scale,
        inv_scale_n: (-nf * log_scale).exp(),
        linear_ok,
    };

    let p = opts.prefix_depth.min(n);
    let scaled_total = if p == 0 || p == n || tuple.len() == 1 {
        let ident = Matrix::identity(d);
        subtree_sum(tuple, ident.entries(), n, &spec)
    } else {
        let prefixes = prefix_products(tuple, p);
        let partials: Vec<f64> = prefixes
            .par_iter()
            .map(|root| subtree_sum(tuple, root, n - p, &spec))
            .collect();
        pairwise_sum(&partials)
    };

    if !scaled_total.is_finite() || scaled_total <= 0.0 {
        return Err(Error::Numerical(format!(
            "partition sum at level {n} left the representable range (scaled total {scaled_total})"
        )));
    }
    Ok(scaled_total.ln() + nf * log_scale)
}

/// Rigorous upper bound `min_{n <= n_max} S_n / n` on the pressure.
///
/// Subadditivity gives `P <= S_n / n` for every `n`, so the minimum over the
/// computed levels is a certified upper bound; `attained_n` records the
/// minimizing level.
pub fn pressure_upper(
    tuple: &LinearTuple,
    s: f64,
    n_max: usize,
    potential: Potential,
) -> Result<PressureBounds> {
    pressure_upper_with(tuple, s, n_max, potential, &PressureOptions::default())
}

pub fn pressure_upper_with(
    tuple: &LinearTuple,
    s: f64,
    n_max: usize,
    potential: Potential,
    opts: &PressureOptions,
) -> Result<PressureBounds> {
    if n_max == 0 {
        return Err(Error::Input("n_max must be >= 1".into()));
    }
    let mut best = f64::INFINITY;
    let mut attained = 1;
    for n in 1..=n_max {
        let sn = partition_sum_with(tuple, s, n, potential, opts)?;
        let avg = sn / n as f64;
        if avg < best {
            best = avg;
            attained = n;
        }
    }
    Ok(PressureBounds {
        s,
        n: n_max,
        attained_n: attained,
        upper: best,
        lower: None,
        potential,
        method: BoundMethod::SubadditiveInf,
        lower_method: None,
        cone: None,
        alpha_star: tuple.alpha_star(),
        alpha_sup: tuple.alpha_sup(),
    })
}

/// Slope bracket `(log alpha_*, log alpha^*)` with
/// `alpha_* = min_i alpha_d(A_i)` and `alpha^* = max_i alpha_1(A_i)`.
///
/// For every level `n`, `s` and `eps > 0`:
/// `S_n(s) + n eps log alpha_* <= S_n(s + eps) <= S_n(s) + n eps log alpha^*`,
/// and the same bracket holds for the limits `P` and `M`. The dimension
/// solver uses this to convert a pressure value at one `s` into an interval
/// around the root.
pub fn lipschitz_bracket(tuple: &LinearTuple) -> (f64, f64) {
    (tuple.alpha_star().ln(), tuple.alpha_sup().ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag_pair() -> LinearTuple {
        LinearTuple::new(vec![
            Matrix::diagonal(&[0.5, 1.0 / 3.0]),
            Matrix::diagonal(&[0.25, 0.2]),
        ])
        .unwrap()
    }

    fn random_contractive_tuple(rng: &mut ChaCha8Rng, m: usize) -> LinearTuple {
        let mats = (0..m)
            .map(|_| loop {
                let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if let Ok(a) = Matrix::from_flat(2, entries) {
                    let norm = a.norm();
                    if norm > 1e-3 {
                        let b = a.scale(rng.gen_range(0.2..0.95) / norm);
                        if b.check_invertible().is_ok() {
                            break b;
                        }
                    }
                }
            })
            .collect();
        LinearTuple::new(mats).unwrap()
    }

    #[test]
    fn zero_exponent_counts_words() {
        let t = diag_pair();
        let s5 = partition_sum(&t, 0.0, 5, Potential::Svf).unwrap();
        assert!((s5 - 5.0 * (2.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_tuple_factorizes() {
        // positive diagonal systems: sum over words = (sum_i a_i b_i^{s-1})^n
        let t = diag_pair();
        let per_word = 0.5 * (1.0f64 / 3.0).sqrt() + 0.25 * 0.2f64.sqrt();
        for n in [1, 2, 4, 6] {
            let sn = partition_sum(&t, 1.5, n, Potential::Svf).unwrap();
            assert!(
                (sn - n as f64 * per_word.ln()).abs() < 1e-10,
                "n={n} sn={sn}"
            );
        }
    }

    #[test]
    fn brute_force_matches_bit_consistently() {
        let t = diag_pair();
        let s = 1.5;
        let n = 3;
        // Independent enumeration: same leaf arithmetic (left-multiplied
        // products, public svf, same scaling), canonical pairwise reduction.
        let scale = t
            .matrices()
            .iter()
            .map(|a| linalg::svf(a, s).unwrap())
            .fold(0.0f64, f64::max);
        let inv_scale_n = (-(n as f64) * scale.ln()).exp();
        let m = t.len();
        let mut leaves = Vec::new();
        for w in 0..m.pow(n as u32) {
            let mut word = Vec::new();
            let mut x = w;
            for _ in 0..n {
                word.push(x % m);
                x /= m;
            }
            word.reverse(); // lexicographic order over (i_1 ... i_n)
            let mut p = Matrix::identity(2);
            for &sym in &word {
                p = t.matrix(sym).mul(&p).unwrap();
            }
            leaves.push(linalg::svf(&p, s).unwrap() * inv_scale_n);
        }
        let brute = pairwise_sum(&leaves).ln() + n as f64 * scale.ln();
        let fast = partition_sum(&t, s, n, Potential::Svf).unwrap();
        assert_eq!(brute.to_bits(), fast.to_bits());
    }

    #[test]
    fn word_order_is_lexicographic_over_first_symbol_first() {
        // Order conventions do not change the sum, but word_product must
        // multiply new symbols on the left: A(i) = A_{i_n} ... A_{i_1}.
        let a = Matrix::from_flat(2, vec![1.0, 1.0, 0.0, 1.0]).unwrap();
        let b = Matrix::from_flat(2, vec![1.0, 0.0, 1.0, 1.0]).unwrap();
        let t = LinearTuple::new(vec![a.clone(), b.clone()]).unwrap();
        let p = word_product(&t, &[0, 1]).unwrap();
        assert_eq!(p, b.mul(&a).unwrap());
    }

    #[test]
    fn single_map_norm_potential() {
        let a = Matrix::from_flat(2, vec![0.9, 0.3, 0.0, 0.7]).unwrap();
        let t = LinearTuple::new(vec![a.clone()]).unwrap();
        let s = 1.3;
        let got = partition_sum(&t, s, 8, Potential::Norm).unwrap();
        let mut p = Matrix::identity(2);
        for _ in 0..8 {
            p = a.mul(&p).unwrap();
        }
        assert!((got - s * p.norm().ln()).abs() < 1e-12);
    }

    #[test]
    fn conformal_upper_is_exact_at_every_level() {
        let t = LinearTuple::new(vec![
            Matrix::rotation(0.3).scale(0.5),
            Matrix::rotation(-1.1).scale(0.5),
        ])
        .unwrap();
        let b = pressure_upper(&t, 1.0, 6, Potential::Svf).unwrap();
        assert!(b.upper.abs() < 1e-12, "upper={}", b.upper);
        for n in 1..=6 {
            let sn = partition_sum(&t, 1.0, n, Potential::Svf).unwrap();
            assert!((sn / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_bound_records_attained_level() {
        let t = diag_pair();
        let b = pressure_upper(&t, 1.5, 6, Potential::Svf).unwrap();
        let per_word = 0.5 * (1.0f64 / 3.0).sqrt() + 0.25 * 0.2f64.sqrt();
        assert!((b.upper - per_word.ln()).abs() < 1e-10);
        assert!(b.attained_n >= 1 && b.attained_n <= 6);
        assert_eq!(b.method, BoundMethod::SubadditiveInf);
    }

    #[test]
    fn upper_nonincreasing_in_n_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let t = random_contractive_tuple(&mut rng, 2);
            let u3 = pressure_upper(&t, 1.2, 3, Potential::Svf).unwrap().upper;
            let u6 = pressure_upper(&t, 1.2, 6, Potential::Svf).unwrap().upper;
            assert!(u6 <= u3 + 1e-12);
        }
    }

    #[test]
    fn subadditivity_of_partition_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let t = random_contractive_tuple(&mut rng, 2);
            for s in [0.5, 1.5] {
                let sn: Vec<f64> = (1..=6)
                    .map(|n| partition_sum(&t, s, n, Potential::Svf).unwrap())
                    .collect();
                for n in 1..=3usize {
                    for k in 1..=3usize {
                        assert!(
                            sn[n + k - 1] <= sn[n - 1] + sn[k - 1] + 1e-9,
                            "s={s} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn norm_dominates_svf_and_agrees_below_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let t = random_contractive_tuple(&mut rng, 2);
            for n in [2usize, 4] {
                for s in [0.0, 0.3, 0.7, 1.0] {
                    let p = partition_sum(&t, s, n, Potential::Svf).unwrap();
                    let m = partition_sum(&t, s, n, Potential::Norm).unwrap();
                    assert!((p - m).abs() <= 1e-12 * p.abs().max(1.0), "s={s}");
                }
                for s in [1.2, 1.7, 2.0] {
                    let p = partition_sum(&t, s, n, Potential::Svf).unwrap();
                    let m = partition_sum(&t, s, n, Potential::Norm).unwrap();
                    assert!(m >= p - 1e-12, "s={s} p={p} m={m}");
                }
            }
        }
    }

    #[test]
    fn lipschitz_bracket_examples() {
        let t = diag_pair();
        let (lo, hi) = lipschitz_bracket(&t);
        assert!((lo - 0.2f64.ln()).abs() < 1e-12);
        assert!((hi - 0.5f64.ln()).abs() < 1e-12);

        // contractive tuple: slope_hi < 0, so pressure strictly decreasing
        assert!(hi < 0.0);

        let iso = LinearTuple::new(vec![Matrix::rotation(0.4), Matrix::rotation(-0.2)]).unwrap();
        let (lo, hi) = lipschitz_bracket(&iso);
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12);
    }

    #[test]
    fn lipschitz_bracket_contract_on_partition_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let t = random_contractive_tuple(&mut rng, 2);
            let (lo, hi) = lipschitz_bracket(&t);
            for n in [2usize, 4] {
                for s in [0.4, 1.3] {
                    for eps in [0.1, 0.01] {
                        let base = partition_sum(&t, s, n, Potential::Svf).unwrap();
                        let bumped = partition_sum(&t, s + eps, n, Potential::Svf).unwrap();
                        let nf = n as f64;
                        assert!(bumped >= base + nf * eps * lo - 1e-9);
                        assert!(bumped <= base + nf * eps * hi + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let t = diag_pair();
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap();
        for s in [0.7, 1.5] {
            let a = pool1.install(|| partition_sum(&t, s, 10, Potential::Svf).unwrap());
            let b = pool8.install(|| partition_sum(&t, s, 10, Potential::Svf).unwrap());
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn leaf_cap_is_enforced() {
        let t = diag_pair();
        let opts = PressureOptions {
            leaf_cap: 1 << 10,
            ..Default::default()
        };
        assert!(matches!(
            partition_sum_with(&t, 1.0, 11, Potential::Svf, &opts),
            Err(Error::Resource(_))
        ));
        assert!(partition_sum_with(&t, 1.0, 10, Potential::Svf, &opts).is_ok());
    }

    #[test]
    fn dimension_three_diagonal_closed_form() {
        // exercises the Jacobi kernel inside the word traversal:
        // positive diagonal d=3 sums factorize, phi^s = a b c^{s-2} on [2,3]
        let t = LinearTuple::new(vec![
            Matrix::diagonal(&[0.5, 1.0 / 3.0, 0.25]),
            Matrix::diagonal(&[0.4, 0.3, 0.1]),
        ])
        .unwrap();
        let s = 2.5;
        let per_word = 0.5 * (1.0 / 3.0) * 0.25f64.sqrt() + 0.4 * 0.3 * 0.1f64.sqrt();
        for n in [1usize, 3, 5] {
            let sn = partition_sum(&t, s, n, Potential::Svf).unwrap();
            assert!(
                (sn - n as f64 * per_word.ln()).abs() < 1e-9,
                "n={n} sn={sn}"
            );
        }
    }

    #[test]
    fn deep_contraction_stays_in_range() {
        // leaf scaling keeps heavily contracted sums representable
        let t = LinearTuple::new(vec![
            Matrix::diagonal(&[1e-3, 5e-4]),
            Matrix::diagonal(&[2e-3, 1e-3]),
        ])
        .unwrap();
        let sn = partition_sum(&t, 1.5, 20, Potential::Svf).unwrap();
        assert!(sn.is_finite());
        // closed form for the positive diagonal family
        let per_word = 1e-3 * (5e-4f64).sqrt() + 2e-3 * (1e-3f64).sqrt();
        assert!((sn - 20.0 * per_word.ln()).abs() < 1e-9);
    }
}
