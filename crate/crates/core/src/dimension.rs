//! Root-finding on top of the pressure machinery: similarity dimension,
//! affinity-dimension bounds, and joint spectral radius bounds.
//!
//! Every root here is found by bisection. The partition sums are
//! piecewise-smooth in `s` with kinks at the integers, so derivative-based
//! methods have no convergence guarantee; bisection on a strictly monotone
//! function does.

use crate::cones::{self, ConePair};
use crate::linalg::{self, Matrix};
use crate::pressure::{self, BoundMethod, LinearTuple, Potential, PressureOptions};
use crate::{Error, Result};

/// Absolute bisection tolerance for certified dimension bounds.
const ROOT_TOL: f64 = 1e-10;

/// Absolute bisection tolerance for the similarity dimension.
const SIMILARITY_TOL: f64 = 1e-12;

/// Squaring depth `2^k` used per word product in the trace-based spectral
/// radius lower bound. The `(|trace|/d)^{1/K}` bound converges like
/// `log(d)/K`, so `K = 2^21` leaves a slack near 3e-7, inside the 1e-6
/// budget of the single-matrix check.
const JSR_TRACE_LOG2: u32 = 21;

/// Two-sided bounds on a dimension quantity.
#[derive(Debug, Clone)]
pub struct DimensionBounds {
    pub upper: f64,
    pub lower: Option<f64>,
    /// Word level both sides were computed at.
    pub n: usize,
    pub upper_method: BoundMethod,
    pub lower_method: Option<BoundMethod>,
    pub cone: Option<ConePair>,
}

/// Bisection for a strictly decreasing `f` with `f(lo) >= 0 >= f(hi)`.
/// Returns the final bracket; certified bounds take the matching end
/// (high end for upper bounds, low end for lower bounds) rather than the
/// midpoint.
fn bisect_decreasing(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// The unique `s >= 0` with `sum_i r_i^s = 1` for contraction ratios
/// `r_i` in `(0, 1)`.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(Error::Input("need at least one ratio".into()));
    }
    if ratios.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::Input(
            "similarity ratios must lie strictly inside (0, 1)".into(),
        ));
    }
    let f = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    if ratios.len() == 1 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Numerical("similarity dimension out of range".into()));
        }
    }
    let (lo, hi) = bisect_decreasing(0.0, hi, SIMILARITY_TOL, |s| Ok(f(s)))?;
    Ok(0.5 * (lo + hi))
}

fn require_contractive(tuple: &LinearTuple) -> Result<()> {
    if !tuple.is_contractive() {
        return Err(Error::Input(
            "tuple must be strictly contractive (||A_i|| < 1 for all i)".into(),
        ));
    }
    Ok(())
}

/// Root `s_n` of `S_n(A, s) = 0`: a certified upper bound for the affinity
/// dimension, nonincreasing along level doublings.
pub fn affinity_dimension_upper(tuple: &LinearTuple, n: usize) -> Result<f64> {
    affinity_dimension_upper_with(tuple, n, &PressureOptions::default())
}

pub fn affinity_dimension_upper_with(
    tuple: &LinearTuple,
    n: usize,
    opts: &PressureOptions,
) -> Result<f64> {
    require_contractive(tuple)?;
    if tuple.len() == 1 {
        // one contractive map: S_n(0) = 0 is already the root
        return Ok(0.0);
    }
    let cap = 2.0 * tuple.dim() as f64;
    let at_cap = pressure::partition_sum_with(tuple, cap, n, Potential::Svf, opts)?;
    if at_cap >= 0.0 {
        return Err(Error::Numerical(format!(
            "pressure root exceeds the sanity cap 2d = {cap}"
        )));
    }
    let (_, hi) = bisect_decreasing(0.0, cap, ROOT_TOL, |s| {
        pressure::partition_sum_with(tuple, s, n, Potential::Svf, opts)
    })?;
    Ok(hi)
}

/// Two-sided affinity dimension bounds at level `n`.
///
/// The upper side is the root of `S_n`. The lower side, when available,
/// comes from the cone-certified pressure lower bound: the root of
/// `(log c + S_n(s)) / n`, which under-estimates the true root because the
/// certified bound sits below the pressure and both are strictly decreasing.
/// The slope bracket `(log alpha_*, log alpha^*)` converts the certified
/// pressure value at the upper root into a second lower bound,
/// `s_n - |log c| / (n |log alpha^*|)`; the better of the two is reported.
pub fn affinity_dimension_bounds(
    tuple: &LinearTuple,
    n: usize,
    use_cone: bool,
) -> Result<DimensionBounds> {
    let opts = PressureOptions::default();
    let upper = affinity_dimension_upper_with(tuple, n, &opts)?;

    if tuple.is_conformal() {
        // conformal sums factorize exactly, so S_n / n is the pressure and
        // the level-n root is the dimension itself
        return Ok(DimensionBounds {
            upper,
            lower: Some(upper),
            n,
            upper_method: BoundMethod::ExactConformal,
            lower_method: Some(BoundMethod::ExactConformal),
            cone: None,
        });
    }

    let mut bounds = DimensionBounds {
        upper,
        lower: None,
        n,
        upper_method: BoundMethod::SubadditiveInf,
        lower_method: None,
        cone: None,
    };
    if !(use_cone && tuple.dim() == 2) {
        return Ok(bounds);
    }
    let pair = match cones::find_invariant_cone(tuple, cones::DEFAULT_MAX_ITER, cones::DEFAULT_MIN_GAP)? {
        Some(pair) => pair,
        None => return Ok(bounds),
    };

    let log_c = pair.c.ln();
    let nf = n as f64;
    // direct root of the certified lower bound L_n(s) = (log c + S_n(s)) / n
    let g0 = log_c + nf * (tuple.len() as f64).ln();
    let direct = if g0 <= 0.0 {
        0.0
    } else {
        bisect_decreasing(0.0, upper, ROOT_TOL, |s| {
            Ok(log_c + pressure::partition_sum_with(tuple, s, n, Potential::Svf, &opts)?)
        })?
        .0
    };
    // slope-bracket conversion: at s_n the pressure sits in [log c / n, 0],
    // and P moves at least |log alpha^*| per unit of s, so the root is at
    // most |log c| / (n |log alpha^*|) below s_n
    let slope_hi = tuple.alpha_sup().ln();
    let via_slope = upper - log_c.abs() / (nf * slope_hi.abs());
    let lower = direct.max(via_slope).max(0.0).min(upper);
    bounds.lower = Some(lower);
    bounds.lower_method = Some(BoundMethod::ConeCertified);
    bounds.cone = Some(pair);
    Ok(bounds)
}

/// Trace-based lower bound on `rho(P)` in the log domain: repeated squaring
/// with per-step renormalization, returning `log((|trace(P^K)| / d)^{1/K})`
/// for `K = 2^JSR_TRACE_LOG2`.
fn log_rho_lower(d: usize, p: &[f64]) -> f64 {
    let dd = d * d;
    let mut b = p.to_vec();
    let mut scale0 = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale0 == 0.0 {
        return f64::NEG_INFINITY;
    }
    for x in b.iter_mut() {
        *x /= scale0;
    }
    let mut log_scale = scale0.ln();
    let mut tmp = vec![0.0; dd];
    for _ in 0..JSR_TRACE_LOG2 {
        linalg::mat_mul(d, &b, &b.clone(), &mut tmp);
        scale0 = tmp.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale0 == 0.0 {
            return f64::NEG_INFINITY;
        }
        for (dst, src) in b.iter_mut().zip(&tmp) {
            *dst = src / scale0;
        }
        log_scale = 2.0 * log_scale + scale0.ln();
    }
    let trace: f64 = (0..d).map(|i| b[i * d + i]).sum();
    if trace == 0.0 {
        return f64::NEG_INFINITY;
    }
    let k = (1u64 << JSR_TRACE_LOG2) as f64;
    (log_scale + trace.abs().ln() - (d as f64).ln()) / k
}

/// Two-sided joint spectral radius bounds from all words up to `n_max`:
///
/// ```text
/// lo = max_{|i| <= n_max} rho_lo(A(i))^{1/|i|}
/// hi = min_{n <= n_max} max_{|i| = n} ||A(i)||^{1/n}
/// ```
///
/// `hi` is valid by submultiplicativity; `lo` because the spectral radius of
/// any word product, rooted by its length, sits below the JSR.
pub fn joint_spectral_radius_bounds(tuple: &LinearTuple, n_max: usize) -> Result<(f64, f64)> {
    joint_spectral_radius_bounds_with(tuple, n_max, &PressureOptions::default())
}

pub fn joint_spectral_radius_bounds_with(
    tuple: &LinearTuple,
    n_max: usize,
    opts: &PressureOptions,
) -> Result<(f64, f64)> {
    if n_max == 0 {
        return Err(Error::Input("n_max must be >= 1".into()));
    }
    // total node budget: sum of m^k for k <= n_max
    let mut nodes: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..n_max {
        level = level
            .checked_mul(tuple.len() as u64)
            .filter(|&l| l <= opts.leaf_cap)
            .ok_or_else(|| Error::Resource(format!("{}^{n_max} words exceed the cap", tuple.len())))?;
        nodes += level;
        if nodes > opts.leaf_cap {
            return Err(Error::Resource(format!(
                "enumerating all words up to length {n_max} exceeds the cap"
            )));
        }
    }

    let d = tuple.dim();
    let dd = d * d;
    let mut level_max_log_norm = vec![f64::NEG_INFINITY; n_max + 1];
    let mut best_log_lo = f64::NEG_INFINITY;
    let mut buf = vec![0.0; (n_max + 1) * dd];
    buf[..dd].copy_from_slice(Matrix::identity(d).entries());
    let mut scratch = linalg::SvdScratch::new(d);

    struct Walk<'a> {
        tuple: &'a LinearTuple,
        d: usize,
        n_max: usize,
    }
    impl Walk<'_> {
        fn go(
            &self,
            depth: usize,
            buf: &mut [f64],
            scratch: &mut linalg::SvdScratch,
            level_max: &mut [f64],
            best_lo: &mut f64,
        ) {
            let dd = self.d * self.d;
            if depth == self.n_max {
                return;
            }
            for a in self.tuple.matrices() {
                let (done, rest) = buf.split_at_mut((depth + 1) * dd);
                let src = &done[depth * dd..];
                linalg::mat_mul(self.d, a.entries(), src, &mut rest[..dd]);
                let len = depth + 1;
                {
                    let product = &buf[len * dd..(len + 1) * dd];
                    linalg::singular_values_slice(self.d, product, scratch);
                    let log_norm = scratch.values[0].ln();
                    if log_norm > level_max[len] {
                        level_max[len] = log_norm;
                    }
                    let lo = log_rho_lower(self.d, product) / len as f64;
                    if lo > *best_lo {
                        *best_lo = lo;
                    }
                }
                self.go(depth + 1, buf, scratch, level_max, best_lo);
            }
        }
    }
    Walk { tuple, d, n_max }.go(0, &mut buf, &mut scratch, &mut level_max_log_norm, &mut best_log_lo);

    let log_hi = (1..=n_max)
        .map(|n| level_max_log_norm[n] / n as f64)
        .fold(f64::INFINITY, f64::min);
    Ok((best_log_lo.exp(), log_hi.exp()))
}
