//! Exact small-matrix primitives for dimensions `1 <= d <= 8`.
//!
//! Singular values are the semi-axis lengths of the image of the unit ball,
//! equivalently the square roots of the eigenvalues of `A^T A`. For `d = 2`
//! they come from a closed form (the pressure engine evaluates this on
//! millions of word products, so the 2x2 path has to be branch-light and
//! allocation-free); for `d > 2` from cyclic Jacobi iteration on `A^T A`.
//!
//! All logarithms in this crate are natural logarithms.

use crate::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// Relative invertibility threshold: a matrix counts as invertible when
/// `|det A| > INVERT_EPS * alpha_1(A)^d`.
pub const INVERT_EPS: f64 = 1e-14;

/// Convergence tolerance for the cyclic Jacobi sweep (relative off-diagonal
/// mass of `A^T A`).
const JACOBI_TOL: f64 = 1e-14;

/// A dense `d x d` real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    d: usize,
    entries: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries. Requires `1 <= d <= 8` and
    /// finite entries.
    pub fn from_flat(d: usize, entries: Vec<f64>) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(Error::Input(format!(
                "dimension must be between 1 and {MAX_DIM}, got {d}"
            )));
        }
        if entries.len() != d * d {
            return Err(Error::Input(format!(
                "expected {} entries for a {d}x{d} matrix, got {}",
                d * d,
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("matrix entries must be finite".into()));
        }
        Ok(Matrix { d, entries })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::Input(format!(
                    "ragged matrix: expected {d} columns, got {}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Matrix::from_flat(d, entries)
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1.0;
        }
        Matrix { d, entries }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = diag[i];
        }
        Matrix { d, entries }
    }

    /// 2x2 rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Matrix {
            d: 2,
            entries: vec![c, -s, s, c],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    pub fn scale(&self, c: f64) -> Self {
        Matrix {
            d: self.d,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Input("dimension mismatch in matrix add".into()));
        }
        Matrix::from_flat(
            self.d,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Matrix) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Input("dimension mismatch in matrix mul".into()));
        }
        let d = self.d;
        let mut out = vec![0.0; d * d];
        mat_mul(d, &self.entries, &other.entries, &mut out);
        Ok(Matrix { d, entries: out })
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.d;
        debug_assert_eq!(v.len(), d);
        let mut out = vec![0.0; d];
        mat_vec(d, &self.entries, v, &mut out);
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.entries[i * d + j];
            }
        }
        Matrix { d, entries: out }
    }

    pub fn det(&self) -> f64 {
        det_slice(self.d, &self.entries)
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    /// Inverse via Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.d;
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(d).entries;
        for col in 0..d {
            let mut pivot = col;
            for r in col + 1..d {
                if a[r * d + col].abs() > a[pivot * d + col].abs() {
                    pivot = r;
                }
            }
            if a[pivot * d + col] == 0.0 {
                return Err(Error::Input("matrix is singular".into()));
            }
            if pivot != col {
                for j in 0..d {
                    a.swap(col * d + j, pivot * d + j);
                    inv.swap(col * d + j, pivot * d + j);
                }
            }
            let p = a[col * d + col];
            for j in 0..d {
                a[col * d + j] /= p;
                inv[col * d + j] /= p;
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = a[r * d + col];
                if f != 0.0 {
                    for j in 0..d {
                        a[r * d + j] -= f * a[col * d + j];
                        inv[r * d + j] -= f * inv[col * d + j];
                    }
                }
            }
        }
        Ok(Matrix { d, entries: inv })
    }

    /// Euclidean operator norm, `alpha_1(A)`.
    pub fn norm(&self) -> f64 {
        let mut scratch = SvdScratch::new(self.d);
        singular_values_slice(self.d, &self.entries, &mut scratch);
        scratch.values[0]
    }

    /// Checks the relative nondegeneracy condition
    /// `|det A| > 1e-14 * alpha_1(A)^d`.
    pub fn check_invertible(&self) -> Result<()> {
        let sv = singular_values(self)?;
        let a1 = sv.values()[0];
        let det = self.det().abs();
        if a1 == 0.0 || det <= INVERT_EPS * a1.powi(self.d as i32) {
            return Err(Error::Input(
                "matrix is numerically singular (relative determinant below 1e-14)".into(),
            ));
        }
        Ok(())
    }
}

/// Singular values of a matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValues {
    values: Vec<f64>,
}

impl SingularValues {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `alpha_k`, 1-indexed as in `alpha_1 >= ... >= alpha_d`.
    pub fn alpha(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

/// Reusable workspace so the word-product loops never allocate.
pub(crate) struct SvdScratch {
    pub values: Vec<f64>,
    gram: Vec<f64>,
}

impl SvdScratch {
    pub fn new(d: usize) -> Self {
        SvdScratch {
            values: vec![0.0; d],
            gram: vec![0.0; d * d],
        }
    }
}

/// Singular values of `A`, descending.
pub fn singular_values(a: &Matrix) -> Result<SingularValues> {
    if a.entries.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("matrix entries must be finite".into()));
    }
    let mut scratch = SvdScratch::new(a.d);
    singular_values_slice(a.d, &a.entries, &mut scratch);
    Ok(SingularValues {
        values: scratch.values,
    })
}

/// Core singular-value kernel on a row-major slice. Results land in
/// `scratch.values`, descending.
pub(crate) fn singular_values_slice(d: usize, a: &[f64], scratch: &mut SvdScratch) {
    match d {
        1 => scratch.values[0] = a[0].abs(),
        2 => {
            let (s1, s2) = svd2(a[0], a[1], a[2], a[3]);
            scratch.values[0] = s1;
            scratch.values[1] = s2;
        }
        _ => jacobi_singular_values(d, a, scratch),
    }
}

/// Closed-form singular values of `[[a, b], [c, d]]`.
///
/// With E = (a+d)/2, F = (a-d)/2, G = (c+b)/2, H = (c-b)/2 the values are
/// Q + R and |Q - R| for Q = hypot(E, H), R = hypot(F, G). The smaller one is
/// recovered as |det| / alpha_1 to avoid cancellation when Q is close to R.
#[inline]
pub fn svd2(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (c + b);
    let h = 0.5 * (c - b);
    let q = f64::hypot(e, h);
    let r = f64::hypot(f, g);
    let s1 = q + r;
    let det = a * d - b * c;
    let s2 = if s1 > 0.0 { det.abs() / s1 } else { 0.0 };
    (s1, s2)
}

/// Cyclic Jacobi eigen-iteration on the Gram matrix `A^T A`.
fn jacobi_singular_values(d: usize, a: &[f64], scratch: &mut SvdScratch) {
    let g = &mut scratch.gram;
    // G = A^T A
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += a[k * d + i] * a[k * d + j];
            }
            g[i * d + j] = acc;
        }
    }
    let scale: f64 = (0..d).map(|i| g[i * d + i]).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in p + 1..d {
                off = off.max(g[p * d + q].abs());
            }
        }
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let gpq = g[p * d + q];
                if gpq.abs() <= JACOBI_TOL * scale * 1e-2 {
                    continue;
                }
                let gpp = g[p * d + p];
                let gqq = g[q * d + q];
                let theta = 0.5 * (gqq - gpp) / gpq;
                let t = theta.signum() / (theta.abs() + f64::hypot(1.0, theta));
                let cos = 1.0 / f64::hypot(1.0, t);
                let sin = t * cos;
                for k in 0..d {
                    let gkp = g[k * d + p];
                    let gkq = g[k * d + q];
                    g[k * d + p] = cos * gkp - sin * gkq;
                    g[k * d + q] = sin * gkp + cos * gkq;
                }
                for k in 0..d {
                    let gpk = g[p * d + k];
                    let gqk = g[q * d + k];
                    g[p * d + k] = cos * gpk - sin * gqk;
                    g[q * d + k] = sin * gpk + cos * gqk;
                }
            }
        }
    }
    for i in 0..d {
        scratch.values[i] = g[i * d + i].max(0.0).sqrt();
    }
    scratch
        .values
        .sort_unstable_by(|x, y| y.partial_cmp(x).unwrap());
    // The Gram matrix squares the condition number, which costs the smallest
    // value relative accuracy. Recover it from the pivoted determinant so
    // that the product of the values reproduces |det A|.
    let head: f64 = scratch.values[..d - 1].iter().product();
    if head > 0.0 {
        let corrected = det_slice(d, a).abs() / head;
        if corrected <= scratch.values[d - 2] {
            scratch.values[d - 1] = corrected;
        }
    }
}

/// Singular value function `phi^s(A)`.
///
/// For `0 <= s < d` this is `alpha_1 ... alpha_k * alpha_{k+1}^{s-k}` with
/// `k = floor(s)`; for `s >= d` it is `|det A|^{s/d}`. The two branches agree
/// at `s = d`, and `phi^0 = 1`.
pub fn svf(a: &Matrix, s: f64) -> Result<f64> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Input(format!("svf exponent must be >= 0, got {s}")));
    }
    a.check_invertible()?;
    let mut scratch = SvdScratch::new(a.d);
    singular_values_slice(a.d, &a.entries, &mut scratch);
    Ok(svf_from_parts(a.d, &scratch.values, a.det(), s))
}

/// `phi^s` from precomputed singular values and determinant.
#[inline]
pub(crate) fn svf_from_parts(d: usize, alphas: &[f64], det: f64, s: f64) -> f64 {
    let dd = d as f64;
    if s >= dd {
        return det.abs().powf(s / dd);
    }
    let k = s.floor() as usize;
    let mut out = 1.0;
    for &alpha in &alphas[..k] {
        out *= alpha;
    }
    let frac = s - k as f64;
    if frac != 0.0 {
        out *= alphas[k].powf(frac);
    }
    out
}

/// Natural log of `phi^s`, for use when the linear-domain value would leave
/// the representable range.
#[inline]
pub(crate) fn log_svf_from_parts(d: usize, alphas: &[f64], det: f64, s: f64) -> f64 {
    let dd = d as f64;
    if s >= dd {
        return (s / dd) * det.abs().ln();
    }
    let k = s.floor() as usize;
    let mut out = 0.0;
    for &alpha in &alphas[..k] {
        out += alpha.ln();
    }
    let frac = s - k as f64;
    if frac != 0.0 {
        out += frac * alphas[k].ln();
    }
    out
}

/// Exterior norm `||A||_k = alpha_1(A) ... alpha_k(A)`; the operator norm of
/// the induced map on exterior k-forms. `k = 1` is the Euclidean operator
/// norm and `k = d` is `|det A|`.
pub fn exterior_norm(a: &Matrix, k: usize) -> Result<f64> {
    if k == 0 || k > a.d {
        return Err(Error::Input(format!(
            "exterior norm order must lie in [1, {}], got {k}",
            a.d
        )));
    }
    let sv = singular_values(a)?;
    Ok(sv.values()[..k].iter().product())
}

/// Two-sided bounds on the spectral radius from the k-th power,
/// `(|trace(A^k)| / d)^{1/k} <= rho(A) <= ||A^k||^{1/k}`.
///
/// `k` must be a power of two (the power is formed by repeated squaring).
/// Overflow in `A^k` is reported as a numerical failure; callers that need
/// large powers should rescale (see `dimension::joint_spectral_radius_bounds`
/// for the log-domain variant).
pub fn spectral_radius_bounds(a: &Matrix, k: u64) -> Result<(f64, f64)> {
    if k == 0 || !k.is_power_of_two() {
        return Err(Error::Input(format!(
            "power must be a positive power of two, got {k}"
        )));
    }
    let mut p = a.clone();
    let mut e = k;
    while e > 1 {
        p = p.mul(&p)?;
        if p.entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!(
                "overflow while forming A^{k}; retry with log-domain scaling"
            )));
        }
        e /= 2;
    }
    let d = a.d as f64;
    let inv_k = 1.0 / k as f64;
    let lo = (p.trace().abs() / d).powf(inv_k);
    let hi = p.norm().powf(inv_k);
    Ok((lo, hi))
}

/// `out = a * b`, all row-major `d x d` slices. `out` must not alias inputs.
#[inline]
pub(crate) fn mat_mul(d: usize, a: &[f64], b: &[f64], out: &mut [f64]) {
    if d == 2 {
        out[0] = a[0] * b[0] + a[1] * b[2];
        out[1] = a[0] * b[1] + a[1] * b[3];
        out[2] = a[2] * b[0] + a[3] * b[2];
        out[3] = a[2] * b[1] + a[3] * b[3];
        return;
    }
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += a[i * d + k] * b[k * d + j];
            }
            out[i * d + j] = acc;
        }
    }
}

#[inline]
pub(crate) fn mat_vec(d: usize, a: &[f64], v: &[f64], out: &mut [f64]) {
    for i in 0..d {
        let mut acc = 0.0;
        for k in 0..d {
            acc += a[i * d + k] * v[k];
        }
        out[i] = acc;
    }
}

/// Determinant of a row-major slice (closed form for d <= 3, LU above).
pub(crate) fn det_slice(d: usize, a: &[f64]) -> f64 {
    match d {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let mut m = a.to_vec();
            let mut det = 1.0;
            for col in 0..d {
                let mut pivot = col;
                for r in col + 1..d {
                    if m[r * d + col].abs() > m[pivot * d + col].abs() {
                        pivot = r;
                    }
                }
                if m[pivot * d + col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    for j in 0..d {
                        m.swap(col * d + j, pivot * d + j);
                    }
                    det = -det;
                }
                let p = m[col * d + col];
                det *= p;
                for r in col + 1..d {
                    let f = m[r * d + col] / p;
                    if f != 0.0 {
                        for j in col..d {
                            m[r * d + j] -= f * m[col * d + j];
                        }
                    }
                }
            }
            det
        }
    }
}
