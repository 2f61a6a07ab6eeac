//! Self-affine set geometry at desk scale: attractor sampling, ellipsoid
//! covers, covering counts, box-counting dimension estimates, and the
//! randomized-translation experiment.
//!
//! # Covering constant
//!
//! The content bound needs an explicit constant. Each level-`k` word `i`
//! contributes an ellipsoid with semi-axes `R alpha_1 >= ... >= R alpha_d`
//! (singular values of the word product). With `q = floor(s) < d`, cover its
//! bounding parallelepiped (sides `2 R alpha_j`) by cubes of side
//! `R alpha_{q+1}`:
//!
//! - axes `j <= q` need `ceil(2 alpha_j / alpha_{q+1}) <= 4 alpha_j / alpha_{q+1}`
//!   cubes (the ratio is >= 1, and `2x + 1 <= 4x` for `x >= 1/2`),
//! - axes `j > q` need at most 2 cubes each (`alpha_j <= alpha_{q+1}`).
//!
//! Each cube fits in a ball of radius `sqrt(d) R alpha_{q+1}`. Summing
//! `count * radius^s` over the axes bounds the s-content of one ellipsoid by
//! `4^q 2^{d-q} d^{s/2} R^s alpha_1 ... alpha_q alpha_{q+1}^{s-q}`, i.e.
//! exactly `C_{R,d} phi^s` with
//!
//! ```text
//! C_{R,d} = 2^(d+q) d^(s/2) R^s,   q = floor(s).
//! ```
//!
//! `covering_count` returns the exact ceiling-product cube count alongside
//! `C_{R,d} sum phi^s`; the tests check the formula dominates direct cube
//! counting at small levels.

use std::collections::HashSet;
use std::io::Write as IoWrite;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dimension;
use crate::linalg::{self, Matrix};
use crate::pressure::{LinearTuple, PressureOptions};
use crate::{g17, Error, Result};

/// An iterated function system of strictly contractive affine maps
/// `x -> A_i x + t_i`.
#[derive(Debug, Clone)]
pub struct AffineIFS {
    linear: LinearTuple,
    translations: Vec<Vec<f64>>,
}

impl AffineIFS {
    pub fn new(linear: LinearTuple, translations: Vec<Vec<f64>>) -> Result<Self> {
        if translations.len() != linear.len() {
            return Err(Error::Input(format!(
                "{} translations for {} maps",
                translations.len(),
                linear.len()
            )));
        }
        for t in &translations {
            if t.len() != linear.dim() {
                return Err(Error::Input("translation dimension mismatch".into()));
            }
            if t.iter().any(|x| !x.is_finite()) {
                return Err(Error::Input("translations must be finite".into()));
            }
        }
        if !linear.is_contractive() {
            return Err(Error::Input(
                "all maps must be strict contractions (||A_i|| < 1)".into(),
            ));
        }
        Ok(AffineIFS {
            linear,
            translations,
        })
    }

    pub fn linear(&self) -> &LinearTuple {
        &self.linear
    }

    pub fn translations(&self) -> &[Vec<f64>] {
        &self.translations
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn len(&self) -> usize {
        self.linear.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Radius of the invariant ball: every map sends `B_R` into itself.
    pub fn bounding_radius(&self) -> f64 {
        let max_norm = self.linear.alpha_sup();
        let max_t = self
            .translations
            .iter()
            .map(|t| t.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        max_t / (1.0 - max_norm)
    }

    fn apply(&self, i: usize, x: &mut [f64], scratch: &mut [f64]) {
        let d = self.dim();
        let a = self.linear.matrix(i).entries();
        linalg::mat_vec(d, a, x, scratch);
        for (dst, (s, t)) in x.iter_mut().zip(scratch.iter().zip(&self.translations[i])) {
            *dst = s + t;
        }
    }
}

/// A sampled attractor.
#[derive(Debug, Clone)]
pub struct PointCloud {
    d: usize,
    points: Vec<f64>,
    radius: f64,
}

impl PointCloud {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn count(&self) -> usize {
        self.points.len() / self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    /// Per-axis bounding box, (mins, maxs).
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.d;
        let mut mins = vec![f64::INFINITY; d];
        let mut maxs = vec![f64::NEG_INFINITY; d];
        for p in self.iter() {
            for j in 0..d {
                mins[j] = mins[j].min(p[j]);
                maxs[j] = maxs[j].max(p[j]);
            }
        }
        (mins, maxs)
    }

    /// CSV emission: header row, one point per row, 17 significant digits.
    pub fn write_csv<W: IoWrite>(&self, out: &mut W) -> std::io::Result<()> {
        if self.d == 2 {
            writeln!(out, "x,y")?;
        } else {
            let header: Vec<String> = (0..self.d).map(|j| format!("x{j}")).collect();
            writeln!(out, "{}", header.join(","))?;
        }
        for p in self.iter() {
            let row: Vec<String> = p.iter().map(|&x| g17(x)).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Binary PGM (P5) occupancy raster over the bounding box: `grid x grid`
    /// cells, occupied = 255, empty = 0, row 0 at the top (max y). Only
    /// meaningful for d = 2.
    pub fn write_occupancy_pgm<W: IoWrite>(&self, grid: usize, out: &mut W) -> Result<()> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension(
                "PGM rasters are only emitted for d = 2".into(),
            ));
        }
        if grid == 0 || grid > 1 << 14 {
            return Err(Error::Input(format!("grid must lie in [1, 16384], got {grid}")));
        }
        let (mins, maxs) = self.bounding_box();
        let wx = (maxs[0] - mins[0]).max(f64::MIN_POSITIVE);
        let wy = (maxs[1] - mins[1]).max(f64::MIN_POSITIVE);
        let mut raster = vec![0u8; grid * grid];
        for p in self.iter() {
            let ix = (((p[0] - mins[0]) / wx) * grid as f64) as usize;
            let iy = (((p[1] - mins[1]) / wy) * grid as f64) as usize;
            let ix = ix.min(grid - 1);
            let iy = iy.min(grid - 1);
            let row = grid - 1 - iy;
            raster[row * grid + ix] = 255;
        }
        write!(out, "P5\n{grid} {grid}\n255\n").map_err(io_err)?;
        out.write_all(&raster).map_err(io_err)?;
        Ok(())
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Input(format!("i/o error: {e}"))
}

/// Samples the attractor by random iteration with uniform symbol choice,
/// discarding `burn_in` initial iterates. Every retained point lies inside
/// the invariant ball.
pub fn chaos_game(ifs: &AffineIFS, count: usize, burn_in: usize, seed: u64) -> Result<PointCloud> {
    if count == 0 {
        return Err(Error::Input("point count must be >= 1".into()));
    }
    let d = ifs.dim();
    let m = ifs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut scratch = vec![0.0; d];
    let mut points = Vec::with_capacity(count * d);
    for _ in 0..burn_in {
        let i = rng.gen_range(0..m);
        ifs.apply(i, &mut x, &mut scratch);
    }
    for _ in 0..count {
        let i = rng.gen_range(0..m);
        ifs.apply(i, &mut x, &mut scratch);
        points.extend_from_slice(&x);
    }
    Ok(PointCloud {
        d,
        points,
        radius: ifs.bounding_radius(),
    })
}

/// One ellipsoid of a level-`k` cover: the image of the invariant ball under
/// a `k`-fold composition, `center + R * shape * (unit ball)`.
#[derive(Debug, Clone)]
pub struct CoverElement {
    pub center: Vec<f64>,
    pub shape: Matrix,
}

/// The natural ellipsoid cover at level `k`: one element per word in `I^k`.
#[derive(Debug, Clone)]
pub struct EllipsoidCover {
    pub level: usize,
    pub radius: f64,
    pub elements: Vec<CoverElement>,
}

impl EllipsoidCover {
    /// Membership with relative slack: `||shape^{-1} (p - center)|| <= R (1 + slack)`.
    pub fn contains(&self, p: &[f64], slack: f64) -> bool {
        self.elements.iter().any(|e| {
            let inv = match e.shape.inverse() {
                Ok(i) => i,
                Err(_) => return false,
            };
            let diff: Vec<f64> = p.iter().zip(&e.center).map(|(a, b)| a - b).collect();
            let y = inv.apply(&diff);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            norm <= self.radius * (1.0 + slack) + slack
        })
    }
}

/// Exact image parameters of the invariant ball under every length-`k`
/// composition `f_{i_1} o ... o f_{i_k}` (IFS order: leftmost symbol applied
/// last), enumerated lexicographically.
pub fn ellipsoid_cover(ifs: &AffineIFS, k: usize) -> Result<EllipsoidCover> {
    let opts = PressureOptions::default();
    let mut leaves: u64 = 1;
    for _ in 0..k {
        leaves = leaves
            .checked_mul(ifs.len() as u64)
            .filter(|&l| l <= opts.leaf_cap)
            .ok_or_else(|| Error::Resource(format!("{}^{k} cover elements exceed the cap", ifs.len())))?;
    }
    let d = ifs.dim();
    let mut elements = Vec::with_capacity(leaves as usize);
    // DFS with right-composition: extending a word appends f_j inside,
    // L <- L A_j, tau unchanged by A_j beyond L t_j.
    fn rec(
        ifs: &AffineIFS,
        depth: usize,
        k: usize,
        l: &Matrix,
        tau: &[f64],
        elements: &mut Vec<CoverElement>,
    ) {
        if depth == k {
            elements.push(CoverElement {
                center: tau.to_vec(),
                shape: l.clone(),
            });
            return;
        }
        for j in 0..ifs.len() {
            let a = ifs.linear.matrix(j);
            let next_l = l.mul(a).expect("same dimension");
            let lt = l.apply(&ifs.translations[j]);
            let next_tau: Vec<f64> = tau.iter().zip(&lt).map(|(x, y)| x + y).collect();
            rec(ifs, depth + 1, k, &next_l, &next_tau, elements);
        }
    }
    rec(
        ifs,
        0,
        k,
        &Matrix::identity(d),
        &vec![0.0; d],
        &mut elements,
    );
    Ok(EllipsoidCover {
        level: k,
        radius: ifs.bounding_radius(),
        elements,
    })
}

/// Cube-count and Hausdorff-content upper bounds from the level-`k` cover.
///
/// Returns `(ball_count, content_bound)`: the summed exact ceiling-product
/// cube counts (cubes of side `R alpha_{floor(s)+1}` per word, each inside a
/// ball of radius `sqrt(d) R alpha_{floor(s)+1}`), and
/// `C_{R,d} sum_{|i|=k} phi^s(A(i))` with the explicit constant from the
/// module docs.
pub fn covering_count(ifs: &AffineIFS, k: usize, s: f64) -> Result<(f64, f64)> {
    let d = ifs.dim();
    if !s.is_finite() || s < 0.0 || s >= d as f64 {
        return Err(Error::Input(format!(
            "covering exponent must satisfy 0 <= s < d = {d}, got {s}"
        )));
    }
    let cover = ellipsoid_cover(ifs, k)?;
    let q = s.floor() as usize;
    let mut scratch = linalg::SvdScratch::new(d);
    let mut ball_count = 0.0f64;
    let mut phi_sum = 0.0f64;
    for e in &cover.elements {
        linalg::singular_values_slice(d, e.shape.entries(), &mut scratch);
        let alphas = &scratch.values;
        let side = alphas[q]; // alpha_{q+1}, zero-indexed
        let mut cubes = 1.0f64;
        for &a in alphas.iter() {
            cubes *= (2.0 * a / side).ceil();
        }
        ball_count += cubes;
        phi_sum += linalg::svf_from_parts(d, alphas, e.shape.det(), s);
    }
    let r = cover.radius;
    let constant = 2.0f64.powi((d + q) as i32) * (d as f64).powf(0.5 * s) * r.powf(s);
    Ok((ball_count, constant * phi_sum))
}

/// Box-counting regression result.
#[derive(Debug, Clone)]
pub struct BoxDimEstimate {
    /// Least-squares slope of `log N(delta)` against `log(1/delta)`.
    pub slope: f64,
    /// Standard error of the regression slope.
    pub stderr: f64,
    /// `(delta, N(delta))` pairs along the geometric grid.
    pub counts: Vec<(f64, usize)>,
    /// Occupancy at the finest level exceeded a tenth of the sample size,
    /// so the estimate may be undersampled.
    pub saturated: bool,
}

fn occupied_cells(cloud: &PointCloud, mins: &[f64], maxs: &[f64], delta: f64) -> Result<usize> {
    let d = cloud.dim();
    // cell widths up to 2^16 per axis pack into a u128 key for d <= 8
    let mut spans = vec![0u64; d];
    for j in 0..d {
        let span = ((maxs[j] - mins[j]) / delta).floor() as u64 + 1;
        if span > 1 << 16 {
            return Err(Error::Input(format!(
                "delta {delta} is too fine for the cloud extent (axis {j} needs {span} cells)"
            )));
        }
        spans[j] = span;
    }
    if d == 2 && spans[0] * spans[1] <= 1 << 27 {
        let nx = spans[0] as usize;
        let mut bits = vec![0u64; (nx * spans[1] as usize).div_ceil(64)];
        for p in cloud.iter() {
            let ix = ((p[0] - mins[0]) / delta) as usize;
            let iy = ((p[1] - mins[1]) / delta) as usize;
            let idx = iy * nx + ix;
            bits[idx / 64] |= 1 << (idx % 64);
        }
        return Ok(bits.iter().map(|w| w.count_ones() as usize).sum());
    }
    let mut set: HashSet<u128> = HashSet::new();
    for p in cloud.iter() {
        let mut key: u128 = 0;
        for j in 0..d {
            let idx = ((p[j] - mins[j]) / delta) as u128;
            key = (key << 16) | idx;
        }
        set.insert(key);
    }
    Ok(set.len())
}

/// Box-counting dimension estimate over a geometric grid of cell sizes in
/// `[delta_lo, delta_hi]`, grids anchored at the bounding-box corner.
pub fn box_dimension_estimate(
    cloud: &PointCloud,
    delta_lo: f64,
    delta_hi: f64,
    levels: usize,
) -> Result<BoxDimEstimate> {
    if !delta_lo.is_finite() || !delta_hi.is_finite() || delta_lo <= 0.0 || delta_lo >= delta_hi {
        return Err(Error::Input(format!(
            "need 0 < delta_lo < delta_hi, got [{delta_lo}, {delta_hi}]"
        )));
    }
    if levels < 2 {
        return Err(Error::Input("need at least two grid levels".into()));
    }
    let (mins, maxs) = cloud.bounding_box();
    let ratio = (delta_lo / delta_hi).powf(1.0 / (levels - 1) as f64);
    let mut counts = Vec::with_capacity(levels);
    for t in 0..levels {
        let delta = delta_hi * ratio.powi(t as i32);
        counts.push((delta, occupied_cells(cloud, &mins, &maxs, delta)?));
    }
    let xs: Vec<f64> = counts.iter().map(|(d, _)| (1.0 / d).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|(_, n)| (*n as f64).ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let stderr = if levels > 2 {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let fit = ybar + slope * (x - xbar);
                (y - fit).powi(2)
            })
            .sum();
        (ss_res / (levels as f64 - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    let finest = counts.last().unwrap().1;
    Ok(BoxDimEstimate {
        slope,
        stderr,
        counts,
        saturated: finest > cloud.count() / 10,
    })
}

/// One randomized-translation draw.
#[derive(Debug, Clone)]
pub struct FalconerTrial {
    pub translations: Vec<Vec<f64>>,
    pub box_estimate: f64,
    pub box_stderr: f64,
}

/// Outcome of the randomized-translation experiment.
#[derive(Debug, Clone)]
pub struct FalconerReport {
    pub trials: Vec<FalconerTrial>,
    pub affinity_upper: f64,
    pub affinity_lower: Option<f64>,
    pub median_box_estimate: f64,
    /// Median of `|box estimate - affinity upper bound|` over the trials.
    pub median_abs_deviation: f64,
}

/// Randomized-translation experiment (d = 2): draws translations uniformly
/// from `[0, 1]^{2m}`, renders each attractor, and compares box-counting
/// estimates against the affinity-dimension bounds of the linear parts.
///
/// The conclusion is distributional - translations form a Lebesgue-typical
/// family, so no single draw is guaranteed - which is why the report carries
/// medians rather than per-trial verdicts. Requires `||A_i|| < 1/2`.
pub fn falconer_experiment(
    tuple: &LinearTuple,
    trials: usize,
    points: usize,
    seed: u64,
) -> Result<FalconerReport> {
    if tuple.dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "the translation experiment requires d = 2".into(),
        ));
    }
    if tuple.alpha_sup() >= 0.5 {
        return Err(Error::Input(format!(
            "norms must satisfy ||A_i|| < 1/2 (the almost-sure dimension formula needs it, \
             and the bound 1/2 is optimal); got max norm {}",
            tuple.alpha_sup()
        )));
    }
    if trials == 0 {
        return Err(Error::Input("need at least one trial".into()));
    }

    // dimension bounds depend only on the linear parts
    let level = {
        let mut n = 1usize;
        while tuple.len().pow(n as u32 + 1) <= 4096 {
            n += 1;
        }
        n.clamp(1, 12)
    };
    let dim_bounds = dimension::affinity_dimension_bounds(tuple, level, true)?;

    let results: Result<Vec<FalconerTrial>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            let translations: Vec<Vec<f64>> = (0..tuple.len())
                .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
                .collect();
            let ifs = AffineIFS::new(tuple.clone(), translations.clone())?;
            let chaos_seed = seed
                .wrapping_mul(0x9E3779B97F4A7C15)
                .wrapping_add(trial as u64);
            let cloud = chaos_game(&ifs, points, 64, chaos_seed)?;
            let (mins, maxs) = cloud.bounding_box();
            let extent = mins
                .iter()
                .zip(&maxs)
                .map(|(lo, hi)| hi - lo)
                .fold(0.0, f64::max)
                .max(f64::MIN_POSITIVE);
            let est = box_dimension_estimate(
                &cloud,
                extent / 512.0,
                extent / 16.0,
                6,
            )?;
            Ok(FalconerTrial {
                translations,
                box_estimate: est.slope,
                box_stderr: est.stderr,
            })
        })
        .collect();
    let trials_out = results?;

    let mut estimates: Vec<f64> = trials_out.iter().map(|t| t.box_estimate).collect();
    estimates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = estimates[estimates.len() / 2];
    let mut deviations: Vec<f64> = trials_out
        .iter()
        .map(|t| (t.box_estimate - dim_bounds.upper).abs())
        .collect();
    deviations.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mad = deviations[deviations.len() / 2];

    Ok(FalconerReport {
        trials: trials_out,
        affinity_upper: dim_bounds.upper,
        affinity_lower: dim_bounds.lower,
        median_box_estimate: median,
        median_abs_deviation: mad,
    })
}

/// The three-map right-triangle gasket: `x/2 + {(0,0), (1/2,0), (0,1/2)}`.
pub fn sierpinski_gasket() -> AffineIFS {
    let half = Matrix::diagonal(&[0.5, 0.5]);
    let linear = LinearTuple::new(vec![half.clone(), half.clone(), half]).unwrap();
    AffineIFS::new(
        linear,
        vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5]],
    )
    .unwrap()
}

/// Four quarter-scale maps whose attractor is the unit square.
pub fn unit_square_ifs() -> AffineIFS {
    let half = Matrix::diagonal(&[0.5, 0.5]);
    let linear = LinearTuple::new(vec![half.clone(), half.clone(), half.clone(), half]).unwrap();
    AffineIFS::new(
        linear,
        vec![
            vec![0.0, 0.0],
            vec![0.5, 0.0],
            vec![0.0, 0.5],
            vec![0.5, 0.5],
        ],
    )
    .unwrap()
}
