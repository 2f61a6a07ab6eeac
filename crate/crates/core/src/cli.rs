//! Command-line front end.
//!
//! One JSON input format (the [`IFSDocument`]), CSV on stdout (or `--out`)
//! with a header row and 17-significant-digit numbers, binary PGM for
//! rasters. Exit codes: 0 success, 1 input error, 2 numerical failure,
//! 3 resource-cap breach. Randomized subcommands require an explicit
//! `--seed`; there is no entropy default, so acceptance runs reproduce
//! exactly.
//!
//! ```text
//! affinity svf        --ifs f.json --s 1.5 [--smax 2.5 --grid 65]
//! affinity pressure   --ifs f.json --s 1.5 --n 12 [--cone auto|off]
//! affinity dimension  --ifs f.json --n 10 [--cone auto|off]
//! affinity jsr        --ifs f.json --n 8
//! affinity lyapunov   --ifs f.json --steps 100000 --reps 16 --seed 7 [--s 1.5]
//! affinity attractor  --ifs f.json --points 1000000 --seed 42 [--pgm out.pgm --grid 1024] [--out pts.csv]
//! affinity falconer   --ifs f.json --trials 20 --points 1000000 --seed 1
//! affinity continuity --ifs f.json --s 1.5 --n 10 [--smax 0.1 --grid 101] [--cone auto|off]
//! ```
//!
//! `continuity` accepts either a plain IFS document (scanned along the
//! default rotation-generator perturbation `A_i(t) = (I + tJ) A_i`, with
//! `--smax` as the scan endpoint and `--grid` points) or a full scan
//! document `{base, perturbations, t_grid, s, n}`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as IoWrite;

use serde::{Deserialize, Serialize};

use crate::cones;
use crate::dimension;
use crate::g17;
use crate::linalg::Matrix;
use crate::measures::{self, BernoulliWeights};
use crate::pressure::{LinearTuple, Potential};
use crate::selfaffine::{self, AffineIFS};
use crate::{Error, Result};

/// The JSON input document: dimension plus one `{A, t}` entry per map,
/// `t` defaulting to the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IFSDocument {
    pub d: usize,
    pub maps: Vec<MapEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
}

impl IFSDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: IFSDocument = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("malformed IFS document: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<()> {
        if self.maps.is_empty() {
            return Err(Error::Input("document contains no maps".into()));
        }
        for entry in &self.maps {
            if entry.a.len() != self.d || entry.a.iter().any(|row| row.len() != self.d) {
                return Err(Error::Input(format!(
                    "matrix is not {d}x{d} as declared",
                    d = self.d
                )));
            }
            if let Some(t) = &entry.t {
                if t.len() != self.d {
                    return Err(Error::Input("translation dimension mismatch".into()));
                }
            }
        }
        Ok(())
    }

    pub fn linear_tuple(&self) -> Result<LinearTuple> {
        let mats = self
            .maps
            .iter()
            .map(|m| Matrix::from_rows(&m.a))
            .collect::<Result<Vec<_>>>()?;
        LinearTuple::new(mats)
    }

    pub fn affine_ifs(&self) -> Result<AffineIFS> {
        let tuple = self.linear_tuple()?;
        let translations = self
            .maps
            .iter()
            .map(|m| m.t.clone().unwrap_or_else(|| vec![0.0; self.d]))
            .collect();
        AffineIFS::new(tuple, translations)
    }

    /// Serializes with 17-significant-digit decimals, so that a parse of the
    /// output reproduces every entry bit-exactly.
    pub fn to_json_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{{\"d\":{},\"maps\":[", self.d));
        for (i, m) in self.maps.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str("{\"A\":[");
            for (r, row) in m.a.iter().enumerate() {
                if r > 0 {
                    s.push(',');
                }
                let cells: Vec<String> = row.iter().map(|&x| g17(x)).collect();
                s.push_str(&format!("[{}]", cells.join(",")));
            }
            s.push(']');
            if let Some(t) = &m.t {
                let cells: Vec<String> = t.iter().map(|&x| g17(x)).collect();
                s.push_str(&format!(",\"t\":[{}]", cells.join(",")));
            }
            s.push('}');
        }
        s.push_str("]}");
        s
    }
}

/// A continuity scan: perturb each map along a direction matrix and track
/// the certified bounds across the parameter grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSpec {
    pub base: IFSDocument,
    /// Per-map direction matrices `D_i`; defaults to the rotation generators
    /// `J A_i` when absent.
    #[serde(default)]
    pub perturbations: Option<Vec<Vec<Vec<f64>>>>,
    pub t_grid: Vec<f64>,
    pub s: f64,
    pub n: usize,
}

impl ScanSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: ScanSpec = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("malformed scan document: {e}")))?;
        spec.base.validate()?;
        Ok(spec)
    }

    /// Default scan over `t in [0, t_max]` with the rotation-generator
    /// perturbation.
    pub fn rotation_default(base: IFSDocument, s: f64, n: usize, t_max: f64, points: usize) -> Self {
        let points = points.max(2);
        let t_grid = (0..points)
            .map(|k| t_max * k as f64 / (points - 1) as f64)
            .collect();
        ScanSpec {
            base,
            perturbations: None,
            t_grid,
            s,
            n,
        }
    }

    fn directions(&self) -> Result<Vec<Matrix>> {
        match &self.perturbations {
            Some(ds) => {
                if ds.len() != self.base.maps.len() {
                    return Err(Error::Input(
                        "one perturbation direction per map is required".into(),
                    ));
                }
                ds.iter().map(|rows| Matrix::from_rows(rows)).collect()
            }
            None => {
                if self.base.d != 2 {
                    return Err(Error::Input(
                        "default rotation-generator perturbations need d = 2".into(),
                    ));
                }
                let j = Matrix::from_flat(2, vec![0.0, -1.0, 1.0, 0.0]).unwrap();
                self.base
                    .maps
                    .iter()
                    .map(|m| j.mul(&Matrix::from_rows(&m.a)?))
                    .collect()
            }
        }
    }

    /// Tuples along the grid; fails naming the offending grid value when a
    /// perturbed matrix goes singular.
    pub fn resolve(&self) -> Result<Vec<(f64, LinearTuple)>> {
        let base = self
            .base
            .maps
            .iter()
            .map(|m| Matrix::from_rows(&m.a))
            .collect::<Result<Vec<_>>>()?;
        let dirs = self.directions()?;
        let mut out = Vec::with_capacity(self.t_grid.len());
        for &t in &self.t_grid {
            let mats = base
                .iter()
                .zip(&dirs)
                .map(|(a, d)| a.add(&d.scale(t)))
                .collect::<Result<Vec<_>>>()?;
            let tuple = LinearTuple::new(mats).map_err(|_| {
                Error::Input(format!("perturbed matrix is singular at grid value t = {t}"))
            })?;
            out.push((t, tuple));
        }
        Ok(out)
    }
}

/// One row of the continuity scan output.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub t: f64,
    pub upper: f64,
    pub lower: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// Largest jump of the upper bound between adjacent grid values. The
    /// upper bound at fixed `n` is a finite minimum of continuous functions
    /// of the matrix entries, so small jumps demonstrate (not prove)
    /// continuity of the limit.
    pub max_adjacent_jump: f64,
}

/// Runs the scan: certified upper bound per grid value, cone-certified lower
/// bound where one is found (d = 2 only; the lower column stays blank
/// otherwise).
pub fn continuity_scan(spec: &ScanSpec, use_cone: bool) -> Result<ScanResult> {
    let tuples = spec.resolve()?;
    let mut rows = Vec::with_capacity(tuples.len());
    for (t, tuple) in &tuples {
        let use_cone_here = use_cone && tuple.dim() == 2;
        let bounds =
            cones::certified_pressure_bounds(tuple, spec.s, spec.n, Potential::Svf, use_cone_here)?;
        rows.push(ScanRow {
            t: *t,
            upper: bounds.upper,
            lower: bounds.lower,
        });
    }
    let max_adjacent_jump = rows
        .windows(2)
        .map(|w| (w[1].upper - w[0].upper).abs())
        .fold(0.0, f64::max);
    Ok(ScanResult {
        rows,
        max_adjacent_jump,
    })
}

const USAGE: &str = "affinity - certified pressure, dimension, and spectral radius bounds

usage: affinity <subcommand> --ifs FILE [flags]

subcommands:
  svf         singular value function of each map (sweep with --smax/--grid)
  pressure    partition-sum bounds on the pressure at --s, level --n
  dimension   affinity dimension bounds at level --n
  jsr         joint spectral radius bounds over words up to --n
  lyapunov    Bernoulli Lyapunov/energy estimates (--steps --reps --seed)
  attractor   chaos-game sampling (--points --seed [--pgm FILE --grid N])
  falconer    randomized-translation experiment (--trials --points --seed)
  continuity  pressure bounds along a perturbation scan (--s --n [--smax --grid])

flags: --ifs --s --n --cone {auto,off} --points --seed --grid --pgm --out
       --trials --steps --reps --smax

output: CSV with a header row to stdout (or --out FILE); PGM rasters to --pgm.
exit codes: 0 ok, 1 input error, 2 numerical failure, 3 resource cap.";

struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    fn parse(args: &[String], allowed: &[&str]) -> Result<Flags> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let name = arg
                .strip_prefix("--")
                .ok_or_else(|| Error::Input(format!("unexpected argument '{arg}'")))?;
            if !allowed.contains(&name) {
                return Err(Error::Input(format!("unknown flag '--{name}'")));
            }
            let value = it
                .next()
                .ok_or_else(|| Error::Input(format!("flag '--{name}' needs a value")))?;
            values.insert(name.to_string(), value.clone());
        }
        Ok(Flags { values })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    fn required(&self, name: &str) -> Result<&str> {
        self.get(name)
            .ok_or_else(|| Error::Input(format!("missing required flag '--{name}'")))
    }

    fn parse_f64(&self, name: &str) -> Result<f64> {
        self.required(name)?
            .parse()
            .map_err(|_| Error::Input(format!("flag '--{name}' expects a number")))
    }

    fn parse_f64_opt(&self, name: &str) -> Result<Option<f64>> {
        self.get(name)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Input(format!("flag '--{name}' expects a number")))
            })
            .transpose()
    }

    fn parse_usize(&self, name: &str) -> Result<usize> {
        self.required(name)?
            .parse()
            .map_err(|_| Error::Input(format!("flag '--{name}' expects a nonnegative integer")))
    }

    fn parse_usize_opt(&self, name: &str) -> Result<Option<usize>> {
        self.get(name)
            .map(|v| {
                v.parse().map_err(|_| {
                    Error::Input(format!("flag '--{name}' expects a nonnegative integer"))
                })
            })
            .transpose()
    }

    fn parse_u64(&self, name: &str) -> Result<u64> {
        self.required(name)?
            .parse()
            .map_err(|_| Error::Input(format!("flag '--{name}' expects a nonnegative integer")))
    }

    fn cone_enabled(&self) -> Result<bool> {
        match self.get("cone").unwrap_or("auto") {
            "auto" => Ok(true),
            "off" => Ok(false),
            other => Err(Error::Input(format!(
                "flag '--cone' expects 'auto' or 'off', got '{other}'"
            ))),
        }
    }
}

fn read_ifs_text(flags: &Flags) -> Result<String> {
    let path = flags.required("ifs")?;
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read '{path}': {e}")))
}

fn output_writer(flags: &Flags) -> Result<Box<dyn IoWrite>> {
    match flags.get("out") {
        Some(path) => {
            let f = fs::File::create(path)
                .map_err(|e| Error::Input(format!("cannot create '{path}': {e}")))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(g17).unwrap_or_default()
}

fn cmd_svf(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let tuple = doc.linear_tuple()?;
    let s0 = flags.parse_f64("s")?;
    let s_values: Vec<f64> = match flags.parse_f64_opt("smax")? {
        Some(smax) => {
            let steps = flags.parse_usize_opt("grid")?.unwrap_or(65).max(2);
            (0..steps)
                .map(|k| s0 + (smax - s0) * k as f64 / (steps - 1) as f64)
                .collect()
        }
        None => vec![s0],
    };
    let mut out = output_writer(flags)?;
    writeln!(out, "map,s,svf").map_err(io_fail)?;
    for (i, a) in tuple.matrices().iter().enumerate() {
        for &s in &s_values {
            let phi = crate::linalg::svf(a, s)?;
            writeln!(out, "{i},{},{}", g17(s), g17(phi)).map_err(io_fail)?;
        }
    }
    Ok(())
}

fn cmd_pressure(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let tuple = doc.linear_tuple()?;
    let s = flags.parse_f64("s")?;
    let n = flags.parse_usize("n")?;
    let use_cone = flags.cone_enabled()?;
    let bounds = cones::certified_pressure_bounds(&tuple, s, n, Potential::Svf, use_cone)?;
    let method = bounds
        .lower_method
        .map(|m| m.tag())
        .unwrap_or_else(|| bounds.method.tag());
    let mut out = output_writer(flags)?;
    writeln!(out, "s,n,upper,lower,method").map_err(io_fail)?;
    writeln!(
        out,
        "{},{},{},{},{}",
        g17(s),
        n,
        g17(bounds.upper),
        opt_cell(bounds.lower),
        method
    )
    .map_err(io_fail)?;
    Ok(())
}

fn cmd_dimension(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let tuple = doc.linear_tuple()?;
    let n = flags.parse_usize("n")?;
    let use_cone = flags.cone_enabled()?;
    let bounds = dimension::affinity_dimension_bounds(&tuple, n, use_cone)?;
    if use_cone && bounds.lower.is_none() {
        eprintln!("warning: no invariant cone found; lower bound unavailable");
    }
    let mut out = output_writer(flags)?;
    writeln!(out, "n,upper,lower,upper_method,lower_method").map_err(io_fail)?;
    writeln!(
        out,
        "{},{},{},{},{}",
        n,
        g17(bounds.upper),
        opt_cell(bounds.lower),
        bounds.upper_method.tag(),
        bounds.lower_method.map(|m| m.tag()).unwrap_or_default()
    )
    .map_err(io_fail)?;
    Ok(())
}

fn cmd_jsr(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let tuple = doc.linear_tuple()?;
    let n = flags.parse_usize("n")?;
    let (lo, hi) = dimension::joint_spectral_radius_bounds(&tuple, n)?;
    let mut out = output_writer(flags)?;
    writeln!(out, "n_max,lo,hi").map_err(io_fail)?;
    writeln!(out, "{n},{},{}", g17(lo), g17(hi)).map_err(io_fail)?;
    Ok(())
}

fn cmd_lyapunov(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let tuple = doc.linear_tuple()?;
    let steps = flags.parse_usize("steps")?;
    let reps = flags.parse_usize("reps")?;
    let seed = flags.parse_u64("seed")?;
    let s = flags.parse_f64_opt("s")?.unwrap_or(1.0);
    let p = BernoulliWeights::uniform(tuple.len());
    let analysis = measures::lyapunov_mc(&tuple, &p, steps, reps, seed)?;
    let energy = measures::energy_estimate(&analysis, s)?;
    let bound = measures::variational_lower_from(&analysis, s)?;
    let mut out = output_writer(flags)?;
    writeln!(
        out,
        "h,lambda1,stderr1,lambda2,stderr2,splitting,s,energy,energy_stderr,variational_lower"
    )
    .map_err(io_fail)?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        g17(analysis.h),
        g17(analysis.lambda1),
        g17(analysis.stderr1),
        g17(analysis.lambda2),
        g17(analysis.stderr2),
        analysis.splitting.tag(),
        g17(s),
        g17(energy.value),
        g17(energy.stderr),
        g17(bound.value)
    )
    .map_err(io_fail)?;
    Ok(())
}

fn cmd_attractor(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let ifs = doc.affine_ifs()?;
    let points = flags.parse_usize("points")?;
    let seed = flags.parse_u64("seed")?;
    let cloud = selfaffine::chaos_game(&ifs, points, 64, seed)?;
    if let Some(pgm_path) = flags.get("pgm") {
        let grid = flags.parse_usize_opt("grid")?.unwrap_or(512);
        let f = fs::File::create(pgm_path)
            .map_err(|e| Error::Input(format!("cannot create '{pgm_path}': {e}")))?;
        let mut w = std::io::BufWriter::new(f);
        cloud.write_occupancy_pgm(grid, &mut w)?;
        if flags.get("out").is_some() {
            let mut out = output_writer(flags)?;
            cloud.write_csv(&mut out).map_err(io_fail)?;
        }
    } else {
        let mut out = output_writer(flags)?;
        cloud.write_csv(&mut out).map_err(io_fail)?;
    }
    Ok(())
}

fn cmd_falconer(flags: &Flags) -> Result<()> {
    let doc = IFSDocument::parse(&read_ifs_text(flags)?)?;
    let tuple = doc.linear_tuple()?;
    let trials = flags.parse_usize("trials")?;
    let points = flags.parse_usize("points")?;
    let seed = flags.parse_u64("seed")?;
    let report = selfaffine::falconer_experiment(&tuple, trials, points, seed)?;
    let mut out = output_writer(flags)?;
    let mut header = vec!["trial".to_string()];
    for i in 0..tuple.len() {
        header.push(format!("t{i}x"));
        header.push(format!("t{i}y"));
    }
    header.extend(
        ["box_estimate", "box_stderr", "affinity_upper", "affinity_lower"]
            .map(String::from),
    );
    writeln!(out, "{}", header.join(",")).map_err(io_fail)?;
    for (i, trial) in report.trials.iter().enumerate() {
        let mut row = vec![i.to_string()];
        for t in &trial.translations {
            row.push(g17(t[0]));
            row.push(g17(t[1]));
        }
        row.push(g17(trial.box_estimate));
        row.push(g17(trial.box_stderr));
        row.push(g17(report.affinity_upper));
        row.push(opt_cell(report.affinity_lower));
        writeln!(out, "{}", row.join(",")).map_err(io_fail)?;
    }
    eprintln!(
        "falconer summary: median box estimate {:.6}, median |box - affinity upper| {:.6} over {} trials",
        report.median_box_estimate,
        report.median_abs_deviation,
        report.trials.len()
    );
    Ok(())
}

fn cmd_continuity(flags: &Flags) -> Result<()> {
    let text = read_ifs_text(flags)?;
    let use_cone = flags.cone_enabled()?;
    let spec = if text.contains("\"base\"") {
        let mut spec = ScanSpec::parse(&text)?;
        if let Some(s) = flags.parse_f64_opt("s")? {
            spec.s = s;
        }
        if let Some(n) = flags.parse_usize_opt("n")? {
            spec.n = n;
        }
        spec
    } else {
        let base = IFSDocument::parse(&text)?;
        let s = flags.parse_f64("s")?;
        let n = flags.parse_usize("n")?;
        let t_max = flags.parse_f64_opt("smax")?.unwrap_or(0.1);
        let points = flags.parse_usize_opt("grid")?.unwrap_or(101);
        ScanSpec::rotation_default(base, s, n, t_max, points)
    };
    let result = continuity_scan(&spec, use_cone)?;
    let mut out = output_writer(flags)?;
    writeln!(out, "t,s,upper,lower,n").map_err(io_fail)?;
    for row in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            g17(row.t),
            g17(spec.s),
            g17(row.upper),
            opt_cell(row.lower),
            spec.n
        )
        .map_err(io_fail)?;
    }
    eprintln!(
        "continuity summary: max adjacent jump of upper bound {:.6e} over {} grid values",
        result.max_adjacent_jump,
        result.rows.len()
    );
    Ok(())
}

fn io_fail(e: std::io::Error) -> Error {
    Error::Input(format!("i/o error: {e}"))
}

fn dispatch(args: &[String]) -> Result<()> {
    let (sub, rest) = args
        .split_first()
        .ok_or_else(|| Error::Input("no subcommand given".into()))?;
    let allowed: &[&str] = &[
        "ifs", "s", "n", "cone", "points", "seed", "grid", "pgm", "out", "trials", "steps",
        "reps", "smax",
    ];
    let flags = Flags::parse(rest, allowed)?;
    match sub.as_str() {
        "svf" => cmd_svf(&flags),
        "pressure" => cmd_pressure(&flags),
        "dimension" => cmd_dimension(&flags),
        "jsr" => cmd_jsr(&flags),
        "lyapunov" => cmd_lyapunov(&flags),
        "attractor" => cmd_attractor(&flags),
        "falconer" => cmd_falconer(&flags),
        "continuity" => cmd_continuity(&flags),
        other => Err(Error::Input(format!("unknown subcommand '{other}'"))),
    }
}

/// Entry point: runs a subcommand and returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    match dispatch(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Input(_)) {
                eprintln!("\n{USAGE}");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure;

    fn diag_pair_doc() -> IFSDocument {
        IFSDocument {
            d: 2,
            maps: vec![
                MapEntry {
                    a: vec![vec![0.5, 0.0], vec![0.0, 1.0 / 3.0]],
                    t: None,
                },
                MapEntry {
                    a: vec![vec![0.25, 0.0], vec![0.0, 0.2]],
                    t: Some(vec![0.125, 0.7]),
                },
            ],
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let doc = diag_pair_doc();
        let text = doc.to_json_string();
        let parsed = IFSDocument::parse(&text).unwrap();
        assert_eq!(doc, parsed);
        // and through serde's own serializer as well
        let text2 = serde_json::to_string(&parsed).unwrap();
        assert_eq!(IFSDocument::parse(&text2).unwrap(), doc);
    }

    #[test]
    fn document_validation_catches_shape_errors() {
        assert!(IFSDocument::parse(r#"{"d":2,"maps":[{"A":[[1,0]]}]}"#).is_err());
        assert!(IFSDocument::parse(r#"{"d":2,"maps":[]}"#).is_err());
        assert!(IFSDocument::parse(r#"{"d":2,"maps":[{"A":[[1,0],[0,1]],"t":[1]}]}"#).is_err());
        // singular matrix passes parsing but fails tuple construction
        let doc = IFSDocument::parse(r#"{"d":2,"maps":[{"A":[[1,2],[2,4]]}]}"#).unwrap();
        assert!(doc.linear_tuple().is_err());
    }

    #[test]
    fn default_translations_are_zero() {
        let doc = diag_pair_doc();
        let ifs = doc.affine_ifs().unwrap();
        assert_eq!(ifs.translations()[0], vec![0.0, 0.0]);
        assert_eq!(ifs.translations()[1], vec![0.125, 0.7]);
    }

    #[test]
    fn scan_degenerate_grid_matches_plain_pressure() {
        let spec = ScanSpec {
            base: diag_pair_doc(),
            perturbations: None,
            t_grid: vec![0.0],
            s: 1.5,
            n: 6,
        };
        let result = continuity_scan(&spec, false).unwrap();
        assert_eq!(result.rows.len(), 1);
        let tuple = diag_pair_doc().linear_tuple().unwrap();
        let direct = pressure::pressure_upper(&tuple, 1.5, 6, Potential::Svf).unwrap();
        assert_eq!(result.rows[0].upper.to_bits(), direct.upper.to_bits());
        assert_eq!(result.max_adjacent_jump, 0.0);
    }

    #[test]
    fn scan_names_the_singular_grid_value() {
        // base + t * I crosses singularity at t = 0.5 for A = -0.5 I
        let base = IFSDocument {
            d: 2,
            maps: vec![MapEntry {
                a: vec![vec![-0.5, 0.0], vec![0.0, -0.5]],
                t: None,
            }],
        };
        let spec = ScanSpec {
            base,
            perturbations: Some(vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]]),
            t_grid: vec![0.0, 0.5, 1.0],
            s: 1.0,
            n: 2,
        };
        let err = spec.resolve().unwrap_err();
        match err {
            Error::Input(msg) => assert!(msg.contains("0.5"), "{msg}"),
            other => panic!("expected input error, got {other:?}"),
        }
    }
}
