//! Running a case: everything is computed in memory first, then each file
//! is written to a temporary name and renamed into place.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use interval_probe::heat::heat_fd_solve;
use interval_probe::inverse::{
    add_noise, minimize_length, scan_cost, CostLandscape, InverseProblem, ReconstructionResult,
};
use interval_probe::rng::derive_seed;
use interval_probe::wave::wave_fd_solve_unit_courant;
use interval_probe::SpaceTimeField;

use crate::config::{Equation, ExperimentConfig};

/// Shortest round-trip text for `x`, in exponent form when tiny or huge.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// Largest number of nodes per axis written to `field.csv`.
pub const FIELD_MAX_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            kind: "validation",
            message: message.into(),
        }
    }

    pub fn solver(message: impl fmt::Display) -> Self {
        Failure {
            kind: "solver",
            message: message.to_string(),
        }
    }

    pub fn io(message: impl fmt::Display) -> Self {
        Failure {
            kind: "io",
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            "validation" => 2,
            _ => 1,
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind, "message": self.message } }).to_string()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub noise_percent: f64,
    pub seed: u64,
    pub start: f64,
    pub result: ReconstructionResult,
}

#[derive(Debug, Clone)]
pub struct CaseOutput {
    pub config: ExperimentConfig,
    pub rows: Vec<TableRow>,
    pub landscape: CostLandscape,
    pub observation: Vec<(f64, f64)>,
    /// Index into `rows` of the fit used for the field.
    pub best: usize,
    pub field: SpaceTimeField,
}

/// Reconstructs from every start and keeps the lowest cost (first on ties).
fn best_of_starts(ip: &InverseProblem, cfg: &ExperimentConfig) -> Result<(f64, ReconstructionResult), Failure> {
    let opts = cfg.minimize_options();
    let mut best: Option<(f64, ReconstructionResult)> = None;
    for &start in &cfg.init {
        let r = minimize_length(ip, start, &opts).map_err(Failure::solver)?;
        if best.as_ref().is_none_or(|(_, b)| r.final_cost < b.final_cost) {
            best = Some((start, r));
        }
    }
    Ok(best.expect("init is nonempty"))
}

fn forward_field(cfg: &ExperimentConfig, ip: &InverseProblem, ell: f64) -> Result<SpaceTimeField, Failure> {
    let t = ip.template();
    match cfg.equation {
        Equation::Heat => {
            let p = t.heat_problem(ell).map_err(Failure::solver)?;
            Ok(heat_fd_solve(&p, ip.grid()))
        }
        Equation::Wave => {
            let p = t.wave_problem(ell).map_err(Failure::solver)?;
            wave_fd_solve_unit_courant(&p, cfg.nx).map_err(Failure::solver)
        }
    }
}

pub fn run_case(cfg: &ExperimentConfig) -> Result<CaseOutput, Failure> {
    let v = cfg.validate().map_err(Failure::validation)?;
    let ip = v.problem(cfg.bracket).map_err(Failure::validation)?;

    let rows = cfg
        .noise
        .par_iter()
        .enumerate()
        .map(|(k, &level)| {
            let seed = derive_seed(cfg.seed, k as u64);
            let beta = add_noise(ip.target(), level, seed).map_err(Failure::solver)?;
            let noisy = ip.with_target(beta).map_err(Failure::solver)?;
            let (start, result) = best_of_starts(&noisy, cfg)?;
            Ok(TableRow {
                noise_percent: level,
                seed,
                start,
                result,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    let landscape = scan_cost(&ip, cfg.samples).map_err(Failure::solver)?;
    let best = (0..rows.len())
        .min_by(|&a, &b| rows[a].noise_percent.total_cmp(&rows[b].noise_percent))
        .expect("noise is nonempty");
    let field = forward_field(cfg, &ip, rows[best].result.computed_length)?;
    let observation = ip.target().iter().collect();
    Ok(CaseOutput {
        config: cfg.clone(),
        rows,
        landscape,
        observation,
        best,
        field,
    })
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("noise_percent,cost,iterates,computed_L\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            num(r.noise_percent),
            num(r.result.final_cost),
            r.result.evaluations,
            num(r.result.computed_length)
        );
    }
    s
}

pub fn landscape_csv(l: &CostLandscape) -> String {
    let mut s = String::from("ell,cost\n");
    for (ell, j) in &l.samples {
        let _ = writeln!(s, "{},{}", num(*ell), num(*j));
    }
    s
}

pub fn observation_csv(obs: &[(f64, f64)]) -> String {
    let mut s = String::from("t,flux\n");
    for (t, b) in obs {
        let _ = writeln!(s, "{},{}", num(*t), num(*b));
    }
    s
}

/// Indices `0, s, 2s, ..` plus the last one, at most `max` of them.
fn strided(n_intervals: usize, max: usize) -> Vec<usize> {
    let stride = n_intervals.div_ceil(max - 1).max(1);
    let mut idx: Vec<usize> = (0..=n_intervals).step_by(stride).collect();
    if *idx.last().unwrap() != n_intervals {
        idx.push(n_intervals);
    }
    idx
}

pub fn field_csv(f: &SpaceTimeField) -> String {
    let mut s = String::from("x,t,u\n");
    let xs = strided(f.nx(), FIELD_MAX_POINTS);
    for j in strided(f.nt(), FIELD_MAX_POINTS) {
        for &i in &xs {
            let _ = writeln!(s, "{},{},{}", num(f.x(i)), num(f.t(j)), num(f.at(i, j)));
        }
    }
    s
}

fn minima_lines(s: &mut String, l: &CostLandscape) {
    let _ = writeln!(s, "landscape.samples={}", l.samples.len());
    let _ = writeln!(s, "landscape.minima={}", l.local_minima.len());
    for (k, m) in l.local_minima.iter().enumerate() {
        let _ = writeln!(s, "minimum.{k}.ell={}", num(m.refined.computed_length));
        let _ = writeln!(s, "minimum.{k}.cost={}", num(m.refined.final_cost));
        let _ = writeln!(s, "minimum.{k}.sample_ell={}", num(m.bracket.1));
    }
}

fn version_lines(s: &mut String) {
    let _ = writeln!(s, "version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "core_version={}", interval_probe::VERSION);
}

pub fn summary(out: &CaseOutput) -> String {
    let mut s = String::new();
    for (k, v) in out.config.to_pairs() {
        if k != "out" {
            let _ = writeln!(s, "{k}={v}");
        }
    }
    let best = &out.rows[out.best];
    let _ = writeln!(s, "L_c={}", num(best.result.computed_length));
    let _ = writeln!(s, "L_c.noise_percent={}", num(best.noise_percent));
    let _ = writeln!(s, "L_c.cost={}", num(best.result.final_cost));
    for (k, r) in out.rows.iter().enumerate() {
        let _ = writeln!(s, "row.{k}.noise_percent={}", num(r.noise_percent));
        let _ = writeln!(s, "row.{k}.seed={}", r.seed);
        let _ = writeln!(s, "row.{k}.start={}", num(r.start));
        let _ = writeln!(s, "row.{k}.computed_L={}", num(r.result.computed_length));
        let _ = writeln!(s, "row.{k}.termination={}", r.result.termination.as_str());
    }
    minima_lines(&mut s, &out.landscape);
    let _ = writeln!(s, "field.nx={}", out.field.nx());
    let _ = writeln!(s, "field.nt={}", out.field.nt());
    version_lines(&mut s);
    s
}

pub fn scan_summary(cfg: &ExperimentConfig, l: &CostLandscape) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "name={}", cfg.name);
    let _ = writeln!(s, "bracket={}, {}", cfg.bracket.0, cfg.bracket.1);
    let _ = writeln!(s, "nx={}", cfg.nx);
    let _ = writeln!(s, "nt={}", cfg.nt);
    minima_lines(&mut s, l);
    version_lines(&mut s);
    s
}

/// Writes `contents` to `dir/name` via a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, dir.join(name))
}

pub fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    for (name, contents) in files {
        write_atomic(dir, name, contents).map_err(|e| Failure::io(format!("{}: {e}", dir.join(name).display())))?;
    }
    Ok(())
}

pub fn case_files(out: &CaseOutput) -> Vec<(&'static str, String)> {
    vec![
        ("table.csv", table_csv(&out.rows)),
        ("landscape.csv", landscape_csv(&out.landscape)),
        ("observation.csv", observation_csv(&out.observation)),
        ("field.csv", field_csv(&out.field)),
        ("summary.txt", summary(out)),
    ]
}

pub fn default_out_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("out").join(&cfg.name))
}

/// Sets a new bracket for a landscape scan; starting points outside it are
/// irrelevant to the scan and dropped.
pub fn scan_case(
    cfg: &ExperimentConfig,
    bracket: Option<(f64, f64)>,
    samples: Option<usize>,
) -> Result<(ExperimentConfig, CostLandscape), Failure> {
    let mut cfg = cfg.clone();
    if let Some(b) = bracket {
        cfg.bracket = b;
        cfg.init.retain(|&l| l >= b.0 && l <= b.1);
        if cfg.init.is_empty() {
            cfg.init.push(0.5 * (b.0 + b.1));
        }
    }
    if let Some(n) = samples {
        cfg.samples = n;
    }
    let v = cfg.validate().map_err(Failure::validation)?;
    let ip = v.problem(cfg.bracket).map_err(Failure::validation)?;
    let landscape = scan_cost(&ip, cfg.samples).map_err(Failure::solver)?;
    Ok((cfg, landscape))
}
