//! Experiment definitions: a flat `key = value` text format, shared by the
//! compiled-in presets and user config files.
//!
//! ```text
//! # lines starting with '#' are comments
//! name = my-case
//! equation = heat
//! target_length = 2
//! horizon = 5
//! eta = sin3:5
//! u0 = zero
//! bracket = 0.5, 4
//! init = 3
//! ```
//!
//! `target_file` may replace `target_length`; it names a CSV with header
//! `t,flux` on a uniform grid starting at 0 and ending at the horizon.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use interval_probe::inverse::{generate_observation, InverseProblem, MinimizeOptions, Template};
use interval_probe::{BoundaryInput, Grid, Profile, Signal};

use crate::forms::{parse_eta, parse_list, parse_number, parse_profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Heat,
    Wave,
}

impl Equation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Equation::Heat => "heat",
            Equation::Wave => "wave",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetSource {
    /// Synthetic observation computed at this length on a 2x finer grid.
    Length(f64),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub description: String,
    pub equation: Equation,
    pub target: TargetSource,
    pub horizon: f64,
    /// Data in text form, kept for the summary.
    pub eta: String,
    pub u0: String,
    pub u1: String,
    pub bracket: (f64, f64),
    pub init: Vec<f64>,
    pub noise: Vec<f64>,
    pub seed: u64,
    pub nx: usize,
    /// Heat: time steps of every solve. Wave: intervals of the observation
    /// time grid (the model itself steps at unit Courant number).
    pub nt: usize,
    pub samples: usize,
    pub multistart: usize,
    pub max_iter: usize,
    pub out: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "name",
    "description",
    "equation",
    "target_length",
    "target_file",
    "horizon",
    "eta",
    "u0",
    "u1",
    "bracket",
    "init",
    "noise",
    "seed",
    "nx",
    "nt",
    "samples",
    "multistart",
    "max_iter",
    "out",
];

pub const DEFAULT_NOISE: &str = "1, 0.1, 0.01, 0.001, 0";

/// Splits `key = value` lines; rejects unknown and repeated keys.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(format!("line {}: unknown key {k:?}", n + 1));
        }
        if map.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key {k:?}", n + 1));
        }
    }
    Ok(map)
}

fn integer(key: &str, v: &str) -> Result<u64, String> {
    v.trim()
        .parse()
        .map_err(|_| format!("{key}: expected a nonnegative integer, got {v:?}"))
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<Self, String> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn from_pairs(m: &BTreeMap<String, String>) -> Result<Self, String> {
        let get = |k: &str| m.get(k).map(String::as_str);
        let need = |k: &str| get(k).ok_or_else(|| format!("missing key {k:?}"));

        let equation = match need("equation")? {
            "heat" => Equation::Heat,
            "wave" => Equation::Wave,
            other => return Err(format!("equation: expected heat or wave, got {other:?}")),
        };
        let target = match (get("target_length"), get("target_file")) {
            (Some(v), None) => TargetSource::Length(parse_number(v).map_err(|e| format!("target_length: {e}"))?),
            (None, Some(p)) => TargetSource::File(PathBuf::from(p)),
            (Some(_), Some(_)) => return Err("give only one of target_length and target_file".into()),
            (None, None) => return Err("missing key \"target_length\" (or \"target_file\")".into()),
        };
        let bracket = parse_list(need("bracket")?).map_err(|e| format!("bracket: {e}"))?;
        if bracket.len() != 2 {
            return Err(format!("bracket: expected two numbers, got {}", bracket.len()));
        }
        let init = parse_list(need("init")?).map_err(|e| format!("init: {e}"))?;
        let noise = parse_list(get("noise").unwrap_or(DEFAULT_NOISE)).map_err(|e| format!("noise: {e}"))?;
        let int =
            |k: &str, default: u64| -> Result<u64, String> { get(k).map(|v| integer(k, v)).unwrap_or(Ok(default)) };

        let cfg = ExperimentConfig {
            name: get("name").unwrap_or("custom").to_string(),
            description: get("description").unwrap_or("").to_string(),
            equation,
            target,
            horizon: parse_number(need("horizon")?).map_err(|e| format!("horizon: {e}"))?,
            eta: get("eta").unwrap_or("zero").to_string(),
            u0: get("u0").unwrap_or("zero").to_string(),
            u1: get("u1").unwrap_or("zero").to_string(),
            bracket: (bracket[0], bracket[1]),
            init,
            noise,
            seed: int("seed", 1)?,
            nx: int("nx", 200)? as usize,
            nt: int("nt", 1000)? as usize,
            samples: int("samples", 81)? as usize,
            multistart: int("multistart", 0)? as usize,
            max_iter: int("max_iter", 100)? as usize,
            out: get("out").map(PathBuf::from),
        };
        if equation == Equation::Heat && m.contains_key("u1") {
            return Err("u1 applies to the wave equation only".into());
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_text(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The config as `key = value` lines in [`KEYS`] order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = vec![("name", self.name.clone())];
        if !self.description.is_empty() {
            out.push(("description", self.description.clone()));
        }
        out.push(("equation", self.equation.as_str().to_string()));
        match &self.target {
            TargetSource::Length(l) => out.push(("target_length", l.to_string())),
            TargetSource::File(p) => out.push(("target_file", p.display().to_string())),
        }
        out.push(("horizon", self.horizon.to_string()));
        out.push(("eta", self.eta.clone()));
        out.push(("u0", self.u0.clone()));
        if self.equation == Equation::Wave {
            out.push(("u1", self.u1.clone()));
        }
        out.push(("bracket", list(&[self.bracket.0, self.bracket.1])));
        out.push(("init", list(&self.init)));
        out.push(("noise", list(&self.noise)));
        out.push(("seed", self.seed.to_string()));
        out.push(("nx", self.nx.to_string()));
        out.push(("nt", self.nt.to_string()));
        out.push(("samples", self.samples.to_string()));
        out.push(("multistart", self.multistart.to_string()));
        out.push(("max_iter", self.max_iter.to_string()));
        if let Some(p) = &self.out {
            out.push(("out", p.display().to_string()));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.to_pairs() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn minimize_options(&self) -> MinimizeOptions {
        MinimizeOptions {
            max_iter: self.max_iter,
            multistart_count: self.multistart,
            ..MinimizeOptions::default()
        }
    }

    /// Checks everything that does not need a solve and builds the problem
    /// pieces. Nothing is written before this succeeds.
    pub fn validate(&self) -> Result<Validated, String> {
        let (lo, hi) = self.bracket;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(format!("bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"));
        }
        if self.init.is_empty() {
            return Err("init: at least one starting length is required".into());
        }
        if let Some(&l) = self.init.iter().find(|&&l| !(lo..=hi).contains(&l)) {
            return Err(format!("init {l} lies outside the bracket ({lo}, {hi})"));
        }
        if self.noise.is_empty() {
            return Err("noise: at least one level is required".into());
        }
        if let Some(&p) = self.noise.iter().find(|&&p| p < 0.0) {
            return Err(format!("noise level {p} is negative"));
        }
        if self.horizon.is_nan() || self.horizon <= 0.0 {
            return Err(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.samples < 10 {
            return Err(format!("samples must be at least 10, got {}", self.samples));
        }
        if self.max_iter == 0 {
            return Err("max_iter must be positive".into());
        }
        let eta: BoundaryInput = parse_eta(&self.eta).map_err(|e| format!("eta: {e}"))?;
        let u0: Profile = parse_profile(&self.u0).map_err(|e| format!("u0: {e}"))?;
        let u1: Profile = parse_profile(&self.u1).map_err(|e| format!("u1: {e}"))?;
        let template = match self.equation {
            Equation::Heat => Template::heat(self.horizon, eta, u0),
            Equation::Wave => Template::wave(self.horizon, eta, u0, u1),
        };
        let grid = Grid::new(self.nx, self.nt).map_err(|e| e.to_string())?;
        if let TargetSource::Length(l) = self.target {
            if !(l > 0.0 && l.is_finite()) {
                return Err(format!("target_length must be positive, got {l}"));
            }
            // Surface data/length mismatches (such as a sampled profile on
            // the wrong interval) before any output exists.
            match self.equation {
                Equation::Heat => template.heat_problem(l).map(|_| ()),
                Equation::Wave => template.wave_problem(l).map(|_| ()),
            }
            .map_err(|e| e.to_string())?;
        }
        Ok(Validated {
            template,
            grid,
            target: self.target.clone(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Validated {
    pub template: Template,
    pub grid: Grid,
    pub target: TargetSource,
}

impl Validated {
    /// The noiseless observation and the inverse problem built on it.
    pub fn problem(&self, bracket: (f64, f64)) -> Result<InverseProblem, String> {
        let beta = match &self.target {
            TargetSource::Length(l) => {
                generate_observation(&self.template, *l, self.grid.refined(2)).map_err(|e| e.to_string())?
            }
            TargetSource::File(p) => read_target(p)?,
        };
        InverseProblem::new(self.template.clone(), beta, bracket, self.grid).map_err(|e| e.to_string())
    }
}

/// Reads a `t,flux` CSV on a uniform grid.
pub fn read_target(path: &Path) -> Result<Signal, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("t,flux") {
        return Err(format!("{}: expected header t,flux", path.display()));
    }
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = parse_list(line).map_err(|e| format!("{}: row {}: {e}", path.display(), n + 1))?;
        if row.len() != 2 {
            return Err(format!("{}: row {}: expected two columns", path.display(), n + 1));
        }
        ts.push(row[0]);
        vs.push(row[1]);
    }
    if ts.len() < 2 {
        return Err(format!("{}: need at least two samples", path.display()));
    }
    let dt = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    for (j, &t) in ts.iter().enumerate() {
        if (t - (ts[0] + j as f64 * dt)).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(format!("{}: times are not uniformly spaced", path.display()));
        }
    }
    Signal::new(vs, dt, ts[0]).map_err(|e| e.to_string())
}
