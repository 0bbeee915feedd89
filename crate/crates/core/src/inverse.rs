//! Least-squares reconstruction of the interval length from a boundary flux.
//!
//! The misfit is `J(l) = 1/2 int_0^T (beta(t) - u_x^l(0, t))^2 dt`, computed
//! with a finite-difference forward solve at a fixed node count, so the
//! spacing scales with `l` and `J` is continuous in `l`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::heat::heat_fd_flux;
use crate::problem::{Grid, HeatProblem, WaveProblem};
use crate::profile::{BoundaryInput, Profile};
use crate::rng::{derive_seed, seeded_rng};
use crate::signal::{trapezoid_uniform, Signal, TimeGrid};
use crate::wave::wave_fd_flux_unit_courant;

/// Problem data with the length left free.
#[derive(Debug, Clone, PartialEq)]
pub enum Template {
    Heat {
        horizon: f64,
        eta: BoundaryInput,
        u0: Profile,
    },
    Wave {
        horizon: f64,
        eta: BoundaryInput,
        u0: Profile,
        u1: Profile,
    },
}

impl Template {
    pub fn heat(horizon: f64, eta: BoundaryInput, u0: Profile) -> Self {
        Template::Heat { horizon, eta, u0 }
    }

    pub fn wave(horizon: f64, eta: BoundaryInput, u0: Profile, u1: Profile) -> Self {
        Template::Wave { horizon, eta, u0, u1 }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            Template::Heat { horizon, .. } | Template::Wave { horizon, .. } => *horizon,
        }
    }

    pub fn is_wave(&self) -> bool {
        matches!(self, Template::Wave { .. })
    }

    pub fn heat_problem(&self, ell: f64) -> Result<HeatProblem> {
        match self {
            Template::Heat { horizon, eta, u0 } => HeatProblem::new(ell, *horizon, eta.clone(), u0.clone()),
            Template::Wave { .. } => Err(invalid("template describes a wave problem")),
        }
    }

    pub fn wave_problem(&self, ell: f64) -> Result<WaveProblem> {
        match self {
            Template::Wave { horizon, eta, u0, u1 } => {
                WaveProblem::new(ell, *horizon, eta.clone(), u0.clone(), u1.clone())
            }
            Template::Heat { .. } => Err(invalid("template describes a heat problem")),
        }
    }

    /// `u_x^l(0, .)` on the solver's own time grid.
    ///
    /// Heat uses `grid` as is. Wave steps at Courant number 1 with `grid.nx`
    /// cells (`dt = dx = l / nx`) and may overshoot `T` by a few steps;
    /// `grid.nt` is not used.
    pub fn solver_flux(&self, ell: f64, grid: Grid) -> Result<Signal> {
        let attach = |source: Error| Error::Forward {
            ell,
            source: Box::new(source),
        };
        match self {
            Template::Heat { .. } => {
                let p = self.heat_problem(ell).map_err(attach)?;
                heat_fd_flux(&p, grid).map_err(attach)
            }
            Template::Wave { .. } => {
                let p = self.wave_problem(ell).map_err(attach)?;
                wave_fd_flux_unit_courant(&p, grid.nx).map_err(attach)
            }
        }
    }

    /// Synthetic observation at length `ell`, sampled on `[0, T]` with
    /// `grid.nt` intervals.
    pub fn observe(&self, ell: f64, grid: Grid) -> Result<Signal> {
        let times = TimeGrid::spanning(0.0, self.horizon(), grid.nt)?;
        let flux = self.solver_flux(ell, grid)?;
        flux.resample_cubic(times).map_err(|source| Error::Forward {
            ell,
            source: Box::new(source),
        })
    }
}

/// Find `l` in `(l0, l1)` whose boundary flux matches `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseProblem {
    template: Template,
    target: Signal,
    bracket: (f64, f64),
    grid: Grid,
}

impl InverseProblem {
    pub fn new(template: Template, target: Signal, bracket: (f64, f64), grid: Grid) -> Result<Self> {
        let (lo, hi) = bracket;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(invalid(format!("bracket must satisfy 0 < l0 < l1, got ({lo}, {hi})")));
        }
        let horizon = template.horizon();
        let span_tol = 1e-9 * horizon.max(1.0);
        if target.t0().abs() > span_tol || (target.t_end() - horizon).abs() > span_tol {
            return Err(invalid(format!(
                "target must span [0, {horizon}], got [{}, {}]",
                target.t0(),
                target.t_end()
            )));
        }
        if template.is_wave() && hi >= horizon {
            return Err(invalid(format!(
                "wave bracket must stay below the horizon {horizon}, got l1 = {hi}"
            )));
        }
        Ok(Self {
            template,
            target,
            bracket,
            grid,
        })
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn target(&self) -> &Signal {
        &self.target
    }

    pub fn bracket(&self) -> (f64, f64) {
        self.bracket
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Same problem with a different observation, e.g. after adding noise.
    pub fn with_target(&self, target: Signal) -> Result<Self> {
        Self::new(self.template.clone(), target, self.bracket, self.grid)
    }
}

/// Observation generated at `ell` on `grid` for the given template.
pub fn generate_observation(template: &Template, ell: f64, grid: Grid) -> Result<Signal> {
    template.observe(ell, grid)
}

/// `J(l)`: forward solve at `l`, cubic interpolation of the flux onto the
/// target's times and the trapezoid rule for the squared residual.
pub fn cost(ell: f64, ip: &InverseProblem) -> Result<f64> {
    let (lo, hi) = ip.bracket;
    let slack = 1e-12 * hi;
    if !(ell >= lo - slack && ell <= hi + slack) {
        return Err(invalid(format!("l = {ell} outside the bracket [{lo}, {hi}]")));
    }
    let flux = ip.template.solver_flux(ell, ip.grid)?;
    let target = &ip.target;
    let mut residual = Vec::with_capacity(target.len());
    for (t, beta) in target.iter() {
        let model = flux.interpolate_cubic(t).map_err(|source| Error::Forward {
            ell,
            source: Box::new(source),
        })?;
        let r = beta - model;
        residual.push(r * r);
    }
    Ok(0.5 * trapezoid_uniform(&residual, target.dt()))
}

/// `beta_j (1 + percent/100 xi_j)` with `xi_j` uniform on `[-1, 1]`.
pub fn add_noise(beta: &Signal, percent: f64, seed: u64) -> Result<Signal> {
    if !(percent >= 0.0 && percent.is_finite()) {
        return Err(invalid(format!("noise percent must be nonnegative, got {percent}")));
    }
    if percent == 0.0 {
        return Ok(beta.clone());
    }
    let mut rng = seeded_rng(seed);
    let scale = percent / 100.0;
    let samples = beta
        .samples()
        .iter()
        .map(|b| b * (1.0 + scale * rng.gen_range(-1.0..=1.0)))
        .collect();
    Signal::on_grid(beta.grid(), samples)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Absolute tolerance on the final bracket width.
    pub tol_length: f64,
    /// Stop as soon as a cost below this is found.
    pub tol_cost: f64,
    /// Extra equispaced seeds; 0 runs from `l_init` only.
    pub multistart_count: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol_length: 1e-6,
            tol_cost: 1e-14,
            multistart_count: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIter,
    /// Converged, but onto an end of the search interval.
    BracketEdge,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIter => "max-iter",
            Termination::BracketEdge => "bracket-edge",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub computed_length: f64,
    /// Every evaluated `(l, J(l))` of the winning run, in order.
    pub iterates: Vec<(f64, f64)>,
    pub final_cost: f64,
    /// Cost evaluations over all runs.
    pub evaluations: usize,
    pub termination: Termination,
}

/// Bounded Brent search seeded at `l_init`, with optional multistart.
pub fn minimize_length(ip: &InverseProblem, ell_init: f64, opts: &MinimizeOptions) -> Result<ReconstructionResult> {
    let (lo, hi) = ip.bracket;
    if !(ell_init > lo && ell_init < hi) {
        return Err(invalid(format!("l_init = {ell_init} must lie inside ({lo}, {hi})")));
    }
    let f = |ell: f64| cost(ell, ip);
    let mut best = brent(&f, lo, hi, ell_init, opts)?;
    let m = opts.multistart_count;
    let mut evaluations = best.evaluations;
    for k in 0..m {
        let seed = lo + (k as f64 + 0.5) * (hi - lo) / m as f64;
        let run = brent(&f, lo, hi, seed, opts)?;
        evaluations += run.evaluations;
        if run.final_cost < best.final_cost {
            best = run;
        }
    }
    best.evaluations = evaluations;
    Ok(best)
}

fn brent(
    f: &impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    start: f64,
    opts: &MinimizeOptions,
) -> Result<ReconstructionResult> {
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let sqrt_eps = f64::EPSILON.sqrt();
    let (mut a, mut b) = (lo, hi);
    let (mut x, mut w, mut v) = (start, start, start);
    let mut fx = f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    let mut iterates = vec![(x, fx)];

    let finish = |x: f64, fx: f64, iterates: Vec<(f64, f64)>, converged: bool| {
        let edge_tol = sqrt_eps * x.abs() + opts.tol_length;
        let termination = if !converged {
            Termination::MaxIter
        } else if x - lo <= edge_tol || hi - x <= edge_tol {
            Termination::BracketEdge
        } else {
            Termination::Converged
        };
        ReconstructionResult {
            computed_length: x,
            evaluations: iterates.len(),
            iterates,
            final_cost: fx,
            termination,
        }
    };

    if fx < opts.tol_cost {
        return Ok(finish(x, fx, iterates, true));
    }
    for _ in 0..opts.max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = sqrt_eps * x.abs() + opts.tol_length / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(finish(x, fx, iterates, true));
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        iterates.push((u, fu));
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
            if fx < opts.tol_cost {
                return Ok(finish(x, fx, iterates, true));
            }
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(finish(x, fx, iterates, false))
}

/// An interior sample below both neighbours, refined inside their span.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    /// `(l_{i-1}, l_i, l_{i+1})`.
    pub bracket: (f64, f64, f64),
    pub sample_cost: f64,
    pub refined: ReconstructionResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostLandscape {
    pub samples: Vec<(f64, f64)>,
    pub local_minima: Vec<LocalMinimum>,
}

/// Samples `J` at `n_samples` equispaced points of the bracket (ends
/// included) and refines every strict interior local minimum.
pub fn scan_cost(ip: &InverseProblem, n_samples: usize) -> Result<CostLandscape> {
    if n_samples < 10 {
        return Err(invalid(format!("scan needs at least 10 samples, got {n_samples}")));
    }
    let (lo, hi) = ip.bracket;
    let h = (hi - lo) / (n_samples - 1) as f64;
    let ells: Vec<f64> = (0..n_samples)
        .map(|i| if i + 1 == n_samples { hi } else { lo + i as f64 * h })
        .collect();
    let costs = ells.par_iter().map(|&ell| cost(ell, ip)).collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64)> = ells.iter().copied().zip(costs.iter().copied()).collect();

    let candidates: Vec<usize> = (1..n_samples - 1)
        .filter(|&i| costs[i] < costs[i - 1] && costs[i] < costs[i + 1])
        .collect();
    let opts = MinimizeOptions::default();
    let local_minima = candidates
        .par_iter()
        .map(|&i| {
            let sub = InverseProblem {
                bracket: (ells[i - 1], ells[i + 1]),
                ..ip.clone()
            };
            let refined = minimize_length(&sub, ells[i], &opts)?;
            Ok(LocalMinimum {
                bracket: (ells[i - 1], ells[i], ells[i + 1]),
                sample_cost: costs[i],
                refined,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CostLandscape { samples, local_minima })
}

/// One row of a noise sweep. Failures are kept as flagged rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRow {
    pub level: f64,
    pub seed: u64,
    pub outcome: std::result::Result<ReconstructionResult, Error>,
}

impl NoiseRow {
    pub fn is_flagged(&self) -> bool {
        self.outcome.is_err()
    }
}

/// Adds noise at each level (row `k` uses sub-seed `derive_seed(seed, k)`)
/// and reconstructs from `l_init`. Rows run in parallel.
pub fn noise_sweep(
    ip: &InverseProblem,
    ell_init: f64,
    levels: &[f64],
    seed: u64,
    opts: &MinimizeOptions,
) -> Vec<NoiseRow> {
    levels
        .par_iter()
        .enumerate()
        .map(|(k, &level)| {
            let row_seed = derive_seed(seed, k as u64);
            let outcome = add_noise(ip.target(), level, row_seed)
                .and_then(|beta| ip.with_target(beta))
                .and_then(|noisy| minimize_length(&noisy, ell_init, opts));
            NoiseRow {
                level,
                seed: row_seed,
                outcome,
            }
        })
        .collect()
}
