//! Forward heat solvers and the flux observation `u_x(0, t)`.
//!
//! Two routes: an eigenfunction series, valid for `eta = 0`, and a
//! Crank–Nicolson finite-difference solver for everything else.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::problem::{left_flux, Grid, HeatProblem, SpaceTimeField};
use crate::profile::{inner_product, Profile};
use crate::signal::{Signal, TimeGrid};
use crate::tridiag::SymmetricToeplitzTridiag;

/// Tail tolerance for series truncation.
pub const SERIES_TAIL_TOL: f64 = 1e-12;

const MAX_SERIES_MODES: usize = 200_000;

/// `c_n = (u0, phi_n)_l`, `phi_n(x) = sqrt(2/l) sin(n pi x / l)`, `n = 1..=n_modes`.
///
/// Finite combinations of Dirichlet modes are projected exactly; anything
/// else goes through trapezoid quadrature.
pub fn fourier_coefficients(u0: &Profile, ell: f64, n_modes: usize) -> Result<Vec<f64>> {
    if n_modes == 0 {
        return Err(invalid("need at least one mode"));
    }
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(invalid(format!("length must be positive, got {ell}")));
    }
    u0.check_domain(ell)?;
    if let Some(c) = u0.exact_mode_coefficients(ell, n_modes) {
        return Ok(c);
    }
    let n_quad = (40 * n_modes).max(4000);
    let h = ell / n_quad as f64;
    let values: Vec<f64> = (0..=n_quad).map(|i| u0.value(i as f64 * h)).collect();
    let norm = (2.0 / ell).sqrt();
    Ok((1..=n_modes)
        .map(|n| {
            let k = n as f64 * PI / ell;
            // endpoints carry sin(0) = sin(n pi) = 0
            let interior: f64 = values[1..n_quad]
                .iter()
                .enumerate()
                .map(|(i, v)| v * (k * (i + 1) as f64 * h).sin())
                .sum();
            norm * h * interior
        })
        .collect())
}

/// Eigen-expansion of the `eta = 0` heat solution on `(0, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSeriesSolution {
    length: f64,
    coefficients: Vec<f64>,
    /// Bound on `|c_n|` for modes beyond the stored ones; 0 when they vanish exactly.
    tail_coefficient_bound: f64,
}

impl HeatSeriesSolution {
    /// Stores `coefficients` as `c_1, c_2, ...`; later modes are bounded by `tail_coefficient_bound`.
    pub fn new(length: f64, coefficients: Vec<f64>, tail_coefficient_bound: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(invalid("series needs at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(invalid("non-finite series coefficient"));
        }
        Ok(Self {
            length,
            coefficients,
            tail_coefficient_bound: tail_coefficient_bound.abs(),
        })
    }

    /// Enough modes for the tail bound to hold from `t_min` on.
    pub fn from_profile(u0: &Profile, ell: f64, t_min: f64) -> Result<Self> {
        if !(t_min > 0.0) {
            return Err(invalid(format!("series flux needs t_min > 0, got {t_min}")));
        }
        if let Some(terms) = u0.exact_mode_terms(ell) {
            let top = terms.iter().map(|(n, _)| *n).max().unwrap_or(1);
            let c = u0.exact_mode_coefficients(ell, top).expect("exact terms exist");
            return Self::new(ell, c, 0.0);
        }
        // Bessel: |c_n| <= ||u0||.
        let bound = inner_product(u0, u0, ell, 8000)?.sqrt();
        let needed = modes_needed(ell, t_min, bound)?;
        let c = fourier_coefficients(u0, ell, needed.max(1))?;
        Self::new(ell, c, bound)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `lambda_n = n^2 pi^2 / l^2`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (1..=self.coefficients.len())
            .map(|n| (n as f64 * PI / self.length).powi(2))
            .collect()
    }

    /// `u(x, t) = sum c_n phi_n(x) exp(-lambda_n t)` over the stored modes.
    pub fn value(&self, x: f64, t: f64) -> f64 {
        let norm = (2.0 / self.length).sqrt();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = (i + 1) as f64 * PI / self.length;
                c * norm * (k * x).sin() * (-k * k * t).exp()
            })
            .sum()
    }
}

/// Smallest `N` with `bound * sum_{n>N} sqrt(2/l) (n pi / l) exp(-n^2 pi^2 t_min / l^2) < tol`.
fn modes_needed(ell: f64, t_min: f64, bound: f64) -> Result<usize> {
    if bound == 0.0 {
        return Ok(1);
    }
    let mut n = 1;
    while n <= MAX_SERIES_MODES {
        if bound * flux_tail(ell, t_min, n) < SERIES_TAIL_TOL {
            return Ok(n);
        }
        n = if n < 64 { n + 1 } else { n + n / 8 };
    }
    Err(invalid(format!(
        "series tail does not drop below {SERIES_TAIL_TOL} within {MAX_SERIES_MODES} modes at t_min = {t_min}"
    )))
}

/// `sum_{n > big_n} sqrt(2/l) (n pi / l) exp(-n^2 pi^2 t / l^2)`.
fn flux_tail(ell: f64, t: f64, big_n: usize) -> f64 {
    let norm = (2.0 / ell).sqrt();
    let a = (PI / ell).powi(2) * t;
    let peak = (1.0 / (2.0 * a)).sqrt();
    let mut sum = 0.0;
    let mut n = big_n + 1;
    loop {
        let nf = n as f64;
        let term = norm * nf * PI / ell * (-a * nf * nf).exp();
        sum += term;
        if nf > peak && (term < 1e-18 * sum || term == 0.0) {
            break;
        }
        n += 1;
        if n > big_n + 10 * MAX_SERIES_MODES {
            break;
        }
    }
    sum
}

/// `u_x(0, t) = sum c_n sqrt(2/l) (n pi / l) exp(-lambda_n t)` on `times`.
pub fn heat_series_flux(sol: &HeatSeriesSolution, times: TimeGrid) -> Result<Signal> {
    let t_min = times.t0();
    if !(t_min > 0.0) {
        return Err(invalid(format!("series flux needs all times > 0, got t_min = {t_min}")));
    }
    let ell = sol.length;
    let needed = if sol.tail_coefficient_bound == 0.0 {
        sol.coefficients.len()
    } else {
        let n = modes_needed(ell, t_min, sol.tail_coefficient_bound)?;
        if n > sol.coefficients.len() {
            return Err(Error::InsufficientModes {
                needed: n,
                available: sol.coefficients.len(),
            });
        }
        n
    };
    let norm = (2.0 / ell).sqrt();
    let terms: Vec<(f64, f64)> = sol.coefficients[..needed]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, &c)| {
            let k = (i + 1) as f64 * PI / ell;
            (c * norm * k, k * k)
        })
        .collect();
    Signal::sample(times, |t| terms.iter().map(|(w, lam)| w * (-lam * t).exp()).sum())
}

/// Time stepping for [`heat_fd_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeatScheme {
    /// Leading Crank–Nicolson steps replaced by two backward-Euler half steps each,
    /// damping the high modes that incompatible data excite.
    pub startup_steps: usize,
}

impl Default for HeatScheme {
    fn default() -> Self {
        Self { startup_steps: 2 }
    }
}

/// Crank–Nicolson solve with the default startup.
///
/// Nonnegative data stay nonnegative when `dt <= dx^2`. Larger steps are
/// fine for smooth decay but let modes with `dt lambda > 2` change sign, so
/// long runs on short intervals can undershoot slightly.
pub fn heat_fd_solve(p: &HeatProblem, g: Grid) -> SpaceTimeField {
    heat_fd_solve_with(p, g, HeatScheme::default())
}

pub fn heat_fd_solve_with(p: &HeatProblem, g: Grid, scheme: HeatScheme) -> SpaceTimeField {
    let mut levels = Vec::with_capacity(g.nt + 1);
    march(p, g, scheme, |u| levels.push(u.to_vec()));
    SpaceTimeField::from_levels(levels, p.length, p.horizon)
}

/// Steps the scheme and hands every time level to `sink`.
fn march(p: &HeatProblem, g: Grid, scheme: HeatScheme, mut sink: impl FnMut(&[f64])) {
    let nx = g.nx;
    let dx = g.dx(p.length);
    let dt = g.dt(p.horizon);
    let r = dt / (dx * dx);
    let m = nx - 1;
    let time = |j: usize| j as f64 * dt;

    let mut u: Vec<f64> = (0..=nx)
        .map(|i| if i == nx { 0.0 } else { p.u0.value(i as f64 * dx) })
        .collect();
    u[0] = p.eta.value(0.0);
    sink(&u);

    // CN and a backward-Euler half step share the left-hand side I + (r/2) A.
    let lhs = SymmetricToeplitzTridiag::new(m, 1.0 + r, -0.5 * r);
    let mut rhs = vec![0.0; m];

    for j in 0..g.nt {
        let t_next = time(j + 1);
        if j < scheme.startup_steps {
            for half in 1..=2 {
                let t_sub = time(j) + 0.5 * dt * half as f64;
                let eta_sub = p.eta.value(t_sub);
                rhs.copy_from_slice(&u[1..nx]);
                rhs[0] += 0.5 * r * eta_sub;
                lhs.solve_in_place(&mut rhs);
                u[1..nx].copy_from_slice(&rhs);
                u[0] = eta_sub;
            }
        } else {
            let eta_next = p.eta.value(t_next);
            for i in 1..nx {
                rhs[i - 1] = (1.0 - r) * u[i] + 0.5 * r * (u[i - 1] + u[i + 1]);
            }
            rhs[0] += 0.5 * r * eta_next;
            lhs.solve_in_place(&mut rhs);
            u[1..nx].copy_from_slice(&rhs);
            u[0] = eta_next;
        }
        u[0] = p.eta.value(t_next);
        u[nx] = 0.0;
        sink(&u);
    }
}

/// Observed flux `u_x(0, .)` of the FD solution on its own time grid.
///
/// Equal to `boundary_flux_left(&heat_fd_solve(p, g))` without storing the field.
pub fn heat_fd_flux(p: &HeatProblem, g: Grid) -> Result<Signal> {
    if g.nx < 3 {
        return Err(invalid(format!("flux stencil needs nx >= 3, got {}", g.nx)));
    }
    let dx = g.dx(p.length);
    let mut flux = Vec::with_capacity(g.nt + 1);
    march(p, g, HeatScheme::default(), |u| flux.push(left_flux(u, dx)));
    Signal::on_grid(TimeGrid::spanning(0.0, p.horizon, g.nt)?, flux)
}
