//! Problem definitions, grids and the discrete space-time field.

use crate::error::{invalid, Result};
use crate::profile::{BoundaryInput, Profile};
use crate::signal::{Signal, TimeGrid};

const COMPAT_TOL: f64 = 1e-8;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_sampled_compat(u0: &Profile, ell: f64) -> Result<()> {
    if let Profile::Sampled { .. } = u0 {
        let end = u0.value(ell);
        if end.abs() > COMPAT_TOL {
            return Err(invalid(format!(
                "sampled initial data must vanish at x = l, got u0({ell}) = {end}"
            )));
        }
    }
    Ok(())
}

/// `u_t - u_xx = 0` on `(0, l) x (0, T)`, `u(0,t) = eta`, `u(l,t) = 0`, `u(x,0) = u0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatProblem {
    pub length: f64,
    pub horizon: f64,
    pub eta: BoundaryInput,
    pub u0: Profile,
}

impl HeatProblem {
    pub fn new(length: f64, horizon: f64, eta: BoundaryInput, u0: Profile) -> Result<Self> {
        check_positive("length", length)?;
        check_positive("horizon", horizon)?;
        u0.check_domain(length)?;
        check_sampled_compat(&u0, length)?;
        Ok(Self {
            length,
            horizon,
            eta,
            u0,
        })
    }

    /// Same data posed on a different length.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(length, self.horizon, self.eta.clone(), self.u0.clone())
    }
}

/// `u_tt - u_xx = 0` on `(0, l) x (0, T)` with Dirichlet data and `(u0, u1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProblem {
    pub length: f64,
    pub horizon: f64,
    pub eta: BoundaryInput,
    pub u0: Profile,
    pub u1: Profile,
}

impl WaveProblem {
    /// Requires `T > l`: the flux at `x = 0` carries no information about `l`
    /// before the first reflection.
    pub fn new(length: f64, horizon: f64, eta: BoundaryInput, u0: Profile, u1: Profile) -> Result<Self> {
        check_positive("length", length)?;
        check_positive("horizon", horizon)?;
        if horizon <= length {
            return Err(invalid(format!(
                "wave horizon T = {horizon} must exceed the length l = {length}"
            )));
        }
        u0.check_domain(length)?;
        u1.check_domain(length)?;
        check_sampled_compat(&u0, length)?;
        Ok(Self {
            length,
            horizon,
            eta,
            u0,
            u1,
        })
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(length, self.horizon, self.eta.clone(), self.u0.clone(), self.u1.clone())
    }

    /// `eta(0) - u0(0)`; nonzero values are accepted but produce a corner singularity.
    pub fn corner_mismatch(&self) -> f64 {
        self.eta.value(0.0) - self.u0.value(0.0)
    }
}

/// Node counts: `dx = l / nx`, `dt = T / nt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub nx: usize,
    pub nt: usize,
}

impl Grid {
    pub const MIN_NODES: usize = 8;

    pub fn new(nx: usize, nt: usize) -> Result<Self> {
        if nx < Self::MIN_NODES || nt < Self::MIN_NODES {
            return Err(invalid(format!(
                "grid needs nx, nt >= {}, got nx = {nx}, nt = {nt}",
                Self::MIN_NODES
            )));
        }
        Ok(Self { nx, nt })
    }

    /// Wave grid with the largest Courant number `dt/dx <= 1` reachable by
    /// raising `nt`: exactly 1 when `T nx / l` is an integer.
    pub fn for_wave(length: f64, horizon: f64, nx: usize) -> Result<Self> {
        let steps = horizon * nx as f64 / length;
        let nt = (steps - 1e-9 * steps).ceil() as usize;
        Self::new(nx, nt.max(Self::MIN_NODES))
    }

    /// Both counts multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            nx: self.nx * factor,
            nt: self.nt * factor,
        }
    }

    pub fn dx(&self, length: f64) -> f64 {
        length / self.nx as f64
    }

    pub fn dt(&self, horizon: f64) -> f64 {
        horizon / self.nt as f64
    }
}

/// Discrete `u(x_i, t_j)`, `i = 0..=nx`, `j = 0..=nt`, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    values: Vec<f64>,
    nx: usize,
    nt: usize,
    length: f64,
    horizon: f64,
}

impl SpaceTimeField {
    pub(crate) fn from_levels(levels: Vec<Vec<f64>>, length: f64, horizon: f64) -> Self {
        let nx = levels[0].len() - 1;
        let nt = levels.len() - 1;
        let mut values = Vec::with_capacity((nx + 1) * (nt + 1));
        for level in levels {
            debug_assert_eq!(level.len(), nx + 1);
            values.extend(level);
        }
        Self {
            values,
            nx,
            nt,
            length,
            horizon,
        }
    }

    /// Builds a field by sampling `u(x, t)` on the grid.
    pub fn from_fn(length: f64, horizon: f64, grid: Grid, u: impl Fn(f64, f64) -> f64) -> Self {
        let dx = grid.dx(length);
        let dt = grid.dt(horizon);
        let levels = (0..=grid.nt)
            .map(|j| (0..=grid.nx).map(|i| u(i as f64 * dx, j as f64 * dt)).collect())
            .collect();
        Self::from_levels(levels, length, horizon)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.nt as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn t(&self, j: usize) -> f64 {
        j as f64 * self.dt()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    /// All nodes at time level `j`.
    pub fn level(&self, j: usize) -> &[f64] {
        let w = self.nx + 1;
        &self.values[j * w..(j + 1) * w]
    }

    pub fn time_grid(&self) -> TimeGrid {
        TimeGrid::spanning(0.0, self.horizon, self.nt).expect("field grids are validated")
    }

    /// The trace `u(x_i, .)` as a signal.
    pub fn trace(&self, i: usize) -> Signal {
        let samples = (0..=self.nt).map(|j| self.at(i, j)).collect();
        Signal::on_grid(self.time_grid(), samples).expect("field values are finite")
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sup-norm distance to `u(x, t)` over all nodes.
    pub fn sup_error(&self, u: impl Fn(f64, f64) -> f64) -> f64 {
        let mut err: f64 = 0.0;
        for j in 0..=self.nt {
            let t = self.t(j);
            for (i, &v) in self.level(j).iter().enumerate() {
                err = err.max((v - u(self.x(i), t)).abs());
            }
        }
        err
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// `u_x(0, t_j)` by the second-order one-sided difference `(-3u_0 + 4u_1 - u_2) / (2 dx)`.
pub fn boundary_flux_left(f: &SpaceTimeField) -> Result<Signal> {
    if f.nx < 3 {
        return Err(invalid(format!("flux stencil needs nx >= 3, got {}", f.nx)));
    }
    let dx = f.dx();
    let samples = (0..=f.nt).map(|j| left_flux(f.level(j), dx)).collect();
    Signal::on_grid(f.time_grid(), samples)
}

#[inline]
pub(crate) fn left_flux(u: &[f64], dx: f64) -> f64 {
    (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx)
}

/// `u_x(l, t_j)` by `(3u_n - 4u_{n-1} + u_{n-2}) / (2 dx)`.
pub fn boundary_flux_right(f: &SpaceTimeField) -> Result<Signal> {
    if f.nx < 3 {
        return Err(invalid(format!("flux stencil needs nx >= 3, got {}", f.nx)));
    }
    let dx = f.dx();
    let n = f.nx;
    let samples = (0..=f.nt)
        .map(|j| {
            let u = f.level(j);
            (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * dx)
        })
        .collect();
    Signal::on_grid(f.time_grid(), samples)
}
