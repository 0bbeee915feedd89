//! Forward wave solvers, the energy `E_l(t)` and the d'Alembert trace identity.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::heat::fourier_coefficients;
use crate::problem::{left_flux, Grid, SpaceTimeField, WaveProblem};
use crate::profile::Profile;
use crate::signal::{trapezoid_uniform, Signal, TimeGrid};

/// Eigen-expansion of the `eta = 0` wave solution on `(0, l)`:
/// `u = sum [a_n cos(w_n t) + b_n / w_n sin(w_n t)] phi_n(x)`, `w_n = n pi / l`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSeriesSolution {
    length: f64,
    displacement: Vec<f64>,
    velocity: Vec<f64>,
}

impl WaveSeriesSolution {
    /// Projects `(u0, u1)` onto the first `n_modes` modes.
    ///
    /// Sampled profiles are accepted only when their coefficients visibly
    /// decay at least like `1/n^2`; otherwise the differentiated series
    /// does not converge uniformly.
    pub fn from_profiles(u0: &Profile, u1: &Profile, ell: f64, n_modes: usize) -> Result<Self> {
        let displacement = project_checked(u0, ell, n_modes, "u0")?;
        let velocity = project_checked(u1, ell, n_modes, "u1")?;
        Ok(Self {
            length: ell,
            displacement,
            velocity,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn displacement_coefficients(&self) -> &[f64] {
        &self.displacement
    }

    pub fn velocity_coefficients(&self) -> &[f64] {
        &self.velocity
    }

    /// `sqrt(lambda_n) = n pi / l`.
    pub fn frequencies(&self) -> Vec<f64> {
        (1..=self.displacement.len())
            .map(|n| n as f64 * PI / self.length)
            .collect()
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        let norm = (2.0 / self.length).sqrt();
        self.frequencies()
            .iter()
            .zip(self.displacement.iter().zip(&self.velocity))
            .map(|(w, (a, b))| (a * (w * t).cos() + b / w * (w * t).sin()) * norm * (w * x).sin())
            .sum()
    }
}

fn project_checked(p: &Profile, ell: f64, n_modes: usize, name: &str) -> Result<Vec<f64>> {
    let c = fourier_coefficients(p, ell, n_modes)?;
    if p.is_closed_form() || n_modes < 8 {
        return Ok(c);
    }
    // Tail envelope s(n) = max_{m >= n} |c_m|; 1/n^2 decay keeps n^2 s(n) bounded.
    let envelope = |from: usize| c[from - 1..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n_hi = n_modes;
    let n_lo = n_modes / 4;
    let hi = (n_hi as f64).powi(2) * envelope(n_hi);
    let lo = (n_lo as f64).powi(2) * envelope(n_lo);
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if hi > 2.0 * lo && hi > 1e-10 * scale.max(1e-300) {
        return Err(Error::SlowCoefficientDecay(format!(
            "{name}: n^2 |c_n| grows from {lo:.3e} at n = {n_lo} to {hi:.3e} at n = {n_hi}; \
             sampled data must vanish at both ends and be smooth"
        )));
    }
    Ok(c)
}

/// Truncated series for `u_x(0, t)` with the first `n_modes` modes.
pub fn wave_series_flux(sol: &WaveSeriesSolution, n_modes: usize, times: TimeGrid) -> Result<Signal> {
    if n_modes == 0 {
        return Err(invalid("need at least one mode"));
    }
    let n = n_modes.min(sol.displacement.len());
    let norm = (2.0 / sol.length).sqrt();
    let terms: Vec<(f64, f64, f64)> = (0..n)
        .filter(|&i| sol.displacement[i] != 0.0 || sol.velocity[i] != 0.0)
        .map(|i| {
            let w = (i + 1) as f64 * PI / sol.length;
            (w, norm * w * sol.displacement[i], norm * sol.velocity[i])
        })
        .collect();
    Signal::sample(times, |t| {
        terms
            .iter()
            .map(|(w, a, b)| a * (w * t).cos() + b * (w * t).sin())
            .sum()
    })
}

/// Explicit leapfrog on the grid `g`.
///
/// The first level uses `u^1 = u^0 + dt u1 + dt^2/2 (u0)_xx` with the discrete
/// Laplacian; at Courant number 1 the interior update is exact for `u_tt = u_xx`.
pub fn wave_fd_solve(p: &WaveProblem, g: Grid) -> Result<SpaceTimeField> {
    let dx = g.dx(p.length);
    let dt = g.dt(p.horizon);
    if dt > dx * (1.0 + 1e-12) {
        return Err(Error::CourantViolation { dt, dx });
    }
    let mut levels = Vec::with_capacity(g.nt + 1);
    leapfrog(p, g.nx, g.nt, dt, |u| levels.push(u.to_vec()));
    Ok(SpaceTimeField::from_levels(levels, p.length, p.horizon))
}

/// Leapfrog at Courant number exactly 1 (`dt = dx = l / nx`), stepped until
/// the horizon is covered with two levels to spare for interpolation.
/// The returned field's horizon is `nt * dx >= T`.
pub fn wave_fd_solve_unit_courant(p: &WaveProblem, nx: usize) -> Result<SpaceTimeField> {
    let (nt, dx) = unit_courant_steps(p, nx)?;
    let mut levels = Vec::with_capacity(nt + 1);
    leapfrog(p, nx, nt, dx, |u| levels.push(u.to_vec()));
    Ok(SpaceTimeField::from_levels(levels, p.length, nt as f64 * dx))
}

/// `u_x(0, .)` of [`wave_fd_solve_unit_courant`] without storing the field.
pub fn wave_fd_flux_unit_courant(p: &WaveProblem, nx: usize) -> Result<Signal> {
    let (nt, dx) = unit_courant_steps(p, nx)?;
    let mut flux = Vec::with_capacity(nt + 1);
    leapfrog(p, nx, nt, dx, |u| flux.push(left_flux(u, dx)));
    Signal::on_grid(TimeGrid::spanning(0.0, nt as f64 * dx, nt)?, flux)
}

fn unit_courant_steps(p: &WaveProblem, nx: usize) -> Result<(usize, f64)> {
    if nx < Grid::MIN_NODES {
        return Err(invalid(format!("nx must be at least {}, got {nx}", Grid::MIN_NODES)));
    }
    let dx = p.length / nx as f64;
    let steps = p.horizon / dx;
    Ok(((steps - 1e-9 * steps).ceil() as usize + 2, dx))
}

fn leapfrog(p: &WaveProblem, nx: usize, nt: usize, dt: f64, mut sink: impl FnMut(&[f64])) {
    let dx = p.length / nx as f64;
    let nu2 = (dt / dx).powi(2);
    let unit = (nu2 - 1.0).abs() < 1e-12;
    let time = |j: usize| j as f64 * dt;

    let mut prev: Vec<f64> = (0..=nx)
        .map(|i| if i == nx { 0.0 } else { p.u0.value(i as f64 * dx) })
        .collect();
    prev[0] = p.eta.value(0.0);
    sink(&prev);

    let mut cur = vec![0.0; nx + 1];
    for i in 1..nx {
        let lap = prev[i + 1] - 2.0 * prev[i] + prev[i - 1];
        cur[i] = prev[i] + dt * p.u1.value(i as f64 * dx) + 0.5 * nu2 * lap;
    }
    cur[0] = p.eta.value(time(1));
    cur[nx] = 0.0;
    sink(&cur);

    let mut next = vec![0.0; nx + 1];
    for j in 1..nt {
        if unit {
            for i in 1..nx {
                next[i] = cur[i + 1] + cur[i - 1] - prev[i];
            }
        } else {
            for i in 1..nx {
                next[i] = 2.0 * cur[i] - prev[i] + nu2 * (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]);
            }
        }
        next[0] = p.eta.value(time(j + 1));
        next[nx] = 0.0;
        sink(&next);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
}

/// `E_l(t_j)` for every time level of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    values: Vec<f64>,
    dt: f64,
}

impl EnergyTrace {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `max_j |E_j - E_0| / E_0`; zero for a zero trace.
    pub fn relative_drift(&self) -> f64 {
        let e0 = self.values[0];
        let dev = self.values.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
        if e0 == 0.0 {
            if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            dev / e0
        }
    }
}

/// Discrete `int_0^l (u_t^2 + u_x^2) dx`: centered differences inside,
/// second-order one-sided differences at the boundary rows and time levels,
/// trapezoid rule in `x`.
pub fn wave_energy(f: &SpaceTimeField) -> EnergyTrace {
    let nx = f.nx();
    let nt = f.nt();
    let dx = f.dx();
    let dt = f.dt();
    let mut values = Vec::with_capacity(nt + 1);
    let mut density = vec![0.0; nx + 1];
    for j in 0..=nt {
        for (i, d) in density.iter_mut().enumerate() {
            let ut = if nt < 2 {
                0.0
            } else if j == 0 {
                (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) / (2.0 * dt)
            } else if j == nt {
                (3.0 * f.at(i, nt) - 4.0 * f.at(i, nt - 1) + f.at(i, nt - 2)) / (2.0 * dt)
            } else {
                (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * dt)
            };
            let ux = if i == 0 {
                (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * dx)
            } else if i == nx {
                (3.0 * f.at(nx, j) - 4.0 * f.at(nx - 1, j) + f.at(nx - 2, j)) / (2.0 * dx)
            } else {
                (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * dx)
            };
            *d = ut * ut + ux * ux;
        }
        values.push(trapezoid_uniform(&density, dx));
    }
    EnergyTrace { values, dt }
}

/// `u(0, t) = -1/2 int_{t-l}^{t+l} u_x(l, s) ds`, valid when `u(l, .) = 0`
/// on the window and the wave equation holds on `(0, l)`.
pub fn dalembert_left_value(flux_at_ell: &Signal, ell: f64, t: f64) -> Result<f64> {
    let (a, b) = (t - ell, t + ell);
    let eps = 1e-9 * flux_at_ell.dt();
    if a < flux_at_ell.t0() - eps || b > flux_at_ell.t_end() + eps {
        return Err(invalid(format!(
            "flux spans [{}, {}] but the window is [{a}, {b}]",
            flux_at_ell.t0(),
            flux_at_ell.t_end()
        )));
    }
    Ok(-0.5 * flux_at_ell.integrate_between(a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{boundary_flux_left, boundary_flux_right};
    use crate::profile::BoundaryInput;
    use approx::assert_abs_diff_eq;

    fn standing(ell: f64, t: f64) -> WaveProblem {
        WaveProblem::new(ell, t, BoundaryInput::Zero, Profile::mode(1, ell), Profile::Zero).unwrap()
    }

    #[test]
    fn single_mode_series_flux() {
        let ell = 3.0;
        for n0 in 1..=3 {
            let sol = WaveSeriesSolution::from_profiles(&Profile::mode(n0, ell), &Profile::Zero, ell, 8).unwrap();
            let times = TimeGrid::spanning(0.0, 6.0, 600).unwrap();
            let f = wave_series_flux(&sol, 8, times).unwrap();
            let w = n0 as f64 * PI / ell;
            for (t, v) in f.iter() {
                assert_abs_diff_eq!(v, w * (w * t).cos(), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn zero_data_series_flux() {
        let sol = WaveSeriesSolution::from_profiles(&Profile::Zero, &Profile::Zero, 2.0, 4).unwrap();
        let f = wave_series_flux(&sol, 4, TimeGrid::spanning(0.0, 1.0, 10).unwrap()).unwrap();
        assert_eq!(f.max_abs(), 0.0);
    }

    #[test]
    fn two_and_four_share_the_flux() {
        let u0 = Profile::sine(1.0, PI / 2.0);
        let times = TimeGrid::spanning(0.0, 8.0, 800).unwrap();
        let a = WaveSeriesSolution::from_profiles(&u0, &Profile::Zero, 2.0, 4).unwrap();
        let b = WaveSeriesSolution::from_profiles(&u0, &Profile::Zero, 4.0, 4).unwrap();
        let fa = wave_series_flux(&a, 4, times).unwrap();
        let fb = wave_series_flux(&b, 4, times).unwrap();
        for (x, y) in fa.samples().iter().zip(fb.samples()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn sampled_data_with_slow_decay_is_rejected() {
        // Nonzero at x = l: coefficients decay like 1/n.
        let ramp = Profile::sampled((0..=100).map(|i| i as f64 / 100.0).collect(), 1.0).unwrap();
        let err = WaveSeriesSolution::from_profiles(&ramp, &Profile::Zero, 1.0, 64).unwrap_err();
        assert!(matches!(err, Error::SlowCoefficientDecay(_)), "{err}");
        // A smooth sampled bump vanishing at both ends passes.
        let smooth: Vec<f64> = (0..=400).map(|i| (PI * i as f64 / 400.0).sin().powi(3)).collect();
        let p = Profile::sampled(smooth, 1.0).unwrap();
        assert!(WaveSeriesSolution::from_profiles(&p, &Profile::Zero, 1.0, 64).is_ok());
    }

    #[test]
    fn unit_courant_reproduces_standing_mode() {
        let p = standing(2.0, 4.0);
        let g = Grid::for_wave(2.0, 4.0, 200).unwrap();
        let f = wave_fd_solve(&p, g).unwrap();
        let err = f.sup_error(|x, t| (PI * x / 2.0).sin() * (PI * t / 2.0).cos());
        assert!(err < 1e-10, "sup error {err}");
    }

    #[test]
    fn courant_violation_is_an_error() {
        let p = standing(2.0, 4.0);
        let err = wave_fd_solve(&p, Grid::new(200, 399).unwrap()).unwrap_err();
        assert!(matches!(err, Error::CourantViolation { .. }));
    }

    #[test]
    fn zero_data_zero_field() {
        let p = WaveProblem::new(2.0, 4.0, BoundaryInput::Zero, Profile::Zero, Profile::Zero).unwrap();
        let f = wave_fd_solve(&p, Grid::for_wave(2.0, 4.0, 50).unwrap()).unwrap();
        assert_eq!(f.max_abs(), 0.0);
        let e = wave_energy(&f);
        assert!(e.values().iter().all(|&v| v == 0.0));
        assert_eq!(e.relative_drift(), 0.0);
    }

    #[test]
    fn series_and_fd_flux_agree_for_one_mode() {
        let p = standing(2.0, 4.0);
        let f = wave_fd_solve(&p, Grid::for_wave(2.0, 4.0, 400).unwrap()).unwrap();
        let fd = boundary_flux_left(&f).unwrap();
        let sol = WaveSeriesSolution::from_profiles(&p.u0, &p.u1, 2.0, 4).unwrap();
        let series = wave_series_flux(&sol, 4, fd.grid()).unwrap();
        // Stencil error of the one-sided flux for sin(kx): k^3 dx^2 / 3 cos(kt).
        let k = PI / 2.0;
        let dx = 2.0 / 400.0;
        let bias = k.powi(3) * dx * dx / 3.0;
        for ((t, a), b) in fd.iter().zip(series.samples()) {
            assert!((a - b - bias * (k * t).cos()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn standing_mode_energy_is_constant() {
        // E = (pi/2)^2 int_0^2 cos^2(pi x / 2) dx = pi^2 / 4.
        let p = standing(2.0, 4.0);
        let f = wave_fd_solve(&p, Grid::new(2000, 4000).unwrap()).unwrap();
        let e = wave_energy(&f);
        let e0_quadrature = {
            let vals: Vec<f64> = (0..=4000)
                .map(|i| {
                    let x = i as f64 * 2.0 / 4000.0;
                    (PI / 2.0 * (PI * x / 2.0).cos()).powi(2)
                })
                .collect();
            trapezoid_uniform(&vals, 2.0 / 4000.0)
        };
        assert_abs_diff_eq!(e0_quadrature, PI * PI / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values()[0], e0_quadrature, epsilon = 1e-5);
        assert!(e.relative_drift() < 1e-8, "drift {}", e.relative_drift());
    }

    #[test]
    fn dalembert_window_identities() {
        let grid = TimeGrid::spanning(0.0, 10.0, 1000).unwrap();
        assert_eq!(dalembert_left_value(&Signal::zeros(grid), 2.0, 5.0).unwrap(), 0.0);
        let one = Signal::sample(grid, |_| 1.0).unwrap();
        assert_abs_diff_eq!(dalembert_left_value(&one, 2.0, 5.0).unwrap(), -2.0, epsilon = 1e-12);
        assert!(dalembert_left_value(&one, 2.0, 1.0).is_err());
        assert!(dalembert_left_value(&one, 2.0, 9.0).is_err());
    }

    #[test]
    fn dalembert_recovers_left_trace_from_right_flux() {
        let eta = BoundaryInput::sin_cubed(3.0);
        let p = WaveProblem::new(2.0, 8.0, eta, Profile::Zero, Profile::Zero).unwrap();
        let f = wave_fd_solve(&p, Grid::for_wave(2.0, 8.0, 400).unwrap()).unwrap();
        let right = boundary_flux_right(&f).unwrap();
        let left = f.trace(0);
        for j in (0..=f.nt()).step_by(7) {
            let t = f.t(j);
            if !(2.0..=6.0).contains(&t) {
                continue;
            }
            let v = dalembert_left_value(&right, 2.0, t).unwrap();
            assert!(
                (v - left.samples()[j]).abs() < 1e-3,
                "t = {t}: {v} vs {}",
                left.samples()[j]
            );
        }
    }

    #[test]
    fn streamed_flux_matches_stored_field() {
        let p = WaveProblem::new(1.7, 4.0, BoundaryInput::sin_cubed(3.0), Profile::Zero, Profile::Zero).unwrap();
        let field = wave_fd_solve_unit_courant(&p, 60).unwrap();
        assert!(field.horizon() >= 4.0);
        assert!((field.dt() / field.dx() - 1.0).abs() < 1e-14);
        let stored = boundary_flux_left(&field).unwrap();
        assert_eq!(wave_fd_flux_unit_courant(&p, 60).unwrap(), stored);
    }
}
