//! Uniformly sampled time series and the quadrature/interpolation built on them.
//!
//! Sample times are always computed as `t0 + j * dt`. Nothing accumulates
//! `t += dt`, so two signals built from the same grid agree bit-for-bit.

use crate::error::{invalid, Result};

/// A uniform time axis: `len` points starting at `t0` with spacing `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid(format!("time step must be positive, got {dt}")));
        }
        if !(t0 >= 0.0 && t0.is_finite()) {
            return Err(invalid(format!("start time must be non-negative, got {t0}")));
        }
        if len < 2 {
            return Err(invalid(format!("a time grid needs at least 2 points, got {len}")));
        }
        Ok(Self { t0, dt, len })
    }

    /// `intervals + 1` points covering `[t0, t1]` exactly.
    pub fn spanning(t0: f64, t1: f64, intervals: usize) -> Result<Self> {
        if !(t1 > t0) {
            return Err(invalid(format!("empty time span [{t0}, {t1}]")));
        }
        if intervals == 0 {
            return Err(invalid("a time span needs at least one interval"));
        }
        Self::new(t0, (t1 - t0) / intervals as f64, intervals + 1)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |j| self.time(j))
    }
}

/// A real-valued time series on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    grid: TimeGrid,
}

impl Signal {
    pub fn new(samples: Vec<f64>, dt: f64, t0: f64) -> Result<Self> {
        let grid = TimeGrid::new(t0, dt, samples.len())?;
        Self::on_grid(grid, samples)
    }

    pub fn on_grid(grid: TimeGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(invalid(format!(
                "grid has {} points but {} samples were given",
                grid.len(),
                samples.len()
            )));
        }
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {j} is not finite")));
        }
        Ok(Self { samples, grid })
    }

    /// Samples `f` at every grid time.
    pub fn sample(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = grid.times().map(f).collect();
        Self::on_grid(grid, samples)
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            samples: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn dt(&self) -> f64 {
        self.grid.dt
    }

    pub fn t0(&self) -> f64 {
        self.grid.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.grid.time(j)
    }

    pub fn t_end(&self) -> f64 {
        self.grid.t_end()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples
            .iter()
            .enumerate()
            .map(move |(j, &v)| (self.grid.time(j), v))
    }

    /// Pointwise map keeping the grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let samples = self.iter().map(|(t, v)| f(t, v)).collect();
        Self::on_grid(self.grid, samples)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Four-point Lagrange interpolation; one-sided stencils near the ends.
    ///
    /// Exact for cubics and reproduces the samples at grid times.
    pub fn interpolate_cubic(&self, t: f64) -> Result<f64> {
        let n = self.samples.len();
        let s = (t - self.grid.t0) / self.grid.dt;
        let tol = 1e-9;
        if !(s >= -tol && s <= (n - 1) as f64 + tol) {
            return Err(invalid(format!(
                "time {t} outside signal span [{}, {}]",
                self.grid.t0,
                self.t_end()
            )));
        }
        let nearest = s.round();
        if (s - nearest).abs() < 1e-12 {
            return Ok(self.samples[(nearest.max(0.0) as usize).min(n - 1)]);
        }
        if n < 4 {
            return self.interpolate_linear(t);
        }
        let j = (s.floor().max(0.0) as usize).min(n - 2);
        let base = j.saturating_sub(1).min(n - 4);
        let u = s - base as f64;
        let y = &self.samples[base..base + 4];
        // Lagrange basis on nodes 0, 1, 2, 3.
        let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
        let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
        let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
        Ok(l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3])
    }

    pub fn interpolate_linear(&self, t: f64) -> Result<f64> {
        let n = self.samples.len();
        let s = (t - self.grid.t0) / self.grid.dt;
        let tol = 1e-9;
        if !(s >= -tol && s <= (n - 1) as f64 + tol) {
            return Err(invalid(format!(
                "time {t} outside signal span [{}, {}]",
                self.grid.t0,
                self.t_end()
            )));
        }
        let s = s.clamp(0.0, (n - 1) as f64);
        let j = (s.floor() as usize).min(n - 2);
        let w = s - j as f64;
        Ok((1.0 - w) * self.samples[j] + w * self.samples[j + 1])
    }

    /// Resamples onto `grid` with [`Signal::interpolate_cubic`].
    pub fn resample_cubic(&self, grid: TimeGrid) -> Result<Self> {
        let samples = grid
            .times()
            .map(|t| self.interpolate_cubic(t))
            .collect::<Result<Vec<_>>>()?;
        Self::on_grid(grid, samples)
    }

    /// Trapezoid integral over `[a, b]`, with linear interpolation at partial cells.
    pub fn integrate_between(&self, a: f64, b: f64) -> Result<f64> {
        if !(b >= a) {
            return Err(invalid(format!("reversed integration window [{a}, {b}]")));
        }
        let eps = 1e-9 * self.grid.dt;
        if a < self.grid.t0 - eps || b > self.t_end() + eps {
            return Err(invalid(format!(
                "window [{a}, {b}] not covered by signal span [{}, {}]",
                self.grid.t0,
                self.t_end()
            )));
        }
        if b == a {
            return Ok(0.0);
        }
        let a = a.max(self.grid.t0);
        let b = b.min(self.t_end());
        let dt = self.grid.dt;
        let first = ((a - self.grid.t0) / dt).ceil() as usize;
        let last = ((b - self.grid.t0) / dt).floor() as usize;
        if first > last {
            // Window inside a single cell.
            let fa = self.interpolate_linear(a)?;
            let fb = self.interpolate_linear(b)?;
            return Ok(0.5 * (fa + fb) * (b - a));
        }
        let mut total = 0.0;
        let ta = self.time(first);
        total += 0.5 * (self.interpolate_linear(a)? + self.samples[first]) * (ta - a);
        for j in first..last {
            total += 0.5 * (self.samples[j] + self.samples[j + 1]) * dt;
        }
        let tb = self.time(last);
        total += 0.5 * (self.samples[last] + self.interpolate_linear(b)?) * (b - tb);
        Ok(total)
    }
}

/// Composite trapezoid rule over the full span of `f`.
pub fn trapezoid_integral(f: &Signal) -> Result<f64> {
    let s = f.samples();
    if s.len() < 2 {
        return Err(invalid("trapezoid rule needs at least 2 samples"));
    }
    Ok(trapezoid_uniform(s, f.dt()))
}

/// Trapezoid rule for uniformly spaced values.
pub(crate) fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..n - 1].iter().sum();
    h * (0.5 * (values[0] + values[n - 1]) + interior)
}
