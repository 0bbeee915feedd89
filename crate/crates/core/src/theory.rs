//! Numerical checks of the uniqueness and non-uniqueness results: shared-mode
//! counterexamples, admissible lengths, the trace scaling bound, the direct
//! inequality for standing waves and the asymptotic length estimate.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::heat::{heat_fd_flux, heat_series_flux, HeatSeriesSolution};
use crate::problem::{boundary_flux_left, Grid, HeatProblem, WaveProblem};
use crate::profile::{squared_norm, BoundaryInput, Profile};
use crate::signal::{trapezoid_uniform, Signal, TimeGrid};
use crate::wave::{wave_energy, wave_fd_solve_unit_courant, wave_series_flux, WaveSeriesSolution};

/// Largest denominator tried when recognising `L / l` as a fraction.
pub const MAX_DENOMINATOR: u64 = 1_000_000;

/// Relative tolerance for accepting a fraction. Tight enough that no
/// convergent of pi with denominator below [`MAX_DENOMINATOR`] passes.
pub const RATIO_TOLERANCE: f64 = 1e-13;

/// Continued-fraction search for `p / q` with `q <= max_den` and
/// `|x - p/q| <= tol * |x|`. Returns the first (smallest) such convergent.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    if !(x > 0.0 && x.is_finite()) {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a > u64::MAX as f64 / 4.0 {
            return None;
        }
        let a = a as u64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol * x {
            return Some((p2, q2));
        }
        let frac = rest - a as f64;
        if frac <= 0.0 {
            return None;
        }
        rest = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Two lengths with `L / l = m0 / n0` in lowest terms and a mode `k1` of
/// `(0, l)` that is also mode `n1 = k1 m0 / n0` of `(0, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommensuratePair {
    pub ell: f64,
    pub big_l: f64,
    pub n0: u64,
    pub m0: u64,
    pub k1: u32,
    pub n1: u64,
}

impl CommensuratePair {
    /// `sin(k1 pi x / l) = sin(n1 pi x / L)`.
    pub fn profile(&self) -> Profile {
        Profile::sine(1.0, self.k1 as f64 * PI / self.ell)
    }

    /// The same function written with the frequency of `(0, L)`.
    pub fn profile_on_big(&self) -> Profile {
        Profile::sine(1.0, self.n1 as f64 * PI / self.big_l)
    }
}

/// Initial data shared by `(0, l)` and `(0, L)` as a single eigenmode of each.
pub fn commensurate_initial_data(ell: f64, big_l: f64, k1: u32) -> Result<CommensuratePair> {
    if !(ell > 0.0 && big_l > ell && big_l.is_finite()) {
        return Err(invalid(format!("need L > l > 0, got l = {ell}, L = {big_l}")));
    }
    if k1 == 0 {
        return Err(invalid("mode index k1 must be positive"));
    }
    let ratio = big_l / ell;
    let (m0, n0) =
        rational_approximation(ratio, MAX_DENOMINATOR, RATIO_TOLERANCE).ok_or(Error::Incommensurate { ratio })?;
    let g = gcd(m0, n0);
    let (m0, n0) = (m0 / g, n0 / g);
    let num = k1 as u64 * m0;
    if !num.is_multiple_of(n0) {
        return Err(Error::NoSharedMode { k1, m0, n0 });
    }
    Ok(CommensuratePair {
        ell,
        big_l,
        n0,
        m0,
        k1,
        n1: num / n0,
    })
}

/// Which equation, and for the wave which initial slot carries the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxModel {
    Heat,
    WaveDisplacement,
    WaveVelocity,
}

const GAP_SAMPLES: usize = 2000;

/// Series flux at `x = 0` of the problem with `eta = 0` on `(0, ell)`.
fn series_flux(model: FluxModel, data: &Profile, ell: f64, times: TimeGrid) -> Result<Signal> {
    match model {
        FluxModel::Heat => {
            let sol = HeatSeriesSolution::from_profile(data, ell, times.t0())?;
            heat_series_flux(&sol, times)
        }
        FluxModel::WaveDisplacement | FluxModel::WaveVelocity => {
            let n_modes = data
                .exact_mode_terms(ell)
                .and_then(|t| t.iter().map(|(n, _)| *n).max())
                .unwrap_or(256);
            let (u0, u1) = if model == FluxModel::WaveDisplacement {
                (data, &Profile::Zero)
            } else {
                (&Profile::Zero, data)
            };
            let sol = WaveSeriesSolution::from_profiles(u0, u1, ell, n_modes)?;
            wave_series_flux(&sol, n_modes, times)
        }
    }
}

/// `sup |u_x^l(0, t) - u_x^L(0, t)|` over `[t_min, T]` from truncated series,
/// with `eta = 0` and the given data on each interval.
pub fn flux_gap(
    model: FluxModel,
    (ell, on_ell): (f64, &Profile),
    (big_l, on_big): (f64, &Profile),
    horizon: f64,
    t_min: f64,
) -> Result<f64> {
    if model == FluxModel::Heat && t_min <= 0.0 {
        return Err(invalid("heat series need t_min > 0"));
    }
    if !(horizon > t_min && t_min >= 0.0) {
        return Err(invalid(format!("need 0 <= t_min < T, got [{t_min}, {horizon}]")));
    }
    let times = TimeGrid::spanning(t_min, horizon, GAP_SAMPLES)?;
    let a = series_flux(model, on_ell, ell, times)?;
    let b = series_flux(model, on_big, big_l, times)?;
    Ok(a.samples()
        .iter()
        .zip(b.samples())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
}

/// Flux gap of a commensurate pair, whose shared profile is one mode on each interval.
pub fn verify_flux_equality(pair: &CommensuratePair, model: FluxModel, horizon: f64, t_min: f64) -> Result<f64> {
    flux_gap(
        model,
        (pair.ell, &pair.profile()),
        (pair.big_l, &pair.profile_on_big()),
        horizon,
        t_min,
    )
}

/// All `L = N l / n0 <= L_max` with `N >= n0`, in increasing order.
pub fn admissible_lengths(ell: f64, n0: u64, l_max: f64) -> Vec<f64> {
    if n0 == 0 || !(ell > 0.0) {
        return Vec::new();
    }
    let cap = l_max * (1.0 + 1e-12);
    (n0..)
        .map(|n| n as f64 * ell / n0 as f64)
        .take_while(|&len| len <= cap)
        .collect()
}

/// How the half-interval data is continued past `x = l` onto `(0, 2l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    /// `u0(2l - x) = -u0(x)`: the doubled problem keeps `u = 0` at `x = l`.
    Odd,
    /// `u0(2l - x) = u0(x)`: gives `u_x = 0` at `x = l` instead.
    Even,
}

/// Heat flux gap at `x = 0` between `(0, l)` with `u0_half` and `(0, 2l)`
/// with its reflection, `eta = 0`, by finite differences at equal spacing.
pub fn symmetric_data_check(
    ell: f64,
    u0_half: &Profile,
    horizon: f64,
    reflection: Reflection,
    grid: Grid,
) -> Result<f64> {
    let doubled = Profile::Mirrored {
        base: Box::new(u0_half.clone()),
        about: ell,
        odd: reflection == Reflection::Odd,
    };
    let short = HeatProblem::new(ell, horizon, BoundaryInput::Zero, u0_half.clone())?;
    let long = HeatProblem::new(2.0 * ell, horizon, BoundaryInput::Zero, doubled)?;
    let a = heat_fd_flux(&short, grid)?;
    let b = heat_fd_flux(&long, Grid::new(2 * grid.nx, grid.nt)?)?;
    Ok(a.samples()
        .iter()
        .zip(b.samples())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
}

/// A profile seen on `(0, l)` for several `l`.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceFamily {
    /// The same function restricted to each interval.
    Fixed(Profile),
    /// `f_l(x) = g(x / l)` for a reference `g` on `(0, 1)`.
    Scaled(Profile),
}

impl TraceFamily {
    pub fn at(&self, ell: f64) -> Profile {
        match self {
            TraceFamily::Fixed(f) => f.clone(),
            TraceFamily::Scaled(g) => g.rescaled(1.0 / ell),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRatio {
    pub ell: f64,
    /// `|f'(0)| l^{3/2} / ||f||_{H^2(0, l)}`.
    pub standard: f64,
    /// `l |f'(0)| / (int_0^l f^2 / l + l f'^2 + l^3 f''^2)^{1/2}`, which is
    /// unchanged under `f -> f(. / l)`.
    pub scale_free: f64,
}

const TRACE_QUAD: usize = 20_000;

/// Trace ratios of `f_l` for every `l` in `ells`.
pub fn trace_constant_probe(family: &TraceFamily, ells: &[f64]) -> Result<Vec<TraceRatio>> {
    ells.iter()
        .map(|&ell| {
            if !(ell > 0.0 && ell.is_finite()) {
                return Err(invalid(format!("length must be positive, got {ell}")));
            }
            let f = family.at(ell);
            let slope = f.derivative(0.0, 1)?.abs();
            let n0 = squared_norm(&f, ell, 0, TRACE_QUAD)?;
            let n1 = squared_norm(&f, ell, 1, TRACE_QUAD)?;
            let n2 = squared_norm(&f, ell, 2, TRACE_QUAD)?;
            let ratio = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den.sqrt() };
            Ok(TraceRatio {
                ell,
                standard: ratio(slope * ell.powf(1.5), n0 + n1 + n2),
                scale_free: ratio(ell * slope, n0 / ell + ell * n1 + ell.powi(3) * n2),
            })
        })
        .collect()
}

/// Explicit constant in `|f'(0)| <= C l^{-3/2} ||f||_{H^2(0,l)}` for `l <= L*`.
///
/// On `(0, 1)`, `h(0) = int h - int (1 - s) h'(s) ds` gives
/// `|h(0)|^2 <= 4/3 (||h||^2 + ||h'||^2)`; with `h = g'` and the rescaling
/// `y = x / l` this becomes `sqrt(4/3) max(L*, L*^2)`.
pub fn trace_constant_bound(l_star: f64) -> f64 {
    (4.0f64 / 3.0).sqrt() * l_star.max(l_star * l_star)
}

/// Bound on [`TraceRatio::scale_free`], valid for every `l`.
pub fn scale_free_trace_bound() -> f64 {
    (4.0f64 / 3.0).sqrt()
}

/// One standing wave `sin(k pi (x - l) / d) [a cos(w (t - T0)) + b sin(w (t - T0))]`,
/// `d = L - l`, `w = k pi / d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerm {
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

/// A finite sum of standing waves on `(l, L) x (T0, T1)` vanishing at `x = l, L`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandingWaves {
    pub ell: f64,
    pub big_l: f64,
    pub t0: f64,
    pub t1: f64,
    terms: Vec<ModeTerm>,
}

impl StandingWaves {
    /// Terms with equal `k` are merged.
    pub fn new(ell: f64, big_l: f64, t0: f64, t1: f64, terms: &[ModeTerm]) -> Result<Self> {
        if !(big_l > ell && t1 > t0) {
            return Err(invalid(format!(
                "need l < L and T0 < T1, got ({ell}, {big_l}) x ({t0}, {t1})"
            )));
        }
        let mut merged: Vec<ModeTerm> = Vec::new();
        for t in terms {
            if t.k == 0 {
                return Err(invalid("mode index must be positive"));
            }
            match merged.iter_mut().find(|m| m.k == t.k) {
                Some(m) => {
                    m.a += t.a;
                    m.b += t.b;
                }
                None => merged.push(*t),
            }
        }
        Ok(Self {
            ell,
            big_l,
            t0,
            t1,
            terms: merged,
        })
    }

    /// `A sin(k pi (x - l) / d) cos(k pi (t - T0) / d)`.
    pub fn single(k: u32, ell: f64, big_l: f64, amplitude: f64, t0: f64, t1: f64) -> Result<Self> {
        Self::new(
            ell,
            big_l,
            t0,
            t1,
            &[ModeTerm {
                k,
                a: amplitude,
                b: 0.0,
            }],
        )
    }

    pub fn terms(&self) -> &[ModeTerm] {
        &self.terms
    }

    fn width(&self) -> f64 {
        self.big_l - self.ell
    }

    fn omega(&self, k: u32) -> f64 {
        k as f64 * PI / self.width()
    }

    /// `w_x(l, t)`.
    pub fn flux_at_left(&self, t: f64) -> f64 {
        let s = t - self.t0;
        self.terms
            .iter()
            .map(|m| {
                let w = self.omega(m.k);
                w * (m.a * (w * s).cos() + m.b * (w * s).sin())
            })
            .sum()
    }

    /// `(w_t, w_x)` at `(x, T0)`.
    fn gradient_at_start(&self, x: f64) -> (f64, f64) {
        let xi = x - self.ell;
        self.terms.iter().fold((0.0, 0.0), |(wt, wx), m| {
            let w = self.omega(m.k);
            (wt + m.b * w * (w * xi).sin(), wx + m.a * w * (w * xi).cos())
        })
    }
}

/// Both sides of the direct inequality, from closed forms and from quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectInequality {
    /// `||w_x(l, .)||^2_{L^2(T0, T1)}`.
    pub lhs: f64,
    /// `(T1 - T0 + 2 d) / d * (||w_t(., T0)||^2 + ||w_x(., T0)||^2)`.
    pub rhs: f64,
    pub lhs_quadrature: f64,
    pub rhs_quadrature: f64,
}

impl DirectInequality {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12) + 1e-300
    }
}

/// `int_0^s cos(r x) dx`.
fn int_cos(r: f64, s: f64) -> f64 {
    if r == 0.0 {
        s
    } else {
        (r * s).sin() / r
    }
}

/// `int_0^s sin(r x) dx`.
fn int_sin(r: f64, s: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        (1.0 - (r * s).cos()) / r
    }
}

const DIRECT_QUAD: usize = 20_000;

pub fn direct_inequality_check(w: &StandingWaves) -> DirectInequality {
    let d = w.width();
    let span = w.t1 - w.t0;

    let mut lhs = 0.0;
    for p in &w.terms {
        for q in &w.terms {
            let (wp, wq) = (w.omega(p.k), w.omega(q.k));
            let (minus, plus) = (wp - wq, wp + wq);
            let cc = 0.5 * (int_cos(minus, span) + int_cos(plus, span));
            let ss = 0.5 * (int_cos(minus, span) - int_cos(plus, span));
            // sin(wp s) cos(wq s) and cos(wp s) sin(wq s)
            let sc = 0.5 * (int_sin(plus, span) + int_sin(minus, span));
            let cs = 0.5 * (int_sin(plus, span) - int_sin(minus, span));
            lhs += wp * wq * (p.a * q.a * cc + p.b * q.b * ss + p.b * q.a * sc + p.a * q.b * cs);
        }
    }
    let lhs = lhs.max(0.0);
    let energy: f64 = w
        .terms
        .iter()
        .map(|m| (m.a * m.a + m.b * m.b) * w.omega(m.k).powi(2) * d / 2.0)
        .sum();
    let factor = (span + 2.0 * d) / d;

    let ht = span / DIRECT_QUAD as f64;
    let flux_sq: Vec<f64> = (0..=DIRECT_QUAD)
        .map(|j| w.flux_at_left(w.t0 + j as f64 * ht).powi(2))
        .collect();
    let hx = d / DIRECT_QUAD as f64;
    let density: Vec<f64> = (0..=DIRECT_QUAD)
        .map(|i| {
            let (wt, wx) = w.gradient_at_start(w.ell + i as f64 * hx);
            wt * wt + wx * wx
        })
        .collect();

    DirectInequality {
        lhs,
        rhs: factor * energy,
        lhs_quadrature: trapezoid_uniform(&flux_sq, ht),
        rhs_quadrature: factor * trapezoid_uniform(&density, hx),
    }
}

/// `(l1 / 2) (T + 2 l1 - 4 l0) M / delta0^2`.
pub fn asymptotic_bound(ell0: f64, ell1: f64, horizon: f64, energy_bound: f64, delta0: f64) -> Result<f64> {
    if !(ell0 > 0.0 && ell1 >= ell0) {
        return Err(Error::HypothesisViolation(format!(
            "need 0 < l0 <= l1, got l0 = {ell0}, l1 = {ell1}"
        )));
    }
    if !(horizon > 4.0 * ell1) {
        return Err(Error::HypothesisViolation(format!(
            "need T > 4 l1, got T = {horizon}, l1 = {ell1}"
        )));
    }
    if !(energy_bound > 0.0) {
        return Err(Error::HypothesisViolation(format!("need M > 0, got {energy_bound}")));
    }
    if !(delta0 > 0.0) {
        return Err(Error::HypothesisViolation(format!("need delta0 > 0, got {delta0}")));
    }
    Ok(ell1 / 2.0 * (horizon + 2.0 * ell1 - 4.0 * ell0) * energy_bound / (delta0 * delta0))
}

/// Two wave problems on `(0, l)` and `(0, L)` with shared data.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundExperiment {
    pub ell: f64,
    pub big_l: f64,
    pub horizon: f64,
    pub eta: BoundaryInput,
    pub u0: Profile,
    pub u1: Profile,
    /// Cells on the shorter interval; the longer one uses the same spacing.
    pub nx: usize,
    /// Fluxes match when their sup gap is below `flux_tol * max(1, sup |flux|)`.
    pub flux_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundOutcome {
    Holds,
    Violated,
    /// `delta0 = 0`: the implication says nothing.
    Vacuous,
    /// The fluxes differ, so the estimate does not apply.
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConsistency {
    pub length_gap: f64,
    pub flux_gap: f64,
    /// Largest discrete energy of either solution, used as `M`.
    pub energy_bound: f64,
    /// `sup |eta|` over `[2l, T - 2l]`.
    pub delta0: f64,
    pub bound: Option<f64>,
    pub outcome: BoundOutcome,
}

/// Solves both problems, measures `M` and `delta0`, and checks the length
/// estimate with `l0 = min(l, L)`, `l1 = max(l, L)`.
pub fn bound_consistency_experiment(e: &BoundExperiment) -> Result<BoundConsistency> {
    let (lo, hi) = if e.ell <= e.big_l {
        (e.ell, e.big_l)
    } else {
        (e.big_l, e.ell)
    };
    if !(e.horizon > 4.0 * hi) {
        return Err(Error::HypothesisViolation(format!(
            "need T > 4 l1, got T = {}, l1 = {hi}",
            e.horizon
        )));
    }
    let nx_hi = ((e.nx as f64) * hi / lo).round() as usize;
    let solve = |len: f64, nx: usize| -> Result<(Signal, f64)> {
        let p = WaveProblem::new(len, e.horizon, e.eta.clone(), e.u0.clone(), e.u1.clone())?;
        let field = wave_fd_solve_unit_courant(&p, nx)?;
        let m = wave_energy(&field).max();
        Ok((boundary_flux_left(&field)?, m))
    };
    let (flux_lo, m_lo) = solve(lo, e.nx)?;
    let (flux_hi, m_hi) = solve(hi, nx_hi)?;

    let times = TimeGrid::spanning(0.0, e.horizon, 4 * e.nx)?;
    let a = flux_lo.resample_cubic(times)?;
    let b = flux_hi.resample_cubic(times)?;
    let flux_gap = a
        .samples()
        .iter()
        .zip(b.samples())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = a.max_abs().max(b.max_abs()).max(1.0);

    let delta0 = e.eta.sup_abs(2.0 * lo, e.horizon - 2.0 * lo, 20_000);
    let energy_bound = m_lo.max(m_hi);
    let length_gap = hi - lo;
    let mut report = BoundConsistency {
        length_gap,
        flux_gap,
        energy_bound,
        delta0,
        bound: None,
        outcome: BoundOutcome::Inapplicable,
    };
    if flux_gap > e.flux_tol * scale {
        return Ok(report);
    }
    if delta0 == 0.0 {
        report.outcome = BoundOutcome::Vacuous;
        return Ok(report);
    }
    let bound = asymptotic_bound(lo, hi, e.horizon, energy_bound.max(f64::MIN_POSITIVE), delta0)?;
    report.bound = Some(bound);
    report.outcome = if length_gap <= bound {
        BoundOutcome::Holds
    } else {
        BoundOutcome::Violated
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fractions() {
        assert_eq!(
            rational_approximation(3.0, MAX_DENOMINATOR, RATIO_TOLERANCE),
            Some((3, 1))
        );
        assert_eq!(
            rational_approximation(1.5, MAX_DENOMINATOR, RATIO_TOLERANCE),
            Some((3, 2))
        );
        assert_eq!(
            rational_approximation(7.0 / 3.0, MAX_DENOMINATOR, RATIO_TOLERANCE),
            Some((7, 3))
        );
        assert_eq!(rational_approximation(PI, MAX_DENOMINATOR, RATIO_TOLERANCE), None);
        assert_eq!(
            rational_approximation(2f64.sqrt(), MAX_DENOMINATOR, RATIO_TOLERANCE),
            None
        );
        // A loose tolerance mistakes pi for 103993/33102.
        assert_eq!(
            rational_approximation(PI, MAX_DENOMINATOR, 1e-9),
            Some((103_993, 33_102))
        );
    }

    #[test]
    fn shared_modes() {
        let p = commensurate_initial_data(2.0, 6.0, 1).unwrap();
        assert_eq!((p.m0, p.n0, p.n1), (3, 1, 3));
        for x in [0.3, 1.1, 4.9] {
            assert_abs_diff_eq!(p.profile().value(x), (PI * x / 2.0).sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(p.profile_on_big().value(x), (3.0 * PI * x / 6.0).sin(), epsilon = 1e-14);
        }
        let p = commensurate_initial_data(2.0, 4.0, 1).unwrap();
        assert_eq!(p.n1, 2);
        assert!(matches!(
            commensurate_initial_data(1.0, PI, 1),
            Err(Error::Incommensurate { .. })
        ));
        assert!(matches!(
            commensurate_initial_data(2.0, 3.0, 1),
            Err(Error::NoSharedMode { k1: 1, m0: 3, n0: 2 })
        ));
        assert_eq!(commensurate_initial_data(2.0, 3.0, 2).unwrap().n1, 3);
        assert!(commensurate_initial_data(2.0, 2.0, 1).is_err());
    }

    #[test]
    fn heat_pair_has_equal_flux() {
        let p = commensurate_initial_data(2.0, 6.0, 1).unwrap();
        assert!(verify_flux_equality(&p, FluxModel::Heat, 5.0, 0.01).unwrap() < 1e-10);
    }

    #[test]
    fn wave_pairs_have_equal_flux() {
        let p = commensurate_initial_data(2.0, 4.0, 1).unwrap();
        for m in [FluxModel::WaveDisplacement, FluxModel::WaveVelocity] {
            assert!(verify_flux_equality(&p, m, 8.0, 0.0).unwrap() < 1e-10);
        }
    }

    #[test]
    fn first_modes_of_unrelated_lengths_differ() {
        // (pi/2) e^{-pi^2 t / 4} against (pi/3) e^{-pi^2 t / 9} at t = 0.1.
        let gap = flux_gap(
            FluxModel::Heat,
            (2.0, &Profile::mode(1, 2.0)),
            (3.0, &Profile::mode(1, 3.0)),
            5.0,
            0.1,
        )
        .unwrap();
        let at = |t: f64| (PI / 2.0 * (-PI * PI * t / 4.0).exp() - PI / 3.0 * (-PI * PI * t / 9.0).exp()).abs();
        assert_abs_diff_eq!(gap, at(0.1), epsilon = 1e-12);
        assert!(gap > 1e-2);
        assert!(flux_gap(FluxModel::Heat, (2.0, &Profile::Zero), (3.0, &Profile::Zero), 5.0, 0.0).is_err());
    }

    #[test]
    fn admissible_length_lists() {
        assert_eq!(admissible_lengths(2.0, 1, 7.0), vec![2.0, 4.0, 6.0]);
        assert_eq!(admissible_lengths(2.0, 2, 5.0), vec![2.0, 3.0, 4.0, 5.0]);
        assert!(admissible_lengths(2.0, 1, 1.0).is_empty());
    }

    #[test]
    fn odd_reflection_preserves_flux() {
        let g = Grid::new(100, 500).unwrap();
        let sine = Profile::sine(1.0, PI / 1.5);
        assert!(symmetric_data_check(1.5, &sine, 1.0, Reflection::Odd, g).unwrap() < 1e-6);
        assert_eq!(
            symmetric_data_check(1.5, &Profile::Zero, 1.0, Reflection::Odd, g).unwrap(),
            0.0
        );
        // Even continuation of a profile with u0(l) = 0 but u0'(l) != 0.
        assert!(symmetric_data_check(1.5, &sine, 1.0, Reflection::Even, g).unwrap() > 1e-2);
    }

    #[test]
    fn trace_ratios() {
        let ells: Vec<f64> = (0..=20).map(|i| 0.1 * 100f64.powf(i as f64 / 20.0)).collect();
        let sine = TraceFamily::Scaled(Profile::sine(1.0, PI));
        let r = trace_constant_probe(&sine, &ells).unwrap();
        // g = sin(pi y): g'(0) = pi, int g^2 = 1/2, int g'^2 = pi^2/2, int g''^2 = pi^4/2.
        let exact = PI / (0.5 * (1.0 + PI * PI + PI.powi(4))).sqrt();
        for v in &r {
            assert_abs_diff_eq!(v.scale_free, exact, epsilon = 1e-6);
            assert!(v.scale_free <= scale_free_trace_bound());
        }

        let one = trace_constant_probe(&TraceFamily::Fixed(Profile::Polynomial(vec![1.0])), &ells).unwrap();
        assert!(one.iter().all(|v| v.standard == 0.0 && v.scale_free == 0.0));

        let x = trace_constant_probe(&TraceFamily::Fixed(Profile::Polynomial(vec![0.0, 1.0])), &ells).unwrap();
        for v in &x {
            let l = v.ell;
            let closed = l.powf(1.5) / (l.powi(3) / 3.0 + l).sqrt();
            assert_abs_diff_eq!(v.standard, closed, epsilon = 1e-6);
            assert!(v.standard <= trace_constant_bound(l));
            assert_abs_diff_eq!(v.scale_free, 3f64.sqrt() / 2.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn direct_inequality_examples() {
        let zero = StandingWaves::single(1, 0.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let r = direct_inequality_check(&zero);
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds());

        let one = StandingWaves::single(1, 0.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        let r = direct_inequality_check(&one);
        assert_abs_diff_eq!(r.lhs, PI * PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 3.0 * PI * PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lhs_quadrature, r.lhs, epsilon = 1e-6);
        assert_abs_diff_eq!(r.rhs_quadrature, r.rhs, epsilon = 1e-6);
        assert!(r.holds());
    }

    #[test]
    fn asymptotic_bound_arithmetic() {
        assert_eq!(asymptotic_bound(1.0, 2.0, 9.0, 1.0, 10.0).unwrap(), 0.09);
        let b = asymptotic_bound(1.0, 2.0, 9.0, 1.0, 20.0).unwrap();
        assert_abs_diff_eq!(b, 0.09 / 4.0, epsilon = 1e-17);
        assert!(matches!(
            asymptotic_bound(1.0, 2.0, 8.0, 1.0, 10.0),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            asymptotic_bound(2.0, 4.0, 17.0, 1.0, 0.0),
            Err(Error::HypothesisViolation(_))
        ));
    }

    fn experiment(ell: f64, big_l: f64, eta: BoundaryInput, u0: Profile) -> BoundExperiment {
        BoundExperiment {
            ell,
            big_l,
            horizon: 4.0 * big_l + 1.0,
            eta,
            u0,
            u1: Profile::Zero,
            nx: 100,
            flux_tol: 1e-6,
        }
    }

    #[test]
    fn bound_outcomes() {
        let p = commensurate_initial_data(2.0, 4.0, 1).unwrap();
        let r = bound_consistency_experiment(&experiment(2.0, 4.0, BoundaryInput::Zero, p.profile())).unwrap();
        assert_eq!(r.outcome, BoundOutcome::Vacuous);
        assert!(r.flux_gap < 1e-9);
        assert_eq!(r.delta0, 0.0);

        let same =
            bound_consistency_experiment(&experiment(2.0, 2.0, BoundaryInput::sin_cubed(3.0), Profile::Zero)).unwrap();
        assert_eq!(same.outcome, BoundOutcome::Holds);
        assert_eq!(same.length_gap, 0.0);
        assert_eq!(same.flux_gap, 0.0);

        let apart =
            bound_consistency_experiment(&experiment(1.0, 2.0, BoundaryInput::sin_cubed(3.0), Profile::Zero)).unwrap();
        assert_eq!(apart.outcome, BoundOutcome::Inapplicable);
        assert!(apart.bound.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn direct_inequality_holds_for_superpositions(
            ell in 0.0f64..3.0,
            width in 0.2f64..4.0,
            t0 in -2.0f64..2.0,
            span in 0.05f64..10.0,
            modes in proptest::collection::vec((1u32..12, -2.0f64..2.0, -2.0f64..2.0), 1..4),
        ) {
            let terms: Vec<ModeTerm> = modes.iter().map(|&(k, a, b)| ModeTerm { k, a, b }).collect();
            let w = StandingWaves::new(ell, ell + width, t0, t0 + span, &terms).unwrap();
            let r = direct_inequality_check(&w);
            prop_assert!(r.holds(), "{r:?}");
            let scale = r.rhs.max(1.0);
            prop_assert!((r.lhs - r.lhs_quadrature).abs() < 1e-6 * scale);
            prop_assert!((r.rhs - r.rhs_quadrature).abs() < 1e-6 * scale);
        }
    }
}
