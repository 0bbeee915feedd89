//! Initial data `u0(x)`, `u1(x)` and boundary inputs `eta(t)`.
//!
//! Closed forms are carried as tags with parameters so that a solver working
//! on a different candidate length re-evaluates them exactly instead of
//! interpolating a fixed sampling. Sampled profiles interpolate linearly.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::signal::{trapezoid_uniform, Signal};

/// A function of `x` on `[0, l]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    /// `amplitude * sin(frequency * x + phase)`
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// Coefficients in ascending powers of `x`.
    Polynomial(Vec<f64>),
    /// `amplitude * (1 - s^2)^3` for `|s| < 1`, `s = (x - center) / half_width`; zero elsewhere. C² with compact support.
    Bump {
        amplitude: f64,
        center: f64,
        half_width: f64,
    },
    Sum(Vec<Profile>),
    /// `base` on `[0, about]`, reflected about `x = about` beyond it.
    /// `odd` reflection gives `-base(2 about - x)`, otherwise `+base(2 about - x)`.
    Mirrored {
        base: Box<Profile>,
        about: f64,
        odd: bool,
    },
    /// Values at `values.len()` equispaced nodes on `[0, length]`, linearly interpolated.
    Sampled {
        values: Vec<f64>,
        length: f64,
    },
}

impl Profile {
    /// `sin(k pi x / l)`, the k-th Dirichlet mode of `(0, l)` (unnormalised).
    pub fn mode(k: u32, ell: f64) -> Self {
        Profile::Sine {
            amplitude: 1.0,
            frequency: k as f64 * PI / ell,
            phase: 0.0,
        }
    }

    pub fn sine(amplitude: f64, frequency: f64) -> Self {
        Profile::Sine {
            amplitude,
            frequency,
            phase: 0.0,
        }
    }

    pub fn sampled(values: Vec<f64>, length: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(invalid(format!(
                "a sampled profile needs at least 3 values, got {}",
                values.len()
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid(format!(
                "sampled profile length must be positive, got {length}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("sampled profile contains non-finite values"));
        }
        Ok(Profile::Sampled { values, length })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Zero => true,
            Profile::Sine { amplitude, .. } | Profile::Bump { amplitude, .. } => *amplitude == 0.0,
            Profile::Polynomial(c) => c.iter().all(|&v| v == 0.0),
            Profile::Sum(parts) => parts.iter().all(Profile::is_zero),
            Profile::Mirrored { base, .. } => base.is_zero(),
            Profile::Sampled { values, .. } => values.iter().all(|&v| v == 0.0),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        match self {
            Profile::Sampled { .. } => false,
            Profile::Sum(parts) => parts.iter().all(Profile::is_closed_form),
            Profile::Mirrored { base, .. } => base.is_closed_form(),
            _ => true,
        }
    }

    /// Fails when the profile cannot be evaluated on all of `[0, ell]`.
    pub fn check_domain(&self, ell: f64) -> Result<()> {
        match self {
            Profile::Sampled { length, .. } if ell > length * (1.0 + 1e-12) => Err(invalid(format!(
                "sampled profile covers [0, {length}] but [0, {ell}] was requested"
            ))),
            Profile::Sum(parts) => parts.iter().try_for_each(|p| p.check_domain(ell)),
            Profile::Mirrored { base, about, .. } => base.check_domain(ell.min(*about)),
            Profile::Bump { half_width, .. } if *half_width <= 0.0 => Err(invalid("bump half-width must be positive")),
            _ => Ok(()),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * x + phase).sin(),
            Profile::Polynomial(c) => horner(c, x),
            Profile::Bump {
                amplitude,
                center,
                half_width,
            } => {
                let s = (x - center) / half_width;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - s * s).powi(3)
                }
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.value(x)).sum(),
            Profile::Mirrored { base, about, odd } => {
                if x <= *about {
                    base.value(x)
                } else {
                    let v = base.value(2.0 * about - x);
                    if *odd {
                        -v
                    } else {
                        v
                    }
                }
            }
            Profile::Sampled { values, length } => {
                let n = values.len() - 1;
                let s = (x / length * n as f64).clamp(0.0, n as f64);
                let j = (s.floor() as usize).min(n - 1);
                let w = s - j as f64;
                (1.0 - w) * values[j] + w * values[j + 1]
            }
        }
    }

    /// `d^order/dx^order` of a closed-form profile.
    pub fn derivative(&self, x: f64, order: u32) -> Result<f64> {
        if order == 0 {
            return Ok(self.value(x));
        }
        match self {
            Profile::Zero => Ok(0.0),
            Profile::Sine {
                amplitude,
                frequency,
                phase,
            } => {
                Ok(amplitude * frequency.powi(order as i32) * (frequency * x + phase + order as f64 * FRAC_PI_2).sin())
            }
            Profile::Polynomial(c) => {
                let mut d = c.clone();
                for _ in 0..order {
                    d = poly_derivative(&d);
                }
                Ok(horner(&d, x))
            }
            Profile::Bump {
                amplitude,
                center,
                half_width,
            } => {
                let w = *half_width;
                let s = (x - center) / w;
                if s.abs() >= 1.0 {
                    return Ok(0.0);
                }
                let q = 1.0 - s * s;
                match order {
                    1 => Ok(-6.0 * amplitude * s * q * q / w),
                    2 => Ok(-6.0 * amplitude * q * (1.0 - 5.0 * s * s) / (w * w)),
                    _ => Err(invalid("bump profiles only carry derivatives up to order 2")),
                }
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.derivative(x, order)).sum(),
            Profile::Mirrored { base, about, odd } => {
                if x <= *about {
                    base.derivative(x, order)
                } else {
                    let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
                    let sign = if *odd { -sign } else { sign };
                    Ok(sign * base.derivative(2.0 * about - x, order)?)
                }
            }
            Profile::Sampled { .. } => Err(invalid("sampled profiles carry no derivative information")),
        }
    }

    /// The profile `x -> self(x * factor)`.
    pub fn rescaled(&self, factor: f64) -> Self {
        match self {
            Profile::Zero => Profile::Zero,
            Profile::Sine {
                amplitude,
                frequency,
                phase,
            } => Profile::Sine {
                amplitude: *amplitude,
                frequency: frequency * factor,
                phase: *phase,
            },
            Profile::Polynomial(c) => {
                let mut scale = 1.0;
                Profile::Polynomial(
                    c.iter()
                        .map(|v| {
                            let out = v * scale;
                            scale *= factor;
                            out
                        })
                        .collect(),
                )
            }
            Profile::Bump {
                amplitude,
                center,
                half_width,
            } => Profile::Bump {
                amplitude: *amplitude,
                center: center / factor,
                half_width: half_width / factor,
            },
            Profile::Sum(parts) => Profile::Sum(parts.iter().map(|p| p.rescaled(factor)).collect()),
            Profile::Mirrored { base, about, odd } => Profile::Mirrored {
                base: Box::new(base.rescaled(factor)),
                about: about / factor,
                odd: *odd,
            },
            Profile::Sampled { values, length } => Profile::Sampled {
                values: values.clone(),
                length: length / factor,
            },
        }
    }

    /// Exact coefficients `(u, phi_n)_l`, `phi_n = sqrt(2/l) sin(n pi x / l)`,
    /// when the profile is a finite combination of Dirichlet modes of `(0, l)`.
    pub fn exact_mode_coefficients(&self, ell: f64, n_modes: usize) -> Option<Vec<f64>> {
        let terms = self.exact_mode_terms(ell)?;
        let mut out = vec![0.0; n_modes];
        for (n, c) in terms {
            if n <= n_modes {
                out[n - 1] += c;
            }
        }
        Some(out)
    }

    /// Sparse `(n, c_n)` pairs of an exact mode combination, `None` otherwise.
    pub fn exact_mode_terms(&self, ell: f64) -> Option<Vec<(usize, f64)>> {
        let mut out = Vec::new();
        if self.accumulate_modes(ell, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    fn accumulate_modes(&self, ell: f64, out: &mut Vec<(usize, f64)>) -> bool {
        match self {
            Profile::Zero => true,
            Profile::Sine {
                amplitude,
                frequency,
                phase,
            } => {
                if *amplitude == 0.0 {
                    return true;
                }
                if *phase != 0.0 {
                    return false;
                }
                let k_real = frequency * ell / PI;
                let k = k_real.round();
                if k == 0.0 || (k_real - k).abs() > 1e-12 * k.abs().max(1.0) {
                    return false;
                }
                let (k, amp) = if k < 0.0 { (-k, -amplitude) } else { (k, *amplitude) };
                out.push((k as usize, amp * (ell / 2.0).sqrt()));
                true
            }
            Profile::Sum(parts) => parts.iter().all(|p| p.accumulate_modes(ell, out)),
            other => other.is_zero(),
        }
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &v)| i as f64 * v).collect()
}

/// Trapezoid approximation of `(f, g)_l = int_0^l f g dx` with `n_quad + 1` nodes.
pub fn inner_product(f: &Profile, g: &Profile, ell: f64, n_quad: usize) -> Result<f64> {
    if n_quad < 2 {
        return Err(invalid(format!("n_quad must be at least 2, got {n_quad}")));
    }
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(invalid(format!("length must be positive, got {ell}")));
    }
    f.check_domain(ell)?;
    g.check_domain(ell)?;
    let h = ell / n_quad as f64;
    let vals: Vec<f64> = (0..=n_quad)
        .map(|i| {
            let x = i as f64 * h;
            f.value(x) * g.value(x)
        })
        .collect();
    Ok(trapezoid_uniform(&vals, h))
}

/// Trapezoid approximation of `int_0^l |d^order f/dx^order|^2 dx`.
pub(crate) fn squared_norm(f: &Profile, ell: f64, order: u32, n_quad: usize) -> Result<f64> {
    let h = ell / n_quad as f64;
    let vals = (0..=n_quad)
        .map(|i| f.derivative(i as f64 * h, order).map(|v| v * v))
        .collect::<Result<Vec<_>>>()?;
    Ok(trapezoid_uniform(&vals, h))
}

/// The Dirichlet input `eta(t)` at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryInput {
    Zero,
    /// `amplitude * sin(frequency * t)^power`
    SinePower {
        amplitude: f64,
        frequency: f64,
        power: i32,
    },
    /// Coefficients in ascending powers of `t`.
    Polynomial(Vec<f64>),
    /// Cubic interpolation inside the span; held at the end values outside.
    Sampled(Signal),
}

impl BoundaryInput {
    pub fn sin_cubed(amplitude: f64) -> Self {
        BoundaryInput::SinePower {
            amplitude,
            frequency: 1.0,
            power: 3,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BoundaryInput::Zero => true,
            BoundaryInput::SinePower { amplitude, .. } => *amplitude == 0.0,
            BoundaryInput::Polynomial(c) => c.iter().all(|&v| v == 0.0),
            BoundaryInput::Sampled(s) => s.samples().iter().all(|&v| v == 0.0),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            BoundaryInput::Zero => 0.0,
            BoundaryInput::SinePower {
                amplitude,
                frequency,
                power,
            } => amplitude * (frequency * t).sin().powi(*power),
            BoundaryInput::Polynomial(c) => horner(c, t),
            BoundaryInput::Sampled(s) => {
                let t = t.clamp(s.t0(), s.t_end());
                s.interpolate_cubic(t).unwrap_or(0.0)
            }
        }
    }

    /// `sup |eta|` over `[a, b]`, sampled at `n + 1` points.
    pub fn sup_abs(&self, a: f64, b: f64, n: usize) -> f64 {
        if b < a {
            return 0.0;
        }
        (0..=n)
            .map(|i| self.value(a + (b - a) * i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sine_modes_are_orthogonal() {
        let ell = 2.0;
        let s1 = Profile::mode(1, ell);
        let s2 = Profile::mode(2, ell);
        assert_abs_diff_eq!(inner_product(&s1, &s1, ell, 2000).unwrap(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(inner_product(&s1, &s2, ell, 2000).unwrap(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn parabola_against_mode_one() {
        // Integration by parts: int_0^l x(l - x) sin(pi x / l) dx = 4 l^3 / pi^3.
        let ell: f64 = 2.0;
        let exact = 5.0 * 4.0 * ell.powi(3) / PI.powi(3);
        assert_abs_diff_eq!(exact, 160.0 / PI.powi(3), epsilon = 1e-12);
        let u0 = Profile::Polynomial(vec![0.0, 10.0, -5.0]);
        let got = inner_product(&u0, &Profile::mode(1, ell), ell, 2000).unwrap();
        assert_abs_diff_eq!(got, exact, epsilon = 1e-6);
    }

    #[test]
    fn inner_product_rejects_coarse_quadrature() {
        assert!(inner_product(&Profile::Zero, &Profile::Zero, 1.0, 1).is_err());
    }

    #[test]
    fn derivatives_of_closed_forms() {
        let s = Profile::sine(2.0, 3.0);
        assert_abs_diff_eq!(s.derivative(0.4, 1).unwrap(), 6.0 * (1.2f64).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.derivative(0.4, 2).unwrap(), -18.0 * (1.2f64).sin(), epsilon = 1e-13);
        let p = Profile::Polynomial(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.derivative(2.0, 1).unwrap(), 14.0);
        assert_eq!(p.derivative(2.0, 2).unwrap(), 6.0);
        assert_eq!(p.derivative(2.0, 3).unwrap(), 0.0);
        let b = Profile::Bump {
            amplitude: 1.0,
            center: 0.5,
            half_width: 0.25,
        };
        let h = 1e-5;
        for &x in &[0.3, 0.45, 0.6, 0.7] {
            let fd = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(b.derivative(x, 1).unwrap(), fd, epsilon = 1e-6);
            let fd2 = (b.value(x + h) - 2.0 * b.value(x) + b.value(x - h)) / (h * h);
            assert_abs_diff_eq!(b.derivative(x, 2).unwrap(), fd2, epsilon = 1e-3);
        }
    }

    #[test]
    fn rescaling_substitutes_the_argument() {
        let p = Profile::Sum(vec![
            Profile::Polynomial(vec![0.5, -1.0, 2.0]),
            Profile::sine(1.5, 2.0),
            Profile::Bump {
                amplitude: 1.0,
                center: 0.4,
                half_width: 0.2,
            },
        ]);
        let q = p.rescaled(0.25);
        for i in 0..20 {
            let x = i as f64 * 0.1;
            assert_abs_diff_eq!(q.value(x), p.value(0.25 * x), epsilon = 1e-13);
        }
    }

    #[test]
    fn exact_mode_detection() {
        let ell = 2.0;
        let c = Profile::mode(1, ell).exact_mode_coefficients(ell, 4).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-15);
        assert_eq!(&c[1..], &[0.0, 0.0, 0.0]);
        // sin(pi x / 2) is mode 3 on (0, 6).
        let c = Profile::sine(1.0, PI / 2.0).exact_mode_coefficients(6.0, 4).unwrap();
        assert_abs_diff_eq!(c[2], 3f64.sqrt(), epsilon = 1e-14);
        assert!(Profile::sine(1.0, 1.0).exact_mode_coefficients(2.0, 4).is_none());
        assert!(Profile::Polynomial(vec![0.0, 1.0])
            .exact_mode_coefficients(2.0, 4)
            .is_none());
    }

    #[test]
    fn mirrored_profiles() {
        let base = Profile::mode(1, 1.0);
        let odd = Profile::Mirrored {
            base: Box::new(base.clone()),
            about: 1.0,
            odd: true,
        };
        let even = Profile::Mirrored {
            base: Box::new(base),
            about: 1.0,
            odd: false,
        };
        for i in 0..=20 {
            let x = i as f64 * 0.1;
            assert_abs_diff_eq!(odd.value(x), (PI * x).sin(), epsilon = 1e-14);
            assert_abs_diff_eq!(even.value(x), (PI * x).sin().abs(), epsilon = 1e-14);
        }
    }

    #[test]
    fn sampled_profile_interpolates() {
        let p = Profile::sampled(vec![0.0, 1.0, 0.0], 2.0).unwrap();
        assert_eq!(p.value(0.5), 0.5);
        assert_eq!(p.value(1.5), 0.5);
        assert!(p.check_domain(3.0).is_err());
        assert!(p.derivative(0.5, 1).is_err());
        assert!(Profile::sampled(vec![0.0, 1.0], 2.0).is_err());
    }

    #[test]
    fn boundary_inputs() {
        let eta = BoundaryInput::sin_cubed(5.0);
        assert_abs_diff_eq!(eta.value(1.0), 5.0 * 1f64.sin().powi(3), epsilon = 1e-15);
        let eta = BoundaryInput::Polynomial(vec![0.0, 0.4, 0.2]);
        assert_abs_diff_eq!(eta.value(3.0), 0.2 * 3.0 * 5.0, epsilon = 1e-14);
        assert!(BoundaryInput::Zero.is_zero());
        assert_abs_diff_eq!(
            BoundaryInput::sin_cubed(3.0).sup_abs(0.0, 4.0, 4000),
            3.0,
            epsilon = 1e-6
        );
    }

    proptest::proptest! {
        #[test]
        fn inner_product_is_symmetric(a in -3.0..3.0f64, w in 0.1..8.0f64, c in -2.0..2.0f64, ell in 0.2..5.0f64) {
            let f = Profile::sine(a, w);
            let g = Profile::Polynomial(vec![c, 1.0, -0.5]);
            let fg = inner_product(&f, &g, ell, 257).unwrap();
            let gf = inner_product(&g, &f, ell, 257).unwrap();
            proptest::prop_assert_eq!(fg.to_bits(), gf.to_bits());
        }
    }
}
