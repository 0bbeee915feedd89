//! Text forms of boundary inputs and initial profiles used in config files.
//!
//! Numbers may carry a `pi` suffix (`0.5pi`). Forms:
//!
//! | kind    | form                         | meaning                    |
//! |---------|------------------------------|----------------------------|
//! | eta     | `zero`                       | `0`                        |
//! | eta     | `sin3:A`                     | `A sin(t)^3`               |
//! | eta     | `sinpow:A,W,P`               | `A sin(W t)^P`             |
//! | eta     | `poly:c0,c1,...`             | `c0 + c1 t + ...`          |
//! | profile | `zero`                       | `0`                        |
//! | profile | `sine:A,K`                   | `A sin(K x)`               |
//! | profile | `poly:c0,c1,...`             | `c0 + c1 x + ...`          |
//! | profile | `bump:A,C,W`                 | `A (1 - ((x-C)/W)^2)^3`    |

use std::f64::consts::PI;

use interval_probe::{BoundaryInput, Profile};

pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (body, scale) = match s.strip_suffix("pi") {
        Some("") | Some("+") => return Ok(PI),
        Some("-") => return Ok(-PI),
        Some(b) => (b.trim(), PI),
        None => (s, 1.0),
    };
    let v: f64 = body.parse().map_err(|_| format!("not a number: {s:?}"))?;
    let v = v * scale;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_number).collect()
}

fn split_form(s: &str) -> (&str, &str) {
    match s.trim().split_once(':') {
        Some((k, rest)) => (k.trim(), rest.trim()),
        None => (s.trim(), ""),
    }
}

fn args(kind: &str, rest: &str, n: usize) -> Result<Vec<f64>, String> {
    let v = parse_list(rest)?;
    if v.len() != n {
        return Err(format!("{kind} takes {n} numbers, got {}", v.len()));
    }
    Ok(v)
}

pub fn parse_eta(s: &str) -> Result<BoundaryInput, String> {
    let (kind, rest) = split_form(s);
    match kind {
        "zero" => Ok(BoundaryInput::Zero),
        "sin3" => Ok(BoundaryInput::sin_cubed(args(kind, rest, 1)?[0])),
        "sinpow" => {
            let v = args(kind, rest, 3)?;
            if v[2].fract() != 0.0 || v[2] < 0.0 {
                return Err(format!("sinpow power must be a nonnegative integer, got {}", v[2]));
            }
            Ok(BoundaryInput::SinePower {
                amplitude: v[0],
                frequency: v[1],
                power: v[2] as i32,
            })
        }
        "poly" => Ok(BoundaryInput::Polynomial(parse_list(rest)?)),
        _ => Err(format!("unknown boundary input {s:?}")),
    }
}

pub fn parse_profile(s: &str) -> Result<Profile, String> {
    let (kind, rest) = split_form(s);
    match kind {
        "zero" => Ok(Profile::Zero),
        "sine" => {
            let v = args(kind, rest, 2)?;
            Ok(Profile::sine(v[0], v[1]))
        }
        "poly" => Ok(Profile::Polynomial(parse_list(rest)?)),
        "bump" => {
            let v = args(kind, rest, 3)?;
            if v[2] <= 0.0 {
                return Err("bump half width must be positive".into());
            }
            Ok(Profile::Bump {
                amplitude: v[0],
                center: v[1],
                half_width: v[2],
            })
        }
        _ => Err(format!("unknown profile {s:?}")),
    }
}
