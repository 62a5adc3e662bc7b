//! Operand syntax.
//!
//! ```text
//! real      := [window "*"] modes
//! modes     := "[" ("(" k "," a "," b ")"),* "]"      Σ a cos kt + b sin kt
//! window    := "bump(" start "," end "," plateau_start "," plateau_end ")"
//!
//! diffeo    := "id" | "rot:" s | "fourier:" real       t ↦ t + f(t)
//! field     := "fourier:" real | "mode:" m              f(t) or e^{imt}
//! algebra   := ["su2:"] real ";" real ";" real          Σ f_j(t) iσ_j
//! loop      := "id" | "exp:" algebra
//! ```

use circle_groups::diffeo::{make_bump, BumpFunction, CircleDiffeo, IntervalArc};
use circle_groups::loop_group::{exp_loop, LoopAlgebraElement, LoopElement};
use circle_groups::periodic::PeriodicFunction;
use circle_groups::sample::fourier_sum;
use circle_groups::{Error, Result};
use num_complex::Complex64;

/// A windowed trigonometric polynomial.
#[derive(Clone, Debug)]
pub struct RealSpec {
    window: Option<BumpFunction>,
    modes: Vec<(u32, f64, f64)>,
}

impl RealSpec {
    pub fn value(&self, t: f64) -> f64 {
        let w = self.window.as_ref().map_or(1.0, |b| b.value(t));
        if w == 0.0 {
            0.0
        } else {
            w * fourier_sum(&self.modes, t)
        }
    }

    pub fn function(&self, n: usize) -> Result<PeriodicFunction> {
        PeriodicFunction::from_fn(n, |t| self.value(t))
    }
}

fn parse_error(what: &str, text: &str) -> Error {
    Error::Parse(format!("malformed {what} {text:?}"))
}

fn parse_numbers(text: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_error(what, text))?;
    if values.len() != count || values.iter().any(|v| !v.is_finite()) {
        return Err(parse_error(what, text));
    }
    Ok(values)
}

fn parse_modes(text: &str) -> Result<Vec<(u32, f64, f64)>> {
    let json = text.trim().replace('(', "[").replace(')', "]");
    let modes: Vec<(u32, f64, f64)> =
        serde_json::from_str(&json).map_err(|_| parse_error("mode list", text))?;
    if modes
        .iter()
        .any(|(_, a, b)| !a.is_finite() || !b.is_finite())
    {
        return Err(parse_error("mode list", text));
    }
    Ok(modes)
}

fn parse_window(text: &str) -> Result<BumpFunction> {
    let inner = text
        .trim()
        .strip_prefix("bump(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| parse_error("window", text))?;
    let v = parse_numbers(inner, 4, "window")?;
    make_bump(IntervalArc::new(v[0], v[1])?, IntervalArc::new(v[2], v[3])?)
}

pub fn parse_real(text: &str) -> Result<RealSpec> {
    let text = text.trim();
    match text.split_once('*') {
        Some((window, modes)) => Ok(RealSpec {
            window: Some(parse_window(window)?),
            modes: parse_modes(modes)?,
        }),
        None => Ok(RealSpec {
            window: None,
            modes: parse_modes(text)?,
        }),
    }
}

pub fn parse_diffeo(text: &str, n: usize) -> Result<CircleDiffeo> {
    let text = text.trim();
    if text == "id" {
        return CircleDiffeo::identity(n);
    }
    if let Some(s) = text.strip_prefix("rot:") {
        let s = parse_numbers(s, 1, "rotation")?[0];
        return CircleDiffeo::rotation(n, s);
    }
    if let Some(rest) = text.strip_prefix("fourier:") {
        return CircleDiffeo::new(parse_real(rest)?.function(n)?);
    }
    Err(Error::Parse(format!(
        "unknown diffeomorphism {text:?}; expected id, rot:S or fourier:[(k,a,b),...]"
    )))
}

pub fn parse_field(text: &str, n: usize) -> Result<PeriodicFunction<Complex64>> {
    let text = text.trim();
    if let Some(m) = text.strip_prefix("mode:") {
        let m: i32 = m.trim().parse().map_err(|_| parse_error("mode", text))?;
        return PeriodicFunction::from_fn(n, |t| Complex64::from_polar(1.0, f64::from(m) * t));
    }
    if let Some(rest) = text.strip_prefix("fourier:") {
        let spec = parse_real(rest)?;
        return PeriodicFunction::from_fn(n, |t| Complex64::new(spec.value(t), 0.0));
    }
    Err(Error::Parse(format!(
        "unknown vector field {text:?}; expected fourier:[(k,a,b),...] or mode:M"
    )))
}

pub fn parse_algebra(text: &str, n: usize) -> Result<LoopAlgebraElement> {
    let text = text.trim();
    let body = text.strip_prefix("su2:").unwrap_or(text);
    let parts: Vec<&str> = body.split(';').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(Error::Parse(format!(
            "loop {text:?} needs three components separated by ';'"
        )));
    };
    let f = [a, b, c].map(|p| parse_real(p).and_then(|s| s.function(n)));
    let [f1, f2, f3] = f;
    LoopAlgebraElement::from_su2_components([&f1?, &f2?, &f3?])
}

pub fn parse_loop(text: &str, n: usize) -> Result<LoopElement> {
    let text = text.trim();
    if text == "id" {
        return LoopElement::identity(n, 2);
    }
    match text.strip_prefix("exp:") {
        Some(rest) => Ok(exp_loop(&parse_algebra(rest, n)?)),
        None => Err(Error::Parse(format!(
            "unknown loop {text:?}; expected id or exp:C1;C2;C3"
        ))),
    }
}
