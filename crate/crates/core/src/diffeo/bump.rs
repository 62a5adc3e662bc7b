use crate::diffeo::arc::IntervalArc;
use crate::error::{Error, Result};
use crate::periodic::PeriodicFunction;

/// Widest plateau `make_normalized_bump` will build, as a fraction of the support.
pub const MAX_PLATEAU_FRACTION: f64 = 0.95;

/// The smooth step `s(x) = σ(x)/(σ(x) + σ(1−x))`, `σ(x) = exp(−1/x)`:
/// `0` for `x ≤ 0`, `1` for `x ≥ 1`, and `s(x) + s(1−x) = 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / x - 1.0 / (1.0 - x)).exp())
    }
}

pub fn smooth_step_derivative(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let s = smooth_step(x);
    let y = 1.0 - x;
    s * (1.0 - s) * (1.0 / (x * x) + 1.0 / (y * y))
}

/// A smooth cutoff: `0` outside `support`, constant `height` on the plateau,
/// smooth-step ramps in between. Evaluated in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpFunction {
    support: IntervalArc,
    /// Plateau end points, lifted into `[a, a + 2π)` of the support.
    rise_end: f64,
    fall_start: f64,
    height: f64,
}

impl BumpFunction {
    fn raw(support: IntervalArc, rise_end: f64, fall_start: f64, height: f64) -> Self {
        Self {
            support,
            rise_end,
            fall_start,
            height,
        }
    }

    pub fn support(&self) -> IntervalArc {
        self.support
    }

    /// Plateau `[p_a, p_b]` in the lifted coordinates of the support; may be a
    /// single point.
    pub fn plateau(&self) -> (f64, f64) {
        (self.rise_end, self.fall_start)
    }

    pub fn max_value(&self) -> f64 {
        self.height
    }

    pub fn value(&self, t: f64) -> f64 {
        let (a, b) = (self.support.start(), self.support.end());
        let x = self.support.lift(t);
        if x <= a || x >= b {
            0.0
        } else if x < self.rise_end {
            self.height * smooth_step((x - a) / (self.rise_end - a))
        } else if x <= self.fall_start {
            self.height
        } else {
            self.height * smooth_step((b - x) / (b - self.fall_start))
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (a, b) = (self.support.start(), self.support.end());
        let x = self.support.lift(t);
        if x <= a || x >= b {
            0.0
        } else if x < self.rise_end {
            let w = self.rise_end - a;
            self.height * smooth_step_derivative((x - a) / w) / w
        } else if x <= self.fall_start {
            0.0
        } else {
            let w = b - self.fall_start;
            -self.height * smooth_step_derivative((b - x) / w) / w
        }
    }

    /// Exact full-period integral. Each ramp contributes half its width.
    pub fn integral(&self) -> f64 {
        self.height * 0.5 * (self.support.length() + self.fall_start - self.rise_end)
    }

    /// Samples on an `n`-point grid.
    pub fn to_periodic(&self, n: usize) -> Result<PeriodicFunction> {
        PeriodicFunction::from_fn(n, |t| self.value(t))
    }
}

/// Bump equal to `1` on the closed `plateau` and vanishing outside `support`.
pub fn make_bump(support: IntervalArc, plateau: IntervalArc) -> Result<BumpFunction> {
    let pa = support.lift(plateau.start());
    let pb = pa + plateau.length();
    if !(pa > support.start() && pb < support.end()) {
        return Err(Error::Geometry(format!(
            "plateau ({}, {}) is not strictly inside support ({}, {})",
            plateau.start(),
            plateau.end(),
            support.start(),
            support.end()
        )));
    }
    Ok(BumpFunction::raw(support, pa, pb, 1.0))
}

/// Bump with values in `[0, 1]` and integral `target`, symmetric about the
/// midpoint of `support`. The plateau is widened until the integral reaches
/// `target`; below half the support length a point plateau is scaled down.
pub fn make_normalized_bump(support: IntervalArc, target: f64) -> Result<BumpFunction> {
    let len = support.length();
    if !(target > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target integral {target} must be positive"
        )));
    }
    let max = 0.5 * len * (1.0 + MAX_PLATEAU_FRACTION);
    let plateau = 2.0 * target - len;
    if plateau > MAX_PLATEAU_FRACTION * len {
        return Err(Error::Mass { target, max });
    }
    let mid = support.midpoint();
    let bump = if plateau > 0.0 {
        BumpFunction::raw(support, mid - 0.5 * plateau, mid + 0.5 * plateau, 1.0)
    } else {
        BumpFunction::raw(support, mid, mid, target / (0.5 * len))
    };
    Ok(bump)
}
