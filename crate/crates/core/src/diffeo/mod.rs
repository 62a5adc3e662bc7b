//! Orientation-preserving circle diffeomorphisms on the universal cover,
//! interval arcs and covers, and smooth cutoff functions.

pub mod arc;
pub mod bump;

use std::f64::consts::TAU;
use std::fmt;

pub use arc::{wrap, CoverConfig, IntervalArc};
pub use bump::{make_bump, make_normalized_bump, smooth_step, BumpFunction};

use crate::error::{Error, Result};
use crate::periodic::{grid_point, Interpolant, PeriodicFunction, DEFAULT_TAIL_TOL};

/// Default threshold below which `|γ(t) − t|` counts as fixed.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-10;

/// Residual accepted by pointwise inversion.
pub const INVERSE_TOL: f64 = 1e-12;

/// A lift `ℝ → ℝ` of a circle map, evaluated pointwise.
pub trait LiftedMap {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
}

/// Solves `f(s) = y` for increasing `f` on the bracket `[lo, hi]` by Newton
/// steps, falling back to bisection whenever a step leaves the bracket.
pub fn invert_monotone(map: &impl LiftedMap, y: f64, guess: f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut s = guess.clamp(lo, hi);
    let mut best = (f64::INFINITY, s);
    for _ in 0..200 {
        let r = map.value(s) - y;
        if r.abs() < best.0 {
            best = (r.abs(), s);
        }
        if r.abs() <= 1e-15 * (1.0 + y.abs()) {
            return Ok(s);
        }
        if r < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let d = map.derivative(s);
        let next = s - r / d;
        s = if d > 0.0 && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * (1.0 + s.abs()) {
            break;
        }
    }
    if best.0 < INVERSE_TOL {
        Ok(best.1)
    } else {
        Err(Error::Convergence {
            t: y,
            residual: best.0,
        })
    }
}

/// Numerical support of a diffeomorphism.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support {
    Empty,
    Full,
    Arc(IntervalArc),
}

impl Support {
    /// Whether the support lies in the closed arc `arc`.
    pub fn is_within(&self, arc: &IntervalArc) -> bool {
        match self {
            Support::Empty => true,
            Support::Full => false,
            Support::Arc(s) => arc.contains_arc(s),
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Empty => write!(f, "empty"),
            Support::Full => write!(f, "full"),
            Support::Arc(a) => write!(f, "({:.6}, {:.6})", a.start(), a.end()),
        }
    }
}

/// `γ(t) = t + p(t)` with `p` periodic and `γ′ > 0` on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleDiffeo {
    periodic: PeriodicFunction,
}

impl CircleDiffeo {
    /// Validates `1 + p′ > 0` at every grid point.
    pub fn new(periodic_part: PeriodicFunction) -> Result<Self> {
        let d = periodic_part.derivative(1)?;
        let n = d.len();
        if let Some((k, v)) = d
            .samples()
            .iter()
            .enumerate()
            .map(|(k, v)| (k, 1.0 + v))
            .find(|(_, v)| !(*v > 0.0))
        {
            return Err(Error::NotDiffeomorphism {
                t: grid_point(n, k),
                derivative: v,
            });
        }
        Ok(Self {
            periodic: periodic_part,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(PeriodicFunction::zeros(n)?)
    }

    /// `t ↦ t + s`.
    pub fn rotation(n: usize, s: f64) -> Result<Self> {
        Self::new(PeriodicFunction::constant(n, s)?)
    }

    /// `γ(t) = t + p(t)` for a 2π-periodic `p`.
    pub fn from_fn(n: usize, p: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(PeriodicFunction::from_fn(n, p)?)
    }

    /// `γ(t) = t + Σ a_k cos kt + b_k sin kt`.
    pub fn from_fourier(n: usize, modes: &[(u32, f64, f64)]) -> Result<Self> {
        Self::from_fn(n, |t| {
            modes
                .iter()
                .map(|&(k, a, b)| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
                .sum()
        })
    }

    pub fn periodic_part(&self) -> &PeriodicFunction {
        &self.periodic
    }

    pub fn len(&self) -> usize {
        self.periodic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periodic.is_empty()
    }

    /// `γ(t)` via the trigonometric interpolant.
    pub fn eval(&self, t: f64) -> f64 {
        t + self.periodic.eval(t)
    }

    /// `γ(t_k)` at the grid points.
    pub fn samples(&self) -> Vec<f64> {
        let n = self.len();
        self.periodic
            .samples()
            .iter()
            .enumerate()
            .map(|(k, p)| grid_point(n, k) + p)
            .collect()
    }

    /// `γ′` as a periodic function.
    pub fn derivative(&self) -> PeriodicFunction {
        let d = self.periodic.derivative(1).expect("order 1 is valid");
        d.map(|v| 1.0 + v)
    }

    /// `sup |γ(t) − t|` over the grid.
    pub fn displacement(&self) -> f64 {
        self.periodic.sup_norm()
    }

    /// `sup |γ′(t) − 1|` over the grid.
    pub fn stretch(&self) -> f64 {
        self.periodic
            .derivative(1)
            .expect("order 1 is valid")
            .sup_norm()
    }

    /// Sup-norm distance between the periodic parts.
    pub fn distance(&self, other: &CircleDiffeo) -> Result<f64> {
        Ok(self.periodic.sub(&other.periodic)?.sup_norm())
    }

    /// Fast pointwise evaluator for off-grid points.
    pub fn evaluator(&self) -> DiffeoEvaluator {
        let dp = self.periodic.derivative(1).expect("order 1 is valid");
        DiffeoEvaluator {
            p: self.periodic.interpolant(),
            dp: dp.interpolant(),
            sup: self.displacement(),
        }
    }

    /// `self ∘ other`, gated by the default tail tolerance.
    pub fn compose(&self, other: &CircleDiffeo) -> Result<CircleDiffeo> {
        self.compose_with_tol(other, DEFAULT_TAIL_TOL)
    }

    pub fn compose_with_tol(&self, other: &CircleDiffeo, tail_tol: f64) -> Result<CircleDiffeo> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let outer = self.periodic.interpolant();
        let samples = other
            .periodic
            .samples()
            .iter()
            .enumerate()
            .map(|(k, &q)| {
                let inner = if q == 0.0 {
                    self.periodic.samples()[k]
                } else {
                    outer.eval(grid_point(self.len(), k) + q)
                };
                q + inner
            })
            .collect();
        let p = PeriodicFunction::from_samples(samples)?;
        p.check_tail(tail_tol)?;
        Self::new(p)
    }

    /// Pointwise inverse, solving `γ(s) = t_k` at every grid point.
    pub fn inverse(&self) -> Result<CircleDiffeo> {
        let ev = self.evaluator();
        let n = self.len();
        let samples = (0..n)
            .map(|k| {
                let t = grid_point(n, k);
                ev.inverse(t).map(|s| s - t)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(PeriodicFunction::from_samples(samples)?)
    }

    /// Smallest arc holding every grid point with `|γ(t) − t| > tol`,
    /// widened by one grid cell on each side.
    pub fn support(&self, tol: f64) -> Support {
        support_of_samples(self.periodic.samples(), tol)
    }

    /// CSV of `t, γ(t)` at the grid points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        let n = self.len();
        for (k, v) in self.samples().into_iter().enumerate() {
            out.push_str(&format!("{:.16e},{v:.16e}\n", grid_point(n, k)));
        }
        out
    }
}

/// Numerical support of grid samples of `γ − id` (or any displacement).
pub fn support_of_samples(displacement: &[f64], tol: f64) -> Support {
    let n = displacement.len();
    let moved: Vec<bool> = displacement.iter().map(|v| v.abs() > tol).collect();
    if !moved.iter().any(|&m| m) {
        return Support::Empty;
    }
    if moved.iter().all(|&m| m) {
        return Support::Full;
    }
    // The longest circular run of fixed points is the complement of the support.
    let (mut best_len, mut best_end) = (0, 0);
    let mut run = 0;
    for i in 0..2 * n {
        if moved[i % n] {
            run = 0;
        } else {
            run += 1;
            if run > best_len && run <= n {
                best_len = run;
                best_end = i % n;
            }
        }
    }
    let first = (best_end + 1) % n;
    let last = (best_end + n - best_len) % n;
    let h = TAU / n as f64;
    let a = grid_point(n, first) - h;
    let span = ((last + n - first) % n) as f64 * h + 2.0 * h;
    if span >= TAU {
        return Support::Full;
    }
    match IntervalArc::new(a, a + span) {
        Ok(arc) => Support::Arc(arc),
        Err(_) => Support::Full,
    }
}

/// Off-grid evaluator of a [`CircleDiffeo`] and its derivative.
#[derive(Clone, Debug)]
pub struct DiffeoEvaluator {
    p: Interpolant<f64>,
    dp: Interpolant<f64>,
    sup: f64,
}

impl DiffeoEvaluator {
    /// `γ⁻¹(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let pad = self.sup * 1.5 + 1e-9;
        let guess = y - self.p.eval(y);
        invert_monotone(self, y, guess, y - pad, y + pad)
    }
}

impl LiftedMap for DiffeoEvaluator {
    fn value(&self, t: f64) -> f64 {
        t + self.p.eval(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        1.0 + self.dp.eval(t)
    }
}

/// `compose(γ₁, γ₂) = γ₁ ∘ γ₂`.
pub fn compose(g1: &CircleDiffeo, g2: &CircleDiffeo) -> Result<CircleDiffeo> {
    g1.compose(g2)
}

pub fn inverse(g: &CircleDiffeo) -> Result<CircleDiffeo> {
    g.inverse()
}

pub fn support(g: &CircleDiffeo, tol: f64) -> Support {
    g.support(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const N: usize = 256;

    fn wiggle(c: f64, k: u32) -> CircleDiffeo {
        CircleDiffeo::from_fourier(N, &[(k, c, 0.5 * c), (1, 0.3 * c, -c)]).unwrap()
    }

    #[test]
    fn rotations_form_a_subgroup() {
        let r = CircleDiffeo::rotation(N, 0.3).unwrap();
        let s = CircleDiffeo::rotation(N, 1.1).unwrap();
        let rs = r.compose(&s).unwrap();
        assert!(
            rs.distance(&CircleDiffeo::rotation(N, 1.4).unwrap())
                .unwrap()
                < 1e-10
        );
        let inv = r.inverse().unwrap();
        assert!(
            inv.distance(&CircleDiffeo::rotation(N, -0.3).unwrap())
                .unwrap()
                < 1e-10
        );
    }

    #[test]
    fn identity_is_neutral() {
        let g = wiggle(0.05, 3);
        let e = CircleDiffeo::identity(N).unwrap();
        assert_eq!(
            g.compose(&e).unwrap().periodic_part().samples(),
            g.periodic_part().samples()
        );
        assert_eq!(e.inverse().unwrap(), e);
    }

    #[test]
    fn inverse_undoes() {
        let g = CircleDiffeo::from_fn(N, |t| 0.1 * t.sin()).unwrap();
        let ginv = g.inverse().unwrap();
        assert!((ginv.eval(g.eval(1.0)) - 1.0).abs() < 1e-10);
        let e = g.compose(&ginv).unwrap();
        assert!(e.displacement() < 1e-8);
    }

    #[test]
    fn rejects_folding_maps() {
        assert!(matches!(
            CircleDiffeo::from_fn(N, |t| 1.5 * t.sin()),
            Err(Error::NotDiffeomorphism { .. })
        ));
    }

    #[test]
    fn support_detection() {
        assert_eq!(
            CircleDiffeo::identity(N)
                .unwrap()
                .support(DEFAULT_SUPPORT_TOL),
            Support::Empty
        );
        assert_eq!(
            CircleDiffeo::rotation(N, 0.3)
                .unwrap()
                .support(DEFAULT_SUPPORT_TOL),
            Support::Full
        );
        let n = 1024;
        let bump = make_bump(
            IntervalArc::new(0.5, 1.5).unwrap(),
            IntervalArc::new(0.8, 1.2).unwrap(),
        )
        .unwrap();
        let g = CircleDiffeo::from_fn(n, |t| 0.01 * bump.value(t)).unwrap();
        let h = TAU / n as f64;
        match g.support(DEFAULT_SUPPORT_TOL) {
            Support::Arc(s) => {
                assert!(s.start() >= 0.5 - h - 1e-12, "{s:?}");
                assert!(s.end() <= 1.5 + h + 1e-12, "{s:?}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn support_across_zero() {
        let n = 64;
        let mut d = vec![0.0; n];
        d[0] = 1.0;
        d[1] = 1.0;
        d[n - 1] = 1.0;
        let h = TAU / n as f64;
        match support_of_samples(&d, 0.5) {
            Support::Arc(s) => {
                assert!((s.start() - (TAU - 2.0 * h)).abs() < 1e-12);
                assert!((s.length() - 4.0 * h).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn wide_bump(a: f64, b: f64) -> BumpFunction {
        let w = b - a;
        make_bump(
            IntervalArc::new(a, b).unwrap(),
            IntervalArc::new(a + 0.35 * w, b - 0.35 * w).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn disjoint_supports_commute() {
        let n = 1024;
        let b1 = wide_bump(0.2, 2.4);
        let b2 = wide_bump(3.0, 5.6);
        let g1 = CircleDiffeo::from_fn(n, |t| 0.01 * b1.value(t)).unwrap();
        let g2 = CircleDiffeo::from_fn(n, |t| -0.008 * b2.value(t)).unwrap();
        let a = g1.compose(&g2).unwrap();
        let b = g2.compose(&g1).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn group_axioms(c in proptest::array::uniform3(-0.01f64..0.01), k in 1u32..5) {
            let g1 = wiggle(c[0], k);
            let g2 = wiggle(c[1], k + 1);
            let g3 = wiggle(c[2], 2);
            let left = g1.compose(&g2).unwrap().compose(&g3).unwrap();
            let right = g1.compose(&g2.compose(&g3).unwrap()).unwrap();
            prop_assert!(left.distance(&right).unwrap() < 1e-8);
            let e = g1.compose(&g1.inverse().unwrap()).unwrap();
            prop_assert!(e.displacement() < 1e-8);
        }

        #[test]
        fn composed_support_stays_in_hull(s1 in 0.3f64..1.0, s2 in 1.5f64..2.5, c in 0.001f64..0.01) {
            let n = 1024;
            let b1 = wide_bump(s1, s1 + 1.6);
            let b2 = wide_bump(s2, s2 + 1.6);
            let g1 = CircleDiffeo::from_fn(n, |t| c * b1.value(t)).unwrap();
            let g2 = CircleDiffeo::from_fn(n, |t| -c * b2.value(t)).unwrap();
            let hull = IntervalArc::new(s1, s2 + 1.6).unwrap().dilate(2.0 * TAU / n as f64).unwrap();
            prop_assert!(g1.compose(&g2).unwrap().support(DEFAULT_SUPPORT_TOL).is_within(&hull));
        }
    }
}
