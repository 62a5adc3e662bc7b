//! Continuous fragmentation of diffeomorphisms near the identity.
//!
//! A diffeomorphism `γ` close to the identity is written as
//! `γ = Ξ₁(γ) ∘ Ξ₂(γ) ∘ Ξ₃(γ)` with `Ξ_j(γ)` supported in `I_j`. The first
//! factor is the localization of `γ` to `I₁`:
//!
//! ```text
//! γ₁(θ) = θ + ∫_{a₁}^{θ} (γ′ − 1) D_c + α₁ D_l + β₁ D_r
//! ```
//!
//! where `D_c` is `1` on `Î₁` and `D_l`, `D_r` are normalized bumps on the
//! two collars `(a₁, â₁)`, `(b̂₁, b₁)`. The constants `α₁`, `β₁` make `γ₁`
//! agree with `γ` on `Î₁` and fix `b₁`. The second factor localizes
//! `γ₁⁻¹ ∘ γ` to `I₂` the same way and the third is what is left.
//!
//! Factors are evaluated as functions (composite Gauss–Legendre on the
//! closed-form integrand) rather than through resampled spectra, so they are
//! exactly the identity outside their intervals.

use std::f64::consts::TAU;

use crate::diffeo::{
    invert_monotone, make_bump, make_normalized_bump, BumpFunction, CircleDiffeo, CoverConfig,
    IntervalArc, LiftedMap, Support, DEFAULT_SUPPORT_TOL,
};
use crate::error::{Error, Result};
use crate::periodic::{grid_point, PeriodicFunction};
use crate::quad;

/// `𝒰_ε = {γ : |γ(t) − t| < ε, |γ′(t) − 1| < ε}`, tested on the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonNeighbourhood {
    epsilon: f64,
}

impl EpsilonNeighbourhood {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon {epsilon} must be positive"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn contains(&self, g: &CircleDiffeo) -> bool {
        self.check(g).is_ok()
    }

    pub fn check(&self, g: &CircleDiffeo) -> Result<()> {
        let displacement = g.displacement();
        let stretch = g.stretch();
        if displacement < self.epsilon && stretch < self.epsilon {
            Ok(())
        } else {
            Err(Error::Neighbourhood {
                epsilon: self.epsilon,
                displacement,
                stretch,
            })
        }
    }
}

/// Cutoffs and collar geometry for localizing to one interval `(a, b)` with
/// inner interval `[â, b̂]`. Coordinates are lifted so `a < â < b̂ < b`.
#[derive(Clone, Debug)]
pub struct Localizer {
    outer: IntervalArc,
    a: f64,
    a_hat: f64,
    b_hat: f64,
    b: f64,
    center: BumpFunction,
    left: BumpFunction,
    right: BumpFunction,
}

impl Localizer {
    pub fn new(outer: IntervalArc, inner: IntervalArc) -> Result<Self> {
        let (a, b) = (outer.start(), outer.end());
        let a_hat = outer.lift(inner.start());
        let b_hat = a_hat + inner.length();
        if !(a < a_hat && b_hat < b) {
            return Err(Error::Geometry(format!(
                "inner interval ({}, {}) is not strictly inside ({a}, {b})",
                inner.start(),
                inner.end()
            )));
        }
        let center = make_bump(outer, inner)?;
        let left = make_normalized_bump(IntervalArc::new(a, a_hat)?, 0.5 * (a_hat - a))?;
        let right = make_normalized_bump(IntervalArc::new(b_hat, b)?, 0.5 * (b - b_hat))?;
        Ok(Self {
            outer,
            a,
            a_hat,
            b_hat,
            b,
            center,
            left,
            right,
        })
    }

    pub fn outer(&self) -> IntervalArc {
        self.outer
    }

    /// `(a, â, b̂, b)` in lifted coordinates.
    pub fn end_points(&self) -> (f64, f64, f64, f64) {
        (self.a, self.a_hat, self.b_hat, self.b)
    }

    pub fn center(&self) -> &BumpFunction {
        &self.center
    }

    pub fn left(&self) -> &BumpFunction {
        &self.left
    }

    pub fn right(&self) -> &BumpFunction {
        &self.right
    }

    fn collar_integral(&self, g: &impl LiftedMap, from: f64, to: f64, step: f64) -> f64 {
        quad::integrate(
            &|t| (g.derivative(t) - 1.0) * self.center.value(t),
            from,
            to,
            step,
        )
    }

    /// `α = 2/(â − a) · (γ(â) − â − ∫_a^â (γ′ − 1) D_c)`.
    pub fn alpha(&self, g: &impl LiftedMap, step: f64) -> f64 {
        let collar = self.collar_integral(g, self.a, self.a_hat, step);
        2.0 / (self.a_hat - self.a) * (g.value(self.a_hat) - self.a_hat - collar)
    }

    /// `β = 2/(b − b̂) · (b̂ − γ(b̂) − ∫_b̂^b (γ′ − 1) D_c)`.
    pub fn beta(&self, g: &impl LiftedMap, step: f64) -> f64 {
        let collar = self.collar_integral(g, self.b_hat, self.b, step);
        2.0 / (self.b - self.b_hat) * (self.b_hat - g.value(self.b_hat) - collar)
    }

    /// The same constant written as `−2/(b − b̂) · (∫_a^b (γ′ − 1) D_c + α ∫ D_l)`.
    pub fn beta_full(&self, g: &impl LiftedMap, alpha: f64, step: f64) -> f64 {
        let whole = self.collar_integral(g, self.a, self.b, step);
        -2.0 / (self.b - self.b_hat) * (whole + alpha * self.left.integral())
    }

    /// Upper bound on `|α|` for `γ ∈ 𝒰_ε`: `2ε(1 + â)/(â − a)`.
    pub fn alpha_bound(&self, epsilon: f64) -> f64 {
        2.0 * epsilon * (1.0 + self.a_hat) / (self.a_hat - self.a)
    }

    /// Upper bound on `|β|` for `γ ∈ 𝒰_ε`: `2ε(1 + b − b̂)/(b − b̂)`.
    pub fn beta_bound(&self, epsilon: f64) -> f64 {
        2.0 * epsilon * (1.0 + self.b - self.b_hat) / (self.b - self.b_hat)
    }

    /// Largest `ε` for which the bounds force a positive derivative of the
    /// localized factor.
    pub fn epsilon_limit(&self) -> f64 {
        let ka = self.alpha_bound(1.0) * self.left.max_value();
        let kb = self.beta_bound(1.0) * self.right.max_value();
        1.0 / (1.0 + ka + kb)
    }

    /// Localizes `g` on an `n`-point grid.
    pub fn localize<'a, M: LiftedMap>(
        &'a self,
        g: &'a M,
        n: usize,
    ) -> Result<LocalizedFactor<'a, M>> {
        LocalizedFactor::new(self, g, n)
    }
}

/// `θ ↦ θ + ∫_a^θ h` with `h = (g′ − 1) D_c + α D_l + β D_r`, supported in
/// `[a, b]`, evaluated through a table of grid-point partial integrals.
pub struct LocalizedFactor<'a, M: LiftedMap> {
    loc: &'a Localizer,
    base: &'a M,
    alpha: f64,
    beta: f64,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
    min_derivative: f64,
}

impl<'a, M: LiftedMap> LocalizedFactor<'a, M> {
    fn new(loc: &'a Localizer, base: &'a M, n: usize) -> Result<Self> {
        let h = TAU / n as f64;
        let alpha = loc.alpha(base, h);
        let beta = loc.beta(base, h);
        let (a, b) = (loc.a, loc.b);
        let mut knots = vec![a];
        let first = (a / h).floor() as i64 + 1;
        let mut k = first;
        while (k as f64) * h < b {
            knots.push(k as f64 * h);
            k += 1;
        }
        knots.push(b);
        let mut factor = Self {
            loc,
            base,
            alpha,
            beta,
            knots,
            cumulative: Vec::new(),
            total: 0.0,
            min_derivative: f64::INFINITY,
        };
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(factor.knots.len());
        let mut min_d = f64::INFINITY;
        for w in factor.knots.windows(2) {
            cumulative.push(acc);
            acc += quad::panel(&|t| factor.integrand(t), w[0], w[1]);
            for x in [w[0], 0.5 * (w[0] + w[1])] {
                min_d = min_d.min(1.0 + factor.integrand(x));
            }
        }
        cumulative.push(acc);
        factor.cumulative = cumulative;
        factor.total = acc;
        factor.min_derivative = min_d;
        if !(min_d > 0.0) {
            let (t, value) = factor
                .knots
                .iter()
                .map(|&x| (x, 1.0 + factor.integrand(x)))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap_or((a, min_d));
            return Err(Error::Derivative {
                t: t.rem_euclid(TAU),
                value,
            });
        }
        Ok(factor)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `∫_a^b h`; zero up to quadrature error by the choice of `β`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Smallest derivative seen on the grid points and cell midpoints of `[a, b]`.
    pub fn min_derivative(&self) -> f64 {
        self.min_derivative
    }

    fn integrand(&self, x: f64) -> f64 {
        let loc = self.loc;
        let c = loc.center.value(x);
        let mut h = self.alpha * loc.left.value(x) + self.beta * loc.right.value(x);
        if c != 0.0 {
            h += (self.base.derivative(x) - 1.0) * c;
        }
        h
    }

    /// `∫_a^x h` for lifted `x ∈ [a, a + 2π)`.
    fn partial(&self, x: f64) -> f64 {
        if x <= self.loc.a {
            return 0.0;
        }
        if x >= self.loc.b {
            return self.total;
        }
        let i = self.knots.partition_point(|&k| k <= x) - 1;
        self.cumulative[i] + quad::panel(&|t| self.integrand(t), self.knots[i], x)
    }

    /// Splits `t = x + 2πm` with `x ∈ [a, a + 2π)`.
    fn split(&self, t: f64) -> (f64, f64) {
        let m = ((t - self.loc.a) / TAU).floor();
        (t - m * TAU, m)
    }

    /// `γ_j⁻¹(y)`.
    pub fn inverse(&self, y: f64) -> f64 {
        let (x, m) = self.split(y);
        let x = x - m * self.total;
        let (a, b) = (self.loc.a, self.loc.b);
        let s = if x <= a {
            x
        } else if x >= b + self.total {
            x - self.total
        } else {
            let local = Lifted(self);
            let guess = x - self.partial(x);
            invert_monotone(&local, x, guess, a, b).unwrap_or(guess)
        };
        s + m * TAU
    }

    /// `γ_j(t_k) − t_k` on an `n`-point grid.
    pub fn displacement_samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| {
                let t = grid_point(n, k);
                self.value(t) - t
            })
            .collect()
    }
}

impl<M: LiftedMap> LiftedMap for LocalizedFactor<'_, M> {
    fn value(&self, t: f64) -> f64 {
        let (x, m) = self.split(t);
        t + m * self.total + self.partial(x)
    }

    fn derivative(&self, t: f64) -> f64 {
        let (x, _) = self.split(t);
        if x > self.loc.a && x < self.loc.b {
            1.0 + self.integrand(x)
        } else {
            1.0
        }
    }
}

/// The factor restricted to the lifted window `[a, b]`.
struct Lifted<'f, 'a, M: LiftedMap>(&'f LocalizedFactor<'a, M>);

impl<M: LiftedMap> LiftedMap for Lifted<'_, '_, M> {
    fn value(&self, s: f64) -> f64 {
        s + self.0.partial(s)
    }

    fn derivative(&self, s: f64) -> f64 {
        1.0 + self.0.integrand(s)
    }
}

/// `γ_L⁻¹ ∘ γ` for a localized factor `γ_L`.
struct Quotient<'f, 'a, M: LiftedMap, G: LiftedMap> {
    left: &'f LocalizedFactor<'a, M>,
    whole: &'f G,
}

impl<M: LiftedMap, G: LiftedMap> LiftedMap for Quotient<'_, '_, M, G> {
    fn value(&self, t: f64) -> f64 {
        self.left.inverse(self.whole.value(t))
    }

    fn derivative(&self, t: f64) -> f64 {
        let s = self.value(t);
        self.whole.derivative(t) / self.left.derivative(s)
    }
}

/// Output of [`Fragmenter::fragment`].
#[derive(Clone, Debug)]
pub struct FragmentationResult {
    pub xi1: CircleDiffeo,
    pub xi2: CircleDiffeo,
    pub xi3: CircleDiffeo,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    /// `sup |Ξ₁∘Ξ₂∘Ξ₃ − γ|` over the grid, with spectral composition.
    pub reconstruction_error: f64,
    /// Smallest derivative of the two localized factors on the grid.
    pub min_derivative: [f64; 2],
}

impl FragmentationResult {
    pub fn factors(&self) -> [&CircleDiffeo; 3] {
        [&self.xi1, &self.xi2, &self.xi3]
    }
}

/// Fragmentation with respect to a fixed cover.
#[derive(Clone, Debug)]
pub struct Fragmenter {
    cover: CoverConfig,
    first: Localizer,
    second: Localizer,
    neighbourhood: EpsilonNeighbourhood,
}

impl Fragmenter {
    /// Uses the largest neighbourhood for which the first factor is
    /// guaranteed to be a diffeomorphism.
    pub fn new(cover: CoverConfig) -> Result<Self> {
        let first = Localizer::new(cover.outer(1), cover.inner(1))?;
        let second = Localizer::new(cover.outer(2), cover.inner(2))?;
        let neighbourhood = EpsilonNeighbourhood::new(first.epsilon_limit())?;
        Ok(Self {
            cover,
            first,
            second,
            neighbourhood,
        })
    }

    /// Restricts the admissible neighbourhood; `ε` may not exceed the limit.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        let limit = self.epsilon_limit();
        if epsilon > limit {
            return Err(Error::InvalidArgument(format!(
                "epsilon {epsilon} exceeds the positivity limit {limit}"
            )));
        }
        self.neighbourhood = EpsilonNeighbourhood::new(epsilon)?;
        Ok(self)
    }

    pub fn cover(&self) -> &CoverConfig {
        &self.cover
    }

    pub fn neighbourhood(&self) -> EpsilonNeighbourhood {
        self.neighbourhood
    }

    /// `ε₁`: positivity of `γ₁′` is guaranteed on `𝒰_ε` for `ε < ε₁`.
    pub fn epsilon_limit(&self) -> f64 {
        self.first.epsilon_limit()
    }

    pub fn first_localizer(&self) -> &Localizer {
        &self.first
    }

    pub fn second_localizer(&self) -> &Localizer {
        &self.second
    }

    pub fn alpha1(&self, g: &CircleDiffeo) -> Result<f64> {
        self.neighbourhood.check(g)?;
        Ok(self.first.alpha(&g.evaluator(), TAU / g.len() as f64))
    }

    pub fn beta1(&self, g: &CircleDiffeo) -> Result<f64> {
        self.neighbourhood.check(g)?;
        Ok(self.first.beta(&g.evaluator(), TAU / g.len() as f64))
    }

    /// `β₁` through the full-integral expression.
    pub fn beta1_full(&self, g: &CircleDiffeo, alpha1: f64) -> Result<f64> {
        self.neighbourhood.check(g)?;
        Ok(self
            .first
            .beta_full(&g.evaluator(), alpha1, TAU / g.len() as f64))
    }

    pub fn fragment(&self, g: &CircleDiffeo) -> Result<FragmentationResult> {
        self.neighbourhood.check(g)?;
        let n = g.len();
        let ev = g.evaluator();
        let f1 = self.first.localize(&ev, n)?;
        let delta = Quotient {
            left: &f1,
            whole: &ev,
        };
        let f2 = self.second.localize(&delta, n)?;
        let gamma = g.samples();
        let xi3: Vec<f64> = gamma
            .iter()
            .enumerate()
            .map(|(k, &y)| f2.inverse(f1.inverse(y)) - grid_point(n, k))
            .collect();
        let xi1 = CircleDiffeo::new(PeriodicFunction::from_samples(f1.displacement_samples(n))?)?;
        let xi2 = CircleDiffeo::new(PeriodicFunction::from_samples(f2.displacement_samples(n))?)?;
        let xi3 = CircleDiffeo::new(PeriodicFunction::from_samples(xi3)?)?;
        let rebuilt = xi1.compose(&xi2.compose(&xi3)?)?;
        let reconstruction_error = rebuilt.distance(g)?;
        Ok(FragmentationResult {
            alpha1: f1.alpha(),
            beta1: f1.beta(),
            alpha2: f2.alpha(),
            beta2: f2.beta(),
            min_derivative: [f1.min_derivative(), f2.min_derivative()],
            xi1,
            xi2,
            xi3,
            reconstruction_error,
        })
    }
}

/// Fragments `g` over `cover` with the default neighbourhood.
pub fn fragment(g: &CircleDiffeo, cover: &CoverConfig) -> Result<FragmentationResult> {
    Fragmenter::new(cover.clone())?.fragment(g)
}

/// Splits `g`, supported in `I_left ∪ I_right`, as `γ_L ∘ γ_R` with
/// `supp γ_L ⊂ I_left` and `supp γ_R ⊂ I_right`.
///
/// `I_right` must overlap exactly one end of `I_left`. On that end the inner
/// collar is placed at the middle of the overlap; on the free end it is
/// placed halfway between the end point and the support of `g`.
pub fn fragment_pair(
    g: &CircleDiffeo,
    left: IntervalArc,
    right: IntervalArc,
) -> Result<(CircleDiffeo, CircleDiffeo)> {
    let n = g.len();
    let support = match g.support(DEFAULT_SUPPORT_TOL) {
        Support::Empty => return Ok((CircleDiffeo::identity(n)?, CircleDiffeo::identity(n)?)),
        Support::Full => {
            return Err(Error::Geometry(
                "element moves every point of the circle".into(),
            ))
        }
        Support::Arc(s) => s,
    };
    let (a, b) = (left.start(), left.end());
    let overlaps_end = right.contains(b);
    let overlaps_start = right.contains(a);
    let inner = match (overlaps_start, overlaps_end) {
        (false, true) => {
            let b_hat = 0.5 * (right.lift(b) - right.start()) + right.start();
            let b_hat = left.lift(b_hat);
            // Support start measured from a, inside the union arc.
            let s = a + (support.start() - a).rem_euclid(TAU);
            let gap = if s < b { s - a } else { 0.0 };
            IntervalArc::new(a + 0.5 * gap.min(b_hat - a), b_hat)?
        }
        (true, false) => {
            let overlap_end = right.end();
            let a_hat = left.lift(0.5 * (a + (overlap_end - a).rem_euclid(TAU) + a));
            let e = b - (b - support.end()).rem_euclid(TAU);
            let gap = if e > a { b - e } else { 0.0 };
            IntervalArc::new(a_hat, b - 0.5 * gap.min(b - a_hat))?
        }
        _ => {
            return Err(Error::Geometry(
                "the right interval must overlap exactly one end of the left interval".into(),
            ))
        }
    };
    let loc = Localizer::new(left, inner)?;
    let ev = g.evaluator();
    let f = loc.localize(&ev, n)?;
    let right_samples: Vec<f64> = g
        .samples()
        .iter()
        .enumerate()
        .map(|(k, &y)| f.inverse(y) - grid_point(n, k))
        .collect();
    let gl = CircleDiffeo::new(PeriodicFunction::from_samples(f.displacement_samples(n))?)?;
    let gr = CircleDiffeo::new(PeriodicFunction::from_samples(right_samples)?)?;
    Ok((gl, gr))
}
