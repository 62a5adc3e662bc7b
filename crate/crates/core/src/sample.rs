//! Seeded random elements for property checks.

use rand::Rng;

use crate::diffeo::{BumpFunction, CircleDiffeo};
use crate::error::Result;
use crate::loop_group::LoopAlgebraElement;
use crate::periodic::PeriodicFunction;

/// Number of Fourier modes in random diffeomorphisms.
pub const MODES: u32 = 4;

/// `γ(t) = t + s·Σ (a_k cos kt + b_k sin kt)` with `s` chosen so that
/// `max(sup|γ − id|, sup|γ′ − 1|) = size` on the grid.
pub fn scaled_fourier(n: usize, modes: &[(u32, f64, f64)], size: f64) -> Result<CircleDiffeo> {
    scaled_diffeo(
        PeriodicFunction::from_fn(n, |t| fourier_sum(modes, t))?,
        size,
    )
}

/// `γ = id + s·p` with `s` chosen so that `max(sup|s·p|, sup|s·p′|) = size`.
pub fn scaled_diffeo(p: PeriodicFunction, size: f64) -> Result<CircleDiffeo> {
    let scale = p.sup_norm().max(p.derivative(1)?.sup_norm());
    let s = if scale > 0.0 { size / scale } else { 0.0 };
    CircleDiffeo::new(p.scaled(s))
}

/// `Σ (a_k cos kt + b_k sin kt)`.
pub fn fourier_sum(modes: &[(u32, f64, f64)], t: f64) -> f64 {
    modes
        .iter()
        .map(|&(k, a, b)| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
        .sum()
}

/// Random modes `1 ≤ k ≤ MODES` with coefficients uniform in `[-1, 1]/k²`.
pub fn random_modes<R: Rng>(rng: &mut R) -> Vec<(u32, f64, f64)> {
    (1..=MODES)
        .map(|k| {
            let w = 1.0 / (k * k) as f64;
            (
                k,
                w * rng.random_range(-1.0..1.0),
                w * rng.random_range(-1.0..1.0),
            )
        })
        .collect()
}

/// Random element of `𝒰_ε` of size `u·ε` with `u` uniform in `[0.2, 0.95]`.
pub fn random_diffeo<R: Rng>(rng: &mut R, n: usize, epsilon: f64) -> Result<CircleDiffeo> {
    let modes = random_modes(rng);
    let u = rng.random_range(0.2..0.95);
    scaled_fourier(n, &modes, u * epsilon)
}

/// Random element of `𝒰_ε` whose displacement is a random trigonometric
/// polynomial times `bump`, so its support lies in the support of `bump`.
pub fn random_localized_diffeo<R: Rng>(
    rng: &mut R,
    n: usize,
    epsilon: f64,
    bump: &BumpFunction,
) -> Result<CircleDiffeo> {
    let modes = random_modes(rng);
    let u = rng.random_range(0.2..0.95);
    let p = PeriodicFunction::from_fn(n, |t| bump.value(t) * fourier_sum(&modes, t))?;
    scaled_diffeo(p, u * epsilon)
}

/// Random `𝔰𝔲(2)` loop with components `window(t)·Σ (a_k cos kt + b_k sin kt)`,
/// scaled to `max_t ‖ξ(t)‖₂ = u·size` with `u` uniform in `[0.2, 0.95]`.
pub fn random_loop<R: Rng>(
    rng: &mut R,
    n: usize,
    size: f64,
    window: impl Fn(f64) -> f64,
) -> Result<LoopAlgebraElement> {
    let components: Vec<PeriodicFunction> = (0..3)
        .map(|_| {
            let modes = random_modes(rng);
            PeriodicFunction::from_fn(n, |t| window(t) * fourier_sum(&modes, t))
        })
        .collect::<Result<_>>()?;
    let u = rng.random_range(0.2..0.95);
    let xi =
        LoopAlgebraElement::from_su2_components([&components[0], &components[1], &components[2]])?;
    let norm = xi.sup_norm();
    Ok(if norm > 0.0 {
        xi.scaled(u * size / norm)
    } else {
        xi
    })
}
