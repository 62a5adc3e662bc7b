//! Cocycles on vector fields and diffeomorphisms of the circle: the bracket
//! and Gelfand–Fuks cocycle on `Vect(S¹)`, the Bott group cocycle and the
//! Virasoro group law it defines.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::diffeo::CircleDiffeo;
use crate::error::{Error, Result};
use crate::periodic::{grid_point, PeriodicFunction, Sample, DEFAULT_TAIL_TOL};

/// Finite-difference step of [`bott_antisymmetrization`].
pub const FD_STEP: f64 = 1e-3;

/// A smooth vector field `f(t) ∂_t` on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct VectField {
    f: PeriodicFunction,
}

impl VectField {
    pub fn new(f: PeriodicFunction) -> Result<Self> {
        f.check_tail(DEFAULT_TAIL_TOL)?;
        Ok(Self { f })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(PeriodicFunction::from_fn(n, f)?)
    }

    pub fn function(&self) -> &PeriodicFunction {
        &self.f
    }
}

/// `[f, g] = f′g − fg′`.
pub fn vect_bracket(f: &VectField, g: &VectField) -> Result<VectField> {
    let df = f.f.derivative(1)?;
    let dg = g.f.derivative(1)?;
    VectField::new(df.mul(&g.f)?.sub(&f.f.mul(&dg)?)?)
}

/// `𝐜(f, g) = −1/(2πi) ∫₀^{2π} f (g′ + g‴) dt` for real or complex fields.
pub fn vect_cocycle<T: Sample>(
    f: &PeriodicFunction<T>,
    g: &PeriodicFunction<T>,
) -> Result<Complex64> {
    let d1 = g.derivative(1)?;
    let d3 = g.derivative(3)?;
    let integrand = f.mul(&d1.add(&d3)?)?;
    let integral = integrand.mean().to_complex() * (2.0 * PI);
    Ok(-integral / Complex64::new(0.0, 2.0 * PI))
}

/// `𝐁(γ₁, γ₂) = −1/48π ∫₀^{2π} log((γ₁∘γ₂)′) γ₂″/γ₂′ dt`.
///
/// `(γ₁∘γ₂)′` is taken by the chain rule, `γ₁′(γ₂(t)) γ₂′(t)`, with `γ₁′`
/// interpolated at the points `γ₂(t_k)`.
pub fn bott(g1: &CircleDiffeo, g2: &CircleDiffeo) -> Result<f64> {
    if g1.len() != g2.len() {
        return Err(Error::GridMismatch {
            left: g1.len(),
            right: g2.len(),
        });
    }
    let n = g2.len();
    let d2 = g2.derivative();
    let dd2 = g2.periodic_part().derivative(2)?;
    if dd2.samples().iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let d1 = g1.derivative();
    let d1_at = d1.interpolant();
    let moved = g2.periodic_part().samples();
    let log_composite: Vec<f64> = (0..n)
        .map(|k| {
            let inner = if moved[k] == 0.0 {
                d1.samples()[k]
            } else {
                d1_at.eval(grid_point(n, k) + moved[k])
            };
            (inner * d2.samples()[k]).ln()
        })
        .collect();
    PeriodicFunction::from_samples(log_composite.clone())?.check_tail(DEFAULT_TAIL_TOL)?;
    let sum: f64 = (0..n)
        .map(|k| log_composite[k] * dd2.samples()[k] / d2.samples()[k])
        .sum();
    // ∫ = 2π · mean, so −1/48π ∫ = −mean/24.
    Ok(-sum / n as f64 / 24.0)
}

/// A real-valued group 2-cocycle on diffeomorphisms.
pub trait GroupCocycle {
    fn eval(&self, g1: &CircleDiffeo, g2: &CircleDiffeo) -> Result<f64>;
}

/// The Bott cocycle.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bott;

impl GroupCocycle for Bott {
    fn eval(&self, g1: &CircleDiffeo, g2: &CircleDiffeo) -> Result<f64> {
        bott(g1, g2)
    }
}

/// `|c(γ₁,γ₂) + c(γ₁γ₂,γ₃) − c(γ₁,γ₂γ₃) − c(γ₂,γ₃)|`.
pub fn cocycle_identity_residual(
    c: &impl GroupCocycle,
    g1: &CircleDiffeo,
    g2: &CircleDiffeo,
    g3: &CircleDiffeo,
) -> Result<f64> {
    let g12 = g1.compose(g2)?;
    let g23 = g2.compose(g3)?;
    Ok((c.eval(g1, g2)? + c.eval(&g12, g3)? - c.eval(g1, &g23)? - c.eval(g2, g3)?).abs())
}

/// An element `(a, γ)` of the Virasoro group.
#[derive(Clone, Debug, PartialEq)]
pub struct VirasoroElement {
    pub a: f64,
    pub gamma: CircleDiffeo,
}

impl VirasoroElement {
    pub fn new(a: f64, gamma: CircleDiffeo) -> Self {
        Self { a, gamma }
    }
}

/// `(a₁, γ₁)·(a₂, γ₂) = (a₁ + a₂ + 𝐁(γ₁, γ₂), γ₁∘γ₂)`.
pub fn vir_multiply(x: &VirasoroElement, y: &VirasoroElement) -> Result<VirasoroElement> {
    Ok(VirasoroElement {
        a: x.a + y.a + bott(&x.gamma, &y.gamma)?,
        gamma: x.gamma.compose(&y.gamma)?,
    })
}

/// `∂²/∂s∂t [𝐁(γ_s, γ_t) − 𝐁(γ_t, γ_s)]` at `s = t = 0` for
/// `γ_s = id + s f`, `γ_t = id + t g`, by central differences with step
/// `h` and one Richardson step.
pub fn bott_antisymmetrization(f: &PeriodicFunction, g: &PeriodicFunction, h: f64) -> Result<f64> {
    let anti = |s: f64, t: f64| -> Result<f64> {
        let gs = CircleDiffeo::new(f.scaled(s))?;
        let gt = CircleDiffeo::new(g.scaled(t))?;
        Ok(bott(&gs, &gt)? - bott(&gt, &gs)?)
    };
    let mixed = |h: f64| -> Result<f64> {
        Ok((anti(h, h)? - anti(h, -h)? - anti(-h, h)? + anti(-h, -h)?) / (4.0 * h * h))
    };
    let coarse = mixed(h)?;
    let fine = mixed(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Ratio of [`bott_antisymmetrization`] to the imaginary part of the
/// third-order part `−1/(2πi) ∫ f g‴` of `𝐜(f, g)`.
pub fn bott_to_vect_ratio(f: &PeriodicFunction, g: &PeriodicFunction) -> Result<f64> {
    let anti = bott_antisymmetrization(f, g, FD_STEP)?;
    let d3 = g.derivative(3)?;
    let cubic = -Complex64::new(f.mul(&d3)?.mean() * 2.0 * PI, 0.0) / Complex64::new(0.0, 2.0 * PI);
    Ok(anti / cubic.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_modes, scaled_fourier};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: usize = 256;

    fn field(n: usize, c: &[f64; 4]) -> PeriodicFunction {
        PeriodicFunction::from_fn(n, |t| {
            c[0] * t.cos() + c[1] * (2.0 * t).sin() + c[2] * (3.0 * t).cos() + c[3]
        })
        .unwrap()
    }

    fn random_triple(seed: u64, eps: f64) -> [CircleDiffeo; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        [0, 1, 2].map(|_| scaled_fourier(N, &random_modes(&mut rng), eps * 0.9).unwrap())
    }

    #[test]
    fn bracket_examples() {
        let s = VectField::from_fn(N, f64::sin).unwrap();
        let c = VectField::from_fn(N, f64::cos).unwrap();
        let one = VectField::from_fn(N, |_| 1.0).unwrap();
        let b = vect_bracket(&s, &c).unwrap();
        assert!(b
            .function()
            .samples()
            .iter()
            .all(|v| (v - 1.0).abs() < 1e-12));
        assert!(vect_bracket(&s, &s).unwrap().function().sup_norm() < 1e-15);
        // [1, g] = −g′ and [g, 1] = g′.
        let d = vect_bracket(&one, &s).unwrap();
        assert!(d.function().add(c.function()).unwrap().sup_norm() < 1e-12);
        let d = vect_bracket(&s, &one).unwrap();
        assert!(d.function().sub(c.function()).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn gelfand_fuks_on_modes() {
        let mode =
            |k: f64| PeriodicFunction::from_fn(N, |t| Complex64::new(0.0, k * t).exp()).unwrap();
        let v = vect_cocycle(&mode(2.0), &mode(-2.0)).unwrap();
        assert!((v - Complex64::new(-6.0, 0.0)).norm() < 1e-9);
        assert!(vect_cocycle(&mode(1.0), &mode(-1.0)).unwrap().norm() < 1e-12);
        for m in 2..6 {
            let m = m as f64;
            let v = vect_cocycle(&mode(m), &mode(-m)).unwrap();
            // g′ + g‴ = i(m³ − m)g and fg = 1.
            let oracle = -m * (m * m - 1.0);
            assert!(
                (v.re - oracle).abs() < 1e-8 && v.im.abs() < 1e-9,
                "{m}: {v}"
            );
        }
    }

    #[test]
    fn gelfand_fuks_is_imaginary_on_real_fields() {
        let f = field(N, &[0.3, -0.2, 0.5, 0.1]);
        let g = field(N, &[-0.1, 0.4, 0.2, 0.7]);
        let v = vect_cocycle(&f, &g).unwrap();
        assert!(v.re.abs() < 1e-14);
        assert!(vect_cocycle(&f, &f).unwrap().norm() < 1e-10);
    }

    #[test]
    fn bott_vanishes_on_rotations_and_identity() {
        let r = CircleDiffeo::rotation(N, 0.4).unwrap();
        let s = CircleDiffeo::rotation(N, -1.3).unwrap();
        assert_eq!(bott(&r, &s).unwrap(), 0.0);
        let e = CircleDiffeo::identity(N).unwrap();
        let [g, _, _] = random_triple(1, 0.05);
        assert!(bott(&e, &g).unwrap().abs() < 1e-10);
        assert!(bott(&g, &e).unwrap().abs() < 1e-12);
    }

    #[test]
    fn virasoro_group_law() {
        let e = CircleDiffeo::identity(N).unwrap();
        let p = vir_multiply(
            &VirasoroElement::new(1.0, e.clone()),
            &VirasoroElement::new(2.0, e.clone()),
        )
        .unwrap();
        assert_eq!(p.a, 3.0);
        let r = vir_multiply(
            &VirasoroElement::new(0.0, CircleDiffeo::rotation(N, 0.2).unwrap()),
            &VirasoroElement::new(0.0, CircleDiffeo::rotation(N, 0.5).unwrap()),
        )
        .unwrap();
        assert_eq!(r.a, 0.0);
        assert!(
            r.gamma
                .distance(&CircleDiffeo::rotation(N, 0.7).unwrap())
                .unwrap()
                < 1e-12
        );
        let [g1, g2, _] = random_triple(5, 0.05);
        let x = vir_multiply(
            &VirasoroElement::new(0.3, g1.clone()),
            &VirasoroElement::new(-0.1, g2.clone()),
        )
        .unwrap();
        assert_eq!(x.gamma, g1.compose(&g2).unwrap());
    }

    #[test]
    fn normalized_residual_with_identity() {
        let [g1, _, g3] = random_triple(9, 0.05);
        let e = CircleDiffeo::identity(N).unwrap();
        assert!(cocycle_identity_residual(&Bott, &g1, &e, &g3).unwrap() < 1e-12);
        let r = [0.1, 0.2, 0.3].map(|s| CircleDiffeo::rotation(N, s).unwrap());
        assert!(cocycle_identity_residual(&Bott, &r[0], &r[1], &r[2]).unwrap() < 1e-12);
    }

    #[test]
    fn antisymmetrization_matches_first_order_expansion() {
        let f = field(N, &[0.3, -0.2, 0.5, 0.0]);
        let g = PeriodicFunction::from_fn(N, |t| {
            -0.1 * t.sin() + 0.4 * (2.0 * t).cos() + 0.2 * (3.0 * t).sin()
        })
        .unwrap();
        let fd = bott_antisymmetrization(&f, &g, FD_STEP).unwrap();
        let df = f.derivative(1).unwrap();
        let ddg = g.derivative(2).unwrap();
        let oracle = -df.mul(&ddg).unwrap().mean() * 2.0 * PI / (24.0 * PI);
        assert!(oracle.abs() > 1e-3);
        assert!((fd - oracle).abs() < 1e-7, "{fd} vs {oracle}");
        let swapped = bott_antisymmetrization(&g, &f, FD_STEP).unwrap();
        assert!((fd + swapped).abs() < 1e-5);
        let ratio = bott_to_vect_ratio(&f, &g).unwrap();
        assert!((ratio - 1.0 / 12.0).abs() < 1e-6, "{ratio}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bott_is_a_two_cocycle(seed in 0u64..10_000) {
            let [g1, g2, g3] = random_triple(seed, 0.05);
            prop_assert!(cocycle_identity_residual(&Bott, &g1, &g2, &g3).unwrap() < 1e-8);
        }

        #[test]
        fn gelfand_fuks_is_a_lie_cocycle(a in proptest::array::uniform4(-1.0f64..1.0),
                                         b in proptest::array::uniform4(-1.0f64..1.0),
                                         c in proptest::array::uniform4(-1.0f64..1.0)) {
            let (f, g, h) = (field(N, &a), field(N, &b), field(N, &c));
            let vf = |p: &PeriodicFunction| VectField::new(p.clone()).unwrap();
            let (vf_, vg, vh) = (vf(&f), vf(&g), vf(&h));
            let fg = vect_bracket(&vf_, &vg).unwrap();
            let gh = vect_bracket(&vg, &vh).unwrap();
            let hf = vect_bracket(&vh, &vf_).unwrap();
            let s = vect_cocycle(fg.function(), &h).unwrap()
                + vect_cocycle(gh.function(), &f).unwrap()
                + vect_cocycle(hf.function(), &g).unwrap();
            prop_assert!(s.norm() < 1e-8);
            let anti = vect_cocycle(&f, &g).unwrap() + vect_cocycle(&g, &f).unwrap();
            prop_assert!(anti.norm() < 1e-10);
        }

        #[test]
        fn virasoro_law_is_associative(seed in 0u64..10_000) {
            let [g1, g2, g3] = random_triple(seed, 0.05);
            let (x, y, z) = (VirasoroElement::new(0.1, g1), VirasoroElement::new(-0.2, g2), VirasoroElement::new(0.3, g3));
            let left = vir_multiply(&vir_multiply(&x, &y).unwrap(), &z).unwrap();
            let right = vir_multiply(&x, &vir_multiply(&y, &z).unwrap()).unwrap();
            prop_assert!((left.a - right.a).abs() < 1e-8);
            prop_assert!(left.gamma.distance(&right.gamma).unwrap() < 1e-8);
        }
    }
}
