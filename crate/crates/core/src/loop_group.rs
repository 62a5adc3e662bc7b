//! Loops into `SU(n)` and `𝔰𝔲(n)` sampled on a uniform grid.
//!
//! Products, brackets, `Exp` and `Log` act pointwise. The invariant form is
//! `⟨X, Y⟩ = tr(XY)`, normalized so the coroot `diag(1, −1)` has length `2`;
//! with this sign `⟨X, X⟩ < 0` for nonzero anti-hermitian `X`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::diffeo::{
    make_bump, support_of_samples, BumpFunction, CircleDiffeo, CoverConfig, IntervalArc, Support,
};
use crate::error::{Error, Result};
use crate::periodic::{check_grid, grid_point, PeriodicFunction, DEFAULT_TAIL_TOL};

pub type Matrix = DMatrix<Complex64>;

/// Per-sample tolerance for unitarity and determinant.
pub const GROUP_TOL: f64 = 1e-10;
/// Per-sample tolerance for anti-hermiticity and trace.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// `Log` is defined while `‖U − I‖₂` stays below this.
pub const LOG_RADIUS: f64 = 1.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The basis `iσ₁, iσ₂, iσ₃` of `𝔰𝔲(2)`; each squares to `−I`.
pub fn su2_basis() -> [Matrix; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    [
        Matrix::from_row_slice(2, 2, &[z, I, I, z]),
        Matrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(-1.0, 0.0), z]),
        Matrix::from_row_slice(2, 2, &[I, z, z, -I]),
    ]
}

/// `⟨X, Y⟩ = tr(XY)`.
pub fn killing_form(x: &Matrix, y: &Matrix) -> Complex64 {
    (x * y).trace()
}

/// Spectral norm `‖M‖₂`, in closed form for `2 × 2`.
pub fn operator_norm(m: &Matrix) -> f64 {
    if m.nrows() == 2 && m.ncols() == 2 {
        let fro = m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let det = m.determinant().norm_sqr();
        let disc = (fro * fro - 4.0 * det).max(0.0).sqrt();
        (0.5 * (fro + disc)).sqrt()
    } else {
        m.clone().svd(false, false).singular_values.max()
    }
}

/// Matrix exponential of an anti-hermitian matrix.
pub fn exp_matrix(x: &Matrix) -> Matrix {
    let n = x.nrows();
    if n == 2 {
        // X = i a·σ (plus a trace part) with X₀² = −|a|² I.
        let tr = x.trace() / 2.0;
        let x0 = x - Matrix::identity(2, 2) * tr;
        let theta = (-(&x0 * &x0)[(0, 0)]).re.max(0.0).sqrt();
        let sinc = if theta < 1e-8 {
            1.0 - theta * theta / 6.0
        } else {
            theta.sin() / theta
        };
        (Matrix::identity(2, 2) * Complex64::new(theta.cos(), 0.0) + x0 * Complex64::new(sinc, 0.0))
            * tr.exp()
    } else {
        // X = iH with H hermitian.
        let h = x * (-I);
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let v = &eig.eigenvectors;
        let d = Matrix::from_diagonal(&eig.eigenvalues.map(|l| (I * l).exp()));
        v * d * v.adjoint()
    }
}

/// Principal logarithm of a unitary matrix near the identity, projected to
/// `𝔰𝔲(n)`.
pub fn log_matrix(u: &Matrix) -> Matrix {
    let n = u.nrows();
    let l = if n == 2 {
        let half = Complex64::new(0.5, 0.0);
        let c = (u.trace() * half).re.clamp(-1.0, 1.0);
        let theta = c.acos();
        let sinc = if theta < 1e-8 {
            1.0 - theta * theta / 6.0
        } else {
            theta.sin() / theta
        };
        (u - u.adjoint()) * half * Complex64::new(1.0 / sinc, 0.0)
    } else {
        let schur = u.clone().schur();
        let (q, t) = schur.unpack();
        let d = Matrix::from_diagonal(&t.diagonal().map(|z| z.ln()));
        &q * d * q.adjoint()
    };
    project_algebra(&l)
}

/// Anti-hermitian traceless part.
pub fn project_algebra(x: &Matrix) -> Matrix {
    let n = x.nrows();
    let ah = (x - x.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = ah.trace() / n as f64;
    ah - Matrix::identity(n, n) * tr
}

fn check_shape(samples: &[Matrix]) -> Result<usize> {
    check_grid(samples.len())?;
    let dim = samples[0].nrows();
    if dim == 0 || samples.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(Error::InvalidArgument(
            "samples must be square matrices of one size".into(),
        ));
    }
    Ok(dim)
}

fn entry_tail(samples: &[Matrix], dim: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let f = PeriodicFunction::from_samples(samples.iter().map(|m| m[(i, j)]).collect())
                .expect("grid already validated");
            worst = worst.max(f.tail());
        }
    }
    worst
}

fn to_csv(samples: &[Matrix]) -> String {
    let dim = samples[0].nrows();
    let mut out = String::from("t");
    for i in 0..dim {
        for j in 0..dim {
            out.push_str(&format!(",m{i}{j}_re,m{i}{j}_im"));
        }
    }
    out.push('\n');
    for (k, m) in samples.iter().enumerate() {
        out.push_str(&format!("{:.16e}", grid_point(samples.len(), k)));
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
            }
        }
        out.push('\n');
    }
    out
}

/// A loop `S¹ → 𝔰𝔲(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopAlgebraElement {
    samples: Vec<Matrix>,
}

impl LoopAlgebraElement {
    pub fn from_samples(samples: Vec<Matrix>) -> Result<Self> {
        let dim = check_shape(&samples)?;
        for (k, m) in samples.iter().enumerate() {
            let skew = (m + m.adjoint())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            let tr = m.trace().norm();
            if skew > ALGEBRA_TOL || tr > ALGEBRA_TOL * dim as f64 {
                return Err(Error::InvalidArgument(format!(
                    "sample {k} is not in su({dim}): hermitian part {skew:e}, trace {tr:e}"
                )));
            }
        }
        Ok(Self { samples })
    }

    pub fn zeros(n: usize, dim: usize) -> Result<Self> {
        check_grid(n)?;
        Ok(Self {
            samples: vec![Matrix::zeros(dim, dim); n],
        })
    }

    /// `ξ(t) = Σ_j f_j(t) iσ_j` in `𝔰𝔲(2)`.
    pub fn from_su2_components(components: [&PeriodicFunction; 3]) -> Result<Self> {
        let n = components[0].len();
        if components.iter().any(|c| c.len() != n) {
            return Err(Error::GridMismatch {
                left: n,
                right: components.iter().map(|c| c.len()).max().unwrap_or(n),
            });
        }
        let basis = su2_basis();
        let samples = (0..n)
            .map(|k| {
                basis
                    .iter()
                    .zip(components)
                    .fold(Matrix::zeros(2, 2), |acc, (b, f)| {
                        acc + b * Complex64::new(f.samples()[k], 0.0)
                    })
            })
            .collect();
        Ok(Self { samples })
    }

    /// Constant loop at `x`.
    pub fn constant(n: usize, x: &Matrix) -> Result<Self> {
        check_grid(n)?;
        Self::from_samples(vec![x.clone(); n])
    }

    /// `f(t) · ξ(t)` for a real scalar function `f`.
    pub fn scale_by(&self, f: impl Fn(f64) -> f64) -> Self {
        let n = self.len();
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, m)| m * Complex64::new(f(grid_point(n, k)), 0.0))
            .collect();
        Self { samples }
    }

    pub fn samples(&self) -> &[Matrix] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].nrows()
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|m| m * Complex64::new(s, 0.0))
                .collect(),
        }
    }

    /// Pointwise bracket `[ξ, η](t) = [ξ(t), η(t)]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b - b * a)
            .collect();
        Ok(Self { samples })
    }

    /// Spectral derivative, entry by entry.
    pub fn derivative(&self) -> Self {
        self.map_entries(|f| f.derivative(1).expect("order 1 is valid").into_samples())
    }

    /// `ξ ∘ f` through the trigonometric interpolant of each entry.
    pub fn reparametrize(&self, f: &CircleDiffeo) -> Result<Self> {
        if f.len() != self.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: f.len(),
            });
        }
        let points = f.samples();
        Ok(self.map_entries(|entry| {
            let ip = entry.interpolant();
            points.iter().map(|&t| ip.eval(t)).collect()
        }))
    }

    fn map_entries(&self, op: impl Fn(&PeriodicFunction<Complex64>) -> Vec<Complex64>) -> Self {
        let (n, dim) = (self.len(), self.dim());
        let mut samples = vec![Matrix::zeros(dim, dim); n];
        for i in 0..dim {
            for j in 0..dim {
                let f = PeriodicFunction::from_samples(
                    self.samples.iter().map(|m| m[(i, j)]).collect(),
                )
                .expect("grid already validated");
                for (s, v) in samples.iter_mut().zip(op(&f)) {
                    s[(i, j)] = v;
                }
            }
        }
        Self { samples }
    }

    /// `max_t ‖ξ(t)‖₂`.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(operator_norm).fold(0.0, f64::max)
    }

    pub fn support(&self, tol: f64) -> Support {
        let d: Vec<f64> = self.samples.iter().map(operator_norm).collect();
        support_of_samples(&d, tol)
    }

    pub fn tail(&self) -> f64 {
        entry_tail(&self.samples, self.dim())
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.samples)
    }
}

/// A loop `S¹ → SU(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopElement {
    samples: Vec<Matrix>,
}

impl LoopElement {
    pub fn from_samples(samples: Vec<Matrix>) -> Result<Self> {
        let dim = check_shape(&samples)?;
        let id = Matrix::identity(dim, dim);
        for (k, m) in samples.iter().enumerate() {
            let unitarity = (m.adjoint() * m - &id)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            let det = (m.determinant() - Complex64::new(1.0, 0.0)).norm();
            if unitarity > GROUP_TOL || det > GROUP_TOL {
                return Err(Error::InvalidArgument(format!(
                    "sample {k} is not in SU({dim}): unitarity {unitarity:e}, determinant {det:e}"
                )));
            }
        }
        Ok(Self { samples })
    }

    pub fn identity(n: usize, dim: usize) -> Result<Self> {
        check_grid(n)?;
        Ok(Self {
            samples: vec![Matrix::identity(dim, dim); n],
        })
    }

    pub fn samples(&self) -> &[Matrix] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].nrows()
    }

    /// Pointwise product, gated by the default tail tolerance.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_with_tol(other, DEFAULT_TAIL_TOL)
    }

    pub fn multiply_with_tol(&self, other: &Self, tail_tol: f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let samples: Vec<Matrix> = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        let tail = entry_tail(&samples, self.dim());
        if tail > tail_tol {
            return Err(Error::Aliasing {
                tail,
                tol: tail_tol,
            });
        }
        Ok(Self { samples })
    }

    /// Pointwise inverse (adjoint).
    pub fn inverse(&self) -> Self {
        Self {
            samples: self.samples.iter().map(|m| m.adjoint()).collect(),
        }
    }

    /// `max_t ‖γ(t) − δ(t)‖₂`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| operator_norm(&(a - b)))
            .fold(0.0, f64::max))
    }

    /// `max_t ‖γ(t) − I‖₂`.
    pub fn distance_to_identity(&self) -> f64 {
        let id = Matrix::identity(self.dim(), self.dim());
        self.samples
            .iter()
            .map(|m| operator_norm(&(m - &id)))
            .fold(0.0, f64::max)
    }

    pub fn support(&self, tol: f64) -> Support {
        let id = Matrix::identity(self.dim(), self.dim());
        let d: Vec<f64> = self
            .samples
            .iter()
            .map(|m| operator_norm(&(m - &id)))
            .collect();
        support_of_samples(&d, tol)
    }

    pub fn tail(&self) -> f64 {
        entry_tail(&self.samples, self.dim())
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.samples)
    }
}

/// Pointwise exponential.
pub fn exp_loop(xi: &LoopAlgebraElement) -> LoopElement {
    LoopElement {
        samples: xi.samples.iter().map(exp_matrix).collect(),
    }
}

/// Pointwise principal logarithm.
pub fn log_loop(g: &LoopElement) -> Result<LoopAlgebraElement> {
    let n = g.len();
    let id = Matrix::identity(g.dim(), g.dim());
    let samples = g
        .samples
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let distance = operator_norm(&(u - &id));
            if distance >= LOG_RADIUS {
                Err(Error::Branch {
                    t: grid_point(n, k),
                    distance,
                })
            } else {
                Ok(log_matrix(u))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoopAlgebraElement { samples })
}

/// `ω(ξ, η) = 1/2π ∫ ⟨ξ(t), η′(t)⟩ dt`, real part.
pub fn omega(xi: &LoopAlgebraElement, eta: &LoopAlgebraElement) -> Result<f64> {
    xi.same_grid(eta)?;
    let d = eta.derivative();
    let sum: f64 = xi
        .samples
        .iter()
        .zip(&d.samples)
        .map(|(a, b)| killing_form(a, b).re)
        .sum();
    Ok(sum / xi.len() as f64)
}

/// The cutoffs `χ₁`, `χ₂` of the loop fragmentation.
#[derive(Clone, Debug)]
pub struct LoopCutoffs {
    pub chi1: BumpFunction,
    pub chi2: BumpFunction,
}

impl LoopCutoffs {
    /// `χ₁` is supported in `I₁` and equal to `1` a margin beyond
    /// `[b₃, a₂] = S¹ ∖ (I₂ ∪ I₃)`; `χ₂` is supported in `(b₃, b₂)` and equal
    /// to `1` a margin beyond `[a₂, a₃]`.
    pub fn new(cover: &CoverConfig) -> Result<Self> {
        let m = cover.margin();
        let (a1, b1) = (cover.outer(1).start(), cover.outer(1).end());
        let (a2, b2) = (cover.outer(2).start(), cover.outer(2).end());
        let a3 = cover.outer(3).start();
        let b3 = cover.outer(3).end() - TAU;
        let chi1 = make_bump(
            cover.outer(1),
            IntervalArc::new(b3 - m * (b3 - a1), a2 + m * (b1 - a2))?,
        )?;
        let chi2 = make_bump(
            IntervalArc::new(b3, b2)?,
            IntervalArc::new(a2 - m * (a2 - b3), a3 + m * (b2 - a3))?,
        )?;
        Ok(Self { chi1, chi2 })
    }

    /// The three exponents' scalar weights at `t`: `χ₁`, `χ₂(1 − χ₁)`,
    /// `(1 − χ₁)(1 − χ₂)`.
    pub fn weights(&self, t: f64) -> [f64; 3] {
        let c1 = self.chi1.value(t);
        let c2 = self.chi2.value(t);
        [c1, c2 * (1.0 - c1), (1.0 - c1) * (1.0 - c2)]
    }
}

/// Output of [`fragment_loop`].
#[derive(Clone, Debug)]
pub struct LoopFragmentation {
    pub xi1: LoopElement,
    pub xi2: LoopElement,
    pub xi3: LoopElement,
}

impl LoopFragmentation {
    pub fn factors(&self) -> [&LoopElement; 3] {
        [&self.xi1, &self.xi2, &self.xi3]
    }

    /// `Ξ₁ Ξ₂ Ξ₃`.
    pub fn product(&self) -> Result<LoopElement> {
        self.xi1.multiply(&self.xi2.multiply(&self.xi3)?)
    }
}

/// `Ξ₁ = Exp(χ₁η)`, `Ξ₂ = Exp(χ₂(1−χ₁)η)`, `Ξ₃ = Exp((1−χ₁)(1−χ₂)η)` with
/// `η = Log γ`. The exponents commute pointwise, so the product is `γ`.
pub fn fragment_loop(g: &LoopElement, cover: &CoverConfig) -> Result<LoopFragmentation> {
    let cut = LoopCutoffs::new(cover)?;
    let eta = log_loop(g)?;
    let part = |j: usize| exp_loop(&eta.scale_by(|t| cut.weights(t)[j]));
    Ok(LoopFragmentation {
        xi1: part(0),
        xi2: part(1),
        xi3: part(2),
    })
}

/// The stepwise construction: `Ξ₁ = Exp(χ₁ Log γ)`, `Ξ₂ = Exp(χ₂ Log(Ξ₁⁻¹γ))`,
/// `Ξ₃ = Ξ₂⁻¹ Ξ₁⁻¹ γ`.
pub fn fragment_loop_sequential(g: &LoopElement, cover: &CoverConfig) -> Result<LoopFragmentation> {
    let cut = LoopCutoffs::new(cover)?;
    let eta = log_loop(g)?;
    let xi1 = exp_loop(&eta.scale_by(|t| cut.chi1.value(t)));
    let rest = xi1.inverse().multiply_with_tol(g, f64::INFINITY)?;
    let xi2 = exp_loop(&log_loop(&rest)?.scale_by(|t| cut.chi2.value(t)));
    let xi3 = xi2.inverse().multiply_with_tol(&rest, f64::INFINITY)?;
    Ok(LoopFragmentation { xi1, xi2, xi3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::DEFAULT_SUPPORT_TOL;
    use proptest::prelude::*;

    const N: usize = 256;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn trig_loop(n: usize, coeffs: &[f64; 6]) -> LoopAlgebraElement {
        let f = |j: usize| {
            PeriodicFunction::from_fn(n, |t| {
                coeffs[2 * j] * t.cos() + coeffs[2 * j + 1] * (2.0 * t).sin()
            })
            .unwrap()
        };
        let (f0, f1, f2) = (f(0), f(1), f(2));
        LoopAlgebraElement::from_su2_components([&f0, &f1, &f2]).unwrap()
    }

    #[test]
    fn basis_squares_to_minus_identity() {
        for b in su2_basis() {
            let sq = &b * &b;
            assert!((sq + Matrix::identity(2, 2))
                .iter()
                .all(|z| z.norm() < 1e-15));
            assert!(killing_form(&b, &b).re < 0.0);
        }
    }

    #[test]
    fn coroot_has_length_two() {
        let h = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]));
        assert_eq!(killing_form(&h, &h), c(2.0));
        let h3 = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0), c(0.0)]));
        assert_eq!(killing_form(&h3, &h3), c(2.0));
    }

    #[test]
    fn rodrigues_oracle() {
        let x = (su2_basis()[0].clone() * c(0.6) + su2_basis()[2].clone() * c(0.8)) * c(1.0);
        for theta in [0.0, 1e-9, 0.3, 1.2, 2.9] {
            let e = exp_matrix(&(&x * c(theta)));
            let oracle = Matrix::identity(2, 2) * c(theta.cos()) + &x * c(theta.sin());
            assert!((e - oracle).iter().all(|z| z.norm() < 1e-12), "{theta}");
        }
    }

    #[test]
    fn general_exp_and_log_agree_with_closed_form() {
        let x = su2_basis()[1].clone() * c(0.4) + su2_basis()[2].clone() * c(-0.3);
        let mut x3 = Matrix::zeros(3, 3);
        x3.view_mut((0, 0), (2, 2)).copy_from(&x);
        let e3 = exp_matrix(&x3);
        let e2 = exp_matrix(&x);
        assert!((e3.view((0, 0), (2, 2)) - &e2)
            .iter()
            .all(|z| z.norm() < 1e-12));
        assert!((e3[(2, 2)] - c(1.0)).norm() < 1e-12);
        let l3 = log_matrix(&e3);
        assert!((l3 - x3).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn exp_log_round_trip() {
        let xi = trig_loop(N, &[0.3, -0.2, 0.1, 0.25, -0.15, 0.05]);
        let g = exp_loop(&xi);
        assert!(LoopElement::from_samples(g.samples().to_vec()).is_ok());
        let back = log_loop(&g).unwrap();
        let err = back
            .samples()
            .iter()
            .zip(xi.samples())
            .map(|(a, b)| operator_norm(&(a - b)))
            .fold(0.0, f64::max);
        assert!(err < 1e-9);
        let zero = LoopAlgebraElement::zeros(N, 2).unwrap();
        assert_eq!(exp_loop(&zero), LoopElement::identity(N, 2).unwrap());
        assert!(
            log_loop(&LoopElement::identity(N, 2).unwrap())
                .unwrap()
                .sup_norm()
                == 0.0
        );
    }

    #[test]
    fn log_rejects_half_turn() {
        let mut samples = vec![Matrix::identity(2, 2); N];
        samples[5] = exp_matrix(&(su2_basis()[2].clone() * c(std::f64::consts::PI)));
        let g = LoopElement::from_samples(samples).unwrap();
        assert!(matches!(log_loop(&g), Err(Error::Branch { .. })));
    }

    #[test]
    fn multiply_identities_and_inverses() {
        let g = exp_loop(&trig_loop(N, &[0.1, 0.2, -0.3, 0.1, 0.05, 0.0]));
        let e = LoopElement::identity(N, 2).unwrap();
        assert_eq!(g.multiply(&e).unwrap(), g);
        assert!(g.multiply(&g.inverse()).unwrap().distance(&e).unwrap() < 1e-10);
    }

    #[test]
    fn omega_examples() {
        let x = su2_basis()[0].clone();
        let n = N;
        let cos = PeriodicFunction::from_fn(n, f64::cos).unwrap();
        let sin = PeriodicFunction::from_fn(n, f64::sin).unwrap();
        let zero = PeriodicFunction::zeros(n).unwrap();
        let xi = LoopAlgebraElement::from_su2_components([&cos, &zero, &zero]).unwrap();
        let eta = LoopAlgebraElement::from_su2_components([&sin, &zero, &zero]).unwrap();
        let expected = killing_form(&x, &x).re / 2.0;
        assert!((omega(&xi, &eta).unwrap() - expected).abs() < 1e-10);
        let constant = LoopAlgebraElement::constant(n, &x).unwrap();
        assert!(omega(&xi, &constant).unwrap().abs() < 1e-14);
    }

    #[test]
    fn cutoffs_partition_the_exponent() {
        let cover = CoverConfig::default();
        let cut = LoopCutoffs::new(&cover).unwrap();
        for k in 0..N {
            let t = grid_point(N, k);
            let w = cut.weights(t);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            for (j, wj) in w.iter().enumerate() {
                if *wj != 0.0 {
                    assert!(cover.outer(j + 1).contains(t), "weight {j} at {t}");
                }
            }
        }
    }

    #[test]
    fn loop_fragmentation_of_identity() {
        let cover = CoverConfig::default();
        let e = LoopElement::identity(N, 2).unwrap();
        let f = fragment_loop(&e, &cover).unwrap();
        for xi in f.factors() {
            assert_eq!(xi, &e);
        }
    }

    #[test]
    fn loop_supported_in_first_interval() {
        let n = 1024;
        let cover = CoverConfig::default();
        let bump = make_bump(
            IntervalArc::new(0.35, 2.55).unwrap(),
            IntervalArc::new(0.9, 2.0).unwrap(),
        )
        .unwrap();
        let f = PeriodicFunction::from_fn(n, |t| 0.04 * bump.value(t)).unwrap();
        let z = PeriodicFunction::zeros(n).unwrap();
        let g = exp_loop(&LoopAlgebraElement::from_su2_components([&f, &z, &f]).unwrap());
        let frag = fragment_loop(&g, &cover).unwrap();
        let i12 = cover.outer(1).intersect(&cover.outer(2))[0];
        let i13 = cover.outer(1).intersect(&cover.outer(3))[0];
        assert!(frag.xi2.support(DEFAULT_SUPPORT_TOL).is_within(&i12));
        assert!(frag.xi3.support(DEFAULT_SUPPORT_TOL).is_within(&i13));
        assert!(frag.product().unwrap().distance(&g).unwrap() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn omega_is_an_antisymmetric_cocycle(a in proptest::array::uniform6(-0.5f64..0.5),
                                            b in proptest::array::uniform6(-0.5f64..0.5),
                                            d in proptest::array::uniform6(-0.5f64..0.5)) {
            let (x, y, z) = (trig_loop(64, &a), trig_loop(64, &b), trig_loop(64, &d));
            prop_assert!((omega(&x, &y).unwrap() + omega(&y, &x).unwrap()).abs() < 1e-10);
            let jac = omega(&x.bracket(&y).unwrap(), &z).unwrap()
                + omega(&y.bracket(&z).unwrap(), &x).unwrap()
                + omega(&z.bracket(&x).unwrap(), &y).unwrap();
            prop_assert!(jac.abs() < 1e-9);
        }

        #[test]
        fn killing_form_is_symmetric_bilinear(a in proptest::array::uniform6(-1.0f64..1.0), s in -2.0f64..2.0) {
            let b = su2_basis();
            let x = &b[0] * c(a[0]) + &b[1] * c(a[1]) + &b[2] * c(a[2]);
            let y = &b[0] * c(a[3]) + &b[1] * c(a[4]) + &b[2] * c(a[5]);
            prop_assert!((killing_form(&x, &y) - killing_form(&y, &x)).norm() < 1e-14);
            let lhs = killing_form(&(&x * c(s) + &y), &y);
            let rhs = killing_form(&x, &y) * s + killing_form(&y, &y);
            prop_assert!((lhs - rhs).norm() < 1e-13);
        }

        #[test]
        fn closed_form_matches_sequential(a in proptest::array::uniform6(-0.05f64..0.05)) {
            let cover = CoverConfig::default();
            let g = exp_loop(&trig_loop(1024, &a));
            let closed = fragment_loop(&g, &cover).unwrap();
            let seq = fragment_loop_sequential(&g, &cover).unwrap();
            for (p, q) in closed.factors().into_iter().zip(seq.factors()) {
                prop_assert!(p.distance(q).unwrap() < 1e-9);
            }
            prop_assert!(closed.product().unwrap().distance(&g).unwrap() < 1e-9);
        }
    }
}
