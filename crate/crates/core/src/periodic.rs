//! Smooth 2π-periodic functions held as samples on a uniform power-of-two grid.
//!
//! A [`PeriodicFunction`] stores `N` samples at `t_k = 2πk/N` and is read as
//! the unique trigonometric polynomial of degree below `N/2` through them,
//! with the Nyquist mode split symmetrically (`cos(N t / 2)`), so real data
//! stays real under every operation. Evaluation, differentiation and
//! integration act on that interpolant and are exact for band-limited input.
//!
//! Anything that is not band-limited (compositions, bumps, products) picks up
//! an aliasing error; [`PeriodicFunction::tail`] measures the largest
//! coefficient in the top octave of the spectrum as a proxy for it.

use std::f64::consts::TAU;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Default number of grid points.
pub const DEFAULT_GRID: usize = 1024;

/// Spectral tail above which composition reports aliasing.
///
/// Compactly supported C^∞ bumps are never band-limited. At the default grid
/// the localized factors produced by fragmentation sit around `1e-8`, so the
/// gate is placed one decade above that.
pub const DEFAULT_TAIL_TOL: f64 = 1e-7;

/// Oversampling factor of [`Interpolant`] tables.
const OVERSAMPLE: usize = 16;
/// Stencil width of the local barycentric interpolation on the fine table.
const STENCIL: usize = 12;

/// Scalar types a periodic function can take values in.
pub trait Sample:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn to_complex(self) -> Complex64;
    /// Real types keep the real part.
    fn from_complex(z: Complex64) -> Self;
    fn from_real(x: f64) -> Self;
    fn scale(self, s: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl Sample for f64 {
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Sample for Complex64 {
    fn to_complex(self) -> Complex64 {
        self
    }
    fn from_complex(z: Complex64) -> Self {
        z
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Checks that `n` is an admissible grid size.
pub fn check_grid(n: usize) -> Result<()> {
    if n >= 16 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidGrid(n))
    }
}

/// The `k`-th grid point of an `n`-point grid.
#[inline]
pub fn grid_point(n: usize, k: usize) -> f64 {
    TAU * k as f64 / n as f64
}

/// All grid points of an `n`-point grid.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| grid_point(n, k)).collect()
}

/// Signed frequency of FFT bin `k` on an `n`-point grid (Nyquist reported as `+n/2`).
#[inline]
fn frequency(n: usize, k: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

fn fft_forward(data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(data.len()).process(data);
}

fn fft_inverse(data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(data.len()).process(data);
}

/// `exp(i k t)` for `k = 0..count`, reseeded periodically to bound drift.
fn phases(t: f64, count: usize) -> impl Iterator<Item = Complex64> {
    let step = Complex64::cis(t);
    let mut z = Complex64::new(1.0, 0.0);
    (0..count).map(move |k| {
        if k % 32 == 0 {
            z = Complex64::cis(k as f64 * t);
        }
        let out = z;
        z *= step;
        out
    })
}

/// A smooth 2π-periodic function sampled on a uniform power-of-two grid.
#[derive(Clone, Debug)]
pub struct PeriodicFunction<T: Sample = f64> {
    samples: Vec<T>,
    spectrum: OnceLock<Arc<Vec<Complex64>>>,
}

impl<T: Sample> PartialEq for PeriodicFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.samples == other.samples
    }
}

impl<T: Sample> PeriodicFunction<T> {
    pub fn from_samples(samples: Vec<T>) -> Result<Self> {
        check_grid(samples.len())?;
        Ok(Self {
            samples,
            spectrum: OnceLock::new(),
        })
    }

    /// Samples `f` at the grid points of an `n`-point grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> T) -> Result<Self> {
        check_grid(n)?;
        Self::from_samples((0..n).map(|k| f(grid_point(n, k))).collect())
    }

    pub fn constant(n: usize, value: T) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, T::default())
    }

    /// Builds the function from normalized FFT-ordered coefficients.
    pub fn from_spectrum(spectrum: Vec<Complex64>) -> Result<Self> {
        check_grid(spectrum.len())?;
        let mut data = spectrum.clone();
        fft_inverse(&mut data);
        let samples = data.into_iter().map(T::from_complex).collect();
        Ok(Self {
            samples,
            spectrum: OnceLock::from(Arc::new(spectrum)),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn grid(&self) -> Vec<f64> {
        grid(self.len())
    }

    /// Normalized coefficients `c_k` in FFT order, so that
    /// `f(t_j) = Σ_k c_k e^{i k t_j}`.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let n = self.len();
            let mut data: Vec<Complex64> = self.samples.iter().map(|s| s.to_complex()).collect();
            fft_forward(&mut data);
            let inv = 1.0 / n as f64;
            for c in &mut data {
                *c *= inv;
            }
            Arc::new(data)
        })
    }

    /// Value of the trigonometric interpolant at `t` (any real `t`).
    pub fn eval(&self, t: f64) -> T {
        let n = self.len();
        let c = self.spectrum();
        let half = n / 2;
        let mut acc = c[0];
        for (k, z) in phases(t, half).enumerate().skip(1) {
            acc += c[k] * z + c[n - k] * z.conj();
        }
        acc += c[half] * (half as f64 * t).cos();
        T::from_complex(acc)
    }

    /// Spectral derivative of order 1, 2 or 3.
    pub fn derivative(&self, order: u32) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be 1, 2 or 3, got {order}"
            )));
        }
        let n = self.len();
        let spectrum = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if k == n / 2 && order % 2 == 1 {
                    return Complex64::new(0.0, 0.0);
                }
                c * Complex64::new(0.0, frequency(n, k)).powu(order)
            })
            .collect();
        Self::from_spectrum(spectrum)
    }

    /// Mean value `c_0`.
    pub fn mean(&self) -> T {
        T::from_complex(self.spectrum()[0])
    }

    /// Value at `t` of the antiderivative `F` with `F(0) = 0` taken through
    /// the interpolant; the zero mode contributes `c_0 t`.
    pub fn antiderivative_at(&self, t: f64) -> T {
        T::from_complex(self.primitive(t) - self.primitive(0.0))
    }

    fn primitive(&self, t: f64) -> Complex64 {
        let n = self.len();
        let c = self.spectrum();
        let half = n / 2;
        let mut acc = c[0] * t;
        for (k, z) in phases(t, half).enumerate().skip(1) {
            let ik = Complex64::new(0.0, k as f64);
            acc += c[k] * z / ik - c[n - k] * z.conj() / ik;
        }
        acc + c[half] * (half as f64 * t).sin() / half as f64
    }

    /// `∫_a^b f(t) dt` for `a ≤ b ≤ a + 2π`. A full period uses the trapezoid
    /// rule; partial intervals use the spectral antiderivative.
    pub fn integrate(&self, a: f64, b: f64) -> Result<T> {
        if !(a <= b && b <= a + TAU * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::InvalidArgument(format!(
                "integration bounds must satisfy a <= b <= a + 2pi, got [{a}, {b}]"
            )));
        }
        if (b - a - TAU).abs() <= 8.0 * f64::EPSILON * TAU.max(a.abs()) {
            return Ok(self.mean().scale(TAU));
        }
        Ok(T::from_complex(self.primitive(b) - self.primitive(a)))
    }

    /// Largest coefficient magnitude in the top octave `N/4 ≤ |k| ≤ N/2`.
    pub fn tail(&self) -> f64 {
        let n = self.len();
        let c = self.spectrum();
        (n / 4..=3 * n / 4).map(|k| c[k].norm()).fold(0.0, f64::max)
    }

    /// Fails with [`Error::Aliasing`] when the tail exceeds `tol`.
    pub fn check_tail(&self, tol: f64) -> Result<()> {
        let tail = self.tail();
        if tail > tol {
            Err(Error::Aliasing { tail, tol })
        } else {
            Ok(())
        }
    }

    /// Spectral resampling to an `m`-point grid (zero padding or truncation).
    pub fn resample(&self, m: usize) -> Result<Self> {
        check_grid(m)?;
        let n = self.len();
        if m == n {
            return Ok(self.clone());
        }
        let c = self.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        if m > n {
            let half = n / 2;
            out[..half].copy_from_slice(&c[..half]);
            for k in 1..half {
                out[m - k] = c[n - k];
            }
            out[half] = c[half] * 0.5;
            out[m - half] = c[half] * 0.5;
        } else {
            let half = m / 2;
            out[..half].copy_from_slice(&c[..half]);
            for k in 1..half {
                out[m - k] = c[n - k];
            }
            out[half] = c[half] + c[n - half];
        }
        Self::from_spectrum(out)
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> PeriodicFunction<U> {
        PeriodicFunction {
            samples: self.samples.iter().map(|&s| f(s)).collect(),
            spectrum: OnceLock::new(),
        }
    }

    /// Pointwise combination with a function on the same grid.
    pub fn zip_with<U: Sample, V: Sample>(
        &self,
        other: &PeriodicFunction<U>,
        f: impl Fn(T, U) -> V,
    ) -> Result<PeriodicFunction<V>> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let samples = self
            .samples
            .iter()
            .zip(other.samples())
            .map(|(&a, &b)| f(a, b))
            .collect();
        PeriodicFunction::from_samples(samples)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|v| v.scale(s))
    }

    /// Largest sample magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.magnitude())
            .fold(0.0, f64::max)
    }

    /// Fast evaluator for many off-grid points.
    pub fn interpolant(&self) -> Interpolant<T> {
        Interpolant::new(self)
    }
}

impl PeriodicFunction<f64> {
    /// CSV with a `t,value` header and one row per grid point, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.grid().into_iter().zip(&self.samples) {
            out.push_str(&format!("{t:.16e},{v:.16e}\n"));
        }
        out
    }
}

/// Evaluates the trigonometric interpolant of a [`PeriodicFunction`] at
/// arbitrary points in `O(1)` per point.
///
/// The interpolant is first resampled spectrally onto a grid sixteen times
/// finer, then read off with a 12-point barycentric Lagrange stencil. On the
/// fine grid the highest retained mode advances by `π/16` per step, which
/// keeps the local interpolation error near rounding level.
#[derive(Clone, Debug)]
pub struct Interpolant<T: Sample> {
    fine: Vec<T>,
    step: f64,
}

/// Barycentric weights `(-1)^j C(STENCIL-1, j)` for equispaced nodes.
fn stencil_weights() -> [f64; STENCIL] {
    let mut w = [0.0; STENCIL];
    let mut binom = 1.0;
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = if j % 2 == 0 { binom } else { -binom };
        binom = binom * (STENCIL - 1 - j) as f64 / (j + 1) as f64;
    }
    w
}

impl<T: Sample> Interpolant<T> {
    fn new(f: &PeriodicFunction<T>) -> Self {
        let m = f.len() * OVERSAMPLE;
        let fine = f
            .resample(m)
            .map(|g| g.samples)
            .unwrap_or_else(|_| f.samples.clone());
        let step = TAU / fine.len() as f64;
        Self { fine, step }
    }

    pub fn eval(&self, t: f64) -> T {
        let m = self.fine.len();
        let x = t / self.step;
        let base = x.floor();
        let frac = x - base;
        let base = base as i64;
        if frac == 0.0 {
            return self.fine[base.rem_euclid(m as i64) as usize];
        }
        let weights = stencil_weights();
        let first = base - (STENCIL as i64 / 2 - 1);
        let mut num = T::default();
        let mut den = 0.0;
        for (j, w) in weights.iter().enumerate() {
            let offset = (first + j as i64) as f64 - x;
            let c = w / offset;
            let idx = (first + j as i64).rem_euclid(m as i64) as usize;
            num = num + self.fine[idx].scale(c);
            den += c;
        }
        num.scale(1.0 / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sin_k(n: usize, k: f64) -> PeriodicFunction {
        PeriodicFunction::from_fn(n, |t| (k * t).sin()).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(
            PeriodicFunction::<f64>::zeros(8),
            Err(Error::InvalidGrid(8))
        );
        assert_eq!(
            PeriodicFunction::<f64>::zeros(100),
            Err(Error::InvalidGrid(100))
        );
        assert!(PeriodicFunction::<f64>::zeros(16).is_ok());
    }

    #[test]
    fn eval_reproduces_band_limited_functions() {
        let f = sin_k(64, 1.0);
        assert!((f.eval(PI / 2.0) - 1.0).abs() < 1e-12);
        let c = PeriodicFunction::constant(64, 3.0).unwrap();
        assert!((c.eval(1.234) - 3.0).abs() < 1e-14);
        let f3 = sin_k(64, 3.0);
        assert!((f3.eval(0.1) - 0.3f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn eval_is_exact_on_grid_points() {
        let f = PeriodicFunction::from_fn(32, |t| (t.cos() * 3.0).exp()).unwrap();
        for (k, &s) in f.samples().iter().enumerate() {
            assert!((f.eval(grid_point(32, k)) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_of_trig_polynomials() {
        let f = sin_k(128, 1.0);
        let d = f.derivative(1).unwrap();
        for (t, v) in d.grid().iter().zip(d.samples()) {
            assert!((v - t.cos()).abs() < 1e-12);
        }
        let f2 = sin_k(128, 2.0);
        let d3 = f2.derivative(3).unwrap();
        for (t, v) in d3.grid().iter().zip(d3.samples()) {
            assert!((v + 8.0 * (2.0 * t).cos()).abs() < 1e-10);
        }
        let c = PeriodicFunction::constant(16, 2.5)
            .unwrap()
            .derivative(2)
            .unwrap();
        assert!(c.samples().iter().all(|&v| v == 0.0));
        assert!(f.derivative(0).is_err());
        assert!(f.derivative(4).is_err());
    }

    #[test]
    fn integrals() {
        let cos2 = PeriodicFunction::from_fn(64, |t| t.cos().powi(2)).unwrap();
        assert!((cos2.integrate(0.0, TAU).unwrap() - PI).abs() < 1e-10);
        let s = sin_k(64, 1.0);
        assert!(s.integrate(0.0, TAU).unwrap().abs() < 1e-12);
        assert!((s.integrate(0.0, PI).unwrap() - 2.0).abs() < 1e-10);
        assert!(
            (cos2.integrate(0.3, 1.7).unwrap()
                - ((1.7 - 0.3) / 2.0 + ((3.4f64).sin() - (0.6f64).sin()) / 4.0))
                .abs()
                < 1e-12
        );
        assert!(s.integrate(1.0, 0.5).is_err());
        assert!(s.integrate(0.0, 7.0).is_err());
    }

    #[test]
    fn complex_modes() {
        let e2 = PeriodicFunction::<Complex64>::from_fn(64, |t| Complex64::cis(2.0 * t)).unwrap();
        let d = e2.derivative(1).unwrap();
        let z = d.eval(0.7);
        assert!((z - Complex64::new(0.0, 2.0) * Complex64::cis(1.4)).norm() < 1e-12);
        let full = e2.integrate(0.0, TAU).unwrap();
        assert!(full.norm() < 1e-13);
    }

    #[test]
    fn resample_round_trip() {
        let f = PeriodicFunction::from_fn(64, |t| (2.0 * t).sin() + 0.3 * (5.0 * t).cos()).unwrap();
        let back = f.resample(128).unwrap().resample(64).unwrap();
        for (a, b) in f.samples().iter().zip(back.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn nyquist_mode_stays_real() {
        let f = PeriodicFunction::from_fn(16, |t| (8.0 * t).cos()).unwrap();
        assert!((f.eval(0.0) - 1.0).abs() < 1e-12);
        assert!((f.eval(0.1) - (0.8f64).cos()).abs() < 1e-12);
        let up = f.resample(32).unwrap();
        assert!((up.eval(0.1) - (0.8f64).cos()).abs() < 1e-12);
    }

    #[test]
    fn tail_detects_unresolved_content() {
        let smooth = sin_k(64, 3.0);
        assert!(smooth.tail() < 1e-14);
        let rough = PeriodicFunction::from_fn(64, |t| if t < PI { 1.0 } else { 0.0 }).unwrap();
        assert!(rough.tail() > 1e-3);
        assert!(matches!(
            rough.check_tail(1e-9),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn interpolant_matches_direct_evaluation() {
        let f =
            PeriodicFunction::from_fn(256, |t| (t.sin() * 2.0).exp() + (7.0 * t).cos()).unwrap();
        let fast = f.interpolant();
        for i in 0..200 {
            let t = -3.0 + 0.0613 * i as f64;
            assert!((fast.eval(t) - f.eval(t)).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let f = PeriodicFunction::constant(16, 1.0 / 3.0).unwrap();
        let csv = f.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,value"));
        let row = lines.next().unwrap();
        assert_eq!(row, "0.0000000000000000e0,3.3333333333333331e-1");
        assert_eq!(csv.lines().count(), 17);
    }
}
