//! Seeded property suites behind `verify`.
//!
//! Trial `i` of a suite draws from its own ChaCha8 stream derived from the
//! seed, the suite and `i`, so results do not depend on how trials are
//! scheduled across threads.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cocycle::{
    bott, bott_to_vect_ratio, cocycle_identity_residual, vect_bracket, vect_cocycle, vir_multiply,
    Bott, VectField, VirasoroElement,
};
use crate::diffeo::{make_bump, BumpFunction, CircleDiffeo, CoverConfig, IntervalArc};
use crate::error::{Error, Result};
use crate::frag_diff::Fragmenter;
use crate::loop_group::{
    exp_loop, fragment_loop, fragment_loop_sequential, omega, operator_norm, LoopElement, Matrix,
};
use crate::periodic::{grid_point, PeriodicFunction};
use crate::report::{Check, RunReport};
use crate::sample::{random_diffeo, random_localized_diffeo, random_loop};
use crate::verma::{determinant, Partition, VermaModule, VermaState};

/// Size of random diffeomorphisms in the fragmentation suite.
pub const DIFF_EPSILON: f64 = 0.01;
/// Size of random diffeomorphisms in the cocycle suite.
pub const COCYCLE_EPSILON: f64 = 0.05;
/// Bound on `max ‖ξ(t)‖₂` for random loops.
pub const LOOP_SIZE: f64 = 0.05;
/// Grid for fragmentation and loop suites.
pub const FRAGMENT_GRID: usize = 1024;
/// Grid for the cocycle suite.
pub const COCYCLE_GRID: usize = 256;
/// Smallest grid for the locality checks, whose windowed fields need more
/// resolution than plain trigonometric polynomials.
pub const LOCALITY_GRID: usize = 512;
/// `(c, h)` pairs of the Verma suite, as `(p, q)` fractions.
pub const VERMA_WEIGHTS: [((i64, i64), (i64, i64)); 4] = [
    ((1, 2), (0, 1)),
    ((1, 2), (1, 16)),
    ((1, 1), (1, 1)),
    ((26, 1), (3, 2)),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Diff,
    Loop,
    Cocycle,
    Verma,
}

impl Suite {
    const NAMES: [(&'static str, Suite); 5] = [
        ("all", Suite::All),
        ("diff", Suite::Diff),
        ("loop", Suite::Loop),
        ("cocycle", Suite::Cocycle),
        ("verma", Suite::Verma),
    ];

    fn tag(self) -> u64 {
        match self {
            Suite::All => 0,
            Suite::Diff => 1,
            Suite::Loop => 2,
            Suite::Cocycle => 3,
            Suite::Verma => 4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Self::NAMES
            .iter()
            .find(|(_, s)| s == self)
            .map(|(n, _)| *n)
            .unwrap_or("?");
        f.write_str(name)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, suite)| *suite)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown suite {s:?}; expected all, diff, loop, cocycle or verma"
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    /// Overrides the suite's default grid size.
    pub grid: Option<usize>,
    pub cover: CoverConfig,
}

impl VerifyOptions {
    pub fn new(suite: Suite, seed: u64, trials: usize) -> Self {
        VerifyOptions {
            suite,
            seed,
            trials,
            grid: None,
            cover: CoverConfig::default(),
        }
    }

    fn describe(&self) -> String {
        format!(
            "verify suite={} seed={} trials={} grid={:?} cover={}",
            self.suite,
            self.seed,
            self.trials,
            self.grid,
            self.cover.to_json()
        )
    }
}

/// RNG for trial `index` of `suite` under `seed`. `part` separates
/// independent sub-experiments of one suite.
pub fn trial_rng(seed: u64, suite: Suite, part: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.tag() << 56) | (part << 48) | index as u64);
    rng
}

/// Runs the selected suites. With zero trials the report has no checks.
pub fn run(options: &VerifyOptions) -> Result<RunReport> {
    let mut report = RunReport::new(format!("verify {}", options.suite), &options.describe());
    if options.trials == 0 {
        return Ok(report);
    }
    let (seed, trials, cover) = (options.seed, options.trials, &options.cover);
    let want = |s: Suite| options.suite == Suite::All || options.suite == s;
    if want(Suite::Diff) {
        let n = options.grid.unwrap_or(FRAGMENT_GRID);
        fragmentation_checks(seed, trials, n, cover)?
            .merge(refinement_checks(seed, trials, n, cover)?)
            .add_to(&mut report, "diff");
    }
    if want(Suite::Loop) {
        let n = options.grid.unwrap_or(FRAGMENT_GRID);
        loop_checks(seed, trials, n, cover)?.add_to(&mut report, "loop");
    }
    if want(Suite::Cocycle) {
        let n = options.grid.unwrap_or(COCYCLE_GRID);
        cocycle_checks(seed, trials, n)?.add_to(&mut report, "cocycle");
    }
    if want(Suite::Verma) {
        report.extend(verma_checks());
    }
    Ok(report)
}

struct Metric {
    name: &'static str,
    tol: f64,
}

const fn metric(name: &'static str, tol: f64) -> Metric {
    Metric { name, tol }
}

/// Checks of one suite, with the first error raised by a trial if any.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub checks: Vec<Check>,
    pub first_error: Option<String>,
}

impl Section {
    fn merge(mut self, other: Section) -> Section {
        self.checks.extend(other.checks);
        self.first_error = self.first_error.or(other.first_error);
        self
    }

    fn add_to(self, report: &mut RunReport, prefix: &str) {
        report.extend(self.checks);
        if let Some(message) = self.first_error {
            report.note(format!("{prefix}.first_error"), message);
        }
    }
}

/// Runs `trial` for every index in parallel and reduces each metric by its
/// maximum. Failed trials are counted in `<prefix>.failed_trials`.
fn aggregate<F>(prefix: &str, metrics: &[Metric], trials: usize, trial: F) -> Section
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    let results: Vec<Result<Vec<f64>>> = (0..trials).into_par_iter().map(&trial).collect();
    let mut worst = vec![f64::NEG_INFINITY; metrics.len()];
    let mut failed = 0usize;
    let mut first_error = None;
    for (i, result) in results.iter().enumerate() {
        match result {
            Ok(values) => {
                for (w, v) in worst.iter_mut().zip(values) {
                    // NaN propagates so it cannot hide behind a max.
                    *w = if v.is_nan() || w.is_nan() {
                        f64::NAN
                    } else {
                        w.max(*v)
                    };
                }
            }
            Err(e) => {
                failed += 1;
                first_error.get_or_insert_with(|| format!("trial {i}: {e}"));
            }
        }
    }
    let mut checks = vec![Check::exact(
        format!("{prefix}.failed_trials"),
        failed as f64,
    )];
    for (m, w) in metrics.iter().zip(worst) {
        checks.push(Check::below(format!("{prefix}.{}", m.name), w, m.tol));
    }
    Section {
        checks,
        first_error,
    }
}

/// `sup |γ(t) − t|` over grid points outside `arc`.
pub fn displacement_outside(arc: &IntervalArc, g: &CircleDiffeo) -> f64 {
    let n = g.len();
    g.periodic_part()
        .samples()
        .iter()
        .enumerate()
        .filter(|(k, _)| !arc.contains(grid_point(n, *k)))
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max)
}

/// `sup |γ(t) − t|` over grid points inside `arc`.
pub fn displacement_inside(arc: &IntervalArc, g: &CircleDiffeo) -> f64 {
    let n = g.len();
    g.periodic_part()
        .samples()
        .iter()
        .enumerate()
        .filter(|(k, _)| arc.contains(grid_point(n, *k)))
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max)
}

/// `sup ‖g(t) − 1‖₂` over grid points outside `arc`.
pub fn loop_deviation_outside(arc: &IntervalArc, g: &LoopElement) -> f64 {
    let n = g.len();
    let one = Matrix::identity(g.dim(), g.dim());
    g.samples()
        .iter()
        .enumerate()
        .filter(|(k, _)| !arc.contains(grid_point(n, *k)))
        .map(|(_, m)| operator_norm(&(m - &one)))
        .fold(0.0, f64::max)
}

/// A bump on `arc` shrunk by `inset` at both ends, with plateau in its
/// middle third.
fn inset_bump(arc: IntervalArc, inset: f64) -> Result<BumpFunction> {
    let (a, b) = (arc.start() + inset, arc.end() - inset);
    let third = (b - a) / 3.0;
    make_bump(
        IntervalArc::new(a, b)?,
        IntervalArc::new(a + third, b - third)?,
    )
}

/// Random elements of `𝒰_{0.01}`: reconstruction, support, bound and
/// positivity checks of the three-factor fragmentation.
pub fn fragmentation_checks(
    seed: u64,
    trials: usize,
    n: usize,
    cover: &CoverConfig,
) -> Result<Section> {
    let fragmenter = Fragmenter::new(cover.clone())?;
    let loc = fragmenter.first_localizer();
    let (alpha_bound, beta_bound) = (loc.alpha_bound(DIFF_EPSILON), loc.beta_bound(DIFF_EPSILON));
    let metrics = [
        metric("reconstruction", 1e-7),
        metric("outside_support", 1e-9),
        metric("alpha1_over_bound", 1.0),
        metric("beta1_over_bound", 1.0),
        metric("negated_min_factor_derivative", 0.0),
    ];
    Ok(aggregate("diff", &metrics, trials, |i| {
        let mut rng = trial_rng(seed, Suite::Diff, 0, i);
        let g = random_diffeo(&mut rng, n, DIFF_EPSILON)?;
        let r = fragmenter.fragment(&g)?;
        let outside = (1..=3)
            .zip(r.factors())
            .map(|(j, xi)| displacement_outside(&cover.outer(j), xi))
            .fold(0.0, f64::max);
        Ok(vec![
            r.reconstruction_error,
            outside,
            r.alpha1.abs() / alpha_bound,
            r.beta1.abs() / beta_bound,
            -r.min_derivative[0].min(r.min_derivative[1]),
        ])
    }))
}

/// Support refinement: `γ` supported in `I₁` fragments into `Ξ₂`, `Ξ₃`
/// supported in `I₁∩I₂`, `I₁∩I₃`; `γ` fixing `(a₂, b₁)` gives `Ξ₁ = id` there.
pub fn refinement_checks(
    seed: u64,
    trials: usize,
    n: usize,
    cover: &CoverConfig,
) -> Result<Section> {
    let fragmenter = Fragmenter::new(cover.clone())?;
    let (i1, i2, i3) = (cover.outer(1), cover.outer(2), cover.outer(3));
    let i12 = overlap(&i1, &i2)?;
    let i13 = overlap(&i1, &i3)?;
    let inside_first = inset_bump(i1, 0.05)?;
    let avoiding_overlap = inset_bump(complement(&i12)?, 0.05)?;
    let metrics = [
        metric("outside_overlaps", 1e-9),
        metric("first_factor_on_overlap", 1e-9),
    ];
    Ok(aggregate("diff.refinement", &metrics, trials, |i| {
        let mut rng = trial_rng(seed, Suite::Diff, 1, i);
        let g = random_localized_diffeo(&mut rng, n, DIFF_EPSILON, &inside_first)?;
        let r = fragmenter.fragment(&g)?;
        let refined = displacement_outside(&i12, &r.xi2).max(displacement_outside(&i13, &r.xi3));
        let g = random_localized_diffeo(&mut rng, n, DIFF_EPSILON, &avoiding_overlap)?;
        let r = fragmenter.fragment(&g)?;
        Ok(vec![refined, displacement_inside(&i12, &r.xi1)])
    }))
}

fn overlap(a: &IntervalArc, b: &IntervalArc) -> Result<IntervalArc> {
    a.intersect(b)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Geometry("cover intervals do not overlap".into()))
}

/// The complement of the closure of `arc`.
fn complement(arc: &IntervalArc) -> Result<IntervalArc> {
    IntervalArc::new(arc.end(), arc.start() + TAU)
}

/// Random loops of size below `0.05`: closed-form and sequential
/// fragmentation, support containment and refinement.
pub fn loop_checks(seed: u64, trials: usize, n: usize, cover: &CoverConfig) -> Result<Section> {
    let (i1, i2, i3) = (cover.outer(1), cover.outer(2), cover.outer(3));
    let i12 = overlap(&i1, &i2)?;
    let i13 = overlap(&i1, &i3)?;
    let inside_first = inset_bump(i1, 0.05)?;
    let metrics = [
        metric("reconstruction", 1e-9),
        metric("sequential_agreement", 1e-9),
        metric("outside_support", 1e-10),
        metric("refinement_outside_overlaps", 1e-10),
    ];
    Ok(aggregate("loop", &metrics, trials, |i| {
        let mut rng = trial_rng(seed, Suite::Loop, 0, i);
        let g = exp_loop(&random_loop(&mut rng, n, LOOP_SIZE, |_| 1.0)?);
        let closed = fragment_loop(&g, cover)?;
        let seq = fragment_loop_sequential(&g, cover)?;
        let reconstruction = closed.product()?.distance(&g)?;
        let mut agreement: f64 = 0.0;
        for (p, q) in closed.factors().into_iter().zip(seq.factors()) {
            agreement = agreement.max(p.distance(q)?);
        }
        let outside = [i1, i2, i3]
            .iter()
            .zip(closed.factors())
            .map(|(arc, xi)| loop_deviation_outside(arc, xi))
            .fold(0.0, f64::max);
        let local = exp_loop(&random_loop(&mut rng, n, LOOP_SIZE, |t| {
            inside_first.value(t)
        })?);
        let frag = fragment_loop(&local, cover)?;
        let refined =
            loop_deviation_outside(&i12, &frag.xi2).max(loop_deviation_outside(&i13, &frag.xi3));
        Ok(vec![reconstruction, agreement, outside, refined])
    }))
}

/// Bott and Virasoro group identities on `𝒰_{0.05}`, and the Lie algebra
/// cocycles `ω` and `𝐜` on random elements.
pub fn cocycle_checks(seed: u64, trials: usize, n: usize) -> Result<Section> {
    let left = make_bump(IntervalArc::new(0.3, 2.8)?, IntervalArc::new(1.3, 1.8)?)?;
    let right = make_bump(IntervalArc::new(3.0, 6.0)?, IntervalArc::new(4.2, 4.8)?)?;
    let metrics = [
        metric("bott_identity", 1e-8),
        metric("virasoro_associativity", 1e-8),
        metric("bott_rotations", 1e-12),
        metric("omega_antisymmetry", 1e-8),
        metric("omega_jacobi", 1e-8),
        metric("omega_diff_invariance", 1e-8),
        metric("omega_locality", 1e-8),
        metric("vect_antisymmetry", 1e-8),
        metric("vect_jacobi", 1e-8),
        metric("vect_locality", 1e-10),
    ];
    let mut section = aggregate("cocycle", &metrics, trials, |i| {
        let mut rng = trial_rng(seed, Suite::Cocycle, 0, i);
        let [g1, g2, g3] = [0, 1, 2].map(|_| random_diffeo(&mut rng, n, COCYCLE_EPSILON));
        let (g1, g2, g3) = (g1?, g2?, g3?);
        let bott_residual = cocycle_identity_residual(&Bott, &g1, &g2, &g3)?;

        let [a1, a2, a3] = [0, 1, 2].map(|_| rng.random_range(-1.0..1.0));
        let x = VirasoroElement::new(a1, g1);
        let y = VirasoroElement::new(a2, g2);
        let z = VirasoroElement::new(a3, g3);
        let lhs = vir_multiply(&vir_multiply(&x, &y)?, &z)?;
        let rhs = vir_multiply(&x, &vir_multiply(&y, &z)?)?;
        let assoc = (lhs.a - rhs.a).abs().max(lhs.gamma.distance(&rhs.gamma)?);

        let r1 = CircleDiffeo::rotation(n, rng.random_range(-PI..PI))?;
        let r2 = CircleDiffeo::rotation(n, rng.random_range(-PI..PI))?;
        let rotations = bott(&r1, &r2)?.abs();

        let [xi, eta, zeta] = [0, 1, 2].map(|_| random_loop(&mut rng, n, 1.0, |_| 1.0));
        let (xi, eta, zeta) = (xi?, eta?, zeta?);
        let anti = (omega(&xi, &eta)? + omega(&eta, &xi)?).abs();
        let jacobi = (omega(&xi.bracket(&eta)?, &zeta)?
            + omega(&eta.bracket(&zeta)?, &xi)?
            + omega(&zeta.bracket(&xi)?, &eta)?)
        .abs();
        let f = random_diffeo(&mut rng, n, COCYCLE_EPSILON)?;
        let invariance =
            (omega(&xi.reparametrize(&f)?, &eta.reparametrize(&f)?)? - omega(&xi, &eta)?).abs();
        let locality = omega(
            &xi.scale_by(|t| left.value(t)),
            &eta.scale_by(|t| right.value(t)),
        )?
        .abs();

        let [u, v, w] = [0, 1, 2].map(|_| random_field(&mut rng, n));
        let (u, v, w) = (u?, v?, w?);
        let c = |p: &VectField, q: &VectField| vect_cocycle(p.function(), q.function());
        let vect_anti = (c(&u, &v)? + c(&v, &u)?).norm();
        let vect_jacobi = (c(&vect_bracket(&u, &v)?, &w)?
            + c(&vect_bracket(&v, &w)?, &u)?
            + c(&vect_bracket(&w, &u)?, &v)?)
        .norm();
        let m = n.max(LOCALITY_GRID);
        let ul = PeriodicFunction::from_fn(m, |t| left.value(t) * u.function().eval(t))?;
        let vr = PeriodicFunction::from_fn(m, |t| right.value(t) * v.function().eval(t))?;
        let vect_local = vect_cocycle(&ul, &vr)?.norm();

        Ok(vec![
            bott_residual,
            assoc,
            rotations,
            anti,
            jacobi,
            invariance,
            locality,
            vect_anti,
            vect_jacobi,
            vect_local,
        ])
    });
    section.checks.push(Check::below(
        "cocycle.vect_modes",
        vect_mode_defect(n, 2)?,
        1e-9,
    ));
    section.checks.push(Check::below(
        "cocycle.bott_vect_ratio",
        bott_vect_ratio_defect(n)?,
        1e-6,
    ));
    Ok(section)
}

/// Real vector field with random modes `1 ≤ k ≤ 4`.
fn random_field(rng: &mut ChaCha8Rng, n: usize) -> Result<VectField> {
    let modes = crate::sample::random_modes(rng);
    VectField::from_fn(n, |t| crate::sample::fourier_sum(&modes, t))
}

/// `|𝐜(e^{imθ}, e^{−imθ}) + m(m² − 1)|`.
pub fn vect_mode_defect(n: usize, m: i32) -> Result<f64> {
    let mode = |k: i32| {
        PeriodicFunction::<Complex64>::from_fn(n, |t| Complex64::from_polar(1.0, f64::from(k) * t))
    };
    let value = vect_cocycle(&mode(m)?, &mode(-m)?)?;
    let m = f64::from(m);
    Ok((value + Complex64::new(m * (m * m - 1.0), 0.0)).norm())
}

/// `|ratio − 1/12|` for the comparison of the Bott antisymmetrization with
/// the cubic part of `𝐜`, on a fixed pair of fields.
pub fn bott_vect_ratio_defect(n: usize) -> Result<f64> {
    let f = PeriodicFunction::from_fn(n, |t| {
        0.3 * t.cos() - 0.2 * (2.0 * t).sin() + 0.5 * (3.0 * t).cos()
    })?;
    let g = PeriodicFunction::from_fn(n, |t| {
        0.4 * (3.0 * t).sin() + 0.1 * (2.0 * t).cos() - 0.3 * t.sin()
    })?;
    Ok((bott_to_vect_ratio(&f, &g)? - 1.0 / 12.0).abs())
}

/// Exact bracket, Gram and central-charge checks on `M(c, h)` at level 8.
pub fn verma_checks() -> Vec<Check> {
    let level = crate::verma::DEFAULT_LEVEL;
    let runs: Vec<Vec<Check>> = VERMA_WEIGHTS
        .par_iter()
        .map(|&(c, h)| {
            let module = VermaModule::from_ratios(c, h, level);
            let two_h = module.weight() * BigRational::from_integer(BigInt::from(2));
            let label = format!("c={},h={}", module.central_charge(), module.weight());
            let mut failures = 0usize;
            for m in -4i64..=4 {
                for k in -4i64..=4 {
                    let room = level - (m.abs() + k.abs()) as u32;
                    for p in module.basis_up_to(room) {
                        if !matches!(
                            module.commutator_check(m, k, &VermaState::basis(p)),
                            Ok(true)
                        ) {
                            failures += 1;
                        }
                    }
                }
            }
            let gram1 = module
                .gram_matrix(1)
                .map(|g| (&g[0][0] - &two_h).abs().to_f64().unwrap_or(f64::NAN))
                .unwrap_or(f64::NAN);
            let mut asymmetric = 0usize;
            for d in 0..=4 {
                match module.gram_matrix(d) {
                    Ok(g) => {
                        for (i, row) in g.iter().enumerate() {
                            asymmetric += row
                                .iter()
                                .enumerate()
                                .filter(|(j, v)| *v != &g[*j][i])
                                .count();
                        }
                    }
                    Err(_) => asymmetric += 1,
                }
            }
            let det1 = module
                .gram_matrix(1)
                .map(|g| {
                    (determinant(&g) - &two_h)
                        .abs()
                        .to_f64()
                        .unwrap_or(f64::NAN)
                })
                .unwrap_or(f64::NAN);
            let central = Partition::all_of_level(3)
                .into_iter()
                .filter(|p| {
                    let v = VermaState::basis(p.clone());
                    module.act_central(&v) != v.scaled(module.central_charge())
                })
                .count();
            vec![
                Check::exact(format!("verma.bracket[{label}]"), failures as f64),
                Check::exact(format!("verma.gram_level1[{label}]"), gram1),
                Check::exact(format!("verma.gram_level1_det[{label}]"), det1),
                Check::exact(format!("verma.gram_symmetry[{label}]"), asymmetric as f64),
                Check::exact(format!("verma.central_scalar[{label}]"), central as f64),
            ]
        })
        .collect();
    runs.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in ["all", "diff", "loop", "cocycle", "verma"] {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn zero_trials_give_an_empty_passing_report() {
        let r = run(&VerifyOptions::new(Suite::All, 1, 0)).unwrap();
        assert!(r.checks.is_empty());
        assert!(r.pass);
    }

    #[test]
    fn trial_streams_are_distinct_and_repeatable() {
        let a: u64 = trial_rng(5, Suite::Diff, 0, 3).random();
        let b: u64 = trial_rng(5, Suite::Diff, 0, 3).random();
        let c: u64 = trial_rng(5, Suite::Diff, 0, 4).random();
        let d: u64 = trial_rng(5, Suite::Loop, 0, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn verma_suite_passes() {
        let r = run(&VerifyOptions::new(Suite::Verma, 0, 1)).unwrap();
        assert_eq!(r.checks.len(), 20);
        assert!(r.pass, "{}", r.to_text());
    }

    #[test]
    fn small_runs_pass() {
        for suite in [Suite::Diff, Suite::Loop, Suite::Cocycle] {
            let r = run(&VerifyOptions::new(suite, 42, 3)).unwrap();
            assert!(r.pass, "{}", r.to_text());
        }
    }

    #[test]
    fn failed_trials_are_counted() {
        let Section {
            checks,
            first_error,
        } = aggregate("x", &[metric("m", 1.0)], 4, |i| {
            if i == 2 {
                Err(Error::InvalidArgument("boom".into()))
            } else {
                Ok(vec![i as f64 * 0.1])
            }
        });
        assert_eq!(checks[0].residual, 1.0);
        assert!(!checks[0].pass);
        assert!((checks[1].residual - 0.3).abs() < 1e-15);
        assert!(checks[1].pass);
        assert_eq!(first_error.unwrap(), "trial 2: invalid argument: boom");
    }
}
