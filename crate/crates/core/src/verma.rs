//! Level-truncated Virasoro lowest-weight modules with exact rational
//! coefficients.
//!
//! A basis state is `L_{-n₁} ⋯ L_{-n_k} |h⟩` with `n₁ ≥ ⋯ ≥ n_k ≥ 1`, labelled
//! by the partition `(n₁, …, n_k)`. Generators act by commuting lowering
//! operators to the right until they hit `|h⟩`, using
//!
//! `[L_m, L_n] = (m − n) L_{m+n} + m(m² − 1)/12 · δ_{m,−n} · c`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Truncation level used when none is given.
pub const DEFAULT_LEVEL: u32 = 8;

/// Weakly decreasing positive parts. The empty partition labels `|h⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts `parts` into canonical order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of `level`, largest first part first.
    pub fn all_of_level(level: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for part in (1..=max.min(rest)).rev() {
                prefix.push(part);
                rec(rest - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(level, level, &mut Vec::new(), &mut out);
        out
    }

    fn split_first(&self) -> Option<(u32, Partition)> {
        self.0
            .split_first()
            .map(|(&head, tail)| (head, Partition(tail.to_vec())))
    }

    fn prepend(&self, part: u32) -> Partition {
        debug_assert!(self.0.first().is_none_or(|&first| first <= part));
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.push(part);
        parts.extend_from_slice(&self.0);
        Partition(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "|h>");
        }
        for part in &self.0 {
            write!(f, "L-{part} ")?;
        }
        write!(f, "|h>")
    }
}

/// Finitely supported rational combination of basis states.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VermaState {
    terms: BTreeMap<Partition, BigRational>,
}

impl VermaState {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(partition: Partition) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(partition, BigRational::one());
        VermaState { terms }
    }

    /// The lowest-weight vector `|h⟩`.
    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, partition: &Partition) -> BigRational {
        self.terms
            .get(partition)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.terms.iter()
    }

    /// Highest level carrying a nonzero coefficient; 0 for the zero state.
    pub fn level(&self) -> u32 {
        self.terms.keys().map(Partition::level).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, partition: Partition, coefficient: &BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(partition)
            .or_insert_with(BigRational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &VermaState, factor: &BigRational) {
        if factor.is_zero() {
            return;
        }
        for (partition, coefficient) in &other.terms {
            self.add_term(partition.clone(), &(coefficient * factor));
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> VermaState {
        let mut out = VermaState::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn sub(&self, other: &VermaState) -> VermaState {
        let mut out = self.clone();
        out.add_scaled(other, &-BigRational::one());
        out
    }
}

impl fmt::Display for VermaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (partition, coefficient)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coefficient}) {partition}")?;
        }
        Ok(())
    }
}

/// Square matrix of exact rationals, row major.
pub type RationalMatrix = Vec<Vec<BigRational>>;

/// `M(c, h)` truncated at `max_level`, with a memo of generator actions on
/// basis states.
#[derive(Debug)]
pub struct VermaModule {
    c: BigRational,
    h: BigRational,
    max_level: u32,
    cache: Mutex<HashMap<(i64, Partition), VermaState>>,
}

impl Clone for VermaModule {
    fn clone(&self) -> Self {
        VermaModule::new(self.c.clone(), self.h.clone(), self.max_level)
    }
}

impl VermaModule {
    pub fn new(c: BigRational, h: BigRational, max_level: u32) -> Self {
        VermaModule {
            c,
            h,
            max_level,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Convenience constructor from `numerator/denominator` pairs.
    pub fn from_ratios(c: (i64, i64), h: (i64, i64), max_level: u32) -> Self {
        let ratio = |(p, q): (i64, i64)| BigRational::new(BigInt::from(p), BigInt::from(q));
        Self::new(ratio(c), ratio(h), max_level)
    }

    pub fn central_charge(&self) -> &BigRational {
        &self.c
    }

    pub fn weight(&self) -> &BigRational {
        &self.h
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Basis states of all levels up to and including `level`.
    pub fn basis_up_to(&self, level: u32) -> Vec<Partition> {
        (0..=level.min(self.max_level))
            .flat_map(Partition::all_of_level)
            .collect()
    }

    /// `m(m² − 1)/12`.
    pub fn central_coefficient(m: i64) -> BigRational {
        BigRational::new(BigInt::from(m * (m * m - 1)), BigInt::from(12))
    }

    /// The central element, acting as the scalar `c`.
    pub fn act_central(&self, v: &VermaState) -> VermaState {
        v.scaled(&self.c)
    }

    /// `L_m v`.
    pub fn act(&self, m: i64, v: &VermaState) -> Result<VermaState> {
        let mut out = VermaState::zero();
        for (partition, coefficient) in v.terms() {
            let image = self.act_basis(m, partition)?;
            out.add_scaled(&image, coefficient);
        }
        Ok(out)
    }

    /// Applies `L_{m_1} L_{m_2} ⋯ L_{m_k}` to `v`, rightmost first.
    pub fn act_word(&self, word: &[i64], v: &VermaState) -> Result<VermaState> {
        word.iter()
            .rev()
            .try_fold(v.clone(), |state, &m| self.act(m, &state))
    }

    fn act_basis(&self, m: i64, partition: &Partition) -> Result<VermaState> {
        let level = i64::from(partition.level());
        let target = level - m;
        if target < 0 {
            return Ok(VermaState::zero());
        }
        if target > i64::from(self.max_level) {
            return Err(Error::Truncation {
                level: target as u32,
                max: self.max_level,
            });
        }
        if m == 0 {
            let eigenvalue = &self.h + BigRational::from_integer(BigInt::from(level));
            return Ok(VermaState::basis(partition.clone()).scaled(&eigenvalue));
        }
        let key = (m, partition.clone());
        if let Some(hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let result = self.normal_order(m, partition)?;
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(key, result.clone());
        Ok(result)
    }

    fn normal_order(&self, m: i64, partition: &Partition) -> Result<VermaState> {
        let Some((first, rest)) = partition.split_first() else {
            // m > 0 on |h⟩ vanishes; m < 0 on |h⟩ is a basis state.
            return Ok(if m > 0 {
                VermaState::zero()
            } else {
                VermaState::basis(Partition(vec![(-m) as u32]))
            });
        };
        let n = i64::from(first);
        if m < 0 && -m >= n {
            return Ok(VermaState::basis(partition.prepend((-m) as u32)));
        }
        // L_m L_{-n} w = L_{-n} L_m w + [L_m, L_{-n}] w
        let rest_state = VermaState::basis(rest);
        let moved = self.act(m, &rest_state)?;
        let mut out = self.act(-n, &moved)?;
        let bracket = self.act(m - n, &rest_state)?;
        out.add_scaled(&bracket, &BigRational::from_integer(BigInt::from(m + n)));
        if m == n {
            let central = &Self::central_coefficient(m) * &self.c;
            out.add_scaled(&rest_state, &central);
        }
        Ok(out)
    }

    /// `(L_m L_n − L_n L_m) v − (m − n) L_{m+n} v − m(m² − 1)/12 δ_{m,−n} c v`.
    pub fn commutator_defect(&self, m: i64, n: i64, v: &VermaState) -> Result<VermaState> {
        let needed = i64::from(v.level()) + m.abs() + n.abs();
        if needed > i64::from(self.max_level) {
            return Err(Error::Truncation {
                level: needed as u32,
                max: self.max_level,
            });
        }
        let mn = self.act(m, &self.act(n, v)?)?;
        let nm = self.act(n, &self.act(m, v)?)?;
        let mut defect = mn.sub(&nm);
        let linear = self.act(m + n, v)?;
        defect.add_scaled(&linear, &-BigRational::from_integer(BigInt::from(m - n)));
        if m == -n {
            let central = &Self::central_coefficient(m) * &self.c;
            defect.add_scaled(v, &-central);
        }
        Ok(defect)
    }

    /// Exact check of the bracket relation on `v`.
    pub fn commutator_check(&self, m: i64, n: i64, v: &VermaState) -> Result<bool> {
        Ok(self.commutator_defect(m, n, v)?.is_zero())
    }

    /// `⟨L_{-μ}h, L_{-ν}h⟩` under `L_n† = L_{-n}` and `⟨h, h⟩ = 1`.
    pub fn inner_product(&self, mu: &Partition, nu: &Partition) -> Result<BigRational> {
        if mu.level() != nu.level() {
            return Ok(BigRational::zero());
        }
        // (L_{-μ₁} ⋯ L_{-μ_k})† = L_{μ_k} ⋯ L_{μ₁}; L_{μ₁} is applied first.
        let mut state = VermaState::basis(nu.clone());
        for &part in mu.parts() {
            state = self.act(i64::from(part), &state)?;
        }
        Ok(state.coefficient(&Partition::empty()))
    }

    /// Gram matrix at `level` in the order of [`Partition::all_of_level`].
    pub fn gram_matrix(&self, level: u32) -> Result<RationalMatrix> {
        if level > self.max_level {
            return Err(Error::Truncation {
                level,
                max: self.max_level,
            });
        }
        let basis = Partition::all_of_level(level);
        basis
            .iter()
            .map(|mu| basis.iter().map(|nu| self.inner_product(mu, nu)).collect())
            .collect()
    }
}

/// Exact determinant by fraction-valued Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant(matrix: &RationalMatrix) -> BigRational {
    let n = matrix.len();
    let mut a = matrix.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[r][k] -= delta;
            }
        }
    }
    det
}

/// `p/q`, or `p` for integers.
pub fn fraction_string(value: &BigRational) -> String {
    value.to_string()
}

/// Parses `p`, `p/q` or a negative of either.
pub fn parse_fraction(text: &str) -> Result<BigRational> {
    let trimmed = text.trim();
    let parsed: BigRational = trimmed
        .parse()
        .map_err(|_| Error::Parse(format!("not a fraction: {trimmed:?}")))?;
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| Partition::all_of_level(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(part(&[1, 3, 2]).parts(), &[3, 2, 1]);
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn lowest_weight_relations() {
        let module = VermaModule::from_ratios((1, 2), (1, 16), 8);
        let vac = VermaState::vacuum();
        assert_eq!(module.act(0, &vac).unwrap(), vac.scaled(&q(1, 16)));
        for m in 1..=4 {
            assert!(module.act(m, &vac).unwrap().is_zero());
        }
        let v = VermaState::basis(part(&[2, 1]));
        assert_eq!(module.act(0, &v).unwrap(), v.scaled(&(q(1, 16) + q(3, 1))));
    }

    #[test]
    fn hand_computed_brackets() {
        let (c, h) = (q(7, 3), q(5, 11));
        let module = VermaModule::new(c.clone(), h.clone(), 8);
        let vac = VermaState::vacuum();

        let lhs = module
            .act_word(&[2, -2], &vac)
            .unwrap()
            .sub(&module.act_word(&[-2, 2], &vac).unwrap());
        let expected = &(q(4, 1) * &h) + &(&c / q(2, 1));
        assert_eq!(lhs, vac.scaled(&expected));

        assert_eq!(
            module.act_word(&[1, -1], &vac).unwrap(),
            vac.scaled(&(q(2, 1) * &h))
        );

        let three = module.act_word(&[3, -3], &vac).unwrap();
        assert_eq!(three, vac.scaled(&(&(q(6, 1) * &h) + &(q(2, 1) * &c))));

        assert!(module.act_word(&[1, 2], &vac).unwrap().is_zero());
        assert!(module.commutator_check(1, 2, &vac).unwrap());
    }

    #[test]
    fn reordering_two_lowering_operators() {
        // L₋₁L₋₂|h⟩ = L₋₂L₋₁|h⟩ + L₋₃|h⟩
        let module = VermaModule::from_ratios((1, 1), (1, 1), 3);
        let vac = VermaState::vacuum();
        let got = module.act_word(&[-1, -2], &vac).unwrap();
        let mut expected = VermaState::basis(part(&[2, 1]));
        expected.add_term(part(&[3]), &q(1, 1));
        assert_eq!(got, expected);
        assert!(module.commutator_check(-1, -2, &vac).unwrap());
    }

    #[test]
    fn truncation_is_reported() {
        let module = VermaModule::from_ratios((1, 1), (1, 1), 3);
        let v = VermaState::basis(part(&[2, 1]));
        assert!(matches!(
            module.act(-1, &v),
            Err(Error::Truncation { level: 4, max: 3 })
        ));
        assert!(matches!(
            module.commutator_check(2, -2, &v),
            Err(Error::Truncation { .. })
        ));
        assert!(module.gram_matrix(4).is_err());
    }

    #[test]
    fn gram_levels_one_and_two() {
        for (c, h) in [
            (q(1, 2), q(0, 1)),
            (q(1, 2), q(1, 16)),
            (q(1, 1), q(1, 1)),
            (q(26, 1), q(3, 2)),
        ] {
            let module = VermaModule::new(c.clone(), h.clone(), 8);
            assert_eq!(module.gram_matrix(1).unwrap(), vec![vec![q(2, 1) * &h]]);
            // basis order (2), (1,1)
            let g = module.gram_matrix(2).unwrap();
            let a = &(q(4, 1) * &h) + &(&c / q(2, 1));
            let b = q(6, 1) * &h;
            let d = &(q(8, 1) * &h * &h) + &(q(4, 1) * &h);
            assert_eq!(
                g,
                vec![vec![a.clone(), b.clone()], vec![b.clone(), d.clone()]]
            );
            assert_eq!(determinant(&g), &a * &d - &b * &b);
        }
    }

    #[test]
    fn ising_weight_is_degenerate_at_level_two() {
        let ising = VermaModule::from_ratios((1, 2), (1, 16), 8);
        assert!(determinant(&ising.gram_matrix(2).unwrap()).is_zero());
        let generic = VermaModule::from_ratios((1, 1), (1, 1), 8);
        assert_eq!(determinant(&generic.gram_matrix(2).unwrap()), q(18, 1));
        let vacuum = VermaModule::from_ratios((1, 2), (0, 1), 8);
        assert_eq!(vacuum.gram_matrix(1).unwrap(), vec![vec![q(0, 1)]]);
    }

    #[test]
    fn determinant_of_known_matrices() {
        let m = vec![
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(3, 1), q(1, 1)],
            vec![q(0, 1), q(1, 1), q(4, 1)],
        ];
        assert_eq!(determinant(&m), q(18, 1));
        let swap = vec![vec![q(0, 1), q(1, 2)], vec![q(3, 1), q(5, 7)]];
        assert_eq!(determinant(&swap), q(-3, 2));
        assert_eq!(determinant(&Vec::new()), q(1, 1));
    }

    #[test]
    fn fractions_round_trip() {
        assert_eq!(parse_fraction(" -3/6 ").unwrap(), q(-1, 2));
        assert_eq!(fraction_string(&q(4, 2)), "2");
        assert_eq!(fraction_string(&q(-1, 16)), "-1/16");
        assert!(parse_fraction("1/0x").is_err());
    }

    #[test]
    fn bracket_holds_on_every_state() {
        let module = VermaModule::from_ratios((26, 1), (3, 2), 8);
        for m in -4i64..=4 {
            for n in -4i64..=4 {
                let room = 8 - (m.abs() + n.abs()) as u32;
                for p in module.basis_up_to(room) {
                    assert!(
                        module
                            .commutator_check(m, n, &VermaState::basis(p.clone()))
                            .unwrap(),
                        "m={m} n={n} state={p}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn gram_is_symmetric(cp in -40i64..40, cq in 1i64..9, hp in -40i64..40, hq in 1i64..9, level in 0u32..5) {
            let module = VermaModule::from_ratios((cp, cq), (hp, hq), 4);
            let g = module.gram_matrix(level).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    prop_assert_eq!(entry, &g[j][i]);
                }
            }
            let g1 = module.gram_matrix(1).unwrap();
            prop_assert_eq!(determinant(&g1), q(2 * hp, hq));
        }

        #[test]
        fn bracket_on_random_combinations(
            cp in -30i64..30, hp in -30i64..30,
            m in -3i64..=3, n in -3i64..=3,
            coeffs in proptest::collection::vec(-5i64..5, 7),
        ) {
            let module = VermaModule::from_ratios((cp, 7), (hp, 5), 8);
            let mut v = VermaState::zero();
            for (p, k) in Partition::all_of_level(2).into_iter()
                .chain(Partition::all_of_level(1))
                .chain(Partition::all_of_level(0))
                .chain(Partition::all_of_level(2))
                .zip(coeffs)
            {
                v.add_term(p, &q(k, 1));
            }
            prop_assert!(module.commutator_check(m, n, &v).unwrap());
            prop_assert_eq!(module.act_central(&v), v.scaled(&q(cp, 7)));
        }
    }
}
