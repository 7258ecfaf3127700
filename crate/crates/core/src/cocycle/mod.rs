//! Cocycles for the odometer ℤ-action with values in a finite group.
//!
//! A continuous map from a profinite space into a discrete group factors
//! through some finite level, so a table `f: ℤ/nⱼ → K` at level `j` is a
//! fully general continuous generator cocycle `f(x) = c(1, x)`. Everything
//! else is recovered from the cocycle identity
//! `c(n₁ + n₂, x) = c(n₁, Tⁿ²x)·c(n₂, x)`.

mod coboundary;
mod essential;

pub use coboundary::{coboundary_decide_chain, coboundary_solve_at_level, CoboundaryVerdict, SolveOutcome};
pub use essential::{
    essential_values_bruteforce, essential_values_closed_form, essential_values_limit, EssentialValueSet,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainError, DivisibilityChain, OdometerModel};
use crate::group::{FiniteGroupTable, GroupError, GroupRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("cocycle lives at level {cocycle_level} but the model stops at level {model_level}")]
    LevelMismatch { cocycle_level: usize, model_level: usize },
    #[error("table has {got} entries, expected n_{level} = {expected}")]
    TableLength { level: usize, expected: u64, got: usize },
    #[error("table entry {value} at position {position} is not an element of the target")]
    BadEntry { position: usize, value: usize },
    #[error("target group is not abelian")]
    NonAbelianTarget,
    #[error("cocycles have different targets")]
    TargetMismatch,
    #[error("transfer values occupy more than one coset of the subgroup (e.g. states {x1} and {x2})")]
    NotSingleCoset { x1: u64, x2: u64 },
    #[error("subgroup elements {0:?} are not closed under the product")]
    NotASubgroup(Vec<usize>),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A cocycle given by its generator table at level `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCocycle {
    target: FiniteGroupTable,
    level: usize,
    table: Vec<usize>,
}

impl LevelCocycle {
    /// Validates that `table` has exactly `nⱼ` entries, all in the target.
    pub fn new(
        target: FiniteGroupTable,
        chain: &DivisibilityChain,
        level: usize,
        table: Vec<usize>,
    ) -> Result<Self, CocycleError> {
        if level == 0 {
            return Err(ChainError::LevelZero.into());
        }
        let expected = chain.nth_modulus_u64(level).ok_or(ChainError::ModulusOverflow(level))?;
        if table.len() as u64 != expected {
            return Err(CocycleError::TableLength {
                level,
                expected,
                got: table.len(),
            });
        }
        if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v >= target.order()) {
            return Err(CocycleError::BadEntry { position, value });
        }
        Ok(LevelCocycle { target, level, table })
    }

    /// The cocycle with `f ≡ e` at level `j`.
    pub fn trivial(target: FiniteGroupTable, chain: &DivisibilityChain, level: usize) -> Result<Self, CocycleError> {
        let n = chain.nth_modulus_u64(level).ok_or(ChainError::ModulusOverflow(level))?;
        let e = target.identity_index();
        Self::new(target, chain, level, vec![e; n as usize])
    }

    pub fn target(&self) -> &FiniteGroupTable {
        &self.target
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `nⱼ`.
    pub fn period(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `f(x) = c(1, x)`.
    pub fn generator(&self, x: u64) -> usize {
        self.table[(x % self.period()) as usize]
    }

    /// `S = f(nⱼ − 1)⋯f(1)f(0) = c(nⱼ, 0)`, the product over one period.
    pub fn period_product(&self) -> usize {
        self.period_product_from(0)
    }

    fn period_product_from(&self, x: u64) -> usize {
        self.ordered_product(x, self.period())
    }

    /// `f(x + len − 1)⋯f(x + 1)f(x)`.
    fn ordered_product(&self, x: u64, len: u64) -> usize {
        let g = &self.target;
        (0..len).fold(g.identity_index(), |acc, i| g.mul(self.generator(x + i), acc))
    }

    pub fn check_model(&self, model: &OdometerModel) -> Result<(), CocycleError> {
        let mismatch = || CocycleError::LevelMismatch {
            cocycle_level: self.level,
            model_level: model.level(),
        };
        if model.level() < self.level {
            return Err(mismatch());
        }
        if model.level_modulus(self.level)? != self.period() {
            return Err(mismatch());
        }
        Ok(())
    }

    /// `c(N, x)` for any integer `N`.
    ///
    /// Long products are cut into whole periods: `c(qnⱼ + r, x) = c(r, x)·c(nⱼ, x)^q`.
    pub fn evaluate(&self, model: &OdometerModel, n: i64, x: u64) -> Result<usize, CocycleError> {
        self.check_model(model)?;
        Ok(self.evaluate_unchecked(n, x % self.period()))
    }

    pub(crate) fn evaluate_unchecked(&self, n: i64, x: u64) -> usize {
        let g = &self.target;
        let p = self.period();
        if n < 0 {
            // c(−N, x) = c(N, T⁻ᴺx)⁻¹
            let back = (x as i128 + n as i128).rem_euclid(p as i128) as u64;
            return g.inverse(self.evaluate_unchecked(-n, back));
        }
        let n = n as u64;
        let (q, r) = (n / p, n % p);
        let block = self.period_product_from(x);
        let head = self.ordered_product(x, r);
        let block_pow = crate::group::Group::pow(g, block, (q % g.order() as u64) as i64);
        g.mul(head, block_pow)
    }
}

/// How a transfer function untwists a cocycle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferOrientation {
    /// `c(n, x) = L(Tⁿx)·L(x)⁻¹`, the Gottschalk–Hedlund form `L∘T − L = f`.
    #[default]
    Forward,
    /// `c(n, x) = L(Tⁿx)⁻¹·L(x)`.
    Inverse,
}

/// A transfer function `L: ℤ/n_k → K` at level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferFunction {
    pub level: usize,
    pub table: Vec<usize>,
    pub orientation: TransferOrientation,
}

impl TransferFunction {
    pub fn new(level: usize, table: Vec<usize>, orientation: TransferOrientation) -> Self {
        assert!(!table.is_empty(), "transfer table must be nonempty");
        TransferFunction {
            level,
            table,
            orientation,
        }
    }

    pub fn constant(level: usize, period: u64, value: usize, orientation: TransferOrientation) -> Self {
        Self::new(level, vec![value; period as usize], orientation)
    }

    pub fn period(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn value(&self, x: u64) -> usize {
        self.table[(x % self.period()) as usize]
    }

    /// The same coboundary expressed in the other orientation (pointwise inverse).
    pub fn reoriented(&self, group: &FiniteGroupTable, orientation: TransferOrientation) -> Self {
        if orientation == self.orientation {
            return self.clone();
        }
        let table = self.table.iter().map(|&v| group.inverse(v)).collect();
        TransferFunction {
            level: self.level,
            table,
            orientation,
        }
    }

    /// The twisted value `b(Tⁿx)·k·b(x)⁻¹` (forward) or `b(Tⁿx)⁻¹·k·b(x)` (inverse).
    pub fn twist(&self, group: &FiniteGroupTable, model: &OdometerModel, n: i64, x: u64, k: usize) -> usize {
        let bx = self.value(x);
        let bnx = self.value(model.step(x, n));
        match self.orientation {
            TransferOrientation::Forward => group.mul(group.mul(bnx, k), group.inverse(bx)),
            TransferOrientation::Inverse => group.mul(group.mul(group.inverse(bnx), k), bx),
        }
    }

    fn check_model(&self, model: &OdometerModel) -> Result<(), CocycleError> {
        if model.level() < self.level || model.level_modulus(self.level)? != self.period() {
            return Err(CocycleError::LevelMismatch {
                cocycle_level: self.level,
                model_level: model.level(),
            });
        }
        Ok(())
    }
}

/// The values `c(n, x)` for `|n| ≤ range` and every model state.
///
/// Entries can be overwritten, which is how corrupted inputs are produced in
/// tests; [`EvaluationTable::is_cocycle`] then checks the identity directly.
#[derive(Clone, Debug)]
pub struct EvaluationTable {
    range: i64,
    modulus: u64,
    values: Vec<usize>,
}

impl EvaluationTable {
    /// Fills the table by the recursions `c(n+1, x) = f(Tⁿx)·c(n, x)` and
    /// `c(−n−1, x) = f(T^{−n−1}x)⁻¹·c(−n, x)`.
    pub fn build(c: &LevelCocycle, model: &OdometerModel, range: i64) -> Result<Self, CocycleError> {
        c.check_model(model)?;
        let g = c.target();
        let m = model.modulus();
        let width = (2 * range + 1) as usize;
        let mut values = vec![g.identity_index(); width * m as usize];
        for x in model.states() {
            let row = x as usize * width;
            let zero = row + range as usize;
            for n in 0..range {
                let next = g.mul(c.generator(model.step(x, n)), values[zero + n as usize]);
                values[zero + n as usize + 1] = next;
                let back = g.mul(g.inverse(c.generator(model.step(x, -n - 1))), values[zero - n as usize]);
                values[zero - n as usize - 1] = back;
            }
        }
        Ok(EvaluationTable {
            range,
            modulus: m,
            values,
        })
    }

    pub fn range(&self) -> i64 {
        self.range
    }

    fn index(&self, n: i64, x: u64) -> usize {
        assert!(
            n.abs() <= self.range && x < self.modulus,
            "({n}, {x}) outside evaluation table"
        );
        x as usize * (2 * self.range + 1) as usize + (n + self.range) as usize
    }

    pub fn get(&self, n: i64, x: u64) -> usize {
        self.values[self.index(n, x)]
    }

    pub fn set(&mut self, n: i64, x: u64, value: usize) {
        let i = self.index(n, x);
        self.values[i] = value;
    }

    /// First `(n₁, n₂, x)` with `|nᵢ| ≤ window` violating the cocycle identity.
    pub fn first_violation(&self, group: &FiniteGroupTable, window: i64) -> Option<(i64, i64, u64)> {
        assert!(2 * window <= self.range, "window {window} needs range {}", 2 * window);
        let m = self.modulus as i64;
        for x in 0..self.modulus {
            for n2 in -window..=window {
                let c2 = self.get(n2, x);
                let y = (x as i64 + n2).rem_euclid(m) as u64;
                for n1 in -window..=window {
                    if self.get(n1 + n2, x) != group.mul(self.get(n1, y), c2) {
                        return Some((n1, n2, x));
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self, group: &FiniteGroupTable, window: i64) -> bool {
        self.first_violation(group, window).is_none()
    }
}

/// Checks `c(n₁ + n₂, x) = c(n₁, Tⁿ²x)·c(n₂, x)` for `|n₁|, |n₂| ≤ window` and all states.
pub fn is_cocycle_exhaustive(c: &LevelCocycle, model: &OdometerModel, window: i64) -> Result<bool, CocycleError> {
    let table = EvaluationTable::build(c, model, 2 * window)?;
    Ok(table.is_cocycle(c.target(), window))
}

/// Checks that `b` carries `c2` to `c1` for all `|n| ≤ window` and all states.
pub fn cohomologous_verify(
    c1: &LevelCocycle,
    c2: &LevelCocycle,
    b: &TransferFunction,
    model: &OdometerModel,
    window: i64,
) -> Result<bool, CocycleError> {
    if c1.target() != c2.target() {
        return Err(CocycleError::TargetMismatch);
    }
    b.check_model(model)?;
    let g = c1.target();
    let t1 = EvaluationTable::build(c1, model, window)?;
    let t2 = EvaluationTable::build(c2, model, window)?;
    for x in model.states() {
        for n in -window..=window {
            if t1.get(n, x) != b.twist(g, model, n, x, t2.get(n, x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Moves a transfer function into the subgroup `K₀`.
///
/// In the forward orientation the values of a valid transfer lie in a single
/// right coset `K₀k`, and `b·k⁻¹` still untwists `c`. In the inverse
/// orientation the relevant coset is the left coset `kK₀` and the output is
/// `k⁻¹·b`.
pub fn reduce_target(
    c: &LevelCocycle,
    subgroup: &[usize],
    b: &TransferFunction,
    model: &OdometerModel,
) -> Result<TransferFunction, CocycleError> {
    let g = c.target();
    let closed = subgroup
        .iter()
        .all(|&a| subgroup.iter().all(|&bb| subgroup.contains(&g.mul(a, bb))));
    if subgroup.is_empty() || !closed {
        return Err(CocycleError::NotASubgroup(subgroup.to_vec()));
    }
    b.check_model(model)?;
    let k = b.value(0);
    let kinv = g.inverse(k);
    let mut table = Vec::with_capacity(b.table.len());
    for (x, &v) in b.table.iter().enumerate() {
        let moved = match b.orientation {
            TransferOrientation::Forward => g.mul(v, kinv),
            TransferOrientation::Inverse => g.mul(kinv, v),
        };
        if !subgroup.contains(&moved) {
            return Err(CocycleError::NotSingleCoset { x1: 0, x2: x as u64 });
        }
        table.push(moved);
    }
    Ok(TransferFunction {
        level: b.level,
        table,
        orientation: b.orientation,
    })
}

/// Config form of a cocycle: `{"target": …, "level": j, "table": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleConfig {
    pub target: GroupRef,
    pub level: usize,
    pub table: Vec<usize>,
}

impl CocycleConfig {
    pub fn build(&self, chain: &DivisibilityChain) -> Result<LevelCocycle, CocycleError> {
        LevelCocycle::new(self.target.resolve()?, chain, self.level, self.table.clone())
    }
}

/// Prime factorisation by trial division, primes ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dyadic_z3() -> (OdometerModel, LevelCocycle) {
        let chain = DivisibilityChain::dyadic();
        let model = OdometerModel::new(chain.clone(), 3).unwrap();
        let c = LevelCocycle::new(FiniteGroupTable::cyclic(3), &chain, 1, vec![0, 1]).unwrap();
        (model, c)
    }

    /// Direct left-to-right product, independent of the block decomposition.
    fn naive(c: &LevelCocycle, n: i64, x: u64) -> usize {
        let g = c.target();
        let p = c.period() as i64;
        let mut acc = g.identity_index();
        if n >= 0 {
            for i in 0..n {
                acc = g.mul(c.generator((x as i64 + i).rem_euclid(p) as u64), acc);
            }
        } else {
            for i in 1..=-n {
                acc = g.mul(g.inverse(c.generator((x as i64 - i).rem_euclid(p) as u64)), acc);
            }
        }
        acc
    }

    #[test]
    fn evaluate_examples() {
        let (model, c) = dyadic_z3();
        assert_eq!(c.evaluate(&model, 4, 0), Ok(2));
        for x in model.states() {
            assert_eq!(c.evaluate(&model, 0, x), Ok(0));
            assert_eq!(c.evaluate(&model, 8, x), Ok(1));
        }
        let low = OdometerModel::new(DivisibilityChain::dyadic(), 1).unwrap();
        let high = LevelCocycle::trivial(FiniteGroupTable::cyclic(3), &DivisibilityChain::dyadic(), 2).unwrap();
        assert!(matches!(
            high.evaluate(&low, 1, 0),
            Err(CocycleError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_matches_naive_product_nonabelian() {
        let chain = DivisibilityChain::geometric(3);
        let model = OdometerModel::new(chain.clone(), 2).unwrap();
        let c = LevelCocycle::new(FiniteGroupTable::symmetric(3), &chain, 1, vec![1, 3, 2]).unwrap();
        for x in model.states() {
            for n in -40..=40 {
                assert_eq!(c.evaluate(&model, n, x).unwrap(), naive(&c, n, x), "n={n} x={x}");
            }
        }
        let far = c.evaluate(&model, 1_000_003, 4).unwrap();
        assert_eq!(far, naive(&c, 1_000_003, 4));
    }

    #[test]
    fn table_validation() {
        let chain = DivisibilityChain::dyadic();
        let z3 = FiniteGroupTable::cyclic(3);
        assert!(matches!(
            LevelCocycle::new(z3.clone(), &chain, 1, vec![0, 1, 2]),
            Err(CocycleError::TableLength { .. })
        ));
        assert!(matches!(
            LevelCocycle::new(z3, &chain, 1, vec![0, 3]),
            Err(CocycleError::BadEntry { .. })
        ));
        let cfg: CocycleConfig = serde_json::from_str(r#"{"target": "Z/3", "level": 1, "table": [0, 1]}"#).unwrap();
        assert_eq!(cfg.build(&chain).unwrap().table(), &[0, 1]);
    }

    #[test]
    fn cocycle_identity_and_corruption() {
        let (model, c) = dyadic_z3();
        assert_eq!(is_cocycle_exhaustive(&c, &model, 24), Ok(true));
        let trivial = LevelCocycle::trivial(FiniteGroupTable::cyclic(3), &DivisibilityChain::dyadic(), 1).unwrap();
        assert_eq!(is_cocycle_exhaustive(&trivial, &model, 24), Ok(true));
        let mut table = EvaluationTable::build(&c, &model, 16).unwrap();
        assert!(table.is_cocycle(c.target(), 8));
        let old = table.get(3, 5);
        table.set(3, 5, (old + 1) % 3);
        assert!(!table.is_cocycle(c.target(), 8));
    }

    #[test]
    fn evaluation_table_agrees_with_evaluate() {
        let chain = DivisibilityChain::new(2, vec![3], vec![2]).unwrap();
        let model = OdometerModel::new(chain.clone(), 3).unwrap();
        let c = LevelCocycle::new(FiniteGroupTable::symmetric(3), &chain, 2, vec![0, 1, 4, 2, 3, 5]).unwrap();
        let t = EvaluationTable::build(&c, &model, 30).unwrap();
        for x in model.states() {
            for n in -30..=30 {
                assert_eq!(t.get(n, x), c.evaluate(&model, n, x).unwrap());
            }
        }
    }

    #[test]
    fn cohomology_examples() {
        let chain = DivisibilityChain::geometric(3);
        let model = OdometerModel::new(chain.clone(), 2).unwrap();
        let s3 = FiniteGroupTable::symmetric(3);
        let c = LevelCocycle::new(s3.clone(), &chain, 1, vec![1, 3, 2]).unwrap();
        let id = TransferFunction::constant(1, 3, 0, TransferOrientation::Forward);
        assert_eq!(cohomologous_verify(&c, &c, &id, &model, 12), Ok(true));

        // c1(n, x) := b(Tⁿx)⁻¹ b(x) with c2 ≡ e
        let b = TransferFunction::new(
            2,
            (0..9).map(|x| (x * 5 + 1) % 6).collect(),
            TransferOrientation::Inverse,
        );
        let f1: Vec<usize> = (0..9u64)
            .map(|x| s3.mul(s3.inverse(b.value(x + 1)), b.value(x)))
            .collect();
        let c1 = LevelCocycle::new(s3.clone(), &chain, 2, f1).unwrap();
        let e = LevelCocycle::trivial(s3.clone(), &chain, 1).unwrap();
        assert_eq!(cohomologous_verify(&c1, &e, &b, &model, 20), Ok(true));
        let fwd = b.reoriented(&s3, TransferOrientation::Forward);
        assert_eq!(cohomologous_verify(&c1, &e, &fwd, &model, 20), Ok(true));

        // every other transfer fails: search a few dozen perturbations
        for shift in 1..6 {
            let mut bad = b.clone();
            bad.table[shift % 9] = s3.mul(bad.table[shift % 9], shift);
            assert_eq!(cohomologous_verify(&c1, &e, &bad, &model, 20), Ok(false));
        }
    }

    #[test]
    fn reduce_target_examples() {
        let chain = DivisibilityChain::geometric(3);
        let model = OdometerModel::new(chain.clone(), 2).unwrap();
        let s3 = FiniteGroupTable::symmetric(3);
        let rot = s3.prime_order_element(3).unwrap();
        let k0 = s3.generated_subgroup(&[rot]);
        let tau = s3.prime_order_element(2).unwrap();
        let e = LevelCocycle::trivial(s3.clone(), &chain, 1).unwrap();

        let b = TransferFunction::constant(1, 3, tau, TransferOrientation::Forward);
        let out = reduce_target(&e, &k0, &b, &model).unwrap();
        assert!(out.table.iter().all(|&v| v == s3.identity_index()));

        let all: Vec<usize> = s3.elements().collect();
        let b2 = TransferFunction::new(1, vec![3, 1, 5], TransferOrientation::Forward);
        assert_eq!(
            reduce_target(&e, &all, &b2, &model).unwrap().table,
            vec![0, s3.mul(1, s3.inverse(3)), s3.mul(5, s3.inverse(3))]
        );
        let out_identity_anchor = TransferFunction::new(1, vec![0, 1, 5], TransferOrientation::Forward);
        assert_eq!(
            reduce_target(&e, &all, &out_identity_anchor, &model).unwrap(),
            out_identity_anchor
        );

        // genuine Z/3-valued coboundary twisted by an S3-valued transfer
        for orientation in [TransferOrientation::Forward, TransferOrientation::Inverse] {
            let h: Vec<usize> = (0..9).map(|x| k0[x % 3]).collect();
            let b = TransferFunction::new(
                2,
                h.iter()
                    .map(|&v| match orientation {
                        TransferOrientation::Forward => s3.mul(v, tau),
                        TransferOrientation::Inverse => s3.mul(tau, v),
                    })
                    .collect(),
                orientation,
            );
            let f: Vec<usize> = (0..9u64)
                .map(|x| b.twist(&s3, &model, 1, x, s3.identity_index()))
                .collect();
            assert!(f.iter().all(|v| k0.contains(v)));
            let c = LevelCocycle::new(s3.clone(), &chain, 2, f).unwrap();
            let reduced = reduce_target(&c, &k0, &b, &model).unwrap();
            assert!(reduced.table.iter().all(|v| k0.contains(v)));
            assert_eq!(cohomologous_verify(&c, &e, &reduced, &model, 18), Ok(true));
        }

        let mixed = TransferFunction::new(1, vec![0, tau, 0], TransferOrientation::Forward);
        assert!(matches!(
            reduce_target(&e, &k0, &mixed, &model),
            Err(CocycleError::NotSingleCoset { .. })
        ));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    proptest! {
        #[test]
        fn identity_holds_for_random_tables(
            table in proptest::collection::vec(0usize..6, 6),
            level in 2usize..=3,
        ) {
            let chain = DivisibilityChain::new(2, vec![3], vec![2]).unwrap();
            let c = LevelCocycle::new(FiniteGroupTable::symmetric(3), &chain, 2, table).unwrap();
            let model = OdometerModel::new(chain, level).unwrap();
            let w = 3 * model.modulus() as i64;
            prop_assert!(is_cocycle_exhaustive(&c, &model, w).unwrap());
        }
    }
}
