//! Skew products `X ×_c F` over a finite odometer model.
//!
//! `F × ℤ` acts on `(ℤ/n_L) × F` by `(f, n)·(x, f′) = (x + n, c(n, x)·f′·f⁻¹)`.
//! Two such systems with the same base are always continuously orbit
//! equivalent through the identity map; [`theta`] is the orbit cocycle. When
//! `F` has trivial center and one cocycle is not a coboundary they are not
//! conjugate, and [`nonconjugacy_certificate`] packages that argument.

mod search;

pub use search::{exhaustive_conjugacy_search, FoundConjugacy, SearchReport};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chain::{DivisibilityChain, OdometerModel};
use crate::cocycle::{coboundary_decide_chain, CoboundaryVerdict, CocycleError, EvaluationTable, LevelCocycle};
use crate::group::{FiniteGroupTable, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkewError {
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error("skew systems do not share base model and fibre group")]
    BaseMismatch,
    #[error("action law fails for ({f1}, {n1})·({f2}, {n2}) at ({x}, {f})")]
    ActionLaw {
        f1: usize,
        n1: i64,
        f2: usize,
        n2: i64,
        x: u64,
        f: usize,
    },
}

/// A group element `(f, n)` of `F × ℤ`.
pub type SkewElement = (usize, i64);
/// A point `(x, f′)` of `(ℤ/n_L) × F`.
pub type SkewPoint = (u64, usize);

/// The skew product of a finite odometer model by a level cocycle.
///
/// Values `c(n, x)` for `|n| ≤ 4·n_L` are cached; every check reads the
/// cache, so overwriting an entry models a corrupted system.
#[derive(Clone, Debug)]
pub struct SkewSystem {
    base: OdometerModel,
    cocycle: LevelCocycle,
    cache: EvaluationTable,
}

impl SkewSystem {
    pub fn new(base: OdometerModel, cocycle: LevelCocycle) -> Result<Self, SkewError> {
        let range = 4 * base.modulus() as i64;
        let cache = EvaluationTable::build(&cocycle, &base, range)?;
        let sys = SkewSystem { base, cocycle, cache };
        if let Some(err) = sys.action_law_violation(1) {
            return Err(err);
        }
        Ok(sys)
    }

    pub fn base(&self) -> &OdometerModel {
        &self.base
    }

    pub fn group(&self) -> &FiniteGroupTable {
        self.cocycle.target()
    }

    pub fn cocycle(&self) -> &LevelCocycle {
        &self.cocycle
    }

    pub fn cache_range(&self) -> i64 {
        self.cache.range()
    }

    /// Replaces the cached value of `c(n, x)`.
    pub fn overwrite(&mut self, n: i64, x: u64, value: usize) {
        self.cache.set(n, x, value);
    }

    pub fn points(&self) -> impl Iterator<Item = SkewPoint> + '_ {
        let order = self.group().order();
        self.base.states().flat_map(move |x| (0..order).map(move |f| (x, f)))
    }

    /// `c(n, x)`.
    pub fn c(&self, n: i64, x: u64) -> usize {
        if n.abs() <= self.cache.range() {
            self.cache.get(n, x)
        } else {
            self.cocycle.evaluate_unchecked(n, x % self.cocycle.period())
        }
    }

    fn same_shape(&self, other: &SkewSystem) -> bool {
        self.base == other.base && self.group() == other.group()
    }

    /// First failure of `(g₁g₂)·p = g₁·(g₂·p)` with `|n₁|, |n₂| ≤ window`.
    pub fn action_law_violation(&self, window: i64) -> Option<SkewError> {
        let g = self.group();
        for (x, f) in self.points() {
            for n2 in -window..=window {
                for f2 in g.elements() {
                    let mid = skew_act(self, (f2, n2), (x, f));
                    for n1 in -window..=window {
                        for f1 in g.elements() {
                            let lhs = skew_act(self, (g.mul(f1, f2), n1 + n2), (x, f));
                            if lhs != skew_act(self, (f1, n1), mid) {
                                return Some(SkewError::ActionLaw { f1, n1, f2, n2, x, f });
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// `(f, n)·(x, f′) = (x + n, c(n, x)·f′·f⁻¹)`.
pub fn skew_act(sys: &SkewSystem, (f, n): SkewElement, (x, fp): SkewPoint) -> SkewPoint {
    let g = sys.group();
    (sys.base.step(x, n), g.mul(g.mul(sys.c(n, x), fp), g.inverse(f)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub transitive: bool,
    pub free: bool,
    /// Fixed `(element, point)` pairs with `n ∈ n_L·ℤ \ {0}`. These come from
    /// truncating the odometer and are not counted against freeness.
    pub kernel_fixed: u64,
}

/// Transitivity under `(e, ±1)` and `(f, 0)`, and a stabilizer sweep over
/// `|n| ≤ n_L·|F|`.
///
/// On the finite model `n_L·ℤ` fixes every base state, so only elements with
/// `n ∉ n_L·ℤ` or `n = 0` can witness non-freeness.
pub fn transitive_and_free_check(sys: &SkewSystem) -> OrbitReport {
    let g = sys.group();
    let order = g.order();
    let m = sys.base.modulus();
    let index = |(x, f): SkewPoint| x as usize * order + f;

    let mut seen = vec![false; m as usize * order];
    let mut stack = vec![(0u64, g.identity_index())];
    seen[index(stack[0])] = true;
    let mut reached = 1usize;
    while let Some(p) = stack.pop() {
        let moves = [(g.identity_index(), 1), (g.identity_index(), -1)]
            .into_iter()
            .chain(g.elements().map(|f| (f, 0)));
        for elem in moves {
            let q = skew_act(sys, elem, p);
            if !seen[index(q)] {
                seen[index(q)] = true;
                reached += 1;
                stack.push(q);
            }
        }
    }

    let window = (m * order as u64) as i64;
    let mut free = true;
    let mut kernel_fixed = 0u64;
    for n in -window..=window {
        for x in sys.base.states() {
            if sys.base.step(x, n) != x {
                continue;
            }
            for fp in g.elements() {
                for f in g.elements() {
                    if (f, n) == (g.identity_index(), 0) || skew_act(sys, (f, n), (x, fp)) != (x, fp) {
                        continue;
                    }
                    if n == 0 {
                        free = false;
                    } else {
                        kernel_fixed += 1;
                    }
                }
            }
        }
    }
    OrbitReport {
        transitive: reached == seen.len(),
        free,
        kernel_fixed,
    }
}

/// `θ((t, n), (x, f)) = (t·f⁻¹·c(n, x)⁻¹·c′(n, x)·f, n)`.
pub fn theta(sys: &SkewSystem, sys2: &SkewSystem, elem: SkewElement, p: SkewPoint) -> Result<SkewElement, SkewError> {
    if !sys.same_shape(sys2) {
        return Err(SkewError::BaseMismatch);
    }
    Ok(theta_unchecked(sys, sys2, elem, p))
}

fn theta_unchecked(sys: &SkewSystem, sys2: &SkewSystem, (t, n): SkewElement, (x, f): SkewPoint) -> SkewElement {
    let g = sys.group();
    let middle = g.mul(g.inverse(sys.c(n, x)), sys2.c(n, x));
    (g.mul(g.mul(t, g.inverse(f)), g.mul(middle, f)), n)
}

fn mul_elem(g: &FiniteGroupTable, (f1, n1): SkewElement, (f2, n2): SkewElement) -> SkewElement {
    (g.mul(f1, f2), n1 + n2)
}

/// Outcome of [`verify_coe`], one flag per family of identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeReport {
    /// `α̃_g(p) = α̃′_{θ(g,p)}(p)` for `|n| ≤ 2·n_L`.
    pub intertwines: bool,
    /// The same with the roles swapped.
    pub intertwines_inverse: bool,
    /// `θ` and `θ′` satisfy the cocycle identity for `|n₁|, |n₂| ≤ 6`.
    pub theta_cocycle: bool,
    pub theta_inverse_cocycle: bool,
    /// `θ′(θ(g, p), p) = g` and `θ(θ′(g, p), p) = g` for `|n| ≤ 2·n_L`.
    pub round_trip: bool,
    /// Action law for both systems, `|n₁|, |n₂| ≤ 6`.
    pub action_laws: bool,
    /// Cocycle identity of both caches for `|n₁|, |n₂| ≤ 2·n_L`.
    pub caches: bool,
}

impl CoeReport {
    pub fn holds(&self) -> bool {
        self.intertwines
            && self.intertwines_inverse
            && self.theta_cocycle
            && self.theta_inverse_cocycle
            && self.round_trip
            && self.action_laws
            && self.caches
    }
}

const THETA_WINDOW: i64 = 6;

fn intertwines(a: &SkewSystem, b: &SkewSystem, window: i64) -> bool {
    a.points().all(|p| {
        (-window..=window).all(|n| {
            a.group().elements().all(|t| {
                let g = (t, n);
                skew_act(a, g, p) == skew_act(b, theta_unchecked(a, b, g, p), p)
            })
        })
    })
}

fn theta_is_cocycle(a: &SkewSystem, b: &SkewSystem, window: i64) -> bool {
    let g = a.group();
    a.points().all(|p| {
        (-window..=window).all(|n2| {
            g.elements().all(|t2| {
                let g2 = (t2, n2);
                let moved = skew_act(a, g2, p);
                let inner = theta_unchecked(a, b, g2, p);
                (-window..=window).all(|n1| {
                    g.elements().all(|t1| {
                        let g1 = (t1, n1);
                        let lhs = theta_unchecked(a, b, mul_elem(g, g1, g2), p);
                        lhs == mul_elem(g, theta_unchecked(a, b, g1, moved), inner)
                    })
                })
            })
        })
    })
}

fn round_trip(a: &SkewSystem, b: &SkewSystem, window: i64) -> bool {
    a.points().all(|p| {
        (-window..=window).all(|n| {
            a.group().elements().all(|t| {
                let g = (t, n);
                theta_unchecked(b, a, theta_unchecked(a, b, g, p), p) == g
                    && theta_unchecked(a, b, theta_unchecked(b, a, g, p), p) == g
            })
        })
    })
}

/// Checks that the identity map is a continuous orbit equivalence with
/// orbit cocycle `θ` and inverse `θ′` (built from `(c′, c)`).
pub fn verify_coe(sys: &SkewSystem, sys2: &SkewSystem) -> Result<CoeReport, SkewError> {
    if !sys.same_shape(sys2) {
        return Err(SkewError::BaseMismatch);
    }
    let window = 2 * sys.base.modulus() as i64;
    let g = sys.group();
    Ok(CoeReport {
        intertwines: intertwines(sys, sys2, window),
        intertwines_inverse: intertwines(sys2, sys, window),
        theta_cocycle: theta_is_cocycle(sys, sys2, THETA_WINDOW),
        theta_inverse_cocycle: theta_is_cocycle(sys2, sys, THETA_WINDOW),
        round_trip: round_trip(sys, sys2, window),
        action_laws: sys.action_law_violation(THETA_WINDOW).is_none()
            && sys2.action_law_violation(THETA_WINDOW).is_none(),
        caches: sys.cache.is_cocycle(g, window) && sys2.cache.is_cocycle(g, window),
    })
}

/// Exhaustive evidence that `C(F) = {e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterWitness {
    /// For each non-identity `z`, some `g` with `zg ≠ gz`.
    pub non_commuting: Vec<(usize, usize)>,
    /// SHA-256 of the commutation matrix, one byte per pair, row-major.
    pub digest: String,
}

fn commutation_digest(g: &FiniteGroupTable) -> String {
    let bytes: Vec<u8> = g
        .elements()
        .flat_map(|a| g.elements().map(move |b| g.commutes(a, b) as u8))
        .collect();
    hex::encode(Sha256::digest(bytes))
}

impl CenterWitness {
    fn build(g: &FiniteGroupTable) -> Result<Self, Vec<usize>> {
        let center = g.center();
        if center.len() > 1 {
            return Err(center);
        }
        let non_commuting = g
            .elements()
            .filter(|&z| z != g.identity_index())
            .map(|z| (z, g.elements().find(|&h| !g.commutes(z, h)).expect("center is trivial")))
            .collect();
        Ok(CenterWitness {
            non_commuting,
            digest: commutation_digest(g),
        })
    }

    pub fn verify(&self, g: &FiniteGroupTable) -> bool {
        let covered: Vec<usize> = self.non_commuting.iter().map(|&(z, _)| z).collect();
        let expected: Vec<usize> = g.elements().filter(|&z| z != g.identity_index()).collect();
        covered == expected
            && self
                .non_commuting
                .iter()
                .all(|&(z, h)| h < g.order() && !g.commutes(z, h))
            && self.digest == commutation_digest(g)
    }
}

/// Why no certificate was issued.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CannotCertify {
    #[error("fibre group has nontrivial center {center:?}")]
    NontrivialCenter { center: Vec<usize> },
    #[error("cocycle is a coboundary from level {level}")]
    Coboundary { level: usize },
    #[error("cocycle values generate a subgroup of order {order}, not of prime order")]
    ValuesNotPrimeCyclic { order: usize },
    #[error("{message}")]
    Invalid { message: String },
}

/// Proof data that two skew products are orbit equivalent but not conjugate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonConjugacyCertificate {
    pub group: FiniteGroupTable,
    pub center_witness: CenterWitness,
    /// `|K₀|`, the prime order of the value subgroup.
    pub prime: u64,
    /// Generator of `K₀`, identified with `1 ∈ ℤ/p`.
    pub generator: usize,
    pub level: usize,
    /// The cocycle table read in `ℤ/p`.
    pub reduced_table: Vec<usize>,
    pub obstruction: CoboundaryVerdict,
}

impl NonConjugacyCertificate {
    /// Rechecks both components from scratch.
    pub fn verify(&self, chain: &DivisibilityChain) -> bool {
        if !self.center_witness.verify(&self.group) {
            return false;
        }
        let Ok(reduced) = LevelCocycle::new(
            FiniteGroupTable::cyclic(self.prime as usize),
            chain,
            self.level,
            self.reduced_table.clone(),
        ) else {
            return false;
        };
        matches!(coboundary_decide_chain(&reduced, chain), Ok(v) if !v.is_coboundary() && v == self.obstruction)
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Certifies non-conjugacy of `X ×_c F` and `X ×_e F`.
///
/// The values of `c` must generate a subgroup `K₀` of prime order `p`;
/// `c` is then read as a `ℤ/p` cocycle. A cocycle into `F` is a coboundary
/// iff it is one into `K₀`, so the abelian decision procedure applies.
pub fn nonconjugacy_certificate(
    f: &FiniteGroupTable,
    c: &LevelCocycle,
    chain: &DivisibilityChain,
) -> Result<NonConjugacyCertificate, CannotCertify> {
    if c.target() != f {
        return Err(CannotCertify::Invalid {
            message: CocycleError::TargetMismatch.to_string(),
        });
    }
    let center_witness = CenterWitness::build(f).map_err(|center| CannotCertify::NontrivialCenter { center })?;
    let values = FiniteGroupTable::distinct(c.table().iter().copied());
    let k0 = f.generated_subgroup(&values);
    if k0.len() == 1 {
        return Err(CannotCertify::Coboundary { level: c.level() });
    }
    if !is_prime(k0.len()) {
        return Err(CannotCertify::ValuesNotPrimeCyclic { order: k0.len() });
    }
    let generator = k0[1];
    let mut log = vec![usize::MAX; f.order()];
    let mut acc = f.identity_index();
    for i in 0..k0.len() {
        log[acc] = i;
        acc = f.mul(acc, generator);
    }
    let reduced_table: Vec<usize> = c.table().iter().map(|&v| log[v]).collect();
    let invalid = |e: CocycleError| CannotCertify::Invalid { message: e.to_string() };
    let reduced = LevelCocycle::new(
        FiniteGroupTable::cyclic(k0.len()),
        chain,
        c.level(),
        reduced_table.clone(),
    )
    .map_err(invalid)?;
    let obstruction = coboundary_decide_chain(&reduced, chain).map_err(invalid)?;
    if let CoboundaryVerdict::CoboundaryAtLevel { level } = obstruction {
        return Err(CannotCertify::Coboundary { level });
    }
    Ok(NonConjugacyCertificate {
        group: f.clone(),
        center_witness,
        prime: k0.len() as u64,
        generator,
        level: c.level(),
        reduced_table,
        obstruction,
    })
}

/// An automorphism `(t, n) ↦ (ε(t)·gⁿ, ±n)` of `F × ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub epsilon: Vec<usize>,
    pub g: usize,
    pub sign: Orientation,
}

impl FamilyMember {
    pub fn apply(&self, group: &FiniteGroupTable, (t, n): SkewElement) -> SkewElement {
        (
            group.mul(self.epsilon[t], crate::group::Group::pow(group, self.g, n)),
            self.sign.sign() * n,
        )
    }
}

/// All of `Aut(F × ℤ)` as `Aut(F) × C(F) × {±}`.
pub fn automorphism_family(f: &FiniteGroupTable) -> Vec<FamilyMember> {
    let center = f.center();
    let mut out = Vec::new();
    for epsilon in f.automorphisms() {
        for &g in &center {
            for sign in [Orientation::Plus, Orientation::Minus] {
                out.push(FamilyMember {
                    epsilon: epsilon.clone(),
                    g,
                    sign,
                });
            }
        }
    }
    out
}
