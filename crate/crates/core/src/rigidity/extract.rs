//! Turning an orbit equivalence witness into an explicit conjugacy.
//!
//! The steps follow the structure of the rigidity argument:
//!
//! 1. split the states by whether `c(sⁿ, x)` tracks `sⁿ` or `s⁻ⁿ`;
//! 2. strip that drift off to get the defect `a(sⁿ, x)`;
//! 3. conjugate by `D = t` on `X₋` so the defect lands in `⟨s⟩`;
//! 4. solve the resulting integer cocycle along each `s`-cycle;
//! 5. read off the reflection constant `k` and assemble the conjugacy.
//!
//! Every step checks the identity it relies on over the whole finite model and
//! refuses with the first counterexample instead of repairing the input.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::model::{Coset, DinftyModel, ModelKind};
use super::witness::{check_bijection, CoeWitness, PowerTable};
use super::RigidityError;
use crate::cocycle::TransferOrientation;
use crate::group::{dmetric, DihedralAutomorphism, DihedralElement};

const S: DihedralElement = DihedralElement::S;
const T: DihedralElement = DihedralElement::T;
const E: DihedralElement = DihedralElement::IDENTITY;

fn s_pow(n: i64) -> DihedralElement {
    DihedralElement::translation(n)
}

/// States sorted into `X₊` and `X₋`, with the bound and window used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub plus: Vec<bool>,
    pub bound: u64,
    pub window: i64,
}

impl Partition {
    pub fn is_plus(&self, x: u64) -> bool {
        self.plus[x as usize]
    }

    pub fn plus_count(&self) -> usize {
        self.plus.iter().filter(|&&p| p).count()
    }

    pub fn minus_count(&self) -> usize {
        self.plus.len() - self.plus_count()
    }

    /// `D(x) = e` on `X₊` and `t` on `X₋`.
    pub fn d(&self, x: u64) -> DihedralElement {
        if self.is_plus(x) {
            E
        } else {
            T
        }
    }
}

/// `2·max_x (|c(s, x)| + |c(t, x)|)`.
pub fn split_bound(w: &CoeWitness) -> u64 {
    2 * w.generator_bound()
}

/// `max(4·n_L, B + 1)`: wide enough that `sⁿ` and `s⁻ⁿ` cannot both stay
/// within `B` of `c(sⁿ, x)`.
pub fn default_window(w: &CoeWitness, model: &DinftyModel) -> i64 {
    (4 * model.modulus() as i64).max(split_bound(w) as i64 + 1)
}

pub fn split_x_pm(w: &CoeWitness, model: &DinftyModel, window: i64) -> Result<Partition, RigidityError> {
    let required = 4 * model.modulus() as i64;
    if window < required {
        return Err(RigidityError::WindowTooSmall { window, required });
    }
    let powers = PowerTable::build(w, model, window);
    split_with(&powers, w, model)
}

fn split_with(powers: &PowerTable, w: &CoeWitness, model: &DinftyModel) -> Result<Partition, RigidityError> {
    let bound = split_bound(w);
    let window = powers.range();
    let mut plus = Vec::with_capacity(model.size() as usize);
    for x in model.states() {
        let tracks = |sign: i64| (-window..=window).all(|n| dmetric(powers.get(n, x), s_pow(sign * n)) <= bound);
        match (tracks(1), tracks(-1)) {
            (true, false) => plus.push(true),
            (false, true) => plus.push(false),
            _ => return Err(RigidityError::UnclassifiablePoint { state: x }),
        }
    }
    Ok(Partition { plus, bound, window })
}

/// `a(sⁿ, x) = c(sⁿ, x)·s∓ⁿ` according to the side of `x`.
pub fn defect_cocycle(w: &CoeWitness, model: &DinftyModel, partition: &Partition, n: i64, x: u64) -> DihedralElement {
    defect(w.eval(model, s_pow(n), x), partition, n, x)
}

fn defect(c: DihedralElement, partition: &Partition, n: i64, x: u64) -> DihedralElement {
    if partition.is_plus(x) {
        c.mul(s_pow(-n))
    } else {
        c.mul(s_pow(n))
    }
}

/// The normalized defect `a′(sⁿ, x) = D(sⁿx)·a(sⁿ, x)·D(x)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedDefect {
    pub d: Vec<DihedralElement>,
    /// Exponent of `a′(s, x)`.
    pub generator: Vec<i64>,
}

pub fn normalize_defect(
    w: &CoeWitness,
    model: &DinftyModel,
    partition: &Partition,
) -> Result<NormalizedDefect, RigidityError> {
    let powers = PowerTable::build(w, model, partition.window);
    normalize_with(&powers, model, partition)
}

fn normalize_with(
    powers: &PowerTable,
    model: &DinftyModel,
    partition: &Partition,
) -> Result<NormalizedDefect, RigidityError> {
    let window = powers.range();
    for x in model.states() {
        let mut y = model.act(s_pow(-window), x);
        for n in -window..=window {
            let a = defect(powers.get(n, x), partition, n, x);
            let value = partition.d(y).mul(a).mul(partition.d(x).inverse());
            if value.reflection {
                return Err(RigidityError::DefectNotInExpectedCoset { n, state: x, value });
            }
            y = model.s(y);
        }
    }
    let generator = model
        .states()
        .map(|x| {
            let a = defect(powers.get(1, x), partition, 1, x);
            partition.d(model.s(x)).mul(a).mul(partition.d(x)).exponent
        })
        .collect();
    Ok(NormalizedDefect {
        d: model.states().map(|x| partition.d(x)).collect(),
        generator,
    })
}

/// No transfer exists: the generator sums to `cycle_sum` around the cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unsolvable {
    pub cycle_sum: i64,
}

/// Solves `L(x + 1) − L(x) = g(x)` around a cycle of length `g.len()` with
/// `L(0) = 0`. With [`TransferOrientation::Inverse`] the sign of `g` is flipped,
/// so that `sᴸ` satisfies `a′(s, x) = L(sx)⁻¹·L(x)`.
pub fn gh_solve(g: &[i64], orientation: TransferOrientation) -> Result<Vec<i64>, Unsolvable> {
    let cycle_sum: i64 = g.iter().sum();
    if cycle_sum != 0 {
        return Err(Unsolvable { cycle_sum });
    }
    let sign = match orientation {
        TransferOrientation::Forward => 1,
        TransferOrientation::Inverse => -1,
    };
    let mut out = Vec::with_capacity(g.len());
    let mut acc = 0i64;
    for &v in g {
        out.push(acc);
        acc += sign * v;
    }
    Ok(out)
}

/// `k` with `L′(x)·c(t, x)⁻¹·L′(tx)⁻¹ = sᵏt` for every `x` (every `x ∈ X₀`
/// in Case II).
pub fn claim4_constant(
    w: &CoeWitness,
    model: &DinftyModel,
    untwister: &[DihedralElement],
) -> Result<i64, RigidityError> {
    let mut values: Vec<(u64, i64)> = Vec::new();
    for x in model.states() {
        if model.kind() == ModelKind::CaseII && model.split_state(x).0 != Coset::Z {
            continue;
        }
        let v = untwister[x as usize]
            .mul(w.c_t[x as usize].inverse())
            .mul(untwister[model.t(x) as usize].inverse());
        if !v.reflection {
            return Err(RigidityError::NonReflectionCoset { state: x, value: v });
        }
        if values.iter().all(|&(_, k)| k != v.exponent) {
            values.push((x, v.exponent));
        }
    }
    match values.as_slice() {
        [(_, k)] => Ok(*k),
        _ => Err(RigidityError::NotConstant { values }),
    }
}

/// What the extractor saw on the way to its answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub window: i64,
    pub bound: u64,
    pub plus: usize,
    pub minus: usize,
    /// Distinct values of `a(sⁿ, x)` over the window.
    pub defect_values: Vec<DihedralElement>,
    /// One solved transfer per `s`-cycle, in cycle order.
    pub transfers: Vec<Vec<i64>>,
}

/// A verified conjugacy recovered from a witness.
///
/// `c(g, x) = untwister(gx)⁻¹·automorphism(g)·untwister(x)` on every state,
/// and `conjugacy` intertwines the two actions up to `conjugacy_automorphism`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyResult {
    pub kind: ModelKind,
    pub k: i64,
    pub automorphism: DihedralAutomorphism,
    pub untwister: Vec<DihedralElement>,
    pub conjugacy: Vec<u64>,
    pub conjugacy_automorphism: DihedralAutomorphism,
    pub verified: bool,
    pub trace: ExtractionTrace,
}

fn failed(identity: impl Into<String>, state: u64) -> RigidityError {
    RigidityError::VerificationFailed {
        identity: identity.into(),
        state,
    }
}

/// Runs the whole pipeline with [`default_window`] and checks the outcome
/// exhaustively.
pub fn rigidity_extract(
    w: &CoeWitness,
    model: &DinftyModel,
    model2: &DinftyModel,
) -> Result<ConjugacyResult, RigidityError> {
    rigidity_extract_with_window(w, model, model2, None)
}

pub fn rigidity_extract_with_window(
    w: &CoeWitness,
    model: &DinftyModel,
    model2: &DinftyModel,
    window: Option<i64>,
) -> Result<ConjugacyResult, RigidityError> {
    w.validate(model, model2, model.modulus() as i64).map_err(|e| match e {
        RigidityError::NotBijective { state } => failed("h is a bijection", state),
        RigidityError::NotEquivariant { generator: g, state } => failed(format!("h({g}x) = c({g}, x)·h(x)"), state),
        RigidityError::RelationViolated { relation, state } => failed(relation, state),
        RigidityError::NotInjective { state } => failed("g ↦ c(g, x) is injective", state),
        other => other,
    })?;
    let window = window.unwrap_or_else(|| default_window(w, model));
    let required = 4 * model.modulus() as i64;
    if window < required {
        return Err(RigidityError::WindowTooSmall { window, required });
    }
    let powers = PowerTable::build(w, model, window);
    let partition = split_with(&powers, w, model)?;
    let normalized = normalize_with(&powers, model, &partition)?;

    let mut defect_values = BTreeSet::new();
    for x in model.states() {
        for n in -window..=window {
            defect_values.insert(defect(powers.get(n, x), &partition, n, x));
        }
    }

    let cycles = model.s_cycles();
    let expected_cycles = match model.kind() {
        ModelKind::CaseI => 1,
        ModelKind::CaseII => 2,
    };
    if cycles.len() != expected_cycles {
        return Err(failed(
            format!("model has {} s-cycles, expected {expected_cycles}", cycles.len()),
            0,
        ));
    }
    let mut untwister = vec![E; model.size() as usize];
    let mut transfers = Vec::new();
    for cycle in &cycles {
        let g: Vec<i64> = cycle.iter().map(|&x| normalized.generator[x as usize]).collect();
        let l = gh_solve(&g, TransferOrientation::Inverse)?;
        for (&x, &v) in cycle.iter().zip(&l) {
            untwister[x as usize] = s_pow(v).mul(normalized.d[x as usize]);
        }
        transfers.push(l);
    }
    let k = claim4_constant(w, model, &untwister)?;
    let trace = ExtractionTrace {
        window,
        bound: partition.bound,
        plus: partition.plus_count(),
        minus: partition.minus_count(),
        defect_values: defect_values.into_iter().collect(),
        transfers,
    };
    match model.kind() {
        ModelKind::CaseI => finish_case1(w, model, model2, &powers, untwister, k, trace),
        ModelKind::CaseII => finish_case2(w, model, model2, &powers, untwister, k, trace),
    }
}

/// `c(g, x) = U(gx)⁻¹·φ(g)·U(x)` for `g ∈ {s, t}` and for `sⁿ`, `|n| ≤ window`.
fn check_untwists(
    w: &CoeWitness,
    model: &DinftyModel,
    powers: &PowerTable,
    u: &[DihedralElement],
    phi: DihedralAutomorphism,
) -> Result<(), RigidityError> {
    let twisted = |g: DihedralElement, x: u64| {
        u[model.act(g, x) as usize]
            .inverse()
            .mul(phi.apply(g))
            .mul(u[x as usize])
    };
    for x in model.states() {
        if w.c_t[x as usize] != twisted(T, x) {
            return Err(failed("c(t, x) = U(tx)⁻¹·φ(t)·U(x)", x));
        }
        for n in -powers.range()..=powers.range() {
            if powers.get(n, x) != twisted(s_pow(n), x) {
                return Err(failed(format!("c(s^{n}, x) = U(s^{n}x)⁻¹·s^{n}·U(x)"), x));
            }
        }
    }
    Ok(())
}

/// `Φ` is a bijection with `Φ(gx) = ψ(g)·Φ(x)` for `g ∈ {s, t}`.
fn check_conjugacy(
    model: &DinftyModel,
    model2: &DinftyModel,
    phi_map: &[u64],
    psi: DihedralAutomorphism,
) -> Result<(), RigidityError> {
    check_bijection(phi_map, model.size()).map_err(|e| failed("conjugacy is a bijection", e.state().unwrap_or(0)))?;
    for x in model.states() {
        for (name, g) in [("s", S), ("t", T)] {
            if phi_map[model.act(g, x) as usize] != model2.act(psi.apply(g), phi_map[x as usize]) {
                return Err(failed(format!("Φ({name}x) = ψ({name})·Φ(x)"), x));
            }
        }
    }
    Ok(())
}

fn finish_case1(
    w: &CoeWitness,
    model: &DinftyModel,
    model2: &DinftyModel,
    powers: &PowerTable,
    untwister: Vec<DihedralElement>,
    k: i64,
    trace: ExtractionTrace,
) -> Result<ConjugacyResult, RigidityError> {
    let phi = DihedralAutomorphism::phi(k);
    check_untwists(w, model, powers, &untwister, phi)?;
    let conjugacy: Vec<u64> = model
        .states()
        .map(|x| model2.act(untwister[x as usize], w.h[x as usize]))
        .collect();
    check_conjugacy(model, model2, &conjugacy, phi)?;
    Ok(ConjugacyResult {
        kind: ModelKind::CaseI,
        k,
        automorphism: phi,
        untwister,
        conjugacy,
        conjugacy_automorphism: phi,
        verified: true,
        trace,
    })
}

fn finish_case2(
    w: &CoeWitness,
    model: &DinftyModel,
    model2: &DinftyModel,
    powers: &PowerTable,
    mut untwister: Vec<DihedralElement>,
    k: i64,
    trace: ExtractionTrace,
) -> Result<ConjugacyResult, RigidityError> {
    let x0: Vec<u64> = model.states().filter(|&x| model.split_state(x).0 == Coset::Z).collect();
    // L′(tx) = t⁻¹·s⁻ᵏ·L″(x)·c(t⁻¹, x)⁻¹ on tX₀
    for &x in &x0 {
        let patched = T
            .inverse()
            .mul(s_pow(-k))
            .mul(untwister[x as usize])
            .mul(w.c_t[x as usize].inverse());
        let tx = model.t(x) as usize;
        if patched != untwister[tx] {
            return Err(failed("L′(tx) = t⁻¹·s⁻ᵏ·L″(x)·c(t⁻¹, x)⁻¹", x));
        }
        untwister[tx] = patched;
    }

    let l2 = |x: u64| untwister[x as usize];
    for &x in &x0 {
        let tx = model.t(x);
        let ct = w.c_t[x as usize];
        for n in -powers.range()..=powers.range() {
            let sx = model.act(s_pow(n), x);
            let back = model.act(s_pow(-n), x);
            let forward = l2(sx).inverse().mul(s_pow(n)).mul(l2(x));
            let reflected = w.c_t[back as usize].mul(l2(back).inverse()).mul(s_pow(-n)).mul(l2(x));
            let branches = [
                ("c(s^n, x)", powers.get(n, x), forward),
                ("c(s^n t, x)", powers.get(n, tx).mul(ct), reflected),
                ("c(s^n, tx)", powers.get(n, tx), reflected.mul(ct.inverse())),
                (
                    "c(s^n t, tx)",
                    powers.get(n, x).mul(w.c_t[tx as usize]),
                    forward.mul(w.c_t[tx as usize]),
                ),
            ];
            for (name, lhs, rhs) in branches {
                if lhs != rhs {
                    return Err(failed(format!("{name} at n = {n}"), x));
                }
            }
        }
    }
    check_untwists(w, model, powers, &untwister, DihedralAutomorphism::phi(k))?;

    // Φ(x) = L″(x)·h(x) and Φ(tx) = t⁻¹·L″(x)·h(x) for x ∈ X₀
    let mut conjugacy = vec![0u64; model.size() as usize];
    for &x in &x0 {
        let hx = w.h[x as usize];
        conjugacy[x as usize] = model2.act(l2(x), hx);
        conjugacy[model.t(x) as usize] = model2.act(T.inverse().mul(l2(x)), hx);
    }
    check_conjugacy(model, model2, &conjugacy, DihedralAutomorphism::IDENTITY)?;
    Ok(ConjugacyResult {
        kind: ModelKind::CaseII,
        k,
        automorphism: DihedralAutomorphism::phi(k),
        untwister,
        conjugacy,
        conjugacy_automorphism: DihedralAutomorphism::IDENTITY,
        verified: true,
        trace,
    })
}
