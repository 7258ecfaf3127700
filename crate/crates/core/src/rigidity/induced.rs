//! Induced actions: restricting an orbit equivalence of `Ind(ℤ)` models to
//! the ℤ-coset, and lifting a ℤ-conjugacy back.

use serde::{Deserialize, Serialize};

use super::extract::gh_solve;
use super::model::{DinftyModel, ModelKind};
use super::witness::{CoeWitness, PowerTable};
use super::RigidityError;
use crate::cocycle::TransferOrientation;
use crate::group::{DihedralAutomorphism, DihedralElement, Orientation};

/// The ℤ-valued cocycle `θ(n, x)` with `x + u·n = x + u′·θ(n, x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedCocycle {
    pub modulus: u64,
    /// `θ(1, x)` for `x ∈ ℤ/n_L`.
    pub theta: Vec<i64>,
}

fn failed(identity: impl Into<String>, state: u64) -> RigidityError {
    RigidityError::VerificationFailed {
        identity: identity.into(),
        state,
    }
}

/// Restricts an identity witness between two Case II models to the ℤ-coset.
pub fn induced_coe_restrict(
    w: &CoeWitness,
    model: &DinftyModel,
    model2: &DinftyModel,
) -> Result<InducedCocycle, RigidityError> {
    if model.kind() != ModelKind::CaseII || model2.kind() != ModelKind::CaseII {
        return Err(RigidityError::NotIdentityWitness);
    }
    w.validate(model, model2, model.modulus() as i64)?;
    if w.h.iter().enumerate().any(|(p, &q)| p as u64 != q) {
        return Err(RigidityError::NotIdentityWitness);
    }
    let m = model.modulus();
    let window = 2 * m as i64;
    let powers = PowerTable::build(w, model, window);
    let mut theta_n = vec![vec![0i64; (2 * window + 1) as usize]; m as usize];
    for x in 0..m {
        for n in -window..=window {
            let v = powers.get(n, x);
            if v.reflection {
                return Err(failed(format!("θ(s^{n}, x) ∈ ⟨s⟩"), x));
            }
            if model.act(DihedralElement::translation(n), x) != model2.act(v, x) {
                return Err(failed(format!("α_{n}(x) = β_θ(x)"), x));
            }
            theta_n[x as usize][(n + window) as usize] = v.exponent;
        }
    }
    let theta_at = |n: i64, x: u64| theta_n[x as usize][(n + window) as usize];
    let half = window / 2;
    for x in 0..m {
        for a in -half..=half {
            let ax = model.act(DihedralElement::translation(a), x);
            for b in -half..=half {
                if theta_at(a + b, x) != theta_at(b, ax) + theta_at(a, x) {
                    return Err(failed(format!("θ({a}+{b}, x) = θ({b}, α_{a}x) + θ({a}, x)"), x));
                }
            }
        }
    }
    Ok(InducedCocycle {
        modulus: m,
        theta: (0..m).map(|x| theta_at(1, x)).collect(),
    })
}

/// A conjugacy `(gℤ, x) ↦ (gℤ, x + u′·f(x))` between two Case II models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedLift {
    pub sign: Orientation,
    pub f: Vec<i64>,
    pub conjugacy: Vec<u64>,
    pub automorphism: DihedralAutomorphism,
}

/// Solves `f(x + u) − f(x) = ±1 − θ(x)` and lifts the resulting ℤ-conjugacy.
pub fn induced_conjugacy_lift(
    theta: &InducedCocycle,
    model: &DinftyModel,
    model2: &DinftyModel,
) -> Result<InducedLift, RigidityError> {
    if model.kind() != ModelKind::CaseII || !model.compatible(model2) {
        return Err(RigidityError::ModelMismatch);
    }
    let m = model.modulus();
    if theta.theta.len() as u64 != m {
        return Err(RigidityError::WrongSize { expected: m as usize });
    }
    // the ℤ-coset cycle in the order x, x + u, x + 2u, …
    let cycle = model
        .s_cycles()
        .into_iter()
        .find(|c| c[0] == 0)
        .expect("state 0 lies on a cycle");
    let solve = |sign: i64| {
        let g: Vec<i64> = cycle.iter().map(|&x| theta.theta[x as usize] - sign).collect();
        gh_solve(&g, TransferOrientation::Inverse)
    };
    let (sign, along) = match solve(1) {
        Ok(f) => (Orientation::Plus, f),
        Err(first) => match solve(-1) {
            Ok(f) => (Orientation::Minus, f),
            Err(_) => return Err(first.into()),
        },
    };
    let mut f = vec![0i64; m as usize];
    for (&x, &v) in cycle.iter().zip(&along) {
        f[x as usize] = v;
    }
    let automorphism = match sign {
        Orientation::Plus => DihedralAutomorphism::IDENTITY,
        Orientation::Minus => DihedralAutomorphism::reversing(0),
    };
    let shift = |x: u64| {
        model2
            .base()
            .step(x, (model2.step() as i128 * f[x as usize] as i128 % m as i128) as i64)
    };
    let conjugacy: Vec<u64> = model
        .states()
        .map(|p| {
            let (coset, x) = model.split_state(p);
            model2.join_state(coset, shift(x))
        })
        .collect();
    for p in model.states() {
        for (name, g) in [("s", DihedralElement::S), ("t", DihedralElement::T)] {
            if conjugacy[model.act(g, p) as usize] != model2.act(automorphism.apply(g), conjugacy[p as usize]) {
                return Err(failed(format!("F({name}p) = τ({name})·F(p)"), p));
            }
        }
    }
    Ok(InducedLift {
        sign,
        f,
        conjugacy,
        automorphism,
    })
}
