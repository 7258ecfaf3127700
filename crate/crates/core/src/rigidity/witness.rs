//! Continuous orbit equivalence witnesses between finite D∞ models.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::model::DinftyModel;
use super::RigidityError;
use crate::group::{DihedralAutomorphism, DihedralElement};

/// A bijection `h` of the state space with its orbit cocycle on the
/// generators: `h(sx) = c_s(x)·h(x)` and `h(tx) = c_t(x)·h(x)`, the right
/// hand sides computed in the second model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeWitness {
    pub h: Vec<u64>,
    pub c_s: Vec<DihedralElement>,
    pub c_t: Vec<DihedralElement>,
}

/// `c(sⁿ, x)` for `|n| ≤ range` and every state.
#[derive(Clone, Debug)]
pub struct PowerTable {
    range: i64,
    values: Vec<DihedralElement>,
}

impl PowerTable {
    pub fn build(w: &CoeWitness, model: &DinftyModel, range: i64) -> Self {
        let width = (2 * range + 1) as usize;
        let mut values = vec![DihedralElement::IDENTITY; width * model.size() as usize];
        for x in model.states() {
            let zero = x as usize * width + range as usize;
            let (mut fwd, mut back) = (x, x);
            for n in 0..range as usize {
                values[zero + n + 1] = w.c_s[fwd as usize].mul(values[zero + n]);
                fwd = model.s(fwd);
                back = model.s_inv(back);
                values[zero - n - 1] = w.c_s[back as usize].inverse().mul(values[zero - n]);
            }
        }
        PowerTable { range, values }
    }

    pub fn range(&self) -> i64 {
        self.range
    }

    pub fn get(&self, n: i64, x: u64) -> DihedralElement {
        assert!(n.abs() <= self.range, "power {n} outside table range {}", self.range);
        self.values[x as usize * (2 * self.range + 1) as usize + (n + self.range) as usize]
    }
}

impl CoeWitness {
    /// `c(g, x)` by the cocycle identity: `c(sᵏt, x) = c(sᵏ, tx)·c(t, x)`.
    pub fn eval(&self, model: &DinftyModel, g: DihedralElement, x: u64) -> DihedralElement {
        let (y, tail) = if g.reflection {
            (model.t(x), self.c_t[x as usize])
        } else {
            (x, DihedralElement::IDENTITY)
        };
        let mut acc = DihedralElement::IDENTITY;
        let mut p = y;
        if g.exponent >= 0 {
            for _ in 0..g.exponent {
                acc = self.c_s[p as usize].mul(acc);
                p = model.s(p);
            }
        } else {
            for _ in 0..-g.exponent {
                p = model.s_inv(p);
                acc = self.c_s[p as usize].inverse().mul(acc);
            }
        }
        acc.mul(tail)
    }

    /// Largest word length among the generator values.
    pub fn generator_bound(&self) -> u64 {
        self.c_s
            .iter()
            .zip(&self.c_t)
            .map(|(&a, &b)| crate::group::word_length(a) + crate::group::word_length(b))
            .max()
            .unwrap_or(0)
    }

    /// Checks the witness invariants against the two models.
    ///
    /// `window` bounds the injectivity test of `g ↦ c(g, x)` over
    /// `sᵏ, sᵏt` with `|k| ≤ window`.
    pub fn validate(&self, model: &DinftyModel, model2: &DinftyModel, window: i64) -> Result<(), RigidityError> {
        let size = model.size() as usize;
        if !model.compatible(model2) {
            return Err(RigidityError::ModelMismatch);
        }
        if self.h.len() != size || self.c_s.len() != size || self.c_t.len() != size {
            return Err(RigidityError::WrongSize { expected: size });
        }
        check_bijection(&self.h, model.size())?;
        for x in model.states() {
            let hx = self.h[x as usize];
            if self.h[model.s(x) as usize] != model2.act(self.c_s[x as usize], hx) {
                return Err(RigidityError::NotEquivariant {
                    generator: "s".into(),
                    state: x,
                });
            }
            if self.h[model.t(x) as usize] != model2.act(self.c_t[x as usize], hx) {
                return Err(RigidityError::NotEquivariant {
                    generator: "t".into(),
                    state: x,
                });
            }
        }
        for x in model.states() {
            if !self.c_t[model.t(x) as usize].mul(self.c_t[x as usize]).is_identity() {
                return Err(RigidityError::RelationViolated {
                    relation: "c(t, tx)·c(t, x) = e".into(),
                    state: x,
                });
            }
            // c(tsts, x) letter by letter, rightmost first
            let mut acc = DihedralElement::IDENTITY;
            let mut p = x;
            for letter in ['s', 't', 's', 't'] {
                let (v, q) = match letter {
                    's' => (self.c_s[p as usize], model.s(p)),
                    _ => (self.c_t[p as usize], model.t(p)),
                };
                acc = v.mul(acc);
                p = q;
            }
            if !acc.is_identity() {
                return Err(RigidityError::RelationViolated {
                    relation: "c(tsts, x) = e".into(),
                    state: x,
                });
            }
        }
        let powers = PowerTable::build(self, model, window);
        for x in model.states() {
            let ct = self.c_t[x as usize];
            let tx = model.t(x);
            let mut seen = HashSet::with_capacity(4 * window as usize + 2);
            for k in -window..=window {
                let translation = powers.get(k, x);
                let reflection = powers.get(k, tx).mul(ct);
                if !seen.insert(translation) || !seen.insert(reflection) {
                    return Err(RigidityError::NotInjective { state: x });
                }
            }
        }
        Ok(())
    }

    /// The witness for `h′(x) = U(x)⁻¹·h(x)`, whose cocycle is
    /// `U(gx)⁻¹·c(g, x)·U(x)`.
    pub fn twisted(
        &self,
        model: &DinftyModel,
        model2: &DinftyModel,
        u: &[DihedralElement],
    ) -> Result<CoeWitness, RigidityError> {
        let size = model.size() as usize;
        if u.len() != size {
            return Err(RigidityError::WrongSize { expected: size });
        }
        let h: Vec<u64> = model
            .states()
            .map(|x| model2.act(u[x as usize].inverse(), self.h[x as usize]))
            .collect();
        check_bijection(&h, model.size())?;
        let conj = |gx: u64, c: DihedralElement, x: u64| u[gx as usize].inverse().mul(c).mul(u[x as usize]);
        let c_s = model
            .states()
            .map(|x| conj(model.s(x), self.c_s[x as usize], x))
            .collect();
        let c_t = model
            .states()
            .map(|x| conj(model.t(x), self.c_t[x as usize], x))
            .collect();
        Ok(CoeWitness { h, c_s, c_t })
    }
}

pub(crate) fn check_bijection(map: &[u64], size: u64) -> Result<(), RigidityError> {
    let mut hit = vec![false; size as usize];
    for (x, &y) in map.iter().enumerate() {
        if y >= size || std::mem::replace(&mut hit[y as usize], true) {
            return Err(RigidityError::NotBijective { state: x as u64 });
        }
    }
    Ok(())
}

/// The constant witness of a conjugacy: `h(gx) = ψ(g)·h(x)`.
pub fn witness_from_conjugacy(
    model: &DinftyModel,
    model2: &DinftyModel,
    h: &[u64],
    psi: DihedralAutomorphism,
) -> Result<CoeWitness, RigidityError> {
    if !model.compatible(model2) {
        return Err(RigidityError::ModelMismatch);
    }
    let size = model.size() as usize;
    if h.len() != size {
        return Err(RigidityError::WrongSize { expected: size });
    }
    check_bijection(h, model.size())?;
    let (s_img, t_img) = (psi.apply(DihedralElement::S), psi.apply(DihedralElement::T));
    for x in model.states() {
        let hx = h[x as usize];
        if h[model.s(x) as usize] != model2.act(s_img, hx) {
            return Err(RigidityError::NotEquivariant {
                generator: "s".into(),
                state: x,
            });
        }
        if h[model.t(x) as usize] != model2.act(t_img, hx) {
            return Err(RigidityError::NotEquivariant {
                generator: "t".into(),
                state: x,
            });
        }
    }
    Ok(CoeWitness {
        h: h.to_vec(),
        c_s: vec![s_img; size],
        c_t: vec![t_img; size],
    })
}
