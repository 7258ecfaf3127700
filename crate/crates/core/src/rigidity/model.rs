//! Finite models of minimal D∞ actions.

use serde::{Deserialize, Serialize};

use super::RigidityError;
use crate::chain::{DivisibilityChain, OdometerModel};
use crate::group::DihedralElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// `s` is the odometer step on `ℤ/n_L` and `t` a reflection.
    #[serde(rename = "case_i")]
    CaseI,
    /// Induced from `ℤ` over `{ℤ, tℤ} × ℤ/n_L`.
    #[serde(rename = "case_ii")]
    CaseII,
}

/// One of the two cosets of `⟨s⟩` in D∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coset {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "tZ")]
    TZ,
}

impl Coset {
    fn of(g: DihedralElement) -> Coset {
        if g.reflection {
            Coset::TZ
        } else {
            Coset::Z
        }
    }

    /// The lift `L(ℤ) = e`, `L(tℤ) = t`.
    pub fn lift(self) -> DihedralElement {
        match self {
            Coset::Z => DihedralElement::IDENTITY,
            Coset::TZ => DihedralElement::T,
        }
    }
}

/// `δ(g, g′ℤ) = L(gg′ℤ)⁻¹·g·L(g′ℤ)`, always a translation.
pub fn delta(g: DihedralElement, coset: Coset) -> DihedralElement {
    let target = Coset::of(g.mul(coset.lift()));
    target.lift().inverse().mul(g).mul(coset.lift())
}

/// Serialized form of a [`DinftyModel`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub chain: DivisibilityChain,
    pub level: usize,
    /// Case I: `t` acts by `x ↦ offset − x`.
    #[serde(default)]
    pub offset: i64,
    /// Case II: the base ℤ-action is `x ↦ x + step`, with `step` a unit.
    #[serde(default = "one")]
    pub step: i64,
}

fn one() -> i64 {
    1
}

/// A D∞ action on a finite set.
///
/// Case I states are `0..n_L`; `s(x) = x + 1`, `t(x) = offset − x`. A nonzero
/// offset is the offset-0 model precomposed with `φ_offset`.
///
/// Case II states are `c·n_L + x` for the coset `c ∈ {ℤ = 0, tℤ = 1}`;
/// `g(c, x) = (gc, x + step·δ(g, c))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelConfig", into = "ModelConfig")]
pub struct DinftyModel {
    kind: ModelKind,
    base: OdometerModel,
    offset: i64,
    step: i64,
}

impl TryFrom<ModelConfig> for DinftyModel {
    type Error = RigidityError;

    fn try_from(cfg: ModelConfig) -> Result<Self, RigidityError> {
        let base = OdometerModel::new(cfg.chain, cfg.level)?;
        match cfg.kind {
            ModelKind::CaseI => build_case1_model_with_offset(base, cfg.offset),
            ModelKind::CaseII => build_case2_model_with_step(base, cfg.step),
        }
    }
}

impl From<DinftyModel> for ModelConfig {
    fn from(m: DinftyModel) -> Self {
        ModelConfig {
            kind: m.kind,
            chain: m.base.chain().clone(),
            level: m.base.level(),
            offset: m.offset,
            step: m.step,
        }
    }
}

pub fn build_case1_model(chain: DivisibilityChain, level: usize) -> Result<DinftyModel, RigidityError> {
    build_case1_model_with_offset(OdometerModel::new(chain, level)?, 0)
}

pub fn build_case1_model_with_offset(base: OdometerModel, offset: i64) -> Result<DinftyModel, RigidityError> {
    if base.modulus() < 3 {
        return Err(RigidityError::ModelTooSmall {
            modulus: base.modulus(),
        });
    }
    let offset = offset.rem_euclid(base.modulus() as i64);
    Ok(DinftyModel {
        kind: ModelKind::CaseI,
        base,
        offset,
        step: 1,
    })
}

pub fn build_case2_model(chain: DivisibilityChain, level: usize) -> Result<DinftyModel, RigidityError> {
    build_case2_model_with_step(OdometerModel::new(chain, level)?, 1)
}

pub fn build_case2_model_with_step(base: OdometerModel, step: i64) -> Result<DinftyModel, RigidityError> {
    let m = base.modulus() as i64;
    let step = step.rem_euclid(m);
    if num_integer::gcd(step, m) != 1 {
        return Err(RigidityError::StepNotUnit {
            step,
            modulus: base.modulus(),
        });
    }
    Ok(DinftyModel {
        kind: ModelKind::CaseII,
        base,
        offset: 0,
        step,
    })
}

impl DinftyModel {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn base(&self) -> &OdometerModel {
        &self.base
    }

    /// `n_L`, the length of every `s`-cycle.
    pub fn modulus(&self) -> u64 {
        self.base.modulus()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn size(&self) -> u64 {
        match self.kind {
            ModelKind::CaseI => self.modulus(),
            ModelKind::CaseII => 2 * self.modulus(),
        }
    }

    pub fn states(&self) -> std::ops::Range<u64> {
        0..self.size()
    }

    /// Case II: the coset and base point of a state.
    pub fn split_state(&self, p: u64) -> (Coset, u64) {
        let m = self.modulus();
        (if p < m { Coset::Z } else { Coset::TZ }, p % m)
    }

    pub fn join_state(&self, coset: Coset, x: u64) -> u64 {
        match coset {
            Coset::Z => x,
            Coset::TZ => self.modulus() + x,
        }
    }

    /// The action of `g` on state `p`.
    pub fn act(&self, g: DihedralElement, p: u64) -> u64 {
        match self.kind {
            ModelKind::CaseI => {
                let x = if g.reflection {
                    self.base.step(0, self.offset - p as i64)
                } else {
                    p
                };
                self.base.step(x, g.exponent)
            }
            ModelKind::CaseII => {
                let (coset, x) = self.split_state(p);
                let d = delta(g, coset);
                let y = self.base.step(
                    x,
                    (self.step as i128 * d.exponent as i128 % self.modulus() as i128) as i64,
                );
                self.join_state(Coset::of(g.mul(coset.lift())), y)
            }
        }
    }

    pub fn s(&self, p: u64) -> u64 {
        self.act(DihedralElement::S, p)
    }

    pub fn s_inv(&self, p: u64) -> u64 {
        self.act(DihedralElement::translation(-1), p)
    }

    pub fn t(&self, p: u64) -> u64 {
        self.act(DihedralElement::T, p)
    }

    /// The `s`-orbits, each listed from its smallest state in the order `p, sp, s²p, …`.
    pub fn s_cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = vec![false; self.size() as usize];
        let mut cycles = Vec::new();
        for start in self.states() {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p as usize] {
                seen[p as usize] = true;
                cycle.push(p);
                p = self.s(p);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// First state where `t² = e` or `tst = s⁻¹` fails.
    pub fn relation_violation(&self) -> Option<u64> {
        self.states()
            .find(|&p| self.t(self.t(p)) != p || self.t(self.s(self.t(p))) != self.s_inv(p))
    }

    /// Same chain, level and kind; the twisting parameters may differ.
    pub fn compatible(&self, other: &DinftyModel) -> bool {
        self.kind == other.kind && self.base == other.base
    }
}
