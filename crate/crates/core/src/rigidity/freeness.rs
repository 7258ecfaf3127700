//! Stabilizers of a finite model, read modulo the translations by `n_L`.
//!
//! Every `s^{m·n_L}` acts trivially on the finite model, so only the image of
//! a stabilizer in D∞ modulo that kernel carries information.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::{DinftyModel, ModelKind};
use crate::group::{word_length, DihedralElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stabilizer {
    Trivial,
    /// Fixed by `s^class·t` and its kernel translates.
    Reflection {
        class: u64,
    },
    Other {
        elements: Vec<DihedralElement>,
    },
}

/// States fixed by the reflections `s^class·t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionFixed {
    pub class: u64,
    pub states: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub kind: ModelKind,
    pub modulus: u64,
    /// Elements with word length at most this were tested.
    pub bound: u64,
    pub stabilizers: Vec<Stabilizer>,
    pub fixed_points: Vec<ReflectionFixed>,
    pub free: bool,
}

pub fn topological_freeness_sweep(model: &DinftyModel) -> FreenessReport {
    let m = model.modulus();
    let bound = 2 * m;
    let reach = bound as i64;
    let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut stabilizers = Vec::with_capacity(model.size() as usize);
    for p in model.states() {
        let mut found: Vec<DihedralElement> = Vec::new();
        for n in -reach..=reach {
            for reflection in [false, true] {
                let g = DihedralElement::new(n, reflection);
                if word_length(g) > bound || model.act(g, p) != p {
                    continue;
                }
                let class = DihedralElement::new(n.rem_euclid(m as i64), reflection);
                if class.is_identity() || found.contains(&class) {
                    continue;
                }
                found.push(class);
            }
        }
        let stabilizer = match found.as_slice() {
            [] => Stabilizer::Trivial,
            [g] if g.reflection => Stabilizer::Reflection {
                class: g.exponent as u64,
            },
            _ => Stabilizer::Other {
                elements: found.clone(),
            },
        };
        for g in found.iter().filter(|g| g.reflection) {
            classes.entry(g.exponent as u64).or_default().push(p);
        }
        stabilizers.push(stabilizer);
    }
    let free = stabilizers.iter().all(|s| *s == Stabilizer::Trivial);
    FreenessReport {
        kind: model.kind(),
        modulus: m,
        bound,
        stabilizers,
        fixed_points: classes
            .into_iter()
            .map(|(class, states)| ReflectionFixed { class, states })
            .collect(),
        free,
    }
}
