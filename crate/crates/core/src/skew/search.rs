//! Brute-force search for a conjugacy between two skew products.
//!
//! A conjugacy `X ×_c F → X ×_{c′} F` over `Φ = (ε(·)g, ±)` has a base part
//! `φ` with `φ(x + n) = φ(x) ± n`, so `φ(x) = ±x + a`, and a fibre part `ψ′`
//! with
//!
//! `c′(n, x) = ψ′(x + n)·ε(c(±n, φ⁻¹x))·g^{±n}·ψ′(x)⁻¹`.
//!
//! The search walks every `Φ`, every offset `a` and every table `ψ′`,
//! pruning a partial table as soon as the `n = 1` equation fails.

use serde::{Deserialize, Serialize};

use super::{automorphism_family, FamilyMember, SkewError, SkewSystem};
use crate::group::{FiniteGroupTable, Group};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundConjugacy {
    pub automorphism: FamilyMember,
    /// `φ(0)`.
    pub offset: u64,
    pub psi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub automorphisms: usize,
    pub offsets: u64,
    /// Partial tables visited by the depth-first search.
    pub nodes: u64,
    pub found: Option<FoundConjugacy>,
}

struct Frame<'a> {
    src: &'a SkewSystem,
    dst: &'a SkewSystem,
    group: &'a FiniteGroupTable,
    member: &'a FamilyMember,
    offset: u64,
}

impl Frame<'_> {
    fn phi_inv(&self, y: u64) -> u64 {
        let m = self.src.base().modulus() as i64;
        (self.member.sign.sign() * (y as i64 - self.offset as i64)).rem_euclid(m) as u64
    }

    /// `ε(c(±n, φ⁻¹x))·g^{±n}`.
    fn twisted(&self, n: i64, x: u64) -> usize {
        let sn = self.member.sign.sign() * n;
        let c = self.src.c(sn, self.phi_inv(x));
        self.group
            .mul(self.member.epsilon[c], self.group.pow(self.member.g, sn))
    }

    fn holds(&self, n: i64, x: u64, psi_x: usize, psi_xn: usize) -> bool {
        let g = self.group;
        let rhs = g.mul(g.mul(psi_xn, self.twisted(n, x)), g.inverse(psi_x));
        self.dst.c(n, x) == rhs
    }

    fn dfs(&self, psi: &mut Vec<usize>, nodes: &mut u64) -> bool {
        *nodes += 1;
        let m = self.src.base().modulus();
        let pos = psi.len() as u64;
        if pos == m {
            return self.holds(1, m - 1, psi[m as usize - 1], psi[0]) && self.full_check(psi);
        }
        for v in self.group.elements() {
            if pos > 0 && !self.holds(1, pos - 1, psi[pos as usize - 1], v) {
                continue;
            }
            psi.push(v);
            if self.dfs(psi, nodes) {
                return true;
            }
            psi.pop();
        }
        false
    }

    fn full_check(&self, psi: &[usize]) -> bool {
        let base = self.src.base();
        let w = base.modulus() as i64;
        base.states()
            .all(|x| (-w..=w).all(|n| self.holds(n, x, psi[x as usize], psi[base.step(x, n) as usize])))
    }
}

/// Looks for a conjugacy from `src` to `dst`; the equation is checked for
/// `|n| ≤ n_L` once a table is complete.
pub fn exhaustive_conjugacy_search(src: &SkewSystem, dst: &SkewSystem) -> Result<SearchReport, SkewError> {
    if !src.same_shape(dst) {
        return Err(SkewError::BaseMismatch);
    }
    let group = src.group();
    let family = automorphism_family(group);
    let m = src.base().modulus();
    let mut nodes = 0;
    for member in &family {
        for offset in 0..m {
            let frame = Frame {
                src,
                dst,
                group,
                member,
                offset,
            };
            let mut psi = Vec::with_capacity(m as usize);
            if frame.dfs(&mut psi, &mut nodes) {
                return Ok(SearchReport {
                    automorphisms: family.len(),
                    offsets: m,
                    nodes,
                    found: Some(FoundConjugacy {
                        automorphism: member.clone(),
                        offset,
                        psi,
                    }),
                });
            }
        }
    }
    Ok(SearchReport {
        automorphisms: family.len(),
        offsets: m,
        nodes,
        found: None,
    })
}
