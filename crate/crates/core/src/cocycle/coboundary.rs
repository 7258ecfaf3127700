//! Deciding whether an abelian-valued level cocycle is a coboundary.
//!
//! Write `S` for the product of `f` over one period. At level `k ≥ j` the
//! cocycle is a coboundary exactly when `(n_k/nⱼ)·S = 0`, and then the
//! telescoped sum of `f` is a transfer function. Along the whole chain this
//! becomes a question about prime valuations of `n_k/nⱼ`, which the periodic
//! tail makes decidable.

use serde::{Deserialize, Serialize};

use super::{factorize, CocycleError, LevelCocycle, TransferFunction, TransferOrientation};
use crate::chain::{ChainError, DivisibilityChain};
use crate::group::Group;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SolveOutcome {
    Solved { transfer: TransferFunction },
    Unsolvable { obstruction: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum CoboundaryVerdict {
    /// Solvable first at this level.
    CoboundaryAtLevel { level: usize },
    /// Unsolvable at every level; from `stable_level` on the obstruction
    /// `(n_k/nⱼ)·S` generates the same subgroup of order `obstruction_order`.
    NeverCoboundary {
        stable_level: usize,
        obstruction: usize,
        obstruction_order: usize,
    },
}

impl CoboundaryVerdict {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryVerdict::CoboundaryAtLevel { .. })
    }
}

pub(crate) fn require_abelian(c: &LevelCocycle) -> Result<(), CocycleError> {
    if c.target().is_abelian() {
        Ok(())
    } else {
        Err(CocycleError::NonAbelianTarget)
    }
}

/// `(n_k/nⱼ)·S`, with the exponent reduced modulo the order of `S`.
pub(crate) fn obstruction_at(c: &LevelCocycle, chain: &DivisibilityChain, k: usize) -> usize {
    let g = c.target();
    let s = c.period_product();
    let order = g.element_order(s) as u64;
    let e = (c.level()..k).fold(1 % order, |acc, l| acc * (chain.multiplier(l) % order) % order);
    g.pow(s, e as i64)
}

/// Solves for a transfer at level `k` or reports the obstruction.
///
/// The transfer is in the forward orientation: `L(0) = 0` and
/// `L(x + 1) = L(x) + f(x)` around `ℤ/n_k`.
pub fn coboundary_solve_at_level(
    c: &LevelCocycle,
    chain: &DivisibilityChain,
    k: usize,
) -> Result<SolveOutcome, CocycleError> {
    require_abelian(c)?;
    if k < c.level() {
        return Err(CocycleError::LevelMismatch {
            cocycle_level: c.level(),
            model_level: k,
        });
    }
    let g = c.target();
    let obstruction = obstruction_at(c, chain, k);
    if obstruction != g.identity_index() {
        return Ok(SolveOutcome::Unsolvable { obstruction });
    }
    let nk = chain.nth_modulus_u64(k).ok_or(ChainError::ModulusOverflow(k))?;
    let mut table = Vec::with_capacity(nk as usize);
    let mut acc = g.identity_index();
    for x in 0..nk {
        table.push(acc);
        acc = g.mul(acc, c.generator(x));
    }
    debug_assert_eq!(acc, g.identity_index());
    Ok(SolveOutcome::Solved {
        transfer: TransferFunction::new(k, table, TransferOrientation::Forward),
    })
}

/// Prime powers `pᵉ` of `ord(S)` paired with the largest total valuation
/// `v_p(n_k/nⱼ)` reachable along the chain (`None` when unbounded).
fn prime_budget(c: &LevelCocycle, chain: &DivisibilityChain) -> Vec<(u64, u64, Option<u64>)> {
    let g = c.target();
    let order = g.element_order(c.period_product()) as u64;
    factorize(order)
        .into_iter()
        .map(|(p, e)| {
            let reach = if chain.sup_ord_infinite(p) {
                None
            } else {
                // only prefix multipliers can contribute
                Some(chain.ratio_ord_p(p, c.level(), chain.tail_start().max(c.level())))
            };
            (p, e, reach)
        })
        .collect()
}

/// First level `k ≥ j` at which every prime has reached `min(e, reach)`.
pub(crate) fn stable_level(c: &LevelCocycle, chain: &DivisibilityChain) -> usize {
    let budget = prime_budget(c, chain);
    let j = c.level();
    let mut k = j;
    loop {
        let settled = budget.iter().all(|&(p, e, reach)| {
            let target = reach.map_or(e, |r| r.min(e));
            chain.ratio_ord_p(p, j, k).min(e) >= target
        });
        if settled {
            return k;
        }
        k += 1;
    }
}

/// Decides the coboundary question over the whole chain.
pub fn coboundary_decide_chain(c: &LevelCocycle, chain: &DivisibilityChain) -> Result<CoboundaryVerdict, CocycleError> {
    require_abelian(c)?;
    let budget = prime_budget(c, chain);
    let k = stable_level(c, chain);
    if budget.iter().all(|&(_, e, reach)| reach.is_none_or(|r| r >= e)) {
        return Ok(CoboundaryVerdict::CoboundaryAtLevel { level: k });
    }
    let obstruction = obstruction_at(c, chain, k);
    Ok(CoboundaryVerdict::NeverCoboundary {
        stable_level: k,
        obstruction,
        obstruction_order: c.target().element_order(obstruction),
    })
}
