//! Essential values over finite odometer models.
//!
//! For a finite target the one-point compactification adds nothing, so only
//! genuine group values are reported.

use serde::{Deserialize, Serialize};

use super::coboundary::{obstruction_at, require_abelian, stable_level};
use super::{CocycleError, LevelCocycle};
use crate::chain::{ChainError, DivisibilityChain, OdometerModel};

/// A set of target elements, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EssentialValueSet {
    pub values: Vec<usize>,
}

impl EssentialValueSet {
    pub fn is_trivial(&self, identity: usize) -> bool {
        self.values == [identity]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Values `r` such that every level-`k` cylinder `U` contains some `x` and
/// return time `N` with `c(N, x) = r`, found by enumeration on the model.
///
/// Returns to a level-`k` cylinder happen exactly at multiples of `n_k`, and
/// `N = ℓ·n_k` runs over `0 ≤ ℓ < |K|`: `c(ℓn_k, x)` is a power of
/// `c(n_k, x)`, whose order divides `|K|`. Values come from prefix products
/// `c(m, x) = F(x + m)·F(x)⁻¹` with `F(m) = c(m, 0)`, which is valid for any
/// target group; `F` itself is filled period by period.
pub fn essential_values_bruteforce(
    c: &LevelCocycle,
    model: &OdometerModel,
    k: usize,
) -> Result<EssentialValueSet, CocycleError> {
    c.check_model(model)?;
    if k < c.level() || k > model.level() {
        return Err(CocycleError::LevelMismatch {
            cocycle_level: k,
            model_level: model.level(),
        });
    }
    let g = c.target();
    let order = g.order();
    let nl = model.modulus() as usize;
    let nk = model.level_modulus(k)? as usize;
    let e = g.identity_index();

    // mt[a·|K| + b] = a·b, and mt_right[b·|K| + a] = a·b for right multiplication by b
    let mt: Vec<u32> = (0..order * order).map(|i| g.mul(i / order, i % order) as u32).collect();
    let mt_right: Vec<u32> = (0..order * order).map(|i| g.mul(i % order, i / order) as u32).collect();
    let rows: Vec<usize> = c.table().iter().map(|&f| f * order).collect();

    // F(qnⱼ + r) = F(r)·Sᵠ, so no long serial chain of products is needed
    let nj = c.period() as usize;
    let len = nl + (order - 1) * nk + 1;
    let mut head: Vec<u32> = Vec::with_capacity(nj + 1);
    let mut acc = e as u32;
    head.push(acc);
    for &row in &rows {
        acc = mt[row + acc as usize];
        head.push(acc);
    }
    let s_row = acc as usize * order;
    let blocks = len.div_ceil(nj);
    let mut powers: Vec<u32> = Vec::with_capacity(blocks);
    let mut sp = e as u32;
    for _ in 0..blocks {
        powers.push(sp);
        sp = mt[s_row + sp as usize];
    }
    let mut prefix: Vec<u32> = vec![0; blocks * nj];
    for (chunk, &p) in prefix.chunks_exact_mut(nj).zip(&powers) {
        let right = &mt_right[p as usize * order..][..order];
        for (slot, &h) in chunk.iter_mut().zip(&head[..nj]) {
            *slot = right[h as usize];
        }
    }

    let inverse_rows: Vec<usize> = (0..order).map(|a| g.inverse(a) * order).collect();
    let scan = Scan {
        prefix: &prefix,
        mt_right: &mt_right,
        inverse_rows: &inverse_rows,
        order,
        nl,
        nk,
        e,
    };
    let values = if order <= 64 {
        scan.meet_small()
    } else {
        scan.meet_wide()
    };
    Ok(EssentialValueSet { values })
}

/// Cylinder sweep over precomputed prefix products.
struct Scan<'a> {
    prefix: &'a [u32],
    mt_right: &'a [u32],
    inverse_rows: &'a [usize],
    order: usize,
    nl: usize,
    nk: usize,
    e: usize,
}

impl Scan<'_> {
    /// Feeds `c(ℓn_k, x)` for `x` in cylinder `u` and `1 ≤ ℓ < |K|` to `hit`;
    /// `ℓ = 0` only contributes the identity, which callers add themselves.
    #[inline(always)]
    fn cylinder(&self, u: usize, mut hit: impl FnMut(usize)) {
        for x in (u..self.nl).step_by(self.nk) {
            let back = &self.mt_right[self.inverse_rows[self.prefix[x] as usize]..][..self.order];
            let mut i = x + self.nk;
            for _ in 1..self.order {
                hit(back[self.prefix[i] as usize] as usize);
                i += self.nk;
            }
        }
    }

    fn meet_small(&self) -> Vec<usize> {
        let id = 1u64 << self.e;
        let mut meet = u64::MAX;
        for u in 0..self.nk {
            let mut seen = id;
            self.cylinder(u, |v| seen |= 1 << v);
            meet &= seen;
            if meet == id {
                break;
            }
        }
        (0..self.order).filter(|&v| meet >> v & 1 == 1).collect()
    }

    fn meet_wide(&self) -> Vec<usize> {
        let mut meet = vec![true; self.order];
        let mut seen = vec![false; self.order];
        for u in 0..self.nk {
            seen.fill(false);
            seen[self.e] = true;
            self.cylinder(u, |v| seen[v] = true);
            for (m, s) in meet.iter_mut().zip(&seen) {
                *m &= s;
            }
        }
        (0..self.order).filter(|&v| meet[v]).collect()
    }
}

/// `⟨(n_k/nⱼ)·S⟩`.
pub fn essential_values_closed_form(
    c: &LevelCocycle,
    chain: &DivisibilityChain,
    k: usize,
) -> Result<EssentialValueSet, CocycleError> {
    require_abelian(c)?;
    if k < c.level() {
        return Err(CocycleError::LevelMismatch {
            cocycle_level: c.level(),
            model_level: k,
        });
    }
    chain.nth_modulus_u64(k).ok_or(ChainError::ModulusOverflow(k))?;
    Ok(EssentialValueSet {
        values: c.target().generated_subgroup(&[obstruction_at(c, chain, k)]),
    })
}

/// `E(c) = ⋂ₖ ⟨(n_k/nⱼ)·S⟩`.
///
/// The subgroups decrease with `k`; the intersection is reached at the
/// level where every prime of `ord(S)` has taken all the valuation the chain
/// can give it.
pub fn essential_values_limit(c: &LevelCocycle, chain: &DivisibilityChain) -> Result<EssentialValueSet, CocycleError> {
    require_abelian(c)?;
    let k = stable_level(c, chain);
    Ok(EssentialValueSet {
        values: c.target().generated_subgroup(&[obstruction_at(c, chain, k)]),
    })
}
