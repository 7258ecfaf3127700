//! Classification of finitely generated subgroups of D∞.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::dihedral::DihedralElement;

/// Canonical form of a subgroup of D∞.
///
/// `PureTranslation(0)` is the trivial subgroup.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum SubgroupClass {
    /// `⟨sᵏ, sⁱt⟩` with `k ≥ 1` and `0 ≤ i < k`.
    LatticeWithReflection(u64, i64),
    /// `⟨sⁱt⟩`, a group of order two.
    PureReflection(i64),
    /// `⟨sᵏ⟩` with `k ≥ 0`.
    PureTranslation(u64),
}

impl SubgroupClass {
    pub fn contains(self, g: DihedralElement) -> bool {
        match self {
            SubgroupClass::PureTranslation(0) => g.is_identity(),
            SubgroupClass::PureTranslation(k) => !g.reflection && g.exponent % k as i64 == 0,
            SubgroupClass::PureReflection(i) => g.is_identity() || (g.reflection && g.exponent == i),
            SubgroupClass::LatticeWithReflection(k, i) => {
                let k = k as i64;
                if g.reflection {
                    (g.exponent - i).rem_euclid(k) == 0
                } else {
                    g.exponent.rem_euclid(k) == 0
                }
            }
        }
    }
}

/// Canonical class of `⟨gens⟩`.
///
/// With translation exponents `aⱼ` and reflection exponents `bᵢ`, the
/// translation part is generated by `gcd(aⱼ, bᵢ − b₀)`; any one reflection
/// then recovers the whole group.
pub fn classify_subgroup(gens: &[DihedralElement]) -> SubgroupClass {
    let mut k: u64 = 0;
    let mut first_reflection: Option<i64> = None;
    for g in gens {
        if g.reflection {
            match first_reflection {
                None => first_reflection = Some(g.exponent),
                Some(b0) => k = k.gcd(&(g.exponent - b0).unsigned_abs()),
            }
        } else {
            k = k.gcd(&g.exponent.unsigned_abs());
        }
    }
    match (first_reflection, k) {
        (None, k) => SubgroupClass::PureTranslation(k),
        (Some(b0), 0) => SubgroupClass::PureReflection(b0),
        (Some(b0), k) => SubgroupClass::LatticeWithReflection(k, b0.rem_euclid(k as i64)),
    }
}
