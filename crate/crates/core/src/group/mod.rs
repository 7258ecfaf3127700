//! Group primitives: the infinite dihedral group, finite groups given by a
//! multiplication table, subgroup classification in D∞ and the windowed
//! bi-Lipschitz classifier for maps of the integers.

mod bilipschitz;
mod dihedral;
mod finite;
mod subgroup;

pub use bilipschitz::{
    bilipschitz_classify, bilipschitz_classify_fn, BiLipschitzError, BiLipschitzReport, Orientation,
};
pub use dihedral::{
    dmetric, dmul, pairing_pi, pairing_pi_inv, phi_auto, word_length, DihedralAutomorphism, DihedralElement,
    InfiniteDihedral,
};
pub use finite::{FiniteGroupTable, GroupError, GroupRef};
pub use subgroup::{classify_subgroup, SubgroupClass};

use std::fmt::Debug;

/// A group whose elements are small copyable values.
///
/// Both the finite table groups and D∞ implement this so that cocycle
/// identities can be checked by one generic routine.
pub trait Group {
    type Elem: Copy + Eq + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Self::Elem;

    /// `a^n` for any integer `n`, by repeated squaring.
    fn pow(&self, a: Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inv(a) } else { a };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(acc, sq);
            }
            sq = self.op(sq, sq);
            e >>= 1;
        }
        acc
    }
}
