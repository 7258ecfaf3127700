//! Exact arithmetic in D∞ = ⟨s, t | t², tsts⟩.
//!
//! Every element has the unique normal form `sᵏtʳ` with `k ∈ ℤ` and
//! `r ∈ {0, 1}`. Multiplication is closed form; nothing is reduced modulo
//! anything.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::Group;

/// Normal form `sᵏtʳ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DihedralElement {
    pub exponent: i64,
    pub reflection: bool,
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement {
        exponent: 0,
        reflection: false,
    };
    pub const S: DihedralElement = DihedralElement {
        exponent: 1,
        reflection: false,
    };
    pub const T: DihedralElement = DihedralElement {
        exponent: 0,
        reflection: true,
    };

    pub const fn new(exponent: i64, reflection: bool) -> Self {
        DihedralElement { exponent, reflection }
    }

    /// `sⁿ`
    pub const fn translation(n: i64) -> Self {
        DihedralElement {
            exponent: n,
            reflection: false,
        }
    }

    /// `sⁿt`
    pub const fn reflection(n: i64) -> Self {
        DihedralElement {
            exponent: n,
            reflection: true,
        }
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    pub fn inverse(self) -> Self {
        if self.reflection {
            self
        } else {
            Self::translation(-self.exponent)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Self) -> Self {
        dmul(self, rhs)
    }

    /// Conjugation `self · g · self⁻¹`.
    pub fn conjugate(self, g: Self) -> Self {
        dmul(dmul(self, g), self.inverse())
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exponent, self.reflection) {
            (0, false) => write!(f, "e"),
            (0, true) => write!(f, "t"),
            (k, false) => write!(f, "s^{k}"),
            (k, true) => write!(f, "s^{k}t"),
        }
    }
}

impl Serialize for DihedralElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DihedralElement", 2)?;
        st.serialize_field("k", &self.exponent)?;
        st.serialize_field("t", &u8::from(self.reflection))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for DihedralElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        // Accepts both `{"k": .., "t": ..}` and the compact `[k, t]` pair.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Map { k: i64, t: u8 },
            Pair(i64, u8),
        }
        let (k, t) = match Repr::deserialize(deserializer)? {
            Repr::Map { k, t } => (k, t),
            Repr::Pair(k, t) => (k, t),
        };
        match t {
            0 => Ok(DihedralElement::translation(k)),
            1 => Ok(DihedralElement::reflection(k)),
            other => Err(de::Error::custom(format!("reflection bit must be 0 or 1, got {other}"))),
        }
    }
}

/// Product in D∞: `sᵃtʳ · sᵇtᵘ = s^{a + (−1)ʳ b} t^{r ⊕ u}`.
pub fn dmul(a: DihedralElement, b: DihedralElement) -> DihedralElement {
    let exponent = if a.reflection {
        a.exponent - b.exponent
    } else {
        a.exponent + b.exponent
    };
    DihedralElement {
        exponent,
        reflection: a.reflection ^ b.reflection,
    }
}

/// Word length for the generating set `{s, s⁻¹, t}`: `|sⁿ| = |n|`, `|sⁿt| = |n| + 1`.
pub fn word_length(g: DihedralElement) -> u64 {
    g.exponent.unsigned_abs() + u64::from(g.reflection)
}

/// Right-invariant word metric `d(g₁, g₂) = |g₂ g₁⁻¹|`.
pub fn dmetric(g1: DihedralElement, g2: DihedralElement) -> u64 {
    word_length(dmul(g2, g1.inverse()))
}

/// The automorphism `φᵢ`: `s ↦ s`, `t ↦ sⁱt`.
pub fn phi_auto(i: i64, g: DihedralElement) -> DihedralElement {
    DihedralAutomorphism::phi(i).apply(g)
}

/// Bijection ℤ → D∞ with `2n ↦ sⁿ` and `2n+1 ↦ tsⁿ`.
pub fn pairing_pi(n: i64) -> DihedralElement {
    let half = n.div_euclid(2);
    if n.rem_euclid(2) == 0 {
        DihedralElement::translation(half)
    } else {
        // t sⁿ = s⁻ⁿ t
        DihedralElement::reflection(-half)
    }
}

/// Inverse of [`pairing_pi`].
pub fn pairing_pi_inv(g: DihedralElement) -> i64 {
    if g.reflection {
        2 * (-g.exponent) + 1
    } else {
        2 * g.exponent
    }
}

/// An automorphism of D∞ in the normal form `s ↦ s^{±1}`, `t ↦ sᵏt`.
///
/// Every automorphism has this form; the orientation-preserving ones are
/// exactly the `φₖ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DihedralAutomorphism {
    pub shift: i64,
    pub reverses: bool,
}

impl DihedralAutomorphism {
    pub const IDENTITY: DihedralAutomorphism = DihedralAutomorphism {
        shift: 0,
        reverses: false,
    };

    pub const fn phi(shift: i64) -> Self {
        DihedralAutomorphism { shift, reverses: false }
    }

    /// `s ↦ s⁻¹`, `t ↦ sᵏt`.
    pub const fn reversing(shift: i64) -> Self {
        DihedralAutomorphism { shift, reverses: true }
    }

    pub fn apply(self, g: DihedralElement) -> DihedralElement {
        let k = if self.reverses { -g.exponent } else { g.exponent };
        if g.reflection {
            DihedralElement::reflection(k + self.shift)
        } else {
            DihedralElement::translation(k)
        }
    }

    pub fn compose(self, inner: Self) -> Self {
        let s_img = self.apply(inner.apply(DihedralElement::S));
        let t_img = self.apply(inner.apply(DihedralElement::T));
        DihedralAutomorphism {
            shift: t_img.exponent,
            reverses: s_img.exponent == -1,
        }
    }

    pub fn inverse(self) -> Self {
        // φ(t) = sᵏt; for the reversing case φ∘φ(t) = s^{-k+k}t = t.
        if self.reverses {
            self
        } else {
            Self::phi(-self.shift)
        }
    }
}

/// Marker type implementing [`Group`] for D∞.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InfiniteDihedral;

impl Group for InfiniteDihedral {
    type Elem = DihedralElement;

    fn identity(&self) -> DihedralElement {
        DihedralElement::IDENTITY
    }

    fn op(&self, a: DihedralElement, b: DihedralElement) -> DihedralElement {
        dmul(a, b)
    }

    fn inv(&self, a: DihedralElement) -> DihedralElement {
        a.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E: DihedralElement = DihedralElement::IDENTITY;

    fn s(k: i64) -> DihedralElement {
        DihedralElement::translation(k)
    }
    fn st(k: i64) -> DihedralElement {
        DihedralElement::reflection(k)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(dmul(st(1), st(1)), E);
        assert_eq!(dmul(s(2), s(3)), s(5));
        assert_eq!(dmul(DihedralElement::T, s(3)), st(-3));
    }

    #[test]
    fn defining_relations() {
        let t = DihedralElement::T;
        let sg = DihedralElement::S;
        assert_eq!(dmul(t, t), E);
        assert_eq!(dmul(dmul(t, sg), dmul(t, sg)), E);
    }

    #[test]
    fn word_length_examples() {
        assert_eq!(word_length(s(3)), 3);
        assert_eq!(word_length(st(-2)), 3);
        assert_eq!(word_length(E), 0);
    }

    #[test]
    fn metric_examples() {
        assert_eq!(dmetric(s(2), s(5)), 3);
        assert_eq!(dmetric(DihedralElement::T, DihedralElement::T), 0);
        let ts = dmul(DihedralElement::T, DihedralElement::S);
        assert_eq!(dmetric(DihedralElement::S, ts), 1);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_auto(3, DihedralElement::T), st(3));
        assert_eq!(phi_auto(3, DihedralElement::S), DihedralElement::S);
        for k in -5..=5 {
            for r in [false, true] {
                let g = DihedralElement::new(k, r);
                assert_eq!(phi_auto(0, g), g);
            }
        }
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing_pi(4), s(2));
        assert_eq!(pairing_pi(5), dmul(DihedralElement::T, s(2)));
        assert_eq!(pairing_pi(0), E);
        for n in -300..=300 {
            assert_eq!(pairing_pi_inv(pairing_pi(n)), n);
        }
    }

    #[test]
    fn associativity_on_window() {
        // |k| ≤ 100 in steps keeps the cube manageable while covering signs and both cosets.
        let elems: Vec<_> = (-100..=100).step_by(7).flat_map(|k| [s(k), st(k)]).collect();
        for &a in &elems {
            for &b in &elems {
                let ab = dmul(a, b);
                for &c in &elems {
                    assert_eq!(dmul(ab, c), dmul(a, dmul(b, c)));
                }
            }
        }
    }

    #[test]
    fn metric_right_invariance_exhaustive() {
        let elems: Vec<_> = (-50..=50).flat_map(|k| [s(k), st(k)]).collect();
        let shifts: Vec<_> = (-50..=50).step_by(5).flat_map(|k| [s(k), st(k)]).collect();
        for &a in &elems {
            for &b in elems.iter().step_by(3) {
                let d = dmetric(a, b);
                for &h in &shifts {
                    assert_eq!(dmetric(dmul(a, h), dmul(b, h)), d);
                }
            }
        }
    }

    #[test]
    fn pairing_lipschitz_bounds() {
        for n in -200i64..=200 {
            for m in -200i64..=200 {
                let gap = (n - m).unsigned_abs();
                let d = dmetric(pairing_pi(n), pairing_pi(m));
                assert!(gap.div_ceil(2) <= d && d <= 2 * gap, "n={n} m={m} d={d}");
            }
        }
    }

    #[test]
    fn serde_forms() {
        let g = st(-4);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"k":-4,"t":1}"#);
        let back: DihedralElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let pair: DihedralElement = serde_json::from_str("[7, 0]").unwrap();
        assert_eq!(pair, s(7));
        assert!(serde_json::from_str::<DihedralElement>(r#"{"k":1,"t":2}"#).is_err());
    }

    #[test]
    fn automorphism_composition() {
        let rev = DihedralAutomorphism::reversing(3);
        assert_eq!(rev.compose(rev.inverse()), DihedralAutomorphism::IDENTITY);
        let p = DihedralAutomorphism::phi(5);
        assert_eq!(p.compose(p.inverse()), DihedralAutomorphism::IDENTITY);
    }

    fn element() -> impl Strategy<Value = DihedralElement> {
        (-1000i64..1000, any::<bool>()).prop_map(|(k, r)| DihedralElement::new(k, r))
    }

    proptest! {
        #[test]
        fn phi_is_homomorphism(i in -10i64..=10, a in element(), b in element()) {
            prop_assert_eq!(phi_auto(i, dmul(a, b)), dmul(phi_auto(i, a), phi_auto(i, b)));
        }

        #[test]
        fn automorphisms_are_homomorphisms(k in -20i64..20, rev in any::<bool>(), a in element(), b in element()) {
            let aut = DihedralAutomorphism { shift: k, reverses: rev };
            prop_assert_eq!(aut.apply(dmul(a, b)), dmul(aut.apply(a), aut.apply(b)));
            prop_assert_eq!(aut.inverse().apply(aut.apply(a)), a);
        }

        #[test]
        fn inverse_is_two_sided(a in element()) {
            prop_assert_eq!(dmul(a, a.inverse()), DihedralElement::IDENTITY);
            prop_assert_eq!(dmul(a.inverse(), a), DihedralElement::IDENTITY);
        }

        #[test]
        fn group_pow_matches_repeated_product(a in element(), n in -30i64..30) {
            let g = InfiniteDihedral;
            let mut acc = DihedralElement::IDENTITY;
            let step = if n < 0 { a.inverse() } else { a };
            for _ in 0..n.unsigned_abs() { acc = dmul(acc, step); }
            prop_assert_eq!(g.pow(a, n), acc);
        }
    }
}
