//! Finite groups presented by a full multiplication table.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Group;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("no element of order {p}: {p} does not divide {order}")]
    NoSuchElement { p: u64, order: usize },
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
}

/// A finite group on the indices `0..order`.
///
/// The table is validated on construction (closure, identity, inverses,
/// associativity) so every instance is a genuine group.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct FiniteGroupTable {
    order: usize,
    identity: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<RawTable> for FiniteGroupTable {
    type Error = GroupError;

    fn try_from(raw: RawTable) -> Result<Self, GroupError> {
        if raw.table.len() != raw.order {
            return Err(GroupError::NotAGroup(format!(
                "declared order {} but table has {} rows",
                raw.order,
                raw.table.len()
            )));
        }
        FiniteGroupTable::new(raw.identity, raw.table)
    }
}

impl From<FiniteGroupTable> for RawTable {
    fn from(g: FiniteGroupTable) -> Self {
        let table = g.table.chunks(g.order).map(<[usize]>::to_vec).collect();
        RawTable {
            order: g.order,
            identity: g.identity,
            table,
        }
    }
}

impl fmt::Debug for FiniteGroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroupTable(order={})", self.order)
    }
}

impl FiniteGroupTable {
    /// Builds a group from rows of the multiplication table, `rows[a][b] = a·b`.
    pub fn new(identity: usize, rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        if identity >= n {
            return Err(GroupError::NotAGroup(format!("identity index {identity} out of range")));
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::NotAGroup(format!("entry {bad} in row {a} out of range")));
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            if at(identity, a) != a || at(a, identity) != a {
                return Err(GroupError::NotAGroup(format!("identity fails on element {a}")));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        #[allow(clippy::needless_range_loop)]
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == identity) {
                Some(b) if at(b, a) == identity => inverses[a] = b,
                _ => return Err(GroupError::NotAGroup(format!("element {a} has no two-sided inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            order: n,
            identity,
            table,
            inverses,
        })
    }

    /// ℤ/n with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(0, rows).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Symmetric group on `n` letters. Elements are permutations in
    /// lexicographic order (index 0 is the identity) and `a·b = a∘b`.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=6).contains(&n), "symmetric group supported for 1 <= n <= 6");
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let rows = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let composed: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                        index(&composed)
                    })
                    .collect()
            })
            .collect();
        Self::new(0, rows).expect("symmetric table is a group")
    }

    /// Dihedral group of order `2m`; index `k + m·r` stands for `ρᵏσʳ`.
    pub fn dihedral(m: usize) -> Self {
        assert!(m >= 1);
        let n = 2 * m;
        let rows = (0..n)
            .map(|a| {
                let (ka, ra) = (a % m, a / m);
                (0..n)
                    .map(|b| {
                        let (kb, rb) = (b % m, b / m);
                        let k = if ra == 0 { (ka + kb) % m } else { (ka + m - kb) % m };
                        k + m * (ra ^ rb)
                    })
                    .collect()
            })
            .collect();
        Self::new(0, rows).expect("dihedral table is a group")
    }

    /// Resolves names such as `Z/3`, `S3`, `S_3`, `D4` and `trivial`.
    ///
    /// `Dm` is the dihedral group of order `2m`.
    pub fn named(name: &str) -> Result<Self, GroupError> {
        let name = name.trim();
        let unknown = || GroupError::UnknownGroup(name.to_string());
        if name.eq_ignore_ascii_case("trivial") {
            return Ok(Self::trivial());
        }
        let parse = |s: &str| s.trim_start_matches('_').parse::<usize>().map_err(|_| unknown());
        if let Some(rest) = name.strip_prefix("Z/").or_else(|| name.strip_prefix("C")) {
            let n = parse(rest)?;
            return if n >= 1 { Ok(Self::cyclic(n)) } else { Err(unknown()) };
        }
        if let Some(rest) = name.strip_prefix('S') {
            let n = parse(rest)?;
            return if (1..=6).contains(&n) {
                Ok(Self::symmetric(n))
            } else {
                Err(unknown())
            };
        }
        if let Some(rest) = name.strip_prefix('D') {
            let m = parse(rest)?;
            return if m >= 1 { Ok(Self::dihedral(m)) } else { Err(unknown()) };
        }
        Err(unknown())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order).all(|b| self.commutes(a, b)))
    }

    /// Order of `a` as a group element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The center, by checking every pair.
    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.commutes(z, g)))
            .collect()
    }

    /// Smallest-index element of order exactly `p`.
    pub fn prime_order_element(&self, p: u64) -> Result<usize, GroupError> {
        let none = GroupError::NoSuchElement { p, order: self.order };
        if p < 2 || !(self.order as u64).is_multiple_of(p) {
            return Err(none);
        }
        self.elements().find(|&a| self.element_order(a) as u64 == p).ok_or(none)
    }

    /// The subgroup generated by `gens`, as a sorted list of indices.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
        self.elements().filter(|&a| seen[a]).collect()
    }

    /// Checks that `map` (indexed by element) is a bijective homomorphism of `self`.
    pub fn is_automorphism(&self, map: &[usize]) -> bool {
        if map.len() != self.order {
            return false;
        }
        let mut hit = vec![false; self.order];
        for &m in map {
            if m >= self.order || hit[m] {
                return false;
            }
            hit[m] = true;
        }
        self.elements()
            .all(|a| self.elements().all(|b| map[self.mul(a, b)] == self.mul(map[a], map[b])))
    }

    /// Every automorphism, each as an image table. Identity comes first.
    ///
    /// Groups of order at most 8 are handled by trying all bijections that
    /// fix the identity; larger groups by assigning images to a generating set.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = if self.order <= 8 {
            self.automorphisms_by_bijection()
        } else {
            self.automorphisms_by_generators()
        };
        out.sort();
        out
    }

    pub(crate) fn automorphisms_by_bijection(&self) -> Vec<Vec<usize>> {
        let others: Vec<usize> = self.elements().filter(|&a| a != self.identity).collect();
        let mut out = Vec::new();
        for perm in permutations(others.len()) {
            let mut map = vec![self.identity; self.order];
            for (i, &src) in others.iter().enumerate() {
                map[src] = others[perm[i]];
            }
            if self.is_automorphism(&map) {
                out.push(map);
            }
        }
        out
    }

    pub(crate) fn automorphisms_by_generators(&self) -> Vec<Vec<usize>> {
        let gens = self.greedy_generators();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        self.extend_images(&gens, &mut images, &mut out);
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in self.elements() {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    fn extend_images(&self, gens: &[usize], images: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if images.len() == gens.len() {
            if let Some(map) = self.homomorphism_from_images(gens, images) {
                if self.is_automorphism(&map) {
                    out.push(map);
                }
            }
            return;
        }
        let g = gens[images.len()];
        let want = self.element_order(g);
        for cand in self.elements() {
            if self.element_order(cand) == want {
                images.push(cand);
                self.extend_images(gens, images, out);
                images.pop();
            }
        }
    }

    /// Extends generator images along a spanning search; `None` if inconsistent.
    fn homomorphism_from_images(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = self.identity;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = self.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    frontier.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Distinct values of a table of indices, sorted.
    pub fn distinct(values: impl IntoIterator<Item = usize>) -> Vec<usize> {
        values.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
    }
}

impl Group for FiniteGroupTable {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn op(&self, a: usize, b: usize) -> usize {
        self.mul(a, b)
    }

    fn inv(&self, a: usize) -> usize {
        self.inverse(a)
    }
}

/// How configs refer to a finite group: by name or by explicit table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Table(FiniteGroupTable),
}

impl GroupRef {
    pub fn resolve(&self) -> Result<FiniteGroupTable, GroupError> {
        match self {
            GroupRef::Named(name) => FiniteGroupTable::named(name),
            GroupRef::Table(t) => Ok(t.clone()),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
