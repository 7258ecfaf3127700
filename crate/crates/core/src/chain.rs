//! Divisibility chains `n₁ | n₂ | ⋯` and finite truncations of the odometer
//! `ℤ ↷ lim← ℤ/nᵢℤ`.
//!
//! A chain is stored as its multipliers `mᵢ = nᵢ₊₁ / nᵢ`: a finite prefix
//! followed by a tail repeated forever. Periodicity is what makes questions
//! about `supᵢ` decidable.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain base must be at least 1")]
    BaseZero,
    #[error("chain multiplier {0} is below 2")]
    MultiplierTooSmall(u64),
    #[error("chain tail must be nonempty")]
    EmptyTail,
    #[error("levels are numbered from 1")]
    LevelZero,
    #[error("level {level} exceeds model level {model_level}")]
    LevelTooHigh { level: usize, model_level: usize },
    #[error("modulus at level {0} does not fit in 64 bits")]
    ModulusOverflow(usize),
    #[error("state {state} outside 0..{modulus}")]
    StateOutOfRange { state: String, modulus: String },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawChain", into = "RawChain")]
pub struct DivisibilityChain {
    base: u64,
    prefix: Vec<u64>,
    tail: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    base: u64,
    #[serde(default)]
    prefix: Vec<u64>,
    tail: Vec<u64>,
}

impl TryFrom<RawChain> for DivisibilityChain {
    type Error = ChainError;
    fn try_from(r: RawChain) -> Result<Self, ChainError> {
        DivisibilityChain::new(r.base, r.prefix, r.tail)
    }
}

impl From<DivisibilityChain> for RawChain {
    fn from(c: DivisibilityChain) -> Self {
        RawChain {
            base: c.base,
            prefix: c.prefix,
            tail: c.tail,
        }
    }
}

impl fmt::Display for DivisibilityChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base {} prefix {:?} tail {:?}", self.base, self.prefix, self.tail)
    }
}

impl DivisibilityChain {
    pub fn new(base: u64, prefix: Vec<u64>, tail: Vec<u64>) -> Result<Self, ChainError> {
        if base == 0 {
            return Err(ChainError::BaseZero);
        }
        if tail.is_empty() {
            return Err(ChainError::EmptyTail);
        }
        if let Some(&m) = prefix.iter().chain(&tail).find(|&&m| m < 2) {
            return Err(ChainError::MultiplierTooSmall(m));
        }
        Ok(DivisibilityChain { base, prefix, tail })
    }

    /// `nᵢ = bⁱ`.
    pub fn geometric(b: u64) -> Self {
        Self::new(b, vec![], vec![b]).expect("geometric chain needs b >= 2")
    }

    /// `nᵢ = 2ⁱ`.
    pub fn dyadic() -> Self {
        Self::geometric(2)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    /// `mᵢ = nᵢ₊₁ / nᵢ` for `i ≥ 1`.
    pub fn multiplier(&self, i: usize) -> u64 {
        assert!(i >= 1, "levels are numbered from 1");
        let p = self.prefix.len();
        if i <= p {
            self.prefix[i - 1]
        } else {
            self.tail[(i - 1 - p) % self.tail.len()]
        }
    }

    /// `nᵢ`, exactly.
    pub fn nth_modulus(&self, i: usize) -> BigUint {
        assert!(i >= 1, "levels are numbered from 1");
        (1..i).fold(BigUint::from(self.base), |acc, l| acc * self.multiplier(l))
    }

    /// `nᵢ` if it fits in a `u64`.
    pub fn nth_modulus_u64(&self, i: usize) -> Option<u64> {
        assert!(i >= 1, "levels are numbered from 1");
        (1..i).try_fold(self.base, |acc, l| acc.checked_mul(self.multiplier(l)))
    }

    /// `n_k / n_j` for `j ≤ k`.
    pub fn ratio(&self, j: usize, k: usize) -> BigUint {
        assert!(1 <= j && j <= k, "ratio needs 1 <= j <= k");
        (j..k).fold(BigUint::one(), |acc, l| acc * self.multiplier(l))
    }

    /// `ord(p, nᵢ)`, the exponent of `p` in `nᵢ`.
    pub fn ord_p(&self, p: u64, i: usize) -> u64 {
        assert!(i >= 1, "levels are numbered from 1");
        valuation(self.base, p) + (1..i).map(|l| valuation(self.multiplier(l), p)).sum::<u64>()
    }

    /// `v_p(n_k / n_j)`.
    pub fn ratio_ord_p(&self, p: u64, j: usize, k: usize) -> u64 {
        (j..k).map(|l| valuation(self.multiplier(l), p)).sum()
    }

    /// Whether `supᵢ ord(p, nᵢ) = ∞`, which happens exactly when `p`
    /// divides a tail multiplier.
    pub fn sup_ord_infinite(&self, p: u64) -> bool {
        self.tail.iter().any(|&m| valuation(m, p) > 0)
    }

    /// First level at which the multipliers become periodic.
    pub fn tail_start(&self) -> usize {
        self.prefix.len() + 1
    }
}

/// `v_p(n)`; zero when `p < 2`.
pub fn valuation(mut n: u64, p: u64) -> u64 {
    if p < 2 || n == 0 {
        return 0;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The level-`L` truncation: `ℤ/n_L` with the generator acting by `x ↦ x + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OdometerModel {
    chain: DivisibilityChain,
    level: usize,
    modulus: u64,
    level_moduli: Vec<u64>,
}

impl OdometerModel {
    pub fn new(chain: DivisibilityChain, level: usize) -> Result<Self, ChainError> {
        if level == 0 {
            return Err(ChainError::LevelZero);
        }
        let level_moduli = (1..=level)
            .map(|i| chain.nth_modulus_u64(i).ok_or(ChainError::ModulusOverflow(i)))
            .collect::<Result<Vec<_>, _>>()?;
        // states are also used as i64 offsets
        let modulus = *level_moduli.last().unwrap();
        if modulus > i64::MAX as u64 / 4 {
            return Err(ChainError::ModulusOverflow(level));
        }
        Ok(OdometerModel {
            chain,
            level,
            modulus,
            level_moduli,
        })
    }

    pub fn chain(&self) -> &DivisibilityChain {
        &self.chain
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `nᵢ` for `1 ≤ i ≤ L`.
    pub fn level_modulus(&self, i: usize) -> Result<u64, ChainError> {
        self.check_level(i)?;
        Ok(self.level_moduli[i - 1])
    }

    pub fn states(&self) -> std::ops::Range<u64> {
        0..self.modulus
    }

    /// `(x + n) mod n_L`.
    pub fn step(&self, x: u64, n: i64) -> u64 {
        debug_assert!(x < self.modulus);
        (x as i128 + n as i128).rem_euclid(self.modulus as i128) as u64
    }

    /// `x mod nᵢ`.
    pub fn project(&self, x: u64, i: usize) -> Result<u64, ChainError> {
        if x >= self.modulus {
            return Err(ChainError::StateOutOfRange {
                state: x.to_string(),
                modulus: self.modulus.to_string(),
            });
        }
        Ok(x % self.level_modulus(i)?)
    }

    fn check_level(&self, i: usize) -> Result<(), ChainError> {
        if i == 0 {
            return Err(ChainError::LevelZero);
        }
        if i > self.level {
            return Err(ChainError::LevelTooHigh {
                level: i,
                model_level: self.level,
            });
        }
        Ok(())
    }
}

/// Exact stepping at any level, for moduli beyond 64 bits.
pub fn step_exact(chain: &DivisibilityChain, level: usize, x: &BigUint, n: &BigInt) -> BigUint {
    let m = BigInt::from(chain.nth_modulus(level));
    let y = (BigInt::from(x.clone()) + n).mod_floor(&m);
    y.to_biguint().expect("mod_floor of a positive modulus is nonnegative")
}

/// Exact projection `x mod nᵢ`.
pub fn project_exact(chain: &DivisibilityChain, x: &BigUint, i: usize) -> BigUint {
    x % chain.nth_modulus(i)
}

/// Model states travel through JSON as decimal strings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateRepr(pub BigUint);

impl StateRepr {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for StateRepr {
    fn from(x: u64) -> Self {
        StateRepr(BigUint::from(x))
    }
}

impl Serialize for StateRepr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for StateRepr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigUint>().map(StateRepr).map_err(serde::de::Error::custom)
    }
}
