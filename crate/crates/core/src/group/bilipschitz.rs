//! Window classifier for injective maps `ℤ → ℤ` of the form `±x + const + r(x)`.
//!
//! This only certifies behaviour on the sampled window.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BiLipschitzReport {
    pub sign: Orientation,
    pub constant: i64,
    /// `max |f(x) − sign·x − constant|` over the window.
    pub defect_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiLipschitzError {
    #[error("empty sample window")]
    EmptyWindow,
    #[error("samples are not injective: f({x1}) = f({x2})")]
    NotInjective { x1: i64, x2: i64 },
    #[error("ambiguous orientation: deviation range {range} for both signs")]
    AmbiguousOrientation { range: u64 },
}

/// Classifies sampled pairs `(x, f(x))`.
///
/// The sign minimises the range of `f(x) − sign·x`; the constant is the
/// (lower) median of that difference. If both signs leave a range above
/// `threshold` and the two ranges agree, the orientation is reported as
/// ambiguous rather than guessed.
pub fn bilipschitz_classify(samples: &[(i64, i64)], threshold: u64) -> Result<BiLipschitzReport, BiLipschitzError> {
    if samples.is_empty() {
        return Err(BiLipschitzError::EmptyWindow);
    }
    let mut by_value: Vec<(i64, i64)> = samples.iter().map(|&(x, y)| (y, x)).collect();
    by_value.sort_unstable();
    if let Some(w) = by_value.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(BiLipschitzError::NotInjective { x1: w[0].1, x2: w[1].1 });
    }

    let diffs = |sign: i64| -> Vec<i64> { samples.iter().map(|&(x, y)| y - sign * x).collect() };
    let range = |d: &[i64]| -> u64 {
        let lo = *d.iter().min().unwrap();
        let hi = *d.iter().max().unwrap();
        hi.abs_diff(lo)
    };
    let plus = diffs(1);
    let minus = diffs(-1);
    let (rp, rm) = (range(&plus), range(&minus));
    if rp > threshold && rm > threshold && rp == rm {
        return Err(BiLipschitzError::AmbiguousOrientation { range: rp });
    }
    let (sign, mut d) = if rp <= rm {
        (Orientation::Plus, plus)
    } else {
        (Orientation::Minus, minus)
    };
    d.sort_unstable();
    let constant = d[(d.len() - 1) / 2];
    let defect_bound = d.iter().map(|v| v.abs_diff(constant)).max().unwrap();
    Ok(BiLipschitzReport {
        sign,
        constant,
        defect_bound,
    })
}

/// Samples `f` on `[−n, n]` and classifies, with threshold `n`.
pub fn bilipschitz_classify_fn(n: i64, f: impl Fn(i64) -> i64) -> Result<BiLipschitzReport, BiLipschitzError> {
    let samples: Vec<(i64, i64)> = (-n..=n).map(|x| (x, f(x))).collect();
    bilipschitz_classify(&samples, n.unsigned_abs())
}
