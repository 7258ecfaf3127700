//! Rigidity of minimal D∞ actions on finite odometer models.
//!
//! A continuous orbit equivalence witness between two models is turned into an
//! explicit conjugacy up to an automorphism of D∞, or refused with the first
//! identity that fails.

mod extract;
mod freeness;
mod induced;
mod model;
mod witness;


use thiserror::Error;

use crate::chain::ChainError;
use crate::group::DihedralElement;

pub use extract::{
    claim4_constant, default_window, defect_cocycle, gh_solve, normalize_defect, rigidity_extract,
    rigidity_extract_with_window, split_bound, split_x_pm, ConjugacyResult, ExtractionTrace, NormalizedDefect,
    Partition, Unsolvable,
};
pub use freeness::{topological_freeness_sweep, FreenessReport, ReflectionFixed, Stabilizer};
pub use induced::{induced_coe_restrict, induced_conjugacy_lift, InducedCocycle, InducedLift};
pub use model::{
    build_case1_model, build_case1_model_with_offset, build_case2_model, build_case2_model_with_step, delta, Coset,
    DinftyModel, ModelConfig, ModelKind,
};
pub use witness::{witness_from_conjugacy, CoeWitness, PowerTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("model modulus {modulus} is too small for a faithful D∞ action")]
    ModelTooSmall { modulus: u64 },
    #[error("step {step} is not a unit modulo {modulus}")]
    StepNotUnit { step: i64, modulus: u64 },
    #[error("models differ in kind or base")]
    ModelMismatch,
    #[error("table length differs from the {expected} states of the model")]
    WrongSize { expected: usize },
    #[error("map is not a bijection (state {state})")]
    NotBijective { state: u64 },
    #[error("h({generator}x) ≠ c({generator}, x)·h(x) at state {state}")]
    NotEquivariant { generator: String, state: u64 },
    #[error("{relation} fails at state {state}")]
    RelationViolated { relation: String, state: u64 },
    #[error("g ↦ c(g, x) is not injective at state {state}")]
    NotInjective { state: u64 },
    #[error("window {window} is below the required {required}")]
    WindowTooSmall { window: i64, required: i64 },
    #[error("state {state} lies in neither or both of X₊ and X₋")]
    UnclassifiablePoint { state: u64 },
    #[error("normalized defect at n = {n}, state {state} is {value}, outside ⟨s⟩")]
    DefectNotInExpectedCoset { n: i64, state: u64, value: DihedralElement },
    #[error("transfer equation has cycle sum {cycle_sum}")]
    Unsolvable { cycle_sum: i64 },
    #[error("L′(x)·c(t, x)⁻¹·L′(tx)⁻¹ = {value} at state {state} is not a reflection")]
    NonReflectionCoset { state: u64, value: DihedralElement },
    #[error("reflection constant varies: {values:?}")]
    NotConstant { values: Vec<(u64, i64)> },
    #[error("identity `{identity}` fails at state {state}")]
    VerificationFailed { identity: String, state: u64 },
    #[error("witness is not the identity map between induced models")]
    NotIdentityWitness,
}

impl RigidityError {
    /// The state a counterexample refers to, when there is one.
    pub fn state(&self) -> Option<u64> {
        use RigidityError::*;
        match self {
            NotBijective { state }
            | NotEquivariant { state, .. }
            | RelationViolated { state, .. }
            | NotInjective { state }
            | UnclassifiablePoint { state }
            | DefectNotInExpectedCoset { state, .. }
            | NonReflectionCoset { state, .. }
            | VerificationFailed { state, .. } => Some(*state),
            _ => None,
        }
    }
}

impl From<Unsolvable> for RigidityError {
    fn from(u: Unsolvable) -> Self {
        RigidityError::Unsolvable { cycle_sum: u.cycle_sum }
    }
}
