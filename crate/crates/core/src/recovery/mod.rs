//! Recovery synthesis from the correction conditions, and the equivalent
//! ways of verifying that a recovery corrects a channel on a code.

mod operator;
mod synthesis;
mod verify;

pub use operator::{composite, RecoveryOperator};
pub use synthesis::{
    factor_element, synthesize_candidate, synthesize_recovery, syndrome_decomposition,
    syndrome_decomposition_ungated, RecoveryCandidate, SyndromeDecomposition, SynthesisOptions,
};
pub use verify::{
    entangled_state_test, entropy_test, verify_recovery, EntangledStateReport, EntropyReport, VerificationReport,
    VerificationRoute,
};
