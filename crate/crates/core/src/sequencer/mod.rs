//! Deciding and constructing admissible sequences.
//!
//! [`decide`] is an exact depth-first search. [`construct`] builds a sequence
//! directly from the disjoint-block structure when at most three blocks are
//! pairwise disjoint (and for very large orders otherwise), falling back to
//! the search. Every sequence handed out has been re-checked with
//! [`crate::sequence::is_admissible`].

mod certificate;
mod construct;
mod extend;
mod interleave;
mod labels;
mod search;
mod template;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::GeneratorError;
use crate::sequence::{Segment, SequenceError};

pub use certificate::{verify_sts13_certificate, CertificateEntry, Sts13Certificate};
pub use construct::{construct, construct_with, ConstructOptions, Construction, Method};
pub use extend::extend;
pub use interleave::{interleave_large, INTERLEAVE_RETRIES};
pub use search::{
    decide, decide_with, enumerate_admissible, DecideOptions, Decision, Enumeration, Outcome,
    SearchCertificate,
};
pub use template::{pi_template_instantiate, Labeling, PI_TEMPLATE};

/// Default node budget for [`decide`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequencerError {
    #[error("system is not sequenceable (search exhausted after {nodes} nodes)")]
    NotSequenceableSystem { nodes: u64 },
    #[error("search budget exhausted after {nodes} nodes without a verdict")]
    BudgetExhausted { nodes: u64 },
    #[error("no labelling of the template is admissible; the system has more than three disjoint blocks or contradicts the order-12 construction")]
    NoAdmissibleLabeling,
    #[error("residual sequence is not admissible: segment {0:?} partitions into blocks")]
    ResidualNotAdmissible(Segment),
    #[error("interleaving repair failed after {attempts} attempts")]
    RepairFailed { attempts: usize },
    #[error("certificate check failed: {0}")]
    CertificateFailure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {method:?} produced a sequence whose segment {segment:?} partitions into blocks")]
    VerificationFailed { method: Method, segment: Segment },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// How a point entered a labelling: one of the digit labels `1..=9` (three
/// per disjoint block) or an extra point `a, b, c, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Digit(u8),
    Letter(u8),
}
