use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Verdict classes, one per exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Sequenceable, admissible, verified, or a plain answer.
    Positive,
    /// Not sequenceable, inadmissible, bad set.
    Negative,
    /// No verdict within budget.
    Unknown,
    /// Bad usage or unreadable input.
    InputError,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
            Status::Unknown => 2,
            Status::InputError => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 over the bytes of every input file, in argument order.
    pub input_digest: Option<String>,
    pub outcome: String,
    pub exit_code: u8,
    pub details: Value,
    pub nodes: Option<u64>,
    pub elapsed_ms: u64,
    pub version: &'static str,
}

/// What a command hands back: the verdict, the JSON details and the text
/// rendering.
pub struct Output {
    pub status: Status,
    pub outcome: &'static str,
    pub details: Value,
    pub text: String,
    pub nodes: Option<u64>,
}

impl Output {
    pub fn new(status: Status, outcome: &'static str, details: Value, text: String) -> Self {
        Output {
            status,
            outcome,
            details,
            text,
            nodes: None,
        }
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.nodes = Some(nodes);
        self
    }
}

pub fn digest(inputs: &[Vec<u8>]) -> Option<String> {
    if inputs.is_empty() {
        return None;
    }
    let mut h = Sha256::new();
    for i in inputs {
        h.update(i);
    }
    Some(format!("{:x}", h.finalize()))
}
