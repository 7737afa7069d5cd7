//! Runnable protocols with per-round communication accounting.
//!
//! Quantum protocols are simulated to amplitude level and every measurement
//! branch is enumerated, so a run is exact only if all branches agree.

use serde::Serialize;

use crate::bits::BitString;
use crate::qsim::BRANCH_TOL;

pub mod classical;
pub mod kremer;
pub mod quantum;

pub use classical::{round_collapse, ClassicalProtocol, CollapseReport, Speaker};
pub use kremer::{kremer_compile, KremerReport, QuantumProtocolSpec};
pub use quantum::{
    eq_multiround, eq_padded, eq_two_round, equidistant_list, list_entangled, list_nonsignaling, list_two_round,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Equal,
    NotEqual,
    /// Bob's recovered list element, as a hex bitstring.
    Element(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchRecord {
    pub id: String,
    pub probability: f64,
    pub outcome: Outcome,
    pub correct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolRun {
    pub protocol: String,
    pub n: usize,
    pub d: Option<usize>,
    pub inputs: Vec<String>,
    /// The expected answer on this input.
    pub outcome: Outcome,
    pub rounds: usize,
    pub qubits_sent: usize,
    pub cbits_sent: usize,
    pub branches: Vec<BranchRecord>,
    /// Probability mass not accounted for by the recorded branches.
    pub lost_probability: f64,
    pub pass: bool,
}

impl ProtocolRun {
    pub(crate) fn finish(mut self) -> Self {
        let total: f64 = self.branches.iter().map(|b| b.probability).sum();
        self.lost_probability = (1.0 - total).max(0.0);
        self.pass = self.lost_probability <= 1e-9
            && self.branches.iter().all(|b| b.correct || b.probability <= BRANCH_TOL);
        self
    }

    pub(crate) fn new(protocol: &str, n: usize, d: Option<usize>, inputs: Vec<String>, outcome: Outcome) -> Self {
        Self {
            protocol: protocol.to_string(),
            n,
            d,
            inputs,
            outcome,
            rounds: 0,
            qubits_sent: 0,
            cbits_sent: 0,
            branches: Vec::new(),
            lost_probability: 0.0,
            pass: false,
        }
    }

    pub(crate) fn record(&mut self, id: String, probability: f64, outcome: Outcome) {
        let correct = outcome == self.outcome;
        self.branches.push(BranchRecord { id, probability, outcome, correct });
    }
}

pub(crate) fn element(x: &BitString) -> Outcome {
    Outcome::Element(x.to_hex())
}
