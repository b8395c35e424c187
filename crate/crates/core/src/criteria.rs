//! Success criteria scoring a test state against the ideal one.
//!
//! Outcome bitstrings are written most-significant qubit first, so the
//! string `"0101"` on four qubits is basis index 5 (q0 = 1, q2 = 1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simulator::StateVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriterionError {
    #[error("state widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("invalid bitstring `{0}`: only '0' and '1' allowed")]
    BadBitstring(String),
}

/// A basis-state label, most-significant qubit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bitstring(String);

impl Bitstring {
    pub fn from_index(index: usize, width: usize) -> Self {
        let s = (0..width)
            .rev()
            .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        Bitstring(s)
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    /// Basis index; `None` if the string is too long for `usize`.
    pub fn index(&self) -> Option<usize> {
        if self.0.len() > usize::BITS as usize {
            return None;
        }
        Some(self.0.bytes().fold(0usize, |acc, b| (acc << 1) | (b - b'0') as usize))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Bitstring {
    type Err = CriterionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(CriterionError::BadBitstring(s.to_string()));
        }
        Ok(Bitstring(s.to_string()))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuccessCriterion {
    Fidelity,
    CorrectOutcome(Bitstring),
    HeavyOutput,
}

impl SuccessCriterion {
    pub fn label(&self) -> &'static str {
        match self {
            SuccessCriterion::Fidelity => "fidelity",
            SuccessCriterion::CorrectOutcome(_) => "correct-outcome",
            SuccessCriterion::HeavyOutput => "heavy-output",
        }
    }

    /// Binds the criterion to a reference state so repeated evaluations skip
    /// per-call setup (the heavy set, outcome index).
    pub fn prepare<'a>(&self, reference: &'a StateVector) -> Result<PreparedCriterion<'a>, CriterionError> {
        Ok(match self {
            SuccessCriterion::Fidelity => PreparedCriterion::Fidelity(reference),
            SuccessCriterion::CorrectOutcome(bits) => {
                check_outcome(bits, reference.width())?;
                PreparedCriterion::Outcome {
                    width: reference.width(),
                    index: bits.index().expect("width checked"),
                }
            }
            SuccessCriterion::HeavyOutput => PreparedCriterion::Heavy {
                width: reference.width(),
                heavy: heavy_set(reference),
            },
        })
    }
}

pub enum PreparedCriterion<'a> {
    Fidelity(&'a StateVector),
    Outcome { width: usize, index: usize },
    Heavy { width: usize, heavy: Vec<usize> },
}

impl PreparedCriterion<'_> {
    pub fn evaluate(&self, test: &StateVector) -> Result<f64, CriterionError> {
        match self {
            PreparedCriterion::Fidelity(reference) => fidelity(reference, test),
            PreparedCriterion::Outcome { width, index } => {
                same_width(*width, test.width())?;
                Ok(test.amplitudes()[*index].norm_sqr().min(1.0))
            }
            PreparedCriterion::Heavy { width, heavy } => {
                same_width(*width, test.width())?;
                let amps = test.amplitudes();
                Ok(heavy.iter().map(|&i| amps[i].norm_sqr()).sum::<f64>().min(1.0))
            }
        }
    }
}

fn same_width(a: usize, b: usize) -> Result<(), CriterionError> {
    if a != b {
        return Err(CriterionError::WidthMismatch(a, b));
    }
    Ok(())
}

fn check_outcome(outcome: &Bitstring, width: usize) -> Result<(), CriterionError> {
    same_width(outcome.width(), width)
}

/// Squared overlap `|<reference|test>|^2`.
pub fn fidelity(reference: &StateVector, test: &StateVector) -> Result<f64, CriterionError> {
    let overlap = reference
        .inner(test)
        .map_err(|_| CriterionError::WidthMismatch(reference.width(), test.width()))?;
    Ok(overlap.norm_sqr().clamp(0.0, 1.0))
}

pub fn correct_outcome_probability(test: &StateVector, outcome: &Bitstring) -> Result<f64, CriterionError> {
    check_outcome(outcome, test.width())?;
    let index = outcome.index().expect("width checked");
    Ok(test.amplitudes()[index].norm_sqr().min(1.0))
}

/// Basis states whose ideal probability is strictly above the median of the
/// ideal distribution. For an even number of outcomes the median is the mean
/// of the two middle order statistics.
pub fn heavy_set(reference: &StateVector) -> Vec<usize> {
    let probs = reference.distribution().probabilities;
    let mut sorted = probs.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n.is_multiple_of(2) {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    } else {
        sorted[n / 2]
    };
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > median)
        .map(|(i, _)| i)
        .collect()
}

pub fn heavy_output_probability(reference: &StateVector, test: &StateVector) -> Result<f64, CriterionError> {
    same_width(reference.width(), test.width())?;
    SuccessCriterion::HeavyOutput.prepare(reference)?.evaluate(test)
}

pub fn evaluate(
    criterion: &SuccessCriterion,
    reference: &StateVector,
    test: &StateVector,
) -> Result<f64, CriterionError> {
    match criterion {
        SuccessCriterion::Fidelity => fidelity(reference, test),
        SuccessCriterion::CorrectOutcome(bits) => correct_outcome_probability(test, bits),
        SuccessCriterion::HeavyOutput => heavy_output_probability(reference, test),
    }
}
