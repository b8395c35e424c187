//! Noise-tolerance analysis of quantum circuits under the Pauli error model.
//!
//! Given a circuit and a per gate-qubit Pauli error rate, [`analysis`]
//! estimates the probability that execution still succeeds; given a target
//! success probability it finds the largest tolerable uniform error rate.
//! Both rest on exact state-vector simulation ([`simulator`]) with either an
//! exhaustive single-fault sweep or seeded Monte Carlo trajectories
//! ([`noise`]).

pub mod analysis;
pub mod circuit;
pub mod criteria;
pub mod generators;
pub mod noise;
pub mod qasm;
pub mod simulator;

pub use analysis::{AnalysisConfig, AnalysisError, AnalysisResult, ExtrapolationFit, Regime};
pub use circuit::{circuit_stats, validate, Circuit, CircuitStats, Gate, GateKind};
pub use criteria::{Bitstring, SuccessCriterion};
pub use generators::{BenchmarkParams, BenchmarkSpec, Family};
pub use noise::{Engine, EnsembleStats, ErrorInstance, ErrorRates, ExhaustiveSummary};
pub use simulator::{Pauli, StateVector};
