//! Pauli error injection: exhaustive single-fault sweeps and seeded Monte
//! Carlo trajectories.
//!
//! Faults are only ever placed directly after a gate, on one of its operand
//! qubits. There are no idle, preparation or measurement fault sites.
//!
//! # Seed splitting
//!
//! Monte Carlo run `i` of an ensemble with master seed `s` draws its faults
//! from a ChaCha8 generator seeded (via `seed_from_u64`) with
//! [`run_seed`]`(s, i)`, the `(i + 1)`-th output of a SplitMix64 generator
//! whose state starts at `s`. Within a run, one uniform `u` in `[0, 1)` is
//! drawn per (gate, operand qubit) in circuit order; the fault is X if
//! `u < p_x`, Z if `u < p_x + p_z`, Y if `u < p_x + p_z + p_y`, none otherwise.
//! This rule is part of the output contract and must stay stable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::criteria::{CriterionError, SuccessCriterion};
use crate::simulator::{self, Pauli, SimError, StateVector, DEFAULT_MEMORY_BUDGET};

/// Monte Carlo trajectories per ensemble unless configured otherwise.
pub const DEFAULT_RUNS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error("invalid error rates: {0}")]
    InvalidRates(String),
    #[error("ensemble needs at least one run")]
    NoRuns,
}

/// Per gate-qubit Pauli fault probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRates {
    p_x: f64,
    p_z: f64,
    p_y: f64,
}

impl ErrorRates {
    pub fn new(p_x: f64, p_z: f64, p_y: f64) -> Result<Self, NoiseError> {
        for (name, p) in [("p_x", p_x), ("p_z", p_z), ("p_y", p_y)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(NoiseError::InvalidRates(format!("{name} = {p} is not in [0, 1]")));
            }
        }
        let total = p_x + p_z + p_y;
        if total > 1.0 + 1e-12 {
            return Err(NoiseError::InvalidRates(format!("total rate {total} exceeds 1")));
        }
        Ok(ErrorRates { p_x, p_z, p_y })
    }

    /// Total rate `p` split evenly across X, Z and Y.
    pub fn uniform(p: f64) -> Result<Self, NoiseError> {
        Self::new(p / 3.0, p / 3.0, p / 3.0)
    }

    pub fn zero() -> Self {
        ErrorRates {
            p_x: 0.0,
            p_z: 0.0,
            p_y: 0.0,
        }
    }

    pub fn p_x(&self) -> f64 {
        self.p_x
    }
    pub fn p_z(&self) -> f64 {
        self.p_z
    }
    pub fn p_y(&self) -> f64 {
        self.p_y
    }

    pub fn get(&self, pauli: Pauli) -> f64 {
        match pauli {
            Pauli::X => self.p_x,
            Pauli::Z => self.p_z,
            Pauli::Y => self.p_y,
        }
    }

    pub fn total(&self) -> f64 {
        self.p_x + self.p_z + self.p_y
    }

    pub fn is_uniform(&self) -> bool {
        self.p_x == self.p_z && self.p_z == self.p_y
    }

    fn sample(&self, u: f64) -> Option<Pauli> {
        if u < self.p_x {
            Some(Pauli::X)
        } else if u < self.p_x + self.p_z {
            Some(Pauli::Z)
        } else if u < self.p_x + self.p_z + self.p_y {
            Some(Pauli::Y)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErrorInstance {
    pub gate_index: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// Success of the noise-free run and mean success under each single-fault
/// type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveSummary {
    pub reference_success: f64,
    /// Indexed by [`Pauli::index`]: X, Z, Y.
    pub mean_success: [f64; 3],
    /// Fault sites per Pauli type, `k + 2m`.
    pub locations_per_pauli: usize,
    pub gate_count: usize,
}

impl ExhaustiveSummary {
    pub fn mean(&self, pauli: Pauli) -> f64 {
        self.mean_success[pauli.index()]
    }

    /// Success under one fault of uniformly random type: the average of the
    /// three per-type means.
    pub fn one_error_success(&self) -> f64 {
        self.mean_success.iter().sum::<f64>() / 3.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(runs)`; zero for a single run.
    pub stderr: f64,
    pub runs: usize,
}

/// Every single fault site, ordered by gate index, then operand order, then
/// X, Z, Y.
pub fn enumerate_single_errors(circuit: &Circuit) -> Vec<ErrorInstance> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .flat_map(|(gate_index, gate)| {
            gate.qubits().iter().flat_map(move |&qubit| {
                Pauli::ALL.into_iter().map(move |pauli| ErrorInstance {
                    gate_index,
                    qubit,
                    pauli,
                })
            })
        })
        .collect()
}

/// The `(index + 1)`-th SplitMix64 output for state `master`.
pub fn run_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Intermediate states every `stride` gates so fault runs can resume from
/// the nearest point instead of |0...0>.
struct Checkpoints<'c> {
    gates: &'c [Gate],
    stride: usize,
    states: Vec<StateVector>,
}

impl<'c> Checkpoints<'c> {
    fn build(circuit: &'c Circuit, budget: usize) -> Result<Self, SimError> {
        let gates = circuit.gates();
        let mut state = simulator::zero_state_with_budget(circuit.width(), budget)?;
        let state_bytes = std::mem::size_of_val(state.amplitudes());
        let max_states = (budget / state_bytes / 4).max(1);
        let mut stride = ((gates.len() as f64).sqrt().ceil() as usize).max(1);
        while gates.len() / stride + 1 > max_states {
            stride *= 2;
        }
        let mut states = Vec::with_capacity(gates.len() / stride + 1);
        for (i, gate) in gates.iter().enumerate() {
            if i % stride == 0 {
                states.push(state.clone());
            }
            state.apply_gate_in_place(gate)?;
        }
        if gates.is_empty() {
            states.push(state);
        }
        Ok(Checkpoints { gates, stride, states })
    }

    /// Runs the circuit with the given faults (sorted by gate index).
    fn run_with(&self, faults: &[ErrorInstance]) -> Result<StateVector, SimError> {
        let start = faults.first().map_or(0, |f| f.gate_index / self.stride);
        let mut state = self.states[start].clone();
        let mut next = 0;
        for (i, gate) in self.gates.iter().enumerate().skip(start * self.stride) {
            state.apply_gate_in_place(gate)?;
            while next < faults.len() && faults[next].gate_index == i {
                state.apply_pauli_in_place(faults[next].pauli, faults[next].qubit)?;
                next += 1;
            }
        }
        Ok(state)
    }
}

/// Noise simulation settings shared by the sweep and ensemble entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    pub memory_budget: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl Engine {
    pub fn reference(&self, circuit: &Circuit) -> Result<StateVector, SimError> {
        simulator::run_with_budget(circuit, &Default::default(), self.memory_budget)
    }

    pub fn exhaustive_sweep(
        &self,
        circuit: &Circuit,
        criterion: &SuccessCriterion,
    ) -> Result<ExhaustiveSummary, NoiseError> {
        let reference = self.reference(circuit)?;
        let judge = criterion.prepare(&reference)?;
        let reference_success = judge.evaluate(&reference)?;
        let checkpoints = Checkpoints::build(circuit, self.memory_budget)?;
        let instances = enumerate_single_errors(circuit);
        let values = instances
            .par_iter()
            .map(|inst| {
                let state = checkpoints.run_with(std::slice::from_ref(inst))?;
                Ok(judge.evaluate(&state)?)
            })
            .collect::<Result<Vec<f64>, NoiseError>>()?;

        let locations = instances.len() / 3;
        let mut sums = [0.0; 3];
        for (inst, v) in instances.iter().zip(&values) {
            sums[inst.pauli.index()] += v;
        }
        // with no fault sites every per-type mean collapses to the reference
        let mean_success = if locations == 0 {
            [reference_success; 3]
        } else {
            sums.map(|s| s / locations as f64)
        };
        Ok(ExhaustiveSummary {
            reference_success,
            mean_success,
            locations_per_pauli: locations,
            gate_count: circuit.len(),
        })
    }

    pub fn monte_carlo_run(
        &self,
        circuit: &Circuit,
        rates: &ErrorRates,
        seed: u64,
    ) -> Result<StateVector, NoiseError> {
        let faults = sample_faults(circuit, rates, seed);
        let mut injections = simulator::Injections::new();
        for f in faults {
            injections.entry(f.gate_index).or_default().push((f.pauli, f.qubit));
        }
        Ok(simulator::run_with_budget(circuit, &injections, self.memory_budget)?)
    }

    pub fn monte_carlo_ensemble(
        &self,
        circuit: &Circuit,
        rates: &ErrorRates,
        criterion: &SuccessCriterion,
        n_runs: usize,
        master_seed: u64,
    ) -> Result<EnsembleStats, NoiseError> {
        if n_runs == 0 {
            return Err(NoiseError::NoRuns);
        }
        let reference = self.reference(circuit)?;
        let judge = criterion.prepare(&reference)?;
        let reference_success = judge.evaluate(&reference)?;
        let checkpoints = Checkpoints::build(circuit, self.memory_budget)?;
        let values = (0..n_runs as u64)
            .into_par_iter()
            .map(|i| {
                let faults = sample_faults(circuit, rates, run_seed(master_seed, i));
                if faults.is_empty() {
                    return Ok(reference_success);
                }
                let state = checkpoints.run_with(&faults)?;
                Ok(judge.evaluate(&state)?)
            })
            .collect::<Result<Vec<f64>, NoiseError>>()?;
        Ok(summarize(&values))
    }
}

/// Draws one trajectory's faults in circuit order.
pub fn sample_faults(circuit: &Circuit, rates: &ErrorRates, seed: u64) -> Vec<ErrorInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faults = Vec::new();
    for (gate_index, gate) in circuit.gates().iter().enumerate() {
        for &qubit in gate.qubits() {
            let u: f64 = rng.random();
            if let Some(pauli) = rates.sample(u) {
                faults.push(ErrorInstance {
                    gate_index,
                    qubit,
                    pauli,
                });
            }
        }
    }
    faults
}

/// Mean and standard error, summed in slice order.
pub fn summarize(values: &[f64]) -> EnsembleStats {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let stderr = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    EnsembleStats { mean, stderr, runs: n }
}

pub fn exhaustive_sweep(
    circuit: &Circuit,
    criterion: &SuccessCriterion,
) -> Result<ExhaustiveSummary, NoiseError> {
    Engine::default().exhaustive_sweep(circuit, criterion)
}

pub fn monte_carlo_run(circuit: &Circuit, rates: &ErrorRates, seed: u64) -> Result<StateVector, NoiseError> {
    Engine::default().monte_carlo_run(circuit, rates, seed)
}

pub fn monte_carlo_ensemble(
    circuit: &Circuit,
    rates: &ErrorRates,
    criterion: &SuccessCriterion,
    n_runs: usize,
    master_seed: u64,
) -> Result<EnsembleStats, NoiseError> {
    Engine::default().monte_carlo_ensemble(circuit, rates, criterion, n_runs, master_seed)
}
