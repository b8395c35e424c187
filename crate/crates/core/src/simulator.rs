//! Exact state-vector simulation.
//!
//! Amplitude index `k` corresponds to basis state `|k>`, with qubit `j` read
//! from bit `j` of `k`. Norms are never renormalized during a run.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, LocalMatrix, Matrix2, Matrix4};

/// Default state-vector memory budget: 2^26 amplitudes (1 GiB).
pub const DEFAULT_MEMORY_BUDGET: usize = (1usize << 26) * std::mem::size_of::<Complex64>();

const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{width} qubits need {needed} bytes, over the memory budget of {budget} bytes")]
    WidthTooLarge {
        width: usize,
        needed: u128,
        budget: usize,
    },
    #[error("state width must be at least 1")]
    ZeroWidth,
    #[error("qubit {qubit} out of range for a {width}-qubit state")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("gate {gate} acts twice on qubit {qubit}")]
    DuplicateQubit { gate: String, qubit: usize },
    #[error("invalid injection at gate index {gate_index}: {reason}")]
    InvalidInjection { gate_index: usize, reason: String },
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("amplitudes have squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("state widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
}

/// Pauli fault type. Declaration order (X, Z, Y) is the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
    Y,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Z, Pauli::Y];

    pub fn index(self) -> usize {
        match self {
            Pauli::X => 0,
            Pauli::Z => 1,
            Pauli::Y => 2,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "X",
            Pauli::Z => "Z",
            Pauli::Y => "Y",
        };
        f.write_str(s)
    }
}

/// Errors to inject after specific gates: gate index -> (pauli, qubit) list.
pub type Injections = BTreeMap<usize, Vec<(Pauli, usize)>>;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<Complex64>,
}

pub fn zero_state(width: usize) -> Result<StateVector, SimError> {
    zero_state_with_budget(width, DEFAULT_MEMORY_BUDGET)
}

pub fn zero_state_with_budget(width: usize, budget: usize) -> Result<StateVector, SimError> {
    check_budget(width, budget)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << width];
    amps[0] = Complex64::new(1.0, 0.0);
    Ok(StateVector { width, amps })
}

/// Fails with `WidthTooLarge` when a `width`-qubit state does not fit in
/// `budget` bytes.
pub fn check_budget(width: usize, budget: usize) -> Result<(), SimError> {
    if width == 0 {
        return Err(SimError::ZeroWidth);
    }
    let needed: u128 = if width >= 100 {
        u128::MAX
    } else {
        (1u128 << width) * std::mem::size_of::<Complex64>() as u128
    };
    if needed > budget as u128 || width >= usize::BITS as usize {
        return Err(SimError::WidthTooLarge {
            width,
            needed,
            budget,
        });
    }
    Ok(())
}

#[inline]
fn insert_zero_bit(k: usize, bit: usize) -> usize {
    let low = k & ((1 << bit) - 1);
    ((k >> bit) << (bit + 1)) | low
}

impl StateVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(StateVector {
            width: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.width != other.width {
            return Err(SimError::WidthMismatch(self.width, other.width));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn distribution(&self) -> ProbabilityVector {
        ProbabilityVector {
            probabilities: self.amps.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), SimError> {
        if qubit >= self.width {
            return Err(SimError::QubitOutOfRange {
                qubit,
                width: self.width,
            });
        }
        Ok(())
    }

    pub fn apply_gate(mut self, gate: &Gate) -> Result<Self, SimError> {
        self.apply_gate_in_place(gate)?;
        Ok(self)
    }

    pub fn apply_pauli(mut self, pauli: Pauli, qubit: usize) -> Result<Self, SimError> {
        self.apply_pauli_in_place(pauli, qubit)?;
        Ok(self)
    }

    pub fn apply_gate_in_place(&mut self, gate: &Gate) -> Result<(), SimError> {
        let qs = gate.qubits();
        for &q in qs {
            self.check_qubit(q)?;
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(SimError::DuplicateQubit {
                gate: gate.to_string(),
                qubit: qs[0],
            });
        }
        match gate.kind() {
            GateKind::X => self.pauli_x(qs[0]),
            GateKind::Y => self.pauli_y(qs[0]),
            GateKind::Z => self.phase(qs[0], Complex64::new(-1.0, 0.0)),
            GateKind::S => self.phase(qs[0], Complex64::new(0.0, 1.0)),
            GateKind::T => self.phase(qs[0], Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
            GateKind::Cx => self.cx(qs[0], qs[1]),
            GateKind::Cz => self.cz(qs[0], qs[1]),
            GateKind::Swap => self.swap(qs[0], qs[1]),
            _ => match gate.local_matrix() {
                LocalMatrix::One(m) => self.apply_matrix1(qs[0], &m),
                LocalMatrix::Two(m) => self.apply_matrix2(qs[0], qs[1], &m),
            },
        }
        Ok(())
    }

    pub fn apply_pauli_in_place(&mut self, pauli: Pauli, qubit: usize) -> Result<(), SimError> {
        self.check_qubit(qubit)?;
        match pauli {
            Pauli::X => self.pauli_x(qubit),
            Pauli::Z => self.phase(qubit, Complex64::new(-1.0, 0.0)),
            Pauli::Y => self.pauli_y(qubit),
        }
        Ok(())
    }

    fn pairs(&self, q: usize) -> impl Iterator<Item = (usize, usize)> + use<> {
        let half = self.amps.len() >> 1;
        let stride = 1 << q;
        (0..half).map(move |k| {
            let i0 = insert_zero_bit(k, q);
            (i0, i0 | stride)
        })
    }

    fn pauli_x(&mut self, q: usize) {
        for (i0, i1) in self.pairs(q) {
            self.amps.swap(i0, i1);
        }
    }

    // a0|0> + a1|1>  ->  -i a1|0> + i a0|1>
    fn pauli_y(&mut self, q: usize) {
        let i = Complex64::new(0.0, 1.0);
        for (i0, i1) in self.pairs(q) {
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = -i * a1;
            self.amps[i1] = i * a0;
        }
    }

    /// Multiplies the |1> component of `q` by `phase`.
    fn phase(&mut self, q: usize, phase: Complex64) {
        for (_, i1) in self.pairs(q) {
            self.amps[i1] *= phase;
        }
    }

    fn apply_matrix1(&mut self, q: usize, m: &Matrix2) {
        for (i0, i1) in self.pairs(q) {
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    /// Base indices with both qubit bits cleared.
    fn quads(&self, q0: usize, q1: usize) -> impl Iterator<Item = [usize; 4]> + use<> {
        let (lo, hi) = if q0 < q1 { (q0, q1) } else { (q1, q0) };
        let quarter = self.amps.len() >> 2;
        let b0 = 1 << q0;
        let b1 = 1 << q1;
        (0..quarter).map(move |k| {
            let base = insert_zero_bit(insert_zero_bit(k, lo), hi);
            [base, base | b0, base | b1, base | b0 | b1]
        })
    }

    fn cx(&mut self, control: usize, target: usize) {
        for [_, i1, _, i3] in self.quads(control, target) {
            self.amps.swap(i1, i3);
        }
    }

    fn cz(&mut self, a: usize, b: usize) {
        for [_, _, _, i3] in self.quads(a, b) {
            self.amps[i3] = -self.amps[i3];
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        for [_, i1, i2, _] in self.quads(a, b) {
            self.amps.swap(i1, i2);
        }
    }

    fn apply_matrix2(&mut self, q0: usize, q1: usize, m: &Matrix4) {
        for idx in self.quads(q0, q1) {
            let a = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                self.amps[i] = m[row][0] * a[0] + m[row][1] * a[1] + m[row][2] * a[2] + m[row][3] * a[3];
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    pub probabilities: Vec<f64>,
}

pub fn distribution(state: &StateVector) -> ProbabilityVector {
    state.distribution()
}

/// Checks that every injection targets an existing gate and one of its
/// operand qubits.
pub fn check_injections(circuit: &Circuit, injections: &Injections) -> Result<(), SimError> {
    let gates = circuit.gates();
    for (&idx, faults) in injections {
        let gate = gates.get(idx).ok_or_else(|| SimError::InvalidInjection {
            gate_index: idx,
            reason: format!("circuit has only {} gates", gates.len()),
        })?;
        for &(pauli, q) in faults {
            if !gate.qubits().contains(&q) {
                return Err(SimError::InvalidInjection {
                    gate_index: idx,
                    reason: format!("{pauli} on q[{q}] is not an operand of `{gate}`"),
                });
            }
        }
    }
    Ok(())
}

/// Simulates `circuit` from |0...0>, applying the injected Paulis right after
/// the gate they are registered at.
pub fn run(circuit: &Circuit, injections: &Injections) -> Result<StateVector, SimError> {
    run_with_budget(circuit, injections, DEFAULT_MEMORY_BUDGET)
}

pub fn run_with_budget(
    circuit: &Circuit,
    injections: &Injections,
    budget: usize,
) -> Result<StateVector, SimError> {
    check_injections(circuit, injections)?;
    let mut state = zero_state_with_budget(circuit.width(), budget)?;
    for (i, gate) in circuit.gates().iter().enumerate() {
        state.apply_gate_in_place(gate)?;
        if let Some(faults) = injections.get(&i) {
            for &(pauli, q) in faults {
                state.apply_pauli_in_place(pauli, q)?;
            }
        }
    }
    Ok(state)
}

/// Noise-free final state.
pub fn run_ideal(circuit: &Circuit) -> Result<StateVector, SimError> {
    run(circuit, &Injections::new())
}
