//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a width plus an ordered list of [`Gate`]s. Measurement is
//! not part of the IR: statistics are read from the final state vector.
//!
//! Qubit `j` corresponds to bit `j` of a basis-state index (little-endian).
//! For two-qubit matrix gates the local 4x4 basis index is
//! `b0 + 2*b1`, where `b0` is the bit of `qubits()[0]` and `b1` the bit of
//! `qubits()[1]`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum entry-wise deviation of `U^dagger U` from the identity.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// Controlled-X; `qubits()[0]` is the control.
    Cx,
    Cz,
    Swap,
    U1q(Box<Matrix2>),
    U2q(Box<Matrix4>),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Swap | GateKind::U2q(_) => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Rx(_) => "rx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::U1q(_) => "u1q",
            GateKind::U2q(_) => "u2q",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("gate `{gate}` expects {expected} qubit(s), got {got}")]
    Arity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("circuit width must be at least 1")]
    ZeroWidth,
}

/// A gate applied to one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: [usize; 2],
}

impl Gate {
    /// Builds a gate, checking only that the operand count matches the kind.
    /// Range and distinctness are checked by [`validate`].
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind.name(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        let second = if qubits.len() == 2 { qubits[1] } else { 0 };
        Ok(Gate {
            kind,
            qubits: [qubits[0], second],
        })
    }

    fn one(kind: GateKind, q: usize) -> Self {
        Gate {
            kind,
            qubits: [q, 0],
        }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Gate {
            kind,
            qubits: [a, b],
        }
    }

    pub fn h(q: usize) -> Self {
        Self::one(GateKind::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::one(GateKind::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::one(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::one(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Self {
        Self::one(GateKind::S, q)
    }
    pub fn t(q: usize) -> Self {
        Self::one(GateKind::T, q)
    }
    pub fn rx(q: usize, theta: f64) -> Self {
        Self::one(GateKind::Rx(theta), q)
    }
    pub fn ry(q: usize, theta: f64) -> Self {
        Self::one(GateKind::Ry(theta), q)
    }
    pub fn rz(q: usize, theta: f64) -> Self {
        Self::one(GateKind::Rz(theta), q)
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Self::two(GateKind::Cx, control, target)
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::two(GateKind::Cz, a, b)
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self::two(GateKind::Swap, a, b)
    }
    pub fn u1q(q: usize, matrix: Matrix2) -> Self {
        Self::one(GateKind::U1q(Box::new(matrix)), q)
    }
    pub fn u2q(q0: usize, q1: usize, matrix: Matrix4) -> Self {
        Self::two(GateKind::U2q(Box::new(matrix)), q0, q1)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    /// Operand qubits, in the order significant for the gate kind.
    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// Dense unitary of the gate on its own operands: 2x2 for one-qubit
    /// kinds, 4x4 (in the local basis described at module level) otherwise.
    pub fn local_matrix(&self) -> LocalMatrix {
        use std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match &self.kind {
            GateKind::H => LocalMatrix::One([
                [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
                [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
            ]),
            GateKind::X => LocalMatrix::One([[zero, one], [one, zero]]),
            GateKind::Y => LocalMatrix::One([[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]]),
            GateKind::Z => LocalMatrix::One([[one, zero], [zero, -one]]),
            GateKind::S => LocalMatrix::One([[one, zero], [zero, c(0.0, 1.0)]]),
            GateKind::T => LocalMatrix::One([
                [one, zero],
                [zero, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
            ]),
            GateKind::Rx(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                LocalMatrix::One([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
            }
            GateKind::Ry(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                LocalMatrix::One([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
            }
            GateKind::Rz(theta) => LocalMatrix::One([
                [Complex64::from_polar(1.0, -theta / 2.0), zero],
                [zero, Complex64::from_polar(1.0, theta / 2.0)],
            ]),
            GateKind::U1q(m) => LocalMatrix::One(**m),
            GateKind::Cx => {
                // control = b0, target = b1: |b0=1,b1> -> |b0=1,!b1>, i.e. swap local 1 <-> 3
                let mut m = [[zero; 4]; 4];
                m[0][0] = one;
                m[2][2] = one;
                m[1][3] = one;
                m[3][1] = one;
                LocalMatrix::Two(m)
            }
            GateKind::Cz => {
                let mut m = [[zero; 4]; 4];
                m[0][0] = one;
                m[1][1] = one;
                m[2][2] = one;
                m[3][3] = -one;
                LocalMatrix::Two(m)
            }
            GateKind::Swap => {
                let mut m = [[zero; 4]; 4];
                m[0][0] = one;
                m[1][2] = one;
                m[2][1] = one;
                m[3][3] = one;
                LocalMatrix::Two(m)
            }
            GateKind::U2q(m) => LocalMatrix::Two(**m),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) => {
                write!(f, "{}({})", self.kind.name(), t)?
            }
            _ => write!(f, "{}", self.kind.name())?,
        }
        for (i, q) in self.qubits().iter().enumerate() {
            let sep = if i == 0 { " " } else { "," };
            write!(f, "{sep}q[{q}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalMatrix {
    One(Matrix2),
    Two(Matrix4),
}

/// Max-norm distance of `U^dagger U` from the identity for an `n x n` matrix
/// given as row slices.
fn unitarity_defect<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in m.iter() {
                acc += row[i].conj() * row[j];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - expected).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    name: String,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self, CircuitError> {
        Self::with_name(width, "circuit")
    }

    pub fn with_name(width: usize, name: impl Into<String>) -> Result<Self, CircuitError> {
        if width == 0 {
            return Err(CircuitError::ZeroWidth);
        }
        Ok(Circuit {
            width,
            gates: Vec::new(),
            name: name.into(),
        })
    }

    /// Builds a circuit from parts without checking gate operands; use
    /// [`validate`] before simulating untrusted input.
    pub fn from_gates(
        width: usize,
        gates: Vec<Gate>,
        name: impl Into<String>,
    ) -> Result<Self, CircuitError> {
        let mut c = Self::with_name(width, name)?;
        c.gates = gates;
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        self.gates.extend(gates);
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn stats(&self) -> CircuitStats {
        circuit_stats(self)
    }
}

/// Gate counts: `k` single-qubit gates, `m` two-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub single_qubit: usize,
    pub two_qubit: usize,
    pub total: usize,
    /// Number of single-Pauli fault sites: `3 * (k + 2m)`.
    pub error_locations: usize,
}

pub fn circuit_stats(circuit: &Circuit) -> CircuitStats {
    let two_qubit = circuit.gates.iter().filter(|g| g.is_two_qubit()).count();
    let single_qubit = circuit.gates.len() - two_qubit;
    CircuitStats {
        single_qubit,
        two_qubit,
        total: single_qubit + two_qubit,
        error_locations: 3 * (single_qubit + 2 * two_qubit),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    QubitOutOfRange,
    DuplicateQubit,
    NonUnitary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub gate_index: usize,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at gate {}", self.detail, self.gate_index)
    }
}

/// Checks every gate invariant; an empty result means the circuit is valid.
pub fn validate(circuit: &Circuit) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, gate) in circuit.gates.iter().enumerate() {
        let qs = gate.qubits();
        for &q in qs {
            if q >= circuit.width {
                out.push(Violation {
                    gate_index: i,
                    rule: Rule::QubitOutOfRange,
                    detail: format!(
                        "qubit index out of range (q[{q}] in width {})",
                        circuit.width
                    ),
                });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            out.push(Violation {
                gate_index: i,
                rule: Rule::DuplicateQubit,
                detail: "duplicate qubit".to_string(),
            });
        }
        let defect = match &gate.kind {
            GateKind::U1q(m) => unitarity_defect(m.as_ref()),
            GateKind::U2q(m) => unitarity_defect(m.as_ref()),
            _ => 0.0,
        };
        if !(defect <= UNITARITY_TOLERANCE) {
            out.push(Violation {
                gate_index: i,
                rule: Rule::NonUnitary,
                detail: format!("matrix is not unitary (defect {defect:.3e})"),
            });
        }
    }
    out
}
