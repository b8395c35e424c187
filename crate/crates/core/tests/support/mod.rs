//! Shared test helpers: a dense-matrix reference simulator written from the
//! gate definitions alone, and random circuit builders.

#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use qtol_core::generators::haar_unitary;
use qtol_core::{Circuit, Gate, GateKind};
use rand::Rng;

pub type Dense = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one_qubit(kind: &GateKind) -> [[Complex64; 2]; 2] {
    let z = c(0.0, 0.0);
    match kind {
        GateKind::H => [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]],
        GateKind::X => [[z, c(1.0, 0.0)], [c(1.0, 0.0), z]],
        GateKind::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        GateKind::Z => [[c(1.0, 0.0), z], [z, c(-1.0, 0.0)]],
        GateKind::S => [[c(1.0, 0.0), z], [z, c(0.0, 1.0)]],
        GateKind::T => [[c(1.0, 0.0), z], [z, c(FRAC_PI_4.cos(), FRAC_PI_4.sin())]],
        GateKind::Rx(t) => {
            let (s, co) = ((t / 2.0).sin(), (t / 2.0).cos());
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry(t) => {
            let (s, co) = ((t / 2.0).sin(), (t / 2.0).cos());
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz(t) => [[c((t / 2.0).cos(), -(t / 2.0).sin()), z], [z, c((t / 2.0).cos(), (t / 2.0).sin())]],
        GateKind::U1q(m) => **m,
        other => panic!("{} is not a one-qubit gate", other.name()),
    }
}

fn bit(x: usize, q: usize) -> usize {
    (x >> q) & 1
}

/// Full `2^n x 2^n` matrix of one gate, built entry by entry.
pub fn dense_gate(gate: &Gate, n: usize) -> Dense {
    let dim = 1 << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    let qs = gate.qubits();
    for col in 0..dim {
        match gate.kind() {
            GateKind::Cx => {
                let row = col ^ (bit(col, qs[0]) << qs[1]);
                m[row][col] = c(1.0, 0.0);
            }
            GateKind::Cz => {
                let sign = if bit(col, qs[0]) & bit(col, qs[1]) == 1 { -1.0 } else { 1.0 };
                m[col][col] = c(sign, 0.0);
            }
            GateKind::Swap => {
                let (a, b) = (bit(col, qs[0]), bit(col, qs[1]));
                let row = (col & !(1 << qs[0]) & !(1 << qs[1])) | (b << qs[0]) | (a << qs[1]);
                m[row][col] = c(1.0, 0.0);
            }
            GateKind::U2q(u) => {
                let rest = col & !(1 << qs[0]) & !(1 << qs[1]);
                let local_col = bit(col, qs[0]) + 2 * bit(col, qs[1]);
                for local_row in 0..4 {
                    let row = rest | ((local_row & 1) << qs[0]) | ((local_row >> 1) << qs[1]);
                    m[row][col] = u[local_row][local_col];
                }
            }
            kind => {
                let u = one_qubit(kind);
                let q = qs[0];
                let rest = col & !(1 << q);
                for b in 0..2 {
                    m[rest | (b << q)][col] = u[b][bit(col, q)];
                }
            }
        }
    }
    m
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Dense {
    let dim = 1 << n;
    (0..dim)
        .map(|i| (0..dim).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

/// Product of all gate matrices, last gate leftmost.
pub fn dense_circuit(circuit: &Circuit) -> Dense {
    circuit
        .gates()
        .iter()
        .fold(identity(circuit.width()), |acc, g| matmul(&dense_gate(g, circuit.width()), &acc))
}

pub fn apply(m: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn basis_zero(n: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

/// One gate drawn uniformly from the full alphabet on distinct random qubits.
pub fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let q = rng.random_range(0..n);
    let choices = if n >= 2 { 14 } else { 10 };
    let pick = rng.random_range(0..choices);
    if pick < 10 {
        return match pick {
            0 => Gate::h(q),
            1 => Gate::x(q),
            2 => Gate::y(q),
            3 => Gate::z(q),
            4 => Gate::s(q),
            5 => Gate::t(q),
            6 => Gate::rx(q, angle),
            7 => Gate::ry(q, angle),
            8 => Gate::rz(q, angle),
            _ => Gate::u1q(q, haar_unitary::<2>(rng)),
        };
    }
    let mut r = rng.random_range(0..n - 1);
    if r >= q {
        r += 1;
    }
    match pick {
        10 => Gate::cx(q, r),
        11 => Gate::cz(q, r),
        12 => Gate::swap(q, r),
        _ => Gate::u2q(q, r, haar_unitary::<4>(rng)),
    }
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    let gates = (0..gates).map(|_| random_gate(rng, n)).collect();
    Circuit::from_gates(n, gates, "random").expect("valid by construction")
}

/// Random circuit without matrix gates, so it can be written as QASM.
pub fn random_named_circuit(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    let mut out = Vec::with_capacity(gates);
    while out.len() < gates {
        let g = random_gate(rng, n);
        if !matches!(g.kind(), GateKind::U1q(_) | GateKind::U2q(_)) {
            out.push(g);
        }
    }
    Circuit::from_gates(n, out, "random").expect("valid by construction")
}
