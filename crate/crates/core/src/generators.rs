//! Parametric benchmark circuits: QFT, Bernstein-Vazirani, Grover, hidden
//! linear function, RY/RZ ansatz and quantum volume.
//!
//! Every generator is a pure function of `(spec, seed)`. Random choices
//! (ansatz angles, HLF matrix, Grover marked element, QV blocks) are drawn
//! only when the parameters leave them open.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::criteria::Bitstring;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),
    #[error("{0} circuits have no single correct outcome")]
    NoSingleOutcome(Family),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Qft,
    Bv,
    Grover,
    Hlf,
    Qv,
    Ryrz,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Qft,
        Family::Bv,
        Family::Grover,
        Family::Hlf,
        Family::Qv,
        Family::Ryrz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Qft => "qft",
            Family::Bv => "bv",
            Family::Grover => "grover",
            Family::Hlf => "hlf",
            Family::Qv => "qv",
            Family::Ryrz => "ryrz",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| GeneratorError::InvalidSpec(format!("unknown family `{s}`")))
    }
}

/// Family-specific knobs. Unset fields are drawn from the seed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkParams {
    /// BV hidden string, most-significant data qubit first; `width - 1` bits.
    pub hidden_string: Option<Bitstring>,
    /// Grover marked basis index.
    pub marked: Option<usize>,
    /// Grover iterations; defaults to `floor(pi/4 * sqrt(2^n))`.
    pub iterations: Option<usize>,
    /// HLF symmetric 0/1 adjacency matrix (`width x width`, diagonal read as
    /// S gates).
    pub hlf_matrix: Option<Vec<Vec<bool>>>,
    /// RYRZ entangling depth.
    pub depth: Option<usize>,
    /// Expand QV blocks into a CX-based template instead of U2Q gates.
    pub decompose_qv: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub width: usize,
    pub params: BenchmarkParams,
}

impl BenchmarkSpec {
    pub fn new(family: Family, width: usize) -> Self {
        BenchmarkSpec {
            family,
            width,
            params: BenchmarkParams::default(),
        }
    }

    pub fn with_params(mut self, params: BenchmarkParams) -> Self {
        self.params = params;
        self
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let invalid = |m: String| Err(GeneratorError::InvalidSpec(m));
        let n = self.width;
        if n == 0 {
            return invalid("width must be at least 1".into());
        }
        match self.family {
            Family::Bv => {
                if n < 2 {
                    return invalid("BV needs at least 2 qubits (data plus ancilla)".into());
                }
                if let Some(s) = &self.params.hidden_string {
                    if s.width() != n - 1 {
                        return invalid(format!(
                            "hidden string `{s}` has {} bits, expected width - 1 = {}",
                            s.width(),
                            n - 1
                        ));
                    }
                }
            }
            Family::Grover => {
                if n >= usize::BITS as usize - 1 {
                    return invalid(format!("Grover width {n} too large"));
                }
                if let Some(m) = self.params.marked {
                    if m >= 1 << n {
                        return invalid(format!("marked element {m} does not fit in {n} qubits"));
                    }
                }
            }
            Family::Hlf => {
                if let Some(a) = &self.params.hlf_matrix {
                    if a.len() != n || a.iter().any(|row| row.len() != n) {
                        return invalid(format!("HLF matrix must be {n}x{n}"));
                    }
                    for i in 0..n {
                        for j in 0..n {
                            if a[i][j] != a[j][i] {
                                return invalid("HLF matrix must be symmetric".into());
                            }
                        }
                    }
                }
            }
            Family::Ryrz => {
                if self.params.depth == Some(0) {
                    return invalid("RYRZ depth must be at least 1".into());
                }
            }
            Family::Qv => {
                if n < 2 {
                    return invalid("QV needs at least 2 qubits".into());
                }
            }
            Family::Qft => {}
        }
        Ok(())
    }
}

pub fn generate(spec: &BenchmarkSpec, seed: u64) -> Result<Circuit, GeneratorError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.width;
    let gates = match spec.family {
        Family::Qft => qft(n),
        Family::Bv => {
            let s = hidden_string(spec, &mut rng);
            bernstein_vazirani(n, &s)
        }
        Family::Grover => {
            let marked = marked_element(spec, &mut rng);
            let iters = spec.params.iterations.unwrap_or_else(|| optimal_grover_iterations(n));
            grover(n, marked, iters)
        }
        Family::Hlf => {
            let a = match &spec.params.hlf_matrix {
                Some(a) => a.clone(),
                None => random_symmetric(n, &mut rng),
            };
            hidden_linear_function(&a)
        }
        Family::Ryrz => ryrz(n, spec.params.depth.unwrap_or(1), &mut rng),
        Family::Qv => quantum_volume(n, spec.params.decompose_qv, &mut rng),
    };
    let name = format!("{}_{}", spec.family, n);
    Circuit::from_gates(n, gates, name).map_err(|e| GeneratorError::InvalidSpec(e.to_string()))
}

/// The unique ideal outcome for BV (ancilla bit then hidden string) and
/// Grover (marked element). Depends on the seed only when the parameters leave
/// the hidden string or marked element open.
pub fn correct_outcome(spec: &BenchmarkSpec, seed: u64) -> Result<Bitstring, GeneratorError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec.family {
        Family::Bv => {
            let s = hidden_string(spec, &mut rng);
            Ok(format!("1{s}").parse().expect("binary digits"))
        }
        Family::Grover => Ok(Bitstring::from_index(marked_element(spec, &mut rng), spec.width)),
        f => Err(GeneratorError::NoSingleOutcome(f)),
    }
}

// The draws below must happen before any other use of `rng` in `generate`
// so that `correct_outcome` sees the same values.
fn hidden_string(spec: &BenchmarkSpec, rng: &mut ChaCha8Rng) -> Bitstring {
    match &spec.params.hidden_string {
        Some(s) => s.clone(),
        None => {
            let bits: String = (0..spec.width - 1)
                .map(|_| if rng.random::<bool>() { '1' } else { '0' })
                .collect();
            bits.parse().expect("width >= 2 gives a non-empty string")
        }
    }
}

fn marked_element(spec: &BenchmarkSpec, rng: &mut ChaCha8Rng) -> usize {
    spec.params
        .marked
        .unwrap_or_else(|| rng.random_range(0..1usize << spec.width))
}

pub fn optimal_grover_iterations(width: usize) -> usize {
    (PI / 4.0 * ((1u64 << width) as f64).sqrt()).floor() as usize
}

/// Controlled phase `diag(1, 1, 1, e^{i theta})` from RZ and CX, up to a
/// global phase.
fn controlled_phase(control: usize, target: usize, theta: f64) -> [Gate; 5] {
    [
        Gate::rz(control, theta / 2.0),
        Gate::rz(target, theta / 2.0),
        Gate::cx(control, target),
        Gate::rz(target, -theta / 2.0),
        Gate::cx(control, target),
    ]
}

/// Textbook QFT: for each qubit from the top, H then controlled phases from
/// every lower qubit, followed by the bit-reversal swaps.
pub fn qft(n: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for j in (0..n).rev() {
        gates.push(Gate::h(j));
        for k in (0..j).rev() {
            let theta = PI / (1u64 << (j - k)) as f64;
            gates.extend(controlled_phase(k, j, theta));
        }
    }
    for i in 0..n / 2 {
        gates.push(Gate::swap(i, n - 1 - i));
    }
    gates
}

/// Data qubits `0..n-1`, ancilla `n-1` prepared in |->. Hidden-string
/// character `i` (from the left) controls data qubit `n - 2 - i`.
pub fn bernstein_vazirani(n: usize, hidden: &Bitstring) -> Vec<Gate> {
    let anc = n - 1;
    let mut gates = vec![Gate::x(anc)];
    gates.extend((0..n).map(Gate::h));
    for (i, c) in hidden.as_str().chars().enumerate() {
        if c == '1' {
            gates.push(Gate::cx(n - 2 - i, anc));
        }
    }
    gates.extend((0..n).map(Gate::h));
    gates
}

/// Phase flip of |1...1> on `qubits`, as a phase polynomial over parities
/// walked in Gray-code order: `2^n - 1` RZ and `2^n - 2` CX gates. Exact up
/// to a global phase.
pub fn multi_controlled_z(qubits: &[usize]) -> Vec<Gate> {
    let n = qubits.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![Gate::z(qubits[0])],
        2 => return vec![Gate::cz(qubits[0], qubits[1])],
        _ => {}
    }
    // x_1 ... x_n = 2^{1-n} * sum_{S != {}} (-1)^{|S|+1} parity_S(x)
    let scale = PI / (1u64 << (n - 1)) as f64;
    let mut gates = Vec::new();
    for t in 0..n {
        let target = qubits[t];
        let mut current: u64 = 0;
        for step in 0..1u64 << t {
            let gray = step ^ (step >> 1);
            let flip = gray ^ current;
            if flip != 0 {
                let c = flip.trailing_zeros() as usize;
                gates.push(Gate::cx(qubits[c], target));
            }
            current = gray;
            let size = gray.count_ones() + 1;
            let sign = if size % 2 == 1 { 1.0 } else { -1.0 };
            gates.push(Gate::rz(target, sign * scale));
        }
        if current != 0 {
            gates.push(Gate::cx(qubits[current.trailing_zeros() as usize], target));
        }
    }
    gates
}

pub fn grover(n: usize, marked: usize, iterations: usize) -> Vec<Gate> {
    let all: Vec<usize> = (0..n).collect();
    let flips: Vec<Gate> = (0..n).filter(|q| marked >> q & 1 == 0).map(Gate::x).collect();
    let mcz = multi_controlled_z(&all);
    let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
    for _ in 0..iterations {
        gates.extend(flips.iter().cloned());
        gates.extend(mcz.iter().cloned());
        gates.extend(flips.iter().cloned());
        gates.extend((0..n).map(Gate::h));
        gates.extend((0..n).map(Gate::x));
        gates.extend(mcz.iter().cloned());
        gates.extend((0..n).map(Gate::x));
        gates.extend((0..n).map(Gate::h));
    }
    gates
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i..n {
            let b = rng.random::<bool>();
            a[i][j] = b;
            a[j][i] = b;
        }
    }
    a
}

pub fn hidden_linear_function(adjacency: &[Vec<bool>]) -> Vec<Gate> {
    let n = adjacency.len();
    let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
    for i in 0..n {
        for j in i + 1..n {
            if adjacency[i][j] {
                gates.push(Gate::cz(i, j));
            }
        }
    }
    gates.extend((0..n).filter(|&i| adjacency[i][i]).map(Gate::s));
    gates.extend((0..n).map(Gate::h));
    gates
}

/// RY and RZ on every qubit, then `depth` rounds of a linear CX chain
/// followed by another rotation layer. Angles uniform in `[0, 2pi)`.
pub fn ryrz(n: usize, depth: usize, rng: &mut impl Rng) -> Vec<Gate> {
    let mut layer = |gates: &mut Vec<Gate>| {
        for q in 0..n {
            gates.push(Gate::ry(q, rng.random_range(0.0..2.0 * PI)));
            gates.push(Gate::rz(q, rng.random_range(0.0..2.0 * PI)));
        }
    };
    let mut gates = Vec::new();
    layer(&mut gates);
    for _ in 0..depth {
        for q in 0..n.saturating_sub(1) {
            gates.push(Gate::cx(q, q + 1));
        }
        layer(&mut gates);
    }
    gates
}

/// `n` layers; each layer pairs up a random permutation of the qubits and
/// applies an independent Haar-random two-qubit unitary to each pair.
pub fn quantum_volume(n: usize, decompose: bool, rng: &mut impl Rng) -> Vec<Gate> {
    let mut gates = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..n {
        perm.shuffle(rng);
        for pair in perm.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if decompose {
                gates.extend(cx_template_block(a, b, rng));
            } else {
                gates.push(Gate::u2q(a, b, haar_unitary::<4>(rng)));
            }
        }
    }
    gates
}

/// Generic three-CX two-qubit block: Haar single-qubit layers around an
/// RZ/RY interaction core with uniformly random angles.
fn cx_template_block(a: usize, b: usize, rng: &mut impl Rng) -> Vec<Gate> {
    let mut angle = || rng.random_range(0.0..2.0 * PI);
    let (t1, t2, t3) = (angle(), angle(), angle());
    let mut one = |q| Gate::u1q(q, haar_unitary::<2>(rng));
    let pre = [one(a), one(b)];
    let post = [one(a), one(b)];
    let mut gates = pre.to_vec();
    gates.extend([
        Gate::cx(b, a),
        Gate::rz(a, t1),
        Gate::ry(b, t2),
        Gate::cx(a, b),
        Gate::ry(b, t3),
        Gate::cx(b, a),
    ]);
    gates.extend(post);
    gates
}

/// Haar-distributed `N x N` unitary: Gram-Schmidt on a complex Gaussian
/// matrix (equivalent to QR with a positive diagonal).
pub fn haar_unitary<const N: usize>(rng: &mut impl Rng) -> [[Complex64; N]; N] {
    let mut cols = [[Complex64::new(0.0, 0.0); N]; N];
    for col in cols.iter_mut() {
        for z in col.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex64::new(re, im);
        }
    }
    for j in 0..N {
        for k in 0..j {
            let proj: Complex64 = (0..N).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..N {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut m = [[Complex64::new(0.0, 0.0); N]; N];
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[i][j] = *z;
        }
    }
    m
}
