//! Brute-force state-vector reference for small qubit counts.
//!
//! Basis index `x` has qubit `q` in bit `q`. Everything here works from the
//! amplitude picture. Only [`check_sequence`] calls into the rewrite rules, to
//! produce the hypergraph side of the comparison.

use num_complex::Complex64;
use serde::Serialize;

use crate::dyadic::Weight;
use crate::error::{Error, Result};
use crate::hypergraph::WeightedHypergraph;
use crate::par::{self, Exec};
use crate::transforms::{apply_gate, Gate, GateSequence, XRuleMode, LC_CENTER_Z_CORRECTION, LC_NEIGHBOR_Z_CORRECTION};

pub const MAX_PHASE_QUBITS: usize = 20;
pub const MAX_DENSE_QUBITS: usize = 14;

pub type Matrix2 = [[Complex64; 2]; 2];

/// Exact phase function `f` of an equally weighted state
/// `2^{-n/2} sum_x exp(i pi f(x)) |x>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVector {
    n: usize,
    phases: Vec<Weight>,
}

impl PhaseVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phases(&self) -> &[Weight] {
        &self.phases
    }

    /// Equality after removing the phase of the all-zeros entry from both.
    pub fn equal_up_to_global_phase(&self, other: &PhaseVector) -> bool {
        if self.n != other.n {
            return false;
        }
        let shift = other.phases[0] + (-self.phases[0]);
        self.phases.iter().zip(&other.phases).all(|(&a, &b)| a + shift == b)
    }
}

pub fn synthesize(h: &WeightedHypergraph) -> Result<PhaseVector> {
    synthesize_with(h, Exec::default())
}

pub fn synthesize_with(h: &WeightedHypergraph, exec: Exec) -> Result<PhaseVector> {
    let n = h.n();
    if n > MAX_PHASE_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_PHASE_QUBITS });
    }
    let terms: Vec<(usize, Weight)> = h
        .edges()
        .map(|(e, w)| (e.vertices().iter().fold(0usize, |m, &v| m | 1 << v), w))
        .collect();
    let base = h.global_phase();
    let mut phases = vec![Weight::ZERO; 1 << n];
    par::fill_indexed(exec, &mut phases, |x| {
        terms.iter().filter(|(m, _)| x & m == *m).fold(base, |acc, &(_, w)| acc + w)
    });
    Ok(PhaseVector { n, phases })
}

/// A state vector on at most [`MAX_DENSE_QUBITS`] qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn cis(turns_of_pi: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI * turns_of_pi)
}

impl DenseState {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_DENSE_QUBITS });
        }
        if amps.len() != 1 << n {
            return Err(Error::Dimension(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Dimension(format!("state norm {norm} is not 1")));
        }
        Ok(DenseState { n, amps })
    }

    pub fn basis(n: usize, x: usize) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_DENSE_QUBITS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        if x >= amps.len() {
            return Err(Error::Dimension(format!("basis index {x} out of range")));
        }
        amps[x] = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn from_phases(pv: &PhaseVector) -> Result<Self> {
        let n = pv.n();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_DENSE_QUBITS });
        }
        let scale = (1u64 << n) as f64;
        let norm = 1.0 / scale.sqrt();
        let amps = pv.phases().iter().map(|w| cis(w.to_f64()) * norm).collect();
        Ok(DenseState { n, amps })
    }

    pub fn from_hypergraph(h: &WeightedHypergraph) -> Result<Self> {
        if h.n() > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { n: h.n(), max: MAX_DENSE_QUBITS });
        }
        Self::from_phases(&synthesize_with(h, Exec::Sequential)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Apply `u` to qubit `i`.
    pub fn apply_unitary_1q(&self, i: usize, u: &Matrix2) -> Result<DenseState> {
        if i >= self.n {
            return Err(Error::VertexOutOfRange { vertex: i, n: self.n });
        }
        let dev = unitarity_deviation(u);
        if dev > 1e-10 {
            return Err(Error::NotUnitary(format!("{dev:.3e}")));
        }
        let bit = 1usize << i;
        let mut out = self.amps.clone();
        for x in 0..self.amps.len() {
            if x & bit == 0 {
                let (a0, a1) = (self.amps[x], self.amps[x | bit]);
                out[x] = u[0][0] * a0 + u[0][1] * a1;
                out[x | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(DenseState { n: self.n, amps: out })
    }

    /// Smallest `max_x |a_x - e^{i phi} b_x|`, with the phase taken from the
    /// largest-magnitude amplitude of `other`.
    pub fn distance_up_to_global_phase(&self, other: &DenseState) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let (k, _) = other
            .amps
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (k, a)| if a.norm() > best.1 { (k, a.norm()) } else { best });
        let reference = other.amps[k];
        let phase = if reference.norm() == 0.0 || self.amps[k].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            let r = self.amps[k] / reference;
            r / r.norm()
        };
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - phase * b).norm()).fold(0.0, f64::max))
    }

    pub fn equal_up_to_global_phase(&self, other: &DenseState, tol: f64) -> Result<bool> {
        Ok(self.distance_up_to_global_phase(other)? <= tol)
    }
}

fn unitarity_deviation(u: &Matrix2) -> f64 {
    let mut dev: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let dot = u[0][r].conj() * u[0][c] + u[1][r].conj() * u[1][c];
            let target = if r == c { 1.0 } else { 0.0 };
            dev = dev.max((dot - target).norm());
        }
    }
    dev
}

pub fn identity_matrix() -> Matrix2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

pub fn pauli_x_matrix() -> Matrix2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[z, o], [o, z]]
}

/// `X^alpha = ((1 + e^{i pi alpha}) I + (1 - e^{i pi alpha}) X) / 2`.
pub fn x_power_matrix(alpha: f64) -> Matrix2 {
    let e = cis(alpha);
    let one = Complex64::new(1.0, 0.0);
    let p = (one + e) * 0.5;
    let m = (one - e) * 0.5;
    [[p, m], [m, p]]
}

/// `Z^alpha = diag(1, e^{i pi alpha})`.
pub fn z_power_matrix(alpha: f64) -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::new(1.0, 0.0), z], [z, cis(alpha)]]
}

pub fn matmul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Outcome of replaying a sequence symbolically and densely side by side.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub steps: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Replays `seq` through the rewrite rules and through dense single-qubit
/// matrices, comparing after every step. Local complementation steps are
/// realised densely as `X^{1/2}` plus the Z corrections on the current
/// neighbourhood.
pub fn check_sequence(h: &WeightedHypergraph, seq: &GateSequence, mode: XRuleMode, tol: f64) -> Result<OracleReport> {
    let mut symbolic = h.clone();
    let mut dense = DenseState::from_hypergraph(h)?;
    let mut max_error: f64 = 0.0;
    for (step, g) in seq.gates().iter().enumerate() {
        let wrap = |e| Error::Step { step, source: Box::new(e) };
        let q = g.qubit;
        let next = apply_gate(&symbolic, g, mode).map_err(wrap)?;
        dense = match g.gate {
            Gate::PauliX => dense.apply_unitary_1q(q, &pauli_x_matrix()),
            Gate::XPower(a) => dense.apply_unitary_1q(q, &x_power_matrix(a.to_f64())),
            Gate::ZPower(a) => dense.apply_unitary_1q(q, &z_power_matrix(a.to_f64())),
            Gate::LocalComplement => {
                let graph = symbolic.to_graph().ok_or(Error::NotAGraphState).map_err(wrap)?;
                let mut s = dense.apply_unitary_1q(q, &x_power_matrix(0.5)).map_err(wrap)?;
                s = s.apply_unitary_1q(q, &z_power_matrix(LC_CENTER_Z_CORRECTION.to_f64())).map_err(wrap)?;
                for u in graph.neighbors(q) {
                    s = s.apply_unitary_1q(u, &z_power_matrix(LC_NEIGHBOR_Z_CORRECTION.to_f64())).map_err(wrap)?;
                }
                Ok(s)
            }
        }
        .map_err(wrap)?;
        symbolic = next;
        let err = DenseState::from_hypergraph(&symbolic)?.distance_up_to_global_phase(&dense)?;
        max_error = max_error.max(err);
    }
    Ok(OracleReport { n: h.n(), steps: seq.len(), max_error, tolerance: tol, passed: max_error <= tol })
}
