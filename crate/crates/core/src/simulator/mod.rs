//! Statevector simulation, Pauli expectations, shot sampling and
//! stochastic Pauli noise.
//!
//! Basis states are indexed with qubit 0 as the most significant bit, so on
//! three qubits `|q0 q1 q2⟩ = |1 0 0⟩` is amplitude index 4.

mod density;
mod noise;
mod sampling;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{BoundCircuit, Op, Pauli, PauliSum, PauliTerm};
use crate::error::{Error, Result};

pub use density::{reduced_density_matrix, subsystem_purity, DensityMatrix};
pub use noise::{noisy_expectation, simulate_noisy, NoiseModel};
pub use sampling::{apply_readout_noise, sample, ShotCounts, DEFAULT_SHOTS};

const NORM_TOL: f64 = 1e-10;

/// Pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps amplitudes, checking length `2^n` and unit norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let s = Self {
            n_qubits,
            amplitudes,
        };
        let norm = s.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "state is not normalized (|ψ|² = {norm})"
            )));
        }
        Ok(s)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability of measuring `qubit` in `|0⟩`.
    pub fn prob_zero(&self, qubit: usize) -> f64 {
        let mask = self.mask(qubit);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies `[[m00, m01], [m10, m11]]` to `qubit`.
    pub fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let stride = self.mask(qubit);
        let dim = self.amplitudes.len();
        for base in (0..dim).step_by(stride << 1) {
            for i in base..base + stride {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i + stride];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_diagonal(&mut self, qubit: usize, d0: Complex64, d1: Complex64) {
        let mask = self.mask(qubit);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & mask == 0 { d0 } else { d1 };
        }
    }

    fn apply_x(&mut self, qubit: usize) {
        let stride = self.mask(qubit);
        let dim = self.amplitudes.len();
        for base in (0..dim).step_by(stride << 1) {
            for i in base..base + stride {
                self.amplitudes.swap(i, i + stride);
            }
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cmask = self.mask(control);
        let tmask = self.mask(target);
        for i in 0..self.amplitudes.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amplitudes.swap(i, i | tmask);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let both = self.mask(a) | self.mask(b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & both == both {
                *amp = -*amp;
            }
        }
    }

    pub fn apply(&mut self, op: Op) {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match op {
            Op::H(q) => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_single(q, [[h, h], [h, -h]]);
            }
            Op::X(q) => self.apply_x(q),
            Op::Y(q) => {
                let zero = Complex64::new(0.0, 0.0);
                self.apply_single(q, [[zero, -i], [i, zero]]);
            }
            Op::Z(q) => self.apply_diagonal(q, one, -one),
            Op::RX(q, a) => {
                let c = Complex64::new((a / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(a / 2.0).sin());
                self.apply_single(q, [[c, s], [s, c]]);
            }
            Op::RY(q, a) => {
                let c = Complex64::new((a / 2.0).cos(), 0.0);
                let s = Complex64::new((a / 2.0).sin(), 0.0);
                self.apply_single(q, [[c, -s], [s, c]]);
            }
            Op::RZ(q, a) => {
                let d0 = Complex64::from_polar(1.0, -a / 2.0);
                let d1 = Complex64::from_polar(1.0, a / 2.0);
                self.apply_diagonal(q, d0, d1);
            }
            Op::CX(c, t) => self.apply_cx(c, t),
            Op::CZ(a, b) => self.apply_cz(a, b),
        }
    }

    pub fn apply_pauli(&mut self, qubit: usize, p: Pauli) {
        match p {
            Pauli::X => self.apply(Op::X(qubit)),
            Pauli::Y => self.apply(Op::Y(qubit)),
            Pauli::Z => self.apply(Op::Z(qubit)),
        }
    }

    /// `⟨ψ|P|ψ⟩` for one weighted Pauli string.
    fn term_expectation(&self, term: &PauliTerm) -> f64 {
        let mut flip = 0usize;
        let mut phase_mask = 0usize;
        let mut n_y = 0u32;
        for (&q, &p) in &term.ops {
            let m = self.mask(q);
            match p {
                Pauli::X => flip |= m,
                Pauli::Y => {
                    flip |= m;
                    phase_mask |= m;
                    n_y += 1;
                }
                Pauli::Z => phase_mask |= m,
            }
        }
        // P|i⟩ = i^{n_y} (-1)^{popcount(i & phase_mask)} |i ^ flip⟩
        let global = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in self.amplitudes.iter().enumerate() {
            let v = self.amplitudes[i ^ flip].conj() * a;
            if (i & phase_mask).count_ones().is_multiple_of(2) {
                acc += v;
            } else {
                acc -= v;
            }
        }
        term.coeff * (global * acc).re
    }
}

/// Evolves `initial` (default `|0…0⟩`) through the bound circuit.
pub fn simulate(bound: &BoundCircuit, initial: Option<&StateVector>) -> Result<StateVector> {
    let mut state = match initial {
        Some(s) if s.n_qubits != bound.n_qubits => {
            return Err(Error::QubitMismatch {
                expected: bound.n_qubits,
                got: s.n_qubits,
            })
        }
        Some(s) => {
            if (s.norm_sqr() - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidArgument("initial state is not normalized".into()));
            }
            s.clone()
        }
        None => StateVector::zero(bound.n_qubits),
    };
    for &op in &bound.ops {
        state.apply(op);
    }
    Ok(state)
}

/// `⟨ψ|O|ψ⟩` for a Pauli-sum observable.
pub fn expectation(state: &StateVector, obs: &PauliSum) -> Result<f64> {
    if let Some(q) = obs.max_qubit() {
        if q >= state.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: state.n_qubits,
            });
        }
    }
    Ok(obs.terms().iter().map(|t| state.term_expectation(t)).sum())
}
