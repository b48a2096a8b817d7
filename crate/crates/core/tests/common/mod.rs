#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use pqc_lens::circuit::{CircuitBuilder, CircuitDescriptor, Op};
use rand::Rng;

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random circuit over the full gate set. Rotations are parameterized with
/// probability 1/2 (integer prefactor in {1, 2, -1}), fixed otherwise.
pub fn random_circuit(rng: &mut impl Rng, n: usize, gates: usize) -> CircuitDescriptor {
    let mut b = CircuitBuilder::new(n);
    let mut next = 0;
    for _ in 0..gates {
        let q = rng.random_range(0..n);
        let kind = if n == 1 { rng.random_range(0..7) } else { rng.random_range(0..9) };
        b = match kind {
            0 => b.h(q),
            1 => b.x(q),
            2 => b.y(q),
            3 => b.z(q),
            4..=6 => {
                if rng.random_bool(0.5) {
                    let name = format!("p{next}");
                    next += 1;
                    let s = [1.0, 2.0, -1.0][rng.random_range(0..3)];
                    match kind {
                        4 => b.rx_scaled(q, &name, s),
                        5 => b.ry_scaled(q, &name, s),
                        _ => b.rz_scaled(q, &name, s),
                    }
                } else {
                    let a = rng.random_range(-4.0..4.0);
                    match kind {
                        4 => b.rx(q, a),
                        5 => b.ry(q, a),
                        _ => b.rz(q, a),
                    }
                }
            }
            7 => {
                let t = (q + rng.random_range(1..n)) % n;
                b.cx(q, t)
            }
            _ => {
                let t = (q + rng.random_range(1..n)) % n;
                b.cz(q, t)
            }
        };
    }
    b.build().expect("valid random circuit")
}

fn single_matrix(op: Op) -> Option<(usize, [[Complex64; 2]; 2])> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Some(match op {
        Op::H(q) => (q, [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]]),
        Op::X(q) => (q, [[z, one], [one, z]]),
        Op::Y(q) => (q, [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]]),
        Op::Z(q) => (q, [[one, z], [z, -one]]),
        Op::RX(q, a) => {
            let (co, si) = ((a / 2.0).cos(), (a / 2.0).sin());
            (q, [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]])
        }
        Op::RY(q, a) => {
            let (co, si) = ((a / 2.0).cos(), (a / 2.0).sin());
            (q, [[c(co, 0.0), c(-si, 0.0)], [c(si, 0.0), c(co, 0.0)]])
        }
        Op::RZ(q, a) => (q, [[Complex64::from_polar(1.0, -a / 2.0), z], [z, Complex64::from_polar(1.0, a / 2.0)]]),
        _ => return None,
    })
}

/// Full `2^n × 2^n` unitary of one op, qubit 0 most significant, built from
/// Kronecker products (one-qubit ops) or basis permutations (two-qubit ops).
pub fn dense_op(op: Op, n: usize) -> Mat {
    if let Some((q, m)) = single_matrix(op) {
        let u = Mat::from_fn(2, 2, |i, j| m[i][j]);
        let mut full = Mat::identity(1, 1);
        for k in 0..n {
            let f = if k == q { u.clone() } else { Mat::identity(2, 2) };
            full = full.kronecker(&f);
        }
        return full;
    }
    let d = 1 << n;
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
    let mut full = Mat::zeros(d, d);
    for i in 0..d {
        match op {
            Op::CX(ctl, t) => {
                let j = if bit(i, ctl) == 1 { i ^ (1 << (n - 1 - t)) } else { i };
                full[(j, i)] = c(1.0, 0.0);
            }
            Op::CZ(a, b) => {
                full[(i, i)] = c(if bit(i, a) & bit(i, b) == 1 { -1.0 } else { 1.0 }, 0.0);
            }
            _ => unreachable!(),
        }
    }
    full
}

pub fn dense_state(ops: &[Op], n: usize) -> Vec<Complex64> {
    let mut u = Mat::identity(1 << n, 1 << n);
    for &op in ops {
        u = dense_op(op, n) * u;
    }
    u.column(0).iter().copied().collect()
}

/// `Tr_B |ψ⟩⟨ψ|`: permute the kept qubits to the front, then sum
/// `(I ⊗ ⟨b|) ρ (I ⊗ |b⟩)` over basis states `b` of the rest.
pub fn kron_partial_trace(psi: &[Complex64], n: usize, keep: &[usize]) -> Mat {
    let d = 1 << n;
    let mut order: Vec<usize> = keep.to_vec();
    order.sort_unstable();
    order.extend((0..n).filter(|q| !keep.contains(q)));
    // Permutation sending |i⟩ to the index whose bit k is bit order[k] of i.
    let mut perm = Mat::zeros(d, d);
    for i in 0..d {
        let mut j = 0;
        for &q in &order {
            j = (j << 1) | ((i >> (n - 1 - q)) & 1);
        }
        perm[(j, i)] = c(1.0, 0.0);
    }
    let v = Mat::from_column_slice(d, 1, psi);
    let rho = &perm * (&v * v.adjoint()) * perm.transpose();
    let (da, db) = (1 << keep.len(), 1 << (n - keep.len()));
    let mut out = Mat::zeros(da, da);
    for b in 0..db {
        let mut e = Mat::zeros(db, 1);
        e[(b, 0)] = c(1.0, 0.0);
        let proj = Mat::identity(da, da).kronecker(&e);
        out += proj.adjoint() * &rho * &proj;
    }
    out
}

/// Random Pauli sum with 1..=4 terms and coefficients in [-1, 1].
pub fn random_cost(rng: &mut impl Rng, n: usize) -> pqc_lens::PauliSum {
    use pqc_lens::{Pauli, PauliTerm};
    let terms = (0..rng.random_range(1..=4))
        .map(|_| {
            let k = rng.random_range(1..=n);
            let ops: Vec<(usize, Pauli)> = (0..k)
                .map(|_| (rng.random_range(0..n), [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)]))
                .collect();
            PauliTerm::new(rng.random_range(-1.0..1.0), ops)
        })
        .collect();
    pqc_lens::PauliSum::new(terms).expect("valid random cost")
}
