use rand::Rng;
use rayon::prelude::*;

use super::{expectation, StateVector};
use crate::circuit::{BoundCircuit, Pauli, PauliSum};
use crate::error::{Error, Result};
use crate::seeded_rng;

/// Stochastic Pauli noise: after every one- (two-) qubit gate a uniformly
/// chosen non-identity Pauli is inserted with probability `p1` (`p2`).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct NoiseModel {
    pub depolarizing_prob_1q: f64,
    pub depolarizing_prob_2q: f64,
    pub readout_flip_prob: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout: f64) -> Result<Self> {
        for (name, p) in [("1q", p1), ("2q", p2), ("readout", readout)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            depolarizing_prob_1q: p1,
            depolarizing_prob_2q: p2,
            readout_flip_prob: readout,
        })
    }

    pub fn ideal() -> Self {
        Self::default()
    }
}

const PAULIS: [Option<Pauli>; 4] = [None, Some(Pauli::X), Some(Pauli::Y), Some(Pauli::Z)];

/// One noise trajectory starting from `|0…0⟩`.
pub fn simulate_noisy(bound: &BoundCircuit, noise: &NoiseModel, seed: u64) -> Result<StateVector> {
    let mut rng = seeded_rng(seed);
    let mut state = StateVector::zero(bound.n_qubits);
    for &op in &bound.ops {
        state.apply(op);
        match op.qubits() {
            (q, None) => {
                if noise.depolarizing_prob_1q > 0.0 && rng.random::<f64>() < noise.depolarizing_prob_1q
                {
                    let p = PAULIS[rng.random_range(1..4)].expect("non-identity");
                    state.apply_pauli(q, p);
                }
            }
            (a, Some(b)) => {
                if noise.depolarizing_prob_2q > 0.0 && rng.random::<f64>() < noise.depolarizing_prob_2q
                {
                    // 15 non-identity two-qubit Paulis, index = 4·P_a + P_b.
                    let k = rng.random_range(1..16);
                    if let Some(p) = PAULIS[k / 4] {
                        state.apply_pauli(a, p);
                    }
                    if let Some(p) = PAULIS[k % 4] {
                        state.apply_pauli(b, p);
                    }
                }
            }
        }
    }
    Ok(state)
}

/// Trajectory average of `⟨O⟩`; trajectory `i` uses seed `base_seed + i`.
pub fn noisy_expectation(
    bound: &BoundCircuit,
    noise: &NoiseModel,
    obs: &PauliSum,
    trajectories: usize,
    base_seed: u64,
) -> Result<f64> {
    if trajectories == 0 {
        return Err(Error::InvalidArgument("need at least one trajectory".into()));
    }
    let values = (0..trajectories)
        .into_par_iter()
        .map(|i| {
            let s = simulate_noisy(bound, noise, base_seed.wrapping_add(i as u64))?;
            expectation(&s, obs)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / trajectories as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::simulator::simulate;

    #[test]
    fn noiseless_limit_matches_ideal() {
        let c = CircuitBuilder::new(3)
            .h(0)
            .cx(0, 1)
            .ry(2, 0.7)
            .cz(1, 2)
            .build()
            .unwrap();
        let b = c.bind(&[]).unwrap();
        assert_eq!(
            simulate_noisy(&b, &NoiseModel::ideal(), 5).unwrap(),
            simulate(&b, None).unwrap()
        );
    }

    #[test]
    fn forced_insertion_after_x() {
        let c = CircuitBuilder::new(1).x(0).build().unwrap();
        let b = c.bind(&[]).unwrap();
        let noise = NoiseModel::new(1.0, 0.0, 0.0).unwrap();
        let x_state = simulate(&b, None).unwrap();
        let mut seen = [false; 3];
        for seed in 0..64 {
            let s = simulate_noisy(&b, &noise, seed).unwrap();
            for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
                let mut expected = x_state.clone();
                expected.apply_pauli(0, p);
                if s.fidelity(&expected) > 1.0 - 1e-12 && s == expected {
                    seen[k] = true;
                }
            }
        }
        assert_eq!(seen, [true; 3]);
    }

    #[test]
    fn probabilities_validated() {
        assert!(NoiseModel::new(1.5, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(0.1, -0.1, 0.0).is_err());
    }
}
