use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{random_state, schema};
use crate::circuit::CircuitDescriptor;
use crate::error::{Error, Result};
use crate::simulator::{subsystem_purity, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglementMeasure {
    MeyerWallach,
    Scott,
}

impl std::str::FromStr for EntanglementMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "meyer-wallach" | "mw" => Ok(Self::MeyerWallach),
            "scott" => Ok(Self::Scott),
            other => Err(Error::InvalidArgument(format!("unknown entanglement measure `{other}`"))),
        }
    }
}

/// `Q` for Meyer-Wallach, `(Q_1, …, Q_⌊n/2⌋)` for Scott.
#[derive(Debug, Clone, PartialEq)]
pub enum EntanglementValue {
    Scalar(f64),
    Blocks(Vec<f64>),
}

impl EntanglementValue {
    pub fn as_slice(&self) -> &[f64] {
        match self {
            Self::Scalar(q) => std::slice::from_ref(q),
            Self::Blocks(v) => v,
        }
    }
}

impl Serialize for EntanglementValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Scalar(q) => s.serialize_f64(*q),
            Self::Blocks(v) => v.serialize(s),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntanglementReport {
    pub schema: String,
    pub measure: EntanglementMeasure,
    pub value: EntanglementValue,
    pub samples: usize,
    pub n_qubits: usize,
    pub seed: u64,
}

/// Linear entropy `1 - Tr ρ_k²` averaged over single qubits, times 2.
pub fn meyer_wallach(state: &StateVector) -> Result<f64> {
    Ok(block_entropy(state, 1)? * 2.0)
}

/// `Q_m` of a single state: `2^m/(2^m - 1)` times the mean linear entropy of
/// all size-`m` blocks.
pub fn scott(state: &StateVector, m: usize) -> Result<f64> {
    let d = (1u64 << m) as f64;
    Ok(d / (d - 1.0) * block_entropy(state, m)?)
}

/// Mean of `1 - Tr ρ_S²` over all `|S| = m`, subsets in ascending bitmask order.
fn block_entropy(state: &StateVector, m: usize) -> Result<f64> {
    let n = state.n_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument("entanglement needs at least 2 qubits".into()));
    }
    if m == 0 || m > n / 2 {
        return Err(Error::InvalidArgument(format!("block size {m} outside 1..={}", n / 2)));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        sum += 1.0 - subsystem_purity(state, &subset)?;
        count += 1;
    }
    Ok(sum / count as f64)
}

/// Ensemble average of the measure over `states`, reduced in order.
pub fn entanglement_of_states(states: &[StateVector], measure: EntanglementMeasure) -> Result<EntanglementValue> {
    if states.is_empty() {
        return Err(Error::InvalidArgument("no states".into()));
    }
    let per_state = states
        .par_iter()
        .map(|s| per_state_values(s, measure))
        .collect::<Result<Vec<_>>>()?;
    Ok(average(per_state, measure))
}

pub fn entanglement_capability(
    circuit: &CircuitDescriptor,
    samples: usize,
    measure: EntanglementMeasure,
    seed: u64,
) -> Result<EntanglementReport> {
    let n = circuit.n_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument("entanglement needs at least 2 qubits".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let per_state = (0..samples)
        .into_par_iter()
        .map(|i| per_state_values(&random_state(circuit, seed.wrapping_add(i as u64))?, measure))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntanglementReport {
        schema: schema(),
        measure,
        value: average(per_state, measure),
        samples,
        n_qubits: n,
        seed,
    })
}

fn per_state_values(state: &StateVector, measure: EntanglementMeasure) -> Result<Vec<f64>> {
    match measure {
        EntanglementMeasure::MeyerWallach => Ok(vec![meyer_wallach(state)?]),
        EntanglementMeasure::Scott => (1..=state.n_qubits() / 2).map(|m| scott(state, m)).collect(),
    }
}

fn average(per_state: Vec<Vec<f64>>, measure: EntanglementMeasure) -> EntanglementValue {
    let s = per_state.len() as f64;
    let mut acc = vec![0.0; per_state[0].len()];
    for v in &per_state {
        acc.iter_mut().zip(v).for_each(|(a, x)| *a += x);
    }
    acc.iter_mut().for_each(|a| *a /= s);
    match measure {
        EntanglementMeasure::MeyerWallach => EntanglementValue::Scalar(acc[0]),
        EntanglementMeasure::Scott => EntanglementValue::Blocks(acc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn m_z() -> CircuitDescriptor {
        CircuitBuilder::new(4)
            .rx_param(0, "a")
            .rz_param(0, "b")
            .rx_param(2, "c")
            .rz_param(2, "d")
            .cx(0, 1)
            .cx(2, 3)
            .build()
            .unwrap()
    }

    #[test]
    fn bell_is_maximal() {
        let c = CircuitBuilder::new(2).h(0).cx(0, 1).build().unwrap();
        let r = entanglement_capability(&c, 3, EntanglementMeasure::MeyerWallach, 0).unwrap();
        assert!((r.value.as_slice()[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_circuit_is_unentangled() {
        let c = CircuitBuilder::new(3)
            .rx_param(0, "a")
            .ry_param(1, "b")
            .rz_param(2, "c")
            .h(2)
            .build()
            .unwrap();
        for measure in [EntanglementMeasure::MeyerWallach, EntanglementMeasure::Scott] {
            let r = entanglement_capability(&c, 20, measure, 4).unwrap();
            assert!(r.value.as_slice().iter().all(|q| q.abs() < 1e-9));
        }
    }

    #[test]
    fn m_z_circuit_values() {
        // Each pair (0,1), (2,3) is cos(a/2)|00⟩ - i sin(a/2)|11⟩ up to phases,
        // so Tr ρ_k² = 1 - sin²a/2 and E[sin² a] = 1/2 gives MW = 1/2.
        let mw = entanglement_capability(&m_z(), 1000, EntanglementMeasure::MeyerWallach, 0).unwrap();
        assert!((mw.value.as_slice()[0] - 0.501).abs() < 0.03);
        let sc = entanglement_capability(&m_z(), 1000, EntanglementMeasure::Scott, 0).unwrap();
        let q = sc.value.as_slice();
        assert_eq!(q.len(), 2);
        assert!((q[0] - 0.498).abs() < 0.03 && (q[1] - 0.387).abs() < 0.03, "{q:?}");
    }

    #[test]
    fn meyer_wallach_matches_first_scott_block() {
        let mw = entanglement_capability(&m_z(), 50, EntanglementMeasure::MeyerWallach, 2).unwrap();
        let sc = entanglement_capability(&m_z(), 50, EntanglementMeasure::Scott, 2).unwrap();
        assert!((mw.value.as_slice()[0] - sc.value.as_slice()[0]).abs() < 1e-12);
    }

    #[test]
    fn one_qubit_is_rejected() {
        let c = CircuitBuilder::new(1).rx_param(0, "a").build().unwrap();
        assert!(entanglement_capability(&c, 10, EntanglementMeasure::Scott, 0).is_err());
    }

    #[test]
    fn serializes_scalar_and_vector() {
        assert_eq!(serde_json::to_string(&EntanglementValue::Scalar(0.5)).unwrap(), "0.5");
        assert_eq!(
            serde_json::to_string(&EntanglementValue::Blocks(vec![0.5, 0.25])).unwrap(),
            "[0.5,0.25]"
        );
        assert_eq!(serde_json::to_string(&EntanglementMeasure::MeyerWallach).unwrap(), "\"meyer-wallach\"");
    }
}
