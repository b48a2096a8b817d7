//! Circuit data model: gates with symbolic angles, Pauli-sum observables and
//! parameter binding.

mod builders;
mod format;
mod pauli;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use builders::{
    gnm_random_graph, hardware_efficient_ansatz, identity_ansatz, linear_chain_ansatz,
    qaoa_builder, rotation_layer_with_entanglers, CircuitBuilder, Graph,
};
pub use format::{parse_circuit_spec, to_spec_string};
pub use pauli::{Pauli, PauliSum, PauliTerm};

/// A named entry of the parameter vector θ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParameterId {
    pub name: String,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    RX,
    RY,
    RZ,
    CX,
    CZ,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CX,
        GateKind::CZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CX => "CX",
            GateKind::CZ => "CZ",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        match upper.as_str() {
            "CNOT" => Ok(GateKind::CX),
            _ => GateKind::ALL
                .iter()
                .copied()
                .find(|k| k.name() == upper)
                .ok_or_else(|| Error::UnknownGate(s.to_string())),
        }
    }
}

/// Rotation angle: a literal in radians or `prefactor * θ[param.index]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Symbol { param: ParameterId, prefactor: f64 },
}

impl Angle {
    pub fn resolve(&self, theta: &[f64]) -> f64 {
        match self {
            Angle::Fixed(a) => *a,
            Angle::Symbol { param, prefactor } => prefactor * theta[param.index],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: Option<Angle>,
}

impl Gate {
    fn check(&self, n_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} target(s), got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        if let Some(&qubit) = self.targets.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { qubit, n_qubits });
        }
        if self.kind.arity() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::InvalidGate(format!(
                "{} targets must be distinct",
                self.kind
            )));
        }
        match (&self.angle, self.kind.is_rotation()) {
            (None, true) => Err(Error::InvalidGate(format!("{} requires an angle", self.kind))),
            (Some(_), false) => Err(Error::InvalidGate(format!(
                "{} does not take an angle",
                self.kind
            ))),
            (Some(Angle::Fixed(a)), _) if !a.is_finite() => {
                Err(Error::NonFinite(format!("{} angle", self.kind)))
            }
            (Some(Angle::Symbol { prefactor, .. }), _) if !prefactor.is_finite() => {
                Err(Error::NonFinite(format!("{} prefactor", self.kind)))
            }
            _ => Ok(()),
        }
    }
}

/// A validated parameterized circuit with an optional cost observable.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDescriptor {
    n_qubits: usize,
    gates: Vec<Gate>,
    parameters: Vec<ParameterId>,
    cost: Option<PauliSum>,
}

impl CircuitDescriptor {
    /// Validates and assembles a descriptor. Parameter indices inside the
    /// gates' angles are re-derived from `parameters` by name.
    pub fn new(
        n_qubits: usize,
        parameters: Vec<String>,
        mut gates: Vec<Gate>,
        cost: Option<PauliSum>,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("n_qubits must be at least 1".into()));
        }
        let mut index_of: HashMap<&str, usize> = HashMap::new();
        for (i, name) in parameters.iter().enumerate() {
            if index_of.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateParameter(name.clone()));
            }
        }
        let mut used = vec![false; parameters.len()];
        for gate in &mut gates {
            gate.check(n_qubits)?;
            if let Some(Angle::Symbol { param, .. }) = &mut gate.angle {
                let idx = *index_of
                    .get(param.name.as_str())
                    .ok_or_else(|| Error::UndeclaredParameter(param.name.clone()))?;
                param.index = idx;
                used[idx] = true;
            }
        }
        if let Some(pos) = used.iter().position(|u| !u) {
            return Err(Error::UnusedParameter(parameters[pos].clone()));
        }
        if let Some(cost) = &cost {
            cost.check(n_qubits)?;
        }
        let parameters = parameters
            .into_iter()
            .enumerate()
            .map(|(index, name)| ParameterId { name, index })
            .collect();
        Ok(Self {
            n_qubits,
            gates,
            parameters,
            cost,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn parameters(&self) -> &[ParameterId] {
        &self.parameters
    }

    pub fn n_parameters(&self) -> usize {
        self.parameters.len()
    }

    pub fn cost(&self) -> Option<&PauliSum> {
        self.cost.as_ref()
    }

    pub fn with_cost(mut self, cost: PauliSum) -> Result<Self> {
        cost.check(self.n_qubits)?;
        self.cost = Some(cost);
        Ok(self)
    }

    pub fn require_cost(&self) -> Result<&PauliSum> {
        self.cost.as_ref().ok_or(Error::MissingCost)
    }

    /// Substitutes θ into every symbolic angle. Gate order is preserved, so
    /// `bound.ops()[i]` is the image of `self.gates()[i]`.
    pub fn bind(&self, theta: &[f64]) -> Result<BoundCircuit> {
        if theta.len() != self.parameters.len() {
            return Err(Error::ParameterCount {
                expected: self.parameters.len(),
                got: theta.len(),
            });
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFinite(format!("theta[{i}]")));
        }
        let ops = self
            .gates
            .iter()
            .map(|g| {
                let t = &g.targets;
                let angle = g.angle.as_ref().map(|a| a.resolve(theta)).unwrap_or(0.0);
                match g.kind {
                    GateKind::H => Op::H(t[0]),
                    GateKind::X => Op::X(t[0]),
                    GateKind::Y => Op::Y(t[0]),
                    GateKind::Z => Op::Z(t[0]),
                    GateKind::RX => Op::RX(t[0], angle),
                    GateKind::RY => Op::RY(t[0], angle),
                    GateKind::RZ => Op::RZ(t[0], angle),
                    GateKind::CX => Op::CX(t[0], t[1]),
                    GateKind::CZ => Op::CZ(t[0], t[1]),
                }
            })
            .collect();
        Ok(BoundCircuit {
            n_qubits: self.n_qubits,
            ops,
        })
    }
}

/// A gate with a concrete angle. Two-qubit ops are `(control, target)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    RX(usize, f64),
    RY(usize, f64),
    RZ(usize, f64),
    CX(usize, usize),
    CZ(usize, usize),
}

impl Op {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Op::H(q) | Op::X(q) | Op::Y(q) | Op::Z(q) => (q, None),
            Op::RX(q, _) | Op::RY(q, _) | Op::RZ(q, _) => (q, None),
            Op::CX(a, b) | Op::CZ(a, b) => (a, Some(b)),
        }
    }

    /// Adds `delta` to the angle of a rotation; other ops are returned as-is.
    pub fn shifted(self, delta: f64) -> Op {
        match self {
            Op::RX(q, a) => Op::RX(q, a + delta),
            Op::RY(q, a) => Op::RY(q, a + delta),
            Op::RZ(q, a) => Op::RZ(q, a + delta),
            other => other,
        }
    }
}

/// A circuit with all angles resolved, ready for simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCircuit {
    pub n_qubits: usize,
    pub ops: Vec<Op>,
}

impl BoundCircuit {
    pub fn new(n_qubits: usize, ops: Vec<Op>) -> Self {
        Self { n_qubits, ops }
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bind_zero_and_prefactor() {
        let c = CircuitBuilder::new(1).h(0).rz_param(0, "t1").build().unwrap();
        let b = c.bind(&[0.0]).unwrap();
        assert_eq!(b.ops, vec![Op::H(0), Op::RZ(0, 0.0)]);

        let c = CircuitBuilder::new(1)
            .rx_scaled(0, "t1", 2.0)
            .build()
            .unwrap();
        let b = c.bind(&[PI / 2.0]).unwrap();
        assert_eq!(b.ops, vec![Op::RX(0, PI)]);
    }

    #[test]
    fn bind_rejects_bad_theta() {
        let c = CircuitBuilder::new(1).rx_param(0, "a").build().unwrap();
        assert_eq!(
            c.bind(&[]),
            Err(Error::ParameterCount {
                expected: 1,
                got: 0
            })
        );
        assert!(matches!(c.bind(&[f64::NAN]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn gate_arity_and_angles_validated() {
        let bad = vec![Gate {
            kind: GateKind::CX,
            targets: vec![0, 0],
            angle: None,
        }];
        assert!(matches!(
            CircuitDescriptor::new(2, vec![], bad, None),
            Err(Error::InvalidGate(_))
        ));
        let bad = vec![Gate {
            kind: GateKind::H,
            targets: vec![0],
            angle: Some(Angle::Fixed(1.0)),
        }];
        assert!(matches!(
            CircuitDescriptor::new(1, vec![], bad, None),
            Err(Error::InvalidGate(_))
        ));
        let bad = vec![Gate {
            kind: GateKind::RY,
            targets: vec![3],
            angle: Some(Angle::Fixed(1.0)),
        }];
        assert_eq!(
            CircuitDescriptor::new(2, vec![], bad, None),
            Err(Error::QubitOutOfRange {
                qubit: 3,
                n_qubits: 2
            })
        );
    }

    #[test]
    fn unused_and_duplicate_parameters() {
        assert_eq!(
            CircuitDescriptor::new(1, vec!["a".into()], vec![], None),
            Err(Error::UnusedParameter("a".into()))
        );
        assert_eq!(
            CircuitDescriptor::new(1, vec!["a".into(), "a".into()], vec![], None),
            Err(Error::DuplicateParameter("a".into()))
        );
    }

    #[test]
    fn gate_kind_parsing() {
        assert_eq!("cnot".parse::<GateKind>().unwrap(), GateKind::CX);
        assert_eq!("rz".parse::<GateKind>().unwrap(), GateKind::RZ);
        assert!(matches!("U3".parse::<GateKind>(), Err(Error::UnknownGate(_))));
    }
}
