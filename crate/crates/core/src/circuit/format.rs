//! JSON circuit-spec documents.
//!
//! ```json
//! {
//!   "n_qubits": 2,
//!   "parameters": ["t0"],
//!   "gates": [
//!     {"kind": "H", "targets": [0]},
//!     {"kind": "RX", "targets": [1], "angle": {"param": "t0", "prefactor": 2.0}},
//!     {"kind": "CX", "targets": [0, 1]}
//!   ],
//!   "cost": [{"coeff": 0.5, "paulis": {"0": "Z", "1": "Z"}}]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Angle, CircuitDescriptor, Gate, GateKind, ParameterId, Pauli, PauliSum, PauliTerm};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    n_qubits: usize,
    #[serde(default)]
    parameters: Vec<String>,
    #[serde(default)]
    gates: Vec<RawGate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cost: Option<Vec<RawTerm>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGate {
    kind: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<RawAngle>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawAngle {
    Literal(f64),
    Symbol {
        param: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prefactor: Option<f64>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: f64,
    paulis: BTreeMap<usize, String>,
}

fn parse_pauli(s: &str) -> Result<Pauli> {
    match s {
        "X" | "x" => Ok(Pauli::X),
        "Y" | "y" => Ok(Pauli::Y),
        "Z" | "z" => Ok(Pauli::Z),
        other => Err(Error::InvalidObservable(format!("unknown Pauli `{other}`"))),
    }
}

/// Parses and validates a circuit-spec document. The order of `parameters`
/// defines the layout of θ.
pub fn parse_circuit_spec(text: &str) -> Result<CircuitDescriptor> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let gates = raw
        .gates
        .into_iter()
        .map(|g| {
            let kind: GateKind = g.kind.parse()?;
            let angle = g.angle.map(|a| match a {
                RawAngle::Literal(v) => Angle::Fixed(v),
                RawAngle::Symbol { param, prefactor } => Angle::Symbol {
                    param: ParameterId {
                        name: param,
                        index: usize::MAX,
                    },
                    prefactor: prefactor.unwrap_or(1.0),
                },
            });
            Ok(Gate {
                kind,
                targets: g.targets,
                angle,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let cost = raw
        .cost
        .map(|terms| {
            let terms = terms
                .into_iter()
                .map(|t| {
                    let ops = t
                        .paulis
                        .iter()
                        .map(|(&q, p)| Ok((q, parse_pauli(p)?)))
                        .collect::<Result<BTreeMap<_, _>>>()?;
                    Ok(PauliTerm { coeff: t.coeff, ops })
                })
                .collect::<Result<Vec<_>>>()?;
            PauliSum::new(terms)
        })
        .transpose()?;

    CircuitDescriptor::new(raw.n_qubits, raw.parameters, gates, cost)
}

/// Serializes a descriptor into the document format accepted by
/// [`parse_circuit_spec`].
pub fn to_spec_string(circuit: &CircuitDescriptor) -> String {
    let raw = RawSpec {
        n_qubits: circuit.n_qubits(),
        parameters: circuit.parameters().iter().map(|p| p.name.clone()).collect(),
        gates: circuit
            .gates()
            .iter()
            .map(|g| RawGate {
                kind: g.kind.name().to_string(),
                targets: g.targets.clone(),
                angle: g.angle.as_ref().map(|a| match a {
                    Angle::Fixed(v) => RawAngle::Literal(*v),
                    Angle::Symbol { param, prefactor } => RawAngle::Symbol {
                        param: param.name.clone(),
                        prefactor: (*prefactor != 1.0).then_some(*prefactor),
                    },
                }),
            })
            .collect(),
        cost: circuit.cost().map(|c| {
            c.terms()
                .iter()
                .map(|t| RawTerm {
                    coeff: t.coeff,
                    paulis: t.ops.iter().map(|(&q, p)| (q, p.to_string())).collect(),
                })
                .collect()
        }),
    };
    serde_json::to_string_pretty(&raw).expect("circuit spec serializes")
}
