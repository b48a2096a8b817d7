use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::{schema, symmetric_axis};
use crate::circuit::{Angle, CircuitDescriptor};
use crate::error::{Error, Result};
use crate::simulator::{simulate, StateVector};
use crate::trainer::shift_derivative;

/// Largest spectator quadrature the scan will enumerate per grid node.
const MAX_SPECTATOR_NODES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    /// `1 - p(0…0)`.
    Global,
    /// `1 - (1/n) Σ_j p(qubit j = 0)`.
    Local,
}

impl CostKind {
    pub fn evaluate(self, state: &StateVector) -> f64 {
        match self {
            CostKind::Global => 1.0 - state.amplitudes()[0].norm_sqr(),
            CostKind::Local => {
                let n = state.n_qubits();
                1.0 - (0..n).map(|q| state.prob_zero(q)).sum::<f64>() / n as f64
            }
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(Self::Global),
            "local" => Ok(Self::Local),
            other => Err(Error::InvalidArgument(format!("unknown cost kind `{other}`"))),
        }
    }
}

/// Treatment of parameters other than the two scanned ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Spectators {
    /// Average over each spectator angle uniformly on `[0, 2π)`, using an
    /// equispaced rule that is exact for integer prefactors.
    Marginalize,
    /// Hold spectators `θ_3, θ_4, …` at these values.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, Serialize)]
pub struct PlateauScan {
    pub schema: String,
    pub cost_kind: CostKind,
    pub n_qubits: usize,
    /// Shared `θ_1` / `θ_2` axis over `[-π, π]`.
    pub axis: Vec<f64>,
    /// `loss[i][j]` at `θ_1 = axis[i]`, `θ_2 = axis[j]`.
    pub loss: Vec<Vec<f64>>,
    /// `∂C/∂θ_2` on the same grid.
    pub gradient: Vec<Vec<f64>>,
    pub mean_abs_gradient: f64,
    pub spectator_nodes: usize,
}

impl PlateauScan {
    /// Long format: `theta1,theta2,loss,gradient`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta1,theta2,loss,gradient\n");
        for (i, row) in self.loss.iter().enumerate() {
            for (j, l) in row.iter().enumerate() {
                out.push_str(&format!("{},{},{},{}\n", self.axis[i], self.axis[j], l, self.gradient[i][j]));
            }
        }
        out
    }
}

/// Loss and `θ_2` gradient of a state-preparation cost over a `points × points`
/// grid of the first two circuit parameters.
pub fn barren_plateau_scan(
    circuit: &CircuitDescriptor,
    cost_kind: CostKind,
    points: usize,
    spectators: &Spectators,
) -> Result<PlateauScan> {
    let m = circuit.n_parameters();
    if m < 2 {
        return Err(Error::InvalidArgument("scan needs at least two parameters".into()));
    }
    if points < 2 {
        return Err(Error::InvalidArgument("points must be at least 2".into()));
    }
    let configs = spectator_configs(circuit, spectators)?;
    let axis = symmetric_axis(points, PI);
    let weight = 1.0 / configs.len() as f64;

    let nodes = (0..points * points)
        .into_par_iter()
        .map(|node| {
            let mut theta = vec![0.0; m];
            theta[0] = axis[node / points];
            theta[1] = axis[node % points];
            let (mut loss, mut grad) = (0.0, 0.0);
            for rest in &configs {
                theta[2..].copy_from_slice(rest);
                let state = simulate(&circuit.bind(&theta)?, None)?;
                loss += weight * cost_kind.evaluate(&state);
                grad += weight * shift_derivative(circuit, &theta, 1, |s| cost_kind.evaluate(s))?;
            }
            Ok((loss, grad))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;

    let loss: Vec<Vec<f64>> = nodes.chunks(points).map(|r| r.iter().map(|n| n.0).collect()).collect();
    let gradient: Vec<Vec<f64>> = nodes.chunks(points).map(|r| r.iter().map(|n| n.1).collect()).collect();
    let mean_abs_gradient = nodes.iter().map(|n| n.1.abs()).sum::<f64>() / nodes.len() as f64;
    Ok(PlateauScan {
        schema: schema(),
        cost_kind,
        n_qubits: circuit.n_qubits(),
        axis,
        loss,
        gradient,
        mean_abs_gradient,
        spectator_nodes: configs.len(),
    })
}

/// Spectator assignments with equal weights. A parameter whose occurrences
/// have prefactors summing to `D` in magnitude makes the cost a trigonometric
/// polynomial of degree `D`, which `⌈D⌉ + 1` equispaced nodes average exactly.
fn spectator_configs(circuit: &CircuitDescriptor, spectators: &Spectators) -> Result<Vec<Vec<f64>>> {
    let m = circuit.n_parameters();
    match spectators {
        Spectators::Fixed(v) => {
            if v.len() != m - 2 {
                return Err(Error::ParameterCount {
                    expected: m - 2,
                    got: v.len(),
                });
            }
            Ok(vec![v.clone()])
        }
        Spectators::Marginalize => {
            let mut degree = vec![0.0f64; m];
            for gate in circuit.gates() {
                if let Some(Angle::Symbol { param, prefactor }) = &gate.angle {
                    degree[param.index] += prefactor.abs();
                }
            }
            let nodes: Vec<usize> = degree[2..].iter().map(|d| d.ceil() as usize + 1).collect();
            let total = nodes.iter().try_fold(1usize, |acc, &q| acc.checked_mul(q));
            match total {
                Some(t) if t <= MAX_SPECTATOR_NODES => {}
                _ => return Err(Error::InvalidArgument("too many spectator parameters to marginalize".into())),
            }
            let mut configs = vec![Vec::new()];
            for &q in &nodes {
                configs = configs
                    .into_iter()
                    .flat_map(|c| {
                        (0..q).map(move |k| {
                            let mut c = c.clone();
                            c.push(TAU * k as f64 / q as f64);
                            c
                        })
                    })
                    .collect();
            }
            Ok(configs)
        }
    }
}
