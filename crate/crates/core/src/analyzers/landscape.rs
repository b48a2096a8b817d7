use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{schema, symmetric_axis};
use crate::circuit::{CircuitDescriptor, Graph};
use crate::error::{Error, Result};
use crate::projection::{pca, PointCloud, SubspaceBasis};
use crate::simulator::{expectation, sample, simulate};
use crate::trainer::TrainingTrace;

type ScoreFn = dyn Fn(&[bool]) -> f64 + Send + Sync;

/// Named rule scoring one measured bitstring (`true` = 1, qubit 0 first).
#[derive(Clone)]
pub struct Scorer {
    name: String,
    f: Arc<ScoreFn>,
}

impl Scorer {
    pub fn new(name: impl Into<String>, f: impl Fn(&[bool]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn score(&self, bits: &[bool]) -> f64 {
        (self.f)(bits)
    }
}

impl fmt::Debug for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scorer").field("name", &self.name).finish()
    }
}

/// What a landscape node evaluates.
#[derive(Debug, Clone)]
pub enum MetricSpec {
    /// Exact `⟨O⟩` of the circuit's cost.
    Expectation,
    /// Mean score over `shots` sampled bitstrings.
    FromSamples { scorer: Scorer, shots: usize },
}

impl MetricSpec {
    pub fn from_samples(scorer: Scorer, shots: usize) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        Ok(Self::FromSamples { scorer, shots })
    }

    pub fn label(&self) -> String {
        match self {
            Self::Expectation => "expectation".into(),
            Self::FromSamples { scorer, shots } => format!("{}@{shots}", scorer.name()),
        }
    }

    /// Evaluates the metric at `theta`; `seed` drives shot sampling only.
    pub fn evaluate(&self, circuit: &CircuitDescriptor, theta: &[f64], seed: u64) -> Result<f64> {
        let state = simulate(&circuit.bind(theta)?, None)?;
        match self {
            Self::Expectation => expectation(&state, circuit.require_cost()?),
            Self::FromSamples { scorer, shots } => {
                if *shots == 0 {
                    return Err(Error::InvalidArgument("shots must be at least 1".into()));
                }
                Ok(sample(&state, *shots, seed)?.mean_score(|b| scorer.score(b)))
            }
        }
    }
}

/// Mean cut size of sampled bitstrings, qubit `i` labelling node `i`.
pub fn max_cut_metric(graph: &Graph, shots: usize) -> Result<MetricSpec> {
    let g = graph.clone();
    MetricSpec::from_samples(Scorer::new("mean-cut", move |bits| g.cut_size(bits) as f64), shots)
}

/// Source of the two slice directions.
#[derive(Debug, Clone, Copy)]
pub enum BasisMode<'a> {
    /// Top two principal axes of the pooled trace parameters.
    Pca(&'a [TrainingTrace]),
    /// Orthonormalized Gaussian pair.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandscapeOptions {
    pub points: usize,
    pub range: f64,
    pub seed: u64,
}

impl Default for LandscapeOptions {
    fn default() -> Self {
        Self {
            points: 21,
            range: std::f64::consts::PI,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LandscapeGrid {
    pub schema: String,
    pub metric: String,
    pub basis: SubspaceBasis,
    /// Coordinates along each axis; node `(i, j)` sits at `(axis[i], axis[j])`.
    pub axis: Vec<f64>,
    /// `values[i][j]` at `θ* + axis[i]·Φ₀ + axis[j]·Φ₁`.
    pub values: Vec<Vec<f64>>,
    pub center_value: f64,
    pub points: usize,
    pub range: f64,
    pub seed: u64,
}

impl LandscapeGrid {
    pub fn min_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Long format: `phi0,phi1,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi0,phi1,value\n");
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", self.axis[i], self.axis[j], v));
            }
        }
        out
    }
}

/// Metric over the 2-D slice through `theta_star`. Node `(i, j)` uses seed
/// `seed + i·points + j`; the separate center evaluation uses `seed + points²`.
pub fn loss_landscape(
    circuit: &CircuitDescriptor,
    theta_star: &[f64],
    basis_mode: BasisMode<'_>,
    metric: &MetricSpec,
    options: &LandscapeOptions,
) -> Result<LandscapeGrid> {
    let m = circuit.n_parameters();
    if theta_star.len() != m {
        return Err(Error::ParameterCount {
            expected: m,
            got: theta_star.len(),
        });
    }
    if m == 0 {
        return Err(Error::InvalidArgument("landscape needs at least one parameter".into()));
    }
    if options.points < 2 {
        return Err(Error::InvalidArgument("points must be at least 2".into()));
    }
    if !(options.range > 0.0 && options.range.is_finite()) {
        return Err(Error::InvalidArgument("range must be positive".into()));
    }
    let basis = match basis_mode {
        BasisMode::Random => SubspaceBasis::random(theta_star.to_vec(), options.seed)?,
        BasisMode::Pca(traces) => {
            if traces.is_empty() {
                return Err(Error::InvalidArgument("PCA basis needs a training trace".into()));
            }
            let pts: Vec<Vec<f64>> = traces.iter().flat_map(|t| t.thetas.iter().cloned()).collect();
            if pts.iter().any(|p| p.len() != m) {
                return Err(Error::InvalidArgument("trace does not match the circuit".into()));
            }
            let fit = pca(&PointCloud::new(pts)?, 2)?;
            SubspaceBasis::new(theta_star.to_vec(), [fit.axes[0].clone(), fit.axes[1].clone()])?
        }
    };
    evaluate_grid(circuit, basis, metric, options)
}

pub(crate) fn evaluate_grid(
    circuit: &CircuitDescriptor,
    basis: SubspaceBasis,
    metric: &MetricSpec,
    options: &LandscapeOptions,
) -> Result<LandscapeGrid> {
    let p = options.points;
    let axis = symmetric_axis(p, options.range);
    let flat = (0..p * p)
        .into_par_iter()
        .map(|node| {
            let theta = basis.lift([axis[node / p], axis[node % p]]);
            metric.evaluate(circuit, &theta, options.seed.wrapping_add(node as u64))
        })
        .collect::<Result<Vec<f64>>>()?;
    if let Some(pos) = flat.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("landscape node {pos}")));
    }
    let center_value = metric.evaluate(circuit, &basis.origin, options.seed.wrapping_add((p * p) as u64))?;
    Ok(LandscapeGrid {
        schema: schema(),
        metric: metric.label(),
        basis,
        values: flat.chunks(p).map(<[f64]>::to_vec).collect(),
        axis,
        center_value,
        points: p,
        range: options.range,
        seed: options.seed,
    })
}
