use serde::Serialize;

use super::schema;
use crate::error::{Error, Result};
use crate::stats::{histogram, Histogram};
use crate::trainer::TrainingTrace;

#[derive(Debug, Clone, Serialize)]
pub struct ParameterHistograms {
    pub schema: String,
    pub bins: usize,
    pub members: usize,
    /// Pooled `(min, max)` of each parameter over all steps and members.
    pub ranges: Vec<(f64, f64)>,
    /// `histograms[t][i]`: parameter `i` across the ensemble at step `t`.
    pub histograms: Vec<Vec<Histogram>>,
}

impl ParameterHistograms {
    pub fn steps(&self) -> usize {
        self.histograms.len()
    }

    /// Long format: `step,parameter,bin_lo,bin_hi,mass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,parameter,bin_lo,bin_hi,mass\n");
        for (t, row) in self.histograms.iter().enumerate() {
            for (i, h) in row.iter().enumerate() {
                for (b, m) in h.masses.iter().enumerate() {
                    out.push_str(&format!("{t},{i},{},{},{m}\n", h.edges[b], h.edges[b + 1]));
                }
            }
        }
        out
    }
}

/// Per-step marginal histograms of every parameter across an ensemble. A
/// parameter that never moves gets the unit range centred on its value.
pub fn parameter_histogram(ensemble: &[TrainingTrace], bins: usize) -> Result<ParameterHistograms> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidArgument("ensemble needs at least 2 traces".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    let steps = ensemble[0].thetas.len();
    let m = ensemble[0].thetas.first().map_or(0, Vec::len);
    let ragged = ensemble
        .iter()
        .any(|t| t.thetas.len() != steps || t.thetas.iter().any(|th| th.len() != m));
    if ragged {
        return Err(Error::InvalidArgument("traces have unequal lengths".into()));
    }
    if steps == 0 || m == 0 {
        return Err(Error::InvalidArgument("traces are empty".into()));
    }

    let ranges: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let vals = ensemble.iter().flat_map(|t| t.thetas.iter().map(move |th| th[i]));
            let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        })
        .collect();
    let histograms = (0..steps)
        .map(|t| {
            (0..m)
                .map(|i| {
                    let vals: Vec<f64> = ensemble.iter().map(|tr| tr.thetas[t][i]).collect();
                    histogram(&vals, bins, ranges[i].0, ranges[i].1)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParameterHistograms {
        schema: schema(),
        bins,
        members: ensemble.len(),
        ranges,
        histograms,
    })
}
