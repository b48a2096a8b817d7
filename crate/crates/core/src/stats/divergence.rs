use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::Histogram;
use crate::error::{Error, Result};

/// Additive smoothing applied to both distributions before taking logs.
const SMOOTHING: f64 = 1e-12;

fn smooth(masses: &[f64]) -> Vec<f64> {
    let z = 1.0 + SMOOTHING * masses.len() as f64;
    masses.iter().map(|m| (m + SMOOTHING) / z).collect()
}

fn kl_masses(p: &[f64], q: &[f64]) -> f64 {
    let (p, q) = (smooth(p), smooth(q));
    p.iter()
        .zip(&q)
        .map(|(pi, qi)| pi * (pi / qi).ln())
        .sum::<f64>()
        .max(0.0)
}

/// `Σ p_i ln(p_i / q_i)` with ε-smoothing; natural log.
pub fn kl_divergence(p: &Histogram, q: &Histogram) -> Result<f64> {
    p.check_grid(q)?;
    Ok(kl_masses(&p.masses, &q.masses))
}

/// Jensen-Shannon distance: square root of the JS divergence, in
/// `[0, √ln 2]`.
pub fn js_distance(p: &Histogram, q: &Histogram) -> Result<f64> {
    p.check_grid(q)?;
    let m: Vec<f64> = p.masses.iter().zip(&q.masses).map(|(a, b)| 0.5 * (a + b)).collect();
    let js = 0.5 * kl_masses(&p.masses, &m) + 0.5 * kl_masses(&q.masses, &m);
    Ok(js.max(0.0).sqrt())
}

/// Divergence used to compare an empirical histogram against a reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceMeasure {
    Kld,
    Jsd,
}

impl DivergenceMeasure {
    pub fn compute(self, p: &Histogram, q: &Histogram) -> Result<f64> {
        match self {
            DivergenceMeasure::Kld => kl_divergence(p, q),
            DivergenceMeasure::Jsd => js_distance(p, q),
        }
    }
}

impl fmt::Display for DivergenceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivergenceMeasure::Kld => "kld",
            DivergenceMeasure::Jsd => "jsd",
        })
    }
}

impl FromStr for DivergenceMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kld" | "kl" => Ok(DivergenceMeasure::Kld),
            "jsd" | "js" => Ok(DivergenceMeasure::Jsd),
            other => Err(Error::InvalidArgument(format!("unknown divergence `{other}`"))),
        }
    }
}

/// One-sample Kolmogorov-Smirnov statistic against `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
