use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of bins for fidelity histograms.
pub const DEFAULT_BINS: usize = 75;

/// Normalized histogram on a fixed grid. Bins are half-open `[e_i, e_{i+1})`
/// except the last, which is closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub total_samples: usize,
}

pub fn uniform_edges(bins: usize, lo: f64, hi: f64) -> Vec<f64> {
    let width = (hi - lo) / bins as f64;
    (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect()
}

/// Equal-width histogram of `samples` over `[lo, hi]`; out-of-range samples
/// land in the boundary bins.
pub fn histogram(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("histogram of empty sample set".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("invalid range [{lo}, {hi}]")));
    }
    if samples.iter().any(|s| s.is_nan()) {
        return Err(Error::NonFinite("histogram samples".into()));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &s in samples {
        let idx = ((s - lo) / width).floor();
        let idx = if idx < 0.0 { 0 } else { (idx as usize).min(bins - 1) };
        counts[idx] += 1;
    }
    let n = samples.len() as f64;
    Ok(Histogram {
        edges: uniform_edges(bins, lo, hi),
        masses: counts.iter().map(|&c| c as f64 / n).collect(),
        total_samples: samples.len(),
    })
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn same_grid(&self, other: &Histogram) -> bool {
        self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .zip(&other.edges)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()))
    }

    pub(crate) fn check_grid(&self, other: &Histogram) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Index of the bin holding the most mass (first on ties).
    pub fn mode_bin(&self) -> usize {
        self.masses
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (i, &m)| if m > best.1 { (i, m) } else { best })
            .0
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_lands_in_upper_bin() {
        let h = histogram(&[0.5, 0.5, 0.5], 2, 0.0, 1.0).unwrap();
        assert_eq!(h.masses, vec![0.0, 1.0]);
    }

    #[test]
    fn upper_edge_is_closed() {
        let h = histogram(&[1.0], 4, 0.0, 1.0).unwrap();
        assert_eq!(h.masses, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn out_of_range_is_clamped() {
        let h = histogram(&[-3.0, 7.0], 2, 0.0, 1.0).unwrap();
        assert_eq!(h.masses, vec![0.5, 0.5]);
    }

    #[test]
    fn uniform_fill() {
        let pts: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let h = histogram(&pts, 10, 0.0, 1.0).unwrap();
        for m in &h.masses {
            assert!((m - 0.1).abs() <= 1.0 / 1000.0 + 1e-12, "{m}");
        }
        assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(h.total_samples, 1000);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(histogram(&[], 3, 0.0, 1.0).is_err());
        assert!(histogram(&[0.1], 0, 0.0, 1.0).is_err());
        assert!(histogram(&[0.1], 3, 1.0, 1.0).is_err());
        assert!(histogram(&[f64::NAN], 3, 0.0, 1.0).is_err());
    }

    #[test]
    fn edges_strictly_increasing() {
        let e = uniform_edges(75, 0.0, 1.0);
        assert_eq!(e.len(), 76);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*e.last().unwrap(), 1.0);
    }
}
