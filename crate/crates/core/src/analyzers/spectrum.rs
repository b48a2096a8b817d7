use rayon::prelude::*;
use serde::Serialize;

use super::{random_state, schema};
use crate::circuit::CircuitDescriptor;
use crate::error::{Error, Result};
use crate::simulator::reduced_density_matrix;
use crate::stats::{histogram, mp_reference_on_grid, xi_from_eigenvalues, DivergenceMeasure, Histogram};

/// Offset separating the Haar reference seeds from the circuit draw seeds.
const REFERENCE_SEED_OFFSET: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumOptions {
    pub samples: usize,
    pub measure: DivergenceMeasure,
    /// `ξ` values above this are clamped to it.
    pub cutoff: f64,
    pub bins: usize,
    pub reference_samples: usize,
    pub seed: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            samples: 100,
            measure: DivergenceMeasure::Kld,
            cutoff: crate::stats::XI_CUTOFF,
            bins: crate::stats::XI_BINS,
            reference_samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub schema: String,
    pub measure: DivergenceMeasure,
    /// Divergence of the pooled `ξ` distribution from the Haar reference.
    pub esd: f64,
    /// Per-rank mean of `ξ`, non-increasing.
    pub mean_xi: Vec<f64>,
    pub reference_mean_xi: Vec<f64>,
    pub cutoff: f64,
    pub n_qubits: usize,
    pub subsystem_qubits: usize,
    pub samples: usize,
    pub reference_samples: usize,
    pub seed: u64,
    pub histogram: Histogram,
    pub reference_histogram: Histogram,
}

/// Entanglement spectrum of the first `⌈n/2⌉` qubits, compared against
/// Haar-random states of the same size.
pub fn entanglement_spectrum(circuit: &CircuitDescriptor, options: &SpectrumOptions) -> Result<SpectrumReport> {
    let n = circuit.n_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument("entanglement spectrum needs at least 2 qubits".into()));
    }
    if options.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let cutoff = options.cutoff.abs();
    let k = n.div_ceil(2);
    let keep: Vec<usize> = (0..k).collect();
    let spectra = (0..options.samples)
        .into_par_iter()
        .map(|i| {
            let psi = random_state(circuit, options.seed.wrapping_add(i as u64))?;
            let ev = reduced_density_matrix(&psi, &keep)?.eigenvalues();
            Ok(xi_from_eigenvalues(&ev, cutoff))
        })
        .collect::<Result<Vec<_>>>()?;

    let d = 1usize << k;
    let mut mean_xi = vec![0.0; d];
    let mut pooled = Vec::with_capacity(d * spectra.len());
    for xi in &spectra {
        mean_xi.iter_mut().zip(xi).for_each(|(m, x)| *m += x);
        pooled.extend_from_slice(xi);
    }
    mean_xi.iter_mut().for_each(|m| *m /= spectra.len() as f64);

    let hist = histogram(&pooled, options.bins, 0.0, cutoff)?;
    let reference = mp_reference_on_grid(
        n,
        k,
        options.reference_samples,
        options.seed.wrapping_add(REFERENCE_SEED_OFFSET),
        cutoff,
        options.bins,
    )?;
    let esd = options.measure.compute(&hist, &reference.histogram)?;
    Ok(SpectrumReport {
        schema: schema(),
        measure: options.measure,
        esd,
        mean_xi,
        reference_mean_xi: reference.mean_xi,
        cutoff,
        n_qubits: n,
        subsystem_qubits: k,
        samples: options.samples,
        reference_samples: options.reference_samples,
        seed: options.seed,
        histogram: hist,
        reference_histogram: reference.histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{linear_chain_ansatz, CircuitBuilder};

    fn opts(samples: usize) -> SpectrumOptions {
        SpectrumOptions {
            samples,
            reference_samples: 200,
            ..SpectrumOptions::default()
        }
    }

    #[test]
    fn bell_spectrum() {
        let c = CircuitBuilder::new(2).h(0).cx(0, 1).build().unwrap();
        let r = entanglement_spectrum(&c, &opts(4)).unwrap();
        let ln2 = 2f64.ln();
        assert!(r.mean_xi.iter().all(|x| (x - ln2).abs() < 1e-9), "{:?}", r.mean_xi);
        assert!(r.esd > 0.0);
    }

    #[test]
    fn product_spectrum() {
        let c = CircuitBuilder::new(3).rx_param(0, "a").ry_param(2, "b").build().unwrap();
        let r = entanglement_spectrum(&c, &opts(5)).unwrap();
        assert_eq!(r.subsystem_qubits, 2);
        assert!((r.mean_xi[3]).abs() < 1e-9);
        assert!(r.mean_xi[..3].iter().all(|&x| x == 30.0));
    }

    #[test]
    fn profile_is_non_increasing() {
        let c = linear_chain_ansatz(5, 2).unwrap();
        let r = entanglement_spectrum(&c, &opts(20)).unwrap();
        assert!(r.mean_xi.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.histogram.same_grid(&r.reference_histogram));
    }

    #[test]
    fn eigenvalues_sum_to_one_before_clamping() {
        let c = linear_chain_ansatz(4, 2).unwrap();
        for seed in 0..10 {
            let psi = super::random_state(&c, seed).unwrap();
            let ev = reduced_density_matrix(&psi, &[0, 1]).unwrap().eigenvalues();
            let xi: Vec<f64> = ev.iter().filter(|&&l| l > 0.0).map(|l| -l.ln()).collect();
            let total: f64 = xi.iter().map(|x| (-x).exp()).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_cutoff_means_magnitude() {
        let c = CircuitBuilder::new(2).h(0).cx(0, 1).build().unwrap();
        let mut o = opts(2);
        o.cutoff = -30.0;
        assert_eq!(entanglement_spectrum(&c, &o).unwrap().cutoff, 30.0);
    }

    #[test]
    fn single_qubit_rejected() {
        let c = CircuitBuilder::new(1).h(0).build().unwrap();
        assert!(entanglement_spectrum(&c, &opts(2)).is_err());
    }
}
