use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{histogram, Histogram};
use crate::error::{Error, Result};
use crate::seeded_rng;
use crate::simulator::{reduced_density_matrix, StateVector};

/// Entanglement energies above this value are clamped to it.
pub const XI_CUTOFF: f64 = 30.0;
/// Bin count of the shared `[0, XI_CUTOFF]` entanglement-energy grid.
pub const XI_BINS: usize = 75;

/// CDF of pairwise fidelities between Haar-random pure states in dimension
/// `dim`: `1 - (1 - F)^(dim - 1)`.
pub fn haar_fidelity_cdf(f: f64, dim: usize) -> f64 {
    let f = f.clamp(0.0, 1.0);
    1.0 - (1.0 - f).powi(dim as i32 - 1)
}

/// Density `(dim - 1)(1 - F)^(dim - 2)`.
pub fn haar_fidelity_pdf(f: f64, dim: usize) -> f64 {
    if !(0.0..=1.0).contains(&f) {
        return 0.0;
    }
    (dim as f64 - 1.0) * (1.0 - f).powi(dim as i32 - 2)
}

/// Exact bin masses of the Haar fidelity law on `edges`.
pub fn haar_fidelity_baseline(dim: usize, edges: &[f64]) -> Result<Histogram> {
    if dim < 2 {
        return Err(Error::InvalidArgument("Haar baseline needs dim >= 2".into()));
    }
    let masses = edges
        .windows(2)
        .map(|w| haar_fidelity_cdf(w[1], dim) - haar_fidelity_cdf(w[0], dim))
        .collect();
    Ok(Histogram {
        edges: edges.to_vec(),
        masses,
        total_samples: 0,
    })
}

/// Haar-random pure state: i.i.d. standard complex Gaussians, normalized.
pub fn sample_haar_state(n_qubits: usize, seed: u64) -> Result<StateVector> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("n_qubits must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let amps = (0..1usize << n_qubits)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::normalized(n_qubits, amps)
}

/// `ξ = -ln λ`, sorted descending. Eigenvalues below `e^-cutoff` (including
/// round-off negatives) map to `cutoff`.
pub fn xi_from_eigenvalues(eigenvalues: &[f64], cutoff: f64) -> Vec<f64> {
    let floor = (-cutoff).exp();
    let mut xi: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| if l < floor { cutoff } else { (-l.ln()).clamp(0.0, cutoff) })
        .collect();
    xi.sort_by(|a, b| b.total_cmp(a));
    xi
}

/// Finite-size reference for the entanglement spectrum of Haar states.
#[derive(Debug, Clone, Serialize)]
pub struct MpReference {
    pub n_qubits: usize,
    pub subsystem_qubits: usize,
    pub samples: usize,
    /// Per-rank mean of `ξ`, ranks ordered by descending `ξ`.
    pub mean_xi: Vec<f64>,
    /// Per-rank mean of `λ`, ranks ordered by descending `λ`.
    pub mean_eigenvalues: Vec<f64>,
    pub mean_purity: f64,
    /// Pooled `ξ` over all samples on the `[0, XI_CUTOFF]` grid.
    pub histogram: Histogram,
}

/// Eigenvalue statistics of `ρ_A` for Haar-random states, `A` = the first
/// `k` of `n` qubits. Sample `i` uses seed `seed + i`.
pub fn mp_reference_spectrum(n: usize, k: usize, samples: usize, seed: u64) -> Result<MpReference> {
    mp_reference_on_grid(n, k, samples, seed, XI_CUTOFF, XI_BINS)
}

/// As [`mp_reference_spectrum`], with `ξ` clamped at `cutoff` and pooled on
/// `bins` uniform bins over `[0, cutoff]`.
pub fn mp_reference_on_grid(
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
    cutoff: f64,
    bins: usize,
) -> Result<MpReference> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidArgument("cutoff must be positive".into()));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "subsystem size {k} must lie in [1, {}]",
            n.saturating_sub(1)
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let keep: Vec<usize> = (0..k).collect();
    let spectra = (0..samples)
        .into_par_iter()
        .map(|i| {
            let psi = sample_haar_state(n, seed.wrapping_add(i as u64))?;
            Ok(reduced_density_matrix(&psi, &keep)?.eigenvalues())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let d = 1usize << k;
    let mut mean_xi = vec![0.0; d];
    let mut mean_eigenvalues = vec![0.0; d];
    let mut pooled = Vec::with_capacity(d * samples);
    let mut purity = 0.0;
    for ev in &spectra {
        let xi = xi_from_eigenvalues(ev, cutoff);
        for r in 0..d {
            mean_xi[r] += xi[r];
            mean_eigenvalues[r] += ev[r];
        }
        purity += ev.iter().map(|l| l * l).sum::<f64>();
        pooled.extend(xi);
    }
    let s = samples as f64;
    mean_xi.iter_mut().for_each(|v| *v /= s);
    mean_eigenvalues.iter_mut().for_each(|v| *v /= s);
    Ok(MpReference {
        n_qubits: n,
        subsystem_qubits: k,
        samples,
        mean_xi,
        mean_eigenvalues,
        mean_purity: purity / s,
        histogram: histogram(&pooled, bins, 0.0, cutoff)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::subsystem_purity;
    use crate::stats::{ks_distance, uniform_edges};

    #[test]
    fn cdf_boundaries() {
        for dim in [2, 4, 32] {
            assert_eq!(haar_fidelity_cdf(0.0, dim), 0.0);
            assert_eq!(haar_fidelity_cdf(1.0, dim), 1.0);
        }
        for f in [0.1, 0.37, 0.9] {
            assert!((haar_fidelity_cdf(f, 2) - f).abs() < 1e-15);
        }
    }

    #[test]
    fn baseline_masses_sum_to_one() {
        let h = haar_fidelity_baseline(8, &uniform_edges(75, 0.0, 1.0)).unwrap();
        assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(h.masses.iter().all(|&m| m >= 0.0));
    }

    #[test]
    fn haar_states_are_normalized() {
        for seed in 0..20 {
            let s = sample_haar_state(3, seed).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_cdf_draws_match_histogram_law() {
        // F = 1 - u^(1/(N-1)) inverts the CDF; histogram those draws and check
        // the empirical CDF at the bin edges.
        use rand::Rng;
        let n = 4;
        let mut rng = seeded_rng(11);
        let draws: Vec<f64> = (0..10_000)
            .map(|_| 1.0 - rng.random::<f64>().powf(1.0 / (n as f64 - 1.0)))
            .collect();
        let h = histogram(&draws, 75, 0.0, 1.0).unwrap();
        let mut acc = 0.0;
        let mut worst: f64 = 0.0;
        for (i, m) in h.masses.iter().enumerate() {
            acc += m;
            worst = worst.max((acc - haar_fidelity_cdf(h.edges[i + 1], n)).abs());
        }
        assert!(worst < 0.02, "{worst}");
        assert!(ks_distance(&draws, |f| haar_fidelity_cdf(f, n)) < 0.02);
    }

    #[test]
    fn single_qubit_fidelities_are_uniform() {
        let fids: Vec<f64> = (0..10_000u64)
            .map(|i| {
                let a = sample_haar_state(1, 2 * i).unwrap();
                let b = sample_haar_state(1, 2 * i + 1).unwrap();
                a.fidelity(&b)
            })
            .collect();
        assert!(ks_distance(&fids, |f| f) < 0.02);
    }

    #[test]
    fn two_qubit_marginal_purity() {
        let mean: f64 = (0..10_000u64)
            .map(|i| subsystem_purity(&sample_haar_state(2, i).unwrap(), &[0]).unwrap())
            .sum::<f64>()
            / 10_000.0;
        assert!((mean - 0.8).abs() < 0.01, "{mean}");
    }

    #[test]
    fn mp_reference_shapes() {
        let r = mp_reference_spectrum(2, 1, 50, 0).unwrap();
        assert!((r.mean_eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(r.histogram.masses.len() == XI_BINS);

        let r = mp_reference_spectrum(4, 2, 500, 3).unwrap();
        assert!((r.mean_purity - 8.0 / 17.0).abs() < 0.01, "{}", r.mean_purity);
        assert!(r.mean_xi.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.mean_xi.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn mp_reference_rejects_bad_cut() {
        assert!(mp_reference_spectrum(3, 0, 10, 0).is_err());
        assert!(mp_reference_spectrum(3, 3, 10, 0).is_err());
    }

    #[test]
    fn xi_clamps_tiny_and_negative_eigenvalues() {
        let xi = xi_from_eigenvalues(&[1.0, 0.0, -1e-17, 1e-20], XI_CUTOFF);
        assert_eq!(xi, vec![30.0, 30.0, 30.0, 0.0]);
        let xi = xi_from_eigenvalues(&[0.5, 0.5], XI_CUTOFF);
        assert!(xi.iter().all(|x| (x - 2f64.ln()).abs() < 1e-12));
    }
}
