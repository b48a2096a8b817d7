use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::PointCloud;
use crate::error::{Error, Result};
use crate::seeded_rng;

const P_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TsneConfig {
    pub dims: usize,
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub early_exaggeration: f64,
    pub exaggeration_iterations: usize,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    pub momentum_switch: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            dims: 2,
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            early_exaggeration: 12.0,
            exaggeration_iterations: 250,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch: 250,
            seed: 0,
        }
    }
}

impl TsneConfig {
    pub fn with_perplexity(mut self, perplexity: f64) -> Self {
        self.perplexity = perplexity;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TsneResult {
    pub embedding: Vec<Vec<f64>>,
    /// `KL(P || Q)` after each iteration, against the unexaggerated `P`.
    pub kl_history: Vec<f64>,
}

impl TsneResult {
    pub fn final_kl(&self) -> f64 {
        self.kl_history.last().copied().unwrap_or(f64::NAN)
    }
}

/// Exact t-SNE with the Student-t kernel.
pub fn tsne(cloud: &PointCloud, config: &TsneConfig) -> Result<TsneResult> {
    let n = cloud.len();
    if n < 3 {
        return Err(Error::InvalidArgument("t-SNE needs at least three points".into()));
    }
    if config.dims == 0 {
        return Err(Error::InvalidArgument("dims must be at least 1".into()));
    }
    if !(config.perplexity > 0.0) || 3.0 * config.perplexity >= (n - 1) as f64 {
        return Err(Error::InvalidArgument(format!(
            "perplexity {} too large for {n} points (must be < {:.3})",
            config.perplexity,
            (n - 1) as f64 / 3.0
        )));
    }
    if !(config.learning_rate > 0.0) {
        return Err(Error::InvalidArgument("learning rate must be positive".into()));
    }

    let p = joint_probabilities(cloud, config.perplexity);
    let d = config.dims;
    let mut rng = seeded_rng(config.seed);
    let normal = Normal::new(0.0, 1e-2).expect("valid normal");
    let mut y: Vec<f64> = (0..n * d).map(|_| normal.sample(&mut rng)).collect();
    let mut update = vec![0.0; n * d];
    let mut gains = vec![1.0f64; n * d];
    let mut grad = vec![0.0; n * d];
    let mut num = vec![0.0; n * n];
    let mut kl_history = Vec::with_capacity(config.iterations);

    for it in 0..config.iterations {
        let exaggeration = if it < config.exaggeration_iterations {
            config.early_exaggeration
        } else {
            1.0
        };
        let momentum = if it < config.momentum_switch {
            config.initial_momentum
        } else {
            config.final_momentum
        };

        let z = kernel(&y, n, d, &mut num);
        grad.iter_mut().for_each(|g| *g = 0.0);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let q = (num[i * n + j] / z).max(P_FLOOR);
                let coef = 4.0 * (exaggeration * p[i * n + j] - q) * num[i * n + j];
                for k in 0..d {
                    grad[i * d + k] += coef * (y[i * d + k] - y[j * d + k]);
                }
            }
        }
        for idx in 0..n * d {
            let same_sign = (grad[idx] > 0.0) == (update[idx] > 0.0);
            gains[idx] = if same_sign { gains[idx] * 0.8 } else { gains[idx] + 0.2 };
            gains[idx] = gains[idx].max(0.01);
            update[idx] = momentum * update[idx] - config.learning_rate * gains[idx] * grad[idx];
            y[idx] += update[idx];
        }
        for k in 0..d {
            let mean = (0..n).map(|i| y[i * d + k]).sum::<f64>() / n as f64;
            (0..n).for_each(|i| y[i * d + k] -= mean);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step: it });
        }

        let z = kernel(&y, n, d, &mut num);
        let mut kl = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let pij = p[i * n + j];
                    kl += pij * (pij / (num[i * n + j] / z).max(P_FLOOR)).ln();
                }
            }
        }
        kl_history.push(kl);
    }

    Ok(TsneResult {
        embedding: y.chunks(d).map(<[f64]>::to_vec).collect(),
        kl_history,
    })
}

/// Fills `num` with `1/(1 + |y_i - y_j|²)` (zero diagonal) and returns its sum.
fn kernel(y: &[f64], n: usize, d: usize, num: &mut [f64]) -> f64 {
    let mut z = 0.0;
    for i in 0..n {
        num[i * n + i] = 0.0;
        for j in i + 1..n {
            let dist: f64 = (0..d).map(|k| (y[i * d + k] - y[j * d + k]).powi(2)).sum();
            let v = 1.0 / (1.0 + dist);
            num[i * n + j] = v;
            num[j * n + i] = v;
            z += 2.0 * v;
        }
    }
    z
}

/// Symmetrized affinities `(P_j|i + P_i|j) / 2n`, floored.
fn joint_probabilities(cloud: &PointCloud, perplexity: f64) -> Vec<f64> {
    let pts = cloud.points();
    let n = pts.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b).powi(2)).sum();
            dist[i * n + j] = v;
            dist[j * n + i] = v;
        }
    }
    let target = perplexity.ln();
    let mut cond = vec![0.0; n * n];
    for i in 0..n {
        let row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dist[i * n + j]).collect();
        let shift = row.iter().copied().fold(f64::INFINITY, f64::min);
        let mut beta = 1.0;
        let (mut lo, mut hi) = (0.0, f64::INFINITY);
        let mut probs = vec![0.0; row.len()];
        for _ in 0..200 {
            let mut sum = 0.0;
            for (p, &dv) in probs.iter_mut().zip(&row) {
                *p = (-(dv - shift) * beta).exp();
                sum += *p;
            }
            let mut weighted = 0.0;
            for (p, &dv) in probs.iter_mut().zip(&row) {
                *p /= sum;
                weighted += *p * (dv - shift);
            }
            let entropy = sum.ln() + beta * weighted;
            let diff = entropy - target;
            if diff.abs() < 1e-5 {
                break;
            }
            if diff > 0.0 {
                lo = beta;
                beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
            } else {
                hi = beta;
                beta = (beta + lo) / 2.0;
            }
        }
        for (k, j) in (0..n).filter(|&j| j != i).enumerate() {
            cond[i * n + j] = probs[k];
        }
    }
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                p[i * n + j] = ((cond[i * n + j] + cond[j * n + i]) / (2.0 * n as f64)).max(P_FLOOR);
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use rand::Rng;

    fn clusters(seed: u64) -> Vec<Vec<f64>> {
        let mut rng = seeded_rng(seed);
        (0..16)
            .map(|i| {
                let c = if i < 8 { 0.0 } else { 20.0 };
                (0..10).map(|_| c + rng.random_range(-0.5..0.5)).collect()
            })
            .collect()
    }

    fn centroid_gap(e: &[Vec<f64>]) -> (f64, f64) {
        let mean = |s: &[Vec<f64>]| -> Vec<f64> {
            (0..2).map(|k| s.iter().map(|p| p[k]).sum::<f64>() / s.len() as f64).collect()
        };
        let (a, b) = (mean(&e[..8]), mean(&e[8..]));
        let gap = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        let spread = e[..8]
            .iter()
            .map(|p| ((p[0] - a[0]).powi(2) + (p[1] - a[1]).powi(2)).sqrt())
            .chain(e[8..].iter().map(|p| ((p[0] - b[0]).powi(2) + (p[1] - b[1]).powi(2)).sqrt()))
            .fold(0.0, f64::max);
        (gap, spread)
    }

    #[test]
    fn separates_two_clusters() {
        let cloud = PointCloud::new(clusters(1)).unwrap();
        let r = tsne(&cloud, &TsneConfig::default().with_perplexity(4.0)).unwrap();
        let (gap, spread) = centroid_gap(&r.embedding);
        assert!(gap > 2.0 * spread, "gap {gap} spread {spread}");
    }

    #[test]
    fn deterministic_for_seed() {
        let cloud = PointCloud::new(clusters(2)).unwrap();
        let cfg = TsneConfig::default().with_perplexity(4.0).with_iterations(300).with_seed(5);
        let a = tsne(&cloud, &cfg).unwrap();
        let b = tsne(&cloud, &cfg).unwrap();
        assert_eq!(a.embedding, b.embedding);
    }

    #[test]
    fn translation_invariant() {
        let pts = clusters(3);
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| x + 0.25).collect()).collect();
        let cfg = TsneConfig::default().with_perplexity(4.0).with_iterations(300);
        let a = tsne(&PointCloud::new(pts).unwrap(), &cfg).unwrap();
        let b = tsne(&PointCloud::new(moved).unwrap(), &cfg).unwrap();
        for (p, q) in a.embedding.iter().zip(&b.embedding) {
            assert!((p[0] - q[0]).abs() < 1e-6 && (p[1] - q[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn duplicate_points_are_finite() {
        let mut pts = clusters(4);
        pts[1] = pts[0].clone();
        pts[2] = pts[0].clone();
        let r = tsne(&PointCloud::new(pts).unwrap(), &TsneConfig::default().with_perplexity(4.0)).unwrap();
        assert!(r.embedding.iter().flatten().all(|v| v.is_finite()));
    }

    #[test]
    fn rejects_large_perplexity() {
        let cloud = PointCloud::new(clusters(5)).unwrap();
        assert!(tsne(&cloud, &TsneConfig::default()).is_err());
        assert!(tsne(&cloud, &TsneConfig::default().with_perplexity(5.0)).is_err());
    }

    #[test]
    fn affinities_sum_to_one() {
        let cloud = PointCloud::new(clusters(6)).unwrap();
        let p = joint_probabilities(&cloud, 4.0);
        let s: f64 = p.iter().sum();
        assert!((s - 1.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn kl_settles_late_in_optimization() {
        let mut settled = 0;
        let trials = 20;
        for seed in 0..trials {
            let mut rng = seeded_rng(100 + seed);
            let pts: Vec<Vec<f64>> = (0..20).map(|_| (0..5).map(|_| rng.random::<f64>()).collect()).collect();
            let cfg = TsneConfig::default().with_perplexity(5.0).with_seed(seed);
            let r = tsne(&PointCloud::new(pts).unwrap(), &cfg).unwrap();
            let tail = &r.kl_history[r.kl_history.len() - 100..];
            if tail.windows(2).all(|w| w[1] <= w[0] + 1e-9) {
                settled += 1;
            }
        }
        assert!(settled as f64 >= 0.95 * trials as f64, "{settled}/{trials}");
    }
}
