//! Two-dimensional embeddings of parameter-space point clouds.

mod pca;
mod tsne;

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seeded_rng;

pub use pca::{pca, PcaResult};
pub use tsne::{tsne, TsneConfig, TsneResult};

/// Per-point tags carried through projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointLabel {
    pub restart: usize,
    pub step: usize,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<PointLabel>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("empty point cloud".into()))?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidArgument("points have unequal dimension".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("point cloud".into()));
        }
        Ok(Self {
            points,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<PointLabel>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::InvalidArgument("one label per point required".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[PointLabel]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

/// Affine 2-D slice `origin + φ₀·Φ₀ + φ₁·Φ₁` of parameter space.
///
/// For one-dimensional parameter spaces the second axis is the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceBasis {
    pub origin: Vec<f64>,
    pub axes: [Vec<f64>; 2],
}

impl SubspaceBasis {
    pub fn new(origin: Vec<f64>, axes: [Vec<f64>; 2]) -> Result<Self> {
        let m = origin.len();
        if axes.iter().any(|a| a.len() != m) {
            return Err(Error::InvalidArgument("axis dimension mismatch".into()));
        }
        let basis = Self { origin, axes };
        if !basis.is_orthonormal(1e-10) {
            return Err(Error::InvalidArgument("axes are not orthonormal".into()));
        }
        Ok(basis)
    }

    /// Gaussian pair, Gram-Schmidt orthonormalized.
    pub fn random(origin: Vec<f64>, seed: u64) -> Result<Self> {
        let m = origin.len();
        if m == 0 {
            return Err(Error::InvalidArgument("cannot slice a 0-dimensional space".into()));
        }
        let mut rng = seeded_rng(seed);
        let mut draw = || -> Vec<f64> { (0..m).map(|_| StandardNormal.sample(&mut rng)).collect() };
        let a = normalize(draw()).ok_or_else(|| Error::Degenerate("zero draw".into()))?;
        let b = if m == 1 {
            vec![0.0]
        } else {
            loop {
                let mut v = draw();
                let d = dot(&v, &a);
                v.iter_mut().zip(&a).for_each(|(x, y)| *x -= d * y);
                if let Some(v) = normalize(v) {
                    break v;
                }
            }
        };
        Self::new(origin, [a, b])
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        let [a, b] = &self.axes;
        let nb = dot(b, b);
        let b_ok = (nb - 1.0).abs() <= tol || (self.dim() == 1 && nb == 0.0);
        (dot(a, a) - 1.0).abs() <= tol && b_ok && dot(a, b).abs() <= tol
    }

    /// `origin + φ₀Φ₀ + φ₁Φ₁`.
    pub fn lift(&self, phi: [f64; 2]) -> Vec<f64> {
        self.origin
            .iter()
            .enumerate()
            .map(|(i, o)| o + phi[0] * self.axes[0][i] + phi[1] * self.axes[1][i])
            .collect()
    }

    /// Coordinates of the orthogonal projection of `theta` onto the slice.
    pub fn project(&self, theta: &[f64]) -> [f64; 2] {
        let d: Vec<f64> = theta.iter().zip(&self.origin).map(|(t, o)| t - o).collect();
        [dot(&d, &self.axes[0]), dot(&d, &self.axes[1])]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let n = dot(&v, &v).sqrt();
    if n < 1e-12 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= n);
    Some(v)
}
