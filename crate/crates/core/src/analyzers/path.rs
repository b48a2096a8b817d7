use serde::Serialize;

use super::{schema, LandscapeGrid};
use crate::error::{Error, Result};
use crate::projection::{pca, tsne, PointCloud, SubspaceBasis, TsneConfig};
use crate::trainer::TrainingTrace;

#[derive(Debug, Clone, PartialEq)]
pub enum PathMode {
    Pca,
    Tsne(TsneConfig),
}

impl PathMode {
    fn name(&self) -> &'static str {
        match self {
            PathMode::Pca => "pca",
            PathMode::Tsne(_) => "tsne",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddedPoint {
    /// Position of the trace in the input list.
    pub restart: usize,
    pub step: usize,
    pub loss: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub schema: String,
    pub mode: String,
    pub points: Vec<EmbeddedPoint>,
    pub final_losses: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explained_variance_ratio: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<SubspaceBasis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlay: Option<LandscapeGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_kl: Option<f64>,
}

impl PathReport {
    pub fn restarts(&self) -> usize {
        self.final_losses.len()
    }

    /// Embedded coordinates of one restart, in step order.
    pub fn polyline(&self, restart: usize) -> Vec<[f64; 2]> {
        self.points
            .iter()
            .filter(|p| p.restart == restart)
            .map(|p| [p.x, p.y])
            .collect()
    }

    /// `restart,step,loss,x,y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("restart,step,loss,x,y\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{},{}\n", p.restart, p.step, p.loss, p.x, p.y));
        }
        out
    }
}

/// Embeds every visited parameter vector of `traces` in two dimensions.
/// With an overlay, points are projected onto the overlay's slice so the path
/// can be drawn over its landscape.
pub fn training_path(
    traces: &[TrainingTrace],
    mode: &PathMode,
    overlay: Option<&LandscapeGrid>,
) -> Result<PathReport> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument("no traces".into()));
    }
    let mut pooled = Vec::new();
    let mut tags = Vec::new();
    for (r, t) in traces.iter().enumerate() {
        for (step, (theta, loss)) in t.thetas.iter().zip(&t.losses).enumerate() {
            pooled.push(theta.clone());
            tags.push((r, step, *loss));
        }
    }
    if pooled.len() < 3 {
        return Err(Error::InvalidArgument("path needs at least 3 points".into()));
    }
    let cloud = PointCloud::new(pooled)?;
    let mut report = PathReport {
        schema: schema(),
        mode: mode.name().into(),
        points: Vec::new(),
        final_losses: traces.iter().map(TrainingTrace::final_loss).collect(),
        explained_variance_ratio: None,
        basis: None,
        overlay: None,
        final_kl: None,
    };

    let coords: Vec<[f64; 2]> = match (mode, overlay) {
        (PathMode::Tsne(_), Some(_)) => {
            return Err(Error::InvalidArgument("t-SNE paths cannot be overlaid on a landscape".into()))
        }
        (PathMode::Pca, Some(grid)) => {
            if grid.basis.dim() != cloud.dim() {
                return Err(Error::InvalidArgument("overlay basis does not match the traces".into()));
            }
            report.basis = Some(grid.basis.clone());
            report.overlay = Some(grid.clone());
            cloud.points().iter().map(|p| grid.basis.project(p)).collect()
        }
        (PathMode::Pca, None) => {
            let fit = pca(&cloud, 2)?;
            report.explained_variance_ratio = Some(fit.explained_variance_ratio.clone());
            report.basis = Some(fit.basis()?);
            fit.embedded.iter().map(|e| [e[0], e[1]]).collect()
        }
        (PathMode::Tsne(config), None) => {
            let mut config = config.clone();
            config.dims = 2;
            let fit = tsne(&cloud, &config)?;
            report.final_kl = Some(fit.final_kl());
            fit.embedding.iter().map(|e| [e[0], e[1]]).collect()
        }
    };
    report.points = tags
        .into_iter()
        .zip(coords)
        .map(|((restart, step, loss), [x, y])| EmbeddedPoint {
            restart,
            step,
            loss,
            x,
            y,
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzers::{loss_landscape, BasisMode, LandscapeOptions, MetricSpec};
    use crate::circuit::{qaoa_builder, CircuitBuilder, Graph, Pauli, PauliSum};
    use crate::trainer::{ensemble_train, train, Init, OptimizerConfig};

    fn cos_trace() -> TrainingTrace {
        let c = CircuitBuilder::new(1)
            .rx_param(0, "t")
            .cost(PauliSum::single(1.0, [(0, Pauli::Z)]).unwrap())
            .build()
            .unwrap();
        train(&c, &OptimizerConfig::gd(0.2, 30).with_init(Init::Given(vec![0.5])), &mut []).unwrap()
    }

    #[test]
    fn one_parameter_path_is_monotone() {
        let r = training_path(&[cos_trace()], &PathMode::Pca, None).unwrap();
        let xs: Vec<f64> = r.points.iter().map(|p| p.x).collect();
        assert!(xs.windows(2).all(|w| w[1] >= w[0]) || xs.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.points.iter().all(|p| p.y == 0.0));
    }

    #[test]
    fn five_qaoa_restarts() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = qaoa_builder(&g, 1).unwrap();
        let traces = ensemble_train(&c, &OptimizerConfig::adam(0.05, 40), 5).unwrap();
        let r = training_path(&traces, &PathMode::Pca, None).unwrap();
        assert_eq!(r.restarts(), 5);
        for k in 0..5 {
            assert_eq!(r.polyline(k).len(), 41);
            assert_eq!(r.final_losses[k], traces[k].final_loss());
        }
    }

    #[test]
    fn duplicate_traces_give_identical_polylines() {
        let t = cos_trace();
        let r = training_path(&[t.clone(), t.clone()], &PathMode::Pca, None).unwrap();
        assert_eq!(r.polyline(0), r.polyline(1));

        let mode = PathMode::Tsne(TsneConfig::default().with_perplexity(5.0).with_iterations(200));
        let a = training_path(&[t.clone(), t.clone()], &mode, None).unwrap();
        let b = training_path(&[t.clone(), t], &mode, None).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn overlay_only_with_pca() {
        let t = cos_trace();
        let c = CircuitBuilder::new(1)
            .rx_param(0, "t")
            .cost(PauliSum::single(1.0, [(0, Pauli::Z)]).unwrap())
            .build()
            .unwrap();
        let traces = [t.clone()];
        let grid = loss_landscape(
            &c,
            t.final_theta(),
            BasisMode::Pca(&traces),
            &MetricSpec::Expectation,
            &LandscapeOptions { points: 5, ..Default::default() },
        )
        .unwrap();
        let r = training_path(&traces, &PathMode::Pca, Some(&grid)).unwrap();
        let last = r.points.last().unwrap();
        assert!(last.x.abs() < 1e-12);
        assert!(r.overlay.is_some());
        let tsne_mode = PathMode::Tsne(TsneConfig::default().with_perplexity(2.0));
        assert!(training_path(&traces, &tsne_mode, Some(&grid)).is_err());
    }

    #[test]
    fn too_few_points() {
        let c = CircuitBuilder::new(1)
            .rx_param(0, "t")
            .cost(PauliSum::single(1.0, [(0, Pauli::Z)]).unwrap())
            .build()
            .unwrap();
        let t = train(&c, &OptimizerConfig::gd(0.1, 1), &mut []).unwrap();
        assert!(training_path(&[t], &PathMode::Pca, None).is_err());
        assert!(training_path(&[], &PathMode::Pca, None).is_err());
    }
}
