//! Cost minimization with parameter-shift gradients.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Angle, CircuitDescriptor};
use crate::error::{Error, Result};
use crate::seeded_rng;
use crate::simulator::{expectation, simulate, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gd,
    Adam,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gd" | "sgd" => Ok(Method::Gd),
            "adam" => Ok(Method::Adam),
            other => Err(Error::InvalidArgument(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// Initial parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Init {
    /// θ_i ~ U[0, 2π).
    UniformAngles,
    Zeros,
    Given(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub learning_rate: f64,
    pub steps: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub init: Init,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Adam,
            learning_rate: 0.05,
            steps: 100,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
            init: Init::UniformAngles,
        }
    }
}

impl OptimizerConfig {
    pub fn gd(learning_rate: f64, steps: usize) -> Self {
        Self {
            method: Method::Gd,
            learning_rate,
            steps,
            ..Self::default()
        }
    }

    pub fn adam(learning_rate: f64, steps: usize) -> Self {
        Self {
            method: Method::Adam,
            learning_rate,
            steps,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    fn validate(&self, n_params: usize) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument("learning rate must be positive".into()));
        }
        if !(self.beta1 > 0.0 && self.beta1 < 1.0 && self.beta2 > 0.0 && self.beta2 < 1.0) {
            return Err(Error::InvalidArgument("Adam betas must lie in (0, 1)".into()));
        }
        if let Init::Given(v) = &self.init {
            if v.len() != n_params {
                return Err(Error::ParameterCount {
                    expected: n_params,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    fn initial_theta(&self, n_params: usize) -> Vec<f64> {
        match &self.init {
            Init::UniformAngles => {
                let mut rng = seeded_rng(self.seed);
                (0..n_params).map(|_| rng.random::<f64>() * TAU).collect()
            }
            Init::Zeros => vec![0.0; n_params],
            Init::Given(v) => v.clone(),
        }
    }
}

/// Parameters and losses visited by one training run, initial point included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingTrace {
    pub thetas: Vec<Vec<f64>>,
    pub losses: Vec<f64>,
    pub restart_id: usize,
}

impl TrainingTrace {
    pub fn steps(&self) -> usize {
        self.losses.len().saturating_sub(1)
    }

    pub fn final_theta(&self) -> &[f64] {
        self.thetas.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_loss(&self) -> f64 {
        *self.losses.last().unwrap_or(&f64::NAN)
    }

    /// Tabular form: `step,loss,theta_0,...,theta_{M-1}`.
    pub fn to_csv(&self) -> String {
        let m = self.thetas.first().map_or(0, Vec::len);
        let mut out = String::from("step,loss");
        for i in 0..m {
            out.push_str(&format!(",theta_{i}"));
        }
        out.push('\n');
        for (step, (theta, loss)) in self.thetas.iter().zip(&self.losses).enumerate() {
            out.push_str(&format!("{step},{loss}"));
            for t in theta {
                out.push_str(&format!(",{t}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Receives `(step, θ, loss)` after the initial evaluation and after every
/// update, in step order.
pub trait TrainingObserver {
    fn observe(&mut self, step: usize, theta: &[f64], loss: f64);
}

impl<F: FnMut(usize, &[f64], f64)> TrainingObserver for F {
    fn observe(&mut self, step: usize, theta: &[f64], loss: f64) {
        self(step, theta, loss)
    }
}

/// `C(θ) = ⟨ψ(θ)|O|ψ(θ)⟩`.
pub fn cost_value(circuit: &CircuitDescriptor, theta: &[f64]) -> Result<f64> {
    let cost = circuit.require_cost()?;
    let state = simulate(&circuit.bind(theta)?, None)?;
    expectation(&state, cost)
}

/// Exact gradient of the cost by the parameter-shift rule. Each occurrence of
/// a parameter with prefactor `s` contributes `s/2 · [C(+π/2) − C(−π/2)]`,
/// where only that gate's angle is shifted.
pub fn gradient(circuit: &CircuitDescriptor, theta: &[f64]) -> Result<Vec<f64>> {
    let cost = circuit.require_cost()?;
    let bound = circuit.bind(theta)?;
    let occurrences: Vec<(usize, usize, f64)> = circuit
        .gates()
        .iter()
        .enumerate()
        .filter_map(|(g, gate)| match &gate.angle {
            Some(Angle::Symbol { param, prefactor }) => Some((g, param.index, *prefactor)),
            _ => None,
        })
        .collect();

    let contributions = occurrences
        .par_iter()
        .map(|&(g, index, prefactor)| {
            let eval = |delta: f64| -> Result<f64> {
                let mut shifted = bound.clone();
                shifted.ops[g] = shifted.ops[g].shifted(delta);
                expectation(&simulate(&shifted, None)?, cost)
            };
            let diff = eval(FRAC_PI_2)? - eval(-FRAC_PI_2)?;
            Ok((index, 0.5 * prefactor * diff))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut grad = vec![0.0; circuit.n_parameters()];
    for (index, c) in contributions {
        grad[index] += c;
    }
    Ok(grad)
}

/// Parameter-shift derivative of `f(ψ(θ))` with respect to `θ[index]`, for any
/// `f` that is linear in `|ψ⟩⟨ψ|` (expectations, outcome probabilities).
pub fn shift_derivative<F>(circuit: &CircuitDescriptor, theta: &[f64], index: usize, f: F) -> Result<f64>
where
    F: Fn(&StateVector) -> f64,
{
    if index >= circuit.n_parameters() {
        return Err(Error::InvalidArgument(format!("no parameter with index {index}")));
    }
    let bound = circuit.bind(theta)?;
    let mut total = 0.0;
    for (g, gate) in circuit.gates().iter().enumerate() {
        if let Some(Angle::Symbol { param, prefactor }) = &gate.angle {
            if param.index != index {
                continue;
            }
            let eval = |delta: f64| -> Result<f64> {
                let mut shifted = bound.clone();
                shifted.ops[g] = shifted.ops[g].shifted(delta);
                Ok(f(&simulate(&shifted, None)?))
            };
            total += 0.5 * prefactor * (eval(FRAC_PI_2)? - eval(-FRAC_PI_2)?);
        }
    }
    Ok(total)
}

/// Runs `config.steps` optimizer updates from the configured start point.
pub fn train(
    circuit: &CircuitDescriptor,
    config: &OptimizerConfig,
    observers: &mut [&mut dyn TrainingObserver],
) -> Result<TrainingTrace> {
    train_restart(circuit, config, 0, observers)
}

fn train_restart(
    circuit: &CircuitDescriptor,
    config: &OptimizerConfig,
    restart_id: usize,
    observers: &mut [&mut dyn TrainingObserver],
) -> Result<TrainingTrace> {
    circuit.require_cost()?;
    let m = circuit.n_parameters();
    config.validate(m)?;

    let mut theta = config.initial_theta(m);
    let mut loss = cost_value(circuit, &theta)?;
    if !loss.is_finite() {
        return Err(Error::Divergence { step: 0 });
    }
    for o in observers.iter_mut() {
        o.observe(0, &theta, loss);
    }
    let mut thetas = vec![theta.clone()];
    let mut losses = vec![loss];

    let mut first = vec![0.0; m];
    let mut second = vec![0.0; m];
    for step in 1..=config.steps {
        let grad = gradient(circuit, &theta)?;
        match config.method {
            Method::Gd => {
                for (t, g) in theta.iter_mut().zip(&grad) {
                    *t -= config.learning_rate * g;
                }
            }
            Method::Adam => {
                let k = step as i32;
                let c1 = 1.0 - config.beta1.powi(k);
                let c2 = 1.0 - config.beta2.powi(k);
                for i in 0..m {
                    first[i] = config.beta1 * first[i] + (1.0 - config.beta1) * grad[i];
                    second[i] = config.beta2 * second[i] + (1.0 - config.beta2) * grad[i] * grad[i];
                    let mhat = first[i] / c1;
                    let vhat = second[i] / c2;
                    theta[i] -= config.learning_rate * mhat / (vhat.sqrt() + config.epsilon);
                }
            }
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Divergence { step });
        }
        loss = cost_value(circuit, &theta)?;
        if !loss.is_finite() {
            return Err(Error::Divergence { step });
        }
        for o in observers.iter_mut() {
            o.observe(step, &theta, loss);
        }
        thetas.push(theta.clone());
        losses.push(loss);
    }
    Ok(TrainingTrace {
        thetas,
        losses,
        restart_id,
    })
}

/// Independent restarts; restart `r` uses seed `config.seed + r`.
pub fn ensemble_train(
    circuit: &CircuitDescriptor,
    config: &OptimizerConfig,
    restarts: usize,
) -> Result<Vec<TrainingTrace>> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    (0..restarts)
        .into_par_iter()
        .map(|r| {
            let cfg = config.clone().with_seed(config.seed.wrapping_add(r as u64));
            train_restart(circuit, &cfg, r, &mut [])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{qaoa_builder, CircuitBuilder, Graph, Pauli, PauliSum};
    use std::f64::consts::PI;

    fn cos_problem() -> CircuitDescriptor {
        CircuitBuilder::new(1)
            .rx_param(0, "t")
            .cost(PauliSum::single(1.0, [(0, Pauli::Z)]).unwrap())
            .build()
            .unwrap()
    }

    fn finite_difference(c: &CircuitDescriptor, theta: &[f64]) -> Vec<f64> {
        let h = 1e-5;
        (0..theta.len())
            .map(|i| {
                let mut p = theta.to_vec();
                let mut m = theta.to_vec();
                p[i] += h;
                m[i] -= h;
                (cost_value(c, &p).unwrap() - cost_value(c, &m).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn cosine_gradient() {
        let g = gradient(&cos_problem(), &[PI / 2.0]).unwrap();
        assert!((g[0] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn null_observable_gives_zero_gradient() {
        let c = CircuitBuilder::new(2)
            .rx_param(0, "a")
            .cx(0, 1)
            .ry_param(1, "b")
            .cost(PauliSum::single(0.0, [(1, Pauli::Z)]).unwrap())
            .build()
            .unwrap();
        assert_eq!(gradient(&c, &[0.3, 1.1]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn qaoa_gradient_matches_finite_differences() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let c = qaoa_builder(&g, 1).unwrap();
        let theta = [0.4, 1.3];
        let ps = gradient(&c, &theta).unwrap();
        let fd = finite_difference(&c, &theta);
        for (a, b) in ps.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn missing_cost() {
        let c = CircuitBuilder::new(1).rx_param(0, "t").build().unwrap();
        assert_eq!(gradient(&c, &[0.0]), Err(Error::MissingCost));
        assert!(matches!(
            train(&c, &OptimizerConfig::default(), &mut []),
            Err(Error::MissingCost)
        ));
    }

    #[test]
    fn gd_reaches_cosine_minimum() {
        let cfg = OptimizerConfig::gd(0.4, 200).with_init(Init::Given(vec![0.1]));
        let trace = train(&cos_problem(), &cfg, &mut []).unwrap();
        assert!((trace.final_loss() + 1.0).abs() < 1e-3);
        assert!((trace.final_theta()[0] - PI).abs() < 1e-3);
        assert_eq!(trace.thetas.len(), 201);
        assert_eq!(trace.losses.len(), 201);
    }

    #[test]
    fn zero_steps_keeps_initial_point() {
        let cfg = OptimizerConfig::gd(0.4, 0).with_init(Init::Given(vec![0.7]));
        let trace = train(&cos_problem(), &cfg, &mut []).unwrap();
        assert_eq!(trace.thetas, vec![vec![0.7]]);
        assert_eq!(trace.losses.len(), 1);
    }

    #[test]
    fn observers_see_every_step_in_order() {
        let mut seen = Vec::new();
        let mut obs = |step: usize, _: &[f64], _: f64| seen.push(step);
        let cfg = OptimizerConfig::adam(0.1, 7);
        train(&cos_problem(), &cfg, &mut [&mut obs]).unwrap();
        assert_eq!(seen, (0..=7).collect::<Vec<_>>());
    }

    #[test]
    fn divergence_guard() {
        // C = cos 4t; at t = π/8 one GD step adds 4·lr, which overflows.
        let c = CircuitBuilder::new(1)
            .rx_scaled(0, "t", 4.0)
            .cost(PauliSum::single(1.0, [(0, Pauli::Z)]).unwrap())
            .build()
            .unwrap();
        let cfg = OptimizerConfig::gd(f64::MAX, 3)
            .with_init(Init::Given(vec![std::f64::consts::PI / 8.0]));
        assert!(matches!(train(&c, &cfg, &mut []), Err(Error::Divergence { step: 1 })));
    }

    #[test]
    fn config_validation() {
        let c = cos_problem();
        let mut cfg = OptimizerConfig::adam(0.1, 1);
        cfg.beta1 = 1.0;
        assert!(train(&c, &cfg, &mut []).is_err());
        assert!(train(&c, &OptimizerConfig::gd(-1.0, 1), &mut []).is_err());
        let cfg = OptimizerConfig::gd(0.1, 1).with_init(Init::Given(vec![]));
        assert!(train(&c, &cfg, &mut []).is_err());
    }

    #[test]
    fn ensemble_is_reproducible_and_distinct() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = qaoa_builder(&g, 1).unwrap();
        let cfg = OptimizerConfig::adam(0.05, 3).with_seed(10);
        let a = ensemble_train(&c, &cfg, 5).unwrap();
        let b = ensemble_train(&c, &cfg, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        for i in 0..5 {
            assert_eq!(a[i].restart_id, i);
            for j in i + 1..5 {
                assert_ne!(a[i].thetas[0], a[j].thetas[0]);
            }
        }
        let single = train(&c, &cfg, &mut []).unwrap();
        assert_eq!(ensemble_train(&c, &cfg, 1).unwrap()[0], single);
    }

    #[test]
    fn csv_layout() {
        let cfg = OptimizerConfig::gd(0.1, 1).with_init(Init::Given(vec![0.5]));
        let csv = train(&cos_problem(), &cfg, &mut []).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,loss,theta_0");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,"));
    }
}
