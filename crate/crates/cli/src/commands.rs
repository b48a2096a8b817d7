use std::fmt;
use std::fs;
use std::path::Path;

use pqc_lens::analyzers::{
    barren_plateau_scan, entanglement_capability, entanglement_spectrum, expressibility, loss_landscape,
    max_cut_metric, parameter_histogram, reachability, training_path, BasisMode, CostKind, EntanglementMeasure,
    EntanglementReport, LandscapeGrid, LandscapeOptions, MetricSpec, PathMode, PathReport, SpectrumOptions,
    Spectators,
};
use pqc_lens::circuit::{gnm_random_graph, identity_ansatz, qaoa_builder};
use pqc_lens::projection::TsneConfig;
use pqc_lens::simulator::{sample, simulate};
use pqc_lens::trainer::{ensemble_train, train, OptimizerConfig, TrainingTrace};
use pqc_lens::{parse_circuit_spec, CircuitDescriptor, Error};
use serde::Serialize;
use serde_json::json;

use crate::output::Output;
use crate::svg::{self, Series};
use crate::{BasisArg, Command, Common, GridArgs, ModeArg, TrainArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Divergence { .. } | Error::NonFinite(_) | Error::Degenerate(_) => CliError::Numerical(e.to_string()),
            Error::Syntax { .. }
            | Error::UnknownGate(_)
            | Error::UndeclaredParameter(_)
            | Error::DuplicateParameter(_)
            | Error::UnusedParameter(_)
            | Error::InvalidGate(_)
            | Error::InvalidObservable(_) => CliError::Parse(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

fn load_circuit(path: &Path) -> Result<CircuitDescriptor, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_circuit_spec(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn optimizer(args: &TrainArgs, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        method: args.optimizer,
        learning_rate: args.learning_rate,
        steps: args.steps,
        seed,
        ..OptimizerConfig::default()
    }
}

fn landscape_options(grid: &GridArgs, seed: u64) -> LandscapeOptions {
    LandscapeOptions {
        points: grid.points,
        range: grid.range,
        seed,
    }
}

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Expressibility {
            circuit,
            samples,
            measure,
            bins,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let report = expressibility(&c, samples, measure, bins, common.seed)?;
            let mut out = Output::create(&common.out)?;
            let h = &report.fidelity_histogram;
            let mut csv = String::from("bin_lo,bin_hi,pqc,haar\n");
            for b in 0..h.bins() {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    h.edges[b],
                    h.edges[b + 1],
                    h.masses[b],
                    report.baseline_histogram.masses[b]
                ));
            }
            out.write("fidelities.csv", &csv)?;
            let title = format!("Expressibility ({} = {:.4})", report.measure, report.value);
            out.write(
                "fidelities.svg",
                &svg::histogram_overlay(
                    &title,
                    "fidelity",
                    &h.edges,
                    &[("PQC", &h.masses), ("Haar", &report.baseline_histogram.masses)],
                ),
            )?;
            out.finish("expressibility", common.seed, &with_circuit(&report, &circuit))
        }
        Command::Entanglement {
            circuit,
            samples,
            measure,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let report: EntanglementReport = entanglement_capability(&c, samples, measure, common.seed)?;
            let mut out = Output::create(&common.out)?;
            if measure == EntanglementMeasure::Scott {
                let pts = report.value.as_slice().iter().enumerate().map(|(m, q)| ((m + 1) as f64, *q)).collect();
                out.write(
                    "scott.svg",
                    &svg::line_plot("Scott measure", "block size m", "Q_m", &[Series { label: "Q_m", points: pts, dashed: false }]),
                )?;
            }
            out.finish("entanglement", common.seed, &with_circuit(&report, &circuit))
        }
        Command::Spectrum {
            circuit,
            samples,
            measure,
            bins,
            reference_samples,
            cutoff,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let options = SpectrumOptions {
                samples,
                measure,
                cutoff,
                bins,
                reference_samples,
                seed: common.seed,
            };
            let report = entanglement_spectrum(&c, &options)?;
            let mut out = Output::create(&common.out)?;
            let mut csv = String::from("rank,xi,reference_xi\n");
            for (k, (a, b)) in report.mean_xi.iter().zip(&report.reference_mean_xi).enumerate() {
                csv.push_str(&format!("{},{a},{b}\n", k + 1));
            }
            out.write("spectrum.csv", &csv)?;
            let rank = |v: &[f64]| v.iter().enumerate().map(|(k, x)| ((k + 1) as f64, *x)).collect();
            out.write(
                "spectrum.svg",
                &svg::line_plot(
                    &format!("Entanglement spectrum (ESD = {:.4})", report.esd),
                    "rank k",
                    "mean xi_k",
                    &[
                        Series { label: "PQC", points: rank(&report.mean_xi), dashed: false },
                        Series { label: "Haar", points: rank(&report.reference_mean_xi), dashed: true },
                    ],
                ),
            )?;
            out.finish("spectrum", common.seed, &with_circuit(&report, &circuit))
        }
        Command::Train {
            circuit,
            restarts,
            train: targs,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let cfg = optimizer(&targs, common.seed);
            let traces = ensemble_train(&c, &cfg, restarts)?;
            let mut out = Output::create(&common.out)?;
            write_traces(&mut out, &traces)?;
            out.finish(
                "train",
                common.seed,
                &json!({
                    "circuit": circuit.display().to_string(),
                    "optimizer": cfg,
                    "restarts": restarts,
                    "final_losses": traces.iter().map(TrainingTrace::final_loss).collect::<Vec<_>>(),
                    "final_thetas": traces.iter().map(|t| t.final_theta().to_vec()).collect::<Vec<_>>(),
                }),
            )
        }
        Command::Landscape {
            circuit,
            theta,
            basis,
            grid,
            train: targs,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let given = theta.as_deref().map(parse_theta).transpose()?;
            let needs_trace = matches!(basis, BasisArg::Pca) || given.is_none();
            let trace = if needs_trace {
                Some(train(&c, &optimizer(&targs, common.seed), &mut [])?)
            } else {
                None
            };
            let theta_star = match (&given, &trace) {
                (Some(t), _) => t.clone(),
                (None, Some(t)) => t.final_theta().to_vec(),
                (None, None) => unreachable!("a trace is trained when no theta is given"),
            };
            let traces: Vec<TrainingTrace> = trace.into_iter().collect();
            let mode = match basis {
                BasisArg::Pca => BasisMode::Pca(&traces),
                BasisArg::Random => BasisMode::Random,
            };
            let g = loss_landscape(&c, &theta_star, mode, &MetricSpec::Expectation, &landscape_options(&grid, common.seed))?;
            let mut out = Output::create(&common.out)?;
            write_landscape(&mut out, &g, &[], "Loss landscape")?;
            out.finish("landscape", common.seed, &with_circuit(&g, &circuit))
        }
        Command::Path {
            circuit,
            mode,
            perplexity,
            overlay,
            restarts,
            grid,
            train: targs,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let traces = ensemble_train(&c, &optimizer(&targs, common.seed), restarts)?;
            let mut out = Output::create(&common.out)?;
            write_traces(&mut out, &traces)?;
            let path_mode = match mode {
                ModeArg::Pca => PathMode::Pca,
                ModeArg::Tsne => PathMode::Tsne(TsneConfig::default().with_perplexity(perplexity).with_seed(common.seed)),
            };
            let landscape = if overlay {
                let best = best_trace(&traces);
                Some(loss_landscape(
                    &c,
                    best.final_theta(),
                    BasisMode::Pca(&traces),
                    &MetricSpec::Expectation,
                    &landscape_options(&grid, common.seed),
                )?)
            } else {
                None
            };
            let report = training_path(&traces, &path_mode, landscape.as_ref())?;
            write_path(&mut out, &report)?;
            out.finish("path", common.seed, &with_circuit(&report, &circuit))
        }
        Command::Histogram {
            circuit,
            members,
            bins,
            train: targs,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let traces = ensemble_train(&c, &optimizer(&targs, common.seed), members)?;
            let h = parameter_histogram(&traces, bins)?;
            let mut out = Output::create(&common.out)?;
            out.write("histograms.csv", &h.to_csv())?;
            let first = &h.histograms[0][0];
            let steps: Vec<f64> = (0..h.steps()).map(|t| t as f64).collect();
            let values: Vec<Vec<f64>> = h.histograms.iter().map(|row| row[0].masses.clone()).collect();
            out.write(
                "histogram_theta0.svg",
                &svg::heatmap("Marginal of parameter 0 per step", "step", "theta_0", &steps, &first.centers(), &values, &[]),
            )?;
            out.finish("histogram", common.seed, &with_circuit(&h, &circuit))
        }
        Command::Reachability {
            circuit,
            haar_samples,
            restarts,
            train: targs,
            common,
        } => {
            let c = load_circuit(&circuit)?;
            let report = reachability(&c, haar_samples, restarts, &optimizer(&targs, common.seed), common.seed)?;
            let out = Output::create(&common.out)?;
            out.finish("reachability", common.seed, &with_circuit(&report, &circuit))
        }
        Command::Qaoa {
            nodes,
            edges,
            p,
            restarts,
            steps,
            learning_rate,
            shots,
            graph_seed,
            grid,
            common,
        } => qaoa(nodes, edges, p, restarts, steps, learning_rate, shots, graph_seed, &grid, &common),
        Command::Plateau { qubits, points, common } => plateau(qubits, points, &common),
    }
}

fn with_circuit(report: &impl Serialize, circuit: &Path) -> serde_json::Value {
    let mut v = serde_json::to_value(report).unwrap_or(serde_json::Value::Null);
    if let serde_json::Value::Object(m) = &mut v {
        m.insert("circuit".into(), json!(circuit.display().to_string()));
    }
    v
}

fn parse_theta(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("bad angle `{t}`: {e}"))))
        .collect()
}

fn best_trace(traces: &[TrainingTrace]) -> &TrainingTrace {
    traces
        .iter()
        .min_by(|a, b| a.final_loss().total_cmp(&b.final_loss()))
        .expect("at least one trace")
}

fn write_traces(out: &mut Output, traces: &[TrainingTrace]) -> CliResult {
    for (r, t) in traces.iter().enumerate() {
        out.write(&format!("trace_{r}.csv"), &t.to_csv())?;
    }
    let series: Vec<(String, Vec<(f64, f64)>)> = traces
        .iter()
        .enumerate()
        .map(|(r, t)| (format!("restart {r}"), t.losses.iter().enumerate().map(|(s, l)| (s as f64, *l)).collect()))
        .collect();
    let series: Vec<Series<'_>> = series
        .iter()
        .map(|(label, pts)| Series { label, points: pts.clone(), dashed: false })
        .collect();
    out.write("loss.svg", &svg::line_plot("Training loss", "step", "loss", &series))
}

fn write_landscape(out: &mut Output, g: &LandscapeGrid, paths: &[Vec<(f64, f64)>], title: &str) -> CliResult {
    out.write("landscape.csv", &g.to_csv())?;
    out.write("landscape.svg", &svg::heatmap(title, "phi0", "phi1", &g.axis, &g.axis, &g.values, paths))
}

fn polylines(report: &PathReport) -> Vec<Vec<(f64, f64)>> {
    (0..report.restarts())
        .map(|r| report.polyline(r).into_iter().map(|[x, y]| (x, y)).collect())
        .collect()
}

fn write_path(out: &mut Output, report: &PathReport) -> CliResult {
    out.write("path.csv", &report.to_csv())?;
    let lines = polylines(report);
    out.write("path.svg", &svg::paths(&format!("Training paths ({})", report.mode), &lines))?;
    if let Some(g) = &report.overlay {
        write_landscape(out, g, &lines, "Loss landscape with training paths")?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn qaoa(
    nodes: usize,
    edges: usize,
    p: usize,
    restarts: usize,
    steps: usize,
    learning_rate: f64,
    shots: usize,
    graph_seed: Option<u64>,
    grid: &GridArgs,
    common: &Common,
) -> CliResult {
    let graph = gnm_random_graph(nodes, edges, graph_seed.unwrap_or(common.seed))?;
    let c = qaoa_builder(&graph, p)?;
    let cfg = OptimizerConfig {
        learning_rate,
        steps,
        seed: common.seed,
        ..OptimizerConfig::default()
    };
    let traces = ensemble_train(&c, &cfg, restarts)?;
    let mut cuts = Vec::with_capacity(traces.len());
    for (r, t) in traces.iter().enumerate() {
        let state = simulate(&c.bind(t.final_theta())?, None)?;
        let counts = sample(&state, shots, common.seed.wrapping_add(r as u64))?;
        cuts.push(counts.mean_score(|b| graph.cut_size(b) as f64));
    }
    let best = best_trace(&traces);
    let metric = max_cut_metric(&graph, shots)?;
    let landscape = loss_landscape(&c, best.final_theta(), BasisMode::Pca(&traces), &metric, &landscape_options(grid, common.seed))?;
    let path = training_path(&traces, &PathMode::Pca, Some(&landscape))?;

    let mut out = Output::create(&common.out)?;
    write_traces(&mut out, &traces)?;
    out.write("path.csv", &path.to_csv())?;
    let lines = polylines(&path);
    out.write("path.svg", &svg::paths("QAOA training paths (landscape slice)", &lines))?;
    write_landscape(&mut out, &landscape, &lines, "Mean sampled cut")?;
    let best_cut = cuts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.finish(
        "qaoa",
        common.seed,
        &json!({
            "nodes": nodes,
            "edges": graph.edges(),
            "p": p,
            "restarts": restarts,
            "steps": steps,
            "shots": shots,
            "optimizer": cfg,
            "max_cut": graph.max_cut(),
            "final_losses": traces.iter().map(TrainingTrace::final_loss).collect::<Vec<_>>(),
            "mean_sampled_cuts": cuts,
            "best_mean_sampled_cut": best_cut,
            "landscape": landscape,
        }),
    )
}

fn plateau(qubits: usize, points: usize, common: &Common) -> CliResult {
    let c = identity_ansatz(qubits)?;
    let mut out = Output::create(&common.out)?;
    let mut scans = Vec::new();
    for kind in [CostKind::Global, CostKind::Local] {
        let s = barren_plateau_scan(&c, kind, points, &Spectators::Marginalize)?;
        let name = match kind {
            CostKind::Global => "global",
            CostKind::Local => "local",
        };
        out.write(&format!("plateau_{name}.csv"), &s.to_csv())?;
        out.write(
            &format!("plateau_{name}_loss.svg"),
            &svg::heatmap(&format!("{name} cost"), "theta1", "theta2", &s.axis, &s.axis, &s.loss, &[]),
        )?;
        let abs: Vec<Vec<f64>> = s.gradient.iter().map(|r| r.iter().map(|g| g.abs()).collect()).collect();
        out.write(
            &format!("plateau_{name}_gradient.svg"),
            &svg::heatmap(&format!("|d{name}/dtheta2|"), "theta1", "theta2", &s.axis, &s.axis, &abs, &[]),
        )?;
        scans.push(s);
    }
    let ratio = scans[1].mean_abs_gradient / scans[0].mean_abs_gradient;
    out.finish(
        "plateau",
        common.seed,
        &json!({
            "qubits": qubits,
            "points": points,
            "global": scans[0],
            "local": scans[1],
            "local_to_global_gradient_ratio": ratio,
        }),
    )
}
