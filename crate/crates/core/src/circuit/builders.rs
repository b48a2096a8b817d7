use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Angle, CircuitDescriptor, Gate, GateKind, ParameterId, Pauli, PauliSum, PauliTerm};
use crate::error::{Error, Result};

/// Incremental circuit construction. Parameters are declared in order of
/// first use unless declared up front with [`CircuitBuilder::param`].
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n_qubits: usize,
    parameters: Vec<String>,
    gates: Vec<Gate>,
    cost: Option<PauliSum>,
}

impl CircuitBuilder {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            parameters: Vec::new(),
            gates: Vec::new(),
            cost: None,
        }
    }

    pub fn param(mut self, name: &str) -> Self {
        if !self.parameters.iter().any(|p| p == name) {
            self.parameters.push(name.to_string());
        }
        self
    }

    fn fixed(mut self, kind: GateKind, targets: Vec<usize>, angle: Option<f64>) -> Self {
        self.gates.push(Gate {
            kind,
            targets,
            angle: angle.map(Angle::Fixed),
        });
        self
    }

    fn symbolic(mut self, kind: GateKind, q: usize, name: &str, prefactor: f64) -> Self {
        self = self.param(name);
        self.gates.push(Gate {
            kind,
            targets: vec![q],
            angle: Some(Angle::Symbol {
                param: ParameterId {
                    name: name.to_string(),
                    index: usize::MAX,
                },
                prefactor,
            }),
        });
        self
    }

    pub fn h(self, q: usize) -> Self {
        self.fixed(GateKind::H, vec![q], None)
    }
    pub fn x(self, q: usize) -> Self {
        self.fixed(GateKind::X, vec![q], None)
    }
    pub fn y(self, q: usize) -> Self {
        self.fixed(GateKind::Y, vec![q], None)
    }
    pub fn z(self, q: usize) -> Self {
        self.fixed(GateKind::Z, vec![q], None)
    }
    pub fn rx(self, q: usize, angle: f64) -> Self {
        self.fixed(GateKind::RX, vec![q], Some(angle))
    }
    pub fn ry(self, q: usize, angle: f64) -> Self {
        self.fixed(GateKind::RY, vec![q], Some(angle))
    }
    pub fn rz(self, q: usize, angle: f64) -> Self {
        self.fixed(GateKind::RZ, vec![q], Some(angle))
    }
    pub fn cx(self, control: usize, target: usize) -> Self {
        self.fixed(GateKind::CX, vec![control, target], None)
    }
    pub fn cz(self, a: usize, b: usize) -> Self {
        self.fixed(GateKind::CZ, vec![a, b], None)
    }
    pub fn rx_param(self, q: usize, name: &str) -> Self {
        self.symbolic(GateKind::RX, q, name, 1.0)
    }
    pub fn ry_param(self, q: usize, name: &str) -> Self {
        self.symbolic(GateKind::RY, q, name, 1.0)
    }
    pub fn rz_param(self, q: usize, name: &str) -> Self {
        self.symbolic(GateKind::RZ, q, name, 1.0)
    }
    pub fn rx_scaled(self, q: usize, name: &str, prefactor: f64) -> Self {
        self.symbolic(GateKind::RX, q, name, prefactor)
    }
    pub fn ry_scaled(self, q: usize, name: &str, prefactor: f64) -> Self {
        self.symbolic(GateKind::RY, q, name, prefactor)
    }
    pub fn rz_scaled(self, q: usize, name: &str, prefactor: f64) -> Self {
        self.symbolic(GateKind::RZ, q, name, prefactor)
    }

    pub fn cost(mut self, cost: PauliSum) -> Self {
        self.cost = Some(cost);
        self
    }

    pub fn build(self) -> Result<CircuitDescriptor> {
        CircuitDescriptor::new(self.n_qubits, self.parameters, self.gates, self.cost)
    }
}

/// Simple undirected graph for MaxCut instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::InvalidArgument("graph needs at least 2 nodes".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidArgument("graph has no edges".into()));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop on node {u}")));
            }
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::QubitOutOfRange {
                    qubit: u.max(v),
                    n_qubits: n_nodes,
                });
            }
            let key = (u.min(v), u.max(v));
            if edges[..i].iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
                return Err(Error::InvalidArgument(format!("duplicate edge {key:?}")));
            }
        }
        Ok(Self { n_nodes, edges })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges crossing the partition given by `side`.
    pub fn cut_size(&self, side: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| side[u] != side[v]).count()
    }

    /// Exhaustive maximum cut; feasible up to ~25 nodes.
    pub fn max_cut(&self) -> usize {
        (0u64..1 << self.n_nodes)
            .map(|mask| {
                let side: Vec<bool> = (0..self.n_nodes).map(|i| mask >> i & 1 == 1).collect();
                self.cut_size(&side)
            })
            .max()
            .unwrap_or(0)
    }
}

/// G(n, m) random graph: `m` distinct edges drawn uniformly, sorted.
pub fn gnm_random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    if m > pairs.len() {
        return Err(Error::InvalidArgument(format!(
            "{m} edges requested but a {n}-node graph has at most {}",
            pairs.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    let mut edges = pairs[..m].to_vec();
    edges.sort_unstable();
    Graph::new(n, edges)
}

/// QAOA ansatz for MaxCut: a Hadamard layer followed by `p` blocks of
/// `CX·RZ(γ_i)·CX` per edge and `RX(2β_i)` per qubit. Parameters are laid out
/// as `[γ_0, β_0, γ_1, β_1, ...]`; the cost is `Σ_edges ½ Z_u Z_v`.
pub fn qaoa_builder(graph: &Graph, p: usize) -> Result<CircuitDescriptor> {
    if p == 0 {
        return Err(Error::InvalidArgument("QAOA needs p >= 1".into()));
    }
    let n = graph.n_nodes();
    let mut b = CircuitBuilder::new(n);
    for i in 0..p {
        b = b.param(&format!("gamma_{i}")).param(&format!("beta_{i}"));
    }
    for q in 0..n {
        b = b.h(q);
    }
    for i in 0..p {
        let gamma = format!("gamma_{i}");
        let beta = format!("beta_{i}");
        for &(u, v) in graph.edges() {
            b = b.cx(u, v).rz_param(v, &gamma).cx(u, v);
        }
        for q in 0..n {
            b = b.rx_scaled(q, &beta, 2.0);
        }
    }
    let cost = PauliSum::new(
        graph
            .edges()
            .iter()
            .map(|&(u, v)| PauliTerm::new(0.5, [(u, Pauli::Z), (v, Pauli::Z)]))
            .collect(),
    )?;
    b.cost(cost).build()
}

fn rotation_block(mut b: CircuitBuilder, n: usize, layer: usize) -> CircuitBuilder {
    for q in 0..n {
        b = b
            .rx_param(q, &format!("theta_{layer}_{q}_0"))
            .rz_param(q, &format!("theta_{layer}_{q}_1"))
            .rx_param(q, &format!("theta_{layer}_{q}_2"));
    }
    b
}

/// `L` layers of `RX·RZ·RX` on every qubit followed by `CX(i, j)` for all
/// `i < j`.
pub fn hardware_efficient_ansatz(n: usize, layers: usize) -> Result<CircuitDescriptor> {
    let mut b = CircuitBuilder::new(n);
    for l in 0..layers {
        b = rotation_block(b, n, l);
        for i in 0..n {
            for j in i + 1..n {
                b = b.cx(i, j);
            }
        }
    }
    b.build()
}

/// `L` layers of `RX·RZ·RX` on every qubit followed by a `CX(i, i+1)` chain.
pub fn linear_chain_ansatz(n: usize, layers: usize) -> Result<CircuitDescriptor> {
    let mut b = CircuitBuilder::new(n);
    for l in 0..layers {
        b = rotation_block(b, n, l);
        for i in 0..n.saturating_sub(1) {
            b = b.cx(i, i + 1);
        }
    }
    b.build()
}

/// One `RX·RZ·RX` layer followed by the given `CX` pairs.
pub fn rotation_layer_with_entanglers(
    n: usize,
    pairs: &[(usize, usize)],
) -> Result<CircuitDescriptor> {
    let mut b = rotation_block(CircuitBuilder::new(n), n, 0);
    for &(c, t) in pairs {
        b = b.cx(c, t);
    }
    b.build()
}

/// Identity-learning ansatz: `RX(q, θ_q)` on every qubit, then a `CZ` chain.
/// For two qubits this is `RX(0, θ_1) RX(1, θ_2) CZ(0, 1)`.
pub fn identity_ansatz(n: usize) -> Result<CircuitDescriptor> {
    if n < 2 {
        return Err(Error::InvalidArgument("identity ansatz needs 2+ qubits".into()));
    }
    let mut b = CircuitBuilder::new(n);
    for q in 0..n {
        b = b.rx_param(q, &format!("theta_{}", q + 1));
    }
    for q in 0..n - 1 {
        b = b.cz(q, q + 1);
    }
    b.build()
}
