use criterion::{criterion_group, criterion_main, Criterion};
use pqc_lens::analyzers::uniform_theta;
use pqc_lens::circuit::{gnm_random_graph, hardware_efficient_ansatz, qaoa_builder};
use pqc_lens::simulate;
use pqc_lens::trainer::gradient;

fn bench_simulate(c: &mut Criterion) {
    for n in [8, 12] {
        let circ = hardware_efficient_ansatz(n, 4).unwrap();
        let bound = circ.bind(&uniform_theta(circ.n_parameters(), 0)).unwrap();
        c.bench_function(&format!("simulate_hea_{n}q_4l"), |b| b.iter(|| simulate(&bound, None).unwrap()));
    }
}

fn bench_gradient(c: &mut Criterion) {
    let graph = gnm_random_graph(8, 20, 0).unwrap();
    for p in [1, 4] {
        let circ = qaoa_builder(&graph, p).unwrap();
        let theta = uniform_theta(circ.n_parameters(), 1);
        c.bench_function(&format!("gradient_qaoa_8n_p{p}"), |b| b.iter(|| gradient(&circ, &theta).unwrap()));
    }
}

criterion_group!(benches, bench_simulate, bench_gradient);
criterion_main!(benches);
