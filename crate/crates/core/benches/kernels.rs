//! Gate kernels and replication fan-out, sequential against parallel.
//!
//! With the default `parallel` feature each benchmark runs twice: inside a
//! one-thread rayon pool and inside the global pool. Build with
//! `--no-default-features` for the plain sequential loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sogas_core::dists::PerformanceDistribution;
use sogas_core::par;
use sogas_core::qcore::{uniform_superposition, Control, Gate, QubitLayout, RegisterName, StateVector};
use sogas_core::rng::{derive_seed, rng_from_seed};
use sogas_core::sogas::{sogas_run, ProblemInstance, SogasConfig};

const QUBITS: [usize; 3] = [12, 16, 20];

fn modes() -> Vec<(&'static str, Box<dyn Fn(&mut (dyn FnMut() + Send))>)> {
    #[cfg(feature = "parallel")]
    {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        vec![
            ("sequential", Box::new(move |f: &mut (dyn FnMut() + Send)| one.install(|| f()))),
            ("parallel", Box::new(|f: &mut (dyn FnMut() + Send)| f())),
        ]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![("sequential", Box::new(|f: &mut (dyn FnMut() + Send)| f()))]
    }
}

fn state(n: usize) -> StateVector {
    uniform_superposition(QubitLayout::single(RegisterName::X, n).unwrap(), RegisterName::X).unwrap()
}

fn gate_kernels(c: &mut Criterion) {
    let gates = [
        ("hadamard", Gate::H(3)),
        ("ry", Gate::Ry { target: 5, theta: 0.4 }),
        ("controlled_ry", Gate::controlled(Gate::Ry { target: 1, theta: 0.9 }, vec![Control::on(0), Control::off(7)]).unwrap()),
        ("phase_flip", Gate::phase_flip(|i| i % 5 == 0)),
    ];
    for (name, gate) in &gates {
        let mut g = c.benchmark_group(format!("gate/{name}"));
        for n in QUBITS {
            for (mode, run) in modes() {
                let mut s = state(n);
                g.bench_with_input(BenchmarkId::new(mode, n), &n, |b, _| {
                    b.iter(|| run(&mut || s.apply(black_box(gate)).unwrap()))
                });
            }
        }
        g.finish();
    }

    let mut g = c.benchmark_group("diffusion");
    for n in QUBITS {
        for (mode, run) in modes() {
            let mut s = state(n);
            g.bench_with_input(BenchmarkId::new(mode, n), &n, |b, _| {
                b.iter(|| run(&mut || s.grover_diffusion(RegisterName::X).unwrap()))
            });
        }
    }
    g.finish();
}

fn replication_fanout(c: &mut Criterion) {
    let sols = (0..16)
        .map(|i| {
            let p = 0.78 + 0.004 * i as f64;
            (format!("s{i}"), PerformanceDistribution::Bernoulli { p }.discretize(1).unwrap())
        })
        .collect();
    let inst = ProblemInstance::new(sols, 0.1, 0.05).unwrap();
    let mut g = c.benchmark_group("replications");
    g.sample_size(10);
    for (label, cfg) in [("contract", SogasConfig::contract(1.0)), ("hybrid", SogasConfig::statevector_hybrid())] {
        for (mode, run) in modes() {
            g.bench_function(BenchmarkId::new(mode, label), |b| {
                b.iter(|| {
                    run(&mut || {
                        let seeds: Vec<u64> = (0..32).map(|i| derive_seed(1, "bench", i)).collect();
                        let out = par::map_tasks(seeds, |s| sogas_run(&inst, &cfg, &mut rng_from_seed(s)).unwrap().total_queries());
                        black_box(out);
                    })
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, gate_kernels, replication_fanout);
criterion_main!(benches);
