use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use wmethod::exec::Exec;
use wmethod::faultsim::{self, Family, MutationSpec};
use wmethod::formats::Machine;
use wmethod::fsm::{self, Kind};
use wmethod::words::{w_suite, Alphabet};

fn strategies() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn agree_on_large_suite(c: &mut Criterion) {
    let a = Alphabet::new(["a", "b", "c"]).unwrap();
    let mut rng = faultsim::rng_from_seed(1);
    let spec = faultsim::random_minimal_fsm(&mut rng, Kind::Mealy, &a, 12);
    let imp = faultsim::mutate_fsm_once(&mut rng, &spec, 2, 12);
    let p = fsm::state_cover(&spec).unwrap();
    let w = fsm::char_set(&spec).unwrap();
    let t = w_suite(&p, &a, 2, &w).unwrap();
    let mut g = c.benchmark_group("agree_on");
    for (name, exec) in strategies() {
        g.bench_with_input(BenchmarkId::new(name, t.len()), &exec, |b, &exec| {
            b.iter(|| fsm::agree_on_with(exec, black_box(&spec), &imp, &t).unwrap())
        });
    }
    g.finish();
}

fn experiment(c: &mut Criterion) {
    let specs = [
        (Family::Fsm, Machine::Fsm(fsm::coffee_dfa())),
        (Family::Wa, Machine::Wa(wmethod::weighted::binary_value_wa())),
        (Family::Rna, Machine::Rna(wmethod::nominal::double_atom_rna())),
    ];
    let mut g = c.benchmark_group("completeness_experiment");
    g.sample_size(10);
    for (family, spec) in &specs {
        let ms = MutationSpec { family: *family, max_extra_states: 1, n_mutants: 50, seed: 3 };
        for (name, exec) in strategies() {
            g.bench_with_input(BenchmarkId::new(name, family), &exec, |b, &exec| {
                b.iter(|| faultsim::completeness_experiment_with(exec, spec, 1, &ms).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, agree_on_large_suite, experiment);
criterion_main!(benches);
