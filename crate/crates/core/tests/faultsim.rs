//! Out-of-domain mutants that pass the suite, and the experiment's handling
//! of them.

use std::path::Path;

use wmethod::exec::Exec;
use wmethod::faultsim::{self, Oracle};
use wmethod::formats::{read_machine, Machine};
use wmethod::fsm;
use wmethod::nominal::{self, double_atom_cover, OrbitSuite};
use wmethod::weighted;
use wmethod::words::{all_pass, w_suite, Suite};

fn load(name: &str) -> Machine {
    read_machine(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

#[test]
fn coffee_boundary_passes_both_suites() {
    let (Machine::Fsm(spec), Machine::Fsm(imp)) = (load("coffee.aut"), load("coffee_boundary.aut")) else {
        panic!("fixtures are fsms")
    };
    assert_eq!(imp.n_states(), spec.n_states() + 1);
    let a = spec.alphabet().clone();
    let p = fsm::state_cover(&spec).unwrap();
    let given_w = Suite::from_compact(a.clone(), &["", "c", "1"]).unwrap();
    for w in [given_w, fsm::char_set(&spec).unwrap()] {
        let t = w_suite(&p, &a, 0, &w).unwrap();
        assert!(all_pass(&fsm::agree_on(&spec, &imp, &t).unwrap()));
    }
    let cex = fsm::equiv(&spec, &imp).unwrap();
    assert_eq!(cex.counterexample().map(|w| a.render(w)).as_deref(), Some("1ce"));

    // One extra state is enough for W_1.
    let (_, r) = faultsim::evaluate_fsm(Exec::Sequential, &spec, 1, std::slice::from_ref(&imp)).unwrap();
    assert!(r[0].killed_by.is_some());

    let (_, r) = faultsim::evaluate_fsm(Exec::Sequential, &spec, 0, &[imp]).unwrap();
    assert!(!r[0].in_domain && r[0].killed_by.is_none() && r[0].oracle == Oracle::Inequiv);
    assert!(!r[0].is_violation());
}

#[test]
fn binary_boundary_passes_w1() {
    let (Machine::Wa(spec), Machine::Wa(imp)) = (load("binary.wa"), load("binary_boundary.wa")) else {
        panic!("fixtures are weighted")
    };
    let a = spec.alphabet().clone();
    let eb = Suite::from_compact(a.clone(), &["", "b"]).unwrap();
    assert!(!weighted::in_fault_domain_wa(&imp, &eb, 1).unwrap());
    let t = w_suite(&eb, &a, 1, &eb).unwrap();
    assert!(all_pass(&weighted::agree_on_wa(&spec, &imp, &t).unwrap()));
    let cex = weighted::equiv_wa(&spec, &imp).unwrap();
    assert_eq!(cex.counterexample().map(|w| a.render(w)).as_deref(), Some("aaaaa"));

    let (_, r) = faultsim::evaluate_wa(Exec::Sequential, &spec, 1, &[imp]).unwrap();
    assert!(!r[0].in_domain && r[0].killed_by.is_none() && !r[0].is_violation());
}

#[test]
fn double_boundary_passes_w0() {
    let (Machine::Rna(spec), Machine::Rna(imp)) = (load("double.rna"), load("double_boundary.rna")) else {
        panic!("fixtures are nominal")
    };
    let cover = double_atom_cover();
    let w = OrbitSuite::from_labels(&[&[], &[1], &[1, 1]]);
    let t = nominal::w_suite_rna(&cover.words, 0, &w).unwrap();
    assert!(all_pass(&nominal::agree_on_rna(&spec, &imp, &t)));
    assert!(nominal::find_weak_cover(&imp, &cover.words).is_none());
    let cex = nominal::equiv_rna(&spec, &imp).unwrap();
    assert_eq!(cex.counterexample().map(|p| p.len()), Some(7));

    let (_, r) = faultsim::evaluate_rna(Exec::Sequential, &spec, 0, &[imp]).unwrap();
    assert!(!r[0].in_domain && r[0].killed_by.is_none() && !r[0].is_violation());
}

#[test]
fn fixture_mutants_are_killed_and_in_domain() {
    let Machine::Rna(spec) = load("double.rna") else { panic!() };
    let muts: Vec<_> = ["double_flip.rna", "double_retarget.rna"]
        .iter()
        .map(|f| match load(f) {
            Machine::Rna(m) => m,
            _ => panic!(),
        })
        .collect();
    let (_, r) = faultsim::evaluate_rna(Exec::Sequential, &spec, 0, &muts).unwrap();
    for m in r {
        assert!(m.in_domain && m.killed_by.is_some() && m.oracle == Oracle::Inequiv);
    }
}
