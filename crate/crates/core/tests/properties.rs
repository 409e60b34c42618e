use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wmethod::exec::Exec;
use wmethod::faultsim::{self, Family, MutationSpec};
use wmethod::formats::Machine;
use wmethod::fsm::{self, Kind};
use wmethod::nominal::{self, concat_orbit, double_atom_cover, double_atom_rna, Atom, OrbitSuite, SymbolicWord};
use wmethod::weighted;
use wmethod::words::{all_pass, w_suite, Alphabet, Word};

fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(["a", "b", "c"][..n].iter().copied()).unwrap()
}

fn word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0usize..3, 0..6).prop_map(Word::from)
}

proptest! {
    #[test]
    fn concat_is_a_monoid(u in word(), v in word(), w in word()) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert_eq!(u.concat(&Word::empty()), u.clone());
        prop_assert_eq!(Word::empty().concat(&u), u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Passing `W_k` on a machine with at most `n + k` states means equivalence.
    #[test]
    fn fsm_suite_is_complete(seed in any::<u64>(), kind in 0usize..3, n in 1usize..=4, k in 0usize..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = [Kind::Dfa, Kind::Moore, Kind::Mealy][kind];
        let a = alphabet(2);
        let spec = faultsim::random_minimal_fsm(&mut rng, kind, &a, n);
        let p = fsm::state_cover(&spec).unwrap();
        let w = fsm::char_set(&spec).unwrap();
        let t = w_suite(&p, &a, k, &w).unwrap();
        for _ in 0..20 {
            let m = faultsim::mutate_fsm_once(&mut rng, &spec, k, n);
            prop_assert!(m.n_states() <= n + k);
            if all_pass(&fsm::agree_on(&spec, &m, &t).unwrap()) {
                prop_assert!(fsm::equiv(&spec, &m).unwrap().is_equivalent());
            }
        }
    }

    #[test]
    fn wa_suite_is_complete(seed in any::<u64>(), dim in 1usize..=3, k in 0usize..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = alphabet(2);
        let spec = faultsim::random_minimal_wa(&mut rng, &a, dim);
        let (p, w) = faultsim::wa_cover_and_char_set(&spec);
        let t = w_suite(&p, &a, k, &w).unwrap();
        for _ in 0..20 {
            let m = faultsim::mutate_wa_once(&mut rng, &spec, k > 0);
            if weighted::in_fault_domain_wa(&m, &p, k).unwrap()
                && all_pass(&weighted::agree_on_wa(&spec, &m, &t).unwrap())
            {
                prop_assert!(weighted::equiv_wa(&spec, &m).unwrap().is_equivalent());
            }
        }
    }

    /// Acceptance is invariant under injective renaming of atoms.
    #[test]
    fn rna_acceptance_is_equivariant(seed in any::<u64>(), locs in 1usize..=4, arity in 0usize..=2, len in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = faultsim::random_rna(&mut rng, locs, arity);
        let w: Vec<Atom> = (0..len).map(|_| Atom(rng.gen_range(0..4))).collect();
        let mut image: Vec<u64> = (100..120).collect();
        image.shuffle(&mut rng);
        let moved: Vec<Atom> = w.iter().map(|x| Atom(image[x.0 as usize])).collect();
        let s = a.initial_state();
        prop_assert_eq!(a.accepts_from(&s, &w), a.accepts_from(&s, &moved));
        prop_assert_eq!(nominal::rna_run(&a, &w).loc, nominal::symbolic_run(&a, &SymbolicWord::from_atoms(&w)).0);
    }

    /// Every concrete concatenation lands in the decomposition, and every
    /// orbit of the decomposition splits back into the two factors.
    #[test]
    fn concat_orbit_decomposes(
        x in proptest::collection::vec(0u64..4, 0..4),
        y in proptest::collection::vec(0u64..4, 0..4),
    ) {
        let (x, y): (Vec<Atom>, Vec<Atom>) = (x.into_iter().map(Atom).collect(), y.into_iter().map(Atom).collect());
        let u = SymbolicWord::from_atoms(&x);
        let v = SymbolicWord::from_atoms(&y);
        let c = concat_orbit(&OrbitSuite::from_patterns([u.clone()]), &OrbitSuite::from_patterns([v.clone()]));
        let xy: Vec<Atom> = x.iter().chain(&y).copied().collect();
        prop_assert!(c.contains(&SymbolicWord::from_atoms(&xy)));
        for s in &c {
            let l = s.labels();
            prop_assert_eq!(SymbolicWord::from_labels(&l[..u.len()]), u.clone());
            prop_assert_eq!(SymbolicWord::from_labels(&l[u.len()..]), v.clone());
        }
    }

    /// Mutants of the double-atom automaton that admit a weak cover on the
    /// hand-written `P` and pass `W_0` are equivalent to it.
    #[test]
    fn double_atom_suite_is_complete(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = double_atom_rna();
        let p = double_atom_cover().words;
        let w = OrbitSuite::from_labels(&[&[], &[1], &[1, 1]]);
        let t = nominal::w_suite_rna(&p, 0, &w).unwrap();
        for _ in 0..10 {
            let mut m = faultsim::mutate_rna_once(&mut rng, &spec);
            if rng.gen_bool(0.5) {
                m = faultsim::mutate_rna_once(&mut rng, &m);
            }
            if nominal::find_weak_cover(&m, &p).is_some() && all_pass(&nominal::agree_on_rna(&spec, &m, &t)) {
                prop_assert!(nominal::equiv_rna(&spec, &m).unwrap().is_equivalent());
            }
        }
    }
}

#[test]
fn experiments_are_deterministic_across_strategies() {
    let specs = [
        (Family::Fsm, Machine::Fsm(fsm::coffee_dfa())),
        (Family::Wa, Machine::Wa(weighted::binary_value_wa())),
        (Family::Rna, Machine::Rna(double_atom_rna())),
    ];
    for (family, spec) in specs {
        let ms = MutationSpec { family, max_extra_states: 1, n_mutants: 15, seed: 5 };
        let a = faultsim::completeness_experiment_with(Exec::Sequential, &spec, 1, &ms).unwrap();
        let b = faultsim::completeness_experiment_with(Exec::Parallel, &spec, 1, &ms).unwrap();
        assert_eq!(a.render(), b.render());
        assert!(a.passed(), "{}", a.render());
    }
}
