//! Mutant sampling inside fault domains, and completeness experiments that
//! run the W-method suite against every mutant and ask the equivalence
//! oracle about the survivors.

use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::Exec;
use crate::formats::Machine;
use crate::fsm::{self, Fsm, FsmError, Kind, Outputs};
use crate::nominal::{
    self, concat_orbit, patterns_upto, Guard, Location, NominalError, OrbitSuite, Rna, Rule,
    Source,
};
use crate::weighted::{self, Rat, Wa, WaError};
use crate::words::{self, w_suite, Alphabet, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Fsm,
    Wa,
    Rna,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fsm => "fsm",
            Family::Wa => "wa",
            Family::Rna => "rna",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MutationSpec {
    pub family: Family,
    pub max_extra_states: usize,
    pub n_mutants: usize,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum FaultsimError {
    #[error(transparent)]
    Fsm(#[from] FsmError),
    #[error(transparent)]
    Wa(#[from] WaError),
    #[error(transparent)]
    Nominal(#[from] NominalError),
    #[error("specification is not minimal")]
    NotMinimal,
    #[error("mutation spec is for family {spec}, machine is {machine}")]
    FamilyMismatch { spec: Family, machine: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    Equiv,
    Inequiv,
    Timeout,
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Oracle::Equiv => "equiv",
            Oracle::Inequiv => "inequiv",
            Oracle::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantResult {
    pub index: usize,
    pub in_domain: bool,
    /// First failing suite word, rendered.
    pub killed_by: Option<String>,
    pub oracle: Oracle,
}

impl MutantResult {
    /// An in-domain mutant that passes the suite without being equivalent.
    pub fn is_violation(&self) -> bool {
        self.in_domain && self.killed_by.is_none() && self.oracle != Oracle::Equiv
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub family: Family,
    pub seed: u64,
    pub k: usize,
    pub suite_size: usize,
    /// Samples thrown away because they fell outside the fault domain.
    pub discarded: usize,
    pub mutants: Vec<MutantResult>,
}

impl Report {
    pub fn violations(&self) -> usize {
        self.mutants.iter().filter(|m| m.is_violation()).count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# faultsim family={} seed={} k={} n_mutants={} suite_size={}",
            self.family,
            self.seed,
            self.k,
            self.mutants.len(),
            self.suite_size
        );
        for m in &self.mutants {
            let _ = writeln!(
                s,
                "mutant {} {} {} oracle {}",
                m.index,
                if m.in_domain { "in-domain" } else { "out-domain" },
                m.killed_by
                    .as_ref()
                    .map_or("survived".to_string(), |w| format!("killed-by {w}")),
                m.oracle
            );
        }
        let count = |f: &dyn Fn(&MutantResult) -> bool| self.mutants.iter().filter(|m| f(m)).count();
        let _ = writeln!(
            s,
            "summary mutants={} in-domain={} killed={} equivalent={} out-domain-survivors={} discarded={} violations={} result={}",
            self.mutants.len(),
            count(&|m| m.in_domain),
            count(&|m| m.killed_by.is_some()),
            count(&|m| m.oracle == Oracle::Equiv),
            count(&|m| !m.in_domain && m.killed_by.is_none()),
            self.discarded,
            self.violations(),
            if self.passed() { "pass" } else { "fail" }
        );
        s
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_output(rng: &mut impl Rng, kind: Kind, current: &str, pool: &[String]) -> String {
    if kind == Kind::Dfa {
        return if current == "1" { "0" } else { "1" }.to_string();
    }
    let others: Vec<&String> = pool.iter().filter(|v| *v != current).collect();
    match others.choose(rng) {
        Some(v) if rng.gen_bool(0.7) => (*v).clone(),
        _ => format!("{current}'"),
    }
}

fn output_pool(m: &Fsm) -> Vec<String> {
    let mut pool: Vec<String> = match m.outputs() {
        Outputs::PerState(o) => o.clone(),
        Outputs::PerTransition(o) => o.iter().flatten().cloned().collect(),
    };
    pool.sort();
    pool.dedup();
    pool
}

fn random_state_output(rng: &mut impl Rng, kind: Kind, pool: &[String], width: usize) -> Outputs {
    let pick = |rng: &mut _| match kind {
        Kind::Dfa => if Rng::gen_bool(rng, 0.5) { "1" } else { "0" }.to_string(),
        _ => pool.choose(rng).cloned().unwrap_or_else(|| "0".into()),
    };
    match kind {
        Kind::Mealy => Outputs::PerTransition(vec![(0..width).map(|_| pick(rng)).collect()]),
        _ => Outputs::PerState(vec![pick(rng)]),
    }
}

/// Appends states with the given rows and outputs.
pub fn add_states(m: &Fsm, rows: Vec<Vec<usize>>, outputs: Outputs) -> Result<Fsm, FsmError> {
    let mut delta = m.transitions().to_vec();
    delta.extend(rows);
    let out = match (m.outputs().clone(), outputs) {
        (Outputs::PerState(mut a), Outputs::PerState(b)) => {
            a.extend(b);
            Outputs::PerState(a)
        }
        (Outputs::PerTransition(mut a), Outputs::PerTransition(b)) => {
            a.extend(b);
            Outputs::PerTransition(a)
        }
        _ => return Err(FsmError::OutputShape),
    };
    Fsm::new(m.kind(), m.alphabet().clone(), m.initial(), delta, out)
}

/// Copy with the output of state `q` (or of the transition `q, a` for Mealy
/// machines) replaced.
pub fn with_output(m: &Fsm, q: usize, a: usize, v: String) -> Result<Fsm, FsmError> {
    let out = match m.outputs().clone() {
        Outputs::PerState(mut o) => {
            o[q] = v;
            Outputs::PerState(o)
        }
        Outputs::PerTransition(mut o) => {
            o[q][a] = v;
            Outputs::PerTransition(o)
        }
    };
    Fsm::new(m.kind(), m.alphabet().clone(), m.initial(), m.transitions().to_vec(), out)
}

/// One random mutation of `m`, keeping at most `base_n + k` states.
pub fn mutate_fsm_once(rng: &mut impl Rng, m: &Fsm, k: usize, base_n: usize) -> Fsm {
    let n = m.n_states();
    let sigma = m.alphabet().len();
    let room = (base_n + k).saturating_sub(n);
    let op = rng.gen_range(0..if room > 0 { 3 } else { 2 });
    match op {
        0 if n > 1 => {
            let (q, a) = (rng.gen_range(0..n), rng.gen_range(0..sigma));
            let old = m.delta(q, a);
            let mut t = rng.gen_range(0..n - 1);
            if t >= old {
                t += 1;
            }
            m.with_transition(q, a, t)
        }
        2 => {
            let extra = rng.gen_range(1..=room);
            let total = n + extra;
            let pool = output_pool(m);
            let mut rows = Vec::new();
            let mut outs = match m.kind() {
                Kind::Mealy => Outputs::PerTransition(Vec::new()),
                _ => Outputs::PerState(Vec::new()),
            };
            for _ in 0..extra {
                rows.push((0..sigma).map(|_| rng.gen_range(0..total)).collect());
                match (&mut outs, random_state_output(rng, m.kind(), &pool, sigma)) {
                    (Outputs::PerState(a), Outputs::PerState(b)) => a.extend(b),
                    (Outputs::PerTransition(a), Outputs::PerTransition(b)) => a.extend(b),
                    _ => unreachable!("same kind"),
                }
            }
            let grown = add_states(m, rows, outs).expect("rows sized to the alphabet");
            let (q, a) = (rng.gen_range(0..n), rng.gen_range(0..sigma));
            grown.with_transition(q, a, n)
        }
        _ => {
            let (q, a) = (rng.gen_range(0..n), rng.gen_range(0..sigma));
            let current = match m.outputs() {
                Outputs::PerState(o) => o[q].clone(),
                Outputs::PerTransition(o) => o[q][a].clone(),
            };
            let v = pick_output(rng, m.kind(), &current, &output_pool(m));
            with_output(m, q, a, v).expect("output of the right kind")
        }
    }
}

/// Mutants with at most `n + max_extra_states` states. Each applies one or
/// two operators: redirect a transition, change an output, or add fresh
/// states with random rows and redirect a transition into them.
pub fn gen_mutants_fsm(spec: &Fsm, ms: &MutationSpec) -> Vec<Fsm> {
    let mut rng = rng_from_seed(ms.seed);
    let n = spec.n_states();
    (0..ms.n_mutants)
        .map(|_| {
            let mut m = mutate_fsm_once(&mut rng, spec, ms.max_extra_states, n);
            if rng.gen_bool(0.3) {
                m = mutate_fsm_once(&mut rng, &m, ms.max_extra_states, n);
            }
            m
        })
        .collect()
}

/// Runs the `W_k` suite of a minimal spec against the given mutants. A
/// mutant is in the domain iff it has at most `n + k` states.
pub fn evaluate_fsm(
    exec: Exec,
    spec: &Fsm,
    k: usize,
    mutants: &[Fsm],
) -> Result<(Suite, Vec<MutantResult>), FaultsimError> {
    if !fsm::is_minimal(spec) {
        return Err(FaultsimError::NotMinimal);
    }
    let p = fsm::state_cover(spec)?;
    let w = fsm::char_set(spec)?;
    let t = w_suite(&p, spec.alphabet(), k, &w).map_err(FsmError::from)?;
    let indexed: Vec<(usize, &Fsm)> = mutants.iter().enumerate().collect();
    let results = exec.map(&indexed, |(i, m)| -> Result<MutantResult, FsmError> {
        let verdicts = fsm::agree_on_with(Exec::Sequential, spec, m, &t)?;
        let killed_by = verdicts
            .iter()
            .find(|v| !v.pass)
            .map(|v| spec.alphabet().render(&v.word));
        let oracle = if fsm::equiv(spec, m)?.is_equivalent() {
            Oracle::Equiv
        } else {
            Oracle::Inequiv
        };
        Ok(MutantResult {
            index: *i,
            in_domain: m.n_states() <= spec.n_states() + k,
            killed_by,
            oracle,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((t, results))
}

/// Small nonzero perturbations used by weighted mutants.
fn perturbation(rng: &mut impl Rng) -> Rat {
    let choices = [(1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)];
    let (p, q) = choices[rng.gen_range(0..choices.len())];
    Rat::new(p.into(), q.into())
}

fn small_rat(rng: &mut impl Rng) -> Rat {
    Rat::from_integer(rng.gen_range(-2..=2).into())
}

/// Copy of `a` with `extra` zero states appended.
pub fn grow_wa(a: &Wa, extra: usize) -> Wa {
    let n = a.dim();
    let mut out = Wa::zero(a.alphabet().clone(), n + extra);
    for i in 0..n {
        out.set_init(i, a.init()[i].clone());
        out.set_final(i, a.fin()[i].clone());
        for s in 0..a.alphabet().len() {
            for j in 0..n {
                out.set_weight(i, s, j, a.weight(i, s, j).clone());
            }
        }
    }
    out
}

/// Perturbs one entry by a small nonzero rational, or appends a state.
pub fn mutate_wa_once(rng: &mut impl Rng, a: &Wa, allow_grow: bool) -> Wa {
    let sigma = a.alphabet().len();
    if allow_grow && rng.gen_bool(0.3) {
        let n = a.dim();
        let mut m = grow_wa(a, 1);
        // Reach the new state from a random old one and give it random rows.
        m.set_weight(rng.gen_range(0..n.max(1)), rng.gen_range(0..sigma), n, perturbation(rng));
        m.set_final(n, small_rat(rng));
        for s in 0..sigma {
            for j in 0..=n {
                if rng.gen_bool(0.3) {
                    m.set_weight(n, s, j, small_rat(rng));
                }
            }
        }
        return m;
    }
    let mut m = a.clone();
    let n = a.dim();
    if n == 0 {
        return grow_wa(a, 1);
    }
    let d = perturbation(rng);
    match rng.gen_range(0..4) {
        0 => {
            let i = rng.gen_range(0..n);
            m.set_init(i, a.init()[i].clone() + d);
        }
        1 => {
            let i = rng.gen_range(0..n);
            m.set_final(i, a.fin()[i].clone() + d);
        }
        _ => {
            let (i, s, j) = (rng.gen_range(0..n), rng.gen_range(0..sigma), rng.gen_range(0..n));
            m.set_weight(i, s, j, a.weight(i, s, j).clone() + d);
        }
    }
    m
}

/// Samples mutants of `spec` and keeps those in `U^WA_k(p)`, drawing at most
/// `100 · n_mutants` samples. Returns the kept mutants and the number of
/// discarded samples.
pub fn gen_mutants_wa(
    spec: &Wa,
    p: &Suite,
    k: usize,
    ms: &MutationSpec,
) -> Result<(Vec<Wa>, usize), WaError> {
    let mut rng = rng_from_seed(ms.seed);
    let mut kept = Vec::new();
    let mut discarded = 0;
    let cap = 100 * ms.n_mutants;
    let mut attempts = 0;
    while kept.len() < ms.n_mutants && attempts < cap {
        attempts += 1;
        let grow = ms.max_extra_states > 0;
        let mut m = mutate_wa_once(&mut rng, spec, grow);
        if rng.gen_bool(0.3) {
            m = mutate_wa_once(&mut rng, &m, grow && m.dim() < spec.dim() + ms.max_extra_states);
        }
        if weighted::in_fault_domain_wa(&m, p, k)? {
            kept.push(m);
        } else {
            discarded += 1;
        }
    }
    Ok((kept, discarded))
}

/// Runs `W_k(p, w)` for a minimal weighted spec against the given mutants,
/// with `p` and `w` the forward and backward witnesses of `spec`.
pub fn evaluate_wa(
    exec: Exec,
    spec: &Wa,
    k: usize,
    mutants: &[Wa],
) -> Result<(Suite, Vec<MutantResult>), FaultsimError> {
    if !weighted::is_minimal_wa(spec) {
        return Err(FaultsimError::NotMinimal);
    }
    let (p, w) = wa_cover_and_char_set(spec);
    let t = w_suite(&p, spec.alphabet(), k, &w).map_err(WaError::from)?;
    let indexed: Vec<(usize, &Wa)> = mutants.iter().enumerate().collect();
    let results = exec.map(&indexed, |(i, m)| -> Result<MutantResult, WaError> {
        let verdicts = weighted::agree_on_wa_with(Exec::Sequential, spec, m, &t)?;
        let killed_by = verdicts
            .iter()
            .find(|v| !v.pass)
            .map(|v| spec.alphabet().render(&v.word));
        let oracle = if weighted::equiv_wa(spec, m)?.is_equivalent() {
            Oracle::Equiv
        } else {
            Oracle::Inequiv
        };
        Ok(MutantResult {
            index: *i,
            in_domain: weighted::in_fault_domain_wa(m, &p, k)?,
            killed_by,
            oracle,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((t, results))
}

/// Forward witnesses (a state cover) and backward witnesses (a
/// characterization set), each with `ε` added so that they are usable even
/// for the zero language.
pub fn wa_cover_and_char_set(spec: &Wa) -> (Suite, Suite) {
    let mut p = weighted::witness_suite(spec, &weighted::forward_basis(spec));
    let mut w = weighted::witness_suite(spec, &weighted::backward_basis(spec));
    p.insert(words::Word::empty()).expect("ε is over any alphabet");
    w.insert(words::Word::empty()).expect("ε is over any alphabet");
    (p, w)
}

/// A random rule from location `l` under `guard` with an injective
/// assignment.
fn random_rule(rng: &mut impl Rng, locs: &[Location], l: usize, guard: Guard) -> Rule {
    let mut sources: Vec<Source> = (0..locs[l].arity).map(Source::Reg).collect();
    if guard == Guard::Fresh {
        sources.push(Source::Input);
    }
    let targets: Vec<usize> = (0..locs.len())
        .filter(|&t| locs[t].arity <= sources.len())
        .collect();
    let target = *targets.choose(rng).expect("arity-0 initial location always fits");
    sources.shuffle(rng);
    sources.truncate(locs[target].arity);
    Rule {
        target,
        assign: sources,
    }
}

/// A random automaton with `n_locs` locations of arity at most `max_arity`;
/// location 0 is initial with arity 0.
pub fn random_rna(rng: &mut impl Rng, n_locs: usize, max_arity: usize) -> Rna {
    let locs: Vec<Location> = (0..n_locs)
        .map(|i| Location {
            name: format!("l{i}"),
            arity: if i == 0 { 0 } else { rng.gen_range(0..=max_arity) },
        })
        .collect();
    let rules = (0..n_locs)
        .map(|l| {
            (0..locs[l].arity)
                .map(Guard::Eq)
                .chain([Guard::Fresh])
                .map(|g| random_rule(rng, &locs, l, g))
                .collect()
        })
        .collect();
    let accepting = (0..n_locs).map(|_| rng.gen_bool(0.4)).collect();
    Rna::new(locs, 0, accepting, rules).expect("generated rules are valid")
}

/// Flips an accepting bit or replaces one rule by a random valid one.
pub fn mutate_rna_once(rng: &mut impl Rng, a: &Rna) -> Rna {
    let l = rng.gen_range(0..a.n_locations());
    if rng.gen_bool(0.4) {
        return a.with_accepting(l, !a.is_accepting(l));
    }
    let arity = a.locations()[l].arity;
    let g = match rng.gen_range(0..=arity) {
        i if i < arity => Guard::Eq(i),
        _ => Guard::Fresh,
    };
    let rule = random_rule(rng, a.locations(), l, g);
    a.with_rule(l, g, rule).expect("generated rule is valid")
}

/// Mutants that admit a weak state cover on `p · A^{≤k}`, drawing at most
/// `100 · n_mutants` samples.
pub fn gen_mutants_rna(spec: &Rna, p: &OrbitSuite, k: usize, ms: &MutationSpec) -> (Vec<Rna>, usize) {
    let mut rng = rng_from_seed(ms.seed);
    let c = concat_orbit(p, &patterns_upto(k));
    let mut kept = Vec::new();
    let mut discarded = 0;
    let mut attempts = 0;
    while kept.len() < ms.n_mutants && attempts < 100 * ms.n_mutants {
        attempts += 1;
        let mut m = mutate_rna_once(&mut rng, spec);
        if rng.gen_bool(0.3) {
            m = mutate_rna_once(&mut rng, &m);
        }
        if nominal::find_weak_cover(&m, &c).is_some() {
            kept.push(m);
        } else {
            discarded += 1;
        }
    }
    (kept, discarded)
}

pub const RNA_COVER_LIMIT: usize = 256;

/// Runs `W_k(P, W)` on patterns for a minimal nominal spec, with `P` its
/// computed weak state cover and `W` its computed characterization set.
pub fn evaluate_rna(
    exec: Exec,
    spec: &Rna,
    k: usize,
    mutants: &[Rna],
) -> Result<(OrbitSuite, Vec<MutantResult>), FaultsimError> {
    let w = nominal::char_set_rna(spec)?;
    let p = nominal::weak_cover_rna(spec, RNA_COVER_LIMIT)?.words;
    let t = nominal::w_suite_rna(&p, k, &w)?;
    let c = concat_orbit(&p, &patterns_upto(k));
    let indexed: Vec<(usize, &Rna)> = mutants.iter().enumerate().collect();
    let results = exec.map(&indexed, |(i, m)| {
        let verdicts = nominal::agree_on_rna_with(Exec::Sequential, spec, m, &t);
        let killed_by = verdicts.iter().find(|v| !v.pass).map(|v| v.word.to_string());
        let oracle = match nominal::equiv_rna(spec, m) {
            Ok(e) if e.is_equivalent() => Oracle::Equiv,
            Ok(_) => Oracle::Inequiv,
            Err(_) => Oracle::Timeout,
        };
        MutantResult {
            index: *i,
            in_domain: nominal::find_weak_cover(m, &c).is_some(),
            killed_by,
            oracle,
        }
    });
    Ok((t, results))
}

/// Samples mutants per `ms` and evaluates them against the `W_k` suite of
/// `spec`. The report is identical for identical inputs.
pub fn completeness_experiment(
    spec: &Machine,
    k: usize,
    ms: &MutationSpec,
) -> Result<Report, FaultsimError> {
    completeness_experiment_with(Exec::default(), spec, k, ms)
}

pub fn completeness_experiment_with(
    exec: Exec,
    spec: &Machine,
    k: usize,
    ms: &MutationSpec,
) -> Result<Report, FaultsimError> {
    let (suite_size, discarded, mutants) = match (ms.family, spec) {
        (Family::Fsm, Machine::Fsm(s)) => {
            let muts = gen_mutants_fsm(s, ms);
            let (t, r) = evaluate_fsm(exec, s, k, &muts)?;
            (t.len(), 0, r)
        }
        (Family::Wa, Machine::Wa(s)) => {
            if !weighted::is_minimal_wa(s) {
                return Err(FaultsimError::NotMinimal);
            }
            let (p, _) = wa_cover_and_char_set(s);
            let (muts, discarded) = gen_mutants_wa(s, &p, k, ms)?;
            let (t, r) = evaluate_wa(exec, s, k, &muts)?;
            (t.len(), discarded, r)
        }
        (Family::Rna, Machine::Rna(s)) => {
            if !nominal::is_minimal_rna(s) {
                return Err(FaultsimError::NotMinimal);
            }
            let p = nominal::weak_cover_rna(s, RNA_COVER_LIMIT)?.words;
            let (muts, discarded) = gen_mutants_rna(s, &p, k, ms);
            let (t, r) = evaluate_rna(exec, s, k, &muts)?;
            (t.len(), discarded, r)
        }
        (family, m) => {
            return Err(FaultsimError::FamilyMismatch {
                spec: family,
                machine: m.family(),
            })
        }
    };
    Ok(Report {
        family: ms.family,
        seed: ms.seed,
        k,
        suite_size,
        discarded,
        mutants,
    })
}

/// A random machine with `n` states whose transitions and outputs are
/// uniform; DFAs get outputs `0`/`1`, other kinds draw from `n_outputs`
/// values.
pub fn random_fsm(rng: &mut impl Rng, kind: Kind, alphabet: &Alphabet, n: usize, n_outputs: usize) -> Fsm {
    let sigma = alphabet.len();
    let delta = (0..n)
        .map(|_| (0..sigma).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let value = |rng: &mut _| match kind {
        Kind::Dfa => Rng::gen_range(rng, 0..2).to_string(),
        _ => Rng::gen_range(rng, 0..n_outputs.max(1)).to_string(),
    };
    let outputs = match kind {
        Kind::Mealy => Outputs::PerTransition(
            (0..n).map(|_| (0..sigma).map(|_| value(rng)).collect()).collect(),
        ),
        _ => Outputs::PerState((0..n).map(|_| value(rng)).collect()),
    };
    Fsm::new(kind, alphabet.clone(), 0, delta, outputs).expect("generated table is valid")
}

/// A random minimal machine with exactly `n` states, obtained by
/// minimizing random tables until one has `n` states.
pub fn random_minimal_fsm(rng: &mut impl Rng, kind: Kind, alphabet: &Alphabet, n: usize) -> Fsm {
    loop {
        let m = fsm::minimize(&random_fsm(rng, kind, alphabet, n, 3));
        if m.n_states() == n {
            return m;
        }
    }
}

/// A random weighted automaton with entries in `{-2, .., 2}`, each
/// transition entry nonzero with probability `density`.
pub fn random_wa(rng: &mut impl Rng, alphabet: &Alphabet, dim: usize, density: f64) -> Wa {
    let mut a = Wa::zero(alphabet.clone(), dim);
    for i in 0..dim {
        a.set_init(i, small_rat(rng));
        a.set_final(i, small_rat(rng));
        for s in 0..alphabet.len() {
            for j in 0..dim {
                if rng.gen_bool(density) {
                    a.set_weight(i, s, j, small_rat(rng));
                }
            }
        }
    }
    a
}

/// A random minimal weighted automaton of dimension exactly `dim`.
pub fn random_minimal_wa(rng: &mut impl Rng, alphabet: &Alphabet, dim: usize) -> Wa {
    loop {
        let a = weighted::minimize_wa(&random_wa(rng, alphabet, dim, 0.5));
        if a.dim() == dim {
            return a;
        }
    }
}
