//! Deterministic finite automata, Moore machines and Mealy machines.
//!
//! All three share one table-driven representation. A DFA is a Moore machine
//! whose outputs are `0` and `1`. The language value of a Mealy machine at a
//! word `w` is the whole output row of the state reached by `w`, i.e. for
//! every input `a` the output of the last transition of `wa`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::exec::Exec;
use crate::words::{Alphabet, Equivalence, Suite, Verdict, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsmError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("machine must have at least one state")]
    NoStates,
    #[error("initial state {0} out of range")]
    InitialOutOfRange(usize),
    #[error("state {state} has {found} transitions, expected {expected}")]
    RowWidth {
        state: usize,
        found: usize,
        expected: usize,
    },
    #[error("transition from state {state} on `{symbol}` targets missing state {target}")]
    TargetOutOfRange {
        state: usize,
        symbol: String,
        target: usize,
    },
    #[error("output table does not match the machine kind or shape")]
    OutputShape,
    #[error("dfa output of state {state} is `{value}`, expected 0 or 1")]
    DfaOutput { state: usize, value: String },
    #[error("machines differ in kind ({0} vs {1})")]
    KindMismatch(Kind, Kind),
    #[error("machines are over different alphabets")]
    AlphabetMismatch,
    #[error("state {0} is unreachable from the initial state")]
    Unreachable(usize),
    #[error("machine is not minimal: states {0} and {1} are equivalent")]
    NotMinimal(usize, usize),
    #[error("weak cover map is undefined on ({word}, {symbol})")]
    DeltaMissing { word: String, symbol: String },
    #[error("weak cover map sends ({word}, {symbol}) to `{target}`, which is not in the cover")]
    DeltaOutside {
        word: String,
        symbol: String,
        target: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Dfa,
    Moore,
    Mealy,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Dfa => "dfa",
            Kind::Moore => "moore",
            Kind::Mealy => "mealy",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outputs {
    /// One output per state (DFA, Moore).
    PerState(Vec<String>),
    /// One output per state and input symbol (Mealy).
    PerTransition(Vec<Vec<String>>),
}

/// Value of a machine's language at a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FsmLangValue {
    Single(String),
    /// Output row indexed by input symbol.
    Row(Vec<String>),
}

impl fmt::Display for FsmLangValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsmLangValue::Single(v) => f.write_str(v),
            FsmLangValue::Row(r) => write!(f, "[{}]", r.join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsm {
    kind: Kind,
    alphabet: Alphabet,
    initial: usize,
    delta: Vec<Vec<usize>>,
    outputs: Outputs,
}

impl Fsm {
    pub fn new(
        kind: Kind,
        alphabet: Alphabet,
        initial: usize,
        delta: Vec<Vec<usize>>,
        outputs: Outputs,
    ) -> Result<Self, FsmError> {
        let n = delta.len();
        if n == 0 {
            return Err(FsmError::NoStates);
        }
        if initial >= n {
            return Err(FsmError::InitialOutOfRange(initial));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(FsmError::RowWidth {
                    state: q,
                    found: row.len(),
                    expected: alphabet.len(),
                });
            }
            if let Some((a, &t)) = row.iter().enumerate().find(|(_, &t)| t >= n) {
                return Err(FsmError::TargetOutOfRange {
                    state: q,
                    symbol: alphabet.name(a).to_string(),
                    target: t,
                });
            }
        }
        match (&kind, &outputs) {
            (Kind::Dfa | Kind::Moore, Outputs::PerState(o)) if o.len() == n => {}
            (Kind::Mealy, Outputs::PerTransition(o))
                if o.len() == n && o.iter().all(|r| r.len() == alphabet.len()) => {}
            _ => return Err(FsmError::OutputShape),
        }
        if let (Kind::Dfa, Outputs::PerState(o)) = (&kind, &outputs) {
            if let Some((q, v)) = o.iter().enumerate().find(|(_, v)| *v != "0" && *v != "1") {
                return Err(FsmError::DfaOutput {
                    state: q,
                    value: v.clone(),
                });
            }
        }
        Ok(Fsm {
            kind,
            alphabet,
            initial,
            delta,
            outputs,
        })
    }

    pub fn dfa(
        alphabet: Alphabet,
        initial: usize,
        delta: Vec<Vec<usize>>,
        accepting: &[usize],
    ) -> Result<Self, FsmError> {
        let mut out = vec!["0".to_string(); delta.len()];
        for &q in accepting {
            if q >= out.len() {
                return Err(FsmError::OutputShape);
            }
            out[q] = "1".to_string();
        }
        Fsm::new(Kind::Dfa, alphabet, initial, delta, Outputs::PerState(out))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn outputs(&self) -> &Outputs {
        &self.outputs
    }

    pub fn delta(&self, state: usize, symbol: usize) -> usize {
        self.delta[state][symbol]
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn accepting(&self) -> Vec<usize> {
        match &self.outputs {
            Outputs::PerState(o) => (0..o.len()).filter(|&q| o[q] == "1").collect(),
            Outputs::PerTransition(_) => Vec::new(),
        }
    }

    /// δ*(q₀, w).
    pub fn run(&self, w: &Word) -> Result<usize, FsmError> {
        self.alphabet.check(w)?;
        Ok(self.run_from(self.initial, w))
    }

    pub fn run_from(&self, state: usize, w: &Word) -> usize {
        w.symbols().iter().fold(state, |q, &a| self.delta[q][a])
    }

    /// Value of the language of state `q` at ε.
    pub fn state_value(&self, q: usize) -> FsmLangValue {
        match &self.outputs {
            Outputs::PerState(o) => FsmLangValue::Single(o[q].clone()),
            Outputs::PerTransition(o) => FsmLangValue::Row(o[q].clone()),
        }
    }

    pub fn lang_value(&self, w: &Word) -> Result<FsmLangValue, FsmError> {
        Ok(self.state_value(self.run(w)?))
    }

    pub fn lang_value_from(&self, state: usize, w: &Word) -> FsmLangValue {
        self.state_value(self.run_from(state, w))
    }

    /// Traditional Mealy output sequence λ*(q₀, w), one output per input
    /// symbol. For DFA and Moore machines this is the sequence of outputs of
    /// the states visited after each symbol.
    pub fn output_trace(&self, w: &Word) -> Result<Vec<String>, FsmError> {
        self.alphabet.check(w)?;
        let mut q = self.initial;
        let mut out = Vec::with_capacity(w.len());
        for &a in w.symbols() {
            let next = self.delta[q][a];
            out.push(match &self.outputs {
                Outputs::PerState(o) => o[next].clone(),
                Outputs::PerTransition(o) => o[q][a].clone(),
            });
            q = next;
        }
        Ok(out)
    }

    /// Copy with one transition redirected.
    pub fn with_transition(&self, state: usize, symbol: usize, target: usize) -> Fsm {
        let mut m = self.clone();
        m.delta[state][symbol] = target;
        m
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n_states()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    fn same_interface(&self, other: &Fsm) -> Result<(), FsmError> {
        if self.kind != other.kind {
            return Err(FsmError::KindMismatch(self.kind, other.kind));
        }
        if self.alphabet != other.alphabet {
            return Err(FsmError::AlphabetMismatch);
        }
        Ok(())
    }

    /// Relabels reachable states in BFS order (alphabet order tie-break) and
    /// drops the rest. Two machines are isomorphic on their reachable parts
    /// iff their canonical forms are equal.
    pub fn canonical(&self) -> Fsm {
        let mut order = Vec::new();
        let mut id = vec![usize::MAX; self.n_states()];
        id[self.initial] = 0;
        order.push(self.initial);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for &t in &self.delta[q] {
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        let delta = order
            .iter()
            .map(|&q| self.delta[q].iter().map(|&t| id[t]).collect())
            .collect();
        let outputs = match &self.outputs {
            Outputs::PerState(o) => Outputs::PerState(order.iter().map(|&q| o[q].clone()).collect()),
            Outputs::PerTransition(o) => {
                Outputs::PerTransition(order.iter().map(|&q| o[q].clone()).collect())
            }
        };
        Fsm {
            kind: self.kind,
            alphabet: self.alphabet.clone(),
            initial: 0,
            delta,
            outputs,
        }
    }
}

/// Block index of every state under language equivalence.
///
/// Moore-style refinement: start from the ε-values and split by successor
/// blocks until stable. Block ids are assigned in order of first occurrence.
pub fn equivalence_classes(m: &Fsm) -> Vec<usize> {
    let mut block = renumber((0..m.n_states()).map(|q| m.state_value(q)));
    let mut count = block_count(&block);
    loop {
        let next = renumber((0..m.n_states()).map(|q| {
            let mut sig = Vec::with_capacity(m.alphabet.len() + 1);
            sig.push(block[q]);
            sig.extend(m.delta[q].iter().map(|&t| block[t]));
            sig
        }));
        let c = block_count(&next);
        block = next;
        if c == count {
            return block;
        }
        count = c;
    }
}

fn renumber<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.map(|k| {
        let n = ids.len();
        *ids.entry(k).or_insert(n)
    })
    .collect()
}

fn block_count(block: &[usize]) -> usize {
    block.iter().max().map_or(0, |m| m + 1)
}

/// Partition induced by agreement on the words of `w` only.
fn w_classes(m: &Fsm, w: &[Word]) -> Vec<usize> {
    renumber((0..m.n_states()).map(|q| {
        w.iter()
            .map(|v| m.lang_value_from(q, v))
            .collect::<Vec<_>>()
    }))
}

/// True iff no two distinct states are language-equivalent.
pub fn is_minimal(m: &Fsm) -> bool {
    block_count(&equivalence_classes(m)) == m.n_states()
}

fn first_equivalent_pair(m: &Fsm) -> Option<(usize, usize)> {
    let classes = equivalence_classes(m);
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (q, &b) in classes.iter().enumerate() {
        if let Some(&p) = seen.get(&b) {
            return Some((p, q));
        }
        seen.insert(b, q);
    }
    None
}

/// Minimal machine with the same language: unreachable states are dropped
/// and equivalent states merged. The result is in canonical form.
pub fn minimize(m: &Fsm) -> Fsm {
    let trimmed = m.canonical();
    let classes = equivalence_classes(&trimmed);
    let n = block_count(&classes);
    let mut rep = vec![usize::MAX; n];
    for (q, &b) in classes.iter().enumerate() {
        if rep[b] == usize::MAX {
            rep[b] = q;
        }
    }
    let delta = rep
        .iter()
        .map(|&q| trimmed.delta[q].iter().map(|&t| classes[t]).collect())
        .collect();
    let outputs = match &trimmed.outputs {
        Outputs::PerState(o) => Outputs::PerState(rep.iter().map(|&q| o[q].clone()).collect()),
        Outputs::PerTransition(o) => {
            Outputs::PerTransition(rep.iter().map(|&q| o[q].clone()).collect())
        }
    };
    Fsm {
        kind: m.kind,
        alphabet: m.alphabet.clone(),
        initial: classes[trimmed.initial],
        delta,
        outputs,
    }
    .canonical()
}

/// Shortest access sequence of every state (BFS, alphabet order tie-break).
pub fn access_sequences(m: &Fsm) -> Result<Vec<Word>, FsmError> {
    let mut access: Vec<Option<Word>> = vec![None; m.n_states()];
    access[m.initial] = Some(Word::empty());
    let mut queue = VecDeque::from([m.initial]);
    while let Some(q) = queue.pop_front() {
        let w = access[q].clone().expect("queued states have access words");
        for (a, &t) in m.delta[q].iter().enumerate() {
            if access[t].is_none() {
                access[t] = Some(w.push(a));
                queue.push_back(t);
            }
        }
    }
    access
        .into_iter()
        .enumerate()
        .map(|(q, w)| w.ok_or(FsmError::Unreachable(q)))
        .collect()
}

pub fn state_cover(m: &Fsm) -> Result<Suite, FsmError> {
    let words = access_sequences(m)?;
    Ok(Suite::from_words(m.alphabet.clone(), words)?)
}

/// A characterization set for a minimal machine.
///
/// Grows `W` from `{ε}`: while some block of the `W`-partition has two
/// states whose `a`-successors are separated by some `s ∈ W`, add `a·s`.
/// Every addition splits at least one block, so at most `n − 1` suffixes
/// are added.
pub fn char_set(m: &Fsm) -> Result<Suite, FsmError> {
    if let Some((p, q)) = first_equivalent_pair(m) {
        return Err(FsmError::NotMinimal(p, q));
    }
    let n = m.n_states();
    let mut w = vec![Word::empty()];
    loop {
        let classes = w_classes(m, &w);
        if block_count(&classes) == n {
            break;
        }
        let split = find_split(m, &classes, &w);
        match split {
            Some(s) => w.push(s),
            None => unreachable!("minimal machine with unsplittable W-partition"),
        }
    }
    Ok(Suite::from_words(m.alphabet.clone(), w)?)
}

fn find_split(m: &Fsm, classes: &[usize], w: &[Word]) -> Option<Word> {
    let n = m.n_states();
    for b in 0..block_count(classes) {
        let members: Vec<usize> = (0..n).filter(|&q| classes[q] == b).collect();
        let Some((&first, rest)) = members.split_first() else {
            continue;
        };
        for a in 0..m.alphabet.len() {
            let t0 = m.delta[first][a];
            for &q in rest {
                let t1 = m.delta[q][a];
                if classes[t0] != classes[t1] {
                    let s = w
                        .iter()
                        .find(|s| m.lang_value_from(t0, s) != m.lang_value_from(t1, s))
                        .expect("different W-classes are separated by some word of W");
                    return Some(s.prepend(a));
                }
            }
        }
    }
    None
}

/// True iff every pair of inequivalent states is separated by a word of `w`.
pub fn is_char_set(m: &Fsm, w: &Suite) -> Result<bool, FsmError> {
    if !w.contains_epsilon() {
        return Err(WordError::MissingEpsilon("characterization set").into());
    }
    if w.alphabet() != &m.alphabet {
        return Err(FsmError::AlphabetMismatch);
    }
    let full = equivalence_classes(m);
    let restricted = w_classes(m, &w.to_vec());
    Ok(block_count(&full) == block_count(&restricted))
}

/// A set of words `P` together with a map `δ_P : P × Σ → P`.
#[derive(Clone, Debug)]
pub struct WeakCover {
    pub words: Suite,
    pub delta: HashMap<(Word, usize), Word>,
}

impl WeakCover {
    /// `δ_P(w, a)` = the cover word reaching the same state as `w·a`.
    /// `p` must reach every state the machine can reach from its words.
    pub fn from_state_cover(m: &Fsm, p: &Suite) -> Result<Self, FsmError> {
        let mut by_state: HashMap<usize, Word> = HashMap::new();
        for w in p {
            by_state.entry(m.run(w)?).or_insert_with(|| w.clone());
        }
        let mut delta = HashMap::new();
        for w in p {
            for a in 0..m.alphabet.len() {
                let t = m.run(&w.push(a))?;
                let Some(v) = by_state.get(&t) else {
                    return Err(FsmError::Unreachable(t));
                };
                delta.insert((w.clone(), a), v.clone());
            }
        }
        Ok(WeakCover {
            words: p.clone(),
            delta,
        })
    }
}

/// Checks `δ*(q₀, δ_P(w, a)) = δ*(q₀, w·a)` for all `w ∈ P`, `a ∈ Σ`.
pub fn verify_weak_cover(m: &Fsm, cover: &WeakCover) -> Result<bool, FsmError> {
    let p = &cover.words;
    if !p.contains_epsilon() {
        return Err(WordError::MissingEpsilon("weak state cover").into());
    }
    let mut ok = true;
    for w in p {
        for a in 0..m.alphabet.len() {
            let Some(v) = cover.delta.get(&(w.clone(), a)) else {
                return Err(FsmError::DeltaMissing {
                    word: m.alphabet.render(w),
                    symbol: m.alphabet.name(a).to_string(),
                });
            };
            if !p.contains(v) {
                return Err(FsmError::DeltaOutside {
                    word: m.alphabet.render(w),
                    symbol: m.alphabet.name(a).to_string(),
                    target: m.alphabet.render(v),
                });
            }
            ok &= m.run(v)? == m.run(&w.push(a))?;
        }
    }
    Ok(ok)
}

pub type FsmVerdict = Verdict<Word, FsmLangValue>;

pub fn agree_on(spec: &Fsm, imp: &Fsm, t: &Suite) -> Result<Vec<FsmVerdict>, FsmError> {
    agree_on_with(Exec::default(), spec, imp, t)
}

pub fn agree_on_with(
    exec: Exec,
    spec: &Fsm,
    imp: &Fsm,
    t: &Suite,
) -> Result<Vec<FsmVerdict>, FsmError> {
    spec.same_interface(imp)?;
    if t.alphabet() != &spec.alphabet {
        return Err(FsmError::AlphabetMismatch);
    }
    let words = t.to_vec();
    Ok(exec.map(&words, |w| {
        Verdict::new(
            w.clone(),
            spec.lang_value(w).expect("suite checked against alphabet"),
            imp.lang_value(w).expect("suite checked against alphabet"),
        )
    }))
}

type Pair = (usize, usize);

/// Exact language equivalence by BFS over the synchronized product. The
/// counterexample is the length-lexicographically least differing word.
pub fn equiv(a: &Fsm, b: &Fsm) -> Result<Equivalence<Word>, FsmError> {
    a.same_interface(b)?;
    let start = (a.initial, b.initial);
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let trace = |parent: &HashMap<_, Option<(Pair, usize)>>, mut node| {
        let mut syms = Vec::new();
        while let Some(&Some((prev, sym))) = parent.get(&node) {
            syms.push(sym);
            node = prev;
        }
        syms.reverse();
        Word::from(syms)
    };
    if a.state_value(start.0) != b.state_value(start.1) {
        return Ok(Equivalence::Counterexample(Word::empty()));
    }
    while let Some((p, q)) = queue.pop_front() {
        for s in 0..a.alphabet.len() {
            let next = (a.delta[p][s], b.delta[q][s]);
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some(((p, q), s)));
            if a.state_value(next.0) != b.state_value(next.1) {
                return Ok(Equivalence::Counterexample(trace(&parent, next)));
            }
            queue.push_back(next);
        }
    }
    Ok(Equivalence::Equivalent)
}

/// The coffee machine DFA over `{c, e, 1}`: states count stored coins,
/// `q3` is the broken sink.
pub fn coffee_dfa() -> Fsm {
    let sigma = Alphabet::new(["c", "e", "1"]).expect("valid alphabet");
    Fsm::dfa(
        sigma,
        0,
        vec![vec![3, 3, 1], vec![0, 3, 2], vec![1, 0, 3], vec![3, 3, 3]],
        &[0, 1, 2],
    )
    .expect("valid machine")
}

/// The coffee machine as a Moore machine reporting the stored coins
/// (`-1` once broken).
pub fn coffee_moore() -> Fsm {
    let d = coffee_dfa();
    Fsm::new(
        Kind::Moore,
        d.alphabet.clone(),
        0,
        d.delta.clone(),
        Outputs::PerState(["0", "1", "2", "-1"].map(String::from).to_vec()),
    )
    .expect("valid machine")
}
