//! Deterministic nominal automata over equality atoms, in register form.
//!
//! A location of arity `r` stands for the orbit of states supported by `r`
//! pairwise distinct atoms, held in registers. On input atom `x` a location
//! fires exactly one rule: `eq i` if `x` equals register `i`, `fresh`
//! otherwise. The rule names the target location and, for each target
//! register, where its atom comes from (an old register or `x`).
//!
//! Words over the atoms are handled up to permutation: a [`SymbolicWord`] is
//! the equality pattern of a word and stands for its whole orbit. Since
//! everything is equivariant, running the canonical representative decides
//! acceptance for every word of the orbit.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::exec::Exec;
use crate::words::{Equivalence, Verdict, EPSILON_TOKEN};

/// Atoms are compared by equality only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub u64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NominalError {
    #[error("automaton has no locations")]
    NoLocations,
    #[error("initial location `{0}` must have arity 0")]
    InitialArity(String),
    #[error("location `{loc}` has {found} rules, expected {expected}")]
    RuleCount {
        loc: String,
        found: usize,
        expected: usize,
    },
    #[error("rule `{guard}` of `{loc}` targets unknown location {target}")]
    UnknownTarget {
        loc: String,
        guard: Guard,
        target: usize,
    },
    #[error("rule `{guard}` of `{loc}` assigns {found} registers, target has arity {expected}")]
    AssignmentLength {
        loc: String,
        guard: Guard,
        found: usize,
        expected: usize,
    },
    #[error("rule `{guard}` of `{loc}` reads missing register r{reg}")]
    BadSource { loc: String, guard: Guard, reg: usize },
    #[error("rule `{guard}` of `{loc}` stores the same atom in two registers")]
    NonInjective { loc: String, guard: Guard },
    #[error("automaton is not minimal: {0}")]
    NotMinimal(String),
    #[error("{0} must contain the empty pattern")]
    MissingEpsilon(&'static str),
    #[error("cover map is undefined on ({word}, {ext})")]
    DeltaMissing { word: SymbolicWord, ext: Ext },
    #[error("cover map sends ({word}, {ext}) to {target}, which is not in the cover")]
    DeltaOutside {
        word: SymbolicWord,
        ext: Ext,
        target: SymbolicWord,
    },
    #[error("cover map output on ({word}, {ext}) mentions atoms outside the extended word")]
    DeltaSupport { word: SymbolicWord, ext: Ext },
    #[error("no weak state cover with at most {0} patterns")]
    CoverTooLarge(usize),
    #[error("equivalence exploration exceeded {0} product states")]
    ExplorationLimit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Guard {
    /// Input equals register `i` (0-based).
    Eq(usize),
    Fresh,
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Eq(i) => write!(f, "eq {}", i + 1),
            Guard::Fresh => f.write_str("fresh"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    /// Register `i` (0-based) of the source location.
    Reg(usize),
    Input,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub target: usize,
    pub assign: Vec<Source>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub name: String,
    pub arity: usize,
}

/// A register-style deterministic nominal automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rna {
    locations: Vec<Location>,
    initial: usize,
    accepting: Vec<bool>,
    // rules[l][i] for guard `eq i`, rules[l][arity] for `fresh`
    rules: Vec<Vec<Rule>>,
}

/// A concrete state: a location with its register contents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub loc: usize,
    pub regs: Vec<Atom>,
}

impl Rna {
    pub fn new(
        locations: Vec<Location>,
        initial: usize,
        accepting: Vec<bool>,
        rules: Vec<Vec<Rule>>,
    ) -> Result<Self, NominalError> {
        if locations.is_empty() {
            return Err(NominalError::NoLocations);
        }
        assert_eq!(accepting.len(), locations.len(), "one accepting flag per location");
        if locations[initial].arity != 0 {
            return Err(NominalError::InitialArity(locations[initial].name.clone()));
        }
        if rules.len() != locations.len() {
            return Err(NominalError::RuleCount {
                loc: locations[rules.len().min(locations.len() - 1)].name.clone(),
                found: 0,
                expected: 1,
            });
        }
        for (l, loc) in locations.iter().enumerate() {
            let rs = &rules[l];
            if rs.len() != loc.arity + 1 {
                return Err(NominalError::RuleCount {
                    loc: loc.name.clone(),
                    found: rs.len(),
                    expected: loc.arity + 1,
                });
            }
            for (i, rule) in rs.iter().enumerate() {
                let guard = if i < loc.arity { Guard::Eq(i) } else { Guard::Fresh };
                let err_loc = || loc.name.clone();
                let Some(target) = locations.get(rule.target) else {
                    return Err(NominalError::UnknownTarget {
                        loc: err_loc(),
                        guard,
                        target: rule.target,
                    });
                };
                if rule.assign.len() != target.arity {
                    return Err(NominalError::AssignmentLength {
                        loc: err_loc(),
                        guard,
                        found: rule.assign.len(),
                        expected: target.arity,
                    });
                }
                let mut used = BTreeSet::new();
                for src in &rule.assign {
                    // Under `eq i` the input is register i.
                    let slot = match (*src, guard) {
                        (Source::Reg(r), _) if r >= loc.arity => {
                            return Err(NominalError::BadSource {
                                loc: err_loc(),
                                guard,
                                reg: r + 1,
                            })
                        }
                        (Source::Reg(r), _) => r,
                        (Source::Input, Guard::Eq(i)) => i,
                        (Source::Input, Guard::Fresh) => loc.arity,
                    };
                    if !used.insert(slot) {
                        return Err(NominalError::NonInjective { loc: err_loc(), guard });
                    }
                }
            }
        }
        Ok(Rna {
            locations,
            initial,
            accepting,
            rules,
        })
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn n_locations(&self) -> usize {
        self.locations.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, loc: usize) -> bool {
        self.accepting[loc]
    }

    pub fn rule(&self, loc: usize, guard: Guard) -> &Rule {
        match guard {
            Guard::Eq(i) => &self.rules[loc][i],
            Guard::Fresh => &self.rules[loc][self.locations[loc].arity],
        }
    }

    /// Sum over locations of `arity + 1`.
    pub fn symbolic_size(&self) -> usize {
        self.locations.iter().map(|l| l.arity + 1).sum()
    }

    pub fn with_accepting(&self, loc: usize, accepting: bool) -> Rna {
        let mut m = self.clone();
        m.accepting[loc] = accepting;
        m
    }

    /// Copy with one rule replaced; the result is validated.
    pub fn with_rule(&self, loc: usize, guard: Guard, rule: Rule) -> Result<Rna, NominalError> {
        let mut rules = self.rules.clone();
        let i = match guard {
            Guard::Eq(i) => i,
            Guard::Fresh => self.locations[loc].arity,
        };
        rules[loc][i] = rule;
        Rna::new(self.locations.clone(), self.initial, self.accepting.clone(), rules)
    }

    pub fn initial_state(&self) -> State {
        State {
            loc: self.initial,
            regs: Vec::new(),
        }
    }

    pub fn step(&self, s: &State, x: Atom) -> State {
        let guard = s
            .regs
            .iter()
            .position(|&r| r == x)
            .map_or(Guard::Fresh, Guard::Eq);
        let rule = self.rule(s.loc, guard);
        State {
            loc: rule.target,
            regs: rule
                .assign
                .iter()
                .map(|src| match src {
                    Source::Reg(i) => s.regs[*i],
                    Source::Input => x,
                })
                .collect(),
        }
    }

    pub fn run_from(&self, s: &State, w: &[Atom]) -> State {
        w.iter().fold(s.clone(), |st, &x| self.step(&st, x))
    }

    pub fn accepts_from(&self, s: &State, w: &[Atom]) -> bool {
        self.accepting[self.run_from(s, w).loc]
    }
}

pub fn rna_run(a: &Rna, w: &[Atom]) -> State {
    a.run_from(&a.initial_state(), w)
}

/// The orbit of a data word: positions labelled by equality class, classes
/// numbered `1..=m` in order of first occurrence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicWord(Vec<usize>);

impl SymbolicWord {
    pub fn empty() -> Self {
        SymbolicWord(Vec::new())
    }

    /// Canonical pattern of an arbitrary labelling.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut ids: HashMap<T, usize> = HashMap::new();
        SymbolicWord(
            labels
                .iter()
                .map(|l| {
                    let n = ids.len() + 1;
                    *ids.entry(*l).or_insert(n)
                })
                .collect(),
        )
    }

    pub fn from_atoms(w: &[Atom]) -> Self {
        SymbolicWord::from_labels(w)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// The pattern extended by one letter.
    pub fn extend(&self, ext: Ext) -> SymbolicWord {
        let mut v = self.0.clone();
        v.push(match ext {
            Ext::Class(i) => i,
            Ext::Fresh => self.n_classes() + 1,
        });
        SymbolicWord(v)
    }

    /// All one-letter extension choices: each existing class, then fresh.
    pub fn extensions(&self) -> impl Iterator<Item = Ext> {
        (1..=self.n_classes()).map(Ext::Class).chain([Ext::Fresh])
    }
}

impl Ord for SymbolicWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SymbolicWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EPSILON_TOKEN);
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// How a pattern is extended by one letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    /// The new letter equals class `i` (1-based).
    Class(usize),
    Fresh,
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Class(i) => write!(f, "={i}"),
            Ext::Fresh => f.write_str("fresh"),
        }
    }
}

/// Canonical representative of a pattern: class `i` becomes `Atom(i)`.
pub fn instantiate(s: &SymbolicWord) -> Vec<Atom> {
    s.0.iter().map(|&i| Atom(i as u64)).collect()
}

/// Location reached by the pattern's orbit, and whether it accepts.
pub fn symbolic_run(a: &Rna, s: &SymbolicWord) -> (usize, bool) {
    let st = rna_run(a, &instantiate(s));
    (st.loc, a.accepting[st.loc])
}

/// A finite set of patterns (an orbit-finite set of data words).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OrbitSuite(BTreeSet<SymbolicWord>);

impl OrbitSuite {
    pub fn new() -> Self {
        OrbitSuite::default()
    }

    pub fn unit() -> Self {
        OrbitSuite([SymbolicWord::empty()].into())
    }

    pub fn from_patterns<I: IntoIterator<Item = SymbolicWord>>(it: I) -> Self {
        OrbitSuite(it.into_iter().collect())
    }

    /// Builds a suite from arbitrary labellings, canonicalizing each.
    pub fn from_labels(ls: &[&[usize]]) -> Self {
        OrbitSuite(ls.iter().map(|l| SymbolicWord::from_labels(l)).collect())
    }

    pub fn insert(&mut self, s: SymbolicWord) -> bool {
        self.0.insert(s)
    }

    pub fn contains(&self, s: &SymbolicWord) -> bool {
        self.0.contains(s)
    }

    pub fn contains_epsilon(&self) -> bool {
        self.0.contains(&SymbolicWord::empty())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SymbolicWord> + '_ {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<SymbolicWord> {
        self.0.iter().cloned().collect()
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(SymbolicWord::len).max().unwrap_or(0)
    }
}

impl fmt::Debug for OrbitSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a OrbitSuite {
    type Item = &'a SymbolicWord;
    type IntoIter = std::collections::btree_set::Iter<'a, SymbolicWord>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Every pattern of length at most `k` (restricted growth strings).
pub fn patterns_upto(k: usize) -> OrbitSuite {
    let mut out = OrbitSuite::unit();
    let mut layer = vec![SymbolicWord::empty()];
    for _ in 0..k {
        let next: Vec<SymbolicWord> = layer
            .iter()
            .flat_map(|w| w.extensions().map(|e| w.extend(e)).collect::<Vec<_>>())
            .collect();
        out.0.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Orbit decomposition of `{ u·v | u ∈ a, v ∈ b }`: every way of merging
/// classes of `v` injectively into classes of `u`.
pub fn concat_orbit(a: &OrbitSuite, b: &OrbitSuite) -> OrbitSuite {
    let mut out = OrbitSuite::new();
    for u in a {
        for v in b {
            let m = u.n_classes();
            let mut map = vec![0usize; v.n_classes()];
            merge_into(u, v, m, 0, &mut map, &mut vec![false; m], &mut out);
        }
    }
    out
}

fn merge_into(
    u: &SymbolicWord,
    v: &SymbolicWord,
    m: usize,
    j: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut OrbitSuite,
) {
    if j == map.len() {
        let mut labels = u.0.clone();
        labels.extend(v.0.iter().map(|&c| map[c - 1]));
        out.insert(SymbolicWord::from_labels(&labels));
        return;
    }
    // Unmerged: a label beyond every class of u.
    map[j] = m + 1 + j;
    merge_into(u, v, m, j + 1, map, used, out);
    for c in 0..m {
        if !used[c] {
            used[c] = true;
            map[j] = c + 1;
            merge_into(u, v, m, j + 1, map, used, out);
            used[c] = false;
        }
    }
}

/// `p · A^{≤k+1} · w` as a finite set of orbits.
pub fn w_suite_rna(p: &OrbitSuite, k: usize, w: &OrbitSuite) -> Result<OrbitSuite, NominalError> {
    if !p.contains_epsilon() {
        return Err(NominalError::MissingEpsilon("state cover"));
    }
    if !w.contains_epsilon() {
        return Err(NominalError::MissingEpsilon("characterization set"));
    }
    Ok(concat_orbit(&concat_orbit(p, &patterns_upto(k + 1)), w))
}

/// A set of patterns `P` with an equivariant map `δ_P : P × A → P`.
///
/// For `w ∈ P` and an extension choice `c`, the value is a labelling whose
/// labels refer to the classes of `w` extended by `c`; so the output word is
/// built from atoms of `w·c` only, which makes the map equivariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NominalCover {
    pub words: OrbitSuite,
    pub delta: BTreeMap<(SymbolicWord, Ext), Vec<usize>>,
}

impl NominalCover {
    /// Tabulates a concrete map on canonical representatives. Fails if the
    /// map returns atoms that do not occur in `w·c`.
    pub fn from_fn<F>(p: &OrbitSuite, f: F) -> Result<Self, NominalError>
    where
        F: Fn(&[Atom], Atom) -> Vec<Atom>,
    {
        let mut delta = BTreeMap::new();
        for w in p {
            for ext in w.extensions() {
                let wc = instantiate(&w.extend(ext));
                let (prefix, last) = wc.split_at(wc.len() - 1);
                let out = f(prefix, last[0]);
                let labels = out
                    .iter()
                    .map(|x| wc.iter().position(|y| y == x).map(|i| wc_label(&wc, i)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or(NominalError::DeltaSupport {
                        word: w.clone(),
                        ext,
                    })?;
                delta.insert((w.clone(), ext), labels);
            }
        }
        Ok(NominalCover {
            words: p.clone(),
            delta,
        })
    }
}

// Canonical instances use Atom(i) for class i.
fn wc_label(wc: &[Atom], i: usize) -> usize {
    wc[i].0 as usize
}

/// Checks that a concrete map on data words commutes with atom permutations
/// on the instances of `p`: `f(π·w, π·c) = π·f(w, c)` for the given
/// injective relabellings `π` (applied to canonical instances).
pub fn is_equivariant<F>(p: &OrbitSuite, f: F, renamings: &[Vec<u64>]) -> bool
where
    F: Fn(&[Atom], Atom) -> Vec<Atom>,
{
    for w in p {
        for ext in w.extensions() {
            let wc = instantiate(&w.extend(ext));
            let (prefix, last) = wc.split_at(wc.len() - 1);
            let base = f(prefix, last[0]);
            for pi in renamings {
                let rename = |x: &Atom| -> Atom {
                    let i = x.0 as usize;
                    Atom(pi.get(i).copied().unwrap_or(x.0))
                };
                let moved: Vec<Atom> = prefix.iter().map(rename).collect();
                let got = f(&moved, rename(&last[0]));
                let expected: Vec<Atom> = base.iter().map(rename).collect();
                if got != expected {
                    return false;
                }
            }
        }
    }
    true
}

/// `δ*(q₀, δ_P(w, c)) = δ*(q₀, w·c)` for every `w ∈ P` and extension `c`,
/// comparing locations and register contents.
pub fn verify_weak_cover_rna(a: &Rna, cover: &NominalCover) -> Result<bool, NominalError> {
    let p = &cover.words;
    if !p.contains_epsilon() {
        return Err(NominalError::MissingEpsilon("weak state cover"));
    }
    let mut ok = true;
    for w in p {
        for ext in w.extensions() {
            let Some(labels) = cover.delta.get(&(w.clone(), ext)) else {
                return Err(NominalError::DeltaMissing {
                    word: w.clone(),
                    ext,
                });
            };
            let wc = w.extend(ext);
            if labels.iter().any(|&l| l == 0 || l > wc.n_classes()) {
                return Err(NominalError::DeltaSupport {
                    word: w.clone(),
                    ext,
                });
            }
            let target = SymbolicWord::from_labels(labels);
            if !p.contains(&target) {
                return Err(NominalError::DeltaOutside {
                    word: w.clone(),
                    ext,
                    target,
                });
            }
            let out: Vec<Atom> = labels.iter().map(|&l| Atom(l as u64)).collect();
            ok &= rna_run(a, &out) == rna_run(a, &instantiate(&wc));
        }
    }
    Ok(ok)
}

/// Searches for `δ_P` making `p` a weak state cover of `a`.
pub fn find_weak_cover(a: &Rna, p: &OrbitSuite) -> Option<NominalCover> {
    let mut delta = BTreeMap::new();
    let reached: Vec<(SymbolicWord, State)> = p
        .iter()
        .map(|u| (u.clone(), rna_run(a, &instantiate(u))))
        .collect();
    for w in p {
        for ext in w.extensions() {
            let labels = cover_target(a, &reached, &w.extend(ext))?;
            delta.insert((w.clone(), ext), labels);
        }
    }
    Some(NominalCover {
        words: p.clone(),
        delta,
    })
}

/// A labelling, over the classes of `wc`, of some pattern of `p` reaching
/// the same state as `wc`.
fn cover_target(
    a: &Rna,
    reached: &[(SymbolicWord, State)],
    wc: &SymbolicWord,
) -> Option<Vec<usize>> {
    let goal = rna_run(a, &instantiate(wc));
    let m = wc.n_classes();
    for (u, st) in reached {
        if st.loc != goal.loc || u.n_classes() > m {
            continue;
        }
        let mut found = None;
        injections(u.n_classes(), m, &mut |map| {
            let labels: Vec<usize> = u.0.iter().map(|&c| map[c - 1]).collect();
            let atoms: Vec<Atom> = labels.iter().map(|&l| Atom(l as u64)).collect();
            if rna_run(a, &atoms) == goal {
                found = Some(labels);
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Calls `f` on every injective map `{1..k} → {1..m}` (as a vector of
/// images) until it returns true.
fn injections(k: usize, m: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(
        k: usize,
        m: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for x in 1..=m {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                let stop = go(k, m, cur, used, f);
                cur.pop();
                used[x] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
    go(k, m, &mut Vec::with_capacity(k), &mut vec![false; m + 1], f)
}

/// A weak state cover for `a`, grown from `{ε}`: whenever some `w·c` has no
/// cover word reaching the same state over its own atoms, its pattern is
/// added.
pub fn weak_cover_rna(a: &Rna, max_size: usize) -> Result<NominalCover, NominalError> {
    let mut p = vec![SymbolicWord::empty()];
    let mut reached = vec![(SymbolicWord::empty(), a.initial_state())];
    let mut delta = BTreeMap::new();
    let mut i = 0;
    while i < p.len() {
        let w = p[i].clone();
        for ext in w.extensions() {
            let wc = w.extend(ext);
            let labels = match cover_target(a, &reached, &wc) {
                Some(l) => l,
                None => {
                    if p.len() >= max_size {
                        return Err(NominalError::CoverTooLarge(max_size));
                    }
                    reached.push((wc.clone(), rna_run(a, &instantiate(&wc))));
                    p.push(wc.clone());
                    wc.0.clone()
                }
            };
            delta.insert((w.clone(), ext), labels);
        }
        i += 1;
    }
    Ok(NominalCover {
        words: OrbitSuite::from_patterns(p),
        delta,
    })
}

/// Outcome of a bounded product exploration.
enum Explore {
    Equivalent,
    Differ(Vec<Atom>),
    Exhausted,
}

/// Canonical key of a pair of states: both locations plus which registers
/// hold equal atoms.
fn pair_key(x: &State, y: &State) -> (usize, usize, Vec<Option<usize>>) {
    (
        x.loc,
        y.loc,
        x.regs
            .iter()
            .map(|r| y.regs.iter().position(|s| s == r))
            .collect(),
    )
}

/// Breadth-first search for a shortest word on which `a` from `x` and `b`
/// from `y` disagree. Candidate letters are the atoms in either register
/// file plus one fresh atom, which covers every orbit of next letters.
fn explore(a: &Rna, x: State, b: &Rna, y: State, limit: usize) -> Explore {
    if a.accepting[x.loc] != b.accepting[y.loc] {
        return Explore::Differ(Vec::new());
    }
    let max_atom = |s: &State| s.regs.iter().map(|r| r.0).max().unwrap_or(0);
    let fresh0 = max_atom(&x).max(max_atom(&y)) + 1;
    let mut seen = BTreeSet::new();
    seen.insert(pair_key(&x, &y));
    let mut queue = VecDeque::from([(x, y, Vec::<Atom>::new(), fresh0)]);
    while let Some((sx, sy, word, fresh)) = queue.pop_front() {
        let mut letters: Vec<Atom> = sx.regs.clone();
        for r in &sy.regs {
            if !letters.contains(r) {
                letters.push(*r);
            }
        }
        letters.sort();
        letters.push(Atom(fresh));
        for c in letters {
            let nx = a.step(&sx, c);
            let ny = b.step(&sy, c);
            let mut nw = word.clone();
            nw.push(c);
            if a.accepting[nx.loc] != b.accepting[ny.loc] {
                return Explore::Differ(nw);
            }
            if seen.insert(pair_key(&nx, &ny)) {
                if seen.len() > limit {
                    return Explore::Exhausted;
                }
                let nf = if c.0 == fresh { fresh + 1 } else { fresh };
                queue.push_back((nx, ny, nw, nf));
            }
        }
    }
    Explore::Equivalent
}

pub const DEFAULT_EXPLORATION_LIMIT: usize = 1 << 20;

/// Exact language equivalence over all data words, with a shortest
/// counterexample pattern.
pub fn equiv_rna(a: &Rna, b: &Rna) -> Result<Equivalence<SymbolicWord>, NominalError> {
    equiv_rna_bounded(a, b, DEFAULT_EXPLORATION_LIMIT)
}

pub fn equiv_rna_bounded(
    a: &Rna,
    b: &Rna,
    limit: usize,
) -> Result<Equivalence<SymbolicWord>, NominalError> {
    match explore(a, a.initial_state(), b, b.initial_state(), limit) {
        Explore::Equivalent => Ok(Equivalence::Equivalent),
        Explore::Differ(w) => Ok(Equivalence::Counterexample(SymbolicWord::from_atoms(&w))),
        Explore::Exhausted => Err(NominalError::ExplorationLimit(limit)),
    }
}

/// Every pair of distinct states of `a` up to atom permutation: two
/// locations and a partial matching of their registers, excluding a state
/// paired with itself.
fn state_pairs(a: &Rna) -> Vec<(State, State)> {
    let mut out = Vec::new();
    for l1 in 0..a.n_locations() {
        for l2 in l1..a.n_locations() {
            let (r1, r2) = (a.locations[l1].arity, a.locations[l2].arity);
            let s1 = State {
                loc: l1,
                regs: (1..=r1 as u64).map(Atom).collect(),
            };
            partial_matchings(r2, r1, &mut |m| {
                let regs: Vec<Atom> = m
                    .iter()
                    .enumerate()
                    .map(|(j, t)| match t {
                        Some(i) => Atom(*i as u64 + 1),
                        None => Atom((r1 + 1 + j) as u64),
                    })
                    .collect();
                let s2 = State { loc: l2, regs };
                if s1 != s2 {
                    out.push((s1.clone(), s2));
                }
            });
        }
    }
    out
}

/// Calls `f` on every partial injection `{0..k} ⇀ {0..m}`.
fn partial_matchings(k: usize, m: usize, f: &mut dyn FnMut(&[Option<usize>])) {
    fn go(
        k: usize,
        m: usize,
        cur: &mut Vec<Option<usize>>,
        used: &mut [bool],
        f: &mut dyn FnMut(&[Option<usize>]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        cur.push(None);
        go(k, m, cur, used, f);
        cur.pop();
        for x in 0..m {
            if !used[x] {
                used[x] = true;
                cur.push(Some(x));
                go(k, m, cur, used, f);
                cur.pop();
                used[x] = false;
            }
        }
    }
    go(k, m, &mut Vec::with_capacity(k), &mut vec![false; m], f)
}

fn describe(a: &Rna, s: &State) -> String {
    let regs: Vec<String> = s.regs.iter().map(|r| r.0.to_string()).collect();
    format!("{}({})", a.locations[s.loc].name, regs.join(","))
}

/// Shortest distinguishing suffix for every pair of distinct states, or the
/// first equivalent pair.
fn separating_suffixes(a: &Rna) -> Result<Vec<(State, State, Vec<Atom>)>, NominalError> {
    let mut out = Vec::new();
    for (s1, s2) in state_pairs(a) {
        match explore(a, s1.clone(), a, s2.clone(), DEFAULT_EXPLORATION_LIMIT) {
            Explore::Differ(w) => out.push((s1, s2, w)),
            Explore::Equivalent => {
                return Err(NominalError::NotMinimal(format!(
                    "{} and {} accept the same language",
                    describe(a, &s1),
                    describe(a, &s2)
                )))
            }
            Explore::Exhausted => {
                return Err(NominalError::ExplorationLimit(DEFAULT_EXPLORATION_LIMIT))
            }
        }
    }
    Ok(out)
}

/// Distinct states have distinct languages.
pub fn is_minimal_rna(a: &Rna) -> bool {
    separating_suffixes(a).is_ok()
}

/// Whether some instance of a pattern of `w` separates the two states.
/// Instances range over all ways the pattern's classes can coincide with
/// atoms in the states' registers or be fresh.
pub fn separates(a: &Rna, s1: &State, s2: &State, w: &OrbitSuite) -> bool {
    let mut support: Vec<Atom> = s1.regs.clone();
    for r in &s2.regs {
        if !support.contains(r) {
            support.push(*r);
        }
    }
    let fresh_base = support.iter().map(|x| x.0).max().unwrap_or(0) + 1;
    w.iter().any(|v| {
        let mut hit = false;
        partial_matchings(v.n_classes(), support.len(), &mut |m| {
            if hit {
                return;
            }
            let atoms: Vec<Atom> = v
                .0
                .iter()
                .map(|&c| match m[c - 1] {
                    Some(i) => support[i],
                    None => Atom(fresh_base + c as u64),
                })
                .collect();
            hit = a.accepts_from(s1, &atoms) != a.accepts_from(s2, &atoms);
        });
        hit
    })
}

/// True iff `ε ∈ w` and `w` separates every pair of inequivalent states.
pub fn is_char_set_rna(a: &Rna, w: &OrbitSuite) -> Result<bool, NominalError> {
    if !w.contains_epsilon() {
        return Err(NominalError::MissingEpsilon("characterization set"));
    }
    for (s1, s2) in state_pairs(a) {
        let inequivalent = matches!(
            explore(a, s1.clone(), a, s2.clone(), DEFAULT_EXPLORATION_LIMIT),
            Explore::Differ(_)
        );
        if inequivalent && !separates(a, &s1, &s2, w) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A characterization set for a minimal automaton: `{ε}` plus the pattern
/// of a shortest separating suffix for each pair not yet separated.
pub fn char_set_rna(a: &Rna) -> Result<OrbitSuite, NominalError> {
    let pairs = separating_suffixes(a)?;
    let mut w = OrbitSuite::unit();
    for (s1, s2, suffix) in pairs {
        if !separates(a, &s1, &s2, &w) {
            w.insert(SymbolicWord::from_atoms(&suffix));
        }
    }
    Ok(w)
}

pub type RnaVerdict = Verdict<SymbolicWord, bool>;

/// One verdict per pattern, comparing acceptance of its canonical instance.
pub fn agree_on_rna(spec: &Rna, imp: &Rna, t: &OrbitSuite) -> Vec<RnaVerdict> {
    agree_on_rna_with(Exec::default(), spec, imp, t)
}

pub fn agree_on_rna_with(exec: Exec, spec: &Rna, imp: &Rna, t: &OrbitSuite) -> Vec<RnaVerdict> {
    let patterns = t.to_vec();
    exec.map(&patterns, |s| {
        Verdict::new(s.clone(), symbolic_run(spec, s).1, symbolic_run(imp, s).1)
    })
}

/// Automaton accepting exactly the words `aa` for an atom `a`: locations
/// `q0`, `q1` (holding the first atom), `q2` (accepting) and the sink `q3`.
pub fn double_atom_rna() -> Rna {
    let loc = |n: &str, arity| Location {
        name: n.to_string(),
        arity,
    };
    let to = |target, assign: Vec<Source>| Rule { target, assign };
    Rna::new(
        vec![loc("q0", 0), loc("q1", 1), loc("q2", 0), loc("q3", 0)],
        0,
        vec![false, false, true, false],
        vec![
            vec![to(1, vec![Source::Input])],
            vec![to(2, vec![]), to(3, vec![])],
            vec![to(3, vec![])],
            vec![to(3, vec![])],
        ],
    )
    .expect("valid automaton")
}

/// The cover `{ε} ∪ {a} ∪ {aa} ∪ {aab}` of [`double_atom_rna`] with its
/// hand-written transition map.
pub fn double_atom_cover() -> NominalCover {
    let p = OrbitSuite::from_labels(&[&[], &[1], &[1, 1], &[1, 1, 1], &[1, 1, 2]]);
    NominalCover::from_fn(&p, double_atom_delta).expect("map uses atoms of w·c only")
}

/// `δ_P(w, c)` for [`double_atom_cover`], on concrete words.
pub fn double_atom_delta(w: &[Atom], c: Atom) -> Vec<Atom> {
    match w {
        [] => vec![c],
        [a] if *a == c => vec![*a, *a],
        [a] => vec![*a, *a, c],
        [a, _] => vec![*a, *a, c],
        _ => w.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(l: &[usize]) -> SymbolicWord {
        SymbolicWord::from_labels(l)
    }

    fn atoms(xs: &[u64]) -> Vec<Atom> {
        xs.iter().map(|&x| Atom(x)).collect()
    }

    fn flipped_q2() -> Rna {
        double_atom_rna().with_accepting(2, false)
    }

    fn retargeted() -> Rna {
        double_atom_rna()
            .with_rule(
                1,
                Guard::Fresh,
                Rule {
                    target: 2,
                    assign: vec![],
                },
            )
            .unwrap()
    }

    #[test]
    fn run_examples() {
        let a = double_atom_rna();
        let s = rna_run(&a, &atoms(&[5, 5]));
        assert_eq!(s.loc, 2);
        assert!(a.is_accepting(s.loc));
        let s = rna_run(&a, &atoms(&[5, 7]));
        assert_eq!(s.loc, 3);
        assert!(!a.is_accepting(s.loc));
        assert_eq!(rna_run(&a, &[]), a.initial_state());
        assert_eq!(rna_run(&a, &atoms(&[9])).regs, atoms(&[9]));
    }

    #[test]
    fn symbolic_run_examples() {
        let a = double_atom_rna();
        assert!(symbolic_run(&a, &pat(&[1, 1])).1);
        assert!(!symbolic_run(&a, &pat(&[1, 2])).1);
        assert_eq!(symbolic_run(&a, &pat(&[1, 1, 2])), (3, false));
    }

    #[test]
    fn canonical_patterns() {
        assert_eq!(pat(&[7, 3, 7]).labels(), &[1, 2, 1]);
        assert_eq!(instantiate(&pat(&[1, 2, 1])), atoms(&[1, 2, 1]));
        assert_eq!(instantiate(&pat(&[1, 1])), atoms(&[1, 1]));
        assert!(instantiate(&SymbolicWord::empty()).is_empty());
        assert_eq!(pat(&[1, 2]).to_string(), "[1,2]");
    }

    #[test]
    fn patterns_upto_counts_are_bell_sums() {
        // 1 + B1 + B2 + B3 + B4 = 1 + 1 + 2 + 5 + 15
        assert_eq!(patterns_upto(4).len(), 24);
    }

    #[test]
    fn concat_orbit_examples() {
        let one = OrbitSuite::from_labels(&[&[1]]);
        assert_eq!(
            concat_orbit(&one, &one),
            OrbitSuite::from_labels(&[&[1, 1], &[1, 2]])
        );
        let b = OrbitSuite::from_labels(&[&[1, 2], &[1, 1, 1]]);
        assert_eq!(concat_orbit(&OrbitSuite::unit(), &b), b);
        assert_eq!(
            concat_orbit(&OrbitSuite::from_labels(&[&[1, 1]]), &one),
            OrbitSuite::from_labels(&[&[1, 1, 1], &[1, 1, 2]])
        );
    }

    #[test]
    fn rejects_invalid_rules() {
        let loc = |n: &str, arity| Location {
            name: n.into(),
            arity,
        };
        let err = Rna::new(
            vec![loc("p", 1)],
            0,
            vec![false],
            vec![vec![
                Rule {
                    target: 0,
                    assign: vec![Source::Input],
                },
                Rule {
                    target: 0,
                    assign: vec![Source::Input],
                },
            ]],
        )
        .unwrap_err();
        assert!(matches!(err, NominalError::InitialArity(_)));

        let locs = vec![loc("p", 0), loc("q", 2)];
        let rules = |q: Vec<Rule>| {
            vec![
                vec![Rule {
                    target: 0,
                    assign: vec![],
                }],
                q,
            ]
        };
        let r = |target, assign| Rule { target, assign };
        // Under `eq 1`, the input is register 1: storing both is not injective.
        let bad = rules(vec![
            r(1, vec![Source::Reg(0), Source::Input]),
            r(0, vec![]),
            r(0, vec![]),
        ]);
        assert!(matches!(
            Rna::new(locs.clone(), 0, vec![false, false], bad),
            Err(NominalError::NonInjective { .. })
        ));
        let missing = rules(vec![r(0, vec![]), r(0, vec![])]);
        assert!(matches!(
            Rna::new(locs.clone(), 0, vec![false, false], missing),
            Err(NominalError::RuleCount { .. })
        ));
        let bad_src = rules(vec![r(0, vec![]), r(0, vec![]), r(1, vec![Source::Reg(5), Source::Input])]);
        assert!(matches!(
            Rna::new(locs.clone(), 0, vec![false, false], bad_src),
            Err(NominalError::BadSource { .. })
        ));
        let bad_len = rules(vec![r(0, vec![]), r(0, vec![]), r(1, vec![Source::Input])]);
        assert!(matches!(
            Rna::new(locs, 0, vec![false, false], bad_len),
            Err(NominalError::AssignmentLength { .. })
        ));
    }

    #[test]
    fn hand_cover_is_weak_cover() {
        let a = double_atom_rna();
        let cover = double_atom_cover();
        assert!(verify_weak_cover_rna(&a, &cover).unwrap());
        assert_eq!(
            cover.delta[&(pat(&[1]), Ext::Fresh)],
            vec![1, 1, 2],
            "a, c ≠ a ↦ aac"
        );
    }

    #[test]
    fn hand_delta_is_equivariant() {
        let renamings = vec![vec![0, 2, 1, 3], vec![0, 5, 9, 7], vec![0, 3, 1, 2]];
        assert!(is_equivariant(
            &double_atom_cover().words,
            double_atom_delta,
            &renamings
        ));
        // A map that always answers with a fixed atom is not.
        let fixed = |_: &[Atom], _: Atom| vec![Atom(1)];
        assert!(!is_equivariant(&OrbitSuite::unit(), fixed, &renamings));
    }

    #[test]
    fn trivial_cover_is_not_weak_cover() {
        let a = double_atom_rna();
        let p = OrbitSuite::unit();
        let mut delta = BTreeMap::new();
        delta.insert((SymbolicWord::empty(), Ext::Fresh), vec![]);
        let cover = NominalCover { words: p, delta };
        assert!(!verify_weak_cover_rna(&a, &cover).unwrap());
    }

    #[test]
    fn cover_map_errors() {
        let a = double_atom_rna();
        let mut cover = double_atom_cover();
        cover.delta.insert((pat(&[1]), Ext::Fresh), vec![1, 2]);
        assert!(matches!(
            verify_weak_cover_rna(&a, &cover),
            Err(NominalError::DeltaOutside { .. })
        ));
        cover.delta.insert((pat(&[1]), Ext::Fresh), vec![1, 1, 3]);
        assert!(matches!(
            verify_weak_cover_rna(&a, &cover),
            Err(NominalError::DeltaSupport { .. })
        ));
        cover.delta.remove(&(pat(&[1]), Ext::Fresh));
        assert!(matches!(
            verify_weak_cover_rna(&a, &cover),
            Err(NominalError::DeltaMissing { .. })
        ));
    }

    #[test]
    fn computed_cover_and_search() {
        let a = double_atom_rna();
        let cover = weak_cover_rna(&a, 64).unwrap();
        assert!(verify_weak_cover_rna(&a, &cover).unwrap());
        let found = find_weak_cover(&a, &double_atom_cover().words).unwrap();
        assert!(verify_weak_cover_rna(&a, &found).unwrap());
        assert!(find_weak_cover(&a, &OrbitSuite::unit()).is_none());
    }

    #[test]
    fn char_set_examples() {
        let a = double_atom_rna();
        let w = OrbitSuite::from_labels(&[&[], &[1], &[1, 1]]);
        assert!(is_char_set_rna(&a, &w).unwrap());
        assert!(!is_char_set_rna(&a, &OrbitSuite::from_labels(&[&[], &[1]])).unwrap());
        let computed = char_set_rna(&a).unwrap();
        assert!(computed.contains_epsilon());
        assert!(is_char_set_rna(&a, &computed).unwrap());

        // q2 and q3 differ already on ε.
        let q2 = State { loc: 2, regs: vec![] };
        let q3 = State { loc: 3, regs: vec![] };
        assert!(separates(&a, &q2, &q3, &OrbitSuite::unit()));

        let loc = Location {
            name: "all".into(),
            arity: 0,
        };
        let univ = Rna::new(
            vec![loc],
            0,
            vec![true],
            vec![vec![Rule {
                target: 0,
                assign: vec![],
            }]],
        )
        .unwrap();
        assert_eq!(char_set_rna(&univ).unwrap(), OrbitSuite::unit());
    }

    #[test]
    fn non_minimal_is_rejected() {
        // q1 forgets nothing useful: its register is never compared.
        let loc = |n: &str, arity| Location {
            name: n.into(),
            arity,
        };
        let r = |target, assign| Rule { target, assign };
        let a = Rna::new(
            vec![loc("p", 0), loc("q", 1)],
            0,
            vec![false, true],
            vec![
                vec![r(1, vec![Source::Input])],
                vec![r(1, vec![Source::Reg(0)]), r(1, vec![Source::Reg(0)])],
            ],
        )
        .unwrap();
        assert!(!is_minimal_rna(&a));
        assert!(matches!(char_set_rna(&a), Err(NominalError::NotMinimal(_))));
        assert!(is_minimal_rna(&double_atom_rna()));
    }

    #[test]
    fn w_suite_examples() {
        let cover = double_atom_cover();
        let w = OrbitSuite::from_labels(&[&[], &[1], &[1, 1]]);
        let t = w_suite_rna(&cover.words, 0, &w).unwrap();
        assert!(t.max_len() <= 6);
        assert!(t.contains(&pat(&[1, 1])));
        assert_eq!(
            w_suite_rna(&OrbitSuite::unit(), 0, &OrbitSuite::unit()).unwrap(),
            OrbitSuite::from_labels(&[&[], &[1]])
        );
        assert!(matches!(
            w_suite_rna(&OrbitSuite::from_labels(&[&[1]]), 0, &w),
            Err(NominalError::MissingEpsilon(_))
        ));
    }

    #[test]
    fn agree_on_mutants() {
        let a = double_atom_rna();
        let cover = double_atom_cover();
        let w = OrbitSuite::from_labels(&[&[], &[1], &[1, 1]]);
        let t = w_suite_rna(&cover.words, 0, &w).unwrap();
        assert!(crate::words::all_pass(&agree_on_rna(&a, &a, &t)));
        let fails = crate::words::failures(&agree_on_rna(&a, &flipped_q2(), &t));
        assert!(fails.contains(&pat(&[1, 1])));
        let fails = crate::words::failures(&agree_on_rna(&a, &retargeted(), &t));
        assert!(fails.contains(&pat(&[1, 2])));
    }

    #[test]
    fn equiv_examples() {
        let a = double_atom_rna();
        assert!(equiv_rna(&a, &a).unwrap().is_equivalent());
        assert_eq!(
            equiv_rna(&a, &flipped_q2()).unwrap(),
            Equivalence::Counterexample(pat(&[1, 1]))
        );
        assert_eq!(
            equiv_rna(&a, &retargeted()).unwrap(),
            Equivalence::Counterexample(pat(&[1, 2]))
        );
    }

    #[test]
    fn register_renaming_preserves_language() {
        // Two registers stored in swapped order.
        let loc = |n: &str, arity| Location {
            name: n.into(),
            arity,
        };
        let r = |target, assign| Rule { target, assign };
        let build = |swap: bool| {
            let (first, second) = if swap {
                (Source::Input, Source::Reg(0))
            } else {
                (Source::Reg(0), Source::Input)
            };
            // Accepts abX exactly when X equals the first letter a.
            let (eq_a, eq_b) = if swap { (1, 0) } else { (0, 1) };
            let mut q2 = vec![r(4, vec![]), r(4, vec![]), r(4, vec![])];
            q2[eq_a] = r(3, vec![]);
            let _ = eq_b;
            Rna::new(
                vec![loc("s", 0), loc("a", 1), loc("ab", 2), loc("acc", 0), loc("sink", 0)],
                0,
                vec![false, false, false, true, false],
                vec![
                    vec![r(1, vec![Source::Input])],
                    vec![r(4, vec![]), r(2, vec![first, second])],
                    q2,
                    vec![r(4, vec![])],
                    vec![r(4, vec![])],
                ],
            )
            .unwrap()
        };
        let plain = build(false);
        let swapped = build(true);
        assert!(equiv_rna(&plain, &swapped).unwrap().is_equivalent());
        assert!(symbolic_run(&plain, &pat(&[1, 2, 1])).1);
        assert!(!symbolic_run(&plain, &pat(&[1, 2, 2])).1);
    }

    #[test]
    fn exploration_limit_reported() {
        let a = double_atom_rna();
        assert_eq!(
            equiv_rna_bounded(&a, &a, 1).unwrap_err(),
            NominalError::ExplorationLimit(1)
        );
    }
}
