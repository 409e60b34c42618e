//! Weighted automata over the rationals.
//!
//! A weighted automaton has an initial vector `s₀`, one square matrix `M^(a)`
//! per input symbol and an output vector `f`; it maps a word `w` to
//! `fᵀ · M^(w) · s₀` where `M^(ε) = I` and `M^(wa) = M^(a) · M^(w)`.
//! Columns index source states and rows index target states.
//!
//! State covers are sets of words whose state vectors span the whole state
//! space, and characterization sets are sets of words whose observation rows
//! `fᵀ · M^(v)` span the observation space. Both are found by breadth-first
//! saturation with exact Gaussian elimination.

pub mod linalg;

use std::collections::VecDeque;

use num::{One, Zero};
use thiserror::Error;

use crate::exec::Exec;
use crate::words::{concat_suites, words_upto, Alphabet, Equivalence, Suite, Verdict, Word, WordError};

pub use linalg::{Rat, VecSpaceBasis};
use linalg::{dot, mat_vec, rat, vec_mat, zeros};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WaError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("expected {expected} transition matrices, found {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("{what} has length {found}, expected {expected}")]
    Dimension {
        what: String,
        found: usize,
        expected: usize,
    },
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wa {
    alphabet: Alphabet,
    init: Vec<Rat>,
    // trans[a][target][source]
    trans: Vec<Vec<Vec<Rat>>>,
    fin: Vec<Rat>,
}

impl Wa {
    pub fn new(
        alphabet: Alphabet,
        init: Vec<Rat>,
        trans: Vec<Vec<Vec<Rat>>>,
        fin: Vec<Rat>,
    ) -> Result<Self, WaError> {
        let n = init.len();
        if trans.len() != alphabet.len() {
            return Err(WaError::MatrixCount {
                expected: alphabet.len(),
                found: trans.len(),
            });
        }
        if fin.len() != n {
            return Err(WaError::Dimension {
                what: "output vector".into(),
                found: fin.len(),
                expected: n,
            });
        }
        for (a, m) in trans.iter().enumerate() {
            let bad_row = m.iter().find(|r| r.len() != n).map(Vec::len);
            if m.len() != n || bad_row.is_some() {
                return Err(WaError::Dimension {
                    what: format!("matrix of `{}`", alphabet.name(a)),
                    found: bad_row.unwrap_or(m.len()),
                    expected: n,
                });
            }
        }
        Ok(Wa {
            alphabet,
            init,
            trans,
            fin,
        })
    }

    /// A zero automaton of dimension `n`, to be filled in with the setters.
    pub fn zero(alphabet: Alphabet, n: usize) -> Self {
        let trans = vec![vec![zeros(n); n]; alphabet.len()];
        Wa {
            alphabet,
            init: zeros(n),
            trans,
            fin: zeros(n),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.init.len()
    }

    pub fn init(&self) -> &[Rat] {
        &self.init
    }

    pub fn fin(&self) -> &[Rat] {
        &self.fin
    }

    pub fn matrix(&self, symbol: usize) -> &[Vec<Rat>] {
        &self.trans[symbol]
    }

    /// Weight of the `symbol`-transition from `source` to `target`.
    pub fn weight(&self, source: usize, symbol: usize, target: usize) -> &Rat {
        &self.trans[symbol][target][source]
    }

    pub fn set_weight(&mut self, source: usize, symbol: usize, target: usize, v: Rat) {
        self.trans[symbol][target][source] = v;
    }

    pub fn set_init(&mut self, state: usize, v: Rat) {
        self.init[state] = v;
    }

    pub fn set_final(&mut self, state: usize, v: Rat) {
        self.fin[state] = v;
    }

    /// `M^(a) · v`.
    pub fn step(&self, symbol: usize, v: &[Rat]) -> Vec<Rat> {
        mat_vec(&self.trans[symbol], v)
    }

    /// `r · M^(a)`.
    pub fn step_row(&self, r: &[Rat], symbol: usize) -> Vec<Rat> {
        vec_mat(r, &self.trans[symbol])
    }

    /// `M^(w) · s`.
    pub fn run_from(&self, s: &[Rat], w: &Word) -> Vec<Rat> {
        w.symbols()
            .iter()
            .fold(s.to_vec(), |v, &a| self.step(a, &v))
    }

    /// `M^(w) · s₀`.
    pub fn state_vector(&self, w: &Word) -> Result<Vec<Rat>, WaError> {
        self.alphabet.check(w)?;
        Ok(self.run_from(&self.init, w))
    }

    /// The language of `s` at `w`: `fᵀ · M^(w) · s`.
    pub fn lang_from(&self, s: &[Rat], w: &Word) -> Rat {
        dot(&self.fin, &self.run_from(s, w))
    }

    /// Observation row `fᵀ · M^(w)`.
    pub fn observation(&self, w: &Word) -> Vec<Rat> {
        // fᵀ M^(a₁…aₙ) = (((fᵀ M^(aₙ)) M^(aₙ₋₁)) …) M^(a₁)
        w.symbols()
            .iter()
            .rev()
            .fold(self.fin.clone(), |r, &a| self.step_row(&r, a))
    }

    /// Direct sum `self ⊕ other`, with `other`'s output vector scaled by `scale`.
    pub fn direct_sum(&self, other: &Wa, scale: &Rat) -> Result<Wa, WaError> {
        if self.alphabet != other.alphabet {
            return Err(WaError::AlphabetMismatch);
        }
        let (n, m) = (self.dim(), other.dim());
        let mut out = Wa::zero(self.alphabet.clone(), n + m);
        for i in 0..n {
            out.init[i] = self.init[i].clone();
            out.fin[i] = self.fin[i].clone();
        }
        for j in 0..m {
            out.init[n + j] = other.init[j].clone();
            out.fin[n + j] = &other.fin[j] * scale;
        }
        for a in 0..self.alphabet.len() {
            for r in 0..n {
                for c in 0..n {
                    out.trans[a][r][c] = self.trans[a][r][c].clone();
                }
            }
            for r in 0..m {
                for c in 0..m {
                    out.trans[a][n + r][n + c] = other.trans[a][r][c].clone();
                }
            }
        }
        Ok(out)
    }

    /// Relabels states: state `q` becomes `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Wa {
        let n = self.dim();
        let mut out = Wa::zero(self.alphabet.clone(), n);
        for (q, &to) in perm.iter().enumerate() {
            out.init[to] = self.init[q].clone();
            out.fin[to] = self.fin[q].clone();
        }
        for a in 0..self.alphabet.len() {
            for r in 0..n {
                for c in 0..n {
                    out.trans[a][perm[r]][perm[c]] = self.trans[a][r][c].clone();
                }
            }
        }
        out
    }
}

pub fn wa_lang(a: &Wa, w: &Word) -> Result<Rat, WaError> {
    Ok(dot(&a.fin, &a.state_vector(w)?))
}

/// Basis of the reachable space `span{M^(w)s₀}`, explored breadth-first.
/// Witnesses are prefix-closed and length-lexicographically least.
pub fn forward_basis(a: &Wa) -> VecSpaceBasis {
    saturate(a.dim(), a.alphabet.len(), a.init.clone(), |v, s| a.step(s, v), Word::push)
}

/// Basis of the observation space `span{fᵀM^(w)}`, explored breadth-first
/// by prepending symbols. Witnesses are suffix-closed.
pub fn backward_basis(a: &Wa) -> VecSpaceBasis {
    saturate(
        a.dim(),
        a.alphabet.len(),
        a.fin.clone(),
        |r, s| a.step_row(r, s),
        Word::prepend,
    )
}

fn saturate(
    dim: usize,
    n_symbols: usize,
    seed: Vec<Rat>,
    step: impl Fn(&[Rat], usize) -> Vec<Rat>,
    extend: impl Fn(&Word, usize) -> Word,
) -> VecSpaceBasis {
    let mut basis = VecSpaceBasis::new(dim);
    if !basis.insert(seed.clone(), Word::empty()) {
        return basis;
    }
    let mut queue = VecDeque::from([(Word::empty(), seed)]);
    while let Some((w, v)) = queue.pop_front() {
        if basis.is_full() {
            break;
        }
        for s in 0..n_symbols {
            let next = step(&v, s);
            let nw = extend(&w, s);
            if basis.insert(next.clone(), nw.clone()) {
                queue.push_back((nw, next));
            }
        }
    }
    basis
}

/// `ε ∈ p` and the state vectors of `p` span the full state space.
pub fn is_state_cover_wa(a: &Wa, p: &Suite) -> Result<bool, WaError> {
    if p.alphabet() != &a.alphabet {
        return Err(WaError::AlphabetMismatch);
    }
    if !p.contains_epsilon() {
        return Ok(false);
    }
    let mut b = VecSpaceBasis::new(a.dim());
    for w in p {
        b.insert(a.state_vector(w)?, w.clone());
        if b.is_full() {
            break;
        }
    }
    Ok(b.is_full())
}

/// `ε ∈ w` and the observation rows of `w` span the observation space.
pub fn is_char_set_wa(a: &Wa, w: &Suite) -> Result<bool, WaError> {
    if w.alphabet() != &a.alphabet {
        return Err(WaError::AlphabetMismatch);
    }
    if !w.contains_epsilon() {
        return Ok(false);
    }
    let target = backward_basis(a).rank();
    let mut b = VecSpaceBasis::new(a.dim());
    for v in w {
        b.insert(a.observation(v), v.clone());
    }
    Ok(b.rank() == target)
}

/// Distinct state vectors have distinct languages.
pub fn is_minimal_wa(a: &Wa) -> bool {
    backward_basis(a).rank() == a.dim()
}

/// Restricts to the reachable space, then quotients by the unobservable
/// space. The result has dimension equal to the Hankel rank.
pub fn minimize_wa(a: &Wa) -> Wa {
    backward_reduce(&forward_reduce(a))
}

fn forward_reduce(a: &Wa) -> Wa {
    let basis = forward_basis(a);
    let k = basis.rank();
    let mut out = Wa::zero(a.alphabet.clone(), k);
    if k == 0 {
        return out;
    }
    out.init = basis.coords(&a.init).expect("s₀ lies in its reachable space");
    for (j, v) in basis.vectors().iter().enumerate() {
        out.fin[j] = dot(&a.fin, v);
        for s in 0..a.alphabet.len() {
            let c = basis
                .coords(&a.step(s, v))
                .expect("reachable space is closed under transitions");
            for (i, x) in c.into_iter().enumerate() {
                out.trans[s][i][j] = x;
            }
        }
    }
    out
}

fn backward_reduce(a: &Wa) -> Wa {
    let basis = backward_basis(a);
    let k = basis.rank();
    let mut out = Wa::zero(a.alphabet.clone(), k);
    if k == 0 {
        return out;
    }
    let rows = basis.vectors();
    out.init = rows.iter().map(|r| dot(r, &a.init)).collect();
    out.fin = basis.coords(&a.fin).expect("fᵀ lies in the observation space");
    for (i, r) in rows.iter().enumerate() {
        for s in 0..a.alphabet.len() {
            let c = basis
                .coords(&a.step_row(r, s))
                .expect("observation space is closed under transitions");
            out.trans[s][i] = c;
        }
    }
    out
}

/// Exact equivalence via the difference automaton `a ⊕ (−b)`: the languages
/// agree iff the output vanishes on a basis of the difference automaton's
/// reachable space. The counterexample is a shortest word, of length below
/// `dim(a) + dim(b)`.
pub fn equiv_wa(a: &Wa, b: &Wa) -> Result<Equivalence<Word>, WaError> {
    let diff = a.direct_sum(b, &-Rat::one())?;
    let basis = forward_basis(&diff);
    Ok(basis
        .vectors()
        .iter()
        .zip(basis.witnesses())
        .find(|(v, _)| !dot(&diff.fin, v).is_zero())
        .map_or(Equivalence::Equivalent, |(_, w)| {
            Equivalence::Counterexample(w.clone())
        }))
}

pub type WaVerdict = Verdict<Word, Rat>;

pub fn agree_on_wa(spec: &Wa, imp: &Wa, t: &Suite) -> Result<Vec<WaVerdict>, WaError> {
    agree_on_wa_with(Exec::default(), spec, imp, t)
}

pub fn agree_on_wa_with(
    exec: Exec,
    spec: &Wa,
    imp: &Wa,
    t: &Suite,
) -> Result<Vec<WaVerdict>, WaError> {
    if spec.alphabet != imp.alphabet || t.alphabet() != &spec.alphabet {
        return Err(WaError::AlphabetMismatch);
    }
    let words = t.to_vec();
    Ok(exec.map(&words, |w| {
        Verdict::new(
            w.clone(),
            wa_lang(spec, w).expect("suite checked against alphabet"),
            wa_lang(imp, w).expect("suite checked against alphabet"),
        )
    }))
}

/// `imp` lies in the fault domain of `p` and `k`: `p · Σ^{≤k}` is a state
/// cover for it.
pub fn in_fault_domain_wa(imp: &Wa, p: &Suite, k: usize) -> Result<bool, WaError> {
    let c = concat_suites(p, &words_upto(&imp.alphabet, k))?;
    is_state_cover_wa(imp, &c)
}

/// Witness words of a basis as a suite.
pub fn witness_suite(a: &Wa, b: &VecSpaceBasis) -> Suite {
    let mut s = Suite::new(a.alphabet.clone());
    for w in b.witnesses() {
        s.insert(w.clone()).expect("witnesses are over the alphabet");
    }
    s
}

/// Two-state automaton over `{a, b}` computing the value of a word read as
/// a binary number (`a` = 0, `b` = 1).
pub fn binary_value_wa() -> Wa {
    let sigma = Alphabet::new(["a", "b"]).expect("valid alphabet");
    let mut w = Wa::zero(sigma, 2);
    w.set_init(0, rat(1));
    w.set_final(1, rat(1));
    w.set_weight(0, 0, 0, rat(1));
    w.set_weight(0, 1, 0, rat(1));
    w.set_weight(0, 1, 1, rat(1));
    w.set_weight(1, 0, 1, rat(2));
    w.set_weight(1, 1, 1, rat(2));
    w
}

/// Five-state faulty implementation of [`binary_value_wa`]; it differs
/// first on `baab` (9 vs 13).
pub fn faulty_binary_wa() -> Wa {
    let sigma = Alphabet::new(["a", "b"]).expect("valid alphabet");
    let mut w = Wa::zero(sigma, 5);
    w.set_init(0, rat(1));
    for q in [1, 3, 4] {
        w.set_final(q, rat(1));
    }
    let edges: [(usize, usize, usize, i64); 12] = [
        (0, 0, 2, 1),
        (0, 1, 0, 1),
        (0, 1, 1, 1),
        (1, 0, 3, 2),
        (1, 1, 4, 2),
        (2, 0, 2, 1),
        (2, 1, 2, 1),
        (2, 1, 4, 1),
        (3, 0, 3, 2),
        (3, 1, 3, 2),
        (3, 0, 0, 2),
        (4, 0, 4, 2),
    ];
    for (src, sym, dst, v) in edges {
        w.set_weight(src, sym, dst, rat(v));
    }
    w.set_weight(4, 1, 4, rat(2));
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{failures, w_suite};

    fn sigma() -> Alphabet {
        binary_value_wa().alphabet().clone()
    }

    fn word(s: &str) -> Word {
        sigma().parse_compact(s).unwrap()
    }

    fn suite(ws: &[&str]) -> Suite {
        Suite::from_compact(sigma(), ws).unwrap()
    }

    fn binary_value(w: &Word) -> i64 {
        w.symbols().iter().fold(0, |acc, &s| acc * 2 + s as i64)
    }

    #[test]
    fn lang_examples() {
        let spec = binary_value_wa();
        let imp = faulty_binary_wa();
        assert_eq!(wa_lang(&spec, &Word::empty()).unwrap(), rat(0));
        assert_eq!(wa_lang(&spec, &word("b")).unwrap(), rat(1));
        assert_eq!(wa_lang(&spec, &word("baab")).unwrap(), rat(9));
        assert_eq!(wa_lang(&imp, &word("baab")).unwrap(), rat(13));
        assert!(wa_lang(&spec, &Word::from(vec![5])).is_err());
    }

    #[test]
    fn lang_is_binary_value() {
        let spec = binary_value_wa();
        for w in &words_upto(&sigma(), 6) {
            assert_eq!(wa_lang(&spec, w).unwrap(), rat(binary_value(w)));
        }
    }

    #[test]
    fn matrices_match_transition_descriptions() {
        // M^(a)(k₀..k₄) = 2k₃q₀ + (k₀+k₂)q₂ + (2k₁+2k₃)q₃ + 2k₄q₄
        // M^(b)(k₀..k₄) = k₀q₀ + k₀q₁ + k₂q₂ + 2k₃q₃ + (2k₁+k₂+2k₄)q₄
        let imp = faulty_binary_wa();
        let k: Vec<Rat> = [3, 5, 7, 11, 13].iter().map(|&x| rat(x)).collect();
        let ka = imp.step(0, &k);
        assert_eq!(ka, [22, 0, 10, 32, 26].map(rat).to_vec());
        let kb = imp.step(1, &k);
        assert_eq!(kb, [3, 3, 7, 22, 43].map(rat).to_vec());
        assert_eq!(binary_value_wa().weight(0, 1, 1), &rat(1));
    }

    #[test]
    fn forward_basis_examples() {
        let spec = binary_value_wa();
        let fb = forward_basis(&spec);
        assert_eq!(fb.rank(), 2);
        assert_eq!(fb.witnesses(), &[Word::empty(), word("b")]);

        let imp = faulty_binary_wa();
        let fb = forward_basis(&imp);
        assert_eq!(fb.rank(), 5);
        assert_eq!(
            fb.witnesses(),
            &[Word::empty(), word("a"), word("b"), word("ab"), word("ba")]
        );

        let mut zero = spec.clone();
        zero.set_init(0, rat(0));
        assert_eq!(forward_basis(&zero).rank(), 0);
    }

    #[test]
    fn state_cover_examples() {
        let spec = binary_value_wa();
        assert!(is_state_cover_wa(&spec, &suite(&["", "b"])).unwrap());
        assert!(!is_state_cover_wa(&spec, &suite(&[""])).unwrap());
        assert!(!is_state_cover_wa(&spec, &suite(&["a", "b"])).unwrap());
        let imp = faulty_binary_wa();
        assert!(is_state_cover_wa(&imp, &suite(&["", "a", "b", "ba", "bb"])).unwrap());
    }

    #[test]
    fn backward_basis_examples() {
        let spec = binary_value_wa();
        let bb = backward_basis(&spec);
        assert_eq!(bb.rank(), 2);
        assert_eq!(bb.witnesses(), &[Word::empty(), word("b")]);

        let mut silent = spec.clone();
        silent.set_final(1, rat(0));
        assert_eq!(backward_basis(&silent).rank(), 0);

        let imp = faulty_binary_wa();
        let r = backward_basis(&imp).rank();
        // Oracle: rank of all observation rows of words up to length 5.
        let rows: Vec<Vec<Rat>> = words_upto(&sigma(), 5)
            .iter()
            .map(|w| imp.observation(w))
            .collect();
        assert_eq!(r, linalg::rank_of(5, &rows));
        assert!(r <= 5);
    }

    #[test]
    fn observation_agrees_with_language() {
        let imp = faulty_binary_wa();
        for w in &words_upto(&sigma(), 4) {
            assert_eq!(dot(&imp.observation(w), imp.init()), wa_lang(&imp, w).unwrap());
        }
    }

    #[test]
    fn char_set_examples() {
        let spec = binary_value_wa();
        assert!(is_char_set_wa(&spec, &suite(&["", "b"])).unwrap());
        assert!(!is_char_set_wa(&spec, &suite(&[""])).unwrap());
        let imp = faulty_binary_wa();
        let mut w = witness_suite(&imp, &backward_basis(&imp));
        w.insert(Word::empty()).unwrap();
        assert!(is_char_set_wa(&imp, &w).unwrap());
    }

    #[test]
    fn minimality_examples() {
        assert!(is_minimal_wa(&binary_value_wa()));
        let spec = binary_value_wa();
        let mut silent = spec.clone();
        for q in 0..2 {
            silent.set_final(q, rat(0));
        }
        let doubled = spec.direct_sum(&silent, &rat(1)).unwrap();
        assert!(!is_minimal_wa(&doubled));
        let mut one = Wa::zero(sigma(), 1);
        one.set_final(0, rat(3));
        assert!(is_minimal_wa(&one));
    }

    #[test]
    fn minimize_examples() {
        let spec = binary_value_wa();
        let m = minimize_wa(&spec);
        assert_eq!(m.dim(), 2);
        assert!(equiv_wa(&spec, &m).unwrap().is_equivalent());

        // Extra unreachable state.
        let mut extra = Wa::zero(sigma(), 3);
        for q in 0..2 {
            extra.set_init(q, spec.init()[q].clone());
            extra.set_final(q, spec.fin()[q].clone());
            for a in 0..2 {
                for t in 0..2 {
                    extra.set_weight(q, a, t, spec.weight(q, a, t).clone());
                }
            }
        }
        extra.set_final(2, rat(5));
        extra.set_weight(2, 0, 2, rat(3));
        let m = minimize_wa(&extra);
        assert_eq!(m.dim(), 2);
        assert!(is_minimal_wa(&m));
        assert!(equiv_wa(&extra, &m).unwrap().is_equivalent());

        let mut zero = spec.clone();
        zero.set_final(1, rat(0));
        assert_eq!(minimize_wa(&zero).dim(), 0);
        assert!(equiv_wa(&zero, &minimize_wa(&zero)).unwrap().is_equivalent());

        let imp = faulty_binary_wa();
        let m = minimize_wa(&imp);
        assert!(is_minimal_wa(&m));
        assert!(equiv_wa(&imp, &m).unwrap().is_equivalent());
    }

    #[test]
    fn equiv_examples() {
        let spec = binary_value_wa();
        let imp = faulty_binary_wa();
        assert_eq!(
            equiv_wa(&spec, &imp).unwrap(),
            Equivalence::Counterexample(word("baab"))
        );
        // Brute force: no shorter word differs.
        for w in &words_upto(&sigma(), 3) {
            assert_eq!(wa_lang(&spec, w).unwrap(), wa_lang(&imp, w).unwrap());
        }
        assert!(equiv_wa(&spec, &spec).unwrap().is_equivalent());
    }

    #[test]
    fn agree_on_examples() {
        let spec = binary_value_wa();
        let imp = faulty_binary_wa();
        let p = suite(&["", "b"]);
        let t = w_suite(&p, &sigma(), 1, &p).unwrap();
        let v = agree_on_wa(&spec, &imp, &t).unwrap();
        assert_eq!(failures(&v), vec![word("baab")]);
        let bad = v.iter().find(|v| !v.pass).unwrap();
        assert_eq!((bad.spec_out.clone(), bad.impl_out.clone()), (rat(9), rat(13)));
        assert!(crate::words::all_pass(&agree_on_wa(&spec, &spec, &t).unwrap()));
        assert!(crate::words::all_pass(&agree_on_wa(&spec, &imp, &suite(&[""])).unwrap()));
    }

    #[test]
    fn fault_domain_examples() {
        let imp = faulty_binary_wa();
        let p = suite(&["", "b"]);
        assert!(in_fault_domain_wa(&imp, &p, 1).unwrap());
        assert!(!in_fault_domain_wa(&imp, &p, 0).unwrap());
        assert!(in_fault_domain_wa(&binary_value_wa(), &p, 0).unwrap());
    }

    #[test]
    fn ranks_invariant_under_permutation() {
        let imp = faulty_binary_wa();
        let perm = [3, 0, 4, 1, 2];
        let p = imp.permuted(&perm);
        assert_eq!(forward_basis(&p).rank(), forward_basis(&imp).rank());
        assert_eq!(backward_basis(&p).rank(), backward_basis(&imp).rank());
        assert!(equiv_wa(&p, &imp).unwrap().is_equivalent());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let other = Wa::zero(Alphabet::new(["x"]).unwrap(), 1);
        assert_eq!(
            equiv_wa(&binary_value_wa(), &other).unwrap_err(),
            WaError::AlphabetMismatch
        );
    }
}
