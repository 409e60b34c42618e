//! Text formats for machines, suites and pattern files.
//!
//! Every format is line based: one directive per line, tokens separated by
//! whitespace, `#` starts a comment line. Parsing validates the same
//! invariants as the constructors and never fills in missing parts.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::path::Path;

use num::{BigInt, Zero};

use crate::fsm::{Fsm, Kind, Outputs};
use crate::nominal::{Guard, Location, OrbitSuite, Rna, Rule, Source, SymbolicWord};
use crate::weighted::{Rat, Wa};
use crate::words::{Alphabet, Suite, EPSILON_TOKEN};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Fsm(Fsm),
    Wa(Wa),
    Rna(Rna),
}

impl Machine {
    pub fn family(&self) -> &'static str {
        match self {
            Machine::Fsm(_) => "fsm",
            Machine::Wa(_) => "wa",
            Machine::Rna(_) => "rna",
        }
    }
}

const NO_FILE: &str = "<input>";

struct Lines<'a> {
    file: &'a str,
    items: Vec<(usize, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(file: &'a str, text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.trim();
                (!l.is_empty() && !l.starts_with('#'))
                    .then(|| (i + 1, l.split_whitespace().collect()))
            })
            .collect();
        Lines { file, items }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |(l, _)| *l)
    }
}

fn parse_index(lines: &Lines, line: usize, tok: &str, what: &str, bound: usize) -> Result<usize, ParseError> {
    let i: usize = tok
        .parse()
        .map_err(|_| lines.err(line, format!("expected {what} index, found `{tok}`")))?;
    if i >= bound {
        return Err(lines.err(line, format!("{what} `{tok}` out of range (have {bound})")));
    }
    Ok(i)
}

fn expect_args(lines: &Lines, line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    if toks.len() != n + 1 {
        return Err(lines.err(
            line,
            format!("`{}` takes {} argument(s), found {}", toks[0], n, toks.len() - 1),
        ));
    }
    Ok(())
}

/// Parses `p/q` or an integer; the sign may only precede `p`.
pub fn parse_rational(tok: &str) -> Option<Rat> {
    let (num, den) = match tok.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (tok, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix(['-', '+']).unwrap_or(num);
    if !digits(unsigned) {
        return None;
    }
    let p: BigInt = num.parse().ok()?;
    let q: BigInt = match den {
        Some(q) if digits(q) => q.parse().ok()?,
        Some(_) => return None,
        None => BigInt::from(1),
    };
    if q.is_zero() {
        return None;
    }
    Some(Rat::new(p, q))
}

pub fn format_rational(v: &Rat) -> String {
    v.to_string()
}

pub fn parse_machine(text: &str) -> Result<Machine, ParseError> {
    parse_machine_named(NO_FILE, text)
}

pub fn read_machine(path: &Path) -> Result<Machine, ParseError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        file: name.clone(),
        line: 0,
        message: e.to_string(),
    })?;
    parse_machine_named(&name, &text)
}

pub fn parse_machine_named(file: &str, text: &str) -> Result<Machine, ParseError> {
    let lines = Lines::new(file, text);
    let Some((line, first)) = lines.items.first() else {
        return Err(lines.err(1, "empty file: expected `kind` directive"));
    };
    if first[0] != "kind" || first.len() != 2 {
        return Err(lines.err(*line, format!("expected `kind <family>`, found `{}`", first.join(" "))));
    }
    match first[1] {
        "dfa" => parse_fsm(&lines, Kind::Dfa).map(Machine::Fsm),
        "moore" => parse_fsm(&lines, Kind::Moore).map(Machine::Fsm),
        "mealy" => parse_fsm(&lines, Kind::Mealy).map(Machine::Fsm),
        "wa" => parse_wa(&lines).map(Machine::Wa),
        "rna" => parse_rna(&lines).map(Machine::Rna),
        other => Err(lines.err(*line, format!("unknown machine kind `{other}`"))),
    }
}

fn parse_alphabet(lines: &Lines, line: usize, toks: &[&str]) -> Result<Alphabet, ParseError> {
    if let Some(t) = toks[1..].iter().find(|t| **t == EPSILON_TOKEN) {
        return Err(lines.err(line, format!("`{t}` is reserved and cannot be a symbol")));
    }
    Alphabet::new(toks[1..].iter().copied()).map_err(|e| lines.err(line, e.to_string()))
}

fn once<T>(lines: &Lines, line: usize, slot: &mut Option<T>, v: T, name: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(lines.err(line, format!("duplicate `{name}` directive")));
    }
    *slot = Some(v);
    Ok(())
}

fn parse_fsm(lines: &Lines, kind: Kind) -> Result<Fsm, ParseError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut n: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut accepting: Option<Vec<usize>> = None;
    let mut out_state: BTreeMap<usize, (usize, String)> = BTreeMap::new();
    let mut out_trans: BTreeMap<(usize, usize), (usize, String)> = BTreeMap::new();
    let mut trans: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();

    let need_alpha = |a: &Option<Alphabet>, line| {
        a.clone()
            .ok_or_else(|| lines.err(line, "`alphabet` must come before this directive"))
    };
    let need_n = |n: Option<usize>, line| n.ok_or_else(|| lines.err(line, "`states` must come before this directive"));

    for (line, toks) in &lines.items[1..] {
        let line = *line;
        match toks[0] {
            "alphabet" => once(lines, line, &mut alphabet, parse_alphabet(lines, line, toks)?, "alphabet")?,
            "states" => {
                expect_args(lines, line, toks, 1)?;
                let v: usize = toks[1]
                    .parse()
                    .map_err(|_| lines.err(line, format!("expected state count, found `{}`", toks[1])))?;
                if v == 0 {
                    return Err(lines.err(line, "machine must have at least one state"));
                }
                once(lines, line, &mut n, v, "states")?;
            }
            "initial" => {
                expect_args(lines, line, toks, 1)?;
                let q = parse_index(lines, line, toks[1], "state", need_n(n, line)?)?;
                once(lines, line, &mut initial, q, "initial")?;
            }
            "accepting" if kind == Kind::Dfa => {
                let n = need_n(n, line)?;
                let mut qs = Vec::new();
                for t in &toks[1..] {
                    let q = parse_index(lines, line, t, "state", n)?;
                    if qs.contains(&q) {
                        return Err(lines.err(line, format!("state `{t}` listed twice")));
                    }
                    qs.push(q);
                }
                once(lines, line, &mut accepting, qs, "accepting")?;
            }
            "output" if kind == Kind::Moore => {
                expect_args(lines, line, toks, 2)?;
                let q = parse_index(lines, line, toks[1], "state", need_n(n, line)?)?;
                if let Some((prev, _)) = out_state.insert(q, (line, toks[2].to_string())) {
                    return Err(lines.err(line, format!("duplicate output for state `{}` (first on line {prev})", toks[1])));
                }
            }
            "output" if kind == Kind::Mealy => {
                expect_args(lines, line, toks, 3)?;
                let q = parse_index(lines, line, toks[1], "state", need_n(n, line)?)?;
                let a = need_alpha(&alphabet, line)?
                    .symbol(toks[2])
                    .map_err(|_| lines.err(line, format!("unknown symbol `{}`", toks[2])))?;
                if let Some((prev, _)) = out_trans.insert((q, a), (line, toks[3].to_string())) {
                    return Err(lines.err(
                        line,
                        format!("duplicate output for `{} {}` (first on line {prev})", toks[1], toks[2]),
                    ));
                }
            }
            "trans" => {
                expect_args(lines, line, toks, 3)?;
                let n = need_n(n, line)?;
                let q = parse_index(lines, line, toks[1], "state", n)?;
                let a = need_alpha(&alphabet, line)?
                    .symbol(toks[2])
                    .map_err(|_| lines.err(line, format!("unknown symbol `{}`", toks[2])))?;
                let t = parse_index(lines, line, toks[3], "state", n)?;
                if let Some((prev, _)) = trans.insert((q, a), (line, t)) {
                    return Err(lines.err(
                        line,
                        format!("duplicate transition `{} {}` (first on line {prev})", toks[1], toks[2]),
                    ));
                }
            }
            other => return Err(lines.err(line, format!("unknown directive `{other}` for kind {kind}"))),
        }
    }

    let end = lines.last_line();
    let alphabet = alphabet.ok_or_else(|| lines.err(end, "missing `alphabet` directive"))?;
    let n = n.ok_or_else(|| lines.err(end, "missing `states` directive"))?;
    let initial = initial.ok_or_else(|| lines.err(end, "missing `initial` directive"))?;
    let mut delta = vec![vec![0; alphabet.len()]; n];
    for (q, row) in delta.iter_mut().enumerate() {
        for (a, cell) in row.iter_mut().enumerate() {
            *cell = trans.get(&(q, a)).map(|(_, t)| *t).ok_or_else(|| {
                lines.err(end, format!("missing transition `trans {q} {} ...`", alphabet.name(a)))
            })?;
        }
    }
    let outputs = match kind {
        Kind::Dfa => {
            let acc = accepting.unwrap_or_default();
            Outputs::PerState(
                (0..n)
                    .map(|q| if acc.contains(&q) { "1" } else { "0" }.to_string())
                    .collect(),
            )
        }
        Kind::Moore => Outputs::PerState(
            (0..n)
                .map(|q| {
                    out_state
                        .get(&q)
                        .map(|(_, v)| v.clone())
                        .ok_or_else(|| lines.err(end, format!("missing output for state `{q}`")))
                })
                .collect::<Result<_, _>>()?,
        ),
        Kind::Mealy => Outputs::PerTransition(
            (0..n)
                .map(|q| {
                    (0..alphabet.len())
                        .map(|a| {
                            out_trans.get(&(q, a)).map(|(_, v)| v.clone()).ok_or_else(|| {
                                lines.err(end, format!("missing output `output {q} {} ...`", alphabet.name(a)))
                            })
                        })
                        .collect::<Result<_, _>>()
                })
                .collect::<Result<_, _>>()?,
        ),
    };
    Fsm::new(kind, alphabet, initial, delta, outputs).map_err(|e| lines.err(end, e.to_string()))
}

fn parse_wa(lines: &Lines) -> Result<Wa, ParseError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut dim: Option<usize> = None;
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut wa: Option<Wa> = None;

    for (line, toks) in &lines.items[1..] {
        let line = *line;
        let rational = |tok: &str| {
            parse_rational(tok).ok_or_else(|| lines.err(line, format!("invalid rational `{tok}`")))
        };
        match toks[0] {
            "alphabet" => {
                if dim.is_some() {
                    return Err(lines.err(line, "`alphabet` must come before `dim`"));
                }
                once(lines, line, &mut alphabet, parse_alphabet(lines, line, toks)?, "alphabet")?
            }
            "dim" => {
                expect_args(lines, line, toks, 1)?;
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| lines.err(line, format!("expected dimension, found `{}`", toks[1])))?;
                let a = alphabet
                    .clone()
                    .ok_or_else(|| lines.err(line, "`alphabet` must come before `dim`"))?;
                once(lines, line, &mut dim, n, "dim")?;
                wa = Some(Wa::zero(a, n));
            }
            "init" | "final" | "trans" => {
                let (Some(n), Some(m)) = (dim, wa.as_mut()) else {
                    return Err(lines.err(line, "`dim` must come before this directive"));
                };
                let key = toks[..toks.len() - 1].join(" ");
                if toks[0] == "trans" {
                    expect_args(lines, line, toks, 4)?;
                    let i = parse_index(lines, line, toks[1], "state", n)?;
                    let a = m
                        .alphabet()
                        .symbol(toks[2])
                        .map_err(|_| lines.err(line, format!("unknown symbol `{}`", toks[2])))?;
                    let j = parse_index(lines, line, toks[3], "state", n)?;
                    m.set_weight(i, a, j, rational(toks[4])?);
                } else {
                    expect_args(lines, line, toks, 2)?;
                    let i = parse_index(lines, line, toks[1], "state", n)?;
                    let v = rational(toks[2])?;
                    if toks[0] == "init" {
                        m.set_init(i, v);
                    } else {
                        m.set_final(i, v);
                    }
                }
                if let Some(prev) = seen.insert(key.clone(), line) {
                    return Err(lines.err(line, format!("duplicate entry `{key}` (first on line {prev})")));
                }
            }
            other => return Err(lines.err(line, format!("unknown directive `{other}` for kind wa"))),
        }
    }
    let end = lines.last_line();
    if alphabet.is_none() {
        return Err(lines.err(end, "missing `alphabet` directive"));
    }
    wa.ok_or_else(|| lines.err(end, "missing `dim` directive"))
}

fn parse_rna(lines: &Lines) -> Result<Rna, ParseError> {
    let mut locs: Vec<Location> = Vec::new();
    let mut by_name: HashMap<&str, usize> = HashMap::new();
    let mut initial: Option<usize> = None;
    let mut accepting: Option<Vec<bool>> = None;
    let mut rules: BTreeMap<(usize, Guard), (usize, Rule)> = BTreeMap::new();

    for (line, toks) in &lines.items[1..] {
        let line = *line;
        let loc_of = |name: &str| {
            by_name
                .get(name)
                .copied()
                .ok_or_else(|| lines.err(line, format!("unknown location `{name}`")))
        };
        match toks[0] {
            "loc" => {
                expect_args(lines, line, toks, 2)?;
                if !rules.is_empty() || initial.is_some() || accepting.is_some() {
                    return Err(lines.err(line, "`loc` directives must come first"));
                }
                let arity: usize = toks[2]
                    .parse()
                    .map_err(|_| lines.err(line, format!("expected arity, found `{}`", toks[2])))?;
                if by_name.insert(toks[1], locs.len()).is_some() {
                    return Err(lines.err(line, format!("duplicate location `{}`", toks[1])));
                }
                locs.push(Location {
                    name: toks[1].to_string(),
                    arity,
                });
            }
            "initial" => {
                expect_args(lines, line, toks, 1)?;
                let l = loc_of(toks[1])?;
                if locs[l].arity != 0 {
                    return Err(lines.err(line, format!("initial location `{}` must have arity 0", toks[1])));
                }
                once(lines, line, &mut initial, l, "initial")?;
            }
            "accepting" => {
                let mut acc = vec![false; locs.len()];
                for t in &toks[1..] {
                    let l = loc_of(t)?;
                    if acc[l] {
                        return Err(lines.err(line, format!("location `{t}` listed twice")));
                    }
                    acc[l] = true;
                }
                once(lines, line, &mut accepting, acc, "accepting")?;
            }
            "trans" => {
                if toks.len() < 4 {
                    return Err(lines.err(line, "expected `trans src (eq k|fresh) target sources...`"));
                }
                let src = loc_of(toks[1])?;
                let arity = locs[src].arity;
                let (guard, rest) = match toks[2] {
                    "fresh" => (Guard::Fresh, &toks[3..]),
                    "eq" => {
                        let k: usize = toks[3]
                            .parse()
                            .map_err(|_| lines.err(line, format!("expected register number, found `{}`", toks[3])))?;
                        if k == 0 || k > arity {
                            return Err(lines.err(
                                line,
                                format!("guard `eq {k}` but `{}` has {arity} register(s)", toks[1]),
                            ));
                        }
                        (Guard::Eq(k - 1), &toks[4..])
                    }
                    other => return Err(lines.err(line, format!("unknown guard `{other}`"))),
                };
                let Some((target_tok, sources)) = rest.split_first() else {
                    return Err(lines.err(line, "missing target location"));
                };
                let target = loc_of(target_tok)?;
                let assign = sources
                    .iter()
                    .map(|t| match *t {
                        "x" => Ok(Source::Input),
                        _ => t
                            .strip_prefix('r')
                            .and_then(|d| d.parse::<usize>().ok())
                            .filter(|&i| i >= 1)
                            .map(|i| Source::Reg(i - 1))
                            .ok_or_else(|| lines.err(line, format!("invalid register source `{t}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some((prev, _)) = rules.insert((src, guard), (line, Rule { target, assign })) {
                    return Err(lines.err(
                        line,
                        format!("duplicate rule `{} {guard}` (first on line {prev})", toks[1]),
                    ));
                }
            }
            other => return Err(lines.err(line, format!("unknown directive `{other}` for kind rna"))),
        }
    }

    let end = lines.last_line();
    if locs.is_empty() {
        return Err(lines.err(end, "missing `loc` directives"));
    }
    let initial = initial.ok_or_else(|| lines.err(end, "missing `initial` directive"))?;
    let mut table = Vec::with_capacity(locs.len());
    for (l, loc) in locs.iter().enumerate() {
        let guards = (0..loc.arity).map(Guard::Eq).chain([Guard::Fresh]);
        let mut row = Vec::new();
        for g in guards {
            let (_, rule) = rules
                .remove(&(l, g))
                .ok_or_else(|| lines.err(end, format!("missing transition `trans {} {g} ...`", loc.name)))?;
            row.push(rule);
        }
        table.push(row);
    }
    let accepting = accepting.unwrap_or_else(|| vec![false; locs.len()]);
    Rna::new(locs, initial, accepting, table).map_err(|e| lines.err(end, e.to_string()))
}

pub fn serialize_machine(m: &Machine) -> String {
    match m {
        Machine::Fsm(f) => serialize_fsm(f),
        Machine::Wa(w) => serialize_wa(w),
        Machine::Rna(r) => serialize_rna(r),
    }
}

pub fn serialize_fsm(m: &Fsm) -> String {
    let a = m.alphabet();
    let mut s = String::new();
    let _ = writeln!(s, "kind {}", m.kind());
    let _ = writeln!(s, "alphabet {}", a.names().join(" "));
    let _ = writeln!(s, "states {}", m.n_states());
    let _ = writeln!(s, "initial {}", m.initial());
    match m.outputs() {
        Outputs::PerState(o) if m.kind() == Kind::Dfa => {
            let acc: Vec<String> = (0..o.len()).filter(|&q| o[q] == "1").map(|q| q.to_string()).collect();
            let _ = writeln!(s, "accepting {}", acc.join(" ").trim_end());
        }
        Outputs::PerState(o) => {
            for (q, v) in o.iter().enumerate() {
                let _ = writeln!(s, "output {q} {v}");
            }
        }
        Outputs::PerTransition(o) => {
            for (q, row) in o.iter().enumerate() {
                for (x, v) in row.iter().enumerate() {
                    let _ = writeln!(s, "output {q} {} {v}", a.name(x));
                }
            }
        }
    }
    for q in 0..m.n_states() {
        for x in 0..a.len() {
            let _ = writeln!(s, "trans {q} {} {}", a.name(x), m.delta(q, x));
        }
    }
    s.lines().map(|l| format!("{}\n", l.trim_end())).collect()
}

pub fn serialize_wa(m: &Wa) -> String {
    let a = m.alphabet();
    let mut s = String::new();
    let _ = writeln!(s, "kind wa");
    let _ = writeln!(s, "alphabet {}", a.names().join(" "));
    let _ = writeln!(s, "dim {}", m.dim());
    for (i, v) in m.init().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        let _ = writeln!(s, "init {i} {}", format_rational(v));
    }
    for (i, v) in m.fin().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        let _ = writeln!(s, "final {i} {}", format_rational(v));
    }
    for i in 0..m.dim() {
        for x in 0..a.len() {
            for j in 0..m.dim() {
                let v = m.weight(i, x, j);
                if !v.is_zero() {
                    let _ = writeln!(s, "trans {i} {} {j} {}", a.name(x), format_rational(v));
                }
            }
        }
    }
    s
}

pub fn serialize_rna(m: &Rna) -> String {
    let locs = m.locations();
    let mut s = String::from("kind rna\n");
    for l in locs {
        let _ = writeln!(s, "loc {} {}", l.name, l.arity);
    }
    let _ = writeln!(s, "initial {}", locs[m.initial()].name);
    let acc: Vec<&str> = (0..locs.len())
        .filter(|&l| m.is_accepting(l))
        .map(|l| locs[l].name.as_str())
        .collect();
    if acc.is_empty() {
        s.push_str("accepting\n");
    } else {
        let _ = writeln!(s, "accepting {}", acc.join(" "));
    }
    for (l, loc) in locs.iter().enumerate() {
        for g in (0..loc.arity).map(Guard::Eq).chain([Guard::Fresh]) {
            let rule = m.rule(l, g);
            let _ = write!(s, "trans {} {g} {}", loc.name, locs[rule.target].name);
            for src in &rule.assign {
                match src {
                    Source::Reg(i) => {
                        let _ = write!(s, " r{}", i + 1);
                    }
                    Source::Input => s.push_str(" x"),
                }
            }
            s.push('\n');
        }
    }
    s
}

pub fn parse_suite(alphabet: &Alphabet, text: &str) -> Result<Suite, ParseError> {
    parse_suite_named(NO_FILE, alphabet, text)
}

pub fn parse_suite_named(file: &str, alphabet: &Alphabet, text: &str) -> Result<Suite, ParseError> {
    let lines = Lines::new(file, text);
    let mut t = Suite::new(alphabet.clone());
    for (line, toks) in &lines.items {
        let w = alphabet
            .parse_word(&toks.join(" "))
            .map_err(|e| lines.err(*line, e.to_string()))?;
        t.insert(w).map_err(|e| lines.err(*line, e.to_string()))?;
    }
    Ok(t)
}

pub fn serialize_suite(t: &Suite) -> String {
    t.iter()
        .map(|w| format!("{}\n", t.alphabet().render_spaced(w)))
        .collect()
}

pub fn parse_patterns(text: &str) -> Result<OrbitSuite, ParseError> {
    parse_patterns_named(NO_FILE, text)
}

pub fn parse_patterns_named(file: &str, text: &str) -> Result<OrbitSuite, ParseError> {
    let lines = Lines::new(file, text);
    let mut t = OrbitSuite::new();
    for (line, toks) in &lines.items {
        if toks == &[EPSILON_TOKEN] {
            t.insert(SymbolicWord::empty());
            continue;
        }
        let labels = toks
            .iter()
            .map(|tok| {
                tok.parse::<usize>()
                    .ok()
                    .filter(|&l| l >= 1)
                    .ok_or_else(|| lines.err(*line, format!("invalid class label `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = SymbolicWord::from_labels(&labels);
        if p.labels() != labels.as_slice() {
            return Err(lines.err(
                *line,
                format!("pattern `{}` is not canonical (classes must be numbered by first occurrence)", toks.join(" ")),
            ));
        }
        t.insert(p);
    }
    Ok(t)
}

pub fn render_pattern_spaced(p: &SymbolicWord) -> String {
    if p.is_empty() {
        return EPSILON_TOKEN.to_string();
    }
    p.labels().iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn serialize_patterns(t: &OrbitSuite) -> String {
    t.iter().map(|p| format!("{}\n", render_pattern_spaced(p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{coffee_dfa, coffee_moore};
    use crate::nominal::double_atom_rna;
    use crate::weighted::{binary_value_wa, faulty_binary_wa};

    fn err_of(text: &str) -> ParseError {
        parse_machine(text).unwrap_err()
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3"), Some(Rat::from_integer(3.into())));
        assert_eq!(parse_rational("-6/4"), Some(Rat::new((-3).into(), 2.into())));
        assert_eq!(parse_rational("+1/2"), Some(Rat::new(1.into(), 2.into())));
        for bad in ["1/-2", "1/0", "", "a", "1/", "/2", "--1", "1.5"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
        assert_eq!(format_rational(&Rat::new((-3).into(), 2.into())), "-3/2");
    }

    #[test]
    fn round_trips_examples() {
        for m in [
            Machine::Fsm(coffee_dfa()),
            Machine::Fsm(coffee_moore()),
            Machine::Wa(binary_value_wa()),
            Machine::Wa(faulty_binary_wa()),
            Machine::Rna(double_atom_rna()),
        ] {
            let text = serialize_machine(&m);
            assert_eq!(parse_machine(&text).unwrap(), m, "{text}");
        }
    }

    #[test]
    fn wa_matrix_layout() {
        let text = "kind wa\nalphabet a b\ndim 2\ninit 0 1\nfinal 1 1\ntrans 0 b 1 1\n";
        let Machine::Wa(m) = parse_machine(text).unwrap() else {
            panic!("wrong family")
        };
        assert_eq!(m.matrix(1)[1][0], Rat::from_integer(1.into()));
    }

    #[test]
    fn missing_transition_is_reported() {
        let text = serialize_fsm(&coffee_dfa());
        let cut: String = text.lines().filter(|l| *l != "trans 3 1 3").map(|l| format!("{l}\n")).collect();
        let e = err_of(&cut);
        assert!(e.message.contains("missing transition"), "{e}");
        assert!(e.message.contains("trans 3 1"), "{e}");
    }

    #[test]
    fn errors_carry_line_and_token() {
        let e = err_of("kind dfa\nalphabet a\nstates 1\ninitial 0\ntrans 0 z 0\n");
        assert_eq!(e.line, 5);
        assert!(e.message.contains("`z`"));
        let e = err_of("# comment\nkind nfa\n");
        assert_eq!(e.line, 2);
        assert!(e.message.contains("`nfa`"));
    }

    #[test]
    fn suites_and_patterns() {
        let a = Alphabet::new(["c", "e", "1"]).unwrap();
        assert_eq!(serialize_suite(&Suite::unit(a.clone())), "-eps-\n");
        let t = Suite::from_compact(a.clone(), &["11", "", "1", "c"]).unwrap();
        let text = serialize_suite(&t);
        assert_eq!(text, "-eps-\nc\n1\n1 1\n");
        assert_eq!(parse_suite(&a, &text).unwrap(), t);
        let p = OrbitSuite::from_labels(&[&[1, 2], &[1, 1]]);
        assert_eq!(serialize_patterns(&p), "1 1\n1 2\n");
        assert_eq!(parse_patterns("1 1\n# x\n1 2\n").unwrap(), p);
        assert_eq!(parse_patterns("-eps-\n").unwrap(), OrbitSuite::unit());
        assert!(parse_patterns("2 1\n").is_err());
        assert!(parse_patterns("1 0\n").is_err());
        assert!(parse_suite(&a, "c q\n").is_err());
    }
}
