//! The `wmethod` command line.
//!
//! Exit codes: 0 success, 1 failing tests or inequivalence, 2 usage or parse
//! error, 3 precondition violated.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::faultsim::{self, Family, MutationSpec};
use crate::formats::{self, Machine};
use crate::fsm;
use crate::nominal::{self, OrbitSuite, SymbolicWord};
use crate::weighted;
use crate::words::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wmethod", version, about = "Complete test suites for automata via the W-method")]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print only failures and results.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate the W_k test suite for a specification.
    Gen {
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// State cover (suite or pattern file); computed if omitted.
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Characterization set (suite or pattern file); computed if omitted.
        #[arg(long)]
        charset: Option<PathBuf>,
        /// Close the suite under prefixes.
        #[arg(long)]
        prefix_closed: bool,
        /// Minimize a non-minimal specification instead of failing.
        #[arg(long)]
        allow_nonminimal: bool,
        /// Output file; stdout if omitted.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        spec: PathBuf,
    },
    /// Run a suite against specification and implementation.
    Run {
        spec: PathBuf,
        implementation: PathBuf,
        suite: PathBuf,
    },
    /// Decide language equivalence; prints a shortest counterexample.
    Equiv { a: PathBuf, b: PathBuf },
    /// Print a minimal equivalent machine.
    Minimize { machine: PathBuf },
    /// Print a state cover.
    Cover { machine: PathBuf },
    /// Print a characterization set.
    Charset { machine: PathBuf },
    /// Sample mutants and check the suite kills every inequivalent one.
    Faultsim {
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        mutants: usize,
        /// Extra states allowed in mutants; defaults to k.
        #[arg(long)]
        extra: Option<usize>,
        spec: PathBuf,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.to_string(),
        }
    }

    fn precondition(m: impl ToString) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: m.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<Machine, Failure> {
    formats::read_machine(path).map_err(Failure::usage)
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_suite(path: &Path, alphabet: &words::Alphabet) -> Result<Suite, Failure> {
    formats::parse_suite_named(&path.display().to_string(), alphabet, &read_text(path)?).map_err(Failure::usage)
}

fn load_patterns(path: &Path) -> Result<OrbitSuite, Failure> {
    formats::parse_patterns_named(&path.display().to_string(), &read_text(path)?).map_err(Failure::usage)
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    out.write_all(s.as_bytes())
        .map_err(|e| Failure::usage(format!("write failed: {e}")))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Gen {
            k,
            cover,
            charset,
            prefix_closed,
            allow_nonminimal,
            output,
            spec,
        } => {
            let (text, np, nw, size) = gen(
                &load(spec)?,
                *k,
                cover.as_deref(),
                charset.as_deref(),
                *prefix_closed,
                *allow_nonminimal,
            )?;
            let stats = format!("cover {np} charset {nw} suite {size}\n");
            match output {
                Some(path) => {
                    std::fs::write(path, text)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    if !cli.quiet {
                        emit(out, &stats)?;
                    }
                }
                None => {
                    emit(out, &text)?;
                    if !cli.quiet {
                        let _ = err.write_all(stats.as_bytes());
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Run {
            spec,
            implementation,
            suite,
        } => run_suite(&load(spec)?, &load(implementation)?, suite, cli.quiet, out),
        Command::Equiv { a, b } => equiv(&load(a)?, &load(b)?, out),
        Command::Minimize { machine } => {
            let m = match load(machine)? {
                Machine::Fsm(m) => Machine::Fsm(fsm::minimize(&m)),
                Machine::Wa(m) => Machine::Wa(weighted::minimize_wa(&m)),
                Machine::Rna(m) if nominal::is_minimal_rna(&m) => Machine::Rna(m),
                Machine::Rna(_) => {
                    return Err(Failure::precondition("minimization of non-minimal rna is not supported"))
                }
            };
            emit(out, &formats::serialize_machine(&m))?;
            Ok(EXIT_OK)
        }
        Command::Cover { machine } => {
            let text = match load(machine)? {
                Machine::Fsm(m) => formats::serialize_suite(&fsm::state_cover(&m).map_err(Failure::precondition)?),
                Machine::Wa(m) => formats::serialize_suite(&faultsim::wa_cover_and_char_set(&m).0),
                Machine::Rna(m) => formats::serialize_patterns(
                    &nominal::weak_cover_rna(&m, faultsim::RNA_COVER_LIMIT)
                        .map_err(Failure::precondition)?
                        .words,
                ),
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Charset { machine } => {
            let text = match load(machine)? {
                Machine::Fsm(m) => formats::serialize_suite(&fsm::char_set(&m).map_err(Failure::precondition)?),
                Machine::Wa(m) => formats::serialize_suite(&faultsim::wa_cover_and_char_set(&m).1),
                Machine::Rna(m) => {
                    formats::serialize_patterns(&nominal::char_set_rna(&m).map_err(Failure::precondition)?)
                }
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Faultsim {
            k,
            mutants,
            extra,
            spec,
        } => {
            let m = load(spec)?;
            let family = match &m {
                Machine::Fsm(_) => Family::Fsm,
                Machine::Wa(_) => Family::Wa,
                Machine::Rna(_) => Family::Rna,
            };
            let ms = MutationSpec {
                family,
                max_extra_states: extra.unwrap_or(*k),
                n_mutants: *mutants,
                seed: cli.seed,
            };
            let report = faultsim::completeness_experiment(&m, *k, &ms).map_err(Failure::precondition)?;
            let text = report.render();
            if cli.quiet {
                emit(out, text.lines().last().unwrap_or_default())?;
                emit(out, "\n")?;
            } else {
                emit(out, &text)?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

fn prefix_close_patterns(t: &OrbitSuite) -> OrbitSuite {
    let mut out = OrbitSuite::new();
    for p in t {
        for n in 0..=p.len() {
            out.insert(SymbolicWord::from_labels(&p.labels()[..n]));
        }
    }
    out
}

/// Returns the serialized suite with the sizes of cover, characterization
/// set and suite.
fn gen(
    spec: &Machine,
    k: usize,
    cover: Option<&Path>,
    charset: Option<&Path>,
    prefix_closed: bool,
    allow_nonminimal: bool,
) -> Result<(String, usize, usize, usize), Failure> {
    let not_minimal = || Failure::precondition("specification is not minimal (use --allow-nonminimal)");
    match spec {
        Machine::Fsm(m) => {
            let m = match (fsm::is_minimal(m), allow_nonminimal) {
                (true, _) => m.clone(),
                (false, true) => fsm::minimize(m),
                (false, false) => return Err(not_minimal()),
            };
            let p = match cover {
                Some(f) => load_suite(f, m.alphabet())?,
                None => fsm::state_cover(&m).map_err(Failure::precondition)?,
            };
            let w = match charset {
                Some(f) => load_suite(f, m.alphabet())?,
                None => fsm::char_set(&m).map_err(Failure::precondition)?,
            };
            let mut t = words::w_suite(&p, m.alphabet(), k, &w).map_err(Failure::precondition)?;
            if prefix_closed {
                t = words::prefix_close(&t);
            }
            Ok((formats::serialize_suite(&t), p.len(), w.len(), t.len()))
        }
        Machine::Wa(m) => {
            let m = match (weighted::is_minimal_wa(m), allow_nonminimal) {
                (true, _) => m.clone(),
                (false, true) => weighted::minimize_wa(m),
                (false, false) => return Err(not_minimal()),
            };
            let (dp, dw) = faultsim::wa_cover_and_char_set(&m);
            let p = match cover {
                Some(f) => load_suite(f, m.alphabet())?,
                None => dp,
            };
            let w = match charset {
                Some(f) => load_suite(f, m.alphabet())?,
                None => dw,
            };
            let mut t = words::w_suite(&p, m.alphabet(), k, &w).map_err(Failure::precondition)?;
            if prefix_closed {
                t = words::prefix_close(&t);
            }
            Ok((formats::serialize_suite(&t), p.len(), w.len(), t.len()))
        }
        Machine::Rna(m) => {
            if !nominal::is_minimal_rna(m) {
                return Err(if allow_nonminimal {
                    Failure::precondition("minimization of non-minimal rna is not supported")
                } else {
                    not_minimal()
                });
            }
            let p = match cover {
                Some(f) => load_patterns(f)?,
                None => {
                    nominal::weak_cover_rna(m, faultsim::RNA_COVER_LIMIT)
                        .map_err(Failure::precondition)?
                        .words
                }
            };
            let w = match charset {
                Some(f) => load_patterns(f)?,
                None => nominal::char_set_rna(m).map_err(Failure::precondition)?,
            };
            let mut t = nominal::w_suite_rna(&p, k, &w).map_err(Failure::precondition)?;
            if prefix_closed {
                t = prefix_close_patterns(&t);
            }
            Ok((formats::serialize_patterns(&t), p.len(), w.len(), t.len()))
        }
    }
}

fn verdict_lines<W, O: std::fmt::Display>(
    verdicts: &[words::Verdict<W, O>],
    render: impl Fn(&W) -> String,
    quiet: bool,
    out: &mut dyn Write,
) -> CmdResult {
    for v in verdicts {
        if quiet && v.pass {
            continue;
        }
        let line = format!(
            "{} {} {} {}\n",
            if v.pass { "PASS" } else { "FAIL" },
            render(&v.word),
            v.spec_out,
            v.impl_out
        );
        emit(out, &line)?;
    }
    Ok(if words::all_pass(verdicts) { EXIT_OK } else { EXIT_FAIL })
}

fn run_suite(spec: &Machine, imp: &Machine, suite: &Path, quiet: bool, out: &mut dyn Write) -> CmdResult {
    match (spec, imp) {
        (Machine::Fsm(s), Machine::Fsm(i)) => {
            let t = load_suite(suite, s.alphabet())?;
            let v = fsm::agree_on(s, i, &t).map_err(Failure::usage)?;
            verdict_lines(&v, |w| s.alphabet().render(w), quiet, out)
        }
        (Machine::Wa(s), Machine::Wa(i)) => {
            let t = load_suite(suite, s.alphabet())?;
            let v = weighted::agree_on_wa(s, i, &t).map_err(Failure::usage)?;
            verdict_lines(&v, |w| s.alphabet().render(w), quiet, out)
        }
        (Machine::Rna(s), Machine::Rna(i)) => {
            let t = load_patterns(suite)?;
            let v: Vec<words::Verdict<SymbolicWord, u8>> = nominal::agree_on_rna(s, i, &t)
                .into_iter()
                .map(|v| words::Verdict::new(v.word, v.spec_out as u8, v.impl_out as u8))
                .collect();
            verdict_lines(&v, |p| p.to_string(), quiet, out)
        }
        (a, b) => Err(Failure::usage(format!(
            "specification is {} but implementation is {}",
            a.family(),
            b.family()
        ))),
    }
}

fn equiv(a: &Machine, b: &Machine, out: &mut dyn Write) -> CmdResult {
    let cex = match (a, b) {
        (Machine::Fsm(x), Machine::Fsm(y)) => fsm::equiv(x, y)
            .map_err(Failure::usage)?
            .counterexample()
            .map(|w| x.alphabet().render(w)),
        (Machine::Wa(x), Machine::Wa(y)) => weighted::equiv_wa(x, y)
            .map_err(Failure::usage)?
            .counterexample()
            .map(|w| x.alphabet().render(w)),
        (Machine::Rna(x), Machine::Rna(y)) => nominal::equiv_rna(x, y)
            .map_err(Failure::precondition)?
            .counterexample()
            .map(|p| p.to_string()),
        (x, y) => {
            return Err(Failure::usage(format!(
                "cannot compare {} with {}",
                x.family(),
                y.family()
            )))
        }
    };
    match cex {
        None => {
            emit(out, "equivalent\n")?;
            Ok(EXIT_OK)
        }
        Some(w) => {
            emit(out, &format!("counterexample {w}\n"))?;
            Ok(EXIT_FAIL)
        }
    }
}
