//! Command-line driver for the guided rewriting toolkit.
//!
//! Subcommands cover the two closure compilers, membership and
//! enumeration queries against automaton files, an oracle cross-check,
//! single-string closure listings, and conversions between rewrite
//! sequences and slice sequences. Automaton listings go to standard
//! output (or `--out`); counters and the inferred run bound go to
//! standard error, so piped output stays machine-readable.
//!
//! Exit codes classify outcomes: 0 success or positive answer, 1
//! negative answer or difference found, 2 input could not be read or
//! parsed, 3 input parsed but failed validation, 4 a resource cap was
//! hit, 5 the construction does not apply to the input language.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use grw_core::automata::{parse_automaton, Automaton, Nfa};
use grw_core::closure::{
    build_closure_nfa_with, build_id_closure_nfa_with, oracle_closure_upto,
    oracle_id_closure_upto, ClosureError, ClosureOptions, CompressionScheme, GuidedSystem,
    IdSystem,
};
use grw_core::rewrite::{
    apply_rewrite_sequence, closure_of_string, id_closure, GuidePos, RewriteSequence,
};
use grw_core::slice::{
    rewrites_to_slices, slices_to_rewrites, validate_slice_sequence, GuideOffset, Slice,
    SliceSequence,
};
use grw_core::symbols::{Alphabet, GuideSet, Str, Symbol, SystemDef};

const EPSILON: &str = "~e~";

#[derive(Parser)]
#[command(
    name = "grw",
    version,
    about = "Guided string rewriting: closure compilers, queries, and trace conversions",
    after_help = "Exit codes: 0 success or yes, 1 no or difference, 2 parse error, \
                  3 validation error, 4 state cap exceeded, 5 construction inapplicable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an acceptor for the rewrite closure of a regular language.
    Closure {
        /// System file: alphabet, adjustment classes or pairs, guides.
        system: PathBuf,
        /// Automaton file for the language to close.
        automaton: PathBuf,
        /// Write the resulting listing to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Determinize the result by subset construction.
        #[arg(long)]
        determinize: bool,
        /// Report construction counters on standard error.
        #[arg(long)]
        stats: bool,
        /// Abort once this many states have been materialized.
        #[arg(long, default_value_t = 1_000_000)]
        state_cap: usize,
    },
    /// Compile an acceptor for the insertion/deletion closure.
    IdClosure {
        /// System file: alphabet, a `zero:` line, guides.
        system: PathBuf,
        automaton: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        determinize: bool,
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = 1_000_000)]
        state_cap: usize,
    },
    /// Test whether an automaton accepts a string.
    Member {
        automaton: PathBuf,
        /// Symbols of the string; `~e~` alone is the empty string.
        string: Vec<String>,
        /// Read strings as contiguous single-character symbols.
        #[arg(long)]
        chars: bool,
    },
    /// List every accepted string up to a length, shortest first.
    Enumerate {
        automaton: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        chars: bool,
    },
    /// Compare a compiled closure against the brute-force oracle.
    OracleCheck {
        system: PathBuf,
        automaton: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Check the insertion/deletion closure instead.
        #[arg(long)]
        id: bool,
        /// Compare this automaton file instead of compiling one.
        #[arg(long)]
        candidate: Option<PathBuf>,
        #[arg(long)]
        chars: bool,
        #[arg(long, default_value_t = 1_000_000)]
        state_cap: usize,
    },
    /// Convert between rewrite sequences and slice sequences.
    Trace {
        system: PathBuf,
        /// The string being rewritten.
        #[arg(long)]
        base: String,
        /// Steps file: one `<position> <guide symbols...>` per line.
        #[arg(long, conflicts_with = "slices")]
        steps: Option<PathBuf>,
        /// Slices file: one `<position>: (g1,2) ...` per line.
        #[arg(long)]
        slices: Option<PathBuf>,
        /// Output representation.
        #[arg(long, value_enum)]
        to: TraceTarget,
        #[arg(long)]
        chars: bool,
    },
    /// List the closure of a single string, one result per line.
    Rewrite {
        system: PathBuf,
        string: Vec<String>,
        /// Use insertion/deletion steps instead of adjustment steps.
        #[arg(long)]
        id: bool,
        /// Print results with zero runs contracted to run symbols.
        #[arg(long, requires = "id")]
        compress_runs: bool,
        #[arg(long)]
        chars: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceTarget {
    Slices,
    Rewrites,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn validation_failure(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

impl From<ClosureError> for Failure {
    fn from(e: ClosureError) -> Failure {
        let code = match e {
            ClosureError::StateCapExceeded { .. } => 4,
            ClosureError::UnboundedZeroRuns => 5,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Closure { system, automaton, out, determinize, stats, state_cap } => {
            cmd_closure(&system, &automaton, out.as_deref(), determinize, stats, state_cap)
        }
        Command::IdClosure { system, automaton, out, determinize, stats, state_cap } => {
            cmd_id_closure(&system, &automaton, out.as_deref(), determinize, stats, state_cap)
        }
        Command::Member { automaton, string, chars } => cmd_member(&automaton, &string, chars),
        Command::Enumerate { automaton, max_len, chars } => {
            cmd_enumerate(&automaton, max_len, chars)
        }
        Command::OracleCheck { system, automaton, max_len, id, candidate, chars, state_cap } => {
            cmd_oracle_check(&system, &automaton, max_len, id, candidate.as_deref(), chars, state_cap)
        }
        Command::Trace { system, base, steps, slices, to, chars } => {
            cmd_trace(&system, &base, steps.as_deref(), slices.as_deref(), to, chars)
        }
        Command::Rewrite { system, string, id, compress_runs, chars } => {
            cmd_rewrite(&system, &string, id, compress_runs, chars)
        }
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> CliResult<SystemDef> {
    SystemDef::parse(&read_file(path)?)
        .map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> CliResult<Automaton> {
    parse_automaton(&read_file(path)?)
        .map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn guided_system(def: &SystemDef) -> CliResult<GuidedSystem> {
    GuidedSystem::from_def(def).map_err(|e| {
        let mut failure = Failure::from(e);
        if !def.pairs.is_empty() && !def.pairs_closure {
            failure.message.push_str(
                "; raw pairs are used as given, add `pairs-closure: allow` to close them",
            );
        }
        failure
    })
}

fn id_system(def: &SystemDef) -> CliResult<IdSystem> {
    IdSystem::from_def(def).map_err(Failure::from)
}

fn parse_string(alphabet: &Alphabet, tokens: &[String], chars: bool) -> CliResult<Str> {
    if tokens.len() == 1 && tokens[0] == EPSILON {
        return Ok(Str::empty());
    }
    let result = if chars {
        alphabet.parse_chars(&tokens.concat())
    } else {
        alphabet.parse_str(&tokens.join(" "))
    };
    result.map_err(|e| parse_failure(e.to_string()))
}

fn show_string(u: &Str, chars: bool) -> String {
    if u.is_empty() {
        return EPSILON.to_string();
    }
    let parts: Vec<&str> = u.iter().map(Symbol::as_str).collect();
    if chars {
        parts.concat()
    } else {
        parts.join(" ")
    }
}

fn write_automaton(result: &Automaton, out: Option<&Path>) -> CliResult<u8> {
    let text = result.emit();
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn package(nfa: Nfa, determinize: bool) -> Automaton {
    if determinize {
        Automaton::Dfa(nfa.determinize())
    } else {
        Automaton::Nfa(nfa)
    }
}

fn cmd_closure(
    system: &Path,
    automaton: &Path,
    out: Option<&Path>,
    determinize: bool,
    stats: bool,
    state_cap: usize,
) -> CliResult<u8> {
    let def = load_system(system)?;
    let sys = guided_system(&def)?;
    let m = load_automaton(automaton)?.into_dfa();
    let options = ClosureOptions { state_cap };
    let (nfa, counters) = build_closure_nfa_with(&m, &sys, &options)?;
    if stats {
        eprintln!("states: {}", counters.states);
        eprintln!("transitions: {}", counters.transitions);
        eprintln!("slices: {}", counters.slices);
        eprintln!("pruned: {}", counters.pruned_states);
    }
    write_automaton(&package(nfa, determinize), out)
}

fn cmd_id_closure(
    system: &Path,
    automaton: &Path,
    out: Option<&Path>,
    determinize: bool,
    stats: bool,
    state_cap: usize,
) -> CliResult<u8> {
    let def = load_system(system)?;
    let sys = id_system(&def)?;
    let m = load_automaton(automaton)?.into_dfa();
    let options = ClosureOptions { state_cap };
    let (nfa, counters) = build_id_closure_nfa_with(&m, &sys, &options)?;
    eprintln!("k: {}", counters.k);
    if stats {
        eprintln!("k-language: {}", counters.k_language);
        eprintln!("k-guides: {}", counters.k_guides);
        eprintln!("states: {}", counters.inner.states);
        eprintln!("transitions: {}", counters.inner.transitions);
        eprintln!("slices: {}", counters.inner.slices);
        eprintln!("pruned: {}", counters.inner.pruned_states);
    }
    write_automaton(&package(nfa, determinize), out)
}

fn cmd_member(automaton: &Path, string: &[String], chars: bool) -> CliResult<u8> {
    let a = load_automaton(automaton)?;
    let u = parse_string(a.alphabet(), string, chars)?;
    let accepted = match &a {
        Automaton::Dfa(d) => d.accepts(&u),
        Automaton::Nfa(n) => n.accepts(&u),
    };
    if accepted {
        println!("yes");
        Ok(0)
    } else {
        println!("no");
        Ok(1)
    }
}

fn cmd_enumerate(automaton: &Path, max_len: usize, chars: bool) -> CliResult<u8> {
    let nfa = load_automaton(automaton)?.into_nfa();
    for u in nfa.enumerate_upto(max_len) {
        println!("{}", show_string(&u, chars));
    }
    Ok(0)
}

fn cmd_oracle_check(
    system: &Path,
    automaton: &Path,
    max_len: usize,
    id: bool,
    candidate: Option<&Path>,
    chars: bool,
    state_cap: usize,
) -> CliResult<u8> {
    let def = load_system(system)?;
    let m = load_automaton(automaton)?.into_dfa();
    let options = ClosureOptions { state_cap };
    let (candidate_nfa, oracle) = if id {
        let sys = id_system(&def)?;
        let nfa = match candidate {
            Some(path) => load_automaton(path)?.into_nfa(),
            None => build_id_closure_nfa_with(&m, &sys, &options)?.0,
        };
        (nfa, oracle_id_closure_upto(&m, &sys, max_len)?)
    } else {
        let sys = guided_system(&def)?;
        let nfa = match candidate {
            Some(path) => load_automaton(path)?.into_nfa(),
            None => build_closure_nfa_with(&m, &sys, &options)?.0,
        };
        (nfa, oracle_closure_upto(&m, &sys, max_len)?)
    };
    if candidate_nfa.alphabet() != m.alphabet() {
        return Err(validation_failure("the candidate automaton uses a different alphabet"));
    }
    let listed: BTreeSet<Str> = candidate_nfa.enumerate_upto(max_len).into_iter().collect();
    let expected: BTreeSet<Str> = oracle.into_iter().collect();
    if listed == expected {
        println!("OK");
        return Ok(0);
    }
    let mut extra: Vec<Str> = listed.difference(&expected).cloned().collect();
    let mut missing: Vec<Str> = expected.difference(&listed).cloned().collect();
    def.alphabet.sort_strings(&mut extra);
    def.alphabet.sort_strings(&mut missing);
    for u in &extra {
        println!("only in automaton: {}", show_string(u, chars));
    }
    for u in &missing {
        println!("only in oracle: {}", show_string(u, chars));
    }
    Ok(1)
}

fn cmd_trace(
    system: &Path,
    base: &str,
    steps: Option<&Path>,
    slices: Option<&Path>,
    to: TraceTarget,
    chars: bool,
) -> CliResult<u8> {
    let def = load_system(system)?;
    let sys = guided_system(&def)?;
    let u = parse_string(&def.alphabet, &[base.to_string()], chars)?;
    let (seq, source_yield) = match (steps, slices) {
        (Some(path), None) => {
            let run = parse_steps_file(&read_file(path)?, &def.alphabet)?;
            let applied = apply_rewrite_sequence(&u, &run, sys.relation())
                .map_err(|e| validation_failure(e.to_string()))?;
            let seq = rewrites_to_slices(&u, &run, sys.relation())
                .map_err(|e| validation_failure(e.to_string()))?;
            (seq, applied.result().clone())
        }
        (None, Some(path)) => {
            let rows = parse_slices_file(&read_file(path)?, sys.guides())?;
            let seq = SliceSequence::new(u.clone(), rows)
                .map_err(|e| validation_failure(e.to_string()))?;
            validate_slice_sequence(&seq, sys.guides(), sys.relation())
                .map_err(|e| validation_failure(e.to_string()))?;
            let y = seq.yield_string();
            (seq, y)
        }
        _ => return Err(parse_failure("provide exactly one of --steps and --slices")),
    };
    let result_yield = match to {
        TraceTarget::Slices => {
            for position in 1..=seq.len() {
                let slice = seq.slice(position).expect("positions range over the sequence");
                let rendered: Vec<String> =
                    slice.iter().map(|pair| show_pair(pair, sys.guides())).collect();
                if rendered.is_empty() {
                    println!("{position}:");
                } else {
                    println!("{position}: {}", rendered.join(" "));
                }
            }
            seq.yield_string()
        }
        TraceTarget::Rewrites => {
            let run = slices_to_rewrites(&seq, sys.guides(), sys.relation())
                .map_err(|e| validation_failure(e.to_string()))?;
            for step in run.iter() {
                let tokens: Vec<&str> = step.guide.iter().map(Symbol::as_str).collect();
                println!("{} {}", step.position, tokens.join(" "));
            }
            let applied = apply_rewrite_sequence(&u, &run, sys.relation())
                .expect("converted sequences replay on their base");
            applied.result().clone()
        }
    };
    assert_eq!(source_yield, result_yield, "conversion must preserve the yield");
    println!("# source yield: {}", show_string(&source_yield, chars));
    println!("# result yield: {}", show_string(&result_yield, chars));
    Ok(0)
}

fn show_pair(pair: &GuideOffset, guides: &GuideSet) -> String {
    let index = guides.index_of(pair.guide()).expect("validated pairs use listed guides");
    format!("(g{},{})", index + 1, pair.offset())
}

fn cmd_rewrite(
    system: &Path,
    string: &[String],
    id: bool,
    compress_runs: bool,
    chars: bool,
) -> CliResult<u8> {
    let def = load_system(system)?;
    let mut list: Vec<Str> = if id {
        let sys = id_system(&def)?;
        let u = parse_string(&def.alphabet, string, chars)?;
        id_closure(&u, sys.guides(), sys.zero())
            .map_err(|e| validation_failure(e.to_string()))?
            .into_iter()
            .collect()
    } else {
        let sys = guided_system(&def)?;
        let u = parse_string(&def.alphabet, string, chars)?;
        closure_of_string(&u, sys.guides(), sys.relation())
            .map_err(|e| validation_failure(e.to_string()))?
            .into_iter()
            .collect()
    };
    def.alphabet.sort_strings(&mut list);
    if compress_runs {
        let zero = def.zero.clone().expect("id mode checked the zero symbol");
        let longest = |w: &Str| {
            let mut best = 0;
            let mut run = 0;
            for s in w.iter() {
                if s == &zero {
                    run += 1;
                    best = best.max(run);
                } else {
                    run = 0;
                }
            }
            best
        };
        let k = 1 + list.iter().map(longest).max().unwrap_or(0);
        let scheme = CompressionScheme::new(&def.alphabet, &zero, k)?;
        for v in &list {
            println!("{}", show_string(&scheme.interior(v)?, false));
        }
    } else {
        for v in &list {
            println!("{}", show_string(v, chars));
        }
    }
    Ok(0)
}

fn parse_steps_file(text: &str, alphabet: &Alphabet) -> CliResult<RewriteSequence> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("the line is non-empty");
        let position: usize = head
            .parse()
            .map_err(|_| parse_failure(format!("steps line {line_no}: `{head}` is not a position")))?;
        let rest: Vec<&str> = tokens.collect();
        if rest.is_empty() {
            return Err(parse_failure(format!("steps line {line_no}: a step needs guide symbols")));
        }
        let guide = alphabet
            .parse_str(&rest.join(" "))
            .map_err(|e| parse_failure(format!("steps line {line_no}: {e}")))?;
        steps.push(GuidePos::new(guide, position));
    }
    Ok(RewriteSequence::new(steps))
}

fn parse_slices_file(text: &str, guides: &GuideSet) -> CliResult<Vec<Slice>> {
    let mut rows: Vec<(usize, usize, Slice)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((head, rest)) = line.split_once(':') else {
            return Err(parse_failure(format!(
                "slices line {line_no}: expected `<position>: pairs`"
            )));
        };
        let head = head.trim();
        let position: usize = head.parse().map_err(|_| {
            parse_failure(format!("slices line {line_no}: `{head}` is not a position"))
        })?;
        let mut pairs = Vec::new();
        for token in rest.split_whitespace() {
            pairs.push(parse_pair(token, guides, line_no)?);
        }
        rows.push((line_no, position, Slice::new(pairs)));
    }
    for (k, &(line_no, position, _)) in rows.iter().enumerate() {
        if position != k + 1 {
            return Err(parse_failure(format!(
                "slices line {line_no}: position {position} where {} was expected",
                k + 1
            )));
        }
    }
    Ok(rows.into_iter().map(|(_, _, slice)| slice).collect())
}

fn parse_pair(token: &str, guides: &GuideSet, line_no: usize) -> CliResult<GuideOffset> {
    let bad = || {
        parse_failure(format!(
            "slices line {line_no}: `{token}` is not a `(g<index>,<offset>)` pair"
        ))
    };
    let inner = token
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (g, q) = inner.split_once(',').ok_or_else(bad)?;
    let index: usize = g.trim().strip_prefix('g').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
    let offset: usize = q.trim().parse().map_err(|_| bad())?;
    if index == 0 || index > guides.len() {
        return Err(parse_failure(format!(
            "slices line {line_no}: guide g{index} is not defined"
        )));
    }
    let guide = guides.get(index - 1).expect("the index was range-checked").clone();
    GuideOffset::new(guide, offset)
        .map_err(|e| validation_failure(format!("slices line {line_no}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> Alphabet {
        Alphabet::parse("a b c d e f").unwrap()
    }

    fn guides(al: &Alphabet) -> GuideSet {
        GuideSet::new(vec![
            al.parse_chars("fb").unwrap(),
            al.parse_chars("ace").unwrap(),
            al.parse_chars("d").unwrap(),
        ])
    }

    #[test]
    fn strings_parse_in_both_modes() {
        let al = alphabet();
        let u = parse_string(&al, &["a".into(), "b".into()], false).unwrap();
        assert_eq!(show_string(&u, true), "ab");
        let v = parse_string(&al, &["ab".into()], true).unwrap();
        assert_eq!(u, v);
        let e = parse_string(&al, &[EPSILON.into()], false).unwrap();
        assert!(e.is_empty());
        assert_eq!(show_string(&e, false), EPSILON);
        assert_eq!(parse_string(&al, &["z".into()], false).err().map(|f| f.code), Some(2));
    }

    #[test]
    fn steps_files_list_position_then_guide() {
        let al = alphabet();
        let run = parse_steps_file("# setup\n2 d\n0 f b\n", &al).unwrap();
        assert_eq!(run.len(), 2);
        assert_eq!(run.get(0).unwrap().position, 2);
        assert_eq!(run.get(1).unwrap().guide, al.parse_chars("fb").unwrap());
        assert_eq!(parse_steps_file("x d\n", &al).err().map(|f| f.code), Some(2));
        assert_eq!(parse_steps_file("3\n", &al).err().map(|f| f.code), Some(2));
    }

    #[test]
    fn slices_files_use_guide_references() {
        let al = alphabet();
        let gs = guides(&al);
        let rows = parse_slices_file("1: (g1,1)\n2: (g1,2) (g3,1)\n3:\n", &gs).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].len(), 2);
        assert!(rows[2].is_empty());
        assert_eq!(
            parse_slices_file("1: (g4,1)\n", &gs).err().map(|f| f.code),
            Some(2)
        );
        assert_eq!(
            parse_slices_file("1: (g1,9)\n", &gs).err().map(|f| f.code),
            Some(3)
        );
        assert_eq!(
            parse_slices_file("2: (g1,1)\n", &gs).err().map(|f| f.code),
            Some(2)
        );
    }

    #[test]
    fn pair_rendering_round_trips() {
        let al = alphabet();
        let gs = guides(&al);
        let pair = GuideOffset::new(al.parse_chars("ace").unwrap(), 2).unwrap();
        let shown = show_pair(&pair, &gs);
        assert_eq!(shown, "(g2,2)");
        assert_eq!(parse_pair(&shown, &gs, 1).unwrap(), pair);
    }
}
