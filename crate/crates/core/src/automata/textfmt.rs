//! Reading and writing automata as plain text.
//!
//! ```text
//! type: dfa            # or nfa
//! alphabet: a b        # optional on input, inferred from trans lines
//! states: q0 q1
//! start: q0
//! accept: q1
//! trans: q0 a q1
//! etrans: q0 q1        # nfa only
//! ```
//!
//! `states`, `accept`, `trans`, and `etrans` lines may repeat and
//! accumulate; `#` starts a comment. Emission sorts states and transitions
//! and always writes the alphabet line, so equal automata print
//! identically and listings re-parse to the same automaton.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Dfa, Nfa};
use crate::symbols::Alphabet;

/// A parsed automaton of either kind.
#[derive(Debug, Clone)]
pub enum Automaton {
    Dfa(Dfa),
    Nfa(Nfa),
}

impl Automaton {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Automaton::Dfa(d) => d.alphabet(),
            Automaton::Nfa(n) => n.alphabet(),
        }
    }

    pub fn into_nfa(self) -> Nfa {
        match self {
            Automaton::Dfa(d) => d.to_nfa(),
            Automaton::Nfa(n) => n,
        }
    }

    /// Determinizes when needed.
    pub fn into_dfa(self) -> Dfa {
        match self {
            Automaton::Dfa(d) => d,
            Automaton::Nfa(n) => n.determinize(),
        }
    }

    pub fn emit(&self) -> String {
        match self {
            Automaton::Dfa(d) => emit_dfa(d),
            Automaton::Nfa(n) => emit_nfa(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    /// 1-based line number; 0 when the whole listing is at fault.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "automaton listing: {}", self.message)
        } else {
            write!(f, "automaton listing line {}: {}", self.line, self.message)
        }
    }
}

impl core::error::Error for FormatError {}

fn fail<T>(line: usize, message: String) -> Result<T, FormatError> {
    Err(FormatError { line, message })
}

pub fn parse_automaton(text: &str) -> Result<Automaton, FormatError> {
    let mut ty: Option<(usize, String)> = None;
    let mut alphabet_line: Option<(usize, String)> = None;
    let mut states: Vec<(usize, String)> = Vec::new();
    let mut start: Option<(usize, String)> = None;
    let mut accept: Vec<(usize, String)> = Vec::new();
    let mut trans: Vec<(usize, [String; 3])> = Vec::new();
    let mut etrans: Vec<(usize, [String; 2])> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, rest)) = line.split_once(':') else {
            return fail(line_no, "expected `key: tokens`".to_string());
        };
        let tokens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        match key.trim() {
            "type" => {
                if ty.is_some() {
                    return fail(line_no, "duplicate type line".to_string());
                }
                if tokens.len() != 1 {
                    return fail(line_no, "type line needs exactly one word".to_string());
                }
                ty = Some((line_no, tokens[0].clone()));
            }
            "alphabet" => {
                if alphabet_line.is_some() {
                    return fail(line_no, "duplicate alphabet line".to_string());
                }
                alphabet_line = Some((line_no, tokens.join(" ")));
            }
            "states" => {
                states.extend(tokens.into_iter().map(|t| (line_no, t)));
            }
            "start" => {
                if start.is_some() {
                    return fail(line_no, "duplicate start line".to_string());
                }
                if tokens.len() != 1 {
                    return fail(line_no, "start line needs exactly one state".to_string());
                }
                start = Some((line_no, tokens[0].clone()));
            }
            "accept" => {
                accept.extend(tokens.into_iter().map(|t| (line_no, t)));
            }
            "trans" => {
                let [src, sym, dst] = tokens.as_slice() else {
                    return fail(line_no, "trans line needs `src symbol dst`".to_string());
                };
                trans.push((line_no, [src.clone(), sym.clone(), dst.clone()]));
            }
            "etrans" => {
                let [src, dst] = tokens.as_slice() else {
                    return fail(line_no, "etrans line needs `src dst`".to_string());
                };
                etrans.push((line_no, [src.clone(), dst.clone()]));
            }
            other => {
                return fail(line_no, format!("unknown key `{other}`"));
            }
        }
    }

    let Some((ty_line, ty)) = ty else {
        return fail(0, "missing type line".to_string());
    };
    if ty != "dfa" && ty != "nfa" {
        return fail(ty_line, format!("unknown automaton type `{ty}`"));
    }
    if states.is_empty() {
        return fail(0, "no states declared".to_string());
    }
    let mut declared = BTreeSet::new();
    for (line, name) in &states {
        if !declared.insert(name.clone()) {
            return fail(*line, format!("state `{name}` declared twice"));
        }
    }
    let Some((start_line, start)) = start else {
        return fail(0, "missing start line".to_string());
    };
    if !declared.contains(&start) {
        return fail(start_line, format!("state `{start}` is not declared"));
    }
    for (line, name) in &accept {
        if !declared.contains(name) {
            return fail(*line, format!("state `{name}` is not declared"));
        }
    }

    let alphabet = match &alphabet_line {
        Some((line, text)) => {
            Alphabet::parse(text).map_err(|e| FormatError { line: *line, message: e.to_string() })?
        }
        None => {
            let symbols: BTreeSet<&str> = trans.iter().map(|(_, t)| t[1].as_str()).collect();
            if symbols.is_empty() {
                return fail(
                    0,
                    "alphabet cannot be inferred: add an alphabet line or transitions".to_string(),
                );
            }
            let joined = symbols.into_iter().collect::<Vec<_>>().join(" ");
            Alphabet::parse(&joined).map_err(|e| FormatError { line: 0, message: e.to_string() })?
        }
    };

    for (line, [src, sym, dst]) in &trans {
        for name in [src, dst] {
            if !declared.contains(name) {
                return fail(*line, format!("state `{name}` is not declared"));
            }
        }
        let known = crate::symbols::Symbol::new(sym).is_ok_and(|s| alphabet.contains(&s));
        if !known {
            return fail(*line, format!("symbol `{sym}` is not in the alphabet"));
        }
    }
    for (line, [src, dst]) in &etrans {
        for name in [src, dst] {
            if !declared.contains(name) {
                return fail(*line, format!("state `{name}` is not declared"));
            }
        }
    }

    let state_list: Vec<&str> = states.iter().map(|(_, n)| n.as_str()).collect();
    let accept_list: Vec<&str> = accept.iter().map(|(_, n)| n.as_str()).collect();
    let trans_list: Vec<(&str, &str, &str)> =
        trans.iter().map(|(_, [s, a, d])| (s.as_str(), a.as_str(), d.as_str())).collect();

    if ty == "dfa" {
        if let Some((line, _)) = etrans.first() {
            return fail(*line, "epsilon transitions are not allowed in a dfa".to_string());
        }
        let mut rows: BTreeMap<(&str, &str), (&str, usize)> = BTreeMap::new();
        for (line, [src, sym, dst]) in &trans {
            match rows.get(&(src.as_str(), sym.as_str())) {
                Some((existing, _)) if *existing != dst.as_str() => {
                    return fail(
                        *line,
                        format!("state `{src}` has two different transitions on `{sym}`"),
                    );
                }
                _ => {
                    rows.insert((src, sym), (dst, *line));
                }
            }
        }
        let dfa = Dfa::new(alphabet, state_list, &start, accept_list, trans_list)
            .map_err(|e| FormatError { line: 0, message: e.to_string() })?;
        Ok(Automaton::Dfa(dfa))
    } else {
        let etrans_list: Vec<(&str, &str)> =
            etrans.iter().map(|(_, [s, d])| (s.as_str(), d.as_str())).collect();
        let nfa = Nfa::new(alphabet, state_list, &start, accept_list, trans_list, etrans_list)
            .map_err(|e| FormatError { line: 0, message: e.to_string() })?;
        Ok(Automaton::Nfa(nfa))
    }
}

fn emit_header(out: &mut String, ty: &str, alphabet: &Alphabet, states: &[String], start: &str, accepting: &mut Vec<&str>) {
    out.push_str(&format!("type: {ty}\n"));
    let symbols: Vec<&str> = alphabet.symbols().iter().map(|s| s.as_str()).collect();
    out.push_str(&format!("alphabet: {}\n", symbols.join(" ")));
    let mut names: Vec<&str> = states.iter().map(String::as_str).collect();
    names.sort_unstable();
    out.push_str(&format!("states: {}\n", names.join(" ")));
    out.push_str(&format!("start: {start}\n"));
    accepting.sort_unstable();
    out.push_str("accept:");
    for name in accepting {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
}

pub(super) fn emit_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    emit_header(&mut out, "dfa", d.alphabet(), d.state_names(), d.start_name(), &mut d.accepting_names());
    let mut names: Vec<&str> = d.state_names().iter().map(String::as_str).collect();
    names.sort_unstable();
    for name in names {
        for sym in d.alphabet().symbols() {
            let dst = d.next_state(name, sym).expect("total transition function");
            out.push_str(&format!("trans: {name} {sym} {dst}\n"));
        }
    }
    out
}

pub(super) fn emit_nfa(n: &Nfa) -> String {
    let mut out = String::new();
    emit_header(&mut out, "nfa", n.alphabet(), n.state_names(), n.start_name(), &mut n.accepting_names());
    let mut rows: Vec<(&str, usize, &str, &str)> = n
        .symbol_transitions()
        .into_iter()
        .map(|(src, sym, dst)| {
            (src, n.alphabet().index_of(sym).expect("transition symbols are in the alphabet"), sym.as_str(), dst)
        })
        .collect();
    rows.sort_unstable();
    for (src, _, sym, dst) in rows {
        out.push_str(&format!("trans: {src} {sym} {dst}\n"));
    }
    let mut eps = n.eps_transitions();
    eps.sort_unstable();
    for (src, dst) in eps {
        out.push_str(&format!("etrans: {src} {dst}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_complete_dfa() {
        let text = "\
# strings over a b ending in a
type: dfa
alphabet: a b
states: q0 q1
start: q0
accept: q1
trans: q0 a q1
trans: q1 a q1
";
        let Automaton::Dfa(d) = parse_automaton(text).unwrap() else {
            panic!("expected a dfa");
        };
        let alpha = Alphabet::parse("a b").unwrap();
        assert!(d.accepts(&alpha.parse_chars("aa").unwrap()));
        assert!(!d.accepts(&alpha.parse_chars("ab").unwrap()));
        assert!(d.state_names().contains(&"sink".to_string()));
    }

    #[test]
    fn emitted_listing_is_stable_and_reparses() {
        let text = "\
type: nfa
states: s t
start: s
accept: t
trans: s a t
trans: s b s
etrans: t s
";
        let first = parse_automaton(text).unwrap().emit();
        let second = parse_automaton(&first).unwrap().emit();
        assert_eq!(first, second);
        assert!(first.starts_with("type: nfa\nalphabet: a b\n"));
    }

    #[test]
    fn alphabet_is_inferred_sorted_from_transitions() {
        let text = "\
type: dfa
states: q
start: q
accept: q
trans: q b q
trans: q a q
";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.alphabet(), &Alphabet::parse("a b").unwrap());
    }

    #[test]
    fn uninferable_alphabet_is_an_error() {
        let err = parse_automaton("type: dfa\nstates: q\nstart: q\n").unwrap_err();
        assert_eq!(err.line, 0);
        assert!(err.message.contains("inferred"));
    }

    #[test]
    fn line_numbered_errors() {
        let err = parse_automaton("type: dfa\nstates: q\nstart: r\n").unwrap_err();
        assert_eq!(err.line, 3);

        let err =
            parse_automaton("type: dfa\nstates: q\nstart: q\ntrans: q a r\n").unwrap_err();
        assert_eq!(err.line, 4);

        let err = parse_automaton("type: dfa\nalphabet: a\nstates: q\nstart: q\ntrans: q b q\n")
            .unwrap_err();
        assert_eq!(err.line, 5);

        let err = parse_automaton(
            "type: dfa\nstates: q r\nstart: q\ntrans: q a q\ntrans: q a r\n",
        )
        .unwrap_err();
        assert_eq!(err.line, 5);

        let err = parse_automaton("type: dfa\nstates: q\nstart: q\netrans: q q\ntrans: q a q\n")
            .unwrap_err();
        assert_eq!(err.line, 4);

        let err = parse_automaton("type: pda\nstates: q\nstart: q\ntrans: q a q\n").unwrap_err();
        assert_eq!(err.line, 1);

        let err = parse_automaton("states: q\nstart: q\ntrans: q a q\n").unwrap_err();
        assert_eq!(err.line, 0);

        let err = parse_automaton("type: nfa\nstates: q q\nstart: q\ntrans: q a q\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn accumulating_lines_and_empty_accept() {
        let text = "\
type: nfa
alphabet: a
states: q0
states: q1
start: q0
accept:
trans: q0 a q1
";
        let Automaton::Nfa(n) = parse_automaton(text).unwrap() else {
            panic!("expected an nfa");
        };
        assert_eq!(n.state_count(), 2);
        assert!(n.accepting_names().is_empty());
        let alpha = Alphabet::parse("a").unwrap();
        assert!(!n.accepts(&alpha.parse_chars("a").unwrap()));
    }

    #[test]
    fn dfa_roundtrip_preserves_language() {
        let alpha = Alphabet::parse("a b").unwrap();
        let u = alpha.parse_chars("ab").unwrap();
        let d = Dfa::single_string(alpha, &u).unwrap();
        let reparsed = parse_automaton(&d.to_text()).unwrap().into_dfa();
        assert!(d.equivalent(&reparsed).unwrap());
        assert_eq!(reparsed.enumerate_upto(3), alloc::vec![u]);
    }
}
