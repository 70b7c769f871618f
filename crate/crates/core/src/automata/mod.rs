//! A small self-contained finite-automata toolkit.
//!
//! Deterministic automata keep a total transition function: the
//! constructor routes every missing transition into a fresh sink state.
//! Nondeterministic automata carry symbol and epsilon transitions and a
//! single start state. All iteration is ordered by state name and
//! alphabet position, so derived automata and emitted listings are
//! reproducible bit for bit.
//!
//! [`enumerate_upto`](Nfa::enumerate_upto) lists accepted strings in
//! length-then-lexicographic order, pruning prefixes that cannot reach an
//! accepting state within the remaining length; its cost tracks the number
//! of answers rather than the number of candidate strings.

mod regex;
mod textfmt;

pub use regex::{regex_to_nfa, RegexError};
pub use textfmt::{parse_automaton, Automaton, FormatError};

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::symbols::{Alphabet, Str, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    UnknownState { name: String },
    DuplicateState { name: String },
    BadStateName { name: String },
    ForeignSymbol { symbol: String },
    Nondeterministic { state: String, symbol: String },
    AlphabetMismatch,
    UnmappedSymbol { symbol: String },
    DuplicateMapping { symbol: String },
}

impl fmt::Display for AutomatonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomatonError::UnknownState { name } => write!(f, "state `{name}` is not declared"),
            AutomatonError::DuplicateState { name } => write!(f, "state `{name}` declared twice"),
            AutomatonError::BadStateName { name } => {
                write!(f, "state name `{name}` is empty or contains whitespace or `#`")
            }
            AutomatonError::ForeignSymbol { symbol } => {
                write!(f, "symbol `{symbol}` is not in the alphabet")
            }
            AutomatonError::Nondeterministic { state, symbol } => write!(
                f,
                "state `{state}` has two different transitions on `{symbol}`"
            ),
            AutomatonError::AlphabetMismatch => write!(f, "the alphabets differ"),
            AutomatonError::UnmappedSymbol { symbol } => {
                write!(f, "symbol `{symbol}` has no image")
            }
            AutomatonError::DuplicateMapping { symbol } => {
                write!(f, "symbol `{symbol}` mapped twice")
            }
        }
    }
}

impl core::error::Error for AutomatonError {}

fn check_state_name(name: &str) -> Result<(), AutomatonError> {
    if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('#') {
        return Err(AutomatonError::BadStateName { name: name.to_string() });
    }
    Ok(())
}

/// A deterministic automaton with a total transition function.
#[derive(Debug, Clone)]
pub struct Dfa {
    alphabet: Alphabet,
    states: Vec<String>,
    index: BTreeMap<String, usize>,
    start: usize,
    accepting: BTreeSet<usize>,
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    /// Builds a deterministic automaton. Transitions may be partial: a
    /// fresh sink state absorbs every missing one.
    pub fn new<'a, S, A, T>(
        alphabet: Alphabet,
        states: S,
        start: &str,
        accepting: A,
        transitions: T,
    ) -> Result<Dfa, AutomatonError>
    where
        S: IntoIterator<Item = &'a str>,
        A: IntoIterator<Item = &'a str>,
        T: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        for name in states {
            check_state_name(name)?;
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(AutomatonError::DuplicateState { name: name.to_string() });
            }
            names.push(name.to_string());
        }
        let start = *index
            .get(start)
            .ok_or_else(|| AutomatonError::UnknownState { name: start.to_string() })?;
        let mut accepting_set = BTreeSet::new();
        for name in accepting {
            let i = *index
                .get(name)
                .ok_or_else(|| AutomatonError::UnknownState { name: name.to_string() })?;
            accepting_set.insert(i);
        }
        let mut partial: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; names.len()];
        for (src, sym, dst) in transitions {
            let s = *index
                .get(src)
                .ok_or_else(|| AutomatonError::UnknownState { name: src.to_string() })?;
            let d = *index
                .get(dst)
                .ok_or_else(|| AutomatonError::UnknownState { name: dst.to_string() })?;
            let a = Symbol::new(sym)
                .ok()
                .and_then(|symbol| alphabet.index_of(&symbol))
                .ok_or_else(|| AutomatonError::ForeignSymbol { symbol: sym.to_string() })?;
            match partial[s][a] {
                None => partial[s][a] = Some(d),
                Some(existing) if existing == d => {}
                Some(_) => {
                    return Err(AutomatonError::Nondeterministic {
                        state: src.to_string(),
                        symbol: sym.to_string(),
                    });
                }
            }
        }
        let needs_sink = partial.iter().any(|row| row.iter().any(Option::is_none));
        let mut sink = None;
        if needs_sink {
            let mut name = String::from("sink");
            let mut i = 0usize;
            while index.contains_key(&name) {
                i += 1;
                name = format!("sink{i}");
            }
            index.insert(name.clone(), names.len());
            names.push(name);
            partial.push(vec![None; alphabet.len()]);
            sink = Some(names.len() - 1);
        }
        let delta = partial
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|cell| cell.unwrap_or_else(|| sink.expect("sink added above")))
                    .collect()
            })
            .collect();
        Ok(Dfa { alphabet, states: names, index, start, accepting: accepting_set, delta })
    }

    /// The automaton accepting exactly the one given string.
    pub fn single_string(alphabet: Alphabet, u: &Str) -> Result<Dfa, AutomatonError> {
        let names: Vec<String> = (0..=u.len()).map(|i| format!("q{i}")).collect();
        let transitions: Vec<(String, String, String)> = u
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("q{i}"), s.as_str().to_string(), format!("q{}", i + 1)))
            .collect();
        Dfa::new(
            alphabet,
            names.iter().map(String::as_str),
            "q0",
            [names[u.len()].as_str()],
            transitions.iter().map(|(s, a, d)| (s.as_str(), a.as_str(), d.as_str())),
        )
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn start_name(&self) -> &str {
        &self.states[self.start]
    }

    pub fn accepting_names(&self) -> Vec<&str> {
        self.accepting.iter().map(|&i| self.states[i].as_str()).collect()
    }

    pub fn is_accepting(&self, state: &str) -> bool {
        self.index.get(state).is_some_and(|i| self.accepting.contains(i))
    }

    pub fn next_state(&self, state: &str, symbol: &Symbol) -> Option<&str> {
        let q = *self.index.get(state)?;
        let a = self.alphabet.index_of(symbol)?;
        Some(&self.states[self.delta[q][a]])
    }

    /// Strings over other alphabets are simply not accepted.
    pub fn accepts(&self, u: &Str) -> bool {
        let mut q = self.start;
        for s in u.iter() {
            match self.alphabet.index_of(s) {
                Some(a) => q = self.delta[q][a],
                None => return false,
            }
        }
        self.accepting.contains(&q)
    }

    pub(crate) fn start_index(&self) -> usize {
        self.start
    }

    pub(crate) fn accepting_indices(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub(crate) fn step_index(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub(crate) fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    fn run_indexed(&self, mut q: usize, w: &Str) -> Option<usize> {
        for s in w.iter() {
            q = self.delta[q][self.alphabet.index_of(s)?];
        }
        Some(q)
    }

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        out.accepting = (0..self.states.len()).filter(|i| !self.accepting.contains(i)).collect();
        out
    }

    fn product(&self, other: &Dfa, accept_both: bool) -> Result<Dfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let mut pairs = vec![(self.start, other.start)];
        let mut index: BTreeMap<(usize, usize), usize> =
            BTreeMap::from([((self.start, other.start), 0)]);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = Vec::with_capacity(self.alphabet.len());
            for a in 0..self.alphabet.len() {
                let dst = (self.delta[p][a], other.delta[q][a]);
                let next = *index.entry(dst).or_insert_with(|| {
                    pairs.push(dst);
                    pairs.len() - 1
                });
                row.push(next);
            }
            delta.push(row);
            i += 1;
        }
        let states: Vec<String> = (0..pairs.len()).map(|i| format!("s{i}")).collect();
        let accepting = pairs
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| {
                let a1 = self.accepting.contains(p);
                let a2 = other.accepting.contains(q);
                if accept_both {
                    a1 && a2
                } else {
                    a1 || a2
                }
            })
            .map(|(i, _)| i)
            .collect();
        let index = states.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Ok(Dfa { alphabet: self.alphabet.clone(), states, index, start: 0, accepting, delta })
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        self.product(other, true)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        self.product(other, false)
    }

    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            if self.accepting.contains(&q) {
                return false;
            }
            for &d in &self.delta[q] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        true
    }

    /// True when both automata accept the same language.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let mut seen = BTreeSet::from([(self.start, other.start)]);
        let mut queue = VecDeque::from([(self.start, other.start)]);
        while let Some((p, q)) = queue.pop_front() {
            if self.accepting.contains(&p) != other.accepting.contains(&q) {
                return Ok(false);
            }
            for a in 0..self.alphabet.len() {
                let dst = (self.delta[p][a], other.delta[q][a]);
                if seen.insert(dst) {
                    queue.push_back(dst);
                }
            }
        }
        Ok(true)
    }

    pub fn to_nfa(&self) -> Nfa {
        let trans = self
            .delta
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(a, &d)| (a, BTreeSet::from([d])))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        Nfa {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            start: self.start,
            accepting: self.accepting.clone(),
            trans,
            etrans: vec![BTreeSet::new(); self.states.len()],
        }
    }

    /// Accepted strings of length at most `max_len`, shortest first and
    /// lexicographic within a length.
    pub fn enumerate_upto(&self, max_len: usize) -> Vec<Str> {
        self.to_nfa().enumerate_upto(max_len)
    }

    pub fn to_text(&self) -> String {
        textfmt::emit_dfa(self)
    }
}

/// A nondeterministic automaton with epsilon transitions.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Alphabet,
    states: Vec<String>,
    start: usize,
    accepting: BTreeSet<usize>,
    trans: Vec<BTreeMap<usize, BTreeSet<usize>>>,
    etrans: Vec<BTreeSet<usize>>,
}

impl Nfa {
    pub fn new<'a, S, A, T, E>(
        alphabet: Alphabet,
        states: S,
        start: &str,
        accepting: A,
        transitions: T,
        epsilon_transitions: E,
    ) -> Result<Nfa, AutomatonError>
    where
        S: IntoIterator<Item = &'a str>,
        A: IntoIterator<Item = &'a str>,
        T: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        for name in states {
            check_state_name(name)?;
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(AutomatonError::DuplicateState { name: name.to_string() });
            }
            names.push(name.to_string());
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| AutomatonError::UnknownState { name: name.to_string() })
        };
        let start = lookup(start)?;
        let mut accepting_set = BTreeSet::new();
        for name in accepting {
            accepting_set.insert(lookup(name)?);
        }
        let mut trans = vec![BTreeMap::<usize, BTreeSet<usize>>::new(); names.len()];
        for (src, sym, dst) in transitions {
            let s = lookup(src)?;
            let d = lookup(dst)?;
            let a = Symbol::new(sym)
                .ok()
                .and_then(|symbol| alphabet.index_of(&symbol))
                .ok_or_else(|| AutomatonError::ForeignSymbol { symbol: sym.to_string() })?;
            trans[s].entry(a).or_default().insert(d);
        }
        let mut etrans = vec![BTreeSet::new(); names.len()];
        for (src, dst) in epsilon_transitions {
            let s = lookup(src)?;
            let d = lookup(dst)?;
            etrans[s].insert(d);
        }
        Ok(Nfa { alphabet, states: names, start, accepting: accepting_set, trans, etrans })
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        states: Vec<String>,
        start: usize,
        accepting: BTreeSet<usize>,
        trans: Vec<BTreeMap<usize, BTreeSet<usize>>>,
        etrans: Vec<BTreeSet<usize>>,
    ) -> Nfa {
        debug_assert_eq!(states.len(), trans.len());
        debug_assert_eq!(states.len(), etrans.len());
        debug_assert!(start < states.len());
        Nfa { alphabet, states, start, accepting, trans, etrans }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn start_name(&self) -> &str {
        &self.states[self.start]
    }

    pub fn accepting_names(&self) -> Vec<&str> {
        self.accepting.iter().map(|&i| self.states[i].as_str()).collect()
    }

    /// Symbol transitions in state-index order.
    pub fn symbol_transitions(&self) -> Vec<(&str, &Symbol, &str)> {
        let mut out = Vec::new();
        for (q, row) in self.trans.iter().enumerate() {
            for (&a, dsts) in row {
                for &d in dsts {
                    out.push((
                        self.states[q].as_str(),
                        &self.alphabet.symbols()[a],
                        self.states[d].as_str(),
                    ));
                }
            }
        }
        out
    }

    /// Epsilon transitions in state-index order.
    pub fn eps_transitions(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for (q, dsts) in self.etrans.iter().enumerate() {
            for &d in dsts {
                out.push((self.states[q].as_str(), self.states[d].as_str()));
            }
        }
        out
    }

    fn eps_closure_of(&self, mut set: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &r in &self.etrans[q] {
                if set.insert(r) {
                    stack.push(r);
                }
            }
        }
        set
    }

    fn step_set(&self, set: &BTreeSet<usize>, a: usize) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &q in set {
            if let Some(dsts) = self.trans[q].get(&a) {
                next.extend(dsts.iter().copied());
            }
        }
        self.eps_closure_of(next)
    }

    /// Strings over other alphabets are simply not accepted.
    pub fn accepts(&self, u: &Str) -> bool {
        let mut set = self.eps_closure_of(BTreeSet::from([self.start]));
        for s in u.iter() {
            let Some(a) = self.alphabet.index_of(s) else {
                return false;
            };
            set = self.step_set(&set, a);
            if set.is_empty() {
                return false;
            }
        }
        set.iter().any(|q| self.accepting.contains(q))
    }

    /// Subset construction. States are named by the sorted member list in
    /// braces, `{}` being the empty subset.
    pub fn determinize(&self) -> Dfa {
        let start_set = self.eps_closure_of(BTreeSet::from([self.start]));
        let mut subsets = vec![start_set.clone()];
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(start_set, 0)]);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let current = subsets[i].clone();
            let mut row = Vec::with_capacity(self.alphabet.len());
            for a in 0..self.alphabet.len() {
                let next = self.step_set(&current, a);
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    subsets.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let mut names: Vec<String> = subsets
            .iter()
            .map(|set| {
                let inner: Vec<&str> = set.iter().map(|&q| self.states[q].as_str()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        // Subset names can collide when member names themselves contain
        // braces or commas; pad deterministically until unique.
        let mut used: BTreeSet<String> = BTreeSet::new();
        for name in names.iter_mut() {
            while used.contains(name) {
                name.push('_');
            }
            used.insert(name.clone());
        }
        let accepting = subsets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|q| self.accepting.contains(q)))
            .map(|(i, _)| i)
            .collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Dfa { alphabet: self.alphabet.clone(), states: names, index, start: 0, accepting, delta }
    }

    /// For each state, the least number of symbols on any path to an
    /// accepting state; None when no accepting state is reachable.
    fn distance_to_accepting(&self) -> Vec<Option<usize>> {
        let n = self.states.len();
        let mut rev_sym: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut rev_eps: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for dsts in self.trans[q].values() {
                for &d in dsts {
                    rev_sym[d].push(q);
                }
            }
            for &d in &self.etrans[q] {
                rev_eps[d].push(q);
            }
        }
        let mut dist: Vec<Option<usize>> = vec![None; n];
        let mut deque = VecDeque::new();
        for &q in &self.accepting {
            dist[q] = Some(0);
            deque.push_back(q);
        }
        while let Some(q) = deque.pop_front() {
            let dq = dist[q].expect("queued states have a distance");
            for &p in &rev_eps[q] {
                if dist[p].is_none_or(|d| d > dq) {
                    dist[p] = Some(dq);
                    deque.push_front(p);
                }
            }
            for &p in &rev_sym[q] {
                if dist[p].is_none_or(|d| d > dq + 1) {
                    dist[p] = Some(dq + 1);
                    deque.push_back(p);
                }
            }
        }
        dist
    }

    /// Accepted strings of length at most `max_len`, shortest first and
    /// lexicographic within a length. Prefixes that cannot reach an
    /// accepting state within the remaining length are pruned.
    pub fn enumerate_upto(&self, max_len: usize) -> Vec<Str> {
        let dist = self.distance_to_accepting();
        let start = self.eps_closure_of(BTreeSet::from([self.start]));
        let mut out = Vec::new();
        let mut level = vec![(Str::empty(), start)];
        for len in 0..=max_len {
            let mut next_level = Vec::new();
            for (prefix, set) in &level {
                if set.iter().any(|q| self.accepting.contains(q)) {
                    out.push(prefix.clone());
                }
                if len == max_len {
                    continue;
                }
                for a in 0..self.alphabet.len() {
                    let next = self.step_set(set, a);
                    let Some(need) = next.iter().filter_map(|&q| dist[q]).min() else {
                        continue;
                    };
                    if need > max_len - (len + 1) {
                        continue;
                    }
                    let mut w = prefix.clone();
                    w.push(self.alphabet.symbols()[a].clone());
                    next_level.push((w, next));
                }
            }
            level = next_level;
        }
        out
    }

    pub fn to_text(&self) -> String {
        textfmt::emit_nfa(self)
    }
}

/// A homomorphism: each source symbol maps to a string over the target
/// alphabet, extended to strings by concatenation.
#[derive(Debug, Clone)]
pub struct SymbolMap {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Str>,
}

impl SymbolMap {
    /// Every source symbol must be mapped exactly once and every image
    /// must stay inside the target alphabet.
    pub fn new(
        source: Alphabet,
        target: Alphabet,
        pairs: &[(Symbol, Str)],
    ) -> Result<Self, AutomatonError> {
        let mut images: Vec<Option<Str>> = vec![None; source.len()];
        for (sym, image) in pairs {
            let i = source
                .index_of(sym)
                .ok_or_else(|| AutomatonError::ForeignSymbol { symbol: sym.as_str().to_string() })?;
            if images[i].is_some() {
                return Err(AutomatonError::DuplicateMapping { symbol: sym.as_str().to_string() });
            }
            for s in image.iter() {
                if !target.contains(s) {
                    return Err(AutomatonError::ForeignSymbol { symbol: s.as_str().to_string() });
                }
            }
            images[i] = Some(image.clone());
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, image)| {
                image.ok_or_else(|| AutomatonError::UnmappedSymbol {
                    symbol: source.symbols()[i].as_str().to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolMap { source, target, images })
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, sym: &Symbol) -> Option<&Str> {
        self.source.index_of(sym).map(|i| &self.images[i])
    }

    fn image_by_index(&self, i: usize) -> &Str {
        &self.images[i]
    }

    pub fn apply(&self, u: &Str) -> Result<Str, AutomatonError> {
        let mut out = Vec::new();
        for s in u.iter() {
            let image = self
                .image(s)
                .ok_or_else(|| AutomatonError::ForeignSymbol { symbol: s.as_str().to_string() })?;
            out.extend(image.iter().cloned());
        }
        Ok(Str::from_symbols(out))
    }
}

/// The automaton for the image language: each transition on `a` becomes a
/// path spelling the image of `a`, or an epsilon transition when the image
/// is empty.
pub fn hom_image(nfa: &Nfa, map: &SymbolMap) -> Result<Nfa, AutomatonError> {
    if map.source() != nfa.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let target = map.target().clone();
    let mut names = nfa.states.clone();
    let existing: BTreeSet<String> = names.iter().cloned().collect();
    let mut counter = 0usize;
    let mut fresh = move || loop {
        let candidate = format!("h{counter}");
        counter += 1;
        if !existing.contains(&candidate) {
            return candidate;
        }
    };
    let mut sym_edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut eps_edges: Vec<(usize, usize)> = Vec::new();
    for (q, dsts) in nfa.etrans.iter().enumerate() {
        for &d in dsts {
            eps_edges.push((q, d));
        }
    }
    for (q, row) in nfa.trans.iter().enumerate() {
        for (&a, dsts) in row {
            for &d in dsts {
                let image = map.image_by_index(a);
                if image.is_empty() {
                    eps_edges.push((q, d));
                    continue;
                }
                let mut current = q;
                for (k, sym) in image.iter().enumerate() {
                    let next = if k + 1 == image.len() {
                        d
                    } else {
                        names.push(fresh());
                        names.len() - 1
                    };
                    let t = target.index_of(sym).expect("images lie in the target alphabet");
                    sym_edges.push((current, t, next));
                    current = next;
                }
            }
        }
    }
    let mut trans = vec![BTreeMap::<usize, BTreeSet<usize>>::new(); names.len()];
    for (s, a, d) in sym_edges {
        trans[s].entry(a).or_default().insert(d);
    }
    let mut etrans = vec![BTreeSet::new(); names.len()];
    for (s, d) in eps_edges {
        etrans[s].insert(d);
    }
    Ok(Nfa::from_parts(target, names, nfa.start, nfa.accepting.clone(), trans, etrans))
}

/// The automaton for the preimage language: reading `a` runs the original
/// automaton over the image of `a`. States, start, and acceptance carry
/// over unchanged.
pub fn inv_hom(dfa: &Dfa, map: &SymbolMap) -> Result<Dfa, AutomatonError> {
    if map.target() != dfa.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let source = map.source().clone();
    let mut delta = Vec::with_capacity(dfa.states.len());
    for q in 0..dfa.states.len() {
        let mut row = Vec::with_capacity(source.len());
        for a in 0..source.len() {
            let dst = dfa
                .run_indexed(q, map.image_by_index(a))
                .expect("images lie in the automaton's alphabet");
            row.push(dst);
        }
        delta.push(row);
    }
    Ok(Dfa {
        alphabet: source,
        states: dfa.states.clone(),
        index: dfa.index.clone(),
        start: dfa.start,
        accepting: dfa.accepting.clone(),
        delta,
    })
}
