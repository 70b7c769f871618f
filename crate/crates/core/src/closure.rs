//! Closure automata for guided rewriting.
//!
//! Guided rewriting preserves regularity: from an acceptor for a language
//! this module builds an acceptor for everything reachable by rewriting,
//! in two flavors. [`build_closure_nfa`] handles adjustment rewriting
//! directly. [`build_id_closure_nfa`] handles guided insertion and
//! deletion of a zero symbol by bounding the zero runs, compressing each
//! run to a single symbol, and running the adjustment construction over
//! the compressed alphabet, where run symbols of different lengths are
//! mutually adjacent.
//!
//! Both constructions come with brute-force counterparts,
//! [`oracle_closure_upto`] and [`oracle_id_closure_upto`], which close
//! every short string of the language by breadth-first search. They are
//! slow but independent of the automaton constructions, which makes them
//! useful as cross-checks.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::automata::{hom_image, inv_hom, AutomatonError, Dfa, Nfa, SymbolMap};
use crate::rewrite::{
    closure_of_string, id_closure, validate_id_guides, IdError, RewriteError,
};
use crate::slice::{slice_successors, Slice, SliceError};
use crate::symbols::{
    AdjustmentError, AdjustmentRelation, Alphabet, GuideError, GuideSet, Str, Symbol, SystemDef,
};

/// An adjustment relation bundled with a guide set over its alphabet.
#[derive(Debug, Clone)]
pub struct GuidedSystem {
    rel: AdjustmentRelation,
    guides: GuideSet,
}

impl GuidedSystem {
    pub fn new(rel: AdjustmentRelation, guides: GuideSet) -> Result<Self, ClosureError> {
        guides.validate(rel.alphabet())?;
        Ok(GuidedSystem { rel, guides })
    }

    pub fn from_def(def: &SystemDef) -> Result<Self, ClosureError> {
        Self::new(def.adjustment()?, def.guides.clone())
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.rel.alphabet()
    }

    pub fn relation(&self) -> &AdjustmentRelation {
        &self.rel
    }

    pub fn guides(&self) -> &GuideSet {
        &self.guides
    }
}

/// A zero symbol bundled with guides for insertion/deletion rewriting.
/// Guides must hold at least two symbols and must not begin or end with
/// the zero.
#[derive(Debug, Clone)]
pub struct IdSystem {
    alphabet: Alphabet,
    guides: GuideSet,
    zero: Symbol,
}

impl IdSystem {
    pub fn new(alphabet: Alphabet, guides: GuideSet, zero: Symbol) -> Result<Self, ClosureError> {
        if !alphabet.contains(&zero) {
            return Err(ClosureError::ZeroOutsideAlphabet { zero });
        }
        guides.validate(&alphabet)?;
        validate_id_guides(&guides, &zero)?;
        Ok(IdSystem { alphabet, guides, zero })
    }

    /// Reads the zero symbol and guides out of a parsed definition. The
    /// definition must declare a zero, and it must not declare class or
    /// pair lines, which have no meaning here.
    pub fn from_def(def: &SystemDef) -> Result<Self, ClosureError> {
        let Some(zero) = def.zero.clone() else {
            return Err(ClosureError::MissingZero);
        };
        if !def.classes.is_empty() || !def.pairs.is_empty() {
            return Err(ClosureError::UnexpectedRelation);
        }
        Self::new(def.alphabet.clone(), def.guides.clone(), zero)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn guides(&self) -> &GuideSet {
        &self.guides
    }

    pub fn zero(&self) -> &Symbol {
        &self.zero
    }
}

/// Limits for the closure constructions.
#[derive(Debug, Clone)]
pub struct ClosureOptions {
    /// Construction fails once the automaton under construction would
    /// exceed this many states.
    pub state_cap: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { state_cap: 1_000_000 }
    }
}

/// Counters describing a finished construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureStats {
    pub states: usize,
    pub transitions: usize,
    /// Distinct slices the walk encountered.
    pub slices: usize,
    /// States of the input acceptor dropped because no accepting state is
    /// reachable from them.
    pub pruned_states: usize,
}

/// Counters for the insertion/deletion pipeline: the run bounds taken
/// from the language and the guides, their maximum, and the counters of
/// the inner construction over the compressed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdClosureStats {
    pub k: usize,
    pub k_language: usize,
    pub k_guides: usize,
    pub inner: ClosureStats,
}

/// An acceptor for every string reachable from the language of `m` by
/// guided rewriting.
pub fn build_closure_nfa(m: &Dfa, sys: &GuidedSystem) -> Result<Nfa, ClosureError> {
    build_closure_nfa_with(m, sys, &ClosureOptions::default()).map(|(nfa, _)| nfa)
}

/// Like [`build_closure_nfa`], also reporting counters.
///
/// States pair a state of `m` with a repetition-free slice: reading a
/// rewritten string left to right, the `m` component tracks the original
/// string while the slice records the guide windows crossing the current
/// position. A transition guesses the original symbol, steps `m` on it,
/// moves to a successor slice, and reads what that slice yields. The walk
/// may end where `m` accepts and all windows are closed. The empty slice
/// doubles as the start state, so the empty string is accepted exactly
/// when `m` accepts it.
pub fn build_closure_nfa_with(
    m: &Dfa,
    sys: &GuidedSystem,
    options: &ClosureOptions,
) -> Result<(Nfa, ClosureStats), ClosureError> {
    if m.alphabet() != sys.alphabet() {
        return Err(ClosureError::AlphabetMismatch);
    }
    let alphabet = m.alphabet().clone();
    let co = co_reachable(m);
    let pruned_states = m.state_count() - co.len();

    if !co.contains(&m.start_index()) {
        let nfa = Nfa::from_parts(
            alphabet,
            vec!["init".to_string()],
            0,
            BTreeSet::new(),
            vec![BTreeMap::new()],
            vec![BTreeSet::new()],
        );
        let stats =
            ClosureStats { states: 1, transitions: 0, slices: 1, pruned_states };
        return Ok((nfa, stats));
    }
    if options.state_cap < 2 {
        return Err(ClosureError::StateCapExceeded { cap: options.state_cap });
    }

    let mut slices: Vec<Slice> = vec![Slice::empty()];
    let mut slice_ids: BTreeMap<Vec<(u16, u16)>, usize> = BTreeMap::from([(Vec::new(), 0)]);
    let mut successor_cache: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut pair_ids: BTreeMap<(usize, usize), usize> =
        BTreeMap::from([((m.start_index(), 0), 0)]);
    let mut pairs: Vec<(usize, usize)> = vec![(m.start_index(), 0)];
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::from([0]);

    while let Some(current) = queue.pop_front() {
        let (q, sid) = pairs[current];
        for a_idx in 0..alphabet.len() {
            let target = m.step_index(q, a_idx);
            if !co.contains(&target) {
                continue;
            }
            if !successor_cache.contains_key(&(sid, a_idx)) {
                let a = alphabet.get(a_idx).expect("the index ranges over the alphabet");
                let found = slice_successors(&slices[sid], a, &sys.guides, &sys.rel)?;
                let mut list = Vec::with_capacity(found.len());
                for succ in found {
                    let yield_idx = alphabet
                        .index_of(succ.yield_for(a))
                        .expect("yields stay within the alphabet");
                    let key = slice_key(&succ, &sys.guides);
                    let next_sid = match slice_ids.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = slices.len();
                            slice_ids.insert(key, id);
                            slices.push(succ);
                            id
                        }
                    };
                    list.push((next_sid, yield_idx));
                }
                successor_cache.insert((sid, a_idx), list);
            }
            let list = successor_cache[&(sid, a_idx)].clone();
            for (next_sid, yield_idx) in list {
                let next_pair = match pair_ids.get(&(target, next_sid)) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len();
                        if id + 2 > options.state_cap {
                            return Err(ClosureError::StateCapExceeded {
                                cap: options.state_cap,
                            });
                        }
                        pair_ids.insert((target, next_sid), id);
                        pairs.push((target, next_sid));
                        queue.push_back(id);
                        id
                    }
                };
                edges.push((current, yield_idx, next_pair));
            }
        }
    }

    let fin = pairs.len();
    let mut names: Vec<String> = Vec::with_capacity(fin + 1);
    names.push("init".to_string());
    for &(q, sid) in pairs.iter().skip(1) {
        names.push(format!("{}.z{}", m.state_name(q), sid));
    }
    names.push("fin".to_string());
    let distinct: BTreeSet<&String> = names.iter().collect();
    if distinct.len() != names.len() {
        names.clear();
        names.push("init".to_string());
        for &(q, sid) in pairs.iter().skip(1) {
            names.push(format!("q{q}.z{sid}"));
        }
        names.push("fin".to_string());
    }

    let mut trans: Vec<BTreeMap<usize, BTreeSet<usize>>> = vec![BTreeMap::new(); fin + 1];
    let mut etrans: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); fin + 1];
    for (from, sym, to) in edges {
        trans[from].entry(sym).or_default().insert(to);
    }
    for (i, &(q, sid)) in pairs.iter().enumerate() {
        if m.accepting_indices().contains(&q) && slices[sid].is_end() {
            etrans[i].insert(fin);
        }
    }
    let transitions = trans.iter().flat_map(BTreeMap::values).map(BTreeSet::len).sum();
    let stats = ClosureStats {
        states: fin + 1,
        transitions,
        slices: slices.len(),
        pruned_states,
    };
    let nfa = Nfa::from_parts(alphabet, names, 0, BTreeSet::from([fin]), trans, etrans);
    Ok((nfa, stats))
}

/// The states of a complete acceptor from which an accepting state is
/// reachable.
fn co_reachable(m: &Dfa) -> BTreeSet<usize> {
    let mut reversed: Vec<Vec<usize>> = vec![Vec::new(); m.state_count()];
    for q in 0..m.state_count() {
        for a in 0..m.alphabet().len() {
            reversed[m.step_index(q, a)].push(q);
        }
    }
    let mut seen = m.accepting_indices().clone();
    let mut stack: Vec<usize> = seen.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &p in &reversed[q] {
            if seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

/// A compact key for interning slices: guides are replaced by their first
/// index in the set, so equal guides listed twice intern alike.
fn slice_key(slice: &Slice, guides: &GuideSet) -> Vec<(u16, u16)> {
    slice
        .iter()
        .map(|pair| {
            let g = guides.index_of(pair.guide()).expect("successor guides come from the set");
            (g as u16, pair.offset() as u16)
        })
        .collect()
}

/// Brute-force counterpart of [`build_closure_nfa`]: enumerates the
/// language up to the length bound and closes every string by
/// breadth-first rewriting. Rewriting preserves length, so the cut-off is
/// exact. Results are sorted shortest first.
pub fn oracle_closure_upto(
    m: &Dfa,
    sys: &GuidedSystem,
    max_len: usize,
) -> Result<Vec<Str>, ClosureError> {
    if m.alphabet() != sys.alphabet() {
        return Err(ClosureError::AlphabetMismatch);
    }
    let mut out: BTreeSet<Str> = BTreeSet::new();
    for u in m.enumerate_upto(max_len) {
        // Anything reachable from a string the search already produced is
        // itself already produced.
        if out.contains(&u) {
            continue;
        }
        out.extend(closure_of_string(&u, &sys.guides, &sys.rel)?);
    }
    let mut list: Vec<Str> = out.into_iter().collect();
    sys.alphabet().sort_strings(&mut list);
    Ok(list)
}

/// Replaces runs of a zero symbol by single symbols naming the run's
/// length: the run symbol for `i` stands for exactly `i` zeros, for `i`
/// below the bound `k`.
///
/// Strings compress to the boundary-inclusive form, run symbols and
/// non-zero symbols strictly alternating from run to run, which encodes
/// the empty runs between adjacent non-zero symbols too. Guides compress
/// to the interior form without the outer runs, since a guide begins and
/// ends with non-zero symbols.
#[derive(Debug, Clone)]
pub struct CompressionScheme {
    source: Alphabet,
    target: Alphabet,
    zero: Symbol,
    theta: Vec<Symbol>,
}

impl CompressionScheme {
    /// A scheme for runs of fewer than `k` zeros. Run symbols are named
    /// `0_0, 0_1, ...`, prefixing underscores until the names avoid the
    /// source alphabet; the compressed alphabet lists them before the
    /// remaining source symbols.
    pub fn new(source: &Alphabet, zero: &Symbol, k: usize) -> Result<Self, ClosureError> {
        assert!(k >= 1, "at least the empty run must be expressible");
        if !source.contains(zero) {
            return Err(ClosureError::ZeroOutsideAlphabet { zero: zero.clone() });
        }
        let mut prefix = String::from("0");
        let theta: Vec<Symbol> = loop {
            let candidate: Vec<Symbol> = (0..k)
                .map(|i| {
                    Symbol::new(&format!("{prefix}_{i}"))
                        .expect("generated names hold no whitespace")
                })
                .collect();
            if candidate.iter().all(|t| !source.contains(t)) {
                break candidate;
            }
            prefix.insert(0, '_');
        };
        let mut symbols = theta.clone();
        symbols.extend(source.symbols().iter().filter(|s| *s != zero).cloned());
        let target =
            Alphabet::new(symbols).expect("fresh run names cannot collide with the source");
        Ok(CompressionScheme { source: source.clone(), target, zero: zero.clone(), theta })
    }

    /// The highest representable run length plus one.
    pub fn k(&self) -> usize {
        self.theta.len()
    }

    pub fn zero(&self) -> &Symbol {
        &self.zero
    }

    /// The run symbols, shortest run first.
    pub fn theta(&self) -> &[Symbol] {
        &self.theta
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    fn run_symbol(&self, run: usize) -> Result<&Symbol, ClosureError> {
        self.theta
            .get(run)
            .ok_or(ClosureError::ZeroRunTooLong { run, bound: self.theta.len() })
    }

    /// The boundary-inclusive form: one run symbol before every non-zero
    /// symbol and one at the end. The empty string becomes the empty-run
    /// symbol alone.
    pub fn compress_string(&self, w: &Str) -> Result<Str, ClosureError> {
        let mut out = Vec::new();
        let mut run = 0usize;
        for s in w.iter() {
            if s == &self.zero {
                run += 1;
                continue;
            }
            if !self.source.contains(s) {
                return Err(ClosureError::ForeignSymbol { symbol: s.as_str().to_string() });
            }
            out.push(self.run_symbol(run)?.clone());
            out.push(s.clone());
            run = 0;
        }
        out.push(self.run_symbol(run)?.clone());
        Ok(Str::from_symbols(out))
    }

    /// The interior form: run symbols only between non-zero symbols. The
    /// string must not begin or end with the zero symbol.
    pub fn compress_guide(&self, g: &Str) -> Result<Str, ClosureError> {
        let boundary_zero = g.first().is_none_or(|s| s == &self.zero)
            || g.last().is_some_and(|s| s == &self.zero);
        if boundary_zero {
            return Err(ClosureError::GuideBoundaryZero { guide: g.clone() });
        }
        let mut out = Vec::new();
        let mut run = 0usize;
        for s in g.iter() {
            if s == &self.zero {
                run += 1;
                continue;
            }
            if !self.source.contains(s) {
                return Err(ClosureError::ForeignSymbol { symbol: s.as_str().to_string() });
            }
            if !out.is_empty() {
                out.push(self.run_symbol(run)?.clone());
            }
            out.push(s.clone());
            run = 0;
        }
        Ok(Str::from_symbols(out))
    }

    /// Drops the outer runs of a string and renders the rest in the
    /// interior form.
    pub fn interior(&self, w: &Str) -> Result<Str, ClosureError> {
        let symbols = w.symbols();
        let Some(start) = symbols.iter().position(|s| s != &self.zero) else {
            return Ok(Str::empty());
        };
        let end = symbols.iter().rposition(|s| s != &self.zero).expect("a non-zero exists");
        let trimmed: Str = symbols[start..=end].iter().cloned().collect();
        self.compress_guide(&trimmed)
    }

    /// The substitution sending each run symbol to its zeros and every
    /// other symbol to itself.
    pub fn hom(&self) -> SymbolMap {
        let pairs: Vec<(Symbol, Str)> = self
            .target
            .symbols()
            .iter()
            .map(|s| match self.theta.iter().position(|t| t == s) {
                Some(i) => {
                    (s.clone(), core::iter::repeat(self.zero.clone()).take(i).collect())
                }
                None => (s.clone(), Str::from_symbols(vec![s.clone()])),
            })
            .collect();
        SymbolMap::new(self.target.clone(), self.source.clone(), &pairs)
            .expect("each compressed symbol is mapped exactly once")
    }

    /// Expands every run symbol back into its zeros.
    pub fn decompress(&self, w: &Str) -> Result<Str, ClosureError> {
        Ok(self.hom().apply(w)?)
    }

    /// The acceptor for the boundary-inclusive form: run symbols and
    /// non-zero symbols alternate, beginning and ending with a run
    /// symbol.
    pub fn form_dfa(&self) -> Dfa {
        let mut trans: Vec<(&str, &str, &str)> = Vec::new();
        for t in &self.theta {
            trans.push(("want-run", t.as_str(), "have-run"));
        }
        for s in self.target.symbols() {
            if !self.theta.contains(s) {
                trans.push(("have-run", s.as_str(), "want-run"));
            }
        }
        Dfa::new(
            self.target.clone(),
            ["want-run", "have-run"],
            "want-run",
            ["have-run"],
            trans,
        )
        .expect("the alternation table is deterministic")
    }
}

/// Whether a language keeps its zero runs below some length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroRunBound {
    /// No accepted string contains this many zeros in a row; the bound is
    /// the smallest such count.
    Bounded(usize),
    Unbounded,
}

/// The smallest `k` such that no accepted string contains a run of `k`
/// zeros. A run outlasting every state of the acceptor pumps, so the
/// search gives up one past the state count and reports the language
/// unbounded.
pub fn infer_zero_run_bound(m: &Dfa, zero: &Symbol) -> ZeroRunBound {
    if !m.alphabet().contains(zero) {
        return ZeroRunBound::Bounded(1);
    }
    for k in 1..=m.state_count() + 1 {
        let probe = run_probe(m.alphabet(), zero, k);
        let witness = m.intersect(&probe).expect("the probe shares the alphabet");
        if witness.is_empty() {
            return ZeroRunBound::Bounded(k);
        }
    }
    ZeroRunBound::Unbounded
}

/// An acceptor for the strings containing `k` consecutive zeros.
fn run_probe(alphabet: &Alphabet, zero: &Symbol, k: usize) -> Dfa {
    let names: Vec<String> = (0..=k).map(|i| format!("r{i}")).collect();
    let mut trans: Vec<(&str, &str, &str)> = Vec::new();
    for i in 0..=k {
        for s in alphabet.symbols() {
            let to = if i == k {
                names[k].as_str()
            } else if s == zero {
                names[i + 1].as_str()
            } else {
                names[0].as_str()
            };
            trans.push((names[i].as_str(), s.as_str(), to));
        }
    }
    Dfa::new(
        alphabet.clone(),
        names.iter().map(String::as_str),
        names[0].as_str(),
        [names[k].as_str()],
        trans,
    )
    .expect("the probe table is deterministic")
}

/// An acceptor for every string reachable from the language of `m` by
/// guided insertion and deletion of zeros.
pub fn build_id_closure_nfa(m: &Dfa, sys: &IdSystem) -> Result<Nfa, ClosureError> {
    build_id_closure_nfa_with(m, sys, &ClosureOptions::default()).map(|(nfa, _)| nfa)
}

/// Like [`build_id_closure_nfa`], also reporting counters.
///
/// Rewriting never lengthens a zero run past the longest run in the
/// language or in a guide, so a run bound for the whole closure exists
/// unless the language itself has unbounded runs. Runs are compressed to
/// single symbols, all mutually adjacent, turning insertion and deletion
/// into adjustment rewriting over the compressed alphabet; the resulting
/// automaton is translated back by expanding each run symbol.
pub fn build_id_closure_nfa_with(
    m: &Dfa,
    sys: &IdSystem,
    options: &ClosureOptions,
) -> Result<(Nfa, IdClosureStats), ClosureError> {
    if m.alphabet() != sys.alphabet() {
        return Err(ClosureError::AlphabetMismatch);
    }
    let k_language = match infer_zero_run_bound(m, sys.zero()) {
        ZeroRunBound::Bounded(k) => k,
        ZeroRunBound::Unbounded => return Err(ClosureError::UnboundedZeroRuns),
    };
    let k_guides = sys
        .guides
        .iter()
        .map(|g| longest_run(g, &sys.zero) + 1)
        .max()
        .unwrap_or(1);
    let k = k_language.max(k_guides);
    let scheme = CompressionScheme::new(&sys.alphabet, &sys.zero, k)?;
    let hom = scheme.hom();
    let lifted = inv_hom(m, &hom)?;
    let shaped = lifted.intersect(&scheme.form_dfa())?;
    let compressed: Vec<Str> =
        sys.guides.iter().map(|g| scheme.compress_guide(g)).collect::<Result<_, _>>()?;
    let rel =
        AdjustmentRelation::from_classes(scheme.target().clone(), &[scheme.theta().to_vec()])?;
    let compressed_sys = GuidedSystem::new(rel, GuideSet::new(compressed))?;
    let (inner_nfa, inner) = build_closure_nfa_with(&shaped, &compressed_sys, options)?;
    let nfa = hom_image(&inner_nfa, &hom)?;
    Ok((nfa, IdClosureStats { k, k_language, k_guides, inner }))
}

fn longest_run(w: &Str, zero: &Symbol) -> usize {
    let mut best = 0;
    let mut run = 0;
    for s in w.iter() {
        if s == zero {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// Brute-force counterpart of [`build_id_closure_nfa`]. A result of
/// length `n` keeps the non-zero symbols of its base string, so once the
/// language bounds runs by `k - 1` the base fits in
/// `n + (n + 1) * (k - 1)` symbols and enumerating up to that length
/// finds every base. Results are sorted shortest first.
pub fn oracle_id_closure_upto(
    m: &Dfa,
    sys: &IdSystem,
    max_len: usize,
) -> Result<Vec<Str>, ClosureError> {
    if m.alphabet() != sys.alphabet() {
        return Err(ClosureError::AlphabetMismatch);
    }
    let k = match infer_zero_run_bound(m, sys.zero()) {
        ZeroRunBound::Bounded(k) => k,
        ZeroRunBound::Unbounded => return Err(ClosureError::UnboundedZeroRuns),
    };
    let bound = max_len + (max_len + 1) * (k - 1);
    let mut out: BTreeSet<Str> = BTreeSet::new();
    for u in m.enumerate_upto(bound) {
        // A base the search already produced contributes nothing new: its
        // closure is contained in the closure that produced it.
        if u.len() <= max_len && out.contains(&u) {
            continue;
        }
        for v in id_closure(&u, &sys.guides, &sys.zero)? {
            if v.len() <= max_len {
                out.insert(v);
            }
        }
    }
    let mut list: Vec<Str> = out.into_iter().collect();
    sys.alphabet().sort_strings(&mut list);
    Ok(list)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureError {
    AlphabetMismatch,
    MissingZero,
    UnexpectedRelation,
    ZeroOutsideAlphabet { zero: Symbol },
    ForeignSymbol { symbol: String },
    StateCapExceeded { cap: usize },
    UnboundedZeroRuns,
    ZeroRunTooLong { run: usize, bound: usize },
    GuideBoundaryZero { guide: Str },
    Adjustment(AdjustmentError),
    Guides(GuideError),
    IdRewrite(IdError),
    Rewrite(RewriteError),
    Slice(SliceError),
    Automaton(AutomatonError),
}

impl fmt::Display for ClosureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureError::AlphabetMismatch => {
                write!(f, "the acceptor and the system use different alphabets")
            }
            ClosureError::MissingZero => {
                write!(f, "the definition does not declare a zero symbol")
            }
            ClosureError::UnexpectedRelation => write!(
                f,
                "class and pair lines have no meaning for insertion/deletion rewriting"
            ),
            ClosureError::ZeroOutsideAlphabet { zero } => {
                write!(f, "zero symbol `{zero}` is not in the alphabet")
            }
            ClosureError::ForeignSymbol { symbol } => {
                write!(f, "symbol `{symbol}` is not in the alphabet")
            }
            ClosureError::StateCapExceeded { cap } => {
                write!(f, "the construction exceeded the cap of {cap} states")
            }
            ClosureError::UnboundedZeroRuns => {
                write!(f, "the language allows arbitrarily long zero runs")
            }
            ClosureError::ZeroRunTooLong { run, bound } => {
                write!(f, "a run of {run} zeros cannot be compressed under the bound {bound}")
            }
            ClosureError::GuideBoundaryZero { guide } => {
                write!(f, "guide `{guide}` begins or ends with the zero symbol")
            }
            ClosureError::Adjustment(e) => e.fmt(f),
            ClosureError::Guides(e) => e.fmt(f),
            ClosureError::IdRewrite(e) => e.fmt(f),
            ClosureError::Rewrite(e) => e.fmt(f),
            ClosureError::Slice(e) => e.fmt(f),
            ClosureError::Automaton(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ClosureError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            ClosureError::Adjustment(e) => Some(e),
            ClosureError::Guides(e) => Some(e),
            ClosureError::IdRewrite(e) => Some(e),
            ClosureError::Rewrite(e) => Some(e),
            ClosureError::Slice(e) => Some(e),
            ClosureError::Automaton(e) => Some(e),
            _ => None,
        }
    }
}

impl From<AdjustmentError> for ClosureError {
    fn from(e: AdjustmentError) -> Self {
        ClosureError::Adjustment(e)
    }
}

impl From<GuideError> for ClosureError {
    fn from(e: GuideError) -> Self {
        ClosureError::Guides(e)
    }
}

impl From<IdError> for ClosureError {
    fn from(e: IdError) -> Self {
        ClosureError::IdRewrite(e)
    }
}

impl From<RewriteError> for ClosureError {
    fn from(e: RewriteError) -> Self {
        ClosureError::Rewrite(e)
    }
}

impl From<SliceError> for ClosureError {
    fn from(e: SliceError) -> Self {
        ClosureError::Slice(e)
    }
}

impl From<AutomatonError> for ClosureError {
    fn from(e: AutomatonError) -> Self {
        ClosureError::Automaton(e)
    }
}

#[cfg(test)]
mod tests {
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    use super::*;

    fn sym(token: &str) -> Symbol {
        Symbol::new(token).unwrap()
    }

    fn st(al: &Alphabet, text: &str) -> Str {
        al.parse_chars(text).unwrap()
    }

    fn strings(al: &Alphabet, texts: &[&str]) -> Vec<Str> {
        texts.iter().map(|t| st(al, t)).collect()
    }

    fn window_system() -> (Alphabet, GuidedSystem) {
        let al = Alphabet::parse("a b c").unwrap();
        let rel = AdjustmentRelation::from_classes(
            al.clone(),
            &[vec![sym("a"), sym("b")], vec![sym("c")]],
        )
        .unwrap();
        let guides = GuideSet::new(vec![st(&al, "bb")]);
        (al.clone(), GuidedSystem::new(rel, guides).unwrap())
    }

    #[test]
    fn closure_automaton_matches_the_search() {
        let (al, sys) = window_system();
        let m = Dfa::single_string(al.clone(), &st(&al, "aaacaa")).unwrap();
        let nfa = build_closure_nfa(&m, &sys).unwrap();
        let reachable = oracle_closure_upto(&m, &sys, 6).unwrap();
        let expected = {
            let mut v = strings(
                &al,
                &[
                    "aaacaa", "bbacaa", "abbcaa", "aaacbb", "bbbcaa", "abbcbb", "bbacbb",
                    "bbbcbb",
                ],
            );
            al.sort_strings(&mut v);
            v
        };
        assert_eq!(reachable, expected);
        assert_eq!(nfa.enumerate_upto(6), expected);
        assert!(nfa.accepts(&st(&al, "bbbcbb")));
        assert!(!nfa.accepts(&st(&al, "aacaaa")));
        assert!(!nfa.accepts(&st(&al, "aaacab")));
    }

    #[test]
    fn empty_language_closes_to_nothing() {
        let (al, sys) = window_system();
        let m = Dfa::new(al.clone(), ["d"], "d", [] as [&str; 0], []).unwrap();
        let (nfa, stats) = build_closure_nfa_with(&m, &sys, &ClosureOptions::default()).unwrap();
        assert!(nfa.enumerate_upto(4).is_empty());
        assert_eq!(stats.states, 1);
        assert_eq!(stats.pruned_states, 2);
    }

    #[test]
    fn empty_string_passes_through_untouched() {
        let (al, sys) = window_system();
        let m = Dfa::new(al.clone(), ["e"], "e", ["e"], []).unwrap();
        let nfa = build_closure_nfa(&m, &sys).unwrap();
        assert_eq!(nfa.enumerate_upto(2), vec![Str::empty()]);
    }

    #[test]
    fn state_cap_stops_the_walk() {
        let (al, sys) = window_system();
        let m = Dfa::single_string(al.clone(), &st(&al, "aaacaa")).unwrap();
        let options = ClosureOptions { state_cap: 3 };
        assert_eq!(
            build_closure_nfa_with(&m, &sys, &options).map(|_| ()),
            Err(ClosureError::StateCapExceeded { cap: 3 })
        );
    }

    #[test]
    fn counters_reflect_the_walk() {
        let (al, sys) = window_system();
        let m = Dfa::single_string(al.clone(), &st(&al, "aaacaa")).unwrap();
        let (nfa, stats) = build_closure_nfa_with(&m, &sys, &ClosureOptions::default()).unwrap();
        assert_eq!(stats.states, nfa.state_names().len());
        assert!(stats.slices >= 2);
        assert!(stats.transitions > 0);
        assert_eq!(stats.pruned_states, 1);
    }

    #[test]
    fn definitions_reject_bad_relations() {
        let def = SystemDef::parse("alphabet: a b\npair: a b\npair: b a\nguide: a\n").unwrap();
        assert!(matches!(
            GuidedSystem::from_def(&def),
            Err(ClosureError::Adjustment(AdjustmentError::NotReflexive { .. }))
        ));
    }

    #[test]
    fn id_definitions_need_a_zero_and_no_relation() {
        let def = SystemDef::parse("alphabet: a 0\nguide: a 0 a\n").unwrap();
        assert_eq!(IdSystem::from_def(&def).map(|_| ()), Err(ClosureError::MissingZero));
        let def =
            SystemDef::parse("alphabet: a b 0\nzero: 0\nclass: a b\nguide: a 0 a\n").unwrap();
        assert_eq!(IdSystem::from_def(&def).map(|_| ()), Err(ClosureError::UnexpectedRelation));
        let def = SystemDef::parse("alphabet: a 0\nzero: 0\nguide: 0 a\n").unwrap();
        assert!(matches!(
            IdSystem::from_def(&def),
            Err(ClosureError::IdRewrite(IdError::GuideNotInForm { .. }))
        ));
    }

    #[test]
    fn string_compression_round_trips() {
        let al = Alphabet::parse("0 1 2 3").unwrap();
        let scheme = CompressionScheme::new(&al, &sym("0"), 4).unwrap();
        let w = st(&al, "10023");
        let compressed = scheme.compress_string(&w).unwrap();
        assert_eq!(compressed, scheme.target().parse_str("0_0 1 0_2 2 0_0 3 0_0").unwrap());
        assert_eq!(scheme.decompress(&compressed).unwrap(), w);
        assert_eq!(
            scheme.compress_string(&Str::empty()).unwrap(),
            scheme.target().parse_str("0_0").unwrap()
        );
        assert_eq!(
            scheme.interior(&w).unwrap(),
            scheme.target().parse_str("1 0_2 2 0_0 3").unwrap()
        );
        assert_eq!(scheme.interior(&st(&al, "00")).unwrap(), Str::empty());
        let tight = CompressionScheme::new(&al, &sym("0"), 3).unwrap();
        assert_eq!(
            tight.compress_string(&st(&al, "1000")),
            Err(ClosureError::ZeroRunTooLong { run: 3, bound: 3 })
        );
    }

    #[test]
    fn guide_compression_keeps_the_ends_bare() {
        let al = Alphabet::parse("a b c 0").unwrap();
        let scheme = CompressionScheme::new(&al, &sym("0"), 4).unwrap();
        assert_eq!(
            scheme.compress_guide(&st(&al, "bcb000ab0c")).unwrap(),
            scheme.target().parse_str("b 0_0 c 0_0 b 0_3 a 0_0 b 0_1 c").unwrap()
        );
        assert_eq!(
            scheme.compress_guide(&st(&al, "ab")).unwrap(),
            scheme.target().parse_str("a 0_0 b").unwrap()
        );
        assert_eq!(
            scheme.compress_guide(&st(&al, "a")).unwrap(),
            scheme.target().parse_str("a").unwrap()
        );
        assert_eq!(
            scheme.compress_guide(&st(&al, "0ab")),
            Err(ClosureError::GuideBoundaryZero { guide: st(&al, "0ab") })
        );
    }

    #[test]
    fn run_names_avoid_the_source_alphabet() {
        let al = Alphabet::parse("0 a 0_0").unwrap();
        let scheme = CompressionScheme::new(&al, &sym("0"), 1).unwrap();
        assert_eq!(scheme.theta()[0].as_str(), "_0_0");
    }

    #[test]
    fn the_form_acceptor_wants_alternation() {
        let al = Alphabet::parse("a 0").unwrap();
        let scheme = CompressionScheme::new(&al, &sym("0"), 2).unwrap();
        let form = scheme.form_dfa();
        let t = scheme.target();
        assert!(form.accepts(&t.parse_str("0_0").unwrap()));
        assert!(form.accepts(&t.parse_str("0_1 a 0_0").unwrap()));
        assert!(!form.accepts(&Str::empty()));
        assert!(!form.accepts(&t.parse_str("a").unwrap()));
        assert!(!form.accepts(&t.parse_str("0_0 0_1").unwrap()));
        assert!(!form.accepts(&t.parse_str("0_0 a").unwrap()));
    }

    #[test]
    fn run_bounds_come_from_the_acceptor() {
        let al = Alphabet::parse("a b").unwrap();
        let m = Dfa::new(al.clone(), ["s"], "s", ["s"], [("s", "a", "s"), ("s", "b", "s")])
            .unwrap();
        assert_eq!(infer_zero_run_bound(&m, &sym("0")), ZeroRunBound::Bounded(1));

        let al = Alphabet::parse("a b 0").unwrap();
        let m = Dfa::single_string(al.clone(), &st(&al, "a00b")).unwrap();
        assert_eq!(infer_zero_run_bound(&m, &sym("0")), ZeroRunBound::Bounded(3));

        let m = Dfa::new(
            al.clone(),
            ["s0", "s1", "s2"],
            "s0",
            ["s2"],
            [("s0", "a", "s1"), ("s1", "0", "s1"), ("s1", "b", "s2")],
        )
        .unwrap();
        assert_eq!(infer_zero_run_bound(&m, &sym("0")), ZeroRunBound::Unbounded);
    }

    fn id_fixture() -> (Alphabet, IdSystem, Dfa) {
        let al = Alphabet::parse("a 0").unwrap();
        let guides = GuideSet::new(vec![st(&al, "aa0a"), st(&al, "a0aa")]);
        let sys = IdSystem::new(al.clone(), guides, sym("0")).unwrap();
        let m = Dfa::single_string(al.clone(), &st(&al, "aaa")).unwrap();
        (al, sys, m)
    }

    #[test]
    fn id_pipeline_matches_the_search() {
        let (al, sys, m) = id_fixture();
        let (nfa, stats) =
            build_id_closure_nfa_with(&m, &sys, &ClosureOptions::default()).unwrap();
        assert_eq!(stats.k_language, 1);
        assert_eq!(stats.k_guides, 2);
        assert_eq!(stats.k, 2);
        let reachable = oracle_id_closure_upto(&m, &sys, 5).unwrap();
        let expected = strings(&al, &["aaa", "aa0a", "a0aa"]);
        assert_eq!(reachable, expected);
        assert_eq!(nfa.enumerate_upto(5), expected);
        assert!(nfa.accepts(&st(&al, "aa0a")));
        assert!(!nfa.accepts(&st(&al, "a00a")));
        assert!(!nfa.accepts(&st(&al, "aa")));
    }

    #[test]
    fn id_pipeline_without_guides_keeps_the_language() {
        let (al, _, m) = id_fixture();
        let sys = IdSystem::new(al.clone(), GuideSet::empty(), sym("0")).unwrap();
        let nfa = build_id_closure_nfa(&m, &sys).unwrap();
        assert_eq!(nfa.enumerate_upto(6), strings(&al, &["aaa"]));
    }

    #[test]
    fn unbounded_runs_stop_the_pipeline() {
        let al = Alphabet::parse("a b 0").unwrap();
        let m = Dfa::new(
            al.clone(),
            ["s0", "s1", "s2"],
            "s0",
            ["s2"],
            [("s0", "a", "s1"), ("s1", "0", "s1"), ("s1", "b", "s2")],
        )
        .unwrap();
        let sys = IdSystem::new(al.clone(), GuideSet::empty(), sym("0")).unwrap();
        assert_eq!(
            build_id_closure_nfa(&m, &sys).map(|_| ()),
            Err(ClosureError::UnboundedZeroRuns)
        );
        assert_eq!(
            oracle_id_closure_upto(&m, &sys, 4),
            Err(ClosureError::UnboundedZeroRuns)
        );
    }

    #[test]
    fn errors_name_the_obstacle() {
        assert_eq!(
            ClosureError::StateCapExceeded { cap: 7 }.to_string(),
            "the construction exceeded the cap of 7 states"
        );
        assert_eq!(
            ClosureError::ZeroRunTooLong { run: 5, bound: 3 }.to_string(),
            "a run of 5 zeros cannot be compressed under the bound 3"
        );
        assert_eq!(
            ClosureError::UnboundedZeroRuns.to_string(),
            "the language allows arbitrarily long zero runs"
        );
    }
}
