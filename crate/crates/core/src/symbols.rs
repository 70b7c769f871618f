//! Alphabets, symbols, strings, adjustment relations, and guide sets.
//!
//! Symbols are whitespace-free tokens rather than single characters, so
//! generated symbols such as `0_2` are first class citizens. A convenience
//! parser accepts contiguous single-character text when every alphabet
//! token is one character long.
//!
//! An adjustment relation is an equivalence on the alphabet. It is stored
//! as a partition (a class id per symbol), which makes reflexivity,
//! symmetry and transitivity true by construction. A constructor from raw
//! pairs exists, but it rejects pair sets that are not already equivalence
//! relations unless the caller explicitly opts into taking the closure.
//!
//! The module also parses the system definition text format shared by the
//! CLI and the test fixtures:
//!
//! ```text
//! # comment
//! alphabet: a b c
//! class: a b            # zero or more equivalence classes
//! guide: b b            # zero or more guides, one per line
//! zero: 0               # optional, insertion/deletion systems only
//! pair: a b             # raw adjustment pairs, alternative to class lines
//! pairs-closure: allow  # opt into closing raw pairs into an equivalence
//! ```

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A single alphabet symbol: a non-empty token without whitespace or `#`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(token: &str) -> Result<Self, SymbolError> {
        if token.is_empty() {
            return Err(SymbolError::EmptyToken);
        }
        if token.chars().any(char::is_whitespace) || token.contains('#') {
            return Err(SymbolError::BadToken(token.to_string()));
        }
        Ok(Symbol(token.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered, duplicate-free, non-empty set of symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: BTreeMap<Symbol, usize>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, SymbolError> {
        if symbols.is_empty() {
            return Err(SymbolError::EmptyAlphabet);
        }
        let mut index = BTreeMap::new();
        for (i, sym) in symbols.iter().enumerate() {
            if index.insert(sym.clone(), i).is_some() {
                return Err(SymbolError::DuplicateSymbol(sym.as_str().to_string()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Builds an alphabet from whitespace-separated tokens.
    pub fn parse(text: &str) -> Result<Self, SymbolError> {
        let symbols = text
            .split_whitespace()
            .map(Symbol::new)
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, index: usize) -> Option<&Symbol> {
        self.symbols.get(index)
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn index_of(&self, symbol: &Symbol) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Tokenizes whitespace-separated text into a string over this alphabet.
    pub fn parse_str(&self, text: &str) -> Result<Str, SymbolError> {
        let mut symbols = Vec::new();
        for token in text.split_whitespace() {
            let sym = Symbol::new(token)?;
            if !self.contains(&sym) {
                return Err(SymbolError::ForeignSymbol(token.to_string()));
            }
            symbols.push(sym);
        }
        Ok(Str::from_symbols(symbols))
    }

    /// Reads contiguous text one character per symbol, skipping whitespace.
    /// Available only when every alphabet token is a single character.
    pub fn parse_chars(&self, text: &str) -> Result<Str, SymbolError> {
        if self
            .symbols
            .iter()
            .any(|s| s.as_str().chars().count() != 1)
        {
            return Err(SymbolError::CharModeUnavailable);
        }
        let mut symbols = Vec::new();
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            let sym = Symbol::new(ch.encode_utf8(&mut [0u8; 4]))?;
            if !self.contains(&sym) {
                return Err(SymbolError::ForeignSymbol(ch.to_string()));
            }
            symbols.push(sym);
        }
        Ok(Str::from_symbols(symbols))
    }

    /// Length-then-lexicographic order, using alphabet positions for the
    /// per-symbol comparison. Symbols outside the alphabet sort last.
    pub fn cmp_strings(&self, a: &Str, b: &Str) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let ix = self.index_of(x).unwrap_or(usize::MAX);
                let iy = self.index_of(y).unwrap_or(usize::MAX);
                match ix.cmp(&iy) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }

    pub fn sort_strings(&self, strings: &mut Vec<Str>) {
        strings.sort_by(|a, b| self.cmp_strings(a, b));
    }
}

/// A finite sequence of symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Str(Vec<Symbol>);

impl Str {
    pub const fn empty() -> Self {
        Str(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Str(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Symbol> {
        self.0.get(index)
    }

    pub fn first(&self) -> Option<&Symbol> {
        self.0.first()
    }

    pub fn last(&self) -> Option<&Symbol> {
        self.0.last()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }

    /// The substring of `len` symbols starting at 0-based `start`, or None
    /// when the range leaves the string.
    pub fn substring(&self, start: usize, len: usize) -> Option<Str> {
        let end = start.checked_add(len)?;
        self.0.get(start..end).map(|s| Str(s.to_vec()))
    }

    pub fn concat(&self, other: &Str) -> Str {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Str(symbols)
    }

    /// Replaces the `len` symbols at `start` by `replacement`, or None when
    /// the range leaves the string.
    pub fn splice(&self, start: usize, len: usize, replacement: &Str) -> Option<Str> {
        let end = start.checked_add(len)?;
        if end > self.0.len() {
            return None;
        }
        let mut symbols = Vec::with_capacity(self.0.len() - len + replacement.len());
        symbols.extend_from_slice(&self.0[..start]);
        symbols.extend_from_slice(&replacement.0);
        symbols.extend_from_slice(&self.0[end..]);
        Some(Str(symbols))
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, sym) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{sym}")?;
        }
        Ok(())
    }
}

impl From<Vec<Symbol>> for Str {
    fn from(symbols: Vec<Symbol>) -> Self {
        Str(symbols)
    }
}

impl FromIterator<Symbol> for Str {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Str(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Str {
    type Item = &'a Symbol;
    type IntoIter = core::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolError {
    EmptyToken,
    BadToken(String),
    DuplicateSymbol(String),
    EmptyAlphabet,
    ForeignSymbol(String),
    CharModeUnavailable,
}

impl fmt::Display for SymbolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolError::EmptyToken => write!(f, "empty symbol token"),
            SymbolError::BadToken(t) => {
                write!(f, "token `{t}` contains whitespace or `#`")
            }
            SymbolError::DuplicateSymbol(t) => write!(f, "duplicate symbol `{t}`"),
            SymbolError::EmptyAlphabet => write!(f, "alphabet must not be empty"),
            SymbolError::ForeignSymbol(t) => write!(f, "symbol `{t}` is not in the alphabet"),
            SymbolError::CharModeUnavailable => {
                write!(f, "character mode needs single-character alphabet tokens")
            }
        }
    }
}

impl core::error::Error for SymbolError {}

/// An equivalence relation on an alphabet, stored as a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentRelation {
    alphabet: Alphabet,
    class_of: Vec<u32>,
}

impl AdjustmentRelation {
    /// The finest relation: every symbol is only adjacent to itself.
    pub fn identity(alphabet: Alphabet) -> Self {
        let class_of = (0..alphabet.len() as u32).collect();
        AdjustmentRelation { alphabet, class_of }
    }

    /// Builds the partition from explicit classes. Symbols not mentioned
    /// become singleton classes; mentioning a symbol twice is an error.
    pub fn from_classes(
        alphabet: Alphabet,
        classes: &[Vec<Symbol>],
    ) -> Result<Self, AdjustmentError> {
        let mut assigned: Vec<Option<u32>> = vec![None; alphabet.len()];
        for (cid, class) in classes.iter().enumerate() {
            for sym in class {
                let i = alphabet
                    .index_of(sym)
                    .ok_or_else(|| AdjustmentError::ForeignSymbol(sym.as_str().to_string()))?;
                if assigned[i].is_some() {
                    return Err(AdjustmentError::OverlappingClasses {
                        symbol: sym.as_str().to_string(),
                    });
                }
                assigned[i] = Some(cid as u32);
            }
        }
        let mut next = classes.len() as u32;
        let raw: Vec<u32> = assigned
            .into_iter()
            .map(|slot| {
                slot.unwrap_or_else(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Ok(Self::renumbered(alphabet, &raw))
    }

    /// Builds the relation from raw pairs. Without `take_closure` the pair
    /// set must already be an equivalence relation on the whole alphabet;
    /// with it, the reflexive-symmetric-transitive closure is taken.
    pub fn from_pairs(
        alphabet: Alphabet,
        pairs: &[(Symbol, Symbol)],
        take_closure: bool,
    ) -> Result<Self, AdjustmentError> {
        let n = alphabet.len();
        let mut relation = BTreeSet::new();
        for (a, b) in pairs {
            let ia = alphabet
                .index_of(a)
                .ok_or_else(|| AdjustmentError::ForeignSymbol(a.as_str().to_string()))?;
            let ib = alphabet
                .index_of(b)
                .ok_or_else(|| AdjustmentError::ForeignSymbol(b.as_str().to_string()))?;
            relation.insert((ia, ib));
        }
        if !take_closure {
            let name = |i: usize| alphabet.symbols()[i].as_str().to_string();
            for i in 0..n {
                if !relation.contains(&(i, i)) {
                    return Err(AdjustmentError::NotReflexive { symbol: name(i) });
                }
            }
            for &(a, b) in &relation {
                if !relation.contains(&(b, a)) {
                    return Err(AdjustmentError::NotSymmetric { a: name(a), b: name(b) });
                }
            }
            for &(a, b) in &relation {
                for &(b2, c) in &relation {
                    if b == b2 && !relation.contains(&(a, c)) {
                        return Err(AdjustmentError::NotTransitive {
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        // Union-find over symbol indices gives the partition of the closure;
        // when the input already was an equivalence this is the input itself.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &relation {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let raw: Vec<u32> = (0..n).map(|i| find(&mut parent, i) as u32).collect();
        Ok(Self::renumbered(alphabet, &raw))
    }

    /// Canonical class ids: numbered by first occurrence in alphabet order,
    /// so equal partitions compare equal regardless of how they were built.
    fn renumbered(alphabet: Alphabet, raw: &[u32]) -> Self {
        let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(raw.len());
        for &id in raw {
            let next = rename.len() as u32;
            class_of.push(*rename.entry(id).or_insert(next));
        }
        AdjustmentRelation { alphabet, class_of }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn class_id(&self, symbol: &Symbol) -> Result<u32, AdjustmentError> {
        self.alphabet
            .index_of(symbol)
            .map(|i| self.class_of[i])
            .ok_or_else(|| AdjustmentError::ForeignSymbol(symbol.as_str().to_string()))
    }

    pub fn adjusts(&self, a: &Symbol, b: &Symbol) -> Result<bool, AdjustmentError> {
        Ok(self.class_id(a)? == self.class_id(b)?)
    }

    /// The element-wise lift: true iff the strings have equal length and
    /// corresponding symbols are adjacent.
    pub fn lift_equiv(&self, u: &Str, v: &Str) -> Result<bool, AdjustmentError> {
        let cu = u
            .iter()
            .map(|s| self.class_id(s))
            .collect::<Result<Vec<_>, _>>()?;
        let cv = v
            .iter()
            .map(|s| self.class_id(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(cu == cv)
    }

    /// The classes as symbol lists, ordered by first member; members keep
    /// alphabet order.
    pub fn classes(&self) -> Vec<Vec<Symbol>> {
        let count = self.class_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut classes = vec![Vec::new(); count as usize];
        for (i, &cid) in self.class_of.iter().enumerate() {
            classes[cid as usize].push(self.alphabet.symbols()[i].clone());
        }
        classes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjustmentError {
    ForeignSymbol(String),
    OverlappingClasses { symbol: String },
    NotReflexive { symbol: String },
    NotSymmetric { a: String, b: String },
    NotTransitive { a: String, b: String, c: String },
}

impl fmt::Display for AdjustmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjustmentError::ForeignSymbol(t) => {
                write!(f, "symbol `{t}` is not in the alphabet")
            }
            AdjustmentError::OverlappingClasses { symbol } => {
                write!(f, "symbol `{symbol}` appears in more than one class")
            }
            AdjustmentError::NotReflexive { symbol } => write!(
                f,
                "adjustment pairs are not an equivalence relation: missing reflexive pair ({symbol}, {symbol})"
            ),
            AdjustmentError::NotSymmetric { a, b } => write!(
                f,
                "adjustment pairs are not an equivalence relation: ({a}, {b}) given without ({b}, {a})"
            ),
            AdjustmentError::NotTransitive { a, b, c } => write!(
                f,
                "adjustment pairs are not an equivalence relation: ({a}, {b}) and ({b}, {c}) given without ({a}, {c})"
            ),
        }
    }
}

impl core::error::Error for AdjustmentError {}

/// An ordered list of guide strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GuideSet {
    guides: Vec<Str>,
}

impl GuideSet {
    pub fn new(guides: Vec<Str>) -> Self {
        GuideSet { guides }
    }

    pub fn empty() -> Self {
        GuideSet { guides: Vec::new() }
    }

    /// Checks that every guide is non-empty and drawn from the alphabet.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), GuideError> {
        for (index, guide) in self.guides.iter().enumerate() {
            if guide.is_empty() {
                return Err(GuideError::EmptyGuide { index });
            }
            for sym in guide.iter() {
                if !alphabet.contains(sym) {
                    return Err(GuideError::ForeignSymbol {
                        index,
                        symbol: sym.as_str().to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn guides(&self) -> &[Str] {
        &self.guides
    }

    pub fn len(&self) -> usize {
        self.guides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guides.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Str> {
        self.guides.get(index)
    }

    /// The first index holding this guide string.
    pub fn index_of(&self, guide: &Str) -> Option<usize> {
        self.guides.iter().position(|g| g == guide)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Str> {
        self.guides.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuideError {
    EmptyGuide { index: usize },
    ForeignSymbol { index: usize, symbol: String },
}

impl fmt::Display for GuideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuideError::EmptyGuide { index } => {
                write!(f, "guide {}: empty guide", index + 1)
            }
            GuideError::ForeignSymbol { index, symbol } => {
                write!(f, "guide {}: foreign symbol `{symbol}`", index + 1)
            }
        }
    }
}

impl core::error::Error for GuideError {}

/// A parsed system definition file.
#[derive(Debug, Clone)]
pub struct SystemDef {
    pub alphabet: Alphabet,
    pub classes: Vec<Vec<Symbol>>,
    pub pairs: Vec<(Symbol, Symbol)>,
    pub pairs_closure: bool,
    pub guides: GuideSet,
    pub zero: Option<Symbol>,
}

impl SystemDef {
    pub fn parse(text: &str) -> Result<Self, SystemParseError> {
        let fail = |line: usize, message: String| Err(SystemParseError { line, message });

        let mut alphabet: Option<(usize, Vec<String>)> = None;
        let mut class_lines: Vec<(usize, Vec<String>)> = Vec::new();
        let mut pair_lines: Vec<(usize, Vec<String>)> = Vec::new();
        let mut guide_lines: Vec<(usize, Vec<String>)> = Vec::new();
        let mut zero_line: Option<(usize, Vec<String>)> = None;
        let mut pairs_closure = false;

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
                "alphabet" => {
                    if alphabet.is_some() {
                        return fail(line_no, "duplicate alphabet line".to_string());
                    }
                    alphabet = Some((line_no, tokens));
                }
                "class" => {
                    if tokens.is_empty() {
                        return fail(line_no, "class line without symbols".to_string());
                    }
                    class_lines.push((line_no, tokens));
                }
                "pair" => {
                    if tokens.len() != 2 {
                        return fail(line_no, "pair line needs exactly two symbols".to_string());
                    }
                    pair_lines.push((line_no, tokens));
                }
                "guide" => {
                    if tokens.is_empty() {
                        return fail(line_no, "empty guide".to_string());
                    }
                    guide_lines.push((line_no, tokens));
                }
                "zero" => {
                    if zero_line.is_some() {
                        return fail(line_no, "duplicate zero line".to_string());
                    }
                    if tokens.len() != 1 {
                        return fail(line_no, "zero line needs exactly one symbol".to_string());
                    }
                    zero_line = Some((line_no, tokens));
                }
                "pairs-closure" => {
                    if tokens != ["allow"] {
                        return fail(line_no, "expected `pairs-closure: allow`".to_string());
                    }
                    pairs_closure = true;
                }
                other => {
                    return fail(line_no, alloc::format!("unknown key `{other}`"));
                }
            }
        }

        let Some((alpha_line, alpha_tokens)) = alphabet else {
            return fail(0, "missing alphabet line".to_string());
        };
        let alphabet = Alphabet::parse(&alpha_tokens.join(" "))
            .map_err(|e| SystemParseError { line: alpha_line, message: e.to_string() })?;
        if !class_lines.is_empty() && !pair_lines.is_empty() {
            let line = pair_lines[0].0.max(class_lines[0].0);
            return fail(
                line,
                "use either class lines or pair lines, not both".to_string(),
            );
        }

        let resolve = |line: usize, token: &str| -> Result<Symbol, SystemParseError> {
            let sym = Symbol::new(token)
                .map_err(|e| SystemParseError { line, message: e.to_string() })?;
            if !alphabet.contains(&sym) {
                return Err(SystemParseError {
                    line,
                    message: alloc::format!("symbol `{token}` is not in the alphabet"),
                });
            }
            Ok(sym)
        };

        let mut classes = Vec::new();
        for (line, tokens) in &class_lines {
            let class = tokens
                .iter()
                .map(|t| resolve(*line, t))
                .collect::<Result<Vec<_>, _>>()?;
            classes.push(class);
        }
        let mut pairs = Vec::new();
        for (line, tokens) in &pair_lines {
            pairs.push((resolve(*line, &tokens[0])?, resolve(*line, &tokens[1])?));
        }
        let mut guides = Vec::new();
        for (line, tokens) in &guide_lines {
            let guide = tokens
                .iter()
                .map(|t| resolve(*line, t))
                .collect::<Result<Str, _>>()?;
            guides.push(guide);
        }
        let zero = match zero_line {
            Some((line, tokens)) => Some(resolve(line, &tokens[0])?),
            None => None,
        };

        Ok(SystemDef {
            alphabet,
            classes,
            pairs,
            pairs_closure,
            guides: GuideSet::new(guides),
            zero,
        })
    }

    /// Builds the adjustment relation declared by the class or pair lines.
    pub fn adjustment(&self) -> Result<AdjustmentRelation, AdjustmentError> {
        if self.pairs.is_empty() {
            AdjustmentRelation::from_classes(self.alphabet.clone(), &self.classes)
        } else {
            AdjustmentRelation::from_pairs(self.alphabet.clone(), &self.pairs, self.pairs_closure)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemParseError {
    /// 1-based line number; 0 when the whole file is at fault.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SystemParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "system definition: {}", self.message)
        } else {
            write!(f, "system definition line {}: {}", self.line, self.message)
        }
    }
}

impl core::error::Error for SystemParseError {}
