//! Regular expressions over symbol tokens.
//!
//! The dialect: tokens are alphabet symbols separated by whitespace or by
//! the punctuation `( ) | *`; juxtaposition concatenates, `|` alternates,
//! a postfix `*` repeats, and the literal `~e~` stands for the empty
//! string. `(a b)* | c` needs no spaces around the punctuation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Nfa;
use crate::symbols::{Alphabet, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegexError {
    /// 1-based character position in the pattern.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for RegexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pattern position {}: {}", self.position, self.message)
    }
}

impl core::error::Error for RegexError {}

fn err<T>(position: usize, message: &str) -> Result<T, RegexError> {
    Err(RegexError { position, message: message.to_string() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Bar,
    Star,
    Eps,
    Lit(Symbol),
}

struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(pattern: &str, alphabet: &Alphabet) -> Result<Vec<Spanned>, RegexError> {
    let chars: Vec<char> = pattern.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let punct = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '|' => Some(Tok::Bar),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(tok) = punct {
            toks.push(Spanned { tok, pos });
            i += 1;
            continue;
        }
        let mut token = String::new();
        while i < chars.len() && !chars[i].is_whitespace() && !"()|*".contains(chars[i]) {
            token.push(chars[i]);
            i += 1;
        }
        if token == "~e~" {
            toks.push(Spanned { tok: Tok::Eps, pos });
            continue;
        }
        let known = Symbol::new(&token).ok().filter(|sym| alphabet.contains(sym));
        match known {
            Some(sym) => toks.push(Spanned { tok: Tok::Lit(sym), pos }),
            None => {
                return err(pos, &format!("symbol `{token}` is not in the alphabet"));
            }
        }
    }
    Ok(toks)
}

/// A fragment under construction: its entry and exit state.
type Frag = (usize, usize);

struct Parser<'a> {
    toks: &'a [Spanned],
    next: usize,
    end_pos: usize,
    count: usize,
    sym_edges: Vec<(usize, usize, usize)>,
    eps_edges: Vec<(usize, usize)>,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.next).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.next).map_or(self.end_pos, |s| s.pos)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.next).map(|s| &s.tok);
        self.next += 1;
        t
    }

    fn fresh(&mut self) -> usize {
        self.count += 1;
        self.count - 1
    }

    fn alternation(&mut self) -> Result<Frag, RegexError> {
        let mut branches = vec![self.concatenation()?];
        while self.peek() == Some(&Tok::Bar) {
            self.bump();
            branches.push(self.concatenation()?);
        }
        if branches.len() == 1 {
            return Ok(branches.pop().expect("one branch"));
        }
        let entry = self.fresh();
        let exit = self.fresh();
        for (s, t) in branches {
            self.eps_edges.push((entry, s));
            self.eps_edges.push((t, exit));
        }
        Ok((entry, exit))
    }

    fn concatenation(&mut self) -> Result<Frag, RegexError> {
        let mut frags = Vec::new();
        while matches!(self.peek(), Some(Tok::LParen | Tok::Eps | Tok::Lit(_))) {
            frags.push(self.repetition()?);
        }
        if frags.is_empty() {
            return err(self.pos(), "expected a symbol, `~e~`, or `(`");
        }
        let mut iter = frags.into_iter();
        let (entry, mut exit) = iter.next().expect("at least one fragment");
        for (s, t) in iter {
            self.eps_edges.push((exit, s));
            exit = t;
        }
        Ok((entry, exit))
    }

    fn repetition(&mut self) -> Result<Frag, RegexError> {
        let mut frag = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let entry = self.fresh();
            let exit = self.fresh();
            self.eps_edges.push((entry, frag.0));
            self.eps_edges.push((frag.1, exit));
            self.eps_edges.push((entry, exit));
            self.eps_edges.push((frag.1, frag.0));
            frag = (entry, exit);
        }
        Ok(frag)
    }

    fn atom(&mut self) -> Result<Frag, RegexError> {
        let pos = self.pos();
        match self.bump().cloned() {
            Some(Tok::Lit(sym)) => {
                let entry = self.fresh();
                let exit = self.fresh();
                let a = self.alphabet.index_of(&sym).expect("lexer checked the symbol");
                self.sym_edges.push((entry, a, exit));
                Ok((entry, exit))
            }
            Some(Tok::Eps) => {
                let entry = self.fresh();
                let exit = self.fresh();
                self.eps_edges.push((entry, exit));
                Ok((entry, exit))
            }
            Some(Tok::LParen) => {
                let frag = self.alternation()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(frag),
                    _ => err(pos, "unclosed group"),
                }
            }
            Some(Tok::RParen) => err(pos, "unmatched `)`"),
            Some(Tok::Bar) | Some(Tok::Star) | None => {
                err(pos, "expected a symbol, `~e~`, or `(`")
            }
        }
    }
}

/// Compiles a pattern into an automaton with one start and one accepting
/// state.
pub fn regex_to_nfa(pattern: &str, alphabet: &Alphabet) -> Result<Nfa, RegexError> {
    let toks = lex(pattern, alphabet)?;
    let end_pos = pattern.chars().count() + 1;
    let mut parser = Parser {
        toks: &toks,
        next: 0,
        end_pos,
        count: 0,
        sym_edges: Vec::new(),
        eps_edges: Vec::new(),
        alphabet,
    };
    let (start, accept) = parser.alternation()?;
    if parser.next < toks.len() {
        let pos = parser.pos();
        return match parser.peek() {
            Some(Tok::RParen) => err(pos, "unmatched `)`"),
            _ => err(pos, "expected end of pattern"),
        };
    }
    let names: Vec<String> = (0..parser.count).map(|i| format!("r{i}")).collect();
    let mut trans = vec![BTreeMap::<usize, BTreeSet<usize>>::new(); parser.count];
    for (s, a, d) in parser.sym_edges {
        trans[s].entry(a).or_default().insert(d);
    }
    let mut etrans = vec![BTreeSet::new(); parser.count];
    for (s, d) in parser.eps_edges {
        etrans[s].insert(d);
    }
    Ok(Nfa::from_parts(
        alphabet.clone(),
        names,
        start,
        BTreeSet::from([accept]),
        trans,
        etrans,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Str;

    fn abc() -> Alphabet {
        Alphabet::parse("a b c").unwrap()
    }

    fn accepts(pattern: &str, text: &str) -> bool {
        let alpha = abc();
        let nfa = regex_to_nfa(pattern, &alpha).unwrap();
        nfa.accepts(&alpha.parse_chars(text).unwrap())
    }

    #[test]
    fn precedence_star_then_concat_then_bar() {
        assert!(accepts("a b | c*", "ab"));
        assert!(accepts("a b | c*", ""));
        assert!(accepts("a b | c*", "ccc"));
        assert!(!accepts("a b | c*", "ac"));
        assert!(!accepts("a b | c*", "abc"));
    }

    #[test]
    fn groups_and_star() {
        for w in ["", "ab", "abab"] {
            assert!(accepts("(a b)*", w), "{w}");
        }
        assert!(!accepts("(a b)*", "a"));
        assert!(accepts("(a|b)* c", "abbac"));
    }

    #[test]
    fn epsilon_literal() {
        assert!(accepts("~e~ | a", ""));
        assert!(accepts("~e~ | a", "a"));
        assert!(!accepts("~e~ | a", "b"));
        assert!(accepts("a ~e~ b", "ab"));
    }

    #[test]
    fn multi_character_tokens() {
        let alpha = Alphabet::parse("0_0 x").unwrap();
        let nfa = regex_to_nfa("(0_0 x)*", &alpha).unwrap();
        let w: Str = alpha.parse_str("0_0 x 0_0 x").unwrap();
        assert!(nfa.accepts(&w));
        assert!(!nfa.accepts(&alpha.parse_str("x").unwrap()));
    }

    #[test]
    fn error_positions() {
        let alpha = abc();
        assert_eq!(regex_to_nfa("*a", &alpha).unwrap_err().position, 1);
        assert_eq!(regex_to_nfa("a | ", &alpha).unwrap_err().position, 5);
        assert_eq!(regex_to_nfa("(a", &alpha).unwrap_err().position, 1);
        assert_eq!(regex_to_nfa("a)", &alpha).unwrap_err().position, 2);
        assert_eq!(regex_to_nfa("x", &alpha).unwrap_err().position, 1);
        assert_eq!(regex_to_nfa("a xy", &alpha).unwrap_err().position, 3);
        assert!(regex_to_nfa("", &alpha).is_err());
    }

    #[test]
    fn double_star_is_allowed() {
        assert!(accepts("a**", "aaa"));
    }
}
