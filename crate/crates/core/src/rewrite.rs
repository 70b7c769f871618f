//! The two rewriting engines.
//!
//! The adjustment engine stamps a guide over a window of the same length
//! whenever window and guide are adjacent symbol by symbol, so rewriting
//! never changes a string's length or its class vector. The
//! insertion/deletion engine instead replaces a window by a guide with the
//! same zero-erasure; zero symbols may appear or vanish, but both the
//! window and the guide must begin and end with non-zero symbols, which
//! keeps the erasure of the whole string invariant.
//!
//! Rewrite sequences record steps as (guide, position) pairs. Because
//! steps preserve adjustment classes, a sequence is valid on a base string
//! exactly when each step's window in the base itself is adjacent to its
//! guide; [`validate_rewrite_sequence`] checks that form, while
//! [`apply_rewrite_sequence`] runs the steps and keeps every intermediate
//! string.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use crate::symbols::{AdjustmentError, AdjustmentRelation, GuideSet, Str, Symbol};

/// A rewrite step: stamp `guide` over the window starting at `position`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GuidePos {
    pub guide: Str,
    pub position: usize,
}

impl GuidePos {
    pub fn new(guide: Str, position: usize) -> Self {
        GuidePos { guide, position }
    }
}

impl fmt::Display for GuidePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.guide, self.position)
    }
}

/// An ordered list of rewrite steps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewriteSequence(Vec<GuidePos>);

impl RewriteSequence {
    pub fn new(steps: Vec<GuidePos>) -> Self {
        RewriteSequence(steps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&GuidePos> {
        self.0.get(index)
    }

    pub fn steps(&self) -> &[GuidePos] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, GuidePos> {
        self.0.iter()
    }
}

impl From<Vec<GuidePos>> for RewriteSequence {
    fn from(steps: Vec<GuidePos>) -> Self {
        RewriteSequence(steps)
    }
}

impl FromIterator<GuidePos> for RewriteSequence {
    fn from_iter<I: IntoIterator<Item = GuidePos>>(iter: I) -> Self {
        RewriteSequence(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteError {
    OutOfRange {
        position: usize,
        guide_len: usize,
        string_len: usize,
    },
    RedexMismatch {
        position: usize,
    },
    UnknownGuide {
        guide: Str,
    },
    Adjustment(AdjustmentError),
}

impl fmt::Display for RewriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteError::OutOfRange { position, guide_len, string_len } => write!(
                f,
                "window of {guide_len} at position {position} leaves the string (length {string_len})"
            ),
            RewriteError::RedexMismatch { position } => {
                write!(f, "window at position {position} is not adjacent to the guide")
            }
            RewriteError::UnknownGuide { guide } => {
                write!(f, "guide `{guide}` is not in the guide set")
            }
            RewriteError::Adjustment(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for RewriteError {}

impl From<AdjustmentError> for RewriteError {
    fn from(e: AdjustmentError) -> Self {
        RewriteError::Adjustment(e)
    }
}

/// An error at step `step` (1-based) of a rewrite sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceError {
    pub step: usize,
    pub error: RewriteError,
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.error)
    }
}

impl core::error::Error for SequenceError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Applies a single step, failing when the window leaves the string or is
/// not adjacent to the guide.
pub fn apply_step(
    u: &Str,
    step: &GuidePos,
    rel: &AdjustmentRelation,
) -> Result<Str, RewriteError> {
    let g = &step.guide;
    let Some(redex) = u.substring(step.position, g.len()) else {
        return Err(RewriteError::OutOfRange {
            position: step.position,
            guide_len: g.len(),
            string_len: u.len(),
        });
    };
    if !rel.lift_equiv(&redex, g)? {
        return Err(RewriteError::RedexMismatch { position: step.position });
    }
    Ok(u
        .splice(step.position, g.len(), g)
        .expect("window already checked against the string"))
}

/// All steps applicable to `u`, ordered by position and then by the
/// guide's index in the set.
pub fn applicable_steps(
    u: &Str,
    guides: &GuideSet,
    rel: &AdjustmentRelation,
) -> Result<Vec<GuidePos>, RewriteError> {
    let mut steps = Vec::new();
    for p in 0..=u.len() {
        for g in guides.iter() {
            let Some(redex) = u.substring(p, g.len()) else {
                continue;
            };
            if rel.lift_equiv(&redex, g)? {
                steps.push(GuidePos::new(g.clone(), p));
            }
        }
    }
    Ok(steps)
}

/// Every string reachable from `u` by adjustment rewriting. Steps preserve
/// length, so the search always terminates.
pub fn closure_of_string(
    u: &Str,
    guides: &GuideSet,
    rel: &AdjustmentRelation,
) -> Result<BTreeSet<Str>, RewriteError> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(w) = queue.pop_front() {
        for step in applicable_steps(&w, guides, rel)? {
            let v = apply_step(&w, &step, rel)?;
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    Ok(seen)
}

/// Checks a sequence against its base string: each guide must be in the
/// set when one is supplied, each window must fit, and each window of the
/// base must be adjacent to its guide. Checking against the base is
/// equivalent to checking step by step because steps preserve classes.
pub fn validate_rewrite_sequence(
    base: &Str,
    steps: &RewriteSequence,
    guides: Option<&GuideSet>,
    rel: &AdjustmentRelation,
) -> Result<(), SequenceError> {
    for (k, step) in steps.iter().enumerate() {
        let at = |error| SequenceError { step: k + 1, error };
        if let Some(set) = guides {
            if set.index_of(&step.guide).is_none() {
                return Err(at(RewriteError::UnknownGuide { guide: step.guide.clone() }));
            }
        }
        let Some(redex) = base.substring(step.position, step.guide.len()) else {
            return Err(at(RewriteError::OutOfRange {
                position: step.position,
                guide_len: step.guide.len(),
                string_len: base.len(),
            }));
        };
        match rel.lift_equiv(&redex, &step.guide) {
            Ok(true) => {}
            Ok(false) => {
                return Err(at(RewriteError::RedexMismatch { position: step.position }));
            }
            Err(e) => return Err(at(RewriteError::Adjustment(e))),
        }
    }
    Ok(())
}

/// The trace of a rewrite sequence: the base string followed by the result
/// of every step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRun {
    steps: RewriteSequence,
    intermediates: Vec<Str>,
}

impl RewriteRun {
    pub fn base(&self) -> &Str {
        &self.intermediates[0]
    }

    pub fn result(&self) -> &Str {
        self.intermediates.last().expect("trace holds the base string")
    }

    /// The base string and then one entry per step, `steps + 1` in total.
    pub fn intermediates(&self) -> &[Str] {
        &self.intermediates
    }

    pub fn steps(&self) -> &RewriteSequence {
        &self.steps
    }
}

/// Runs a sequence step by step, recording every intermediate string.
pub fn apply_rewrite_sequence(
    base: &Str,
    steps: &RewriteSequence,
    rel: &AdjustmentRelation,
) -> Result<RewriteRun, SequenceError> {
    let mut intermediates = Vec::with_capacity(steps.len() + 1);
    intermediates.push(base.clone());
    for (k, step) in steps.iter().enumerate() {
        let current = intermediates.last().expect("trace holds the base string");
        let next =
            apply_step(current, step, rel).map_err(|error| SequenceError { step: k + 1, error })?;
        intermediates.push(next);
    }
    Ok(RewriteRun { steps: steps.clone(), intermediates })
}

/// Erases every occurrence of `zero` from the string.
pub fn pi(u: &Str, zero: &Symbol) -> Str {
    u.iter().filter(|s| *s != zero).cloned().collect()
}

/// An insertion/deletion step: replace the window of `redex_len` symbols
/// after a prefix of `prefix_len` by `guide`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IdStep {
    pub guide: Str,
    pub prefix_len: usize,
    pub redex_len: usize,
}

impl IdStep {
    pub fn new(guide: Str, prefix_len: usize, redex_len: usize) -> Self {
        IdStep { guide, prefix_len, redex_len }
    }
}

impl fmt::Display for IdStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.guide, self.prefix_len, self.redex_len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdError {
    OutOfRange {
        prefix_len: usize,
        redex_len: usize,
        string_len: usize,
    },
    GuideNotInForm {
        guide: Str,
    },
    RedexNotInForm {
        prefix_len: usize,
        redex_len: usize,
    },
    PiMismatch {
        prefix_len: usize,
        redex_len: usize,
    },
}

impl fmt::Display for IdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdError::OutOfRange { prefix_len, redex_len, string_len } => write!(
                f,
                "window of {redex_len} at position {prefix_len} leaves the string (length {string_len})"
            ),
            IdError::GuideNotInForm { guide } => write!(
                f,
                "guide `{guide}` must have length at least two and non-zero symbols at both ends"
            ),
            IdError::RedexNotInForm { prefix_len, redex_len } => write!(
                f,
                "window of {redex_len} at position {prefix_len} must have length at least two and non-zero symbols at both ends"
            ),
            IdError::PiMismatch { prefix_len, redex_len } => write!(
                f,
                "zero-erasure of the window of {redex_len} at position {prefix_len} differs from the guide's"
            ),
        }
    }
}

impl core::error::Error for IdError {}

/// True when the string is long enough to have distinct ends and neither
/// end is the zero symbol. A single symbol is never in form.
fn nonzero_bounded(w: &Str, zero: &Symbol) -> bool {
    w.len() >= 2 && w.first() != Some(zero) && w.last() != Some(zero)
}

/// Checks that every guide begins and ends with a non-zero symbol and has
/// length at least two.
pub fn validate_id_guides(guides: &GuideSet, zero: &Symbol) -> Result<(), IdError> {
    for g in guides.iter() {
        if !nonzero_bounded(g, zero) {
            return Err(IdError::GuideNotInForm { guide: g.clone() });
        }
    }
    Ok(())
}

/// Applies a single insertion/deletion step. Both the window and the guide
/// must start and end with non-zero symbols and share a zero-erasure.
pub fn id_apply_step(u: &Str, step: &IdStep, zero: &Symbol) -> Result<Str, IdError> {
    let Some(redex) = u.substring(step.prefix_len, step.redex_len) else {
        return Err(IdError::OutOfRange {
            prefix_len: step.prefix_len,
            redex_len: step.redex_len,
            string_len: u.len(),
        });
    };
    if !nonzero_bounded(&step.guide, zero) {
        return Err(IdError::GuideNotInForm { guide: step.guide.clone() });
    }
    if !nonzero_bounded(&redex, zero) {
        return Err(IdError::RedexNotInForm {
            prefix_len: step.prefix_len,
            redex_len: step.redex_len,
        });
    }
    if pi(&redex, zero) != pi(&step.guide, zero) {
        return Err(IdError::PiMismatch {
            prefix_len: step.prefix_len,
            redex_len: step.redex_len,
        });
    }
    Ok(u
        .splice(step.prefix_len, step.redex_len, &step.guide)
        .expect("window already checked against the string"))
}

/// All insertion/deletion steps applicable to `u`, ordered by prefix
/// length, then guide index, then window length.
pub fn id_applicable_steps(
    u: &Str,
    guides: &GuideSet,
    zero: &Symbol,
) -> Result<Vec<IdStep>, IdError> {
    validate_id_guides(guides, zero)?;
    let targets: Vec<Str> = guides.iter().map(|g| pi(g, zero)).collect();
    // Prefix counts of non-zero symbols, so windows whose erasure cannot
    // match a guide's are skipped without building them.
    let mut nonzeros = Vec::with_capacity(u.len() + 1);
    nonzeros.push(0usize);
    for s in u.iter() {
        nonzeros.push(nonzeros.last().unwrap() + usize::from(s != zero));
    }
    let mut steps = Vec::new();
    for p in 0..u.len() {
        if u.get(p) == Some(zero) {
            continue;
        }
        for (gi, g) in guides.iter().enumerate() {
            let target = &targets[gi];
            for n in 2..=u.len() - p {
                if nonzeros[p + n] - nonzeros[p] != target.len() {
                    continue;
                }
                let redex = u.substring(p, n).expect("window bounded by the loop");
                if !nonzero_bounded(&redex, zero) {
                    continue;
                }
                if &pi(&redex, zero) == target {
                    steps.push(IdStep::new(g.clone(), p, n));
                }
            }
        }
    }
    Ok(steps)
}

/// Every string reachable from `u` by insertion/deletion rewriting. Zero
/// runs never grow past the longest run in the start string or the guides,
/// so the search always terminates.
pub fn id_closure(u: &Str, guides: &GuideSet, zero: &Symbol) -> Result<BTreeSet<Str>, IdError> {
    validate_id_guides(guides, zero)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(w) = queue.pop_front() {
        for step in id_applicable_steps(&w, guides, zero)? {
            let v = id_apply_step(&w, &step, zero)?;
            debug_assert_eq!(pi(&v, zero), pi(&w, zero));
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{Alphabet, Symbol};
    use alloc::string::ToString;
    use alloc::vec;

    fn sym(t: &str) -> Symbol {
        Symbol::new(t).unwrap()
    }

    fn ab_system() -> (Alphabet, AdjustmentRelation, GuideSet) {
        let alpha = Alphabet::parse("a b c").unwrap();
        let rel =
            AdjustmentRelation::from_classes(alpha.clone(), &[vec![sym("a"), sym("b")]]).unwrap();
        let guides = GuideSet::new(vec![alpha.parse_chars("bb").unwrap()]);
        (alpha, rel, guides)
    }

    fn six_system() -> (Alphabet, AdjustmentRelation, GuideSet) {
        let alpha = Alphabet::parse("a b c d e f").unwrap();
        let rel = AdjustmentRelation::from_classes(
            alpha.clone(),
            &[
                vec![sym("a"), sym("b")],
                vec![sym("c"), sym("d")],
                vec![sym("e"), sym("f")],
            ],
        )
        .unwrap();
        let guides = GuideSet::new(vec![
            alpha.parse_chars("fb").unwrap(),
            alpha.parse_chars("ace").unwrap(),
            alpha.parse_chars("d").unwrap(),
        ]);
        (alpha, rel, guides)
    }

    #[test]
    fn apply_step_stamps_the_guide() {
        let (alpha, rel, _) = ab_system();
        let u = alpha.parse_chars("aaacaa").unwrap();
        let bb = alpha.parse_chars("bb").unwrap();
        let v = apply_step(&u, &GuidePos::new(bb, 1), &rel).unwrap();
        assert_eq!(v, alpha.parse_chars("abbcaa").unwrap());
        assert_eq!(v.len(), u.len());
        assert!(rel.lift_equiv(&u, &v).unwrap());
    }

    #[test]
    fn apply_step_rejects_mismatch_and_overflow() {
        let (alpha, rel, _) = ab_system();
        let u = alpha.parse_chars("aaacaa").unwrap();
        let bb = alpha.parse_chars("bb").unwrap();
        assert_eq!(
            apply_step(&u, &GuidePos::new(bb.clone(), 3), &rel),
            Err(RewriteError::RedexMismatch { position: 3 })
        );
        assert_eq!(
            apply_step(&u, &GuidePos::new(bb, 5), &rel),
            Err(RewriteError::OutOfRange { position: 5, guide_len: 2, string_len: 6 })
        );
    }

    #[test]
    fn apply_step_is_idempotent() {
        let (alpha, rel, _) = ab_system();
        let u = alpha.parse_chars("aaacaa").unwrap();
        let step = GuidePos::new(alpha.parse_chars("bb").unwrap(), 1);
        let once = apply_step(&u, &step, &rel).unwrap();
        let twice = apply_step(&once, &step, &rel).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn applicable_steps_order() {
        let (alpha, rel, guides) = ab_system();
        let u = alpha.parse_chars("aaacaa").unwrap();
        let steps = applicable_steps(&u, &guides, &rel).unwrap();
        let positions: Vec<usize> = steps.iter().map(|s| s.position).collect();
        assert_eq!(positions, [0, 1, 4]);
    }

    #[test]
    fn closure_of_string_golden() {
        let (alpha, rel, guides) = ab_system();
        let u = alpha.parse_chars("aaacaa").unwrap();
        let closure = closure_of_string(&u, &guides, &rel).unwrap();
        let expected: BTreeSet<Str> =
            ["aaacaa", "bbacaa", "abbcaa", "aaacbb", "bbbcaa", "abbcbb", "bbacbb", "bbbcbb"]
                .iter()
                .map(|s| alpha.parse_chars(s).unwrap())
                .collect();
        assert_eq!(closure, expected);
    }

    #[test]
    fn sequence_run_keeps_intermediates() {
        let (alpha, rel, _) = six_system();
        let base = alpha.parse_chars("ebcfa").unwrap();
        let steps: RewriteSequence = [("d", 2), ("fb", 0), ("ace", 1), ("fb", 0), ("fb", 3), ("fb", 3)]
            .iter()
            .map(|(g, p)| GuidePos::new(alpha.parse_chars(g).unwrap(), *p))
            .collect();
        let run = apply_rewrite_sequence(&base, &steps, &rel).unwrap();
        let chain: Vec<Str> = ["ebcfa", "ebdfa", "fbdfa", "facea", "fbcea", "fbcfb", "fbcfb"]
            .iter()
            .map(|s| alpha.parse_chars(s).unwrap())
            .collect();
        assert_eq!(run.intermediates(), chain.as_slice());
        assert_eq!(run.result(), &alpha.parse_chars("fbcfb").unwrap());
    }

    #[test]
    fn reordered_sequence_same_result() {
        let (alpha, rel, _) = six_system();
        let base = alpha.parse_chars("ebcfa").unwrap();
        let steps: RewriteSequence = [("d", 2), ("fb", 0), ("ace", 1), ("fb", 3), ("fb", 3), ("fb", 0)]
            .iter()
            .map(|(g, p)| GuidePos::new(alpha.parse_chars(g).unwrap(), *p))
            .collect();
        let run = apply_rewrite_sequence(&base, &steps, &rel).unwrap();
        let chain: Vec<Str> = ["ebcfa", "ebdfa", "fbdfa", "facea", "facfb", "facfb", "fbcfb"]
            .iter()
            .map(|s| alpha.parse_chars(s).unwrap())
            .collect();
        assert_eq!(run.intermediates(), chain.as_slice());
    }

    #[test]
    fn sequence_validation_against_base() {
        let (alpha, rel, guides) = six_system();
        let base = alpha.parse_chars("ebcfa").unwrap();
        let steps: RewriteSequence = [("d", 2), ("fb", 0), ("ace", 1), ("fb", 0), ("fb", 3), ("fb", 3)]
            .iter()
            .map(|(g, p)| GuidePos::new(alpha.parse_chars(g).unwrap(), *p))
            .collect();
        assert!(validate_rewrite_sequence(&base, &steps, Some(&guides), &rel).is_ok());

        let foreign: RewriteSequence =
            [GuidePos::new(alpha.parse_chars("aa").unwrap(), 0)].into_iter().collect();
        let err = validate_rewrite_sequence(&base, &foreign, Some(&guides), &rel).unwrap_err();
        assert_eq!(err.step, 1);
        assert!(matches!(err.error, RewriteError::UnknownGuide { .. }));
        assert!(validate_rewrite_sequence(&base, &foreign, None, &rel).is_err());

        let misplaced: RewriteSequence =
            [GuidePos::new(alpha.parse_chars("d").unwrap(), 0)].into_iter().collect();
        let err = validate_rewrite_sequence(&base, &misplaced, Some(&guides), &rel).unwrap_err();
        assert!(matches!(err.error, RewriteError::RedexMismatch { position: 0 }));
    }

    #[test]
    fn sequence_error_reports_failing_step() {
        let (alpha, rel, _) = six_system();
        let base = alpha.parse_chars("ebcfa").unwrap();
        let steps: RewriteSequence = [("d", 2), ("fb", 2)]
            .iter()
            .map(|(g, p)| GuidePos::new(alpha.parse_chars(g).unwrap(), *p))
            .collect();
        let err = apply_rewrite_sequence(&base, &steps, &rel).unwrap_err();
        assert_eq!(err.step, 2);
        assert_eq!(err.to_string(), "step 2: window at position 2 is not adjacent to the guide");
    }

    fn zeroed() -> Alphabet {
        Alphabet::parse("a b c 0").unwrap()
    }

    #[test]
    fn pi_erases_zeros() {
        let alpha = zeroed();
        let u = alpha.parse_chars("bc00babc").unwrap();
        assert_eq!(pi(&u, &sym("0")), alpha.parse_chars("bcbabc").unwrap());
        assert_eq!(pi(&alpha.parse_chars("00").unwrap(), &sym("0")), Str::empty());
    }

    #[test]
    fn id_apply_step_golden() {
        let alpha = zeroed();
        let zero = sym("0");
        let u = alpha.parse_chars("a00bc00babcc00a00b").unwrap();
        let step = IdStep::new(alpha.parse_chars("bcb000ab0c").unwrap(), 3, 8);
        let v = id_apply_step(&u, &step, &zero).unwrap();
        assert_eq!(v, alpha.parse_chars("a00bcb000ab0cc00a00b").unwrap());
        assert_eq!(pi(&v, &zero), pi(&u, &zero));
    }

    #[test]
    fn id_apply_step_accepts_whole_string() {
        let alpha = zeroed();
        let u = alpha.parse_chars("aaa").unwrap();
        let step = IdStep::new(alpha.parse_chars("aa0a").unwrap(), 0, 3);
        let v = id_apply_step(&u, &step, &sym("0")).unwrap();
        assert_eq!(v, alpha.parse_chars("aa0a").unwrap());
    }

    #[test]
    fn id_apply_step_errors() {
        let alpha = zeroed();
        let zero = sym("0");

        let u = alpha.parse_chars("a0b0c").unwrap();
        let step = IdStep::new(alpha.parse_chars("ab").unwrap(), 0, 5);
        assert_eq!(
            id_apply_step(&u, &step, &zero),
            Err(IdError::PiMismatch { prefix_len: 0, redex_len: 5 })
        );

        let u = alpha.parse_chars("aaa").unwrap();
        let step = IdStep::new(alpha.parse_chars("aa0a").unwrap(), 1, 3);
        assert_eq!(
            id_apply_step(&u, &step, &zero),
            Err(IdError::OutOfRange { prefix_len: 1, redex_len: 3, string_len: 3 })
        );

        let step = IdStep::new(alpha.parse_chars("a0").unwrap(), 0, 2);
        assert!(matches!(
            id_apply_step(&u, &step, &zero),
            Err(IdError::GuideNotInForm { .. })
        ));

        // A single-symbol window is rejected even though both of its ends
        // are the same non-zero symbol.
        let u = alpha.parse_chars("ab").unwrap();
        let step = IdStep::new(alpha.parse_chars("ab").unwrap(), 0, 1);
        assert_eq!(
            id_apply_step(&u, &step, &zero),
            Err(IdError::RedexNotInForm { prefix_len: 0, redex_len: 1 })
        );

        let u = alpha.parse_chars("a0ab").unwrap();
        let step = IdStep::new(alpha.parse_chars("ab").unwrap(), 1, 3);
        assert_eq!(
            id_apply_step(&u, &step, &zero),
            Err(IdError::RedexNotInForm { prefix_len: 1, redex_len: 3 })
        );
    }

    #[test]
    fn id_applicable_steps_order() {
        let alpha = zeroed();
        let zero = sym("0");
        let guides = GuideSet::new(vec![
            alpha.parse_chars("aa0a").unwrap(),
            alpha.parse_chars("a0aa").unwrap(),
        ]);
        let u = alpha.parse_chars("aa0a").unwrap();
        let steps = id_applicable_steps(&u, &guides, &zero).unwrap();
        assert_eq!(
            steps,
            vec![
                IdStep::new(alpha.parse_chars("aa0a").unwrap(), 0, 4),
                IdStep::new(alpha.parse_chars("a0aa").unwrap(), 0, 4),
            ]
        );
    }

    #[test]
    fn id_closure_golden() {
        let alpha = zeroed();
        let zero = sym("0");
        let guides = GuideSet::new(vec![
            alpha.parse_chars("aa0a").unwrap(),
            alpha.parse_chars("a0aa").unwrap(),
        ]);
        let u = alpha.parse_chars("aaa").unwrap();
        let closure = id_closure(&u, &guides, &zero).unwrap();
        let expected: BTreeSet<Str> = ["aaa", "aa0a", "a0aa"]
            .iter()
            .map(|s| alpha.parse_chars(s).unwrap())
            .collect();
        assert_eq!(closure, expected);
    }

    #[test]
    fn id_closure_rejects_bad_guides() {
        let alpha = zeroed();
        let guides = GuideSet::new(vec![alpha.parse_chars("0a").unwrap()]);
        let u = alpha.parse_chars("a").unwrap();
        assert!(matches!(
            id_closure(&u, &guides, &sym("0")),
            Err(IdError::GuideNotInForm { .. })
        ));
    }
}
