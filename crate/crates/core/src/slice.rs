//! Per-position accounts of rewrite activity.
//!
//! A slice records, for one position of a string, the stack of guide
//! windows that touched the position: each entry names the guide and the
//! 1-based offset the position has within it. A slice sequence carries one
//! slice per position and ties neighboring slices together with cuts, so
//! that every window entering a position either continues into the next
//! position or ends, and every window present at the next position either
//! continued from the left or starts there. Slice sequences are exactly as
//! expressive as rewrite sequences: [`rewrites_to_slices`] and
//! [`slices_to_rewrites`] translate back and forth while preserving the
//! yield, and [`normalize_repetition_free`] removes shadowed duplicate
//! entries without changing it.
//!
//! Positions are 1-based throughout this module, matching how they appear
//! in error messages; slots inside a single slice are 0-based, counted from
//! the earliest entry.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rewrite::{
    apply_rewrite_sequence, validate_rewrite_sequence, GuidePos, RewriteSequence, SequenceError,
};
use crate::symbols::{AdjustmentError, AdjustmentRelation, GuideSet, Str, Symbol};

/// A guide together with a 1-based offset into it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GuideOffset {
    guide: Str,
    offset: usize,
}

impl GuideOffset {
    pub fn new(guide: Str, offset: usize) -> Result<Self, SliceError> {
        if offset == 0 || offset > guide.len() {
            return Err(SliceError::BadOffset { offset, guide_len: guide.len() });
        }
        Ok(GuideOffset { guide, offset })
    }

    pub fn guide(&self) -> &Str {
        &self.guide
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// The guide symbol the offset points at.
    pub fn symbol(&self) -> &Symbol {
        self.guide.get(self.offset - 1).expect("offset is checked on construction")
    }

    /// Whether the offset has reached the last symbol of the guide.
    pub fn at_end(&self) -> bool {
        self.offset == self.guide.len()
    }

    /// The pair moved to the next offset, unless the guide ends here.
    pub fn advanced(&self) -> Option<GuideOffset> {
        if self.at_end() {
            None
        } else {
            Some(GuideOffset { guide: self.guide.clone(), offset: self.offset + 1 })
        }
    }
}

impl fmt::Display for GuideOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.guide, self.offset)
    }
}

/// The stack of guide-offset pairs recorded at one position, earliest
/// entry first. Duplicate pairs are allowed; a slice listing each pair at
/// most once is called repetition-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slice {
    pairs: Vec<GuideOffset>,
}

impl Slice {
    pub fn new(pairs: Vec<GuideOffset>) -> Self {
        Slice { pairs }
    }

    pub fn empty() -> Self {
        Slice { pairs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, slot: usize) -> Option<&GuideOffset> {
        self.pairs.get(slot)
    }

    pub fn pairs(&self) -> &[GuideOffset] {
        &self.pairs
    }

    pub fn iter(&self) -> core::slice::Iter<'_, GuideOffset> {
        self.pairs.iter()
    }

    /// The latest entry, which decides the yield.
    pub fn top(&self) -> Option<&GuideOffset> {
        self.pairs.last()
    }

    /// The symbol the position shows after the recorded rewrites: the top
    /// pair's symbol, or `a` itself when nothing touched the position.
    pub fn yield_for<'a>(&'a self, a: &'a Symbol) -> &'a Symbol {
        match self.pairs.last() {
            Some(pair) => pair.symbol(),
            None => a,
        }
    }

    pub fn is_repetition_free(&self) -> bool {
        for j in 1..self.pairs.len() {
            if self.pairs[..j].contains(&self.pairs[j]) {
                return false;
            }
        }
        true
    }

    /// Every entry sits at offset 1, so all windows start here.
    pub fn is_start(&self) -> bool {
        self.pairs.iter().all(|pair| pair.offset == 1)
    }

    /// Every entry has reached the end of its guide.
    pub fn is_end(&self) -> bool {
        self.pairs.iter().all(GuideOffset::at_end)
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (slot, pair) in self.pairs.iter().enumerate() {
            if slot > 0 {
                write!(f, ", ")?;
            }
            pair.fmt(f)?;
        }
        write!(f, "]")
    }
}

/// Checks one slice against the symbol it annotates: every guide must come
/// from the set and every entry's symbol must be adjacent to `a`. The
/// position is used only to label errors.
pub fn validate_slice(
    slice: &Slice,
    a: &Symbol,
    position: usize,
    guides: &GuideSet,
    rel: &AdjustmentRelation,
) -> Result<(), SliceError> {
    for pair in slice.iter() {
        if guides.index_of(pair.guide()).is_none() {
            return Err(SliceError::ForeignGuide { position, pair: pair.clone() });
        }
        if !rel.adjusts(a, pair.symbol())? {
            return Err(SliceError::YieldMismatch {
                position,
                pair: pair.clone(),
                symbol: a.clone(),
            });
        }
    }
    Ok(())
}

/// The matching between two neighboring slices: slot `i` of the left slice
/// continues as slot `j` of the right one. The matching covers exactly the
/// left entries that have guide symbols left and the right entries that
/// sit at offset two or higher, and it preserves slot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    mapping: Vec<(usize, usize)>,
}

impl Cut {
    /// The matched slot pairs, ascending on both sides.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.mapping
    }

    pub fn image(&self, slot: usize) -> Option<usize> {
        self.mapping.iter().find(|(i, _)| *i == slot).map(|&(_, j)| j)
    }

    pub fn preimage(&self, slot: usize) -> Option<usize> {
        self.mapping.iter().find(|(_, j)| *j == slot).map(|&(i, _)| i)
    }
}

/// The cut between two neighboring slices, if one exists.
///
/// The left entries that continue (offset short of the guide's end) and
/// the right entries that are continued (offset at least two) are matched
/// up in slot order; the match must pair each entry with the same guide at
/// the next offset. Both lists are forced, so the cut is unique.
pub fn cut(left: &Slice, right: &Slice) -> Option<Cut> {
    let continuing: Vec<usize> =
        (0..left.len()).filter(|&i| !left.pairs[i].at_end()).collect();
    let continued: Vec<usize> =
        (0..right.len()).filter(|&j| right.pairs[j].offset() >= 2).collect();
    if continuing.len() != continued.len() {
        return None;
    }
    let mut mapping = Vec::with_capacity(continuing.len());
    for (&i, &j) in continuing.iter().zip(&continued) {
        let from = &left.pairs[i];
        let to = &right.pairs[j];
        if from.guide() != to.guide() || from.offset() + 1 != to.offset() {
            return None;
        }
        mapping.push((i, j));
    }
    Some(Cut { mapping })
}

/// Reference search for the cut between two slices. Tries every
/// order-preserving matching between slot subsets of the two slices and
/// keeps the ones where unmatched left entries end their guide, unmatched
/// right entries start theirs, and matched entries continue with the same
/// guide at the next offset. Exists to cross-check [`cut`], which
/// constructs the matched subsets directly; both slices must have at most
/// 16 entries.
pub fn cut_exhaustive(left: &Slice, right: &Slice) -> Option<Cut> {
    assert!(left.len() <= 16 && right.len() <= 16, "slice too large for the reference search");
    let n = left.len();
    let m = right.len();
    let mut found: Option<Cut> = None;
    for mask_left in 0u32..(1 << n) {
        'masks: for mask_right in 0u32..(1 << m) {
            if mask_left.count_ones() != mask_right.count_ones() {
                continue;
            }
            for i in 0..n {
                if mask_left & (1 << i) == 0 && !left.pairs[i].at_end() {
                    continue 'masks;
                }
            }
            for j in 0..m {
                if mask_right & (1 << j) == 0 && right.pairs[j].offset() != 1 {
                    continue 'masks;
                }
            }
            let chosen_left: Vec<usize> = (0..n).filter(|i| mask_left & (1 << i) != 0).collect();
            let chosen_right: Vec<usize> = (0..m).filter(|j| mask_right & (1 << j) != 0).collect();
            for (&i, &j) in chosen_left.iter().zip(&chosen_right) {
                let from = &left.pairs[i];
                let to = &right.pairs[j];
                if from.guide() != to.guide() || from.offset() + 1 != to.offset() {
                    continue 'masks;
                }
            }
            let mapping: Vec<(usize, usize)> =
                chosen_left.into_iter().zip(chosen_right).collect();
            let candidate = Cut { mapping };
            if let Some(prev) = &found {
                debug_assert_eq!(*prev, candidate, "two distinct cuts for one slice pair");
            } else {
                found = Some(candidate);
            }
        }
    }
    found
}

/// A slice for every position of a base string.
///
/// A sequence may carry a label per slot, giving each entry a number that
/// is unique within its slice and increases with the slot. Labels name the
/// rewrite step an entry came from and make chunk indexes explicit;
/// equality of sequences ignores them.
#[derive(Debug, Clone, Eq)]
pub struct SliceSequence {
    base: Str,
    slices: Vec<Slice>,
    labels: Option<Vec<Vec<u32>>>,
}

impl PartialEq for SliceSequence {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.slices == other.slices
    }
}

impl SliceSequence {
    pub fn new(base: Str, slices: Vec<Slice>) -> Result<Self, SliceError> {
        if slices.len() != base.len() {
            return Err(SliceError::LengthMismatch {
                slices: slices.len(),
                string_len: base.len(),
            });
        }
        Ok(SliceSequence { base, slices, labels: None })
    }

    /// Builds a sequence with one label per slot. Each slice needs exactly
    /// as many labels as entries, strictly increasing, so that label order
    /// and slot order agree.
    pub fn with_labels(
        base: Str,
        slices: Vec<Slice>,
        labels: Vec<Vec<u32>>,
    ) -> Result<Self, SliceError> {
        if slices.len() != base.len() {
            return Err(SliceError::LengthMismatch {
                slices: slices.len(),
                string_len: base.len(),
            });
        }
        if labels.len() != slices.len() {
            return Err(SliceError::BadLabels { position: 0 });
        }
        for (idx, (slice, row)) in slices.iter().zip(&labels).enumerate() {
            if row.len() != slice.len() || row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SliceError::BadLabels { position: idx + 1 });
            }
        }
        Ok(SliceSequence { base, slices, labels: Some(labels) })
    }

    pub fn base(&self) -> &Str {
        &self.base
    }

    /// The number of positions, which equals the base string's length.
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// The slice at a 1-based position.
    pub fn slice(&self, position: usize) -> Option<&Slice> {
        if position == 0 {
            return None;
        }
        self.slices.get(position - 1)
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn labels(&self) -> Option<&[Vec<u32>]> {
        self.labels.as_deref()
    }

    /// The string the sequence rewrites the base into, one yield per
    /// position.
    pub fn yield_string(&self) -> Str {
        self.base
            .iter()
            .zip(&self.slices)
            .map(|(a, slice)| slice.yield_for(a).clone())
            .collect()
    }

    /// Every entry as a chunk, in position and then slot order.
    pub fn chunks(&self) -> Vec<Chunk> {
        let mut out = Vec::new();
        for (idx, slice) in self.slices.iter().enumerate() {
            for (slot, pair) in slice.iter().enumerate() {
                out.push(Chunk {
                    guide: pair.guide().clone(),
                    offset: pair.offset(),
                    index: self.index_at(idx + 1, slot),
                    position: idx + 1,
                });
            }
        }
        out
    }

    /// The chunk index of a slot: its label if the sequence carries
    /// labels, the 1-based slot number otherwise.
    fn index_at(&self, position: usize, slot: usize) -> u32 {
        match &self.labels {
            Some(rows) => rows[position - 1][slot],
            None => (slot + 1) as u32,
        }
    }
}

/// Checks that a sequence is coherent: each slice is valid for its base
/// symbol, the first slice only starts windows, the last slice only ends
/// them, and every pair of neighbors has a cut. Violations are reported in
/// that order, earliest position first.
pub fn validate_slice_sequence(
    seq: &SliceSequence,
    guides: &GuideSet,
    rel: &AdjustmentRelation,
) -> Result<(), SliceError> {
    for (idx, slice) in seq.slices.iter().enumerate() {
        let a = seq.base.get(idx).expect("sequence length is checked on construction");
        validate_slice(slice, a, idx + 1, guides, rel)?;
    }
    if let Some(first) = seq.slices.first() {
        if let Some(pair) = first.iter().find(|pair| pair.offset() != 1) {
            return Err(SliceError::NotStart { pair: pair.clone() });
        }
    }
    if let Some(last) = seq.slices.last() {
        if let Some(pair) = last.iter().find(|pair| !pair.at_end()) {
            return Err(SliceError::NotEnd { pair: pair.clone() });
        }
    }
    for n in 1..seq.len() {
        if cut(&seq.slices[n - 1], &seq.slices[n]).is_none() {
            return Err(SliceError::NoCut { position: n });
        }
    }
    Ok(())
}

/// Records a rewrite sequence position by position: step `k` stamps its
/// guide over a window, so each window position gets the pair `(guide,
/// n - p)` with label `k`. The steps are validated against the base string
/// first.
pub fn rewrites_to_slices(
    base: &Str,
    steps: &RewriteSequence,
    rel: &AdjustmentRelation,
) -> Result<SliceSequence, SequenceError> {
    validate_rewrite_sequence(base, steps, None, rel)?;
    let mut slices = vec![Slice::empty(); base.len()];
    let mut labels = vec![Vec::new(); base.len()];
    for (k, step) in steps.iter().enumerate() {
        for s in 1..=step.guide.len() {
            let position = step.position + s;
            let pair = GuideOffset::new(step.guide.clone(), s)
                .expect("offset ranges over the guide");
            slices[position - 1].pairs.push(pair);
            labels[position - 1].push((k + 1) as u32);
        }
    }
    Ok(SliceSequence::with_labels(base.clone(), slices, labels)
        .expect("one slice and label row per position"))
}

/// One slice entry made self-contained: the pair, the index that names it
/// within its slice, and the 1-based position of the slice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chunk {
    pub guide: Str,
    pub offset: usize,
    pub index: u32,
    pub position: usize,
}

impl fmt::Display for Chunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.guide, self.offset, self.index, self.position)
    }
}

/// Whether chunk `x` comes at or before chunk `y` in every rewrite
/// sequence the slice sequence describes.
///
/// Walking from the earlier chunk's slice to the later one, each cut
/// carries a slot bound along: moving up within a slice and following the
/// cut keeps a lower bound when walking away from `x`, and moving down
/// within a slice and following the cut keeps an upper bound when walking
/// away from `y`. The relation holds when the target chunk clears the
/// propagated bound. Chunks at the same position compare by slot directly.
pub fn chunk_leq(x: &Chunk, y: &Chunk, seq: &SliceSequence) -> Result<bool, SliceError> {
    let sx = locate(seq, x)?;
    let sy = locate(seq, y)?;
    let cuts = all_cuts(seq)?;
    Ok(leq_by_slot(&cuts, (x.position, sx), (y.position, sy)))
}

fn locate(seq: &SliceSequence, chunk: &Chunk) -> Result<usize, SliceError> {
    if chunk.position >= 1 && chunk.position <= seq.len() {
        let slice = &seq.slices[chunk.position - 1];
        for (slot, pair) in slice.iter().enumerate() {
            if pair.guide() == &chunk.guide
                && pair.offset() == chunk.offset
                && seq.index_at(chunk.position, slot) == chunk.index
            {
                return Ok(slot);
            }
        }
    }
    Err(SliceError::UnknownChunk { chunk: chunk.clone() })
}

fn all_cuts(seq: &SliceSequence) -> Result<Vec<Cut>, SliceError> {
    let mut cuts = Vec::new();
    for n in 1..seq.len() {
        match cut(&seq.slices[n - 1], &seq.slices[n]) {
            Some(c) => cuts.push(c),
            None => return Err(SliceError::NoCut { position: n }),
        }
    }
    Ok(cuts)
}

/// The slot-level order test. `cuts[k]` joins positions `k + 1` and
/// `k + 2`.
fn leq_by_slot(cuts: &[Cut], x: (usize, usize), y: (usize, usize)) -> bool {
    let (xn, xs) = x;
    let (yn, ys) = y;
    if xn <= yn {
        let mut floor = xs;
        for k in xn..yn {
            let next = cuts[k - 1]
                .pairs()
                .iter()
                .filter(|&&(i, _)| i >= floor)
                .map(|&(_, j)| j)
                .min();
            match next {
                Some(j) => floor = j,
                None => return false,
            }
        }
        ys >= floor
    } else {
        let mut ceiling = ys;
        for k in yn..xn {
            let next = cuts[k - 1]
                .pairs()
                .iter()
                .filter(|&&(i, _)| i <= ceiling)
                .map(|&(_, j)| j)
                .max();
            match next {
                Some(j) => ceiling = j,
                None => return false,
            }
        }
        xs <= ceiling
    }
}

/// The chunks of a slice sequence grouped into equivalence classes, with
/// the order between the classes.
///
/// Each class holds the chunks of one window: the same guide walked from
/// offset 1 to its end over consecutive positions. Classes are listed by
/// the position and slot of their first chunk; the order relation is the
/// one induced by [`chunk_leq`].
#[derive(Debug, Clone)]
pub struct ChunkClasses {
    classes: Vec<Vec<Chunk>>,
    slots: Vec<Vec<usize>>,
    order: BTreeSet<(usize, usize)>,
}

impl ChunkClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<Chunk>] {
        &self.classes
    }

    pub fn get(&self, class: usize) -> Option<&[Chunk]> {
        self.classes.get(class).map(Vec::as_slice)
    }

    /// Whether every rewrite order applies class `i` at or before class
    /// `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.order.contains(&(i, j))
    }
}

/// Groups the chunks of a sequence into classes and computes the order
/// between them. Fails when some neighboring slices have no cut.
pub fn chunk_classes(seq: &SliceSequence) -> Result<ChunkClasses, SliceError> {
    let cuts = all_cuts(seq)?;
    let mut table: Vec<(Chunk, usize)> = Vec::new();
    for (idx, slice) in seq.slices.iter().enumerate() {
        for (slot, pair) in slice.iter().enumerate() {
            let chunk = Chunk {
                guide: pair.guide().clone(),
                offset: pair.offset(),
                index: seq.index_at(idx + 1, slot),
                position: idx + 1,
            };
            table.push((chunk, slot));
        }
    }
    let at = |entry: &(Chunk, usize)| (entry.0.position, entry.1);
    let mut class_of: Vec<Option<usize>> = vec![None; table.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..table.len() {
        if class_of[i].is_some() {
            continue;
        }
        let id = members.len();
        class_of[i] = Some(id);
        let mut group = vec![i];
        for j in i + 1..table.len() {
            if class_of[j].is_none()
                && leq_by_slot(&cuts, at(&table[i]), at(&table[j]))
                && leq_by_slot(&cuts, at(&table[j]), at(&table[i]))
            {
                class_of[j] = Some(id);
                group.push(j);
            }
        }
        members.push(group);
    }
    let mut order = BTreeSet::new();
    for (a, group_a) in members.iter().enumerate() {
        for (b, group_b) in members.iter().enumerate() {
            if a != b && leq_by_slot(&cuts, at(&table[group_a[0]]), at(&table[group_b[0]])) {
                order.insert((a, b));
            }
        }
    }
    debug_assert!(
        order.iter().all(|&(a, b)| !order.contains(&(b, a))),
        "class order must be antisymmetric"
    );
    let mut classes = Vec::with_capacity(members.len());
    let mut slots = Vec::with_capacity(members.len());
    for group in members {
        let class: Vec<Chunk> = group.iter().map(|&i| table[i].0.clone()).collect();
        let class_slots: Vec<usize> = group.iter().map(|&i| table[i].1).collect();
        debug_assert!(
            class.iter().enumerate().all(|(s, chunk)| {
                chunk.guide == class[0].guide
                    && chunk.offset == s + 1
                    && chunk.position == class[0].position + s
            }) && class.len() == class[0].guide.len(),
            "a class must walk one guide over consecutive positions"
        );
        classes.push(class);
        slots.push(class_slots);
    }
    debug_assert!(
        (1..classes.len()).all(|k| {
            (classes[k - 1][0].position, slots[k - 1][0])
                < (classes[k][0].position, slots[k][0])
        }),
        "classes are listed by their first chunk"
    );
    Ok(ChunkClasses { classes, slots, order })
}

/// Rebuilds a rewrite sequence from a slice sequence, preserving the
/// yield.
///
/// The sequence is validated first. Chunk classes are then peeled off the
/// top: a maximal class in the remaining order must sit topmost in each of
/// its slices, so it can be the last remaining step. Among several maximal
/// classes the one with the smallest position, then guide index, then slot
/// is taken, which makes the result deterministic.
pub fn slices_to_rewrites(
    seq: &SliceSequence,
    guides: &GuideSet,
    rel: &AdjustmentRelation,
) -> Result<RewriteSequence, SliceError> {
    validate_slice_sequence(seq, guides, rel)?;
    let grouped = chunk_classes(seq)?;
    let mut live: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); seq.len()];
    for (class, class_slots) in grouped.classes.iter().zip(&grouped.slots) {
        for (chunk, &slot) in class.iter().zip(class_slots) {
            live[chunk.position - 1].insert(slot);
        }
    }
    let mut remaining: BTreeSet<usize> = (0..grouped.len()).collect();
    let mut reversed = Vec::with_capacity(grouped.len());
    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| j != i && grouped.order.contains(&(i, j))))
            .min_by_key(|&i| {
                let first = &grouped.classes[i][0];
                let guide_index =
                    guides.index_of(&first.guide).expect("sequence was validated");
                (first.position, guide_index, grouped.slots[i][0])
            })
            .expect("a nonempty finite order has a maximal element");
        for (chunk, &slot) in grouped.classes[pick].iter().zip(&grouped.slots[pick]) {
            debug_assert_eq!(
                live[chunk.position - 1].last(),
                Some(&slot),
                "a maximal class must sit topmost in its slices"
            );
            live[chunk.position - 1].remove(&slot);
        }
        let first = &grouped.classes[pick][0];
        reversed.push(GuidePos::new(first.guide.clone(), first.position - 1));
        remaining.remove(&pick);
    }
    reversed.reverse();
    let steps = RewriteSequence::new(reversed);
    debug_assert!(
        apply_rewrite_sequence(&seq.base, &steps, rel)
            .is_ok_and(|run| *run.result() == seq.yield_string()),
        "the rebuilt sequence must reproduce the yield"
    );
    Ok(steps)
}

/// Removes duplicate entries until every slice is repetition-free, without
/// changing the yield.
///
/// Whenever a slice lists the same pair twice, the earlier occurrence is
/// shadowed: its whole class is deleted, one entry per position the window
/// covers. The topmost entry of every slice survives, so the yield stays
/// put. Fails when some neighboring slices have no cut.
pub fn normalize_repetition_free(seq: &SliceSequence) -> Result<SliceSequence, SliceError> {
    let expected = seq.yield_string();
    let mut current = seq.clone();
    while let Some((position, slot)) = first_duplicate(&current) {
        let grouped = chunk_classes(&current)?;
        let target = (0..grouped.len())
            .find(|&i| {
                grouped.classes[i]
                    .iter()
                    .zip(&grouped.slots[i])
                    .any(|(chunk, &s)| chunk.position == position && s == slot)
            })
            .expect("the duplicate entry is a chunk of the sequence");
        for (chunk, &s) in grouped.classes[target].iter().zip(&grouped.slots[target]) {
            let slice = &mut current.slices[chunk.position - 1];
            debug_assert!(s + 1 < slice.len(), "a shadowed class never holds a top entry");
            slice.pairs.remove(s);
            if let Some(rows) = &mut current.labels {
                rows[chunk.position - 1].remove(s);
            }
        }
        debug_assert_eq!(current.yield_string(), expected, "deletions must not move the yield");
    }
    Ok(current)
}

/// The first shadowed entry: the earliest position whose slice repeats a
/// pair, with the lowest repeated slot pair. Returns the lower slot.
fn first_duplicate(seq: &SliceSequence) -> Option<(usize, usize)> {
    for (idx, slice) in seq.slices.iter().enumerate() {
        for j in 1..slice.len() {
            for i in 0..j {
                if slice.pairs[i] == slice.pairs[j] {
                    return Some((idx + 1, i));
                }
            }
        }
    }
    None
}

/// All repetition-free slices that can follow `slice` at a position
/// holding `b`, sorted.
///
/// Entries of `slice` that still have guide symbols left must continue, in
/// slot order, and their next symbols must all be adjacent to `b`; guides
/// from the set whose first symbol is adjacent to `b` may start, each at
/// most once. The results interleave the continued entries with every
/// arrangement of every choice of starting guides. When two continued
/// entries collide on the same pair no repetition-free successor exists
/// and the list is empty.
pub fn slice_successors(
    slice: &Slice,
    b: &Symbol,
    guides: &GuideSet,
    rel: &AdjustmentRelation,
) -> Result<Vec<Slice>, SliceError> {
    let mut continued = Vec::new();
    for pair in slice.iter() {
        let Some(next) = pair.advanced() else { continue };
        if !rel.adjusts(b, next.symbol())? {
            return Ok(Vec::new());
        }
        if continued.contains(&next) {
            return Ok(Vec::new());
        }
        continued.push(next);
    }
    let mut fresh = Vec::new();
    for guide in guides.iter() {
        let Some(first) = guide.first() else { continue };
        if rel.adjusts(b, first)? {
            let pair = GuideOffset::new(guide.clone(), 1).expect("guide is nonempty");
            if !fresh.contains(&pair) {
                fresh.push(pair);
            }
        }
    }
    let mut out = Vec::new();
    for arrangement in arrangements(&fresh) {
        for woven in interleavings(&continued, &arrangement) {
            out.push(Slice::new(woven));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every ordering of every subset of `items`, the empty arrangement
/// included.
fn arrangements(items: &[GuideOffset]) -> Vec<Vec<GuideOffset>> {
    let mut out = vec![Vec::new()];
    let mut grow = vec![Vec::new()];
    while let Some(prefix) = grow.pop() {
        for item in items {
            if prefix.contains(item) {
                continue;
            }
            let mut longer = prefix.clone();
            longer.push(item.clone());
            out.push(longer.clone());
            grow.push(longer);
        }
    }
    out
}

/// Every interleaving of two lists that keeps the inner order of both.
fn interleavings(left: &[GuideOffset], right: &[GuideOffset]) -> Vec<Vec<GuideOffset>> {
    if left.is_empty() {
        return vec![right.to_vec()];
    }
    if right.is_empty() {
        return vec![left.to_vec()];
    }
    let mut out = Vec::new();
    for mut woven in interleavings(&left[1..], right) {
        woven.insert(0, left[0].clone());
        out.push(woven);
    }
    for mut woven in interleavings(left, &right[1..]) {
        woven.insert(0, right[0].clone());
        out.push(woven);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceError {
    BadOffset { offset: usize, guide_len: usize },
    LengthMismatch { slices: usize, string_len: usize },
    BadLabels { position: usize },
    ForeignGuide { position: usize, pair: GuideOffset },
    YieldMismatch { position: usize, pair: GuideOffset, symbol: Symbol },
    NotStart { pair: GuideOffset },
    NotEnd { pair: GuideOffset },
    NoCut { position: usize },
    UnknownChunk { chunk: Chunk },
    Adjustment(AdjustmentError),
}

impl fmt::Display for SliceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceError::BadOffset { offset, guide_len } => {
                write!(f, "offset {offset} is outside the guide (length {guide_len})")
            }
            SliceError::LengthMismatch { slices, string_len } => {
                write!(f, "{slices} slices for a string of length {string_len}")
            }
            SliceError::BadLabels { position: 0 } => {
                write!(f, "one label row per slice is required")
            }
            SliceError::BadLabels { position } => write!(
                f,
                "labels at position {position} must give one strictly increasing value per entry"
            ),
            SliceError::ForeignGuide { position, pair } => {
                write!(f, "entry {pair} at position {position} uses a guide outside the set")
            }
            SliceError::YieldMismatch { position, pair, symbol } => {
                write!(f, "entry {pair} at position {position} is not adjacent to `{symbol}`")
            }
            SliceError::NotStart { pair } => {
                write!(f, "the first slice holds {pair}, which does not sit at offset 1")
            }
            SliceError::NotEnd { pair } => {
                write!(f, "the last slice holds {pair}, which does not reach its guide's end")
            }
            SliceError::NoCut { position } => {
                write!(f, "no cut between positions {} and {}", position, position + 1)
            }
            SliceError::UnknownChunk { chunk } => {
                write!(f, "chunk {chunk} does not occur in the slice sequence")
            }
            SliceError::Adjustment(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for SliceError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            SliceError::Adjustment(e) => Some(e),
            _ => None,
        }
    }
}

impl From<AdjustmentError> for SliceError {
    fn from(e: AdjustmentError) -> Self {
        SliceError::Adjustment(e)
    }
}
