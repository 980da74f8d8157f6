//! Sliced 2-arrows: sequences of whiskered cells between words.
//!
//! A *slice* is one generating cell with a word on each side; it rewrites
//! `left . source(cell) . right` to `left . target(cell) . right`. A
//! [`SlicedArrow`] is a composable sequence of slices from a start word —
//! the standard concrete form for arrows of a free 2-category over a set of
//! generating cells.
//!
//! Two adjacent slices that touch disjoint wire intervals can be
//! interchanged without changing the arrow; [`SlicedArrow::try_exchange`]
//! performs one such move, [`exchange_class`] explores the congruence it
//! generates, and [`SlicedArrow::canon`] picks the least slicing of a class,
//! which makes structural equality decide equality of the underlying arrow.
//!
//! The module is generic over the cell inventory via [`CellBounds`], so the
//! crossing-only calculus and the refined calculus with duplication and
//! split cells share this code.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::Word;

/// A cell inventory: every cell has a source word, a target word, and a
/// printable name.
pub trait CellBounds {
    type Cell: Clone + Eq + Ord + fmt::Debug;
    fn cell_source(&self, cell: &Self::Cell) -> Word;
    fn cell_target(&self, cell: &Self::Cell) -> Word;
    fn cell_name(&self, cell: &Self::Cell) -> String;
}

/// Errors from slice composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceError {
    /// Slice `index` does not apply to the word reached before it.
    Mismatch { index: usize },
    /// Sequential composition of arrows whose boundaries do not meet.
    BoundaryMismatch,
    /// An exchange-class search outgrew its cap.
    CapExceeded { cap: usize },
}

impl fmt::Display for SliceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceError::Mismatch { index } => {
                write!(f, "slice {index} does not apply to the word before it")
            }
            SliceError::BoundaryMismatch => write!(f, "arrow boundaries do not meet"),
            SliceError::CapExceeded { cap } => {
                write!(f, "exchange class exceeded cap of {cap} slicings")
            }
        }
    }
}

/// One whiskered cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slice<C> {
    pub left: Word,
    pub cell: C,
    pub right: Word,
}

impl<C: Clone> Slice<C> {
    /// Index of the first wire the cell touches.
    pub fn position(&self) -> usize {
        self.left.len()
    }

    /// Apply to `word`, checking the exact factorisation.
    pub fn apply<B: CellBounds<Cell = C>>(&self, ctx: &B, word: &Word) -> Option<Word> {
        let src = ctx.cell_source(&self.cell);
        let p = self.left.len();
        if word.len() != p + src.len() + self.right.len() {
            return None;
        }
        if word.letters()[..p] != *self.left.letters() {
            return None;
        }
        if word.letters()[p..p + src.len()] != *src.letters() {
            return None;
        }
        if word.letters()[p + src.len()..] != *self.right.letters() {
            return None;
        }
        Some(self.left.concat(&ctx.cell_target(&self.cell)).concat(&self.right))
    }

    /// Build the slice applying `cell` at wire `position` of `word`;
    /// `None` if the cell's source does not occur there.
    pub fn at<B: CellBounds<Cell = C>>(
        ctx: &B,
        word: &Word,
        position: usize,
        cell: C,
    ) -> Option<Slice<C>> {
        let src = ctx.cell_source(&cell);
        if position + src.len() > word.len() {
            return None;
        }
        if word.letters()[position..position + src.len()] != *src.letters() {
            return None;
        }
        Some(Slice {
            left: word.slice(0, position),
            cell,
            right: word.slice(position + src.len(), word.len()),
        })
    }

    /// Rendered as `left | name | right` with `~` for empty whiskers.
    pub fn render<B: CellBounds<Cell = C>>(
        &self,
        ctx: &B,
        names: &crate::algebra::Alphabet,
    ) -> String {
        let mut out = String::new();
        out.push_str(&self.left.render(names));
        out.push_str(" | ");
        out.push_str(&ctx.cell_name(&self.cell));
        out.push_str(" | ");
        out.push_str(&self.right.render(names));
        out
    }
}

/// A composable sequence of slices from a start word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlicedArrow<C> {
    pub start: Word,
    pub slices: Vec<Slice<C>>,
}

impl<C: Clone + Eq + Ord + fmt::Debug> SlicedArrow<C> {
    /// The identity arrow on `start`.
    pub fn identity(start: Word) -> Self {
        SlicedArrow {
            start,
            slices: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// All words along the arrow (`len() + 1` of them); errors where a slice
    /// fails to apply.
    pub fn words<B: CellBounds<Cell = C>>(&self, ctx: &B) -> Result<Vec<Word>, SliceError> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        out.push(self.start.clone());
        for (i, slice) in self.slices.iter().enumerate() {
            let next = slice
                .apply(ctx, out.last().expect("nonempty"))
                .ok_or(SliceError::Mismatch { index: i })?;
            out.push(next);
        }
        Ok(out)
    }

    /// The end word.
    pub fn end<B: CellBounds<Cell = C>>(&self, ctx: &B) -> Result<Word, SliceError> {
        Ok(self.words(ctx)?.pop().expect("nonempty"))
    }

    /// Check all gluing conditions.
    pub fn validate<B: CellBounds<Cell = C>>(&self, ctx: &B) -> Result<(), SliceError> {
        self.words(ctx).map(|_| ())
    }

    /// Sequential composition `self` then `other`.
    pub fn compose<B: CellBounds<Cell = C>>(
        &self,
        ctx: &B,
        other: &SlicedArrow<C>,
    ) -> Result<SlicedArrow<C>, SliceError> {
        if self.end(ctx)? != other.start {
            return Err(SliceError::BoundaryMismatch);
        }
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().cloned());
        Ok(SlicedArrow {
            start: self.start.clone(),
            slices,
        })
    }

    /// Horizontal composition `self ⊗ other`: `self` runs first with
    /// `other.start` whiskered on the right, then `other` with `self`'s end
    /// word whiskered on the left.
    pub fn tensor<B: CellBounds<Cell = C>>(
        &self,
        ctx: &B,
        other: &SlicedArrow<C>,
    ) -> Result<SlicedArrow<C>, SliceError> {
        let my_end = self.end(ctx)?;
        let mut slices = Vec::with_capacity(self.len() + other.len());
        for s in &self.slices {
            slices.push(Slice {
                left: s.left.clone(),
                cell: s.cell.clone(),
                right: s.right.concat(&other.start),
            });
        }
        for s in &other.slices {
            slices.push(Slice {
                left: my_end.concat(&s.left),
                cell: s.cell.clone(),
                right: s.right.clone(),
            });
        }
        Ok(SlicedArrow {
            start: self.start.concat(&other.start),
            slices,
        })
    }

    /// Whisker the whole arrow: `left ⊗ self ⊗ right`.
    pub fn whisker(&self, left: &Word, right: &Word) -> SlicedArrow<C> {
        SlicedArrow {
            start: left.concat(&self.start).concat(right),
            slices: self
                .slices
                .iter()
                .map(|s| Slice {
                    left: left.concat(&s.left),
                    cell: s.cell.clone(),
                    right: s.right.concat(right),
                })
                .collect(),
        }
    }

    /// Interchange slices `i` and `i + 1` if they touch disjoint wire
    /// intervals; `None` when they interact (or `i` is out of range).
    ///
    /// Writing `p1`, `p2` for the positions of the two cells, the condition
    /// is that `[p2, p2 + |source(cell2)|)` and `[p1, p1 + |target(cell1)|)`
    /// are disjoint in the middle word. Whiskers of both slices are
    /// recomputed so the cells keep acting on the same wires.
    pub fn try_exchange<B: CellBounds<Cell = C>>(&self, ctx: &B, i: usize) -> Option<SlicedArrow<C>> {
        if i + 1 >= self.slices.len() {
            return None;
        }
        // Word before slice i.
        let mut before = self.start.clone();
        for s in &self.slices[..i] {
            before = s.apply(ctx, &before)?;
        }
        let s1 = &self.slices[i];
        let s2 = &self.slices[i + 1];
        let p1 = s1.position();
        let p2 = s2.position();
        let src1 = ctx.cell_source(&s1.cell).len();
        let tgt1 = ctx.cell_target(&s1.cell).len();
        let src2 = ctx.cell_source(&s2.cell).len();
        // Overlap test on the middle word, half-open intervals.
        let overlap = p2 < p1 + tgt1 && p1 < p2 + src2;
        if overlap {
            return None;
        }
        // Position of cell2 in `before`: unchanged if left of cell1,
        // shifted back by cell1's length change if right of it.
        let p2_before = if p2 + src2 <= p1 {
            p2
        } else {
            p2 + src1 - tgt1
        };
        let first = Slice::at(ctx, &before, p2_before, s2.cell.clone())?;
        let mid = first.apply(ctx, &before)?;
        // Position of cell1 in `mid`: unchanged if left of cell2, otherwise
        // shifted by cell2's length change.
        let tgt2 = ctx.cell_target(&s2.cell).len();
        let p1_after = if p1 + tgt1 <= p2 {
            p1
        } else {
            p1 + tgt2 - src2
        };
        let second = Slice::at(ctx, &mid, p1_after, s1.cell.clone())?;
        let mut slices = self.slices.clone();
        slices[i] = first;
        slices[i + 1] = second;
        let out = SlicedArrow {
            start: self.start.clone(),
            slices,
        };
        debug_assert_eq!(
            out.words(ctx).ok().map(|w| w.last().cloned()),
            self.words(ctx).ok().map(|w| w.last().cloned()),
        );
        Some(out)
    }

    /// The canonical slicing of this arrow's interchange class: the
    /// lexicographically least linearisation under the key
    /// `(position, cell)`, computed greedily by always emitting the least
    /// slice that can be bubbled to the front.
    ///
    /// Two slicings of the same arrow canonicalise identically, so
    /// structural equality of canonical forms decides arrow equality.
    pub fn canon<B: CellBounds<Cell = C>>(&self, ctx: &B) -> SlicedArrow<C> {
        let mut work = self.clone();
        let n = work.slices.len();
        for prefix in 0..n {
            let mut best: Option<(usize, C, SlicedArrow<C>)> = None;
            for j in prefix..n {
                // Try to bubble slice j up to `prefix`.
                let mut trial = work.clone();
                let mut ok = true;
                let mut k = j;
                while k > prefix {
                    match trial.try_exchange(ctx, k - 1) {
                        Some(t) => {
                            trial = t;
                            k -= 1;
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let cand = &trial.slices[prefix];
                let key = (cand.position(), cand.cell.clone());
                let better = match &best {
                    None => true,
                    Some((bp, bc, _)) => key < (*bp, bc.clone()),
                };
                if better {
                    best = Some((key.0, key.1, trial));
                }
            }
            work = best.expect("identity bubble always succeeds").2;
        }
        work
    }

    /// Multiline rendering: the start word, then one slice per line.
    pub fn render<B: CellBounds<Cell = C>>(
        &self,
        ctx: &B,
        names: &crate::algebra::Alphabet,
    ) -> String {
        let mut out = self.start.render(names);
        for slice in &self.slices {
            out.push('\n');
            out.push_str(&slice.render(ctx, names));
        }
        out
    }
}

/// The set of slicings reachable from `arrow` by interchanging adjacent
/// independent slices, capped at `cap` members.
pub fn exchange_class<B: CellBounds>(
    ctx: &B,
    arrow: &SlicedArrow<B::Cell>,
    cap: usize,
) -> Result<BTreeSet<SlicedArrow<B::Cell>>, SliceError> {
    let mut seen: BTreeSet<SlicedArrow<B::Cell>> = BTreeSet::new();
    let mut queue: VecDeque<SlicedArrow<B::Cell>> = VecDeque::new();
    seen.insert(arrow.clone());
    queue.push_back(arrow.clone());
    while let Some(a) = queue.pop_front() {
        for i in 0..a.slices.len().saturating_sub(1) {
            if let Some(b) = a.try_exchange(ctx, i) {
                if !seen.contains(&b) {
                    if seen.len() >= cap {
                        return Err(SliceError::CapExceeded { cap });
                    }
                    seen.insert(b.clone());
                    queue.push_back(b);
                }
            }
        }
    }
    Ok(seen)
}

/// Are two slicings of parallel arrows interchange-equivalent? Decided by
/// comparing canonical forms (cheap) — exposed for tests and callers that
/// want the exact congruence rather than a bounded search.
pub fn exchange_equivalent<B: CellBounds>(
    ctx: &B,
    a: &SlicedArrow<B::Cell>,
    b: &SlicedArrow<B::Cell>,
) -> bool {
    a.start == b.start && a.canon(ctx) == b.canon(ctx)
}
