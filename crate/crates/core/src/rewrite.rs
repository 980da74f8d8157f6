//! The refined wire calculus and its rewriting engine.
//!
//! Every rule cell of the crossing calculus is re-expressed over a finer
//! inventory: swaps `tau(x,y)` for *all* pairs (diagonals included),
//! duplications `dup(x) : x -> x.x`, and single-output splits
//! `split(r,i) : source-word(r) -> i-th target letter`. The translation
//! [`phi_arrow`] sends a crossing-calculus arrow to this calculus, mapping
//! each rule cell to a generalized duplication followed by its split cells.
//!
//! On top of the inventory sits a ground rewriting system ([`rewrite_rules`])
//! orienting the circuit identities — swap involution, the braiding move,
//! cocommutativity, coassociativity, and the naturality rules that sink
//! crossings below duplications and splits. [`normalize`] computes normal
//! forms by leftmost-innermost reduction, matching rule patterns modulo
//! interchange of independent slices; [`check_equiv_r`] decides the
//! generated congruence on parallel arrows by comparing canonical normal
//! forms, and [`critical_pairs`] enumerates minimal overlaps of left-hand
//! sides so local confluence can be checked mechanically.
//!
//! The seed families leave a tail of unjoinable overlaps — crossings of
//! duplicated strands that traveled away from their duplication have no
//! small generating rule. [`complete_rules`] saturates the system inside a
//! bounded overlap window, orienting each stuck pair's normal forms into a
//! bridging rule by strictly decreasing weight; the saturated set is what
//! the deciders should run on.
//!
//! Termination is tracked by an explicit weight: a heat functional plus a
//! position sum (see [`measure`]), asserted to drop on every applied step.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::algebra::{Alphabet, Symbol, Word};
use crate::net::RuleTable;
use crate::poly2::{repr_bar, Cell2, TwoPolygraph};
use crate::rws::CommRws;
use crate::slice::{CellBounds, Slice, SliceError, SlicedArrow};

/// A cell of the refined calculus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BarCell {
    /// `tau(x,y) : x.y -> y.x`, available for every pair of places.
    Swap(Symbol, Symbol),
    /// `dup(x) : x -> x.x`.
    Dup(Symbol),
    /// `split(r,i)`: from the sorted source word of rule `r` to the `i`-th
    /// letter (0-based) of its sorted target word.
    Split(Symbol, usize),
}

/// Errors from the refined calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteError {
    /// A rule produces no output; such rules are outside this calculus.
    EmptyOutput(String),
    /// A rule with empty input must have exactly one output.
    ConstantArity(String),
    /// Reduction did not finish within the given fuel.
    FuelExhausted,
    /// Arrows passed to an equivalence check are not parallel.
    NotParallel,
    /// Saturation met a critical pair whose sides weigh the same; no
    /// orientation of a bridging rule would preserve termination.
    Unorientable(String),
    /// Saturation kept producing rules instead of stabilizing.
    Diverged,
    Slice(SliceError),
}

impl fmt::Display for RewriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteError::EmptyOutput(r) => {
                write!(f, "rule {r} has an empty output and cannot be refined")
            }
            RewriteError::ConstantArity(r) => {
                write!(f, "rule {r} has empty input but more than one output")
            }
            RewriteError::FuelExhausted => write!(f, "normalization ran out of fuel"),
            RewriteError::NotParallel => write!(f, "arrows are not parallel"),
            RewriteError::Unorientable(pair) => {
                write!(f, "critical pair {pair} has equal-weight sides")
            }
            RewriteError::Diverged => write!(f, "rule saturation did not stabilize"),
            RewriteError::Slice(e) => write!(f, "{e}"),
        }
    }
}

impl From<SliceError> for RewriteError {
    fn from(e: SliceError) -> Self {
        RewriteError::Slice(e)
    }
}

/// The refined cell inventory over a rule table.
///
/// Construction validates the calculus' scoping assumptions: no rule with an
/// empty output, and rules with empty input have exactly one output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarPolygraph {
    rws: CommRws,
}

pub fn bar_polygraph(rws: &CommRws) -> Result<BarPolygraph, RewriteError> {
    for r in rws.rules().symbols() {
        let name = String::from(rws.rules().name(r));
        if rws.rule_target(r).is_zero() {
            return Err(RewriteError::EmptyOutput(name));
        }
        if rws.rule_source(r).is_zero() && rws.rule_target(r).total() != 1 {
            return Err(RewriteError::ConstantArity(name));
        }
    }
    Ok(BarPolygraph { rws: rws.clone() })
}

impl BarPolygraph {
    pub fn rws(&self) -> &CommRws {
        &self.rws
    }

    pub fn one_cells(&self) -> &Alphabet {
        self.rws.places()
    }

    /// Number of split cells of rule `r` (its total output count).
    pub fn split_count(&self, r: Symbol) -> usize {
        self.rws.rule_target(r).total() as usize
    }

    /// Input arity of rule `r`.
    pub fn input_arity(&self, r: Symbol) -> usize {
        self.rws.rule_source(r).total() as usize
    }

    /// The `i`-th letter of the sorted target word of rule `r`.
    pub fn split_target(&self, r: Symbol, i: usize) -> Symbol {
        repr_bar(self.rws.rule_target(r))
            .get(i)
            .expect("split index within the rule's output count")
    }

    pub fn has_cell(&self, cell: &BarCell) -> bool {
        match cell {
            BarCell::Swap(x, y) => {
                self.rws.places().contains(*x) && self.rws.places().contains(*y)
            }
            BarCell::Dup(x) => self.rws.places().contains(*x),
            BarCell::Split(r, i) => {
                self.rws.rules().contains(*r) && *i < self.split_count(*r)
            }
        }
    }

    /// All cells: swaps, duplications, then split cells.
    pub fn cells(&self) -> Vec<BarCell> {
        let mut out = Vec::new();
        for x in self.rws.places().symbols() {
            for y in self.rws.places().symbols() {
                out.push(BarCell::Swap(x, y));
            }
        }
        for x in self.rws.places().symbols() {
            out.push(BarCell::Dup(x));
        }
        for r in self.rws.rules().symbols() {
            for i in 0..self.split_count(r) {
                out.push(BarCell::Split(r, i));
            }
        }
        out
    }
}

impl CellBounds for BarPolygraph {
    type Cell = BarCell;

    fn cell_source(&self, cell: &BarCell) -> Word {
        match cell {
            BarCell::Swap(x, y) => Word::from_letters([*x, *y]),
            BarCell::Dup(x) => Word::letter(*x),
            BarCell::Split(r, _) => repr_bar(self.rws.rule_source(*r)),
        }
    }

    fn cell_target(&self, cell: &BarCell) -> Word {
        match cell {
            BarCell::Swap(x, y) => Word::from_letters([*y, *x]),
            BarCell::Dup(x) => Word::from_letters([*x, *x]),
            BarCell::Split(r, i) => Word::letter(self.split_target(*r, *i)),
        }
    }

    fn cell_name(&self, cell: &BarCell) -> String {
        match cell {
            BarCell::Swap(x, y) => format!(
                "tau({},{})",
                self.rws.places().name(*x),
                self.rws.places().name(*y)
            ),
            BarCell::Dup(x) => format!("dup({})", self.rws.places().name(*x)),
            BarCell::Split(r, i) => {
                format!("split({},{})", self.rws.rules().name(*r), i + 1)
            }
        }
    }
}

/// One oriented ground rewrite rule between parallel arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: SlicedArrow<BarCell>,
    pub rhs: SlicedArrow<BarCell>,
}

fn chain(poly: &BarPolygraph, start: &Word, moves: &[(usize, BarCell)]) -> SlicedArrow<BarCell> {
    let mut word = start.clone();
    let mut slices = Vec::new();
    for (pos, cell) in moves {
        let slice = Slice::at(poly, &word, *pos, cell.clone()).expect("rule cell applies");
        word = slice.apply(poly, &word).expect("rule cell applies");
        slices.push(slice);
    }
    SlicedArrow {
        start: start.clone(),
        slices,
    }
}

/// The adopted ground rule set, instantiated over the polygraph's places and
/// rules.
///
/// Orientation discipline: crossings sink toward the outputs. Crossing a
/// duplication duplicates the crossing, crossing a split block collapses the
/// block crossing to one output crossing, constants absorb an adjacent
/// crossing by moving past it, involutions cancel, the braiding move and
/// coassociativity fix a canonical order of interleaved slices. A
/// swap-of-outputs family (absorbing a crossing of two split outputs) is
/// deliberately not included: neither orientation admits a decreasing
/// weight, and no identity of the crossing calculus requires it.
pub fn rewrite_rules(poly: &BarPolygraph) -> Vec<RewriteRule> {
    let places: Vec<Symbol> = poly.rws().places().symbols().collect();
    let names = poly.rws().places().clone();
    let mut out = Vec::new();
    // Involution: tau(a,b) then tau(b,a) cancels.
    for &a in &places {
        for &b in &places {
            let start = Word::from_letters([a, b]);
            out.push(RewriteRule {
                name: format!("inv({},{})", names.name(a), names.name(b)),
                lhs: chain(
                    poly,
                    &start,
                    &[(0, BarCell::Swap(a, b)), (0, BarCell::Swap(b, a))],
                ),
                rhs: SlicedArrow::identity(start),
            });
        }
    }
    // Braiding: crossing at 0 first rewrites to crossing at 1 first.
    for &a in &places {
        for &b in &places {
            for &c in &places {
                let start = Word::from_letters([a, b, c]);
                out.push(RewriteRule {
                    name: format!(
                        "yb({},{},{})",
                        names.name(a),
                        names.name(b),
                        names.name(c)
                    ),
                    lhs: chain(
                        poly,
                        &start,
                        &[
                            (0, BarCell::Swap(a, b)),
                            (1, BarCell::Swap(a, c)),
                            (0, BarCell::Swap(b, c)),
                        ],
                    ),
                    rhs: chain(
                        poly,
                        &start,
                        &[
                            (1, BarCell::Swap(b, c)),
                            (0, BarCell::Swap(a, c)),
                            (1, BarCell::Swap(a, b)),
                        ],
                    ),
                });
            }
        }
    }
    // Cocommutativity: a diagonal crossing under a duplication vanishes.
    for &a in &places {
        let start = Word::letter(a);
        out.push(RewriteRule {
            name: format!("cocomm({})", names.name(a)),
            lhs: chain(
                poly,
                &start,
                &[(0, BarCell::Dup(a)), (0, BarCell::Swap(a, a))],
            ),
            rhs: chain(poly, &start, &[(0, BarCell::Dup(a))]),
        });
    }
    // Coassociativity: duplicate-the-first-copy rewrites to the right comb.
    for &a in &places {
        let start = Word::letter(a);
        out.push(RewriteRule {
            name: format!("coassoc({})", names.name(a)),
            lhs: chain(poly, &start, &[(0, BarCell::Dup(a)), (0, BarCell::Dup(a))]),
            rhs: chain(poly, &start, &[(0, BarCell::Dup(a)), (1, BarCell::Dup(a))]),
        });
    }
    // A transposition of the two outer strands directly under a right comb
    // cancels, like the adjacent transpositions the plain rules reach.
    for &a in &places {
        let start = Word::letter(a);
        out.push(RewriteRule {
            name: format!("cctree({})", names.name(a)),
            lhs: chain(
                poly,
                &start,
                &[
                    (0, BarCell::Dup(a)),
                    (1, BarCell::Dup(a)),
                    (0, BarCell::Swap(a, a)),
                ],
            ),
            rhs: chain(
                poly,
                &start,
                &[(0, BarCell::Dup(a)), (1, BarCell::Dup(a))],
            ),
        });
    }
    // Cocommutativity at one remove: after the two copies of a duplication
    // slide past a passing wire, their own crossing still cancels.
    for &a in &places {
        for &w in &places {
            let start = Word::from_letters([a, w]);
            out.push(RewriteRule {
                name: format!("ccpass_r({},{})", names.name(a), names.name(w)),
                lhs: chain(
                    poly,
                    &start,
                    &[
                        (0, BarCell::Dup(a)),
                        (1, BarCell::Swap(a, w)),
                        (0, BarCell::Swap(a, w)),
                        (1, BarCell::Swap(a, a)),
                    ],
                ),
                rhs: chain(
                    poly,
                    &start,
                    &[
                        (0, BarCell::Dup(a)),
                        (1, BarCell::Swap(a, w)),
                        (0, BarCell::Swap(a, w)),
                    ],
                ),
            });
            let start = Word::from_letters([w, a]);
            out.push(RewriteRule {
                name: format!("ccpass_l({},{})", names.name(a), names.name(w)),
                lhs: chain(
                    poly,
                    &start,
                    &[
                        (1, BarCell::Dup(a)),
                        (0, BarCell::Swap(w, a)),
                        (1, BarCell::Swap(w, a)),
                        (0, BarCell::Swap(a, a)),
                    ],
                ),
                rhs: chain(
                    poly,
                    &start,
                    &[
                        (1, BarCell::Dup(a)),
                        (0, BarCell::Swap(w, a)),
                        (1, BarCell::Swap(w, a)),
                    ],
                ),
            });
        }
    }
    // Duplication naturality: a crossing above a duplication sinks below it,
    // crossing both copies. Two chiralities, by which end is duplicated.
    for &a in &places {
        for &b in &places {
            let start = Word::from_letters([a, b]);
            out.push(RewriteRule {
                name: format!("dupnat_l({},{})", names.name(a), names.name(b)),
                lhs: chain(
                    poly,
                    &start,
                    &[(0, BarCell::Swap(a, b)), (0, BarCell::Dup(b))],
                ),
                rhs: chain(
                    poly,
                    &start,
                    &[
                        (1, BarCell::Dup(b)),
                        (0, BarCell::Swap(a, b)),
                        (1, BarCell::Swap(a, b)),
                    ],
                ),
            });
            out.push(RewriteRule {
                name: format!("dupnat_r({},{})", names.name(a), names.name(b)),
                lhs: chain(
                    poly,
                    &start,
                    &[(0, BarCell::Swap(a, b)), (1, BarCell::Dup(a))],
                ),
                rhs: chain(
                    poly,
                    &start,
                    &[
                        (0, BarCell::Dup(a)),
                        (1, BarCell::Swap(a, b)),
                        (0, BarCell::Swap(a, b)),
                    ],
                ),
            });
        }
    }
    // Split naturality: a wire crossing a whole input block above a split
    // sinks to a single crossing with the output below it. Constants (empty
    // input) absorb the crossing entirely.
    for r in poly.rws().rules().symbols() {
        let src = repr_bar(poly.rws().rule_source(r));
        let m = src.len();
        for i in 0..poly.split_count(r) {
            let y = poly.split_target(r, i);
            // Input symmetry: the block a split consumes is a sorted word, so
            // a crossing of two equal adjacent block letters just above the
            // split cancels.
            for j in 0..m.saturating_sub(1) {
                let a = src.get(j).expect("in range");
                if src.get(j + 1) != Some(a) {
                    continue;
                }
                out.push(RewriteRule {
                    name: format!(
                        "insym({},{},{})",
                        poly.rws().rules().name(r),
                        i + 1,
                        j + 1
                    ),
                    lhs: chain(
                        poly,
                        &src,
                        &[(j, BarCell::Swap(a, a)), (0, BarCell::Split(r, i))],
                    ),
                    rhs: chain(poly, &src, &[(0, BarCell::Split(r, i))]),
                });
            }
            for &w in &places {
                if m == 0 {
                    let start = Word::letter(w);
                    out.push(RewriteRule {
                        name: format!("constnat_l({},{})", names.name(y), names.name(w)),
                        lhs: chain(
                            poly,
                            &start,
                            &[(0, BarCell::Split(r, i)), (0, BarCell::Swap(y, w))],
                        ),
                        rhs: chain(poly, &start, &[(1, BarCell::Split(r, i))]),
                    });
                    out.push(RewriteRule {
                        name: format!("constnat_r({},{})", names.name(y), names.name(w)),
                        lhs: chain(
                            poly,
                            &start,
                            &[(1, BarCell::Split(r, i)), (0, BarCell::Swap(w, y))],
                        ),
                        rhs: chain(poly, &start, &[(0, BarCell::Split(r, i))]),
                    });
                    continue;
                }
                let rule_name = String::from(poly.rws().rules().name(r));
                // Left: w crosses the input block rightward, then the split.
                let start = Word::letter(w).concat(&src);
                let mut moves: Vec<(usize, BarCell)> = (0..m)
                    .map(|k| (k, BarCell::Swap(w, src.get(k).expect("in range"))))
                    .collect();
                moves.push((0, BarCell::Split(r, i)));
                out.push(RewriteRule {
                    name: format!("splitnat_l({},{},{})", rule_name, i + 1, names.name(w)),
                    lhs: chain(poly, &start, &moves),
                    rhs: chain(
                        poly,
                        &start,
                        &[(1, BarCell::Split(r, i)), (0, BarCell::Swap(w, y))],
                    ),
                });
                // Right: w crosses the input block leftward, then the split.
                let start = src.concat(&Word::letter(w));
                let mut moves: Vec<(usize, BarCell)> = (0..m)
                    .rev()
                    .map(|k| (k, BarCell::Swap(src.get(k).expect("in range"), w)))
                    .collect();
                moves.push((1, BarCell::Split(r, i)));
                out.push(RewriteRule {
                    name: format!("splitnat_r({},{},{})", rule_name, i + 1, names.name(w)),
                    lhs: chain(poly, &start, &moves),
                    rhs: chain(
                        poly,
                        &start,
                        &[(0, BarCell::Split(r, i)), (0, BarCell::Swap(y, w))],
                    ),
                });
                // Interior: w starts between the j-th and (j+1)-st block
                // letter and must exit before the split fires. Exiting left
                // (j crossings, split, possibly a crossing below) and
                // exiting right are parallel; orient toward the nearer
                // exit, which is the strictly lighter side.
                for j in 1..m {
                    let start = src
                        .slice(0, j)
                        .concat(&Word::letter(w))
                        .concat(&src.slice(j, m));
                    let mut exit_left: Vec<(usize, BarCell)> = (0..j)
                        .rev()
                        .map(|k| (k, BarCell::Swap(src.get(k).expect("in range"), w)))
                        .collect();
                    exit_left.push((1, BarCell::Split(r, i)));
                    let mut exit_right: Vec<(usize, BarCell)> = (j..m)
                        .map(|k| (k, BarCell::Swap(w, src.get(k).expect("in range"))))
                        .collect();
                    exit_right.push((0, BarCell::Split(r, i)));
                    // Wire ends right of the output.
                    let mut left_then_under = exit_left.clone();
                    left_then_under.push((0, BarCell::Swap(w, y)));
                    let (lhs, rhs) = if 2 * j >= m {
                        (left_then_under.clone(), exit_right.clone())
                    } else {
                        (exit_right.clone(), left_then_under.clone())
                    };
                    out.push(RewriteRule {
                        name: format!(
                            "midnat_r({},{},{},{})",
                            rule_name,
                            i + 1,
                            names.name(w),
                            j
                        ),
                        lhs: chain(poly, &start, &lhs),
                        rhs: chain(poly, &start, &rhs),
                    });
                    // Wire ends left of the output.
                    let mut right_then_under = exit_right.clone();
                    right_then_under.push((0, BarCell::Swap(y, w)));
                    let (lhs, rhs) = if 2 * j > m {
                        (exit_left.clone(), right_then_under.clone())
                    } else {
                        (right_then_under.clone(), exit_left.clone())
                    };
                    out.push(RewriteRule {
                        name: format!(
                            "midnat_l({},{},{},{})",
                            rule_name,
                            i + 1,
                            names.name(w),
                            j
                        ),
                        lhs: chain(poly, &start, &lhs),
                        rhs: chain(poly, &start, &rhs),
                    });
                }
            }
        }
    }
    // A duplicated edge letter of a split's block: the split may consume
    // either copy, with the survivor passing under the output or weaving out
    // sideways. The two readings are parallel; orient toward the lighter
    // side, which flips once the weave is longer than the undercrossing.
    for r in poly.rws().rules().symbols() {
        let src = repr_bar(poly.rws().rule_source(r));
        let m = src.len();
        if m == 0 {
            continue;
        }
        let first = src.get(0).expect("nonempty block");
        let last = src.get(m - 1).expect("nonempty block");
        let rule_name = String::from(poly.rws().rules().name(r));
        for i in 0..poly.split_count(r) {
            let y = poly.split_target(r, i);
            // Survivor on the right (the first block letter is duplicated).
            let eaten = vec![
                (0, BarCell::Dup(first)),
                (1, BarCell::Split(r, i)),
                (0, BarCell::Swap(first, y)),
            ];
            let mut woven = vec![(0, BarCell::Dup(first))];
            for k in 1..m {
                woven.push((k, BarCell::Swap(first, src.get(k).expect("in range"))));
            }
            woven.push((0, BarCell::Split(r, i)));
            let (lhs, rhs) = if m == 1 { (eaten, woven) } else { (woven, eaten) };
            out.push(RewriteRule {
                name: format!("ccsplit_r({},{})", rule_name, i + 1),
                lhs: chain(poly, &src, &lhs),
                rhs: chain(poly, &src, &rhs),
            });
            // Survivor on the left (the last block letter is duplicated).
            let eaten = vec![
                (m - 1, BarCell::Dup(last)),
                (0, BarCell::Split(r, i)),
                (0, BarCell::Swap(y, last)),
            ];
            let mut woven = vec![(m - 1, BarCell::Dup(last))];
            for k in (0..m - 1).rev() {
                woven.push((k, BarCell::Swap(src.get(k).expect("in range"), last)));
            }
            woven.push((1, BarCell::Split(r, i)));
            let (lhs, rhs) = if m == 1 { (eaten, woven) } else { (woven, eaten) };
            out.push(RewriteRule {
                name: format!("ccsplit_l({},{})", rule_name, i + 1),
                lhs: chain(poly, &src, &lhs),
                rhs: chain(poly, &src, &rhs),
            });
        }
    }
    for rule in &out {
        debug_assert_eq!(rule.lhs.start, rule.rhs.start, "{}", rule.name);
        debug_assert_eq!(
            rule.lhs.end(poly).ok(),
            rule.rhs.end(poly).ok(),
            "{}",
            rule.name
        );
    }
    out
}

/// The termination weight of an arrow: `(heat, position sum)`.
///
/// Heat: every output wire of the arrow is charged 1, charges propagate
/// upward — a duplication's input carries one more than its two outputs
/// together, a split's inputs each carry one more than its output, swaps
/// route charges along strands — and each swap slice heats by the product of
/// its two output charges. Heat is a strand quantity, so it does not depend
/// on the slicing. Every rule strictly lowers heat except the braiding and
/// coassociativity moves, which keep it and strictly raise the position sum
/// of the slices they touch; the engine asserts this shape on every step.
pub fn measure(poly: &BarPolygraph, arrow: &SlicedArrow<BarCell>) -> (u128, u64) {
    let end = arrow.end(poly).expect("valid arrow");
    let mut charge: Vec<u128> = vec![1; end.len()];
    let mut heat: u128 = 0;
    let mut pos_sum: u64 = 0;
    for slice in arrow.slices.iter().rev() {
        let p = slice.position();
        pos_sum = pos_sum.checked_add(p as u64).expect("position sum fits");
        let t = poly.cell_target(&slice.cell).len();
        let outs: Vec<u128> = charge[p..p + t].to_vec();
        let ins: Vec<u128> = match &slice.cell {
            BarCell::Swap(_, _) => {
                heat = heat
                    .checked_add(outs[0].checked_mul(outs[1]).expect("heat fits"))
                    .expect("heat fits");
                vec![outs[1], outs[0]]
            }
            BarCell::Dup(_) => vec![outs[0] + outs[1] + 1],
            BarCell::Split(r, _) => {
                let m = poly.input_arity(*r);
                vec![outs[0] + 1; m]
            }
        };
        charge.splice(p..p + t, ins);
    }
    (heat, pos_sum)
}

/// Try to rewrite with `rule` anchored at slice `i`: later slices are
/// bubbled down by interchange to assemble the left-hand side as a
/// contiguous block — slices that block assembly but commute with the whole
/// block are hoisted above it instead — and the block is then verified to
/// be an exact whiskering of the pattern and replaced by the right-hand
/// side. Returns the rearranged arrow and its rewritten form.
fn try_rewrite_at(
    poly: &BarPolygraph,
    rule: &RewriteRule,
    arrow: &SlicedArrow<BarCell>,
    anchor: usize,
) -> Option<(SlicedArrow<BarCell>, SlicedArrow<BarCell>)> {
    let k = rule.lhs.len();
    debug_assert!(k > 0, "rules have nonempty left-hand sides");
    if anchor + k > arrow.len() || arrow.slices[anchor].cell != rule.lhs.slices[0].cell {
        return None;
    }
    let mut work = arrow.clone();
    let mut i = anchor;
    let mut t = 1;
    while t < k {
        if i + k > work.len() {
            return None;
        }
        let d = work.slices[i]
            .position()
            .checked_sub(rule.lhs.slices[0].position())?;
        let want_cell = &rule.lhs.slices[t].cell;
        let want_pos = rule.lhs.slices[t].position() + d;
        // Bounded scan: bring a matching later slice adjacent to the block.
        let mut found = false;
        for j in (i + t)..work.len().min(i + t + 16) {
            let mut trial = work.clone();
            let mut pos = j;
            let mut ok = true;
            while pos > i + t {
                match trial.try_exchange(poly, pos - 1) {
                    Some(next) => {
                        trial = next;
                        pos -= 1;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok
                && trial.slices[i + t].cell == *want_cell
                && trial.slices[i + t].position() == want_pos
            {
                work = trial;
                found = true;
                break;
            }
        }
        if found {
            t += 1;
            continue;
        }
        // Hoist the slice right after the partial block above the block,
        // shifting the block one step down the arrow.
        let mut trial = work.clone();
        let mut ok = i + t < trial.len();
        if ok {
            for p in (i..i + t).rev() {
                match trial.try_exchange(poly, p) {
                    Some(next) => trial = next,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if !ok {
            return None;
        }
        work = trial;
        i += 1;
    }
    // Block occupies i..i + k. Verify it is exactly the whiskered pattern.
    let d = work.slices[i]
        .position()
        .checked_sub(rule.lhs.slices[0].position())?;
    let mut base = work.start.clone();
    for s in &work.slices[..i] {
        base = s.apply(poly, &base)?;
    }
    let width = rule.lhs.start.len();
    if d + width > base.len() {
        return None;
    }
    let u = base.slice(0, d);
    let v = base.slice(d + width, base.len());
    let expected = rule.lhs.whisker(&u, &v);
    let block = SlicedArrow {
        start: base,
        slices: work.slices[i..i + k].to_vec(),
    };
    if block != expected {
        return None;
    }
    let mut slices = work.slices[..i].to_vec();
    slices.extend(rule.rhs.whisker(&u, &v).slices);
    slices.extend(work.slices[i + k..].iter().cloned());
    let rewritten = SlicedArrow {
        start: work.start.clone(),
        slices,
    };
    debug_assert!(rewritten.validate(poly).is_ok());
    Some((work, rewritten))
}

/// Leftmost-innermost redex search over all rules.
fn find_redex(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    arrow: &SlicedArrow<BarCell>,
) -> Option<(SlicedArrow<BarCell>, SlicedArrow<BarCell>)> {
    for i in 0..arrow.len() {
        for rule in rules {
            if let Some(found) = try_rewrite_at(poly, rule, arrow, i) {
                return Some(found);
            }
        }
    }
    None
}

/// Reduce to normal form, asserting the weight drop on every step; the
/// result is returned in canonical slicing, so normal forms of equal arrows
/// compare structurally equal.
pub fn normalize(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    arrow: &SlicedArrow<BarCell>,
    fuel: usize,
) -> Result<SlicedArrow<BarCell>, RewriteError> {
    arrow.validate(poly)?;
    let mut work = arrow.clone();
    for _ in 0..fuel {
        match find_redex(poly, rules, &work) {
            None => return Ok(work.canon(poly)),
            Some((before, after)) => {
                let (h0, p0) = measure(poly, &before);
                let (h1, p1) = measure(poly, &after);
                assert!(
                    h1 < h0 || (h1 == h0 && p1 > p0),
                    "rewrite step failed to decrease the weight"
                );
                work = after;
            }
        }
    }
    Err(RewriteError::FuelExhausted)
}

/// Decide the rule congruence on parallel arrows by comparing canonical
/// normal forms.
pub fn check_equiv_r(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    a: &SlicedArrow<BarCell>,
    b: &SlicedArrow<BarCell>,
    fuel: usize,
) -> Result<bool, RewriteError> {
    if a.start != b.start || a.end(poly)? != b.end(poly)? {
        return Ok(false);
    }
    Ok(normalize(poly, rules, a, fuel)? == normalize(poly, rules, b, fuel)?)
}

/// Emit adjacent swaps rearranging `word` so that its letters appear in the
/// order given by `target`, a permutation of `word`'s indices (`target[i]`
/// is the index in `word` of the letter that must land at position `i`).
/// Tracks indices, not letters, so geometrically distinct but equally
/// colored wires stay distinguished.
fn permute_to_indices(
    poly: &BarPolygraph,
    word: &Word,
    target: &[usize],
) -> Vec<Slice<BarCell>> {
    debug_assert_eq!(word.len(), target.len());
    let mut order: Vec<usize> = (0..word.len()).collect();
    let mut letters: Vec<Symbol> = word.letters().to_vec();
    let mut slices = Vec::new();
    for i in 0..target.len() {
        let j = (i..order.len())
            .find(|&j| order[j] == target[i])
            .expect("target is a permutation");
        for k in (i..j).rev() {
            slices.push(Slice {
                left: Word::from_letters(letters[..k].iter().copied()),
                cell: BarCell::Swap(letters[k], letters[k + 1]),
                right: Word::from_letters(letters[k + 2..].iter().copied()),
            });
            letters.swap(k, k + 1);
            order.swap(k, k + 1);
        }
    }
    let _ = poly;
    slices
}

/// A generalized duplication: an arrow from `u` to `u` repeated `n` times,
/// built from letterwise duplications and crossings, then normalized. The
/// adopted rule set gives it a unique normal form, which is what the
/// refined translation of a rule cell stacks its splits on.
pub fn delta_n(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    u: &Word,
    n: usize,
    fuel: usize,
) -> Result<SlicedArrow<BarCell>, RewriteError> {
    assert!(n >= 1, "at least one copy");
    let m = u.len();
    let mut arrow = SlicedArrow::identity(u.clone());
    let mut word = u.clone();
    for _ in 1..n {
        // Duplicate the front block letter by letter: u.w -> u.u.w
        // interleaved, then uninterleave the first 2m letters.
        for k in 0..m {
            let slice = Slice::at(poly, &word, 2 * k, BarCell::Dup(u.get(k).expect("in range")))
                .expect("front block duplication applies");
            word = slice.apply(poly, &word).expect("applies");
            arrow.slices.push(slice);
        }
        let mut target: Vec<usize> = Vec::with_capacity(word.len());
        target.extend((0..2 * m).step_by(2)); // copy 1: even positions
        target.extend((1..2 * m).step_by(2)); // copy 2: odd positions
        target.extend(2 * m..word.len()); // untouched tail
        let block = permute_to_indices(poly, &word, &target);
        for slice in block {
            word = slice.apply(poly, &word).expect("applies");
            arrow.slices.push(slice);
        }
    }
    debug_assert_eq!(arrow.end(poly).ok().map(|w| w.len()), Some(m * n));
    normalize(poly, rules, &arrow, fuel)
}

/// The refined image of one crossing-calculus cell: swaps map to
/// themselves, a rule cell with `n` outputs maps to the generalized
/// duplication making `n` copies of its source word followed by the tensor
/// of its `n` split cells.
pub fn phi_cell(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    cell: &Cell2,
    fuel: usize,
) -> Result<SlicedArrow<BarCell>, RewriteError> {
    match cell {
        Cell2::Swap(x, y) => {
            let start = Word::from_letters([*x, *y]);
            Ok(chain(poly, &start, &[(0, BarCell::Swap(*x, *y))]))
        }
        Cell2::Rule(r) => {
            let src = repr_bar(poly.rws().rule_source(*r));
            let n = poly.split_count(*r);
            let mut arrow = delta_n(poly, rules, &src, n, fuel)?;
            let mut word = arrow.end(poly)?;
            for i in 0..n {
                let slice = Slice::at(poly, &word, i, BarCell::Split(*r, i))
                    .expect("split consumes its block");
                word = slice.apply(poly, &word).expect("applies");
                arrow.slices.push(slice);
            }
            Ok(arrow)
        }
    }
}

/// The refined image of a whole crossing-calculus arrow: each slice maps to
/// the whiskered image of its cell, composed in order. A strict functor —
/// boundaries are preserved on the nose.
pub fn phi_arrow(
    poly: &BarPolygraph,
    poly2: &TwoPolygraph,
    rules: &[RewriteRule],
    arrow: &SlicedArrow<Cell2>,
    fuel: usize,
) -> Result<SlicedArrow<BarCell>, RewriteError> {
    debug_assert_eq!(poly.rws(), poly2.rws());
    let mut out = SlicedArrow::identity(arrow.start.clone());
    for slice in &arrow.slices {
        let image = phi_cell(poly, rules, &slice.cell, fuel)?;
        out.slices
            .extend(image.whisker(&slice.left, &slice.right).slices);
    }
    debug_assert!(out.validate(poly).is_ok());
    Ok(out)
}

/// A minimal overlap of two rule left-hand sides with its two one-step
/// reducts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalPair {
    pub rule_a: String,
    pub rule_b: String,
    pub peak: SlicedArrow<BarCell>,
    pub left: SlicedArrow<BarCell>,
    pub right: SlicedArrow<BarCell>,
}

/// Enumerate contiguous minimal overlaps: rule B's pattern starts on slice
/// `o` of rule A's pattern (sharing at least that slice, with the lateral
/// shift forced by the shared slice), within a bounded window.
pub fn critical_pairs(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    max_slices: usize,
    max_wires: usize,
) -> Vec<CriticalPair> {
    let mut seen: BTreeSet<(SlicedArrow<BarCell>, SlicedArrow<BarCell>, SlicedArrow<BarCell>)> =
        BTreeSet::new();
    let mut out = Vec::new();
    for a in rules {
        let ka = a.lhs.len();
        let words_a = a.lhs.words(poly).expect("rule sides are valid");
        for b in rules {
            let kb = b.lhs.len();
            for o in 0..ka {
                if core::ptr::eq(a, b) && o == 0 {
                    continue; // the trivial self-overlap
                }
                let shared = (ka - o).min(kb);
                // The shared slice forces the lateral shift.
                let Some(d) = a.lhs.slices[o]
                    .position()
                    .checked_sub(b.lhs.slices[0].position())
                else {
                    continue;
                };
                let agree = (0..shared).all(|t| {
                    a.lhs.slices[o + t].cell == b.lhs.slices[t].cell
                        && a.lhs.slices[o + t].position() == b.lhs.slices[t].position() + d
                });
                if !agree {
                    continue;
                }
                // B's pattern word must fit the word of A at index o,
                // padding the peak on the right where B sticks out.
                let wo = &words_a[o];
                let wb = &b.lhs.start;
                if (0..wb.len().min(wo.len().saturating_sub(d)))
                    .any(|p| wo.get(d + p) != wb.get(p))
                {
                    continue;
                }
                let rho = (d + wb.len()).saturating_sub(wo.len());
                let pad = wb.slice(wb.len() - rho, wb.len());
                // Assemble the peak: A's pattern (padded), then B's tail.
                let mut peak = a.lhs.whisker(&Word::empty(), &pad);
                let mut word = peak.end(poly).expect("valid");
                let mut b_tail = Vec::new();
                let mut ok = true;
                for t in shared..kb {
                    let pos = b.lhs.slices[t].position() + d;
                    match Slice::at(poly, &word, pos, b.lhs.slices[t].cell.clone()) {
                        Some(slice) => {
                            word = slice.apply(poly, &word).expect("applies");
                            b_tail.push(slice);
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
                peak.slices.extend(b_tail.iter().cloned());
                if peak.len() > max_slices
                    || peak.words(poly)
                        .map(|ws| ws.iter().map(|w| w.len()).max().unwrap_or(0))
                        .unwrap_or(usize::MAX)
                        > max_wires
                {
                    continue;
                }
                // Left reduct: rewrite by A at the top of the peak.
                let u = Word::empty();
                let v = pad.clone();
                let mut left = a.rhs.whisker(&u, &v);
                left.slices.extend(b_tail.iter().cloned());
                // Right reduct: rewrite by B inside the peak.
                let Some((_, right)) =
                    try_rewrite_at(poly, b, &peak, o)
                else {
                    continue;
                };
                if left == right {
                    continue;
                }
                debug_assert!(left.validate(poly).is_ok());
                debug_assert_eq!(left.end(poly).ok(), right.end(poly).ok());
                if seen.insert((peak.clone(), left.clone(), right.clone())) {
                    out.push(CriticalPair {
                        rule_a: a.name.clone(),
                        rule_b: b.name.clone(),
                        peak,
                        left,
                        right,
                    });
                }
            }
        }
    }
    out
}

/// Are both reducts of a critical pair joinable to the same normal form?
pub fn joinable(
    poly: &BarPolygraph,
    rules: &[RewriteRule],
    pair: &CriticalPair,
    fuel: usize,
) -> Result<bool, RewriteError> {
    check_equiv_r(poly, rules, &pair.left, &pair.right, fuel)
}

/// The default overlap window for saturation: peaks of at most four slices
/// on at most six wires.
pub const WINDOW_SLICES: usize = 4;
pub const WINDOW_WIRES: usize = 6;

/// Saturate the seed rules until every critical pair in the window joins.
///
/// Crossings between strands that a duplication or a split made
/// interchangeable still cancel after the strands travel, and no finite set
/// of small rules covers every such shape. Each round enumerates the
/// window's critical pairs and turns every stuck pair into a bridging rule,
/// oriented from the heavier normal form to the lighter one, so the weight
/// argument of [`measure`] keeps covering the grown set. A pair whose sides
/// weigh the same cannot be bridged this way and is reported as an error
/// instead of risking a loop.
///
/// The deciders should run on the saturated set; the seed set is enough for
/// the identities the unit tests pin down, but only the saturated set is
/// checked to be locally confluent at desk scale.
pub fn complete_rules(
    poly: &BarPolygraph,
    max_slices: usize,
    max_wires: usize,
    fuel: usize,
) -> Result<Vec<RewriteRule>, RewriteError> {
    let mut rules = rewrite_rules(poly);
    let mut stamp = 0usize;
    for _ in 0..10 {
        let pairs = critical_pairs(poly, &rules, max_slices, max_wires);
        let before = rules.len();
        for pair in &pairs {
            // Rules pushed earlier in this round already count: a pair they
            // bridge needs no rule of its own.
            if joinable(poly, &rules, pair, fuel)? {
                continue;
            }
            let left = normalize(poly, &rules, &pair.left, fuel)?;
            let right = normalize(poly, &rules, &pair.right, fuel)?;
            let (lhs, rhs) = match measure(poly, &left).cmp(&measure(poly, &right)) {
                Ordering::Greater => (left, right),
                Ordering::Less => (right, left),
                Ordering::Equal => {
                    return Err(RewriteError::Unorientable(format!(
                        "{} / {}",
                        pair.rule_a, pair.rule_b
                    )))
                }
            };
            stamp += 1;
            rules.push(RewriteRule {
                name: format!("sat{stamp}"),
                lhs,
                rhs,
            });
        }
        if rules.len() == before {
            return Ok(rules);
        }
    }
    Err(RewriteError::Diverged)
}
