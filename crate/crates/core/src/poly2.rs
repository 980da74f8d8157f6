//! The crossing presentation: places as wires, transitions as cells, and
//! explicit swap cells standing in for commutativity.
//!
//! A rule table induces a cell inventory over the free *non*-commutative
//! monoid on its places: one swap cell `tau(x,y) : x.y -> y.x` per pair of
//! distinct places (plus the diagonal `tau(x,x)` in extended mode) and one
//! cell per rule whose boundaries are the sorted word representatives of the
//! rule's source and target multisets. Arrows are [`SlicedArrow`]s over
//! these cells.
//!
//! Letter counts give a projection `pi` back to the multiset world: swap
//! slices project to nothing and rule slices to contextual reduction steps.
//! [`lift_path`] is a section of it, so every reduction path has a wire
//! diagram, and [`lift_permutation`] supplies the swap blocks that glue
//! mismatched boundaries.
//!
//! [`RelationInstance`] carries the identification relations between
//! parallel arrows that project to the same reduction path: collapsing a
//! diagonal swap, swap involution, the Yang–Baxter braiding identity, and
//! naturality of rule cells under crossings with wires they do not touch.
//! [`relations_sound`] checks each instance against the multiset congruence
//! through `pi`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{parikh, Alphabet, Multiset, Symbol, Word};
use crate::net::{equivalent, NetError, NetPath, ReductionStep, RuleTable};
use crate::rws::CommRws;
use crate::slice::{exchange_class, CellBounds, Slice, SliceError, SlicedArrow};

/// A generating cell: a wire swap or a rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell2 {
    Swap(Symbol, Symbol),
    Rule(Symbol),
}

/// Errors from the crossing calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Poly2Error {
    /// Permutation lifting between words with different letter counts.
    ParikhMismatch,
    /// A cell not present in this polygraph (e.g. a diagonal swap outside
    /// extended mode).
    MissingCell(String),
    Slice(SliceError),
    Net(NetError),
}

impl fmt::Display for Poly2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poly2Error::ParikhMismatch => {
                write!(f, "words have different letter counts")
            }
            Poly2Error::MissingCell(name) => write!(f, "no cell {name} in this polygraph"),
            Poly2Error::Slice(e) => write!(f, "{e}"),
            Poly2Error::Net(e) => write!(f, "{e}"),
        }
    }
}

impl From<SliceError> for Poly2Error {
    fn from(e: SliceError) -> Self {
        Poly2Error::Slice(e)
    }
}

impl From<NetError> for Poly2Error {
    fn from(e: NetError) -> Self {
        Poly2Error::Net(e)
    }
}

/// The cell inventory induced by a rule table: swaps plus one cell per rule.
///
/// In base mode only swaps of distinct places exist; extended mode adds the
/// diagonal swaps `tau(x,x)`, which the identification relations need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPolygraph {
    rws: CommRws,
    extended: bool,
}

/// The polygraph of `rws`, without diagonal swaps.
pub fn sigma2(rws: &CommRws) -> TwoPolygraph {
    TwoPolygraph {
        rws: rws.clone(),
        extended: false,
    }
}

/// The polygraph of `rws` with diagonal swaps `tau(x,x)` added.
pub fn sigma2_extended(rws: &CommRws) -> TwoPolygraph {
    TwoPolygraph {
        rws: rws.clone(),
        extended: true,
    }
}

impl TwoPolygraph {
    pub fn rws(&self) -> &CommRws {
        &self.rws
    }

    pub fn one_cells(&self) -> &Alphabet {
        self.rws.places()
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Does this polygraph contain the cell?
    pub fn has_cell(&self, cell: &Cell2) -> bool {
        match cell {
            Cell2::Swap(x, y) => {
                self.rws.places().contains(*x)
                    && self.rws.places().contains(*y)
                    && (self.extended || x != y)
            }
            Cell2::Rule(r) => self.rws.rules().contains(*r),
        }
    }

    /// All cells, swaps first in lexicographic pair order, then rules in
    /// declaration order.
    pub fn cells(&self) -> Vec<Cell2> {
        let mut out = Vec::new();
        for x in self.rws.places().symbols() {
            for y in self.rws.places().symbols() {
                if self.extended || x != y {
                    out.push(Cell2::Swap(x, y));
                }
            }
        }
        for r in self.rws.rules().symbols() {
            out.push(Cell2::Rule(r));
        }
        out
    }

    /// Validate that an arrow only uses cells of this polygraph and that its
    /// slices glue.
    pub fn validate(&self, arrow: &SlicedArrow<Cell2>) -> Result<(), Poly2Error> {
        for slice in &arrow.slices {
            if !self.has_cell(&slice.cell) {
                return Err(Poly2Error::MissingCell(self.cell_name(&slice.cell)));
            }
        }
        arrow.validate(self)?;
        Ok(())
    }
}

impl CellBounds for TwoPolygraph {
    type Cell = Cell2;

    fn cell_source(&self, cell: &Cell2) -> Word {
        match cell {
            Cell2::Swap(x, y) => Word::from_letters([*x, *y]),
            Cell2::Rule(r) => repr_bar(self.rws.rule_source(*r)),
        }
    }

    fn cell_target(&self, cell: &Cell2) -> Word {
        match cell {
            Cell2::Swap(x, y) => Word::from_letters([*y, *x]),
            Cell2::Rule(r) => repr_bar(self.rws.rule_target(*r)),
        }
    }

    fn cell_name(&self, cell: &Cell2) -> String {
        match cell {
            Cell2::Swap(x, y) => format!(
                "tau({},{})",
                self.rws.places().name(*x),
                self.rws.places().name(*y)
            ),
            Cell2::Rule(r) => String::from(self.rws.rules().name(*r)),
        }
    }
}

/// The canonical word representative of a multiset: letters in increasing
/// symbol order, each with its multiplicity. A section of [`parikh`].
pub fn repr_bar(a: &Multiset) -> Word {
    let mut letters = Vec::new();
    for (sym, count) in a.iter() {
        for _ in 0..count {
            letters.push(sym);
        }
    }
    Word::from_letters(letters)
}

/// A swap-only arrow from `u` to `v`, built by bubbling: for each target
/// position left to right, the leftmost occurrence of the wanted letter is
/// moved into place by adjacent swaps. Choosing the leftmost occurrence
/// means two equal letters are never swapped, so the result stays inside the
/// base polygraph.
pub fn lift_permutation(
    poly: &TwoPolygraph,
    u: &Word,
    v: &Word,
) -> Result<SlicedArrow<Cell2>, Poly2Error> {
    if parikh(u) != parikh(v) {
        return Err(Poly2Error::ParikhMismatch);
    }
    let mut current: Vec<Symbol> = u.letters().to_vec();
    let mut arrow = SlicedArrow::identity(u.clone());
    for i in 0..v.len() {
        let want = v.get(i).expect("in range");
        let j = (i..current.len())
            .find(|&j| current[j] == want)
            .expect("equal Parikh images guarantee a remaining occurrence");
        for k in (i..j).rev() {
            let slice = Slice {
                left: Word::from_letters(current[..k].iter().copied()),
                cell: Cell2::Swap(current[k], current[k + 1]),
                right: Word::from_letters(current[k + 2..].iter().copied()),
            };
            current.swap(k, k + 1);
            arrow.slices.push(slice);
        }
    }
    debug_assert_eq!(arrow.end(poly).as_ref(), Ok(v));
    Ok(arrow)
}

/// Project an arrow to the multiset world: swap slices vanish, a rule slice
/// becomes a reduction step whose context is the letter count of its two
/// whiskers.
pub fn pi_path(poly: &TwoPolygraph, arrow: &SlicedArrow<Cell2>) -> Result<NetPath, Poly2Error> {
    poly.validate(arrow)?;
    let mut steps = Vec::new();
    for slice in &arrow.slices {
        match slice.cell {
            Cell2::Swap(_, _) => {}
            Cell2::Rule(r) => steps.push(ReductionStep {
                context: parikh(&slice.left).add(&parikh(&slice.right)),
                rule: r,
            }),
        }
    }
    let path = NetPath {
        start: parikh(&arrow.start),
        steps,
    };
    debug_assert!(path.validate(poly.rws()).is_ok());
    Ok(path)
}

/// Lift a reduction path to a wire diagram, a section of [`pi_path`].
///
/// Each step becomes one rule slice. When the sorted source word of the rule
/// occurs contiguously in the current word, the slice is placed there with
/// no swaps; otherwise a swap block rearranges the word into
/// `context-word . source-word` first.
pub fn lift_path(poly: &TwoPolygraph, path: &NetPath) -> Result<SlicedArrow<Cell2>, Poly2Error> {
    path.validate(poly.rws())?;
    let mut word = repr_bar(&path.start);
    let mut arrow = SlicedArrow::identity(word.clone());
    for step in &path.steps {
        let src = repr_bar(poly.rws().rule_source(step.rule));
        // Validation ensured the step is enabled, so src fits in word.
        let spot =
            (0..=word.len() - src.len()).find(|&j| word.letters()[j..j + src.len()] == *src.letters());
        let slice = match spot {
            Some(j) => Slice {
                left: word.slice(0, j),
                cell: Cell2::Rule(step.rule),
                right: word.slice(j + src.len(), word.len()),
            },
            None => {
                let sorted_context = repr_bar(&step.context);
                let staged = sorted_context.concat(&src);
                let block = lift_permutation(poly, &word, &staged)?;
                arrow.slices.extend(block.slices);
                word = staged;
                Slice {
                    left: sorted_context,
                    cell: Cell2::Rule(step.rule),
                    right: Word::empty(),
                }
            }
        };
        word = slice
            .apply(poly, &word)
            .expect("constructed slice applies to the current word");
        arrow.slices.push(slice);
    }
    debug_assert_eq!(pi_path(poly, &arrow).as_ref(), Ok(path));
    Ok(arrow)
}

/// Are two slicings interchange-equivalent? Decided by class-membership BFS
/// under `cap`.
pub fn equivalent2(
    poly: &TwoPolygraph,
    a: &SlicedArrow<Cell2>,
    b: &SlicedArrow<Cell2>,
    cap: usize,
) -> Result<bool, Poly2Error> {
    if a == b {
        return Ok(true);
    }
    if a.start != b.start || a.len() != b.len() {
        return Ok(false);
    }
    let class = exchange_class(poly, a, cap)?;
    Ok(class.contains(b))
}

/// The four identification families between parallel arrows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationFamily {
    /// `tau(x,x)` collapses to the identity.
    DiagonalUnit,
    /// `tau(y,x)` after `tau(x,y)` collapses to the identity.
    SwapInvolution,
    /// The two braidings of three wires agree.
    YangBaxter,
    /// A rule cell slides across crossings with a wire it does not touch.
    RuleNaturality,
}

/// One concrete relation: two parallel arrows asserted equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    pub family: RelationFamily,
    pub lhs: SlicedArrow<Cell2>,
    pub rhs: SlicedArrow<Cell2>,
}

/// Build an arrow by applying cells at the given wire positions in order.
fn chain(poly: &TwoPolygraph, start: &Word, positions_cells: &[(usize, Cell2)]) -> SlicedArrow<Cell2> {
    let mut word = start.clone();
    let mut slices = Vec::new();
    for (pos, cell) in positions_cells {
        let slice = Slice::at(poly, &word, *pos, cell.clone()).expect("cell applies");
        word = slice.apply(poly, &word).expect("cell applies");
        slices.push(slice);
    }
    SlicedArrow {
        start: start.clone(),
        slices,
    }
}

/// `tau(x,x) == id` on the word `x.x` (extended polygraphs only).
pub fn rel_diagonal_unit(poly: &TwoPolygraph, x: Symbol) -> RelationInstance {
    let start = Word::from_letters([x, x]);
    RelationInstance {
        family: RelationFamily::DiagonalUnit,
        lhs: chain(poly, &start, &[(0, Cell2::Swap(x, x))]),
        rhs: SlicedArrow::identity(start),
    }
}

/// `tau(y,x) . tau(x,y) == id` on the word `x.y`.
pub fn rel_involution(poly: &TwoPolygraph, x: Symbol, y: Symbol) -> RelationInstance {
    let start = Word::from_letters([x, y]);
    RelationInstance {
        family: RelationFamily::SwapInvolution,
        lhs: chain(
            poly,
            &start,
            &[(0, Cell2::Swap(x, y)), (0, Cell2::Swap(y, x))],
        ),
        rhs: SlicedArrow::identity(start),
    }
}

/// The braiding identity on the word `x.y.z`: crossing the outer wires
/// above or below the middle one gives the same arrow.
pub fn rel_yang_baxter(poly: &TwoPolygraph, x: Symbol, y: Symbol, z: Symbol) -> RelationInstance {
    let start = Word::from_letters([x, y, z]);
    RelationInstance {
        family: RelationFamily::YangBaxter,
        lhs: chain(
            poly,
            &start,
            &[
                (0, Cell2::Swap(x, y)),
                (1, Cell2::Swap(x, z)),
                (0, Cell2::Swap(y, z)),
            ],
        ),
        rhs: chain(
            poly,
            &start,
            &[
                (1, Cell2::Swap(y, z)),
                (0, Cell2::Swap(x, z)),
                (1, Cell2::Swap(x, y)),
            ],
        ),
    }
}

/// Which side of the rule block the passing wire starts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PassingSide {
    Left,
    Right,
}

/// A rule cell slides across a crossing with a passing wire `w`.
///
/// On the left side, both arrows run from `w . source-word` to
/// `target-word . w`: either `w` first crosses the whole input block and the
/// rule fires after it, or the rule fires first and `w` crosses the output
/// block. The right side is the mirror image. The crossing blocks are built
/// geometrically, wire by wire, so they may use diagonal swaps when `w`
/// matches a block letter (extended polygraphs only, in that case).
pub fn rel_rule_naturality(
    poly: &TwoPolygraph,
    rule: Symbol,
    w: Symbol,
    side: PassingSide,
) -> RelationInstance {
    let src = repr_bar(poly.rws().rule_source(rule));
    let tgt = repr_bar(poly.rws().rule_target(rule));
    let m = src.len();
    let n = tgt.len();
    let (lhs, rhs) = match side {
        PassingSide::Left => {
            let start = Word::letter(w).concat(&src);
            // w crosses the m input wires left to right, then the rule.
            let mut moves: Vec<(usize, Cell2)> = (0..m)
                .map(|k| (k, Cell2::Swap(w, src.get(k).expect("in range"))))
                .collect();
            moves.push((0, Cell2::Rule(rule)));
            let lhs = chain(poly, &start, &moves);
            // The rule fires behind w, then w crosses the n output wires.
            let mut moves = Vec::with_capacity(n + 1);
            moves.push((1, Cell2::Rule(rule)));
            for k in 0..n {
                moves.push((k, Cell2::Swap(w, tgt.get(k).expect("in range"))));
            }
            (lhs, chain(poly, &start, &moves))
        }
        PassingSide::Right => {
            let start = src.concat(&Word::letter(w));
            // w crosses the input block right to left, then the rule.
            let mut moves: Vec<(usize, Cell2)> = (0..m)
                .rev()
                .map(|k| (k, Cell2::Swap(src.get(k).expect("in range"), w)))
                .collect();
            moves.push((1, Cell2::Rule(rule)));
            let lhs = chain(poly, &start, &moves);
            // The rule fires before w, then w crosses the output block.
            let mut moves = Vec::with_capacity(n + 1);
            moves.push((0, Cell2::Rule(rule)));
            for k in (0..n).rev() {
                moves.push((k, Cell2::Swap(tgt.get(k).expect("in range"), w)));
            }
            (lhs, chain(poly, &start, &moves))
        }
    };
    RelationInstance {
        family: RelationFamily::RuleNaturality,
        lhs,
        rhs,
    }
}

/// Every relation instance over the polygraph's own cells: diagonal units
/// per place, involutions and braidings over all place tuples, and rule
/// naturality per rule, passing wire, and side. Extended polygraphs only —
/// the diagonal families need `tau(x,x)`.
pub fn relation_instances(poly: &TwoPolygraph) -> Vec<RelationInstance> {
    assert!(
        poly.extended,
        "relation instances are stated over the extended polygraph"
    );
    let places: Vec<Symbol> = poly.rws().places().symbols().collect();
    let mut out = Vec::new();
    for &x in &places {
        out.push(rel_diagonal_unit(poly, x));
    }
    for &x in &places {
        for &y in &places {
            out.push(rel_involution(poly, x, y));
        }
    }
    for &x in &places {
        for &y in &places {
            for &z in &places {
                out.push(rel_yang_baxter(poly, x, y, z));
            }
        }
    }
    for rule in poly.rws().rules().symbols() {
        for &w in &places {
            out.push(rel_rule_naturality(poly, rule, w, PassingSide::Left));
            out.push(rel_rule_naturality(poly, rule, w, PassingSide::Right));
        }
    }
    out
}

/// Soundness of one relation instance: both sides must project to
/// swap-equivalent reduction paths.
pub fn relations_sound(
    poly: &TwoPolygraph,
    instance: &RelationInstance,
    cap: usize,
) -> Result<bool, Poly2Error> {
    let p = pi_path(poly, &instance.lhs)?;
    let q = pi_path(poly, &instance.rhs)?;
    Ok(equivalent(poly.rws(), &p, &q, cap)?)
}
