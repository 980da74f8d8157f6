//! The three-dimensional presentation: one 0-cell, no 1-cells, places as
//! 2-cells, rules as 3-cells.
//!
//! With no 1-cells, every 2-arrow's boundary is the unique empty 1-arrow, so
//! any two 2-arrows are composable in both available directions. The two
//! compositions share a unit and satisfy interchange, which forces them to
//! coincide and be commutative — the Eckmann–Hilton collapse, sampled
//! mechanically by [`eckmann_hilton_probe`]. 2-arrows are therefore exactly
//! multisets of 2-cells, and this module represents them as [`Multiset`]
//! directly.
//!
//! 3-cells rewrite those multisets. An arrow of the reduction graph is a
//! triple `(f, cell, g)` of a cell with 2-arrows on both sides, but the
//! deformations of the free 3-category identify `(f, cell, g)` with
//! `(f + g, cell, 0)`; [`canon_triple`] stores that normal form, making
//! deformation equality syntactic. Through [`to_step`]/[`to_triple`] the
//! reduction graph and its exchange congruence coincide square-by-square
//! with the net presentation, so [`exchange3_equivalent`] simply delegates
//! to the path machinery of [`crate::net`].

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Alphabet, Multiset, Symbol};
use crate::net::{equivalent, NetError, NetPath, ReductionStep, RuleTable};
use crate::rws::CommRws;

/// Errors of the three-dimensional presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Poly3Error {
    /// The polygraph has 1-cells, so it is outside the class this
    /// presentation covers.
    HasOneCells,
    /// A symbol used as a 3-cell is not one.
    UnknownCell(Symbol),
    Net(NetError),
}

impl fmt::Display for Poly3Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poly3Error::HasOneCells => {
                write!(f, "polygraph has 1-cells and is outside the net class")
            }
            Poly3Error::UnknownCell(s) => write!(f, "unknown 3-cell symbol #{}", s.index()),
            Poly3Error::Net(e) => write!(f, "{e}"),
        }
    }
}

impl From<NetError> for Poly3Error {
    fn from(e: NetError) -> Self {
        Poly3Error::Net(e)
    }
}

/// A polygraph with a single 0-cell: optional 1-cells (only ever populated
/// to witness a polygraph *outside* the net class), 2-cells, and 3-cells
/// whose boundaries are multisets of 2-cells.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ThreePolygraph {
    one_cells: Alphabet,
    two_cells: Alphabet,
    three_names: Alphabet,
    sources: Vec<Multiset>,
    targets: Vec<Multiset>,
}

impl ThreePolygraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a 1-cell. The net correspondence refuses such polygraphs;
    /// this exists so the refusal can be witnessed.
    pub fn add_one_cell(&mut self, name: &str) -> Result<Symbol, NetError> {
        Ok(self.one_cells.declare(name)?)
    }

    /// Declare a 2-cell.
    pub fn add_two_cell(&mut self, name: &str) -> Result<Symbol, NetError> {
        if self.three_names.lookup(name).is_some() {
            return Err(NetError::Name(crate::algebra::NameError::Duplicate(
                String::from(name),
            )));
        }
        Ok(self.two_cells.declare(name)?)
    }

    /// Declare a 3-cell rewriting `source` to `target`.
    pub fn add_three_cell(
        &mut self,
        name: &str,
        source: Multiset,
        target: Multiset,
    ) -> Result<Symbol, NetError> {
        if self.two_cells.lookup(name).is_some() {
            return Err(NetError::Name(crate::algebra::NameError::Duplicate(
                String::from(name),
            )));
        }
        for (sym, _) in source.iter().chain(target.iter()) {
            if !self.two_cells.contains(sym) {
                return Err(NetError::UnknownPlace(sym));
            }
        }
        let sym = self.three_names.declare(name)?;
        self.sources.push(source);
        self.targets.push(target);
        Ok(sym)
    }

    pub fn one_cells(&self) -> &Alphabet {
        &self.one_cells
    }

    pub fn two_cells(&self) -> &Alphabet {
        &self.two_cells
    }

    pub fn three_cells(&self) -> &Alphabet {
        &self.three_names
    }
}

impl RuleTable for ThreePolygraph {
    fn places(&self) -> &Alphabet {
        &self.two_cells
    }

    fn rules(&self) -> &Alphabet {
        &self.three_names
    }

    fn rule_source(&self, rule: Symbol) -> &Multiset {
        &self.sources[rule.index()]
    }

    fn rule_target(&self, rule: Symbol) -> &Multiset {
        &self.targets[rule.index()]
    }
}

/// The polygraph presenting a commutative rewriting system: letters become
/// 2-cells, rules become 3-cells, boundaries carry over unchanged.
pub fn sigma3(rws: &CommRws) -> ThreePolygraph {
    let mut sources = Vec::with_capacity(rws.rules().len());
    let mut targets = Vec::with_capacity(rws.rules().len());
    for r in rws.rules().symbols() {
        sources.push(rws.rule_source(r).clone());
        targets.push(rws.rule_target(r).clone());
    }
    ThreePolygraph {
        one_cells: Alphabet::new(),
        two_cells: rws.places().clone(),
        three_names: rws.rules().clone(),
        sources,
        targets,
    }
}

/// The rewriting system a no-1-cell polygraph presents, inverse to
/// [`sigma3`] on the nose.
pub fn nr(tp: &ThreePolygraph) -> Result<CommRws, Poly3Error> {
    if !tp.one_cells.is_empty() {
        return Err(Poly3Error::HasOneCells);
    }
    Ok(CommRws::from_parts(
        tp.two_cells.clone(),
        tp.three_names.clone(),
        tp.sources.clone(),
        tp.targets.clone(),
    ))
}

/// An arrow of the reduction graph in deformation normal form: the witness
/// context on one side, nothing on the other.
///
/// Build through [`canon_triple`]; the invariant is `g = 0` with all shared
/// context accumulated in `f`, so derived equality is deformation equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub f: Multiset,
    pub cell: Symbol,
    pub g: Multiset,
}

impl Triple {
    /// The 2-arrow this triple starts from: `f + source(cell) + g`.
    pub fn source(&self, tp: &ThreePolygraph) -> Multiset {
        self.f.add(tp.rule_source(self.cell)).add(&self.g)
    }

    /// The 2-arrow this triple ends at: `f + target(cell) + g`.
    pub fn target(&self, tp: &ThreePolygraph) -> Multiset {
        self.f.add(tp.rule_target(self.cell)).add(&self.g)
    }
}

/// Canonicalize a raw triple `(f, cell, g)` to `(f + g, cell, 0)`.
///
/// Sliding context across the cell is a deformation of the free
/// 3-category, so the normal form represents the deformation class;
/// boundaries are unchanged. Idempotent.
pub fn canon_triple(
    tp: &ThreePolygraph,
    f: Multiset,
    cell: Symbol,
    g: Multiset,
) -> Result<Triple, Poly3Error> {
    if !tp.three_names.contains(cell) {
        return Err(Poly3Error::UnknownCell(cell));
    }
    Ok(Triple {
        f: f.add(&g),
        cell,
        g: Multiset::zero(),
    })
}

/// The triple presenting a net firing: context on the left, nothing right.
pub fn to_triple(tp: &ThreePolygraph, step: &ReductionStep) -> Result<Triple, Poly3Error> {
    canon_triple(tp, step.context.clone(), step.rule, Multiset::zero())
}

/// The net firing a canonical triple presents, inverse to [`to_triple`].
pub fn to_step(tp: &ThreePolygraph, triple: &Triple) -> Result<ReductionStep, Poly3Error> {
    if !tp.three_names.contains(triple.cell) {
        return Err(Poly3Error::UnknownCell(triple.cell));
    }
    Ok(ReductionStep {
        context: triple.f.add(&triple.g),
        rule: triple.cell,
    })
}

/// A composable sequence of triples from a start 2-arrow, mirroring
/// [`NetPath`] one presentation up.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePath {
    pub start: Multiset,
    pub triples: Vec<Triple>,
}

impl TriplePath {
    pub fn empty(start: Multiset) -> Self {
        TriplePath {
            start,
            triples: Vec::new(),
        }
    }

    /// Present a net path triple-by-triple.
    pub fn from_net_path(tp: &ThreePolygraph, path: &NetPath) -> Result<Self, Poly3Error> {
        let mut triples = Vec::with_capacity(path.steps.len());
        for step in &path.steps {
            triples.push(to_triple(tp, step)?);
        }
        Ok(TriplePath {
            start: path.start.clone(),
            triples,
        })
    }

    /// The net path this presents, inverse to [`from_net_path`].
    pub fn to_net_path(&self, tp: &ThreePolygraph) -> Result<NetPath, Poly3Error> {
        let mut steps = Vec::with_capacity(self.triples.len());
        for triple in &self.triples {
            steps.push(to_step(tp, triple)?);
        }
        Ok(NetPath {
            start: self.start.clone(),
            steps,
        })
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// The 2-arrow reached after all triples.
    pub fn end(&self, tp: &ThreePolygraph) -> Multiset {
        match self.triples.last() {
            Some(t) => t.target(tp),
            None => self.start.clone(),
        }
    }

    /// Check gluing: each triple's source is the previous target.
    pub fn validate(&self, tp: &ThreePolygraph) -> Result<(), Poly3Error> {
        self.to_net_path(tp)?.validate(tp)?;
        Ok(())
    }
}

/// Are two triple paths exchange-congruent?
///
/// The exchange generators swap adjacent triples whose demands fit the
/// shared 2-arrow jointly — exactly when the corresponding net-path swap is
/// enabled — so the decision is delegated to the path machinery, keeping
/// the two congruence engines structurally incapable of drifting apart.
pub fn exchange3_equivalent(
    tp: &ThreePolygraph,
    p: &TriplePath,
    q: &TriplePath,
    cap: usize,
) -> Result<bool, Poly3Error> {
    let pn = p.to_net_path(tp)?;
    let qn = q.to_net_path(tp)?;
    Ok(equivalent(tp, &pn, &qn, cap)?)
}

/// A formal composite of 2-arrows by the two compositions available one
/// dimension up: side-by-side and one-after-another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Composite {
    /// A generating 2-arrow, i.e. a multiset of 2-cells.
    Gen(Multiset),
    /// The 0-composition of two composites.
    Tensor(Box<Composite>, Box<Composite>),
    /// The 1-composition of two composites.
    Seq(Box<Composite>, Box<Composite>),
}

impl Composite {
    pub fn gen(m: Multiset) -> Self {
        Composite::Gen(m)
    }

    pub fn tensor(a: Composite, b: Composite) -> Self {
        Composite::Tensor(Box::new(a), Box::new(b))
    }

    pub fn seq(a: Composite, b: Composite) -> Self {
        Composite::Seq(Box::new(a), Box::new(b))
    }

    /// The multiset of generators, counted with multiplicity.
    ///
    /// Both compositions preserve it, the shared unit is the empty
    /// multiset, and it determines the composite up to the axioms — the
    /// uniqueness half of the free-commutative-monoid structure — so this
    /// is the evaluation map of the collapsed 2-arrows.
    pub fn value(&self) -> Multiset {
        match self {
            Composite::Gen(m) => m.clone(),
            Composite::Tensor(a, b) | Composite::Seq(a, b) => a.value().add(&b.value()),
        }
    }
}

/// Sample the Eckmann–Hilton collapse on one pair of composites: both
/// compositions agree and commute, `a⊗b = a∘b = b⊗a`, with the shared
/// empty unit. Returns whether all four evaluations coincide.
pub fn eckmann_hilton_probe(a: &Composite, b: &Composite) -> bool {
    let tensor_ab = Composite::tensor(a.clone(), b.clone()).value();
    let seq_ab = Composite::seq(a.clone(), b.clone()).value();
    let tensor_ba = Composite::tensor(b.clone(), a.clone()).value();
    let seq_ba = Composite::seq(b.clone(), a.clone()).value();
    tensor_ab == seq_ab && seq_ab == tensor_ba && tensor_ba == seq_ba
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{equiv_class, PetriNet};
    use crate::rws::phi;

    fn example() -> (CommRws, [Symbol; 3], [Symbol; 2]) {
        let mut net = PetriNet::new();
        let x = net.add_place("x").unwrap();
        let y = net.add_place("y").unwrap();
        let z = net.add_place("z").unwrap();
        let a = net
            .add_transition(
                "alpha",
                Multiset::singleton(x, 1),
                Multiset::from_counts([(y, 1), (z, 1)]),
            )
            .unwrap();
        let b = net
            .add_transition("beta", Multiset::singleton(y, 2), Multiset::singleton(z, 1))
            .unwrap();
        (phi(&net), [x, y, z], [a, b])
    }

    #[test]
    fn round_trips_are_exact() {
        let (rws, _, _) = example();
        let tp = sigma3(&rws);
        assert_eq!(tp.two_cells().len(), 3);
        assert_eq!(tp.three_cells().len(), 2);
        assert_eq!(nr(&tp).unwrap(), rws);
        assert_eq!(sigma3(&nr(&tp).unwrap()), tp);
        let empty = CommRws::new();
        let te = sigma3(&empty);
        assert!(te.two_cells().is_empty() && te.three_cells().is_empty());
        assert_eq!(nr(&te).unwrap(), empty);
    }

    #[test]
    fn one_cells_put_a_polygraph_outside_the_net_class() {
        let mut tp = ThreePolygraph::new();
        tp.add_one_cell("edge").unwrap();
        tp.add_two_cell("x").unwrap();
        assert_eq!(nr(&tp), Err(Poly3Error::HasOneCells));
    }

    #[test]
    fn triples_store_the_deformation_normal_form() {
        let (rws, [x, y, z], [alpha, beta]) = example();
        let tp = sigma3(&rws);
        let t = canon_triple(
            &tp,
            Multiset::singleton(x, 1),
            alpha,
            Multiset::singleton(y, 1),
        )
        .unwrap();
        assert_eq!(t.f, Multiset::from_counts([(x, 1), (y, 1)]));
        assert!(t.g.is_zero());
        // Idempotent, and boundaries survive canonicalization.
        let again = canon_triple(&tp, t.f.clone(), t.cell, t.g.clone()).unwrap();
        assert_eq!(again, t);
        assert_eq!(
            t.source(&tp),
            Multiset::from_counts([(x, 2), (y, 1)]),
        );
        assert_eq!(
            t.target(&tp),
            Multiset::from_counts([(x, 1), (y, 2), (z, 1)]),
        );
        // Context on the right alone also slides over.
        let r = canon_triple(&tp, Multiset::zero(), beta, Multiset::singleton(z, 3)).unwrap();
        assert_eq!(r.f, Multiset::singleton(z, 3));
        // Unknown cells are refused; z's symbol index is past the 3-cells.
        assert_eq!(
            canon_triple(&tp, Multiset::zero(), z, Multiset::zero()),
            Err(Poly3Error::UnknownCell(z))
        );
    }

    #[test]
    fn steps_and_triples_are_inverse() {
        let (rws, [x, _, z], [alpha, beta]) = example();
        let tp = sigma3(&rws);
        let step = ReductionStep {
            context: Multiset::singleton(z, 3),
            rule: beta,
        };
        let t = to_triple(&tp, &step).unwrap();
        assert_eq!(t.f, Multiset::singleton(z, 3));
        assert_eq!(t.cell, beta);
        assert_eq!(to_step(&tp, &t).unwrap(), step);
        let t2 = canon_triple(
            &tp,
            Multiset::singleton(x, 2),
            alpha,
            Multiset::singleton(z, 1),
        )
        .unwrap();
        assert_eq!(to_triple(&tp, &to_step(&tp, &t2).unwrap()).unwrap(), t2);
    }

    #[test]
    fn exchange_matches_the_net_congruence() {
        let (rws, [x, y, _], [alpha, beta]) = example();
        let tp = sigma3(&rws);
        // Two alphas then two betas from 2x+2y: the congruence class has
        // three members, and the triple presentation sees the same class.
        let start = Multiset::from_counts([(x, 2), (y, 2)]);
        let path = NetPath::replay(&rws, start, &[alpha, alpha, beta, beta]).unwrap();
        let class = equiv_class(&rws, &path, 1000).unwrap();
        assert_eq!(class.len(), 3);
        let lifted: Vec<TriplePath> = class
            .iter()
            .map(|p| TriplePath::from_net_path(&tp, p).unwrap())
            .collect();
        for p in &lifted {
            p.validate(&tp).unwrap();
            for q in &lifted {
                assert!(exchange3_equivalent(&tp, p, q, 1000).unwrap());
            }
            // Round trip through the net presentation is exact.
            let back = TriplePath::from_net_path(&tp, &p.to_net_path(&tp).unwrap()).unwrap();
            assert_eq!(&back, p);
        }
        // A path outside the class stays outside.
        let other = NetPath::replay(&rws, Multiset::singleton(x, 2), &[alpha, alpha]).unwrap();
        let other = TriplePath::from_net_path(&tp, &other).unwrap();
        assert!(!exchange3_equivalent(&tp, &lifted[0], &other, 1000).unwrap());
    }

    #[test]
    fn eckmann_hilton_collapses_the_two_compositions() {
        let (_, [x, y, z], _) = example();
        let a = Composite::gen(Multiset::singleton(x, 1));
        let b = Composite::gen(Multiset::singleton(y, 1));
        assert!(eckmann_hilton_probe(&a, &b));
        assert_eq!(
            Composite::tensor(a.clone(), b.clone()).value(),
            Multiset::from_counts([(x, 1), (y, 1)])
        );
        // A bigger pair, nested differently on each side.
        let big = Composite::seq(
            Composite::gen(Multiset::from_counts([(x, 2), (y, 1)])),
            Composite::tensor(
                Composite::gen(Multiset::singleton(z, 1)),
                Composite::gen(Multiset::zero()),
            ),
        );
        let c = Composite::gen(Multiset::singleton(z, 1));
        assert!(eckmann_hilton_probe(&big, &c));
        assert_eq!(
            Composite::seq(big.clone(), c.clone()).value(),
            Multiset::from_counts([(x, 2), (y, 1), (z, 2)])
        );
        // The empty composite is the unit of both compositions.
        let unit = Composite::gen(Multiset::zero());
        assert!(eckmann_hilton_probe(&unit, &big));
        assert_eq!(Composite::tensor(unit.clone(), big.clone()).value(), big.value());
        assert_eq!(Composite::seq(big.clone(), unit).value(), big.value());
    }

    #[test]
    fn values_decompose_uniquely_over_the_two_cells() {
        let (rws, [x, y, z], _) = example();
        let tp = sigma3(&rws);
        // A 2-arrow is the sum of its per-cell components, and iteration
        // order is canonical, so the decomposition is unique.
        let m = Multiset::from_counts([(z, 4), (x, 1), (y, 2)]);
        let parts: Vec<(Symbol, u64)> = m.iter().collect();
        assert_eq!(parts, [(x, 1), (y, 2), (z, 4)]);
        let mut rebuilt = Multiset::zero();
        for (sym, k) in parts {
            assert!(tp.two_cells().contains(sym));
            rebuilt = rebuilt.add(&Multiset::singleton(sym, k));
        }
        assert_eq!(rebuilt, m);
    }
}
