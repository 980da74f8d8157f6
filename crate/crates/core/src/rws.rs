//! Commutative word rewriting systems and the structural translation
//! to and from place/transition nets.
//!
//! A commutative system rewrites multisets (commutative words) by rules
//! `source -> target`; applying a rule inside a context `c` rewrites
//! `c + source` to `c + target`. That is exactly the firing rule of a net, so
//! the two presentations differ only in field names: [`phi`] and [`psi`] are
//! plain repackagings and are exact inverses. [`iso_check`] makes the claim
//! mechanical on bounded reachability graphs: identical node sets, identical
//! arcs, and matching independence squares on both sides.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Alphabet, Multiset, Symbol};
use crate::net::{
    fire, reach, NetError, PetriNet, ReachLimits, ReductionStep, RuleTable,
};

/// A commutative word rewriting system: an alphabet and a finite family of
/// rules, each rewriting a source multiset to a target multiset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommRws {
    alphabet: Alphabet,
    rule_names: Alphabet,
    sources: Vec<Multiset>,
    targets: Vec<Multiset>,
}

impl CommRws {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a letter of the alphabet.
    pub fn add_letter(&mut self, name: &str) -> Result<Symbol, NetError> {
        if self.rule_names.lookup(name).is_some() {
            return Err(NetError::Name(crate::algebra::NameError::Duplicate(
                String::from(name),
            )));
        }
        Ok(self.alphabet.declare(name)?)
    }

    /// Declare a rule `source -> target`.
    pub fn add_rule(
        &mut self,
        name: &str,
        source: Multiset,
        target: Multiset,
    ) -> Result<Symbol, NetError> {
        if self.alphabet.lookup(name).is_some() {
            return Err(NetError::Name(crate::algebra::NameError::Duplicate(
                String::from(name),
            )));
        }
        for (sym, _) in source.iter().chain(target.iter()) {
            if !self.alphabet.contains(sym) {
                return Err(NetError::UnknownPlace(sym));
            }
        }
        let sym = self.rule_names.declare(name)?;
        self.sources.push(source);
        self.targets.push(target);
        Ok(sym)
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        rule_names: Alphabet,
        sources: Vec<Multiset>,
        targets: Vec<Multiset>,
    ) -> Self {
        CommRws {
            alphabet,
            rule_names,
            sources,
            targets,
        }
    }
}

impl RuleTable for CommRws {
    fn places(&self) -> &Alphabet {
        &self.alphabet
    }

    fn rules(&self) -> &Alphabet {
        &self.rule_names
    }

    fn rule_source(&self, rule: Symbol) -> &Multiset {
        &self.sources[rule.index()]
    }

    fn rule_target(&self, rule: Symbol) -> &Multiset {
        &self.targets[rule.index()]
    }
}

/// Net-to-rewriting translation: places become letters, transitions become
/// rules, consumption becomes the rule source, production the rule target.
pub fn phi(net: &PetriNet) -> CommRws {
    let (places, transitions, pre, post) = net.clone().into_parts();
    CommRws::from_parts(places, transitions, pre, post)
}

/// Rewriting-to-net translation, inverse to [`phi`] on the nose.
pub fn psi(rws: &CommRws) -> PetriNet {
    PetriNet::from_parts(
        rws.alphabet.clone(),
        rws.rule_names.clone(),
        rws.sources.clone(),
        rws.targets.clone(),
    )
}

/// Apply `rule` inside `context`: the step rewriting `context + source` to
/// `context + target`. Errors if the rule is unknown.
pub fn apply_rule(
    rws: &CommRws,
    context: &Multiset,
    rule: Symbol,
) -> Result<ReductionStep, NetError> {
    if !rws.rule_names.contains(rule) {
        return Err(NetError::UnknownRule(rule));
    }
    Ok(ReductionStep {
        context: context.clone(),
        rule,
    })
}

/// The verdict of [`iso_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub nodes: usize,
    pub arcs: usize,
    /// Independence squares whose four arcs were verified on both sides.
    pub squares: usize,
    pub truncated: bool,
    pub mismatches: Vec<String>,
}

impl IsoReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare the bounded reachability graph of `net` from `start` with the
/// reduction graph of its rewriting translation over the same markings.
///
/// The translation keeps markings and contexts literally identical, so the
/// expected bijection is the identity: equal node sets, equal arc sets, and
/// for every jointly enabled pair of rules at a node, the same independence
/// square on both sides. Any discrepancy is reported as a rendered mismatch.
pub fn iso_check(net: &PetriNet, start: &Multiset, limits: ReachLimits) -> IsoReport {
    let rws = phi(net);
    let g_net = reach(net, start, limits);
    let g_rws = reach(&rws, start, limits);
    let names = net.places();
    let mut mismatches = Vec::new();

    if g_net.nodes != g_rws.nodes {
        mismatches.push(format!(
            "node sets differ: {} vs {}",
            g_net.node_count(),
            g_rws.node_count()
        ));
    }
    if g_net.arcs != g_rws.arcs {
        mismatches.push(String::from("arc sets differ"));
    }
    if g_net.truncated != g_rws.truncated {
        mismatches.push(String::from("truncation flags differ"));
    }

    // Independence squares. For every node and every jointly enabled pair of
    // rules, firing in either order must land on the same marking, and all
    // four arcs must be present in both graphs (unless truncation cut the
    // far corner out of the node set).
    let mut squares = 0usize;
    let rules: Vec<Symbol> = net.rules().symbols().collect();
    for mu in &g_net.nodes {
        for (ai, &a) in rules.iter().enumerate() {
            for &b in &rules[ai..] {
                let joint = net.rule_source(a).add(net.rule_source(b));
                if !joint.leq(mu) {
                    continue;
                }
                let (via_a, step_a) = fire(net, mu, a).expect("enabled");
                let (far_ab, step_ab) = fire(net, &via_a, b).expect("enabled after a");
                let (via_b, step_b) = fire(&rws, mu, b).expect("enabled");
                let (far_ba, step_ba) = fire(&rws, &via_b, a).expect("enabled after b");
                if far_ab != far_ba {
                    mismatches.push(format!(
                        "square at {} under {}/{} closes differently",
                        mu.render(names),
                        net.rules().name(a),
                        net.rules().name(b)
                    ));
                    continue;
                }
                if !(g_net.contains(&via_a)
                    && g_net.contains(&via_b)
                    && g_net.contains(&far_ab))
                {
                    // Truncation cut the square; nothing to compare.
                    continue;
                }
                squares += 1;
                for (g, side, step) in [
                    (&g_net, "net", &step_a),
                    (&g_net, "net", &step_ab),
                    (&g_rws, "rws", &step_b),
                    (&g_rws, "rws", &step_ba),
                ] {
                    let found = g
                        .arcs
                        .iter()
                        .any(|arc| arc.step == *step && arc.source == step.source(net));
                    if !found {
                        mismatches.push(format!(
                            "{side} graph is missing the {} arc of the square at {}",
                            net.rules().name(step.rule),
                            mu.render(names)
                        ));
                    }
                }
            }
        }
    }

    IsoReport {
        nodes: g_net.node_count(),
        arcs: g_net.arc_count(),
        squares,
        truncated: g_net.truncated,
        mismatches,
    }
}
