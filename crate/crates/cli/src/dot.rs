//! Reduction graphs as DOT digraphs.
//!
//! Nodes are numbered in the graph's own listing order (breadth-first
//! layers, each layer canonically sorted) and labeled with the canonical
//! multiset rendering, so identical inputs produce byte-identical output.

use std::collections::BTreeMap;

use polynet_core::net::ReductionGraph;
use polynet_core::{Multiset, RuleTable};

pub fn render_dot<T: RuleTable>(table: &T, graph: &ReductionGraph) -> String {
    let places = table.places();
    let mut index: BTreeMap<&Multiset, usize> = BTreeMap::new();
    for (i, node) in graph.nodes.iter().enumerate() {
        index.insert(node, i);
    }
    let mut out = String::from("digraph reduction {\n");
    for (i, node) in graph.nodes.iter().enumerate() {
        out.push_str(&format!("  m{} [label=\"{}\"];\n", i, node.render(places)));
    }
    for arc in &graph.arcs {
        let target = arc.step.target(table);
        out.push_str(&format!(
            "  m{} -> m{} [label=\"{}\"];\n",
            index[&arc.source],
            index[&target],
            table.rules().name(arc.step.rule),
        ));
    }
    out.push_str("}\n");
    out
}
