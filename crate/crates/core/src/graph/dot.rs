//! DOT export: vertex shape encodes the stakeholder class, edge labels carry
//! the product.

use super::StakeholderGraph;
use crate::model::Class;

pub fn to_dot(graph: &StakeholderGraph) -> String {
    let mut s = String::from("digraph stakeholders {\n  rankdir=LR;\n");
    for v in &graph.vertices {
        let (shape, style) = match v.class {
            Class::Supplier => ("box", ""),
            Class::Consumer => ("house", ""),
            Class::Transport => ("ellipse", " style=filled fillcolor=gray85"),
            Class::Technology => ("hexagon", ""),
        };
        s.push_str(&format!(
            "  \"{}\" [shape={}{}];\n",
            v.id, shape, style
        ));
    }
    for e in &graph.edges {
        s.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"{}];\n",
            graph.vertices[e.from].id,
            graph.vertices[e.to].id,
            graph.products[e.product],
            if e.flagged { " color=red" } else { "" }
        ));
    }
    s.push_str("}\n");
    s
}
