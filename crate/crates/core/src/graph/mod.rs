//! Product-based stakeholder graph: vertices are stakeholders, edges are
//! product hand-offs, suppliers and consumers form the boundary.
//!
//! The node-based supply chain view obscures how products travel; this
//! representation makes paths from suppliers to consumers explicit and is the
//! basis for component partitioning, cycle analysis, and the bid calculus.

mod cycles;
mod dot;
mod paths;

pub use cycles::{find_technology_cycles, CycleClass, CycleReport};
pub use dot::to_dot;
pub use paths::{enumerate_paths, PathError, PathYield, DEFAULT_PATH_CAP};

use crate::model::{Class, SupplyChainModel, YieldTerm};
use crate::Real;

/// A stakeholder vertex with the attributes the bid calculus needs.
#[derive(Clone, Debug)]
pub struct GraphVertex {
    pub id: String,
    pub class: Class,
    /// Index into the corresponding model list.
    pub model_index: usize,
    pub bid: Real,
    /// Product handled (suppliers, consumers, transports).
    pub product: Option<usize>,
    /// Yield attributes (technologies).
    pub inputs: Vec<YieldTerm>,
    pub outputs: Vec<YieldTerm>,
    pub reference_product: Option<usize>,
}

impl GraphVertex {
    pub fn is_boundary(&self) -> bool {
        matches!(self.class, Class::Supplier | Class::Consumer)
    }

    /// Yield coefficient of `product` on whichever side of the technology it
    /// appears; 1 for non-technology vertices.
    pub fn gamma(&self, product: usize) -> Option<Real> {
        if self.class != Class::Technology {
            return Some(1.0);
        }
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .find(|y| y.product == product)
            .map(|y| y.gamma)
    }
}

/// A directed product hand-off between two stakeholders.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub product: usize,
    /// Transport-to-transport relays are legal but unusual; flagged to aid
    /// dataset debugging.
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct StakeholderGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    /// Product ids, aligned with the model's product indices.
    pub products: Vec<String>,
    /// Notes emitted while building (flagged relays, orientation remarks).
    pub build_log: Vec<String>,
}

/// A component obtained by splitting along boundary vertices; boundary
/// vertices with several incident components appear in each.
#[derive(Clone, Debug)]
pub struct GraphComponent {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl StakeholderGraph {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Boundary set: supplier and consumer vertices.
    pub fn boundary(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_boundary())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.from == v || e.to == v)
            .count()
    }

    /// Undirected adjacency as (edge index, neighbor, walks with flow?).
    pub(crate) fn undirected_adjacency(&self) -> Vec<Vec<(usize, usize, bool)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            adj[edge.from].push((e, edge.to, true));
            adj[edge.to].push((e, edge.from, false));
        }
        adj
    }
}

/// Build the stakeholder graph from a model.
///
/// Edges are oriented along physical product flow. Connectivity rules:
/// supplier-consumer with matching node and product; supplier into transport
/// departing its node; transport into consumer at its receiving node;
/// supplier into a co-located technology consuming its product; technology
/// into a co-located consumer of a generated product; transport into a
/// technology consuming the carried product at the receiving node, and
/// technology into transport departing with a generated product;
/// same-product transport relays (flagged); technology into co-located
/// technology consuming one of its outputs. Supplier-supplier and
/// consumer-consumer edges never exist.
pub fn build_graph(model: &SupplyChainModel) -> StakeholderGraph {
    let mut vertices = Vec::new();
    for (i, s) in model.suppliers.iter().enumerate() {
        vertices.push(GraphVertex {
            id: s.id.clone(),
            class: Class::Supplier,
            model_index: i,
            bid: s.bid,
            product: Some(s.product),
            inputs: Vec::new(),
            outputs: Vec::new(),
            reference_product: None,
        });
    }
    for (j, c) in model.consumers.iter().enumerate() {
        vertices.push(GraphVertex {
            id: c.id.clone(),
            class: Class::Consumer,
            model_index: j,
            bid: c.bid,
            product: Some(c.product),
            inputs: Vec::new(),
            outputs: Vec::new(),
            reference_product: None,
        });
    }
    for (l, t) in model.transports.iter().enumerate() {
        vertices.push(GraphVertex {
            id: t.id.clone(),
            class: Class::Transport,
            model_index: l,
            bid: t.bid,
            product: Some(t.product),
            inputs: Vec::new(),
            outputs: Vec::new(),
            reference_product: None,
        });
    }
    for (k, t) in model.technologies.iter().enumerate() {
        vertices.push(GraphVertex {
            id: t.id.clone(),
            class: Class::Technology,
            model_index: k,
            bid: t.bid,
            inputs: t.inputs.clone(),
            outputs: t.outputs.clone(),
            product: None,
            reference_product: Some(t.reference_product),
        });
    }

    let sup0 = 0usize;
    let con0 = model.suppliers.len();
    let trn0 = con0 + model.consumers.len();
    let tec0 = trn0 + model.transports.len();

    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut build_log = Vec::new();
    let push = |edges: &mut Vec<GraphEdge>, from: usize, to: usize, product: usize, flagged: bool| {
        let e = GraphEdge {
            from,
            to,
            product,
            flagged,
        };
        if !edges.contains(&e) {
            edges.push(e);
        }
    };

    // Supplier -> consumer, same node and product.
    for (i, s) in model.suppliers.iter().enumerate() {
        for (j, c) in model.consumers.iter().enumerate() {
            if s.product == c.product && s.node == c.node {
                push(&mut edges, sup0 + i, con0 + j, s.product, false);
            }
        }
    }
    // Supplier -> transport departing from the supplier's node.
    for (i, s) in model.suppliers.iter().enumerate() {
        for (l, t) in model.transports.iter().enumerate() {
            if s.product == t.product && t.source == s.node {
                push(&mut edges, sup0 + i, trn0 + l, s.product, false);
            }
        }
    }
    // Transport -> consumer at the receiving node.
    for (j, c) in model.consumers.iter().enumerate() {
        for (l, t) in model.transports.iter().enumerate() {
            if c.product == t.product && t.sink == c.node {
                push(&mut edges, trn0 + l, con0 + j, c.product, false);
            }
        }
    }
    // Supplier -> co-located technology consuming its product.
    for (i, s) in model.suppliers.iter().enumerate() {
        for (k, t) in model.technologies.iter().enumerate() {
            if t.node == s.node && t.input_gamma(s.product).is_some() {
                push(&mut edges, sup0 + i, tec0 + k, s.product, false);
            }
        }
    }
    // Technology -> co-located consumer of a generated product.
    for (j, c) in model.consumers.iter().enumerate() {
        for (k, t) in model.technologies.iter().enumerate() {
            if t.node == c.node && t.output_gamma(c.product).is_some() {
                push(&mut edges, tec0 + k, con0 + j, c.product, false);
            }
        }
    }
    // Transport <-> technology.
    for (l, tr) in model.transports.iter().enumerate() {
        for (k, t) in model.technologies.iter().enumerate() {
            if tr.sink == t.node && t.input_gamma(tr.product).is_some() {
                push(&mut edges, trn0 + l, tec0 + k, tr.product, false);
            }
            if tr.source == t.node && t.output_gamma(tr.product).is_some() {
                push(&mut edges, tec0 + k, trn0 + l, tr.product, false);
            }
        }
    }
    // Transport relays carrying the same product; flagged as unusual.
    for (l1, t1) in model.transports.iter().enumerate() {
        for (l2, t2) in model.transports.iter().enumerate() {
            if l1 != l2 && t1.product == t2.product && t1.sink == t2.source {
                push(&mut edges, trn0 + l1, trn0 + l2, t1.product, true);
                build_log.push(format!(
                    "flagged transport relay {} -> {} on {}",
                    t1.id, t2.id, model.products[t1.product].id
                ));
            }
        }
    }
    // Technology -> co-located technology consuming one of its outputs.
    for (k1, t1) in model.technologies.iter().enumerate() {
        for (k2, t2) in model.technologies.iter().enumerate() {
            if k1 == k2 || t1.node != t2.node {
                continue;
            }
            for y in &t1.outputs {
                if t2.input_gamma(y.product).is_some() {
                    push(&mut edges, tec0 + k1, tec0 + k2, y.product, false);
                }
            }
        }
    }

    StakeholderGraph {
        vertices,
        edges,
        products: model.products.iter().map(|p| p.id.clone()).collect(),
        build_log,
    }
}

/// Partition the graph along supplier and consumer vertices. Edges belong to
/// the same component exactly when they are linked through internal
/// (transport or technology) vertices; boundary vertices are retained in
/// every component they touch, and isolated vertices form singleton
/// components.
pub fn components(graph: &StakeholderGraph) -> Vec<GraphComponent> {
    let ne = graph.edges.len();
    let mut parent: Vec<usize> = (0..ne).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    // Union edges sharing an internal vertex.
    for (v, vert) in graph.vertices.iter().enumerate() {
        if vert.is_boundary() {
            continue;
        }
        let incident: Vec<usize> = graph
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == v || e.to == v)
            .map(|(i, _)| i)
            .collect();
        for w in incident.windows(2) {
            let a = find(&mut parent, w[0]);
            let b = find(&mut parent, w[1]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for e in 0..ne {
        let r = find(&mut parent, e);
        groups.entry(r).or_default().push(e);
    }
    let mut out = Vec::new();
    let mut covered = vec![false; graph.vertices.len()];
    for (_, edge_list) in groups {
        let mut vs = std::collections::BTreeSet::new();
        for &e in &edge_list {
            vs.insert(graph.edges[e].from);
            vs.insert(graph.edges[e].to);
        }
        for &v in &vs {
            covered[v] = true;
        }
        out.push(GraphComponent {
            vertices: vs.into_iter().collect(),
            edges: edge_list,
        });
    }
    for (v, c) in covered.iter().enumerate() {
        if !c {
            out.push(GraphComponent {
                vertices: vec![v],
                edges: Vec::new(),
            });
        }
    }
    out
}

/// Component index containing each vertex (boundary vertices may map to
/// several; the map keeps all of them).
pub fn component_membership(comps: &[GraphComponent]) -> Vec<Vec<usize>> {
    let n = comps
        .iter()
        .flat_map(|c| c.vertices.iter())
        .max()
        .map_or(0, |&m| m + 1);
    let mut member = vec![Vec::new(); n];
    for (ci, c) in comps.iter().enumerate() {
        for &v in &c.vertices {
            member[v].push(ci);
        }
    }
    member
}

#[cfg(test)]
mod tests;
