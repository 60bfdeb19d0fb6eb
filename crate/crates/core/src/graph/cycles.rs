//! Directed technology-cycle detection and classification by cumulative
//! yield.
//!
//! A cycle with cumulative yield above one would require negative flow (only
//! the zero allocation is feasible); exactly one admits positive circulating
//! flow with zero external input (a non-physical allocation); below one the
//! cycle is feasible but lossy.

use super::StakeholderGraph;
use crate::model::Class;
use crate::Real;

const YIELD_EQ_TOL: Real = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClass {
    /// Cumulative yield > 1: only the all-zero allocation is feasible.
    InfeasibleOnlyZero,
    /// Cumulative yield = 1: positive circulation with zero input is
    /// feasible but non-physical.
    NonphysicalDegenerate,
    /// Cumulative yield < 1: feasible, loses product around the loop.
    LossyFeasible,
}

#[derive(Clone, Debug)]
pub struct CycleReport {
    /// Vertex sequence around the cycle (first vertex not repeated).
    pub vertices: Vec<usize>,
    pub vertex_ids: Vec<String>,
    /// Cumulative yield around the cycle.
    pub cycle_yield: Real,
    pub class: CycleClass,
}

/// All elementary directed cycles passing through at least one technology.
/// An empty list certifies the stakeholder graph is a DAG (up to cycles
/// avoiding technologies, which the connection rules exclude anyway).
pub fn find_technology_cycles(graph: &StakeholderGraph) -> Vec<CycleReport> {
    let n = graph.vertices.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, edge) in graph.edges.iter().enumerate() {
        adj[edge.from].push((e, edge.to));
    }
    let mut out = Vec::new();
    // Enumerate each elementary cycle once: the start vertex is the smallest
    // index on the cycle.
    for start in 0..n {
        let mut vstack = vec![start];
        let mut estack = Vec::new();
        let mut onpath = vec![false; n];
        onpath[start] = true;
        walk(
            graph, &adj, start, start, &mut vstack, &mut estack, &mut onpath, &mut out,
        );
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    graph: &StakeholderGraph,
    adj: &[Vec<(usize, usize)>],
    start: usize,
    current: usize,
    vstack: &mut Vec<usize>,
    estack: &mut Vec<usize>,
    onpath: &mut Vec<bool>,
    out: &mut Vec<CycleReport>,
) {
    for &(e, next) in &adj[current] {
        if next == start {
            // Closing edge; self-loops cannot exist, so require length >= 2.
            if current != start {
                estack.push(e);
                record(graph, vstack, estack, out);
                estack.pop();
            }
            continue;
        }
        if next < start || onpath[next] {
            continue;
        }
        onpath[next] = true;
        vstack.push(next);
        estack.push(e);
        walk(graph, adj, start, next, vstack, estack, onpath, out);
        estack.pop();
        vstack.pop();
        onpath[next] = false;
    }
}

fn record(
    graph: &StakeholderGraph,
    vstack: &[usize],
    estack: &[usize],
    out: &mut Vec<CycleReport>,
) {
    if !vstack
        .iter()
        .any(|&v| graph.vertices[v].class == Class::Technology)
    {
        return;
    }
    // Cumulative yield: walk the cycle, at each technology take
    // gamma(exit product) / gamma(entry product); entry of the first vertex
    // is the last edge of the cycle.
    let len = vstack.len();
    let mut gamma = 1.0;
    for k in 0..len {
        let vert = &graph.vertices[vstack[k]];
        if vert.class != Class::Technology {
            continue;
        }
        let e_in = if k == 0 { estack[len - 1] } else { estack[k - 1] };
        let e_out = estack[k];
        let g_in = vert.gamma(graph.edges[e_in].product).unwrap_or(1.0);
        let g_out = vert.gamma(graph.edges[e_out].product).unwrap_or(1.0);
        gamma *= g_out / g_in;
    }
    let class = if (gamma - 1.0).abs() <= YIELD_EQ_TOL * gamma.abs().max(1.0) {
        CycleClass::NonphysicalDegenerate
    } else if gamma > 1.0 {
        CycleClass::InfeasibleOnlyZero
    } else {
        CycleClass::LossyFeasible
    };
    out.push(CycleReport {
        vertices: vstack.to_vec(),
        vertex_ids: vstack
            .iter()
            .map(|&v| graph.vertices[v].id.clone())
            .collect(),
        cycle_yield: gamma,
        class,
    });
}
