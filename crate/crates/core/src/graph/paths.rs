//! Simple-path enumeration with cumulative yields.
//!
//! Remuneration paths may travel both with and against product flow, so the
//! walk is over the undirected graph. Interior vertices must be internal
//! (transport or technology): a path never passes through another supplier
//! or consumer, which is exactly the component discipline.

use super::StakeholderGraph;
use crate::model::Class;
use crate::scalar::Scalar;
use crate::Real;

/// Exhaustive enumeration refuses to truncate silently; exceeding the cap is
/// an explicit error.
pub const DEFAULT_PATH_CAP: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum PathError {
    #[error("path enumeration exceeded the cap of {0} paths")]
    LimitExceeded(usize),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
}

/// One simple path with its cumulative yield.
#[derive(Clone, Debug)]
pub struct PathYield {
    /// Vertex sequence from u to v.
    pub vertices: Vec<usize>,
    /// Edge sequence (parallel to vertex pairs).
    pub edges: Vec<usize>,
    /// Cumulative yield along the traversal: product over interior
    /// technology vertices of (gamma leaving) / (gamma entering); transports
    /// contribute one.
    pub yield_factor: Real,
    /// Reciprocal of `yield_factor`.
    pub basis_factor: Real,
}

/// All simple paths between `u` and `v`; empty if disconnected.
pub fn enumerate_paths(
    graph: &StakeholderGraph,
    u: usize,
    v: usize,
) -> Result<Vec<PathYield>, PathError> {
    enumerate_paths_capped(graph, u, v, DEFAULT_PATH_CAP)
}

pub fn enumerate_paths_capped(
    graph: &StakeholderGraph,
    u: usize,
    v: usize,
    cap: usize,
) -> Result<Vec<PathYield>, PathError> {
    let n = graph.vertices.len();
    if u >= n || v >= n {
        return Err(PathError::BadVertex(u.max(v)));
    }
    let adj = graph.undirected_adjacency();
    let mut out = Vec::new();
    let mut visited = vec![false; n];
    let mut vstack = vec![u];
    let mut estack: Vec<usize> = Vec::new();
    visited[u] = true;
    dfs(
        graph, &adj, u, v, cap, &mut visited, &mut vstack, &mut estack, &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    graph: &StakeholderGraph,
    adj: &[Vec<(usize, usize, bool)>],
    current: usize,
    target: usize,
    cap: usize,
    visited: &mut Vec<bool>,
    vstack: &mut Vec<usize>,
    estack: &mut Vec<usize>,
    out: &mut Vec<PathYield>,
) -> Result<(), PathError> {
    for &(e, next, _withflow) in &adj[current] {
        if visited[next] {
            continue;
        }
        if next == target {
            estack.push(e);
            vstack.push(next);
            out.push(make_path(graph, vstack, estack));
            if out.len() > cap {
                return Err(PathError::LimitExceeded(cap));
            }
            vstack.pop();
            estack.pop();
            continue;
        }
        // Interior vertices must be internal: never walk through another
        // supplier or consumer.
        if graph.vertices[next].is_boundary() {
            continue;
        }
        visited[next] = true;
        vstack.push(next);
        estack.push(e);
        dfs(graph, adj, next, target, cap, visited, vstack, estack, out)?;
        estack.pop();
        vstack.pop();
        visited[next] = false;
    }
    Ok(())
}

fn make_path(graph: &StakeholderGraph, vstack: &[usize], estack: &[usize]) -> PathYield {
    let yield_factor = traversal_factor::<Real>(graph, vstack, estack);
    PathYield {
        vertices: vstack.to_vec(),
        edges: estack.to_vec(),
        yield_factor,
        basis_factor: 1.0 / yield_factor,
    }
}

/// Product over interior technology vertices of gamma(product on the exit
/// edge) / gamma(product on the entry edge), generic over the scalar.
pub fn traversal_factor<S: Scalar>(
    graph: &StakeholderGraph,
    vstack: &[usize],
    estack: &[usize],
) -> S {
    let mut factor = S::one();
    for k in 1..vstack.len().saturating_sub(1) {
        let vert = &graph.vertices[vstack[k]];
        if vert.class != Class::Technology {
            continue;
        }
        let p_in = graph.edges[estack[k - 1]].product;
        let p_out = graph.edges[estack[k]].product;
        let g_in = vert.gamma(p_in).unwrap_or(1.0);
        let g_out = vert.gamma(p_out).unwrap_or(1.0);
        factor = factor * S::c(g_out) / S::c(g_in);
    }
    factor
}
