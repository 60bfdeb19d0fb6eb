//! Deterministic selection of dual prices.
//!
//! The profit split among cleared stakeholders is often degenerate: many dual
//! vectors support the same optimal allocation. The canonical rule picks one
//! representative by solving a second LP over the optimal dual set:
//! first minimize the windfall profits of forced participants (compelled
//! stakeholders should not be gifted rents), then minimize the L1 norm of the
//! nodal price vector. Both stages keep strong duality pinned, so the result
//! is a genuine optimal dual and complementary slackness against the primal
//! allocation is preserved.

use std::collections::BTreeMap;

use super::{DualValues, VarOffsets};
use crate::lp::build::dual_program;
use crate::lp::{LinearProgram, LpSolution, Sense};
use crate::model::SupplyChainModel;
use crate::Real;

/// Duals straight from the final simplex basis.
pub(crate) fn representative_duals(
    model: &SupplyChainModel,
    lp: &LinearProgram<Real>,
    sol: &LpSolution<Real>,
) -> DualValues {
    let nodal = nodal_from_rows(model, lp, &sol.row_duals);
    DualValues {
        nodal,
        lam_up: sol.upper_duals.clone(),
        lam_lo: sol.lower_duals.clone(),
        offsets: VarOffsets::for_model(model),
    }
}

/// Canonical duals; `None` if the secondary solve fails numerically.
pub(crate) fn canonical_duals(
    model: &SupplyChainModel,
    lp: &LinearProgram<Real>,
    sol: &LpSolution<Real>,
) -> Option<DualValues> {
    if lp.num_constraints() == 0 {
        return Some(representative_duals(model, lp, sol));
    }
    let (mut dual, map) = dual_program(lp);

    // Pin dual optimality: the dual objective must equal the primal optimum.
    let pin_coeffs: Vec<(usize, Real)> = dual
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.objective != 0.0)
        .map(|(i, v)| (i, v.objective))
        .collect();
    dual.add_constraint("optimality", pin_coeffs, sol.objective);

    // Stage 1: minimize windfall profits of forced participants.
    let forced: Vec<usize> = lp
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.lower > 0.0)
        .map(|(j, _)| j)
        .collect();
    let mut windfall_vars = Vec::new();
    if !forced.is_empty() {
        for &j in &forced {
            let w = dual.add_variable(
                format!("wf:{}", lp.variables[j].name),
                0.0,
                f64::INFINITY,
                0.0,
            );
            let slack = dual.add_variable(
                format!("wfs:{}", lp.variables[j].name),
                0.0,
                f64::INFINITY,
                0.0,
            );
            // w = (lam_up - lam_lo)+ : w - lam_up + lam_lo - slack = 0
            let mut coeffs = vec![(w, 1.0), (map.lam_lo[j], 1.0), (slack, -1.0)];
            if let Some(up) = map.lam_up[j] {
                coeffs.push((up, -1.0));
            }
            dual.add_constraint(format!("wfrow:{}", lp.variables[j].name), coeffs, 0.0);
            windfall_vars.push((j, w));
        }
        for v in dual.variables.iter_mut() {
            v.objective = 0.0;
        }
        for &(j, w) in &windfall_vars {
            dual.variables[w].objective = lp.variables[j].lower.max(1.0);
        }
        dual.sense = Sense::Minimize;
        let stage1 = dual.solve();
        if !stage1.is_optimal() {
            return None;
        }
        let pin: Vec<(usize, Real)> = windfall_vars
            .iter()
            .map(|&(j, w)| (w, lp.variables[j].lower.max(1.0)))
            .collect();
        dual.add_constraint("windfall_optimality", pin, stage1.objective);
    }

    // Stage 2: L1-minimal nodal prices.
    for v in dual.variables.iter_mut() {
        v.objective = 0.0;
    }
    for r in 0..lp.num_constraints() {
        dual.variables[map.pi_pos[r]].objective = 1.0;
        dual.variables[map.pi_neg[r]].objective = 1.0;
    }
    dual.sense = Sense::Minimize;
    let stage2 = dual.solve();
    if !stage2.is_optimal() {
        return None;
    }

    let row_duals: Vec<Real> = (0..lp.num_constraints())
        .map(|r| stage2.primal[map.pi_pos[r]] - stage2.primal[map.pi_neg[r]])
        .collect();
    let nodal = nodal_from_rows(model, lp, &row_duals);
    let lam_up: Vec<Real> = (0..lp.num_variables())
        .map(|j| map.lam_up[j].map_or(0.0, |i| stage2.primal[i]))
        .collect();
    let lam_lo: Vec<Real> = (0..lp.num_variables())
        .map(|j| stage2.primal[map.lam_lo[j]])
        .collect();
    Some(DualValues {
        nodal,
        lam_up,
        lam_lo,
        offsets: VarOffsets::for_model(model),
    })
}

/// Map balance-row duals back to (node, product) keys. The condensed builder
/// emits exactly one row per active (node, product) pair, in that order.
fn nodal_from_rows(
    model: &SupplyChainModel,
    lp: &LinearProgram<Real>,
    row_duals: &[Real],
) -> BTreeMap<(usize, usize), Real> {
    let keys = model.active_node_products();
    debug_assert_eq!(keys.len(), lp.num_constraints());
    keys.into_iter()
        .zip(row_duals.iter().copied())
        .collect()
}
