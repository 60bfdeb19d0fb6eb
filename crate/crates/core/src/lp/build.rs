//! Builders turning a supply chain model into clearing LPs, plus the explicit
//! dual of the condensed form.
//!
//! Balance rows are written demand-side minus supply-side so that the row
//! dual is the nodal price directly: a cleared consumer interior to its
//! bounds prices at its bid, a cleared supplier at its bid, and capacity
//! rents appear as nonnegative bound duals.

use super::{LinearProgram, Sense};
use crate::model::SupplyChainModel;
use crate::Real;

/// Variable naming shared by builders and the clearing layer.
pub fn supply_var(id: &str) -> String {
    format!("s:{id}")
}
pub fn demand_var(id: &str) -> String {
    format!("d:{id}")
}
pub fn flow_var(id: &str) -> String {
    format!("f:{id}")
}
pub fn tech_var(id: &str) -> String {
    format!("x:{id}")
}
pub fn gen_var(id: &str, product: &str) -> String {
    format!("g:{id}:{product}")
}
pub fn balance_label(node: &str, product: &str) -> String {
    format!("bal:{node}:{product}")
}

/// Condensed clearing LP: one flow variable per technology on the reference
/// basis, yields embedded in the balance rows.
pub fn build_condensed_lp(model: &SupplyChainModel) -> LinearProgram<Real> {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let mut s_idx = Vec::with_capacity(model.suppliers.len());
    for s in &model.suppliers {
        s_idx.push(lp.add_variable(supply_var(&s.id), s.forced_min, s.capacity, -s.bid));
    }
    let mut d_idx = Vec::with_capacity(model.consumers.len());
    for c in &model.consumers {
        d_idx.push(lp.add_variable(demand_var(&c.id), c.forced_min, c.capacity, c.bid));
    }
    let mut f_idx = Vec::with_capacity(model.transports.len());
    for t in &model.transports {
        f_idx.push(lp.add_variable(flow_var(&t.id), t.forced_min, t.capacity, -t.bid));
    }
    let mut x_idx = Vec::with_capacity(model.technologies.len());
    for t in &model.technologies {
        x_idx.push(lp.add_variable(tech_var(&t.id), t.forced_min, t.capacity, -t.bid));
    }

    for (node, product) in model.active_node_products() {
        let mut coeffs: Vec<(usize, Real)> = Vec::new();
        if let Some(js) = model.consumers_np.get(&(node, product)) {
            for &j in js {
                coeffs.push((d_idx[j], 1.0));
            }
        }
        if let Some(ls) = model.transports_out_np.get(&(node, product)) {
            for &l in ls {
                coeffs.push((f_idx[l], 1.0));
            }
        }
        if let Some(ts) = model.tech_con_np.get(&(node, product)) {
            for &t in ts {
                let gamma = model.technologies[t].input_gamma(product).unwrap();
                coeffs.push((x_idx[t], gamma));
            }
        }
        if let Some(is) = model.suppliers_np.get(&(node, product)) {
            for &i in is {
                coeffs.push((s_idx[i], -1.0));
            }
        }
        if let Some(ls) = model.transports_in_np.get(&(node, product)) {
            for &l in ls {
                coeffs.push((f_idx[l], -1.0));
            }
        }
        if let Some(ts) = model.tech_gen_np.get(&(node, product)) {
            for &t in ts {
                let gamma = model.technologies[t].output_gamma(product).unwrap();
                coeffs.push((x_idx[t], -gamma));
            }
        }
        lp.add_constraint(
            balance_label(&model.nodes[node].id, &model.products[product].id),
            coeffs,
            0.0,
        );
    }
    lp
}

/// Full clearing LP: per-output generation variables, reference-basis
/// consumption variables, nodal aggregation rows, and explicit conversion
/// rows per (technology, output, input) pair.
pub fn build_full_lp(model: &SupplyChainModel) -> LinearProgram<Real> {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let mut s_idx = Vec::new();
    for s in &model.suppliers {
        s_idx.push(lp.add_variable(supply_var(&s.id), s.forced_min, s.capacity, -s.bid));
    }
    let mut d_idx = Vec::new();
    for c in &model.consumers {
        d_idx.push(lp.add_variable(demand_var(&c.id), c.forced_min, c.capacity, c.bid));
    }
    let mut f_idx = Vec::new();
    for t in &model.transports {
        f_idx.push(lp.add_variable(flow_var(&t.id), t.forced_min, t.capacity, -t.bid));
    }
    let mut x_idx = Vec::new();
    for t in &model.technologies {
        x_idx.push(lp.add_variable(tech_var(&t.id), t.forced_min, t.capacity, -t.bid));
    }
    // Generation variables per technology output, bounded by the yield times
    // the reference capacity.
    let mut g_idx: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for (t, tech) in model.technologies.iter().enumerate() {
        for y in &tech.outputs {
            let name = gen_var(&tech.id, &model.products[y.product].id);
            let idx = lp.add_variable(name, 0.0, y.gamma * tech.capacity, 0.0);
            g_idx.insert((t, y.product), idx);
        }
    }
    // Nodal aggregates with derived capacities.
    let mut snp_idx: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for (&(node, product), is) in &model.suppliers_np {
        let cap: Real = is.iter().map(|&i| model.suppliers[i].capacity).sum();
        let name = format!(
            "sn:{}:{}",
            model.nodes[node].id, model.products[product].id
        );
        snp_idx.insert((node, product), lp.add_variable(name, 0.0, cap, 0.0));
    }
    let mut dnp_idx: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for (&(node, product), js) in &model.consumers_np {
        let cap: Real = js.iter().map(|&j| model.consumers[j].capacity).sum();
        let name = format!(
            "dn:{}:{}",
            model.nodes[node].id, model.products[product].id
        );
        dnp_idx.insert((node, product), lp.add_variable(name, 0.0, cap, 0.0));
    }

    // Aggregation rows.
    for (&(node, product), is) in &model.suppliers_np {
        let mut coeffs = vec![(snp_idx[&(node, product)], 1.0)];
        for &i in is {
            coeffs.push((s_idx[i], -1.0));
        }
        lp.add_constraint(
            format!(
                "sup:{}:{}",
                model.nodes[node].id, model.products[product].id
            ),
            coeffs,
            0.0,
        );
    }
    for (&(node, product), js) in &model.consumers_np {
        let mut coeffs = vec![(dnp_idx[&(node, product)], 1.0)];
        for &j in js {
            coeffs.push((d_idx[j], -1.0));
        }
        lp.add_constraint(
            format!(
                "dem:{}:{}",
                model.nodes[node].id, model.products[product].id
            ),
            coeffs,
            0.0,
        );
    }

    // Balance rows on aggregates, per-output generation, and reference-basis
    // consumption.
    for (node, product) in model.active_node_products() {
        let mut coeffs: Vec<(usize, Real)> = Vec::new();
        if let Some(&dn) = dnp_idx.get(&(node, product)) {
            coeffs.push((dn, 1.0));
        }
        if let Some(ls) = model.transports_out_np.get(&(node, product)) {
            for &l in ls {
                coeffs.push((f_idx[l], 1.0));
            }
        }
        if let Some(ts) = model.tech_con_np.get(&(node, product)) {
            for &t in ts {
                let gamma = model.technologies[t].input_gamma(product).unwrap();
                coeffs.push((x_idx[t], gamma));
            }
        }
        if let Some(&sn) = snp_idx.get(&(node, product)) {
            coeffs.push((sn, -1.0));
        }
        if let Some(ls) = model.transports_in_np.get(&(node, product)) {
            for &l in ls {
                coeffs.push((f_idx[l], -1.0));
            }
        }
        if let Some(ts) = model.tech_gen_np.get(&(node, product)) {
            for &t in ts {
                coeffs.push((g_idx[&(t, product)], -1.0));
            }
        }
        lp.add_constraint(
            balance_label(&model.nodes[node].id, &model.products[product].id),
            coeffs,
            0.0,
        );
    }

    // Conversion rows per (technology, generated product, consumed product).
    for (t, tech) in model.technologies.iter().enumerate() {
        for yo in &tech.outputs {
            for yi in &tech.inputs {
                let label = format!(
                    "con:{}:{}:{}",
                    tech.id, model.products[yo.product].id, model.products[yi.product].id
                );
                lp.add_constraint(
                    label,
                    vec![
                        (g_idx[&(t, yo.product)], yi.gamma),
                        (x_idx[t], -yo.gamma * yi.gamma),
                    ],
                    0.0,
                );
            }
        }
    }
    lp
}

/// Index map from a primal program into its dual program's variables.
pub struct DualMap {
    pub pi_pos: Vec<usize>,
    pub pi_neg: Vec<usize>,
    /// Upper-bound dual per primal variable; absent for unbounded variables.
    pub lam_up: Vec<Option<usize>>,
    /// Lower-bound dual per primal variable.
    pub lam_lo: Vec<usize>,
}

/// Explicit dual of a maximization program in equality-plus-bounds form.
///
/// The dual minimizes `b'pi + u'lam_up - l'lam_lo` subject to one stationarity
/// row per primal variable, `A'pi + lam_up - lam_lo = c`, with the bound duals
/// nonnegative and `pi` free (split into a difference of nonnegatives).
/// Solving it reproduces the primal optimum.
pub fn build_explicit_dual(primal: &LinearProgram<Real>) -> LinearProgram<Real> {
    dual_program(primal).0
}

pub fn dual_program(primal: &LinearProgram<Real>) -> (LinearProgram<Real>, DualMap) {
    assert_eq!(
        primal.sense,
        Sense::Maximize,
        "dual builder expects a maximization primal"
    );
    let mut dual = LinearProgram::new(Sense::Minimize);
    let mut map = DualMap {
        pi_pos: Vec::new(),
        pi_neg: Vec::new(),
        lam_up: Vec::new(),
        lam_lo: Vec::new(),
    };
    for c in &primal.constraints {
        map.pi_pos
            .push(dual.add_variable(format!("pi+:{}", c.label), 0.0, f64::INFINITY, c.rhs));
        map.pi_neg
            .push(dual.add_variable(format!("pi-:{}", c.label), 0.0, f64::INFINITY, -c.rhs));
    }
    for v in &primal.variables {
        if v.upper.is_finite() {
            map.lam_up.push(Some(dual.add_variable(
                format!("lam+:{}", v.name),
                0.0,
                f64::INFINITY,
                v.upper,
            )));
        } else {
            map.lam_up.push(None);
        }
        map.lam_lo.push(dual.add_variable(
            format!("lam-:{}", v.name),
            0.0,
            f64::INFINITY,
            -v.lower,
        ));
    }
    for (j, v) in primal.variables.iter().enumerate() {
        let mut coeffs: Vec<(usize, Real)> = Vec::new();
        for (r, c) in primal.constraints.iter().enumerate() {
            for &(vi, a) in &c.coeffs {
                if vi == j {
                    coeffs.push((map.pi_pos[r], a));
                    coeffs.push((map.pi_neg[r], -a));
                }
            }
        }
        if let Some(up) = map.lam_up[j] {
            coeffs.push((up, 1.0));
        }
        coeffs.push((map.lam_lo[j], -1.0));
        dual.add_constraint(format!("st:{}", v.name), coeffs, v.objective);
    }
    (dual, map)
}
