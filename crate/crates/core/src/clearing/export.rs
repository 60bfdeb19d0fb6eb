//! CSV export of a clearing solution: bids, profits, demand allocations,
//! optional recycling rate, and clearing prices at a chosen node.

use super::ClearingSolution;
use crate::model::SupplyChainModel;
use crate::report;
use crate::Real;

pub fn solution_csv(
    model: &SupplyChainModel,
    solution: &ClearingSolution,
    price_node: Option<&str>,
    recycled_percent: Option<Real>,
) -> String {
    let mut out = String::from("section,id,value\n");
    out.push_str(&format!(
        "objective,,{}\n",
        report::welfare(solution.welfare)
    ));
    for (j, c) in model.consumers.iter().enumerate() {
        out.push_str(&format!(
            "bid,{},{}\n",
            c.id,
            report::money(solution.effective_consumer_bids[j])
        ));
    }
    for (i, s) in model.suppliers.iter().enumerate() {
        out.push_str(&format!(
            "bid,{},{}\n",
            s.id,
            report::money(solution.effective_supplier_bids[i])
        ));
    }
    for (i, s) in model.suppliers.iter().enumerate() {
        out.push_str(&format!(
            "profit,{},{}\n",
            s.id,
            report::money(solution.profits.supplier[i])
        ));
    }
    for (j, c) in model.consumers.iter().enumerate() {
        out.push_str(&format!(
            "profit,{},{}\n",
            c.id,
            report::money(solution.profits.consumer[j])
        ));
    }
    let transport_total: Real = solution.profits.transport.iter().sum();
    out.push_str(&format!(
        "profit,transport(total),{}\n",
        report::money(transport_total)
    ));
    for (k, t) in model.technologies.iter().enumerate() {
        out.push_str(&format!(
            "profit,{},{}\n",
            t.id,
            report::money(solution.profits.technology[k])
        ));
    }
    for (j, c) in model.consumers.iter().enumerate() {
        out.push_str(&format!(
            "allocation,{},{}\n",
            c.id,
            report::quantity(solution.allocations.demand[j])
        ));
    }
    if let Some(pct) = recycled_percent {
        out.push_str(&format!("recycled_percent,,{}\n", report::percent(pct)));
    }
    if let Some(node_id) = price_node {
        if let Some(n) = model.node_index(node_id) {
            for (p, prod) in model.products.iter().enumerate() {
                if let Some(price) = solution.prices.nodal_price(n, p) {
                    out.push_str(&format!(
                        "price,{}@{},{}\n",
                        prod.id,
                        node_id,
                        report::money(price)
                    ));
                }
            }
        }
    }
    out
}
