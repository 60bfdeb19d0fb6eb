//! Verification of the economic properties a voluntary coordinated market
//! guarantees: nonnegative profits, equilibrium stationarity, revenue
//! adequacy, bid-bounded prices, and cycle-free transport.

use std::collections::BTreeMap;

use super::{Allocations, ClearedSets, ClearingSolution, DualValues, PriceSet, ProfitSet, Tolerances};
use crate::model::SupplyChainModel;
use crate::Real;

#[derive(Clone, Debug)]
pub struct TheoremCheck {
    pub name: &'static str,
    pub passed: bool,
    pub worst_residual: Real,
    /// Offending stakeholder ids; a failed check names at least one.
    pub witnesses: Vec<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn check(&self, name: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Re-run the property suite on an existing solution.
pub fn verify_theorems(solution: &ClearingSolution, model: &SupplyChainModel) -> TheoremReport {
    // Rebuild dual values from the stored prices; bound duals are not needed
    // for re-verification of the price-based checks, so stationarity uses the
    // price identities directly.
    let duals = DualValues {
        nodal: solution.prices.nodal.clone(),
        lam_up: Vec::new(),
        lam_lo: Vec::new(),
        offsets: super::VarOffsets::for_model(model),
    };
    run_checks(
        model,
        &solution.allocations,
        &solution.prices,
        &solution.profits,
        &solution.cleared,
        &duals,
        &Tolerances::default(),
    )
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn run_checks(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
    profits: &ProfitSet,
    cleared: &ClearedSets,
    duals: &DualValues,
    tol: &Tolerances,
) -> TheoremReport {
    TheoremReport {
        checks: vec![
            check_nonnegative_profits(model, alloc, profits, tol),
            check_equilibrium(model, alloc, prices, duals, tol),
            check_revenue_adequacy(model, alloc, prices, tol),
            check_price_bounds(model, cleared, prices, tol),
            check_no_transport_cycles(model, alloc, tol),
        ],
    }
}

/// Money tolerance scaled by the magnitude of the position it applies to.
fn money_tol(tol: &Tolerances, magnitude: Real) -> Real {
    tol.money * (1.0 + 1e-4 * magnitude.abs())
}

fn check_nonnegative_profits(
    model: &SupplyChainModel,
    alloc: &Allocations,
    profits: &ProfitSet,
    tol: &Tolerances,
) -> TheoremCheck {
    let mut worst: Real = 0.0;
    let mut witnesses = Vec::new();
    let mut scan = |id: &str, profit: Real, volume: Real, price: Real| {
        let slack = money_tol(tol, volume * price.abs());
        if profit < -slack {
            witnesses.push(id.to_string());
        }
        if profit < worst {
            worst = profit;
        }
    };
    for (i, s) in model.suppliers.iter().enumerate() {
        scan(&s.id, profits.supplier[i], alloc.supply[i], s.bid);
    }
    for (j, c) in model.consumers.iter().enumerate() {
        scan(&c.id, profits.consumer[j], alloc.demand[j], c.bid);
    }
    for (l, t) in model.transports.iter().enumerate() {
        scan(&t.id, profits.transport[l], alloc.flow[l], t.bid);
    }
    for (k, t) in model.technologies.iter().enumerate() {
        scan(&t.id, profits.technology[k], alloc.tech[k], t.bid);
    }
    TheoremCheck {
        name: "T1 nonnegative profits",
        passed: witnesses.is_empty(),
        worst_residual: worst,
        witnesses,
        note: None,
    }
}

/// Competitive equilibrium, tested as its operational content: stationarity
/// and complementary slackness of each cleared stakeholder's bound duals.
fn check_equilibrium(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
    duals: &DualValues,
    tol: &Tolerances,
) -> TheoremCheck {
    let mut worst: Real = 0.0;
    let mut witnesses = Vec::new();
    let have_bound_duals = !duals.lam_up.is_empty();
    let off = duals.offsets;

    let mut check_one = |id: &str,
                         var: usize,
                         margin: Real, // price minus bid, in profit direction
                         value: Real,
                         lower: Real,
                         upper: Real| {
        // Stationarity: margin equals lam_up - lam_lo for cleared positions.
        if value > tol.cleared {
            if have_bound_duals {
                let lam = duals.lam_up[var] - duals.lam_lo[var];
                let r = (margin - lam).abs();
                if r > worst {
                    worst = r;
                }
                if r > tol.money {
                    witnesses.push(format!("{id} (stationarity)"));
                }
                // Complementary slackness on the bounds.
                let cs_up = duals.lam_up[var] * (upper - value);
                let cs_lo = duals.lam_lo[var] * (value - lower);
                let slack = money_tol(tol, upper.abs().max(value.abs()) * lam.abs());
                if cs_up.abs() > slack || cs_lo.abs() > slack {
                    witnesses.push(format!("{id} (complementary slackness)"));
                }
            } else {
                // Without bound duals: interior positions must price at bid.
                let interior = value < upper - tol.flow && value > lower + tol.flow;
                if interior && margin.abs() > tol.money {
                    if margin.abs() > worst {
                        worst = margin.abs();
                    }
                    witnesses.push(format!("{id} (interior price != bid)"));
                }
            }
        }
    };

    for (i, s) in model.suppliers.iter().enumerate() {
        check_one(
            &s.id,
            off.s0 + i,
            prices.supplier[i] - s.bid,
            alloc.supply[i],
            s.forced_min,
            s.capacity,
        );
    }
    for (j, c) in model.consumers.iter().enumerate() {
        check_one(
            &c.id,
            off.d0 + j,
            c.bid - prices.consumer[j],
            alloc.demand[j],
            c.forced_min,
            c.capacity,
        );
    }
    for (l, t) in model.transports.iter().enumerate() {
        check_one(
            &t.id,
            off.f0 + l,
            prices.transport[l] - t.bid,
            alloc.flow[l],
            t.forced_min,
            t.capacity,
        );
    }
    for (k, t) in model.technologies.iter().enumerate() {
        check_one(
            &t.id,
            off.x0 + k,
            prices.technology[k] - t.bid,
            alloc.tech[k],
            t.forced_min,
            t.capacity,
        );
    }
    TheoremCheck {
        name: "T2 competitive equilibrium (KKT)",
        passed: witnesses.is_empty(),
        worst_residual: worst,
        witnesses,
        note: None,
    }
}

/// Consumer payments equal payouts to suppliers and service providers.
pub(crate) fn revenue_residual(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
) -> Real {
    let payments: Real = model
        .consumers
        .iter()
        .enumerate()
        .map(|(j, _)| prices.consumer[j] * alloc.demand[j])
        .sum();
    let payouts: Real = model
        .suppliers
        .iter()
        .enumerate()
        .map(|(i, _)| prices.supplier[i] * alloc.supply[i])
        .sum::<Real>()
        + model
            .transports
            .iter()
            .enumerate()
            .map(|(l, _)| prices.transport[l] * alloc.flow[l])
            .sum::<Real>()
        + model
            .technologies
            .iter()
            .enumerate()
            .map(|(k, _)| prices.technology[k] * alloc.tech[k])
            .sum::<Real>();
    payments - payouts
}

pub(crate) fn payment_volume(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
) -> Real {
    let mut v = 0.0;
    for (j, _) in model.consumers.iter().enumerate() {
        v += (prices.consumer[j] * alloc.demand[j]).abs();
    }
    for (i, _) in model.suppliers.iter().enumerate() {
        v += (prices.supplier[i] * alloc.supply[i]).abs();
    }
    for (l, _) in model.transports.iter().enumerate() {
        v += (prices.transport[l] * alloc.flow[l]).abs();
    }
    for (k, _) in model.technologies.iter().enumerate() {
        v += (prices.technology[k] * alloc.tech[k]).abs();
    }
    v
}

fn check_revenue_adequacy(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
    tol: &Tolerances,
) -> TheoremCheck {
    let residual = revenue_residual(model, alloc, prices);
    let volume = payment_volume(model, alloc, prices);
    let bound = tol.duality_rel * (1.0 + volume);
    // Split revenue sources (positive-bid demand, negative-bid supply) from
    // sinks; the regrouped identity must close to the same bound.
    let src: Real = model
        .consumers_pos
        .iter()
        .map(|&j| prices.consumer[j] * alloc.demand[j])
        .sum::<Real>()
        - model
            .suppliers_neg
            .iter()
            .map(|&i| prices.supplier[i] * alloc.supply[i])
            .sum::<Real>();
    let snk: Real = model
        .suppliers_pos
        .iter()
        .map(|&i| prices.supplier[i] * alloc.supply[i])
        .sum::<Real>()
        - model
            .consumers_neg
            .iter()
            .map(|&j| prices.consumer[j] * alloc.demand[j])
            .sum::<Real>()
        + model
            .transports
            .iter()
            .enumerate()
            .map(|(l, _)| prices.transport[l] * alloc.flow[l])
            .sum::<Real>()
        + model
            .technologies
            .iter()
            .enumerate()
            .map(|(k, _)| prices.technology[k] * alloc.tech[k])
            .sum::<Real>();
    let split_residual = src - snk;
    let passed = residual.abs() <= bound && split_residual.abs() <= bound;
    TheoremCheck {
        name: "T3 revenue adequacy",
        passed,
        worst_residual: residual.abs().max(split_residual.abs()),
        witnesses: if passed {
            Vec::new()
        } else {
            vec!["(market-wide identity)".to_string()]
        },
        note: Some(format!(
            "sources {:.4} = sinks {:.4}",
            src, snk
        )),
    }
}

fn check_price_bounds(
    model: &SupplyChainModel,
    cleared: &ClearedSets,
    prices: &PriceSet,
    tol: &Tolerances,
) -> TheoremCheck {
    let mut worst: Real = 0.0;
    let mut witnesses = Vec::new();
    let mut scan = |id: &str, violation: Real| {
        if violation > worst {
            worst = violation;
        }
        if violation > tol.money {
            witnesses.push(id.to_string());
        }
    };
    for &i in &cleared.suppliers {
        scan(&model.suppliers[i].id, model.suppliers[i].bid - prices.supplier[i]);
    }
    for &j in &cleared.consumers {
        scan(&model.consumers[j].id, prices.consumer[j] - model.consumers[j].bid);
    }
    for &l in &cleared.transports {
        scan(&model.transports[l].id, model.transports[l].bid - prices.transport[l]);
    }
    for &k in &cleared.technologies {
        scan(
            &model.technologies[k].id,
            model.technologies[k].bid - prices.technology[k],
        );
    }
    TheoremCheck {
        name: "T4 price bounds",
        passed: witnesses.is_empty(),
        worst_residual: worst,
        witnesses,
        note: None,
    }
}

/// With strictly positive transport bids, cleared flows cannot form a cycle:
/// prices would have to strictly increase around it.
fn check_no_transport_cycles(
    model: &SupplyChainModel,
    alloc: &Allocations,
    tol: &Tolerances,
) -> TheoremCheck {
    let precondition = model.transports.iter().all(|t| t.bid > 0.0);
    let mut witnesses = Vec::new();
    // Per-product digraph over geographical nodes from cleared flows.
    let mut by_product: BTreeMap<usize, Vec<(usize, usize, String)>> = BTreeMap::new();
    for (l, t) in model.transports.iter().enumerate() {
        if alloc.flow[l] > tol.cleared {
            by_product
                .entry(t.product)
                .or_default()
                .push((t.source, t.sink, t.id.clone()));
        }
    }
    for (_, edges) in by_product.iter() {
        if let Some(cycle) = find_cycle(model.nodes.len(), edges) {
            witnesses.extend(cycle);
        }
    }
    let passed = witnesses.is_empty();
    TheoremCheck {
        name: "T5 no transport cycles",
        passed,
        worst_residual: 0.0,
        witnesses,
        note: if precondition {
            None
        } else {
            Some("precondition unmet: some transport bids are not positive".to_string())
        },
    }
}

fn find_cycle(n_nodes: usize, edges: &[(usize, usize, String)]) -> Option<Vec<String>> {
    // Iterative DFS cycle detection on the cleared-flow digraph.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for (e, &(s, t, _)) in edges.iter().enumerate() {
        adj[s].push((t, e));
    }
    let mut color = vec![0u8; n_nodes]; // 0 white, 1 gray, 2 black
    let mut stack_edges: Vec<usize> = Vec::new();

    fn dfs(
        u: usize,
        adj: &[Vec<(usize, usize)>],
        color: &mut [u8],
        stack_edges: &mut Vec<usize>,
        edges: &[(usize, usize, String)],
    ) -> Option<Vec<String>> {
        color[u] = 1;
        for &(v, e) in &adj[u] {
            if color[v] == 1 {
                let mut cyc: Vec<String> = stack_edges
                    .iter()
                    .map(|&k| edges[k].2.clone())
                    .collect();
                cyc.push(edges[e].2.clone());
                return Some(cyc);
            }
            if color[v] == 0 {
                stack_edges.push(e);
                if let Some(c) = dfs(v, adj, color, stack_edges, edges) {
                    return Some(c);
                }
                stack_edges.pop();
            }
        }
        color[u] = 2;
        None
    }

    for u in 0..n_nodes {
        if color[u] == 0 {
            if let Some(c) = dfs(u, &adj, &mut color, &mut stack_edges, edges) {
                return Some(c);
            }
        }
    }
    None
}
