//! End-to-end market clearing: solve the LP, derive stakeholder prices and
//! profits, verify the economic property suite, and diagnose forced runs.

mod canonical;
pub mod export;
mod theorems;

pub use theorems::{verify_theorems, TheoremCheck, TheoremReport};

use std::collections::BTreeMap;

use crate::lp::build::build_condensed_lp;
use crate::lp::{LpSolution, LpStatus};
use crate::model::{Class, SupplyChainModel};
use crate::Real;

/// Comparison tolerances used across the clearing pipeline.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Absolute tolerance on flows.
    pub flow: Real,
    /// Absolute tolerance on money values.
    pub money: Real,
    /// Relative strong-duality tolerance.
    pub duality_rel: Real,
    /// Allocations above this count as cleared.
    pub cleared: Real,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            flow: 1e-6,
            money: 1e-4,
            duality_rel: 1e-6,
            cleared: 1e-7,
        }
    }
}

/// How duals are selected when the optimal dual is not unique.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PriceMode {
    /// Deterministic canonical representative: minimize windfall profits of
    /// forced participants, then the L1 norm of nodal prices, over the
    /// optimal dual set.
    #[default]
    Canonical,
    /// Duals of the final simplex basis, as-is.
    Representative,
}

#[derive(Clone, Copy, Debug)]
pub struct ClearOptions {
    /// Degeneracy-breaking nudge added to activator bids (demand side up,
    /// negative-bid supply down) before solving.
    pub epsilon: Real,
    pub price_mode: PriceMode,
    pub tolerances: Tolerances,
}

impl Default for ClearOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            price_mode: PriceMode::Canonical,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClearError {
    #[error("model has forced lower bounds; use clear_forced")]
    ForcedBoundsPresent,
    #[error("model has no forced lower bounds; use clear")]
    NoForcedBounds,
    #[error("clearing problem infeasible; binding constraints: {0:?}")]
    Infeasible(Vec<String>),
    #[error("clearing problem unbounded along {0:?}")]
    Unbounded(Vec<String>),
}

/// Physical allocations of a clearing solution.
#[derive(Clone, Debug, Default)]
pub struct Allocations {
    pub supply: Vec<Real>,
    pub demand: Vec<Real>,
    pub flow: Vec<Real>,
    /// Technology throughput on the reference-input basis.
    pub tech: Vec<Real>,
    /// Generation per (technology, product).
    pub generation: BTreeMap<(usize, usize), Real>,
    /// Consumption per (technology, product).
    pub consumption: BTreeMap<(usize, usize), Real>,
    /// Aggregate supply per (node, product).
    pub nodal_supply: BTreeMap<(usize, usize), Real>,
    /// Aggregate demand per (node, product).
    pub nodal_demand: BTreeMap<(usize, usize), Real>,
}

/// Nodal prices and the stakeholder prices derived from them.
#[derive(Clone, Debug, Default)]
pub struct PriceSet {
    /// Balance-row duals per (node, product); defined only where a balance
    /// row exists.
    pub nodal: BTreeMap<(usize, usize), Real>,
    pub supplier: Vec<Real>,
    pub consumer: Vec<Real>,
    /// Sink-node price minus source-node price.
    pub transport: Vec<Real>,
    /// Yield-weighted output value minus input value.
    pub technology: Vec<Real>,
}

impl PriceSet {
    pub fn nodal_price(&self, node: usize, product: usize) -> Option<Real> {
        self.nodal.get(&(node, product)).copied()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ProfitSet {
    pub supplier: Vec<Real>,
    pub consumer: Vec<Real>,
    pub transport: Vec<Real>,
    pub technology: Vec<Real>,
}

impl ProfitSet {
    pub fn class_total(&self, class: Class) -> Real {
        match class {
            Class::Supplier => self.supplier.iter().sum(),
            Class::Consumer => self.consumer.iter().sum(),
            Class::Transport => self.transport.iter().sum(),
            Class::Technology => self.technology.iter().sum(),
        }
    }
    pub fn total(&self) -> Real {
        self.class_total(Class::Supplier)
            + self.class_total(Class::Consumer)
            + self.class_total(Class::Transport)
            + self.class_total(Class::Technology)
    }
}

/// Indices of stakeholders with allocation above the cleared threshold.
#[derive(Clone, Debug, Default)]
pub struct ClearedSets {
    pub suppliers: Vec<usize>,
    pub consumers: Vec<usize>,
    pub transports: Vec<usize>,
    pub technologies: Vec<usize>,
}

/// Diagnostics attached to forced-participation runs.
#[derive(Clone, Debug, Default)]
pub struct ForcedDiagnostics {
    /// (stakeholder id, profit) for stakeholders losing money.
    pub negative_profits: Vec<(String, Real)>,
    /// (stakeholder id, amount) where the clearing price violates the bid
    /// bound that holds in voluntary markets.
    pub bid_bound_violations: Vec<(String, Real)>,
    /// |consumer payments - payouts|; revenue adequacy must survive forcing.
    pub revenue_adequacy_residual: Real,
}

/// Everything the clearing procedure produces for one model.
#[derive(Clone, Debug)]
pub struct ClearingSolution {
    pub status: LpStatus,
    pub welfare: Real,
    pub allocations: Allocations,
    pub prices: PriceSet,
    pub profits: ProfitSet,
    pub cleared: ClearedSets,
    pub theorems: TheoremReport,
    pub forced: Option<ForcedDiagnostics>,
    /// Raw LP artifacts for audits.
    pub lp_solution: LpSolution<Real>,
    /// Bids as seen by the market (after any epsilon nudge).
    pub effective_supplier_bids: Vec<Real>,
    pub effective_consumer_bids: Vec<Real>,
}

/// Clear a voluntary market: every invariant of the coordinated market is
/// expected to hold and is verified on the way out.
pub fn clear(model: &SupplyChainModel) -> Result<ClearingSolution, ClearError> {
    if model.has_forced_bounds() {
        return Err(ClearError::ForcedBoundsPresent);
    }
    clear_with(model, &ClearOptions::default())
}

/// Clear with forced participation floors present; attaches property-loss
/// diagnostics to the solution.
pub fn clear_forced(model: &SupplyChainModel) -> Result<ClearingSolution, ClearError> {
    if !model.has_forced_bounds() {
        return Err(ClearError::NoForcedBounds);
    }
    clear_with(model, &ClearOptions::default())
}

pub fn clear_with(
    model: &SupplyChainModel,
    options: &ClearOptions,
) -> Result<ClearingSolution, ClearError> {
    let forced = model.has_forced_bounds();

    // Epsilon nudge: demand-side activators bid up, negative-bid suppliers
    // offer to pay more, so trade strictly dominates the dry solution.
    let mut market = model.clone();
    if options.epsilon != 0.0 {
        for j in market.consumers_pos.clone() {
            market.consumers[j].bid += options.epsilon;
        }
        for i in market.suppliers_neg.clone() {
            market.suppliers[i].bid -= options.epsilon;
        }
        market.reindex();
    }

    let lp = build_condensed_lp(&market);
    let sol = lp.solve();
    match sol.status {
        LpStatus::Infeasible => return Err(ClearError::Infeasible(sol.infeasible_rows)),
        LpStatus::Unbounded => return Err(ClearError::Unbounded(sol.unbounded_ray)),
        LpStatus::Optimal => {}
    }

    let duals = match options.price_mode {
        PriceMode::Canonical => canonical::canonical_duals(&market, &lp, &sol)
            .unwrap_or_else(|| canonical::representative_duals(&market, &lp, &sol)),
        PriceMode::Representative => canonical::representative_duals(&market, &lp, &sol),
    };

    let allocations = extract_allocations(&market, &lp, &sol);
    let prices = derive_prices(&market, &duals.nodal);
    let profits = derive_profits(&market, &allocations, &prices);
    let cleared = cleared_sets(&allocations, options.tolerances.cleared);
    let welfare = sol.objective;

    let theorems = theorems::run_checks(
        &market,
        &allocations,
        &prices,
        &profits,
        &cleared,
        &duals,
        &options.tolerances,
    );

    let forced_diag = if forced {
        Some(forced_diagnostics(
            &market,
            &allocations,
            &prices,
            &profits,
            &options.tolerances,
        ))
    } else {
        None
    };

    Ok(ClearingSolution {
        status: sol.status,
        welfare,
        allocations,
        prices,
        profits,
        cleared,
        theorems,
        forced: forced_diag,
        lp_solution: sol,
        effective_supplier_bids: market.suppliers.iter().map(|s| s.bid).collect(),
        effective_consumer_bids: market.consumers.iter().map(|c| c.bid).collect(),
    })
}

pub(crate) struct DualValues {
    /// Nodal price per balance row key (node, product).
    pub nodal: BTreeMap<(usize, usize), Real>,
    /// Upper-bound dual per condensed variable.
    pub lam_up: Vec<Real>,
    /// Lower-bound dual per condensed variable.
    pub lam_lo: Vec<Real>,
    /// Condensed variable order: suppliers, consumers, transports, techs.
    pub offsets: VarOffsets,
}

#[derive(Clone, Copy)]
pub(crate) struct VarOffsets {
    pub s0: usize,
    pub d0: usize,
    pub f0: usize,
    pub x0: usize,
}

impl VarOffsets {
    pub fn for_model(model: &SupplyChainModel) -> Self {
        let s0 = 0;
        let d0 = s0 + model.suppliers.len();
        let f0 = d0 + model.consumers.len();
        let x0 = f0 + model.transports.len();
        Self { s0, d0, f0, x0 }
    }
}

fn extract_allocations(
    model: &SupplyChainModel,
    lp: &crate::LinearProgram,
    sol: &LpSolution<Real>,
) -> Allocations {
    let off = VarOffsets::for_model(model);
    let mut a = Allocations {
        supply: (0..model.suppliers.len())
            .map(|i| sol.primal[off.s0 + i])
            .collect(),
        demand: (0..model.consumers.len())
            .map(|j| sol.primal[off.d0 + j])
            .collect(),
        flow: (0..model.transports.len())
            .map(|l| sol.primal[off.f0 + l])
            .collect(),
        tech: (0..model.technologies.len())
            .map(|t| sol.primal[off.x0 + t])
            .collect(),
        ..Default::default()
    };
    let _ = lp;
    for (t, tech) in model.technologies.iter().enumerate() {
        for y in &tech.outputs {
            a.generation.insert((t, y.product), y.gamma * a.tech[t]);
        }
        for y in &tech.inputs {
            a.consumption.insert((t, y.product), y.gamma * a.tech[t]);
        }
    }
    for (&(n, p), is) in &model.suppliers_np {
        let total = is.iter().map(|&i| a.supply[i]).sum();
        a.nodal_supply.insert((n, p), total);
    }
    for (&(n, p), js) in &model.consumers_np {
        let total = js.iter().map(|&j| a.demand[j]).sum();
        a.nodal_demand.insert((n, p), total);
    }
    a
}

/// Stakeholder prices from nodal prices (the price identities).
pub(crate) fn derive_prices(
    model: &SupplyChainModel,
    nodal: &BTreeMap<(usize, usize), Real>,
) -> PriceSet {
    let at = |n: usize, p: usize| nodal.get(&(n, p)).copied().unwrap_or(0.0);
    PriceSet {
        nodal: nodal.clone(),
        supplier: model
            .suppliers
            .iter()
            .map(|s| at(s.node, s.product))
            .collect(),
        consumer: model
            .consumers
            .iter()
            .map(|c| at(c.node, c.product))
            .collect(),
        transport: model
            .transports
            .iter()
            .map(|t| at(t.sink, t.product) - at(t.source, t.product))
            .collect(),
        technology: model
            .technologies
            .iter()
            .map(|t| {
                let gen: Real = t
                    .outputs
                    .iter()
                    .map(|y| y.gamma * at(t.node, y.product))
                    .sum();
                let con: Real = t
                    .inputs
                    .iter()
                    .map(|y| y.gamma * at(t.node, y.product))
                    .sum();
                gen - con
            })
            .collect(),
    }
}

pub(crate) fn derive_profits(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
) -> ProfitSet {
    ProfitSet {
        supplier: model
            .suppliers
            .iter()
            .enumerate()
            .map(|(i, s)| (prices.supplier[i] - s.bid) * alloc.supply[i])
            .collect(),
        consumer: model
            .consumers
            .iter()
            .enumerate()
            .map(|(j, c)| (c.bid - prices.consumer[j]) * alloc.demand[j])
            .collect(),
        transport: model
            .transports
            .iter()
            .enumerate()
            .map(|(l, t)| (prices.transport[l] - t.bid) * alloc.flow[l])
            .collect(),
        technology: model
            .technologies
            .iter()
            .enumerate()
            .map(|(k, t)| (prices.technology[k] - t.bid) * alloc.tech[k])
            .collect(),
    }
}

fn cleared_sets(alloc: &Allocations, threshold: Real) -> ClearedSets {
    let pick = |v: &[Real]| -> Vec<usize> {
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x > threshold)
            .map(|(i, _)| i)
            .collect()
    };
    ClearedSets {
        suppliers: pick(&alloc.supply),
        consumers: pick(&alloc.demand),
        transports: pick(&alloc.flow),
        technologies: pick(&alloc.tech),
    }
}

fn forced_diagnostics(
    model: &SupplyChainModel,
    alloc: &Allocations,
    prices: &PriceSet,
    profits: &ProfitSet,
    tol: &Tolerances,
) -> ForcedDiagnostics {
    let mut d = ForcedDiagnostics::default();
    let mut push_neg = |id: &str, profit: Real| {
        if profit < -tol.money {
            d.negative_profits.push((id.to_string(), profit));
        }
    };
    for (i, s) in model.suppliers.iter().enumerate() {
        push_neg(&s.id, profits.supplier[i]);
    }
    for (j, c) in model.consumers.iter().enumerate() {
        push_neg(&c.id, profits.consumer[j]);
    }
    for (l, t) in model.transports.iter().enumerate() {
        push_neg(&t.id, profits.transport[l]);
    }
    for (k, t) in model.technologies.iter().enumerate() {
        push_neg(&t.id, profits.technology[k]);
    }
    for (i, s) in model.suppliers.iter().enumerate() {
        if alloc.supply[i] > tol.cleared && prices.supplier[i] < s.bid - tol.money {
            d.bid_bound_violations
                .push((s.id.clone(), s.bid - prices.supplier[i]));
        }
    }
    for (j, c) in model.consumers.iter().enumerate() {
        if alloc.demand[j] > tol.cleared && prices.consumer[j] > c.bid + tol.money {
            d.bid_bound_violations
                .push((c.id.clone(), prices.consumer[j] - c.bid));
        }
    }
    for (l, t) in model.transports.iter().enumerate() {
        if alloc.flow[l] > tol.cleared && prices.transport[l] < t.bid - tol.money {
            d.bid_bound_violations
                .push((t.id.clone(), t.bid - prices.transport[l]));
        }
    }
    for (k, t) in model.technologies.iter().enumerate() {
        if alloc.tech[k] > tol.cleared && prices.technology[k] < t.bid - tol.money {
            d.bid_bound_violations
                .push((t.id.clone(), t.bid - prices.technology[k]));
        }
    }
    d.revenue_adequacy_residual = theorems::revenue_residual(model, alloc, prices);
    d
}

#[cfg(test)]
mod tests;
