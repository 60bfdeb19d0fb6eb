use super::*;
use crate::model::{Consumer, GeoNode, Product, Scenario, Supplier, SupplyChainModel};

fn product(id: &str) -> Product {
    Product {
        id: id.into(),
        unit: "tonne".into(),
    }
}

fn node(id: &str) -> GeoNode {
    GeoNode { id: id.into() }
}

fn supplier(id: &str, node: usize, prod: usize, bid: f64, cap: f64) -> Supplier {
    Supplier {
        id: id.into(),
        node,
        product: prod,
        bid,
        capacity: cap,
        forced_min: 0.0,
        tags: Vec::new(),
    }
}

fn consumer(id: &str, node: usize, prod: usize, bid: f64, cap: f64) -> Consumer {
    Consumer {
        id: id.into(),
        node,
        product: prod,
        bid,
        capacity: cap,
        forced_min: 0.0,
        tags: Vec::new(),
    }
}

fn pair_market(sup_bid: f64, dem_bid: f64) -> SupplyChainModel {
    SupplyChainModel::from_parts(
        vec![product("P")],
        vec![node("N")],
        vec![supplier("S1", 0, 0, sup_bid, 10.0)],
        vec![consumer("D1", 0, 0, dem_bid, 10.0)],
        vec![],
        vec![],
    )
}

#[test]
fn empty_market_clears_to_zero() {
    let model = SupplyChainModel::from_parts(
        vec![product("P")],
        vec![node("N")],
        vec![],
        vec![],
        vec![],
        vec![],
    );
    let sol = clear(&model).unwrap();
    assert_eq!(sol.welfare, 0.0);
    assert!(sol.theorems.all_passed());
}

#[test]
fn simple_pair_clears_at_full_volume() {
    let sol = clear(&pair_market(1.0, 2.0)).unwrap();
    assert!((sol.welfare - 10.0).abs() < 1e-9);
    assert!((sol.allocations.supply[0] - 10.0).abs() < 1e-9);
    assert!(sol.theorems.all_passed());
    // Welfare identity: unforced welfare equals the sum of all profits.
    assert!((sol.welfare - sol.profits.total()).abs() < 1e-6 * (1.0 + sol.welfare.abs()));
}

#[test]
fn dry_market_passes_vacuously() {
    let sol = clear(&pair_market(2.0, 1.0)).unwrap();
    assert_eq!(sol.welfare, 0.0);
    assert!(sol.allocations.demand[0].abs() < 1e-12);
    assert!(sol.theorems.all_passed());
}

#[test]
fn clear_rejects_forced_bounds() {
    let mut model = pair_market(1.0, 2.0);
    model.consumers[0].forced_min = 5.0;
    assert!(matches!(clear(&model), Err(ClearError::ForcedBoundsPresent)));
    assert!(clear_forced(&model).is_ok());
}

#[test]
fn clear_forced_requires_forced_bounds() {
    let model = pair_market(1.0, 2.0);
    assert!(matches!(clear_forced(&model), Err(ClearError::NoForcedBounds)));
}

#[test]
fn zero_forcing_is_identical_to_voluntary_clear() {
    let model = pair_market(1.0, 2.0);
    let mut forced = model.clone();
    forced.suppliers[0].forced_min = 0.0;
    let a = clear(&model).unwrap();
    let b = clear_with(&forced, &ClearOptions::default()).unwrap();
    assert_eq!(a.allocations.supply, b.allocations.supply);
    assert_eq!(a.welfare, b.welfare);
}

/// Hand-solved two-variable LP: consumer forced to buy 5 units although its
/// bid (1) is below the supplier's cost (3). Cleared at s = d = 5,
/// welfare = 5*(1-3) = -10, price pinned to the supplier bid 3 by the
/// windfall-minimal canonical duals, consumer profit 5*(1-3) = -10.
#[test]
fn forced_purchase_below_cost_loses_money_but_stays_revenue_adequate() {
    let mut model = pair_market(3.0, 1.0);
    model.consumers[0].forced_min = 5.0;
    model.consumers[0].capacity = 5.0;
    let sol = clear_forced(&model).unwrap();
    assert!((sol.welfare - -10.0).abs() < 1e-9);
    assert!((sol.allocations.demand[0] - 5.0).abs() < 1e-9);
    assert!(sol.profits.consumer[0] < 0.0);
    let diag = sol.forced.as_ref().unwrap();
    assert!(diag.negative_profits.iter().any(|(id, _)| id == "D1"));
    assert!(diag.revenue_adequacy_residual.abs() <= 1e-6 * (1.0 + 25.0));
    // Supplier is voluntary: it cannot lose money even in a forced market.
    assert!(sol.profits.supplier[0] >= -1e-9);
    // T1 and T4 report the compelled consumer as witness.
    assert!(!sol.theorems.check("T1 nonnegative profits").unwrap().passed);
}

#[test]
fn infeasible_forcing_reports_binding_rows() {
    let mut model = pair_market(1.0, 2.0);
    model.suppliers[0].capacity = 3.0;
    model.consumers[0].forced_min = 5.0;
    match clear_forced(&model) {
        Err(ClearError::Infeasible(rows)) => {
            assert!(!rows.is_empty());
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn scaling_money_units_scales_prices_and_profits_only() {
    let base = pair_market(1.0, 2.0);
    let mut scaled = base.clone();
    let k = 7.5;
    scaled.suppliers[0].bid *= k;
    scaled.consumers[0].bid *= k;
    scaled.reindex();
    let a = clear(&base).unwrap();
    let b = clear(&scaled).unwrap();
    assert!((b.welfare - k * a.welfare).abs() < 1e-9 * (1.0 + b.welfare.abs()));
    assert_eq!(a.allocations.supply, b.allocations.supply);
    let pa = a.prices.nodal_price(0, 0).unwrap();
    let pb = b.prices.nodal_price(0, 0).unwrap();
    assert!((pb - k * pa).abs() < 1e-9 * (1.0 + pb.abs()));
}

#[test]
fn epsilon_nudges_activator_bids() {
    // At exactly equal bids the market is welfare-indifferent; epsilon tips
    // it into trading.
    let model = pair_market(1.0, 1.0);
    let opts = ClearOptions {
        epsilon: 1e-3,
        ..Default::default()
    };
    let sol = clear_with(&model, &opts).unwrap();
    assert!((sol.allocations.demand[0] - 10.0).abs() < 1e-9);
}

#[test]
fn scenario_epsilon_is_carried_by_the_scenario() {
    let sc = Scenario {
        name: "eps".into(),
        epsilon: 1e-3,
        ..Default::default()
    };
    assert_eq!(sc.epsilon, 1e-3);
}

#[test]
fn export_csv_has_all_sections() {
    let model = pair_market(1.0, 2.0);
    let sol = clear(&model).unwrap();
    let csv = export::solution_csv(&model, &sol, Some("N"), Some(50.0));
    assert!(csv.contains("objective,,"));
    assert!(csv.contains("bid,D1,2.00"));
    assert!(csv.contains("profit,S1,"));
    assert!(csv.contains("allocation,D1,10"));
    assert!(csv.contains("recycled_percent,,50.0"));
    assert!(csv.contains("price,P@N,"));
    // Determinism: identical invocations are byte-identical.
    let sol2 = clear(&model).unwrap();
    assert_eq!(csv, export::solution_csv(&model, &sol2, Some("N"), Some(50.0)));
}
