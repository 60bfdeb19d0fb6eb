//! Small hand-built models shared by unit and integration tests.

use crate::model::{
    Consumer, GeoNode, Product, Supplier, SupplyChainModel, Technology, TransportProvider,
    YieldTerm,
};
use crate::Real;

pub fn product(id: &str) -> Product {
    Product {
        id: id.into(),
        unit: "tonne".into(),
    }
}

pub fn node(id: &str) -> GeoNode {
    GeoNode { id: id.into() }
}

pub fn supplier(id: &str, node: usize, prod: usize, bid: Real, cap: Real) -> Supplier {
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

pub fn consumer(id: &str, node: usize, prod: usize, bid: Real, cap: Real) -> Consumer {
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

pub fn transport(
    id: &str,
    source: usize,
    sink: usize,
    prod: usize,
    bid: Real,
    cap: Real,
) -> TransportProvider {
    TransportProvider {
        id: id.into(),
        source,
        sink,
        product: prod,
        bid,
        capacity: cap,
        forced_min: 0.0,
    }
}

pub fn technology(
    id: &str,
    node: usize,
    reference: usize,
    inputs: Vec<(usize, Real)>,
    outputs: Vec<(usize, Real)>,
    bid: Real,
    cap: Real,
) -> Technology {
    Technology {
        id: id.into(),
        node,
        reference_product: reference,
        inputs: inputs
            .into_iter()
            .map(|(product, gamma)| YieldTerm { product, gamma })
            .collect(),
        outputs: outputs
            .into_iter()
            .map(|(product, gamma)| YieldTerm { product, gamma })
            .collect(),
        bid,
        capacity: cap,
        forced_min: 0.0,
    }
}

/// Two suppliers, three technologies, two consumers; S2 feeds two chains, so
/// partitioning along it yields two components.
///
/// Products: A -> T1 -> B; {B, C} -> T2 -> E -> D1; C -> T3 -> F -> D2.
/// T2's reference input is B with unit yield; E has yield 0.5.
pub fn two_component_model() -> SupplyChainModel {
    let p = |id: &str| -> usize {
        ["A", "B", "C", "E", "F"].iter().position(|x| *x == id).unwrap()
    };
    SupplyChainModel::from_parts(
        vec![
            product("A"),
            product("B"),
            product("C"),
            product("E"),
            product("F"),
        ],
        vec![node("n1")],
        vec![
            supplier("S1", 0, p("A"), 1.0, 100.0),
            supplier("S2", 0, p("C"), 2.0, 100.0),
        ],
        vec![
            consumer("D1", 0, p("E"), 50.0, 100.0),
            consumer("D2", 0, p("F"), 40.0, 100.0),
        ],
        vec![],
        vec![
            technology("T1", 0, p("A"), vec![(p("A"), 1.0)], vec![(p("B"), 1.0)], 1.0, 100.0),
            technology(
                "T2",
                0,
                p("B"),
                vec![(p("B"), 1.0), (p("C"), 2.0)],
                vec![(p("E"), 0.5)],
                10.0,
                100.0,
            ),
            technology("T3", 0, p("C"), vec![(p("C"), 1.0)], vec![(p("F"), 1.0)], 1.0, 100.0),
        ],
    )
}

/// Two remuneration paths between S1 and D1 with cumulative yields 1 and
/// 0.5: T1 splits A into B (yield 1) and D (yield 0.5); both halves convert
/// to C for the consumer.
pub fn multipath_model() -> SupplyChainModel {
    let p = |id: &str| -> usize {
        ["A", "B", "D", "C"].iter().position(|x| *x == id).unwrap()
    };
    SupplyChainModel::from_parts(
        vec![product("A"), product("B"), product("D"), product("C")],
        vec![node("n0"), node("n1")],
        vec![supplier("S1", 0, p("A"), 1.0, 100.0)],
        vec![consumer("D1", 1, p("C"), 50.0, 300.0)],
        vec![transport("L1", 0, 1, p("A"), 0.5, 1000.0)],
        vec![
            technology(
                "T1",
                1,
                p("A"),
                vec![(p("A"), 1.0)],
                vec![(p("B"), 1.0), (p("D"), 0.5)],
                1.0,
                1000.0,
            ),
            technology("T2", 1, p("B"), vec![(p("B"), 1.0)], vec![(p("C"), 1.0)], 1.0, 1000.0),
            technology("T3", 1, p("D"), vec![(p("D"), 1.0)], vec![(p("C"), 1.0)], 1.0, 1000.0),
        ],
    )
}

/// A three-technology cycle: t1 consumes q and produces p0 plus p1, the
/// chain t2, t3 turns p1 back into q. `gamma_p1` sets the cumulative cycle
/// yield. An outside node supplies q and takes p0.
pub fn cycle_model(gamma_p1: Real) -> SupplyChainModel {
    let p = |id: &str| -> usize {
        ["q", "p0", "p1", "p2"].iter().position(|x| *x == id).unwrap()
    };
    SupplyChainModel::from_parts(
        vec![product("q"), product("p0"), product("p1"), product("p2")],
        vec![node("n"), node("nx")],
        vec![supplier("Sq", 1, p("q"), 1.0, 100.0)],
        vec![consumer("Dp0", 1, p("p0"), 100.0, 1000.0)],
        vec![
            transport("Lq", 1, 0, p("q"), 0.1, 1000.0),
            transport("Lp0", 0, 1, p("p0"), 0.1, 1000.0),
        ],
        vec![
            technology(
                "t1",
                0,
                p("q"),
                vec![(p("q"), 1.0)],
                vec![(p("p0"), 0.3), (p("p1"), gamma_p1)],
                1.0,
                1000.0,
            ),
            technology("t2", 0, p("p1"), vec![(p("p1"), 1.0)], vec![(p("p2"), 1.0)], 1.0, 1000.0),
            technology("t3", 0, p("p2"), vec![(p("p2"), 1.0)], vec![(p("q"), 1.0)], 1.0, 1000.0),
        ],
    )
}
