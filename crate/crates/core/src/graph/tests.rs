use super::*;
use crate::fixtures;
use crate::model::Class;

#[test]
fn colocated_pair_yields_single_edge() {
    let model = crate::model::SupplyChainModel::from_parts(
        vec![fixtures::product("P")],
        vec![fixtures::node("N")],
        vec![fixtures::supplier("S", 0, 0, 1.0, 1.0)],
        vec![fixtures::consumer("D", 0, 0, 2.0, 1.0)],
        vec![],
        vec![],
    );
    let g = build_graph(&model);
    assert_eq!(g.edges.len(), 1);
    let e = &g.edges[0];
    assert_eq!(g.vertices[e.from].id, "S");
    assert_eq!(g.vertices[e.to].id, "D");
}

#[test]
fn boundary_contains_only_suppliers_and_consumers() {
    let g = build_graph(&fixtures::multipath_model());
    for &b in &g.boundary() {
        assert!(matches!(
            g.vertices[b].class,
            Class::Supplier | Class::Consumer
        ));
    }
    assert_eq!(g.boundary().len(), 2);
}

#[test]
fn no_supplier_supplier_or_consumer_consumer_edges() {
    let g = build_graph(&fixtures::two_component_model());
    for e in &g.edges {
        let a = &g.vertices[e.from];
        let b = &g.vertices[e.to];
        assert!(!(a.class == Class::Supplier && b.class == Class::Supplier));
        assert!(!(a.class == Class::Consumer && b.class == Class::Consumer));
    }
}

#[test]
fn two_component_fixture_splits_at_s2() {
    let g = build_graph(&fixtures::two_component_model());
    let s2 = g.vertex_index("S2").unwrap();
    assert_eq!(g.degree(s2), 2);
    let comps = components(&g);
    assert_eq!(comps.len(), 2);
    // S2 is retained in each incident component.
    assert!(comps.iter().all(|c| c.vertices.contains(&s2)));
    // Union of components covers the graph; internal vertices appear once.
    let member = component_membership(&comps);
    for (v, ms) in member.iter().enumerate() {
        assert!(!ms.is_empty(), "vertex {v} uncovered");
        if !g.vertices[v].is_boundary() {
            assert_eq!(ms.len(), 1);
        }
    }
}

#[test]
fn chain_graph_is_single_component() {
    let g = build_graph(&fixtures::multipath_model());
    assert_eq!(components(&g).len(), 1);
}

#[test]
fn multipath_fixture_has_two_paths_with_expected_yields() {
    let g = build_graph(&fixtures::multipath_model());
    let s1 = g.vertex_index("S1").unwrap();
    let d1 = g.vertex_index("D1").unwrap();
    let mut paths = enumerate_paths(&g, s1, d1).unwrap();
    paths.sort_by(|a, b| a.yield_factor.partial_cmp(&b.yield_factor).unwrap());
    assert_eq!(paths.len(), 2);
    assert!((paths[0].yield_factor - 0.5).abs() < 1e-12);
    assert!((paths[1].yield_factor - 1.0).abs() < 1e-12);
}

#[test]
fn path_factors_are_reciprocal() {
    let g = build_graph(&fixtures::multipath_model());
    let s1 = g.vertex_index("S1").unwrap();
    let d1 = g.vertex_index("D1").unwrap();
    let fwd = enumerate_paths(&g, s1, d1).unwrap();
    let rev = enumerate_paths(&g, d1, s1).unwrap();
    assert_eq!(fwd.len(), rev.len());
    for f in &fwd {
        assert!((f.yield_factor * f.basis_factor - 1.0).abs() < 1e-12);
        // The reverse traversal of the same vertex sequence has the inverse
        // yield.
        let mirror = rev
            .iter()
            .find(|r| r.vertices.iter().rev().eq(f.vertices.iter()))
            .expect("reverse path exists");
        assert!((f.yield_factor * mirror.yield_factor - 1.0).abs() < 1e-12);
    }
}

#[test]
fn adjacent_pair_has_unit_yield_path() {
    let model = crate::model::SupplyChainModel::from_parts(
        vec![fixtures::product("P")],
        vec![fixtures::node("N")],
        vec![fixtures::supplier("S", 0, 0, 1.0, 1.0)],
        vec![fixtures::consumer("D", 0, 0, 2.0, 1.0)],
        vec![],
        vec![],
    );
    let g = build_graph(&model);
    let paths = enumerate_paths(&g, 0, 1).unwrap();
    assert_eq!(paths.len(), 1);
    assert!((paths[0].yield_factor - 1.0).abs() < 1e-15);
}

#[test]
fn disconnected_pair_enumerates_empty() {
    let g = build_graph(&fixtures::two_component_model());
    let d2 = g.vertex_index("D2").unwrap();
    let s1 = g.vertex_index("S1").unwrap();
    // D2 and S1 sit in different components; the only link runs through the
    // boundary vertex S2, which paths may not cross.
    let paths = enumerate_paths(&g, s1, d2).unwrap();
    assert!(paths.is_empty());
}

#[test]
fn cycle_fixture_classification_follows_the_trichotomy() {
    for (gamma, class) in [
        (1.5, CycleClass::InfeasibleOnlyZero),
        (1.0, CycleClass::NonphysicalDegenerate),
        (0.5, CycleClass::LossyFeasible),
    ] {
        let g = build_graph(&fixtures::cycle_model(gamma));
        let cycles = find_technology_cycles(&g);
        assert_eq!(cycles.len(), 1, "gamma={gamma}");
        assert!((cycles[0].cycle_yield - gamma).abs() < 1e-12);
        assert_eq!(cycles[0].class, class, "gamma={gamma}");
    }
}

#[test]
fn dag_fixture_has_no_cycles() {
    let g = build_graph(&fixtures::multipath_model());
    assert!(find_technology_cycles(&g).is_empty());
}

#[test]
fn transport_relays_are_flagged() {
    let model = crate::model::SupplyChainModel::from_parts(
        vec![fixtures::product("P")],
        vec![fixtures::node("A"), fixtures::node("B"), fixtures::node("C")],
        vec![fixtures::supplier("S", 0, 0, 1.0, 1.0)],
        vec![fixtures::consumer("D", 2, 0, 5.0, 1.0)],
        vec![
            fixtures::transport("L1", 0, 1, 0, 1.0, 10.0),
            fixtures::transport("L2", 1, 2, 0, 1.0, 10.0),
        ],
        vec![],
    );
    let g = build_graph(&model);
    assert!(g.edges.iter().any(|e| e.flagged));
    assert!(!g.build_log.is_empty());
}

#[test]
fn path_cap_is_an_explicit_error() {
    let g = build_graph(&fixtures::multipath_model());
    let s1 = g.vertex_index("S1").unwrap();
    let d1 = g.vertex_index("D1").unwrap();
    match paths::enumerate_paths_capped(&g, s1, d1, 1) {
        Err(PathError::LimitExceeded(1)) => {}
        other => panic!("expected limit error, got {other:?}"),
    }
}

#[test]
fn dot_export_carries_shapes_and_product_labels() {
    let g = build_graph(&fixtures::multipath_model());
    let dot = to_dot(&g);
    assert!(dot.contains("shape=box"));
    assert!(dot.contains("shape=house"));
    assert!(dot.contains("shape=hexagon"));
    assert!(dot.contains("label=\"A\""));
}
