use super::*;

#[test]
fn dataset_loads_with_expected_shape() {
    let model = load_msw();
    assert_eq!(model.products.len(), 13);
    assert_eq!(model.nodes.len(), 5);
    assert_eq!(model.suppliers.len(), 2);
    // Seven disposal outlets plus the city's six purchase positions.
    assert_eq!(model.consumers.len(), 13);
    assert_eq!(model.technologies.len(), 6);
    // Only the electricity legs come in below the warning threshold of zero;
    // every transport bid in the dataset is positive.
    assert!(model.transports.iter().all(|t| t.bid > 0.0));
    assert!(model.warnings.is_empty(), "{:?}", model.warnings);
}

#[test]
fn waste_leg_is_fixed_at_the_published_rate() {
    let model = load_msw();
    let refs = resolve(&model).unwrap();
    assert_eq!(refs.waste_leg, 9.18);
    assert!((refs.disposal_cost() - 66.30).abs() < 1e-12);
    assert!((refs.tech_elec - 0.13).abs() < 1e-12);
    assert!((refs.city_elec - 0.1309).abs() < 1e-12);
}

#[test]
fn calibration_reproduces_reference_bids_within_tolerance() {
    let model = load_msw();
    let targets = reference_targets();
    let cal = calibrate_transport_costs(&model, &targets).unwrap();
    assert!(
        cal.max_abs_residual <= 0.01,
        "worst residual {}",
        cal.max_abs_residual
    );
    assert_eq!(cal.p0_leg, 9.18);
    // Rates derived for the exact targets stay close to the dataset rates.
    for (product, rate) in &cal.rates {
        let leg = model
            .transports
            .iter()
            .find(|t| model.products[t.product].id == *product && t.source != t.sink)
            .unwrap();
        assert!((rate - leg.bid).abs() < 0.01, "{product}: {rate} vs {}", leg.bid);
    }
}

#[test]
fn zeroed_transport_rates_undershoot_the_compost_target() {
    let mut model = load_msw();
    for t in model.transports.iter_mut() {
        if model.products[t.product].id != "P0" && model.products[t.product].id != "PE" {
            t.bid = 0.0;
        }
    }
    model.reindex();
    let implied = implied_partial_bids(&model).unwrap();
    assert!(implied["D5"] < 43.51);
    let cal = calibrate_transport_costs(&model, &reference_targets()).unwrap();
    assert!(cal.residuals["D5"] < -1.0);
}

#[test]
fn inconsistent_targets_name_the_offending_equation() {
    let model = load_msw();
    let mut targets = reference_targets();
    targets.insert("D5".to_string(), 1.0); // below even the processing cost
    match calibrate_transport_costs(&model, &targets) {
        Err(CaseStudyError::InconsistentTarget { id, .. }) => assert_eq!(id, "D5"),
        other => panic!("expected inconsistent target, got {other:?}"),
    }
}

#[test]
fn separation_remainder_matches_the_hand_computation() {
    let model = load_msw();
    let remainder = separation_remainder(&model).unwrap();
    // 235*72847 - (66.30 - 9.18 - 0.185*66.30)*72847
    let expected = 235.0 * 72847.0 - (66.30 * 72847.0 - 9.18 * 72847.0 - 66.30 * 0.185 * 72847.0);
    assert!((remainder - expected).abs() < 1e-4, "{remainder} vs {expected}");
}

#[test]
fn covering_scenario_matches_published_bids_within_a_cent() {
    let model = load_msw();
    let graph = crate::graph::build_graph(&model);
    let published = reference_covering_bids();
    for (product, expected) in published {
        let sc = build_covering_scenario(&model, &graph, &product).unwrap();
        let refs = resolve(&model).unwrap();
        let consumer = &refs
            .pathways
            .iter()
            .find(|p| p.out_product == product)
            .unwrap()
            .consumer;
        let got = sc.bid_overrides[consumer];
        assert!(
            (got - expected).abs() <= 0.01,
            "{product}: computed {got} vs published {expected}"
        );
    }
}

#[test]
fn funding_breakdown_rows_sum_to_the_scenario_bids() {
    let model = load_msw();
    let graph = crate::graph::build_graph(&model);
    let sc = build_covering_scenario(&model, &graph, "P3").unwrap();
    let rows = funding_breakdown(&model, Some("P3")).unwrap();
    let refs = resolve(&model).unwrap();
    for pw in &refs.pathways {
        let sum: Real = rows
            .iter()
            .filter(|r| r.activator == pw.consumer)
            .map(|r| r.partial_bid)
            .sum();
        let bid = sc.bid_overrides[&pw.consumer];
        assert!(
            (sum - bid).abs() < 1e-6,
            "{}: rows sum {sum} vs scenario bid {bid}",
            pw.consumer
        );
    }
    // City rows sum to its capped contribution.
    let city_sum: Real = rows
        .iter()
        .filter(|r| r.activator == "S1")
        .map(|r| r.partial_bid)
        .sum();
    assert!((city_sum - 66.30).abs() < 1e-9);
}

#[test]
fn diversion_requires_tags() {
    let mut model = load_msw();
    for c in model.consumers.iter_mut() {
        c.tags.clear();
    }
    let sol = crate::clearing::clear(&model).unwrap();
    assert!(matches!(
        diversion_rate(&model, &sol),
        Err(CaseStudyError::NoLandfillTag)
    ));
}

#[test]
fn case_definitions_align_with_dataset_scenarios() {
    let model = load_msw();
    for case in CASES {
        assert!(
            model.scenario(case.scenario).is_some(),
            "missing scenario {}",
            case.scenario
        );
        let sc = model.scenario(case.scenario).unwrap();
        assert_eq!(case.forced, !sc.forced_lower_bounds.is_empty());
    }
}
