//! Municipal solid waste case study: bundled dataset, transport-cost
//! calibration, break-even bid construction, and the nine-scenario runner.
//!
//! The dataset models one city's waste economy: the city pays to have mixed
//! waste removed, a separation plant splits it into six streams, five
//! recycling technologies turn streams into products the city buys back, the
//! landfill charges a tipping fee, and a grid supplies electricity. Dataset
//! bids for the recycled products equal the computed break-even values, so
//! scenarios explore how far bids must move to activate recycling.

use std::collections::BTreeMap;

use crate::bids::PartialBidRow;
use crate::clearing::{clear_with, ClearError, ClearOptions, ClearingSolution};
use crate::graph::StakeholderGraph;
use crate::model::{apply_scenario, load_model, ModelError, Scenario, SupplyChainModel};
use crate::report;
use crate::Real;

/// The bundled dataset.
pub const MSW_DATASET: &str = include_str!("../../data/msw.json");

pub fn load_msw() -> SupplyChainModel {
    load_model(MSW_DATASET).expect("bundled dataset is valid")
}

#[derive(Debug, thiserror::Error)]
pub enum CaseStudyError {
    #[error("dataset is missing expected id `{0}`")]
    MissingId(String),
    #[error("unknown case number {0} (expected 1..=9)")]
    UnknownCase(u8),
    #[error("scenario `{0}` not present in the dataset")]
    MissingScenario(String),
    #[error("no consumer carries a `landfill` tag")]
    NoLandfillTag,
    #[error("no supplier carries a `waste` tag")]
    NoWasteTag,
    #[error("calibration target for `{id}` admits no nonnegative rate (got {rate})")]
    InconsistentTarget { id: String, rate: Real },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Clear(#[from] ClearError),
}

/// One recycling pathway: a sorted stream into a technology into a recycled
/// product bought by one consumer.
#[derive(Clone, Debug)]
pub struct Pathway {
    pub consumer: String,
    pub technology: String,
    pub stream_product: String,
    pub out_product: String,
    pub out_gamma: Real,
    pub elec_gamma: Real,
    /// Non-recyclable byproduct share per reference input.
    pub byproduct_gamma: Real,
    pub stream_leg: String,
    pub product_leg: String,
    pub tech_bid: Real,
    pub stream_leg_bid: Real,
    pub product_leg_bid: Real,
}

/// Resolved handles into the MSW dataset.
pub struct MswRefs {
    pub pathways: Vec<Pathway>,
    pub waste_supplier: String,
    pub grid: String,
    pub separator: String,
    pub elec_consumer: String,
    /// Tipping fee magnitude (payment the landfill demands per tonne).
    pub tipping: Real,
    /// Waste transport rate (city to separator, and landfill-bound legs).
    pub waste_leg: Real,
    /// Technology-side electricity cost per kWh.
    pub tech_elec: Real,
    /// City-side electricity cost per kWh.
    pub city_elec: Real,
    pub separation_bid: Real,
    pub byproduct_product: String,
}

impl MswRefs {
    /// Landfill-route cost per tonne: tipping fee plus transport.
    pub fn disposal_cost(&self) -> Real {
        self.tipping + self.waste_leg
    }
}

pub fn resolve(model: &SupplyChainModel) -> Result<MswRefs, CaseStudyError> {
    let miss = |id: &str| CaseStudyError::MissingId(id.to_string());
    let transport_bid = |id: &str| -> Result<Real, CaseStudyError> {
        model
            .transports
            .iter()
            .find(|t| t.id == id)
            .map(|t| t.bid)
            .ok_or_else(|| miss(id))
    };
    let tech = |id: &str| model.technologies.iter().find(|t| t.id == id);

    let grid_bid = model
        .suppliers
        .iter()
        .find(|s| s.id == "S2")
        .ok_or_else(|| miss("S2"))?
        .bid;
    let tipping = -model
        .consumers
        .iter()
        .find(|c| c.id == "D06")
        .ok_or_else(|| miss("D06"))?
        .bid;
    let waste_leg = transport_bid("L1")?;
    let tech_elec = grid_bid + transport_bid("LE4")?;
    let city_elec = grid_bid + transport_bid("LE1")?;
    let separation_bid = tech("T0").ok_or_else(|| miss("T0"))?.bid;

    let pe = model.product_index("PE").ok_or_else(|| miss("PE"))?;
    let p06 = model.product_index("P06").ok_or_else(|| miss("P06"))?;

    let mut pathways = Vec::new();
    for k in 1..=5u8 {
        let tid = format!("T{k}");
        let t = tech(&tid).ok_or_else(|| miss(&tid))?;
        let stream = model.products[t.reference_product].id.clone();
        let out = t
            .outputs
            .iter()
            .find(|y| y.product != p06)
            .ok_or_else(|| miss(&format!("{tid} output")))?;
        let out_product = model.products[out.product].id.clone();
        let consumer = model
            .consumers
            .iter()
            .find(|c| c.product == out.product && c.bid >= 0.0)
            .ok_or_else(|| miss(&format!("consumer of {out_product}")))?
            .id
            .clone();
        let stream_leg = format!("L0{k}");
        let product_leg = format!("LR{k}");
        pathways.push(Pathway {
            consumer,
            technology: tid.clone(),
            stream_product: stream,
            out_product,
            out_gamma: out.gamma,
            elec_gamma: t.input_gamma(pe).unwrap_or(0.0),
            byproduct_gamma: t.output_gamma(p06).unwrap_or(0.0),
            stream_leg_bid: transport_bid(&stream_leg)?,
            product_leg_bid: transport_bid(&product_leg)?,
            stream_leg,
            product_leg,
            tech_bid: t.bid,
        });
    }
    Ok(MswRefs {
        pathways,
        waste_supplier: "S1".into(),
        grid: "S2".into(),
        separator: "T0".into(),
        elec_consumer: "DE".into(),
        tipping,
        waste_leg,
        tech_elec,
        city_elec,
        separation_bid,
        byproduct_product: model.products[p06].id.clone(),
    })
}

/// Break-even bid for one pathway's consumer at a given sorted-stream price:
/// everything the chain must be paid per delivered unit of the recycled
/// product.
pub fn pathway_break_even(refs: &MswRefs, pw: &Pathway, stream_price: Real) -> Real {
    let per_input = stream_price
        + pw.stream_leg_bid
        + pw.tech_bid
        + pw.elec_gamma * refs.tech_elec
        + pw.byproduct_gamma * refs.disposal_cost();
    per_input / pw.out_gamma + pw.product_leg_bid
}

/// Break-even bids with free sorted streams: the partial-bid configuration
/// that leaves separation unfunded.
pub fn implied_partial_bids(
    model: &SupplyChainModel,
) -> Result<BTreeMap<String, Real>, CaseStudyError> {
    let refs = resolve(model)?;
    let mut out = BTreeMap::new();
    for pw in &refs.pathways {
        out.insert(pw.consumer.clone(), pathway_break_even(&refs, pw, 0.0));
    }
    out.insert(refs.elec_consumer.clone(), refs.city_elec);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CalibrationResult {
    /// Derived per-product transport rate (applied to the sorted-stream leg
    /// and the recycled-product leg of each pathway).
    pub rates: BTreeMap<String, Real>,
    /// Implied bid (at the model's current rates) minus target, per consumer.
    pub residuals: BTreeMap<String, Real>,
    pub max_abs_residual: Real,
    /// Waste-leg rate; fixed, not calibrated.
    pub p0_leg: Real,
}

/// Solve the per-product transport rates that make each pathway's break-even
/// bid hit its target, and report how far the model's current rates land
/// from the targets.
pub fn calibrate_transport_costs(
    model: &SupplyChainModel,
    targets: &BTreeMap<String, Real>,
) -> Result<CalibrationResult, CaseStudyError> {
    let refs = resolve(model)?;
    let mut rates = BTreeMap::new();
    let mut residuals = BTreeMap::new();
    let mut worst: Real = 0.0;
    for pw in &refs.pathways {
        let Some(&target) = targets.get(&pw.consumer) else {
            continue;
        };
        // target = (rate + fixed) / out_gamma + rate, with `fixed` the
        // non-transport chain cost per reference input.
        let fixed = pw.tech_bid
            + pw.elec_gamma * refs.tech_elec
            + pw.byproduct_gamma * refs.disposal_cost();
        let rate = (pw.out_gamma * target - fixed) / (1.0 + pw.out_gamma);
        if rate < 0.0 {
            return Err(CaseStudyError::InconsistentTarget {
                id: pw.consumer.clone(),
                rate,
            });
        }
        rates.insert(pw.stream_product.clone(), rate);
        let implied = pathway_break_even(&refs, pw, 0.0);
        let r = implied - target;
        residuals.insert(pw.consumer.clone(), r);
        if r.abs() > worst {
            worst = r.abs();
        }
    }
    Ok(CalibrationResult {
        rates,
        residuals,
        max_abs_residual: worst,
        p0_leg: refs.waste_leg,
    })
}

/// Published reference values the calibration aims at: the break-even bids
/// of the five recycled-product consumers.
pub fn reference_targets() -> BTreeMap<String, Real> {
    [
        ("D1", 327.24),
        ("D2", 77.06),
        ("D3", 1702.59),
        ("D4", 679.62),
        ("D5", 43.51),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Published covering bids per covering product (the consumer also funds the
/// separation remainder).
pub fn reference_covering_bids() -> BTreeMap<String, Real> {
    [
        ("P1", 1165.62),
        ("P2", 4302.52),
        ("P3", 3792.10),
        ("P4", 2890.20),
        ("P5", 889.35),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// City contribution cap per tonne of waste: what the landfill route would
/// cost it, so recycling never asks the city for more than landfilling
/// would.
pub fn city_contribution_cap(refs: &MswRefs) -> Real {
    refs.disposal_cost()
}

/// Money the separation service still needs after the city's capped
/// contribution: the city's payment first covers its own waste leg and the
/// disposal of the separator's non-recyclable stream, and the rest offsets
/// separation.
pub fn separation_remainder(model: &SupplyChainModel) -> Result<Real, CaseStudyError> {
    let refs = resolve(model)?;
    let s1 = model
        .suppliers
        .iter()
        .find(|s| s.id == refs.waste_supplier)
        .ok_or_else(|| CaseStudyError::MissingId(refs.waste_supplier.clone()))?;
    let t0 = model
        .technologies
        .iter()
        .find(|t| t.id == refs.separator)
        .unwrap();
    let waste = s1.capacity;
    let p06 = model.product_index(&refs.byproduct_product).unwrap();
    let byp_share = t0.output_gamma(p06).unwrap_or(0.0);
    let city_payment = city_contribution_cap(&refs) * waste;
    let own_leg = refs.waste_leg * waste;
    let byproduct_disposal = refs.disposal_cost() * byp_share * waste;
    let toward_separation = city_payment - own_leg - byproduct_disposal;
    Ok(refs.separation_bid * waste - toward_separation)
}

/// Delivered recycled-product volumes under a generous pilot clearing: the
/// quantities over which the separation remainder is spread.
pub fn pilot_volumes(model: &SupplyChainModel) -> Result<BTreeMap<String, Real>, CaseStudyError> {
    let refs = resolve(model)?;
    let mut pilot = model.clone();
    for pw in &refs.pathways {
        let generous = pathway_break_even(&refs, pw, 0.0) * 3.0 + 1000.0;
        if let Some(c) = pilot.consumers.iter_mut().find(|c| c.id == pw.consumer) {
            c.bid = generous;
        }
    }
    pilot.reindex();
    let sol = clear_with(&pilot, &ClearOptions::default())?;
    let mut out = BTreeMap::new();
    for pw in &refs.pathways {
        let j = pilot
            .consumers
            .iter()
            .position(|c| c.id == pw.consumer)
            .unwrap();
        out.insert(pw.consumer.clone(), sol.allocations.demand[j]);
    }
    Ok(out)
}

/// Scenario in which one recycled-product consumer covers the remaining cost
/// of separation on top of its own chain; all other consumers bid their
/// break-even values.
pub fn build_covering_scenario(
    model: &SupplyChainModel,
    graph: &StakeholderGraph,
    covering_product: &str,
) -> Result<Scenario, CaseStudyError> {
    let _ = graph;
    let refs = resolve(model)?;
    let pw = refs
        .pathways
        .iter()
        .find(|p| p.out_product == covering_product)
        .ok_or_else(|| CaseStudyError::MissingId(covering_product.to_string()))?;
    let remainder = separation_remainder(model)?;
    let volumes = pilot_volumes(model)?;
    let volume = volumes
        .get(&pw.consumer)
        .copied()
        .filter(|v| *v > 0.0)
        .ok_or_else(|| CaseStudyError::MissingId(pw.consumer.clone()))?;

    let mut bid_overrides = BTreeMap::new();
    for other in &refs.pathways {
        bid_overrides.insert(other.consumer.clone(), pathway_break_even(&refs, other, 0.0));
    }
    bid_overrides.insert(
        pw.consumer.clone(),
        pathway_break_even(&refs, pw, 0.0) + remainder / volume,
    );
    bid_overrides.insert(refs.elec_consumer.clone(), refs.city_elec);
    Ok(Scenario {
        name: format!("cover_{covering_product}"),
        bid_overrides,
        ..Default::default()
    })
}

/// Full break-even configuration: the city offers exactly its landfill-route
/// cost, the separation remainder is spread over the dry-recyclable streams
/// per tonne separated, the compost chain prices off the free organics
/// outlet, and electricity prices at its chain cost. Clearing under this
/// scenario leaves every stakeholder with zero profit.
pub fn zero_profit_scenario(model: &SupplyChainModel) -> Result<Scenario, CaseStudyError> {
    let refs = resolve(model)?;
    let remainder = separation_remainder(model)?;
    let s1_cap = model
        .suppliers
        .iter()
        .find(|s| s.id == refs.waste_supplier)
        .unwrap()
        .capacity;
    let t0 = model
        .technologies
        .iter()
        .find(|t| t.id == refs.separator)
        .unwrap();
    // Streams whose chain price is anchored by an outside outlet cannot
    // carry a separation share; spread it over the others by mass.
    let pinned = outlet_pinned_stream(model, &refs);
    let mut carrying_mass = 0.0;
    for pw in &refs.pathways {
        if Some(&pw.stream_product) != pinned.as_ref().map(|(p, _)| p) {
            let idx = model.product_index(&pw.stream_product).unwrap();
            carrying_mass += t0.output_gamma(idx).unwrap_or(0.0) * s1_cap;
        }
    }
    let psi = remainder / carrying_mass;

    let mut bid_overrides = BTreeMap::new();
    for pw in &refs.pathways {
        let stream_price = match &pinned {
            Some((p, price)) if *p == pw.stream_product => *price,
            _ => psi,
        };
        bid_overrides.insert(
            pw.consumer.clone(),
            pathway_break_even(&refs, pw, stream_price),
        );
    }
    bid_overrides.insert(refs.elec_consumer.clone(), refs.city_elec);
    bid_overrides.insert(refs.waste_supplier.clone(), -city_contribution_cap(&refs));
    Ok(Scenario {
        name: "zero_profit".into(),
        bid_overrides,
        ..Default::default()
    })
}

/// A sorted stream whose price is anchored by a non-landfill outlet at the
/// separation site (the organics giveaway), with that anchor price.
fn outlet_pinned_stream(model: &SupplyChainModel, refs: &MswRefs) -> Option<(String, Real)> {
    let t0 = model.technologies.iter().find(|t| t.id == refs.separator)?;
    for c in &model.consumers {
        if c.node == t0.node
            && c.bid <= 0.0
            && c.bid > -1.0
            && t0.output_gamma(c.product).is_some()
        {
            return Some((model.products[c.product].id.clone(), c.bid));
        }
    }
    None
}

/// Funding breakdown behind activating bids: one row per (activator,
/// remunerated stakeholder) with the basis conversion used; the rows of an
/// activator sum to its activating bid.
pub fn funding_breakdown(
    model: &SupplyChainModel,
    covering_product: Option<&str>,
) -> Result<Vec<PartialBidRow>, CaseStudyError> {
    let refs = resolve(model)?;
    let remainder = separation_remainder(model)?;
    let volumes = pilot_volumes(model)?;
    let mut rows = Vec::new();
    for pw in &refs.pathways {
        let inv = 1.0 / pw.out_gamma;
        let via = |tail: &[&str]| -> Vec<String> {
            let mut p = vec![pw.consumer.clone(), pw.product_leg.clone()];
            p.extend(tail.iter().map(|s| s.to_string()));
            p
        };
        let mut add = |reached: String, rate: Real, basis: Real, path: Vec<String>| {
            if rate != 0.0 {
                rows.push(PartialBidRow {
                    activator: pw.consumer.clone(),
                    reached,
                    beta: 1.0,
                    basis_factor: basis,
                    path,
                    partial_bid: basis * rate,
                });
            }
        };
        add(
            pw.product_leg.clone(),
            pw.product_leg_bid,
            1.0,
            vec![pw.consumer.clone(), pw.product_leg.clone()],
        );
        add(pw.technology.clone(), pw.tech_bid, inv, via(&[&pw.technology]));
        add(
            pw.stream_leg.clone(),
            pw.stream_leg_bid,
            inv,
            via(&[&pw.technology, &pw.stream_leg]),
        );
        add(
            refs.grid.clone(),
            refs.tech_elec,
            pw.elec_gamma * inv,
            via(&[&pw.technology, "LE4", &refs.grid]),
        );
        if pw.byproduct_gamma > 0.0 {
            add(
                format!("{} disposal", refs.byproduct_product),
                refs.disposal_cost(),
                pw.byproduct_gamma * inv,
                via(&[&pw.technology, "L06B", "D06"]),
            );
        }
        if covering_product == Some(pw.out_product.as_str()) {
            let volume = volumes.get(&pw.consumer).copied().unwrap_or(0.0);
            if volume > 0.0 {
                add(
                    refs.separator.clone(),
                    refs.separation_bid,
                    remainder / volume / refs.separation_bid,
                    via(&[&pw.technology, &pw.stream_leg, &refs.separator]),
                );
            }
        }
    }
    // The city's capped contribution: its own transport leg, the separator's
    // byproduct disposal, and the leftover toward separation.
    let t0 = model
        .technologies
        .iter()
        .find(|t| t.id == refs.separator)
        .unwrap();
    let p06 = model.product_index(&refs.byproduct_product).unwrap();
    let byp_share = t0.output_gamma(p06).unwrap_or(0.0);
    let toward_sep =
        city_contribution_cap(&refs) - refs.waste_leg - byp_share * refs.disposal_cost();
    let city = refs.waste_supplier.clone();
    let mut add_city = |reached: String, partial: Real, basis: Real, path: Vec<String>| {
        rows.push(PartialBidRow {
            activator: city.clone(),
            reached,
            beta: 1.0,
            basis_factor: basis,
            path,
            partial_bid: partial,
        });
    };
    add_city(
        "L1".to_string(),
        refs.waste_leg,
        1.0,
        vec![city.clone(), "L1".to_string()],
    );
    add_city(
        format!("{} disposal", refs.byproduct_product),
        byp_share * refs.disposal_cost(),
        byp_share,
        vec![city.clone(), "L1".to_string(), refs.separator.clone(), "L06A".to_string(), "D06".to_string()],
    );
    add_city(
        refs.separator.clone(),
        toward_sep,
        toward_sep / refs.separation_bid,
        vec![city.clone(), "L1".to_string(), refs.separator.clone()],
    );
    Ok(rows)
}

/// The nine published cases.
#[derive(Clone, Copy, Debug)]
pub struct CaseDefinition {
    pub id: u8,
    pub name: &'static str,
    pub scenario: &'static str,
    pub forced: bool,
    pub covering: Option<&'static str>,
}

pub const CASES: [CaseDefinition; 9] = [
    CaseDefinition { id: 1, name: "clear coordinated", scenario: "case1", forced: false, covering: None },
    CaseDefinition { id: 2, name: "dry coordinated", scenario: "case2", forced: false, covering: None },
    CaseDefinition { id: 3, name: "forced", scenario: "case3", forced: true, covering: None },
    CaseDefinition { id: 4, name: "partial bids (dry)", scenario: "case4", forced: false, covering: None },
    CaseDefinition { id: 5, name: "P1 covering", scenario: "case5", forced: false, covering: Some("P1") },
    CaseDefinition { id: 6, name: "P2 covering", scenario: "case6", forced: false, covering: Some("P2") },
    CaseDefinition { id: 7, name: "P3 covering", scenario: "case7", forced: false, covering: Some("P3") },
    CaseDefinition { id: 8, name: "P4 covering", scenario: "case8", forced: false, covering: Some("P4") },
    CaseDefinition { id: 9, name: "P5 covering", scenario: "case9", forced: false, covering: Some("P5") },
];

#[derive(Clone, Debug)]
pub struct CaseRun {
    pub case: CaseDefinition,
    /// Model after scenario application.
    pub model: SupplyChainModel,
    pub solution: ClearingSolution,
    pub diversion_percent: Real,
}

pub fn run_case(base: &SupplyChainModel, n: u8) -> Result<CaseRun, CaseStudyError> {
    let case = *CASES
        .iter()
        .find(|c| c.id == n)
        .ok_or(CaseStudyError::UnknownCase(n))?;
    let scenario = base
        .scenario(case.scenario)
        .cloned()
        .ok_or_else(|| CaseStudyError::MissingScenario(case.scenario.to_string()))?;
    let model = apply_scenario(base, &scenario)?;
    let options = ClearOptions {
        epsilon: scenario.epsilon,
        ..Default::default()
    };
    let solution = clear_with(&model, &options)?;
    let diversion_percent = diversion_rate(&model, &solution)?;
    Ok(CaseRun {
        case,
        model,
        solution,
        diversion_percent,
    })
}

pub fn run_all(base: &SupplyChainModel) -> Result<Vec<CaseRun>, CaseStudyError> {
    (1..=9).map(|n| run_case(base, n)).collect()
}

/// Mass-based landfill avoidance: one minus landfilled mass over waste
/// supplied, as a percentage.
pub fn diversion_rate(
    model: &SupplyChainModel,
    solution: &ClearingSolution,
) -> Result<Real, CaseStudyError> {
    let mut landfilled = 0.0;
    let mut any_tag = false;
    for (j, c) in model.consumers.iter().enumerate() {
        if c.tags.iter().any(|t| t == "landfill") {
            any_tag = true;
            landfilled += solution.allocations.demand[j];
        }
    }
    if !any_tag {
        return Err(CaseStudyError::NoLandfillTag);
    }
    let mut supplied = 0.0;
    let mut any_waste = false;
    for (i, s) in model.suppliers.iter().enumerate() {
        if s.tags.iter().any(|t| t == "waste") {
            any_waste = true;
            supplied += solution.allocations.supply[i];
        }
    }
    if !any_waste {
        return Err(CaseStudyError::NoWasteTag);
    }
    if supplied <= 0.0 {
        return Ok(0.0);
    }
    Ok(100.0 * (1.0 - landfilled / supplied))
}

/// Results table: columns are cases, row groups are objective, bids,
/// profits, demand allocations, recycling rate, and clearing prices at the
/// city node.
pub fn table_csv(runs: &[CaseRun]) -> String {
    let mut out = String::new();
    let header: Vec<String> = std::iter::once("row".to_string())
        .chain(runs.iter().map(|r| format!("case{}", r.case.id)))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');

    let line = |label: &str, values: Vec<String>| {
        let mut row = vec![label.to_string()];
        row.extend(values);
        format!("{}\n", row.join(","))
    };

    out.push_str(&line(
        "objective",
        runs.iter()
            .map(|r| report::welfare(r.solution.welfare))
            .collect(),
    ));

    for id in ["D1", "D2", "D3", "D4", "D5", "DE"] {
        let values = runs
            .iter()
            .map(|r| {
                r.model
                    .consumers
                    .iter()
                    .position(|c| c.id == id)
                    .map(|j| report::money(r.solution.effective_consumer_bids[j]))
                    .unwrap_or_default()
            })
            .collect();
        out.push_str(&line(&format!("bid {id}"), values));
    }

    if let Some(first) = runs.first() {
        for (label, value_of) in profit_rows(&first.model) {
            let values = runs.iter().map(|r| report::money(value_of(r))).collect();
            out.push_str(&line(&format!("profit {label}"), values));
        }
    }

    for id in ["D0", "D06", "D1", "D2", "D3", "D4", "D5", "DE"] {
        let values = runs
            .iter()
            .map(|r| {
                r.model
                    .consumers
                    .iter()
                    .position(|c| c.id == id)
                    .map(|j| report::quantity(r.solution.allocations.demand[j]))
                    .unwrap_or_default()
            })
            .collect();
        out.push_str(&line(&format!("allocation {id}"), values));
    }

    out.push_str(&line(
        "recycled %",
        runs.iter()
            .map(|r| report::percent(r.diversion_percent))
            .collect(),
    ));

    for pid in ["P0", "P1", "P2", "P3", "P4", "P5", "PE"] {
        let values = runs
            .iter()
            .map(|r| {
                let n1 = r.model.node_index("N1");
                let p = r.model.product_index(pid);
                match (n1, p) {
                    (Some(n), Some(p)) => r
                        .solution
                        .prices
                        .nodal_price(n, p)
                        .map(report::money)
                        .unwrap_or_default(),
                    _ => String::new(),
                }
            })
            .collect();
        out.push_str(&line(&format!("price {pid}@N1"), values));
    }
    out
}

type ProfitGetter = Box<dyn Fn(&CaseRun) -> Real>;

fn profit_rows(model: &SupplyChainModel) -> Vec<(String, ProfitGetter)> {
    let mut rows: Vec<(String, ProfitGetter)> = Vec::new();
    for (i, s) in model.suppliers.iter().enumerate() {
        rows.push((
            s.id.clone(),
            Box::new(move |r: &CaseRun| r.solution.profits.supplier[i]),
        ));
    }
    rows.push((
        "transport(total)".to_string(),
        Box::new(|r: &CaseRun| r.solution.profits.transport.iter().sum()),
    ));
    for (k, t) in model.technologies.iter().enumerate() {
        rows.push((
            t.id.clone(),
            Box::new(move |r: &CaseRun| r.solution.profits.technology[k]),
        ));
    }
    for (j, c) in model.consumers.iter().enumerate() {
        rows.push((
            c.id.clone(),
            Box::new(move |r: &CaseRun| r.solution.profits.consumer[j]),
        ));
    }
    rows
}

#[cfg(test)]
mod tests;
