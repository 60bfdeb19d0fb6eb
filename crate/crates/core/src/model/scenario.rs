//! Scenario application with value semantics.

use super::loader::stakeholder_exists;
use super::{ModelError, Scenario, SupplyChainModel};
use crate::Real;

/// Apply a scenario, returning a new model; the input is untouched.
pub fn apply_scenario(
    model: &SupplyChainModel,
    scenario: &Scenario,
) -> Result<SupplyChainModel, ModelError> {
    let mut out = model.clone();

    for (id, &bid) in &scenario.bid_overrides {
        set_bid(&mut out, &scenario.name, id, bid)?;
    }
    for (id, &cap) in &scenario.capacity_overrides {
        set_capacity(&mut out, &scenario.name, id, cap)?;
    }
    for (id, &bound) in &scenario.forced_lower_bounds {
        set_forced(&mut out, &scenario.name, id, bound)?;
    }
    out.reindex();
    Ok(out)
}

fn set_bid(
    m: &mut SupplyChainModel,
    scenario: &str,
    id: &str,
    bid: Real,
) -> Result<(), ModelError> {
    if let Some(s) = m.suppliers.iter_mut().find(|s| s.id == id) {
        s.bid = bid;
    } else if let Some(c) = m.consumers.iter_mut().find(|c| c.id == id) {
        c.bid = bid;
    } else if let Some(t) = m.transports.iter_mut().find(|t| t.id == id) {
        t.bid = bid;
    } else if let Some(t) = m.technologies.iter_mut().find(|t| t.id == id) {
        t.bid = bid;
    } else {
        return Err(ModelError::UnknownScenarioId {
            scenario: scenario.to_string(),
            id: id.to_string(),
        });
    }
    Ok(())
}

fn set_capacity(
    m: &mut SupplyChainModel,
    scenario: &str,
    id: &str,
    cap: Real,
) -> Result<(), ModelError> {
    if let Some(s) = m.suppliers.iter_mut().find(|s| s.id == id) {
        s.capacity = cap;
    } else if let Some(c) = m.consumers.iter_mut().find(|c| c.id == id) {
        c.capacity = cap;
    } else if let Some(t) = m.transports.iter_mut().find(|t| t.id == id) {
        t.capacity = cap;
    } else if let Some(t) = m.technologies.iter_mut().find(|t| t.id == id) {
        t.capacity = cap;
    } else {
        return Err(ModelError::UnknownScenarioId {
            scenario: scenario.to_string(),
            id: id.to_string(),
        });
    }
    Ok(())
}

fn set_forced(
    m: &mut SupplyChainModel,
    scenario: &str,
    id: &str,
    bound: Real,
) -> Result<(), ModelError> {
    if !stakeholder_exists(m, id) {
        return Err(ModelError::UnknownScenarioId {
            scenario: scenario.to_string(),
            id: id.to_string(),
        });
    }
    let capacity = m
        .suppliers
        .iter()
        .find(|s| s.id == id)
        .map(|s| s.capacity)
        .or_else(|| m.consumers.iter().find(|c| c.id == id).map(|c| c.capacity))
        .or_else(|| m.transports.iter().find(|t| t.id == id).map(|t| t.capacity))
        .or_else(|| {
            m.technologies
                .iter()
                .find(|t| t.id == id)
                .map(|t| t.capacity)
        })
        .unwrap();
    if bound > capacity {
        return Err(ModelError::ForcedExceedsCapacity {
            scenario: scenario.to_string(),
            id: id.to_string(),
            bound,
            capacity,
        });
    }
    if let Some(s) = m.suppliers.iter_mut().find(|s| s.id == id) {
        s.forced_min = bound;
    } else if let Some(c) = m.consumers.iter_mut().find(|c| c.id == id) {
        c.forced_min = bound;
    } else if let Some(t) = m.transports.iter_mut().find(|t| t.id == id) {
        t.forced_min = bound;
    } else if let Some(t) = m.technologies.iter_mut().find(|t| t.id == id) {
        t.forced_min = bound;
    }
    Ok(())
}
