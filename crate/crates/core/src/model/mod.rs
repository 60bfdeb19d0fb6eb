//! Domain types for the supply chain and the single source of truth every
//! other module consumes.
//!
//! A [`SupplyChainModel`] is immutable after load: scenario application
//! returns a fresh model. Entities are stored in document order and referred
//! to by index; string ids come from the dataset so that reports match the
//! labels stakeholders are known by.

mod loader;
mod scenario;

pub use loader::{load_model, load_model_from_value, ModelError};
pub use scenario::apply_scenario;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Product {
    pub id: String,
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoNode {
    pub id: String,
}

/// Offers a product at a node. A negative bid means the supplier pays the
/// market to take the product away.
#[derive(Clone, Debug, PartialEq)]
pub struct Supplier {
    pub id: String,
    pub node: usize,
    pub product: usize,
    pub bid: Real,
    pub capacity: Real,
    /// Forced minimum allocation; zero unless a scenario forces participation.
    pub forced_min: Real,
    pub tags: Vec<String>,
}

/// Requests a product at a node. A negative bid means the consumer demands
/// payment for taking the product.
#[derive(Clone, Debug, PartialEq)]
pub struct Consumer {
    pub id: String,
    pub node: usize,
    pub product: usize,
    pub bid: Real,
    pub capacity: Real,
    pub forced_min: Real,
    pub tags: Vec<String>,
}

/// Moves one product from a source node to a sink node.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportProvider {
    pub id: String,
    pub source: usize,
    pub sink: usize,
    pub product: usize,
    pub bid: Real,
    pub capacity: Real,
    pub forced_min: Real,
}

/// One input or output stream of a technology with its yield coefficient,
/// defined relative to the reference input product.
#[derive(Clone, Debug, PartialEq)]
pub struct YieldTerm {
    pub product: usize,
    pub gamma: Real,
}

/// Converts input products into output products at a node. The bid and the
/// capacity are per unit of the reference input, whose yield is exactly one.
#[derive(Clone, Debug, PartialEq)]
pub struct Technology {
    pub id: String,
    pub node: usize,
    pub reference_product: usize,
    pub inputs: Vec<YieldTerm>,
    pub outputs: Vec<YieldTerm>,
    pub bid: Real,
    pub capacity: Real,
    pub forced_min: Real,
}

impl Technology {
    pub fn input_gamma(&self, product: usize) -> Option<Real> {
        self.inputs
            .iter()
            .find(|y| y.product == product)
            .map(|y| y.gamma)
    }
    pub fn output_gamma(&self, product: usize) -> Option<Real> {
        self.outputs
            .iter()
            .find(|y| y.product == product)
            .map(|y| y.gamma)
    }
}

/// How revenue shares are chosen when several activators fund one reached
/// stakeholder.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum BetaPolicy {
    /// Sole activator per component takes the full share.
    #[default]
    SingleActivator,
    /// Shares proportional to activator allocations in a pilot clearing.
    PilotProportional,
    /// Explicit share table; entries are (activator, reached, share).
    Explicit { shares: Vec<BetaShare> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaShare {
    pub activator: String,
    pub reached: String,
    pub share: Real,
}

/// Named adjustment of a base model: bid/capacity overrides, forced
/// participation floors, and the revenue-share policy for bid computations.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub bid_overrides: BTreeMap<String, Real>,
    #[serde(default)]
    pub capacity_overrides: BTreeMap<String, Real>,
    #[serde(default)]
    pub forced_lower_bounds: BTreeMap<String, Real>,
    #[serde(default)]
    pub beta_policy: BetaPolicy,
    /// Degeneracy-breaking bid nudge applied to activators when clearing.
    #[serde(default)]
    pub epsilon: Real,
}

/// Stakeholder classes, used wherever class-level grouping matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Class {
    Supplier,
    Consumer,
    Transport,
    Technology,
}

/// A fully validated supply chain with derived index sets and sign classes.
#[derive(Clone, Debug, PartialEq)]
pub struct SupplyChainModel {
    pub products: Vec<Product>,
    pub nodes: Vec<GeoNode>,
    pub suppliers: Vec<Supplier>,
    pub consumers: Vec<Consumer>,
    pub transports: Vec<TransportProvider>,
    pub technologies: Vec<Technology>,
    pub scenarios: Vec<Scenario>,

    /// Suppliers by (node, product).
    pub suppliers_np: BTreeMap<(usize, usize), Vec<usize>>,
    /// Consumers by (node, product).
    pub consumers_np: BTreeMap<(usize, usize), Vec<usize>>,
    /// Inbound transport by (sink node, product).
    pub transports_in_np: BTreeMap<(usize, usize), Vec<usize>>,
    /// Outbound transport by (source node, product).
    pub transports_out_np: BTreeMap<(usize, usize), Vec<usize>>,
    /// Technologies consuming (node, product).
    pub tech_con_np: BTreeMap<(usize, usize), Vec<usize>>,
    /// Technologies generating (node, product).
    pub tech_gen_np: BTreeMap<(usize, usize), Vec<usize>>,

    /// Suppliers with nonnegative bids.
    pub suppliers_pos: Vec<usize>,
    /// Suppliers with negative bids (willing to pay for removal).
    pub suppliers_neg: Vec<usize>,
    /// Consumers with nonnegative bids.
    pub consumers_pos: Vec<usize>,
    /// Consumers with negative bids (demand payment to take product).
    pub consumers_neg: Vec<usize>,

    /// Non-fatal issues noted while building the model.
    pub warnings: Vec<String>,
}

impl SupplyChainModel {
    /// Assemble a model from already-resolved parts (programmatic fixtures
    /// and generators); derived indexes are built, invariants are the
    /// caller's responsibility.
    pub fn from_parts(
        products: Vec<Product>,
        nodes: Vec<GeoNode>,
        suppliers: Vec<Supplier>,
        consumers: Vec<Consumer>,
        transports: Vec<TransportProvider>,
        technologies: Vec<Technology>,
    ) -> Self {
        let mut m = Self {
            products,
            nodes,
            suppliers,
            consumers,
            transports,
            technologies,
            scenarios: Vec::new(),
            suppliers_np: BTreeMap::new(),
            consumers_np: BTreeMap::new(),
            transports_in_np: BTreeMap::new(),
            transports_out_np: BTreeMap::new(),
            tech_con_np: BTreeMap::new(),
            tech_gen_np: BTreeMap::new(),
            suppliers_pos: Vec::new(),
            suppliers_neg: Vec::new(),
            consumers_pos: Vec::new(),
            consumers_neg: Vec::new(),
            warnings: Vec::new(),
        };
        m.reindex();
        m
    }

    pub fn product_index(&self, id: &str) -> Option<usize> {
        self.products.iter().position(|p| p.id == id)
    }
    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }
    pub fn scenario(&self, name: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    pub fn has_forced_bounds(&self) -> bool {
        self.suppliers.iter().any(|s| s.forced_min > 0.0)
            || self.consumers.iter().any(|c| c.forced_min > 0.0)
            || self.transports.iter().any(|t| t.forced_min > 0.0)
            || self.technologies.iter().any(|t| t.forced_min > 0.0)
    }

    /// Rebuild derived index sets and sign classes from the entity lists.
    pub(crate) fn reindex(&mut self) {
        self.suppliers_np.clear();
        self.consumers_np.clear();
        self.transports_in_np.clear();
        self.transports_out_np.clear();
        self.tech_con_np.clear();
        self.tech_gen_np.clear();
        for (i, s) in self.suppliers.iter().enumerate() {
            self.suppliers_np
                .entry((s.node, s.product))
                .or_default()
                .push(i);
        }
        for (j, d) in self.consumers.iter().enumerate() {
            self.consumers_np
                .entry((d.node, d.product))
                .or_default()
                .push(j);
        }
        for (l, t) in self.transports.iter().enumerate() {
            self.transports_out_np
                .entry((t.source, t.product))
                .or_default()
                .push(l);
            self.transports_in_np
                .entry((t.sink, t.product))
                .or_default()
                .push(l);
        }
        for (k, t) in self.technologies.iter().enumerate() {
            for y in &t.inputs {
                self.tech_con_np
                    .entry((t.node, y.product))
                    .or_default()
                    .push(k);
            }
            for y in &t.outputs {
                self.tech_gen_np
                    .entry((t.node, y.product))
                    .or_default()
                    .push(k);
            }
        }
        self.suppliers_pos = self
            .suppliers
            .iter()
            .enumerate()
            .filter(|(_, s)| s.bid >= 0.0)
            .map(|(i, _)| i)
            .collect();
        self.suppliers_neg = self
            .suppliers
            .iter()
            .enumerate()
            .filter(|(_, s)| s.bid < 0.0)
            .map(|(i, _)| i)
            .collect();
        self.consumers_pos = self
            .consumers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.bid >= 0.0)
            .map(|(j, _)| j)
            .collect();
        self.consumers_neg = self
            .consumers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.bid < 0.0)
            .map(|(j, _)| j)
            .collect();
    }

    /// Serialize back into the dataset document form. Reparsing the result
    /// produces an equal model.
    pub fn to_document(&self) -> serde_json::Value {
        loader::to_document(self)
    }

    /// Every (node, product) pair with at least one incident stakeholder.
    pub fn active_node_products(&self) -> Vec<(usize, usize)> {
        let mut set = std::collections::BTreeSet::new();
        set.extend(self.suppliers_np.keys().copied());
        set.extend(self.consumers_np.keys().copied());
        set.extend(self.transports_in_np.keys().copied());
        set.extend(self.transports_out_np.keys().copied());
        set.extend(self.tech_con_np.keys().copied());
        set.extend(self.tech_gen_np.keys().copied());
        set.into_iter().collect()
    }
}
