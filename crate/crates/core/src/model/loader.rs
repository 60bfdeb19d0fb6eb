//! Dataset loading, validation, and serialization.
//!
//! The dataset is a UTF-8 JSON document with top-level keys `products`,
//! `nodes`, `suppliers`, `consumers`, `transports`, `technologies`,
//! `scenarios`. Validation errors carry a path into the document.

use serde::{Deserialize, Serialize};

use super::*;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{path}: duplicate id `{id}`")]
    DuplicateId { path: String, id: String },
    #[error("{path}: unknown reference `{id}`")]
    DanglingReference { path: String, id: String },
    #[error("{path}: capacity must be nonnegative")]
    NegativeCapacity { path: String },
    #[error("{path}: reference yield must equal 1")]
    ReferenceYield { path: String },
    #[error("{path}: yield coefficients must be positive")]
    NonPositiveYield { path: String },
    #[error("{path}: input and output product sets must be disjoint")]
    InputOutputOverlap { path: String },
    #[error("{path}: source and sink nodes must differ")]
    SourceEqualsSink { path: String },
    #[error("{path}: reference product must appear among the inputs")]
    ReferenceNotInput { path: String },
    #[error("scenario `{scenario}`: unknown stakeholder id `{id}`")]
    UnknownScenarioId { scenario: String, id: String },
    #[error("scenario `{scenario}`: forced bound {bound} exceeds capacity {capacity} for `{id}`")]
    ForcedExceedsCapacity {
        scenario: String,
        id: String,
        bound: Real,
        capacity: Real,
    },
}

#[derive(Serialize, Deserialize)]
struct RawStakeholder {
    id: String,
    node: String,
    product: String,
    bid: Real,
    capacity: Real,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawTransport {
    id: String,
    source: String,
    sink: String,
    product: String,
    bid: Real,
    capacity: Real,
}

#[derive(Serialize, Deserialize)]
struct RawYield {
    product: String,
    gamma: Real,
}

#[derive(Serialize, Deserialize)]
struct RawTechnology {
    id: String,
    node: String,
    reference_product: String,
    inputs: Vec<RawYield>,
    outputs: Vec<RawYield>,
    bid: Real,
    capacity: Real,
}

#[derive(Serialize, Deserialize)]
struct RawDataset {
    products: Vec<Product>,
    nodes: Vec<GeoNode>,
    suppliers: Vec<RawStakeholder>,
    consumers: Vec<RawStakeholder>,
    transports: Vec<RawTransport>,
    technologies: Vec<RawTechnology>,
    #[serde(default)]
    scenarios: Vec<Scenario>,
    /// Free-form provenance notes carried through round-trips.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    notes: serde_json::Value,
}

/// Parse and validate a dataset document.
pub fn load_model(text: &str) -> Result<SupplyChainModel, ModelError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
    load_model_from_value(value)
}

/// Validate an already-parsed dataset document.
pub fn load_model_from_value(value: serde_json::Value) -> Result<SupplyChainModel, ModelError> {
    let raw: RawDataset =
        serde_json::from_value(value).map_err(|e| ModelError::Schema(e.to_string()))?;
    build(raw)
}

fn build(raw: RawDataset) -> Result<SupplyChainModel, ModelError> {
    let mut warnings = Vec::new();

    check_unique(raw.products.iter().map(|p| p.id.as_str()), "products")?;
    check_unique(raw.nodes.iter().map(|n| n.id.as_str()), "nodes")?;
    for p in &raw.products {
        if p.id.is_empty() {
            return Err(ModelError::Schema("products: empty id".into()));
        }
    }

    let product_of = |path: String, id: &str| -> Result<usize, ModelError> {
        raw.products
            .iter()
            .position(|p| p.id == id)
            .ok_or(ModelError::DanglingReference {
                path,
                id: id.to_string(),
            })
    };
    let node_of = |path: String, id: &str| -> Result<usize, ModelError> {
        raw.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or(ModelError::DanglingReference {
                path,
                id: id.to_string(),
            })
    };

    let mut suppliers = Vec::new();
    for (i, s) in raw.suppliers.iter().enumerate() {
        let path = format!("suppliers[{i}]({})", s.id);
        if s.capacity < 0.0 {
            return Err(ModelError::NegativeCapacity { path });
        }
        suppliers.push(Supplier {
            id: s.id.clone(),
            node: node_of(format!("{path}.node"), &s.node)?,
            product: product_of(format!("{path}.product"), &s.product)?,
            bid: s.bid,
            capacity: s.capacity,
            forced_min: 0.0,
            tags: s.tags.clone(),
        });
    }
    let mut consumers = Vec::new();
    for (i, c) in raw.consumers.iter().enumerate() {
        let path = format!("consumers[{i}]({})", c.id);
        if c.capacity < 0.0 {
            return Err(ModelError::NegativeCapacity { path });
        }
        consumers.push(Consumer {
            id: c.id.clone(),
            node: node_of(format!("{path}.node"), &c.node)?,
            product: product_of(format!("{path}.product"), &c.product)?,
            bid: c.bid,
            capacity: c.capacity,
            forced_min: 0.0,
            tags: c.tags.clone(),
        });
    }
    let mut transports = Vec::new();
    for (i, t) in raw.transports.iter().enumerate() {
        let path = format!("transports[{i}]({})", t.id);
        if t.capacity < 0.0 {
            return Err(ModelError::NegativeCapacity { path });
        }
        let source = node_of(format!("{path}.source"), &t.source)?;
        let sink = node_of(format!("{path}.sink"), &t.sink)?;
        if source == sink {
            return Err(ModelError::SourceEqualsSink { path });
        }
        if t.bid <= 0.0 {
            warnings.push(format!("{path}: transport bid {} is not positive", t.bid));
        }
        transports.push(TransportProvider {
            id: t.id.clone(),
            source,
            sink,
            product: product_of(format!("{path}.product"), &t.product)?,
            bid: t.bid,
            capacity: t.capacity,
            forced_min: 0.0,
        });
    }
    let mut technologies = Vec::new();
    for (i, t) in raw.technologies.iter().enumerate() {
        let path = format!("technologies[{i}]({})", t.id);
        if t.capacity < 0.0 {
            return Err(ModelError::NegativeCapacity { path });
        }
        let reference = product_of(format!("{path}.reference_product"), &t.reference_product)?;
        let mut inputs = Vec::new();
        for y in &t.inputs {
            let p = product_of(format!("{path}.inputs"), &y.product)?;
            if y.gamma <= 0.0 {
                return Err(ModelError::NonPositiveYield { path });
            }
            inputs.push(YieldTerm {
                product: p,
                gamma: y.gamma,
            });
        }
        let mut outputs = Vec::new();
        for y in &t.outputs {
            let p = product_of(format!("{path}.outputs"), &y.product)?;
            if y.gamma <= 0.0 {
                return Err(ModelError::NonPositiveYield { path });
            }
            outputs.push(YieldTerm {
                product: p,
                gamma: y.gamma,
            });
        }
        match inputs.iter().find(|y| y.product == reference) {
            None => return Err(ModelError::ReferenceNotInput { path }),
            Some(y) if (y.gamma - 1.0).abs() > 1e-12 => {
                return Err(ModelError::ReferenceYield { path })
            }
            Some(_) => {}
        }
        for yin in &inputs {
            if outputs.iter().any(|yo| yo.product == yin.product) {
                return Err(ModelError::InputOutputOverlap { path });
            }
        }
        technologies.push(Technology {
            id: t.id.clone(),
            node: node_of(format!("{path}.node"), &t.node)?,
            reference_product: reference,
            inputs,
            outputs,
            bid: t.bid,
            capacity: t.capacity,
            forced_min: 0.0,
        });
    }

    check_unique(
        suppliers
            .iter()
            .map(|s| s.id.as_str())
            .chain(consumers.iter().map(|c| c.id.as_str()))
            .chain(transports.iter().map(|t| t.id.as_str()))
            .chain(technologies.iter().map(|t| t.id.as_str())),
        "stakeholders",
    )?;

    let mut model = SupplyChainModel {
        products: raw.products,
        nodes: raw.nodes,
        suppliers,
        consumers,
        transports,
        technologies,
        scenarios: raw.scenarios,
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
        warnings,
    };
    model.reindex();

    // Scenario references must resolve even before a scenario is applied.
    for sc in &model.scenarios {
        for id in sc
            .bid_overrides
            .keys()
            .chain(sc.capacity_overrides.keys())
            .chain(sc.forced_lower_bounds.keys())
        {
            if !stakeholder_exists(&model, id) {
                return Err(ModelError::UnknownScenarioId {
                    scenario: sc.name.clone(),
                    id: id.clone(),
                });
            }
        }
    }
    Ok(model)
}

pub(crate) fn stakeholder_exists(model: &SupplyChainModel, id: &str) -> bool {
    model.suppliers.iter().any(|s| s.id == id)
        || model.consumers.iter().any(|c| c.id == id)
        || model.transports.iter().any(|t| t.id == id)
        || model.technologies.iter().any(|t| t.id == id)
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>, path: &str) -> Result<(), ModelError> {
    let mut seen = std::collections::BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(ModelError::DuplicateId {
                path: path.to_string(),
                id: id.to_string(),
            });
        }
    }
    Ok(())
}

pub(crate) fn to_document(model: &SupplyChainModel) -> serde_json::Value {
    let raw = RawDataset {
        products: model.products.clone(),
        nodes: model.nodes.clone(),
        suppliers: model
            .suppliers
            .iter()
            .map(|s| RawStakeholder {
                id: s.id.clone(),
                node: model.nodes[s.node].id.clone(),
                product: model.products[s.product].id.clone(),
                bid: s.bid,
                capacity: s.capacity,
                tags: s.tags.clone(),
            })
            .collect(),
        consumers: model
            .consumers
            .iter()
            .map(|c| RawStakeholder {
                id: c.id.clone(),
                node: model.nodes[c.node].id.clone(),
                product: model.products[c.product].id.clone(),
                bid: c.bid,
                capacity: c.capacity,
                tags: c.tags.clone(),
            })
            .collect(),
        transports: model
            .transports
            .iter()
            .map(|t| RawTransport {
                id: t.id.clone(),
                source: model.nodes[t.source].id.clone(),
                sink: model.nodes[t.sink].id.clone(),
                product: model.products[t.product].id.clone(),
                bid: t.bid,
                capacity: t.capacity,
            })
            .collect(),
        technologies: model
            .technologies
            .iter()
            .map(|t| RawTechnology {
                id: t.id.clone(),
                node: model.nodes[t.node].id.clone(),
                reference_product: model.products[t.reference_product].id.clone(),
                inputs: t
                    .inputs
                    .iter()
                    .map(|y| RawYield {
                        product: model.products[y.product].id.clone(),
                        gamma: y.gamma,
                    })
                    .collect(),
                outputs: t
                    .outputs
                    .iter()
                    .map(|y| RawYield {
                        product: model.products[y.product].id.clone(),
                        gamma: y.gamma,
                    })
                    .collect(),
                bid: t.bid,
                capacity: t.capacity,
            })
            .collect(),
        scenarios: model.scenarios.clone(),
        notes: serde_json::Value::Null,
    };
    serde_json::to_value(raw).expect("dataset serialization cannot fail")
}
