//! Input documents: a marked divisor with singularity and holonomy data.

use serde::{Deserialize, Serialize};

use crate::exactnum::Symbol;

use super::FolError;

pub const FOL_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationInput {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub symbols: Vec<Symbol>,
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub corners: Vec<CornerSpec>,
    #[serde(default)]
    pub attachments: Vec<AttachmentSpec>,
    #[serde(default)]
    pub singularities: Vec<SingularitySpec>,
    #[serde(default)]
    pub holonomies: Vec<HolonomySpec>,
    #[serde(default)]
    pub flags: Flags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub id: String,
    #[serde(default)]
    pub dicritical: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<i64>,
    #[serde(default)]
    pub topologically_rigid: bool,
}

/// A point where two components cross.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornerSpec {
    pub id: String,
    pub components: [String; 2],
    /// Defaults to "both components invariant".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_sigma: Option<bool>,
    #[serde(default)]
    pub nodal: bool,
}

/// A singular point on a single component (where a separatrix attaches).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttachmentSpec {
    pub id: String,
    pub component: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularitySpec {
    pub point: String,
    pub component: String,
    /// Camacho–Sad index as a scalar expression over the declared symbols.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs: Option<String>,
    #[serde(rename = "type")]
    pub tag: TypeTag,
}

/// Type of the local holonomy `h_{D,s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TypeTag {
    /// Periodic of the given order.
    P { order: u64 },
    /// Linearizable, non-periodic.
    L1,
    /// Formally linearizable, not linearizable; the centralizer is the named atom.
    L0 { atom: String },
    /// Resonant normalizable: `h = ℓ^r ∘ exp X`, linear part of order `p`.
    R1 { p: u64, r: i64 },
    /// Resonant non-normalizable; `C(h)` is generated by `exp(X/m)` and a lift
    /// of the order-`beta_image_order` subgroup of `Z/p`.
    R0 {
        p: u64,
        r: i64,
        m: u64,
        beta_image_order: u64,
    },
}

impl TypeTag {
    pub fn is_periodic(&self) -> bool {
        matches!(self, TypeTag::P { .. })
    }

    /// Trivial exponential part.
    pub fn is_r0_element(&self) -> bool {
        matches!(self, TypeTag::R0 { .. } | TypeTag::L0 { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            TypeTag::P { .. } => "P",
            TypeTag::L1 => "L1",
            TypeTag::L0 { .. } => "L0",
            TypeTag::R1 { .. } => "R1",
            TypeTag::R0 { .. } => "R0",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomySpec {
    pub component: String,
    pub class: HolonomyClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HolonomyClass {
    Finite { order: u64 },
    AbelianInfinite,
    /// Invariant factors of the (finite) centralizer.
    Nonabelian { centralizer: Vec<u64> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Declared condition (TR); computed from the components when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tr: Option<bool>,
    /// Puiseux pairs of the separatrix, checked against the chain count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub puiseux_pairs: Option<usize>,
}

/// Parses a document, reporting the JSON path of the first error.
pub fn parse_input(text: &str) -> Result<FoliationInput, FolError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        FolError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            msg: inner.to_string(),
        }
    })
}

pub fn to_json(input: &FoliationInput) -> String {
    serde_json::to_string_pretty(input).expect("input documents serialize")
}
