//! Marked divisors with singularity and holonomy data, their group-graphs
//! and the two moduli pipelines.

mod examples;
mod graphs;
mod groups;
mod input;
mod model;
mod moduli;
mod predicates;

use thiserror::Error;

use crate::abgroup::GroupError;
use crate::gg::GgError;

pub use examples::{example, example_input, example_json, EXAMPLE_COUNT};
pub use graphs::{
    betti, build_cut_graph, build_dual_graph, check_tc, color, exp_trivial, singular_chains, tau,
    vertex_type, zones, Chain, ChainClass, Coloring, CutGraph, DualGraph, Sub, Zone,
};
pub use groups::{
    build_dis_graph, build_exp_graph, build_red_group_graphs, build_sym_graph, r0_invariants,
    r1_torsion, vertex_model, RedGroupGraphs, VertexModel,
};
pub use input::{
    parse_input, to_json, AttachmentSpec, ComponentSpec, CornerSpec, Flags, FoliationInput,
    HolonomyClass, HolonomySpec, SingularitySpec, TypeTag, FOL_SCHEMA_VERSION,
};
pub use model::{validate, Comp, Foliation, Point, PointKind, Side, Violation, ViolationCode};
pub use moduli::{
    compute_moduli, compute_moduli_finite_type, compute_moduli_nondegenerate, B0Section,
    ChainCounts, ModuliReport, SequenceSection,
};
pub use moduli::{ChainInfo, ZoneInfo};
pub use predicates::{
    is_finite_type, is_non_degenerate, prune_green, ComponentVerdict, FiniteTypeReport,
    NonDegeneracyReport,
};

/// Name of the symbol standing for `2πi`.
pub const TAU: &str = "tau_i";

#[derive(Debug, Error)]
pub enum FolError {
    #[error("parse error at {path} (line {line}, column {column}): {msg}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{} violation(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("condition (TC) fails")]
    TcViolated,
    #[error("not non-degenerate: {0}")]
    NotNonDegenerate(String),
    #[error("red element {0} has non-abelian or undefined Sym")]
    NonAbelianRedSym(String),
    #[error("type heterogeneity: {0}")]
    TypeHeterogeneity(String),
    #[error("kernel is not of finite type: {0}")]
    NonFiniteTypeKernel(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Graph(#[from] GgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
