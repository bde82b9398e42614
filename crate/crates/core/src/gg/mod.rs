//! Group-graphs over finite multigraphs: cochains, H⁰/H¹, pruning of dead
//! branches, Mayer–Vietoris and long exact sequences, and a brute-force
//! oracle for finite (possibly non-abelian) group-graphs.

mod cohomology;
mod finite;
mod prune;
pub mod random;
mod sequence;
mod wire;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{GroupError, GroupHom, PresentedAbelianGroup};

pub use cohomology::{
    coboundary0, coboundary_full, cohomology, h0, h1, h1_components, Coboundary,
    CohomologyResult, FullComplex,
};
pub use finite::{all_homs, BruteH1, FiniteGroup, FiniteGroupGraph, DEFAULT_BOUND};
pub use prune::{find_partial_dead_branches, is_repulsive, prune, prune_all, DeadBranch};
pub use sequence::{
    factor_through, long_exact_sequence, mayer_vietoris, GroupGraphMorphism, SixTerm, Verdict,
};
pub use wire::{EdgeSpec, GroupGraphDoc, GroupPayload, LoadedGraph, RhoPayload, RhoSpec, GG_SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum GgError {
    #[error("state space {needed} exceeds the brute-force bound {bound}")]
    BoundExceeded { needed: u128, bound: u128 },
    #[error("partial dead branch at {0} is not repulsive")]
    NotRepulsive(String),
    #[error("subgraphs do not cover the graph: {0}")]
    CoverMismatch(String),
    #[error("not a short exact sequence: {0}")]
    NotShortExact(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group-graph is not abelian")]
    NotAbelian,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// Finite multigraph; loops allowed. Each edge is oriented from its
/// lower-indexed endpoint (tail) to its higher-indexed one (head).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self, GgError> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if v.is_empty() || !seen.insert(v.clone()) {
                return Err(GgError::InvalidGraph(format!("vertex id {v:?} empty or repeated")));
            }
        }
        let mut g = Graph {
            vertices,
            edges: Vec::new(),
        };
        for (id, a, b) in edges {
            g.add_edge(id.as_ref(), a.as_ref(), b.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, GgError> {
        if name.is_empty() || self.vertices.iter().any(|v| v == name) {
            return Err(GgError::InvalidGraph(format!("vertex {name:?} empty or repeated")));
        }
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, id: &str, a: &str, b: &str) -> Result<usize, GgError> {
        if id.is_empty() || self.edges.iter().any(|e| e.id == id) {
            return Err(GgError::InvalidGraph(format!("edge id {id:?} empty or repeated")));
        }
        let ia = self.vertex_index(a)?;
        let ib = self.vertex_index(b)?;
        self.edges.push(Edge {
            id: id.to_string(),
            tail: ia.min(ib),
            head: ia.max(ib),
        });
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, GgError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| GgError::InvalidGraph(format!("unknown vertex {name:?}")))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize, GgError> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| GgError::InvalidGraph(format!("unknown edge {id:?}")))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].tail == v || self.edges[e].head == v)
            .collect()
    }

    /// Number of edges containing `v`; a loop counts once.
    pub fn valency(&self, v: usize) -> usize {
        self.incident(v).len()
    }

    pub fn is_extremity(&self, v: usize) -> bool {
        self.valency(v) == 1
    }

    /// Connected components as (vertex indices, edge indices).
    pub fn components(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut vs = Vec::new();
            while let Some(v) = stack.pop() {
                vs.push(v);
                for e in self.incident(v) {
                    let w = self.edges[e].other(v);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            vs.sort_unstable();
            let es = (0..self.edges.len())
                .filter(|&e| comp[self.edges[e].tail] == id)
                .collect();
            out.push((vs, es));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `E − V + C`.
    pub fn first_betti(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// The subgraph on the given vertices and edges, in original order.
    pub fn subgraph(&self, verts: &[usize], edges: &[usize]) -> Result<Graph, GgError> {
        let vs: BTreeSet<usize> = verts.iter().copied().collect();
        let es: BTreeSet<usize> = edges.iter().copied().collect();
        let names: Vec<&str> = vs.iter().map(|&v| self.vertices[v].as_str()).collect();
        let index: Vec<usize> = vs.iter().copied().collect();
        let mut g = Graph::new(&names, &[])?;
        for &e in &es {
            let ed = &self.edges[e];
            let (Ok(t), Ok(h)) = (index.binary_search(&ed.tail), index.binary_search(&ed.head))
            else {
                return Err(GgError::InvalidGraph(format!(
                    "edge {} leaves the vertex set",
                    ed.id
                )));
            };
            g.edges.push(Edge {
                id: ed.id.clone(),
                tail: t,
                head: h,
            });
        }
        Ok(g)
    }

    /// Same graph with every edge orientation flipped.
    pub fn reversed(&self) -> Graph {
        let mut g = self.clone();
        for e in &mut g.edges {
            std::mem::swap(&mut e.tail, &mut e.head);
        }
        g
    }
}

/// Abelian group-graph. `rho[e] = [ρ_tail^e, ρ_head^e]`.
#[derive(Clone, Debug)]
pub struct GroupGraph {
    graph: Graph,
    vgroups: Vec<PresentedAbelianGroup>,
    egroups: Vec<PresentedAbelianGroup>,
    rho: Vec<[GroupHom; 2]>,
}

fn same_shape(a: &PresentedAbelianGroup, b: &PresentedAbelianGroup) -> bool {
    a.cont() == b.cont() && a.disc() == b.disc() && a.atoms() == b.atoms()
}

impl GroupGraph {
    pub fn new(
        graph: Graph,
        vgroups: Vec<PresentedAbelianGroup>,
        egroups: Vec<PresentedAbelianGroup>,
        rho: Vec<[GroupHom; 2]>,
    ) -> Result<Self, GgError> {
        if vgroups.len() != graph.n_vertices()
            || egroups.len() != graph.n_edges()
            || rho.len() != graph.n_edges()
        {
            return Err(GgError::InvalidGraph("group or rho count mismatch".into()));
        }
        for (e, ed) in graph.edges().iter().enumerate() {
            for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
                let h = &rho[e][side];
                if !same_shape(h.domain(), &vgroups[v]) || !same_shape(h.codomain(), &egroups[e])
                {
                    return Err(GgError::InvalidGraph(format!(
                        "rho({}, {}) has the wrong domain or codomain",
                        graph.vertices()[v],
                        ed.id
                    )));
                }
                h.check()?;
            }
        }
        Ok(GroupGraph {
            graph,
            vgroups,
            egroups,
            rho,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_group(&self, v: usize) -> &PresentedAbelianGroup {
        &self.vgroups[v]
    }

    pub fn edge_group(&self, e: usize) -> &PresentedAbelianGroup {
        &self.egroups[e]
    }

    pub fn vertex_groups(&self) -> &[PresentedAbelianGroup] {
        &self.vgroups
    }

    pub fn edge_groups(&self) -> &[PresentedAbelianGroup] {
        &self.egroups
    }

    /// `ρ_v^e`; for a loop, `side` picks the tail (0) or head (1) incidence.
    pub fn rho(&self, e: usize, side: usize) -> &GroupHom {
        &self.rho[e][side]
    }

    /// The map out of `v` into `e` for a non-loop edge.
    pub fn rho_from(&self, v: usize, e: usize) -> &GroupHom {
        let ed = &self.graph.edges()[e];
        if ed.tail == v {
            &self.rho[e][0]
        } else {
            &self.rho[e][1]
        }
    }

    pub fn has_atoms(&self) -> bool {
        self.vgroups.iter().chain(&self.egroups).any(|g| g.has_atoms())
    }

    pub fn restrict(&self, verts: &[usize], edges: &[usize]) -> Result<GroupGraph, GgError> {
        let graph = self.graph.subgraph(verts, edges)?;
        let vs: BTreeSet<usize> = verts.iter().copied().collect();
        let es: BTreeSet<usize> = edges.iter().copied().collect();
        let vgroups = vs.iter().map(|&v| self.vgroups[v].clone()).collect();
        let egroups = es.iter().map(|&e| self.egroups[e].clone()).collect();
        let rho = es.iter().map(|&e| self.rho[e].clone()).collect();
        Ok(GroupGraph {
            graph,
            vgroups,
            egroups,
            rho,
        })
    }

    pub fn restrict_by_name(&self, verts: &[&str], edges: &[&str]) -> Result<GroupGraph, GgError> {
        let vs = verts
            .iter()
            .map(|v| self.graph.vertex_index(v))
            .collect::<Result<Vec<_>, _>>()?;
        let es = edges
            .iter()
            .map(|e| self.graph.edge_index(e))
            .collect::<Result<Vec<_>, _>>()?;
        self.restrict(&vs, &es)
    }

    /// Flips every orientation; cohomology is unchanged.
    pub fn reversed(&self) -> GroupGraph {
        GroupGraph {
            graph: self.graph.reversed(),
            vgroups: self.vgroups.clone(),
            egroups: self.egroups.clone(),
            rho: self
                .rho
                .iter()
                .map(|[t, h]| [h.clone(), t.clone()])
                .collect(),
        }
    }
}
