//! Dual graph, cut-graph, coloring, singular chains, τ and zones.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::gg::Graph;

use super::input::{HolonomyClass, TypeTag};
use super::model::{Foliation, PointKind};
use super::FolError;

#[derive(Clone, Debug)]
pub struct DualGraph {
    /// Vertices are the components, edges the corners, both in declaration order.
    pub graph: Graph,
    pub val_sigma: Vec<usize>,
}

pub fn build_dual_graph(f: &Foliation) -> Result<DualGraph, FolError> {
    let names: Vec<&str> = f.comps.iter().map(|c| c.id.as_str()).collect();
    let edges: Vec<(&str, &str, &str)> = f
        .points
        .iter()
        .filter_map(|p| match p.kind {
            PointKind::Corner([a, b]) => Some((p.id.as_str(), names[a], names[b])),
            PointKind::Attachment(_) => None,
        })
        .collect();
    let graph = Graph::new(&names, &edges)?;
    if !graph.is_connected() {
        return Err(FolError::Inconsistent("the dual graph is not connected".into()));
    }
    let val_sigma = (0..f.comps.len()).map(|c| f.val_sigma(c)).collect();
    Ok(DualGraph { graph, val_sigma })
}

/// Condition (TC): each connected component of the invariant part contains a
/// component with `val_Σ ≠ 2`.
pub fn check_tc(f: &Foliation) -> bool {
    let inv: Vec<usize> = (0..f.comps.len()).filter(|&c| !f.comps[c].dicritical).collect();
    let names: Vec<&str> = inv.iter().map(|&c| f.comps[c].id.as_str()).collect();
    let edges: Vec<(&str, &str, &str)> = f
        .points
        .iter()
        .filter_map(|p| match p.kind {
            PointKind::Corner([a, b]) if !f.comps[a].dicritical && !f.comps[b].dicritical => {
                Some((p.id.as_str(), f.comps[a].id.as_str(), f.comps[b].id.as_str()))
            }
            _ => None,
        })
        .collect();
    let g = Graph::new(&names, &edges).expect("ids are unique");
    g.components()
        .iter()
        .all(|(vs, _)| vs.iter().any(|&v| f.val_sigma(inv[v]) != 2))
}

/// Dual graph without dicritical vertices and nodal edges. Vertex `i` is
/// component `comp[i]`, edge `e` is corner `point[e]`.
#[derive(Clone, Debug)]
pub struct CutGraph {
    pub graph: Graph,
    pub comp: Vec<usize>,
    pub point: Vec<usize>,
    /// Connected components `A^i` as (vertices, edges).
    pub components: Vec<(Vec<usize>, Vec<usize>)>,
}

impl CutGraph {
    pub fn vertex_of(&self, c: usize) -> Option<usize> {
        self.comp.iter().position(|&x| x == c)
    }

    pub fn edge_of(&self, p: usize) -> Option<usize> {
        self.point.iter().position(|&x| x == p)
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.components
            .iter()
            .position(|(vs, _)| vs.contains(&v))
            .expect("every vertex lies in a component")
    }
}

pub fn build_cut_graph(f: &Foliation) -> CutGraph {
    let comp: Vec<usize> = (0..f.comps.len()).filter(|&c| !f.comps[c].dicritical).collect();
    let point: Vec<usize> = (0..f.points.len())
        .filter(|&p| f.is_corner_edge(p) && !f.points[p].nodal)
        .collect();
    let names: Vec<&str> = comp.iter().map(|&c| f.comps[c].id.as_str()).collect();
    let edges: Vec<(&str, &str, &str)> = point
        .iter()
        .map(|&p| {
            let PointKind::Corner([a, b]) = f.points[p].kind else {
                unreachable!("edges are corners")
            };
            (f.points[p].id.as_str(), f.comps[a].id.as_str(), f.comps[b].id.as_str())
        })
        .collect();
    let graph = Graph::new(&names, &edges).expect("ids are unique");
    let components = graph.components();
    CutGraph {
        graph,
        comp,
        point,
        components,
    }
}

/// A subgraph of the cut-graph by indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Sub {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Sub {
    pub fn names(&self, cg: &CutGraph) -> Vec<String> {
        let g = &cg.graph;
        self.vertices
            .iter()
            .map(|&v| g.vertices()[v].clone())
            .chain(self.edges.iter().map(|&e| g.edges()[e].id.clone()))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Coloring {
    pub green_vertex: Vec<bool>,
    pub green_edge: Vec<bool>,
    pub red: Sub,
    /// Red elements with trivial exponential part.
    pub r0: Sub,
    /// Completion of `R ∖ R⁰`.
    pub r1: Sub,
}

/// The common non-periodic type at a component, if any.
pub fn vertex_type(f: &Foliation, c: usize) -> Option<&TypeTag> {
    f.comps[c]
        .sigma_points
        .iter()
        .map(|&p| f.tag(p, c))
        .find(|t| !t.is_periodic())
}

/// Whether `Exp_D` is trivial for a red component.
pub fn exp_trivial(f: &Foliation, c: usize) -> bool {
    match f.comps[c].class {
        Some(HolonomyClass::Nonabelian { .. }) => true,
        _ => vertex_type(f, c).is_none_or(TypeTag::is_r0_element),
    }
}

pub fn color(f: &Foliation, cg: &CutGraph) -> Coloring {
    let g = &cg.graph;
    let green_vertex: Vec<bool> = cg
        .comp
        .iter()
        .map(|&c| matches!(f.comps[c].class, Some(HolonomyClass::Finite { .. })))
        .collect();
    let green_edge: Vec<bool> = cg
        .point
        .iter()
        .map(|&p| f.points[p].sides.iter().all(|s| s.tag.is_periodic()))
        .collect();
    let red = Sub {
        vertices: (0..g.n_vertices()).filter(|&v| !green_vertex[v]).collect(),
        edges: (0..g.n_edges()).filter(|&e| !green_edge[e]).collect(),
    };
    let r0 = Sub {
        vertices: red
            .vertices
            .iter()
            .copied()
            .filter(|&v| exp_trivial(f, cg.comp[v]))
            .collect(),
        edges: red
            .edges
            .iter()
            .copied()
            .filter(|&e| {
                let p = cg.point[e];
                f.tag(p, f.preferred(p)).is_r0_element()
            })
            .collect(),
    };
    let mut r1v: BTreeSet<usize> = red
        .vertices
        .iter()
        .copied()
        .filter(|v| !r0.vertices.contains(v))
        .collect();
    let r1e: Vec<usize> = red
        .edges
        .iter()
        .copied()
        .filter(|e| !r0.edges.contains(e))
        .collect();
    for &e in &r1e {
        r1v.insert(g.edges()[e].tail);
        r1v.insert(g.edges()[e].head);
    }
    let r1 = Sub {
        vertices: r1v.into_iter().collect(),
        edges: r1e,
    };
    Coloring {
        green_vertex,
        green_edge,
        red,
        r0,
        r1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainClass {
    Linearizable,
    ResonantNormalizable,
    ResonantNonNormalizable,
    NonResonantNonLinearizable,
    Periodic,
}

/// `D₀ … D_ℓ` with extremities of `val_Σ ≥ 3` and interior `val_Σ = 2`;
/// `edges[i]` joins `vertices[i]` and `vertices[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub class: ChainClass,
}

impl Chain {
    pub fn names(&self, cg: &CutGraph) -> Vec<String> {
        self.vertices
            .iter()
            .map(|&v| cg.graph.vertices()[v].clone())
            .collect()
    }

    pub fn terminal_edge(&self) -> usize {
        *self.edges.last().expect("chains have an edge")
    }
}

fn tag_class(t: &TypeTag) -> ChainClass {
    match t {
        TypeTag::P { .. } => ChainClass::Periodic,
        TypeTag::L1 => ChainClass::Linearizable,
        TypeTag::L0 { .. } => ChainClass::NonResonantNonLinearizable,
        TypeTag::R1 { .. } => ChainClass::ResonantNormalizable,
        TypeTag::R0 { .. } => ChainClass::ResonantNonNormalizable,
    }
}

pub fn singular_chains(f: &Foliation, cg: &CutGraph) -> Result<Vec<Chain>, FolError> {
    let g = &cg.graph;
    let val = |v: usize| f.val_sigma(cg.comp[v]);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in 0..g.n_vertices() {
        if val(start) < 3 {
            continue;
        }
        for e0 in g.incident(start) {
            let mut verts = vec![start];
            let mut edges = vec![e0];
            let mut cur = g.edges()[e0].other(start);
            let mut last = e0;
            let complete = loop {
                verts.push(cur);
                if val(cur) >= 3 {
                    break true;
                }
                let inc = g.incident(cur);
                if val(cur) != 2 || inc.len() != 2 || edges.len() > g.n_edges() {
                    break false;
                }
                let next = if inc[0] == last { inc[1] } else { inc[0] };
                edges.push(next);
                last = next;
                cur = g.edges()[next].other(cur);
            };
            if !complete {
                continue;
            }
            let mut key = edges.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let classes: BTreeSet<_> = edges
                .iter()
                .map(|&e| {
                    let p = cg.point[e];
                    tag_class(f.tag(p, f.preferred(p)))
                })
                .collect();
            let class = if classes.contains(&ChainClass::Periodic) {
                ChainClass::Periodic
            } else if classes.len() == 1 {
                *classes.iter().next().expect("nonempty")
            } else {
                return Err(FolError::TypeHeterogeneity(format!(
                    "singular chain {} mixes local types",
                    verts.iter().map(|&v| g.vertices()[v].as_str()).collect::<Vec<_>>().join("-")
                )));
            };
            out.push(Chain {
                vertices: verts,
                edges,
                class,
            });
        }
    }
    Ok(out)
}

/// `τ = rank H₁(R/R⁰)` with all of `R⁰` collapsed to one vertex.
pub fn tau(cg: &CutGraph, red: &Sub, r0: &Sub) -> usize {
    let g = &cg.graph;
    let star = usize::MAX;
    let map = |v: usize| if r0.vertices.contains(&v) { star } else { v };
    let mut verts: Vec<usize> = red.vertices.iter().map(|&v| map(v)).collect();
    verts.sort_unstable();
    verts.dedup();
    let edges: Vec<(usize, usize)> = red
        .edges
        .iter()
        .filter(|e| !r0.edges.contains(e))
        .map(|&e| (map(g.edges()[e].tail), map(g.edges()[e].head)))
        .collect();
    betti(&verts, &edges)
}

/// `E − V + C` of a multigraph given by vertex labels and edge endpoints.
pub fn betti(verts: &[usize], edges: &[(usize, usize)]) -> usize {
    let idx = |x: usize| verts.binary_search(&x).expect("endpoint is a vertex");
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut comps = verts.len();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, idx(a)), find(&mut parent, idx(b)));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    edges.len() + comps - verts.len()
}

/// Completion of a connected component of `R ∖ R⁰`, with its number of
/// active vertices `rank H₁(Z/(Z ∩ R⁰))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Zone {
    pub sub: Sub,
    pub boundary: Vec<usize>,
    pub active: usize,
}

pub fn zones(cg: &CutGraph, red: &Sub, r0: &Sub) -> Vec<Zone> {
    let g = &cg.graph;
    let open_v: Vec<usize> = red
        .vertices
        .iter()
        .copied()
        .filter(|v| !r0.vertices.contains(v))
        .collect();
    let open_e: Vec<usize> = red
        .edges
        .iter()
        .copied()
        .filter(|e| !r0.edges.contains(e))
        .collect();
    // union-find over open vertices and open edges
    let n = open_v.len() + open_e.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (k, &e) in open_e.iter().enumerate() {
        for end in [g.edges()[e].tail, g.edges()[e].head] {
            if let Some(i) = open_v.iter().position(|&x| x == end) {
                let (a, b) = (find(&mut parent, open_v.len() + k), find(&mut parent, i));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let slot = match groups.iter().position(|x| x.0 == r) {
            Some(s) => s,
            None => {
                groups.push((r, Vec::new(), Vec::new()));
                groups.len() - 1
            }
        };
        if i < open_v.len() {
            groups[slot].1.push(open_v[i]);
        } else {
            groups[slot].2.push(open_e[i - open_v.len()]);
        }
    }
    groups
        .into_iter()
        .map(|(_, mut vs, es)| {
            let mut boundary = BTreeSet::new();
            for &e in &es {
                for end in [g.edges()[e].tail, g.edges()[e].head] {
                    if r0.vertices.contains(&end) {
                        boundary.insert(end);
                    }
                }
            }
            let boundary: Vec<usize> = boundary.into_iter().collect();
            let star = usize::MAX;
            let map = |v: usize| if boundary.contains(&v) { star } else { v };
            let mut qv: Vec<usize> = vs.clone();
            if !boundary.is_empty() {
                qv.push(star);
            }
            qv.sort_unstable();
            let qe: Vec<(usize, usize)> = es
                .iter()
                .map(|&e| (map(g.edges()[e].tail), map(g.edges()[e].head)))
                .collect();
            let active = betti(&qv, &qe);
            vs.extend(boundary.iter().copied());
            vs.sort_unstable();
            Zone {
                sub: Sub {
                    vertices: vs,
                    edges: es,
                },
                boundary,
                active,
            }
        })
        .collect()
}
