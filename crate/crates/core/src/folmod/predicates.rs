//! Finite-type and non-degeneracy predicates, with witnesses.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::graphs::{build_cut_graph, color, singular_chains, Coloring, CutGraph, Sub};
use super::input::{HolonomyClass, TypeTag};
use super::model::Foliation;
use super::FolError;

/// Outcome of the finite-type test, one entry per cut-component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteTypeReport {
    pub finite_type: bool,
    pub components: Vec<ComponentVerdict>,
    /// First failing cut-component and the reason.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub vertices: Vec<String>,
    pub red: Vec<String>,
    pub ok: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonDegeneracyReport {
    pub non_degenerate: bool,
    pub tr: bool,
    pub tr_declared: bool,
    pub abelian_branching: Vec<String>,
    pub periodic_chain_points: Vec<String>,
    pub witness: Option<String>,
}

/// `n_D` for a green vertex.
fn green_order(f: &Foliation, c: usize) -> Option<u64> {
    match f.comps[c].class {
        Some(HolonomyClass::Finite { order }) => Some(order),
        _ => None,
    }
}

/// Whether `Sym_D → Sym_s` is onto, for `D` green: `n_{D,s} = n_D`.
fn green_onto(f: &Foliation, c: usize, p: usize) -> bool {
    match (green_order(f, c), f.tag(p, c)) {
        (Some(n), TypeTag::P { order }) => *order == n,
        _ => false,
    }
}

/// Checks repulsivity of `b` inside the cut-component `(vs, es)`: every edge
/// outside `b` is onto from its endpoint farther from `b`.
fn repulsive(f: &Foliation, cg: &CutGraph, vs: &[usize], es: &[usize], b: &BTreeSet<usize>) -> Result<(), String> {
    let g = &cg.graph;
    let mut dist = vec![usize::MAX; g.n_vertices()];
    let mut queue = VecDeque::new();
    for &v in b {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for e in g.incident(v) {
            if !es.contains(&e) {
                continue;
            }
            let w = g.edges()[e].other(v);
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    for &e in es {
        let ed = &g.edges()[e];
        if b.contains(&ed.tail) && b.contains(&ed.head) {
            continue;
        }
        let far = if dist[ed.tail] >= dist[ed.head] { ed.tail } else { ed.head };
        debug_assert!(vs.contains(&far));
        let (c, p) = (cg.comp[far], cg.point[e]);
        if !green_onto(f, c, p) {
            return Err(format!(
                "restriction from {} to {} is not onto",
                f.comps[c].id, f.points[p].id
            ));
        }
    }
    Ok(())
}

fn connected(cg: &CutGraph, verts: &BTreeSet<usize>, edges: &[usize]) -> bool {
    let Some(&start) = verts.iter().next() else {
        return false;
    };
    let g = &cg.graph;
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &e in edges {
            let ed = &g.edges()[e];
            let w = if ed.tail == v {
                ed.head
            } else if ed.head == v {
                ed.tail
            } else {
                continue;
            };
            if verts.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == verts.len()
}

pub(crate) fn finite_type_with(f: &Foliation, cg: &CutGraph, col: &Coloring) -> FiniteTypeReport {
    let g = &cg.graph;
    let name = |v: usize| g.vertices()[v].clone();
    let mut components = Vec::new();
    for (vs, es) in &cg.components {
        let red_v: BTreeSet<usize> = vs.iter().copied().filter(|v| col.red.vertices.contains(v)).collect();
        let red_e: Vec<usize> = es.iter().copied().filter(|e| col.red.edges.contains(e)).collect();
        let verdict = if red_v.is_empty() {
            let found = vs.iter().find(|&&v| {
                let b = BTreeSet::from([v]);
                repulsive(f, cg, vs, es, &b).is_ok()
            });
            match found {
                Some(&v) => (true, format!("no red part; {} is a green repulsive vertex", name(v))),
                None => (false, "no red part and no green repulsive vertex".to_string()),
            }
        } else if !connected(cg, &red_v, &red_e) {
            (false, "the red part is not connected".to_string())
        } else {
            match repulsive(f, cg, vs, es, &red_v) {
                Ok(()) => (true, "red part nonempty, connected and repulsive".to_string()),
                Err(why) => (false, format!("the red part is not repulsive: {why}")),
            }
        };
        components.push(ComponentVerdict {
            vertices: vs.iter().map(|&v| name(v)).collect(),
            red: red_v.iter().map(|&v| name(v)).collect(),
            ok: verdict.0,
            reason: verdict.1,
        });
    }
    let witness = components
        .iter()
        .find(|c| !c.ok)
        .map(|c| format!("cut-component {{{}}}: {}", c.vertices.join(", "), c.reason));
    FiniteTypeReport {
        finite_type: witness.is_none(),
        components,
        witness,
    }
}

pub fn is_finite_type(f: &Foliation) -> FiniteTypeReport {
    let cg = build_cut_graph(f);
    let col = color(f, &cg);
    finite_type_with(f, &cg, &col)
}

pub fn is_non_degenerate(f: &Foliation) -> Result<NonDegeneracyReport, FolError> {
    let cg = build_cut_graph(f);
    let comps: Vec<Vec<usize>> = cg
        .components
        .iter()
        .map(|(vs, _)| vs.iter().map(|&v| cg.comp[v]).collect())
        .collect();
    let tr_declared = f.input().flags.tr.is_some();
    let tr = f.input().flags.tr.unwrap_or_else(|| f.tr_computed(&comps));
    let abelian_branching: Vec<String> = f
        .comps
        .iter()
        .enumerate()
        .filter(|(c, comp)| {
            !comp.dicritical
                && f.val_sigma(*c) >= 3
                && !matches!(comp.class, Some(HolonomyClass::Nonabelian { .. }))
        })
        .map(|(_, comp)| comp.id.clone())
        .collect();
    let mut periodic = BTreeSet::new();
    for ch in singular_chains(f, &cg)? {
        for &e in &ch.edges {
            let p = cg.point[e];
            if f.points[p].sides.iter().any(|s| s.tag.is_periodic()) {
                periodic.insert(f.points[p].id.clone());
            }
        }
    }
    let periodic_chain_points: Vec<String> = periodic.into_iter().collect();
    let witness = if !tr {
        Some("condition (TR) fails".to_string())
    } else if let Some(c) = abelian_branching.first() {
        Some(format!("component {c} has at least three singular points and abelian holonomy"))
    } else {
        periodic_chain_points
            .first()
            .map(|p| format!("singular chain through {p} has periodic holonomy"))
    };
    Ok(NonDegeneracyReport {
        non_degenerate: witness.is_none(),
        tr,
        tr_declared,
        abelian_branching,
        periodic_chain_points,
        witness,
    })
}

/// Removes green extremities onto which the restriction is surjective, until
/// none is left: the subgraph of the cut-graph that carries `H¹(A, Sym)`.
pub fn prune_green(f: &Foliation, cg: &CutGraph, col: &Coloring) -> Sub {
    let g = &cg.graph;
    let mut verts: BTreeSet<usize> = (0..g.n_vertices()).collect();
    let mut edges: BTreeSet<usize> = (0..g.n_edges()).collect();
    loop {
        let mut changed = false;
        for v in verts.clone() {
            if !col.green_vertex[v] {
                continue;
            }
            let inc: Vec<usize> = g.incident(v).into_iter().filter(|e| edges.contains(e)).collect();
            if let [e] = inc[..] {
                let other = g.edges()[e].other(v);
                if other != v && green_onto(f, cg.comp[v], cg.point[e]) {
                    verts.remove(&v);
                    edges.remove(&e);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Sub {
        vertices: verts.into_iter().collect(),
        edges: edges.into_iter().collect(),
    }
}
