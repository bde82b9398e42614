//! Seeded generators of random group-graphs for the property suites.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{direct_sum, DirectSum, GroupHom, PresentedAbelianGroup};
use crate::exactnum::{Scalar, SymbolTable};

use super::finite::{all_homs, is_onto, FiniteGroup, FiniteGroupGraph};
use super::prune::DeadBranch;
use super::sequence::GroupGraphMorphism;
use super::{GgError, Graph, GroupGraph};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Abelian groups of order at most 8.
pub fn abelian_catalog() -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    vec![
        c(1),
        c(2),
        c(3),
        c(4),
        c(5),
        c(6),
        c(7),
        c(8),
        c(2).product(&c(2)),
        c(2).product(&c(4)),
        c(2).product(&c(2)).product(&c(2)),
    ]
}

/// The abelian catalog plus S₃, D₄ and Q₈.
pub fn mixed_catalog() -> Vec<FiniteGroup> {
    let mut v = abelian_catalog();
    v.extend([
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral4(),
        FiniteGroup::quaternion(),
    ]);
    v
}

/// Random multigraph on `1..=max_v` vertices; loops are rare.
pub fn random_graph(r: &mut Rng64, max_v: usize, max_e: usize) -> Graph {
    let n = r.gen_range(1..=max_v);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut g = Graph::new(&names, &[]).expect("fresh vertex names");
    let m = r.gen_range(0..=max_e);
    for k in 0..m {
        let a = r.gen_range(0..n);
        let b = if n > 1 && r.gen_bool(0.9) {
            (a + r.gen_range(1..n)) % n
        } else {
            a
        };
        g.add_edge(&format!("e{k}"), &names[a], &names[b])
            .expect("fresh edge id");
    }
    g
}

fn pick(r: &mut Rng64, cat: &[FiniteGroup]) -> FiniteGroup {
    cat.choose(r).expect("nonempty catalog").clone()
}

fn random_hom(r: &mut Rng64, a: &FiniteGroup, b: &FiniteGroup) -> Vec<usize> {
    all_homs(a, b).choose(r).expect("trivial hom exists").clone()
}

/// Random finite group-graph with state space at most `bound`.
pub fn random_finite_gg(
    r: &mut Rng64,
    cat: &[FiniteGroup],
    max_v: usize,
    bound: u128,
) -> FiniteGroupGraph {
    loop {
        let g = random_graph(r, max_v, max_v + 1);
        let vg: Vec<FiniteGroup> = (0..g.n_vertices()).map(|_| pick(r, cat)).collect();
        let eg: Vec<FiniteGroup> = (0..g.n_edges()).map(|_| pick(r, cat)).collect();
        let size: u128 = vg
            .iter()
            .chain(&eg)
            .map(|x| x.order() as u128)
            .product();
        if size > bound {
            continue;
        }
        let rho = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, ed)| {
                [
                    random_hom(r, &vg[ed.tail], &eg[e]),
                    random_hom(r, &vg[ed.head], &eg[e]),
                ]
            })
            .collect();
        return FiniteGroupGraph::new(g, vg, eg, rho).expect("homs from all_homs");
    }
}

/// A random finite group-graph with an attached chain whose outward maps are
/// onto, so that the chain is a repulsive dead branch.
pub fn random_finite_with_branch(
    r: &mut Rng64,
    cat: &[FiniteGroup],
    max_v: usize,
    bound: u128,
) -> (FiniteGroupGraph, DeadBranch) {
    loop {
        let base = random_finite_gg(r, cat, max_v.saturating_sub(1).max(1), bound);
        let len = r.gen_range(1..=3);
        let g0 = base.graph();
        let root = r.gen_range(0..g0.n_vertices());
        let mut g = g0.clone();
        let mut vg: Vec<FiniteGroup> = (0..g0.n_vertices())
            .map(|v| base.vertex_group(v).clone())
            .collect();
        let mut eg: Vec<FiniteGroup> = (0..g0.n_edges())
            .map(|e| base.edge_group(e).clone())
            .collect();
        let mut rho: Vec<[Vec<usize>; 2]> = (0..g0.n_edges())
            .map(|e| [base.rho(e, 0).to_vec(), base.rho(e, 1).to_vec()])
            .collect();
        let mut prev = root;
        let mut vertices = vec![root];
        let mut edges = Vec::new();
        for k in 0..len {
            let name = format!("b{k}");
            let egrp = pick(r, cat);
            // outer vertex group with an onto map to the edge group
            let mut vgrp = pick(r, cat);
            let mut onto: Vec<Vec<usize>> = all_homs(&vgrp, &egrp)
                .into_iter()
                .filter(|m| is_onto(&egrp, m))
                .collect();
            if onto.is_empty() {
                vgrp = egrp.clone();
                onto = vec![(0..egrp.order()).collect()];
            }
            let out_map = onto.choose(r).expect("nonempty").clone();
            let in_map = random_hom(r, &vg[prev], &egrp);
            g.add_vertex(&name).expect("fresh vertex");
            let v = g.n_vertices() - 1;
            let e = g
                .add_edge(&format!("f{k}"), &g.vertices()[prev].clone(), &name)
                .expect("fresh edge");
            // `prev` has the lower index, so it is the tail
            vg.push(vgrp);
            eg.push(egrp);
            rho.push([in_map, out_map]);
            vertices.push(v);
            edges.push(e);
            prev = v;
        }
        let size: u128 = vg
            .iter()
            .chain(&eg)
            .map(|x| x.order() as u128)
            .product();
        if size > bound {
            continue;
        }
        let fg = FiniteGroupGraph::new(g, vg, eg, rho).expect("homs by construction");
        return (fg, DeadBranch { vertices, edges });
    }
}

/// Shape of an abelian element group in the exactness suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Cyclic(u64),
    Line,
    Cstar,
}

fn kind_group(k: Kind, t: &Arc<SymbolTable>) -> PresentedAbelianGroup {
    match k {
        Kind::Cyclic(n) => PresentedAbelianGroup::finite_abelian(&[n]),
        Kind::Line => PresentedAbelianGroup::complex_line(),
        Kind::Cstar => PresentedAbelianGroup::complex_mod_lattice(&[tau(t)]),
    }
    .with_table(Some(t.clone()))
}

fn tau(t: &Arc<SymbolTable>) -> Scalar {
    Scalar::symbol(t, "tau_i").expect("tau_i declared")
}

pub fn tau_table() -> Arc<SymbolTable> {
    SymbolTable::from_names(&["tau_i"]).expect("valid").shared()
}

/// A random hom between two kinds, retried until well defined.
fn kind_hom(r: &mut Rng64, a: Kind, b: Kind, t: &Arc<SymbolTable>) -> GroupHom {
    let (ga, gb) = (kind_group(a, t), kind_group(b, t));
    for _ in 0..20 {
        let k = r.gen_range(-2i64..=2);
        let h = match (a, b) {
            (Kind::Cyclic(_), Kind::Cyclic(_)) => GroupHom::new(
                ga.clone(),
                gb.clone(),
                vec![],
                vec![vec![BigInt::from(k)]],
                vec![],
                vec![],
            ),
            (Kind::Cyclic(n), _) => {
                let c = &tau(t) * &Scalar::from_rational(num_rational::BigRational::new(
                    BigInt::from(k),
                    BigInt::from(n),
                ));
                GroupHom::new(ga.clone(), gb.clone(), vec![vec![]], vec![], vec![vec![c]], vec![])
            }
            (_, Kind::Cyclic(_)) => Ok(GroupHom::zero(&ga, &gb)),
            (Kind::Cstar, Kind::Line) => Ok(GroupHom::zero(&ga, &gb)),
            _ => GroupHom::new(
                ga.clone(),
                gb.clone(),
                vec![vec![Scalar::from_int(k)]],
                vec![],
                vec![vec![]],
                vec![],
            ),
        };
        if let Ok(h) = h {
            if h.check().is_ok() {
                return h;
            }
        }
    }
    GroupHom::zero(&ga, &gb)
}

fn random_kind(r: &mut Rng64) -> Kind {
    match r.gen_range(0..6) {
        0 => Kind::Line,
        1 => Kind::Cstar,
        _ => Kind::Cyclic(r.gen_range(1..=4)),
    }
}

/// Random abelian group-graph mixing cyclic groups, C and C*.
pub fn random_abelian_gg(r: &mut Rng64, max_v: usize) -> GroupGraph {
    let t = tau_table();
    let g = random_graph(r, max_v, max_v + 1);
    let vk: Vec<Kind> = (0..g.n_vertices()).map(|_| random_kind(r)).collect();
    let ek: Vec<Kind> = (0..g.n_edges()).map(|_| random_kind(r)).collect();
    let rho = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            [
                kind_hom(r, vk[ed.tail], ek[e], &t),
                kind_hom(r, vk[ed.head], ek[e], &t),
            ]
        })
        .collect();
    GroupGraph::new(
        g,
        vk.iter().map(|&k| kind_group(k, &t)).collect(),
        ek.iter().map(|&k| kind_group(k, &t)).collect(),
        rho,
    )
    .expect("checked homs")
}

/// Two subgraphs (vertex names, edge ids) whose union is the whole graph.
pub type CoverNames = (Vec<String>, Vec<String>);

pub fn random_cover(r: &mut Rng64, g: &Graph) -> (CoverNames, CoverNames) {
    let n = g.n_vertices();
    let mut in0 = vec![false; n];
    let mut in1 = vec![false; n];
    let mut e0 = Vec::new();
    let mut e1 = Vec::new();
    for (e, ed) in g.edges().iter().enumerate() {
        let side = r.gen_range(0..3);
        if side != 1 {
            e0.push(e);
            in0[ed.tail] = true;
            in0[ed.head] = true;
        }
        if side != 0 {
            e1.push(e);
            in1[ed.tail] = true;
            in1[ed.head] = true;
        }
    }
    for v in 0..n {
        match r.gen_range(0..4) {
            0 => in0[v] = true,
            1 => in1[v] = true,
            2 => {
                in0[v] = true;
                in1[v] = true;
            }
            _ => {}
        }
        if !in0[v] && !in1[v] {
            in0[v] = true;
        }
    }
    let names = |mask: &[bool], es: &[usize]| -> CoverNames {
        (
            (0..n)
                .filter(|&v| mask[v])
                .map(|v| g.vertices()[v].clone())
                .collect(),
            es.iter().map(|&e| g.edges()[e].id.clone()).collect(),
        )
    };
    (names(&in0, &e0), names(&in1, &e1))
}

/// A short exact triple `F → G → J` of group-graphs over one graph with the
/// two morphisms.
pub struct LesInstance {
    pub f: GroupGraph,
    pub g: GroupGraph,
    pub j: GroupGraph,
    pub alpha: GroupGraphMorphism,
    pub beta: GroupGraphMorphism,
}

/// Either a split sum `F → F ⊕ J → J` of random cyclic data, or the
/// exponential sequence `Z → C → C*` with random integer restrictions.
pub fn random_les(r: &mut Rng64, max_v: usize) -> Result<LesInstance, GgError> {
    if r.gen_bool(0.5) {
        random_split_les(r, max_v)
    } else {
        random_exp_les(r, max_v)
    }
}

fn random_split_les(r: &mut Rng64, max_v: usize) -> Result<LesInstance, GgError> {
    let base = random_abelian_gg(r, max_v);
    let graph = base.graph().clone();
    let t = tau_table();
    let ek: Vec<Kind> = (0..graph.n_edges()).map(|_| random_kind(r)).collect();
    let vk: Vec<Kind> = (0..graph.n_vertices()).map(|_| random_kind(r)).collect();
    let jrho = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            [
                kind_hom(r, vk[ed.tail], ek[e], &t),
                kind_hom(r, vk[ed.head], ek[e], &t),
            ]
        })
        .collect();
    let j = GroupGraph::new(
        graph.clone(),
        vk.iter().map(|&k| kind_group(k, &t)).collect(),
        ek.iter().map(|&k| kind_group(k, &t)).collect(),
        jrho,
    )?;
    let f = base;
    let sum = |a: &PresentedAbelianGroup, b: &PresentedAbelianGroup| {
        direct_sum(&[a.clone(), b.clone()])
    };
    let mut vs = Vec::new();
    let mut es = Vec::new();
    for v in 0..graph.n_vertices() {
        vs.push(sum(f.vertex_group(v), j.vertex_group(v))?);
    }
    for e in 0..graph.n_edges() {
        es.push(sum(f.edge_group(e), j.edge_group(e))?);
    }
    let mut rho = Vec::new();
    for (e, ed) in graph.edges().iter().enumerate() {
        let mut pair = Vec::new();
        for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
            let blocks = vec![
                (0, 0, f.rho(e, side).clone()),
                (1, 1, j.rho(e, side).clone()),
            ];
            pair.push(DirectSum::hom_from_blocks(&vs[v], &es[e], &blocks)?);
        }
        let h = pair.pop().expect("two");
        rho.push([pair.pop().expect("two"), h]);
    }
    let g = GroupGraph::new(
        graph.clone(),
        vs.iter().map(|d| d.group.clone()).collect(),
        es.iter().map(|d| d.group.clone()).collect(),
        rho,
    )?;
    let alpha = GroupGraphMorphism {
        vertex_maps: vs.iter().map(|d| d.injections[0].clone()).collect(),
        edge_maps: es.iter().map(|d| d.injections[0].clone()).collect(),
    };
    let beta = GroupGraphMorphism {
        vertex_maps: vs.iter().map(|d| d.projections[1].clone()).collect(),
        edge_maps: es.iter().map(|d| d.projections[1].clone()).collect(),
    };
    Ok(LesInstance { f, g, j, alpha, beta })
}

fn random_exp_les(r: &mut Rng64, max_v: usize) -> Result<LesInstance, GgError> {
    let t = tau_table();
    let graph = random_graph(r, max_v, max_v + 1);
    let z = PresentedAbelianGroup::new(Some(t.clone()), 0, 1, vec![], vec![])?;
    let c = kind_group(Kind::Line, &t);
    let cs = kind_group(Kind::Cstar, &t);
    let ks: Vec<[i64; 2]> = graph
        .edges()
        .iter()
        .map(|_| [r.gen_range(-2..=2), r.gen_range(-2..=2)])
        .collect();
    let mk = |grp: &PresentedAbelianGroup, k: i64| -> Result<GroupHom, GgError> {
        Ok(if grp.cont() == 1 {
            GroupHom::new(grp.clone(), grp.clone(), vec![vec![Scalar::from_int(k)]], vec![], vec![vec![]], vec![])?
        } else {
            GroupHom::new(grp.clone(), grp.clone(), vec![], vec![vec![BigInt::from(k)]], vec![], vec![])?
        })
    };
    let build = |grp: &PresentedAbelianGroup| -> Result<GroupGraph, GgError> {
        let rho = ks
            .iter()
            .map(|[a, b]| Ok([mk(grp, *a)?, mk(grp, *b)?]))
            .collect::<Result<Vec<_>, GgError>>()?;
        GroupGraph::new(
            graph.clone(),
            vec![grp.clone(); graph.n_vertices()],
            vec![grp.clone(); graph.n_edges()],
            rho,
        )
    };
    let exp = GroupHom::new(z.clone(), c.clone(), vec![vec![]], vec![], vec![vec![tau(&t)]], vec![])?;
    let quo = GroupHom::identity(&c).retarget(c.clone(), cs.clone())?;
    let f = build(&z)?;
    let g = build(&c)?;
    let j = build(&cs)?;
    let alpha = GroupGraphMorphism {
        vertex_maps: vec![exp.clone(); graph.n_vertices()],
        edge_maps: vec![exp; graph.n_edges()],
    };
    let beta = GroupGraphMorphism {
        vertex_maps: vec![quo.clone(); graph.n_vertices()],
        edge_maps: vec![quo; graph.n_edges()],
    };
    Ok(LesInstance { f, g, j, alpha, beta })
}
