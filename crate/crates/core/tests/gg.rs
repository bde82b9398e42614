use std::sync::Arc;

use folmod::abgroup::{classify, GroupHom, PresentedAbelianGroup};
use folmod::exactnum::{Scalar, SymbolTable};
use folmod::gg::random::{self, rng};
use folmod::gg::{
    coboundary0, coboundary_full, find_partial_dead_branches, h0, h1, h1_components,
    is_repulsive, long_exact_sequence, mayer_vietoris, prune, prune_all, FiniteGroup,
    FiniteGroupGraph, GgError, Graph, GroupGraph, GroupGraphDoc, GroupGraphMorphism,
    LoadedGraph, Verdict, DEFAULT_BOUND,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn cyc(n: u64) -> PresentedAbelianGroup {
    PresentedAbelianGroup::finite_abelian(&[n])
}

fn int_hom(d: &PresentedAbelianGroup, c: &PresentedAbelianGroup, k: i64) -> GroupHom {
    GroupHom::new(
        d.clone(),
        c.clone(),
        vec![],
        vec![vec![BigInt::from(k); d.disc()]; c.disc()],
        vec![],
        vec![],
    )
    .unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// All groups `Z/n`; each rho is the canonical map `1 ↦ n_e / gcd(n_v, n_e)`.
fn cyclic_gg(vs: &[&str], es: &[(&str, &str, &str)], vn: &[u64], en: &[u64]) -> GroupGraph {
    let g = Graph::new(vs, es).unwrap();
    let vg: Vec<_> = vn.iter().map(|&n| cyc(n)).collect();
    let eg: Vec<_> = en.iter().map(|&n| cyc(n)).collect();
    let rho = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            let k = |v: usize| (en[e] / gcd(vn[v], en[e])) as i64;
            [
                int_hom(&vg[ed.tail], &eg[e], k(ed.tail)),
                int_hom(&vg[ed.head], &eg[e], k(ed.head)),
            ]
        })
        .collect();
    GroupGraph::new(g, vg, eg, rho).unwrap()
}

fn order(g: &PresentedAbelianGroup) -> Option<BigInt> {
    classify(g).order()
}

fn identity_finite(g: Graph, grp: FiniteGroup) -> FiniteGroupGraph {
    let id: Vec<usize> = (0..grp.order()).collect();
    let n = g.n_vertices();
    let m = g.n_edges();
    FiniteGroupGraph::new(
        g,
        vec![grp.clone(); n],
        vec![grp; m],
        vec![[id.clone(), id]; m],
    )
    .unwrap()
}

#[test]
fn coboundary_single_edge() {
    let gg = cyclic_gg(&["a", "b"], &[("e", "a", "b")], &[2, 2], &[2]);
    let d = coboundary0(&gg).unwrap().map;
    assert_eq!(d.dd()[0], vec![BigInt::from(-1), BigInt::from(1)]);
}

#[test]
fn coboundary_without_edges() {
    let gg = cyclic_gg(&["a", "b"], &[], &[2, 3], &[]);
    let d = coboundary0(&gg).unwrap().map;
    assert!(classify(d.codomain()).is_trivial);
    assert!(d.is_zero_map());
    assert_eq!(order(&h0(&gg).unwrap()), Some(BigInt::from(6)));
}

#[test]
fn triangle_of_z2() {
    let gg = cyclic_gg(
        &["a", "b", "c"],
        &[("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")],
        &[2, 2, 2],
        &[2, 2, 2],
    );
    assert_eq!(order(&h1(&gg).unwrap()), Some(BigInt::from(2)));
    let g = Graph::new(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")])
        .unwrap();
    let f = identity_finite(g, FiniteGroup::cyclic(2));
    assert_eq!(f.brute_force_h1(DEFAULT_BOUND).unwrap().count, 2);
}

#[test]
fn single_edge_trivial_vertices() {
    let gg = cyclic_gg(&["a", "b"], &[("e", "a", "b")], &[1, 1], &[3]);
    let r = classify(&h1(&gg).unwrap());
    assert_eq!(r.text, "Z/3");
}

#[test]
fn s3_loop_counts_conjugacy_classes() {
    // on a loop the action is conjugation
    let g = Graph::new(&["a"], &[("e", "a", "a")]).unwrap();
    let f = identity_finite(g, FiniteGroup::symmetric3());
    let h = f.brute_force_h1(DEFAULT_BOUND).unwrap();
    assert_eq!(h.count, 3);
    assert_eq!(h.representatives.len(), 3);
    // an edge between two vertices is a tree: one orbit
    let g = Graph::new(&["a", "b"], &[("e", "a", "b")]).unwrap();
    let f = identity_finite(g, FiniteGroup::symmetric3());
    assert_eq!(f.brute_force_h1(DEFAULT_BOUND).unwrap().count, 1);
}

#[test]
fn brute_force_bound() {
    let g = Graph::new(&["a", "b"], &[("e", "a", "b")]).unwrap();
    let f = identity_finite(g, FiniteGroup::symmetric3());
    assert!(matches!(
        f.brute_force_h1(10),
        Err(GgError::BoundExceeded { needed: 216, bound: 10 })
    ));
}

#[test]
fn surjective_tree_is_trivial() {
    let gg = cyclic_gg(
        &["a", "b", "c", "d"],
        &[("x", "a", "b"), ("y", "b", "c"), ("z", "b", "d")],
        &[4, 4, 2, 2],
        &[2, 4, 2],
    );
    assert!(classify(&h1(&gg).unwrap()).is_trivial);
    let g = Graph::new(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c")]).unwrap();
    let f = identity_finite(g, FiniteGroup::quaternion());
    assert_eq!(f.brute_force_h1(DEFAULT_BOUND).unwrap().count, 1);
}

#[test]
fn dead_branches_of_path_and_cycle() {
    let path = Graph::new(&["v0", "v1", "v2"], &[("a", "v0", "v1"), ("b", "v1", "v2")]).unwrap();
    let bs = find_partial_dead_branches(&path);
    assert_eq!(bs.len(), 2);
    let ends: Vec<usize> = bs.iter().map(|b| b.extremity()).collect();
    assert!(ends.contains(&0) && ends.contains(&2));
    let cycle = Graph::new(
        &["a", "b", "c"],
        &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")],
    )
    .unwrap();
    assert!(find_partial_dead_branches(&cycle).is_empty());
}

#[test]
fn dead_branch_stops_at_branching_vertex() {
    let g = Graph::new(
        &["c", "m", "x", "y", "z"],
        &[("a", "c", "m"), ("b", "m", "x"), ("d", "c", "y"), ("e", "c", "z")],
    )
    .unwrap();
    let bs = find_partial_dead_branches(&g);
    let long = bs.iter().find(|b| b.extremity() == 2).unwrap();
    assert_eq!(long.names(&g), vec!["c", "m", "x"]);
}

#[test]
fn repulsivity_and_pruning() {
    // chain c — m — x; the outward maps are Z/4 → Z/2 reductions
    let gg = cyclic_gg(
        &["c", "m", "x"],
        &[("a", "c", "m"), ("b", "m", "x")],
        &[3, 4, 4],
        &[2, 2],
    );
    let b = find_partial_dead_branches(gg.graph())
        .into_iter()
        .find(|b| b.extremity() == 2)
        .unwrap();
    assert!(is_repulsive(&gg, &b).unwrap());
    let p = prune(&gg, &b).unwrap();
    assert_eq!(p.graph().vertices(), ["c"]);
    assert!(classify(&h1(&p).unwrap()).is_trivial);

    // the extremity's map has cokernel Z/2
    let g = Graph::new(&["c", "x"], &[("a", "c", "x")]).unwrap();
    let (vc, vx, ea) = (cyc(2), cyc(1), cyc(2));
    let rho = vec![[int_hom(&vc, &ea, 1), GroupHom::zero(&vx, &ea)]];
    let bad = GroupGraph::new(g, vec![vc, vx], vec![ea], rho).unwrap();
    let b = find_partial_dead_branches(bad.graph())
        .into_iter()
        .find(|b| b.extremity() == 1)
        .unwrap();
    assert!(!is_repulsive(&bad, &b).unwrap());
    assert!(matches!(prune(&bad, &b), Err(GgError::NotRepulsive(_))));
    let all = prune_all(&bad).unwrap();
    assert_eq!(all.graph().vertices(), ["x"]);
}

#[test]
fn prune_all_leaves_non_repulsive_graph_alone() {
    let gg = cyclic_gg(&["a", "b"], &[("e", "a", "b")], &[1, 1], &[3]);
    let p = prune_all(&gg).unwrap();
    assert_eq!(p.graph(), gg.graph());
}

#[test]
fn components_of_disjoint_edges() {
    let gg = cyclic_gg(
        &["a", "b", "c", "d"],
        &[("x", "a", "b"), ("y", "c", "d")],
        &[1, 1, 1, 1],
        &[2, 3],
    );
    let cs = h1_components(&gg).unwrap();
    assert_eq!(cs.len(), 2);
    assert_eq!(classify(&cs[0].1).text, "Z/2");
    assert_eq!(classify(&cs[1].1).text, "Z/3");
    assert_eq!(order(&h1(&gg).unwrap()), Some(BigInt::from(6)));
}

#[test]
fn elliptic_edge_cohomology() {
    let t: Arc<SymbolTable> = SymbolTable::from_names(&["tau_i", "mu"]).unwrap().shared();
    let lat = vec![
        Scalar::parse("tau_i", &t).unwrap(),
        Scalar::parse("tau_i*mu", &t).unwrap(),
    ];
    let e = PresentedAbelianGroup::complex_mod_lattice(&lat).with_table(Some(t.clone()));
    let line = PresentedAbelianGroup::complex_line().with_table(Some(t.clone()));
    let one = GroupHom::new(line.clone(), e.clone(), vec![vec![Scalar::one()]], vec![], vec![vec![]], vec![]).unwrap();
    let g = Graph::new(&["a", "b"], &[("x", "a", "b")]).unwrap();
    let zero = GroupHom::zero(&PresentedAbelianGroup::trivial().with_table(Some(t.clone())), &e);
    let gg = GroupGraph::new(
        g.clone(),
        vec![line, PresentedAbelianGroup::trivial().with_table(Some(t.clone()))],
        vec![e.clone()],
        vec![[one.clone(), zero.clone()]],
    )
    .unwrap();
    assert!(classify(&h1(&gg).unwrap()).is_trivial);
    let gg2 = GroupGraph::new(
        g,
        vec![PresentedAbelianGroup::trivial().with_table(Some(t.clone())); 2],
        vec![e],
        vec![[zero.clone(), zero]],
    )
    .unwrap();
    let r = classify(&h1(&gg2).unwrap());
    assert_eq!(r.factors.len(), 1);
    assert_eq!(r.factors[0].q_rank, 2);
}

#[test]
fn mv_with_empty_intersection_and_identity_les() {
    let gg = cyclic_gg(
        &["a", "b", "c"],
        &[("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")],
        &[2, 2, 2],
        &[2, 2, 2],
    );
    let six = mayer_vietoris(&gg, (&["a", "b", "c"], &["x", "y"]), (&["a", "c"], &["z"])).unwrap();
    assert_eq!(six.verdict, Verdict::Exact);
    let six = mayer_vietoris(&gg, (&["a", "b", "c"], &["x", "y", "z"]), (&[], &[])).unwrap();
    assert_eq!(six.verdict, Verdict::Exact);
    assert!(matches!(
        mayer_vietoris(&gg, (&["a"], &[]), (&["b"], &[])),
        Err(GgError::CoverMismatch(_))
    ));

    let n = gg.graph().n_vertices();
    let m = gg.graph().n_edges();
    let id = GroupGraphMorphism {
        vertex_maps: (0..n).map(|v| GroupHom::identity(gg.vertex_group(v))).collect(),
        edge_maps: (0..m).map(|e| GroupHom::identity(gg.edge_group(e))).collect(),
    };
    let triv = cyclic_gg(
        &["a", "b", "c"],
        &[("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")],
        &[1, 1, 1],
        &[1, 1, 1],
    );
    let to_triv = GroupGraphMorphism {
        vertex_maps: (0..n).map(|v| GroupHom::zero(gg.vertex_group(v), triv.vertex_group(v))).collect(),
        edge_maps: (0..m).map(|e| GroupHom::zero(gg.edge_group(e), triv.edge_group(e))).collect(),
    };
    let six = long_exact_sequence(&gg, &gg, &triv, &id, &to_triv).unwrap();
    assert_eq!(six.verdict, Verdict::Exact);
    assert!(matches!(
        long_exact_sequence(&gg, &gg, &gg, &id, &id),
        Err(GgError::NotShortExact(_))
    ));
}

#[test]
fn group_graph_json_roundtrip() {
    let g = Graph::new(&["a", "b"], &[("e", "a", "b"), ("l", "a", "a")]).unwrap();
    let f = identity_finite(g, FiniteGroup::symmetric3());
    let doc = GroupGraphDoc::from_finite(&f);
    let text = serde_json::to_string(&doc).unwrap();
    let back: GroupGraphDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    let LoadedGraph::Finite(f2) = back.load().unwrap() else {
        panic!("expected a finite graph")
    };
    assert_eq!(
        f2.brute_force_h1(DEFAULT_BOUND).unwrap(),
        f.brute_force_h1(DEFAULT_BOUND).unwrap()
    );

    let gg = random::random_abelian_gg(&mut rng(3), 4);
    let doc = GroupGraphDoc::from_abelian(&gg).unwrap();
    let back: GroupGraphDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    let LoadedGraph::Abelian(gg2) = back.load().unwrap() else {
        panic!("expected an abelian graph")
    };
    assert!(classify(&h1(&gg2).unwrap()).isomorphic(&classify(&h1(&gg).unwrap())));
}

#[test]
fn rejects_bad_documents() {
    let doc: GroupGraphDoc = serde_json::from_str(
        r#"{"vertices":["a","b"],"edges":[{"id":"e","ends":["a","b"]}],
            "groups":{"a":{"table":[[0,1],[1,0]]},"b":{"table":[[0,1],[1,0]]},"e":{"table":[[0,1],[1,0]]}},
            "rho":[{"vertex":"a","edge":"e","payload":{"map":[0,1]}}]}"#,
    )
    .unwrap();
    assert!(matches!(doc.load(), Err(GgError::InvalidGraph(_))));
    let doc: GroupGraphDoc = serde_json::from_str(
        r#"{"vertices":["a"],"groups":{"a":{"table":[[0,1],[0,1]]}}}"#,
    )
    .unwrap();
    assert!(matches!(doc.load(), Err(GgError::InvalidTable(_))));
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn abelian_brute_agree(seed: u64) {
    let mut r = rng(seed);
    let f = random::random_finite_gg(&mut r, &random::abelian_catalog(), 6, 200_000);
    let brute = f.brute_force_h1(DEFAULT_BOUND).unwrap().count;
    let gg = f.to_abelian().unwrap();
    assert_eq!(order(&h1(&gg).unwrap()), Some(BigInt::from(brute)), "seed {seed}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d1_after_d0_vanishes(seed in any::<u64>()) {
        let gg = random::random_abelian_gg(&mut rng(seed), 5);
        let c = coboundary_full(&gg).unwrap();
        prop_assert!(c.d1.compose(&c.d0).unwrap().is_zero_map());
    }

    #[test]
    fn orientation_does_not_matter(seed in any::<u64>()) {
        let gg = random::random_abelian_gg(&mut rng(seed), 5);
        let a = classify(&h1(&gg).unwrap());
        let b = classify(&h1(&gg.reversed()).unwrap());
        prop_assert!(a.isomorphic(&b), "{} vs {}", a.text, b.text);
        let a0 = classify(&h0(&gg).unwrap());
        let b0 = classify(&h0(&gg.reversed()).unwrap());
        prop_assert!(a0.isomorphic(&b0));
    }

    #[test]
    fn abelian_brute_force_agreement(seed in any::<u64>()) {
        abelian_brute_agree(seed);
    }

    #[test]
    fn pruning_keeps_h1(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (f, b) = random::random_finite_with_branch(&mut r, &random::mixed_catalog(), 6, 200_000);
        let before = f.brute_force_h1(DEFAULT_BOUND).unwrap().count;
        let after = f.prune(&b).unwrap().brute_force_h1(DEFAULT_BOUND).unwrap().count;
        prop_assert_eq!(before, after);
        let all = f.prune_all().unwrap().brute_force_h1(DEFAULT_BOUND).unwrap().count;
        prop_assert_eq!(before, all);
    }

    #[test]
    fn components_sum_to_h1(seed in any::<u64>()) {
        let gg = random::random_abelian_gg(&mut rng(seed), 6);
        let parts: Vec<PresentedAbelianGroup> =
            h1_components(&gg).unwrap().into_iter().map(|(_, g)| g).collect();
        let sum = folmod::abgroup::direct_sum(&parts).unwrap().group;
        prop_assert!(classify(&sum).isomorphic(&classify(&h1(&gg).unwrap())));
    }

    #[test]
    fn mayer_vietoris_is_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gg = random::random_abelian_gg(&mut r, 5);
        let ((v0, e0), (v1, e1)) = random::random_cover(&mut r, gg.graph());
        let (v0, e0, v1, e1) = (strs(&v0), strs(&e0), strs(&v1), strs(&e1));
        let six = mayer_vietoris(&gg, (&v0, &e0), (&v1, &e1)).unwrap();
        prop_assert_eq!(six.verdict, Verdict::Exact);
    }

    #[test]
    fn long_exact_sequence_is_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random::random_les(&mut r, 5).unwrap();
        let six = long_exact_sequence(&x.f, &x.g, &x.j, &x.alpha, &x.beta).unwrap();
        prop_assert_eq!(six.verdict, Verdict::Exact);
    }
}
