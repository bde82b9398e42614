use folmod::abgroup::{classify, FactorKind};
use folmod::folmod::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn ex(n: usize) -> Foliation {
    example(n).unwrap_or_else(|e| panic!("example {n}: {e}"))
}

fn codes(input: &FoliationInput) -> Vec<ViolationCode> {
    validate(input).into_iter().map(|v| v.code).collect()
}

fn side_mut<'a>(input: &'a mut FoliationInput, point: &str, comp: &str) -> &'a mut SingularitySpec {
    input
        .singularities
        .iter_mut()
        .find(|s| s.point == point && s.component == comp)
        .unwrap_or_else(|| panic!("no side {point}/{comp}"))
}

#[test]
fn bundled_examples_validate_and_round_trip() {
    for n in 0..EXAMPLE_COUNT {
        let input = example_input(n).unwrap();
        assert!(validate(&input).is_empty(), "example {n}: {:?}", validate(&input));
        let again = parse_input(&to_json(&input)).unwrap();
        assert_eq!(again, input, "example {n}");
    }
}

#[test]
fn parse_errors_carry_a_path() {
    let mut v: serde_json::Value = serde_json::from_str(example_json(1).unwrap()).unwrap();
    v["components"][0]["dicritical"] = serde_json::json!("yes");
    match parse_input(&v.to_string()) {
        Err(FolError::Parse { path, .. }) => assert_eq!(path, "components[0].dicritical"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(parse_input("{"), Err(FolError::Parse { .. })));
}

#[test]
fn broken_reciprocity_is_reported() {
    let mut input = example_input(1).unwrap();
    side_mut(&mut input, "s0_p", "D").cs = Some("3".into());
    assert!(codes(&input).contains(&ViolationCode::Reciprocity), "{:?}", validate(&input));
    assert!(matches!(Foliation::new(input), Err(FolError::Invalid(_))));
}

#[test]
fn mixed_corner_types_are_reported() {
    let mut input = example_input(1).unwrap();
    side_mut(&mut input, "s0_p", "D").tag = TypeTag::R1 { p: 2, r: 1 };
    assert!(!validate(&input).is_empty());
}

#[test]
fn unknown_and_duplicate_ids_are_reported() {
    let mut input = example_input(1).unwrap();
    input.singularities[0].component = "nowhere".into();
    assert!(codes(&input).contains(&ViolationCode::UnknownReference));

    let mut input = example_input(1).unwrap();
    let dup = input.components[0].clone();
    input.components.push(dup);
    assert!(codes(&input).contains(&ViolationCode::DuplicateId));
}

#[test]
fn tc_holds_on_all_examples() {
    for n in 0..EXAMPLE_COUNT {
        assert!(check_tc(&ex(n)), "example {n}");
    }
}

#[test]
fn cut_graph_drops_dicritical_components() {
    let f = ex(6);
    let cg = build_cut_graph(&f);
    for &c in &cg.comp {
        assert!(!f.comps[c].dicritical);
    }
    assert!(f.comps.iter().any(|c| c.dicritical));
    let f = ex(1);
    assert_eq!(build_cut_graph(&f).components.len(), 1);
}

#[test]
fn codimension_of_the_examples() {
    let expected = [(0, 0), (1, 2), (2, 1), (4, 0), (5, 1), (6, 0)];
    for (n, t) in expected {
        let r = compute_moduli(&ex(n)).unwrap();
        assert_eq!(r.tau, t, "example {n}");
    }
}

#[test]
fn chain_counts_of_the_examples() {
    let c = compute_moduli(&ex(1)).unwrap().chain_counts;
    assert_eq!((c.lambda, c.nu, c.beta, c.mu), (2, 0, 0, 0));
    let c = compute_moduli(&ex(4)).unwrap().chain_counts;
    assert_eq!((c.lambda, c.nu, c.beta, c.mu), (0, 0, 2, 0));
    let c = compute_moduli(&ex(5)).unwrap().chain_counts;
    assert_eq!((c.lambda, c.nu, c.beta, c.mu), (0, 1, 0, 1));
}

#[test]
fn predicates_on_the_examples() {
    assert!(is_finite_type(&ex(0)).finite_type);
    let nd = is_non_degenerate(&ex(0)).unwrap();
    assert!(!nd.non_degenerate);
    assert_eq!(nd.witness.as_deref(), Some("condition (TR) fails"));
    assert!(is_non_degenerate(&ex(1)).unwrap().non_degenerate);

    let ft = is_finite_type(&ex(3));
    assert!(!ft.finite_type);
    assert!(ft.witness.unwrap().contains("not connected"));
    assert!(matches!(compute_moduli(&ex(3)), Err(FolError::NotFiniteType(_))));
    assert!(matches!(
        compute_moduli_nondegenerate(&ex(0)),
        Err(FolError::NotNonDegenerate(_))
    ));
}

#[test]
fn example_moduli() {
    assert!(compute_moduli(&ex(0)).unwrap().moduli.is_trivial);
    assert!(compute_moduli(&ex(6)).unwrap().moduli.is_trivial);

    let r = compute_moduli(&ex(1)).unwrap();
    assert_eq!(r.pipelines_agree, Some(true));
    let b0 = r.b0.unwrap();
    assert!(b0.z_tilde.factors.iter().all(|x| x.kind == FactorKind::Elliptic));
    assert_eq!(b0.c_tilde.order(), Some(BigInt::from(12)));

    let r = compute_moduli(&ex(4)).unwrap();
    assert!(r.moduli.has_atoms);
    assert_eq!(r.tau, 0);

    let r = compute_moduli(&ex(5)).unwrap();
    assert_eq!(r.pipelines_agree, Some(true));
    assert_eq!(r.b0.unwrap().puiseux_agrees, Some(true));
    let s = r.sequence.unwrap();
    assert_eq!(s.verdict, "exact");
    assert_eq!(s.d.order(), Some(BigInt::from(2)));
    assert_eq!(s.f.order(), Some(BigInt::from(3)));
}

#[test]
fn exact_sequence_invariants_on_finite_type_examples() {
    for n in [0, 1, 2, 4, 5, 6] {
        let r = compute_moduli_finite_type(&ex(n)).unwrap();
        let s = r.sequence.unwrap();
        assert_eq!(s.verdict, "exact", "example {n}");
        assert!(s.zones_agree, "example {n}");
        assert!(s.active_equals_tau, "example {n}");
        assert!(s.f.is_finite, "example {n}");
        assert_eq!(s.tau, r.tau, "example {n}");
    }
}

#[test]
fn exp_sym_dis_are_consistent() {
    for n in [0, 1, 2, 4, 5, 6] {
        let f = ex(n);
        let cg = build_cut_graph(&f);
        let col = color(&f, &cg);
        let g = build_red_group_graphs(&f, &cg, &col.red).unwrap();
        g.inclusion.check(&g.exp, &g.sym).unwrap();
        g.projection.check(&g.sym, &g.dis).unwrap();
        for (i, &e) in g.sub.edges.iter().enumerate() {
            let p = cg.point[e];
            let tag = &f.points[p].sides[0].tag;
            let exp = classify(g.exp.edge_group(i));
            let sym = classify(g.sym.edge_group(i));
            let dis = classify(g.dis.edge_group(i));
            match tag {
                TypeTag::L1 => assert!(dis.is_trivial, "example {n}, {}", f.points[p].id),
                TypeTag::R1 { p: pp, r } => {
                    assert_eq!(dis.order(), Some(BigInt::from(r1_torsion(*pp, *r))));
                }
                TypeTag::R0 { .. } | TypeTag::L0 { .. } | TypeTag::P { .. } => {
                    assert!(exp.is_trivial, "example {n}, {}", f.points[p].id);
                    assert!(sym.isomorphic(&dis), "example {n}, {}", f.points[p].id);
                }
            }
        }
    }
}

#[test]
fn r0_model_order_and_divisibility() {
    // |Z²/⟨(0, k), (m, a)⟩| = |det| = m·k, invariants in a divisibility chain.
    for p in 1..=6u64 {
        for k in (1..=p).filter(|k| p % k == 0) {
            for m in 1..=4u64 {
                for r in 0..p as i64 {
                    let inv = r0_invariants(p, r, m, k);
                    let order: BigInt = inv.iter().product();
                    assert_eq!(order, BigInt::from(m * k), "p={p} r={r} m={m} k={k}");
                    for w in inv.windows(2) {
                        assert_eq!(&w[1] % &w[0], BigInt::from(0));
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn r1_torsion_divides_and_is_periodic(p in 1u64..50, r in -200i64..200) {
        let g = r1_torsion(p, r);
        prop_assert_eq!(p % g, 0);
        prop_assert_eq!(g, r1_torsion(p, r + p as i64));
        let brute = (1..=p).filter(|d| p % d == 0 && (r.rem_euclid(p as i64) as u64) % d == 0).max().unwrap();
        prop_assert_eq!(g, brute);
    }

    #[test]
    fn relabelled_components_keep_the_moduli(n in prop::sample::select(vec![1usize, 5]), suffix in "[a-z]{1,3}") {
        let input = example_input(n).unwrap();
        let mut text = to_json(&input);
        for c in &input.components {
            text = text.replace(&format!("\"{}\"", c.id), &format!("\"{}_{suffix}\"", c.id));
        }
        let f = Foliation::new(parse_input(&text).unwrap()).unwrap();
        let a = compute_moduli(&ex(n)).unwrap().moduli;
        let b = compute_moduli(&f).unwrap().moduli;
        prop_assert!(a.isomorphic(&b));
    }
}
