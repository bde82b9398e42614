use std::sync::Arc;

use folmod::abgroup::{
    classify, cokernel, cokernel_with_projection, direct_sum, kernel, lattices_homothetic,
    Elem, FactorKind, GroupError, GroupHom, GroupSpec, HomSpec, PresentedAbelianGroup, Relation,
};
use folmod::exactnum::{Scalar, SymbolTable};
use num_bigint::BigInt;
use proptest::prelude::*;

fn table() -> Arc<SymbolTable> {
    SymbolTable::from_names(&["tau_i", "mu", "alpha_t", "beta_t"])
        .unwrap()
        .shared()
}

fn s(t: &Arc<SymbolTable>, e: &str) -> Scalar {
    Scalar::parse(e, t).unwrap()
}

fn c_star(t: &Arc<SymbolTable>) -> PresentedAbelianGroup {
    PresentedAbelianGroup::complex_mod_lattice(&[s(t, "tau_i")]).with_table(Some(t.clone()))
}

fn c_mod(t: &Arc<SymbolTable>, gens: &[&str]) -> PresentedAbelianGroup {
    let g: Vec<Scalar> = gens.iter().map(|e| s(t, e)).collect();
    PresentedAbelianGroup::complex_mod_lattice(&g)
}

fn scalar_hom(
    d: &PresentedAbelianGroup,
    c: &PresentedAbelianGroup,
    k: Scalar,
) -> Result<GroupHom, GroupError> {
    GroupHom::new(d.clone(), c.clone(), vec![vec![k]], vec![], vec![vec![]], vec![])
}

fn int_hom(d: &PresentedAbelianGroup, c: &PresentedAbelianGroup, m: Vec<Vec<i64>>) -> GroupHom {
    let dd = m
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    GroupHom::new(d.clone(), c.clone(), vec![], dd, vec![], vec![]).unwrap()
}

#[test]
fn check_hom_examples() {
    let t = table();
    let cs = c_star(&t);
    assert!(GroupHom::identity(&cs).check().is_ok());

    let line = PresentedAbelianGroup::complex_line();
    let ell = c_mod(&t, &["tau_i", "tau_i*mu"]);
    assert!(scalar_hom(&line, &ell, Scalar::one()).unwrap().check().is_ok());

    let forget = scalar_hom(&cs, &line, Scalar::one()).unwrap();
    assert_eq!(
        forget.check(),
        Err(GroupError::RelationNotPreserved { index: 0 })
    );
}

#[test]
fn symbol_table_mismatch_is_reported() {
    let t1 = table();
    let t2 = SymbolTable::from_names(&["x"]).unwrap().shared();
    let a = c_star(&t1);
    let b = PresentedAbelianGroup::complex_mod_lattice(&[s(&t2, "x")]);
    assert_eq!(
        scalar_hom(&a, &b, Scalar::one()).unwrap_err(),
        GroupError::SymbolTableMismatch
    );
}

#[test]
fn cokernel_examples() {
    let t = table();
    let line = PresentedAbelianGroup::complex_line();
    assert!(classify(&cokernel(&GroupHom::identity(&line)).unwrap()).is_trivial);

    let z = PresentedAbelianGroup::finite_abelian(&[0]);
    let h = GroupHom::new(
        z,
        line,
        vec![vec![]],
        vec![],
        vec![vec![s(&t, "tau_i")]],
        vec![],
    )
    .unwrap();
    let r = classify(&cokernel(&h).unwrap());
    assert_eq!(r.factors.len(), 1);
    assert_eq!(r.factors[0].kind, FactorKind::Punctured);
    assert_eq!(r.text, "C*");
}

#[test]
fn kernel_of_elliptic_projection_is_the_lattice() {
    let t = table();
    let line = PresentedAbelianGroup::complex_line();
    let ell = c_mod(&t, &["tau_i", "tau_i*mu"]);
    let h = scalar_hom(&line, &ell, Scalar::one()).unwrap();
    let k = kernel(&h).unwrap();
    let r = classify(&k.group);
    assert_eq!(r.free_rank, 2);
    assert!(r.factors.is_empty() && r.torsion.is_empty());
    // the images of the kernel generators span Z·tau_i + Z·tau_i·mu
    let imgs: Vec<Scalar> = (0..k.group.disc())
        .map(|j| {
            let mut disc = vec![BigInt::from(0); k.group.disc()];
            disc[j] = BigInt::from(1);
            k.inclusion.apply(&Elem { cont: vec![], disc }).cont[0].clone()
        })
        .collect();
    assert!(lattices_homothetic(
        &imgs,
        &[s(&t, "tau_i"), s(&t, "tau_i*mu")]
    ));
    assert!(k.inclusion.check().is_ok());
    assert!(h.compose(&k.inclusion).unwrap().is_zero_map());
}

/// Elements of a finite diagonal group `Z/n₁ ⊕ … ⊕ Z/n_k`.
fn elements(orders: &[u64]) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.push(BigInt::from(x));
                    w
                })
            })
            .collect();
    }
    out
}

fn brute_kernel_size(h: &GroupHom, orders: &[u64]) -> usize {
    elements(orders)
        .into_iter()
        .filter(|x| {
            let y = h.apply(&Elem {
                cont: vec![],
                disc: x.clone(),
            });
            h.codomain().is_zero_elem(&y)
        })
        .count()
}

#[test]
fn kernel_z6_to_z3() {
    let z6 = PresentedAbelianGroup::finite_abelian(&[6]);
    let z3 = PresentedAbelianGroup::finite_abelian(&[3]);
    let h = int_hom(&z6, &z3, vec![vec![1]]);
    let k = kernel(&h).unwrap();
    let r = classify(&k.group);
    assert_eq!(r.torsion, vec![BigInt::from(2)]);
    assert_eq!(r.order(), Some(BigInt::from(brute_kernel_size(&h, &[6]))));
    // generated by 3
    let g = k.inclusion.apply(&Elem {
        cont: vec![],
        disc: vec![BigInt::from(1); k.group.disc()],
    });
    assert!(z6.is_zero_elem(&g) || z6.is_zero_elem(&Elem {
        cont: vec![],
        disc: vec![&g.disc[0] - BigInt::from(3)],
    }));
}

#[test]
fn kernel_of_identity_is_trivial() {
    let t = table();
    for g in [
        c_star(&t),
        c_mod(&t, &["tau_i", "tau_i*mu"]),
        PresentedAbelianGroup::finite_abelian(&[2, 0, 4]),
    ] {
        assert!(classify(&kernel(&GroupHom::identity(&g)).unwrap().group).is_trivial);
    }
}

#[test]
fn classify_examples() {
    let t = table();
    let r = classify(&c_mod(&t, &["tau_i", "tau_i*mu"]));
    assert_eq!(r.factors[0].kind, FactorKind::Elliptic);
    assert_eq!(r.factors[0].q_rank, 2);
    assert!(r.discreteness_by_genericity);
    assert!(lattices_homothetic(
        &r.factors[0].lattice.iter().map(|v| v[0].clone()).collect::<Vec<_>>(),
        &[Scalar::one(), s(&t, "mu")]
    ));

    let r = classify(&c_mod(&t, &["tau_i", "2*alpha_t*tau_i", "2*beta_t*tau_i"]));
    assert_eq!(r.factors[0].kind, FactorKind::NonDiscrete);
    assert_eq!(r.factors[0].q_rank, 3);
    assert!(r.has_nondiscrete);

    let g = PresentedAbelianGroup::new(
        None,
        0,
        2,
        vec![],
        vec![
            Relation::lattice(vec![], vec![2.into(), 0.into()]),
            Relation::lattice(vec![], vec![0.into(), 4.into()]),
        ],
    )
    .unwrap();
    let r = classify(&g);
    assert_eq!(r.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(r.text, "Z/2 ⊕ Z/4");
    assert_eq!(r.order(), Some(BigInt::from(8)));
}

#[test]
fn classify_text_uses_lattice_notation() {
    let t = table();
    let r = classify(&c_mod(&t, &["tau_i", "2*alpha_t*tau_i"]));
    assert!(r.text.starts_with("C/"), "{}", r.text);
    assert!(r.text.contains("Z +"), "{}", r.text);
}

#[test]
fn mixed_relation_splits() {
    // (C ⊕ Z)/⟨(tau_i; 2)⟩ ≅ C ⊕ Z/2
    let t = table();
    let g = PresentedAbelianGroup::new(
        Some(t.clone()),
        1,
        1,
        vec![],
        vec![Relation::lattice(vec![s(&t, "tau_i")], vec![2.into()])],
    )
    .unwrap();
    let r = classify(&g);
    assert_eq!(r.torsion, vec![BigInt::from(2)]);
    assert_eq!(r.factors.len(), 1);
    assert_eq!(r.factors[0].kind, FactorKind::Line);
}

#[test]
fn direct_sum_examples() {
    let trivial = direct_sum(&[PresentedAbelianGroup::trivial(), PresentedAbelianGroup::trivial()])
        .unwrap();
    assert!(classify(&trivial.group).is_trivial);

    let ds = direct_sum(&[
        PresentedAbelianGroup::complex_line(),
        PresentedAbelianGroup::finite_abelian(&[2]),
    ])
    .unwrap();
    assert_eq!((ds.group.cont(), ds.group.disc()), (1, 1));
    assert_eq!(ds.group.relations().len(), 1);
    assert_eq!(ds.group.relations()[0].disc, vec![BigInt::from(2)]);
    assert!(ds.group.relations()[0].cont[0].is_zero());
    for (i, p) in ds.injections.iter().zip(&ds.projections) {
        assert!(i.check().is_ok() && p.check().is_ok());
    }

    let t = table();
    let e1 = c_mod(&t, &["tau_i", "2*alpha_t*tau_i"]);
    let e2 = c_mod(&t, &["tau_i", "2*beta_t*tau_i"]);
    let ds = direct_sum(&[e1, e2]).unwrap();
    assert_eq!(ds.group.cont(), 2);
    assert_eq!(ds.group.relations().len(), 4);
    let r = classify(&ds.group);
    assert_eq!(r.factors.len(), 2);
    assert!(r.factors.iter().all(|f| f.kind == FactorKind::Elliptic));
}

#[test]
fn surjective_injective_examples() {
    let t = table();
    let line = PresentedAbelianGroup::complex_line();
    let ell = c_mod(&t, &["tau_i", "tau_i*mu"]);
    let h = scalar_hom(&line, &ell, Scalar::one()).unwrap();
    assert!(h.is_surjective().unwrap());
    assert!(!h.is_injective().unwrap());

    let z2 = PresentedAbelianGroup::finite_abelian(&[2]);
    let z4 = PresentedAbelianGroup::finite_abelian(&[4]);
    let h = int_hom(&z2, &z4, vec![vec![2]]);
    assert!(h.check().is_ok());
    assert!(h.is_injective().unwrap());
    assert!(!h.is_surjective().unwrap());
    assert_eq!(brute_kernel_size(&h, &[2]), 1);

    let z = GroupHom::zero(&line, &line);
    assert!(!z.is_surjective().unwrap());
    assert!(!z.is_injective().unwrap());
}

#[test]
fn wire_roundtrip() {
    let t = table();
    let g = c_mod(&t, &["tau_i", "tau_i*mu"]).with_table(Some(t.clone()));
    let spec = GroupSpec::from_group(&g).unwrap();
    let json = serde_json::to_string(&spec).unwrap();
    let back: GroupSpec = serde_json::from_str(&json).unwrap();
    let g2 = back.to_group(&t).unwrap();
    assert_eq!(classify(&g), classify(&g2));

    let h = scalar_hom(&PresentedAbelianGroup::complex_line(), &g2, s(&t, "2*mu")).unwrap();
    let hs = HomSpec::from_hom(&h).unwrap();
    let h2 = hs
        .to_hom(PresentedAbelianGroup::complex_line(), g2.clone(), &t)
        .unwrap();
    assert_eq!(h.cc(), h2.cc());
}

// ---- properties ----

fn finite_group() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=6, 1..=3)
}

fn well_defined_hom(
    d: &[u64],
    c: &[u64],
    entries: &[i64],
) -> Option<GroupHom> {
    let dg = PresentedAbelianGroup::finite_abelian(d);
    let cg = PresentedAbelianGroup::finite_abelian(c);
    let m: Vec<Vec<i64>> = (0..c.len())
        .map(|i| (0..d.len()).map(|j| entries[(i * d.len() + j) % entries.len()]).collect())
        .collect();
    let h = int_hom(&dg, &cg, m);
    h.check().is_ok().then_some(h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_kernel_image_counts(
        d in finite_group(),
        c in finite_group(),
        entries in prop::collection::vec(-3i64..=3, 9),
    ) {
        prop_assume!(entries.iter().any(|&x| x != 0));
        if let Some(h) = well_defined_hom(&d, &c, &entries) {
            let dom: u64 = d.iter().product();
            let cod: u64 = c.iter().product();
            let ker = brute_kernel_size(&h, &d) as u64;
            let k = classify(&kernel(&h).unwrap().group);
            prop_assert_eq!(k.order(), Some(BigInt::from(ker)));
            let im = dom / ker;
            let q = classify(&cokernel(&h).unwrap());
            prop_assert_eq!(q.order(), Some(BigInt::from(cod / im)));
            prop_assert_eq!(h.is_surjective().unwrap(), q.is_trivial);
        }
    }

    #[test]
    fn classify_is_idempotent(
        d in prop::collection::vec(0u64..=6, 0..=3),
        gens in prop::sample::subsequence(
            vec!["tau_i", "tau_i*mu", "2*alpha_t*tau_i", "2*beta_t*tau_i", "3*tau_i", "tau_i/2"], 0..=4),
        glue in 0i64..=3,
    ) {
        let t = table();
        let b = d.len();
        let mut rels: Vec<Relation> = gens.iter().enumerate().map(|(i, e)| {
            let mut disc = vec![BigInt::from(0); b];
            if b > 0 && i == 0 { disc[0] = BigInt::from(glue); }
            Relation::lattice(vec![s(&t, e)], disc)
        }).collect();
        for (i, &n) in d.iter().enumerate() {
            if n != 0 {
                let mut disc = vec![BigInt::from(0); b];
                disc[i] = BigInt::from(n);
                rels.push(Relation::lattice(vec![Scalar::zero()], disc));
            }
        }
        let g = PresentedAbelianGroup::new(Some(t.clone()), 1, b, vec![], rels).unwrap();
        let r = classify(&g);
        let r2 = classify(&r.normal_form_group());
        prop_assert_eq!(&r, &r2);
        prop_assert!(r.isomorphic(&r2));
    }

    #[test]
    fn cokernel_of_composite_surjects(
        a in finite_group(),
        b in finite_group(),
        c in finite_group(),
        e1 in prop::collection::vec(-2i64..=2, 9),
        e2 in prop::collection::vec(-2i64..=2, 9),
    ) {
        if let (Some(f), Some(g)) = (well_defined_hom(&a, &b, &e1), well_defined_hom(&b, &c, &e2)) {
            let gf = g.compose(&f).unwrap();
            prop_assert!(gf.check().is_ok());
            let (cgf, _) = cokernel_with_projection(&gf).unwrap();
            let cg = cokernel(&g).unwrap();
            let p = GroupHom::identity(&PresentedAbelianGroup::finite_abelian(&c))
                .retarget(cgf, cg)
                .unwrap();
            prop_assert!(p.check().is_ok());
            prop_assert!(p.is_surjective().unwrap());
        }
    }

    #[test]
    fn homothety_detects_scaling(k in 1i64..=5, sym in prop::sample::select(vec!["mu", "alpha_t", "1/mu"])) {
        let t = table();
        let a = [s(&t, "tau_i"), s(&t, &format!("tau_i*{sym}"))];
        let b: Vec<Scalar> = a.iter().map(|x| x * &s(&t, &format!("{k}*mu"))).collect();
        prop_assert!(lattices_homothetic(&a, &b));
        prop_assert!(!lattices_homothetic(&a, &[s(&t, "tau_i"), s(&t, "tau_i*beta_t")]));
    }
}
