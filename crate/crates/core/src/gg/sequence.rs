//! Mayer–Vietoris and long exact sequences, with exactness checked on the
//! presented groups (image equals kernel at every node).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::abgroup::{
    classify, cokernel, cokernel_with_projection, direct_sum, kernel, DirectSum, Elem,
    GroupError, GroupHom, Kernel, NormalFormReport, PresentedAbelianGroup, Span,
};
use crate::exactnum::{scalar_solve, Scalar};

use super::cohomology::{coboundary0, Coboundary};
use super::{GgError, GroupGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Exact,
    NotExact { at: Vec<usize> },
    Unverified { reason: String },
}

/// `0 → A₀ → A₁ → A₂ → A₃ → A₄ → A₅ → 0`.
#[derive(Clone, Debug)]
pub struct SixTerm {
    pub labels: Vec<String>,
    pub groups: Vec<PresentedAbelianGroup>,
    pub reports: Vec<NormalFormReport>,
    pub maps: Vec<GroupHom>,
    pub exact_at: Vec<bool>,
    pub verdict: Verdict,
}

impl SixTerm {
    fn assemble(labels: [&str; 6], groups: Vec<PresentedAbelianGroup>, maps: Vec<GroupHom>) -> Self {
        let reports = groups.iter().map(classify).collect();
        let (exact_at, verdict) = match verify(&maps) {
            Ok(v) => {
                let bad: Vec<usize> = (0..v.len()).filter(|&i| !v[i]).collect();
                let verdict = if bad.is_empty() {
                    Verdict::Exact
                } else {
                    Verdict::NotExact { at: bad }
                };
                (v, verdict)
            }
            Err(e) => (
                Vec::new(),
                Verdict::Unverified {
                    reason: e.to_string(),
                },
            ),
        };
        SixTerm {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            groups,
            reports,
            maps,
            exact_at,
            verdict,
        }
    }
}

fn exact_middle(f: &GroupHom, g: &GroupHom) -> Result<bool, GroupError> {
    if !g.compose(f)?.is_zero_map() {
        return Ok(false);
    }
    let Kernel { group, inclusion } = kernel(g)?;
    let span = f.image_span();
    for j in 0..group.cont() {
        let col: Vec<Scalar> = inclusion.cc().iter().map(|r| r[j].clone()).collect();
        if !span.contains_line(&col) {
            return Ok(false);
        }
    }
    for k in 0..group.disc() {
        let x = Elem {
            cont: inclusion.dc().iter().map(|r| r[k].clone()).collect(),
            disc: inclusion.dd().iter().map(|r| r[k].clone()).collect(),
        };
        if !span.contains(&x) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn verify(maps: &[GroupHom]) -> Result<Vec<bool>, GroupError> {
    let mut out = vec![classify(&kernel(&maps[0])?.group).is_trivial];
    for w in maps.windows(2) {
        out.push(exact_middle(&w[0], &w[1])?);
    }
    out.push(classify(&cokernel(&maps[maps.len() - 1])?).is_trivial);
    Ok(out)
}

/// Factors a map through `inc : K → Y`. `images[i]` is the image in the free
/// module of `Y` of the `i`-th generator of `domain` (continuous generators
/// first). Continuous generators are lifted C-linearly.
pub fn factor_through(
    domain: &PresentedAbelianGroup,
    images: &[Elem],
    inc: &GroupHom,
) -> Result<GroupHom, GgError> {
    let k = inc.domain();
    let y = inc.codomain();
    let (ka, kb) = (k.cont(), k.disc());
    let (a, b) = (domain.cont(), domain.disc());
    let ylines = y.lines();
    let nl = ylines.len();
    let mut lines = ylines.clone();
    lines.extend((0..ka).map(|j| inc.cc().iter().map(|r| r[j].clone()).collect::<Vec<_>>()));
    let mut cc = vec![vec![Scalar::zero(); a]; ka];
    let mut dc = vec![vec![Scalar::zero(); b]; ka];
    let mut dd = vec![vec![num_bigint::BigInt::from(0); b]; kb];
    let fail = |i: usize| GgError::Group(GroupError::Invalid(format!("generator {i} does not lift")));
    for i in 0..a {
        let t = &images[i];
        if t.disc.iter().any(|x| x != &num_bigint::BigInt::from(0)) {
            return Err(fail(i));
        }
        let c = if t.cont.iter().all(Scalar::is_zero) {
            vec![Scalar::zero(); lines.len()]
        } else if lines.is_empty() {
            return Err(fail(i));
        } else {
            scalar_solve(&lines, &t.cont).ok_or_else(|| fail(i))?
        };
        for j in 0..ka {
            cc[j][i] = c[nl + j].clone();
        }
    }
    let mut gens: Vec<Elem> = (0..kb)
        .map(|j| Elem {
            cont: inc.dc().iter().map(|r| r[j].clone()).collect(),
            disc: inc.dd().iter().map(|r| r[j].clone()).collect(),
        })
        .collect();
    gens.extend(y.lattice());
    let span = Span::new(y.cont(), y.disc(), lines, gens);
    for i in 0..b {
        let sol = span.solve(&images[a + i]).ok_or_else(|| fail(a + i))?;
        for j in 0..ka {
            dc[j][i] = sol
                .line_coeffs
                .get(nl + j)
                .cloned()
                .unwrap_or_else(Scalar::zero);
        }
        for j in 0..kb {
            dd[j][i] = sol.gen_coeffs[j].clone();
        }
    }
    Ok(GroupHom::new(
        domain.clone(),
        k.clone(),
        cc,
        dd,
        dc,
        vec![None; domain.atoms().len()],
    )?)
}

/// Images of all generators of the domain of `h`.
fn generator_images(h: &GroupHom) -> Vec<Elem> {
    let d = h.domain();
    let mut out = Vec::new();
    for j in 0..d.cont() {
        let mut cont = vec![Scalar::zero(); d.cont()];
        cont[j] = Scalar::one();
        out.push(h.apply(&Elem {
            cont,
            disc: vec![num_bigint::BigInt::from(0); d.disc()],
        }));
    }
    for j in 0..d.disc() {
        let mut disc = vec![num_bigint::BigInt::from(0); d.disc()];
        disc[j] = num_bigint::BigInt::from(1);
        out.push(h.apply(&Elem {
            cont: vec![Scalar::zero(); d.cont()],
            disc,
        }));
    }
    out
}

/// `Σ_{x ∈ keep} inj_target(x) ∘ proj_source(x)`: restriction between direct
/// sums indexed by element names, optionally negated.
fn transfer(
    src_names: &[String],
    dst_names: &[String],
    parts: &[PresentedAbelianGroup],
    negate: bool,
) -> Result<Vec<(usize, usize, GroupHom)>, GgError> {
    let mut blocks = Vec::new();
    for (i, n) in dst_names.iter().enumerate() {
        if let Some(j) = src_names.iter().position(|m| m == n) {
            let id = GroupHom::identity(&parts[j]);
            blocks.push((i, j, if negate { id.neg() } else { id }));
        }
    }
    Ok(blocks)
}

struct Piece {
    g: GroupGraph,
    cob: Coboundary,
    h0: Kernel,
    h1: PresentedAbelianGroup,
    vnames: Vec<String>,
    enames: Vec<String>,
}

fn piece(g: GroupGraph) -> Result<Piece, GgError> {
    let cob = coboundary0(&g)?;
    let h0 = kernel(&cob.map)?;
    let (h1, _) = cokernel_with_projection(&cob.map)?;
    let vnames = g.graph().vertices().to_vec();
    let enames = g.graph().edges().iter().map(|e| e.id.clone()).collect();
    Ok(Piece {
        g,
        cob,
        h0,
        h1,
        vnames,
        enames,
    })
}

/// Restriction (or difference) map between cochain groups of two pieces.
fn restrict_map(
    from: &[(&Piece, bool)],
    to: &Piece,
    degree: usize,
) -> Result<(DirectSum, GroupHom), GgError> {
    let parts: Vec<PresentedAbelianGroup> = from
        .iter()
        .map(|(p, _)| if degree == 0 { p.cob.c0.group.clone() } else { p.cob.c1.group.clone() })
        .collect();
    let src = direct_sum(&parts)?;
    let dst = if degree == 0 { &to.cob.c0 } else { &to.cob.c1 };
    let mut total: Option<GroupHom> = None;
    for (k, (p, neg)) in from.iter().enumerate() {
        let (sds, snames, dnames, groups) = if degree == 0 {
            (&p.cob.c0, &p.vnames, &to.vnames, p.g.vertex_groups())
        } else {
            (&p.cob.c1, &p.enames, &to.enames, p.g.edge_groups())
        };
        let blocks = transfer(snames, dnames, groups, *neg)?;
        let m = DirectSum::hom_from_blocks(sds, dst, &blocks)?;
        let m = m.compose(&src.projections[k])?;
        total = Some(match total {
            None => m,
            Some(t) => t.add(&m)?,
        });
    }
    Ok((src, total.expect("at least one source")))
}

fn inclusion_sum(ps: &[&Piece]) -> Result<(PresentedAbelianGroup, GroupHom), GgError> {
    let ks: Vec<PresentedAbelianGroup> = ps.iter().map(|p| p.h0.group.clone()).collect();
    let cs: Vec<PresentedAbelianGroup> = ps.iter().map(|p| p.cob.c0.group.clone()).collect();
    let kd = direct_sum(&ks)?;
    let cd = direct_sum(&cs)?;
    let blocks: Vec<(usize, usize, GroupHom)> = ps
        .iter()
        .enumerate()
        .map(|(i, p)| (i, i, p.h0.inclusion.clone()))
        .collect();
    let inc = DirectSum::hom_from_blocks(&kd, &cd, &blocks)?;
    Ok((kd.group, inc))
}

/// Subgraph given by vertex and edge names.
pub type Cover<'a> = (&'a [&'a str], &'a [&'a str]);

pub fn mayer_vietoris(g: &GroupGraph, a0: Cover<'_>, a1: Cover<'_>) -> Result<SixTerm, GgError> {
    let all_v: BTreeSet<&str> = g.graph().vertices().iter().map(String::as_str).collect();
    let all_e: BTreeSet<&str> = g.graph().edges().iter().map(|e| e.id.as_str()).collect();
    let uv: BTreeSet<&str> = a0.0.iter().chain(a1.0).copied().collect();
    let ue: BTreeSet<&str> = a0.1.iter().chain(a1.1).copied().collect();
    if uv != all_v || ue != all_e {
        return Err(GgError::CoverMismatch(
            "the union of the two subgraphs is not the whole graph".into(),
        ));
    }
    let iv: Vec<&str> = a0.0.iter().filter(|v| a1.0.contains(v)).copied().collect();
    let ie: Vec<&str> = a0.1.iter().filter(|e| a1.1.contains(e)).copied().collect();
    let pa = piece(g.clone())?;
    let p0 = piece(g.restrict_by_name(a0.0, a0.1)?)?;
    let p1 = piece(g.restrict_by_name(a1.0, a1.1)?)?;
    let p01 = piece(g.restrict_by_name(&iv, &ie)?)?;

    // H⁰(A) → H⁰(A₀) ⊕ H⁰(A₁)
    let (h0_01sum, inc01) = inclusion_sum(&[&p0, &p1])?;
    let r0 = {
        let (_, m0) = restrict_map(&[(&pa, false)], &p0, 0)?;
        let (_, m1) = restrict_map(&[(&pa, false)], &p1, 0)?;
        let cd = direct_sum(&[p0.cob.c0.group.clone(), p1.cob.c0.group.clone()])?;
        cd.injections[0].compose(&m0)?.add(&cd.injections[1].compose(&m1)?)?
    };
    let m0 = factor_through(
        &pa.h0.group,
        &generator_images(&r0.compose(&pa.h0.inclusion)?),
        &inc01,
    )?;
    // H⁰(A₀) ⊕ H⁰(A₁) → H⁰(A₀∩A₁)
    let (_, d) = restrict_map(&[(&p0, false), (&p1, true)], &p01, 0)?;
    let d = d.retarget(inc01.codomain().clone(), p01.cob.c0.group.clone())?;
    let m1 = factor_through(
        &h0_01sum,
        &generator_images(&d.compose(&inc01)?),
        &p01.h0.inclusion,
    )?;
    // connecting map: extend by zero into A₀, apply ∂⁰ there, extend by zero to A
    let ext = {
        let blocks = transfer(&p01.vnames, &p0.vnames, p01.g.vertex_groups(), false)?;
        DirectSum::hom_from_blocks(&p01.cob.c0, &p0.cob.c0, &blocks)?
    };
    let push = {
        let blocks = transfer(&p0.enames, &pa.enames, p0.g.edge_groups(), false)?;
        DirectSum::hom_from_blocks(&p0.cob.c1, &pa.cob.c1, &blocks)?
    };
    let delta = push
        .compose(&p0.cob.map)?
        .compose(&ext)?
        .compose(&p01.h0.inclusion)?
        .retarget(p01.h0.group.clone(), pa.h1.clone())?;
    // H¹(A) → H¹(A₀) ⊕ H¹(A₁)
    let h1sum = direct_sum(&[p0.h1.clone(), p1.h1.clone()])?;
    let r1 = {
        let (_, m0) = restrict_map(&[(&pa, false)], &p0, 1)?;
        let (_, m1) = restrict_map(&[(&pa, false)], &p1, 1)?;
        let cd = direct_sum(&[p0.cob.c1.group.clone(), p1.cob.c1.group.clone()])?;
        cd.injections[0]
            .compose(&m0)?
            .add(&cd.injections[1].compose(&m1)?)?
            .retarget(pa.h1.clone(), h1sum.group.clone())?
    };
    let (_, d1) = restrict_map(&[(&p0, false), (&p1, true)], &p01, 1)?;
    let d1 = d1.retarget(h1sum.group.clone(), p01.h1.clone())?;

    let groups = vec![
        pa.h0.group.clone(),
        h0_01sum,
        p01.h0.group.clone(),
        pa.h1.clone(),
        h1sum.group,
        p01.h1.clone(),
    ];
    Ok(SixTerm::assemble(
        [
            "H0(A)",
            "H0(A0)+H0(A1)",
            "H0(A0nA1)",
            "H1(A)",
            "H1(A0)+H1(A1)",
            "H1(A0nA1)",
        ],
        groups,
        vec![m0, m1, delta, r1, d1],
    ))
}

/// Elementwise homs `F_a → G_a` commuting with restrictions.
#[derive(Clone, Debug)]
pub struct GroupGraphMorphism {
    pub vertex_maps: Vec<GroupHom>,
    pub edge_maps: Vec<GroupHom>,
}

impl GroupGraphMorphism {
    pub fn check(&self, f: &GroupGraph, g: &GroupGraph) -> Result<(), GgError> {
        if self.vertex_maps.len() != f.graph().n_vertices()
            || self.edge_maps.len() != f.graph().n_edges()
            || f.graph() != g.graph()
        {
            return Err(GgError::InvalidGraph("morphism over different graphs".into()));
        }
        for m in self.vertex_maps.iter().chain(&self.edge_maps) {
            m.check()?;
        }
        for (e, ed) in f.graph().edges().iter().enumerate() {
            for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
                let a = g.rho(e, side).compose(&self.vertex_maps[v])?;
                let b = self.edge_maps[e].compose(f.rho(e, side))?;
                if !a.agrees_with(&b) {
                    return Err(GgError::InvalidGraph(format!(
                        "morphism does not commute with rho at ({}, {})",
                        f.graph().vertices()[v],
                        ed.id
                    )));
                }
            }
        }
        Ok(())
    }

    fn assemble(&self, dom: &DirectSum, cod: &DirectSum, maps: &[GroupHom]) -> Result<GroupHom, GgError> {
        let blocks: Vec<(usize, usize, GroupHom)> =
            maps.iter().enumerate().map(|(i, m)| (i, i, m.clone())).collect();
        Ok(DirectSum::hom_from_blocks(dom, cod, &blocks)?)
    }
}

fn check_short_exact(alpha: &GroupHom, beta: &GroupHom, at: &str) -> Result<(), GgError> {
    let bad = |why: &str| GgError::NotShortExact(format!("{why} at {at}"));
    if !alpha.is_injective()? {
        return Err(bad("first map not injective"));
    }
    if !beta.is_surjective()? {
        return Err(bad("second map not surjective"));
    }
    if !exact_middle(alpha, beta)? {
        return Err(bad("not exact in the middle"));
    }
    Ok(())
}

pub fn long_exact_sequence(
    f: &GroupGraph,
    g: &GroupGraph,
    j: &GroupGraph,
    alpha: &GroupGraphMorphism,
    beta: &GroupGraphMorphism,
) -> Result<SixTerm, GgError> {
    alpha.check(f, g)?;
    beta.check(g, j)?;
    let gr = f.graph();
    for v in 0..gr.n_vertices() {
        check_short_exact(&alpha.vertex_maps[v], &beta.vertex_maps[v], &gr.vertices()[v])?;
    }
    for e in 0..gr.n_edges() {
        check_short_exact(&alpha.edge_maps[e], &beta.edge_maps[e], &gr.edges()[e].id)?;
    }
    let (pf, pg, pj) = (piece(f.clone())?, piece(g.clone())?, piece(j.clone())?);
    let a0 = alpha.assemble(&pf.cob.c0, &pg.cob.c0, &alpha.vertex_maps)?;
    let a1 = alpha.assemble(&pf.cob.c1, &pg.cob.c1, &alpha.edge_maps)?;
    let b0 = beta.assemble(&pg.cob.c0, &pj.cob.c0, &beta.vertex_maps)?;
    let b1 = beta.assemble(&pg.cob.c1, &pj.cob.c1, &beta.edge_maps)?;

    let m0 = factor_through(
        &pf.h0.group,
        &generator_images(&a0.compose(&pf.h0.inclusion)?),
        &pg.h0.inclusion,
    )?;
    let m1 = factor_through(
        &pg.h0.group,
        &generator_images(&b0.compose(&pg.h0.inclusion)?),
        &pj.h0.inclusion,
    )?;
    // connecting map: lift through β⁰ on the free level, apply ∂⁰, pull back through α¹
    let free_j0 = PresentedAbelianGroup::new(
        pj.cob.c0.group.table().cloned(),
        pj.cob.c0.group.cont(),
        pj.cob.c0.group.disc(),
        vec![],
        vec![],
    )?;
    let ids = generator_images(&GroupHom::identity(&free_j0));
    let lift = factor_through(&free_j0, &ids, &b0)?;
    let on_cocycles = pg.cob.map.compose(&lift)?.compose(&pj.h0.inclusion)?;
    let delta = factor_through(&pj.h0.group, &generator_images(&on_cocycles), &a1)?
        .retarget(pj.h0.group.clone(), pf.h1.clone())?;
    let m3 = a1.retarget(pf.h1.clone(), pg.h1.clone())?;
    let m4 = b1.retarget(pg.h1.clone(), pj.h1.clone())?;
    let groups = vec![
        pf.h0.group.clone(),
        pg.h0.group.clone(),
        pj.h0.group.clone(),
        pf.h1.clone(),
        pg.h1.clone(),
        pj.h1.clone(),
    ];
    Ok(SixTerm::assemble(
        ["H0(F)", "H0(G)", "H0(J)", "H1(F)", "H1(G)", "H1(J)"],
        groups,
        vec![m0, m1, delta, m3, m4],
    ))
}
