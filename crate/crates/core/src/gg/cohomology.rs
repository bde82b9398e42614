//! The cochain complex `C⁰ → C¹ → C²` of an abelian group-graph.
//!
//! One-cocycles are identified with `∏_e G_e` through the tail incidence, so
//! `∂⁰(g)_e = ρ_head(g_head) − ρ_tail(g_tail)`.

use crate::abgroup::{
    classify, cokernel, direct_sum, kernel, DirectSum, GroupError, GroupHom, NormalFormReport,
    PresentedAbelianGroup,
};

use super::{GgError, GroupGraph};

/// `∂⁰ : ⊕_v G_v → ⊕_e G_e` with the direct sums it lives between.
#[derive(Clone, Debug)]
pub struct Coboundary {
    pub map: GroupHom,
    pub c0: DirectSum,
    pub c1: DirectSum,
}

pub fn coboundary0(g: &GroupGraph) -> Result<Coboundary, GgError> {
    let c0 = direct_sum(g.vertex_groups())?;
    let c1 = direct_sum(g.edge_groups())?;
    let mut blocks = Vec::new();
    for (e, ed) in g.graph().edges().iter().enumerate() {
        blocks.push((e, ed.head, g.rho(e, 1).clone()));
        blocks.push((e, ed.tail, g.rho(e, 0).neg()));
    }
    let map = DirectSum::hom_from_blocks(&c0, &c1, &blocks)?;
    Ok(Coboundary { map, c0, c1 })
}

/// The unreduced complex: `C¹` carries one copy of `G_e` per incidence
/// (tail copy first), `C² = ⊕_e G_e`, and `∂¹` adds the two copies.
#[derive(Clone, Debug)]
pub struct FullComplex {
    pub d0: GroupHom,
    pub d1: GroupHom,
}

pub fn coboundary_full(g: &GroupGraph) -> Result<FullComplex, GgError> {
    let c0 = direct_sum(g.vertex_groups())?;
    let doubled: Vec<PresentedAbelianGroup> = g
        .edge_groups()
        .iter()
        .flat_map(|x| [x.clone(), x.clone()])
        .collect();
    let c1 = direct_sum(&doubled)?;
    let c2 = direct_sum(g.edge_groups())?;
    let mut b0 = Vec::new();
    let mut b1 = Vec::new();
    for (e, ed) in g.graph().edges().iter().enumerate() {
        let (t, h) = (g.rho(e, 0), g.rho(e, 1));
        b0.push((2 * e, ed.head, h.clone()));
        b0.push((2 * e, ed.tail, t.neg()));
        b0.push((2 * e + 1, ed.tail, t.clone()));
        b0.push((2 * e + 1, ed.head, h.neg()));
        let id = GroupHom::identity(g.edge_group(e));
        b1.push((e, 2 * e, id.clone()));
        b1.push((e, 2 * e + 1, id));
    }
    Ok(FullComplex {
        d0: DirectSum::hom_from_blocks(&c0, &c1, &b0)?,
        d1: DirectSum::hom_from_blocks(&c1, &c2, &b1)?,
    })
}

pub fn h0(g: &GroupGraph) -> Result<PresentedAbelianGroup, GgError> {
    Ok(kernel(&coboundary0(g)?.map)?.group)
}

pub fn h1(g: &GroupGraph) -> Result<PresentedAbelianGroup, GgError> {
    Ok(cokernel(&coboundary0(g)?.map)?)
}

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub coboundary: Coboundary,
    /// Absent when the kernel is not of finite type (atoms in the kernel).
    pub h0: Result<PresentedAbelianGroup, GroupError>,
    pub h1: PresentedAbelianGroup,
    pub h1_report: NormalFormReport,
}

pub fn cohomology(g: &GroupGraph) -> Result<CohomologyResult, GgError> {
    let coboundary = coboundary0(g)?;
    let h0 = kernel(&coboundary.map).map(|k| k.group);
    let h1 = cokernel(&coboundary.map)?;
    let h1_report = classify(&h1);
    Ok(CohomologyResult {
        coboundary,
        h0,
        h1,
        h1_report,
    })
}

/// H¹ of the restriction to each connected component, keyed by vertex names.
pub fn h1_components(g: &GroupGraph) -> Result<Vec<(Vec<String>, PresentedAbelianGroup)>, GgError> {
    g.graph()
        .components()
        .into_iter()
        .map(|(vs, es)| {
            let names = vs.iter().map(|&v| g.graph().vertices()[v].clone()).collect();
            Ok((names, h1(&g.restrict(&vs, &es)?)?))
        })
        .collect()
}
