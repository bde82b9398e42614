//! The symmetry, exponential and disconnected group-graphs over the red graph.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::abgroup::{
    cokernel_with_projection, Atom, AtomKind, AtomSlot, Cardinality, CyclicOrder, GroupHom,
    PresentedAbelianGroup, Relation,
};
use crate::exactnum::{smith_normal_form, IntMatrix, Scalar};
use crate::gg::{Graph, GroupGraph, GroupGraphMorphism};

use super::graphs::{vertex_type, CutGraph, Sub};
use super::input::{HolonomyClass, TypeTag};
use super::model::Foliation;
use super::{FolError, TAU};

/// `gcd(p, r mod p)`: the order of `Dis_s` for a resonant normalizable point.
pub fn r1_torsion(p: u64, r: i64) -> u64 {
    let r = r.rem_euclid(p.max(1) as i64) as u64;
    p.gcd(&r)
}

/// Relation matrix of `C(h)/⟨h⟩` in the generators `x = exp(X/m)` and a lift
/// `y` of the image of β: `k·y = 0`, `h = m·x + a·y`.
fn r0_relations(p: u64, r: i64, m: u64, k: u64) -> IntMatrix {
    let a = r.rem_euclid(p as i64) / (p / k) as i64;
    IntMatrix::from_rows(&[vec![0i64, k as i64], vec![m as i64, a]])
}

/// Invariant factors of `C(h)/⟨h⟩` for a resonant non-normalizable point.
pub fn r0_invariants(p: u64, r: i64, m: u64, k: u64) -> Vec<BigInt> {
    if p == 0 || k == 0 || m == 0 || p % k != 0 {
        return Vec::new();
    }
    let mut inv = smith_normal_form(&r0_relations(p, r, m, k)).invariants();
    for x in &mut inv {
        *x = num_traits::Signed::abs(x);
    }
    inv
}

/// Model of a red component's symmetry group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexModel {
    /// `val_Σ ≥ 3`, non-abelian holonomy with centralizer `Z/n`.
    NonAbelian { n: u64 },
    /// `val_Σ ≥ 3`, abelian holonomy: `C(H_D) = C(h)` for the common type.
    Abelian(TypeTag),
    /// `val_Σ ≤ 2`: `C(h_{D,s})/⟨h_{D,s}⟩` presented at the first singular point.
    Cyclic { tag: TypeTag, point: usize },
}

pub fn vertex_model(f: &Foliation, c: usize) -> Result<VertexModel, FolError> {
    let comp = &f.comps[c];
    match &comp.class {
        Some(HolonomyClass::Nonabelian { centralizer }) => {
            let n = centralizer.iter().copied().filter(|&n| n != 1).fold(1, |a, b| a * b);
            Ok(VertexModel::NonAbelian { n })
        }
        Some(HolonomyClass::AbelianInfinite) => {
            let tag = vertex_type(f, c)
                .ok_or_else(|| FolError::NonAbelianRedSym(comp.id.clone()))?
                .clone();
            if f.val_sigma(c) >= 3 {
                Ok(VertexModel::Abelian(tag))
            } else {
                let point = *comp.sigma_points.first().expect("non-periodic point");
                Ok(VertexModel::Cyclic { tag, point })
            }
        }
        _ => Err(FolError::NonAbelianRedSym(comp.id.clone())),
    }
}

struct Builder<'a> {
    f: &'a Foliation,
    tau: Scalar,
}

fn int(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

fn rat(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(BigRational::new(int(n), int(d)))
}

fn hom(
    dom: &PresentedAbelianGroup,
    cod: &PresentedAbelianGroup,
    cc: Vec<Vec<Scalar>>,
    dd: Vec<Vec<BigInt>>,
    dc: Vec<Vec<Scalar>>,
    atoms: Vec<Option<usize>>,
) -> Result<GroupHom, FolError> {
    let shape = |rows: usize, cols: usize, m: Vec<Vec<Scalar>>| {
        if m.is_empty() {
            vec![vec![Scalar::zero(); cols]; rows]
        } else {
            m
        }
    };
    let cc = shape(cod.cont(), dom.cont(), cc);
    let dc = shape(cod.cont(), dom.disc(), dc);
    let dd = if dd.is_empty() {
        vec![vec![BigInt::zero(); dom.disc()]; cod.disc()]
    } else {
        dd
    };
    Ok(GroupHom::new(dom.clone(), cod.clone(), cc, dd, dc, atoms)?)
}

fn atom(name: &str) -> Atom {
    Atom {
        name: name.to_string(),
        kind: AtomKind::DisconnectedU1,
        cardinality: Cardinality::PossiblyUncountable,
    }
}

impl Builder<'_> {
    fn new(f: &Foliation) -> Builder<'_> {
        let tau = Scalar::symbol(f.table(), TAU).expect("tau is always declared");
        Builder { f, tau }
    }

    fn tabled(&self, g: PresentedAbelianGroup) -> PresentedAbelianGroup {
        g.with_table(Some(self.f.table().clone()))
    }

    fn group(&self, cont: usize, disc: usize, atoms: Vec<AtomSlot>, rels: Vec<Relation>) -> PresentedAbelianGroup {
        PresentedAbelianGroup::new(Some(self.f.table().clone()), cont, disc, atoms, rels)
            .expect("well-formed presentation")
    }

    /// `C/τ(Z + cZ)`.
    fn l1_group(&self, c: &Scalar) -> PresentedAbelianGroup {
        self.tabled(PresentedAbelianGroup::complex_mod_lattice(&[
            self.tau.clone(),
            &self.tau * c,
        ]))
    }

    fn c_star(&self) -> PresentedAbelianGroup {
        self.tabled(PresentedAbelianGroup::complex_mod_lattice(&[self.tau.clone()]))
    }

    /// `C/Z ⊕ Z/g`, the canonical form of `(C ⊕ Z/p)/⟨(1, r)⟩`.
    fn r1_canonical(&self, g: u64) -> PresentedAbelianGroup {
        self.group(
            1,
            1,
            vec![],
            vec![
                Relation::lattice(vec![Scalar::one()], vec![int(0)]),
                Relation::lattice(vec![Scalar::zero()], vec![int(g)]),
            ],
        )
    }

    /// `C ⊕ Z/p` in flow-time and `ℓ`-power coordinates.
    fn r1_ambient(&self, p: u64) -> PresentedAbelianGroup {
        self.group(1, 1, vec![], vec![Relation::lattice(vec![Scalar::zero()], vec![int(p)])])
    }

    fn r0_canonical(&self, inv: &[BigInt]) -> PresentedAbelianGroup {
        let k = inv.len();
        let rels = inv
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut v = vec![int(0); k];
                v[i] = d.clone();
                Relation::lattice(vec![], v)
            })
            .collect();
        self.group(0, k, vec![], rels)
    }

    /// `Z·x ⊕ (Z/k)·y`.
    fn r0_ambient(&self, k: u64) -> PresentedAbelianGroup {
        self.group(0, 2, vec![], vec![Relation::lattice(vec![], vec![int(0), int(k)])])
    }

    fn atom_group(&self, name: &str, quotient: bool) -> PresentedAbelianGroup {
        let slot = AtomSlot {
            atom: atom(name),
            mod_cyclic: quotient.then_some(CyclicOrder::Infinite),
        };
        self.group(0, 0, vec![slot], vec![])
    }

    fn cyclic(&self, n: u64) -> PresentedAbelianGroup {
        self.group(0, 1, vec![], vec![Relation::lattice(vec![], vec![int(n)])])
    }

    fn trivial(&self) -> PresentedAbelianGroup {
        self.tabled(PresentedAbelianGroup::trivial())
    }

    fn cs(&self, p: usize, c: usize) -> Result<Scalar, FolError> {
        self.f.cs_at(p, c).ok_or_else(|| {
            FolError::Inconsistent(format!(
                "no CS index at {}@{}",
                self.f.points[p].id, self.f.comps[c].id
            ))
        })
    }

    /// SNF column transform taking `C(h)` coordinates to the canonical form.
    fn r0_transform(&self, tag: &TypeTag) -> (Vec<BigInt>, IntMatrix) {
        let TypeTag::R0 { p, r, m, beta_image_order: k } = *tag else {
            unreachable!("R0 tag")
        };
        let s = smith_normal_form(&r0_relations(p, r, m, k));
        let inv = s.invariants().iter().map(num_traits::Signed::abs).collect();
        (inv, s.v)
    }

    // ---- symmetry groups

    fn sym_edge(&self, p: usize) -> Result<PresentedAbelianGroup, FolError> {
        let pref = self.f.preferred(p);
        Ok(match self.f.tag(p, pref) {
            TypeTag::L1 => self.l1_group(&self.cs(p, pref)?),
            TypeTag::R1 { p: q, r } => self.r1_canonical(r1_torsion(*q, *r)),
            t @ TypeTag::R0 { .. } => self.r0_canonical(&self.r0_transform(t).0),
            TypeTag::L0 { atom } => self.atom_group(atom, true),
            TypeTag::P { .. } => {
                return Err(FolError::NonAbelianRedSym(self.f.points[p].id.clone()));
            }
        })
    }

    fn sym_vertex(&self, c: usize, m: &VertexModel) -> Result<PresentedAbelianGroup, FolError> {
        Ok(match m {
            VertexModel::NonAbelian { n } => self.cyclic(*n),
            VertexModel::Abelian(t) => match t {
                TypeTag::L1 => self.c_star(),
                TypeTag::R1 { p, .. } => self.r1_ambient(*p),
                TypeTag::R0 { beta_image_order, .. } => self.r0_ambient(*beta_image_order),
                TypeTag::L0 { atom } => self.atom_group(atom, false),
                TypeTag::P { .. } => unreachable!("non-periodic type"),
            },
            VertexModel::Cyclic { tag, point } => match tag {
                TypeTag::L1 => self.l1_group(&self.cs(*point, c)?),
                TypeTag::R1 { p, r } => self.r1_canonical(r1_torsion(*p, *r)),
                t @ TypeTag::R0 { .. } => self.r0_canonical(&self.r0_transform(t).0),
                TypeTag::L0 { atom } => self.atom_group(atom, true),
                TypeTag::P { .. } => unreachable!("non-periodic type"),
            },
        })
    }

    /// `ρ_D^s`: inclusion of `C(H_D)` into `C(h_{D,s})` followed by the quotient,
    /// then the change of presentation to the preferred side.
    fn sym_rho(
        &self,
        c: usize,
        m: &VertexModel,
        p: usize,
        dom: &PresentedAbelianGroup,
        cod: &PresentedAbelianGroup,
    ) -> Result<GroupHom, FolError> {
        let pref = self.f.preferred(p);
        let tag = self.f.tag(p, c);
        match tag {
            TypeTag::L1 => {
                let k = if c == pref {
                    Scalar::one()
                } else {
                    -&self.cs(p, pref)?
                };
                match m {
                    VertexModel::NonAbelian { n } => {
                        let img = &(&self.tau * &k) * &rat(1, *n as i64);
                        hom(dom, cod, vec![], vec![], vec![vec![img]], vec![])
                    }
                    _ => hom(dom, cod, vec![vec![k]], vec![], vec![], vec![]),
                }
            }
            TypeTag::R1 { p: q, r } => {
                let g = r1_torsion(*q, *r);
                let (pp, rr) = (*q / g, r.rem_euclid(*q as i64) as u64 / g);
                // x with r'·x ≡ −1 (mod p'), so that h = (1, r) maps to zero
                let x = if pp == 1 {
                    0
                } else {
                    let inv = (1..pp).find(|y| (rr * y) % pp == 1).expect("r' is a unit mod p'");
                    (pp - inv) as i64
                };
                let c0 = rat(x, *q as i64);
                match m {
                    VertexModel::NonAbelian { n } => {
                        let j = (*q / *n) as i64;
                        hom(
                            dom,
                            cod,
                            vec![],
                            vec![vec![int(j)]],
                            vec![vec![&c0 * &Scalar::from_int(j)]],
                            vec![],
                        )
                    }
                    VertexModel::Abelian(_) => hom(
                        dom,
                        cod,
                        vec![vec![rat(1, pp as i64)]],
                        vec![vec![int(1)]],
                        vec![vec![c0]],
                        vec![],
                    ),
                    VertexModel::Cyclic { .. } => Ok(GroupHom::identity(dom).retarget(dom.clone(), cod.clone())?),
                }
            }
            t @ TypeTag::R0 { beta_image_order: k, .. } => {
                let (_, v) = self.r0_transform(t);
                match m {
                    VertexModel::NonAbelian { n } => {
                        let j = int(*k / *n);
                        let dd = (0..v.cols()).map(|col| vec![&j * &v.row(1)[col]]).collect();
                        hom(dom, cod, vec![], dd, vec![], vec![])
                    }
                    VertexModel::Abelian(_) => {
                        let dd = v.transpose().row_vecs();
                        hom(dom, cod, vec![], dd, vec![], vec![])
                    }
                    VertexModel::Cyclic { .. } => Ok(GroupHom::identity(dom).retarget(dom.clone(), cod.clone())?),
                }
            }
            TypeTag::L0 { .. } => match m {
                VertexModel::NonAbelian { .. } => Ok(GroupHom::zero(dom, cod)),
                _ => hom(dom, cod, vec![], vec![], vec![], vec![Some(0)]),
            },
            TypeTag::P { .. } => Err(FolError::NonAbelianRedSym(self.f.points[p].id.clone())),
        }
    }

    // ---- exponential groups: (group, inclusion into Sym)

    fn exp_of(&self, tag: Option<&TypeTag>, sym: &PresentedAbelianGroup, ambient: bool) -> Result<(PresentedAbelianGroup, GroupHom), FolError> {
        match tag {
            Some(TypeTag::L1) => Ok((sym.clone(), GroupHom::identity(sym))),
            Some(TypeTag::R1 { .. }) => {
                let e = if ambient {
                    self.tabled(PresentedAbelianGroup::complex_line())
                } else {
                    self.tabled(PresentedAbelianGroup::complex_mod_lattice(&[Scalar::one()]))
                };
                let inc = hom(&e, sym, vec![vec![Scalar::one()]], vec![], vec![], vec![])?;
                Ok((e, inc))
            }
            _ => {
                let t = self.trivial();
                let inc = GroupHom::zero(&t, sym);
                Ok((t, inc))
            }
        }
    }

    fn exp_rho(
        &self,
        m: &VertexModel,
        p: usize,
        c: usize,
        sym_rho: &GroupHom,
        dom: &PresentedAbelianGroup,
        cod: &PresentedAbelianGroup,
    ) -> Result<GroupHom, FolError> {
        if dom.cont() == 0 || cod.cont() == 0 {
            return Ok(GroupHom::zero(dom, cod));
        }
        match (self.f.tag(p, c), m) {
            (TypeTag::L1, _) => Ok(sym_rho.retarget(dom.clone(), cod.clone())?),
            (TypeTag::R1 { p: q, r }, VertexModel::Abelian(_)) => {
                let pp = *q / r1_torsion(*q, *r);
                hom(dom, cod, vec![vec![rat(1, pp as i64)]], vec![], vec![], vec![])
            }
            (TypeTag::R1 { .. }, _) => hom(dom, cod, vec![vec![Scalar::one()]], vec![], vec![], vec![]),
            _ => Ok(GroupHom::zero(dom, cod)),
        }
    }
}

/// Sym, Exp and Dis over a red subgraph, with `Exp → Sym → Dis`.
#[derive(Clone, Debug)]
pub struct RedGroupGraphs {
    pub sub: Sub,
    pub sym: GroupGraph,
    pub exp: GroupGraph,
    pub dis: GroupGraph,
    pub inclusion: GroupGraphMorphism,
    pub projection: GroupGraphMorphism,
}

fn sub_graph(cg: &CutGraph, sub: &Sub) -> Result<Graph, FolError> {
    Ok(cg.graph.subgraph(&sub.vertices, &sub.edges)?)
}

pub fn build_red_group_graphs(f: &Foliation, cg: &CutGraph, sub: &Sub) -> Result<RedGroupGraphs, FolError> {
    let b = Builder::new(f);
    let graph = sub_graph(cg, sub)?;
    let mut verts: Vec<usize> = sub.vertices.clone();
    verts.sort_unstable();
    let mut edges: Vec<usize> = sub.edges.clone();
    edges.sort_unstable();
    let comps: Vec<usize> = verts.iter().map(|&v| cg.comp[v]).collect();
    let points: Vec<usize> = edges.iter().map(|&e| cg.point[e]).collect();

    let mut models = Vec::new();
    let (mut sym_v, mut exp_v, mut inc_v) = (Vec::new(), Vec::new(), Vec::new());
    for &c in &comps {
        let m = vertex_model(f, c)?;
        let s = b.sym_vertex(c, &m)?;
        let tag = match &m {
            VertexModel::NonAbelian { .. } => None,
            VertexModel::Abelian(t) | VertexModel::Cyclic { tag: t, .. } => Some(t),
        };
        let (e, i) = b.exp_of(tag, &s, matches!(m, VertexModel::Abelian(_)))?;
        if let (VertexModel::Abelian(TypeTag::L1), true) = (&m, e.cont() == 1) {
            // Exp_D = C(H_D) = C* for a linearizable abelian component
        }
        models.push(m);
        sym_v.push(s);
        exp_v.push(e);
        inc_v.push(i);
    }
    let (mut sym_e, mut exp_e, mut inc_e) = (Vec::new(), Vec::new(), Vec::new());
    for &p in &points {
        let s = b.sym_edge(p)?;
        let tag = f.tag(p, f.preferred(p));
        let (e, i) = b.exp_of(Some(tag), &s, false)?;
        sym_e.push(s);
        exp_e.push(e);
        inc_e.push(i);
    }
    let (mut sym_rho, mut exp_rho) = (Vec::new(), Vec::new());
    for (k, ed) in graph.edges().iter().enumerate() {
        let p = points[k];
        let mut srow = Vec::new();
        let mut erow = Vec::new();
        for v in [ed.tail, ed.head] {
            let c = comps[v];
            let sr = b.sym_rho(c, &models[v], p, &sym_v[v], &sym_e[k])?;
            let er = b.exp_rho(&models[v], p, c, &sr, &exp_v[v], &exp_e[k])?;
            srow.push(sr);
            erow.push(er);
        }
        sym_rho.push([srow[0].clone(), srow[1].clone()]);
        exp_rho.push([erow[0].clone(), erow[1].clone()]);
    }
    let sym = GroupGraph::new(graph.clone(), sym_v, sym_e, sym_rho.clone())?;
    let exp = GroupGraph::new(graph.clone(), exp_v, exp_e, exp_rho)?;
    let inclusion = GroupGraphMorphism {
        vertex_maps: inc_v,
        edge_maps: inc_e,
    };
    inclusion.check(&exp, &sym)?;

    let mut dis_v = Vec::new();
    let mut proj_v = Vec::new();
    for i in &inclusion.vertex_maps {
        let (q, pr) = cokernel_with_projection(i)?;
        dis_v.push(q);
        proj_v.push(pr);
    }
    let mut dis_e = Vec::new();
    let mut proj_e = Vec::new();
    for i in &inclusion.edge_maps {
        let (q, pr) = cokernel_with_projection(i)?;
        dis_e.push(q);
        proj_e.push(pr);
    }
    let dis_rho = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(k, ed)| -> Result<[GroupHom; 2], FolError> {
            let t = sym_rho[k][0].retarget(dis_v[ed.tail].clone(), dis_e[k].clone())?;
            let h = sym_rho[k][1].retarget(dis_v[ed.head].clone(), dis_e[k].clone())?;
            Ok([t, h])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dis = GroupGraph::new(graph, dis_v, dis_e, dis_rho)?;
    let projection = GroupGraphMorphism {
        vertex_maps: proj_v,
        edge_maps: proj_e,
    };
    Ok(RedGroupGraphs {
        sub: Sub {
            vertices: verts,
            edges,
        },
        sym,
        exp,
        dis,
        inclusion,
        projection,
    })
}

pub fn build_sym_graph(f: &Foliation, cg: &CutGraph, red: &Sub) -> Result<GroupGraph, FolError> {
    Ok(build_red_group_graphs(f, cg, red)?.sym)
}

pub fn build_exp_graph(f: &Foliation, cg: &CutGraph, red: &Sub) -> Result<(GroupGraph, GroupGraphMorphism), FolError> {
    let r = build_red_group_graphs(f, cg, red)?;
    Ok((r.exp, r.inclusion))
}

pub fn build_dis_graph(f: &Foliation, cg: &CutGraph, red: &Sub) -> Result<GroupGraph, FolError> {
    Ok(build_red_group_graphs(f, cg, red)?.dis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_torsion_values() {
        assert_eq!(r1_torsion(3, 1), 1);
        assert_eq!(r1_torsion(6, 4), 2);
        assert_eq!(r1_torsion(4, 0), 4);
        assert_eq!(r1_torsion(5, -5), 5);
    }

    #[test]
    fn r0_split_model() {
        // k = 1, r = 0: C(h) = Z·x, h = x^m
        assert_eq!(r0_invariants(3, 0, 2, 1), vec![int(1), int(2)]);
        // k = p: C(h)/⟨h⟩ of order k·m
        let inv = r0_invariants(4, 2, 3, 4);
        let order: BigInt = inv.iter().product();
        assert_eq!(order, int(12));
    }
}
