//! Homomorphisms between presented groups; kernels, cokernels and direct sums.

use num_bigint::BigInt;
use num_traits::Zero;

use super::classify::classify;
use super::span::{unit_int, unit_vec, Elem, Span};
use super::{same_table, GroupError, PresentedAbelianGroup, RelKind, Relation};
use crate::exactnum::{scalar_nullspace, scalar_solve, Scalar};

/// Block matrix hom. Continuous generators never map to discrete ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: PresentedAbelianGroup,
    codomain: PresentedAbelianGroup,
    /// `[codomain.cont][domain.cont]`
    cc: Vec<Vec<Scalar>>,
    /// `[codomain.disc][domain.disc]`
    dd: Vec<Vec<BigInt>>,
    /// `[codomain.cont][domain.disc]`
    dc: Vec<Vec<Scalar>>,
    /// Codomain atom index receiving each domain atom, if any.
    atom_map: Vec<Option<usize>>,
}

fn zeros_s(r: usize, c: usize) -> Vec<Vec<Scalar>> {
    vec![vec![Scalar::zero(); c]; r]
}

fn zeros_i(r: usize, c: usize) -> Vec<Vec<BigInt>> {
    vec![vec![BigInt::zero(); c]; r]
}

fn check_shape<T>(m: &[Vec<T>], r: usize, c: usize, what: &str) -> Result<(), GroupError> {
    if m.len() != r || m.iter().any(|row| row.len() != c) {
        return Err(GroupError::Shape(format!("{what} block must be {r}x{c}")));
    }
    Ok(())
}

impl GroupHom {
    pub fn new(
        domain: PresentedAbelianGroup,
        codomain: PresentedAbelianGroup,
        cc: Vec<Vec<Scalar>>,
        dd: Vec<Vec<BigInt>>,
        dc: Vec<Vec<Scalar>>,
        atom_map: Vec<Option<usize>>,
    ) -> Result<Self, GroupError> {
        if !same_table(domain.table(), codomain.table()) {
            return Err(GroupError::SymbolTableMismatch);
        }
        check_shape(&cc, codomain.cont(), domain.cont(), "cont->cont")?;
        check_shape(&dd, codomain.disc(), domain.disc(), "disc->disc")?;
        check_shape(&dc, codomain.cont(), domain.disc(), "disc->cont")?;
        if atom_map.len() != domain.atoms().len() {
            return Err(GroupError::Shape("atom map length".into()));
        }
        for (i, t) in atom_map.iter().enumerate() {
            let Some(j) = *t else { continue };
            let src = &domain.atoms()[i];
            let dst = codomain
                .atoms()
                .get(j)
                .ok_or_else(|| GroupError::Shape(format!("atom target {j} out of range")))?;
            if src.atom != dst.atom {
                return Err(GroupError::UnsupportedAtomMap(format!(
                    "{} cannot map to {}",
                    src.label(),
                    dst.label()
                )));
            }
            if src.mod_cyclic.is_some() && src.mod_cyclic != dst.mod_cyclic {
                return Err(GroupError::UnsupportedAtomMap(format!(
                    "{} -> {} is neither identity nor a cyclic quotient",
                    src.label(),
                    dst.label()
                )));
            }
        }
        for row in cc.iter().chain(dc.iter()) {
            for s in row {
                if !same_table(s.table(), codomain.table().or(domain.table())) {
                    return Err(GroupError::SymbolTableMismatch);
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            cc,
            dd,
            dc,
            atom_map,
        })
    }

    pub fn zero(domain: &PresentedAbelianGroup, codomain: &PresentedAbelianGroup) -> Self {
        GroupHom {
            cc: zeros_s(codomain.cont(), domain.cont()),
            dd: zeros_i(codomain.disc(), domain.disc()),
            dc: zeros_s(codomain.cont(), domain.disc()),
            atom_map: vec![None; domain.atoms().len()],
            domain: domain.clone(),
            codomain: codomain.clone(),
        }
    }

    pub fn identity(g: &PresentedAbelianGroup) -> Self {
        GroupHom {
            cc: (0..g.cont()).map(|i| unit_vec(g.cont(), i)).collect(),
            dd: (0..g.disc()).map(|i| unit_int(g.disc(), i)).collect(),
            dc: zeros_s(g.cont(), g.disc()),
            atom_map: (0..g.atoms().len()).map(Some).collect(),
            domain: g.clone(),
            codomain: g.clone(),
        }
    }

    /// Same matrices, different (compatible) groups at either end.
    pub fn retarget(
        &self,
        domain: PresentedAbelianGroup,
        codomain: PresentedAbelianGroup,
    ) -> Result<Self, GroupError> {
        GroupHom::new(
            domain,
            codomain,
            self.cc.clone(),
            self.dd.clone(),
            self.dc.clone(),
            self.atom_map.clone(),
        )
    }

    pub fn domain(&self) -> &PresentedAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &PresentedAbelianGroup {
        &self.codomain
    }

    pub fn cc(&self) -> &[Vec<Scalar>] {
        &self.cc
    }

    pub fn dd(&self) -> &[Vec<BigInt>] {
        &self.dd
    }

    pub fn dc(&self) -> &[Vec<Scalar>] {
        &self.dc
    }

    pub fn atom_map(&self) -> &[Option<usize>] {
        &self.atom_map
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        let cont = (0..self.codomain.cont())
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, v) in x.cont.iter().enumerate() {
                    if !v.is_zero() && !self.cc[i][j].is_zero() {
                        acc = &acc + &(&self.cc[i][j] * v);
                    }
                }
                for (k, n) in x.disc.iter().enumerate() {
                    if !n.is_zero() && !self.dc[i][k].is_zero() {
                        acc = &acc + &(&self.dc[i][k] * &Scalar::from_bigint(n.clone()));
                    }
                }
                acc
            })
            .collect();
        let disc = (0..self.codomain.disc())
            .map(|i| self.dd[i].iter().zip(&x.disc).map(|(a, b)| a * b).sum())
            .collect();
        Elem { cont, disc }
    }

    fn cc_col(&self, j: usize) -> Vec<Scalar> {
        self.cc.iter().map(|r| r[j].clone()).collect()
    }

    /// Image of the `k`-th discrete generator.
    fn disc_image(&self, k: usize) -> Elem {
        Elem {
            cont: self.dc.iter().map(|r| r[k].clone()).collect(),
            disc: self.dd.iter().map(|r| r[k].clone()).collect(),
        }
    }

    /// Confirms every domain relation maps into the codomain relation subgroup.
    pub fn check(&self) -> Result<(), GroupError> {
        let span = self.codomain.relation_span();
        for (index, r) in self.domain.relations().iter().enumerate() {
            let ok = match r.kind {
                RelKind::Line => {
                    let img = self.apply(&Elem {
                        cont: r.cont.clone(),
                        disc: vec![BigInt::zero(); self.domain.disc()],
                    });
                    span.contains_line(&img.cont)
                }
                RelKind::Lattice => span.contains(&self.apply(&r.elem())),
            };
            if !ok {
                return Err(GroupError::RelationNotPreserved { index });
            }
        }
        Ok(())
    }

    pub fn compose(&self, f: &GroupHom) -> Result<GroupHom, GroupError> {
        let g = self;
        if f.codomain.cont() != g.domain.cont() || f.codomain.disc() != g.domain.disc() {
            return Err(GroupError::Shape("composition of non-composable homs".into()));
        }
        let (a, b) = (f.domain.cont(), f.domain.disc());
        let (c, d) = (g.codomain.cont(), g.codomain.disc());
        let mid_c = g.domain.cont();
        let mid_d = g.domain.disc();
        let mut cc = zeros_s(c, a);
        let mut dc = zeros_s(c, b);
        let mut dd = zeros_i(d, b);
        for i in 0..c {
            for j in 0..a {
                let mut acc = Scalar::zero();
                for k in 0..mid_c {
                    if !g.cc[i][k].is_zero() && !f.cc[k][j].is_zero() {
                        acc = &acc + &(&g.cc[i][k] * &f.cc[k][j]);
                    }
                }
                cc[i][j] = acc;
            }
            for j in 0..b {
                let mut acc = Scalar::zero();
                for k in 0..mid_c {
                    if !g.cc[i][k].is_zero() && !f.dc[k][j].is_zero() {
                        acc = &acc + &(&g.cc[i][k] * &f.dc[k][j]);
                    }
                }
                for k in 0..mid_d {
                    if !g.dc[i][k].is_zero() && !f.dd[k][j].is_zero() {
                        acc = &acc + &(&g.dc[i][k] * &Scalar::from_bigint(f.dd[k][j].clone()));
                    }
                }
                dc[i][j] = acc;
            }
        }
        for i in 0..d {
            for j in 0..b {
                dd[i][j] = (0..mid_d).map(|k| &g.dd[i][k] * &f.dd[k][j]).sum();
            }
        }
        let atom_map = f
            .atom_map
            .iter()
            .map(|t| t.and_then(|k| g.atom_map.get(k).copied().flatten()))
            .collect();
        GroupHom::new(
            f.domain.clone(),
            g.codomain.clone(),
            cc,
            dd,
            dc,
            atom_map,
        )
    }

    pub fn neg(&self) -> GroupHom {
        let mut h = self.clone();
        for row in h.cc.iter_mut().chain(h.dc.iter_mut()) {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        for row in h.dd.iter_mut() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        h
    }

    /// Pointwise sum. An atom may be mapped by at most one summand.
    pub fn add(&self, o: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.cc.len() != o.cc.len()
            || self.dd.len() != o.dd.len()
            || self.domain.cont() != o.domain.cont()
            || self.domain.disc() != o.domain.disc()
        {
            return Err(GroupError::Shape("sum of homs with different shapes".into()));
        }
        let mut h = self.clone();
        for (r, s) in h.cc.iter_mut().zip(&o.cc) {
            for (x, y) in r.iter_mut().zip(s) {
                *x = &*x + y;
            }
        }
        for (r, s) in h.dc.iter_mut().zip(&o.dc) {
            for (x, y) in r.iter_mut().zip(s) {
                *x = &*x + y;
            }
        }
        for (r, s) in h.dd.iter_mut().zip(&o.dd) {
            for (x, y) in r.iter_mut().zip(s) {
                *x += y;
            }
        }
        for (x, y) in h.atom_map.iter_mut().zip(&o.atom_map) {
            match (*x, *y) {
                (Some(_), Some(_)) => {
                    return Err(GroupError::UnsupportedAtomMap(
                        "sum of two maps on the same atom".into(),
                    ))
                }
                (None, Some(j)) => *x = Some(j),
                _ => {}
            }
        }
        Ok(h)
    }

    pub fn without_atoms(&self) -> GroupHom {
        let mut h = self.clone();
        h.atom_map = vec![None; h.atom_map.len()];
        h
    }

    /// Equality as maps: same atom map and a difference that vanishes in the codomain.
    pub fn agrees_with(&self, o: &GroupHom) -> bool {
        if self.atom_map != o.atom_map {
            return false;
        }
        match self.without_atoms().add(&o.without_atoms().neg()) {
            Ok(d) => d.is_zero_map(),
            Err(_) => false,
        }
    }

    /// Whether every generator maps to zero in the codomain.
    pub fn is_zero_map(&self) -> bool {
        if self.atom_map.iter().any(Option::is_some) {
            return false;
        }
        let span = self.codomain.relation_span();
        (0..self.domain.cont()).all(|j| span.contains_line(&self.cc_col(j)))
            && (0..self.domain.disc()).all(|k| span.contains(&self.disc_image(k)))
    }

    /// The image plus the codomain relations, as a subgroup of the codomain's free module.
    pub fn image_span(&self) -> Span {
        let cod = &self.codomain;
        let mut lines = cod.lines();
        lines.extend((0..self.domain.cont()).map(|j| self.cc_col(j)));
        let mut gens = cod.lattice();
        gens.extend((0..self.domain.disc()).map(|k| self.disc_image(k)));
        Span::new(cod.cont(), cod.disc(), lines, gens)
    }

    pub fn is_surjective(&self) -> Result<bool, GroupError> {
        Ok(classify(&cokernel(self)?).is_trivial)
    }

    pub fn is_injective(&self) -> Result<bool, GroupError> {
        for (i, t) in self.atom_map.iter().enumerate() {
            match t {
                None => return Ok(false),
                Some(j) => {
                    if self.domain.atoms()[i].mod_cyclic != self.codomain.atoms()[*j].mod_cyclic {
                        return Ok(false);
                    }
                }
            }
        }
        let mut hits: Vec<usize> = self.atom_map.iter().flatten().copied().collect();
        hits.sort_unstable();
        let before = hits.len();
        hits.dedup();
        if hits.len() != before {
            return Ok(false);
        }
        Ok(classify(&kernel(self)?.group).is_trivial)
    }
}

/// Continuous and discrete generators of the kernel of a map from the free
/// module `C^a ⊕ Z^b` into the group presented by `target`.
pub(crate) fn kernel_elements(
    cc: &[Vec<Scalar>],
    dc: &[Vec<Scalar>],
    dd: &[Vec<BigInt>],
    a: usize,
    b: usize,
    target: &Span,
) -> (Vec<Vec<Scalar>>, Vec<Elem>) {
    let m = target.a;
    let mb = target.b;
    let cols: Vec<Vec<Scalar>> = (0..a)
        .map(|j| (0..m).map(|i| cc[i][j].clone()).collect())
        .collect();
    let proj: Vec<Vec<Scalar>> = cols.iter().map(|c| target.project(c)).collect();
    let nfree = target.free_coords().len();
    let rows: Vec<Vec<Scalar>> = (0..nfree)
        .map(|f| proj.iter().map(|p| p[f].clone()).collect())
        .collect();
    let cont_kernel = scalar_nullspace(&rows, a);

    let mut lines = target.lines.clone();
    let nl = lines.len();
    lines.extend(cols.iter().cloned());
    let images: Vec<Elem> = (0..b)
        .map(|k| Elem {
            cont: (0..m).map(|i| dc[i][k].clone()).collect(),
            disc: (0..mb).map(|i| dd[i][k].clone()).collect(),
        })
        .collect();
    let mut gens = images.clone();
    gens.extend(target.gens.iter().cloned());
    let big = Span::new(m, mb, lines.clone(), gens.clone());
    let mut disc_kernel = Vec::new();
    for v in big.integer_relations() {
        let terms: Vec<(BigInt, &Elem)> = v.iter().cloned().zip(gens.iter()).collect();
        let r = Elem::combination(&terms, m, mb);
        let c = if lines.is_empty() {
            Vec::new()
        } else {
            scalar_solve(&lines, &r.cont).expect("integer relation lies in the line span")
        };
        let x: Vec<Scalar> = c[nl..].iter().map(|s| -s).collect();
        let x = if x.len() == a { x } else { vec![Scalar::zero(); a] };
        disc_kernel.push(Elem {
            cont: x,
            disc: v[..b].to_vec(),
        });
    }
    (cont_kernel, disc_kernel)
}

/// `ker h` together with its inclusion into the domain.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub group: PresentedAbelianGroup,
    pub inclusion: GroupHom,
}

pub fn kernel(h: &GroupHom) -> Result<Kernel, GroupError> {
    for (i, t) in h.atom_map.iter().enumerate() {
        let src = &h.domain.atoms()[i];
        match t {
            None => {
                return Err(GroupError::NonFiniteTypeKernel(format!(
                    "atom {} lies in the kernel",
                    src.label()
                )))
            }
            Some(j) if h.codomain.atoms()[*j].mod_cyclic != src.mod_cyclic => {
                return Err(GroupError::UnsupportedAtomMap(format!(
                    "kernel of the cyclic quotient of {}",
                    src.label()
                )))
            }
            Some(_) => {}
        }
    }
    let dom = &h.domain;
    let (a, b) = (dom.cont(), dom.disc());
    let (n, x) = kernel_elements(&h.cc, &h.dc, &h.dd, a, b, &h.codomain.relation_span());
    let (ka, kb) = (n.len(), x.len());
    let icc: Vec<Vec<Scalar>> = (0..a)
        .map(|i| (0..ka).map(|j| n[j][i].clone()).collect())
        .collect();
    let idc: Vec<Vec<Scalar>> = (0..a)
        .map(|i| (0..kb).map(|j| x[j].cont[i].clone()).collect())
        .collect();
    let idd: Vec<Vec<BigInt>> = (0..b)
        .map(|i| (0..kb).map(|j| x[j].disc[i].clone()).collect())
        .collect();
    let (rn, rx) = kernel_elements(&icc, &idc, &idd, ka, kb, &dom.relation_span());
    let mut rels: Vec<Relation> = rn.into_iter().map(|v| Relation::line(v, kb)).collect();
    rels.extend(
        rx.into_iter()
            .filter(|e| !e.is_zero())
            .map(|e| Relation::lattice(e.cont, e.disc)),
    );
    let group = PresentedAbelianGroup::new(dom.table().cloned(), ka, kb, vec![], rels)?;
    let inclusion = GroupHom::new(group.clone(), dom.clone(), icc, idd, idc, vec![])?;
    Ok(Kernel { group, inclusion })
}

/// Quotient of the codomain by the image; atoms hit by the atom map disappear.
pub fn cokernel(h: &GroupHom) -> Result<PresentedAbelianGroup, GroupError> {
    Ok(cokernel_with_projection(h)?.0)
}

pub fn cokernel_with_projection(
    h: &GroupHom,
) -> Result<(PresentedAbelianGroup, GroupHom), GroupError> {
    let cod = &h.codomain;
    let mut rels = cod.relations().to_vec();
    for j in 0..h.domain.cont() {
        let col = h.cc_col(j);
        if col.iter().any(|s| !s.is_zero()) {
            rels.push(Relation::line(col, cod.disc()));
        }
    }
    for k in 0..h.domain.disc() {
        let e = h.disc_image(k);
        if !e.is_zero() {
            rels.push(Relation::lattice(e.cont, e.disc));
        }
    }
    let hit: Vec<bool> = (0..cod.atoms().len())
        .map(|j| h.atom_map.contains(&Some(j)))
        .collect();
    let atoms: Vec<_> = cod
        .atoms()
        .iter()
        .zip(&hit)
        .filter(|(_, &x)| !x)
        .map(|(s, _)| s.clone())
        .collect();
    let q = PresentedAbelianGroup::new(
        cod.table().cloned().or_else(|| h.domain.table().cloned()),
        cod.cont(),
        cod.disc(),
        atoms,
        rels,
    )?;
    let mut next = 0;
    let amap = hit
        .iter()
        .map(|&x| {
            if x {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect();
    let proj = GroupHom::new(
        cod.clone(),
        q.clone(),
        (0..cod.cont()).map(|i| unit_vec(cod.cont(), i)).collect(),
        (0..cod.disc()).map(|i| unit_int(cod.disc(), i)).collect(),
        zeros_s(cod.cont(), cod.disc()),
        amap,
    )?;
    Ok((q, proj))
}

/// Block-diagonal sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: PresentedAbelianGroup,
    pub injections: Vec<GroupHom>,
    pub projections: Vec<GroupHom>,
    pub cont_offsets: Vec<usize>,
    pub disc_offsets: Vec<usize>,
    pub atom_offsets: Vec<usize>,
}

pub fn direct_sum(gs: &[PresentedAbelianGroup]) -> Result<DirectSum, GroupError> {
    let a: usize = gs.iter().map(|g| g.cont()).sum();
    let b: usize = gs.iter().map(|g| g.disc()).sum();
    let mut table = None;
    for g in gs {
        if !same_table(table.as_ref(), g.table()) {
            return Err(GroupError::SymbolTableMismatch);
        }
        if table.is_none() {
            table = g.table().cloned();
        }
    }
    let (mut co, mut dof, mut ao) = (Vec::new(), Vec::new(), Vec::new());
    let (mut c, mut d, mut at) = (0, 0, 0);
    let mut rels = Vec::new();
    let mut atoms = Vec::new();
    for g in gs {
        co.push(c);
        dof.push(d);
        ao.push(at);
        for r in g.relations() {
            let mut cont = vec![Scalar::zero(); a];
            let mut disc = vec![BigInt::zero(); b];
            cont[c..c + g.cont()].clone_from_slice(&r.cont);
            disc[d..d + g.disc()].clone_from_slice(&r.disc);
            rels.push(Relation {
                kind: r.kind,
                cont,
                disc,
            });
        }
        atoms.extend(g.atoms().iter().cloned());
        c += g.cont();
        d += g.disc();
        at += g.atoms().len();
    }
    let group = PresentedAbelianGroup::new(table, a, b, atoms, rels)?;
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let mut inj = GroupHom::zero(g, &group);
        let mut proj = GroupHom::zero(&group, g);
        for k in 0..g.cont() {
            inj.cc[co[i] + k][k] = Scalar::one();
            proj.cc[k][co[i] + k] = Scalar::one();
        }
        for k in 0..g.disc() {
            inj.dd[dof[i] + k][k] = BigInt::from(1);
            proj.dd[k][dof[i] + k] = BigInt::from(1);
        }
        for k in 0..g.atoms().len() {
            inj.atom_map[k] = Some(ao[i] + k);
            proj.atom_map[ao[i] + k] = Some(k);
        }
        injections.push(inj);
        projections.push(proj);
    }
    Ok(DirectSum {
        group,
        injections,
        projections,
        cont_offsets: co,
        disc_offsets: dof,
        atom_offsets: ao,
    })
}

impl DirectSum {
    /// Assembles `⊕ dom_j → ⊕ cod_i` from blocks `(i, j, h)`; blocks at the same
    /// position are added.
    pub fn hom_from_blocks(
        dom: &DirectSum,
        cod: &DirectSum,
        blocks: &[(usize, usize, GroupHom)],
    ) -> Result<GroupHom, GroupError> {
        let mut h = GroupHom::zero(&dom.group, &cod.group);
        for (i, j, b) in blocks {
            let (ci, di, ai) = (cod.cont_offsets[*i], cod.disc_offsets[*i], cod.atom_offsets[*i]);
            let (cj, dj, aj) = (dom.cont_offsets[*j], dom.disc_offsets[*j], dom.atom_offsets[*j]);
            for (r, row) in b.cc.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        h.cc[ci + r][cj + c] = &h.cc[ci + r][cj + c] + x;
                    }
                }
            }
            for (r, row) in b.dc.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        h.dc[ci + r][dj + c] = &h.dc[ci + r][dj + c] + x;
                    }
                }
            }
            for (r, row) in b.dd.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    h.dd[di + r][dj + c] += x;
                }
            }
            for (k, t) in b.atom_map.iter().enumerate() {
                if let Some(tk) = t {
                    let slot = &mut h.atom_map[aj + k];
                    if slot.is_some() {
                        return Err(GroupError::UnsupportedAtomMap(
                            "an atom mapped into two summands".into(),
                        ));
                    }
                    *slot = Some(ai + tk);
                }
            }
        }
        GroupHom::new(
            dom.group.clone(),
            cod.group.clone(),
            h.cc,
            h.dd,
            h.dc,
            h.atom_map,
        )
    }
}
