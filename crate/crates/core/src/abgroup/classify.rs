//! Normal forms of presented groups.
//!
//! After killing the complex span of the line relations, a group is
//! `(C^f ⊕ Z^b)/Λ` for a finitely generated `Λ`. Since `C^f/Γ₀` is divisible
//! the extension splits: the group is `C^f/Γ₀ ⊕ Z^b/π(Λ)`, where `Γ₀` collects
//! continuous parts of relation combinations with vanishing discrete part.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{AtomSlot, PresentedAbelianGroup, Relation};
use crate::exactnum::{
    integer_kernel, q_coords, rational_lattice_basis, rational_rank, scalar_rref,
    smith_normal_form, IntMatrix, Scalar, SymbolTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    /// `C/Γ` with `Γ` of Q-rank 1, isomorphic to `C*`.
    Punctured,
    /// Q-rank 2: `C*/α^Z`, discrete by genericity.
    Elliptic,
    /// Q-rank at least 3.
    NonDiscrete,
    /// A quotient of `C^d`, `d ≥ 2`, that does not split along coordinates.
    Coupled,
    /// `C` itself.
    Line,
}

/// One continuous block `C^dim / lattice`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateFactor {
    pub kind: FactorKind,
    pub dim: usize,
    pub q_rank: usize,
    /// Canonical Z-basis of the lattice, one vector of length `dim` per generator.
    pub lattice: Vec<Vec<Scalar>>,
}

impl CoordinateFactor {
    fn line() -> Self {
        CoordinateFactor {
            kind: FactorKind::Line,
            dim: 1,
            q_rank: 0,
            lattice: Vec::new(),
        }
    }

    fn sort_key(&self) -> (FactorKind, usize, usize, String) {
        (self.kind, self.dim, self.q_rank, format!("{:?}", self.lattice_strings()))
    }

    fn lattice_strings(&self) -> Vec<Vec<String>> {
        self.lattice
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn pretty(&self) -> String {
        match self.kind {
            FactorKind::Line => "C".into(),
            FactorKind::Punctured => "C*".into(),
            FactorKind::Elliptic | FactorKind::NonDiscrete => {
                let gens: Vec<Scalar> = self.lattice.iter().map(|v| v[0].clone()).collect();
                format!("C/{}", pretty_lattice(&gens))
            }
            FactorKind::Coupled => format!(
                "C^{}/Λ(rank {}; {})",
                self.dim,
                self.q_rank,
                self.lattice
                    .iter()
                    .map(|v| format!(
                        "({})",
                        v.iter().map(Scalar::pretty).collect::<Vec<_>>().join(", ")
                    ))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

/// `c(Z + r₂Z + …)` with `c` the first generator.
fn pretty_lattice(gens: &[Scalar]) -> String {
    let c = &gens[0];
    let parts: Vec<String> = gens
        .iter()
        .map(|g| {
            let r = g / c;
            if r.is_one() {
                "Z".to_string()
            } else {
                let s = r.pretty();
                if s.contains(['+', '-', '/']) {
                    format!("({s})Z")
                } else {
                    format!("{s}Z")
                }
            }
        })
        .collect();
    let inner = parts.join(" + ");
    if c.is_one() {
        format!("({inner})")
    } else {
        let s = c.pretty();
        if s.contains(['+', '-', '/']) {
            format!("({s})({inner})")
        } else {
            format!("{s}({inner})")
        }
    }
}

fn ser_bigints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(ToString::to_string))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    /// Continuous factors, canonically ordered; `Line` factors last.
    pub factors: Vec<CoordinateFactor>,
    /// Invariant factors `> 1` of the torsion, each dividing the next.
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    pub atoms: Vec<AtomSlot>,
    pub is_trivial: bool,
    pub is_finite: bool,
    pub has_atoms: bool,
    pub has_nondiscrete: bool,
    /// Some elliptic factor is discrete only under the genericity declaration.
    pub discreteness_by_genericity: bool,
    pub text: String,
    #[serde(skip)]
    table: Option<Arc<SymbolTable>>,
}

impl NormalFormReport {
    /// Cardinality when the group is finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite
            .then(|| self.torsion.iter().fold(BigInt::one(), |a, b| a * b))
    }

    /// A presentation already in normal form.
    pub fn normal_form_group(&self) -> PresentedAbelianGroup {
        let a: usize = self.factors.iter().map(|f| f.dim).sum();
        let b = self.torsion.len() + self.free_rank;
        let mut rels = Vec::new();
        let mut off = 0;
        for f in &self.factors {
            for v in &f.lattice {
                let mut cont = vec![Scalar::zero(); a];
                cont[off..off + f.dim].clone_from_slice(v);
                rels.push(Relation::lattice(cont, vec![BigInt::zero(); b]));
            }
            off += f.dim;
        }
        for (i, n) in self.torsion.iter().enumerate() {
            let mut disc = vec![BigInt::zero(); b];
            disc[i] = n.clone();
            rels.push(Relation::lattice(vec![Scalar::zero(); a], disc));
        }
        PresentedAbelianGroup::new(self.table.clone(), a, b, self.atoms.clone(), rels)
            .expect("normal form is a valid presentation")
    }

    /// Isomorphism test: exact on discrete data and atoms; continuous factors
    /// of dimension one are matched up to homothety of their lattices.
    pub fn isomorphic(&self, o: &NormalFormReport) -> bool {
        if self.torsion != o.torsion
            || self.free_rank != o.free_rank
            || self.factors.len() != o.factors.len()
        {
            return false;
        }
        let mut a1: Vec<String> = self.atoms.iter().map(AtomSlot::label).collect();
        let mut a2: Vec<String> = o.atoms.iter().map(AtomSlot::label).collect();
        a1.sort();
        a2.sort();
        if a1 != a2 {
            return false;
        }
        let mut used = vec![false; o.factors.len()];
        match_factors(&self.factors, &o.factors, &mut used)
    }
}

fn factors_match(x: &CoordinateFactor, y: &CoordinateFactor) -> bool {
    if x.kind != y.kind || x.dim != y.dim || x.q_rank != y.q_rank {
        return false;
    }
    match x.kind {
        FactorKind::Line | FactorKind::Punctured => true,
        FactorKind::Elliptic | FactorKind::NonDiscrete => {
            let gx: Vec<Scalar> = x.lattice.iter().map(|v| v[0].clone()).collect();
            let gy: Vec<Scalar> = y.lattice.iter().map(|v| v[0].clone()).collect();
            lattices_homothetic(&gx, &gy)
        }
        FactorKind::Coupled => x.lattice == y.lattice,
    }
}

fn match_factors(xs: &[CoordinateFactor], ys: &[CoordinateFactor], used: &mut [bool]) -> bool {
    let Some((x, rest)) = xs.split_first() else {
        return true;
    };
    for j in 0..ys.len() {
        if !used[j] && factors_match(x, &ys[j]) {
            used[j] = true;
            if match_factors(rest, ys, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

impl fmt::Display for NormalFormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Canonical Z-basis of the subgroup of C^dim generated by `vs`; the
/// computation is repeated until the common denominator stabilizes.
pub(crate) fn canonical_lattice(vs: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let table = vs.iter().flatten().find_map(|s| s.table().cloned());
    let mut cur: Vec<Vec<Scalar>> = vs.to_vec();
    for _ in 0..8 {
        let flat: Vec<&Scalar> = cur.iter().flatten().collect();
        if flat.iter().all(|s| s.is_zero()) {
            return Vec::new();
        }
        let qc = q_coords(&flat).expect("one symbol table");
        let nm = qc.monomials.len();
        let rows: Vec<Vec<BigRational>> = (0..cur.len())
            .map(|k| {
                (0..dim)
                    .flat_map(|c| qc.rows[k * dim + c].iter().cloned())
                    .collect()
            })
            .collect();
        let basis = rational_lattice_basis(&rows, dim * nm);
        let next: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|r| {
                (0..dim)
                    .map(|c| qc.to_scalar(&r[c * nm..(c + 1) * nm], table.as_ref()))
                    .collect()
            })
            .collect();
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn q_rank_of(vs: &[Vec<Scalar>]) -> usize {
    let flat: Vec<&Scalar> = vs.iter().flatten().collect();
    if flat.is_empty() {
        return 0;
    }
    let dim = vs[0].len();
    let qc = q_coords(&flat).expect("one symbol table");
    let rows: Vec<Vec<BigRational>> = (0..vs.len())
        .map(|k| {
            (0..dim)
                .flat_map(|c| qc.rows[k * dim + c].iter().cloned())
                .collect()
        })
        .collect();
    rational_rank(&rows)
}

fn lattice_eq(a: &[Scalar], b: &[Scalar]) -> bool {
    let wrap = |xs: &[Scalar]| xs.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>();
    canonical_lattice(&wrap(a), 1) == canonical_lattice(&wrap(b), 1)
}

/// Whether `c·Γ_a = Γ_b` for some nonzero scalar `c`. The multiplier is
/// searched among ratios of small combinations of generators, so `false`
/// means "no homothety found".
pub fn lattices_homothetic(a: &[Scalar], b: &[Scalar]) -> bool {
    let ba = canonical_lattice(&a.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>(), 1);
    let bb = canonical_lattice(&b.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>(), 1);
    let ga: Vec<Scalar> = ba.into_iter().map(|v| v[0].clone()).collect();
    let gb: Vec<Scalar> = bb.into_iter().map(|v| v[0].clone()).collect();
    if ga.len() != gb.len() {
        return false;
    }
    if ga.is_empty() {
        return true;
    }
    let k = gb.len();
    let span = 2i64;
    let width = (2 * span + 1) as usize;
    let total = width.pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut y = Scalar::zero();
        for g in &gb {
            let coef = (c % width) as i64 - span;
            c /= width;
            if coef != 0 {
                y = &y + &(g * &Scalar::from_int(coef));
            }
        }
        if y.is_zero() {
            continue;
        }
        let m = &y / &ga[0];
        let scaled: Vec<Scalar> = ga.iter().map(|g| g * &m).collect();
        if lattice_eq(&scaled, &gb) {
            return true;
        }
    }
    false
}

pub fn classify(g: &PresentedAbelianGroup) -> NormalFormReport {
    let span = g.relation_span();
    let free = span.free_coords();
    let f = free.len();
    let b = g.disc();
    let lat = g.lattice();
    let proj: Vec<Vec<Scalar>> = lat.iter().map(|e| span.project(&e.cont)).collect();

    // discrete block
    let d = IntMatrix::from_rows_with_cols(
        &(0..b)
            .map(|i| lat.iter().map(|e| e.disc[i].clone()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        lat.len(),
    );
    let smith = smith_normal_form(&d);
    let inv = smith.invariants();
    let torsion: Vec<BigInt> = inv.iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
    let free_rank = b - inv.len();

    // continuous lattice Γ₀
    let gamma: Vec<Vec<Scalar>> = if lat.is_empty() {
        Vec::new()
    } else if b == 0 {
        proj.clone()
    } else {
        integer_kernel(&d)
            .iter()
            .map(|k| {
                let mut v = vec![Scalar::zero(); f];
                for (kj, p) in k.iter().zip(&proj) {
                    if kj.is_zero() {
                        continue;
                    }
                    let ks = Scalar::from_bigint(kj.clone());
                    for (x, y) in v.iter_mut().zip(p) {
                        *x = &*x + &(y * &ks);
                    }
                }
                v
            })
            .collect()
    };
    let gamma: Vec<Vec<Scalar>> = gamma
        .into_iter()
        .filter(|v| v.iter().any(|s| !s.is_zero()))
        .collect();
    let (_, pivots) = scalar_rref(&gamma);
    let r = pivots.len();
    let coeffs: Vec<Vec<Scalar>> = gamma
        .iter()
        .map(|v| pivots.iter().map(|&p| v[p].clone()).collect())
        .collect();
    let basis = if r == 0 {
        Vec::new()
    } else {
        canonical_lattice(&coeffs, r)
    };

    // split the coefficient lattice along coordinates it does not couple
    let mut comp: Vec<usize> = (0..r).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let root = find(c, c[x]);
            c[x] = root;
        }
        c[x]
    }
    for v in &basis {
        let nz: Vec<usize> = (0..r).filter(|&i| !v[i].is_zero()).collect();
        for w in nz.windows(2) {
            let (x, y) = (find(&mut comp, w[0]), find(&mut comp, w[1]));
            if x != y {
                comp[x.max(y)] = x.min(y);
            }
        }
    }
    let roots: Vec<usize> = (0..r).map(|i| find(&mut comp, i)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..r {
        match groups.iter_mut().find(|gr| roots[gr[0]] == roots[i]) {
            Some(gr) => gr.push(i),
            None => groups.push(vec![i]),
        }
    }
    let mut factors: Vec<CoordinateFactor> = groups
        .iter()
        .map(|coords| {
            let vs: Vec<Vec<Scalar>> = basis
                .iter()
                .filter(|v| coords.iter().any(|&i| !v[i].is_zero()))
                .map(|v| coords.iter().map(|&i| v[i].clone()).collect())
                .collect();
            let dim = coords.len();
            let lattice = canonical_lattice(&vs, dim);
            let q_rank = q_rank_of(&lattice);
            let kind = if dim > 1 {
                FactorKind::Coupled
            } else {
                match q_rank {
                    0 => FactorKind::Line,
                    1 => FactorKind::Punctured,
                    2 => FactorKind::Elliptic,
                    _ => FactorKind::NonDiscrete,
                }
            };
            CoordinateFactor {
                kind,
                dim,
                q_rank,
                lattice,
            }
        })
        .collect();
    factors.extend((0..f - r).map(|_| CoordinateFactor::line()));
    factors.sort_by_key(CoordinateFactor::sort_key);

    let has_atoms = g.has_atoms();
    let has_nondiscrete = factors.iter().any(|x| {
        x.kind == FactorKind::NonDiscrete || (x.kind == FactorKind::Coupled && x.q_rank > 2 * x.dim)
    });
    let discreteness_by_genericity = factors.iter().any(|x| {
        x.kind == FactorKind::Elliptic || (x.kind == FactorKind::Coupled && x.q_rank == 2 * x.dim)
    });
    let is_finite = factors.is_empty() && free_rank == 0 && !has_atoms;
    let is_trivial = is_finite && torsion.is_empty();
    let mut parts: Vec<String> = factors.iter().map(CoordinateFactor::pretty).collect();
    parts.extend(torsion.iter().map(|n| format!("Z/{n}")));
    match free_rank {
        0 => {}
        1 => parts.push("Z".into()),
        k => parts.push(format!("Z^{k}")),
    }
    parts.extend(g.atoms().iter().map(AtomSlot::label));
    let text = if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ⊕ ")
    };
    NormalFormReport {
        factors,
        torsion,
        free_rank,
        atoms: g.atoms().to_vec(),
        is_trivial,
        is_finite,
        has_atoms,
        has_nondiscrete,
        discreteness_by_genericity,
        text,
        table: g.table().cloned(),
    }
}
