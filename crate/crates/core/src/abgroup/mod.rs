//! Presented abelian groups `(C^a ⊕ Z^b ⊕ atoms) / relations` and homomorphisms.
//!
//! A relation is either a *line* (the whole complex line through a continuous
//! vector) or a *lattice* relation (one element with continuous and discrete
//! parts). Lines appear when a cokernel quotients by the image of continuous
//! generators.

mod classify;
mod hom;
mod span;
mod wire;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{Scalar, SymbolTable};

pub use classify::{
    classify, lattices_homothetic, CoordinateFactor, FactorKind, NormalFormReport,
};
pub use hom::{cokernel, cokernel_with_projection, direct_sum, kernel, DirectSum, GroupHom, Kernel};
pub use span::{Elem, Span, SpanSolution};
pub use wire::{GroupSpec, HomSpec, RelationSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("symbol tables differ between domain and codomain")]
    SymbolTableMismatch,
    #[error("relation {index} of the domain is not mapped into the codomain relations")]
    RelationNotPreserved { index: usize },
    #[error("hom matrix has wrong shape: {0}")]
    Shape(String),
    #[error("unsupported atom map: {0}")]
    UnsupportedAtomMap(String),
    #[error("kernel is not of finite type: {0}")]
    NonFiniteTypeKernel(String),
    #[error("relation touches atoms")]
    RelationOnAtom,
    #[error("line relation with a nonzero discrete part")]
    DiscreteLine,
    #[error("bad group data: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomKind {
    DisconnectedU1,
    DiffGermGroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cardinality {
    FiniteUnknown,
    PossiblyUncountable,
}

/// Opaque totally disconnected factor; atoms are identified by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub name: String,
    pub kind: AtomKind,
    pub cardinality: Cardinality,
}

/// Order of the cyclic subgroup an atom is divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicOrder {
    Finite(u64),
    Infinite,
}

/// An atom appearing in a group, possibly divided by a declared cyclic subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AtomSlot {
    pub atom: Atom,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mod_cyclic: Option<CyclicOrder>,
}

impl AtomSlot {
    pub fn plain(atom: Atom) -> Self {
        AtomSlot {
            atom,
            mod_cyclic: None,
        }
    }

    pub fn label(&self) -> String {
        match self.mod_cyclic {
            None => self.atom.name.clone(),
            Some(CyclicOrder::Infinite) => format!("{}/Z", self.atom.name),
            Some(CyclicOrder::Finite(k)) => format!("{}/Z{k}", self.atom.name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelKind {
    Line,
    Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub kind: RelKind,
    pub cont: Vec<Scalar>,
    pub disc: Vec<BigInt>,
}

impl Relation {
    pub fn line(cont: Vec<Scalar>, b: usize) -> Self {
        Relation {
            kind: RelKind::Line,
            cont,
            disc: vec![BigInt::zero(); b],
        }
    }

    pub fn lattice(cont: Vec<Scalar>, disc: Vec<BigInt>) -> Self {
        Relation {
            kind: RelKind::Lattice,
            cont,
            disc,
        }
    }

    pub fn elem(&self) -> Elem {
        Elem {
            cont: self.cont.clone(),
            disc: self.disc.clone(),
        }
    }
}

/// `(C^cont ⊕ Z^disc ⊕ atoms) / ⟨relations⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedAbelianGroup {
    table: Option<Arc<SymbolTable>>,
    cont: usize,
    disc: usize,
    atoms: Vec<AtomSlot>,
    relations: Vec<Relation>,
}

impl PresentedAbelianGroup {
    pub fn new(
        table: Option<Arc<SymbolTable>>,
        cont: usize,
        disc: usize,
        atoms: Vec<AtomSlot>,
        relations: Vec<Relation>,
    ) -> Result<Self, GroupError> {
        for r in &relations {
            if r.cont.len() != cont || r.disc.len() != disc {
                return Err(GroupError::Shape(format!(
                    "relation has {}+{} entries, group has {}+{} generators",
                    r.cont.len(),
                    r.disc.len(),
                    cont,
                    disc
                )));
            }
            if r.kind == RelKind::Line && r.disc.iter().any(|x| !x.is_zero()) {
                return Err(GroupError::DiscreteLine);
            }
            for s in &r.cont {
                if let (Some(t), Some(ts)) = (&table, s.table()) {
                    if !(Arc::ptr_eq(t, ts) || **t == **ts) {
                        return Err(GroupError::SymbolTableMismatch);
                    }
                }
            }
        }
        let table = table.or_else(|| {
            relations
                .iter()
                .flat_map(|r| r.cont.iter())
                .find_map(|s| s.table().cloned())
        });
        Ok(PresentedAbelianGroup {
            table,
            cont,
            disc,
            atoms,
            relations,
        })
    }

    pub fn trivial() -> Self {
        PresentedAbelianGroup {
            table: None,
            cont: 0,
            disc: 0,
            atoms: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// The complex line C.
    pub fn complex_line() -> Self {
        PresentedAbelianGroup::new(None, 1, 0, vec![], vec![]).expect("valid")
    }

    /// `C / Z·g₁ + … + Z·g_k` in one continuous generator.
    pub fn complex_mod_lattice(gens: &[Scalar]) -> Self {
        let rels = gens
            .iter()
            .map(|g| Relation::lattice(vec![g.clone()], vec![]))
            .collect();
        PresentedAbelianGroup::new(None, 1, 0, vec![], rels).expect("valid")
    }

    /// `Z/n₁ ⊕ … ⊕ Z/n_k`; a zero order gives a free factor Z.
    pub fn finite_abelian(orders: &[u64]) -> Self {
        let k = orders.len();
        let rels = orders
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(i, &n)| {
                let mut d = vec![BigInt::zero(); k];
                d[i] = BigInt::from(n);
                Relation::lattice(vec![], d)
            })
            .collect();
        PresentedAbelianGroup::new(None, 0, k, vec![], rels).expect("valid")
    }

    pub fn atom_group(slot: AtomSlot) -> Self {
        PresentedAbelianGroup::new(None, 0, 0, vec![slot], vec![]).expect("valid")
    }

    pub fn with_table(mut self, t: Option<Arc<SymbolTable>>) -> Self {
        if self.table.is_none() {
            self.table = t;
        }
        self
    }

    pub fn table(&self) -> Option<&Arc<SymbolTable>> {
        self.table.as_ref()
    }

    pub fn cont(&self) -> usize {
        self.cont
    }

    pub fn disc(&self) -> usize {
        self.disc
    }

    pub fn atoms(&self) -> &[AtomSlot] {
        &self.atoms
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn lines(&self) -> Vec<Vec<Scalar>> {
        self.relations
            .iter()
            .filter(|r| r.kind == RelKind::Line)
            .map(|r| r.cont.clone())
            .collect()
    }

    pub fn lattice(&self) -> Vec<Elem> {
        self.relations
            .iter()
            .filter(|r| r.kind == RelKind::Lattice)
            .map(Relation::elem)
            .collect()
    }

    /// The relation subgroup of the free module, ready for membership tests.
    pub fn relation_span(&self) -> Span {
        Span::new(self.cont, self.disc, self.lines(), self.lattice())
    }

    pub fn with_relations(&self, extra: Vec<Relation>) -> Result<Self, GroupError> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        PresentedAbelianGroup::new(
            self.table.clone(),
            self.cont,
            self.disc,
            self.atoms.clone(),
            rels,
        )
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn is_finite_presentation(&self) -> bool {
        self.cont == 0 && self.atoms.is_empty()
    }

    /// Whether `x` is zero in the group.
    pub fn is_zero_elem(&self, x: &Elem) -> bool {
        self.relation_span().contains(x)
    }
}

pub(crate) fn same_table(a: Option<&Arc<SymbolTable>>, b: Option<&Arc<SymbolTable>>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => Arc::ptr_eq(x, y) || x == y,
        _ => true,
    }
}
