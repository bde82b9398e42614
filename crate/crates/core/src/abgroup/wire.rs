//! JSON shapes for groups and homs. Scalars travel as strings parsed against
//! a symbol table supplied by the enclosing document.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{AtomSlot, GroupError, GroupHom, PresentedAbelianGroup, RelKind, Relation};
use crate::exactnum::{Scalar, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    #[serde(default = "lattice_kind")]
    pub kind: RelKind,
    #[serde(default)]
    pub cont: Vec<String>,
    #[serde(default)]
    pub disc: Vec<i64>,
}

fn lattice_kind() -> RelKind {
    RelKind::Lattice
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub cont: usize,
    #[serde(default)]
    pub disc: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSlot>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    /// Rows indexed by codomain continuous generators.
    #[serde(default)]
    pub cc: Vec<Vec<String>>,
    #[serde(default)]
    pub dd: Vec<Vec<i64>>,
    #[serde(default)]
    pub dc: Vec<Vec<String>>,
    #[serde(default)]
    pub atom_map: Vec<Option<usize>>,
}

fn parse(s: &str, t: &Arc<SymbolTable>) -> Result<Scalar, GroupError> {
    Scalar::parse(s, t).map_err(|e| GroupError::Invalid(format!("scalar {s:?}: {e}")))
}

fn parse_rows(rows: &[Vec<String>], t: &Arc<SymbolTable>) -> Result<Vec<Vec<Scalar>>, GroupError> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse(s, t)).collect())
        .collect()
}

fn pad<T: Clone>(v: &[T], n: usize, zero: T) -> Vec<T> {
    if v.is_empty() {
        vec![zero; n]
    } else {
        v.to_vec()
    }
}

impl GroupSpec {
    pub fn to_group(&self, t: &Arc<SymbolTable>) -> Result<PresentedAbelianGroup, GroupError> {
        let rels = self
            .relations
            .iter()
            .map(|r| {
                let cont: Vec<Scalar> = r
                    .cont
                    .iter()
                    .map(|s| parse(s, t))
                    .collect::<Result<_, _>>()?;
                Ok(Relation {
                    kind: r.kind,
                    cont: pad(&cont, self.cont, Scalar::zero()),
                    disc: pad(
                        &r.disc.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(),
                        self.disc,
                        BigInt::from(0),
                    ),
                })
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        PresentedAbelianGroup::new(
            Some(t.clone()),
            self.cont,
            self.disc,
            self.atoms.clone(),
            rels,
        )
    }

    pub fn from_group(g: &PresentedAbelianGroup) -> Result<Self, GroupError> {
        let relations = g
            .relations()
            .iter()
            .map(|r| {
                Ok(RelationSpec {
                    kind: r.kind,
                    cont: r.cont.iter().map(ToString::to_string).collect(),
                    disc: r
                        .disc
                        .iter()
                        .map(|x| {
                            i64::try_from(x)
                                .map_err(|_| GroupError::Invalid("integer out of range".into()))
                        })
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, GroupError>>()?;
        Ok(GroupSpec {
            cont: g.cont(),
            disc: g.disc(),
            atoms: g.atoms().to_vec(),
            relations,
        })
    }
}

impl HomSpec {
    pub fn to_hom(
        &self,
        domain: PresentedAbelianGroup,
        codomain: PresentedAbelianGroup,
        t: &Arc<SymbolTable>,
    ) -> Result<GroupHom, GroupError> {
        let (a, b) = (domain.cont(), domain.disc());
        let (c, d) = (codomain.cont(), codomain.disc());
        let cc = if self.cc.is_empty() {
            vec![vec![Scalar::zero(); a]; c]
        } else {
            parse_rows(&self.cc, t)?
        };
        let dc = if self.dc.is_empty() {
            vec![vec![Scalar::zero(); b]; c]
        } else {
            parse_rows(&self.dc, t)?
        };
        let dd = if self.dd.is_empty() {
            vec![vec![BigInt::from(0); b]; d]
        } else {
            self.dd
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        let atom_map = if self.atom_map.is_empty() {
            vec![None; domain.atoms().len()]
        } else {
            self.atom_map.clone()
        };
        GroupHom::new(domain, codomain, cc, dd, dc, atom_map)
    }

    pub fn from_hom(h: &GroupHom) -> Result<Self, GroupError> {
        let strs = |m: &[Vec<Scalar>]| -> Vec<Vec<String>> {
            m.iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect()
        };
        let dd = h
            .dd()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        i64::try_from(x).map_err(|_| GroupError::Invalid("integer out of range".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(HomSpec {
            cc: strs(h.cc()),
            dd,
            dc: strs(h.dc()),
            atom_map: h.atom_map().to_vec(),
        })
    }
}
