//! JSON shape for group-graphs: vertices, edges with their two ends, one group
//! payload per element and one rho payload per incidence.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgroup::{GroupHom, GroupSpec, HomSpec};
use crate::exactnum::SymbolTable;

use super::finite::{FiniteGroup, FiniteGroupGraph};
use super::{GgError, Graph, GroupGraph};

pub const GG_SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    GG_SCHEMA_VERSION
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupPayload {
    Presented(GroupSpec),
    /// Multiplication table; element 0 need not be the identity.
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoPayload {
    Hom(HomSpec),
    /// Image of each element of the vertex group.
    Map(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoSpec {
    pub vertex: String,
    pub edge: String,
    /// Needed only for loops: 0 for the tail incidence, 1 for the head.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    pub payload: RhoPayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupGraphDoc {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub symbols: Vec<String>,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    /// Keyed by vertex name or edge id.
    pub groups: BTreeMap<String, GroupPayload>,
    #[serde(default)]
    pub rho: Vec<RhoSpec>,
}

#[derive(Clone, Debug)]
pub enum LoadedGraph {
    Abelian(GroupGraph),
    Finite(FiniteGroupGraph),
}

fn invalid(msg: String) -> GgError {
    GgError::InvalidGraph(msg)
}

impl GroupGraphDoc {
    pub fn graph(&self) -> Result<Graph, GgError> {
        let edges: Vec<(&str, &str, &str)> = self
            .edges
            .iter()
            .map(|e| (e.id.as_str(), e.ends[0].as_str(), e.ends[1].as_str()))
            .collect();
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        Graph::new(&vs, &edges)
    }

    fn group(&self, name: &str) -> Result<&GroupPayload, GgError> {
        self.groups
            .get(name)
            .ok_or_else(|| invalid(format!("no group for {name}")))
    }

    /// `[tail, head]` payloads of every edge.
    fn rho_slots(&self, g: &Graph) -> Result<Vec<[Option<&RhoPayload>; 2]>, GgError> {
        let mut slots: Vec<[Option<&RhoPayload>; 2]> = vec![[None, None]; g.n_edges()];
        for r in &self.rho {
            let e = g.edge_index(&r.edge)?;
            let v = g.vertex_index(&r.vertex)?;
            let ed = &g.edges()[e];
            let side = if ed.is_loop() {
                match r.side {
                    Some(s @ (0 | 1)) if ed.tail == v => s,
                    _ => return Err(invalid(format!("loop {} needs side 0 or 1", ed.id))),
                }
            } else if ed.tail == v {
                0
            } else if ed.head == v {
                1
            } else {
                return Err(invalid(format!("{} is not an end of {}", r.vertex, r.edge)));
            };
            if slots[e][side].replace(&r.payload).is_some() {
                return Err(invalid(format!("duplicate rho for ({}, {})", r.vertex, r.edge)));
            }
        }
        for (e, s) in slots.iter().enumerate() {
            if s.iter().any(Option::is_none) {
                return Err(invalid(format!("missing rho on edge {}", g.edges()[e].id)));
            }
        }
        Ok(slots)
    }

    pub fn load(&self) -> Result<LoadedGraph, GgError> {
        if self.schema_version != GG_SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let g = self.graph()?;
        let names: Vec<&str> = g
            .vertices()
            .iter()
            .map(String::as_str)
            .chain(g.edges().iter().map(|e| e.id.as_str()))
            .collect();
        for k in self.groups.keys() {
            if !names.contains(&k.as_str()) {
                return Err(invalid(format!("group given for unknown element {k}")));
            }
        }
        let tables = names
            .iter()
            .filter(|n| matches!(self.groups.get(**n), Some(GroupPayload::Table(_))))
            .count();
        if tables == names.len() && !names.is_empty() {
            self.load_finite(g).map(LoadedGraph::Finite)
        } else if tables == 0 {
            self.load_abelian(g).map(LoadedGraph::Abelian)
        } else {
            Err(invalid("mixed table and presented groups".into()))
        }
    }

    fn load_finite(&self, g: Graph) -> Result<FiniteGroupGraph, GgError> {
        let table = |n: &str| -> Result<FiniteGroup, GgError> {
            match self.group(n)? {
                GroupPayload::Table(t) => FiniteGroup::from_table(t.clone()),
                GroupPayload::Presented(_) => unreachable!("checked by load"),
            }
        };
        let vg = g
            .vertices()
            .iter()
            .map(|v| table(v))
            .collect::<Result<Vec<_>, _>>()?;
        let eg = g
            .edges()
            .iter()
            .map(|e| table(&e.id))
            .collect::<Result<Vec<_>, _>>()?;
        let map = |p: Option<&RhoPayload>| match p {
            Some(RhoPayload::Map(m)) => Ok(m.clone()),
            _ => Err(invalid("table groups need map payloads".into())),
        };
        let rho = self
            .rho_slots(&g)?
            .into_iter()
            .map(|[t, h]| Ok([map(t)?, map(h)?]))
            .collect::<Result<Vec<_>, GgError>>()?;
        FiniteGroupGraph::new(g, vg, eg, rho)
    }

    fn load_abelian(&self, g: Graph) -> Result<GroupGraph, GgError> {
        let t: Arc<SymbolTable> = SymbolTable::from_names(&self.symbols)
            .map_err(|e| invalid(format!("symbols: {e}")))?
            .shared();
        let presented = |n: &str| -> Result<_, GgError> {
            match self.group(n)? {
                GroupPayload::Presented(s) => Ok(s.to_group(&t)?),
                GroupPayload::Table(_) => unreachable!("checked by load"),
            }
        };
        let vg = g
            .vertices()
            .iter()
            .map(|v| presented(v))
            .collect::<Result<Vec<_>, _>>()?;
        let eg = g
            .edges()
            .iter()
            .map(|e| presented(&e.id))
            .collect::<Result<Vec<_>, _>>()?;
        let mut rho = Vec::new();
        for (e, slot) in self.rho_slots(&g)?.into_iter().enumerate() {
            let ed = &g.edges()[e];
            let mut pair = Vec::new();
            for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
                let h: GroupHom = match slot[side] {
                    Some(RhoPayload::Hom(s)) => s.to_hom(vg[v].clone(), eg[e].clone(), &t)?,
                    _ => return Err(invalid("presented groups need hom payloads".into())),
                };
                pair.push(h);
            }
            let h = pair.pop().expect("two sides");
            let tl = pair.pop().expect("two sides");
            rho.push([tl, h]);
        }
        GroupGraph::new(g, vg, eg, rho)
    }

    /// Document for a finite group-graph, e.g. to dump a failing instance.
    pub fn from_finite(f: &FiniteGroupGraph) -> Self {
        let g = f.graph();
        let mut groups = BTreeMap::new();
        for (v, name) in g.vertices().iter().enumerate() {
            groups.insert(name.clone(), GroupPayload::Table(f.vertex_group(v).table().to_vec()));
        }
        let mut rho = Vec::new();
        for (e, ed) in g.edges().iter().enumerate() {
            groups.insert(ed.id.clone(), GroupPayload::Table(f.edge_group(e).table().to_vec()));
            for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
                rho.push(RhoSpec {
                    vertex: g.vertices()[v].clone(),
                    edge: ed.id.clone(),
                    side: ed.is_loop().then_some(side),
                    payload: RhoPayload::Map(f.rho(e, side).to_vec()),
                });
            }
        }
        GroupGraphDoc {
            schema_version: GG_SCHEMA_VERSION,
            symbols: Vec::new(),
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    ends: [g.vertices()[e.tail].clone(), g.vertices()[e.head].clone()],
                })
                .collect(),
            groups,
            rho,
        }
    }

    /// Document for an abelian group-graph.
    pub fn from_abelian(a: &GroupGraph) -> Result<Self, GgError> {
        let g = a.graph();
        let symbols = a
            .vertex_groups()
            .iter()
            .chain(a.edge_groups())
            .find_map(|x| x.table())
            .map(|t| t.symbols().iter().map(|s| s.name.clone()).collect())
            .unwrap_or_default();
        let mut groups = BTreeMap::new();
        for (v, name) in g.vertices().iter().enumerate() {
            groups.insert(name.clone(), GroupPayload::Presented(GroupSpec::from_group(a.vertex_group(v))?));
        }
        let mut rho = Vec::new();
        for (e, ed) in g.edges().iter().enumerate() {
            groups.insert(ed.id.clone(), GroupPayload::Presented(GroupSpec::from_group(a.edge_group(e))?));
            for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
                rho.push(RhoSpec {
                    vertex: g.vertices()[v].clone(),
                    edge: ed.id.clone(),
                    side: ed.is_loop().then_some(side),
                    payload: RhoPayload::Hom(HomSpec::from_hom(a.rho(e, side))?),
                });
            }
        }
        Ok(GroupGraphDoc {
            schema_version: GG_SCHEMA_VERSION,
            symbols,
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    ends: [g.vertices()[e.tail].clone(), g.vertices()[e.head].clone()],
                })
                .collect(),
            groups,
            rho,
        })
    }
}
