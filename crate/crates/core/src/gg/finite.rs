//! Finite groups as multiplication tables, finite group-graphs, and the
//! brute-force H¹ oracle.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::abgroup::{GroupHom, PresentedAbelianGroup, Relation};

use super::prune::{find_partial_dead_branches, repulsive_suffix, DeadBranch};
use super::{GgError, Graph, GroupGraph};

pub const DEFAULT_BOUND: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    #[serde(skip)]
    identity: usize,
    #[serde(skip)]
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GgError> {
        let n = table.len();
        if n == 0 {
            return Err(GgError::InvalidTable("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GgError::InvalidTable("table is not a closed n x n array".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| GgError::InvalidTable("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| GgError::InvalidTable(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GgError::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table).expect("cyclic group")
    }

    pub fn product(&self, o: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), o.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + o.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table).expect("product of groups")
    }

    /// Symmetric group on three letters.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        Self::from_perms(&perms)
    }

    /// Symmetries of a square.
    pub fn dihedral4() -> Self {
        let r = [1, 2, 3, 0];
        let s = [0, 3, 2, 1];
        let mut perms: Vec<[usize; 4]> = Vec::new();
        let mut cur = [0, 1, 2, 3];
        for _ in 0..4 {
            perms.push(cur);
            perms.push([s[cur[0]], s[cur[1]], s[cur[2]], s[cur[3]]]);
            cur = [r[cur[0]], r[cur[1]], r[cur[2]], r[cur[3]]];
        }
        Self::from_perms(&perms)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // elements: sign * unit, unit in {1,i,j,k}; index = 4*sign + unit
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 1) => (true, 3),
                (2, 3) => (false, 1),
                (3, 2) => (true, 1),
                (3, 1) => (false, 2),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (neg, u) = unit_mul(x % 4, y % 4);
                        let sign = (x / 4 + y / 4 + usize::from(neg)) % 2;
                        4 * sign + u
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table).expect("quaternion group")
    }

    fn from_perms<const K: usize>(perms: &[[usize; K]]) -> Self {
        let idx = |p: &[usize; K]| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let mut c = [0; K];
                        for (i, ci) in c.iter_mut().enumerate() {
                            *ci = a[b[i]];
                        }
                        idx(&c)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table).expect("permutation group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// A greedy generating set, elements in increasing index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = self.generated(&gens);
        for x in 0..self.order() {
            if !sub.contains(&x) {
                gens.push(x);
                sub = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_hom_to(&self, cod: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&y| y < cod.order())
            && (0..self.order()).all(|a| {
                (0..self.order()).all(|b| map[self.mul(a, b)] == cod.mul(map[a], map[b]))
            })
    }

    /// The abelian group as `Z^n` over all elements modulo the table relations.
    pub fn to_presented(&self) -> Result<PresentedAbelianGroup, GgError> {
        if !self.is_abelian() {
            return Err(GgError::NotAbelian);
        }
        let n = self.order();
        let unit = |i: usize| {
            let mut v = vec![BigInt::from(0); n];
            v[i] += 1;
            v
        };
        let mut rels = vec![Relation::lattice(vec![], unit(self.identity))];
        for a in 0..n {
            for b in a..n {
                let mut v = unit(a);
                v[b] += 1;
                v[self.mul(a, b)] -= 1;
                if v.iter().any(|x| x != &BigInt::from(0)) {
                    rels.push(Relation::lattice(vec![], v));
                }
            }
        }
        Ok(PresentedAbelianGroup::new(None, 0, n, vec![], rels)?)
    }
}

/// All homomorphisms `dom → cod`, determined by images of generators.
pub fn all_homs(dom: &FiniteGroup, cod: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = dom.generators();
    let k = gens.len();
    let m = cod.order();
    let mut out = Vec::new();
    let total = m.pow(k as u32);
    'cand: for code in 0..total {
        let mut c = code;
        let imgs: Vec<usize> = (0..k)
            .map(|_| {
                let x = c % m;
                c /= m;
                x
            })
            .collect();
        let mut map = vec![usize::MAX; dom.order()];
        map[dom.identity()] = cod.identity();
        let mut stack = vec![dom.identity()];
        while let Some(x) = stack.pop() {
            for (g, &ig) in gens.iter().zip(&imgs) {
                let y = dom.mul(x, *g);
                let iy = cod.mul(map[x], ig);
                if map[y] == usize::MAX {
                    map[y] = iy;
                    stack.push(y);
                } else if map[y] != iy {
                    continue 'cand;
                }
            }
        }
        if dom.is_hom_to(cod, &map) {
            out.push(map);
        }
    }
    out
}

pub fn is_onto(cod: &FiniteGroup, map: &[usize]) -> bool {
    let img: BTreeSet<usize> = map.iter().copied().collect();
    img.len() == cod.order()
}

/// Group-graph of explicit finite groups; `rho[e] = [tail map, head map]`.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteGroupGraph {
    graph: Graph,
    vgroups: Vec<FiniteGroup>,
    egroups: Vec<FiniteGroup>,
    rho: Vec<[Vec<usize>; 2]>,
}

/// Orbit count of the `C⁰` action on `Z¹ ≅ ∏_e G_e`, with the least state of
/// each orbit (states are mixed-radix edge tuples).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteH1 {
    pub count: usize,
    pub representatives: Vec<Vec<usize>>,
}

impl FiniteGroupGraph {
    pub fn new(
        graph: Graph,
        vgroups: Vec<FiniteGroup>,
        egroups: Vec<FiniteGroup>,
        rho: Vec<[Vec<usize>; 2]>,
    ) -> Result<Self, GgError> {
        if vgroups.len() != graph.n_vertices()
            || egroups.len() != graph.n_edges()
            || rho.len() != graph.n_edges()
        {
            return Err(GgError::InvalidGraph("group or rho count mismatch".into()));
        }
        for (e, ed) in graph.edges().iter().enumerate() {
            for (side, v) in [ed.tail, ed.head].into_iter().enumerate() {
                if !vgroups[v].is_hom_to(&egroups[e], &rho[e][side]) {
                    return Err(GgError::InvalidTable(format!(
                        "rho({}, {}) is not a homomorphism",
                        graph.vertices()[v],
                        ed.id
                    )));
                }
            }
        }
        Ok(FiniteGroupGraph {
            graph,
            vgroups,
            egroups,
            rho,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_group(&self, v: usize) -> &FiniteGroup {
        &self.vgroups[v]
    }

    pub fn edge_group(&self, e: usize) -> &FiniteGroup {
        &self.egroups[e]
    }

    pub fn rho(&self, e: usize, side: usize) -> &[usize] {
        &self.rho[e][side]
    }

    pub fn rho_from(&self, v: usize, e: usize) -> &[usize] {
        if self.graph.edges()[e].tail == v {
            &self.rho[e][0]
        } else {
            &self.rho[e][1]
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.vgroups.iter().chain(&self.egroups).all(FiniteGroup::is_abelian)
    }

    pub fn state_space(&self) -> u128 {
        self.vgroups
            .iter()
            .chain(&self.egroups)
            .map(|g| g.order() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    pub fn brute_force_h1(&self, bound: u128) -> Result<BruteH1, GgError> {
        let needed = self.state_space();
        if needed > bound {
            return Err(GgError::BoundExceeded { needed, bound });
        }
        let radix: Vec<usize> = self.egroups.iter().map(FiniteGroup::order).collect();
        let total: usize = radix.iter().product();
        let decode = |mut s: usize| -> Vec<usize> {
            radix
                .iter()
                .map(|&r| {
                    let x = s % r;
                    s /= r;
                    x
                })
                .collect()
        };
        let encode = |v: &[usize]| -> usize {
            v.iter()
                .zip(&radix)
                .rev()
                .fold(0, |acc, (&x, &r)| acc * r + x)
        };
        let moves: Vec<(usize, usize)> = (0..self.vgroups.len())
            .flat_map(|v| self.vgroups[v].generators().into_iter().map(move |g| (v, g)))
            .collect();
        let incident: Vec<Vec<usize>> = (0..self.vgroups.len())
            .map(|v| self.graph.incident(v))
            .collect();
        let mut seen = vec![false; total];
        let mut representatives = Vec::new();
        for start in 0..total {
            if seen[start] {
                continue;
            }
            representatives.push(decode(start));
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(s) = stack.pop() {
                let state = decode(s);
                for &(v, g) in &moves {
                    let mut next = state.clone();
                    for &e in &incident[v] {
                        let ed = &self.graph.edges()[e];
                        let ge = &self.egroups[e];
                        let mut x = next[e];
                        if ed.tail == v {
                            x = ge.mul(ge.inv(self.rho[e][0][g]), x);
                        }
                        if ed.head == v {
                            x = ge.mul(x, self.rho[e][1][g]);
                        }
                        next[e] = x;
                    }
                    let t = encode(&next);
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        Ok(BruteH1 {
            count: representatives.len(),
            representatives,
        })
    }

    pub fn restrict(&self, verts: &[usize], edges: &[usize]) -> Result<FiniteGroupGraph, GgError> {
        let graph = self.graph.subgraph(verts, edges)?;
        let vs: BTreeSet<usize> = verts.iter().copied().collect();
        let es: BTreeSet<usize> = edges.iter().copied().collect();
        Ok(FiniteGroupGraph {
            graph,
            vgroups: vs.iter().map(|&v| self.vgroups[v].clone()).collect(),
            egroups: es.iter().map(|&e| self.egroups[e].clone()).collect(),
            rho: es.iter().map(|&e| self.rho[e].clone()).collect(),
        })
    }

    pub fn is_repulsive(&self, b: &DeadBranch) -> bool {
        b.outward_pairs()
            .into_iter()
            .all(|(v, e)| is_onto(&self.egroups[e], self.rho_from(v, e)))
    }

    pub fn prune(&self, b: &DeadBranch) -> Result<FiniteGroupGraph, GgError> {
        if !self.is_repulsive(b) {
            return Err(GgError::NotRepulsive(
                self.graph.vertices()[b.attaching()].clone(),
            ));
        }
        let (vs, es) = b.complement(&self.graph);
        self.restrict(&vs, &es)
    }

    /// Removes the branch without checking repulsivity.
    pub fn prune_unchecked(&self, b: &DeadBranch) -> Result<FiniteGroupGraph, GgError> {
        let (vs, es) = b.complement(&self.graph);
        self.restrict(&vs, &es)
    }

    /// Replaces `rho[e][side]` by the trivial hom.
    pub fn with_trivial_rho(&self, e: usize, side: usize) -> FiniteGroupGraph {
        let mut out = self.clone();
        let id = self.egroups[e].identity();
        let n = out.rho[e][side].len();
        out.rho[e][side] = vec![id; n];
        out
    }

    pub fn prune_all(&self) -> Result<FiniteGroupGraph, GgError> {
        let mut cur = self.clone();
        'outer: loop {
            for b in find_partial_dead_branches(cur.graph()) {
                let s = repulsive_suffix(&b, |v, e| {
                    Ok(is_onto(&cur.egroups[e], cur.rho_from(v, e)))
                })?;
                if let Some(s) = s {
                    let (vs, es) = s.complement(cur.graph());
                    cur = cur.restrict(&vs, &es)?;
                    continue 'outer;
                }
            }
            return Ok(cur);
        }
    }

    /// The same data as a presented abelian group-graph.
    pub fn to_abelian(&self) -> Result<GroupGraph, GgError> {
        let vg = self
            .vgroups
            .iter()
            .map(FiniteGroup::to_presented)
            .collect::<Result<Vec<_>, _>>()?;
        let eg = self
            .egroups
            .iter()
            .map(FiniteGroup::to_presented)
            .collect::<Result<Vec<_>, _>>()?;
        let mut rho = Vec::new();
        for (e, ed) in self.graph.edges().iter().enumerate() {
            let mk = |v: usize, side: usize| -> Result<GroupHom, GgError> {
                let (n, m) = (self.vgroups[v].order(), self.egroups[e].order());
                let dd = (0..m)
                    .map(|i| {
                        (0..n)
                            .map(|j| BigInt::from(u8::from(self.rho[e][side][j] == i)))
                            .collect()
                    })
                    .collect();
                Ok(GroupHom::new(
                    vg[v].clone(),
                    eg[e].clone(),
                    vec![],
                    dd,
                    vec![],
                    vec![],
                )?)
            };
            rho.push([mk(ed.tail, 0)?, mk(ed.head, 1)?]);
        }
        GroupGraph::new(self.graph.clone(), vg, eg, rho)
    }
}
