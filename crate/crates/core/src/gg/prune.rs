//! Dead branches and pruning.

use serde::Serialize;

use super::{GgError, Graph, GroupGraph};

/// A chain `v₀ — v₁ — … — v_ℓ` with `v_ℓ` an extremity of the graph and
/// `v₁ … v_{ℓ-1}` of valency 2. `edges[j]` joins `vertices[j]` and `vertices[j+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeadBranch {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl DeadBranch {
    pub fn attaching(&self) -> usize {
        self.vertices[0]
    }

    pub fn extremity(&self) -> usize {
        *self.vertices.last().expect("nonempty branch")
    }

    /// The outer part starting at `vertices[j]`, itself a partial dead branch.
    pub fn suffix(&self, j: usize) -> DeadBranch {
        DeadBranch {
            vertices: self.vertices[j..].to_vec(),
            edges: self.edges[j..].to_vec(),
        }
    }

    /// `(vertex, edge)` pairs whose restriction must be onto for repulsivity:
    /// each edge seen from its outer endpoint.
    pub fn outward_pairs(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .map(|(j, &e)| (self.vertices[j + 1], e))
            .collect()
    }

    /// Vertices and edges left after removing the branch but keeping `v₀`.
    pub fn complement(&self, g: &Graph) -> (Vec<usize>, Vec<usize>) {
        let vs = (0..g.n_vertices())
            .filter(|v| !self.vertices[1..].contains(v))
            .collect();
        let es = (0..g.n_edges())
            .filter(|e| !self.edges.contains(e))
            .collect();
        (vs, es)
    }

    pub fn names(&self, g: &Graph) -> Vec<String> {
        self.vertices
            .iter()
            .map(|&v| g.vertices()[v].clone())
            .collect()
    }
}

/// The maximal chain from each extremity inward, stopping at the first
/// vertex of valency other than 2. A path yields one branch from each end.
pub fn find_partial_dead_branches(g: &Graph) -> Vec<DeadBranch> {
    let mut out = Vec::new();
    for x in 0..g.n_vertices() {
        if !g.is_extremity(x) {
            continue;
        }
        let first = g.incident(x)[0];
        if g.edges()[first].is_loop() {
            continue;
        }
        let mut vertices = vec![x];
        let mut edges = Vec::new();
        let mut cur = x;
        let mut via = first;
        loop {
            let next = g.edges()[via].other(cur);
            edges.push(via);
            vertices.push(next);
            if g.valency(next) != 2 || vertices[..vertices.len() - 1].contains(&next) {
                break;
            }
            let Some(&nv) = g.incident(next).iter().find(|&&e| e != via) else {
                break;
            };
            if g.edges()[nv].is_loop() {
                break;
            }
            cur = next;
            via = nv;
        }
        vertices.reverse();
        edges.reverse();
        out.push(DeadBranch { vertices, edges });
    }
    out
}

pub fn is_repulsive(g: &GroupGraph, b: &DeadBranch) -> Result<bool, GgError> {
    for (v, e) in b.outward_pairs() {
        if !g.rho_from(v, e).is_surjective()? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn prune(g: &GroupGraph, b: &DeadBranch) -> Result<GroupGraph, GgError> {
    if !is_repulsive(g, b)? {
        return Err(GgError::NotRepulsive(g.graph().vertices()[b.attaching()].clone()));
    }
    let (vs, es) = b.complement(g.graph());
    g.restrict(&vs, &es)
}

/// Longest repulsive outer part of `b`, measured from the extremity.
pub(crate) fn repulsive_suffix<F>(b: &DeadBranch, mut onto: F) -> Result<Option<DeadBranch>, GgError>
where
    F: FnMut(usize, usize) -> Result<bool, GgError>,
{
    let pairs = b.outward_pairs();
    let mut k = pairs.len();
    while k > 0 {
        let (v, e) = pairs[k - 1];
        if !onto(v, e)? {
            break;
        }
        k -= 1;
    }
    Ok((k < pairs.len()).then(|| b.suffix(k)))
}

/// Prunes repulsive (partial) dead branches until none remains.
pub fn prune_all(g: &GroupGraph) -> Result<GroupGraph, GgError> {
    let mut cur = g.clone();
    'outer: loop {
        for b in find_partial_dead_branches(cur.graph()) {
            let snapshot = cur.clone();
            if let Some(s) =
                repulsive_suffix(&b, |v, e| Ok(snapshot.rho_from(v, e).is_surjective()?))?
            {
                let (vs, es) = s.complement(cur.graph());
                cur = cur.restrict(&vs, &es)?;
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}
