//! Resolved divisor model and input validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::exactnum::{Scalar, Symbol, SymbolTable};

use super::input::{FoliationInput, HolonomyClass, TypeTag, FOL_SCHEMA_VERSION};
use super::{r0_invariants, r1_torsion, FolError, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationCode {
    Schema,
    UnknownReference,
    DuplicateId,
    Structure,
    Disconnected,
    MissingData,
    CsParse,
    Reciprocity,
    Normalization,
    CsType,
    SelfIntersection,
    HolonomyOrder,
    TypeHeterogeneity,
    Centralizer,
    ValencyTwo,
    TagData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub at: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = serde_json::to_value(self.code).expect("code serializes");
        write!(f, "{} at {}: {}", code.as_str().unwrap_or("?"), self.at, self.message)
    }
}

fn v(code: ViolationCode, at: impl Into<String>, message: impl Into<String>) -> Violation {
    Violation {
        code,
        at: at.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug)]
pub struct Comp {
    pub id: String,
    pub dicritical: bool,
    pub self_intersection: Option<i64>,
    pub rigid: bool,
    pub class: Option<HolonomyClass>,
    /// Σ points on this component, in declaration order of the points.
    pub sigma_points: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Corner([usize; 2]),
    Attachment(usize),
}

#[derive(Clone, Debug)]
pub struct Side {
    pub comp: usize,
    pub cs: Option<Scalar>,
    pub tag: TypeTag,
}

#[derive(Clone, Debug)]
pub struct Point {
    pub id: String,
    pub kind: PointKind,
    pub in_sigma: bool,
    pub nodal: bool,
    pub sides: Vec<Side>,
}

impl Point {
    pub fn comps(&self) -> Vec<usize> {
        match self.kind {
            PointKind::Corner(c) => c.to_vec(),
            PointKind::Attachment(c) => vec![c],
        }
    }
}

/// A validated foliation: components and points indexed by declaration order.
#[derive(Clone, Debug)]
pub struct Foliation {
    input: FoliationInput,
    table: Arc<SymbolTable>,
    pub comps: Vec<Comp>,
    pub points: Vec<Point>,
}

impl Foliation {
    pub fn new(input: FoliationInput) -> Result<Self, FolError> {
        let (model, mut violations) = resolve(&input);
        if let Some(m) = &model {
            violations.extend(m.consistency());
        }
        match model {
            Some(m) if violations.is_empty() => Ok(m),
            _ => Err(FolError::Invalid(violations)),
        }
    }

    pub fn input(&self) -> &FoliationInput {
        &self.input
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn name(&self) -> &str {
        self.input.name.as_deref().unwrap_or("foliation")
    }

    pub fn comp_index(&self, id: &str) -> Option<usize> {
        self.comps.iter().position(|c| c.id == id)
    }

    pub fn point_index(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn val_sigma(&self, c: usize) -> usize {
        self.comps[c].sigma_points.len()
    }

    pub fn side(&self, p: usize, c: usize) -> Option<&Side> {
        self.points[p].sides.iter().find(|s| s.comp == c)
    }

    pub fn tag(&self, p: usize, c: usize) -> &TypeTag {
        &self.side(p, c).expect("validated sides").tag
    }

    /// CS index on side `c`, falling back to the reciprocal of the other side.
    pub fn cs_at(&self, p: usize, c: usize) -> Option<Scalar> {
        if let Some(x) = self.side(p, c).and_then(|s| s.cs.clone()) {
            return Some(x);
        }
        self.points[p]
            .sides
            .iter()
            .find(|s| s.comp != c)
            .and_then(|s| s.cs.as_ref())
            .and_then(|x| x.inv().ok())
    }

    /// The side whose coordinate presents the edge group: the earlier declared component.
    pub fn preferred(&self, p: usize) -> usize {
        match self.points[p].kind {
            PointKind::Corner([a, b]) => a.min(b),
            PointKind::Attachment(c) => c,
        }
    }

    pub fn is_corner_edge(&self, p: usize) -> bool {
        let pt = &self.points[p];
        matches!(pt.kind, PointKind::Corner(_)) && pt.in_sigma
    }

    pub fn periodic_order(&self, p: usize, c: usize) -> Option<u64> {
        match self.tag(p, c) {
            TypeTag::P { order } => Some(*order),
            _ => None,
        }
    }

    /// Condition (TR): every cut-component other than a single component with
    /// at most two singular points contains a topologically rigid component.
    pub fn tr_computed(&self, cut_components: &[Vec<usize>]) -> bool {
        cut_components.iter().all(|cc| {
            let exceptional = cc.len() == 1 && self.val_sigma(cc[0]) <= 2;
            exceptional || cc.iter().any(|&c| self.comps[c].rigid)
        })
    }

    fn consistency(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (pi, pt) in self.points.iter().enumerate() {
            self.check_point(pi, pt, &mut out);
        }
        for (ci, c) in self.comps.iter().enumerate() {
            if !c.dicritical {
                self.check_component(ci, c, &mut out);
            }
        }
        out
    }

    fn check_point(&self, pi: usize, pt: &Point, out: &mut Vec<Violation>) {
        use ViolationCode::*;
        for s in &pt.sides {
            let at = format!("{}@{}", pt.id, self.comps[s.comp].id);
            check_tag_data(&s.tag, &at, out);
            if let Some(cs) = &s.cs {
                match (cs.rational_value(), &s.tag) {
                    (Some(_), TypeTag::L1 | TypeTag::L0 { .. }) => out.push(v(
                        CsType,
                        &at,
                        "a rational CS index gives a periodic or resonant linear part",
                    )),
                    (Some(q), TypeTag::P { order: n })
                    | (Some(q), TypeTag::R1 { p: n, .. })
                    | (Some(q), TypeTag::R0 { p: n, .. }) => {
                        if q.denom() != &BigInt::from(*n) {
                            out.push(v(
                                CsType,
                                &at,
                                format!("CS {} has linear part of order {}, tag says {n}", cs, q.denom()),
                            ));
                        }
                    }
                    (None, TypeTag::P { .. } | TypeTag::R1 { .. } | TypeTag::R0 { .. }) => out.push(v(
                        CsType,
                        &at,
                        "periodic or resonant holonomy needs a rational CS index",
                    )),
                    (None, _) => {}
                }
            }
        }
        let PointKind::Corner([a, b]) = pt.kind else {
            return;
        };
        if !pt.in_sigma {
            return;
        }
        let (sa, sb) = (self.side(pi, a), self.side(pi, b));
        let (Some(sa), Some(sb)) = (sa, sb) else {
            return;
        };
        if let (Some(x), Some(y)) = (&sa.cs, &sb.cs) {
            if !(x * y).is_one() {
                out.push(v(
                    Reciprocity,
                    &pt.id,
                    format!("CS indices {x} and {y} do not multiply to 1"),
                ));
            }
        }
        let same_class = match (&sa.tag, &sb.tag) {
            (TypeTag::P { .. }, TypeTag::P { .. }) | (TypeTag::L1, TypeTag::L1) => true,
            (TypeTag::L0 { atom: x }, TypeTag::L0 { atom: y }) => x == y,
            (TypeTag::R1 { p: p1, r: r1 }, TypeTag::R1 { p: p2, r: r2 }) => {
                r1_torsion(*p1, *r1) == r1_torsion(*p2, *r2)
            }
            (
                TypeTag::R0 { p: p1, r: r1, m: m1, beta_image_order: k1 },
                TypeTag::R0 { p: p2, r: r2, m: m2, beta_image_order: k2 },
            ) => r0_invariants(*p1, *r1, *m1, *k1) == r0_invariants(*p2, *r2, *m2, *k2),
            _ => false,
        };
        if !same_class {
            out.push(v(
                Normalization,
                &pt.id,
                format!(
                    "side types {} and {} are not in the same normalization class",
                    sa.tag.label(),
                    sb.tag.label()
                ),
            ));
        }
        if sa.tag == TypeTag::L1 && self.cs_at(pi, a).is_none() && self.red_point(pi) {
            out.push(v(MissingData, &pt.id, "a red L1 corner needs a CS index"));
        }
    }

    fn red_point(&self, p: usize) -> bool {
        self.points[p].sides.iter().all(|s| !s.tag.is_periodic())
    }

    fn check_component(&self, ci: usize, c: &Comp, out: &mut Vec<Violation>) {
        use ViolationCode::*;
        let at = c.id.clone();
        let Some(class) = &c.class else { return };
        let tags: Vec<(usize, &TypeTag)> = c
            .sigma_points
            .iter()
            .filter_map(|&p| self.side(p, ci).map(|s| (p, &s.tag)))
            .collect();
        if let (Some(si), true) = (c.self_intersection, tags.len() == c.sigma_points.len()) {
            let cs: Option<Vec<Scalar>> = c.sigma_points.iter().map(|&p| self.side(p, ci).and_then(|s| s.cs.clone())).collect();
            if let Some(cs) = cs {
                let sum = cs.iter().fold(Scalar::zero(), |a, b| &a + b);
                if sum != Scalar::from_int(si) {
                    out.push(v(
                        SelfIntersection,
                        &at,
                        format!("CS indices sum to {sum}, self-intersection is {si}"),
                    ));
                }
            }
        }
        let nonperiodic: Vec<&TypeTag> = tags.iter().map(|t| t.1).filter(|t| !t.is_periodic()).collect();
        match class {
            HolonomyClass::Finite { order } => {
                if !nonperiodic.is_empty() {
                    out.push(v(HolonomyOrder, &at, "finite holonomy with a non-periodic local holonomy"));
                }
                let l = tags
                    .iter()
                    .filter_map(|t| match t.1 {
                        TypeTag::P { order } => Some(*order),
                        _ => None,
                    })
                    .fold(1u64, |a, b| a.lcm(&b));
                if nonperiodic.is_empty() && l != *order {
                    out.push(v(
                        HolonomyOrder,
                        &at,
                        format!("n_D = {order} but the local orders have lcm {l}"),
                    ));
                }
            }
            HolonomyClass::AbelianInfinite => {
                if nonperiodic.is_empty() {
                    out.push(v(HolonomyOrder, &at, "infinite holonomy needs a non-periodic local holonomy"));
                }
                if !homogeneous(&nonperiodic) {
                    out.push(v(
                        TypeHeterogeneity,
                        &at,
                        "non-periodic local holonomies of an abelian group must be of the same type",
                    ));
                }
            }
            HolonomyClass::Nonabelian { centralizer } => {
                if c.sigma_points.len() < 3 {
                    out.push(v(ValencyTwo, &at, "a component with at most two singular points has cyclic holonomy"));
                }
                let nontrivial: Vec<u64> = centralizer.iter().copied().filter(|&n| n != 1).collect();
                if nontrivial.iter().any(|&n| n == 0) {
                    out.push(v(Centralizer, &at, "the centralizer of a non-abelian holonomy group is finite"));
                } else if nontrivial.len() > 1 {
                    out.push(v(Centralizer, &at, "finite subgroups of Diff(C,0) are cyclic"));
                } else {
                    let n = nontrivial.first().copied().unwrap_or(1);
                    for (p, t) in &tags {
                        let room = match t {
                            TypeTag::R1 { p, .. } => Some(*p),
                            TypeTag::R0 { beta_image_order, .. } => Some(*beta_image_order),
                            _ => None,
                        };
                        if let Some(room) = room {
                            if room % n != 0 {
                                out.push(v(
                                    Centralizer,
                                    format!("{}@{}", self.points[*p].id, at),
                                    format!("Z/{n} does not embed in the torsion Z/{room} of C(h)"),
                                ));
                            }
                        }
                    }
                }
            }
        }
        if c.sigma_points.len() == 2 && !matches!(class, HolonomyClass::Finite { .. }) {
            let (p1, p2) = (c.sigma_points[0], c.sigma_points[1]);
            if let (Some(s1), Some(s2)) = (self.side(p1, ci), self.side(p2, ci)) {
                let ok = match (&s1.tag, &s2.tag) {
                    (TypeTag::L1, TypeTag::L1) => match (self.cs_at(p1, ci), self.cs_at(p2, ci)) {
                        (Some(x), Some(y)) => (&x + &y).integer_value().is_some(),
                        _ => {
                            out.push(v(MissingData, &at, "an L1 component with two singular points needs both CS indices"));
                            true
                        }
                    },
                    (TypeTag::R1 { p: a, r: ra }, TypeTag::R1 { p: b, r: rb }) => {
                        a == b && ra.rem_euclid(*a as i64) == rb.rem_euclid(*b as i64)
                    }
                    (x @ TypeTag::R0 { .. }, y @ TypeTag::R0 { .. }) => x == y,
                    (TypeTag::L0 { atom: x }, TypeTag::L0 { atom: y }) => x == y,
                    _ => false,
                };
                if !ok {
                    out.push(v(
                        ValencyTwo,
                        &at,
                        "the two local holonomies of a component with two singular points generate the same group",
                    ));
                }
            }
        }
    }
}

fn homogeneous(tags: &[&TypeTag]) -> bool {
    let key = |t: &TypeTag| match t {
        TypeTag::P { .. } => (0, 0, 0, 0, String::new()),
        TypeTag::L1 => (1, 0, 0, 0, String::new()),
        TypeTag::L0 { atom } => (2, 0, 0, 0, atom.clone()),
        TypeTag::R1 { p, .. } => (3, *p, 0, 0, String::new()),
        TypeTag::R0 { p, m, beta_image_order, .. } => (4, *p, *m, *beta_image_order, String::new()),
    };
    tags.windows(2).all(|w| key(w[0]) == key(w[1]))
}

fn check_tag_data(t: &TypeTag, at: &str, out: &mut Vec<Violation>) {
    let bad = |m: &str| v(ViolationCode::TagData, at, m.to_string());
    match t {
        TypeTag::P { order } if *order == 0 => out.push(bad("periodic order must be positive")),
        TypeTag::L0 { atom } if atom.is_empty() => out.push(bad("empty atom name")),
        TypeTag::R1 { p, .. } if *p == 0 => out.push(bad("p must be positive")),
        TypeTag::R0 { p, r, m, beta_image_order: k } => {
            if *p == 0 || *m == 0 || *k == 0 {
                out.push(bad("p, m and beta_image_order must be positive"));
            } else if p % k != 0 {
                out.push(bad("beta_image_order must divide p"));
            } else if r.rem_euclid(*p as i64) % (*p / *k) as i64 != 0 {
                out.push(bad("h must lie in C(h): r is not in the image of beta"));
            }
        }
        _ => {}
    }
}

fn resolve(input: &FoliationInput) -> (Option<Foliation>, Vec<Violation>) {
    use ViolationCode::*;
    let mut out = Vec::new();
    if input.schema_version != FOL_SCHEMA_VERSION {
        out.push(v(
            Schema,
            "schema_version",
            format!("unsupported version {} (expected {FOL_SCHEMA_VERSION})", input.schema_version),
        ));
    }
    let mut symbols = input.symbols.clone();
    if !symbols.iter().any(|s| s.name == TAU) {
        symbols.push(Symbol {
            name: TAU.into(),
            display: Some("2πi".into()),
        });
    }
    let table = match SymbolTable::new(symbols) {
        Ok(t) => t.shared(),
        Err(e) => {
            out.push(v(Schema, "symbols", e.to_string()));
            SymbolTable::default().shared()
        }
    };
    let mut ids = BTreeSet::new();
    let all_ids = input
        .components
        .iter()
        .map(|c| &c.id)
        .chain(input.corners.iter().map(|c| &c.id))
        .chain(input.attachments.iter().map(|a| &a.id));
    for id in all_ids {
        if !ids.insert(id.clone()) {
            out.push(v(DuplicateId, id, "identifier used twice"));
        }
    }
    if input.components.is_empty() {
        out.push(v(Structure, "components", "the divisor has no component"));
    }
    let mut comps: Vec<Comp> = input
        .components
        .iter()
        .map(|c| Comp {
            id: c.id.clone(),
            dicritical: c.dicritical,
            self_intersection: c.self_intersection,
            rigid: c.topologically_rigid,
            class: None,
            sigma_points: Vec::new(),
        })
        .collect();
    let cidx = |id: &str| comps_index(&input.components, id);
    let mut points = Vec::new();
    for c in &input.corners {
        let (Some(a), Some(b)) = (cidx(&c.components[0]), cidx(&c.components[1])) else {
            out.push(v(UnknownReference, &c.id, "corner names an unknown component"));
            continue;
        };
        if a == b {
            out.push(v(Structure, &c.id, "a corner joins two distinct components"));
            continue;
        }
        let invariant = !comps[a].dicritical && !comps[b].dicritical;
        let in_sigma = c.in_sigma.unwrap_or(invariant);
        if in_sigma != invariant {
            out.push(v(
                Structure,
                &c.id,
                "corners between invariant components are in Σ, crossings with a dicritical component are not",
            ));
        }
        if c.nodal && !invariant {
            out.push(v(Structure, &c.id, "a nodal point joins two invariant components"));
        }
        points.push(Point {
            id: c.id.clone(),
            kind: PointKind::Corner([a, b]),
            in_sigma: in_sigma && invariant,
            nodal: c.nodal,
            sides: Vec::new(),
        });
    }
    for a in &input.attachments {
        let Some(c) = cidx(&a.component) else {
            out.push(v(UnknownReference, &a.id, "attachment names an unknown component"));
            continue;
        };
        if comps[c].dicritical {
            out.push(v(Structure, &a.id, "dicritical components carry no singular point"));
            continue;
        }
        points.push(Point {
            id: a.id.clone(),
            kind: PointKind::Attachment(c),
            in_sigma: true,
            nodal: false,
            sides: Vec::new(),
        });
    }
    for (pi, p) in points.iter().enumerate() {
        if p.in_sigma {
            for c in p.comps() {
                comps[c].sigma_points.push(pi);
            }
        }
    }
    let mut seen = BTreeSet::new();
    for s in &input.singularities {
        let at = format!("{}@{}", s.point, s.component);
        let (Some(pi), Some(ci)) = (points.iter().position(|p| p.id == s.point), cidx(&s.component)) else {
            out.push(v(UnknownReference, &at, "singularity names an unknown point or component"));
            continue;
        };
        if !points[pi].in_sigma || !points[pi].comps().contains(&ci) {
            out.push(v(Structure, &at, "singularity data for a point that is not a singular point of this component"));
            continue;
        }
        if !seen.insert((pi, ci)) {
            out.push(v(DuplicateId, &at, "singularity data given twice"));
            continue;
        }
        let cs = match &s.cs {
            None => None,
            Some(txt) => match Scalar::parse(txt, &table) {
                Ok(x) => Some(x),
                Err(e) => {
                    out.push(v(CsParse, &at, e.to_string()));
                    None
                }
            },
        };
        points[pi].sides.push(Side {
            comp: ci,
            cs,
            tag: s.tag.clone(),
        });
    }
    for p in &points {
        if p.in_sigma {
            for c in p.comps() {
                if !p.sides.iter().any(|s| s.comp == c) {
                    out.push(v(
                        MissingData,
                        format!("{}@{}", p.id, comps[c].id),
                        "no singularity data",
                    ));
                }
            }
        }
    }
    let mut held = BTreeMap::new();
    for h in &input.holonomies {
        let Some(ci) = cidx(&h.component) else {
            out.push(v(UnknownReference, &h.component, "holonomy for an unknown component"));
            continue;
        };
        if comps[ci].dicritical {
            out.push(v(Structure, &h.component, "a dicritical component has no holonomy"));
            continue;
        }
        if held.insert(ci, h.class.clone()).is_some() {
            out.push(v(DuplicateId, &h.component, "holonomy given twice"));
        }
    }
    for (ci, c) in comps.iter_mut().enumerate() {
        c.class = held.remove(&ci);
        if !c.dicritical && c.class.is_none() {
            out.push(v(MissingData, &c.id, "no holonomy class"));
        }
    }
    if !connected(comps.len(), &points) {
        out.push(v(Disconnected, "corners", "the dual graph is not connected"));
    }
    let model = Foliation {
        input: input.clone(),
        table,
        comps,
        points,
    };
    (Some(model), out)
}

fn comps_index(cs: &[super::input::ComponentSpec], id: &str) -> Option<usize> {
    cs.iter().position(|c| c.id == id)
}

fn connected(n: usize, points: &[Point]) -> bool {
    if n == 0 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for p in points {
        if let PointKind::Corner([a, b]) = p.kind {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let r0 = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == r0)
}

/// Every violation of the document, structural and arithmetic.
pub fn validate(input: &FoliationInput) -> Vec<Violation> {
    let (model, mut out) = resolve(input);
    if let Some(m) = model {
        out.extend(m.consistency());
    }
    out
}
