//! The two moduli pipelines and their report.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::abgroup::{classify, direct_sum, kernel, FactorKind, NormalFormReport, PresentedAbelianGroup};
use crate::gg::{h1, prune_all, GroupGraph, Verdict};

use super::graphs::{
    build_cut_graph, check_tc, color, singular_chains, tau, zones, Chain, ChainClass, Coloring,
    CutGraph, Sub,
};
use super::groups::{build_red_group_graphs, RedGroupGraphs};
use super::model::Foliation;
use super::predicates::{finite_type_with, is_non_degenerate, prune_green};
use super::FolError;

/// `(λ, ν, β, μ)`: linearizable, resonant normalizable, non-resonant
/// non-linearizable and resonant non-normalizable chains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainCounts {
    pub lambda: usize,
    pub nu: usize,
    pub beta: usize,
    pub mu: usize,
}

impl ChainCounts {
    fn of(chains: &[Chain]) -> Self {
        let mut c = ChainCounts::default();
        for ch in chains {
            match ch.class {
                ChainClass::Linearizable => c.lambda += 1,
                ChainClass::ResonantNormalizable => c.nu += 1,
                ChainClass::NonResonantNonLinearizable => c.beta += 1,
                ChainClass::ResonantNonNormalizable => c.mu += 1,
                ChainClass::Periodic => {}
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainInfo {
    pub vertices: Vec<String>,
    pub terminal_edge: String,
    pub class: ChainClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZoneInfo {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub boundary: Vec<String>,
    pub active: usize,
    pub h1_exp: NormalFormReport,
}

/// Closed form for non-degenerate inputs: `H¹(R, Sym) ≅ Z̃¹/∂⁰C̃⁰`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct B0Section {
    /// Union of the singular chains (with the branching red vertices).
    pub rbar: Vec<String>,
    /// `⊕ Sym_s` over the terminal edges of the chains.
    pub z_tilde: NormalFormReport,
    /// `⊕ C(H_D)` over the red vertices of valency at least three.
    pub c_tilde: NormalFormReport,
    /// `H¹(R̄, Sym)`, `H¹(R, Sym)` and the pruned `H¹` agree.
    pub pruning_agrees: bool,
    pub lambda_plus_nu_equals_tau: bool,
    /// `μ + ν` against the declared number of Puiseux pairs, when given.
    pub puiseux_agrees: Option<bool>,
}

/// `Z^p → C^τ → Mod → D → 0` with `F = ker(H¹(R, Exp) → H¹(R, Sym))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceSection {
    pub p: usize,
    pub tau: usize,
    pub h1_exp: NormalFormReport,
    pub d: NormalFormReport,
    pub f: NormalFormReport,
    pub verdict: String,
    pub zones: Vec<ZoneInfo>,
    /// `⊕_α H¹(Z^α, Exp) ≅ H¹(R, Exp)`.
    pub zones_agree: bool,
    /// Sum of active vertices equals `τ`.
    pub active_equals_tau: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub name: String,
    pub pipeline: String,
    pub tc_ok: bool,
    pub finite_type: bool,
    pub non_degenerate: bool,
    pub tau: usize,
    pub chain_counts: ChainCounts,
    pub chains: Vec<ChainInfo>,
    pub red: Vec<String>,
    pub r0: Vec<String>,
    /// Cut-graph after pruning the green repulsive dead branches.
    pub pruned: Vec<String>,
    pub b0: Option<B0Section>,
    pub sequence: Option<SequenceSection>,
    /// Normal form of `H¹(R, Sym)`.
    pub moduli: NormalFormReport,
    /// Set when both pipelines ran: their moduli are isomorphic.
    pub pipelines_agree: Option<bool>,
    pub text: String,
}

struct Setup {
    cg: CutGraph,
    col: Coloring,
    chains: Vec<Chain>,
    tau: usize,
}

fn setup(f: &Foliation) -> Result<Setup, FolError> {
    if !check_tc(f) {
        return Err(FolError::TcViolated);
    }
    let cg = build_cut_graph(f);
    let col = color(f, &cg);
    let chains = singular_chains(f, &cg)?;
    let tau = tau(&cg, &col.red, &col.r0);
    Ok(Setup { cg, col, chains, tau })
}

fn edge_names(cg: &CutGraph, es: &[usize]) -> Vec<String> {
    es.iter().map(|&e| cg.graph.edges()[e].id.clone()).collect()
}

fn vertex_names(cg: &CutGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| cg.graph.vertices()[v].clone()).collect()
}

fn base_report(f: &Foliation, s: &Setup, pipeline: &str, moduli: NormalFormReport) -> ModuliReport {
    let cg = &s.cg;
    ModuliReport {
        name: f.name().to_string(),
        pipeline: pipeline.to_string(),
        tc_ok: true,
        finite_type: finite_type_with(f, cg, &s.col).finite_type,
        non_degenerate: is_non_degenerate(f).map(|r| r.non_degenerate).unwrap_or(false),
        tau: s.tau,
        chain_counts: ChainCounts::of(&s.chains),
        chains: s
            .chains
            .iter()
            .map(|c| ChainInfo {
                vertices: c.names(cg),
                terminal_edge: cg.graph.edges()[c.terminal_edge()].id.clone(),
                class: c.class,
            })
            .collect(),
        red: s.col.red.names(cg),
        r0: s.col.r0.names(cg),
        pruned: prune_green(f, cg, &s.col).names(cg),
        b0: None,
        sequence: None,
        moduli,
        pipelines_agree: None,
        text: String::new(),
    }
}

fn trivial_report() -> NormalFormReport {
    classify(&PresentedAbelianGroup::trivial())
}

fn red_groups(f: &Foliation, s: &Setup) -> Result<Option<RedGroupGraphs>, FolError> {
    if s.col.red.vertices.is_empty() {
        return Ok(None);
    }
    build_red_group_graphs(f, &s.cg, &s.col.red).map(Some)
}

fn restrict(g: &GroupGraph, cg: &CutGraph, sub: &Sub) -> Result<GroupGraph, FolError> {
    let vs = vertex_names(cg, &sub.vertices);
    let es = edge_names(cg, &sub.edges);
    let vs: Vec<&str> = vs.iter().map(String::as_str).collect();
    let es: Vec<&str> = es.iter().map(String::as_str).collect();
    Ok(g.restrict_by_name(&vs, &es)?)
}

fn sum_report(groups: Vec<PresentedAbelianGroup>) -> Result<NormalFormReport, FolError> {
    if groups.is_empty() {
        return Ok(trivial_report());
    }
    Ok(classify(&direct_sum(&groups)?.group))
}

/// Theorem-B0 pipeline: prune `Sym` to the union of the singular chains.
pub fn compute_moduli_nondegenerate(f: &Foliation) -> Result<ModuliReport, FolError> {
    let s = setup(f)?;
    let nd = is_non_degenerate(f)?;
    if !nd.non_degenerate {
        return Err(FolError::NotNonDegenerate(nd.witness.unwrap_or_default()));
    }
    let cg = &s.cg;
    let mut rv: BTreeSet<usize> = BTreeSet::new();
    let mut re: BTreeSet<usize> = BTreeSet::new();
    for ch in &s.chains {
        rv.extend(&ch.vertices);
        re.extend(&ch.edges);
    }
    let branching: Vec<usize> = s
        .col
        .red
        .vertices
        .iter()
        .copied()
        .filter(|&v| f.val_sigma(cg.comp[v]) >= 3)
        .collect();
    rv.extend(&branching);
    let rbar = Sub {
        vertices: rv.into_iter().collect(),
        edges: re.into_iter().collect(),
    };
    if rbar.vertices.iter().any(|v| !s.col.red.vertices.contains(v))
        || rbar.edges.iter().any(|e| !s.col.red.edges.contains(e))
    {
        return Err(FolError::Inconsistent("a singular chain leaves the red graph".into()));
    }
    let counts = ChainCounts::of(&s.chains);
    let lambda_plus_nu = counts.lambda + counts.nu == s.tau;
    if !lambda_plus_nu {
        return Err(FolError::Inconsistent(format!(
            "λ + ν = {} differs from τ = {}",
            counts.lambda + counts.nu,
            s.tau
        )));
    }
    let (moduli, b0) = match red_groups(f, &s)? {
        None => {
            let t = trivial_report();
            let b0 = B0Section {
                rbar: Vec::new(),
                z_tilde: t.clone(),
                c_tilde: t.clone(),
                pruning_agrees: true,
                lambda_plus_nu_equals_tau: true,
                puiseux_agrees: None,
            };
            (t, b0)
        }
        Some(rg) => {
            let sym_rbar = restrict(&rg.sym, cg, &rbar)?;
            let on_rbar = classify(&h1(&sym_rbar)?);
            let on_r = classify(&h1(&rg.sym)?);
            let pruned = classify(&h1(&prune_all(&rg.sym)?)?);
            let pruning_agrees = on_rbar.isomorphic(&on_r) && on_r.isomorphic(&pruned);
            let terminal: BTreeSet<usize> = s.chains.iter().map(Chain::terminal_edge).collect();
            let pos = |e: usize| rg.sub.edges.binary_search(&e).expect("chain edges are red");
            let z = terminal.iter().map(|&e| rg.sym.edge_group(pos(e)).clone()).collect();
            let vpos = |v: usize| rg.sub.vertices.binary_search(&v).expect("red vertex");
            let c = branching.iter().map(|&v| rg.sym.vertex_group(vpos(v)).clone()).collect();
            let b0 = B0Section {
                rbar: rbar.names(cg),
                z_tilde: sum_report(z)?,
                c_tilde: sum_report(c)?,
                pruning_agrees,
                lambda_plus_nu_equals_tau: true,
                puiseux_agrees: f
                    .input()
                    .flags
                    .puiseux_pairs
                    .map(|n| n == counts.mu + counts.nu),
            };
            (on_rbar, b0)
        }
    };
    if !b0.pruning_agrees {
        return Err(FolError::Inconsistent(
            "H¹ over the chains differs from H¹ over the red graph".into(),
        ));
    }
    let mut rep = base_report(f, &s, "non-degenerate", moduli);
    rep.b0 = Some(b0);
    rep.text = render(&rep);
    Ok(rep)
}

/// General pipeline: the long exact sequence of `0 → Exp → Sym → Dis → 0`.
pub fn compute_moduli_finite_type(f: &Foliation) -> Result<ModuliReport, FolError> {
    let s = setup(f)?;
    let ft = finite_type_with(f, &s.cg, &s.col);
    if !ft.finite_type {
        return Err(FolError::NotFiniteType(ft.witness.unwrap_or_default()));
    }
    let cg = &s.cg;
    let Some(rg) = red_groups(f, &s)? else {
        let t = trivial_report();
        let mut rep = base_report(f, &s, "finite-type", t.clone());
        rep.sequence = Some(SequenceSection {
            p: 0,
            tau: 0,
            h1_exp: t.clone(),
            d: t.clone(),
            f: t,
            verdict: "exact".into(),
            zones: Vec::new(),
            zones_agree: true,
            active_equals_tau: s.tau == 0,
        });
        rep.text = render(&rep);
        return Ok(rep);
    };
    let six = crate::gg::long_exact_sequence(&rg.exp, &rg.sym, &rg.dis, &rg.inclusion, &rg.projection)?;
    let verdict = match &six.verdict {
        Verdict::Exact => "exact".to_string(),
        Verdict::NotExact { at } => {
            return Err(FolError::Inconsistent(format!("long exact sequence fails at {at:?}")));
        }
        Verdict::Unverified { reason } => format!("unverified: {reason}"),
    };
    let h1_exp = six.reports[3].clone();
    let dim: usize = h1_exp.factors.iter().map(|x| x.dim).sum();
    if dim != s.tau {
        return Err(FolError::Inconsistent(format!(
            "H¹(R, Exp) has dimension {dim}, codimension is {}",
            s.tau
        )));
    }
    let p = h1_exp.factors.iter().map(|x| x.lattice.len()).sum();
    let fker = classify(&kernel(&six.maps[3])?.group);
    if !fker.is_finite {
        return Err(FolError::NonFiniteTypeKernel(format!(
            "ker(H¹(R, Exp) → H¹(R, Sym)) = {}",
            fker.text
        )));
    }
    let mut zone_infos = Vec::new();
    let mut zone_groups = Vec::new();
    for z in zones(cg, &s.col.red, &s.col.r0) {
        let g = h1(&restrict(&rg.exp, cg, &z.sub)?)?;
        zone_infos.push(ZoneInfo {
            vertices: vertex_names(cg, &z.sub.vertices),
            edges: edge_names(cg, &z.sub.edges),
            boundary: vertex_names(cg, &z.boundary),
            active: z.active,
            h1_exp: classify(&g),
        });
        zone_groups.push(g);
    }
    let zones_agree = sum_report(zone_groups)?.isomorphic(&h1_exp);
    let active_equals_tau = zone_infos.iter().map(|z| z.active).sum::<usize>() == s.tau;
    let moduli = six.reports[4].clone();
    let mut rep = base_report(f, &s, "finite-type", moduli);
    rep.sequence = Some(SequenceSection {
        p,
        tau: s.tau,
        h1_exp,
        d: six.reports[5].clone(),
        f: fker,
        verdict,
        zones: zone_infos,
        zones_agree,
        active_equals_tau,
    });
    rep.text = render(&rep);
    Ok(rep)
}

/// Runs every pipeline that applies; when both do, merges them and records
/// whether their moduli agree.
pub fn compute_moduli(f: &Foliation) -> Result<ModuliReport, FolError> {
    let nd = is_non_degenerate(f)?.non_degenerate;
    let ft = compute_moduli_finite_type(f);
    if !nd {
        return ft;
    }
    let mut rep = compute_moduli_nondegenerate(f)?;
    if let Ok(t) = ft {
        rep.pipelines_agree = Some(t.moduli.isomorphic(&rep.moduli));
        rep.sequence = t.sequence;
        rep.pipeline = "non-degenerate + finite-type".into();
    }
    rep.text = render(&rep);
    Ok(rep)
}

fn render(r: &ModuliReport) -> String {
    let mut t = String::new();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(t, "foliation: {}", r.name);
    let _ = writeln!(
        t,
        "(TC): {}; finite type: {}; non-degenerate: {}",
        yes(r.tc_ok),
        yes(r.finite_type),
        yes(r.non_degenerate)
    );
    let _ = writeln!(t, "red graph R: {}", list(&r.red));
    let _ = writeln!(t, "R⁰: {}", list(&r.r0));
    let _ = writeln!(t, "pruned cut-graph: {}", list(&r.pruned));
    let c = r.chain_counts;
    let _ = writeln!(
        t,
        "τ = {}; chains: λ = {}, ν = {}, β = {}, μ = {}",
        r.tau, c.lambda, c.nu, c.beta, c.mu
    );
    for ch in &r.chains {
        let _ = writeln!(
            t,
            "  chain {} ({:?}, terminal edge {})",
            ch.vertices.join("—"),
            ch.class,
            ch.terminal_edge
        );
    }
    if let Some(b) = &r.b0 {
        let _ = writeln!(t, "R̄ = {}", list(&b.rbar));
        let _ = writeln!(t, "Z̃¹ ≅ {}", b.z_tilde.text);
        let _ = writeln!(t, "C̃⁰ ≅ {}", b.c_tilde.text);
        if !b.z_tilde.is_trivial {
            let _ = writeln!(t, "Mod ≅ ({})/∂⁰C̃⁰", b.z_tilde.text);
        }
        if let Some(ok) = b.puiseux_agrees {
            let _ = writeln!(t, "μ + ν = number of Puiseux pairs: {}", yes(ok));
        }
    }
    if let Some(s) = &r.sequence {
        let _ = writeln!(t, "Z^{} → C^{} → Mod → D → 0 ({})", s.p, s.tau, s.verdict);
        let _ = writeln!(t, "H¹(R, Exp) ≅ {}", s.h1_exp.text);
        let _ = writeln!(t, "F = ker χ ≅ {}", s.f.text);
        let _ = writeln!(t, "D = H¹(R, Dis) ≅ {}", s.d.text);
        for z in &s.zones {
            let _ = writeln!(
                t,
                "  zone {} (active {}): H¹ ≅ {}",
                list(&z.vertices),
                z.active,
                z.h1_exp.text
            );
        }
    }
    if let Some(ok) = r.pipelines_agree {
        let _ = writeln!(t, "pipelines agree: {}", yes(ok));
    }
    if r.moduli.is_trivial {
        let _ = writeln!(t, "Mod trivial (H¹ = 0)");
    } else {
        let _ = writeln!(t, "Mod ≅ {}", r.moduli.text);
        let kinds: Vec<&str> = r
            .moduli
            .factors
            .iter()
            .map(|x| match x.kind {
                FactorKind::Elliptic => "elliptic",
                FactorKind::Punctured => "C*",
                FactorKind::NonDiscrete => "non-discrete",
                FactorKind::Coupled => "coupled",
                FactorKind::Line => "C",
            })
            .collect();
        if !kinds.is_empty() {
            let _ = writeln!(t, "  continuous factors: {}", kinds.join(", "));
        }
    }
    t
}

fn list(xs: &[String]) -> String {
    if xs.is_empty() {
        "∅".into()
    } else {
        xs.join(", ")
    }
}
