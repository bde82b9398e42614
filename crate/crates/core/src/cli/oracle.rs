//! Seeded property suites comparing the exact engine with brute force and
//! checking the exactness theorems.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::abgroup::classify;
use crate::gg::random::{self, rng};
use crate::gg::{
    h1, long_exact_sequence, mayer_vietoris, FiniteGroupGraph, GgError, GroupGraphDoc, Verdict,
};

/// Largest instance the generators produce, independent of the brute-force bound.
const GEN_BOUND: u128 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    AbelianBrute,
    Pruning,
    MayerVietoris,
    LongExactSequence,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::AbelianBrute,
        Suite::Pruning,
        Suite::MayerVietoris,
        Suite::LongExactSequence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AbelianBrute => "abelian-brute",
            Suite::Pruning => "pruning",
            Suite::MayerVietoris => "mayer-vietoris",
            Suite::LongExactSequence => "long-exact-sequence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub bound: u128,
    pub abelian_cases: usize,
    pub pruning_cases: usize,
    pub mv_cases: usize,
    pub les_cases: usize,
    /// Breaks repulsivity of the pruned branch; the pruning suite must notice.
    pub inject_fault: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 0,
            bound: crate::gg::DEFAULT_BOUND,
            abelian_cases: 200,
            pruning_cases: 100,
            mv_cases: 100,
            les_cases: 100,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub seed: u64,
    pub detail: String,
    /// The failing group-graph, replayable with `folmod cohomology`.
    pub instance: Option<GroupGraphDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub cases: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub config: OracleConfig,
    pub suites: Vec<SuiteResult>,
}

impl OracleSummary {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn text(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "oracle seed={} bound={}", self.config.seed, self.config.bound);
        for s in &self.suites {
            let _ = writeln!(
                t,
                "{}: {} cases, {} passed, {} skipped, {} failed",
                s.suite.name(),
                s.cases,
                s.passed,
                s.skipped,
                s.failures.len()
            );
            for f in &s.failures {
                let _ = writeln!(t, "  case {} (seed {}): {}", f.case, f.seed, f.detail);
                if let Some(doc) = &f.instance {
                    let json = serde_json::to_string(doc).expect("documents serialize");
                    let _ = writeln!(t, "  replay: {json}");
                }
            }
        }
        let _ = writeln!(t, "{}", if self.ok() { "all suites pass" } else { "FAILED" });
        t
    }
}

/// Seed of case `i` derived from the run seed.
pub fn case_seed(seed: u64, suite: Suite, i: usize) -> u64 {
    let s = seed ^ ((suite as u64 + 1) << 56);
    s.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

enum Outcome {
    Pass,
    Skip,
    Fail(String, Option<GroupGraphDoc>),
}

fn brute(f: &FiniteGroupGraph, bound: u128) -> Result<Option<usize>, String> {
    match f.brute_force_h1(bound) {
        Ok(b) => Ok(Some(b.count)),
        Err(GgError::BoundExceeded { .. }) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

fn abelian_case(seed: u64, bound: u128) -> Outcome {
    let mut r = rng(seed);
    let f = random::random_finite_gg(&mut r, &random::abelian_catalog(), 6, GEN_BOUND);
    let doc = || Some(GroupGraphDoc::from_finite(&f));
    let count = match brute(&f, bound) {
        Ok(Some(c)) => c,
        Ok(None) => return Outcome::Skip,
        Err(e) => return Outcome::Fail(e, doc()),
    };
    let exact = f
        .to_abelian()
        .and_then(|g| h1(&g))
        .map(|g| classify(&g).order());
    match exact {
        Ok(Some(n)) if n == BigInt::from(count) => Outcome::Pass,
        Ok(n) => Outcome::Fail(format!("classify gives {n:?}, brute force {count}"), doc()),
        Err(e) => Outcome::Fail(e.to_string(), doc()),
    }
}

fn pruning_case(seed: u64, bound: u128, fault: bool) -> Outcome {
    let mut r = rng(seed);
    let (mut f, b) = random::random_finite_with_branch(&mut r, &random::mixed_catalog(), 6, GEN_BOUND);
    if fault {
        f = f.with_trivial_rho(*b.edges.last().expect("branches have edges"), 1);
    }
    let doc = |g: &FiniteGroupGraph| Some(GroupGraphDoc::from_finite(g));
    let before = match brute(&f, bound) {
        Ok(Some(c)) => c,
        Ok(None) => return Outcome::Skip,
        Err(e) => return Outcome::Fail(e, doc(&f)),
    };
    let pruned = match f.prune_unchecked(&b) {
        Ok(p) => p,
        Err(e) => return Outcome::Fail(e.to_string(), doc(&f)),
    };
    match brute(&pruned, bound) {
        Ok(Some(after)) if after == before => Outcome::Pass,
        Ok(Some(after)) => Outcome::Fail(
            format!("H¹ has {before} elements before pruning, {after} after"),
            doc(&f),
        ),
        Ok(None) => Outcome::Skip,
        Err(e) => Outcome::Fail(e, doc(&f)),
    }
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn mv_case(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let gg = random::random_abelian_gg(&mut r, 5);
    let ((v0, e0), (v1, e1)) = random::random_cover(&mut r, gg.graph());
    let (v0, e0, v1, e1) = (strs(&v0), strs(&e0), strs(&v1), strs(&e1));
    let doc = || GroupGraphDoc::from_abelian(&gg).ok();
    match mayer_vietoris(&gg, (&v0, &e0), (&v1, &e1)) {
        Ok(six) if six.verdict == Verdict::Exact => Outcome::Pass,
        Ok(six) => Outcome::Fail(format!("verdict {:?}", six.verdict), doc()),
        Err(e) => Outcome::Fail(e.to_string(), doc()),
    }
}

fn les_case(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let x = match random::random_les(&mut r, 5) {
        Ok(x) => x,
        Err(e) => return Outcome::Fail(e.to_string(), None),
    };
    let doc = || GroupGraphDoc::from_abelian(&x.g).ok();
    match long_exact_sequence(&x.f, &x.g, &x.j, &x.alpha, &x.beta) {
        Ok(six) if six.verdict == Verdict::Exact => Outcome::Pass,
        Ok(six) => Outcome::Fail(format!("verdict {:?}", six.verdict), doc()),
        Err(e) => Outcome::Fail(e.to_string(), doc()),
    }
}

pub fn run_suite(cfg: &OracleConfig, suite: Suite) -> SuiteResult {
    let cases = match suite {
        Suite::AbelianBrute => cfg.abelian_cases,
        Suite::Pruning => cfg.pruning_cases,
        Suite::MayerVietoris => cfg.mv_cases,
        Suite::LongExactSequence => cfg.les_cases,
    };
    let mut res = SuiteResult {
        suite,
        cases,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    for i in 0..cases {
        let seed = case_seed(cfg.seed, suite, i);
        let out = match suite {
            Suite::AbelianBrute => abelian_case(seed, cfg.bound),
            Suite::Pruning => pruning_case(seed, cfg.bound, cfg.inject_fault),
            Suite::MayerVietoris => mv_case(seed),
            Suite::LongExactSequence => les_case(seed),
        };
        match out {
            Outcome::Pass => res.passed += 1,
            Outcome::Skip => res.skipped += 1,
            Outcome::Fail(detail, instance) => res.failures.push(Failure {
                case: i,
                seed,
                detail,
                instance,
            }),
        }
    }
    res
}

pub fn run_oracle(cfg: &OracleConfig) -> OracleSummary {
    OracleSummary {
        config: cfg.clone(),
        suites: Suite::ALL.iter().map(|&s| run_suite(cfg, s)).collect(),
    }
}
