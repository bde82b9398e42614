//! The `folmod` command: validation, moduli reports, group-graph cohomology,
//! the bundled examples and the brute-force oracle.
//!
//! Exit codes: 0 ok, 1 validation failure (or oracle failure), 2 parse
//! failure, 3 pipeline precondition failure.

pub mod oracle;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::abgroup::{classify, NormalFormReport};
use crate::folmod::{
    build_cut_graph, check_tc, compute_moduli, example_json, parse_input, validate, FolError,
    Foliation, EXAMPLE_COUNT,
};
use crate::gg::{cohomology, h1, h1_components, GroupGraphDoc, LoadedGraph, DEFAULT_BOUND};

pub use oracle::{run_oracle, OracleConfig, OracleSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "folmod", version, about = "Topological moduli of singular foliation germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a foliation document.
    Check { file: PathBuf },
    /// Compute the moduli report of a foliation document.
    Moduli {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// H⁰ and H¹ of a group-graph document.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// State-space bound for brute-force enumeration.
        #[arg(long, env = "FOLMOD_BOUND", default_value_t = DEFAULT_BOUND, value_parser = parse_bound)]
        bound: u128,
    },
    /// Print a bundled example document (or its moduli report).
    Examples {
        #[arg(value_parser = clap::value_parser!(u8).range(0..EXAMPLE_COUNT as i64))]
        n: u8,
        /// Print the moduli report instead of the document.
        #[arg(long)]
        report: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the randomized cross-check suites.
    Oracle {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "FOLMOD_BOUND", default_value_t = DEFAULT_BOUND, value_parser = parse_bound)]
        bound: u128,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Break repulsivity in the pruning suite (regression fixture).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn parse_bound(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("bound must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Output of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_PARSE, format!("error: cannot read {}: {e}\n", path.display())))
}

fn fol_failure(e: FolError) -> Outcome {
    match e {
        FolError::Parse { .. } => Outcome::fail(EXIT_PARSE, format!("parse error: {e}\n")),
        FolError::Invalid(vs) => {
            let mut s = String::new();
            for v in &vs {
                s.push_str(&format!("violation: {v}\n"));
            }
            Outcome::fail(EXIT_INVALID, s)
        }
        other => Outcome::fail(EXIT_PRECONDITION, format!("error: {other}\n")),
    }
}

fn run_check(path: &Path) -> Outcome {
    let text = match read(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let input = match parse_input(&text) {
        Ok(i) => i,
        Err(e) => return fol_failure(e),
    };
    let violations = validate(&input);
    if !violations.is_empty() {
        return fol_failure(FolError::Invalid(violations));
    }
    let f = match Foliation::new(input) {
        Ok(f) => f,
        Err(e) => return fol_failure(e),
    };
    let cg = build_cut_graph(&f);
    Outcome::ok(format!(
        "ok: {} ({} components, {} points, {} cut-components); (TC) {}\n",
        f.name(),
        f.comps.len(),
        f.points.len(),
        cg.components.len(),
        if check_tc(&f) { "holds" } else { "fails" }
    ))
}

fn moduli_of(text: &str, format: Format) -> Outcome {
    let f = match parse_input(text).and_then(Foliation::new) {
        Ok(f) => f,
        Err(e) => return fol_failure(e),
    };
    match compute_moduli(&f) {
        Ok(r) => Outcome::ok(match format {
            Format::Text => r.text.clone(),
            Format::Json => json(&r),
        }),
        Err(e) => fol_failure(e),
    }
}

#[derive(Serialize)]
struct CohomologyReport {
    kind: &'static str,
    h0: Option<NormalFormReport>,
    h1: Option<NormalFormReport>,
    components: Vec<(Vec<String>, NormalFormReport)>,
    brute_force_count: Option<usize>,
    brute_force_skipped: Option<String>,
}

impl CohomologyReport {
    fn text(&self) -> String {
        let mut t = format!("group-graph: {}\n", self.kind);
        if let Some(h) = &self.h0 {
            t.push_str(&format!("H⁰ ≅ {}\n", h.text));
        }
        if let Some(h) = &self.h1 {
            t.push_str(&format!("H¹ ≅ {}\n", h.text));
        }
        for (vs, h) in &self.components {
            t.push_str(&format!("  component {{{}}}: H¹ ≅ {}\n", vs.join(", "), h.text));
        }
        if let Some(n) = self.brute_force_count {
            t.push_str(&format!("|H¹| by enumeration: {n}\n"));
        }
        if let Some(s) = &self.brute_force_skipped {
            t.push_str(&format!("enumeration skipped: {s}\n"));
        }
        t
    }
}

fn run_cohomology(path: &Path, format: Format, bound: u128) -> Outcome {
    let text = match read(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let de = &mut serde_json::Deserializer::from_str(&text);
    let doc: GroupGraphDoc = match serde_path_to_error::deserialize(de) {
        Ok(d) => d,
        Err(e) => return Outcome::fail(EXIT_PARSE, format!("parse error at {}: {}\n", e.path(), e.inner())),
    };
    let loaded = match doc.load() {
        Ok(l) => l,
        Err(e) => return Outcome::fail(EXIT_INVALID, format!("violation: {e}\n")),
    };
    let result = (|| -> Result<CohomologyReport, crate::gg::GgError> {
        match loaded {
            LoadedGraph::Abelian(g) => {
                let c = cohomology(&g)?;
                let components = h1_components(&g)?
                    .into_iter()
                    .map(|(vs, h)| (vs, classify(&h)))
                    .collect();
                Ok(CohomologyReport {
                    kind: "abelian",
                    h0: c.h0.ok().map(|h| classify(&h)),
                    h1: Some(c.h1_report),
                    components,
                    brute_force_count: None,
                    brute_force_skipped: None,
                })
            }
            LoadedGraph::Finite(f) => {
                let h1r = if f.is_abelian() {
                    Some(classify(&h1(&f.to_abelian()?)?))
                } else {
                    None
                };
                let (count, skipped) = match f.brute_force_h1(bound) {
                    Ok(b) => (Some(b.count), None),
                    Err(e @ crate::gg::GgError::BoundExceeded { .. }) => (None, Some(e.to_string())),
                    Err(e) => return Err(e),
                };
                Ok(CohomologyReport {
                    kind: if f.is_abelian() { "finite abelian" } else { "finite" },
                    h0: None,
                    h1: h1r,
                    components: Vec::new(),
                    brute_force_count: count,
                    brute_force_skipped: skipped,
                })
            }
        }
    })();
    match result {
        Ok(r) => Outcome::ok(match format {
            Format::Text => r.text(),
            Format::Json => json(&r),
        }),
        Err(e) => Outcome::fail(EXIT_PRECONDITION, format!("error: {e}\n")),
    }
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { file } => run_check(&file),
        Command::Moduli { file, format } => match read(&file) {
            Ok(t) => moduli_of(&t, format),
            Err(o) => o,
        },
        Command::Cohomology { file, format, bound } => run_cohomology(&file, format, bound),
        Command::Examples { n, report, format } => {
            let src = example_json(n as usize).expect("range-checked by the parser");
            if report {
                moduli_of(src, format)
            } else {
                Outcome::ok(src.to_string())
            }
        }
        Command::Oracle {
            seed,
            bound,
            format,
            inject_fault,
        } => {
            let cfg = OracleConfig {
                seed,
                bound,
                inject_fault,
                ..OracleConfig::default()
            };
            let summary = run_oracle(&cfg);
            let out = match format {
                Format::Text => summary.text(),
                Format::Json => json(&summary),
            };
            Outcome {
                code: if summary.ok() { EXIT_OK } else { EXIT_INVALID },
                stdout: out,
                stderr: String::new(),
            }
        }
    }
}

/// Parses arguments and runs; usage errors exit with 2, `--help` with 0.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let msg = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(msg)
            } else {
                Outcome::fail(code, msg)
            }
        }
    }
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run(args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}
