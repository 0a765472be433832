//! The `scdforge` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 resource guard.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chainpow::{ChainFactor, ChainProductPoset};
use crate::doc::{decode, encode, verify_document, OutputDocument};
use crate::error::{Error, Result};
use crate::groups::{quotient_poset, GroupSpec};
use crate::strategy::{Registry, Request};
use crate::verify::{rank_profile, RankProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "scdforge", version, about = "Construct and verify symmetric chain decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracketing decomposition of B_n.
    Gk {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Decomposition of B_n / G for G generated by powers of disjoint cycles.
    Quotient {
        #[arg(long)]
        n: usize,
        /// e.g. "(1 2 3 4)^2 (5 6)"
        #[arg(long)]
        group: String,
        #[command(flatten)]
        format: Format,
    },
    /// Decomposition of B_n modulo a product of disjoint transpositions.
    Reflect {
        #[arg(long)]
        n: usize,
        /// e.g. "(1 4)(2 3)"
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = ReflectMethod::Blocks)]
        method: ReflectMethod,
        #[command(flatten)]
        format: Format,
    },
    /// Decomposition of C^m modulo rotating coordinates, or of a product of such.
    Chainpower {
        #[command(flatten)]
        shape: ChainShape,
        #[command(flatten)]
        format: Format,
    },
    /// Runs a registered construction by name.
    Build {
        /// Name as listed by `constructions`.
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        group: Option<String>,
        /// K:M:R, repeatable.
        #[arg(long = "factor")]
        factors: Vec<ChainFactor>,
        #[command(flatten)]
        format: Format,
    },
    /// Lists the registered constructions.
    Constructions,
    /// The orbits of B_n / G with their rank profile, or its Hasse diagram.
    Orbits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        group: Option<String>,
        /// Emit the Hasse diagram in DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Re-verifies a decomposition document.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rank profile of a quotient, a chain power, or a document's chains.
    Profile {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        shape: ChainShapeOpt,
        #[arg(long, conflicts_with_all = ["n", "group"])]
        input: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Format {
    /// Canonical JSON document (the default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// One line per chain, preceded by `chains=N`.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Debug)]
struct ChainShape {
    #[arg(long, requires = "m", conflicts_with = "factors")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    m: Option<usize>,
    #[arg(long, requires = "k", default_value_t = 1)]
    r: usize,
    /// K:M:R, repeatable.
    #[arg(long = "factor", required_unless_present = "k")]
    factors: Vec<ChainFactor>,
}

#[derive(Args, Debug)]
struct ChainShapeOpt {
    #[arg(long, requires = "m", conflicts_with = "factors")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    m: Option<usize>,
    #[arg(long, requires = "k", default_value_t = 1)]
    r: usize,
    #[arg(long = "factor")]
    factors: Vec<ChainFactor>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ReflectMethod {
    /// Blocks of pairs of half strings.
    Blocks,
    /// Pruning, with the involution as a power of one long cycle.
    Cycle,
}

fn shape_factors(k: Option<usize>, m: Option<usize>, r: usize, factors: &[ChainFactor]) -> Result<Vec<ChainFactor>> {
    match (k, m) {
        (Some(k), Some(m)) => Ok(vec![ChainFactor::new(k, m, r)?]),
        _ => factors.iter().map(|f| ChainFactor::new(f.k, f.m, f.r)).collect(),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::Internal(_) => EXIT_VERIFY,
        Error::ResourceGuard { .. } => EXIT_GUARD,
        _ => EXIT_INPUT,
    }
}

/// Runs the command line with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::invalid(format!("i/o: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let registry = Registry::with_defaults();
    let (name, req, format) = match cmd {
        Command::Gk { n, format } => ("gk", Request { n: Some(n), ..Request::default() }, format),
        Command::Quotient { n, group, format } => (
            "quotient",
            Request {
                n: Some(n),
                group: Some(group),
                ..Request::default()
            },
            format,
        ),
        Command::Reflect { n, group, method, format } => {
            let name = match method {
                ReflectMethod::Blocks => "reflect",
                ReflectMethod::Cycle => "reflect-cycle",
            };
            let req = Request {
                n: Some(n),
                group: Some(group),
                ..Request::default()
            };
            (name, req, format)
        }
        Command::Chainpower { shape, format } => {
            let factors = shape_factors(shape.k, shape.m, shape.r, &shape.factors)?;
            let name = if factors.len() == 1 { "chainpower" } else { "chainproduct" };
            (name, Request { factors, ..Request::default() }, format)
        }
        Command::Build {
            name,
            n,
            group,
            factors,
            format,
        } => {
            let c = registry.get(&name)?;
            let doc = c.build(&Request { n, group, factors })?;
            return emit(&doc, &format, out);
        }
        Command::Constructions => {
            for c in registry.iter() {
                writeln!(out, "{:<14} {}", c.name(), c.summary()).map_err(io)?;
            }
            return Ok(EXIT_OK);
        }
        Command::Orbits { n, group, dot } => return orbits(n, group.as_deref(), dot, out),
        Command::Verify { input } => return verify_file(&input, out, err),
        Command::Profile { n, group, shape, input } => {
            let profile = if let Some(path) = input {
                let doc = read_document(&path)?;
                RankProfile::from_counts(doc.stats.rank_profile)
            } else if let Some(n) = n {
                rank_profile(&quotient_poset(n, &group_or_trivial(n, group.as_deref())?)?)
            } else {
                let factors = shape_factors(shape.k, shape.m, shape.r, &shape.factors)?;
                if factors.is_empty() {
                    return Err(Error::invalid("profile needs --n, --k/--m, --factor or --input"));
                }
                rank_profile(&ChainProductPoset::new(factors)?)
            };
            write_profile(&profile, out)?;
            return Ok(EXIT_OK);
        }
    };
    let doc = registry.get(name)?.build(&req)?;
    emit(&doc, &format, out)
}

fn group_or_trivial(n: usize, group: Option<&str>) -> Result<GroupSpec> {
    Request {
        n: Some(n),
        group: group.map(str::to_string),
        ..Request::default()
    }
    .group_or_trivial()
}

fn emit(doc: &OutputDocument, format: &Format, out: &mut dyn Write) -> Result<i32> {
    let text = if format.text { render_text(doc) } else { encode(doc)? };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

/// `chains=N`, then one chain per line with elements joined by ` < `.
pub fn render_text(doc: &OutputDocument) -> String {
    let levels = matches!(doc.context.kind.as_str(), "chainpower" | "product");
    let (open, close) = if levels { ("(", ")") } else { ("{", "}") };
    let mut s = format!("chains={}\n", doc.stats.chain_count);
    for chain in &doc.chains {
        let parts: Vec<String> = chain
            .iter()
            .map(|e| {
                let inner: Vec<String> = e.iter().map(u32::to_string).collect();
                format!("{open}{}{close}", inner.join(","))
            })
            .collect();
        s.push_str(&parts.join(" < "));
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct OrbitListing {
    n: usize,
    group: String,
    orbit_count: usize,
    orbits: Vec<Vec<u32>>,
    rank_profile: Vec<usize>,
    symmetric: bool,
    unimodal: bool,
}

fn orbits(n: usize, group: Option<&str>, dot: bool, out: &mut dyn Write) -> Result<i32> {
    let g = group_or_trivial(n, group)?;
    let q = quotient_poset(n, &g)?;
    let text = if dot {
        q.to_dot()
    } else {
        let profile = rank_profile(&q);
        let listing = OrbitListing {
            n,
            group: g.to_string(),
            orbit_count: q.orbit_count(),
            orbits: (0..q.orbit_count())
                .map(|i| q.rep(i).elements().collect())
                .collect(),
            rank_profile: profile.counts,
            symmetric: profile.symmetric,
            unimodal: profile.unimodal,
        };
        let value = serde_json::to_value(&listing).map_err(|e| Error::Internal(e.to_string()))?;
        let mut s = serde_json::to_string(&value).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        s
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

fn read_document(path: &PathBuf) -> Result<OutputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    decode(&text)
}

fn verify_file(path: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let doc = read_document(path)?;
    let report = verify_document(&doc)?;
    if report.ok {
        writeln!(
            out,
            "ok: {} elements in {} chains",
            report.element_count,
            doc.chains.len()
        )
        .map_err(io)?;
        return Ok(EXIT_OK);
    }
    for f in &report.failures {
        writeln!(err, "{}: {}", f.kind, f.witness).map_err(io)?;
    }
    if report.suppressed > 0 {
        writeln!(err, "... and {} more", report.suppressed).map_err(io)?;
    }
    Ok(EXIT_VERIFY)
}

fn write_profile(p: &RankProfile, out: &mut dyn Write) -> Result<()> {
    let counts: Vec<String> = p.counts.iter().map(usize::to_string).collect();
    writeln!(out, "ranks={}", counts.join(",")).map_err(io)?;
    writeln!(out, "symmetric={}", p.symmetric).map_err(io)?;
    writeln!(out, "unimodal={}", p.unimodal).map_err(io)?;
    Ok(())
}

