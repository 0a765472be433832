//! The `scdforge/1` JSON document: a decomposition, the poset it decomposes,
//! and summary statistics.
//!
//! Encoding is canonical: compact, keys sorted, one trailing newline. Subsets
//! are written as ascending 1-based element lists and level tuples as plain
//! integer lists.

use serde::{Deserialize, Serialize};

use crate::chainpow::{ChainFactor, ChainProductPoset, Levels};
use crate::error::{Error, Result};
use crate::groups::{parse_group_spec, quotient_poset, GroupSpec, Involution};
use crate::order::{Chain, Context, Decomposition};
use crate::subset::{Ranked, Subset, MAX_GROUND_SET};
use crate::verify::{verify_decomposition, Failure, FailureKind, VerifyReport};

pub const SCHEMA: &str = "scdforge/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDocument {
    pub schema: String,
    pub context: ContextDoc,
    pub chains: Vec<Vec<Vec<u32>>>,
    pub stats: Stats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<ChainFactor>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stats {
    pub chain_count: usize,
    pub element_count: usize,
    /// Number of elements of each rank, from rank 0 up to the total rank.
    pub rank_profile: Vec<usize>,
}

impl ContextDoc {
    pub fn from_context(ctx: &Context) -> Result<Self> {
        let base = ContextDoc {
            kind: ctx.kind().to_string(),
            ..ContextDoc::default()
        };
        Ok(match ctx {
            Context::Boolean { n } => ContextDoc { n: Some(*n), ..base },
            Context::Quotient { n, group } => ContextDoc {
                n: Some(*n),
                group: Some(group.clone()),
                ..base
            },
            Context::Reflection { n, involution } => ContextDoc {
                n: Some(*n),
                group: Some(involution.clone()),
                ..base
            },
            Context::ChainPower { k, m, r } => ContextDoc {
                k: Some(*k),
                m: Some(*m),
                r: Some(*r),
                ..base
            },
            Context::ChainProduct { factors } => ContextDoc {
                factors: Some(factors.clone()),
                ..base
            },
            Context::Product(..) => {
                return Err(Error::invalid("nested products have no document form"));
            }
        })
    }

    pub fn to_context(&self) -> Result<Context> {
        let need = |v: Option<usize>, field: &str| {
            v.ok_or_else(|| Error::Decode {
                pointer: format!("/context/{field}"),
                msg: format!("required for kind {:?}", self.kind),
            })
        };
        let group = || self.group.clone().unwrap_or_default();
        Ok(match self.kind.as_str() {
            "boolean" => Context::Boolean { n: need(self.n, "n")? },
            "quotient" => Context::Quotient {
                n: need(self.n, "n")?,
                group: group(),
            },
            "reflection" => Context::Reflection {
                n: need(self.n, "n")?,
                involution: group(),
            },
            "chainpower" => Context::ChainPower {
                k: need(self.k, "k")?,
                m: need(self.m, "m")?,
                r: need(self.r, "r")?,
            },
            "product" => Context::ChainProduct {
                factors: self.factors.clone().ok_or_else(|| Error::Decode {
                    pointer: "/context/factors".into(),
                    msg: "required for kind \"product\"".into(),
                })?,
            },
            other => {
                return Err(Error::Decode {
                    pointer: "/context/kind".into(),
                    msg: format!("unknown kind {other:?}"),
                })
            }
        })
    }
}

/// Anything that can be written as an element list.
pub trait DocElement: Ranked {
    fn to_doc(&self) -> Vec<u32>;
}

impl DocElement for Subset {
    fn to_doc(&self) -> Vec<u32> {
        self.elements().collect()
    }
}

impl DocElement for Levels {
    fn to_doc(&self) -> Vec<u32> {
        self.0.iter().map(|&l| l as u32).collect()
    }
}

impl OutputDocument {
    pub fn from_decomposition<E: DocElement>(d: &Decomposition<E>) -> Result<Self> {
        let mut rank_profile = vec![0usize; d.total_rank() + 1];
        for e in d.chains().iter().flat_map(Chain::iter) {
            if let Some(slot) = rank_profile.get_mut(e.rank()) {
                *slot += 1;
            }
        }
        Ok(OutputDocument {
            schema: SCHEMA.to_string(),
            context: ContextDoc::from_context(d.context())?,
            chains: d
                .chains()
                .iter()
                .map(|c| c.iter().map(DocElement::to_doc).collect())
                .collect(),
            stats: Stats {
                chain_count: d.chain_count(),
                element_count: d.element_count(),
                rank_profile,
            },
        })
    }
}

/// Canonical encoding: compact JSON with sorted keys and a trailing newline.
pub fn encode(doc: &OutputDocument) -> Result<String> {
    // `Value` maps are ordered by key, which sorts nested objects as well.
    let value = serde_json::to_value(doc).map_err(|e| Error::Internal(e.to_string()))?;
    let mut out = serde_json::to_string(&value).map_err(|e| Error::Internal(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

pub fn decode(text: &str) -> Result<OutputDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: OutputDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Decode {
            pointer: json_pointer(&path),
            msg: e.into_inner().to_string(),
        }
    })?;
    if doc.schema != SCHEMA {
        return Err(Error::Decode {
            pointer: "/schema".into(),
            msg: format!("unsupported schema {:?}, expected {SCHEMA:?}", doc.schema),
        });
    }
    Ok(doc)
}

/// `a.b[3].c` to `/a/b/3/c`.
fn json_pointer(path: &str) -> String {
    if path == "." {
        return String::new();
    }
    let mut out = String::new();
    for seg in path.split('.') {
        let mut rest = seg;
        if let Some(i) = rest.find('[') {
            out.push('/');
            out.push_str(&rest[..i]);
            rest = &rest[i..];
            while let Some(end) = rest.find(']') {
                out.push('/');
                out.push_str(&rest[1..end]);
                rest = &rest[end + 1..];
            }
        } else {
            out.push('/');
            out.push_str(rest);
        }
    }
    out
}

fn subset_chains(doc: &OutputDocument, n: usize) -> Result<Vec<Chain<Subset>>> {
    if n == 0 || n > MAX_GROUND_SET {
        return Err(Error::invalid(format!("n = {n} is out of range")));
    }
    doc.chains
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.iter()
                .enumerate()
                .map(|(j, e)| {
                    let s = Subset::from_elements(e.iter().copied(), n).map_err(|err| Error::Decode {
                        pointer: format!("/chains/{i}/{j}"),
                        msg: err.to_string(),
                    })?;
                    if s.len() != e.len() {
                        return Err(Error::Decode {
                            pointer: format!("/chains/{i}/{j}"),
                            msg: "repeated element".into(),
                        });
                    }
                    Ok(s)
                })
                .collect::<Result<Vec<_>>>()
                .map(Chain::new)
        })
        .collect()
}

fn level_chains(doc: &OutputDocument) -> Result<Vec<Chain<Levels>>> {
    doc.chains
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.iter()
                .enumerate()
                .map(|(j, e)| {
                    e.iter()
                        .map(|&l| u8::try_from(l))
                        .collect::<std::result::Result<Vec<u8>, _>>()
                        .map(Levels)
                        .map_err(|_| Error::Decode {
                            pointer: format!("/chains/{i}/{j}"),
                            msg: "level out of range".into(),
                        })
                })
                .collect::<Result<Vec<_>>>()
                .map(Chain::new)
        })
        .collect()
}

fn check_stats<E: DocElement>(doc: &OutputDocument, d: &Decomposition<E>, report: &mut VerifyReport) -> Result<()> {
    let recomputed = OutputDocument::from_decomposition(d)?.stats;
    if recomputed != doc.stats {
        report.ok = false;
        report.failures.push(Failure {
            kind: FailureKind::CountMismatch,
            witness: format!(
                "stats say {} chains, {} elements, profile {:?}; the chains give {}, {}, {:?}",
                doc.stats.chain_count,
                doc.stats.element_count,
                doc.stats.rank_profile,
                recomputed.chain_count,
                recomputed.element_count,
                recomputed.rank_profile
            ),
        });
    }
    Ok(())
}

/// Re-verifies a decoded document against its stated poset, including its stats.
pub fn verify_document(doc: &OutputDocument) -> Result<VerifyReport> {
    let context = doc.context.to_context()?;
    match &context {
        Context::Boolean { n } | Context::Quotient { n, .. } | Context::Reflection { n, .. } => {
            let n = *n;
            let group = match &context {
                Context::Quotient { group, .. } if !group.trim().is_empty() => parse_group_spec(group, n)?,
                Context::Reflection { involution, .. } => Involution::parse(involution, n)?.as_group_spec(),
                _ => GroupSpec::trivial(n),
            };
            let d = Decomposition::new(context.clone(), subset_chains(doc, n)?)?;
            let target = quotient_poset(n, &group)?;
            let mut report = verify_decomposition(&target, &d)?;
            check_stats(doc, &d, &mut report)?;
            Ok(report)
        }
        Context::ChainPower { k, m, r } => {
            let target = ChainProductPoset::new(vec![ChainFactor::new(*k, *m, *r)?])?;
            let d = Decomposition::new(context.clone(), level_chains(doc)?)?;
            let mut report = verify_decomposition(&target, &d)?;
            check_stats(doc, &d, &mut report)?;
            Ok(report)
        }
        Context::ChainProduct { factors } => {
            let target = ChainProductPoset::new(factors.clone())?;
            let d = Decomposition::new(context.clone(), level_chains(doc)?)?;
            let mut report = verify_decomposition(&target, &d)?;
            check_stats(doc, &d, &mut report)?;
            Ok(report)
        }
        Context::Product(..) => Err(Error::invalid("nested products have no document form")),
    }
}
