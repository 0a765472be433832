//! Named constructions behind one trait, looked up at runtime.

use std::collections::BTreeMap;

use crate::chainpow::{chainpower_scd, chainproduct_scd, ChainFactor};
use crate::doc::OutputDocument;
use crate::error::{Error, Result};
use crate::gk::gk_scd;
use crate::groups::{parse_group_spec, GroupSpec, Involution};
use crate::prune::quotient_scd;
use crate::reflect::{reflection_scd, reflection_scd_via_cycle};
use crate::verify::verify_decomposition;

/// Parameters shared by every construction; each one reads what it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Request {
    pub n: Option<usize>,
    pub group: Option<String>,
    pub factors: Vec<ChainFactor>,
}

impl Request {
    pub fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::invalid("--n is required"))
    }

    pub fn group_text(&self) -> Result<&str> {
        self.group.as_deref().ok_or_else(|| Error::invalid("--group is required"))
    }

    /// The group, or the trivial group when none was given.
    pub fn group_or_trivial(&self) -> Result<GroupSpec> {
        let n = self.n()?;
        match self.group.as_deref() {
            Some(g) if !g.trim().is_empty() => parse_group_spec(g, n),
            _ => Ok(GroupSpec::trivial(n)),
        }
    }
}

/// A way of producing a verified decomposition document.
pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, req: &Request) -> Result<OutputDocument>;
}

struct GreeneKleitman;

impl Construction for GreeneKleitman {
    fn name(&self) -> &'static str {
        "gk"
    }

    fn summary(&self) -> &'static str {
        "bracketing decomposition of B_n"
    }

    fn build(&self, req: &Request) -> Result<OutputDocument> {
        let n = req.n()?;
        let d = gk_scd(n)?.to_decomposition();
        if n <= crate::groups::QUOTIENT_LIMIT {
            let target = crate::groups::quotient_poset(n, &GroupSpec::trivial(n))?;
            verify_decomposition(&target, &d)?.into_result()?;
        } else {
            d.self_check()?;
        }
        OutputDocument::from_decomposition(&d)
    }
}

struct Quotient;

impl Construction for Quotient {
    fn name(&self) -> &'static str {
        "quotient"
    }

    fn summary(&self) -> &'static str {
        "pruned bracketing chains for B_n / G, G generated by powers of disjoint cycles"
    }

    fn build(&self, req: &Request) -> Result<OutputDocument> {
        let g = parse_group_spec(req.group_text()?, req.n()?)?;
        OutputDocument::from_decomposition(&quotient_scd(req.n()?, &g)?)
    }
}

struct ReflectBlocks;

impl Construction for ReflectBlocks {
    fn name(&self) -> &'static str {
        "reflect"
    }

    fn summary(&self) -> &'static str {
        "half-string blocks for B_n modulo a product of disjoint transpositions"
    }

    fn build(&self, req: &Request) -> Result<OutputDocument> {
        let n = req.n()?;
        let rho = Involution::parse(req.group_text()?, n)?;
        OutputDocument::from_decomposition(&reflection_scd(n, &rho)?)
    }
}

struct ReflectCycle;

impl Construction for ReflectCycle {
    fn name(&self) -> &'static str {
        "reflect-cycle"
    }

    fn summary(&self) -> &'static str {
        "the same quotient, treating the involution as the k-th power of a 2k-cycle"
    }

    fn build(&self, req: &Request) -> Result<OutputDocument> {
        let n = req.n()?;
        let rho = Involution::parse(req.group_text()?, n)?;
        OutputDocument::from_decomposition(&reflection_scd_via_cycle(n, &rho)?)
    }
}

struct ChainPower;

impl Construction for ChainPower {
    fn name(&self) -> &'static str {
        "chainpower"
    }

    fn summary(&self) -> &'static str {
        "C^m modulo rotating coordinates, restricted from a pruned B_{(k-1)m}"
    }

    fn build(&self, req: &Request) -> Result<OutputDocument> {
        match req.factors.as_slice() {
            [f] => OutputDocument::from_decomposition(&chainpower_scd(f.k, f.m, f.r)?),
            _ => Err(Error::invalid("chainpower takes exactly one K:M:R factor")),
        }
    }
}

struct ChainProduct;

impl Construction for ChainProduct {
    fn name(&self) -> &'static str {
        "chainproduct"
    }

    fn summary(&self) -> &'static str {
        "product of chain powers, each modulo its own rotation"
    }

    fn build(&self, req: &Request) -> Result<OutputDocument> {
        OutputDocument::from_decomposition(&chainproduct_scd(&req.factors)?)
    }
}

/// Constructions keyed by name.
pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Construction>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_defaults() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(GreeneKleitman));
        r.register(Box::new(Quotient));
        r.register(Box::new(ReflectBlocks));
        r.register(Box::new(ReflectCycle));
        r.register(Box::new(ChainPower));
        r.register(Box::new(ChainProduct));
        r
    }

    /// Adds `c`, replacing any construction already registered under its name.
    pub fn register(&mut self, c: Box<dyn Construction>) {
        self.entries.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Construction> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::invalid(format!("no construction named {name:?}")))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Construction> + '_ {
        self.entries.values().map(|b| b.as_ref())
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_registered() {
        let r = Registry::with_defaults();
        assert_eq!(
            r.names().collect::<Vec<_>>(),
            vec!["chainpower", "chainproduct", "gk", "quotient", "reflect", "reflect-cycle"]
        );
        assert!(r.get("dihedral").is_err());
    }

    #[test]
    fn reflection_routes_agree_on_counts() {
        let r = Registry::with_defaults();
        let req = Request {
            n: Some(7),
            group: Some("(1 7)(2 5)(3 4)".into()),
            ..Request::default()
        };
        let a = r.get("reflect").unwrap().build(&req).unwrap();
        let b = r.get("reflect-cycle").unwrap().build(&req).unwrap();
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.context, b.context);
    }

    #[test]
    fn missing_parameters() {
        let r = Registry::with_defaults();
        assert!(r.get("quotient").unwrap().build(&Request { n: Some(3), ..Request::default() }).is_err());
        assert!(r.get("gk").unwrap().build(&Request::default()).is_err());
        assert!(r.get("chainpower").unwrap().build(&Request::default()).is_err());
    }

    #[test]
    fn replacing_an_entry() {
        struct Fixed;
        impl Construction for Fixed {
            fn name(&self) -> &'static str {
                "gk"
            }
            fn summary(&self) -> &'static str {
                "always fails"
            }
            fn build(&self, _: &Request) -> Result<OutputDocument> {
                Err(Error::invalid("nope"))
            }
        }
        let mut r = Registry::with_defaults();
        r.register(Box::new(Fixed));
        assert_eq!(r.get("gk").unwrap().summary(), "always fails");
        assert_eq!(r.iter().count(), 6);
    }
}
