//! Acceptance suite. One PASS/FAIL line per criterion; exits nonzero if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scdforge::chainpow::{chainpower_scd, check_dichotomy, ChainFactor, ChainProductPoset};
use scdforge::gk::{gk_scd, pairing, partner, GkScd};
use scdforge::groups::{burnside_count, parse_group_spec, quotient_poset, GroupSpec, Involution};
use scdforge::order::{product_scd, Chain, Decomposition};
use scdforge::prune::{check_predecessor_mates, quotient_scd, quotient_scd_cyclic};
use scdforge::reflect::reflection_scd;
use scdforge::subset::{Ranked, Subset};
use scdforge::verify::{verify_decomposition, ProductPoset, RankedPoset};

const SEED: u64 = 0x5cdf_029e;

const RANDOM_GROUPS: usize = 60;
const RANDOM_INVOLUTIONS: usize = 24;
const RANDOM_PRODUCTS: usize = 24;
const PRODUCT_ELEMENT_CAP: u128 = 1 << 20;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|&d| n.is_multiple_of(d)).collect()
}

/// `σ = (1 2 ... n)` applied element by element.
fn sigma(x: Subset, n: usize) -> Subset {
    x.elements().fold(Subset::EMPTY, |acc, e| acc.with(e % n as u32 + 1))
}

fn verified<P: RankedPoset>(target: &P, d: &Decomposition<P::Element>, what: &str) -> Result<(), String> {
    let report = verify_decomposition(target, d).map_err(|e| format!("{what}: {e}"))?;
    ensure(report.ok, || format!("{what}: {}", report.summary().unwrap_or_default()))?;
    ensure(report.element_count == report.expected_count, || {
        format!("{what}: {} elements, expected {}", report.element_count, report.expected_count)
    })
}

fn gk_partition() -> Outcome {
    for n in 1..=16usize {
        let scd = gk_scd(n).map_err(|e| e.to_string())?;
        let want = binomial(n as u64, n as u64 / 2) as usize;
        ensure(scd.chain_count() == want, || format!("n={n}: {} chains, want {want}", scd.chain_count()))?;
        let mut seen = vec![false; 1 << n];
        for c in scd.chains() {
            ensure(c.min().unwrap().rank() + c.max().unwrap().rank() == n, || format!("n={n}: {c} not symmetric"))?;
            for w in c.elements().windows(2) {
                ensure(w[0].is_subset_of(w[1]) && w[1].len() == w[0].len() + 1, || {
                    format!("n={n}: {c} not saturated")
                })?;
            }
            for x in c.iter() {
                let slot = &mut seen[x.bits() as usize];
                ensure(!*slot, || format!("n={n}: {x} covered twice"))?;
                *slot = true;
            }
        }
        ensure(seen.iter().all(|&b| b), || format!("n={n}: some subset is uncovered"))?;
    }
    Ok("n = 1..=16".into())
}

fn gk_facts() -> Outcome {
    let mut checked = 0u64;
    for n in 1..=14usize {
        let scd = gk_scd(n).map_err(|e| e.to_string())?;
        let full = Subset::full(n);
        for bits in 0..1u64 << n {
            let a = Subset(bits);
            let p = pairing(a, n);
            // every pair spans an interval of paired positions
            for (l, x) in p.pairs() {
                ensure(l < x, || format!("n={n} A={a}: pair ({l},{x}) out of order"))?;
                for y in l..=x {
                    ensure(p.p().contains(y), || format!("n={n} A={a}: {y} inside ({l},{x}) is unpaired"))?;
                }
            }
            let c = scd.chain(scd.chain_id(a));
            ensure(*c.min().unwrap() == p.r(), || format!("n={n} A={a}: min is not R(A)"))?;
            ensure(*c.max().unwrap() == full.difference(p.l()), || format!("n={n} A={a}: max is not [n] - L(A)"))?;
            for x in c.iter() {
                let px = pairing(*x, n);
                ensure(px.r() == p.r(), || format!("n={n} A={a}: R changes along the chain at {x}"))?;
                for (l, y) in p.pairs() {
                    ensure(px.partner_of(y) == Some(l), || format!("n={n} A={a}: pairing of {y} changes at {x}"))?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} subsets"))
}

fn star_commutes_with_sigma() -> Outcome {
    let mut checked = 0u64;
    for n in 1..=14usize {
        let scd: GkScd = gk_scd(n).map_err(|e| e.to_string())?;
        for c in scd.chains() {
            for &x in c.iter().filter(|x| x.len() <= n / 2) {
                let star = partner(x, c, n).map_err(|e| e.to_string())?;
                let sx = sigma(x, n);
                let lhs = partner(sx, scd.chain(scd.chain_id(sx)), n).map_err(|e| e.to_string())?;
                ensure(lhs == sigma(star, n), || format!("n={n} X={x}: (σX)* = {lhs}, σ(X*) = {}", sigma(star, n)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} lower-half elements"))
}

fn predecessor_mates() -> Outcome {
    let mut cases = 0;
    for n in 1..=12usize {
        let scd = gk_scd(n).map_err(|e| e.to_string())?;
        for s in divisors(n) {
            ensure(check_predecessor_mates(&scd, s), || format!("n={n} s={s}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, s) pairs"))
}

fn random_group(rng: &mut ChaCha8Rng) -> (usize, String) {
    let n = rng.gen_range(1..=14usize);
    let mut points: Vec<u32> = (1..=n as u32).collect();
    points.shuffle(rng);
    let mut text = Vec::new();
    let mut rest = &points[..];
    while rest.len() >= 2 && rng.gen_bool(0.75) {
        let len = rng.gen_range(2..=rest.len().min(7));
        let (cycle, tail) = rest.split_at(len);
        let exp = rng.gen_range(1..=len as u32 + 1);
        let body: Vec<String> = cycle.iter().map(u32::to_string).collect();
        text.push(format!("({})^{exp}", body.join(" ")));
        rest = tail;
    }
    (n, text.join(" "))
}

fn cyclic_quotients() -> Outcome {
    let mut cases = 0;
    for n in 1..=14usize {
        for s in divisors(n) {
            let d = quotient_scd_cyclic(n, s).map_err(|e| format!("n={n} s={s}: {e}"))?;
            let target = quotient_poset(n, &GroupSpec::rotation(n, s)).map_err(|e| e.to_string())?;
            verified(&target, &d, &format!("n={n} s={s}"))?;
            let burnside = burnside_count(n, &GroupSpec::rotation(n, s)).map_err(|e| e.to_string())?;
            ensure(d.element_count() as u128 == burnside, || format!("n={n} s={s}: count differs from Burnside"))?;
            cases += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..RANDOM_GROUPS {
        let (n, text) = random_group(&mut rng);
        let g = if text.is_empty() {
            GroupSpec::trivial(n)
        } else {
            parse_group_spec(&text, n).map_err(|e| format!("{text:?}: {e}"))?
        };
        let d = quotient_scd(n, &g).map_err(|e| format!("n={n} G={g}: {e}"))?;
        let target = quotient_poset(n, &g).map_err(|e| e.to_string())?;
        verified(&target, &d, &format!("n={n} G={g}"))?;
    }
    Ok(format!("{cases} cyclic cases, {RANDOM_GROUPS} random groups"))
}

fn covered<E: Clone + Ord>(d: &Decomposition<E>) -> BTreeSet<E> {
    d.chains().iter().flat_map(|c| c.iter().cloned()).collect()
}

fn fixtures() -> Outcome {
    let quotient_cases: [(&str, usize, &str, Vec<usize>, usize); 3] = [
        ("B_4/<(1234)>", 4, "(1 2 3 4)", vec![5, 1], 6),
        ("B_4/<σ²>", 4, "(1 2 3 4)^2", vec![5, 3, 1, 1], 10),
        ("B_4/<(14)(23)>", 4, "(1 4)(2 3)", vec![5, 3, 1, 1], 10),
    ];
    for (label, n, text, sizes, orbits) in quotient_cases {
        // a product of transpositions names one involution, not one generator per cycle
        let (g, d) = if label.contains("(14)") {
            let rho = Involution::parse(text, n).map_err(|e| e.to_string())?;
            (rho.as_group_spec(), reflection_scd(n, &rho))
        } else {
            let g = parse_group_spec(text, n).map_err(|e| e.to_string())?;
            let d = quotient_scd(n, &g);
            (g, d)
        };
        let d = d.map_err(|e| format!("{label}: {e}"))?;
        let target = quotient_poset(n, &g).map_err(|e| e.to_string())?;
        let reps: BTreeSet<Subset> = (0..target.orbit_count()).map(|i| target.rep(i)).collect();
        ensure(d.chain_sizes() == sizes, || format!("{label}: sizes {:?}", d.chain_sizes()))?;
        ensure(reps.len() == orbits && covered(&d) == reps, || format!("{label}: orbit sets differ"))?;
    }
    let d = chainpower_scd(3, 2, 1).map_err(|e| e.to_string())?;
    let target = ChainProductPoset::new(vec![ChainFactor::new(3, 2, 1).map_err(|e| e.to_string())?])
        .map_err(|e| e.to_string())?;
    let orbits: BTreeSet<_> = target.elements().into_iter().collect();
    ensure(d.chain_sizes() == vec![5, 1], || format!("C^2: sizes {:?}", d.chain_sizes()))?;
    ensure(orbits.len() == 6 && covered(&d) == orbits, || "C^2: orbit sets differ".into())?;
    Ok("4 fixtures".into())
}

fn standard_reflection(k: usize) -> String {
    (1..=k).map(|i| format!("({} {})", i, 2 * k + 1 - i)).collect()
}

fn reflections() -> Outcome {
    for n in (2..=16usize).step_by(2) {
        let rho = Involution::parse(&standard_reflection(n / 2), n).map_err(|e| e.to_string())?;
        let d = reflection_scd(n, &rho).map_err(|e| format!("n={n}: {e}"))?;
        let target = quotient_poset(n, &rho.as_group_spec()).map_err(|e| e.to_string())?;
        verified(&target, &d, &format!("n={n} ρ={rho}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for _ in 0..RANDOM_INVOLUTIONS {
        let n = rng.gen_range(3..=14usize);
        let k = rng.gen_range(1..=(n - 1) / 2);
        let mut points: Vec<u32> = (1..=n as u32).collect();
        points.shuffle(&mut rng);
        let text: String = points[..2 * k].chunks(2).map(|p| format!("({} {})", p[0], p[1])).collect();
        let rho = Involution::parse(&text, n).map_err(|e| format!("{text}: {e}"))?;
        ensure(rho.support().len() < n, || format!("{text} has no fixed point"))?;
        let d = reflection_scd(n, &rho).map_err(|e| format!("n={n} ρ={rho}: {e}"))?;
        let target = quotient_poset(n, &rho.as_group_spec()).map_err(|e| e.to_string())?;
        verified(&target, &d, &format!("n={n} ρ={rho}"))?;
    }
    Ok(format!("8 standard, {RANDOM_INVOLUTIONS} random with fixed points"))
}

fn chain_powers() -> Outcome {
    let mut dichotomies = 0;
    for n in 1..=18usize {
        for m in divisors(n) {
            let k = n / m + 1;
            ensure(check_dichotomy(k, m).map_err(|e| e.to_string())?, || format!("dichotomy fails for k={k} m={m}"))?;
            dichotomies += 1;
        }
    }
    let mut powers = 0;
    for n in 1..=16usize {
        for m in divisors(n) {
            let k = n / m + 1;
            for r in 1..=m {
                let d = chainpower_scd(k, m, r).map_err(|e| format!("k={k} m={m} r={r}: {e}"))?;
                let target = ChainProductPoset::new(vec![ChainFactor::new(k, m, r).map_err(|e| e.to_string())?])
                    .map_err(|e| e.to_string())?;
                ensure(target.elements().len() as u128 == target.burnside_count(), || {
                    format!("k={k} m={m} r={r}: Burnside disagrees with enumeration")
                })?;
                verified(&target, &d, &format!("k={k} m={m} r={r}"))?;
                powers += 1;
            }
        }
    }
    Ok(format!("{dichotomies} dichotomy checks, {powers} chain powers"))
}

enum Factor {
    Quotient(usize, GroupSpec),
    Gk(usize),
}

impl Factor {
    fn decomposition(&self) -> Result<Decomposition<Subset>, String> {
        match self {
            Factor::Quotient(n, g) => quotient_scd(*n, g).map_err(|e| e.to_string()),
            Factor::Gk(n) => Ok(gk_scd(*n).map_err(|e| e.to_string())?.to_decomposition()),
        }
    }

    fn group(&self) -> (usize, GroupSpec) {
        match self {
            Factor::Quotient(n, g) => (*n, g.clone()),
            Factor::Gk(n) => (*n, GroupSpec::trivial(*n)),
        }
    }
}

fn random_factor(rng: &mut ChaCha8Rng) -> Factor {
    let n = rng.gen_range(1..=13usize);
    if rng.gen_bool(0.3) {
        return Factor::Gk(n);
    }
    let s = *divisors(n).choose(rng).unwrap();
    Factor::Quotient(n, GroupSpec::rotation(n, s))
}

fn products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut largest = 0u128;
    let mut done = 0;
    while done < RANDOM_PRODUCTS {
        let (a, b) = (random_factor(&mut rng), random_factor(&mut rng));
        let (na, ga) = a.group();
        let (nb, gb) = b.group();
        let size = burnside_count(na, &ga).unwrap() * burnside_count(nb, &gb).unwrap();
        if size > PRODUCT_ELEMENT_CAP {
            continue;
        }
        let (da, db) = (a.decomposition()?, b.decomposition()?);
        let (pa, pb) = (quotient_poset(na, &ga).unwrap(), quotient_poset(nb, &gb).unwrap());
        verified(&pa, &da, "left factor")?;
        verified(&pb, &db, "right factor")?;
        let d = product_scd(&da, &db).map_err(|e| e.to_string())?;
        let label = format!("({na}, {ga}) x ({nb}, {gb})");
        verified(&ProductPoset::new(&pa, &pb), &d, &label)?;
        let middle = d.total_rank() / 2;
        let middle_count = d.chains().iter().flat_map(Chain::iter).filter(|p| p.rank() == middle).count();
        ensure(d.chain_count() == middle_count, || format!("{label}: chain count is not the middle rank size"))?;
        largest = largest.max(size);
        done += 1;
    }
    Ok(format!("{done} products, largest {largest} elements"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_scdforge");
    let commands: [&[&str]; 6] = [
        &["gk", "--n", "9"],
        &["quotient", "--n", "10", "--group", "(1 2 3 4 5 6)^2 (7 8 9)"],
        &["reflect", "--n", "9", "--group", "(1 9)(2 8)(4 6)"],
        &["reflect", "--n", "8", "--group", "(1 8)(2 7)", "--method", "cycle"],
        &["chainpower", "--k", "4", "--m", "3", "--r", "1"],
        &["chainpower", "--factor", "3:2:1", "--factor", "2:3:1"],
    ];
    let mut seen = HashSet::new();
    for args in commands {
        let run = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), || format!("{args:?} exited with {}", a.status))?;
        ensure(a.stdout == b.stdout, || format!("{args:?}: outputs differ"))?;
        ensure(a.stdout.ends_with(b"\n") && seen.insert(a.stdout.clone()), || format!("{args:?}: bad output"))?;
    }
    Ok(format!("{} commands", commands.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "bracketing SCD partitions B_n", budget: Duration::from_secs(10), run: gk_partition },
        Criterion { id: 2, name: "pairing facts", budget: Duration::from_secs(30), run: gk_facts },
        Criterion { id: 3, name: "X* commutes with σ", budget: Duration::from_secs(30), run: star_commutes_with_sigma },
        Criterion { id: 4, name: "predecessor mate property", budget: Duration::from_secs(60), run: predecessor_mates },
        Criterion { id: 5, name: "quotient SCDs verify", budget: Duration::from_secs(300), run: cyclic_quotients },
        Criterion { id: 6, name: "regression fixtures", budget: Duration::from_secs(10), run: fixtures },
        Criterion { id: 7, name: "reflection SCDs verify", budget: Duration::from_secs(120), run: reflections },
        Criterion { id: 8, name: "chain powers and dichotomy", budget: Duration::from_secs(120), run: chain_powers },
        Criterion { id: 9, name: "products re-verify", budget: Duration::from_secs(60), run: products },
        Criterion { id: 10, name: "CLI determinism", budget: Duration::from_secs(60), run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; took {elapsed:.1?}, budget {:?}", c.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {} ({detail}; {elapsed:.2?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {}: {why} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
