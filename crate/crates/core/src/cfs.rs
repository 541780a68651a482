//! Lagrange subset enumeration and the CFS / strong CFS deciders.
//!
//! A subset is a *Lagrange subset* when its size divides the group order. A
//! group has the *strong CFS property* when every Lagrange subset is a factor,
//! and the *CFS property* when every divisor `d` of the order is the size of
//! some left factor and some right factor.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::search_complement;
use crate::group::{
    automorphisms, divisors, generated_subgroup, left_transversal, right_transversal, Group,
    Subgroup, DEFAULT_AUTOMORPHISM_CAP,
};
use crate::subset::{
    canonical_l1, canonical_l2, canonical_l3, invert_set, CanonLevel, Side, Subset,
};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "SUBSETFACTOR_BUDGET";
pub const DEFAULT_CFS_CAP: usize = 200;

/// Candidates handed to the worker pool at a time.
const CHUNK: usize = 2048;

/// The budget from `SUBSETFACTOR_BUDGET`, or [`DEFAULT_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// The groups of order at most 15, one per isomorphism class.
pub const SMALL_GROUP_SPECS: &[&str] = &[
    "C1",
    "C2",
    "C3",
    "C4",
    "C2xC2",
    "C5",
    "C6",
    "S3",
    "C7",
    "C8",
    "C4xC2",
    "C2xC2xC2",
    "D4",
    "Q8",
    "C9",
    "C3xC3",
    "C10",
    "D5",
    "C11",
    "C12",
    "C6xC2",
    "D6",
    "A4",
    "sd(3,4,2)",
    "C13",
    "C14",
    "D7",
    "C15",
];

/// The groups with the strong CFS property.
pub const STRONG_CFS_SPECS: &[&str] = &[
    "C1", "C2", "C3", "C5", "C7", "C11", "C13", "C2xC2", "C4", "C2xC2xC2", "C3xC3",
];

/// Picks canonical representatives at a fixed [`CanonLevel`].
pub struct Canonicalizer {
    level: CanonLevel,
    autos: Vec<Vec<usize>>,
}

impl Canonicalizer {
    pub fn new(g: &Group, level: CanonLevel) -> Result<Canonicalizer> {
        let autos = if level == CanonLevel::L3 {
            automorphisms(g, DEFAULT_AUTOMORPHISM_CAP)?
        } else {
            Vec::new()
        };
        Ok(Canonicalizer { level, autos })
    }

    pub fn level(&self) -> CanonLevel {
        self.level
    }

    pub fn canonical(&self, g: &Group, a: &Subset) -> Subset {
        match self.level {
            CanonLevel::L0 => {
                if a.contains(g.identity()) {
                    a.clone()
                } else {
                    crate::subset::translate(g, a, g.inv(a.first().expect("nonempty")), Side::Left)
                }
            }
            CanonLevel::L1 => canonical_l1(g, a),
            CanonLevel::L2 => canonical_l2(g, a),
            CanonLevel::L3 => canonical_l3(g, a, &self.autos),
        }
    }

    pub fn is_canonical(&self, g: &Group, a: &Subset) -> bool {
        self.canonical(g, a) == *a
    }
}

/// Iterator over the canonical size-`d` subsets containing the identity, in
/// increasing [`Subset`] order.
pub struct LagrangeSubsets<'g> {
    g: &'g Group,
    canon: Canonicalizer,
    combos: itertools::Combinations<std::vec::IntoIter<usize>>,
}

impl Iterator for LagrangeSubsets<'_> {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        for combo in self.combos.by_ref() {
            let a = with_identity(self.g, &combo);
            if self.canon.is_canonical(self.g, &a) {
                return Some(a);
            }
        }
        None
    }
}

fn with_identity(g: &Group, others: &[usize]) -> Subset {
    let mut a = Subset::from_indices(g.order(), others.iter().copied());
    a.insert(g.identity());
    a
}

fn non_identity(g: &Group) -> Vec<usize> {
    (0..g.order()).filter(|&x| x != g.identity()).collect()
}

pub fn enumerate_lagrange_subsets(
    g: &Group,
    d: usize,
    level: CanonLevel,
) -> Result<LagrangeSubsets<'_>> {
    if d == 0 || g.order() % d != 0 {
        return Err(Error::InvalidParameter(format!(
            "{d} does not divide {}",
            g.order()
        )));
    }
    Ok(LagrangeSubsets {
        g,
        canon: Canonicalizer::new(g, level)?,
        combos: non_identity(g).into_iter().combinations(d - 1),
    })
}

/// Factor test used by the deciders: left first, right only if needed.
fn is_factor_counting(g: &Group, a: &Subset) -> (bool, u64) {
    if generated_subgroup(g, a).order() % a.len() != 0 {
        return (false, 0);
    }
    let left = search_complement(g, a, Side::Left).expect("valid subset");
    if left.complement.is_some() {
        return (true, left.nodes);
    }
    let right = search_complement(g, a, Side::Right).expect("valid subset");
    (right.complement.is_some(), left.nodes + right.nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrongCfsOptions {
    pub canon: CanonLevel,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Maximum number of factor tests.
    pub budget: u64,
}

impl Default for StrongCfsOptions {
    fn default() -> Self {
        StrongCfsOptions {
            canon: CanonLevel::default(),
            threads: None,
            budget: default_budget(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongCfsReport {
    pub group: String,
    pub order: usize,
    pub holds: bool,
    /// First canonical Lagrange subset that is not a factor.
    #[serde(skip)]
    pub witness: Option<Subset>,
    pub divisors_checked: Vec<usize>,
    pub subsets_examined: u64,
    pub search_nodes: u64,
    pub canon_level: CanonLevel,
}

pub(crate) fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Decides the strong CFS property by testing every canonical Lagrange
/// subset of each nontrivial divisor size, smallest sizes first.
///
/// The verdict, witness and counters do not depend on the worker count.
pub fn decide_strong_cfs(g: &Group, opts: StrongCfsOptions) -> Result<StrongCfsReport> {
    let canon = Canonicalizer::new(g, opts.canon)?;
    with_pool(opts.threads, || strong_cfs_inner(g, &canon, opts))?
}

fn strong_cfs_inner(
    g: &Group,
    canon: &Canonicalizer,
    opts: StrongCfsOptions,
) -> Result<StrongCfsReport> {
    let n = g.order();
    let mut report = StrongCfsReport {
        group: g.name().to_string(),
        order: n,
        holds: true,
        witness: None,
        divisors_checked: Vec::new(),
        subsets_examined: 0,
        search_nodes: 0,
        canon_level: opts.canon,
    };
    for d in divisors(n).into_iter().filter(|&d| d != 1 && d != n) {
        report.divisors_checked.push(d);
        let mut combos = non_identity(g).into_iter().combinations(d - 1).peekable();
        while combos.peek().is_some() {
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
            let results: Vec<Option<(Subset, bool, u64)>> = chunk
                .par_iter()
                .map(|combo| {
                    let a = with_identity(g, combo);
                    if !canon.is_canonical(g, &a) {
                        return None;
                    }
                    let (ok, nodes) = is_factor_counting(g, &a);
                    Some((a, ok, nodes))
                })
                .collect();
            for (a, ok, nodes) in results.into_iter().flatten() {
                if report.subsets_examined == opts.budget {
                    return Err(Error::BudgetExceeded {
                        budget: opts.budget,
                        examined: report.subsets_examined,
                    });
                }
                report.subsets_examined += 1;
                report.search_nodes += nodes;
                if !ok {
                    report.holds = false;
                    report.witness = Some(a);
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// How a factor of a given size was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorRoute {
    Subgroup,
    Transversal,
    Search,
}

/// A factor together with its complement. For left factors
/// `G = factor · complement`, for right factors `G = complement · factor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizedFactor {
    pub factor: Subset,
    pub complement: Subset,
    pub route: FactorRoute,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorFactors {
    pub left: Option<SizedFactor>,
    pub right: Option<SizedFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfsReport {
    pub group: String,
    pub order: usize,
    pub holds: bool,
    pub per_divisor: BTreeMap<usize, DivisorFactors>,
    /// Least divisor lacking a left or right factor.
    pub failed_divisor: Option<usize>,
}

/// One subgroup of each order found among the cyclic and two-generated
/// subgroups, preferring the least generators.
pub fn small_subgroups(g: &Group) -> BTreeMap<usize, Subgroup> {
    let n = g.order();
    let wanted = divisors(n).len();
    let mut found: BTreeMap<usize, Subgroup> = BTreeMap::new();
    found.insert(n, Subgroup::whole(g));
    let mut cyclic: Vec<Subset> = Vec::new();
    for x in 0..n {
        let h = generated_subgroup(g, &Subset::singleton(n, x));
        if !cyclic.contains(h.elements()) {
            cyclic.push(h.elements().clone());
        }
        found.entry(h.order()).or_insert(h);
    }
    if found.len() == wanted {
        return found;
    }
    for (i, x) in cyclic.iter().enumerate() {
        for y in &cyclic[i + 1..] {
            if x.is_subset_of(y) || y.is_subset_of(x) {
                continue;
            }
            let h = generated_subgroup(g, &x.union(y));
            found.entry(h.order()).or_insert(h);
            if found.len() == wanted {
                return found;
            }
        }
    }
    found
}

/// Decides the CFS property: for every divisor `d`, a left and a right
/// factor of size `d`, each with a verified complement.
pub fn decide_cfs(g: &Group, cap: usize) -> Result<CfsReport> {
    let n = g.order();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "group order for CFS",
            cap,
        });
    }
    let subgroups = small_subgroups(g);
    let mut report = CfsReport {
        group: g.name().to_string(),
        order: n,
        holds: true,
        per_divisor: BTreeMap::new(),
        failed_divisor: None,
    };
    for d in divisors(n) {
        let entry = if let Some(h) = subgroups.get(&d) {
            // G = H·X for a right transversal X, and G = Y·H for a left one.
            DivisorFactors {
                left: Some(SizedFactor {
                    factor: h.elements().clone(),
                    complement: right_transversal(g, h).reps().clone(),
                    route: FactorRoute::Subgroup,
                }),
                right: Some(SizedFactor {
                    factor: h.elements().clone(),
                    complement: left_transversal(g, h).reps().clone(),
                    route: FactorRoute::Subgroup,
                }),
            }
        } else if let Some(k) = subgroups.get(&(n / d)) {
            DivisorFactors {
                left: Some(SizedFactor {
                    factor: left_transversal(g, k).reps().clone(),
                    complement: k.elements().clone(),
                    route: FactorRoute::Transversal,
                }),
                right: Some(SizedFactor {
                    factor: right_transversal(g, k).reps().clone(),
                    complement: k.elements().clone(),
                    route: FactorRoute::Transversal,
                }),
            }
        } else {
            search_sized_factor(g, d)?
        };
        if (entry.left.is_none() || entry.right.is_none()) && report.failed_divisor.is_none() {
            report.holds = false;
            report.failed_divisor = Some(d);
        }
        report.per_divisor.insert(d, entry);
    }
    Ok(report)
}

/// Any left factor of size `d`, found by search; the matching right factor is its inverse.
fn search_sized_factor(g: &Group, d: usize) -> Result<DivisorFactors> {
    for a in enumerate_lagrange_subsets(g, d, CanonLevel::L1)? {
        if let Some(b) = search_complement(g, &a, Side::Left)?.complement {
            return Ok(DivisorFactors {
                right: Some(SizedFactor {
                    factor: invert_set(g, &a),
                    complement: invert_set(g, &b),
                    route: FactorRoute::Search,
                }),
                left: Some(SizedFactor {
                    factor: a,
                    complement: b,
                    route: FactorRoute::Search,
                }),
            });
        }
    }
    Ok(DivisorFactors::default())
}

/// `{1, a², a³, …, a^d}` for the least generator `a` of a cyclic group.
pub fn cyclic_witness(g: &Group, d: usize) -> Result<Subset> {
    let n = g.order();
    if !g.is_cyclic() {
        return Err(Error::Precondition(format!("{} is not cyclic", g.name())));
    }
    if d < 3 || d >= n || n % d != 0 {
        return Err(Error::Precondition(format!(
            "need a proper divisor d ≥ 3 of {n}, got {d}"
        )));
    }
    let a = (0..n)
        .find(|&x| g.element_order(x) == n)
        .expect("cyclic group has a generator");
    let mut w = Subset::singleton(n, g.identity());
    for k in 2..=d {
        w.insert(g.pow(a, k as i64));
    }
    Ok(w)
}
