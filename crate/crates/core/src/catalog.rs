//! The built-in catalog of factorizations and non-factor witnesses, and the
//! checks that reproduce the strong CFS classification from it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cfs::{
    decide_strong_cfs, enumerate_lagrange_subsets, StrongCfsOptions, SMALL_GROUP_SPECS,
    STRONG_CFS_SPECS,
};
use crate::error::Result;
use crate::factor::{classify_factor_with, Classification, ClassifyOptions};
use crate::group::{embedding_from_generators, Group};
use crate::notation::{group_from_spec, parse_element_word, parse_subset_words};
use crate::subset::{verify_direct_factorization, CanonLevel, Side, Subset};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// `G = subset · complement` for [`Side::Left`], `G = complement · subset` for [`Side::Right`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveEntry {
    pub group: String,
    pub locus: String,
    pub subset: Vec<String>,
    pub complement: Vec<String>,
    pub side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonFactorEntry {
    pub name: String,
    pub group: String,
    pub locus: String,
    pub subset: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteKind {
    /// Ruled out by its own non-factor entry.
    Witness,
    /// Ruled out through a subgroup isomorphic to another ruled-out group.
    Subgroup,
}

/// How one of the groups left after the general arguments is ruled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationRoute {
    pub group: String,
    pub name: String,
    pub route: RouteKind,
    /// Name of the non-factor entry whose group embeds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub via: Option<String>,
    /// Images of that group's generators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub images: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub positive: Vec<PositiveEntry>,
    pub non_factors: Vec<NonFactorEntry>,
    pub routes: Vec<EliminationRoute>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        serde_json::from_str(CATALOG_JSON).expect("embedded catalog is valid JSON")
    }

    pub fn non_factor(&self, name: &str) -> Option<&NonFactorEntry> {
        self.non_factors.iter().find(|e| e.name == name)
    }
}

/// Specs of every group in the catalog: the groups of order at most 15,
/// the non-factor groups and the groups of the elimination routes.
pub fn catalog_group_specs() -> Vec<String> {
    let cat = Catalog::builtin();
    let mut specs: Vec<String> = SMALL_GROUP_SPECS.iter().map(|s| s.to_string()).collect();
    let more = cat
        .non_factors
        .iter()
        .map(|e| e.group.clone())
        .chain(cat.routes.iter().map(|r| r.group.clone()));
    for spec in more {
        if !specs.contains(&spec) {
            specs.push(spec);
        }
    }
    specs
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    PositiveFactorization { complement: Vec<String>, side: Side },
    NonFactor,
}

/// A catalog entry in uniform shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCatalogEntry {
    pub group: String,
    pub subset: Vec<String>,
    pub claim: Claim,
    pub locus: String,
}

/// Every non-factor entry followed by every positive entry.
pub fn witness_catalog() -> Vec<WitnessCatalogEntry> {
    let cat = Catalog::builtin();
    let negative = cat.non_factors.into_iter().map(|e| WitnessCatalogEntry {
        group: e.group,
        subset: e.subset,
        claim: Claim::NonFactor,
        locus: e.locus,
    });
    let positive = cat.positive.into_iter().map(|e| WitnessCatalogEntry {
        group: e.group,
        subset: e.subset,
        claim: Claim::PositiveFactorization {
            complement: e.complement,
            side: e.side,
        },
        locus: e.locus,
    });
    negative.chain(positive).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    /// `i` to `v`, see [`verify_catalog`].
    pub part: &'static str,
    pub locus: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

impl CatalogReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

#[derive(Default)]
struct Groups(BTreeMap<String, Group>);

impl Groups {
    fn get(&mut self, spec: &str) -> Result<&Group> {
        if !self.0.contains_key(spec) {
            let g = group_from_spec(spec)?;
            self.0.insert(spec.to_string(), g);
        }
        Ok(&self.0[spec])
    }
}

fn item(
    part: &'static str,
    locus: impl Into<String>,
    outcome: Result<(bool, String)>,
) -> CheckItem {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckItem {
        part,
        locus: locus.into(),
        passed,
        detail,
    }
}

/// Checks the built-in catalog.
pub fn verify_paper() -> CatalogReport {
    verify_catalog(&Catalog::builtin())
}

/// Runs every check against `cat`:
///
/// * `i`: each positive entry is a direct factorization;
/// * `ii`: each non-factor entry is a non-factor on both sides by plain search;
/// * `iii`: the strong CFS groups pass the decider;
/// * `iv`: each elimination route holds, embedded witnesses staying non-factors;
/// * `v`: the size-4 lists for `C2xC2xC2` and size-3 lists for `C3xC3` are complete.
pub fn verify_catalog(cat: &Catalog) -> CatalogReport {
    let mut groups = Groups::default();
    let mut items = Vec::new();

    for e in &cat.positive {
        let outcome = groups.get(&e.group).and_then(|g| {
            let a = parse_subset_words(g, &e.subset)?;
            let b = parse_subset_words(g, &e.complement)?;
            let ok = match e.side {
                Side::Left => verify_direct_factorization(g, &a, &b),
                Side::Right => verify_direct_factorization(g, &b, &a),
            };
            Ok((ok, format!("|A| = {}, |B| = {}", a.len(), b.len())))
        });
        items.push(item("i", &e.locus, outcome));
    }

    for e in &cat.non_factors {
        let outcome = groups.get(&e.group).and_then(|g| {
            let a = parse_subset_words(g, &e.subset)?;
            if a.len() != e.subset.len() {
                return Ok((false, "repeated elements".to_string()));
            }
            let r = classify_factor_with(g, &a, ClassifyOptions::exhaustive())?;
            let ok = g.order() % a.len() == 0 && r.classification == Classification::None;
            Ok((
                ok,
                format!(
                    "order {}, |A| = {}, {} search nodes",
                    g.order(),
                    a.len(),
                    r.nodes
                ),
            ))
        });
        items.push(item("ii", &e.locus, outcome));
    }

    for spec in STRONG_CFS_SPECS {
        let outcome = groups.get(spec).and_then(|g| {
            let opts = StrongCfsOptions {
                canon: CanonLevel::L1,
                ..StrongCfsOptions::default()
            };
            let r = decide_strong_cfs(g, opts)?;
            Ok((r.holds, format!("{} subsets examined", r.subsets_examined)))
        });
        items.push(item("iii", format!("strong-cfs/{spec}"), outcome));
    }

    for route in &cat.routes {
        let outcome = check_route(cat, &mut groups, route);
        items.push(item("iv", format!("route/{}", route.name), outcome));
    }

    for (spec, d, expected) in [("C2xC2xC2", 4, 35), ("C3xC3", 3, 28)] {
        let outcome = groups.get(spec).and_then(|g| {
            let all: BTreeSet<Subset> = enumerate_lagrange_subsets(g, d, CanonLevel::L0)?.collect();
            let listed = cat
                .positive
                .iter()
                .filter(|e| e.group == spec && e.subset.len() == d)
                .map(|e| parse_subset_words(g, &e.subset))
                .collect::<Result<BTreeSet<Subset>>>()?;
            let ok = all.len() == expected && listed == all;
            Ok((
                ok,
                format!(
                    "{} subsets, {} listed, expected {expected}",
                    all.len(),
                    listed.len()
                ),
            ))
        });
        items.push(item("v", format!("complete/{spec}/{d}"), outcome));
    }

    CatalogReport {
        passed: items.iter().all(|i| i.passed),
        items,
    }
}

fn check_route(
    cat: &Catalog,
    groups: &mut Groups,
    route: &EliminationRoute,
) -> Result<(bool, String)> {
    match route.route {
        RouteKind::Witness => {
            let ok = cat
                .non_factors
                .iter()
                .any(|e| e.name == route.name && e.group == route.group);
            Ok((ok, "own witness".to_string()))
        }
        RouteKind::Subgroup => {
            let Some(base_entry) = route.via.as_deref().and_then(|v| cat.non_factor(v)) else {
                return Ok((false, "unknown base group".to_string()));
            };
            let base = groups.get(&base_entry.group)?.clone();
            let witness = parse_subset_words(&base, &base_entry.subset)?;
            let g = groups.get(&route.group)?;
            let images = route
                .images
                .iter()
                .map(|w| parse_element_word(g, w))
                .collect::<Result<Vec<usize>>>()?;
            let phi = embedding_from_generators(&base, g, &images)?;
            let lifted = Subset::from_indices(g.order(), witness.iter().map(|x| phi[x]));
            let r = classify_factor_with(g, &lifted, ClassifyOptions::exhaustive())?;
            Ok((
                r.classification == Classification::None,
                format!(
                    "{} embeds in a group of order {}",
                    base_entry.name,
                    g.order()
                ),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let cat = Catalog::builtin();
        let count = |g: &str, d: usize| {
            cat.positive
                .iter()
                .filter(|e| e.group == g && e.subset.len() == d)
                .count()
        };
        assert_eq!(count("C2xC2", 2), 3);
        assert_eq!(count("C4", 2), 3);
        assert_eq!(count("C2xC2xC2", 2), 7);
        assert_eq!(count("C2xC2xC2", 4), 35);
        assert_eq!(count("C3xC3", 3), 28);
        assert_eq!(cat.non_factors.len(), 18);
        assert_eq!(cat.routes.len(), 21);
        assert_eq!(witness_catalog().len(), 18 + 76);
    }

    #[test]
    fn catalog_examples() {
        let cat = witness_catalog();
        let d4 = cat.iter().find(|e| e.group == "D4").unwrap();
        assert_eq!(d4.subset, ["1", "a", "b", "a^2*b"]);
        assert_eq!(d4.claim, Claim::NonFactor);
        let find =
            |g: &str, a: &[&str]| cat.iter().find(|e| e.group == g && e.subset == a).unwrap();
        let e = find("C2xC2xC2", &["1", "b", "c", "a*c"]);
        assert_eq!(
            e.claim,
            Claim::PositiveFactorization {
                complement: vec!["1".into(), "a*b".into()],
                side: Side::Left
            }
        );
        let e = find("C3xC3", &["1", "a", "a*b"]);
        let Claim::PositiveFactorization { complement, .. } = &e.claim else {
            panic!()
        };
        assert_eq!(complement, &["1", "a*b^2", "a^2*b"]);
    }

    #[test]
    fn corrupted_entry_is_flagged() {
        let mut cat = Catalog::builtin();
        cat.positive[4].complement = vec!["1".into(), "a^2".into()];
        cat.non_factors.retain(|e| e.name == "D4" || e.name == "Q8");
        cat.non_factors[0].subset = vec!["1".into(), "a".into(), "a^2".into(), "a^3".into()];
        cat.routes.clear();
        let report = verify_catalog(&cat);
        assert!(!report.passed);
        let failed: Vec<&str> = report.failures().map(|i| i.locus.as_str()).collect();
        assert_eq!(failed, ["C4/2", "nonfactor/D4"]);
    }
}
