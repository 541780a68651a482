//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::{brute_left_complements, closure, is_direct, set, subsets_containing};
use subset_factor::catalog::{catalog_group_specs, Catalog};
use subset_factor::cayley::{ball, GeneratingSet};
use subset_factor::cfs::{
    cyclic_witness, decide_cfs, decide_strong_cfs, StrongCfsOptions, DEFAULT_CFS_CAP,
    SMALL_GROUP_SPECS, STRONG_CFS_SPECS,
};
use subset_factor::factor::{
    classify_factor, classify_factor_with, extend_complement, find_left_complement,
    find_same_complement, index2_criterion, restrict_complement, Classification, ClassifyOptions,
};
use subset_factor::group::{embedding_from_generators, right_transversal, Group, Subgroup};
use subset_factor::notation::{
    group_from_spec, parse_element_word, parse_subset, parse_subset_words,
};
use subset_factor::subset::{invert_set, translate, Side, Subset};

type Check = Result<String, String>;

fn groups_up_to(order: usize) -> Vec<Group> {
    SMALL_GROUP_SPECS
        .iter()
        .map(|s| group_from_spec(s).unwrap())
        .filter(|g| g.order() <= order)
        .collect()
}

fn exhaustive_none(g: &Group, a: &Subset) -> bool {
    classify_factor_with(g, a, ClassifyOptions::exhaustive())
        .unwrap()
        .classification
        == Classification::None
}

fn within(start: Instant, limit: Duration, msg: String) -> Check {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{msg} in {t:.2?}"))
    } else {
        Err(format!("{msg} but took {t:.2?} (limit {limit:?})"))
    }
}

fn positive_catalog() -> Check {
    let start = Instant::now();
    let cat = Catalog::builtin();
    let mut count = 0;
    for e in &cat.positive {
        let g = group_from_spec(&e.group).map_err(|x| x.to_string())?;
        let a = parse_subset_words(&g, &e.subset)
            .map_err(|x| x.to_string())?
            .to_vec();
        let b = parse_subset_words(&g, &e.complement)
            .map_err(|x| x.to_string())?
            .to_vec();
        let ok = match e.side {
            Side::Left => is_direct(&g, &a, &b),
            Side::Right => is_direct(&g, &b, &a),
        };
        if !ok {
            return Err(format!("{} is not a direct factorization", e.locus));
        }
        count += 1;
    }
    if count != 3 + 3 + 7 + 35 + 28 {
        return Err(format!("{count} positive entries"));
    }
    within(
        start,
        Duration::from_secs(1),
        format!("{count} factorizations verified"),
    )
}

fn witness_catalog() -> Check {
    let cat = Catalog::builtin();
    let mut worst = Duration::ZERO;
    let start = Instant::now();
    for e in &cat.non_factors {
        let t = Instant::now();
        let g = group_from_spec(&e.group).unwrap();
        let a = parse_subset_words(&g, &e.subset).unwrap();
        if a.len() != e.subset.len()
            || !g.order().is_multiple_of(a.len())
            || !exhaustive_none(&g, &a)
        {
            return Err(format!("{} is not a Lagrange non-factor", e.name));
        }
        if e.name == "C11xC11" {
            worst = t.elapsed();
        }
    }
    if cat.non_factors.len() != 18 {
        return Err(format!("{} witnesses", cat.non_factors.len()));
    }
    if worst >= Duration::from_secs(10) {
        return Err(format!("C11xC11 took {worst:?}"));
    }
    Ok(format!(
        "18 witnesses are non-factors; C11xC11 in {worst:.2?}, all in {:.2?}",
        start.elapsed()
    ))
}

fn classification() -> Check {
    let start = Instant::now();
    let mut failing = Vec::new();
    for spec in SMALL_GROUP_SPECS {
        let g = group_from_spec(spec).unwrap();
        let r = decide_strong_cfs(&g, StrongCfsOptions::default()).map_err(|e| e.to_string())?;
        let expected = STRONG_CFS_SPECS.contains(spec);
        if r.holds != expected {
            return Err(format!("{spec}: holds = {}", r.holds));
        }
        if let Some(w) = &r.witness {
            if !g.order().is_multiple_of(w.len()) || !exhaustive_none(&g, w) {
                return Err(format!("{spec}: witness does not verify"));
            }
            failing.push(*spec);
        }
    }
    let expected_failing = [
        "C6",
        "S3",
        "C8",
        "C4xC2",
        "D4",
        "Q8",
        "C9",
        "C10",
        "D5",
        "C12",
        "C6xC2",
        "D6",
        "A4",
        "sd(3,4,2)",
        "C14",
        "D7",
        "C15",
    ];
    let mut sorted = failing.clone();
    sorted.sort_unstable();
    let mut exp = expected_failing.to_vec();
    exp.sort_unstable();
    if sorted != exp {
        return Err(format!("failing groups {failing:?}"));
    }
    within(
        start,
        Duration::from_secs(60),
        format!("11 hold, {} fail with verified witnesses", failing.len()),
    )
}

fn cyclic_case() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=40usize {
        let g = group_from_spec(&format!("C{n}")).unwrap();
        for d in (3..n).filter(|d| n % d == 0) {
            let w = cyclic_witness(&g, d).map_err(|e| e.to_string())?;
            if w.len() != d || !exhaustive_none(&g, &w) {
                return Err(format!("C{n}, d = {d}: witness is a factor"));
            }
            count += 1;
        }
    }
    within(
        start,
        Duration::from_secs(30),
        format!("{count} cyclic witnesses are non-factors"),
    )
}

/// A random left factor `A` of `H` with its complement, both in `G`.
fn random_factor_of(g: &Group, h: &Subgroup, rng: &mut StdRng) -> (Subset, Subset) {
    let (hg, embed) = h.as_group(g);
    let m = hg.order();
    let sizes: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
    loop {
        let d = *sizes.choose(rng).unwrap();
        let mut others: Vec<usize> = (0..m).filter(|&x| x != hg.identity()).collect();
        others.shuffle(rng);
        let mut local = set(&hg, &others[..d - 1]);
        local.insert(hg.identity());
        if let Some(b) = find_left_complement(&hg, &local).unwrap() {
            let lift = |s: &Subset| Subset::from_indices(g.order(), s.iter().map(|x| embed[x]));
            return (lift(&local), lift(&b));
        }
    }
}

fn complement_transfer() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let groups: Vec<Group> = catalog_group_specs()
        .iter()
        .map(|s| group_from_spec(s).unwrap())
        .filter(|g| g.order() <= 30)
        .collect();
    let mut failures = 0;
    for _ in 0..1000 {
        let g = groups.choose(&mut rng).unwrap();
        let n = g.order();
        let gens: Vec<usize> = (0..rng.gen_range(0..=2))
            .map(|_| rng.gen_range(0..n))
            .collect();
        let h = Subgroup::new(g, set(g, &closure(g, &gens))).unwrap();
        let (a, b) = random_factor_of(g, &h, &mut rng);
        let x = right_transversal(g, &h);
        let bx = match extend_complement(g, &h, &a, &b, &x) {
            Ok(bx) => bx,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        if !is_direct(g, &a.to_vec(), &bx.to_vec()) {
            failures += 1;
            continue;
        }
        match restrict_complement(g, &h, &a, &bx) {
            Ok(c) => {
                let ok = c.is_subset_of(h.elements()) && is_direct_in(g, h.elements(), &a, &c);
                if !ok {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    if failures == 0 {
        Ok("1000 random instances, 0 failures".into())
    } else {
        Err(format!("{failures} failures"))
    }
}

/// `H = A·C` with unique representation, for `A, C ⊆ H`.
fn is_direct_in(g: &Group, h: &Subset, a: &Subset, c: &Subset) -> bool {
    let mut hits = vec![0u32; g.order()];
    for x in a {
        for y in c {
            hits[g.mul(x, y)] += 1;
        }
    }
    a.len() * c.len() == h.len() && h.iter().all(|z| hits[z] == 1)
}

fn hereditary() -> Check {
    let s3 = group_from_spec("perm:[(1,2,3);(1,2)]").unwrap();
    let s4 = group_from_spec("S4").unwrap();
    let a = parse_element_word(&s4, "(1,2,3)").unwrap();
    let b = parse_element_word(&s4, "(1,2)").unwrap();
    let phi = embedding_from_generators(&s3, &s4, &[a, b]).map_err(|e| e.to_string())?;
    let w = parse_subset(&s3, "(),(1,2,3)").unwrap();
    let lifted = Subset::from_indices(24, w.iter().map(|x| phi[x]));
    if !exhaustive_none(&s4, &lifted) {
        return Err("S3 witness is a factor of S4".into());
    }
    let c6 = group_from_spec("C6").unwrap();
    let w6 = cyclic_witness(&c6, 3).unwrap();
    for (n, k) in [(12, 2), (18, 3)] {
        let g = group_from_spec(&format!("C{n}")).unwrap();
        let a = g.generator("a").unwrap();
        let phi = embedding_from_generators(&c6, &g, &[g.pow(a, k)]).map_err(|e| e.to_string())?;
        let lifted = Subset::from_indices(n, w6.iter().map(|x| phi[x]));
        if !exhaustive_none(&g, &lifted) {
            return Err(format!("C6 witness is a factor of C{n}"));
        }
    }
    Ok("S3 → S4, C6 → C12, C6 → C18 witnesses stay non-factors".into())
}

fn oracle_equivalence() -> Check {
    let mut checked = 0;
    for g in groups_up_to(10) {
        let n = g.order();
        for a in subsets_containing(n, g.identity()) {
            if n % a.len() != 0 {
                continue;
            }
            let found = find_left_complement(&g, &set(&g, &a)).unwrap();
            let oracle = brute_left_complements(&g, &a);
            let agree = match &found {
                Some(b) => !oracle.is_empty() && is_direct(&g, &a, &b.to_vec()),
                None => oracle.is_empty(),
            };
            if !agree {
                return Err(format!("{}: disagreement on {a:?}", g.name()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} Lagrange subsets, 0 disagreements"))
}

fn duality_invariance() -> Check {
    let mut dual = 0;
    for g in groups_up_to(10) {
        let n = g.order();
        for mask in 1u64..(1 << n) {
            let a = Subset::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
            let c = classify_factor(&g, &a).unwrap().classification;
            let ci = classify_factor(&g, &invert_set(&g, &a))
                .unwrap()
                .classification;
            if c.mirrored() != ci {
                return Err(format!("{}: inversion duality fails for {:?}", g.name(), a));
            }
            dual += 1;
        }
    }
    let mut trans = 0;
    let mut idx2 = 0;
    for g in groups_up_to(12) {
        let n = g.order();
        for a in subsets_containing(n, g.identity())
            .into_iter()
            .filter(|a| n % a.len() == 0)
        {
            let a = set(&g, &a);
            let c = classify_factor(&g, &a).unwrap().classification;
            for x in 0..n {
                for side in [Side::Left, Side::Right] {
                    if classify_factor(&g, &translate(&g, &a, x, side))
                        .unwrap()
                        .classification
                        != c
                    {
                        return Err(format!("{}: translation changes {:?}", g.name(), a));
                    }
                }
            }
            trans += 1;
        }
        if n % 2 == 0 {
            for a in (0..n).combinations(n / 2) {
                let a = set(&g, &a);
                let left = common::brute_left_exists(&g, &a.to_vec());
                let right = common::brute_right_exists(&g, &a.to_vec());
                let il = index2_criterion(&g, &a, Side::Left).unwrap().is_some();
                let ir = index2_criterion(&g, &a, Side::Right).unwrap().is_some();
                let fl = find_left_complement(&g, &a).unwrap().is_some();
                if il != left || ir != right || fl != left {
                    return Err(format!(
                        "{}: index-2 equivalence fails for {:?}",
                        g.name(),
                        a
                    ));
                }
                idx2 += 1;
            }
        }
    }
    Ok(format!(
        "duality on {dual} subsets, translation on {trans}, index 2 on {idx2}"
    ))
}

fn ball_bounds() -> Check {
    let mut count = 0;
    for spec in catalog_group_specs() {
        let g = group_from_spec(&spec).unwrap();
        if g.standard_generators().len() != 2 {
            continue;
        }
        let gens = GeneratingSet::standard(&g).map_err(|e| e.to_string())?;
        let size = ball(&g, &gens, 2).members.len();
        let bound = if g.is_abelian() { 13 } else { 17 };
        if size > bound {
            return Err(format!("{spec}: |ball₂| = {size} > {bound}"));
        }
        if spec == "C5xC5" && size != 13 {
            return Err(format!("C5xC5: |ball₂| = {size}"));
        }
        count += 1;
    }
    Ok(format!(
        "{count} two-generated groups within bounds, C5xC5 attains 13"
    ))
}

fn common_complements() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for spec in ["C2xC2", "C4", "C2xC2xC2", "C3xC3"] {
        let g = group_from_spec(spec).unwrap();
        let n = g.order();
        for mask in 1u64..(1 << n) {
            let a: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if !n.is_multiple_of(a.len()) {
                continue;
            }
            let b = find_same_complement(&g, &set(&g, &a)).unwrap();
            match b {
                Some(b) if is_direct(&g, &a, &b.to_vec()) && is_direct(&g, &b.to_vec(), &a) => {}
                _ => return Err(format!("{spec}: no common complement for {a:?}")),
            }
            count += 1;
        }
    }
    within(
        start,
        Duration::from_secs(5),
        format!("{count} Lagrange subsets have a common complement"),
    )
}

fn cfs_desk_scale() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for spec in catalog_group_specs() {
        let g = group_from_spec(&spec).unwrap();
        if g.order() > 24 {
            continue;
        }
        let r = decide_cfs(&g, DEFAULT_CFS_CAP).map_err(|e| e.to_string())?;
        if !r.holds {
            return Err(format!("{spec}: no factor of size {:?}", r.failed_divisor));
        }
        for (d, f) in &r.per_divisor {
            let (l, rt) = (f.left.as_ref().unwrap(), f.right.as_ref().unwrap());
            if l.factor.len() != *d
                || rt.factor.len() != *d
                || !is_direct(&g, &l.factor.to_vec(), &l.complement.to_vec())
                || !is_direct(&g, &rt.complement.to_vec(), &rt.factor.to_vec())
            {
                return Err(format!("{spec}: bad factor of size {d}"));
            }
        }
        count += 1;
    }
    within(
        start,
        Duration::from_secs(60),
        format!("{count} groups of order ≤ 24 have the CFS property"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("positive catalog", positive_catalog),
        ("witness catalog", witness_catalog),
        ("classification", classification),
        ("cyclic case", cyclic_case),
        ("complement transfer", complement_transfer),
        ("hereditary", hereditary),
        ("oracle equivalence", oracle_equivalence),
        ("duality and invariance", duality_invariance),
        ("ball bounds", ball_bounds),
        ("common complements", common_complements),
        ("cfs at desk scale", cfs_desk_scale),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
