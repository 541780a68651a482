//! Independent oracles shared by the integration tests. Nothing here calls
//! the search code of the library.
#![allow(dead_code)]

use itertools::Itertools;
use subset_factor::group::Group;
use subset_factor::subset::Subset;

/// `G = A·B` with unique representation, by counting products.
pub fn is_direct(g: &Group, a: &[usize], b: &[usize]) -> bool {
    if a.len() * b.len() != g.order() {
        return false;
    }
    let mut hits = vec![0u32; g.order()];
    for &x in a {
        for &y in b {
            hits[g.mul(x, y)] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

/// Every `B` with `G = A·B`, by trying all subsets of the right size.
pub fn brute_left_complements(g: &Group, a: &[usize]) -> Vec<Vec<usize>> {
    let n = g.order();
    if a.is_empty() || !n.is_multiple_of(a.len()) {
        return Vec::new();
    }
    (0..n)
        .combinations(n / a.len())
        .filter(|b| is_direct(g, a, b))
        .collect()
}

pub fn brute_left_exists(g: &Group, a: &[usize]) -> bool {
    let n = g.order();
    n.is_multiple_of(a.len())
        && (0..n)
            .combinations(n / a.len())
            .any(|b| is_direct(g, a, &b))
}

pub fn brute_right_exists(g: &Group, a: &[usize]) -> bool {
    let n = g.order();
    n.is_multiple_of(a.len())
        && (0..n)
            .combinations(n / a.len())
            .any(|b| is_direct(g, &b, a))
}

/// All subsets of `0..n` that contain `must`, as sorted vectors.
pub fn subsets_containing(n: usize, must: usize) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (0..n).filter(|&x| x != must).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << others.len()) {
        let mut v: Vec<usize> = (0..others.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| others[i])
            .collect();
        v.push(must);
        v.sort_unstable();
        out.push(v);
    }
    out
}

pub fn set(g: &Group, v: &[usize]) -> Subset {
    Subset::from_indices(g.order(), v.iter().copied())
}

/// Closure of `v` under multiplication.
pub fn closure(g: &Group, v: &[usize]) -> Vec<usize> {
    let mut elems = vec![g.identity()];
    let mut i = 0;
    while i < elems.len() {
        for &s in v {
            let y = g.mul(elems[i], s);
            if !elems.contains(&y) {
                elems.push(y);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    elems
}
