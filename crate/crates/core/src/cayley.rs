//! Balls and connected subsets in Cayley graphs, and the `Ã` construction
//! for building non-factors around a hole at the identity.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::group::{divisors, generated_subgroup, Group};
use crate::subset::{translate, Side, Subset};

/// Generators of the whole group, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    gens: Vec<usize>,
    /// `gens` followed by the inverses not already present.
    symmetric: Vec<usize>,
}

impl GeneratingSet {
    pub fn new(g: &Group, gens: Vec<usize>) -> Result<GeneratingSet> {
        if let Some(&x) = gens.iter().find(|&&x| x >= g.order()) {
            return Err(Error::InvalidParameter(format!("element {x} out of range")));
        }
        let span = generated_subgroup(g, &Subset::from_indices(g.order(), gens.iter().copied()));
        if span.order() != g.order() {
            return Err(Error::Precondition(format!(
                "generators span a subgroup of order {} in a group of order {}",
                span.order(),
                g.order()
            )));
        }
        let mut symmetric = gens.clone();
        for &s in &gens {
            let t = g.inv(s);
            if !symmetric.contains(&t) {
                symmetric.push(t);
            }
        }
        Ok(GeneratingSet { gens, symmetric })
    }

    /// The standard generators of `g`.
    pub fn standard(g: &Group) -> Result<GeneratingSet> {
        GeneratingSet::new(g, g.standard_generators().to_vec())
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// Generators together with their inverses.
    pub fn symmetric(&self) -> &[usize] {
        &self.symmetric
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    pub radius: usize,
    pub members: Subset,
}

/// Elements of word length at most `r` over the generators and their inverses.
pub fn ball(g: &Group, gens: &GeneratingSet, r: usize) -> Ball {
    let n = g.order();
    let mut members = Subset::singleton(n, g.identity());
    let mut layer = vec![g.identity()];
    for _ in 0..r {
        let mut next = Vec::new();
        for &x in &layer {
            for &s in gens.symmetric() {
                let y = g.mul(x, s);
                if members.insert(y) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ball {
        center: g.identity(),
        radius: r,
        members,
    }
}

/// Whether `A` induces a connected subgraph of the undirected Cayley graph.
pub fn is_connected_subset(g: &Group, gens: &GeneratingSet, a: &Subset) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::EmptySubset);
    }
    let start = a.first().expect("nonempty");
    let mut seen = Subset::singleton(g.order(), start);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &s in gens.symmetric() {
            let y = g.mul(x, s);
            if a.contains(y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len() == a.len())
}

fn tilde_scan(g: &Group, at: &Subset, sides: &[Side]) -> Result<bool> {
    if !at.contains(g.identity()) {
        return Err(Error::Precondition("Ã must contain the identity".into()));
    }
    Ok(sides.iter().all(|&side| {
        (0..g.order()).all(|x| {
            // Side::Right translates by x on the right: Ãx.
            let meet = at.intersection(&translate(g, at, x, side));
            meet.len() > 2 || !meet.contains(g.identity())
        })
    }))
}

/// For every `g`: `|Ã ∩ Ãg| > 2` or `1 ∉ Ã ∩ Ãg`.
///
/// This alone only rules out `Ã ∖ {1}` being a left factor.
pub fn tilde_condition(g: &Group, at: &Subset) -> Result<bool> {
    tilde_scan(g, at, &[Side::Right])
}

/// [`tilde_condition`] for right translates `Ãg` and left translates `gÃ`.
pub fn tilde_condition_two_sided(g: &Group, at: &Subset) -> Result<bool> {
    tilde_scan(g, at, &[Side::Right, Side::Left])
}

/// Grows the ball of radius 2 to `d + 1` elements, adding the least
/// neighbouring element each step. Absent unless `d` divides the order and
/// `|ball₂| ≤ d + 1 ≤ |G|`.
pub fn construct_tilde(g: &Group, gens: &GeneratingSet, d: usize) -> Option<Subset> {
    let n = g.order();
    let target = d + 1;
    if d == 0 || n % d != 0 || target > n {
        return None;
    }
    let mut at = ball(g, gens, 2).members;
    if at.len() > target {
        return None;
    }
    while at.len() < target {
        let next = at
            .iter()
            .flat_map(|x| gens.symmetric().iter().map(move |&s| g.mul(x, s)))
            .filter(|&y| !at.contains(y))
            .min()
            .expect("a proper connected subset has a neighbour");
        at.insert(next);
    }
    Some(at)
}

/// Divisors `d` of the order for which [`construct_tilde`] applies.
pub fn tilde_divisors(g: &Group, gens: &GeneratingSet) -> Vec<usize> {
    let b = ball(g, gens, 2).members.len();
    divisors(g.order())
        .into_iter()
        .filter(|&d| d + 1 >= b && d < g.order())
        .collect()
}
