//! Deciding whether a subset is a left, right or two-sided factor.
//!
//! `A` is a *left* factor when `G = A·B` for some `B`: the right translates
//! `Ab` tile `G`. It is a *right* factor when `G = B·A`: the left translates
//! `bA` tile `G`. Throughout this module [`Side::Left`] refers to the first
//! situation and [`Side::Right`] to the second.
//!
//! Complements are found by an exact-cover search over the distinct
//! translates of `A`, always covering the least uncovered element next. Since
//! `G = A·B` implies `G = A·(Bb⁻¹)` for `b ∈ B`, the search may assume the
//! identity lies in `B`, i.e. that `A` itself is one of the tiles.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{generated_subgroup, Group, Subgroup, Transversal};
use crate::subset::{verify_direct_factorization, Side, Subset};

struct Tile {
    cells: Subset,
    /// Every `b` producing this translate, increasing.
    reps: Vec<usize>,
}

/// The distinct translates of `A` on one side, indexed by the elements they cover.
struct Tiling {
    tiles: Vec<Tile>,
    containing: Vec<Vec<u32>>,
}

impl Tiling {
    fn new(g: &Group, a: &Subset, side: Side) -> Tiling {
        let n = g.order();
        let mut tiles: Vec<Tile> = Vec::new();
        let mut seen: HashMap<Subset, usize> = HashMap::new();
        for b in 0..n {
            let cells = translate_for(g, a, b, side);
            match seen.get(&cells) {
                Some(&t) => tiles[t].reps.push(b),
                None => {
                    seen.insert(cells.clone(), tiles.len());
                    tiles.push(Tile {
                        cells,
                        reps: vec![b],
                    });
                }
            }
        }
        let mut containing = vec![Vec::new(); n];
        for (t, tile) in tiles.iter().enumerate() {
            for x in &tile.cells {
                containing[x].push(t as u32);
            }
        }
        Tiling { tiles, containing }
    }

    fn tile_of(&self, b: usize) -> usize {
        self.tiles
            .iter()
            .position(|t| t.reps.contains(&b))
            .expect("every element is a rep")
    }

    /// Depth-first exact cover starting from the tiles in `base`. `visit` is
    /// called with the chosen tiles of every cover found and returns whether
    /// to keep searching. Returns the number of search nodes.
    fn search(&self, n: usize, base: &[usize], mut visit: impl FnMut(&[usize]) -> bool) -> u64 {
        struct Frame {
            x: usize,
            pos: usize,
            applied: Option<usize>,
        }
        let mut covered = Subset::empty(n);
        for &t in base {
            if !self.tiles[t].cells.is_disjoint(&covered) {
                return 0;
            }
            covered.union_with(&self.tiles[t].cells);
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut nodes = 0u64;
        loop {
            match covered.first_absent() {
                None => {
                    let chosen: Vec<usize> = base
                        .iter()
                        .copied()
                        .chain(stack.iter().filter_map(|f| f.applied))
                        .collect();
                    if !visit(&chosen) {
                        return nodes;
                    }
                }
                Some(x) => stack.push(Frame {
                    x,
                    pos: 0,
                    applied: None,
                }),
            }
            loop {
                let Some(frame) = stack.last_mut() else {
                    return nodes;
                };
                if let Some(t) = frame.applied.take() {
                    covered.difference_with(&self.tiles[t].cells);
                }
                nodes += 1;
                let list = &self.containing[frame.x];
                let mut next = None;
                while frame.pos < list.len() {
                    let t = list[frame.pos] as usize;
                    frame.pos += 1;
                    if self.tiles[t].cells.is_disjoint(&covered) {
                        next = Some(t);
                        break;
                    }
                }
                match next {
                    Some(t) => {
                        covered.union_with(&self.tiles[t].cells);
                        frame.applied = Some(t);
                        break;
                    }
                    None => {
                        stack.pop();
                    }
                }
            }
        }
    }
}

/// `Ab` for [`Side::Left`] (tiles of a left factor), `bA` for [`Side::Right`].
fn translate_for(g: &Group, a: &Subset, b: usize, side: Side) -> Subset {
    let mut out = Subset::empty(g.order());
    for x in a {
        out.insert(match side {
            Side::Left => g.mul(x, b),
            Side::Right => g.mul(b, x),
        });
    }
    out
}

fn precheck(g: &Group, a: &Subset) -> Result<()> {
    a.check_parent(g)?;
    if a.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(())
}

/// Result of one complement search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub complement: Option<Subset>,
    pub nodes: u64,
}

/// Searches for `B` with `G = A·B` (left) or `G = B·A` (right). The first
/// complement found is returned; it always contains the identity.
pub fn search_complement(g: &Group, a: &Subset, side: Side) -> Result<SearchOutcome> {
    precheck(g, a)?;
    let n = g.order();
    if n % a.len() != 0 {
        return Ok(SearchOutcome {
            complement: None,
            nodes: 0,
        });
    }
    let tiling = Tiling::new(g, a, side);
    let base = tiling.tile_of(g.identity());
    let mut found = None;
    let nodes = tiling.search(n, &[base], |chosen| {
        found = Some(Subset::from_indices(
            n,
            chosen.iter().map(|&t| tiling.tiles[t].reps[0]),
        ));
        false
    });
    // The identity represents the base tile even when it is not its least rep.
    let complement = found.map(|mut b| {
        let base_rep = tiling.tiles[base].reps[0];
        if base_rep != g.identity() {
            b.remove(base_rep);
            b.insert(g.identity());
        }
        b
    });
    Ok(SearchOutcome { complement, nodes })
}

pub fn find_left_complement(g: &Group, a: &Subset) -> Result<Option<Subset>> {
    Ok(search_complement(g, a, Side::Left)?.complement)
}

pub fn find_right_complement(g: &Group, a: &Subset) -> Result<Option<Subset>> {
    Ok(search_complement(g, a, Side::Right)?.complement)
}

/// Every complement of `A` on the given side, sorted. Fails once more than
/// `limit` complements exist.
pub fn all_complements(g: &Group, a: &Subset, side: Side, limit: usize) -> Result<Vec<Subset>> {
    precheck(g, a)?;
    let n = g.order();
    if n % a.len() != 0 {
        return Ok(Vec::new());
    }
    let tiling = Tiling::new(g, a, side);
    let mut out = Vec::new();
    let mut overflow = false;
    tiling.search(n, &[], |chosen| {
        // Each tile may be produced by any of its representatives.
        let mut partial = vec![Subset::empty(n)];
        for &t in chosen {
            let reps = &tiling.tiles[t].reps;
            partial = partial
                .iter()
                .flat_map(|b| {
                    reps.iter().map(move |&r| {
                        let mut b = b.clone();
                        b.insert(r);
                        b
                    })
                })
                .collect();
            if out.len() + partial.len() > limit {
                overflow = true;
                return false;
            }
        }
        out.extend(partial);
        true
    });
    if overflow {
        return Err(Error::CapExceeded {
            what: "number of complements",
            cap: limit,
        });
    }
    out.sort();
    Ok(out)
}

/// Least `g` with `Ag = G∖A` ([`Side::Left`]) or `gA = G∖A` ([`Side::Right`]).
///
/// For `|A| = |G|/2` this is equivalent to `A` being a factor on that side,
/// with complement `{1, g}`.
pub fn index2_criterion(g: &Group, a: &Subset, side: Side) -> Result<Option<usize>> {
    precheck(g, a)?;
    if 2 * a.len() != g.order() {
        return Err(Error::Precondition(format!(
            "index-2 criterion needs |A| = |G|/2, got |A| = {} and |G| = {}",
            a.len(),
            g.order()
        )));
    }
    let rest = a.complement();
    Ok((0..g.order()).find(|&x| translate_for(g, a, x, side) == rest))
}

/// For `1 ∉ A`: least `g` whose translate `Ag` (left) or `gA` (right)
/// contains the identity and misses `A`. When none exists, `A` is not a
/// factor on that side.
pub fn hole_criterion(g: &Group, a: &Subset, side: Side) -> Result<Option<usize>> {
    precheck(g, a)?;
    if a.contains(g.identity()) {
        return Err(Error::Precondition("hole criterion needs 1 ∉ A".into()));
    }
    // 1 ∈ Ab exactly when b = x⁻¹ for some x ∈ A (and likewise for bA).
    let mut candidates: Vec<usize> = a.iter().map(|x| g.inv(x)).collect();
    candidates.sort_unstable();
    Ok(candidates
        .into_iter()
        .find(|&b| translate_for(g, a, b, side).is_disjoint(a)))
}

/// True iff `A ∩ Ag` and `A ∩ gA` are nonempty for every `g`.
pub fn all_translates_meet(g: &Group, a: &Subset) -> bool {
    (0..g.order()).all(|x| {
        !translate_for(g, a, x, Side::Left).is_disjoint(a)
            && !translate_for(g, a, x, Side::Right).is_disjoint(a)
    })
}

/// `⟨A⟩` when `|A|` does not divide `|⟨A⟩|`, which rules out `A` being a factor.
pub fn lagrange_obstruction(g: &Group, a: &Subset) -> Result<Option<Subgroup>> {
    precheck(g, a)?;
    let h = generated_subgroup(g, a);
    Ok((h.order() % a.len() != 0).then_some(h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    TwoSided,
    LeftOnly,
    RightOnly,
    None,
}

impl Classification {
    pub fn from_sides(left: bool, right: bool) -> Classification {
        match (left, right) {
            (true, true) => Classification::TwoSided,
            (true, false) => Classification::LeftOnly,
            (false, true) => Classification::RightOnly,
            (false, false) => Classification::None,
        }
    }

    pub fn is_factor(self) -> bool {
        self != Classification::None
    }

    pub fn is_left(self) -> bool {
        matches!(self, Classification::TwoSided | Classification::LeftOnly)
    }

    pub fn is_right(self) -> bool {
        matches!(self, Classification::TwoSided | Classification::RightOnly)
    }

    /// The classification of `A⁻¹` given that of `A`.
    pub fn mirrored(self) -> Classification {
        Classification::from_sides(self.is_right(), self.is_left())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceKind {
    ExhaustedSearch,
    Index2Failure,
    HoleFailure,
    AllTranslatesMeet,
    LagrangeObstruction,
}

/// Why a subset is not a factor. `left` and `right` record how each side
/// was ruled out; `kind` summarises both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonFactorEvidence {
    pub kind: EvidenceKind,
    pub left: EvidenceKind,
    pub right: EvidenceKind,
    /// `⟨A⟩` for a Lagrange obstruction.
    #[serde(skip)]
    pub generated: Option<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub classification: Classification,
    /// `B` with `G = A·B`.
    pub left_complement: Option<Subset>,
    /// `B` with `G = B·A`.
    pub right_complement: Option<Subset>,
    /// `B` with `G = A·B = B·A`, when requested.
    pub same_complement: Option<Subset>,
    pub evidence: Option<NonFactorEvidence>,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Use the Lagrange, index-2, hole and translate criteria before searching.
    pub shortcuts: bool,
    /// Also look for a common two-sided complement.
    pub same_complement: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            shortcuts: true,
            same_complement: false,
        }
    }
}

impl ClassifyOptions {
    /// Plain exact-cover search on both sides.
    pub fn exhaustive() -> Self {
        ClassifyOptions {
            shortcuts: false,
            same_complement: false,
        }
    }
}

pub fn classify_factor(g: &Group, a: &Subset) -> Result<FactorReport> {
    classify_factor_with(g, a, ClassifyOptions::default())
}

pub fn classify_factor_with(g: &Group, a: &Subset, opts: ClassifyOptions) -> Result<FactorReport> {
    precheck(g, a)?;
    let none = |evidence: NonFactorEvidence, nodes| FactorReport {
        classification: Classification::None,
        left_complement: None,
        right_complement: None,
        same_complement: None,
        evidence: Some(evidence),
        nodes,
    };
    let uniform = |kind, generated| NonFactorEvidence {
        kind,
        left: kind,
        right: kind,
        generated,
    };

    let n = g.order();
    if opts.shortcuts || n % a.len() != 0 {
        if let Some(h) = lagrange_obstruction(g, a)? {
            let generated = Some(h.elements().clone());
            return Ok(none(
                uniform(EvidenceKind::LagrangeObstruction, generated),
                0,
            ));
        }
    }
    let hole = !a.contains(g.identity());
    if opts.shortcuts && hole && all_translates_meet(g, a) {
        return Ok(none(uniform(EvidenceKind::AllTranslatesMeet, None), 0));
    }

    let mut nodes = 0;
    let mut side_result = |side: Side| -> Result<std::result::Result<Subset, EvidenceKind>> {
        if opts.shortcuts && 2 * a.len() == n {
            return Ok(match index2_criterion(g, a, side)? {
                Some(x) => Ok(Subset::from_indices(n, [g.identity(), x])),
                None => Err(EvidenceKind::Index2Failure),
            });
        }
        if opts.shortcuts && hole && hole_criterion(g, a, side)?.is_none() {
            return Ok(Err(EvidenceKind::HoleFailure));
        }
        let out = search_complement(g, a, side)?;
        nodes += out.nodes;
        Ok(out.complement.ok_or(EvidenceKind::ExhaustedSearch))
    };
    let left = side_result(Side::Left)?;
    let right = side_result(Side::Right)?;

    let classification = Classification::from_sides(left.is_ok(), right.is_ok());
    let evidence = match (&left, &right) {
        (Err(l), Err(r)) => Some(NonFactorEvidence {
            kind: if l == r {
                *l
            } else {
                EvidenceKind::ExhaustedSearch
            },
            left: *l,
            right: *r,
            generated: None,
        }),
        _ => None,
    };
    let same_complement = if opts.same_complement && classification == Classification::TwoSided {
        find_same_complement(g, a)?
    } else {
        None
    };
    Ok(FactorReport {
        classification,
        left_complement: left.ok(),
        right_complement: right.ok(),
        same_complement,
        evidence,
        nodes,
    })
}

/// Re-checks non-factor evidence without using the search of this module.
pub fn verify_evidence(g: &Group, a: &Subset, evidence: &NonFactorEvidence) -> bool {
    if a.parent_order() != g.order() || a.is_empty() {
        return false;
    }
    let n = g.order();
    let check_side = |kind: EvidenceKind, side: Side| -> bool {
        match kind {
            EvidenceKind::LagrangeObstruction => match &evidence.generated {
                Some(h) => {
                    a.is_subset_of(h)
                        && h.iter().all(|x| h.iter().all(|y| h.contains(g.mul(x, y))))
                        && h.len() % a.len() != 0
                }
                None => false,
            },
            EvidenceKind::Index2Failure => {
                2 * a.len() == n && (0..n).all(|x| translate_for(g, a, x, side) != a.complement())
            }
            EvidenceKind::HoleFailure => {
                !a.contains(g.identity())
                    && (0..n).all(|x| {
                        let t = translate_for(g, a, x, side);
                        !t.contains(g.identity()) || !t.is_disjoint(a)
                    })
            }
            EvidenceKind::AllTranslatesMeet => {
                !a.contains(g.identity())
                    && (0..n).all(|x| !translate_for(g, a, x, side).is_disjoint(a))
            }
            EvidenceKind::ExhaustedSearch => !complement_exists_mrv(g, a, side),
        }
    };
    check_side(evidence.left, Side::Left) && check_side(evidence.right, Side::Right)
}

/// Independent existence check: backtracking that always branches on the
/// uncovered element with the fewest fitting translates, without merging
/// duplicate translates.
pub fn complement_exists_mrv(g: &Group, a: &Subset, side: Side) -> bool {
    let n = g.order();
    if a.is_empty() || n % a.len() != 0 {
        return false;
    }
    let translates: Vec<Subset> = (0..n).map(|b| translate_for(g, a, b, side)).collect();
    fn go(n: usize, translates: &[Subset], covered: &mut Subset) -> bool {
        if covered.is_full() {
            return true;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for x in (0..n).filter(|&x| !covered.contains(x)) {
            let fits: Vec<usize> = (0..n)
                .filter(|&b| translates[b].contains(x) && translates[b].is_disjoint(covered))
                .collect();
            if best.as_ref().is_none_or(|(_, f)| fits.len() < f.len()) {
                let empty = fits.is_empty();
                best = Some((x, fits));
                if empty {
                    break;
                }
            }
        }
        let (_, fits) = best.expect("an uncovered element");
        for b in fits {
            covered.union_with(&translates[b]);
            if go(n, translates, covered) {
                return true;
            }
            covered.difference_with(&translates[b]);
        }
        false
    }
    let mut covered = translates[g.identity()].clone();
    go(n, &translates, &mut covered)
}

/// `B ∩ H`, which satisfies `H = A·(B ∩ H)` whenever `G = A·B` and `A ⊆ H`.
pub fn restrict_complement(g: &Group, h: &Subgroup, a: &Subset, b: &Subset) -> Result<Subset> {
    a.check_parent(g)?;
    b.check_parent(g)?;
    if !a.is_subset_of(h.elements()) {
        return Err(Error::Precondition("A is not contained in H".into()));
    }
    if !verify_direct_factorization(g, a, b) {
        return Err(Error::Precondition("G = A·B does not hold".into()));
    }
    let c = b.intersection(h.elements());
    let (hg, _) = h.as_group(g);
    let local_a = h.restrict(a).expect("A ⊆ H");
    let local_c = h.restrict(&c).expect("C ⊆ H");
    if !verify_direct_factorization(&hg, &local_a, &local_c) {
        return Err(Error::Precondition(
            "H = A·(B ∩ H) failed; is H a subgroup?".into(),
        ));
    }
    Ok(c)
}

/// `BX`, which satisfies `G = A·(BX)` whenever `H = A·B` and `X` is a right
/// transversal of `H`.
pub fn extend_complement(
    g: &Group,
    h: &Subgroup,
    a: &Subset,
    b: &Subset,
    x: &Transversal,
) -> Result<Subset> {
    a.check_parent(g)?;
    b.check_parent(g)?;
    let (Some(local_a), Some(local_b)) = (h.restrict(a), h.restrict(b)) else {
        return Err(Error::Precondition("A and B must lie in H".into()));
    };
    let (hg, _) = h.as_group(g);
    if !verify_direct_factorization(&hg, &local_a, &local_b) {
        return Err(Error::Precondition("H = A·B does not hold".into()));
    }
    if x.side() != Side::Right || x.subgroup() != h {
        return Err(Error::Precondition(
            "X must be a right transversal of H".into(),
        ));
    }
    let mut bx = Subset::empty(g.order());
    for y in b {
        for r in x.reps() {
            bx.insert(g.mul(y, r));
        }
    }
    if !verify_direct_factorization(g, a, &bx) {
        return Err(Error::Precondition("G = A·(BX) failed".into()));
    }
    Ok(bx)
}

/// A common complement `B` with `G = A·B = B·A`, if one exists.
pub fn find_same_complement(g: &Group, a: &Subset) -> Result<Option<Subset>> {
    precheck(g, a)?;
    let n = g.order();
    if n % a.len() != 0 {
        return Err(Error::Precondition(format!(
            "|A| = {} does not divide {n}",
            a.len()
        )));
    }
    let left: Vec<Subset> = (0..n).map(|b| translate_for(g, a, b, Side::Left)).collect();
    let right: Vec<Subset> = (0..n)
        .map(|b| translate_for(g, a, b, Side::Right))
        .collect();
    let a_inv: Vec<usize> = a.iter().map(|x| g.inv(x)).collect();

    struct State<'a> {
        g: &'a Group,
        left: &'a [Subset],
        right: &'a [Subset],
        a_inv: &'a [usize],
        left_cov: Subset,
        right_cov: Subset,
        chosen: Vec<usize>,
    }
    fn go(s: &mut State<'_>) -> bool {
        let Some(x) = s.left_cov.first_absent() else {
            return true;
        };
        // x ∈ Ab  ⇔  b = a⁻¹x for some a ∈ A
        let mut cands: Vec<usize> = s.a_inv.iter().map(|&ai| s.g.mul(ai, x)).collect();
        cands.sort_unstable();
        for b in cands {
            if s.left[b].is_disjoint(&s.left_cov) && s.right[b].is_disjoint(&s.right_cov) {
                s.left_cov.union_with(&s.left[b]);
                s.right_cov.union_with(&s.right[b]);
                s.chosen.push(b);
                if go(s) {
                    return true;
                }
                s.chosen.pop();
                s.left_cov.difference_with(&s.left[b]);
                s.right_cov.difference_with(&s.right[b]);
            }
        }
        false
    }
    let mut state = State {
        g,
        left: &left,
        right: &right,
        a_inv: &a_inv,
        left_cov: Subset::empty(n),
        right_cov: Subset::empty(n),
        chosen: Vec::new(),
    };
    Ok(go(&mut state).then(|| Subset::from_indices(n, state.chosen.iter().copied())))
}
