//! Dense subsets of a finite group and the basic subset algebra: products,
//! directness, translates, inversion, the Lagrange test and canonical forms.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{automorphisms, Group, DEFAULT_AUTOMORPHISM_CAP};

const WORD_BITS: usize = 64;

/// A set of element indices of a group of order `n`, stored as a bit vector.
///
/// Subsets are ordered by comparing their sorted member sequences
/// lexicographically, so `{0, 1, 5} < {0, 2} < {1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    n: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            n,
            words: vec![0; n.div_ceil(WORD_BITS)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Subset::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut s = Subset::empty(n);
        s.insert(x);
        s
    }

    /// Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = Subset::empty(n);
        for x in members {
            assert!(x < n, "element index {x} out of range for order {n}");
            s.insert(x);
        }
        s
    }

    #[inline]
    pub fn parent_order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.words[x / WORD_BITS] >> (x % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        debug_assert!(x < self.n);
        let was = self.contains(x);
        self.words[x / WORD_BITS] |= 1 << (x % WORD_BITS);
        !was
    }

    #[inline]
    pub fn remove(&mut self, x: usize) -> bool {
        let was = self.contains(x);
        if was {
            self.words[x / WORD_BITS] &= !(1 << (x % WORD_BITS));
        }
        was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Least index not in the set.
    pub fn first_absent(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != u64::MAX {
                let i = k * WORD_BITS + (!w).trailing_zeros() as usize;
                return (i < self.n).then_some(i);
            }
        }
        None
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Subset {
        Subset::full(self.n).difference(self)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Subset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Subset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn zip_with(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Subset {
        assert_eq!(self.n, other.n, "subsets of groups with different orders");
        Subset {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub(crate) fn check_parent(&self, g: &Group) -> Result<()> {
        if self.n != g.order() {
            return Err(Error::MismatchedParent(self.n, g.order()));
        }
        Ok(())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word * WORD_BITS + bit)
    }
}

impl<'a> IntoIterator for &'a Subset {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Witness that a product is not direct: `x = a*b = a2*b2` with distinct pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub element: usize,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductResult {
    pub product: Subset,
    pub collision: Option<Collision>,
    pub direct: bool,
}

/// The set product `AB`, with the first collision in `(a, b)` lexicographic
/// order when the product is not direct.
pub fn product(g: &Group, a: &Subset, b: &Subset) -> Result<ProductResult> {
    a.check_parent(g)?;
    b.check_parent(g)?;
    let n = g.order();
    let mut product = Subset::empty(n);
    let mut first_pair: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut collision = None;
    for x in a {
        let row = g.row(x);
        for y in b {
            let z = row[y] as usize;
            match first_pair[z] {
                None => {
                    first_pair[z] = Some((x, y));
                    product.insert(z);
                }
                Some(prev) => {
                    if collision.is_none() {
                        collision = Some(Collision {
                            element: z,
                            first: prev,
                            second: (x, y),
                        });
                    }
                }
            }
        }
    }
    let direct = collision.is_none();
    Ok(ProductResult {
        product,
        collision,
        direct,
    })
}

/// True iff `G = A·B`, i.e. `AB = G` and `|A||B| = |G|`.
pub fn verify_direct_factorization(g: &Group, a: &Subset, b: &Subset) -> bool {
    if a.parent_order() != g.order() || b.parent_order() != g.order() {
        return false;
    }
    if a.len() * b.len() != g.order() {
        return false;
    }
    let mut covered = Subset::empty(g.order());
    for x in a {
        let row = g.row(x);
        for y in b {
            if !covered.insert(row[y] as usize) {
                return false;
            }
        }
    }
    covered.is_full()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// `gA` for [`Side::Left`], `Ag` for [`Side::Right`].
pub fn translate(g: &Group, a: &Subset, by: usize, side: Side) -> Subset {
    let n = g.order();
    let mut out = Subset::empty(n);
    match side {
        Side::Left => {
            let row = g.row(by);
            for x in a {
                out.insert(row[x] as usize);
            }
        }
        Side::Right => {
            for x in a {
                out.insert(g.mul(x, by));
            }
        }
    }
    out
}

pub fn invert_set(g: &Group, a: &Subset) -> Subset {
    Subset::from_indices(g.order(), a.iter().map(|x| g.inv(x)))
}

pub fn is_lagrange(g: &Group, a: &Subset) -> Result<bool> {
    a.check_parent(g)?;
    match a.len() {
        0 => Err(Error::EmptySubset),
        k => Ok(g.order() % k == 0),
    }
}

/// Symmetry used to pick a canonical representative of a subset.
///
/// * `L0`: only normalise so that the identity is a member.
/// * `L1`: left translates `a⁻¹A`.
/// * `L2`: two-sided translates of `A` and `A⁻¹`.
/// * `L3`: `L2` closed under automorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CanonLevel {
    L0,
    #[default]
    L1,
    L2,
    L3,
}

impl std::str::FromStr for CanonLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L0" => Ok(CanonLevel::L0),
            "L1" => Ok(CanonLevel::L1),
            "L2" => Ok(CanonLevel::L2),
            "L3" => Ok(CanonLevel::L3),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown canonical level `{s}`"),
            }),
        }
    }
}

/// Canonical representative of `A`; always contains the identity.
///
/// For `L1`..`L3` the result is the least subset (in [`Subset`] order) of the
/// orbit of `A` that contains the identity, so it is constant on orbits.
/// `L0` returns `A` itself when it already contains the identity and
/// `m⁻¹A` for the least member `m` otherwise.
pub fn canonical_form(g: &Group, a: &Subset, level: CanonLevel) -> Result<Subset> {
    a.check_parent(g)?;
    if a.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(match level {
        CanonLevel::L0 => {
            if a.contains(g.identity()) {
                a.clone()
            } else {
                translate(g, a, g.inv(a.first().unwrap()), Side::Left)
            }
        }
        CanonLevel::L1 => canonical_l1(g, a),
        CanonLevel::L2 => canonical_l2(g, a),
        CanonLevel::L3 => {
            let autos = automorphisms(g, DEFAULT_AUTOMORPHISM_CAP)?;
            canonical_l3(g, a, &autos)
        }
    })
}

pub(crate) fn canonical_l1(g: &Group, a: &Subset) -> Subset {
    a.iter()
        .map(|x| translate(g, a, g.inv(x), Side::Left))
        .min()
        .expect("nonempty subset")
}

pub(crate) fn canonical_l2(g: &Group, a: &Subset) -> Subset {
    // Members of the orbit containing 1 are the conjugates h⁻¹(x⁻¹A)h, and the same for A⁻¹.
    let inv = invert_set(g, a);
    let mut best: Option<Subset> = None;
    for set in [a, &inv] {
        for x in set {
            let base = translate(g, set, g.inv(x), Side::Left);
            for h in 0..g.order() {
                let conj = translate(
                    g,
                    &translate(g, &base, g.inv(h), Side::Left),
                    h,
                    Side::Right,
                );
                if best.as_ref().is_none_or(|b| conj < *b) {
                    best = Some(conj);
                }
            }
        }
    }
    best.expect("nonempty subset")
}

pub(crate) fn canonical_l3(g: &Group, a: &Subset, autos: &[Vec<usize>]) -> Subset {
    autos
        .iter()
        .map(|phi| {
            canonical_l2(
                g,
                &Subset::from_indices(g.order(), a.iter().map(|x| phi[x])),
            )
        })
        .min()
        .expect("automorphism list contains the identity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    fn c(n: usize) -> Group {
        build_group(&GroupSpec::Cyclic(n)).unwrap()
    }

    #[test]
    fn bitset_basics() {
        let mut s = Subset::empty(130);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.first_absent(), Some(1));
        assert!(s.remove(64));
        assert!(!s.contains(64));
        assert_eq!(Subset::full(130).first_absent(), None);
        assert_eq!(s.complement().len(), 128);
    }

    #[test]
    fn ordering_is_lexicographic_on_members() {
        let a = Subset::from_indices(8, [0, 1, 5]);
        let b = Subset::from_indices(8, [0, 2]);
        let c = Subset::from_indices(8, [1]);
        let d = Subset::from_indices(8, [0, 1]);
        assert!(a < b && b < c);
        assert!(d < a);
    }

    #[test]
    fn product_collision_in_c4() {
        let g = c(4);
        let a = Subset::from_indices(4, [0, 1]);
        let r = product(&g, &a, &a).unwrap();
        assert_eq!(r.product.to_vec(), vec![0, 1, 2]);
        assert!(!r.direct);
        assert_eq!(
            r.collision,
            Some(Collision {
                element: 1,
                first: (0, 1),
                second: (1, 0)
            })
        );
    }

    #[test]
    fn identity_factor_is_direct() {
        let g = c(6);
        let one = Subset::singleton(6, 0);
        let b = Subset::from_indices(6, [1, 3, 4]);
        let r = product(&g, &one, &b).unwrap();
        assert!(r.direct);
        assert_eq!(r.product, b);
    }

    #[test]
    fn mismatched_parent_rejected() {
        let g = c(4);
        let a = Subset::singleton(5, 0);
        assert!(matches!(
            product(&g, &a, &a),
            Err(Error::MismatchedParent(5, 4))
        ));
    }

    #[test]
    fn translates_and_inverse() {
        let g = c(4);
        let a = Subset::from_indices(4, [0, 1]);
        assert_eq!(translate(&g, &a, 0, Side::Left), a);
        assert_eq!(translate(&g, &a, 1, Side::Right).to_vec(), vec![1, 2]);
        assert_eq!(invert_set(&g, &a).to_vec(), vec![0, 3]);
    }

    #[test]
    fn lagrange() {
        let g = c(6);
        assert!(is_lagrange(&g, &Subset::from_indices(6, [0, 1, 2])).unwrap());
        assert!(!is_lagrange(&g, &Subset::from_indices(6, [0, 1, 2, 3])).unwrap());
        assert!(is_lagrange(&g, &Subset::full(6)).unwrap());
        assert!(matches!(
            is_lagrange(&g, &Subset::empty(6)),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn canonical_l1_examples() {
        let g = build_group(&GroupSpec::DirectProduct(
            Box::new(GroupSpec::Cyclic(2)),
            Box::new(GroupSpec::Cyclic(2)),
        ))
        .unwrap();
        // 1, a, b, a*b
        let a = Subset::from_indices(4, [1, 3]);
        assert_eq!(
            canonical_form(&g, &a, CanonLevel::L1).unwrap().to_vec(),
            vec![0, 2]
        );
        let fixed = Subset::from_indices(4, [0, 1]);
        assert_eq!(canonical_form(&g, &fixed, CanonLevel::L1).unwrap(), fixed);
        assert!(matches!(
            canonical_form(&g, &Subset::empty(4), CanonLevel::L1),
            Err(Error::EmptySubset)
        ));
    }
}
