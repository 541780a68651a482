//! Finite groups as Cayley tables: construction of the concrete families,
//! table validation, subgroups, transversals and automorphisms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TableViolation};
use crate::perm::Perm;
use crate::subset::{Side, Subset};

pub const DEFAULT_CLOSURE_CAP: usize = 20_000;
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 64;
/// Largest order for which associativity is checked on every triple.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;
const MAX_AUTOMORPHISMS: usize = 200_000;

/// A normal form word: `(generator position, exponent)` pairs.
pub type NormalForm = Vec<(usize, i64)>;

/// A finite group given by its multiplication table.
///
/// Values are immutable after construction.
#[derive(Clone)]
pub struct Group {
    name: String,
    n: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    element_names: Vec<String>,
    generators: Vec<(String, usize)>,
    standard_generators: Vec<usize>,
    words: Option<Vec<NormalForm>>,
    perms: Option<Vec<Perm>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("order", &self.n)
            .finish()
    }
}

impl Group {
    /// Builds a group from a product function without validating it.
    fn from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> Group {
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(mul(x, y) as u32);
            }
        }
        Group::from_raw_table(n, table).expect("constructed table has an identity and inverses")
    }

    fn from_raw_table(n: usize, table: Vec<u32>) -> std::result::Result<Group, TableViolation> {
        let identity = (0..n)
            .find(|&e| {
                (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x)
            })
            .ok_or(TableViolation::NoIdentity)?;
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| {
                    table[x * n + y] as usize == identity && table[y * n + x] as usize == identity
                })
                .ok_or(TableViolation::NoInverse(x))?;
            inverse[x] = y as u32;
        }
        Ok(Group {
            name: String::new(),
            n,
            table,
            identity,
            inverse,
            element_names: (0..n).map(|i| format!("g{i}")).collect(),
            generators: Vec::new(),
            standard_generators: Vec::new(),
            words: None,
            perms: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    /// Row `x` of the table: `row(x)[y] = x*y`.
    #[inline]
    pub fn row(&self, x: usize) -> &[u32] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn pow(&self, x: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(x) } else { x };
        (0..e.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn element_name(&self, x: usize) -> &str {
        &self.element_names[x]
    }

    pub fn element_names(&self) -> &[String] {
        &self.element_names
    }

    /// Named generators in declaration order.
    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators
            .iter()
            .find(|(g, _)| g == name)
            .map(|&(_, x)| x)
    }

    /// The generating sequence used for Cayley graphs (e.g. `a, b` for a
    /// Heisenberg group even though `c` is also named).
    pub fn standard_generators(&self) -> &[usize] {
        &self.standard_generators
    }

    pub fn find_element(&self, name: &str) -> Option<usize> {
        self.element_names.iter().position(|s| s == name)
    }

    pub fn permutation(&self, x: usize) -> Option<&Perm> {
        self.perms.as_ref().map(|p| &p[x])
    }

    pub fn find_permutation(&self, p: &Perm) -> Option<usize> {
        let perms = self.perms.as_ref()?;
        let degree = perms.first().map_or(0, Perm::degree).max(p.degree());
        let target = p.with_degree(degree);
        perms.iter().position(|q| q.with_degree(degree) == target)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|x| self.element_order(x) == self.n)
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| self.row(x).iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = name.into();
        self
    }

    fn set_generators(&mut self, generators: Vec<(String, usize)>, standard: Vec<usize>) {
        self.generators = generators;
        self.standard_generators = standard;
    }

    fn set_words(&mut self, words: Vec<NormalForm>) {
        self.element_names = words
            .iter()
            .map(|w| format_normal_form(w, &self.generators))
            .collect();
        self.words = Some(words);
    }
}

pub(crate) fn format_normal_form(word: &[(usize, i64)], generators: &[(String, usize)]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter()
        .map(|&(g, e)| match e {
            1 => generators[g].0.clone(),
            _ => format!("{}^{}", generators[g].0, e),
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn letter(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("x{k}")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    (0..exp).fold(1 % m, |acc, _| acc * base % m)
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Description of a group to construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    /// Dihedral group of order `2m`.
    Dihedral(usize),
    Quaternion8,
    Symmetric(usize),
    Alternating(usize),
    /// `C_m ⋊ C_k` with `b·a·b⁻¹ = a^t`.
    SemidirectCyclic(usize, usize, usize),
    Heisenberg(usize),
    FromTable(PathBuf),
    FromPermutations(Vec<Perm>),
}

impl GroupSpec {
    pub fn product(a: GroupSpec, b: GroupSpec) -> GroupSpec {
        GroupSpec::DirectProduct(Box::new(a), Box::new(b))
    }

    /// `C_n^k` as a left-nested product.
    pub fn power(n: usize, k: usize) -> GroupSpec {
        (1..k).fold(GroupSpec::Cyclic(n), |acc, _| {
            GroupSpec::product(acc, GroupSpec::Cyclic(n))
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::DirectProduct(a, b) => match **b {
                GroupSpec::DirectProduct(..) => write!(f, "{a}x({b})"),
                _ => write!(f, "{a}x{b}"),
            },
            GroupSpec::Dihedral(m) => write!(f, "D{m}"),
            GroupSpec::Quaternion8 => write!(f, "Q8"),
            GroupSpec::Symmetric(k) => write!(f, "S{k}"),
            GroupSpec::Alternating(k) => write!(f, "A{k}"),
            GroupSpec::SemidirectCyclic(m, k, t) => write!(f, "sd({m},{k},{t})"),
            GroupSpec::Heisenberg(p) => write!(f, "Heis{p}"),
            GroupSpec::FromTable(path) => write!(f, "file:{}", path.display()),
            GroupSpec::FromPermutations(perms) => {
                let parts: Vec<String> = perms.iter().map(Perm::to_cycle_string).collect();
                write!(f, "perm:[{}]", parts.join(";"))
            }
        }
    }
}

/// Realises a [`GroupSpec`] as a concrete, validated table.
pub fn build_group(spec: &GroupSpec) -> Result<Group> {
    let group = match spec {
        GroupSpec::Cyclic(n) => cyclic(*n)?,
        GroupSpec::DirectProduct(a, b) => direct_product(&build_group(a)?, &build_group(b)?),
        GroupSpec::Dihedral(m) => {
            if *m == 0 {
                return Err(Error::InvalidParameter("D0 is not a finite group".into()));
            }
            semidirect_cyclic(*m, 2, m - 1)?
        }
        GroupSpec::Quaternion8 => quaternion8(),
        GroupSpec::Symmetric(k) => symmetric(*k)?,
        GroupSpec::Alternating(k) => alternating(*k)?,
        GroupSpec::SemidirectCyclic(m, k, t) => semidirect_cyclic(*m, *k, *t)?,
        GroupSpec::Heisenberg(p) => heisenberg(*p)?,
        GroupSpec::FromTable(path) => return load_group_file(path),
        GroupSpec::FromPermutations(perms) => close_permutations(perms, DEFAULT_CLOSURE_CAP)?,
    };
    debug_assert!(validate_rows(&group.table_rows()).is_ok());
    Ok(group.with_name(spec.to_string()))
}

fn cyclic(n: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic group of order 0".into()));
    }
    let mut g = Group::from_fn(n, |x, y| (x + y) % n);
    if n > 1 {
        g.set_generators(vec![("a".into(), 1)], vec![1]);
    }
    g.set_words(
        (0..n)
            .map(|i| if i == 0 { vec![] } else { vec![(0, i as i64)] })
            .collect(),
    );
    Ok(g)
}

/// Elements `(x, y)` are indexed `x + |G|·y`; generators of `G` come first and
/// all generators are renamed `a, b, c, …`.
pub fn direct_product(g: &Group, h: &Group) -> Group {
    let (n, m) = (g.order(), h.order());
    let mut p = Group::from_fn(n * m, |u, v| g.mul(u % n, v % n) + n * h.mul(u / n, v / n));
    let embed_g = |x: usize| x + n * h.identity();
    let embed_h = |y: usize| g.identity() + n * y;
    let generators: Vec<(String, usize)> = g
        .generators
        .iter()
        .map(|&(_, x)| embed_g(x))
        .chain(h.generators.iter().map(|&(_, y)| embed_h(y)))
        .enumerate()
        .map(|(k, x)| (letter(k), x))
        .collect();
    let standard = g
        .standard_generators
        .iter()
        .map(|&x| embed_g(x))
        .chain(h.standard_generators.iter().map(|&y| embed_h(y)))
        .collect();
    p.set_generators(generators, standard);
    match (&g.words, &h.words) {
        (Some(wg), Some(wh)) => {
            let shift = g.generators.len();
            let words = (0..n * m)
                .map(|u| {
                    let mut w = wg[u % n].clone();
                    w.extend(wh[u / n].iter().map(|&(k, e)| (k + shift, e)));
                    w
                })
                .collect();
            p.set_words(words);
        }
        _ => {
            p.element_names = (0..n * m)
                .map(|u| format!("({}, {})", g.element_name(u % n), h.element_name(u / n)))
                .collect();
        }
    }
    p
}

/// `C_m ⋊ C_k`: pairs `(i, j)` standing for `a^i b^j`, indexed `i + m·j`, with
/// `(i, j)·(i', j') = (i + i'·t^j mod m, j + j' mod k)`.
fn semidirect_cyclic(m: usize, k: usize, t: usize) -> Result<Group> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter("sd(m,k,t) needs m, k >= 1".into()));
    }
    let (mm, kk, tt) = (m as u64, k as u64, (t % m) as u64);
    if gcd(tt, mm) != 1 && m > 1 {
        return Err(Error::InvalidParameter(format!("gcd({t}, {m}) != 1")));
    }
    if pow_mod(tt, kk, mm) != 1 % mm {
        return Err(Error::InvalidParameter(format!("{t}^{k} is not 1 mod {m}")));
    }
    let powers: Vec<usize> = (0..k).map(|j| pow_mod(tt, j as u64, mm) as usize).collect();
    let mut g = Group::from_fn(m * k, |u, v| {
        let (i, j) = (u % m, u / m);
        let (i2, j2) = (v % m, v / m);
        (i + i2 * powers[j]) % m + m * ((j + j2) % k)
    });
    let mut generators = Vec::new();
    let mut standard = Vec::new();
    if m > 1 {
        generators.push(("a".to_string(), 1));
        standard.push(1);
    }
    if k > 1 {
        generators.push(("b".to_string(), m));
        standard.push(m);
    }
    g.set_generators(generators, standard);
    let gb = usize::from(m > 1);
    let words = (0..m * k)
        .map(|u| {
            let (i, j) = (u % m, u / m);
            let mut w = Vec::new();
            if i > 0 {
                w.push((0, i as i64));
            }
            if j > 0 {
                w.push((gb, j as i64));
            }
            w
        })
        .collect();
    g.set_words(words);
    Ok(g)
}

fn quaternion8() -> Group {
    // Units 1, i, j, k with signs; index = 2*unit + (sign is negative).
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut g = Group::from_fn(8, |x, y| {
        let (u, s) = UNIT[x / 2][y / 2];
        2 * u + ((x % 2 == 1) ^ (y % 2 == 1) ^ s) as usize
    });
    g.set_generators(vec![("i".into(), 2), ("j".into(), 4)], vec![2, 4]);
    let words = vec![
        vec![],
        vec![(0, 2)],
        vec![(0, 1)],
        vec![(0, 3)],
        vec![(1, 1)],
        vec![(0, 2), (1, 1)],
        vec![(0, 1), (1, 1)],
        vec![(0, 3), (1, 1)],
    ];
    g.words = Some(words);
    g.element_names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    g
}

fn cycle_perm(points: &[usize]) -> Perm {
    let text = format!(
        "({})",
        points
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    Perm::parse(&text).expect("well-formed cycle")
}

fn symmetric(k: usize) -> Result<Group> {
    let gens = match k {
        0 | 1 => vec![],
        2 => vec![cycle_perm(&[1, 2])],
        _ => vec![
            cycle_perm(&(1..=k).collect::<Vec<_>>()),
            cycle_perm(&[1, 2]),
        ],
    };
    close_permutations(&gens, DEFAULT_CLOSURE_CAP)
}

fn alternating(k: usize) -> Result<Group> {
    let gens: Vec<Perm> = (1..=k.saturating_sub(2))
        .map(|i| cycle_perm(&[i, i + 1, i + 2]))
        .collect();
    close_permutations(&gens, DEFAULT_CLOSURE_CAP)
}

/// Upper unitriangular 3×3 matrices over `F_p`, as triples `(x, y, z)` indexed
/// `x + p·y + p²·z` with `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+x·y')`.
fn heisenberg(p: usize) -> Result<Group> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "Heis{p}: {p} is not prime"
        )));
    }
    let split = |u: usize| (u % p, (u / p) % p, u / (p * p));
    let mut g = Group::from_fn(p * p * p, |u, v| {
        let (x, y, z) = split(u);
        let (x2, y2, z2) = split(v);
        (x + x2) % p + p * ((y + y2) % p) + p * p * ((z + z2 + x * y2) % p)
    });
    g.set_generators(
        vec![("a".into(), 1), ("b".into(), p), ("c".into(), p * p)],
        vec![1, p],
    );
    let words = (0..p * p * p)
        .map(|u| {
            let (x, y, z) = split(u);
            let w = (z + p * p - (x * y) % p) % p;
            [(0, x), (1, y), (2, w)]
                .into_iter()
                .filter(|&(_, e)| e > 0)
                .map(|(k, e)| (k, e as i64))
                .collect()
        })
        .collect();
    g.set_words(words);
    Ok(g)
}

/// Closes a list of permutations under composition.
///
/// Elements are numbered in breadth-first order from the identity, trying
/// generators in the given order. Generators are named `a, b, c, …`.
pub fn close_permutations(generators: &[Perm], cap: usize) -> Result<Group> {
    let degree = generators.iter().map(Perm::degree).max().unwrap_or(0);
    let gens: Vec<Perm> = generators.iter().map(|p| p.with_degree(degree)).collect();
    let mut elements = vec![Perm::identity(degree)];
    let mut index: HashMap<Perm, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut right_mul: Vec<Vec<u32>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (k, s) in gens.iter().enumerate() {
            let y = elements[head].then(s);
            let idx = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "permutation closure",
                            cap,
                        });
                    }
                    let i = elements.len();
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push((head, k));
                    i
                }
            };
            row.push(idx as u32);
        }
        right_mul.push(row);
        head += 1;
    }
    let n = elements.len();
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        table[x * n] = x as u32;
        for y in 1..n {
            let (p, k) = parent[y];
            table[x * n + y] = right_mul[table[x * n + p] as usize][k];
        }
    }
    let mut g = Group::from_raw_table(n, table).map_err(Error::Table)?;
    let gen_idx: Vec<usize> = gens.iter().map(|s| index[s]).collect();
    g.set_generators(
        gen_idx
            .iter()
            .enumerate()
            .map(|(k, &x)| (letter(k), x))
            .collect(),
        gen_idx.iter().copied().filter(|&x| x != 0).collect(),
    );
    g.element_names = elements.iter().map(Perm::to_cycle_string).collect();
    g.perms = Some(elements);
    Ok(g)
}

/// Validates a square table as a group table and wraps it as a [`Group`].
///
/// Checks, in order: shape, entry range, Latin square rows then columns,
/// identity, inverses, associativity (every triple up to order 512, `10n²`
/// seeded random triples above).
pub fn validate_table(rows: &[Vec<usize>]) -> Result<Group> {
    validate_rows(rows).map_err(Error::Table)
}

fn validate_rows(rows: &[Vec<usize>]) -> std::result::Result<Group, TableViolation> {
    let n = rows.len();
    if n == 0 {
        return Err(TableViolation::Empty);
    }
    let mut table = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(TableViolation::NotSquare {
                row: r,
                len: row.len(),
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(TableViolation::OutOfRange {
                    row: r,
                    col: c,
                    value: v,
                });
            }
            table.push(v as u32);
        }
    }
    let mut seen = vec![0usize; n];
    for r in 0..n {
        for c in 0..n {
            let v = table[r * n + c] as usize;
            if seen[v] == r + 1 {
                return Err(TableViolation::RowNotPermutation(r));
            }
            seen[v] = r + 1;
        }
    }
    seen.fill(0);
    for c in 0..n {
        for r in 0..n {
            let v = table[r * n + c] as usize;
            if seen[v] == c + 1 {
                return Err(TableViolation::ColumnNotPermutation(c));
            }
            seen[v] = c + 1;
        }
    }
    let g = Group::from_raw_table(n, table)?;
    let assoc = |x: usize, y: usize, z: usize| g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z));
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul(x, y);
                for z in 0..n {
                    if g.mul(xy, z) != g.mul(x, g.mul(y, z)) {
                        return Err(TableViolation::NotAssociative { x, y, z });
                    }
                }
            }
        }
    } else {
        let mut rng = StdRng::seed_from_u64(n as u64);
        for _ in 0..10 * n * n {
            let (x, y, z) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if !assoc(x, y, z) {
                return Err(TableViolation::NotAssociative { x, y, z });
            }
        }
    }
    let mut g = g;
    if g.identity < n {
        g.element_names[g.identity] = "1".into();
    }
    Ok(g)
}

/// On-disk group description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, usize>>,
}

impl GroupFile {
    pub fn from_group(g: &Group) -> GroupFile {
        GroupFile {
            name: g.name.clone(),
            order: g.n,
            elements: g.element_names.clone(),
            table: g.table_rows(),
            generators: (!g.generators.is_empty()).then(|| g.generators.iter().cloned().collect()),
        }
    }

    pub fn into_group(self) -> Result<Group> {
        if self.table.len() != self.order || self.elements.len() != self.order {
            return Err(Error::InvalidParameter(format!(
                "order {} does not match {} table rows and {} element names",
                self.order,
                self.table.len(),
                self.elements.len()
            )));
        }
        let mut g = validate_table(&self.table)?;
        let mut names = self.elements.clone();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "element names must be distinct".into(),
            ));
        }
        g.element_names = self.elements;
        if let Some(gens) = self.generators {
            for (name, &x) in &gens {
                if x >= g.n {
                    return Err(Error::InvalidParameter(format!(
                        "generator {name} = {x} out of range"
                    )));
                }
            }
            let list: Vec<(String, usize)> = gens.into_iter().collect();
            let standard = list.iter().map(|&(_, x)| x).collect();
            g.set_generators(list, standard);
        }
        Ok(g.with_name(self.name))
    }
}

pub fn load_group_file(path: &Path) -> Result<Group> {
    let text = std::fs::read_to_string(path)?;
    let file: GroupFile = serde_json::from_str(&text)?;
    file.into_group()
}

/// A subgroup, stored as its element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Subset,
}

impl Subgroup {
    /// Checks that `elements` contains the identity and is closed under products.
    pub fn new(g: &Group, elements: Subset) -> Result<Subgroup> {
        elements.check_parent(g)?;
        if !elements.contains(g.identity()) {
            return Err(Error::Precondition(
                "subgroup must contain the identity".into(),
            ));
        }
        for x in &elements {
            for y in &elements {
                if !elements.contains(g.mul(x, y)) {
                    return Err(Error::Precondition(format!(
                        "not closed: {} * {}",
                        g.element_name(x),
                        g.element_name(y)
                    )));
                }
            }
        }
        Ok(Subgroup { elements })
    }

    pub fn whole(g: &Group) -> Subgroup {
        Subgroup {
            elements: Subset::full(g.order()),
        }
    }

    pub fn elements(&self) -> &Subset {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The subgroup as a group in its own right; `embedding[i]` is the parent
    /// index of element `i`. Elements keep their parent order and names.
    pub fn as_group(&self, g: &Group) -> (Group, Vec<usize>) {
        let embedding = self.elements.to_vec();
        let mut local = vec![usize::MAX; g.order()];
        for (i, &x) in embedding.iter().enumerate() {
            local[x] = i;
        }
        let mut h = Group::from_fn(embedding.len(), |u, v| {
            local[g.mul(embedding[u], embedding[v])]
        });
        h.element_names = embedding
            .iter()
            .map(|&x| g.element_names[x].clone())
            .collect();
        let gens: Vec<(String, usize)> = g
            .generators
            .iter()
            .filter(|(_, x)| self.elements.contains(*x))
            .map(|(s, x)| (s.clone(), local[*x]))
            .collect();
        let standard = g
            .standard_generators
            .iter()
            .filter(|&&x| self.elements.contains(x))
            .map(|&x| local[x])
            .collect();
        h.set_generators(gens, standard);
        if let Some(perms) = &g.perms {
            h.perms = Some(embedding.iter().map(|&x| perms[x].clone()).collect());
        }
        (h.with_name(format!("subgroup of {}", g.name)), embedding)
    }

    /// Maps a subset of the parent lying inside this subgroup to local indices.
    pub fn restrict(&self, a: &Subset) -> Option<Subset> {
        if !a.is_subset_of(&self.elements) {
            return None;
        }
        let members = self.elements.to_vec();
        Some(Subset::from_indices(
            members.len(),
            a.iter()
                .map(|x| members.binary_search(&x).expect("member of subgroup")),
        ))
    }

    /// Maps a subset given in local indices back to the parent.
    pub fn lift(&self, local: &Subset) -> Subset {
        let members = self.elements.to_vec();
        Subset::from_indices(
            self.elements.parent_order(),
            local.iter().map(|i| members[i]),
        )
    }
}

/// Smallest subgroup containing `s`.
pub fn generated_subgroup(g: &Group, s: &Subset) -> Subgroup {
    let gens: Vec<usize> = s.iter().collect();
    let mut elements = Subset::singleton(g.order(), g.identity());
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &y in &gens {
            let z = g.mul(x, y);
            if elements.insert(z) {
                queue.push(z);
            }
        }
    }
    Subgroup { elements }
}

/// The injective homomorphism `base → g` sending the named generators of
/// `base` to `images`, if the assignment extends to one.
pub fn embedding_from_generators(base: &Group, g: &Group, images: &[usize]) -> Result<Vec<usize>> {
    let gens = base.generators();
    if gens.len() != images.len() {
        return Err(Error::InvalidParameter(format!(
            "{} generator images given, {} needed",
            images.len(),
            gens.len()
        )));
    }
    let n = base.order();
    let mut phi = vec![usize::MAX; n];
    phi[base.identity()] = g.identity();
    let mut queue = vec![base.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&(_, s), &t) in gens.iter().zip(images) {
            let y = base.mul(x, s);
            if phi[y] == usize::MAX {
                phi[y] = g.mul(phi[x], t);
                queue.push(y);
            }
        }
    }
    if phi.contains(&usize::MAX) {
        return Err(Error::Precondition(
            "generators do not generate the base group".into(),
        ));
    }
    let image = Subset::from_indices(g.order(), phi.iter().copied());
    let hom = (0..n).all(|x| (0..n).all(|y| phi[base.mul(x, y)] == g.mul(phi[x], phi[y])));
    if image.len() != n || !hom {
        return Err(Error::Precondition(
            "generator images do not define an embedding".into(),
        ));
    }
    Ok(phi)
}

/// A set of coset representatives; `Side::Right` means the cosets `Hx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    subgroup: Subgroup,
    reps: Subset,
    side: Side,
}

impl Transversal {
    /// Checks that the cosets of `subgroup` at `reps` partition the group.
    pub fn new(g: &Group, subgroup: Subgroup, reps: Subset, side: Side) -> Result<Transversal> {
        reps.check_parent(g)?;
        let mut covered = Subset::empty(g.order());
        for x in &reps {
            for h in subgroup.elements() {
                let y = match side {
                    Side::Right => g.mul(h, x),
                    Side::Left => g.mul(x, h),
                };
                if !covered.insert(y) {
                    return Err(Error::Precondition(format!(
                        "cosets at {} overlap",
                        g.element_name(x)
                    )));
                }
            }
        }
        if !covered.is_full() {
            return Err(Error::Precondition("cosets do not cover the group".into()));
        }
        Ok(Transversal {
            subgroup,
            reps,
            side,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn reps(&self) -> &Subset {
        &self.reps
    }

    pub fn side(&self) -> Side {
        self.side
    }
}

fn transversal(g: &Group, h: &Subgroup, side: Side) -> Transversal {
    let mut covered = Subset::empty(g.order());
    let mut reps = Subset::empty(g.order());
    for x in 0..g.order() {
        if covered.contains(x) {
            continue;
        }
        reps.insert(x);
        for y in h.elements() {
            covered.insert(match side {
                Side::Right => g.mul(y, x),
                Side::Left => g.mul(x, y),
            });
        }
    }
    Transversal {
        subgroup: h.clone(),
        reps,
        side,
    }
}

/// Representatives of the cosets `Hx`, keeping each element whose coset is not yet covered.
pub fn right_transversal(g: &Group, h: &Subgroup) -> Transversal {
    transversal(g, h, Side::Right)
}

/// Representatives of the cosets `xH`.
pub fn left_transversal(g: &Group, h: &Subgroup) -> Transversal {
    transversal(g, h, Side::Left)
}

/// Greedy generating sequence: repeatedly add an element of largest order
/// (least index on ties) outside the current subgroup.
pub fn generating_sequence(g: &Group) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = Subset::singleton(g.order(), g.identity());
    while !current.is_full() {
        let x = (0..g.order())
            .filter(|&x| !current.contains(x))
            .max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)))
            .expect("an element outside a proper subgroup");
        gens.push(x);
        current = generated_subgroup(g, &Subset::from_indices(g.order(), gens.iter().copied()))
            .elements
            .clone();
    }
    gens
}

/// All automorphisms as image arrays, sorted lexicographically (identity first).
pub fn automorphisms(g: &Group, cap: usize) -> Result<Vec<Vec<usize>>> {
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "group order for automorphisms",
            cap,
        });
    }
    let n = g.order();
    let gens = generating_sequence(g);
    // Spanning tree: every element is parent * gens[k].
    let mut parent = vec![(usize::MAX, 0); n];
    let mut order = vec![g.identity()];
    let mut seen = Subset::singleton(n, g.identity());
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if seen.insert(y) {
                parent[y] = (x, k);
                order.push(y);
            }
        }
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            (0..n)
                .filter(|&y| g.element_order(y) == g.element_order(s))
                .collect()
        })
        .collect();

    let mut result = Vec::new();
    let mut images = vec![0usize; gens.len()];
    fn recurse(
        g: &Group,
        k: usize,
        images: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        gens: &[usize],
        parent: &[(usize, usize)],
        order: &[usize],
        result: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if k == gens.len() {
            let n = g.order();
            let mut phi = vec![usize::MAX; n];
            phi[g.identity()] = g.identity();
            let mut used = Subset::singleton(n, g.identity());
            for &y in &order[1..] {
                let (p, s) = parent[y];
                let v = g.mul(phi[p], images[s]);
                if !used.insert(v) {
                    return Ok(());
                }
                phi[y] = v;
            }
            let hom = (0..n).all(|x| {
                gens.iter()
                    .enumerate()
                    .all(|(s, &gs)| phi[g.mul(x, gs)] == g.mul(phi[x], images[s]))
            });
            if hom {
                if result.len() >= MAX_AUTOMORPHISMS {
                    return Err(Error::CapExceeded {
                        what: "number of automorphisms",
                        cap: MAX_AUTOMORPHISMS,
                    });
                }
                result.push(phi);
            }
            return Ok(());
        }
        for &c in &candidates[k] {
            images[k] = c;
            recurse(g, k + 1, images, candidates, gens, parent, order, result)?;
        }
        Ok(())
    }
    recurse(
        g,
        0,
        &mut images,
        &candidates,
        &gens,
        &parent,
        &order,
        &mut result,
    )?;
    result.sort();
    Ok(result)
}
