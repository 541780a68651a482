//! Text notation: group specification strings, element words and subsets.
//!
//! Group specs (case-insensitive): `C<n>`, `D<m>`, `Q8`, `S<k>`, `A<k>`,
//! `Heis<p>`, `sd(<m>,<k>,<t>)`, `file:<path>`, `perm:[<cycles>;...]`,
//! products with `x` (left-associative) and parentheses for grouping.
//!
//! Element words are `*`-separated generator powers such as `a^2*b` or
//! `a^-1*b^-1`, with `1` for the identity. An element's display name (for
//! instance `-1` in `Q8` or `(1,2,3)` in a permutation group) is accepted as
//! well, so every name printed by [`format_subset`] parses back.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{build_group, Group, GroupSpec};
use crate::perm::Perm;
use crate::subset::Subset;

struct SpecParser<'a> {
    text: &'a str,
    lower: String,
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.lower[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected a number");
        }
        let value = self.rest()[..len]
            .parse()
            .or_else(|_| self.err("number too large"))?;
        self.pos += len;
        Ok(value)
    }

    fn product(&mut self) -> Result<GroupSpec> {
        let mut spec = self.factor()?;
        while self.eat("x") {
            let rhs = self.factor()?;
            spec = GroupSpec::product(spec, rhs);
        }
        Ok(spec)
    }

    fn factor(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        if self.eat("(") {
            let spec = self.product()?;
            self.expect(")")?;
            return Ok(spec);
        }
        if self.eat("file:") {
            let path = self.text[self.pos..].trim();
            if path.is_empty() {
                return self.err("expected a path");
            }
            self.pos = self.text.len();
            return Ok(GroupSpec::FromTable(PathBuf::from(path)));
        }
        if self.eat("perm:") {
            self.expect("[")?;
            let close = match self.rest().find(']') {
                Some(i) => self.pos + i,
                None => return self.err("expected `]`"),
            };
            let mut perms = Vec::new();
            let mut start = self.pos;
            for part in self.text[self.pos..close].split(';') {
                perms.push(Perm::parse(part).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse {
                        pos: start + pos,
                        msg,
                    },
                    other => other,
                })?);
                start += part.len() + 1;
            }
            self.pos = close + 1;
            return Ok(GroupSpec::FromPermutations(perms));
        }
        if self.eat("sd") {
            self.expect("(")?;
            let m = self.number()?;
            self.expect(",")?;
            let k = self.number()?;
            self.expect(",")?;
            let t = self.number()?;
            self.expect(")")?;
            return Ok(GroupSpec::SemidirectCyclic(m, k, t));
        }
        if self.eat("heis") {
            return Ok(GroupSpec::Heisenberg(self.number()?));
        }
        if self.eat("q8") {
            return Ok(GroupSpec::Quaternion8);
        }
        type Family = fn(usize) -> GroupSpec;
        let families: [(&str, Family); 4] = [
            ("c", GroupSpec::Cyclic),
            ("d", GroupSpec::Dihedral),
            ("s", GroupSpec::Symmetric),
            ("a", GroupSpec::Alternating),
        ];
        for (prefix, family) in families {
            if self.eat(prefix) {
                return Ok(family(self.number()?));
            }
        }
        self.err("expected a group")
    }
}

/// Parses a group specification string; see the module docs for the grammar.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let mut p = SpecParser {
        text,
        lower: text.to_ascii_lowercase(),
        pos: 0,
    };
    let spec = p.product()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("unexpected trailing input");
    }
    validate_spec(&spec)?;
    Ok(spec)
}

fn validate_spec(spec: &GroupSpec) -> Result<()> {
    match spec {
        GroupSpec::Cyclic(0) => Err(Error::InvalidParameter("C0 is not a group".into())),
        GroupSpec::Dihedral(0) => Err(Error::InvalidParameter("D0 is not a finite group".into())),
        GroupSpec::Heisenberg(p) if !crate::group::is_prime(*p) => Err(Error::InvalidParameter(
            format!("Heis{p}: {p} is not prime"),
        )),
        GroupSpec::SemidirectCyclic(m, k, t) => {
            let (m, k, t) = (*m as u64, *k as u64, *t as u64);
            if m == 0 || k == 0 {
                return Err(Error::InvalidParameter("sd(m,k,t) needs m, k >= 1".into()));
            }
            let mut g = (t % m, m);
            while g.1 != 0 {
                g = (g.1, g.0 % g.1);
            }
            let tk = (0..k).fold(1 % m, |acc, _| acc * (t % m) % m);
            if (m > 1 && g.0 != 1) || tk != 1 % m {
                return Err(Error::InvalidParameter(format!(
                    "sd({m},{k},{t}): need gcd(t, m) = 1 and t^k = 1 mod m"
                )));
            }
            Ok(())
        }
        GroupSpec::DirectProduct(a, b) => {
            validate_spec(a)?;
            validate_spec(b)
        }
        _ => Ok(()),
    }
}

/// Parses and builds a group in one step.
pub fn group_from_spec(text: &str) -> Result<Group> {
    build_group(&parse_group_spec(text)?)
}

/// A word over named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub factors: Vec<(String, i64)>,
}

/// Parses `1` or `g1^e1*g2^e2*…` (exponents nonzero, optional sign).
pub fn parse_word(text: &str) -> Result<Word> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    if trimmed == "1" {
        return Ok(Word { factors: vec![] });
    }
    if trimmed.is_empty() {
        return Err(Error::Parse {
            pos: offset,
            msg: "empty word".into(),
        });
    }
    let mut factors = Vec::new();
    let mut pos = offset;
    for part in trimmed.split('*') {
        let lead = part.len() - part.trim_start().len();
        let factor = part.trim();
        let at = pos + lead;
        let (name, exponent) = match factor.split_once('^') {
            Some((name, e)) => {
                let e_pos = at + name.len() + 1;
                let e: i64 = e.trim().parse().map_err(|_| Error::Parse {
                    pos: e_pos,
                    msg: format!("malformed exponent `{e}`"),
                })?;
                if e == 0 {
                    return Err(Error::Parse {
                        pos: e_pos,
                        msg: "exponent must be nonzero".into(),
                    });
                }
                (name.trim(), e)
            }
            None => (factor, 1),
        };
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::Parse {
                pos: at,
                msg: format!("expected a generator name, found `{name}`"),
            });
        }
        factors.push((name.to_string(), exponent));
        pos += part.len() + 1;
    }
    Ok(Word { factors })
}

/// Evaluates a word left to right.
pub fn evaluate_word(g: &Group, word: &Word) -> Result<usize> {
    word.factors
        .iter()
        .try_fold(g.identity(), |acc, (name, e)| {
            let x = g
                .generator(name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            Ok(g.mul(acc, g.pow(x, *e)))
        })
}

/// Resolves an element given as a word, a display name, or (in permutation
/// groups) cycle notation.
pub fn parse_element_word(g: &Group, text: &str) -> Result<usize> {
    let t = text.trim();
    if let Some(x) = g.find_element(t) {
        return Ok(x);
    }
    if t.starts_with('(') && g.permutation(0).is_some() {
        let p = Perm::parse(t)?;
        return g
            .find_permutation(&p)
            .ok_or_else(|| Error::UnknownElement(t.to_string()));
    }
    evaluate_word(g, &parse_word(text)?)
}

/// Splits a comma-separated list at top level, ignoring commas inside parentheses.
pub(crate) fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Parses an inline subset such as `1,a,a^2*b` or `{(), (1,2,3)}`.
pub fn parse_subset(g: &Group, text: &str) -> Result<Subset> {
    let mut t = text.trim();
    if let Some(inner) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        t = inner.trim();
    }
    let mut set = Subset::empty(g.order());
    if t.is_empty() {
        return Ok(set);
    }
    for part in split_top_level(t) {
        set.insert(parse_element_word(g, part)?);
    }
    Ok(set)
}

pub fn parse_subset_words<S: AsRef<str>>(g: &Group, words: &[S]) -> Result<Subset> {
    let mut set = Subset::empty(g.order());
    for w in words {
        set.insert(parse_element_word(g, w.as_ref())?);
    }
    Ok(set)
}

/// `{x, y, …}` with element names in index order.
pub fn format_subset(g: &Group, a: &Subset) -> String {
    format!("{{{}}}", subset_names(g, a).join(", "))
}

pub fn subset_names(g: &Group, a: &Subset) -> Vec<String> {
    a.iter().map(|x| g.element_name(x).to_string()).collect()
}

/// On-disk subset description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetFile {
    pub group: String,
    pub elements: Vec<String>,
}

impl SubsetFile {
    pub fn load(path: &Path) -> Result<SubsetFile> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Builds the group and resolves the element words.
    pub fn resolve(&self) -> Result<(Group, Subset)> {
        let g = group_from_spec(&self.group)?;
        let a = parse_subset_words(&g, &self.elements)?;
        Ok((g, a))
    }

    pub fn from_subset(spec: &str, g: &Group, a: &Subset) -> SubsetFile {
        SubsetFile {
            group: spec.to_string(),
            elements: subset_names(g, a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_specs() {
        assert_eq!(
            parse_group_spec("C4xC2").unwrap(),
            GroupSpec::product(GroupSpec::Cyclic(4), GroupSpec::Cyclic(2))
        );
        assert_eq!(
            parse_group_spec("sd(7,3,2)").unwrap(),
            GroupSpec::SemidirectCyclic(7, 3, 2)
        );
        assert_eq!(parse_group_spec("C1").unwrap(), GroupSpec::Cyclic(1));
        assert_eq!(parse_group_spec("heis3").unwrap(), GroupSpec::Heisenberg(3));
        assert_eq!(parse_group_spec("q8").unwrap(), GroupSpec::Quaternion8);
        assert_eq!(
            parse_group_spec("c2xc2xc2").unwrap(),
            GroupSpec::product(
                GroupSpec::product(GroupSpec::Cyclic(2), GroupSpec::Cyclic(2)),
                GroupSpec::Cyclic(2)
            )
        );
        assert_eq!(
            parse_group_spec("C2x(C3xS3)").unwrap().to_string(),
            "C2x(C3xS3)"
        );
        let perm = parse_group_spec("perm:[(1,2,3);(1,2)]").unwrap();
        assert_eq!(perm.to_string(), "perm:[(1,2,3);(1,2)]");
        assert_eq!(build_group(&perm).unwrap().order(), 6);
        assert_eq!(
            parse_group_spec("file:/tmp/g.json").unwrap(),
            GroupSpec::FromTable("/tmp/g.json".into())
        );
    }

    #[test]
    fn group_spec_errors() {
        assert!(matches!(
            parse_group_spec("C"),
            Err(Error::Parse { pos: 1, .. })
        ));
        assert!(matches!(
            parse_group_spec("C4x"),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(matches!(parse_group_spec("C4 y"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_group_spec("Z4"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_group_spec("sd(7,3,3)"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            parse_group_spec("Heis4"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            parse_group_spec("C0"),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn element_words() {
        let c4 = group_from_spec("C4").unwrap();
        assert_eq!(parse_element_word(&c4, "a^2").unwrap(), 2);
        assert_eq!(parse_element_word(&c4, "1").unwrap(), 0);
        assert_eq!(parse_element_word(&c4, "a^-1").unwrap(), 3);
        let d4 = group_from_spec("D4").unwrap();
        let x = parse_element_word(&d4, "a^2*b").unwrap();
        let a = d4.generator("a").unwrap();
        let b = d4.generator("b").unwrap();
        assert_eq!(x, d4.mul(d4.pow(a, 2), b));
        assert!(matches!(
            parse_element_word(&d4, "a*z"),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            parse_element_word(&d4, "a^x"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_element_word(&d4, "a^0"),
            Err(Error::Parse { .. })
        ));
        assert!(parse_element_word(&d4, "ab").is_err());
        assert!(parse_element_word(&d4, "a2b").is_err());
    }

    #[test]
    fn names_and_cycles() {
        let q8 = group_from_spec("Q8").unwrap();
        assert_eq!(parse_element_word(&q8, "-1").unwrap(), 1);
        assert_eq!(parse_element_word(&q8, "i^2").unwrap(), 1);
        let s3 = group_from_spec("S3").unwrap();
        let x = parse_element_word(&s3, "(2,3,1)").unwrap();
        assert_eq!(s3.element_name(x), "(1,2,3)");
        let set = parse_subset(&s3, "{(), (1,2,3)}").unwrap();
        assert_eq!(format_subset(&s3, &set), "{(), (1,2,3)}");
    }

    #[test]
    fn subset_formatting() {
        let c4 = group_from_spec("C4").unwrap();
        assert_eq!(
            format_subset(&c4, &Subset::from_indices(4, [0, 2])),
            "{1, a^2}"
        );
        assert_eq!(format_subset(&c4, &Subset::empty(4)), "{}");
        let v = group_from_spec("C2xC2").unwrap();
        assert_eq!(format_subset(&v, &Subset::full(4)), "{1, a, b, a*b}");
        assert_eq!(parse_subset(&c4, "1, a").unwrap().to_vec(), vec![0, 1]);
        assert!(parse_subset(&c4, "").unwrap().is_empty());
    }

    #[test]
    fn subset_file_round_trip() {
        let file = SubsetFile {
            group: "D4".into(),
            elements: vec!["1".into(), "a^2*b".into()],
        };
        let json = serde_json::to_string(&file).unwrap();
        let back: SubsetFile = serde_json::from_str(&json).unwrap();
        let (g, a) = back.resolve().unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(SubsetFile::from_subset("D4", &g, &a), file);
    }
}
