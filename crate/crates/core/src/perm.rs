//! Permutations of `{1, …, n}` in cycle notation.
//!
//! Products are read left to right: `(x * y)(i) = y(x(i))`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// Images of the points `0..degree`; must be a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidParameter(format!(
                    "images {images:?} do not form a permutation"
                )));
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0.get(point).map_or(point, |&x| x as usize)
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn with_degree(&self, degree: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(v.len() as u32..degree.max(v.len()) as u32);
        Perm(v)
    }

    pub fn then(&self, other: &Perm) -> Perm {
        let d = self.degree().max(other.degree());
        Perm((0..d).map(|i| other.image(self.image(i)) as u32).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u32; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Parses products of cycles such as `(1,2,3)(4,5)` or `()`; points are 1-based.
    /// Cycles are composed left to right.
    pub fn parse(text: &str) -> Result<Perm> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(Error::Parse {
                pos,
                msg: "empty permutation".into(),
            });
        }
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(Error::Parse {
                    pos,
                    msg: "expected `(`".into(),
                });
            }
            pos += 1;
            let mut cycle = Vec::new();
            loop {
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b')' && cycle.is_empty() {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let point: usize = text[start..pos].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "expected a point".into(),
                })?;
                if point == 0 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "points are 1-based".into(),
                    });
                }
                if cycle.contains(&(point - 1)) {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("point {point} repeated"),
                    });
                }
                cycle.push(point - 1);
                skip_ws(&mut pos);
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b')') => {
                        pos += 1;
                        break;
                    }
                    _ => {
                        return Err(Error::Parse {
                            pos,
                            msg: "expected `,` or `)`".into(),
                        })
                    }
                }
            }
            cycles.push(cycle);
            skip_ws(&mut pos);
        }
        let degree = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
        let mut result = Perm::identity(degree);
        for cycle in cycles {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (k, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
            result = result.then(&Perm(images));
        }
        Ok(result)
    }

    /// Disjoint cycle notation, each cycle starting at its least point, `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push((p + 1).to_string());
                p = self.image(p);
            }
            out.push('(');
            out.push_str(&cycle.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let p = Perm::parse("(1,2,3)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
        assert_eq!(p.to_cycle_string(), "(1,2,3)");
        assert_eq!(
            Perm::parse("( 3 , 4)(1,2)").unwrap().to_cycle_string(),
            "(1,2)(3,4)"
        );
        assert!(Perm::parse("()").unwrap().is_identity());
        assert_eq!(Perm::parse("(2,3,1)").unwrap(), p);
    }

    #[test]
    fn composition_is_left_to_right() {
        let x = Perm::parse("(1,2)").unwrap();
        let y = Perm::parse("(1,3)").unwrap();
        // 1 -> 2 -> 2, 2 -> 1 -> 3, 3 -> 3 -> 1
        assert_eq!(x.then(&y).to_cycle_string(), "(1,2,3)");
        assert_eq!(
            Perm::parse("(1,2)(1,3)").unwrap().to_cycle_string(),
            "(1,2,3)"
        );
        assert!(x.then(&x.inverse()).is_identity());
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse("").is_err());
        assert!(Perm::parse("(1,1)").is_err());
        assert!(Perm::parse("(0,1)").is_err());
        assert!(Perm::parse("1,2").is_err());
        assert!(Perm::parse("(1,2").is_err());
    }
}
