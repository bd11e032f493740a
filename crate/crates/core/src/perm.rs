//! Permutations of `[0, n)` in one-line image notation, acting on the right.
//!
//! `x^p` is `p.apply(x)`, and `p.then(q)` is the permutation "apply `p`, then
//! `q`", so `x^(pq) = (x^p)^q`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its one-line images, validating bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on [0, {n})"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(Perm::from_images(images.iter().map(|&x| x as usize).collect()).is_ok());
        Perm { images }
    }

    /// The cycle `(c_0 c_1 ... c_r)` on `degree` points.
    pub fn cycle(degree: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for (i, &c) in cycle.iter().enumerate() {
            if c >= degree {
                return Err(Error::InvalidPermutation(format!(
                    "cycle point {c} out of range for degree {degree}"
                )));
            }
            images[c] = cycle[(i + 1) % cycle.len()];
        }
        Perm::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.images[x] as usize == x
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Restriction to a set of points that the permutation maps onto itself,
    /// renumbered by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Option<Perm> {
        let mut index = std::collections::HashMap::with_capacity(points.len());
        for (i, &p) in points.iter().enumerate() {
            index.insert(p, i as u32);
        }
        let images = points
            .iter()
            .map(|&p| index.get(&self.apply(p)).copied())
            .collect::<Option<Vec<_>>>()?;
        Some(Perm { images })
    }

    /// Keeps the action on `points` (assumed invariant) and fixes everything else.
    pub fn keep_only(&self, points: &[usize]) -> Perm {
        let mut images: Vec<u32> = (0..self.degree() as u32).collect();
        for &p in points {
            images[p] = self.images[p];
        }
        Perm { images }
    }

    /// Space-separated one-line notation, e.g. `1 2 0`.
    pub fn to_one_line(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        parts.join(" ")
    }

    pub fn parse_one_line(s: &str) -> Result<Perm> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad permutation entry `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    pub fn to_cycles(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cyc = vec![];
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x.to_string());
                x = self.apply(x);
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_one_line())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_action_composition() {
        let p = Perm::cycle(3, &[0, 1]).unwrap();
        let q = Perm::cycle(3, &[1, 2]).unwrap();
        let pq = p.then(&q);
        for x in 0..3 {
            assert_eq!(pq.apply(x), q.apply(p.apply(x)));
        }
        assert_eq!(pq.to_one_line(), "2 0 1");
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn inverse_and_commutator() {
        let p = Perm::cycle(4, &[0, 1, 2, 3]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.order(), 4);
        let t = Perm::cycle(4, &[0, 1]).unwrap();
        assert!(!p.commutes_with(&t));
        assert!(!p.commutator(&t).is_identity());
        assert!(p.commutes_with(&p.pow(3)));
    }

    #[test]
    fn one_line_round_trip() {
        let p = Perm::parse_one_line("2 0 1 3").unwrap();
        assert_eq!(Perm::parse_one_line(&p.to_one_line()).unwrap(), p);
        assert_eq!(p.to_cycles(), "(0 2 1)");
    }
}
