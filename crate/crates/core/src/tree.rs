//! Bounded spherically homogeneous rooted trees, vertices as digit words and
//! finite-depth automorphisms ("portraits").
//!
//! Conventions: digits are 0-based, level-`n` vertices are ordered
//! lexicographically, and automorphisms act on the right, so
//! `(vw)^g = v^g w^(g|_v)` and `(gh)|_v = g|_v h|_(v^g)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest branching degree accepted (one character per digit in text formats).
pub const MAX_DEGREE: usize = 36;

/// Branching sequence `m_0, m_1, ...` of a truncated tree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeShape {
    degrees: Vec<usize>,
}

impl TreeShape {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if let Some(&m) = degrees.iter().find(|&&m| !(2..=MAX_DEGREE).contains(&m)) {
            return Err(Error::InvalidShape(format!(
                "degree {m} outside the supported range 2..={MAX_DEGREE}"
            )));
        }
        Ok(TreeShape { degrees })
    }

    /// `depth` levels of constant degree `m`.
    pub fn constant(m: usize, depth: usize) -> Result<Self> {
        Self::new(vec![m; depth])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Maximum supported depth `D`.
    pub fn depth(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, level: usize) -> usize {
        self.degrees[level]
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `N_n`, the number of vertices at level `n`.
    pub fn level_size(&self, n: usize) -> usize {
        self.degrees[..n].iter().product()
    }

    /// Shape of the subtree hanging from a level-`level` vertex.
    pub fn subshape(&self, level: usize) -> TreeShape {
        TreeShape {
            degrees: self.degrees[level..].to_vec(),
        }
    }

    pub fn truncate(&self, depth: usize) -> TreeShape {
        TreeShape {
            degrees: self.degrees[..depth.min(self.depth())].to_vec(),
        }
    }

    /// Whether every degree equals a common prime.
    pub fn common_prime(&self) -> Option<usize> {
        let m = *self.degrees.first()?;
        let prime = (2..m).all(|d| m % d != 0);
        (prime && self.degrees.iter().all(|&x| x == m)).then_some(m)
    }

    pub(crate) fn check_depth(&self, depth: usize) -> Result<()> {
        if depth > self.depth() {
            return Err(Error::DepthExceeded {
                requested: depth,
                available: self.depth(),
            });
        }
        Ok(())
    }

    /// First point of level `n` in the breadth-first numbering of the
    /// non-root vertices (level 1 starts at 0).
    pub fn level_offset(&self, n: usize) -> usize {
        (1..n).map(|k| self.level_size(k)).sum()
    }

    /// Number of non-root vertices down to level `depth`.
    pub fn vertex_count(&self, depth: usize) -> usize {
        self.level_offset(depth + 1)
    }

    pub fn vertices(&self, level: usize) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.level_size(level)).map(move |i| Vertex::from_index(self, level, i))
    }

    /// Breadth-first points of all vertices strictly below `v`, down to `depth`.
    pub fn descendant_points(&self, v: &Vertex, depth: usize) -> Vec<usize> {
        let mut out = vec![];
        let base = v.index(self);
        for j in 1..=depth.saturating_sub(v.level()) {
            let level = v.level() + j;
            let width = self.subshape(v.level()).level_size(j);
            let offset = self.level_offset(level);
            out.extend((0..width).map(|u| offset + base * width + u));
        }
        out
    }

    /// Index range at level `level` of the vertices below `v`.
    pub fn descendant_range(&self, v: &Vertex, level: usize) -> std::ops::Range<usize> {
        let width = self.subshape(v.level()).level_size(level - v.level());
        let start = v.index(self) * width;
        start..start + width
    }

    pub fn to_header(&self) -> String {
        let parts: Vec<String> = self.degrees.iter().map(|m| m.to_string()).collect();
        parts.join(",")
    }

    pub fn parse_header(s: &str) -> Result<Self> {
        let degrees = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad degree `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        TreeShape::new(degrees)
    }
}

/// A vertex as the word of digits on the path from the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Vertex {
    digits: Vec<u8>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex { digits: vec![] }
    }

    pub fn new(shape: &TreeShape, digits: Vec<usize>) -> Result<Self> {
        shape.check_depth(digits.len())?;
        for (k, &d) in digits.iter().enumerate() {
            if d >= shape.degree(k) {
                return Err(Error::InvalidVertex(format!(
                    "digit {d} at level {k} exceeds degree {}",
                    shape.degree(k)
                )));
            }
        }
        Ok(Vertex {
            digits: digits.into_iter().map(|d| d as u8).collect(),
        })
    }

    /// The all-zeros vertex of a level (leftmost).
    pub fn leftmost(level: usize) -> Self {
        Vertex {
            digits: vec![0; level],
        }
    }

    pub fn level(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> impl Iterator<Item = usize> + '_ {
        self.digits.iter().map(|&d| d as usize)
    }

    pub fn digit(&self, i: usize) -> usize {
        self.digits[i] as usize
    }

    pub fn child(&self, d: usize) -> Vertex {
        let mut digits = self.digits.clone();
        digits.push(d as u8);
        Vertex { digits }
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Vertex { digits }
    }

    pub fn prefix(&self, len: usize) -> Vertex {
        Vertex {
            digits: self.digits[..len].to_vec(),
        }
    }

    pub fn suffix(&self, from: usize) -> Vertex {
        Vertex {
            digits: self.digits[from..].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.digits.starts_with(&self.digits)
    }

    /// Lexicographic position within its level.
    pub fn index(&self, shape: &TreeShape) -> usize {
        self.digits
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &d)| acc * shape.degree(k) + d as usize)
    }

    pub fn from_index(shape: &TreeShape, level: usize, mut index: usize) -> Vertex {
        let mut digits = vec![0u8; level];
        for k in (0..level).rev() {
            digits[k] = (index % shape.degree(k)) as u8;
            index /= shape.degree(k);
        }
        Vertex { digits }
    }

    /// Breadth-first point number (see [`TreeShape::level_offset`]); the root has none.
    pub fn point(&self, shape: &TreeShape) -> Option<usize> {
        (self.level() > 0).then(|| shape.level_offset(self.level()) + self.index(shape))
    }

    pub fn parse(shape: &TreeShape, s: &str) -> Result<Vertex> {
        let s = s.trim();
        if s == "ε" || s.is_empty() || s == "e" {
            return Ok(Vertex::root());
        }
        let digits = s
            .bytes()
            .map(|b| {
                DIGITS
                    .iter()
                    .position(|&c| c == b.to_ascii_lowercase())
                    .ok_or_else(|| Error::Parse(format!("bad vertex digit in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Vertex::new(shape, digits)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "ε");
        }
        for &d in &self.digits {
            write!(f, "{}", DIGITS[d as usize] as char)?;
        }
        Ok(())
    }
}

/// A depth-`d` tree automorphism: one permutation label per vertex above level `d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Portrait {
    shape: TreeShape,
    depth: usize,
    /// `labels[k][i]` labels the `i`-th vertex of level `k`.
    labels: Vec<Vec<Perm>>,
}

impl Portrait {
    pub fn identity(shape: &TreeShape, depth: usize) -> Result<Self> {
        shape.check_depth(depth)?;
        let labels = (0..depth)
            .map(|k| vec![Perm::identity(shape.degree(k)); shape.level_size(k)])
            .collect();
        Ok(Portrait {
            shape: shape.clone(),
            depth,
            labels,
        })
    }

    pub fn from_labels(shape: &TreeShape, depth: usize, labels: Vec<Vec<Perm>>) -> Result<Self> {
        shape.check_depth(depth)?;
        if labels.len() != depth {
            return Err(Error::Incompatible(format!(
                "{} label levels for depth {depth}",
                labels.len()
            )));
        }
        for (k, level) in labels.iter().enumerate() {
            if level.len() != shape.level_size(k) {
                return Err(Error::Incompatible(format!("level {k} has {} labels", level.len())));
            }
            if level.iter().any(|p| p.degree() != shape.degree(k)) {
                return Err(Error::Incompatible(format!("label of wrong degree at level {k}")));
            }
        }
        Ok(Portrait {
            shape: shape.clone(),
            depth,
            labels,
        })
    }

    /// The portrait whose only non-trivial label is `perm` at `v`.
    pub fn vertex_label(shape: &TreeShape, depth: usize, v: &Vertex, perm: Perm) -> Result<Self> {
        let mut p = Portrait::identity(shape, depth)?;
        if v.level() >= depth {
            return Err(Error::DepthExceeded {
                requested: v.level() + 1,
                available: depth,
            });
        }
        if perm.degree() != shape.degree(v.level()) {
            return Err(Error::Incompatible("label degree".into()));
        }
        p.labels[v.level()][v.index(shape)] = perm;
        Ok(p)
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Same labels on an equal-prefix shape.
    pub(crate) fn reshaped(self, shape: &TreeShape) -> Portrait {
        Portrait {
            shape: shape.clone(),
            depth: self.depth,
            labels: self.labels,
        }
    }

    pub fn label(&self, v: &Vertex) -> &Perm {
        &self.labels[v.level()][v.index(&self.shape)]
    }

    pub fn label_at(&self, level: usize, index: usize) -> &Perm {
        &self.labels[level][index]
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().flatten().all(Perm::is_identity)
    }

    fn check_compatible(&self, other: &Portrait) -> Result<()> {
        if self.depth != other.depth || self.shape.truncate(self.depth) != other.shape.truncate(other.depth) {
            return Err(Error::Incompatible(format!(
                "portraits on shapes [{}]/depth {} and [{}]/depth {}",
                self.shape.to_header(),
                self.depth,
                other.shape.to_header(),
                other.depth
            )));
        }
        Ok(())
    }

    /// Image of the level-`level` vertex with index `index`.
    pub fn act_index(&self, level: usize, index: usize) -> usize {
        let v = Vertex::from_index(&self.shape, level, index);
        let mut src = 0usize;
        let mut dst = 0usize;
        for (k, d) in v.digits().enumerate() {
            let m = self.shape.degree(k);
            let image = self.labels[k][src].apply(d);
            src = src * m + d;
            dst = dst * m + image;
        }
        dst
    }

    pub fn act(&self, v: &Vertex) -> Result<Vertex> {
        if v.level() > self.depth {
            return Err(Error::DepthExceeded {
                requested: v.level(),
                available: self.depth,
            });
        }
        Ok(Vertex::from_index(
            &self.shape,
            v.level(),
            self.act_index(v.level(), v.index(&self.shape)),
        ))
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait> {
        self.check_compatible(other)?;
        let labels = (0..self.depth)
            .map(|k| {
                (0..self.shape.level_size(k))
                    .map(|i| self.labels[k][i].then(&other.labels[k][self.act_index(k, i)]))
                    .collect()
            })
            .collect();
        Ok(Portrait {
            shape: self.shape.clone(),
            depth: self.depth,
            labels,
        })
    }

    pub fn invert(&self) -> Portrait {
        // (g^-1)|_(v^g) = (g|_v)^-1
        let mut labels: Vec<Vec<Perm>> = self
            .labels
            .iter()
            .map(|l| l.iter().map(|p| Perm::identity(p.degree())).collect())
            .collect();
        for (k, level) in labels.iter_mut().enumerate() {
            for i in 0..self.shape.level_size(k) {
                level[self.act_index(k, i)] = self.labels[k][i].inverse();
            }
        }
        Portrait {
            shape: self.shape.clone(),
            depth: self.depth,
            labels,
        }
    }

    pub fn commutator(&self, other: &Portrait) -> Result<Portrait> {
        self.invert()
            .compose(&other.invert())?
            .compose(self)?
            .compose(other)
    }

    /// The section `g|_v` as a portrait of depth `depth - |v|` on the subtree shape.
    pub fn section(&self, v: &Vertex) -> Result<Portrait> {
        if v.level() >= self.depth {
            return Err(Error::DepthExceeded {
                requested: v.level() + 1,
                available: self.depth,
            });
        }
        let sub = self.shape.subshape(v.level());
        let base = v.index(&self.shape);
        let labels = (0..self.depth - v.level())
            .map(|j| {
                let width = sub.level_size(j);
                self.labels[v.level() + j][base * width..(base + 1) * width].to_vec()
            })
            .collect();
        Ok(Portrait {
            shape: sub,
            depth: self.depth - v.level(),
            labels,
        })
    }

    pub fn truncate(&self, depth: usize) -> Result<Portrait> {
        if depth > self.depth {
            return Err(Error::DepthExceeded {
                requested: depth,
                available: self.depth,
            });
        }
        Ok(Portrait {
            shape: self.shape.clone(),
            depth,
            labels: self.labels[..depth].to_vec(),
        })
    }

    /// Permutation induced on level `n` (lexicographic order).
    pub fn level_perm(&self, n: usize) -> Perm {
        let images = (0..self.shape.level_size(n))
            .map(|i| self.act_index(n, i) as u32)
            .collect();
        Perm::from_raw(images)
    }

    /// Action on all non-root vertices down to the portrait depth, in
    /// breadth-first numbering.
    pub fn vertex_perm(&self) -> Perm {
        let mut images = Vec::with_capacity(self.shape.vertex_count(self.depth));
        let mut level_images: Vec<u32> = vec![0];
        for k in 0..self.depth {
            let m = self.shape.degree(k);
            let offset = self.shape.level_offset(k + 1) as u32;
            let mut next = Vec::with_capacity(level_images.len() * m);
            for (i, &img) in level_images.iter().enumerate() {
                let label = &self.labels[k][i];
                for c in 0..m {
                    next.push(img * m as u32 + label.apply(c) as u32);
                }
            }
            images.extend(next.iter().map(|&x| x + offset));
            level_images = next;
        }
        Perm::from_raw(images)
    }

    /// Inverse of [`Portrait::vertex_perm`]; rejects permutations that do not
    /// preserve the tree structure.
    pub fn from_vertex_perm(shape: &TreeShape, depth: usize, perm: &Perm) -> Result<Portrait> {
        shape.check_depth(depth)?;
        if perm.degree() != shape.vertex_count(depth) {
            return Err(Error::Incompatible(format!(
                "vertex permutation of degree {} for {} vertices",
                perm.degree(),
                shape.vertex_count(depth)
            )));
        }
        let mut labels = Vec::with_capacity(depth);
        for k in 0..depth {
            let m = shape.degree(k);
            let offset = shape.level_offset(k + 1);
            let parent_offset = shape.level_offset(k);
            let mut level = Vec::with_capacity(shape.level_size(k));
            for p in 0..shape.level_size(k) {
                let parent_image = if k == 0 {
                    0
                } else {
                    perm.apply(parent_offset + p) - parent_offset
                };
                let mut images = Vec::with_capacity(m);
                for c in 0..m {
                    let img = perm.apply(offset + p * m + c);
                    if img < offset || img - offset >= shape.level_size(k + 1) || (img - offset) / m != parent_image {
                        return Err(Error::InvalidPermutation(
                            "vertex permutation does not preserve the tree".into(),
                        ));
                    }
                    images.push((img - offset) % m);
                }
                level.push(Perm::from_images(images)?);
            }
            labels.push(level);
        }
        Ok(Portrait {
            shape: shape.clone(),
            depth,
            labels,
        })
    }

    /// `psi_k`: the sections at every level-`k` vertex (lexicographic) and the
    /// permutation induced on level `k`.
    pub fn psi_decompose(&self, k: usize) -> Result<(Vec<Portrait>, Perm)> {
        if k > self.depth {
            return Err(Error::DepthExceeded {
                requested: k,
                available: self.depth,
            });
        }
        let sections = if k == self.depth {
            let sub = self.shape.subshape(k);
            vec![Portrait::identity(&sub, 0)?; self.shape.level_size(k)]
        } else {
            self.shape
                .vertices(k)
                .map(|v| self.section(&v))
                .collect::<Result<Vec<_>>>()?
        };
        Ok((sections, self.level_perm(k)))
    }

    /// Inverse of [`Portrait::psi_decompose`].
    pub fn reassemble(
        shape: &TreeShape,
        depth: usize,
        k: usize,
        sections: &[Portrait],
        top: &Perm,
    ) -> Result<Portrait> {
        shape.check_depth(depth)?;
        if k > depth || sections.len() != shape.level_size(k) || top.degree() != shape.level_size(k) {
            return Err(Error::Incompatible("psi coordinates do not match the shape".into()));
        }
        let sub = shape.subshape(k);
        for s in sections {
            if s.depth != depth - k || s.shape.truncate(s.depth) != sub.truncate(depth - k) {
                return Err(Error::Incompatible("section shape mismatch".into()));
            }
        }
        let mut labels = Vec::with_capacity(depth);
        for j in 0..k {
            let m = shape.degree(j);
            let below: usize = shape.degrees()[j + 1..k].iter().product();
            let mut level = Vec::with_capacity(shape.level_size(j));
            for p in 0..shape.level_size(j) {
                let images = (0..m)
                    .map(|c| (top.apply((p * m + c) * below) / below) % m)
                    .collect();
                level.push(Perm::from_images(images)?);
            }
            labels.push(level);
        }
        for j in 0..depth - k {
            labels.push(
                sections
                    .iter()
                    .flat_map(|s| s.labels[j].iter().cloned())
                    .collect(),
            );
        }
        let g = Portrait {
            shape: shape.clone(),
            depth,
            labels,
        };
        if &g.level_perm(k) != top {
            return Err(Error::InvalidPermutation(
                "top permutation is not induced by a tree automorphism".into(),
            ));
        }
        Ok(g)
    }

    /// Text form: `shape: m_0,...` followed by `v -> images` per internal vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("shape: {}\n", self.shape.truncate(self.depth).to_header());
        for k in 0..self.depth {
            for (i, v) in self.shape.vertices(k).enumerate() {
                out.push_str(&format!("{v} -> {}\n", self.labels[k][i].to_one_line()));
            }
        }
        out
    }

    /// Parses [`Portrait::to_text`] output. Omitted vertices carry the identity.
    pub fn parse_text(text: &str) -> Result<Portrait> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("shape:"))
            .ok_or_else(|| Error::Parse("portrait must start with `shape:`".into()))?;
        let shape = TreeShape::parse_header(header)?;
        let depth = shape.depth();
        let mut labels: Vec<Vec<Option<Perm>>> =
            (0..depth).map(|k| vec![None; shape.level_size(k)]).collect();
        for line in lines {
            let (v, p) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `v -> perm`, got `{line}`")))?;
            let v = Vertex::parse(&shape, v)?;
            if v.level() >= depth {
                return Err(Error::Parse(format!("vertex {v} is not internal")));
            }
            let perm = Perm::parse_one_line(p)?;
            if perm.degree() != shape.degree(v.level()) {
                return Err(Error::Parse(format!("label at {v} has the wrong degree")));
            }
            let slot = &mut labels[v.level()][v.index(&shape)];
            if slot.is_some() {
                return Err(Error::Parse(format!("vertex {v} labelled twice")));
            }
            *slot = Some(perm);
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(k, l)| {
                l.into_iter()
                    .map(|p| p.unwrap_or_else(|| Perm::identity(shape.degree(k))))
                    .collect()
            })
            .collect();
        Portrait::from_labels(&shape, depth, labels)
    }
}
