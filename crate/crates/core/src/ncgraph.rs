//! Graphs, non-commuting representations and the constructions of `V_n`
//! inside truncated tree groups.
//!
//! `V_n` is `n` disjoint edges; vertex `2i` is `a_i` and `2i + 1` is `b_i`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::TreeGroup;
use crate::engine::rigid_stabilizer;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lifting::{tree_lifting, TreeLift};
use crate::perm::Perm;
use crate::tree::{Portrait, Vertex};

/// Default maximal word length of the pair search.
pub const DEFAULT_SEARCH_BOUND: usize = 8;
/// Distinct elements the pair search may visit per vertex.
pub const SEARCH_ELEMENT_CAP: usize = 20_000;

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (v, w) in edges {
            if v >= n || w >= n {
                return Err(Error::Incompatible(format!("edge {v}-{w} out of range")));
            }
            if v == w {
                return Err(Error::Incompatible(format!("loop at {v}")));
            }
            if !set.insert((v.min(w), v.max(w))) {
                return Err(Error::Incompatible(format!("repeated edge {v}-{w}")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    /// `n` disjoint edges `a_i - b_i`.
    pub fn vn(n: usize) -> Self {
        Graph {
            n: 2 * n,
            edges: (0..n).map(|i| (2 * i, 2 * i + 1)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.edges.contains(&(v.min(w), v.max(w)))
    }

    /// `Some(n)` if this is exactly `V_n` with the standard numbering.
    pub fn as_vn(&self) -> Option<usize> {
        (self.n % 2 == 0 && *self == Graph::vn(self.n / 2)).then_some(self.n / 2)
    }
}

/// Something that can label a graph vertex: an element of a group with a
/// text serialization.
pub trait Label: Clone + Sized {
    /// Value of the `target` header line.
    const TARGET: &'static str;
    /// Whether both labels live in the same group.
    fn compatible(&self, other: &Self) -> bool;
    fn commutes(&self, other: &Self) -> bool;
    /// Extra header lines shared by every label.
    fn header(&self) -> Vec<(String, String)> {
        vec![]
    }
    fn write(&self) -> String;
    fn read(header: &BTreeMap<String, String>, payload: &str) -> Result<Self>;
}

impl Label for Perm {
    const TARGET: &'static str = "perm";

    fn compatible(&self, other: &Self) -> bool {
        self.degree() == other.degree()
    }

    fn commutes(&self, other: &Self) -> bool {
        self.commutes_with(other)
    }

    fn write(&self) -> String {
        format!("{}\n", self.to_one_line())
    }

    fn read(_: &BTreeMap<String, String>, payload: &str) -> Result<Self> {
        Perm::parse_one_line(payload.trim())
    }
}

impl Label for Portrait {
    const TARGET: &'static str = "portrait";

    fn compatible(&self, other: &Self) -> bool {
        self.depth() == other.depth() && self.shape() == other.shape()
    }

    fn commutes(&self, other: &Self) -> bool {
        self.compose(other).expect("compatible") == other.compose(self).expect("compatible")
    }

    fn write(&self) -> String {
        self.to_text()
    }

    fn read(_: &BTreeMap<String, String>, payload: &str) -> Result<Self> {
        Portrait::parse_text(payload)
    }
}

/// A labelling of a graph by group elements.
#[derive(Clone, Debug)]
pub struct NCRep<L> {
    pub graph: Graph,
    pub labels: Vec<L>,
}

/// A pair whose commutation disagrees with the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub v: usize,
    pub w: usize,
    /// Whether `v - w` is an edge (so the labels should not commute).
    pub edge: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub holds: bool,
    pub first_violation: Option<Violation>,
}

impl<L: Label> NCRep<L> {
    pub fn new(graph: Graph, labels: Vec<L>) -> Result<Self> {
        if labels.len() != graph.vertex_count() {
            return Err(Error::Incompatible(format!(
                "{} labels for {} vertices",
                labels.len(),
                graph.vertex_count()
            )));
        }
        if let Some(first) = labels.first() {
            if labels.iter().any(|l| !first.compatible(l)) {
                return Err(Error::Incompatible("labels live in different groups".into()));
            }
        }
        Ok(NCRep { graph, labels })
    }

    /// Checks every pair and reports the first (in lexicographic order) whose
    /// commutation disagrees with the graph.
    pub fn verify(&self) -> Verification {
        for v in 0..self.labels.len() {
            for w in v + 1..self.labels.len() {
                let edge = self.graph.has_edge(v, w);
                if self.labels[v].commutes(&self.labels[w]) == edge {
                    return Verification {
                        holds: false,
                        first_violation: Some(Violation { v, w, edge }),
                    };
                }
            }
        }
        Verification {
            holds: true,
            first_violation: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("target {}\nvertices {}\nedges", L::TARGET, self.graph.vertex_count());
        for (v, w) in self.graph.edges() {
            let _ = write!(out, " {v}-{w}");
        }
        out.push('\n');
        if let Some(first) = self.labels.first() {
            for (k, v) in first.header() {
                let _ = writeln!(out, "{k} {v}");
            }
        }
        for (i, l) in self.labels.iter().enumerate() {
            let _ = write!(out, "label {i}\n{}", l.write());
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut header = BTreeMap::new();
        let mut payloads: Vec<String> = vec![];
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("label ") {
                let i: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad label line `{line}`")))?;
                if i != payloads.len() {
                    return Err(Error::Parse(format!("label {i} out of order")));
                }
                payloads.push(String::new());
            } else if let Some(p) = payloads.last_mut() {
                p.push_str(line);
                p.push('\n');
            } else {
                let (k, v) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                if header.insert(k.to_string(), v.trim().to_string()).is_some() {
                    return Err(Error::Parse(format!("repeated header `{k}`")));
                }
            }
        }
        let get = |k: &str| {
            header
                .get(k)
                .ok_or_else(|| Error::Parse(format!("missing header `{k}`")))
        };
        if get("target")? != L::TARGET {
            return Err(Error::Parse(format!("expected target {}", L::TARGET)));
        }
        let n: usize = get("vertices")?
            .parse()
            .map_err(|_| Error::Parse("bad vertex count".into()))?;
        let edges = get("edges")?
            .split_whitespace()
            .map(|e| {
                let (v, w) = e
                    .split_once('-')
                    .ok_or_else(|| Error::Parse(format!("bad edge `{e}`")))?;
                let p = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad edge `{e}`")));
                Ok((p(v)?, p(w)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let graph = Graph::new(n, edges).map_err(|e| Error::Parse(e.to_string()))?;
        let labels = payloads
            .iter()
            .map(|p| L::read(&header, p))
            .collect::<Result<Vec<_>>>()?;
        NCRep::new(graph, labels)
    }
}

/// Breadth-first search over products of `seeds` up to length `bound` for
/// two non-commuting elements satisfying `keep`.
fn find_pair(
    seeds: &[Perm],
    keep: impl Fn(&Perm) -> bool,
    bound: usize,
) -> Option<(Perm, Perm)> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut kept: Vec<Perm> = vec![];
    let mut frontier: Vec<Perm> = vec![];
    let mut consider = |x: Perm, frontier: &mut Vec<Perm>, seen: &mut HashSet<Perm>| {
        if x.is_identity() || !seen.insert(x.clone()) {
            return None;
        }
        if keep(&x) {
            if let Some(y) = kept.iter().find(|y| !y.commutes_with(&x)) {
                return Some((y.clone(), x));
            }
            kept.push(x.clone());
        }
        frontier.push(x);
        None
    };
    for s in seeds {
        if let Some(pair) = consider(s.clone(), &mut frontier, &mut seen) {
            return Some(pair);
        }
    }
    for _ in 1..bound {
        let layer = std::mem::take(&mut frontier);
        for x in &layer {
            for s in seeds {
                if seen.len() >= SEARCH_ELEMENT_CAP {
                    return None;
                }
                if let Some(pair) = consider(x.then(s), &mut frontier, &mut seen) {
                    return Some(pair);
                }
            }
        }
        if frontier.is_empty() {
            break;
        }
    }
    None
}

fn generator_commutators(gens: &[Perm]) -> Vec<Perm> {
    let mut out = vec![];
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let c = x.commutator(y);
            if !c.is_identity() && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// How a `V_n` labelling was found, plus the labelling itself.
#[derive(Clone, Debug)]
pub struct VnConstruction {
    pub group: String,
    pub depth: usize,
    pub search_bound: usize,
    /// Level (of the whole tree, or of the subtree below `w_N` when lifting).
    pub level: usize,
    pub vertices: Vec<Vertex>,
    /// Lifting level, if the lifting route was used.
    pub lifting_level: Option<usize>,
    /// Block-0 components `(a_i, b_i)` when lifting, on the subtree points.
    pub components: Vec<(Perm, Perm)>,
    pub rep: NCRep<Portrait>,
}

/// Picks the shallowest level with at least `n` vertices admitting a pair,
/// taking vertices in lexicographic order.
fn select<F>(
    levels: std::ops::Range<usize>,
    vertices: impl Fn(usize) -> Vec<Vertex>,
    n: usize,
    mut pair_at: F,
) -> Result<Option<(usize, Vec<(Vertex, Perm, Perm)>)>>
where
    F: FnMut(&Vertex) -> Result<Option<(Perm, Perm)>>,
{
    for level in levels {
        let vs = vertices(level);
        if vs.len() < n {
            continue;
        }
        let mut found = vec![];
        for v in vs {
            if let Some((a, b)) = pair_at(&v)? {
                found.push((v, a, b));
                if found.len() == n {
                    return Ok(Some((level, found)));
                }
            }
        }
    }
    Ok(None)
}

/// Takes non-commuting pairs from the rigid stabilizers of `n` distinct
/// vertices on one level.
pub fn construct_vn_weakly_branch(g: &TreeGroup, n: usize, bound: usize) -> Result<VnConstruction> {
    if n == 0 {
        return Err(Error::Hypothesis("n must be positive".into()));
    }
    let shape = g.shape().clone();
    let picked = select(
        1..g.depth(),
        |l| shape.vertices(l).collect(),
        n,
        |v| {
            let r = rigid_stabilizer(g, v)?;
            if r.is_trivial() {
                return Ok(None);
            }
            let gens = PermGroup::new_reduced(g.vertex_count(), r.group.generators().to_vec())?;
            Ok(find_pair(gens.generators(), |_| true, bound).or_else(|| {
                find_pair(gens.derived_subgroup().generators(), |_| true, bound)
            }))
        },
    )?;
    let (level, found) = picked.ok_or_else(|| Error::NotFound {
        what: format!("{n} vertices with non-commuting rigid pairs in {}", g.name()),
        bound,
    })?;
    let mut labels = vec![];
    for (_, a, b) in &found {
        labels.push(g.to_portrait(a)?);
        labels.push(g.to_portrait(b)?);
    }
    Ok(VnConstruction {
        group: g.name().to_string(),
        depth: g.depth(),
        search_bound: bound,
        level,
        vertices: found.into_iter().map(|(v, _, _)| v).collect(),
        lifting_level: None,
        components: vec![],
        rep: checked(NCRep::new(Graph::vn(n), labels)?)?,
    })
}

fn checked(rep: NCRep<Portrait>) -> Result<NCRep<Portrait>> {
    let v = rep.verify();
    match v.first_violation {
        None => Ok(rep),
        Some(x) => Err(Error::Hypothesis(format!(
            "constructed labelling fails at {}-{}",
            x.v, x.w
        ))),
    }
}

/// Finds the pairs inside `N ≤ L` on the subtree below `w_N` and lifts them.
pub fn construct_vn_via_lifting(
    g: &TreeGroup,
    n: usize,
    level: usize,
    bound: usize,
) -> Result<VnConstruction> {
    if n == 0 {
        return Err(Error::Hypothesis("n must be positive".into()));
    }
    let lift = tree_lifting(g, level)?;
    let (sublevel, found) = lifted_pairs(&lift, n, bound)?;
    let mut labels = vec![];
    let mut components = vec![];
    for (_, a, b) in &found {
        labels.push(lift.lift(a)?);
        labels.push(lift.lift(b)?);
        components.push((a.clone(), b.clone()));
    }
    Ok(VnConstruction {
        group: g.name().to_string(),
        depth: g.depth(),
        search_bound: bound,
        level: sublevel,
        vertices: found.into_iter().map(|(v, _, _)| v).collect(),
        lifting_level: Some(level),
        components,
        rep: checked(NCRep::new(Graph::vn(n), labels)?)?,
    })
}

fn lifted_pairs(lift: &TreeLift, n: usize, bound: usize) -> Result<(usize, Vec<(Vertex, Perm, Perm)>)> {
    let l = lift.block_tree_group()?;
    let n_group = lift.n_subtree()?;
    let shape = l.shape().clone();
    let mut any_rist = false;
    let picked = select(
        1..l.depth(),
        |lv| shape.vertices(lv).collect(),
        n,
        |v| {
            let r = rigid_stabilizer(&l, v)?;
            if r.is_trivial() {
                return Ok(None);
            }
            any_rist = true;
            let gens = PermGroup::new_reduced(l.vertex_count(), r.group.generators().to_vec())?;
            let in_n = |x: &Perm| n_group.contains(x);
            let commutators = generator_commutators(gens.generators());
            Ok(find_pair(&commutators, in_n, bound)
                .or_else(|| find_pair(gens.derived_subgroup().generators(), in_n, bound)))
        },
    )?;
    match picked {
        Some(p) => Ok(p),
        None if !any_rist => Err(Error::Hypothesis(format!(
            "block projection {} has trivial rigid stabilizers",
            l.name()
        ))),
        None => Err(Error::NotFound {
            what: format!("{n} subtree vertices with non-commuting pairs in rist' ∩ N"),
            bound,
        }),
    }
}
