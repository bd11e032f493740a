//! Level images, vertex stabilizers, projections and rigid stabilizers of a
//! truncated tree group.
//!
//! Everything is computed in the breadth-first vertex action of the
//! truncation (see [`TreeGroup::vertex_group`]). The section of a vertex
//! stabilizer at `v` is then just the restriction to the points below `v`,
//! because those points are listed in the breadth-first order of the subtree.

use num_bigint::BigUint;
use serde::Serialize;

use crate::catalog::TreeGroup;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::tree::{Portrait, TreeShape, Vertex};

/// The action of a truncation on one level.
#[derive(Clone, Debug)]
pub struct LevelImage {
    pub level: usize,
    pub depth: usize,
    pub group: PermGroup,
}

impl LevelImage {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }
}

pub fn level_image(g: &TreeGroup, n: usize) -> Result<LevelImage> {
    check_level(g, n)?;
    let size = g.shape().level_size(n);
    let gens = g.generators().iter().map(|p| p.level_perm(n)).collect();
    Ok(LevelImage {
        level: n,
        depth: g.depth(),
        group: PermGroup::new(size, gens)?,
    })
}

fn check_level(g: &TreeGroup, n: usize) -> Result<()> {
    if n > g.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            available: g.depth(),
        });
    }
    Ok(())
}

fn check_vertex(g: &TreeGroup, v: &Vertex) -> Result<usize> {
    if v.level() >= g.depth() {
        return Err(Error::DepthExceeded {
            requested: v.level() + 1,
            available: g.depth(),
        });
    }
    Vertex::new(g.shape(), v.digits().collect())?;
    Ok(v.level())
}

/// Vertex permutations of generators of `st_G(v)`: Schreier generators from
/// the orbit transversal of `v`, in a deterministic order.
pub fn vertex_stabilizer_perms(g: &TreeGroup, v: &Vertex) -> Result<Vec<Perm>> {
    check_vertex(g, v)?;
    let group = g.vertex_group();
    let Some(p) = v.point(g.shape()) else {
        return Ok(group.generators().to_vec());
    };
    let transversal = group.orbit_transversal(p);
    let index: std::collections::HashMap<usize, usize> =
        transversal.iter().enumerate().map(|(i, (x, _))| (*x, i)).collect();
    let mut out = vec![];
    for (x, u) in &transversal {
        for s in group.generators() {
            let back = &transversal[index[&s.apply(*x)]].1;
            let h = u.then(s).then(&back.inverse());
            if !h.is_identity() && !out.contains(&h) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// `G_v`: the sections at `v` of the stabilizer of `v`, as a group on the
/// subtree truncated at `depth - |v|`.
pub fn projection(g: &TreeGroup, v: &Vertex) -> Result<TreeGroup> {
    let level = check_vertex(g, v)?;
    let below = g.shape().descendant_points(v, g.depth());
    let sections: Vec<Perm> = vertex_stabilizer_perms(g, v)?
        .iter()
        .map(|h| h.restrict(&below).expect("stabilizer of v preserves the subtree"))
        .collect();
    let reduced = PermGroup::new_reduced(below.len(), sections)?;
    let shape = g.shape().subshape(level);
    TreeGroup::from_vertex_perms(
        &format!("{}|{}", g.name(), v),
        &shape,
        g.depth() - level,
        reduced.generators(),
    )
}

/// Rigid stabilizer of a vertex in the truncation.
#[derive(Clone, Debug)]
pub struct RigidStabilizer {
    pub vertex: Vertex,
    pub depth: usize,
    /// Generators as portraits of the whole truncation.
    pub generators: Vec<Portrait>,
    /// The same subgroup in the vertex action of the whole truncation.
    pub group: PermGroup,
    /// The induced action on the subtree below the vertex.
    pub subtree: TreeGroup,
}

impl RigidStabilizer {
    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn order(&self) -> BigUint {
        self.group.order()
    }
}

/// Elements fixing every vertex outside `T_v`. Fixing the vertices outside
/// the subtree is the same as fixing the leaves outside it.
pub fn rigid_stabilizer(g: &TreeGroup, v: &Vertex) -> Result<RigidStabilizer> {
    let level = check_vertex(g, v)?;
    let shape = g.shape();
    let below = shape.descendant_points(v, g.depth());
    let mut inside = vec![false; g.vertex_count()];
    for &p in &below {
        inside[p] = true;
    }
    let outside: Vec<usize> = (0..g.vertex_count()).filter(|&p| !inside[p]).collect();
    let group = g.vertex_group().pointwise_stabilizer(&outside);
    let generators = group
        .generators()
        .iter()
        .map(|p| g.to_portrait(p))
        .collect::<Result<Vec<_>>>()?;
    let restricted: Vec<Perm> = group
        .generators()
        .iter()
        .map(|p| p.restrict(&below).expect("rigid elements preserve the subtree"))
        .collect();
    let subtree = TreeGroup::from_vertex_perms(
        &format!("rist {}|{}", g.name(), v),
        &shape.subshape(level),
        g.depth() - level,
        &restricted,
    )?;
    Ok(RigidStabilizer {
        vertex: v.clone(),
        depth: g.depth(),
        generators,
        group,
        subtree,
    })
}

/// Rigid stabilizers of every vertex on level `n`, in lexicographic order.
pub fn rigid_level_stabilizer(g: &TreeGroup, n: usize) -> Result<Vec<RigidStabilizer>> {
    if n >= g.depth() {
        return Err(Error::DepthExceeded {
            requested: n + 1,
            available: g.depth(),
        });
    }
    g.shape()
        .vertices(n)
        .map(|v| rigid_stabilizer(g, &v))
        .collect()
}

pub fn is_level_transitive(g: &TreeGroup, n: usize) -> Result<bool> {
    check_level(g, n)?;
    if n == 0 {
        return Ok(true);
    }
    let p = g.shape().level_offset(n);
    Ok(g.vertex_group().orbit(p).len() == g.shape().level_size(n))
}

/// Whether some generator moves `v`.
pub fn is_moved(g: &TreeGroup, v: &Vertex) -> Result<bool> {
    if v.level() > g.depth() {
        return Err(Error::DepthExceeded {
            requested: v.level(),
            available: g.depth(),
        });
    }
    Ok(match v.point(g.shape()) {
        None => false,
        Some(p) => g.vertex_perms().iter().any(|h| !h.fixes(p)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelEvidence {
    pub level: usize,
    pub transitive: bool,
    pub rist_trivial_flags: Vec<bool>,
    pub depth: usize,
    pub margin: usize,
}

/// Finite-depth evidence for weak branchness. Level `n` is examined in the
/// truncation at depth `n + margin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvidenceReport {
    pub group: String,
    pub n_max: usize,
    pub margin: usize,
    pub levels: Vec<LevelEvidence>,
}

impl EvidenceReport {
    /// True when every level is transitive with nontrivial rigid stabilizers.
    pub fn positive(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.transitive && l.rist_trivial_flags.iter().all(|t| !t))
    }
}

pub fn weakly_branch_evidence(g: &TreeGroup, n_max: usize, margin: usize) -> Result<EvidenceReport> {
    if margin == 0 {
        return Err(Error::Inapplicable("margin must be at least one level".into()));
    }
    if n_max + margin > g.depth() {
        return Err(Error::DepthExceeded {
            requested: n_max + margin,
            available: g.depth(),
        });
    }
    let mut levels = vec![];
    for n in 1..=n_max {
        let t = g.truncate(n + margin)?;
        let flags = rigid_level_stabilizer(&t, n)?
            .iter()
            .map(RigidStabilizer::is_trivial)
            .collect();
        levels.push(LevelEvidence {
            level: n,
            transitive: is_level_transitive(&t, n)?,
            rist_trivial_flags: flags,
            depth: n + margin,
            margin,
        });
    }
    Ok(EvidenceReport {
        group: g.name().to_string(),
        n_max,
        margin,
        levels,
    })
}

/// Tests whether the derived subgroup of `rist(v)` lies in the normal closure
/// of `x`, by checking generators of the derived subgroup for membership.
pub fn check_rist_in_normal_closure(g: &TreeGroup, x: &Portrait, v: &Vertex) -> Result<bool> {
    if !g.contains(x) {
        return Err(Error::ElementOutsideGroup);
    }
    if x.is_identity() {
        return Err(Error::Hypothesis("the element must be nontrivial".into()));
    }
    if !is_moved(g, v)? {
        return Err(Error::Hypothesis(format!("vertex {v} is not moved by the group")));
    }
    let rist = rigid_stabilizer(g, v)?;
    let derived = rist.group.derived_subgroup();
    if derived.is_trivial() {
        return Ok(true);
    }
    let closure = g.vertex_group().normal_closure(&[x.vertex_perm()])?;
    Ok(derived.generators().iter().all(|c| closure.contains(c)))
}

/// Whether the normal closure of `x` moves `v`. When it does, the derived
/// subgroup of `rist(v)` is contained in that closure (checked by
/// [`check_rist_in_normal_closure`]); otherwise containment can fail.
pub fn closure_moves(g: &TreeGroup, x: &Portrait, v: &Vertex) -> Result<bool> {
    if !g.contains(x) {
        return Err(Error::ElementOutsideGroup);
    }
    let Some(p) = v.point(g.shape()) else {
        return Ok(false);
    };
    let closure = g.vertex_group().normal_closure(&[x.vertex_perm()])?;
    Ok(closure.orbit(p).len() > 1)
}

/// Centre of the truncation in its action on the deepest level, together
/// with the shallowest level on which some central element acts.
#[derive(Clone, Debug)]
pub struct CenterReport {
    pub depth: usize,
    pub center: PermGroup,
    pub shallowest_moved_level: Option<usize>,
}

pub fn center_report(g: &TreeGroup) -> Result<CenterReport> {
    let leaves = level_image(g, g.depth())?;
    let center = leaves.group.center()?;
    let shape = g.shape();
    let mut shallowest = None;
    for z in center.elements()? {
        if z.is_identity() {
            continue;
        }
        let p = Portrait::from_vertex_perm(shape, g.depth(), &leaf_to_vertex_perm(shape, g.depth(), &z))?;
        let moved = (1..=g.depth()).find(|&n| !p.level_perm(n).is_identity());
        shallowest = match (shallowest, moved) {
            (Some(a), Some(b)) => Some(usize::min(a, b)),
            (a, b) => a.or(b),
        };
    }
    Ok(CenterReport {
        depth: g.depth(),
        center,
        shallowest_moved_level: shallowest,
    })
}

/// Extends a tree-compatible permutation of the leaves to all vertices.
fn leaf_to_vertex_perm(shape: &TreeShape, depth: usize, leaf: &Perm) -> Perm {
    let total = shape.vertex_count(depth);
    let mut images = vec![0usize; total];
    for level in 1..=depth {
        let width = shape.level_size(depth) / shape.level_size(level);
        let offset = shape.level_offset(level);
        for i in 0..shape.level_size(level) {
            let image = leaf.apply(i * width) / width;
            images[offset + i] = offset + image;
        }
    }
    Perm::from_images(images).expect("leaf action is tree-compatible")
}
