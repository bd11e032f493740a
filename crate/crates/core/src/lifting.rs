//! Lifting normal subgroups of the first factor of a subdirect product.
//!
//! A [`BlockedGroup`] is a permutation group `H` preserving a sequence of
//! disjoint blocks `B_0, ..., B_k`. [`lift_decompose`] finds the largest
//! `i` and a nontrivial normal subgroup `N` of the block-0 group such that
//! every `a ∈ N` extends to a unique element `(a, 1, ..., 1, b_1, ..., b_{k-i})`
//! of `H` with `i` trivial blocks after the first. [`lift_oracle`] computes
//! the same index by enumerating `H`.

use std::collections::HashSet;

use serde::Serialize;

use crate::catalog::TreeGroup;
use crate::engine::is_level_transitive;
use crate::error::{Error, Result};
use crate::group::{PermGroup, ENUMERATION_LIMIT};
use crate::perm::Perm;
use crate::tree::{Portrait, TreeShape, Vertex};

/// Largest block group the oracle is willing to enumerate.
pub const ORACLE_BLOCK_LIMIT: usize = 10_000;

/// A group acting on an ordered family of invariant blocks.
#[derive(Clone, Debug)]
pub struct BlockedGroup {
    degree: usize,
    blocks: Vec<Vec<usize>>,
    h: PermGroup,
    block_groups: Vec<PermGroup>,
    conjugators: Option<Vec<Perm>>,
}

impl BlockedGroup {
    /// Block groups are taken to be the projections of `H`, so the product
    /// is subdirect by construction.
    pub fn new(
        degree: usize,
        blocks: Vec<Vec<usize>>,
        generators: Vec<Perm>,
        conjugators: Option<Vec<Perm>>,
    ) -> Result<Self> {
        check_blocks(degree, &blocks)?;
        let h = PermGroup::new(degree, generators)?;
        check_invariant(&h, &blocks)?;
        let block_groups = blocks
            .iter()
            .map(|b| project_group(&h, b))
            .collect::<Result<Vec<_>>>()?;
        let out = BlockedGroup {
            degree,
            blocks,
            h,
            block_groups,
            conjugators: None,
        };
        out.with_conjugators(conjugators)
    }

    /// Like [`BlockedGroup::new`] but with declared block groups, which `H`
    /// must project onto.
    pub fn with_block_groups(
        degree: usize,
        blocks: Vec<Vec<usize>>,
        generators: Vec<Perm>,
        block_groups: Vec<Vec<Perm>>,
        conjugators: Option<Vec<Perm>>,
    ) -> Result<Self> {
        if block_groups.len() != blocks.len() {
            return Err(Error::Incompatible(format!(
                "{} blocks but {} block groups",
                blocks.len(),
                block_groups.len()
            )));
        }
        let out = BlockedGroup::new(degree, blocks, generators, None)?;
        for (j, declared) in block_groups.into_iter().enumerate() {
            if declared.iter().any(|x| x.support().any(|p| !out.blocks[j].contains(&p))) {
                return Err(Error::Hypothesis(format!(
                    "block group {j} moves points outside its block"
                )));
            }
            let declared = PermGroup::new(degree, declared)?;
            let proj = &out.block_groups[j];
            if !(proj.is_subgroup_of(&declared) && declared.is_subgroup_of(proj)) {
                return Err(Error::Hypothesis(format!(
                    "H does not project onto block group {j}"
                )));
            }
        }
        out.with_conjugators(conjugators)
    }

    fn with_conjugators(mut self, conjugators: Option<Vec<Perm>>) -> Result<Self> {
        if let Some(cs) = &conjugators {
            if cs.len() + 1 != self.blocks.len() {
                return Err(Error::Incompatible(format!(
                    "expected {} conjugators, got {}",
                    self.blocks.len() - 1,
                    cs.len()
                )));
            }
            let zero: HashSet<usize> = self.blocks[0].iter().copied().collect();
            for (j, c) in cs.iter().enumerate() {
                if c.degree() != self.degree {
                    return Err(Error::Incompatible("conjugator degree".into()));
                }
                let image: HashSet<usize> = self.blocks[j + 1].iter().map(|&p| c.apply(p)).collect();
                if image != zero {
                    return Err(Error::Hypothesis(format!(
                        "conjugator {} does not map its block onto block 0",
                        j + 1
                    )));
                }
                if !self.h.is_normalized_by(std::slice::from_ref(c)) {
                    return Err(Error::Hypothesis(format!("conjugator {} does not normalize H", j + 1)));
                }
            }
        }
        self.conjugators = conjugators;
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Index of the last block.
    pub fn k(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn group(&self) -> &PermGroup {
        &self.h
    }

    /// Projection of `H` to block `j`, as a group supported on that block.
    pub fn block_group(&self, j: usize) -> &PermGroup {
        &self.block_groups[j]
    }

    pub fn conjugators(&self) -> Option<&[Perm]> {
        self.conjugators.as_deref()
    }

    /// Points of blocks `range`, in block order.
    fn points(&self, range: std::ops::Range<usize>) -> Vec<usize> {
        self.blocks[range].iter().flatten().copied().collect()
    }

    /// Whether `x` acts trivially on block `j`.
    pub fn trivial_on(&self, x: &Perm, j: usize) -> bool {
        self.blocks[j].iter().all(|&p| x.fixes(p))
    }
}

fn check_blocks(degree: usize, blocks: &[Vec<usize>]) -> Result<()> {
    if blocks.is_empty() {
        return Err(Error::Hypothesis("no blocks".into()));
    }
    let mut seen = vec![false; degree];
    for (j, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(Error::Hypothesis(format!("block {j} is empty")));
        }
        for &p in b {
            if p >= degree {
                return Err(Error::InvalidPermutation(format!("block point {p} out of range")));
            }
            if seen[p] {
                return Err(Error::Hypothesis(format!("point {p} lies in two blocks")));
            }
            seen[p] = true;
        }
    }
    Ok(())
}

fn check_invariant(h: &PermGroup, blocks: &[Vec<usize>]) -> Result<()> {
    let mut block_of = vec![usize::MAX; h.degree()];
    for (j, b) in blocks.iter().enumerate() {
        for &p in b {
            block_of[p] = j;
        }
    }
    for x in h.generators() {
        for p in 0..h.degree() {
            if block_of[x.apply(p)] != block_of[p] {
                return Err(Error::Hypothesis(if block_of[p] == usize::MAX {
                    format!("H moves point {p} outside the blocks")
                } else {
                    format!("H does not preserve block {}", block_of[p])
                }));
            }
        }
    }
    Ok(())
}

fn project_group(h: &PermGroup, points: &[usize]) -> Result<PermGroup> {
    let gens: Vec<Perm> = h.generators().iter().map(|x| x.keep_only(points)).collect();
    PermGroup::new_reduced(h.degree(), gens)
}

/// Which step of the recursion produced the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftRoute {
    /// Injective all the way down: `N` is the whole block-0 group.
    Base,
    /// Some element of the projection is supported on block 0 alone.
    Kernel,
}

/// The output of [`lift_decompose`].
#[derive(Clone, Debug)]
pub struct LiftWitness {
    pub i: usize,
    pub k: usize,
    pub route: LiftRoute,
    /// Normal subgroup of the block-0 group, as permutations supported on block 0.
    pub n: PermGroup,
    block0: Vec<usize>,
    resolver: PermGroup,
    prefix_len: usize,
}

impl LiftWitness {
    pub fn generators(&self) -> &[Perm] {
        self.n.generators()
    }

    /// The unique element of `H` that is `a` on block 0 and trivial on
    /// blocks `1..=i`.
    pub fn resolve(&self, a: &Perm) -> Result<Perm> {
        if a.degree() != self.n.degree() {
            return Err(Error::Incompatible("element degree".into()));
        }
        if !self.n.contains(a) {
            return Err(Error::ElementOutsideGroup);
        }
        self.resolver
            .sift_prefix(a, self.prefix_len)
            .ok_or_else(|| Error::Hypothesis("element of N has no lift".into()))
    }

    pub fn block0(&self) -> &[usize] {
        &self.block0
    }

    pub fn record(&self) -> Result<WitnessRecord> {
        let generators: Vec<String> = self.generators().iter().map(|g| g.to_cycles()).collect();
        let lifts = self
            .generators()
            .iter()
            .map(|g| self.resolve(g).map(|x| x.to_cycles()))
            .collect::<Result<Vec<_>>>()?;
        Ok(WitnessRecord {
            i: self.i,
            k: self.k,
            route: self.route,
            n_order: self.n.order().to_string(),
            generators,
            lifts,
        })
    }
}

/// Serializable summary of a witness: `N` by generators and their lifts.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessRecord {
    pub i: usize,
    pub k: usize,
    pub route: LiftRoute,
    pub n_order: String,
    pub generators: Vec<String>,
    pub lifts: Vec<String>,
}

fn least(elements: impl IntoIterator<Item = Perm>) -> Option<Perm> {
    elements
        .into_iter()
        .filter(|x| !x.is_identity())
        .min_by(|a, b| a.images().cmp(b.images()))
}

/// Recursive lifting. At level `k` the projection `H_k` of `H` to blocks
/// `0..=k` is examined:
///
/// * if `D_k`, the elements of `H_k` trivial on blocks `1..=k`, is
///   nontrivial, then `i = k` and `N` is the block-0 projection of `D_k`,
///   which is normal in the block-0 group. Any element `(a, 1, ..., 1)`
///   obtained by conjugating a kernel element onto block 0 lies in `D_k`, so
///   this covers the conjugation step and also catches levels where the
///   kernel is trivial but `D_k` is not.
/// * if `D_k = 1` but dropping the last block has a kernel, a kernel element
///   is conjugated onto block 0 to report why no index exists: without
///   conjugators this is [`Error::MissingConjugator`], with them the
///   conjugate necessarily falls outside `H_k`.
/// * otherwise `H_k → H_{k-1}` is injective and the recursion continues,
///   ending at `i = 0` with `N` the whole block-0 group.
pub fn lift_decompose(b: &BlockedGroup) -> Result<LiftWitness> {
    if b.h.is_trivial() {
        return Err(Error::Hypothesis("H is trivial".into()));
    }
    if b.block_groups[0].is_trivial() {
        return Err(Error::Hypothesis("block-0 group is trivial".into()));
    }
    let block0 = b.blocks[0].clone();
    let l0 = &b.block_groups[0];
    let witness = |i: usize, route: LiftRoute, n: PermGroup| -> Result<LiftWitness> {
        let prefix = b.points(0..i + 1);
        let resolver = PermGroup::with_base_prefix(b.degree, b.h.generators().to_vec(), &prefix)?;
        Ok(LiftWitness {
            i,
            k: b.k(),
            route,
            n,
            block0: block0.clone(),
            resolver,
            prefix_len: prefix.len(),
        })
    };
    for k in (1..=b.k()).rev() {
        let hk = project_group(&b.h, &b.points(0..k + 1))?;
        let d = hk.pointwise_stabilizer(&b.points(1..k + 1));
        if !d.is_trivial() {
            let n = PermGroup::new_reduced(b.degree, d.generators().to_vec())?;
            debug_assert!(n.is_normal_in(l0));
            return witness(k, LiftRoute::Kernel, n);
        }
        let kernel = hk.pointwise_stabilizer(&b.points(0..k));
        if kernel.is_trivial() {
            continue;
        }
        let Some(cs) = &b.conjugators else {
            return Err(Error::MissingConjugator { block: k });
        };
        let seed = least(kernel.generators().iter().cloned()).expect("nontrivial kernel");
        let a = seed.conjugate_by(&cs[k - 1]);
        debug_assert!(!hk.contains(&a));
        return Err(Error::Hypothesis(format!(
            "kernel at block {k} conjugates outside the projection of H"
        )));
    }
    witness(0, LiftRoute::Base, l0.clone())
}

/// Result of [`lift_oracle`].
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub i: usize,
    /// The largest admissible normal subgroup: the core of `proj_0(D_i)`.
    pub core: PermGroup,
}

/// Brute-force maximal index: the largest `i` such that tails are unique
/// (`E_i = 1`) and `proj_0(D_i)` has nontrivial core in the block-0 group.
pub fn lift_oracle(b: &BlockedGroup) -> Result<OracleResult> {
    for (j, l) in b.block_groups.iter().enumerate() {
        if l.order() > ORACLE_BLOCK_LIMIT.into() {
            return Err(Error::Budget(format!("block group {j} exceeds {ORACLE_BLOCK_LIMIT}")));
        }
    }
    if b.h.order() > ENUMERATION_LIMIT.into() {
        return Err(Error::Budget(format!("|H| exceeds {ENUMERATION_LIMIT}")));
    }
    let elements = b.h.elements()?;
    let trivial: Vec<Vec<bool>> = elements
        .iter()
        .map(|x| (0..b.blocks.len()).map(|j| b.trivial_on(x, j)).collect())
        .collect();
    let l0 = &b.block_groups[0];
    for i in (0..=b.k()).rev() {
        let d: Vec<usize> = (0..elements.len())
            .filter(|&e| trivial[e][1..=i].iter().all(|&t| t))
            .collect();
        let e_count = d.iter().filter(|&&e| trivial[e][0]).count();
        if e_count != 1 {
            continue;
        }
        let proj: Vec<Perm> = d.iter().map(|&e| elements[e].keep_only(&b.blocks[0])).collect();
        let sub = PermGroup::new(b.degree, proj)?;
        let core = l0.normal_core(&sub)?;
        if !core.is_trivial() {
            return Ok(OracleResult { i, core });
        }
    }
    Err(Error::Hypothesis("no admissible index".into()))
}

/// [`lift_decompose`] applied to the level stabilizer of a tree group,
/// with the result expressed through sections.
#[derive(Clone, Debug)]
pub struct TreeLift {
    pub level: usize,
    pub depth: usize,
    pub blocked: BlockedGroup,
    pub witness: LiftWitness,
    group: TreeGroup,
    subshape: TreeShape,
}

impl TreeLift {
    pub fn group(&self) -> &TreeGroup {
        &self.group
    }

    /// Shape of the subtree below `w_N`.
    pub fn subshape(&self) -> &TreeShape {
        &self.subshape
    }

    /// Depth of the subtree below `w_N`.
    pub fn subdepth(&self) -> usize {
        self.depth - self.level
    }

    /// Moves a permutation of the points below `w_N` into the ambient action.
    pub fn embed(&self, sub: &Perm) -> Result<Perm> {
        let block = self.witness.block0();
        if sub.degree() != block.len() {
            return Err(Error::Incompatible("subtree permutation degree".into()));
        }
        let mut images: Vec<usize> = (0..self.blocked.degree).collect();
        for (x, &p) in block.iter().enumerate() {
            images[p] = block[sub.apply(x)];
        }
        Perm::from_images(images)
    }

    /// Section at `w_N` of an ambient permutation preserving the subtree.
    pub fn section(&self, x: &Perm) -> Result<Perm> {
        x.restrict(self.witness.block0())
            .ok_or_else(|| Error::Hypothesis("element does not fix w_N".into()))
    }

    /// The block-0 group as a tree group on the subtree below `w_N`.
    pub fn block_tree_group(&self) -> Result<TreeGroup> {
        let gens: Vec<Perm> = self
            .blocked
            .block_group(0)
            .generators()
            .iter()
            .map(|x| self.section(x))
            .collect::<Result<_>>()?;
        TreeGroup::from_vertex_perms(
            &format!("{}|{}", self.group.name(), Vertex::leftmost(self.level)),
            &self.subshape,
            self.subdepth(),
            &gens,
        )
    }

    /// `N` on the subtree below `w_N`.
    pub fn n_subtree(&self) -> Result<PermGroup> {
        let gens: Vec<Perm> = self
            .witness
            .generators()
            .iter()
            .map(|x| self.section(x))
            .collect::<Result<_>>()?;
        PermGroup::new(self.witness.block0().len(), gens)
    }

    /// Lift of a subtree permutation in `N` to an element of the level stabilizer.
    pub fn lift(&self, sub: &Perm) -> Result<Portrait> {
        let x = self.witness.resolve(&self.embed(sub)?)?;
        self.group.to_portrait(&x)
    }

    pub fn record(&self) -> Result<TreeWitnessRecord> {
        let mut generators = vec![];
        let mut lifts = vec![];
        for x in self.witness.generators() {
            let sub = self.section(x)?;
            let p = TreeGroup::from_vertex_perms("n", &self.subshape, self.subdepth(), &[sub.clone()])?;
            generators.push(p.generators()[0].to_text());
            lifts.push(self.lift(&sub)?.to_text());
        }
        Ok(TreeWitnessRecord {
            group: self.group.name().to_string(),
            depth: self.depth,
            level: self.level,
            i: self.witness.i,
            k: self.witness.k,
            route: self.witness.route,
            n_order: self.witness.n.order().to_string(),
            generators,
            lifts,
        })
    }
}

/// Serializable tree witness; portraits are in the text format of [`Portrait`].
#[derive(Clone, Debug, Serialize)]
pub struct TreeWitnessRecord {
    pub group: String,
    pub depth: usize,
    pub level: usize,
    pub i: usize,
    pub k: usize,
    pub route: LiftRoute,
    pub n_order: String,
    pub generators: Vec<String>,
    pub lifts: Vec<String>,
}

/// Blocks are the subtrees below the level-`level` vertices (in lexicographic
/// order, so block 0 is below `w_N = 0...0`), `H` is the level stabilizer and
/// conjugators come from an orbit transversal of `w_N`.
pub fn tree_lifting(g: &TreeGroup, level: usize) -> Result<TreeLift> {
    if level == 0 {
        return Err(Error::Hypothesis("lifting level must be at least 1".into()));
    }
    if level + 2 > g.depth() {
        return Err(Error::DepthExceeded {
            requested: level + 2,
            available: g.depth(),
        });
    }
    if !is_level_transitive(g, level)? {
        return Err(Error::Hypothesis(format!("not transitive on level {level}")));
    }
    let shape = g.shape();
    let depth = g.depth();
    let vertices: Vec<Vertex> = shape.vertices(level).collect();
    let blocks: Vec<Vec<usize>> = vertices
        .iter()
        .map(|v| shape.descendant_points(v, depth))
        .collect();
    let w = shape.level_offset(level);
    let transversal = g.vertex_group().orbit_transversal(w);
    let conjugators: Vec<Perm> = vertices[1..]
        .iter()
        .map(|v| {
            let p = v.point(shape).expect("non-root vertex");
            let (_, u) = transversal
                .iter()
                .find(|(q, _)| *q == p)
                .expect("level-transitive");
            u.inverse()
        })
        .collect();
    let blocked = BlockedGroup::new(
        g.vertex_count(),
        blocks,
        g.level_stabilizer_perms(level),
        Some(conjugators),
    )?;
    let witness = lift_decompose(&blocked)?;
    Ok(TreeLift {
        level,
        depth,
        blocked,
        witness,
        group: g.clone(),
        subshape: shape.subshape(level),
    })
}
