//! Finite permutation groups backed by a deterministic Schreier–Sims
//! stabilizer chain.
//!
//! Base points are taken from an optional prescribed prefix followed by the
//! smallest point moved by a generator that fixes the current base, so the
//! chain is a pure function of the generator list and the prefix.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Largest group order that any enumeration path will materialize.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Indices into `Chain::strong`.
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// point -> (u, u^-1) with `base^u = point`.
    transversal: HashMap<u32, (Perm, Perm)>,
    /// point -> points moved by its transversal element.
    supports: HashMap<u32, Vec<u32>>,
    /// For each orbit position, how many of `gens` have had their Schreier
    /// generator shown to sift (both lists only ever grow at the end).
    verified: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = HashMap::new();
        let id = Perm::identity(degree);
        transversal.insert(base as u32, (id.clone(), id));
        Level {
            base,
            gens: vec![],
            orbit: vec![base],
            transversal,
            supports: HashMap::from([(base as u32, vec![])]),
            verified: vec![0],
        }
    }

    /// Extends orbit and transversal after the generator `new` was appended
    /// to `gens`. Existing transversal entries are kept, so already verified
    /// Schreier generators stay valid. In natural mode `deeper` holds the
    /// levels after this one, used to shorten new transversal elements.
    fn extend_orbit(&mut self, strong: &[Perm], new: usize, deeper: Option<&[Level]>) {
        let known = self.orbit.len();
        for i in 0..known {
            let p = self.orbit[i];
            self.push_image(strong, p, new, deeper);
        }
        let mut head = known;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            head += 1;
            for k in 0..self.gens.len() {
                let gi = self.gens[k];
                self.push_image(strong, p, gi, deeper);
            }
        }
    }

    fn push_image(&mut self, strong: &[Perm], p: usize, gi: usize, deeper: Option<&[Level]>) {
        let s = &strong[gi];
        let q = s.apply(p);
        if !self.transversal.contains_key(&(q as u32)) {
            let mut u = self.transversal[&(p as u32)].0.then(s);
            if let Some(deeper) = deeper {
                u = reduce_tail(&u, self.base, deeper, self.base + 1);
            }
            let inv = u.inverse();
            self.supports.insert(q as u32, support_of(&u));
            self.transversal.insert(q as u32, (u, inv));
            self.orbit.push(q);
            self.verified.push(0);
        }
    }
}

/// Natural mode only (`deeper[i]` has base point `offset + i`). Multiplies `g`
/// on the right by transversal inverses of the levels past the cycle of `g`
/// through `base`, fixing as many later points as possible. The action on
/// every point up to that cycle's maximum is unchanged.
fn reduce_tail(g: &Perm, base: usize, deeper: &[Level], offset: usize) -> Perm {
    let mut top = base;
    let mut x = g.apply(base);
    while x != base {
        top = top.max(x);
        x = g.apply(x);
    }
    let mut h = Sparse::new(g.degree());
    h.then(g, &support_of(g));
    let mut from = top + 1;
    while let Some(b) = h.moved_from(from) {
        from = b + 1;
        let level = &deeper[b - offset];
        if let Some((_, inv)) = level.transversal.get(&h.images[b]) {
            h.then(inv, &level.supports[&h.images[b]]);
        }
    }
    Perm::from_raw(h.images)
}

#[derive(Clone, Debug)]
struct Chain {
    degree: usize,
    strong: Vec<Perm>,
    strong_support: Vec<Vec<u32>>,
    levels: Vec<Level>,
    /// Level `i` has base point `i` for every point, so the first level a
    /// permutation fails to fix is its smallest moved point.
    natural: bool,
    sparse: Sparse,
}

fn support_of(p: &Perm) -> Vec<u32> {
    p.support().map(|x| x as u32).collect()
}

#[derive(Clone, Debug, Default)]
/// A permutation stored densely together with its inverse, so that a product
/// with a sparse right factor costs only that factor's support.
struct Sparse {
    images: Vec<u32>,
    preimages: Vec<u32>,
    touched: Vec<u32>,
    /// Bitset of `touched`, scanned in order to find moved points.
    mark: Vec<u64>,
    pairs: Vec<(u32, u32)>,
}

impl Sparse {
    fn new(degree: usize) -> Self {
        Sparse {
            images: (0..degree as u32).collect(),
            preimages: (0..degree as u32).collect(),
            touched: vec![],
            mark: vec![0; degree.div_ceil(64)],
            pairs: vec![],
        }
    }

    fn reset(&mut self) {
        for &x in &self.touched {
            self.images[x as usize] = x;
            self.preimages[x as usize] = x;
            self.mark[x as usize / 64] = 0;
        }
        self.touched.clear();
    }

    fn touch(&mut self, x: u32) {
        let (w, b) = (x as usize / 64, x % 64);
        if self.mark[w] >> b & 1 == 0 {
            self.mark[w] |= 1 << b;
            self.touched.push(x);
        }
    }

    /// Replaces `self` by `self` followed by `p`, where `p` moves only `supp`.
    fn then(&mut self, p: &Perm, supp: &[u32]) {
        let p = p.images();
        self.pairs.clear();
        for &y in supp {
            self.pairs.push((self.preimages[y as usize], p[y as usize]));
        }
        for i in 0..self.pairs.len() {
            let (x, z) = self.pairs[i];
            self.touch(x);
            self.touch(z);
            self.images[x as usize] = z;
            self.preimages[z as usize] = x;
        }
    }

    /// Smallest moved point that is at least `from`.
    fn moved_from(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        let mut bits = self.mark.get(w)? & (!0u64 << (from % 64));
        loop {
            while bits != 0 {
                let x = w * 64 + bits.trailing_zeros() as usize;
                if self.images[x] as usize != x {
                    return Some(x);
                }
                bits &= bits - 1;
            }
            w += 1;
            bits = *self.mark.get(w)?;
        }
    }
}

impl Chain {
    fn new(degree: usize, prefix: &[usize]) -> Self {
        Chain {
            degree,
            strong: vec![],
            strong_support: vec![],
            levels: prefix.iter().map(|&b| Level::new(degree, b)).collect(),
            natural: degree > 0 && prefix.iter().copied().eq(0..degree),
            sparse: Sparse::default(),
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` when every level passed).
    fn strip(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut h = g.images().to_vec();
        let mut scratch = vec![0u32; h.len()];
        let stop = self.strip_in_place(&mut h, &mut scratch, from);
        (Perm::from_raw(h), stop)
    }

    fn strip_in_place(&self, h: &mut Vec<u32>, scratch: &mut Vec<u32>, from: usize) -> usize {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let gamma = h[level.base];
            if gamma as usize == level.base {
                continue;
            }
            match level.transversal.get(&gamma) {
                Some((_, inv)) => {
                    let inv = inv.images();
                    for (dst, &x) in scratch.iter_mut().zip(h.iter()) {
                        *dst = inv[x as usize];
                    }
                    std::mem::swap(h, scratch);
                }
                None => return l,
            }
        }
        self.levels.len()
    }

    fn contains(&self, g: &Perm) -> bool {
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    fn ensure_moves_base(&mut self, g: &Perm) {
        if self.levels.iter().all(|l| g.fixes(l.base)) {
            if let Some(p) = g.support().next() {
                self.levels.push(Level::new(self.degree, p));
            }
        }
    }

    /// Registers `g` as a strong generator on every level whose earlier base
    /// points it fixes, starting at `from`. Returns the deepest level touched.
    fn add_strong(&mut self, g: Perm, from: usize) -> usize {
        let idx = self.strong.len();
        self.strong_support.push(support_of(&g));
        self.strong.push(g);
        let g = &self.strong[idx];
        let mut deepest = from;
        for l in 0..self.levels.len() {
            if l > 0 && !g.fixes(self.levels[l - 1].base) {
                break;
            }
            if l >= from {
                self.levels[l].gens.push(idx);
                deepest = l;
            }
        }
        for l in from..=deepest {
            let strong = &self.strong;
            let (head, tail) = self.levels.split_at_mut(l + 1);
            head[l].extend_orbit(strong, idx, self.natural.then_some(&*tail));
        }
        deepest
    }

    /// Adds a generator (if not already a member) and restores the
    /// strong-generating-set property.
    fn add_generator(&mut self, g: &Perm) {
        if g.is_identity() || self.contains(g) {
            return;
        }
        self.ensure_moves_base(g);
        let deepest = self.add_strong(g.clone(), 0);
        self.complete(deepest);
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let lvl = i as usize;
            match self.check_level(lvl) {
                None => i -= 1,
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let p = residue.support().next().expect("non-identity residue");
                        self.levels.push(Level::new(self.degree, p));
                    }
                    let residue = if self.natural {
                        reduce_tail(&residue, j, &self.levels[j + 1..], j + 1)
                    } else {
                        residue
                    };
                    let deepest = self.add_strong(residue, lvl + 1);
                    debug_assert!(deepest >= j);
                    i = deepest as isize;
                }
            }
        }
    }

    /// Finds a Schreier generator at `lvl` that fails to sift, or marks all as verified.
    fn check_level(&mut self, lvl: usize) -> Option<(Perm, usize)> {
        if self.natural {
            return self.check_level_sparse(lvl);
        }
        let mut h = vec![0u32; self.degree];
        let mut scratch = vec![0u32; self.degree];
        let mut pos = 0;
        while pos < self.levels[lvl].orbit.len() {
            while self.levels[lvl].verified[pos] < self.levels[lvl].gens.len() {
                let level = &self.levels[lvl];
                let beta = level.orbit[pos];
                let s = self.strong[level.gens[level.verified[pos]]].images();
                let image = s[beta] as usize;
                if beta == level.base && image == beta {
                    // A strong generator of the next level: sifts trivially.
                    self.levels[lvl].verified[pos] += 1;
                    continue;
                }
                let u = level.transversal[&(beta as u32)].0.images();
                let v_inv = level.transversal[&(image as u32)].1.images();
                let mut identity = true;
                for (i, dst) in h.iter_mut().enumerate() {
                    *dst = v_inv[s[u[i] as usize] as usize];
                    identity &= *dst as usize == i;
                }
                if !identity {
                    let j = self.strip_in_place(&mut h, &mut scratch, lvl + 1);
                    let residue_trivial = h.iter().enumerate().all(|(i, &x)| i as u32 == x);
                    if j < self.levels.len() || !residue_trivial {
                        return Some((Perm::from_raw(h), j));
                    }
                }
                self.levels[lvl].verified[pos] += 1;
            }
            pos += 1;
        }
        None
    }

    fn check_level_sparse(&mut self, lvl: usize) -> Option<(Perm, usize)> {
        let pending = self.levels[lvl].gens.len();
        if self.levels[lvl].verified.iter().all(|&v| v == pending) {
            return None;
        }
        if self.levels[lvl].orbit.len() == 1 {
            // Every generator of this level fixes its base point.
            self.levels[lvl].verified[0] = pending;
            return None;
        }
        let mut h = std::mem::take(&mut self.sparse);
        if h.images.len() != self.degree {
            h = Sparse::new(self.degree);
        }
        let found = self.sparse_schreier(lvl, &mut h);
        h.reset();
        self.sparse = h;
        found
    }

    fn sparse_schreier(&mut self, lvl: usize, h: &mut Sparse) -> Option<(Perm, usize)> {
        let mut pos = 0;
        while pos < self.levels[lvl].orbit.len() {
            while self.levels[lvl].verified[pos] < self.levels[lvl].gens.len() {
                let level = &self.levels[lvl];
                let beta = level.orbit[pos] as u32;
                let gi = level.gens[level.verified[pos]];
                let s = &self.strong[gi];
                let image = s.apply(beta as usize) as u32;
                if beta as usize == level.base && image == beta {
                    self.levels[lvl].verified[pos] += 1;
                    continue;
                }
                h.reset();
                h.then(&level.transversal[&beta].0, &level.supports[&beta]);
                h.then(s, &self.strong_support[gi]);
                h.then(&level.transversal[&image].1, &level.supports[&image]);
                let mut from = 0;
                while let Some(b) = h.moved_from(from) {
                    from = b + 1;
                    let gamma = h.images[b];
                    let level = &self.levels[b];
                    match level.transversal.get(&gamma) {
                        Some((_, inv)) => h.then(inv, &level.supports[&gamma]),
                        None => return Some((Perm::from_raw(h.images.clone()), b)),
                    }
                }
                self.levels[lvl].verified[pos] += 1;
            }
            pos += 1;
        }
        None
    }

    fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }
}

/// A finite permutation group on `[0, degree)` with its stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: Chain,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Builds the chain with `prefix` as the first base points (every prefix
    /// point becomes a level, even when its orbit is trivial).
    pub fn with_base_prefix(degree: usize, generators: Vec<Perm>, prefix: &[usize]) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Incompatible(format!(
                    "generator of degree {} in a group of degree {degree}",
                    g.degree()
                )));
            }
        }
        if let Some(&p) = prefix.iter().find(|&&p| p >= degree) {
            return Err(Error::Incompatible(format!("base point {p} out of range")));
        }
        let mut gens: Vec<Perm> = vec![];
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut chain = Chain::new(degree, prefix);
        for g in &gens {
            chain.add_generator(g);
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            chain,
        })
    }

    /// Like [`PermGroup::new`], but keeps only the candidates that enlarge the
    /// group generated by those kept before them.
    pub fn new_reduced(degree: usize, candidates: Vec<Perm>) -> Result<Self> {
        if let Some(g) = candidates.iter().find(|g| g.degree() != degree) {
            return Err(Error::Incompatible(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        let mut chain = Chain::new(degree, &[]);
        let mut gens = vec![];
        for g in candidates {
            if !g.is_identity() && !chain.contains(&g) {
                chain.add_generator(&g);
                gens.push(g);
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![],
            chain: Chain::new(degree, &[]),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.chain.strong
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.base).collect()
    }

    /// Orbit sizes along the base.
    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain.contains(g)
    }

    /// Generators of the subgroup fixing the first `len` base points.
    pub fn chain_stabilizer_generators(&self, len: usize) -> Vec<Perm> {
        if len >= self.chain.levels.len() {
            return vec![];
        }
        self.chain.levels[len]
            .gens
            .iter()
            .map(|&i| self.chain.strong[i].clone())
            .collect()
    }

    /// Order of the subgroup fixing the first `len` base points.
    pub fn chain_stabilizer_order(&self, len: usize) -> BigUint {
        self.chain
            .levels
            .iter()
            .skip(len)
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn orbit(&self, p: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[p] = true;
        let mut orbit = vec![p];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbit
    }

    /// Orbits in order of their smallest point, each listed in BFS order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![];
        for p in 0..self.degree {
            if !seen[p] {
                let o = self.orbit(p);
                for &x in &o {
                    seen[x] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Orbit of `p` with a transversal: `(point, u)` where `p^u = point`.
    pub fn orbit_transversal(&self, p: usize) -> Vec<(usize, Perm)> {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut out = vec![(p, self.identity())];
        index.insert(p, 0);
        let mut head = 0;
        while head < out.len() {
            let (x, u) = out[head].clone();
            head += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    e.insert(out.len());
                    out.push((y, u.then(g)));
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let mut prefix: Vec<usize> = vec![];
        let mut seen = HashSet::new();
        for &p in points {
            if seen.insert(p) {
                prefix.push(p);
            }
        }
        let rebased = PermGroup::with_base_prefix(self.degree, self.generators.clone(), &prefix)
            .expect("valid generators");
        let gens = rebased.chain_stabilizer_generators(prefix.len());
        PermGroup::new(self.degree, gens).expect("valid generators")
    }

    /// The unique-or-first element agreeing with `target` on `points`, if any.
    pub fn element_matching(&self, target: &Perm, points: &[usize]) -> Option<Perm> {
        let rebased = PermGroup::with_base_prefix(self.degree, self.generators.clone(), points)
            .expect("valid generators");
        rebased.sift_prefix(target, points.len())
    }

    /// Sifts `target` through the first `len` base levels and returns the
    /// product of transversal elements it selected: an element of the group
    /// agreeing with `target` on those base points, if one exists. Build the
    /// group with [`PermGroup::with_base_prefix`] to choose the points.
    pub fn sift_prefix(&self, target: &Perm, len: usize) -> Option<Perm> {
        let mut h = target.clone();
        let mut acc = self.identity();
        for level in self.chain.levels.iter().take(len) {
            let gamma = h.apply(level.base);
            let (u, inv) = level.transversal.get(&(gamma as u32))?;
            h = h.then(inv);
            acc = u.then(&acc);
        }
        Some(acc)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn is_normalized_by(&self, elements: &[Perm]) -> bool {
        elements.iter().all(|g| {
            self.generators
                .iter()
                .all(|x| self.contains(&x.conjugate_by(g)))
        })
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other) && self.is_normalized_by(other.generators())
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Subgroup generated by `elements` (not required to lie in `self`).
    pub fn subgroup(&self, elements: Vec<Perm>) -> Result<PermGroup> {
        PermGroup::new(self.degree, elements)
    }

    /// Smallest normal subgroup of `self` containing `elements`.
    pub fn normal_closure(&self, elements: &[Perm]) -> Result<PermGroup> {
        if elements.iter().any(|e| !self.contains(e)) {
            return Err(Error::ElementOutsideGroup);
        }
        Ok(self.normal_closure_unchecked(elements))
    }

    fn normal_closure_unchecked(&self, elements: &[Perm]) -> PermGroup {
        let mut chain = Chain::new(self.degree, &[]);
        let mut gens: Vec<Perm> = vec![];
        let mut queue: Vec<Perm> = elements.to_vec();
        while let Some(x) = queue.pop() {
            if x.is_identity() || chain.contains(&x) {
                continue;
            }
            chain.add_generator(&x);
            for g in &self.generators {
                queue.push(x.conjugate_by(g));
            }
            gens.push(x);
        }
        PermGroup {
            degree: self.degree,
            generators: gens,
            chain,
        }
    }

    /// Derived subgroup: normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = vec![];
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_unchecked(&comms)
    }

    fn enumeration_size(&self) -> Result<u64> {
        let order = self.order();
        match order.to_u64() {
            Some(n) if n <= ENUMERATION_LIMIT => Ok(n),
            _ => Err(Error::Budget(format!(
                "group of order {order} exceeds the enumeration limit {ENUMERATION_LIMIT}"
            ))),
        }
    }

    /// All elements, as products of transversal elements.
    pub fn elements(&self) -> Result<Vec<Perm>> {
        let n = self.enumeration_size()?;
        let mut out = Vec::with_capacity(n as usize);
        out.push(self.identity());
        for level in self.chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for x in &out {
                for p in &level.orbit {
                    next.push(x.then(&level.transversal[&(*p as u32)].0));
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Largest subgroup of `sub` that is normal in `self`.
    pub fn normal_core(&self, sub: &PermGroup) -> Result<PermGroup> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotSubgroup(
                "core requested for a subgroup not contained in the group".into(),
            ));
        }
        if sub.is_normalized_by(&self.generators) {
            return Ok(sub.clone());
        }
        let mut current: Vec<Perm> = sub.elements()?;
        loop {
            let set: HashSet<&Perm> = current.iter().collect();
            let next: Vec<Perm> = current
                .iter()
                .filter(|h| self.generators.iter().all(|g| set.contains(&h.conjugate_by(g))))
                .cloned()
                .collect();
            if next.len() == current.len() {
                break;
            }
            current = next;
        }
        PermGroup::new(self.degree, current)
    }

    /// Centre of the group. Transitive groups use the regular action of the
    /// centralizer in the symmetric group on the fixed points of a point
    /// stabilizer; intransitive ones fall back to enumeration.
    pub fn center(&self) -> Result<PermGroup> {
        if self.generators.is_empty() {
            return Ok(self.clone());
        }
        if self.is_abelian() {
            return Ok(self.clone());
        }
        if self.is_transitive() {
            let stab = self.pointwise_stabilizer(&[0]);
            let fixed: Vec<usize> = (0..self.degree)
                .filter(|&p| stab.generators.iter().all(|g| g.fixes(p)))
                .collect();
            let transversal = self.orbit_transversal(0);
            let mut central = vec![];
            for &beta in &fixed {
                // c maps 0^u to beta^u for every transversal element u.
                let mut images = vec![0usize; self.degree];
                for (x, u) in &transversal {
                    images[*x] = u.apply(beta);
                }
                let c = Perm::from_images(images).expect("centralizer element is a bijection");
                if self.contains(&c) {
                    central.push(c);
                }
            }
            return PermGroup::new(self.degree, central);
        }
        let central: Vec<Perm> = self
            .elements()?
            .into_iter()
            .filter(|z| self.generators.iter().all(|g| g.commutes_with(z)))
            .collect();
        PermGroup::new(self.degree, central)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> PermGroup {
        let mut gens = vec![Perm::cycle(n, &[0, 1]).unwrap()];
        if n > 2 {
            gens.push(Perm::cycle(n, &(0..n).collect::<Vec<_>>()).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    /// Brute-force closure under multiplication.
    fn close(degree: usize, gens: &[Perm]) -> Vec<Perm> {
        let mut set: std::collections::BTreeSet<Perm> = [Perm::identity(degree)].into();
        let mut frontier = vec![Perm::identity(degree)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.then(g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    #[test]
    fn orders_of_small_groups() {
        let g = PermGroup::new(2, vec![Perm::cycle(2, &[0, 1]).unwrap()]).unwrap();
        assert_eq!(g.order(), BigUint::from(2u32));
        assert_eq!(sym(4).order(), BigUint::from(24u32));
        assert_eq!(sym(7).order(), BigUint::from(5040u32));
    }

    #[test]
    fn stabilizers() {
        let g = PermGroup::new(2, vec![Perm::cycle(2, &[0, 1]).unwrap()]).unwrap();
        assert!(g.pointwise_stabilizer(&[0]).is_trivial());
        let s = sym(3).pointwise_stabilizer(&[2]);
        assert_eq!(s.order(), BigUint::from(2u32));
        assert!(s.generators().iter().all(|g| g.fixes(2)));
    }

    #[test]
    fn normal_closure_and_core() {
        let s3 = sym(3);
        let c = Perm::cycle(3, &[0, 1, 2]).unwrap();
        assert_eq!(s3.normal_closure(&[c]).unwrap().order(), BigUint::from(3u32));
        let h = s3.subgroup(vec![Perm::cycle(3, &[0, 1]).unwrap()]).unwrap();
        assert!(s3.normal_core(&h).unwrap().is_trivial());
        let a3 = s3.normal_closure(&[Perm::cycle(3, &[0, 1, 2]).unwrap()]).unwrap();
        assert_eq!(s3.normal_core(&a3).unwrap().order(), BigUint::from(3u32));
        let outside = Perm::cycle(4, &[0, 3]).unwrap();
        let s3_on_4 = PermGroup::new(4, vec![Perm::cycle(4, &[0, 1]).unwrap()]).unwrap();
        assert_eq!(s3_on_4.normal_closure(&[outside]).unwrap_err(), Error::ElementOutsideGroup);
    }

    #[test]
    fn centers() {
        assert!(sym(3).center().unwrap().is_trivial());
        let cyc = PermGroup::new(5, vec![Perm::cycle(5, &[0, 1, 2, 3, 4]).unwrap()]).unwrap();
        assert_eq!(cyc.center().unwrap().order(), BigUint::from(5u32));
        // D_4 on the square: centre is the half turn.
        let d4 = PermGroup::new(
            4,
            vec![Perm::cycle(4, &[0, 1, 2, 3]).unwrap(), Perm::cycle(4, &[0, 2]).unwrap()],
        )
        .unwrap();
        let z = d4.center().unwrap();
        assert_eq!(z.order(), BigUint::from(2u32));
        assert!(z.contains(&Perm::from_images(vec![2, 3, 0, 1]).unwrap()));
    }

    #[test]
    fn elements_match_brute_force_closure() {
        let gens = vec![
            Perm::cycle(6, &[0, 1, 2]).unwrap(),
            Perm::cycle(6, &[3, 4]).unwrap().then(&Perm::cycle(6, &[0, 1]).unwrap()),
        ];
        let g = PermGroup::new(6, gens.clone()).unwrap();
        let brute = close(6, &gens);
        assert_eq!(g.elements().unwrap(), brute);
        assert_eq!(g.order(), BigUint::from(brute.len()));
    }

    #[test]
    fn element_matching_finds_prescribed_images() {
        let g = sym(5);
        let target = Perm::from_images(vec![3, 1, 0, 2, 4]).unwrap();
        let m = g.element_matching(&target, &[0, 1]).unwrap();
        assert_eq!(m.apply(0), 3);
        assert_eq!(m.apply(1), 1);
        assert!(g.contains(&m));
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        assert!(matches!(sym(11).elements(), Err(Error::Budget(_))));
    }
}
