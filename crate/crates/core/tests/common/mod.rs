//! Lifting corpus shared by the lifting tests and the acceptance run:
//! every subdirect subgroup of `A × A` for `A = Sym(3), D_4`, found by
//! closing bitmask subsets of the product, plus hand-picked subgroups of
//! `Sym(3)³`.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use treedim::lifting::{lift_decompose, lift_oracle, BlockedGroup};
use treedim::{Perm, PermGroup};

fn p(images: &[usize]) -> Perm {
    Perm::from_images(images.to_vec()).unwrap()
}

fn close(gens: &[Perm], degree: usize) -> Vec<Perm> {
    let id = Perm::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = vec![];
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    out.sort_by(|a, b| a.images().cmp(b.images()));
    out
}

pub fn sym3() -> Vec<Perm> {
    close(&[p(&[1, 0, 2]), p(&[1, 2, 0])], 3)
}

/// Symmetries of the square with corners 0, 1, 2, 3 in cyclic order.
pub fn dihedral4() -> Vec<Perm> {
    close(&[p(&[1, 2, 3, 0]), p(&[0, 3, 2, 1])], 4)
}

/// `(x, y)` acting on `0..m` and `m..2m`.
fn pair(x: &Perm, y: &Perm) -> Perm {
    let m = x.degree();
    let mut images: Vec<usize> = x.images().iter().map(|&a| a as usize).collect();
    images.extend(y.images().iter().map(|&a| a as usize + m));
    p(&images)
}

/// All subgroups of the group with the given multiplication table, as
/// bitmasks over element indices (at most 128 elements).
fn all_subgroups(mul: &[Vec<usize>], identity: usize) -> BTreeSet<u128> {
    let n = mul.len();
    // Right-multiplication closure of the identity under every member.
    let closure = |gens: u128| -> u128 {
        let gens: Vec<usize> = (0..n).filter(|&g| gens >> g & 1 == 1).collect();
        let mut mask = 1u128 << identity;
        let mut queue = vec![identity];
        while let Some(a) = queue.pop() {
            for &g in &gens {
                let x = mul[a][g];
                if mask >> x & 1 == 0 {
                    mask |= 1 << x;
                    queue.push(x);
                }
            }
        }
        mask
    };
    let trivial = 1u128 << identity;
    let mut found = BTreeSet::from([trivial]);
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for e in 0..n {
            if h >> e & 1 == 0 {
                let k = closure(h | 1 << e);
                if found.insert(k) {
                    frontier.push(k);
                }
            }
        }
    }
    found
}

/// A corpus entry: generators of `H` on two or three blocks of the factor's points.
#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub degree: usize,
    pub blocks: Vec<Vec<usize>>,
    pub generators: Vec<Perm>,
    /// Conjugators moving block `j` onto block 0, when they normalize `H`.
    pub conjugators: Option<Vec<Perm>>,
}

impl Case {
    pub fn blocked(&self) -> BlockedGroup {
        BlockedGroup::new(self.degree, self.blocks.clone(), self.generators.clone(), self.conjugators.clone())
            .expect("corpus case is a valid blocked group")
    }
}

/// Greedy generating set of the listed elements.
fn generators_of(elements: &[Perm], degree: usize) -> Vec<Perm> {
    let mut gens: Vec<Perm> = vec![];
    let mut span: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
    for x in elements {
        if !span.contains(x) {
            gens.push(x.clone());
            span = close(&gens, degree).into_iter().collect();
        }
    }
    gens
}

fn swap_blocks(m: usize) -> Perm {
    p(&(0..2 * m).map(|x| (x + m) % (2 * m)).collect::<Vec<_>>())
}

/// Every subdirect subgroup of `A × A`.
pub fn subdirect_squares(name: &str, factor: &[Perm]) -> Vec<Case> {
    let m = factor[0].degree();
    let elements: Vec<Perm> = factor
        .iter()
        .flat_map(|x| factor.iter().map(move |y| pair(x, y)))
        .collect();
    let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mul: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&a.then(b)]).collect())
        .collect();
    let identity = index[&Perm::identity(2 * m)];
    let blocks = vec![(0..m).collect::<Vec<_>>(), (m..2 * m).collect()];
    let swap = swap_blocks(m);
    let mut out = vec![];
    for mask in all_subgroups(&mul, identity) {
        let members: Vec<Perm> = (0..elements.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| elements[i].clone())
            .collect();
        let onto = |block: &[usize]| {
            let proj: HashSet<Vec<u32>> = members.iter().map(|x| x.keep_only(block).images().to_vec()).collect();
            proj.len() == factor.len()
        };
        if !(onto(&blocks[0]) && onto(&blocks[1])) {
            continue;
        }
        let generators = generators_of(&members, 2 * m);
        let h = PermGroup::new(2 * m, generators.clone()).unwrap();
        let conjugators = h.is_normalized_by(std::slice::from_ref(&swap)).then(|| vec![swap.clone()]);
        out.push(Case {
            label: format!("{name}^2 #{}", out.len()),
            degree: 2 * m,
            blocks: blocks.clone(),
            generators,
            conjugators,
        });
    }
    out
}

/// Subgroups of `Sym(3)³` with different lifting behaviour.
pub fn curated_sym3_cubed() -> Vec<Case> {
    let t = p(&[1, 0, 2]);
    let c = p(&[1, 2, 0]);
    let e = Perm::identity(3);
    let triple = |x: &Perm, y: &Perm, z: &Perm| {
        let mut images: Vec<usize> = vec![];
        for (i, w) in [x, y, z].into_iter().enumerate() {
            images.extend(w.images().iter().map(|&a| a as usize + 3 * i));
        }
        p(&images)
    };
    let shift = |by: usize| p(&(0..9).map(|x| (x + 9 - 3 * by) % 9).collect::<Vec<_>>());
    let blocks = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
    let raw: Vec<(&str, Vec<Perm>)> = vec![
        ("full", vec![triple(&t, &e, &e), triple(&c, &e, &e), triple(&e, &t, &e), triple(&e, &c, &e), triple(&e, &e, &t), triple(&e, &e, &c)]),
        ("diagonal", vec![triple(&t, &t, &t), triple(&c, &c, &c)]),
        ("even signs", vec![triple(&t, &t, &e), triple(&e, &t, &t), triple(&c, &e, &e), triple(&e, &c, &e), triple(&e, &e, &c)]),
        ("equal signs", vec![triple(&t, &t, &t), triple(&c, &e, &e), triple(&e, &c, &e), triple(&e, &e, &c)]),
        ("diagonal pair", vec![triple(&t, &t, &e), triple(&c, &c, &e), triple(&e, &e, &t), triple(&e, &e, &c)]),
        ("glued third", vec![triple(&t, &t, &t), triple(&c, &c, &e), triple(&e, &e, &c)]),
        ("twisted", vec![triple(&t, &t, &t), triple(&c, &c.inverse(), &c)]),
        ("fibre pair times factor", vec![triple(&t, &t, &e), triple(&c, &e, &e), triple(&e, &c, &e), triple(&e, &e, &t), triple(&e, &e, &c)]),
    ];
    raw.into_iter()
        .map(|(label, generators)| {
            let h = PermGroup::new(9, generators.clone()).unwrap();
            let cs = vec![shift(1), shift(2)];
            let conjugators = h.is_normalized_by(&cs).then_some(cs);
            Case {
                label: format!("S3^3 {label}"),
                degree: 9,
                blocks: blocks.clone(),
                generators,
                conjugators,
            }
        })
        .collect()
}

/// Outcome of comparing the recursive lifting with the oracle on one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Both found the same index; all elementwise checks passed.
    Agree { i: usize },
    /// Both report that no admissible index exists.
    BothFail,
}

/// Index agreement, `N ⊆ core`, tail uniqueness and the resolver
/// homomorphism property, checked element by element.
pub fn check_case(case: &Case) -> Result<Outcome, String> {
    let b = case.blocked();
    let (w, o) = match (lift_decompose(&b), lift_oracle(&b)) {
        (Ok(w), Ok(o)) => (w, o),
        (Err(_), Err(_)) => return Ok(Outcome::BothFail),
        (Ok(w), Err(e)) => return Err(format!("{}: lifting found i = {} but the oracle failed: {e}", case.label, w.i)),
        (Err(e), Ok(o)) => return Err(format!("{}: oracle found i = {} but lifting failed: {e}", case.label, o.i)),
    };
    if w.i != o.i {
        return Err(format!("{}: i = {} but the oracle says {}", case.label, w.i, o.i));
    }
    if !w.n.is_subgroup_of(&o.core) {
        return Err(format!("{}: N is not inside the oracle core", case.label));
    }
    let h = b.group().elements().map_err(|e| e.to_string())?;
    let n = w.n.elements().map_err(|e| e.to_string())?;
    let block0 = &case.blocks[0];
    let mut lifts = HashMap::new();
    for a in &n {
        let tails: Vec<&Perm> = h
            .iter()
            .filter(|x| x.keep_only(block0) == *a && (1..=w.i).all(|j| b.trivial_on(x, j)))
            .collect();
        if tails.len() != 1 {
            return Err(format!("{}: {} lifts of {}", case.label, tails.len(), a.to_cycles()));
        }
        let r = w.resolve(a).map_err(|e| e.to_string())?;
        if &r != tails[0] {
            return Err(format!("{}: resolver disagrees on {}", case.label, a.to_cycles()));
        }
        lifts.insert(a.clone(), r);
    }
    for a in &n {
        for c in &n {
            if lifts[a].then(&lifts[c]) != lifts[&a.then(c)] {
                return Err(format!("{}: resolver is not multiplicative", case.label));
            }
        }
    }
    Ok(Outcome::Agree { i: w.i })
}
