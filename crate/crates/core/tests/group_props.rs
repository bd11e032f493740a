use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treedim::catalog::catalog;
use treedim::{Perm, PermGroup};

fn random_perm(m: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut images: Vec<usize> = (0..m).collect();
    images.shuffle(rng);
    Perm::from_images(images).unwrap()
}

/// Sparse generators: products of a few random transpositions, so the
/// groups stay small enough to enumerate.
fn small_gens(m: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Perm> {
    (0..count)
        .map(|_| {
            let mut images: Vec<usize> = (0..m).collect();
            let mut pts: Vec<usize> = (0..m).collect();
            pts.shuffle(rng);
            for pair in pts.chunks(2).take(1 + m / 4) {
                if pair.len() == 2 {
                    images.swap(pair[0], pair[1]);
                }
            }
            Perm::from_images(images).unwrap()
        })
        .collect()
}

/// Closure under right multiplication by the generators.
fn enumerate(m: usize, gens: &[Perm]) -> HashSet<Perm> {
    let id = Perm::identity(m);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        assert!(seen.len() <= 50_000, "oracle budget");
    }
    seen
}

fn case() -> impl Strategy<Value = (usize, usize, u64)> {
    (3usize..=7, 1usize..=3, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_and_membership_match_enumeration((m, count, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = small_gens(m, count, &mut rng);
        let all = enumerate(m, &gens);
        let g = PermGroup::new(m, gens.clone()).unwrap();
        prop_assert_eq!(g.order(), BigUint::from(all.len()));
        let natural = PermGroup::with_base_prefix(m, gens, &(0..m).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(natural.order(), g.order());
        for _ in 0..20 {
            let x = random_perm(m, &mut rng);
            prop_assert_eq!(g.contains(&x), all.contains(&x));
            prop_assert_eq!(natural.contains(&x), all.contains(&x));
        }
        let listed: HashSet<Perm> = g.elements().unwrap().into_iter().collect();
        prop_assert_eq!(listed, all);
    }

    #[test]
    fn stabilizers_and_orbits((m, count, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = small_gens(m, count, &mut rng);
        let all = enumerate(m, &gens);
        let g = PermGroup::new(m, gens).unwrap();
        let pts = [0, m - 1];
        let st = g.pointwise_stabilizer(&pts);
        let fixing = all.iter().filter(|x| pts.iter().all(|&p| x.fixes(p))).count();
        prop_assert_eq!(st.order(), BigUint::from(fixing));
        let orbit: HashSet<usize> = all.iter().map(|x| x.apply(0)).collect();
        prop_assert_eq!(g.orbit(0).into_iter().collect::<HashSet<_>>(), orbit.clone());
        // Orbit-stabilizer.
        prop_assert_eq!(g.order(), g.pointwise_stabilizer(&[0]).order() * BigUint::from(orbit.len()));
    }

    #[test]
    fn centre_and_derived_subgroup((m, count, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = small_gens(m, count, &mut rng);
        let all: Vec<Perm> = enumerate(m, &gens).into_iter().collect();
        let g = PermGroup::new(m, gens).unwrap();
        let centre = all.iter().filter(|z| all.iter().all(|x| x.commutes_with(z))).count();
        prop_assert_eq!(g.center().unwrap().order(), BigUint::from(centre));
        // Distinct commutators only; there are at most |G| of them.
        let commutators: HashSet<Perm> = all.iter().flat_map(|x| all.iter().map(|y| x.commutator(y))).collect();
        let derived = enumerate(m, &commutators.into_iter().collect::<Vec<_>>());
        prop_assert_eq!(g.derived_subgroup().order(), BigUint::from(derived.len()));
    }

    #[test]
    fn normal_closure_is_normal((m, count, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = small_gens(m, count, &mut rng);
        let g = PermGroup::new(m, gens.clone()).unwrap();
        let n = g.normal_closure(&gens[..1]).unwrap();
        prop_assert!(n.is_subgroup_of(&g));
        prop_assert!(n.is_normal_in(&g));
        prop_assert!(n.contains(&gens[0]));
        let conj: Vec<Perm> = enumerate(m, &gens).iter().map(|x| gens[0].conjugate_by(x)).collect();
        prop_assert_eq!(n.order(), BigUint::from(enumerate(m, &conj).len()));
    }
}

#[test]
fn natural_base_agrees_with_the_default_base_on_tree_groups() {
    for (name, depth) in [("grigorchuk", 5), ("gupta_sidki_3", 4), ("sylow_3", 3), ("full", 4), ("abelian_diagonal", 4)] {
        let g = catalog(name).unwrap().unfold(depth).unwrap();
        let n = g.vertex_count();
        let gens = g.vertex_perms();
        let natural = PermGroup::with_base_prefix(n, gens.clone(), &(0..n).collect::<Vec<_>>()).unwrap();
        let plain = PermGroup::new(n, gens).unwrap();
        assert_eq!(natural.order(), plain.order(), "{name}");
        assert_eq!(natural.order(), g.vertex_group().order(), "{name}");
    }
}
