use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treedim::{Perm, Portrait, TreeShape, Vertex};

fn random_perm(m: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut images: Vec<usize> = (0..m).collect();
    images.shuffle(rng);
    Perm::from_images(images).unwrap()
}

fn random_portrait(shape: &TreeShape, depth: usize, rng: &mut ChaCha8Rng) -> Portrait {
    let labels = (0..depth)
        .map(|k| (0..shape.level_size(k)).map(|_| random_perm(shape.degree(k), rng)).collect())
        .collect();
    Portrait::from_labels(shape, depth, labels).unwrap()
}

/// Degrees in 2..=4, depth 1..=5, plus a seed for the labels.
fn setup() -> impl Strategy<Value = (TreeShape, u64)> {
    (prop::collection::vec(2usize..=4, 1..=5), any::<u64>())
        .prop_map(|(degrees, seed)| (TreeShape::new(degrees).unwrap(), seed))
}

fn leaves(shape: &TreeShape, depth: usize) -> Vec<Vertex> {
    shape.vertices(depth).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_the_right_action((shape, seed) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.depth();
        let g = random_portrait(&shape, d, &mut rng);
        let h = random_portrait(&shape, d, &mut rng);
        let gh = g.compose(&h).unwrap();
        for v in leaves(&shape, d) {
            prop_assert_eq!(gh.act(&v).unwrap(), h.act(&g.act(&v).unwrap()).unwrap());
        }
    }

    #[test]
    fn group_axioms((shape, seed) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.depth();
        let (a, b, c) = (
            random_portrait(&shape, d, &mut rng),
            random_portrait(&shape, d, &mut rng),
            random_portrait(&shape, d, &mut rng),
        );
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.compose(&a.invert()).unwrap().is_identity());
        prop_assert!(a.invert().compose(&a).unwrap().is_identity());
    }

    #[test]
    fn psi_round_trip((shape, seed) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.depth();
        let g = random_portrait(&shape, d, &mut rng);
        for k in 0..=d {
            let (sections, top) = g.psi_decompose(k).unwrap();
            prop_assert_eq!(Portrait::reassemble(&shape, d, k, &sections, &top).unwrap(), g.clone());
        }
    }

    #[test]
    fn sections_of_products((shape, seed) in setup()) {
        // (gh)|_v = g|_v h|_(v^g)
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.depth();
        let g = random_portrait(&shape, d, &mut rng);
        let h = random_portrait(&shape, d, &mut rng);
        let gh = g.compose(&h).unwrap();
        for k in 0..d {
            for v in shape.vertices(k) {
                let expect = g.section(&v).unwrap().compose(&h.section(&g.act(&v).unwrap()).unwrap()).unwrap();
                prop_assert_eq!(gh.section(&v).unwrap(), expect);
            }
        }
    }

    #[test]
    fn vertex_perm_round_trip((shape, seed) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.depth();
        let g = random_portrait(&shape, d, &mut rng);
        let h = random_portrait(&shape, d, &mut rng);
        let p = g.vertex_perm();
        prop_assert_eq!(Portrait::from_vertex_perm(&shape, d, &p).unwrap(), g.clone());
        prop_assert_eq!(g.compose(&h).unwrap().vertex_perm(), p.then(&h.vertex_perm()));
    }

    #[test]
    fn truncation_commutes_with_products((shape, seed) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.depth();
        let g = random_portrait(&shape, d, &mut rng);
        let h = random_portrait(&shape, d, &mut rng);
        for e in 0..=d {
            let lhs = g.compose(&h).unwrap().truncate(e).unwrap();
            let rhs = g.truncate(e).unwrap().compose(&h.truncate(e).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn text_round_trip((shape, seed) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_portrait(&shape, shape.depth(), &mut rng);
        prop_assert_eq!(Portrait::parse_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn perm_identities(m in 1usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (random_perm(m, &mut rng), random_perm(m, &mut rng));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.conjugate_by(&q), q.inverse().then(&p).then(&q));
        prop_assert_eq!(p.commutator(&q).is_identity(), p.commutes_with(&q));
        prop_assert!(p.pow(p.order()).is_identity());
        prop_assert_eq!(Perm::parse_one_line(&p.to_one_line()).unwrap(), p.clone());
        for x in 0..m {
            prop_assert_eq!(p.then(&q).apply(x), q.apply(p.apply(x)));
        }
    }
}
