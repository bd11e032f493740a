use proptest::prelude::*;
use treedim::catalog::catalog;
use treedim::lifting::tree_lifting;
use treedim::matrix::{assert_sqrt_bound, Integers};
use treedim::ncgraph::{construct_vn_weakly_branch, Graph, NCRep, DEFAULT_SEARCH_BOUND};
use treedim::{ExactMatrix, IntMatrix, Perm, Portrait, TreeGroup};

fn group(name: &str, depth: usize) -> TreeGroup {
    catalog(name).unwrap().unfold(depth).unwrap()
}

#[test]
fn lifting_preserves_commutation() {
    let g = group("grigorchuk", 6);
    let t = tree_lifting(&g, 1).unwrap();
    let n = t.n_subtree().unwrap();
    let all = n.elements().unwrap();
    let elements: Vec<Perm> = all.iter().step_by(all.len().div_ceil(48)).cloned().collect();
    let lifts: Vec<Portrait> = elements.iter().map(|a| t.lift(a).unwrap()).collect();
    let mut noncommuting = 0;
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let below = elements[i].commutes_with(&elements[j]);
            let lifted = lifts[i].compose(&lifts[j]).unwrap() == lifts[j].compose(&lifts[i]).unwrap();
            assert_eq!(below, lifted, "pair {i}, {j}");
            noncommuting += usize::from(!below);
        }
    }
    assert!(noncommuting > 0);
    // Lifts are the elements themselves on the subtree below w_N.
    for (a, x) in elements.iter().zip(&lifts) {
        assert_eq!(&t.section(&x.vertex_perm()).unwrap(), a);
    }
}

#[test]
fn weakly_branch_labellings_verify() {
    for (name, depth, n) in [("grigorchuk", 6, 2), ("gupta_sidki_3", 4, 3), ("full", 4, 4)] {
        let c = construct_vn_weakly_branch(&group(name, depth), n, DEFAULT_SEARCH_BOUND).unwrap();
        assert!(c.rep.verify().holds, "{name}");
        assert_eq!(c.rep.graph.as_vn(), Some(n));
        let back: NCRep<Portrait> = NCRep::parse_text(&c.rep.to_text()).unwrap();
        assert_eq!(back.labels, c.rep.labels);
    }
}

/// The leaf permutation matrices of a tree labelling are an integer
/// labelling with the same commutation pattern.
fn leaf_matrices(rep: &NCRep<Portrait>) -> NCRep<IntMatrix> {
    let labels = rep
        .labels
        .iter()
        .map(|p| ExactMatrix::permutation(Integers::new(), &p.level_perm(p.depth())))
        .collect();
    NCRep::new(rep.graph.clone(), labels).unwrap()
}

#[test]
fn tree_labellings_satisfy_the_rank_bound() {
    let c = construct_vn_weakly_branch(&group("grigorchuk", 5), 2, DEFAULT_SEARCH_BOUND).unwrap();
    let b = assert_sqrt_bound(&leaf_matrices(&c.rep)).unwrap();
    assert!(b.holds);
    assert_eq!((b.n, b.degree, b.rank), (2, 32, 2));
}

fn perm_strategy(m: usize) -> impl Strategy<Value = Perm> {
    Just((0..m).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verify_matches_pairwise_commutation(labels in prop::collection::vec(perm_strategy(4), 4)) {
        let rep = NCRep::new(Graph::vn(2), labels.clone()).unwrap();
        let expected = (0..4).all(|v| {
            (v + 1..4).all(|w| labels[v].commutes_with(&labels[w]) != (w == v + 1 && v % 2 == 0))
        });
        let check = rep.verify();
        prop_assert_eq!(check.holds, expected);
        prop_assert_eq!(check.first_violation.is_none(), expected);
        let back: NCRep<Perm> = NCRep::parse_text(&rep.to_text()).unwrap();
        prop_assert_eq!(back.labels, labels);
    }

    #[test]
    fn graphs_round_trip(n in 1usize..6, extra in prop::collection::vec((0usize..12, 0usize..12), 0..4)) {
        let vn = Graph::vn(n);
        prop_assert_eq!(vn.as_vn(), Some(n));
        let m = 2 * n;
        let edges: Vec<(usize, usize)> = vn
            .edges()
            .chain(extra.into_iter().map(|(a, b)| (a % m, b % m)).filter(|(a, b)| a != b))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let g = Graph::new(m, edges.clone()).unwrap();
        for (a, b) in edges {
            prop_assert!(g.has_edge(a, b) && g.has_edge(b, a));
        }
    }
}
