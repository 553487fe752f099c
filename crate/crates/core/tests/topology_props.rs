mod common;

use std::collections::VecDeque;

use proptest::prelude::*;
use spintree::prelude::*;

use common::{coupled, random_spec};

fn reachable(net: &SpinNetwork) -> usize {
    let mut seen = vec![false; net.node_count()];
    let mut queue = VecDeque::from([net.input()]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for e in net.edges() {
            let next = if e.parent == u {
                e.child
            } else if e.child == u {
                e.parent
            } else {
                continue;
            };
            if !seen[next.0] {
                seen[next.0] = true;
                count += 1;
                queue.push_back(next);
            }
        }
    }
    count
}

proptest! {
    #[test]
    fn built_trees_are_spanning_trees(seed in any::<u64>()) {
        let net = build_tree(&random_spec(seed, 50)).unwrap();
        prop_assert_eq!(net.edges().len(), net.node_count() - 1);
        prop_assert_eq!(reachable(&net), net.node_count());
        prop_assert_eq!(net.column(net.input()), 0);
        for e in net.edges() {
            prop_assert_eq!(net.column(e.child), net.column(e.parent) + 1);
        }
    }

    #[test]
    fn leaf_weights_are_normalized(seed in any::<u64>()) {
        let net = build_tree(&random_spec(seed, 50)).unwrap();
        let w = leaf_weights(&net).unwrap();
        let total: f64 = w.weights.iter().map(|x| x * x).sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "sum w^2 = {}", total);
        prop_assert!(w.weights.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn bfs_numbering(seed in any::<u64>()) {
        let net = build_tree(&random_spec(seed, 50)).unwrap();
        // Breadth-first labels never decrease in column.
        prop_assert!(net.columns().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn star_equals_tree(m in 1usize..6, p in 2usize..6, l in 1usize..6) {
        let star = build_star(m, p, l).unwrap();
        let tree = build_tree(&BranchSpec::star(m, p, l)).unwrap();
        prop_assert_eq!(&star, &tree);
        prop_assert_eq!(star.node_count(), m + p * l);
        prop_assert_eq!(star.equivalent_length().unwrap(), m + l);
    }

    #[test]
    fn couplings_project_to_chain(seed in any::<u64>(), alpha in 0.1f64..5.0) {
        let net = build_tree(&random_spec(seed, 50)).unwrap();
        prop_assume!(net.node_count() >= 2);
        let net = coupled(&net, alpha);
        let chain = christandl_couplings(net.equivalent_length().unwrap(), alpha).unwrap();
        for e in net.edges() {
            let fan_out = net.children(e.parent).len() as f64;
            let projected = e.coupling.unwrap() * fan_out.sqrt();
            prop_assert!((projected - chain[net.column(e.parent)]).abs() < 1e-14 * chain[net.column(e.parent)].max(1.0));
        }
    }

    #[test]
    fn chain_couplings_palindromic(n in 2usize..200, alpha in 0.01f64..10.0) {
        let j = christandl_couplings(n, alpha).unwrap();
        prop_assert_eq!(j.len(), n - 1);
        for i in 0..j.len() {
            prop_assert_eq!(j[i], j[j.len() - 1 - i]);
        }
    }
}

#[test]
fn alpha_scaling() {
    let net = build_tree(&common::panel_b_spec()).unwrap();
    let base = coupled(&net, 1.0);
    for s in [2.0, 0.25] {
        let scaled = coupled(&net, s);
        for (a, b) in base.edges().iter().zip(scaled.edges()) {
            assert_eq!(b.coupling.unwrap(), s * a.coupling.unwrap());
        }
        assert_eq!(transfer_time(s).unwrap(), transfer_time(1.0).unwrap() / s);
    }
}

#[test]
fn panel_b_couplings() {
    let net = coupled(&build_tree(&common::panel_b_spec()).unwrap(), 1.0);
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let expect = [
        ((0, 1), r3),
        ((1, 2), r2),
        ((1, 3), r2),
        ((2, 4), r3),
        ((3, 5), r3 / r2),
        ((3, 6), r3 / r2),
    ];
    assert_eq!(net.edges().len(), expect.len());
    for (e, ((p, c), j)) in net.edges().iter().zip(expect) {
        assert_eq!((e.parent.0, e.child.0), (p, c));
        assert!((e.coupling.unwrap() - j).abs() < 1e-15);
    }
}

#[test]
fn unequal_depth_refused_by_couplings() {
    let spec = BranchSpec::with_children(1, vec![BranchSpec::segment(1), BranchSpec::segment(3)]);
    let net = build_tree_with(&spec, DepthPolicy::AllowUnequal).unwrap();
    assert!(matches!(
        assign_couplings(&net, &CouplingRule::new(1.0).unwrap()),
        Err(Error::DepthMismatch { .. })
    ));
}
