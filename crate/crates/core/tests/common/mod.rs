#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spintree::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random equal-depth branch spec with at most `max_nodes` nodes.
pub fn random_spec(seed: u64, max_nodes: usize) -> BranchSpec {
    let mut rng = rng(seed);
    loop {
        let depth = rng.random_range(1..=8usize);
        let spec = grow(&mut rng, depth);
        if spec.node_count() <= max_nodes {
            return spec;
        }
    }
}

fn grow(rng: &mut ChaCha8Rng, remaining: usize) -> BranchSpec {
    let segment = rng.random_range(1..=remaining);
    if segment == remaining {
        return BranchSpec::segment(segment);
    }
    let kids = rng.random_range(2..=3usize);
    BranchSpec::with_children(
        segment,
        (0..kids).map(|_| grow(rng, remaining - segment)).collect(),
    )
}

/// Random tree on `n` nodes with random positive couplings and energies.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize, with_energies: bool) -> SpinNetwork {
    let edges: Vec<(usize, usize, Option<f64>)> = (1..n)
        .map(|i| (rng.random_range(0..i), i, Some(rng.random_range(0.1..2.0))))
        .collect();
    let net = SpinNetwork::from_edges(n, &edges).unwrap();
    if with_energies {
        let e = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        net.with_onsite_energies(e).unwrap()
    } else {
        net
    }
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> WaveFunction {
    let amps = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    WaveFunction::normalized(amps).unwrap()
}

pub fn coupled(net: &SpinNetwork, alpha: f64) -> SpinNetwork {
    assign_couplings(net, &CouplingRule::new(alpha).unwrap()).unwrap()
}

pub fn decompose(net: &SpinNetwork) -> SpectralDecomposition {
    spectral_decompose(&build_block(net).unwrap()).unwrap()
}

pub fn panel_b_spec() -> BranchSpec {
    BranchSpec::with_children(
        2,
        vec![
            BranchSpec::segment(2),
            BranchSpec::with_children(1, vec![BranchSpec::segment(1); 2]),
        ],
    )
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
