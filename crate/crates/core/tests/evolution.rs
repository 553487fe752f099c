mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use spintree::oracle::expm_evolve;
use spintree::prelude::*;

use common::{coupled, decompose, max_diff, random_state, random_tree, rng};

#[test]
fn decomposition_invariants_on_random_trees() {
    let mut r = rng(11);
    for _ in 0..60 {
        let n = r.random_range(1..=20);
        let net = random_tree(&mut r, n, true);
        let h = build_block(&net).unwrap();
        let d = spectral_decompose(&h).unwrap();
        assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let mut ortho: f64 = 0.0;
        let mut recon: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let vtv: f64 = (0..n)
                    .map(|k| d.vector_component(k, a) * d.vector_component(k, b))
                    .sum();
                ortho = ortho.max((vtv - if a == b { 1.0 } else { 0.0 }).abs());
                let vlv: f64 = (0..n)
                    .map(|j| {
                        d.vector_component(a, j) * d.eigenvalues()[j] * d.vector_component(b, j)
                    })
                    .sum();
                recon = recon.max((vlv - h.get(a, b)).abs());
            }
        }
        assert!(ortho < 1e-12, "orthonormality residual {ortho}");
        assert!(recon < 1e-10, "reconstruction residual {recon}");
        assert_eq!(spectral_decompose(&h).unwrap(), d, "not deterministic");
    }
}

#[test]
fn norm_is_conserved() {
    let mut r = rng(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = r.random_range(1..=30);
        let energies = r.random_bool(0.5);
        let net = random_tree(&mut r, n, energies);
        let d = decompose(&net);
        let psi = random_state(&mut r, n);
        let t = r.random_range(0.0..50.0);
        let out = evolve(&d, &psi, t).unwrap();
        worst = worst.max((out.norm_sqr().sqrt() - 1.0).abs());
    }
    assert!(worst < 1e-12, "norm drift {worst}");
}

#[test]
fn group_property() {
    let mut r = rng(13);
    for _ in 0..100 {
        let n = r.random_range(2..=15);
        let net = random_tree(&mut r, n, true);
        let d = decompose(&net);
        let psi = random_state(&mut r, n);
        let (t1, t2) = (r.random_range(0.0..10.0), r.random_range(0.0..10.0));
        let two_step = evolve(&d, &evolve(&d, &psi, t1).unwrap(), t2).unwrap();
        let one_step = evolve(&d, &psi, t1 + t2).unwrap();
        assert!(max_diff(two_step.amplitudes(), one_step.amplitudes()) < 1e-10);
    }
}

#[test]
fn matches_matrix_exponential() {
    let mut r = rng(14);
    for _ in 0..200 {
        let n = r.random_range(1..=8);
        let energies = r.random_bool(0.5);
        let net = random_tree(&mut r, n, energies);
        let h = build_block(&net).unwrap();
        let d = spectral_decompose(&h).unwrap();
        let psi = random_state(&mut r, n);
        let t = r.random_range(0.0..20.0);
        let ours = evolve(&d, &psi, t).unwrap();
        let reference = expm_evolve(&h, psi.amplitudes(), t);
        let gap = max_diff(ours.amplitudes(), &reference);
        assert!(gap < 1e-9, "n = {n}, t = {t}: gap {gap}");
    }
}

#[test]
fn chains_mirror_perfectly() {
    for n in 2..=8 {
        for alpha in [1.0, 0.5, 3.0] {
            let net = coupled(&build_tree(&BranchSpec::segment(n)).unwrap(), alpha);
            let d = decompose(&net);
            let psi = evolve(
                &d,
                &basis_state(&net, NodeId(0)).unwrap(),
                FRAC_PI_2 / alpha,
            )
            .unwrap();
            let end = psi.amplitude(NodeId(n - 1));
            assert!(
                end.norm() >= 1.0 - 1e-9,
                "N = {n}: |a_end| = {}",
                end.norm()
            );
            // Arrival phase (-i)^(N-1).
            let phase = Complex64::new(0.0, -1.0).powu((n - 1) as u32);
            assert!((end - phase).norm() < 1e-9);
        }
    }
}

#[test]
fn perturbed_chain_is_imperfect() {
    let net = coupled(&build_tree(&BranchSpec::segment(6)).unwrap(), 1.0);
    let j0 = net.edges()[0].coupling.unwrap();
    let bent = net.with_coupling(0, j0 * 1.01).unwrap();
    let d = decompose(&bent);
    let psi = evolve(&d, &basis_state(&bent, NodeId(0)).unwrap(), FRAC_PI_2).unwrap();
    assert!(psi.amplitude(NodeId(5)).norm_sqr() < 1.0 - 1e-9);
}

#[test]
fn panel_b_arrival_populations() {
    let net = coupled(&build_tree(&common::panel_b_spec()).unwrap(), 1.0);
    let d = decompose(&net);
    let psi = evolve(&d, &basis_state(&net, NodeId(0)).unwrap(), FRAC_PI_2).unwrap();
    let pops = psi.populations();
    for (leaf, e) in [(4, 0.5), (5, 0.25), (6, 0.25)] {
        assert!((pops[leaf] - e).abs() < 1e-9, "leaf {leaf}: {}", pops[leaf]);
    }
}

#[test]
fn fig1_revivals() {
    let net = tripod_network(1.0).unwrap();
    let d = decompose(&net);
    let psi0 = basis_state(&net, NodeId(0)).unwrap();
    let w0 = w_target(net.leaves(), WVariant::Zero).unwrap();
    let at_arrival = fidelity(&evolve(&d, &psi0, FRAC_PI_2).unwrap(), &w0);
    for k in 1..=3 {
        let f = fidelity(&evolve(&d, &psi0, FRAC_PI_2 + k as f64 * PI).unwrap(), &w0);
        assert!((f - at_arrival).abs() < 1e-9, "k = {k}: {f}");
    }
}

#[test]
fn phases_keep_magnitudes() {
    let mut r = rng(15);
    for _ in 0..200 {
        let n = r.random_range(1..=12);
        let psi = random_state(&mut r, n);
        let node = NodeId(r.random_range(0..n));
        let theta = r.random_range(-10.0..10.0);
        let out = apply_phase(&psi, node, theta).unwrap();
        for k in 0..n {
            assert!(
                (out.amplitudes()[k].norm() - psi.amplitudes()[k].norm()).abs()
                    <= 2.0 * f64::EPSILON
            );
            if k != node.0 {
                assert_eq!(out.amplitudes()[k], psi.amplitudes()[k]);
            }
        }
    }
}

#[test]
fn measurement_probabilities() {
    let mut r = rng(16);
    for seed in 0..300 {
        let n = r.random_range(2..=12);
        let psi = random_state(&mut r, n);
        let node = NodeId(r.random_range(0..n));
        let rec = measure_site(&psi, node, None, seed).unwrap();
        let p1 = psi.amplitude(node).norm_sqr();
        assert!((rec.p_one - p1).abs() < 1e-14);
        let (p_one, p_zero) = match rec.outcome {
            Outcome::One => (rec.probability, 1.0 - rec.probability),
            Outcome::Zero => (rec.p_one, rec.probability),
        };
        assert!((p_one + p_zero - 1.0).abs() < 1e-14);
        if let Ok(zero) = measure_site(&psi, node, Some(Outcome::Zero), seed) {
            let post = zero.post_state.wave_function().unwrap();
            assert_eq!(post.amplitude(node), Complex64::new(0.0, 0.0));
            assert!((post.norm_sqr() - 1.0).abs() < 1e-12);
            assert!((rec.p_one + zero.probability - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn freeze_schemes_give_dark_states() {
    for p in 2..=7 {
        let net = coupled(&build_star(2, p, 1).unwrap(), 1.0);
        let h = build_block(&net).unwrap();
        let w0 = w_target(net.leaves(), WVariant::Zero)
            .unwrap()
            .embed(net.node_count())
            .unwrap();
        for scheme in [FreezeScheme::RootsOfUnity, FreezeScheme::PiOnHalf] {
            let Ok(phases) = freeze_phases(p, scheme) else {
                assert!(p % 2 == 1 && scheme == FreezeScheme::PiOnHalf);
                continue;
            };
            let mut psi = w0.clone();
            for (&leaf, &theta) in net.leaves().iter().zip(&phases) {
                psi = apply_phase(&psi, leaf, theta).unwrap();
            }
            let residual = h.residual_norm(&psi).unwrap();
            assert!(residual < 1e-12, "p = {p}, {scheme:?}: {residual}");
        }
    }
}

#[test]
fn w_plus_minus_are_null_vectors() {
    let net = tripod_network(1.3).unwrap();
    let h = build_block(&net).unwrap();
    for v in [WVariant::Plus, WVariant::Minus] {
        let psi = w_target(net.leaves(), v).unwrap().embed(5).unwrap();
        assert!(h.residual_norm(&psi).unwrap() < 1e-12);
    }
}

#[test]
fn schedule_modes_agree() {
    let net = coupled(&build_star(3, 4, 2).unwrap(), 1.0);
    let d = decompose(&net);
    let psi0 = basis_state(&net, NodeId(0)).unwrap();
    let t_star = transfer_time(1.0).unwrap();
    let phases = freeze_phases(4, FreezeScheme::PiOnHalf).unwrap();
    let schedule = ExperimentSchedule {
        events: net
            .leaves()
            .iter()
            .zip(&phases)
            .map(|(&node, &phase)| ScheduledEvent {
                time: t_star,
                node,
                kind: EventKind::Pulse { phase },
            })
            .chain(std::iter::once(ScheduledEvent {
                time: 2.0 * t_star,
                node: net.leaves()[0],
                kind: EventKind::Measure { forced: None },
            }))
            .collect(),
        sample_times: (0..300).map(|k| 0.02 * k as f64).collect(),
        seed: 99,
    };
    let a = run_experiment(&net, &d, &psi0, &schedule, ExecMode::Sequential).unwrap();
    let b = run_experiment(&net, &d, &psi0, &schedule, ExecMode::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples.len(), 300);
}
