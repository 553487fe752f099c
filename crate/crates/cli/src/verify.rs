//! Built-in verification suite run by `spintree verify`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spintree::oracle::{expm_evolve, wootters_concurrence};
use spintree::prelude::*;
use std::result::Result;

use crate::commands::cmd_evolve;
use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// Pass when the measured value is at most the threshold.
    #[serde(rename = "<=")]
    AtMost,
    /// Pass when the measured value exceeds the threshold.
    #[serde(rename = ">")]
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, threshold: f64) -> Self {
        Check {
            name,
            passed: measured <= threshold,
            measured,
            relation: Relation::AtMost,
            threshold,
        }
    }

    fn above(name: &'static str, measured: f64, threshold: f64) -> Self {
        Check {
            name,
            passed: measured > threshold,
            measured,
            relation: Relation::Above,
            threshold,
        }
    }

    fn failed(name: &'static str, err: impl std::fmt::Display) -> Self {
        eprintln!("{name}: {err}");
        Check {
            name,
            passed: false,
            measured: f64::NAN,
            relation: Relation::AtMost,
            threshold: 0.0,
        }
    }

    pub fn line(&self) -> String {
        let rel = match self.relation {
            Relation::AtMost => "<=",
            Relation::Above => ">",
        };
        format!(
            "{} {:<28} measured={:.3e} {} {:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            rel,
            self.threshold
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Relative change applied to the first coupling of every chain in the
    /// mirror-transfer check. Zero for a normal run.
    pub coupling_perturbation: f64,
}

type Outcome<T> = spintree::Result<T>;

fn decompose(net: &SpinNetwork) -> Outcome<SpectralDecomposition> {
    spectral_decompose(&build_block(net)?)
}

fn coupled(spec: &BranchSpec, alpha: f64) -> Outcome<SpinNetwork> {
    assign_couplings(&build_tree(spec)?, &CouplingRule::new(alpha)?)
}

fn panel_b() -> BranchSpec {
    BranchSpec::with_children(
        2,
        vec![
            BranchSpec::segment(2),
            BranchSpec::with_children(1, vec![BranchSpec::segment(1); 2]),
        ],
    )
}

fn arrival(net: &SpinNetwork, t: f64) -> Outcome<(SpectralDecomposition, WaveFunction)> {
    let d = decompose(net)?;
    let psi = evolve(&d, &basis_state(net, net.input())?, t)?;
    Ok((d, psi))
}

fn mirror_transfer(opts: VerifyOptions) -> Outcome<f64> {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let mut net = coupled(&BranchSpec::segment(n), 1.0)?;
        if opts.coupling_perturbation != 0.0 {
            let j = net.edges()[0].coupling.unwrap_or(1.0);
            net = net.with_coupling(0, j * (1.0 + opts.coupling_perturbation))?;
        }
        let (_, psi) = arrival(&net, FRAC_PI_2)?;
        worst = worst.max(1.0 - psi.amplitude(NodeId(n - 1)).norm_sqr());
    }
    Ok(worst)
}

fn w_creation() -> Outcome<f64> {
    let net = tripod_network(1.0)?;
    let (_, psi) = arrival(&net, FRAC_PI_2)?;
    let w0 = w_target(net.leaves(), WVariant::Zero)?;
    let pops = psi.populations();
    let pop_err = net
        .leaves()
        .iter()
        .map(|l| (pops[l.0] - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    Ok(pop_err.max(1.0 - fidelity(&psi, &w0)))
}

fn revival() -> Outcome<f64> {
    let net = tripod_network(1.0)?;
    let d = decompose(&net)?;
    let psi0 = basis_state(&net, net.input())?;
    let w0 = w_target(net.leaves(), WVariant::Zero)?;
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let psi = evolve(&d, &psi0, FRAC_PI_2 + k as f64 * PI)?;
        worst = worst.max(1.0 - fidelity(&psi, &w0));
    }
    Ok(worst)
}

/// `(||H psi||, drift)` after the pulses, on `star(2, p, 1)`.
fn freezing(p: usize, phases: &[f64]) -> Outcome<(f64, f64)> {
    let net = coupled(&BranchSpec::star(2, p, 1), 1.0)?;
    let (d, mut psi) = arrival(&net, FRAC_PI_2)?;
    for (&leaf, &theta) in net.leaves().iter().zip(phases) {
        psi = apply_phase(&psi, leaf, theta)?;
    }
    let residual = build_block(&net)?.residual_norm(&psi)?;
    let drift = stationarity_drift(&d, &psi, 20.0 * PI, 4001)?;
    Ok((residual, drift))
}

fn asymmetric_weights() -> Outcome<f64> {
    let net = coupled(&panel_b(), 1.0)?;
    let (_, psi) = arrival(&net, FRAC_PI_2)?;
    let pops = psi.populations();
    Ok(net
        .leaves()
        .iter()
        .zip([0.5, 0.25, 0.25])
        .map(|(l, e)| (pops[l.0] - e).abs())
        .fold(0.0, f64::max))
}

fn singlet() -> Outcome<(f64, f64)> {
    let one = singlet_protocol(1.0, Some(spintree::dynamics::Outcome::One), 0)?;
    let zero = singlet_protocol(1.0, Some(spintree::dynamics::Outcome::Zero), 0)?;
    let prob_err = (one.probability - 1.0 / 3.0)
        .abs()
        .max((zero.probability - 2.0 / 3.0).abs());
    Ok((prob_err, zero.drift.unwrap_or(f64::INFINITY)))
}

fn partial_freezing() -> Outcome<f64> {
    let net = coupled(&BranchSpec::star(2, 3, 2), 1.0)?;
    let (d, mut psi) = arrival(&net, FRAC_PI_2)?;
    let phases = freeze_phases(3, FreezeScheme::RootsOfUnity)?;
    for (&leaf, &theta) in net.leaves().iter().zip(&phases) {
        psi = apply_phase(&psi, leaf, theta)?;
    }
    stationarity_drift(&d, &psi, 20.0 * PI, 4001)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Outcome<WaveFunction> {
    WaveFunction::normalized(
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn expm_equivalence() -> Outcome<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(1..=8usize);
        let edges: Vec<_> = (1..n)
            .map(|i| (rng.random_range(0..i), i, Some(rng.random_range(0.1..2.0))))
            .collect();
        let net = SpinNetwork::from_edges(n, &edges)?;
        let h = build_block(&net)?;
        let d = spectral_decompose(&h)?;
        let psi = random_state(&mut rng, n)?;
        let t = rng.random_range(0.0..10.0);
        let ours = evolve(&d, &psi, t)?;
        let reference = expm_evolve(&h, psi.amplitudes(), t);
        for (a, b) in ours.amplitudes().iter().zip(&reference) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

fn concurrence_equivalence() -> Outcome<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0c0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..=6usize);
        let psi = random_state(&mut rng, n)?;
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let ours = pairwise_concurrence(&psi, NodeId(i), NodeId(j))?;
        worst = worst.max((ours - wootters_concurrence(psi.amplitudes(), i, j)).abs());
    }
    Ok(worst)
}

fn w3_concurrence() -> Outcome<f64> {
    let leaves = [NodeId(0), NodeId(1), NodeId(2)];
    let w = w_target(&leaves, WVariant::Zero)?.embed(3)?;
    Ok((pairwise_concurrence(&w, NodeId(0), NodeId(1))? - 2.0 / 3.0).abs())
}

fn column_projection() -> Outcome<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
    let times: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..4.0 * PI)).collect();
    let mut worst: f64 = 0.0;
    for spec in [BranchSpec::star(2, 3, 1), panel_b()] {
        let net = coupled(&spec, 1.0)?;
        let chain = coupled(&BranchSpec::segment(net.equivalent_length()?), 1.0)?;
        let (d, dc) = (decompose(&net)?, decompose(&chain)?);
        let full = evolve_many(
            &d,
            &basis_state(&net, net.input())?,
            &times,
            ExecMode::default(),
        )?;
        let line = evolve_many(
            &dc,
            &basis_state(&chain, chain.input())?,
            &times,
            ExecMode::default(),
        )?;
        for (psi, chi) in full.iter().zip(&line) {
            for (a, b) in column_project(&net, psi)?.iter().zip(chi.amplitudes()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    Ok(worst)
}

pub const DETERMINISM_CONFIG: &str = r#"{
  "topology": { "star": { "m": 2, "p": 3, "l": 1 } },
  "alpha": 1.0,
  "pulses": [ { "time": "t_star", "scheme": "roots" } ],
  "measurements": [ { "time": "t_star+pi/alpha", "node": 4 } ],
  "samples": { "t_start": 0, "t_end": "t_star+2*pi/alpha", "steps": 257 },
  "outputs": { "populations": true, "amplitudes": true, "fidelity": ["w0", "w+", "distributed"] },
  "seed": 12345
}"#;

fn determinism() -> Result<f64, String> {
    let cfg = ExperimentConfig::from_json(DETERMINISM_CONFIG).map_err(|e| e.to_string())?;
    let a = cmd_evolve(&cfg).map_err(|e| e.to_string())?;
    let b = cmd_evolve(&cfg).map_err(|e| e.to_string())?;
    Ok(if a == b { 0.0 } else { 1.0 })
}

pub fn run_checks(opts: VerifyOptions) -> Summary {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, r: Outcome<Check>| {
        checks.push(r.unwrap_or_else(|e| Check::failed(name, e)));
    };

    push(
        "mirror_transfer",
        mirror_transfer(opts).map(|x| Check::at_most("mirror_transfer", x, 1e-9)),
    );
    push(
        "w_state_creation",
        w_creation().map(|x| Check::at_most("w_state_creation", x, 1e-9)),
    );
    push(
        "revival",
        revival().map(|x| Check::at_most("revival", x, 1e-9)),
    );
    let roots = freeze_phases(3, FreezeScheme::RootsOfUnity).unwrap_or_default();
    let frozen = freezing(3, &[roots[0], roots[1], roots[2] - 2.0 * PI]);
    push(
        "freeze_roots_dark",
        frozen
            .clone()
            .map(|(r, _)| Check::at_most("freeze_roots_dark", r, 1e-12)),
    );
    push(
        "freeze_roots_drift",
        frozen.map(|(_, d)| Check::at_most("freeze_roots_drift", d, 1e-9)),
    );
    let flip = freeze_phases(2, FreezeScheme::PiOnHalf).and_then(|ph| freezing(2, &ph));
    push(
        "freeze_pi_flip_dark",
        flip.clone()
            .map(|(r, _)| Check::at_most("freeze_pi_flip_dark", r, 1e-12)),
    );
    push(
        "freeze_pi_flip_drift",
        flip.map(|(_, d)| Check::at_most("freeze_pi_flip_drift", d, 1e-9)),
    );
    push(
        "asymmetric_weights",
        asymmetric_weights().map(|x| Check::at_most("asymmetric_weights", x, 1e-9)),
    );
    let s = singlet();
    push(
        "singlet_probabilities",
        s.clone()
            .map(|(p, _)| Check::at_most("singlet_probabilities", p, 1e-12)),
    );
    push(
        "singlet_drift",
        s.map(|(_, d)| Check::at_most("singlet_drift", d, 1e-9)),
    );
    push(
        "partial_freezing",
        partial_freezing().map(|x| Check::above("partial_freezing", x, 1e-3)),
    );
    push(
        "expm_oracle",
        expm_equivalence().map(|x| Check::at_most("expm_oracle", x, 1e-9)),
    );
    push(
        "wootters_oracle",
        concurrence_equivalence().map(|x| Check::at_most("wootters_oracle", x, 1e-12)),
    );
    push(
        "w3_concurrence",
        w3_concurrence().map(|x| Check::at_most("w3_concurrence", x, 1e-12)),
    );
    push(
        "column_projection",
        column_projection().map(|x| Check::at_most("column_projection", x, 1e-9)),
    );
    checks.push(match determinism() {
        Ok(x) => Check::at_most("determinism", x, 0.0),
        Err(e) => Check::failed("determinism", e),
    });

    let passed = checks.iter().filter(|c| c.passed).count();
    Summary {
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let s = run_checks(VerifyOptions::default());
        for c in &s.checks {
            assert!(c.passed, "{}", c.line());
        }
        assert_eq!(s.failed, 0);
    }

    #[test]
    fn perturbed_coupling_fails_mirror_transfer() {
        let s = run_checks(VerifyOptions {
            coupling_perturbation: 0.01,
        });
        let mirror = s
            .checks
            .iter()
            .find(|c| c.name == "mirror_transfer")
            .unwrap();
        assert!(!mirror.passed, "{}", mirror.line());
        assert_eq!(s.failed, 1);
    }
}
