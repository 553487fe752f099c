//! Target states, fidelities, entanglement and stationarity metrics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::WaveFunction;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::hamiltonian::SpectralDecomposition;
use crate::topology::{leaf_weights, NodeId, SpinNetwork};

/// A named amplitude pattern on a subset of sites.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetState {
    pub support: Vec<NodeId>,
    pub amplitudes: Vec<Complex64>,
}

impl TargetState {
    /// Full-length wave function with zeros off the support.
    pub fn embed(&self, dim: usize) -> Result<WaveFunction> {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (node, a) in self.support.iter().zip(&self.amplitudes) {
            if node.0 >= dim {
                return Err(Error::InvalidNode {
                    node: node.0,
                    node_count: dim,
                });
            }
            amps[node.0] = *a;
        }
        WaveFunction::new(amps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WVariant {
    /// Equal real amplitudes.
    Zero,
    /// `(1, w, w*)/sqrt(3)` with `w = exp(2 pi i / 3)`.
    Plus,
    /// `(1, w*, w)/sqrt(3)`.
    Minus,
}

pub fn w_target(leaves: &[NodeId], variant: WVariant) -> Result<TargetState> {
    let p = leaves.len();
    let amplitudes = match variant {
        WVariant::Zero if p >= 2 => vec![Complex64::new((p as f64).sqrt().recip(), 0.0); p],
        WVariant::Zero => return Err(Error::InvalidBranching(p)),
        WVariant::Plus | WVariant::Minus if p == 3 => {
            let sign = if variant == WVariant::Plus { 1.0 } else { -1.0 };
            let s = 3f64.sqrt().recip();
            vec![
                Complex64::new(s, 0.0),
                Complex64::from_polar(s, sign * 2.0 * PI / 3.0),
                Complex64::from_polar(s, -sign * 2.0 * PI / 3.0),
            ]
        }
        WVariant::Plus | WVariant::Minus => return Err(Error::UnsupportedVariant(p)),
    };
    Ok(TargetState {
        support: leaves.to_vec(),
        amplitudes,
    })
}

/// The state an equal-depth tree delivers to its leaves, real and positive.
pub fn distributed_target(network: &SpinNetwork) -> Result<TargetState> {
    let w = leaf_weights(network)?;
    Ok(TargetState {
        support: w.leaves,
        amplitudes: w
            .weights
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect(),
    })
}

/// `|<target|psi>|^2`. Support nodes outside `psi` contribute nothing.
pub fn fidelity(psi: &WaveFunction, target: &TargetState) -> f64 {
    let a = psi.amplitudes();
    target
        .support
        .iter()
        .zip(&target.amplitudes)
        .filter_map(|(node, t)| a.get(node.0).map(|x| t.conj() * x))
        .sum::<Complex64>()
        .norm_sqr()
}

pub fn site_populations(psi: &WaveFunction) -> Vec<f64> {
    psi.populations()
}

/// Concurrence of the two-site reduced state, `2 |a_i| |a_j|` for a
/// single-excitation pure state.
pub fn pairwise_concurrence(psi: &WaveFunction, i: NodeId, j: NodeId) -> Result<f64> {
    if i == j {
        return Err(Error::SameSite(i.0));
    }
    for node in [i, j] {
        if node.0 >= psi.len() {
            return Err(Error::InvalidNode {
                node: node.0,
                node_count: psi.len(),
            });
        }
    }
    Ok(2.0 * psi.amplitude(i).norm() * psi.amplitude(j).norm())
}

/// Largest change of any site population over `samples` evenly spaced times
/// in `[0, horizon]`.
pub fn stationarity_drift(
    decomp: &SpectralDecomposition,
    psi: &WaveFunction,
    horizon: f64,
    samples: usize,
) -> Result<f64> {
    stationarity_drift_with(decomp, psi, horizon, samples, ExecMode::default())
}

pub fn stationarity_drift_with(
    decomp: &SpectralDecomposition,
    psi: &WaveFunction,
    horizon: f64,
    samples: usize,
    mode: ExecMode,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InvalidSampleCount(samples));
    }
    let start = psi.populations();
    let modal = decomp.modal_coefficients(psi)?;
    let step = horizon / (samples - 1) as f64;
    let per_sample = map_indexed(mode, samples, |k| {
        decomp
            .synthesize(&modal, step * k as f64)
            .iter()
            .zip(&start)
            .map(|(a, p0)| (a.norm_sqr() - p0).abs())
            .fold(0.0, f64::max)
    });
    Ok(per_sample.into_iter().fold(0.0, f64::max))
}

/// Fidelity to `target` on `steps + 1` evenly spaced times in `[0, t_end]`.
pub fn fidelity_series(
    decomp: &SpectralDecomposition,
    psi0: &WaveFunction,
    target: &TargetState,
    t_end: f64,
    steps: usize,
    mode: ExecMode,
) -> Result<Vec<(f64, f64)>> {
    let modal = decomp.modal_coefficients(psi0)?;
    let dt = if steps == 0 {
        0.0
    } else {
        t_end / steps as f64
    };
    Ok(map_indexed(mode, steps + 1, |k| {
        let t = dt * k as f64;
        let psi = WaveFunction::from_raw(decomp.synthesize(&modal, t));
        (t, fidelity(&psi, target))
    }))
}

/// Time and value of the largest fidelity on the grid; earliest on ties.
pub fn fidelity_peak(series: &[(f64, f64)]) -> Option<(f64, f64)> {
    series
        .iter()
        .copied()
        .fold(None, |best: Option<(f64, f64)>, (t, f)| match best {
            Some((_, bf)) if bf >= f => best,
            _ => Some((t, f)),
        })
}

/// Collapses a tree state onto its equivalent chain.
///
/// Column `c` of the result is `sum_k w_k a_k` over the nodes in that column,
/// where `w_k` is the product of `1/sqrt(children)` over the hubs strictly
/// above node `k`.
pub fn column_project(network: &SpinNetwork, psi: &WaveFunction) -> Result<Vec<Complex64>> {
    let n_eq = network.equivalent_length()?;
    if psi.len() != network.node_count() {
        return Err(Error::DimensionMismatch {
            expected: network.node_count(),
            actual: psi.len(),
        });
    }
    let weights = network.path_weights();
    let mut out = vec![Complex64::new(0.0, 0.0); n_eq];
    for (k, a) in psi.amplitudes().iter().enumerate() {
        out[network.columns()[k]] += a * weights[k];
    }
    Ok(out)
}
