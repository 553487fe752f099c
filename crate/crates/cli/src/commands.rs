use std::fmt::Write as _;

use serde::Serialize;
use spintree::prelude::*;
use std::result::Result;

use crate::config::{build_network, coupling_rule, ExperimentConfig};
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct NodeDoc {
    pub id: usize,
    pub column: usize,
    pub parent: Option<usize>,
    pub onsite_energy: f64,
}

#[derive(Debug, Serialize)]
pub struct EdgeDoc {
    pub parent: usize,
    pub child: usize,
    pub coupling: f64,
}

/// Network description emitted by `generate`.
#[derive(Debug, Serialize)]
pub struct NetworkDoc {
    pub alpha: f64,
    pub node_count: usize,
    pub input: usize,
    pub equivalent_length: usize,
    pub transfer_time: f64,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    pub leaves: Vec<usize>,
    pub leaf_weights: Vec<f64>,
}

pub fn network_doc(config: &ExperimentConfig) -> Result<NetworkDoc, CliError> {
    let rule = coupling_rule(config.alpha)?;
    let net = build_network(&config.topology, &rule)?;
    let weights = leaf_weights(&net).map_err(|e| CliError::input("topology", e))?;
    Ok(NetworkDoc {
        alpha: rule.alpha(),
        node_count: net.node_count(),
        input: net.input().0,
        equivalent_length: net
            .equivalent_length()
            .map_err(|e| CliError::input("topology", e))?,
        transfer_time: rule.transfer_time(),
        nodes: (0..net.node_count())
            .map(|k| NodeDoc {
                id: k,
                column: net.columns()[k],
                parent: net.parent(NodeId(k)).map(NodeId::index),
                onsite_energy: net.onsite_energy()[k],
            })
            .collect(),
        edges: net
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                parent: e.parent.0,
                child: e.child.0,
                coupling: e.coupling.expect("couplings assigned"),
            })
            .collect(),
        leaves: weights.leaves.iter().map(|l| l.0).collect(),
        leaf_weights: weights.weights,
    })
}

pub fn cmd_generate(config: &ExperimentConfig) -> Result<String, CliError> {
    let doc = network_doc(config)?;
    let mut out = serde_json::to_string_pretty(&doc).expect("network document serializes");
    out.push('\n');
    Ok(out)
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs the configured schedule and renders the CSV time series.
pub fn cmd_evolve(config: &ExperimentConfig) -> Result<String, CliError> {
    let exp = config.resolve()?;
    let net = &exp.network;
    let n = net.node_count();
    let decomp = build_block(net)
        .and_then(|h| spectral_decompose(&h))
        .map_err(|e| CliError::input("topology", e))?;
    let psi0 = basis_state(net, exp.initial).map_err(|e| CliError::input("initial_node", e))?;
    let series = run_experiment(net, &decomp, &psi0, &exp.schedule, ExecMode::default())
        .map_err(|e| CliError::input("schedule", e))?;

    let mut header = vec!["time".to_string()];
    if exp.outputs.populations {
        header.extend((0..n).map(|k| format!("p_{k}")));
    }
    if exp.outputs.amplitudes {
        header.extend((0..n).flat_map(|k| [format!("re_{k}"), format!("im_{k}")]));
    }
    header.extend(
        exp.targets
            .iter()
            .map(|(t, _)| format!("fidelity_{}", t.label())),
    );

    let mut csv = header.join(",");
    csv.push('\n');
    for sample in &series.samples {
        let psi = sample.state.wave_function();
        let mut row = vec![fmt_float(sample.time)];
        if exp.outputs.populations {
            match psi {
                Some(psi) => row.extend(psi.populations().into_iter().map(fmt_float)),
                None => row.extend((0..n).map(|_| fmt_float(0.0))),
            }
        }
        if exp.outputs.amplitudes {
            for k in 0..n {
                let a = psi.map_or(num_complex::Complex64::new(0.0, 0.0), |p| p.amplitudes()[k]);
                row.push(fmt_float(a.re));
                row.push(fmt_float(a.im));
            }
        }
        for (_, target) in &exp.targets {
            row.push(fmt_float(psi.map_or(0.0, |p| fidelity(p, target))));
        }
        let _ = writeln!(csv, "{}", row.join(","));
    }
    Ok(csv)
}
