//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "topology": { "star": { "m": 2, "p": 3, "l": 1 } },
//!   "alpha": 1.0,
//!   "pulses": [ { "time": "t_star", "scheme": "roots" } ],
//!   "measurements": [ { "time": "t_star", "node": 4, "forced": 0 } ],
//!   "samples": { "t_start": 0, "t_end": "t_star+pi/alpha", "steps": 101 },
//!   "outputs": { "populations": true, "amplitudes": false, "fidelity": ["w0"] },
//!   "seed": 7
//! }
//! ```
//!
//! Unknown fields are rejected everywhere.

use std::f64::consts::PI;

use serde::Deserialize;
use spintree::prelude::*;
use std::result::Result;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub topology: TopologyConfig,
    pub alpha: f64,
    /// Node holding the excitation at `t = 0`; defaults to the input.
    #[serde(default)]
    pub initial_node: Option<usize>,
    #[serde(default)]
    pub pulses: Vec<PulseConfig>,
    #[serde(default)]
    pub measurements: Vec<MeasurementConfig>,
    #[serde(default)]
    pub samples: Option<SampleGrid>,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologyConfig {
    Star { m: usize, p: usize, l: usize },
    Tree(TreeConfig),
    Chain { n: usize },
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TreeConfig {
    pub segment: usize,
    #[serde(default)]
    pub children: Vec<TreeConfig>,
}

impl TreeConfig {
    pub fn to_spec(&self) -> BranchSpec {
        BranchSpec::with_children(
            self.segment,
            self.children.iter().map(TreeConfig::to_spec).collect(),
        )
    }
}

/// A time given either as a number or as one of the named symbols
/// `t_star`, `pi/alpha`, `K*pi/alpha`, `t_star+pi/alpha`, `t_star+K*pi/alpha`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TimeSpec {
    Value(f64),
    Symbol(String),
}

impl TimeSpec {
    pub fn resolve(&self, alpha: f64) -> Option<f64> {
        let t = match self {
            TimeSpec::Value(t) => *t,
            TimeSpec::Symbol(s) => resolve_symbol(s.trim(), alpha)?,
        };
        (t >= 0.0 && t.is_finite()).then_some(t)
    }
}

fn resolve_symbol(s: &str, alpha: f64) -> Option<f64> {
    let period = PI / alpha;
    let multiples = |s: &str| -> Option<f64> {
        if s == "pi/alpha" {
            return Some(period);
        }
        let k: u32 = s.strip_suffix("*pi/alpha")?.trim().parse().ok()?;
        Some(k as f64 * period)
    };
    match s.strip_prefix("t_star") {
        Some("") => Some(0.5 * period),
        Some(rest) => Some(0.5 * period + multiples(rest.trim().strip_prefix('+')?.trim())?),
        None => multiples(s),
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub enum SchemeName {
    #[serde(rename = "roots")]
    Roots,
    #[serde(rename = "pi-half")]
    PiHalf,
}

/// One pulse (`node` or `leaf` plus `phase`) or a freezing pattern over all
/// leaves (`scheme`).
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub time: TimeSpec,
    #[serde(default)]
    pub node: Option<usize>,
    /// Index into the leaf list.
    #[serde(default)]
    pub leaf: Option<usize>,
    #[serde(default)]
    pub phase: Option<f64>,
    #[serde(default)]
    pub scheme: Option<SchemeName>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MeasurementConfig {
    pub time: TimeSpec,
    pub node: usize,
    #[serde(default)]
    pub forced: Option<u8>,
}

/// `steps` evenly spaced samples from `t_start` to `t_end` inclusive.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SampleGrid {
    #[serde(default = "zero_time")]
    pub t_start: TimeSpec,
    pub t_end: TimeSpec,
    pub steps: usize,
}

fn zero_time() -> TimeSpec {
    TimeSpec::Value(0.0)
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub enum FidelityTarget {
    #[serde(rename = "w0")]
    W0,
    #[serde(rename = "w+")]
    WPlus,
    #[serde(rename = "w-")]
    WMinus,
    #[serde(rename = "distributed")]
    Distributed,
}

impl FidelityTarget {
    pub fn label(self) -> &'static str {
        match self {
            FidelityTarget::W0 => "w0",
            FidelityTarget::WPlus => "w+",
            FidelityTarget::WMinus => "w-",
            FidelityTarget::Distributed => "distributed",
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "yes")]
    pub populations: bool,
    #[serde(default)]
    pub amplitudes: bool,
    #[serde(default)]
    pub fidelity: Vec<FidelityTarget>,
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            populations: true,
            amplitudes: false,
            fidelity: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input("config", e))
    }
}

/// A config with every reference resolved against a built network.
pub struct Experiment {
    pub rule: CouplingRule,
    pub network: SpinNetwork,
    pub initial: NodeId,
    pub schedule: ExperimentSchedule,
    pub outputs: OutputConfig,
    pub targets: Vec<(FidelityTarget, TargetState)>,
}

pub fn build_network(
    topology: &TopologyConfig,
    rule: &CouplingRule,
) -> Result<SpinNetwork, CliError> {
    let bare = match topology {
        TopologyConfig::Star { m, p, l } => build_star(*m, *p, *l),
        TopologyConfig::Tree(tree) => build_tree(&tree.to_spec()),
        TopologyConfig::Chain { n } => build_tree(&BranchSpec::segment(*n)),
    }
    .map_err(|e| CliError::input("topology", e))?;
    assign_couplings(&bare, rule).map_err(|e| CliError::input("topology", e))
}

pub fn coupling_rule(alpha: f64) -> Result<CouplingRule, CliError> {
    CouplingRule::new(alpha).map_err(|e| CliError::input("alpha", e))
}

impl ExperimentConfig {
    pub fn resolve(&self) -> Result<Experiment, CliError> {
        let rule = coupling_rule(self.alpha)?;
        let network = build_network(&self.topology, &rule)?;
        let alpha = rule.alpha();
        let node_ref = |field: String, node: usize| -> Result<NodeId, CliError> {
            let id = NodeId(node);
            network
                .check_node(id)
                .map_err(|e| CliError::input(field, e))?;
            Ok(id)
        };
        let time_ref = |field: String, t: &TimeSpec| -> Result<f64, CliError> {
            t.resolve(alpha)
                .ok_or_else(|| CliError::input(field, format!("cannot resolve time {t:?}")))
        };

        let initial = node_ref("initial_node".into(), self.initial_node.unwrap_or(0))?;

        let mut events = Vec::new();
        for (i, pulse) in self.pulses.iter().enumerate() {
            let field = |name: &str| format!("pulses[{i}].{name}");
            let time = time_ref(field("time"), &pulse.time)?;
            match (pulse.scheme, pulse.node, pulse.leaf, pulse.phase) {
                (Some(scheme), None, None, None) => {
                    let scheme = match scheme {
                        SchemeName::Roots => FreezeScheme::RootsOfUnity,
                        SchemeName::PiHalf => FreezeScheme::PiOnHalf,
                    };
                    let phases = freeze_phases(network.leaves().len(), scheme)
                        .map_err(|e| CliError::input(field("scheme"), e))?;
                    for (&node, phase) in network.leaves().iter().zip(phases) {
                        events.push(ScheduledEvent {
                            time,
                            node,
                            kind: EventKind::Pulse { phase },
                        });
                    }
                }
                (None, node, leaf, Some(phase)) => {
                    let node = match (node, leaf) {
                        (Some(node), None) => node_ref(field("node"), node)?,
                        (None, Some(leaf)) => *network.leaves().get(leaf).ok_or_else(|| {
                            CliError::input(
                                field("leaf"),
                                format!(
                                    "leaf index {leaf} out of range ({} leaves)",
                                    network.leaves().len()
                                ),
                            )
                        })?,
                        _ => {
                            return Err(CliError::input(
                                field("node"),
                                "give exactly one of `node` or `leaf`",
                            ))
                        }
                    };
                    if !phase.is_finite() {
                        return Err(CliError::input(field("phase"), "phase must be finite"));
                    }
                    events.push(ScheduledEvent {
                        time,
                        node,
                        kind: EventKind::Pulse { phase },
                    });
                }
                (Some(_), ..) => {
                    return Err(CliError::input(
                        field("scheme"),
                        "a scheme pulse takes no `node`, `leaf` or `phase`",
                    ))
                }
                (None, _, _, None) => {
                    return Err(CliError::input(
                        field("phase"),
                        "missing `phase` or `scheme`",
                    ))
                }
            }
        }
        for (i, m) in self.measurements.iter().enumerate() {
            let field = |name: &str| format!("measurements[{i}].{name}");
            let time = time_ref(field("time"), &m.time)?;
            let node = node_ref(field("node"), m.node)?;
            let forced = match m.forced {
                None => None,
                Some(0) => Some(Outcome::Zero),
                Some(1) => Some(Outcome::One),
                Some(x) => {
                    return Err(CliError::input(
                        field("forced"),
                        format!("outcome must be 0 or 1, got {x}"),
                    ))
                }
            };
            events.push(ScheduledEvent {
                time,
                node,
                kind: EventKind::Measure { forced },
            });
        }
        // Stable: pulses before measurements at equal times, each in config order.
        events.sort_by(|a, b| a.time.total_cmp(&b.time));

        let sample_times = match &self.samples {
            None => Vec::new(),
            Some(grid) => {
                let start = time_ref("samples.t_start".into(), &grid.t_start)?;
                let end = time_ref("samples.t_end".into(), &grid.t_end)?;
                if end < start {
                    return Err(CliError::input("samples.t_end", "t_end is before t_start"));
                }
                match grid.steps {
                    0 => Vec::new(),
                    1 => vec![start],
                    k => {
                        let dt = (end - start) / (k - 1) as f64;
                        (0..k)
                            .map(|i| {
                                if i == k - 1 {
                                    end
                                } else {
                                    start + dt * i as f64
                                }
                            })
                            .collect()
                    }
                }
            }
        };

        let mut targets = Vec::new();
        for (i, &which) in self.outputs.fidelity.iter().enumerate() {
            let leaves = network.leaves();
            let target = match which {
                FidelityTarget::W0 => w_target(leaves, WVariant::Zero),
                FidelityTarget::WPlus => w_target(leaves, WVariant::Plus),
                FidelityTarget::WMinus => w_target(leaves, WVariant::Minus),
                FidelityTarget::Distributed => distributed_target(&network),
            }
            .map_err(|e| CliError::input(format!("outputs.fidelity[{i}]"), e))?;
            targets.push((which, target));
        }

        Ok(Experiment {
            rule,
            network,
            initial,
            schedule: ExperimentSchedule {
                events,
                sample_times,
                seed: self.seed,
            },
            outputs: self.outputs.clone(),
            targets,
        })
    }
}
