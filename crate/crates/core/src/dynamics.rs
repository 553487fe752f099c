//! Site-basis states, instantaneous pulses, projective measurements and
//! piecewise-constant experiment schedules.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::couplings::{assign_couplings, CouplingRule};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::hamiltonian::{build_block, spectral_decompose, SpectralDecomposition};
use crate::topology::{build_star, NodeId, SpinNetwork};

const NORM_TOL: f64 = 1e-12;
const IMPOSSIBLE_BRANCH: f64 = 1e-15;

/// Amplitudes of a single excitation over the sites of a network.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (n2 - 1.0).abs() > NORM_TOL || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        Ok(WaveFunction { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::NotNormalized(n2));
        }
        let scale = n2.sqrt().recip();
        Ok(WaveFunction {
            amplitudes: amplitudes.into_iter().map(|a| a * scale).collect(),
        })
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        WaveFunction { amplitudes }
    }

    pub fn basis(dim: usize, node: NodeId) -> Result<Self> {
        if node.0 >= dim {
            return Err(Error::InvalidNode {
                node: node.0,
                node_count: dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[node.0] = Complex64::new(1.0, 0.0);
        Ok(WaveFunction { amplitudes })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, node: NodeId) -> Complex64 {
        self.amplitudes[node.0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node.0 < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: node.0,
                node_count: self.len(),
            })
        }
    }
}

/// The excitation localized on `node`.
pub fn basis_state(network: &SpinNetwork, node: NodeId) -> Result<WaveFunction> {
    WaveFunction::basis(network.node_count(), node)
}

/// Multiplies the amplitude on `node` by `exp(i theta)`.
pub fn apply_phase(psi: &WaveFunction, node: NodeId, theta: f64) -> Result<WaveFunction> {
    psi.check_node(node)?;
    let mut out = psi.clone();
    if theta != 0.0 {
        out.amplitudes[node.0] *= Complex64::from_polar(1.0, theta);
    }
    Ok(out)
}

/// Phase patterns whose unit phasors sum to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreezeScheme {
    /// `theta_k = 2 pi k / p`.
    RootsOfUnity,
    /// `pi` on the first `p/2` outputs; even `p` only.
    PiOnHalf,
}

pub fn freeze_phases(p: usize, scheme: FreezeScheme) -> Result<Vec<f64>> {
    if p < 2 {
        return Err(Error::InvalidBranching(p));
    }
    match scheme {
        FreezeScheme::RootsOfUnity => Ok((0..p).map(|k| 2.0 * PI * k as f64 / p as f64).collect()),
        FreezeScheme::PiOnHalf if p.is_multiple_of(2) => {
            Ok((0..p).map(|k| if k < p / 2 { PI } else { 0.0 }).collect())
        }
        FreezeScheme::PiOnHalf => Err(Error::Parity(p)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    /// Spin found in `|0>`; the excitation is elsewhere.
    Zero,
    /// Spin found flipped; the excitation is consumed.
    One,
}

impl Outcome {
    pub fn bit(self) -> u8 {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
        }
    }
}

/// The network after a measurement branch.
#[derive(Clone, Debug, PartialEq)]
pub enum ExcitationState {
    Present(WaveFunction),
    /// The excitation was detected and removed; the rest of the network is
    /// in its ground state and no longer evolves.
    Consumed,
}

impl ExcitationState {
    pub fn wave_function(&self) -> Option<&WaveFunction> {
        match self {
            ExcitationState::Present(psi) => Some(psi),
            ExcitationState::Consumed => None,
        }
    }

    pub fn is_consumed(&self) -> bool {
        matches!(self, ExcitationState::Consumed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub node: NodeId,
    pub outcome: Outcome,
    /// Probability of the outcome that occurred.
    pub probability: f64,
    /// Probability of finding the excitation on `node`.
    pub p_one: f64,
    pub post_state: ExcitationState,
}

/// Computational-basis measurement of one spin, seeded.
pub fn measure_site(
    psi: &WaveFunction,
    node: NodeId,
    forced: Option<Outcome>,
    seed: u64,
) -> Result<MeasurementRecord> {
    measure_site_with(psi, node, forced, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Computational-basis measurement drawing from a caller-owned generator.
///
/// Forced outcomes do not consume randomness.
pub fn measure_site_with<R: Rng + ?Sized>(
    psi: &WaveFunction,
    node: NodeId,
    forced: Option<Outcome>,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    psi.check_node(node)?;
    let total = psi.norm_sqr();
    let on_site = psi.amplitudes[node.0].norm_sqr();
    let p_one = on_site / total;
    let p_zero = (total - on_site) / total;

    let outcome = match forced {
        Some(o) => o,
        None => {
            if rng.random::<f64>() < p_one {
                Outcome::One
            } else {
                Outcome::Zero
            }
        }
    };
    let probability = match outcome {
        Outcome::One => p_one,
        Outcome::Zero => p_zero,
    };
    if probability < IMPOSSIBLE_BRANCH {
        return Err(Error::ImpossibleBranch(probability));
    }
    let post_state = match outcome {
        Outcome::One => ExcitationState::Consumed,
        Outcome::Zero => {
            let mut amps = psi.amplitudes.clone();
            amps[node.0] = Complex64::new(0.0, 0.0);
            ExcitationState::Present(WaveFunction::normalized(amps)?)
        }
    };
    Ok(MeasurementRecord {
        node,
        outcome,
        probability,
        p_one,
        post_state,
    })
}

/// Instantaneous phase rotation of one spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseEvent {
    pub time: f64,
    pub node: NodeId,
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EventKind {
    Pulse { phase: f64 },
    Measure { forced: Option<Outcome> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledEvent {
    pub time: f64,
    pub node: NodeId,
    pub kind: EventKind,
}

impl From<PulseEvent> for ScheduledEvent {
    fn from(p: PulseEvent) -> Self {
        ScheduledEvent {
            time: p.time,
            node: p.node,
            kind: EventKind::Pulse { phase: p.phase },
        }
    }
}

/// Instantaneous events plus the times at which to record the state.
///
/// Events at the same timestamp apply in list order, and before any sample
/// taken at that timestamp.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentSchedule {
    pub events: Vec<ScheduledEvent>,
    pub sample_times: Vec<f64>,
    pub seed: u64,
}

impl ExperimentSchedule {
    fn validate(&self, node_count: usize) -> Result<()> {
        let times = self
            .events
            .iter()
            .map(|e| e.time)
            .chain(self.sample_times.iter().copied());
        for t in times {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidTime(t));
            }
        }
        if self.events.windows(2).any(|w| w[1].time < w[0].time) {
            return Err(Error::UnsortedEvents);
        }
        if self.sample_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::UnsortedSamples);
        }
        for e in &self.events {
            if e.node.0 >= node_count {
                return Err(Error::InvalidNode {
                    node: e.node.0,
                    node_count,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub state: ExcitationState,
}

/// Recorded samples of a schedule run, in time order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
    pub measurements: Vec<MeasurementRecord>,
}

impl TimeSeries {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.time).collect()
    }

    /// Site populations per sample; all zero once the excitation is consumed.
    pub fn populations(&self, dim: usize) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| match &s.state {
                ExcitationState::Present(psi) => psi.populations(),
                ExcitationState::Consumed => vec![0.0; dim],
            })
            .collect()
    }
}

/// Free evolution between pulses, sampled at `sample_times`.
pub fn run_schedule(
    network: &SpinNetwork,
    decomp: &SpectralDecomposition,
    psi0: &WaveFunction,
    events: &[PulseEvent],
    sample_times: &[f64],
) -> Result<TimeSeries> {
    let schedule = ExperimentSchedule {
        events: events.iter().copied().map(ScheduledEvent::from).collect(),
        sample_times: sample_times.to_vec(),
        seed: 0,
    };
    run_experiment(network, decomp, psi0, &schedule, ExecMode::default())
}

/// Runs a schedule of pulses and measurements.
///
/// Samples between two events are independent of each other and are
/// evaluated as one batch from the state at the start of the interval.
pub fn run_experiment(
    network: &SpinNetwork,
    decomp: &SpectralDecomposition,
    psi0: &WaveFunction,
    schedule: &ExperimentSchedule,
    mode: ExecMode,
) -> Result<TimeSeries> {
    let n = network.node_count();
    if psi0.len() != n || decomp.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: if psi0.len() != n {
                psi0.len()
            } else {
                decomp.dim()
            },
        });
    }
    schedule.validate(n)?;

    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let mut series = TimeSeries::default();
    let mut state = ExcitationState::Present(psi0.clone());
    let mut t_now = 0.0;
    let mut next_sample = 0;
    let samples = &schedule.sample_times;

    let flush = |until: Option<f64>,
                 state: &ExcitationState,
                 t_now: f64,
                 next: &mut usize|
     -> Result<Vec<Sample>> {
        let end = match until {
            Some(t) => samples[*next..].partition_point(|&s| s < t) + *next,
            None => samples.len(),
        };
        let batch = &samples[*next..end];
        *next = end;
        Ok(match state {
            ExcitationState::Present(psi) => {
                let offsets: Vec<f64> = batch.iter().map(|t| t - t_now).collect();
                crate::hamiltonian::evolve_many(decomp, psi, &offsets, mode)?
                    .into_iter()
                    .zip(batch)
                    .map(|(psi, &time)| Sample {
                        time,
                        state: ExcitationState::Present(psi),
                    })
                    .collect()
            }
            ExcitationState::Consumed => batch
                .iter()
                .map(|&time| Sample {
                    time,
                    state: ExcitationState::Consumed,
                })
                .collect(),
        })
    };

    for event in &schedule.events {
        series
            .samples
            .extend(flush(Some(event.time), &state, t_now, &mut next_sample)?);
        let ExcitationState::Present(psi) = &state else {
            continue;
        };
        let psi = crate::hamiltonian::evolve(decomp, psi, event.time - t_now)?;
        t_now = event.time;
        state = match event.kind {
            EventKind::Pulse { phase } => {
                ExcitationState::Present(apply_phase(&psi, event.node, phase)?)
            }
            EventKind::Measure { forced } => {
                let record = measure_site_with(&psi, event.node, forced, &mut rng)?;
                let post = record.post_state.clone();
                series.measurements.push(record);
                post
            }
        };
    }
    series
        .samples
        .extend(flush(None, &state, t_now, &mut next_sample)?);
    Ok(series)
}

/// The Fig.-1-style five-spin star `(2, 1, 1, 1)` with couplings for `alpha`.
pub fn tripod_network(alpha: f64) -> Result<SpinNetwork> {
    assign_couplings(&build_star(2, 3, 1)?, &CouplingRule::new(alpha)?)
}

/// Result of the W-state singlet preparation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SingletReport {
    pub alpha: f64,
    pub arrival_time: f64,
    pub measured_leaf: NodeId,
    pub outcome: Outcome,
    pub probability: f64,
    /// Leaf that received the `pi` flip (outcome 0 only).
    pub flipped_leaf: Option<NodeId>,
    /// State right after the flip, or `Consumed`.
    pub post_state: ExcitationState,
    /// Population drift over `[t*, t* + 10 pi / alpha]` after the flip.
    pub drift: Option<f64>,
}

/// Drift window after the flip, in units of `pi / alpha`.
pub const SINGLET_DRIFT_PERIODS: f64 = 10.0;
const SINGLET_DRIFT_SAMPLES: usize = 2001;

/// Creates the tripartite W state, measures the last output and, when the
/// excitation is not found there, flips the phase of the last remaining
/// output to leave a singlet on the other two.
pub fn singlet_protocol(alpha: f64, forced: Option<Outcome>, seed: u64) -> Result<SingletReport> {
    let rule = CouplingRule::new(alpha)?;
    let network = tripod_network(alpha)?;
    let decomp = spectral_decompose(&build_block(&network)?)?;
    let t_star = rule.transfer_time();
    let psi =
        crate::hamiltonian::evolve(&decomp, &basis_state(&network, network.input())?, t_star)?;

    let leaves = network.leaves();
    let measured = leaves[leaves.len() - 1];
    let record = measure_site(&psi, measured, forced, seed)?;

    let (flipped_leaf, post_state, drift) = match &record.post_state {
        ExcitationState::Consumed => (None, ExcitationState::Consumed, None),
        ExcitationState::Present(psi) => {
            let flip = leaves[leaves.len() - 2];
            let singlet = apply_phase(psi, flip, PI)?;
            let drift = crate::analysis::stationarity_drift(
                &decomp,
                &singlet,
                SINGLET_DRIFT_PERIODS * rule.revival_period(),
                SINGLET_DRIFT_SAMPLES,
            )?;
            (Some(flip), ExcitationState::Present(singlet), Some(drift))
        }
    };
    Ok(SingletReport {
        alpha,
        arrival_time: t_star,
        measured_leaf: measured,
        outcome: record.outcome,
        probability: record.probability,
        flipped_leaf,
        post_state,
        drift,
    })
}
