//! Single-excitation dynamics on branched spin chains.
//!
//! A spin tree with engineered XY couplings carries one flipped spin from its
//! input to all of its outputs at the same instant, leaving a W-type state
//! shared between the outputs. This crate builds such trees, evolves the
//! excitation exactly in the one-excitation sector, applies instantaneous
//! phase pulses and projective measurements, and measures what comes out.
//!
//! ```
//! use spintree::prelude::*;
//!
//! let net = assign_couplings(&build_star(2, 3, 1)?, &CouplingRule::new(1.0)?)?;
//! let decomp = spectral_decompose(&build_block(&net)?)?;
//! let psi = evolve(&decomp, &basis_state(&net, net.input())?, transfer_time(1.0)?)?;
//! let w0 = w_target(net.leaves(), WVariant::Zero)?;
//! assert!(fidelity(&psi, &w0) > 1.0 - 1e-9);
//! # Ok::<(), spintree::Error>(())
//! ```

pub mod analysis;
pub mod couplings;
pub mod dynamics;
mod error;
pub mod exec;
pub mod hamiltonian;
pub mod oracle;
pub mod topology;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::{
        column_project, distributed_target, fidelity, fidelity_peak, fidelity_series,
        pairwise_concurrence, site_populations, stationarity_drift, stationarity_drift_with,
        w_target, TargetState, WVariant,
    };
    pub use crate::couplings::{
        assign_couplings, christandl_couplings, transfer_time, CouplingRule,
    };
    pub use crate::dynamics::{
        apply_phase, basis_state, freeze_phases, measure_site, measure_site_with, run_experiment,
        run_schedule, singlet_protocol, tripod_network, EventKind, ExcitationState,
        ExperimentSchedule, FreezeScheme, MeasurementRecord, Outcome, PulseEvent, Sample,
        ScheduledEvent, SingletReport, TimeSeries, WaveFunction,
    };
    pub use crate::exec::ExecMode;
    pub use crate::hamiltonian::{
        build_block, evolve, evolve_many, spectral_decompose, HamiltonianBlock,
        SpectralDecomposition,
    };
    pub use crate::topology::{
        build_star, build_tree, build_tree_with, leaf_weights, BranchSpec, DepthPolicy, Edge,
        LeafWeights, NodeId, SpinNetwork,
    };
    pub use crate::{Error, Result};
}
