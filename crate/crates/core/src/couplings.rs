//! Perfect-state-transfer couplings.
//!
//! A chain of `N` sites transfers an excitation end to end at `t = pi/(2 alpha)`
//! when `J(i, i+1) = alpha * sqrt(i (N - i))`. On a tree each column maps onto
//! one site of that chain, so every edge leaving a hub with `p` children
//! carries the chain value divided by `sqrt(p)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::topology::SpinNetwork;

/// Overall coupling scale `alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingRule {
    alpha: f64,
}

impl CouplingRule {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(CouplingRule { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Arrival time of the excitation at the far column.
    pub fn transfer_time(&self) -> f64 {
        FRAC_PI_2 / self.alpha
    }

    /// Period after which the arrival state reappears.
    pub fn revival_period(&self) -> f64 {
        std::f64::consts::PI / self.alpha
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidScale(alpha))
    }
}

/// The `N - 1` chain couplings `alpha * sqrt(i (N - i))`, `i = 1..N-1`.
pub fn christandl_couplings(n: usize, alpha: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidLength(n));
    }
    check_alpha(alpha)?;
    Ok((1..n)
        .map(|i| alpha * ((i * (n - i)) as f64).sqrt())
        .collect())
}

pub fn transfer_time(alpha: f64) -> Result<f64> {
    CouplingRule::new(alpha).map(|r| r.transfer_time())
}

/// Returns a copy of `network` with every edge coupling set for perfect
/// transfer from the input to all leaves.
pub fn assign_couplings(network: &SpinNetwork, rule: &CouplingRule) -> Result<SpinNetwork> {
    let n_eq = network.equivalent_length()?;
    let mut out = network.clone();
    if n_eq < 2 {
        return Ok(out);
    }
    let chain = christandl_couplings(n_eq, rule.alpha)?;
    let values: Vec<f64> = network
        .edges()
        .iter()
        .map(|e| {
            let fan_out = network.children(e.parent).len() as f64;
            chain[network.column(e.parent)] / fan_out.sqrt()
        })
        .collect();
    out.set_couplings(values);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_star, build_tree, BranchSpec, NodeId};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn chain_values() {
        let j = christandl_couplings(3, 1.0).unwrap();
        assert!(close(j[0], 2f64.sqrt()) && close(j[1], 2f64.sqrt()));
        assert_eq!(christandl_couplings(2, 2.0).unwrap(), vec![2.0]);
        let j = christandl_couplings(5, 1.0).unwrap();
        let six = 6f64.sqrt();
        assert_eq!(j.len(), 4);
        assert!(close(j[0], 2.0) && close(j[1], six) && close(j[2], six) && close(j[3], 2.0));
    }

    #[test]
    fn chain_errors() {
        assert_eq!(christandl_couplings(1, 1.0), Err(Error::InvalidLength(1)));
        assert_eq!(christandl_couplings(4, 0.0), Err(Error::InvalidScale(0.0)));
        assert!(christandl_couplings(4, f64::NAN).is_err());
    }

    #[test]
    fn timing() {
        assert!(close(transfer_time(1.0).unwrap(), FRAC_PI_2));
        assert!(close(transfer_time(2.0).unwrap(), FRAC_PI_2 / 2.0));
        assert_eq!(transfer_time(0.0), Err(Error::InvalidScale(0.0)));
    }

    #[test]
    fn fig1_couplings() {
        let net = assign_couplings(
            &build_star(2, 3, 1).unwrap(),
            &CouplingRule::new(1.0).unwrap(),
        )
        .unwrap();
        let e = net.edges();
        assert_eq!((e[0].parent, e[0].child), (NodeId(0), NodeId(1)));
        assert!(close(e[0].coupling.unwrap(), 2f64.sqrt()));
        for edge in &e[1..] {
            assert_eq!(edge.parent, NodeId(1));
            assert!(close(edge.coupling.unwrap(), (2.0f64 / 3.0).sqrt()));
        }
    }

    #[test]
    fn chain_network_matches_chain_rule() {
        let rule = CouplingRule::new(1.3).unwrap();
        let net = assign_couplings(&build_tree(&BranchSpec::segment(6)).unwrap(), &rule).unwrap();
        let got: Vec<f64> = net.edges().iter().map(|e| e.coupling.unwrap()).collect();
        assert_eq!(got, christandl_couplings(6, 1.3).unwrap());
    }

    #[test]
    fn single_node_needs_no_couplings() {
        let net = build_tree(&BranchSpec::segment(1)).unwrap();
        let out = assign_couplings(&net, &CouplingRule::new(1.0).unwrap()).unwrap();
        assert!(out.edges().is_empty() && out.has_couplings());
    }
}
