//! Single-excitation Hamiltonian and exact propagation.
//!
//! In the site basis the XY Hamiltonian restricted to one flipped spin is a
//! real symmetric matrix: couplings on the tree edges, on-site energies on
//! the diagonal. The hopping element between neighbours is the edge coupling
//! itself, so Christandl couplings give arrival at `pi/(2 alpha)`.

use num_complex::Complex64;

use crate::dynamics::WaveFunction;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::topology::SpinNetwork;

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianBlock {
    dim: usize,
    entries: Vec<f64>,
}

impl HamiltonianBlock {
    pub fn from_dense(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(HamiltonianBlock { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn apply(&self, psi: &WaveFunction) -> Result<Vec<Complex64>> {
        check_dim(self.dim, psi.len())?;
        let a = psi.amplitudes();
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(a).map(|(&h, &x)| x * h).sum())
            .collect())
    }

    /// `||H psi||`; zero exactly for dark states.
    pub fn residual_norm(&self, psi: &WaveFunction) -> Result<f64> {
        Ok(self
            .apply(psi)?
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    fn max_asymmetry(&self) -> Option<(usize, usize, f64)> {
        let scale = self.entries.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut worst = None;
        for r in 0..self.dim {
            for c in r + 1..self.dim {
                let gap = (self.get(r, c) - self.get(c, r)).abs();
                if (gap > SYMMETRY_TOL * scale || gap.is_nan())
                    && worst.is_none_or(|(_, _, g)| gap > g)
                {
                    worst = Some((r, c, gap));
                }
            }
        }
        worst
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

pub fn build_block(network: &SpinNetwork) -> Result<HamiltonianBlock> {
    let n = network.node_count();
    let mut entries = vec![0.0; n * n];
    for (k, e) in network.onsite_energy().iter().enumerate() {
        entries[k * n + k] = *e;
    }
    for edge in network.edges() {
        let j = edge.coupling.ok_or(Error::IncompleteNetwork {
            parent: edge.parent.0,
            child: edge.child.0,
        })?;
        let (a, b) = (edge.parent.0, edge.child.0);
        entries[a * n + b] = j;
        entries[b * n + a] = j;
    }
    Ok(HamiltonianBlock { dim: n, entries })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a block.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    /// Row-major; column `j` is the eigenvector of `eigenvalues[j]`.
    vectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `k` of eigenvector `j`.
    pub fn vector_component(&self, k: usize, j: usize) -> f64 {
        self.vectors[k * self.dim + j]
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|k| self.vector_component(k, j)).collect()
    }

    /// Coefficients of `psi` in the eigenbasis.
    pub fn modal_coefficients(&self, psi: &WaveFunction) -> Result<Vec<Complex64>> {
        check_dim(self.dim, psi.len())?;
        let a = psi.amplitudes();
        Ok((0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .map(|k| a[k] * self.vector_component(k, j))
                    .sum()
            })
            .collect())
    }

    /// Site amplitudes at time `t` from precomputed modal coefficients.
    pub fn synthesize(&self, modal: &[Complex64], t: f64) -> Vec<Complex64> {
        let phased: Vec<Complex64> = modal
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, &lambda)| c * Complex64::from_polar(1.0, -lambda * t))
            .collect();
        self.vectors
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(&phased).map(|(&v, &c)| c * v).sum())
            .collect()
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Eigenvalues come out ascending; each eigenvector is signed so its first
/// component of largest magnitude is positive, which makes the output a
/// deterministic function of the input.
pub fn spectral_decompose(h: &HamiltonianBlock) -> Result<SpectralDecomposition> {
    if let Some((row, col, gap)) = h.max_asymmetry() {
        return Err(Error::SymmetryViolation { row, col, gap });
    }
    let n = h.dim;
    // Symmetric part.
    let mut a: Vec<f64> = (0..n * n)
        .map(|idx| {
            let (r, c) = (idx / n, idx % n);
            0.5 * (h.get(r, c) + h.get(c, r))
        })
        .collect();
    let mut v = vec![0.0; n * n];
    for k in 0..n {
        v[k * n + k] = 1.0;
    }

    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&j| a[j * n + j]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        let pivot = (0..n)
            .map(|k| v[k * n + src])
            .fold((0.0f64, 0.0f64), |(best, val), x| {
                if x.abs() > best + 1e-12 {
                    (x.abs(), x)
                } else {
                    (best, val)
                }
            })
            .1;
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for k in 0..n {
            vectors[k * n + dst] = sign * v[k * n + src];
        }
    }
    Ok(SpectralDecomposition {
        dim: n,
        eigenvalues,
        vectors,
    })
}

/// `exp(-i H t) psi0` with `hbar = 1`.
pub fn evolve(decomp: &SpectralDecomposition, psi0: &WaveFunction, t: f64) -> Result<WaveFunction> {
    check_dim(decomp.dim, psi0.len())?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let modal = decomp.modal_coefficients(psi0)?;
    Ok(WaveFunction::from_raw(decomp.synthesize(&modal, t)))
}

/// Evolves one initial state to many times, sharing the modal projection.
pub fn evolve_many(
    decomp: &SpectralDecomposition,
    psi0: &WaveFunction,
    times: &[f64],
    mode: ExecMode,
) -> Result<Vec<WaveFunction>> {
    let modal = decomp.modal_coefficients(psi0)?;
    Ok(map_indexed(mode, times.len(), |i| {
        if times[i] == 0.0 {
            psi0.clone()
        } else {
            WaveFunction::from_raw(decomp.synthesize(&modal, times[i]))
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::{assign_couplings, CouplingRule};
    use crate::topology::{build_star, build_tree, BranchSpec, NodeId};
    use std::f64::consts::FRAC_PI_2;

    fn chain(n: usize, alpha: f64) -> SpinNetwork {
        assign_couplings(
            &build_tree(&BranchSpec::segment(n)).unwrap(),
            &CouplingRule::new(alpha).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn three_site_block() {
        let h = build_block(&chain(3, 1.0)).unwrap();
        let r2 = 2f64.sqrt();
        let expect = [0.0, r2, 0.0, r2, 0.0, r2, 0.0, r2, 0.0];
        for (x, e) in h.entries().iter().zip(expect) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn single_node_block() {
        let h = build_block(&build_tree(&BranchSpec::segment(1)).unwrap()).unwrap();
        assert_eq!(h.entries(), &[0.0]);
    }

    #[test]
    fn fig1_block() {
        let net = assign_couplings(
            &build_star(2, 3, 1).unwrap(),
            &CouplingRule::new(1.0).unwrap(),
        )
        .unwrap();
        let h = build_block(&net).unwrap();
        let j = (2.0f64 / 3.0).sqrt();
        for r in 0..5 {
            for c in 0..5 {
                let e = match (r.min(c), r.max(c)) {
                    (0, 1) => 2f64.sqrt(),
                    (1, 2..=4) => j,
                    _ => 0.0,
                };
                assert!((h.get(r, c) - e).abs() < 1e-15, "({r},{c})");
            }
        }
    }

    #[test]
    fn missing_coupling() {
        let net = build_star(1, 2, 1).unwrap();
        assert!(matches!(
            build_block(&net),
            Err(Error::IncompleteNetwork { .. })
        ));
    }

    #[test]
    fn asymmetric_rejected() {
        let h = HamiltonianBlock::from_dense(2, vec![0.0, 1.0, 0.5, 0.0]).unwrap();
        assert!(matches!(
            spectral_decompose(&h),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn two_site_spectrum() {
        let h = HamiltonianBlock::from_dense(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let d = spectral_decompose(&h).unwrap();
        assert!((d.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues()[1] - 1.0).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        let v0 = d.eigenvector(0);
        let v1 = d.eigenvector(1);
        assert!((v0[0].abs() - s).abs() < 1e-15 && (v0[0] + v0[1]).abs() < 1e-15);
        assert!((v1[0] - s).abs() < 1e-15 && (v1[1] - s).abs() < 1e-15);
    }

    #[test]
    fn three_site_spectrum() {
        // det(H - x) = -x^3 + 4x for the sqrt(2) chain: roots -2, 0, 2.
        let d = spectral_decompose(&build_block(&chain(3, 1.0)).unwrap()).unwrap();
        for (x, e) in d.eigenvalues().iter().zip([-2.0, 0.0, 2.0]) {
            assert!((x - e).abs() < 1e-14);
        }
    }

    #[test]
    fn three_site_mirror() {
        let net = chain(3, 1.0);
        let d = spectral_decompose(&build_block(&net).unwrap()).unwrap();
        let psi = evolve(&d, &WaveFunction::basis(3, NodeId(0)).unwrap(), FRAC_PI_2).unwrap();
        let a = psi.amplitudes();
        assert!((a[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!(a[0].norm() < 1e-9 && a[1].norm() < 1e-9);
    }

    #[test]
    fn zero_time_is_identity() {
        let d = spectral_decompose(&build_block(&chain(4, 1.0)).unwrap()).unwrap();
        let psi = WaveFunction::basis(4, NodeId(1)).unwrap();
        assert_eq!(evolve(&d, &psi, 0.0).unwrap(), psi);
    }

    #[test]
    fn dimension_checked() {
        let d = spectral_decompose(&build_block(&chain(4, 1.0)).unwrap()).unwrap();
        let psi = WaveFunction::basis(3, NodeId(0)).unwrap();
        assert!(matches!(
            evolve(&d, &psi, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evolve_many_matches_evolve() {
        let d = spectral_decompose(&build_block(&chain(5, 0.7)).unwrap()).unwrap();
        let psi = WaveFunction::basis(5, NodeId(0)).unwrap();
        let times: Vec<f64> = (0..40).map(|k| 0.13 * k as f64).collect();
        for mode in [ExecMode::Sequential, ExecMode::Parallel] {
            let batch = evolve_many(&d, &psi, &times, mode).unwrap();
            for (t, got) in times.iter().zip(&batch) {
                assert_eq!(got, &evolve(&d, &psi, *t).unwrap());
            }
        }
    }
}
