//! Reference computations that share no code with the spectral path.
//!
//! These are slow and only meant for cross-checking: a dense
//! matrix-exponential propagator and a full two-qubit Wootters concurrence.

use nalgebra::{Complex, Matrix4};
use num_complex::Complex64;

use crate::hamiltonian::HamiltonianBlock;

type Dense = Vec<Complex64>;

fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Dense {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// `exp(-i H t)` by scaling and squaring with a degree-24 Taylor series.
pub fn expm_propagator(h: &HamiltonianBlock, t: f64) -> Dense {
    let n = h.dim();
    let a: Dense = h
        .entries()
        .iter()
        .map(|&x| Complex64::new(0.0, -x * t))
        .collect();
    let norm = (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.25 {
        squarings += 1;
    }
    let scale = 2f64.powi(-(squarings as i32));
    let a: Dense = a.into_iter().map(|x| x * scale).collect();

    let mut result = vec![Complex64::new(0.0, 0.0); n * n];
    let mut term = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        result[i * n + i] = Complex64::new(1.0, 0.0);
        term[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for k in 1..=24 {
        term = matmul(&term, &a, n)
            .into_iter()
            .map(|x| x / k as f64)
            .collect();
        for (r, x) in result.iter_mut().zip(&term) {
            *r += x;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result, n);
    }
    result
}

/// Propagates `psi0` with the dense matrix exponential.
pub fn expm_evolve(h: &HamiltonianBlock, psi0: &[Complex64], t: f64) -> Dense {
    let n = h.dim();
    let u = expm_propagator(h, t);
    (0..n)
        .map(|i| (0..n).map(|j| u[i * n + j] * psi0[j]).sum())
        .collect()
}

/// Wootters concurrence of sites `i`, `j` from the reduced density matrix.
///
/// Builds the 4x4 two-qubit state of a single-excitation pure state in the
/// basis `|00>, |01>, |10>, |11>` (first qubit = site `i`), forms
/// `rho (Y x Y) rho* (Y x Y)` and takes its eigenvalues via a complex Schur
/// decomposition.
pub fn wootters_concurrence(psi: &[Complex64], i: usize, j: usize) -> f64 {
    let c = |z: Complex64| Complex::new(z.re, z.im);
    let norm: f64 = psi.iter().map(Complex64::norm_sqr).sum();
    let rest: f64 = psi
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        / norm;
    let scale = norm.sqrt().recip();
    // |phi> = a_j |01> + a_i |10>
    let phi = [
        Complex::new(0.0, 0.0),
        c(psi[j] * scale),
        c(psi[i] * scale),
        Complex::new(0.0, 0.0),
    ];
    let mut rho = Matrix4::<Complex<f64>>::from_fn(|r, s| phi[r] * phi[s].conj());
    rho[(0, 0)] += Complex::new(rest, 0.0);

    // Y x Y has entries -1 on the anti-diagonal corners of |00>,|11> and +1
    // between |01>,|10>.
    let mut yy = Matrix4::<Complex<f64>>::zeros();
    yy[(0, 3)] = Complex::new(-1.0, 0.0);
    yy[(3, 0)] = Complex::new(-1.0, 0.0);
    yy[(1, 2)] = Complex::new(1.0, 0.0);
    yy[(2, 1)] = Complex::new(1.0, 0.0);
    let rho_tilde = yy * rho.conjugate() * yy;
    let r = rho * rho_tilde;

    let eig = r
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let mut roots: Vec<f64> = eig
        .iter()
        .map(|z| {
            let x = z.re;
            if x.abs() < 1e-13 {
                0.0
            } else {
                x.max(0.0).sqrt()
            }
        })
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}
