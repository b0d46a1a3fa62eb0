use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// `D[X]ρ = XρX† − ½{X†X, ρ}`.
pub fn dissipator_apply(x: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.ensure_same_dim(rho)?;
    let xd = x.adjoint();
    let xdx = &xd * x;
    let jump = &(&(x * rho) * &xd);
    Ok(jump - &xdx.anticommutator(rho).scale_real(0.5))
}

/// Lindblad generator acting on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    hilbert_dim: usize,
    generator: ComplexMatrix,
}

impl Liouvillian {
    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// The `dim² × dim²` superoperator matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.generator
    }

    /// `L ρ` as a matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.hilbert_dim {
            return Err(Error::DimensionMismatch {
                expected: self.hilbert_dim,
                found: rho.dim(),
            });
        }
        ComplexMatrix::unvectorize(&self.generator.apply(&rho.vectorize())?)
    }

    /// Largest entry of `t·L`, where `t` is the row vector of the trace
    /// functional. Zero for a trace-preserving generator.
    pub fn trace_residual(&self) -> f64 {
        let n = self.hilbert_dim;
        let big = n * n;
        let m = &self.generator;
        (0..big)
            .map(|col| {
                (0..n)
                    .map(|i| m[(i + i * n, col)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Assembles `L vec(ρ) = vec(−i[H, ρ] + Σ rate·D[X]ρ)`.
///
/// With `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)` the entry for output `(i, j)` and input
/// `(k, l)` is `−i(H_ik δ_jl − δ_ik H_lj)` plus, per channel,
/// `rate·(X_ik conj(X_jl) − ½ (X†X)_ik δ_jl − ½ δ_ik (X†X)_lj)`.
pub fn build_liouvillian(
    hamiltonian: &ComplexMatrix,
    channels: &[(f64, ComplexMatrix)],
) -> Result<Liouvillian> {
    let n = hamiltonian.dim();
    for (rate, op) in channels {
        if !(*rate >= 0.0) {
            return Err(Error::NegativeRate(*rate));
        }
        hamiltonian.ensure_same_dim(op)?;
    }

    let big = n * n;
    let mut gen = ComplexMatrix::zeros(big);
    let minus_i = Complex64::new(0.0, -1.0);
    // row index of vec entry (i, j) is i + j·n
    for j in 0..n {
        for i in 0..n {
            let row = i + j * n;
            for k in 0..n {
                gen[(row, k + j * n)] += minus_i * hamiltonian[(i, k)];
            }
            for l in 0..n {
                gen[(row, i + l * n)] -= minus_i * hamiltonian[(l, j)];
            }
        }
    }

    for (rate, x) in channels {
        if *rate == 0.0 {
            continue;
        }
        let xdx = &x.adjoint() * x;
        let half = 0.5 * rate;
        for j in 0..n {
            for i in 0..n {
                let row = i + j * n;
                for l in 0..n {
                    let xjl = x[(j, l)].conj();
                    if xjl != Complex64::new(0.0, 0.0) {
                        for k in 0..n {
                            gen[(row, k + l * n)] += *rate * x[(i, k)] * xjl;
                        }
                    }
                }
                for k in 0..n {
                    gen[(row, k + j * n)] -= half * xdx[(i, k)];
                }
                for l in 0..n {
                    gen[(row, i + l * n)] -= half * xdx[(l, j)];
                }
            }
        }
    }

    Ok(Liouvillian {
        hilbert_dim: n,
        generator: gen,
    })
}
