use num_complex::Complex64;

use super::liouvillian::Liouvillian;
use super::matrix::{ComplexMatrix, Lu};
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const EIGEN_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Relative singular-value threshold for a second zero mode of `L`.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Pivot ratio below which the replaced system is suspected singular and the
/// singular-value test is run.
const PIVOT_SCREEN: f64 = 1e-6;

/// A validated density matrix: unit trace, Hermitian, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::NumericalFailure(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NumericalFailure(format!(
                "density matrix not Hermitian (deviation {dev:e})"
            )));
        }
        if !matrix.is_psd(EIGEN_TOL) {
            return Err(Error::NumericalFailure(
                "density matrix has an eigenvalue below -1e-10".into(),
            ));
        }
        Ok(Self(matrix))
    }

    /// Pure state `|i⟩⟨i|` of the computational basis.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        Self(ComplexMatrix::unit(dim, i, i))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Diagonal entries (real parts).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigenvalues()[0]
    }
}

/// Solution of `L ρ = 0` together with the raw solver residual.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// `‖L vec(ρ_raw)‖∞` of the unsymmetrized solution.
    pub residual: f64,
}

/// Unique stationary state of a trace-preserving Lindblad generator.
///
/// One population row of `L` (the one with the smallest ∞-norm) is replaced
/// by the trace functional and the system is solved by LU with partial
/// pivoting. A second zero singular value of `L` is reported as
/// [`Error::DegenerateSteadyState`].
pub fn steady_state(l: &Liouvillian) -> Result<SteadyState> {
    let n = l.hilbert_dim();
    let big = n * n;
    let m = l.matrix();

    let replaced = (0..n)
        .map(|i| i + i * n)
        .map(|row| {
            let norm: f64 = (0..big).map(|c| m[(row, c)].norm()).sum();
            (row, norm)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(row, _)| row)
        .ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;

    let mut system: Vec<Complex64> = m.as_slice().to_vec();
    for c in 0..big {
        system[replaced * big + c] = Complex64::new(0.0, 0.0);
    }
    for i in 0..n {
        system[replaced * big + i + i * n] = Complex64::new(1.0, 0.0);
    }
    let lu = Lu::factor(system, big);
    if lu.pivot_ratio() < PIVOT_SCREEN && is_degenerate(l) {
        return Err(Error::DegenerateSteadyState);
    }

    let mut rhs = vec![Complex64::new(0.0, 0.0); big];
    rhs[replaced] = Complex64::new(1.0, 0.0);
    let raw = lu.solve(&rhs).ok_or_else(|| {
        Error::NumericalFailure("steady-state system is singular".into())
    })?;
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalFailure(
            "steady-state solve produced non-finite entries".into(),
        ));
    }

    let residual = m.apply(&raw)?.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = generator_norm(m).max(1.0);
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::NumericalFailure(format!(
            "steady-state residual {residual:e} exceeds tolerance"
        )));
    }

    let raw = ComplexMatrix::unvectorize(&raw)?;
    let herm = (&raw + &raw.adjoint()).scale_real(0.5);
    let tr = herm.trace().re;
    if !(tr.abs() > 0.0) {
        return Err(Error::NumericalFailure("steady state has zero trace".into()));
    }
    let rho = DensityMatrix::new(herm.scale_real(1.0 / tr))?;
    Ok(SteadyState { rho, residual })
}

/// True when the two smallest singular values of `L` are both below
/// `DEGENERACY_TOL` times the largest.
pub fn is_degenerate(l: &Liouvillian) -> bool {
    let sv = l.matrix().singular_values();
    let largest = sv[0];
    if largest == 0.0 {
        return true;
    }
    sv.len() < 2 || sv[sv.len() - 2] < DEGENERACY_TOL * largest
}

fn generator_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    (0..n)
        .map(|r| (0..n).map(|c| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `Tr(obs·ρ)`.
pub fn expectation(obs: &ComplexMatrix, rho: &DensityMatrix) -> Result<Complex64> {
    obs.ensure_same_dim(rho.matrix())?;
    let n = obs.dim();
    let r = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += obs[(i, k)] * r[(k, i)];
        }
    }
    Ok(acc)
}
