//! Hermitian operators, density matrices, and spectral calculus.
//!
//! The eigensolver is a cyclic Jacobi iteration for complex Hermitian
//! matrices. Dimensions in this crate are tiny (d <= 16), so robustness
//! wins over speed everywhere.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Per-entry tolerance for |A - A†| when accepting a Hermitian operator.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance on |tr(rho) - 1| for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a density matrix may dip this far below zero.
pub const PSD_FLOOR: f64 = -1e-10;
/// Eigenvalues inside [-CLAMP_BAND, CLAMP_BAND] count as numerically zero.
pub const CLAMP_BAND: f64 = 1e-12;
/// Numerically-zero eigenvalues are lifted to this floor before a log.
pub const LOG_FLOOR: f64 = 1e-15;

/// ln(lambda) under the zero-clamp rule: eigenvalues below the PSD floor are
/// rejected, eigenvalues indistinguishable from zero are lifted to
/// `LOG_FLOOR`, everything else logs directly.
pub(crate) fn clamped_ln(lambda: f64) -> Result<f64> {
    if lambda < PSD_FLOOR {
        return Err(Error::FunctionDomain { eigenvalue: lambda });
    }
    if lambda <= CLAMP_BAND {
        Ok(LOG_FLOOR.ln())
    } else {
        Ok(lambda.ln())
    }
}

/// sqrt(lambda) with negatives inside the PSD floor projected to zero.
pub(crate) fn clamped_sqrt(lambda: f64) -> Result<f64> {
    if lambda < PSD_FLOOR {
        return Err(Error::FunctionDomain { eigenvalue: lambda });
    }
    Ok(lambda.max(0.0).sqrt())
}

/// A Hermitian operator with energies in Hz (h = 1, so energy and frequency
/// coincide).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Accepts a matrix within `HERMITICITY_TOL` of its adjoint and stores
    /// its exactly-Hermitian part.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                max_asymmetry: defect,
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::diagonal(values),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// tr(rho · H), real by Hermiticity of both factors.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        rho.matrix().product_trace(&self.matrix).re
    }
}

/// The standard Pauli matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

pub fn pauli(which: PauliAxis) -> HermitianOperator {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    let rows = match which {
        PauliAxis::X => [[z(0.0, 0.0), z(1.0, 0.0)], [z(1.0, 0.0), z(0.0, 0.0)]],
        PauliAxis::Y => [[z(0.0, 0.0), z(0.0, -1.0)], [z(0.0, 1.0), z(0.0, 0.0)]],
        PauliAxis::Z => [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(-1.0, 0.0)]],
    };
    HermitianOperator {
        matrix: ComplexMatrix::from_rows_2x2(rows),
    }
}

/// Eigenvalues (ascending) and a unitary matrix of column eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose column j is the eigenvector of eigenvalue j.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// V diag(values) V† for one explicit value per eigenvalue.
    pub fn recombine(&self, values: &[Complex64]) -> ComplexMatrix {
        assert_eq!(values.len(), self.dim(), "one value per eigenvalue");
        let d = self.dim();
        let v = &self.eigenvectors;
        // W = V diag(values), then W V†.
        let mut w = ComplexMatrix::zeros(d);
        for j in 0..d {
            for i in 0..d {
                w[(i, j)] = v[(i, j)] * values[j];
            }
        }
        w.mul(&v.adjoint())
    }

    /// V diag(f(lambda)) V† for a real-valued spectral map.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.map_eigenvalues_complex(|x| Complex64::new(f(x), 0.0))
    }

    /// V diag(f(lambda)) V† for a complex-valued spectral map.
    pub fn map_eigenvalues_complex(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let values: Vec<Complex64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.recombine(&values)
    }

    /// V† M V: the matrix expressed in this eigenbasis.
    pub fn into_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint().mul(&m.mul(&self.eigenvectors))
    }

    /// V M V†: back from the eigenbasis representation.
    pub fn from_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.mul(&m.mul(&self.eigenvectors.adjoint()))
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_OFF_TOL: f64 = 1e-14;

/// Off-diagonal Frobenius mass sqrt(sum_{i != j} |a_ij|^2).
fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each (p, q) rotation first absorbs the phase of a_pq and then applies the
/// standard real Jacobi rotation, so the update is a single 2×2 unitary.
/// Converges quadratically; the threshold is relative to the Frobenius norm
/// so Hz-scale Hamiltonians behave the same as unit-trace states.
pub fn spectral_decompose(op: &HermitianOperator) -> SpectralDecomposition {
    let d = op.dim();
    let mut a = op.matrix().clone();
    let mut v = ComplexMatrix::identity(d);
    let tol = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&a) <= tol {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let half = Complex64::from_polar(1.0, 0.5 * phase.arg());
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Stable real-Jacobi angle for [[app, r], [r, aqq]].
                let zeta = (aqq - app) / (2.0 * r);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = diag(e^{i phi/2}, e^{-i phi/2}) · [[c, s], [-s, c]]
                let u00 = half * c;
                let u01 = half * s;
                let u10 = -half.conj() * s;
                let u11 = half.conj() * c;

                // A <- U† A U, touching only rows/columns p and q.
                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u00 + akq * u10;
                    a[(k, q)] = akp * u01 + akq * u11;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
                    a[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);

                // V <- V U.
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u00 + vkq * u10;
                    v[(k, q)] = vkp * u01 + vkq * u11;
                }
            }
        }
    }
    debug_assert!(
        off_diagonal_mass(&a) <= 10.0 * tol,
        "Jacobi iteration stalled: off mass {:.3e}",
        off_diagonal_mass(&a)
    );

    // Sort eigenvalues ascending and permute eigenvector columns to match.
    let mut order: Vec<usize> = (0..d).collect();
    let raw: Vec<f64> = (0..d).map(|k| a[(k, k)].re).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);

    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// V diag(f(lambda)) V† for a real-to-real spectral map. Rejects maps that
/// produce non-finite values on the operator's spectrum.
pub fn matrix_function(
    op: &HermitianOperator,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianOperator> {
    let dec = spectral_decompose(op);
    for &lambda in dec.eigenvalues() {
        if !f(lambda).is_finite() {
            return Err(Error::FunctionDomain { eigenvalue: lambda });
        }
    }
    HermitianOperator::new(dec.map_eigenvalues(f).hermitian_part())
}

/// Spectral exponential e^{op}.
pub fn matrix_exp(op: &HermitianOperator) -> Result<HermitianOperator> {
    matrix_function(op, f64::exp)
}

/// Spectral logarithm under the zero-clamp rule.
pub fn matrix_log(op: &HermitianOperator) -> Result<HermitianOperator> {
    spectral_map_checked(op, clamped_ln)
}

/// Spectral square root under the zero-clamp rule.
pub fn matrix_sqrt(op: &HermitianOperator) -> Result<HermitianOperator> {
    spectral_map_checked(op, clamped_sqrt)
}

fn spectral_map_checked(
    op: &HermitianOperator,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<HermitianOperator> {
    let dec = spectral_decompose(op);
    let mut values = Vec::with_capacity(dec.dim());
    for &lambda in dec.eigenvalues() {
        values.push(Complex64::new(f(lambda)?, 0.0));
    }
    HermitianOperator::new(dec.recombine(&values).hermitian_part())
}

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                max_asymmetry: defect,
            });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {trace:.12} deviates from 1 by more than {TRACE_TOL:e}"
            )));
        }
        let op = HermitianOperator {
            matrix: matrix.clone(),
        };
        let dec = spectral_decompose(&op);
        if let Some(&lambda) = dec
            .eigenvalues()
            .iter()
            .find(|&&lambda| lambda < PSD_FLOOR)
        {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lambda:.3e} below the {PSD_FLOOR:e} floor"
            )));
        }
        Ok(Self { matrix })
    }

    /// |psi><psi| from (unnormalized) ket amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let norm = norm_sq.sqrt();
        let d = amplitudes.len();
        let m = ComplexMatrix::from_fn(d, |i, j| {
            (amplitudes[i] / norm) * (amplitudes[j] / norm).conj()
        });
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// View as a Hermitian operator (for spectral routines).
    pub fn as_operator(&self) -> HermitianOperator {
        HermitianOperator {
            matrix: self.matrix.clone(),
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        spectral_decompose(&self.as_operator()).eigenvalues().to_vec()
    }

    /// tr(rho²).
    pub fn purity(&self) -> f64 {
        self.matrix.product_trace(&self.matrix).re
    }
}
