//! The time-dependent driving Hamiltonian and its time-ordered propagator.
//!
//! H(t) = -1/2 ν(t) [cos(πt/2τ) σ_x + sin(πt/2τ) σ_y] with the gap ν(t)
//! ramping linearly from ν_i to ν_f. The propagator is a product of
//! midpoint slice exponentials, latest factor leftmost, with the slice
//! count doubled until the product stops moving.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{pauli, spectral_decompose, DensityMatrix, HermitianOperator, PauliAxis};
use crate::matrix::ComplexMatrix;

/// Per-entry tolerance for |U†U - I| when accepting a unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

const MAX_DOUBLINGS: u32 = 20;

/// Linear-ramp drive schedule: gap ν_i -> ν_f over time τ, with `slices`
/// as the initial propagator discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveProtocol {
    nu_i_hz: f64,
    nu_f_hz: f64,
    tau_s: f64,
    slices: usize,
}

impl DriveProtocol {
    pub fn new(nu_i_hz: f64, nu_f_hz: f64, tau_s: f64, slices: usize) -> Result<Self> {
        if !(nu_i_hz > 0.0) || !(nu_f_hz > 0.0) {
            return Err(Error::InvalidProtocol(format!(
                "frequencies must be positive, got nu_i = {nu_i_hz}, nu_f = {nu_f_hz}"
            )));
        }
        if !(tau_s > 0.0) {
            return Err(Error::InvalidProtocol(format!(
                "driving time must be positive, got {tau_s}"
            )));
        }
        if slices == 0 {
            return Err(Error::InvalidProtocol("slice count must be at least 1".into()));
        }
        Ok(Self {
            nu_i_hz,
            nu_f_hz,
            tau_s,
            slices,
        })
    }

    pub fn nu_i_hz(&self) -> f64 {
        self.nu_i_hz
    }

    pub fn nu_f_hz(&self) -> f64 {
        self.nu_f_hz
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_s
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    /// The work parameter ν(t) = ν_i (1 - t/τ) + ν_f (t/τ).
    pub fn frequency_at(&self, t_s: f64) -> f64 {
        let x = t_s / self.tau_s;
        self.nu_i_hz * (1.0 - x) + self.nu_f_hz * x
    }
}

/// A unitary evolution operator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let gram = matrix.adjoint().mul(&matrix);
        let deviation = gram.max_entry_distance(&ComplexMatrix::identity(matrix.dim()));
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                max_deviation: deviation,
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// H(ν(t)) per the drive schedule; t must lie in [0, τ].
pub fn drive_hamiltonian(t_s: f64, protocol: &DriveProtocol) -> Result<HermitianOperator> {
    if !(0.0..=protocol.tau_s).contains(&t_s) {
        return Err(Error::TimeOutOfRange {
            t_s,
            tau_s: protocol.tau_s,
        });
    }
    let nu = protocol.frequency_at(t_s);
    let angle = PI * t_s / (2.0 * protocol.tau_s);
    let sx = pauli(PauliAxis::X);
    let sy = pauli(PauliAxis::Y);
    let m = sx
        .matrix()
        .scale_re(angle.cos())
        .add(&sy.matrix().scale_re(angle.sin()))
        .scale_re(-0.5 * nu);
    HermitianOperator::new(m)
}

/// exp(-i 2π H δt) for a 2×2 Hermitian H via the axis-angle closed form.
/// The 2π converts Hz to angular frequency (h = 1, ħ = 1/2π).
pub(crate) fn slice_unitary_closed_form(h: &HermitianOperator, dt_s: f64) -> ComplexMatrix {
    debug_assert_eq!(h.dim(), 2);
    let m = h.matrix();
    let mean = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    // Traceless part B = H - mean·I has B_00 = z real, B_01 = w.
    let z = m[(0, 0)].re - mean;
    let w = m[(0, 1)];
    let radius = (z * z + w.norm_sqr()).sqrt();
    let global = Complex64::from_polar(1.0, -TAU * mean * dt_s);
    if radius == 0.0 {
        return ComplexMatrix::identity(2).scale(global);
    }
    let theta = TAU * radius * dt_s;
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let i_sin = Complex64::new(0.0, -sin_t / radius);
    ComplexMatrix::from_rows_2x2([
        [
            global * (Complex64::new(cos_t, 0.0) + i_sin * z),
            global * (i_sin * w),
        ],
        [
            global * (i_sin * w.conj()),
            global * (Complex64::new(cos_t, 0.0) - i_sin * z),
        ],
    ])
}

/// exp(-i 2π H δt) via spectral mapping; works for any dimension.
pub(crate) fn slice_unitary_spectral(h: &HermitianOperator, dt_s: f64) -> ComplexMatrix {
    spectral_decompose(h)
        .map_eigenvalues_complex(|e| Complex64::from_polar(1.0, -TAU * e * dt_s))
}

fn slice_unitary(h: &HermitianOperator, dt_s: f64) -> ComplexMatrix {
    if h.dim() == 2 {
        slice_unitary_closed_form(h, dt_s)
    } else {
        slice_unitary_spectral(h, dt_s)
    }
}

/// Pull a near-unitary product back onto the unitary manifold via its polar
/// factor M (M†M)^{-1/2}. Long slice products drift from unitarity by
/// O(N·ε), which would otherwise leak into the exponential work averages.
fn project_to_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    let gram = HermitianOperator::new(m.adjoint().mul(m).hermitian_part())
        .expect("Gram matrix is Hermitian");
    let dec = spectral_decompose(&gram);
    let inv_sqrt: Vec<Complex64> = dec
        .eigenvalues()
        .iter()
        .map(|&lambda| {
            debug_assert!(lambda > 0.5, "slice product degenerated: |U†U| eigenvalue {lambda}");
            Complex64::new(1.0 / lambda.sqrt(), 0.0)
        })
        .collect();
    m.mul(&dec.recombine(&inv_sqrt))
}

/// Time-ordered slice product at a fixed slice count, latest factor leftmost.
pub fn propagator_with_slices(protocol: &DriveProtocol, slices: usize) -> Result<UnitaryOperator> {
    if slices == 0 {
        return Err(Error::InvalidProtocol("slice count must be at least 1".into()));
    }
    let dt = protocol.tau_s / slices as f64;
    let mut u = ComplexMatrix::identity(2);
    for k in 0..slices {
        let t_mid = (k as f64 + 0.5) * dt;
        let h = drive_hamiltonian(t_mid, protocol)?;
        u = slice_unitary(&h, dt).mul(&u);
    }
    UnitaryOperator::new(project_to_unitary(&u))
}

/// Adaptive propagator: double the slice count from `protocol.slices` until
/// successive products differ by less than `tolerance` in max entry modulus.
/// Returns the converged operator together with its slice count.
pub fn converged_propagator(
    protocol: &DriveProtocol,
    tolerance: f64,
) -> Result<(UnitaryOperator, usize)> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidProtocol(format!(
            "propagator tolerance must be positive, got {tolerance}"
        )));
    }
    let mut slices = protocol.slices;
    let mut previous = propagator_with_slices(protocol, slices)?;
    let mut last_delta = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        let doubled = slices * 2;
        let next = propagator_with_slices(protocol, doubled)?;
        last_delta = next.matrix().max_entry_distance(previous.matrix());
        if last_delta < tolerance {
            return Ok((next, doubled));
        }
        previous = next;
        slices = doubled;
    }
    Err(Error::NoConvergence {
        doublings: MAX_DOUBLINGS,
        last_delta,
    })
}

/// The time-ordered propagator U(τ, 0) for the drive protocol.
pub fn propagator(protocol: &DriveProtocol, tolerance: f64) -> Result<UnitaryOperator> {
    converged_propagator(protocol, tolerance).map(|(u, _)| u)
}

/// rho -> U rho U†.
pub fn evolve(rho: &DensityMatrix, u: &UnitaryOperator) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: u.dim(),
        });
    }
    let moved = u.matrix().mul(&rho.matrix().mul(&u.matrix().adjoint()));
    DensityMatrix::new(moved.hermitian_part())
}
