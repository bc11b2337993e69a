//! Equilibrium objects: Gibbs states, partition functions, free energies,
//! pseudospin temperatures, and the dephasing map.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{spectral_decompose, DensityMatrix, HermitianOperator, SpectralDecomposition};

/// Tolerance on p0 + p1 = 1 for `effective_temperature`.
const POPULATION_SUM_TOL: f64 = 1e-10;

/// Inverse temperature in 1/Hz. With h = 1 the paper's (β h)⁻¹ is simply
/// 1/β, so temperatures are carried as frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    beta: f64,
}

impl ThermalSpec {
    /// β >= 0; β = 0 is the infinite-temperature limit.
    pub fn from_beta(beta_per_hz: f64) -> Result<Self> {
        if !beta_per_hz.is_finite() || beta_per_hz < 0.0 {
            return Err(Error::InvalidProbabilities(format!(
                "inverse temperature must be finite and non-negative, got {beta_per_hz}"
            )));
        }
        Ok(Self { beta: beta_per_hz })
    }

    /// Temperature expressed as a frequency, (β h)⁻¹.
    pub fn from_temperature_hz(temperature_hz: f64) -> Result<Self> {
        if !(temperature_hz > 0.0) {
            return Err(Error::InvalidProbabilities(format!(
                "temperature must be positive, got {temperature_hz}"
            )));
        }
        Self::from_beta(1.0 / temperature_hz)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature_hz(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn is_infinite_temperature(&self) -> bool {
        self.beta == 0.0
    }
}

/// Z = sum_k e^{-β ε_k} over the eigenvalues of H.
pub fn partition_function(h: &HermitianOperator, thermal: ThermalSpec) -> f64 {
    spectral_decompose(h)
        .eigenvalues()
        .iter()
        .map(|&e| (-thermal.beta() * e).exp())
        .sum()
}

/// ln Z via a max-shift so large β ε stays in range.
pub fn ln_partition_function(h: &HermitianOperator, thermal: ThermalSpec) -> f64 {
    let dec = spectral_decompose(h);
    let shift = dec
        .eigenvalues()
        .iter()
        .map(|&e| -thermal.beta() * e)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = dec
        .eigenvalues()
        .iter()
        .map(|&e| (-thermal.beta() * e - shift).exp())
        .sum();
    shift + sum.ln()
}

/// The Gibbs state e^{-βH}/Z, built in the eigenbasis of H so Boltzmann
/// weights never overflow.
pub fn gibbs_state(h: &HermitianOperator, thermal: ThermalSpec) -> DensityMatrix {
    let dec = spectral_decompose(h);
    let ground = dec
        .eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = dec
        .eigenvalues()
        .iter()
        .map(|&e| (-thermal.beta() * (e - ground)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let values: Vec<Complex64> = weights
        .iter()
        .map(|&w| Complex64::new(w / z, 0.0))
        .collect();
    DensityMatrix::new(dec.recombine(&values).hermitian_part())
        .expect("Gibbs construction yields a valid state")
}

/// ΔF = -β⁻¹ ln(Z_f / Z_i), both partition functions at the same β.
pub fn free_energy_difference(
    h_i: &HermitianOperator,
    h_f: &HermitianOperator,
    thermal: ThermalSpec,
) -> Result<f64> {
    if h_i.dim() != h_f.dim() {
        return Err(Error::DimensionMismatch {
            left: h_i.dim(),
            right: h_f.dim(),
        });
    }
    if thermal.is_infinite_temperature() {
        return Err(Error::InfiniteTemperature(
            "free energy difference diverges as beta -> 0",
        ));
    }
    let ln_zi = ln_partition_function(h_i, thermal);
    let ln_zf = ln_partition_function(h_f, thermal);
    Ok(-(ln_zf - ln_zi) / thermal.beta())
}

/// Pseudospin temperature of a two-level population pair across a gap of
/// `nu_hz`: β = ln(p0/p1) / ν.
pub fn effective_temperature(p0: f64, p1: f64, nu_hz: f64) -> Result<ThermalSpec> {
    if (p0 + p1 - 1.0).abs() > POPULATION_SUM_TOL {
        return Err(Error::InvalidProbabilities(format!(
            "populations must sum to 1 within {POPULATION_SUM_TOL:e}, got {}",
            p0 + p1
        )));
    }
    if !(p0 > 0.0) || !(p1 > 0.0) {
        return Err(Error::InvalidProbabilities(format!(
            "populations must be strictly positive, got ({p0}, {p1})"
        )));
    }
    if !(nu_hz > 0.0) {
        return Err(Error::InvalidProbabilities(format!(
            "energy gap must be positive, got {nu_hz}"
        )));
    }
    let beta = (p0 / p1).ln() / nu_hz;
    if beta < 0.0 {
        return Err(Error::InvalidProbabilities(format!(
            "population inversion (p0 = {p0} < p1 = {p1}) gives a negative temperature"
        )));
    }
    ThermalSpec::from_beta(beta)
}

/// Erase coherences in the given eigenbasis: rho -> sum_k |k><k| rho |k><k|.
pub fn dephase(rho: &DensityMatrix, basis: &SpectralDecomposition) -> DensityMatrix {
    assert_eq!(rho.dim(), basis.dim(), "dephasing basis dimension mismatch");
    let in_basis = basis.into_basis(rho.matrix());
    let diagonal: Vec<Complex64> = (0..rho.dim())
        .map(|k| Complex64::new(in_basis[(k, k)].re, 0.0))
        .collect();
    DensityMatrix::new(basis.recombine(&diagonal).hermitian_part())
        .expect("dephasing preserves state validity")
}
