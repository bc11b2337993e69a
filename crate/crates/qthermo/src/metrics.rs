//! Information-theoretic and thermodynamic quantities for driven states:
//! entropies, relative entropy, coherence, work, entropy production by
//! both routes, the coherence/population decomposition, Uhlmann fidelity,
//! Bures length and its entropy bound, Wootters length, and the
//! two-point-measurement work distribution.
//!
//! All entropies are in nats.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermitian::{
    spectral_decompose, DensityMatrix, HermitianOperator, SpectralDecomposition, CLAMP_BAND,
    LOG_FLOOR,
};
use crate::thermal::{dephase, free_energy_difference, gibbs_state, ThermalSpec};
use crate::drive::UnitaryOperator;

/// The two routes to entropy production must agree this tightly.
pub const DUAL_ROUTE_TOL: f64 = 1e-8;
/// Coherence + population term must match the relative-entropy route this tightly.
pub const DECOMPOSITION_TOL: f64 = 1e-8;
/// Non-negative quantities may dip this far below zero numerically.
pub const TERM_FLOOR: f64 = -1e-12;
/// Slack on the Bures-length entropy bound.
pub const BOUND_SLACK: f64 = 1e-10;
/// Jarzynski equality tolerance.
pub const JARZYNSKI_TOL: f64 = 1e-10;
/// Max entry deviation allowed between the initial state and its Gibbs target.
pub const GIBBS_START_TOL: f64 = 1e-8;
/// Max initial coherence allowed by the two-point-measurement scheme.
pub const INITIAL_COHERENCE_TOL: f64 = 1e-8;
/// Weight on a numerically-zero reference eigenvalue that triggers a
/// support rejection in the relative entropy.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-8;
/// Work outcomes within this distance (Hz) merge into one.
pub const WORK_MERGE_TOL_HZ: f64 = 1e-9;

/// One eigenvalue's -λ ln λ with the 0 ln 0 = 0 convention.
fn entropy_term(lambda: f64) -> f64 {
    if lambda <= CLAMP_BAND {
        0.0
    } else {
        -lambda * lambda.ln()
    }
}

/// S(ρ) = -Σ λ ln λ in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues().iter().copied().map(entropy_term).sum()
}

/// D(ρ||σ) = tr(ρ ln ρ) - tr(ρ ln σ).
///
/// Reference eigenvalues indistinguishable from zero are lifted to the log
/// floor; if ρ carries more than `SUPPORT_WEIGHT_TOL` weight on such a
/// direction the support condition is violated and the call is rejected.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let rho_part: f64 = rho
        .eigenvalues()
        .iter()
        .map(|&l| if l <= CLAMP_BAND { 0.0 } else { l * l.ln() })
        .sum();

    let sigma_dec = spectral_decompose(&sigma.as_operator());
    let rho_in_sigma_basis = sigma_dec.into_basis(rho.matrix());
    let mut cross_part = 0.0;
    for (j, &s) in sigma_dec.eigenvalues().iter().enumerate() {
        let weight = rho_in_sigma_basis[(j, j)].re;
        if s <= CLAMP_BAND {
            if weight > SUPPORT_WEIGHT_TOL {
                return Err(Error::SupportViolation {
                    sigma_eigenvalue: s,
                    rho_weight: weight,
                });
            }
            cross_part += weight * LOG_FLOOR.ln();
        } else {
            cross_part += weight * s.ln();
        }
    }
    Ok(rho_part - cross_part)
}

/// Relative entropy of coherence in the given basis:
/// C(ρ) = S(Δ[ρ]) - S(ρ) >= 0.
pub fn coherence(rho: &DensityMatrix, basis: &SpectralDecomposition) -> f64 {
    von_neumann_entropy(&dephase(rho, basis)) - von_neumann_entropy(rho)
}

/// <w> = tr(ρ_τ H_f) - tr(ρ_i H_i), in Hz.
pub fn average_work(
    rho_i: &DensityMatrix,
    h_i: &HermitianOperator,
    rho_tau: &DensityMatrix,
    h_f: &HermitianOperator,
) -> Result<f64> {
    let dims = [rho_i.dim(), h_i.dim(), rho_tau.dim(), h_f.dim()];
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::DimensionMismatch {
            left: dims[0],
            right: *dims.iter().find(|&&d| d != dims[0]).unwrap(),
        });
    }
    Ok(h_f.expectation(rho_tau) - h_i.expectation(rho_i))
}

/// Entropy production by both routes: (β(<w> - ΔF), D(ρ_τ || ρ_f)).
///
/// The work route is only the entropy production when the process started
/// in the Gibbs state of H_i, so that is a hard precondition.
pub fn irreversible_entropy(
    rho_i: &DensityMatrix,
    h_i: &HermitianOperator,
    rho_tau: &DensityMatrix,
    h_f: &HermitianOperator,
    thermal: ThermalSpec,
) -> Result<(f64, f64)> {
    let gibbs_i = gibbs_state(h_i, thermal);
    let deviation = rho_i.matrix().max_entry_distance(gibbs_i.matrix());
    if deviation > GIBBS_START_TOL {
        return Err(Error::NotGibbs {
            max_deviation: deviation,
        });
    }
    let work = average_work(rho_i, h_i, rho_tau, h_f)?;
    let delta_f = free_energy_difference(h_i, h_f, thermal)?;
    let work_route = thermal.beta() * (work - delta_f);
    let relent_route = relative_entropy(rho_tau, &gibbs_state(h_f, thermal))?;
    Ok((work_route, relent_route))
}

/// Split D(ρ_τ || ρ_f) into (coherence term, population term) relative to
/// the eigenbasis of the final Hamiltonian.
pub fn entropy_decomposition(
    rho_tau: &DensityMatrix,
    h_f: &HermitianOperator,
    thermal: ThermalSpec,
) -> Result<(f64, f64)> {
    let basis = spectral_decompose(h_f);
    let coherence_term = coherence(rho_tau, &basis);
    let population_term =
        relative_entropy(&dephase(rho_tau, &basis), &gibbs_state(h_f, thermal))?;
    Ok((coherence_term, population_term))
}

/// sqrt with eigenvalues inside the zero band treated as exact zeros, so
/// numerically-pure states keep exact rank.
fn zero_band_sqrt(lambda: f64) -> f64 {
    if lambda <= CLAMP_BAND {
        0.0
    } else {
        lambda.sqrt()
    }
}

/// Uhlmann fidelity F(ρ_1, ρ_2) = [tr sqrt(sqrt(ρ_1) ρ_2 sqrt(ρ_1))]².
pub fn uhlmann_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    assert_eq!(rho1.dim(), rho2.dim(), "fidelity dimension mismatch");
    let dec1 = spectral_decompose(&rho1.as_operator());
    let sqrt1 = dec1.map_eigenvalues(zero_band_sqrt);
    // Symmetrize before the outer root to damp roundoff asymmetry.
    let inner = sqrt1.mul(&rho2.matrix().mul(&sqrt1)).hermitian_part();
    let inner_op = HermitianOperator::new(inner).expect("symmetrized product is Hermitian");
    let trace_root: f64 = spectral_decompose(&inner_op)
        .eigenvalues()
        .iter()
        .map(|&l| zero_band_sqrt(l))
        .sum();
    (trace_root * trace_root).clamp(0.0, 1.0)
}

/// Bures length L = arccos sqrt(F), in [0, π/2].
pub fn bures_length(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    uhlmann_fidelity(rho1, rho2).sqrt().clamp(0.0, 1.0).acos()
}

/// Outcome of checking ΔS_irr against its Bures-length lower bound
/// (8/π²) L².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClausiusCheck {
    pub bound_value: f64,
    pub satisfied: bool,
    pub margin: f64,
}

pub fn clausius_bound(s_irr: f64, bures: f64) -> ClausiusCheck {
    let bound_value = 8.0 * bures * bures / (PI * PI);
    ClausiusCheck {
        bound_value,
        satisfied: s_irr >= bound_value - BOUND_SLACK,
        margin: s_irr - bound_value,
    }
}

/// Wootters statistical distance arccos(Σ sqrt(p_k q_k)) between two
/// discrete distributions over the same outcomes.
pub fn wootters_length(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    for (name, dist) in [("first", p), ("second", q)] {
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities(format!(
                "{name} distribution sums to {sum}, not 1"
            )));
        }
        if let Some(&bad) = dist.iter().find(|&&x| x < TERM_FLOOR) {
            return Err(Error::InvalidProbabilities(format!(
                "{name} distribution contains negative entry {bad}"
            )));
        }
    }
    let overlap: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| (a.max(0.0) * b.max(0.0)).sqrt())
        .sum();
    Ok(overlap.clamp(0.0, 1.0).acos())
}

/// Two-point-measurement work distribution: outcomes (ε_f^j - ε_i^k) with
/// probabilities p_k |<f_j|U|i_k>|².
#[derive(Debug, Clone, PartialEq)]
pub struct WorkDistribution {
    outcomes: Vec<(f64, f64)>,
}

impl WorkDistribution {
    /// Validates normalization and non-negativity (up to numerical floors).
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self> {
        let total: f64 = outcomes.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities(format!(
                "work distribution sums to {total}, not 1"
            )));
        }
        if let Some(&(w, p)) = outcomes.iter().find(|&&(_, p)| p < TERM_FLOOR) {
            return Err(Error::InvalidProbabilities(format!(
                "work outcome {w} Hz has negative probability {p}"
            )));
        }
        Ok(Self { outcomes })
    }

    /// (work value in Hz, probability) pairs, sorted by work value.
    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    /// Σ w p.
    pub fn mean_work_hz(&self) -> f64 {
        self.outcomes.iter().map(|&(w, p)| w * p).sum()
    }

    /// <e^{-βW}> = Σ p e^{-βw}.
    pub fn exponential_average(&self, thermal: ThermalSpec) -> f64 {
        self.outcomes
            .iter()
            .map(|&(w, p)| p * (-thermal.beta() * w).exp())
            .sum()
    }
}

/// Build the TPM distribution for a process ρ_i -> U ρ_i U† between energy
/// measurements of H_i and H_f. Requires ρ_i diagonal in the H_i eigenbasis.
pub fn tpm_work_distribution(
    rho_i: &DensityMatrix,
    h_i: &HermitianOperator,
    h_f: &HermitianOperator,
    u: &UnitaryOperator,
) -> Result<WorkDistribution> {
    let dims = [rho_i.dim(), h_i.dim(), h_f.dim(), u.dim()];
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::DimensionMismatch {
            left: dims[0],
            right: *dims.iter().find(|&&d| d != dims[0]).unwrap(),
        });
    }
    let d = rho_i.dim();
    let dec_i = spectral_decompose(h_i);
    let dec_f = spectral_decompose(h_f);

    let rho_in_basis = dec_i.into_basis(rho_i.matrix());
    let mut worst_off_diagonal = 0.0_f64;
    for j in 0..d {
        for k in 0..d {
            if j != k {
                worst_off_diagonal = worst_off_diagonal.max(rho_in_basis[(j, k)].norm());
            }
        }
    }
    if worst_off_diagonal > INITIAL_COHERENCE_TOL {
        return Err(Error::InitialCoherence {
            max_off_diagonal: worst_off_diagonal,
        });
    }

    // Transition amplitudes <f_j | U | i_k>.
    let amplitudes = dec_f
        .eigenvectors()
        .adjoint()
        .mul(&u.matrix().mul(dec_i.eigenvectors()));

    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(d * d);
    for k in 0..d {
        let p_k = rho_in_basis[(k, k)].re;
        for j in 0..d {
            let work = dec_f.eigenvalues()[j] - dec_i.eigenvalues()[k];
            let prob = p_k * amplitudes[(j, k)].norm_sqr();
            raw.push((work, prob));
        }
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Merge outcomes within the work tolerance; drop numerical ghosts.
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (w, p) in raw {
        match merged.last_mut() {
            Some((anchor, total)) if (w - *anchor).abs() <= WORK_MERGE_TOL_HZ => {
                *total += p;
            }
            _ => merged.push((w, p)),
        }
    }
    merged.retain(|&(_, p)| p > 1e-14);

    WorkDistribution::new(merged)
}

/// Normalized Hilbert-Schmidt overlap
/// |tr(ρ_e ρ_t†)| / sqrt(tr(ρ_e ρ_e†) tr(ρ_t ρ_t†)); 1 iff the states are
/// proportional.
pub fn overlap_fidelity(rho_e: &DensityMatrix, rho_t: &DensityMatrix) -> f64 {
    assert_eq!(rho_e.dim(), rho_t.dim(), "overlap dimension mismatch");
    let cross = rho_e.matrix().product_trace(&rho_t.matrix().adjoint()).norm();
    let norm_e = rho_e.matrix().product_trace(&rho_e.matrix().adjoint()).re;
    let norm_t = rho_t.matrix().product_trace(&rho_t.matrix().adjoint()).re;
    (cross / (norm_e * norm_t).sqrt()).clamp(0.0, 1.0)
}

/// Full thermodynamic record of one driven process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoRecord {
    pub avg_work_hz: f64,
    pub delta_f_hz: f64,
    pub s_irr_work_route: f64,
    pub s_irr_relent_route: f64,
    pub coherence_term: f64,
    pub population_term: f64,
    pub bures_length: f64,
    pub bound_value: f64,
    pub jarzynski_lhs: f64,
    pub jarzynski_rhs: f64,
}

impl ThermoRecord {
    /// Check every record invariant; the first violation is reported.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::RecordInvariant(msg));
        if self.s_irr_relent_route < TERM_FLOOR {
            return fail(format!(
                "entropy production {} is negative",
                self.s_irr_relent_route
            ));
        }
        if self.coherence_term < TERM_FLOOR {
            return fail(format!("coherence term {} is negative", self.coherence_term));
        }
        if self.population_term < TERM_FLOOR {
            return fail(format!(
                "population term {} is negative",
                self.population_term
            ));
        }
        let split = (self.coherence_term + self.population_term - self.s_irr_relent_route).abs();
        if split >= DECOMPOSITION_TOL {
            return fail(format!(
                "coherence + population deviates from entropy production by {split:.3e}"
            ));
        }
        if self.s_irr_relent_route < self.bound_value - BOUND_SLACK {
            return fail(format!(
                "entropy production {} falls below the Bures bound {}",
                self.s_irr_relent_route, self.bound_value
            ));
        }
        let jarzynski = (self.jarzynski_lhs - self.jarzynski_rhs).abs();
        if jarzynski >= JARZYNSKI_TOL {
            return fail(format!(
                "Jarzynski mismatch |{} - {}| = {jarzynski:.3e}",
                self.jarzynski_lhs, self.jarzynski_rhs
            ));
        }
        Ok(())
    }
}

/// Assemble the complete record for a driven process ρ_i -> ρ_τ = U ρ_i U†.
pub fn thermo_record(
    rho_i: &DensityMatrix,
    h_i: &HermitianOperator,
    rho_tau: &DensityMatrix,
    h_f: &HermitianOperator,
    u: &UnitaryOperator,
    thermal: ThermalSpec,
) -> Result<ThermoRecord> {
    let avg_work_hz = average_work(rho_i, h_i, rho_tau, h_f)?;
    let delta_f_hz = free_energy_difference(h_i, h_f, thermal)?;
    let (s_irr_work_route, s_irr_relent_route) =
        irreversible_entropy(rho_i, h_i, rho_tau, h_f, thermal)?;
    let (coherence_term, population_term) = entropy_decomposition(rho_tau, h_f, thermal)?;
    let rho_f = gibbs_state(h_f, thermal);
    let length = bures_length(rho_tau, &rho_f);
    let check = clausius_bound(s_irr_relent_route, length);
    let distribution = tpm_work_distribution(rho_i, h_i, h_f, u)?;
    Ok(ThermoRecord {
        avg_work_hz,
        delta_f_hz,
        s_irr_work_route,
        s_irr_relent_route,
        coherence_term,
        population_term,
        bures_length: length,
        bound_value: check.bound_value,
        jarzynski_lhs: distribution.exponential_average(thermal),
        jarzynski_rhs: (-thermal.beta() * delta_f_hz).exp(),
    })
}
