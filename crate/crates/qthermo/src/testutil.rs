//! Shared helpers for the unit tests: seeded generators and a cached
//! paper-parameter sweep so expensive grids are computed once per test run.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hermitian::{DensityMatrix, HermitianOperator};
use crate::matrix::ComplexMatrix;
use crate::sweep::{run_sweep, SweepConfig, SweepRow};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[track_caller]
pub fn assert_close(got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol,
        "got {got:.15e}, want {want:.15e} (|diff| = {:.3e} > tol {tol:.1e})",
        (got - want).abs()
    );
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let g = ComplexMatrix::from_fn(dim, |_, _| random_complex(rng));
    HermitianOperator::new(g.hermitian_part()).expect("hermitian by construction")
}

/// Full-rank random state from a Ginibre draw: G G† / tr.
pub fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| random_complex(rng));
    let gg = g.mul(&g.adjoint());
    let trace = gg.trace().re;
    DensityMatrix::new(gg.scale_re(1.0 / trace)).expect("valid by construction")
}

/// Random pure state of the given dimension.
pub fn random_pure(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
    DensityMatrix::pure(&amps).expect("nonzero with probability 1")
}

/// A random unitary: the eigenvector matrix of a random Hermitian draw.
pub fn random_unitary_matrix(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let h = random_hermitian(dim, rng);
    crate::hermitian::spectral_decompose(&h).eigenvectors().clone()
}

/// The 16-row paper-default sweep, computed once per test binary.
pub fn paper_rows() -> &'static [SweepRow] {
    static ROWS: OnceLock<Vec<SweepRow>> = OnceLock::new();
    ROWS.get_or_init(|| run_sweep(&SweepConfig::default()).expect("paper sweep runs"))
}
