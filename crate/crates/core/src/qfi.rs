//! Quantum Fisher information of an arbitrary density matrix.
//!
//! With `ρ = Σ ρ_n |ψ_n⟩⟨ψ_n|`,
//! `H = 2 Σ_{n,m} |⟨ψ_m|∂_γρ|ψ_n⟩|² / (ρ_n + ρ_m)`, summed over pairs whose
//! eigenvalue sum is above a cutoff.

use nalgebra::{DVector, SymmetricEigen};

use crate::dynamics::{dephase_common, dephase_derivative, EvolutionSpec};
use crate::error::{Error, Result};
use crate::state::{hermitian_deviation, CMatrix, DensityMatrix, ProbeState};

/// Default cutoff on `ρ_n + ρ_m`, relative to the largest eigenvalue.
pub const DEFAULT_EIG_CUTOFF: f64 = 1e-12;

const DRHO_HERMITIAN_TOL: f64 = 1e-10;

/// Spectrum of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: DVector<f64>,
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl EigenSystem {
    pub fn of_hermitian(m: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues =
            DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = eig.eigenvectors.select_columns(&order);
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// QFI of `rho` for the parameter whose derivative is `drho`.
///
/// `rel_cutoff` drops pairs with `ρ_n + ρ_m ≤ rel_cutoff · max_n ρ_n`.
pub fn qfi_general(rho: &DensityMatrix, drho: &CMatrix, rel_cutoff: f64) -> Result<f64> {
    let dim = rho.dim();
    if drho.nrows() != dim || drho.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: drho.nrows(),
        });
    }
    if rel_cutoff.is_nan() || rel_cutoff < 0.0 {
        return Err(Error::domain(format!(
            "eigenvalue cutoff must be >= 0, got {rel_cutoff}"
        )));
    }
    let scale = drho.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let deviation = hermitian_deviation(drho);
    if deviation > DRHO_HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation });
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    let eig = EigenSystem::of_hermitian(rho.matrix());
    let v = &eig.eigenvectors;
    let projected = v.adjoint() * drho * v;
    let lambda = &eig.eigenvalues;
    let cutoff = rel_cutoff * lambda.max();
    let mut total = 0.0;
    for n in 0..dim {
        for m in 0..dim {
            let s = lambda[n] + lambda[m];
            if s > cutoff {
                total += projected[(m, n)].norm_sqr() / s;
            }
        }
    }
    Ok(2.0 * total)
}

/// QFI of a pure probe after common-environment dephasing.
pub fn qfi_of_probe(psi0: &ProbeState, spec: &EvolutionSpec) -> Result<f64> {
    let rho = dephase_common(psi0, spec)?;
    let drho = dephase_derivative(psi0, spec)?;
    qfi_general(&rho, &drho, DEFAULT_EIG_CUTOFF)
}
