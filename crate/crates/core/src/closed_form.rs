//! Closed-form quantum Fisher information for the probes that admit one.
//!
//! All formulas return 0 at `t = 0`, where they are 0/0 with limit 0.

use crate::dynamics::EvolutionSpec;
use crate::error::{Error, Result};
use crate::state::check_qubits;

fn n4(n_qubits: usize) -> f64 {
    (n_qubits as f64).powi(4)
}

/// `(β, ∂_γβ)`, or `None` at the degenerate point `t = 0`.
fn beta_pair(spec: &EvolutionSpec) -> Option<(f64, f64)> {
    let b = spec.beta();
    let db = spec.dbeta_dgamma();
    if b == 0.0 || db == 0.0 {
        None
    } else {
        Some((b, db))
    }
}

/// `N` independent qubits in `|+⟩`, each with its own noise:
/// `4N (∂_γβ)² / (e^{4β} − 1)`.
pub fn qfi_sep_closed(n_qubits: usize, spec: &EvolutionSpec) -> Result<f64> {
    check_qubits(n_qubits)?;
    Ok(match beta_pair(spec) {
        None => 0.0,
        Some((b, db)) => 4.0 * n_qubits as f64 * db * db / (4.0 * b).exp_m1(),
    })
}

/// GHZ probe in a common environment: `4N⁴ (∂_γβ)² / (e^{4N²β} − 1)`.
pub fn qfi_ghz_closed(n_qubits: usize, spec: &EvolutionSpec) -> Result<f64> {
    check_qubits(n_qubits)?;
    let n2 = (n_qubits * n_qubits) as f64;
    Ok(match beta_pair(spec) {
        None => 0.0,
        Some((b, db)) => 4.0 * n4(n_qubits) * db * db / (4.0 * n2 * b).exp_m1(),
    })
}

fn check_mixing(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must lie in [0, 1], got {value}"
        )))
    }
}

/// GHZ probe mixed with white noise, `p ρ_GHZ + (1 − p)𝟙/2^N`.
pub fn qfi_depolarized(n_qubits: usize, p: f64, spec: &EvolutionSpec) -> Result<f64> {
    check_qubits(n_qubits)?;
    check_mixing("p", p)?;
    let Some((b, db)) = beta_pair(spec) else {
        return Ok(0.0);
    };
    if p == 0.0 {
        return Ok(0.0);
    }
    let dim = (1u64 << n_qubits) as f64;
    let n2 = (n_qubits * n_qubits) as f64;
    let a = (dim - 2.0) * p + 2.0;
    let c = dim * p;
    // a² e^x − c² written as a²(e^x − 1) + (a − c)(a + c)
    let x = 4.0 * n2 * b;
    let denom = a * a * x.exp_m1() + (2.0 - 2.0 * p) * (a + c);
    Ok(4.0 * dim * n4(n_qubits) * a * p * p * db * db / denom)
}

/// GHZ probe with its coherence scaled by `δ`.
pub fn qfi_dephased(n_qubits: usize, delta: f64, spec: &EvolutionSpec) -> Result<f64> {
    check_qubits(n_qubits)?;
    check_mixing("delta", delta)?;
    let Some((b, db)) = beta_pair(spec) else {
        return Ok(0.0);
    };
    let n2 = (n_qubits * n_qubits) as f64;
    let denom = (4.0 * n2 * b).exp_m1() + (1.0 - delta) * (1.0 + delta);
    Ok(4.0 * n4(n_qubits) * delta * delta * db * db / denom)
}

/// Outcome probabilities `p± = ½(1 ± e^{−2N²β})` of projecting the evolved
/// GHZ state onto `(|0…0⟩ ± |1…1⟩)/√2`.
pub fn binary_outcome_probs(n_qubits: usize, spec: &EvolutionSpec) -> Result<(f64, f64)> {
    check_qubits(n_qubits)?;
    let x = -2.0 * (n_qubits * n_qubits) as f64 * spec.beta();
    let minus = -0.5 * x.exp_m1();
    Ok((1.0 - minus, minus))
}

/// Classical Fisher information `(∂_γp₊)² / (p₊ p₋)` of the two-outcome
/// measurement.
pub fn binary_measurement_fisher(n_qubits: usize, spec: &EvolutionSpec) -> Result<f64> {
    let (plus, minus) = binary_outcome_probs(n_qubits, spec)?;
    if minus == 0.0 {
        return Ok(0.0);
    }
    let n2 = (n_qubits * n_qubits) as f64;
    let coherence = (-2.0 * n2 * spec.beta()).exp();
    let dplus = -n2 * coherence * spec.dbeta_dgamma();
    Ok(dplus * dplus / (plus * minus))
}
