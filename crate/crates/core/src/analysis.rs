//! Time-optimized figures of merit: the entanglement ratio `R_N(γ)`, the
//! threshold width `γ₀(N)` above which GHZ probes win, the preparation purity
//! `μ₀` needed to keep that advantage, and the coupling-free QSNR.

use crate::closed_form::{qfi_dephased, qfi_depolarized, qfi_ghz_closed, qfi_sep_closed};
use crate::dynamics::EvolutionSpec;
use crate::error::{Error, Result};
use crate::noise::NoiseParams;
use crate::optim::{bisect, maximize_over_time, MaximizationResult};
use crate::state::{check_qubits, purity_dephased, purity_depolarized};

/// Probe preparations with a closed-form QFI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    /// `N` qubits in `|+⟩`, each with an independent environment.
    Separable,
    /// GHZ state in a common environment.
    Ghz,
    /// GHZ mixed with white noise with weight `p`.
    Depolarized(f64),
    /// GHZ with coherence scaled by `δ`.
    Dephased(f64),
}

/// Imperfect-preparation models for the purity threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingModel {
    Depolarized,
    Dephased,
}

impl MixingModel {
    pub fn name(&self) -> &'static str {
        match self {
            MixingModel::Depolarized => "depolarized",
            MixingModel::Dephased => "dephased",
        }
    }

    pub fn probe(&self, mixing: f64) -> Probe {
        match self {
            MixingModel::Depolarized => Probe::Depolarized(mixing),
            MixingModel::Dephased => Probe::Dephased(mixing),
        }
    }

    pub fn purity(&self, n_qubits: usize, mixing: f64) -> Result<f64> {
        match self {
            MixingModel::Depolarized => purity_depolarized(n_qubits, mixing),
            MixingModel::Dephased => purity_dephased(mixing),
        }
    }
}

impl std::str::FromStr for MixingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarized" => Ok(MixingModel::Depolarized),
            "dephased" => Ok(MixingModel::Dephased),
            other => Err(Error::domain(format!("unknown model '{other}'"))),
        }
    }
}

pub fn closed_qfi(probe: Probe, n_qubits: usize, params: &NoiseParams, t: f64) -> Result<f64> {
    let spec = EvolutionSpec::new(*params, t)?;
    match probe {
        Probe::Separable => qfi_sep_closed(n_qubits, &spec),
        Probe::Ghz => qfi_ghz_closed(n_qubits, &spec),
        Probe::Depolarized(p) => qfi_depolarized(n_qubits, p, &spec),
        Probe::Dephased(d) => qfi_dephased(n_qubits, d, &spec),
    }
}

/// Maximum over the interaction time of a closed-form QFI, seeded at `1/γ`.
pub fn max_qfi(probe: Probe, n_qubits: usize, params: &NoiseParams) -> Result<MaximizationResult> {
    check_qubits(n_qubits)?;
    // surface argument errors before they turn into NaN inside the search
    closed_qfi(probe, n_qubits, params, 1.0)?;
    maximize_over_time(
        |t| closed_qfi(probe, n_qubits, params, t).unwrap_or(f64::NAN),
        1.0 / params.gamma(),
    )
}

/// `R_N(γ) = max_t H_GHZ / max_t H_sep`.
pub fn qfi_ratio(n_qubits: usize, gamma: f64, coupling: f64) -> Result<f64> {
    let params = NoiseParams::new(gamma, coupling)?;
    let ghz = max_qfi(Probe::Ghz, n_qubits, &params)?;
    let sep = max_qfi(Probe::Separable, n_qubits, &params)?;
    Ok(ghz.h_max / sep.h_max)
}

/// A root located by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Lower end of the decade scan used to bracket `γ₀`, for `Γ = 1`.
pub const GAMMA0_SCAN_LO: f64 = 1e-3;
/// Upper end of the decade scan used to bracket `γ₀`, for `Γ = 1`.
pub const GAMMA0_SCAN_HI: f64 = 1e3;

const LOG_GAMMA_TOL: f64 = 1e-10;

/// Width `γ₀` at which `R_N(γ₀) = 1`, found by bisection in `ln γ`.
///
/// The bracket comes from a half-decade scan of `[10⁻³, 10³]·Γ`.
pub fn threshold_gamma0(n_qubits: usize, coupling: f64) -> Result<ThresholdResult> {
    check_qubits(n_qubits)?;
    if n_qubits < 2 {
        return Err(Error::domain(
            "a single qubit has no entanglement threshold (R_1 = 1)",
        ));
    }
    NoiseParams::new(1.0, coupling)?;
    let excess =
        |ln_gamma: f64| -> Result<f64> { Ok(qfi_ratio(n_qubits, ln_gamma.exp(), coupling)? - 1.0) };
    let (lo, hi) = (
        (GAMMA0_SCAN_LO * coupling).ln(),
        (GAMMA0_SCAN_HI * coupling).ln(),
    );
    let steps = 12;
    let step = (hi - lo) / steps as f64;
    let mut prev = (lo, excess(lo)?);
    for i in 1..=steps {
        let x = lo + step * i as f64;
        let fx = excess(x)?;
        if prev.1 < 0.0 && fx >= 0.0 {
            let root = bisect(excess, prev.0, x, LOG_GAMMA_TOL)?;
            return Ok(ThresholdResult {
                value: root.x.exp(),
                residual: root.residual,
                iterations: root.iterations,
            });
        }
        prev = (x, fx);
    }
    Err(Error::NoSignChange(format!(
        "R_{n_qubits} - 1 keeps its sign over [{:e}, {:e}]",
        lo.exp(),
        hi.exp()
    )))
}

/// Mixing parameter and purity at which a degraded GHZ probe ties with
/// separable probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityThreshold {
    /// `p` or `δ` at the crossing.
    pub mixing: f64,
    /// `μ₀`, the preparation purity at the crossing.
    pub purity: f64,
    /// `max_t H_mixed / max_t H_sep − 1` at the returned mixing parameter.
    pub residual: f64,
    pub iterations: usize,
}

const MIXING_TOL: f64 = 1e-12;

/// Threshold purity `μ₀` for the given width, by bisection in the mixing
/// parameter. Fails with [`Error::NoAdvantage`] when `γ ≤ γ₀(N)`.
pub fn threshold_purity(
    n_qubits: usize,
    params: &NoiseParams,
    model: MixingModel,
) -> Result<PurityThreshold> {
    let sep = max_qfi(Probe::Separable, n_qubits, params)?.h_max;
    let ghz = max_qfi(Probe::Ghz, n_qubits, params)?.h_max;
    if ghz <= sep {
        let gamma0 = if n_qubits >= 2 {
            threshold_gamma0(n_qubits, params.coupling()).map_or(f64::NAN, |r| r.value)
        } else {
            f64::INFINITY
        };
        return Err(Error::NoAdvantage {
            gamma: params.gamma(),
            gamma0,
        });
    }
    let excess = |x: f64| -> Result<f64> {
        if x == 0.0 {
            return Ok(-1.0);
        }
        Ok(max_qfi(model.probe(x), n_qubits, params)?.h_max / sep - 1.0)
    };
    let root = bisect(excess, 0.0, 1.0, MIXING_TOL)?;
    Ok(PurityThreshold {
        mixing: root.x,
        purity: model.purity(n_qubits, root.x)?,
        residual: root.residual,
        iterations: root.iterations,
    })
}

/// Lower end of the purity-threshold scan, as a multiple of `γ₀(N)`.
pub const ROBUSTNESS_GAMMA_MARGIN: f64 = 1.01;
/// Upper end of the purity-threshold scan, for `Γ = 1`.
pub const ROBUSTNESS_GAMMA_HI: f64 = 1e7;

/// Default width range for purity thresholds: just above `γ₀(N)` up to
/// `10⁷Γ`, where `μ₀` has climbed back towards 1.
pub fn robustness_gamma_range(n_qubits: usize, coupling: f64) -> Result<(f64, f64)> {
    let g0 = threshold_gamma0(n_qubits, coupling)?.value;
    Ok((ROBUSTNESS_GAMMA_MARGIN * g0, ROBUSTNESS_GAMMA_HI * coupling))
}

/// Quantum signal-to-noise ratio `γ̃² H_γ̃` at fixed `γ̃ = γ/Γ`, for each
/// coupling. `H_γ̃ = Γ² H_γ` is the Fisher information about `γ̃`, so each
/// entry equals `γ² max_t H_γ` evaluated at `γ = γ̃Γ`.
pub fn qsnr_invariance_scan(
    n_qubits: usize,
    probe: Probe,
    gamma_tilde: f64,
    couplings: &[f64],
) -> Result<Vec<f64>> {
    if couplings.is_empty() {
        return Err(Error::domain("coupling list is empty"));
    }
    couplings
        .iter()
        .map(|&coupling| {
            let params = NoiseParams::new(gamma_tilde * coupling, coupling)?;
            let h = max_qfi(probe, n_qubits, &params)?.h_max;
            Ok(gamma_tilde * gamma_tilde * coupling * coupling * h)
        })
        .collect()
}
