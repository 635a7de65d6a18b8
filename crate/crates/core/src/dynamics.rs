//! Evolution of N non-interacting qubits coupled to one common noise field.
//!
//! Every qubit sees the same realization `B(t)`, so the propagator is diagonal
//! in the computational basis with phases `e^{−i(ω₀t + φ)s_x}`, where `s_x` is
//! the collective `σ_z` eigenvalue. Averaging over the Gaussian phase damps
//! each coherence by `e^{−(s_x − s_y)² β(t)/2}`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noise::{sample_phases, McSettings, NoiseKernel, NoiseParams};
use crate::rng::{ordered_sum, stream_rng};
use crate::state::{weight_vector, CMatrix, DensityMatrix, ProbeState, C64};

/// Noise, interaction time and qubit energy for one evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    pub params: NoiseParams,
    t: f64,
    pub omega0: f64,
}

impl EvolutionSpec {
    pub fn new(params: NoiseParams, t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::domain(format!(
                "interaction time must be >= 0, got {t}"
            )));
        }
        Ok(Self {
            params,
            t,
            omega0: 0.0,
        })
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.omega0 = omega0;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn beta(&self) -> f64 {
        self.params
            .beta(self.t)
            .expect("time validated at construction")
    }

    pub fn dbeta_dgamma(&self) -> f64 {
        self.params
            .dbeta_dgamma(self.t)
            .expect("time validated at construction")
    }
}

/// Multiplier applied to `ρ_xy`, indexed by `Δ + 2N` with `Δ = s_x − s_y`.
fn coherence_factors(n_qubits: usize, spec: &EvolutionSpec) -> Vec<C64> {
    let beta = spec.beta();
    let span = 2 * n_qubits as i32;
    (-span..=span)
        .map(|delta| {
            let d = delta as f64;
            let damping = (-0.5 * d * d * beta).exp();
            C64::from_polar(damping, -spec.omega0 * d * spec.t)
        })
        .collect()
}

fn map_entries(
    n_qubits: usize,
    input: &CMatrix,
    mut factor: impl FnMut(i32) -> C64,
) -> Result<CMatrix> {
    let w = weight_vector(n_qubits)?;
    let s = w.as_slice();
    let dim = s.len();
    if input.nrows() != dim || input.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: input.nrows(),
        });
    }
    let mut out = CMatrix::zeros(dim, dim);
    for x in 0..dim {
        out[(x, x)] = input[(x, x)] * factor(0);
        for y in x + 1..dim {
            let v = input[(x, y)] * factor(s[x] - s[y]);
            out[(x, y)] = v;
            out[(y, x)] = v.conj();
        }
    }
    Ok(out)
}

/// Averaged evolution of an arbitrary initial density matrix.
pub fn dephase_density(rho0: &DensityMatrix, spec: &EvolutionSpec) -> Result<DensityMatrix> {
    let n = rho0.n_qubits();
    let factors = coherence_factors(n, spec);
    let offset = 2 * n as i32;
    let m = map_entries(n, rho0.matrix(), |d| factors[(d + offset) as usize])?;
    Ok(DensityMatrix::from_trusted(n, m))
}

/// `∂ρ(t)/∂γ` for an arbitrary initial density matrix.
pub fn dephase_density_derivative(rho0: &DensityMatrix, spec: &EvolutionSpec) -> Result<CMatrix> {
    let n = rho0.n_qubits();
    let factors = coherence_factors(n, spec);
    let dbeta = spec.dbeta_dgamma();
    let offset = 2 * n as i32;
    map_entries(n, rho0.matrix(), |d| {
        let dd = d as f64;
        factors[(d + offset) as usize] * (-0.5 * dd * dd * dbeta)
    })
}

/// `ρ_xy(t) = ψ_x ψ_y* e^{−iω₀(s_x−s_y)t} e^{−(s_x−s_y)²β(t)/2}`.
pub fn dephase_common(psi0: &ProbeState, spec: &EvolutionSpec) -> Result<DensityMatrix> {
    dephase_density(&DensityMatrix::from_pure(psi0), spec)
}

/// Entrywise `∂_γρ_xy = ρ_xy(t) · (−(s_x−s_y)²/2) · ∂_γβ(t)`.
pub fn dephase_derivative(psi0: &ProbeState, spec: &EvolutionSpec) -> Result<CMatrix> {
    dephase_density_derivative(&DensityMatrix::from_pure(psi0), spec)
}

/// Monte Carlo estimate of the averaged state with entrywise standard errors
/// of the real and imaginary parts.
#[derive(Debug, Clone)]
pub struct McDensityEstimate {
    pub mean: CMatrix,
    pub std_error_re: DMatrix<f64>,
    pub std_error_im: DMatrix<f64>,
    pub n_traj: usize,
}

/// Per-Δ sums of `u = Re z`, `v = Im z` and their second moments.
#[derive(Clone, Copy, Default)]
struct PhaseMoments {
    u: f64,
    v: f64,
    uu: f64,
    vv: f64,
    uv: f64,
}

const MC_BLOCK: usize = 1024;

/// Averages `U ρ₀ U†` over sampled noise realizations.
pub fn mc_evolve_common_stats(
    psi0: &ProbeState,
    spec: &EvolutionSpec,
    settings: &McSettings,
) -> Result<McDensityEstimate> {
    if settings.n_traj < 2 {
        return Err(Error::domain("n_traj must be >= 2"));
    }
    let n = psi0.n_qubits();
    let span = 2 * n as i32;
    let n_delta = (2 * span + 1) as usize;
    let n_traj = settings.n_traj;
    let times = [spec.t()];

    let n_blocks = n_traj.div_ceil(MC_BLOCK);
    let blocks: Vec<Vec<PhaseMoments>> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let mut acc = vec![PhaseMoments::default(); n_delta];
            let mut phases = Vec::with_capacity(1);
            let end = ((block + 1) * MC_BLOCK).min(n_traj);
            for idx in block * MC_BLOCK..end {
                let mut rng = stream_rng(settings.seed, idx as u64);
                sample_phases(
                    &spec.params,
                    &times,
                    settings.max_gamma_dt,
                    &mut rng,
                    &mut phases,
                );
                let angle = spec.omega0 * spec.t() + phases[0];
                for (k, m) in acc.iter_mut().enumerate() {
                    let d = (k as i32 - span) as f64;
                    let (sin, cos) = (-angle * d).sin_cos();
                    m.u += cos;
                    m.v += sin;
                    m.uu += cos * cos;
                    m.vv += sin * sin;
                    m.uv += cos * sin;
                }
            }
            acc
        })
        .collect();

    let nf = n_traj as f64;
    // (mean z, var u, var v, cov uv) per Δ, variances of the sample mean
    let stats: Vec<(C64, f64, f64, f64)> = (0..n_delta)
        .map(|k| {
            let sum = |f: fn(&PhaseMoments) -> f64| ordered_sum(blocks.iter().map(|b| f(&b[k])));
            let mu = sum(|m| m.u) / nf;
            let mv = sum(|m| m.v) / nf;
            let scale = nf / (nf - 1.0) / nf;
            let var_u = ((sum(|m| m.uu) / nf - mu * mu) * scale).max(0.0);
            let var_v = ((sum(|m| m.vv) / nf - mv * mv) * scale).max(0.0);
            let cov = (sum(|m| m.uv) / nf - mu * mv) * scale;
            (C64::new(mu, mv), var_u, var_v, cov)
        })
        .collect();

    let rho0 = DensityMatrix::from_pure(psi0);
    let w = weight_vector(n)?;
    let s = w.as_slice();
    let dim = s.len();
    let mut mean = rho0.matrix().clone();
    let mut se_re = DMatrix::zeros(dim, dim);
    let mut se_im = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for y in 0..dim {
            let delta = s[x] - s[y];
            if delta == 0 {
                continue;
            }
            let (z, var_u, var_v, cov) = stats[(delta + span) as usize];
            let c = rho0.matrix()[(x, y)];
            mean[(x, y)] = c * z;
            let (a, b) = (c.re, c.im);
            se_re[(x, y)] = (a * a * var_u + b * b * var_v - 2.0 * a * b * cov)
                .max(0.0)
                .sqrt();
            se_im[(x, y)] = (a * a * var_v + b * b * var_u + 2.0 * a * b * cov)
                .max(0.0)
                .sqrt();
        }
    }
    Ok(McDensityEstimate {
        mean,
        std_error_re: se_re,
        std_error_im: se_im,
        n_traj,
    })
}

/// Monte Carlo average of the evolved state; oracle for [`dephase_common`].
pub fn mc_evolve_common(
    psi0: &ProbeState,
    spec: &EvolutionSpec,
    n_traj: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    let est = mc_evolve_common_stats(psi0, spec, &McSettings::new(n_traj, seed))?;
    Ok(DensityMatrix::from_trusted(psi0.n_qubits(), est.mean))
}
