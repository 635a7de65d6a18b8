//! Classical Gaussian dephasing noise.
//!
//! The probe phase is `φ(t) = ∫₀ᵗ B(s) ds` for a zero-mean stationary
//! Ornstein–Uhlenbeck process `B` with autocorrelation
//! `K(t, t') = ½ γ Γ e^{−γ|t−t'|}`. Gaussianity gives
//! `⟨e^{imφ(t)}⟩ = e^{−m² β(t)/2}`, where `β` is the double integral of `K`
//! over `[0, t]²`. Everything downstream depends on the noise only through
//! `β` and its derivative with respect to `γ`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{ordered_sum, stream_rng};

/// Below this value of `γt` the shape functions switch to their Taylor series.
pub const SERIES_SWITCHOVER: f64 = 1e-3;

/// Default bound on `γ·dt` for Monte Carlo phase integration.
pub const DEFAULT_MAX_GAMMA_DT: f64 = 0.01;

const MC_BLOCK: usize = 1024;

/// Parameters of the Ornstein–Uhlenbeck noise: spectral width `gamma` and
/// probe–environment coupling `coupling` (both in inverse time units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    gamma: f64,
    coupling: f64,
}

impl NoiseParams {
    pub fn new(gamma: f64, coupling: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::domain(format!(
                "gamma must be finite and > 0, got {gamma}"
            )));
        }
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(Error::domain(format!(
                "coupling must be finite and > 0, got {coupling}"
            )));
        }
        Ok(Self { gamma, coupling })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Same coupling, different spectral width.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.coupling)
    }

    /// Stationary variance `γΓ/2` of `B(t)`.
    pub fn stationary_variance(&self) -> f64 {
        0.5 * self.gamma * self.coupling
    }
}

/// A Gaussian noise kernel as seen by the probe.
///
/// Only the Ornstein–Uhlenbeck kernel is provided (implemented on
/// [`NoiseParams`]); other stationary Gaussian kernels plug in here.
pub trait NoiseKernel: Sync {
    /// Rate that sets the correlation time; Monte Carlo steps are sized from it.
    fn correlation_rate(&self) -> f64;

    /// `K(τ)` for lag `τ`.
    fn autocorrelation(&self, lag: f64) -> f64;

    /// `∫₀ᵗ∫₀ᵗ K(s, w) ds dw`.
    fn beta(&self, t: f64) -> Result<f64>;

    /// Derivative of [`NoiseKernel::beta`] with respect to the spectral width.
    fn dbeta_dgamma(&self, t: f64) -> Result<f64>;

    /// Draw `B(0)` from the stationary distribution.
    fn sample_stationary<R: Rng + ?Sized>(&self, rng: &mut R) -> f64;

    /// Advance `B` by `dt` with the exact transition law.
    fn advance<R: Rng + ?Sized>(&self, value: f64, dt: f64, rng: &mut R) -> f64;
}

/// `f(x) = e^{−x} + x − 1`.
fn shape(x: f64) -> f64 {
    if x < SERIES_SWITCHOVER {
        let x2 = x * x;
        x2 * (0.5 - x / 6.0 + x2 / 24.0 - x2 * x / 120.0 + x2 * x2 / 720.0 - x2 * x2 * x / 5040.0)
    } else {
        (-x).exp_m1() + x
    }
}

/// `x f'(x) − f(x) = 1 − (1 + x) e^{−x}`.
fn shape_dgamma(x: f64) -> f64 {
    if x < SERIES_SWITCHOVER {
        let x2 = x * x;
        x2 * (0.5 - x / 3.0 + x2 / 8.0 - x2 * x / 30.0 + x2 * x2 / 144.0 - x2 * x2 * x / 840.0)
    } else {
        -(-x).exp_m1() - x * (-x).exp()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::domain(format!("time must be >= 0, got {t}")))
    } else {
        Ok(())
    }
}

impl NoiseKernel for NoiseParams {
    fn correlation_rate(&self) -> f64 {
        self.gamma
    }

    fn autocorrelation(&self, lag: f64) -> f64 {
        self.stationary_variance() * (-self.gamma * lag.abs()).exp()
    }

    fn beta(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.coupling / self.gamma * shape(self.gamma * t))
    }

    fn dbeta_dgamma(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.coupling / (self.gamma * self.gamma) * shape_dgamma(self.gamma * t))
    }

    fn sample_stationary<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.stationary_variance().sqrt() * z
    }

    fn advance<R: Rng + ?Sized>(&self, value: f64, dt: f64, rng: &mut R) -> f64 {
        let decay = (-self.gamma * dt).exp();
        let spread = (self.stationary_variance() * -(-2.0 * self.gamma * dt).exp_m1()).sqrt();
        let z: f64 = rng.sample(StandardNormal);
        value * decay + spread * z
    }
}

/// `β(t) = (Γ/γ)(e^{−γt} + γt − 1)`.
pub fn beta(params: &NoiseParams, t: f64) -> Result<f64> {
    params.beta(t)
}

/// `∂β/∂γ = (Γ/γ²)[γt(1 − e^{−γt}) − (e^{−γt} + γt − 1)]`.
pub fn dbeta_dgamma(params: &NoiseParams, t: f64) -> Result<f64> {
    params.dbeta_dgamma(t)
}

/// A sampled noise realization on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OUTrajectory {
    pub dt: f64,
    /// `B(t_k)` for `k = 0..=n_steps`.
    pub values: Vec<f64>,
    pub seed: u64,
}

/// Samples an Ornstein–Uhlenbeck path with the exact discretization
/// `B_{k+1} = B_k e^{−γΔt} + σ√(1 − e^{−2γΔt}) ξ_k`, starting from the
/// stationary distribution.
pub fn sample_ou_trajectory(
    params: &NoiseParams,
    dt: f64,
    n_steps: usize,
    seed: u64,
) -> Result<OUTrajectory> {
    if n_steps > 0 && !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!(
            "dt must be > 0 when n_steps > 0, got {dt}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut b = params.sample_stationary(&mut rng);
    values.push(b);
    for _ in 0..n_steps {
        b = params.advance(b, dt, &mut rng);
        values.push(b);
    }
    Ok(OUTrajectory { dt, values, seed })
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl MCEstimate {
    pub(crate) fn from_sums(sum: f64, sum_sq: f64, n: usize) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / nf).sqrt(),
            n_samples: n,
        }
    }

    /// Standardized deviation of the estimate from `expected`; 0 when both the
    /// error and the deviation vanish.
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = self.mean - expected;
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                diff.signum() * f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

/// Settings for the Monte Carlo phase integrator.
#[derive(Debug, Clone, Copy)]
pub struct McSettings {
    pub n_traj: usize,
    pub seed: u64,
    /// Upper bound on `rate·dt` for each integration step.
    pub max_gamma_dt: f64,
}

impl McSettings {
    pub fn new(n_traj: usize, seed: u64) -> Self {
        Self {
            n_traj,
            seed,
            max_gamma_dt: DEFAULT_MAX_GAMMA_DT,
        }
    }
}

/// Accumulated phases `φ(t_j)` of one noise realization, integrated with the
/// trapezoidal rule. Steps are subdivided so every `t_j` lies on the grid.
pub(crate) fn sample_phases<K: NoiseKernel, R: Rng + ?Sized>(
    kernel: &K,
    times: &[f64],
    max_gamma_dt: f64,
    rng: &mut R,
    out: &mut Vec<f64>,
) {
    out.clear();
    let base_dt = max_gamma_dt / kernel.correlation_rate();
    let mut b = kernel.sample_stationary(rng);
    let mut phi = 0.0;
    let mut now = 0.0;
    for &t in times {
        let span = t - now;
        if span > 0.0 {
            let steps = (span / base_dt).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                let next = kernel.advance(b, dt, rng);
                phi += 0.5 * dt * (b + next);
                b = next;
            }
            now = t;
        }
        out.push(phi);
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::domain("time grid is empty"));
    }
    let mut prev = 0.0;
    for &t in times {
        if !t.is_finite() || t < prev {
            return Err(Error::domain(format!(
                "times must be finite, non-negative and non-decreasing (got {t} after {prev})"
            )));
        }
        prev = t;
    }
    Ok(())
}

/// Estimates `Re⟨e^{imφ(t)}⟩` at every time of an ascending grid, sharing the
/// same trajectories across grid points.
pub fn mc_characteristic_grid<K: NoiseKernel>(
    kernel: &K,
    times: &[f64],
    m: i32,
    settings: &McSettings,
) -> Result<Vec<MCEstimate>> {
    validate_times(times)?;
    if settings.n_traj < 2 {
        return Err(Error::domain("n_traj must be >= 2"));
    }
    if settings.max_gamma_dt.is_nan() || settings.max_gamma_dt <= 0.0 {
        return Err(Error::domain("max_gamma_dt must be > 0"));
    }
    let n = settings.n_traj;
    if m == 0 {
        return Ok(times
            .iter()
            .map(|_| MCEstimate {
                mean: 1.0,
                std_error: 0.0,
                n_samples: n,
            })
            .collect());
    }
    let mf = m as f64;
    let n_blocks = n.div_ceil(MC_BLOCK);
    let blocks: Vec<Vec<(f64, f64)>> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let mut sums = vec![(0.0, 0.0); times.len()];
            let mut phases = Vec::with_capacity(times.len());
            let end = ((block + 1) * MC_BLOCK).min(n);
            for idx in block * MC_BLOCK..end {
                let mut rng = stream_rng(settings.seed, idx as u64);
                sample_phases(kernel, times, settings.max_gamma_dt, &mut rng, &mut phases);
                for (acc, &phi) in sums.iter_mut().zip(&phases) {
                    let c = (mf * phi).cos();
                    acc.0 += c;
                    acc.1 += c * c;
                }
            }
            sums
        })
        .collect();
    Ok((0..times.len())
        .map(|j| {
            let sum = ordered_sum(blocks.iter().map(|b| b[j].0));
            let sum_sq = ordered_sum(blocks.iter().map(|b| b[j].1));
            MCEstimate::from_sums(sum, sum_sq, n)
        })
        .collect())
}

/// Estimates `Re⟨e^{imφ(t)}⟩`; the closed form is `e^{−m²β(t)/2}`.
pub fn mc_characteristic(
    params: &NoiseParams,
    t: f64,
    m: i32,
    n_traj: usize,
    seed: u64,
) -> Result<MCEstimate> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    let est = mc_characteristic_grid(params, &[t], m, &McSettings::new(n_traj, seed))?;
    Ok(est[0])
}
