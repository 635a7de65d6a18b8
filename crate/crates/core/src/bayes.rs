//! Simulated rank-2 measurements on the evolved GHZ probe and a grid
//! Bayesian estimator of the spectral width.
//!
//! Each measurement projects onto `(|0…0⟩ ± |1…1⟩)/√2`, so a run of `M`
//! shots is summarized by the number `k` of "+" outcomes. Starting from a
//! flat prior on `[prior_lo, prior_hi]`, the posterior mean is the estimate
//! and the posterior spread its error.

use rand::Rng;
use rand_distr::{Bernoulli, Binomial, Distribution};
use rayon::prelude::*;

use crate::analysis::{max_qfi, Probe};
use crate::closed_form::binary_outcome_probs;
use crate::dynamics::EvolutionSpec;
use crate::error::{Error, Result};
use crate::noise::NoiseParams;
use crate::rng::{ordered_sum, stream_rng};
use crate::state::check_qubits;

pub const DEFAULT_GRID_POINTS: usize = 2000;
pub const MIN_GRID_POINTS: usize = 100;
/// Default prior spans `[γ/5, 5γ]`.
pub const DEFAULT_PRIOR_FACTOR: f64 = 5.0;

/// One simulated estimation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub gamma_true: f64,
    pub coupling: f64,
    /// Measurement time; `None` selects the GHZ-optimal time at `gamma_true`.
    pub t_meas: Option<f64>,
    pub prior_lo: f64,
    pub prior_hi: f64,
    pub grid_points: usize,
    pub n_measurements: u64,
    pub n_repetitions: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Defaults: `Γ = 1`, optimal time, prior `[γ/5, 5γ]` on 2000 points,
    /// 1000 measurements, 100 repetitions.
    pub fn new(n_qubits: usize, gamma_true: f64) -> Self {
        Self {
            n_qubits,
            gamma_true,
            coupling: 1.0,
            t_meas: None,
            prior_lo: gamma_true / DEFAULT_PRIOR_FACTOR,
            prior_hi: gamma_true * DEFAULT_PRIOR_FACTOR,
            grid_points: DEFAULT_GRID_POINTS,
            n_measurements: 1000,
            n_repetitions: 100,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_qubits(self.n_qubits)?;
        NoiseParams::new(self.gamma_true, self.coupling)?;
        if !(self.prior_lo > 0.0
            && self.prior_lo < self.gamma_true
            && self.gamma_true < self.prior_hi)
            || !self.prior_hi.is_finite()
        {
            return Err(Error::domain(format!(
                "prior must satisfy 0 < prior_lo < gamma_true < prior_hi (got {} < {} < {})",
                self.prior_lo, self.gamma_true, self.prior_hi
            )));
        }
        if self.grid_points < MIN_GRID_POINTS {
            return Err(Error::domain(format!(
                "grid_points must be >= {MIN_GRID_POINTS}, got {}",
                self.grid_points
            )));
        }
        if self.n_measurements < 1 {
            return Err(Error::domain("number of measurements must be >= 1"));
        }
        if self.n_repetitions < 1 {
            return Err(Error::domain("number of repetitions must be >= 1"));
        }
        if let Some(t) = self.t_meas {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::domain(format!("t_meas must be >= 0, got {t}")));
            }
        }
        Ok(())
    }

    fn params_at(&self, gamma: f64) -> Result<NoiseParams> {
        NoiseParams::new(gamma, self.coupling)
    }

    /// The configured measurement time, or the GHZ-optimal one.
    pub fn measurement_time(&self) -> Result<f64> {
        match self.t_meas {
            Some(t) => Ok(t),
            None => {
                Ok(max_qfi(Probe::Ghz, self.n_qubits, &self.params_at(self.gamma_true)?)?.t_opt)
            }
        }
    }

    fn outcome_probs(&self, gamma: f64, t: f64) -> Result<(f64, f64)> {
        binary_outcome_probs(
            self.n_qubits,
            &EvolutionSpec::new(self.params_at(gamma)?, t)?,
        )
    }
}

/// Number of "+" outcomes in `M` simulated shots.
pub fn simulate_outcomes_with<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    t: f64,
    rng: &mut R,
) -> Result<u64> {
    let (plus, _) = config.outcome_probs(config.gamma_true, t)?;
    let dist = Binomial::new(config.n_measurements, plus)
        .map_err(|e| Error::domain(format!("binomial: {e}")))?;
    Ok(dist.sample(rng))
}

/// Number of "+" outcomes among `M` shots, drawn from stream 0 of the seed.
pub fn simulate_outcomes(config: &ExperimentConfig) -> Result<u64> {
    config.validate()?;
    let t = config.measurement_time()?;
    simulate_outcomes_with(config, t, &mut stream_rng(config.seed, 0))
}

/// The individual shots, `true` for "+".
pub fn simulate_outcome_sequence(config: &ExperimentConfig) -> Result<Vec<bool>> {
    config.validate()?;
    let t = config.measurement_time()?;
    let (plus, _) = config.outcome_probs(config.gamma_true, t)?;
    let dist = Bernoulli::new(plus).map_err(|e| Error::domain(format!("bernoulli: {e}")))?;
    let mut rng = stream_rng(config.seed, 0);
    Ok((0..config.n_measurements)
        .map(|_| dist.sample(&mut rng))
        .collect())
}

/// Posterior density on a uniform, cell-centred grid over the prior support.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorGrid {
    pub gammas: Vec<f64>,
    /// Density values; `Σ weights · spacing = 1`.
    pub weights: Vec<f64>,
    spacing: f64,
}

impl PosteriorGrid {
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// `Σ w_i Δγ`, which is 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        ordered_sum(self.weights.iter().copied()) * self.spacing
    }

    /// Grid point of highest density.
    pub fn mode(&self) -> f64 {
        let i =
            self.weights.iter().enumerate().fold(
                0,
                |best, (i, &w)| if w > self.weights[best] { i } else { best },
            );
        self.gammas[i]
    }
}

/// `ln p₊(γ)` and `ln p₋(γ)` on the grid, shared by every repetition.
#[derive(Debug, Clone)]
pub struct LikelihoodTable {
    gammas: Vec<f64>,
    ln_plus: Vec<f64>,
    ln_minus: Vec<f64>,
    spacing: f64,
}

impl LikelihoodTable {
    pub fn new(config: &ExperimentConfig, t: f64) -> Result<Self> {
        let n = config.grid_points;
        if n == 0 || !(config.prior_hi > config.prior_lo && config.prior_lo > 0.0) {
            return Err(Error::domain("invalid prior grid"));
        }
        let spacing = (config.prior_hi - config.prior_lo) / n as f64;
        let gammas: Vec<f64> = (0..n)
            .map(|i| config.prior_lo + (i as f64 + 0.5) * spacing)
            .collect();
        let mut ln_plus = Vec::with_capacity(n);
        let mut ln_minus = Vec::with_capacity(n);
        for &g in &gammas {
            let (p, m) = config.outcome_probs(g, t)?;
            ln_plus.push(p.ln());
            ln_minus.push(m.ln());
        }
        Ok(Self {
            gammas,
            ln_plus,
            ln_minus,
            spacing,
        })
    }

    fn normalize(&self, log_lik: Vec<f64>) -> Result<PosteriorGrid> {
        let peak = log_lik.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(Error::Underflow(
                "likelihood vanishes on the whole grid".into(),
            ));
        }
        let mut weights: Vec<f64> = log_lik.iter().map(|l| (l - peak).exp()).collect();
        let mass = ordered_sum(weights.iter().copied()) * self.spacing;
        for w in &mut weights {
            *w /= mass;
        }
        Ok(PosteriorGrid {
            gammas: self.gammas.clone(),
            weights,
            spacing: self.spacing,
        })
    }

    /// Posterior after `k` "+" outcomes in `m` shots.
    pub fn posterior(&self, k: u64, m: u64) -> Result<PosteriorGrid> {
        if k > m {
            return Err(Error::domain(format!(
                "k = {k} exceeds the number of shots {m}"
            )));
        }
        let (kf, rest) = (k as f64, (m - k) as f64);
        let log_lik = self
            .ln_plus
            .iter()
            .zip(&self.ln_minus)
            .map(|(&lp, &lm)| {
                let a = if k == 0 { 0.0 } else { kf * lp };
                let b = if m == k { 0.0 } else { rest * lm };
                a + b
            })
            .collect();
        self.normalize(log_lik)
    }

    /// Posterior updated one shot at a time.
    pub fn posterior_from_outcomes(&self, outcomes: &[bool]) -> Result<PosteriorGrid> {
        let mut log_lik = vec![0.0; self.gammas.len()];
        for &plus in outcomes {
            let table = if plus { &self.ln_plus } else { &self.ln_minus };
            for (l, &v) in log_lik.iter_mut().zip(table) {
                *l += v;
            }
        }
        self.normalize(log_lik)
    }
}

/// Flat-prior posterior after `k` "+" outcomes among the configured shots.
pub fn posterior(k: u64, config: &ExperimentConfig) -> Result<PosteriorGrid> {
    let t = config.measurement_time()?;
    LikelihoodTable::new(config, t)?.posterior(k, config.n_measurements)
}

/// Posterior mean and variance by grid quadrature.
pub fn estimate(post: &PosteriorGrid) -> (f64, f64) {
    let h = post.spacing;
    let mean = ordered_sum(post.gammas.iter().zip(&post.weights).map(|(g, w)| g * w)) * h;
    let var = ordered_sum(
        post.gammas
            .iter()
            .zip(&post.weights)
            .map(|(g, w)| (g - mean) * (g - mean) * w),
    ) * h;
    (mean, var)
}

/// Relative Cramér–Rao error `1/(γ√(M H_max))` for the given probe.
pub fn cr_bound(n_qubits: usize, gamma: f64, coupling: f64, m: u64, probe: Probe) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("number of measurements must be >= 1"));
    }
    let params = NoiseParams::new(gamma, coupling)?;
    let h = max_qfi(probe, n_qubits, &params)?.h_max;
    Ok(1.0 / (gamma * (m as f64 * h).sqrt()))
}

/// Relative error at one sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorCurvePoint {
    pub m: u64,
    /// Mean over repetitions of posterior std / posterior mean.
    pub epsilon: f64,
    /// Spread of the estimates across repetitions over their mean.
    pub epsilon_ensemble: f64,
    pub cr_epsilon: f64,
    /// Average of the posterior means.
    pub mean_estimate: f64,
    pub n_repetitions: usize,
}

/// Per-repetition estimate: (posterior mean, posterior variance).
pub fn repeated_estimates(
    config: &ExperimentConfig,
    table: &LikelihoodTable,
    t: f64,
    stream_base: u64,
) -> Result<Vec<(f64, f64)>> {
    (0..config.n_repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(config.seed, stream_base + rep as u64);
            let k = simulate_outcomes_with(config, t, &mut rng)?;
            Ok(estimate(&table.posterior(k, config.n_measurements)?))
        })
        .collect()
}

/// Bayesian relative error against the Cramér–Rao prediction for each
/// number of measurements in `ms`.
pub fn error_curve(config: &ExperimentConfig, ms: &[u64]) -> Result<Vec<ErrorCurvePoint>> {
    if ms.is_empty() {
        return Err(Error::domain("measurement list is empty"));
    }
    config.validate()?;
    let t = config.measurement_time()?;
    let table = LikelihoodTable::new(config, t)?;
    let h = max_qfi(
        Probe::Ghz,
        config.n_qubits,
        &config.params_at(config.gamma_true)?,
    )?
    .h_max;
    ms.iter()
        .enumerate()
        .map(|(idx, &m)| {
            let cfg = ExperimentConfig {
                n_measurements: m,
                ..config.clone()
            };
            cfg.validate()?;
            let runs = repeated_estimates(&cfg, &table, t, (idx as u64) << 32)?;
            let reps = runs.len() as f64;
            let epsilon = ordered_sum(runs.iter().map(|(mean, var)| var.sqrt() / mean)) / reps;
            let mean_estimate = ordered_sum(runs.iter().map(|r| r.0)) / reps;
            let spread = if runs.len() > 1 {
                (ordered_sum(runs.iter().map(|r| (r.0 - mean_estimate).powi(2))) / (reps - 1.0))
                    .sqrt()
            } else {
                0.0
            };
            Ok(ErrorCurvePoint {
                m,
                epsilon,
                epsilon_ensemble: spread / mean_estimate,
                cr_epsilon: 1.0 / (config.gamma_true * (m as f64 * h).sqrt()),
                mean_estimate,
                n_repetitions: runs.len(),
            })
        })
        .collect()
}
