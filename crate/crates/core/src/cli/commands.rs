use rayon::prelude::*;

use super::table::{num, status_of, Table, OK};
use super::{CliError, Command, Flags};
use crate::analysis::{
    closed_qfi, max_qfi, qfi_ratio, qsnr_invariance_scan, robustness_gamma_range, threshold_gamma0,
    threshold_purity, MixingModel, Probe,
};
use crate::bayes::{error_curve, ExperimentConfig, LikelihoodTable};
use crate::closed_form::{binary_measurement_fisher, qfi_ghz_closed};
use crate::dynamics::EvolutionSpec;
use crate::error::Error;
use crate::family::{haar_scan, optimize_family, DEFAULT_RESTARTS};
use crate::noise::{mc_characteristic_grid, McSettings, NoiseKernel, NoiseParams};
use crate::qfi::qfi_of_probe;
use crate::state::{ghz_state, MAX_QUBITS};

/// A validated subcommand, ready to run.
#[derive(Debug, Clone)]
pub enum Plan {
    BetaCheck {
        params: NoiseParams,
        times: Vec<f64>,
        n_traj: usize,
        seed: u64,
    },
    QfiScan {
        gammas: Vec<f64>,
        times: Vec<f64>,
        qubits: Vec<usize>,
        coupling: f64,
    },
    RatioScan {
        gammas: Vec<f64>,
        qubits: Vec<usize>,
        coupling: f64,
    },
    Threshold {
        qubits: Vec<usize>,
        coupling: f64,
    },
    HaarScan {
        gammas: Vec<f64>,
        qubits: Vec<usize>,
        coupling: f64,
        samples: usize,
        restarts: usize,
        seed: u64,
    },
    FamilyOpt {
        gammas: Vec<f64>,
        qubits: Vec<usize>,
        coupling: f64,
        restarts: usize,
        seed: u64,
    },
    BayesSim {
        configs: Vec<ExperimentConfig>,
        measurements: Vec<u64>,
    },
    Robustness {
        gammas: Option<Vec<f64>>,
        points: usize,
        qubits: Vec<usize>,
        models: Vec<MixingModel>,
        coupling: f64,
    },
    Selftest {
        samples: usize,
        seed: u64,
    },
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        usage(format!("--{name} must be a finite number > 0, got {v}"))
    }
}

fn qubit_list(flags: &Flags, default: &[usize], min: usize) -> Result<Vec<usize>, CliError> {
    let list: Vec<usize> = if flags.n_qubits.is_empty() {
        default.to_vec()
    } else {
        flags.n_qubits.iter().map(|&n| n as usize).collect()
    };
    for &n in &list {
        if n < min || n > MAX_QUBITS {
            return usage(format!(
                "--n-qubits must lie in [{min}, {MAX_QUBITS}], got {n}"
            ));
        }
    }
    Ok(list)
}

/// Scales a sample count for `--quick`, never below `floor`.
fn count(
    value: Option<u64>,
    default: usize,
    quick: bool,
    floor: usize,
    name: &str,
) -> Result<usize, CliError> {
    let v = value.map_or(default, |v| v as usize);
    let v = if quick { (v / 10).max(floor) } else { v };
    if v < floor {
        return usage(format!("--{name} must be >= {floor}, got {v}"));
    }
    Ok(v)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn has_grid(flags: &Flags) -> bool {
    flags.gamma_min.is_some() || flags.gamma_max.is_some() || flags.gamma_points.is_some()
}

/// `--gamma` alone, or the log grid from `--gamma-min/max/points` with the
/// given defaults.
fn gamma_values(flags: &Flags, default: (f64, f64, usize)) -> Result<Vec<f64>, CliError> {
    if let Some(g) = flags.gamma {
        if has_grid(flags) {
            return usage("--gamma cannot be combined with --gamma-min/--gamma-max/--gamma-points");
        }
        return Ok(vec![positive("gamma", g)?]);
    }
    let lo = positive("gamma-min", flags.gamma_min.unwrap_or(default.0))?;
    let hi = positive("gamma-max", flags.gamma_max.unwrap_or(default.1))?;
    let n = flags.gamma_points.map_or(default.2, |n| n as usize);
    if n == 0 {
        return usage("--gamma-points must be >= 1");
    }
    if n > 1 && lo >= hi {
        return usage(format!(
            "--gamma-min ({lo}) must be below --gamma-max ({hi})"
        ));
    }
    Ok(log_grid(lo, hi, n))
}

fn time_values(flags: &Flags, default: Vec<f64>, ascending: bool) -> Result<Vec<f64>, CliError> {
    let times = if flags.time.is_empty() {
        default
    } else {
        flags.time.clone()
    };
    let mut prev = 0.0;
    for &t in &times {
        if !t.is_finite() || t < 0.0 {
            return usage(format!("--time values must be >= 0, got {t}"));
        }
        if ascending && t < prev {
            return usage("--time values must be non-decreasing");
        }
        prev = t;
    }
    Ok(times)
}

impl Plan {
    /// Validates every input the subcommand uses. Nothing is computed here.
    pub fn new(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let coupling = positive("coupling", flags.coupling.unwrap_or(1.0))?;
        let seed = flags.seed.unwrap_or(0);
        let quick = flags.quick;
        let plan = match command {
            Command::BetaCheck => {
                let gamma = positive("gamma", flags.gamma.unwrap_or(1.0))?;
                let default: Vec<f64> = (0..20)
                    .map(|i| 0.01 + (5.0 - 0.01) * i as f64 / 19.0)
                    .collect();
                Plan::BetaCheck {
                    params: NoiseParams::new(gamma, coupling)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                    times: time_values(flags, default, true)?,
                    n_traj: count(flags.samples, 100_000, quick, 2, "samples")?,
                    seed,
                }
            }
            Command::QfiScan => Plan::QfiScan {
                gammas: gamma_values(flags, (0.1, 100.0, 7))?,
                times: time_values(flags, log_grid(0.01, 10.0, 12), false)?,
                qubits: qubit_list(flags, &[1, 2, 3, 4, 5], 1)?,
                coupling,
            },
            Command::RatioScan => Plan::RatioScan {
                gammas: gamma_values(flags, (1e-3, 1e3, 40))?,
                qubits: qubit_list(flags, &[1, 2, 3, 4, 5], 1)?,
                coupling,
            },
            Command::Threshold => Plan::Threshold {
                qubits: qubit_list(flags, &[2, 3, 4, 5], 2)?,
                coupling,
            },
            Command::HaarScan => Plan::HaarScan {
                gammas: gamma_values(flags, (10.0, 10.0, 1))?,
                qubits: qubit_list(flags, &[2, 3], 1)?,
                coupling,
                samples: count(flags.samples, 10_000, quick, 1, "samples")?,
                restarts: count(flags.restarts, DEFAULT_RESTARTS, quick, 1, "restarts")?,
                seed,
            },
            Command::FamilyOpt => Plan::FamilyOpt {
                gammas: gamma_values(flags, (1e-2, 1e2, 9))?,
                qubits: qubit_list(flags, &[2, 3], 2)?,
                coupling,
                restarts: count(flags.restarts, DEFAULT_RESTARTS, quick, 1, "restarts")?,
                seed,
            },
            Command::BayesSim => {
                let gamma = positive("gamma", flags.gamma.unwrap_or(10.0))?;
                let measurements = if flags.measurements.is_empty() {
                    vec![100, 1_000, 10_000, 100_000]
                } else {
                    flags.measurements.clone()
                };
                if flags.time.len() > 1 {
                    return usage("bayes-sim takes a single --time");
                }
                let repetitions = count(flags.repetitions, 100, quick, 1, "repetitions")?;
                let mut configs = Vec::new();
                for n in qubit_list(flags, &[1, 4], 1)? {
                    let base = ExperimentConfig::new(n, gamma);
                    let cfg = ExperimentConfig {
                        coupling,
                        t_meas: flags.time.first().copied(),
                        prior_lo: flags.prior_lo.unwrap_or(base.prior_lo),
                        prior_hi: flags.prior_hi.unwrap_or(base.prior_hi),
                        grid_points: flags.grid_points.map_or(base.grid_points, |g| g as usize),
                        n_repetitions: repetitions,
                        seed,
                        ..base
                    };
                    for &m in &measurements {
                        ExperimentConfig {
                            n_measurements: m,
                            ..cfg.clone()
                        }
                        .validate()
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    }
                    configs.push(cfg);
                }
                Plan::BayesSim {
                    configs,
                    measurements,
                }
            }
            Command::Robustness => {
                let models = match &flags.model {
                    Some(m) => vec![m
                        .parse::<MixingModel>()
                        .map_err(|e| CliError::Usage(e.to_string()))?],
                    None => vec![MixingModel::Depolarized, MixingModel::Dephased],
                };
                let points = flags.gamma_points.map_or(30, |n| n as usize);
                if points < 1 {
                    return usage("--gamma-points must be >= 1");
                }
                if flags.gamma_min.is_some() != flags.gamma_max.is_some() {
                    return usage("robustness needs both --gamma-min and --gamma-max, or neither");
                }
                let gammas = if flags.gamma.is_some() || flags.gamma_min.is_some() {
                    Some(gamma_values(flags, (f64::NAN, f64::NAN, points))?)
                } else {
                    None
                };
                Plan::Robustness {
                    gammas,
                    points,
                    qubits: qubit_list(flags, &[2, 3, 4, 5], 2)?,
                    models,
                    coupling,
                }
            }
            Command::Selftest => Plan::Selftest {
                samples: count(flags.samples, 10_000, quick, 2, "samples")?,
                seed,
            },
        };
        Ok(plan)
    }

    pub fn execute(&self) -> Result<super::Table, CliError> {
        match self {
            Plan::BetaCheck {
                params,
                times,
                n_traj,
                seed,
            } => beta_check(params, times, *n_traj, *seed),
            Plan::QfiScan {
                gammas,
                times,
                qubits,
                coupling,
            } => Ok(qfi_scan(gammas, times, qubits, *coupling)),
            Plan::RatioScan {
                gammas,
                qubits,
                coupling,
            } => Ok(ratio_scan(gammas, qubits, *coupling)),
            Plan::Threshold { qubits, coupling } => Ok(threshold(qubits, *coupling)),
            Plan::HaarScan {
                gammas,
                qubits,
                coupling,
                samples,
                restarts,
                seed,
            } => haar(gammas, qubits, *coupling, *samples, *restarts, *seed),
            Plan::FamilyOpt {
                gammas,
                qubits,
                coupling,
                restarts,
                seed,
            } => Ok(family_opt(gammas, qubits, *coupling, *restarts, *seed)),
            Plan::BayesSim {
                configs,
                measurements,
            } => Ok(bayes_sim(configs, measurements)),
            Plan::Robustness {
                gammas,
                points,
                qubits,
                models,
                coupling,
            } => Ok(robustness(
                gammas.as_deref(),
                *points,
                qubits,
                models,
                *coupling,
            )),
            Plan::Selftest { samples, seed } => Ok(selftest(*samples, *seed)),
        }
    }
}

fn internal(e: Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Row with `n` empty numeric cells and an error status.
fn failed_row(mut prefix: Vec<String>, n_numeric: usize, err: &Error) -> Vec<String> {
    prefix.extend(std::iter::repeat_n(String::new(), n_numeric));
    prefix.push(status_of(err));
    prefix
}

fn beta_check(
    params: &NoiseParams,
    times: &[f64],
    n_traj: usize,
    seed: u64,
) -> Result<Table, CliError> {
    let mut table = Table::new(&[
        "t",
        "beta_analytic",
        "mc_mean",
        "mc_stderr",
        "z_score",
        "status",
    ]);
    let est = mc_characteristic_grid(params, times, 1, &McSettings::new(n_traj, seed))
        .map_err(internal)?;
    for (&t, e) in times.iter().zip(&est) {
        let beta = params.beta(t).map_err(internal)?;
        let z = e.z_score((-0.5 * beta).exp());
        table.push(vec![
            num(t),
            num(beta),
            num(e.mean),
            num(e.std_error),
            num(z),
            OK.into(),
        ]);
    }
    Ok(table)
}

fn qfi_scan(gammas: &[f64], times: &[f64], qubits: &[usize], coupling: f64) -> Table {
    let mut table = Table::new(&["gamma", "N", "t", "h_sep", "h_ghz", "h_ghz_eig", "status"]);
    let points: Vec<(f64, usize, f64)> = gammas
        .iter()
        .flat_map(|&g| {
            qubits
                .iter()
                .flat_map(move |&n| times.iter().map(move |&t| (g, n, t)))
        })
        .collect();
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(gamma, n, t)| {
            let prefix = vec![num(gamma), n.to_string(), num(t)];
            let values = (|| {
                let params = NoiseParams::new(gamma, coupling)?;
                let sep = closed_qfi(Probe::Separable, n, &params, t)?;
                let ghz = closed_qfi(Probe::Ghz, n, &params, t)?;
                let eig = qfi_of_probe(&ghz_state(n)?, &EvolutionSpec::new(params, t)?)?;
                Ok::<_, Error>([sep, ghz, eig])
            })();
            match values {
                Ok(v) => {
                    let mut row = prefix;
                    row.extend(v.iter().map(|&x| num(x)));
                    row.push(OK.into());
                    row
                }
                Err(e) => failed_row(prefix, 3, &e),
            }
        })
        .collect();
    rows.into_iter().for_each(|r| table.push(r));
    table
}

fn ratio_scan(gammas: &[f64], qubits: &[usize], coupling: f64) -> Table {
    let mut table = Table::new(&[
        "gamma",
        "N",
        "h_sep_max",
        "t_opt_sep",
        "h_ghz_max",
        "t_opt_ghz",
        "ratio",
        "status",
    ]);
    let points: Vec<(usize, f64)> = qubits
        .iter()
        .flat_map(|&n| gammas.iter().map(move |&g| (n, g)))
        .collect();
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(n, gamma)| {
            let prefix = vec![num(gamma), n.to_string()];
            let result = NoiseParams::new(gamma, coupling).and_then(|p| {
                Ok((
                    max_qfi(Probe::Separable, n, &p)?,
                    max_qfi(Probe::Ghz, n, &p)?,
                ))
            });
            match result {
                Ok((sep, ghz)) => {
                    let mut row = prefix;
                    row.extend(
                        [
                            sep.h_max,
                            sep.t_opt,
                            ghz.h_max,
                            ghz.t_opt,
                            ghz.h_max / sep.h_max,
                        ]
                        .map(num),
                    );
                    row.push(OK.into());
                    row
                }
                Err(e) => failed_row(prefix, 5, &e),
            }
        })
        .collect();
    rows.into_iter().for_each(|r| table.push(r));
    table
}

fn threshold(qubits: &[usize], coupling: f64) -> Table {
    let mut table = Table::new(&["N", "gamma0", "residual", "iterations", "status"]);
    let rows: Vec<Vec<String>> = qubits
        .par_iter()
        .map(|&n| match threshold_gamma0(n, coupling) {
            Ok(r) => vec![
                n.to_string(),
                num(r.value),
                num(r.residual),
                r.iterations.to_string(),
                OK.into(),
            ],
            Err(e) => failed_row(vec![n.to_string()], 3, &e),
        })
        .collect();
    rows.into_iter().for_each(|r| table.push(r));
    table
}

fn haar(
    gammas: &[f64],
    qubits: &[usize],
    coupling: f64,
    samples: usize,
    restarts: usize,
    seed: u64,
) -> Result<Table, CliError> {
    let mut table = Table::new(&[
        "kind",
        "sample_id",
        "gamma",
        "N",
        "h_max",
        "t_opt",
        "ratio_vs_sep",
        "status",
    ]);
    for &gamma in gammas {
        for &n in qubits {
            let params = NoiseParams::new(gamma, coupling).map_err(internal)?;
            let sep = max_qfi(Probe::Separable, n, &params)
                .map_err(internal)?
                .h_max;
            let base =
                |kind: &str, id: String| vec![kind.to_string(), id, num(gamma), n.to_string()];
            for (i, r) in haar_scan(n, &params, samples, seed)
                .map_err(internal)?
                .iter()
                .enumerate()
            {
                let mut row = base("random", i.to_string());
                row.extend([r.h_max, r.t_opt, r.h_max / sep].map(num));
                row.push(OK.into());
                table.push(row);
            }
            let ghz = max_qfi(Probe::Ghz, n, &params).map_err(internal)?;
            let mut row = base("ghz", String::new());
            row.extend([ghz.h_max, ghz.t_opt, ghz.h_max / sep].map(num));
            row.push(OK.into());
            table.push(row);
            let row = match optimize_family(n, &params, restarts, seed) {
                Ok(f) => {
                    let mut row = base("family", String::new());
                    row.extend([f.qfi, f.t_opt, f.qfi / sep].map(num));
                    row.push(OK.into());
                    row
                }
                Err(e) => failed_row(base("family", String::new()), 3, &e),
            };
            table.push(row);
        }
    }
    Ok(table)
}

fn family_opt(
    gammas: &[f64],
    qubits: &[usize],
    coupling: f64,
    restarts: usize,
    seed: u64,
) -> Table {
    let mut table = Table::new(&[
        "gamma",
        "N",
        "h_family",
        "t_opt_family",
        "h_ghz",
        "t_opt_ghz",
        "ratio_vs_ghz",
        "converged",
        "coefficients",
        "status",
    ]);
    for &n in qubits {
        for &gamma in gammas {
            let prefix = vec![num(gamma), n.to_string()];
            let result = NoiseParams::new(gamma, coupling).and_then(|p| {
                Ok((
                    optimize_family(n, &p, restarts, seed)?,
                    max_qfi(Probe::Ghz, n, &p)?,
                ))
            });
            let row = match result {
                Ok((f, ghz)) => {
                    let mut row = prefix;
                    row.extend([f.qfi, f.t_opt, ghz.h_max, ghz.t_opt, f.qfi / ghz.h_max].map(num));
                    row.push(f.converged.to_string());
                    let coeffs: Vec<String> =
                        f.coeffs.coefficients().iter().map(|&a| num(a)).collect();
                    row.push(coeffs.join(";"));
                    row.push(OK.into());
                    row
                }
                Err(e) => failed_row(prefix, 7, &e),
            };
            table.push(row);
        }
    }
    table
}

fn bayes_sim(configs: &[ExperimentConfig], measurements: &[u64]) -> Table {
    let mut table = Table::new(&[
        "N",
        "M",
        "epsilon_posterior",
        "epsilon_ensemble",
        "cr_epsilon",
        "n_repetitions",
        "mean_estimate",
        "status",
    ]);
    for cfg in configs {
        match error_curve(cfg, measurements) {
            Ok(points) => {
                for p in points {
                    table.push(vec![
                        cfg.n_qubits.to_string(),
                        p.m.to_string(),
                        num(p.epsilon),
                        num(p.epsilon_ensemble),
                        num(p.cr_epsilon),
                        p.n_repetitions.to_string(),
                        num(p.mean_estimate),
                        OK.into(),
                    ]);
                }
            }
            Err(e) => {
                for &m in measurements {
                    table.push(failed_row(
                        vec![cfg.n_qubits.to_string(), m.to_string()],
                        5,
                        &e,
                    ));
                }
            }
        }
    }
    table
}

fn robustness(
    gammas: Option<&[f64]>,
    points: usize,
    qubits: &[usize],
    models: &[MixingModel],
    coupling: f64,
) -> Table {
    let mut table = Table::new(&[
        "gamma",
        "N",
        "model",
        "mixing_param_threshold",
        "purity_threshold",
        "status",
    ]);
    for &n in qubits {
        let grid = match gammas {
            Some(g) => Ok(g.to_vec()),
            None => robustness_gamma_range(n, coupling).map(|(lo, hi)| log_grid(lo, hi, points)),
        };
        let grid = match grid {
            Ok(g) => g,
            Err(e) => {
                for m in models {
                    table.push(failed_row(
                        vec![String::new(), n.to_string(), m.name().into()],
                        2,
                        &e,
                    ));
                }
                continue;
            }
        };
        for &model in models {
            let rows: Vec<Vec<String>> = grid
                .par_iter()
                .map(|&gamma| {
                    let prefix = vec![num(gamma), n.to_string(), model.name().into()];
                    match NoiseParams::new(gamma, coupling)
                        .and_then(|p| threshold_purity(n, &p, model))
                    {
                        Ok(r) => {
                            let mut row = prefix;
                            row.extend([num(r.mixing), num(r.purity), OK.into()]);
                            row
                        }
                        Err(e) => failed_row(prefix, 2, &e),
                    }
                })
                .collect();
            rows.into_iter().for_each(|r| table.push(r));
        }
    }
    table
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

type Check = (
    &'static str,
    Box<dyn Fn() -> Result<f64, Error> + Sync>,
    f64,
);

/// Fast versions of the main oracle checks.
fn selftest(samples: usize, seed: u64) -> Table {
    let mut table = Table::new(&["check", "value", "tolerance", "status"]);
    let checks: Vec<Check> = vec![
        (
            "beta_mc_max_abs_z",
            Box::new(move || {
                let p = NoiseParams::new(1.0, 1.0)?;
                let times: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
                let est = mc_characteristic_grid(&p, &times, 1, &McSettings::new(samples, seed))?;
                let mut worst: f64 = 0.0;
                for (&t, e) in times.iter().zip(&est) {
                    worst = worst.max(e.z_score((-0.5 * p.beta(t)?).exp()).abs());
                }
                Ok(worst)
            }),
            4.0,
        ),
        (
            "eig_vs_closed_max_rel",
            Box::new(|| {
                let mut worst: f64 = 0.0;
                for n in 1..=4 {
                    for (g, t) in [(0.5, 0.1), (0.5, 1.0), (5.0, 0.1), (5.0, 1.0)] {
                        let spec = EvolutionSpec::new(NoiseParams::new(g, 1.0)?, t)?;
                        worst = worst.max(rel(
                            qfi_of_probe(&ghz_state(n)?, &spec)?,
                            qfi_ghz_closed(n, &spec)?,
                        ));
                    }
                }
                Ok(worst)
            }),
            1e-8,
        ),
        (
            "binary_fisher_max_rel",
            Box::new(|| {
                let mut worst: f64 = 0.0;
                for n in 1..=5 {
                    for g in [0.1, 1.0, 10.0] {
                        for t in [0.05, 0.5, 2.0] {
                            let spec = EvolutionSpec::new(NoiseParams::new(g, 1.0)?, t)?;
                            worst = worst.max(rel(
                                binary_measurement_fisher(n, &spec)?,
                                qfi_ghz_closed(n, &spec)?,
                            ));
                        }
                    }
                }
                Ok(worst)
            }),
            1e-10,
        ),
        (
            "ratio_high_width_rel_to_n",
            Box::new(|| Ok(rel(qfi_ratio(2, 1e3, 1.0)?, 2.0))),
            0.05,
        ),
        (
            "ratio_low_width_rel_to_inv_n",
            Box::new(|| Ok(rel(qfi_ratio(2, 1e-3, 1.0)?, 0.5))),
            0.05,
        ),
        (
            "mixed_limits_max_rel",
            Box::new(|| {
                let mut worst: f64 = 0.0;
                for n in 2..=5 {
                    let p = NoiseParams::new(3.0, 1.0)?;
                    let ghz = closed_qfi(Probe::Ghz, n, &p, 0.2)?;
                    worst = worst.max(rel(closed_qfi(Probe::Depolarized(1.0), n, &p, 0.2)?, ghz));
                    worst = worst.max(rel(closed_qfi(Probe::Dephased(1.0), n, &p, 0.2)?, ghz));
                }
                Ok(worst)
            }),
            1e-12,
        ),
        (
            "qsnr_coupling_spread",
            Box::new(|| {
                let v = qsnr_invariance_scan(2, Probe::Ghz, 10.0, &[0.1, 1.0, 10.0])?;
                Ok(v.iter().map(|&x| rel(x, v[1])).fold(0.0, f64::max))
            }),
            1e-6,
        ),
        (
            "posterior_mass_error",
            Box::new(|| {
                let cfg = ExperimentConfig {
                    n_measurements: 1000,
                    ..ExperimentConfig::new(2, 10.0)
                };
                let t = cfg.measurement_time()?;
                let post = LikelihoodTable::new(&cfg, t)?.posterior(400, 1000)?;
                Ok((post.total_mass() - 1.0).abs())
            }),
            1e-10,
        ),
    ];
    let results: Vec<(String, String, bool)> = checks
        .par_iter()
        .map(|(_, check, tol)| match check() {
            Ok(v) => (
                num(v),
                if v <= *tol {
                    "pass".into()
                } else {
                    "fail".into()
                },
                v <= *tol,
            ),
            Err(e) => (String::new(), status_of(&e), false),
        })
        .collect();
    for ((name, _, tol), (value, status, pass)) in checks.iter().zip(results) {
        if !pass {
            table.mark_failed();
        }
        table.push(vec![name.to_string(), value, num(*tol), status]);
    }
    table
}
