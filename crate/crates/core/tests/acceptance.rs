//! End-to-end acceptance checks. Each test prints one `criterion N [PASS]`
//! or `[FAIL]` line, then asserts.

mod common;

use std::time::Instant;

use common::{log_grid, rel, report};
use entangled_probes::analysis::{
    closed_qfi, max_qfi, qfi_ratio, qsnr_invariance_scan, robustness_gamma_range, threshold_gamma0,
    threshold_purity, MixingModel, Probe,
};
use entangled_probes::bayes::{error_curve, ExperimentConfig, LikelihoodTable};
use entangled_probes::closed_form::{
    binary_measurement_fisher, qfi_dephased, qfi_depolarized, qfi_ghz_closed, qfi_sep_closed,
};
use entangled_probes::dynamics::{dephase_common, dephase_derivative};
use entangled_probes::family::{haar_random_state, haar_scan, optimize_family, DEFAULT_RESTARTS};
use entangled_probes::noise::{mc_characteristic_grid, McSettings};
use entangled_probes::qfi::qfi_of_probe;
use entangled_probes::{ghz_state, EvolutionSpec, NoiseKernel, NoiseParams};

fn ou(gamma: f64, coupling: f64) -> NoiseParams {
    NoiseParams::new(gamma, coupling).unwrap()
}

#[test]
fn criterion_01_beta_monte_carlo_oracle() {
    let start = Instant::now();
    let times: Vec<f64> = (0..20)
        .map(|i| 0.01 + (5.0 - 0.01) * i as f64 / 19.0)
        .collect();
    let mut worst: f64 = 0.0;
    for (k, (g, c)) in [(1.0, 1.0), (5.0, 1.0), (1.0, 3.0)].into_iter().enumerate() {
        let params = ou(g, c);
        let est = mc_characteristic_grid(
            &params,
            &times,
            1,
            &McSettings::new(100_000, 1000 + k as u64),
        )
        .unwrap();
        for (&t, e) in times.iter().zip(&est) {
            let exact = (-0.5 * params.beta(t).unwrap()).exp();
            worst = worst.max(e.z_score(exact).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 4.0 && secs < 60.0;
    report(
        1,
        "beta oracle",
        pass,
        &format!("max |z| = {worst:.3} over 60 points, {secs:.1} s"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_eigendecomposition_matches_closed_forms() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=5 {
        for gamma in [0.1, 1.0, 10.0, 100.0] {
            let params = ou(gamma, 1.0);
            let t_opt = max_qfi(Probe::Ghz, n, &params).unwrap().t_opt;
            for scale in [0.25, 1.0, 2.5] {
                let spec = EvolutionSpec::new(params, scale * t_opt).unwrap();
                let general = qfi_of_probe(&ghz_state(n).unwrap(), &spec).unwrap();
                let closed = if n == 1 {
                    qfi_sep_closed(1, &spec).unwrap()
                } else {
                    qfi_ghz_closed(n, &spec).unwrap()
                };
                worst = worst.max(rel(general, closed));
                count += 1;
            }
        }
    }
    let pass = worst < 1e-8;
    report(
        2,
        "closed-form consistency",
        pass,
        &format!("max rel err {worst:.2e} over {count} points"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_binary_measurement_is_optimal() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=5 {
        for gamma in log_grid(1e-2, 1e2, 20) {
            let params = ou(gamma, 1.0);
            let t_opt = max_qfi(Probe::Ghz, n, &params).unwrap().t_opt;
            for t in log_grid(0.1 * t_opt, 10.0 * t_opt, 20) {
                let spec = EvolutionSpec::new(params, t).unwrap();
                let f = binary_measurement_fisher(n, &spec).unwrap();
                let h = qfi_ghz_closed(n, &spec).unwrap();
                assert!(
                    h.is_normal(),
                    "grid reaches subnormal QFI at N={n} gamma={gamma} t={t}"
                );
                worst = worst.max(rel(f, h));
                count += 1;
            }
        }
    }
    let pass = worst < 1e-10;
    report(
        3,
        "measurement optimality",
        pass,
        &format!("max rel err {worst:.2e} over {count} points"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_ratio_asymptotes_and_single_crossing() {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 2..=4 {
        let nf = n as f64;
        let low = qfi_ratio(n, 1e-3, 1.0).unwrap();
        let high = qfi_ratio(n, 1e3, 1.0).unwrap();
        let curve: Vec<f64> = log_grid(1e-3, 1e3, 40)
            .iter()
            .map(|&g| qfi_ratio(n, g, 1.0).unwrap())
            .collect();
        let monotone = curve.windows(2).all(|w| w[1] > w[0]);
        let crossings = curve
            .windows(2)
            .filter(|w| (w[0] - 1.0).signum() != (w[1] - 1.0).signum())
            .count();
        let ok = rel(low, 1.0 / nf) <= 0.05 && rel(high, nf) <= 0.05 && monotone && crossings == 1;
        pass &= ok;
        notes.push(format!(
            "N={n}: R(1e-3)={low:.4} R(1e3)={high:.4} monotone={monotone} crossings={crossings}"
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 60.0;
    report(
        4,
        "ratio asymptotes",
        pass,
        &format!("{}; {secs:.1} s", notes.join("; ")),
    );
    assert!(pass);
}

#[test]
fn criterion_05_coupling_invariance() {
    let mut worst_qsnr: f64 = 0.0;
    for n in 1..=5 {
        for probe in [Probe::Separable, Probe::Ghz] {
            for gt in [0.5, 10.0] {
                let v = qsnr_invariance_scan(n, probe, gt, &[0.1, 1.0, 10.0]).unwrap();
                for x in &v {
                    worst_qsnr = worst_qsnr.max(rel(*x, v[1]));
                }
            }
        }
    }
    let mut worst_g0: f64 = 0.0;
    for n in 2..=5 {
        let base = threshold_gamma0(n, 1.0).unwrap().value;
        for c in [0.1, 2.0, 10.0] {
            worst_g0 = worst_g0.max(rel(threshold_gamma0(n, c).unwrap().value / c, base));
        }
    }
    let pass = worst_qsnr < 1e-6 && worst_g0 < 1e-4;
    report(
        5,
        "coupling invariance",
        pass,
        &format!("QSNR spread {worst_qsnr:.2e}, gamma0/coupling spread {worst_g0:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_ghz_is_extremal_above_threshold() {
    let start = Instant::now();
    let params = ou(10.0, 1.0);
    let mut notes = Vec::new();
    let mut pass = true;
    for n in [2, 3] {
        let ghz = max_qfi(Probe::Ghz, n, &params).unwrap().h_max;
        let samples = haar_scan(n, &params, 10_000, 600 + n as u64).unwrap();
        assert_eq!(samples.len(), 10_000);
        let best = samples.iter().map(|r| r.h_max).fold(0.0, f64::max);
        let family = optimize_family(n, &params, DEFAULT_RESTARTS, 60).unwrap();
        let ok = best <= ghz * (1.0 + 1e-6) && rel(family.qfi, ghz) <= 1e-6;
        pass &= ok;
        notes.push(format!(
            "N={n}: best random/GHZ={:.4}, family rel diff {:.1e}",
            best / ghz,
            rel(family.qfi, ghz)
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    report(
        6,
        "GHZ extremality",
        pass,
        &format!("{}; {secs:.1} s", notes.join("; ")),
    );
    assert!(pass);
}

#[test]
fn criterion_07_family_beats_ghz_below_threshold() {
    let params = ou(1e-2, 1.0);
    let mut notes = Vec::new();
    let mut pass = true;
    for n in [2, 3] {
        let ghz = max_qfi(Probe::Ghz, n, &params).unwrap().h_max;
        let family = optimize_family(n, &params, DEFAULT_RESTARTS, 70).unwrap();
        pass &= family.qfi >= ghz;
        notes.push(format!("N={n}: family/GHZ={:.4}", family.qfi / ghz));
    }
    report(7, "family below threshold", pass, &notes.join("; "));
    assert!(pass);
}

#[test]
fn criterion_08_bayes_saturates_cramer_rao() {
    let start = Instant::now();
    let ms = [100, 1_000, 10_000, 100_000];
    let curves: Vec<_> = [1, 4]
        .into_iter()
        .map(|n| {
            let cfg = ExperimentConfig {
                n_repetitions: 100,
                seed: 8,
                ..ExperimentConfig::new(n, 10.0)
            };
            error_curve(&cfg, &ms).unwrap()
        })
        .collect();
    let ratio = |c: &[entangled_probes::bayes::ErrorCurvePoint]| c[3].epsilon / c[3].cr_epsilon;
    let (r1, r4) = (ratio(&curves[0]), ratio(&curves[1]));
    let ordered = curves[0]
        .iter()
        .zip(&curves[1])
        .all(|(a, b)| b.epsilon < a.epsilon);
    let secs = start.elapsed().as_secs_f64();
    let pass = (0.8..=1.3).contains(&r1) && (0.8..=1.3).contains(&r4) && ordered && secs < 300.0;
    let eps = |c: &[entangled_probes::bayes::ErrorCurvePoint]| {
        c.iter()
            .map(|p| format!("{:.4}", p.epsilon))
            .collect::<Vec<_>>()
            .join("/")
    };
    report(
        8,
        "Cramer-Rao saturation",
        pass,
        &format!(
            "eps/CR at M=1e5: N=1 {r1:.3}, N=4 {r4:.3}; eps N=1 {}, N=4 {}; {secs:.1} s",
            eps(&curves[0]),
            eps(&curves[1])
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_purity_threshold_shape() {
    const END_PURITY: f64 = 0.95;
    let mut notes = Vec::new();
    let mut pass = true;
    for model in [MixingModel::Depolarized, MixingModel::Dephased] {
        let mut minima = Vec::new();
        for n in 2..=5 {
            let (lo, hi) = robustness_gamma_range(n, 1.0).unwrap();
            let mu: Vec<f64> = log_grid(lo, hi, 40)
                .iter()
                .map(|&g| threshold_purity(n, &ou(g, 1.0), model).unwrap().purity)
                .collect();
            let (imin, min) = mu
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            let ends = mu[0] >= END_PURITY && mu[mu.len() - 1] >= END_PURITY;
            let interior = imin > 0 && imin < mu.len() - 1 && min < mu[0] && min < mu[mu.len() - 1];
            pass &= ends && interior;
            notes.push(format!(
                "{} N={n}: ends {:.3}/{:.4}, min {min:.3}",
                model.name(),
                mu[0],
                mu[mu.len() - 1]
            ));
            minima.push(min);
        }
        pass &= minima.windows(2).all(|w| w[1] < w[0]);
    }
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for g in [0.5, 5.0, 50.0] {
            let params = ou(g, 1.0);
            for t in [0.01, 0.1, 1.0] {
                let spec = EvolutionSpec::new(params, t).unwrap();
                let ghz = qfi_ghz_closed(n, &spec).unwrap();
                worst = worst.max(rel(qfi_depolarized(n, 1.0, &spec).unwrap(), ghz));
                worst = worst.max(rel(qfi_dephased(n, 1.0, &spec).unwrap(), ghz));
            }
        }
    }
    pass &= worst <= 1e-12;
    report(
        9,
        "purity threshold shape",
        pass,
        &format!("{}; limit rel err {worst:.1e}", notes.join("; ")),
    );
    assert!(pass);
}

fn cli_bytes(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["entprobe"];
    argv.extend_from_slice(args);
    let code = entangled_probes::cli::run(argv, &mut out, &mut err);
    (code, out)
}

#[test]
fn criterion_10_property_suite() {
    let mut notes = Vec::new();

    // channel trace and positivity on Haar inputs
    let mut worst_trace: f64 = 0.0;
    let mut worst_eig: f64 = 0.0;
    for i in 0..1000u64 {
        let n = 1 + (i % 4) as usize;
        let psi = haar_random_state(n, 10_000 + i).unwrap();
        let spec = EvolutionSpec::new(ou(0.1 + (i % 7) as f64, 1.0), 0.05 * (1 + i % 13) as f64)
            .unwrap()
            .with_omega0((i % 5) as f64);
        let rho = dephase_common(&psi, &spec).unwrap();
        worst_trace = worst_trace.max((rho.trace() - 1.0).abs());
        worst_eig = worst_eig.min(rho.min_eigenvalue());
    }
    let channel_ok = worst_trace < 1e-12 && worst_eig > -1e-12;
    notes.push(format!(
        "trace err {worst_trace:.1e}, min eig {worst_eig:.1e}"
    ));

    // the qubit energy only adds a parameter-independent unitary
    let mut worst_omega: f64 = 0.0;
    for i in 0..50u64 {
        let n = 2 + (i % 3) as usize;
        let psi = haar_random_state(n, 20_000 + i).unwrap();
        let base = EvolutionSpec::new(ou(2.0, 1.0), 0.2).unwrap();
        let h0 = qfi_of_probe(&psi, &base).unwrap();
        for w in [0.3, 5.0, 40.0] {
            worst_omega =
                worst_omega.max(rel(qfi_of_probe(&psi, &base.with_omega0(w)).unwrap(), h0));
        }
    }
    let omega_ok = worst_omega < 1e-8;
    notes.push(format!("omega0 rel {worst_omega:.1e}"));

    // analytic derivative of the state against central differences
    let mut worst_fd: f64 = 0.0;
    for i in 0..50u64 {
        let n = 1 + (i % 4) as usize;
        let psi = haar_random_state(n, 30_000 + i).unwrap();
        let (g, t) = (0.5 + 0.2 * i as f64, 0.3);
        let h = 1e-5 * g;
        let at = |gg: f64| {
            dephase_common(&psi, &EvolutionSpec::new(ou(gg, 1.0), t).unwrap())
                .unwrap()
                .into_matrix()
        };
        let fd = (at(g + h) - at(g - h)) / entangled_probes::state::C64::new(2.0 * h, 0.0);
        let exact = dephase_derivative(&psi, &EvolutionSpec::new(ou(g, 1.0), t).unwrap()).unwrap();
        worst_fd = worst_fd.max((&fd - &exact).norm() / exact.norm());
    }
    let fd_ok = worst_fd < 1e-4;
    notes.push(format!("d_gamma rho fd rel {worst_fd:.1e}"));

    // posterior normalization
    let mut worst_mass: f64 = 0.0;
    for n in [1, 2, 4] {
        let cfg = ExperimentConfig {
            n_measurements: 5000,
            ..ExperimentConfig::new(n, 10.0)
        };
        let t = cfg.measurement_time().unwrap();
        let table = LikelihoodTable::new(&cfg, t).unwrap();
        for k in [0, 1, 1200, 2500, 4999, 5000] {
            if let Ok(post) = table.posterior(k, 5000) {
                worst_mass = worst_mass.max((post.total_mass() - 1.0).abs());
            }
        }
    }
    let mass_ok = worst_mass < 1e-10;
    notes.push(format!("posterior mass err {worst_mass:.1e}"));

    // fixed-seed byte reproducibility of every subcommand
    let runs: [&[&str]; 9] = [
        &["beta-check", "--quick", "--samples", "2000", "--seed", "3"],
        &["qfi-scan", "--gamma-points", "3", "--n-qubits", "1,3"],
        &["ratio-scan", "--gamma-points", "6"],
        &["threshold", "--n-qubits", "2,3"],
        &[
            "haar-scan",
            "--samples",
            "50",
            "--restarts",
            "4",
            "--seed",
            "5",
        ],
        &[
            "family-opt",
            "--gamma-points",
            "2",
            "--n-qubits",
            "2",
            "--restarts",
            "4",
            "--seed",
            "9",
        ],
        &[
            "bayes-sim",
            "--repetitions",
            "5",
            "--measurements",
            "100,1000",
            "--seed",
            "2",
        ],
        &["robustness", "--gamma-points", "4", "--n-qubits", "2"],
        &["selftest", "--quick"],
    ];
    let mut repro_ok = true;
    for args in runs {
        let (c1, a) = cli_bytes(args);
        let mut with_threads = args.to_vec();
        with_threads.extend(["--threads", "2"]);
        let (c2, b) = cli_bytes(&with_threads);
        let same = c1 == 0 && c2 == 0 && a == b && !a.is_empty();
        if !same {
            notes.push(format!("{} not reproducible", args[0]));
        }
        repro_ok &= same;
    }
    notes.push(format!("cli reproducible: {repro_ok}"));

    let pass = channel_ok && omega_ok && fd_ok && mass_ok && repro_ok;
    report(10, "property suite", pass, &notes.join("; "));
    assert!(pass);
}

#[test]
fn closed_forms_agree_with_max_qfi_limits() {
    // N separable qubits are N independent copies
    let p = ou(3.0, 1.0);
    for n in 1..=5 {
        let one = closed_qfi(Probe::Separable, 1, &p, 0.4).unwrap();
        assert!(
            rel(
                closed_qfi(Probe::Separable, n, &p, 0.4).unwrap(),
                n as f64 * one
            ) < 1e-14
        );
    }
}
