//! Random and structured pure probes in a common environment.
//!
//! Haar-random states probe the space of all preparations; the excitation
//! class family `Σ_k a_k |k⟩` (with `|k⟩` the unit-coefficient sum over all
//! bitstrings with `k` or `N − k` ones) is the search space for optimal probes.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::analysis::{max_qfi, Probe};
use crate::dynamics::EvolutionSpec;
use crate::error::{Error, Result};
use crate::noise::NoiseParams;
use crate::optim::{maximize_over_time_scanned, nelder_mead, MaximizationResult, SimplexOptions};
use crate::qfi::qfi_of_probe;
use crate::rng::stream_rng;
use crate::state::{check_qubits, ProbeState, C64};

/// Haar-random pure state drawn with `rng`: i.i.d. complex Gaussian
/// amplitudes, normalized.
pub fn haar_random_state_with<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<ProbeState> {
    check_qubits(n_qubits)?;
    let dim = 1usize << n_qubits;
    let v = DVector::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    ProbeState::normalized(n_qubits, v)
}

pub fn haar_random_state(n_qubits: usize, seed: u64) -> Result<ProbeState> {
    haar_random_state_with(n_qubits, &mut stream_rng(seed, 0))
}

/// Number of bitstrings in excitation class `k`.
fn class_size(n_qubits: usize, k: usize) -> f64 {
    let binom = (0..k).fold(1.0, |acc, i| acc * (n_qubits - i) as f64 / (i + 1) as f64);
    if 2 * k == n_qubits {
        binom
    } else {
        2.0 * binom
    }
}

fn class_of(n_qubits: usize, x: usize) -> usize {
    let ones = x.count_ones() as usize;
    ones.min(n_qubits - ones)
}

/// Real coefficients `a_0 … a_{⌊N/2⌋}`, normalized so the assembled state has
/// unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCoefficients {
    n_qubits: usize,
    a: Vec<f64>,
}

impl FamilyCoefficients {
    pub fn new(n_qubits: usize, a: Vec<f64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let expected = n_qubits / 2 + 1;
        if a.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: a.len(),
            });
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("coefficients must be finite"));
        }
        let norm = a
            .iter()
            .enumerate()
            .map(|(k, v)| v * v * class_size(n_qubits, k))
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            return Err(Error::domain("all family coefficients are zero"));
        }
        Ok(Self {
            n_qubits,
            a: a.into_iter().map(|v| v / norm).collect(),
        })
    }

    /// The GHZ point `a₀ = 1/√2`, others zero.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let mut a = vec![0.0; n_qubits / 2 + 1];
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(n_qubits, a)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }
}

/// Assembles `Σ_k a_k |k⟩`.
pub fn phi_family_state(coeffs: &FamilyCoefficients) -> Result<ProbeState> {
    let n = coeffs.n_qubits;
    let dim = 1usize << n;
    let v = DVector::from_fn(dim, |x, _| C64::new(coeffs.a[class_of(n, x)], 0.0));
    ProbeState::normalized(n, v)
}

/// Time window bracketing the optimum of any common-environment probe: from
/// a tenth of the GHZ optimum to ten times the single-qubit optimum.
pub fn probe_time_window(n_qubits: usize, params: &NoiseParams) -> Result<(f64, f64)> {
    let fast = max_qfi(Probe::Ghz, n_qubits, params)?.t_opt;
    let slow = max_qfi(Probe::Separable, 1, params)?.t_opt;
    Ok((0.1 * fast.min(slow), 10.0 * fast.max(slow)))
}

const TIME_SCAN_POINTS: usize = 32;

/// Time-maximized QFI of a pure probe, from the eigendecomposition engine.
pub fn max_qfi_of_probe(
    psi0: &ProbeState,
    params: &NoiseParams,
    window: (f64, f64),
) -> Result<MaximizationResult> {
    let curve = |t: f64| {
        EvolutionSpec::new(*params, t)
            .and_then(|spec| qfi_of_probe(psi0, &spec))
            .unwrap_or(f64::NAN)
    };
    maximize_over_time_scanned(curve, window.0, window.1, TIME_SCAN_POINTS)
}

/// Time-maximized QFI of `n_samples` Haar-random probes. Sample `i` uses
/// stream `i` of `seed`.
pub fn haar_scan(
    n_qubits: usize,
    params: &NoiseParams,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<MaximizationResult>> {
    let window = probe_time_window(n_qubits, params)?;
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let psi = haar_random_state_with(n_qubits, &mut stream_rng(seed, i as u64))?;
            max_qfi_of_probe(&psi, params, window)
        })
        .collect()
}

/// Best probe found in the excitation class family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOptimum {
    pub coeffs: FamilyCoefficients,
    pub t_opt: f64,
    pub qfi: f64,
    /// Whether the winning simplex run met its spread tolerance.
    pub converged: bool,
    pub iterations: usize,
}

pub const DEFAULT_RESTARTS: usize = 32;

/// Jointly maximizes the QFI over the family coefficients and the interaction
/// time with simplex searches from the GHZ point and `n_restarts` random
/// starts.
pub fn optimize_family(
    n_qubits: usize,
    params: &NoiseParams,
    n_restarts: usize,
    seed: u64,
) -> Result<FamilyOptimum> {
    check_qubits(n_qubits)?;
    if n_qubits < 2 {
        return Err(Error::domain("family optimization needs at least 2 qubits"));
    }
    if n_restarts == 0 {
        return Err(Error::domain("n_restarts must be >= 1"));
    }
    let n_coeffs = n_qubits / 2 + 1;
    let t_ghz = max_qfi(Probe::Ghz, n_qubits, params)?.t_opt;
    let t_sep = max_qfi(Probe::Separable, 1, params)?.t_opt;

    let objective = |x: &[f64]| -> f64 {
        let Ok(coeffs) = FamilyCoefficients::new(n_qubits, x[..n_coeffs].to_vec()) else {
            return f64::INFINITY;
        };
        let t = x[n_coeffs].exp();
        let h = phi_family_state(&coeffs)
            .and_then(|psi| EvolutionSpec::new(*params, t).and_then(|s| qfi_of_probe(&psi, &s)));
        h.map_or(f64::INFINITY, |v| -v)
    };

    let starts: Vec<Vec<f64>> = (0..=n_restarts)
        .map(|r| {
            if r == 0 {
                let mut x = FamilyCoefficients::ghz(n_qubits)
                    .expect("valid qubit count")
                    .coefficients()
                    .to_vec();
                x.push(t_ghz.ln());
                x
            } else {
                let mut rng = stream_rng(seed, r as u64);
                let mut x: Vec<f64> = (0..n_coeffs).map(|_| rng.sample(StandardNormal)).collect();
                let u: f64 = rng.random();
                x.push(t_ghz.ln() + u * (t_sep.ln() - t_ghz.ln()));
                x
            }
        })
        .collect();

    let opts = SimplexOptions::default();
    let runs: Vec<_> = starts
        .par_iter()
        .map(|x0| nelder_mead(&objective, x0, &opts))
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, run| if run.value < best.value { run } else { best })
        .expect("at least one start");
    Ok(FamilyOptimum {
        coeffs: FamilyCoefficients::new(n_qubits, best.x[..n_coeffs].to_vec())?,
        t_opt: best.x[n_coeffs].exp(),
        qfi: -best.value,
        converged: best.converged,
        iterations: best.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ghz_state;

    #[test]
    fn haar_states_are_normalized_and_seeded() {
        for seed in 0..50 {
            let s = haar_random_state(3, seed).unwrap();
            assert!((s.amplitudes().norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(
            haar_random_state(2, 9).unwrap(),
            haar_random_state(2, 9).unwrap()
        );
        assert_ne!(
            haar_random_state(2, 9).unwrap(),
            haar_random_state(2, 10).unwrap()
        );
    }

    #[test]
    fn haar_first_moment() {
        let n = 100_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let psi = haar_random_state_with(2, &mut stream_rng(77, i)).unwrap();
            let p = psi.amplitudes()[0].norm_sqr();
            s += p;
            s2 += p * p;
        }
        let est = crate::noise::MCEstimate::from_sums(s, s2, n as usize);
        assert!(est.z_score(0.25).abs() <= 3.0, "{est:?}");
    }

    #[test]
    fn family_contains_ghz() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = FamilyCoefficients::new(3, vec![h, 0.0]).unwrap();
        assert!(
            (phi_family_state(&c)
                .unwrap()
                .fidelity(&ghz_state(3).unwrap())
                - 1.0)
                .abs()
                < 1e-14
        );
        assert_eq!(c.coefficients(), &[h, 0.0]);
    }

    #[test]
    fn family_single_classes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = phi_family_state(&FamilyCoefficients::new(2, vec![0.0, h]).unwrap()).unwrap();
        let a = psi.amplitudes();
        assert!((a[1].re - h).abs() < 1e-15 && (a[2].re - h).abs() < 1e-15);
        assert_eq!(a[0].norm(), 0.0);
        assert_eq!(a[3].norm(), 0.0);

        let psi =
            phi_family_state(&FamilyCoefficients::new(4, vec![0.0, 0.0, 3.7]).unwrap()).unwrap();
        let expected = 1.0 / 6f64.sqrt();
        for (x, z) in psi.amplitudes().iter().enumerate() {
            let want = if x.count_ones() == 2 { expected } else { 0.0 };
            assert!((z.re - want).abs() < 1e-15, "x={x}");
        }
    }

    #[test]
    fn family_coefficient_errors() {
        assert!(matches!(
            FamilyCoefficients::new(3, vec![1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                actual: 1
            })
        ));
        assert!(FamilyCoefficients::new(3, vec![0.0, 0.0]).is_err());
        assert!(FamilyCoefficients::new(3, vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn class_sizes_cover_register() {
        for n in 1..=8 {
            let total: f64 = (0..=n / 2).map(|k| class_size(n, k)).sum();
            assert_eq!(total, (1u64 << n) as f64);
        }
    }

    #[test]
    fn family_search_never_loses_to_ghz() {
        let params = NoiseParams::new(0.05, 1.0).unwrap();
        let ghz = max_qfi(Probe::Ghz, 2, &params).unwrap().h_max;
        let opt = optimize_family(2, &params, 4, 1).unwrap();
        assert!(opt.qfi >= ghz - 1e-9 * ghz, "{} < {}", opt.qfi, ghz);
        assert!(optimize_family(1, &params, 4, 1).is_err());
        assert!(optimize_family(2, &params, 0, 1).is_err());
    }
}
