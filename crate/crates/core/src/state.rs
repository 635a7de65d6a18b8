//! N-qubit probe states.
//!
//! Basis index `x` encodes the computational basis state with bit `j` of `x`
//! giving the state of qubit `j`; `|0…0⟩` is index 0 and `|1…1⟩` is index
//! `2^N − 1`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest supported register size (matrix dimension 4096).
pub const MAX_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;

pub(crate) fn check_qubits(n_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "number of qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )))
    }
}

/// Collective `σ_z` eigenvalue `N − 2·popcount(x)` of every basis state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DephasingWeights {
    n_qubits: usize,
    weights: Vec<i32>,
}

impl DephasingWeights {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.weights
    }
}

pub fn weight_vector(n_qubits: usize) -> Result<DephasingWeights> {
    check_qubits(n_qubits)?;
    let n = n_qubits as i32;
    let weights = (0..1u32 << n_qubits)
        .map(|x| n - 2 * x.count_ones() as i32)
        .collect();
    Ok(DephasingWeights { n_qubits, weights })
}

/// A normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeState {
    n_qubits: usize,
    amplitudes: DVector<C64>,
}

impl ProbeState {
    /// Wraps an amplitude vector, which must already be normalized.
    pub fn new(n_qubits: usize, amplitudes: DVector<C64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(n_qubits: usize, mut amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::domain(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        amplitudes.unscale_mut(norm);
        Self::new(n_qubits, amplitudes)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self::new(n_qubits, v)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &ProbeState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }
}

/// `(|0…0⟩ + |1…1⟩)/√2`; for one qubit this is `|+⟩`.
pub fn ghz_state(n_qubits: usize) -> Result<ProbeState> {
    check_qubits(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut v = DVector::zeros(dim);
    let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = a;
    v[dim - 1] = a;
    ProbeState::new(n_qubits, v)
}

/// A Hermitian, unit-trace, positive semidefinite operator on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `entries`.
    pub fn new(n_qubits: usize, entries: CMatrix) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: entries.nrows().max(entries.ncols()),
            });
        }
        let deviation = hermitian_deviation(&entries);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { n_qubits, entries })
    }

    /// Skips validation; for maps already known to preserve the invariants.
    pub(crate) fn from_trusted(n_qubits: usize, entries: CMatrix) -> Self {
        Self { n_qubits, entries }
    }

    pub fn from_pure(state: &ProbeState) -> Self {
        let psi = state.amplitudes();
        Self::from_trusted(state.n_qubits(), psi * psi.adjoint())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Largest entrywise `|A − A†|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_fraction(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must lie in [0, 1], got {value}"
        )))
    }
}

/// `p ρ_GHZ + (1 − p) 𝟙/2^N`
pub fn depolarized_ghz(n_qubits: usize, p: f64) -> Result<DensityMatrix> {
    check_fraction("p", p)?;
    let ghz = DensityMatrix::from_pure(&ghz_state(n_qubits)?);
    let dim = ghz.dim();
    let noise = CMatrix::identity(dim, dim) * C64::new((1.0 - p) / dim as f64, 0.0);
    Ok(DensityMatrix::from_trusted(
        n_qubits,
        ghz.into_matrix() * C64::new(p, 0.0) + noise,
    ))
}

/// `δ ρ_GHZ + ½(1 − δ)(|0…0⟩⟨0…0| + |1…1⟩⟨1…1|)`
pub fn dephased_ghz(n_qubits: usize, delta: f64) -> Result<DensityMatrix> {
    check_fraction("delta", delta)?;
    let mut m = DensityMatrix::from_pure(&ghz_state(n_qubits)?).into_matrix();
    let last = m.nrows() - 1;
    m[(0, last)] *= delta;
    m[(last, 0)] *= delta;
    Ok(DensityMatrix::from_trusted(n_qubits, m))
}

/// Purity of the depolarized GHZ state, `p² + (1 − p²)/2^N`.
pub fn purity_depolarized(n_qubits: usize, p: f64) -> Result<f64> {
    check_qubits(n_qubits)?;
    check_fraction("p", p)?;
    let dim = (1u64 << n_qubits) as f64;
    Ok(p * p + (1.0 - p * p) / dim)
}

/// Purity of the dephased GHZ state, `(1 + δ²)/2` for every `N`.
pub fn purity_dephased(delta: f64) -> Result<f64> {
    check_fraction("delta", delta)?;
    Ok(0.5 * (1.0 + delta * delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(weight_vector(1).unwrap().as_slice(), &[1, -1]);
        assert_eq!(weight_vector(2).unwrap().as_slice(), &[2, 0, 0, -2]);
        assert_eq!(
            weight_vector(3).unwrap().as_slice(),
            &[3, 1, 1, -1, 1, -1, -1, -3]
        );
        assert!(weight_vector(0).is_err());
        assert!(weight_vector(13).is_err());
        for n in 1..=MAX_QUBITS {
            let w = weight_vector(n).unwrap();
            let s = w.as_slice();
            let ni = n as i32;
            assert_eq!(s[0], ni);
            assert_eq!(*s.last().unwrap(), -ni);
            assert!(s.iter().all(|&v| v.abs() <= ni && (ni - v) % 2 == 0));
        }
    }

    #[test]
    fn ghz_amplitudes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ghz_state(1).unwrap();
        assert_eq!(
            plus.amplitudes().as_slice(),
            &[C64::new(h, 0.0), C64::new(h, 0.0)]
        );
        for n in 2..=4 {
            let g = ghz_state(n).unwrap();
            let a = g.amplitudes();
            for (i, z) in a.iter().enumerate() {
                let expect = if i == 0 || i == a.len() - 1 { h } else { 0.0 };
                assert_eq!(*z, C64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn state_validation() {
        let v = DVector::from_element(4, C64::new(1.0, 0.0));
        assert!(ProbeState::new(2, v.clone()).is_err());
        assert!(ProbeState::normalized(2, v.clone()).is_ok());
        assert!(matches!(
            ProbeState::normalized(3, v),
            Err(Error::DimensionMismatch {
                expected: 8,
                actual: 4
            })
        ));
        assert!(ProbeState::normalized(2, DVector::zeros(4)).is_err());
    }

    #[test]
    fn density_validation() {
        let ok = DensityMatrix::from_pure(&ghz_state(2).unwrap());
        assert!(DensityMatrix::new(2, ok.matrix().clone()).is_ok());

        let mut skew = ok.matrix().clone();
        skew[(0, 3)] = C64::new(0.5, 0.1);
        assert!(matches!(
            DensityMatrix::new(2, skew),
            Err(Error::NotHermitian { .. })
        ));

        let doubled = ok.matrix() * C64::new(2.0, 0.0);
        assert!(matches!(
            DensityMatrix::new(2, doubled),
            Err(Error::InvalidDensity(_))
        ));

        let mut negative = CMatrix::zeros(2, 2);
        negative[(0, 0)] = C64::new(1.5, 0.0);
        negative[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(1, negative),
            Err(Error::InvalidDensity(_))
        ));
    }

    #[test]
    fn purities_match_direct_trace() {
        assert_eq!(purity_depolarized(3, 1.0).unwrap(), 1.0);
        assert!((purity_depolarized(3, 0.0).unwrap() - 0.125).abs() < 1e-15);
        let direct = depolarized_ghz(2, 0.8).unwrap().purity();
        assert!((direct - 0.73).abs() < 1e-12);
        assert!((purity_depolarized(2, 0.8).unwrap() - 0.73).abs() < 1e-12);

        assert_eq!(purity_dephased(1.0).unwrap(), 1.0);
        assert_eq!(purity_dephased(0.0).unwrap(), 0.5);
        let direct = dephased_ghz(3, 0.6).unwrap().purity();
        assert!((direct - 0.68).abs() < 1e-12);
        assert!((purity_dephased(0.6).unwrap() - 0.68).abs() < 1e-12);

        assert!(purity_depolarized(2, 1.1).is_err());
        assert!(purity_dephased(-0.1).is_err());
    }

    #[test]
    fn mixed_ghz_states_are_valid() {
        for n in 1..=4 {
            for &x in &[0.0, 0.3, 1.0] {
                let p = depolarized_ghz(n, x).unwrap();
                assert!(DensityMatrix::new(n, p.into_matrix()).is_ok());
                let d = dephased_ghz(n, x).unwrap();
                assert!(DensityMatrix::new(n, d.into_matrix()).is_ok());
            }
        }
    }
}
