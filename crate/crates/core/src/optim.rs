//! One-dimensional maximization, simplex search and bisection.

use crate::error::{Error, Result};

/// Relative tolerance on the optimal time.
pub const TIME_REL_TOL: f64 = 1e-8;

const MAX_DOUBLINGS: usize = 60;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A located maximum of a curve `t ↦ h(t)` on `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizationResult {
    pub t_opt: f64,
    pub h_max: f64,
    pub n_evals: usize,
    /// Bracket the search was refined in; `h_max` dominates both ends.
    pub bracket: (f64, f64),
}

struct Counted<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(f64) -> f64> Counted<F> {
    fn at(&mut self, t: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(t);
        if v.is_nan() {
            Err(Error::Bracketing(format!("curve returned NaN at t = {t}")))
        } else {
            Ok(v)
        }
    }
}

/// Maximizes a single-peaked curve that vanishes at 0 and at infinity.
///
/// The peak is bracketed by doubling or halving from `t_seed`, then refined
/// by golden-section search in `ln t` until the bracket is narrower than
/// [`TIME_REL_TOL`] in relative terms.
pub fn maximize_over_time<F>(curve: F, t_seed: f64) -> Result<MaximizationResult>
where
    F: FnMut(f64) -> f64,
{
    if !t_seed.is_finite() || t_seed <= 0.0 {
        return Err(Error::domain(format!("t_seed must be > 0, got {t_seed}")));
    }
    let mut f = Counted { f: curve, evals: 0 };
    let (mut a, mut b, mut c) = (0.5 * t_seed, t_seed, 2.0 * t_seed);
    let (mut fa, mut fb, mut fc) = (f.at(a)?, f.at(b)?, f.at(c)?);
    let mut found = false;
    for _ in 0..=MAX_DOUBLINGS {
        if fb > 0.0 && fb >= fa && fb >= fc {
            found = true;
            break;
        }
        if fc > fb && fc >= fa {
            (a, fa, b, fb) = (b, fb, c, fc);
            c *= 2.0;
            fc = f.at(c)?;
        } else if fa > fb {
            (c, fc, b, fb) = (b, fb, a, fa);
            a *= 0.5;
            fa = f.at(a)?;
        } else {
            // flat, usually an underflowed tail on both sides
            a *= 0.5;
            c *= 2.0;
            fa = f.at(a)?;
            fc = f.at(c)?;
        }
    }
    if !found {
        return Err(Error::Bracketing(format!(
            "no interior maximum within {MAX_DOUBLINGS} doublings of t = {t_seed}"
        )));
    }
    let (t_opt, h_max) = golden_refine(&mut f, a, c, (b, fb))?;
    Ok(MaximizationResult {
        t_opt,
        h_max,
        n_evals: f.evals,
        bracket: (a, c),
    })
}

/// Like [`maximize_over_time`] but seeds the bracket from the best point of a
/// log-spaced scan over `[t_lo, t_hi]`. Guards against secondary peaks.
pub fn maximize_over_time_scanned<F>(
    curve: F,
    t_lo: f64,
    t_hi: f64,
    n_grid: usize,
) -> Result<MaximizationResult>
where
    F: FnMut(f64) -> f64,
{
    if !(t_lo > 0.0 && t_hi > t_lo) || n_grid < 3 {
        return Err(Error::domain(
            "scan needs 0 < t_lo < t_hi and at least 3 points",
        ));
    }
    let mut f = Counted { f: curve, evals: 0 };
    let ratio = (t_hi / t_lo).powf(1.0 / (n_grid - 1) as f64);
    let grid: Vec<f64> = (0..n_grid).map(|i| t_lo * ratio.powi(i as i32)).collect();
    let mut values = Vec::with_capacity(n_grid);
    for &t in &grid {
        values.push(f.at(t)?);
    }
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best });
    if best == 0 || best == n_grid - 1 || values[best] <= 0.0 {
        let evals = f.evals;
        let mut res = maximize_over_time(f.f, grid[best])?;
        res.n_evals += evals;
        return Ok(res);
    }
    let (a, c) = (grid[best - 1], grid[best + 1]);
    let (t_opt, h_max) = golden_refine(&mut f, a, c, (grid[best], values[best]))?;
    Ok(MaximizationResult {
        t_opt,
        h_max,
        n_evals: f.evals,
        bracket: (a, c),
    })
}

fn golden_refine<F: FnMut(f64) -> f64>(
    f: &mut Counted<F>,
    t_lo: f64,
    t_hi: f64,
    known: (f64, f64),
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (t_lo.ln(), t_hi.ln());
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f.at(x1.exp())?;
    let mut f2 = f.at(x2.exp())?;
    while hi - lo > TIME_REL_TOL {
        if f1 >= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f.at(x1.exp())?;
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f.at(x2.exp())?;
        }
    }
    let mut best = if f1 >= f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    };
    if known.1 > best.1 {
        best = known;
    }
    Ok(best)
}

/// Outcome of a simplex search.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Stopping rule for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop once `(f_worst − f_best) ≤ rel_spread · |f_best|`.
    pub rel_spread: f64,
    pub max_iter: usize,
    /// Initial step along each coordinate, relative to `max(|x_i|, 1)`.
    pub step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            rel_spread: 1e-10,
            max_iter: 2000,
            step: 0.1,
        }
    }
}

/// Nelder–Mead minimization with the standard coefficients.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let eval = |f: &mut F, x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(&mut f, x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.step * x[i].abs().max(1.0);
        let v = eval(&mut f, &x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if (worst - best).abs() <= opts.rel_spread * best.abs() {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&mut f, &reflected);
        if fr < best {
            let expanded = along(-2.0);
            let fe = eval(&mut f, &expanded);
            simplex[dim] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst {
            let x = along(-0.5);
            let v = eval(&mut f, &x);
            (x, v)
        } else {
            let x = along(0.5);
            let v = eval(&mut f, &x);
            (x, v)
        };
        if fc < worst.min(fr) {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            for (xi, ai) in vertex.0.iter_mut().zip(&anchor) {
                *xi = ai + 0.5 * (*xi - ai);
            }
            vertex.1 = eval(&mut f, &vertex.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    SimplexResult {
        x,
        value,
        iterations,
        converged,
    }
}

/// Root of a bracketed sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `x_tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange(format!(
            "f({lo}) = {f_lo} and f({hi}) = {f_hi} share a sign"
        )));
    }
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f(mid)?;
    while (hi - lo).abs() > x_tol && iterations < 200 {
        iterations += 1;
        if f_mid == 0.0 {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        f_mid = f(mid)?;
    }
    Ok(Root {
        x: mid,
        residual: f_mid,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(t: f64) -> f64 {
        t * t * (-t).exp()
    }

    #[test]
    fn golden_finds_known_peak() {
        for &seed in &[1e-4, 0.3, 2.0, 1e3] {
            let r = maximize_over_time(bump, seed).unwrap();
            assert!((r.t_opt - 2.0).abs() / 2.0 < 1e-7, "{r:?}");
            assert!((r.h_max - 4.0 * (-2.0f64).exp()).abs() < 1e-14);
            assert!(r.bracket.0 < r.t_opt && r.t_opt < r.bracket.1);
            assert!(r.h_max >= bump(r.bracket.0) && r.h_max >= bump(r.bracket.1));
        }
    }

    #[test]
    fn argmax_invariant_under_scaling() {
        let a = maximize_over_time(bump, 0.5).unwrap();
        let b = maximize_over_time(|t| 37.0 * bump(t), 0.5).unwrap();
        assert!((a.t_opt - b.t_opt).abs() / a.t_opt < 1e-7);
    }

    #[test]
    fn flat_curve_fails_to_bracket() {
        assert!(matches!(
            maximize_over_time(|_| 0.0, 1.0),
            Err(Error::Bracketing(_))
        ));
        assert!(maximize_over_time(|_| f64::NAN, 1.0).is_err());
        assert!(maximize_over_time(bump, 0.0).is_err());
    }

    #[test]
    fn scanned_search_prefers_global_peak() {
        // two bumps, the larger one near t = 50
        let curve = |t: f64| bump(t) + 3.0 * bump(t / 25.0);
        let r = maximize_over_time_scanned(curve, 1e-2, 1e3, 40).unwrap();
        assert!(r.t_opt > 20.0, "{r:?}");
    }

    #[test]
    fn simplex_minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2) + 1.0;
        let opts = SimplexOptions {
            rel_spread: 1e-15,
            max_iter: 5000,
            step: 0.5,
        };
        let r = nelder_mead(rosen, &[-1.2, 1.0], &opts);
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5,
            "{r:?}"
        );
    }

    #[test]
    fn simplex_never_worse_than_start() {
        let f = |x: &[f64]| (x[0] - 3.0).abs() + (x[1] + 1.0).abs();
        let start = [0.0, 0.0];
        let r = nelder_mead(f, &start, &SimplexOptions::default());
        assert!(r.value <= f(&start));
    }

    #[test]
    fn bisection() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-12).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-11);
        assert!(r.residual.abs() < 1e-10);
        assert!(matches!(
            bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-6),
            Err(Error::NoSignChange(_))
        ));
    }
}
