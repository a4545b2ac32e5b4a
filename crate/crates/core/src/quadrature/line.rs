//! Integrals over the whole real line for integrands that decay slowly:
//! algebraic tails are mapped to a finite interval, oscillatory tails are
//! summed by integration by parts, and mixed-frequency tails are handled by
//! whole-period partial sums with Richardson extrapolation.

use num_complex::Complex64;
use rayon::prelude::*;

use super::adaptive::{integrate_adaptive, integrate_adaptive_points, AdaptiveOptions};
use super::gauss::GaussLegendre;
use super::QuadResult;
use crate::error::{Error, Result};

const CORE_HALF_WIDTH: f64 = 16.0;
const MAX_CUTOFF: f64 = 1e7;

/// `∫_{−∞}^{∞} f(x) dx` where `f(x) = e^{iκx} r(x)` with `r` algebraically
/// decaying (`κ ≠ 0`), or `f` absolutely integrable (`κ = 0`).
pub fn quad_line<F>(f: F, tol: f64, oscillation_k: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    quad_line_core(f, tol, oscillation_k, CORE_HALF_WIDTH)
}

/// [`quad_line`] with an explicit half-width of the directly integrated core.
pub fn quad_line_core<F>(f: F, tol: f64, oscillation_k: f64, core_half_width: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if !(core_half_width > 0.0) {
        return Err(Error::Precondition(format!("core half-width must be positive, got {core_half_width}")));
    }
    if oscillation_k == 0.0 {
        quad_line_absolute(&f, tol, core_half_width)
    } else {
        quad_line_oscillatory(&f, tol, oscillation_k, core_half_width)
    }
}

fn check(r: &QuadResult, what: &str) -> Result<()> {
    if !r.value.re.is_finite() || !r.value.im.is_finite() || !r.error_estimate.is_finite() {
        return Err(Error::NonConvergence(format!("{what}: non-finite integrand values")));
    }
    Ok(())
}

fn quad_line_absolute<F: Fn(f64) -> Complex64>(f: &F, tol: f64, l: f64) -> Result<QuadResult> {
    let opts = AdaptiveOptions { abs_tol: tol / 3.0, rel_tol: 0.0, max_intervals: 4000 };
    let (core, _) = integrate_adaptive_points(f, &[-l, -l / 4.0, 0.0, l / 4.0, l], opts);
    // x = ±L/t maps each tail onto t ∈ (0, 1]
    let right = |t: f64| {
        if t == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(l / t) * (l / (t * t))
        }
    };
    let left = |t: f64| {
        if t == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(-l / t) * (l / (t * t))
        }
    };
    let (rt, _) = integrate_adaptive(right, 0.0, 1.0, opts);
    let (lt, _) = integrate_adaptive(left, 0.0, 1.0, opts);
    let total = core.combine(rt).combine(lt);
    check(&total, "real-line integral")?;
    Ok(total)
}

/// Tail contributions beyond `±x_cut` from two integrations by parts.
fn ibp_tails<F: Fn(f64) -> Complex64>(f: &F, kappa: f64, x_cut: f64) -> Complex64 {
    let ik = Complex64::i() * kappa;
    let r = |x: f64| f(x) * (-ik * x).exp();
    let h = 1e-3 * x_cut;
    let dr = |x: f64| (r(x + h) - r(x - h)) / (2.0 * h);
    let right = (ik * x_cut).exp() * (-r(x_cut) / ik + dr(x_cut) / (ik * ik));
    let left = (-ik * x_cut).exp() * (r(-x_cut) / ik - dr(-x_cut) / (ik * ik));
    right + left
}

fn quad_line_oscillatory<F>(f: &F, tol: f64, kappa: f64, core: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let period = 2.0 * std::f64::consts::PI / kappa.abs();
    let mut x_cut = (4.0 * period).max(core);
    let opts = |n: usize| AdaptiveOptions { abs_tol: tol / 10.0, rel_tol: 0.0, max_intervals: 200 + 8 * n };
    let panels = |a: f64, b: f64| -> Vec<f64> {
        let n = ((b - a) / period).ceil().max(1.0) as usize;
        (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect()
    };
    let pts = panels(-x_cut, x_cut);
    let (core, _) = integrate_adaptive_points(f, &pts, opts(pts.len()));
    check(&core, "oscillatory core")?;
    let mut result = core;
    let mut estimate = core.value + ibp_tails(f, kappa, x_cut);
    loop {
        let next_cut = 2.0 * x_cut;
        if next_cut > MAX_CUTOFF {
            return Err(Error::NonConvergence(format!(
                "oscillatory tail did not stabilize before |x| = {MAX_CUTOFF:e}"
            )));
        }
        let pr = panels(x_cut, next_cut);
        let pl: Vec<f64> = pr.iter().rev().map(|x| -x).collect();
        let (right, _) = integrate_adaptive_points(f, &pr, opts(pr.len()));
        let (left, _) = integrate_adaptive_points(f, &pl, opts(pl.len()));
        result = result.combine(right).combine(left);
        check(&result, "oscillatory shell")?;
        let next = result.value + ibp_tails(f, kappa, next_cut);
        let change = (next - estimate).norm();
        x_cut = next_cut;
        estimate = next;
        if change < tol {
            return Ok(QuadResult {
                value: estimate,
                error_estimate: result.error_estimate + change,
                evaluations: result.evaluations + 12,
            });
        }
    }
}

/// `∫_{−∞}^{∞} f(x) dx` for an integrand whose large-`|x|` behaviour is a
/// sum of `P`-periodic functions times inverse powers of `x`. Partial
/// integrals over `[−NP, NP]` are extrapolated in `1/N`.
pub fn quad_line_periodic<F>(f: F, period: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::Precondition(format!("period must be positive, got {period}")));
    }
    let n0 = (CORE_HALF_WIDTH / period).ceil().max(1.0) as usize;
    let core_edge = n0 as f64 * period;
    let breaks: Vec<f64> = (0..=2 * n0).map(|j| -core_edge + period * j as f64).collect();
    let (core, _) = integrate_adaptive_points(
        &f,
        &breaks,
        AdaptiveOptions { abs_tol: tol / 20.0, rel_tol: 0.0, max_intervals: 40 * breaks.len() + 2000 },
    );
    check(&core, "periodic core")?;

    let rule = GaussLegendre::new(16);
    let sub = (period / 0.5).ceil().max(1.0) as usize;
    let one_period = |lo: f64| -> Complex64 { rule.integrate_composite(&f, lo, lo + period, sub) };
    let shell = |from: usize, to: usize| -> Complex64 {
        let parts: Vec<Complex64> = (from..to)
            .into_par_iter()
            .map(|j| one_period(j as f64 * period) + one_period(-(j as f64 + 1.0) * period))
            .collect();
        parts.into_iter().sum()
    };

    const LEVELS: usize = 12;
    const ORDER: usize = 4;
    let mut partial = vec![core.value];
    let mut table: Vec<Vec<Complex64>> = vec![vec![core.value]];
    let mut n = n0;
    let mut evaluations = core.evaluations;
    let mut best = (core.value, f64::INFINITY);
    for level in 1..=LEVELS {
        let s = partial[level - 1] + shell(n, 2 * n);
        evaluations += 2 * n * sub * rule.len();
        n *= 2;
        partial.push(s);
        let mut row = vec![s];
        for m in 1..=level.min(ORDER) {
            let p = 2f64.powi(m as i32);
            let prev = &table[level - 1];
            if m > prev.len() {
                break;
            }
            row.push((row[m - 1] * p - prev[m - 1]) / (p - 1.0));
        }
        let est = *row.last().expect("nonempty row");
        let prev_est = *table[level - 1].last().expect("nonempty row");
        let err = (est - prev_est).norm();
        table.push(row);
        if err < best.1 {
            best = (est, err);
        }
        if level >= 3 && err < tol {
            return Ok(QuadResult {
                value: est,
                error_estimate: err + core.error_estimate,
                evaluations,
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "periodic extrapolation reached error {:.3e} (target {tol:.1e}); best value {}",
        best.1, best.0
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gaussian() {
        let r = quad_line(|x| c((-x * x).exp()), 1e-10, 0.0).unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-10);
        assert!(r.value.im.abs() < 1e-14);
    }

    #[test]
    fn rational_square() {
        let f = |x: f64| 1.0 / (c(x) - Complex64::i()).powi(2);
        let r = quad_line(f, 1e-10, 0.0).unwrap();
        assert!(r.value.norm() < 1e-9, "{}", r.value);
    }

    #[test]
    fn oscillatory_residue() {
        let f = |x: f64| (Complex64::i() * x).exp() / (c(x) - Complex64::i()).powi(2);
        let r = quad_line(f, 1e-8, 1.0).unwrap();
        assert!((r.value - c(-2.0 * PI / E)).norm() < 1e-7, "{}", r.value);
    }

    #[test]
    fn oscillatory_slow_decay() {
        // ∫ e^{2ix}/(x − i) dx = 2πi e^{−2}
        let f = |x: f64| (Complex64::i() * 2.0 * x).exp() / (c(x) - Complex64::i());
        let r = quad_line(f, 1e-7, 2.0).unwrap();
        let exact = 2.0 * PI * Complex64::i() * (-2.0f64).exp();
        assert!((r.value - exact).norm() < 1e-6, "{}", r.value);
    }

    #[test]
    fn periodic_mixed_frequencies() {
        // cos²x/(x² + 1) integrates to (π/2)(1 + e^{−2})
        let f = |x: f64| c(x.cos().powi(2) / (x * x + 1.0));
        let r = quad_line_periodic(f, PI, 1e-8).unwrap();
        let exact = 0.5 * PI * (1.0 + (-2.0f64).exp());
        assert!((r.value.re - exact).abs() < 1e-7, "{} vs {exact}", r.value.re);
    }

    #[test]
    fn periodic_conditionally_convergent() {
        // sin(2x)·x/(x² + 1) integrates to π e^{−2}
        let f = |x: f64| c((2.0 * x).sin() * x / (x * x + 1.0));
        let r = quad_line_periodic(f, PI, 1e-8).unwrap();
        let exact = PI * (-2.0f64).exp();
        assert!((r.value.re - exact).abs() < 1e-7, "{} vs {exact}", r.value.re);
    }

    #[test]
    fn even_integrand_is_real() {
        let f = |x: f64| c(1.0 / (1.0 + x.powi(4)));
        let r = quad_line(f, 1e-10, 0.0).unwrap();
        assert!(r.value.im.abs() <= r.error_estimate);
        assert!((r.value.re - PI / 2f64.sqrt()).abs() < 1e-9);
    }
}
