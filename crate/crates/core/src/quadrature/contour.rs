//! Integrals along `[−A, A]` deformed by semicircles of radius `ε` around
//! declared centers: `k = k₀ + ε[cos(π−θ) ± i sin(π−θ)]`, `θ ∈ [0, π]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::adaptive::{integrate_adaptive_points, AdaptiveOptions};
use super::gauss::GaussLegendre;
use super::QuadResult;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub cutoff: f64,
    pub eps: f64,
    pub direction: Direction,
    pub centers: Vec<f64>,
}

impl ContourSpec {
    pub fn new(cutoff: f64, eps: f64, direction: Direction, mut centers: Vec<f64>) -> Result<Self> {
        centers.sort_by(f64::total_cmp);
        let spec = Self { cutoff, eps, direction, centers };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.cutoff > 0.0 && self.eps < self.cutoff) {
            return Err(Error::InvalidContour(format!(
                "need 0 < eps < A, got eps = {}, A = {}",
                self.eps, self.cutoff
            )));
        }
        for w in self.centers.windows(2) {
            if w[1] - w[0] <= 2.0 * self.eps {
                return Err(Error::InvalidContour(format!(
                    "semicircles around {} and {} overlap at eps = {}",
                    w[0], w[1], self.eps
                )));
            }
        }
        for &c in &self.centers {
            if c - self.eps <= -self.cutoff || c + self.eps >= self.cutoff {
                return Err(Error::InvalidContour(format!("center {c} not inside (−A, A)")));
            }
        }
        Ok(())
    }

    /// Real segments of the path, left to right.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.centers.len() + 1);
        let mut lo = -self.cutoff;
        for &c in &self.centers {
            out.push((lo, c - self.eps));
            lo = c + self.eps;
        }
        out.push((lo, self.cutoff));
        out
    }
}

fn finite(v: Complex64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

/// Integral over the semicircle around `center`, traversed from
/// `center − ε` to `center + ε`.
pub fn quad_arc<F: Fn(Complex64) -> Complex64>(
    f: &F,
    center: f64,
    eps: f64,
    direction: Direction,
) -> Result<QuadResult> {
    let s = direction.sign();
    let arc = |theta: f64| -> Result<Complex64> {
        let phi = std::f64::consts::PI - theta;
        let k = Complex64::new(center + eps * phi.cos(), s * eps * phi.sin());
        let dk = Complex64::new(eps * phi.sin(), -s * eps * phi.cos());
        let v = f(k);
        if !finite(v) {
            return Err(Error::PoleOnPath(format!("{k}")));
        }
        Ok(v * dk)
    };
    let rule = GaussLegendre::new(24);
    let integrate = |panels: usize| -> Result<Complex64> {
        let h = std::f64::consts::PI / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..panels {
            for (t, w) in rule.mapped(h * j as f64, h * (j + 1) as f64) {
                acc += arc(t)? * w;
            }
        }
        Ok(acc)
    };
    let coarse = integrate(4)?;
    let fine = integrate(8)?;
    Ok(QuadResult {
        value: fine,
        error_estimate: (fine - coarse).norm(),
        evaluations: 12 * rule.len(),
    })
}

/// `∫_{ℒ} f(k) dk` along the deformed path described by `spec`.
pub fn quad_contour<F: Fn(Complex64) -> Complex64>(
    f: F,
    spec: &ContourSpec,
    tol: f64,
) -> Result<QuadResult> {
    spec.validate()?;
    let mut total = QuadResult::zero();
    let pieces = spec.segments().len() + spec.centers.len();
    let opts = AdaptiveOptions { abs_tol: tol / pieces as f64, rel_tol: 0.0, max_intervals: 4000 };
    for (a, b) in spec.segments() {
        let n = ((b - a) / 2.0).ceil().max(1.0) as usize;
        let pts: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        let (r, _) = integrate_adaptive_points(|k| f(Complex64::new(k, 0.0)), &pts, opts);
        if !finite(r.value) {
            return Err(Error::PoleOnPath(format!("segment [{a}, {b}]")));
        }
        total = total.combine(r);
    }
    for &c in &spec.centers {
        total = total.combine(quad_arc(&f, c, spec.eps, spec.direction)?);
    }
    Ok(total)
}
