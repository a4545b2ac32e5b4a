//! Model with an exceptional point `E = α²` inside the continuous spectrum,
//! built on `W(x) = sin 2αx + 2α(x − z)`.
//!
//! Everything here is evaluated in floating point. Second derivatives are
//! carried exactly through [`PointEval`] (value, first and second derivative)
//! so the eigen-equation residuals are not limited by finite differences.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|k² − α²| / α²` below which the unregularized eigenfunction is refused.
const POLE_GUARD: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorModel {
    alpha: f64,
    z: Complex64,
}

/// A value together with its first and second `x`-derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointEval {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl PointEval {
    pub fn new(value: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Self { value, d1, d2 }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(c, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(self.value * c, self.d1 * c, self.d2 * c)
    }

    pub fn recip(self) -> Self {
        let g = self.value;
        let g2 = g * g;
        Self::new(
            1.0 / g,
            -self.d1 / g2,
            2.0 * self.d1 * self.d1 / (g2 * g) - self.d2 / g2,
        )
    }

    pub fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }

    /// `e^{ikx}` with its derivatives.
    pub fn plane_wave(k: Complex64, x: f64) -> Self {
        let ik = Complex64::i() * k;
        let e = (ik * x).exp();
        Self::new(e, ik * e, ik * ik * e)
    }
}

impl Add for PointEval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for PointEval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Neg for PointEval {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2)
    }
}

impl Mul for PointEval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
        )
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl InteriorModel {
    pub fn new(alpha: f64, z: Complex64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidModel(format!("alpha must be positive, got {alpha}")));
        }
        if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::InvalidModel(format!("Im z must be a nonzero finite number, got z = {z}")));
        }
        Ok(Self { alpha, z })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn w(&self, x: f64) -> Complex64 {
        self.w_deriv(x, 0)
    }

    /// `j`-th derivative of `W`.
    pub fn w_deriv(&self, x: f64, j: u32) -> Complex64 {
        let a2 = 2.0 * self.alpha;
        let osc = a2.powi(j as i32) * (a2 * x + f64::from(j) * PI / 2.0).sin();
        match j {
            0 => c(osc) + a2 * (c(x) - self.z),
            1 => c(osc + a2),
            _ => c(osc),
        }
    }

    /// `(W, W′, W″)`.
    pub fn w_jet(&self, x: f64) -> PointEval {
        PointEval::new(self.w_deriv(x, 0), self.w_deriv(x, 1), self.w_deriv(x, 2))
    }

    fn w1_jet(&self, x: f64) -> PointEval {
        PointEval::new(self.w_deriv(x, 1), self.w_deriv(x, 2), self.w_deriv(x, 3))
    }

    fn w2_jet(&self, x: f64) -> PointEval {
        PointEval::new(self.w_deriv(x, 2), self.w_deriv(x, 3), self.w_deriv(x, 4))
    }

    /// `16α² (α(x−z) sin 2αx + 2cos²αx) / W²`.
    pub fn potential(&self, x: f64) -> Complex64 {
        let a = self.alpha;
        let num = a * (c(x) - self.z) * (2.0 * a * x).sin() + 2.0 * (a * x).cos().powi(2);
        let w = self.w(x);
        16.0 * a * a * num / (w * w)
    }

    /// `−2 (ln W)″`, an independent route to the potential.
    pub fn potential_from_w(&self, x: f64) -> Complex64 {
        let j = self.w_jet(x);
        let r = j.d1 / j.value;
        -2.0 * (j.d2 / j.value - r * r)
    }

    /// `(h f)(x)` from a jet of `f`.
    pub fn apply_h(&self, f: &PointEval, x: f64) -> Complex64 {
        -f.d2 + self.potential(x) * f.value
    }

    fn check_pole(&self, k: Complex64) -> Result<Complex64> {
        let d = k * k - self.alpha * self.alpha;
        if d.norm() <= POLE_GUARD * self.alpha * self.alpha {
            return Err(Error::Pole(k.re));
        }
        Ok(d)
    }

    /// `(k² − α²) ψ(x;k)` with derivatives; pole-free in `k`.
    pub fn scatter_reg_jet(&self, k: Complex64, x: f64) -> PointEval {
        let d = k * k - self.alpha * self.alpha;
        let w_inv = self.w_jet(x).recip();
        let ratio1 = self.w1_jet(x) * w_inv;
        let ratio2 = self.w2_jet(x) * w_inv;
        let bracket = PointEval::constant(d) + ratio1.scale(Complex64::i() * k) - ratio2.scale(c(0.5));
        (bracket * PointEval::plane_wave(k, x)).scale(c(1.0 / (2.0 * PI).sqrt()))
    }

    pub fn scatter_reg(&self, k: Complex64, x: f64) -> Complex64 {
        self.scatter_reg_jet(k, x).value
    }

    pub fn scatter_jet(&self, k: Complex64, x: f64) -> Result<PointEval> {
        let d = self.check_pole(k)?;
        Ok(self.scatter_reg_jet(k, x).scale(1.0 / d))
    }

    pub fn scatter(&self, k: Complex64, x: f64) -> Result<Complex64> {
        Ok(self.scatter_jet(k, x)?.value)
    }

    /// Second coding of `ψ(x;k)` over a common denominator:
    /// `e^{ikx} [2(k²−α²)W + 2ikW′ − W″] / (2√(2π)(k²−α²)W)`.
    pub fn scatter_direct(&self, k: Complex64, x: f64) -> Result<Complex64> {
        let d = self.check_pole(k)?;
        let (w0, w1, w2) = (self.w_deriv(x, 0), self.w_deriv(x, 1), self.w_deriv(x, 2));
        let num = 2.0 * d * w0 + 2.0 * Complex64::i() * k * w1 - w2;
        let e = (Complex64::i() * k * x).exp();
        Ok(e * num / (2.0 * (2.0 * PI).sqrt() * d * w0))
    }

    /// `ψ₀ = (2α)^{3/2} cos αx / W`.
    pub fn psi0_jet(&self, x: f64) -> PointEval {
        let a = self.alpha;
        let s = (2.0 * a).powf(1.5);
        let num = PointEval::new(
            c(s * (a * x).cos()),
            c(-s * a * (a * x).sin()),
            c(-s * a * a * (a * x).cos()),
        );
        num.div(self.w_jet(x))
    }

    pub fn psi0(&self, x: f64) -> Complex64 {
        let a = self.alpha;
        (2.0 * a).powf(1.5) * (a * x).cos() / self.w(x)
    }

    /// `ψ₁ = (2α(x−z) sin αx + cos αx) / (√(2α) W)`.
    pub fn psi1_jet(&self, x: f64) -> PointEval {
        let a = self.alpha;
        let (s, co) = (a * x).sin_cos();
        let xz = c(x) - self.z;
        // N = 2α(x−z) sin αx + cos αx
        let n0 = 2.0 * a * xz * s + co;
        let n1 = c(2.0 * a * s) + 2.0 * a * a * xz * co - a * s;
        let n2 = c(4.0 * a * a * co) - 2.0 * a * a * a * xz * s - a * a * co;
        PointEval::new(n0, n1, n2)
            .div(self.w_jet(x))
            .scale(c(1.0 / (2.0 * a).sqrt()))
    }

    pub fn psi1(&self, x: f64) -> Complex64 {
        let a = self.alpha;
        let num = 2.0 * a * (c(x) - self.z) * (a * x).sin() + (a * x).cos();
        num / ((2.0 * a).sqrt() * self.w(x))
    }

    /// Leading large-`|x|` behaviour of `ψ₁`: `(i/(2√(2α)))(e^{−iαx} − e^{iαx})`.
    pub fn psi1_asymptote(&self, x: f64) -> Complex64 {
        let a = self.alpha;
        Complex64::i() / (2.0 * (2.0 * a).sqrt()) * ((-Complex64::i() * a * x).exp() - (Complex64::i() * a * x).exp())
    }
}

/// Default `x` stress grid: `[−40, 40]`, logarithmically dense near 0.
pub fn stress_grid_x() -> Vec<f64> {
    let mut xs = vec![0.0];
    let count = 24;
    for j in 0..count {
        let t = 1e-3 * (40.0f64 / 1e-3).powf(j as f64 / (count - 1) as f64);
        xs.push(t);
        xs.push(-t);
    }
    xs.sort_by(f64::total_cmp);
    xs
}

/// Default `k` stress grid on `[−3α, 3α]`, kept at least `1e−3` from `±α`.
pub fn stress_grid_k(alpha: f64) -> Vec<f64> {
    let count = 37;
    (0..count)
        .map(|j| -3.0 * alpha + 6.0 * alpha * j as f64 / (count - 1) as f64)
        .map(|k| {
            if (k.abs() - alpha).abs() < 1e-3 {
                k + 2e-3 * k.signum()
            } else {
                k
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> InteriorModel {
        InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(InteriorModel::new(0.0, Complex64::i()).is_err());
        assert!(InteriorModel::new(1.0, Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn w_values() {
        let m = InteriorModel::new(1.3, Complex64::new(0.4, -0.7)).unwrap();
        assert!((m.w(0.0) - (-2.0 * 1.3 * m.z())).norm() < 1e-14);
        let m1 = model();
        let v = m1.w(PI / 2.0);
        assert!((v - Complex64::new(PI, -2.0)).norm() < 1e-14);
        for x in stress_grid_x() {
            assert!((m.w(x).im - (-2.0 * 1.3 * -0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn potential_values() {
        let m = model();
        assert!((m.potential(0.0) - c(-8.0)).norm() < 1e-13);
        for x in stress_grid_x() {
            let a = m.potential(x);
            let b = m.potential_from_w(x);
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()), "x = {x}");
        }
        let far = m.potential(1e4).norm() * 1e4;
        assert!(far < 20.0);
    }

    #[test]
    fn two_codings_agree() {
        let m = model();
        let a = m.scatter(c(2.0), 0.0).unwrap();
        let b = m.scatter_direct(c(2.0), 0.0).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn pole_is_rejected() {
        assert!(model().scatter(c(1.0), 0.3).is_err());
        assert!(model().scatter(c(-1.0), 0.3).is_err());
    }

    #[test]
    fn eigen_residuals_on_stress_grid() {
        let m = InteriorModel::new(1.0, Complex64::new(0.3, 0.8)).unwrap();
        for &x in &stress_grid_x() {
            for &k in &stress_grid_k(1.0) {
                let f = m.scatter_jet(c(k), x).unwrap();
                let r = m.apply_h(&f, x) - k * k * f.value;
                assert!(r.norm() < 1e-8 * (1.0 + f.value.norm()), "x={x} k={k} r={r}");
            }
            let p0 = m.psi0_jet(x);
            let r0 = m.apply_h(&p0, x) - p0.value;
            assert!(r0.norm() < 1e-8, "x={x}");
            let p1 = m.psi1_jet(x);
            let r1 = m.apply_h(&p1, x) - p1.value - p0.value;
            assert!(r1.norm() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let m = model();
        let h = 1e-4;
        for &x in &[-3.1, -0.2, 0.0, 0.9, 7.5] {
            let f = |x: f64| m.psi1(x);
            let j = m.psi1_jet(x);
            let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
            let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert!((j.value - f(x)).norm() < 1e-14);
            assert!((j.d1 - d1).norm() < 1e-4);
            assert!((j.d2 - d2).norm() < 1e-4);
            let g = |x: f64| m.scatter(c(2.3), x).unwrap();
            let j = m.scatter_jet(c(2.3), x).unwrap();
            let d2 = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
            assert!((j.d2 - d2).norm() < 1e-4);
        }
    }

    #[test]
    fn psi0_from_residue() {
        let m = InteriorModel::new(1.4, Complex64::new(-0.2, 0.9)).unwrap();
        let a = m.alpha();
        for &x in &[-5.0, 0.0, 0.37, 12.0] {
            let plus = -Complex64::i() * (PI / a).sqrt() * m.scatter_reg(c(a), x);
            let minus = Complex64::i() * (PI / a).sqrt() * m.scatter_reg(c(-a), x);
            assert!((plus - m.psi0(x)).norm() < 1e-12);
            assert!((minus - m.psi0(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn psi0_at_origin() {
        let m = InteriorModel::new(0.8, Complex64::new(0.5, 1.5)).unwrap();
        let expected = -(2.0 * 0.8f64).sqrt() / m.z();
        assert!((m.psi0(0.0) - expected).norm() < 1e-14);
    }

    #[test]
    fn psi1_asymptotics() {
        let m = model();
        // x·|ψ₁ − asymptote| stays bounded over windows at two scales
        let window = |x0: f64| {
            (0..64)
                .map(|j| x0 + 0.1 * j as f64)
                .map(|x| x * (m.psi1(x) - m.psi1_asymptote(x)).norm())
                .fold(0.0f64, f64::max)
        };
        let (s1, s2) = (window(1e3), window(1e5));
        assert!(s1 < 2.0 && s2 < 2.0 && s2 > 0.1, "{s1} {s2}");
    }

    #[test]
    fn regularized_product_is_continuous_at_poles() {
        let m = model();
        for &k0 in &[-1.0, 1.0] {
            let center = m.scatter_reg(c(k0), 0.6);
            for j in 0..16 {
                let th = 2.0 * PI * j as f64 / 16.0;
                let k = c(k0) + 1e-7 * Complex64::from_polar(1.0, th);
                assert!((m.scatter_reg(k, 0.6) - center).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn scatter_asymptotics() {
        let m = model();
        let k = 2.0;
        let x = 1e5;
        let plane = (Complex64::i() * k * x).exp() / (2.0 * PI).sqrt();
        assert!((m.scatter(c(k), x).unwrap() - plane).norm() < 1e-4);
    }
}
