//! Finite sums `Σ c e^{iωx} (x − z)^p` with frequencies on the lattice
//! `ω = a·α + b·ε/4`. They describe the large-`|x|` behaviour of every
//! kernel and chain function the resolutions need, and each term has a
//! closed-form integral over the real line (Jordan's lemma), so slowly
//! decaying integrands are split into an exactly integrated asymptotic part
//! and an absolutely integrable numeric remainder.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{quad_line, QuadResult};

/// Numeric values of the lattice generators and the pole position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub z: Complex64,
    pub alpha: f64,
    pub eps: f64,
}

impl Frame {
    pub fn omega(&self, a: i32, b: i32) -> f64 {
        f64::from(a) * self.alpha + f64::from(b) * self.eps / 4.0
    }
}

/// Terms keyed by `(a, b, p)`; powers below `floor` are discarded by
/// products, so a series built from factors known through `(x−z)^{floor}`
/// is itself exact through that order.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    floor: i32,
    terms: BTreeMap<(i32, i32, i32), Complex64>,
}

impl TrigSeries {
    pub fn zero(floor: i32) -> Self {
        Self { floor, terms: BTreeMap::new() }
    }

    pub fn term(floor: i32, a: i32, b: i32, p: i32, c: Complex64) -> Self {
        let mut s = Self::zero(floor);
        s.add_term(a, b, p, c);
        s
    }

    pub fn constant(floor: i32, c: Complex64) -> Self {
        Self::term(floor, 0, 0, 0, c)
    }

    /// `e^{iωs}` with `s = x − x′`, as `e^{iωx}` times the constant `e^{−iωx′}`.
    pub fn exp_s(floor: i32, frame: &Frame, a: i32, b: i32, x_prime: f64) -> Self {
        let w = frame.omega(a, b);
        Self::term(floor, a, b, 0, (-Complex64::i() * w * x_prime).exp())
    }

    /// `cos(ωs)`.
    pub fn cos_s(floor: i32, frame: &Frame, a: i32, b: i32, x_prime: f64) -> Self {
        let mut s = Self::exp_s(floor, frame, a, b, x_prime);
        s.add(&Self::exp_s(floor, frame, -a, -b, x_prime));
        s.scale(Complex64::new(0.5, 0.0))
    }

    /// `sin(ωs)`.
    pub fn sin_s(floor: i32, frame: &Frame, a: i32, b: i32, x_prime: f64) -> Self {
        let mut s = Self::exp_s(floor, frame, a, b, x_prime);
        s.add(&Self::exp_s(floor, frame, -a, -b, x_prime).scale(Complex64::new(-1.0, 0.0)));
        s.scale(Complex64::new(0.0, -0.5))
    }

    /// `s = (x − z) − (x′ − z)`.
    pub fn s_linear(floor: i32, x_prime: f64, z: Complex64) -> Self {
        let mut s = Self::term(floor, 0, 0, 1, Complex64::new(1.0, 0.0));
        s.add_term(0, 0, 0, -(x_prime - z));
        s
    }

    /// `1/s = Σ_{j≥0} (x′−z)^j (x−z)^{−j−1}`, kept through `(x−z)^{floor}`.
    pub fn inv_s(floor: i32, x_prime: f64, z: Complex64) -> Self {
        let xp = x_prime - z;
        let mut s = Self::zero(floor);
        let mut j = 0;
        while -j > floor {
            s.add_term(0, 0, -j - 1, xp.powi(j));
            j += 1;
        }
        s
    }

    /// Series of a `k`-free, phase-free Laurent polynomial in `(x − z)`.
    pub fn from_laurent(floor: i32, f: &crate::exact::ExpLaurent) -> Result<Self> {
        if f.phase() != 0 || f.z_phase() != 0 || !f.is_k_free() {
            return Err(Error::Precondition("expected a k-free, phase-free Laurent polynomial".into()));
        }
        let n = f.to_numeric();
        let mut s = Self::zero(floor);
        for &(_, p, c) in &n.terms {
            s.add_term(0, 0, p, c * n.scale);
        }
        Ok(s)
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32, i32), &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.2).max()
    }

    pub fn add_term(&mut self, a: i32, b: i32, p: i32, c: Complex64) {
        if p < self.floor || c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry((a, b, p)).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn add(&mut self, other: &Self) {
        for (&(a, b, p), &c) in &other.terms {
            self.add_term(a, b, p, c);
        }
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self
    }

    pub fn mul_power(&self, q: i32) -> Self {
        let mut out = Self::zero(self.floor);
        for (&(a, b, p), &c) in &self.terms {
            out.add_term(a, b, p + q, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.floor.max(other.floor));
        for (&(a, b, p), &c) in &self.terms {
            for (&(a2, b2, p2), &c2) in &other.terms {
                out.add_term(a + a2, b + b2, p + p2, c * c2);
            }
        }
        out
    }

    pub fn eval(&self, frame: &Frame, x: f64) -> Complex64 {
        let xz = Complex64::new(x, 0.0) - frame.z;
        self.terms
            .iter()
            .map(|(&(a, b, p), &c)| c * (Complex64::i() * frame.omega(a, b) * x).exp() * xz.powi(p))
            .sum()
    }

    /// `∫_ℝ` of the series, term by term. Terms with `p ≥ 0` diverge;
    /// `p = −1` with `ω = 0` takes the symmetric principal value.
    pub fn integral(&self, frame: &Frame) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (&(a, b, p), &c) in &self.terms {
            if c.norm() == 0.0 {
                continue;
            }
            let zero_freq = a == 0 && b == 0;
            total += c * exp_power_integral(frame.omega(a, b), zero_freq, -p, frame.z)?;
        }
        Ok(total)
    }
}

/// `∫_ℝ e^{iωx} (x − z)^{−q} dx` for `q ≥ 1`, `Im z ≠ 0`.
pub fn exp_power_integral(omega: f64, zero_freq: bool, q: i32, z: Complex64) -> Result<Complex64> {
    if q < 1 {
        return Err(Error::Precondition(format!(
            "∫ e^(iωx) (x−z)^{} dx diverges",
            -q
        )));
    }
    let up = z.im > 0.0;
    if zero_freq {
        return Ok(if q == 1 {
            Complex64::new(0.0, if up { PI } else { -PI })
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    if omega.abs() < 1e-12 {
        return Err(Error::Precondition(format!(
            "frequency {omega:e} is numerically zero but structurally nonzero"
        )));
    }
    if (omega > 0.0) != up {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // 2πi Res for the upper half-plane, −2πi Res for the lower
    let i = Complex64::i();
    let fact: f64 = (1..q).map(f64::from).product();
    let res = (i * omega).powi(q - 1) * (i * omega * z).exp() / fact;
    let sign = if up { 1.0 } else { -1.0 };
    Ok(2.0 * PI * i * res * sign)
}

/// `∫_ℝ g` where `g − asym` is absolutely integrable: the remainder is
/// integrated numerically and the asymptotic series exactly.
pub fn integrate_split<G>(g: G, asym: &TrigSeries, frame: &Frame, tol: f64) -> Result<QuadResult>
where
    G: Fn(f64) -> Complex64 + Sync,
{
    let exact = asym.integral(frame)?;
    let rem = quad_line(|x| g(x) - asym.eval(frame, x), tol, 0.0)?;
    Ok(QuadResult { value: rem.value + exact, ..rem })
}
