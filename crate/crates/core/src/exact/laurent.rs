//! Exact function algebra for `e^{iσk(x−z)} e^{iτkz} (2π)^{−u/2} Σ c_{m,p} k^m (x−z)^p`.
//!
//! The offset `z` never appears numerically here: it enters only through the
//! `(x − z)` basis and the tracked `e^{iτkz}` factor, so every identity proved
//! in this algebra holds for all `z` with `Im z ≠ 0` at once. The irrational
//! normalization `1/√(2π)` is carried as an integer power `u` of that unit.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::rational::{factorial, rat_int, RationalComplex};
use crate::error::{Error, Result};

/// Which intertwiner of the ladder `q_n^± = ∓∂ + n/(x − z)` to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum QSign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpLaurent {
    phase: i32,
    z_phase: i32,
    unit: i32,
    terms: BTreeMap<(i32, i32), RationalComplex>,
}

impl Default for ExpLaurent {
    fn default() -> Self {
        Self::zero()
    }
}

impl ExpLaurent {
    pub fn zero() -> Self {
        Self { phase: 0, z_phase: 0, unit: 0, terms: BTreeMap::new() }
    }

    /// Builds a value from `(k power, (x−z) power, coefficient)` triples,
    /// merging repeated keys.
    pub fn from_terms<I>(phase: i32, z_phase: i32, unit: i32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, i32, RationalComplex)>,
    {
        let mut out = Self { phase, z_phase, unit, terms: BTreeMap::new() };
        for (m, p, c) in terms {
            out.accumulate(m, p, &c);
        }
        out.canonicalize();
        out
    }

    pub fn monomial(k_pow: i32, x_pow: i32, coeff: RationalComplex) -> Self {
        Self::from_terms(0, 0, 0, [(k_pow, x_pow, coeff)])
    }

    pub fn constant(c: RationalComplex) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(RationalComplex::one())
    }

    /// `e^{ikx} = e^{ikz} e^{ik(x−z)}`.
    pub fn plane_wave() -> Self {
        Self::from_terms(1, 1, 0, [(0, 0, RationalComplex::one())])
    }

    /// `e^{−ikz}`.
    pub fn exp_minus_ikz() -> Self {
        Self::from_terms(0, -1, 0, [(0, 0, RationalComplex::one())])
    }

    pub fn phase(&self) -> i32 {
        self.phase
    }

    pub fn z_phase(&self) -> i32 {
        self.z_phase
    }

    pub fn unit(&self) -> i32 {
        self.unit
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), RationalComplex> {
        &self.terms
    }

    pub fn coeff(&self, k_pow: i32, x_pow: i32) -> RationalComplex {
        self.terms.get(&(k_pow, x_pow)).cloned().unwrap_or_else(RationalComplex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// No phase factors and no powers of `k`.
    pub fn is_k_free(&self) -> bool {
        self.phase == 0 && self.z_phase == 0 && self.terms.keys().all(|&(m, _)| m == 0)
    }

    pub fn min_k_power(&self) -> Option<i32> {
        self.terms.keys().map(|&(m, _)| m).min()
    }

    pub fn max_k_power(&self) -> Option<i32> {
        self.terms.keys().map(|&(m, _)| m).max()
    }

    pub fn x_powers(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().map(|&(_, p)| p)
    }

    /// The single `(k power, x power, coefficient)` term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(i32, i32, &RationalComplex)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&(m, p), c)| (m, p, c))
        } else {
            None
        }
    }

    /// Multiplies by `(2π)^{−du/2}`.
    pub fn times_unit(mut self, du: i32) -> Self {
        if !self.is_zero() {
            self.unit += du;
        }
        self
    }

    fn accumulate(&mut self, m: i32, p: i32, c: &RationalComplex) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((m, p)).or_insert_with(RationalComplex::zero);
        *entry += c;
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.phase = 0;
            self.z_phase = 0;
            self.unit = 0;
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.phase != rhs.phase || self.z_phase != rhs.z_phase {
            return Err(Error::PhaseMismatch {
                lhs_phase: self.phase,
                lhs_z: self.z_phase,
                rhs_phase: rhs.phase,
                rhs_z: rhs.z_phase,
            });
        }
        if self.unit != rhs.unit {
            return Err(Error::UnitMismatch { lhs: self.unit, rhs: rhs.unit });
        }
        let mut out = self.clone();
        for (&(m, p), c) in &rhs.terms {
            out.accumulate(m, p, c);
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&-rhs)
    }

    pub fn scale(&self, c: &RationalComplex) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out.canonicalize();
        out
    }

    pub fn mul_x_pow(&self, p: i32) -> Self {
        self.shift(0, p)
    }

    pub fn mul_k_pow(&self, m: i32) -> Self {
        self.shift(m, 0)
    }

    fn shift(&self, dm: i32, dp: i32) -> Self {
        Self {
            phase: self.phase,
            z_phase: self.z_phase,
            unit: self.unit,
            terms: self.terms.iter().map(|(&(m, p), c)| ((m + dm, p + dp), c.clone())).collect(),
        }
    }

    /// Exact `d/dx`. The phase `e^{iσk(x−z)}` contributes `iσk`; the tracked
    /// `e^{iτkz}` is constant in `x`.
    pub fn diff_x(&self) -> Self {
        let mut out = Self {
            phase: self.phase,
            z_phase: self.z_phase,
            unit: self.unit,
            terms: BTreeMap::new(),
        };
        let i_sigma = RationalComplex::i().scale(&rat_int(self.phase));
        for (&(m, p), c) in &self.terms {
            if self.phase != 0 {
                out.accumulate(m + 1, p, &(c * &i_sigma));
            }
            if p != 0 {
                out.accumulate(m, p - 1, &c.scale(&rat_int(p)));
            }
        }
        out.canonicalize();
        out
    }

    /// `q^± f = ∓f′ + (c/(x − z)) f` with a free coefficient `c`; the ladder
    /// operator of `h_n` uses `c = n`.
    pub fn apply_q_with(&self, coefficient: i64, sign: QSign) -> Self {
        let d = self.diff_x();
        let d = match sign {
            QSign::Plus => -d,
            QSign::Minus => d,
        };
        let shifted = self.mul_x_pow(-1).scale(&RationalComplex::from_int(coefficient));
        d.try_add(&shifted).expect("derivative keeps phase and unit")
    }

    pub fn apply_q(&self, n: u32, sign: QSign) -> Self {
        self.apply_q_with(i64::from(n), sign)
    }

    /// `∂^m/∂k^m` at `k = 0`, expanding the phase `e^{iσk(x−z)}` in powers
    /// of `k`. The result is `k`-free.
    pub fn limit_k0_deriv(&self, order: u32) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.z_phase != 0 {
            return Err(Error::UnresolvedZPhase(self.z_phase));
        }
        if let Some(m) = self.min_k_power().filter(|&m| m < 0) {
            return Err(Error::NegativeKPower(m));
        }
        let order = order as i32;
        let i_sigma = RationalComplex::i().scale(&rat_int(self.phase));
        let m_fact = rat_int(factorial(order as u64));
        let mut out = Self { phase: 0, z_phase: 0, unit: self.unit, terms: BTreeMap::new() };
        for (&(a, p), c) in &self.terms {
            if a > order {
                continue;
            }
            let j = order - a;
            if self.phase == 0 && j > 0 {
                continue;
            }
            // c (iσ)^j / j! (x−z)^{p+j}, times m!
            let coeff = &(c * &i_sigma.pow(j as u32)).scale(&(&m_fact / rat_int(factorial(j as u64))));
            out.accumulate(0, p + j, coeff);
        }
        out.canonicalize();
        Ok(out)
    }

    /// Substitutes `k → −k`.
    pub fn reflect_k(&self) -> Self {
        let mut out = Self {
            phase: -self.phase,
            z_phase: -self.z_phase,
            unit: self.unit,
            terms: BTreeMap::new(),
        };
        for (&(m, p), c) in &self.terms {
            let c = if m.rem_euclid(2) == 1 { -c } else { c.clone() };
            out.terms.insert((m, p), c);
        }
        out.canonicalize();
        out
    }

    pub fn to_numeric(&self) -> NumericLaurent {
        NumericLaurent {
            phase: self.phase as f64,
            z_phase: self.z_phase as f64,
            scale: (2.0 * std::f64::consts::PI).powf(-0.5 * self.unit as f64),
            terms: self
                .terms
                .iter()
                .map(|(&(m, p), c)| (m, p, c.to_complex64()))
                .collect(),
        }
    }

    pub fn eval(&self, x: Complex64, k: Complex64, z: Complex64) -> Complex64 {
        self.to_numeric().eval(x, k, z)
    }
}

/// Floating-point image of an [`ExpLaurent`], for repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumericLaurent {
    pub phase: f64,
    pub z_phase: f64,
    pub scale: f64,
    pub terms: Vec<(i32, i32, Complex64)>,
}

impl NumericLaurent {
    pub fn eval(&self, x: Complex64, k: Complex64, z: Complex64) -> Complex64 {
        let i = Complex64::i();
        let dx = x - z;
        let sum: Complex64 = self
            .terms
            .iter()
            .map(|&(m, p, c)| c * k.powi(m) * dx.powi(p))
            .sum();
        let phase = (i * k * (dx * self.phase + z * self.z_phase)).exp();
        sum * phase * self.scale
    }
}

impl Add<&ExpLaurent> for &ExpLaurent {
    type Output = ExpLaurent;
    /// Panics when the phases or units differ; use [`ExpLaurent::try_add`] to
    /// handle that case.
    fn add(self, rhs: &ExpLaurent) -> ExpLaurent {
        self.try_add(rhs).expect("ExpLaurent addition with mismatched phase")
    }
}

impl Add for ExpLaurent {
    type Output = ExpLaurent;
    fn add(self, rhs: ExpLaurent) -> ExpLaurent {
        &self + &rhs
    }
}

impl Sub<&ExpLaurent> for &ExpLaurent {
    type Output = ExpLaurent;
    fn sub(self, rhs: &ExpLaurent) -> ExpLaurent {
        self.try_sub(rhs).expect("ExpLaurent subtraction with mismatched phase")
    }
}

impl Sub for ExpLaurent {
    type Output = ExpLaurent;
    fn sub(self, rhs: ExpLaurent) -> ExpLaurent {
        &self - &rhs
    }
}

impl Neg for &ExpLaurent {
    type Output = ExpLaurent;
    fn neg(self) -> ExpLaurent {
        self.scale(&-RationalComplex::one())
    }
}

impl Neg for ExpLaurent {
    type Output = ExpLaurent;
    fn neg(self) -> ExpLaurent {
        -&self
    }
}

impl Mul<&ExpLaurent> for &ExpLaurent {
    type Output = ExpLaurent;
    fn mul(self, rhs: &ExpLaurent) -> ExpLaurent {
        if self.is_zero() || rhs.is_zero() {
            return ExpLaurent::zero();
        }
        let mut out = ExpLaurent {
            phase: self.phase + rhs.phase,
            z_phase: self.z_phase + rhs.z_phase,
            unit: self.unit + rhs.unit,
            terms: BTreeMap::new(),
        };
        for (&(m1, p1), c1) in &self.terms {
            for (&(m2, p2), c2) in &rhs.terms {
                out.accumulate(m1 + m2, p1 + p2, &(c1 * c2));
            }
        }
        out.canonicalize();
        out
    }
}

impl Mul for ExpLaurent {
    type Output = ExpLaurent;
    fn mul(self, rhs: ExpLaurent) -> ExpLaurent {
        &self * &rhs
    }
}

impl fmt::Display for ExpLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.unit != 0 {
            write!(f, "(2π)^({}/2) ", -self.unit)?;
        }
        if self.phase != 0 {
            write!(f, "e^({}ik(x-z)) ", self.phase)?;
        }
        if self.z_phase != 0 {
            write!(f, "e^({}ikz) ", self.z_phase)?;
        }
        write!(f, "[")?;
        for (idx, (&(m, p), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if m != 0 {
                write!(f, " k^{m}")?;
            }
            if p != 0 {
                write!(f, " (x-z)^{p}")?;
            }
        }
        write!(f, "]")
    }
}
