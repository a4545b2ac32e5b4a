//! The family `h_n = −∂² + n(n+1)/(x − z)²` with its exceptional point at the
//! threshold `E = 0`: associated-function chains, growing chains and two
//! independent constructions of the continuum eigenfunctions.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    apply_h, dfact, factorial, rat_int, ExpLaurent, QSign, Rational, RationalComplex,
};

/// Largest chain index the verification suites exercise by default.
pub const MAX_N: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryModel {
    n: u32,
    z: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainClass {
    Normalizable,
    BoundedNonNormalizable,
    Growing,
}

impl BoundaryModel {
    pub fn new(n: u32, z: Complex64) -> Result<Self> {
        if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::InvalidModel(format!("Im z must be a nonzero finite number, got z = {z}")));
        }
        Ok(Self { n, z })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn potential(&self, x: Complex64) -> Result<Complex64> {
        let d = x - self.z;
        if d == Complex64::zero() {
            return Err(Error::Singular(format!("x = z = {}", self.z)));
        }
        let c = f64::from(self.n) * f64::from(self.n + 1);
        Ok(c / (d * d))
    }

    /// `h_n f` in the exact algebra.
    pub fn h(&self, f: &ExpLaurent) -> ExpLaurent {
        apply_h(f, self.n)
    }

    /// Associated function `ψ_{nl} = (−i)^n (2n−2l−1)!! / (√(2π) (2l)!! (x−z)^{n−2l})`.
    pub fn assoc(&self, l: u32) -> ExpLaurent {
        let n = i64::from(self.n);
        let l = i64::from(l);
        let num = dfact(2 * n - 2 * l - 1).expect("odd argument");
        let den = dfact(2 * l).expect("nonnegative argument");
        let c = RationalComplex::i_pow(-n).scale(&(num / den));
        ExpLaurent::monomial(0, (2 * l - n) as i32, c).times_unit(1)
    }

    /// Growing chain `φ_{nl} = (−1)^l (2n+1)!! / ((2l)!! (2n+2l+1)!!) (x−z)^{n+2l+1}`.
    pub fn growing(&self, l: u32) -> ExpLaurent {
        let n = i64::from(self.n);
        let l = i64::from(l);
        let num = dfact(2 * n + 1).expect("positive argument");
        let den = dfact(2 * l).expect("nonnegative") * dfact(2 * n + 2 * l + 1).expect("positive");
        let c = RationalComplex::sign_pow(l).scale(&(num / den));
        ExpLaurent::monomial(0, (n + 2 * l + 1) as i32, c)
    }

    /// `k^n ψ_n(x;k)` from the explicit finite sum.
    pub fn scatter(&self) -> ExpLaurent {
        let n = u64::from(self.n);
        let terms = (0..=n).map(|m| {
            let num = factorial(n + m);
            let den = (num_bigint::BigInt::from(1) << m) * factorial(m) * factorial(n - m);
            let c = RationalComplex::i_pow(m as i64).scale(&Rational::new(num, den));
            ((n - m) as i32, -(m as i32), c)
        });
        ExpLaurent::from_terms(1, 1, 1, terms)
    }

    /// `k^n ψ_n(x;k) = i^n q_n^+ ⋯ q_1^+ e^{ikx} / √(2π)`.
    pub fn scatter_ladder(&self) -> ExpLaurent {
        let mut f = ExpLaurent::plane_wave().times_unit(1);
        for j in 1..=self.n {
            f = f.apply_q(j, QSign::Plus).scale(&RationalComplex::i());
        }
        f
    }

    /// [`scatter`](Self::scatter) with the coefficient of the most singular
    /// term multiplied by `1 + rel`. Used to check that the verification
    /// suites detect wrong eigenfunctions.
    pub fn scatter_perturbed(&self, rel: &Rational) -> ExpLaurent {
        let f = self.scatter();
        let key = (0, -(self.n as i32));
        let c = f.coeff(key.0, key.1);
        let bump = ExpLaurent::from_terms(1, 1, 1, [(key.0, key.1, c.scale(rel))]);
        &f + &bump
    }

    pub fn classify(&self, l: u32) -> ChainClass {
        let d = i64::from(self.n) - 2 * i64::from(l);
        match d {
            d if d >= 1 => ChainClass::Normalizable,
            0 => ChainClass::BoundedNonNormalizable,
            _ => ChainClass::Growing,
        }
    }

    /// Number of normalizable chain functions, `⌊(n+1)/2⌋`.
    pub fn normalizable_count(&self) -> u32 {
        (0..self.n)
            .filter(|&l| self.classify(l) == ChainClass::Normalizable)
            .count() as u32
    }
}

/// `(−1)^n / (2l)!` times the `2l`-th `k`-derivative at `k = 0` of
/// `e^{−ikz} k^n ψ_n`; reproduces `ψ_{nl}`.
pub fn assoc_from_scatter(model: &BoundaryModel, l: u32) -> Result<ExpLaurent> {
    let f = &ExpLaurent::exp_minus_ikz() * &model.scatter();
    let d = f.limit_k0_deriv(2 * l)?;
    let c = RationalComplex::sign_pow(i64::from(model.n()))
        .scale(&(Rational::one() / rat_int(factorial(2 * u64::from(l)))));
    Ok(d.scale(&c))
}
