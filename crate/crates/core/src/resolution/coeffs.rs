//! Exact coefficients of the rearranged boundary resolutions: the `C_{lmn}`
//! block and the `β_j` sequence that fixes the ε-dependent chain.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, rat, rat_int, Rational, RationalComplex};

/// `C_{lmn} = (1/l) Σ_{j=0}^{m} (−1)^j C(l, j) C(n−m−1+2j, l−1)`.
pub fn coeff_c(l: i64, m: i64, n: i64) -> Result<Rational> {
    if n < 1 || l < 1 || l > 2 * n - 1 || m < 0 || m > (l - 1).min(n - 1) {
        return Err(Error::Precondition(format!(
            "C_lmn needs 1 <= l <= 2n-1 and 0 <= m <= min(l-1, n-1); got (l, m, n) = ({l}, {m}, {n})"
        )));
    }
    let mut acc = BigInt::zero();
    for j in 0..=m {
        let term = binomial(l, j) * binomial(n - m - 1 + 2 * j, l - 1);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(Rational::new(acc, BigInt::from(l)))
}

/// The first `count` terms of `β_0 = 1`, `β_l = (1/2)(1/(2l+1) − Σ_{j=1}^{l−1} β_j β_{l−j})`.
pub fn beta_seq(count: usize) -> Vec<Rational> {
    let mut beta: Vec<Rational> = Vec::with_capacity(count);
    for l in 0..count {
        let b = if l == 0 {
            Rational::one()
        } else {
            let conv: Rational = (1..l).map(|j| &beta[j] * &beta[l - j]).sum();
            (rat(1, 2 * l as i64 + 1) - conv) / rat_int(2)
        };
        beta.push(b);
    }
    beta
}

/// `Σ_{j≤l} β_j β_{l−j}`, which must equal `1/(2l+1)`.
pub fn beta_convolution(beta: &[Rational], l: usize) -> Rational {
    (0..=l).map(|j| &beta[j] * &beta[l - j]).sum()
}

/// Coefficients of `α_j(ε) = √2 c_j ε^{−2j−1/2}` with `c_j = i^{n+1} β_j`.
pub fn alpha_coeffs(n: u32, count: usize) -> Vec<RationalComplex> {
    let unit = RationalComplex::i_pow(i64::from(n) + 1);
    beta_seq(count).iter().map(|b| unit.scale(b)).collect()
}

/// Residual of the quadratic system `Σ_{j≤l} α_j α_{l−j} = −2(−1)^n / ((2l+1) ε^{2l+1})`
/// for `l < n`. Both sides carry the same power `ε^{−2l−1}`, so the check
/// compares exact coefficients; returns the list of `l` that fail.
pub fn alpha_system_failures(n: u32, alphas: &[RationalComplex]) -> Vec<usize> {
    let two = RationalComplex::from_int(2);
    (0..n as usize)
        .filter(|&l| {
            let lhs: RationalComplex = (0..=l)
                .map(|j| &two * &(&alphas[j] * &alphas[l - j]))
                .fold(RationalComplex::zero(), |acc, t| &acc + &t);
            let rhs = RationalComplex::sign_pow(i64::from(n) + 1)
                .scale(&(rat_int(2) * rat(1, 2 * l as i64 + 1)));
            lhs != rhs
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_examples() {
        for n in 1..6 {
            assert_eq!(coeff_c(1, 0, n).unwrap(), rat(1, 1));
        }
        assert_eq!(coeff_c(2, 0, 2).unwrap(), rat(1, 2));
        // j = 0 drops out since C(0, 1) = 0; j = 1 gives −C(2,1)C(2,1)/2
        assert_eq!(coeff_c(2, 1, 2).unwrap(), rat(-2, 1));
    }

    #[test]
    fn c_range_checked() {
        assert!(coeff_c(0, 0, 2).is_err());
        assert!(coeff_c(4, 0, 2).is_err());
        assert!(coeff_c(2, 2, 2).is_err());
        assert!(coeff_c(3, 2, 2).is_err());
    }

    #[test]
    fn beta_first_terms() {
        let b = beta_seq(5);
        assert_eq!(
            b,
            vec![rat(1, 1), rat(1, 6), rat(31, 360), rat(863, 15120), rat(76813, 1814400)]
        );
    }

    #[test]
    fn beta_convolution_identity() {
        let b = beta_seq(12);
        for l in 0..12 {
            assert_eq!(beta_convolution(&b, l), rat(1, 2 * l as i64 + 1), "l = {l}");
        }
        assert_eq!(rat_int(2) * &b[0] * &b[1], rat(1, 3));
    }

    #[test]
    fn alpha_system_holds() {
        for n in 1..=6 {
            assert!(alpha_system_failures(n, &alpha_coeffs(n, n as usize)).is_empty(), "n = {n}");
        }
    }

    #[test]
    fn alpha_system_detects_wrong_branch_mix() {
        let mut a = alpha_coeffs(3, 3);
        a[1] = -a[1].clone();
        assert_eq!(alpha_system_failures(3, &a), vec![1]);
    }
}
