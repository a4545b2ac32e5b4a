//! The ε-dependent chain `ψ_{nl}(x;ε) = i^{n+1} √(2/ε) Σ_{j≤l} β_j ε^{−2j} ψ_{n,l−j}(x)`
//! that carries the threshold contribution of the boundary resolution.
//!
//! Functions are stored exactly as polynomials in `ε^{−2}` with `ExpLaurent`
//! coefficients; the common factor `√(2/ε)` is implicit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::coeffs::beta_seq;
use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::exact::{rat, ExpLaurent, RationalComplex};

/// One chain member: `√(2/ε) Σ_j ε^{−2j} parts[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsFunction {
    pub parts: Vec<ExpLaurent>,
}

impl EpsFunction {
    pub fn eval(&self, x: Complex64, eps: f64, z: Complex64) -> Complex64 {
        let pre = (2.0 / eps).sqrt();
        let k = Complex64::zero();
        self.parts
            .iter()
            .enumerate()
            .map(|(j, f)| f.eval(x, k, z) * eps.powi(-2 * j as i32))
            .sum::<Complex64>()
            * pre
    }

    /// Applies `h_n` part by part (the operator does not touch `ε`).
    pub fn apply_h(&self, n: u32) -> Self {
        Self { parts: self.parts.iter().map(|f| crate::exact::apply_h(f, n)).collect() }
    }

    /// Structural equality after dropping trailing zero parts.
    pub fn same_as(&self, other: &Self) -> bool {
        let len = self.parts.len().max(other.parts.len());
        (0..len).all(|j| {
            let a = self.parts.get(j).cloned().unwrap_or_else(ExpLaurent::zero);
            let b = other.parts.get(j).cloned().unwrap_or_else(ExpLaurent::zero);
            a.try_sub(&b).map(|d| d.is_zero()).unwrap_or(a.is_zero() && b.is_zero())
        })
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(ExpLaurent::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsChain {
    pub n: u32,
    pub eps: f64,
    pub functions: Vec<EpsFunction>,
}

pub fn eps_chain(model: &BoundaryModel, eps: f64) -> Result<EpsChain> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Precondition(format!("ε must be positive, got {eps}")));
    }
    let n = model.n();
    let beta = beta_seq(n as usize);
    let unit = RationalComplex::i_pow(i64::from(n) + 1);
    let functions = (0..n)
        .map(|l| EpsFunction {
            parts: (0..=l)
                .map(|j| model.assoc(l - j).scale(&unit.scale(&beta[j as usize])))
                .collect(),
        })
        .collect();
    Ok(EpsChain { n, eps, functions })
}

impl EpsChain {
    pub fn eval(&self, l: usize, x: Complex64, z: Complex64) -> Complex64 {
        self.functions[l].eval(x, self.eps, z)
    }

    /// Failing indices of the chain relations `h ψ_{n0}(·;ε) = 0`,
    /// `h ψ_{nl}(·;ε) = ψ_{n,l−1}(·;ε)`.
    pub fn chain_failures(&self) -> Vec<usize> {
        (0..self.functions.len())
            .filter(|&l| {
                let h = self.functions[l].apply_h(self.n);
                if l == 0 {
                    !h.is_zero()
                } else {
                    !h.same_as(&self.functions[l - 1])
                }
            })
            .collect()
    }
}

/// Two-variable function `Σ ε^{−e} c (x−z)^p (x′−z)^q` keyed by `(e, p, q)`;
/// `e` counts powers of `ε^{−1}`. Only k-free, phase-free factors are
/// accepted, which covers every chain function.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OuterProduct {
    pub unit: Option<i32>,
    pub terms: BTreeMap<(i32, i32, i32), RationalComplex>,
}

impl OuterProduct {
    fn add(&mut self, e: i32, a: &ExpLaurent, b: &ExpLaurent, scale: &RationalComplex) -> Result<()> {
        if a.is_zero() || b.is_zero() {
            return Ok(());
        }
        for f in [a, b] {
            if f.phase() != 0 || f.z_phase() != 0 || !f.is_k_free() {
                return Err(Error::Precondition("outer products need k-free, phase-free factors".into()));
            }
        }
        let unit = a.unit() + b.unit();
        match self.unit {
            None => self.unit = Some(unit),
            Some(u) if u != unit => return Err(Error::UnitMismatch { lhs: u, rhs: unit }),
            _ => {}
        }
        for (&(_, p), ca) in a.terms() {
            for (&(_, q), cb) in b.terms() {
                let c = &(ca * cb) * scale;
                let slot = self.terms.entry((e, p, q)).or_insert_with(RationalComplex::zero);
                *slot += &c;
            }
        }
        self.terms.retain(|_, c| !c.is_zero());
        Ok(())
    }

    pub fn difference_terms(&self, other: &Self) -> usize {
        let mut keys: Vec<_> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.iter()
            .filter(|k| {
                let a = self.terms.get(k).cloned().unwrap_or_else(RationalComplex::zero);
                let b = other.terms.get(k).cloned().unwrap_or_else(RationalComplex::zero);
                a != b
            })
            .count()
    }
}

/// `Σ_l ψ_{nl}(x;ε) ψ_{n,n−1−l}(x′;ε)` as an exact outer product; the factor
/// `(√(2/ε))² = 2/ε` contributes one power of `ε^{−1}`.
pub fn chain_outer_product(chain: &EpsChain) -> Result<OuterProduct> {
    let n = chain.n as usize;
    let mut out = OuterProduct::default();
    let two = RationalComplex::from_int(2);
    for l in 0..n {
        let left = &chain.functions[l];
        let right = &chain.functions[n - 1 - l];
        for (j, a) in left.parts.iter().enumerate() {
            for (jp, b) in right.parts.iter().enumerate() {
                out.add(1 + 2 * (j + jp) as i32, a, b, &two)?;
            }
        }
    }
    Ok(out)
}

/// `−2(−1)^n Σ_l ε^{−(2n−2l−1)}/(2n−2l−1) Σ_{m≤l} ψ_{nm}(x) ψ_{n,l−m}(x′)`.
pub fn threshold_outer_product(model: &BoundaryModel) -> Result<OuterProduct> {
    let n = i64::from(model.n());
    let mut out = OuterProduct::default();
    for l in 0..n {
        let d = 2 * n - 2 * l - 1;
        let scale = RationalComplex::sign_pow(n + 1).scale(&rat(2, d));
        for m in 0..=l {
            out.add(d as i32, &model.assoc(m as u32), &model.assoc((l - m) as u32), &scale)?;
        }
    }
    Ok(out)
}

/// Number of mismatching coefficients between the two sides of the
/// outer-product identity (zero when it holds exactly).
pub fn outer_product_residual(model: &BoundaryModel) -> Result<usize> {
    let chain = eps_chain(model, 1.0)?;
    let lhs = chain_outer_product(&chain)?;
    let rhs = threshold_outer_product(model)?;
    if model.n() > 0 && lhs.unit != rhs.unit {
        return Ok(lhs.terms.len().max(rhs.terms.len()).max(1));
    }
    Ok(lhs.difference_terms(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn model(n: u32) -> BoundaryModel {
        BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn n2_examples() {
        let m = model(2);
        let c = eps_chain(&m, 0.5).unwrap();
        let mi = -RationalComplex::i();
        assert!(c.functions[0].same_as(&EpsFunction { parts: vec![m.assoc(0).scale(&mi)] }));
        let expected = EpsFunction {
            parts: vec![m.assoc(1).scale(&mi), m.assoc(0).scale(&mi.scale(&rat(1, 6)))],
        };
        assert!(c.functions[1].same_as(&expected));
        // closed forms 3i/(√(πε)(x−z)²) and (i/(2√(πε)))[1 + 1/(ε²(x−z)²)]
        let z = m.z();
        let x = Complex64::new(0.4, 0.0);
        let eps: f64 = 0.5;
        let xz = x - z;
        let sq = (std::f64::consts::PI * eps).sqrt();
        let v0 = Complex64::new(0.0, 3.0) / (sq * xz * xz);
        let v1 = Complex64::new(0.0, 0.5) / sq * (1.0 + 1.0 / (eps * eps * xz * xz));
        assert!((c.eval(0, x, z) - v0).norm() < 1e-14);
        assert!((c.eval(1, x, z) - v1).norm() < 1e-14);
    }

    #[test]
    fn n1_single_function() {
        let m = model(1);
        let c = eps_chain(&m, 0.3).unwrap();
        assert_eq!(c.functions.len(), 1);
        assert!(c.chain_failures().is_empty());
        assert!(c.functions[0].apply_h(1).is_zero());
    }

    #[test]
    fn chain_property() {
        for n in 0..=6 {
            assert!(eps_chain(&model(n), 0.7).unwrap().chain_failures().is_empty(), "n = {n}");
        }
    }

    #[test]
    fn outer_product_identity() {
        for n in 1..=6 {
            assert_eq!(outer_product_residual(&model(n)).unwrap(), 0, "n = {n}");
        }
    }

    #[test]
    fn outer_product_detects_wrong_beta() {
        let m = model(3);
        let mut chain = eps_chain(&m, 1.0).unwrap();
        chain.functions[2].parts[2] = chain.functions[2].parts[2].scale(&RationalComplex::from_int(2));
        let lhs = chain_outer_product(&chain).unwrap();
        let rhs = threshold_outer_product(&m).unwrap();
        assert!(lhs.difference_terms(&rhs) > 0);
    }

    #[test]
    fn rejects_nonpositive_eps() {
        assert!(eps_chain(&model(2), 0.0).is_err());
    }
}
