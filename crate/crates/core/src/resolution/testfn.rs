//! Concrete test-function families the resolutions are applied to.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::exact::{ExpLaurent, RationalComplex};
use crate::interior::InteriorModel;
use crate::model::{Model, ModelKind};

/// A chain function of one of the models used as a test function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainRef {
    /// `ψ_{nl}` of the boundary model.
    Assoc(u32),
    /// `ψ₀` of the interior model.
    Psi0,
    /// `ψ₁` of the interior model.
    Psi1,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    /// `exp(−((x − c)/w)²)`.
    Gaussian { center: f64, width: f64 },
    /// `H_order((x − c)/w) exp(−((x − c)/w)²)` with physicists' Hermite `H`.
    HermiteGaussian { order: u32, center: f64, width: f64 },
    /// `(x − z)^{−power}` with the model's `z` (boundary model only).
    RationalDecay { power: u32 },
    Chain(ChainRef),
}

/// Decay class: the test function lies in `L²((1+|x|)^γ)` for every
/// `γ < gamma_sup` (`None` means every `γ`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayClass {
    pub gamma_sup: Option<f64>,
}

impl TestFunction {
    pub fn gaussian() -> Self {
        TestFunction::Gaussian { center: 0.0, width: 1.0 }
    }

    pub fn validate(&self, model: &Model) -> Result<()> {
        match (self, model.kind()) {
            (TestFunction::Gaussian { width, .. } | TestFunction::HermiteGaussian { width, .. }, _) => {
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(Error::Precondition(format!("test-function width must be positive, got {width}")));
                }
                Ok(())
            }
            (TestFunction::RationalDecay { power }, ModelKind::Boundary) => {
                if *power == 0 {
                    return Err(Error::Precondition("rational decay power must be at least 1".into()));
                }
                Ok(())
            }
            (TestFunction::RationalDecay { .. }, ModelKind::Interior) => Err(Error::Unsupported(
                "rational-decay test functions are only available for the boundary model".into(),
            )),
            (TestFunction::Chain(ChainRef::Assoc(_)), ModelKind::Boundary) => Ok(()),
            (TestFunction::Chain(ChainRef::Psi0 | ChainRef::Psi1), ModelKind::Interior) => Ok(()),
            (TestFunction::Chain(c), k) => {
                Err(Error::Precondition(format!("chain function {c:?} does not belong to the {k:?} model")))
            }
        }
    }

    pub fn is_packet(&self) -> bool {
        matches!(self, TestFunction::Gaussian { .. } | TestFunction::HermiteGaussian { .. })
    }

    pub fn decay_class(&self, model: &Model) -> DecayClass {
        let gamma_sup = match (self, model) {
            (TestFunction::Gaussian { .. } | TestFunction::HermiteGaussian { .. }, _) => None,
            (TestFunction::RationalDecay { power }, _) => Some(2.0 * f64::from(*power) - 1.0),
            (TestFunction::Chain(ChainRef::Assoc(l)), Model::Boundary(m)) => {
                Some(2.0 * (f64::from(m.n()) - 2.0 * f64::from(*l)) - 1.0)
            }
            (TestFunction::Chain(ChainRef::Psi0), _) => Some(1.0),
            (TestFunction::Chain(ChainRef::Psi1), _) => Some(-1.0),
            _ => Some(f64::NEG_INFINITY),
        };
        DecayClass { gamma_sup }
    }

    /// Exact Laurent form for boundary-model test functions that have one.
    pub fn laurent(&self, model: &BoundaryModel) -> Option<ExpLaurent> {
        match self {
            TestFunction::RationalDecay { power } => {
                Some(ExpLaurent::monomial(0, -(*power as i32), RationalComplex::from_int(1)))
            }
            TestFunction::Chain(ChainRef::Assoc(l)) => Some(model.assoc(*l)),
            _ => None,
        }
    }

    /// Packet test functions on the real line.
    pub fn eval_packet(&self, x: f64) -> Option<f64> {
        match *self {
            TestFunction::Gaussian { center, width } => {
                let u = (x - center) / width;
                Some((-u * u).exp())
            }
            TestFunction::HermiteGaussian { order, center, width } => {
                let u = (x - center) / width;
                Some(hermite(order, u) * (-u * u).exp())
            }
            _ => None,
        }
    }

    /// Support half-width (around the center) outside which a packet is
    /// below double-precision noise.
    pub fn packet_extent(&self) -> Option<(f64, f64)> {
        match *self {
            TestFunction::Gaussian { center, width } => Some((center, 9.0 * width)),
            TestFunction::HermiteGaussian { order, center, width } => {
                Some((center, (9.0 + (f64::from(order)).sqrt() * 2.0) * width))
            }
            _ => None,
        }
    }

    pub fn eval(&self, model: &Model, x: f64) -> Result<Complex64> {
        self.validate(model)?;
        if let Some(v) = self.eval_packet(x) {
            return Ok(Complex64::new(v, 0.0));
        }
        match (self, model) {
            (_, Model::Boundary(m)) => {
                let f = self.laurent(m).expect("validated boundary test function");
                Ok(f.eval(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0), m.z()))
            }
            (TestFunction::Chain(ChainRef::Psi0), Model::Interior(m)) => Ok(m.psi0(x)),
            (TestFunction::Chain(ChainRef::Psi1), Model::Interior(m)) => Ok(m.psi1(x)),
            _ => unreachable!("validated interior test function"),
        }
    }

    pub fn eval_interior(&self, model: &InteriorModel, x: f64) -> Result<Complex64> {
        self.eval(&Model::Interior(*model), x)
    }
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite(order: u32, u: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    if order == 0 {
        return h0;
    }
    for k in 1..order {
        let h2 = 2.0 * u * h1 - 2.0 * f64::from(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.3), 1.0);
        assert!((hermite(2, 0.5) - (4.0 * 0.25 - 2.0)).abs() < 1e-15);
        assert!((hermite(3, 1.5) - (8.0 * 3.375 - 12.0 * 1.5)).abs() < 1e-12);
    }

    #[test]
    fn class_and_model_checks() {
        let b = Model::Boundary(BoundaryModel::new(2, Complex64::new(0.0, 1.0)).unwrap());
        let i = Model::Interior(InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap());
        assert!(TestFunction::Chain(ChainRef::Psi0).validate(&b).is_err());
        assert!(TestFunction::Chain(ChainRef::Assoc(0)).validate(&i).is_err());
        assert!(TestFunction::RationalDecay { power: 2 }.validate(&i).is_err());
        assert_eq!(TestFunction::Chain(ChainRef::Assoc(0)).decay_class(&b).gamma_sup, Some(3.0));
        assert_eq!(TestFunction::gaussian().decay_class(&i).gamma_sup, None);
        let v = TestFunction::Chain(ChainRef::Assoc(0)).eval(&b, 0.0).unwrap();
        // ψ₂₀(0) = −3/(√(2π)(−i)²) = 3/√(2π)
        assert!((v - Complex64::new(3.0 / (2.0 * std::f64::consts::PI).sqrt(), 0.0)).norm() < 1e-14);
    }
}
