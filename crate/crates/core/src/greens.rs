//! Green functions of both models, numerical pole orders at the exceptional
//! point and the three multiplicity indexes.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::interior::InteriorModel;
use crate::model::Model;
use crate::resolution::eps_chain::eps_chain;
use crate::resolution::testfn::{ChainRef, TestFunction};

/// Probe points `(x, x′)` for the pole-order estimates.
pub const PROBES: [(f64, f64); 2] = [(0.7, -0.4), (1.3, 0.2)];
/// Samples on the circle for the Laurent coefficients.
const CIRCLE_SAMPLES: usize = 256;
/// Coefficients below this fraction of the largest count as zero.
const ZERO_REL: f64 = 1e-9;
/// Coefficients above this fraction count as present; in between is ambiguous.
const NONZERO_REL: f64 = 1e-5;
/// Highest pole order searched for.
const MAX_ORDER: usize = 40;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `√E` on the branch `Im √E ≥ 0`.
pub fn sqrt_e(e: Complex64) -> Complex64 {
    let k = e.sqrt();
    if k.im < 0.0 {
        -k
    } else {
        k
    }
}

fn psi_k(model: &Model, x: f64, k: Complex64) -> Result<Complex64> {
    match model {
        Model::Boundary(m) => {
            if k == Complex64::new(0.0, 0.0) {
                return Err(Error::Pole(0.0));
            }
            Ok(m.scatter().eval(cx(x), k, m.z()) / k.powi(m.n() as i32))
        }
        Model::Interior(m) => m.scatter(k, x),
    }
}

fn dpsi_k(model: &Model, x: f64, k: Complex64) -> Result<Complex64> {
    match model {
        Model::Boundary(m) => {
            if k == Complex64::new(0.0, 0.0) {
                return Err(Error::Pole(0.0));
            }
            Ok(m.scatter().diff_x().eval(cx(x), k, m.z()) / k.powi(m.n() as i32))
        }
        Model::Interior(m) => Ok(m.scatter_jet(k, x)?.d1),
    }
}

/// `(πi/k) ψ(x_>;k) ψ(x_<;−k)` as a function of the momentum `k`.
pub fn green_k(model: &Model, x: f64, x_prime: f64, k: Complex64) -> Result<Complex64> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(0.0));
    }
    let (hi, lo) = if x >= x_prime { (x, x_prime) } else { (x_prime, x) };
    Ok(Complex64::new(0.0, PI) / k * psi_k(model, hi, k)? * psi_k(model, lo, -k)?)
}

/// `G(x, x′; E)` with `k = √E`, `Im k ≥ 0`.
pub fn green(model: &Model, x: f64, x_prime: f64, e: Complex64) -> Result<Complex64> {
    green_k(model, x, x_prime, sqrt_e(e))
}

/// `∂_x G` at `x = x′ + 0` minus its value at `x = x′ − 0`; equals `−1`
/// when `(h − E) G = δ(x − x′)`.
pub fn green_jump(model: &Model, x_prime: f64, e: Complex64) -> Result<Complex64> {
    let k = sqrt_e(e);
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(0.0));
    }
    let c = Complex64::new(0.0, PI) / k;
    let right = dpsi_k(model, x_prime, k)? * psi_k(model, x_prime, -k)?;
    let left = psi_k(model, x_prime, k)? * dpsi_k(model, x_prime, -k)?;
    Ok(c * (right - left))
}

/// `|(h − E) G|` at `x ≠ x′` by a five-point second difference.
pub fn green_residual(model: &Model, x: f64, x_prime: f64, e: Complex64) -> Result<f64> {
    let h = 1e-2;
    let g = |t: f64| green(model, t, x_prime, e);
    let (gm2, gm1, g0, gp1, gp2) = (g(x - 2.0 * h)?, g(x - h)?, g(x)?, g(x + h)?, g(x + 2.0 * h)?);
    if (x - x_prime).abs() <= 2.0 * h {
        return Err(Error::Precondition("probe stencil crosses x = x′".into()));
    }
    let d2 = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * h * h);
    let v = match model {
        Model::Boundary(m) => m.potential(cx(x))?,
        Model::Interior(m) => m.potential(x),
    };
    Ok((-d2 + (v - e) * g0).norm())
}

/// Laurent coefficients `|a_{−m}| r^m`, `m = 1..=MAX_ORDER`, of `f` around
/// `center` from samples on the circle of radius `r`, relative to `max |f|`
/// on the circle.
fn principal_part<F: Fn(Complex64) -> Result<Complex64>>(f: F, center: Complex64, r: f64) -> Result<Vec<f64>> {
    let samples: Vec<(Complex64, Complex64)> = (0..CIRCLE_SAMPLES)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CIRCLE_SAMPLES as f64);
            Ok((w, f(center + r * w)?))
        })
        .collect::<Result<_>>()?;
    let scale = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(vec![0.0; MAX_ORDER]);
    }
    Ok((1..=MAX_ORDER)
        .map(|m| {
            // a_{−m} r^{−m} = (1/N) Σ f(w) w^{m}
            let s: Complex64 = samples.iter().map(|(w, v)| v * w.powi(m as i32)).sum();
            (s / CIRCLE_SAMPLES as f64).norm() / scale
        })
        .collect())
}

/// Highest `m` with a clearly present coefficient; a coefficient above it
/// that is neither clearly zero nor clearly present is ambiguous.
fn order_from_coeffs(b: &[f64]) -> Result<usize> {
    let order = b.iter().rposition(|&v| v > NONZERO_REL).map_or(0, |j| j + 1);
    if let Some(j) = b[order..].iter().position(|&v| v > ZERO_REL) {
        return Err(Error::AmbiguousPoleOrder(format!(
            "coefficient of order {} is {:e} of max |G|",
            order + j + 1,
            b[order + j]
        )));
    }
    if order == MAX_ORDER {
        return Err(Error::AmbiguousPoleOrder(format!("order exceeds {MAX_ORDER}")));
    }
    Ok(order)
}

/// Pole order of `f` at `center`, required to agree at radii `r` and `r/2`.
fn stable_order<F: Fn(Complex64) -> Result<Complex64>>(f: F, center: Complex64, r: f64) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("probe radius must be positive, got {r}")));
    }
    let a = order_from_coeffs(&principal_part(&f, center, r)?)?;
    let b = order_from_coeffs(&principal_part(&f, center, 0.5 * r)?)?;
    if a != b {
        return Err(Error::AmbiguousPoleOrder(format!("order {a} at r = {r} but {b} at r = {}", r / 2.0)));
    }
    Ok(a)
}

/// Pole order of `k ↦ G(x, x′; k²)` at `k₀`.
pub fn pole_order_k(model: &Model, x: f64, x_prime: f64, k0: f64, r: f64) -> Result<usize> {
    stable_order(|k| green_k(model, x, x_prime, k), cx(k0), r)
}

/// Pole order of `E ↦ G(x, x′; E)` at `E₀ = α²` of the interior model,
/// continued from the upper rim of the cut `E > 0`.
pub fn pole_order_e(model: &InteriorModel, x: f64, x_prime: f64, r: f64) -> Result<usize> {
    let a2 = model.alpha() * model.alpha();
    if r >= a2 {
        return Err(Error::Precondition(format!("E-plane radius {r} must be below α² = {a2}")));
    }
    let m = Model::Interior(*model);
    // principal √E is analytic on the disc and equals the Im √E ≥ 0 branch for Im E ≥ 0
    stable_order(|e| green_k(&m, x, x_prime, e.sqrt()), cx(a2), r)
}

/// Pole order at both probe points; they must agree.
fn probed<F: Fn(f64, f64) -> Result<usize>>(f: F) -> Result<usize> {
    let orders: Vec<usize> = PROBES.iter().map(|&(x, xp)| f(x, xp)).collect::<Result<_>>()?;
    if orders.iter().any(|&o| o != orders[0]) {
        return Err(Error::AmbiguousPoleOrder(format!("probe points disagree: {orders:?}")));
    }
    Ok(orders[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTriple {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub indexes: IndexTriple,
    /// Pole order of the Green function in `k` at `k = 0` (boundary model).
    pub k_plane_pole_order: Option<u32>,
    /// Pole order in `E` at `E = α²` (interior model).
    pub e_plane_pole_order: Option<u32>,
}

/// Default probe radius: boundary `k` plane.
pub const BOUNDARY_RADIUS: f64 = 0.5;

/// Boundary Green-function pole order in `k` at `k = 0`.
pub fn boundary_pole_order(model: &BoundaryModel, r: f64) -> Result<usize> {
    let m = Model::Boundary(*model);
    probed(|x, xp| pole_order_k(&m, x, xp, 0.0, r))
}

/// Interior Green-function pole order in `E` at `E = α²`.
pub fn interior_pole_order(model: &InteriorModel, r: f64) -> Result<usize> {
    probed(|x, xp| pole_order_e(model, x, xp, r))
}

/// `(n₁, n₂, n₃)`: normalizable chain functions, chain functions present in
/// the pointwise resolution, and the Green-function pole order.
pub fn indexes(model: &Model) -> Result<IndexReport> {
    match model {
        Model::Boundary(m) => {
            let p = boundary_pole_order(m, BOUNDARY_RADIUS)? as u32;
            let n2 = if m.n() == 0 { 0 } else { eps_chain(m, 1.0)?.functions.len() as u32 };
            Ok(IndexReport {
                indexes: IndexTriple { n1: m.normalizable_count(), n2, n3: (p.saturating_sub(1)) / 2 },
                k_plane_pole_order: Some(p),
                e_plane_pole_order: None,
            })
        }
        Model::Interior(m) => {
            let a2 = m.alpha() * m.alpha();
            let p = interior_pole_order(m, 0.25 * a2)? as u32;
            let n1 = [ChainRef::Psi0, ChainRef::Psi1]
                .into_iter()
                .filter(|c| {
                    TestFunction::Chain(*c).decay_class(model).gamma_sup.is_some_and(|g| g > 0.0)
                })
                .count() as u32;
            // the pointwise interior resolution carries ψ₀ only
            Ok(IndexReport {
                indexes: IndexTriple { n1, n2: 1, n3: p },
                k_plane_pole_order: None,
                e_plane_pole_order: Some(p),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(n: u32) -> Model {
        Model::Boundary(BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap())
    }

    fn im() -> Model {
        Model::Interior(InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap())
    }

    #[test]
    fn free_green_function() {
        let g = green(&bm(0), 1.0, 0.0, cx(1.0)).unwrap();
        let expected = Complex64::new(0.0, 0.5) * Complex64::new(0.0, 1.0).exp();
        assert!((g - expected).norm() < 1e-14);
    }

    #[test]
    fn symmetry_jump_and_equation() {
        let e = Complex64::new(0.7, 0.3);
        for m in [bm(1), bm(3), im()] {
            let a = green(&m, 0.9, -0.5, e).unwrap();
            let b = green(&m, -0.5, 0.9, e).unwrap();
            assert_eq!(a, b);
            let jump = green_jump(&m, 0.35, e).unwrap();
            assert!((jump + 1.0).norm() < 1e-10, "{jump}");
            let r = green_residual(&m, 1.1, -0.2, e).unwrap();
            assert!(r < 1e-6 * (1.0 + a.norm()), "{r}");
        }
    }

    #[test]
    fn singular_momenta_are_errors() {
        assert!(matches!(green(&bm(2), 0.1, 0.2, cx(0.0)), Err(Error::Pole(_))));
        assert!(matches!(green(&im(), 0.1, 0.2, cx(1.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn boundary_orders() {
        for n in 0..=3u32 {
            let Model::Boundary(m) = bm(n) else { unreachable!() };
            assert_eq!(boundary_pole_order(&m, BOUNDARY_RADIUS).unwrap(), 2 * n as usize + 1);
        }
    }

    #[test]
    fn interior_orders() {
        let Model::Interior(m) = im() else { unreachable!() };
        assert_eq!(interior_pole_order(&m, 0.25).unwrap(), 2);
        assert_eq!(probed(|x, xp| pole_order_k(&im(), x, xp, 1.0, 0.3)).unwrap(), 2);
        assert_eq!(probed(|x, xp| pole_order_k(&im(), x, xp, -1.0, 0.3)).unwrap(), 2);
    }

    #[test]
    fn regular_point_has_order_zero() {
        assert_eq!(pole_order_k(&bm(2), 0.7, -0.4, 2.0, 0.3).unwrap(), 0);
    }

    #[test]
    fn index_triples() {
        assert_eq!(indexes(&bm(3)).unwrap().indexes, IndexTriple { n1: 2, n2: 3, n3: 3 });
        assert_eq!(indexes(&bm(3)).unwrap().k_plane_pole_order, Some(7));
        assert_eq!(indexes(&bm(2)).unwrap().indexes, IndexTriple { n1: 1, n2: 2, n3: 2 });
        assert_eq!(indexes(&im()).unwrap().indexes, IndexTriple { n1: 1, n2: 1, n3: 2 });
    }
}
