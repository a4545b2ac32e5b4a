//! Biorthogonality relations (pairing `∫ f g dx`, no conjugation) between the
//! chain functions and continuum eigenfunctions of both models. Relations
//! that only hold as distributions in `k` are smeared against packets first,
//! so the `x`-integrands gain fast decay.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::exact::{ExpLaurent, RationalComplex};
use crate::interior::InteriorModel;
use crate::quadrature::{
    quad_line, quad_line_core, quad_line_periodic, quad_packet, GaussLegendre, GaussianPacket,
};
use crate::report::VerificationReport;

pub const ZERO_OVERLAP_TOL: f64 = 1e-8;
pub const SMEARED_TOL: f64 = 1e-6;
pub const INTERIOR_TOL: f64 = 1e-6;
pub const INTERIOR_SMEARED_TOL: f64 = 1e-5;

/// Quadrature resolution knobs shared by the numeric checks. `refined()`
/// doubles the cutoffs and halves the panel widths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericOptions {
    pub cutoff_scale: f64,
    pub refine: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { cutoff_scale: 1.0, refine: 1 }
    }
}

impl NumericOptions {
    pub fn refined(self) -> Self {
        Self { cutoff_scale: 2.0 * self.cutoff_scale, refine: 2 * self.refine }
    }
}

/// Runs `check` at `opts` and at `opts.refined()`. The combined report fails
/// unless both pass and their values agree within the tolerance.
pub fn with_stability<F>(check: F, opts: NumericOptions) -> Result<VerificationReport>
where
    F: Fn(NumericOptions) -> Result<VerificationReport>,
{
    let base = check(opts)?;
    let fine = check(opts.refined())?;
    let drift = match (base.value, fine.value, base.target) {
        (Some(a), Some(b), Some(t)) => (a - b).norm() / base_scale(&base, t),
        _ => (base.residual - fine.residual).abs(),
    };
    let residual = fine.residual;
    Ok(base
        .worsen(residual)
        .worsen(drift)
        .with_trace("refined_residual", format!("{residual:.3e}"))
        .with_trace("refinement_drift", format!("{drift:.3e}")))
}

/// Reconstructs the normalization used to turn a value difference into a
/// residual, from `residual = |value − target| / scale`.
fn base_scale(r: &VerificationReport, target: Complex64) -> f64 {
    match r.value {
        Some(v) if r.residual > 0.0 => (v - target).norm() / r.residual,
        _ => 1.0,
    }
}

fn gaussian_width(g: &GaussianPacket) -> f64 {
    g.width
}

/// `(∫|g|² dk)^{1/2}`.
pub fn packet_norm(g: &GaussianPacket) -> f64 {
    let r = quad_line(|k| Complex64::new(g.eval(k).norm_sqr(), 0.0), 1e-12, 0.0)
        .expect("Gaussian packets are absolutely integrable");
    r.value.re.sqrt()
}

/// `∫ f(x) dx` for integrands carrying a Gaussian packet factor centred
/// near `Re z`, by composite Gauss–Legendre on a finite window.
fn packet_x_integral<F: Fn(f64) -> Complex64>(
    f: F,
    z: Complex64,
    widths: &[f64],
    max_center: f64,
    opts: NumericOptions,
) -> Complex64 {
    let sigma = widths.iter().cloned().fold(f64::INFINITY, f64::min);
    let half = (z.re.abs() + 2.0 * z.im.abs() + 16.0 / sigma) * opts.cutoff_scale;
    let panel = (0.5f64).min(1.0 / (max_center + widths.iter().cloned().fold(0.0, f64::max)));
    let panels = ((2.0 * half / panel).ceil() as usize).max(8) * opts.refine;
    GaussLegendre::new(16).integrate_composite(f, -half, half, panels)
}

/// `∫ ψ_{nl} ψ_{nl′} dx = 0` for `l + l′ ≤ n − 1`.
pub fn overlap_zero(model: &BoundaryModel, l: u32, lp: u32, opts: NumericOptions) -> Result<VerificationReport> {
    let n = model.n();
    if n == 0 || l + lp > n - 1 {
        return Err(Error::Precondition(format!("need l + l' <= n - 1, got l = {l}, l' = {lp}, n = {n}")));
    }
    let prod = (&model.assoc(l) * &model.assoc(lp)).to_numeric();
    let z = model.z();
    let r = quad_line_core(
        |x| prod.eval(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0), z),
        ZERO_OVERLAP_TOL / 100.0,
        0.0,
        16.0 * opts.cutoff_scale,
    )?;
    let residual = r.value.norm();
    Ok(VerificationReport::numeric(
        format!("overlap_zero(n={n},l={l},l'={lp})"),
        "integral of psi_nl * psi_nl' over the real line vanishes for l + l' <= n - 1",
        residual,
        ZERO_OVERLAP_TOL,
    )
    .with_values(r.value, Complex64::new(0.0, 0.0))
    .with_trace("n", n)
    .with_trace("z", z)
    .with_trace("quad_error_estimate", format!("{:.3e}", r.error_estimate)))
}

/// Smeared `∫ ψ_{nl}(x) [k^n ψ_n(x;k)] dx = 0` for `0 ≤ l ≤ n − 1`.
pub fn overlap_chain_scatter(
    model: &BoundaryModel,
    l: u32,
    g: &GaussianPacket,
    opts: NumericOptions,
) -> Result<VerificationReport> {
    let n = model.n();
    if l >= n {
        return Err(Error::Precondition(format!("need l <= n - 1, got l = {l}, n = {n}")));
    }
    let z = model.z();
    let chain = model.assoc(l).to_numeric();
    let phi = quad_packet(g, &model.scatter(), z)?;
    let zero = Complex64::new(0.0, 0.0);
    let value = packet_x_integral(
        |x| chain.eval(Complex64::new(x, 0.0), zero, z) * phi.eval(x),
        z,
        &[gaussian_width(g)],
        g.center.abs(),
        opts,
    );
    let norm = packet_norm(g);
    Ok(VerificationReport::numeric(
        format!("overlap_chain_scatter(n={n},l={l})"),
        "smeared integral of psi_nl(x) k^n psi_n(x;k) vanishes for l <= n - 1",
        value.norm() / norm,
        SMEARED_TOL,
    )
    .with_values(value, zero)
    .with_trace("n", n)
    .with_trace("class", format!("{:?}", model.classify(l)))
    .with_trace("packet", format!("center={}, width={}", g.center, g.width))
    .with_trace("packet_norm", format!("{norm:.6e}")))
}

/// Smeared `∫ ψ_{nl}(x) [e^{−ikz} k^n ψ_n(x;k)] dx = δ^{(2l−2n)}(k)/(2l−2n)!`
/// for `l ≥ n`, with the `e^{−ikz}` factor kept inside the pairing.
pub fn overlap_growing(
    model: &BoundaryModel,
    l: u32,
    g: &GaussianPacket,
    opts: NumericOptions,
) -> Result<VerificationReport> {
    let n = model.n();
    if l < n {
        return Err(Error::Precondition(format!("need l >= n, got l = {l}, n = {n}")));
    }
    let z = model.z();
    let order = 2 * (l - n);
    let f = &ExpLaurent::exp_minus_ikz() * &model.scatter();
    let chain = model.assoc(l).to_numeric();
    let phi = quad_packet(g, &f, z)?;
    let zero = Complex64::new(0.0, 0.0);
    let value = packet_x_integral(
        |x| chain.eval(Complex64::new(x, 0.0), zero, z) * phi.eval(x),
        z,
        &[gaussian_width(g)],
        g.center.abs(),
        opts,
    );
    let fact: f64 = (1..=order).map(f64::from).product();
    let target = g.eval_derivative(order, 0.0) / fact;
    let scale = target.norm().max(packet_norm(g));
    Ok(VerificationReport::numeric(
        format!("overlap_growing(n={n},l={l})"),
        "smeared integral of psi_nl(x) e^{-ikz} k^n psi_n(x;k) equals delta^(2l-2n)(k)/(2l-2n)!",
        (value - target).norm() / scale,
        SMEARED_TOL,
    )
    .with_values(value, target)
    .with_trace("n", n)
    .with_trace("derivative_order", order)
    .with_trace("convention", "e^{-ikz} inside the pairing")
    .with_trace("packet", format!("center={}, width={}", g.center, g.width)))
}

/// `ψ_n(x;−k′) (k′)^n` from `k^n ψ_n(x;k)`: `(−1)^n` times the `k → −k` image.
pub fn reflected_scatter(model: &BoundaryModel, f: &ExpLaurent) -> ExpLaurent {
    f.reflect_k().scale(&RationalComplex::sign_pow(i64::from(model.n())))
}

/// Doubly smeared `∫ [k^nψ_n(x;k)][(k′)^nψ_n(x;−k′)] dx = (k′)^{2n} δ(k − k′)`.
pub fn scatter_norm(
    model: &BoundaryModel,
    g1: &GaussianPacket,
    g2: &GaussianPacket,
    opts: NumericOptions,
) -> Result<VerificationReport> {
    scatter_norm_with(model, &model.scatter(), g1, g2, opts)
}

/// [`scatter_norm`] for a caller-supplied `k^n ψ_n`; used to confirm that
/// corrupted eigenfunctions are detected.
pub fn scatter_norm_with(
    model: &BoundaryModel,
    scatter: &ExpLaurent,
    g1: &GaussianPacket,
    g2: &GaussianPacket,
    opts: NumericOptions,
) -> Result<VerificationReport> {
    let n = model.n();
    let z = model.z();
    let phi1 = quad_packet(g1, scatter, z)?;
    let phi2 = quad_packet(g2, &reflected_scatter(model, scatter), z)?;
    let value = packet_x_integral(
        |x| phi1.eval(x) * phi2.eval(x),
        z,
        &[g1.width, g2.width],
        g1.center.abs().max(g2.center.abs()),
        opts,
    );
    let target = quad_line(
        |k| g1.eval(k) * g2.eval(k) * k.powi(2 * n as i32),
        1e-13,
        0.0,
    )?
    .value;
    Ok(VerificationReport::numeric(
        format!("scatter_norm(n={n})"),
        "doubly smeared integral of k^n psi_n(x;k) k'^n psi_n(x;-k') equals k'^{2n} delta(k-k')",
        (value - target).norm() / target.norm(),
        SMEARED_TOL,
    )
    .with_values(value, target)
    .with_trace("n", n)
    .with_trace("packet1", format!("center={}, width={}", g1.center, g1.width))
    .with_trace("packet2", format!("center={}, width={}", g2.center, g2.width)))
}

const BUMP_STEEPNESS: f64 = 4.0;

/// Smooth bump `exp(c − c/(1 − u²))`, `u = (k − mid)/half`, supported on
/// `(a, b)` with peak value 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub a: f64,
    pub b: f64,
}

impl Bump {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::Precondition(format!("bump needs a < b, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn eval(&self, k: f64) -> f64 {
        let half = 0.5 * (self.b - self.a);
        let u = (k - 0.5 * (self.a + self.b)) / half;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        (BUMP_STEEPNESS - BUMP_STEEPNESS / (1.0 - u * u)).exp()
    }

    /// Nodes and weights covering the support.
    fn grid(&self, refine: usize) -> Vec<(f64, f64)> {
        GaussLegendre::new(24).composite_grid(self.a, self.b, 24 * refine)
    }
}

/// `x ↦ ∫ g(k) (k² − α²) ψ(x;±k) dk` for a real bump `g`.
struct InteriorSmear<'a> {
    model: &'a InteriorModel,
    grid: Vec<(f64, f64)>,
    /// `g(k) w` at each node
    weights: Vec<f64>,
}

impl<'a> InteriorSmear<'a> {
    fn new(model: &'a InteriorModel, g: &Bump, refine: usize) -> Self {
        let grid = g.grid(refine);
        let weights = grid.iter().map(|&(k, w)| g.eval(k) * w).collect();
        Self { model, grid, weights }
    }

    /// Moments `M_j(x) = ∫ g(k) k^j e^{ikx} dk`, `j = 0, 1, 2`.
    fn moments(&self, x: f64) -> [Complex64; 3] {
        let mut m = [Complex64::new(0.0, 0.0); 3];
        for (&(k, _), &w) in self.grid.iter().zip(&self.weights) {
            let e = Complex64::from_polar(w, k * x);
            m[0] += e;
            m[1] += e * k;
            m[2] += e * (k * k);
        }
        m
    }

    /// `(∫ g Φ(x;k) dk, ∫ g Φ(x;−k) dk)` with `Φ = (k² − α²) ψ`.
    fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let a2 = self.model.alpha() * self.model.alpha();
        let w = self.model.w(x);
        let r1 = self.model.w_deriv(x, 1) / w;
        let r2 = self.model.w_deriv(x, 2) / w;
        let m = self.moments(x);
        let mc = [m[0].conj(), m[1].conj(), m[2].conj()];
        let i = Complex64::i();
        let s = 1.0 / (2.0 * PI).sqrt();
        let plus = (m[2] - m[0] * a2 + i * m[1] * r1 - m[0] * r2 * 0.5) * s;
        let minus = (mc[2] - mc[0] * a2 - i * mc[1] * r1 - mc[0] * r2 * 0.5) * s;
        (plus, minus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InteriorIdentity {
    /// `∫ ψ₀² dx = 0`
    Psi0Psi0,
    /// `∫ ψ₀ ψ₁ dx = 0`
    Psi0Psi1,
    /// smeared `∫ ψ₀ (k²−α²)ψ(x;k) dx = 0`
    Psi0Scatter,
    /// smeared `∫ ψ₁ (k²−α²)ψ(x;k) dx = 0`
    Psi1Scatter,
    /// doubly smeared `∫ [(k²−α²)ψ(x;k)][(k′²−α²)ψ(x;−k′)] dx = (k′²−α²)² δ(k − k′)`
    ScatterNorm,
}

impl InteriorIdentity {
    pub const ALL: [InteriorIdentity; 5] = [
        InteriorIdentity::Psi0Psi0,
        InteriorIdentity::Psi0Psi1,
        InteriorIdentity::Psi0Scatter,
        InteriorIdentity::Psi1Scatter,
        InteriorIdentity::ScatterNorm,
    ];

    fn relation(self) -> &'static str {
        match self {
            Self::Psi0Psi0 => "integral of psi_0^2 vanishes",
            Self::Psi0Psi1 => "integral of psi_0 psi_1 vanishes",
            Self::Psi0Scatter => "smeared integral of psi_0(x) (k^2-alpha^2) psi(x;k) vanishes",
            Self::Psi1Scatter => "smeared integral of psi_1(x) (k^2-alpha^2) psi(x;k) vanishes",
            Self::ScatterNorm => {
                "doubly smeared integral of (k^2-alpha^2)psi(x;k) (k'^2-alpha^2)psi(x;-k') equals (k'^2-alpha^2)^2 delta(k-k')"
            }
        }
    }
}

/// `x`-window half-width for bump-smeared interior integrands.
const INTERIOR_WINDOW: f64 = 200.0;

pub fn interior_biortho(
    model: &InteriorModel,
    which: InteriorIdentity,
    g: &Bump,
    opts: NumericOptions,
) -> Result<VerificationReport> {
    let id = format!("interior_biortho({which:?})");
    let zero = Complex64::new(0.0, 0.0);
    let alpha = model.alpha();
    let report = match which {
        InteriorIdentity::Psi0Psi0 | InteriorIdentity::Psi0Psi1 => {
            let tol = INTERIOR_TOL / 10.0 / opts.refine as f64;
            let r = match which {
                InteriorIdentity::Psi0Psi0 => {
                    quad_line_periodic(|x| model.psi0(x).powi(2), 2.0 * PI / alpha, tol)?
                }
                _ => quad_line_periodic(|x| model.psi0(x) * model.psi1(x), 2.0 * PI / alpha, tol)?,
            };
            VerificationReport::numeric(&id, which.relation(), r.value.norm(), INTERIOR_TOL)
                .with_values(r.value, zero)
                .with_trace("quad_error_estimate", format!("{:.3e}", r.error_estimate))
        }
        InteriorIdentity::Psi0Scatter | InteriorIdentity::Psi1Scatter | InteriorIdentity::ScatterNorm => {
            let smear = InteriorSmear::new(model, g, opts.refine);
            let half = INTERIOR_WINDOW * opts.cutoff_scale;
            let panels = (4.0 * half) as usize * opts.refine;
            let rule = GaussLegendre::new(16);
            let norm = GaussLegendre::new(24)
                .integrate_composite(|k| Complex64::new(g.eval(k).powi(2), 0.0), g.a, g.b, 48)
                .re
                .sqrt();
            match which {
                InteriorIdentity::ScatterNorm => {
                    let value = rule.integrate_composite(
                        |x| {
                            let (p, m) = smear.eval(x);
                            p * m
                        },
                        -half,
                        half,
                        panels,
                    );
                    let target = GaussLegendre::new(24).integrate_composite(
                        |k| Complex64::new((g.eval(k) * (k * k - alpha * alpha)).powi(2), 0.0),
                        g.a,
                        g.b,
                        48,
                    );
                    VerificationReport::numeric(
                        &id,
                        which.relation(),
                        (value - target).norm() / target.norm(),
                        INTERIOR_SMEARED_TOL,
                    )
                    .with_values(value, target)
                }
                _ => {
                    let chain = |x: f64| match which {
                        InteriorIdentity::Psi0Scatter => model.psi0(x),
                        _ => model.psi1(x),
                    };
                    let value = rule.integrate_composite(|x| chain(x) * smear.eval(x).0, -half, half, panels);
                    VerificationReport::numeric(&id, which.relation(), value.norm() / norm, INTERIOR_SMEARED_TOL)
                        .with_values(value, zero)
                }
            }
            .with_trace("bump", format!("({}, {})", g.a, g.b))
            .with_trace("bump_norm", format!("{norm:.6e}"))
            .with_trace("x_window", half)
        }
    };
    Ok(report.with_trace("alpha", alpha).with_trace("z", model.z()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: u32) -> BoundaryModel {
        BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn overlap_zero_examples() {
        let o = NumericOptions::default();
        for (n, l, lp) in [(2, 0, 0), (2, 0, 1), (1, 0, 0), (3, 1, 1)] {
            let r = overlap_zero(&model(n), l, lp, o).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(overlap_zero(&model(2), 1, 1, o).is_err());
    }

    #[test]
    fn overlap_zero_is_symmetric() {
        let o = NumericOptions::default();
        let a = overlap_zero(&model(3), 0, 2, o).unwrap();
        let b = overlap_zero(&model(3), 2, 0, o).unwrap();
        assert!((a.value.unwrap() - b.value.unwrap()).norm() < 1e-12);
    }

    #[test]
    fn chain_scatter_examples() {
        let g = GaussianPacket::gaussian(0.0, 1.0);
        let o = NumericOptions::default();
        for (n, l) in [(2, 0), (2, 1), (3, 2)] {
            let r = overlap_chain_scatter(&model(n), l, &g, o).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn growing_examples() {
        let o = NumericOptions::default();
        let g = GaussianPacket::gaussian(0.0, 1.0);
        let r = overlap_growing(&model(1), 1, &g, o).unwrap();
        assert!(r.pass && (r.target.unwrap() - 1.0).norm() < 1e-15, "{r:?}");
        let r = overlap_growing(&model(1), 2, &g, o).unwrap();
        assert!(r.pass && (r.target.unwrap() + 1.0).norm() < 1e-15, "{r:?}");
        let g1 = GaussianPacket::gaussian(1.0, 1.0);
        let r = overlap_growing(&model(2), 2, &g1, o).unwrap();
        assert!(r.pass && (r.target.unwrap().re - (-1.0f64).exp()).abs() < 1e-15, "{r:?}");
    }

    #[test]
    fn scatter_norm_examples() {
        let o = NumericOptions::default();
        let g = GaussianPacket::gaussian(0.0, 1.0);
        let r = scatter_norm(&model(0), &g, &g, o).unwrap();
        assert!(r.pass && (r.target.unwrap().re - (PI / 2.0).sqrt()).abs() < 1e-12, "{r:?}");
        let r = scatter_norm(&model(1), &g, &g, o).unwrap();
        assert!(r.pass && (r.target.unwrap().re - (PI / 2.0).sqrt() / 4.0).abs() < 1e-12, "{r:?}");
        let g2 = GaussianPacket::gaussian(1.0, 1.0);
        let r = scatter_norm(&model(2), &g, &g2, o).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn scatter_norm_detects_perturbation() {
        use crate::exact::rat;
        let o = NumericOptions::default();
        let g = GaussianPacket::gaussian(0.0, 1.0);
        let m = model(2);
        let r3 = scatter_norm_with(&m, &m.scatter_perturbed(&rat(1, 1000)), &g, &g, o).unwrap();
        let r2 = scatter_norm_with(&m, &m.scatter_perturbed(&rat(1, 100)), &g, &g, o).unwrap();
        assert!(!r3.pass && !r2.pass);
        let ratio = r2.residual / r3.residual;
        assert!((ratio - 10.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn interior_relations() {
        let m = InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap();
        let bump = Bump::new(1.1, 2.0).unwrap();
        for which in InteriorIdentity::ALL {
            let r = interior_biortho(&m, which, &bump, NumericOptions::default()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
