//! Spectral side of the resolutions: the transform `F(k) = ∫ f(x) ψ(x;k) dx`
//! of a test function and the `k` integrals of `F(k) ψ(x′;−k)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::testfn::TestFunction;
use super::trig::exp_power_integral;
use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::exact::NumericLaurent;
use crate::interior::InteriorModel;
use crate::model::Model;
use crate::quadrature::{
    quad_contour, AdaptiveOptions, ContourSpec, Direction, GaussLegendre, QuadResult,
};
use crate::quadrature::adaptive::integrate_adaptive_points;

/// Relative size below which the packet transform counts as zero.
const BAND_THRESHOLD: f64 = 1e-15;
/// `e^{−k|Im z|}` is negligible past this many decay lengths.
const LAURENT_DECAY_LENGTHS: f64 = 80.0;
/// Gauss–Legendre order of the `x` panels of the packet grid.
const PANEL_ORDER: usize = 16;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Quadrature grid `(x, w·f(x))` for a packet test function.
#[derive(Clone, Debug)]
pub struct PacketGrid {
    pub nodes: Vec<(f64, f64)>,
}

impl PacketGrid {
    /// Grid that resolves `e^{ikx} f(x)` for `|k| ≤ k_max`.
    pub fn new(f: &TestFunction, k_max: f64) -> Result<Self> {
        let (center, half) = f
            .packet_extent()
            .ok_or_else(|| Error::Precondition("packet grid needs a packet test function".into()))?;
        let width = match *f {
            TestFunction::Gaussian { width, .. } | TestFunction::HermiteGaussian { width, .. } => width,
            _ => unreachable!("packet extent exists"),
        };
        let h = (width / 2.0).min(6.0 / k_max.max(1e-12));
        let panels = ((2.0 * half) / h).ceil() as usize;
        let rule = GaussLegendre::new(PANEL_ORDER);
        let nodes = rule
            .composite_grid(center - half, center + half, panels)
            .into_iter()
            .map(|(x, w)| (x, w * f.eval_packet(x).expect("packet")))
            .collect();
        Ok(Self { nodes })
    }

    pub fn integrate<K: Fn(f64) -> Complex64>(&self, kernel: K) -> Complex64 {
        self.nodes.iter().map(|&(x, wf)| kernel(x) * wf).sum()
    }
}

/// The transform `F(k)` together with `ψ(x′;−k)`.
pub enum Spectrum {
    BoundaryPacket {
        model: BoundaryModel,
        /// `(x, w f(x), [(x−z)^{−m}]_m)`.
        nodes: Vec<(f64, f64, Vec<Complex64>)>,
        coeffs: Vec<Complex64>,
        right: NumericLaurent,
        x_prime: f64,
    },
    BoundaryLaurent {
        model: BoundaryModel,
        /// Powers `p` and coefficients of `f = Σ c (x−z)^p`.
        f_terms: Vec<(i32, Complex64)>,
        coeffs: Vec<Complex64>,
        right: NumericLaurent,
        x_prime: f64,
    },
    InteriorPacket {
        model: InteriorModel,
        /// `(x, w f(x), W′/W, W″/W)`.
        nodes: Vec<(f64, f64, Complex64, Complex64)>,
        x_prime: f64,
    },
}

/// Coefficients `c_m` of `ψ_n(x;k) = (2π)^{−1/2} e^{ikx} Σ_m c_m k^{−m} (x−z)^{−m}`.
fn boundary_coeffs(model: &BoundaryModel) -> Vec<Complex64> {
    let s = model.scatter().to_numeric();
    let n = model.n() as i32;
    let mut c = vec![Complex64::new(0.0, 0.0); model.n() as usize + 1];
    for &(km, p, v) in &s.terms {
        debug_assert_eq!(km, n + p);
        c[(-p) as usize] += v;
    }
    c
}

impl Spectrum {
    /// Builds the transform of a packet on a grid sized for `|k| ≤ k_max`.
    pub fn packet(model: &Model, f: &TestFunction, x_prime: f64, k_max: f64) -> Result<Self> {
        let grid = PacketGrid::new(f, k_max)?;
        Ok(match model {
            Model::Boundary(m) => {
                let z = m.z();
                let nodes = grid
                    .nodes
                    .iter()
                    .map(|&(x, wf)| {
                        let inv = 1.0 / (cx(x) - z);
                        let pows = (0..=m.n()).map(|j| inv.powi(j as i32)).collect();
                        (x, wf, pows)
                    })
                    .collect();
                Spectrum::BoundaryPacket {
                    model: *m,
                    nodes,
                    coeffs: boundary_coeffs(m),
                    right: m.scatter().to_numeric(),
                    x_prime,
                }
            }
            Model::Interior(m) => {
                let nodes = grid
                    .nodes
                    .iter()
                    .map(|&(x, wf)| {
                        let j = m.w_jet(x);
                        (x, wf, j.d1 / j.value, j.d2 / j.value)
                    })
                    .collect();
                Spectrum::InteriorPacket { model: *m, nodes, x_prime }
            }
        })
    }

    /// Closed-form transform of a boundary Laurent test function.
    pub fn laurent(model: &BoundaryModel, f: &TestFunction, x_prime: f64) -> Result<Self> {
        let lf = f
            .laurent(model)
            .ok_or_else(|| Error::Precondition(format!("{f:?} has no Laurent form")))?
            .to_numeric();
        let f_terms: Vec<(i32, Complex64)> = lf.terms.iter().map(|&(_, p, c)| (p, c * lf.scale)).collect();
        if let Some(&(p, _)) = f_terms.iter().find(|(p, _)| *p >= 0) {
            return Err(Error::Unsupported(format!(
                "test function with a (x−z)^{p} term is not integrable against ψ_n(x;k)"
            )));
        }
        Ok(Spectrum::BoundaryLaurent {
            model: *model,
            f_terms,
            coeffs: boundary_coeffs(model),
            right: model.scatter().to_numeric(),
            x_prime,
        })
    }

    /// `F(k) = ∫ f(x) ψ(x;k) dx`.
    pub fn transform(&self, k: Complex64) -> Complex64 {
        let i = Complex64::i();
        let norm = 1.0 / (2.0 * PI).sqrt();
        match self {
            Spectrum::BoundaryPacket { nodes, coeffs, .. } => {
                let mut s = vec![Complex64::new(0.0, 0.0); coeffs.len()];
                for (x, wf, pows) in nodes {
                    let e = (i * k * x).exp() * wf;
                    for (acc, p) in s.iter_mut().zip(pows) {
                        *acc += e * p;
                    }
                }
                let kinv = 1.0 / k;
                coeffs.iter().zip(&s).enumerate().map(|(m, (c, v))| c * kinv.powi(m as i32) * v).sum::<Complex64>()
                    * norm
            }
            Spectrum::BoundaryLaurent { model, f_terms, coeffs, .. } => {
                debug_assert_eq!(k.im, 0.0);
                let kinv = 1.0 / k.re;
                let mut total = Complex64::new(0.0, 0.0);
                for (m, c) in coeffs.iter().enumerate() {
                    for &(p, cf) in f_terms {
                        let q = m as i32 - p;
                        let v = exp_power_integral(k.re, false, q, model.z()).expect("q >= 1");
                        total += c * cf * kinv.powi(m as i32) * v;
                    }
                }
                total * norm
            }
            Spectrum::InteriorPacket { model, nodes, .. } => {
                let d = k * k - model.alpha() * model.alpha();
                let (mut s0, mut sa, mut sb) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for &(x, wf, a, b) in nodes {
                    let e = (i * k * x).exp() * wf;
                    s0 += e;
                    sa += e * a;
                    sb += e * b;
                }
                (s0 + i * k * sa / d - sb / (2.0 * d)) * norm
            }
        }
    }

    /// `ψ(x′;−k)`.
    pub fn right(&self, k: Complex64) -> Complex64 {
        match self {
            Spectrum::BoundaryPacket { model, right, x_prime, .. }
            | Spectrum::BoundaryLaurent { model, right, x_prime, .. } => {
                let mk = -k;
                right.eval(cx(*x_prime), mk, model.z()) / mk.powi(model.n() as i32)
            }
            Spectrum::InteriorPacket { model, x_prime, .. } => {
                let mk = -k;
                let d = mk * mk - model.alpha() * model.alpha();
                model.scatter_reg(mk, *x_prime) / d
            }
        }
    }

    pub fn integrand(&self, k: Complex64) -> Complex64 {
        self.transform(k) * self.right(k)
    }

    fn poles(&self) -> Vec<f64> {
        match self {
            Spectrum::InteriorPacket { model, .. } => vec![-model.alpha(), model.alpha()],
            _ => vec![0.0],
        }
    }

    /// Smallest `K` beyond which `|F(k)|` stays negligible on both half-lines.
    pub fn band_limit(&self, scale: f64, cap: f64) -> f64 {
        if let Spectrum::BoundaryLaurent { model, .. } = self {
            return (LAURENT_DECAY_LENGTHS / model.z().im.abs()).min(cap);
        }
        let poles = self.poles();
        let clear = |k: f64| poles.iter().all(|p| (k - p).abs() > 0.25 * scale.min(1.0));
        let step = 0.25 * scale;
        let samples: Vec<f64> = (1..).map(|j| j as f64 * step).take_while(|&k| k <= cap).collect();
        let mag = |k: f64| self.transform(cx(k)).norm();
        let reference = samples
            .iter()
            .flat_map(|&k| [k, -k])
            .filter(|&k| clear(k))
            .map(mag)
            .fold(0.0, f64::max);
        let mut band: f64 = 0.0;
        for sign in [1.0, -1.0] {
            let mut last_big = 0.0;
            for &k in &samples {
                if mag(sign * k) > BAND_THRESHOLD * reference {
                    last_big = k;
                }
            }
            band = band.max(last_big + 2.0 * step);
        }
        band.min(cap)
    }
}

/// Breakpoints on `[a, b]` refined geometrically towards the endpoints
/// flagged as near a pole, starting from `gap`.
fn graded_points(a: f64, b: f64, near_a: bool, near_b: bool, gap: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    let mid = 0.5 * (a + b);
    let mut d = gap;
    while d < 0.5 * (b - a) {
        if near_a {
            pts.push(a + d);
        }
        if near_b {
            pts.push(b - d);
        }
        d *= 2.0;
    }
    let unit = ((b - a) / 2.0).ceil() as usize;
    for j in 1..unit.min(400) {
        pts.push(a + (b - a) * j as f64 / unit.min(400) as f64);
    }
    pts.push(mid);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Segments `(a, b, a near a pole, b near a pole)` of the punctured range.
pub fn punctured_segments(model: &Model, eps: f64, upper: f64) -> Result<Vec<(f64, f64, bool, bool)>> {
    match model {
        Model::Boundary(_) => {
            if upper <= eps {
                return Err(Error::Precondition(format!("cutoff {upper} must exceed ε = {eps}")));
            }
            Ok(vec![(-upper, -eps, false, true), (eps, upper, true, false)])
        }
        Model::Interior(m) => {
            let a = m.alpha();
            if upper <= a + eps {
                return Err(Error::Precondition(format!("cutoff {upper} must exceed α + ε = {}", a + eps)));
            }
            Ok(vec![
                (-upper, -a - eps, false, true),
                (-a + eps, a - eps, true, true),
                (a + eps, upper, true, false),
            ])
        }
    }
}

/// `∫ F(k) ψ(x′;−k) dk` over the punctured range up to `upper`.
pub fn punctured_integral(spec: &Spectrum, model: &Model, eps: f64, upper: f64, tol: f64) -> Result<QuadResult> {
    let opts = AdaptiveOptions { abs_tol: tol, rel_tol: 1e-13, max_intervals: 3000 };
    let mut total = QuadResult::zero();
    for (a, b, na, nb) in punctured_segments(model, eps, upper)? {
        let pts = graded_points(a, b, na, nb, eps);
        let (r, ok) = integrate_adaptive_points(|k| spec.integrand(cx(k)), &pts, opts);
        if !r.value.re.is_finite() || !r.value.im.is_finite() {
            return Err(Error::NonConvergence(format!("punctured k integral on [{a}, {b}]")));
        }
        if !ok && r.error_estimate > 1e2 * tol.max(1e-13 * r.value.norm()) {
            return Err(Error::NonConvergence(format!(
                "punctured k integral on [{a}, {b}]: error estimate {:e}",
                r.error_estimate
            )));
        }
        total = total.combine(r);
    }
    Ok(total)
}

/// Base resolution `∫_ℒ F(k) ψ(x′;−k) dk` with the path deformed around
/// the poles by semicircles of radius `radius` in the given direction.
pub fn base_resolution(
    model: &Model,
    f: &TestFunction,
    x_prime: f64,
    direction: Direction,
    radius: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !f.is_packet() {
        return Err(Error::Unsupported("the deformed-path resolution is evaluated for packet test functions".into()));
    }
    f.validate(model)?;
    let alpha = match model {
        Model::Interior(m) => m.alpha(),
        Model::Boundary(_) => 0.0,
    };
    let (spec, band) = packet_spectrum(model, f, x_prime)?;
    let upper = band.max(alpha + 4.0 * radius + 1.0);
    let contour = ContourSpec::new(upper, radius, direction, spec.poles())?;
    quad_contour(|k| spec.integrand(k), &contour, tol)
}

/// Largest band the packet grid is allowed to grow to.
const MAX_PACKET_BAND: f64 = 4096.0;

/// Packet transform together with its band limit. The interior transform
/// decays only like `e^{−d|k|}`, with `d` the distance of the nearest
/// complex zero of `W` from the real axis, so the grid is refined until the
/// band closes below the grid's design limit.
pub fn packet_spectrum(model: &Model, f: &TestFunction, x_prime: f64) -> Result<(Spectrum, f64)> {
    let alpha = match model {
        Model::Interior(m) => m.alpha(),
        Model::Boundary(_) => 0.0,
    };
    let scale = packet_scale(f);
    let mut cap = packet_cap(f, alpha);
    loop {
        let spec = Spectrum::packet(model, f, x_prime, cap)?;
        let band = spec.band_limit(scale, cap);
        if band < cap {
            return Ok((spec, band));
        }
        if cap >= MAX_PACKET_BAND {
            return Err(Error::NonConvergence(format!("packet transform still significant at |k| = {cap}")));
        }
        cap *= 2.0;
    }
}

/// Natural `k` scale `1/w` of a packet.
pub fn packet_scale(f: &TestFunction) -> f64 {
    match *f {
        TestFunction::Gaussian { width, .. } | TestFunction::HermiteGaussian { width, .. } => 1.0 / width,
        _ => 1.0,
    }
}

/// Upper bound on the band of a packet: `|F(k)|` has decayed by more than
/// `e^{−40}` relative to its peak well before this.
pub fn packet_cap(f: &TestFunction, alpha: f64) -> f64 {
    let order = match *f {
        TestFunction::HermiteGaussian { order, .. } => f64::from(order),
        _ => 0.0,
    };
    (16.0 + 4.0 * order.sqrt()) * packet_scale(f) + 2.0 * alpha + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> TestFunction {
        TestFunction::Gaussian { center: 0.3, width: 0.8 }
    }

    #[test]
    fn packet_transform_matches_closed_form_for_free_wave() {
        // n = 0: F(k) = (2π)^{−1/2} ∫ e^{−((x−c)/w)²} e^{ikx} dx
        let m = Model::Boundary(BoundaryModel::new(0, Complex64::new(0.0, 1.0)).unwrap());
        let f = gauss();
        let s = Spectrum::packet(&m, &f, 0.0, 30.0).unwrap();
        for &k in &[0.5, -3.0, 7.5] {
            let exact = 0.8 * PI.sqrt() * (-(k * 0.8f64).powi(2) / 4.0).exp() * (Complex64::i() * k * 0.3).exp()
                / (2.0 * PI).sqrt();
            assert!((s.transform(cx(k)) - exact).norm() < 1e-13);
        }
    }

    #[test]
    fn boundary_base_resolution_reproduces_packet() {
        let m = Model::Boundary(BoundaryModel::new(2, Complex64::new(0.1, 0.9)).unwrap());
        let f = gauss();
        for dir in [Direction::Up, Direction::Down] {
            let r = base_resolution(&m, &f, 0.45, dir, 0.5, 1e-11).unwrap();
            let target = f.eval_packet(0.45).unwrap();
            assert!((r.value - target).norm() < 1e-8, "{dir:?}: {}", r.value);
        }
    }

    #[test]
    fn interior_base_resolution_reproduces_packet() {
        let m = Model::Interior(InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap());
        let f = gauss();
        for dir in [Direction::Up, Direction::Down] {
            let r = base_resolution(&m, &f, -0.2, dir, 0.3, 1e-11).unwrap();
            let target = f.eval_packet(-0.2).unwrap();
            assert!((r.value - target).norm() < 1e-8, "{dir:?}: {}", r.value);
        }
    }

    #[test]
    fn laurent_transform_matches_quadrature() {
        let bm = BoundaryModel::new(2, Complex64::new(0.2, 0.7)).unwrap();
        let f = TestFunction::RationalDecay { power: 2 };
        let s = Spectrum::laurent(&bm, &f, 0.0).unwrap();
        let fun = f.laurent(&bm).unwrap();
        let psi = bm.scatter();
        for &k in &[0.6, 2.0, -1.1] {
            let num = crate::quadrature::quad_line(
                |x| {
                    fun.eval(cx(x), cx(0.0), bm.z()) * psi.eval(cx(x), cx(k), bm.z()) / k.powi(2)
                },
                1e-11,
                k,
            )
            .unwrap();
            assert!((s.transform(cx(k)) - num.value).norm() < 1e-7, "k={k}");
        }
    }

    #[test]
    fn band_limit_is_where_transform_vanishes() {
        let m = Model::Interior(InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap());
        let f = TestFunction::HermiteGaussian { order: 3, center: 0.0, width: 1.0 };
        let (s, band) = packet_spectrum(&m, &f, 0.0).unwrap();
        assert!(s.transform(cx(band)).norm() < 1e-14);
        assert!(s.transform(cx(0.5 * band)).norm() > 1e-10);
    }
}
