//! The finite-regulator forms of the resolutions applied to test functions,
//! the singular-term limits that reproduce the normalizable eigenfunctions,
//! and regulator sweeps with trend verdicts.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::{psi0_series, psi1_series, BoundaryKernels, BoundaryTerms, InteriorKernels, InteriorTerms};
use super::spectral::{packet_cap, packet_spectrum, punctured_integral, PacketGrid, Spectrum};
use super::testfn::{ChainRef, TestFunction};
use super::trig::{integrate_split, Frame, TrigSeries};
use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::interior::InteriorModel;
use crate::model::{Model, ModelKind};
use crate::quadrature::quad_line;
use crate::report::VerificationReport;

/// Absolute tolerance of the `k` and `x` quadratures inside a scheme.
const SCHEME_TOL: f64 = 1e-12;
/// Truncation order of the large-`|x|` series used for slowly decaying integrands.
const SERIES_FLOOR: i32 = -10;
/// Default coupling `A = c/ε` of the sweeps.
pub const DEFAULT_COUPLING: f64 = 50.0;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    Res3,
    Res5,
    Int5,
    Res9,
    Res7,
    Res10,
    Res6,
    Res13,
    Res11,
    Res12,
    Int04,
}

/// How the regulator limit of a scheme is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitKind {
    /// Holds at every `ε`.
    Identity,
    /// Limit in the space of distributions.
    Distributional,
    /// Pointwise limit.
    Pointwise,
}

impl Scheme {
    pub const ALL: [Scheme; 11] = [
        Scheme::Res3,
        Scheme::Res5,
        Scheme::Int5,
        Scheme::Res9,
        Scheme::Res7,
        Scheme::Res10,
        Scheme::Res6,
        Scheme::Res13,
        Scheme::Res11,
        Scheme::Res12,
        Scheme::Int04,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Res3 => "RES3",
            Scheme::Res5 => "RES5",
            Scheme::Int5 => "INT5",
            Scheme::Res9 => "RES9",
            Scheme::Res7 => "RES7",
            Scheme::Res10 => "RES10",
            Scheme::Res6 => "RES6",
            Scheme::Res13 => "RES13",
            Scheme::Res11 => "RES11",
            Scheme::Res12 => "RES12",
            Scheme::Int04 => "INT04",
        }
    }

    pub fn model_kind(self) -> ModelKind {
        match self {
            Scheme::Res13 | Scheme::Res11 | Scheme::Res12 | Scheme::Int04 => ModelKind::Interior,
            _ => ModelKind::Boundary,
        }
    }

    pub fn limit_kind(self) -> LimitKind {
        match self {
            Scheme::Res3 | Scheme::Res9 | Scheme::Res13 => LimitKind::Identity,
            Scheme::Int5 | Scheme::Int04 => LimitKind::Pointwise,
            _ => LimitKind::Distributional,
        }
    }

    /// Only defined for the `n = 2` boundary model.
    pub fn needs_n2(self) -> bool {
        matches!(self, Scheme::Res9 | Scheme::Res7 | Scheme::Res10 | Scheme::Res6)
    }

    /// The scheme is stated for test functions in `L²((1+|x|)^γ)` with
    /// `γ` above this bound (`None`: no restriction).
    pub fn gamma_bound(self) -> Option<f64> {
        match self {
            Scheme::Res5 | Scheme::Res7 | Scheme::Res11 => Some(-1.0),
            Scheme::Res10 | Scheme::Res12 => Some(1.0),
            Scheme::Res6 => Some(3.0),
            _ => None,
        }
    }

    fn boundary_terms(self) -> BoundaryTerms {
        let none = BoundaryTerms::default();
        let n2 = BoundaryTerms { chain: true, t12: true, t3: true, ..none };
        match self {
            Scheme::Res3 => BoundaryTerms { sinc: true, c_sums: true, ..none },
            Scheme::Res5 => BoundaryTerms { c_sums: true, ..none },
            Scheme::Int5 | Scheme::Res6 => BoundaryTerms { chain: true, ..none },
            Scheme::Res9 => BoundaryTerms { sinc: true, t6: true, ..n2 },
            Scheme::Res7 => BoundaryTerms { t6: true, ..n2 },
            Scheme::Res10 => n2,
            _ => unreachable!("interior scheme"),
        }
    }

    fn interior_terms(self) -> InteriorTerms {
        match self {
            Scheme::Res13 => InteriorTerms::Exact,
            Scheme::Res11 => InteriorTerms::CosineProjector,
            Scheme::Res12 | Scheme::Int04 => InteriorTerms::Projector,
            _ => unreachable!("boundary scheme"),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeValue {
    pub scheme: Scheme,
    pub eps: f64,
    /// Cutoff `A` of the `k` integral (`inf` for none).
    pub cutoff: f64,
    pub x_prime: f64,
    pub value: Complex64,
    pub target: Complex64,
    pub abs_error: f64,
    /// Contribution of the punctured `k` integral.
    pub punctured: Complex64,
    /// Contribution of the terms outside the `k` integral.
    pub outside: Complex64,
    pub error_estimate: f64,
    /// Largest `|k|` actually integrated over.
    pub k_max_used: f64,
    /// For identity schemes with two codings of the outside terms: the
    /// difference between the two applied values.
    pub route_discrepancy: Option<f64>,
    pub notes: Vec<String>,
}

fn check_regulators(model: &Model, scheme: Scheme, eps: f64, cutoff: f64) -> Result<()> {
    if scheme.model_kind() != model.kind() {
        return Err(Error::Precondition(format!(
            "{scheme} belongs to the {:?} model, got the {:?} model",
            scheme.model_kind(),
            model.kind()
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Precondition(format!("ε must be positive and finite, got {eps}")));
    }
    if cutoff.is_nan() || cutoff <= 0.0 {
        return Err(Error::Precondition(format!("cutoff must be positive, got {cutoff}")));
    }
    match model {
        Model::Boundary(m) => {
            if scheme.needs_n2() && m.n() != 2 {
                return Err(Error::Precondition(format!("{scheme} is stated for n = 2, got n = {}", m.n())));
            }
            if m.n() == 0 {
                return Err(Error::Precondition("the boundary resolutions need n ≥ 1".into()));
            }
        }
        Model::Interior(m) => {
            if eps >= m.alpha() {
                return Err(Error::Precondition(format!("ε = {eps} must lie in (0, α = {})", m.alpha())));
            }
        }
    }
    Ok(())
}

/// Applies the right-hand side of `scheme` at regulators `(ε, A)` to `f`
/// at the point `x′`.
pub fn apply_scheme(
    model: &Model,
    scheme: Scheme,
    eps: f64,
    cutoff: f64,
    f: &TestFunction,
    x_prime: f64,
) -> Result<SchemeValue> {
    check_regulators(model, scheme, eps, cutoff)?;
    f.validate(model)?;
    let target = f.eval(model, x_prime)?;
    let mut notes = Vec::new();
    if let (Some(bound), Some(sup)) = (scheme.gamma_bound(), f.decay_class(model).gamma_sup) {
        if sup <= bound {
            notes.push(format!("test function lies outside the scheme's class γ > {bound} (γ < {sup})"));
        }
    }
    let mut v = match model {
        Model::Boundary(m) => apply_boundary(m, scheme, eps, cutoff, f, x_prime)?,
        Model::Interior(m) => apply_interior(m, scheme, eps, cutoff, f, x_prime, &mut notes)?,
    };
    let value = v.punctured + v.outside;
    v.notes.extend(notes);
    Ok(SchemeValue { value, target, abs_error: (value - target).norm(), ..v.finish(scheme, eps, cutoff, x_prime) })
}

struct Parts {
    punctured: Complex64,
    outside: Complex64,
    error_estimate: f64,
    k_max_used: f64,
    route_discrepancy: Option<f64>,
    notes: Vec<String>,
}

impl Parts {
    fn finish(self, scheme: Scheme, eps: f64, cutoff: f64, x_prime: f64) -> SchemeValue {
        let zero = Complex64::new(0.0, 0.0);
        SchemeValue {
            scheme,
            eps,
            cutoff,
            x_prime,
            value: zero,
            target: zero,
            abs_error: 0.0,
            punctured: self.punctured,
            outside: self.outside,
            error_estimate: self.error_estimate,
            k_max_used: self.k_max_used,
            route_discrepancy: self.route_discrepancy,
            notes: self.notes,
        }
    }
}

fn apply_boundary(
    m: &BoundaryModel,
    scheme: Scheme,
    eps: f64,
    cutoff: f64,
    f: &TestFunction,
    x_prime: f64,
) -> Result<Parts> {
    let model = Model::Boundary(*m);
    let terms = scheme.boundary_terms();
    let kern = BoundaryKernels::new(m, eps, x_prime)?;
    let (spec, band) = if f.is_packet() {
        packet_spectrum(&model, f, x_prime)?
    } else {
        let s = Spectrum::laurent(m, f, x_prime)?;
        let band = s.band_limit(1.0, f64::INFINITY);
        (s, band)
    };
    let upper = cutoff.min(band.max(2.0 * eps));
    let p = punctured_integral(&spec, &model, eps, upper, SCHEME_TOL)?;
    let (outside, out_err, route) = if f.is_packet() {
        let grid = PacketGrid::new(f, packet_cap(f, 0.0))?;
        let o = grid.integrate(|x| kern.eval(terms, x));
        let route = (scheme == Scheme::Res3).then(|| (grid.integrate(|x| kern.bracket_form(x)) - o).norm());
        (o, 0.0, route)
    } else {
        boundary_laurent_outside(&kern, terms, f, scheme == Scheme::Res3)?
    };
    Ok(Parts {
        punctured: p.value,
        outside,
        error_estimate: p.error_estimate + out_err,
        k_max_used: upper,
        route_discrepancy: route,
        notes: Vec::new(),
    })
}

/// Outside integrals for a Laurent test function: the finite kernel terms
/// exactly by residues, the `sin εs/(πs)` term by asymptotic splitting.
/// With `dual` the bracket coding of the kernel is integrated as well.
fn boundary_laurent_outside(
    kern: &BoundaryKernels,
    terms: BoundaryTerms,
    f: &TestFunction,
    dual: bool,
) -> Result<(Complex64, f64, Option<f64>)> {
    let m = &kern.model;
    let fr = kern.frame();
    let lf = f.laurent(m).expect("Laurent test function");
    let fs = TrigSeries::from_laurent(-64, &lf)?;
    let fval = |x: f64| lf.eval(cx(x), cx(0.0), m.z());
    let finite_terms = BoundaryTerms { sinc: false, ..terms };
    let mut value = kern.finite_series(finite_terms)?.mul(&fs).integral(&fr)?;
    let mut err = 0.0;
    let sinc_asym = kern.sinc_asymptote().mul(&fs);
    if terms.sinc {
        let r = integrate_split(|x| kern.sinc(x) * fval(x), &sinc_asym, &fr, SCHEME_TOL)?;
        value += r.value;
        err += r.error_estimate;
    }
    let route = if dual {
        let mut asym = kern.finite_series(BoundaryTerms { c_sums: true, ..BoundaryTerms::default() })?.mul(&fs);
        asym.add(&sinc_asym);
        let r = integrate_split(|x| kern.bracket_form(x) * fval(x), &asym, &fr, SCHEME_TOL)?;
        Some((r.value - value).norm())
    } else {
        None
    };
    Ok((value, err, route))
}

fn apply_interior(
    m: &InteriorModel,
    scheme: Scheme,
    eps: f64,
    cutoff: f64,
    f: &TestFunction,
    x_prime: f64,
    notes: &mut Vec<String>,
) -> Result<Parts> {
    let model = Model::Interior(*m);
    let terms = scheme.interior_terms();
    let kern = InteriorKernels::new(m, eps, x_prime);
    if let TestFunction::Chain(c) = f {
        if terms == InteriorTerms::Exact {
            return Err(Error::Unsupported(format!(
                "{scheme} is evaluated for packet test functions only; its band term is not integrable against {c:?}"
            )));
        }
        notes.push("F(k) vanishes for k ≠ ±α by biorthogonality; punctured integral is zero".into());
        let (outside, err) = interior_chain_outside(&kern, terms, *c)?;
        return Ok(Parts {
            punctured: Complex64::new(0.0, 0.0),
            outside,
            error_estimate: err,
            k_max_used: 0.0,
            route_discrepancy: None,
            notes: Vec::new(),
        });
    }
    let (spec, band) = packet_spectrum(&model, f, x_prime)?;
    let upper = cutoff.min(band.max(m.alpha() + 2.0 * eps));
    let p = punctured_integral(&spec, &model, eps, upper, SCHEME_TOL)?;
    let grid = PacketGrid::new(f, packet_cap(f, m.alpha()))?;
    let outside = grid.integrate(|x| kern.eval(terms, x));
    Ok(Parts {
        punctured: p.value,
        outside,
        error_estimate: p.error_estimate,
        k_max_used: upper,
        route_discrepancy: None,
        notes: Vec::new(),
    })
}

/// `∫ K(x) f(x) dx` for the projector kernels and `f ∈ {ψ₀, ψ₁}`.
fn interior_chain_outside(kern: &InteriorKernels, terms: InteriorTerms, c: ChainRef) -> Result<(Complex64, f64)> {
    let m = &kern.model;
    let (a, eps, xp) = (m.alpha(), kern.eps, kern.x_prime);
    let fr = Frame { z: m.z(), alpha: a, eps };
    let (fs, fval): (TrigSeries, Box<dyn Fn(f64) -> Complex64 + Sync>) = match c {
        ChainRef::Psi0 => (psi0_series(m, SERIES_FLOOR), Box::new(move |x| m.psi0(x))),
        ChainRef::Psi1 => (psi1_series(m, SERIES_FLOOR), Box::new(move |x| m.psi1(x))),
        ChainRef::Assoc(_) => unreachable!("validated"),
    };
    let cosine = terms == InteriorTerms::CosineProjector;
    let weight = if cosine {
        TrigSeries::cos_s(SERIES_FLOOR, &fr, 0, 4, xp)
    } else {
        TrigSeries::constant(SERIES_FLOOR, cx(1.0))
    };
    let asym = weight.mul(&psi0_series(m, SERIES_FLOOR)).mul(&fs);
    let g = |x: f64| {
        let w = if cosine { (eps * (x - xp)).cos() } else { 1.0 };
        m.psi0(x) * fval(x) * w
    };
    let r = integrate_split(g, &asym, &fr, SCHEME_TOL)?;
    let pre = -kern.psi0_at_x_prime() / (PI * eps * a);
    Ok((pre * r.value, pre.norm() * r.error_estimate))
}

/// The two singular-term integrals against `ψ₂₀` divided by `ψ₂₀(x′)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Psi20Terms {
    /// `12 s sin²(εs/4) sin(εs/2)` term: residue route.
    pub c1: Complex64,
    /// `3[εs − 2 sin(εs/2)]²` term: residue route.
    pub c2: Complex64,
    /// Same two integrals by direct quadrature of the pointwise kernels.
    pub c1_quadrature: Complex64,
    pub c2_quadrature: Complex64,
    /// Closed forms `−(3/4)e^{iσζ/2} − σ(i/8)ζe^{iσζ/2} + (3/2)e^{iσζ} + σ(i/2)ζe^{iσζ}`
    /// and `(3/4)e^{iσζ/2} + σ(i/8)ζe^{iσζ/2} − (1/2)e^{iσζ}`, `ζ = ε(z−x′)`, `σ = sgn Im z`.
    pub c1_closed: Complex64,
    pub c2_closed: Complex64,
}

pub fn reproduce_psi20_terms(model: &BoundaryModel, eps: f64, x_prime: f64) -> Result<Psi20Terms> {
    if model.n() != 2 {
        return Err(Error::Precondition(format!("needs n = 2, got n = {}", model.n())));
    }
    let kern = BoundaryKernels::new(model, eps, x_prime)?;
    let fr = kern.frame();
    let psi20 = model.assoc(0);
    let fs = TrigSeries::from_laurent(-64, &psi20)?;
    let norm = psi20.eval(cx(x_prime), cx(0.0), model.z());
    let none = BoundaryTerms::default();
    let residue = |t: BoundaryTerms| -> Result<Complex64> { Ok(kern.finite_series(t)?.mul(&fs).integral(&fr)? / norm) };
    let c1 = residue(BoundaryTerms { t12: true, ..none })?;
    let c2 = residue(BoundaryTerms { t3: true, ..none })?;
    // x = x′ + u/ε puts the mass of both kernels at |u| = O(1)
    let quad = |t: BoundaryTerms| -> Result<Complex64> {
        let g = |u: f64| {
            let x = x_prime + u / eps;
            kern.eval(t, x) * psi20.eval(cx(x), cx(0.0), model.z()) / eps
        };
        Ok(quad_line(g, 1e-13, 0.0)?.value / norm)
    };
    let c1_quadrature = quad(BoundaryTerms { t12: true, ..none })?;
    let c2_quadrature = quad(BoundaryTerms { t3: true, ..none })?;
    let sigma = model.z().im.signum();
    let i = Complex64::i();
    let zeta = eps * (model.z() - x_prime);
    let e_half = (i * sigma * zeta / 2.0).exp();
    let e_full = (i * sigma * zeta).exp();
    let c1_closed = -0.75 * e_half - sigma * i / 8.0 * zeta * e_half + 1.5 * e_full + sigma * i / 2.0 * zeta * e_full;
    let c2_closed = 0.75 * e_half + sigma * i / 8.0 * zeta * e_half - 0.5 * e_full;
    Ok(Psi20Terms { c1, c2, c1_quadrature, c2_quadrature, c1_closed, c2_closed })
}

/// `(2/(πεα)) ∫ sin²(ε(x−x′)/2) ψ₀(x)² dx`, the coefficient of `ψ₀(x′)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Psi0Term {
    pub value: Complex64,
    pub error_estimate: f64,
    /// `e^{iσζ} − 4(α/ε) sin²(ζ/2) + σ i e^{2iσαz} sin ζ` with `ζ = ε(z−x′)`,
    /// the value of the same integral with `ψ₀²` replaced by its leading
    /// large-`|x|` form `2α cos²αx/(x−z)²`.
    pub closed: Complex64,
}

pub fn reproduce_psi0_term(model: &InteriorModel, eps: f64, x_prime: f64) -> Result<Psi0Term> {
    let a = model.alpha();
    if !(eps > 0.0 && eps < a) {
        return Err(Error::Precondition(format!("ε = {eps} must lie in (0, α = {a})")));
    }
    let fr = Frame { z: model.z(), alpha: a, eps };
    let mut weight = TrigSeries::constant(SERIES_FLOOR, cx(0.5));
    weight.add(&TrigSeries::cos_s(SERIES_FLOOR, &fr, 0, 4, x_prime).scale(cx(-0.5)));
    let p0 = psi0_series(model, SERIES_FLOOR);
    let asym = weight.mul(&p0).mul(&p0);
    let g = |x: f64| (eps * (x - x_prime) / 2.0).sin().powi(2) * model.psi0(x).powi(2);
    let r = integrate_split(g, &asym, &fr, SCHEME_TOL)?;
    let pre = 2.0 / (PI * eps * a);
    let sigma = model.z().im.signum();
    let i = Complex64::i();
    let zeta = eps * (model.z() - x_prime);
    let closed = (i * sigma * zeta).exp() - 4.0 * (a / eps) * (zeta / 2.0).sin().powi(2)
        + sigma * i * (2.0 * i * sigma * a * model.z()).exp() * zeta.sin();
    Ok(Psi0Term { value: pre * r.value, error_estimate: pre * r.error_estimate, closed })
}

/// A regulator sweep of one scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub scheme: Scheme,
    pub eps: Vec<f64>,
    /// `A = coupling/ε`; `None` integrates over the whole band.
    pub coupling: Option<f64>,
    pub x_prime: f64,
    pub test_function: TestFunction,
}

impl SweepPlan {
    /// `count` values `ε_max, ε_max/2, …` with the default coupling.
    pub fn halving(scheme: Scheme, eps_max: f64, count: usize, x_prime: f64, f: TestFunction) -> Self {
        Self {
            scheme,
            eps: (0..count).map(|j| eps_max / 2f64.powi(j as i32)).collect(),
            coupling: Some(DEFAULT_COUPLING),
            x_prime,
            test_function: f,
        }
    }

    pub fn cutoff(&self, eps: f64) -> f64 {
        self.coupling.map_or(f64::INFINITY, |c| c / eps)
    }
}

/// Evaluates every sweep point (concurrently); results sorted by `ε`
/// descending.
pub fn sweep(model: &Model, plan: &SweepPlan) -> Result<Vec<SchemeValue>> {
    let mut out: Vec<SchemeValue> = plan
        .eps
        .par_iter()
        .map(|&eps| apply_scheme(model, plan.scheme, eps, plan.cutoff(eps), &plan.test_function, plan.x_prime))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every error is within the quadrature tolerance.
    Exact,
    /// Errors decrease with a positive observed order.
    Vanishing,
    /// Errors stay at a nonzero level.
    Floor,
    /// Errors grow as `ε` decreases.
    Growing,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub verdict: Verdict,
    /// Slope of `log error` against `log ε` over the sweep.
    pub observed_order: f64,
    /// Successive error ratios `e(ε_j)/e(ε_{j+1})`.
    pub ratios: Vec<f64>,
    /// Smallest error seen.
    pub floor: f64,
    /// Richardson extrapolation of the last two values with the observed
    /// order (the last value when the order is not positive).
    pub extrapolated: Complex64,
}

/// Classifies how the errors of a sweep behave as `ε` decreases.
pub fn trend(values: &[SchemeValue], exact_tol: f64) -> Result<TrendReport> {
    if values.len() < 3 {
        return Err(Error::Precondition("a trend needs at least three sweep points".into()));
    }
    let mut v: Vec<&SchemeValue> = values.iter().collect();
    v.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let errs: Vec<f64> = v.iter().map(|s| s.abs_error.max(1e-300)).collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let (first, last) = (v[0], v[v.len() - 1]);
    let order = (errs[0] / errs[errs.len() - 1]).ln() / (first.eps / last.eps).ln();
    let floor = errs.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_down = ratios[ratios.len() - 2..].iter().all(|&r| r > 1.15);
    let verdict = if errs.iter().all(|&e| e <= exact_tol) {
        Verdict::Exact
    } else if order >= 0.5 && tail_down {
        Verdict::Vanishing
    } else if order.abs() < 0.25 && floor > exact_tol {
        Verdict::Floor
    } else if order <= -0.25 {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    };
    let (a, b) = (v[v.len() - 2], last);
    let extrapolated = if order > 0.0 {
        let q = (a.eps / b.eps).powf(order);
        b.value + (b.value - a.value) / (q - 1.0)
    } else {
        b.value
    };
    Ok(TrendReport { verdict, observed_order: order, ratios, floor, extrapolated })
}

/// Applies the simplest interior resolution to `ψ₁` over a halving sweep
/// down to `eps_min` and checks that the error does not vanish.
pub fn psi1_expandability(model: &InteriorModel, eps_min: f64, x_prime: f64) -> Result<VerificationReport> {
    let eps_max = (0.4f64).min(0.5 * model.alpha());
    if !(eps_min > 0.0 && eps_min < eps_max / 2.0) {
        return Err(Error::Precondition(format!("eps_min must lie in (0, {})", eps_max / 2.0)));
    }
    let count = ((eps_max / eps_min).log2().floor() as usize + 1).max(3);
    let plan = SweepPlan::halving(Scheme::Res12, eps_max, count, x_prime, TestFunction::Chain(ChainRef::Psi1));
    let values = sweep(&Model::Interior(*model), &plan)?;
    let t = trend(&values, 1e-8)?;
    let last = values.last().expect("nonempty sweep");
    let mut report = VerificationReport::numeric(
        "psi1-not-expandable",
        "RES12 applied to ψ₁ keeps a nonzero error as ε ↓ 0",
        if t.verdict == Verdict::Floor { 0.0 } else { 1.0 },
        0.0,
    )
    .with_values(last.value, last.target)
    .with_trace("verdict", format!("{:?}", t.verdict))
    .with_trace("observed_order", t.observed_order)
    .with_trace("residual_floor", t.floor);
    for s in &values {
        report = report.with_trace(format!("error(eps={})", s.eps), s.abs_error);
    }
    Ok(report)
}
