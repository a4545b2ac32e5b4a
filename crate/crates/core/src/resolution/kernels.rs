//! Terms outside the punctured `k` integral, as functions of `x` at fixed
//! `x′` and `ε`. Each boundary term has a direct pointwise coding (used on
//! packet test functions) and an independent coding as a [`TrigSeries`]
//! (used on Laurent test functions, where every term is integrated exactly).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::coeffs::coeff_c;
use super::eps_chain::{eps_chain, EpsChain};
use super::trig::{Frame, TrigSeries};
use crate::boundary::BoundaryModel;
use crate::error::Result;
use crate::exact::{factorial, rat_int, rational_to_f64, ExpLaurent};
use crate::interior::InteriorModel;
use crate::quadrature::GaussLegendre;

/// Series floor for the exactly finite kernels (no truncation happens).
const FINITE_FLOOR: i32 = -64;
/// Series floor for the asymptotic part of the `sin εs / (πs)` term.
const SINC_FLOOR: i32 = -5;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `sin εs / (πs)`, equal to `ε/π` at `s = 0`.
pub fn sinc_term(eps: f64, s: f64) -> f64 {
    let u = eps * s;
    if u.abs() < 1e-8 {
        eps / PI * (1.0 - u * u / 6.0)
    } else {
        u.sin() / (PI * s)
    }
}

/// Which of the boundary outside terms a scheme carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundaryTerms {
    pub sinc: bool,
    /// The two `C_{lmn}` sums.
    pub c_sums: bool,
    /// `Σ_l ψ_{nl}(x;ε) ψ_{n,n−1−l}(x′;ε)`.
    pub chain: bool,
    /// `6 sin²(εs/2) / (πε(x−z)(x′−z))` (n = 2 only).
    pub t6: bool,
    /// `12 s sin²(εs/4) sin(εs/2) / (πε²(x−z)²(x′−z)²)` (n = 2 only).
    pub t12: bool,
    /// `3[εs − 2 sin(εs/2)]² / (2πε³(x−z)²(x′−z)²)` (n = 2 only).
    pub t3: bool,
}

/// Outside terms of the boundary resolutions at fixed `(ε, x′)`.
pub struct BoundaryKernels {
    pub model: BoundaryModel,
    pub eps: f64,
    pub x_prime: f64,
    d1: Vec<Vec<f64>>,
    d2: Vec<Vec<f64>>,
    chain: EpsChain,
    chain_right: Vec<Complex64>,
    lower: Vec<(ExpLaurent, ExpLaurent)>,
}

impl BoundaryKernels {
    pub fn new(model: &BoundaryModel, eps: f64, x_prime: f64) -> Result<Self> {
        let n = i64::from(model.n());
        let fact = |m: i64| rational_to_f64(&rat_int(factorial(m as u64)));
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        for l in 0..n {
            let row1 = (0..=(2 * l).min(n - 1))
                .map(|m| {
                    Ok(rational_to_f64(&coeff_c(2 * l + 1, m, n)?) * fact(n + 2 * l + 1 - m) / fact(n - 1 - m))
                })
                .collect::<Result<Vec<_>>>()?;
            d1.push(row1);
            let row2 = if l == 0 {
                Vec::new()
            } else {
                (0..=(2 * l - 1).min(n - 1))
                    .map(|m| Ok(rational_to_f64(&coeff_c(2 * l, m, n)?) * fact(n + 2 * l - m) / fact(n - 1 - m)))
                    .collect::<Result<Vec<_>>>()?
            };
            d2.push(row2);
        }
        let chain = eps_chain(model, eps)?;
        let xp = cx(x_prime);
        let chain_right = (0..model.n() as usize)
            .map(|l| chain.eval(model.n() as usize - 1 - l, xp, model.z()))
            .collect();
        let lower = (0..model.n())
            .map(|l| {
                let lo = BoundaryModel::new(model.n() - l - 1, model.z()).expect("same z");
                let hi = BoundaryModel::new(model.n() - l, model.z()).expect("same z");
                (lo.scatter(), hi.scatter())
            })
            .collect();
        Ok(Self { model: *model, eps, x_prime, d1, d2, chain, chain_right, lower })
    }

    pub fn frame(&self) -> Frame {
        Frame { z: self.model.z(), alpha: 0.0, eps: self.eps }
    }

    fn xz(&self, x: f64) -> (Complex64, Complex64) {
        let z = self.model.z();
        (cx(x) - z, cx(self.x_prime) - z)
    }

    pub fn sinc(&self, x: f64) -> Complex64 {
        cx(sinc_term(self.eps, x - self.x_prime))
    }

    /// The two `C_{lmn}` sums.
    pub fn c_sums(&self, x: f64) -> Complex64 {
        let (xx, xp) = self.xz(x);
        let eps = self.eps;
        let s = x - self.x_prime;
        let r = xp / xx;
        let n = self.model.n() as usize;
        let mut first = Complex64::new(0.0, 0.0);
        let mut second = Complex64::new(0.0, 0.0);
        for l in 0..n {
            let pre = (-0.25f64).powi(l as i32) / (eps.powi(2 * l as i32) * xp.powi(2 * l as i32));
            let inner: Complex64 = self.d1[l].iter().enumerate().map(|(m, d)| d * r.powi(m as i32)).sum();
            first += pre * inner;
            if l >= 1 {
                let inner: Complex64 = self.d2[l].iter().enumerate().map(|(m, d)| d * r.powi(m as i32)).sum();
                second += pre * inner;
            }
        }
        -(eps * s).cos() / (2.0 * PI * eps * xx * xp) * first + (eps * s).sin() / (PI * xx) * second
    }

    /// `Σ_l ((x′−z)/(x−z))^l [ψ_{n−l−1}(x;k) ψ_{n−l}(x′;−k) / (i(x−z))]_{k=−ε}^{ε}
    /// + ((x′−z)/(x−z))^n sin εs/(πs)`, from the continuum eigenfunctions of
    /// the lower members of the family.
    pub fn bracket_form(&self, x: f64) -> Complex64 {
        let (xx, xp) = self.xz(x);
        let z = self.model.z();
        let n = self.model.n() as usize;
        let r = xp / xx;
        let psi = |f: &ExpLaurent, m: usize, at: f64, k: f64| -> Complex64 {
            f.eval(cx(at), cx(k), z) / k.powi(m as i32)
        };
        let mut total = Complex64::new(0.0, 0.0);
        for (l, (lo, hi)) in self.lower.iter().enumerate() {
            let (ml, mh) = (n - l - 1, n - l);
            let at = |k: f64| psi(lo, ml, x, k) * psi(hi, mh, self.x_prime, -k) / (Complex64::i() * xx);
            total += r.powi(l as i32) * (at(self.eps) - at(-self.eps));
        }
        total + r.powi(n as i32) * self.sinc(x)
    }

    pub fn chain(&self, x: f64) -> Complex64 {
        let z = self.model.z();
        (0..self.model.n() as usize)
            .map(|l| self.chain.eval(l, cx(x), z) * self.chain_right[l])
            .sum()
    }

    pub fn t6(&self, x: f64) -> Complex64 {
        let (xx, xp) = self.xz(x);
        let s = x - self.x_prime;
        6.0 * (self.eps * s / 2.0).sin().powi(2) / (PI * self.eps * xx * xp)
    }

    pub fn t12(&self, x: f64) -> Complex64 {
        let (xx, xp) = self.xz(x);
        let (s, e) = (x - self.x_prime, self.eps);
        12.0 * s * (e * s / 4.0).sin().powi(2) * (e * s / 2.0).sin() / (PI * e * e * xx * xx * xp * xp)
    }

    pub fn t3(&self, x: f64) -> Complex64 {
        let (xx, xp) = self.xz(x);
        let (s, e) = (x - self.x_prime, self.eps);
        let b = e * s - 2.0 * (e * s / 2.0).sin();
        3.0 * b * b / (2.0 * PI * e * e * e * xx * xx * xp * xp)
    }

    pub fn eval(&self, terms: BoundaryTerms, x: f64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        if terms.sinc {
            v += self.sinc(x);
        }
        if terms.c_sums {
            v += self.c_sums(x);
        }
        if terms.chain {
            v += self.chain(x);
        }
        if terms.t6 {
            v += self.t6(x);
        }
        if terms.t12 {
            v += self.t12(x);
        }
        if terms.t3 {
            v += self.t3(x);
        }
        v
    }

    /// Everything except the `sin εs/(πs)` term, as an exact finite series.
    pub fn finite_series(&self, terms: BoundaryTerms) -> Result<TrigSeries> {
        let fr = self.frame();
        let (_, xp) = self.xz(0.0);
        let eps = self.eps;
        let f = FINITE_FLOOR;
        let mut out = TrigSeries::zero(f);
        if terms.c_sums {
            let cos = TrigSeries::cos_s(f, &fr, 0, 4, self.x_prime);
            let sin = TrigSeries::sin_s(f, &fr, 0, 4, self.x_prime);
            for l in 0..self.model.n() as usize {
                let pre = (-0.25f64).powi(l as i32) / (eps.powi(2 * l as i32) * xp.powi(2 * l as i32));
                for (m, d) in self.d1[l].iter().enumerate() {
                    let c = -pre * d * xp.powi(m as i32) / (2.0 * PI * eps * xp);
                    out.add(&cos.mul_power(-1 - m as i32).scale(c));
                }
                if l >= 1 {
                    for (m, d) in self.d2[l].iter().enumerate() {
                        let c = pre * d * xp.powi(m as i32) / PI;
                        out.add(&sin.mul_power(-1 - m as i32).scale(c));
                    }
                }
            }
        }
        if terms.chain {
            for l in 0..self.model.n() as usize {
                for (j, part) in self.chain.functions[l].parts.iter().enumerate() {
                    let c = (2.0 / eps).sqrt() * eps.powi(-2 * j as i32) * self.chain_right[l];
                    out.add(&TrigSeries::from_laurent(f, part)?.scale(c));
                }
            }
        }
        let one = TrigSeries::constant(f, cx(1.0));
        let s_lin = TrigSeries::s_linear(f, self.x_prime, self.model.z());
        if terms.t6 {
            let mut g = one.clone();
            g.add(&TrigSeries::cos_s(f, &fr, 0, 4, self.x_prime).scale(cx(-1.0)));
            out.add(&g.mul_power(-1).scale(3.0 / (PI * eps * xp)));
        }
        if terms.t12 {
            let mut g = TrigSeries::sin_s(f, &fr, 0, 2, self.x_prime);
            g.add(&TrigSeries::sin_s(f, &fr, 0, 4, self.x_prime).scale(cx(-0.5)));
            out.add(&s_lin.mul(&g).mul_power(-2).scale(6.0 / (PI * eps * eps * xp * xp)));
        }
        if terms.t3 {
            let mut g = s_lin.mul(&s_lin).scale(cx(eps * eps));
            g.add(&s_lin.mul(&TrigSeries::sin_s(f, &fr, 0, 2, self.x_prime)).scale(cx(-4.0 * eps)));
            g.add(&one.scale(cx(2.0)));
            g.add(&TrigSeries::cos_s(f, &fr, 0, 4, self.x_prime).scale(cx(-2.0)));
            out.add(&g.mul_power(-2).scale(3.0 / (2.0 * PI * eps * eps * eps * xp * xp)));
        }
        Ok(out)
    }

    /// Leading large-`|x|` terms of `sin εs/(πs)`.
    pub fn sinc_asymptote(&self) -> TrigSeries {
        let fr = self.frame();
        TrigSeries::sin_s(SINC_FLOOR, &fr, 0, 4, self.x_prime)
            .mul(&TrigSeries::inv_s(SINC_FLOOR, self.x_prime, self.model.z()))
            .scale(cx(1.0 / PI))
    }
}

/// Which interior outside terms a scheme carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteriorTerms {
    /// Full finite-ε form: cosine-sine term, ψ₀ψ₀ bracket and the `t` band.
    Exact,
    /// `−(1/(πεα)) cos(εs) ψ₀(x)ψ₀(x′)`.
    CosineProjector,
    /// `−(1/(πεα)) ψ₀(x)ψ₀(x′)`.
    Projector,
}

pub struct InteriorKernels {
    pub model: InteriorModel,
    pub eps: f64,
    pub x_prime: f64,
    psi0_p: Complex64,
    psi1_p: Complex64,
    band: Vec<(f64, f64)>,
}

impl InteriorKernels {
    pub fn new(model: &InteriorModel, eps: f64, x_prime: f64) -> Self {
        let a = model.alpha();
        let rule = GaussLegendre::new(24);
        let mut band: Vec<(f64, f64)> = rule.mapped(2.0 * a - eps, 2.0 * a).collect();
        band.extend(rule.mapped(2.0 * a, 2.0 * a + eps));
        Self {
            model: *model,
            eps,
            x_prime,
            psi0_p: model.psi0(x_prime),
            psi1_p: model.psi1(x_prime),
            band,
        }
    }

    pub fn psi0_at_x_prime(&self) -> Complex64 {
        self.psi0_p
    }

    /// `∫_{2α−ε}^{2α+ε} cos(ts) dt/t`.
    pub fn band_integral(&self, s: f64) -> f64 {
        self.band.iter().map(|&(t, w)| w * (t * s).cos() / t).sum()
    }

    /// `(2/π) cos αs sin εs / s`.
    pub fn cos_sinc(&self, x: f64) -> Complex64 {
        let s = x - self.x_prime;
        cx(2.0 * (self.model.alpha() * s).cos() * sinc_term(self.eps, s))
    }

    /// `−(1/(πα)) ψ₀(x)ψ₀(x′)[cos εs/ε − ε cos 2αs cos εs/(4α²−ε²) − 2α sin 2αs sin εs/(4α²−ε²)]`.
    pub fn psi0_bracket(&self, x: f64) -> Complex64 {
        let (a, e) = (self.model.alpha(), self.eps);
        let s = x - self.x_prime;
        let d = 4.0 * a * a - e * e;
        let br = (e * s).cos() / e - e * (2.0 * a * s).cos() * (e * s).cos() / d
            - 2.0 * a * (2.0 * a * s).sin() * (e * s).sin() / d;
        -self.model.psi0(x) * self.psi0_p * br / (PI * a)
    }

    /// `−(1/π)[ψ₀(x)ψ₁(x′) + ψ₁(x)ψ₀(x′)] ∫_{band} cos(ts) dt/t`.
    pub fn band_term(&self, x: f64) -> Complex64 {
        let s = x - self.x_prime;
        let pair = self.model.psi0(x) * self.psi1_p + self.model.psi1(x) * self.psi0_p;
        -pair * self.band_integral(s) / PI
    }

    pub fn eval(&self, terms: InteriorTerms, x: f64) -> Complex64 {
        let (a, e) = (self.model.alpha(), self.eps);
        match terms {
            InteriorTerms::Exact => self.cos_sinc(x) + self.psi0_bracket(x) + self.band_term(x),
            InteriorTerms::CosineProjector => {
                let s = x - self.x_prime;
                -(e * s).cos() * self.model.psi0(x) * self.psi0_p / (PI * e * a)
            }
            InteriorTerms::Projector => -self.model.psi0(x) * self.psi0_p / (PI * e * a),
        }
    }
}

/// `1/W` expanded for large `|x|`: `(1/(2α(x−z))) Σ_j (−u)^j` with
/// `u = sin 2αx / (2α(x−z))`, kept through `(x−z)^{floor}`.
fn inv_w_series(model: &InteriorModel, floor: i32) -> TrigSeries {
    let a = model.alpha();
    let fr = Frame { z: model.z(), alpha: a, eps: 0.0 };
    let u = TrigSeries::sin_s(floor, &fr, 2, 0, 0.0).mul_power(-1).scale(cx(1.0 / (2.0 * a)));
    let minus_u = u.scale(cx(-1.0));
    let mut sum = TrigSeries::zero(floor);
    let mut power = TrigSeries::constant(floor, cx(1.0));
    for _ in 0..=(-floor) {
        sum.add(&power);
        power = power.mul(&minus_u);
    }
    sum.mul_power(-1).scale(cx(1.0 / (2.0 * a)))
}

/// Large-`|x|` series of `ψ₀ = (2α)^{3/2} cos αx / W`.
pub fn psi0_series(model: &InteriorModel, floor: i32) -> TrigSeries {
    let a = model.alpha();
    let fr = Frame { z: model.z(), alpha: a, eps: 0.0 };
    TrigSeries::cos_s(floor, &fr, 1, 0, 0.0)
        .mul(&inv_w_series(model, floor))
        .scale(cx((2.0 * a).powf(1.5)))
}

/// Large-`|x|` series of `ψ₁ = (2α(x−z) sin αx + cos αx) / (√(2α) W)`.
pub fn psi1_series(model: &InteriorModel, floor: i32) -> TrigSeries {
    let a = model.alpha();
    let fr = Frame { z: model.z(), alpha: a, eps: 0.0 };
    let mut num = TrigSeries::sin_s(floor, &fr, 1, 0, 0.0).mul_power(1).scale(cx(2.0 * a));
    num.add(&TrigSeries::cos_s(floor, &fr, 1, 0, 0.0));
    num.mul(&inv_w_series(model, floor)).scale(cx(1.0 / (2.0 * a).sqrt()))
}
