//! Gaussian packets `g(k) = P(k) e^{−(k−k₀)²/σ²}` and their closed-form
//! transforms `Φ(x) = ∫ g(k) F(x;k) dk` against exact Laurent expressions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExpLaurent;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub center: f64,
    pub width: f64,
    /// Coefficients of `P(k)` in ascending powers of `k`.
    pub poly: Vec<Complex64>,
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval(p: &[Complex64], k: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * k + c)
}

impl GaussianPacket {
    pub fn new(center: f64, width: f64, poly: Vec<Complex64>) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && center.is_finite()) {
            return Err(Error::Precondition(format!("packet width must be positive, got {width}")));
        }
        Ok(Self { center, width, poly })
    }

    /// `e^{−(k−k₀)²/σ²}`.
    pub fn gaussian(center: f64, width: f64) -> Self {
        Self::new(center, width, vec![Complex64::new(1.0, 0.0)]).expect("valid width")
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { poly: self.poly.iter().map(|p| p * c).collect(), ..self.clone() }
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        let u = (k - self.center) / self.width;
        poly_eval(&self.poly, Complex64::new(k, 0.0)) * (-u * u).exp()
    }

    /// `d/dk` of the packet, again a packet with the same center and width.
    pub fn derivative(&self) -> Self {
        let dp: Vec<Complex64> = self.poly.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect();
        // −2(k − k₀)/σ² P(k)
        let s2 = self.width * self.width;
        let lin = [Complex64::new(2.0 * self.center / s2, 0.0), Complex64::new(-2.0 / s2, 0.0)];
        let mut poly = poly_mul(&self.poly, &lin);
        for (j, c) in dp.into_iter().enumerate() {
            poly[j] += c;
        }
        Self { poly, ..self.clone() }
    }

    pub fn eval_derivative(&self, order: u32, k: f64) -> Complex64 {
        (0..order).fold(self.clone(), |g, _| g.derivative()).eval(k)
    }

    /// `∫ k^j e^{−(k−k₀)²/σ²} e^{iks} dk` for `j = 0..=max_j` and complex `s`.
    pub fn moments(&self, s: Complex64, max_j: usize) -> Vec<Complex64> {
        let (k0, sig) = (self.center, self.width);
        let i = Complex64::i();
        let front = sig * PI.sqrt() * (i * k0 * s - sig * sig * s * s / 4.0).exp();
        let mu = k0 + i * sig * sig * s / 2.0;
        // E[(σY)^q] for Y ~ N(0, 1/2): (q−1)!! σ^q / 2^{q/2}
        let mut gauss_moment = vec![0.0; max_j + 1];
        gauss_moment[0] = 1.0;
        for q in (2..=max_j).step_by(2) {
            gauss_moment[q] = gauss_moment[q - 2] * (q as f64 - 1.0) * sig * sig / 2.0;
        }
        let mut mu_pow = vec![Complex64::new(1.0, 0.0); max_j + 1];
        for j in 1..=max_j {
            mu_pow[j] = mu_pow[j - 1] * mu;
        }
        (0..=max_j)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut binom = 1.0;
                for q in 0..=j {
                    if q > 0 {
                        binom = binom * (j - q + 1) as f64 / q as f64;
                    }
                    if q % 2 == 0 {
                        acc += mu_pow[j - q] * (binom * gauss_moment[q]);
                    }
                }
                front * acc
            })
            .collect()
    }
}

/// Closed-form `x ↦ ∫ g(k) F(x;k) dk`.
#[derive(Clone, Debug)]
pub struct PacketTransform {
    packet: GaussianPacket,
    z: Complex64,
    phase: f64,
    z_phase: f64,
    scale: f64,
    /// `(x − z)` power → polynomial in `k` (packet prefactor included).
    groups: Vec<(i32, Vec<Complex64>)>,
    max_degree: usize,
}

impl PacketTransform {
    pub fn eval(&self, x: f64) -> Complex64 {
        let dx = Complex64::new(x, 0.0) - self.z;
        let s = dx * self.phase + self.z * self.z_phase;
        let moments = self.packet.moments(s, self.max_degree);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, q) in &self.groups {
            let inner: Complex64 = q.iter().zip(&moments).map(|(c, m)| c * m).sum();
            acc += inner * dx.powi(*p);
        }
        acc * self.scale
    }
}

/// Transforms `F` (no negative powers of `k`) against the packet at offset `z`.
pub fn quad_packet(g: &GaussianPacket, f: &ExpLaurent, z: Complex64) -> Result<PacketTransform> {
    if let Some(m) = f.min_k_power().filter(|&m| m < 0) {
        return Err(Error::NegativeKPower(m));
    }
    let mut by_p: BTreeMap<i32, Vec<Complex64>> = BTreeMap::new();
    for (&(m, p), c) in f.terms() {
        let entry = by_p.entry(p).or_default();
        let m = m as usize;
        if entry.len() <= m {
            entry.resize(m + 1, Complex64::new(0.0, 0.0));
        }
        entry[m] += c.to_complex64();
    }
    let groups: Vec<(i32, Vec<Complex64>)> =
        by_p.into_iter().map(|(p, q)| (p, poly_mul(&q, &g.poly))).collect();
    let max_degree = groups.iter().map(|(_, q)| q.len().saturating_sub(1)).max().unwrap_or(0);
    Ok(PacketTransform {
        packet: g.clone(),
        z,
        phase: f.phase() as f64,
        z_phase: f.z_phase() as f64,
        scale: (2.0 * PI).powf(-0.5 * f.unit() as f64),
        groups,
        max_degree,
    })
}
