//! Named groups of identity checks, shared by the command-line front end and
//! the acceptance tests. With `mutate` set, the algebra and boundary
//! biorthogonality suites use a `ψ_n` with a corrupted coefficient and the
//! SUSY suite a corrupted ladder operator; all of them are then expected to
//! fail.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::biortho::{
    interior_biortho, overlap_chain_scatter, overlap_growing, overlap_zero, scatter_norm_with, with_stability,
    Bump, InteriorIdentity, NumericOptions,
};
use crate::boundary::{assoc_from_scatter, BoundaryModel};
use crate::error::{Error, Result};
use crate::exact::{rat, ExpLaurent, QSign, Rational, RationalComplex};
use crate::greens::{
    boundary_pole_order, green, green_jump, green_residual, indexes, interior_pole_order, IndexTriple,
    BOUNDARY_RADIUS, PROBES,
};
use crate::model::Model;
use crate::quadrature::GaussianPacket;
use crate::report::VerificationReport;
use crate::resolution::coeffs::{alpha_coeffs, alpha_system_failures, beta_convolution, beta_seq};
use crate::resolution::eps_chain::{eps_chain, outer_product_residual};
use crate::susy::{
    max_normalizable_len, multiplicity_delta, perturbed_growing, potential_form, round_trip, transform,
    verify_intertwining, TransformationChain,
};

/// Largest `n` covered by the exact suites by default.
pub const EXACT_MAX_N: u32 = 6;
/// Relative coefficient error injected into `ψ_n` by the mutation controls.
pub fn mutation_size() -> Rational {
    rat(1, 1000)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Algebra,
    Biortho,
    Susy,
    Greens,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Algebra, Suite::Biortho, Suite::Susy, Suite::Greens];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Biortho => "biortho",
            Suite::Susy => "susy",
            Suite::Greens => "greens",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

pub fn run_suite(suite: Suite, model: &Model, mutate: bool) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Algebra => {
            let max_n = match model {
                Model::Boundary(m) => m.n().max(EXACT_MAX_N),
                Model::Interior(_) => EXACT_MAX_N,
            };
            let z = match model {
                Model::Boundary(m) => m.z(),
                Model::Interior(m) => m.z(),
            };
            algebra_suite(max_n, z, mutate)
        }
        Suite::Biortho => biortho_suite(model, mutate),
        Suite::Susy => susy_suite(mutate),
        Suite::Greens => greens_suite(model, mutate),
    }
}

fn scatter_of(m: &BoundaryModel, mutate: bool) -> ExpLaurent {
    if mutate {
        m.scatter_perturbed(&mutation_size())
    } else {
        m.scatter()
    }
}

fn diff_len(a: &ExpLaurent, b: &ExpLaurent) -> Result<usize> {
    Ok(a.try_sub(b)?.len())
}

/// Every exact identity of the boundary family for `n ≤ max_n`. The chain
/// functions carry `z` only symbolically, so `z` is used just to build the
/// model values.
pub fn algebra_suite(max_n: u32, z: Complex64, mutate: bool) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let m = BoundaryModel::new(n, z)?;
        let chain_fail = (0..=n + 2)
            .filter(|&l| {
                let h = m.h(&m.assoc(l));
                if l == 0 {
                    !h.is_zero()
                } else {
                    h != m.assoc(l - 1)
                }
            })
            .count()
            + (0..=3)
                .filter(|&l| {
                    let h = m.h(&m.growing(l));
                    if l == 0 {
                        !h.is_zero()
                    } else {
                        h != m.growing(l - 1)
                    }
                })
                .count();
        out.push(
            VerificationReport::exact(
                format!("chain_relations(n={n})"),
                "h psi_n0 = 0, h psi_nl = psi_n,l-1 and the same for the growing chain phi_nl",
                chain_fail,
            )
            .with_trace("n", n),
        );
        let s = scatter_of(&m, mutate);
        out.push(
            VerificationReport::exact(
                format!("ladder_agreement(n={n})"),
                "explicit k^n psi_n equals the ladder construction i^n q_n^+ ... q_1^+ e^{ikx}/sqrt(2 pi)",
                diff_len(&s, &m.scatter_ladder())?,
            )
            .with_trace("mutated", mutate),
        );
        out.push(
            VerificationReport::exact(
                format!("eigen_equation(n={n})"),
                "h_n (k^n psi_n) = k^2 (k^n psi_n)",
                diff_len(&m.h(&s), &s.mul_k_pow(2))?,
            )
            .with_trace("mutated", mutate),
        );
        let limit_fail = (0..=n)
            .map(|l| Ok(usize::from(assoc_from_scatter(&m, l)? != m.assoc(l))))
            .sum::<Result<usize>>()?;
        out.push(VerificationReport::exact(
            format!("threshold_limit(n={n})"),
            "psi_nl = (-1)^n/(2l)! d^{2l}/dk^{2l} [e^{-ikz} k^n psi_n] at k = 0",
            limit_fail,
        ));
        if n >= 1 {
            out.push(verify_intertwining(n, false)?);
            let mut descent = m.assoc(0).apply_q(n, QSign::Minus).len();
            let lower = BoundaryModel::new(n - 1, z)?;
            for l in 1..=n + 1 {
                let lhs = m.assoc(l).apply_q(n, QSign::Minus);
                let rhs = lower.assoc(l - 1).scale(&-RationalComplex::i());
                descent += diff_len(&lhs, &rhs)?;
            }
            out.push(VerificationReport::exact(
                format!("lowering_descent(n={n})"),
                "q_n^- psi_n0 = 0 and q_n^- psi_nl = -i psi_n-1,l-1",
                descent,
            ));
            out.push(VerificationReport::exact(
                format!("alpha_system(n={n})"),
                "sum_j alpha_j alpha_l-j = -2(-1)^n / ((2l+1) eps^{2l+1}) for l < n",
                alpha_system_failures(n, &alpha_coeffs(n, n as usize)).len(),
            ));
            out.push(VerificationReport::exact(
                format!("eps_chain_relations(n={n})"),
                "h psi_n0(x;eps) = 0, h psi_nl(x;eps) = psi_n,l-1(x;eps) for symbolic eps",
                eps_chain(&m, 1.0)?.chain_failures().len(),
            ));
            out.push(VerificationReport::exact(
                format!("outer_product(n={n})"),
                "sum_l psi_nl(x;eps) psi_n,n-1-l(x';eps) equals the threshold outer product",
                outer_product_residual(&m)?,
            ));
        }
        out.push(darboux_endpoints(&m)?);
    }
    let beta = beta_seq(12);
    let expected = [rat(1, 1), rat(1, 6), rat(31, 360), rat(863, 15120), rat(76813, 1814400)];
    let beta_fail = expected.iter().zip(&beta).filter(|(a, b)| a != b).count()
        + (0..beta.len()).filter(|&l| beta_convolution(&beta, l) != rat(1, 2 * l as i64 + 1)).count();
    out.push(
        VerificationReport::exact(
            "beta_sequence",
            "beta = [1, 1/6, 31/360, 863/15120, 76813/1814400, ...] with sum_j beta_j beta_l-j = 1/(2l+1)",
            beta_fail,
        )
        .with_trace("first", beta[..5].iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")),
    );
    Ok(out)
}

/// Raising by growing chains and lowering by normalizable chains of every
/// admissible length up to 3 lands exactly on `h_{n±m+1}`.
fn darboux_endpoints(m: &BoundaryModel) -> Result<VerificationReport> {
    let mut fail = 0;
    let mut checked = 0;
    for len in 1..=3u32 {
        let up = TransformationChain::growing(m, len)?;
        fail += usize::from(transform(&up)?.n() != m.n() + len);
        checked += 1;
        if len <= max_normalizable_len(m.n()) {
            let down = TransformationChain::normalizable(m, len)?;
            fail += usize::from(transform(&down)?.n() != m.n() - len);
            checked += 1;
        }
    }
    Ok(VerificationReport::exact(
        format!("darboux_endpoints(n={})", m.n()),
        "V - 2(ln W)'' maps h_n to h_{n+m+1} (growing chain) and h_{n-m-1} (normalizable chain)",
        fail,
    )
    .with_trace("chains", checked))
}

pub fn biortho_suite(model: &Model, mutate: bool) -> Result<Vec<VerificationReport>> {
    let opts = NumericOptions::default();
    let mut out = Vec::new();
    match model {
        Model::Boundary(m) => {
            let n = m.n();
            let g = GaussianPacket::gaussian(0.0, 1.0);
            let g1 = GaussianPacket::gaussian(1.0, 1.0);
            if n >= 1 {
                for l in 0..n {
                    for lp in l..n - l {
                        out.push(with_stability(|o| overlap_zero(m, l, lp, o), opts)?);
                    }
                    out.push(with_stability(|o| overlap_chain_scatter(m, l, &g, o), opts)?);
                }
            }
            for l in n..=n + 1 {
                out.push(with_stability(|o| overlap_growing(m, l, &g, o), opts)?);
            }
            let s = scatter_of(m, mutate);
            out.push(with_stability(|o| scatter_norm_with(m, &s, &g, &g, o), opts)?.with_trace("mutated", mutate));
            out.push(with_stability(|o| scatter_norm_with(m, &s, &g, &g1, o), opts)?.with_trace("mutated", mutate));
        }
        Model::Interior(m) => {
            let a = m.alpha();
            let bump = Bump::new(a + 0.1, a + 1.0)?;
            if mutate {
                return Err(Error::Unsupported("no mutation control for the interior biorthogonality suite".into()));
            }
            for which in InteriorIdentity::ALL {
                out.push(with_stability(|o| interior_biortho(m, which, &bump, o), opts)?);
            }
        }
    }
    Ok(out)
}

pub fn susy_suite(mutate: bool) -> Result<Vec<VerificationReport>> {
    let z = Complex64::new(0.0, 1.0);
    let mut out = Vec::new();
    for n in 1..=EXACT_MAX_N {
        out.push(verify_intertwining(n, mutate)?);
    }
    let mut endpoint_fail = 0;
    let mut round_fail = 0;
    for n in 0..=5 {
        let m = BoundaryModel::new(n, z)?;
        for len in 1..=3u32 {
            for chain in [TransformationChain::growing(&m, len), TransformationChain::normalizable(&m, len)] {
                let Ok(chain) = chain else { continue };
                let target = transform(&chain)?;
                endpoint_fail += usize::from(target.n() != chain.predicted_target());
            }
        }
        round_fail += usize::from(round_trip(&m)? != potential_form(n));
    }
    out.push(VerificationReport::exact(
        "darboux_family",
        "Darboux potentials equal n'(n'+1)/(x-z)^2 with the predicted n' for n <= 5, m <= 2",
        endpoint_fail,
    ));
    out.push(VerificationReport::exact(
        "darboux_round_trip",
        "raising by phi_n0 then lowering by psi_n+1,0 restores h_n",
        round_fail,
    ));
    let rejected = TransformationChain::new(&BoundaryModel::new(2, z)?, perturbed_growing(&BoundaryModel::new(2, z)?, 2));
    out.push(VerificationReport::exact(
        "chain_rejects_perturbation",
        "a growing chain with a 1e-3 coefficient error is rejected",
        usize::from(rejected.is_ok()),
    ));
    out.extend(delta_reports(z)?);
    Ok(out)
}

/// The index shifts predicted for a chain against the indexes recomputed
/// from the Green function of the transformed model.
pub fn delta_reports(z: Complex64) -> Result<Vec<VerificationReport>> {
    let mut cases = Vec::new();
    for n in 0..=4u32 {
        let m = BoundaryModel::new(n, z)?;
        cases.push(TransformationChain::growing(&m, 1)?);
        if n >= 1 {
            cases.push(TransformationChain::normalizable(&m, 1)?);
        }
    }
    cases
        .iter()
        .map(|chain| {
            let d = multiplicity_delta(chain);
            let target = transform(chain)?;
            let got = indexes(&Model::Boundary(target))?.indexes;
            let fail = usize::from(target.n() != d.target_n) + triple_mismatch(got, d.after);
            Ok(VerificationReport::exact(
                format!("multiplicity_delta(n={},{:?},len={})", d.base_n, chain.kind(), chain.len()),
                "predicted n' and index shifts match indexes recomputed after the transformation",
                fail,
            )
            .with_trace("target_n", d.target_n)
            .with_trace("delta", format!("{:?}", d.delta))
            .with_trace("n1_unchanged", d.n1_unchanged))
        })
        .collect()
}

fn triple_mismatch(a: IndexTriple, b: IndexTriple) -> usize {
    usize::from(a.n1 != b.n1) + usize::from(a.n2 != b.n2) + usize::from(a.n3 != b.n3)
}

/// Closed-form index triple of either model.
pub fn expected_indexes(model: &Model) -> IndexTriple {
    match model {
        Model::Boundary(m) => IndexTriple { n1: m.n().div_ceil(2), n2: m.n(), n3: m.n() },
        Model::Interior(_) => IndexTriple { n1: 1, n2: 1, n3: 2 },
    }
}

pub fn greens_suite(model: &Model, mutate: bool) -> Result<Vec<VerificationReport>> {
    if mutate {
        return Err(Error::Unsupported("no mutation control for the Green-function suite".into()));
    }
    let e = Complex64::new(0.7, 0.3);
    let mut out = Vec::new();
    let mut worst_jump: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    for &(x, xp) in &PROBES {
        worst_jump = worst_jump.max((green_jump(model, xp, e)? + 1.0).norm());
        let g = green(model, x, xp, e)?;
        worst_res = worst_res.max(green_residual(model, x, xp, e)? / (1.0 + g.norm()));
        worst_sym = worst_sym.max((g - green(model, xp, x, e)?).norm());
    }
    out.push(VerificationReport::numeric(
        "green_jump",
        "d/dx G jumps by -1 across x = x'",
        worst_jump,
        1e-10,
    ));
    out.push(VerificationReport::numeric(
        "green_equation",
        "(h - E) G = 0 for x != x', relative to 1 + |G|",
        worst_res,
        1e-6,
    ));
    out.push(VerificationReport::numeric("green_symmetry", "G(x, x') = G(x', x)", worst_sym, 0.0));
    let (order, expected) = match model {
        Model::Boundary(m) => (boundary_pole_order(m, BOUNDARY_RADIUS)?, 2 * m.n() as usize + 1),
        Model::Interior(m) => (interior_pole_order(m, 0.25 * m.alpha() * m.alpha())?, 2),
    };
    out.push(
        VerificationReport::numeric(
            "pole_order",
            "contour-moment pole order of G at the exceptional point, stable under radius halving",
            order.abs_diff(expected) as f64,
            0.0,
        )
        .with_trace("order", order)
        .with_trace("expected", expected),
    );
    let got = indexes(model)?.indexes;
    let reference = expected_indexes(model);
    out.push(
        VerificationReport::exact(
            "index_triple",
            "(n1, n2, n3) equals ((n+1)/2, n, n) for the boundary family and (1, 1, 2) for the interior model",
            triple_mismatch(got, reference),
        )
        .with_trace("indexes", format!("({}, {}, {})", got.n1, got.n2, got.n3)),
    );
    Ok(out)
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(n: u32) -> Model {
        Model::Boundary(BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap())
    }

    #[test]
    fn algebra_passes_and_mutation_fails() {
        let z = Complex64::new(0.0, 1.0);
        let r = algebra_suite(EXACT_MAX_N, z, false).unwrap();
        assert!(all_pass(&r), "{:?}", r.iter().filter(|r| !r.pass).collect::<Vec<_>>());
        let bad = algebra_suite(3, z, true).unwrap();
        assert!(bad.iter().any(|r| r.id == "eigen_equation(n=2)" && !r.pass));
    }

    #[test]
    fn susy_passes_and_mutation_fails() {
        assert!(all_pass(&susy_suite(false).unwrap()));
        assert!(!all_pass(&susy_suite(true).unwrap()));
    }

    #[test]
    fn greens_suite_passes() {
        let interior = crate::interior::InteriorModel::new(1.0, Complex64::new(0.0, 1.0)).unwrap();
        for m in [bm(2), Model::Interior(interior)] {
            let r = greens_suite(&m, false).unwrap();
            assert!(all_pass(&r), "{r:?}");
        }
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
