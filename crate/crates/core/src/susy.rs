//! Darboux (Crum) transformations of the boundary family: Wronskians of pure
//! growing or normalizable chains, the transformed potential, the ladder
//! intertwining relations, and the resulting shifts of the multiplicity
//! indexes.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryModel;
use crate::error::{Error, Result};
use crate::exact::{apply_h, rat, ExpLaurent, QSign, RationalComplex};
use crate::greens::IndexTriple;
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainKind {
    /// Growing functions `φ_{nl}`.
    Growing,
    /// Normalizable associated functions `ψ_{nl}`.
    Normalizable,
}

/// Transformation functions at `E = 0` with `h f₀ = 0`, `h f_l = f_{l−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationChain {
    base: BoundaryModel,
    kind: ChainKind,
    functions: Vec<ExpLaurent>,
}

/// Longest admissible normalizable chain, `⌊(n−1)/2⌋ + 1` (zero for `n = 0`).
pub fn max_normalizable_len(n: u32) -> u32 {
    if n == 0 {
        0
    } else {
        (n - 1) / 2 + 1
    }
}

impl TransformationChain {
    /// `{φ_{n0}, …, φ_{n,len−1}}`.
    pub fn growing(base: &BoundaryModel, len: u32) -> Result<Self> {
        Self::new(base, (0..len).map(|l| base.growing(l)).collect())
    }

    /// `{ψ_{n0}, …, ψ_{n,len−1}}`.
    pub fn normalizable(base: &BoundaryModel, len: u32) -> Result<Self> {
        Self::new(base, (0..len).map(|l| base.assoc(l)).collect())
    }

    /// Validates the chain relations exactly and classifies the chain by the
    /// sign of the `(x−z)` powers of its members; mixed chains are rejected.
    pub fn new(base: &BoundaryModel, functions: Vec<ExpLaurent>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidChain("empty chain".into()));
        }
        let mut kinds = Vec::with_capacity(functions.len());
        for (l, f) in functions.iter().enumerate() {
            if !f.is_k_free() || f.phase() != 0 {
                return Err(Error::InvalidChain(format!("member {l} depends on k")));
            }
            let powers: Vec<i32> = f.x_powers().collect();
            if powers.is_empty() {
                return Err(Error::InvalidChain(format!("member {l} vanishes")));
            }
            kinds.push(if powers.iter().all(|&p| p > 0) {
                ChainKind::Growing
            } else if powers.iter().all(|&p| p < 0) {
                ChainKind::Normalizable
            } else {
                return Err(Error::InvalidChain(format!("member {l} is neither growing nor decaying")));
            });
        }
        let kind = kinds[0];
        if kinds.iter().any(|&k| k != kind) {
            return Err(Error::InvalidChain("chain mixes growing and normalizable functions".into()));
        }
        let len = functions.len() as u32;
        if kind == ChainKind::Normalizable && len > max_normalizable_len(base.n()) {
            return Err(Error::InvalidChain(format!(
                "normalizable chain of length {len} exceeds {} for n = {}",
                max_normalizable_len(base.n()),
                base.n()
            )));
        }
        for (l, f) in functions.iter().enumerate() {
            let hf = base.h(f);
            let ok = if l == 0 { hf.is_zero() } else { hf == functions[l - 1] };
            if !ok {
                return Err(Error::InvalidChain(format!("chain relation fails at member {l}")));
            }
        }
        Ok(Self { base: *base, kind, functions })
    }

    pub fn base(&self) -> &BoundaryModel {
        &self.base
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn functions(&self) -> &[ExpLaurent] {
        &self.functions
    }

    /// `m + 1`.
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `n + m + 1` for a growing chain, `n − m − 1` for a normalizable one.
    pub fn predicted_target(&self) -> u32 {
        let len = self.len() as u32;
        match self.kind {
            ChainKind::Growing => self.base.n() + len,
            ChainKind::Normalizable => self.base.n() - len,
        }
    }
}

fn add(a: &ExpLaurent, b: &ExpLaurent) -> Result<ExpLaurent> {
    a.try_add(b)
}

fn determinant(m: &[Vec<ExpLaurent>]) -> Result<ExpLaurent> {
    let size = m.len();
    if size == 1 {
        return Ok(m[0][0].clone());
    }
    let mut total = ExpLaurent::zero();
    for j in 0..size {
        let minor: Vec<Vec<ExpLaurent>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * &determinant(&minor)?;
        total = if j % 2 == 0 { add(&total, &term)? } else { total.try_sub(&term)? };
    }
    Ok(total)
}

/// Exact Wronskian `det [f_j^{(i)}]`.
pub fn wronskian(chain: &TransformationChain) -> Result<ExpLaurent> {
    let size = chain.len();
    let mut rows = vec![chain.functions.clone()];
    for i in 1..size {
        let next = rows[i - 1].iter().map(ExpLaurent::diff_x).collect();
        rows.push(next);
    }
    determinant(&rows)
}

/// `n(n+1)/(x−z)²` as an exact form.
pub fn potential_form(n: u32) -> ExpLaurent {
    let c = i64::from(n) * (i64::from(n) + 1);
    if c == 0 {
        ExpLaurent::zero()
    } else {
        ExpLaurent::monomial(0, -2, RationalComplex::from_int(c))
    }
}

/// `V − 2 (W′/W)′` for the chain's Wronskian `W`, exactly.
pub fn darboux_potential(v: &ExpLaurent, chain: &TransformationChain) -> Result<ExpLaurent> {
    let w = wronskian(chain)?;
    let (m, p, c) = w.as_monomial().ok_or(Error::NonLaurentWronskian)?;
    if m != 0 {
        return Err(Error::NonLaurentWronskian);
    }
    let inv = c.inv().ok_or(Error::NonLaurentWronskian)?;
    let log_deriv = w.diff_x().mul_x_pow(-p).scale(&inv).times_unit(-w.unit());
    let term = log_deriv.diff_x().scale(&RationalComplex::from_int(-2));
    add(v, &term)
}

/// Identifies `c/(x−z)²` with `c = n(n+1)` as the potential of `h_n`.
pub fn identify_family_member(v: &ExpLaurent) -> Option<u32> {
    if v.is_zero() {
        return Some(0);
    }
    let (m, p, c) = v.as_monomial()?;
    if m != 0 || p != -2 || v.unit() != 0 || !c.is_real() {
        return None;
    }
    (1..=1024u32).find(|&n| potential_form(n) == *v)
}

/// Applies the chain to `h_n` and returns the resulting family member.
pub fn transform(chain: &TransformationChain) -> Result<BoundaryModel> {
    let v = darboux_potential(&potential_form(chain.base.n()), chain)?;
    let n = identify_family_member(&v)
        .ok_or_else(|| Error::InvalidChain(format!("transformed potential {v} is not a family member")))?;
    BoundaryModel::new(n, chain.base.z())
}

fn spanning_inputs() -> Vec<ExpLaurent> {
    let mut out = Vec::new();
    for p in -6..=6 {
        out.push(ExpLaurent::monomial(0, p, RationalComplex::one()));
        out.push(ExpLaurent::from_terms(1, 0, 0, [(1, p, RationalComplex::one())]));
        out.push(ExpLaurent::from_terms(-1, 0, 1, [(2, p, RationalComplex::i())]));
    }
    out
}

/// Exact check of `h_n q⁺ = q⁺ h_{n−1}`, `q⁻ h_n = h_{n−1} q⁻`,
/// `h_n = q⁺q⁻` and `h_{n−1} = q⁻q⁺` on monomial inputs. With `mutate`
/// the ladder coefficient `n` is replaced by `n + 1`, which must fail.
pub fn verify_intertwining(n: u32, mutate: bool) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Precondition("intertwining needs n ≥ 1".into()));
    }
    let c = i64::from(n) + i64::from(mutate);
    let qp = |f: &ExpLaurent| f.apply_q_with(c, QSign::Plus);
    let qm = |f: &ExpLaurent| f.apply_q_with(c, QSign::Minus);
    let mut leftover = 0;
    for f in spanning_inputs() {
        let checks = [
            apply_h(&qp(&f), n).try_sub(&qp(&apply_h(&f, n - 1)))?,
            qm(&apply_h(&f, n)).try_sub(&apply_h(&qm(&f), n - 1))?,
            apply_h(&f, n).try_sub(&qp(&qm(&f)))?,
            apply_h(&f, n - 1).try_sub(&qm(&qp(&f)))?,
        ];
        leftover += checks.iter().map(ExpLaurent::len).sum::<usize>();
    }
    Ok(VerificationReport::exact(
        format!("intertwining(n={n})"),
        "h_n q⁺ = q⁺ h_{n−1}, q⁻ h_n = h_{n−1} q⁻, h_n = q⁺q⁻, h_{n−1} = q⁻q⁺",
        leftover,
    )
    .with_trace("mutated", mutate))
}

/// Closed-form boundary indexes `(⌊(n+1)/2⌋, n, n)`.
pub fn boundary_index_formula(n: u32) -> IndexTriple {
    IndexTriple { n1: n.div_ceil(2), n2: n, n3: n }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityDelta {
    pub base_n: u32,
    pub target_n: u32,
    pub before: IndexTriple,
    pub after: IndexTriple,
    /// `after − before` for `(n₁, n₂, n₃)`.
    pub delta: [i64; 3],
    /// `n₁` is unchanged although the chain length is nonzero: odd `n`
    /// raised by one growing function, or even `n` lowered by one
    /// normalizable function.
    pub n1_unchanged: bool,
}

/// Predicted target member and index shifts for a transformation chain.
pub fn multiplicity_delta(chain: &TransformationChain) -> MultiplicityDelta {
    let base_n = chain.base.n();
    let target_n = chain.predicted_target();
    let before = boundary_index_formula(base_n);
    let after = boundary_index_formula(target_n);
    let d = |a: u32, b: u32| i64::from(b) - i64::from(a);
    let delta = [d(before.n1, after.n1), d(before.n2, after.n2), d(before.n3, after.n3)];
    MultiplicityDelta { base_n, target_n, before, after, delta, n1_unchanged: delta[0] == 0 }
}

/// Raises `h_n` by `{φ_{n0}}` and lowers the result by its ground
/// eigenfunction `ψ_{n+1,0}`; returns the potential after both steps.
pub fn round_trip(base: &BoundaryModel) -> Result<ExpLaurent> {
    let up = TransformationChain::growing(base, 1)?;
    let raised = darboux_potential(&potential_form(base.n()), &up)?;
    let mid = transform(&up)?;
    let down = TransformationChain::normalizable(&mid, 1)?;
    darboux_potential(&raised, &down)
}

/// Scales the leading chain member by `1 + 1/1000`; the chain relations of
/// the result must be rejected.
pub fn perturbed_growing(base: &BoundaryModel, len: u32) -> Vec<ExpLaurent> {
    let mut fs: Vec<ExpLaurent> = (0..len).map(|l| base.growing(l)).collect();
    if let Some(last) = fs.last_mut() {
        *last = last.scale(&RationalComplex::real(rat(1001, 1000)));
    }
    fs
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn bm(n: u32) -> BoundaryModel {
        BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap()
    }

    fn mono(p: i32, num: i64, den: i64) -> ExpLaurent {
        ExpLaurent::monomial(0, p, RationalComplex::real(rat(num, den)))
    }

    #[test]
    fn wronskian_examples() {
        assert_eq!(wronskian(&TransformationChain::growing(&bm(0), 1).unwrap()).unwrap(), mono(1, 1, 1));
        assert_eq!(wronskian(&TransformationChain::growing(&bm(0), 2).unwrap()).unwrap(), mono(3, -1, 3));
        let w = wronskian(&TransformationChain::normalizable(&bm(2), 1).unwrap()).unwrap();
        assert_eq!(w, mono(-2, -3, 1).times_unit(1));
    }

    #[test]
    fn darboux_examples() {
        let up1 = TransformationChain::growing(&bm(0), 1).unwrap();
        assert_eq!(darboux_potential(&potential_form(0), &up1).unwrap(), mono(-2, 2, 1));
        let down = TransformationChain::normalizable(&bm(2), 1).unwrap();
        assert_eq!(darboux_potential(&potential_form(2), &down).unwrap(), mono(-2, 2, 1));
        let up2 = TransformationChain::growing(&bm(0), 2).unwrap();
        assert_eq!(darboux_potential(&potential_form(0), &up2).unwrap(), mono(-2, 6, 1));
    }

    #[test]
    fn endpoints_match_family() {
        for n in 0..=5 {
            for len in 1..=3 {
                let up = TransformationChain::growing(&bm(n), len).unwrap();
                assert_eq!(transform(&up).unwrap().n(), n + len, "raise n={n} len={len}");
                if len <= max_normalizable_len(n) {
                    let down = TransformationChain::normalizable(&bm(n), len).unwrap();
                    assert_eq!(transform(&down).unwrap().n(), n - len, "lower n={n} len={len}");
                }
            }
        }
    }

    #[test]
    fn invalid_chains() {
        assert!(TransformationChain::normalizable(&bm(2), 2).is_err());
        assert!(TransformationChain::normalizable(&bm(0), 1).is_err());
        let mixed = vec![bm(3).assoc(0), bm(3).growing(0)];
        assert!(matches!(TransformationChain::new(&bm(3), mixed), Err(Error::InvalidChain(_))));
        assert!(TransformationChain::new(&bm(2), perturbed_growing(&bm(2), 2)).is_err());
    }

    #[test]
    fn intertwining_and_mutation() {
        for n in 1..=6 {
            assert!(verify_intertwining(n, false).unwrap().pass);
            assert!(!verify_intertwining(n, true).unwrap().pass);
        }
    }

    #[test]
    fn deltas_and_caveats() {
        let d = multiplicity_delta(&TransformationChain::growing(&bm(2), 1).unwrap());
        assert_eq!((d.target_n, d.delta), (3, [1, 1, 1]));
        let d = multiplicity_delta(&TransformationChain::growing(&bm(3), 1).unwrap());
        assert_eq!((d.target_n, d.delta, d.n1_unchanged), (4, [0, 1, 1], true));
        let d = multiplicity_delta(&TransformationChain::normalizable(&bm(2), 1).unwrap());
        assert_eq!((d.target_n, d.delta, d.n1_unchanged), (1, [0, -1, -1], true));
    }

    #[test]
    fn round_trips() {
        for n in 0..=5 {
            assert_eq!(round_trip(&bm(n)).unwrap(), potential_form(n));
        }
    }
}
