pub mod laurent;
pub mod rational;

pub use laurent::{ExpLaurent, NumericLaurent, QSign};
pub use rational::{binomial, dfact, factorial, rat, rat_int, rational_to_f64, Rational, RationalComplex};

/// Applies `h_n = −∂² + n(n+1)/(x − z)²` exactly.
pub fn apply_h(f: &ExpLaurent, n: u32) -> ExpLaurent {
    apply_h_with(f, i64::from(n) * (i64::from(n) + 1))
}

/// Applies `−∂² + c/(x − z)²` for an arbitrary integer coupling `c`.
pub fn apply_h_with(f: &ExpLaurent, coupling: i64) -> ExpLaurent {
    let d2 = f.diff_x().diff_x();
    let v = f.mul_x_pow(-2).scale(&RationalComplex::from_int(coupling));
    &v - &d2
}
