//! Numerical integration: Gauss–Legendre and adaptive Gauss–Kronrod rules,
//! real-line integrals with slowly decaying oscillatory tails, deformed
//! contours in the `k` plane, and closed-form Gaussian-packet transforms.

pub mod adaptive;
pub mod contour;
pub mod gauss;
pub mod line;
pub mod packet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use adaptive::{integrate_adaptive, AdaptiveOptions};
pub use contour::{quad_arc, quad_contour, ContourSpec, Direction};
pub use gauss::GaussLegendre;
pub use line::{quad_line, quad_line_core, quad_line_periodic};
pub use packet::{quad_packet, GaussianPacket, PacketTransform};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self { value: Complex64::new(0.0, 0.0), error_estimate: 0.0, evaluations: 0 }
    }

    /// Sum of two independent pieces; error estimates add.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}
