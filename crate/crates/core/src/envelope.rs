//! Operational throughput envelope of a runway configuration.
//!
//! The envelope is the concave frontier of achievable (arrival, departure)
//! service-rate pairs, known only through an ordered sequence of control
//! points
//!
//! ```text
//! (x_j, y_j)_{j=0..J},  x_j strictly decreasing, y_j strictly increasing,
//! y_0 = 0, x_J = 0
//! ```
//!
//! Together with the origin these vertices bound a convex polygon described
//! by J half-plane constraints
//!
//! ```text
//! mu_a * (y_j - y_{j-1}) + mu_d * (x_{j-1} - x_j) <= x_{j-1} y_j - x_j y_{j-1}
//! ```
//!
//! `phi` evaluates the piecewise-linear frontier (max departure rate for a
//! given arrival rate) and `psi` its inverse; both are minima over the
//! half-plane set, so they are valid between control points as well.

use crate::error::{Error, Result};
use crate::{BOUNDARY_TOL, MEMBERSHIP_TOL};
use serde::{Deserialize, Serialize};

/// A vertex of the envelope polygon, or more generally a point in one of the
/// derived two-dimensional domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPoint {
    pub x: f64,
    pub y: f64,
}

impl ControlPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<(f64, f64)> for ControlPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// One linear constraint `a_coeff * mu_a + d_coeff * mu_d <= rhs`.
///
/// Constraints derived from a valid envelope (or from the demand domain)
/// have nonnegative coefficients; delay-space constraints do not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub a_coeff: f64,
    pub d_coeff: f64,
    pub rhs: f64,
}

impl HalfPlane {
    /// Signed slack `rhs - lhs`; nonnegative inside the half-plane.
    pub fn slack(&self, x: f64, y: f64) -> f64 {
        self.rhs - (self.a_coeff * x + self.d_coeff * y)
    }
}

/// Half-planes through consecutive vertices of a polyline, one per segment.
pub(crate) fn segment_half_planes(points: &[ControlPoint]) -> Vec<HalfPlane> {
    points
        .windows(2)
        .map(|w| HalfPlane {
            a_coeff: w[1].y - w[0].y,
            d_coeff: w[0].x - w[1].x,
            rhs: w[0].x * w[1].y - w[1].x * w[0].y,
        })
        .collect()
}

/// A validated capacity envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityEnvelope {
    name: String,
    points: Vec<ControlPoint>,
}

impl CapacityEnvelope {
    /// Validates raw control points and builds the envelope.
    ///
    /// Checks, in order: at least two points with nonnegative coordinates,
    /// strict monotonicity (x decreasing, y increasing), axis endpoints
    /// (`y_0 = 0`, `x_J = 0`), and strict concavity of consecutive segment
    /// slopes. Errors name the offending point index.
    pub fn new(name: impl Into<String>, raw: Vec<ControlPoint>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "an envelope needs at least 2 control points, got {}",
                raw.len()
            )));
        }
        for (i, p) in raw.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() || p.x < 0.0 || p.y < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "control point {i} = ({}, {}) must be finite and nonnegative",
                    p.x, p.y
                )));
            }
        }
        for i in 1..raw.len() {
            if raw[i].x >= raw[i - 1].x || raw[i].y <= raw[i - 1].y {
                return Err(Error::OrderingViolation { index: i });
            }
        }
        if raw[0].y != 0.0 {
            return Err(Error::EndpointViolation { index: 0 });
        }
        if raw[raw.len() - 1].x != 0.0 {
            return Err(Error::EndpointViolation { index: raw.len() - 1 });
        }
        // Concavity: the polyline must turn counterclockwise at every
        // interior vertex (segment slopes strictly increase along the list,
        // i.e. strictly decrease in x).
        for i in 1..raw.len() - 1 {
            let d1 = (raw[i].x - raw[i - 1].x, raw[i].y - raw[i - 1].y);
            let d2 = (raw[i + 1].x - raw[i].x, raw[i + 1].y - raw[i].y);
            let cross = d1.0 * d2.1 - d1.1 * d2.0;
            if cross <= 0.0 {
                return Err(Error::ConvexityViolation { index: i });
            }
        }
        Ok(Self { name: name.into(), points: raw })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[ControlPoint] {
        &self.points
    }

    /// Number of boundary segments J.
    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Maximal arrival service rate `x_0`.
    pub fn mu_a_max(&self) -> f64 {
        self.points[0].x
    }

    /// Maximal departure service rate `y_J`.
    pub fn mu_d_max(&self) -> f64 {
        self.points[self.points.len() - 1].y
    }

    /// The J half-plane constraints bounding the polygon.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        segment_half_planes(&self.points)
    }

    /// Maximal departure rate compatible with arrival rate `mu_a`:
    /// the minimum over all half-planes. Equals `y_j` at `mu_a = x_j`.
    pub fn phi(&self, mu_a: f64) -> Result<f64> {
        let mu_a = clamp_to_range(mu_a, self.mu_a_max())?;
        let value = self
            .points
            .windows(2)
            .map(|w| {
                let rhs = w[0].x * w[1].y - w[1].x * w[0].y;
                (rhs - mu_a * (w[1].y - w[0].y)) / (w[0].x - w[1].x)
            })
            .fold(f64::INFINITY, f64::min);
        Ok(value)
    }

    /// Maximal arrival rate compatible with departure rate `mu_d`; inverse
    /// of [`phi`](Self::phi) on the frontier.
    pub fn psi(&self, mu_d: f64) -> Result<f64> {
        let mu_d = clamp_to_range(mu_d, self.mu_d_max())?;
        let value = self
            .points
            .windows(2)
            .map(|w| {
                let rhs = w[0].x * w[1].y - w[1].x * w[0].y;
                (rhs - mu_d * (w[0].x - w[1].x)) / (w[1].y - w[0].y)
            })
            .fold(f64::INFINITY, f64::min);
        Ok(value)
    }

    /// Non-strict membership: both rates nonnegative and every half-plane
    /// satisfied, with [`MEMBERSHIP_TOL`] slack so that frontier points
    /// recovered through floating-point round trips stay inside.
    pub fn contains(&self, mu_a: f64, mu_d: f64) -> bool {
        if mu_a < -MEMBERSHIP_TOL || mu_d < -MEMBERSHIP_TOL {
            return false;
        }
        self.points.windows(2).all(|w| {
            let rhs = w[0].x * w[1].y - w[1].x * w[0].y;
            mu_a * (w[1].y - w[0].y) + mu_d * (w[0].x - w[1].x) <= rhs + MEMBERSHIP_TOL
        })
    }
}

fn clamp_to_range(value: f64, max: f64) -> Result<f64> {
    if !value.is_finite() || value < -BOUNDARY_TOL || value > max + BOUNDARY_TOL {
        return Err(Error::OutOfRange { value, min: 0.0, max });
    }
    Ok(value.clamp(0.0, max))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn env1() -> CapacityEnvelope {
        CapacityEnvelope::new(
            "ENV1",
            vec![
                ControlPoint::new(12.0, 0.0),
                ControlPoint::new(10.0, 8.0),
                ControlPoint::new(6.0, 10.0),
                ControlPoint::new(0.0, 11.0),
            ],
        )
        .unwrap()
    }

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn validates_env1() {
        let env = env1();
        assert_eq!(env.segment_count(), 3);
        assert_eq!(env.mu_a_max(), 12.0);
        assert_eq!(env.mu_d_max(), 11.0);
    }

    #[test]
    fn rejects_ordering_violation() {
        let err = CapacityEnvelope::new(
            "bad",
            vec![
                ControlPoint::new(12.0, 0.0),
                ControlPoint::new(10.0, 8.0),
                ControlPoint::new(11.0, 9.0),
            ],
        )
        .unwrap_err();
        assert_eq!(err, Error::OrderingViolation { index: 2 });
    }

    #[test]
    fn rejects_endpoint_violation() {
        let err = CapacityEnvelope::new(
            "bad",
            vec![ControlPoint::new(12.0, 1.0), ControlPoint::new(0.0, 11.0)],
        )
        .unwrap_err();
        assert_eq!(err, Error::EndpointViolation { index: 0 });

        let err = CapacityEnvelope::new(
            "bad",
            vec![ControlPoint::new(12.0, 0.0), ControlPoint::new(1.0, 11.0)],
        )
        .unwrap_err();
        assert_eq!(err, Error::EndpointViolation { index: 1 });
    }

    #[test]
    fn rejects_convexity_violation() {
        // Slopes -0.5 then -4: turns the wrong way at index 1.
        let err = CapacityEnvelope::new(
            "bad",
            vec![
                ControlPoint::new(12.0, 0.0),
                ControlPoint::new(10.0, 1.0),
                ControlPoint::new(8.0, 9.0),
                ControlPoint::new(0.0, 11.0),
            ],
        )
        .unwrap_err();
        assert_eq!(err, Error::ConvexityViolation { index: 1 });
    }

    #[test]
    fn rejects_coincident_points() {
        let err = CapacityEnvelope::new(
            "bad",
            vec![
                ControlPoint::new(12.0, 0.0),
                ControlPoint::new(12.0, 0.0),
                ControlPoint::new(0.0, 11.0),
            ],
        )
        .unwrap_err();
        assert_eq!(err, Error::OrderingViolation { index: 1 });
    }

    #[test]
    fn rejects_too_few_points() {
        assert!(matches!(
            CapacityEnvelope::new("bad", vec![ControlPoint::new(0.0, 0.0)]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn half_planes_single_segment() {
        let env = CapacityEnvelope::new(
            "one",
            vec![ControlPoint::new(12.0, 0.0), ControlPoint::new(0.0, 11.0)],
        )
        .unwrap();
        let hp = env.half_planes();
        assert_eq!(hp.len(), 1);
        assert_eq!(hp[0].a_coeff, 11.0);
        assert_eq!(hp[0].d_coeff, 12.0);
        assert_eq!(hp[0].rhs, 132.0);
    }

    #[test]
    fn half_planes_env1() {
        let hp = env1().half_planes();
        let rhs: Vec<f64> = hp.iter().map(|h| h.rhs).collect();
        assert_eq!(rhs, vec![96.0, 52.0, 66.0]);
        assert_eq!(hp[0].a_coeff, 8.0);
        assert_eq!(hp[0].d_coeff, 2.0);
        assert_eq!(hp[2].a_coeff, 1.0);
        assert_eq!(hp[2].d_coeff, 6.0);
    }

    #[test]
    fn phi_examples() {
        let env = env1();
        assert_eq!(env.phi(0.0).unwrap(), 11.0);
        // min of {16, 9, 9.667} on the middle segment
        assert_close(env.phi(8.0).unwrap(), 9.0, 1e-12);
        assert_eq!(env.phi(12.0).unwrap(), 0.0);
        assert!(matches!(env.phi(12.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(env.phi(-0.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn psi_examples() {
        let env = env1();
        assert_eq!(env.psi(0.0).unwrap(), 12.0);
        // first segment: y = -4 (x - 12)
        assert_close(env.psi(3.0).unwrap(), 11.25, 1e-12);
        assert_close(env.psi(9.0).unwrap(), 8.0, 1e-12);
        assert!(matches!(env.psi(11.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn contains_examples() {
        let env = env1();
        assert!(env.contains(5.0, 5.0));
        assert!(!env.contains(12.0, 1.0)); // 8*12 + 2*1 = 98 > 96
        assert!(env.contains(0.0, 0.0));
        assert!(!env.contains(-1.0, 5.0));
    }

    #[test]
    fn vertex_interpolation_exact() {
        let env = env1();
        for p in env.points() {
            assert_close(env.phi(p.x).unwrap(), p.y, 1e-12);
            assert_close(env.psi(p.y).unwrap(), p.x, 1e-12);
        }
    }

    #[test]
    fn phi_concave_and_non_increasing() {
        let env = env1();
        let n = 200;
        let mut prev_value = f64::INFINITY;
        let mut prev_slope = f64::INFINITY;
        let mut prev_x: Option<(f64, f64)> = None;
        for i in 0..=n {
            let x = env.mu_a_max() * i as f64 / n as f64;
            let y = env.phi(x).unwrap();
            assert!(y <= prev_value + 1e-12);
            prev_value = y;
            if let Some((px, py)) = prev_x {
                let slope = (y - py) / (x - px);
                assert!(slope <= prev_slope + 1e-9, "slopes must not increase");
                prev_slope = slope;
            }
            prev_x = Some((x, y));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // psi is the inverse of phi along the frontier.
            #[test]
            fn mutual_inverse(t in 0.0f64..1.0) {
                let env = env1();
                let x = t * env.mu_a_max();
                let y = env.phi(x).unwrap();
                let back = env.psi(y).unwrap();
                prop_assert!((back - x).abs() <= 1e-9 * x.max(1.0));
            }

            // Frontier points are inside; slightly above the frontier is outside.
            #[test]
            fn frontier_membership(t in 0.01f64..0.99) {
                let env = env1();
                let x = t * env.mu_a_max();
                let y = env.phi(x).unwrap();
                prop_assert!(env.contains(x, y));
                prop_assert!(!env.contains(x, y + 1e-6));
            }
        }
    }
}
