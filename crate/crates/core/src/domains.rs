//! Derived convex regions of a slot: sustainable policies, delay policies,
//! and sustainable demand.
//!
//! Given a slot context (envelope, variability coefficients, delay
//! tolerances, demand rates), the congestion thresholds
//! `mu_cong = mu(lambda, p, q)` cut the envelope polygon from below and from
//! the left. The surviving arc of the frontier, with cut points inserted and
//! coincident repeats collapsed, is the sustainable-policy domain. Mapping
//! its vertices through the transit-time transform `mu -> z(lambda, mu, q)`
//! gives the delay-policy domain, where delay cost is linear. Clipping the
//! envelope at `(1/p_a, 1/p_d)` instead and mapping through the congestion
//! demand rate `mu -> lambda_cong(mu)` gives the sustainable-demand domain:
//! all demand pairs that admit some sustainable policy at tolerance `p`.

use crate::envelope::{segment_half_planes, CapacityEnvelope, ControlPoint, HalfPlane};
use crate::error::{Error, Result};
use crate::queueing::{congestion_demand_rate, congestion_service_rate, stable_transit_time};
use crate::{BOUNDARY_TOL, MEMBERSHIP_TOL};

/// Treat clipped vertices closer than this (in both coordinates) as one.
const COINCIDENT_TOL: f64 = 1e-9;

/// Everything needed to reason about one time slot.
#[derive(Debug, Clone)]
pub struct SlotContext {
    pub envelope: CapacityEnvelope,
    /// Combined variability coefficients `q_S + q_C - 2` per service class.
    pub q_a: f64,
    pub q_d: f64,
    /// Delay tolerances in slots.
    pub p_a: f64,
    pub p_d: f64,
    /// Scheduled demand rates in aircraft per slot.
    pub lambda_a: f64,
    pub lambda_d: f64,
}

impl SlotContext {
    pub fn new(
        envelope: CapacityEnvelope,
        q_a: f64,
        q_d: f64,
        p_a: f64,
        p_d: f64,
        lambda_a: f64,
        lambda_d: f64,
    ) -> Result<Self> {
        for (name, v) in [("q_a", q_a), ("q_d", q_d), ("p_a", p_a), ("p_d", p_d)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("lambda_a", lambda_a), ("lambda_d", lambda_d)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(Self { envelope, q_a, q_d, p_a, p_d, lambda_a, lambda_d })
    }

    /// Congestion thresholds `(mu_a_cong, mu_d_cong)` for the slot's demand.
    pub fn congestion_rates(&self) -> Result<(f64, f64)> {
        Ok((
            congestion_service_rate(self.lambda_a, self.p_a, self.q_a)?,
            congestion_service_rate(self.lambda_d, self.p_d, self.q_d)?,
        ))
    }
}

/// The part of the envelope with `x >= corner.x` and `y >= corner.y`.
///
/// Vertices stay on the original frontier; the domain itself is the convex
/// region bounded by the vertex polyline and the corner.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedEnvelope {
    corner: ControlPoint,
    points: Vec<ControlPoint>,
}

impl ClippedEnvelope {
    /// Lower-left corner of the clipped region.
    pub fn corner(&self) -> ControlPoint {
        self.corner
    }

    /// Surviving control points, ordered like the envelope's.
    pub fn points(&self) -> &[ControlPoint] {
        &self.points
    }

    /// Half-planes through consecutive surviving vertices.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        segment_half_planes(&self.points)
    }

    /// Membership in the clipped domain: above both corner bounds and below
    /// every segment half-plane (non-strict).
    pub fn contains(&self, mu_a: f64, mu_d: f64) -> bool {
        mu_a >= self.corner.x - MEMBERSHIP_TOL
            && mu_d >= self.corner.y - MEMBERSHIP_TOL
            && self.half_planes().iter().all(|h| h.slack(mu_a, mu_d) >= -MEMBERSHIP_TOL)
    }
}

/// Sustainable transit-time pairs, as the transformed envelope polyline plus
/// the tolerance caps.
///
/// Vertices run from `(z_a small, p_d)` to `(p_a, z_d small)`: x strictly
/// increasing, y strictly decreasing. The feasible region lies above the
/// polyline and below both caps.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayPolicyDomain {
    vertices: Vec<ControlPoint>,
    pub p_a: f64,
    pub p_d: f64,
}

impl DelayPolicyDomain {
    pub fn vertices(&self) -> &[ControlPoint] {
        &self.vertices
    }

    /// Segment constraints through consecutive transit-time vertices. Their
    /// coefficients are negative, so `lhs <= rhs` keeps the region above the
    /// polyline.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        segment_half_planes(&self.vertices)
    }

    pub fn contains(&self, z_a: f64, z_d: f64) -> bool {
        z_a <= self.p_a + MEMBERSHIP_TOL
            && z_d <= self.p_d + MEMBERSHIP_TOL
            && self.half_planes().iter().all(|h| h.slack(z_a, z_d) >= -MEMBERSHIP_TOL)
    }
}

/// Demand-rate pairs compatible with some sustainable policy.
///
/// `vertices` are the demand-space control points; `service_vertices` are
/// their preimages on the envelope (the policy achieving `z = p` exactly at
/// that demand). The first vertex lies on the x axis and the last on the
/// y axis, closing the region with `lambda >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandDomain {
    vertices: Vec<ControlPoint>,
    service_vertices: Vec<ControlPoint>,
    pub q_a: f64,
    pub q_d: f64,
    pub p_a: f64,
    pub p_d: f64,
}

impl DemandDomain {
    pub fn vertices(&self) -> &[ControlPoint] {
        &self.vertices
    }

    /// Envelope points corresponding one-to-one to the demand vertices.
    pub fn service_vertices(&self) -> &[ControlPoint] {
        &self.service_vertices
    }

    pub fn half_planes(&self) -> Vec<HalfPlane> {
        segment_half_planes(&self.vertices)
    }

    pub fn contains(&self, lambda_a: f64, lambda_d: f64) -> bool {
        lambda_a >= -MEMBERSHIP_TOL
            && lambda_d >= -MEMBERSHIP_TOL
            && self
                .half_planes()
                .iter()
                .all(|h| h.slack(lambda_a, lambda_d) >= -MEMBERSHIP_TOL)
    }

    /// Index of the demand vertex matching `(lambda_a, lambda_d)` within
    /// `tol` in both coordinates, if any.
    pub fn vertex_index_of(&self, lambda_a: f64, lambda_d: f64, tol: f64) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| (v.x - lambda_a).abs() <= tol && (v.y - lambda_d).abs() <= tol)
    }
}

/// Whether any sustainable policy exists: the congestion corner must lie
/// strictly inside the envelope (`mu_a_cong < psi(mu_d_cong)`).
pub fn sustainable_exists(ctx: &SlotContext) -> bool {
    let (mu_a_cong, mu_d_cong) = match ctx.congestion_rates() {
        Ok(rates) => rates,
        Err(_) => return false,
    };
    if mu_d_cong > ctx.envelope.mu_d_max() + BOUNDARY_TOL {
        return false;
    }
    match ctx.envelope.psi(mu_d_cong) {
        Ok(limit) => mu_a_cong < limit - BOUNDARY_TOL,
        Err(_) => false,
    }
}

/// Clip the envelope to `x >= min_x`, `y >= min_y`.
///
/// Control points outside a bound are replaced by the frontier crossing with
/// that bound (`(psi(min_y), min_y)` below, `(min_x, phi(min_x))` left), and
/// coincident repeats are collapsed. A clip of zero width, within
/// [`BOUNDARY_TOL`], counts as empty: it admits only the extreme policy.
pub fn clip_envelope(
    env: &CapacityEnvelope,
    min_x: f64,
    min_y: f64,
) -> Result<ClippedEnvelope> {
    if !(min_x >= 0.0) || !(min_y >= 0.0) || !min_x.is_finite() || !min_y.is_finite() {
        return Err(Error::InvalidInput(format!(
            "clip bounds must be nonnegative, got ({min_x}, {min_y})"
        )));
    }
    if min_y > env.mu_d_max() + BOUNDARY_TOL || min_x > env.mu_a_max() + BOUNDARY_TOL {
        return Err(Error::EmptyDomain);
    }
    let x_at_min_y = env.psi(min_y)?;
    if min_x >= x_at_min_y - BOUNDARY_TOL {
        return Err(Error::EmptyDomain);
    }
    let y_at_min_x = env.phi(min_x)?;

    let mut points: Vec<ControlPoint> = Vec::with_capacity(env.points().len());
    for p in env.points() {
        // After the nonemptiness check a control point can violate at most
        // one bound.
        let candidate = if p.y < min_y {
            ControlPoint::new(x_at_min_y, min_y)
        } else if p.x < min_x {
            ControlPoint::new(min_x, y_at_min_x)
        } else {
            *p
        };
        let coincident = points.last().is_some_and(|last| {
            (last.x - candidate.x).abs() <= COINCIDENT_TOL
                && (last.y - candidate.y).abs() <= COINCIDENT_TOL
        });
        if !coincident {
            points.push(candidate);
        }
    }
    Ok(ClippedEnvelope { corner: ControlPoint::new(min_x, min_y), points })
}

/// The sustainable-policy domain: the envelope clipped at the congestion
/// thresholds, with the corner `(mu_a_cong, mu_d_cong)`.
pub fn sustainable_policy_domain(ctx: &SlotContext) -> Result<ClippedEnvelope> {
    let (mu_a_cong, mu_d_cong) = ctx.congestion_rates()?;
    clip_envelope(&ctx.envelope, mu_a_cong, mu_d_cong).map_err(|e| match e {
        Error::EmptyDomain => Error::NoSustainablePolicy,
        other => other,
    })
}

/// The delay-policy domain: the sustainable-policy vertices mapped through
/// `mu -> z(lambda, mu, q)` per coordinate.
///
/// The first vertex is the image of `(psi(mu_d_cong), mu_d_cong)` and so has
/// `z_d = p_d` by definition of the congestion rate; symmetrically the last
/// vertex has `z_a = p_a`. Those coordinates are pinned exactly.
pub fn delay_policy_domain(ctx: &SlotContext) -> Result<DelayPolicyDomain> {
    let clipped = sustainable_policy_domain(ctx)?;
    let mut vertices: Vec<ControlPoint> = clipped
        .points()
        .iter()
        .map(|p| {
            Ok(ControlPoint::new(
                stable_transit_time(ctx.lambda_a, p.x, ctx.q_a)?,
                stable_transit_time(ctx.lambda_d, p.y, ctx.q_d)?,
            ))
        })
        .collect::<Result<_>>()?;
    let last = vertices.len() - 1;
    vertices[0].y = ctx.p_d;
    vertices[last].x = ctx.p_a;
    Ok(DelayPolicyDomain { vertices, p_a: ctx.p_a, p_d: ctx.p_d })
}

/// The sustainable-demand (secondary) domain for a configuration and a pair
/// of delay tolerances.
///
/// The envelope is clipped at `(1/p_a, 1/p_d)` — the minimal service rates
/// that can meet the tolerances at all — and each surviving vertex is mapped
/// through the congestion demand rate. Cut points on the clip bounds map
/// exactly onto the axes.
pub fn secondary_demand_domain(
    env: &CapacityEnvelope,
    q_a: f64,
    q_d: f64,
    p_a: f64,
    p_d: f64,
) -> Result<DemandDomain> {
    for (name, v) in [("q_a", q_a), ("q_d", q_d), ("p_a", p_a), ("p_d", p_d)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")));
        }
    }
    let min_x = 1.0 / p_a;
    let min_y = 1.0 / p_d;
    let clipped = clip_envelope(env, min_x, min_y).map_err(|e| match e {
        Error::EmptyDomain => Error::InfeasibleTolerance,
        other => other,
    })?;
    let service_vertices = clipped.points().to_vec();
    let vertices: Vec<ControlPoint> = service_vertices
        .iter()
        .map(|p| {
            // A coordinate sitting exactly on the clip bound corresponds to
            // zero demand; mapping it through the formula would leave
            // rounding residue instead of an exact axis intercept.
            let x = if p.x == min_x { 0.0 } else { congestion_demand_rate(p.x, p_a, q_a)? };
            let y = if p.y == min_y { 0.0 } else { congestion_demand_rate(p.y, p_d, q_d)? };
            Ok(ControlPoint::new(x, y))
        })
        .collect::<Result<_>>()?;
    Ok(DemandDomain { vertices, service_vertices, q_a, q_d, p_a, p_d })
}
