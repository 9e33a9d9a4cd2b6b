//! Per-slot service-policy selection minimizing expected delay cost.
//!
//! In transit-time coordinates the expected delay cost of a slot is linear,
//!
//! ```text
//! f^z = c_a * lambda_a * z_a + c_d * lambda_d * z_d
//! ```
//!
//! and the sustainable region is a convex polygon bounded by the transformed
//! envelope polyline and the tolerance caps. The optimum therefore sits on
//! one of the transformed control points, so [`optimize_slot`] simply
//! enumerates them. [`cross_check_lp`] solves the same linearized program
//! with the dense simplex instead and must agree on the objective; the pair
//! gives two independent routes to the same answer.

use crate::domains::{delay_policy_domain, SlotContext};
use crate::error::{Error, Result};
use crate::lp::{enumerate_polygon_optimum, LinearProgram, LpStatus};
use crate::queueing::service_rate_for_transit;
use serde::{Deserialize, Serialize};

/// Cost of one slot of delay per flight, by service class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayCosts {
    pub c_a: f64,
    pub c_d: f64,
}

impl DelayCosts {
    pub fn new(c_a: f64, c_d: f64) -> Result<Self> {
        if !(c_a > 0.0) || !(c_d > 0.0) || !c_a.is_finite() || !c_d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "delay costs must be > 0, got ({c_a}, {c_d})"
            )));
        }
        Ok(Self { c_a, c_d })
    }
}

/// A chosen service policy with its transit times and expected delay cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotPolicy {
    pub z_a: f64,
    pub z_d: f64,
    pub mu_a: f64,
    pub mu_d: f64,
    pub expected_cost: f64,
}

fn policy_from_transit(ctx: &SlotContext, z_a: f64, z_d: f64, cost: f64) -> Result<SlotPolicy> {
    Ok(SlotPolicy {
        z_a,
        z_d,
        mu_a: service_rate_for_transit(ctx.lambda_a, z_a, ctx.q_a)?,
        mu_d: service_rate_for_transit(ctx.lambda_d, z_d, ctx.q_d)?,
        expected_cost: cost,
    })
}

/// Minimize `f^z` over the delay-policy vertices and map the winner back to
/// service rates.
///
/// With zero demand in both classes the objective vanishes identically; the
/// policy with the smallest total transit `z_a + z_d` is returned at cost 0.
pub fn optimize_slot(ctx: &SlotContext, costs: &DelayCosts) -> Result<SlotPolicy> {
    let delay = delay_policy_domain(ctx)?;
    let weights = (costs.c_a * ctx.lambda_a, costs.c_d * ctx.lambda_d);
    let degenerate = weights.0 == 0.0 && weights.1 == 0.0;
    let effective = if degenerate { (1.0, 1.0) } else { weights };
    let (idx, value) = enumerate_polygon_optimum(delay.vertices(), effective)
        .expect("delay domain has at least one vertex");
    let vertex = delay.vertices()[idx];
    let cost = if degenerate { 0.0 } else { value };
    policy_from_transit(ctx, vertex.x, vertex.y, cost)
}

/// Solve the linearized delay-space program with the simplex solver.
///
/// Constraints are the segment half-planes through the transit-time control
/// points plus the caps `z <= p`; for a domain collapsed to a single vertex
/// the lower bounds `z >= vertex` replace the (empty) segment set. Agrees
/// with [`optimize_slot`] on the objective value; the chosen vertex may
/// differ under ties.
pub fn cross_check_lp(ctx: &SlotContext, costs: &DelayCosts) -> Result<SlotPolicy> {
    let delay = delay_policy_domain(ctx)?;
    let weights = (costs.c_a * ctx.lambda_a, costs.c_d * ctx.lambda_d);

    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for hp in delay.half_planes() {
        rows.push(vec![hp.a_coeff, hp.d_coeff]);
        bounds.push(hp.rhs);
    }
    if delay.vertices().len() == 1 {
        let v = delay.vertices()[0];
        rows.push(vec![-1.0, 0.0]);
        bounds.push(-v.x);
        rows.push(vec![0.0, -1.0]);
        bounds.push(-v.y);
    }
    rows.push(vec![1.0, 0.0]);
    bounds.push(delay.p_a);
    rows.push(vec![0.0, 1.0]);
    bounds.push(delay.p_d);

    let lp = LinearProgram::new(vec![weights.0, weights.1], rows, bounds)?;
    let solution = lp.solve()?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::NoSustainablePolicy),
        LpStatus::Unbounded => {
            return Err(Error::NumericalFailure("delay-space LP unbounded".into()))
        }
    }
    policy_from_transit(ctx, solution.x[0], solution.x[1], solution.objective_value)
}
