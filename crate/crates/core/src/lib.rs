//! Runway-system capacity modeling with stable queues.
//!
//! A runway configuration's throughput limit is described by an operational
//! throughput envelope: a concave polygonal frontier of achievable
//! (arrival, departure) service-rate pairs, given by ordered control points.
//! Landing and takeoff services are treated as two independent single-server
//! queues whose long-run transit times follow the Kingman heavy-traffic
//! estimate. Combining both gives, per time slot:
//!
//! * the sustainable-policy domain: service-rate pairs keeping both transit
//!   times under predefined delay tolerances,
//! * the delay-policy domain: the same region transformed to transit-time
//!   coordinates, where the delay cost is linear,
//! * the sustainable-demand domain: demand-rate pairs for which some
//!   sustainable policy exists at all.
//!
//! On top of these sit two optimizers: a per-slot service-policy selection
//! that minimizes expected delay cost (solved by vertex enumeration and
//! cross-checked by a dense simplex LP), and a day-level planner that moves
//! flights between consecutive slots at minimal transfer cost until every
//! slot's demand is sustainable.
//!
//! A discrete-event single-server queue simulator ([`sim`]) provides an
//! independent check of the closed-form queueing algebra.

pub mod day_planner;
pub mod domains;
pub mod envelope;
pub mod error;
pub mod lp;
pub mod queueing;
pub mod sim;
pub mod slot_optimizer;

pub use day_planner::{
    build_transfer_lp, plan_day, vertex_slot_policy, ConfigRegistry, DayPlan, DaySchedule,
    RunwayConfig, SlotDemand, TransferCosts, TransferPlan,
};
pub use domains::{
    clip_envelope, delay_policy_domain, secondary_demand_domain, sustainable_exists,
    sustainable_policy_domain, ClippedEnvelope, DelayPolicyDomain, DemandDomain, SlotContext,
};
pub use envelope::{CapacityEnvelope, ControlPoint, HalfPlane};
pub use error::{Error, Result};
pub use lp::{enumerate_polygon_optimum, LinearProgram, LpSolution, LpStatus};
pub use queueing::{
    classify_regime, congestion_demand_rate, congestion_service_rate, demand_rate_for_transit,
    expected_queue_length, service_rate_for_transit, stable_transit_time, DelayTolerance,
    QueueParams, Regime,
};
pub use sim::{compare_to_kingman, simulate_queue, ArrivalServiceModel, KingmanComparison, SimResult};
pub use slot_optimizer::{cross_check_lp, optimize_slot, DelayCosts, SlotPolicy};

/// Absolute tolerance for boundary comparisons on rates and transit times.
///
/// All quantities in this crate are O(1)-O(100) in slot units, so a fixed
/// absolute slack is adequate for classifying points that land exactly on a
/// regime or domain boundary after floating-point evaluation.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Absolute slack used for polygon membership tests.
///
/// Looser than [`BOUNDARY_TOL`]: membership is usually queried for points
/// recovered through a transit-time round trip, which costs a few more ulps
/// than a direct boundary evaluation.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
