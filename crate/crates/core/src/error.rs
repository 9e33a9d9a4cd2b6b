//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Demand meets or exceeds the service rate: no stable queue exists.
    #[error("saturated queue: demand rate {lambda} >= service rate {mu}")]
    SaturatedQueue { lambda: f64, mu: f64 },

    /// An argument violates a precondition that is not covered by a more
    /// specific variant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Envelope control points are not strictly decreasing in x / increasing in y.
    #[error("control point ordering violated at index {index}")]
    OrderingViolation { index: usize },

    /// The first control point must have y = 0 and the last x = 0.
    #[error("control point {index} must lie on the axis (y_0 = 0 and x_J = 0)")]
    EndpointViolation { index: usize },

    /// Consecutive segment slopes do not decrease: the polygon is not concave.
    #[error("envelope is not concave at control point {index}")]
    ConvexityViolation { index: usize },

    /// A rate passed to an envelope query lies outside the envelope's span.
    #[error("query value {value} outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    /// Clipping bounds leave no part of the envelope.
    #[error("clip bounds leave an empty domain")]
    EmptyDomain,

    /// No service policy keeps both queues under the delay tolerances.
    #[error("no sustainable policy exists for this demand and tolerance")]
    NoSustainablePolicy,

    /// The delay tolerances are unreachable for the configuration even at
    /// zero demand.
    #[error("delay tolerances are unreachable for this configuration")]
    InfeasibleTolerance,

    /// The day schedule cannot be made sustainable by forward transfers.
    #[error("schedule cannot be made sustainable by slot transfers")]
    InfeasibleSchedule,

    /// The queried demand pair is not a vertex of the demand domain.
    #[error("demand pair is not a demand-domain vertex")]
    NotAVertex,

    /// The simplex solver hit an irrecoverably small pivot.
    #[error("numerical failure in LP solve: {0}")]
    NumericalFailure(String),

    /// Simulation parameters describe an unstable system.
    #[error("unstable system: arrival rate {lambda} >= service rate {mu}")]
    UnstableSystem { lambda: f64, mu: f64 },

    /// A quadratic ratio of momenta below 1 is not realizable.
    #[error("invalid variability: quadratic ratio {q} < 1")]
    InvalidVariability { q: f64 },
}
