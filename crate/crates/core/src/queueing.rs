//! Stable-queue algebra for a single service class.
//!
//! A single-server FIFO queue with demand rate `lambda`, service rate `mu`
//! and combined variability coefficient `q = q_S + q_C - 2` (quadratic
//! ratios of momenta of the service and interarrival distributions) has, in
//! the stable regime `lambda < mu`, a long-run expected queue length
//!
//! ```text
//! E(Q) = rho^2 / (1 - rho) * q / 2,        rho = lambda / mu
//! ```
//!
//! and a stable transit time (waiting plus service)
//!
//! ```text
//! z = 1/mu * (1 + q * lambda / (2 * (mu - lambda)))
//! ```
//!
//! The transit-time relation can be solved for any one of `z`, `mu`,
//! `lambda` in terms of the other two, which is what the three core
//! operations here do. A predefined delay tolerance `p` splits the stable
//! regime into sustainable (`z <= p`) and congestion (`z > p`) conditions;
//! the rates achieving `z = p` exactly are the congestion thresholds.

use crate::error::{Error, Result};
use crate::BOUNDARY_TOL;
use serde::{Deserialize, Serialize};

/// Operating regime of a queue under a delay tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `lambda >= mu`: the queue grows without bound.
    Saturation,
    /// Stable but the transit time exceeds the tolerance.
    Congestion,
    /// Stable with transit time within the tolerance.
    Sustainable,
}

/// Validated parameter bundle for one service class.
///
/// `q` is the combined variability coefficient `q_S + q_C - 2`; it is 0 for
/// deterministic arrivals and service and 2 for an M/M/1 queue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueParams {
    pub lambda: f64,
    pub mu: f64,
    pub q: f64,
}

impl QueueParams {
    pub fn new(lambda: f64, mu: f64, q: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidInput(format!("service rate must be > 0, got {mu}")));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidInput(format!("demand rate must be >= 0, got {lambda}")));
        }
        if !(q >= 0.0) {
            return Err(Error::InvalidInput(format!("variability coefficient must be >= 0, got {q}")));
        }
        Ok(Self { lambda, mu, q })
    }

    /// Utilization `rho = lambda / mu`.
    pub fn utilization(&self) -> f64 {
        self.lambda / self.mu
    }

    pub fn transit_time(&self) -> Result<f64> {
        stable_transit_time(self.lambda, self.mu, self.q)
    }

    pub fn classify(&self, tolerance: DelayTolerance) -> Regime {
        classify_regime(self.lambda, self.mu, self.q, tolerance.get())
    }
}

/// A maximal acceptable stable transit time, in slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayTolerance(f64);

impl DelayTolerance {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::InvalidInput(format!("delay tolerance must be > 0, got {p}")));
        }
        Ok(Self(p))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

fn check_rates(lambda: f64, mu: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidInput(format!("service rate must be positive and finite, got {mu}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("demand rate must be >= 0 and finite, got {lambda}")));
    }
    Ok(())
}

/// Stable transit time `z = 1/mu * (1 + q*lambda / (2*(mu - lambda)))`.
///
/// Requires a stable queue (`mu > lambda`) and `q >= 0`.
pub fn stable_transit_time(lambda: f64, mu: f64, q: f64) -> Result<f64> {
    check_rates(lambda, mu)?;
    if !(q >= 0.0) {
        return Err(Error::InvalidInput(format!("variability coefficient must be >= 0, got {q}")));
    }
    if mu <= lambda {
        return Err(Error::SaturatedQueue { lambda, mu });
    }
    Ok((1.0 + q * lambda / (2.0 * (mu - lambda))) / mu)
}

fn check_inversion_q(q: f64) -> Result<()> {
    // q = 0 makes z identically 1/mu, which cannot be inverted in lambda;
    // the inversions are well defined for every q > 0.
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidInput(format!(
            "variability coefficient must be > 0 for rate inversion, got {q}"
        )));
    }
    Ok(())
}

/// Service rate achieving transit time `z` at demand `lambda`:
/// `mu = (1 + lambda*z + sqrt(1 + lambda^2 z^2 + 2 lambda z (q-1))) / (2z)`.
///
/// Inverse of [`stable_transit_time`] in `mu`; the returned rate always
/// exceeds `lambda`.
pub fn service_rate_for_transit(lambda: f64, z: f64, q: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("demand rate must be >= 0 and finite, got {lambda}")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidInput(format!("transit time must be > 0, got {z}")));
    }
    check_inversion_q(q)?;
    let lz = lambda * z;
    // Discriminant = (1 - lz)^2 + 2*lz*q >= 0 for every q > 0.
    let disc = 1.0 + lz * lz + 2.0 * lz * (q - 1.0);
    Ok((1.0 + lz + disc.sqrt()) / (2.0 * z))
}

/// Demand rate that produces transit time `z` under service rate `mu`:
/// `lambda = mu * 2(z*mu - 1) / (q + 2(z*mu - 1))`.
///
/// Inverse of [`stable_transit_time`] in `lambda`. Transit below the pure
/// service time (`z*mu < 1`) is impossible for any demand.
pub fn demand_rate_for_transit(mu: f64, z: f64, q: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidInput(format!("service rate must be > 0, got {mu}")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidInput(format!("transit time must be > 0, got {z}")));
    }
    check_inversion_q(q)?;
    let excess = z * mu - 1.0;
    if excess < -BOUNDARY_TOL {
        return Err(Error::InvalidInput(format!(
            "transit time {z} below pure service time {}",
            1.0 / mu
        )));
    }
    let excess = excess.max(0.0);
    Ok(mu * 2.0 * excess / (q + 2.0 * excess))
}

/// Minimal service rate keeping the transit time at the tolerance `p` for
/// demand `lambda`. Rates below it put the queue in congestion.
pub fn congestion_service_rate(lambda: f64, p: f64, q: f64) -> Result<f64> {
    service_rate_for_transit(lambda, p, q)
}

/// Maximal demand rate a service rate `mu` can absorb while keeping the
/// transit time at the tolerance `p`. Inverse of [`congestion_service_rate`].
pub fn congestion_demand_rate(mu: f64, p: f64, q: f64) -> Result<f64> {
    demand_rate_for_transit(mu, p, q)
}

/// Long-run expected queue length `rho^2/(1-rho) * (q_S + q_C - 2)/2`.
///
/// Reduces to the Pollaczek-Khinchine mean `lambda^2 q_S / (2 mu (mu - lambda))`
/// when `q_C = 2` (exponential interarrivals) and to 0 in the deterministic
/// case `q_S = q_C = 1`.
pub fn expected_queue_length(lambda: f64, mu: f64, q_service: f64, q_arrival: f64) -> Result<f64> {
    check_rates(lambda, mu)?;
    if q_service < 1.0 {
        return Err(Error::InvalidVariability { q: q_service });
    }
    if q_arrival < 1.0 {
        return Err(Error::InvalidVariability { q: q_arrival });
    }
    if mu <= lambda {
        return Err(Error::SaturatedQueue { lambda, mu });
    }
    Ok(lambda * lambda / (mu * (mu - lambda)) * (q_service + q_arrival - 2.0) / 2.0)
}

/// Classify the regime under tolerance `p`: saturation when `lambda >= mu`,
/// congestion when the stable transit time exceeds `p`, sustainable
/// otherwise. A transit time exactly at `p` counts as sustainable.
pub fn classify_regime(lambda: f64, mu: f64, q: f64, p: f64) -> Regime {
    if lambda >= mu {
        return Regime::Saturation;
    }
    let z = (1.0 + q * lambda / (2.0 * (mu - lambda))) / mu;
    if z > p + BOUNDARY_TOL {
        Regime::Congestion
    } else {
        Regime::Sustainable
    }
}
