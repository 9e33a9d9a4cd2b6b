//! Day-level flight slot transfers and per-slot policies.
//!
//! A day is N consecutive slots, each with scheduled demand and a runway
//! configuration. When some slot's demand falls outside its sustainable-
//! demand domain, flights are transferred to the following slot: decision
//! variables `s_a[i], s_d[i] >= 0` (none out of the last slot) produce the
//! secondary schedule
//!
//! ```text
//! lambda2[i] = lambda[i] + s[i-1] - s[i]        (s[0-1] = 0)
//! ```
//!
//! which must be nonnegative and inside every slot's demand domain. The
//! transfer plan minimizing `c_a * sum(s_a) + c_d * sum(s_d)` is a linear
//! program; transfers stay fractional, read as expected flight counts.
//! Afterwards each slot gets a service policy: the per-slot optimizer where
//! the secondary demand is interior, or the unique extreme policy
//! (`z = (p_a, p_d)`) where it sits on the demand-domain boundary.

use crate::domains::{secondary_demand_domain, sustainable_exists, DemandDomain, SlotContext};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpStatus};
use crate::slot_optimizer::{optimize_slot, DelayCosts, SlotPolicy};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Cost of transferring one flight to the next slot, by service class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferCosts {
    pub c_a: f64,
    pub c_d: f64,
}

impl TransferCosts {
    pub fn new(c_a: f64, c_d: f64) -> Result<Self> {
        if !(c_a > 0.0) || !(c_d > 0.0) || !c_a.is_finite() || !c_d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "transfer costs must be > 0, got ({c_a}, {c_d})"
            )));
        }
        Ok(Self { c_a, c_d })
    }
}

/// A runway configuration: envelope plus per-class variability coefficients.
#[derive(Debug, Clone)]
pub struct RunwayConfig {
    pub name: String,
    pub envelope: crate::envelope::CapacityEnvelope,
    pub q_a: f64,
    pub q_d: f64,
}

impl RunwayConfig {
    pub fn new(
        name: impl Into<String>,
        envelope: crate::envelope::CapacityEnvelope,
        q_a: f64,
        q_d: f64,
    ) -> Result<Self> {
        if !(q_a > 0.0) || !(q_d > 0.0) || !q_a.is_finite() || !q_d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "variability coefficients must be > 0, got ({q_a}, {q_d})"
            )));
        }
        Ok(Self { name: name.into(), envelope, q_a, q_d })
    }
}

/// Named configurations a schedule can reference.
#[derive(Debug, Clone, Default)]
pub struct ConfigRegistry {
    configs: BTreeMap<String, RunwayConfig>,
}

impl ConfigRegistry {
    pub fn new(configs: Vec<RunwayConfig>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for config in configs {
            let name = config.name.clone();
            if map.insert(name.clone(), config).is_some() {
                return Err(Error::InvalidInput(format!("duplicate configuration name {name:?}")));
            }
        }
        Ok(Self { configs: map })
    }

    pub fn get(&self, name: &str) -> Option<&RunwayConfig> {
        self.configs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.configs.keys().map(String::as_str)
    }
}

/// Scheduled demand for one slot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlotDemand {
    pub lambda_a: f64,
    pub lambda_d: f64,
    pub config_id: String,
}

/// A full day: ordered slots and the day-wide delay tolerances.
#[derive(Debug, Clone)]
pub struct DaySchedule {
    pub slots: Vec<SlotDemand>,
    pub p_a: f64,
    pub p_d: f64,
}

impl DaySchedule {
    pub fn new(slots: Vec<SlotDemand>, p_a: f64, p_d: f64) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::InvalidInput("a day needs at least one slot".into()));
        }
        if !(p_a > 0.0) || !(p_d > 0.0) || !p_a.is_finite() || !p_d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "delay tolerances must be > 0, got ({p_a}, {p_d})"
            )));
        }
        for (i, slot) in slots.iter().enumerate() {
            if !(slot.lambda_a >= 0.0)
                || !(slot.lambda_d >= 0.0)
                || !slot.lambda_a.is_finite()
                || !slot.lambda_d.is_finite()
            {
                return Err(Error::InvalidInput(format!(
                    "slot {i} demand must be nonnegative, got ({}, {})",
                    slot.lambda_a, slot.lambda_d
                )));
            }
        }
        Ok(Self { slots, p_a, p_d })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// Per-slot transfers and the secondary schedule they induce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferPlan {
    /// Flights moved from slot i to slot i+1; the last entry is always 0.
    pub s_a: Vec<f64>,
    pub s_d: Vec<f64>,
    /// Secondary schedule `lambda + s(prev) - s(self)`.
    pub secondary_a: Vec<f64>,
    pub secondary_d: Vec<f64>,
    pub total_cost: f64,
}

/// Transfers plus the per-slot policies applied to the secondary schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayPlan {
    pub transfers: TransferPlan,
    pub policies: Vec<SlotPolicy>,
    pub total_delay_cost: f64,
    pub total_transfer_cost: f64,
}

/// Demand domains computed once per distinct configuration of the day.
fn slot_domains<'a>(
    day: &'a DaySchedule,
    registry: &'a ConfigRegistry,
) -> Result<(Vec<&'a RunwayConfig>, BTreeMap<&'a str, DemandDomain>)> {
    let mut configs = Vec::with_capacity(day.len());
    let mut domains: BTreeMap<&str, DemandDomain> = BTreeMap::new();
    for slot in &day.slots {
        let config = registry
            .get(&slot.config_id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown configuration {:?}", slot.config_id)))?;
        if !domains.contains_key(config.name.as_str()) {
            let domain =
                secondary_demand_domain(&config.envelope, config.q_a, config.q_d, day.p_a, day.p_d)?;
            domains.insert(config.name.as_str(), domain);
        }
        configs.push(config);
    }
    Ok((configs, domains))
}

/// Assemble the transfer LP: variables `s_a[1..N-1], s_d[1..N-1]`, demand-
/// domain half-planes applied to each slot's secondary demand, and the
/// nonnegativity guards `s[i] - s[i-1] <= lambda[i]`.
pub fn build_transfer_lp(
    day: &DaySchedule,
    registry: &ConfigRegistry,
    costs: &TransferCosts,
) -> Result<LinearProgram> {
    let (configs, domains) = slot_domains(day, registry)?;
    Ok(assemble_lp(day, &configs, &domains, costs))
}

fn assemble_lp(
    day: &DaySchedule,
    configs: &[&RunwayConfig],
    domains: &BTreeMap<&str, DemandDomain>,
    costs: &TransferCosts,
) -> LinearProgram {
    let n = day.len();
    let free = n - 1; // transfers out of slots 1..N-1 (none from the last)
    let num_vars = 2 * free;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut bounds: Vec<f64> = Vec::new();
    // Writes one constraint `a*lambda2_a[i] + d*lambda2_d[i] <= rhs` in terms
    // of the free transfer variables.
    let mut push_row = |i: usize, a: f64, d: f64, rhs: f64, lambda_a: f64, lambda_d: f64| {
        let mut row = vec![0.0; num_vars];
        if i >= 1 {
            // inbound transfers s[i-1]
            row[i - 1] += a;
            row[free + i - 1] += d;
        }
        if i < free {
            // outbound transfers s[i]
            row[i] -= a;
            row[free + i] -= d;
        }
        rows.push(row);
        bounds.push(rhs - a * lambda_a - d * lambda_d);
    };

    for (i, slot) in day.slots.iter().enumerate() {
        let domain = &domains[configs[i].name.as_str()];
        for hp in domain.half_planes() {
            push_row(i, hp.a_coeff, hp.d_coeff, hp.rhs, slot.lambda_a, slot.lambda_d);
        }
        if domain.vertices().len() == 1 {
            let v = domain.vertices()[0];
            push_row(i, 1.0, 0.0, v.x, slot.lambda_a, slot.lambda_d);
            push_row(i, 0.0, 1.0, v.y, slot.lambda_a, slot.lambda_d);
        }
        // lambda2 >= 0, componentwise
        push_row(i, -1.0, 0.0, 0.0, slot.lambda_a, slot.lambda_d);
        push_row(i, 0.0, -1.0, 0.0, slot.lambda_a, slot.lambda_d);
    }

    let mut objective = vec![0.0; num_vars];
    objective[..free].fill(costs.c_a);
    objective[free..].fill(costs.c_d);
    LinearProgram::new(objective, rows, bounds).expect("assembled LP dimensions are consistent")
}

/// Solve the transfer LP, build the secondary schedule, and choose a policy
/// for every slot.
///
/// Delay costs after transfers are reported with the given `delay_costs`;
/// they are configurable independently of the transfer costs.
pub fn plan_day(
    day: &DaySchedule,
    registry: &ConfigRegistry,
    transfer_costs: &TransferCosts,
    delay_costs: &DelayCosts,
) -> Result<DayPlan> {
    let (configs, domains) = slot_domains(day, registry)?;
    let lp = assemble_lp(day, &configs, &domains, transfer_costs);
    let solution = lp.solve()?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::InfeasibleSchedule),
        LpStatus::Unbounded => {
            return Err(Error::NumericalFailure("transfer LP unbounded".into()))
        }
    }

    let n = day.len();
    let free = n - 1;
    let clean = |v: f64| if v.abs() <= 1e-9 { 0.0 } else { v };
    let mut s_a: Vec<f64> = (0..free).map(|i| clean(solution.x[i])).collect();
    let mut s_d: Vec<f64> = (0..free).map(|i| clean(solution.x[free + i])).collect();
    s_a.push(0.0);
    s_d.push(0.0);

    let mut secondary_a = Vec::with_capacity(n);
    let mut secondary_d = Vec::with_capacity(n);
    for i in 0..n {
        let inbound_a = if i >= 1 { s_a[i - 1] } else { 0.0 };
        let inbound_d = if i >= 1 { s_d[i - 1] } else { 0.0 };
        secondary_a.push(clean(day.slots[i].lambda_a + inbound_a - s_a[i]).max(0.0));
        secondary_d.push(clean(day.slots[i].lambda_d + inbound_d - s_d[i]).max(0.0));
    }

    let mut policies = Vec::with_capacity(n);
    for i in 0..n {
        let domain = &domains[configs[i].name.as_str()];
        policies.push(slot_policy_for(
            configs[i],
            domain,
            day.p_a,
            day.p_d,
            secondary_a[i],
            secondary_d[i],
            delay_costs,
        )?);
    }

    let total_delay_cost = policies.iter().map(|p| p.expected_cost).sum();
    let total_transfer_cost = solution.objective_value;
    Ok(DayPlan {
        transfers: TransferPlan {
            s_a,
            s_d,
            secondary_a,
            secondary_d,
            total_cost: total_transfer_cost,
        },
        policies,
        total_delay_cost,
        total_transfer_cost,
    })
}

/// Policy selection for one slot of the secondary schedule. Interior demand
/// goes through the slot optimizer; demand on the domain boundary (vertex or
/// not) admits only the extreme policy with `z = (p_a, p_d)`.
fn slot_policy_for(
    config: &RunwayConfig,
    domain: &DemandDomain,
    p_a: f64,
    p_d: f64,
    lambda_a: f64,
    lambda_d: f64,
    delay_costs: &DelayCosts,
) -> Result<SlotPolicy> {
    if domain.vertex_index_of(lambda_a, lambda_d, 1e-9).is_some() {
        return vertex_slot_policy(domain, lambda_a, lambda_d, delay_costs);
    }
    let ctx = SlotContext::new(
        config.envelope.clone(),
        config.q_a,
        config.q_d,
        p_a,
        p_d,
        lambda_a,
        lambda_d,
    )?;
    if sustainable_exists(&ctx) {
        optimize_slot(&ctx, delay_costs)
    } else {
        // On the domain boundary between vertices the sustainable region
        // degenerates to the congestion corner itself.
        let (mu_a, mu_d) = ctx.congestion_rates()?;
        Ok(SlotPolicy {
            z_a: p_a,
            z_d: p_d,
            mu_a,
            mu_d,
            expected_cost: delay_costs.c_a * lambda_a * p_a + delay_costs.c_d * lambda_d * p_d,
        })
    }
}

/// The unique policy for demand sitting exactly on a demand-domain vertex:
/// the corresponding envelope point, with both transit times at tolerance.
pub fn vertex_slot_policy(
    domain: &DemandDomain,
    lambda_a: f64,
    lambda_d: f64,
    delay_costs: &DelayCosts,
) -> Result<SlotPolicy> {
    let idx = domain
        .vertex_index_of(lambda_a, lambda_d, 1e-9)
        .ok_or(Error::NotAVertex)?;
    let service = domain.service_vertices()[idx];
    Ok(SlotPolicy {
        z_a: domain.p_a,
        z_d: domain.p_d,
        mu_a: service.x,
        mu_d: service.y,
        expected_cost: delay_costs.c_a * lambda_a * domain.p_a
            + delay_costs.c_d * lambda_d * domain.p_d,
    })
}
