//! Configuration and schedule file formats (JSON) and the plan output.

use runway_core::{
    CapacityEnvelope, ConfigRegistry, ControlPoint, DayPlan, DaySchedule, DelayCosts,
    RunwayConfig, SlotDemand, TransferCosts,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::CliError;

pub const DEFAULT_SLOT_MINUTES: u32 = 15;

#[derive(Debug, Deserialize)]
pub struct ConfigFile {
    pub configurations: Vec<ConfigurationEntry>,
    pub tolerances: Tolerances,
    pub costs: Costs,
    /// Slot length used only for report labeling.
    #[serde(default = "default_slot_minutes")]
    pub slot_minutes: u32,
}

fn default_slot_minutes() -> u32 {
    DEFAULT_SLOT_MINUTES
}

#[derive(Debug, Deserialize)]
pub struct ConfigurationEntry {
    pub name: String,
    pub control_points: Vec<[f64; 2]>,
    pub q_a: f64,
    pub q_d: f64,
}

#[derive(Debug, Deserialize)]
pub struct Tolerances {
    pub p_a: f64,
    pub p_d: f64,
}

#[derive(Debug, Deserialize)]
pub struct Costs {
    pub c_a: f64,
    pub c_d: f64,
}

#[derive(Debug, Deserialize)]
pub struct ScheduleFile {
    pub slots: Vec<ScheduleSlot>,
}

#[derive(Debug, Deserialize)]
pub struct ScheduleSlot {
    pub lambda_a: f64,
    pub lambda_d: f64,
    pub config: String,
}

/// Everything `plan-day` writes to its output file.
#[derive(Debug, Serialize)]
pub struct PlanFile<'a> {
    pub slot_minutes: u32,
    pub total_transfer_cost: f64,
    pub total_delay_cost: f64,
    pub transfers: &'a runway_core::TransferPlan,
    pub policies: &'a [runway_core::SlotPolicy],
    pub rounded_transfers: RoundingReport,
}

/// Advisory nearest-integer view of the fractional transfers.
#[derive(Debug, Serialize)]
pub struct RoundingReport {
    pub s_a: Vec<f64>,
    pub s_d: Vec<f64>,
    pub note: &'static str,
}

impl RoundingReport {
    pub fn from_plan(plan: &DayPlan) -> Self {
        Self {
            s_a: plan.transfers.s_a.iter().map(|s| s.round()).collect(),
            s_d: plan.transfers.s_d.iter().map(|s| s.round()).collect(),
            note: "nearest-integer view for reporting; the plan itself keeps \
                   fractional transfers as expected flight counts",
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file: ConfigFile = read_json(path)?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.configurations.is_empty() {
            return Err(CliError::Validation("no configurations defined".into()));
        }
        for entry in &self.configurations {
            entry.to_config()?;
        }
        TransferCosts::new(self.costs.c_a, self.costs.c_d)?;
        if !(self.tolerances.p_a > 0.0) || !(self.tolerances.p_d > 0.0) {
            return Err(CliError::Validation(format!(
                "tolerances must be > 0, got ({}, {})",
                self.tolerances.p_a, self.tolerances.p_d
            )));
        }
        Ok(())
    }

    pub fn registry(&self) -> Result<ConfigRegistry, CliError> {
        let configs = self
            .configurations
            .iter()
            .map(|entry| entry.to_config())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConfigRegistry::new(configs)?)
    }

    /// The named configuration, or the first one when no name is given.
    pub fn select(&self, name: Option<&str>) -> Result<RunwayConfig, CliError> {
        let entry = match name {
            Some(name) => self
                .configurations
                .iter()
                .find(|c| c.name == name)
                .ok_or_else(|| CliError::Validation(format!("unknown configuration {name:?}")))?,
            None => &self.configurations[0],
        };
        entry.to_config()
    }

    pub fn delay_costs(&self) -> Result<DelayCosts, CliError> {
        Ok(DelayCosts::new(self.costs.c_a, self.costs.c_d)?)
    }
}

impl ConfigurationEntry {
    pub fn to_config(&self) -> Result<RunwayConfig, CliError> {
        let points = self
            .control_points
            .iter()
            .map(|&[x, y]| ControlPoint::new(x, y))
            .collect();
        let envelope = CapacityEnvelope::new(self.name.clone(), points)?;
        Ok(RunwayConfig::new(self.name.clone(), envelope, self.q_a, self.q_d)?)
    }
}

impl ScheduleFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn to_day(&self, tolerances: &Tolerances) -> Result<DaySchedule, CliError> {
        let slots = self
            .slots
            .iter()
            .map(|s| SlotDemand {
                lambda_a: s.lambda_a,
                lambda_d: s.lambda_d,
                config_id: s.config.clone(),
            })
            .collect();
        Ok(DaySchedule::new(slots, tolerances.p_a, tolerances.p_d)?)
    }
}
