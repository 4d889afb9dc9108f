//! JSON scenario files and their conversion into library scenarios.
//!
//! The file schema keeps user-facing units: frequency in GHz, angles in degrees,
//! gains in dB. Unknown keys are rejected so typos surface as errors instead of
//! silently falling back to defaults. Exactly one of `panel.reflection` (uniform)
//! and `panel.per_element` (row-major grid) must be present.

use crate::AppError;
use rispl_core::geometry::{AngularPlacement, LinkGeometry};
use rispl_core::pathloss::{CoefficientGrid, RisPanel, Scenario};
use rispl_core::radiation::{GainSet, PatternModel, ReflectionCoefficient};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    frequency_ghz: f64,
    tx_power_dbm: f64,
    geometry: GeometrySection,
    panel: PanelSection,
    placement: PlacementSection,
    gains_db: GainsSection,
    #[serde(default)]
    patterns: PatternsSection,
    #[serde(default = "default_true")]
    include_direct: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometrySection {
    h_t_m: f64,
    h_r_m: f64,
    d_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PanelSection {
    rows: u32,
    cols: u32,
    dx_m: f64,
    dy_m: f64,
    h_m: f64,
    #[serde(default)]
    reflection: Option<ReflectionSection>,
    #[serde(default)]
    per_element: Option<Vec<ReflectionSection>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReflectionSection {
    amplitude: f64,
    phase_rad: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementSection {
    d1_m: f64,
    theta_t_deg: f64,
    psi_t_deg: f64,
    d2_m: f64,
    theta_r_deg: f64,
    psi_r_deg: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GainsSection {
    gt: f64,
    gr: f64,
    #[serde(default)]
    g_cell: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternsSection {
    #[serde(default)]
    tx: Option<PatternSection>,
    #[serde(default)]
    cell: Option<PatternSection>,
    #[serde(default)]
    rx: Option<PatternSection>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PatternSection {
    Named(String),
    CosinePower(CosinePowerSection),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CosinePowerSection {
    cos_q: f64,
}

fn pattern_model(section: &Option<PatternSection>, label: &str) -> Result<PatternModel, AppError> {
    match section {
        None => Ok(PatternModel::Unity),
        Some(PatternSection::Named(name)) if name == "unity" => Ok(PatternModel::Unity),
        Some(PatternSection::Named(name)) => Err(AppError::Validation(format!(
            "{label} pattern: unknown name '{name}', expected \"unity\" or {{\"cos_q\": q}}"
        ))),
        Some(PatternSection::CosinePower(section)) => Ok(PatternModel::CosinePower {
            exponent: section.cos_q,
        }),
    }
}

impl ScenarioFile {
    /// Converts the file into a library scenario, mapping units at this boundary:
    /// GHz to Hz and degrees to radians.
    pub fn into_scenario(self) -> Result<Scenario, AppError> {
        let invalid = |err: rispl_core::Error| AppError::Validation(err.to_string());
        let geometry = LinkGeometry::new(
            self.geometry.h_t_m,
            self.geometry.h_r_m,
            self.geometry.d_m,
        )
        .map_err(invalid)?;
        let coefficients = match (self.panel.reflection, self.panel.per_element) {
            (Some(uniform), None) => CoefficientGrid::Uniform(
                ReflectionCoefficient::new(uniform.amplitude, uniform.phase_rad)
                    .map_err(invalid)?,
            ),
            (None, Some(values)) => {
                let mut grid = Vec::with_capacity(values.len());
                for value in values {
                    grid.push(
                        ReflectionCoefficient::new(value.amplitude, value.phase_rad)
                            .map_err(invalid)?,
                    );
                }
                CoefficientGrid::PerElement(grid)
            }
            (None, None) => {
                return Err(AppError::Validation(
                    "panel needs either a uniform reflection or a per_element grid".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(AppError::Validation(
                    "panel must not set both reflection and per_element".into(),
                ))
            }
        };
        let panel = RisPanel::new(
            self.panel.rows,
            self.panel.cols,
            self.panel.dx_m,
            self.panel.dy_m,
            self.panel.h_m,
            coefficients,
        )
        .map_err(invalid)?;
        let tx_placement = AngularPlacement::new(
            self.placement.d1_m,
            self.placement.theta_t_deg.to_radians(),
            self.placement.psi_t_deg.to_radians(),
        )
        .map_err(invalid)?;
        let rx_placement = AngularPlacement::new(
            self.placement.d2_m,
            self.placement.theta_r_deg.to_radians(),
            self.placement.psi_r_deg.to_radians(),
        )
        .map_err(invalid)?;
        let gains = GainSet::from_db(self.gains_db.gt, self.gains_db.gr, self.gains_db.g_cell)
            .map_err(invalid)?;
        let scenario = Scenario {
            geometry,
            panel,
            tx_placement,
            rx_placement,
            gains,
            tx_pattern: pattern_model(&self.patterns.tx, "transmit")?,
            cell_pattern: pattern_model(&self.patterns.cell, "element")?,
            rx_pattern: pattern_model(&self.patterns.rx, "receive")?,
            frequency_hz: self.frequency_ghz * 1e9,
            tx_power_dbm: self.tx_power_dbm,
            include_direct: self.include_direct,
            f_direct: 1.0,
        };
        scenario.validate().map_err(invalid)?;
        Ok(scenario)
    }
}

/// Loads and converts a scenario file. Missing or unreadable files are I/O
/// errors; malformed JSON or schema violations are validation errors.
pub fn load(path: &Path) -> Result<Scenario, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| AppError::Io(format!("cannot read {}: {err}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|err| {
        AppError::Validation(format!("scenario file {}: {err}", path.display()))
    })?;
    file.into_scenario()
}
