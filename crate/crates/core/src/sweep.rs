//! Parameter sweeps over link scenarios, with the bundled experiment presets.
//!
//! A [`SweepSpec`] names a model, one swept parameter with its value grid, one or
//! more scenario variants, and the channels to report. [`run_sweep`] evaluates the
//! full cross product in a fixed order (variant, value, channel), so repeated runs
//! produce identical bytes. Rows can be serialized as CSV or JSON with all numbers
//! printed to six significant digits; the JSON writer rounds to the same digits so
//! both formats carry the same data.
//!
//! The presets `fig3a`, `fig3b`, `fig4a`, and `fig4b` reproduce the bundled
//! reference experiments: near-field receiver-range sweeps over phase offsets and
//! panel heights, and far-field sweeps over receiver range and transceiver heights.

use crate::error::{Error, Result};
use crate::geometry::LinkGeometry;
use crate::pathloss::{
    received_power_far_field, received_power_far_field_max, received_power_general,
    received_power_near_field, received_power_two_ray, PowerResult, RisPanel, Scenario,
};
use crate::pathloss::CoefficientGrid;
use crate::radiation::{GainSet, PatternModel, ReflectionCoefficient};
use serde::Serialize;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

/// Cell pitch of the reference panel in meters, chosen so the Fraunhofer boundary
/// of the 102 x 100 grid at 10.5 GHz sits at 71.4 m.
pub const REFERENCE_CELL_PITCH_M: f64 = 0.007_067_928_582_558_501;

/// Which received-power kernel a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepModel {
    General,
    FarField,
    FarFieldMax,
    NearField,
    TwoRay,
}

impl SweepModel {
    /// Stable identifier used on the command line and in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepModel::General => "general",
            SweepModel::FarField => "far-field",
            SweepModel::FarFieldMax => "far-field-max",
            SweepModel::NearField => "near-field",
            SweepModel::TwoRay => "two-ray",
        }
    }
}

impl fmt::Display for SweepModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(SweepModel::General),
            "far-field" => Ok(SweepModel::FarField),
            "far-field-max" => Ok(SweepModel::FarFieldMax),
            "near-field" => Ok(SweepModel::NearField),
            "two-ray" => Ok(SweepModel::TwoRay),
            other => Err(Error::InvalidSweep(format!(
                "unknown model '{other}'; expected one of general, far-field, \
                 far-field-max, near-field, two-ray"
            ))),
        }
    }
}

/// Which field combination a row reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Direct path plus panel reflection.
    Combined,
    /// Panel switched dark (zero reflection amplitude).
    DirectOnly,
    /// Direct path excluded.
    RisOnly,
}

/// All three channels in reporting order.
pub const ALL_CHANNELS: [Channel; 3] = [Channel::Combined, Channel::DirectOnly, Channel::RisOnly];

impl Channel {
    /// Stable identifier used in the CSV and JSON output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Channel::Combined => "combined",
            Channel::DirectOnly => "direct_only",
            Channel::RisOnly => "ris_only",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combined" => Ok(Channel::Combined),
            "direct" | "direct_only" => Ok(Channel::DirectOnly),
            "ris" | "ris_only" => Ok(Channel::RisOnly),
            other => Err(Error::InvalidSweep(format!(
                "unknown channel '{other}'; expected combined, direct, or ris"
            ))),
        }
    }
}

/// The scenario field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    /// Receiver range `d_2` in meters.
    RxRange,
    /// Transmitter range `d_1` in meters.
    TxRange,
    /// Panel mounting height `h` in meters.
    PanelHeight,
    /// Transmitter height `h_t`, with the receiver kept one meter higher and the
    /// ground separation rebuilt as `5 |2h - h_t - h_r|`, the proportion the
    /// reference grids use.
    LinkedTransceiverHeights,
}

impl SweptParameter {
    /// Column label used in reports, which doubles as the parse name.
    pub fn label(&self) -> &'static str {
        match self {
            SweptParameter::RxRange => "d2_m",
            SweptParameter::TxRange => "d1_m",
            SweptParameter::PanelHeight => "h_m",
            SweptParameter::LinkedTransceiverHeights => "h_t_m",
        }
    }

    /// Writes the swept value into a scenario.
    pub fn apply(&self, scenario: &mut Scenario, value: f64) -> Result<()> {
        match self {
            SweptParameter::RxRange => {
                scenario.rx_placement = scenario.rx_placement.with_range_m(value)?;
            }
            SweptParameter::TxRange => {
                scenario.tx_placement = scenario.tx_placement.with_range_m(value)?;
            }
            SweptParameter::PanelHeight => {
                scenario.panel = scenario.panel.with_height_m(value)?;
            }
            SweptParameter::LinkedTransceiverHeights => {
                let h = scenario.panel.h_m();
                let d = 5.0 * (2.0 * h - (2.0 * value + 1.0)).abs();
                scenario.geometry = LinkGeometry::new(value, value + 1.0, d)?;
            }
        }
        Ok(())
    }
}

impl FromStr for SweptParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d2" | "d2_m" => Ok(SweptParameter::RxRange),
            "d1" | "d1_m" => Ok(SweptParameter::TxRange),
            "h" | "h_m" => Ok(SweptParameter::PanelHeight),
            "ht" | "h_t_m" => Ok(SweptParameter::LinkedTransceiverHeights),
            other => Err(Error::InvalidSweep(format!(
                "unknown swept parameter '{other}'; expected d2_m, d1_m, h_m, or h_t_m"
            ))),
        }
    }
}

/// One named scenario a sweep evaluates across the value grid.
#[derive(Debug, Clone)]
pub struct SweepVariant {
    pub name: String,
    pub scenario: Scenario,
}

/// Full description of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub model: SweepModel,
    pub variants: Vec<SweepVariant>,
    pub swept: SweptParameter,
    pub values: Vec<f64>,
    pub channels: Vec<Channel>,
}

impl SweepSpec {
    /// Checks the sweep description before any row is evaluated: nonempty variant,
    /// value, and channel lists, finite values, and unique variant names made of
    /// name-safe characters.
    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() {
            return Err(Error::InvalidSweep("no variants given".into()));
        }
        if self.values.is_empty() {
            return Err(Error::InvalidSweep("no swept values given".into()));
        }
        if self.channels.is_empty() {
            return Err(Error::InvalidSweep("no channels given".into()));
        }
        for (i, value) in self.values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::InvalidSweep(format!(
                    "swept value {i} is not finite: {value}"
                )));
            }
        }
        for (i, channel) in self.channels.iter().enumerate() {
            if self.channels[..i].contains(channel) {
                return Err(Error::InvalidSweep(format!(
                    "duplicate channel {channel}"
                )));
            }
        }
        for (i, variant) in self.variants.iter().enumerate() {
            if variant.name.is_empty() {
                return Err(Error::InvalidSweep(format!("variant {i} has an empty name")));
            }
            if !variant
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "_.+=-".contains(c))
            {
                return Err(Error::InvalidSweep(format!(
                    "variant name '{}' contains characters unsafe for reports",
                    variant.name
                )));
            }
            if self.variants[..i].iter().any(|v| v.name == variant.name) {
                return Err(Error::InvalidSweep(format!(
                    "duplicate variant name '{}'",
                    variant.name
                )));
            }
        }
        Ok(())
    }
}

/// One evaluated sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variant: String,
    pub param: &'static str,
    pub value: f64,
    pub channel: Channel,
    pub pr_dbm: f64,
    pub pl_db: f64,
}

/// Copy of a scenario restricted to one reporting channel.
///
/// `DirectOnly` switches the panel dark by zeroing every reflection amplitude;
/// `RisOnly` drops the direct path; `Combined` leaves the scenario untouched.
pub fn channel_scenario(scenario: &Scenario, channel: Channel) -> Scenario {
    let mut out = scenario.clone();
    match channel {
        Channel::Combined => {}
        Channel::DirectOnly => {
            let dark = ReflectionCoefficient::new(0.0, 0.0)
                .expect("zero coefficient is always valid");
            out.panel = out.panel.with_uniform_coefficient(dark);
        }
        Channel::RisOnly => {
            out.include_direct = false;
        }
    }
    out
}

/// Evaluates one scenario under the named model.
///
/// The closed-form kernels report their `compensated` channel here; the other
/// phase channels stay available through the kernel functions directly. The
/// two-ray model reads the panel's uniform coefficient as its ground coefficient
/// and the panel height as the reflection height.
pub fn evaluate_model(model: SweepModel, scenario: &Scenario) -> Result<PowerResult> {
    match model {
        SweepModel::General => received_power_general(scenario),
        SweepModel::FarField => Ok(received_power_far_field(scenario)?.compensated),
        SweepModel::FarFieldMax => received_power_far_field_max(scenario),
        SweepModel::NearField => Ok(received_power_near_field(scenario)?.compensated),
        SweepModel::TwoRay => {
            scenario.validate()?;
            let gamma = scenario.panel.uniform_coefficient()?.value();
            let g_t = scenario.gains.g_t_linear();
            let g_r = scenario.gains.g_r_linear();
            let direct = if scenario.include_direct {
                (g_t, g_r)
            } else {
                (0.0, 0.0)
            };
            received_power_two_ray(
                scenario.tx_power_dbm,
                scenario.wavelength_m(),
                &scenario.geometry,
                scenario.panel.h_m(),
                direct,
                (g_t, g_r),
                gamma,
            )
        }
    }
}

/// Evaluates the full sweep grid in (variant, value, channel) order.
///
/// A failing row aborts the sweep with [`Error::SweepRow`] naming the variant and
/// the swept value, so partial output never silently truncates a grid.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows =
        Vec::with_capacity(spec.variants.len() * spec.values.len() * spec.channels.len());
    for variant in &spec.variants {
        for &value in &spec.values {
            let mut scenario = variant.scenario.clone();
            let wrap = |source: Error| Error::SweepRow {
                variant: variant.name.clone(),
                param: spec.swept.label().into(),
                value,
                source: Box::new(source),
            };
            spec.swept.apply(&mut scenario, value).map_err(wrap)?;
            for &channel in &spec.channels {
                let restricted = channel_scenario(&scenario, channel);
                let power = evaluate_model(spec.model, &restricted).map_err(wrap)?;
                rows.push(SweepRow {
                    variant: variant.name.clone(),
                    param: spec.swept.label(),
                    value,
                    channel,
                    pr_dbm: power.pr_dbm,
                    pl_db: power.pl_db,
                });
            }
        }
    }
    Ok(rows)
}

/// Formats a number with the given significant digits in plain decimal notation.
///
/// Zero prints as `0`, non-finite values as `inf`, `-inf`, or `nan`. Values whose
/// integer part already exceeds the digit budget keep their full integer part.
pub fn format_significant(x: f64, digits: u32) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes rows as CSV with the header `variant,param,value,channel,pr_dbm,pl_db`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "variant,param,value,channel,pr_dbm,pl_db")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.variant,
            row.param,
            format_significant(row.value, 6),
            row.channel,
            format_significant(row.pr_dbm, 6),
            format_significant(row.pl_db, 6)
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    variant: &'a str,
    param: &'a str,
    value: f64,
    channel: &'a str,
    pr_dbm: f64,
    pl_db: f64,
}

fn rounded(x: f64) -> f64 {
    format_significant(x, 6).parse().unwrap_or(x)
}

/// Writes rows as a pretty-printed JSON array.
///
/// Numbers are rounded to the same six significant digits as the CSV writer.
/// Non-finite values serialize as JSON `null`, which only occurs for fully
/// cancelled fields.
pub fn write_json<W: Write>(rows: &[SweepRow], out: &mut W) -> serde_json::Result<()> {
    let shaped: Vec<JsonRow> = rows
        .iter()
        .map(|row| JsonRow {
            variant: &row.variant,
            param: row.param,
            value: rounded(row.value),
            channel: row.channel.as_str(),
            pr_dbm: rounded(row.pr_dbm),
            pl_db: rounded(row.pl_db),
        })
        .collect();
    serde_json::to_writer_pretty(out, &shaped)
}

fn grid(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start + step * i as f64).collect()
}

fn reference_scenario(
    h_m: f64,
    d1_m: f64,
    d2_m: f64,
    phase_rad: f64,
    h_t_m: f64,
    h_r_m: f64,
) -> Result<Scenario> {
    let d_m = 5.0 * (2.0 * h_m - h_t_m - h_r_m).abs();
    Ok(Scenario {
        geometry: LinkGeometry::new(h_t_m, h_r_m, d_m)?,
        panel: RisPanel::new(
            100,
            102,
            REFERENCE_CELL_PITCH_M,
            REFERENCE_CELL_PITCH_M,
            h_m,
            CoefficientGrid::Uniform(ReflectionCoefficient::new(1.0, phase_rad)?),
        )?,
        tx_placement: crate::geometry::AngularPlacement::new(
            d1_m,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::PI,
        )?,
        rx_placement: crate::geometry::AngularPlacement::new(
            d2_m,
            std::f64::consts::FRAC_PI_4,
            0.0,
        )?,
        gains: GainSet::from_db(21.0, 21.0, 0.0)?,
        tx_pattern: PatternModel::Unity,
        cell_pattern: PatternModel::Unity,
        rx_pattern: PatternModel::Unity,
        frequency_hz: 10.5e9,
        tx_power_dbm: 10.0,
        include_direct: true,
        f_direct: 1.0,
    })
}

/// Names of the bundled presets.
pub fn preset_names() -> &'static [&'static str] {
    &["fig3a", "fig3b", "fig4a", "fig4b"]
}

/// One-line description of a bundled preset.
pub fn preset_description(name: &str) -> Result<&'static str> {
    match name {
        "fig3a" => Ok(
            "near-field link, panel at 15 m, receiver range swept 20 to 200 m \
             for phase offsets 0, pi/4, pi/2, 3pi/4",
        ),
        "fig3b" => Ok(
            "near-field link, receiver range swept 20 to 200 m for panel heights \
             0, 10, 15 m at phase offsets 0 and pi/4",
        ),
        "fig4a" => Ok(
            "far-field link, receiver range swept 100 to 300 m for transmitter \
             ranges 100, 200 m and panel heights 10, 20 m",
        ),
        "fig4b" => Ok(
            "far-field link, transmitter height swept 1 to 10 m (receiver 1 m \
             higher) for panel heights 10, 20 m",
        ),
        other => Err(Error::UnknownPreset {
            name: other.into(),
            available: preset_names().join(", "),
        }),
    }
}

/// Builds a bundled preset by name.
pub fn preset(name: &str) -> Result<SweepSpec> {
    match name {
        "fig3a" => {
            let mut variants = Vec::new();
            for (label, phase) in [
                ("phi_0", 0.0),
                ("phi_pi_4", std::f64::consts::FRAC_PI_4),
                ("phi_pi_2", std::f64::consts::FRAC_PI_2),
                ("phi_3pi_4", 0.75 * std::f64::consts::PI),
            ] {
                variants.push(SweepVariant {
                    name: label.into(),
                    scenario: reference_scenario(15.0, 2.0, 20.0, phase, 2.0, 3.0)?,
                });
            }
            Ok(SweepSpec {
                model: SweepModel::NearField,
                variants,
                swept: SweptParameter::RxRange,
                values: grid(20.0, 2.0, 91),
                channels: ALL_CHANNELS.to_vec(),
            })
        }
        "fig3b" => {
            let mut variants = Vec::new();
            for (phase_label, phase) in [("phi_0", 0.0), ("phi_pi_4", std::f64::consts::FRAC_PI_4)]
            {
                for h in [0.0, 10.0, 15.0] {
                    variants.push(SweepVariant {
                        name: format!("{phase_label}_h_{h:.0}"),
                        scenario: reference_scenario(h, 2.0, 20.0, phase, 2.0, 3.0)?,
                    });
                }
            }
            Ok(SweepSpec {
                model: SweepModel::NearField,
                variants,
                swept: SweptParameter::RxRange,
                values: grid(20.0, 2.0, 91),
                channels: ALL_CHANNELS.to_vec(),
            })
        }
        "fig4a" => {
            let mut variants = Vec::new();
            for d1 in [100.0, 200.0] {
                for h in [10.0, 20.0] {
                    variants.push(SweepVariant {
                        name: format!("d1_{d1:.0}_h_{h:.0}"),
                        scenario: reference_scenario(h, d1, 100.0, 0.0, 2.0, 3.0)?,
                    });
                }
            }
            Ok(SweepSpec {
                model: SweepModel::FarField,
                variants,
                swept: SweptParameter::RxRange,
                values: grid(100.0, 5.0, 41),
                channels: ALL_CHANNELS.to_vec(),
            })
        }
        "fig4b" => {
            let mut variants = Vec::new();
            for h in [10.0, 20.0] {
                variants.push(SweepVariant {
                    name: format!("h_{h:.0}"),
                    scenario: reference_scenario(h, 100.0, 100.0, 0.0, 1.0, 2.0)?,
                });
            }
            Ok(SweepSpec {
                model: SweepModel::FarField,
                variants,
                swept: SweptParameter::LinkedTransceiverHeights,
                values: grid(1.0, 1.0, 10),
                channels: ALL_CHANNELS.to_vec(),
            })
        }
        other => Err(Error::UnknownPreset {
            name: other.into(),
            available: preset_names().join(", "),
        }),
    }
}
