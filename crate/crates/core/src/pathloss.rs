//! Received-power kernels: element sum, two-ray, single element, far field, near field.
//!
//! Every kernel returns received power through [`PowerResult`], which carries the
//! value in watts and dBm together with the path loss in dB. The common structure is
//!
//! `P_r = P_t (lambda / 4 pi)^2 | direct field + reflected field |^2`
//!
//! with the direct field `sqrt(G_t G_r) / d_l` and a model-specific reflected field.
//!
//! The closed forms ([`received_power_far_field`], [`received_power_near_field`])
//! report three channels. The `compensated` channel treats the panel phase as the
//! residual offset after the element phases have been aligned to the direct path, so
//! a zero phase means perfect compensation. The `exact_phase` channel keeps the full
//! two-path rotation `2 pi (d_1 + d_2 - d_l) / lambda`, which wraps every time the
//! path mismatch grows by one wavelength. The `small_phase` channel replaces that
//! rotation by its first-order expansion `delta_phi = 4 pi X / (lambda d)` with the
//! elevation product `X = (h - h_t)(h - h_r)`; it is only meaningful while
//! `delta_phi` stays well below one radian. At centimeter wavelengths with
//! meter-scale elevation offsets `delta_phi` easily reaches hundreds of radians, and
//! the expansion inflates the power by orders of magnitude, so callers that want the
//! envelope behavior should read `compensated` and treat the other two as
//! diagnostics of the phase regime.

use crate::error::{Error, Result};
use crate::geometry::{
    element_center, exact_element_distance, AngularPlacement, LinkGeometry,
};
use crate::radiation::{
    angles_from_points, combined_pattern, GainSet, PatternModel, ReflectionCoefficient,
};
use crate::wavelength_m;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Converts a ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a power in watts to dBm; the power must be finite and positive.
pub fn watts_to_dbm(watts: f64) -> Result<f64> {
    if !(watts.is_finite() && watts > 0.0) {
        return Err(Error::NonpositivePower(watts));
    }
    Ok(10.0 * (watts * 1e3).log10())
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// Path loss in dB, `P_t [dBm] - P_r [dBm]`.
pub fn path_loss_db(tx_power_dbm: f64, rx_power_dbm: f64) -> f64 {
    tx_power_dbm - rx_power_dbm
}

/// Normalized sinc, `sin(pi x) / (pi x)` with `sinc(0) = 1`.
///
/// This is the infinite-aperture limit of [`dirichlet_ratio`]:
/// `dirichlet_ratio(x / m, m)` approaches `sinc(x)` as `m` grows.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Normalized Dirichlet kernel `sin(pi m u) / (m sin(pi u))`.
///
/// This is the closed form of the aligned phasor sum
/// `sum_{k = 1 - m/2}^{m/2} e^{j 2 pi u (k - 1/2)} = m * dirichlet_ratio(u, m)`.
/// Near integer `u`, where both sine factors vanish, the series expansion
/// `(-1)^{(m - 1) k} (1 - (pi eps)^2 (m^2 - 1) / 6)` with `eps = u - k` is used.
/// The value is bounded by 1 in magnitude, reaching 1 at `u = 0`.
pub fn dirichlet_ratio(u: f64, m: u32) -> f64 {
    debug_assert!(m >= 1);
    let m_f = m as f64;
    let k = u.round();
    let eps = u - k;
    // Near an integer both sines vanish and the direct quotient loses accuracy to
    // the argument reduction of sin at multiples of pi, so use the series there.
    if eps.abs() < 1e-6 {
        let sign = if ((m as i64 - 1) * (k as i64)).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        sign * (1.0 - (PI * eps).powi(2) * (m_f * m_f - 1.0) / 6.0)
    } else {
        (PI * m_f * u).sin() / (m_f * (PI * u).sin())
    }
}

/// Reflection coefficients of a panel: one shared value or one value per element.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientGrid {
    /// Every element applies the same coefficient.
    Uniform(ReflectionCoefficient),
    /// Row-major per-element coefficients; index `(n, m)` maps to
    /// `(n + N/2 - 1) * M + (m + M/2 - 1)`.
    PerElement(Vec<ReflectionCoefficient>),
}

/// Rectangular reflecting panel in the plane `z = h`.
///
/// The grid has `N` rows spaced `d_y` apart along `y` and `M` columns spaced `d_x`
/// apart along `x`, centered on the `z` axis. Both dimensions must be even so the
/// index ranges `n in 1 - N/2 ..= N/2` and `m in 1 - M/2 ..= M/2` are symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPanel {
    rows: u32,
    cols: u32,
    dx_m: f64,
    dy_m: f64,
    h_m: f64,
    coefficients: CoefficientGrid,
}

impl RisPanel {
    /// Builds a panel; dimensions must be even and at least 2, pitches positive and
    /// finite, the mounting height finite and nonnegative, and a per-element grid
    /// must hold exactly `rows * cols` coefficients.
    pub fn new(
        rows: u32,
        cols: u32,
        dx_m: f64,
        dy_m: f64,
        h_m: f64,
        coefficients: CoefficientGrid,
    ) -> Result<Self> {
        if rows < 2 || rows % 2 != 0 {
            return Err(Error::InvalidPanel(format!(
                "row count must be even and at least 2, got {rows}"
            )));
        }
        if cols < 2 || cols % 2 != 0 {
            return Err(Error::InvalidPanel(format!(
                "column count must be even and at least 2, got {cols}"
            )));
        }
        if !(dx_m.is_finite() && dx_m > 0.0) || !(dy_m.is_finite() && dy_m > 0.0) {
            return Err(Error::InvalidPanel(format!(
                "element pitches must be finite and positive, got d_x = {dx_m}, d_y = {dy_m}"
            )));
        }
        if !h_m.is_finite() || h_m < 0.0 {
            return Err(Error::InvalidPanel(format!(
                "mounting height must be finite and nonnegative, got {h_m}"
            )));
        }
        if let CoefficientGrid::PerElement(values) = &coefficients {
            let expected = rows as usize * cols as usize;
            if values.len() != expected {
                return Err(Error::InvalidPanel(format!(
                    "per-element grid holds {} coefficients, expected {expected}",
                    values.len()
                )));
            }
        }
        Ok(Self { rows, cols, dx_m, dy_m, h_m, coefficients })
    }

    /// Number of rows `N` (spacing along `y`).
    pub fn rows(&self) -> u32 {
        self.rows
    }

    /// Number of columns `M` (spacing along `x`).
    pub fn cols(&self) -> u32 {
        self.cols
    }

    /// Column pitch `d_x` in meters.
    pub fn dx_m(&self) -> f64 {
        self.dx_m
    }

    /// Row pitch `d_y` in meters.
    pub fn dy_m(&self) -> f64 {
        self.dy_m
    }

    /// Mounting height `h` in meters.
    pub fn h_m(&self) -> f64 {
        self.h_m
    }

    /// Total number of elements `M N`.
    pub fn element_count(&self) -> u64 {
        self.rows as u64 * self.cols as u64
    }

    /// Aperture diagonal `sqrt((M d_x)^2 + (N d_y)^2)` in meters.
    pub fn aperture_diagonal_m(&self) -> f64 {
        (self.cols as f64 * self.dx_m).hypot(self.rows as f64 * self.dy_m)
    }

    /// Row indices `1 - N/2 ..= N/2`.
    pub fn row_indices(&self) -> impl Iterator<Item = i32> {
        let half = (self.rows / 2) as i32;
        (1 - half)..=half
    }

    /// Column indices `1 - M/2 ..= M/2`.
    pub fn col_indices(&self) -> impl Iterator<Item = i32> {
        let half = (self.cols / 2) as i32;
        (1 - half)..=half
    }

    /// Checks that `(n, m)` addresses an element of this panel.
    pub fn check_index(&self, n: i32, m: i32) -> Result<()> {
        let half_n = (self.rows / 2) as i32;
        let half_m = (self.cols / 2) as i32;
        if (1 - half_n..=half_n).contains(&n) && (1 - half_m..=half_m).contains(&m) {
            Ok(())
        } else {
            Err(Error::ElementIndexOutOfRange {
                n,
                m,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Reflection coefficient of element `(n, m)`.
    pub fn coefficient(&self, n: i32, m: i32) -> Result<ReflectionCoefficient> {
        self.check_index(n, m)?;
        match &self.coefficients {
            CoefficientGrid::Uniform(value) => Ok(*value),
            CoefficientGrid::PerElement(values) => {
                let half_n = (self.rows / 2) as i32;
                let half_m = (self.cols / 2) as i32;
                let idx = (n + half_n - 1) as usize * self.cols as usize
                    + (m + half_m - 1) as usize;
                Ok(values[idx])
            }
        }
    }

    /// The shared coefficient of a uniform panel; errors for per-element grids,
    /// which the closed-form kernels cannot represent.
    pub fn uniform_coefficient(&self) -> Result<ReflectionCoefficient> {
        match &self.coefficients {
            CoefficientGrid::Uniform(value) => Ok(*value),
            CoefficientGrid::PerElement(_) => Err(Error::NonUniformCoefficients),
        }
    }

    /// Copy of this panel mounted at a different height.
    pub fn with_height_m(&self, h_m: f64) -> Result<Self> {
        Self::new(self.rows, self.cols, self.dx_m, self.dy_m, h_m, self.coefficients.clone())
    }

    /// Copy of this panel with every element set to the given coefficient.
    pub fn with_uniform_coefficient(&self, value: ReflectionCoefficient) -> Self {
        Self {
            coefficients: CoefficientGrid::Uniform(value),
            ..self.clone()
        }
    }
}

/// Fraunhofer distance `2 D^2 / lambda` of the panel aperture, in meters.
///
/// Links whose panel distances fall below this boundary are in the radiating near
/// field, where the far-field array factor is not trustworthy and
/// [`received_power_near_field`] applies.
pub fn near_field_boundary_m(panel: &RisPanel, wavelength_m: f64) -> f64 {
    let d = panel.aperture_diagonal_m();
    2.0 * d * d / wavelength_m
}

/// Full description of one link evaluation.
///
/// `tx_placement` and `rx_placement` locate the antennas relative to the panel
/// center; `geometry` carries the heights and ground separation the phase
/// expansions are written in. The two views overlap, and
/// [`Scenario::placement_residual_m`] reports how far apart they are for a given
/// configuration. `f_direct` is the normalized pattern factor of the direct path in
/// `[0, 1]`; it scales the direct term of the element-sum and near-field kernels.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub geometry: LinkGeometry,
    pub panel: RisPanel,
    pub tx_placement: AngularPlacement,
    pub rx_placement: AngularPlacement,
    pub gains: GainSet,
    pub tx_pattern: PatternModel,
    pub cell_pattern: PatternModel,
    pub rx_pattern: PatternModel,
    pub frequency_hz: f64,
    pub tx_power_dbm: f64,
    pub include_direct: bool,
    pub f_direct: f64,
}

impl Scenario {
    /// Checks the scalar fields; every violation is collected so a caller sees all
    /// of them at once.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            violations.push(format!(
                "carrier frequency must be finite and positive, got {} Hz",
                self.frequency_hz
            ));
        }
        if !self.tx_power_dbm.is_finite() {
            violations.push(format!(
                "transmit power must be finite, got {} dBm",
                self.tx_power_dbm
            ));
        }
        if !self.f_direct.is_finite() || !(0.0..=1.0).contains(&self.f_direct) {
            violations.push(format!(
                "direct-path pattern factor must lie in [0, 1], got {}",
                self.f_direct
            ));
        }
        for (label, pattern) in [
            ("transmit", &self.tx_pattern),
            ("element", &self.cell_pattern),
            ("receive", &self.rx_pattern),
        ] {
            if let Err(err) = pattern.validate() {
                violations.push(format!("{label} pattern: {err}"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidScenario(violations))
        }
    }

    /// Carrier wavelength in meters.
    pub fn wavelength_m(&self) -> f64 {
        wavelength_m(self.frequency_hz)
    }

    /// Transmit power in watts.
    pub fn tx_power_watts(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }

    /// Transmitter position in Cartesian coordinates.
    pub fn tx_position(&self) -> crate::geometry::Point3 {
        self.tx_placement.position(self.geometry.h_t_m())
    }

    /// Receiver position in Cartesian coordinates.
    pub fn rx_position(&self) -> crate::geometry::Point3 {
        self.rx_placement.position(self.geometry.h_r_m())
    }

    /// Difference between the transmitter-receiver distance implied by the
    /// placements and the direct-link distance implied by the geometry, in meters.
    ///
    /// Zero means the two views describe the same layout; the kernels do not
    /// require that, but large residuals usually indicate a misconfigured scenario.
    pub fn placement_residual_m(&self) -> f64 {
        self.tx_position().distance_to(self.rx_position())
            - self.geometry.direct_link_distance_m()
    }
}

/// Received power in watts and dBm plus the path loss in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResult {
    pub pr_watts: f64,
    pub pr_dbm: f64,
    pub pl_db: f64,
}

impl PowerResult {
    /// Wraps a received power in watts; zero maps to `-inf` dBm and `+inf` dB path
    /// loss, which a fully cancelled field legitimately produces.
    pub fn from_watts(tx_power_dbm: f64, pr_watts: f64) -> Self {
        debug_assert!(pr_watts >= 0.0);
        let pr_dbm = if pr_watts > 0.0 {
            10.0 * (pr_watts * 1e3).log10()
        } else {
            f64::NEG_INFINITY
        };
        Self {
            pr_watts,
            pr_dbm,
            pl_db: path_loss_db(tx_power_dbm, pr_dbm),
        }
    }
}

/// Far-field received power in its three phase channels.
#[derive(Debug, Clone, Copy)]
pub struct FarFieldPower {
    /// Panel phase read as the residual after phase compensation.
    pub compensated: PowerResult,
    /// Full two-path rotation `2 pi (d_12 - d_l) / lambda` retained.
    pub exact_phase: PowerResult,
    /// Direct term carries the factor `1 + j delta_phi`; first-order expansion.
    pub small_phase: PowerResult,
}

/// Near-field received power in its three phase channels.
#[derive(Debug, Clone, Copy)]
pub struct NearFieldPower {
    /// Panel phase read as the residual after phase compensation.
    pub compensated: PowerResult,
    /// Full two-path rotation retained on the reflected term.
    pub exact_phase: PowerResult,
    /// Compensated power plus the expanded cross term
    /// `P_t A^2 G_t G_r X^2 / ((d_1 + d_2)^2 d^2)`.
    pub small_phase: PowerResult,
}

/// Single-element received power and its large-distance elevation asymptote.
#[derive(Debug, Clone, Copy)]
pub struct SingleElementPower {
    /// Two-path combination of the direct field and one reflected field.
    pub combined: PowerResult,
    /// Fourth-power distance law `P_t (sqrt(G_t G_r) X / d^2)^2`.
    pub elevation_asymptote: PowerResult,
}

fn check_linear_gain(label: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGains(format!(
            "{label} must be finite and nonnegative in linear scale, got {value}"
        )))
    }
}

fn check_wavelength(wavelength_m: f64) -> Result<()> {
    if wavelength_m.is_finite() && wavelength_m > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!(
            "wavelength must be finite and positive, got {wavelength_m}"
        )))
    }
}

fn check_tx_power(tx_power_dbm: f64) -> Result<()> {
    if tx_power_dbm.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidScenario(vec![format!(
            "transmit power must be finite, got {tx_power_dbm} dBm"
        )]))
    }
}

/// Shared factors of the far-field closed forms: the product of the column and row
/// Dirichlet ratios and the common linear phase offset `c` in meters.
fn array_factor_parts(
    panel: &RisPanel,
    theta_t_rad: f64,
    psi_t_rad: f64,
    theta_r_rad: f64,
    psi_r_rad: f64,
    wavelength_m: f64,
    geometry: &LinkGeometry,
) -> (f64, f64) {
    let s_x = theta_t_rad.sin() * psi_t_rad.cos() + theta_r_rad.sin() * psi_r_rad.cos();
    let s_y = theta_t_rad.sin() * psi_t_rad.sin() + theta_r_rad.sin() * psi_r_rad.sin();
    let u_x = s_x * panel.dx_m() / wavelength_m;
    let u_y = s_y * panel.dy_m() / wavelength_m;
    let ratio = dirichlet_ratio(u_x, panel.cols()) * dirichlet_ratio(u_y, panel.rows());
    let c_m = (panel.h_m() - geometry.h_t_m()) * theta_t_rad.cos()
        + (panel.h_m() - geometry.h_r_m()) * theta_r_rad.cos();
    (ratio, c_m)
}

/// Array factor of the panel under the linearized phase model.
///
/// Closed form of the phasor sum `sum_{n,m} e^{j 2 pi delta_{n,m} / lambda}` with
/// the per-element deviation `delta` from
/// [`crate::geometry::path_sum_deviation`]:
///
/// `AF = M N * dirichlet_ratio(u_x, M) * dirichlet_ratio(u_y, N) * e^{-j 2 pi c / lambda}`
///
/// where `u_x = (sin(theta_t) cos(psi_t) + sin(theta_r) cos(psi_r)) d_x / lambda`,
/// `u_y` is the analogous `y` term, and `c` collects the height offsets. The
/// magnitude is bounded by the element count `M N`, reached at the specular
/// alignment `u_x = u_y = 0`.
pub fn array_factor(
    panel: &RisPanel,
    theta_t_rad: f64,
    psi_t_rad: f64,
    theta_r_rad: f64,
    psi_r_rad: f64,
    wavelength_m: f64,
    geometry: &LinkGeometry,
) -> Complex64 {
    let (ratio, c_m) = array_factor_parts(
        panel,
        theta_t_rad,
        psi_t_rad,
        theta_r_rad,
        psi_r_rad,
        wavelength_m,
        geometry,
    );
    let mn = panel.element_count() as f64;
    mn * ratio * Complex64::from_polar(1.0, -2.0 * PI * c_m / wavelength_m)
}

/// Element-sum received power with exact per-element distances.
///
/// Adds the direct field and one phasor per element:
///
/// `P_r = P_t (lambda / 4 pi)^2 | sqrt(G_t G_r F_direct) / d_l +
///   (sqrt(G_r G_t G F) d_x d_y)^(1/2) / (2 sqrt(pi)) *
///   sum Gamma_{n,m} e^{-j 2 pi (r_t + r_r - d_l) / lambda} / (r_t r_r) |^2`
///
/// where `r_t` and `r_r` are exact distances from the antennas to each element
/// center and `F` is the product of the four pattern factors along the hop. The sum
/// runs in fixed row-major order, so results are deterministic. Errors if an
/// antenna sits exactly on an element center.
pub fn received_power_general(scenario: &Scenario) -> Result<PowerResult> {
    scenario.validate()?;
    let lambda = scenario.wavelength_m();
    let panel = &scenario.panel;
    let geometry = &scenario.geometry;
    let tx = scenario.tx_position();
    let rx = scenario.rx_position();
    let d_l = geometry.direct_link_distance_m();
    let g_t = scenario.gains.g_t_linear();
    let g_r = scenario.gains.g_r_linear();
    let g_cell = scenario.gains.g_cell_linear();
    let prefactor = (g_r * g_t * g_cell * panel.dx_m() * panel.dy_m()).sqrt()
        / (2.0 * PI.sqrt());
    let patterns_unity = matches!(scenario.tx_pattern, PatternModel::Unity)
        && matches!(scenario.cell_pattern, PatternModel::Unity)
        && matches!(scenario.rx_pattern, PatternModel::Unity);

    let mut sum = Complex64::new(0.0, 0.0);
    for n in panel.row_indices() {
        for m in panel.col_indices() {
            let element = element_center(panel, n, m)?;
            let r_t = exact_element_distance(tx, element)?;
            let r_r = exact_element_distance(rx, element)?;
            let pattern = if patterns_unity {
                1.0
            } else {
                combined_pattern(
                    &scenario.tx_pattern,
                    &scenario.cell_pattern,
                    &scenario.rx_pattern,
                    angles_from_points(tx, element)?,
                    angles_from_points(element, tx)?,
                    angles_from_points(element, rx)?,
                    angles_from_points(rx, element)?,
                )
            };
            let gamma = panel.coefficient(n, m)?.value();
            let phase = -2.0 * PI * (r_t + r_r - d_l) / lambda;
            sum += pattern.sqrt() * gamma * Complex64::from_polar(1.0, phase) / (r_t * r_r);
        }
    }

    let direct = if scenario.include_direct {
        (g_t * g_r * scenario.f_direct).sqrt() / d_l
    } else {
        0.0
    };
    let field = Complex64::new(direct, 0.0) + prefactor * sum;
    let base = scenario.tx_power_watts() * (lambda / (4.0 * PI)).powi(2);
    Ok(PowerResult::from_watts(
        scenario.tx_power_dbm,
        base * field.norm_sqr(),
    ))
}

/// Two-ray received power for a single reflection at height `h`.
///
/// `P_r = P_t (lambda / 4 pi)^2 | sqrt(G_a G_b) / d_l +
///   Gamma sqrt(G_c G_d) e^{-j theta} / d_12 |^2`
///
/// with `d_12 = sqrt((2h - h_t - h_r)^2 + d^2)` and the exact two-path rotation
/// `theta = 2 pi (d_12 - d_l) / lambda`. Gains are linear; a zero gain switches the
/// corresponding path off. The reflection coefficient must not exceed unit
/// magnitude. `d = 0` is legal here because the exact rotation stays defined.
pub fn received_power_two_ray(
    tx_power_dbm: f64,
    wavelength_m: f64,
    geometry: &LinkGeometry,
    reflection_height_m: f64,
    direct_gains_linear: (f64, f64),
    reflected_gains_linear: (f64, f64),
    gamma: Complex64,
) -> Result<PowerResult> {
    check_tx_power(tx_power_dbm)?;
    check_wavelength(wavelength_m)?;
    check_linear_gain("direct transmit gain", direct_gains_linear.0)?;
    check_linear_gain("direct receive gain", direct_gains_linear.1)?;
    check_linear_gain("reflected transmit gain", reflected_gains_linear.0)?;
    check_linear_gain("reflected receive gain", reflected_gains_linear.1)?;
    if !reflection_height_m.is_finite() || reflection_height_m < 0.0 {
        return Err(Error::InvalidGeometry(format!(
            "reflection height must be finite and nonnegative, got {reflection_height_m}"
        )));
    }
    if !gamma.re.is_finite() || !gamma.im.is_finite() || gamma.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidReflection(format!(
            "reflection coefficient must be finite with magnitude at most 1, got {gamma}"
        )));
    }
    let d_l = geometry.direct_link_distance_m();
    let d_12 = geometry.reflected_path_length_m(reflection_height_m);
    let theta = 2.0 * PI * (d_12 - d_l) / wavelength_m;
    let direct = (direct_gains_linear.0 * direct_gains_linear.1).sqrt() / d_l;
    let reflected = (reflected_gains_linear.0 * reflected_gains_linear.1).sqrt() / d_12;
    let field = Complex64::new(direct, 0.0)
        + gamma * reflected * Complex64::from_polar(1.0, -theta);
    let base = dbm_to_watts(tx_power_dbm) * (wavelength_m / (4.0 * PI)).powi(2);
    Ok(PowerResult::from_watts(tx_power_dbm, base * field.norm_sqr()))
}

/// Single-element received power and its elevation asymptote.
///
/// The combined channel is the two-ray form with equal gains on both paths. The
/// asymptote is the large-distance limit
///
/// `P_r -> P_t (sqrt(G_t G_r) X / d^2)^2`
///
/// valid for `Gamma = -1` once the two-path phase difference falls well below one
/// radian; it decays with the fourth power of distance and vanishes when the
/// reflection height meets either antenna height. Errors at `d = 0`, where the
/// asymptote is undefined.
pub fn received_power_single_element(
    tx_power_dbm: f64,
    wavelength_m: f64,
    geometry: &LinkGeometry,
    reflection_height_m: f64,
    g_t_linear: f64,
    g_r_linear: f64,
    gamma: Complex64,
) -> Result<SingleElementPower> {
    let combined = received_power_two_ray(
        tx_power_dbm,
        wavelength_m,
        geometry,
        reflection_height_m,
        (g_t_linear, g_r_linear),
        (g_t_linear, g_r_linear),
        gamma,
    )?;
    if geometry.d_m() == 0.0 {
        return Err(Error::ZeroGroundSeparation);
    }
    let x = geometry.elevation_product_m2(reflection_height_m);
    let amplitude = (g_t_linear * g_r_linear).sqrt() * x / (geometry.d_m() * geometry.d_m());
    let asymptote = dbm_to_watts(tx_power_dbm) * amplitude * amplitude;
    Ok(SingleElementPower {
        combined,
        elevation_asymptote: PowerResult::from_watts(tx_power_dbm, asymptote),
    })
}

/// Shared state of the far-field kernels.
struct FarFieldTerms {
    base: f64,
    direct: f64,
    beam: f64,
    phase_rad: f64,
    ratio: f64,
    c_m: f64,
    lambda: f64,
}

fn far_field_terms(scenario: &Scenario) -> Result<FarFieldTerms> {
    scenario.validate()?;
    let coefficient = scenario.panel.uniform_coefficient()?;
    let lambda = scenario.wavelength_m();
    let g_t = scenario.gains.g_t_linear();
    let g_r = scenario.gains.g_r_linear();
    let g_cell = scenario.gains.g_cell_linear();
    let tx = &scenario.tx_placement;
    let rx = &scenario.rx_placement;
    let f_t = scenario.cell_pattern.value(tx.theta_rad(), tx.psi_rad());
    let f_r = scenario.cell_pattern.value(rx.theta_rad(), rx.psi_rad());
    let (ratio, c_m) = array_factor_parts(
        &scenario.panel,
        tx.theta_rad(),
        tx.psi_rad(),
        rx.theta_rad(),
        rx.psi_rad(),
        lambda,
        &scenario.geometry,
    );
    let t = (g_r * g_t * g_cell * f_t * f_r * scenario.panel.dx_m() * scenario.panel.dy_m())
        .sqrt()
        / (2.0 * PI.sqrt() * tx.range_m() * rx.range_m());
    let direct = if scenario.include_direct {
        (g_t * g_r).sqrt() / scenario.geometry.direct_link_distance_m()
    } else {
        0.0
    };
    Ok(FarFieldTerms {
        base: scenario.tx_power_watts() * (lambda / (4.0 * PI)).powi(2),
        direct,
        beam: scenario.panel.element_count() as f64 * coefficient.amplitude() * t,
        phase_rad: coefficient.phase_rad(),
        ratio,
        c_m,
        lambda,
    })
}

/// Far-field received power of a uniform panel, in three phase channels.
///
/// The reflected term is the array-factor beam
/// `M N A T * dirichlet_ratio(u_x, M) * dirichlet_ratio(u_y, N)` with
/// `T = sqrt(G_r G_t G F(theta_t) F(theta_r) d_x d_y) / (2 sqrt(pi) d_1 d_2)`,
/// rotated by the panel phase `phi`. The channels differ in how the direct and
/// reflected terms rotate against each other:
///
/// - `compensated`: `| D + S e^{j phi} |^2`, with `phi` the residual offset after
///   phase alignment,
/// - `exact_phase`: the reflected term additionally rotates by the common offset
///   `e^{-j 2 pi c / lambda}` and the exact two-path rotation,
/// - `small_phase`: the direct term carries `1 + j delta_phi` instead, the
///   first-order image of that rotation.
///
/// The direct term uses a unit pattern factor. Requires a uniform coefficient grid
/// and `d > 0` (the expansion channels divide by `d`).
pub fn received_power_far_field(scenario: &Scenario) -> Result<FarFieldPower> {
    let terms = far_field_terms(scenario)?;
    let delta_phi = scenario
        .geometry
        .phase_difference_rad(scenario.panel.h_m(), terms.lambda)?;
    let exact_rotation = 2.0
        * PI
        * (scenario.geometry.reflected_path_length_m(scenario.panel.h_m())
            - scenario.geometry.direct_link_distance_m())
        / terms.lambda;
    let beam = terms.beam * terms.ratio * Complex64::from_polar(1.0, terms.phase_rad);
    let common = Complex64::from_polar(1.0, -2.0 * PI * terms.c_m / terms.lambda);
    let direct = Complex64::new(terms.direct, 0.0);

    let compensated = direct + beam;
    let exact = direct + beam * common * Complex64::from_polar(1.0, -exact_rotation);
    let small = direct * Complex64::new(1.0, delta_phi) + beam * common;

    let pt = scenario.tx_power_dbm;
    Ok(FarFieldPower {
        compensated: PowerResult::from_watts(pt, terms.base * compensated.norm_sqr()),
        exact_phase: PowerResult::from_watts(pt, terms.base * exact.norm_sqr()),
        small_phase: PowerResult::from_watts(pt, terms.base * small.norm_sqr()),
    })
}

/// Far-field received power at the beam-aligned maximum.
///
/// Drops the Dirichlet ratios (the beam is steered onto the receiver) and adds the
/// expanded elevation cross term:
///
/// `P_r = P_t (lambda / 4 pi)^2 | D + M N A T e^{j phi} |^2 +
///   P_t G_t G_r X^2 / (d_l^2 d^2)`
///
/// The cross term originates from the direct path, so `include_direct = false`
/// removes both the direct field and the cross term. Requires a uniform
/// coefficient grid; the cross term requires `d > 0` when the direct path is on.
pub fn received_power_far_field_max(scenario: &Scenario) -> Result<PowerResult> {
    let terms = far_field_terms(scenario)?;
    let field = Complex64::new(terms.direct, 0.0)
        + terms.beam * Complex64::from_polar(1.0, terms.phase_rad);
    let mut power = terms.base * field.norm_sqr();
    if scenario.include_direct {
        let d = scenario.geometry.d_m();
        if d == 0.0 {
            return Err(Error::ZeroGroundSeparation);
        }
        let x = scenario
            .geometry
            .elevation_product_m2(scenario.panel.h_m());
        let d_l = scenario.geometry.direct_link_distance_m();
        power += scenario.tx_power_watts()
            * scenario.gains.g_t_linear()
            * scenario.gains.g_r_linear()
            * x
            * x
            / (d_l * d_l * d * d);
    }
    Ok(PowerResult::from_watts(scenario.tx_power_dbm, power))
}

/// Near-field received power of a large uniform panel, in three phase channels.
///
/// Inside the Fraunhofer boundary the panel acts as one specular reflector and the
/// reflected field is `A sqrt(G_r G_t) / (d_1 + d_2)` with the placement ranges
/// `d_1`, `d_2`. The channels are:
///
/// - `compensated`: `| D + R e^{j phi} |^2` with
///   `D = sqrt(G_t G_r F_direct) / d_l`,
/// - `exact_phase`: the reflected term additionally rotates by
///   `2 pi (d_1 + d_2 - d_l) / lambda`,
/// - `small_phase`: the compensated power plus the expanded cross term
///   `P_t A^2 G_t G_r X^2 / ((d_1 + d_2)^2 d^2)`.
///
/// Requires a uniform coefficient grid and `d > 0` (the cross term divides by
/// `d`).
pub fn received_power_near_field(scenario: &Scenario) -> Result<NearFieldPower> {
    scenario.validate()?;
    let coefficient = scenario.panel.uniform_coefficient()?;
    if scenario.geometry.d_m() == 0.0 {
        return Err(Error::ZeroGroundSeparation);
    }
    let lambda = scenario.wavelength_m();
    let g_t = scenario.gains.g_t_linear();
    let g_r = scenario.gains.g_r_linear();
    let d_12 = scenario.tx_placement.range_m() + scenario.rx_placement.range_m();
    let d_l = scenario.geometry.direct_link_distance_m();
    let direct = if scenario.include_direct {
        (g_t * g_r * scenario.f_direct).sqrt() / d_l
    } else {
        0.0
    };
    let reflected = coefficient.amplitude() * (g_r * g_t).sqrt() / d_12;
    let rotation = 2.0 * PI * (d_12 - d_l) / lambda;
    let base = scenario.tx_power_watts() * (lambda / (4.0 * PI)).powi(2);

    let phasor = Complex64::from_polar(reflected, coefficient.phase_rad());
    let compensated_field = Complex64::new(direct, 0.0) + phasor;
    let exact_field =
        Complex64::new(direct, 0.0) + phasor * Complex64::from_polar(1.0, -rotation);
    let x = scenario
        .geometry
        .elevation_product_m2(scenario.panel.h_m());
    let cross = scenario.tx_power_watts()
        * coefficient.amplitude()
        * coefficient.amplitude()
        * g_t
        * g_r
        * x
        * x
        / (d_12 * d_12 * scenario.geometry.d_m() * scenario.geometry.d_m());

    let pt = scenario.tx_power_dbm;
    let compensated_watts = base * compensated_field.norm_sqr();
    Ok(NearFieldPower {
        compensated: PowerResult::from_watts(pt, compensated_watts),
        exact_phase: PowerResult::from_watts(pt, base * exact_field.norm_sqr()),
        small_phase: PowerResult::from_watts(pt, compensated_watts + cross),
    })
}
