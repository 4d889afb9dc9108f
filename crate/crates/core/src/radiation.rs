//! Reflection coefficients, radiation patterns, and antenna gains.
//!
//! Panel elements are passive, so reflection amplitudes live in `[0, 1]`. Patterns
//! are normalized power patterns with values in `[0, 1]`; the built-in family is
//! `cos^q(theta)` over the upper hemisphere, which covers the omnidirectional case
//! at `q = 0`. Gains enter the public interfaces in dB and are converted to linear
//! scale exactly once, inside [`GainSet::from_db`].

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::pathloss::db_to_linear;
use num_complex::Complex64;

/// Polar reflection coefficient `A e^{j phi}` of a passive element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoefficient {
    amplitude: f64,
    phase_rad: f64,
}

impl ReflectionCoefficient {
    /// Builds a coefficient; the amplitude must lie in `[0, 1]` (passive element)
    /// and the phase must be finite. Phases are stored normalized to `[0, 2 pi)`.
    pub fn new(amplitude: f64, phase_rad: f64) -> Result<Self> {
        if !amplitude.is_finite() || !(0.0..=1.0).contains(&amplitude) {
            return Err(Error::InvalidReflection(format!(
                "amplitude must lie in [0, 1], got {amplitude}"
            )));
        }
        if !phase_rad.is_finite() {
            return Err(Error::InvalidReflection(format!(
                "phase must be finite, got {phase_rad}"
            )));
        }
        Ok(Self {
            amplitude,
            phase_rad: phase_rad.rem_euclid(2.0 * std::f64::consts::PI),
        })
    }

    /// Reflection amplitude `A`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Reflection phase in radians, normalized to `[0, 2 pi)`.
    pub fn phase_rad(&self) -> f64 {
        self.phase_rad
    }

    /// Complex value `A e^{j phi}`.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase_rad)
    }
}

/// Normalized power pattern of an antenna or element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternModel {
    /// Unit pattern, `F = 1` everywhere; the omnidirectional reference.
    Unity,
    /// `F(theta) = cos^q(theta)` on `theta in [0, pi/2)` and zero behind the
    /// aperture plane. `q = 0` reproduces [`PatternModel::Unity`] over the
    /// front hemisphere.
    CosinePower { exponent: f64 },
}

impl PatternModel {
    /// Checks the pattern parameters; the cosine exponent must be finite and
    /// nonnegative.
    pub fn validate(&self) -> Result<()> {
        match self {
            PatternModel::Unity => Ok(()),
            PatternModel::CosinePower { exponent } => {
                if exponent.is_finite() && *exponent >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidPattern(format!(
                        "cosine exponent must be finite and nonnegative, got {exponent}"
                    )))
                }
            }
        }
    }

    /// Pattern value at a polar angle from boresight; the azimuth is accepted for
    /// interface symmetry but both built-in patterns are azimuth independent.
    pub fn value(&self, theta_rad: f64, _psi_rad: f64) -> f64 {
        match self {
            PatternModel::Unity => 1.0,
            PatternModel::CosinePower { exponent } => {
                if theta_rad < std::f64::consts::FRAC_PI_2 {
                    theta_rad.cos().powf(*exponent)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Transmitter, receiver, and per-element gains in linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet {
    g_t: f64,
    g_r: f64,
    g_cell: f64,
}

impl GainSet {
    /// Converts dB gains to linear scale; all three must be finite.
    pub fn from_db(g_t_db: f64, g_r_db: f64, g_cell_db: f64) -> Result<Self> {
        for (label, value) in [("g_t", g_t_db), ("g_r", g_r_db), ("g_cell", g_cell_db)] {
            if !value.is_finite() {
                return Err(Error::InvalidGains(format!(
                    "{label} must be finite in dB, got {value}"
                )));
            }
        }
        Ok(Self {
            g_t: db_to_linear(g_t_db),
            g_r: db_to_linear(g_r_db),
            g_cell: db_to_linear(g_cell_db),
        })
    }

    /// Transmitter gain, linear.
    pub fn g_t_linear(&self) -> f64 {
        self.g_t
    }

    /// Receiver gain, linear.
    pub fn g_r_linear(&self) -> f64 {
        self.g_r
    }

    /// Per-element gain, linear.
    pub fn g_cell_linear(&self) -> f64 {
        self.g_cell
    }
}

/// Polar and azimuth angles `(theta, psi)` of the direction from one point to
/// another, measured from `+z` and `+x` respectively.
///
/// Errors with [`Error::CoincidentPoints`] when the points coincide. The azimuth is
/// normalized to `[0, 2 pi)`.
pub fn angles_from_points(from: Point3, to: Point3) -> Result<(f64, f64)> {
    let r = from.distance_to(to);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let cos_theta = ((to.z - from.z) / r).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let psi = (to.y - from.y)
        .atan2(to.x - from.x)
        .rem_euclid(2.0 * std::f64::consts::PI);
    Ok((theta, psi))
}

/// Combined normalized pattern along a transmitter, element, receiver hop.
///
/// Multiplies the transmit pattern toward the element, the element pattern toward
/// the transmitter and toward the receiver, and the receive pattern toward the
/// element. Each argument pair is `(theta, psi)` for the respective direction.
#[allow(clippy::too_many_arguments)]
pub fn combined_pattern(
    tx: &PatternModel,
    cell: &PatternModel,
    rx: &PatternModel,
    tx_to_element: (f64, f64),
    element_to_tx: (f64, f64),
    element_to_rx: (f64, f64),
    rx_to_element: (f64, f64),
) -> f64 {
    tx.value(tx_to_element.0, tx_to_element.1)
        * cell.value(element_to_tx.0, element_to_tx.1)
        * cell.value(element_to_rx.0, element_to_rx.1)
        * rx.value(rx_to_element.0, rx_to_element.1)
}
