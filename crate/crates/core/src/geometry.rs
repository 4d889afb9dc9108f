//! Link geometry for elevated transceivers and a horizontal reflecting panel.
//!
//! Coordinates are Cartesian meters. The panel lies in the plane `z = h` with its
//! center on the `z` axis and boresight along `+z`. Transceiver positions are given
//! in spherical form relative to the panel center axis: a range, a polar angle
//! measured from boresight, and an azimuth measured from `+x`, after which the
//! antenna height is added to the `z` coordinate. The ground projection of the
//! transmitter-receiver separation is `d`, the antenna heights are `h_t` and `h_r`.
//!
//! Two path-length views coexist. The exact view measures distances between actual
//! points. The linearized view expands each element distance to first order in the
//! element offsets and height offsets, which is what the closed-form array factor is
//! built on. [`path_sum_deviation`] evaluates the linearized deviation in cancelled
//! form so no precision is lost to subtracting near-equal lengths.

use crate::error::{Error, Result};
use crate::pathloss::RisPanel;

/// Point in Cartesian coordinates, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    /// Euclidean distance to another point.
    pub fn distance_to(self, other: Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Vertical link layout: transmitter height, receiver height, ground separation.
///
/// The direct path has length `d_l = sqrt((h_t - h_r)^2 + d^2)`. A reflection at
/// height `h` travels `sqrt((2h - h_t - h_r)^2 + d^2)`, and the two-path phase
/// difference is `4 pi X / (lambda d)` with the elevation product
/// `X = (h - h_t)(h - h_r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    h_t_m: f64,
    h_r_m: f64,
    d_m: f64,
}

impl LinkGeometry {
    /// Builds a layout from heights and ground separation.
    ///
    /// Heights must be finite and nonnegative, the separation finite and
    /// nonnegative. `d = 0` is allowed (transceivers stacked vertically) unless the
    /// heights also coincide, which would put both antennas at the same point.
    pub fn new(h_t_m: f64, h_r_m: f64, d_m: f64) -> Result<Self> {
        if !h_t_m.is_finite() || h_t_m < 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "transmitter height must be finite and nonnegative, got {h_t_m}"
            )));
        }
        if !h_r_m.is_finite() || h_r_m < 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "receiver height must be finite and nonnegative, got {h_r_m}"
            )));
        }
        if !d_m.is_finite() || d_m < 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "ground separation must be finite and nonnegative, got {d_m}"
            )));
        }
        if d_m == 0.0 && h_t_m == h_r_m {
            return Err(Error::InvalidGeometry(
                "transmitter and receiver coincide (d = 0 and equal heights)".into(),
            ));
        }
        Ok(Self { h_t_m, h_r_m, d_m })
    }

    /// Transmitter antenna height in meters.
    pub fn h_t_m(&self) -> f64 {
        self.h_t_m
    }

    /// Receiver antenna height in meters.
    pub fn h_r_m(&self) -> f64 {
        self.h_r_m
    }

    /// Ground-projected transmitter-receiver separation in meters.
    pub fn d_m(&self) -> f64 {
        self.d_m
    }

    /// Length of the direct path, `sqrt((h_t - h_r)^2 + d^2)`.
    pub fn direct_link_distance_m(&self) -> f64 {
        (self.h_t_m - self.h_r_m).hypot(self.d_m)
    }

    /// Length of the two-segment path reflected at height `h`,
    /// `sqrt((2h - h_t - h_r)^2 + d^2)`.
    pub fn reflected_path_length_m(&self, reflection_height_m: f64) -> f64 {
        (2.0 * reflection_height_m - self.h_t_m - self.h_r_m).hypot(self.d_m)
    }

    /// Elevation product `X = (h - h_t)(h - h_r)` in square meters.
    ///
    /// Zero exactly when the reflection height matches either antenna height,
    /// negative when it lies strictly between them.
    pub fn elevation_product_m2(&self, reflection_height_m: f64) -> f64 {
        (reflection_height_m - self.h_t_m) * (reflection_height_m - self.h_r_m)
    }

    /// Two-path phase difference `4 pi X / (lambda d)` in radians.
    ///
    /// This is the first-order expansion of `2 pi (d_1 + d_2 - d_l) / lambda` for a
    /// reflection at height `h`, valid while `|2h - h_t - h_r|` and `|h_t - h_r|`
    /// are small against `d`. Errors with [`Error::ZeroGroundSeparation`] at
    /// `d = 0` and with invalid geometry for a nonpositive wavelength.
    pub fn phase_difference_rad(&self, reflection_height_m: f64, wavelength_m: f64) -> Result<f64> {
        if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "wavelength must be finite and positive, got {wavelength_m}"
            )));
        }
        if self.d_m == 0.0 {
            return Err(Error::ZeroGroundSeparation);
        }
        Ok(4.0 * std::f64::consts::PI * self.elevation_product_m2(reflection_height_m)
            / (wavelength_m * self.d_m))
    }
}

/// Spherical placement of one antenna relative to the panel center axis.
///
/// `range_m` is the distance from the point `(0, 0, antenna height)` used by the
/// closed forms, `theta_rad` the polar angle from panel boresight, `psi_rad` the
/// azimuth from `+x`. Azimuths are stored normalized to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularPlacement {
    range_m: f64,
    theta_rad: f64,
    psi_rad: f64,
}

impl AngularPlacement {
    /// Builds a placement; the range must be positive and finite, the polar angle
    /// must lie in `[0, pi/2)`, and the azimuth must be finite.
    pub fn new(range_m: f64, theta_rad: f64, psi_rad: f64) -> Result<Self> {
        if !(range_m.is_finite() && range_m > 0.0) {
            return Err(Error::InvalidPlacement(format!(
                "range must be finite and positive, got {range_m}"
            )));
        }
        if !theta_rad.is_finite() || !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_rad) {
            return Err(Error::InvalidPlacement(format!(
                "polar angle must lie in [0, pi/2), got {theta_rad}"
            )));
        }
        if !psi_rad.is_finite() {
            return Err(Error::InvalidPlacement(format!(
                "azimuth must be finite, got {psi_rad}"
            )));
        }
        Ok(Self {
            range_m,
            theta_rad,
            psi_rad: psi_rad.rem_euclid(2.0 * std::f64::consts::PI),
        })
    }

    /// Distance from the panel center axis in meters.
    pub fn range_m(&self) -> f64 {
        self.range_m
    }

    /// Polar angle from panel boresight in radians.
    pub fn theta_rad(&self) -> f64 {
        self.theta_rad
    }

    /// Azimuth from `+x` in radians, normalized to `[0, 2 pi)`.
    pub fn psi_rad(&self) -> f64 {
        self.psi_rad
    }

    /// Same placement with a different range; used by parameter sweeps.
    pub fn with_range_m(&self, range_m: f64) -> Result<Self> {
        Self::new(range_m, self.theta_rad, self.psi_rad)
    }

    /// Cartesian position for an antenna at the given height,
    /// `(r sin(theta) cos(psi), r sin(theta) sin(psi), r cos(theta) + height)`.
    pub fn position(&self, antenna_height_m: f64) -> Point3 {
        let (sin_t, cos_t) = self.theta_rad.sin_cos();
        let (sin_p, cos_p) = self.psi_rad.sin_cos();
        Point3 {
            x: self.range_m * sin_t * cos_p,
            y: self.range_m * sin_t * sin_p,
            z: self.range_m * cos_t + antenna_height_m,
        }
    }
}

/// Center of element `(n, m)` of a panel: `((m - 1/2) d_x, (n - 1/2) d_y, h)`.
///
/// Column index `m` runs over `1 - M/2 ..= M/2` and row index `n` over
/// `1 - N/2 ..= N/2`, so the grid is centered on the panel axis. Out-of-range
/// indices error.
pub fn element_center(panel: &RisPanel, n: i32, m: i32) -> Result<Point3> {
    panel.check_index(n, m)?;
    Ok(Point3 {
        x: (m as f64 - 0.5) * panel.dx_m(),
        y: (n as f64 - 0.5) * panel.dy_m(),
        z: panel.h_m(),
    })
}

/// Exact Euclidean distance between an antenna and an element center.
///
/// Errors with [`Error::CoincidentPoints`] when the antenna sits exactly on the
/// element, where the per-element spherical spreading term is undefined.
pub fn exact_element_distance(antenna: Point3, element: Point3) -> Result<f64> {
    let r = antenna.distance_to(element);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(r)
}

/// First-order element distances `(r_t, r_r)` seen from the transmitter and the
/// receiver.
///
/// With element offsets `x_e = (m - 1/2) d_x` and `y_e = (n - 1/2) d_y`:
///
/// `r_t = d_1 - sin(theta_t) cos(psi_t) x_e - sin(theta_t) sin(psi_t) y_e + (h - h_t) cos(theta_t)`
///
/// and the mirrored expression with `d_2`, the receiver angles, and `h - h_r` for
/// `r_r`. The expansion drops terms quadratic in the offsets, so it is accurate for
/// ranges large against both the panel size and the height offsets.
pub fn linearized_element_distances(
    tx: &AngularPlacement,
    rx: &AngularPlacement,
    panel: &RisPanel,
    geometry: &LinkGeometry,
    n: i32,
    m: i32,
) -> Result<(f64, f64)> {
    let e = element_center(panel, n, m)?;
    let h = panel.h_m();
    let (sin_tt, cos_tt) = tx.theta_rad().sin_cos();
    let (sin_tr, cos_tr) = rx.theta_rad().sin_cos();
    let r_t = tx.range_m() - sin_tt * tx.psi_rad().cos() * e.x - sin_tt * tx.psi_rad().sin() * e.y
        + (h - geometry.h_t_m()) * cos_tt;
    let r_r = rx.range_m() - sin_tr * rx.psi_rad().cos() * e.x - sin_tr * rx.psi_rad().sin() * e.y
        + (h - geometry.h_r_m()) * cos_tr;
    Ok((r_t, r_r))
}

/// Deviation `d_1 + d_2 - r_t - r_r` of the linearized two-segment path from the
/// nominal ranges, in meters.
///
/// Evaluated in the cancelled form
/// `s_x x_e + s_y y_e - c` with
/// `s_x = sin(theta_t) cos(psi_t) + sin(theta_r) cos(psi_r)`,
/// `s_y = sin(theta_t) sin(psi_t) + sin(theta_r) sin(psi_r)` and
/// `c = (h - h_t) cos(theta_t) + (h - h_r) cos(theta_r)`,
/// so millimeter-scale element terms are not lost against hundred-meter ranges.
/// Multiplying by `2 pi / lambda` gives the per-element phase of the linearized
/// element-sum field.
pub fn path_sum_deviation(
    tx: &AngularPlacement,
    rx: &AngularPlacement,
    panel: &RisPanel,
    geometry: &LinkGeometry,
    n: i32,
    m: i32,
) -> Result<f64> {
    let e = element_center(panel, n, m)?;
    let h = panel.h_m();
    let (sin_tt, cos_tt) = tx.theta_rad().sin_cos();
    let (sin_tr, cos_tr) = rx.theta_rad().sin_cos();
    let s_x = sin_tt * tx.psi_rad().cos() + sin_tr * rx.psi_rad().cos();
    let s_y = sin_tt * tx.psi_rad().sin() + sin_tr * rx.psi_rad().sin();
    let c = (h - geometry.h_t_m()) * cos_tt + (h - geometry.h_r_m()) * cos_tr;
    Ok(s_x * e.x + s_y * e.y - c)
}
