//! Received power and path loss models for radio links assisted by reconfigurable
//! reflecting panels.
//!
//! The crate models a link in which an elevated transmitter reaches an elevated
//! receiver both directly and through a flat panel of passive reflecting elements
//! mounted in the horizontal plane `z = h`. Five model families are provided:
//!
//! - an element-sum model that adds the direct field and one phasor per panel
//!   element with exact per-element distances ([`pathloss::received_power_general`]),
//! - a two-ray model for a single ideal reflection ([`pathloss::received_power_two_ray`]),
//! - a single-element model with its large-distance elevation asymptote
//!   ([`pathloss::received_power_single_element`]),
//! - far-field closed forms built on the panel array factor
//!   ([`pathloss::received_power_far_field`], [`pathloss::received_power_far_field_max`]),
//! - a near-field closed form for panels larger than the Fraunhofer limit
//!   ([`pathloss::received_power_near_field`]).
//!
//! The closed forms report three channels each: a `compensated` channel in which the
//! panel phase is the residual offset left after phase alignment, an `exact_phase`
//! channel that keeps the full two-path phase rotation, and a `small_phase` channel
//! that applies the first-order expansion of that rotation. The expansion is only
//! meaningful while the two-path phase difference stays well below one radian; the
//! kernels report all three so the caller can see when the regimes diverge.
//!
//! [`sweep`] evaluates grids of scenarios over one swept parameter and ships the
//! preset grids used by the bundled experiments. All numerics are plain `f64` with
//! deterministic serial summation, so identical inputs produce identical bytes.

pub mod error;
pub mod geometry;
pub mod pathloss;
pub mod radiation;
pub mod sweep;

pub use error::{Error, Result};

// The reflection coefficients in the public API are complex phasors; re-export
// the crate they come from so callers stay on the same version.
pub use num_complex;

/// Speed of light in vacuum in meters per second.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Free-space wavelength `c / f` in meters for a carrier frequency in hertz.
///
/// # Example
///
/// 10.5 GHz maps to roughly 28.55 mm.
pub fn wavelength_m(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT_M_PER_S / frequency_hz
}
