//! Special functions behind the catalog normalizers.

mod bessel;
mod gamma;

use serde::Serialize;

pub use bessel::{bessel_i0, bessel_k, ln_bessel_i0_scaled, ln_bessel_k_scaled, DEBYE_MIN_ORDER};
pub use gamma::{
    ln_abs_gamma_complex_sq, ln_beta, ln_gamma, ln_gamma_complex_correction, ln_gamma_correction,
};

pub(crate) use bessel::{ln_bessel_i0_scaled_unchecked, ln_bessel_k_scaled_unchecked};
pub(crate) use gamma::{ln_beta_unchecked, ln_gamma_correction_unchecked, ln_gamma_unchecked};

/// A special-function value carried on both the linear and the log scale.
///
/// `log_value` is always populated and is the authoritative field; `value`
/// may have overflowed to infinity or underflowed to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialValue {
    pub value: f64,
    pub log_value: f64,
}

impl SpecialValue {
    pub fn from_log(log_value: f64) -> Self {
        Self {
            value: log_value.exp(),
            log_value,
        }
    }
}
