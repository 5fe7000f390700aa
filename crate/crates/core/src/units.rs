//! Conversions between logarithmic configuration units and the linear SI
//! quantities every formula works in.

use crate::error::GameError;
use crate::math::{log10, powf};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    DbmToWatts,
    WattsToDbm,
    DbToLinear,
    LinearToDb,
}

pub fn power_unit_convert(value: f64, direction: Conversion) -> Result<f64, GameError> {
    if !value.is_finite() {
        return Err(GameError::Domain { quantity: "unit conversion input", value });
    }
    match direction {
        Conversion::DbmToWatts => Ok(dbm_to_watts(value)),
        Conversion::WattsToDbm => watts_to_dbm(value),
        Conversion::DbToLinear => Ok(db_to_linear(value)),
        Conversion::LinearToDb => linear_to_db(value),
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    powf(10.0, dbm / 10.0) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> Result<f64, GameError> {
    if watts <= 0.0 {
        return Err(GameError::Domain { quantity: "power in watts", value: watts });
    }
    Ok(10.0 * log10(watts / 1e-3))
}

pub fn db_to_linear(db: f64) -> f64 {
    powf(10.0, db / 10.0)
}

pub fn linear_to_db(ratio: f64) -> Result<f64, GameError> {
    if ratio <= 0.0 {
        return Err(GameError::Domain { quantity: "linear ratio", value: ratio });
    }
    Ok(10.0 * log10(ratio))
}

/// Free-space wavelength of a carrier, meters.
pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_dbm_is_one_milliwatt() {
        assert_eq!(dbm_to_watts(0.0), 1e-3);
    }

    #[test]
    fn backscatter_threshold_in_watts() {
        // 10^(-1.8) * 1e-3, 40-digit reference
        let w = dbm_to_watts(-18.0);
        assert!((w - 1.584_893_192_461_113_5e-5).abs() / w < 1e-14);
    }

    #[test]
    fn ten_db_is_ten() {
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-14);
    }

    #[test]
    fn log_directions_reject_non_positive() {
        assert!(matches!(watts_to_dbm(0.0), Err(GameError::Domain { .. })));
        assert!(matches!(
            power_unit_convert(-1.0, Conversion::LinearToDb),
            Err(GameError::Domain { .. })
        ));
        assert!(power_unit_convert(f64::NAN, Conversion::DbToLinear).is_err());
    }

    proptest! {
        #[test]
        fn dbm_round_trip(dbm in -150.0f64..60.0) {
            let back = watts_to_dbm(dbm_to_watts(dbm)).unwrap();
            prop_assert!((back - dbm).abs() <= 1e-12 * dbm.abs().max(1.0));
        }

        #[test]
        fn watts_round_trip(exp in -15.0f64..2.0) {
            let w = powf(10.0, exp);
            let back = dbm_to_watts(watts_to_dbm(w).unwrap());
            prop_assert!((back - w).abs() / w <= 1e-12);
        }
    }
}
