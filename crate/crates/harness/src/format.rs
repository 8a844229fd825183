//! Number formatting shared by the result store and the tables.
//!
//! Everything goes through Rust's own `{:e}` formatting, which rounds
//! correctly and does not depend on the platform C library, so output is
//! identical across machines.

/// Scientific notation with `digits` digits after the point and a signed
/// exponent without padding: `2.45960e-3`, `1.00000e+0`.
pub fn scientific(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let s = format!("{v:.digits$e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// Six significant digits, the store format.
pub fn store_value(v: f64) -> String {
    scientific(v, 5)
}

/// `median (IQR)` the way the tables print it: `2.4596e-3 (1.60e-4)`.
pub fn median_iqr_cell(median: f64, iqr: f64) -> String {
    format!("{} ({})", scientific(median, 4), scientific(iqr, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_format() {
        assert_eq!(store_value(2.4596e-3), "2.45960e-3");
        assert_eq!(store_value(500.0), "5.00000e+2");
        assert_eq!(store_value(0.0), "0.00000e+0");
        assert_eq!(store_value(-1.234567), "-1.23457e+0");
        assert_eq!(store_value(123456789.0), "1.23457e+8");
        assert_eq!(store_value(f64::NAN), "NaN");
    }

    #[test]
    fn round_trip_is_stable() {
        for v in [1.0 / 3.0, 2.0e-9, 7.77777777e5, 0.5] {
            let once: f64 = store_value(v).parse().unwrap();
            assert_eq!(store_value(once), store_value(v));
        }
    }

    #[test]
    fn table_cell() {
        assert_eq!(median_iqr_cell(2.4596e-3, 1.6e-4), "2.4596e-3 (1.60e-4)");
        assert_eq!(median_iqr_cell(1.2466, 0.0), "1.2466e+0 (0.00e+0)");
    }
}
