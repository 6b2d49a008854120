//! Number formatting for CSV cells and reports.

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped,
/// exponent notation outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Exponent after rounding to six digits.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `10 log10(x)`, for presentation only.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Standard error of `10 log10(mean)` by the delta method.
pub fn db_std_error(mean: f64, std_error: f64) -> f64 {
    10.0 / std::f64::consts::LN_10 * std_error / mean
}
