//! C `printf("%.16e")` formatting.

/// Formats like `%.16e`: sixteen fractional digits and an exponent with a
/// sign and at least two digits (`1.0000000000000000e+00`).
pub fn sci16(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.unsigned_abs())
}

#[cfg(test)]
mod tests {
    use super::sci16;

    #[test]
    fn matches_c_printf() {
        assert_eq!(sci16(1.0), "1.0000000000000000e+00");
        assert_eq!(sci16(0.0), "0.0000000000000000e+00");
        assert_eq!(sci16(-0.0), "-0.0000000000000000e+00");
        assert_eq!(sci16(-0.0709467328567679), "-7.0946732856767905e-02");
        assert_eq!(sci16(1e300), "1.0000000000000001e+300");
        assert_eq!(sci16(2.5e-310), "2.5000000000000171e-310");
        assert_eq!(sci16(f64::NAN), "nan");
        assert_eq!(sci16(f64::NEG_INFINITY), "-inf");
    }
}
