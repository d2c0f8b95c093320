//! Six-significant-digit float rendering, shared by every text output.

/// Formats like C's `%.6g`: six significant digits, trailing zeros removed,
/// scientific notation outside `1e-4 ≤ |x| < 1e6`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Rounds to the value `sig6` prints, for structured (JSON) outputs.
pub fn round6(x: f64) -> f64 {
    sig6(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(0.0075), "0.0075");
        assert_eq!(sig6(2.0 / 3.0), "0.666667");
        assert_eq!(sig6(1.0 / 7.0), "0.142857");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e+06");
        assert_eq!(sig6(0.00001234), "1.234e-05");
        assert_eq!(sig6(-0.5), "-0.5");
        assert_eq!(sig6(999999.5), "1e+06");
        assert_eq!(round6(1.0 / 3.0), 0.333333);
    }
}
