//! Locale-free number formatting shared by every output format.

/// `x` with 15 significant digits, in the style of C's `%.15g`: positional
/// for moderate exponents, scientific otherwise, trailing zeros dropped.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sig15(4.0), "4");
        assert_eq!(sig15(-0.0), "0");
        assert_eq!(sig15(0.1), "0.1");
        assert_eq!(sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(sig15(2.0f64.sqrt() * 2.0), "2.82842712474619");
        assert_eq!(sig15(1.5e-20), "1.5e-20");
        assert_eq!(sig15(123456789.0), "123456789");
        assert_eq!(sig15(9.999999999999999e14), "1e15");
        assert_eq!(sig15(0.99999999), "0.99999999");
    }
}
