//! Number formatting shared by the text writers.

/// Formats `x` rounded to `digits` significant digits, printed in the
/// shortest form that parses back to the rounded value.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses");
    plain_or_exp(rounded)
}

/// Shortest round-trip representation of `x`.
pub fn exact(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    plain_or_exp(x)
}

fn plain_or_exp(x: f64) -> String {
    let a = x.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Keyword-deck style real: shortest round-trip form, with a trailing `.`
/// on integral values (`10000.`).
pub fn deck_real(x: f64) -> String {
    let s = exact(x);
    if s.contains(['.', 'e', 'E', 'i', 'N']) {
        s
    } else {
        format!("{s}.")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.1, 9), "0.1");
        assert_eq!(sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(sig(123456789012.0, 9), "123456789000");
        assert_eq!(sig(-2.5e-7, 9), "-2.5e-7");
        assert_eq!(sig(0.0, 9), "0");
    }

    #[test]
    fn deck_reals() {
        assert_eq!(deck_real(10000.0), "10000.");
        assert_eq!(deck_real(0.3), "0.3");
        assert_eq!(deck_real(4.5e-10), "4.5e-10");
        assert_eq!(deck_real(-1.0), "-1.");
        assert_eq!(deck_real(0.0), "0.");
        let x = 0.1 + 0.2;
        assert_eq!(deck_real(x).parse::<f64>().unwrap(), x);
    }
}
