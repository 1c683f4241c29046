//! Stable text output: floats with 12 significant digits, CSV rows.

/// `x` rounded to 12 significant digits, trailing zeros removed; plain
/// notation for exponents in `[-5, 12)`, scientific otherwise.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.11e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    if !(-5..12).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() { format!("{sign}{head}e{exp}") } else { format!("{sign}{head}.{tail}e{exp}") };
    }
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

/// One CSV line from already formatted fields.
pub fn row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    fields.into_iter().map(|f| f.as_ref().to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats() {
        assert_eq!(float(0.0), "0");
        assert_eq!(float(-0.0), "0");
        assert_eq!(float(1.0), "1");
        assert_eq!(float(-1.23456789012345), "-1.23456789012");
        assert_eq!(float(1234.5), "1234.5");
        assert_eq!(float(1e-3), "0.001");
        assert_eq!(float(1.5e-9), "1.5e-9");
        assert_eq!(float(2.5e15), "2.5e15");
        assert_eq!(float(100.0), "100");
        assert_eq!(float(f64::NAN), "nan");
    }

    #[test]
    fn round_trip_within_precision() {
        for x in [std::f64::consts::PI, 73.82741234567, -44.4132, 1e-7, 6.02e23] {
            let y: f64 = float(x).parse().unwrap();
            assert!((x - y).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn csv_row() {
        assert_eq!(row(["a", "b", "c"]), "a,b,c");
    }
}
