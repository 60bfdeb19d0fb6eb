//! Deterministic number formatting for reports: money with two decimals,
//! tonnage with none, welfare in scientific notation with three significant
//! digits. Identical inputs produce byte-identical output.

use crate::Real;

pub fn money(v: Real) -> String {
    let s = format!("{:.2}", v);
    // Avoid the "-0.00" artifact.
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

pub fn quantity(v: Real) -> String {
    let s = format!("{:.0}", v);
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

pub fn welfare(v: Real) -> String {
    format!("{:.2e}", v)
}

pub fn percent(v: Real) -> String {
    format!("{:.1}", v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_are_fixed() {
        assert_eq!(money(43.7039), "43.70");
        assert_eq!(money(-57.126), "-57.13");
        assert_eq!(quantity(72846.99), "72847");
        assert_eq!(welfare(18554130.9), "1.86e7");
        assert_eq!(welfare(-24803331.0), "-2.48e7");
        assert_eq!(percent(72.984), "73.0");
        assert_eq!(money(-0.0000001), "0.00");
    }
}
