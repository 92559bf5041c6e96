use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed};

use super::{Monomial, Polynomial};

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: Option<&[String]>) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        match names {
            Some(names) => f.write_str(&names[i])?,
            None => write!(f, "x{}", i + 1)?,
        }
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text: descending grlex terms, explicit `*` and `^`, unit
/// coefficients omitted on non-constant terms. Parses back to the same value.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_polynomial(f, self, None)
    }
}

/// Display adapter printing variables by name instead of `x1, x2, ...`.
pub struct Named<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl Polynomial {
    /// `names[i]` is used for variable `i`; must cover the arity.
    pub fn named<'a>(&'a self, names: &'a [String]) -> Named<'a> {
        assert!(names.len() >= self.arity(), "not enough variable names");
        Named { poly: self, names }
    }
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_polynomial(f, self.poly, Some(self.names))
    }
}

fn write_polynomial(f: &mut fmt::Formatter<'_>, p: &Polynomial, names: Option<&[String]>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (k, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let magnitude = c.abs();
        if m.is_one() {
            write!(f, "{magnitude}")?;
        } else {
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            write_monomial(f, m, names)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::poly::parse;
    use alloc::string::ToString;

    #[test]
    fn prints_in_descending_grlex() {
        let p = parse("1 - x1*x2 + 3/2*x1^2*x2 + x2^3", 2).unwrap();
        assert_eq!(p.to_string(), "3/2*x1^2*x2 + x2^3 - x1*x2 + 1");
        assert_eq!(parse("-x1", 1).unwrap().to_string(), "-x1");
        assert_eq!(parse("0", 3).unwrap().to_string(), "0");
        assert_eq!(parse("-7/3", 1).unwrap().to_string(), "-7/3");
    }

    #[test]
    fn print_parse_round_trip() {
        let p = parse("x1^3*x3 - 5/7*x2 + (x1 - 2)^2", 3).unwrap();
        assert_eq!(parse(&p.to_string(), 3).unwrap(), p);
    }
}
