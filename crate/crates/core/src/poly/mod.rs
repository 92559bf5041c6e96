//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a map from exponent vectors to nonzero rational
//! coefficients. Terms are kept in graded lexicographic order, which fixes the
//! printed form and the column order of every matrix built from polynomials.
//! Variables are addressed by zero-based index in the API and printed as
//! `x1`, `x2`, ... in text.

mod monomial;
mod parse;
mod print;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use monomial::{monomials_of_degree, monomials_up_to, Monomial};
pub use parse::parse;
pub use print::Named;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `numer / denom` as an exact rational. Panics if `denom == 0`.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Degree of a polynomial; the zero polynomial has degree [`Degree::NegInfinity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(arity), c)
    }

    /// The variable with zero-based `index`. Panics if `index >= arity`.
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable index {index} out of range for arity {arity}");
        Self::monomial(Monomial::var(arity, index), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let arity = m.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { arity, terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(arity);
        for (m, c) in terms {
            if m.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: m.arity(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending grlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.arity))
    }

    /// Largest term in grlex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            })
        }
    }

    fn check_var(&self, index: usize) -> Result<()> {
        if index < self.arity {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange {
                index: index + 1,
                arity: self.arity,
            })
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `m` with coefficient `c`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.arity);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the zero-based variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Polynomial> {
        self.check_var(index)?;
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exponent(index);
            if e > 0 {
                out.add_term(m.lowered(index), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        Ok(out)
    }

    /// Antiderivative in variable `index` with zero integration constant:
    /// `x^k -> x^(k+1) / (k+1)`.
    pub fn antiderivative(&self, index: usize) -> Result<Polynomial> {
        self.check_var(index)?;
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let mut raised = m.clone();
            raised.exponents_mut()[index] += 1;
            let k1 = Rational::from_integer(BigInt::from(raised.exponent(index)));
            out.add_term(raised, c / k1);
        }
        Ok(out)
    }

    /// Evaluates `self` at `(images[0], ..., images[n-1])`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: images.len(),
            });
        }
        let target = match images.first() {
            Some(g) => g.arity,
            None => {
                // arity-0 ring: only constants
                return Ok(self.clone());
            }
        };
        if let Some(bad) = images.iter().find(|g| g.arity != target) {
            return Err(Error::ArityMismatch {
                left: target,
                right: bad.arity,
            });
        }
        // powers[i][e] = images[i]^e, built on demand
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|_| alloc::vec![Polynomial::one(target)]).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    pub fn degree_in(&self, index: usize) -> Degree {
        self.terms
            .keys()
            .map(|m| m.exponent(index))
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |m| Degree::Finite(m.degree()))
    }

    /// Coefficient of `x_index^power`, as a polynomial in the remaining variables
    /// (the variable itself keeps exponent zero).
    pub fn coefficient_of_power(&self, index: usize, power: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            if m.exponent(index) == power {
                let mut stripped = m.clone();
                stripped.exponents_mut()[index] = 0;
                out.add_term(stripped, c.clone());
            }
        }
        out
    }

    /// Returns the rational value if `self` is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Division by a single divisor with grlex leading-term reduction.
    /// The remainder has no term divisible by the divisor's leading monomial.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_arity(divisor)?;
        let (lead_m, lead_c) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::InvalidParams("division by the zero polynomial".into())),
        };
        let mut quotient = Polynomial::zero(self.arity);
        let mut remainder = Polynomial::zero(self.arity);
        let mut work = self.clone();
        while let Some((m, c)) = work.terms.pop_last() {
            match m.checked_div(&lead_m) {
                Some(qm) => {
                    let qc = &c / &lead_c;
                    // subtract qc*qm*divisor, minus its leading term (already popped)
                    for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                        work.add_term(dm.mul(&qm), -(&qc * dc));
                    }
                    quotient.add_term(qm, qc);
                }
                None => remainder.add_term(m, c),
            }
        }
        Ok((quotient, remainder))
    }

    /// Multiplies through by the least common multiple of the denominators and
    /// divides by the content, so the leading coefficient is a positive integer.
    pub fn primitive_part(&self) -> Polynomial {
        use num_integer::Integer;
        let Some((_, lead)) = self.leading_term() else {
            return self.clone();
        };
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        for c in self.terms.values() {
            let v = (c * Rational::from_integer(lcm.clone())).to_integer();
            gcd = gcd.gcd(&v);
        }
        let mut factor = Rational::new(lcm, gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Re-embeds into a ring of `new_arity` variables, sending variable `i` to `map[i]`.
    pub fn rename(&self, new_arity: usize, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= new_arity) {
            return Err(Error::VariableOutOfRange {
                index: bad + 1,
                arity: new_arity,
            });
        }
        let mut out = Polynomial::zero(new_arity);
        for (m, c) in &self.terms {
            let mut e = alloc::vec![0u32; new_arity];
            for (i, &k) in m.exponents().iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on arity mismatch; use [`Polynomial::try_add`] to handle it.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(s: &str, n: usize) -> Polynomial {
        parse(s, n).unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        let lhs = &p("1 - x1*x2", 2) * &p("1 + x1*x2", 2);
        assert_eq!(lhs, p("1 - x1^2*x2^2", 2));
        assert_eq!(&p("x1", 1) * &p("x1", 1), p("x1^2", 1));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let q = p("3/2*x1^2*x3 - x2 + 7", 3);
        assert!((&q + &(-&q)).is_zero());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let err = p("x1", 1).try_add(&p("x1", 2)).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { left: 1, right: 2 });
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(p("x1^3", 1).partial_derivative(0).unwrap(), p("3*x1^2", 1));
        assert!(p("5", 2).partial_derivative(0).unwrap().is_zero());
        assert_eq!(p("x1*x2^2", 2).partial_derivative(1).unwrap(), p("2*x1*x2", 2));
        assert!(matches!(
            p("x1", 2).partial_derivative(2),
            Err(Error::VariableOutOfRange { index: 3, arity: 2 })
        ));
    }

    #[test]
    fn substitution_examples() {
        let q = p("x1^2*x3 - 4*x2 + 1", 3);
        let id: Vec<_> = (0..3).map(|i| Polynomial::var(3, i)).collect();
        assert_eq!(q.substitute(&id).unwrap(), q);

        let shift = vec![p("x1", 3), p("x2", 3), p("x3 + 5", 3)];
        assert_eq!(p("x3", 3).substitute(&shift).unwrap(), p("x3 + 5", 3));

        let swap = vec![p("x2", 2), p("x1", 2)];
        assert_eq!(p("x1*x2", 2).substitute(&swap).unwrap(), p("x1*x2", 2));

        assert!(matches!(
            q.substitute(&swap),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn degrees() {
        assert_eq!(p("x1^2*x2", 2).degree_in(0), Degree::Finite(2));
        assert_eq!(Polynomial::zero(2).total_degree(), Degree::NegInfinity);
        assert_eq!(p("1 - x1*x2^3", 2).total_degree(), Degree::Finite(4));
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(Degree::NegInfinity + Degree::Finite(3), Degree::NegInfinity);
    }

    #[test]
    fn division_by_single_divisor() {
        let a = p("x1^3*x2 - x1*x2 + 2", 2);
        let b = p("x1^2 - 1", 2);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p("x1*x2", 2));
        assert_eq!(r, p("2", 2));
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let q = p("x1^4*x2 + 3*x1 - 1/2", 2);
        let back = q.antiderivative(0).unwrap().partial_derivative(0).unwrap();
        assert_eq!(back, q);
        assert_eq!(p("x1^2", 1).antiderivative(0).unwrap(), p("1/3*x1^3", 1));
    }

    #[test]
    fn primitive_part_clears_denominators() {
        assert_eq!(p("-1/2*x1 + 3/4", 1).primitive_part(), p("2*x1 - 3", 1));
    }

    #[test]
    fn coefficient_of_power_strips_variable() {
        let q = p("3*x1^2*x2 + x1^2 + x2", 2);
        assert_eq!(q.coefficient_of_power(0, 2), p("3*x2 + 1", 2));
        assert_eq!(q.coefficient_of_power(0, 0), p("x2", 2));
    }
}
