//! Polynomial derivations `d = c_1 ∂_1 + ... + c_n ∂_n` and the constructors
//! for the Jordan-type family
//! `d_n = (1 - x1*x2^α) ∂_1 + x1^m ∂_2 + x2 ∂_3 + ... + x_{n-1} ∂_n`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Degree, Monomial, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    coefficients: Vec<Polynomial>,
}

impl Derivation {
    /// One coefficient per variable; every coefficient must live in the ring
    /// with that many variables.
    pub fn new(coefficients: Vec<Polynomial>) -> Result<Self> {
        let n = coefficients.len();
        if n == 0 {
            return Err(Error::InvalidParams("a derivation needs at least one variable".into()));
        }
        if let Some(bad) = coefficients.iter().find(|c| c.arity() != n) {
            return Err(Error::ArityMismatch {
                left: n,
                right: bad.arity(),
            });
        }
        Ok(Derivation { coefficients })
    }

    /// `∂/∂x_{index+1}` on a ring of `arity` variables.
    pub fn partial(arity: usize, index: usize) -> Self {
        let coefficients = (0..arity)
            .map(|i| {
                if i == index {
                    Polynomial::one(arity)
                } else {
                    Polynomial::zero(arity)
                }
            })
            .collect();
        Derivation { coefficients }
    }

    /// The Euler field `x1 ∂_1 + ... + xn ∂_n`.
    pub fn euler(arity: usize) -> Self {
        Derivation {
            coefficients: (0..arity).map(|i| Polynomial::var(arity, i)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    /// `d(x_{index+1})`.
    pub fn coefficient(&self, index: usize) -> &Polynomial {
        &self.coefficients[index]
    }

    /// Largest total degree among the coefficients.
    pub fn max_coefficient_degree(&self) -> Degree {
        self.coefficients
            .iter()
            .map(Polynomial::total_degree)
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: p.arity(),
            });
        }
        let mut out = Polynomial::zero(self.arity());
        for (m, c) in p.terms() {
            let image = self.apply_monomial(m);
            for (tm, tc) in image.terms() {
                out.add_term(tm.clone(), tc * c);
            }
        }
        Ok(out)
    }

    /// `d(x^e)` for a single monomial with unit coefficient.
    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity());
        for (i, c) in self.coefficients.iter().enumerate() {
            let e = m.exponent(i);
            if e == 0 || c.is_zero() {
                continue;
            }
            let lowered = m.lowered(i);
            let factor = Rational::from_integer(BigInt::from(e));
            for (cm, cc) in c.terms() {
                out.add_term(cm.mul(&lowered), cc * &factor);
            }
        }
        out
    }

    /// `true` if `d(x_i)` is the zero polynomial for some variable.
    pub fn kills_a_variable(&self) -> bool {
        self.coefficients.iter().any(Polynomial::is_zero)
    }

    /// The same derivation after renaming variable `i` to `perm[i]`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Derivation> {
        let n = self.arity();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        let mut seen = alloc::vec![false; n];
        for &j in perm {
            if j >= n || seen[j] {
                return Err(Error::InvalidParams(format!("{perm:?} is not a permutation")));
            }
            seen[j] = true;
        }
        let mut coefficients = alloc::vec![Polynomial::zero(n); n];
        for (i, c) in self.coefficients.iter().enumerate() {
            coefficients[perm[i]] = c.rename(n, perm)?;
        }
        Ok(Derivation { coefficients })
    }
}

/// Parameters `(n, m, α)` of the family `d_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub n: usize,
    pub m: u32,
    pub alpha: u32,
}

impl FamilyParams {
    /// Requires `n >= 2`, `m >= 1`, `alpha >= 1`. `m = 1` is accepted but lies
    /// outside the range where the simplicity and no-unit results hold.
    pub fn new(n: usize, m: u32, alpha: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        if m < 1 {
            return Err(Error::InvalidParams(format!("m must be at least 1, got {m}")));
        }
        if alpha < 1 {
            return Err(Error::InvalidParams(format!("alpha must be at least 1, got {alpha}")));
        }
        Ok(FamilyParams { n, m, alpha })
    }

    /// Whether `m >= 2`, the range covered by the simplicity theorem.
    pub fn in_theorem_range(&self) -> bool {
        self.m >= 2
    }
}

/// `d_n = (1 - x1*x2^α) ∂_1 + x1^m ∂_2 + x2 ∂_3 + ... + x_{n-1} ∂_n`.
pub fn jordan_derivation(params: FamilyParams) -> Derivation {
    let FamilyParams { n, m, alpha } = params;
    let x = |i: usize| Polynomial::var(n, i);
    let mut coefficients = Vec::with_capacity(n);
    coefficients.push(&Polynomial::one(n) - &(&x(0) * &x(1).pow(alpha)));
    coefficients.push(x(0).pow(m));
    for i in 2..n {
        coefficients.push(x(i - 1));
    }
    Derivation { coefficients }
}

/// Renaming that carries the two-variable coordinates `(x, y)` (indices 0, 1)
/// onto the family coordinates: `x -> x2`, `y -> x1`.
pub const XY_TO_FAMILY: [usize; 2] = [1, 0];

/// `d = y^m ∂_x + (1 - x^α y) ∂_y` on `k[x, y]`, with `x` at index 0 and `y`
/// at index 1. Equal to `jordan_derivation(2, m, α)` after [`XY_TO_FAMILY`].
pub fn two_variable_derivation(m: u32, alpha: u32) -> Result<Derivation> {
    FamilyParams::new(2, m, alpha)?;
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let dy = &Polynomial::one(2) - &(&x.pow(alpha) * &y);
    Ok(Derivation {
        coefficients: alloc::vec![y.pow(m), dy],
    })
}
