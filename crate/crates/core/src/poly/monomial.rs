use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Exponent vector `(e_1, ..., e_n)` standing for `x1^e_1 * ... * xn^e_n`.
///
/// Ordering is graded lexicographic: total degree first, then the first
/// differing exponent (a larger power of `x1` is larger).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    /// `x_{index+1}`, zero-based.
    pub fn var(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exact quotient `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Lowers the exponent of variable `index` by one. Caller guarantees it is positive.
    pub(crate) fn lowered(&self, index: usize) -> Monomial {
        let mut e = self.0.clone();
        e[index] -= 1;
        Monomial(e)
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    /// Pure lexicographic comparison, ignoring total degree.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `arity` variables of total degree exactly `degree`,
/// in descending grlex order.
pub fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; arity];
    fill(&mut out, &mut current, 0, degree);
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial(current.to_vec()));
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// All monomials of total degree `<= max_degree`, descending grlex.
pub fn monomials_up_to(arity: usize, max_degree: u32) -> Vec<Monomial> {
    (0..=max_degree)
        .rev()
        .flat_map(|d| monomials_of_degree(arity, d))
        .collect()
}
