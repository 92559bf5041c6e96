//! Ring endomorphisms of `k[x1..xn]`, the commutation test `d∘ρ = ρ∘d`, and
//! bounded searches for affine maps commuting with a derivation.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{rank, RationalMatrix};
use crate::poly::{Polynomial, Rational};

/// `x_i -> g_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    images: Vec<Polynomial>,
}

impl Endomorphism {
    pub fn new(images: Vec<Polynomial>) -> Result<Self> {
        let n = images.len();
        if let Some(bad) = images.iter().find(|g| g.arity() != n) {
            return Err(Error::ArityMismatch {
                left: n,
                right: bad.arity(),
            });
        }
        Ok(Endomorphism { images })
    }

    pub fn identity(n: usize) -> Self {
        Endomorphism {
            images: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        p.substitute(&self.images)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Endomorphism) -> Result<Endomorphism> {
        if inner.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: inner.arity(),
            });
        }
        let images = inner.images.iter().map(|g| self.apply(g)).collect::<Result<_>>()?;
        Ok(Endomorphism { images })
    }
}

pub fn apply_endo(rho: &Endomorphism, p: &Polynomial) -> Result<Polynomial> {
    rho.apply(p)
}

/// `x_n -> x_n + c`, identity on the other variables.
pub fn translation(n: usize, c: Rational) -> Endomorphism {
    assert!(n >= 1, "translation needs at least one variable");
    let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    images[n - 1] = &images[n - 1] + &Polynomial::constant(n, c);
    Endomorphism { images }
}

/// Per-variable residuals `d(g_i) - ρ(d(x_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commutation {
    pub residuals: Vec<Polynomial>,
}

impl Commutation {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(Polynomial::is_zero)
    }
}

pub fn commutes(d: &Derivation, rho: &Endomorphism) -> Result<Commutation> {
    if d.arity() != rho.arity() {
        return Err(Error::ArityMismatch {
            left: d.arity(),
            right: rho.arity(),
        });
    }
    let residuals = rho
        .images
        .iter()
        .zip(d.coefficients())
        .map(|(g, c)| d.apply(g)?.try_sub(&rho.apply(c)?))
        .collect::<Result<_>>()?;
    Ok(Commutation { residuals })
}

/// Same verdict as [`commutes`], stopping at the first nonzero residual.
fn commutes_quick(d: &Derivation, rho: &Endomorphism) -> Result<bool> {
    for (g, c) in rho.images.iter().zip(d.coefficients()) {
        if d.apply(g)? != rho.apply(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `σ⁻¹ d σ`, given `σ` and its inverse.
pub fn conjugate(d: &Derivation, sigma: &Endomorphism, sigma_inv: &Endomorphism) -> Result<Derivation> {
    let coefficients = sigma
        .images
        .iter()
        .map(|g| sigma_inv.apply(&d.apply(g)?))
        .collect::<Result<_>>()?;
    Derivation::new(coefficients)
}

/// `x -> L x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: RationalMatrix,
    pub offset: Vec<Rational>,
}

impl AffineMap {
    pub fn new(linear: RationalMatrix, offset: Vec<Rational>) -> Result<Self> {
        if linear.rows() != linear.cols() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                found: linear.cols(),
            });
        }
        if offset.len() != linear.rows() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                found: offset.len(),
            });
        }
        Ok(AffineMap { linear, offset })
    }

    pub fn arity(&self) -> usize {
        self.offset.len()
    }

    /// `g_i = Σ_j L_ij x_j + b_i`.
    pub fn to_endomorphism(&self) -> Endomorphism {
        let n = self.arity();
        let images = (0..n)
            .map(|i| {
                let mut g = Polynomial::constant(n, self.offset[i].clone());
                for (j, a) in self.linear.row(i).iter().enumerate() {
                    if !a.is_zero() {
                        g = &g + &Polynomial::var(n, j).scale(a);
                    }
                }
                g
            })
            .collect();
        Endomorphism { images }
    }

    pub fn is_affine_automorphism(&self) -> bool {
        rank(&self.linear) == self.arity()
    }

    /// `x -> L⁻¹ x - L⁻¹ b`.
    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = self.linear.inverse()?;
        let shifted = inv.mul_vec(&self.offset).expect("square of matching size");
        Some(AffineMap {
            linear: inv,
            offset: shifted.into_iter().map(|v| -v).collect(),
        })
    }

    /// Whether this is `x_n -> x_n + c` for some `c`, identity elsewhere.
    pub fn is_translation(&self) -> bool {
        let n = self.arity();
        self.linear == RationalMatrix::identity(n) && self.offset[..n - 1].iter().all(Zero::is_zero)
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Every `g_i = a_i x_i + c_i` with integers `a_i != 0`, `c_i` in `[lo, hi]`
/// that commutes with `d`, in odometer order over `(a_1, c_1, .., a_n, c_n)`.
pub fn diagonal_affine_scan(d: &Derivation, lo: i64, hi: i64) -> Result<Vec<AffineMap>> {
    let n = d.arity();
    let scales: Vec<i64> = (lo..=hi).filter(|&a| a != 0).collect();
    let shifts: Vec<i64> = (lo..=hi).collect();
    let mut radices = Vec::with_capacity(2 * n);
    for _ in 0..n {
        radices.push(scales.len());
        radices.push(shifts.len());
    }
    scan(d, &radices, |digits| {
        let mut linear = RationalMatrix::zeros(n, n);
        let mut offset = vec![Rational::zero(); n];
        for i in 0..n {
            linear.set(i, i, int(scales[digits[2 * i]]));
            offset[i] = int(shifts[digits[2 * i + 1]]);
        }
        AffineMap { linear, offset }
    })
}

/// Lower-triangular affine maps: `g_i = Σ_{j<=i} L_ij x_j + c_i`, nonzero
/// diagonal, all entries in `[lo, hi]`. Grows as `box^(n(n+3)/2)`; meant for
/// small boxes.
pub fn triangular_affine_scan(d: &Derivation, lo: i64, hi: i64) -> Result<Vec<AffineMap>> {
    let n = d.arity();
    let scales: Vec<i64> = (lo..=hi).filter(|&a| a != 0).collect();
    let values: Vec<i64> = (lo..=hi).collect();
    // per row i: L_i0 .. L_i(i-1), L_ii, c_i
    let mut radices = Vec::new();
    for i in 0..n {
        radices.extend(core::iter::repeat_n(values.len(), i));
        radices.push(scales.len());
        radices.push(values.len());
    }
    scan(d, &radices, |digits| {
        let mut linear = RationalMatrix::zeros(n, n);
        let mut offset = vec![Rational::zero(); n];
        let mut k = 0;
        for (i, o) in offset.iter_mut().enumerate() {
            for j in 0..i {
                linear.set(i, j, int(values[digits[k]]));
                k += 1;
            }
            linear.set(i, i, int(scales[digits[k]]));
            *o = int(values[digits[k + 1]]);
            k += 2;
        }
        AffineMap { linear, offset }
    })
}

fn scan(d: &Derivation, radices: &[usize], build: impl Fn(&[usize]) -> AffineMap) -> Result<Vec<AffineMap>> {
    let mut out = Vec::new();
    if radices.contains(&0) {
        return Ok(out);
    }
    let mut digits = vec![0usize; radices.len()];
    loop {
        let map = build(&digits);
        if commutes_quick(d, &map.to_endomorphism())? {
            out.push(map);
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Closure of a diagonal scan result relative to its box: every pairwise
/// composite commutes with `d`, and each composite that is itself a diagonal
/// map with parameters in `[lo, hi]` already belongs to `set`.
pub fn closed_in_box(d: &Derivation, set: &[AffineMap], lo: i64, hi: i64) -> Result<bool> {
    let in_box = |v: &Rational| v.is_integer() && (int(lo)..=int(hi)).contains(v);
    for a in set {
        for b in set {
            let ab = compose_affine(a, b);
            if !commutes_quick(d, &ab.to_endomorphism())? {
                return Ok(false);
            }
            let n = ab.arity();
            let diagonal_in_box = (0..n).all(|i| {
                (0..n).all(|j| i == j || ab.linear.get(i, j).is_zero())
                    && !ab.linear.get(i, i).is_zero()
                    && in_box(ab.linear.get(i, i))
                    && in_box(&ab.offset[i])
            });
            if diagonal_in_box && !set.contains(&ab) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `a ∘ b` on points: `x -> L_a (L_b x + b_b) + b_a`.
///
/// As ring maps, `x_i -> g_i` composes contravariantly; this matches
/// [`Endomorphism::compose`] with the arguments swapped.
pub fn compose_affine(a: &AffineMap, b: &AffineMap) -> AffineMap {
    let n = a.arity();
    let mut linear = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = (0..n).fold(Rational::zero(), |acc, k| acc + a.linear.get(i, k) * b.linear.get(k, j));
            linear.set(i, j, v);
        }
    }
    let shifted = a.linear.mul_vec(&b.offset).expect("matching size");
    let offset = shifted.into_iter().zip(&a.offset).map(|(u, v)| u + v).collect();
    AffineMap { linear, offset }
}

pub fn identity_map(n: usize) -> AffineMap {
    AffineMap {
        linear: RationalMatrix::identity(n),
        offset: vec![Rational::zero(); n],
    }
}

/// Scales `x_i -> s_i x_i`.
pub fn diagonal_scaling(scales: &[Rational]) -> AffineMap {
    let n = scales.len();
    let mut linear = RationalMatrix::zeros(n, n);
    for (i, s) in scales.iter().enumerate() {
        linear.set(i, i, s.clone());
    }
    AffineMap {
        linear,
        offset: vec![Rational::zero(); n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{jordan_derivation, FamilyParams};
    use crate::poly::{parse, rational};

    fn p(s: &str, n: usize) -> Polynomial {
        parse(s, n).unwrap()
    }

    fn family(n: usize, m: u32, alpha: u32) -> Derivation {
        jordan_derivation(FamilyParams::new(n, m, alpha).unwrap())
    }

    #[test]
    fn identity_and_translation_commute() {
        let d = family(3, 2, 1);
        assert!(commutes(&d, &Endomorphism::identity(3)).unwrap().holds());
        assert!(commutes(&d, &translation(3, rational(5, 1))).unwrap().holds());
        assert_eq!(translation(3, rational(0, 1)), Endomorphism::identity(3));
    }

    #[test]
    fn scaling_residual() {
        let d = family(3, 2, 1);
        let rho = Endomorphism::new(vec![p("2*x1", 3), p("x2", 3), p("x3", 3)]).unwrap();
        let c = commutes(&d, &rho).unwrap();
        assert!(!c.holds());
        assert_eq!(c.residuals[0], p("1", 3));
    }

    #[test]
    fn affine_composition_matches_ring_maps() {
        let mut a = diagonal_scaling(&[rational(2, 1), rational(-1, 1)]);
        a.linear.set(1, 0, rational(3, 1));
        a.offset = vec![rational(1, 1), rational(5, 1)];
        let mut b = identity_map(2);
        b.linear.set(0, 1, rational(-2, 1));
        b.offset = vec![rational(0, 1), rational(1, 2)];
        let ab = compose_affine(&a, &b).to_endomorphism();
        assert_eq!(ab, b.to_endomorphism().compose(&a.to_endomorphism()).unwrap());
    }

    #[test]
    fn translations_form_a_group() {
        let a = translation(3, rational(2, 1));
        let b = translation(3, rational(-7, 3));
        assert_eq!(a.compose(&b).unwrap(), translation(3, rational(-1, 3)));
    }

    #[test]
    fn automorphism_examples() {
        assert!(identity_map(3).is_affine_automorphism());
        let zero = AffineMap::new(RationalMatrix::zeros(3, 3), vec![rational(1, 1); 3]).unwrap();
        assert!(!zero.is_affine_automorphism());
        let mut diag = diagonal_scaling(&[rational(1, 1), rational(1, 1), rational(2, 1)]);
        diag.offset = vec![rational(3, 1), rational(0, 1), rational(-1, 1)];
        assert!(diag.is_affine_automorphism());
        let inv = diag.inverse().unwrap();
        let round = diag.to_endomorphism().compose(&inv.to_endomorphism()).unwrap();
        assert_eq!(round, Endomorphism::identity(3));
    }

    #[test]
    fn diagonal_scan_finds_translations_only() {
        let found = diagonal_affine_scan(&family(3, 2, 1), -2, 2).unwrap();
        assert_eq!(found.len(), 5);
        assert!(found.iter().all(AffineMap::is_translation));
        assert!(closed_in_box(&family(3, 2, 1), &found, -2, 2).unwrap());

        let found = diagonal_affine_scan(&family(4, 3, 2), -1, 1).unwrap();
        assert_eq!(found.len(), 3);
        assert!(found.iter().all(AffineMap::is_translation));
    }

    #[test]
    fn two_variable_scan_is_trivial() {
        let found = diagonal_affine_scan(&family(2, 2, 1), -2, 2).unwrap();
        assert_eq!(found, vec![identity_map(2)]);
    }

    #[test]
    fn partial_control_has_more() {
        let found = diagonal_affine_scan(&Derivation::partial(2, 0), -1, 1).unwrap();
        assert!(found.iter().any(|m| !m.is_translation()));
        assert!(closed_in_box(&Derivation::partial(2, 0), &found, -1, 1).unwrap());
    }

    #[test]
    fn triangular_scan_small() {
        let found = triangular_affine_scan(&family(3, 2, 1), -1, 1).unwrap();
        assert_eq!(found.len(), 3);
        assert!(found.iter().all(AffineMap::is_translation));
    }
}
