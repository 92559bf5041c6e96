//! Degree-bounded image membership for derivations.
//!
//! For a bound `D` the map `r -> d(r)` restricted to polynomials of total
//! degree at most `D` is a finite linear map; its matrix has one column per
//! domain monomial and one row per monomial that can occur in an image (or in
//! the target). Deciding `d(r) = t` at that bound is one exact solve. A
//! negative answer is bounded evidence only: it says nothing about
//! preimages of higher degree.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{KernelBasis, SparseMatrix};
use crate::poly::{monomials_up_to, Monomial, Polynomial, Rational};

/// `r` together with `d(r)`, verified exactly on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageWitness {
    r: Polynomial,
    target: Polynomial,
}

impl ImageWitness {
    /// Fails with `InvalidParams` unless `d(r) == target`.
    pub fn new(d: &Derivation, r: Polynomial, target: Polynomial) -> Result<Self> {
        if d.apply(&r)? != target {
            return Err(Error::InvalidParams("d(r) differs from the target".into()));
        }
        Ok(ImageWitness { r, target })
    }

    pub fn r(&self) -> &Polynomial {
        &self.r
    }

    pub fn target(&self) -> &Polynomial {
        &self.target
    }
}

/// Order of the domain monomials along the matrix columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColumnOrder {
    /// Descending graded lexicographic.
    #[default]
    Grlex,
    /// Descending pure lexicographic.
    Lex,
}

/// The matrix of `d` on `{deg <= D}` together with its row and column labels.
#[derive(Clone, Debug)]
pub struct ImageSystem {
    pub domain: Vec<Monomial>,
    pub codomain: Vec<Monomial>,
    pub matrix: SparseMatrix,
    /// Degree bound of the codomain: `D + max_i deg(c_i)`.
    pub codomain_degree: u32,
}

impl ImageSystem {
    /// Builds the system; `extra` columns (already expressed as polynomials) are
    /// appended after the monomial columns, and `targets` only contribute rows.
    pub fn build(
        d: &Derivation,
        degree: u32,
        order: ColumnOrder,
        extra: &[Polynomial],
        targets: &[&Polynomial],
    ) -> Result<Self> {
        let n = d.arity();
        for p in extra.iter().chain(targets.iter().copied()) {
            if p.arity() != n {
                return Err(Error::ArityMismatch {
                    left: n,
                    right: p.arity(),
                });
            }
        }
        let mut domain = monomials_up_to(n, degree);
        if order == ColumnOrder::Lex {
            domain.sort_by(|a, b| b.cmp_lex(a));
        }
        let columns: Vec<Polynomial> = domain
            .iter()
            .map(|m| d.apply_monomial(m))
            .chain(extra.iter().cloned())
            .collect();

        let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
        for p in columns.iter().chain(targets.iter().copied()) {
            for (m, _) in p.terms() {
                row_of.entry(m.clone()).or_insert(0);
            }
        }
        // rows in descending grlex
        let codomain: Vec<Monomial> = row_of.keys().rev().cloned().collect();
        for (i, m) in codomain.iter().enumerate() {
            row_of.insert(m.clone(), i);
        }
        let mut rows: Vec<Vec<(usize, Rational)>> = alloc::vec![Vec::new(); codomain.len()];
        for (j, col) in columns.iter().enumerate() {
            for (m, c) in col.terms() {
                rows[row_of[m]].push((j, c.clone()));
            }
        }
        let mut matrix = SparseMatrix::new(columns.len());
        for row in rows {
            matrix.push_row(row);
        }
        let codomain_degree = degree + d.max_coefficient_degree().finite().unwrap_or(0);
        Ok(ImageSystem {
            domain,
            codomain,
            matrix,
            codomain_degree,
        })
    }

    /// Right-hand side for `t`, indexed by codomain rows. `None` if `t` has a
    /// monomial outside the row set, which already rules out membership.
    pub fn rhs(&self, t: &Polynomial) -> Option<Vec<Rational>> {
        let mut b = alloc::vec![Rational::zero(); self.codomain.len()];
        for (m, c) in t.terms() {
            let i = self.codomain.binary_search_by(|probe| m.cmp(probe)).ok()?;
            b[i] = c.clone();
        }
        Some(b)
    }

    /// The polynomial with the given coefficients on the domain columns.
    pub fn polynomial(&self, coefficients: &[Rational]) -> Polynomial {
        let arity = self.domain.first().map_or(0, Monomial::arity);
        Polynomial::from_terms(arity, self.domain.iter().cloned().zip(coefficients.iter().cloned()))
            .expect("domain monomials share the ring arity")
    }
}

/// Outcome of a bounded membership query, with the matrix statistics.
#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub witness: Option<ImageWitness>,
}

pub fn membership_report(d: &Derivation, t: &Polynomial, degree: u32, order: ColumnOrder) -> Result<MembershipReport> {
    let system = ImageSystem::build(d, degree, order, &[], &[t])?;
    let b = system.rhs(t).expect("target monomials are rows of the system");
    let rank = system.matrix.rank();
    let witness = match system.matrix.solve(&b)? {
        Some(sol) => {
            let r = system.polynomial(&sol.particular);
            Some(ImageWitness::new(d, r, t.clone())?)
        }
        None => None,
    };
    Ok(MembershipReport {
        degree,
        rows: system.matrix.rows(),
        cols: system.matrix.cols(),
        rank,
        witness,
    })
}

/// Some `r` with `deg r <= degree` and `d(r) = t`, if one exists.
pub fn image_membership(d: &Derivation, t: &Polynomial, degree: u32) -> Result<Option<ImageWitness>> {
    Ok(membership_report(d, t, degree, ColumnOrder::Grlex)?.witness)
}

/// Units of a polynomial ring over a field are the nonzero constants, so it
/// suffices to ask for `1`.
pub fn unit_in_image(d: &Derivation, degree: u32) -> Result<Option<ImageWitness>> {
    image_membership(d, &Polynomial::one(d.arity()), degree)
}

/// The affine target `a * x_{variable+1} + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTarget {
    pub variable: usize,
    pub a: Rational,
    pub b: Rational,
}

impl AffineTarget {
    pub fn to_polynomial(&self, arity: usize) -> Polynomial {
        let x = Polynomial::var(arity, self.variable);
        &x.scale(&self.a) + &Polynomial::constant(arity, self.b.clone())
    }
}

/// One basis element of the solution space of `d(r) = a*x_i + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub r: Polynomial,
    pub target: AffineTarget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineVerdict {
    /// Only `a = b = 0` with constant `r`.
    TrivialOnly,
    Nontrivial,
}

#[derive(Clone, Debug)]
pub struct AffineScanReport {
    pub variable: usize,
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Basis of all `(r, a, b)` with `deg r <= degree` solving the equation.
    pub solutions: Vec<AffineSolution>,
    pub verdict: AffineVerdict,
}

/// Solves `d(r) - a*x_i - b = 0` jointly in the coefficients of `r` and in
/// `a`, `b`, which enter as two extra unknown columns.
pub fn affine_target_scan(d: &Derivation, variable: usize, degree: u32) -> Result<AffineScanReport> {
    let n = d.arity();
    if variable >= n {
        return Err(Error::VariableOutOfRange {
            index: variable + 1,
            arity: n,
        });
    }
    let extra = [-&Polynomial::var(n, variable), -&Polynomial::one(n)];
    let system = ImageSystem::build(d, degree, ColumnOrder::Grlex, &extra, &[])?;
    let kernel: KernelBasis = system.matrix.kernel();
    let k = system.domain.len();
    let solutions: Vec<AffineSolution> = kernel
        .vectors()
        .iter()
        .map(|v| AffineSolution {
            r: system.polynomial(&v[..k]),
            target: AffineTarget {
                variable,
                a: v[k].clone(),
                b: v[k + 1].clone(),
            },
        })
        .collect();
    let trivial = solutions
        .iter()
        .all(|s| s.target.a.is_zero() && s.target.b.is_zero() && s.r.is_constant());
    Ok(AffineScanReport {
        variable,
        degree,
        rows: system.matrix.rows(),
        cols: system.matrix.cols(),
        rank: system.matrix.cols() - kernel.dimension(),
        solutions,
        verdict: if trivial {
            AffineVerdict::TrivialOnly
        } else {
            AffineVerdict::Nontrivial
        },
    })
}
