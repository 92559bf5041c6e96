//! Darboux polynomials: non-constant `p` with `d(p) = q*p`.
//!
//! Each one generates a proper `d`-stable principal ideal, so finding one
//! refutes simplicity. For a fixed cofactor `q` the condition is linear in
//! `p`; the scan enumerates integer cofactors in a box and solves one kernel
//! problem per cofactor.
//!
//! Cofactor enumeration is pruned exactly. Write `d = d_top + (lower)` where
//! `d_top` collects the coefficient terms of the maximal degree `s + 1`. If
//! `p` has top homogeneous part `p_e` (`e >= 1`) then comparing the degree
//! `e + s` parts of `d(p) = q*p` gives `d_top(p_e) = q_s * p_e`, with `q_s`
//! the degree-`s` part of `q`. A top part `q_s` for which this homogeneous
//! problem has no solution for any `1 <= e <= D_p` cannot lead to a witness,
//! whatever the lower part of `q`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::linalg::{KernelBasis, ModMatrix, SparseMatrix};
use crate::poly::{monomials_of_degree, monomials_up_to, Degree, Monomial, Polynomial, Rational};

pub const SCAN_DISCLAIMER: &str = "complete in p for each enumerated cofactor q; \
incomplete over rational cofactors and over p of higher degree";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxWitness {
    p: Polynomial,
    q: Polynomial,
}

impl DarbouxWitness {
    /// Fails unless `p` is non-constant and `d(p) == q*p`.
    pub fn new(d: &Derivation, p: Polynomial, q: Polynomial) -> Result<Self> {
        if p.is_constant() {
            return Err(Error::InvalidParams("a Darboux polynomial must be non-constant".into()));
        }
        if !verify_darboux(d, &p, &q)? {
            return Err(Error::InvalidParams("d(p) differs from q*p".into()));
        }
        Ok(DarbouxWitness { p, q })
    }

    pub fn p(&self) -> &Polynomial {
        &self.p
    }

    pub fn q(&self) -> &Polynomial {
        &self.q
    }
}

pub fn verify_darboux(d: &Derivation, p: &Polynomial, q: &Polynomial) -> Result<bool> {
    Ok(d.apply(p)? == q.try_mul(p)?)
}

/// The cofactor `q` with `d(p) = q*p`, if `p` divides `d(p)`.
pub fn principal_stability_check(d: &Derivation, p: &Polynomial) -> Result<Option<Polynomial>> {
    let (q, rem) = d.apply(p)?.div_rem(p)?;
    Ok(rem.is_zero().then_some(q))
}

/// Kernel of `p -> d(p) - q*p` on `{deg p <= deg_p}`, columns in descending
/// grlex. Since the constant column comes last, constants appear in the
/// reduced basis only as the vector `1` itself (when `q = 0`).
pub fn darboux_kernel(d: &Derivation, q: &Polynomial, deg_p: u32) -> Result<(Vec<Monomial>, KernelBasis)> {
    let domain = monomials_up_to(d.arity(), deg_p);
    let matrix = linear_map(d, q, &domain)?;
    Ok((domain, matrix.kernel()))
}

/// All non-constant reduced basis elements of the kernel above.
pub fn darboux_search_fixed_cofactor(d: &Derivation, q: &Polynomial, deg_p: u32) -> Result<Vec<Polynomial>> {
    let n = d.arity();
    let (domain, kernel) = darboux_kernel(d, q, deg_p)?;
    Ok(kernel
        .vectors()
        .iter()
        .map(|v| from_coordinates(n, &domain, v))
        .filter(|p| !p.is_constant())
        .collect())
}

fn from_coordinates(n: usize, domain: &[Monomial], v: &[Rational]) -> Polynomial {
    Polynomial::from_terms(n, domain.iter().cloned().zip(v.iter().cloned())).expect("domain shares the ring arity")
}

/// Matrix of `p -> D(p) - q*p` on the span of `domain`, where `D` is `d`.
fn linear_map(d: &Derivation, q: &Polynomial, domain: &[Monomial]) -> Result<SparseMatrix> {
    if q.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            left: d.arity(),
            right: q.arity(),
        });
    }
    let columns: Vec<Polynomial> = domain
        .iter()
        .map(|m| &d.apply_monomial(m) - &q.mul_term(m, &Rational::from_integer(BigInt::from(1))))
        .collect();
    Ok(to_matrix(&columns))
}

fn to_matrix(columns: &[Polynomial]) -> SparseMatrix {
    let mut rows: alloc::collections::BTreeMap<&Monomial, Vec<(usize, Rational)>> = Default::default();
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            rows.entry(m).or_default().push((j, c.clone()));
        }
    }
    let mut matrix = SparseMatrix::new(columns.len());
    for (_, row) in rows.into_iter().rev() {
        matrix.push_row(row);
    }
    matrix
}

/// Bounds for [`stable_ideal_scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub deg_p: u32,
    pub cofactor_deg: u32,
    /// Inclusive integer range for every cofactor coefficient.
    pub coefficient_box: (i64, i64),
}

impl ScanConfig {
    pub const DEFAULT_DEG_P: u32 = 6;
    pub const DEFAULT_BOX: (i64, i64) = (-2, 2);

    /// Default bounds for `d`: the largest admissible cofactor degree.
    pub fn for_derivation(d: &Derivation) -> Self {
        ScanConfig {
            deg_p: Self::DEFAULT_DEG_P,
            cofactor_deg: cofactor_bound(d),
            coefficient_box: Self::DEFAULT_BOX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coefficient_box.0 > self.coefficient_box.1 {
            return Err(Error::InvalidParams("empty coefficient box".into()));
        }
        Ok(())
    }
}

/// `max_i deg c_i - 1`, or 0 when all coefficients are constants.
pub fn cofactor_bound(d: &Derivation) -> u32 {
    d.max_coefficient_degree().finite().unwrap_or(0).saturating_sub(1)
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub config: ScanConfig,
    /// Number of cofactors in the box.
    pub cofactors: u128,
    /// Distinct top parts `q_s` enumerated, and how many passed the
    /// homogeneous test.
    pub top_parts: u128,
    pub top_parts_surviving: u128,
    /// Exact kernel computations performed; the others were settled by a
    /// modular rank bound.
    pub solves: u128,
    pub witnesses: Vec<DarbouxWitness>,
}

impl ScanReport {
    pub fn found(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn disclaimer(&self) -> &'static str {
        SCAN_DISCLAIMER
    }
}

/// Sweeps every integer cofactor in the box (with the exact pruning described
/// in the module docs) and collects every non-constant kernel basis element.
///
/// A cofactor with a nonzero part above [`cofactor_bound`] is skipped without
/// a solve: its top part times the top part of `p` would be a nonzero term of
/// `q*p` that `d(p)` cannot reach.
pub fn stable_ideal_scan(d: &Derivation, cfg: &ScanConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let n = d.arity();
    let (lo, hi) = cfg.coefficient_box;
    let width = (hi - lo + 1) as u128;
    let requested = monomials_up_to(n, cfg.cofactor_deg).len();
    let cofactor_deg = cfg.cofactor_deg.min(cofactor_bound(d));
    if cofactor_deg < cfg.cofactor_deg && (lo > 0 || hi < 0) {
        return Ok(ScanReport {
            config: cfg.clone(),
            cofactors: width.pow(requested as u32),
            top_parts: 0,
            top_parts_surviving: 0,
            solves: 0,
            witnesses: Vec::new(),
        });
    }

    let top_degree = d.max_coefficient_degree();
    let (top_monos, low_monos, d_top) = match top_degree {
        Degree::Finite(t) if t >= 1 && cofactor_deg + 1 == t => {
            let top = monomials_of_degree(n, t - 1);
            let low = monomials_up_to(n, cofactor_deg)
                .into_iter()
                .filter(|m| m.degree() < t - 1)
                .collect();
            (top, low, Some(homogeneous_part(d, t)))
        }
        Degree::Finite(t) if t >= 1 => (
            Vec::new(),
            monomials_up_to(n, cofactor_deg),
            Some(homogeneous_part(d, t)),
        ),
        _ => (Vec::new(), monomials_up_to(n, cofactor_deg), None),
    };

    let mut report = ScanReport {
        config: cfg.clone(),
        cofactors: width.pow(requested as u32),
        top_parts: 0,
        top_parts_surviving: 0,
        solves: 0,
        witnesses: Vec::new(),
    };
    let top_pencils: Vec<Pencil> = match &d_top {
        Some(d_top) => (1..=cfg.deg_p)
            .map(|e| Pencil::new(d_top, &top_monos, monomials_of_degree(n, e)))
            .collect(),
        None => Vec::new(),
    };
    let all_monos: Vec<Monomial> = top_monos.iter().chain(&low_monos).cloned().collect();
    let full = Pencil::new(d, &all_monos, monomials_up_to(n, cfg.deg_p));

    for top in BoxIter::new(top_monos.len(), lo, hi) {
        report.top_parts += 1;
        if d_top.is_some() && !any_exceeds(&top_pencils, &top)? {
            continue;
        }
        report.top_parts_surviving += 1;
        for low in BoxIter::new(low_monos.len(), lo, hi) {
            let coefficients: Vec<i64> = top.iter().chain(&low).copied().collect();
            let q = full.cofactor(&coefficients);
            // the constant 1 is always in the kernel when q = 0
            if !full.kernel_exceeds(&coefficients, usize::from(q.is_zero()))? {
                continue;
            }
            report.solves += 1;
            let kernel = linear_map(d, &q, &full.domain)?.kernel();
            for v in kernel.vectors() {
                let p = from_coordinates(n, &full.domain, v);
                if !p.is_constant() {
                    report.witnesses.push(DarbouxWitness::new(d, p, q.clone())?);
                }
            }
        }
    }
    Ok(report)
}

/// The derivation keeping only the coefficient terms of total degree `t`.
fn homogeneous_part(d: &Derivation, t: u32) -> Derivation {
    let n = d.arity();
    let coefficients = d
        .coefficients()
        .iter()
        .map(|c| {
            Polynomial::from_terms(
                n,
                c.terms()
                    .filter(|(m, _)| m.degree() == t)
                    .map(|(m, c)| (m.clone(), c.clone())),
            )
            .expect("same arity")
        })
        .collect();
    Derivation::new(coefficients).expect("same arity")
}

/// Large prime for the modular rank filter.
const FILTER_PRIME: u64 = 4_294_967_291;

/// The maps `p -> D(p) - q*p` on a fixed domain, for `q` ranging over integer
/// combinations of fixed monomials, reduced modulo [`FILTER_PRIME`]. Full rank
/// modulo the prime bounds the rational kernel, so most cofactors are settled
/// without building a rational matrix.
struct Pencil<'a> {
    d: &'a Derivation,
    domain: Vec<Monomial>,
    monos: &'a [Monomial],
    reduced: Option<(ModMatrix, Vec<ModMatrix>)>,
}

impl<'a> Pencil<'a> {
    fn new(d: &'a Derivation, monos: &'a [Monomial], domain: Vec<Monomial>) -> Self {
        let base: Vec<Polynomial> = domain.iter().map(|m| d.apply_monomial(m)).collect();
        let parts: Vec<Vec<Polynomial>> = monos
            .iter()
            .map(|q| {
                domain
                    .iter()
                    .map(|m| Polynomial::monomial(q.mul(m), Rational::from_integer(BigInt::from(-1))))
                    .collect()
            })
            .collect();
        let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
        for col in base.iter().chain(parts.iter().flatten()) {
            for (m, _) in col.terms() {
                row_of.entry(m.clone()).or_insert(0);
            }
        }
        for (i, v) in row_of.values_mut().enumerate() {
            *v = i;
        }
        let reduce = |cols: &[Polynomial]| ModMatrix::from_sparse(&column_matrix(cols, &row_of), FILTER_PRIME);
        let reduced = reduce(&base).and_then(|b| {
            let parts: Option<Vec<ModMatrix>> = parts.iter().map(|cols| reduce(cols)).collect();
            parts.map(|parts| (b, parts))
        });
        Pencil {
            d,
            domain,
            monos,
            reduced,
        }
    }

    fn cofactor(&self, coefficients: &[i64]) -> Polynomial {
        combine(self.d.arity(), self.monos, coefficients)
    }

    /// Whether the kernel at these coefficients has dimension above `floor`.
    fn kernel_exceeds(&self, coefficients: &[i64], floor: usize) -> Result<bool> {
        let cols = self.domain.len();
        if let Some((base, parts)) = &self.reduced {
            let mut m = base.clone();
            for (part, &c) in parts.iter().zip(coefficients) {
                m.add_scaled(part, c);
            }
            if cols - m.rank() <= floor {
                return Ok(false);
            }
        }
        let exact = linear_map(self.d, &self.cofactor(coefficients), &self.domain)?;
        Ok(cols - exact.rank() > floor)
    }
}

fn column_matrix(columns: &[Polynomial], row_of: &BTreeMap<Monomial, usize>) -> SparseMatrix {
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); row_of.len()];
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            rows[row_of[m]].push((j, c.clone()));
        }
    }
    let mut matrix = SparseMatrix::new(columns.len());
    for row in rows {
        matrix.push_row(row);
    }
    matrix
}

fn any_exceeds(pencils: &[Pencil], coefficients: &[i64]) -> Result<bool> {
    for pencil in pencils {
        if pencil.kernel_exceeds(coefficients, 0)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn combine(n: usize, monos: &[Monomial], coefficients: &[i64]) -> Polynomial {
    Polynomial::from_terms(
        n,
        monos
            .iter()
            .cloned()
            .zip(coefficients.iter().map(|&c| Rational::from_integer(BigInt::from(c))))
            .filter(|(_, c)| !c.is_zero()),
    )
    .expect("same arity")
}

/// Every vector in `{lo..=hi}^len`, odometer order with the last entry fastest.
struct BoxIter {
    current: Option<Vec<i64>>,
    lo: i64,
    hi: i64,
}

impl BoxIter {
    fn new(len: usize, lo: i64, hi: i64) -> Self {
        BoxIter {
            current: (lo <= hi).then(|| vec![lo; len]),
            lo,
            hi,
        }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.hi {
                cur[i] += 1;
                break;
            }
            cur[i] = self.lo;
        }
        Some(out)
    }
}
