//! The coefficient chain of a hypothetical preimage of `a*x + b`.
//!
//! Work on `k[x, y]` with `d = y^m ∂_x + (1 - x^α y) ∂_y` and write
//! `r = f_l(x) y^l + ... + f_0(x)`. Comparing coefficients of `y^i` in
//! `d(r) = a*x + b` gives, for `i >= 1`,
//!
//! ```text
//! f'_{i-m} = i x^α f_i - (i+1) f_{i+1}
//! ```
//!
//! Starting from `f_l = 1` and constants `f_{l-s} = λ_s`, every lower entry is
//! one antiderivative away, up to a fresh integration constant. All unknown
//! constants are adjoined as ring variables, so the whole chain lives in one
//! exact polynomial ring:
//!
//! | index | symbol |
//! |-------|--------|
//! | 0 | `x` |
//! | 1 | `y` |
//! | 2, 3 | `a`, `b` |
//! | 4 .. 4+m-1 | `λ_1 .. λ_{m-1}` |
//! | then | `c_{l-m}, c_{l-m-1}, .., c_0` |
//!
//! On top of the chain this module computes the leading-coefficient ledgers
//! `A_j` (top coefficient of `f_{l-jm}`) and `B_j` (coefficient of
//! `x^{(j-1)(α+1)+1}` in `f_{l-jm-1}`), checks the degree schedule, and
//! assembles the case analysis showing that no `l > 0` is possible when
//! `m >= 2`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::poly::{Degree, Polynomial, Rational};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const A: usize = 2;
pub const B: usize = 3;
const FIRST_LAMBDA: usize = 4;

/// `(m, α, j0)` with `l = m * j0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LemmaConfig {
    m: u32,
    alpha: u32,
    j0: u32,
}

impl LemmaConfig {
    /// Requires `m >= 2`, `alpha >= 1`, `j0 >= 1`.
    pub fn new(m: u32, alpha: u32, j0: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("m must be at least 2, got {m}")));
        }
        Self::unrestricted(m, alpha, j0)
    }

    /// Like [`LemmaConfig::new`] but also accepts `m = 1`, where preimages of
    /// constants do exist.
    pub fn unrestricted(m: u32, alpha: u32, j0: u32) -> Result<Self> {
        if m < 1 || alpha < 1 || j0 < 1 {
            return Err(Error::InvalidParams(format!(
                "need m >= 1, alpha >= 1, j0 >= 1; got m={m}, alpha={alpha}, j0={j0}"
            )));
        }
        Ok(LemmaConfig { m, alpha, j0 })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn j0(&self) -> u32 {
        self.j0
    }

    /// The `y`-degree `l = m * j0`.
    pub fn l(&self) -> u32 {
        self.m * self.j0
    }

    pub fn arity(&self) -> usize {
        4 + (self.m as usize - 1) + (self.l() - self.m + 1) as usize
    }

    /// Ring index of `λ_s`, `1 <= s <= m-1`.
    pub fn lambda(&self, s: u32) -> usize {
        assert!(s >= 1 && s < self.m, "λ_{s} does not exist for m = {}", self.m);
        FIRST_LAMBDA + s as usize - 1
    }

    /// Ring index of the integration constant `c_i`, `0 <= i <= l-m`.
    pub fn constant(&self, i: u32) -> usize {
        assert!(i + self.m <= self.l(), "c_{i} does not exist");
        FIRST_LAMBDA + self.m as usize - 1 + (self.l() - self.m - i) as usize
    }

    fn alpha1(&self) -> u32 {
        self.alpha + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolRole {
    X,
    Y,
    A,
    B,
    /// `f_{l-s} = λ_s`.
    Lambda(u32),
    /// Integration constant of `f_i`.
    IntegrationConstant(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub role: SymbolRole,
}

/// Names and roles of every ring variable, in index order.
pub fn symbols(cfg: &LemmaConfig) -> Vec<Symbol> {
    let mut out = vec![
        Symbol {
            name: "x".into(),
            role: SymbolRole::X,
        },
        Symbol {
            name: "y".into(),
            role: SymbolRole::Y,
        },
        Symbol {
            name: "a".into(),
            role: SymbolRole::A,
        },
        Symbol {
            name: "b".into(),
            role: SymbolRole::B,
        },
    ];
    for s in 1..cfg.m {
        out.push(Symbol {
            name: format!("lambda{s}"),
            role: SymbolRole::Lambda(s),
        });
    }
    for i in (0..=cfg.l() - cfg.m).rev() {
        out.push(Symbol {
            name: format!("c{i}"),
            role: SymbolRole::IntegrationConstant(i),
        });
    }
    out
}

pub fn symbol_names(cfg: &LemmaConfig) -> Vec<String> {
    symbols(cfg).into_iter().map(|s| s.name).collect()
}

/// `f_0, ..., f_l` in the extended ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSequence {
    cfg: LemmaConfig,
    entries: Vec<Polynomial>,
}

impl CoefficientSequence {
    pub fn config(&self) -> &LemmaConfig {
        &self.cfg
    }

    /// `f_i`; zero outside `0..=l`.
    pub fn entry(&self, i: i64) -> Polynomial {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.entries.get(i).cloned())
            .unwrap_or_else(|| Polynomial::zero(self.cfg.arity()))
    }

    /// Entries from `f_l` down to `f_0`.
    pub fn descending(&self) -> impl Iterator<Item = (u32, &Polynomial)> + '_ {
        self.entries.iter().enumerate().rev().map(|(i, p)| (i as u32, p))
    }

    /// `r = Σ f_i y^i`.
    pub fn assemble(&self) -> Polynomial {
        let n = self.cfg.arity();
        let y = Polynomial::var(n, Y);
        let mut r = Polynomial::zero(n);
        for (i, f) in self.entries.iter().enumerate() {
            r = &r + &(f * &y.pow(i as u32));
        }
        r
    }
}

fn x_power(n: usize, k: u32) -> Polynomial {
    Polynomial::var(n, X).pow(k)
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Runs the recurrence from `f_l = 1` down to `f_0`.
pub fn reconstruct_sequence(cfg: &LemmaConfig) -> CoefficientSequence {
    let n = cfg.arity();
    let l = cfg.l();
    let m = cfg.m;
    let mut entries = vec![Polynomial::zero(n); l as usize + 1];
    entries[l as usize] = Polynomial::one(n);
    for s in 1..m {
        entries[(l - s) as usize] = Polynomial::var(n, cfg.lambda(s));
    }
    let xa = x_power(n, cfg.alpha);
    for k in (0..=l - m).rev() {
        let i = k + m;
        let fi = &entries[i as usize];
        let next = entries
            .get(i as usize + 1)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(n));
        let derivative = &(&xa * fi).scale(&int(i64::from(i))) - &next.scale(&int(i64::from(i) + 1));
        let integrated = derivative.antiderivative(X).expect("x is a ring variable");
        entries[k as usize] = &integrated + &Polynomial::var(n, cfg.constant(k));
    }
    CoefficientSequence { cfg: *cfg, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeBound {
    Exact(u32),
    AtMost(u32),
}

/// Expected `deg_x f_i`: exactly `j(α+1)` at `i = l - jm`, and at most
/// `(j-1)(α+1)` at `i = l - jm + s`, for `1 <= j <= j0`, `1 <= s <= m-1`.
pub fn degree_schedule(cfg: &LemmaConfig) -> BTreeMap<u32, DegreeBound> {
    let mut out = BTreeMap::new();
    let l = cfg.l();
    for j in 1..=cfg.j0 {
        out.insert(l - j * cfg.m, DegreeBound::Exact(j * cfg.alpha1()));
        for s in 1..cfg.m {
            out.insert(l - j * cfg.m + s, DegreeBound::AtMost((j - 1) * cfg.alpha1()));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub index: u32,
    pub expected: DegreeBound,
    pub actual: Degree,
    /// Coefficient of the top power of `x` when it is a rational constant.
    pub leading: Option<Rational>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleReport {
    pub checks: Vec<DegreeCheck>,
}

impl ScheduleReport {
    pub fn violations(&self) -> impl Iterator<Item = &DegreeCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Compares `deg_x` of every entry with the schedule. An exact entry also
/// needs its top `x`-coefficient to be a positive rational free of the
/// adjoined symbols, so the degree cannot drop for special constants.
pub fn check_degree_schedule(seq: &CoefficientSequence, cfg: &LemmaConfig) -> ScheduleReport {
    let checks = degree_schedule(cfg)
        .into_iter()
        .rev()
        .map(|(index, expected)| {
            let f = seq.entry(i64::from(index));
            let actual = f.degree_in(X);
            let leading = actual.finite().and_then(|d| f.coefficient_of_power(X, d).as_constant());
            let ok = match expected {
                DegreeBound::Exact(e) => {
                    actual == Degree::Finite(e) && leading.as_ref().is_some_and(|c| c.is_positive())
                }
                DegreeBound::AtMost(e) => actual <= Degree::Finite(e),
            };
            DegreeCheck {
                index,
                expected,
                actual,
                leading,
                ok,
            }
        })
        .collect();
    ScheduleReport { checks }
}

/// `f_1, ..., f_m` forced by the bottom rows: `f_1 = a*x + b` and
/// `f_{i+1} = i x^α f_i / (i+1)` for `1 <= i <= m-1` (the entries
/// `f_{i-m}` with negative index vanish). `a`, `b` are the ring symbols.
pub fn closed_forms_low(cfg: &LemmaConfig) -> Vec<Polynomial> {
    let n = cfg.arity();
    let x = Polynomial::var(n, X);
    let xa = x_power(n, cfg.alpha);
    let mut out = vec![&(&Polynomial::var(n, A) * &x) + &Polynomial::var(n, B)];
    for i in 1..cfg.m {
        let prev = &out[i as usize - 1];
        out.push((&xa * prev).scale(&Rational::new(BigInt::from(i), BigInt::from(i + 1))));
    }
    out
}

/// The ledgers `A_j`, `B_j` and the symbolic companion coefficients
/// `A_{l-jm-1}` (coefficient of `x^{j(α+1)}` in `f_{l-jm-1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingData {
    pub a: BTreeMap<u32, Rational>,
    pub b: BTreeMap<u32, Rational>,
    pub companion: BTreeMap<u32, Polynomial>,
}

/// Iterates
///
/// ```text
/// A_j = (l-(j-1)m) A_{j-1} / (j(α+1)),                        A_1 = l/(α+1)
/// B_j = ((l-(j-1)m-1) B_{j-1} - (l-(j-1)m) A_{j-1}) / ((j-1)(α+1)+1),  B_1 = -l
/// ```
///
/// `A_j` for `1 <= j <= j0`. `B_j` and the companions for
/// `1 <= j <= max(1, j0-1)`; beyond `j0-1` the entry `f_{l-jm-1}` has negative
/// index, so only the base value is kept when `j0 = 1`.
pub fn leading_ledger(cfg: &LemmaConfig) -> LeadingData {
    let n = cfg.arity();
    let l = i64::from(cfg.l());
    let m = i64::from(cfg.m);
    let a1 = i64::from(cfg.alpha1());
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    let mut companion = BTreeMap::new();

    a.insert(1, Rational::new(BigInt::from(l), BigInt::from(a1)));
    b.insert(1, int(-l));
    let lambda1 = if cfg.m >= 2 {
        Polynomial::var(n, cfg.lambda(1))
    } else {
        Polynomial::zero(n)
    };
    companion.insert(1, lambda1.scale(&Rational::new(BigInt::from(l - 1), BigInt::from(a1))));

    for j in 2..=i64::from(cfg.j0) {
        let top = l - (j - 1) * m;
        let prev_a = a[&(j as u32 - 1)].clone();
        a.insert(j as u32, &prev_a * int(top) / int(j * a1));
        if j < i64::from(cfg.j0) {
            let prev_b = b[&(j as u32 - 1)].clone();
            let next_b = (&prev_b * int(top - 1) - &prev_a * int(top)) / int((j - 1) * a1 + 1);
            b.insert(j as u32, next_b);
            let prev_c: &Polynomial = &companion[&(j as u32 - 1)];
            let next_c = prev_c.scale(&(int(top - 1) / int(j * a1)));
            companion.insert(j as u32, next_c);
        }
    }
    LeadingData { a, b, companion }
}

/// `d = y^m ∂_x + (1 - x^α y) ∂_y` on the extended ring.
pub fn chain_derivation(cfg: &LemmaConfig) -> Derivation {
    let n = cfg.arity();
    let y = Polynomial::var(n, Y);
    let mut coefficients = vec![Polynomial::zero(n); n];
    coefficients[X] = y.pow(cfg.m);
    coefficients[Y] = &Polynomial::one(n) - &(&x_power(n, cfg.alpha) * &y);
    Derivation::new(coefficients).expect("coefficients share the extended arity")
}

/// `d(r) - (a*x + b)` with `r` assembled from `seq`; `a` and `b` are
/// polynomials of the extended ring (the symbols themselves, or constants).
pub fn residual(cfg: &LemmaConfig, seq: &CoefficientSequence, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    let n = cfg.arity();
    let d = chain_derivation(cfg);
    let dr = d.apply(&seq.assemble())?;
    let target = (&Polynomial::var(n, X) * a).try_add(b)?;
    dr.try_sub(&target)
}

/// Coefficients of `y^i` of a residual, keyed by `i`, zero rows omitted.
pub fn residual_rows(res: &Polynomial) -> BTreeMap<u32, Polynomial> {
    let mut out = BTreeMap::new();
    if let Degree::Finite(top) = res.degree_in(Y) {
        for i in 0..=top {
            let row = res.coefficient_of_power(Y, i);
            if !row.is_zero() {
                out.insert(i, row);
            }
        }
    }
    out
}

/// Values for `a`, `b`, `λ_s` and the integration constants making the
/// residual vanish identically in `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSolution {
    /// `values[k]` is the value of ring variable `k + 2` (`a`, `b`, λ's, c's).
    pub values: Vec<Rational>,
    /// Dimension of the solution set.
    pub freedom: usize,
}

impl ChainSolution {
    /// The substitution `x -> x`, `y -> y`, symbols -> their values.
    pub fn images(&self, cfg: &LemmaConfig) -> Vec<Polynomial> {
        let n = cfg.arity();
        let mut out = vec![Polynomial::var(n, X), Polynomial::var(n, Y)];
        out.extend(self.values.iter().map(|v| Polynomial::constant(n, v.clone())));
        out
    }
}

/// The residual is affine-linear in the adjoined symbols; each `x^i y^j`
/// coefficient gives one linear equation. Solves that system exactly.
/// `None` means no polynomial of `y`-degree exactly `l` (normalized to
/// `f_l = 1`) maps to any `a*x + b`.
/// Sparse linear row and right-hand side.
type Row = (Vec<(usize, Rational)>, Rational);

pub fn solve_chain(cfg: &LemmaConfig, seq: &CoefficientSequence) -> Result<Option<ChainSolution>> {
    let n = cfg.arity();
    let res = residual(cfg, seq, &Polynomial::var(n, A), &Polynomial::var(n, B))?;
    let unknowns = n - 2;
    let mut rows: BTreeMap<(u32, u32), Row> = BTreeMap::new();
    for (mono, c) in res.terms() {
        let e = mono.exponents();
        let key = (e[X], e[Y]);
        let symbolic: Vec<usize> = (2..n).filter(|&k| e[k] > 0).collect();
        let entry = rows.entry(key).or_insert_with(|| (Vec::new(), Rational::zero()));
        match symbolic.as_slice() {
            [] => entry.1 -= c,
            [k] if e[*k] == 1 => entry.0.push((*k - 2, c.clone())),
            _ => {
                return Err(Error::InvalidParams(
                    "residual is not linear in the adjoined symbols".into(),
                ))
            }
        }
    }
    let mut matrix = SparseMatrix::new(unknowns);
    let mut rhs = Vec::with_capacity(rows.len());
    for (_, (entries, constant)) in rows {
        matrix.push_row(entries);
        rhs.push(constant);
    }
    Ok(matrix.solve(&rhs)?.map(|sol| ChainSolution {
        freedom: sol.kernel.dimension(),
        values: sol.particular,
    }))
}

/// How one branch of the case analysis is closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseResolution {
    /// The degree-matching equation `(j0-1)(α+1) = rhs` has no integer
    /// solution `j0 >= 2`.
    NoAdmissibleJ0 { rhs: u32 },
    /// The admissible `j0` forces the tracked coefficient both positive (from
    /// the `A` ledger) and negative (from the `B` ledger).
    SignClash(Box<SignClash>),
    /// `a = b = 0` makes `f_m` vanish, while its degree must be
    /// `(j0-1)(α+1) >= min_degree > 0`.
    DegreeAbsurdity { min_degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignClash {
    pub j0: u32,
    pub l: u32,
    /// Common value of both sides of the matching equation.
    pub degree: u32,
    /// `A_{j0-1}`, the top coefficient of `f_m`.
    pub leading_a: Rational,
    /// The coefficient forced by `f_m`: `m * A_{j0-1}` (positive).
    pub forced_positive: Rational,
    /// `B_{j0-1}`, from `f_{m-1}`.
    pub sub_leading_b: Rational,
    /// The same coefficient forced by `f_{m-1}` when the companion vanishes:
    /// `(m-1) * B_{j0-1}` (negative).
    pub forced_negative: Rational,
    /// Symbolic companion `A_{l-(j0-1)m-1}`.
    pub companion: Polynomial,
    /// If the companion is nonzero, `f_{m-1}` would need degree
    /// `(j0-1)(α+1)`, but its closed form has degree `companion_degree`.
    pub companion_degree: u32,
    /// The reconstructed chain carries exactly these ledger values.
    pub chain_agrees: bool,
    /// The full linear system of the chain at this `l` has no solution.
    pub chain_inconsistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub m: u32,
    pub alpha: u32,
    /// Candidates for `j0` are `1..=max_j0`, `max_j0 = (m-1)α + 1`.
    pub max_j0: u32,
    /// `j0 = 1` means `l = m` and `f_m = f_l = 1`, but the closed form of
    /// `f_m` is zero or has degree at least `(m-1)α`, recorded here.
    pub j0_one_excluded_degree: u32,
    /// `a != 0`: `(j0-1)(α+1) = (m-1)α + 1`.
    pub case1: CaseResolution,
    /// `a = 0`, `b != 0`: `(j0-1)(α+1) = (m-1)α`.
    pub case2: CaseResolution,
    /// `a = b = 0`.
    pub case3: CaseResolution,
}

impl Certificate {
    /// Every branch closed, and every sign clash is a genuine clash backed by
    /// the reconstructed chain.
    pub fn is_complete(&self) -> bool {
        let closed = |c: &CaseResolution| match c {
            CaseResolution::NoAdmissibleJ0 { .. } => true,
            CaseResolution::DegreeAbsurdity { min_degree } => *min_degree > 0,
            CaseResolution::SignClash(s) => {
                s.forced_positive.is_positive()
                    && s.forced_negative.is_negative()
                    && s.chain_agrees
                    && s.chain_inconsistent
            }
        };
        self.j0_one_excluded_degree >= 1
            && matches!(
                self.case1,
                CaseResolution::NoAdmissibleJ0 { .. } | CaseResolution::SignClash(_)
            )
            && matches!(
                self.case2,
                CaseResolution::NoAdmissibleJ0 { .. } | CaseResolution::SignClash(_)
            )
            && matches!(self.case3, CaseResolution::DegreeAbsurdity { .. })
            && closed(&self.case1)
            && closed(&self.case2)
            && closed(&self.case3)
    }
}

/// Runs the case analysis for `(m, α)`.
pub fn contradiction_certificate(m: u32, alpha: u32) -> Result<Certificate> {
    if m < 2 || alpha < 1 {
        return Err(Error::InvalidParams(format!(
            "need m >= 2 and alpha >= 1, got m={m}, alpha={alpha}"
        )));
    }
    let max_j0 = (m - 1) * alpha + 1;
    let case = |rhs: u32, companion_degree: u32| -> Result<CaseResolution> {
        let Some(j0) = (2..=max_j0).find(|j0| (j0 - 1) * (alpha + 1) == rhs) else {
            return Ok(CaseResolution::NoAdmissibleJ0 { rhs });
        };
        sign_clash(m, alpha, j0, rhs, companion_degree).map(|s| CaseResolution::SignClash(Box::new(s)))
    };
    Ok(Certificate {
        m,
        alpha,
        max_j0,
        j0_one_excluded_degree: (m - 1) * alpha,
        case1: case((m - 1) * alpha + 1, (m - 2) * alpha + 1)?,
        case2: case((m - 1) * alpha, (m - 2) * alpha)?,
        case3: CaseResolution::DegreeAbsurdity { min_degree: alpha + 1 },
    })
}

fn sign_clash(m: u32, alpha: u32, j0: u32, degree: u32, companion_degree: u32) -> Result<SignClash> {
    let cfg = LemmaConfig::new(m, alpha, j0)?;
    let ledger = leading_ledger(&cfg);
    let j = j0 - 1;
    let leading_a = ledger.a[&j].clone();
    let sub_leading_b = ledger.b[&j].clone();
    let companion = ledger.companion[&j].clone();

    let seq = reconstruct_sequence(&cfg);
    let fm = seq.entry(i64::from(m));
    let fm1 = seq.entry(i64::from(m) - 1);
    let a1 = alpha + 1;
    let chain_agrees = fm.degree_in(X) == Degree::Finite(j * a1)
        && fm.coefficient_of_power(X, j * a1).as_constant().as_ref() == Some(&leading_a)
        && fm1.coefficient_of_power(X, (j - 1) * a1 + 1).as_constant().as_ref() == Some(&sub_leading_b)
        && fm1.coefficient_of_power(X, j * a1) == companion;
    let chain_inconsistent = solve_chain(&cfg, &seq)?.is_none();

    Ok(SignClash {
        j0,
        l: cfg.l(),
        degree,
        forced_positive: &leading_a * int(i64::from(m)),
        forced_negative: &sub_leading_b * int(i64::from(m) - 1),
        leading_a,
        sub_leading_b,
        companion,
        companion_degree,
        chain_agrees,
        chain_inconsistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn cfg(m: u32, alpha: u32, j0: u32) -> LemmaConfig {
        LemmaConfig::new(m, alpha, j0).unwrap()
    }

    fn x_part(f: &Polynomial, k: u32) -> Option<Rational> {
        f.coefficient_of_power(X, k).as_constant()
    }

    #[test]
    fn layout() {
        let c = cfg(3, 1, 2);
        assert_eq!(c.l(), 6);
        assert_eq!(c.arity(), 4 + 2 + 4);
        assert_eq!(c.lambda(1), 4);
        assert_eq!(c.lambda(2), 5);
        assert_eq!(c.constant(3), 6);
        assert_eq!(c.constant(0), 9);
        let names = symbol_names(&c);
        assert_eq!(names[6], "c3");
        assert_eq!(names[9], "c0");
        assert!(LemmaConfig::new(1, 1, 1).is_err());
        assert!(LemmaConfig::unrestricted(1, 1, 1).is_ok());
        assert!(LemmaConfig::new(2, 0, 1).is_err());
    }

    #[test]
    fn first_step_of_chain() {
        let c = cfg(2, 1, 1);
        let seq = reconstruct_sequence(&c);
        let n = c.arity();
        let expected = &Polynomial::var(n, X).pow(2) + &Polynomial::var(n, c.constant(0));
        assert_eq!(seq.entry(0), expected);
        assert_eq!(seq.entry(2), Polynomial::one(n));
        assert_eq!(seq.entry(1), Polynomial::var(n, c.lambda(1)));
    }

    #[test]
    fn minus_l_term() {
        let c = cfg(2, 1, 2);
        let seq = reconstruct_sequence(&c);
        assert_eq!(x_part(&seq.entry(1), 1), Some(rational(-4, 1)));
        assert_eq!(seq.entry(4), Polynomial::one(c.arity()));
    }

    #[test]
    fn schedule_examples() {
        let s = degree_schedule(&cfg(2, 1, 2));
        assert_eq!(s[&2], DegreeBound::Exact(2));
        assert_eq!(s[&0], DegreeBound::Exact(4));
        assert_eq!(s[&3], DegreeBound::AtMost(0));
        assert_eq!(s[&1], DegreeBound::AtMost(2));
        let s = degree_schedule(&cfg(3, 2, 1));
        assert_eq!(s[&0], DegreeBound::Exact(3));
        assert_eq!(s[&1], DegreeBound::AtMost(0));
        assert_eq!(s[&2], DegreeBound::AtMost(0));
    }

    #[test]
    fn schedule_holds_on_grid() {
        for m in 2..=5 {
            for alpha in 1..=3 {
                for j0 in 1..=4 {
                    let c = cfg(m, alpha, j0);
                    let report = check_degree_schedule(&reconstruct_sequence(&c), &c);
                    assert!(
                        report.is_clean(),
                        "{c:?}: {:?}",
                        report.violations().collect::<Vec<_>>()
                    );
                }
            }
        }
    }

    #[test]
    fn low_closed_forms() {
        let c = cfg(3, 2, 1);
        let n = c.arity();
        let f = closed_forms_low(&c);
        let (x, a, b) = (Polynomial::var(n, X), Polynomial::var(n, A), Polynomial::var(n, B));
        assert_eq!(f[0], &(&a * &x) + &b);
        let f2 = (&(&a * &x.pow(3)) + &(&b * &x.pow(2))).scale(&rational(1, 2));
        assert_eq!(f[1], f2);
        let f3 = (&(&a * &x.pow(5)) + &(&b * &x.pow(4))).scale(&rational(1, 3));
        assert_eq!(f[2], f3);
    }

    #[test]
    fn ledger_values_and_signs() {
        let c = cfg(2, 1, 2);
        let led = leading_ledger(&c);
        assert_eq!(led.a[&1], rational(2, 1));
        assert_eq!(led.a[&2], rational(1, 1));
        assert_eq!(led.b[&1], rational(-4, 1));
        for m in 2..=5 {
            for alpha in 1..=3 {
                for j0 in 1..=5 {
                    let led = leading_ledger(&cfg(m, alpha, j0));
                    assert!(led.a.values().all(Signed::is_positive));
                    assert!(led.b.values().all(Signed::is_negative));
                }
            }
        }
    }

    #[test]
    fn ledger_matches_chain() {
        for m in 2..=4 {
            for alpha in 1..=3 {
                for j0 in 1..=4 {
                    let c = cfg(m, alpha, j0);
                    let seq = reconstruct_sequence(&c);
                    let led = leading_ledger(&c);
                    let l = i64::from(c.l());
                    let (m64, a1) = (i64::from(m), alpha + 1);
                    for (&j, value) in &led.a {
                        let f = seq.entry(l - i64::from(j) * m64);
                        assert_eq!(x_part(&f, j * a1).as_ref(), Some(value), "A_{j} at {c:?}");
                    }
                    for (&j, value) in &led.b {
                        let f = seq.entry(l - i64::from(j) * m64 - 1);
                        if j < j0 {
                            assert_eq!(x_part(&f, (j - 1) * a1 + 1).as_ref(), Some(value), "B_{j} at {c:?}");
                            assert_eq!(f.coefficient_of_power(X, j * a1), led.companion[&j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn residual_rows_structure() {
        for (m, alpha, j0) in [(2, 1, 1), (2, 1, 2), (3, 2, 2)] {
            let c = cfg(m, alpha, j0);
            let n = c.arity();
            let seq = reconstruct_sequence(&c);
            let (a, b) = (Polynomial::var(n, A), Polynomial::var(n, B));
            let rows = residual_rows(&residual(&c, &seq, &a, &b).unwrap());
            assert!(
                rows.keys().all(|&i| i < m),
                "{c:?}: {:?}",
                rows.keys().collect::<Vec<_>>()
            );
            let bottom = &seq.entry(1) - &(&(&a * &Polynomial::var(n, X)) + &b);
            assert_eq!(rows.get(&0).cloned().unwrap_or_else(|| Polynomial::zero(n)), bottom);
        }
    }

    #[test]
    fn chain_has_no_solution_when_m_at_least_two() {
        for m in 2..=4 {
            for alpha in 1..=2 {
                for j0 in 1..=3 {
                    let c = cfg(m, alpha, j0);
                    assert!(solve_chain(&c, &reconstruct_sequence(&c)).unwrap().is_none(), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn chain_solves_when_m_is_one() {
        for alpha in 1..=3 {
            let c = LemmaConfig::unrestricted(1, alpha, 1).unwrap();
            let seq = reconstruct_sequence(&c);
            let sol = solve_chain(&c, &seq).unwrap().expect("m = 1 admits a preimage");
            assert_eq!(sol.values[0], rational(0, 1));
            assert_eq!(sol.values[1], rational(1, 1));
            let images = sol.images(&c);
            let n = c.arity();
            let res = residual(&c, &seq, &Polynomial::var(n, A), &Polynomial::var(n, B)).unwrap();
            assert!(res.substitute(&images).unwrap().is_zero());
        }
    }

    #[test]
    fn certificate_examples() {
        let cert = contradiction_certificate(2, 1).unwrap();
        let CaseResolution::SignClash(s) = &cert.case1 else {
            panic!("{:?}", cert.case1)
        };
        assert_eq!(s.j0, 2);
        assert!(s.forced_positive.is_positive() && s.forced_negative.is_negative());
        assert!(cert.is_complete());

        let cert = contradiction_certificate(3, 1).unwrap();
        assert_eq!(cert.case1, CaseResolution::NoAdmissibleJ0 { rhs: 3 });

        let cert = contradiction_certificate(2, 2).unwrap();
        assert_eq!(cert.case2, CaseResolution::NoAdmissibleJ0 { rhs: 2 });
        assert!(matches!(&cert.case1, CaseResolution::SignClash(s) if s.j0 == 2));
        assert!(contradiction_certificate(1, 1).is_err());
    }

    #[test]
    fn certificates_complete_on_grid() {
        for m in 2..=5 {
            for alpha in 1..=3 {
                let cert = contradiction_certificate(m, alpha).unwrap();
                assert!(cert.is_complete(), "{cert:?}");
            }
        }
    }
}
