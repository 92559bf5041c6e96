//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators and kept primitive (content one), then
//! reduced to echelon form with fraction-free row combinations
//! `a*r - b*p` followed by division by the content. Solutions and kernel
//! vectors come from rational back-substitution on the echelon form. Rows are
//! stored sparsely since the systems built from derivations have a handful of
//! nonzeros per row.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RationalMatrix { rows: n, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut s = SparseMatrix::new(self.cols);
        for i in 0..self.rows {
            s.push_row(
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect(),
            );
        }
        s
    }

    /// Inverse of a square matrix, or `None` if it is singular.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let sparse = self.to_sparse();
        let mut out = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            let sol = sparse.solve(&e).ok()??;
            if !sol.kernel.is_empty() {
                return None;
            }
            for (i, v) in sol.particular.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }
}

/// Row-sparse rational matrix; entries listed as `(column, value)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    /// Appends a row. Entries may come in any order; repeated columns are summed.
    pub fn push_row(&mut self, mut entries: Vec<(usize, Rational)>) {
        entries.sort_by_key(|(j, _)| *j);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (j, v) in entries {
            assert!(j < self.cols, "column {j} out of range for {} columns", self.cols);
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc += v,
                _ => merged.push((j, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.rows.push(merged);
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_entries(&self, row: usize) -> &[(usize, Rational)] {
        &self.rows[row]
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect())
    }

    fn echelon(&self, rhs: Option<&[Rational]>) -> Echelon {
        let width = self.cols + usize::from(rhs.is_some());
        let mut ech = Echelon::new(width);
        for (i, row) in self.rows.iter().enumerate() {
            let mut entries: Vec<(usize, &Rational)> = row.iter().map(|(j, v)| (*j, v)).collect();
            if let Some(b) = rhs {
                if !b[i].is_zero() {
                    entries.push((self.cols, &b[i]));
                }
            }
            ech.insert(integer_row(&entries));
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon(None).rank()
    }

    /// Rank over `Z/prime`, or `None` if some denominator vanishes there.
    /// Never exceeds the rational rank, so `Some(cols)` certifies a trivial
    /// kernel without exact elimination.
    pub fn rank_mod_prime(&self, prime: u64) -> Option<usize> {
        ModMatrix::from_sparse(self, prime).map(|m| m.rank())
    }

    pub fn kernel(&self) -> KernelBasis {
        let ech = self.echelon(None);
        KernelBasis::normalized(self.cols, ech.kernel_vectors(self.cols))
    }

    /// One exact solution of `M x = b` plus a basis of the homogeneous
    /// solutions, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Solution>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: b.len(),
            });
        }
        let ech = self.echelon(Some(b));
        if ech.pivot_of[self.cols].is_some() {
            return Ok(None);
        }
        let particular = ech.back_substitute(self.cols, None);
        let kernel = KernelBasis::normalized(self.cols, ech.kernel_vectors(self.cols));
        Ok(Some(Solution { particular, kernel }))
    }
}

/// Dense matrix over `Z/prime`, `prime < 2^32`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    prime: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, prime: u64) -> Self {
        assert!(prime > 1 && prime < 1 << 32, "prime out of range");
        ModMatrix {
            prime,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Reduction of a rational matrix; `None` if a denominator vanishes.
    pub fn from_sparse(m: &SparseMatrix, prime: u64) -> Option<Self> {
        let mut out = ModMatrix::zeros(m.rows(), m.cols(), prime);
        for (i, row) in m.rows.iter().enumerate() {
            for (j, v) in row {
                let den = reduce_mod(v.denom(), prime);
                if den == 0 {
                    return None;
                }
                out.data[i * out.cols + j] = reduce_mod(v.numer(), prime) * inverse_mod(den, prime) % prime;
            }
        }
        Some(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &ModMatrix, c: i64) {
        assert_eq!(
            (self.rows, self.cols, self.prime),
            (other.rows, other.cols, other.prime)
        );
        let p = self.prime;
        let c = c.rem_euclid(p as i64) as u64;
        if c == 0 {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if *b != 0 {
                *a = (*a + c * b) % p;
            }
        }
    }

    pub fn rank(&self) -> usize {
        let p = self.prime;
        let mut pivots: Vec<Option<Vec<u64>>> = vec![None; self.cols];
        let mut rank = 0;
        for row in self.data.chunks(self.cols.max(1)).take(self.rows) {
            let mut dense = row.to_vec();
            for j in 0..self.cols {
                if dense[j] == 0 {
                    continue;
                }
                match &pivots[j] {
                    Some(piv) => {
                        let f = p - dense[j];
                        for k in j..self.cols {
                            if piv[k] != 0 {
                                dense[k] = (dense[k] + f * piv[k]) % p;
                            }
                        }
                    }
                    None => {
                        let inv = inverse_mod(dense[j], p);
                        for v in dense[j..].iter_mut() {
                            *v = *v * inv % p;
                        }
                        pivots[j] = Some(dense);
                        rank += 1;
                        break;
                    }
                }
            }
            if rank == self.cols {
                break;
            }
        }
        rank
    }
}

fn reduce_mod(v: &BigInt, prime: u64) -> u64 {
    v.mod_floor(&BigInt::from(prime)).iter_u64_digits().next().unwrap_or(0)
}

fn inverse_mod(a: u64, prime: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % prime, prime - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % prime;
        }
        base = base * base % prime;
        exp >>= 1;
    }
    acc
}

/// Basis of a null space, in reduced row echelon form (leading entry one,
/// pivots strictly increasing by column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    cols: usize,
    vectors: Vec<Vec<Rational>>,
}

impl KernelBasis {
    fn normalized(cols: usize, vectors: Vec<Vec<Rational>>) -> Self {
        KernelBasis {
            cols,
            vectors: rref(vectors),
        }
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<Rational>> {
        self.vectors
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Length of each vector (number of matrix columns).
    pub fn ambient(&self) -> usize {
        self.cols
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rational>,
    pub kernel: KernelBasis,
}

pub fn kernel(m: &RationalMatrix) -> KernelBasis {
    m.to_sparse().kernel()
}

pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Option<Solution>> {
    m.to_sparse().solve(b)
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.to_sparse().rank()
}

type Row = Vec<(usize, BigInt)>;

/// Clears denominators and divides by the content.
fn integer_row(entries: &[(usize, &Rational)]) -> Row {
    let mut lcm = BigInt::one();
    for (_, v) in entries {
        if !v.denom().is_one() {
            lcm = lcm.lcm(v.denom());
        }
    }
    let mut row: Row = entries
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| {
            let scaled = if lcm.is_one() {
                v.numer().clone()
            } else {
                v.numer() * (&lcm / v.denom())
            };
            (*j, scaled)
        })
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut Row) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let negate = first.1.is_negative();
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if negate {
        for (_, v) in row.iter_mut() {
            *v = -core::mem::take(v);
        }
    }
}

struct Echelon {
    pivot_of: Vec<Option<usize>>,
    rows: Vec<Row>,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon {
            pivot_of: vec![None; width],
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the existing pivots; keeps it if it is independent.
    fn insert(&mut self, mut row: Row) {
        while let Some(&(lead, _)) = row.first() {
            match self.pivot_of[lead] {
                Some(p) => row = cancel_leading(&row, &self.rows[p]),
                None => {
                    self.pivot_of[lead] = Some(self.rows.len());
                    self.rows.push(row);
                    return;
                }
            }
        }
    }

    /// Back-substitution over the first `cols` columns. With `free = Some(f)`
    /// solves the homogeneous system with `x_f = 1` and the other free
    /// variables zero; with `None` solves against the augmented column.
    fn back_substitute(&self, cols: usize, free: Option<usize>) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); cols];
        if let Some(f) = free {
            x[f] = Rational::one();
        }
        for c in (0..cols).rev() {
            let Some(p) = self.pivot_of[c] else { continue };
            let row = &self.rows[p];
            let mut acc = Rational::zero();
            for (j, a) in &row[1..] {
                if *j == cols {
                    if free.is_none() {
                        acc += Rational::from_integer(a.clone());
                    }
                } else if !x[*j].is_zero() {
                    acc -= &x[*j] * Rational::from_integer(a.clone());
                }
            }
            if !acc.is_zero() {
                x[c] = acc / Rational::from_integer(row[0].1.clone());
            }
        }
        x
    }

    fn kernel_vectors(&self, cols: usize) -> Vec<Vec<Rational>> {
        (0..cols)
            .filter(|&c| self.pivot_of[c].is_none())
            .map(|f| self.back_substitute(cols, Some(f)))
            .collect()
    }
}

/// `a*row - b*pivot` with `a`, `b` the leading entries divided by their gcd,
/// then made primitive. Both rows share the same leading column.
fn cancel_leading(row: &Row, pivot: &Row) -> Row {
    let g = row[0].1.gcd(&pivot[0].1);
    let a = &pivot[0].1 / &g;
    let b = &row[0].1 / &g;
    let mut out = Row::with_capacity(row.len() + pivot.len());
    let (mut i, mut k) = (1, 1);
    while i < row.len() || k < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let ck = pivot.get(k).map_or(usize::MAX, |e| e.0);
        if ci < ck {
            out.push((ci, &a * &row[i].1));
            i += 1;
        } else if ck < ci {
            out.push((ck, -(&b * &pivot[k].1)));
            k += 1;
        } else {
            let v = &a * &row[i].1 - &b * &pivot[k].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            k += 1;
        }
    }
    make_primitive(&mut out);
    out
}

/// Dense Gauss-Jordan on a small list of row vectors; drops zero rows.
fn rref(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            let (pivot_row, other) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (o, pv) in other.iter_mut().zip(pivot_row) {
                if !pv.is_zero() {
                    *o -= &factor * pv;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}
