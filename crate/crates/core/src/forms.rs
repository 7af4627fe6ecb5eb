//! Integral symmetric bilinear forms.
//!
//! Everything here is exact: entries are [`BigInt`], determinants use
//! Bareiss fraction-free elimination and the signature comes from a
//! congruence diagonalization over the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Converts a slice of machine integers into an exact coefficient vector.
pub fn vector(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn diagonal(values: &[BigInt]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(i, j)`. Panics when out of bounds.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return None;
        }
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self.entries[src * self.cols + j];
            self.entries[dst * self.cols + j] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * &self.entries[i * self.cols + src];
            self.entries[i * self.cols + dst] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.entries[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    #[cfg(test)]
    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.entries[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Exact determinant via Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    // Bareiss guarantees exact division here.
                    *a.get_mut(i, j) = num / &prev;
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Symmetric integer form together with cached parity, determinant and
/// signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    matrix: IntegerMatrix,
    even: bool,
    determinant: BigInt,
    signature: Option<i64>,
}

impl IntersectionForm {
    pub fn new(matrix: IntegerMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if let Some((row, col)) = matrix.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        let even = (0..matrix.rows()).all(|i| matrix.get(i, i).is_even());
        let determinant = matrix.determinant()?;
        let signature = if determinant.is_zero() {
            None
        } else {
            Some(congruence_signature(&matrix))
        };
        Ok(Self {
            matrix,
            even,
            determinant,
            signature,
        })
    }

    /// The hyperbolic plane `H`.
    pub fn hyperbolic() -> Self {
        Self::hyperbolic_sum(1)
    }

    /// `k` orthogonal copies of `H`.
    pub fn hyperbolic_sum(k: usize) -> Self {
        let n = 2 * k;
        let mut m = IntegerMatrix::zeros(n, n);
        for b in 0..k {
            *m.get_mut(2 * b, 2 * b + 1) = BigInt::one();
            *m.get_mut(2 * b + 1, 2 * b) = BigInt::one();
        }
        Self::new(m).expect("kH is symmetric")
    }

    pub fn diagonal(values: &[BigInt]) -> Self {
        Self::new(IntegerMatrix::diagonal(values)).expect("diagonal matrices are symmetric")
    }

    /// Block-diagonal sum of `self` and `other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let n = a + b;
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..a {
            for j in 0..a {
                *m.get_mut(i, j) = self.matrix.get(i, j).clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                *m.get_mut(a + i, a + j) = other.matrix.get(i, j).clone();
            }
        }
        Self::new(m).expect("direct sum of symmetric matrices is symmetric")
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant.abs().is_one()
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant.is_zero()
    }

    /// Positive minus negative inertia index. Degenerate forms are rejected.
    pub fn signature(&self) -> Result<i64> {
        self.signature.ok_or(Error::DegenerateForm)
    }

    /// Returns `k` when the matrix is literally the standard `kH`.
    pub fn hyperbolic_rank(&self) -> Option<usize> {
        let n = self.rank();
        if n == 0 || n % 2 != 0 {
            return None;
        }
        let is_kh = (0..n).all(|i| {
            (0..n).all(|j| {
                let partner = if i % 2 == 0 { i + 1 } else { i - 1 };
                let want = if j == partner { 1 } else { 0 };
                *self.matrix.get(i, j) == BigInt::from(want)
            })
        });
        is_kh.then_some(n / 2)
    }

    /// `xᵀ Q x`.
    pub fn evaluate(&self, x: &[BigInt]) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// `xᵀ Q y`.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        let n = self.rank();
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        let mut total = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let qy: BigInt = self
                .matrix
                .row(i)
                .iter()
                .zip(y)
                .filter(|(q, _)| !q.is_zero())
                .map(|(q, yj)| q * yj)
                .sum();
            total += xi * qy;
        }
        Ok(total)
    }

    /// `Q x` as a vector.
    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let n = self.rank();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        Ok((0..n)
            .map(|i| self.matrix.row(i).iter().zip(x).map(|(q, v)| q * v).sum())
            .collect())
    }

    /// The form `Sᵀ Q S`.
    pub fn congruent(&self, s: &IntegerMatrix) -> Result<Self> {
        let m = s.transpose().mul(&self.matrix)?.mul(s)?;
        Self::new(m)
    }
}

/// Sylvester inertia by symmetric Gaussian elimination over ℚ.
///
/// When the active block has an empty diagonal but a nonzero off-diagonal
/// entry `a_kj`, row/column `j` is added to `k`, which makes the new
/// diagonal entry `2·a_kj` nonzero.
fn congruence_signature(matrix: &IntegerMatrix) -> i64 {
    let n = matrix.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(matrix.get(i, j).clone()))
                .collect()
        })
        .collect();
    let mut sig = 0i64;
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(p) = (k + 1..n).find(|&p| !a[k][p].is_zero()) {
                for j in 0..n {
                    let v = a[p][j].clone();
                    a[k][j] += v;
                }
                for row in a.iter_mut() {
                    let v = row[p].clone();
                    row[k] += v;
                }
            } else {
                // zero row: a null direction, contributes nothing
                continue;
            }
        }
        let pivot = a[k][k].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] -= delta;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
        }
    }
    sig
}

impl fmt::Display for IntersectionForm {
    /// Canonical form descriptor, parseable by [`FormSpec`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.hyperbolic_rank() {
            return if k == 1 {
                f.write_str("H")
            } else {
                write!(f, "{k}H")
            };
        }
        if self.matrix.is_diagonal() {
            f.write_str("diag(")?;
            for i in 0..self.rank() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.matrix.get(i, i))?;
            }
            return f.write_str(")");
        }
        write!(f, "matrix {}", self.matrix)
    }
}

/// Textual form descriptor: `kH`, `H`, `diag(d1,...)` or `matrix [[..],..]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec(pub String);

impl FormSpec {
    pub fn build(&self) -> Result<IntersectionForm> {
        build_form(&self.0)
    }
}

impl FromStr for IntersectionForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        build_form(s)
    }
}

pub fn build_form(spec: &str) -> Result<IntersectionForm> {
    let mut p = Cursor::new(spec);
    p.skip_ws();
    let form = if p.eat_keyword("diag") {
        p.expect('(')?;
        // `diag()` is the rank-0 form of a rational homology sphere
        let values = if p.eat(')') { Vec::new() } else { p.int_list(')')? };
        IntersectionForm::diagonal(&values)
    } else if p.eat_keyword("matrix") {
        p.skip_ws();
        p.expect('[')?;
        let mut rows = Vec::new();
        loop {
            p.expect('[')?;
            rows.push(p.int_list(']')?);
            p.skip_ws();
            if p.eat(',') {
                continue;
            }
            p.expect(']')?;
            break;
        }
        let matrix = IntegerMatrix::from_rows(&rows).map_err(|e| Error::parse(e.to_string()))?;
        IntersectionForm::new(matrix)?
    } else {
        let count = if p.peek().is_some_and(|c| c == '+' || c == '-' || c.is_ascii_digit()) {
            let k = p.int()?;
            if !k.is_positive() {
                return Err(Error::parse(format!("hyperbolic count must be at least 1, got {k}")));
            }
            usize::try_from(k).map_err(|_| Error::parse("hyperbolic count too large"))?
        } else {
            1
        };
        p.skip_ws();
        p.expect('H')?;
        IntersectionForm::hyperbolic_sum(count)
    };
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(Error::parse(format!("unexpected trailing input at '{c}' in form '{spec}'")));
    }
    Ok(form)
}

/// Minimal character cursor shared by the small text grammars in this crate.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(format!(
                "expected '{c}' at offset {} in '{}'",
                self.pos, self.src
            )))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek().is_some_and(|c| c == '+' || c == '-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(Error::parse(format!(
                "expected integer at offset {start} in '{}'",
                self.src
            )));
        }
        let text = &self.src[start..self.pos];
        BigInt::from_str(text.trim_start_matches('+'))
            .map_err(|e| Error::parse(format!("bad integer '{text}': {e}")))
    }

    /// Comma-separated integers up to and including `close`.
    fn int_list(&mut self, close: char) -> Result<Vec<BigInt>> {
        let mut out = vec![self.int()?];
        while self.eat(',') {
            out.push(self.int()?);
        }
        self.expect(close)?;
        Ok(out)
    }
}
