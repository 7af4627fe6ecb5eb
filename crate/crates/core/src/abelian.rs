//! Smith normal form and finitely generated abelian groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Cursor, IntegerMatrix};

/// Result of [`smith_normal_form`]: `diagonal = left · M · right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// The diagonal entries `d₁ | d₂ | ...`, including trailing zeros.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal.get(i, i).clone()).collect()
    }
}

/// Computes `D = U·M·V` with `U`, `V` unimodular and `D` diagonal with a
/// nonnegative divisibility chain.
///
/// The pivot is always the entry of smallest nonzero absolute value in the
/// active block; each reduction step strictly shrinks it, so the loop
/// terminates.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return finish(d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(d, u, v)
}

fn finish(diagonal: IntegerMatrix, left: IntegerMatrix, right: IntegerMatrix) -> SmithForm {
    SmithForm {
        diagonal,
        left,
        right,
    }
}

fn smallest_nonzero(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let a = d.get(i, j).abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                let unit = a.is_one();
                best = Some(((i, j), a));
                if unit {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ ... ⊕ ℤ/d_s` with `2 ≤ d₁ | d₂ | ... | d_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Normalizes arbitrary cyclic orders into invariant factors.
    pub fn with_cyclic_summands(rank: usize, orders: &[BigInt]) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|o| !o.is_positive()) {
            return Err(Error::Domain(format!("cyclic order must be positive, got {bad}")));
        }
        let diag = IntegerMatrix::diagonal(orders);
        let torsion = smith_normal_form(&diag)
            .invariant_factors()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        Ok(Self { rank, torsion })
    }

    pub fn has_two_torsion(&self) -> bool {
        self.torsion.iter().any(Integer::is_even)
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

pub fn has_two_torsion(group: &AbelianGroup) -> bool {
    group.has_two_torsion()
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for d in &self.torsion {
            write!(f, " + Z/{d}")?;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Accepts `Z^<int>` followed by any number of `+ Z/<int>` summands.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Cursor::new(s);
        p.expect('Z')?;
        p.expect('^')?;
        let rank = p.int()?;
        let rank = usize::try_from(&rank).map_err(|_| Error::parse(format!("bad rank {rank}")))?;
        let mut orders = Vec::new();
        while p.eat('+') {
            p.expect('Z')?;
            p.expect('/')?;
            let d = p.int()?;
            if !d.is_positive() {
                return Err(Error::parse(format!("cyclic order must be positive in '{s}'")));
            }
            orders.push(d);
        }
        p.skip_ws();
        if p.peek().is_some() {
            return Err(Error::parse(format!("unexpected trailing input in group '{s}'")));
        }
        Self::with_cyclic_summands(rank, &orders)
    }
}

/// Finite presentation recorded through its abelianized relation vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generator_count: usize,
    relations: Vec<Vec<BigInt>>,
}

impl Presentation {
    pub fn new(generator_count: usize, relations: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(r) = relations.iter().find(|r| r.len() != generator_count) {
            return Err(Error::DimensionMismatch {
                expected: generator_count,
                found: r.len(),
            });
        }
        Ok(Self {
            generator_count,
            relations,
        })
    }

    /// Builds a presentation from relator words such as `"a1^-1 b1^-1 a1 b1 c d^-1"`.
    pub fn from_words<S: AsRef<str>>(generators: &[S], words: &[&str]) -> Result<Self> {
        let names: Vec<&str> = generators.iter().map(AsRef::as_ref).collect();
        let relations = words
            .iter()
            .map(|w| abelianize_word(&names, w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names.len(), relations)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    pub fn relation_matrix(&self) -> IntegerMatrix {
        let entries = self.relations.iter().flatten().cloned().collect();
        IntegerMatrix::new(self.relations.len(), self.generator_count, entries)
            .expect("relation lengths checked at construction")
    }

    /// `gens = n` followed by one `rel = ...` line per relation.
    pub fn to_text(&self) -> String {
        let mut out = format!("gens = {}\n", self.generator_count);
        for r in &self.relations {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            out.push_str(&format!("rel = {}\n", cells.join(",")));
        }
        out
    }

    pub fn parse_relation(text: &str) -> Result<Vec<BigInt>> {
        let mut p = Cursor::new(text);
        let mut out = vec![p.int()?];
        while p.eat(',') {
            out.push(p.int()?);
        }
        p.skip_ws();
        if p.peek().is_some() {
            return Err(Error::parse(format!("unexpected trailing input in relation '{text}'")));
        }
        Ok(out)
    }
}

/// Exponent-sum vector of a relator word over the named generators.
///
/// Tokens are separated by whitespace or `*`; each is a generator name with
/// an optional `^<int>` exponent.
pub fn abelianize_word(generators: &[&str], word: &str) -> Result<Vec<BigInt>> {
    let mut exps = vec![BigInt::zero(); generators.len()];
    for token in word.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let (name, exp) = match token.split_once('^') {
            Some((name, e)) => {
                let e = BigInt::from_str(e.trim_start_matches('+'))
                    .map_err(|_| Error::parse(format!("bad exponent in token '{token}'")))?;
                (name, e)
            }
            None => (token, BigInt::one()),
        };
        let idx = generators
            .iter()
            .position(|g| *g == name)
            .ok_or_else(|| Error::parse(format!("unknown generator '{name}' in word '{word}'")))?;
        exps[idx] += exp;
    }
    Ok(exps)
}

/// Cokernel of the relation matrix.
pub fn abelianize(p: &Presentation) -> AbelianGroup {
    if p.relations.is_empty() {
        return AbelianGroup::free(p.generator_count);
    }
    let factors = smith_normal_form(&p.relation_matrix()).invariant_factors();
    let nonzero = factors.iter().filter(|d| !d.is_zero()).count();
    AbelianGroup {
        rank: p.generator_count - nonzero,
        torsion: factors.into_iter().filter(|d| *d > BigInt::one()).collect(),
    }
}
