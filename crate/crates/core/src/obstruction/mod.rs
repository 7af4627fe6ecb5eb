//! Almost complex structures via the Wu / Hirzebruch–Hopf criterion.
//!
//! A closed oriented 4-manifold with torsion-free `H₂` carries an almost
//! complex structure with `c₁ = h` exactly when `h² = 3τ + 2χ` and
//! `h ≡ w₂ (mod 2)`. The decision is tiered:
//!
//! 0. unimodular forms: characteristic vectors square to `τ (mod 8)`, so a
//!    target in the wrong class is impossible;
//! 1. `kH` with `w₂ = 0`: every solution is `h = 2x` and
//!    `q(2x) = 4·q(x) = 8·Σ x₂ᵢ₋₁x₂ᵢ`. Since `Σ x₂ᵢ₋₁x₂ᵢ` takes every
//!    integer value (already on the first block), a solution exists iff the
//!    target is divisible by 8, witnessed by `(target/4, 2, 0, …, 0)`;
//! 2. `H` itself: `2ab = target` has finitely many solutions for a nonzero
//!    target and they are read off the divisors;
//! 3. anything else: a box search in order of increasing max-norm, complete
//!    for definite forms once the proven coordinate bound fits in the box.

mod search;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{abelianize, AbelianGroup, Presentation};
use crate::error::{Error, Result};
use crate::forms::IntersectionForm;

use search::PreparedSearch;

/// Box half-width used when the caller does not pick one.
pub const DEFAULT_SEARCH_BOUND: u64 = 32;
/// Coordinates stay well inside `i64` so squares never overflow.
pub const MAX_SEARCH_BOUND: u64 = 1 << 31;

/// Classical invariants of one closed oriented 4-manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldInvariants {
    pub name: String,
    pub chi: BigInt,
    pub tau: BigInt,
    /// Intersection form on `H₂` modulo torsion; its rank is `b₂`.
    pub form: IntersectionForm,
    pub b1: usize,
    pub h1: AbelianGroup,
    /// Mod-2 coordinates of `w₂`; `None` means derive it from the form.
    pub w2: Option<Vec<bool>>,
    pub presentation: Option<Presentation>,
}

impl ManifoldInvariants {
    pub fn b2(&self) -> usize {
        self.form.rank()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernWitness {
    #[serde(with = "crate::json::bigint_vec")]
    pub coefficients: Vec<BigInt>,
    #[serde(with = "crate::json::bigint")]
    pub square: BigInt,
}

impl ChernWitness {
    pub fn new(form: &IntersectionForm, coefficients: Vec<BigInt>) -> Result<Self> {
        let square = form.evaluate(&coefficients)?;
        Ok(Self {
            coefficients,
            square,
        })
    }

    fn from_small(form: &IntersectionForm, coefficients: &[i64]) -> Self {
        let coefficients = coefficients.iter().map(|&v| BigInt::from(v)).collect();
        Self::new(form, coefficients).expect("search vectors have the form's rank")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Exists,
    NotExists,
    ConditionallyExcluded,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Exists => "Exists",
            Status::NotExists => "NotExists",
            Status::ConditionallyExcluded => "ConditionallyExcluded",
            Status::Unknown => "Unknown",
        })
    }
}

/// Outcome of one structure question.
///
/// `Exists` always carries a witness and `ConditionallyExcluded` always
/// lists its assumptions. An almost-complex `Unknown` records the exhausted
/// search bound; classification verdicts do not search and leave it empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureVerdict {
    pub status: Status,
    pub witness: Option<ChernWitness>,
    pub reasons: Vec<String>,
    pub assumptions: Vec<String>,
    pub search_bound: Option<u64>,
}

impl StructureVerdict {
    pub fn exists(witness: ChernWitness, reasons: Vec<String>) -> Self {
        Self {
            status: Status::Exists,
            witness: Some(witness),
            reasons,
            assumptions: Vec::new(),
            search_bound: None,
        }
    }

    pub fn not_exists(reasons: Vec<String>) -> Self {
        Self {
            status: Status::NotExists,
            witness: None,
            reasons,
            assumptions: Vec::new(),
            search_bound: None,
        }
    }

    pub fn conditionally_excluded(assumptions: Vec<String>, reasons: Vec<String>) -> Self {
        assert!(!assumptions.is_empty(), "conditional exclusion needs an assumption");
        Self {
            status: Status::ConditionallyExcluded,
            witness: None,
            reasons,
            assumptions,
            search_bound: None,
        }
    }

    pub fn unknown(search_bound: Option<u64>, reasons: Vec<String>) -> Self {
        Self {
            status: Status::Unknown,
            witness: None,
            reasons,
            assumptions: Vec::new(),
            search_bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinStatus {
    Spin,
    NotSpin,
    Indeterminate,
}

impl std::fmt::Display for SpinStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpinStatus::Spin => "Spin",
            SpinStatus::NotSpin => "NotSpin",
            SpinStatus::Indeterminate => "Indeterminate",
        })
    }
}

/// `3τ + 2χ`, the square every first Chern class must have.
pub fn wu_target(chi: &BigInt, tau: &BigInt) -> BigInt {
    tau * 3 + chi * 2
}

/// Spin iff the form is even, valid when `H₁` has no 2-torsion.
pub fn is_spin(form: &IntersectionForm, h1: &AbelianGroup) -> SpinStatus {
    if h1.has_two_torsion() {
        SpinStatus::Indeterminate
    } else if form.is_even() {
        SpinStatus::Spin
    } else {
        SpinStatus::NotSpin
    }
}

/// The mod-2 class `c` with `(Q·c)ᵢ ≡ Qᵢᵢ (mod 2)`, i.e. the reduction of
/// every characteristic vector.
pub fn characteristic_residue(form: &IntersectionForm) -> Result<Vec<bool>> {
    if !form.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    let n = form.rank();
    let q = form.matrix();
    // augmented rows over GF(2)
    let mut rows: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut r: Vec<bool> = (0..n).map(|j| q.get(i, j).is_odd()).collect();
            r.push(q.get(i, i).is_odd());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| rows[r][col])
            .expect("odd determinant makes the system invertible mod 2");
        rows.swap(col, pivot);
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && row[col] {
                for (cell, &p) in row.iter_mut().zip(&pivot_row) {
                    *cell ^= p;
                }
            }
        }
    }
    Ok(rows.into_iter().map(|r| r[n]).collect())
}

/// Necessary condition for a characteristic vector of square `target` on a
/// unimodular form: `target ≡ τ(Q) (mod 8)`.
pub fn mod8_filter(form: &IntersectionForm, target: &BigInt, w2: &[bool]) -> Result<bool> {
    let residue = characteristic_residue(form)?;
    if residue != w2 {
        return Err(Error::Invalid(vec![format!(
            "w2 {} is not the characteristic class {}",
            bits(w2),
            bits(&residue)
        )]));
    }
    let sig = BigInt::from(form.signature()?);
    Ok((target - sig).mod_floor(&BigInt::from(8)).is_zero())
}

fn bits(w: &[bool]) -> String {
    if w.is_empty() {
        return "()".into();
    }
    w.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(",")
}

/// The mod-2 class the Wu congruence is checked against.
pub fn wu_class(m: &ManifoldInvariants) -> Result<Vec<bool>> {
    let n = m.form.rank();
    match &m.w2 {
        Some(w) => {
            if w.len() != n {
                return Err(Error::Invalid(vec![format!(
                    "w2 has {} entries but b2 = {n}",
                    w.len()
                )]));
            }
            if m.form.is_unimodular() {
                let residue = characteristic_residue(&m.form)?;
                if &residue != w {
                    return Err(Error::Invalid(vec![format!(
                        "w2 {} is not the characteristic class {}",
                        bits(w),
                        bits(&residue)
                    )]));
                }
            }
            Ok(w.clone())
        }
        None if m.form.is_even() => Ok(vec![false; n]),
        None if m.form.is_unimodular() => characteristic_residue(&m.form),
        None => Err(Error::Invalid(vec![
            "w2 cannot be derived for an odd non-unimodular form".into(),
        ])),
    }
}

fn check_bound(bound: u64) -> Result<i64> {
    if bound > MAX_SEARCH_BOUND {
        return Err(Error::Domain(format!(
            "search bound {bound} exceeds {MAX_SEARCH_BOUND}"
        )));
    }
    Ok(bound as i64)
}

fn mod8_reason(form: &IntersectionForm, target: &BigInt) -> String {
    let eight = BigInt::from(8);
    let sig = BigInt::from(form.signature().unwrap_or(0)).mod_floor(&eight);
    format!(
        "mod-8 obstruction: characteristic squares are {sig} mod 8, target {target} is {} mod 8",
        target.mod_floor(&eight)
    )
}

/// Even divisor-pair solutions of `2ab = target` on `H`, sorted.
/// `None` when the solution set is infinite (`target = 0` with a free axis).
fn hyperbolic_plane_solutions(target: &BigInt, w2: &[bool]) -> Option<Vec<(BigInt, BigInt)>> {
    let parity_ok = |a: &BigInt, b: &BigInt| a.is_odd() == w2[0] && b.is_odd() == w2[1];
    if target.is_zero() {
        return if w2[0] && w2[1] { Some(Vec::new()) } else { None };
    }
    if target.is_odd() {
        return Some(Vec::new());
    }
    let half: BigInt = target / 2;
    let n = half.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let e = &n / &d;
            for x in [d.clone(), e] {
                for s in [1, -1] {
                    let a = &x * s;
                    let b = &half / &a;
                    if parity_ok(&a, &b) {
                        out.push((a, b));
                    }
                }
            }
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn min_norm_first(solutions: &[(BigInt, BigInt)]) -> Option<&(BigInt, BigInt)> {
    solutions
        .iter()
        .min_by(|x, y| {
            let nx = x.0.abs().max(x.1.abs());
            let ny = y.0.abs().max(y.1.abs());
            nx.cmp(&ny).then_with(|| x.cmp(y))
        })
}

/// Per-coordinate bound for a definite form: `xᵢ² ≤ |target|·(Q⁻¹)ᵢᵢ`.
/// Returns `Err(())` when the target has the wrong sign for the form.
fn definite_coordinate_bound(form: &IntersectionForm, target: &BigInt) -> Option<std::result::Result<BigInt, ()>> {
    let n = form.rank() as i64;
    let sig = form.signature().ok()?;
    if n == 0 || sig.abs() != n {
        return None;
    }
    let positive = sig > 0;
    if (positive && target.is_negative()) || (!positive && target.is_positive()) {
        return Some(Err(()));
    }
    let inverse_diag = inverse_diagonal(form);
    let t = BigRational::from_integer(target.abs());
    let bound = inverse_diag
        .into_iter()
        .map(|d| (&t * d.abs()).floor().to_integer().sqrt())
        .max()
        .unwrap_or_else(BigInt::zero);
    Some(Ok(bound))
}

fn inverse_diagonal(form: &IntersectionForm) -> Vec<BigRational> {
    let n = form.rank();
    let q = form.matrix();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| BigRational::from_integer(q.get(i, j).clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("nondegenerate");
        a.swap(col, p);
        let pivot = a[col][col].clone();
        for cell in a[col].iter_mut() {
            *cell /= &pivot;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (cell, p) in row.iter_mut().zip(&pivot_row) {
                    *cell -= &f * p;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n + i].clone()).collect()
}

/// Tiered existence decision for `h` with `q(h) = 3τ + 2χ`, `h ≡ w₂`.
pub fn decide_almost_complex(m: &ManifoldInvariants, bound: u64) -> Result<StructureVerdict> {
    let box_bound = check_bound(bound)?;
    let w2 = wu_class(m)?;
    let form = &m.form;
    let target = wu_target(&m.chi, &m.tau);

    if form.is_unimodular() && !mod8_filter(form, &target, &w2)? {
        return Ok(StructureVerdict::not_exists(vec![mod8_reason(form, &target)]));
    }

    if form.hyperbolic_rank().is_some() && w2.iter().all(|b| !b) {
        let eight = BigInt::from(8);
        if !target.is_multiple_of(&eight) {
            return Ok(StructureVerdict::not_exists(vec![format!(
                "hyperbolic closed form: even classes square to multiples of 8, target {target} is not"
            )]));
        }
        let mut coeffs = vec![BigInt::zero(); form.rank()];
        coeffs[0] = &target / 4;
        coeffs[1] = BigInt::from(2);
        let witness = ChernWitness::new(form, coeffs)?;
        return Ok(StructureVerdict::exists(
            witness,
            vec!["hyperbolic closed form: target is divisible by 8".into()],
        ));
    }

    if form.hyperbolic_rank() == Some(1) {
        if let Some(solutions) = hyperbolic_plane_solutions(&target, &w2) {
            return Ok(match min_norm_first(&solutions) {
                Some((a, b)) => StructureVerdict::exists(
                    ChernWitness::new(form, vec![a.clone(), b.clone()])?,
                    vec!["divisor enumeration of 2ab = target".into()],
                ),
                None => StructureVerdict::not_exists(vec![format!(
                    "divisor enumeration: 2ab = {target} has no solution of the required parity"
                )]),
            });
        }
    }

    let mut limit = box_bound;
    let mut proven = false;
    match definite_coordinate_bound(form, &target) {
        Some(Err(())) => {
            return Ok(StructureVerdict::not_exists(vec![format!(
                "definite form cannot represent target {target} of the opposite sign"
            )]))
        }
        Some(Ok(b)) => {
            if let Some(b) = b.to_i64().filter(|&b| b <= box_bound) {
                limit = b;
                proven = true;
            }
        }
        None => {}
    }

    let search = PreparedSearch::new(form, &target, &w2, limit);
    Ok(match search.first(limit) {
        Some(x) => StructureVerdict::exists(
            ChernWitness::from_small(form, &x),
            vec![format!("box search: minimal max-norm witness, norm {}", max_norm(&x))],
        ),
        None if proven => StructureVerdict::not_exists(vec![format!(
            "definite form: no solution within the proven coordinate bound {limit}"
        )]),
        None => StructureVerdict::unknown(
            Some(bound),
            vec![format!("no witness with max |coefficient| <= {bound}")],
        ),
    })
}

fn max_norm(x: &[i64]) -> i64 {
    x.iter().map(|v| v.abs()).max().unwrap_or(0)
}

/// Solutions of both Wu conditions found by [`enumerate_chern_classes`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernEnumeration {
    pub witnesses: Vec<ChernWitness>,
    /// True when the list is provably every solution, not just those in the box.
    pub complete: bool,
    pub bound: u64,
}

/// All `h` with `max |hᵢ| ≤ bound` satisfying the Wu conditions, in
/// lexicographic order. For `H` with a nonzero target the divisor listing
/// is complete and the bound is ignored.
pub fn enumerate_chern_classes(m: &ManifoldInvariants, bound: u64) -> Result<ChernEnumeration> {
    let box_bound = check_bound(bound)?;
    let w2 = wu_class(m)?;
    let form = &m.form;
    let target = wu_target(&m.chi, &m.tau);
    let done = |witnesses: Vec<ChernWitness>, complete: bool| ChernEnumeration {
        witnesses,
        complete,
        bound,
    };

    if form.is_unimodular() && !mod8_filter(form, &target, &w2)? {
        return Ok(done(Vec::new(), true));
    }
    if form.hyperbolic_rank() == Some(1) {
        if let Some(solutions) = hyperbolic_plane_solutions(&target, &w2) {
            let witnesses = solutions
                .into_iter()
                .map(|(a, b)| ChernWitness::new(form, vec![a, b]))
                .collect::<Result<Vec<_>>>()?;
            return Ok(done(witnesses, true));
        }
    }
    let mut limit = box_bound;
    let mut complete = false;
    match definite_coordinate_bound(form, &target) {
        Some(Err(())) => return Ok(done(Vec::new(), true)),
        Some(Ok(b)) => {
            if let Some(b) = b.to_i64().filter(|&b| b <= box_bound) {
                limit = b;
                complete = true;
            }
        }
        None => {}
    }
    let search = PreparedSearch::new(form, &target, &w2, limit);
    let witnesses = search
        .all(limit)
        .iter()
        .map(|x| ChernWitness::from_small(form, x))
        .collect();
    Ok(done(witnesses, complete))
}

/// A failed consistency check on a [`ManifoldInvariants`] record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: String,
    pub detail: String,
}

impl Violation {
    fn new(code: &str, detail: String) -> Self {
        Self {
            code: code.into(),
            detail,
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

/// Cross-checks `χ = 2 − 2b₁ + b₂`, `τ = signature(Q)`, `H₁` against `b₁`
/// and the presentation, and `w₂` against the characteristic class.
pub fn validate_invariants(m: &ManifoldInvariants) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let b2 = m.form.rank();
    let betti = BigInt::from(2) - BigInt::from(2 * m.b1 as u128) + BigInt::from(b2);
    if betti != m.chi {
        out.push(Violation::new(
            "betti identity",
            format!("2 - 2*{} + {b2} = {betti} but chi = {}", m.b1, m.chi),
        ));
    }
    match m.form.signature() {
        Ok(sig) if BigInt::from(sig) != m.tau => out.push(Violation::new(
            "signature",
            format!("form has signature {sig} but tau = {}", m.tau),
        )),
        Ok(_) => {}
        Err(_) => out.push(Violation::new("degenerate form", "determinant is zero".into())),
    }
    if m.h1.rank != m.b1 {
        out.push(Violation::new(
            "h1 rank",
            format!("h1 = {} has rank {} but b1 = {}", m.h1, m.h1.rank, m.b1),
        ));
    }
    if let Some(p) = &m.presentation {
        let got = abelianize(p);
        if got != m.h1 {
            out.push(Violation::new(
                "abelianization",
                format!("presentation abelianizes to {got} but h1 = {}", m.h1),
            ));
        }
    }
    if let Err(Error::Invalid(msgs)) = wu_class(m) {
        out.extend(msgs.into_iter().map(|d| Violation::new("w2", d)));
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests;
