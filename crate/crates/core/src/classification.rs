//! Symplectic and complex obstructions.
//!
//! Both engines reduce to arithmetic on `(b₁, c₁², c₂)` with
//! `c₁² = 2χ + 3τ` and `c₂ = χ`. A blow-up keeps `b₁`, lowers `c₁²` by one
//! and raises `c₂` by one, so a surface with `k` blow-ups has minimal model
//! invariants `(c₁² + k, c₂ − k)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::forms::IntersectionForm;
use crate::obstruction::{ManifoldInvariants, StructureVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: &BigInt) -> Self {
        if v.is_negative() {
            Sign::Negative
        } else if v.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KodairaDimension {
    NegativeInfinity,
    Zero,
    One,
    Two,
}

impl fmt::Display for KodairaDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KodairaDimension::NegativeInfinity => "-inf",
            KodairaDimension::Zero => "0",
            KodairaDimension::One => "1",
            KodairaDimension::Two => "2",
        })
    }
}

/// Kodaira dimension of a minimal symplectic 4-manifold from the signs of
/// `c₁(ω)·[ω]` and `c₁²(ω)`. The rows for κ = 1, 2 test `c₁²` itself.
/// `None` for the one pair not covered, `c₁·[ω] = 0` with `c₁² > 0`.
pub fn symplectic_kodaira_dimension(c1_dot_omega: Sign, c1_squared: Sign) -> Option<KodairaDimension> {
    use Sign::*;
    match (c1_dot_omega, c1_squared) {
        (Positive, _) | (_, Negative) => Some(KodairaDimension::NegativeInfinity),
        (Zero, Zero) => Some(KodairaDimension::Zero),
        (Negative, Zero) => Some(KodairaDimension::One),
        (Negative, Positive) => Some(KodairaDimension::Two),
        (Zero, Positive) => None,
    }
}

/// Even forms contain no sphere of square −1, so they are minimal.
/// `false` means "not established", not "non-minimal".
pub fn is_minimal_by_parity(form: &IntersectionForm) -> bool {
    form.is_even()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SurfaceKind {
    RationalS2xS2,
    RationalCP2Blowups,
    Ruled { genus: u64 },
    ClassVII,
    Enriques,
    BiElliptic,
    Kodaira,
    K3,
    Torus,
    ProperlyElliptic,
    GeneralType,
}

impl SurfaceKind {
    /// Row of the ten-class table this kind belongs to.
    pub fn table_class(&self) -> u8 {
        match self {
            SurfaceKind::RationalS2xS2 | SurfaceKind::RationalCP2Blowups => 1,
            SurfaceKind::ClassVII => 2,
            SurfaceKind::Ruled { .. } => 3,
            SurfaceKind::Enriques => 4,
            SurfaceKind::BiElliptic => 5,
            SurfaceKind::Kodaira => 6,
            SurfaceKind::K3 => 7,
            SurfaceKind::Torus => 8,
            SurfaceKind::ProperlyElliptic => 9,
            SurfaceKind::GeneralType => 10,
        }
    }

    pub fn is_rational_or_ruled(&self) -> bool {
        matches!(
            self,
            SurfaceKind::RationalS2xS2 | SurfaceKind::RationalCP2Blowups | SurfaceKind::Ruled { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub blowups: u64,
}

impl SurfaceModel {
    /// Blow-ups and `CP²` itself have odd intersection forms.
    pub fn forces_odd_form(&self) -> bool {
        self.blowups > 0 || self.kind == SurfaceKind::RationalCP2Blowups
    }
}

fn subscript(n: u64) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32('₀' as u32 + c.to_digit(10).unwrap_or(0)).unwrap_or(c))
        .collect()
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SurfaceKind::RationalS2xS2 => f.write_str("S²×S²")?,
            SurfaceKind::RationalCP2Blowups => f.write_str("CP²")?,
            SurfaceKind::Ruled { genus } => write!(f, "S²×Σ{}", subscript(genus))?,
            SurfaceKind::ClassVII => f.write_str("class VII surface")?,
            SurfaceKind::Enriques => f.write_str("Enriques surface")?,
            SurfaceKind::BiElliptic => f.write_str("bi-elliptic surface")?,
            SurfaceKind::Kodaira => f.write_str("Kodaira surface")?,
            SurfaceKind::K3 => f.write_str("K3 surface")?,
            SurfaceKind::Torus => f.write_str("torus")?,
            SurfaceKind::ProperlyElliptic => f.write_str("properly elliptic surface")?,
            SurfaceKind::GeneralType => f.write_str("surface of general type")?,
        }
        if self.blowups > 0 {
            write!(f, " # {}·CP²bar", self.blowups)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelMatch {
    pub model: SurfaceModel,
    pub matched_on: Vec<String>,
    pub requires_pi1_check: bool,
}

impl ModelMatch {
    fn new(kind: SurfaceKind, blowups: u64, matched_on: &[&str]) -> Self {
        Self {
            model: SurfaceModel { kind, blowups },
            matched_on: matched_on.iter().map(|s| s.to_string()).collect(),
            requires_pi1_check: kind.is_rational_or_ruled(),
        }
    }
}

fn as_count(k: &BigInt) -> Option<u64> {
    if k.is_negative() {
        None
    } else {
        k.to_u64()
    }
}

/// Rational and ruled models whose numeric invariants match.
///
/// Rational: `S²×S² # k` with `χ = 4 + k`, `τ = −k`, or `CP² # k` with
/// `χ = 3 + k`, `τ = 1 − k`, both needing `b₁ = 0`. Ruled over `Σ_g′`:
/// `b₁ = 2g′`, `χ = 4(1 − g′) + k`, `τ = −k`. Models with odd forms are
/// dropped when `form_even` holds.
pub fn rational_ruled_models(b1: usize, chi: &BigInt, tau: &BigInt, form_even: bool) -> Vec<ModelMatch> {
    let mut out = Vec::new();
    let mut keep = |m: ModelMatch| {
        if !(form_even && m.model.forces_odd_form()) {
            out.push(m);
        }
    };
    let k = -tau;
    if b1 == 0 {
        if let Some(k) = as_count(&(chi - 4)).filter(|&c| BigInt::from(c) == -tau) {
            keep(ModelMatch::new(SurfaceKind::RationalS2xS2, k, &["b1", "chi", "tau"]));
        }
        if let Some(k) = as_count(&(chi - 3)).filter(|&c| BigInt::from(1) - BigInt::from(c) == *tau) {
            keep(ModelMatch::new(SurfaceKind::RationalCP2Blowups, k, &["b1", "chi", "tau"]));
        }
    }
    if b1 % 2 == 0 {
        let genus = (b1 / 2) as u64;
        if let Some(blowups) = as_count(&k) {
            let expected = BigInt::from(4) * (BigInt::from(1) - BigInt::from(genus)) + &k;
            if expected == *chi {
                keep(ModelMatch::new(SurfaceKind::Ruled { genus }, blowups, &["b1", "chi", "tau"]));
            }
        }
    }
    out.sort_by(|a, b| a.model.cmp(&b.model));
    out
}

/// Every table class whose minimal-model constraints are met for some
/// blow-up count `k ≥ 0`, using only the printed constraints.
///
/// Classes (2) and (10) admit a range of `k`; the smallest is reported.
pub fn ek_filter(b1: usize, c1sq: &BigInt, c2: &BigInt) -> Vec<ModelMatch> {
    use SurfaceKind::*;
    let mut out = Vec::new();
    // k fixed by c1sq_min = value, then c2_min checked exactly
    let fixed = |c1_min: BigInt, c2_min: BigInt| -> Option<u64> {
        let k = c1_min - c1sq;
        as_count(&k).filter(|_| c2 - &k == c2_min)
    };
    let zero = BigInt::zero;

    if b1 == 0 {
        if let Some(k) = fixed(BigInt::from(8), BigInt::from(4)) {
            out.push(ModelMatch::new(RationalS2xS2, k, &["b1", "c1sq", "c2"]));
        }
        if let Some(k) = fixed(BigInt::from(9), BigInt::from(3)) {
            out.push(ModelMatch::new(RationalCP2Blowups, k, &["b1", "c1sq", "c2"]));
        }
    }
    if b1 == 1 {
        // c1sq + k <= 0 and c2 - k >= 0
        let k_max = (-c1sq).min(c2.clone());
        if !k_max.is_negative() {
            out.push(ModelMatch::new(ClassVII, 0, &["b1", "c1sq", "c2"]));
        }
    }
    if b1 % 2 == 0 {
        let genus = BigInt::from(b1 / 2);
        let one_minus = BigInt::from(1) - &genus;
        if let Some(k) = fixed(BigInt::from(8) * &one_minus, BigInt::from(4) * &one_minus) {
            let genus = (b1 / 2) as u64;
            out.push(ModelMatch::new(Ruled { genus }, k, &["b1", "c1sq", "c2"]));
        }
    }
    let zero_c1 = [
        (0usize, 12i64, Enriques),
        (2, 0, BiElliptic),
        (3, 0, Kodaira),
        (1, 0, Kodaira),
        (0, 24, K3),
        (4, 0, Torus),
    ];
    for (want_b1, c2_min, kind) in zero_c1 {
        if b1 == want_b1 {
            if let Some(k) = fixed(zero(), BigInt::from(c2_min)) {
                out.push(ModelMatch::new(kind, k, &["b1", "c1sq", "c2"]));
            }
        }
    }
    // (9): c1sq_min = 0 fixes k, no b1 constraint
    if let Some(k) = as_count(&(-c1sq)) {
        if !(c2 - BigInt::from(k)).is_negative() {
            out.push(ModelMatch::new(ProperlyElliptic, k, &["c1sq", "c2"]));
        }
    }
    // (10): b1 even, c1sq + k > 0, c2 - k > 0
    if b1 % 2 == 0 {
        let k_min = (BigInt::from(1) - c1sq).max(zero());
        if c2 - &k_min > zero() {
            if let Some(k) = as_count(&k_min) {
                out.push(ModelMatch::new(GeneralType, k, &["b1", "c1sq", "c2"]));
            }
        }
    }
    out.sort_by(|a, b| a.model.cmp(&b.model));
    out.dedup();
    out
}

fn c1_squared(m: &ManifoldInvariants) -> BigInt {
    &m.chi * 2 + &m.tau * 3
}

fn pi1_assumption(models: &[ModelMatch]) -> Vec<String> {
    models
        .iter()
        .map(|m| {
            if matches!(m.model.kind, SurfaceKind::Ruled { .. }) {
                format!("pi1 differs from ruled model {}", m.model)
            } else {
                format!("pi1 differs from rational model {}", m.model)
            }
        })
        .collect()
}

fn survivors(models: &[ModelMatch]) -> String {
    models.iter().map(|m| m.model.to_string()).collect::<Vec<_>>().join(", ")
}

/// Negative-`c₁²` route: a minimal symplectic manifold with `c₁² < 0` has
/// κ = −∞, hence is rational or ruled.
pub fn exclude_symplectic(m: &ManifoldInvariants, assume_pi1_distinct: bool) -> StructureVerdict {
    let c1sq = c1_squared(m);
    if !c1sq.is_negative() {
        return StructureVerdict::unknown(
            None,
            vec![format!("c1^2 = {c1sq} >= 0: only the negative c1^2 route is implemented")],
        );
    }
    if !is_minimal_by_parity(&m.form) {
        return StructureVerdict::unknown(
            None,
            vec!["minimality not established: intersection form is odd".into()],
        );
    }
    let mut reasons = vec![
        format!("c1^2 = 2chi + 3tau = {c1sq} < 0"),
        "even form: minimal".into(),
        "kappa = -inf: only rational or ruled models remain".into(),
    ];
    let models = rational_ruled_models(m.b1, &m.chi, &m.tau, m.form.is_even());
    if models.is_empty() {
        reasons.push("no rational or ruled model matches b1, chi, tau".into());
        return StructureVerdict::not_exists(reasons);
    }
    reasons.push(format!("surviving models: {}", survivors(&models)));
    if assume_pi1_distinct {
        StructureVerdict::conditionally_excluded(pi1_assumption(&models), reasons)
    } else {
        StructureVerdict::unknown(None, reasons)
    }
}

/// Enriques–Kodaira filter on `(b₁, 2χ + 3τ, χ)`. On an even form every
/// match that would need an odd form (blow-ups, `CP²`) is discarded.
pub fn exclude_complex(m: &ManifoldInvariants, assume_pi1_distinct: bool) -> StructureVerdict {
    let c1sq = c1_squared(m);
    let mut reasons = vec![format!("c1^2 = {c1sq}, c2 = {}, b1 = {}", m.chi, m.b1)];
    if m.b1 != 1 {
        reasons.push(format!("class VII excluded: b1 ≠ 1 (b1 = {})", m.b1));
    }
    let mut matches = ek_filter(m.b1, &c1sq, &m.chi);
    if m.form.is_even() {
        let before = matches.len();
        matches.retain(|mm| !mm.model.forces_odd_form());
        if matches.len() < before {
            reasons.push(format!(
                "even form: dropped {} model(s) requiring an odd form",
                before - matches.len()
            ));
        }
    }
    if matches.is_empty() {
        reasons.push("no class of the Enriques-Kodaira table matches".into());
        return StructureVerdict::not_exists(reasons);
    }
    reasons.push(format!("surviving models: {}", survivors(&matches)));
    if assume_pi1_distinct && matches.iter().all(|mm| mm.model.kind.is_rational_or_ruled()) {
        StructureVerdict::conditionally_excluded(pi1_assumption(&matches), reasons)
    } else {
        StructureVerdict::unknown(None, reasons)
    }
}
