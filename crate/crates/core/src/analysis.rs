//! The full pipeline on one record, and its text and JSON reports.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::classification::{exclude_complex, exclude_symplectic};
use crate::error::{Error, Result};
use crate::families::{published_witness, FamilyId};
use crate::obstruction::{
    decide_almost_complex, enumerate_chern_classes, is_spin, validate_invariants, wu_class, wu_target,
    ChernEnumeration, ChernWitness, ManifoldInvariants, SpinStatus, Status, StructureVerdict, Violation,
    DEFAULT_SEARCH_BOUND,
};

/// Reason prepended to the symplectic and complex verdicts when no almost
/// complex structure exists.
pub const NO_ALMOST_COMPLEX: &str = "no almost complex structure";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub bound: u64,
    pub assume_pi1_distinct: bool,
    /// Also list every Chern class within the bound.
    pub enumerate: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_SEARCH_BOUND,
            assume_pi1_distinct: false,
            enumerate: false,
        }
    }
}

/// The invariants as echoed in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldSummary {
    pub name: String,
    #[serde(with = "crate::json::bigint")]
    pub chi: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub tau: BigInt,
    pub form: String,
    pub b1: usize,
    pub b2: usize,
    pub h1: String,
    pub w2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub manifold: ManifoldSummary,
    pub spin: SpinStatus,
    pub almost_complex: StructureVerdict,
    pub symplectic: StructureVerdict,
    pub complex: StructureVerdict,
    pub discrepancies: Vec<String>,
    pub witnesses: Option<ChernEnumeration>,
}

fn bit_string(bits: &[bool]) -> String {
    if bits.is_empty() {
        return "0".into();
    }
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn format_vector(v: &[BigInt]) -> String {
    let cells: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", cells.join(", "))
}

fn cascade(engine: StructureVerdict) -> StructureVerdict {
    let mut reasons = vec![NO_ALMOST_COMPLEX.to_string()];
    reasons.extend(engine.reasons);
    StructureVerdict::not_exists(reasons)
}

/// Notes where a fixture's published Chern class fails the Wu conditions.
fn discrepancies(m: &ManifoldInvariants, w2: &[bool], target: &BigInt) -> Vec<String> {
    let Ok(id) = m.name.parse::<FamilyId>() else {
        return Vec::new();
    };
    let Some(h) = published_witness(id) else {
        return Vec::new();
    };
    let Ok(witness) = ChernWitness::new(&m.form, h) else {
        return vec![format!("published witness for {id} does not have rank {}", m.form.rank())];
    };
    let mut problems = Vec::new();
    if &witness.square != target {
        problems.push(format!("its square is {} but 3tau + 2chi = {target}", witness.square));
    }
    let bad: Vec<usize> = witness
        .coefficients
        .iter()
        .zip(w2)
        .enumerate()
        .filter(|(_, (c, &w))| c.is_odd() != w)
        .map(|(i, _)| i + 1)
        .collect();
    if !bad.is_empty() {
        let cells: Vec<String> = bad.iter().map(ToString::to_string).collect();
        problems.push(format!(
            "coordinates {} have the wrong parity for w2 = {}",
            cells.join(","),
            bit_string(w2)
        ));
    }
    if problems.is_empty() {
        return Vec::new();
    }
    vec![format!(
        "published witness {} for {id} is not a first Chern class: {}",
        format_vector(&witness.coefficients),
        problems.join("; ")
    )]
}

/// Validates, then runs every decision on `m`. A failed validation is
/// reported as [`Error::Invalid`].
pub fn analyze(m: &ManifoldInvariants, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    validate_invariants(m).map_err(|vs| Error::Invalid(vs.iter().map(ToString::to_string).collect()))?;
    let w2 = wu_class(m)?;
    let target = wu_target(&m.chi, &m.tau);
    let almost_complex = decide_almost_complex(m, opts.bound)?;
    let mut symplectic = exclude_symplectic(m, opts.assume_pi1_distinct);
    let mut complex = exclude_complex(m, opts.assume_pi1_distinct);
    if almost_complex.status == Status::NotExists {
        symplectic = cascade(symplectic);
        complex = cascade(complex);
    }
    let mut notes = discrepancies(m, &w2, &target);
    if almost_complex.status == Status::NotExists {
        if let Some(r) = almost_complex.reasons.first() {
            for n in &mut notes {
                n.push_str(&format!("; no class satisfies both conditions ({r})"));
            }
        }
    }
    let witnesses = if opts.enumerate {
        Some(enumerate_chern_classes(m, opts.bound)?)
    } else {
        None
    };
    Ok(AnalysisReport {
        manifold: ManifoldSummary {
            name: m.name.clone(),
            chi: m.chi.clone(),
            tau: m.tau.clone(),
            form: m.form.to_string(),
            b1: m.b1,
            b2: m.b2(),
            h1: m.h1.to_string(),
            w2: bit_string(&w2),
        },
        spin: is_spin(&m.form, &m.h1),
        almost_complex,
        symplectic,
        complex,
        discrepancies: notes,
        witnesses,
    })
}

const WIDTH: usize = 16;

fn line(out: &mut String, indent: usize, key: &str, value: impl std::fmt::Display) {
    let pad = WIDTH.saturating_sub(indent);
    let _ = writeln!(out, "{:indent$}{key:<pad$}{value}", "");
}

fn verdict_lines(out: &mut String, title: &str, v: &StructureVerdict) {
    line(out, 0, title, v.status);
    if let Some(w) = &v.witness {
        line(out, 2, "witness", format!("{}  square {}", format_vector(&w.coefficients), w.square));
    }
    if let Some(b) = v.search_bound {
        line(out, 2, "search bound", b);
    }
    for a in &v.assumptions {
        line(out, 2, "assumption", a);
    }
    for r in &v.reasons {
        line(out, 2, "reason", r);
    }
}

/// `COMPLETE` or `BOUNDED(B)`.
pub fn completeness_marker(e: &ChernEnumeration) -> String {
    if e.complete {
        "COMPLETE".into()
    } else {
        format!("BOUNDED({})", e.bound)
    }
}

/// Output of the `enumerate` operation on one record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub name: String,
    pub marker: String,
    pub enumeration: ChernEnumeration,
}

/// Validates `m`, then lists its Chern classes within `bound`.
pub fn enumerate(m: &ManifoldInvariants, bound: u64) -> Result<EnumerationReport> {
    validate_invariants(m).map_err(|vs| Error::Invalid(vs.iter().map(ToString::to_string).collect()))?;
    let enumeration = enumerate_chern_classes(m, bound)?;
    Ok(EnumerationReport {
        name: m.name.clone(),
        marker: completeness_marker(&enumeration),
        enumeration,
    })
}

fn witness_lines(out: &mut String, e: &ChernEnumeration) {
    line(out, 0, "witnesses", format!("{} {}", e.witnesses.len(), completeness_marker(e)));
    for w in &e.witnesses {
        line(out, 2, "h", format!("{}  square {}", format_vector(&w.coefficients), w.square));
    }
}

impl EnumerationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, 0, "manifold", &self.name);
        witness_lines(&mut out, &self.enumeration);
        out
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

/// Output of the `validate` operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub name: String,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

pub fn validate(m: &ManifoldInvariants) -> ValidationReport {
    let violations = validate_invariants(m).err().unwrap_or_default();
    ValidationReport {
        name: m.name.clone(),
        valid: violations.is_empty(),
        violations,
    }
}

impl ValidationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, 0, "manifold", &self.name);
        line(&mut out, 0, "valid", self.valid);
        for v in &self.violations {
            line(&mut out, 2, "violation", v);
        }
        out
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.manifold;
        line(&mut out, 0, "manifold", &s.name);
        line(&mut out, 0, "chi", &s.chi);
        line(&mut out, 0, "tau", &s.tau);
        line(&mut out, 0, "form", &s.form);
        line(&mut out, 0, "b1", s.b1);
        line(&mut out, 0, "b2", s.b2);
        line(&mut out, 0, "h1", &s.h1);
        line(&mut out, 0, "w2", &s.w2);
        line(&mut out, 0, "spin", self.spin);
        verdict_lines(&mut out, "almost complex", &self.almost_complex);
        verdict_lines(&mut out, "symplectic", &self.symplectic);
        verdict_lines(&mut out, "complex", &self.complex);
        for d in &self.discrepancies {
            line(&mut out, 0, "discrepancy", d);
        }
        if let Some(e) = &self.witnesses {
            witness_lines(&mut out, e);
        }
        out
    }

    /// Pretty JSON with fields in declaration order, newline-terminated.
    pub fn to_json(&self) -> String {
        pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))
    }
}
