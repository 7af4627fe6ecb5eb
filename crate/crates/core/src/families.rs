//! The four panelled-web families as ready-made invariant records.
//!
//! `H₂` is always taken in the standard `kH` basis `h₁, …, h₂ₖ` with
//! `hᵢ·hᵢ₊₁ = 1` for odd `i`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{AbelianGroup, Presentation};
use crate::error::{Error, Result};
use crate::forms::IntersectionForm;
use crate::obstruction::ManifoldInvariants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    M1 { g: u32 },
    M2 { g: u32, n: u32 },
    M3 { g: u32, n: u32 },
    M4 { n: u32 },
}

impl FamilyId {
    fn check(self) -> Result<Self> {
        let ok = match self {
            FamilyId::M1 { g } => g >= 1,
            FamilyId::M2 { g, n } | FamilyId::M3 { g, n } => g >= 1 && n >= 1,
            FamilyId::M4 { n } => n >= 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Domain(format!("{self}: parameters must be positive")))
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::M1 { g } => write!(f, "M1 g={g}"),
            FamilyId::M2 { g, n } => write!(f, "M2 g={g} n={n}"),
            FamilyId::M3 { g, n } => write!(f, "M3 g={g} n={n}"),
            FamilyId::M4 { n } => write!(f, "M4 n={n}"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// `M1 g=<int>`, `M2 g=<int> n=<int>`, `M3 g=<int> n=<int>`, `M4 n=<int>`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let head = parts
            .next()
            .ok_or_else(|| Error::parse("empty family identifier"))?;
        let mut g = None;
        let mut n = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value, got '{part}'")))?;
            let value: u32 = value
                .parse()
                .map_err(|_| Error::parse(format!("bad value in '{part}'")))?;
            let slot = match key {
                "g" => &mut g,
                "n" => &mut n,
                _ => return Err(Error::parse(format!("unknown parameter '{key}'"))),
            };
            if slot.replace(value).is_some() {
                return Err(Error::parse(format!("parameter '{key}' given twice")));
            }
        }
        let missing = |k: &str| Error::parse(format!("{head} needs parameter {k}"));
        let id = match head {
            "M1" if n.is_none() => FamilyId::M1 { g: g.ok_or_else(|| missing("g"))? },
            "M2" => FamilyId::M2 {
                g: g.ok_or_else(|| missing("g"))?,
                n: n.ok_or_else(|| missing("n"))?,
            },
            "M3" => FamilyId::M3 {
                g: g.ok_or_else(|| missing("g"))?,
                n: n.ok_or_else(|| missing("n"))?,
            },
            "M4" if g.is_none() => FamilyId::M4 { n: n.ok_or_else(|| missing("n"))? },
            "M1" | "M4" => return Err(Error::parse(format!("unexpected parameter for {head}"))),
            _ => return Err(Error::parse(format!("unknown family '{head}'"))),
        };
        id.check()
    }
}

fn surface_generators(g: u32) -> Vec<String> {
    (1..=g).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect()
}

/// `a₁⁻¹b₁⁻¹a₁b₁ ⋯ a_g⁻¹b_g⁻¹a_g b_g`
fn commutator_word(g: u32) -> String {
    (1..=g)
        .map(|i| format!("a{i}^-1 b{i}^-1 a{i} b{i}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn m1_presentation(g: u32) -> Presentation {
    let mut gens = surface_generators(g);
    // f appears in the relator d f^3 and is kept as a generator
    gens.extend(["c", "d", "e", "f"].map(String::from));
    let long = format!("{} c d^-1", commutator_word(g));
    Presentation::from_words(&gens, &[long.as_str(), "e d e^-1 c^-1", "d f^3"])
        .expect("fixture words use declared generators")
}

fn m2_presentation(g: u32, n: u32) -> Presentation {
    let mut gens = surface_generators(g);
    for i in 1..=n {
        gens.extend([format!("c{i}"), format!("d{i}"), format!("e{i}")]);
    }
    let cs: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
    let ds: Vec<String> = (1..=n).rev().map(|i| format!("d{i}^-1")).collect();
    let long = format!("{} {} {}", commutator_word(g), cs.join(" "), ds.join(" "));
    let mut words = vec![long];
    words.extend((1..=n).map(|i| format!("e{i} d{i} e{i}^-1 c{i}^-1")));
    let words: Vec<&str> = words.iter().map(String::as_str).collect();
    Presentation::from_words(&gens, &words).expect("fixture words use declared generators")
}

fn m4_presentation(n: u32) -> Presentation {
    let mut gens = Vec::new();
    for i in 1..=n {
        gens.extend(["g", "h", "j", "k", "l"].map(|s| format!("{s}{i}")));
    }
    gens.push("m".into());
    let mut words = Vec::new();
    for i in 1..=n {
        words.push(format!("k{i} h{i} k{i}^-1 g{i}"));
        words.push(format!("l{i}^-1 j{i} l{i} h{i}"));
        words.push(format!("g{i} h{i} j{i}"));
    }
    let words: Vec<&str> = words.iter().map(String::as_str).collect();
    Presentation::from_words(&gens, &words).expect("fixture words use declared generators")
}

/// The invariant record of a family member. `w₂ = 0` throughout.
pub fn family_invariants(id: FamilyId) -> Result<ManifoldInvariants> {
    let id = id.check()?;
    let (chi, form, b1, presentation) = match id {
        FamilyId::M1 { g } => {
            let g = i64::from(g);
            (-4 * g, IntersectionForm::hyperbolic(), 2 * g + 2, Some(m1_presentation(g as u32)))
        }
        FamilyId::M2 { g: gu, n: nu } => {
            let (g, n) = (i64::from(gu), i64::from(nu));
            (4 - 4 * g - 4 * n, IntersectionForm::hyperbolic(), 2 * g + 2 * n, Some(m2_presentation(gu, nu)))
        }
        FamilyId::M3 { g, n } => {
            let (g, n) = (i64::from(g), i64::from(n));
            (4 - 4 * g - 4 * n, IntersectionForm::hyperbolic_sum(n as usize + 1), 2 * g + 3 * n, None)
        }
        FamilyId::M4 { n } => {
            let k = i64::from(n);
            (-2 * k, IntersectionForm::hyperbolic_sum(n as usize), 2 * k + 1, Some(m4_presentation(n)))
        }
    };
    let b1 = b1 as usize;
    let rank = form.rank();
    Ok(ManifoldInvariants {
        name: id.to_string(),
        chi: BigInt::from(chi),
        tau: BigInt::zero(),
        form,
        b1,
        h1: AbelianGroup::free(b1),
        w2: Some(vec![false; rank]),
        presentation,
    })
}

/// The explicit Chern class written down for each family in the original
/// construction, in the `kH` basis. Absent where none was given (`M3` with
/// `n = 1`, `M4` with `n = 1`).
pub fn published_witness(id: FamilyId) -> Option<Vec<BigInt>> {
    let id = id.check().ok()?;
    let ints = |v: Vec<i64>| v.into_iter().map(BigInt::from).collect();
    match id {
        FamilyId::M1 { g } => Some(ints(vec![-2 * i64::from(g), 2])),
        FamilyId::M2 { g, n } => Some(ints(vec![2 - 2 * i64::from(g) - 2 * i64::from(n), 2])),
        FamilyId::M3 { n: 1, .. } => None,
        FamilyId::M3 { g, n } => {
            let mut h = vec![2, 2, 2, -2 * i64::from(g), 2, -2 * i64::from(n)];
            h.resize(2 + 2 * n as usize, 0);
            Some(ints(h))
        }
        FamilyId::M4 { n: 1 } => None,
        FamilyId::M4 { n } if n % 2 == 0 => Some(ints([2, 2, 2, -4].repeat(n as usize / 2))),
        FamilyId::M4 { n } => {
            let n = i64::from(n);
            let k = (n - 1) / 2;
            let mut h = Vec::with_capacity(2 * n as usize);
            if k % 2 == 0 {
                let t = k / 2;
                h.resize(2 * n as usize - 6, 1);
                h.extend([-2, 2 * t, -2, 2 * t, -2, 2 * t]);
            } else {
                let t = (k - 1) / 2;
                h.resize(2 * n as usize - 2, 1);
                h.extend([-2, 6 * t + 4]);
            }
            Some(ints(h))
        }
    }
}
