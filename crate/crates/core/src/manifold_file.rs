//! Line-oriented `key = value` manifold descriptions.
//!
//! ```text
//! # comments run to end of line
//! name = M1 g=1
//! chi  = -4
//! tau  = 0
//! form = H
//! b1   = 4
//! h1   = Z^4
//! w2   = 0            # optional: `0` or comma-separated bits
//! gens = 6            # optional presentation
//! rel  = 0,0,0,0,1,-1 # repeatable, one exponent-sum vector each
//! ```
//!
//! `name`, `chi`, `tau`, `form`, `b1` and `h1` are required; every key
//! except `rel` may appear once. Values cannot contain `#`. A lone `w2 = 0`
//! always means the zero class of the form's rank.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::abelian::{AbelianGroup, Presentation};
use crate::error::{Error, Result};
use crate::forms::build_form;
use crate::obstruction::ManifoldInvariants;

const KEYS: [&str; 9] = ["name", "chi", "tau", "form", "b1", "h1", "w2", "gens", "rel"];

fn at(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn nested(line: usize, e: Error) -> Error {
    match e {
        Error::Parse(msg) => at(line, msg),
        other => at(line, other),
    }
}

enum Bits {
    Zero,
    List(Vec<bool>),
}

fn parse_bits(value: &str) -> std::result::Result<Bits, String> {
    if value == "0" {
        return Ok(Bits::Zero);
    }
    value
        .split(',')
        .map(|b| match b.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(format!("w2 entries must be 0 or 1, found '{other}'")),
        })
        .collect::<std::result::Result<_, _>>()
        .map(Bits::List)
}

pub fn parse_manifold(text: &str) -> Result<ManifoldInvariants> {
    let mut seen: [Option<(usize, String)>; 9] = Default::default();
    let mut rels: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if !raw.is_ascii() {
            return Err(at(line, "non-ASCII input"));
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| at(line, format!("expected 'key = value', found '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| at(line, format!("unknown key '{key}'")))?;
        if value.is_empty() {
            return Err(at(line, format!("empty value for '{key}'")));
        }
        if key == "rel" {
            rels.push((line, value.to_string()));
        } else if let Some((first, _)) = &seen[slot] {
            return Err(at(line, format!("duplicate key '{key}' (first on line {first})")));
        } else {
            seen[slot] = Some((line, value.to_string()));
        }
    }

    let take = |key: &str| -> Option<(usize, String)> {
        let slot = KEYS.iter().position(|k| *k == key).expect("known key");
        seen[slot].clone()
    };
    let require = |key: &str| take(key).ok_or_else(|| Error::Parse(format!("missing required key '{key}'")));
    let integer = |key: &str| -> Result<BigInt> {
        let (line, v) = require(key)?;
        BigInt::from_str(&v).map_err(|_| at(line, format!("{key} must be an integer, found '{v}'")))
    };
    let count = |line: usize, key: &str, v: &str| -> Result<usize> {
        v.parse::<usize>()
            .map_err(|_| at(line, format!("{key} must be a nonnegative integer, found '{v}'")))
    };

    let name = require("name")?.1;
    let chi = integer("chi")?;
    let tau = integer("tau")?;
    let (form_line, spec) = require("form")?;
    let form = build_form(&spec).map_err(|e| nested(form_line, e))?;
    let (b1_line, b1) = require("b1")?;
    let b1 = count(b1_line, "b1", &b1)?;
    let (h1_line, h1) = require("h1")?;
    let h1 = AbelianGroup::from_str(&h1).map_err(|e| nested(h1_line, e))?;

    let w2 = match take("w2") {
        None => None,
        Some((line, v)) => match parse_bits(&v).map_err(|e| at(line, e))? {
            Bits::Zero => Some(vec![false; form.rank()]),
            Bits::List(bits) => Some(bits),
        },
    };

    let presentation = match take("gens") {
        None => {
            if let Some((line, _)) = rels.first() {
                return Err(at(*line, "'rel' needs a preceding 'gens' count"));
            }
            None
        }
        Some((line, v)) => {
            let gens = count(line, "gens", &v)?;
            let mut relations = Vec::with_capacity(rels.len());
            for (rl, r) in &rels {
                let vector = Presentation::parse_relation(r).map_err(|e| nested(*rl, e))?;
                if vector.len() != gens {
                    return Err(at(*rl, format!("relation has {} entries, expected {gens}", vector.len())));
                }
                relations.push(vector);
            }
            Some(Presentation::new(gens, relations).map_err(|e| nested(line, e))?)
        }
    };

    Ok(ManifoldInvariants {
        name,
        chi,
        tau,
        form,
        b1,
        h1,
        w2,
        presentation,
    })
}

/// Inverse of [`parse_manifold`] up to whitespace and comments.
pub fn render_manifold(m: &ManifoldInvariants) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = {}\n", m.name));
    out.push_str(&format!("chi = {}\n", m.chi));
    out.push_str(&format!("tau = {}\n", m.tau));
    out.push_str(&format!("form = {}\n", m.form));
    out.push_str(&format!("b1 = {}\n", m.b1));
    out.push_str(&format!("h1 = {}\n", m.h1));
    if let Some(w2) = &m.w2 {
        out.push_str(&format!("w2 = {}\n", render_bits(w2, m.form.rank())));
    }
    if let Some(p) = &m.presentation {
        out.push_str(&p.to_text());
    }
    out
}

fn render_bits(bits: &[bool], rank: usize) -> String {
    if bits.len() == rank && !bits.iter().any(|&b| b) {
        return "0".into();
    }
    let cells: Vec<&str> = bits.iter().map(|&b| if b { "1" } else { "0" }).collect();
    cells.join(",")
}
