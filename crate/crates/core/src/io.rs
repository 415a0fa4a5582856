//! JSON formats for measures, word sets and torus solutions.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{TorusMeasure, WordSet};
use crate::lattice::Domain;
use crate::measure::{word_key, Measure, SignedMeasure};

/// Always `p/q`, including integers.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let q: num_bigint::BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if q == 0.into() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        let p: num_bigint::BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        Ok(BigRational::new(p, q))
    } else {
        let p: num_bigint::BigInt = t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        Ok(BigRational::from_integer(p))
    }
}

fn parse_word(key: &str, len: usize, alphabet: u32) -> Result<Vec<u32>> {
    let w: Vec<u32> = if key.trim().is_empty() {
        Vec::new()
    } else {
        key.split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad word {key:?}"))))
            .collect::<Result<_>>()?
    };
    if w.len() != len || w.iter().any(|&s| s >= alphabet) {
        return Err(Error::Parse(format!("word {key:?} does not fit {len} sites over {alphabet} symbols")));
    }
    Ok(w)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub dim: usize,
    pub alphabet: u32,
    pub domain: Domain,
    pub masses: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordSetJson {
    pub dim: usize,
    pub alphabet: u32,
    pub domain: Domain,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusJson {
    pub periods: Vec<i64>,
    pub alphabet: u32,
    pub masses: BTreeMap<String, String>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_dim(dim: usize, domain: &Domain) -> Result<()> {
    if dim != domain.dim() {
        return Err(Error::Parse(format!("dim {dim} but domain points have {} coordinates", domain.dim())));
    }
    Ok(())
}

pub fn signed_measure_from_json(text: &str, cap: usize) -> Result<SignedMeasure> {
    let raw: MeasureJson = from_json(text)?;
    check_dim(raw.dim, &raw.domain)?;
    let mut m = SignedMeasure::zeros(raw.domain, raw.alphabet, cap)?;
    let len = m.domain().len();
    for (k, v) in &raw.masses {
        let w = parse_word(k, len, raw.alphabet)?;
        m.add_mass(&w, &parse_rational(v)?);
    }
    Ok(m)
}

/// Rejects negative or non-normalized input.
pub fn measure_from_json(text: &str, cap: usize) -> Result<Measure> {
    signed_measure_from_json(text, cap)?.try_into()
}

pub fn measure_to_value(m: &SignedMeasure) -> MeasureJson {
    MeasureJson {
        dim: m.domain().dim(),
        alphabet: m.alphabet(),
        domain: m.domain().clone(),
        masses: m.support().map(|(w, p)| (word_key(&w), fmt_rational(p))).collect(),
    }
}

pub fn measure_to_json(m: &SignedMeasure) -> String {
    serde_json::to_string_pretty(&measure_to_value(m)).expect("serializable")
}

pub fn wordset_from_json(text: &str) -> Result<WordSet> {
    let raw: WordSetJson = from_json(text)?;
    check_dim(raw.dim, &raw.domain)?;
    let len = raw.domain.len();
    let words = raw.words.iter().map(|k| parse_word(k, len, raw.alphabet)).collect::<Result<Vec<_>>>()?;
    WordSet::new(raw.domain, raw.alphabet, words)
}

pub fn wordset_to_json(ws: &WordSet) -> String {
    let v = WordSetJson {
        dim: ws.domain().dim(),
        alphabet: ws.alphabet(),
        domain: ws.domain().clone(),
        words: ws.words().iter().map(|w| word_key(w)).collect(),
    };
    serde_json::to_string_pretty(&v).expect("serializable")
}

pub fn torus_to_value(nu: &TorusMeasure) -> TorusJson {
    TorusJson {
        periods: nu.module.periods().periods().to_vec(),
        alphabet: nu.alphabet,
        masses: nu.masses.iter().map(|(c, p)| (word_key(c), fmt_rational(p))).collect(),
    }
}

/// Accepts either a domain list `[[..],..]` or a list of them.
pub fn domains_from_json(text: &str) -> Result<Vec<Domain>> {
    from_json(text)
}
