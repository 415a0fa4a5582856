//! Exact-rational measures on words over a finite domain.

mod entropy;

pub use entropy::{
    conditional_entropy, determines, entropy_chain_refute, entropy_metric, finite_window_entropy, ChainVerdict,
};

use std::fmt;
use std::ops::Deref;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Domain, LatticePoint};
use crate::util::{advance, checked_cells, decode, encode, one, zero};

pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub domain: Domain,
    pub symbols: Vec<u32>,
    pub alphabet: u32,
}

impl Word {
    pub fn new(domain: Domain, symbols: Vec<u32>, alphabet: u32) -> Result<Self> {
        if symbols.len() != domain.len() {
            return Err(Error::Invalid(format!(
                "word has {} symbols for a domain of {} points",
                symbols.len(),
                domain.len()
            )));
        }
        if let Some(s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::Invalid(format!("symbol {s} outside alphabet of size {alphabet}")));
        }
        Ok(Word { domain, symbols, alphabet })
    }

    pub fn symbol_at(&self, p: &LatticePoint) -> Option<u32> {
        self.domain.index_of(p).map(|i| self.symbols[i])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", word_key(&self.symbols))
    }
}

/// Symbols comma-joined, the key used by the JSON formats.
pub fn word_key(symbols: &[u32]) -> String {
    let parts: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
    parts.join(",")
}

pub fn shift_word(b: &Word, k: &LatticePoint) -> Result<Word> {
    Ok(Word {
        domain: b.domain.shift(k)?,
        symbols: b.symbols.clone(),
        alphabet: b.alphabet,
    })
}

/// Dense table of rational masses indexed by word (first point most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedMeasure {
    domain: Domain,
    alphabet: u32,
    masses: Vec<BigRational>,
}

impl SignedMeasure {
    pub fn zeros(domain: Domain, alphabet: u32, cap: usize) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::Invalid("alphabet must be nonempty".into()));
        }
        let n = checked_cells(alphabet, domain.len(), cap)?;
        Ok(SignedMeasure { domain, alphabet, masses: vec![zero(); n] })
    }

    pub fn from_dense(domain: Domain, alphabet: u32, masses: Vec<BigRational>) -> Result<Self> {
        let n = checked_cells(alphabet, domain.len(), usize::MAX)?;
        if n != masses.len() {
            return Err(Error::Invalid(format!("expected {n} masses, got {}", masses.len())));
        }
        Ok(SignedMeasure { domain, alphabet, masses })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn num_words(&self) -> usize {
        self.masses.len()
    }

    pub fn word(&self, index: usize) -> Vec<u32> {
        decode(index, self.alphabet, self.domain.len())
    }

    pub fn index(&self, symbols: &[u32]) -> usize {
        encode(symbols, self.alphabet)
    }

    pub fn mass(&self, symbols: &[u32]) -> &BigRational {
        &self.masses[self.index(symbols)]
    }

    pub fn set(&mut self, symbols: &[u32], mass: BigRational) {
        let i = self.index(symbols);
        self.masses[i] = mass;
    }

    pub fn add_mass(&mut self, symbols: &[u32], mass: &BigRational) {
        let i = self.index(symbols);
        self.masses[i] += mass;
    }

    pub fn total(&self) -> BigRational {
        self.masses.iter().fold(zero(), |acc, m| acc + m)
    }

    /// Nonzero entries as `(word, mass)`.
    pub fn support(&self) -> impl Iterator<Item = (Vec<u32>, &BigRational)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (self.word(i), m))
    }

    pub fn marginal(&self, v: &Domain) -> Result<SignedMeasure> {
        let pos = v.positions_in(&self.domain)?;
        let mut out = SignedMeasure::zeros(v.clone(), self.alphabet, usize::MAX)?;
        let mut digits = vec![0u32; self.domain.len()];
        for m in &self.masses {
            if !m.is_zero() {
                let j = pos.iter().fold(0usize, |acc, &p| acc * self.alphabet as usize + digits[p] as usize);
                out.masses[j] += m;
            }
            advance(&mut digits, self.alphabet);
        }
        Ok(out)
    }

    /// The same table relabelled onto `domain + k`.
    pub fn shifted(&self, k: &LatticePoint) -> Result<SignedMeasure> {
        Ok(SignedMeasure {
            domain: self.domain.shift(k)?,
            alphabet: self.alphabet,
            masses: self.masses.clone(),
        })
    }

    fn check_compatible(&self, other: &SignedMeasure) -> Result<()> {
        if self.domain != other.domain || self.alphabet != other.alphabet {
            return Err(Error::Mismatch(format!(
                "{} over {} symbols vs {} over {} symbols",
                self.domain, self.alphabet, other.domain, other.alphabet
            )));
        }
        Ok(())
    }

    pub fn sub(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        self.check_compatible(other)?;
        Ok(SignedMeasure {
            domain: self.domain.clone(),
            alphabet: self.alphabet,
            masses: self.masses.iter().zip(&other.masses).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.masses.iter().all(|m| !m.is_negative())
    }
}

/// A probability measure: nonnegative masses summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Measure(SignedMeasure);

impl Deref for Measure {
    type Target = SignedMeasure;
    fn deref(&self) -> &SignedMeasure {
        &self.0
    }
}

impl TryFrom<SignedMeasure> for Measure {
    type Error = Error;

    fn try_from(m: SignedMeasure) -> Result<Self> {
        if let Some(neg) = m.masses.iter().find(|x| x.is_negative()) {
            return Err(Error::NegativeMass(neg.to_string()));
        }
        let total = m.total();
        if total != one() {
            return Err(Error::NotNormalized(total.to_string()));
        }
        Ok(Measure(m))
    }
}

impl Measure {
    pub fn from_dense(domain: Domain, alphabet: u32, masses: Vec<BigRational>) -> Result<Self> {
        SignedMeasure::from_dense(domain, alphabet, masses)?.try_into()
    }

    /// Builds from sparse `(word, mass)` pairs; repeated words accumulate.
    pub fn from_masses<I>(domain: Domain, alphabet: u32, entries: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut m = SignedMeasure::zeros(domain, alphabet, cap)?;
        for (w, p) in entries {
            if w.len() != m.domain.len() || w.iter().any(|&s| s >= alphabet) {
                return Err(Error::Invalid(format!("bad word {}", word_key(&w))));
            }
            m.add_mass(&w, &p);
        }
        m.try_into()
    }

    /// The i.i.d. measure `ρ^U`.
    pub fn product(domain: Domain, rho: &[BigRational], cap: usize) -> Result<Self> {
        let alphabet = rho.len() as u32;
        let mut m = SignedMeasure::zeros(domain, alphabet, cap)?;
        let mut digits = vec![0u32; m.domain.len()];
        for slot in m.masses.iter_mut() {
            *slot = digits.iter().fold(one(), |acc, &d| acc * &rho[d as usize]);
            advance(&mut digits, alphabet);
        }
        m.try_into()
    }

    pub fn uniform(domain: Domain, alphabet: u32, cap: usize) -> Result<Self> {
        let rho = vec![BigRational::new(1.into(), (alphabet as i64).into()); alphabet as usize];
        Measure::product(domain, &rho, cap)
    }

    pub fn point_mass(domain: Domain, alphabet: u32, symbols: &[u32], cap: usize) -> Result<Self> {
        Measure::from_masses(domain, alphabet, [(symbols.to_vec(), one())], cap)
    }

    pub fn signed(&self) -> &SignedMeasure {
        &self.0
    }

    pub fn into_signed(self) -> SignedMeasure {
        self.0
    }

    pub fn marginal(&self, v: &Domain) -> Result<Measure> {
        Ok(Measure(self.0.marginal(v)?))
    }

    pub fn shifted(&self, k: &LatticePoint) -> Result<Measure> {
        Ok(Measure(self.0.shifted(k)?))
    }

    /// Support words, in canonical order.
    pub fn support_words(&self) -> Vec<Vec<u32>> {
        self.0.support().map(|(w, _)| w).collect()
    }

    pub fn is_locally_stationary(&self) -> StationarityCheck {
        is_locally_stationary(self)
    }
}

pub fn marginal(mu: &Measure, v: &Domain) -> Result<Measure> {
    mu.marginal(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StationarityCheck {
    Pass,
    /// The marginal on `subdomain` differs from the one on `subdomain + shift` at `word`.
    Fail { subdomain: Domain, word: Vec<u32>, shift: LatticePoint },
}

impl StationarityCheck {
    pub fn passed(&self) -> bool {
        matches!(self, StationarityCheck::Pass)
    }
}

/// Compares the marginal on `V_k = U ∩ (U - k)` with the one on `V_k + k` for every
/// difference vector `k`; every other (V, k) pair is a restriction of one of these.
pub fn is_locally_stationary(mu: &SignedMeasure) -> StationarityCheck {
    let u = mu.domain();
    for k in u.positive_differences() {
        let v = u.overlap_with_shift(&k);
        let vk = v.shift(&k).expect("same dimension");
        let a = mu.marginal(&v).expect("subset");
        let b = mu.marginal(&vk).expect("subset");
        if let Some(i) = (0..a.num_words()).find(|&i| a.masses[i] != b.masses[i]) {
            return StationarityCheck::Fail { subdomain: v, word: a.word(i), shift: k };
        }
    }
    StationarityCheck::Pass
}

/// `Σ_b |μ[b] - ν[b]|`, without the 1/2 factor.
pub fn tv_distance(mu: &SignedMeasure, nu: &SignedMeasure) -> Result<BigRational> {
    mu.check_compatible(nu)?;
    Ok(mu
        .masses
        .iter()
        .zip(&nu.masses)
        .fold(zero(), |acc, (a, b)| acc + (a - b).abs()))
}

/// `(1-t)μ + tν`.
pub fn convex_combine(mu: &Measure, nu: &Measure, t: &BigRational) -> Result<Measure> {
    mu.check_compatible(nu)?;
    if t.is_negative() || *t > one() {
        return Err(Error::Invalid(format!("mixing weight {t} outside [0,1]")));
    }
    let s = one() - t;
    let masses = mu.masses.iter().zip(&nu.masses).map(|(a, b)| a * &s + b * t).collect();
    Measure::from_dense(mu.domain.clone(), mu.alphabet, masses)
}
