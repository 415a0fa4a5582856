//! The canonical Markov extension of a locally stationary measure on an interval.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::Domain;
use crate::measure::{finite_window_entropy, is_locally_stationary, Measure, SignedMeasure, StationarityCheck, Word};
use crate::util::{advance, checked_cells, one, zero};

#[derive(Debug, Clone)]
pub struct MarkovExtension {
    base: Measure,
    memory: usize,
    /// `prefixes[n-1]` is the base marginal on its first `n` sites, `n ≤ memory`.
    prefixes: Vec<Measure>,
}

impl MarkovExtension {
    pub fn new(base: Measure) -> Result<Self> {
        let dom = base.domain();
        if !dom.is_interval() {
            return Err(Error::Invalid(format!(
                "Markov extension is defined only on 1-D intervals, got {dom}"
            )));
        }
        if let StationarityCheck::Fail { subdomain, shift, .. } = is_locally_stationary(&base) {
            return Err(Error::NotStationary(format!("{subdomain} vs shift by {shift}")));
        }
        let memory = dom.len() - 1;
        let mut prefixes = Vec::with_capacity(memory);
        for n in 1..=memory {
            prefixes.push(base.marginal(&Domain::new(1, dom.points()[..n].to_vec())?)?);
        }
        Ok(MarkovExtension { base, memory, prefixes })
    }

    pub fn base(&self) -> &Measure {
        &self.base
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn alphabet(&self) -> u32 {
        self.base.alphabet()
    }

    fn prefix_mass(&self, symbols: &[u32]) -> BigRational {
        if symbols.is_empty() {
            one()
        } else {
            self.prefixes[symbols.len() - 1].mass(symbols).clone()
        }
    }

    /// Mass of the cylinder reading `symbols` on consecutive sites.
    pub fn cylinder(&self, symbols: &[u32]) -> BigRational {
        let u = self.memory;
        if symbols.len() <= u {
            return self.prefix_mass(symbols);
        }
        let mut mass = self.base.mass(&symbols[..=u]).clone();
        for k in 1..symbols.len() - u {
            if mass.is_zero() {
                return mass;
            }
            let den = self.prefix_mass(&symbols[k..k + u]);
            if den.is_zero() {
                return zero();
            }
            mass = mass * self.base.mass(&symbols[k..=k + u]) / den;
        }
        mass
    }

    /// The window measure on `[0..n-1]`.
    pub fn window_measure(&self, n: usize, cap: usize) -> Result<Measure> {
        if n == 0 {
            return Err(Error::Invalid("window length must be positive".into()));
        }
        let a = self.alphabet();
        let cells = checked_cells(a, n, cap)?;
        let mut masses = Vec::with_capacity(cells);
        let mut digits = vec![0u32; n];
        for _ in 0..cells {
            masses.push(self.cylinder(&digits));
            advance(&mut digits, a);
        }
        Measure::from_dense(Domain::interval(0, n as i64 - 1), a, masses)
    }

    /// Block entropy per site at length `n`, and the exact chain rate.
    pub fn entropy_rate(&self, n: usize, cap: usize) -> Result<EntropyRates> {
        if n < self.memory + 1 {
            return Err(Error::Invalid(format!("window {n} shorter than the base length {}", self.memory + 1)));
        }
        let window = self.window_measure(n, cap)?;
        let block = finite_window_entropy(&window) / n as f64;
        let upper = finite_window_entropy(&self.base);
        let lower = if self.memory == 0 { 0.0 } else { finite_window_entropy(&self.prefixes[self.memory - 1]) };
        Ok(EntropyRates { block, markov: upper - lower })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRates {
    /// `H(window n) / n`.
    pub block: f64,
    /// `H(window U+1) - H(window U)`, the limit for a U-step chain.
    pub markov: f64,
}

/// Cylinder mass of a word on a contiguous interval; the position is irrelevant.
pub fn markov_cylinder(ext: &MarkovExtension, b: &Word) -> Result<BigRational> {
    if !b.domain.is_interval() && !b.domain.is_empty() {
        return Err(Error::Invalid(format!("cylinder domain {} is not an interval", b.domain)));
    }
    Ok(ext.cylinder(&b.symbols))
}

pub fn markov_window_measure(ext: &MarkovExtension, n: usize, cap: usize) -> Result<Measure> {
    ext.window_measure(n, cap)
}

/// Exact stationary Markov base: any row-stochastic matrix with its stationary law
/// yields the two-site measure `π(a) P(a,b)`.
pub fn two_site_from_chain(pi: &[BigRational], p: &[Vec<BigRational>]) -> Result<Measure> {
    let a = pi.len() as u32;
    if p.len() != pi.len() || p.iter().any(|row| row.len() != pi.len()) {
        return Err(Error::Invalid(format!("transition matrix must be {a}x{a}")));
    }
    let mut m = SignedMeasure::zeros(Domain::interval(0, 1), a, usize::MAX)?;
    for (i, (pi_i, row)) in pi.iter().zip(p).enumerate() {
        for (j, pij) in row.iter().enumerate() {
            m.set(&[i as u32, j as u32], pi_i * pij);
        }
    }
    m.try_into()
}
