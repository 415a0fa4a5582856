//! Exact rational linear feasibility.

mod simplex;

pub use simplex::{minimize, solve_feasibility, OptResult};

use std::collections::HashSet;
use std::fmt::Write;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::util::zero;

pub const DEFAULT_PIVOT_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub terms: Vec<(usize, BigRational)>,
    pub rhs: BigRational,
}

impl Constraint {
    fn eval(&self, x: &[BigRational]) -> BigRational {
        self.terms.iter().fold(zero(), |acc, (j, c)| acc + c * &x[*j])
    }
}

/// Equalities `row·x = rhs` and inequalities `row·x ≥ rhs` over named variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearSystem {
    names: Vec<String>,
    nonneg: Vec<bool>,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new() -> Self {
        LinearSystem::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, nonneg: bool) -> usize {
        self.names.push(name.into());
        self.nonneg.push(nonneg);
        self.names.len() - 1
    }

    fn normalize(&self, terms: Vec<(usize, BigRational)>) -> Result<Vec<(usize, BigRational)>> {
        let mut merged: Vec<(usize, BigRational)> = Vec::with_capacity(terms.len());
        let mut sorted = terms;
        sorted.sort_by_key(|(j, _)| *j);
        for (j, c) in sorted {
            if j >= self.names.len() {
                return Err(Error::Invalid(format!("constraint references undeclared variable {j}")));
            }
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Ok(merged)
    }

    pub fn add_eq(&mut self, terms: Vec<(usize, BigRational)>, rhs: BigRational) -> Result<()> {
        let terms = self.normalize(terms)?;
        self.equalities.push(Constraint { terms, rhs });
        Ok(())
    }

    pub fn add_ge(&mut self, terms: Vec<(usize, BigRational)>, rhs: BigRational) -> Result<()> {
        let terms = self.normalize(terms)?;
        self.inequalities.push(Constraint { terms, rhs });
        Ok(())
    }

    pub fn add_le(&mut self, terms: Vec<(usize, BigRational)>, rhs: BigRational) -> Result<()> {
        self.add_ge(terms.into_iter().map(|(j, c)| (j, -c)).collect(), -rhs)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_nonneg(&self, j: usize) -> bool {
        self.nonneg[j]
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn num_constraints(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    /// Exact substitution check of every constraint and sign flag.
    pub fn is_satisfied_by(&self, x: &[BigRational]) -> bool {
        x.len() == self.names.len()
            && x.iter().zip(&self.nonneg).all(|(v, nn)| !nn || !v.is_negative())
            && self.equalities.iter().all(|c| c.eval(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.eval(x) >= c.rhs)
    }

    /// Plain-text dump, one constraint per line, rationals as `p/q`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (name, nn) in self.names.iter().zip(&self.nonneg) {
            let _ = writeln!(out, "var {name}{}", if *nn { " >= 0" } else { " free" });
        }
        for (op, rows) in [("=", &self.equalities), (">=", &self.inequalities)] {
            for c in rows.iter() {
                let mut line = String::new();
                for (i, (j, coef)) in c.terms.iter().enumerate() {
                    if i > 0 {
                        line.push_str(" + ");
                    }
                    let _ = write!(line, "{} {}", rat(coef), self.names[*j]);
                }
                if line.is_empty() {
                    line.push('0');
                }
                let _ = writeln!(out, "{line} {op} {}", rat(&c.rhs));
            }
        }
        out
    }

    /// SHA-256 of the dump, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.dump().as_bytes()))
    }
}

fn rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible(Vec<BigRational>),
    Infeasible,
    /// Pivot limit reached before a verdict.
    Aborted { pivots: usize },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }
}

/// Distinct optimal vertices for random integer objectives, up to `max` of them.
/// Stops after `max * 8` solves without reaching `max`.
pub fn enumerate_vertices(
    sys: &LinearSystem,
    max: usize,
    seed: u64,
    pivot_limit: usize,
) -> Result<Vec<Vec<BigRational>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for _ in 0..max.saturating_mul(8).max(8) {
        if out.len() >= max {
            break;
        }
        let c: Vec<BigRational> = (0..sys.num_vars())
            .map(|_| BigRational::from_integer(rng.random_range(-100i64..=100).into()))
            .collect();
        match minimize(sys, &c, pivot_limit)? {
            OptResult::Optimal { x, .. } => {
                if seen.insert(x.clone()) {
                    out.push(x);
                }
            }
            OptResult::Infeasible => return Ok(Vec::new()),
            OptResult::Unbounded => {
                return Err(Error::Invalid("vertex enumeration needs a bounded polytope".into()))
            }
            OptResult::Aborted { pivots } => {
                return Err(Error::Invalid(format!("pivot limit reached after {pivots} pivots")))
            }
        }
    }
    Ok(out)
}
