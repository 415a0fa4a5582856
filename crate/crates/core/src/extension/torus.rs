//! Periodic extensions: translation-invariant measures on a finite torus.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::sft::{enumerate_periodic_configs, torus_constraints, WordSet};
use crate::error::{Error, Result};
use crate::lattice::{verify_envelope, Domain, Envelope, EnvelopeCheck, FiniteModule, PeriodVector, DEFAULT_SUBSET_CAP};
use crate::lp::{solve_feasibility, FeasibilityResult, LinearSystem};
use crate::measure::{word_key, Measure, SignedMeasure};
use crate::util::{advance, checked_cells, encode, one, zero};
use crate::Caps;

/// Sparse measure on `A^M`, configurations indexed by module element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusMeasure {
    pub module: FiniteModule,
    pub alphabet: u32,
    pub masses: BTreeMap<Vec<u32>, BigRational>,
}

/// `(T_g a)[m + g] = a[m]`.
fn translate(cfg: &[u32], table: &[Vec<usize>], g: usize) -> Vec<u32> {
    let mut out = vec![0; cfg.len()];
    for (m, &s) in cfg.iter().enumerate() {
        out[table[g][m]] = s;
    }
    out
}

impl TorusMeasure {
    pub fn total(&self) -> BigRational {
        self.masses.values().fold(zero(), |acc, m| acc + m)
    }

    pub fn mass(&self, cfg: &[u32]) -> BigRational {
        self.masses.get(cfg).cloned().unwrap_or_else(zero)
    }

    /// Uniform measure on all of `A^M`.
    pub fn uniform(module: FiniteModule, alphabet: u32, cap: usize) -> Result<Self> {
        let n = module.cardinality();
        let count = checked_cells(alphabet, n, cap)?;
        let p = BigRational::new(1.into(), count.into());
        let mut masses = BTreeMap::new();
        let mut cfg = vec![0u32; n];
        loop {
            masses.insert(cfg.clone(), p.clone());
            if !advance(&mut cfg, alphabet) {
                break;
            }
        }
        Ok(TorusMeasure { module, alphabet, masses })
    }

    /// True if every translate carries the same mass as the original.
    pub fn is_invariant(&self) -> bool {
        let table = self.module.addition_table();
        self.masses.iter().all(|(cfg, m)| {
            (0..self.module.cardinality()).all(|g| self.mass(&translate(cfg, &table, g)) == *m)
        })
    }

    pub fn has_full_support(&self) -> bool {
        let full = checked_cells(self.alphabet, self.module.cardinality(), usize::MAX).ok();
        full == Some(self.masses.len()) && self.masses.values().all(|m| m.is_positive())
    }
}

/// `ν = φ*ν̃` on `w`: the word reading `a[φ(v)]` at each `v`.
pub fn pullback_periodic(nu: &TorusMeasure, w: &Domain, cap: usize) -> Result<Measure> {
    if w.dim() != nu.module.dim() {
        return Err(Error::DimensionMismatch { expected: nu.module.dim(), got: w.dim() });
    }
    let cells: Vec<usize> = w.points().iter().map(|p| nu.module.index_of_point(p)).collect();
    let mut out = SignedMeasure::zeros(w.clone(), nu.alphabet, cap)?;
    for (cfg, m) in &nu.masses {
        let word: Vec<u32> = cells.iter().map(|&c| cfg[c]).collect();
        out.add_mass(&word, m);
    }
    out.try_into()
}

/// How the torus system is parameterized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusForm {
    /// One variable per admissible configuration, with explicit invariance rows.
    Literal,
    /// One variable per translation orbit of admissible configurations; invariance
    /// holds by construction (mass spread uniformly over the orbit).
    Orbits,
}

/// The periodic-extension system on `A^M`.
#[derive(Debug, Clone)]
pub struct TorusPolytope {
    pub module: FiniteModule,
    pub base: Measure,
    pub form: TorusForm,
    /// Configurations sharing each variable's mass uniformly.
    pub columns: Vec<Vec<Vec<u32>>>,
    pub system: LinearSystem,
}

impl TorusPolytope {
    pub fn build(mu_u: &Measure, p: &PeriodVector, form: TorusForm, caps: &Caps) -> Result<Self> {
        let u = mu_u.domain();
        if p.dim() != u.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), got: p.dim() });
        }
        let module = FiniteModule::new(p.clone());
        module.check_injective(u)?;
        let support = WordSet::support_of(mu_u);
        let configs = enumerate_periodic_configs(&support, p, caps.max_cells, caps.node_limit)?;
        let table = module.addition_table();
        let a = mu_u.alphabet();
        let n = module.cardinality();
        let windows = torus_constraints(u, &module);
        let columns: Vec<Vec<Vec<u32>>> = match form {
            TorusForm::Literal => configs.into_iter().map(|c| vec![c]).collect(),
            TorusForm::Orbits => distinct_profiles(orbits(configs, &table), &windows, a),
        };
        if columns.len() > caps.max_lp_vars {
            return Err(Error::CapExceeded { needed: columns.len() as u128, cap: caps.max_lp_vars });
        }
        let mut sys = LinearSystem::new();
        for col in &columns {
            let tag = if form == TorusForm::Orbits { "orbit" } else { "m" };
            sys.add_variable(format!("{tag}[{}]", word_key(&col[0])), true);
        }
        sys.add_eq((0..columns.len()).map(|j| (j, one())).collect(), one())?;

        let mut rows: BTreeMap<usize, Vec<(usize, BigRational)>> = BTreeMap::new();
        for (j, col) in columns.iter().enumerate() {
            match form {
                TorusForm::Literal => {
                    let word: Vec<u32> = windows[0].iter().map(|&c| col[0][c]).collect();
                    rows.entry(encode(&word, a)).or_default().push((j, one()));
                }
                TorusForm::Orbits => {
                    // marginal at φ(U) of the uniform orbit measure: window counts over all g, divided by |M|
                    for (b, c) in window_profile(&col[0], &windows, a) {
                        rows.entry(b).or_default().push((j, BigRational::new(c.into(), (n as i64).into())));
                    }
                }
            }
        }
        for b in support.words() {
            let terms = rows.remove(&encode(b, a)).unwrap_or_default();
            sys.add_eq(terms, mu_u.mass(b).clone())?;
        }
        if form == TorusForm::Literal {
            let index: HashMap<&Vec<u32>, usize> = columns.iter().enumerate().map(|(j, c)| (&c[0], j)).collect();
            let generators: Vec<usize> = (0..module.dim())
                .map(|i| module.index_of_point(&crate::lattice::LatticePoint::unit(module.dim(), i)))
                .collect();
            for (j, col) in columns.iter().enumerate() {
                for &g in &generators {
                    let moved = translate(&col[0], &table, g);
                    let k = *index.get(&moved).ok_or_else(|| Error::Internal("translate not admissible".into()))?;
                    if k != j {
                        sys.add_eq(vec![(j, one()), (k, -one())], zero())?;
                    }
                }
            }
        }
        Ok(TorusPolytope { module, base: mu_u.clone(), form, columns, system: sys })
    }

    pub fn measure_from_point(&self, x: &[BigRational]) -> TorusMeasure {
        let mut masses = BTreeMap::new();
        for (col, v) in self.columns.iter().zip(x) {
            if v.is_zero() {
                continue;
            }
            let share = v / BigRational::from_integer((col.len() as i64).into());
            for cfg in col {
                masses.insert(cfg.clone(), share.clone());
            }
        }
        TorusMeasure { module: self.module.clone(), alphabet: self.base.alphabet(), masses }
    }
}

/// Groups configurations into translation orbits, each listed from its least member.
fn orbits(configs: Vec<Vec<u32>>, table: &[Vec<usize>]) -> Vec<Vec<Vec<u32>>> {
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::with_capacity(configs.len());
    let mut out = Vec::new();
    for cfg in configs {
        if seen.contains_key(&cfg) {
            continue;
        }
        let mut members: Vec<Vec<u32>> = (0..table.len()).map(|g| translate(&cfg, table, g)).collect();
        members.sort();
        members.dedup();
        for m in &members {
            seen.insert(m.clone(), ());
        }
        out.push(members);
    }
    out
}

/// How often each word of `A^U` appears among the torus windows of `cfg`.
fn window_profile(cfg: &[u32], windows: &[Vec<usize>], alphabet: u32) -> BTreeMap<usize, i64> {
    let mut counts = BTreeMap::new();
    for cells in windows {
        let word: Vec<u32> = cells.iter().map(|&c| cfg[c]).collect();
        *counts.entry(encode(&word, alphabet)).or_default() += 1;
    }
    counts
}

/// Keeps the first orbit of each window profile. Orbits with equal profiles give
/// identical LP columns, so dropping the rest leaves the feasible marginals unchanged.
fn distinct_profiles(orbits: Vec<Vec<Vec<u32>>>, windows: &[Vec<usize>], alphabet: u32) -> Vec<Vec<Vec<u32>>> {
    let mut seen = std::collections::HashSet::new();
    orbits
        .into_iter()
        .filter(|o| seen.insert(window_profile(&o[0], windows, alphabet)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicVerdict {
    Feasible(TorusMeasure),
    Infeasible,
    Aborted { pivots: usize },
}

#[derive(Debug, Clone)]
pub struct PeriodicOutcome {
    pub verdict: PeriodicVerdict,
    /// E2 status of `P` for `U`; anything but `Pass` is reported as a warning.
    pub envelope: EnvelopeCheck,
    pub system_hash: String,
    pub variables: usize,
}

/// Decides whether `μ_U` has a `P`-periodic stationary extension.
pub fn periodic_extension(mu_u: &Measure, p: &PeriodVector, caps: &Caps) -> Result<PeriodicOutcome> {
    periodic_extension_with(mu_u, p, TorusForm::Orbits, caps)
}

pub fn periodic_extension_with(
    mu_u: &Measure,
    p: &PeriodVector,
    form: TorusForm,
    caps: &Caps,
) -> Result<PeriodicOutcome> {
    let poly = TorusPolytope::build(mu_u, p, form, caps)?;
    let envelope = verify_envelope(&Envelope::new(poly.module.clone()), mu_u.domain(), DEFAULT_SUBSET_CAP)?;
    let verdict = match solve_feasibility(&poly.system, caps.pivot_limit) {
        FeasibilityResult::Infeasible => PeriodicVerdict::Infeasible,
        FeasibilityResult::Aborted { pivots } => PeriodicVerdict::Aborted { pivots },
        FeasibilityResult::Feasible(x) => {
            let nu = poly.measure_from_point(&x);
            if nu.total() != one() || !nu.is_invariant() {
                return Err(Error::Internal("torus solution is not an invariant probability".into()));
            }
            if &pullback_periodic(&nu, mu_u.domain(), caps.max_cells)? != mu_u {
                return Err(Error::Internal("torus solution does not pull back to the base".into()));
            }
            PeriodicVerdict::Feasible(nu)
        }
    };
    Ok(PeriodicOutcome { verdict, envelope, system_hash: poly.system.hash(), variables: poly.columns.len() })
}
