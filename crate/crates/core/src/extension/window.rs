//! The window polytope `S_W` in cylinder-mass coordinates.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::sft::{admissible_patterns, WordSet};
use crate::error::{Error, Result};
use crate::lattice::{translates_inside, Domain, LatticePoint};
use crate::lp::{solve_feasibility, FeasibilityResult, LinearSystem};
use crate::measure::{word_key, Measure, SignedMeasure};
use crate::util::{encode, one};
use crate::Caps;

/// Locally stationary measures on `window` whose marginal on every translate of `U`
/// is `μ_U`. Words with a translate outside `supp μ_U` are forced to zero and are
/// left out of the variable list.
#[derive(Debug, Clone)]
pub struct ExtensionPolytope {
    pub window: Domain,
    pub base: Measure,
    /// Variable `j` is the mass of `words[j]` (canonical order).
    pub words: Vec<Vec<u32>>,
    pub system: LinearSystem,
}

impl ExtensionPolytope {
    pub fn solve(&self, pivot_limit: usize) -> FeasibilityResult {
        solve_feasibility(&self.system, pivot_limit)
    }

    /// Expands a point of the polytope into a window measure.
    pub fn measure_from_point(&self, x: &[BigRational], cap: usize) -> Result<Measure> {
        let mut m = SignedMeasure::zeros(self.window.clone(), self.base.alphabet(), cap)?;
        for (w, v) in self.words.iter().zip(x) {
            m.set(w, v.clone());
        }
        m.try_into()
    }

    /// Coordinates of `nu` in this polytope, or `None` if `nu` charges a pruned word.
    pub fn point_from_measure(&self, nu: &Measure) -> Option<Vec<BigRational>> {
        if nu.domain() != &self.window || nu.alphabet() != self.base.alphabet() {
            return None;
        }
        let index: HashMap<&Vec<u32>, usize> = self.words.iter().enumerate().map(|(j, w)| (w, j)).collect();
        let mut x = vec![BigRational::zero(); self.words.len()];
        for (w, m) in nu.support() {
            x[*index.get(&w)?] = m.clone();
        }
        Some(x)
    }

    pub fn contains(&self, nu: &Measure) -> bool {
        self.point_from_measure(nu).is_some_and(|x| self.system.is_satisfied_by(&x))
    }
}

/// Shift vectors whose equalities generate local stationarity on `w`.
fn stationarity_shifts(w: &Domain) -> Vec<LatticePoint> {
    if w.is_box() {
        (0..w.dim()).map(|i| LatticePoint::unit(w.dim(), i)).collect()
    } else {
        w.positive_differences()
    }
}

pub fn build_window_polytope(mu_u: &Measure, w: &Domain, caps: &Caps) -> Result<ExtensionPolytope> {
    let u = mu_u.domain();
    let translates = translates_inside(u, w);
    if translates.is_empty() {
        return Err(Error::NoTranslate(w.to_string()));
    }
    let support = WordSet::support_of(mu_u);
    let words = admissible_patterns(&support, w, caps.max_lp_vars, caps.node_limit)?;
    let a = mu_u.alphabet();
    let mut sys = LinearSystem::new();
    for word in &words {
        sys.add_variable(format!("m[{}]", word_key(word)), true);
    }
    sys.add_eq((0..words.len()).map(|j| (j, one())).collect(), one())?;

    let project = |pos: &[usize], word: &[u32]| -> usize {
        pos.iter().fold(0usize, |acc, &p| acc * a as usize + word[p] as usize)
    };
    for k in &translates {
        let pos = u.shift(k)?.positions_in(w)?;
        let mut rows: BTreeMap<usize, Vec<(usize, BigRational)>> = BTreeMap::new();
        for (j, word) in words.iter().enumerate() {
            rows.entry(project(&pos, word)).or_default().push((j, one()));
        }
        for b in support.words() {
            let terms = rows.remove(&encode(b, a)).unwrap_or_default();
            sys.add_eq(terms, mu_u.mass(b).clone())?;
        }
    }
    for k in stationarity_shifts(w) {
        let v = w.overlap_with_shift(&k);
        if v.is_empty() {
            continue;
        }
        let here = v.positions_in(w)?;
        let there = v.shift(&k)?.positions_in(w)?;
        let mut rows: BTreeMap<usize, Vec<(usize, BigRational)>> = BTreeMap::new();
        for (j, word) in words.iter().enumerate() {
            let (x, y) = (project(&here, word), project(&there, word));
            if x != y {
                rows.entry(x).or_default().push((j, one()));
                rows.entry(y).or_default().push((j, -BigRational::one()));
            }
        }
        for (_, terms) in rows {
            sys.add_eq(terms, BigRational::zero())?;
        }
    }
    Ok(ExtensionPolytope { window: w.clone(), base: mu_u.clone(), words, system: sys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::disconnected_counterexample;
    use crate::markov::MarkovExtension;
    use crate::util::ratio;

    fn base() -> Measure {
        Measure::from_dense(
            Domain::interval(0, 1),
            2,
            vec![ratio(3, 8), ratio(1, 8), ratio(1, 8), ratio(3, 8)],
        )
        .unwrap()
    }

    #[test]
    fn base_window_is_a_point() {
        let p = build_window_polytope(&base(), &Domain::interval(0, 1), &Caps::default()).unwrap();
        match p.solve(1000) {
            FeasibilityResult::Feasible(x) => assert_eq!(p.measure_from_point(&x, 1 << 20).unwrap(), base()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counterexample_infeasible_on_four_sites() {
        let mu = disconnected_counterexample(2, &[ratio(1, 2), ratio(1, 2)]).unwrap();
        let p = build_window_polytope(&mu, &Domain::interval(0, 3), &Caps::default()).unwrap();
        assert_eq!(p.solve(10_000), FeasibilityResult::Infeasible);
    }

    #[test]
    fn markov_window_inside() {
        let p = build_window_polytope(&base(), &Domain::interval(0, 2), &Caps::default()).unwrap();
        let ext = MarkovExtension::new(base()).unwrap();
        assert!(p.contains(&ext.window_measure(3, 1 << 20).unwrap()));
        assert!(p.solve(1000).is_feasible());
    }

    #[test]
    fn needs_a_translate() {
        assert!(matches!(
            build_window_polytope(&base(), &Domain::line(&[0, 2]).unwrap(), &Caps::default()),
            Err(Error::NoTranslate(_))
        ));
    }
}
