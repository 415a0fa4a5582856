//! Admissible word sets, SFT emptiness on windows and periodic configuration search.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::lattice::{translates_inside, Domain, FiniteModule, PeriodVector};
use crate::measure::{word_key, Measure};

/// A set of admissible words on a domain `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    domain: Domain,
    alphabet: u32,
    words: BTreeSet<Vec<u32>>,
}

impl WordSet {
    pub fn new(domain: Domain, alphabet: u32, words: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let words: BTreeSet<Vec<u32>> = words.into_iter().collect();
        for w in &words {
            if w.len() != domain.len() || w.iter().any(|&s| s >= alphabet) {
                return Err(Error::Invalid(format!("word {} does not fit the domain/alphabet", word_key(w))));
            }
        }
        Ok(WordSet { domain, alphabet, words })
    }

    pub fn support_of(mu: &Measure) -> Self {
        WordSet {
            domain: mu.domain().clone(),
            alphabet: mu.alphabet(),
            words: mu.support_words().into_iter().collect(),
        }
    }

    /// Every word in `A^U`.
    pub fn full(domain: Domain, alphabet: u32) -> Result<Self> {
        let n = crate::util::checked_cells(alphabet, domain.len(), 1 << 24)?;
        let len = domain.len();
        Ok(WordSet {
            domain,
            alphabet,
            words: (0..n).map(|i| crate::util::decode(i, alphabet, len)).collect(),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn words(&self) -> &BTreeSet<Vec<u32>> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[u32]) -> bool {
        self.words.contains(w)
    }
}

/// One check fired when its last-ordered cell gets a symbol.
struct Check {
    cells: Vec<usize>,
    mask: usize,
}

pub(crate) enum SearchEnd {
    Done,
    Aborted(u64),
}

/// Backtracking over cells `0..n`, each constraint a list of cells read in `U` order.
/// After each assignment every constraint touching the cell is checked on its
/// assigned prefix against the projections of `T`.
pub(crate) struct Search {
    alphabet: u32,
    n_cells: usize,
    checks: Vec<Vec<Check>>,
    allowed: Vec<HashSet<u128>>,
    node_limit: u64,
    pub nodes: u64,
}

fn key(cfg: &[u32], cells: &[usize], alphabet: u32) -> u128 {
    cells.iter().fold(0u128, |acc, &c| acc * alphabet as u128 + cfg[c] as u128)
}

impl Search {
    pub(crate) fn new(t: &WordSet, n_cells: usize, constraints: &[Vec<usize>], node_limit: u64) -> Result<Self> {
        let bits = (t.alphabet.max(2) as f64).log2().ceil() as usize * t.domain.len();
        if bits > 127 || t.domain.len() > 64 {
            return Err(Error::Invalid("word set too wide for the search key".into()));
        }
        let mut mask_ids: HashMap<u64, usize> = HashMap::new();
        let mut allowed: Vec<HashSet<u128>> = Vec::new();
        let mut checks: Vec<Vec<Check>> = (0..n_cells).map(|_| Vec::new()).collect();
        for cells in constraints {
            let mut touched: Vec<usize> = cells.clone();
            touched.sort();
            touched.dedup();
            for &c in &touched {
                let positions: Vec<usize> = (0..cells.len()).filter(|&j| cells[j] <= c).collect();
                let mask = positions.iter().fold(0u64, |m, &j| m | 1 << j);
                let id = *mask_ids.entry(mask).or_insert_with(|| {
                    allowed.push(
                        t.words
                            .iter()
                            .map(|w| positions.iter().fold(0u128, |acc, &j| acc * t.alphabet as u128 + w[j] as u128))
                            .collect(),
                    );
                    allowed.len() - 1
                });
                checks[c].push(Check { cells: positions.iter().map(|&j| cells[j]).collect(), mask: id });
            }
        }
        Ok(Search { alphabet: t.alphabet, n_cells, checks, allowed, node_limit, nodes: 0 })
    }

    fn consistent(&self, cfg: &[u32], cell: usize) -> bool {
        self.checks[cell]
            .iter()
            .all(|ch| self.allowed[ch.mask].contains(&key(cfg, &ch.cells, self.alphabet)))
    }

    /// Visits admissible configurations in lexicographic order until `visit` returns false.
    pub(crate) fn run(&mut self, mut visit: impl FnMut(&[u32]) -> bool) -> SearchEnd {
        let n = self.n_cells;
        let mut cfg = vec![0u32; n];
        if n == 0 {
            visit(&cfg);
            return SearchEnd::Done;
        }
        let mut next = vec![0u32; n];
        let mut i = 0usize;
        loop {
            let mut placed = false;
            while next[i] < self.alphabet {
                cfg[i] = next[i];
                next[i] += 1;
                self.nodes += 1;
                if self.nodes > self.node_limit {
                    return SearchEnd::Aborted(self.nodes);
                }
                if self.consistent(&cfg, i) {
                    placed = true;
                    break;
                }
            }
            if placed {
                if i + 1 == n {
                    if !visit(&cfg) {
                        return SearchEnd::Done;
                    }
                } else {
                    i += 1;
                    next[i] = 0;
                }
            } else {
                if i == 0 {
                    return SearchEnd::Done;
                }
                i -= 1;
            }
        }
    }
}

/// Cell lists of every translate of `U` inside `w`.
pub(crate) fn window_constraints(u: &Domain, w: &Domain) -> Vec<Vec<usize>> {
    translates_inside(u, w)
        .iter()
        .map(|k| u.points().iter().map(|p| w.index_of(&p.add(k)).expect("inside")).collect())
        .collect()
}

/// Cell lists of every torus translate `φ(U) + g`.
pub(crate) fn torus_constraints(u: &Domain, module: &FiniteModule) -> Vec<Vec<usize>> {
    let base: Vec<usize> = u.points().iter().map(|p| module.index_of_point(p)).collect();
    let table = module.addition_table();
    (0..module.cardinality()).map(|g| base.iter().map(|&c| table[g][c]).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SftVerdict {
    /// No admissible pattern on `window`, so the SFT is empty.
    Empty { window: Domain },
    /// Every window in the schedule admits a pattern (or a cap stopped the search).
    Unknown { largest_window: Option<Domain>, reason: Option<String> },
}

/// First admissible pattern on `w`, if any.
pub fn admissible_pattern(t: &WordSet, w: &Domain, node_limit: u64) -> Result<Option<Vec<u32>>> {
    let cons = window_constraints(&t.domain, w);
    let mut search = Search::new(t, w.len(), &cons, node_limit)?;
    let mut found = None;
    match search.run(|cfg| {
        found = Some(cfg.to_vec());
        false
    }) {
        SearchEnd::Aborted(n) => Err(Error::SearchAborted(n)),
        SearchEnd::Done => Ok(found),
    }
}

/// All admissible patterns on `w`, failing past `max` of them.
pub fn admissible_patterns(t: &WordSet, w: &Domain, max: usize, node_limit: u64) -> Result<Vec<Vec<u32>>> {
    let cons = window_constraints(&t.domain, w);
    collect_all(t, w.len(), &cons, max, node_limit)
}

fn collect_all(t: &WordSet, n: usize, cons: &[Vec<usize>], max: usize, node_limit: u64) -> Result<Vec<Vec<u32>>> {
    let mut search = Search::new(t, n, cons, node_limit)?;
    let mut out = Vec::new();
    let mut overflow = false;
    let end = search.run(|cfg| {
        if out.len() == max {
            overflow = true;
            return false;
        }
        out.push(cfg.to_vec());
        true
    });
    if overflow {
        return Err(Error::CapExceeded { needed: max as u128 + 1, cap: max });
    }
    match end {
        SearchEnd::Aborted(n) => Err(Error::SearchAborted(n)),
        SearchEnd::Done => Ok(out),
    }
}

pub fn sft_emptiness(t: &WordSet, windows: &[Domain], node_limit: u64) -> Result<SftVerdict> {
    if t.is_empty() {
        return Err(Error::Invalid("word set is empty".into()));
    }
    let mut largest = None;
    for w in windows {
        if w.dim() != t.domain.dim() {
            return Err(Error::DimensionMismatch { expected: t.domain.dim(), got: w.dim() });
        }
        match admissible_pattern(t, w, node_limit) {
            Ok(Some(_)) => largest = Some(w.clone()),
            Ok(None) => return Ok(SftVerdict::Empty { window: w.clone() }),
            Err(Error::SearchAborted(n)) => {
                return Ok(SftVerdict::Unknown {
                    largest_window: largest,
                    reason: Some(format!("search on {w} stopped after {n} nodes")),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SftVerdict::Unknown { largest_window: largest, reason: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicSearch {
    /// Symbols indexed by module element.
    Found(Vec<u32>),
    NoneExists,
    Aborted { nodes: u64 },
}

fn torus_for(t: &WordSet, p: &PeriodVector) -> Result<FiniteModule> {
    if p.dim() != t.domain.dim() {
        return Err(Error::DimensionMismatch { expected: t.domain.dim(), got: p.dim() });
    }
    Ok(FiniteModule::new(p.clone()))
}

/// True if every torus translate of `U` reads a word of `t`.
pub fn torus_admissible(t: &WordSet, module: &FiniteModule, cfg: &[u32]) -> bool {
    torus_constraints(&t.domain, module)
        .iter()
        .all(|cells| t.contains(&cells.iter().map(|&c| cfg[c]).collect::<Vec<_>>()))
}

/// Backtracking for a `P`-periodic admissible configuration. Collisions of `U`
/// modulo `P` are allowed: a collapsed window must then read equal symbols.
pub fn periodic_config_search(t: &WordSet, p: &PeriodVector, node_limit: u64) -> Result<PeriodicSearch> {
    let module = torus_for(t, p)?;
    let cons = torus_constraints(&t.domain, &module);
    let mut search = Search::new(t, module.cardinality(), &cons, node_limit)?;
    let mut found = None;
    let end = search.run(|cfg| {
        found = Some(cfg.to_vec());
        false
    });
    if let SearchEnd::Aborted(nodes) = end {
        return Ok(PeriodicSearch::Aborted { nodes });
    }
    match found {
        Some(cfg) => {
            if !torus_admissible(t, &module, &cfg) {
                return Err(Error::Internal("periodic configuration failed re-check".into()));
            }
            Ok(PeriodicSearch::Found(cfg))
        }
        None => Ok(PeriodicSearch::NoneExists),
    }
}

/// Every admissible configuration on the torus, failing past `max`.
pub fn enumerate_periodic_configs(
    t: &WordSet,
    p: &PeriodVector,
    max: usize,
    node_limit: u64,
) -> Result<Vec<Vec<u32>>> {
    let module = torus_for(t, p)?;
    let cons = torus_constraints(&t.domain, &module);
    collect_all(t, module.cardinality(), &cons, max, node_limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_one() -> WordSet {
        WordSet::new(Domain::interval(0, 1), 2, [vec![0, 1]]).unwrap()
    }

    fn boxes(dim: usize, n: i64) -> Vec<Domain> {
        (1..=n).map(|s| Domain::cube(dim, s)).collect()
    }

    #[test]
    fn full_shift_unknown() {
        let t = WordSet::full(Domain::cube(2, 2), 2).unwrap();
        assert!(matches!(sft_emptiness(&t, &boxes(2, 4), 1 << 20).unwrap(), SftVerdict::Unknown { reason: None, .. }));
        let p = PeriodVector::new(vec![3, 2]).unwrap();
        assert!(matches!(periodic_config_search(&t, &p, 1 << 20).unwrap(), PeriodicSearch::Found(_)));
    }

    #[test]
    fn self_conflicting_tile() {
        let t = zero_one();
        assert_eq!(
            sft_emptiness(&t, &boxes(1, 3), 1 << 20).unwrap(),
            SftVerdict::Empty { window: Domain::interval(0, 2) }
        );
        let p = PeriodVector::new(vec![2]).unwrap();
        assert_eq!(periodic_config_search(&t, &p, 1 << 20).unwrap(), PeriodicSearch::NoneExists);
    }

    #[test]
    fn enumerates_all_patterns() {
        let t = WordSet::new(Domain::interval(0, 1), 2, [vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let pats = admissible_patterns(&t, &Domain::interval(0, 2), 100, 1 << 20).unwrap();
        // no two consecutive zeros
        assert_eq!(pats.len(), 5);
        assert!(admissible_patterns(&t, &Domain::interval(0, 2), 3, 1 << 20).is_err());
        let p = PeriodVector::new(vec![3]).unwrap();
        assert_eq!(enumerate_periodic_configs(&t, &p, 100, 1 << 20).unwrap().len(), 4);
    }

    #[test]
    fn collapsed_period_reads_equal_symbols() {
        let t = WordSet::new(Domain::interval(0, 1), 2, [vec![0, 0], vec![0, 1]]).unwrap();
        let p = PeriodVector::new(vec![1]).unwrap();
        assert_eq!(periodic_config_search(&t, &p, 100).unwrap(), PeriodicSearch::Found(vec![0]));
    }

    #[test]
    fn node_limit_aborts() {
        let t = WordSet::full(Domain::cube(2, 2), 2).unwrap();
        let p = PeriodVector::new(vec![4, 4]).unwrap();
        assert_eq!(enumerate_periodic_configs(&t, &p, 1 << 20, 10), Err(Error::SearchAborted(11)));
    }
}
