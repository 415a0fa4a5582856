//! Lattice points, finite domains, rectangular tori and envelopes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = vec![0; dim];
        c[axis] = 1;
        LatticePoint(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, k: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&k.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, k: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&k.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite set of lattice points kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct Domain {
    dim: usize,
    points: Vec<LatticePoint>,
}

impl TryFrom<Vec<Vec<i64>>> for Domain {
    type Error = Error;

    fn try_from(raw: Vec<Vec<i64>>) -> Result<Self> {
        let dim = raw.first().map(|p| p.len()).ok_or(Error::EmptyDomain)?;
        Domain::new(dim, raw.into_iter().map(LatticePoint).collect())
    }
}

impl From<Domain> for Vec<Vec<i64>> {
    fn from(d: Domain) -> Self {
        d.points.into_iter().map(|p| p.0).collect()
    }
}

impl Domain {
    /// Sorts the points; duplicates and mixed dimensions are errors.
    pub fn new(dim: usize, mut points: Vec<LatticePoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
        }
        points.sort();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoint(w[0].0.clone()));
            }
        }
        Ok(Domain { dim, points })
    }

    /// Like `new` but silently merges duplicates.
    pub fn from_set(dim: usize, points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let set: BTreeSet<LatticePoint> = points.into_iter().collect();
        Domain::new(dim, set.into_iter().collect())
    }

    pub fn from_coords(points: &[&[i64]]) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).ok_or(Error::EmptyDomain)?;
        Domain::new(dim, points.iter().map(|p| LatticePoint(p.to_vec())).collect())
    }

    /// The 1-D points `{p : p ∈ pts}`.
    pub fn line(pts: &[i64]) -> Result<Self> {
        Domain::new(1, pts.iter().map(|&p| LatticePoint(vec![p])).collect())
    }

    /// The 1-D interval `[lo..hi]`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Domain {
            dim: 1,
            points: (lo..=hi).map(|p| LatticePoint(vec![p])).collect(),
        }
    }

    /// The box `∏ [lo_i..hi_i]`; empty if any side is empty.
    pub fn boxed(lo: &[i64], hi: &[i64]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let dim = lo.len();
        let mut points = Vec::new();
        if lo.iter().zip(hi).all(|(l, h)| l <= h) {
            let mut cur = lo.to_vec();
            loop {
                points.push(LatticePoint(cur.clone()));
                let mut axis = dim;
                loop {
                    if axis == 0 {
                        return Domain { dim, points };
                    }
                    axis -= 1;
                    if cur[axis] < hi[axis] {
                        cur[axis] += 1;
                        break;
                    }
                    cur[axis] = lo[axis];
                }
            }
        }
        Domain { dim, points }
    }

    /// `B(n) = [0..n-1]^dim`.
    pub fn cube(dim: usize, n: i64) -> Self {
        Domain::boxed(&vec![0; dim], &vec![n - 1; dim])
    }

    /// `[lo..hi]^dim`.
    pub fn cube_from(dim: usize, lo: i64, hi: i64) -> Self {
        Domain::boxed(&vec![lo; dim], &vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_subset_of(&self, other: &Domain) -> bool {
        self.dim == other.dim && self.points.iter().all(|p| other.contains(p))
    }

    /// Positions of this domain's points inside `outer`.
    pub fn positions_in(&self, outer: &Domain) -> Result<Vec<usize>> {
        self.points
            .iter()
            .map(|p| outer.index_of(p).ok_or_else(|| Error::NotSubset(self.to_string())))
            .collect()
    }

    pub fn shift(&self, k: &LatticePoint) -> Result<Domain> {
        if k.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: k.dim() });
        }
        // translation preserves lexicographic order
        Ok(Domain {
            dim: self.dim,
            points: self.points.iter().map(|p| p.add(k)).collect(),
        })
    }

    /// Inclusive bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.points.first()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for p in &self.points {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p.0[i]);
                hi[i] = hi[i].max(p.0[i]);
            }
        }
        Some((lo, hi))
    }

    pub fn side_lengths(&self) -> Option<Vec<i64>> {
        self.bounding_box()
            .map(|(lo, hi)| lo.iter().zip(&hi).map(|(l, h)| h - l + 1).collect())
    }

    pub fn is_box(&self) -> bool {
        match self.side_lengths() {
            Some(s) => s.iter().product::<i64>() as usize == self.len(),
            None => false,
        }
    }

    pub fn is_interval(&self) -> bool {
        self.dim == 1 && self.is_box()
    }

    pub fn union(&self, other: &Domain) -> Result<Domain> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Domain::from_set(self.dim, self.points.iter().chain(&other.points).cloned())
    }

    pub fn intersection(&self, other: &Domain) -> Domain {
        Domain {
            dim: self.dim,
            points: self.points.iter().filter(|p| other.contains(p)).cloned().collect(),
        }
    }

    /// Sub-domain picked out by `mask` (bit i selects point i).
    pub fn subset_by_mask(&self, mask: u64) -> Domain {
        Domain {
            dim: self.dim,
            points: self
                .points
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        }
    }

    /// Nonzero differences `p - q` that are lexicographically positive.
    pub fn positive_differences(&self) -> Vec<LatticePoint> {
        let origin = LatticePoint::origin(self.dim);
        let set: BTreeSet<LatticePoint> = self
            .points
            .iter()
            .flat_map(|p| self.points.iter().map(move |q| p.sub(q)))
            .filter(|k| *k > origin)
            .collect();
        set.into_iter().collect()
    }

    /// `W ∩ (W - k)`: the points that stay inside after shifting by `k`.
    pub fn overlap_with_shift(&self, k: &LatticePoint) -> Domain {
        Domain {
            dim: self.dim,
            points: self.points.iter().filter(|p| self.contains(&p.add(k))).cloned().collect(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_box() && self.len() > 1 {
            let (lo, hi) = self.bounding_box().unwrap();
            for i in 0..self.dim {
                if i > 0 {
                    write!(f, "x")?;
                }
                write!(f, "[{}..{}]", lo[i], hi[i])?;
            }
            return Ok(());
        }
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

pub fn shift_domain(u: &Domain, k: &LatticePoint) -> Result<Domain> {
    u.shift(k)
}

/// Every `k` with `V + k ⊆ W`.
pub fn translates_inside(v: &Domain, w: &Domain) -> Vec<LatticePoint> {
    let Some(anchor) = v.points.first() else {
        return Vec::new();
    };
    if v.dim != w.dim {
        return Vec::new();
    }
    w.points
        .iter()
        .map(|p| p.sub(anchor))
        .filter(|k| v.points.iter().all(|q| w.contains(&q.add(k))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PeriodVector(Vec<i64>);

impl TryFrom<Vec<i64>> for PeriodVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        PeriodVector::new(v)
    }
}

impl From<PeriodVector> for Vec<i64> {
    fn from(p: PeriodVector) -> Self {
        p.0
    }
}

impl PeriodVector {
    pub fn new(periods: Vec<i64>) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::Invalid("period vector is empty".into()));
        }
        if let Some(p) = periods.iter().find(|&&p| p < 1) {
            return Err(Error::Invalid(format!("period {p} is not positive")));
        }
        Ok(PeriodVector(periods))
    }

    pub fn periods(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for PeriodVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `⊕ Z/P_i`, elements indexed in mixed radix with the first axis most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteModule {
    periods: PeriodVector,
}

impl FiniteModule {
    pub fn new(periods: PeriodVector) -> Self {
        FiniteModule { periods }
    }

    pub fn from_periods(periods: &[i64]) -> Result<Self> {
        Ok(FiniteModule::new(PeriodVector::new(periods.to_vec())?))
    }

    pub fn periods(&self) -> &PeriodVector {
        &self.periods
    }

    pub fn dim(&self) -> usize {
        self.periods.dim()
    }

    pub fn cardinality(&self) -> usize {
        self.periods.0.iter().product::<i64>() as usize
    }

    /// Coordinatewise reduction into `[0, P_i)`.
    pub fn reduce(&self, p: &LatticePoint) -> Vec<i64> {
        p.0.iter().zip(&self.periods.0).map(|(c, m)| c.rem_euclid(*m)).collect()
    }

    pub fn index_of_residue(&self, r: &[i64]) -> usize {
        r.iter()
            .zip(&self.periods.0)
            .fold(0usize, |acc, (c, m)| acc * *m as usize + *c as usize)
    }

    pub fn index_of_point(&self, p: &LatticePoint) -> usize {
        self.index_of_residue(&self.reduce(p))
    }

    pub fn residue(&self, mut index: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim()];
        for (slot, m) in out.iter_mut().zip(&self.periods.0).rev() {
            *slot = (index % *m as usize) as i64;
            index /= *m as usize;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.cardinality()).map(|i| self.residue(i))
    }

    /// Index of `a + b`.
    pub fn add_indices(&self, a: usize, b: usize) -> usize {
        let ra = self.residue(a);
        let rb = self.residue(b);
        let sum: Vec<i64> = ra
            .iter()
            .zip(&rb)
            .zip(&self.periods.0)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        self.index_of_residue(&sum)
    }

    /// Table `t[g][m] = index of m + g`.
    pub fn addition_table(&self) -> Vec<Vec<usize>> {
        let n = self.cardinality();
        (0..n).map(|g| (0..n).map(|m| self.add_indices(m, g)).collect()).collect()
    }

    /// Fails with the first colliding pair if `φ` is not injective on `u`.
    pub fn check_injective(&self, u: &Domain) -> Result<()> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.dim() });
        }
        let mut seen: HashMap<usize, &LatticePoint> = HashMap::new();
        for p in u.points() {
            if let Some(q) = seen.insert(self.index_of_point(p), p) {
                return Err(Error::NotInjective(q.0.clone(), p.0.clone()));
            }
        }
        Ok(())
    }
}

pub fn quotient_map(m: &FiniteModule, p: &LatticePoint) -> Result<Vec<i64>> {
    if p.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: p.dim() });
    }
    Ok(m.reduce(p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub module: FiniteModule,
}

impl Envelope {
    pub fn new(module: FiniteModule) -> Self {
        Envelope { module }
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// Periods twice the bounding-box sides of `u`.
pub fn envelope_for(u: &Domain) -> Result<Envelope> {
    let sides = u.side_lengths().ok_or(Error::EmptyDomain)?;
    let periods = sides.iter().map(|n| 2 * n).collect();
    Ok(Envelope::new(FiniteModule::new(PeriodVector::new(periods)?)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvelopeCheck {
    Pass,
    /// E1 fails: two points of `U` share a residue.
    NotInjective { first: LatticePoint, second: LatticePoint },
    /// E2 fails: `module_shift + φ(subset) ⊆ φ(U)` has no integer realization inside `U`.
    Fail { subset: Domain, module_shift: Vec<i64> },
    /// No failure among subsets up to `max_subset` points, larger ones unchecked.
    Partial { max_subset: usize },
}

impl EnvelopeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, EnvelopeCheck::Pass)
    }
}

pub const DEFAULT_SUBSET_CAP: usize = 4;

/// Checks E1 and E2 for `u`, with E2 limited to subsets of at most `subset_cap` points.
pub fn verify_envelope(e: &Envelope, u: &Domain, subset_cap: usize) -> Result<EnvelopeCheck> {
    let m = &e.module;
    if u.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: u.dim() });
    }
    if u.len() > m.cardinality() {
        return Err(Error::Invalid(format!(
            "domain has {} points but the module only {}",
            u.len(),
            m.cardinality()
        )));
    }
    if u.len() > 63 {
        return Err(Error::Invalid("envelope check supports at most 63 points".into()));
    }
    if let Err(Error::NotInjective(a, b)) = m.check_injective(u) {
        return Ok(EnvelopeCheck::NotInjective { first: LatticePoint(a), second: LatticePoint(b) });
    }
    let image: Vec<usize> = u.points().iter().map(|p| m.index_of_point(p)).collect();
    let mut in_image = vec![false; m.cardinality()];
    for &i in &image {
        in_image[i] = true;
    }
    let table = m.addition_table();
    let cap = subset_cap.min(u.len());
    let mut masks: Vec<u64> = (1u64..(1u64 << u.len())).filter(|s| s.count_ones() as usize <= cap).collect();
    masks.sort_by_key(|s| (s.count_ones(), *s));
    for mask in masks {
        let v = u.subset_by_mask(mask);
        let v_image: Vec<usize> = (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| image[i]).collect();
        let realized: BTreeSet<usize> = translates_inside(&v, u).iter().map(|g| m.index_of_point(g)).collect();
        for g in 0..m.cardinality() {
            if !v_image.iter().all(|&x| in_image[table[g][x]]) {
                continue;
            }
            if !realized.contains(&g) {
                return Ok(EnvelopeCheck::Fail { subset: v, module_shift: m.residue(g) });
            }
        }
    }
    if cap < u.len() {
        Ok(EnvelopeCheck::Partial { max_subset: cap })
    } else {
        Ok(EnvelopeCheck::Pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn shifts() {
        let u = Domain::line(&[0, 1, 3]).unwrap();
        assert_eq!(u.shift(&pt(&[0])).unwrap(), u);
        assert_eq!(u.shift(&pt(&[2])).unwrap(), Domain::line(&[2, 3, 5]).unwrap());
        let u2 = Domain::from_coords(&[&[0, 0], &[1, 0]]).unwrap();
        assert_eq!(
            u2.shift(&pt(&[1, 1])).unwrap(),
            Domain::from_coords(&[&[1, 1], &[2, 1]]).unwrap()
        );
        assert!(u.shift(&pt(&[1, 1])).is_err());
    }

    #[test]
    fn translates() {
        let w = Domain::interval(0, 2);
        assert_eq!(translates_inside(&Domain::line(&[0]).unwrap(), &w).len(), 3);
        assert_eq!(translates_inside(&Domain::interval(0, 1), &w), vec![pt(&[0]), pt(&[1])]);
        let w = Domain::line(&[0, 1, 3]).unwrap();
        assert_eq!(translates_inside(&Domain::interval(0, 1), &w), vec![pt(&[0])]);
    }

    #[test]
    fn quotient() {
        let m = FiniteModule::from_periods(&[4, 4]).unwrap();
        assert_eq!(quotient_map(&m, &pt(&[5, -1])).unwrap(), vec![1, 3]);
        let m = FiniteModule::from_periods(&[2]).unwrap();
        assert_eq!(quotient_map(&m, &pt(&[7])).unwrap(), vec![1]);
        let m = FiniteModule::from_periods(&[3, 2]).unwrap();
        assert_eq!(quotient_map(&m, &pt(&[0, 0])).unwrap(), vec![0, 0]);
        assert_eq!(m.cardinality(), 6);
        assert_eq!(m.residue(m.index_of_residue(&[2, 1])), vec![2, 1]);
    }

    #[test]
    fn envelope_examples() {
        let sq = Domain::cube(2, 2);
        let e = envelope_for(&sq).unwrap();
        assert_eq!(e.module.periods().periods(), &[4, 4]);
        assert_eq!(verify_envelope(&e, &sq, 4).unwrap(), EnvelopeCheck::Pass);
        let e = envelope_for(&Domain::line(&[0, 1, 3]).unwrap()).unwrap();
        assert_eq!(e.module.periods().periods(), &[8]);
        let single = Domain::line(&[0]).unwrap();
        let e = envelope_for(&single).unwrap();
        assert_eq!(e.module.periods().periods(), &[2]);
        assert!(verify_envelope(&e, &single, 4).unwrap().passed());
        assert!(envelope_for(&Domain::new(1, vec![]).unwrap()).is_err());
    }

    #[test]
    fn undoubled_row_fails() {
        let u = Domain::boxed(&[1, 1], &[3, 1]);
        let e = Envelope::new(FiniteModule::from_periods(&[3, 1]).unwrap());
        match verify_envelope(&e, &u, 4).unwrap() {
            EnvelopeCheck::Fail { subset, module_shift } => {
                assert_eq!(subset.len(), 2);
                assert_eq!(module_shift, vec![2, 0]);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn partial_when_capped() {
        let u = Domain::cube(2, 3);
        let e = envelope_for(&u).unwrap();
        assert_eq!(verify_envelope(&e, &u, 2).unwrap(), EnvelopeCheck::Partial { max_subset: 2 });
    }

    #[test]
    fn non_injective_reported() {
        let u = Domain::interval(0, 2);
        let e = Envelope::new(FiniteModule::from_periods(&[2]).unwrap());
        assert!(matches!(verify_envelope(&e, &u, 4), Err(_) | Ok(EnvelopeCheck::NotInjective { .. })));
    }

    #[test]
    fn domain_serde() {
        let u = Domain::line(&[3, 0, 1]).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, "[[0],[1],[3]]");
        let back: Domain = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<Domain>("[[0],[0]]").is_err());
    }
}
