use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use super::{is_locally_stationary, Measure, SignedMeasure, StationarityCheck};
use crate::error::{Error, Result};
use crate::lattice::{translates_inside, Domain, LatticePoint};
use crate::util::to_f64;

fn union_or_err(u: &Domain, v: &Domain, outer: &Domain) -> Result<Domain> {
    for d in [u, v] {
        if !d.is_subset_of(outer) {
            return Err(Error::NotSubset(d.to_string()));
        }
    }
    u.union(v)
}

/// `H[U|V] = Σ_b μ[b] H(a | b)` in bits.
pub fn conditional_entropy(mu: &Measure, u: &Domain, v: &Domain) -> Result<f64> {
    let joint_dom = union_or_err(u, v, mu.domain())?;
    let joint = mu.marginal(&joint_dom)?;
    let cond = mu.marginal(v)?;
    let pos = v.positions_in(&joint_dom)?;
    let mut h = 0.0;
    for (w, p) in joint.support() {
        let b: Vec<u32> = pos.iter().map(|&i| w[i]).collect();
        let q = cond.mass(&b);
        // the ratio is exact before the logarithm
        h += to_f64(p) * to_f64(&(q / p)).log2();
    }
    Ok(h.max(0.0))
}

/// `D[U,V] = H[U|V] + H[V|U]`.
pub fn entropy_metric(mu: &Measure, u: &Domain, v: &Domain) -> Result<f64> {
    Ok(conditional_entropy(mu, u, v)? + conditional_entropy(mu, v, u)?)
}

/// `-Σ μ[a] log2 μ[a]`.
pub fn finite_window_entropy(mu: &SignedMeasure) -> f64 {
    mu.masses()
        .iter()
        .filter(|m| !m.is_zero())
        .map(|m| {
            let p = to_f64(m);
            -p * p.log2()
        })
        .sum()
}

/// Exact test that the `u` coordinates are almost surely a function of the `v` ones.
pub fn determines(mu: &Measure, v: &Domain, u: &Domain) -> Result<bool> {
    let joint_dom = union_or_err(u, v, mu.domain())?;
    let joint = mu.marginal(&joint_dom)?;
    let pu = u.positions_in(&joint_dom)?;
    let pv = v.positions_in(&joint_dom)?;
    let mut image: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
    for (w, _) in joint.support() {
        let b: Vec<u32> = pv.iter().map(|&i| w[i]).collect();
        let a: Vec<u32> = pu.iter().map(|&i| w[i]).collect();
        match image.get(&b) {
            Some(prev) if *prev != a => return Ok(false),
            Some(_) => {}
            None => {
                image.insert(b, a);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainVerdict {
    /// Translated zero-distance edges link `pair` inside `window`, yet the measured
    /// distance between the two sites is positive. `chain` lists the linking sites.
    Refuted { window: Domain, pair: (LatticePoint, LatticePoint), chain: Vec<LatticePoint> },
    Unknown,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Closes the zero-distance relation between single sites under translation and
/// transitivity inside growing boxes, looking for a forced zero that the measure
/// contradicts.
pub fn entropy_chain_refute(mu: &Measure, horizon: usize) -> Result<ChainVerdict> {
    if let StationarityCheck::Fail { subdomain, .. } = is_locally_stationary(mu) {
        return Err(Error::NotStationary(format!("marginals differ on {subdomain}")));
    }
    let u = mu.domain();
    let pts = u.points();
    let mut zero_edges = Vec::new();
    let mut positive = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let a = Domain::new(u.dim(), vec![pts[i].clone()])?;
            let b = Domain::new(u.dim(), vec![pts[j].clone()])?;
            if determines(mu, &a, &b)? && determines(mu, &b, &a)? {
                zero_edges.push((pts[i].clone(), pts[j].clone()));
            } else {
                positive.push((pts[i].clone(), pts[j].clone()));
            }
        }
    }
    if zero_edges.is_empty() || positive.is_empty() {
        return Ok(ChainVerdict::Unknown);
    }
    let (lo, hi) = u.bounding_box().ok_or(Error::EmptyDomain)?;
    for t in 0..=horizon as i64 {
        let lo_t: Vec<i64> = lo.iter().map(|c| c - t).collect();
        let hi_t: Vec<i64> = hi.iter().map(|c| c + t).collect();
        let region = Domain::boxed(&lo_t, &hi_t);
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); region.len()];
        let mut dsu = Dsu((0..region.len()).collect());
        for (p, q) in &zero_edges {
            let pair = Domain::new(u.dim(), vec![p.clone(), q.clone()])?;
            for k in translates_inside(&pair, &region) {
                let a = region.index_of(&p.add(&k)).expect("inside");
                let b = region.index_of(&q.add(&k)).expect("inside");
                adj[a].push(b);
                adj[b].push(a);
                dsu.union(a, b);
            }
        }
        for (p, q) in &positive {
            let a = region.index_of(p).expect("domain inside region");
            let b = region.index_of(q).expect("domain inside region");
            if dsu.find(a) == dsu.find(b) {
                let chain = shortest_path(&adj, a, b).into_iter().map(|i| region.points()[i].clone()).collect();
                return Ok(ChainVerdict::Refuted { window: region, pair: (p.clone(), q.clone()), chain });
            }
        }
    }
    Ok(ChainVerdict::Unknown)
}

fn shortest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}
