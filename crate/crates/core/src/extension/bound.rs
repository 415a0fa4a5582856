//! The constant `H(M)` and the perturbation radius `ε` on a finite module.

use std::collections::HashSet;

use num_rational::BigRational;

use super::torus::TorusMeasure;
use crate::error::{Error, Result};
use crate::lattice::{Domain, FiniteModule};
use crate::util::{advance, checked_cells};

/// Sum of orbit sizes over the distinct translation orbits of characters of `A^M`
/// supported on `φ(U)`.
pub fn compute_h(module: &FiniteModule, u: &Domain, alphabet: u32) -> Result<u64> {
    module.check_injective(u)?;
    let n = module.cardinality();
    checked_cells(alphabet, u.len(), 1 << 22)?;
    let cells: Vec<usize> = u.points().iter().map(|p| module.index_of_point(p)).collect();
    let table = module.addition_table();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut h: u64 = 0;
    let mut e = vec![0u32; u.len()];
    loop {
        let mut chi = vec![0u32; n];
        for (&c, &x) in cells.iter().zip(&e) {
            chi[c] = x;
        }
        if !seen.contains(&chi) {
            let mut orbit: Vec<Vec<u32>> = (0..n)
                .map(|g| {
                    let mut out = vec![0u32; n];
                    for (m, &x) in chi.iter().enumerate() {
                        out[table[g][m]] = x;
                    }
                    out
                })
                .collect();
            orbit.sort();
            orbit.dedup();
            h += orbit.len() as u64;
            seen.extend(orbit);
        }
        if !advance(&mut e, alphabet) {
            break;
        }
    }
    let bound_a = (alphabet as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let bound_b = (n as u128).saturating_mul((alphabet as u128).saturating_pow(u.len() as u32));
    assert!(h as u128 <= bound_a, "H = {h} exceeds |A|^|M| = {bound_a}");
    assert!(h as u128 <= bound_b, "H = {h} exceeds |M|·|A|^|U| = {bound_b}");
    Ok(h)
}

/// The printed bounds `(|A|^|M|, |M|·|A|^|U|)`, saturating.
pub fn h_bounds(module: &FiniteModule, u: &Domain, alphabet: u32) -> (u128, u128) {
    let n = module.cardinality();
    (
        (alphabet as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
        (n as u128).saturating_mul((alphabet as u128).saturating_pow(u.len() as u32)),
    )
}

/// `ε = min_a ν̃[a] / H(M)`.
pub fn epsilon_bound(nu: &TorusMeasure, u: &Domain) -> Result<BigRational> {
    if !nu.has_full_support() {
        return Err(Error::Invalid("torus measure must charge every configuration".into()));
    }
    let h = compute_h(&nu.module, u, nu.alphabet)?;
    let min = nu.masses.values().min().expect("nonempty").clone();
    Ok(min / BigRational::from_integer(h.into()))
}
