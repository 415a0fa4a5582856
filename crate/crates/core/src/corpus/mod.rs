//! Constructors for the concrete instances: the disconnected counterexample, the
//! 18-tile pseudolattice, Robinson letters, binary counters and CA encodings.

mod counter;
mod pseudolattice;
mod robinson;

pub use counter::{binary_counter_measure, binary_counter_words};
pub use pseudolattice::{pseudolattice_measure, PSEUDOLATTICE_TILES};
pub use robinson::{robinson_tiles, robinson_tileset, RobinsonReading, ROBINSON_BASE, ROBINSON_LETTERS};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::extension::WordSet;
use crate::lattice::{Domain, LatticePoint};
use crate::measure::{Measure, SignedMeasure};
use crate::util::{advance, one};

/// On `{0,1,3}`: sites 0 and 1 equal, site 3 independent, each with law `ρ`.
pub fn disconnected_counterexample(alphabet: u32, rho: &[BigRational]) -> Result<Measure> {
    if rho.len() != alphabet as usize {
        return Err(Error::Invalid(format!("distribution has {} entries for alphabet {alphabet}", rho.len())));
    }
    let total = rho.iter().fold(BigRational::zero(), |a, b| a + b);
    if total != one() || rho.iter().any(|p| *p < BigRational::zero()) {
        return Err(Error::Invalid("single-site law must be a probability vector".into()));
    }
    let mut m = SignedMeasure::zeros(Domain::line(&[0, 1, 3])?, alphabet, usize::MAX)?;
    for a in 0..alphabet {
        for c in 0..alphabet {
            m.set(&[a, a, c], &rho[a as usize] * &rho[c as usize]);
        }
    }
    m.try_into()
}

/// Lookup table of elementary rule `n` over `(x-1, x, x+1)`, indexed as a word.
pub fn elementary_rule(n: u8) -> Vec<u32> {
    (0..8).map(|i| (n as u32 >> i) & 1).collect()
}

/// Lifts a local rule on `A^U` to an SFT on `Z^{D+1}`: the window is `U × {0}`
/// plus `(0,…,0,1)`, and the top cell must equal the rule applied below.
pub fn ca_to_sft(alphabet: u32, u: &Domain, rule: &[u32]) -> Result<(Domain, WordSet)> {
    let n = crate::util::checked_cells(alphabet, u.len(), 1 << 24)?;
    if rule.len() != n || rule.iter().any(|&s| s >= alphabet) {
        return Err(Error::Invalid(format!("rule table must have {n} entries below {alphabet}")));
    }
    let d = u.dim();
    let lift = |p: &LatticePoint, t: i64| {
        let mut c = p.coords().to_vec();
        c.push(t);
        LatticePoint::new(c)
    };
    let top = LatticePoint::new({
        let mut c = vec![0; d];
        c.push(1);
        c
    });
    let mut pts: Vec<LatticePoint> = u.points().iter().map(|p| lift(p, 0)).collect();
    pts.push(top.clone());
    let lifted = Domain::new(d + 1, pts)?;
    let bottom_pos: Vec<usize> = u.points().iter().map(|p| lifted.index_of(&lift(p, 0)).expect("lifted")).collect();
    let top_pos = lifted.index_of(&top).expect("lifted");
    let mut words = Vec::with_capacity(n);
    let mut x = vec![0u32; u.len()];
    for &image in rule {
        let mut w = vec![0u32; lifted.len()];
        for (&p, &s) in bottom_pos.iter().zip(&x) {
            w[p] = s;
        }
        w[top_pos] = image;
        words.push(w);
        advance(&mut x, alphabet);
    }
    let ws = WordSet::new(lifted.clone(), alphabet, words)?;
    Ok((lifted, ws))
}
