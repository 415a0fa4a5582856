#![allow(dead_code)]

use extlab::{BigRational, Domain, LatticePoint, Measure, SignedMeasure};
use num_bigint::BigInt;
use rand::Rng;

pub const CAP: usize = 1 << 20;

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn normalize(mut m: SignedMeasure) -> Measure {
    let total = m.total();
    for i in 0..m.num_words() {
        let w = m.word(i);
        let p = m.mass(&w) / &total;
        m.set(&w, p);
    }
    m.try_into().expect("normalized")
}

/// Window marginal of a random mixture of periodic configurations and i.i.d. products.
/// Always the marginal of a stationary process, so locally stationary and extendible.
pub fn periodic_mixture(domain: &Domain, alphabet: u32, rng: &mut impl Rng) -> Measure {
    let dim = domain.dim();
    let mut acc = SignedMeasure::zeros(domain.clone(), alphabet, CAP).unwrap();
    for _ in 0..rng.random_range(1..=3) {
        let weight = ratio(rng.random_range(1..=5), 1);
        if rng.random_bool(0.25) {
            let rho: Vec<i64> = (0..alphabet).map(|_| rng.random_range(1..=4)).collect();
            let total: i64 = rho.iter().sum();
            let rho: Vec<BigRational> = rho.iter().map(|&r| ratio(r, total)).collect();
            let prod = Measure::product(domain.clone(), &rho, CAP).unwrap();
            for (w, p) in prod.support() {
                acc.add_mass(&w, &(p * &weight));
            }
            continue;
        }
        let periods: Vec<i64> = (0..dim).map(|_| rng.random_range(1..=3)).collect();
        let cells: usize = periods.iter().product::<i64>() as usize;
        let cfg: Vec<u32> = (0..cells).map(|_| rng.random_range(0..alphabet)).collect();
        let share = &weight / ratio(cells as i64, 1);
        for g in 0..cells {
            let offset = unflatten(g, &periods);
            let word: Vec<u32> = domain
                .points()
                .iter()
                .map(|p| {
                    let r: Vec<i64> =
                        p.coords().iter().zip(&offset).zip(&periods).map(|((c, o), n)| (c + o).rem_euclid(*n)).collect();
                    cfg[flatten(&r, &periods)]
                })
                .collect();
            acc.add_mass(&word, &share);
        }
    }
    normalize(acc)
}

fn unflatten(mut g: usize, periods: &[i64]) -> Vec<i64> {
    let mut out = vec![0; periods.len()];
    for i in (0..periods.len()).rev() {
        out[i] = (g % periods[i] as usize) as i64;
        g /= periods[i] as usize;
    }
    out
}

fn flatten(r: &[i64], periods: &[i64]) -> usize {
    r.iter().zip(periods).fold(0, |acc, (x, n)| acc * *n as usize + *x as usize)
}

/// Random nonnegative masses, usually not stationary.
pub fn random_measure(domain: &Domain, alphabet: u32, rng: &mut impl Rng) -> Measure {
    let mut m = SignedMeasure::zeros(domain.clone(), alphabet, CAP).unwrap();
    for i in 0..m.num_words() {
        let w = m.word(i);
        m.set(&w, ratio(rng.random_range(0..=4), 1));
    }
    let w0 = m.word(0);
    m.add_mass(&w0, &ratio(1, 1));
    normalize(m)
}

/// Random subset of `[lo..hi]^dim` with at least `min` points.
pub fn random_domain(dim: usize, lo: i64, hi: i64, min: usize, rng: &mut impl Rng) -> Domain {
    let cube = Domain::cube_from(dim, lo, hi);
    loop {
        let pts: Vec<LatticePoint> = cube.points().iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        if pts.len() >= min.max(1) {
            return Domain::new(dim, pts).unwrap();
        }
    }
}
