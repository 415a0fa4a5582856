use crate::error::{Error, Result};
use crate::extension::WordSet;
use crate::lattice::Domain;
use crate::measure::Measure;
use crate::util::ratio;

/// Two successive `k`-bit counter rows with a zero separator column, in every
/// cyclic column rotation, as words on `[1..k+1]×{0,1}`.
pub fn binary_counter_words(k: u32) -> Result<WordSet> {
    if k == 0 || k > 20 {
        return Err(Error::Invalid(format!("counter width {k} outside 1..=20")));
    }
    let cols = k as usize + 1;
    let modulus = 1u64 << k;
    let mut words = Vec::with_capacity(modulus as usize * cols);
    for w0 in 0..modulus {
        let w1 = (w0 + 1) % modulus;
        let column = |x: usize| -> (u32, u32) {
            if x == k as usize {
                (0, 0)
            } else {
                let bit = k as usize - 1 - x;
                (((w0 >> bit) & 1) as u32, ((w1 >> bit) & 1) as u32)
            }
        };
        for s in 0..cols {
            let mut word = Vec::with_capacity(2 * cols);
            for x in 0..cols {
                let (lo, hi) = column((x + s) % cols);
                word.push(lo);
                word.push(hi);
            }
            words.push(word);
        }
    }
    WordSet::new(Domain::boxed(&[1, 0], &[k as i64 + 1, 1]), 2, words)
}

/// Uniform measure on [`binary_counter_words`].
pub fn binary_counter_measure(k: u32) -> Result<Measure> {
    let ws = binary_counter_words(k)?;
    let n = ws.len() as i64;
    let entries: Vec<(Vec<u32>, _)> = ws.words().iter().map(|w| (w.clone(), ratio(1, n))).collect();
    Measure::from_masses(ws.domain().clone(), 2, entries, 1 << 22)
}
