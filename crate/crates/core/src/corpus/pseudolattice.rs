use crate::error::Result;
use crate::lattice::Domain;
use crate::measure::Measure;
use crate::util::ratio;

/// The 18 two-by-two tiles as `[top-left, top-right, bottom-left, bottom-right]`.
pub const PSEUDOLATTICE_TILES: [[u32; 4]; 18] = [
    [9, 1, 10, 0],
    [1, 4, 0, 0],
    [4, 9, 0, 10],
    [10, 0, 11, 7],
    [0, 0, 6, 6],
    [0, 10, 7, 11],
    [11, 7, 9, 1],
    [7, 7, 1, 4],
    [7, 11, 4, 9],
    [13, 12, 14, 2],
    [12, 5, 2, 2],
    [5, 13, 2, 14],
    [14, 2, 15, 6],
    [2, 2, 7, 7],
    [2, 14, 6, 15],
    [15, 6, 13, 12],
    [6, 6, 12, 5],
    [6, 15, 5, 13],
];

/// Uniform measure on the 18 tiles over 16 symbols, on `[0..1]²` with `x` the
/// column and `y` the row (row 0 on top).
pub fn pseudolattice_measure() -> Result<Measure> {
    let entries = PSEUDOLATTICE_TILES.iter().map(|&[tl, tr, bl, br]| {
        // canonical order (0,0), (0,1), (1,0), (1,1)
        (vec![tl, bl, tr, br], ratio(1, 18))
    });
    Measure::from_masses(Domain::cube(2, 2), 16, entries, 1 << 16)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn table_is_intact() {
        let distinct: BTreeSet<_> = PSEUDOLATTICE_TILES.iter().collect();
        assert_eq!(distinct.len(), 18);
        let mu = pseudolattice_measure().unwrap();
        assert_eq!(mu.support_words().len(), 18);
        assert!(mu.is_locally_stationary().passed());
    }
}
