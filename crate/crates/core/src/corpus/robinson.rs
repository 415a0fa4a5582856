use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::extension::WordSet;
use crate::lattice::Domain;

/// Letter order; the symbol of a letter is its index here.
pub const ROBINSON_LETTERS: [char; 8] = ['0', 'a', 'A', 'b', 'B', 'c', 'C', 'd'];

/// The six base tiles, row 0 on top.
pub const ROBINSON_BASE: [[[char; 3]; 3]; 6] = [
    [['A', 'C', 'A'], ['B', '0', 'd'], ['A', 'B', 'A']],
    [['a', 'c', 'a'], ['c', '0', 'c'], ['a', 'C', 'a']],
    [['a', 'b', 'a'], ['c', '0', 'c'], ['a', 'B', 'a']],
    [['a', 'C', 'a'], ['B', '0', 'C'], ['a', 'B', 'a']],
    [['a', 'b', 'a'], ['c', '0', 'c'], ['a', 'b', 'a']],
    [['a', 'b', 'a'], ['b', '0', 'b'], ['a', 'B', 'a']],
];

/// How to read the `d` in the first tile, which is outside `{0,a,A,b,B,c,C}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobinsonReading {
    /// An eighth letter that matches nothing.
    Distinct,
    /// A misprint for the given letter.
    Typo(char),
}

impl Default for RobinsonReading {
    fn default() -> Self {
        RobinsonReading::Typo('C')
    }
}

impl RobinsonReading {
    pub fn alphabet(&self) -> u32 {
        match self {
            RobinsonReading::Distinct => 8,
            RobinsonReading::Typo(_) => 7,
        }
    }
}

type Tile = [[u32; 3]; 3];

fn letter(c: char) -> Result<u32> {
    ROBINSON_LETTERS
        .iter()
        .position(|&l| l == c)
        .map(|i| i as u32)
        .ok_or_else(|| Error::Invalid(format!("unknown Robinson letter {c}")))
}

fn rotate(t: &Tile) -> Tile {
    let mut out = [[0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = t[2 - j][i];
        }
    }
    out
}

/// The base tiles and their quarter turns, duplicates removed.
pub fn robinson_tiles(reading: RobinsonReading) -> Result<Vec<Tile>> {
    let d = match reading {
        RobinsonReading::Distinct => 7,
        RobinsonReading::Typo(c) => {
            let l = letter(c)?;
            if l == 7 {
                return Err(Error::Invalid("a typo reading must name one of 0,a,A,b,B,c,C".into()));
            }
            l
        }
    };
    let mut set = BTreeSet::new();
    for base in &ROBINSON_BASE {
        let mut t = [[0u32; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = if base[i][j] == 'd' { d } else { letter(base[i][j])? };
            }
        }
        for _ in 0..4 {
            set.insert(t);
            t = rotate(&t);
        }
    }
    Ok(set.into_iter().collect())
}

fn edges_match(x: u32, y: u32) -> bool {
    let (b, bb, c, cc) = (3, 4, 5, 6);
    matches!((x, y), (p, q) if (p == b && q == bb) || (p == bb && q == b) || (p == c && q == cc) || (p == cc && q == c))
}

fn fits_right(left: &Tile, right: &Tile) -> bool {
    edges_match(left[1][2], right[1][0])
}

fn fits_below(top: &Tile, bottom: &Tile) -> bool {
    edges_match(top[2][1], bottom[0][1])
}

/// Exactly three `a` corners and one `A` where four tiles meet.
fn corners_ok(tl: &Tile, tr: &Tile, bl: &Tile, br: &Tile) -> bool {
    let corners = [tl[2][2], tr[2][0], bl[0][2], br[0][0]];
    corners.iter().filter(|&&c| c == 1).count() == 3 && corners.iter().filter(|&&c| c == 2).count() == 1
}

/// Every legal 2×2 arrangement as `[tl, tr, bl, br]`.
fn arrangements(tiles: &[Tile]) -> Vec<[usize; 4]> {
    let n = tiles.len();
    let mut out = Vec::new();
    for tl in 0..n {
        for tr in (0..n).filter(|&j| fits_right(&tiles[tl], &tiles[j])) {
            for bl in (0..n).filter(|&j| fits_below(&tiles[tl], &tiles[j])) {
                for br in 0..n {
                    if fits_right(&tiles[bl], &tiles[br])
                        && fits_below(&tiles[tr], &tiles[br])
                        && corners_ok(&tiles[tl], &tiles[tr], &tiles[bl], &tiles[br])
                    {
                        out.push([tl, tr, bl, br]);
                    }
                }
            }
        }
    }
    out
}

/// Letter grid of a block of tiles, `grid[row][col]`.
pub(crate) fn letter_grid(tiles: &[Tile], block: &[Vec<usize>]) -> Vec<Vec<u32>> {
    let rows = block.len() * 3;
    let cols = block[0].len() * 3;
    let mut g = vec![vec![0; cols]; rows];
    for (bi, brow) in block.iter().enumerate() {
        for (bj, &t) in brow.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    g[bi * 3 + i][bj * 3 + j] = tiles[t][i][j];
                }
            }
        }
    }
    g
}

/// The 3×3 window of `grid` with top-left letter at `(row, col)`, as a word on
/// `[1..3]²` where `x` is the column and `y` the row.
pub(crate) fn window_word(grid: &[Vec<u32>], row: usize, col: usize) -> Vec<u32> {
    let mut w = Vec::with_capacity(9);
    for x in 0..3 {
        for y in 0..3 {
            w.push(grid[row + y][col + x]);
        }
    }
    w
}

/// All 3×3 letter windows, at every offset, of legal 2×2 tile arrangements.
pub fn robinson_tileset(reading: RobinsonReading) -> Result<WordSet> {
    let tiles = robinson_tiles(reading)?;
    let mut words = BTreeSet::new();
    for [tl, tr, bl, br] in arrangements(&tiles) {
        let grid = letter_grid(&tiles, &[vec![tl, tr], vec![bl, br]]);
        for row in 0..=3 {
            for col in 0..=3 {
                words.insert(window_word(&grid, row, col));
            }
        }
    }
    WordSet::new(Domain::cube_from(2, 1, 3), reading.alphabet(), words)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tile(i: usize) -> Tile {
        let mut t = [[0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                t[r][c] = letter(ROBINSON_BASE[i][r][c]).unwrap_or(7);
            }
        }
        t
    }

    #[test]
    fn base_tiles_present() {
        let tiles = robinson_tiles(RobinsonReading::Distinct).unwrap();
        for i in 0..6 {
            assert!(tiles.contains(&tile(i)), "tile {i}");
        }
        assert!(tiles.len() <= 24);
        assert_eq!(rotate(&rotate(&rotate(&rotate(&tile(3))))), tile(3));
    }

    #[test]
    fn rotation_moves_edges() {
        let t = tile(3);
        let r = rotate(&t);
        // left edge becomes top edge under a clockwise quarter turn
        assert_eq!(r[0][1], t[1][0]);
        assert_eq!(r[1][2], t[0][1]);
    }

    #[test]
    fn legal_pair_admissible_illegal_pair_not() {
        let reading = RobinsonReading::default();
        let tiles = robinson_tiles(reading).unwrap();
        let set = robinson_tileset(reading).unwrap();
        let arr = arrangements(&tiles);
        assert!(!arr.is_empty());
        let [tl, tr, ..] = arr[0];
        let grid = letter_grid(&tiles, &[vec![tl, tr]]);
        for col in 0..=3 {
            assert!(set.contains(&window_word(&grid, 0, col)));
        }
        // tile 5 reads b on both vertical edges, so it cannot sit next to itself
        let t5 = tiles.iter().position(|t| *t == tile(5)).unwrap();
        let grid = letter_grid(&tiles, &[vec![t5, t5]]);
        assert!(!set.contains(&window_word(&grid, 0, 2)));
    }

    #[test]
    fn zero_marks_tile_centres() {
        let set = robinson_tileset(RobinsonReading::Distinct).unwrap();
        assert!(set.words().iter().all(|w| w.iter().filter(|&&s| s == 0).count() == 1));
    }
}
