//! Transition matrices, connecting operators and pattern counts.
//!
//! For a width-`w` family, index `alpha = psi(a1, a2)` fixes the left and
//! right boundary colors `(a1, a2)` of a row of `w` tiles (vertical family)
//! or the bottom and top colors of a column of `w` tiles (horizontal
//! family). Entry `(k, l)` counts the fillings whose free edge words have
//! counting-function values `k + 1` and `l + 1`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixError, TransferMatrix};
use crate::tile::{Tile, TileSet};

/// Largest lattice (in unit cells) the brute-force counter accepts.
pub const BRUTE_FORCE_CELL_LIMIT: usize = 36;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransferError {
    #[error("lattice must have at least 2x2 points, got {cols}x{rows}")]
    InvalidSize { cols: usize, rows: usize },
    #[error("operator width must be at least 1")]
    InvalidWidth,
    #[error("boundary index {0} is outside 1..=4")]
    InvalidAlpha(u8),
    #[error("{cells} cells exceed the brute-force limit of {limit}")]
    TooLarge { cells: usize, limit: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Orientation of a connecting operator: `Horizontal` builds the row
/// operators `S_{m;alpha}` (horizontally periodic rows stacked vertically),
/// `Vertical` the column operators `W_{m;alpha}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Horizontal, Direction::Vertical];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
        })
    }
}

/// Four same-width matrices indexed by `alpha` in `1..=4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily {
    width: usize,
    ops: [TransferMatrix; 4],
}

impl OperatorFamily {
    pub fn width(&self) -> usize {
        self.width
    }

    /// Component `alpha` (1-based).
    pub fn get(&self, alpha: u8) -> Result<&TransferMatrix, TransferError> {
        match alpha {
            1..=4 => Ok(&self.ops[alpha as usize - 1]),
            _ => Err(TransferError::InvalidAlpha(alpha)),
        }
    }

    pub fn components(&self) -> &[TransferMatrix; 4] {
        &self.ops
    }

    /// `sum_alpha M_{w;alpha}`.
    pub fn sum(&self) -> Result<TransferMatrix, TransferError> {
        let mut total = self.ops[0].clone();
        for op in &self.ops[1..] {
            total = total.checked_add(op)?;
        }
        Ok(total)
    }

    /// One step of the Kronecker recursion: the width-`w+1` family whose
    /// first tile is described by `base` and whose remaining `w` tiles by
    /// `self`.
    ///
    /// `M_{w+1; psi(a1,a2)} = sum_c M_{2; psi(a1,c)} ⊗ M_{w; psi(c,a2)}`.
    pub fn lift(&self, base: &OperatorFamily) -> Result<OperatorFamily, TransferError> {
        let mut ops = Vec::with_capacity(4);
        for alpha in 0..4 {
            let (a1, a2) = (alpha >> 1, alpha & 1);
            let first = base.ops[a1 << 1].checked_kron(&self.ops[a2])?;
            let second = base.ops[(a1 << 1) | 1].checked_kron(&self.ops[2 | a2])?;
            ops.push(first.checked_add(&second)?);
        }
        Ok(OperatorFamily {
            width: self.width + 1,
            ops: ops.try_into().expect("four components"),
        })
    }
}

/// Counting function of a color word: `1 + sum_i x_i 2^(n - i)`.
pub fn psi_word(word: &[u8]) -> usize {
    1 + word.iter().fold(0usize, |acc, &x| {
        assert!(x <= 1, "colors are 0 or 1");
        2 * acc + x as usize
    })
}

/// Inverse of [`psi_word`] for words of length `len`.
pub fn word_of_psi(psi: usize, len: usize) -> Vec<u8> {
    assert!(
        (1..=1 << len).contains(&psi),
        "psi out of range for length {len}"
    );
    (0..len).rev().map(|i| ((psi - 1) >> i & 1) as u8).collect()
}

fn base_family(set: TileSet, key: impl Fn(Tile) -> (usize, usize, usize)) -> OperatorFamily {
    let mut ops: [TransferMatrix; 4] = std::array::from_fn(|_| TransferMatrix::zeros(2));
    for tile in set.iter() {
        let (j, s, t) = key(tile);
        ops[j].set(s, t, 1);
    }
    OperatorFamily { width: 1, ops }
}

/// `V_{2;j}`: entry `(s, t)` is 1 iff the tile with `psi(l, r) = j`, bottom
/// color `s` and top color `t` is in the set.
pub fn base_vertical(set: TileSet) -> OperatorFamily {
    base_family(set, |x| {
        let (b, l, t, r) = x.edges();
        ((2 * l + r) as usize, b as usize, t as usize)
    })
}

/// `H_{2;j}`: entry `(s, t)` is 1 iff the tile with `psi(b, t) = j`, left
/// color `s` and right color `t` is in the set.
pub fn base_horizontal(set: TileSet) -> OperatorFamily {
    base_family(set, |x| {
        let (b, l, t, r) = x.edges();
        ((2 * b + t) as usize, l as usize, r as usize)
    })
}

fn lifted(base: OperatorFamily, width: usize) -> Result<OperatorFamily, TransferError> {
    if width == 0 {
        return Err(TransferError::InvalidWidth);
    }
    let mut family = base.clone();
    for _ in 1..width {
        family = family.lift(&base)?;
    }
    Ok(family)
}

/// `V_{w+1;1..4}`: rows of `w` tiles, indexed by bottom and top words.
pub fn vertical_family(set: TileSet, width: usize) -> Result<OperatorFamily, TransferError> {
    lifted(base_vertical(set), width)
}

/// `H_{w+1;1..4}`: columns of `w` tiles, indexed by left and right words.
pub fn horizontal_family(set: TileSet, width: usize) -> Result<OperatorFamily, TransferError> {
    lifted(base_horizontal(set), width)
}

/// The four connecting operators of width `m` in the given direction.
pub fn connecting_family(
    set: TileSet,
    m: usize,
    direction: Direction,
) -> Result<OperatorFamily, TransferError> {
    match direction {
        Direction::Horizontal => vertical_family(set, m),
        Direction::Vertical => horizontal_family(set, m),
    }
}

/// `S_{m;alpha}` (horizontal) or `W_{m;alpha}` (vertical).
pub fn connecting_operator(
    set: TileSet,
    m: usize,
    alpha: u8,
    direction: Direction,
) -> Result<TransferMatrix, TransferError> {
    if !(1..=4).contains(&alpha) {
        return Err(TransferError::InvalidAlpha(alpha));
    }
    Ok(connecting_family(set, m, direction)?.get(alpha)?.clone())
}

/// Row-compressed sparse matrix, used where dense `2^w x 2^w` storage
/// would be too large.
#[derive(Clone, Debug)]
struct SparseMatrix {
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseMatrix {
    fn from_dense(a: &TransferMatrix) -> Self {
        let rows = (0..a.dim())
            .map(|i| {
                a.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(j, &x)| (j as u32, x))
                    .collect()
            })
            .collect();
        SparseMatrix { rows }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn kron(&self, other: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        let p = other.dim() as u32;
        let mut rows = Vec::with_capacity(self.dim() * other.dim());
        for a_row in &self.rows {
            for b_row in &other.rows {
                let mut row = Vec::with_capacity(a_row.len() * b_row.len());
                for &(j, x) in a_row {
                    for &(l, y) in b_row {
                        row.push((j * p + l, x.checked_mul(y).ok_or(MatrixError::Overflow)?));
                    }
                }
                rows.push(row);
            }
        }
        Ok(SparseMatrix { rows })
    }

    fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut merged: Vec<(u32, u64)> = a.iter().chain(b).copied().collect();
                merged.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(u32, u64)> = Vec::with_capacity(merged.len());
                for (j, x) in merged {
                    match out.last_mut() {
                        Some(last) if last.0 == j => {
                            last.1 = last.1.checked_add(x).ok_or(MatrixError::Overflow)?
                        }
                        _ => out.push((j, x)),
                    }
                }
                Ok(out)
            })
            .collect::<Result<_, MatrixError>>()?;
        Ok(SparseMatrix { rows })
    }
}

/// `V_p = sum_alpha V_{p;alpha}` in sparse form.
fn sparse_row_transfer(set: TileSet, cols: usize) -> Result<SparseMatrix, TransferError> {
    let base: Vec<SparseMatrix> = base_vertical(set)
        .components()
        .iter()
        .map(SparseMatrix::from_dense)
        .collect();
    let mut family = base.clone();
    for _ in 2..cols {
        let mut next = Vec::with_capacity(4);
        for alpha in 0..4 {
            let (a1, a2) = (alpha >> 1, alpha & 1);
            let first = base[a1 << 1].kron(&family[a2])?;
            let second = base[(a1 << 1) | 1].kron(&family[2 | a2])?;
            next.push(first.add(&second)?);
        }
        family = next;
    }
    let mut total = family[0].clone();
    for m in &family[1..] {
        total = total.add(m)?;
    }
    Ok(total)
}

/// Number of admissible edge colorings of a lattice with `cols` columns and
/// `rows` rows of lattice points, computed as `|V_cols^(rows-1)|`.
pub fn gamma(set: TileSet, cols: usize, rows: usize) -> Result<BigUint, TransferError> {
    if cols < 2 || rows < 2 {
        return Err(TransferError::InvalidSize { cols, rows });
    }
    let transfer = sparse_row_transfer(set, cols)?;
    let mut counts: Vec<BigUint> = vec![BigUint::from(1u8); transfer.dim()];
    for _ in 1..rows {
        let mut next = vec![BigUint::zero(); transfer.dim()];
        for (k, row) in transfer.rows.iter().enumerate() {
            if counts[k].is_zero() {
                continue;
            }
            for &(l, x) in row {
                next[l as usize] += &counts[k] * x;
            }
        }
        counts = next;
    }
    Ok(counts.into_iter().sum())
}

/// Backtracking pattern counter, independent of the transfer matrices.
///
/// Fills unit cells row by row from the bottom-left corner, matching each
/// cell's bottom and left edges to its already-placed neighbours.
pub fn brute_force_gamma(set: TileSet, cols: usize, rows: usize) -> Result<BigUint, TransferError> {
    if cols < 2 || rows < 2 {
        return Err(TransferError::InvalidSize { cols, rows });
    }
    let (width, height) = (cols - 1, rows - 1);
    let cells = width * height;
    if cells > BRUTE_FORCE_CELL_LIMIT {
        return Err(TransferError::TooLarge {
            cells,
            limit: BRUTE_FORCE_CELL_LIMIT,
        });
    }
    let tiles: Vec<Tile> = set.iter().collect();
    let mut placed = vec![Tile::new(0, 0, 0, 0); cells];
    Ok(BigUint::from(count_fillings(&tiles, width, &mut placed, 0)))
}

fn count_fillings(tiles: &[Tile], width: usize, placed: &mut [Tile], cell: usize) -> u128 {
    if cell == placed.len() {
        return 1;
    }
    let below = (cell >= width).then(|| placed[cell - width].top());
    let left = (!cell.is_multiple_of(width)).then(|| placed[cell - 1].right());
    let mut total = 0;
    for &tile in tiles {
        if below.is_some_and(|c| c != tile.bottom()) || left.is_some_and(|c| c != tile.left()) {
            continue;
        }
        placed[cell] = tile;
        total += count_fillings(tiles, width, placed, cell + 1);
    }
    total
}
