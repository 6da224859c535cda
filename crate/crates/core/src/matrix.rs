//! Bott matrices.
//!
//! A Bott matrix of size `n` is an upper-triangular binary matrix whose
//! diagonal entries are all 1. Only the `n(n-1)/2` entries strictly above the
//! diagonal carry information; they are stored as one bit mask per row.
//!
//! The canonical total order on matrices of one size is the lexicographic
//! order of the row-major bit string `A[0][1] A[0][2] .. A[0][n-1] A[1][2] ..`.
//! [`BottMatrix::index`] maps a matrix to its rank in that order, so the
//! integer order of indices *is* the lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported matrix size.
pub const MAX_SIZE: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BottMatrix {
    n: u8,
    /// `rows[i]` bit `j` is `A[i][j]`; only bits `j > i` may be set.
    rows: [u8; MAX_SIZE],
}

/// Number of free entries of a size-`n` Bott matrix.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Number of distinct Bott matrices of size `n`, `2^(n(n-1)/2)`.
pub const fn matrix_count(n: usize) -> u64 {
    1u64 << pair_count(n)
}

fn check_size(n: usize) -> Result<()> {
    if (1..=MAX_SIZE).contains(&n) {
        Ok(())
    } else {
        Err(Error::SizeOutOfRange {
            size: n,
            min: 1,
            max: MAX_SIZE,
        })
    }
}

#[inline]
fn upper_mask(i: usize, n: usize) -> u8 {
    // bits i+1 .. n-1
    let below_n = if n >= 8 { 0xff } else { (1u16 << n) as u8 - 1 };
    let through_i = ((1u16 << (i + 1)) - 1) as u8;
    below_n & !through_i
}

impl BottMatrix {
    /// The identity matrix of size `n`. Size 0 is allowed and denotes the
    /// empty base of a torus.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_SIZE, "size {n} exceeds {MAX_SIZE}");
        BottMatrix {
            n: n as u8,
            rows: [0; MAX_SIZE],
        }
    }

    /// Builds a matrix from per-row masks (`rows[i]` bit `j` = `A[i][j]`).
    pub fn from_row_masks(n: usize, rows: &[u8]) -> Result<Self> {
        if n > MAX_SIZE {
            return Err(Error::SizeOutOfRange {
                size: n,
                min: 0,
                max: MAX_SIZE,
            });
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut out = BottMatrix::identity(n);
        for (i, &mask) in rows.iter().enumerate() {
            let stray = mask & !upper_mask(i, n);
            if stray != 0 {
                let j = stray.trailing_zeros() as usize;
                return Err(if j == i {
                    Error::BadDiagonal(i + 1)
                } else if j < i {
                    Error::LowerTriangleNonzero {
                        row: i + 1,
                        col: j + 1,
                    }
                } else {
                    Error::IndexOutOfRange { index: j, size: n }
                });
            }
            out.rows[i] = mask;
        }
        Ok(out)
    }

    /// Checks a full square 0/1 grid, diagonal included.
    pub fn validate<R: AsRef<[u8]>>(grid: &[R]) -> Result<Self> {
        let n = grid.len();
        for (i, row) in grid.iter().enumerate() {
            let len = row.as_ref().len();
            if len != n {
                return Err(Error::NotSquare {
                    row: i + 1,
                    len,
                    expected: n,
                });
            }
        }
        check_size(n)?;
        let mut out = BottMatrix::identity(n);
        for (i, row) in grid.iter().enumerate() {
            for (j, &value) in row.as_ref().iter().enumerate() {
                if value > 1 {
                    return Err(Error::NotBinary {
                        row: i + 1,
                        col: j + 1,
                        value,
                    });
                }
                match i.cmp(&j) {
                    Ordering::Equal if value != 1 => return Err(Error::BadDiagonal(i + 1)),
                    Ordering::Greater if value != 0 => {
                        return Err(Error::LowerTriangleNonzero {
                            row: i + 1,
                            col: j + 1,
                        })
                    }
                    Ordering::Less if value == 1 => out.rows[i] |= 1 << j,
                    _ => {}
                }
            }
        }
        Ok(out)
    }

    /// Parses the text format: `n` lines of exactly `n` characters from
    /// `{0,1}`, each terminated by `\n`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::SizeOutOfRange {
                size: 0,
                min: 1,
                max: MAX_SIZE,
            });
        }
        let mut lines: Vec<&str> = text.split('\n').collect();
        // A terminated file splits into a trailing empty piece.
        let tail = lines.pop().unwrap_or_default();
        if !tail.is_empty() {
            return Err(Error::MalformedLine {
                line: lines.len() + 1,
                reason: "missing newline terminator".into(),
            });
        }
        let mut grid = Vec::with_capacity(lines.len());
        for (idx, line) in lines.iter().enumerate() {
            let mut row = Vec::with_capacity(line.len());
            for ch in line.chars() {
                match ch {
                    '0' => row.push(0u8),
                    '1' => row.push(1u8),
                    other => {
                        return Err(Error::MalformedLine {
                            line: idx + 1,
                            reason: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            if row.is_empty() {
                return Err(Error::MalformedLine {
                    line: idx + 1,
                    reason: "empty line".into(),
                });
            }
            grid.push(row);
        }
        Self::validate(&grid)
    }

    /// Serializes to the text format accepted by [`BottMatrix::parse`].
    pub fn to_text(&self) -> String {
        let n = self.size();
        let mut out = String::with_capacity(n * (n + 1));
        for i in 0..n {
            for j in 0..n {
                out.push(if self.entry(i, j) == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// One string per row, diagonal included, e.g. `["11", "01"]`.
    pub fn row_strings(&self) -> Vec<String> {
        self.to_text().lines().map(str::to_owned).collect()
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n as usize
    }

    /// Entry `A[i][j]` (0-based) including the implicit diagonal and lower
    /// triangle.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        match i.cmp(&j) {
            Ordering::Equal => 1,
            Ordering::Greater => 0,
            Ordering::Less => (self.rows[i] >> j) & 1,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        i < j && (self.rows[i] >> j) & 1 == 1
    }

    /// Strictly-upper part of row `i` as a bit mask over columns.
    #[inline]
    pub fn row_mask(&self, i: usize) -> u8 {
        self.rows[i]
    }

    /// Strictly-upper part of column `j` as a bit mask over rows.
    #[inline]
    pub fn column_mask(&self, j: usize) -> u8 {
        let mut mask = 0u8;
        for i in 0..j {
            mask |= ((self.rows[i] >> j) & 1) << i;
        }
        mask
    }

    /// True when column `j` has no entry above the diagonal.
    #[inline]
    pub fn column_is_trivial(&self, j: usize) -> bool {
        self.rows[..j].iter().all(|r| (r >> j) & 1 == 0)
    }

    pub(crate) fn set_row_mask(&mut self, i: usize, mask: u8) {
        debug_assert_eq!(mask & !upper_mask(i, self.size()), 0);
        self.rows[i] = mask;
    }

    /// Rank of this matrix in the lexicographic order of its packed bits.
    #[inline]
    pub fn index(&self) -> u32 {
        let n = self.size();
        if n == 0 {
            return 0;
        }
        let mut idx = 0u32;
        for i in 0..n {
            let width = n - 1 - i;
            let chunk = (self.rows[i].reverse_bits() >> (8 - n)) as u32;
            idx = (idx << width) | chunk;
        }
        idx
    }

    /// Inverse of [`BottMatrix::index`].
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        check_size(n)?;
        if index >= matrix_count(n) {
            return Err(Error::IndexOutOfRange {
                index: index as usize,
                size: matrix_count(n) as usize,
            });
        }
        Ok(Self::from_index_unchecked(n, index as u32))
    }

    #[inline]
    pub(crate) fn from_index_unchecked(n: usize, mut index: u32) -> Self {
        let mut out = BottMatrix::identity(n);
        if n == 0 {
            return out;
        }
        for i in (0..n).rev() {
            let width = n - 1 - i;
            let chunk = (index & ((1u32 << width) - 1)) as u8;
            index >>= width;
            out.rows[i] = (chunk << (8 - n)).reverse_bits();
        }
        out
    }

    /// Principal submatrix on `coords`, which must be increasing.
    pub fn principal_submatrix(&self, coords: &[usize]) -> BottMatrix {
        debug_assert!(coords.windows(2).all(|w| w[0] < w[1]));
        let mut out = BottMatrix::identity(coords.len());
        for (a, &i) in coords.iter().enumerate() {
            let mut mask = 0u8;
            for (b, &j) in coords.iter().enumerate().skip(a + 1) {
                if self.get(i, j) {
                    mask |= 1 << b;
                }
            }
            out.rows[a] = mask;
        }
        out
    }

    /// Conjugates by a coordinate relabelling: entry `(i, j)` of the result
    /// is `A[perm[i]][perm[j]]`. Returns `None` when the result is not upper
    /// triangular.
    pub fn permuted(&self, perm: &[usize]) -> Option<BottMatrix> {
        let n = self.size();
        assert_eq!(perm.len(), n, "permutation length");
        let mut out = BottMatrix::identity(n);
        for a in 0..n {
            for b in 0..n {
                if a != b && self.get(perm[a], perm[b]) {
                    if a > b {
                        return None;
                    }
                    out.rows[a] |= 1 << b;
                }
            }
        }
        Some(out)
    }
}

impl PartialOrd for BottMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BottMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.index().cmp(&other.index()))
    }
}

impl fmt::Display for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BottMatrix[{}]", self.row_strings().join(" "))
    }
}

impl FromStr for BottMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for BottMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.row_strings();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BottMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<String> = Vec::deserialize(deserializer)?;
        let mut text = String::new();
        for row in rows {
            text.push_str(&row);
            text.push('\n');
        }
        BottMatrix::parse(&text).map_err(de::Error::custom)
    }
}

/// Index range of shard `shard` when the matrices of size `n` are split into
/// `of_shards` contiguous pieces.
pub fn shard_range(n: usize, shard: usize, of_shards: usize) -> Result<Range<u64>> {
    check_size(n)?;
    if of_shards == 0 || shard >= of_shards {
        return Err(Error::IndexOutOfRange {
            index: shard,
            size: of_shards,
        });
    }
    let total = matrix_count(n);
    let lo = total * shard as u64 / of_shards as u64;
    let hi = total * (shard as u64 + 1) / of_shards as u64;
    Ok(lo..hi)
}

/// Every Bott matrix of size `n` in lexicographic order.
pub fn enumerate(n: usize) -> Result<impl Iterator<Item = BottMatrix>> {
    enumerate_shard(n, 0, 1)
}

/// The matrices of shard `shard` out of `of_shards`, in lexicographic order.
/// Concatenating all shards in order reproduces [`enumerate`].
pub fn enumerate_shard(
    n: usize,
    shard: usize,
    of_shards: usize,
) -> Result<impl Iterator<Item = BottMatrix>> {
    let range = shard_range(n, shard, of_shards)?;
    Ok(range.map(move |idx| BottMatrix::from_index_unchecked(n, idx as u32)))
}
