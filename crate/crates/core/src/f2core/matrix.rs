use std::fmt;

use serde::{Deserialize, Serialize};

use super::bitvec::{words_for, BitVec, WORD};
use super::perm::Permutation;
use crate::error::{dim_err, Error, Result};

/// Dense row-major matrix over F2, packed 64 bits per word.
///
/// Values are immutable once built; every operation returns a new matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[BitVec], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(
                r.len(),
                cols,
                "row {i} has length {} but expected {cols}",
                r.len()
            );
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Parses rows given as strings of `0`/`1`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let vs: Vec<BitVec> = rows
            .iter()
            .map(|s| BitVec::parse(s))
            .collect::<Result<_>>()?;
        let cols = vs.first().map_or(0, |v| v.len());
        if vs.iter().any(|v| v.len() != cols) {
            return Err(Error::Parse("ragged rows".into()));
        }
        Ok(Self::from_rows(&vs, cols))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, b: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let m = 1u64 << (j % WORD);
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| {
                self.row_words(i)
                    .iter()
                    .map(|w| w.count_ones() as usize)
                    .sum()
            })
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.cols];
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    out[wi * WORD + w.trailing_zeros() as usize] += 1;
                    w &= w - 1;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = wi * WORD + w.trailing_zeros() as usize;
                    t.set(j, i, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let stride = other.stride;
        for i in 0..self.rows {
            let (dst_start, dst_end) = (i * stride, (i + 1) * stride);
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * WORD + w.trailing_zeros() as usize;
                    let src = other.row_words(k);
                    for (d, s) in out.data[dst_start..dst_end].iter_mut().zip(src) {
                        *d ^= s;
                    }
                    w &= w - 1;
                }
            }
        }
        out
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "matrix-vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let c: u32 = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if c & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    /// `vᵀ · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.rows, v.len(), "vector-matrix length mismatch");
        let mut out = vec![0u64; self.stride];
        for k in v.support() {
            for (d, s) in out.iter_mut().zip(self.row_words(k)) {
                *d ^= s;
            }
        }
        BitVec::from_words(self.cols, out)
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.shape(),
            other.shape(),
            "cannot add matrices of different shapes"
        );
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        out
    }

    /// Kronecker product with entry `[(i,j),(k,l)] = A[i,k]·B[j,l]`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let (rb, cb) = other.shape();
        let mut out = BitMatrix::zeros(self.rows * rb, self.cols * cb);
        let bsupp: Vec<Vec<usize>> = (0..rb).map(|j| other.row(j).support()).collect();
        for i in 0..self.rows {
            for k in self.row(i).support() {
                for (j, supp) in bsupp.iter().enumerate() {
                    for &l in supp {
                        out.set(i * rb + j, k * cb + l, true);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `(A | B | ...)`.
    pub fn hstack(blocks: &[&BitMatrix]) -> Result<BitMatrix> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return dim_err("hstack blocks disagree on row count");
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in b.row(i).support() {
                    out.set(i, off + j, true);
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&BitMatrix]) -> Result<BitMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return dim_err("vstack blocks disagree on column count");
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            out.data[off * out.stride..(off + b.rows) * out.stride].copy_from_slice(&b.data);
            off += b.rows;
        }
        Ok(out)
    }

    /// Assembles a block matrix from a grid; `None` blocks are zero and
    /// take their size from the other blocks in the same block row/column.
    pub fn block(grid: &[Vec<Option<&BitMatrix>>]) -> Result<BitMatrix> {
        let nr = grid.len();
        let nc = grid.first().map_or(0, |r| r.len());
        let mut heights = vec![None; nr];
        let mut widths = vec![None; nc];
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != nc {
                return dim_err("ragged block grid");
            }
            for (bj, b) in row.iter().enumerate() {
                if let Some(m) = b {
                    for (slot, val) in [(&mut heights[bi], m.rows), (&mut widths[bj], m.cols)] {
                        match slot {
                            Some(v) if *v != val => {
                                return dim_err(format!("block ({bi},{bj}) does not fit"))
                            }
                            _ => *slot = Some(val),
                        }
                    }
                }
            }
        }
        let heights: Vec<usize> = heights.into_iter().map(|h| h.unwrap_or(0)).collect();
        let widths: Vec<usize> = widths.into_iter().map(|w| w.unwrap_or(0)).collect();
        let mut out = BitMatrix::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if let Some(m) = b {
                    for i in 0..m.rows {
                        for j in m.row(i).support() {
                            out.set(r0 + i, c0 + j, true);
                        }
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Block-diagonal assembly.
    pub fn direct_sum(blocks: &[&BitMatrix]) -> BitMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in b.row(i).support() {
                    out.set(r0 + i, c0 + j, true);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(self.rows, idx.len(), |i, k| self.get(i, idx[k]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let rows: Vec<BitVec> = idx.iter().map(|&i| self.row(i)).collect();
        BitMatrix::from_rows(&rows, self.cols)
    }

    /// Sub-block `[r0, r0+nr) × [c0, c0+nc)`.
    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> BitMatrix {
        BitMatrix::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j))
    }

    /// The permutation this matrix represents, if it is a permutation matrix.
    pub fn as_permutation(&self) -> Option<Permutation> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut images = vec![usize::MAX; n];
        for (j, image) in images.iter_mut().enumerate() {
            let c = self.col(j);
            if c.weight() != 1 {
                return None;
            }
            *image = c.first_one().unwrap();
        }
        Permutation::from_images(images).ok()
    }

    pub fn is_permutation(&self) -> bool {
        self.as_permutation().is_some()
    }

    /// Serializes in the `f2m` text format.
    pub fn to_f2m(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            s.push_str(&self.row(i).to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_f2m(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty f2m input".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad header: {e}")))
            })
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!(
                "header must be `rows cols`, got {header:?}"
            )));
        };
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?
                .trim();
            if line.len() != cols {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {cols}",
                    line.len()
                )));
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after matrix body".into()));
        }
        Ok(m)
    }
}

/// Serialized form: shape plus one 0/1 string per row.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl From<BitMatrix> for MatrixRepr {
    fn from(m: BitMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: (0..m.rows).map(|i| m.row(i).to_string()).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for BitMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data.len() != r.rows {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                r.rows,
                r.data.len()
            )));
        }
        let mut text = format!("{} {}\n", r.rows, r.cols);
        for row in &r.data {
            text.push_str(row);
            text.push('\n');
        }
        BitMatrix::from_f2m(&text)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_multiply() {
        let a = BitMatrix::from_strs(&["110", "011"]).unwrap();
        assert_eq!(
            a.transpose(),
            BitMatrix::from_strs(&["10", "11", "01"]).unwrap()
        );
        let p = a.mul(&a.transpose());
        assert_eq!(p, BitMatrix::from_strs(&["01", "10"]).unwrap());
    }

    #[test]
    fn kron_identity_shapes() {
        assert_eq!(
            BitMatrix::identity(2).kron(&BitMatrix::identity(3)),
            BitMatrix::identity(6)
        );
        let h = BitMatrix::zeros(4, 6);
        assert_eq!(h.kron(&BitMatrix::identity(6)).shape(), (24, 36));
    }

    #[test]
    fn direct_sum_identities() {
        let i2 = BitMatrix::identity(2);
        let i3 = BitMatrix::identity(3);
        assert_eq!(BitMatrix::direct_sum(&[&i2, &i3]), BitMatrix::identity(5));
    }

    #[test]
    fn block_assembly_with_zero_blocks() {
        let a = BitMatrix::identity(2);
        let b = BitMatrix::from_strs(&["1", "1"]).unwrap();
        let c = BitMatrix::from_strs(&["11"]).unwrap();
        let m = BitMatrix::block(&[vec![Some(&a), Some(&b)], vec![Some(&c), None]]).unwrap();
        assert_eq!(m, BitMatrix::from_strs(&["101", "011", "110"]).unwrap());
    }

    #[test]
    fn f2m_roundtrip() {
        let m = BitMatrix::from_strs(&["1001101", "0101011", "0010111"]).unwrap();
        let text = m.to_f2m();
        assert!(text.starts_with("3 7\n"));
        assert_eq!(BitMatrix::from_f2m(&text).unwrap(), m);
        assert!(BitMatrix::from_f2m("2 2\n10\n").is_err());
        assert!(BitMatrix::from_f2m("1 2\n1x\n").is_err());
    }

    #[test]
    fn empty_shapes_survive() {
        let m = BitMatrix::zeros(0, 5);
        assert_eq!(BitMatrix::from_f2m(&m.to_f2m()).unwrap().shape(), (0, 5));
        assert_eq!(m.transpose().shape(), (5, 0));
    }
}
