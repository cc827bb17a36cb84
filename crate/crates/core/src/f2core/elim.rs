//! Gaussian elimination and everything derived from it.

use super::bitvec::{words_for, BitVec, WORD};
use super::matrix::BitMatrix;
use crate::error::{dim_err, Result};

/// Incremental row-space reducer that remembers how each basis vector was
/// formed from the inserted vectors.
///
/// Basis vectors are kept in insertion order and each has zeros at the
/// pivots of all earlier ones, so a single forward pass reduces any vector.
#[derive(Clone, Debug)]
pub struct Reducer {
    dim: usize,
    tracked: usize,
    inserted: usize,
    basis: Vec<(usize, BitVec, BitVec)>,
}

impl Reducer {
    /// `tracked` bounds how many vectors may be inserted.
    pub fn new(dim: usize, tracked: usize) -> Self {
        Reducer {
            dim,
            tracked,
            inserted: 0,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Returns `(residual, combination)` with `v = residual + Σ combination·inserted`.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(v.len(), self.dim, "reducer dimension mismatch");
        let mut r = v.clone();
        let mut c = BitVec::zeros(self.tracked);
        for (p, b, comb) in &self.basis {
            if r.get(*p) {
                r.xor_assign(b);
                c.xor_assign(comb);
            }
        }
        (r, c)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert!(
            self.inserted < self.tracked,
            "reducer tracking capacity exceeded"
        );
        let (r, mut c) = self.reduce(v);
        c.flip(self.inserted);
        self.inserted += 1;
        match r.first_one() {
            Some(p) => {
                self.basis.push((p, r, c));
                true
            }
            None => false,
        }
    }
}

/// Result of Gauss–Jordan reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Nonzero rows of the reduced row echelon form.
    pub matrix: BitMatrix,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

fn xor_rows(data: &mut [u64], stride: usize, dst: usize, src: usize) {
    if dst == src {
        return;
    }
    let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
    let (a, b) = data.split_at_mut(hi * stride);
    let low = &mut a[lo * stride..(lo + 1) * stride];
    let high = &mut b[..stride];
    if dst < src {
        low.iter_mut().zip(high.iter()).for_each(|(d, s)| *d ^= s);
    } else {
        high.iter_mut().zip(low.iter()).for_each(|(d, s)| *d ^= s);
    }
}

impl BitMatrix {
    /// Gauss–Jordan reduction with pivots chosen leftmost-first.
    pub fn rref(&self) -> Rref {
        let (rows, cols) = self.shape();
        let stride = words_for(cols);
        let mut data: Vec<u64> = (0..rows).flat_map(|i| self.row_words(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let (w, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (r..rows).find(|&i| data[i * stride + w] & bit != 0) else {
                continue;
            };
            if p != r {
                for k in 0..stride {
                    data.swap(p * stride + k, r * stride + k);
                }
            }
            for i in 0..rows {
                if i != r && data[i * stride + w] & bit != 0 {
                    xor_rows(&mut data, stride, i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let kept: Vec<BitVec> = (0..r)
            .map(|i| BitVec::from_words(cols, data[i * stride..(i + 1) * stride].to_vec()))
            .collect();
        Rref {
            matrix: BitMatrix::from_rows(&kept, cols),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : M·x = 0}`, one vector per free column in ascending order.
    pub fn kernel_basis(&self) -> BitMatrix {
        let cols = self.cols();
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vecs: Vec<BitVec> = (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::unit(cols, f);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.get(i, f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect();
        BitMatrix::from_rows(&vecs, cols)
    }

    pub fn row_space_contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.cols() {
            return dim_err(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols()
            ));
        }
        let mut red = Reducer::new(self.cols(), self.rows());
        for i in 0..self.rows() {
            red.insert(&self.row(i));
        }
        Ok(red.contains(v))
    }

    /// Returns a reducer loaded with the rows of `self`, in order.
    pub fn reducer(&self) -> Reducer {
        let mut red = Reducer::new(self.cols(), self.rows());
        for i in 0..self.rows() {
            red.insert(&self.row(i));
        }
        red
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows();
        if n != self.cols() {
            return None;
        }
        if n == 0 {
            return Some(BitMatrix::zeros(0, 0));
        }
        let aug = BitMatrix::hstack(&[self, &BitMatrix::identity(n)]).ok()?;
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return None;
        }
        Some(r.matrix.submatrix(0, n, n, n))
    }

    /// `R` with `M·R = I`: rows at the leftmost pivot columns hold
    /// `M[:,J]⁻¹`, all other rows are zero.
    pub fn right_inverse(&self) -> Option<BitMatrix> {
        let (m, n) = self.shape();
        let piv = self.rref().pivots;
        if piv.len() < m {
            return None;
        }
        let inv = self.select_columns(&piv).inverse()?;
        let mut r = BitMatrix::zeros(n, m);
        for (k, &j) in piv.iter().enumerate() {
            for c in inv.row(k).support() {
                r.set(j, c, true);
            }
        }
        Some(r)
    }

    /// Finds `W` with `W·H = M`, where `self` is `H`.
    ///
    /// Pivot rows `I` of `H` are the ones that are independent of earlier
    /// rows. A row `t ∈ I` of `W` expresses `M_t` over the rows in `I`;
    /// a dependent row `t` expresses `M_t + H_t` over `I` and then adds
    /// `e_t`. This is the unique solution with `W[:,J] = I_J` on dependent
    /// rows `J`, and it is invertible whenever `M = H·σ`.
    pub fn solve_left(&self, m: &BitMatrix) -> Option<BitMatrix> {
        if self.shape() != m.shape() {
            return None;
        }
        let rows = self.rows();
        let mut red = Reducer::new(self.cols(), rows);
        let mut independent = vec![false; rows];
        for (i, flag) in independent.iter_mut().enumerate() {
            *flag = red.insert(&self.row(i));
        }
        let mut out = BitMatrix::zeros(rows, rows);
        for (t, &indep) in independent.iter().enumerate() {
            let target = if indep {
                m.row(t)
            } else {
                m.row(t).xor(&self.row(t))
            };
            let (res, mut comb) = red.reduce(&target);
            if !res.is_zero() {
                return None;
            }
            if !independent[t] {
                comb.flip(t);
            }
            out.row_words_mut(t).copy_from_slice(comb.words());
        }
        Some(out)
    }
}
