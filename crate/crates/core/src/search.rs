//! Exhaustive minimum-weight searches shared by the distance routines.
//!
//! Two strategies are provided. `min_in_span` walks every combination of a
//! basis in Gray-code order. `bounded_min` enumerates supports of increasing
//! weight and completes the last element through a syndrome table. Both split
//! work across rayon tasks and break ties canonically, so results do not
//! depend on the thread count.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::f2core::{BitMatrix, BitVec, Reducer};

/// Default enumeration budget for full-coset searches.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Gray-code chunks handed to rayon.
const CHUNK_BITS: u32 = 6;

/// Best element found by `min_in_span`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanMin {
    pub weight: usize,
    /// Bit `i` set means basis vector `i` is in the combination.
    pub combination: u64,
    pub vector: BitVec,
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Minimum weight over combinations `c ≠ 0` of `basis` whose tag
/// `Σ c_i·tags[i]` is nonzero. Weights count only the bits in `mask`
/// (all bits when `None`).
///
/// Ties go to the earliest Gray-code index.
pub fn min_in_span(basis: &[BitVec], tags: &[u64], mask: Option<&BitVec>) -> Option<SpanMin> {
    let r = basis.len();
    assert!(r < 63, "span of dimension {r} is out of reach");
    assert_eq!(tags.len(), r);
    if r == 0 {
        return None;
    }
    let len = basis[0].len();
    let words: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| match mask {
            Some(m) => b
                .words()
                .iter()
                .zip(m.words())
                .map(|(a, m)| a & m)
                .collect(),
            None => b.words().to_vec(),
        })
        .collect();
    let nw = words[0].len();
    let total: u64 = 1 << r;
    let chunk_bits = (r as u32).saturating_sub(CHUNK_BITS);
    let chunk_len: u64 = 1 << chunk_bits;
    let chunks = total / chunk_len;

    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let start = c * chunk_len;
            let mut acc = vec![0u64; nw];
            let mut tag = 0u64;
            let g0 = gray(start);
            for (i, w) in words.iter().enumerate() {
                if g0 >> i & 1 == 1 {
                    acc.iter_mut().zip(w).for_each(|(a, b)| *a ^= b);
                    tag ^= tags[i];
                }
            }
            let mut best: Option<(usize, u64)> = None;
            let mut consider = |idx: u64, acc: &[u64], tag: u64| {
                if idx == 0 || tag == 0 {
                    return;
                }
                let wt: usize = acc.iter().map(|x| x.count_ones() as usize).sum();
                if best.is_none_or(|(bw, _)| wt < bw) {
                    best = Some((wt, idx));
                }
            };
            consider(start, &acc, tag);
            for idx in start + 1..start + chunk_len {
                let bit = idx.trailing_zeros() as usize;
                acc.iter_mut().zip(&words[bit]).for_each(|(a, b)| *a ^= b);
                tag ^= tags[bit];
                consider(idx, &acc, tag);
            }
            best
        })
        .min()?;

    let (weight, idx) = best;
    let combination = gray(idx);
    let mut vector = BitVec::zeros(len);
    for (i, b) in basis.iter().enumerate() {
        if combination >> i & 1 == 1 {
            vector.xor_assign(b);
        }
    }
    Some(SpanMin {
        weight,
        combination,
        vector,
    })
}

/// Minimum weight of `p` with `Q·p = 0` and `T·p ≠ 0`, searching weights
/// `1..=cap`. With `t = None` every nonzero `p` qualifies.
///
/// Returns the lexicographically first support of minimum weight.
pub fn bounded_min(q: &BitMatrix, t: Option<&BitMatrix>, cap: usize) -> Option<BitVec> {
    let n = q.cols();
    if let Some(t) = t {
        assert_eq!(t.cols(), n, "tag matrix width mismatch");
    }
    let qt = q.transpose();
    let tt = t.map(|t| t.transpose());
    let syn: Vec<BitVec> = (0..n).map(|j| qt.row(j)).collect();
    let tag: Vec<BitVec> = match &tt {
        Some(tt) => (0..n).map(|j| tt.row(j)).collect(),
        None => Vec::new(),
    };
    let mut table: HashMap<BitVec, Vec<usize>> = HashMap::new();
    for (j, s) in syn.iter().enumerate() {
        table.entry(s.clone()).or_default().push(j);
    }
    let tagged = t.is_some();

    for w in 1..=cap.min(n) {
        let found = (0..n)
            .into_par_iter()
            .filter_map(|first| {
                let mut support = vec![first];
                let s = syn[first].clone();
                let tg = if tagged {
                    tag[first].clone()
                } else {
                    BitVec::zeros(0)
                };
                let ctx = Ctx {
                    syn: &syn,
                    tag: &tag,
                    table: &table,
                    tagged,
                    n,
                };
                if w == 1 {
                    return (s.is_zero() && (!tagged || !tg.is_zero())).then_some(support);
                }
                ctx.extend(&mut support, s, tg, w)
            })
            .min();
        if let Some(sup) = found {
            return Some(BitVec::from_indices(n, &sup));
        }
    }
    None
}

struct Ctx<'a> {
    syn: &'a [BitVec],
    tag: &'a [BitVec],
    table: &'a HashMap<BitVec, Vec<usize>>,
    tagged: bool,
    n: usize,
}

impl Ctx<'_> {
    /// Extends an increasing support to size `w`; the last element comes from
    /// the syndrome table. Returns the first completion in lexicographic order.
    fn extend(
        &self,
        support: &mut Vec<usize>,
        s: BitVec,
        tg: BitVec,
        w: usize,
    ) -> Option<Vec<usize>> {
        let last = *support.last().unwrap();
        if support.len() == w - 1 {
            let cands = self.table.get(&s)?;
            for &j in cands {
                if j <= last {
                    continue;
                }
                if !self.tagged || !tg.xor(&self.tag[j]).is_zero() {
                    let mut out = support.clone();
                    out.push(j);
                    return Some(out);
                }
            }
            return None;
        }
        for j in last + 1..self.n {
            support.push(j);
            let s2 = s.xor(&self.syn[j]);
            let t2 = if self.tagged {
                tg.xor(&self.tag[j])
            } else {
                tg.clone()
            };
            let r = self.extend(support, s2, t2, w);
            support.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// How a sector-restricted minimum was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FullCoset,
    Bounded,
    Formula,
}

/// Outcome of `sector_search`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorSearch {
    /// Minimum restricted weight if a witness was found.
    pub min: Option<usize>,
    /// Full-length vector in the kernel attaining `min`.
    pub witness: Option<BitVec>,
    pub method: Method,
    /// False when the bounded search ran out of cap; `min` is then `None`
    /// and the true value is at least `cap + 1`.
    pub exact: bool,
    /// Dimension of the projected space that was (or would be) enumerated.
    pub coset_dim: usize,
}

/// Minimises `|z|_S` over `z ∈ ker(check)` with `tag·z ≠ 0`, where `S` is
/// `sector`. Coordinates outside the sector are free.
///
/// Uses full enumeration of the projected space when its dimension is at
/// most `log2(budget)`, otherwise bounded search up to `cap`.
pub fn sector_search(
    check: &BitMatrix,
    tag: &BitMatrix,
    sector: &[usize],
    budget: u64,
    cap: usize,
) -> SectorSearch {
    let n = check.cols();
    assert_eq!(tag.cols(), n, "tag matrix width mismatch");
    let kernel = check.kernel_basis();
    let kdim = kernel.rows();

    // project kernel rows onto the sector, separating an independent part
    let mut red = Reducer::new(sector.len(), kdim);
    let mut proj_basis = Vec::new();
    let mut lifts = Vec::new();
    for i in 0..kdim {
        let z = kernel.row(i);
        let p = z.select(sector);
        let (res, comb) = red.reduce(&p);
        if res.is_zero() {
            // z plus the matching combination of lifts vanishes on the sector
            let mut z0 = z.clone();
            for j in comb.support() {
                z0.xor_assign(&lifts[j]);
            }
            if !tag.mul_vec(&z0).is_zero() {
                return SectorSearch {
                    min: Some(0),
                    witness: Some(z0),
                    method: Method::FullCoset,
                    exact: true,
                    coset_dim: proj_basis.len(),
                };
            }
        } else {
            red.insert(&p);
            proj_basis.push(p);
            lifts.push(z);
        }
    }
    let r = proj_basis.len();
    let raw_tags: Vec<BitVec> = lifts.iter().map(|z| tag.mul_vec(z)).collect();

    let log_budget = 63 - budget.max(1).leading_zeros() as usize;
    if r <= log_budget && r < 63 {
        let tags = compress_tags(&raw_tags);
        let best = min_in_span(&proj_basis, &tags, None);
        let (min, witness) = match best {
            Some(b) => {
                let mut z = BitVec::zeros(n);
                for (i, l) in lifts.iter().enumerate() {
                    if b.combination >> i & 1 == 1 {
                        z.xor_assign(l);
                    }
                }
                (Some(b.weight), Some(z))
            }
            None => (None, None),
        };
        return SectorSearch {
            min,
            witness,
            method: Method::FullCoset,
            exact: true,
            coset_dim: r,
        };
    }

    // bounded search on the projected space: Q spans P⊥, T extends the tag map
    let pmat = BitMatrix::from_rows(&proj_basis, sector.len());
    let q = pmat.kernel_basis();
    let t = extend_tag_map(&proj_basis, &raw_tags, tag.rows(), sector.len());
    match bounded_min(&q, Some(&t), cap) {
        Some(p) => {
            let (_, comb) = red_reduce_independent(&proj_basis, &p);
            let mut z = BitVec::zeros(n);
            for i in comb {
                z.xor_assign(&lifts[i]);
            }
            SectorSearch {
                min: Some(p.weight()),
                witness: Some(z),
                method: Method::Bounded,
                exact: true,
                coset_dim: r,
            }
        }
        None => SectorSearch {
            min: None,
            witness: None,
            method: Method::Bounded,
            exact: false,
            coset_dim: r,
        },
    }
}

fn red_reduce_independent(basis: &[BitVec], p: &BitVec) -> (BitVec, Vec<usize>) {
    let mut red = Reducer::new(p.len(), basis.len());
    for b in basis {
        red.insert(b);
    }
    let (res, comb) = red.reduce(p);
    (res, comb.support())
}

/// Re-expresses tag vectors in coordinates of their span so they fit a `u64`.
fn compress_tags(tags: &[BitVec]) -> Vec<u64> {
    let Some(first) = tags.first() else {
        return Vec::new();
    };
    let mut red = Reducer::new(first.len(), tags.len());
    let mut resolved: Vec<u64> = Vec::with_capacity(tags.len());
    let mut next_bit = 0;
    for t in tags {
        let (res, comb) = red.reduce(t);
        if res.is_zero() {
            resolved.push(comb.support().into_iter().fold(0, |c, j| c ^ resolved[j]));
        } else {
            assert!(next_bit < 64, "tag span too large to compress");
            resolved.push(1u64 << next_bit);
            next_bit += 1;
        }
        red.insert(t);
    }
    resolved
}

/// Linear map `T` on the sector space with `T·p_i = tags[i]` on the given
/// independent basis and zero on a fixed complement.
fn extend_tag_map(basis: &[BitVec], tags: &[BitVec], tag_rows: usize, dim: usize) -> BitMatrix {
    // complete the basis with unit vectors
    let mut red = Reducer::new(dim, dim);
    let mut cols: Vec<BitVec> = Vec::with_capacity(dim);
    for b in basis {
        red.insert(b);
        cols.push(b.clone());
    }
    for i in 0..dim {
        if cols.len() == dim {
            break;
        }
        let e = BitVec::unit(dim, i);
        if !red.contains(&e) {
            red.insert(&e);
            cols.push(e);
        }
    }
    let b = BitMatrix::from_rows(&cols, dim).transpose();
    let binv = b.inverse().expect("completed basis is invertible");
    let mut image_cols: Vec<BitVec> = tags.to_vec();
    image_cols.resize(dim, BitVec::zeros(tag_rows));
    let img = BitMatrix::from_rows(&image_cols, tag_rows).transpose();
    img.mul(&binv)
}
