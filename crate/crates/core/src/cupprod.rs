//! Edge orientations, copy-cup CZ pairs on graph products and the logical CZ
//! pattern they induce between two code blocks.
//!
//! Only CZ is handled. Conjugating `X` by CZ yields `X·Z` with no sign, so
//! the whole check runs over F2 and phases are never tracked.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, BitVec};
use crate::graphs::SimpleGraph;
use crate::products::{Factors, ProductKind, ProductRecord};

/// Direction of an edge `(u, v)` with `u < v` as stored by [`SimpleGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeDir {
    /// `u → v`.
    Forward,
    /// `v → u`.
    Backward,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    dirs: Vec<EdgeDir>,
}

impl Orientation {
    pub fn new(dirs: Vec<EdgeDir>) -> Self {
        Orientation { dirs }
    }

    pub fn all_free(num_edges: usize) -> Self {
        Orientation {
            dirs: vec![EdgeDir::Free; num_edges],
        }
    }

    pub fn dirs(&self) -> &[EdgeDir] {
        &self.dirs
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn is_all_free(&self) -> bool {
        self.dirs.iter().all(|&d| d == EdgeDir::Free)
    }

    /// Flips every directed edge.
    pub fn reversed(&self) -> Self {
        let dirs = self
            .dirs
            .iter()
            .map(|d| match d {
                EdgeDir::Forward => EdgeDir::Backward,
                EdgeDir::Backward => EdgeDir::Forward,
                EdgeDir::Free => EdgeDir::Free,
            })
            .collect();
        Orientation { dirs }
    }

    /// `(tail, head)` of edge `e`, or `None` if it is free.
    pub fn arc(&self, g: &SimpleGraph, e: usize) -> Option<(usize, usize)> {
        let (u, v) = g.edges()[e];
        match self.dirs[e] {
            EdgeDir::Forward => Some((u, v)),
            EdgeDir::Backward => Some((v, u)),
            EdgeDir::Free => None,
        }
    }

    fn check_len(&self, g: &SimpleGraph) -> Result<()> {
        if self.dirs.len() != g.num_edges() {
            return Err(Error::Dimension(format!(
                "orientation has {} edges, graph has {}",
                self.dirs.len(),
                g.num_edges()
            )));
        }
        Ok(())
    }

    /// Vertices with an odd number of directed incident edges.
    pub fn leibniz_violations(&self, g: &SimpleGraph) -> Result<Vec<usize>> {
        self.check_len(g)?;
        let mut parity = vec![false; g.num_vertices()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if self.dirs[e] != EdgeDir::Free {
                parity[u] ^= true;
                parity[v] ^= true;
            }
        }
        Ok((0..parity.len()).filter(|&v| parity[v]).collect())
    }

    pub fn leibniz_ok(&self, g: &SimpleGraph) -> bool {
        self.leibniz_violations(g).is_ok_and(|v| v.is_empty())
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.dirs {
            let c = match d {
                EdgeDir::Forward => 'f',
                EdgeDir::Backward => 'b',
                EdgeDir::Free => '.',
            };
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    /// One line per edge. Blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut dirs = Vec::new();
        for (no, line) in s.lines().enumerate() {
            let t = line.split('#').next().unwrap_or("").trim();
            let d = match t {
                "" => continue,
                "f" => EdgeDir::Forward,
                "b" => EdgeDir::Backward,
                "." => EdgeDir::Free,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: expected f, b or ., got {other:?}",
                        no + 1
                    )))
                }
            };
            dirs.push(d);
        }
        Ok(Orientation { dirs })
    }
}

/// Orients the support of `codeword` as a directed cycle.
///
/// The traversal starts on the lowest support edge, taken forward. Returns
/// `None` unless the support is one simple cycle.
pub fn orient_from_codeword(g: &SimpleGraph, codeword: &BitVec) -> Option<Orientation> {
    if codeword.len() != g.num_edges() {
        return None;
    }
    let support = codeword.support();
    let first = *support.first()?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for &e in &support {
        let (u, v) = g.edges()[e];
        incident[u].push(e);
        incident[v].push(e);
    }
    if incident.iter().any(|es| !es.is_empty() && es.len() != 2) {
        return None;
    }
    let mut dirs = vec![EdgeDir::Free; g.num_edges()];
    let (start, mut at) = g.edges()[first];
    dirs[first] = EdgeDir::Forward;
    let mut prev = first;
    let mut steps = 1;
    while at != start {
        let e = *incident[at].iter().find(|&&e| e != prev)?;
        let (u, v) = g.edges()[e];
        let (dir, next) = if u == at {
            (EdgeDir::Forward, v)
        } else {
            (EdgeDir::Backward, u)
        };
        dirs[e] = dir;
        prev = e;
        at = next;
        steps += 1;
    }
    if steps != support.len() {
        return None;
    }
    let o = Orientation { dirs };
    debug_assert!(o.leibniz_ok(g));
    Some(o)
}

/// CZ gates between qubit `a` of block 1 and qubit `b` of block 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CzPairing {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl CzPairing {
    pub fn empty(n: usize) -> Self {
        CzPairing {
            n,
            pairs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `P[a][b] = 1` for each pair. Repeated pairs cancel.
    pub fn matrix(&self) -> BitMatrix {
        let mut p = BitMatrix::zeros(self.n, self.n);
        for &(a, b) in &self.pairs {
            p.set(a, b, !p.get(a, b));
        }
        p
    }

    /// The same gates with the blocks exchanged.
    pub fn swapped(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        CzPairing { n: self.n, pairs }
    }

    /// Pairing whose matrix is `P·Uᵀ` for a qubit permutation `U` applied
    /// to block 2.
    pub fn then_permute_second(&self, u: &BitMatrix) -> Result<Self> {
        let perm = u.as_permutation().ok_or_else(|| {
            Error::Invalid("block permutation is not a permutation matrix".into())
        })?;
        if perm.len() != self.n {
            return Err(Error::Dimension(format!(
                "permutation on {} qubits, pairing on {}",
                perm.len(),
                self.n
            )));
        }
        let mut pairs: Vec<_> = self
            .pairs
            .iter()
            .map(|&(a, b)| (a, perm.apply(b)))
            .collect();
        pairs.sort_unstable();
        Ok(CzPairing { n: self.n, pairs })
    }
}

fn factor_graph_check(p: &ProductRecord, g1: &SimpleGraph, g2: &SimpleGraph) -> Result<()> {
    let Factors::Hgp(c1, c2) = &p.factors else {
        return Err(Error::Invalid(
            "copy-cup pairs need a hypergraph product record".into(),
        ));
    };
    if p.kind != ProductKind::Hgp {
        return Err(Error::Invalid(
            "copy-cup pairs need a hypergraph product record".into(),
        ));
    }
    if *c1.h() != g1.incidence_matrix() {
        return Err(Error::Invalid(
            "first factor is not the cycle code of the first graph".into(),
        ));
    }
    if *c2.h() != g2.incidence_matrix().transpose() {
        return Err(Error::Invalid(
            "second factor is not the transposed cycle code of the second graph".into(),
        ));
    }
    Ok(())
}

/// Copy-cup CZ pairs on the Cartesian product of `g1` and `g2`.
///
/// Qubit `(e1, v2)` of the left sector is `e1·|V2| + v2`; qubit `(v1, e2)`
/// of the right sector is `|E1||V2| + v1·|E2| + e2`. Each product edge takes
/// the direction of the factor edge it copies. A pair `(x, y)` is emitted
/// when `x` and `y` come from different factors and the head of `x` is the
/// tail of `y`. Pairs are sorted.
pub fn czpairs(
    p: &ProductRecord,
    g1: &SimpleGraph,
    g2: &SimpleGraph,
    o1: &Orientation,
    o2: &Orientation,
) -> Result<CzPairing> {
    factor_graph_check(p, g1, g2)?;
    for (which, g, o) in [(1, g1, o1), (2, g2, o2)] {
        let bad = o.leibniz_violations(g)?;
        if !bad.is_empty() {
            return Err(Error::Invalid(format!(
                "orientation {which} breaks the Leibniz condition at vertices {bad:?}"
            )));
        }
    }
    let (nv2, ne2) = (g2.num_vertices(), g2.num_edges());
    let n_left = g1.num_edges() * nv2;
    let left = |e1: usize, v2: usize| e1 * nv2 + v2;
    let right = |v1: usize, e2: usize| n_left + v1 * ne2 + e2;
    let arcs1: Vec<(usize, (usize, usize))> = (0..g1.num_edges())
        .filter_map(|e| o1.arc(g1, e).map(|a| (e, a)))
        .collect();
    let arcs2: Vec<(usize, (usize, usize))> = (0..g2.num_edges())
        .filter_map(|e| o2.arc(g2, e).map(|a| (e, a)))
        .collect();
    let mut pairs: Vec<(usize, usize)> = arcs1
        .par_iter()
        .flat_map_iter(|&(e1, (t1, h1))| {
            arcs2.iter().flat_map(move |&(e2, (t2, h2))| {
                // (t1,t2)→(h1,t2)→(h1,h2) and (t1,t2)→(t1,h2)→(h1,h2)
                [(left(e1, t2), right(h1, e2)), (right(t1, e2), left(e1, h2))]
            })
        })
        .collect();
    pairs.sort_unstable();
    debug_assert!(pairs.windows(2).all(|w| w[0] != w[1]));
    Ok(CzPairing {
        n: p.result.n(),
        pairs,
    })
}

/// Logical CZ pattern of a two-block pairing on copies of `p.result`.
///
/// `X_a` on block 1 picks up `Z_b` on block 2 for every pair, and `X_b` on
/// block 2 picks up `Z_a` on block 1. Every induced Z pattern from an X
/// stabilizer must lie in the Z stabilizer rowspace. Entry `(i, j)` of the
/// result is 1 when logical `i` of block 1 and logical `j` of block 2 are
/// joined by a logical CZ, over the attached basis.
pub fn verify_cz(p: &ProductRecord, pairing: &CzPairing) -> Result<BitMatrix> {
    let code = &p.result;
    if pairing.n != code.n() {
        return Err(Error::Dimension(format!(
            "pairing on {} qubits, code has {}",
            pairing.n,
            code.n()
        )));
    }
    if let Some(&(a, b)) = pairing
        .pairs
        .iter()
        .find(|&&(a, b)| a >= code.n() || b >= code.n())
    {
        return Err(Error::Dimension(format!(
            "pair ({a},{b}) leaves 0..{}",
            code.n()
        )));
    }
    let pm = pairing.matrix();
    // z ∈ rs H_Z exactly when z is orthogonal to ker H_Z
    let ker = code.hz().kernel_basis();
    for (block, m) in [(1, &pm), (2, &pm.transpose())] {
        let induced = code.hx().mul(m);
        let bad = induced.mul(&ker.transpose());
        if let Some(r) = (0..bad.rows()).find(|&r| !bad.row(r).is_zero()) {
            return Err(Error::Verification(format!(
                "X check {r} of block {block} induces a Z pattern outside the stabilizer group"
            )));
        }
    }
    let gx = code.logical_basis().gx;
    Ok(gx.mul(&pm).mul(&gx.transpose()))
}

/// Nonzero entries of an adjacency as `(block-1 logical, block-2 logical)`.
pub fn adjacency_edges(a: &BitMatrix) -> Vec<(usize, usize)> {
    (0..a.rows())
        .flat_map(|i| a.row(i).support().into_iter().map(move |j| (i, j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorph::check_automorphism;
    use crate::classical::{cycle_code, ClassicalCode};
    use crate::f2core::Permutation;
    use crate::fixtures::{k4, k4_graph};
    use crate::gadgets::{lift_hgp, lift_hgp_right, verify, Which};
    use crate::graphs::{path, ring};
    use crate::products::hgp;
    use proptest::prelude::*;

    fn k4_setup() -> (ProductRecord, SimpleGraph) {
        let c = k4();
        (hgp(&c, &c.transpose_code()).unwrap(), k4_graph())
    }

    fn codeword(i: usize) -> BitVec {
        k4().g().row(i)
    }

    #[test]
    fn all_free_satisfies_leibniz() {
        for g in [k4_graph(), ring(5).unwrap(), path(4).unwrap()] {
            assert!(Orientation::all_free(g.num_edges()).leibniz_ok(&g));
        }
    }

    #[test]
    fn single_directed_path_edge_breaks_leibniz_at_both_ends() {
        let g = path(3).unwrap();
        let o: Orientation = "f\n.\n".parse().unwrap();
        assert_eq!(o.leibniz_violations(&g).unwrap(), vec![0, 1]);
        assert!(!o.leibniz_ok(&g));
    }

    #[test]
    fn codeword_one_gives_a_directed_triangle() {
        let g = k4_graph();
        let o = orient_from_codeword(&g, &codeword(0)).unwrap();
        assert!(o.leibniz_ok(&g));
        // support {0,1,3}: edges (0,3), (0,1), (1,3)
        assert_eq!(o.to_string(), "f\nb\n.\nb\n.\n.\n");
        let arcs: Vec<_> = (0..6).filter_map(|e| o.arc(&g, e)).collect();
        assert_eq!(arcs, vec![(0, 3), (1, 0), (3, 1)]);
        for i in 0..3 {
            let o = orient_from_codeword(&g, &codeword(i)).unwrap();
            assert_eq!(o.dirs().iter().filter(|&&d| d != EdgeDir::Free).count(), 3);
        }
    }

    #[test]
    fn non_cycle_supports_are_rejected() {
        let g = k4_graph();
        // sum of two triangles is the 4-cycle 0-3-2-1, still a single cycle
        let four = codeword(0).xor(&codeword(1));
        assert!(orient_from_codeword(&g, &four).is_some());
        assert!(orient_from_codeword(&g, &BitVec::zeros(6)).is_none());
        assert!(orient_from_codeword(&g, &BitVec::from_indices(6, &[0])).is_none());
        // two disjoint triangles in a bowtie share vertex 2
        let bow = SimpleGraph::new(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(orient_from_codeword(&bow, &BitVec::ones(6)).is_none());
        let two = SimpleGraph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(orient_from_codeword(&two, &BitVec::ones(6)).is_none());
    }

    #[test]
    fn text_round_trip() {
        let o = Orientation::new(vec![EdgeDir::Forward, EdgeDir::Free, EdgeDir::Backward]);
        assert_eq!(o.to_string().parse::<Orientation>().unwrap(), o);
        assert!("f\nx\n".parse::<Orientation>().is_err());
        assert_eq!("# k4\nf\n\n.\n".parse::<Orientation>().unwrap().len(), 2);
    }

    #[test]
    fn free_orientations_give_no_pairs_and_zero_adjacency() {
        let (p, g) = k4_setup();
        let free = Orientation::all_free(6);
        let pairs = czpairs(&p, &g, &g, &free, &free).unwrap();
        assert!(pairs.is_empty());
        let a = verify_cz(&p, &pairs).unwrap();
        assert_eq!(a.shape(), (6, 6));
        assert!(a.is_zero());
    }

    #[test]
    fn codeword_one_orientations_link_the_first_left_and_right_logicals() {
        let (p, g) = k4_setup();
        let o = orient_from_codeword(&g, &codeword(0)).unwrap();
        let pairs = czpairs(&p, &g, &g, &o, &o).unwrap();
        // 3 × 3 arc pairs, two squares each
        assert_eq!(pairs.len(), 18);
        assert!(pairs.pairs.iter().all(|&(a, b)| (a < 24) != (b < 24)));
        let a = verify_cz(&p, &pairs).unwrap();
        // the cup form is symmetric, so both block orders of the pair appear
        assert_eq!(adjacency_edges(&a), vec![(0, 3), (3, 0)]);
    }

    #[test]
    fn independent_oracle_for_the_adjacency() {
        // brute force over the symplectic form: X̄_i ⊗ X̄_j anticommutes with
        // CZ·(X̄_i ⊗ I)·CZ exactly when the induced Z pattern overlaps X̄_j oddly
        let (p, g) = k4_setup();
        let basis = p.result.logical_basis();
        for (i, j) in [(0, 0), (1, 2), (2, 1), (0, 1)] {
            let o1 = orient_from_codeword(&g, &codeword(i)).unwrap();
            let o2 = orient_from_codeword(&g, &codeword(j)).unwrap();
            let pairs = czpairs(&p, &g, &g, &o1, &o2).unwrap();
            let a = verify_cz(&p, &pairs).unwrap();
            for r in 0..6 {
                let x = basis.gx.row(r);
                let mut z = BitVec::zeros(48);
                for &(qa, qb) in &pairs.pairs {
                    if x.get(qa) {
                        z.flip(qb);
                    }
                }
                for c in 0..6 {
                    assert_eq!(a.get(r, c), z.dot(&basis.gx.row(c)));
                }
            }
        }
    }

    #[test]
    fn different_codewords_address_other_pairs() {
        let (p, g) = k4_setup();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..3 {
            for j in 0..3 {
                let o1 = orient_from_codeword(&g, &codeword(i)).unwrap();
                let o2 = orient_from_codeword(&g, &codeword(j)).unwrap();
                let a = verify_cz(&p, &czpairs(&p, &g, &g, &o1, &o2).unwrap()).unwrap();
                let e = adjacency_edges(&a);
                assert!(!e.is_empty());
                assert!(e.iter().all(|&(l, r)| (l < 3) != (r < 3)));
                seen.insert(e);
            }
        }
        assert!(seen.len() > 1);
    }

    #[test]
    fn swapping_blocks_matches_reversed_orientations() {
        let (p, g) = k4_setup();
        let o1 = orient_from_codeword(&g, &codeword(0)).unwrap();
        let o2 = orient_from_codeword(&g, &codeword(2)).unwrap();
        let fwd = czpairs(&p, &g, &g, &o1, &o2).unwrap();
        let rev = czpairs(&p, &g, &g, &o1.reversed(), &o2.reversed()).unwrap();
        assert_eq!(rev, fwd.swapped());
        let a = verify_cz(&p, &fwd).unwrap();
        let b = verify_cz(&p, &rev).unwrap();
        assert_eq!(b, a.transpose());
    }

    #[test]
    fn adjacency_ignores_stabilizer_shifts_of_the_basis() {
        let (p, g) = k4_setup();
        let o = orient_from_codeword(&g, &codeword(0)).unwrap();
        let pairs = czpairs(&p, &g, &g, &o, &o).unwrap();
        let a = verify_cz(&p, &pairs).unwrap();
        let mut basis = p.result.logical_basis();
        let hx = p.result.hx();
        for r in 0..basis.gx.rows() {
            let shifted = basis
                .gx
                .row(r)
                .xor(&hx.row(r % hx.rows()))
                .xor(&hx.row((3 * r + 1) % hx.rows()));
            let mut rows = basis.gx.row_vecs();
            rows[r] = shifted;
            basis.gx = BitMatrix::from_rows(&rows, 48);
        }
        let code = p.result.clone().with_basis(basis).unwrap();
        let q = ProductRecord {
            result: code,
            ..p.clone()
        };
        assert_eq!(verify_cz(&q, &pairs).unwrap(), a);
    }

    #[test]
    fn logical_permutations_move_the_cz() {
        let (p, g) = k4_setup();
        let c = k4();
        let o = orient_from_codeword(&g, &codeword(0)).unwrap();
        let pairs = czpairs(&p, &g, &g, &o, &o).unwrap();
        let a = verify_cz(&p, &pairs).unwrap();
        let sigma = Permutation::parse_cycles("(15)(34)", 6).unwrap();
        let aut = check_automorphism(&c, &sigma).unwrap().unwrap();
        let mut targets = std::collections::BTreeSet::new();
        for gadget in [
            lift_hgp(&p, Which::First, &aut).unwrap(),
            lift_hgp_right(&p, Which::Second, &aut).unwrap(),
        ] {
            verify(&gadget, &p.result).unwrap();
            assert!(gadget.is_permutation());
            let moved = pairs.then_permute_second(&gadget.u.matrix()).unwrap();
            let b = verify_cz(&p, &moved).unwrap();
            assert_eq!(b, a.mul(&gadget.v_bar.transpose()));
            targets.insert(adjacency_edges(&b));
        }
        targets.insert(adjacency_edges(&a));
        assert_eq!(targets.len(), 3);
    }

    #[test]
    fn non_leibniz_pairs_break_the_codespace() {
        let (p, g) = k4_setup();
        let o1: Orientation = "f\n.\n.\n.\n.\n.\n".parse().unwrap();
        let o2 = orient_from_codeword(&g, &codeword(0)).unwrap();
        assert!(czpairs(&p, &g, &g, &o1, &o2).is_err());
        let raw = raw_pairs(&g, &g, &o1, &o2);
        assert!(matches!(verify_cz(&p, &raw), Err(Error::Verification(_))));
    }

    #[test]
    fn wrong_factors_are_rejected() {
        let (p, g) = k4_setup();
        let free = Orientation::all_free(6);
        let r5 = ring(5).unwrap();
        assert!(czpairs(&p, &r5, &g, &Orientation::all_free(5), &free).is_err());
        let c: ClassicalCode = cycle_code(&r5).unwrap();
        let q = hgp(&c, &c).unwrap();
        assert!(czpairs(
            &q,
            &r5,
            &r5,
            &Orientation::all_free(5),
            &Orientation::all_free(5)
        )
        .is_err());
        assert!(czpairs(&p, &g, &g, &Orientation::all_free(5), &free).is_err());
    }

    #[test]
    fn ring_products_pass_with_full_cycle_orientations() {
        let r = ring(4).unwrap();
        let c = cycle_code(&r).unwrap();
        let p = hgp(&c, &c.transpose_code()).unwrap();
        let o = orient_from_codeword(&r, &BitVec::ones(4)).unwrap();
        let pairs = czpairs(&p, &r, &r, &o, &o).unwrap();
        let a = verify_cz(&p, &pairs).unwrap();
        // toric code: one logical per sector, the cup form pairs them across blocks
        assert_eq!(a.shape(), (2, 2));
        assert_eq!(adjacency_edges(&a), vec![(0, 1), (1, 0)]);
    }

    /// Pair enumeration without the Leibniz guard.
    fn raw_pairs(
        g1: &SimpleGraph,
        g2: &SimpleGraph,
        o1: &Orientation,
        o2: &Orientation,
    ) -> CzPairing {
        let (nv2, ne2) = (g2.num_vertices(), g2.num_edges());
        let nl = g1.num_edges() * nv2;
        let mut pairs = Vec::new();
        for e1 in 0..g1.num_edges() {
            for e2 in 0..ne2 {
                if let (Some((t1, h1)), Some((t2, h2))) = (o1.arc(g1, e1), o2.arc(g2, e2)) {
                    pairs.push((e1 * nv2 + t2, nl + h1 * ne2 + e2));
                    pairs.push((nl + t1 * ne2 + e2, e1 * nv2 + h2));
                }
            }
        }
        pairs.sort_unstable();
        CzPairing {
            n: nl + g1.num_vertices() * ne2,
            pairs,
        }
    }

    fn arb_orientation(m: usize) -> impl Strategy<Value = Orientation> {
        prop::collection::vec(0u8..3, m).prop_map(|v| {
            Orientation::new(
                v.into_iter()
                    .map(|x| match x {
                        0 => EdgeDir::Forward,
                        1 => EdgeDir::Backward,
                        _ => EdgeDir::Free,
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn leibniz_decides_codespace_preservation(o1 in arb_orientation(6), o2 in arb_orientation(6)) {
            prop_assume!(!o1.is_all_free() && !o2.is_all_free());
            let (p, g) = k4_setup();
            let raw = raw_pairs(&g, &g, &o1, &o2);
            let valid = o1.leibniz_ok(&g) && o2.leibniz_ok(&g);
            prop_assert_eq!(verify_cz(&p, &raw).is_ok(), valid);
            prop_assert_eq!(czpairs(&p, &g, &g, &o1, &o2).is_ok(), valid);
            if valid {
                prop_assert_eq!(czpairs(&p, &g, &g, &o1, &o2).unwrap(), raw);
            }
        }
    }
}
