//! Code automorphisms `(σ, W, V)` with `H·σ = W·H` and `G·σ = V·G`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{
    cyclic_group, dihedral_group, from_spec, regular_representation, ClassicalCode, FiniteGroup,
    Side,
};
use crate::error::{Error, Result};
use crate::f2core::{decompose, BitMatrix, BitVec, Permutation, Reducer, Step};
use crate::graphs::{graph_automorphisms, SimpleGraph, DEFAULT_VERTEX_CAP};

/// Default length cap for exhaustive enumeration.
pub const DEFAULT_N_CAP: usize = 10;
/// Default order cap for group closure.
pub const DEFAULT_ORDER_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeAutomorphism {
    pub sigma: Permutation,
    pub w: BitMatrix,
    pub v: BitMatrix,
}

/// Returns the automorphism data for `sigma`, or `None` when `sigma` does
/// not preserve the code.
pub fn check_automorphism(
    c: &ClassicalCode,
    sigma: &Permutation,
) -> Result<Option<CodeAutomorphism>> {
    if sigma.len() != c.n() {
        return Err(Error::Dimension(format!(
            "permutation on {} points, code length {}",
            sigma.len(),
            c.n()
        )));
    }
    let gs = sigma.permute_columns(c.g());
    if !c.h().mul(&gs.transpose()).is_zero() {
        return Ok(None);
    }
    let v = c
        .g()
        .solve_left(&gs)
        .ok_or_else(|| Error::Verification("G·σ not expressible over G".into()))?;
    let hs = sigma.permute_columns(c.h());
    let w = c
        .h()
        .solve_left(&hs)
        .ok_or_else(|| Error::Verification("H·σ not expressible over H".into()))?;
    Ok(Some(CodeAutomorphism {
        sigma: sigma.clone(),
        w,
        v,
    }))
}

/// A permutation `W` with `W·H = H·σ`, found by matching rows as multisets.
/// Among equal rows the lowest unused index is taken.
pub fn tanner_check_permutation(c: &ClassicalCode, sigma: &Permutation) -> Option<Permutation> {
    let h = c.h();
    let hs = sigma.permute_columns(h);
    let mut pool: HashMap<BitVec, VecDeque<usize>> = HashMap::new();
    for r in 0..h.rows() {
        pool.entry(h.row(r)).or_default().push_back(r);
    }
    let mut images = vec![0; h.rows()];
    for t in 0..h.rows() {
        let r = pool.get_mut(&hs.row(t))?.pop_front()?;
        // row t of W selects row r of H, so W as a permutation sends r to t
        images[r] = t;
    }
    Permutation::from_images(images).ok()
}

pub fn is_tanner(c: &ClassicalCode, aut: &CodeAutomorphism) -> bool {
    tanner_check_permutation(c, &aut.sigma).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismGroup {
    pub elements: Vec<CodeAutomorphism>,
    pub generated_from: Option<Vec<Permutation>>,
    /// True only for exhaustive enumeration.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub order: usize,
    pub complete: bool,
    pub tanner_order: usize,
    pub logical_order: usize,
    pub kernel_size: usize,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        self.elements.iter().map(|a| a.sigma.clone()).collect()
    }

    pub fn report(&self, c: &ClassicalCode) -> GroupReport {
        let lg = logical_group(self);
        GroupReport {
            order: self.order(),
            complete: self.complete,
            tanner_order: self.elements.par_iter().filter(|a| is_tanner(c, a)).count(),
            logical_order: lg.images.len(),
            kernel_size: lg.kernel_size,
        }
    }

    /// Closure under composition and inverses, identity present.
    pub fn is_group(&self) -> bool {
        let set: HashSet<&Permutation> = self.elements.iter().map(|a| &a.sigma).collect();
        let Some(first) = self.elements.first() else {
            return false;
        };
        if !set.contains(&Permutation::identity(first.sigma.len())) {
            return false;
        }
        self.elements.iter().all(|a| {
            set.contains(&a.sigma.inverse())
                && self
                    .elements
                    .iter()
                    .all(|b| set.contains(&a.sigma.compose(&b.sigma)))
        })
    }
}

/// Per-column invariant: weight histograms of the codewords and of the dual
/// codewords through that column. Columns with different invariants cannot
/// be exchanged by an automorphism.
fn column_classes(c: &ClassicalCode) -> Vec<usize> {
    const LIMIT: usize = 16;
    let n = c.n();
    let mut sig: Vec<Vec<usize>> = vec![Vec::new(); n];
    for basis in [c.g().clone(), c.h().rref().matrix] {
        if basis.rows() > LIMIT {
            continue;
        }
        let mut hist = vec![vec![0usize; n + 1]; n];
        let rows = basis.row_vecs();
        let mut v = BitVec::zeros(n);
        // Gray order visits every combination once
        for i in 1u64..1 << rows.len() {
            v.xor_assign(&rows[i.trailing_zeros() as usize]);
            let w = v.weight();
            for j in v.support() {
                hist[j][w] += 1;
            }
        }
        for j in 0..n {
            sig[j].extend_from_slice(&hist[j]);
        }
    }
    let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    sig.into_iter()
        .map(|s| {
            let next = ids.len();
            *ids.entry(s).or_insert(next)
        })
        .collect()
}

/// For each prefix length `t + 1`, vectors extending a basis of the subspace
/// supported on `0..=t` from the one supported on `0..t`.
fn prefix_extensions(space_check: &BitMatrix) -> Vec<Vec<BitVec>> {
    let n = space_check.cols();
    let mut red = Reducer::new(n, n);
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let cols: Vec<usize> = (0..=t).collect();
        let kernel = space_check.select_columns(&cols).kernel_basis();
        let mut fresh = Vec::new();
        for r in 0..kernel.rows() {
            let short = kernel.row(r);
            let v = BitVec::from_indices(n, &short.support());
            if !red.contains(&v) {
                red.insert(&v);
                fresh.push(v);
            }
        }
        out.push(fresh);
    }
    out
}

struct Searcher<'a> {
    n: usize,
    classes: Vec<usize>,
    code_ext: Vec<Vec<BitVec>>,
    dual_ext: Vec<Vec<BitVec>>,
    h: &'a BitMatrix,
    g: &'a BitMatrix,
}

impl Searcher<'_> {
    fn image_ok(&self, v: &BitVec, images: &[usize], check: &BitMatrix) -> bool {
        let img = BitVec::from_indices(
            self.n,
            &v.support().iter().map(|&j| images[j]).collect::<Vec<_>>(),
        );
        check.mul_vec(&img).is_zero()
    }

    fn depth_ok(&self, t: usize, images: &[usize]) -> bool {
        self.code_ext[t]
            .iter()
            .all(|v| self.image_ok(v, images, self.h))
            && self.dual_ext[t]
                .iter()
                .all(|v| self.image_ok(v, images, self.g))
    }

    fn extend(&self, images: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        let t = images.len();
        if t == self.n {
            out.push(Permutation::from_images(images.clone()).expect("bijection"));
            return;
        }
        for x in 0..self.n {
            if used[x] || self.classes[x] != self.classes[t] {
                continue;
            }
            images.push(x);
            if self.depth_ok(t, images) {
                used[x] = true;
                self.extend(images, used, out);
                used[x] = false;
            }
            images.pop();
        }
    }
}

/// Exhaustive search over `S_n`, pruned by column classes and by checking
/// codewords and dual codewords as soon as their support is assigned.
pub fn enumerate_automorphisms(c: &ClassicalCode, n_cap: usize) -> Result<AutomorphismGroup> {
    let n = c.n();
    if n > n_cap {
        return Err(Error::CapExceeded(format!(
            "exhaustive enumeration limited to n <= {n_cap}, code has n = {n}"
        )));
    }
    if n == 0 {
        return Ok(AutomorphismGroup {
            elements: Vec::new(),
            generated_from: None,
            complete: true,
        });
    }
    let s = Searcher {
        n,
        classes: column_classes(c),
        code_ext: prefix_extensions(c.h()),
        dual_ext: prefix_extensions(c.g()),
        h: c.h(),
        g: c.g(),
    };
    let mut perms: Vec<Permutation> = (0..n)
        .into_par_iter()
        .filter(|&x| s.classes[x] == s.classes[0])
        .flat_map_iter(|x| {
            let mut images = vec![x];
            let mut out = Vec::new();
            if s.depth_ok(0, &images) {
                let mut used = vec![false; n];
                used[x] = true;
                s.extend(&mut images, &mut used, &mut out);
            }
            out
        })
        .collect();
    perms.sort();
    let elements = perms
        .par_iter()
        .map(|p| check_automorphism(c, p).map(|a| a.expect("search only emits automorphisms")))
        .collect::<Result<Vec<_>>>()?;
    Ok(AutomorphismGroup {
        elements,
        generated_from: None,
        complete: true,
    })
}

/// Breadth-first closure of the generators, sorted by permutation.
pub fn close_group(
    c: &ClassicalCode,
    generators: &[Permutation],
    order_cap: usize,
) -> Result<AutomorphismGroup> {
    for g in generators {
        if check_automorphism(c, g)?.is_none() {
            return Err(Error::Invalid(format!(
                "generator {g} is not an automorphism"
            )));
        }
    }
    let id = Permutation::identity(c.n());
    let mut seen: BTreeSet<Permutation> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > order_cap {
                    return Err(Error::CapExceeded(format!(
                        "group closure exceeds {order_cap} elements"
                    )));
                }
                queue.push_back(y);
            }
        }
    }
    let perms: Vec<Permutation> = seen.into_iter().collect();
    let elements = perms
        .par_iter()
        .map(|p| check_automorphism(c, p).map(|a| a.expect("closure of automorphisms")))
        .collect::<Result<Vec<_>>>()?;
    Ok(AutomorphismGroup {
        elements,
        generated_from: Some(generators.to_vec()),
        complete: false,
    })
}

/// Right regular representations of the named group generators. These are
/// Tanner automorphisms of any code `L[a]` over the group.
pub fn group_algebra_generators(group: &FiniteGroup) -> Vec<Permutation> {
    group
        .generator_elements()
        .into_iter()
        .map(|g| regular_representation(group, g, Side::Right))
        .collect()
}

/// Edge permutations induced by every vertex automorphism of `g`.
pub fn graph_edge_generators(g: &SimpleGraph) -> Result<Vec<Permutation>> {
    Ok(graph_automorphisms(g, DEFAULT_VERTEX_CAP)?
        .into_iter()
        .map(|a| a.edge_perm)
        .collect())
}

/// Known symmetry generators for a builder spec: graph automorphisms for
/// `cycle:<graph>`, regular representations for `ga:<group>:<poly>`.
/// The spec `<graph>-edge-gens` is shorthand for `cycle:<graph>`.
pub fn spec_generators(spec: &str) -> Result<Option<(ClassicalCode, Vec<Permutation>)>> {
    let spec = spec.trim();
    let spec = match spec.strip_suffix("-edge-gens") {
        Some(graph) => format!("cycle:{graph}"),
        None => spec.to_string(),
    };
    let code = from_spec(&spec)?;
    let gens = if let Some(graph) = spec.strip_prefix("cycle:") {
        graph_edge_generators(&SimpleGraph::from_name(graph)?)?
    } else if let Some(rest) = spec.strip_prefix("ga:") {
        let g = rest.split(':').next().unwrap_or("");
        let n = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad group {g:?}")))
        };
        let group = match g.split_at_checked(1) {
            Some(("z", k)) => cyclic_group(n(k)?)?,
            Some(("d", k)) => dihedral_group(n(k)?)?,
            _ => return Err(Error::Parse(format!("bad group {g:?}"))),
        };
        group_algebra_generators(&group)
    } else {
        return Ok(None);
    };
    Ok(Some((code, gens)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalGroup {
    /// Distinct `V` matrices, sorted.
    pub images: Vec<BitMatrix>,
    /// Number of automorphisms with `V = I`.
    pub kernel_size: usize,
    /// `V(σ∘ρ) = V(σ)·V(ρ)` held on every checked pair.
    pub homomorphism: bool,
}

/// Distinct logical actions. The homomorphism property is checked on the
/// generators when present, otherwise on all pairs of up to 64 elements.
pub fn logical_group(ag: &AutomorphismGroup) -> LogicalGroup {
    let by_sigma: HashMap<&Permutation, &BitMatrix> =
        ag.elements.iter().map(|a| (&a.sigma, &a.v)).collect();
    let mut images: Vec<BitMatrix> = ag
        .elements
        .iter()
        .map(|a| a.v.clone())
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    images.sort_by_key(|m| m.to_f2m());
    let kernel_size = ag.elements.iter().filter(|a| a.v.is_identity()).count();
    let probe: Vec<&CodeAutomorphism> = match &ag.generated_from {
        Some(gens) => ag
            .elements
            .iter()
            .filter(|a| gens.contains(&a.sigma))
            .collect(),
        None => ag.elements.iter().take(64).collect(),
    };
    let homomorphism = probe.iter().all(|a| {
        ag.elements
            .iter()
            .take(64)
            .all(|b| match by_sigma.get(&a.sigma.compose(&b.sigma)) {
                Some(v) => **v == a.v.mul(&b.v),
                None => true,
            })
    });
    LogicalGroup {
        images,
        kernel_size,
        homomorphism,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineReport {
    pub checked: usize,
    pub invertible: usize,
}

impl AffineReport {
    pub fn holds(&self) -> bool {
        self.checked == self.invertible
    }
}

/// Every logical action must be an invertible linear map.
pub fn affine_check(ag: &AutomorphismGroup) -> AffineReport {
    AffineReport {
        checked: ag.elements.len(),
        invertible: ag
            .elements
            .iter()
            .filter(|a| a.v.rank() == a.v.rows())
            .count(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualBoundReport {
    /// False when `d < 3` or the group is not exhaustive.
    pub applicable: bool,
    pub order: usize,
    pub distinct_w: usize,
    pub distinct_v: usize,
    pub w_injective: bool,
    /// `|{V}| = |{W}| = |Aut|`, checked only when `d⊥ ≥ 3` as well.
    pub equal_orders: Option<bool>,
}

impl DualBoundReport {
    pub fn holds(&self) -> bool {
        !self.applicable || (self.w_injective && self.equal_orders.unwrap_or(true))
    }
}

pub fn dual_bound_check(c: &ClassicalCode, ag: &AutomorphismGroup) -> DualBoundReport {
    let at_least_3 = |d: crate::classical::Distance| d.lower().is_some_and(|x| x >= 3);
    let distinct_w = ag
        .elements
        .iter()
        .map(|a| &a.w)
        .collect::<HashSet<_>>()
        .len();
    let distinct_v = ag
        .elements
        .iter()
        .map(|a| &a.v)
        .collect::<HashSet<_>>()
        .len();
    let order = ag.order();
    let applicable = ag.complete && at_least_3(c.d());
    let equal_orders = (applicable && at_least_3(c.d_dual()))
        .then_some(distinct_v == order && distinct_w == order);
    DualBoundReport {
        applicable,
        order,
        distinct_w,
        distinct_v,
        w_injective: distinct_w == order,
        equal_orders,
    }
}

/// SWAP/CNOT steps multiplying to `w`; at most `r²` of them.
pub fn hamming_decompose(w: &BitMatrix) -> Result<Vec<Step>> {
    Ok(decompose(w)?.steps)
}

/// The bit permutation realizing `W·H` for a Hamming-type `H` whose
/// columns are distinct and closed under the action of `W`.
pub fn column_matching_permutation(h: &BitMatrix, w: &BitMatrix) -> Result<Permutation> {
    let wh = w.mul(h);
    let index: HashMap<BitVec, usize> = (0..h.cols()).map(|j| (h.col(j), j)).collect();
    let images = (0..h.cols())
        .map(|j| {
            index
                .get(&wh.col(j))
                .copied()
                .ok_or_else(|| Error::Invalid("W does not permute the columns of H".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{
        all_dual_codewords_check_matrix, cycle_code, from_spec, hamming, regular_representation,
        repetition, simplex, Side,
    };
    use crate::fixtures::k4;
    use crate::graphs::{
        complete, complete_bipartite, graph_automorphisms, petersen, DEFAULT_VERTEX_CAP,
    };
    use proptest::prelude::*;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    /// Counts automorphisms by testing every permutation of `S_n` against the
    /// full codeword set.
    fn brute_force_order(c: &ClassicalCode) -> usize {
        let n = c.n();
        let mut words = HashSet::new();
        for mask in 0u64..1 << c.k() {
            let mut v = BitVec::zeros(n);
            for i in 0..c.k() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(&c.g().row(i));
                }
            }
            words.insert(v);
        }
        let mut count = 0;
        let mut p: Vec<usize> = (0..n).collect();
        let mut heap_c = vec![0usize; n];
        let mut check = |p: &[usize]| {
            let ok = words.iter().all(|w| {
                let img =
                    BitVec::from_indices(n, &w.support().iter().map(|&j| p[j]).collect::<Vec<_>>());
                words.contains(&img)
            });
            count += ok as usize;
        };
        check(&p);
        let mut i = 0;
        while i < n {
            if heap_c[i] < i {
                if i % 2 == 0 {
                    p.swap(0, i);
                } else {
                    p.swap(heap_c[i], i);
                }
                check(&p);
                heap_c[i] += 1;
                i = 0;
            } else {
                heap_c[i] = 0;
                i += 1;
            }
        }
        count
    }

    #[test]
    fn identity_is_trivial() {
        let c = k4();
        let a = check_automorphism(&c, &Permutation::identity(6))
            .unwrap()
            .unwrap();
        assert!(a.v.is_identity() && a.w.is_identity());
    }

    #[test]
    fn k4_logical_actions() {
        let c = k4();
        let a = check_automorphism(&c, &perm("(15)(34)", 6))
            .unwrap()
            .unwrap();
        assert_eq!(a.v, perm("(12)", 3).as_matrix());
        let b = check_automorphism(&c, &perm("(25)(46)", 6))
            .unwrap()
            .unwrap();
        assert_eq!(b.v, BitMatrix::from_strs(&["111", "010", "001"]).unwrap());
        assert!(check_automorphism(&c, &perm("(12)", 6)).unwrap().is_none());
        assert!(check_automorphism(&c, &perm("(12)", 5)).is_err());
    }

    #[test]
    fn enumeration_matches_table_orders() {
        for (c, order) in [
            (cycle_code(&complete(4).unwrap()).unwrap(), 24),
            (cycle_code(&complete_bipartite(3, 3).unwrap()).unwrap(), 72),
            (simplex(3).unwrap(), 168),
            (from_spec("ga:z7:1+x+x3").unwrap(), 168),
            (hamming(3).unwrap(), 168),
        ] {
            let g = enumerate_automorphisms(&c, DEFAULT_N_CAP).unwrap();
            assert_eq!(g.order(), order);
            assert!(g.complete && g.is_group());
        }
        assert!(enumerate_automorphisms(&cycle_code(&petersen()).unwrap(), DEFAULT_N_CAP).is_err());
    }

    #[test]
    fn enumeration_agrees_with_brute_force() {
        for spec in [
            "rep:3",
            "rep:4",
            "hamming:3",
            "cycle:k4",
            "k4-alt",
            "rm:1,2",
        ] {
            let c = from_spec(spec).unwrap();
            assert_eq!(
                enumerate_automorphisms(&c, 8).unwrap().order(),
                brute_force_order(&c),
                "{spec}"
            );
        }
    }

    #[test]
    fn spec_generators_close_to_known_orders() {
        let (c, gens) = spec_generators("petersen-edge-gens").unwrap().unwrap();
        assert_eq!(
            close_group(&c, &gens, DEFAULT_ORDER_CAP).unwrap().order(),
            120
        );
        let (c, gens) = spec_generators("ga:d6:1+r+sr^-1").unwrap().unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(
            close_group(&c, &gens, DEFAULT_ORDER_CAP).unwrap().order(),
            12
        );
        let (c, gens) = spec_generators("ga:z7:1+x+x3").unwrap().unwrap();
        assert_eq!(
            close_group(&c, &gens, DEFAULT_ORDER_CAP).unwrap().order(),
            7
        );
        assert!(spec_generators("hamming:3").unwrap().is_none());
        assert!(spec_generators("ga:q8:1").is_err());
    }

    #[test]
    fn graph_closure_orders() {
        let p = petersen();
        let gens: Vec<Permutation> = graph_automorphisms(&p, DEFAULT_VERTEX_CAP)
            .unwrap()
            .into_iter()
            .map(|a| a.edge_perm)
            .collect();
        let g = close_group(&cycle_code(&p).unwrap(), &gens, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 120);
        assert!(!g.complete);
        let c = k4();
        let one = close_group(&c, &[], 10).unwrap();
        assert_eq!(one.order(), 1);
        let gens = [
            perm("(15)(34)", 6),
            perm("(24)(56)", 6),
            perm("(25)(46)", 6),
        ];
        let g = close_group(&c, &gens, 1000).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(logical_group(&g).images.len(), 24);
        assert!(close_group(&c, &[perm("(12)", 6)], 10).is_err());
        assert!(close_group(&c, &gens, 5).is_err());
    }

    #[test]
    fn tanner_detection() {
        let k = complete(4).unwrap();
        let c = cycle_code(&k).unwrap();
        for a in graph_automorphisms(&k, DEFAULT_VERTEX_CAP).unwrap() {
            let aut = check_automorphism(&c, &a.edge_perm).unwrap().unwrap();
            assert!(is_tanner(&c, &aut));
            let w = tanner_check_permutation(&c, &a.edge_perm).unwrap();
            assert_eq!(w.as_matrix().mul(c.h()), a.edge_perm.permute_columns(c.h()));
        }
        let d6 = from_spec("ga:d6:1+r+sr^-1").unwrap();
        let group = crate::classical::dihedral_group(6).unwrap();
        for g in 0..12 {
            let r = regular_representation(&group, g, Side::Right);
            let aut = check_automorphism(&d6, &r).unwrap().unwrap();
            assert!(is_tanner(&d6, &aut));
            assert_eq!(
                tanner_check_permutation(&d6, &r).unwrap().as_matrix(),
                r.as_matrix()
            );
        }
    }

    #[test]
    fn hamming_non_permutation_action() {
        let h = hamming(3).unwrap();
        let w = Step::Cnot {
            control: 0,
            target: 1,
        }
        .matrix(3);
        let sigma = column_matching_permutation(h.h(), &w).unwrap();
        let aut = check_automorphism(&h, &sigma).unwrap().unwrap();
        assert_eq!(aut.w, w);
        assert!(!is_tanner(&h, &aut));
        let g = enumerate_automorphisms(&h, DEFAULT_N_CAP).unwrap();
        let ws: HashSet<&BitMatrix> = g.elements.iter().map(|a| &a.w).collect();
        assert_eq!(ws.len(), 168);
        assert!(g.elements.iter().all(|a| a.w.rank() == 3));
    }

    #[test]
    fn logical_groups() {
        let k4c = cycle_code(&complete(4).unwrap()).unwrap();
        let g = enumerate_automorphisms(&k4c, DEFAULT_N_CAP).unwrap();
        let lg = logical_group(&g);
        assert_eq!((lg.images.len(), lg.kernel_size), (24, 1));
        assert!(lg.homomorphism);
        let rep = repetition(3).unwrap();
        let g = enumerate_automorphisms(&rep, DEFAULT_N_CAP).unwrap();
        assert_eq!(g.order(), 6);
        let lg = logical_group(&g);
        assert_eq!((lg.images.len(), lg.kernel_size), (1, 6));
        let s = enumerate_automorphisms(&simplex(3).unwrap(), DEFAULT_N_CAP).unwrap();
        assert_eq!(logical_group(&s).images.len(), 168);
    }

    #[test]
    fn structural_checks() {
        for spec in ["cycle:k4", "cycle:k33", "hamming:3", "simplex:3"] {
            let c = from_spec(spec).unwrap();
            let g = enumerate_automorphisms(&c, DEFAULT_N_CAP).unwrap();
            assert!(affine_check(&g).holds());
            let r = dual_bound_check(&c, &g);
            assert!(r.holds(), "{spec}: {r:?}");
        }
        let k = dual_bound_check(
            &from_spec("cycle:k4").unwrap(),
            &enumerate_automorphisms(&from_spec("cycle:k4").unwrap(), 10).unwrap(),
        );
        assert_eq!(
            (k.order, k.distinct_v, k.distinct_w, k.equal_orders),
            (24, 24, 24, Some(true))
        );
        let rep2 = repetition(2).unwrap();
        let r = dual_bound_check(&rep2, &enumerate_automorphisms(&rep2, 10).unwrap());
        assert!(!r.applicable);
    }

    #[test]
    fn all_dual_codewords_make_every_automorphism_tanner() {
        for c in [k4(), repetition(3).unwrap()] {
            let full =
                ClassicalCode::from_parity_check(all_dual_codewords_check_matrix(&c).unwrap());
            let g = enumerate_automorphisms(&full, DEFAULT_N_CAP).unwrap();
            assert_eq!(
                g.order(),
                enumerate_automorphisms(&c, DEFAULT_N_CAP).unwrap().order()
            );
            assert!(g.elements.iter().all(|a| is_tanner(&full, a)));
        }
        let h = hamming(3).unwrap();
        assert!(enumerate_automorphisms(&h, 10)
            .unwrap()
            .elements
            .iter()
            .any(|a| !is_tanner(&h, a)));
    }

    proptest! {
        #[test]
        fn automorphism_identities(idx in 0usize..168) {
            let c = simplex(3).unwrap();
            let g = enumerate_automorphisms(&c, DEFAULT_N_CAP).unwrap();
            let a = &g.elements[idx];
            let p = a.sigma.as_matrix();
            prop_assert_eq!(c.h().mul(&p), a.w.mul(c.h()));
            prop_assert_eq!(c.g().mul(&p), a.v.mul(c.g()));
            let b = &g.elements[(idx * 7 + 3) % 168];
            let ab = g.elements.iter().find(|x| x.sigma == a.sigma.compose(&b.sigma)).unwrap();
            prop_assert_eq!(&ab.v, &a.v.mul(&b.v));
        }

        #[test]
        fn decomposition_replays(seed: u64) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w = loop {
                let m = BitMatrix::from_fn(4, 4, |_, _| rng.gen());
                if m.rank() == 4 { break m; }
            };
            let steps = hamming_decompose(&w).unwrap();
            prop_assert!(steps.len() <= 16);
            prop_assert_eq!(crate::f2core::replay(4, &steps), w);
        }
    }
}
