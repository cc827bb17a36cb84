//! CSS codes, chain complexes and logical bases.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::classical::Distance;
use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, BitVec, Reducer};
use crate::search::{sector_search, Method, DEFAULT_BUDGET};

/// Default weight cap for quantum distance searches.
pub const DEFAULT_CSS_CAP: usize = 4;

/// `∂_i : C_i → C_{i−1}` for `i = 1..len`, stored so that
/// `boundaries[i - 1]` has shape `dims[i-1] × dims[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplex {
    pub fn new(boundaries: Vec<BitMatrix>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::Invalid(
                "a chain complex needs at least one boundary map".into(),
            ));
        }
        let mut dims = vec![boundaries[0].rows()];
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[i] {
                return Err(Error::Dimension(format!(
                    "boundary {} has {} rows, expected {}",
                    i + 1,
                    b.rows(),
                    dims[i]
                )));
            }
            dims.push(b.cols());
        }
        for i in 1..boundaries.len() {
            if !boundaries[i - 1].mul(&boundaries[i]).is_zero() {
                return Err(Error::Verification(format!(
                    "boundary maps {i} and {} do not compose to zero",
                    i + 1
                )));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `∂_i`, for `1 ≤ i < dims.len()`.
    pub fn boundary(&self, i: usize) -> &BitMatrix {
        &self.boundaries[i - 1]
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    fn rank_out(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.boundary(i).rank()
        }
    }

    fn rank_in(&self, i: usize) -> usize {
        if i + 1 < self.dims.len() {
            self.boundary(i + 1).rank()
        } else {
            0
        }
    }

    /// Homology ranks, one per degree.
    pub fn homology_ranks(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|i| self.dims[i] - self.rank_out(i) - self.rank_in(i))
            .collect()
    }

    /// Tensor product with degrees `(i, j) ↦ i + j`. Within each degree the
    /// summands are ordered by increasing `i` from this complex, so for
    /// two-term factors `C_1 = A_1⊗B_0 ⊕ A_0⊗B_1`.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let (na, nb) = (self.dims.len(), other.dims.len());
        let total = na + nb - 1;
        let summands = |d: usize| -> Vec<(usize, usize)> {
            (0..na)
                .filter(|&i| d >= i && d - i < nb)
                .map(|i| (i, d - i))
                .collect()
        };
        let mut boundaries = Vec::with_capacity(total - 1);
        for d in 1..total {
            let src = summands(d);
            let dst = summands(d - 1);
            let grid: Vec<Vec<BitMatrix>> = dst
                .iter()
                .map(|&(ti, tj)| {
                    src.iter()
                        .map(|&(si, sj)| {
                            let rows = self.dims[ti] * other.dims[tj];
                            let cols = self.dims[si] * other.dims[sj];
                            if ti + 1 == si && tj == sj {
                                self.boundary(si).kron(&BitMatrix::identity(other.dims[sj]))
                            } else if ti == si && tj + 1 == sj {
                                BitMatrix::identity(self.dims[si]).kron(other.boundary(sj))
                            } else {
                                BitMatrix::zeros(rows, cols)
                            }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<Vec<Option<&BitMatrix>>> = grid
                .iter()
                .map(|row| row.iter().map(Some).collect())
                .collect();
            boundaries.push(BitMatrix::block(&refs).expect("tensor blocks are consistent"));
        }
        ChainComplex::new(boundaries).expect("tensor of complexes is a complex")
    }
}

/// A named, contiguous block of qubits laid out as a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub name: String,
    pub start: usize,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub row_label: String,
    pub col_label: String,
}

impl Sector {
    pub fn len(&self) -> usize {
        self.grid_rows * self.grid_cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.range().collect()
    }

    /// Qubit index of grid cell `(r, c)`, row-major.
    pub fn index(&self, r: usize, c: usize) -> usize {
        self.start + r * self.grid_cols + c
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorLayout {
    pub sectors: Vec<Sector>,
}

impl SectorLayout {
    /// One sector covering every qubit.
    pub fn single(n: usize) -> Self {
        SectorLayout {
            sectors: vec![Sector {
                name: "Q".into(),
                start: 0,
                grid_rows: 1,
                grid_cols: n,
                row_label: String::new(),
                col_label: "qubit".into(),
            }],
        }
    }

    /// Consecutive sectors `(name, rows, cols, row_label, col_label)`.
    pub fn from_grids(grids: &[(&str, usize, usize, &str, &str)]) -> Self {
        let mut start = 0;
        let sectors = grids
            .iter()
            .map(|&(name, r, c, rl, cl)| {
                let s = Sector {
                    name: name.into(),
                    start,
                    grid_rows: r,
                    grid_cols: c,
                    row_label: rl.into(),
                    col_label: cl.into(),
                };
                start += r * c;
                s
            })
            .collect();
        SectorLayout { sectors }
    }

    pub fn total(&self) -> usize {
        self.sectors.iter().map(Sector::len).sum()
    }

    pub fn get(&self, name: &str) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.name == name)
    }

    fn check(&self, n: usize) -> Result<()> {
        let mut next = 0;
        for s in &self.sectors {
            if s.start != next {
                return Err(Error::Invalid(format!(
                    "sector {} starts at {}, expected {next}",
                    s.name, s.start
                )));
            }
            next += s.len();
        }
        if next != n {
            return Err(Error::Invalid(format!(
                "sectors cover {next} qubits, code has {n}"
            )));
        }
        Ok(())
    }
}

/// Paired logical operators, `k` rows each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalBasis {
    pub gx: BitMatrix,
    pub gz: BitMatrix,
}

impl LogicalBasis {
    pub fn k(&self) -> usize {
        self.gx.rows()
    }

    pub fn empty(n: usize) -> Self {
        LogicalBasis {
            gx: BitMatrix::zeros(0, n),
            gz: BitMatrix::zeros(0, n),
        }
    }

    /// Replaces `gz` by `M^{-T}·gz` with `M = gx·gzᵀ`, making the pairing the identity.
    pub fn paired(gx: BitMatrix, gz: BitMatrix) -> Result<Self> {
        let m = gx.mul(&gz.transpose());
        let inv = m
            .inverse()
            .ok_or_else(|| Error::Verification("logical pairing matrix is singular".into()))?;
        Ok(LogicalBasis {
            gz: inv.transpose().mul(&gz),
            gx,
        })
    }

    /// Stacks bases: rows of `self` first.
    pub fn concat(&self, other: &LogicalBasis) -> LogicalBasis {
        LogicalBasis {
            gx: BitMatrix::vstack(&[&self.gx, &other.gx]).expect("same length"),
            gz: BitMatrix::vstack(&[&self.gz, &other.gz]).expect("same length"),
        }
    }
}

/// `G_X·G_Zᵀ = I`.
pub fn symplectic_check(b: &LogicalBasis) -> bool {
    b.gx.rows() == b.gz.rows() && b.gx.mul(&b.gz.transpose()).is_identity()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssCode {
    hx: BitMatrix,
    hz: BitMatrix,
    mx: Option<BitMatrix>,
    mz: Option<BitMatrix>,
    layout: SectorLayout,
    basis: Option<LogicalBasis>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spread {
    pub min: usize,
    pub max: usize,
}

impl Spread {
    fn of(v: &[usize]) -> Spread {
        Spread {
            min: v.iter().copied().min().unwrap_or(0),
            max: v.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn uniform(&self) -> Option<usize> {
        (self.min == self.max).then_some(self.min)
    }
}

/// Check weights and qubit participation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssReport {
    pub n: usize,
    pub k: usize,
    pub x_weight: Spread,
    pub z_weight: Spread,
    pub x_participation: Spread,
    pub z_participation: Spread,
}

impl CssCode {
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::Dimension(format!(
                "H_X has {} columns, H_Z has {}",
                hx.cols(),
                hz.cols()
            )));
        }
        let n = hx.cols();
        let code = CssCode {
            hx,
            hz,
            mx: None,
            mz: None,
            layout: SectorLayout::single(n),
            basis: None,
        };
        code.check_commutation()?;
        Ok(code)
    }

    pub fn with_layout(mut self, layout: SectorLayout) -> Result<Self> {
        layout.check(self.n())?;
        self.layout = layout;
        Ok(self)
    }

    pub fn with_metachecks(mut self, mx: Option<BitMatrix>, mz: Option<BitMatrix>) -> Result<Self> {
        if let Some(m) = &mx {
            if m.cols() != self.hx.rows() || !m.mul(&self.hx).is_zero() {
                return Err(Error::Verification("M_X·H_X ≠ 0".into()));
            }
        }
        if let Some(m) = &mz {
            if m.cols() != self.hz.rows() || !m.mul(&self.hz).is_zero() {
                return Err(Error::Verification("M_Z·H_Z ≠ 0".into()));
            }
        }
        self.mx = mx;
        self.mz = mz;
        Ok(self)
    }

    pub fn with_basis(mut self, basis: LogicalBasis) -> Result<Self> {
        check_basis(&self.hx, &self.hz, &basis)?;
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn mx(&self) -> Option<&BitMatrix> {
        self.mx.as_ref()
    }

    pub fn mz(&self) -> Option<&BitMatrix> {
        self.mz.as_ref()
    }

    pub fn layout(&self) -> &SectorLayout {
        &self.layout
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn num_logicals(&self) -> usize {
        self.n() - self.hx.rank() - self.hz.rank()
    }

    /// The attached basis, or a computed one.
    pub fn logical_basis(&self) -> LogicalBasis {
        match &self.basis {
            Some(b) => b.clone(),
            None => compute_logical_basis(&self.hx, &self.hz),
        }
    }

    pub fn attached_basis(&self) -> Option<&LogicalBasis> {
        self.basis.as_ref()
    }

    fn check_commutation(&self) -> Result<()> {
        let prod = self.hx.mul(&self.hz.transpose());
        if prod.is_zero() {
            return Ok(());
        }
        let bad: Vec<String> = (0..prod.rows())
            .flat_map(|i| {
                prod.row(i)
                    .support()
                    .into_iter()
                    .map(move |j| format!("(X{i},Z{j})"))
            })
            .take(8)
            .collect();
        Err(Error::Verification(format!(
            "anticommuting checks {}",
            bad.join(" ")
        )))
    }

    /// The underlying three-term complex `S_Z → Q → S_X`.
    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::new(vec![self.hx.clone(), self.hz.transpose()]).expect("valid CSS code")
    }

    /// Rechecks every invariant and reports weights.
    pub fn validate(&self) -> Result<CssReport> {
        self.check_commutation()?;
        self.layout.check(self.n())?;
        if let Some(m) = &self.mx {
            if !m.mul(&self.hx).is_zero() {
                return Err(Error::Verification("M_X·H_X ≠ 0".into()));
            }
        }
        if let Some(m) = &self.mz {
            if !m.mul(&self.hz).is_zero() {
                return Err(Error::Verification("M_Z·H_Z ≠ 0".into()));
            }
        }
        if let Some(b) = &self.basis {
            check_basis(&self.hx, &self.hz, b)?;
        }
        Ok(CssReport {
            n: self.n(),
            k: self.num_logicals(),
            x_weight: Spread::of(&self.hx.row_weights()),
            z_weight: Spread::of(&self.hz.row_weights()),
            x_participation: Spread::of(&self.hx.col_weights()),
            z_participation: Spread::of(&self.hz.col_weights()),
        })
    }

    /// Minimum weight of an X logical: `x ∈ ker H_Z` outside `rs H_X`.
    pub fn distance_x(&self, cap: usize) -> DistanceRecord {
        let b = self.logical_basis();
        distance_record(&self.hz, &b.gz, &b.gx, cap)
    }

    /// Minimum weight of a Z logical: `z ∈ ker H_X` outside `rs H_Z`.
    pub fn distance_z(&self, cap: usize) -> DistanceRecord {
        let b = self.logical_basis();
        distance_record(&self.hx, &b.gx, &b.gz, cap)
    }
}

/// A distance together with how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub distance: Distance,
    /// Lowest row weight of the logical basis.
    pub upper: Option<usize>,
    pub method: Method,
    pub witness: Option<BitVec>,
}

fn distance_record(
    check: &BitMatrix,
    tag: &BitMatrix,
    reps: &BitMatrix,
    cap: usize,
) -> DistanceRecord {
    let upper = reps.row_weights().into_iter().min();
    if tag.rows() == 0 {
        return DistanceRecord {
            distance: Distance::Undefined,
            upper,
            method: Method::FullCoset,
            witness: None,
        };
    }
    let all: Vec<usize> = (0..check.cols()).collect();
    let s = sector_search(check, tag, &all, DEFAULT_BUDGET, cap);
    let distance = match s.min {
        Some(d) => Distance::Exact(d),
        None => Distance::AtLeast(cap + 1),
    };
    DistanceRecord {
        distance,
        upper,
        method: s.method,
        witness: s.witness,
    }
}

fn check_basis(hx: &BitMatrix, hz: &BitMatrix, b: &LogicalBasis) -> Result<()> {
    let n = hx.cols();
    if b.gx.cols() != n || b.gz.cols() != n || b.gx.rows() != b.gz.rows() {
        return Err(Error::Dimension("logical basis shape mismatch".into()));
    }
    if !hz.mul(&b.gx.transpose()).is_zero() {
        return Err(Error::Verification(
            "an X logical violates a Z check".into(),
        ));
    }
    if !hx.mul(&b.gz.transpose()).is_zero() {
        return Err(Error::Verification(
            "a Z logical violates an X check".into(),
        ));
    }
    let k = b.k();
    let (rx, rz) = (hx.rank(), hz.rank());
    if BitMatrix::vstack(&[hx, &b.gx])?.rank() != rx + k
        || BitMatrix::vstack(&[hz, &b.gz])?.rank() != rz + k
    {
        return Err(Error::Verification(
            "logical basis rows are dependent modulo stabilizers".into(),
        ));
    }
    if !symplectic_check(b) {
        return Err(Error::Verification(
            "logical basis is not symplectic".into(),
        ));
    }
    Ok(())
}

/// Kernel vectors of `check` that are independent modulo `rs(stab)`.
fn complement_basis(check: &BitMatrix, stab: &BitMatrix) -> BitMatrix {
    let n = check.cols();
    let ker = check.kernel_basis();
    let mut red = Reducer::new(n, stab.rows() + ker.rows());
    for i in 0..stab.rows() {
        red.insert(&stab.row(i));
    }
    let mut out = Vec::new();
    for i in 0..ker.rows() {
        let v = ker.row(i);
        if !red.contains(&v) {
            red.insert(&v);
            out.push(v);
        }
    }
    BitMatrix::from_rows(&out, n)
}

/// A symplectic basis from kernels modulo stabilizers.
pub fn compute_logical_basis(hx: &BitMatrix, hz: &BitMatrix) -> LogicalBasis {
    let gx = complement_basis(hz, hx);
    let gz = complement_basis(hx, hz);
    LogicalBasis::paired(gx, gz).expect("CSS logical pairing is nondegenerate")
}

/// Code on the qubit term of a complex: `H_X = ∂_q` and `H_Z = ∂_{q+1}ᵀ`,
/// with metachecks `M_X = ∂_{q−1}`, `M_Z = ∂_{q+2}ᵀ` when those exist.
pub fn css_from_chain(cc: &ChainComplex, qubit_index: usize) -> Result<CssCode> {
    if qubit_index == 0 || qubit_index + 1 >= cc.len() {
        return Err(Error::Invalid(format!(
            "degree {qubit_index} has no neighbours on both sides"
        )));
    }
    let hx = cc.boundary(qubit_index).clone();
    let hz = cc.boundary(qubit_index + 1).transpose();
    let mx = (qubit_index >= 2).then(|| cc.boundary(qubit_index - 1).clone());
    let mz = (qubit_index + 2 < cc.len()).then(|| cc.boundary(qubit_index + 2).transpose());
    CssCode::new(hx, hz)?.with_metachecks(mx, mz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{hamming, repetition};
    use proptest::prelude::*;

    fn surface() -> CssCode {
        let h = repetition(3).unwrap().h().clone();
        let (m, n) = h.shape();
        let hx = BitMatrix::hstack(&[
            &h.kron(&BitMatrix::identity(n)),
            &BitMatrix::identity(m).kron(&h.transpose()),
        ])
        .unwrap();
        let hz = BitMatrix::hstack(&[
            &BitMatrix::identity(n).kron(&h),
            &h.transpose().kron(&BitMatrix::identity(m)),
        ])
        .unwrap();
        CssCode::new(hx, hz).unwrap()
    }

    #[test]
    fn surface_code_parameters() {
        let c = surface();
        assert_eq!((c.n(), c.num_logicals()), (13, 1));
        assert_eq!(c.distance_x(4).distance, Distance::Exact(3));
        assert_eq!(c.distance_z(4).distance, Distance::Exact(3));
        assert!(symplectic_check(&c.logical_basis()));
        assert_eq!(c.distance_x(2).distance, Distance::Exact(3));
    }

    #[test]
    fn anticommuting_checks_are_reported() {
        let hx = BitMatrix::from_strs(&["110"]).unwrap();
        let hz = BitMatrix::from_strs(&["100"]).unwrap();
        let err = CssCode::new(hx, hz).unwrap_err();
        assert!(err.to_string().contains("(X0,Z0)"));
    }

    #[test]
    fn duplicated_basis_row_is_not_symplectic() {
        let b = surface().logical_basis();
        let dup = LogicalBasis {
            gx: BitMatrix::vstack(&[&b.gx, &b.gx]).unwrap(),
            gz: BitMatrix::vstack(&[&b.gz, &b.gz]).unwrap(),
        };
        assert!(!symplectic_check(&dup));
    }

    #[test]
    fn chain_extraction() {
        let h = hamming(3).unwrap();
        assert!(ChainComplex::new(vec![h.h().clone(), h.h().clone()]).is_err());
        let cc = ChainComplex::new(vec![h.h().clone(), BitMatrix::zeros(7, 0)]).unwrap();
        let q = css_from_chain(&cc, 1).unwrap();
        assert_eq!(q.num_logicals(), 4);
        assert!(css_from_chain(&cc, 0).is_err());
        assert_eq!(cc.homology_ranks(), vec![0, 4, 0]);
    }

    #[test]
    fn tensor_homology_is_kunneth() {
        let a = ChainComplex::new(vec![repetition(3).unwrap().h().clone()]).unwrap();
        let b = ChainComplex::new(vec![hamming(3).unwrap().h().transpose()]).unwrap();
        let t = a.tensor(&b);
        let (ha, hb) = (a.homology_ranks(), b.homology_ranks());
        let ht = t.homology_ranks();
        for d in 0..ht.len() {
            let expect: usize = (0..ha.len())
                .filter(|&i| d >= i && d - i < hb.len())
                .map(|i| ha[i] * hb[d - i])
                .sum();
            assert_eq!(ht[d], expect);
        }
    }

    #[test]
    fn metachecks_are_validated() {
        let c = surface();
        assert!(c
            .clone()
            .with_metachecks(
                Some(BitMatrix::from_fn(1, c.hx().rows(), |_, _| true)),
                None
            )
            .is_err());
    }

    proptest! {
        #[test]
        fn computed_basis_is_valid(seed: u64, n in 4usize..9) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let hx = BitMatrix::from_fn(n / 2, n, |_, _| rng.gen());
            let ker = hx.kernel_basis();
            let pick: Vec<usize> = (0..ker.rows()).filter(|_| rng.gen()).collect();
            let hz = ker.select_rows(&pick);
            let code = CssCode::new(hx, hz).unwrap();
            let b = code.logical_basis();
            prop_assert_eq!(b.k(), code.num_logicals());
            let with = code.clone().with_basis(b);
            prop_assert!(with.is_ok());
            let dx = code.distance_x(n).distance;
            let dz = code.distance_z(n).distance;
            if code.num_logicals() > 0 {
                prop_assert!(dx.exact().is_some() && dz.exact().is_some());
            }
        }
    }
}
