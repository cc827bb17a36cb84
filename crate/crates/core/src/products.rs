//! Hypergraph and homological products with sector layouts and canonical
//! logical bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classical::{ClassicalCode, Distance};
use crate::css::{symplectic_check, ChainComplex, CssCode, CssReport, LogicalBasis, SectorLayout};
use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, BitVec, Reducer};
use crate::search::{sector_search, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Hgp,
    Qc,
    Qq,
}

/// The inputs a product was built from.
#[derive(Clone, Debug)]
pub enum Factors {
    Hgp(ClassicalCode, ClassicalCode),
    Qc(CssCode, ClassicalCode),
    Qq(CssCode, CssCode),
}

/// A product code plus per-sector logical bookkeeping.
///
/// The attached basis of `result` is the concatenation of the sector bases
/// in layout order. Gauge designation only changes which of those bases
/// count as kept; the check matrices are never altered.
#[derive(Clone, Debug)]
pub struct ProductRecord {
    pub result: CssCode,
    pub kind: ProductKind,
    pub factors: Factors,
    pub bases: BTreeMap<String, LogicalBasis>,
    pub gauge_sectors: Vec<String>,
}

/// Serializable view of a record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductSummary {
    pub kind: ProductKind,
    pub n: usize,
    pub k: usize,
    pub kunneth: Vec<usize>,
    pub sectors: Vec<SectorSummary>,
    pub gauge_sectors: Vec<String>,
    pub report: CssReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorSummary {
    pub name: String,
    pub start: usize,
    pub qubits: usize,
    pub grid: (usize, usize),
    pub labels: (String, String),
    pub logicals: usize,
}

/// Unit vectors completing `rs(a)` and a kernel basis paired against them.
///
/// When `g` (a basis of `ker a`, defaulting to the reduced kernel) has an
/// identity among its columns, the first such column for each row is used
/// and `g` is kept as given, so logical labels follow its rows. Otherwise
/// the lexicographically first units independent modulo `rs(a)` are taken
/// and `g` is replaced by `(g·Eᵀ)^{-1}·g`. Either way `ĝ·Eᵀ = I`.
pub fn unit_pairing(a: &BitMatrix, g: Option<&BitMatrix>) -> (BitMatrix, BitMatrix) {
    let n = a.cols();
    let g = match g {
        Some(g) => g.clone(),
        None => a.kernel_basis().rref().matrix,
    };
    let k = g.rows();
    if k == 0 {
        return (BitMatrix::zeros(0, n), BitMatrix::zeros(0, n));
    }
    let identity_cols: Option<Vec<usize>> = (0..k)
        .map(|r| (0..n).find(|&j| g.col(j) == BitVec::unit(k, r)))
        .collect();
    if let Some(cols) = identity_cols {
        let units: Vec<BitVec> = cols.iter().map(|&j| BitVec::unit(n, j)).collect();
        return (BitMatrix::from_rows(&units, n), g);
    }
    let mut red = Reducer::new(n, a.rows() + n);
    for i in 0..a.rows() {
        red.insert(&a.row(i));
    }
    let mut units = Vec::with_capacity(k);
    for j in 0..n {
        if units.len() == k {
            break;
        }
        let e = BitVec::unit(n, j);
        if red.insert(&e) {
            units.push(e);
        }
    }
    let e = BitMatrix::from_rows(&units, n);
    let inv = g
        .mul(&e.transpose())
        .inverse()
        .expect("kernel basis pairs with a complement of the row space");
    (e, inv.mul(&g))
}

fn eye(n: usize) -> BitMatrix {
    BitMatrix::identity(n)
}

fn zeros(r: usize, c: usize) -> BitMatrix {
    BitMatrix::zeros(r, c)
}

/// Places `rows` (each of length `block.len()`) at `offset` in vectors of
/// length `n`.
fn embed(rows: &BitMatrix, offset: usize, n: usize) -> BitMatrix {
    let (r, c) = rows.shape();
    BitMatrix::hstack(&[&zeros(r, offset), rows, &zeros(r, n - offset - c)])
        .expect("row counts agree")
}

fn sector_basis(gx: &BitMatrix, gz: &BitMatrix, offset: usize, n: usize) -> Result<LogicalBasis> {
    let b = LogicalBasis {
        gx: embed(gx, offset, n),
        gz: embed(gz, offset, n),
    };
    if !symplectic_check(&b) {
        return Err(Error::Verification("sector basis is not symplectic".into()));
    }
    Ok(b)
}

/// Which operator type has its first tensor factor in a kernel.
#[derive(Clone, Copy)]
enum Split {
    /// `Z̄ = ker a ⊗ e`, `X̄ = e ⊗ ker b`.
    ZFirst,
    /// `X̄ = ker a ⊗ e`, `Z̄ = e ⊗ ker b`.
    XFirst,
}

/// Logical basis for one tensor sector. Rows are ordered so that the
/// pairing is the identity.
fn mixed_sector(
    split: Split,
    a: &BitMatrix,
    ga: Option<&BitMatrix>,
    b: &BitMatrix,
    gb: Option<&BitMatrix>,
    offset: usize,
    n: usize,
) -> Result<LogicalBasis> {
    let (ea, ka) = unit_pairing(a, ga);
    let (eb, kb) = unit_pairing(b, gb);
    match split {
        Split::ZFirst => sector_basis(&ea.kron(&kb), &ka.kron(&eb), offset, n),
        Split::XFirst => sector_basis(&ka.kron(&eb), &ea.kron(&kb), offset, n),
    }
}

fn rank_gap(h: &BitMatrix) -> usize {
    h.rows() - h.rank()
}

/// Per-degree homology ranks of `a ⊗ b` from those of the factors.
pub fn kunneth_k(a: &ChainComplex, b: &ChainComplex) -> Vec<usize> {
    let (ha, hb) = (a.homology_ranks(), b.homology_ranks());
    let mut out = vec![0; ha.len() + hb.len() - 1];
    for (i, x) in ha.iter().enumerate() {
        for (j, y) in hb.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `B(1) → S(0)` with boundary `h`.
fn classical_complex(h: &BitMatrix) -> ChainComplex {
    ChainComplex::new(vec![h.clone()]).expect("single map")
}

/// Hypergraph product `H_X = (h1⊗I | I⊗h2ᵀ)`, `H_Z = (I⊗h2 | h1ᵀ⊗I)`.
pub fn hgp(c1: &ClassicalCode, c2: &ClassicalCode) -> Result<ProductRecord> {
    let (h1, h2) = (c1.h(), c2.h());
    let ((m1, n1), (m2, n2)) = (h1.shape(), h2.shape());
    let hx = BitMatrix::hstack(&[&h1.kron(&eye(n2)), &eye(m1).kron(&h2.transpose())])?;
    let hz = BitMatrix::hstack(&[&eye(n1).kron(h2), &h1.transpose().kron(&eye(m2))])?;
    let n = n1 * n2 + m1 * m2;
    let layout = SectorLayout::from_grids(&[
        ("L", n1, n2, "bits1", "bits2"),
        ("R", m1, m2, "checks1", "checks2"),
    ]);

    let left = mixed_sector(Split::ZFirst, h1, Some(c1.g()), h2, Some(c2.g()), 0, n)?;
    let (g1t, g2t) = (c1.g_transpose(), c2.g_transpose());
    let right = mixed_sector(
        Split::XFirst,
        &h1.transpose(),
        Some(&g1t),
        &h2.transpose(),
        Some(&g2t),
        n1 * n2,
        n,
    )?;

    let code = CssCode::new(hx, hz)?
        .with_layout(layout)?
        .with_basis(left.concat(&right))?;
    let mut bases = BTreeMap::new();
    bases.insert("L".to_string(), left);
    bases.insert("R".to_string(), right);
    finish(
        code,
        ProductKind::Hgp,
        Factors::Hgp(c1.clone(), c2.clone()),
        bases,
        vec![],
    )
}

/// Quantum × classical product
/// `H̃_X = (H_X⊗I | I⊗hᵀ)`, `H̃_Z = [[H_Z⊗I, 0], [I⊗h, H_Xᵀ⊗I]]`,
/// with metacheck `M̃_Z = (I⊗h | H_Z⊗I)`. The right sector carries the
/// spurious logicals and is designated gauge.
pub fn homprod_qc(q: &CssCode, c: &ClassicalCode) -> Result<ProductRecord> {
    q.validate()?;
    let (hxq, hzq, h) = (q.hx(), q.hz(), c.h());
    let (mx, nq) = hxq.shape();
    let mz = hzq.rows();
    let (mc, nc) = h.shape();
    let hx = BitMatrix::hstack(&[&hxq.kron(&eye(nc)), &eye(mx).kron(&h.transpose())])?;
    let hz = BitMatrix::block(&[
        vec![Some(&hzq.kron(&eye(nc))), Some(&zeros(mz * nc, mx * mc))],
        vec![
            Some(&eye(nq).kron(h)),
            Some(&hxq.transpose().kron(&eye(mc))),
        ],
    ])?;
    let mzt = BitMatrix::hstack(&[&eye(mz).kron(h), &hzq.kron(&eye(mc))])?;
    let n = nq * nc + mx * mc;
    let layout = SectorLayout::from_grids(&[("L", nq, nc, "Q", "B"), ("R", mx, mc, "S_X", "S")]);

    let qb = q.logical_basis();
    let (e, g) = unit_pairing(h, Some(c.g()));
    let left = sector_basis(&qb.gx.kron(&g), &qb.gz.kron(&e), 0, n)?;
    let right = mixed_sector(
        Split::XFirst,
        &hxq.transpose(),
        None,
        &h.transpose(),
        Some(&c.g_transpose()),
        nq * nc,
        n,
    )?;

    let code = CssCode::new(hx, hz)?
        .with_layout(layout)?
        .with_metachecks(None, Some(mzt))?
        .with_basis(left.concat(&right))?;
    let mut bases = BTreeMap::new();
    bases.insert("L".to_string(), left);
    bases.insert("R".to_string(), right);
    finish(
        code,
        ProductKind::Qc,
        Factors::Qc(q.clone(), c.clone()),
        bases,
        vec!["R".into()],
    )
}

/// Quantum × quantum product on the middle term of the five-term complex,
/// with sectors `L = (S_Z, S'_X)`, `M = (Q, Q')`, `R = (S_X, S'_Z)`.
/// The outer sectors are designated gauge.
pub fn homprod_qq(q1: &CssCode, q2: &CssCode) -> Result<ProductRecord> {
    q1.validate()?;
    q2.validate()?;
    let (hx, hz, hx2, hz2) = (q1.hx(), q1.hz(), q2.hx(), q2.hz());
    let ((mx, n), mz) = (hx.shape(), hz.rows());
    let ((mx2, n2), mz2) = (hx2.shape(), hz2.rows());
    let (nl, nm, nr) = (mz * mx2, n * n2, mx * mz2);

    let hxt = BitMatrix::block(&[
        vec![
            Some(&hz.transpose().kron(&eye(mx2))),
            Some(&eye(n).kron(hx2)),
            Some(&zeros(n * mx2, nr)),
        ],
        vec![
            Some(&zeros(mx * n2, nl)),
            Some(&hx.kron(&eye(n2))),
            Some(&eye(mx).kron(&hz2.transpose())),
        ],
    ])?;
    let hzt = BitMatrix::block(&[
        vec![
            Some(&eye(mz).kron(&hx2.transpose())),
            Some(&hz.kron(&eye(n2))),
            Some(&zeros(mz * n2, nr)),
        ],
        vec![
            Some(&zeros(n * mz2, nl)),
            Some(&eye(n).kron(hz2)),
            Some(&hx.transpose().kron(&eye(mz2))),
        ],
    ])?;
    let mzt = BitMatrix::hstack(&[&eye(mz).kron(hz2), &hz.kron(&eye(mz2))])?;
    let mxt = BitMatrix::hstack(&[&hx.kron(&eye(mx2)), &eye(mx).kron(hx2)])?;
    let total = nl + nm + nr;
    let layout = SectorLayout::from_grids(&[
        ("L", mz, mx2, "S_Z", "S'_X"),
        ("M", n, n2, "Q", "Q'"),
        ("R", mx, mz2, "S_X", "S'_Z"),
    ]);

    let (b1, b2) = (q1.logical_basis(), q2.logical_basis());
    let middle = sector_basis(&b1.gx.kron(&b2.gx), &b1.gz.kron(&b2.gz), nl, total)?;
    let left = mixed_sector(
        Split::ZFirst,
        &hz.transpose(),
        None,
        &hx2.transpose(),
        None,
        0,
        total,
    )?;
    let right = mixed_sector(
        Split::XFirst,
        &hx.transpose(),
        None,
        &hz2.transpose(),
        None,
        nl + nm,
        total,
    )?;

    let code = CssCode::new(hxt, hzt)?
        .with_layout(layout)?
        .with_metachecks(Some(mxt), Some(mzt))?
        .with_basis(left.concat(&middle).concat(&right))?;
    let mut bases = BTreeMap::new();
    bases.insert("L".to_string(), left);
    bases.insert("M".to_string(), middle);
    bases.insert("R".to_string(), right);
    finish(
        code,
        ProductKind::Qq,
        Factors::Qq(q1.clone(), q2.clone()),
        bases,
        vec!["L".into(), "R".into()],
    )
}

fn finish(
    result: CssCode,
    kind: ProductKind,
    factors: Factors,
    bases: BTreeMap<String, LogicalBasis>,
    gauge_sectors: Vec<String>,
) -> Result<ProductRecord> {
    let rec = ProductRecord {
        result,
        kind,
        factors,
        bases,
        gauge_sectors,
    };
    rec.check()?;
    Ok(rec)
}

impl ProductRecord {
    /// The factor complexes, oriented so that qubits sit in `qubit_degree`.
    pub fn factor_complexes(&self) -> (ChainComplex, ChainComplex) {
        match &self.factors {
            Factors::Hgp(c1, c2) => (
                classical_complex(c1.h()),
                classical_complex(&c2.h().transpose()),
            ),
            Factors::Qc(q, c) => (q.chain_complex(), classical_complex(&c.h().transpose())),
            Factors::Qq(q1, q2) => (q1.chain_complex(), q2.chain_complex()),
        }
    }

    pub fn qubit_degree(&self) -> usize {
        match self.kind {
            ProductKind::Hgp | ProductKind::Qc => 1,
            ProductKind::Qq => 2,
        }
    }

    /// Künneth homology ranks of the product complex, per degree.
    pub fn kunneth(&self) -> Vec<usize> {
        let (a, b) = self.factor_complexes();
        kunneth_k(&a, &b)
    }

    pub fn sector_names(&self) -> Vec<String> {
        self.result
            .layout()
            .sectors
            .iter()
            .map(|s| s.name.clone())
            .collect()
    }

    /// Positions of each sector's logicals in the attached basis.
    pub fn logical_ranges(&self) -> Vec<(String, std::ops::Range<usize>)> {
        let mut start = 0;
        self.sector_names()
            .into_iter()
            .map(|s| {
                let k = self.bases.get(&s).map_or(0, |b| b.k());
                let r = start..start + k;
                start += k;
                (s, r)
            })
            .collect()
    }

    /// Attached-basis positions of the kept logicals.
    pub fn kept_indices(&self) -> Vec<usize> {
        self.logical_ranges()
            .into_iter()
            .filter(|(s, _)| !self.is_gauge(s))
            .flat_map(|(_, r)| r)
            .collect()
    }

    /// Labels `L1, L2, …, R1, …` for the attached basis, numbered within each sector.
    pub fn logical_labels(&self) -> Vec<String> {
        self.logical_ranges()
            .into_iter()
            .flat_map(|(s, r)| r.enumerate().map(move |(i, _)| format!("{s}{}", i + 1)))
            .collect()
    }

    pub fn is_gauge(&self, sector: &str) -> bool {
        self.gauge_sectors.iter().any(|s| s == sector)
    }

    /// Designates the named sectors as gauge, replacing any earlier choice.
    pub fn with_gauge(mut self, sectors: &[&str]) -> Result<Self> {
        for s in sectors {
            if !self.bases.contains_key(*s) {
                return Err(Error::Invalid(format!("no sector named {s}")));
            }
        }
        self.gauge_sectors = sectors.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    fn collect(&self, gauge: bool) -> LogicalBasis {
        let n = self.result.n();
        self.sector_names()
            .iter()
            .filter(|s| self.is_gauge(s) == gauge)
            .filter_map(|s| self.bases.get(s))
            .fold(LogicalBasis::empty(n), |acc, b| acc.concat(b))
    }

    pub fn kept_basis(&self) -> LogicalBasis {
        self.collect(false)
    }

    pub fn gauge_basis(&self) -> LogicalBasis {
        self.collect(true)
    }

    /// Product invariants: validity, Künneth count, symplectic sector bases
    /// and disjoint supports of kept and gauge logicals.
    pub fn check(&self) -> Result<()> {
        self.result.validate()?;
        let predicted = self.kunneth()[self.qubit_degree()];
        let k = self.result.num_logicals();
        if predicted != k {
            return Err(Error::Verification(format!(
                "Künneth predicts {predicted} logicals, code has {k}"
            )));
        }
        let layout = self.result.layout();
        for (name, b) in &self.bases {
            if !symplectic_check(b) {
                return Err(Error::Verification(format!(
                    "sector {name} basis is not symplectic"
                )));
            }
            let sector = layout
                .get(name)
                .ok_or_else(|| Error::Invalid(format!("no sector named {name}")))?;
            let outside: Vec<usize> = (0..self.result.n())
                .filter(|i| !sector.range().contains(i))
                .collect();
            for m in [&b.gx, &b.gz] {
                if (0..m.rows()).any(|i| m.row(i).weight_on(&outside) > 0) {
                    return Err(Error::Verification(format!(
                        "sector {name} basis leaves its sector"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dressed X distance of the subsystem code: the minimum weight of an
    /// `x ∈ ker H_Z` that anticommutes with some kept Z̄.
    pub fn kept_distance_x(&self, cap: usize) -> Distance {
        let kept = self.kept_basis();
        kept_distance(self.result.hz(), &kept.gz, cap)
    }

    pub fn kept_distance_z(&self, cap: usize) -> Distance {
        let kept = self.kept_basis();
        kept_distance(self.result.hx(), &kept.gx, cap)
    }

    /// `H'_X = (I⊗g2)·H_X` and `H'_Z = (g1⊗I)·H_Z`, supported on the left
    /// sector only.
    pub fn subsystem_generators(&self) -> Result<(BitMatrix, BitMatrix)> {
        let Factors::Hgp(c1, c2) = &self.factors else {
            return Err(Error::Invalid(
                "subsystem generators are defined for hypergraph products".into(),
            ));
        };
        let (m1, m2) = (c1.m(), c2.m());
        let hx = eye(m1).kron(c2.g()).mul(self.result.hx());
        let hz = c1.g().kron(&eye(m2)).mul(self.result.hz());
        Ok((hx, hz))
    }

    pub fn summary(&self) -> Result<ProductSummary> {
        let report = self.result.validate()?;
        let sectors = self
            .result
            .layout()
            .sectors
            .iter()
            .map(|s| SectorSummary {
                name: s.name.clone(),
                start: s.start,
                qubits: s.len(),
                grid: (s.grid_rows, s.grid_cols),
                labels: (s.row_label.clone(), s.col_label.clone()),
                logicals: self.bases.get(&s.name).map_or(0, |b| b.k()),
            })
            .collect();
        Ok(ProductSummary {
            kind: self.kind,
            n: report.n,
            k: report.k,
            kunneth: self.kunneth(),
            sectors,
            gauge_sectors: self.gauge_sectors.clone(),
            report,
        })
    }
}

fn kept_distance(check: &BitMatrix, tag: &BitMatrix, cap: usize) -> Distance {
    if tag.rows() == 0 {
        return Distance::Undefined;
    }
    let all: Vec<usize> = (0..check.cols()).collect();
    let s = sector_search(check, tag, &all, DEFAULT_BUDGET, cap);
    match s.min {
        Some(d) => Distance::Exact(d),
        None => Distance::AtLeast(cap + 1),
    }
}

/// Parses a quantum spec `A*B`, the hypergraph product of two classical
/// builder specs. `surface` is shorthand for `rep:3*rep:3`.
pub fn parse_quantum(spec: &str) -> Result<ProductRecord> {
    let spec = spec.trim();
    if spec == "surface" {
        return parse_quantum("rep:3*rep:3");
    }
    let (a, b) = spec
        .split_once('*')
        .ok_or_else(|| Error::Parse(format!("quantum spec {spec:?} should read `A*B`")))?;
    hgp(
        &crate::classical::from_spec(a)?,
        &crate::classical::from_spec(b)?,
    )
}

/// Spurious logicals of a quantum × classical product, `(m_X − rank H_X)·kᵀ_c`.
pub fn spurious_qc(q: &CssCode, c: &ClassicalCode) -> usize {
    rank_gap(q.hx()) * c.k_transpose()
}
