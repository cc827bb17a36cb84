//! Automorphism gadgets inherited by product codes.
//!
//! A gadget acts on X Paulis by an invertible `U` with `H_X·U = W·H_X` and
//! `H_Z·U^{-T} = W'·H_Z`. Every transformation is kept as a direct sum of
//! blocks, each a permutation or a CNOT circuit, so Kronecker products with
//! identities keep their depth.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorph::{tanner_check_permutation, CodeAutomorphism};
use crate::classical::ClassicalCode;
use crate::css::{CssCode, LogicalBasis, SectorLayout};
use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, InvertibleCircuit, Permutation, Reducer, Step};
use crate::products::{hgp, Factors, ProductRecord};

pub use crate::f2core::decompose;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Permutation(Permutation),
    Circuit(InvertibleCircuit),
}

impl Action {
    /// A permutation when `m` is one, otherwise its decomposition.
    pub fn from_matrix(m: &BitMatrix) -> Result<Action> {
        match m.as_permutation() {
            Some(p) => Ok(Action::Permutation(p)),
            None => Ok(Action::Circuit(decompose(m)?)),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Action::Permutation(p) => p.len(),
            Action::Circuit(c) => c.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrix(&self) -> BitMatrix {
        match self {
            Action::Permutation(p) => p.as_matrix(),
            Action::Circuit(c) => c.matrix.clone(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Action::Permutation(_) => 0,
            Action::Circuit(c) => c.depth,
        }
    }

    pub fn is_permutation(&self) -> bool {
        match self {
            Action::Permutation(_) => true,
            Action::Circuit(c) => c.matrix.is_permutation(),
        }
    }

    pub fn inverse_transpose(&self) -> Action {
        match self {
            Action::Permutation(p) => Action::Permutation(p.clone()),
            Action::Circuit(c) => Action::Circuit(c.inverse_transpose()),
        }
    }

    /// `A ⊗ I_r`.
    fn kron_right(&self, r: usize) -> Action {
        match self {
            Action::Permutation(p) => Action::Permutation(p.kron(&Permutation::identity(r))),
            Action::Circuit(c) => Action::Circuit(c.kron_identity(r, true)),
        }
    }

    /// `I_r ⊗ A`.
    fn kron_left(&self, r: usize) -> Action {
        match self {
            Action::Permutation(p) => Action::Permutation(Permutation::identity(r).kron(p)),
            Action::Circuit(c) => Action::Circuit(c.kron_identity(r, false)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub offset: usize,
    pub action: Action,
}

/// A direct sum of blocks covering `0..n` in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockAction {
    pub n: usize,
    pub blocks: Vec<Block>,
}

impl BlockAction {
    pub fn single(action: Action) -> Self {
        BlockAction {
            n: action.len(),
            blocks: vec![Block { offset: 0, action }],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::single(Action::Permutation(Permutation::identity(n)))
    }

    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        Ok(Self::single(Action::from_matrix(m)?))
    }

    pub fn direct_sum(parts: &[BlockAction]) -> Self {
        let mut blocks = Vec::new();
        let mut n = 0;
        for p in parts {
            blocks.extend(p.blocks.iter().map(|b| Block {
                offset: b.offset + n,
                action: b.action.clone(),
            }));
            n += p.n;
        }
        BlockAction { n, blocks }
    }

    /// `A ⊗ I_r`: each block stays contiguous.
    pub fn kron_right(&self, r: usize) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block {
                offset: b.offset * r,
                action: b.action.kron_right(r),
            })
            .collect();
        BlockAction {
            n: self.n * r,
            blocks,
        }
    }

    /// `I_r ⊗ A`: one copy of every block per identity index.
    pub fn kron_left(&self, r: usize) -> Self {
        if self.blocks.len() == 1 {
            return Self::single(self.blocks[0].action.kron_left(r));
        }
        let blocks = (0..r)
            .flat_map(|i| {
                self.blocks.iter().map(move |b| Block {
                    offset: i * self.n + b.offset,
                    action: b.action.clone(),
                })
            })
            .collect();
        BlockAction {
            n: self.n * r,
            blocks,
        }
    }

    pub fn inverse_transpose(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block {
                offset: b.offset,
                action: b.action.inverse_transpose(),
            })
            .collect();
        BlockAction { n: self.n, blocks }
    }

    pub fn matrix(&self) -> BitMatrix {
        let parts: Vec<BitMatrix> = self.blocks.iter().map(|b| b.action.matrix()).collect();
        let refs: Vec<&BitMatrix> = parts.iter().collect();
        BitMatrix::direct_sum(&refs)
    }

    pub fn depth(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.action.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn is_permutation(&self) -> bool {
        self.blocks.iter().all(|b| b.action.is_permutation())
    }

    fn check(&self) -> Result<()> {
        let mut next = 0;
        for b in &self.blocks {
            if b.offset != next {
                return Err(Error::Invalid(format!(
                    "block at {} leaves a gap after {next}",
                    b.offset
                )));
            }
            next += b.action.len();
        }
        if next != self.n {
            return Err(Error::Invalid(format!(
                "blocks cover {next} of {} indices",
                self.n
            )));
        }
        Ok(())
    }

    /// Blocks regrouped by the sector holding them.
    pub fn by_sector<'a>(&'a self, layout: &'a SectorLayout) -> Vec<(&'a str, Vec<&'a Block>)> {
        layout
            .sectors
            .iter()
            .map(|s| {
                (
                    s.name.as_str(),
                    self.blocks
                        .iter()
                        .filter(|b| s.range().contains(&b.offset))
                        .collect(),
                )
            })
            .collect()
    }
}

/// Logical X and Z actions: `G_X·U ≡ x·G_X (mod rs H_X)` and
/// `G_Z·U^{-T} ≡ z·G_Z (mod rs H_Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalAction {
    pub x: BitMatrix,
    pub z: BitMatrix,
}

/// Coefficients of each row of `targets` over `basis`, modulo `rs(stab)`.
fn express_mod(stab: &BitMatrix, basis: &BitMatrix, targets: &BitMatrix) -> Result<BitMatrix> {
    let (s, k) = (stab.rows(), basis.rows());
    let mut red = Reducer::new(stab.cols(), s + k);
    for i in 0..s {
        red.insert(&stab.row(i));
    }
    for i in 0..k {
        red.insert(&basis.row(i));
    }
    let mut out = BitMatrix::zeros(targets.rows(), k);
    for t in 0..targets.rows() {
        let (res, comb) = red.reduce(&targets.row(t));
        if !res.is_zero() {
            return Err(Error::Verification(format!(
                "transformed logical row {t} leaves the code"
            )));
        }
        for j in 0..k {
            if comb.get(s + j) {
                out.set(t, j, true);
            }
        }
    }
    Ok(out)
}

/// The action of `u` on the logical basis.
pub fn logical_action(
    u: &BitMatrix,
    code: &CssCode,
    basis: &LogicalBasis,
) -> Result<LogicalAction> {
    let u_it = u
        .inverse()
        .ok_or_else(|| Error::Verification("U is singular".into()))?
        .transpose();
    let x = express_mod(code.hx(), &basis.gx, &basis.gx.mul(u))?;
    let z = express_mod(code.hz(), &basis.gz, &basis.gz.mul(&u_it))?;
    Ok(LogicalAction { x, z })
}

/// A verified gadget on a specific code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub u: BlockAction,
    pub w: BlockAction,
    pub w_prime: BlockAction,
    /// Logical X action over the code's attached basis.
    pub v_bar: BitMatrix,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub n: usize,
    pub depth: usize,
    pub permutation: bool,
    pub v_bar: BitMatrix,
}

/// Checks both identities for dense matrices and returns the logical action.
pub fn verify_matrices(
    code: &CssCode,
    u: &BitMatrix,
    w: &BitMatrix,
    w_prime: &BitMatrix,
) -> Result<LogicalAction> {
    let n = code.n();
    if u.shape() != (n, n) || w.shape() != (code.hx().rows(), code.hx().rows()) {
        return Err(Error::Dimension(
            "gadget shape does not match the code".into(),
        ));
    }
    if w_prime.shape() != (code.hz().rows(), code.hz().rows()) {
        return Err(Error::Dimension("W' shape does not match the code".into()));
    }
    let u_it = u
        .inverse()
        .ok_or_else(|| Error::Verification("U is singular".into()))?
        .transpose();
    let (lhs, rhs) = (code.hx().mul(u), w.mul(code.hx()));
    if let Some(r) = first_diff(&lhs, &rhs) {
        return Err(Error::Verification(format!("H_X·U ≠ W·H_X at row {r}")));
    }
    let (lhs, rhs) = (code.hz().mul(&u_it), w_prime.mul(code.hz()));
    if let Some(r) = first_diff(&lhs, &rhs) {
        return Err(Error::Verification(format!("H_Z·U^-T ≠ W'·H_Z at row {r}")));
    }
    let action = logical_action(u, code, &code.logical_basis())?;
    if !action.x.mul(&action.z.transpose()).is_identity() {
        return Err(Error::Verification(
            "logical action is not symplectic".into(),
        ));
    }
    Ok(action)
}

fn first_diff(a: &BitMatrix, b: &BitMatrix) -> Option<usize> {
    (0..a.rows()).find(|&r| a.row(r) != b.row(r))
}

impl Gadget {
    fn build(
        code: &CssCode,
        u: BlockAction,
        w: BlockAction,
        w_prime: BlockAction,
        provenance: String,
    ) -> Result<Gadget> {
        for a in [&u, &w, &w_prime] {
            a.check()?;
        }
        let action = verify_matrices(code, &u.matrix(), &w.matrix(), &w_prime.matrix())?;
        Ok(Gadget {
            u,
            w,
            w_prime,
            v_bar: action.x,
            provenance,
        })
    }

    pub fn depth(&self) -> usize {
        self.u.depth()
    }

    /// True when `U`, `W` and `W'` are all permutations, i.e. the gadget is
    /// a Tanner graph automorphism of the code.
    pub fn is_permutation(&self) -> bool {
        self.u.is_permutation() && self.w.is_permutation() && self.w_prime.is_permutation()
    }

    /// Logical action restricted to the kept logicals of `record`.
    pub fn kept_action(&self, record: &ProductRecord) -> BitMatrix {
        let idx = record.kept_indices();
        self.v_bar.select_rows(&idx).select_columns(&idx)
    }

    pub fn summary(&self, layout: &SectorLayout) -> GadgetSummary {
        let blocks = self
            .u
            .by_sector(layout)
            .into_iter()
            .flat_map(|(name, bs)| {
                bs.into_iter().map(move |b| BlockSummary {
                    sector: name.to_string(),
                    offset: b.offset,
                    len: b.action.len(),
                    cycles: match &b.action {
                        Action::Permutation(p) => Some(p.to_cycle_string()),
                        Action::Circuit(_) => None,
                    },
                    steps: match &b.action {
                        Action::Permutation(_) => None,
                        Action::Circuit(c) => Some(c.steps.clone()),
                    },
                    depth: b.action.depth(),
                })
            })
            .collect();
        GadgetSummary {
            provenance: self.provenance.clone(),
            blocks,
            v_bar: self.v_bar.to_f2m(),
            depth: self.depth(),
            permutation: self.is_permutation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSummary {
    pub provenance: String,
    pub blocks: Vec<BlockSummary>,
    pub v_bar: String,
    pub depth: usize,
    pub permutation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub sector: String,
    pub offset: usize,
    pub len: usize,
    pub cycles: Option<String>,
    pub steps: Option<Vec<Step>>,
    pub depth: usize,
}

/// Rechecks a gadget from scratch on `code`.
pub fn verify(g: &Gadget, code: &CssCode) -> Result<GadgetReport> {
    for a in [&g.u, &g.w, &g.w_prime] {
        a.check()?;
    }
    let action = verify_matrices(code, &g.u.matrix(), &g.w.matrix(), &g.w_prime.matrix())?;
    if action.x != g.v_bar {
        return Err(Error::Verification(
            "stored logical action differs from the recomputed one".into(),
        ));
    }
    Ok(GadgetReport {
        n: code.n(),
        depth: g.depth(),
        permutation: g.is_permutation(),
        v_bar: action.x,
    })
}

/// Verifies a batch of gadgets in parallel.
pub fn verify_all(gadgets: &[Gadget], code: &CssCode) -> Vec<Result<GadgetReport>> {
    gadgets.par_iter().map(|g| verify(g, code)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    First,
    Second,
}

/// Checks `w·H = H·σ` and swaps in the permutation `W` of a Tanner
/// automorphism when the supplied `w` is not one.
fn normalize(code: &ClassicalCode, aut: &CodeAutomorphism) -> Result<(Permutation, BitMatrix)> {
    let h = code.h();
    if aut.sigma.len() != code.n() {
        return Err(Error::Dimension(format!(
            "automorphism on {} bits, code has {}",
            aut.sigma.len(),
            code.n()
        )));
    }
    let hs = aut.sigma.permute_columns(h);
    if aut.w.shape() != (h.rows(), h.rows()) || aut.w.mul(h) != hs {
        return Err(Error::Verification(
            "w·h ≠ h·σ for the supplied automorphism".into(),
        ));
    }
    if !aut.w.is_permutation() {
        if let Some(p) = tanner_check_permutation(code, &aut.sigma) {
            return Ok((aut.sigma.clone(), p.as_matrix()));
        }
    }
    Ok((aut.sigma.clone(), aut.w.clone()))
}

fn perm_action(p: &Permutation) -> BlockAction {
    BlockAction::single(Action::Permutation(p.clone()))
}

/// `U1 = (σ⊗I) ⊕ (w⊗I)` or `U2 = (I⊗σ) ⊕ (I⊗w^{-T})` on a hypergraph product.
pub fn lift_hgp(p: &ProductRecord, which: Which, aut: &CodeAutomorphism) -> Result<Gadget> {
    let Factors::Hgp(c1, c2) = &p.factors else {
        return Err(Error::Invalid(
            "lift_hgp needs a hypergraph product record".into(),
        ));
    };
    let ((m1, n1), (m2, n2)) = (c1.h().shape(), c2.h().shape());
    let code = if which == Which::First { c1 } else { c2 };
    let (sigma, w) = normalize(code, aut)?;
    let (s, wa) = (perm_action(&sigma), BlockAction::from_matrix(&w)?);
    let (u, wx, wz) = match which {
        Which::First => (
            BlockAction::direct_sum(&[s.kron_right(n2), wa.kron_right(m2)]),
            wa.kron_right(n2),
            s.kron_right(m2),
        ),
        Which::Second => (
            BlockAction::direct_sum(&[s.kron_left(n1), wa.inverse_transpose().kron_left(m1)]),
            s.kron_left(m1),
            wa.kron_left(n1),
        ),
    };
    let provenance = format!("hgp {which:?} σ={}", sigma.to_cycle_string()).to_lowercase();
    Gadget::build(&p.result, u, wx, wz, provenance)
}

/// A right-sector gadget: `aut` belongs to the transpose of the chosen
/// input code. The gadget is built on the transpose product and carried
/// back by exchanging X with Z and the two sectors.
pub fn lift_hgp_right(p: &ProductRecord, which: Which, aut: &CodeAutomorphism) -> Result<Gadget> {
    let Factors::Hgp(c1, c2) = &p.factors else {
        return Err(Error::Invalid(
            "lift_hgp_right needs a hypergraph product record".into(),
        ));
    };
    let t = hgp(&c1.transpose_code(), &c2.transpose_code())?;
    let gt = lift_hgp(&t, which, aut)?;
    let split = c1.m() * c2.m();
    let nl = c1.n() * c2.n();
    let inv = gt.u.inverse_transpose();
    let mut blocks: Vec<Block> = inv
        .blocks
        .into_iter()
        .map(|b| Block {
            offset: if b.offset < split {
                b.offset + nl
            } else {
                b.offset - split
            },
            action: b.action,
        })
        .collect();
    blocks.sort_by_key(|b| b.offset);
    let u = BlockAction { n: inv.n, blocks };
    Gadget::build(
        &p.result,
        u,
        gt.w_prime,
        gt.w,
        format!("{} (right sector)", gt.provenance),
    )
}

/// Input to a quantum × classical lift.
#[derive(Clone, Copy, Debug)]
pub enum QcInput<'a> {
    Classical(&'a CodeAutomorphism),
    Quantum(&'a Gadget),
}

/// `Ũ_c = (I⊗σ) ⊕ (I⊗w^{-T})` or `Ũ_Q = (U⊗I) ⊕ (W⊗I)`.
pub fn lift_qc(p: &ProductRecord, input: QcInput<'_>) -> Result<Gadget> {
    let Factors::Qc(q, c) = &p.factors else {
        return Err(Error::Invalid(
            "lift_qc needs a quantum × classical record".into(),
        ));
    };
    let ((mx, nq), mz) = (q.hx().shape(), q.hz().rows());
    let (mc, nc) = c.h().shape();
    match input {
        QcInput::Classical(aut) => {
            let (sigma, w) = normalize(c, aut)?;
            let (s, wa) = (perm_action(&sigma), BlockAction::from_matrix(&w)?);
            let u =
                BlockAction::direct_sum(&[s.kron_left(nq), wa.inverse_transpose().kron_left(mx)]);
            let wx = s.kron_left(mx);
            let wz = BlockAction::direct_sum(&[s.kron_left(mz), wa.kron_left(nq)]);
            let provenance = format!("qc classical σ={}", sigma.to_cycle_string());
            Gadget::build(&p.result, u, wx, wz, provenance)
        }
        QcInput::Quantum(g) => {
            verify(g, q)?;
            let u = BlockAction::direct_sum(&[g.u.kron_right(nc), g.w.kron_right(mc)]);
            let wx = g.w.kron_right(nc);
            let wz = BlockAction::direct_sum(&[
                g.w_prime.kron_right(nc),
                g.u.inverse_transpose().kron_right(mc),
            ]);
            Gadget::build(
                &p.result,
                u,
                wx,
                wz,
                format!("qc quantum [{}]", g.provenance),
            )
        }
    }
}

/// `Ũ1 = (W'^{-T}⊗I) ⊕ (U⊗I) ⊕ (W⊗I)` or
/// `Ũ2 = (I⊗W) ⊕ (I⊗U) ⊕ (I⊗W'^{-T})`.
pub fn lift_qq(p: &ProductRecord, which: Which, g: &Gadget) -> Result<Gadget> {
    let Factors::Qq(q1, q2) = &p.factors else {
        return Err(Error::Invalid(
            "lift_qq needs a quantum × quantum record".into(),
        ));
    };
    let ((mx, n), mz) = (q1.hx().shape(), q1.hz().rows());
    let ((mx2, n2), mz2) = (q2.hx().shape(), q2.hz().rows());
    let (u, wx, wz) = match which {
        Which::First => {
            verify(g, q1)?;
            (
                BlockAction::direct_sum(&[
                    g.w_prime.inverse_transpose().kron_right(mx2),
                    g.u.kron_right(n2),
                    g.w.kron_right(mz2),
                ]),
                BlockAction::direct_sum(&[g.u.kron_right(mx2), g.w.kron_right(n2)]),
                BlockAction::direct_sum(&[
                    g.w_prime.kron_right(n2),
                    g.u.inverse_transpose().kron_right(mz2),
                ]),
            )
        }
        Which::Second => {
            verify(g, q2)?;
            (
                BlockAction::direct_sum(&[
                    g.w.kron_left(mz),
                    g.u.kron_left(n),
                    g.w_prime.inverse_transpose().kron_left(mx),
                ]),
                BlockAction::direct_sum(&[g.w.kron_left(n), g.u.kron_left(mx)]),
                BlockAction::direct_sum(&[
                    g.u.inverse_transpose().kron_left(mz),
                    g.w_prime.kron_left(n),
                ]),
            )
        }
    };
    let provenance = format!("qq {which:?} [{}]", g.provenance).to_lowercase();
    Gadget::build(&p.result, u, wx, wz, provenance)
}

/// Order of the group generated by invertible matrices, or an error once
/// it exceeds `cap`.
pub fn closure_order(gens: &[BitMatrix], cap: usize) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Ok(1);
    };
    let id = BitMatrix::identity(first.rows());
    let mut seen: HashSet<BitMatrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = m.mul(g);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(format!("group order exceeds {cap}")));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorph::{check_automorphism, enumerate_automorphisms, DEFAULT_N_CAP};
    use crate::classical::{hamming, repetition};
    use crate::fixtures::k4;
    use crate::products::{homprod_qc, homprod_qq};
    use proptest::prelude::*;

    fn aut(c: &ClassicalCode, cycles: &str) -> CodeAutomorphism {
        let s = Permutation::parse_cycles(cycles, c.n()).unwrap();
        check_automorphism(c, &s).unwrap().unwrap()
    }

    fn k4_hgp() -> ProductRecord {
        hgp(&k4(), &k4()).unwrap()
    }

    /// Non-Tanner automorphism of the Hamming code: W is not a permutation.
    fn hamming_circuit_aut() -> (ClassicalCode, CodeAutomorphism) {
        let c = hamming(3).unwrap();
        let group = enumerate_automorphisms(&c, DEFAULT_N_CAP).unwrap();
        let a = group
            .elements
            .into_iter()
            .find(|a| !a.w.is_permutation())
            .unwrap();
        (c, a)
    }

    #[test]
    fn identity_lifts_to_identity() {
        let p = k4_hgp();
        let id = aut(&k4(), "()");
        for which in [Which::First, Which::Second] {
            let g = lift_hgp(&p, which, &id).unwrap();
            assert!(g.u.matrix().is_identity());
            assert!(g.v_bar.is_identity());
        }
    }

    #[test]
    fn first_factor_swaps_logical_grid_rows() {
        let p = k4_hgp();
        let g = lift_hgp(&p, Which::First, &aut(&k4(), "(15)(34)")).unwrap();
        let kept = g.kept_action(&p.clone().with_gauge(&["R"]).unwrap());
        // rows 0 and 1 of the 3×3 grid exchanged, row 2 fixed
        let swap = Permutation::parse_cycles("(12)", 3).unwrap().as_matrix();
        assert_eq!(kept, swap.kron(&BitMatrix::identity(3)));
        assert!(g.is_permutation());
    }

    #[test]
    fn hgp_logical_actions_follow_the_classical_data() {
        let p = k4_hgp();
        let c = k4();
        for cycles in ["(15)(34)", "(24)(56)", "(25)(46)"] {
            let a = aut(&c, cycles);
            let idx = p.kept_indices();
            let g1 = lift_hgp(&p, Which::First, &a).unwrap();
            let g2 = lift_hgp(&p, Which::Second, &a).unwrap();
            let inv_t = a.v.inverse().unwrap().transpose();
            let (l1, l2) = (
                g1.v_bar.select_rows(&idx[..9]).select_columns(&idx[..9]),
                g2.v_bar.select_rows(&idx[..9]).select_columns(&idx[..9]),
            );
            assert_eq!(l1, inv_t.kron(&BitMatrix::identity(3)));
            assert_eq!(l2, BitMatrix::identity(3).kron(&a.v));
            // the right logical is untouched
            for g in [&g1, &g2] {
                assert_eq!(g.v_bar.row(9), crate::f2core::BitVec::unit(10, 9));
                assert_eq!(g.v_bar.col(9), crate::f2core::BitVec::unit(10, 9));
            }
            assert_eq!(g1.v_bar.mul(&g2.v_bar), g2.v_bar.mul(&g1.v_bar));
        }
    }

    #[test]
    fn k4_hgp_logical_group_has_order_576() {
        let p = k4_hgp();
        let c = k4();
        let gens: Vec<BitMatrix> = ["(15)(34)", "(24)(56)", "(25)(46)"]
            .iter()
            .flat_map(|s| {
                let a = aut(&c, s);
                [
                    lift_hgp(&p, Which::First, &a).unwrap().v_bar,
                    lift_hgp(&p, Which::Second, &a).unwrap().v_bar,
                ]
            })
            .collect();
        assert_eq!(closure_order(&gens, 10_000).unwrap(), 576);
    }

    #[test]
    fn distinct_gadget_count_is_product_of_group_orders() {
        let p = k4_hgp();
        let group = enumerate_automorphisms(&k4(), DEFAULT_N_CAP).unwrap();
        let v1: Vec<BitMatrix> = group
            .elements
            .iter()
            .map(|a| lift_hgp(&p, Which::First, a).unwrap().v_bar)
            .collect();
        let v2: Vec<BitMatrix> = group
            .elements
            .iter()
            .map(|a| lift_hgp(&p, Which::Second, a).unwrap().v_bar)
            .collect();
        let products: HashSet<BitMatrix> = v1
            .iter()
            .flat_map(|a| v2.iter().map(move |b| a.mul(b)))
            .collect();
        assert_eq!(products.len(), 24 * 24);
    }

    #[test]
    fn v_k4_has_depth_one_and_w_is_a_permutation() {
        let a = aut(&k4(), "(25)(46)");
        assert_eq!(a.v, BitMatrix::from_strs(&["111", "010", "001"]).unwrap());
        let c = decompose(&a.v).unwrap();
        assert_eq!((c.steps.len(), c.depth), (2, 1));
        let (_, w) = normalize(&k4(), &a).unwrap();
        assert!(w.is_permutation());
    }

    #[test]
    fn transpose_hgp_sectors_act_independently() {
        let c = k4();
        let ct = c.transpose_code();
        let p = hgp(&c, &ct).unwrap();
        let a = aut(&c, "(15)(34)");
        let g = lift_hgp(&p, Which::First, &a).unwrap();
        let r = p.logical_ranges();
        let (l, rr) = (
            r[0].1.clone().collect::<Vec<_>>(),
            r[1].1.clone().collect::<Vec<_>>(),
        );
        assert!(g.v_bar.select_rows(&rr).select_columns(&rr).is_identity());
        assert!(!g.v_bar.select_rows(&l).select_columns(&l).is_identity());
        // a right-sector gadget from the transpose of the second input (K4 again)
        let g2 = lift_hgp_right(&p, Which::Second, &a).unwrap();
        assert!(g2.v_bar.select_rows(&l).select_columns(&l).is_identity());
        assert!(!g2.v_bar.select_rows(&rr).select_columns(&rr).is_identity());
        assert!(g2.is_permutation());
        verify(&g2, &p.result).unwrap();
    }

    #[test]
    fn circuit_gadgets_on_hamming_products() {
        let (c, a) = hamming_circuit_aut();
        let p = hgp(&c, &c).unwrap();
        let g = lift_hgp(&p, Which::First, &a).unwrap();
        assert!(!g.is_permutation());
        assert_eq!(g.depth(), decompose(&a.w).unwrap().depth);
        let g2 = lift_hgp(&p, Which::Second, &a).unwrap();
        assert_eq!(g.v_bar.mul(&g2.v_bar), g2.v_bar.mul(&g.v_bar));
        let q = homprod_qc(&p.result, &repetition(3).unwrap()).unwrap();
        let lifted = lift_qc(&q, QcInput::Quantum(&g)).unwrap();
        assert_eq!(lifted.depth(), g.depth());
        let k = p.result.num_logicals();
        assert_eq!(
            lifted
                .v_bar
                .select_rows(&(0..k).collect::<Vec<_>>())
                .select_columns(&(0..k).collect::<Vec<_>>()),
            g.v_bar
        );
    }

    #[test]
    fn corrupted_u_is_rejected() {
        let p = k4_hgp();
        let g = lift_hgp(&p, Which::First, &aut(&k4(), "(25)(46)")).unwrap();
        let mut u = g.u.matrix();
        u.set(40, 3, !u.get(40, 3));
        let err = verify_matrices(&p.result, &u, &g.w.matrix(), &g.w_prime.matrix()).unwrap_err();
        assert!(matches!(err, Error::Verification(_)));
    }

    #[test]
    fn foreign_automorphism_is_rejected() {
        let p = k4_hgp();
        let bad = CodeAutomorphism {
            sigma: Permutation::parse_cycles("(12)", 6).unwrap(),
            w: BitMatrix::identity(4),
            v: BitMatrix::identity(3),
        };
        assert!(lift_hgp(&p, Which::First, &bad).is_err());
        let q = homprod_qc(&p.result, &repetition(3).unwrap()).unwrap();
        assert!(lift_hgp(&q, Which::First, &aut(&k4(), "()")).is_err());
    }

    #[test]
    fn qc_lifts_on_the_288_code() {
        let c = k4();
        let ct = c.transpose_code();
        let base = hgp(&c, &ct).unwrap();
        let p = homprod_qc(&base.result, &ct).unwrap();
        let group = enumerate_automorphisms(&ct, DEFAULT_N_CAP).unwrap();
        let a = group
            .elements
            .iter()
            .find(|a| a.sigma.images() == [1, 0, 2, 3])
            .unwrap();
        let gc = lift_qc(&p, QcInput::Classical(a)).unwrap();
        assert!(gc.is_permutation());
        let g1 = lift_hgp(&base, Which::First, &aut(&c, "(15)(34)")).unwrap();
        let gq = lift_qc(&p, QcInput::Quantum(&g1)).unwrap();
        assert!(gq.is_permutation());
        assert_eq!(gc.v_bar.mul(&gq.v_bar), gq.v_bar.mul(&gc.v_bar));
        let id = lift_qc(
            &p,
            QcInput::Classical(
                &check_automorphism(&ct, &Permutation::identity(4))
                    .unwrap()
                    .unwrap(),
            ),
        )
        .unwrap();
        assert!(id.v_bar.is_identity());
        // the repetition code has one logical, so classical gadgets fix the kept logicals
        let kept = p.kept_indices();
        assert!(gc
            .v_bar
            .select_rows(&kept)
            .select_columns(&kept)
            .is_identity());
        let k = base.result.num_logicals();
        assert_eq!(
            gq.kept_action(&p),
            g1.v_bar
                .select_rows(&(0..k).collect::<Vec<_>>())
                .select_columns(&(0..k).collect::<Vec<_>>())
        );
    }

    #[test]
    fn qq_lifts_commute_and_stay_permutations() {
        let r = repetition(3).unwrap();
        let base = hgp(&r, &r).unwrap();
        let p = homprod_qq(&base.result, &base.result).unwrap();
        let flip = aut(&r, "(13)");
        let g = lift_hgp(&base, Which::First, &flip).unwrap();
        assert!(g.is_permutation());
        let g1 = lift_qq(&p, Which::First, &g).unwrap();
        let g2 = lift_qq(&p, Which::Second, &g).unwrap();
        assert!(g1.is_permutation() && g2.is_permutation());
        assert_eq!(g1.v_bar.mul(&g2.v_bar), g2.v_bar.mul(&g1.v_bar));
        let id = lift_hgp(&base, Which::First, &aut(&r, "()")).unwrap();
        assert!(lift_qq(&p, Which::First, &id)
            .unwrap()
            .u
            .matrix()
            .is_identity());
    }

    #[test]
    fn qq_lift_of_circuit_gadget_keeps_depth() {
        let (c, a) = hamming_circuit_aut();
        let base = hgp(&c, &repetition(2).unwrap()).unwrap();
        let g = lift_hgp(&base, Which::First, &a).unwrap();
        let small = hgp(&repetition(2).unwrap(), &repetition(2).unwrap()).unwrap();
        let p = homprod_qq(&base.result, &small.result).unwrap();
        let lifted = lift_qq(&p, Which::First, &g).unwrap();
        assert_eq!(lifted.depth(), g.depth());
        let mid = p
            .logical_ranges()
            .into_iter()
            .find(|(s, _)| s == "M")
            .unwrap()
            .1
            .collect::<Vec<_>>();
        let kq = base.result.num_logicals();
        assert_eq!(
            lifted.v_bar.select_rows(&mid).select_columns(&mid),
            g.v_bar
                .select_rows(&(0..kq).collect::<Vec<_>>())
                .select_columns(&(0..kq).collect::<Vec<_>>())
        );
    }

    #[test]
    fn summary_lists_sector_blocks() {
        let p = k4_hgp();
        let g = lift_hgp(&p, Which::First, &aut(&k4(), "(15)(34)")).unwrap();
        let s = g.summary(p.result.layout());
        assert_eq!(
            s.blocks
                .iter()
                .map(|b| b.sector.as_str())
                .collect::<Vec<_>>(),
            vec!["L", "R"]
        );
        assert!(s.permutation);
        assert_eq!(s.v_bar, g.v_bar.to_f2m());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn tanner_lifts_twice_stay_permutations(i in 0usize..24) {
            let c = k4();
            let group = enumerate_automorphisms(&c, DEFAULT_N_CAP).unwrap();
            let base = hgp(&c, &c.transpose_code()).unwrap();
            let g = lift_hgp(&base, Which::First, &group.elements[i]).unwrap();
            prop_assert!(g.is_permutation());
            let p = homprod_qc(&base.result, &c.transpose_code()).unwrap();
            let lifted = lift_qc(&p, QcInput::Quantum(&g)).unwrap();
            prop_assert!(lifted.is_permutation());
            let left: Vec<usize> = (0..6).collect();
            prop_assert_eq!(lifted.v_bar.select_rows(&left).select_columns(&left), g.v_bar);
        }
    }
}
