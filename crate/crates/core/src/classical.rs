//! Classical binary linear codes and the construction families used as
//! product inputs.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, BitVec, Permutation};
use crate::graphs::SimpleGraph;
use crate::search::{bounded_min, min_in_span};

/// Codes with at most this many logical bits get an exact distance by enumeration.
pub const ENUMERATION_K: usize = 24;
/// Default weight cap for bounded distance search.
pub const DEFAULT_WEIGHT_CAP: usize = 6;

/// Minimum distance, possibly only bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Distance {
    Exact(usize),
    AtLeast(usize),
    /// The space has no nonzero vectors.
    Undefined,
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            _ => None,
        }
    }

    /// Best known lower bound.
    pub fn lower(self) -> Option<usize> {
        match self {
            Distance::Exact(d) | Distance::AtLeast(d) => Some(d),
            Distance::Undefined => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::AtLeast(d) => write!(f, ">={d}"),
            Distance::Undefined => f.write_str("-"),
        }
    }
}

/// A binary linear code `ker H` with a chosen generator matrix.
///
/// The generator defaults to the reduced row echelon form of the kernel,
/// which is `(I | A)` up to column order. A custom generator (and one for
/// the transpose code) can be attached where a fixed logical labelling is
/// wanted.
#[derive(Clone, Debug)]
pub struct ClassicalCode {
    h: BitMatrix,
    g: BitMatrix,
    gt: Option<BitMatrix>,
    d: OnceLock<Distance>,
    d_dual: OnceLock<Distance>,
}

impl PartialEq for ClassicalCode {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.g == other.g
    }
}

impl Eq for ClassicalCode {}

fn default_generator(h: &BitMatrix) -> BitMatrix {
    h.kernel_basis().rref().matrix
}

impl ClassicalCode {
    pub fn from_parity_check(h: BitMatrix) -> Self {
        let g = default_generator(&h);
        ClassicalCode {
            h,
            g,
            gt: None,
            d: OnceLock::new(),
            d_dual: OnceLock::new(),
        }
    }

    /// Attaches a custom generator; its rows must form a basis of `ker H`.
    pub fn with_generator(h: BitMatrix, g: BitMatrix) -> Result<Self> {
        check_generator(&h, &g)?;
        Ok(ClassicalCode {
            h,
            g,
            gt: None,
            d: OnceLock::new(),
            d_dual: OnceLock::new(),
        })
    }

    /// Also fixes the generator used by `transpose_code`.
    pub fn with_generators(h: BitMatrix, g: BitMatrix, gt: BitMatrix) -> Result<Self> {
        check_generator(&h, &g)?;
        check_generator(&h.transpose(), &gt)?;
        Ok(ClassicalCode {
            h,
            g,
            gt: Some(gt),
            d: OnceLock::new(),
            d_dual: OnceLock::new(),
        })
    }

    /// The code spanned by the rows of `gen`. Keeps `gen` as the generator
    /// when its rows are independent.
    pub fn from_generator(gen: &BitMatrix) -> Self {
        let h = gen.kernel_basis();
        let g = if gen.rank() == gen.rows() {
            gen.clone()
        } else {
            gen.rref().matrix
        };
        ClassicalCode {
            h,
            g,
            gt: None,
            d: OnceLock::new(),
            d_dual: OnceLock::new(),
        }
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn g(&self) -> &BitMatrix {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of checks, counting redundant ones.
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn rank_h(&self) -> usize {
        self.n() - self.k()
    }

    /// Dimension of the transpose code `ker Hᵀ`.
    pub fn k_transpose(&self) -> usize {
        self.m() - self.rank_h()
    }

    /// The generator the transpose code will use.
    pub fn g_transpose(&self) -> BitMatrix {
        self.gt
            .clone()
            .unwrap_or_else(|| default_generator(&self.h.transpose()))
    }

    /// The code with parity-check matrix `Hᵀ`.
    pub fn transpose_code(&self) -> ClassicalCode {
        ClassicalCode {
            h: self.h.transpose(),
            g: self.g_transpose(),
            gt: Some(self.g.clone()),
            d: OnceLock::new(),
            d_dual: OnceLock::new(),
        }
    }

    pub fn is_codeword(&self, v: &BitVec) -> bool {
        self.h.mul_vec(v).is_zero()
    }

    /// Minimum distance with the default weight cap, cached.
    pub fn d(&self) -> Distance {
        *self.d.get_or_init(|| self.distance(DEFAULT_WEIGHT_CAP))
    }

    /// Minimum distance of the dual code, cached.
    pub fn d_dual(&self) -> Distance {
        *self.d_dual.get_or_init(|| self.dual_distance())
    }

    /// Exact by enumeration when `k ≤ 24`, otherwise by supports of weight
    /// up to `weight_cap`, giving `AtLeast(weight_cap + 1)` if none is found.
    pub fn distance(&self, weight_cap: usize) -> Distance {
        span_distance(&self.g, &self.h, weight_cap)
    }

    /// Distance of the row space of `H`.
    pub fn dual_distance(&self) -> Distance {
        let dual_gen = self.h.rref().matrix;
        span_distance(&dual_gen, &self.g, DEFAULT_WEIGHT_CAP)
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n(),
            k: self.k(),
            d: self.d(),
            d_dual: self.d_dual(),
        }
    }
}

fn check_generator(h: &BitMatrix, g: &BitMatrix) -> Result<()> {
    if g.cols() != h.cols() {
        return Err(Error::Dimension(format!(
            "generator has {} columns, H has {}",
            g.cols(),
            h.cols()
        )));
    }
    if !h.mul(&g.transpose()).is_zero() {
        return Err(Error::Invalid("generator rows are not codewords".into()));
    }
    let k = h.cols() - h.rank();
    if g.rows() != k || g.rank() != k {
        return Err(Error::Invalid(format!(
            "generator must have {k} independent rows"
        )));
    }
    Ok(())
}

/// Distance of the span of independent rows `gen`, whose dual is `check`.
fn span_distance(gen: &BitMatrix, check: &BitMatrix, cap: usize) -> Distance {
    let k = gen.rows();
    if k == 0 {
        return Distance::Undefined;
    }
    if k <= ENUMERATION_K {
        let tags: Vec<u64> = (0..k).map(|i| 1u64 << i).collect();
        let best = min_in_span(&gen.row_vecs(), &tags, None).expect("nonempty span");
        return Distance::Exact(best.weight);
    }
    match bounded_min(check, None, cap) {
        Some(v) => Distance::Exact(v.weight()),
        None => Distance::AtLeast(cap + 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: Distance,
    pub d_dual: Distance,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.n, self.k, self.d)
    }
}

/// Repetition code of length `n` with the full-rank chain of checks `e_i + e_{i+1}`.
pub fn repetition(n: usize) -> Result<ClassicalCode> {
    if n == 0 {
        return Err(Error::Invalid("repetition code needs n >= 1".into()));
    }
    let h = BitMatrix::from_fn(n - 1, n, |i, j| j == i || j == i + 1);
    Ok(ClassicalCode::from_parity_check(h))
}

/// Cycle code of a connected graph: bits on edges, checks on vertices.
pub fn cycle_code(g: &SimpleGraph) -> Result<ClassicalCode> {
    if !g.is_connected() {
        return Err(Error::Invalid("cycle codes need a connected graph".into()));
    }
    Ok(ClassicalCode::from_parity_check(g.incidence_matrix()))
}

/// Hamming code in systematic form: the columns of `H` are all nonzero
/// `r`-bit strings, the unit vectors first and the rest by weight, then by
/// value with row 0 as the least significant bit.
pub fn hamming(r: usize) -> Result<ClassicalCode> {
    if r < 2 {
        return Err(Error::Invalid(format!("hamming needs r >= 2, got {r}")));
    }
    let mut cols: Vec<usize> = (1..1usize << r).collect();
    cols.sort_by_key(|&c| (c.count_ones() > 1, c.count_ones(), c));
    let h = BitMatrix::from_fn(r, cols.len(), |i, j| cols[j] >> i & 1 == 1);
    Ok(ClassicalCode::from_parity_check(h))
}

/// Simplex code. Cyclic check matrices `B[1+x+x³]` and `B[1+x+x⁴]` for
/// `r = 3, 4`; otherwise the Hamming check matrix is used as generator.
pub fn simplex(r: usize) -> Result<ClassicalCode> {
    match r {
        3 => group_algebra_code(&GroupAlgebraElement::parse(cyclic_group(7)?, "1+x+x3")?),
        4 => group_algebra_code(&GroupAlgebraElement::parse(cyclic_group(15)?, "1+x+x4")?),
        _ => Ok(ClassicalCode::from_generator(hamming(r)?.h())),
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Variable subsets of size at most `r`, by degree then lexicographically.
fn monomials(r: usize, m: usize) -> Vec<Vec<usize>> {
    fn combos(
        start: usize,
        m: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            cur.push(v);
            combos(v + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 0..=r {
        combos(0, m, deg, &mut Vec::new(), &mut out);
    }
    out
}

/// Evaluation of a monomial at all `2^m` points; `x_1` is the most significant bit.
fn eval_monomial(vars: &[usize], m: usize) -> BitVec {
    let n = 1usize << m;
    let bits: Vec<bool> = (0..n)
        .map(|p| vars.iter().all(|&v| p >> (m - 1 - v) & 1 == 1))
        .collect();
    BitVec::from_bools(&bits)
}

/// Generator rows `Eval(x_S)` for all monomials of degree at most `r`.
pub fn reed_muller_generator(r: usize, m: usize) -> Result<BitMatrix> {
    if r > m {
        return Err(Error::Invalid(format!("RM({r},{m}) needs r <= m")));
    }
    let rows: Vec<BitVec> = monomials(r, m)
        .iter()
        .map(|s| eval_monomial(s, m))
        .collect();
    Ok(BitMatrix::from_rows(&rows, 1 << m))
}

pub fn reed_muller(r: usize, m: usize) -> Result<ClassicalCode> {
    Ok(ClassicalCode::from_generator(&reed_muller_generator(r, m)?))
}

/// Deletes the all-zero evaluation point. For `r = 1` the constant row is
/// dropped too, which leaves the simplex code.
pub fn punctured_rm(r: usize, m: usize) -> Result<ClassicalCode> {
    let g = reed_muller_generator(r, m)?;
    let cols: Vec<usize> = (1..1 << m).collect();
    let mut g = g.select_columns(&cols);
    if r == 1 {
        g = g.select_rows(&(1..g.rows()).collect::<Vec<_>>());
    }
    Ok(ClassicalCode::from_generator(&g))
}

/// Expected `k` of `RM(r, m)`.
pub fn reed_muller_k(r: usize, m: usize) -> usize {
    (0..=r).map(|i| binomial(m, i)).sum()
}

/// Every nonzero dual codeword as a row, `2^{rank H} − 1` rows in binary
/// counting order over the echelon basis of `H`.
pub fn all_dual_codewords_check_matrix(c: &ClassicalCode) -> Result<BitMatrix> {
    let basis = c.h.rref().matrix;
    let r = basis.rows();
    if r > 20 {
        return Err(Error::CapExceeded(format!("dual dimension {r} exceeds 20")));
    }
    let rows: Vec<BitVec> = (1u64..1 << r)
        .map(|mask| {
            let mut v = BitVec::zeros(c.n());
            for i in 0..r {
                if mask >> i & 1 == 1 {
                    v.xor_assign(&basis.row(i));
                }
            }
            v
        })
        .collect();
    Ok(BitMatrix::from_rows(&rows, c.n()))
}

/// A finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    labels: Vec<String>,
    /// Named generators, e.g. `x` or `r`, `s`.
    generators: Vec<(char, usize)>,
}

impl FiniteGroup {
    fn new(
        name: String,
        cayley: Vec<Vec<usize>>,
        labels: Vec<String>,
        generators: Vec<(char, usize)>,
    ) -> Result<Self> {
        let n = cayley.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::Invalid("Cayley table has no identity".into()))?;
        for (i, r) in cayley.iter().enumerate() {
            let mut row = r.clone();
            let mut col: Vec<usize> = (0..n).map(|j| cayley[j][i]).collect();
            row.sort_unstable();
            col.sort_unstable();
            if row != (0..n).collect::<Vec<_>>() || col != (0..n).collect::<Vec<_>>() {
                return Err(Error::Invalid("Cayley table is not a Latin square".into()));
            }
        }
        if n <= 24 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                            return Err(Error::Invalid("Cayley table is not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name,
            cayley,
            identity,
            labels,
            generators,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.cayley[a][b] == self.identity)
            .expect("group elements are invertible")
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inverse(a) } else { a };
        (0..e.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.cayley[a][b] == self.cayley[b][a]))
    }

    pub fn generator(&self, name: char) -> Option<usize> {
        self.generators
            .iter()
            .find(|(c, _)| *c == name)
            .map(|&(_, g)| g)
    }

    pub fn generator_elements(&self) -> Vec<usize> {
        self.generators.iter().map(|&(_, g)| g).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Elements `x^0, …, x^{n−1}`.
pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Invalid("cyclic group needs n >= 1".into()));
    }
    let cayley = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    let labels = (0..n)
        .map(|i| {
            if i == 0 {
                "1".to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect();
    FiniteGroup::new(format!("Z{n}"), cayley, labels, vec![('x', 1 % n)])
}

/// Order `2ℓ` with `r^ℓ = s² = (rs)² = 1`. Element `i < ℓ` is `r^i` and
/// element `ℓ + i` is `s·r^i`.
pub fn dihedral_group(ell: usize) -> Result<FiniteGroup> {
    if ell < 3 {
        return Err(Error::Invalid(format!(
            "dihedral group needs ell >= 3, got {ell}"
        )));
    }
    let n = 2 * ell;
    let split = |g: usize| (g / ell, g % ell);
    let cayley = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let ((sa, ia), (sb, ib)) = (split(a), split(b));
                    // s^a r^i s^b r^j = s^{a+b} r^{(-1)^b i + j}
                    let i = if sb == 1 { (ell - ia) % ell } else { ia };
                    ((sa + sb) % 2) * ell + (i + ib) % ell
                })
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|g| {
            let (s, i) = split(g);
            match (s, i) {
                (0, 0) => "1".to_string(),
                (0, i) => format!("r{i}"),
                (_, 0) => "s".to_string(),
                (_, i) => format!("sr{i}"),
            }
        })
        .collect();
    FiniteGroup::new(
        format!("D{ell}"),
        cayley,
        labels,
        vec![('r', 1), ('s', ell)],
    )
}

/// Left: `h ↦ g·h`. Right: `h ↦ h·g`.
pub fn regular_representation(group: &FiniteGroup, elem: usize, side: Side) -> Permutation {
    let images = (0..group.order())
        .map(|h| match side {
            Side::Left => group.mul(elem, h),
            Side::Right => group.mul(h, elem),
        })
        .collect();
    Permutation::from_images(images).expect("Cayley rows are bijections")
}

/// A formal F2-sum of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    pub group: FiniteGroup,
    pub support: Vec<usize>,
}

impl GroupAlgebraElement {
    pub fn new(group: FiniteGroup, support: &[usize]) -> Result<Self> {
        let mut parity = vec![false; group.order()];
        for &g in support {
            if g >= group.order() {
                return Err(Error::Invalid(format!(
                    "element {g} outside group of order {}",
                    group.order()
                )));
            }
            parity[g] ^= true;
        }
        let support = (0..group.order()).filter(|&g| parity[g]).collect();
        Ok(GroupAlgebraElement { group, support })
    }

    /// Parses sums like `1+x+x3`, `1+r^2+r^3+sr^-1`. A term is a product of
    /// generator letters, each with an optional (possibly negative) exponent
    /// written as `x3`, `x^3` or `x^-1`. Repeated terms cancel.
    pub fn parse(group: FiniteGroup, text: &str) -> Result<Self> {
        let mut elems = Vec::new();
        for term in text.split('+').map(str::trim) {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            elems.push(parse_term(&group, term)?);
        }
        Self::new(group, &elems)
    }

    pub fn to_string_labels(&self) -> String {
        self.support
            .iter()
            .map(|&g| self.group.label(g))
            .collect::<Vec<_>>()
            .join("+")
    }
}

fn parse_term(group: &FiniteGroup, term: &str) -> Result<usize> {
    if term == "1" {
        return Ok(group.identity());
    }
    let chars: Vec<char> = term.chars().collect();
    let mut i = 0;
    let mut acc = group.identity();
    while i < chars.len() {
        let c = chars[i];
        let gen = group
            .generator(c)
            .ok_or_else(|| Error::Parse(format!("unknown generator {c:?} in {term:?}")))?;
        i += 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
        }
        let start = i;
        if i < chars.len() && chars[i] == '-' {
            i += 1;
        }
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let digits: String = chars[start..i].iter().collect();
        let e: i64 = if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
        };
        acc = group.mul(acc, group.pow(gen, e));
    }
    Ok(acc)
}

/// `H = L[a]`, the sum of left-regular permutation matrices over the support.
pub fn group_algebra_code(a: &GroupAlgebraElement) -> Result<ClassicalCode> {
    Ok(ClassicalCode::from_parity_check(group_algebra_matrix(a)?))
}

pub fn group_algebra_matrix(a: &GroupAlgebraElement) -> Result<BitMatrix> {
    if a.support.is_empty() {
        return Err(Error::Invalid(
            "group algebra element has empty support".into(),
        ));
    }
    let n = a.group.order();
    Ok(a.support.iter().fold(BitMatrix::zeros(n, n), |acc, &g| {
        acc.add(&regular_representation(&a.group, g, Side::Left).as_matrix())
    }))
}

/// `ℓ×ℓ` circulant `Σ P^e` over the given exponents, where `P` maps `e_i` to `e_{i+1}`.
pub fn circulant(exponents: &[usize], ell: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(ell, ell);
    for &e in exponents {
        let p = BitMatrix::from_fn(ell, ell, |i, j| i == (j + e) % ell);
        m = m.add(&p);
    }
    m
}

/// Shift `ℓ`-lift: block `(i, j)` is the circulant of `H0[i][j]·m_ij`.
/// `shifts[i][j]` lists the exponents of `m_ij`; an empty list is the zero
/// polynomial.
pub fn lifted_code(
    h0: &BitMatrix,
    shifts: &[Vec<Vec<usize>>],
    ell: usize,
) -> Result<ClassicalCode> {
    Ok(ClassicalCode::from_parity_check(lifted_matrix(
        h0, shifts, ell,
    )?))
}

pub fn lifted_matrix(h0: &BitMatrix, shifts: &[Vec<Vec<usize>>], ell: usize) -> Result<BitMatrix> {
    if ell == 0 {
        return Err(Error::Invalid("lift size must be positive".into()));
    }
    if shifts.len() != h0.rows() || shifts.iter().any(|r| r.len() != h0.cols()) {
        return Err(Error::Dimension(
            "shift matrix shape differs from H0".into(),
        ));
    }
    let mut out = BitMatrix::zeros(h0.rows() * ell, h0.cols() * ell);
    for (i, shift_row) in shifts.iter().enumerate() {
        for (j, shift) in shift_row.iter().enumerate() {
            if !h0.get(i, j) {
                continue;
            }
            let block = circulant(shift, ell);
            for a in 0..ell {
                for b in block.row(a).support() {
                    out.set(i * ell + a, j * ell + b, true);
                }
            }
        }
    }
    Ok(out)
}

/// Exponents of a polynomial such as `1+x^2` or `x3`, reduced mod `ell`.
pub fn parse_polynomial(text: &str, ell: usize) -> Result<Vec<usize>> {
    let text = text.trim();
    if text == "0" {
        return Ok(Vec::new());
    }
    let mut parity = vec![false; ell];
    for term in text.split('+').map(str::trim) {
        let e = if term == "1" {
            0
        } else {
            let rest = term
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("bad polynomial term {term:?}")))?;
            let rest = rest.strip_prefix('^').unwrap_or(rest);
            if rest.is_empty() {
                1
            } else {
                rest.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
            }
        };
        parity[e % ell] ^= true;
    }
    Ok((0..ell).filter(|&e| parity[e]).collect())
}

/// Base matrix, exponent sets per entry, and lift size ℓ.
pub type LiftDescription = (BitMatrix, Vec<Vec<Vec<usize>>>, usize);

/// Lift description file:
///
/// ```text
/// ell 4
/// H0
/// 110
/// 101
/// m
/// x 1+x^2 x^3
/// 0 x x^2
/// ```
pub fn parse_lift(text: &str) -> Result<LiftDescription> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let ell: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("ell"))
        .ok_or_else(|| Error::Parse("lift file must start with `ell <n>`".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("ell: {e}")))?;
    if lines.next() != Some("H0") {
        return Err(Error::Parse("expected `H0` section".into()));
    }
    let mut h_rows = Vec::new();
    let mut shifts = Vec::new();
    let mut in_m = false;
    for l in lines {
        if l == "m" {
            in_m = true;
            continue;
        }
        if in_m {
            shifts.push(
                l.split_whitespace()
                    .map(|t| parse_polynomial(t, ell))
                    .collect::<Result<Vec<_>>>()?,
            );
        } else {
            h_rows.push(l);
        }
    }
    let h0 = BitMatrix::from_strs(&h_rows)?;
    Ok((h0, shifts, ell))
}

/// Parses a builder spec: `cycle:<graph>`, `ga:z7:1+x+x3`, `ga:d6:1+r+sr^-1`,
/// `hamming:r`, `simplex:r`, `rm:r,m`, `rm*:r,m`, `rep:n`, `lift:<file>`,
/// or a named fixture (`k4`). A trailing `^T` takes the transpose code.
pub fn from_spec(spec: &str) -> Result<ClassicalCode> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_suffix("^T") {
        return Ok(from_spec(inner)?.transpose_code());
    }
    let bad = |what: &str| Error::Parse(format!("{what} in code spec {spec:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("bad number"));
    let pair = |s: &str| -> Result<(usize, usize)> {
        let (a, b) = s.split_once(',').ok_or_else(|| bad("expected `r,m`"))?;
        Ok((num(a)?, num(b)?))
    };
    if let Some(fixture) = crate::fixtures::by_name(spec) {
        return Ok(fixture);
    }
    let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("missing `:`"))?;
    match kind {
        "cycle" => cycle_code(&SimpleGraph::from_name(rest)?),
        "hamming" => hamming(num(rest)?),
        "simplex" => simplex(num(rest)?),
        "rep" => repetition(num(rest)?),
        "rm" => {
            let (r, m) = pair(rest)?;
            reed_muller(r, m)
        }
        "rm*" => {
            let (r, m) = pair(rest)?;
            punctured_rm(r, m)
        }
        "ga" => {
            let (g, poly) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected `ga:<group>:<poly>`"))?;
            let group = match g.chars().next() {
                Some('z') => cyclic_group(num(&g[1..])?)?,
                Some('d') => dihedral_group(num(&g[1..])?)?,
                _ => return Err(bad("unknown group")),
            };
            group_algebra_code(&GroupAlgebraElement::parse(group, poly)?)
        }
        "lift" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| Error::Invalid(format!("{rest}: {e}")))?;
            let (h0, shifts, ell) = parse_lift(&text)?;
            lifted_code(&h0, &shifts, ell)
        }
        _ => Err(bad("unknown family")),
    }
}
