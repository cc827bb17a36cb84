//! Sector-restricted logical weights and structural effective-distance
//! certificates for product codes.
//!
//! A restricted weight `|v|_S` counts only the qubits in `S`. Minima are taken
//! over every dressed logical that acts nontrivially on the chosen logical
//! qubits, with coordinates outside `S` left free.

use serde::{Deserialize, Serialize};

use crate::classical::Distance;
use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, BitVec};
use crate::gadgets::{verify, Gadget};
use crate::products::{Factors, ProductKind, ProductRecord};
use crate::search::{sector_search, Method};

/// Default weight cap for bounded searches.
pub const DEFAULT_CAP: usize = 9;

/// Name used for the rows of a quantum × classical left sector that come
/// from the quantum input's own left sector.
pub const LAMBDA_L: &str = "ΛL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pauli::X => "X",
            Pauli::Z => "Z",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorWeightReport {
    pub sector: String,
    pub pauli: Pauli,
    /// Minimum restricted weight; `AtLeast` when a bounded search ran out
    /// of cap, `Undefined` when there are no logicals to act on.
    pub achieved: Distance,
    pub method: Method,
    /// A dressed logical attaining `achieved`.
    pub witness: Option<BitVec>,
    /// Lowest restricted weight among the canonical representatives.
    pub canonical: Option<usize>,
}

/// A restricted minimum compared against `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub report: SectorWeightReport,
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    pub holds: bool,
}

impl BoundCheck {
    fn new(report: SectorWeightReport, lower: Option<usize>, upper: Option<usize>) -> Self {
        let holds = match report.achieved {
            Distance::Exact(a) => lower.is_none_or(|l| a >= l) && upper.is_none_or(|u| a <= u),
            Distance::AtLeast(a) => upper.is_none_or(|u| a <= u),
            Distance::Undefined => true,
        };
        BoundCheck {
            report,
            lower,
            upper,
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub entries: Vec<BoundCheck>,
    pub holds: bool,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: &str, entries: Vec<BoundCheck>, notes: Vec<String>) -> Self {
        let holds = entries.iter().all(|e| e.holds);
        CheckReport {
            check: check.into(),
            entries,
            holds,
            notes,
        }
    }
}

/// Minimum `|v|_S` over `v ∈ ker(check)` with `tag·v ≠ 0`, plus how it was found.
fn restricted(
    check: &BitMatrix,
    tag: &BitMatrix,
    support: &[usize],
    budget: u64,
    cap: usize,
) -> (Distance, Method, Option<BitVec>) {
    if tag.rows() == 0 {
        return (Distance::Undefined, Method::FullCoset, None);
    }
    let s = sector_search(check, tag, support, budget, cap);
    let d = match s.min {
        Some(m) => Distance::Exact(m),
        None => Distance::AtLeast(cap + 1),
    };
    (d, s.method, s.witness)
}

/// Check and tag matrices for a Pauli type: X logicals live in `ker H_Z` and
/// are detected by Z̄ rows, and the reverse for Z.
fn check_and_tag<'a>(
    code: &'a CssCode,
    pauli: Pauli,
    gx: &BitMatrix,
    gz: &BitMatrix,
) -> (&'a BitMatrix, BitMatrix, BitMatrix) {
    match pauli {
        Pauli::X => (code.hz(), gz.clone(), gx.clone()),
        Pauli::Z => (code.hx(), gx.clone(), gz.clone()),
    }
}

fn min_row_weight_on(reps: &BitMatrix, support: &[usize]) -> Option<usize> {
    (0..reps.rows())
        .map(|i| reps.row(i).weight_on(support))
        .min()
}

#[allow(clippy::too_many_arguments)]
fn weight_report(
    code: &CssCode,
    name: &str,
    support: &[usize],
    gx: &BitMatrix,
    gz: &BitMatrix,
    pauli: Pauli,
    budget: u64,
    cap: usize,
) -> SectorWeightReport {
    let (check, tag, reps) = check_and_tag(code, pauli, gx, gz);
    let (achieved, method, witness) = restricted(check, &tag, support, budget, cap);
    SectorWeightReport {
        sector: name.into(),
        pauli,
        achieved,
        method,
        witness,
        canonical: min_row_weight_on(&reps, support),
    }
}

fn sector_support(p: &ProductRecord, sector: &str) -> Result<Vec<usize>> {
    p.result
        .layout()
        .get(sector)
        .map(|s| s.indices())
        .ok_or_else(|| Error::Invalid(format!("no sector named {sector}")))
}

/// Minimum weight restricted to `sector` over logicals acting on that
/// sector's logical qubits.
pub fn sector_min_weight(
    p: &ProductRecord,
    sector: &str,
    pauli: Pauli,
    budget: u64,
    cap: usize,
) -> Result<SectorWeightReport> {
    let support = sector_support(p, sector)?;
    let b = p
        .bases
        .get(sector)
        .ok_or_else(|| Error::Invalid(format!("no sector named {sector}")))?;
    Ok(weight_report(
        &p.result, sector, &support, &b.gx, &b.gz, pauli, budget, cap,
    ))
}

fn exact_or(d: Distance, what: &str) -> Result<Option<usize>> {
    match d {
        Distance::Exact(v) => Ok(Some(v)),
        Distance::Undefined => Ok(None),
        Distance::AtLeast(v) => Err(Error::CapExceeded(format!(
            "{what} is only known to be at least {v}"
        ))),
    }
}

/// Compares the left-sector minima with the closed forms: `(d2, d1)` for a
/// hypergraph product and `(d_X·d_c, d_Z)` for a quantum × classical one.
pub fn left_sector_distance_check(
    p: &ProductRecord,
    budget: u64,
    cap: usize,
) -> Result<CheckReport> {
    let (fx, fz) = match &p.factors {
        Factors::Hgp(c1, c2) => (exact_or(c2.d(), "d2")?, exact_or(c1.d(), "d1")?),
        Factors::Qc(q, c) => {
            let dx = exact_or(q.distance_x(cap).distance, "quantum input d_X")?;
            let dz = exact_or(q.distance_z(cap).distance, "quantum input d_Z")?;
            let dc = exact_or(c.d(), "classical input d")?;
            (dx.zip(dc).map(|(a, b)| a * b), dz)
        }
        Factors::Qq(..) => {
            return Err(Error::Invalid(
                "left-sector check needs an hgp or qc record".into(),
            ))
        }
    };
    let mut notes = Vec::new();
    if p.bases.get("L").is_none_or(|b| b.k() == 0) {
        notes.push("no logicals".into());
    }
    let mut entries = Vec::new();
    for (pauli, f) in [(Pauli::X, fx), (Pauli::Z, fz)] {
        let r = sector_min_weight(p, "L", pauli, budget, cap)?;
        let e = BoundCheck::new(r, f, f);
        if !e.holds {
            return Err(Error::Verification(format!(
                "left {pauli} minimum {} disagrees with the formula value {}",
                e.report.achieved,
                f.map_or("-".into(), |v| v.to_string())
            )));
        }
        entries.push(e);
    }
    Ok(CheckReport::new("left-sector-distance", entries, notes))
}

/// Rows of a quantum × classical left sector whose quantum index lies in
/// the quantum input's own `L` sector, with the matching logical rows.
fn lambda_l(p: &ProductRecord) -> Result<(Vec<usize>, BitMatrix, BitMatrix)> {
    let Factors::Qc(q, _) = &p.factors else {
        return Err(Error::Invalid(
            "restricted rows need a quantum × classical record".into(),
        ));
    };
    let ql = q
        .layout()
        .get("L")
        .ok_or_else(|| Error::Invalid("quantum input has no left sector".into()))?;
    let left = p
        .result
        .layout()
        .get("L")
        .expect("qc records have a left sector");
    let support: Vec<usize> = ql
        .range()
        .flat_map(|qi| (0..left.grid_cols).map(move |b| left.index(qi, b)))
        .collect();
    let (qgx, qgz) = left_logicals(q);
    let basis = &p.bases["L"];
    let kq = q.logical_basis().k();
    let kc = basis.k().checked_div(kq).unwrap_or(0);
    let rows: Vec<usize> = qgx
        .iter()
        .flat_map(|&i| (0..kc).map(move |j| i * kc + j))
        .collect();
    debug_assert_eq!(qgx, qgz);
    Ok((
        support,
        basis.gx.select_rows(&rows),
        basis.gz.select_rows(&rows),
    ))
}

/// Logicals of `q` whose X and Z representatives both sit inside its `L` sector.
fn left_logicals(q: &CssCode) -> (Vec<usize>, Vec<usize>) {
    let b = q.logical_basis();
    let Some(l) = q.layout().get("L") else {
        return (Vec::new(), Vec::new());
    };
    let outside: Vec<usize> = (0..q.n()).filter(|i| !l.range().contains(i)).collect();
    let inside = |m: &BitMatrix| {
        (0..m.rows())
            .filter(|&i| m.row(i).weight_on(&outside) == 0)
            .collect::<Vec<_>>()
    };
    let (x, z) = (inside(&b.gx), inside(&b.gz));
    let both: Vec<usize> = x.iter().copied().filter(|i| z.contains(i)).collect();
    (both.clone(), both)
}

/// Dressed distance of `q` over its left-sector logicals only.
fn left_sector_distance(q: &CssCode, pauli: Pauli, budget: u64, cap: usize) -> Distance {
    let (idx, _) = left_logicals(q);
    let b = q.logical_basis();
    let (gx, gz) = (b.gx.select_rows(&idx), b.gz.select_rows(&idx));
    let all: Vec<usize> = (0..q.n()).collect();
    let (check, tag, _) = check_and_tag(q, pauli, &gx, &gz);
    restricted(check, &tag, &all, budget, cap).0
}

/// Minimum weight on the `ΛL` rows against the lower bounds
/// `|x| ≥ d_X·d_c` and `|z| ≥ d_Z` of the left-sector input.
pub fn restricted_row_weight_check(
    p: &ProductRecord,
    budget: u64,
    cap: usize,
) -> Result<CheckReport> {
    let (support, gx, gz) = lambda_l(p)?;
    let Factors::Qc(q, c) = &p.factors else {
        unreachable!("checked by lambda_l")
    };
    let dc = c.d().exact();
    let dx = left_sector_distance(q, Pauli::X, budget, cap).exact();
    let dz = left_sector_distance(q, Pauli::Z, budget, cap).exact();
    let fx = dx.zip(dc).map(|(a, b)| a * b);
    let entries = [(Pauli::X, fx), (Pauli::Z, dz)]
        .into_iter()
        .map(|(pauli, f)| {
            BoundCheck::new(
                weight_report(&p.result, LAMBDA_L, &support, &gx, &gz, pauli, budget, cap),
                f,
                None,
            )
        })
        .collect();
    Ok(CheckReport::new(
        "restricted-row-weight",
        entries,
        Vec::new(),
    ))
}

/// Middle-sector minima against `[max(d, d'), d·d']` for each Pauli type.
///
/// Only records where the truth sits; nothing is asserted about whether the
/// upper end is always attained.
pub fn middle_sector_bounds_check(
    p: &ProductRecord,
    budget: u64,
    cap: usize,
) -> Result<CheckReport> {
    let Factors::Qq(q1, q2) = &p.factors else {
        return Err(Error::Invalid(
            "middle-sector bounds need a quantum × quantum record".into(),
        ));
    };
    if p.bases["M"].k() == 0 {
        let notes = vec!["no middle logicals; bounds are vacuous".into()];
        return Ok(CheckReport::new("middle-sector-bounds", Vec::new(), notes));
    }
    let mut entries = Vec::new();
    let mut notes = Vec::new();
    for pauli in [Pauli::X, Pauli::Z] {
        let d = |q: &CssCode| match pauli {
            Pauli::X => q.distance_x(cap).distance.exact(),
            Pauli::Z => q.distance_z(cap).distance.exact(),
        };
        let (a, b) = (d(q1), d(q2));
        let lower = a.zip(b).map(|(a, b)| a.max(b));
        let upper = a.zip(b).map(|(a, b)| a * b);
        let r = sector_min_weight(p, "M", pauli, budget, cap)?;
        notes.push(format!(
            "{pauli}: {} in [{}, {}]",
            r.achieved,
            lower.map_or("-".into(), |v| v.to_string()),
            upper.map_or("-".into(), |v| v.to_string())
        ));
        entries.push(BoundCheck::new(r, lower, upper));
    }
    Ok(CheckReport::new("middle-sector-bounds", entries, notes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSource {
    Search,
    Formula,
    Cap,
}

/// Dressed distance of the kept logicals as an interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBounds {
    pub pauli: Pauli,
    pub lower: usize,
    pub upper: Option<usize>,
    pub lower_source: BoundSource,
    /// True when a search found a logical of weight `lower`.
    pub exhaustive: bool,
    pub witness: Option<BitVec>,
    /// Canonical representative of weight `upper`.
    pub upper_witness: Option<BitVec>,
}

/// Bounds on the kept X and Z distances of a product.
///
/// A search up to `cap` settles small distances exactly. Past the cap, a
/// quantum × classical product with a gauge right sector gets the closed
/// forms `d_X·d_c` and `d_Z` as lower bounds. The upper end is always the
/// lightest canonical representative.
pub fn distance_bounds(p: &ProductRecord, budget: u64, cap: usize) -> Result<Vec<DistanceBounds>> {
    let kept = p.kept_basis();
    let all: Vec<usize> = (0..p.result.n()).collect();
    let formula = |pauli: Pauli| -> Result<Option<usize>> {
        let Factors::Qc(q, c) = &p.factors else {
            return Ok(None);
        };
        if !p.is_gauge("R") {
            return Ok(None);
        }
        let factor_cap = cap.max(DEFAULT_CAP);
        Ok(match pauli {
            Pauli::X => exact_or(q.distance_x(factor_cap).distance, "quantum input d_X")?
                .zip(exact_or(c.d(), "classical input d")?)
                .map(|(a, b)| a * b),
            Pauli::Z => exact_or(q.distance_z(factor_cap).distance, "quantum input d_Z")?,
        })
    };
    let mut out = Vec::new();
    for pauli in [Pauli::X, Pauli::Z] {
        let (check, tag, reps) = check_and_tag(&p.result, pauli, &kept.gx, &kept.gz);
        if tag.rows() == 0 {
            continue;
        }
        let lightest = (0..reps.rows()).min_by_key(|&i| (reps.row(i).weight(), i));
        let upper_witness = lightest.map(|i| reps.row(i));
        let upper = upper_witness.as_ref().map(BitVec::weight);
        let (d, _, witness) = restricted(check, &tag, &all, budget, cap);
        let b = match d {
            Distance::Exact(v) => DistanceBounds {
                pauli,
                lower: v,
                upper: Some(v),
                lower_source: BoundSource::Search,
                exhaustive: true,
                witness,
                upper_witness,
            },
            _ => {
                let searched = d.lower().unwrap_or(0);
                let (lower, lower_source) = match formula(pauli)? {
                    Some(f) if f > searched => (f, BoundSource::Formula),
                    _ => (searched, BoundSource::Cap),
                };
                if upper.is_some_and(|u| u < lower) {
                    return Err(Error::Verification(format!(
                        "{pauli} canonical weight {} is below the lower bound {lower}",
                        upper.unwrap_or(0)
                    )));
                }
                DistanceBounds {
                    pauli,
                    lower,
                    upper,
                    lower_source,
                    exhaustive: false,
                    witness: None,
                    upper_witness,
                }
            }
        };
        out.push(b);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Conclusion {
    /// `d_eff = d` for both Pauli types.
    Preserved {
        d_x: usize,
        d_z: usize,
    },
    /// Fault distances preserved up to `lower`; the code distance lies in
    /// `[lower, upper]`.
    Interval {
        x: (usize, usize),
        z: (usize, usize),
    },
    /// The permutation hypothesis holds but the sector minima did not match.
    NotCertified {
        reason: String,
    },
    NotCovered {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveDistanceReport {
    pub kind: ProductKind,
    /// Sector on which the gadget acts as a pure permutation.
    pub protected: Option<String>,
    pub restricted: Vec<SectorWeightReport>,
    /// Dressed distances of the subsystem code keeping only the protected logicals.
    pub distance_x: Distance,
    pub distance_z: Distance,
    pub conclusion: Conclusion,
}

/// `U` maps `S` onto itself as a permutation and has no entries linking `S`
/// with its complement.
pub fn is_permutation_on(u: &BitMatrix, support: &[usize]) -> bool {
    let n = u.rows();
    let mut inside = vec![false; n];
    for &i in support {
        inside[i] = true;
    }
    let mut hit = vec![false; n];
    for &j in support {
        let col = u.col(j).support();
        if col.len() != 1 || !inside[col[0]] || hit[col[0]] {
            return false;
        }
        hit[col[0]] = true;
    }
    support
        .iter()
        .all(|&i| u.row(i).support().iter().all(|&j| inside[j]))
}

struct Candidate {
    name: String,
    support: Vec<usize>,
    gx: BitMatrix,
    gz: BitMatrix,
}

fn candidates(p: &ProductRecord) -> Vec<Candidate> {
    let whole = |name: &str| {
        let b = p.bases.get(name)?;
        Some(Candidate {
            name: name.into(),
            support: sector_support(p, name).ok()?,
            gx: b.gx.clone(),
            gz: b.gz.clone(),
        })
    };
    let mut out: Vec<Candidate> = match p.kind {
        ProductKind::Hgp => ["L", "R"].iter().filter_map(|s| whole(s)).collect(),
        ProductKind::Qc => whole("L").into_iter().collect(),
        ProductKind::Qq => whole("M").into_iter().collect(),
    };
    if p.kind == ProductKind::Qc {
        if let Ok((support, gx, gz)) = lambda_l(p) {
            out.push(Candidate {
                name: LAMBDA_L.into(),
                support,
                gx,
                gz,
            });
        }
    }
    out.retain(|c| c.gx.rows() > 0);
    out
}

/// Structural certificate: the gadget permutes a protected sector and the
/// sector-restricted minima equal the dressed distances of the code that
/// keeps only that sector's logicals.
pub fn effective_distance_report(
    g: &Gadget,
    p: &ProductRecord,
    budget: u64,
    cap: usize,
) -> Result<EffectiveDistanceReport> {
    verify(g, &p.result)?;
    let u = g.u.matrix();
    let not_covered = |reason: &str| EffectiveDistanceReport {
        kind: p.kind,
        protected: None,
        restricted: Vec::new(),
        distance_x: Distance::Undefined,
        distance_z: Distance::Undefined,
        conclusion: Conclusion::NotCovered {
            reason: reason.into(),
        },
    };
    let Some(c) = candidates(p)
        .into_iter()
        .find(|c| is_permutation_on(&u, &c.support))
    else {
        return Ok(not_covered(
            "not covered by theorems: no protected sector is acted on by a pure permutation",
        ));
    };
    let code = &p.result;
    let all: Vec<usize> = (0..code.n()).collect();
    let rx = weight_report(
        code,
        &c.name,
        &c.support,
        &c.gx,
        &c.gz,
        Pauli::X,
        budget,
        cap,
    );
    let rz = weight_report(
        code,
        &c.name,
        &c.support,
        &c.gx,
        &c.gz,
        Pauli::Z,
        budget,
        cap,
    );
    let dx = {
        let (check, tag, _) = check_and_tag(code, Pauli::X, &c.gx, &c.gz);
        restricted(check, &tag, &all, budget, cap).0
    };
    let dz = {
        let (check, tag, _) = check_and_tag(code, Pauli::Z, &c.gx, &c.gz);
        restricted(check, &tag, &all, budget, cap).0
    };
    let conclusion = if let Factors::Qq(q1, q2) = &p.factors {
        let lo_hi = |a: Distance, b: Distance| match (a.exact(), b.exact()) {
            (Some(a), Some(b)) => Some((a.max(b), a * b)),
            _ => None,
        };
        let x = lo_hi(q1.distance_x(cap).distance, q2.distance_x(cap).distance);
        let z = lo_hi(q1.distance_z(cap).distance, q2.distance_z(cap).distance);
        match x.zip(z) {
            Some((x, z)) => Conclusion::Interval { x, z },
            None => Conclusion::NotCertified {
                reason: "factor distances exceed the cap".into(),
            },
        }
    } else {
        match (rx.achieved, dx, rz.achieved, dz) {
            (Distance::Exact(a), Distance::Exact(b), Distance::Exact(c2), Distance::Exact(d))
                if a == b && c2 == d =>
            {
                Conclusion::Preserved { d_x: b, d_z: d }
            }
            _ => Conclusion::NotCertified {
                reason: format!(
                    "restricted minima ({}, {}) do not match distances ({dx}, {dz})",
                    rx.achieved, rz.achieved
                ),
            },
        }
    };
    Ok(EffectiveDistanceReport {
        kind: p.kind,
        protected: Some(c.name),
        restricted: vec![rx, rz],
        distance_x: dx,
        distance_z: dz,
        conclusion,
    })
}
