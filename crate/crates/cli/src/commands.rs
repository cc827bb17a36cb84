//! Each command composes library calls and renders their reports.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use gadgetry::automorph::{
    affine_check, check_automorphism, close_group, dual_bound_check, enumerate_automorphisms,
    spec_generators, tanner_check_permutation, AutomorphismGroup, CodeAutomorphism, GroupReport,
    DEFAULT_N_CAP, DEFAULT_ORDER_CAP,
};
use gadgetry::classical::{
    all_dual_codewords_check_matrix, from_spec, ClassicalCode, CodeParams, Distance,
};
use gadgetry::css::{CssCode, DEFAULT_CSS_CAP};
use gadgetry::cupprod::{adjacency_edges, czpairs, orient_from_codeword, verify_cz, Orientation};
use gadgetry::f2core::{BitMatrix, Permutation};
use gadgetry::fixtures::{k4, k4_graph};
use gadgetry::ftcheck::{
    distance_bounds, effective_distance_report, left_sector_distance_check,
    middle_sector_bounds_check, restricted_row_weight_check, CheckReport, Conclusion,
    DistanceBounds, DEFAULT_CAP,
};
use gadgetry::gadgets::{
    lift_hgp, lift_hgp_right, lift_qc, lift_qq, verify, Gadget, GadgetSummary, QcInput, Which,
};
use gadgetry::graphs::SimpleGraph;
use gadgetry::products::{
    hgp, homprod_qc, homprod_qq, parse_quantum, Factors, ProductRecord, ProductSummary,
};

use crate::manifest::RunManifest;
use crate::output::{Report, Status};
use crate::{
    AutMode, CheckMode, Cli, Command, CupArgs, CupMode, GadgetArgs, GadgetMode, ProductArgs,
    ProductKindArg,
};

/// Middle-sector searches grow fast with the cap, so they start lower.
const MIDDLE_CAP: usize = 5;

pub fn run(cli: &Cli, m: &mut RunManifest) -> Result<Report> {
    let cap = cli.cap;
    match &cli.command {
        Command::Code { spec } => code(spec, m),
        Command::Aut {
            mode: AutMode::Enumerate { spec },
        } => aut_enumerate(spec, m),
        Command::Aut {
            mode: AutMode::Close { spec, gens },
        } => aut_close(spec, gens.as_deref(), m),
        Command::Product(args) => product(args, cap.unwrap_or(DEFAULT_CSS_CAP), m),
        Command::Gadget {
            mode: GadgetMode::Lift(args),
        } => gadget_lift(args, m),
        Command::Check { what } => match what {
            CheckMode::Sector { which, product } => {
                let p = build_product(product, m)?;
                let (report, default_cap) = if which.left {
                    ("left", DEFAULT_CAP)
                } else if which.restricted {
                    ("restricted", DEFAULT_CAP)
                } else {
                    ("middle", MIDDLE_CAP)
                };
                check_sector(&p, report, cli.budget, cap.unwrap_or(default_cap))
            }
            CheckMode::Distance(args) => {
                let p = build_product(args, m)?;
                check_distance(&p, cli.budget, cap.unwrap_or(DEFAULT_CSS_CAP))
            }
            CheckMode::Gadget(args) => {
                check_gadget(args, cli.budget, cap.unwrap_or(DEFAULT_CAP), m)
            }
            CheckMode::Structure { spec } => check_structure(spec, m),
        },
        Command::Cup { mode } => match mode {
            CupMode::Pairs(args) => cup(args, false, m),
            CupMode::Verify(args) => cup(args, true, m),
        },
    }
}

fn classical(spec: &str, m: &mut RunManifest) -> Result<ClassicalCode> {
    let c = from_spec(spec).with_context(|| format!("building {spec:?}"))?;
    m.record(format!("code {spec}"), c.h().to_f2m().as_bytes());
    Ok(c)
}

fn quantum(spec: &str, m: &mut RunManifest) -> Result<ProductRecord> {
    let p = parse_quantum(spec).with_context(|| format!("building {spec:?}"))?;
    record_css(&format!("quantum {spec}"), &p.result, m);
    Ok(p)
}

fn record_css(key: &str, c: &CssCode, m: &mut RunManifest) {
    m.record(
        key,
        format!("{}{}", c.hx().to_f2m(), c.hz().to_f2m()).as_bytes(),
    );
}

fn bounded(d: Distance) -> bool {
    matches!(d, Distance::AtLeast(_))
}

fn params_line(p: &CodeParams) -> String {
    let trivial = if p.k == p.n { " (trivial)" } else { "" };
    format!("[{},{},{}] d⊥={}{trivial}", p.n, p.k, p.d, p.d_dual)
}

#[derive(Serialize)]
struct CodeBody {
    spec: String,
    params: CodeParams,
    h: BitMatrix,
    g: BitMatrix,
}

fn code(spec: &str, m: &mut RunManifest) -> Result<Report> {
    let c = classical(spec, m)?;
    let params = c.params();
    let mut r = Report::new(
        "code",
        CodeBody {
            spec: spec.into(),
            params,
            h: c.h().clone(),
            g: c.g().clone(),
        },
    )?;
    r.line(format!("{spec}: {}", params_line(&params)));
    r.artifact("h.f2m", c.h().to_f2m());
    r.artifact("g.f2m", c.g().to_f2m());
    if bounded(params.d) || bounded(params.d_dual) {
        r.flag(Status::Bounded);
    }
    Ok(r)
}

#[derive(Serialize)]
struct AutBody {
    spec: String,
    params: CodeParams,
    #[serde(flatten)]
    group: GroupReport,
    generators: Option<Vec<String>>,
}

fn aut_report(spec: &str, c: &ClassicalCode, g: &AutomorphismGroup) -> Result<Report> {
    let group = g.report(c);
    let generators = g
        .generated_from
        .as_ref()
        .map(|gs| gs.iter().map(Permutation::to_cycle_string).collect());
    let line = format!(
        "{spec}: |Aut| {} {}, Tanner {}, logical {}",
        if g.complete { "=" } else { ">=" },
        group.order,
        group.tanner_order,
        group.logical_order
    );
    let mut r = Report::new(
        "aut",
        AutBody {
            spec: spec.into(),
            params: c.params(),
            group,
            generators,
        },
    )?;
    r.line(line);
    if !g.complete {
        r.line("group closure of known generators, not exhaustive");
    }
    Ok(r)
}

fn aut_enumerate(spec: &str, m: &mut RunManifest) -> Result<Report> {
    let c = classical(spec, m)?;
    let g = enumerate_automorphisms(&c, DEFAULT_N_CAP)?;
    aut_report(spec, &c, &g)
}

fn aut_close(spec: &str, gens: Option<&Path>, m: &mut RunManifest) -> Result<Report> {
    let (c, generators) = match gens {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            m.record(format!("file {}", path.display()), text.as_bytes());
            let c = classical(spec, m)?;
            let gens = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| Permutation::parse_cycles(l, c.n()))
                .collect::<gadgetry::Result<Vec<_>>>()?;
            (c, gens)
        }
        None => {
            let (c, gens) = spec_generators(spec)?
                .ok_or_else(|| anyhow!("no known generators for {spec:?}; pass --gens"))?;
            m.record(format!("code {spec}"), c.h().to_f2m().as_bytes());
            (c, gens)
        }
    };
    let g = close_group(&c, &generators, DEFAULT_ORDER_CAP)?;
    aut_report(spec, &c, &g)
}

fn build_product(args: &ProductArgs, m: &mut RunManifest) -> Result<ProductRecord> {
    let p = match args.kind {
        ProductKindArg::Hgp => hgp(&classical(&args.a, m)?, &classical(&args.b, m)?)?,
        ProductKindArg::Qc => homprod_qc(&quantum(&args.a, m)?.result, &classical(&args.b, m)?)?,
        ProductKindArg::Qq => {
            homprod_qq(&quantum(&args.a, m)?.result, &quantum(&args.b, m)?.result)?
        }
    };
    Ok(p)
}

#[derive(Serialize)]
struct ProductBody {
    summary: ProductSummary,
    labels: Vec<String>,
    distance_x: Distance,
    distance_z: Distance,
}

fn product(args: &ProductArgs, cap: usize, m: &mut RunManifest) -> Result<Report> {
    let p = build_product(args, m)?;
    let summary = p.summary()?;
    let (dx, dz) = (p.kept_distance_x(cap), p.kept_distance_z(cap));
    let d = match (dx, dz) {
        (Distance::Exact(a), Distance::Exact(b)) => (a.min(b)).to_string(),
        (a, b) => format!("({a}, {b})"),
    };
    let mut lines = vec![format!(
        "{:?}({}, {}): ⟦{},{},{d}⟧",
        summary.kind, args.a, args.b, summary.n, summary.k
    )
    .to_lowercase()];
    let rep = &summary.report;
    lines.push(format!(
        "X checks weight {}..{} participation {}..{}; Z checks weight {}..{} participation {}..{}",
        rep.x_weight.min,
        rep.x_weight.max,
        rep.x_participation.min,
        rep.x_participation.max,
        rep.z_weight.min,
        rep.z_weight.max,
        rep.z_participation.min,
        rep.z_participation.max
    ));
    for s in &summary.sectors {
        let gauge = if summary.gauge_sectors.contains(&s.name) {
            " gauge"
        } else {
            ""
        };
        lines.push(format!(
            "sector {}: {} qubits, {} logicals{gauge}",
            s.name, s.qubits, s.logicals
        ));
    }
    let mut r = Report::new(
        "product",
        ProductBody {
            summary,
            labels: p.logical_labels(),
            distance_x: dx,
            distance_z: dz,
        },
    )?;
    r.lines = lines;
    r.artifact("hx.f2m", p.result.hx().to_f2m());
    r.artifact("hz.f2m", p.result.hz().to_f2m());
    if bounded(dx) || bounded(dz) {
        r.flag(Status::Bounded);
    }
    Ok(r)
}

fn automorphism(c: &ClassicalCode, sigma: &str) -> Result<CodeAutomorphism> {
    let s = Permutation::parse_cycles(sigma, c.n())?;
    check_automorphism(c, &s)?.ok_or_else(|| {
        gadgetry::Error::Verification(format!("{sigma} is not an automorphism of the input code"))
            .into()
    })
}

/// The gadget named by `args` and the product it lives on.
fn lifted(args: &GadgetArgs, m: &mut RunManifest) -> Result<(ProductRecord, Gadget)> {
    let base = quantum(&args.product, m)?;
    let Factors::Hgp(c1, c2) = &base.factors else {
        bail!("--product must be a hypergraph product `A*B`")
    };
    let first = match (args.hgp, args.hgp_right) {
        (Some(w), _) => {
            let code = if w == crate::WhichArg::First { c1 } else { c2 };
            Some(lift_hgp(
                &base,
                w.into(),
                &automorphism(code, &args.sigma)?,
            )?)
        }
        (None, Some(w)) => {
            let code = if w == crate::WhichArg::First { c1 } else { c2 };
            Some(lift_hgp_right(
                &base,
                w.into(),
                &automorphism(&code.transpose_code(), &args.sigma)?,
            )?)
        }
        (None, None) => None,
    };
    if let Some(c) = &args.qc {
        let cc = classical(c, m)?;
        let p = homprod_qc(&base.result, &cc)?;
        let g = match &first {
            Some(g) => lift_qc(&p, QcInput::Quantum(g))?,
            None => lift_qc(&p, QcInput::Classical(&automorphism(&cc, &args.sigma)?))?,
        };
        return Ok((p, g));
    }
    let g = first.ok_or_else(|| {
        anyhow!("pass --hgp or --hgp-right, or --qc to lift σ from the classical code")
    })?;
    if let Some(q) = &args.qq {
        let other = quantum(q, m)?;
        let which: Which = args.qq_side.into();
        let p = match which {
            Which::First => homprod_qq(&base.result, &other.result)?,
            Which::Second => homprod_qq(&other.result, &base.result)?,
        };
        let lifted = lift_qq(&p, which, &g)?;
        return Ok((p, lifted));
    }
    Ok((base, g))
}

/// `X̄(a) ↦ X̄(b)+X̄(c)` for every row of `v` that is not a unit row on its own index.
fn action_lines(v: &BitMatrix, labels: &[String]) -> Vec<String> {
    (0..v.rows())
        .filter(|&i| v.row(i).support() != [i])
        .map(|i| {
            let terms: Vec<String> = v
                .row(i)
                .support()
                .iter()
                .map(|&j| format!("X̄({})", labels[j]))
                .collect();
            let rhs = if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            };
            format!("X̄({}) ↦ {rhs}", labels[i])
        })
        .collect()
}

#[derive(Serialize)]
struct GadgetBody {
    n: usize,
    k: usize,
    summary: GadgetSummary,
    labels: Vec<String>,
    logical_action: Vec<String>,
    logical_action_z: BitMatrix,
}

fn gadget_body(p: &ProductRecord, g: &Gadget) -> Result<GadgetBody> {
    let check = verify(g, &p.result)?;
    let labels = p.logical_labels();
    let v_it = check
        .v_bar
        .inverse()
        .ok_or_else(|| gadgetry::Error::Verification("logical action is singular".into()))?
        .transpose();
    Ok(GadgetBody {
        n: p.result.n(),
        k: p.result.num_logicals(),
        summary: g.summary(p.result.layout()),
        logical_action: action_lines(&check.v_bar, &labels),
        labels,
        logical_action_z: v_it,
    })
}

fn gadget_lines(body: &GadgetBody) -> Vec<String> {
    let mut lines = vec![format!(
        "{} on n = {}, depth {}, {}",
        body.summary.provenance,
        body.n,
        body.summary.depth,
        if body.summary.permutation {
            "permutation only"
        } else {
            "with circuit blocks"
        }
    )];
    for b in &body.summary.blocks {
        let what = match (&b.cycles, &b.steps) {
            (Some(c), _) => format!("permutation {c}"),
            (None, Some(s)) => format!("{} CNOT/SWAP steps, depth {}", s.len(), b.depth),
            (None, None) => "identity".into(),
        };
        lines.push(format!(
            "  {} [{}..{}): {what}",
            b.sector,
            b.offset,
            b.offset + b.len
        ));
    }
    if body.logical_action.is_empty() {
        lines.push("logical action: identity".into());
    } else {
        lines.push("logical action:".into());
        lines.extend(body.logical_action.iter().map(|l| format!("  {l}")));
    }
    lines
}

fn gadget_lift(args: &GadgetArgs, m: &mut RunManifest) -> Result<Report> {
    let (p, g) = lifted(args, m)?;
    let body = gadget_body(&p, &g)?;
    let lines = gadget_lines(&body);
    let mut r = Report::new("gadget", &body)?;
    r.lines = lines;
    r.artifact("u.f2m", g.u.matrix().to_f2m());
    r.artifact("v_bar.f2m", g.v_bar.to_f2m());
    Ok(r)
}

fn check_sector(p: &ProductRecord, which: &str, budget: u64, cap: usize) -> Result<Report> {
    let rep: CheckReport = match which {
        "left" => left_sector_distance_check(p, budget, cap)?,
        "restricted" => restricted_row_weight_check(p, budget, cap)?,
        _ => middle_sector_bounds_check(p, budget, cap)?,
    };
    let mut r = Report::new("check-sector", &rep)?;
    for e in &rep.entries {
        let bound = match (e.lower, e.upper) {
            (Some(a), Some(b)) if a == b => format!("formula {a}"),
            (a, b) => format!(
                "bounds [{}, {}]",
                a.map_or("-".into(), |v| v.to_string()),
                b.map_or("-".into(), |v| v.to_string())
            ),
        };
        r.line(format!(
            "{} {}: min {} ({:?}), {bound}, canonical {}: {}",
            e.report.sector,
            e.report.pauli,
            e.report.achieved,
            e.report.method,
            e.report.canonical.map_or("-".into(), |v| v.to_string()),
            if e.holds { "ok" } else { "VIOLATED" }
        ));
        if bounded(e.report.achieved) {
            r.flag(Status::Bounded);
        }
    }
    for n in &rep.notes {
        r.line(format!("note: {n}"));
    }
    if !rep.holds {
        r.flag(Status::Verification);
    }
    Ok(r)
}

fn check_distance(p: &ProductRecord, budget: u64, cap: usize) -> Result<Report> {
    let bounds: Vec<DistanceBounds> = distance_bounds(p, budget, cap)?;
    let mut r = Report::new("check-distance", &bounds)?;
    for b in &bounds {
        let upper = b.upper.map_or("-".into(), |u| u.to_string());
        if b.exhaustive {
            r.line(format!(
                "d_{} = {} (search to weight {cap})",
                b.pauli, b.lower
            ));
        } else {
            r.line(format!(
                "d_{} in [{}, {upper}]: lower bound from {}, upper from a canonical representative, not exhaustive",
                b.pauli,
                b.lower,
                format!("{:?}", b.lower_source).to_lowercase()
            ));
            r.flag(Status::Bounded);
        }
    }
    Ok(r)
}

#[derive(Serialize)]
struct CheckGadgetBody {
    gadget: GadgetBody,
    effective_distance: gadgetry::ftcheck::EffectiveDistanceReport,
}

fn check_gadget(args: &GadgetArgs, budget: u64, cap: usize, m: &mut RunManifest) -> Result<Report> {
    let (p, g) = lifted(args, m)?;
    let gadget = gadget_body(&p, &g)?;
    let eff = effective_distance_report(&g, &p, budget, cap)?;
    let mut lines = gadget_lines(&gadget);
    let (line, status) = match &eff.conclusion {
        Conclusion::Preserved { d_x, d_z } => (
            format!(
                "d_eff = d certified on sector {}: (d_X, d_Z) = ({d_x}, {d_z})",
                eff.protected.as_deref().unwrap_or("-")
            ),
            Status::Ok,
        ),
        Conclusion::Interval { x, z } => (
            format!(
                "fault distance preserved up to the interval X [{}, {}], Z [{}, {}]",
                x.0, x.1, z.0, z.1
            ),
            Status::Bounded,
        ),
        Conclusion::NotCertified { reason } => {
            (format!("not certified: {reason}"), Status::Bounded)
        }
        Conclusion::NotCovered { reason } => (reason.clone(), Status::Ok),
    };
    lines.push(line);
    let mut r = Report::new(
        "check-gadget",
        CheckGadgetBody {
            gadget,
            effective_distance: eff,
        },
    )?;
    r.lines = lines;
    r.flag(status);
    Ok(r)
}

#[derive(Serialize)]
struct StructureBody {
    spec: String,
    order: usize,
    complete: bool,
    affine: gadgetry::automorph::AffineReport,
    dual_bound: gadgetry::automorph::DualBoundReport,
    /// Automorphisms that become Tanner once every dual codeword is a check.
    tanner_with_all_dual_checks: usize,
}

fn check_structure(spec: &str, m: &mut RunManifest) -> Result<Report> {
    let c = classical(spec, m)?;
    let g = enumerate_automorphisms(&c, DEFAULT_N_CAP)?;
    let full = ClassicalCode::from_parity_check(all_dual_codewords_check_matrix(&c)?);
    let tanner = g
        .elements
        .iter()
        .filter(|a| tanner_check_permutation(&full, &a.sigma).is_some())
        .count();
    let body = StructureBody {
        spec: spec.into(),
        order: g.order(),
        complete: g.complete,
        affine: affine_check(&g),
        dual_bound: dual_bound_check(&c, &g),
        tanner_with_all_dual_checks: tanner,
    };
    let mut r = Report::new("check-structure", &body)?;
    r.line(format!("{spec}: |Aut| = {}", body.order));
    r.line(format!(
        "logical actions invertible: {} of {}",
        body.affine.invertible, body.affine.checked
    ));
    r.line(
        match (body.dual_bound.applicable, body.dual_bound.equal_orders) {
            (false, _) => "dual bound: not applicable (d < 3)".to_string(),
            (true, Some(eq)) => format!(
                "dual bound: |Aut| = |{{V}}| = |{{W}}| {}",
                if eq { "holds" } else { "FAILS" }
            ),
            (true, None) => format!(
                "dual bound: W injective {}, d⊥ < 3",
                body.dual_bound.w_injective
            ),
        },
    );
    r.line(format!(
        "Tanner with all dual codewords as checks: {tanner} of {}",
        body.order
    ));
    if !body.affine.holds() || !body.dual_bound.holds() || tanner != body.order {
        r.flag(Status::Verification);
    }
    Ok(r)
}

fn cup_setup(graph: &str, m: &mut RunManifest) -> Result<(SimpleGraph, ClassicalCode)> {
    // the named fixture keeps the generator rows that number the codewords
    let (g, c) = if graph == "k4" {
        (k4_graph(), k4())
    } else {
        let g = SimpleGraph::from_name(graph)?;
        let c = ClassicalCode::from_parity_check(g.incidence_matrix());
        (g, c)
    };
    m.record(format!("graph {graph}"), g.to_text().as_bytes());
    Ok((g, c))
}

fn orientation(
    arg: &str,
    g: &SimpleGraph,
    c: &ClassicalCode,
    m: &mut RunManifest,
) -> Result<Orientation> {
    if let Some(i) = arg.strip_prefix("codeword:") {
        let i: usize = i
            .parse()
            .with_context(|| format!("bad codeword index in {arg:?}"))?;
        if i == 0 || i > c.k() {
            bail!("codeword index {i} outside 1..={}", c.k());
        }
        return orient_from_codeword(g, &c.g().row(i - 1)).ok_or_else(|| {
            anyhow!("codeword {i} is not a single cycle, so it has no consecutive orientation")
        });
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    m.record(format!("file {arg}"), text.as_bytes());
    Ok(text.parse()?)
}

#[derive(Serialize)]
struct CupBody {
    n: usize,
    first: String,
    second: String,
    pairs: Vec<(usize, usize)>,
    adjacency: Option<BitMatrix>,
    links: Option<Vec<(String, String)>>,
}

fn cup(args: &CupArgs, check: bool, m: &mut RunManifest) -> Result<Report> {
    let (g, c) = cup_setup(&args.graph, m)?;
    let p = hgp(&c, &c.transpose_code())?;
    let o1 = orientation(&args.first, &g, &c, m)?;
    let o2 = orientation(&args.second, &g, &c, m)?;
    let pairing = czpairs(&p, &g, &g, &o1, &o2)?;
    let mut lines = vec![format!(
        "{} CZ pairs between two copies of a {}-qubit code",
        pairing.len(),
        p.result.n()
    )];
    let (adjacency, links) = if check {
        let a = verify_cz(&p, &pairing)?;
        let labels = p.logical_labels();
        let links: Vec<(String, String)> = adjacency_edges(&a)
            .into_iter()
            .map(|(i, j)| (labels[i].clone(), labels[j].clone()))
            .collect();
        lines.push("code space preserved".into());
        for (x, y) in &links {
            lines.push(format!("logical CZ: block 1 {x} with block 2 {y}"));
        }
        (Some(a), Some(links))
    } else {
        lines.extend(pairing.pairs.iter().map(|(a, b)| format!("CZ {a} {b}")));
        (None, None)
    };
    let body = CupBody {
        n: pairing.n,
        first: o1.to_string(),
        second: o2.to_string(),
        pairs: pairing.pairs.clone(),
        adjacency,
        links,
    };
    let mut r = Report::new(if check { "cup-verify" } else { "cup-pairs" }, body)?;
    r.lines = lines;
    Ok(r)
}
