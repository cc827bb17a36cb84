mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use manifest::RunManifest;
use output::Status;

/// Build product codes, lift their automorphism gadgets and check them.
#[derive(Parser, Debug)]
#[command(name = "gadgetry", version)]
pub struct Cli {
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the JSON report and matrix artifacts into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recorded in the manifest; no command draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Weight cap for bounded searches; each command has its own default.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Enumeration budget in states for full-coset searches.
    #[arg(long, global = true, default_value_t = gadgetry::search::DEFAULT_BUDGET)]
    budget: u64,
    /// Record wall time in the manifest. Output is then no longer byte-stable.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a classical code and report [n, k, d] and d⊥.
    Code {
        /// Builder spec such as `cycle:k4`, `hamming:3`, `ga:z7:1+x+x3`, `rep:5`.
        spec: String,
    },
    /// Automorphism groups of a classical code.
    Aut {
        #[command(subcommand)]
        mode: AutMode,
    },
    /// Build a product code.
    Product(ProductArgs),
    /// Lift automorphisms of input codes to gadgets on a product.
    Gadget {
        #[command(subcommand)]
        mode: GadgetMode,
    },
    /// Verification reports.
    Check {
        #[command(subcommand)]
        what: CheckMode,
    },
    /// Copy-cup CZ circuits on hgp(G, Gᵀ) for a graph G.
    Cup {
        #[command(subcommand)]
        mode: CupMode,
    },
}

#[derive(Subcommand, Debug)]
pub enum AutMode {
    /// Exhaustive search over all bit permutations.
    Enumerate { spec: String },
    /// Group generated by known symmetries; a lower bound on |Aut|.
    Close {
        /// Builder spec, or `<graph>-edge-gens` for a cycle code with its graph symmetries.
        spec: String,
        /// File with one generator per line in 1-based cycle notation.
        #[arg(long)]
        gens: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductKindArg {
    /// Two classical specs.
    Hgp,
    /// A quantum spec `A*B` and a classical spec.
    Qc,
    /// Two quantum specs.
    Qq,
}

#[derive(Args, Debug, Clone)]
pub struct ProductArgs {
    #[arg(value_enum)]
    pub kind: ProductKindArg,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    First,
    Second,
}

impl From<WhichArg> for gadgetry::gadgets::Which {
    fn from(w: WhichArg) -> Self {
        match w {
            WhichArg::First => gadgetry::gadgets::Which::First,
            WhichArg::Second => gadgetry::gadgets::Which::Second,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum GadgetMode {
    /// Lift one automorphism and report U, W, W′ and the logical action.
    Lift(GadgetArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GadgetArgs {
    /// Hypergraph product `A*B` the gadget starts on.
    #[arg(long, default_value = "k4*k4")]
    pub product: String,
    /// Lift an automorphism of the first or second input code.
    #[arg(long, value_enum, conflicts_with = "hgp_right")]
    pub hgp: Option<WhichArg>,
    /// Right-sector gadget: σ is an automorphism of the transpose of the chosen input.
    #[arg(long, value_enum)]
    pub hgp_right: Option<WhichArg>,
    /// Continue into homprod_qc(product, C). Without --hgp, σ acts on C itself.
    #[arg(long, conflicts_with = "qq")]
    pub qc: Option<String>,
    /// Continue into a quantum × quantum product with this `A*B` spec.
    #[arg(long)]
    pub qq: Option<String>,
    /// Which factor of the quantum × quantum product carries the gadget.
    #[arg(long, value_enum, default_value_t = WhichArg::First)]
    pub qq_side: WhichArg,
    /// Automorphism in 1-based cycle notation, such as "(25)(46)".
    #[arg(long)]
    pub sigma: String,
}

#[derive(Subcommand, Debug)]
pub enum CheckMode {
    /// Sector-restricted logical weights against their closed forms.
    Sector {
        #[command(flatten)]
        which: SectorWhich,
        #[command(flatten)]
        product: ProductArgs,
    },
    /// Bounds on the kept X and Z distances of a product.
    Distance(ProductArgs),
    /// Structural effective-distance certificate for a lifted gadget.
    Gadget(GadgetArgs),
    /// Affine restriction, the dual bound and Tanner checks on a classical code.
    Structure { spec: String },
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct SectorWhich {
    /// Left sector against (d2, d1) or (d_X·d_c, d_Z).
    #[arg(long)]
    pub left: bool,
    /// ΛL rows of a quantum × classical product.
    #[arg(long)]
    pub restricted: bool,
    /// Middle sector of a quantum × quantum product against [max, product].
    #[arg(long)]
    pub middle: bool,
}

#[derive(Subcommand, Debug)]
pub enum CupMode {
    /// List the CZ pairs for two orientations.
    Pairs(CupArgs),
    /// Check that the pairs preserve the code space and report the logical CZ graph.
    Verify(CupArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CupArgs {
    /// Orientation file (one of f, b, . per edge) or `codeword:i`, numbered from 1.
    pub first: String,
    pub second: String,
    #[arg(long, default_value = "k4")]
    pub graph: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let command_line = recorded_args(std::env::args().skip(1));
    let mut manifest = RunManifest::new(command_line, cli.seed);
    let start = Instant::now();
    let result = commands::run(&cli, &mut manifest);
    if cli.timing {
        manifest.timing_ms = Some(start.elapsed().as_millis());
    }
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(error_status(&e) as u8);
        }
    };
    let text = match cli.format {
        Format::Json => output::json(&report, &manifest),
        Format::Table => Ok(output::table(&report, &manifest)),
    };
    match text {
        Ok(t) => print!("{t}"),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    if let Some(dir) = &cli.out {
        if let Err(e) = output::write_out(dir, &report, &manifest) {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.status.code() as u8)
}

/// The command line minus flags that must not change the output: worker
/// count and output directory.
fn recorded_args(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip_next = false;
    for a in args {
        if std::mem::take(&mut skip_next) {
            continue;
        }
        match a.as_str() {
            "--workers" | "--out" => skip_next = true,
            _ if a.starts_with("--workers=") || a.starts_with("--out=") => {}
            _ => out.push(a),
        }
    }
    out
}

fn error_status(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<gadgetry::Error>() {
        Some(gadgetry::Error::Verification(_)) => Status::Verification.code(),
        Some(gadgetry::Error::CapExceeded(_)) => Status::Bounded.code(),
        _ => 1,
    }
}
