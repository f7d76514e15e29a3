//! `anyonc`: validation, condensation, order parameters, sweeps, enumeration
//! and duality search from the command line.
//!
//! Exit codes: 0 on success, 1 when a check fails (validation, bound), 2 on
//! usage, I/O or schema errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyon_condensation::catalog;
use anyon_condensation::channels::{lift, restrict, round_trip};
use anyon_condensation::duality::{find_dualities, verify_duality};
use anyon_condensation::entropy::order_parameter;
use anyon_condensation::enumerate::enumerate_branchings;
use anyon_condensation::io::{self as aio, Document};
use anyon_condensation::sampling::seeded;
use anyon_condensation::sweep::write_csv;
use anyon_condensation::{
    AnyonSystem, BranchingData, CondensableAlgebraView, Error, KrausSet, LogBase, SectorState,
    Tolerance,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

#[derive(Debug, Parser)]
#[command(
    name = "anyonc",
    version,
    about = "Anyon condensation channels and order parameters"
)]
struct Cli {
    /// Numerical tolerance for validation and state normalization.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    tolerance: f64,
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Subdivisions per axis for `sweep`.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    grid_resolution: u32,
    #[command(subcommand)]
    command: Command,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate system or branching files and catalog entries.
    Validate {
        files: Vec<PathBuf>,
        /// Catalog entries to validate as well.
        #[arg(long = "catalog")]
        catalog: Vec<String>,
    },
    /// Restrict a state, then lift it back.
    Condense {
        #[command(flatten)]
        branching: BranchingArg,
        #[command(flatten)]
        state: StateArg,
        /// Also apply the explicit Kraus matrices and report their checks.
        #[arg(long)]
        kraus: bool,
    },
    /// Order parameter of a state.
    Entropy {
        #[command(flatten)]
        branching: BranchingArg,
        #[command(flatten)]
        state: StateArg,
    },
    /// Order parameter over the simplex grid, as CSV.
    Sweep {
        #[command(flatten)]
        branching: BranchingArg,
    },
    /// Integer branching solutions for a vacuum column.
    Enumerate {
        /// Source system file.
        #[arg(
            long,
            conflicts_with = "catalog_system",
            required_unless_present = "catalog_system"
        )]
        system: Option<PathBuf>,
        /// Built-in source system: toric, repS3 or zN.
        #[arg(long)]
        catalog_system: Option<String>,
        /// Multiplicity of each source sector in the condensate, e.g. 1,1,0,0.
        #[arg(long, value_delimiter = ',', required = true)]
        vacuum_column: Vec<u32>,
        #[arg(long, default_value_t = 4)]
        max_sectors: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: u32,
    },
    /// Permutation dualities between two condensations.
    Duality {
        #[arg(
            long,
            conflicts_with = "catalog_a",
            required_unless_present = "catalog_a"
        )]
        a: Option<PathBuf>,
        #[arg(long)]
        catalog_a: Option<String>,
        #[arg(
            long,
            conflicts_with = "catalog_b",
            required_unless_present = "catalog_b"
        )]
        b: Option<PathBuf>,
        #[arg(long)]
        catalog_b: Option<String>,
        /// Random states per duality for the channel check.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest label count for the permutation search.
        #[arg(long, default_value_t = anyon_condensation::duality::DEFAULT_SEARCH_CAP)]
        cap: usize,
    },
    /// Built-in entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List entry ids.
    List,
    /// Print one entry with its reference values.
    Show { id: String },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct BranchingArg {
    /// Branching file.
    #[arg(long)]
    branching: Option<PathBuf>,
    /// Built-in catalog entry.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct StateArg {
    /// Comma-separated probabilities in source label order; `1/3` is exact.
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    /// State file `{"probs": [..]}`.
    #[arg(long)]
    state_file: Option<PathBuf>,
}

enum Failure {
    /// A check ran and failed; the report was still written.
    Domain,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Schema { .. }
        | Error::SchemaVersion { .. }
        | Error::ParseNumber(_)
        | Error::UnknownCatalogEntry(_) => 2,
        _ => 1,
    }
}

struct Ctx {
    tol: Tolerance,
    base: LogBase,
    seed: u64,
    output: Option<PathBuf>,
    resolution: u32,
}

impl Ctx {
    fn sink(&self) -> Result<Box<dyn Write>, Error> {
        match &self.output {
            Some(path) => fs::File::create(path)
                .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
                .map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                }),
            None => Ok(Box::new(io::stdout().lock())),
        }
    }

    fn emit(&self, value: &Value) -> Result<(), Error> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        let mut out = self.sink()?;
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|source| Error::Io {
                path: self.output.clone().unwrap_or_else(|| "<stdout>".into()),
                source,
            })
    }
}

fn load_branching(arg: &BranchingArg) -> Result<BranchingData, Error> {
    match (&arg.branching, &arg.catalog) {
        (Some(path), _) => aio::load_branching(path),
        (None, Some(id)) => Ok(catalog::entry(id)?.branching),
        (None, None) => unreachable!("clap requires one of the two"),
    }
}

fn either(path: &Option<PathBuf>, id: &Option<String>) -> Result<BranchingData, Error> {
    load_branching(&BranchingArg {
        branching: path.clone(),
        catalog: id.clone(),
    })
}

fn load_state(
    arg: &StateArg,
    system: &Arc<AnyonSystem>,
    tol: Tolerance,
) -> Result<SectorState, Error> {
    match (&arg.state, &arg.state_file) {
        (Some(list), _) => {
            SectorState::with_tolerance(system.clone(), aio::parse_probability_list(list)?, tol)
        }
        (None, Some(path)) => aio::load_state(path, system, tol),
        (None, None) => unreachable!("clap requires one of the two"),
    }
}

fn labeled(state: &SectorState) -> Value {
    let map: Map<String, Value> = state
        .system()
        .labels()
        .iter()
        .zip(state.probs())
        .map(|(l, &p)| (l.to_string(), json!(p)))
        .collect();
    Value::Object(map)
}

fn pairs(list: Vec<(String, String)>) -> Value {
    Value::Object(
        list.into_iter()
            .map(|(a, b)| (a, Value::String(b)))
            .collect(),
    )
}

fn validate(ctx: &Ctx, files: &[PathBuf], ids: &[String]) -> Result<(), Failure> {
    if files.is_empty() && ids.is_empty() {
        return Err(Error::Schema {
            path: String::new(),
            message: "nothing to validate: pass files or --catalog ids".into(),
        }
        .into());
    }
    let mut reports = Vec::new();
    let mut all_valid = true;
    let mut push = |name: String, doc: &Document| {
        let (kind, report) = match doc {
            Document::System(s) => ("system", s.validate(ctx.tol)),
            Document::Branching(b) => ("branching", b.validate(ctx.tol)),
        };
        all_valid &= report.is_valid();
        let messages: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        reports.push(json!({
            "input": name,
            "kind": kind,
            "valid": report.is_valid(),
            "messages": messages,
            "violations": report.violations,
            "unchecked": report.unchecked,
            "residuals": report.residuals,
        }));
    };
    for path in files {
        push(path.display().to_string(), &aio::load(path)?);
    }
    for id in ids {
        push(
            format!("catalog:{id}"),
            &Document::Branching(catalog::entry(id)?.branching),
        );
    }
    ctx.emit(&Value::Array(reports))?;
    if all_valid {
        Ok(())
    } else {
        Err(Failure::Domain)
    }
}

fn condense(ctx: &Ctx, b: &BranchingData, rho: &SectorState, kraus: bool) -> Result<(), Failure> {
    let restricted = restrict(b, rho)?;
    let lifted = lift(b, &restricted)?;
    let mut out = json!({
        "state": labeled(rho),
        "restricted": labeled(&restricted),
        "lifted": labeled(&lifted),
        "jones_index": b.jones_index(),
    });
    if kraus {
        let k = KrausSet::restriction(b);
        let l = KrausSet::lifting(b);
        let image = k.apply(&k.embed_source(b, rho)?);
        out["kraus"] = json!({
            "restricted_diagonal": k.condensed_diagonal(&image),
            "completeness_residual": k.completeness_residual(),
            "lifting_trace_sum": l.trace_sum(),
            "condensed_sectors": b.condensed().len(),
        });
    }
    ctx.emit(&out)?;
    Ok(())
}

fn entropy(ctx: &Ctx, b: &BranchingData, rho: &SectorState) -> Result<(), Failure> {
    let report = order_parameter(b, rho, ctx.base)?;
    let lifted = round_trip(b, rho)?;
    let ok = report.within_bound(ctx.tol);
    let mut value = serde_json::to_value(&report).expect("reports serialize");
    value["lifted"] = labeled(&lifted);
    value["within_bound"] = json!(ok);
    ctx.emit(&value)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Domain)
    }
}

fn sweep(ctx: &Ctx, b: &BranchingData) -> Result<(), Failure> {
    let mut out = ctx.sink()?;
    let summary = write_csv(b, ctx.resolution, ctx.base, &mut out)?;
    out.flush().map_err(|source| Error::Io {
        path: ctx.output.clone().unwrap_or_else(|| "<stdout>".into()),
        source,
    })?;
    if summary.max_order_parameter <= summary.bound + ctx.tol.value() {
        Ok(())
    } else {
        Err(Failure::Domain)
    }
}

fn enumerate(
    ctx: &Ctx,
    source: AnyonSystem,
    column: Vec<u32>,
    max_sectors: usize,
    max_dim: u32,
) -> Result<(), Failure> {
    let source = Arc::new(source);
    let alg = CondensableAlgebraView::new(&source, column)?;
    let found = enumerate_branchings(source, &alg, max_sectors, max_dim)?;
    let docs: Vec<Value> = found
        .into_iter()
        .map(|b| aio::to_value(&Document::Branching(b)))
        .collect();
    ctx.emit(&json!({ "count": docs.len(), "solutions": docs }))?;
    Ok(())
}

fn duality(
    ctx: &Ctx,
    a: &BranchingData,
    b: &BranchingData,
    trials: usize,
    cap: usize,
) -> Result<(), Failure> {
    let found = find_dualities(a, b, cap)?;
    let mut rng = seeded(ctx.seed);
    let mut items = Vec::new();
    let mut all_hold = true;
    for d in &found {
        let check = verify_duality(a, b, d, trials, &mut rng)?;
        all_hold &= check.holds(ctx.tol.value());
        items.push(json!({
            "source_perm": pairs(d.source_map()),
            "condensed_perm": pairs(d.condensed_map()),
            "coefficient_identity": check.coefficient_identity,
            "residual": check.residual,
        }));
    }
    ctx.emit(&json!({ "count": items.len(), "dualities": items }))?;
    if all_hold {
        Ok(())
    } else {
        Err(Failure::Domain)
    }
}

fn catalog_cmd(ctx: &Ctx, action: &CatalogAction) -> Result<(), Failure> {
    match action {
        CatalogAction::List => {
            let items: Vec<Value> = catalog::catalog()
                .into_iter()
                .map(|e| json!({ "id": e.id, "description": e.description, "jones_index": e.branching.jones_index() }))
                .collect();
            ctx.emit(&Value::Array(items))?;
        }
        CatalogAction::Show { id } => {
            let e = catalog::entry(id)?;
            let expected: Vec<Value> = e
                .expected
                .iter()
                .map(|g| {
                    let mut v = serde_json::to_value(g).expect("golden pairs serialize");
                    v["order_parameter"] = json!(ctx.base.from_nats(g.expected()));
                    v
                })
                .collect();
            ctx.emit(&json!({
                "id": e.id,
                "description": e.description,
                "jones_index": e.branching.jones_index(),
                "branching": aio::to_value(&Document::Branching(e.branching)),
                "expected": expected,
            }))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx {
        tol: Tolerance::new(cli.tolerance)?,
        base: if cli.bits {
            LogBase::Bits
        } else {
            LogBase::Natural
        },
        seed: cli.seed,
        output: cli.output,
        resolution: cli.grid_resolution,
    };
    match &cli.command {
        Command::Validate { files, catalog } => validate(&ctx, files, catalog),
        Command::Condense {
            branching,
            state,
            kraus,
        } => {
            let b = load_branching(branching)?;
            let rho = load_state(state, b.source(), ctx.tol)?;
            condense(&ctx, &b, &rho, *kraus)
        }
        Command::Entropy { branching, state } => {
            let b = load_branching(branching)?;
            let rho = load_state(state, b.source(), ctx.tol)?;
            entropy(&ctx, &b, &rho)
        }
        Command::Sweep { branching } => sweep(&ctx, &load_branching(branching)?),
        Command::Enumerate {
            system,
            catalog_system,
            vacuum_column,
            max_sectors,
            max_dim,
        } => {
            let source = match (system, catalog_system) {
                (Some(path), _) => match aio::load(path)? {
                    Document::System(s) => s,
                    Document::Branching(_) => {
                        return Err(Error::Schema {
                            path: String::new(),
                            message: format!(
                                "{} holds a branching, expected a system",
                                path.display()
                            ),
                        }
                        .into())
                    }
                },
                (None, Some(name)) => catalog::system(name)?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            enumerate(&ctx, source, vacuum_column.clone(), *max_sectors, *max_dim)
        }
        Command::Duality {
            a,
            catalog_a,
            b,
            catalog_b,
            trials,
            cap,
        } => duality(
            &ctx,
            &either(a, catalog_a)?,
            &either(b, catalog_b)?,
            *trials,
            *cap,
        ),
        Command::Catalog { action } => catalog_cmd(&ctx, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("anyonc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
