//! `ebt` — exact computations in the symbol quotients attached to finite
//! abelian group actions: structure reports, element orders, verification
//! suites, averaging operators and lattice-triple evaluation.

mod cache;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ebt_core::{
    enumerate_symbols, hecke_image, parse_expression, parse_group_spec, parse_variant,
    presented_group, psi_tilde_expr, run_suite, Check, Cone, Error as CoreError,
    FinAbelianGroupSpec, GroupElementClass, HeckeParams, IntMatrix, Lattice, LatticeTriple,
    PresentedAbelianGroup, SuiteOptions, Symbol, SymbolExpression, Variant, SUITE_NAMES,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "ebt",
    version,
    about = "Exact presentations, orders and verification suites for equivariant birational symbol groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure of a presented quotient: generator and relation counts, rank and torsion
    Group(GroupCmd),
    /// Order and reduced coordinates of a symbol expression
    Order(OrderCmd),
    /// Run a named verification suite
    Verify(VerifyCmd),
    /// Apply an averaging operator to an expression and reduce the image
    Hecke(HeckeCmd),
    /// Evaluate a lattice triple (basis, denominator, chi, cone) to a class
    Psi(PsiCmd),
}

#[derive(Args)]
struct PresentationArgs {
    /// Group spec, e.g. "Z/6" or "Z/4 x Z/2"
    #[arg(long)]
    group: String,
    /// Number of symbol entries
    #[arg(long)]
    n: usize,
    /// Quotient variant: B, M, B- or M-
    #[arg(long, default_value = "B")]
    variant: String,
}

#[derive(Args)]
struct CacheArgs {
    /// Cache directory (default: $EBT_CACHE_DIR, then the platform cache dir)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache and recompute everything; writes nothing
    #[arg(long)]
    no_cache: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct GroupCmd {
    #[command(flatten)]
    presentation: PresentationArgs,
    #[command(flatten)]
    cache: CacheArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OrderCmd {
    #[command(flatten)]
    presentation: PresentationArgs,
    /// Symbol expression, e.g. "[1,0] + [6,0]" or "2*[(1,0),(0,1)]"
    #[arg(long)]
    expr: String,
    #[command(flatten)]
    cache: CacheArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyCmd {
    /// Suite name: pn, 001N, lemmas, compare, subdivision or hecke
    #[arg(long)]
    suite: String,
    /// Largest prime modulus for the prime batteries
    #[arg(long)]
    pmax: Option<u64>,
    /// Largest arity for the comparison battery
    #[arg(long)]
    nmax: Option<usize>,
    /// Largest cyclic group order for the comparison battery at arity 2
    #[arg(long = "Nmax")]
    group_order_max: Option<u64>,
    /// Sample count for the randomised subdivision checks
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for the randomised subdivision checks
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct HeckeCmd {
    #[command(flatten)]
    presentation: PresentationArgs,
    /// Prime multiplier, coprime to the group order
    #[arg(long)]
    ell: u64,
    /// Level of the operator
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Symbol expression to apply the operator to
    #[arg(long)]
    expr: String,
    /// Lift the scale guard (n <= 3, ell <= 7)
    #[arg(long)]
    allow_large: bool,
    #[command(flatten)]
    cache: CacheArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PsiCmd {
    /// Group spec, e.g. "Z/5"
    #[arg(long)]
    group: String,
    /// Quotient variant: B or B-
    #[arg(long, default_value = "B")]
    variant: String,
    /// Triple literal: { "basis": [[..]], "denominator": d, "chi": [..], "cone": [[..]] }
    #[arg(long)]
    triple: String,
    #[command(flatten)]
    cache: CacheArgs,
    #[command(flatten)]
    output: OutputArgs,
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GroupReport {
    schema: &'static str,
    command: &'static str,
    group: String,
    n: usize,
    variant: String,
    generators: usize,
    relations: usize,
    rank: usize,
    torsion: Vec<String>,
}

#[derive(Serialize)]
struct ReducedDto {
    torsion: Vec<String>,
    free: Vec<String>,
}

#[derive(Serialize)]
struct OrderReport {
    schema: &'static str,
    command: &'static str,
    group: String,
    n: usize,
    variant: String,
    expr: String,
    order: String,
    reduced_coords: ReducedDto,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    command: &'static str,
    suite: String,
    options: OptionsDto,
    passed: bool,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct OptionsDto {
    pmax: u64,
    nmax: usize,
    group_order_max: u64,
    samples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct ClassReport {
    schema: &'static str,
    command: &'static str,
    group: String,
    n: usize,
    variant: String,
    expr: String,
    image: String,
    coords: Vec<String>,
    reduced_coords: ReducedDto,
    order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
}

fn reduced_dto(class: &GroupElementClass) -> ReducedDto {
    ReducedDto {
        torsion: class
            .reduced()
            .torsion
            .iter()
            .map(|c| c.to_string())
            .collect(),
        free: class.reduced().free.iter().map(|c| c.to_string()).collect(),
    }
}

// ---------------------------------------------------------------------------
// Presentation context (cache-aware)
// ---------------------------------------------------------------------------

struct Context {
    group: FinAbelianGroupSpec,
    n: usize,
    variant: Variant,
    symbols: Vec<Symbol>,
    index: BTreeMap<Symbol, usize>,
    presented: Arc<PresentedAbelianGroup>,
}

impl Context {
    /// Builds the presentation for the requested quotient, going through
    /// the cache unless it is disabled.
    fn load(args: &PresentationArgs, cache: &CacheArgs) -> Result<Context, CoreError> {
        let group = parse_group_spec(&args.group)?;
        let variant = parse_variant(&args.variant)?;
        if args.n == 0 {
            return Err(CoreError::InvalidParameter(
                "the number of symbol entries must be at least 1".into(),
            ));
        }
        if matches!(variant, Variant::Bminus | Variant::Mminus) && group.is_trivial() {
            return Err(CoreError::TrivialGroupVariant(variant.as_str().into()));
        }

        let key = cache::CacheKey::new(&group.canonical_string(), args.n, variant);
        let dir = cache::resolve_cache_dir(cache.cache_dir.as_deref());
        let cached = if cache.no_cache {
            None
        } else {
            cache::load(&dir, &key)
        };
        let (symbols, presented) = match cached {
            Some(presented) => (enumerate_symbols(&group, args.n)?, presented),
            None => {
                let presentation = presented_group(&group, args.n, variant)?;
                let presented = Arc::clone(presentation.presented());
                if !cache.no_cache {
                    cache::store(&dir, &key, &presented);
                }
                (presentation.symbols().to_vec(), presented)
            }
        };
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Context {
            group,
            n: args.n,
            variant,
            symbols,
            index,
            presented,
        })
    }

    /// Reduces a formal symbol sum to its class; unfaithful or wrong-arity
    /// symbols are named in the error.
    fn class_of(&self, expr: &SymbolExpression) -> Result<GroupElementClass, CoreError> {
        let mut coords = vec![BigInt::zero(); self.symbols.len()];
        for (symbol, coeff) in expr.terms() {
            if symbol.len() != self.n {
                return Err(CoreError::InvalidParameter(format!(
                    "symbol {symbol} has {} entries, expected {}",
                    symbol.len(),
                    self.n
                )));
            }
            match self.index.get(symbol) {
                Some(&i) => coords[i] += coeff,
                None => return Err(CoreError::UnfaithfulSymbol(symbol.to_string())),
            }
        }
        Ok(self.presented.class(coords))
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn csv_field(s: &str) -> String {
    if s.contains(['"', ',', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Prints a complete report, exiting quietly if the downstream consumer of
/// a pipe has already closed it.
fn emit(text: &str) {
    use std::io::Write;
    if writeln!(std::io::stdout(), "{text}").is_err() {
        std::process::exit(0);
    }
}

/// Key/value rendering shared by the scalar reports.
fn emit_rows(format: Format, json: &impl Serialize, rows: &[(&str, String)]) {
    use std::fmt::Write;
    let mut out = String::new();
    match format {
        Format::Json => out = serde_json::to_string_pretty(json).expect("reports serialize"),
        Format::Table => {
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(out, "{k:width$}  {v}").unwrap();
            }
            out.pop();
        }
        Format::Csv => {
            out.push_str("key,value");
            for (k, v) in rows {
                write!(out, "\n{},{}", csv_field(k), csv_field(v)).unwrap();
            }
        }
    }
    emit(&out);
}

fn emit_verify(format: Format, report: &VerifyReport) {
    use std::fmt::Write;
    let mut out = String::new();
    match format {
        Format::Json => out = serde_json::to_string_pretty(report).expect("reports serialize"),
        Format::Table => {
            writeln!(out, "suite   {}", report.suite).unwrap();
            write!(out, "passed  {}", report.passed).unwrap();
            for check in &report.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                match &check.detail {
                    Some(detail) => write!(out, "\n  {status}  {}  — {detail}", check.name),
                    None => write!(out, "\n  {status}  {}", check.name),
                }
                .unwrap();
            }
        }
        Format::Csv => {
            out.push_str("name,passed,detail");
            for check in &report.checks {
                write!(
                    out,
                    "\n{},{},{}",
                    csv_field(&check.name),
                    check.passed,
                    csv_field(check.detail.as_deref().unwrap_or(""))
                )
                .unwrap();
            }
        }
    }
    emit(&out);
}

fn class_report(
    command: &'static str,
    ctx: &Context,
    expr_text: &str,
    image: &SymbolExpression,
    ell: Option<u64>,
    r: Option<usize>,
) -> Result<ClassReport, CoreError> {
    let class = ctx.class_of(image)?;
    Ok(ClassReport {
        schema: cache::SCHEMA,
        command,
        group: ctx.group.canonical_string(),
        n: ctx.n,
        variant: ctx.variant.as_str().to_string(),
        expr: expr_text.to_string(),
        image: image.canonical_string(),
        coords: class.coords().iter().map(|c| c.to_string()).collect(),
        reduced_coords: reduced_dto(&class),
        order: class.order().to_string(),
        ell,
        r,
    })
}

fn emit_class_report(format: Format, report: &ClassReport) {
    let mut rows = vec![
        ("group", report.group.clone()),
        ("n", report.n.to_string()),
        ("variant", report.variant.clone()),
        ("expr", report.expr.clone()),
        ("image", report.image.clone()),
        ("order", report.order.to_string()),
        ("torsion coords", report.reduced_coords.torsion.join(" ")),
        ("free coords", report.reduced_coords.free.join(" ")),
    ];
    if let Some(ell) = report.ell {
        rows.insert(3, ("ell", ell.to_string()));
    }
    if let Some(r) = report.r {
        rows.insert(4, ("r", r.to_string()));
    }
    emit_rows(format, report, &rows);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_group(cmd: &GroupCmd) -> Result<u8, CoreError> {
    let ctx = Context::load(&cmd.presentation, &cmd.cache)?;
    let report = GroupReport {
        schema: cache::SCHEMA,
        command: "group",
        group: ctx.group.canonical_string(),
        n: ctx.n,
        variant: ctx.variant.as_str().to_string(),
        generators: ctx.presented.num_generators(),
        relations: ctx.presented.num_relations(),
        rank: ctx.presented.rank(),
        torsion: ctx.presented.torsion().iter().map(|d| d.to_string()).collect(),
    };
    let rows = [
        ("group", report.group.clone()),
        ("n", report.n.to_string()),
        ("variant", report.variant.clone()),
        ("generators", report.generators.to_string()),
        ("relations", report.relations.to_string()),
        ("rank", report.rank.to_string()),
        ("torsion", report.torsion.join(" ")),
    ];
    emit_rows(cmd.output.format, &report, &rows);
    Ok(0)
}

fn cmd_order(cmd: &OrderCmd) -> Result<u8, CoreError> {
    let ctx = Context::load(&cmd.presentation, &cmd.cache)?;
    let expr = parse_expression(&cmd.expr, &ctx.group, ctx.n)?;
    let class = ctx.class_of(&expr)?;
    let report = OrderReport {
        schema: cache::SCHEMA,
        command: "order",
        group: ctx.group.canonical_string(),
        n: ctx.n,
        variant: ctx.variant.as_str().to_string(),
        expr: expr.canonical_string(),
        order: class.order().to_string(),
        reduced_coords: reduced_dto(&class),
    };
    let rows = [
        ("group", report.group.clone()),
        ("n", report.n.to_string()),
        ("variant", report.variant.clone()),
        ("expr", report.expr.clone()),
        ("order", report.order.clone()),
        ("torsion coords", report.reduced_coords.torsion.join(" ")),
        ("free coords", report.reduced_coords.free.join(" ")),
    ];
    emit_rows(cmd.output.format, &report, &rows);
    Ok(0)
}

fn cmd_verify(cmd: &VerifyCmd) -> Result<u8, CoreError> {
    let mut opts = SuiteOptions::default();
    if let Some(pmax) = cmd.pmax {
        opts.pmax = pmax;
    }
    if let Some(nmax) = cmd.nmax {
        opts.nmax = nmax;
    }
    if let Some(m) = cmd.group_order_max {
        opts.group_order_max = m;
    }
    if let Some(samples) = cmd.samples {
        opts.samples = samples;
    }
    if let Some(seed) = cmd.seed {
        opts.seed = seed;
    }
    let suite = run_suite(&cmd.suite, &opts).map_err(|e| match e {
        CoreError::InvalidParameter(msg) => CoreError::InvalidParameter(format!(
            "{msg}; available suites: {}",
            SUITE_NAMES.join(", ")
        )),
        other => other,
    })?;
    let report = VerifyReport {
        schema: cache::SCHEMA,
        command: "verify",
        suite: suite.suite.clone(),
        options: OptionsDto {
            pmax: opts.pmax,
            nmax: opts.nmax,
            group_order_max: opts.group_order_max,
            samples: opts.samples,
            seed: opts.seed,
        },
        passed: suite.passed(),
        checks: suite.checks,
    };
    emit_verify(cmd.output.format, &report);
    Ok(if report.passed { 0 } else { 1 })
}

fn cmd_hecke(cmd: &HeckeCmd) -> Result<u8, CoreError> {
    let ctx = Context::load(&cmd.presentation, &cmd.cache)?;
    if !matches!(ctx.variant, Variant::B | Variant::Bminus) {
        return Err(CoreError::InvalidParameter(
            "averaging operators act on the blow-up quotients (variant B or B-)".into(),
        ));
    }
    let params = if cmd.allow_large {
        HeckeParams::with_override(cmd.ell, cmd.r)
    } else {
        HeckeParams::new(cmd.ell, cmd.r)
    };
    params.validate(&ctx.group, ctx.n)?;
    let expr = parse_expression(&cmd.expr, &ctx.group, ctx.n)?;
    let image = hecke_image(&params, &expr, &ctx.group)?;
    let report = class_report(
        "hecke",
        &ctx,
        &expr.canonical_string(),
        &image,
        Some(cmd.ell),
        Some(cmd.r),
    )?;
    emit_class_report(cmd.output.format, &report);
    Ok(0)
}

/// Triple literal: lattice basis rows with a common denominator, one
/// character coordinate vector per row of the basis, and one generator
/// vector per cone ray. Cyclic-group characters may be bare integers.
#[derive(Deserialize)]
struct TripleDto {
    basis: Vec<Vec<i64>>,
    denominator: i64,
    chi: Vec<CoordsOrScalar>,
    cone: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoordsOrScalar {
    Scalar(i64),
    Coords(Vec<i64>),
}

fn parse_triple(
    input: &str,
    group: &FinAbelianGroupSpec,
) -> Result<LatticeTriple, CoreError> {
    let dto: TripleDto = serde_json::from_str(input)
        .map_err(|e| CoreError::InvalidParameter(format!("triple literal: {e}")))?;
    let n = dto.basis.len();
    if n == 0 || dto.basis.iter().any(|row| row.len() != n) {
        return Err(CoreError::InvalidParameter(
            "triple literal: basis must be a nonempty square matrix".into(),
        ));
    }
    if dto.chi.len() != n {
        return Err(CoreError::InvalidParameter(format!(
            "triple literal: expected {n} character vectors, got {}",
            dto.chi.len()
        )));
    }
    let basis = IntMatrix::from_fn(n, n, |i, j| BigInt::from(dto.basis[i][j]));
    let lattice = Lattice::new(basis, BigInt::from(dto.denominator))?;
    let chi = dto
        .chi
        .iter()
        .map(|c| match c {
            CoordsOrScalar::Scalar(x) => group.character(&[*x]),
            CoordsOrScalar::Coords(xs) => group.character(xs),
        })
        .collect::<Vec<_>>();
    if dto.cone.is_empty() || dto.cone.iter().any(|g| g.len() != n) {
        return Err(CoreError::InvalidParameter(format!(
            "triple literal: cone generators must be nonempty vectors of length {n}"
        )));
    }
    let cols: Vec<Vec<BigInt>> = dto
        .cone
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cone = Cone::from_columns(n, &cols)?;
    LatticeTriple::new(lattice, chi, cone, group)
}

fn cmd_psi(cmd: &PsiCmd) -> Result<u8, CoreError> {
    let group = parse_group_spec(&cmd.group)?;
    let triple = parse_triple(&cmd.triple, &group)?;
    let presentation_args = PresentationArgs {
        group: cmd.group.clone(),
        n: triple.lattice.dim(),
        variant: cmd.variant.clone(),
    };
    let ctx = Context::load(&presentation_args, &cmd.cache)?;
    if !matches!(ctx.variant, Variant::B | Variant::Bminus) {
        return Err(CoreError::InvalidParameter(
            "triples evaluate in the blow-up quotients (variant B or B-)".into(),
        ));
    }
    let image = psi_tilde_expr(&triple, &ctx.group)?;
    let report = class_report("psi", &ctx, &cmd.triple, &image, None, None)?;
    emit_class_report(cmd.output.format, &report);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Group(cmd) => cmd_group(cmd),
        Command::Order(cmd) => cmd_order(cmd),
        Command::Verify(cmd) => cmd_verify(cmd),
        Command::Hecke(cmd) => cmd_hecke(cmd),
        Command::Psi(cmd) => cmd_psi(cmd),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
