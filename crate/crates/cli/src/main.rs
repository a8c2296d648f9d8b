//! `sobocert`: certified upper bounds for Sobolev embedding constants on
//! domains with minimally smooth boundary.
//!
//! Subcommands: `catalog` (built-in domains), `constants` (kernel and
//! mollifier constants with moment checks), `bound` (operator-norm,
//! Talenti and embedding constants at fixed parameters), `sweep`
//! (tau- or p-sweeps with argmin selection). Every numerical output is an
//! interval enclosure; reports embed the full input provenance needed to
//! reproduce them bit-exactly.

// `!(x > 0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::FileConfig;
use sobocert::catalog;
use sobocert::interval::Interval;
use sobocert::norms::{
    embedding_constant, embedding_constant_h1, operator_norm, talenti_bound, ConstantSet,
    DomainSpec, ExtensionParams, FormulaVariant, PipelineTolerances,
};
use sobocert::psi::{check_moment, PsiParams, MOMENT_TOL_DEFAULT};
use sobocert::report::{
    sweep_to_csv, to_json_pretty, write_atomic, BoundsReport, ConstantsReport, MomentEntry,
    ReportMeta, SweepReport,
};
use sobocert::special::SobolevExponents;
use sobocert::tuner::{default_tau_grid, sweep_p, sweep_tau, SweepResult};
use sobocert::Error as CoreError;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

type Iv = Interval<f64>;

#[derive(Parser)]
#[command(
    name = "sobocert",
    version,
    about = "Certified Sobolev embedding-constant bounds"
)]
struct Cli {
    /// Declarative TOML config; command-line flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Include wall-clock timings in reports (default output is
    /// byte-identical across runs).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in example domains.
    Catalog(OutputArgs),
    /// Compute the certified kernel and mollifier constants and the
    /// moment-property checks.
    Constants(ConstantsArgs),
    /// Compute certified bounds at fixed parameters.
    Bound(BoundArgs),
    /// Sweep tau (at fixed p) or p (minimizing over tau per point).
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum VariantArg {
    /// First gradient-norm argument exactly as printed.
    AsPrinted,
    /// First gradient-norm argument raised to 1/p.
    Exponentiated,
}

impl From<VariantArg> for FormulaVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsPrinted => FormulaVariant::AsPrinted,
            VariantArg::Exponentiated => FormulaVariant::Exponentiated,
        }
    }
}

#[derive(Args, Default)]
struct OutputArgs {
    /// Output file (default: stdout). Written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Default)]
struct DomainArgs {
    /// Catalog key (see `sobocert catalog`).
    #[arg(long)]
    domain: Option<String>,
    /// Dimension (custom domains).
    #[arg(long)]
    n: Option<u32>,
    /// Uniform Lipschitz bound M of the cover.
    #[arg(long)]
    m_lip: Option<f64>,
    /// Overlap number N of the cover.
    #[arg(long)]
    overlap: Option<u32>,
    /// Cover parameter eps.
    #[arg(long)]
    eps: Option<f64>,
    /// Domain measure (enables the H^1 constant).
    #[arg(long)]
    measure: Option<f64>,
}

#[derive(Args, Default)]
struct ParamArgs {
    /// Stretch parameter tau of the extension operator.
    #[arg(long)]
    tau: Option<f64>,
    /// Regularized-distance parameter xi in [0, 1).
    #[arg(long)]
    xi: Option<f64>,
    /// Weight sigma of the zero-order norm term.
    #[arg(long)]
    sigma: Option<f64>,
    /// Relative safety margin applied at xi = 0.
    #[arg(long)]
    delta: Option<f64>,
    /// Kernel parameter C_omega.
    #[arg(long)]
    c_omega: Option<f64>,
    /// Gradient-norm formula variant.
    #[arg(long, value_enum)]
    formula_variant: Option<VariantArg>,
    /// Width target for the kernel sup constants (mollifier targets scale
    /// along; per-stage overrides live in the config file).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Dimension.
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Target Lebesgue exponent p.
    #[arg(long)]
    p: Option<f64>,
    /// Require the H^1 embedding constant (errors without a measure).
    #[arg(long)]
    h1: bool,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum AxisArg {
    Tau,
    P,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Sweep axis.
    #[arg(long, value_enum, default_value = "tau")]
    axis: AxisArg,
    /// Exponent p (tau sweeps).
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated p values (p sweeps).
    #[arg(long)]
    p_list: Option<String>,
    /// Tau grid as start:step:end.
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// CLI failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: 5,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Domain(_) | CoreError::Contract(_) => 3,
            CoreError::MaxRefinement(_) => 4,
            CoreError::Parse(_) => 5,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("SOBOCERT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0);
    let run = || match run_command(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    };
    match threads {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    ExitCode::from(5)
                }
            }
        }
        None => run(),
    }
}

fn run_command(cli: &Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::usage)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Catalog(out) => cmd_catalog(out, &file),
        Command::Constants(args) => cmd_constants(args, &file, cli.timings),
        Command::Bound(args) => cmd_bound(args, &file, cli.timings),
        Command::Sweep(args) => cmd_sweep(args, &file, cli.timings),
    }
}

/// Resolved parameter bundle (CLI over config over defaults).
struct Resolved {
    params: ExtensionParams<f64>,
    c_omega: f64,
    variant: FormulaVariant,
    tols: PipelineTolerances<f64>,
    moment_tol: f64,
}

fn resolve_params(args: &ParamArgs, file: &FileConfig) -> Result<Resolved, Failure> {
    let tau = args.tau.or(file.params.tau).unwrap_or(1.0);
    let xi = args.xi.or(file.params.xi).unwrap_or(0.0);
    let sigma = args.sigma.or(file.params.sigma).unwrap_or(1.0);
    let delta = args.delta.or(file.params.delta).unwrap_or(1e-12);
    let c_omega = args.c_omega.or(file.params.c_omega).unwrap_or(4.83);
    if !(c_omega > 0.0) {
        return Err(Failure::usage("C_omega must be positive"));
    }
    let variant = match (&args.formula_variant, &file.params.formula_variant) {
        (Some(v), _) => (*v).into(),
        (None, Some(s)) => match s.as_str() {
            "as-printed" => FormulaVariant::AsPrinted,
            "exponentiated" => FormulaVariant::Exponentiated,
            other => return Err(Failure::usage(format!("unknown formula variant {other:?}"))),
        },
        (None, None) => FormulaVariant::AsPrinted,
    };
    let params = ExtensionParams::from_f64(tau, xi, delta, sigma).map_err(Failure::from)?;

    let mut tols = PipelineTolerances::default();
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err(Failure::usage("--tol must be positive"));
        }
        // scale the default widths by t / (default kernel width)
        let scale = t / sobocert::psi::SUP_TOL_DEFAULT;
        tols.kernel_sup = Iv::from_f64(t);
        tols.mollifier_i1 = Iv::from_f64(1e-4 * scale);
        tols.mollifier_p = Iv::from_f64(1e-3 * scale);
    }
    if let Some(t) = file.tolerances.kernel_sup {
        tols.kernel_sup = Iv::from_f64(t);
    }
    if let Some(t) = file.tolerances.mollifier_c_rel {
        tols.mollifier_c_rel = Iv::from_f64(t);
    }
    if let Some(t) = file.tolerances.mollifier_i1 {
        tols.mollifier_i1 = Iv::from_f64(t);
    }
    if let Some(t) = file.tolerances.mollifier_p {
        tols.mollifier_p = Iv::from_f64(t);
    }
    let moment_tol = file.tolerances.moment.unwrap_or(MOMENT_TOL_DEFAULT);
    Ok(Resolved {
        params,
        c_omega,
        variant,
        tols,
        moment_tol,
    })
}

fn resolve_domain(args: &DomainArgs, file: &FileConfig) -> Result<DomainSpec<f64>, Failure> {
    let key = args.domain.clone().or_else(|| file.domain.name.clone());
    let mut spec = match key {
        Some(name) => catalog::lookup::<f64>(&name)
            .ok_or_else(|| Failure::usage(format!("unknown catalog domain {name:?}")))?,
        None => {
            let n = args.n.or(file.domain.n).ok_or_else(|| {
                Failure::usage("custom domains need --n, --m-lip, --overlap and --eps")
            })?;
            let m = args
                .m_lip
                .or(file.domain.m_lip)
                .ok_or_else(|| Failure::usage("missing --m-lip"))?;
            let overlap = args
                .overlap
                .or(file.domain.overlap)
                .ok_or_else(|| Failure::usage("missing --overlap"))?;
            let eps = args
                .eps
                .or(file.domain.eps)
                .ok_or_else(|| Failure::usage("missing --eps"))?;
            DomainSpec::new(
                "custom",
                n,
                Iv::from_f64(m),
                overlap,
                Iv::from_f64(eps),
                None,
            )
            .map_err(Failure::from)?
        }
    };
    if let Some(measure) = args.measure.or(file.domain.measure) {
        if !(measure > 0.0) {
            return Err(Failure::usage("--measure must be positive"));
        }
        spec.measure = Some(Iv::from_f64(measure));
    }
    Ok(spec)
}

fn emit(out: &OutputArgs, file: &FileConfig, contents: &str) -> Result<(), Failure> {
    let path = out.out.clone().or_else(|| file.output.path.clone());
    match path {
        Some(p) => write_atomic(&p, contents)
            .map_err(|e| Failure::io(format!("writing {}: {e}", p.display()))),
        None => {
            if contents.ends_with('\n') {
                print!("{contents}");
            } else {
                println!("{contents}");
            }
            Ok(())
        }
    }
}

fn format_of(out: &OutputArgs, file: &FileConfig) -> Result<FormatArg, Failure> {
    if let Some(f) = out.format {
        return Ok(f);
    }
    match file.output.format.as_deref() {
        None => Ok(FormatArg::Json),
        Some("json") => Ok(FormatArg::Json),
        Some("csv") => Ok(FormatArg::Csv),
        Some(other) => Err(Failure::usage(format!("unknown output format {other:?}"))),
    }
}

fn cmd_catalog(out: &OutputArgs, file: &FileConfig) -> Result<(), Failure> {
    match format_of(out, file)? {
        FormatArg::Json => {
            let entries: Vec<DomainSpec<f64>> = catalog::keys()
                .iter()
                .map(|k| catalog::lookup::<f64>(k).expect("catalog key"))
                .collect();
            emit(out, file, &to_json_pretty(&entries).map_err(Failure::from)?)
        }
        FormatArg::Csv => {
            let mut s = String::from("name,n,m_lip,overlap,eps_lo,eps_hi\n");
            for k in catalog::keys() {
                let d = catalog::lookup::<f64>(k).expect("catalog key");
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    d.name,
                    d.n,
                    d.m_lip.lo(),
                    d.overlap,
                    d.eps.lo(),
                    d.eps.hi()
                ));
            }
            emit(out, file, &s)
        }
    }
}

fn cmd_constants(args: &ConstantsArgs, file: &FileConfig, timings: bool) -> Result<(), Failure> {
    if format_of(&args.output, file)? == FormatArg::Csv {
        return Err(Failure::usage("the constants report is JSON-only"));
    }
    let resolved = resolve_params(&args.params, file)?;
    let n = args.n.or(file.exponents.n).unwrap_or(2);
    let start = Instant::now();
    let consts = ConstantSet::compute(n, resolved.c_omega, &resolved.tols)?;
    let psi = PsiParams::new(resolved.c_omega)?;
    let mut moments = Vec::new();
    for m in 0..=3u32 {
        moments.push(MomentEntry {
            m,
            value: check_moment(m, &psi, resolved.moment_tol)?,
        });
    }
    let mut meta = ReportMeta::new("constants", "f64");
    if timings {
        meta.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    let report = ConstantsReport {
        meta,
        n,
        c_omega: Iv::from_f64(resolved.c_omega),
        tolerances: resolved.tols,
        a0: consts.kc.a0,
        a1: consts.kc.a1,
        mollifier_c: consts.mc.c,
        i1: consts.mc.i1,
        p_fraenkel: consts.mc.p,
        moments,
    };
    emit(
        &args.output,
        file,
        &to_json_pretty(&report).map_err(Failure::from)?,
    )
}

fn cmd_bound(args: &BoundArgs, file: &FileConfig, timings: bool) -> Result<(), Failure> {
    if format_of(&args.output, file)? == FormatArg::Csv {
        return Err(Failure::usage("the bound report is JSON-only"));
    }
    let resolved = resolve_params(&args.params, file)?;
    let domain = resolve_domain(&args.domain, file)?;
    let p = args
        .p
        .or(file.exponents.p)
        .ok_or_else(|| Failure::usage("missing exponent --p"))?;
    let e = SobolevExponents::from_f64(domain.n, p)?;
    if args.h1 && domain.measure.is_none() {
        return Err(CoreError::Contract(
            "the H^1 embedding constant needs the domain measure (--measure)".into(),
        )
        .into());
    }

    let start = Instant::now();
    let consts = ConstantSet::compute(domain.n, resolved.c_omega, &resolved.tols)?;
    let mut bounds = Vec::new();
    bounds.push(operator_norm(
        &e,
        &domain,
        &resolved.params,
        &consts,
        resolved.variant,
    )?);
    bounds.push(talenti_bound(&e, &domain, &resolved.params, &consts)?);
    bounds.push(embedding_constant(
        &e,
        &domain,
        &resolved.params,
        &consts,
        resolved.variant,
    )?);
    let q_below_two = e.q().hi() < 2.0;
    if args.h1 || (domain.measure.is_some() && q_below_two) {
        bounds.push(embedding_constant_h1(
            &e,
            &domain,
            &resolved.params,
            &consts,
            resolved.variant,
        )?);
    }
    let mut meta = ReportMeta::new("bound", "f64");
    if timings {
        meta.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    let report = BoundsReport { meta, bounds };
    emit(
        &args.output,
        file,
        &to_json_pretty(&report).map_err(Failure::from)?,
    )
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::usage("grid must be start:step:end"));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Failure::usage("bad grid start"))?;
    let step: f64 = parts[1]
        .parse()
        .map_err(|_| Failure::usage("bad grid step"))?;
    let end: f64 = parts[2]
        .parse()
        .map_err(|_| Failure::usage("bad grid end"))?;
    if !(step > 0.0) || !(start > 0.0) || end < start {
        return Err(Failure::usage("grid needs 0 < start <= end and step > 0"));
    }
    let count = ((end - start) / step).floor() as usize + 1;
    if count < 1 {
        return Err(Failure::usage("empty grid"));
    }
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn cmd_sweep(args: &SweepArgs, file: &FileConfig, timings: bool) -> Result<(), Failure> {
    let resolved = resolve_params(&args.params, file)?;
    let domain = resolve_domain(&args.domain, file)?;
    let tau_grid = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => default_tau_grid(),
    };
    let start = Instant::now();
    let consts = ConstantSet::compute(domain.n, resolved.c_omega, &resolved.tols)?;
    let sweep: SweepResult<f64> = match args.axis {
        AxisArg::Tau => {
            let p = args
                .p
                .or(file.exponents.p)
                .ok_or_else(|| Failure::usage("tau sweeps need --p"))?;
            let e = SobolevExponents::from_f64(domain.n, p)?;
            sweep_tau(
                &e,
                &domain,
                &resolved.params,
                &tau_grid,
                &consts,
                resolved.variant,
            )?
        }
        AxisArg::P => {
            let list = args
                .p_list
                .as_deref()
                .ok_or_else(|| Failure::usage("p sweeps need --p-list"))?;
            let mut ps = Vec::new();
            for item in list.split(',') {
                let v: f64 = item
                    .trim()
                    .parse()
                    .map_err(|_| Failure::usage(format!("bad p value {item:?}")))?;
                ps.push(v);
            }
            if ps.is_empty() {
                return Err(Failure::usage("empty p list"));
            }
            sweep_p(
                &domain,
                &resolved.params,
                &ps,
                &tau_grid,
                &consts,
                resolved.variant,
            )?
        }
    };
    let mut meta = ReportMeta::new("sweep", "f64");
    if timings {
        meta.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    match format_of(&args.output, file)? {
        FormatArg::Json => {
            let report = SweepReport { meta, sweep };
            emit(
                &args.output,
                file,
                &to_json_pretty(&report).map_err(Failure::from)?,
            )
        }
        FormatArg::Csv => emit(&args.output, file, &sweep_to_csv(&sweep)),
    }
}
