use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inobody::bodies::{build_family, Family, FamilyParams, FAMILY_TAGS};
use inobody::export::{report_svg, widths_csv};
use inobody::flagval::{
    common_degree, generic_valuative_set, parse_forms, FormSpace, GenericOptions,
};
use inobody::par::ExecMode;
use inobody::surfzar::{negative_part_on_e, zariski_decompose, SurfaceModel};
use inobody::verify::{check_report_fixture, run, Suite, VerifyConfig, VerifyReport, DEFAULT_SEED};
use inobody::{Error, Rat};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "inobody",
    version,
    about = "Infinitesimal Newton-Okounkov bodies, Borel-fixed shapes and successive minima"
)]
struct Cli {
    /// Master seed for every random choice
    #[arg(long, global = true, env = "INOBODY_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the body of a family and check the bounds on it
    Body(BodyArgs),
    /// Generic valuative set of a space of forms
    Valset(ValsetArgs),
    /// Zariski decomposition on a surface model
    Zariski(ZariskiArgs),
    /// Run the property batteries
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct BodyArgs {
    /// One of product-curves, sym-power, quadric, proj-space, blowup-pn, blowup-p2,
    /// p1xp1-generic, p1xp1-special, jacobian-nonhyper, jacobian-hyper
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<Rat>,
    #[arg(long)]
    u: Option<Rat>,
    #[arg(long)]
    v: Option<Rat>,
    /// Also check the bounds that need a very general point and flag
    #[arg(long)]
    very_general: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ValsetArgs {
    /// Generators as JSON or as `coef:e1,e2,..` lines
    input: PathBuf,
    #[arg(long, default_value_t = inobody::flagval::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = inobody::exactlin::DEFAULT_CHART_BOUND)]
    bound: i64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RayChoice {
    /// Decompose L_t = pi^*L - tE at this t
    #[arg(long)]
    t: Option<Rat>,
    /// Piecewise profile of N(L_t).E over [0, mu]
    #[arg(long)]
    profile: bool,
}

#[derive(Args)]
struct ZariskiArgs {
    model: PathBuf,
    #[command(flatten)]
    ray: RayChoice,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, borel, flagval, surfzar or bodies
    #[arg(long, default_value = "all")]
    suite: String,
    /// Stored body report to re-check
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Smaller batteries
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    sequential: bool,
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }

    fn verdict(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoDecomposition(_)
            | Error::RetryCapExceeded { .. }
            | Error::UnboundedRay
            | Error::IrrationalEndpoint(_)
            | Error::NotBorelFixed(_)
            | Error::OriginNotInBody
            | Error::Invariant(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| Failure::usage(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("artifacts serialize")
}

fn cmd_body(args: &BodyArgs, out: Option<&Path>) -> Result<(), Failure> {
    if !FAMILY_TAGS.contains(&args.family.as_str()) {
        return Err(Failure::usage(format!(
            "unknown family {:?}; expected one of {}",
            args.family,
            FAMILY_TAGS.join(", ")
        )));
    }
    let params = FamilyParams {
        n: args.n,
        a: args.a.clone(),
        u: args.u.clone(),
        v: args.v.clone(),
    };
    let family = Family::from_tag(&args.family, &params)?;
    let report = build_family(&family, args.very_general)?;
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => widths_csv(&report.width_fns),
        Format::Svg => report_svg(&report)?,
    };
    emit(out, &text)?;
    let failed = report.unexpected_failures();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::verdict(format!(
            "failing verdicts: {}",
            failed.join(", ")
        )))
    }
}

#[derive(Serialize)]
struct ValsetOutput<'a> {
    vars: usize,
    degree: u32,
    rank: usize,
    set: &'a inobody::borel::DiscreteSet,
    certificate: &'a inobody::flagval::Certificate,
}

fn cmd_valset(args: &ValsetArgs, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let (vars, forms) = parse_forms(&read(&args.input)?)?;
    let degree = common_degree(&forms)?;
    let space = FormSpace::from_forms(vars, degree, &forms)?;
    let opts = GenericOptions {
        trials: args.trials,
        bound: args.bound,
        ..GenericOptions::default()
    };
    let (set, cert) = generic_valuative_set(&space, seed, &opts)?;
    let text = to_json(&ValsetOutput {
        vars,
        degree,
        rank: space.rank(),
        set: &set,
        certificate: &cert,
    });
    emit(out, &text)
}

#[derive(Serialize)]
struct Decomposition {
    t: Rat,
    positive: Vec<(String, Rat)>,
    negative: Vec<inobody::surfzar::NegativeTerm>,
    positive_square: Rat,
}

fn cmd_zariski(args: &ZariskiArgs, out: Option<&Path>) -> Result<(), Failure> {
    let model = SurfaceModel::from_json(&read(&args.model)?)?;
    let text = match &args.ray.t {
        Some(t) => {
            if t.is_negative() {
                return Err(Failure::usage(format!("t = {t} must be nonnegative")));
            }
            let d = model.ray_class(t);
            let res = zariski_decompose(&model, &d)?;
            to_json(&Decomposition {
                t: t.clone(),
                positive: model
                    .names()
                    .iter()
                    .cloned()
                    .zip(res.positive.iter().cloned())
                    .collect(),
                positive_square: model.intersect(&res.positive, &res.positive),
                negative: res.negative,
            })
        }
        None => to_json(&negative_part_on_e(&model)?),
    };
    emit(out, &text)
}

fn cmd_verify(args: &VerifyArgs, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let suites = Suite::parse_list(&args.suite)?;
    let fixture = match &args.fixture {
        Some(p) => Some(
            serde_json::from_str::<inobody::bodies::BodyReport>(&read(p)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let mut cfg = if args.quick {
        VerifyConfig::quick(seed)
    } else {
        VerifyConfig::new(seed)
    };
    if args.sequential {
        cfg = cfg.with_mode(ExecMode::Sequential);
    }
    let mut report: VerifyReport = match fixture {
        Some(_) if args.suite == "all" => VerifyReport {
            seed,
            results: Vec::new(),
        },
        _ => run(&suites, &cfg),
    };
    if let Some(f) = &fixture {
        report.results.extend(check_report_fixture(f));
    }
    emit(out, &report.to_json())?;
    let failed: Vec<String> = report
        .failures()
        .map(|r| format!("{}/{}", r.suite, r.name))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::verdict(format!(
            "failing properties: {}",
            failed.join(", ")
        )))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.out.as_deref();
    let res = match &cli.command {
        Command::Body(a) => cmd_body(a, out),
        Command::Valset(a) => cmd_valset(a, cli.seed, out),
        Command::Zariski(a) => cmd_zariski(a, out),
        Command::Verify(a) => cmd_verify(a, cli.seed, out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("inobody: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
