//! `hdxsym`: command-line front end for the hdxsym library.
//!
//! Every subcommand prints a JSON document (or writes it with `--out`).
//! `verify` runs the check suite and exits with status 1 when any check
//! fails or raises; other errors exit with status 2.

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use hdxsym::efron_stein::{decompose, total_influence};
use hdxsym::expansion::{gamma_certificate, AscentOptions};
use hdxsym::harness::builtins::{
    builtin_function, generate_complex, is_randomized, to_pm1, to_zero_one, BUILTIN_NAMES, GENERATOR_NAMES,
};
use hdxsym::harness::io::{format_complex, format_function, load_complex, load_function, write_atomic};
use hdxsym::harness::report::Status;
use hdxsym::harness::suite::{run_suite, ComplexSource, FunctionSource, Registry, SuiteConfig, JOBS_ENV};
use hdxsym::hyper::{bonami_check, booster_search, globalness, kkl_witness, level_holder_check, operator_form_check};
use hdxsym::symmetrization::{sandwich_check, sym_noise_norm, SandwichParams};
use hdxsym::{FaceFunction, PartiteComplex};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "hdxsym", version, about = "Efron-Stein, symmetrization and hypercontractivity checks on weighted partite complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ComplexArgs {
    /// Complex file, or a generator spec (see `hdxsym gen --help`)
    #[arg(long)]
    complex: String,

    /// Seed for randomized generators and functions
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct FunctionArgs {
    /// Function file, or a builtin such as `majority` or `dictator:0`
    #[arg(long)]
    function: String,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Write the JSON result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral expansion certificate, optionally with q→q brackets
    Certify {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Add a q→q bracket for each value
        #[arg(long, num_args = 1..)]
        q: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Efron-Stein decomposition summary
    Decompose {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Symmetrization sandwich and symmetrized noise norms
    Sym {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, num_args = 1.., default_values_t = [4.0])]
        q: Vec<f64>,
        /// Also report the symmetrized noise norm at this ρ
        #[arg(long)]
        rho: Option<f64>,
        /// c_q for q outside {4, 4/3}
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Globalness, Bonami-type bounds and the operator form
    Hyper {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        function: FunctionArgs,
        /// Even moments for the Bonami and operator-form checks
        #[arg(long, num_args = 1.., default_values_t = [4.0])]
        q: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        rho: f64,
        /// Largest degree i for the Bonami check
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Booster search and KKL witness for a boolean function
    Booster {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long, default_value_t = 0.4)]
        tau: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the check suite
    Verify(VerifyArgs),
    /// Write a generated complex (and optionally a builtin function) to files
    Gen {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Builtin function to tabulate on the complex
        #[arg(long)]
        function: Option<String>,
        /// Where to write the function; required with --function
        #[arg(long, requires = "function")]
        function_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON suite configuration; the flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Complex files or generator specs (repeatable)
    #[arg(long)]
    complex: Vec<String>,
    /// Instances per generator spec, with seeds seed, seed+1, …
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Function files, builtins, or random_pm1 / random_gauss (repeatable)
    #[arg(long)]
    function: Vec<String>,
    /// Check or group names (repeatable); `all` selects everything
    #[arg(long)]
    checks: Vec<String>,
    #[arg(long, num_args = 1..)]
    q: Vec<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// JSON report path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV summary path
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads; defaults to the HDXSYM_JOBS environment variable, then all cores
    #[arg(long)]
    jobs: Option<usize>,
    /// Record per-check runtimes in the report
    #[arg(long)]
    timings: bool,
}

fn checks_help() -> String {
    let registry = Registry::standard();
    let mut s = String::from("Checks (group: name - statement):\n");
    for spec in registry.specs() {
        s.push_str(&format!("  {}: {} - {}\n", spec.group, spec.name, spec.reference));
    }
    s.push_str(&format!("\nThe job count falls back to ${JOBS_ENV}."));
    s
}

fn gen_help() -> String {
    format!("Generators: {}\nBuiltin functions: {}", GENERATOR_NAMES.join(", "), BUILTIN_NAMES.join(", "))
}

fn load_complex_arg(args: &ComplexArgs) -> Result<Arc<PartiteComplex>> {
    let path = Path::new(&args.complex);
    let x = if path.is_file() {
        load_complex(path)?
    } else {
        generate_complex(&args.complex, Some(args.seed))
            .with_context(|| format!("{:?} is neither a readable file nor a generator spec", args.complex))?
    };
    if x.was_renormalized() {
        eprintln!("warning: weights renormalized (total was {})", x.normalization_factor());
    }
    Ok(Arc::new(x))
}

fn load_function_arg(spec: &str, seed: u64, x: &Arc<PartiteComplex>) -> Result<FaceFunction> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(load_function(path, x)?);
    }
    builtin_function(spec, Some(seed), x)
        .with_context(|| format!("{spec:?} is neither a readable file nor a builtin function"))
}

fn emit(value: &Value, out: &OutArgs) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &out.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn certify(complex: &ComplexArgs, qs: &[f64], out: &OutArgs) -> Result<()> {
    let x = load_complex_arg(complex)?;
    let mut cert = gamma_certificate(&x)?;
    for &q in qs {
        cert.add_q(&x, q, &AscentOptions::with_seed(complex.seed))?;
    }
    emit(&serde_json::to_value(&cert)?, out)
}

fn decompose_cmd(complex: &ComplexArgs, function: &FunctionArgs, q: f64, out: &OutArgs) -> Result<()> {
    let x = load_complex_arg(complex)?;
    let f = load_function_arg(&function.function, complex.seed, &x)?;
    let dec = decompose(&f)?;
    let components: Vec<Value> = dec
        .components()
        .map(|(s, c)| json!({ "set": s.to_vec(), "norm_2": c.norm(2.0), "norm_q": c.norm(q) }))
        .collect();
    let profile = dec.level_profile(&f)?;
    emit(
        &json!({
            "d": x.d(),
            "support": x.len(),
            "q": q,
            "expectation": f.expectation(),
            "norm_2_sq": f.moment(2.0),
            "components": components,
            "levels": profile,
            "parseval_slack": profile.parseval_slack(f.moment(2.0)),
            "orthogonality": dec.orthogonality_slack(None),
            "total_influence": total_influence(&f)?,
        }),
        out,
    )
}

fn sym(complex: &ComplexArgs, function: &FunctionArgs, qs: &[f64], rho: Option<f64>, c: Option<f64>, out: &OutArgs) -> Result<()> {
    let x = load_complex_arg(complex)?;
    let f = load_function_arg(&function.function, complex.seed, &x)?;
    let gamma = if x.d() >= 2 { gamma_certificate(&x)?.gamma } else { 0.0 };
    let mut rows = Vec::new();
    for &q in qs {
        let check = sandwich_check(&f, SandwichParams::new(q, c)?, Some(gamma))?;
        let mut row = json!({
            "q": q,
            "sandwich": check,
            "multiplicative_slack": check.multiplicative_slack(),
            "holds": check.holds(1e-9),
        });
        if let Some(rho) = rho {
            row["sym_noise_norm"] = json!(sym_noise_norm(&f, &vec![rho; x.d()], q)?);
        }
        rows.push(row);
    }
    emit(&json!({ "gamma": gamma, "rho": rho, "results": rows }), out)
}

fn hyper(complex: &ComplexArgs, function: &FunctionArgs, qs: &[f64], rho: f64, max_size: usize, out: &OutArgs) -> Result<()> {
    let x = load_complex_arg(complex)?;
    let f = load_function_arg(&function.function, complex.seed, &x)?;
    let top = max_size.min(x.d());
    let mut rows = Vec::new();
    for &q in qs {
        let bonami = (0..=top).map(|i| bonami_check(&f, i, q)).collect::<hdxsym::Result<Vec<_>>>()?;
        rows.push(json!({ "q": q, "bonami": bonami, "operator_form": operator_form_check(&f, rho, q)? }));
    }
    let holder: Vec<Value> = (0..=top)
        .map(|i| level_holder_check(&f, i).map(|(lhs, rhs)| json!({ "i": i, "lhs": lhs, "rhs": rhs })))
        .collect::<hdxsym::Result<_>>()?;
    emit(&json!({ "globalness": globalness(&f)?, "results": rows, "level_holder": holder }), out)
}

fn booster(complex: &ComplexArgs, function: &FunctionArgs, max_size: usize, tau: f64, out: &OutArgs) -> Result<()> {
    let x = load_complex_arg(complex)?;
    let f = load_function_arg(&function.function, complex.seed, &x)?;
    // accept either boolean encoding; each search gets the one it expects
    let (pm1, zero_one) = if f.values().iter().all(|&v| v == 0.0 || v == 1.0) {
        (to_pm1(&f)?, f)
    } else {
        let z = to_zero_one(&f).context("booster search needs a ±1 or {0,1} valued function")?;
        (f, z)
    };
    emit(
        &json!({
            "boosters": booster_search(&pm1, max_size, tau)?,
            "kkl_witness": kkl_witness(&zero_one, max_size)?,
        }),
        out,
    )
}

fn complex_source(spec: &str, seed: u64, count: usize) -> ComplexSource {
    if Path::new(spec).is_file() {
        ComplexSource::File(spec.into())
    } else {
        ComplexSource::Generator {
            spec: spec.to_string(),
            seed: is_randomized(spec).then_some(seed),
            count,
        }
    }
}

fn function_source(spec: &str, seed: u64) -> FunctionSource {
    if Path::new(spec).is_file() {
        FunctionSource::File(spec.into())
    } else if spec == "random_pm1" || spec == "random_gauss" {
        FunctionSource::Random { kind: spec.to_string(), seed, count: 1 }
    } else {
        FunctionSource::Builtin(spec.to_string())
    }
}

fn suite_config(args: &VerifyArgs) -> Result<SuiteConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::new(Vec::new(), Vec::new(), vec!["all".into()]),
    };
    let seed = args.seed.unwrap_or(config.seed);
    config.seed = seed;
    if !args.complex.is_empty() {
        config.complexes = args.complex.iter().map(|c| complex_source(c, seed, args.count)).collect();
    }
    if !args.function.is_empty() {
        config.functions = args.function.iter().map(|f| function_source(f, seed)).collect();
    }
    if !args.checks.is_empty() {
        config.checks = args.checks.clone();
    }
    if !args.q.is_empty() {
        config.q = args.q.clone();
    }
    config.rho = args.rho.unwrap_or(config.rho);
    config.tol = args.tol.unwrap_or(config.tol);
    config.max_size = args.max_size.unwrap_or(config.max_size);
    config.tau = args.tau.unwrap_or(config.tau);
    config.c = args.c.or(config.c);
    config.output = args.out.clone().or(config.output);
    config.csv = args.csv.clone().or(config.csv);
    config.jobs = args.jobs.or(config.jobs);
    config.timings |= args.timings;
    if config.complexes.is_empty() {
        bail!("no complexes given; pass --complex or a --config with complexes");
    }
    Ok(config)
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let config = suite_config(args)?;
    let report = run_suite(&config)?;
    if config.output.is_none() {
        print!("{}", report.to_json());
    }
    eprintln!(
        "{} records: {} pass, {} fail, {} diagnostic, {} error",
        report.records.len(),
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Diagnostic),
        report.count(Status::Error),
    );
    for r in report.records.iter().filter(|r| r.status.is_hard_failure()) {
        let complex = r.params.get("complex").and_then(Value::as_str).unwrap_or("?");
        match &r.error {
            Some(e) => eprintln!("  {} on {complex}: error: {e}", r.name),
            None => eprintln!("  {} on {complex}: slack {:?}", r.name, r.slack),
        }
    }
    Ok(report.hard_failures() == 0)
}

fn gen(complex: &ComplexArgs, out: &OutArgs, function: Option<&str>, function_out: Option<&Path>) -> Result<()> {
    let x = load_complex_arg(complex)?;
    let text = format_complex(&x);
    match &out.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(spec) = function {
        let f = builtin_function(spec, Some(complex.seed), &x)?;
        let path = function_out.context("--function needs --function-out")?;
        write_atomic(path, format_function(&f)?.as_bytes())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Certify { complex, q, out } => certify(complex, q, out)?,
        Command::Decompose { complex, function, q, out } => decompose_cmd(complex, function, *q, out)?,
        Command::Sym { complex, function, q, rho, c, out } => sym(complex, function, q, *rho, *c, out)?,
        Command::Hyper { complex, function, q, rho, max_size, out } => hyper(complex, function, q, *rho, *max_size, out)?,
        Command::Booster { complex, function, max_size, tau, out } => booster(complex, function, *max_size, *tau, out)?,
        Command::Verify(args) => return verify(args),
        Command::Gen { complex, out, function, function_out } => {
            gen(complex, out, function.as_deref(), function_out.as_deref())?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let command = Cli::command()
        .mut_subcommand("verify", |c| c.after_long_help(checks_help()))
        .mut_subcommand("gen", |c| c.after_long_help(gen_help()));
    let cli = match Cli::from_arg_matches(&command.get_matches()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
