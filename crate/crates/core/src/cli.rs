//! Command-line front end: `weights`, `ortho`, `verify` and `mop`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde_json::{json, Value};

use crate::composition::{omega_kernel, MeasureKind};
use crate::error::{Error, Result};
use crate::multi;
use crate::orthopoly::{
    basis_from_polys, cramer_sequence, gram_construct, orthonormality_check, route_agreement, OrthoBasis, Route, CRAMER_TOL,
};
use crate::poly::Polynomial;
use crate::precision::PrecisionContext;
use crate::report::{format_real, Parameters, ReportDocument, VerificationReport};
use crate::special::{hermite_kernel, rho, WeightKind};
use crate::suites::{self, SuiteParams};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable holding the default working precision in bits.
pub const PRECISION_ENV: &str = "RHOPOLY_PRECISION_BITS";

#[derive(Parser, Debug)]
#[command(name = "rhopoly", version, about = "Polynomials orthogonal against squared Macdonald-function weights")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = 320)]
    pub precision_bits: u32,
    #[arg(long, global = true, default_value_t = 1e-25)]
    pub verify_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-40)]
    pub quad_target: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.precision_bits, self.verify_tol, self.quad_target)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a weight or kernel at one or more points.
    Weights(WeightsArgs),
    /// Construct orthonormal polynomials for ρ_ν².
    Ortho(OrthoArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Multiple orthogonal polynomials and their theorems.
    Mop(MopArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Rho,
    Rho2,
    Product,
    HermiteKernel,
    JacobiKernel,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// Jacobi exponent on (1−t).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Jacobi exponent on t.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Gram,
    Cramer,
    Both,
}

#[derive(Args, Debug)]
pub struct OrthoArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Method::Gram)]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Replaces the suite's default ν grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Vec<String>,
    #[arg(long)]
    pub nmax: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    T4,
    T5,
    T6,
}

#[derive(Args, Debug)]
pub struct MopArgs {
    #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=2))]
    pub kind: Option<u8>,
    #[arg(long, value_enum)]
    pub check: Option<Check>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Explicit degrees (type 1, t4) or multi-index (type 2), as a,b,c.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub degrees: Option<Vec<usize>>,
}

/// What a command produced before rendering.
struct Outcome {
    parameters: Parameters,
    reports: Vec<VerificationReport>,
    data: Value,
    /// Rows for text and CSV output; the first row is the header.
    table: Vec<Vec<String>>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn execute(cli: &Cli, echo: Vec<String>) -> Result<i32> {
    let ctx = cli.run.context()?;
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Weights(a) => weights(a, &ctx)?,
        Command::Ortho(a) => ortho(a, &ctx)?,
        Command::Verify(a) => {
            if cli.run.format == Format::Csv {
                return Err(Error::domain("verify", "suites are written as json or text"));
            }
            verify(a, &ctx)?
        }
        Command::Mop(a) => mop(a, &ctx)?,
    };
    let mut parameters = outcome.parameters;
    parameters.precision_bits = ctx.bits();
    parameters.verify_tol = cli.run.verify_tol;
    parameters.quad_target = cli.run.quad_target;
    let doc = ReportDocument::new(echo, parameters, &outcome.reports, outcome.data, start.elapsed().as_secs_f64());
    let text = match cli.run.format {
        Format::Json => serde_json::to_string_pretty(&doc).map_err(|e| Error::Internal(e.to_string()))? + "\n",
        Format::Csv => render_csv(&outcome.table),
        Format::Text => render_text(&outcome.table, &outcome.reports, doc.pass),
    };
    match &cli.run.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Internal(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(if doc.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn render_csv(table: &[Vec<String>]) -> String {
    table.iter().map(|row| row.join(",") + "\n").collect()
}

fn render_text(table: &[Vec<String>], reports: &[VerificationReport], pass: bool) -> String {
    let mut s = String::new();
    for row in table {
        let _ = writeln!(s, "{}", row.join("  "));
    }
    if !reports.is_empty() {
        if !table.is_empty() {
            s.push('\n');
        }
        for r in reports {
            let _ = writeln!(s, "{r}");
        }
        let failed = reports.iter().filter(|r| !r.ok()).count();
        let _ = writeln!(s, "{} checks, {failed} failed: {}", reports.len(), if pass { "PASS" } else { "FAIL" });
    }
    s
}

fn parse_opt(ctx: &PrecisionContext, v: &Option<String>, flag: &'static str) -> Result<Float> {
    match v {
        Some(s) => ctx.parse(s),
        None => Err(Error::domain("cli", format!("--{flag} is required here"))),
    }
}

fn weights(a: &WeightsArgs, ctx: &PrecisionContext) -> Result<Outcome> {
    let bits = ctx.bits();
    let xs: Vec<Float> = a.x.iter().map(|s| ctx.parse(s)).collect::<Result<_>>()?;
    let mut parameters = Parameters { weight: Some(format!("{:?}", a.which).to_lowercase()), ..Default::default() };
    let nu = match a.which {
        Which::HermiteKernel | Which::JacobiKernel => None,
        _ => Some(parse_opt(ctx, &a.nu, "nu")?),
    };
    parameters.nu = nu.as_ref().map(format_real);
    let jacobi = match a.which {
        Which::JacobiKernel => Some(MeasureKind::jacobi(parse_opt(ctx, &a.alpha, "alpha")?, parse_opt(ctx, &a.beta, "beta")?)?),
        _ => None,
    };
    let mut values = Vec::with_capacity(xs.len());
    for x in &xs {
        let v = match a.which {
            Which::Rho => rho(nu.as_ref().expect("nu"), x, ctx)?,
            Which::Rho2 => rho(nu.as_ref().expect("nu"), x, ctx)?.square(),
            Which::Product => {
                let nu = nu.as_ref().expect("nu");
                rho(nu, x, ctx)? * rho(&Float::with_val(bits, nu + 1u32), x, ctx)?
            }
            Which::HermiteKernel => hermite_kernel(x, ctx)?,
            Which::JacobiKernel => omega_kernel(jacobi.as_ref().expect("jacobi"), x, ctx)?,
        };
        values.push(v);
    }
    let mut table = vec![vec!["x".to_string(), "value".to_string()]];
    table.extend(xs.iter().zip(&values).map(|(x, v)| vec![format_real(x), format_real(v)]));
    let data = json!({
        "points": xs.iter().zip(&values).map(|(x, v)| json!({"x": format_real(x), "value": format_real(v)})).collect::<Vec<_>>()
    });
    Ok(Outcome { parameters, reports: Vec::new(), data, table })
}

fn basis_json(b: &OrthoBasis) -> Value {
    json!({
        "polynomials": b.polys.iter().map(poly_json).collect::<Vec<_>>(),
        "recurrence_a": b.recur_a.iter().map(format_real).collect::<Vec<_>>(),
        "recurrence_b": b.recur_b.iter().map(format_real).collect::<Vec<_>>(),
    })
}

fn poly_json(p: &Polynomial) -> Value {
    Value::from(p.coeffs().iter().map(format_real).collect::<Vec<_>>())
}

fn basis_rows(route: &str, b: &OrthoBasis, table: &mut Vec<Vec<String>>) {
    for (n, p) in b.polys.iter().enumerate() {
        for (k, c) in p.coeffs().iter().enumerate() {
            table.push(vec![route.to_string(), format!("a_{n},{k}"), format_real(c)]);
        }
    }
    for n in 0..b.recur_a.len() {
        table.push(vec![route.to_string(), format!("A_{}", n + 1), format_real(&b.recur_a[n])]);
        table.push(vec![route.to_string(), format!("B_{n}"), format_real(&b.recur_b[n])]);
    }
}

fn ortho(a: &OrthoArgs, ctx: &PrecisionContext) -> Result<Outcome> {
    let nu = ctx.parse(&a.nu)?;
    if !(nu > -0.5) {
        return Err(Error::domain("ortho", format!("nu = {} must exceed -1/2", a.nu)));
    }
    let weight = WeightKind::rho_sq(&nu)?;
    let parameters =
        Parameters { nu: Some(format_real(&nu)), n: Some(a.n as u32), weight: Some("rho_nu^2".into()), ..Default::default() };
    let mut reports = Vec::new();
    let mut data = serde_json::Map::new();
    let mut table = vec![vec!["route".to_string(), "quantity".to_string(), "value".to_string()]];
    let gram = match a.method {
        Method::Gram | Method::Both => Some(gram_construct(&weight, a.n, ctx)?),
        Method::Cramer => None,
    };
    if let Some(g) = &gram {
        reports.extend(orthonormality_check(g, ctx)?);
        data.insert("gram".into(), basis_json(g));
        basis_rows("gram", g, &mut table);
    }
    if a.method != Method::Gram {
        let systems = cramer_sequence(&nu, a.n, ctx)?;
        let basis = basis_from_polys(&weight, systems.iter().map(|s| s.poly.clone()).collect(), Route::Cramer);
        match &gram {
            Some(g) => {
                for s in &systems {
                    reports.push(route_agreement(&format!("cramer vs gram P_{}", s.n), g.poly(s.n), &s.poly, ctx));
                }
            }
            None => reports.extend(orthonormality_check(&basis, &ctx.with_verify_tol(CRAMER_TOL))?),
        }
        data.insert("cramer".into(), basis_json(&basis));
        basis_rows("cramer", &basis, &mut table);
    }
    Ok(Outcome { parameters, reports, data: Value::Object(data), table })
}

fn verify(a: &VerifyArgs, ctx: &PrecisionContext) -> Result<Outcome> {
    let suite = suites::parse_suite(&a.suite)?;
    let nus = if a.nu.is_empty() { None } else { Some(a.nu.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?) };
    let params = SuiteParams { nus: nus.clone(), n_max: a.nmax };
    let reports = suites::run(suite, &params, ctx)?;
    let parameters = Parameters {
        nu: nus.map(|v| v.iter().map(format_real).collect::<Vec<_>>().join(",")),
        n: a.nmax.map(|n| n as u32),
        weight: Some(format!("suite {suite}")),
        ..Default::default()
    };
    Ok(Outcome { parameters, reports, data: Value::Null, table: Vec::new() })
}

fn triple(d: &Option<Vec<usize>>, default: impl FnOnce() -> Result<(usize, usize, usize)>) -> Result<(usize, usize, usize)> {
    match d {
        Some(v) => Ok((v[0], v[1], v[2])),
        None => default(),
    }
}

fn mop(a: &MopArgs, ctx: &PrecisionContext) -> Result<Outcome> {
    let nu = ctx.parse(&a.nu)?;
    let alpha = ctx.parse(&a.alpha)?;
    let n = a.n;
    let mut parameters = Parameters {
        nu: Some(format_real(&nu)),
        alpha: Some(format_real(&alpha)),
        n: Some(n as u32),
        ..Default::default()
    };
    let mut table = vec![vec!["polynomial".to_string(), "k".to_string(), "coefficient".to_string()]];
    let push_rows = |table: &mut Vec<Vec<String>>, name: &str, p: &Polynomial| {
        for (k, c) in p.coeffs().iter().enumerate() {
            table.push(vec![name.to_string(), k.to_string(), format_real(c)]);
        }
    };
    let (reports, data) = match (a.kind, a.check) {
        (Some(_), Some(_)) | (None, None) => return Err(Error::domain("mop", "give exactly one of --type and --check")),
        (Some(1), None) => {
            let degrees = triple(&a.degrees, || {
                if n == 0 {
                    Err(Error::domain("mop", "type 1 default degrees (n, n-1, n-1) need n >= 1"))
                } else {
                    Ok((n, n - 1, n - 1))
                }
            })?;
            parameters.weight = Some(format!("type 1 {degrees:?}"));
            let s = multi::type1_solve(&nu, &alpha, degrees, ctx)?;
            for (name, p) in ["A", "B", "C"].iter().zip(s.polys()) {
                push_rows(&mut table, name, p);
            }
            let data = json!({
                "degrees": [degrees.0, degrees.1, degrees.2],
                "A": poly_json(&s.a), "B": poly_json(&s.b), "C": poly_json(&s.c),
                "fallback_normalization": s.fallback_normalization,
            });
            (multi::type1_residuals(&s, ctx)?, data)
        }
        (Some(_), None) => {
            let index = triple(&a.degrees, || Ok((n + 1, n, n + 1)))?;
            parameters.weight = Some(format!("type 2 {index:?}"));
            let s = multi::type2_solve(&nu, &alpha, index, ctx)?;
            push_rows(&mut table, "p", &s.p);
            let data = json!({"index": [index.0, index.1, index.2], "p": poly_json(&s.p)});
            (multi::type2_residuals(&s, ctx)?, data)
        }
        (None, Some(Check::T4)) => {
            let degrees = triple(&a.degrees, || Ok((n, n, n)))?;
            parameters.weight = Some(format!("theorem 4 {degrees:?}"));
            (vec![multi::theorem4_rank_check(&nu, degrees, ctx)?], Value::Null)
        }
        (None, Some(Check::T5)) => {
            parameters.weight = Some("theorem 5".into());
            (multi::theorem5_checks(&nu, &alpha, n, ctx)?, Value::Null)
        }
        (None, Some(Check::T6)) => {
            parameters.weight = Some("theorem 6".into());
            (vec![multi::theorem6_check(&nu, &alpha, n, ctx)?], Value::Null)
        }
    };
    if table.len() == 1 {
        table.clear();
    }
    Ok(Outcome { parameters, reports, data, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        run(std::iter::once("rhopoly").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(code(&["weights", "--which", "rho", "--x", "1"]), EXIT_USAGE);
        assert_eq!(code(&["weights", "--which", "nope", "--nu", "1", "--x", "1"]), EXIT_USAGE);
        assert_eq!(code(&["ortho", "--nu", "-0.6", "--n", "2"]), EXIT_USAGE);
        assert_eq!(code(&["verify", "--suite", "bogus"]), EXIT_USAGE);
        assert_eq!(code(&["mop", "--nu", "0.25"]), EXIT_USAGE);
        assert_eq!(code(&["--precision-bits", "16", "weights", "--which", "rho", "--nu", "1", "--x", "1"]), EXIT_USAGE);
    }

    #[test]
    fn cheap_commands_pass() {
        let out = std::env::temp_dir().join(format!("rhopoly-cli-{}.json", std::process::id()));
        let o = out.to_str().unwrap();
        assert_eq!(code(&["weights", "--which", "rho", "--nu", "0.5", "--x", "1", "--output", o]), EXIT_PASS);
        assert_eq!(code(&["verify", "--suite", "remark3", "--format", "json", "--output", o]), EXIT_PASS);
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(doc["schema_version"], "1");
        assert_eq!(doc["pass"], true);
        assert_eq!(doc["results"][0]["eq"], "5.6");
        let _ = std::fs::remove_file(out);
    }
}
