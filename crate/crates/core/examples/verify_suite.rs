//! Runs one named suite and prints a JSON report, as `rhopoly verify` does.
//!
//! cargo run --release --example verify_suite -- remark3

use rhopoly::report::{Parameters, ReportDocument};
use rhopoly::suites::{parse_suite, run, SuiteParams};
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "ode".into());
    let suite = parse_suite(&name)?;
    let ctx = PrecisionContext::default();
    let start = std::time::Instant::now();
    let reports = run(suite, &SuiteParams::default(), &ctx)?;
    let params = Parameters { precision_bits: ctx.bits(), verify_tol: 1e-25, quad_target: 1e-40, ..Default::default() };
    let doc = ReportDocument::new(vec![name], params, &reports, serde_json::Value::Null, start.elapsed().as_secs_f64());
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    std::process::exit(if doc.pass { 0 } else { 1 });
}
