//! Type 1 and type 2 multiple orthogonal polynomials for (ρ_ν², ρ_{ν+1}², ρ_νρ_{ν+1}).

use rhopoly::multi::{
    remark3_check, theorem4_rank_check, theorem5_checks, theorem6_check, type1_residuals, type1_solve, type2_residuals,
    type2_solve,
};
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    let nu = ctx.real(0.25);
    let alpha = ctx.zero();

    let t1 = type1_solve(&nu, &alpha, (2, 1, 1), &ctx)?;
    println!("type 1, degrees (2, 1, 1)");
    for (name, p) in ["A", "B", "C"].iter().zip(t1.polys()) {
        let c: Vec<String> = p.coeffs().iter().map(|c| format!("{:.12}", c.to_f64())).collect();
        println!("  {name}: [{}]", c.join(", "));
    }
    let worst = type1_residuals(&t1, &ctx)?.iter().map(|r| r.residual.to_f64()).fold(0.0, f64::max);
    println!("  largest replayed residual {worst:.2e}");

    let t2 = type2_solve(&nu, &alpha, (2, 1, 2), &ctx)?;
    let c: Vec<String> = t2.p.coeffs().iter().map(|c| format!("{:.12}", c.to_f64())).collect();
    println!("\ntype 2, index (2, 1, 2): [{}]", c.join(", "));
    for r in type2_residuals(&t2, &ctx)? {
        println!("  {r}");
    }

    println!();
    for r in theorem5_checks(&nu, &ctx.one(), 1, &ctx)? {
        println!("{r}");
    }
    println!("{}", theorem6_check(&nu, &ctx.ratio(1, 2), 1, &ctx)?);
    for v in [0.25, -0.499] {
        println!("{}", theorem4_rank_check(&ctx.real(v), (1, 0, 0), &ctx)?);
    }
    let xs = [ctx.parse("0.1")?, ctx.one(), ctx.real(4)];
    println!("{}", remark3_check(&xs, &ctx)?);
    Ok(())
}
