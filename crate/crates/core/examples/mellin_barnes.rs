//! Line integrals for ρ_ν² and ρ_{ν+1}ρ_ν against direct products, and the contour shift.

use rhopoly::special::{mb_default_line_squared, mb_rho_product, mb_rho_squared, mb_rho_squared_on, rho};
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    for nu in [0.25, 0.5] {
        let nu = ctx.real(nu);
        let next = nu.clone() + 1u32;
        for s in ["0.5", "1", "5"] {
            let x = ctx.parse(s)?;
            let r0 = rho(&nu, &x, &ctx)?;
            let r1 = rho(&next, &x, &ctx)?;
            let sq = mb_rho_squared(&nu, &x, &ctx)?;
            let pr = mb_rho_product(&nu, &x, &ctx)?;
            let direct_sq = r0.clone().square();
            let direct_pr = r1 * &r0;
            println!(
                "nu = {} x = {s:>3}  square rel {:.1e}  product rel {:.1e}  levels {}",
                nu.to_f64(),
                ((sq.value - &direct_sq) / &direct_sq).to_f64().abs(),
                ((pr.value - &direct_pr) / &direct_pr).to_f64().abs(),
                sq.levels_used
            );
        }
    }

    let nu = ctx.real(0.25);
    let x = ctx.one();
    let line = mb_default_line_squared(&nu, &ctx);
    let a = mb_rho_squared_on(&nu, &x, &line, &ctx)?.value;
    let b = mb_rho_squared_on(&nu, &x, &(line.clone() + 1.5), &ctx)?.value;
    println!("\nshifting the line from {} to {} changes the value by {:.1e}", line.to_f64(), line.to_f64() + 1.5, (a - b).to_f64());
    Ok(())
}
