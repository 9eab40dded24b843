//! Pointwise values of ρ_ν, its squares and products, and the two composition kernels.

use rhopoly::composition::{omega_kernel, MeasureKind};
use rhopoly::special::{bessel_k, hermite_kernel, rho};
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    let half = ctx.ratio(1, 2);

    println!("rho_1/2(x) against sqrt(pi) exp(-2 sqrt x)");
    for s in ["0.1", "1", "10"] {
        let x = ctx.parse(s)?;
        let closed = ctx.sqrt_pi() * (-(x.clone().sqrt() * 2u32)).exp();
        let r = rho(&half, &x, &ctx)?;
        println!("  x = {s:>4}  rho = {:.30}  diff = {:.2e}", r, (r.clone() - &closed).to_f64());
    }

    let nu = ctx.real(0.25);
    let x = ctx.one();
    let k = bessel_k(&nu, &(x.clone() * 2u32), &ctx)?;
    let r0 = rho(&nu, &x, &ctx)?;
    let r1 = rho(&(nu.clone() + 1u32), &x, &ctx)?;
    println!("\nnu = 0.25, x = 1");
    println!("  K_nu(2)          = {k:.25}");
    println!("  rho_nu^2         = {:.25}", r0.clone().square());
    println!("  rho_nu+1 rho_nu  = {:.25}", r1 * &r0);

    println!("\nkernels at x = 0.5");
    let x = ctx.real(0.5);
    println!("  Hermite          = {:.25}", hermite_kernel(&x, &ctx)?);
    let jac = MeasureKind::jacobi(ctx.zero(), ctx.one())?;
    println!("  Jacobi (0, 1)    = {:.25}", omega_kernel(&jac, &x, &ctx)?);
    Ok(())
}
