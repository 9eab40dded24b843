//! Closed-form moments of ρ_ν², the Gram construction and the three-term recurrence.

use rhopoly::orthopoly::{gram_construct, moments, moments_by_quadrature, orthonormality_check, recurrence_residual};
use rhopoly::special::WeightKind;
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    let nu = ctx.ratio(1, 2);
    let w = WeightKind::rho_sq(&nu)?;

    let closed = moments(&w, 4, &ctx)?;
    let quad = moments_by_quadrature(&w, 4, &ctx)?;
    println!("moments of rho_1/2^2 (pi/8, 3pi/64, ...)");
    for (k, (c, q)) in closed.iter().zip(&quad).enumerate() {
        println!("  mu = {k}  {:.30}  rel diff {:.2e}", c, ((c.clone() - q) / c).to_f64());
    }

    let basis = gram_construct(&w, 4, &ctx)?;
    println!("\northonormal polynomials, coefficients low to high");
    for (n, p) in basis.polys.iter().enumerate() {
        let c: Vec<String> = p.coeffs().iter().map(|c| format!("{:.6e}", c.to_f64())).collect();
        println!("  P_{n}: [{}]", c.join(", "));
    }
    println!("\n  n   A_(n+1)                 B_n");
    for n in 0..basis.recur_a.len() {
        println!("  {n}   {:<22.15e}  {:.15e}", basis.recur_a[n].to_f64(), basis.recur_b[n].to_f64());
    }
    let x = ctx.real(2);
    println!("\nrecurrence residual at x = 2, n = 2: {:.2e}", recurrence_residual(&basis, 2, &x, &ctx)?.to_f64());
    let worst = orthonormality_check(&basis, &ctx)?.into_iter().map(|r| r.residual.to_f64()).fold(0.0, f64::max);
    println!("largest orthonormality residual: {worst:.2e}");
    Ok(())
}
