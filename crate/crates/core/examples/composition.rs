//! Index-transform composition identities for the Laguerre, Hermite and Jacobi measures.

use rhopoly::composition::{identity_sides, prudnikov_check, viskov_check, LaplacePair, MeasureKind};
use rhopoly::{PrecisionContext, Polynomial};

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    let bits = ctx.bits();
    let p = Polynomial::from_coeffs(bits, vec![ctx.real(-1), ctx.real(2)]);
    let q = Polynomial::x(bits);
    let pair = LaplacePair::power(ctx.ratio(1, 2))?;

    let measures = [MeasureKind::laguerre(ctx.ratio(1, 2))?, MeasureKind::Hermite, MeasureKind::jacobi(ctx.zero(), ctx.one())?];
    for m in &measures {
        let (lhs, rhs) = identity_sides(m, &pair, &p, &q, &ctx)?;
        println!("{:<9} [{}]  t-side {:.28}  x-side {:.28}", m.name(), m.eq(), lhs, rhs);
    }

    println!();
    for (n, m) in [(0, 0), (1, 0), (1, 1)] {
        println!("{}", prudnikov_check(&ctx.real(0.5), &ctx.real(0.5), n, m, &ctx)?);
    }
    let psi = LaplacePair::combination(vec![(ctx.one(), ctx.ratio(1, 2)), (ctx.ratio(1, 4), ctx.ratio(-1, 2))])?;
    for n in 1..=3 {
        println!("{}", viskov_check(&psi, n, &ctx)?);
    }
    Ok(())
}
