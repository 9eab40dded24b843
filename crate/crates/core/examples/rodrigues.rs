//! The Rodrigues-type double sum, its parity split and generating-function partial sums.

use rhopoly::orthopoly::{corollary2, cramer_sequence, generating_partial_with, gram_construct, rodrigues_eval_with};
use rhopoly::special::WeightKind;
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    let nu = ctx.ratio(1, 2);
    let gram = gram_construct(&WeightKind::rho_sq(&nu)?, 3, &ctx)?;
    let systems = cramer_sequence(&nu, 3, &ctx)?;

    for s in &systems {
        for x in [0.5, 2.0] {
            let x = ctx.real(x);
            let direct = gram.eval(s.n, &x);
            let rod = rodrigues_eval_with(s, &x, &ctx)?;
            println!(
                "P_{}({}) direct {:.20}  rodrigues {:.20}  rel {:.1e}",
                s.n,
                x.to_f64(),
                direct,
                rod,
                ((rod.clone() - &direct) / &direct).to_f64().abs()
            );
        }
        println!("  B-aggregate residual {:.2e}", corollary2(s, &ctx)?.b_residual().to_f64());
    }

    let (x, z) = (ctx.one(), ctx.parse("0.1")?);
    println!("\npartial sums of sum P_n(1) z^n / n! at z = 0.1");
    for cap in 0..=3 {
        let g = generating_partial_with(&gram.polys, &systems, &x, &z, cap, &ctx)?;
        println!(
            "  N = {cap}  direct {:.25}  double sum diff {:.1e}  printed weight diff {:.1e}",
            g.direct,
            g.difference.to_f64(),
            (g.printed.clone() - &g.direct).to_f64()
        );
    }
    Ok(())
}
