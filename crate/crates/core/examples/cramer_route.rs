//! P_n from determinant ratios of the composition system, against the Gram basis.

use rhopoly::orthopoly::{cramer_recurrence, cramer_sequence, d_pattern_report, gram_construct, route_agreement, theorem1_checks};
use rhopoly::special::WeightKind;
use rhopoly::PrecisionContext;

fn main() -> rhopoly::Result<()> {
    let ctx = PrecisionContext::default();
    let nu = ctx.real(0.25);
    let n_max = 3;

    let gram = gram_construct(&WeightKind::rho_sq(&nu)?, n_max, &ctx)?;
    let systems = cramer_sequence(&nu, n_max, &ctx)?;
    for s in &systems {
        let r = route_agreement(&format!("P_{}", s.n), gram.poly(s.n), &s.poly, &ctx);
        println!("{r}   hadamard ratio {:.2e}", s.hadamard_ratio.to_f64());
    }

    println!();
    for w in systems.windows(2) {
        let (a, b) = cramer_recurrence(&w[0], &w[1]);
        let n = w[0].n;
        println!("A_{} = {:.20}  (gram {:.20})", n + 1, a, gram.a(n + 1));
        println!("B_{n} = {:.20}  (gram {:.20})", b, gram.b(n));
    }

    println!();
    for r in theorem1_checks(&nu, 2, &ctx)? {
        println!("{r}");
    }
    println!();
    for r in d_pattern_report(&nu, 1, 2, &ctx)? {
        println!("{r}");
    }
    Ok(())
}
