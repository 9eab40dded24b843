//! Named verification suites over their default parameter grids.

use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::composition::{prudnikov_check, verify_identity, viskov_check, LaplacePair, MeasureKind};
use crate::error::{Error, Result};
use crate::multi;
use crate::orthopoly::{
    corollary2, cramer_sequence, d_pattern_report, generating_partial_with, gram_construct, hyp_closed_form_checks, moment,
    moments_by_quadrature, orthonormality_check, prop6_checks, rodrigues_eval_with, route_agreement, theorem1_checks,
    RODRIGUES_TOL,
};
use crate::poly::Polynomial;
use crate::precision::PrecisionContext;
use crate::report::VerificationReport;
use crate::rho_calculus::{corollary1_check, ode_residual_h, ode_residual_u};
use crate::special::{mb_rho_product, mb_rho_squared, rho, WeightKind};

/// Tolerance on the Corollary 2 B-aggregate, relative to its largest summand.
pub const COROLLARY2_TOL: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Moments,
    Ode,
    Prop6,
    Theorem1,
    Rodrigues,
    Corollary1,
    Composition,
    Mop,
    Remark3,
    All,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Moments,
        Suite::Ode,
        Suite::Prop6,
        Suite::Theorem1,
        Suite::Rodrigues,
        Suite::Corollary1,
        Suite::Composition,
        Suite::Mop,
        Suite::Remark3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::Ode => "ode",
            Suite::Prop6 => "prop6",
            Suite::Theorem1 => "theorem1",
            Suite::Rodrigues => "rodrigues",
            Suite::Corollary1 => "corollary1",
            Suite::Composition => "composition",
            Suite::Mop => "mop",
            Suite::Remark3 => "remark3",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Overrides for a suite's default grid.
#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub nus: Option<Vec<Float>>,
    pub n_max: Option<usize>,
}

impl SuiteParams {
    fn nus(&self, default: &[f64], ctx: &PrecisionContext) -> Vec<Float> {
        self.nus.clone().unwrap_or_else(|| default.iter().map(|&v| ctx.real(v)).collect())
    }

    fn n_max(&self, default: usize) -> usize {
        self.n_max.unwrap_or(default)
    }
}

pub fn run(suite: Suite, params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Moments => moments_suite(params, ctx),
        Suite::Ode => ode_suite(params, ctx),
        Suite::Prop6 => prop6_suite(params, ctx),
        Suite::Theorem1 => theorem1_suite(params, ctx),
        Suite::Rodrigues => rodrigues_suite(params, ctx),
        Suite::Corollary1 => corollary1_suite(params, ctx),
        Suite::Composition => composition_suite(ctx),
        Suite::Mop => mop_suite(params, ctx),
        Suite::Remark3 => remark3_suite(ctx),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::ALL {
                out.extend(run(s, params, ctx)?);
            }
            Ok(out)
        }
    }
}

fn grid(ctx: &PrecisionContext, xs: &[&str]) -> Result<Vec<Float>> {
    xs.iter().map(|s| ctx.parse(s)).collect()
}

/// Closed-form weight, Mellin–Barnes products, moments against quadrature,
/// and orthonormality of the Gram basis.
pub fn moments_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    let tol = ctx.verify_tol();
    let mut out = Vec::new();
    let half = ctx.ratio(1, 2);
    for x in grid(ctx, &["0.1", "1", "10"])? {
        let want = ctx.sqrt_pi() * Float::with_val(bits, -(Float::with_val(bits, x.sqrt_ref()) * 2u32)).exp();
        out.push(VerificationReport::compare(
            format!("rho_1/2 closed form x={}", x.to_f64()),
            "2.2",
            rho(&half, &x, ctx)?,
            want,
            tol,
            ctx,
        ));
    }
    for nu in params.nus(&[0.25, 0.5], ctx) {
        let next = Float::with_val(bits, &nu + 1u32);
        for x in grid(ctx, &["0.5", "1", "5"])? {
            let r0 = rho(&nu, &x, ctx)?;
            let r1 = rho(&next, &x, ctx)?;
            let tag = format!("nu={} x={}", nu.to_f64(), x.to_f64());
            out.push(VerificationReport::compare(
                format!("Mellin-Barnes rho_nu^2 {tag}"),
                "3.9",
                mb_rho_squared(&nu, &x, ctx)?.value,
                Float::with_val(bits, r0.square_ref()),
                tol,
                ctx,
            ));
            out.push(VerificationReport::compare(
                format!("Mellin-Barnes rho_nu+1 rho_nu {tag}"),
                "3.8",
                mb_rho_product(&nu, &x, ctx)?.value,
                r1 * r0,
                tol,
                ctx,
            ));
        }
    }
    let pi = ctx.pi();
    let anchors = [(0u32, Float::with_val(bits, &pi / 8u32)), (1, pi * 3u32 / 64u32)];
    let w_half = WeightKind::rho_sq(&half)?;
    for (mu, want) in anchors {
        out.push(VerificationReport::compare(
            format!("rho_1/2^2 moment mu={mu} exact"),
            "4.3",
            moment(&w_half, &ctx.real(mu), ctx)?,
            want,
            tol,
            ctx,
        ));
    }
    let k_max = 8;
    for nu in params.nus(&[0.25, 0.5, 1.5], ctx) {
        let w = WeightKind::rho_sq(&nu)?;
        let quad = moments_by_quadrature(&w, k_max, ctx)?;
        for (k, q) in quad.into_iter().enumerate() {
            let closed = moment(&w, &ctx.real(k as u32), ctx)?;
            let scale = Float::with_val(bits, closed.abs_ref());
            out.push(VerificationReport::compare_scaled(
                format!("moment closed form vs quadrature nu={} mu={k}", nu.to_f64()),
                "4.3",
                closed,
                q,
                &scale,
                tol,
                ctx,
            ));
        }
        let basis = gram_construct(&w, params.n_max(4), ctx)?;
        out.extend(orthonormality_check(&basis, ctx)?);
    }
    Ok(out)
}

/// Normalized residuals of the third-order equations for ρ_{ν+1}ρ_ν and ρ_ν².
pub fn ode_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for nu in params.nus(&[0.25, 0.5, 1.5], ctx) {
        for x in grid(ctx, &["0.5", "1", "2", "5"])? {
            let tag = format!("nu={} x={}", nu.to_f64(), x.to_f64());
            out.push(VerificationReport::vanishing(
                format!("ODE for rho_nu+1 rho_nu {tag}"),
                "3.12",
                ode_residual_u(&nu, &x, ctx)?,
                ctx.verify_tol(),
            ));
            out.push(VerificationReport::vanishing(
                format!("ODE for rho_nu^2 {tag}"),
                "3.16",
                ode_residual_h(&nu, &x, ctx)?,
                ctx.verify_tol(),
            ));
        }
    }
    Ok(out)
}

pub fn prop6_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for nu in params.nus(&[0.25, 0.5, 1.0, 1.5], ctx) {
        out.extend(prop6_checks(&nu, params.n_max(4), ctx)?);
    }
    Ok(out)
}

/// Cramer route against Gram, the composition orthogonality, and the
/// d_{m,r} discrepancy report.
pub fn theorem1_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let n_max = params.n_max(3);
    let mut out = Vec::new();
    for nu in params.nus(&[0.25, 0.5], ctx) {
        let gram = gram_construct(&WeightKind::rho_sq(&nu)?, n_max, ctx)?;
        let systems = cramer_sequence(&nu, n_max, ctx)?;
        for s in &systems {
            out.push(route_agreement(&format!("cramer vs gram P_{} nu={}", s.n, nu.to_f64()), gram.poly(s.n), &s.poly, ctx));
        }
        out.extend(theorem1_checks(&nu, n_max, ctx)?);
        out.extend(d_pattern_report(&nu, 2, 4, ctx)?);
    }
    Ok(out)
}

/// Rodrigues evaluation, the ₃F₂ closed forms, Corollary 2 and the generating function.
pub fn rodrigues_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    let n_max = params.n_max(3);
    let rod_tol = ctx.real(RODRIGUES_TOL);
    let b_tol = ctx.real(COROLLARY2_TOL);
    let mut out = Vec::new();
    for nu in params.nus(&[0.25, 0.5], ctx) {
        let gram = gram_construct(&WeightKind::rho_sq(&nu)?, n_max, ctx)?;
        let systems = cramer_sequence(&nu, n_max, ctx)?;
        for s in &systems {
            for x in grid(ctx, &["0.5", "1", "2"])? {
                let direct = gram.eval(s.n, &x);
                let scale = Float::with_val(bits, direct.abs_ref());
                out.push(VerificationReport::compare_scaled(
                    format!("Rodrigues P_{} nu={} x={}", s.n, nu.to_f64(), x.to_f64()),
                    "4.42",
                    rodrigues_eval_with(s, &x, ctx)?,
                    direct,
                    &scale,
                    &rod_tol,
                    ctx,
                ));
            }
            let c2 = corollary2(s, ctx)?;
            out.push(VerificationReport::vanishing(
                format!("Corollary 2 B-aggregate n={} nu={}", s.n, nu.to_f64()),
                "4.43",
                c2.b_residual(),
                &b_tol,
            ));
        }
        out.extend(hyp_closed_form_checks(&nu, n_max, ctx)?);
        let (x, z) = (ctx.one(), ctx.parse("0.1")?);
        for cap in 0..=n_max {
            let g = generating_partial_with(&gram.polys, &systems, &x, &z, cap, ctx)?;
            out.push(VerificationReport::compare(
                format!("generating function partial sum N={cap} nu={}", nu.to_f64()),
                "4.47",
                g.double_sum,
                g.direct.clone(),
                ctx.verify_tol(),
                ctx,
            ));
            let scale = Float::with_val(bits, g.direct.abs_ref()).max(&ctx.one());
            out.push(
                VerificationReport::compare_scaled(
                    format!("generating function printed weight N={cap} nu={}", nu.to_f64()),
                    "4.47",
                    g.printed,
                    g.direct,
                    &scale,
                    ctx.verify_tol(),
                    ctx,
                )
                .informational(),
            );
        }
    }
    Ok(out)
}

pub fn corollary1_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for nu in params.nus(&[0.0, 0.25, 0.5, 1.0, 1.5], ctx) {
        for x in grid(ctx, &["0.5", "1", "2", "5"])? {
            out.extend(corollary1_check(&nu, &x, ctx)?);
        }
    }
    Ok(out)
}

/// The three measure identities for p, q ∈ {1, x, x²} and ψ ∈ {1, x^{1/2}},
/// the orthogonality of Remark 1 and the θ^n closed form.
pub fn composition_suite(ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    let monomials: Vec<Polynomial> = (0..3)
        .map(|k| {
            let mut c = vec![ctx.zero(); k + 1];
            c[k] = ctx.one();
            Polynomial::from_coeffs(bits, c)
        })
        .collect();
    let pairs = [LaplacePair::power(ctx.zero())?, LaplacePair::power(ctx.ratio(1, 2))?];
    let psi_names = ["1", "x^1/2"];
    let measures = [MeasureKind::laguerre(ctx.ratio(1, 2))?, MeasureKind::Hermite, MeasureKind::jacobi(ctx.zero(), ctx.one())?];
    let mut out = Vec::new();
    for measure in &measures {
        for (pair, psi) in pairs.iter().zip(psi_names) {
            for i in 0..3 {
                for j in i..3 {
                    let mut r = verify_identity(measure, pair, &monomials[i], &monomials[j], ctx)?;
                    r.name = format!("{} p=x^{i} q=x^{j} psi={psi}", r.name);
                    out.push(r);
                }
            }
        }
    }
    for (nu, alpha) in [(0.0, 0.0), (0.5, 0.5)] {
        for n in 0..=1 {
            for m in n..=1 {
                out.push(prudnikov_check(&ctx.real(nu), &ctx.real(alpha), n, m, ctx)?);
            }
        }
    }
    let pair = LaplacePair::combination(vec![(ctx.one(), ctx.ratio(1, 2)), (ctx.ratio(1, 4), ctx.ratio(-1, 2))])?;
    for n in 1..=3 {
        out.push(viskov_check(&pair, n, ctx)?);
    }
    Ok(out)
}

/// Type 1 and type 2 residuals for n ≤ 2, Theorems 4–6.
pub fn mop_suite(params: &SuiteParams, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let n_max = params.n_max(2);
    let mut out = Vec::new();
    for nu in params.nus(&[0.25], ctx) {
        for alpha in [ctx.zero(), ctx.ratio(1, 2)] {
            for n in 1..=n_max {
                for degrees in [(n, n - 1, n - 1), (n, n - 1, n)] {
                    let t1 = multi::type1_solve(&nu, &alpha, degrees, ctx)?;
                    out.extend(multi::type1_residuals(&t1, ctx)?);
                }
            }
            for n in 0..=n_max {
                let t2 = multi::type2_solve(&nu, &alpha, (n + 1, n, n + 1), ctx)?;
                out.extend(multi::type2_residuals(&t2, ctx)?);
            }
            for n in 0..=n_max.min(1) {
                out.push(multi::theorem6_check(&nu, &alpha, n, ctx)?);
            }
        }
        for alpha in [ctx.one(), ctx.ratio(1, 2)] {
            for n in 1..=n_max {
                out.extend(multi::theorem5_checks(&nu, &alpha, n, ctx)?);
            }
        }
    }
    for nu in [0.25, -0.25, -0.499] {
        out.push(multi::theorem4_rank_check(&ctx.real(nu), (2, 1, 1), ctx)?);
    }
    Ok(out)
}

pub fn remark3_suite(ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let xs = grid(ctx, &["0.1", "1", "4"])?;
    Ok(vec![multi::remark3_check(&xs, ctx)?])
}

/// Checks that the suite name is one of the known suites.
pub fn parse_suite(s: &str) -> Result<Suite> {
    s.parse().map_err(|e: String| Error::domain("verify", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL.iter().chain(std::iter::once(&Suite::All)) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!(parse_suite("bogus").is_err());
    }

    #[test]
    fn remark3_suite_passes() {
        let c = PrecisionContext::default();
        let r = remark3_suite(&c).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].passed);
    }
}
