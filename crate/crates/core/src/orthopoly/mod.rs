//! Orthonormal polynomials {P_n} for ρ_ν² and related weights.
//!
//! The Gram route factors the Hankel moment matrix. The Laguerre-expansion
//! route (coefficients c, d, f and Cramer's rule) lives in [`cramer`], and the
//! Rodrigues-type machinery in [`rodrigues`].

pub mod cramer;
pub mod rodrigues;

use rug::ops::Pow;
use rug::Float;

pub use cramer::*;
pub use rodrigues::*;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, lower_triangular_inverse, Matrix};
use crate::poly::Polynomial;
use crate::precision::{gamma, PrecisionContext};
use crate::quadrature::{integrate_zero_inf_vec, EndpointProfile, QuadOptions};
use crate::report::VerificationReport;
use crate::special::{rho_exponent_at_zero, RhoEval, WeightKind, WeightTag};

/// Coefficient agreement required between the Gram and Cramer routes.
pub const CRAMER_TOL: f64 = 1e-12;
/// Agreement required of Rodrigues-type evaluations.
pub const RODRIGUES_TOL: f64 = 1e-10;
pub const THEOREM1_TOL: f64 = 1e-15;
/// Largest degree the Cramer route is run to by default.
pub const DEGREE_CAP: usize = 4;

fn positive_gamma(arg: Float, what: &str, ctx: &PrecisionContext) -> Result<Float> {
    if !(arg > 0) {
        return Err(Error::domain("moment", format!("{what} = {arg} must be positive")));
    }
    gamma(&arg, ctx)
}

/// √π Γ(1+μ+2ν)Γ(1+μ+ν)Γ(1+μ) / (2^{1+2ν+2μ} Γ(μ+ν+3/2))
fn rho_sq_moment(nu: &Float, mu: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let g1 = positive_gamma(Float::with_val(bits, mu + 1u32) + Float::with_val(bits, nu * 2u32), "1+mu+2nu", ctx)?;
    let g2 = positive_gamma(Float::with_val(bits, mu + 1u32) + nu, "1+mu+nu", ctx)?;
    let g3 = positive_gamma(Float::with_val(bits, mu + 1u32), "1+mu", ctx)?;
    let g4 = gamma(&(Float::with_val(bits, mu + nu) + 1.5f64), ctx)?;
    let e = Float::with_val(bits, nu + mu) * 2u32 + 1u32;
    let two_pow = Float::with_val(bits, Float::with_val(bits, 2).pow(&e));
    Ok(ctx.sqrt_pi() * g1 * g2 * g3 / (two_pow * g4))
}

/// ∫₀^∞ x^μ w(x) dx in closed form.
pub fn moment(weight: &WeightKind, mu: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let m = Float::with_val(bits, mu + &weight.alpha_power);
    let nu = &weight.nu;
    match weight.tag {
        WeightTag::Rho => {
            let a = positive_gamma(Float::with_val(bits, &m + nu) + 1u32, "nu+mu+1", ctx)?;
            let b = positive_gamma(Float::with_val(bits, &m + 1u32), "mu+1", ctx)?;
            Ok(a * b)
        }
        WeightTag::RhoSq => rho_sq_moment(nu, &m, ctx),
        WeightTag::RhoSqShift => rho_sq_moment(&Float::with_val(bits, nu + 1u32), &m, ctx),
        WeightTag::RhoProd => {
            // Mellin transform of ρ_{ν+1}ρ_ν at s = μ+1.
            let g1 = positive_gamma(Float::with_val(bits, &m + 2u32) + Float::with_val(bits, nu * 2u32), "mu+2+2nu", ctx)?;
            let g2 = positive_gamma(Float::with_val(bits, &m + 1u32) + nu, "mu+1+nu", ctx)?;
            let g3 = positive_gamma(Float::with_val(bits, &m + 1u32), "mu+1", ctx)?;
            let g4 = gamma(&(Float::with_val(bits, &m + nu) + 1.5f64), ctx)?;
            let e = -(Float::with_val(bits, nu + &m) + 1u32);
            let four_pow = Float::with_val(bits, Float::with_val(bits, 4).pow(&e));
            Ok(ctx.sqrt_pi() * four_pow * g1 * g2 * g3 / g4)
        }
    }
}

/// Moments of integer degree 0..=k_max.
pub fn moments(weight: &WeightKind, k_max: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    (0..=k_max).map(|k| moment(weight, &ctx.real(k as u32), ctx)).collect()
}

/// The same moments by quadrature of x^k w(x).
pub fn moments_by_quadrature(weight: &WeightKind, k_max: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    let ev = RhoEval::new(ctx);
    weighted_integrals(weight, &ev, k_max + 1, ctx, |x| {
        let mut out = Vec::with_capacity(k_max + 1);
        let mut p = ctx.one();
        for _ in 0..=k_max {
            out.push(p.clone());
            p *= x;
        }
        out
    })
}

/// ∫ g_i(x) w(x) dx for a vector of integrands g sharing the weight evaluation.
pub fn weighted_integrals(
    weight: &WeightKind,
    ev: &RhoEval,
    n: usize,
    ctx: &PrecisionContext,
    mut g: impl FnMut(&Float) -> Vec<Float>,
) -> Result<Vec<Float>> {
    let opts = QuadOptions::relative(ctx);
    let r = integrate_zero_inf_vec(
        |x| {
            let w = weight.eval(x, ev)?;
            if w.is_zero() {
                return Ok(vec![ctx.zero(); n]);
            }
            Ok(g(x).into_iter().map(|v| v * &w).collect())
        },
        n,
        weight.profile(),
        &opts,
        ctx.bits(),
    )?;
    Ok(r.into_iter().map(|q| q.value).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Gram,
    Cramer,
}

/// P_0, ..., P_N with a_{n,n} > 0 and the recurrence coefficients
/// x P_n = A_{n+1} P_{n+1} + B_n P_n + A_n P_{n−1}.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    pub weight: WeightKind,
    pub polys: Vec<Polynomial>,
    /// recur_a[n] = A_{n+1}, n = 0..N−1.
    pub recur_a: Vec<Float>,
    /// recur_b[n] = B_n, n = 0..N−1.
    pub recur_b: Vec<Float>,
    pub route: Route,
}

impl OrthoBasis {
    pub fn degree_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &Polynomial {
        &self.polys[n]
    }

    /// a_{n,n}
    pub fn leading(&self, n: usize) -> Float {
        self.polys[n].leading()
    }

    /// A_n for 1 ≤ n ≤ N.
    pub fn a(&self, n: usize) -> &Float {
        &self.recur_a[n - 1]
    }

    /// B_n for 0 ≤ n < N.
    pub fn b(&self, n: usize) -> &Float {
        &self.recur_b[n]
    }

    pub fn eval(&self, n: usize, x: &Float) -> Float {
        self.polys[n].eval(x)
    }

    fn from_polys(weight: WeightKind, polys: Vec<Polynomial>, route: Route) -> Self {
        let n = polys.len() - 1;
        let mut recur_a = Vec::with_capacity(n);
        let mut recur_b = Vec::with_capacity(n);
        for k in 0..n {
            let (ak, ak1) = (polys[k].leading(), polys[k + 1].leading());
            recur_a.push(Float::with_val(ak.prec(), &ak / &ak1));
            let bk = if k == 0 { Float::new(ak.prec()) } else { polys[k].coeff(k - 1) };
            let bk1 = polys[k + 1].coeff(k);
            recur_b.push(Float::with_val(ak.prec(), &bk / &ak) - Float::with_val(ak.prec(), &bk1 / &ak1));
        }
        Self { weight, polys, recur_a, recur_b, route }
    }
}

/// Orthonormal basis up to degree n_max by Cholesky of the Hankel moment matrix.
pub fn gram_construct(weight: &WeightKind, n_max: usize, ctx: &PrecisionContext) -> Result<OrthoBasis> {
    let bits = ctx.bits();
    let m = moments(weight, 2 * n_max, ctx)?;
    let h = Matrix::from_fn(n_max + 1, n_max + 1, bits, |i, j| m[i + j].clone());
    let l = cholesky(&h)?;
    let v = lower_triangular_inverse(&l)?;
    let polys = (0..=n_max).map(|n| Polynomial::from_coeffs(bits, v.row(n)[..=n].to_vec())).collect();
    Ok(OrthoBasis::from_polys(weight.clone(), polys, Route::Gram))
}

/// Builds a basis record from externally constructed polynomials.
pub fn basis_from_polys(weight: &WeightKind, polys: Vec<Polynomial>, route: Route) -> OrthoBasis {
    OrthoBasis::from_polys(weight.clone(), polys, route)
}

/// ∫P_nP_m w = δ_{n,m} for all n ≤ m ≤ N, and ∫P_n w x^n = 1/a_{n,n}.
pub fn orthonormality_check(basis: &OrthoBasis, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let n_max = basis.degree_max();
    let pairs: Vec<(usize, usize)> = (0..=n_max).flat_map(|n| (n..=n_max).map(move |m| (n, m))).collect();
    let ev = RhoEval::new(ctx);
    let count = pairs.len() + n_max + 1;
    let vals = weighted_integrals(&basis.weight, &ev, count, ctx, |x| {
        let p: Vec<Float> = basis.polys.iter().map(|q| q.eval(x)).collect();
        let mut out: Vec<Float> = pairs.iter().map(|&(n, m)| Float::with_val(ctx.bits(), &p[n] * &p[m])).collect();
        let mut xn = ctx.one();
        for pn in &p {
            out.push(Float::with_val(ctx.bits(), pn * &xn));
            xn *= x;
        }
        out
    })?;
    let tol = ctx.verify_tol();
    let mut reports = Vec::with_capacity(count);
    for (i, &(n, m)) in pairs.iter().enumerate() {
        let want = if n == m { ctx.one() } else { ctx.zero() };
        reports.push(VerificationReport::compare(
            format!("<P_{n}, P_{m}> nu={}", basis.weight.nu.to_f64()),
            "4.1",
            vals[i].clone(),
            want,
            tol,
            ctx,
        ));
    }
    for n in 0..=n_max {
        let want = ctx.one() / basis.leading(n);
        reports.push(VerificationReport::compare(
            format!("int P_{n} x^{n} w = 1/a_nn nu={}", basis.weight.nu.to_f64()),
            "4.31",
            vals[pairs.len() + n].clone(),
            want,
            tol,
            ctx,
        ));
    }
    Ok(reports)
}

/// |x P_n − A_{n+1}P_{n+1} − B_n P_n − A_n P_{n−1}| relative to the largest term.
pub fn recurrence_residual(basis: &OrthoBasis, n: usize, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    if n + 1 > basis.degree_max() {
        return Err(Error::domain("recurrence_residual", format!("degree {} not constructed", n + 1)));
    }
    let mut terms = vec![
        Float::with_val(bits, x * basis.eval(n, x)),
        -Float::with_val(bits, basis.a(n + 1) * basis.eval(n + 1, x)),
        -Float::with_val(bits, basis.b(n) * basis.eval(n, x)),
    ];
    if n > 0 {
        terms.push(-Float::with_val(bits, basis.a(n) * basis.eval(n - 1, x)));
    }
    let sum = terms.iter().fold(ctx.zero(), |a, b| a + b);
    let scale = terms.iter().map(|t| Float::with_val(bits, t.abs_ref())).fold(ctx.zero(), |a, b| a.max(&b));
    Ok(if scale.is_zero() { scale } else { sum.abs() / scale })
}

/// Integrals of P_n² against ρ_{ν+1}ρ_ν, xρ_νρ_{ν−1}, x²ρ_νρ_{ν−2} and ρ_{ν+2}ρ_ν
/// for n = 0..=n_max, compared with 1/2+ν+n, 1/2+n, B_n − (ν−1)(1/2+n) and
/// B_n + (ν+1)(1/2+ν+n).
pub fn prop6_checks(nu: &Float, n_max: usize, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    if !(*nu > -1) {
        return Err(Error::domain("prop6_check", format!("nu = {nu} must exceed -1")));
    }
    let basis = gram_construct(&WeightKind::rho_sq(nu)?, n_max + 1, ctx)?;
    let orders: Vec<Float> = (-2i32..=2).map(|k| Float::with_val(bits, nu + k)).collect();
    let e: Vec<(f64, bool)> = orders.iter().map(rho_exponent_at_zero).collect();
    let sigmas = [e[3].0 + e[2].0, 1.0 + e[2].0 + e[1].0, 2.0 + e[2].0 + e[0].0, e[4].0 + e[2].0];
    let sigma = sigmas.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut profile = EndpointProfile::new(sigma, crate::quadrature::Decay::SqrtExp);
    if e.iter().any(|v| v.1) {
        profile = profile.with_log();
    }
    let ev = RhoEval::new(ctx);
    let count = 4 * (n_max + 1);
    let r = integrate_zero_inf_vec(
        |x| {
            let r = ev.rho_many(&orders, x)?;
            let x2 = Float::with_val(bits, x.square_ref());
            let w = [
                Float::with_val(bits, &r[3] * &r[2]),
                Float::with_val(bits, &r[2] * &r[1]) * x,
                Float::with_val(bits, &r[2] * &r[0]) * &x2,
                Float::with_val(bits, &r[4] * &r[2]),
            ];
            let mut out = Vec::with_capacity(count);
            for n in 0..=n_max {
                let p2 = Float::with_val(bits, basis.eval(n, x).square_ref());
                out.extend(w.iter().map(|wi| Float::with_val(bits, &p2 * wi)));
            }
            Ok(out)
        },
        count,
        profile,
        &QuadOptions::relative(ctx),
        bits,
    )?;
    let tol = ctx.verify_tol();
    let mut reports = Vec::with_capacity(count);
    for n in 0..=n_max {
        let half_n = Float::with_val(bits, 0.5f64) + n as u32;
        let half_nu_n = Float::with_val(bits, &half_n + nu);
        let b = basis.b(n).clone();
        let want = [
            half_nu_n.clone(),
            half_n.clone(),
            Float::with_val(bits, &b) - Float::with_val(bits, nu - 1u32) * &half_n,
            Float::with_val(bits, &b) + Float::with_val(bits, nu + 1u32) * &half_nu_n,
        ];
        let labels = [
            ("int P^2 rho_(nu+1) rho_nu", "4.5"),
            ("int P^2 x rho_nu rho_(nu-1)", "4.6"),
            ("int P^2 x^2 rho_nu rho_(nu-2)", "4.7"),
            ("int P^2 rho_(nu+2) rho_nu", "4.8"),
        ];
        for (i, ((label, eq), w)) in labels.iter().zip(want).enumerate() {
            reports.push(VerificationReport::compare(
                format!("{label} n={n} nu={}", nu.to_f64()),
                *eq,
                r[4 * n + i].value.clone(),
                w,
                tol,
                ctx,
            ));
        }
    }
    Ok(reports)
}

/// The four Proposition 6 integrals at one degree.
pub fn prop6_check(nu: &Float, n: usize, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let mut all = prop6_checks(nu, n, ctx)?;
    Ok(all.split_off(4 * n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn moment_anchors() {
        let c = ctx();
        let half = c.ratio(1, 2);
        let sq = WeightKind::rho_sq(&half).unwrap();
        let pi = c.pi();
        assert!(c.residual(&moment(&sq, &c.zero(), &c).unwrap(), &(pi.clone() / 8u32)) < 1e-90);
        assert!(c.residual(&moment(&sq, &c.one(), &c).unwrap(), &(pi.clone() * 3u32 / 64u32)) < 1e-90);
        let pr = WeightKind::rho_prod(&half).unwrap();
        assert!(c.residual(&moment(&pr, &c.zero(), &c).unwrap(), &(pi / 8u32)) < 1e-90);
        let rho = WeightKind::new(WeightTag::Rho, half.clone(), c.zero()).unwrap();
        let want = gamma(&c.real(1.5), &c).unwrap();
        assert!(c.residual(&moment(&rho, &c.zero(), &c).unwrap(), &want) < 1e-90);
    }

    #[test]
    fn moment_domain_errors() {
        let c = ctx();
        let w = WeightKind::rho_sq(&c.real(0.25)).unwrap();
        assert!(matches!(moment(&w, &c.real(-1.0), &c), Err(Error::Domain { .. })));
        assert!(WeightKind::rho_sq(&c.real(-0.6)).is_err());
    }

    #[test]
    fn moments_match_quadrature_for_every_tag() {
        let c = ctx();
        let nu = c.real(0.25);
        for tag in [WeightTag::Rho, WeightTag::RhoSq, WeightTag::RhoProd, WeightTag::RhoSqShift] {
            for alpha in [0.0, 0.5] {
                let w = WeightKind::new(tag, nu.clone(), c.real(alpha)).unwrap();
                let exact = moments(&w, 3, &c).unwrap();
                let quad = moments_by_quadrature(&w, 3, &c).unwrap();
                for (k, (a, b)) in exact.iter().zip(&quad).enumerate() {
                    let rel = Float::with_val(c.bits(), b - a).abs() / a;
                    assert!(rel < 1e-30, "{tag:?} alpha={alpha} k={k}");
                }
            }
        }
    }

    #[test]
    fn gram_low_degrees() {
        let c = ctx();
        let w = WeightKind::rho_sq(&c.ratio(1, 2)).unwrap();
        let b = gram_construct(&w, 3, &c).unwrap();
        let p0 = (c.real(8) / c.pi()).sqrt();
        assert!(c.residual(&b.poly(0).coeff(0), &p0) < 1e-90);
        // monic P_1 = x − m_1/m_0 = x − 3/8
        let p1 = b.poly(1);
        let root = -(p1.coeff(0) / p1.coeff(1));
        assert!(c.residual(&root, &c.ratio(3, 8)) < 1e-90);
        assert!(c.residual(b.b(0), &c.ratio(3, 8)) < 1e-90);
        for n in 0..=3 {
            assert!(b.leading(n) > 0);
        }
    }

    #[test]
    fn gram_recurrence_on_grid() {
        let c = ctx();
        for nu in [0.25, 1.5] {
            let w = WeightKind::rho_sq(&c.real(nu)).unwrap();
            let b = gram_construct(&w, 5, &c).unwrap();
            for n in 0..=4 {
                for x in [0.5, 1.0, 2.0, 5.0] {
                    assert!(recurrence_residual(&b, n, &c.real(x), &c).unwrap() < 1e-60);
                }
            }
        }
    }

    #[test]
    fn orthonormality_by_quadrature() {
        let c = ctx();
        let w = WeightKind::rho_sq(&c.ratio(1, 2)).unwrap();
        let b = gram_construct(&w, 3, &c).unwrap();
        let reps = orthonormality_check(&b, &c).unwrap();
        assert!(reps.iter().all(|r| r.passed), "{}", reps.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"));
    }

    #[test]
    fn prod_weight_basis_is_orthonormal() {
        let c = ctx();
        let w = WeightKind::rho_prod(&c.real(0.25)).unwrap();
        let b = gram_construct(&w, 2, &c).unwrap();
        assert!(orthonormality_check(&b, &c).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn prop6_examples() {
        let c = ctx();
        let r = prop6_check(&c.ratio(1, 2), 0, &c).unwrap();
        assert!(c.residual(&r[0].computed, &c.one()) < 1e-25);
        assert!(r.iter().all(|v| v.passed), "{}", r.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"));
        let r = prop6_check(&c.real(0.25), 2, &c).unwrap();
        assert!(c.residual(&r[1].computed, &c.ratio(5, 2)) < 1e-25);
        assert!(r.iter().all(|v| v.passed));
    }
}
