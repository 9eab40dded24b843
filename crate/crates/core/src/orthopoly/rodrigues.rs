//! Rodrigues-type representation of P_n and the generating function.
//!
//! P_n ρ_ν = Σ_k (h_{2n,k}/k!) d^k/dx^k(x^k ρ_ν), where h_{2n,k} are the
//! Laguerre coefficients of q_{2n}(x) = Σ_k a_{n,k} (−1)^k k! x^k L_k^ν(x).

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::precision::{factorial, gamma, pochhammer, PrecisionContext};
use crate::quadrature::{integrate_zero_inf, Decay, EndpointProfile};
use crate::report::VerificationReport;
use crate::rho_calculus::{diff_power, r_poly};
use crate::special::{hyp3f2_terminating, laguerre, laguerre_poly, rho_multi, WeightKind};

use super::{cramer_sequence, gram_construct, CramerSystem};

/// (1+ν)_r ₃F₂(−k, 1+ν+r, 1+r; 1+ν, 1; 1)
fn scaled_3f2(nu: &Float, r: usize, k: usize, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let nu1 = Float::with_val(bits, nu + 1u32);
    let f = hyp3f2_terminating(k as u32, &Float::with_val(bits, &nu1 + r as u32), &ctx.real((r + 1) as u32), &nu1, &ctx.one(), ctx)?;
    Ok(pochhammer(&nu1, r as u32, ctx) * f)
}

/// Weight of D_{n,r} in the Rodrigues sums: −(a_{n,0}/D_n) D_{n,r} r! (1+ν)_r.
fn outer_weight(sys: &CramerSystem, r: usize, ctx: &PrecisionContext) -> Float {
    let bits = ctx.bits();
    let nu1 = Float::with_val(bits, &sys.nu + 1u32);
    -Float::with_val(bits, &sys.a0 * &sys.d_nk[r]) / &sys.d_n * factorial(r as u32, ctx) * pochhammer(&nu1, r as u32, ctx)
}

/// h_{2n,k} = −(a_{n,0}/D_n) Σ_r D_{n,r} r! (1+ν)_r ₃F₂(−k, 1+ν+r, 1+r; 1+ν, 1; 1).
pub fn rodrigues_h_from(sys: &CramerSystem, k: usize, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let nu1 = Float::with_val(bits, &sys.nu + 1u32);
    let mut acc = ctx.zero();
    for r in 0..=sys.n {
        let f = hyp3f2_terminating(k as u32, &Float::with_val(bits, &nu1 + r as u32), &ctx.real((r + 1) as u32), &nu1, &ctx.one(), ctx)?;
        let d = Float::with_val(bits, &sys.d_nk[r] * factorial(r as u32, ctx)) * pochhammer(&nu1, r as u32, ctx);
        acc += d * f;
    }
    Ok(-Float::with_val(bits, &sys.a0 * &acc) / &sys.d_n)
}

pub fn rodrigues_h(nu: &Float, n: usize, k: usize, ctx: &PrecisionContext) -> Result<Float> {
    if k > 2 * n {
        return Err(Error::domain("rodrigues_h", format!("k = {k} exceeds 2n = {}", 2 * n)));
    }
    let sys = cramer_sequence(nu, n, ctx)?.pop().expect("non-empty");
    rodrigues_h_from(&sys, k, ctx)
}

/// q_{2n}(x) = Σ_k a_{n,k} (−1)^k k! x^k L_k^ν(x).
pub fn q2n(p: &Polynomial, nu: &Float, ctx: &PrecisionContext) -> Polynomial {
    let bits = ctx.bits();
    let mut acc = Polynomial::zero(bits);
    for (k, a) in p.coeffs().iter().enumerate() {
        let mut c = Float::with_val(bits, a * factorial(k as u32, ctx));
        if k % 2 == 1 {
            c = -c;
        }
        acc = &acc + &laguerre_poly(k, nu, ctx).shift(k).scale(&c);
    }
    acc
}

/// h_{2n,k} = (k!/Γ(1+ν+k)) ∫ t^ν e^{−t} L_k^ν(t) q_{2n}(t) dt by quadrature.
pub fn rodrigues_h_projection(p: &Polynomial, nu: &Float, k: usize, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let q = q2n(p, nu, ctx);
    let mut profile = EndpointProfile::new(nu.to_f64(), Decay::Exp);
    if nu.is_zero() {
        profile = profile.with_log();
    }
    let r = integrate_zero_inf(
        |t| {
            let w = (Float::with_val(bits, nu * Float::with_val(bits, t.ln_ref())) - t).exp();
            Ok(w * laguerre(k, nu, t, ctx) * q.eval(t))
        },
        profile,
        ctx,
    )?;
    Ok(r.value * factorial(k as u32, ctx) / gamma(&Float::with_val(bits, nu + (k + 1) as u32), ctx)?)
}

/// The four printed closed forms for (1+ν)_r ₃F₂(−k, ...) at k > 2r, 2r, 2r−1, 2r−2.
pub fn hyp_closed_form_checks(nu: &Float, r_max: usize, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    let tol = ctx.verify_tol();
    let fact = |n: usize| factorial(n as u32, ctx);
    let mut out = Vec::new();
    for r in 0..=r_max {
        let tag = format!("r={r} nu={}", nu.to_f64());
        for k in [2 * r + 1, 2 * r + 2] {
            out.push(VerificationReport::compare(format!("k={k} > 2r vanishes {tag}"), "4.41", scaled_3f2(nu, r, k, ctx)?, ctx.zero(), tol, ctx));
        }
        out.push(VerificationReport::compare(
            format!("k=2r {tag}"),
            "4.41",
            scaled_3f2(nu, r, 2 * r, ctx)?,
            fact(2 * r) / fact(r),
            tol,
            ctx,
        ));
        if r == 0 {
            continue;
        }
        let want = -(fact(2 * r - 1) * Float::with_val(bits, nu + (3 * r) as u32) / fact(r - 1));
        out.push(VerificationReport::compare(format!("k=2r-1 {tag}"), "4.41", scaled_3f2(nu, r, 2 * r - 1, ctx)?, want, tol, ctx));
        let rf = ctx.real(r as u32);
        let t1 = Float::with_val(bits, &rf * &rf) * 2u32 * (Float::with_val(bits, nu + (2 * r) as u32) - 1u32) * ((2 * r - 1) as u32);
        let t2 = Float::with_val(bits, &rf * (r - 1) as u32) * (Float::with_val(bits, nu + r as u32) - 1u32) * Float::with_val(bits, nu + r as u32);
        let want = fact(2 * (r - 1)) / (fact(r) * 2u32) * (t1 + t2);
        out.push(VerificationReport::compare(format!("k=2r-2 {tag}"), "4.41", scaled_3f2(nu, r, 2 * r - 2, ctx)?, want, tol, ctx));
    }
    Ok(out)
}

/// Rodrigues double sum as a pair p(x)ρ_ν + q(x)ρ_{ν+1}, with the largest
/// summand coefficient for scaling.
#[derive(Clone, Debug)]
pub struct RodriguesPair {
    pub p: Polynomial,
    pub q: Polynomial,
    pub scale: Float,
}

/// −(a_{n,0}/(D_n ρ_ν)) Σ_r D_{n,r} r!(1+ν)_r Σ_{k≤2r} (1/k!) d^k/dx^k(x^kρ_ν) ₃F₂(−k, ...), kept symbolic.
pub fn rodrigues_pair(sys: &CramerSystem, ctx: &PrecisionContext) -> Result<RodriguesPair> {
    let bits = ctx.bits();
    let nu = &sys.nu;
    let diffs: Vec<(Polynomial, Polynomial)> = (0..=2 * sys.n)
        .map(|k| {
            let e = diff_power(k, nu)?;
            let kf = factorial(k as u32, ctx);
            let p = e.p.to_polynomial().expect("polynomial").scale(&(ctx.one() / &kf));
            let q = e.q.to_polynomial().expect("polynomial").scale(&(ctx.one() / &kf));
            Ok((p, q))
        })
        .collect::<Result<_>>()?;
    let mut p = Polynomial::zero(bits);
    let mut q = Polynomial::zero(bits);
    let mut scale = ctx.zero();
    for r in 0..=sys.n {
        let w = outer_weight(sys, r, ctx);
        for (k, (dp, dq)) in diffs.iter().enumerate().take(2 * r + 1) {
            let c = hyp3f2_terminating(
                k as u32,
                &Float::with_val(bits, nu + (r + 1) as u32),
                &ctx.real((r + 1) as u32),
                &Float::with_val(bits, nu + 1u32),
                &ctx.one(),
                ctx,
            )? * &w;
            let tp = dp.scale(&c);
            let tq = dq.scale(&c);
            scale = scale.max(&tp.max_abs_coeff()).max(&tq.max_abs_coeff());
            p = &p + &tp;
            q = &q + &tq;
        }
    }
    Ok(RodriguesPair { p, q, scale })
}

/// P_n(x) from the Rodrigues-type double sum.
pub fn rodrigues_eval_with(sys: &CramerSystem, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let pair = rodrigues_pair(sys, ctx)?;
    let nus = [sys.nu.clone(), Float::with_val(ctx.bits(), &sys.nu + 1u32)];
    let r = rho_multi(&nus, x, ctx)?;
    Ok(pair.p.eval(x) + pair.q.eval(x) * &r[1] / &r[0])
}

pub fn rodrigues_eval(nu: &Float, n: usize, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let sys = cramer_sequence(nu, n, ctx)?.pop().expect("non-empty");
    rodrigues_eval_with(&sys, x, ctx)
}

/// Corollary 2: P_n as a combination of the ρ_ν-components A of the
/// derivatives, and the aggregate of the ρ_{ν+1}-components B.
#[derive(Clone, Debug)]
pub struct Corollary2 {
    pub a_poly: Polynomial,
    pub b_poly: Polynomial,
    pub b_scale: Float,
}

impl Corollary2 {
    /// max |B-aggregate coefficient| / largest summand coefficient.
    pub fn b_residual(&self) -> Float {
        if self.b_scale.is_zero() {
            return self.b_scale.clone();
        }
        Float::with_val(self.b_scale.prec(), self.b_poly.max_abs_coeff() / &self.b_scale)
    }
}

/// Splits the Rodrigues sum by parity: even orders 2k give A_{k,k−1}, odd
/// orders 2k+1 give A_{k,k}.
pub fn corollary2(sys: &CramerSystem, ctx: &PrecisionContext) -> Result<Corollary2> {
    let bits = ctx.bits();
    let nu = &sys.nu;
    let mut a = Polynomial::zero(bits);
    let mut b = Polynomial::zero(bits);
    let mut b_scale = ctx.zero();
    let hyp = |k: usize, r: usize| {
        hyp3f2_terminating(
            k as u32,
            &Float::with_val(bits, nu + (r + 1) as u32),
            &ctx.real((r + 1) as u32),
            &Float::with_val(bits, nu + 1u32),
            &ctx.one(),
            ctx,
        )
    };
    for r in 0..=sys.n {
        let w = outer_weight(sys, r, ctx);
        let mut add = |order: usize| -> Result<()> {
            let e = diff_power(order, nu)?;
            let c = hyp(order, r)? * &w / factorial(order as u32, ctx);
            let ap = e.p.to_polynomial().expect("polynomial").scale(&c);
            let bp = e.q.to_polynomial().expect("polynomial").scale(&c);
            b_scale = b_scale.clone().max(&bp.max_abs_coeff()).max(&ap.max_abs_coeff());
            a = &a + &ap;
            b = &b + &bp;
            Ok(())
        };
        for k in 0..=r {
            add(2 * k)?;
        }
        for k in 0..r {
            add(2 * k + 1)?;
        }
    }
    Ok(Corollary2 { a_poly: a, b_poly: b, b_scale })
}

pub fn corollary2_eval(nu: &Float, n: usize, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let sys = cramer_sequence(nu, n, ctx)?.pop().expect("non-empty");
    Ok(corollary2(&sys, ctx)?.a_poly.eval(x))
}

/// Σ_{n≤N} P_n(x) z^n/n! by direct summation and by the double-sum form.
#[derive(Clone, Debug)]
pub struct GenPartial {
    pub direct: Float,
    /// Double sum with the Leibniz weight C(k,j)/j!.
    pub double_sum: Float,
    /// Double sum with the weight C(k,j)/(k−j)! as printed.
    pub printed: Float,
    pub difference: Float,
}

/// `polys[n]` gives P_n for the direct sum; `systems[n]` supplies h_{2n,k}.
pub fn generating_partial_with(
    polys: &[Polynomial],
    systems: &[CramerSystem],
    x: &Float,
    z: &Float,
    n_cap: usize,
    ctx: &PrecisionContext,
) -> Result<GenPartial> {
    let bits = ctx.bits();
    if n_cap >= polys.len() || n_cap >= systems.len() {
        return Err(Error::domain("generating_partial", format!("N = {n_cap} exceeds the constructed degree")));
    }
    let nu = &systems[0].nu;
    let nu_m1 = Float::with_val(bits, nu - 1u32);
    let r = rho_multi(&[nu.clone(), Float::with_val(bits, nu + 1u32)], x, ctx)?;
    let ratio = Float::with_val(bits, &r[1] / &r[0]);
    let jmax = 2 * n_cap;
    // x^j ρ_{ν−j} / ρ_ν
    let e: Vec<Float> = (0..=jmax)
        .map(|j| r_poly(j as i64, nu, ctx).eval(x) + r_poly(j as i64 - 1, &nu_m1, ctx).eval(x) * &ratio)
        .collect();
    let mut direct = ctx.zero();
    let mut double_sum = ctx.zero();
    let mut printed = ctx.zero();
    let mut zn = ctx.one();
    for n in 0..=n_cap {
        let w = Float::with_val(bits, &zn / factorial(n as u32, ctx));
        direct += polys[n].eval(x) * &w;
        for k in 0..=2 * n {
            let h = rodrigues_h_from(&systems[n], k, ctx)?;
            let mut s_fix = ctx.zero();
            let mut s_pr = ctx.zero();
            for (j, ej) in e.iter().enumerate().take(k + 1) {
                let bin = Float::with_val(bits, Integer::from(Integer::from(k).binomial(j as u32)));
                let mut t = Float::with_val(bits, &bin * ej);
                if j % 2 == 1 {
                    t = -t;
                }
                s_fix += Float::with_val(bits, &t / factorial(j as u32, ctx));
                s_pr += Float::with_val(bits, &t / factorial((k - j) as u32, ctx));
            }
            double_sum += Float::with_val(bits, &h * &s_fix) * &w;
            printed += Float::with_val(bits, &h * &s_pr) * &w;
        }
        zn *= z;
    }
    let difference = Float::with_val(bits, &direct - &double_sum);
    Ok(GenPartial { direct, double_sum, printed, difference })
}

pub fn generating_partial(nu: &Float, x: &Float, z: &Float, n_cap: usize, ctx: &PrecisionContext) -> Result<GenPartial> {
    let basis = gram_construct(&WeightKind::rho_sq(nu)?, n_cap, ctx)?;
    let systems = cramer_sequence(nu, n_cap, ctx)?;
    generating_partial_with(&basis.polys, &systems, x, z, n_cap, ctx)
}
