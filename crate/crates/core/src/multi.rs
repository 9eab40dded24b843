//! Multiple orthogonality for the weight vector (ρ_ν², ρ_{ν+1}², ρ_νρ_{ν+1}) with a factor x^α.

use rug::Float;

use crate::error::{Error, Result};
use crate::linalg::{nullspace_1d, solve, symmetric_eigenvalues, Matrix};
use crate::orthopoly::moment;
use crate::poly::Polynomial;
use crate::precision::PrecisionContext;
use crate::quadrature::{integrate_zero_inf_vec, Decay, EndpointProfile, QuadOptions};
use crate::report::VerificationReport;
use crate::special::{rho, rho_exponent_at_zero, RhoEval, WeightKind, WeightTag};

/// The three weights, in the order ρ_ν², ρ_{ν+1}², ρ_νρ_{ν+1}.
pub const WEIGHT_TAGS: [WeightTag; 3] = [WeightTag::RhoSq, WeightTag::RhoSqShift, WeightTag::RhoProd];

/// Measure factor x^κ that keeps the Theorem 4 Gram integrals finite down to ν → −1/2.
pub const GRAM_KAPPA: u32 = 2;

/// Step of the five-point derivative used for the (5.23) spot checks.
const DIFF_STEP: f64 = 1e-8;

fn weights(nu: &Float, alpha: &Float) -> Result<[WeightKind; 3]> {
    let mk = |tag| WeightKind::new(tag, nu.clone(), alpha.clone());
    Ok([mk(WEIGHT_TAGS[0])?, mk(WEIGHT_TAGS[1])?, mk(WEIGHT_TAGS[2])?])
}

/// (∫ρ_ν² x^{α+μ}, ∫ρ_{ν+1}² x^{α+μ}, ∫ρ_νρ_{ν+1} x^{α+μ}) in closed form.
pub fn moment_vector(nu: &Float, alpha: &Float, mu: &Float, ctx: &PrecisionContext) -> Result<[Float; 3]> {
    let w = weights(nu, alpha)?;
    Ok([moment(&w[0], mu, ctx)?, moment(&w[1], mu, ctx)?, moment(&w[2], mu, ctx)?])
}

/// Moments at x^{α+k}, k = 0..=k_max, for each of the three weights.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub nu: Float,
    pub alpha: Float,
    pub m: [Vec<Float>; 3],
}

impl MomentTable {
    pub fn new(nu: &Float, alpha: &Float, k_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let w = weights(nu, alpha)?;
        let col = |wk: &WeightKind| -> Result<Vec<Float>> { (0..=k_max).map(|k| moment(wk, &ctx.real(k as u32), ctx)).collect() };
        Ok(Self { nu: nu.clone(), alpha: alpha.clone(), m: [col(&w[0])?, col(&w[1])?, col(&w[2])?] })
    }

    /// Every moment multiplied by `c`.
    pub fn scaled(&self, c: &Float) -> Self {
        let s = |v: &Vec<Float>| v.iter().map(|x| Float::with_val(x.prec(), x * c)).collect();
        Self { nu: self.nu.clone(), alpha: self.alpha.clone(), m: [s(&self.m[0]), s(&self.m[1]), s(&self.m[2])] }
    }
}

/// A ρ_ν² + B ρ_{ν+1}² + C ρ_νρ_{ν+1} annihilating x^{α+m} for m ≤ dA+dB+dC+1.
#[derive(Clone, Debug)]
pub struct Type1Solution {
    pub nu: Float,
    pub alpha: Float,
    pub degrees: (usize, usize, usize),
    pub a: Polynomial,
    pub b: Polynomial,
    pub c: Polynomial,
    /// A's leading coefficient vanished; the largest coefficient was set to 1 instead.
    pub fallback_normalization: bool,
    pub smallest_singular: (Float, Float),
}

impl Type1Solution {
    pub fn polys(&self) -> [&Polynomial; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn conditions(&self) -> usize {
        self.degrees.0 + self.degrees.1 + self.degrees.2 + 2
    }

    /// q(x).
    pub fn q(&self, x: &Float, ev: &RhoEval) -> Result<Float> {
        let (terms, _) = q_terms(self.polys(), &self.nu, x, ev)?;
        Ok(terms)
    }

    /// The coefficient vector (A, B, C) with the given degree slots.
    fn flat(&self, slots: (usize, usize, usize)) -> Vec<Float> {
        let mut v = Vec::new();
        for (p, d) in [(&self.a, slots.0), (&self.b, slots.1), (&self.c, slots.2)] {
            v.extend((0..=d).map(|k| p.coeff(k)));
        }
        v
    }
}

// q(x) and Σ|terms| at x.
fn q_terms(polys: [&Polynomial; 3], nu: &Float, x: &Float, ev: &RhoEval) -> Result<(Float, Float)> {
    let bits = x.prec();
    let r = ev.rho_many(&[nu.clone(), Float::with_val(bits, nu + 1u32)], x)?;
    let w = [
        Float::with_val(bits, r[0].square_ref()),
        Float::with_val(bits, r[1].square_ref()),
        Float::with_val(bits, &r[0] * &r[1]),
    ];
    let mut q = Float::new(bits);
    let mut mag = Float::new(bits);
    for (p, wk) in polys.iter().zip(&w) {
        q += p.eval(x) * wk;
        mag += p.eval_abs(x) * wk;
    }
    Ok((q, mag))
}

fn gate(bits: u32, denom: i32) -> Float {
    Float::with_val(bits, Float::i_exp(1, -(bits as i32) / denom))
}

fn split(v: &[Float], degrees: (usize, usize, usize), bits: u32) -> [Polynomial; 3] {
    let (da, db, dc) = degrees;
    [
        Polynomial::from_coeffs(bits, v[..=da].to_vec()),
        Polynomial::from_coeffs(bits, v[da + 1..da + db + 2].to_vec()),
        Polynomial::from_coeffs(bits, v[da + db + 2..da + db + dc + 3].to_vec()),
    ]
}

/// Type 1 triple from a moment table.
pub fn type1_from_table(table: &MomentTable, degrees: (usize, usize, usize), ctx: &PrecisionContext) -> Result<Type1Solution> {
    let bits = ctx.bits();
    let (da, db, dc) = degrees;
    let unknowns = da + db + dc + 3;
    let rows = unknowns - 1;
    let need = rows - 1 + da.max(db).max(dc);
    if table.m.iter().any(|c| c.len() <= need) {
        return Err(Error::Internal(format!("moment table too short for degrees {degrees:?}")));
    }
    let offsets = [0, da + 1, da + db + 2];
    let sizes = [da + 1, db + 1, dc + 1];
    let mat = Matrix::from_fn(rows, unknowns, bits, |m, j| {
        let w = (0..3).rev().find(|&w| j >= offsets[w]).expect("slot");
        let i = j - offsets[w];
        debug_assert!(i < sizes[w]);
        table.m[w][m + i].clone()
    });
    let ns = nullspace_1d(&mat, &gate(bits, 3))?;
    let mut v = ns.vector;
    let lead = v[da].clone();
    let tiny = Float::with_val(bits, v.iter().map(|x| Float::with_val(bits, x.abs_ref())).fold(Float::new(bits), |a, b| a.max(&b)))
        * gate(bits, 2);
    let fallback = Float::with_val(bits, lead.abs_ref()) <= tiny;
    let norm = if fallback {
        v.iter().max_by(|a, b| Float::with_val(bits, a.abs_ref()).partial_cmp(&Float::with_val(bits, b.abs_ref())).expect("finite")).cloned().expect("non-empty")
    } else {
        lead
    };
    for x in v.iter_mut() {
        *x /= &norm;
    }
    let [a, b, c] = split(&v, degrees, bits);
    Ok(Type1Solution {
        nu: table.nu.clone(),
        alpha: table.alpha.clone(),
        degrees,
        a,
        b,
        c,
        fallback_normalization: fallback,
        smallest_singular: ns.smallest_singular,
    })
}

/// Type 1 triple with degrees (dA, dB, dC), normalized so that A is monic.
pub fn type1_solve(nu: &Float, alpha: &Float, degrees: (usize, usize, usize), ctx: &PrecisionContext) -> Result<Type1Solution> {
    let (da, db, dc) = degrees;
    let k_max = da + db + dc + 1 + da.max(db).max(dc);
    type1_from_table(&MomentTable::new(nu, alpha, k_max, ctx)?, degrees, ctx)
}

fn zero_inf_profile(nu: &Float, alpha: &Float) -> EndpointProfile {
    let (s0, log0) = rho_exponent_at_zero(nu);
    let (s1, log1) = rho_exponent_at_zero(&Float::with_val(nu.prec(), nu + 1u32));
    let sigma = alpha.to_f64() + (2.0 * s0).min(s0 + s1);
    let p = EndpointProfile::new(sigma.max(-0.99), Decay::SqrtExp);
    if log0 || log1 {
        p.with_log()
    } else {
        p
    }
}

/// ∫ q x^{α+m} dx by quadrature for every imposed m, against Σ|terms|·moments.
pub fn type1_residuals(sol: &Type1Solution, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    let rows = sol.conditions();
    let ev = RhoEval::new(ctx);
    let vals = integrate_zero_inf_vec(
        |x| {
            let q = sol.q(x, &ev)?;
            let base = Float::with_val(bits, &sol.alpha * Float::with_val(bits, x.ln_ref())).exp() * q;
            let mut out = Vec::with_capacity(rows);
            let mut cur = base;
            for _ in 0..rows {
                out.push(cur.clone());
                cur *= x;
            }
            Ok(out)
        },
        rows,
        zero_inf_profile(&sol.nu, &sol.alpha),
        &QuadOptions::relative(ctx),
        bits,
    )?;
    let table = MomentTable::new(&sol.nu, &sol.alpha, rows + sol.degrees.0.max(sol.degrees.1).max(sol.degrees.2), ctx)?;
    let d = sol.degrees;
    Ok(vals
        .into_iter()
        .enumerate()
        .map(|(m, v)| {
            let scale = magnitude(sol.polys(), &table, m, bits);
            let res = Float::with_val(bits, v.value.abs_ref()) / scale;
            VerificationReport::vanishing(
                format!("type-1 {d:?} m={m} nu={} alpha={}", sol.nu.to_f64(), sol.alpha.to_f64()),
                "5.1",
                res,
                ctx.verify_tol(),
            )
        })
        .collect())
}

// Σ_w Σ_i |p_w,i| M_w(α+m+i)
fn magnitude(polys: [&Polynomial; 3], table: &MomentTable, m: usize, bits: u32) -> Float {
    let mut s = Float::new(bits);
    for (w, p) in polys.iter().enumerate() {
        for (i, c) in p.coeffs().iter().enumerate() {
            s += Float::with_val(bits, c.abs_ref()) * &table.m[w][m + i];
        }
    }
    s
}

/// A monic type 2 polynomial of degree n1+n2+n3.
#[derive(Clone, Debug)]
pub struct Type2Solution {
    pub nu: Float,
    pub alpha: Float,
    pub index: (usize, usize, usize),
    pub p: Polynomial,
}

impl Type2Solution {
    pub fn degree(&self) -> usize {
        self.index.0 + self.index.1 + self.index.2
    }
}

/// Type 2 polynomial from a moment table.
pub fn type2_from_table(table: &MomentTable, index: (usize, usize, usize), ctx: &PrecisionContext) -> Result<Type2Solution> {
    let bits = ctx.bits();
    let counts = [index.0, index.1, index.2];
    let n: usize = counts.iter().sum();
    let need = n + counts.iter().max().copied().unwrap_or(0);
    if table.m.iter().any(|c| c.len() < need) {
        return Err(Error::Internal(format!("moment table too short for index {index:?}")));
    }
    let mut rows: Vec<(usize, usize)> = Vec::with_capacity(n);
    for (w, &cnt) in counts.iter().enumerate() {
        rows.extend((0..cnt).map(|m| (w, m)));
    }
    let mat = Matrix::from_fn(n, n, bits, |r, i| {
        let (w, m) = rows[r];
        table.m[w][m + i].clone()
    });
    let rhs: Vec<Float> = rows.iter().map(|&(w, m)| -table.m[w][m + n].clone()).collect();
    let mut coeffs = if n == 0 { Vec::new() } else { solve(&mat, &rhs)? };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Singular(format!("type-2 system for {index:?} is singular")));
    }
    coeffs.push(ctx.one());
    Ok(Type2Solution { nu: table.nu.clone(), alpha: table.alpha.clone(), index, p: Polynomial::from_coeffs(bits, coeffs) })
}

pub fn type2_solve(nu: &Float, alpha: &Float, index: (usize, usize, usize), ctx: &PrecisionContext) -> Result<Type2Solution> {
    let n = index.0 + index.1 + index.2;
    let k_max = n + index.0.max(index.1).max(index.2);
    type2_from_table(&MomentTable::new(nu, alpha, k_max, ctx)?, index, ctx)
}

/// ∫ p w x^{α+m} dx by quadrature for each block, against Σ|p_i| M(α+m+i).
pub fn type2_residuals(sol: &Type2Solution, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    let counts = [sol.index.0, sol.index.1, sol.index.2];
    let width = counts.iter().copied().max().unwrap_or(0);
    if width == 0 {
        return Ok(Vec::new());
    }
    let ev = RhoEval::new(ctx);
    let nu1 = Float::with_val(bits, &sol.nu + 1u32);
    let vals = integrate_zero_inf_vec(
        |x| {
            let r = ev.rho_many(&[sol.nu.clone(), nu1.clone()], x)?;
            let w = [
                Float::with_val(bits, r[0].square_ref()),
                Float::with_val(bits, r[1].square_ref()),
                Float::with_val(bits, &r[0] * &r[1]),
            ];
            let base = Float::with_val(bits, &sol.alpha * Float::with_val(bits, x.ln_ref())).exp() * sol.p.eval(x);
            let mut out = Vec::with_capacity(3 * width);
            for wk in &w {
                let mut cur = Float::with_val(bits, &base * wk);
                for _ in 0..width {
                    out.push(cur.clone());
                    cur *= x;
                }
            }
            Ok(out)
        },
        3 * width,
        zero_inf_profile(&sol.nu, &sol.alpha),
        &QuadOptions::relative(ctx),
        bits,
    )?;
    let table = MomentTable::new(&sol.nu, &sol.alpha, width + sol.degree(), ctx)?;
    let names = ["rho_nu^2", "rho_nu+1^2", "rho_nu*rho_nu+1"];
    let eqs = ["A.1", "A.2", "A.3"];
    let mut out = Vec::new();
    for (w, &cnt) in counts.iter().enumerate() {
        for m in 0..cnt {
            let mut scale = Float::new(bits);
            for (i, c) in sol.p.coeffs().iter().enumerate() {
                scale += Float::with_val(bits, c.abs_ref()) * &table.m[w][m + i];
            }
            let res = Float::with_val(bits, vals[w * width + m].value.abs_ref()) / scale;
            out.push(VerificationReport::vanishing(
                format!("type-2 {:?} {} m={m}", sol.index, names[w]),
                eqs[w],
                res,
                ctx.verify_tol(),
            ));
        }
    }
    Ok(out)
}

/// (A', B', C') from (5.24)–(5.26).
pub fn theorem5_candidate(sol: &Type1Solution, ctx: &PrecisionContext) -> [Polynomial; 3] {
    let bits = ctx.bits();
    let (a, b, c) = (&sol.a, &sol.b, &sol.c);
    let x = Polynomial::x(bits);
    let xd = |p: &Polynomial| &x * &p.derivative();
    let al = &sol.alpha;
    let nu = &sol.nu;
    let two = ctx.real(2);
    let a1 = &(&a.scale(&Float::with_val(bits, al + Float::with_val(bits, nu * 2u32))) + &xd(a)) - &(&x * c);
    let b1 = &(&b.scale(al) + &xd(b)) - c;
    let c1 = &(&(&c.scale(&Float::with_val(bits, al + nu)) + &xd(c)) - &a.scale(&two)) - &(&x * b).scale(&two);
    [a1, b1, c1]
}

// f(x) = x^α q(x)
fn xq(sol: &Type1Solution, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let nu1 = Float::with_val(bits, &sol.nu + 1u32);
    let r0 = rho(&sol.nu, x, ctx)?;
    let r1 = rho(&nu1, x, ctx)?;
    let q = sol.a.eval(x) * Float::with_val(bits, r0.square_ref())
        + sol.b.eval(x) * Float::with_val(bits, r1.square_ref())
        + sol.c.eval(x) * Float::with_val(bits, &r0 * &r1);
    Ok(crate::precision::pow_real(x, &sol.alpha) * q)
}

/// Theorem 5 for one (ν, α, n): the proportionality of (5.24)–(5.26) to the solved
/// level α−1 triple, then (5.23) at x = 0.5, 1, 2.
pub fn theorem5_checks(nu: &Float, alpha: &Float, n: usize, ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    if n == 0 {
        return Err(Error::domain("theorem5_check", "n must be at least 1".to_string()));
    }
    if !(*nu >= 0 && *nu < 0.5 && *alpha > 0) {
        return Err(Error::domain("theorem5_check", format!("need 0 <= nu < 1/2 and alpha > 0, got ({nu}, {alpha})")));
    }
    let hi = type1_solve(nu, alpha, (n, n - 1, n - 1), ctx)?;
    let am1 = Float::with_val(bits, alpha - 1u32);
    let lo = type1_solve(nu, &am1, (n, n - 1, n), ctx)?;
    let cand = theorem5_candidate(&hi, ctx);
    let slots = (n, n - 1, n);
    let v: Vec<Float> = cand
        .iter()
        .zip([slots.0, slots.1, slots.2])
        .flat_map(|(p, d)| (0..=d).map(|k| p.coeff(k)).collect::<Vec<_>>())
        .collect();
    let s = lo.flat(slots);
    let dot = v.iter().zip(&s).fold(ctx.zero(), |a, (x, y)| a + Float::with_val(bits, x * y));
    let ss = s.iter().fold(ctx.zero(), |a, y| a + Float::with_val(bits, y.square_ref()));
    let lambda = dot / ss;
    let vmax = v.iter().fold(ctx.zero(), |a, x| a.max(&Float::with_val(bits, x.abs_ref())));
    let worst = v
        .iter()
        .zip(&s)
        .fold(ctx.zero(), |a, (x, y)| a.max(&Float::with_val(bits, x - Float::with_val(bits, &lambda * y)).abs()))
        / vmax;
    let tag = format!("nu={} alpha={} n={n}", nu.to_f64(), alpha.to_f64());
    let mut reps = vec![VerificationReport::vanishing(format!("theorem 5 proportionality {tag}"), "5.24-5.26", worst, ctx.verify_tol())
        .with_note(format!("scalar {:.6e}", lambda.to_f64()))];
    if !(lambda.is_finite() && !lambda.is_zero()) {
        return Err(Error::Singular(format!("theorem 5 scalar is {lambda}")));
    }

    let h = ctx.real(DIFF_STEP);
    for xv in [0.5, 1.0, 2.0] {
        let x = ctx.real(xv);
        let at = |k: i32| xq(&hi, &(Float::with_val(bits, &h * k) + &x), ctx);
        // five-point central difference
        let d = (Float::with_val(bits, at(1)? - at(-1)?) * 8u32 - Float::with_val(bits, at(2)? - at(-2)?)) / (Float::with_val(bits, &h * 12u32));
        let ev = RhoEval::new(ctx);
        let (q, mag) = q_terms(lo.polys(), nu, &x, &ev)?;
        let xa = crate::precision::pow_real(&x, &am1);
        let rhs = Float::with_val(bits, &lambda * &xa) * q;
        let scale = Float::with_val(bits, lambda.abs_ref()) * xa * mag;
        reps.push(VerificationReport::compare_scaled(
            format!("theorem 5 derivative identity {tag} x={xv}"),
            "5.23",
            d,
            rhs,
            &scale,
            ctx.verify_tol(),
            ctx,
        ));
    }
    Ok(reps)
}

/// The proportionality report of [`theorem5_checks`].
pub fn theorem5_check(nu: &Float, alpha: &Float, n: usize, ctx: &PrecisionContext) -> Result<VerificationReport> {
    Ok(theorem5_checks(nu, alpha, n, ctx)?.remove(0))
}

/// d/dx p^α_{n+1,n,n+1} against (3n+2) p^{α+1}_{n+1,n,n}, coefficient-wise.
pub fn theorem6_check(nu: &Float, alpha: &Float, n: usize, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let bits = ctx.bits();
    if !(*nu >= 0 && *alpha > -1) {
        return Err(Error::domain("theorem6_check", format!("need nu >= 0 and alpha > -1, got ({nu}, {alpha})")));
    }
    let p = type2_solve(nu, alpha, (n + 1, n, n + 1), ctx)?;
    let a1 = Float::with_val(bits, alpha + 1u32);
    let q = type2_solve(nu, &a1, (n + 1, n, n), ctx)?;
    let lhs = p.p.derivative();
    let rhs = q.p.scale(&ctx.real((3 * n + 2) as u32));
    let scale = rhs.max_abs_coeff();
    let diff = (&lhs - &rhs).max_abs_coeff() / scale;
    Ok(VerificationReport::vanishing(
        format!("theorem 6 derivative nu={} alpha={} n={n}", nu.to_f64(), alpha.to_f64()),
        "A.4",
        diff,
        ctx.verify_tol(),
    ))
}

/// Smallest eigenvalue of the correlation-normalized Gram matrix of
/// {x^i ρ_ν²}_{i≤n} ∪ {x^j ρ_{ν+1}²}_{j≤m} ∪ {x^k ρ_νρ_{ν+1}}_{k≤l} under x^κ dx.
pub fn theorem4_gram(nu: &Float, degrees: (usize, usize, usize), ctx: &PrecisionContext) -> Result<Matrix> {
    let bits = ctx.bits();
    if !(*nu > -0.5) {
        return Err(Error::domain("theorem4_rank_check", format!("nu = {nu} must exceed -1/2")));
    }
    let (n, m, l) = degrees;
    let fam: Vec<(usize, usize)> = (0..=n).map(|i| (0, i)).chain((0..=m).map(|j| (1, j))).chain((0..=l).map(|k| (2, k))).collect();
    let size = fam.len();
    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|i| (i..size).map(move |j| (i, j))).collect();
    let ev = RhoEval::new(ctx);
    let nu1 = Float::with_val(bits, nu + 1u32);
    let (s0, log0) = rho_exponent_at_zero(nu);
    let mut profile = EndpointProfile::new((GRAM_KAPPA as f64 + 4.0 * s0).max(-0.99), Decay::SqrtExp);
    if log0 {
        profile = profile.with_log();
    }
    let vals = integrate_zero_inf_vec(
        |x| {
            let r = ev.rho_many(&[nu.clone(), nu1.clone()], x)?;
            let w = [
                Float::with_val(bits, r[0].square_ref()),
                Float::with_val(bits, r[1].square_ref()),
                Float::with_val(bits, &r[0] * &r[1]),
            ];
            let f: Vec<Float> = fam
                .iter()
                .map(|&(wi, p)| Float::with_val(bits, &w[wi] * Float::with_val(bits, rug::ops::Pow::pow(x, p as u32))))
                .collect();
            let xk = Float::with_val(bits, rug::ops::Pow::pow(x, GRAM_KAPPA));
            Ok(pairs.iter().map(|&(i, j)| Float::with_val(bits, &f[i] * &f[j]) * &xk).collect())
        },
        pairs.len(),
        profile,
        &QuadOptions::relative(ctx),
        bits,
    )?;
    let mut g = Matrix::zeros(size, size, bits);
    for (&(i, j), v) in pairs.iter().zip(vals) {
        g.set(i, j, v.value.clone());
        g.set(j, i, v.value);
    }
    let d: Vec<Float> = (0..size).map(|i| Float::with_val(bits, g.get(i, i).sqrt_ref())).collect();
    Ok(Matrix::from_fn(size, size, bits, |i, j| Float::with_val(bits, g.get(i, j) / &d[i]) / &d[j]))
}

pub fn theorem4_rank_check(nu: &Float, degrees: (usize, usize, usize), ctx: &PrecisionContext) -> Result<VerificationReport> {
    let g = theorem4_gram(nu, degrees, ctx)?;
    let ev = symmetric_eigenvalues(&g);
    let smallest = ev.into_iter().next().expect("non-empty family");
    Ok(VerificationReport::positive(
        format!("theorem 4 gram margin nu={} degrees={degrees:?}", nu.to_f64()),
        "5.6",
        smallest,
        &gate(ctx.bits(), 3),
    ))
}

/// −x ρ_{−1/2}² + ρ_{1/2}² at each sample, through the general ρ evaluator.
pub fn remark3_check(samples: &[Float], ctx: &PrecisionContext) -> Result<VerificationReport> {
    let bits = ctx.bits();
    let (m, p) = (ctx.ratio(-1, 2), ctx.ratio(1, 2));
    let mut worst = ctx.zero();
    for x in samples {
        let a = rho(&m, x, ctx)?;
        let b = rho(&p, x, ctx)?;
        let v = Float::with_val(bits, b.square_ref()) - Float::with_val(bits, x * Float::with_val(bits, a.square_ref()));
        worst = worst.max(&v.abs());
    }
    Ok(VerificationReport::vanishing("remark 3 witness -x rho_-1/2^2 + rho_1/2^2", "5.6", worst, ctx.verify_tol()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn rel(a: &Float, b: &Float) -> f64 {
        let p = a.prec();
        (Float::with_val(p, a - b).abs() / Float::with_val(p, b.abs_ref())).to_f64()
    }

    #[test]
    fn moment_vector_examples() {
        let c = ctx();
        let half = c.ratio(1, 2);
        let v = moment_vector(&half, &c.zero(), &c.zero(), &c).unwrap();
        let pi8 = c.pi() / 8u32;
        assert!(rel(&v[0], &pi8) < 1e-90 && rel(&v[2], &pi8) < 1e-90);
        assert!(v.iter().all(|x| *x > 0));
        let v = moment_vector(&half, &c.zero(), &c.one(), &c).unwrap();
        assert!(rel(&v[2], &(c.pi() * 9u32 / 128u32)) < 1e-90);
        assert!(moment_vector(&c.real(-0.7), &c.zero(), &c.zero(), &c).is_err());
    }

    #[test]
    fn type1_counts_and_residuals() {
        let c = ctx();
        let nu = c.real(0.25);
        let s = type1_solve(&nu, &c.zero(), (1, 0, 0), &c).unwrap();
        assert_eq!(s.conditions(), 3);
        assert_eq!(s.a.leading(), 1);
        assert!(!s.fallback_normalization);
        let reps = type1_residuals(&s, &c).unwrap();
        assert_eq!(reps.len(), 3);
        assert!(reps.iter().all(|r| r.passed), "{:?}", reps.iter().map(|r| r.residual.to_f64()).collect::<Vec<_>>());
        let s = type1_solve(&nu, &c.zero(), (1, 0, 1), &c).unwrap();
        assert_eq!(s.conditions(), 4);
        assert!(type1_residuals(&s, &c).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn type2_examples() {
        let c = ctx();
        let nu = c.real(0.25);
        let s = type2_solve(&nu, &c.zero(), (1, 0, 0), &c).unwrap();
        let w = WeightKind::rho_sq(&nu).unwrap();
        let ratio = moment(&w, &c.one(), &c).unwrap() / moment(&w, &c.zero(), &c).unwrap();
        assert!(rel(&-s.p.coeff(0), &ratio) < 1e-90);
        let s = type2_solve(&nu, &c.zero(), (1, 0, 1), &c).unwrap();
        assert_eq!(s.p.degree(), Some(2));
        assert_eq!(s.p.leading(), 1);
        let reps = type2_residuals(&s, &c).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(reps.iter().all(|r| r.passed));
    }

    #[test]
    fn scaling_invariance() {
        let c = ctx();
        let t = MomentTable::new(&c.real(0.25), &c.real(0.5), 8, &c).unwrap();
        let k = c.real(37.5);
        let p = type2_from_table(&t, (2, 1, 2), &c).unwrap().p;
        let q = type2_from_table(&t.scaled(&k), (2, 1, 2), &c).unwrap().p;
        assert!((&p - &q).max_abs_coeff() < 1e-85);
        let a = type1_from_table(&t, (2, 1, 1), &c).unwrap();
        let b = type1_from_table(&t.scaled(&k), (2, 1, 1), &c).unwrap();
        for (x, y) in a.polys().iter().zip(b.polys()) {
            assert!((*x - y).max_abs_coeff() < 1e-80);
        }
    }

    #[test]
    fn theorem5_low_degree() {
        let c = ctx();
        let reps = theorem5_checks(&c.real(0.25), &c.one(), 1, &c).unwrap();
        for r in &reps {
            assert!(r.passed, "{r}");
        }
        let hi = type1_solve(&c.real(0.25), &c.one(), (1, 0, 0), &c).unwrap();
        let cand = theorem5_candidate(&hi, &c);
        assert!(cand[0].degree().unwrap() <= 1 && cand[2].degree().unwrap() <= 1);
    }

    #[test]
    fn theorem6_low_degree() {
        let c = ctx();
        let r = theorem6_check(&c.real(0.25), &c.zero(), 0, &c).unwrap();
        assert!(r.passed, "{r}");
        let r = theorem6_check(&c.real(0.25), &c.real(0.5), 1, &c).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn theorem4_margins() {
        let c = ctx();
        let g = theorem4_gram(&c.real(0.25), (1, 0, 0), &c).unwrap();
        assert!(g.is_symmetric(&c.real(1e-80)));
        let good = theorem4_rank_check(&c.real(0.25), (1, 0, 0), &c).unwrap();
        assert!(good.passed);
        let edge = theorem4_rank_check(&c.real(-0.499), (1, 0, 0), &c).unwrap();
        assert!(edge.computed < good.computed);
    }

    #[test]
    fn remark3_witness() {
        let c = ctx();
        let xs = [c.one(), c.real(4), c.real(0.1)];
        assert!(remark3_check(&xs, &c).unwrap().passed);
    }
}
