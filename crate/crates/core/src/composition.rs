//! Composition orthogonality through θ = xDx.
//!
//! A pair (ψ, φ) linked by φ(t) = t^{−1}∫₀^∞ e^{−x/t}ψ(x)dx turns
//! ∫ p(θ)q(θ){φ}ω dt into ∫ p q ψ Ω dx with Ω(x) = ∫ e^{−x/t}ω(t)dt/t.
//! ψ is a finite sum of powers, so φ and every θ^k{φ} stay closed.

use rug::Float;

use crate::error::{Error, Result};
use crate::orthopoly::gram_construct;
use crate::poly::Polynomial;
use crate::precision::{gamma, pow_real, PrecisionContext};
use crate::quadrature::{
    integrate_finite_vec, integrate_zero_inf_vec, Decay, EndpointProfile, QuadOptions,
};
use crate::report::VerificationReport;
use crate::special::{hermite_kernel, rho, rho_exponent_at_zero, tricomi_u, RhoEval, WeightKind, WeightTag};

/// Below this abscissa the Jacobi kernel is integrated directly over [0, 1].
pub const JACOBI_SWITCH: f64 = 0.5;

/// Σ c_j t^{e_j}.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSum {
    pub terms: Vec<(Float, Float)>,
}

impl PowerSum {
    pub fn new(terms: Vec<(Float, Float)>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, t: &Float) -> Float {
        let bits = t.prec();
        self.terms
            .iter()
            .fold(Float::new(bits), |acc, (c, e)| acc + Float::with_val(bits, c * pow_real(t, e)))
    }

    /// θ = tDt: c t^e ↦ c(e+1) t^{e+1}.
    pub fn theta(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, e)| {
                let e1 = Float::with_val(e.prec(), e + 1u32);
                (Float::with_val(c.prec(), c * &e1), e1)
            })
            .collect();
        Self { terms }
    }

    pub fn mul_power(&self, n: u32) -> Self {
        Self { terms: self.terms.iter().map(|(c, e)| (c.clone(), Float::with_val(e.prec(), e + n))).collect() }
    }

    /// d/dt, termwise.
    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| (Float::with_val(c.prec(), c * e), Float::with_val(e.prec(), e - 1u32)))
            .collect();
        Self { terms }
    }

    pub fn min_exponent(&self) -> f64 {
        self.terms.iter().map(|(_, e)| e.to_f64()).fold(f64::INFINITY, f64::min)
    }

    /// Largest coefficient difference after matching exponents.
    pub fn distance(&self, other: &Self) -> Float {
        let bits = self.terms.first().or(other.terms.first()).map_or(64, |t| t.0.prec());
        let mut worst = Float::new(bits);
        for (c, e) in &self.terms {
            let o = other.terms.iter().find(|(_, f)| f == e).map_or(Float::new(bits), |t| t.0.clone());
            worst = worst.max(&Float::with_val(bits, c - &o).abs());
        }
        for (c, e) in &other.terms {
            if !self.terms.iter().any(|(_, f)| f == e) {
                worst = worst.max(&Float::with_val(bits, c.abs_ref()));
            }
        }
        worst
    }
}

/// ψ as a sum of powers x^α (α > −1) with its transform φ.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacePair {
    pub psi: PowerSum,
}

impl LaplacePair {
    pub fn power(alpha: Float) -> Result<Self> {
        let one = Float::with_val(alpha.prec(), 1);
        Self::combination(vec![(one, alpha)])
    }

    pub fn combination(terms: Vec<(Float, Float)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("LaplacePair", String::from("psi needs at least one term")));
        }
        if let Some((_, a)) = terms.iter().find(|(_, a)| !(*a > -1)) {
            return Err(Error::domain("LaplacePair", format!("power {a} must exceed -1")));
        }
        Ok(Self { psi: PowerSum::new(terms) })
    }

    /// ψ(|x|).
    pub fn psi_at(&self, x: &Float) -> Float {
        self.psi.eval(&Float::with_val(x.prec(), x.abs_ref()))
    }

    /// θ^k{φ} = Σ c Γ(α+k+1) t^{α+k}.
    pub fn theta_image(&self, k: u32, ctx: &PrecisionContext) -> Result<PowerSum> {
        let bits = ctx.bits();
        let terms = self
            .psi
            .terms
            .iter()
            .map(|(c, a)| {
                let e = Float::with_val(bits, a + k);
                let g = gamma(&Float::with_val(bits, &e + 1u32), ctx)?;
                Ok((Float::with_val(bits, c * g), e))
            })
            .collect::<Result<_>>()?;
        Ok(PowerSum::new(terms))
    }

    pub fn phi(&self, ctx: &PrecisionContext) -> Result<PowerSum> {
        self.theta_image(0, ctx)
    }

    /// φ(t) straight from its defining integral.
    pub fn phi_by_quadrature(&self, t: &Float, ctx: &PrecisionContext) -> Result<Float> {
        let bits = ctx.bits();
        let sigma = self.psi.min_exponent();
        let r = integrate_zero_inf_vec(
            |x| Ok(vec![Float::with_val(bits, -(Float::with_val(bits, x / t))).exp() * self.psi.eval(x)]),
            1,
            EndpointProfile::new(sigma, Decay::Exp),
            &QuadOptions::relative(ctx),
            bits,
        )?;
        Ok(Float::with_val(bits, &r[0].value / t))
    }

    fn sigma(&self) -> f64 {
        self.psi.min_exponent()
    }
}

/// θ^k{φ}(t) in closed form.
pub fn theta_power_apply(k: u32, pair: &LaplacePair, t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(*t > 0) {
        return Err(Error::domain("theta_power_apply", format!("t = {t} must be positive")));
    }
    Ok(pair.theta_image(k, ctx)?.eval(t))
}

/// Σ_k c_k θ^k{φ} for the polynomial Σ c_k x^k.
pub fn poly_theta_image(poly: &Polynomial, pair: &LaplacePair, ctx: &PrecisionContext) -> Result<PowerSum> {
    let mut terms = Vec::new();
    for (k, c) in poly.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (g, e) in pair.theta_image(k as u32, ctx)?.terms {
            terms.push((Float::with_val(ctx.bits(), &g * c), e));
        }
    }
    Ok(PowerSum::new(terms))
}

/// The three classical measures ω(t)dt.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    /// t^ν e^{−t} on (0, ∞)
    Laguerre { nu: Float },
    /// e^{−t²} on ℝ, with ψ read as ψ(|x|)
    Hermite,
    /// (1−t)^α t^β on [0, 1]
    Jacobi { alpha: Float, beta: Float },
}

impl MeasureKind {
    pub fn laguerre(nu: Float) -> Result<Self> {
        if !(nu > -1) {
            return Err(Error::domain("MeasureKind", format!("Laguerre needs nu > -1, got {nu}")));
        }
        Ok(Self::Laguerre { nu })
    }

    pub fn jacobi(alpha: Float, beta: Float) -> Result<Self> {
        if !(alpha > -1 && beta > 0) {
            return Err(Error::domain("MeasureKind", format!("Jacobi needs alpha > -1, beta > 0, got ({alpha}, {beta})")));
        }
        Ok(Self::Jacobi { alpha, beta })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Laguerre { .. } => "laguerre",
            Self::Hermite => "hermite",
            Self::Jacobi { .. } => "jacobi",
        }
    }

    pub fn eq(&self) -> &'static str {
        match self {
            Self::Laguerre { .. } => "2.8",
            Self::Hermite => "2.15",
            Self::Jacobi { .. } => "2.19",
        }
    }

    pub fn omega(&self, t: &Float) -> Float {
        let bits = t.prec();
        match self {
            Self::Laguerre { nu } => (Float::with_val(bits, nu * Float::with_val(bits, t.ln_ref())) - t).exp(),
            Self::Hermite => Float::with_val(bits, -Float::with_val(bits, t.square_ref())).exp(),
            Self::Jacobi { alpha, beta } => {
                pow_real(&Float::with_val(bits, 1 - t.clone()), alpha) * pow_real(t, beta)
            }
        }
    }
}

/// Ω(x) = ∫ e^{−x/t} ω(t) dt/t.
pub fn omega_kernel(measure: &MeasureKind, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(*x > 0) {
        return Err(Error::domain("omega_kernel", format!("x = {x} must be positive")));
    }
    match measure {
        MeasureKind::Laguerre { nu } => rho(nu, x, ctx),
        MeasureKind::Hermite => hermite_kernel(x, ctx),
        MeasureKind::Jacobi { alpha, beta } => {
            if x.to_f64() < JACOBI_SWITCH {
                jacobi_kernel_direct(alpha, beta, x, ctx)
            } else {
                jacobi_kernel_u(alpha, beta, x, ctx)
            }
        }
    }
}

/// Γ(1+α) e^{−x} U(1+α, 1−β, x).
pub fn jacobi_kernel_u(alpha: &Float, beta: &Float, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let a = Float::with_val(bits, alpha + 1u32);
    let b = Float::with_val(bits, 1 - beta.clone());
    let u = tricomi_u(&a, &b, x, ctx)?;
    Ok(gamma(&a, ctx)? * Float::with_val(bits, -x).exp() * u)
}

/// ∫₀¹ (1−t)^α t^{β−1} e^{−x/t} dt.
pub fn jacobi_kernel_direct(alpha: &Float, beta: &Float, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    let bm1 = Float::with_val(bits, beta - 1u32);
    let r = integrate_finite_vec(
        |p| {
            let lt = Float::with_val(bits, p.from_a.ln_ref());
            let l1 = Float::with_val(bits, p.from_b.ln_ref());
            let e = Float::with_val(bits, &bm1 * &lt) + Float::with_val(bits, alpha * &l1) - Float::with_val(bits, x / &p.x);
            Ok(vec![e.exp()])
        },
        1,
        &ctx.zero(),
        &ctx.one(),
        (bm1.to_f64().max(-0.9), alpha.to_f64()),
        &QuadOptions::relative(ctx),
        bits,
    )?;
    Ok(r[0].value.clone())
}

// kernel values below 2^{−2·bits} contribute nothing
fn or_zero(v: Result<Float>, ctx: &PrecisionContext) -> Result<Float> {
    match v {
        Err(Error::Underflow(_)) => Ok(ctx.zero()),
        other => other,
    }
}

/// Nested integrals: the outer target sits at verify_tol/100, the inner one 1000x below that.
fn nested(ctx: &PrecisionContext) -> Result<(QuadOptions, PrecisionContext)> {
    let tol = ctx.verify_tol().to_f64();
    let outer = (tol * 1e-2).max(ctx.quad_target().to_f64());
    let inner = (tol * 1e-5).max(ctx.quad_target().to_f64());
    let opts = QuadOptions::relative(ctx).with_tol(ctx.real(outer));
    let inner = PrecisionContext::new(ctx.bits(), tol, inner)?.with_max_level(ctx.max_level());
    Ok((opts, inner))
}

/// Both sides of ∫ p(θ)q(θ){φ}ω dt = ∫ p q ψ Ω dx.
pub fn identity_sides(
    measure: &MeasureKind,
    pair: &LaplacePair,
    p: &Polynomial,
    q: &Polynomial,
    ctx: &PrecisionContext,
) -> Result<(Float, Float)> {
    let bits = ctx.bits();
    let pq = p * q;
    let opts = QuadOptions::relative(ctx);
    let sigma = pair.sigma();
    match measure {
        MeasureKind::Laguerre { nu } => {
            let image = poly_theta_image(&pq, pair, ctx)?;
            let lhs = integrate_zero_inf_vec(
                |t| Ok(vec![image.eval(t) * measure.omega(t)]),
                1,
                EndpointProfile::new(sigma + nu.to_f64(), Decay::Exp),
                &opts,
                bits,
            )?;
            let (rs, rlog) = rho_exponent_at_zero(nu);
            let mut profile = EndpointProfile::new(sigma + rs, Decay::SqrtExp);
            if rlog {
                profile = profile.with_log();
            }
            let ev = RhoEval::new(ctx);
            let rhs = integrate_zero_inf_vec(
                |x| Ok(vec![pq.eval(x) * pair.psi_at(x) * ev.rho(nu, x)?]),
                1,
                profile,
                &opts,
                bits,
            )?;
            Ok((lhs[0].value.clone(), rhs[0].value.clone()))
        }
        MeasureKind::Hermite => {
            // even split: only the even part of p·q survives, doubled, on (0, ∞)
            let even = Polynomial::from_coeffs(
                bits,
                pq.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k % 2 == 0 { Float::with_val(bits, c * 2u32) } else { Float::new(bits) })
                    .collect(),
            );
            let image = poly_theta_image(&even, pair, ctx)?;
            let lhs = integrate_zero_inf_vec(
                |t| Ok(vec![image.eval(t) * measure.omega(t)]),
                1,
                EndpointProfile::new(sigma, Decay::Gauss),
                &opts,
                bits,
            )?;
            if even.is_zero() {
                return Ok((lhs[0].value.clone(), ctx.zero()));
            }
            let (outer, inner) = nested(ctx)?;
            let rhs = integrate_zero_inf_vec(
                |x| Ok(vec![even.eval(x) * pair.psi_at(x) * or_zero(hermite_kernel(x, &inner), ctx)?]),
                1,
                EndpointProfile::new(sigma, Decay::SqrtExp).with_log(),
                &outer,
                bits,
            )?;
            Ok((lhs[0].value.clone(), rhs[0].value.clone()))
        }
        MeasureKind::Jacobi { alpha, beta } => {
            let image = poly_theta_image(&pq, pair, ctx)?;
            let lhs = integrate_finite_vec(
                |pt| {
                    let w = pow_real(&pt.from_b, alpha) * pow_real(&pt.from_a, beta);
                    Ok(vec![image.eval(&pt.x) * w])
                },
                1,
                &ctx.zero(),
                &ctx.one(),
                ((sigma + beta.to_f64()).max(-0.9), alpha.to_f64()),
                &opts,
                bits,
            )?;
            let (outer, inner) = nested(ctx)?;
            let rhs = integrate_zero_inf_vec(
                |x| Ok(vec![pq.eval(x) * pair.psi_at(x) * or_zero(omega_kernel(measure, x, &inner), ctx)?]),
                1,
                EndpointProfile::new(sigma, Decay::Exp),
                &outer,
                bits,
            )?;
            Ok((lhs[0].value.clone(), rhs[0].value.clone()))
        }
    }
}

/// The composition identity for one measure, residual against max(|LHS|, |RHS|, 1).
pub fn verify_identity(
    measure: &MeasureKind,
    pair: &LaplacePair,
    p: &Polynomial,
    q: &Polynomial,
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    let (lhs, rhs) = identity_sides(measure, pair, p, q, ctx)?;
    let scale = Float::with_val(ctx.bits(), lhs.abs_ref()).max(&Float::with_val(ctx.bits(), rhs.abs_ref())).max(&ctx.one());
    Ok(VerificationReport::compare_scaled(
        format!("composition identity ({})", measure.name()),
        measure.eq(),
        lhs,
        rhs,
        &scale,
        ctx.verify_tol(),
        ctx,
    ))
}

/// Γ(α+1)∫ P_n(θ)P_m(θ){t^α} t^ν e^{−t} dt against δ_{n,m}, with P_n orthonormal for x^α ρ_ν.
pub fn prudnikov_check(nu: &Float, alpha: &Float, n: usize, m: usize, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let bits = ctx.bits();
    if !(*nu >= 0) {
        return Err(Error::domain("prudnikov_check", format!("nu = {nu} must be non-negative")));
    }
    let weight = WeightKind::new(WeightTag::Rho, nu.clone(), alpha.clone())?;
    let basis = gram_construct(&weight, n.max(m), ctx)?;
    let pair = LaplacePair::power(alpha.clone())?;
    let image = poly_theta_image(&(basis.poly(n) * basis.poly(m)), &pair, ctx)?;
    let measure = MeasureKind::laguerre(nu.clone())?;
    let lhs = integrate_zero_inf_vec(
        |t| Ok(vec![image.eval(t) * measure.omega(t)]),
        1,
        EndpointProfile::new(alpha.to_f64() + nu.to_f64(), Decay::Exp),
        &QuadOptions::relative(ctx),
        bits,
    )?;
    let want = if n == m { ctx.one() } else { ctx.zero() };
    Ok(VerificationReport::compare(
        format!("prudnikov <P_{n}, P_{m}> nu={} alpha={}", nu.to_f64(), alpha.to_f64()),
        "2.9",
        lhs[0].value.clone(),
        want,
        ctx.verify_tol(),
        ctx,
    ))
}

/// θ^n{φ} three ways: n-fold θ, t^n D^n t^n, and the closed form.
pub fn viskov_check(pair: &LaplacePair, n: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let phi = pair.phi(ctx)?;
    let mut iterated = phi.clone();
    for _ in 0..n {
        iterated = iterated.theta();
    }
    let mut viskov = phi.mul_power(n);
    for _ in 0..n {
        viskov = viskov.derivative();
    }
    let viskov = viskov.mul_power(n);
    let closed = pair.theta_image(n, ctx)?;
    let scale = closed.terms.iter().fold(ctx.one(), |a, (c, _)| a.max(&Float::with_val(ctx.bits(), c.abs_ref())));
    let worst = iterated.distance(&closed).max(&viskov.distance(&closed)) / scale;
    Ok(VerificationReport::vanishing(format!("viskov theta^{n}"), "1.3", worst, ctx.verify_tol()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn rel(a: &Float, b: &Float) -> f64 {
        let p = a.prec();
        (Float::with_val(p, a - b).abs() / Float::with_val(p, b.abs_ref()).max(&Float::with_val(p, 1e-300))).to_f64()
    }

    #[test]
    fn theta_examples() {
        let c = ctx();
        let one = LaplacePair::power(c.zero()).unwrap();
        let t = c.real(1.7);
        assert!(rel(&theta_power_apply(0, &one, &t, &c).unwrap(), &c.one()) < 1e-90);
        // ψ = 1: θ^k{1} = k! t^k
        let mut f = c.one();
        for k in 1..6u32 {
            f *= k;
            let want = Float::with_val(c.bits(), &f * Float::with_val(c.bits(), rug::ops::Pow::pow(&t, k)));
            assert!(rel(&theta_power_apply(k, &one, &t, &c).unwrap(), &want) < 1e-90);
        }
        let a = c.real(0.3);
        let pair = LaplacePair::power(a.clone()).unwrap();
        let want = gamma(&(a.clone() + 2u32), &c).unwrap() * pow_real(&t, &(a + 1u32));
        assert!(rel(&theta_power_apply(1, &pair, &t, &c).unwrap(), &want) < 1e-90);
        assert!(theta_power_apply(1, &pair, &c.zero(), &c).is_err());
    }

    #[test]
    fn phi_closed_matches_transform() {
        let c = ctx();
        let pair = LaplacePair::combination(vec![(c.one(), c.real(-0.5)), (c.real(2), c.real(1.25))]).unwrap();
        let t = c.real(0.8);
        let q = pair.phi_by_quadrature(&t, &c).unwrap();
        assert!(rel(&pair.phi(&c).unwrap().eval(&t), &q) < 1e-38);
    }

    #[test]
    fn theta_semigroup_and_viskov() {
        let c = ctx();
        let pair = LaplacePair::combination(vec![(c.one(), c.real(0.4)), (c.real(-3), c.real(2))]).unwrap();
        for k in 0..4u32 {
            let mut seeded = pair.theta_image(k, &c).unwrap();
            for _ in 0..3 {
                seeded = seeded.theta();
            }
            let direct = pair.theta_image(k + 3, &c).unwrap();
            assert!(seeded.distance(&direct).to_f64() < 1e-80 * direct.terms[1].0.to_f64().abs());
        }
        for n in 0..=4 {
            assert!(viskov_check(&pair, n, &c).unwrap().passed);
        }
    }

    #[test]
    fn kernel_examples() {
        let c = ctx();
        let lag = MeasureKind::laguerre(c.ratio(1, 2)).unwrap();
        let want = c.sqrt_pi() * Float::with_val(c.bits(), -c.real(2)).exp();
        assert!(rel(&omega_kernel(&lag, &c.one(), &c).unwrap(), &want) < 1e-38);

        // α = 0, β = 1: both Jacobi routes against ∫₀¹ e^{−x/t} dt
        let jac = MeasureKind::jacobi(c.zero(), c.one()).unwrap();
        for x in [0.2, 1.0, 3.0] {
            let x = c.real(x);
            let direct = crate::quadrature::integrate_finite(
                |p| Ok(Float::with_val(c.bits(), -(Float::with_val(c.bits(), &x / &p.x))).exp()),
                &c.zero(),
                &c.one(),
                (0.0, 0.0),
                &c,
            )
            .unwrap()
            .value;
            let u = jacobi_kernel_u(&c.zero(), &c.one(), &x, &c).unwrap();
            let d = jacobi_kernel_direct(&c.zero(), &c.one(), &x, &c).unwrap();
            assert!(rel(&u, &direct) < 1e-38 && rel(&d, &direct) < 1e-38);
            assert!(rel(&omega_kernel(&jac, &x, &c).unwrap(), &direct) < 1e-38);
        }
        let jac = MeasureKind::jacobi(c.real(0.5), c.real(1.5)).unwrap();
        let x = c.real(0.7);
        let u = jacobi_kernel_u(&c.real(0.5), &c.real(1.5), &x, &c).unwrap();
        let d = jacobi_kernel_direct(&c.real(0.5), &c.real(1.5), &x, &c).unwrap();
        assert!(rel(&u, &d) < 1e-38);
        assert!(omega_kernel(&jac, &c.zero(), &c).is_err());
        assert!(MeasureKind::jacobi(c.zero(), c.zero()).is_err());
    }

    #[test]
    fn laguerre_identity() {
        let c = ctx();
        let lag = MeasureKind::laguerre(c.ratio(1, 2)).unwrap();
        let one = Polynomial::constant(c.one());
        let pair = LaplacePair::power(c.zero()).unwrap();
        let (l, r) = identity_sides(&lag, &pair, &one, &one, &c).unwrap();
        let want = gamma(&c.real(1.5), &c).unwrap();
        assert!(rel(&l, &want) < 1e-35 && rel(&r, &want) < 1e-35);
        let p = Polynomial::from_coeffs(c.bits(), vec![c.real(-1), c.real(2)]);
        let pair = LaplacePair::combination(vec![(c.one(), c.real(0.5)), (c.real(0.25), c.real(-0.5))]).unwrap();
        assert!(verify_identity(&lag, &pair, &p, &p, &c).unwrap().passed);
    }

    #[test]
    fn jacobi_identity() {
        let c = ctx();
        let jac = MeasureKind::jacobi(c.zero(), c.one()).unwrap();
        let one = Polynomial::constant(c.one());
        let pair = LaplacePair::power(c.zero()).unwrap();
        let (l, r) = identity_sides(&jac, &pair, &one, &one, &c).unwrap();
        assert!(rel(&l, &c.ratio(1, 2)) < 1e-35);
        assert!(rel(&r, &c.ratio(1, 2)) < 1e-25);
    }

    #[test]
    fn hermite_identity() {
        let c = ctx();
        let x = Polynomial::x(c.bits());
        let one = Polynomial::constant(c.one());
        let pair = LaplacePair::power(c.zero()).unwrap();
        let rep = verify_identity(&MeasureKind::Hermite, &pair, &x, &one, &c).unwrap();
        assert!(rep.passed, "{rep}");
        let rep = verify_identity(&MeasureKind::Hermite, &pair, &x, &x, &c).unwrap();
        assert!(rep.passed, "{rep}");
        assert!(rep.computed > 0);
    }

    #[test]
    fn prudnikov_examples() {
        let c = ctx();
        assert!(prudnikov_check(&c.zero(), &c.zero(), 0, 0, &c).unwrap().passed);
        let r = prudnikov_check(&c.zero(), &c.zero(), 1, 0, &c).unwrap();
        assert!(r.passed, "{r}");
        let r = prudnikov_check(&c.real(0.5), &c.real(0.5), 1, 1, &c).unwrap();
        assert!(r.passed, "{r}");
        assert!(prudnikov_check(&c.real(-0.5), &c.zero(), 1, 1, &c).is_err());
    }
}
