//! Double-exponential quadrature at working precision.
//!
//! Three substitutions share one level-doubling trapezoid driver:
//! exp-sinh for (0, ∞), tanh-sinh for [a, b], and a sinh map along vertical
//! Mellin–Barnes lines. Each driver call may integrate several components at
//! once so that expensive integrand pieces (ρ_ν, U, ...) are evaluated once per
//! node.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{log_gamma_complex, PrecisionContext};

/// Growth of an integrand at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decay {
    /// e^(−c·x)
    Exp,
    /// e^(−c·√x); integrated after x = u².
    SqrtExp,
    /// e^(−c·x²)
    Gauss,
    /// x^(−p) with p > 1
    Power,
}

/// Endpoint behaviour of an integrand on (0, ∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointProfile {
    /// f(x) ~ x^σ as x → 0, with σ > −1.
    pub sing_exp_at_zero: f64,
    /// An extra log x factor at the origin.
    pub log_at_zero: bool,
    pub decay: Decay,
}

impl EndpointProfile {
    pub fn new(sing_exp_at_zero: f64, decay: Decay) -> Self {
        Self { sing_exp_at_zero, log_at_zero: false, decay }
    }

    pub fn with_log(mut self) -> Self {
        self.log_at_zero = true;
        self
    }

    pub fn smooth(decay: Decay) -> Self {
        Self::new(0.0, decay)
    }

    fn validate(&self) -> Result<()> {
        if !(self.sing_exp_at_zero > -1.0) {
            return Err(Error::domain(
                "integrate_zero_inf",
                format!("endpoint exponent {} must exceed -1", self.sing_exp_at_zero),
            ));
        }
        Ok(())
    }
}

/// How the convergence threshold is scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrScale {
    /// tol · max(1, |value|)
    Unit,
    /// tol · ∫|f|, for integrals whose value may be far below one.
    Magnitude,
}

#[derive(Clone, Debug)]
pub struct QuadOptions {
    pub tol: Float,
    pub scale: ErrScale,
    pub max_level: u32,
    pub min_level: u32,
}

impl QuadOptions {
    pub fn from_ctx(ctx: &PrecisionContext) -> Self {
        Self { tol: ctx.quad_target().clone(), scale: ErrScale::Unit, max_level: ctx.max_level(), min_level: 3 }
    }

    pub fn relative(ctx: &PrecisionContext) -> Self {
        Self { scale: ErrScale::Magnitude, ..Self::from_ctx(ctx) }
    }

    pub fn with_tol(mut self, tol: Float) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    pub err_estimate: Float,
    pub levels_used: u32,
    pub converged: bool,
}

/// One weighted sample of a transformed integrand.
struct Sample {
    vals: Vec<Float>,
    envelope: Float,
}

struct Driver<'a> {
    bits: u32,
    opts: &'a QuadOptions,
    h0: Float,
    tau_left: f64,
    tau_right: f64,
    n: usize,
}

impl Driver<'_> {
    /// Level-doubling trapezoid over τ with outward truncation.
    fn run(&self, g: &mut dyn FnMut(&Float) -> Result<Option<Sample>>) -> Result<Vec<QuadResult>> {
        let bits = self.bits;
        let n = self.n;
        let trunc = Float::with_val(bits, &self.opts.tol * Float::with_val(bits, Float::i_exp(1, -12)));
        let mut total = vec![Float::new(bits); n];
        let mut l1 = vec![Float::new(bits); n];
        let mut env_total = Float::new(bits);
        let mut prev: Option<Vec<Float>> = None;
        let mut last_diff = vec![Float::new(bits); n];

        for level in 0..=self.opts.max_level {
            let h = Float::with_val(bits, &self.h0 >> level);
            let step = if level == 0 { h.clone() } else { Float::with_val(bits, &h * 2u32) };
            let offset = if level == 0 { Float::new(bits) } else { h.clone() };
            let env_ref = env_total.clone();

            let mut level_env = Float::new(bits);
            for dir in [1i64, -1i64] {
                let cap = if dir > 0 { self.tau_right } else { self.tau_left };
                let mut small_run = 0;
                // τ = 0 is sampled once, on the positive sweep of level 0.
                let mut k: i64 = if level == 0 && dir == -1 { 1 } else { 0 };
                loop {
                    let tau = Float::with_val(bits, &step * k) + &offset;
                    let tau = if dir > 0 { tau } else { -tau };
                    if tau.to_f64().abs() > cap {
                        break;
                    }
                    k += 1;
                    let sample = match g(&tau)? {
                        Some(s) => s,
                        None => {
                            small_run += 1;
                            if small_run >= 3 {
                                break;
                            }
                            continue;
                        }
                    };
                    for i in 0..n {
                        total[i] += &sample.vals[i];
                        l1[i] += Float::with_val(bits, sample.vals[i].abs_ref());
                    }
                    level_env += &sample.envelope;
                    let reference = Float::with_val(bits, &env_ref + &level_env) * &h;
                    if sample.envelope <= Float::with_val(bits, &trunc * &reference) {
                        small_run += 1;
                        if small_run >= 3 {
                            break;
                        }
                    } else {
                        small_run = 0;
                    }
                }
            }
            env_total += level_env;

            let values: Vec<Float> = total.iter().map(|t| Float::with_val(bits, t * &h)).collect();
            if let Some(p) = &prev {
                let mut ok = level >= self.opts.min_level;
                for i in 0..n {
                    let diff = Float::with_val(bits, &values[i] - &p[i]).abs();
                    let scale = match self.opts.scale {
                        ErrScale::Unit => Float::with_val(bits, values[i].abs_ref()).max(&Float::with_val(bits, 1)),
                        ErrScale::Magnitude => Float::with_val(bits, &l1[i] * &h),
                    };
                    if diff > Float::with_val(bits, &self.opts.tol * &scale) {
                        ok = false;
                    }
                    last_diff[i] = diff;
                }
                if ok {
                    return Ok(values
                        .into_iter()
                        .zip(last_diff)
                        .map(|(value, err)| QuadResult { value, err_estimate: err, levels_used: level, converged: true })
                        .collect());
                }
            }
            prev = Some(values);
        }
        let worst = last_diff.iter().map(|d| d.to_f64()).fold(0.0, f64::max);
        Err(Error::NonConvergence { levels: self.opts.max_level, last_diff: format!("{worst:.3e}") })
    }
}

fn nats(bits: u32) -> f64 {
    bits as f64 * std::f64::consts::LN_2 + 10.0
}

fn left_cap(bits: u32, sigma: f64, log: bool) -> f64 {
    // (1+σ)·(π/2)·sinh|τ| must exceed the number of nats carried.
    let need = nats(bits) / (std::f64::consts::FRAC_PI_2 * (1.0 + sigma).max(1e-3));
    (need.asinh() + if log { 0.75 } else { 0.25 }).min(12.0)
}

/// exp-sinh node: returns (x, dx/dτ) with x = e^{(π/2) sinh τ}.
fn exp_sinh_node(tau: &Float, bits: u32) -> (Float, Float) {
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let et = Float::with_val(bits, tau.exp_ref());
    let emt = Float::with_val(bits, et.recip_ref());
    let sinh = Float::with_val(bits, &et - &emt) / 2u32;
    let cosh = Float::with_val(bits, &et + &emt) / 2u32;
    let v = Float::with_val(bits, &half_pi * &sinh);
    let x = v.exp();
    let w = Float::with_val(bits, &x * &half_pi) * cosh;
    (x, w)
}

/// ∫₀^∞ f(x) dx for several integrands sharing the same nodes.
pub fn integrate_zero_inf_vec(
    mut f: impl FnMut(&Float) -> Result<Vec<Float>>,
    n: usize,
    profile: EndpointProfile,
    opts: &QuadOptions,
    bits: u32,
) -> Result<Vec<QuadResult>> {
    profile.validate()?;
    let sqrt_map = profile.decay == Decay::SqrtExp;
    let sigma = if sqrt_map { 2.0 * profile.sing_exp_at_zero + 1.0 } else { profile.sing_exp_at_zero };
    let tau_right = match profile.decay {
        Decay::Power => 10.0,
        _ => (nats(bits).ln() / std::f64::consts::FRAC_PI_2).asinh() + 1.5,
    };
    let driver = Driver {
        bits,
        opts,
        h0: Float::with_val(bits, 0.5),
        tau_left: left_cap(bits, sigma, profile.log_at_zero),
        tau_right,
        n,
    };
    let mut g = |tau: &Float| -> Result<Option<Sample>> {
        let (u, wu) = exp_sinh_node(tau, bits);
        let (x, w) = if sqrt_map {
            let x = Float::with_val(bits, u.square_ref());
            let w = Float::with_val(bits, &u * &wu) * 2u32;
            (x, w)
        } else {
            (u, wu)
        };
        if x.is_zero() || x.is_infinite() || w.is_infinite() {
            return Ok(None);
        }
        let vals = f(&x)?;
        let mut envelope = Float::new(bits);
        let vals: Vec<Float> = vals
            .into_iter()
            .map(|v| {
                let t = Float::with_val(bits, &v * &w);
                envelope = envelope.clone().max(&Float::with_val(bits, t.abs_ref()));
                t
            })
            .collect();
        Ok(Some(Sample { vals, envelope }))
    };
    driver.run(&mut g)
}

/// ∫₀^∞ f(x) dx with the context's quadrature target.
pub fn integrate_zero_inf(
    mut f: impl FnMut(&Float) -> Result<Float>,
    profile: EndpointProfile,
    ctx: &PrecisionContext,
) -> Result<QuadResult> {
    let opts = QuadOptions::from_ctx(ctx);
    let mut r = integrate_zero_inf_vec(|x| Ok(vec![f(x)?]), 1, profile, &opts, ctx.bits())?;
    Ok(r.remove(0))
}

/// A tanh-sinh abscissa with its distances to both endpoints kept exact.
#[derive(Clone, Debug)]
pub struct FinitePoint {
    pub x: Float,
    pub from_a: Float,
    pub from_b: Float,
}

/// ∫_a^b f for several integrands. `sing` gives the endpoint exponents
/// (f ~ (x−a)^σa near a, (b−x)^σb near b).
pub fn integrate_finite_vec(
    mut f: impl FnMut(&FinitePoint) -> Result<Vec<Float>>,
    n: usize,
    a: &Float,
    b: &Float,
    sing: (f64, f64),
    opts: &QuadOptions,
    bits: u32,
) -> Result<Vec<QuadResult>> {
    if !(a < b) {
        return Err(Error::domain("integrate_finite", format!("need a < b, got [{a}, {b}]")));
    }
    if !(sing.0 > -1.0 && sing.1 > -1.0) {
        return Err(Error::domain("integrate_finite", format!("endpoint exponents {sing:?} must exceed -1")));
    }
    let len = Float::with_val(bits, b - a);
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let cap = |s: f64| {
        let need = nats(bits) / (std::f64::consts::PI * (1.0 + s).max(1e-3));
        (need.asinh() + 0.25).min(12.0)
    };
    let driver = Driver {
        bits,
        opts,
        h0: Float::with_val(bits, 0.5),
        tau_left: cap(sing.0),
        tau_right: cap(sing.1),
        n,
    };
    let mut g = |tau: &Float| -> Result<Option<Sample>> {
        let et = Float::with_val(bits, tau.exp_ref());
        let emt = Float::with_val(bits, et.recip_ref());
        let sinh = Float::with_val(bits, &et - &emt) / 2u32;
        let cosh = Float::with_val(bits, &et + &emt) / 2u32;
        let v = Float::with_val(bits, &half_pi * &sinh);
        let q = Float::with_val(bits, Float::with_val(bits, v.abs_ref()) * -2i32).exp();
        let one_q = Float::with_val(bits, &q + 1u32);
        let near = Float::with_val(bits, &len * &q) / &one_q;
        let far = Float::with_val(bits, &len / &one_q);
        let (from_a, from_b) = if v >= 0 { (far, near) } else { (near, far) };
        if from_a.is_zero() || from_b.is_zero() {
            return Ok(None);
        }
        let x = if from_a <= from_b { Float::with_val(bits, a + &from_a) } else { Float::with_val(bits, b - &from_b) };
        let w = Float::with_val(bits, &len * &half_pi) * cosh * q * 2u32 / Float::with_val(bits, one_q.square_ref());
        let vals = f(&FinitePoint { x, from_a, from_b })?;
        let mut envelope = Float::new(bits);
        let vals: Vec<Float> = vals
            .into_iter()
            .map(|val| {
                let t = Float::with_val(bits, &val * &w);
                envelope = envelope.clone().max(&Float::with_val(bits, t.abs_ref()));
                t
            })
            .collect();
        Ok(Some(Sample { vals, envelope }))
    };
    driver.run(&mut g)
}

/// ∫_a^b f with the context's quadrature target.
pub fn integrate_finite(
    mut f: impl FnMut(&FinitePoint) -> Result<Float>,
    a: &Float,
    b: &Float,
    sing: (f64, f64),
    ctx: &PrecisionContext,
) -> Result<QuadResult> {
    let opts = QuadOptions::from_ctx(ctx);
    let mut r = integrate_finite_vec(|p| Ok(vec![f(p)?]), 1, a, b, sing, &opts, ctx.bits())?;
    Ok(r.remove(0))
}

/// Π Γ(s + a_i) / Π Γ(s + b_j), the Mellin–Barnes integrands in scope.
#[derive(Clone, Debug)]
pub struct GammaProduct {
    pub numer: Vec<Float>,
    pub denom: Vec<Float>,
}

impl GammaProduct {
    pub fn new(numer: Vec<Float>, denom: Vec<Float>) -> Self {
        Self { numer, denom }
    }

    /// Largest real part of any numerator pole.
    pub fn rightmost_pole(&self) -> Option<Float> {
        self.numer.iter().map(|a| Float::with_val(a.prec(), -a)).reduce(|x, y| x.max(&y))
    }

    pub fn log_eval(&self, s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        let bits = ctx.bits();
        let mut acc = Complex::new(bits);
        for a in &self.numer {
            acc += log_gamma_complex(&Complex::with_val(bits, s + a), ctx)?;
        }
        for b in &self.denom {
            acc -= log_gamma_complex(&Complex::with_val(bits, s + b), ctx)?;
        }
        Ok(acc)
    }
}

/// Value of a Mellin–Barnes line integral, with the raw imaginary residue.
#[derive(Clone, Debug)]
pub struct MellinResult {
    pub value: Float,
    pub imag_residue: Float,
    pub err_estimate: Float,
    pub levels_used: u32,
}

/// (1/2πi) ∫_{γ−i∞}^{γ+i∞} F(s) x^(−s) ds for a gamma-product F.
///
/// The line must lie strictly right of every numerator pole. Nodes are
/// y = sinh τ along s = γ + iy; truncation follows |F(s)| x^(−γ).
pub fn mellin_line_integral(
    gp: &GammaProduct,
    gamma_line: &Float,
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<MellinResult> {
    let bits = ctx.bits();
    if *x <= 0 {
        return Err(Error::domain("mellin_line_integral", format!("x = {x} must be positive")));
    }
    for a in &gp.numer {
        let t = Float::with_val(bits, gamma_line + a);
        if t.is_integer() && t <= 0 {
            return Err(Error::PoleOnContour);
        }
        if t <= 0 {
            return Err(Error::domain(
                "mellin_line_integral",
                format!("line γ = {:.6} is left of the pole at {:.6}", gamma_line.to_f64(), -a.to_f64()),
            ));
        }
    }
    let excess = gp.numer.len() as f64 - gp.denom.len() as f64;
    if excess < 1.0 {
        return Err(Error::domain("mellin_line_integral", "integrand must decay along the line"));
    }
    let ln_x = Float::with_val(bits, x.ln_ref());
    let inv_2pi = (Float::with_val(bits, Constant::Pi) * 2u32).recip();
    let opts = QuadOptions::relative(ctx);
    let driver = Driver {
        bits,
        opts: &opts,
        h0: Float::with_val(bits, 0.5),
        tau_left: (4.0 * nats(bits) / (excess * std::f64::consts::FRAC_PI_2)).asinh() + 0.5,
        tau_right: (4.0 * nats(bits) / (excess * std::f64::consts::FRAC_PI_2)).asinh() + 0.5,
        n: 2,
    };
    let mut g = |tau: &Float| -> Result<Option<Sample>> {
        let et = Float::with_val(bits, tau.exp_ref());
        let emt = Float::with_val(bits, et.recip_ref());
        let y = Float::with_val(bits, &et - &emt) / 2u32;
        let dy = Float::with_val(bits, &et + &emt) / 2u32;
        let s = Complex::with_val(bits, (gamma_line, &y));
        let mut log_f = gp.log_eval(&s, ctx)?;
        log_f -= Complex::with_val(bits, &s * &ln_x);
        let envelope = Float::with_val(bits, log_f.real().exp_ref()) * &dy * &inv_2pi;
        let val = Complex::with_val(bits, log_f.exp_ref()) * &dy * &inv_2pi;
        let (re, im) = val.into_real_imag();
        Ok(Some(Sample { vals: vec![re, im], envelope }))
    };
    let r = driver.run(&mut g)?;
    Ok(MellinResult {
        value: r[0].value.clone(),
        imag_residue: r[1].value.clone(),
        err_estimate: r[0].err_estimate.clone().max(&r[1].err_estimate),
        levels_used: r[0].levels_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::beta;
    use rug::ops::Pow;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn assert_close(ctx: &PrecisionContext, got: &Float, want: &Float, tol: f64) {
        let r = ctx.residual(got, want);
        assert!(r < tol, "got {got:.30e}, want {want:.30e}, residual {r:.3e}");
    }

    #[test]
    fn exp_decay() {
        let c = ctx();
        let r = integrate_zero_inf(|x| Ok(Float::with_val(c.bits(), -x).exp()), EndpointProfile::smooth(Decay::Exp), &c).unwrap();
        assert!(r.converged);
        assert_close(&c, &r.value, &c.one(), 1e-40);
        assert!(r.err_estimate <= *c.quad_target());
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let c = ctx();
        let r = integrate_zero_inf(
            |x| Ok(Float::with_val(c.bits(), -x).exp() / Float::with_val(c.bits(), x.sqrt_ref())),
            EndpointProfile::new(-0.5, Decay::Exp),
            &c,
        )
        .unwrap();
        assert_close(&c, &r.value, &c.sqrt_pi(), 1e-40);
    }

    #[test]
    fn sqrt_decay_class() {
        let c = ctx();
        let r = integrate_zero_inf(
            |x| Ok((Float::with_val(c.bits(), x.sqrt_ref()) * -4i32).exp()),
            EndpointProfile::smooth(Decay::SqrtExp),
            &c,
        )
        .unwrap();
        assert_close(&c, &r.value, &c.ratio(1, 8), 1e-40);
    }

    #[test]
    fn log_singularity_at_origin() {
        // ∫ ln x · e^(−x) dx = −γ_E
        let c = ctx();
        let r = integrate_zero_inf(
            |x| Ok(Float::with_val(c.bits(), x.ln_ref()) * Float::with_val(c.bits(), -x).exp()),
            EndpointProfile::smooth(Decay::Exp).with_log(),
            &c,
        )
        .unwrap();
        let euler = -Float::with_val(c.bits(), Constant::Euler);
        assert_close(&c, &r.value, &euler, 1e-40);
    }

    #[test]
    fn power_decay() {
        // ∫ dx/(1+x)² = 1
        let c = ctx();
        let r = integrate_zero_inf(
            |x| Ok(Float::with_val(c.bits(), x + 1u32).square().recip()),
            EndpointProfile::smooth(Decay::Power),
            &c,
        )
        .unwrap();
        assert_close(&c, &r.value, &c.one(), 1e-40);
    }

    #[test]
    fn finite_cases() {
        let c = ctx();
        let (zero, one) = (c.zero(), c.one());
        let r = integrate_finite(|_| Ok(c.one()), &zero, &one, (0.0, 0.0), &c).unwrap();
        assert_close(&c, &r.value, &one, 1e-40);
        let r = integrate_finite(|p| Ok(Float::with_val(c.bits(), p.from_a.sqrt_ref()).recip()), &zero, &one, (-0.5, 0.0), &c).unwrap();
        assert_close(&c, &r.value, &c.real(2), 1e-40);
        let r = integrate_finite(
            |p| {
                let a = Float::with_val(c.bits(), p.from_b.sqrt_ref());
                let b = Float::with_val(c.bits(), (&p.from_a).pow(&c.ratio(1, 4)));
                Ok(a * b)
            },
            &zero,
            &one,
            (0.25, 0.5),
            &c,
        )
        .unwrap();
        let want = beta(&c.ratio(5, 4), &c.ratio(3, 2), &c).unwrap();
        assert_close(&c, &r.value, &want, 1e-40);
    }

    #[test]
    fn finite_rejects_reversed_interval() {
        let c = ctx();
        assert!(integrate_finite(|_| Ok(c.one()), &c.one(), &c.zero(), (0.0, 0.0), &c).is_err());
    }

    #[test]
    fn cahen_mellin() {
        let c = ctx();
        let gp = GammaProduct::new(vec![c.zero()], vec![]);
        let r = mellin_line_integral(&gp, &c.real(1), &c.one(), &c).unwrap();
        let want = Float::with_val(c.bits(), -1i32).exp();
        assert_close(&c, &r.value, &want, 1e-40);
        assert!(Float::with_val(c.bits(), r.imag_residue.abs_ref()) < *c.quad_target());
    }

    #[test]
    fn mellin_line_independence() {
        // Γ(s+1/2)Γ(s) at x = 1 is √π e^(−2)
        let c = ctx();
        let gp = GammaProduct::new(vec![c.ratio(1, 2), c.zero()], vec![]);
        let want = c.sqrt_pi() * Float::with_val(c.bits(), -2i32).exp();
        let r1 = mellin_line_integral(&gp, &c.ratio(1, 2), &c.one(), &c).unwrap();
        let r2 = mellin_line_integral(&gp, &c.real(2), &c.one(), &c).unwrap();
        assert_close(&c, &r1.value, &want, 1e-38);
        let d = Float::with_val(c.bits(), &r1.value - &r2.value).abs();
        assert!(d <= Float::with_val(c.bits(), c.quad_target() * 10u32));
    }

    #[test]
    fn mellin_contour_errors() {
        let c = ctx();
        let gp = GammaProduct::new(vec![c.zero()], vec![]);
        assert!(matches!(mellin_line_integral(&gp, &c.real(-1), &c.one(), &c), Err(Error::PoleOnContour)));
        assert!(mellin_line_integral(&gp, &c.real(-0.5), &c.one(), &c).is_err());
    }

    #[test]
    fn vector_integration_shares_nodes() {
        let c = ctx();
        let opts = QuadOptions::from_ctx(&c);
        let r = integrate_zero_inf_vec(
            |x| {
                let e = Float::with_val(c.bits(), -x).exp();
                Ok(vec![e.clone(), Float::with_val(c.bits(), x * &e), Float::with_val(c.bits(), x.square_ref()) * e])
            },
            3,
            EndpointProfile::smooth(Decay::Exp),
            &opts,
            c.bits(),
        )
        .unwrap();
        for (k, want) in [1, 1, 2].into_iter().enumerate() {
            assert_close(&c, &r[k].value, &c.real(want), 1e-40);
        }
    }
}
