//! Working precision, tolerance policy and the gamma family.
//!
//! All scalars are MPFR floats carried at the precision of a
//! [`PrecisionContext`]. Real gamma values come from MPFR directly; the
//! complex log-gamma needed on Mellin–Barnes contours is an argument-shifted
//! Stirling series.

use std::sync::OnceLock;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

pub type Real = Float;

/// Precision in bits plus the two tolerances every check is measured against.
///
/// `quad_target` drives quadrature truncation and is always at least as strict
/// as `verify_tol`, the pass/fail threshold used by reports.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    bits: u32,
    verify_tol: Real,
    quad_target: Real,
    max_level: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(320, 1e-25, 1e-40).expect("default context is valid")
    }
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32, verify_tol: f64, quad_target: f64) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidContext(format!("bits = {bits} < {}", Self::MIN_BITS)));
        }
        if !(quad_target > 0.0 && quad_target <= verify_tol && verify_tol < 1.0) {
            return Err(Error::InvalidContext(format!(
                "need 0 < quad_target ({quad_target:e}) <= verify_tol ({verify_tol:e}) < 1"
            )));
        }
        // 64 bits cannot resolve a 1e-40 target; clamp to what the mantissa can hold.
        let floor = 2f64.powi(-(bits as i32) + 24);
        let quad_target = quad_target.max(floor.min(verify_tol));
        Ok(Self {
            bits,
            verify_tol: Float::with_val(bits, verify_tol),
            quad_target: Float::with_val(bits, quad_target),
            max_level: 12,
        })
    }

    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn verify_tol(&self) -> &Real {
        &self.verify_tol
    }

    pub fn quad_target(&self) -> &Real {
        &self.quad_target
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Same precision, different pass threshold. Used by checks whose
    /// tolerance is pinned independently of the context default.
    pub fn with_verify_tol(&self, tol: f64) -> Self {
        let mut c = self.clone();
        c.verify_tol = Float::with_val(self.bits, tol);
        c
    }

    pub fn real<T>(&self, v: T) -> Real
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits)
    }

    pub fn one(&self) -> Real {
        Float::with_val(self.bits, 1)
    }

    /// Parses a decimal literal at working precision, so "0.1" means the
    /// decimal value rather than the nearest double.
    pub fn parse(&self, s: &str) -> Result<Real> {
        Float::parse(s)
            .map(|p| Float::with_val(self.bits, p))
            .map_err(|e| Error::domain("parse", format!("{s:?}: {e}")))
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Float::with_val(self.bits, num) / den
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits, Constant::Pi)
    }

    pub fn sqrt_pi(&self) -> Real {
        self.pi().sqrt()
    }

    pub fn e(&self) -> Real {
        self.one().exp()
    }

    /// Unit roundoff 2^(1-bits).
    pub fn eps(&self) -> Real {
        Float::with_val(self.bits, Float::i_exp(1, 1 - self.bits as i32))
    }

    /// Relative-above-one, absolute-below-one residual used by every report.
    pub fn residual(&self, computed: &Real, expected: &Real) -> Real {
        let diff = Float::with_val(self.bits, computed - expected).abs();
        let scale = Float::with_val(self.bits, expected.abs_ref()).max(&self.one());
        diff / scale
    }

    pub fn within(&self, computed: &Real, expected: &Real, tol: &Real) -> bool {
        self.residual(computed, expected) <= *tol
    }
}

fn is_nonpositive_integer(x: &Real) -> bool {
    x.is_integer() && *x <= 0
}

/// Γ(x) at working precision (MPFR, correctly rounded).
pub fn gamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x.to_string()));
    }
    Ok(Float::with_val(ctx.bits(), x.gamma_ref()))
}

/// ln|Γ(x)| for real x away from the poles.
pub fn ln_abs_gamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x.to_string()));
    }
    let (v, _) = Float::with_val(ctx.bits(), x).ln_abs_gamma();
    Ok(v)
}

/// Rising factorial (a)_n as a direct product.
pub fn pochhammer(a: &Real, n: u32, ctx: &PrecisionContext) -> Real {
    let mut acc = ctx.one();
    let mut term = Float::with_val(ctx.bits(), a);
    for _ in 0..n {
        acc *= &term;
        term += 1;
    }
    acc
}

pub fn factorial(n: u32, ctx: &PrecisionContext) -> Real {
    Float::with_val(ctx.bits(), Integer::from(Integer::factorial(n)))
}

pub fn binomial(n: u32, k: u32, ctx: &PrecisionContext) -> Real {
    Float::with_val(ctx.bits(), Integer::from(n).binomial(k))
}

/// Euler beta B(a, b) for a, b > 0.
pub fn beta(a: &Real, b: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if *a <= 0 || *b <= 0 {
        return Err(Error::domain("beta", format!("need a, b > 0, got ({a}, {b})")));
    }
    let ab = Float::with_val(ctx.bits(), a + b);
    let ln = ln_abs_gamma(a, ctx)? + ln_abs_gamma(b, ctx)? - ln_abs_gamma(&ab, ctx)?;
    Ok(ln.exp())
}

const BERNOULLI_COUNT: usize = 160;

/// B_2, B_4, ..., exact.
fn bernoulli_even() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Akiyama–Tanigawa gives B_n with the B_1 = +1/2 convention; only even
        // indices are kept so the sign convention does not matter.
        let n_max = 2 * BERNOULLI_COUNT;
        let mut a: Vec<Rational> = Vec::with_capacity(n_max + 1);
        let mut out = Vec::with_capacity(BERNOULLI_COUNT);
        for m in 0..=n_max {
            a.push(Rational::from((1, m as u32 + 1)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&a[j - 1] - &a[j]);
                a[j - 1] = diff * j as u32;
            }
            if m >= 2 && m % 2 == 0 {
                out.push(a[0].clone());
            }
        }
        out
    })
}

fn reduce_principal(im: &mut Float, bits: u32) {
    let pi = Float::with_val(bits, Constant::Pi);
    let two_pi = Float::with_val(bits, &pi * 2u32);
    if im.clone().abs() <= pi {
        return;
    }
    let k = Float::with_val(bits, &*im / &two_pi).round();
    *im -= k * two_pi;
    if *im <= -pi.clone() {
        *im += Float::with_val(bits, &pi * 2u32);
    }
}

/// Principal branch of ln Γ(s) for complex s.
///
/// Shifts the argument until |s + N| is large, sums the Stirling series there
/// and divides out the product (s)(s+1)...(s+N-1). The imaginary part is
/// reduced to (-π, π].
pub fn log_gamma_complex(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    if s.imag().is_zero() && is_nonpositive_integer(s.real()) {
        return Err(Error::Pole(s.real().to_string()));
    }
    let radius = 10.0 + 0.25 * bits as f64;
    let mut z = Complex::with_val(bits, s);
    let mut shift_prod = Complex::with_val(bits, (1, 0));
    loop {
        let abs = Float::with_val(bits, z.abs_ref());
        if z.real().to_f64() > 0.0 && abs.to_f64() >= radius {
            break;
        }
        shift_prod *= &z;
        z += 1;
    }

    let half = Float::with_val(bits, 0.5);
    let ln_z = Complex::with_val(bits, z.ln_ref());
    let mut acc = Complex::with_val(bits, &z - &half) * &ln_z;
    acc -= &z;
    let ln_2pi = Float::with_val(bits, Constant::Pi) * 2u32;
    acc += ln_2pi.ln() / 2u32;

    let z_inv = Complex::with_val(bits, z.recip_ref());
    let z_inv_sq = Complex::with_val(bits, z_inv.square_ref());
    let mut pow = z_inv;
    let tiny = Float::with_val(bits, Float::i_exp(1, -(bits as i32) - 8));
    let mut converged = false;
    for (k, b) in bernoulli_even().iter().enumerate() {
        let k = (k + 1) as u32;
        let coef = Float::with_val(bits, b) / ((2 * k) * (2 * k - 1));
        let term = Complex::with_val(bits, &pow * &coef);
        let t_abs = Float::with_val(bits, term.abs_ref());
        acc += &term;
        let a_abs = Float::with_val(bits, acc.abs_ref());
        if t_abs <= Float::with_val(bits, &tiny * &a_abs.max(&Float::with_val(bits, 1))) {
            converged = true;
            break;
        }
        pow *= &z_inv_sq;
    }
    if !converged {
        return Err(Error::Internal("Stirling series exhausted its coefficient table".into()));
    }
    if !(shift_prod.real().is_zero() && shift_prod.imag().is_zero()) {
        acc -= Complex::with_val(bits, shift_prod.ln_ref());
    }
    let (re, mut im) = acc.into_real_imag();
    reduce_principal(&mut im, bits);
    Ok(Complex::with_val(bits, (re, im)))
}

/// x^y for x > 0.
pub fn pow_real(x: &Real, y: &Real) -> Real {
    Float::with_val(x.prec(), x.pow(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn gamma_anchor_values() {
        let c = ctx();
        let tol = c.real(1e-90);
        assert!(c.within(&gamma(&c.one(), &c).unwrap(), &c.one(), &tol));
        assert!(c.within(&gamma(&c.real(0.5), &c).unwrap(), &c.sqrt_pi(), &tol));
        assert!(c.within(&gamma(&c.real(5), &c).unwrap(), &c.real(24), &tol));
        assert!(matches!(gamma(&c.real(-2), &c), Err(Error::Pole(_))));
        assert!(matches!(gamma(&c.zero(), &c), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_recurrence_and_duplication_on_grid() {
        let c = ctx();
        let tol = Float::with_val(c.bits(), Float::i_exp(1, 8 - c.bits() as i32));
        for i in 1..=80 {
            let x = c.ratio(i, 4);
            let g = gamma(&x, &c).unwrap();
            let g1 = gamma(&Float::with_val(c.bits(), &x + 1), &c).unwrap();
            let rel = Float::with_val(c.bits(), &g1 - &(g.clone() * &x)).abs() / &g1;
            assert!(rel <= tol, "recurrence at {x}");

            let two_x = Float::with_val(c.bits(), &x * 2u32);
            let lhs = gamma(&two_x, &c).unwrap();
            let xh = Float::with_val(c.bits(), &x + 0.5);
            let pow = Float::with_val(c.bits(), 2).pow(Float::with_val(c.bits(), &two_x - 1));
            let rhs = pow * g * gamma(&xh, &c).unwrap() / c.sqrt_pi();
            let rel = Float::with_val(c.bits(), &lhs - &rhs).abs() / &lhs;
            assert!(rel <= tol, "duplication at {x}");
        }
    }

    #[test]
    fn pochhammer_values() {
        let c = ctx();
        assert_eq!(pochhammer(&c.real(7.5), 0, &c), 1);
        assert_eq!(pochhammer(&c.real(3), 2, &c), 12);
        assert_eq!(pochhammer(&c.real(1.5), 3, &c), 13.125);
    }

    #[test]
    fn pochhammer_splits() {
        let c = ctx();
        let a = c.real(0.37);
        for m in 0..6u32 {
            for n in 0..6u32 {
                let lhs = pochhammer(&a, m + n, &c);
                let am = Float::with_val(c.bits(), &a + m);
                let rhs = pochhammer(&a, m, &c) * pochhammer(&am, n, &c);
                assert!(c.within(&lhs, &rhs, &c.real(1e-90)));
            }
        }
    }

    #[test]
    fn beta_values() {
        let c = ctx();
        let tol = c.real(1e-90);
        assert!(c.within(&beta(&c.one(), &c.one(), &c).unwrap(), &c.one(), &tol));
        assert!(c.within(&beta(&c.real(0.5), &c.real(0.5), &c).unwrap(), &c.pi(), &tol));
        let (a, b) = (c.real(1.25), c.real(1.5));
        let oracle = gamma(&a, &c).unwrap() * gamma(&b, &c).unwrap() / gamma(&c.real(2.75), &c).unwrap();
        assert!(c.within(&beta(&a, &b, &c).unwrap(), &oracle, &tol));
        assert!(beta(&c.zero(), &c.one(), &c).is_err());
    }

    #[test]
    fn complex_log_gamma_real_axis_matches_mpfr() {
        let c = ctx();
        let one = Complex::with_val(c.bits(), (1, 0));
        let v = log_gamma_complex(&one, &c).unwrap();
        assert!(Float::with_val(c.bits(), v.abs_ref()) < c.real(1e-90));
        for x in [0.3, 2.5, 7.25, 31.0] {
            let s = Complex::with_val(c.bits(), (x, 0));
            let v = log_gamma_complex(&s, &c).unwrap();
            let r = ln_abs_gamma(&c.real(x), &c).unwrap();
            assert!(c.within(v.real(), &r, &c.real(1e-90)), "x = {x}");
            assert!(v.imag().clone().abs() < c.real(1e-90));
        }
    }

    #[test]
    fn complex_log_gamma_reflection_modulus() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        let c = ctx();
        let tol = c.real(1e-90);
        for y in [1.0, 0.25, 3.0, 17.5] {
            let s = Complex::with_val(c.bits(), (0.5, y));
            let lg = log_gamma_complex(&s, &c).unwrap();
            let modulus = Float::with_val(c.bits(), lg.real().exp_ref());
            let py = c.pi() * c.real(y);
            let oracle = (c.pi() / py.cosh()).sqrt();
            let rel = Float::with_val(c.bits(), &modulus - &oracle).abs() / &oracle;
            assert!(rel <= tol, "y = {y}: rel {rel}");
        }
    }

    #[test]
    fn complex_log_gamma_conjugate_symmetry_and_recurrence() {
        let c = ctx();
        let s = Complex::with_val(c.bits(), (-2.3, 4.1));
        let a = log_gamma_complex(&s, &c).unwrap();
        let b = log_gamma_complex(&Complex::with_val(c.bits(), s.conj_ref()), &c).unwrap();
        let diff = Complex::with_val(c.bits(), &a - &Complex::with_val(c.bits(), b.conj_ref()));
        assert!(Float::with_val(c.bits(), diff.abs_ref()) < c.real(1e-90));

        // Γ(s+1) = sΓ(s): compare via exp to avoid branch bookkeeping.
        let s1 = Complex::with_val(c.bits(), &s + 1);
        let g1 = Complex::with_val(c.bits(), log_gamma_complex(&s1, &c).unwrap().exp_ref());
        let g0 = Complex::with_val(c.bits(), a.exp_ref()) * &s;
        let diff = Complex::with_val(c.bits(), &g1 - &g0);
        let rel = Float::with_val(c.bits(), diff.abs_ref()) / Float::with_val(c.bits(), g1.abs_ref());
        assert!(rel < c.real(1e-90));
        assert!(log_gamma_complex(&Complex::with_val(c.bits(), (-3, 0)), &c).is_err());
    }

    #[test]
    fn principal_branch() {
        let c = ctx();
        let s = Complex::with_val(c.bits(), (0.5, 60.0));
        let v = log_gamma_complex(&s, &c).unwrap();
        assert!(v.imag().clone().abs() <= c.pi());
    }

    #[test]
    fn context_invariants() {
        assert!(PrecisionContext::new(32, 1e-10, 1e-12).is_err());
        assert!(PrecisionContext::new(128, 1e-30, 1e-20).is_err());
        assert!(PrecisionContext::new(128, 1.5, 1e-20).is_err());
        let c = PrecisionContext::new(128, 1e-20, 1e-30).unwrap();
        assert_eq!(c.bits(), 128);
        assert!(*c.quad_target() <= *c.verify_tol());
    }

    #[test]
    fn residual_policy() {
        let c = ctx();
        // absolute below one
        let r = c.residual(&c.real(0.5), &c.real(0.25));
        assert_eq!(r, 0.25);
        // relative above one
        let r = c.residual(&c.real(110), &c.real(100));
        let tenth = c.parse("0.1").unwrap();
        assert!(Float::with_val(c.bits(), &r - &tenth).abs() < c.eps());
    }
}
