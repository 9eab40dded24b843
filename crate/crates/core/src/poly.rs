//! Dense polynomials with MPFR coefficients, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    prec: u32,
    coeffs: Vec<Float>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{:.8e}·x^{k}", c.to_f64()))
            .collect();
        write!(f, "Polynomial[{}]", terms.join(" + "))
    }
}

impl Polynomial {
    pub fn zero(prec: u32) -> Self {
        Self { prec, coeffs: Vec::new() }
    }

    pub fn constant(c: Float) -> Self {
        let prec = c.prec();
        Self::from_coeffs(prec, vec![c])
    }

    /// c·x^k
    pub fn monomial(c: Float, k: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![Float::new(prec); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(prec, coeffs)
    }

    pub fn x(prec: u32) -> Self {
        Self::monomial(Float::with_val(prec, 1), 1)
    }

    /// Trailing exact zeros are dropped so `degree` is meaningful.
    pub fn from_coeffs(prec: u32, coeffs: Vec<Float>) -> Self {
        let mut p = Self { prec, coeffs: coeffs.into_iter().map(|c| Float::with_val(prec, c)).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero past the end).
    pub fn coeff(&self, k: usize) -> Float {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Float::new(self.prec))
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Float {
        self.coeffs.last().cloned().unwrap_or_else(|| Float::new(self.prec))
    }

    pub fn eval(&self, x: &Float) -> Float {
        let mut acc = Float::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Float::with_val(self.prec, c * k as u32))
            .collect();
        Self::from_coeffs(self.prec, coeffs)
    }

    pub fn scale(&self, s: &Float) -> Self {
        let coeffs = self.coeffs.iter().map(|c| Float::with_val(self.prec, c * s)).collect();
        Self::from_coeffs(self.prec, coeffs)
    }

    /// Multiplies by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Float::new(self.prec); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(self.prec, coeffs)
    }

    /// Largest coefficient magnitude; used as a scale for coefficient-wise residuals.
    pub fn max_abs_coeff(&self) -> Float {
        self.coeffs
            .iter()
            .map(|c| Float::with_val(self.prec, c.abs_ref()))
            .fold(Float::new(self.prec), |a, b| a.max(&b))
    }

    /// Sum of |c_k|·x^k, a magnitude bound for cancellation-aware tolerances.
    pub fn eval_abs(&self, x: &Float) -> Float {
        let xa = Float::with_val(self.prec, x.abs_ref());
        let mut acc = Float::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= &xa;
            acc += Float::with_val(self.prec, c.abs_ref());
        }
        acc
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::from_coeffs(self.prec, coeffs)
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::from_coeffs(self.prec, coeffs)
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.prec);
        }
        let mut coeffs = vec![Float::new(self.prec); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += Float::with_val(self.prec, a * b);
            }
        }
        Polynomial::from_coeffs(self.prec, coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|c| Float::with_val(self.prec, -c)).collect();
        Polynomial::from_coeffs(self.prec, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::from_coeffs(P, c.iter().map(|&v| Float::with_val(P, v)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = poly(&[1.0, 2.0]);
        let b = poly(&[-1.0, 0.0, 3.0]);
        assert_eq!(&a * &b, poly(&[-1.0, -2.0, 3.0, 6.0]));
        assert_eq!(&a + &b, poly(&[0.0, 2.0, 3.0]));
        assert_eq!(&(&a - &a), &Polynomial::zero(P));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(b.derivative(), poly(&[0.0, 6.0]));
        assert_eq!(a.shift(2), poly(&[0.0, 0.0, 1.0, 2.0]));
        assert_eq!(-&a, poly(&[-1.0, -2.0]));
    }

    #[test]
    fn evaluation() {
        let p = poly(&[1.0, -3.0, 2.0]);
        assert_eq!(p.eval(&Float::with_val(P, 2)), 3);
        assert_eq!(p.eval_abs(&Float::with_val(P, -2)), 15);
        assert_eq!(p.leading(), 2);
        assert_eq!(p.max_abs_coeff(), 3);
    }
}
