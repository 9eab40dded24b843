use proptest::prelude::*;
use rug::Float;

use rhopoly::multi::{type1_from_table, type2_from_table, MomentTable};
use rhopoly::orthopoly::gram_construct;
use rhopoly::special::{rho, WeightKind};
use rhopoly::{PrecisionContext, Polynomial};

fn ctx() -> PrecisionContext {
    PrecisionContext::new(192, 1e-25, 1e-45).unwrap()
}

fn poly(c: &PrecisionContext, v: &[f64]) -> Polynomial {
    Polynomial::from_coeffs(c.bits(), v.iter().map(|&x| c.real(x)).collect())
}

fn close(a: &Float, b: &Float, tol: f64) -> bool {
    let p = a.prec();
    let scale = Float::with_val(p, a.abs_ref()).max(&Float::with_val(p, b.abs_ref())).max(&Float::with_val(p, 1));
    Float::with_val(p, a - b).abs() / scale < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn polynomial_product_and_derivative(
        a in prop::collection::vec(-5.0..5.0f64, 1..5),
        b in prop::collection::vec(-5.0..5.0f64, 1..5),
        x in -3.0..3.0f64,
    ) {
        let c = ctx();
        let (p, q) = (poly(&c, &a), poly(&c, &b));
        let x = c.real(x);
        prop_assert!(close(&(&p * &q).eval(&x), &(p.eval(&x) * q.eval(&x)), 1e-50));
        let lhs = (&p * &q).derivative().eval(&x);
        let rhs = p.derivative().eval(&x) * q.eval(&x) + p.eval(&x) * q.derivative().eval(&x);
        prop_assert!(close(&lhs, &rhs, 1e-50));
    }

    #[test]
    fn rho_three_term_recurrence(nu in 0.05..2.0f64, x in 0.05..20.0f64) {
        let c = ctx();
        let (nu, x) = (c.real(nu), c.real(x));
        let up = rho(&(nu.clone() + 1u32), &x, &c).unwrap();
        let mid = rho(&nu, &x, &c).unwrap();
        let down = rho(&(nu.clone() - 1u32), &x, &c).unwrap();
        prop_assert!(close(&up, &(mid * &nu + down * &x), 1e-40));
    }

    #[test]
    fn type2_invariant_under_moment_scaling(nu in 0.0..0.45f64, alpha in 0.0..1.5f64, k in 0.01..100.0f64) {
        let c = ctx();
        let t = MomentTable::new(&c.real(nu), &c.real(alpha), 6, &c).unwrap();
        let p = type2_from_table(&t, (2, 1, 1), &c).unwrap().p;
        let q = type2_from_table(&t.scaled(&c.real(k)), (2, 1, 1), &c).unwrap().p;
        prop_assert!((&p - &q).max_abs_coeff() / p.max_abs_coeff() < 1e-40);
        prop_assert_eq!(p.leading(), 1);
    }

    #[test]
    fn type1_normalized_and_scale_free(nu in 0.0..0.45f64, alpha in 0.0..1.5f64, k in 0.01..100.0f64) {
        let c = ctx();
        let t = MomentTable::new(&c.real(nu), &c.real(alpha), 8, &c).unwrap();
        let a = type1_from_table(&t, (2, 1, 1), &c).unwrap();
        let b = type1_from_table(&t.scaled(&c.real(k)), (2, 1, 1), &c).unwrap();
        prop_assert_eq!(a.a.leading(), 1);
        for (x, y) in a.polys().iter().zip(b.polys()) {
            prop_assert!((*x - y).max_abs_coeff() < 1e-35);
        }
    }

    #[test]
    fn gram_leading_coefficients_positive(nu in -0.45..2.0f64) {
        let c = ctx();
        let b = gram_construct(&WeightKind::rho_sq(&c.real(nu)).unwrap(), 3, &c).unwrap();
        for n in 0..=3 {
            prop_assert!(b.leading(n) > 0);
        }
        prop_assert!(b.recur_a.iter().all(|a| *a > 0));
    }
}
