//! Randomised structural properties: symmetries, exact series arithmetic, parsing and determinism.

use mocktheta_core::lerch::{appell_mu, correction_r, mordell_h};
use mocktheta_core::numerics::{parse_complex, C64};
use mocktheta_core::qseries::QSeries;
use mocktheta_core::registry::{CheckContext, Sampler, Suite};
use mocktheta_core::report::verify;
use mocktheta_core::theta::jacobi_theta;
use num_bigint::BigInt;
use proptest::prelude::*;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn tau() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, 0.5f64..2.0).prop_map(|(x, y)| C64::new(x, y))
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..0.95, 0.05f64..0.95)
}

fn series() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 1..12)
}

fn poly(c: &[i64], order: i64) -> QSeries {
    c.iter().enumerate().fold(QSeries::zero(1, order), |s, (k, v)| {
        s.add(&QSeries::monomial(k as i64, BigInt::from(*v), 1, order))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn appell_mu_is_symmetric(t in tau(), p in point(), q in point()) {
        let u = C64::new(p.0, 0.0) + t * p.1;
        let v = C64::new(q.0, 0.0) + t * q.1 * 0.5;
        let a = appell_mu(u, v, t).unwrap();
        let b = appell_mu(v, u, t).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn correction_r_is_even(t in tau(), p in point()) {
        let u = C64::new(p.0, 0.0) + t * (p.1 - 0.5);
        let a = correction_r(u, t).unwrap();
        let b = correction_r(-u, t).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn jacobi_theta_is_odd(t in tau(), p in point()) {
        let z = C64::new(p.0, 0.0) + t * (p.1 - 0.5);
        let a = jacobi_theta(z, t).unwrap();
        let b = jacobi_theta(-z, t).unwrap();
        prop_assert!(close(a, -b, 1e-10), "{a} vs {b}");
    }

    #[test]
    fn mordell_h_is_even(t in tau(), p in point()) {
        let z = C64::new(p.0 - 0.5, 0.0) + t * (p.1 - 0.5) * 0.5;
        let a = mordell_h(z, t).unwrap();
        let b = mordell_h(-z, t).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn series_product_is_commutative_and_inverse_is_exact(a in series(), b in series()) {
        let order = 30;
        let mut a = a;
        a[0] = 1;
        let pa = poly(&a, order);
        let pb = poly(&b, order);
        prop_assert_eq!(pa.mul(&pb), pb.mul(&pa));
        let inv = pa.invert_unit().unwrap();
        prop_assert_eq!(pa.mul(&inv), QSeries::one(1, order));
    }

    #[test]
    fn series_subtraction_cancels(a in series()) {
        let pa = poly(&a, 20);
        prop_assert!(pa.sub(&pa).is_zero());
        prop_assert_eq!(pa.add(&pa.neg()), QSeries::zero(1, 20));
    }

    #[test]
    fn parse_complex_round_trips(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let s = format!("{re:e}{}{:e}i", if im < 0.0 { "-" } else { "+" }, im.abs());
        let z = parse_complex(&s).unwrap();
        prop_assert_eq!(z, C64::new(re, im));
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>()) {
        let mut a = Sampler::new(seed, "x");
        let mut b = Sampler::new(seed, "x");
        for _ in 0..8 {
            prop_assert_eq!(a.tau(), b.tau());
            prop_assert_eq!(a.char(), b.char());
        }
    }
}

#[test]
fn parse_complex_accepts_short_forms() {
    assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
    assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
    assert_eq!(parse_complex("0.1+1.2i").unwrap(), C64::new(0.1, 1.2));
    assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
    assert!(parse_complex("1+").is_err());
    assert!(parse_complex("").is_err());
}

#[test]
fn report_is_reproducible_for_a_fixed_seed() {
    let ctx = CheckContext { seed: 7, tol: None, order: 30 };
    let a = verify(&[Suite::Qseries, Suite::Ch1], &ctx).to_json().unwrap();
    let b = verify(&[Suite::Ch1, Suite::Qseries], &ctx).to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn tolerance_override_applies_to_every_entry() {
    let ctx = CheckContext { seed: 42, tol: Some(0.0), order: 30 };
    let r = verify(&[Suite::Ch1], &ctx);
    assert!(r.entries.iter().all(|e| e.tolerance == 0.0));
    assert!(r.summary.failed > 0);
}
