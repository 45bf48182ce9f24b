use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use pseudoharmonic::nonclassical::{self, Generator};
use pseudoharmonic::states::{self, Family, StateConfig};
use pseudoharmonic::{verify, FockVector, ModelParams};

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
        .prop_filter("non-zero", |v: &Vec<Complex64>| v.iter().any(|c| c.norm() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn bg_recursion_matches_closed_form(s in -0.5..4.0f64, r in 0.0..6.0f64, phase in 0.0..6.3f64) {
        let p = ModelParams::from_s(s).unwrap();
        let z = Complex64::from_polar(r, phase);
        let t = states::auto_truncation(Family::BarutGirardello, &p, z, &StateConfig::default()).unwrap();
        let a = states::bg_state(&p, z, &t).unwrap();
        let b = states::bg_recursion_solve(&p, z, &t).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn expanded_squeezing_matches_definition(s in 0.0..3.0f64, coeffs in complex_vec(10)) {
        let p = ModelParams::from_s(s).unwrap();
        let v = FockVector::from_coefficients(&p, coeffs).unwrap();
        let (a, b) = nonclassical::squeezing_first(&v).unwrap();
        let (c, d) = nonclassical::squeezing_first_expanded(&v).unwrap();
        prop_assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!((b - d).abs() <= 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn raise_is_adjoint_of_lower(s in 0.0..3.0f64, coeffs in complex_vec(8)) {
        let p = ModelParams::from_s(s).unwrap();
        let v = FockVector::from_coefficients(&p, coeffs).unwrap();
        let up = nonclassical::expectation(&v, &[Generator::Raise]).unwrap();
        let down = nonclassical::expectation(&v, &[Generator::Lower]).unwrap();
        prop_assert!((up - down.conj()).norm() <= 1e-12);
        // ⟨M₋M₊⟩ - ⟨M₊M₋⟩ = 2⟨M₀⟩ holds exactly on the retained vector.
        let lr = nonclassical::expectation(&v, &[Generator::Lower, Generator::Raise]).unwrap();
        let rl = nonclassical::expectation(&v, &[Generator::Raise, Generator::Lower]).unwrap();
        let m0 = nonclassical::expectation(&v, &[Generator::Weight]).unwrap();
        prop_assert!((lr - rl - m0 * 2.0).norm() <= 1e-11 * m0.norm());
    }

    #[test]
    fn squeezing_bounded_below(s in 0.0..3.0f64, coeffs in complex_vec(9)) {
        let p = ModelParams::from_s(s).unwrap();
        let v = FockVector::from_coefficients(&p, coeffs).unwrap();
        let m = nonclassical::metrics(&v).unwrap();
        for val in [m.s_x1, m.s_p1, m.s_x2, m.s_p2] {
            prop_assert!(val >= -1.0 - 1e-12);
        }
    }

    #[test]
    fn gp_norm_within_tail(s in 0.0..3.0f64, r in 0.0..0.9f64, phase in 0.0..6.3f64) {
        let p = ModelParams::from_s(s).unwrap();
        let z = Complex64::from_polar(r, phase);
        let t = states::auto_truncation(Family::GilmorePerelomov, &p, z, &StateConfig::default()).unwrap();
        let v = states::gp_state(&p, z, &t).unwrap();
        prop_assert!((v.norm_sqr() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn scan_is_even_in_z() {
    for (fam, lo, hi) in [(Family::GilmorePerelomov, -0.9, 0.9), (Family::BarutGirardello, -2.5, 2.5)] {
        let recs = nonclassical::scan(fam, &ModelParams::default(), lo, hi, 31).unwrap();
        assert!(verify::scan_asymmetry(&recs) <= 1e-10, "{fam:?}");
    }
}

#[test]
fn gp_mandel_changes_sign_once() {
    let recs = nonclassical::scan(Family::GilmorePerelomov, &ModelParams::default(), 0.01, 0.95, 95).unwrap();
    let qs: Vec<f64> = recs.iter().map(|r| r.metrics.as_ref().unwrap().q.unwrap()).collect();
    let changes = qs.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count();
    assert_eq!(changes, 1);
    assert_relative_eq!(qs[0], -1.0, max_relative = 1e-2);
}
