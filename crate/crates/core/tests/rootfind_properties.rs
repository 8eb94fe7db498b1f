use graphcon::rootfind::{
    bisection, compare_methods, newton, secant, CompareConfig, Method, RootFindError,
    ScalarFunction,
};
use proptest::prelude::*;

const ROOT: f64 = 4.493_409_457_909_064;

#[test]
fn all_methods_find_the_root_on_four_to_five() {
    let f = ScalarFunction::tanx();
    // oracle: the root is where tan x = x, refined by many bisection steps in
    // plain arithmetic
    let (mut a, mut b) = (4.0f64, 5.0f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (m.tan() - m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    assert!((a - ROOT).abs() < 1e-12);

    let cmp = compare_methods(
        &f,
        &[Method::Bisection, Method::Secant, Method::Newton],
        &CompareConfig::default(),
    );
    for row in &cmp.rows {
        assert!((row.root().unwrap() - a).abs() < 1e-5, "{row:?}");
    }
    let it = |m| cmp.row(m).unwrap().iterations().unwrap();
    assert!(it(Method::Newton) <= it(Method::Secant));
    assert!(it(Method::Secant) <= it(Method::Bisection));
    assert!(it(Method::Bisection) <= (1.0f64 / 1e-6).log2().ceil() as usize);
}

#[test]
fn tangent_map_is_reported_not_hidden() {
    // x = tan x is repelling at the root, so fixed-point iteration wanders off
    let cmp = compare_methods(&ScalarFunction::tanx(), &[Method::FixedPoint], &CompareConfig::default());
    let row = &cmp.rows[0];
    assert!(!row.converged());
    assert_eq!(row.note(), "fail to converge");
}

#[test]
fn table_and_csv_shapes() {
    let cmp = compare_methods(&ScalarFunction::tanx(), &Method::ALL, &CompareConfig::default());
    let table = cmp.to_table();
    assert_eq!(table.lines().count(), 5);
    assert!(table.contains("4.493409"));
    let mut buf = Vec::new();
    cmp.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("method,iterations,result,converged\n"));
    assert_eq!(text.lines().count(), 5);
}

fn shifted_quadratic(r: f64, s: f64) -> ScalarFunction {
    ScalarFunction::new("q", move |x| (x - r) * (x - s), (-100.0, 100.0))
        .with_derivative(move |x| 2.0 * x - r - s)
}

proptest! {
    #[test]
    fn bisection_halves_and_keeps_the_sign_change(
        r in -5.0f64..5.0,
        left in 0.01f64..4.0,
        right in 0.01f64..4.0,
        tol_exp in 2i32..12,
    ) {
        let f = ScalarFunction::new("cubic", move |x| (x - r).powi(3) + (x - r), (-100.0, 100.0));
        let (a, b) = (r - left, r + right);
        let tol = 10f64.powi(-tol_exp);
        let rep = bisection(&f, a, b, tol, 200).unwrap();
        prop_assert!(rep.converged);
        let bound = ((b - a) / tol).log2().ceil() as usize;
        prop_assert!(rep.iterations <= bound.max(1));
        for (i, w) in rep.iterates.windows(2).enumerate() {
            let step = (w[1] - w[0]).abs();
            let expect = (b - a) / 2f64.powi(i as i32 + 2);
            prop_assert!((step - expect).abs() <= 1e-12 * (b - a));
        }
        let half = (b - a) / 2f64.powi(rep.iterations as i32);
        let x = rep.root.unwrap();
        prop_assert!(f.eval(x - half) * f.eval(x + half) <= 0.0);
        prop_assert!((x - r).abs() <= half);
    }

    #[test]
    fn newton_converges_quadratically(r in 0.5f64..5.0, gap in 1.0f64..5.0, offset in 0.05f64..0.3) {
        let f = shifted_quadratic(r, r - gap);
        let rep = newton(&f, r + offset, 1e-14, 50).unwrap();
        let errors: Vec<f64> = rep.iterates.iter().map(|x| (x - r).abs()).collect();
        // near a simple root, e(k+1) <= C e(k)^2 with C = |f''| / |2 f'| = 1 / gap
        for w in errors.windows(2) {
            if w[0] > 1e-7 {
                prop_assert!(w[1] <= 1.5 / gap * w[0] * w[0] + 1e-15);
            }
        }
        prop_assert!((rep.root.unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn secant_and_newton_agree_with_bisection(r in 0.5f64..5.0, gap in 1.0f64..5.0) {
        let f = shifted_quadratic(r, r - gap);
        let (a, b) = (r - gap / 2.0, r + 1.0);
        let bis = bisection(&f, a, b, 1e-10, 200).unwrap().root.unwrap();
        let sec = secant(&f, r + 0.5, r + 1.0, 1e-10, 200).unwrap().root.unwrap();
        let nwt = newton(&f, r + 0.5, 1e-10, 200).unwrap().root.unwrap();
        prop_assert!((bis - r).abs() < 1e-9);
        prop_assert!((sec - r).abs() < 1e-9);
        prop_assert!((nwt - r).abs() < 1e-9);
    }

    #[test]
    fn runs_are_deterministic(a in 3.5f64..4.4, b in 4.6f64..5.2, tol_exp in 3i32..10) {
        let f = ScalarFunction::tanx();
        let cfg = CompareConfig::for_bracket(a, b, 10f64.powi(-tol_exp), 100);
        prop_assert_eq!(
            compare_methods(&f, &Method::ALL, &cfg),
            compare_methods(&f, &Method::ALL, &cfg)
        );
    }
}

#[test]
fn invalid_settings() {
    let f = ScalarFunction::quadratic2();
    assert!(matches!(bisection(&f, 1.0, 2.0, 0.0, 10), Err(RootFindError::InvalidArgument(_))));
    assert!(matches!(newton(&f, 1.0, 1e-6, 0), Err(RootFindError::InvalidArgument(_))));
    assert!(matches!(bisection(&f, 1.5, 1.6, 1e-6, 10), Err(RootFindError::Bracket { .. })));
}
