use super::*;
use crate::coeffs::Tables;
use crate::decomp::{r_function, Route};
use crate::numeric::{Abscissa, BoundKind, ValueWithBound};
use crate::products::{Constants, EulerProductSpec};
use std::f64::consts::PI;

const CATALAN: f64 = 0.915_965_594_177_219_015;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

struct Setup {
    tables: Tables<Complex64>,
    consts: Constants,
}

fn zeta() -> Setup {
    Setup {
        tables: Tables::build(&EulerProductSpec::zeta(), 25).unwrap(),
        consts: Constants {
            c: ValueWithBound::real(3.0 / (PI * PI), 1e-16, BoundKind::Rigorous),
            a1: ValueWithBound::real(0.0, 0.0, BoundKind::Rigorous),
        },
    }
}

fn chi4() -> Setup {
    Setup {
        tables: Tables::build(&EulerProductSpec::kronecker(-4).unwrap(), 25).unwrap(),
        consts: Constants {
            c: ValueWithBound::real(1.0 / (2.0 * CATALAN), 1e-15, BoundKind::Rigorous),
            a1: ValueWithBound::real(4.0 / PI, 1e-15, BoundKind::Rigorous),
        },
    }
}

#[test]
fn grid_shape() {
    let g = Grid::new(2.0, 0.1).unwrap();
    assert_eq!(g.len(), 20);
    assert!((g.points()[0] - 0.05).abs() < 1e-15);
    assert!((g.points()[19] - 1.95).abs() < 1e-12);
    for &t in Grid::new(20.0, 1e-3).unwrap().points() {
        assert!((t - t.round()).abs() >= 0.5e-3 - 1e-12);
    }
    assert!(Grid::new(2.0, 0.3).is_err());
    assert!(Grid::new(2.0, 0.5).is_err());
    assert!(Grid::new(-1.0, 0.01).is_err());
}

#[test]
fn improper_integral_of_smooth_functions() {
    let h = 1e-2;
    let grid = Grid::new(2.0, h).unwrap();
    let lin = grid.sample(|t| c(t));
    assert!((improper_integral(&lin, 2.0).unwrap() - c(2.0)).norm() < 1e-12);
    let sq = grid.sample(|t| c(t * t));
    for x in [0.3, 1.0, 1.77, 2.0] {
        let v = improper_integral(&sq, x).unwrap();
        assert!((v - c(x * x / 2.0)).norm() <= h * h, "x={x} {v}");
    }
    // O(h^2): the error at 2 drops fourfold with h
    let fine = Grid::new(2.0, h / 2.0).unwrap().sample(|t| c(t * t));
    let e1 = (improper_integral(&sq, 2.0).unwrap() - c(2.0)).norm();
    let e2 = (improper_integral(&fine, 2.0).unwrap() - c(2.0)).norm();
    assert!(e1 / e2 > 3.5, "{e1} {e2}");
    assert!(matches!(improper_integral(&lin, 2.5), Err(Error::XBeyondGrid { .. })));
    let constant = grid.sample(|_| c(1.0));
    assert!(matches!(improper_integral(&constant, 1.0), Err(Error::NotIntegrableNearZero)));
}

#[test]
fn family_member_integral_matches_exact_piecewise_integral() {
    let s = zeta();
    let f1 = F1Eval::new(&s.tables, &s.consts);
    let h = 1e-3;
    let member = SolutionFamily { f1: &f1, a: c(0.0) }.sample(&Grid::new(20.0, h).unwrap());
    for x in ["2.5", "7.25", "19.5"] {
        let xa = Abscissa::parse(x).unwrap();
        let exact = -r_function(&s.tables.float_view(), &xa, Route::Integral).unwrap().eval(&s.consts).value;
        let quad = improper_integral(&member, xa.to_f64()).unwrap();
        assert!((exact - quad).norm() < h, "x={x} {exact} {quad}");
    }
}

#[test]
fn fast_evaluators_match_decomp() {
    for s in [zeta(), chi4()] {
        let f1 = F1Eval::new(&s.tables, &s.consts);
        let e2 = E2Eval::new(&s.tables, &s.consts);
        for x in ["0", "0.5", "1", "2.5", "6", "13.75", "25"] {
            let xa = Abscissa::parse(x).unwrap();
            let view = s.tables.float_view();
            let f = crate::decomp::f1_closed(&view, &xa).unwrap().eval(&s.consts).value;
            let e = crate::decomp::e2(&view, &xa).unwrap().eval(&s.consts).value;
            assert!((f - f1.eval(xa.to_f64())).norm() < 1e-12, "f1 at {x}");
            assert!((e - e2.eval(xa.to_f64())).norm() < 1e-10, "e2 at {x}");
        }
        assert!(e2.try_eval(25.5).is_err());
        assert!(f1.try_eval(-1.0).is_err());
    }
}

#[test]
fn family_residuals_are_small_and_independent_of_a() {
    for s in [zeta(), chi4()] {
        let f1 = F1Eval::new(&s.tables, &s.consts);
        let e2 = E2Eval::new(&s.tables, &s.consts);
        let grid = Grid::new(20.0, 1e-3).unwrap();
        let r0 = residual(&SolutionFamily { f1: &f1, a: c(0.0) }.sample(&grid), |x| e2.eval(x)).unwrap();
        let r1 = residual(&SolutionFamily { f1: &f1, a: c(1.0) }.sample(&grid), |x| e2.eval(x)).unwrap();
        assert!(r0.sup <= 1e-5, "{}", r0.sup);
        let diff = r0.rows.iter().zip(&r1.rows).map(|(a, b)| (a.residual - b.residual).norm()).fold(0.0, f64::max);
        assert!(diff <= 2e-10, "{diff}");
        // a wrong candidate is detected: T(x^2) = x^2/2
        let wrong = grid.sample(|t| SolutionFamily { f1: &f1, a: c(0.0) }.member(t) + 0.01 * t * t);
        let rw = residual(&wrong, |x| e2.eval(x)).unwrap();
        for row in rw.rows.iter().step_by(997) {
            assert!((row.residual.re - 0.005 * row.x * row.x).abs() < 1e-5, "{row:?}");
        }
    }
}

#[test]
fn halving_h_shrinks_the_residual() {
    let s = zeta();
    let f1 = F1Eval::new(&s.tables, &s.consts);
    let e2 = E2Eval::new(&s.tables, &s.consts);
    let sup = |h: f64| {
        let g = SolutionFamily { f1: &f1, a: c(0.0) }.sample(&Grid::new(20.0, h).unwrap());
        residual(&g, |x| e2.eval(x)).unwrap().sup
    };
    let (coarse, fine) = (sup(1e-2), sup(5e-3));
    assert!(coarse / fine >= 1.8, "{coarse} {fine}");
}

#[test]
fn solver_recovers_family_members() {
    let s = zeta();
    let f1 = F1Eval::new(&s.tables, &s.consts);
    let e2 = E2Eval::new(&s.tables, &s.consts);
    let x0 = 1.5;
    let v = f1.eval(x0) * x0;
    let sol = solve_from_e2(|x| e2.eval(x), 20.0, 1e-3, (x0, v)).unwrap();
    let (a, _) = fit_family(&sol, &f1);
    assert!(a.norm() < 1e-5, "{a}");
    let err = sol
        .points()
        .iter()
        .zip(sol.values())
        .filter(|(t, _)| **t >= 0.5)
        .map(|(&t, v)| (v - f1.eval(t) * t).norm())
        .fold(0.0, f64::max);
    assert!(err <= 1e-4, "{err}");

    let shifted = solve_from_e2(|x| e2.eval(x), 20.0, 1e-3, (x0, v + 1.5)).unwrap();
    let (a1, _) = fit_family(&shifted, &f1);
    assert!((a1 - c(1.0)).norm() < 1e-5, "{a1}");

    // plugging back: int_0^x F_1/t = F_1 - E_2
    let cum = cumulative_integral(&sol).unwrap();
    for (i, &t) in sol.points().iter().enumerate().step_by(1001) {
        let h_val = sol.values()[i] - e2.eval(t);
        assert!((cum[i] - h_val).norm() < 1e-4, "t={t}");
    }
}

#[test]
fn solver_is_linear_in_data_and_anchor() {
    let s = chi4();
    let e2 = E2Eval::new(&s.tables, &s.consts);
    let a = solve_from_e2(|x| e2.eval(x), 10.0, 1e-2, (2.5, c(0.7))).unwrap();
    let b = solve_from_e2(|x| e2.eval(x) * 3.0, 10.0, 1e-2, (2.5, c(2.1))).unwrap();
    for (u, v) in a.values().iter().zip(b.values()) {
        assert!((u * 3.0 - v).norm() < 1e-12 * (1.0 + v.norm()));
    }
    assert!(matches!(solve_from_e2(|x| e2.eval(x), 10.0, 1e-2, (0.0, c(1.0))), Err(Error::AnchorOutOfRange(_))));
    assert!(matches!(solve_from_e2(|x| e2.eval(x), 10.0, 1e-2, (10.5, c(1.0))), Err(Error::AnchorOutOfRange(_))));
}

#[test]
fn homogeneous_solutions_are_lines() {
    let grid = Grid::new(10.0, 1e-2).unwrap();
    let p = homogeneous_probe(&grid.sample(|t| c(3.0 * t))).unwrap();
    assert!((p.a_fit - c(3.0)).norm() < 1e-12 && p.deviation < 1e-12);
    let zero = solve_from_e2(|_| c(0.0), 10.0, 1e-2, (1.0, c(2.0))).unwrap();
    let p = homogeneous_probe(&zero).unwrap();
    assert!((p.a_fit - c(2.0)).norm() < 1e-12 && p.deviation <= 1e-6);
    assert!(matches!(homogeneous_probe(&grid.sample(|t| c(t * t))), Err(Error::NotHomogeneous(_))));
}

#[test]
fn residual_csv_has_expected_columns() {
    let s = zeta();
    let f1 = F1Eval::new(&s.tables, &s.consts);
    let e2 = E2Eval::new(&s.tables, &s.consts);
    let g = SolutionFamily { f1: &f1, a: c(0.0) }.sample(&Grid::new(1.0, 0.1).unwrap());
    let r = residual(&g, |x| e2.eval(x)).unwrap();
    let mut out = Vec::new();
    r.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("x,F1,E2,residual\n5.0000000000000003e-2,"));
    assert_eq!(text.lines().count(), 11);
}
