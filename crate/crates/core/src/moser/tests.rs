use super::*;
use crate::expr::{parse, Params};

fn df(s: &str) -> DefiningFunction {
    DefiningFunction::parse(s, &[], &Params::new()).unwrap()
}

fn pt(z1: (f64, f64), z2: (f64, f64), w: (f64, f64)) -> Point {
    Point::new(
        Complex64::new(z1.0, z1.1),
        Complex64::new(z2.0, z2.1),
        Complex64::new(w.0, w.1),
    )
}

fn poly(s: &str) -> Poly {
    Poly::from_expr(&parse(s).unwrap()).unwrap()
}

fn assert_poly_close(a: &Poly, b: &Poly, tol: f64) {
    let d = a.sub(b).max_abs();
    assert!(d <= tol, "{a}  vs  {b}  (diff {d:e})");
}

const ARG_SURFACE: &str = "v*x2 - y1*y2 - abs2(z2)*arg(z2)";

fn arg_surface() -> GraphJet {
    graph_jet(&df(ARG_SURFACE), &pt((0.0, 0.0), (1.0, 0.0), (0.0, 0.0))).unwrap()
}

#[test]
fn raw_jet_of_arg_surface() {
    let gj = arg_surface();
    assert!(gj.substitutions[1].contains("w -> z2 + w"), "{:?}", gj.substitutions);
    let r = gj.raw.to_real();
    // (x1, y1, x2, y2, u)
    let want: BTreeMap<[u8; 5], f64> = [
        ([0, 1, 0, 1, 0], 1.0),
        ([0, 1, 1, 1, 0], -1.0),
        ([0, 0, 0, 3, 0], 2.0 / 3.0),
        ([0, 1, 2, 1, 0], 1.0),
        ([0, 0, 1, 3, 0], -4.0 / 3.0),
    ]
    .into_iter()
    .collect();
    for (e, c) in r.terms() {
        let e: [u8; 5] = e.try_into().unwrap();
        let expect = want.get(&e).copied().unwrap_or(0.0);
        assert!((c - Complex64::new(expect, 0.0)).norm() <= 1e-12, "{e:?}: {c} vs {expect}");
    }
}

#[test]
fn arg_surface_f21_and_f2() {
    let gj = arg_surface();
    assert_eq!(gj.model, LeviModel::Indefinite);
    let f21 = bidegree(&gj.jet, 2, 1);
    assert_poly_close(&f21, &poly("-z2^2*zc1 - 2*i*z2^2*zc2"), 1e-12);
    let f2 = solve_f2(&f21, &gj.levi).unwrap();
    assert_poly_close(&f2[0], &poly("-2*i*z2^2"), 1e-12);
    assert_poly_close(&f2[1], &poly("-z2^2"), 1e-12);
    assert!(gj.levi.pair(&f2, &f2).max_abs() <= 1e-12);
}

#[test]
fn arg_surface_is_umbilic() {
    let gj = arg_surface();
    let f22 = bidegree(&gj.jet, 2, 2);
    assert_poly_close(&f22, &poly("z2^2*zc1*zc2 + z1*z2*zc2^2"), 1e-12);
    let rep = moser_report(&df(ARG_SURFACE), &gj.base_point).unwrap();
    assert!(rep.umbilic);
    assert!(rep.n220.max_abs() <= 1e-12, "{:?}", rep.n220);
    serde_json::to_string(&rep).unwrap();
}

#[test]
fn non_real_quartic_is_rejected() {
    let bad = poly("z2^2*zc1^2 + z1*z2*zc2^2");
    let levi = HermitianForm2::model(LeviModel::Indefinite);
    assert!(matches!(n220_project(&bad, &levi), Err(MoserError::NotReal(_))));
    let cubic = poly("z1^2*zc1");
    assert!(matches!(n220_project(&cubic, &levi), Err(MoserError::Bidegree { .. })));
}

#[test]
fn pure_trace_projects_to_zero() {
    let levi = HermitianForm2::model(LeviModel::Indefinite);
    let h = levi.quadratic().mul(&poly("z2*zc2"));
    let n = n220_project(&h, &levi).unwrap();
    assert!(n.max_abs() <= 1e-14);
}

#[test]
fn winkelmann_invariant() {
    let phi = "(w - wc)/(2*i) - (z1*zc2 + z2*zc1) - (z1*zc1)^2";
    let rep = moser_report(&df(phi), &Point::origin()).unwrap();
    let v = rep.n220.values();
    let want = [1.0, 0.0, 0.0, 0.0, 0.0];
    for k in 0..5 {
        assert!((v[k] - want[k]).abs() <= 1e-12, "{v:?}");
    }
    assert!(!rep.umbilic);
}

#[test]
fn normal_basis_is_harmonic_for_definite_model() {
    // Δ = Σ ∂²/∂z_j∂z̄_j
    for b in normal_basis(LeviModel::Definite) {
        let mut lap = Poly::zero();
        for (e, c) in b.terms() {
            for j in 0..2 {
                if e[j] > 0 && e[j + 2] > 0 {
                    let mut f = *e;
                    f[j] -= 1;
                    f[j + 2] -= 1;
                    lap.add_term(f, c * (e[j] as f64 * e[j + 2] as f64));
                }
            }
        }
        assert!(lap.max_abs() <= 1e-15, "{b}");
        assert_eq!(b.reality_defect(), 0.0);
    }
}

#[test]
fn model_quadric_passes_through() {
    let gj = graph_jet(&df("v - (z1*zc2 + z2*zc1)"), &Point::origin()).unwrap();
    let q = HermitianForm2::model(LeviModel::Indefinite);
    assert!(dist(&gj.levi.h, &q.h) <= 1e-13);
    for (e, c) in gj.jet.terms() {
        if weight(e) > 2 || e[4] > 0 {
            assert!(c.norm() <= 1e-13, "{e:?} {c}");
        }
    }
}

#[test]
fn sphere_off_origin_is_umbilic() {
    let rep = moser_report(&df("v - abs2(z1) - abs2(z2)"), &pt((1.0, 0.0), (0.0, 0.0), (0.0, 1.0))).unwrap();
    assert_eq!(rep.model, LeviModel::Definite);
    assert!(rep.umbilic, "{:?}", rep.n220);
}

#[test]
fn negative_definite_is_flipped() {
    let gj = graph_jet(&df("v + abs2(z1) + 3*abs2(z2)"), &Point::origin()).unwrap();
    assert_eq!(gj.model, LeviModel::Definite);
    assert!(gj.substitutions.iter().any(|s| s.starts_with("orientation")));
    assert!(dist(&gj.levi.h, &HermitianForm2::model(LeviModel::Definite).h) <= 1e-12);
}

#[test]
fn eigen_route_normalizes_diagonal_indefinite_form() {
    let gj = graph_jet(&df("v - 2*abs2(z1) + 0.5*abs2(z2) - abs2(z1)^2"), &Point::origin()).unwrap();
    assert_eq!(gj.model, LeviModel::Indefinite);
    assert!(dist(&gj.levi.h, &HermitianForm2::model(LeviModel::Indefinite).h) <= 1e-12);
    let rep = moser_report(&df("v - 2*abs2(z1) + 0.5*abs2(z2) - abs2(z1)^2"), &Point::origin()).unwrap();
    assert!(!rep.umbilic);
}

fn transformed(base: &str) -> String {
    // A biholomorphism near 0 fixing the origin, composed into Φ.
    let map = [
        "z1 + 0.3*z2^2 + 0.2*i*z1*w",
        "z2 + (0.1 - 0.4*i)*z1*w + 0.5*z1^2",
        "(1 + 0.5*i)*w + 0.4*z1*z2 + 0.25*z1^3",
    ];
    let e = parse(base).unwrap();
    let subs: BTreeMap<crate::expr::Var, crate::expr::Expr> = [
        crate::expr::Var::Z1,
        crate::expr::Var::Z2,
        crate::expr::Var::W,
    ]
    .into_iter()
    .zip(map.iter().map(|s| parse(s).unwrap()))
    .collect();
    crate::expr::compose(&e, &subs).to_string()
}

#[test]
fn transformed_quadrics_stay_umbilic() {
    for base in ["v - (z1*zc2 + z2*zc1)", "v - abs2(z1) - abs2(z2)"] {
        let phi = transformed(base);
        let rep = moser_report(&df(&phi), &Point::origin()).unwrap();
        assert!(rep.umbilic, "{base}: {:?}", rep.n220);
    }
}

#[test]
fn transformed_winkelmann_is_not_umbilic() {
    let phi = transformed("v - (z1*zc2 + z2*zc1) - abs2(z1)^2");
    let rep = moser_report(&df(&phi), &Point::origin()).unwrap();
    assert!(!rep.umbilic);
}

#[test]
fn weight_two_and_three_are_normalized() {
    let phi = transformed("v - (z1*zc2 + z2*zc1) - abs2(z1)^2 + y1^3");
    let gj = graph_jet(&df(&phi), &Point::origin()).unwrap();
    for (e, c) in gj.jet.terms() {
        let holo = e[2] + e[3] == 0 || e[0] + e[1] == 0;
        let w = weight(e);
        if (w == 2 || w == 3) && holo && !(e[4] == 1 && w == 2) {
            assert!(c.norm() <= 1e-12, "{e:?} {c}");
        }
        if e[4] == 1 && w == 3 {
            assert!(c.norm() <= 1e-12, "{e:?} {c}");
        }
    }
}

#[test]
fn solve_f2_round_trip() {
    let levi = HermitianForm2::new([
        [Complex64::new(2.0, 0.0), Complex64::new(0.5, 1.0)],
        [Complex64::new(0.5, -1.0), Complex64::new(-1.0, 0.0)],
    ]);
    let f = [poly("(1 + 2*i)*z1^2 - z1*z2"), poly("3*i*z2^2 + 0.5*z1*z2")];
    let z = [Poly::z(0), Poly::z(1)];
    let f21 = levi.pair(&f, &z);
    let g = solve_f2(&f21, &levi).unwrap();
    assert_poly_close(&g[0], &f[0], 1e-13);
    assert_poly_close(&g[1], &f[1], 1e-13);
}

#[test]
fn errors() {
    let o = Point::origin();
    assert!(matches!(graph_jet(&df("v - abs2(z1)"), &o), Err(MoserError::Degenerate(_))));
    assert!(matches!(graph_jet(&df("v - 1 - abs2(z1)"), &o), Err(MoserError::OffSurface(_))));
    assert!(matches!(graph_jet(&df("abs2(z1) + abs2(z2) + abs2(w)"), &o), Err(MoserError::VanishingGradient)));
}

#[test]
fn report_is_deterministic_json() {
    let p = pt((0.0, 0.0), (1.0, 0.0), (0.0, 0.0));
    let a = serde_json::to_string(&moser_report(&df(ARG_SURFACE), &p).unwrap()).unwrap();
    let b = serde_json::to_string(&moser_report(&df(ARG_SURFACE), &p).unwrap()).unwrap();
    assert_eq!(a, b);
}
