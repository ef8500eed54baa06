use super::*;
use crate::hypersurface::{flow_drift, polydisc_points, levi_classify, sample_points, tangency_residual, LEVI_TOL};
use crate::moser::moser_report;
use crate::vfield::HoloVectorField;

fn find<'a>(cat: &'a [CatalogEntry], id: &str) -> &'a CatalogEntry {
    cat.iter().find(|e| e.id == id).unwrap_or_else(|| panic!("no entry {id}"))
}

fn params(kv: &[(&str, f64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn quick() -> VerifyConfig {
    VerifyConfig {
        points: 12,
        ..Default::default()
    }
}

#[test]
fn builtin_has_47_entries_by_section() {
    let cat = builtin_catalog();
    assert_eq!(cat.len(), 47);
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &cat {
        *count.entry(e.section.as_str()).or_default() += 1;
    }
    let want = [
        ("I.1", 12),
        ("I.2", 8),
        ("I.3", 5),
        ("I.4", 1),
        ("II.1", 6),
        ("II.2", 2),
        ("III.1", 5),
        ("III.2", 7),
        ("III.3", 1),
    ];
    assert_eq!(count, want.into_iter().collect());
    let quaternionic = cat.iter().filter(|e| e.section == "I.3" && e.id.ends_with('Q')).count();
    assert_eq!(quaternionic, 1);
    let full = full_catalog();
    let mut ids: Vec<&str> = full.iter().map(|e| e.id.as_str()).collect::<Vec<_>>();
    let n = ids.len();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), n, "duplicate ids");
}

#[test]
fn named_entries() {
    let cat = builtin_catalog();
    let g = find(&cat, "II.2.2");
    assert_eq!(g.equation, "(v - x2*y1)^2 + y1^2*y2^2 = y1");
    assert_eq!(g.algebra.as_deref(), Some("g5"));
    assert_eq!(g.frame.as_ref().map(Vec::len), Some(5));
    assert_eq!(g.expected_levi, ExpectedLevi::Indefinite);
    let h = find(&cat, "III.3");
    assert_eq!(h.equation, "v = 0");
    assert_eq!(h.expected_levi, ExpectedLevi::Degenerate);
    assert!(h.frame.is_none());
    let labels: Vec<(&str, &str)> = cat
        .iter()
        .filter(|e| e.section.starts_with("II."))
        .map(|e| (e.id.as_str(), e.algebra.as_deref().unwrap_or("")))
        .collect();
    assert_eq!(
        labels,
        [
            ("II.1.1", "g5_33"),
            ("II.1.2", "g5_35"),
            ("II.1.3", "g5_34"),
            ("II.1.4", "g5_30"),
            ("II.1.5", "g5_30"),
            ("II.1.6", "g5_32"),
            ("II.2.1", "g5_32"),
            ("II.2.2", "g5"),
        ]
    );
}

#[test]
fn every_entry_validates() {
    for e in full_catalog() {
        e.validate().unwrap();
        assert!(e.sample_count() <= 4, "{}", e.id);
    }
}

#[test]
fn ranges() {
    let p = params(&[("alpha", 0.5), ("beta", -1.0)]);
    assert_eq!(range_holds("alpha > 0", &p), Some(true));
    assert_eq!(range_holds("abs(alpha) <= abs(beta)", &p), Some(true));
    assert_eq!(range_holds("alpha + beta != -0.5", &p), Some(false));
    assert_eq!(range_holds("beta >= 0", &p), Some(false));
    assert_eq!(range_holds("alpha", &p), None);
    assert_eq!(range_holds("gamma < 1", &p), None);
    assert_eq!(range_holds("x1 < 1", &p), None);
    assert_eq!(range_holds("beta^2 = 1", &p), Some(true));
    assert_eq!(range_holds("alpha == 1", &p), Some(false));
}

#[test]
fn json_round_trip() {
    let cat = full_catalog();
    let text = to_json(&cat);
    assert_eq!(from_json(&text).unwrap(), cat);
    let path = std::env::temp_dir().join(format!("crhs-catalog-{}.json", std::process::id()));
    save(&cat, &path).unwrap();
    let back = load(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(back, cat);
    assert_eq!(to_json(&back), text);
}

fn doc_with(f: impl FnOnce(&mut serde_json::Map<String, Value>)) -> String {
    let mut v: Value = serde_json::from_str(&to_json(&builtin_catalog()[..3])).unwrap();
    f(v["entries"][0].as_object_mut().unwrap());
    v.to_string()
}

#[test]
fn schema_errors() {
    let err = from_json(&doc_with(|e| {
        e.remove("equation");
    }))
    .unwrap_err();
    match &err {
        CatalogError::Schema { path, message } => {
            assert_eq!(path, "$.entries[0].equation");
            assert!(message.contains("\"equation\""));
        }
        other => panic!("{other:?}"),
    }
    assert!(err.to_string().contains("equation"));

    let err = from_json(&doc_with(|e| {
        e.insert("algebra".into(), "g5_99".into());
    }))
    .unwrap_err();
    match &err {
        CatalogError::UnknownAlgebra { path, label, known } => {
            assert_eq!(path, "$.entries[0].algebra");
            assert_eq!(label, "g5_99");
            assert!(known.iter().any(|k| k == "g5_35"));
        }
        other => panic!("{other:?}"),
    }
    assert!(err.to_string().contains("g5_37"));

    assert!(matches!(from_json("{\"version\": 1"), Err(CatalogError::Json(_))));
    assert!(matches!(from_json("{\"version\": 2, \"entries\": []}"), Err(CatalogError::Schema { .. })));
    assert_eq!(from_json("{\"version\": 1, \"entries\": []}").unwrap(), vec![]);

    let err = from_json(&doc_with(|e| {
        e.insert("equation".into(), "u = ln(x1) + alpha*ln(x2) + 1".into());
    }))
    .unwrap_err();
    assert!(matches!(err, CatalogError::Invalid { .. }), "{err:?}");

    let err = from_json(&doc_with(|e| {
        e["parameters"]["alpha"]["samples"][0] = 3.0.into();
    }))
    .unwrap_err();
    assert!(err.to_string().contains("range"), "{err}");
}

#[test]
fn levi_census() {
    let cat = builtin_catalog();
    let mut mismatches = Vec::new();
    for e in &cat {
        for i in 0..e.sample_count() {
            let df = e.defining_function(&e.sample_params(i)).unwrap();
            let k = levi_classify(&df, &e.stored_base_point(i).unwrap(), LEVI_TOL).unwrap().kind;
            let section_ok = match e.section.as_str() {
                s if s.starts_with("III") => k == LeviKind::Degenerate,
                "II.2" | "I.4" => k == LeviKind::Indefinite,
                _ => k != LeviKind::Degenerate,
            };
            if !section_ok || !e.expected_levi.accepts(k) {
                mismatches.push((e.id.clone(), i, k));
            }
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:?}");
    let q = find(&companion_surfaces(), "quadric.definite").clone();
    let df = q.defining_function(&Params::new()).unwrap();
    assert_eq!(levi_classify(&df, &q.base_point.to_point(), LEVI_TOL).unwrap().kind, LeviKind::Definite);
}

#[test]
fn levi_class_is_scale_invariant_at_base_points() {
    for e in full_catalog() {
        let p = e.base_point.to_point();
        let df = e.defining_function(&e.sample_params(0)).unwrap();
        let k = levi_classify(&df, &p, LEVI_TOL).unwrap().kind;
        for c in [-3.0, -1.0, 0.5, 7.0] {
            let scaled = crate::hypersurface::DefiningFunction {
                phi: crate::expr::Expr::real(c) * df.phi.clone(),
                domain: df.domain.clone(),
            };
            assert_eq!(levi_classify(&scaled, &p, LEVI_TOL).unwrap().kind, k, "{} c = {c}", e.id);
        }
    }
}

#[test]
fn builtin_catalog_verifies() {
    let s = verify_all(&builtin_catalog(), &quick());
    assert_eq!(s.entries.len(), 47);
    assert!(s.pass(), "{}", s.table());
    assert_eq!(s.by_section.values().map(|c| c.entries).sum::<usize>(), 47);
}

#[test]
fn empty_summary() {
    let s = verify_all(&[], &VerifyConfig::default());
    assert!(s.entries.is_empty() && s.by_section.is_empty() && s.pass());
    assert!(s.table().ends_with("0/0 entries passed\n"));
}

#[test]
fn frame_entry_report() {
    let cat = builtin_catalog();
    let r = verify_entry(find(&cat, "II.2.2"), &VerifyConfig::default());
    assert!(r.pass, "{r:?}");
    let s = &r.samples[0];
    assert_eq!(s.levi.unwrap().kind, LeviKind::Indefinite);
    assert!(s.tangency.unwrap() <= 1e-8);
    assert!(s.realization.unwrap() <= 1e-9);
    assert_eq!(s.frame_rank, Some(5));

    let r = verify_entry(find(&cat, "III.1.1"), &VerifyConfig::default());
    assert!(r.pass);
    assert_eq!(r.samples[0].levi.unwrap().kind, LeviKind::Degenerate);
    assert_eq!(r.samples[0].tangency, None);
}

#[test]
fn perturbed_equation_fails_tangency() {
    let mut e = find(&companion_surfaces(), "g5_36.orbit").clone();
    for (name, x) in [("a", 0.0), ("b", 0.0), ("D", 1.0)] {
        e.parameters.get_mut(name).unwrap().samples = vec![x];
    }
    e.equation = "v = y1*y2 + 0.1".into();
    e.sample_base_points.clear();
    let p = e.base_point.to_point();
    e.base_point = BasePoint::from_point(&p.with_real(RealCoord::V, p.real(RealCoord::Y1) * p.real(RealCoord::Y2) + 0.1));
    e.validate().unwrap();
    let r = verify_entry(&e, &quick());
    assert!(!r.pass);
    assert!(r.samples[0].tangency.unwrap() > 1e-3);
    assert!(r.samples[0].failures.iter().any(|f| f.starts_with("tangency")), "{r:?}");

    // the unperturbed surface with the same constants passes
    e.equation = "v = y1*x2 + y1*y2".into();
    let v = p.real(RealCoord::Y1) * (p.real(RealCoord::X2) + p.real(RealCoord::Y2));
    e.base_point = BasePoint::from_point(&p.with_real(RealCoord::V, v));
    assert!(verify_entry(&e, &quick()).pass);
}

#[test]
fn reports_are_deterministic() {
    let cfg = VerifyConfig {
        seed: 7,
        points: 10,
        check_umbilic: true,
        ..Default::default()
    };
    let cat = full_catalog();
    let a = serde_json::to_string(&verify_all(&cat, &cfg)).unwrap();
    let b = serde_json::to_string(&verify_all(&cat, &cfg)).unwrap();
    assert_eq!(a, b);
    let other = serde_json::to_string(&verify_all(&cat, &VerifyConfig { seed: 8, ..cfg })).unwrap();
    assert_ne!(a, other);
}

#[test]
fn companion_catalog_with_flows_and_umbilicity() {
    let cfg = VerifyConfig {
        points: 20,
        check_umbilic: true,
        flow: Some(FlowConfig::default()),
        ..Default::default()
    };
    let s = verify_all(&companion_surfaces(), &cfg);
    assert!(s.pass(), "{}", s.table());
    for e in &s.entries {
        let want = find(&companion_surfaces(), &e.id).spherical;
        for smp in &e.samples {
            if let Some(w) = want {
                let got = if w { Umbilicity::Yes } else { Umbilicity::No };
                assert_eq!(smp.umbilicity, got, "{} sample {}", e.id, smp.index);
            }
        }
    }
}

#[test]
fn winkelmann_special_case_of_i4() {
    let mut e = find(&builtin_catalog(), "I.4").clone();
    e.parameters.get_mut("A_re").unwrap().samples = vec![2.0];
    e.parameters.get_mut("A_im").unwrap().samples = vec![0.0];
    e.sample_base_points.clear();
    // out of the family's range, so only the surface itself is checked
    assert!(e.validate().is_err());
    let df = e.defining_function(&e.sample_params(0)).unwrap();
    let p = crate::hypersurface::find_point(&df, &e.base_point.to_point(), RealCoord::V).unwrap();
    assert_eq!(levi_classify(&df, &p, LEVI_TOL).unwrap().kind, LeviKind::Indefinite);
    assert!(!moser_report(&df, &p).unwrap().umbilic);
    let w = find(&companion_surfaces(), "winkelmann").defining_function(&Params::new()).unwrap();
    assert!(w.value(&p).unwrap().abs() <= 1e-12);
}

#[test]
fn printed_sixth_field_is_not_tangent_to_its_orbit() {
    // the sixth field as written for the frame in the original coordinates,
    // applied to the orbit equation: the w-component has the wrong sign
    let comp = companion_surfaces();
    let e = find(&comp, "su2g2.orbit");
    let p = e.sample_params(0);
    let df = e.defining_function(&p).unwrap();
    let pts = sample_points(&df, &e.base_point.to_point(), 10, 0.3, 1, RealCoord::V).unwrap();
    let printed = HoloVectorField::parse(["2*i*z2", "2*z2*w", "z2^2 + w^2"], &Params::new()).unwrap();
    let pushed = HoloVectorField::parse(["2*i*z2", "2*z2*w", "w^2 - z2^2"], &Params::new()).unwrap();
    let worst = |f: &HoloVectorField| {
        pts.iter()
            .map(|q| tangency_residual(f, &df, q).unwrap())
            .fold(0.0_f64, f64::max)
    };
    assert!(worst(&printed) > 1e-2);
    assert!(worst(&pushed) <= 1e-10);
}

#[test]
fn normal_orbit_needs_rescaled_fourth_field() {
    let comp = companion_surfaces();
    let e = find(&comp, "g5_35.normal");
    let df = e.defining_function(&params(&[("m", 2.0), ("n", 0.0)])).unwrap();
    let base = e.base_point.to_point();
    let printed = HoloVectorField::parse(["z1", "1", "w"], &Params::new()).unwrap();
    let scaled = HoloVectorField::parse(["z1", "1/2", "w"], &Params::new()).unwrap();
    assert!(tangency_residual(&printed, &df, &base).unwrap() > 0.1);
    assert!(tangency_residual(&scaled, &df, &base).unwrap() <= 1e-12);
    assert!(flow_drift(&scaled, &df, &base, 0.5, 1e-3).unwrap() <= 1e-6);
    assert!(flow_drift(&printed, &df, &base, 0.5, 1e-3).unwrap() > 1e-2);
}

#[test]
fn sphericity_findings_hold_at_several_points() {
    // a homogeneous surface umbilic at one point is umbilic everywhere;
    // checking extra points guards against an accidental zero
    for (id, i) in [("I.1.7", 1), ("I.2.6", 1), ("I.2.7", 1)] {
        let e = find(&builtin_catalog(), id).clone();
        let df = e.defining_function(&e.sample_params(i)).unwrap();
        let base = e.stored_base_point(i).unwrap();
        for q in sample_points(&df, &base, 3, 0.3, 5, e.solve_coord().unwrap()).unwrap() {
            let rep = moser_report(&df, &q).unwrap();
            assert!(rep.umbilic, "{id}: {:?}", rep.n220);
        }
        // the neighbouring samples are not umbilic
        let j = if i == 0 { 1 } else { 0 };
        let df = e.defining_function(&e.sample_params(j)).unwrap();
        assert!(!moser_report(&df, &e.stored_base_point(j).unwrap()).unwrap().umbilic, "{id}");
    }
}

#[test]
fn extension_realizes_six_dimensional_algebra() {
    let comp = companion_surfaces();
    let e = find(&comp, "g5_35.orbit");
    for (alpha, lambda) in [(0.5, -1.0), (1.0, 2.0)] {
        let p = params(&[("alpha", alpha), ("lambda", lambda), ("eps", 1.0)]);
        let frame = e.extended_frame(&p).unwrap().unwrap();
        let sc = e.extension_algebra(&p).unwrap().unwrap();
        assert_eq!(sc.dim(), 6);
        assert_eq!(sc.get(0, 3, 0), 1.0 - lambda);
        let pts = polydisc_points(&e.base_point.to_point(), 20, 0.5, 3);
        let r = crate::vfield::verify_realization(&frame, &sc, &pts, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
