use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tropcount::geometry::{DegreeTriangle, LatticePath, LatticePoint};
use tropcount::io::{
    count_doc, parse_count, parse_curve, parse_document, parse_path, parse_polynomial, parse_subdivision, path_doc,
    polynomial_doc, subdivision_doc, Document, IoError,
};
use tropcount::path_count::{count, enumerate_paths, possible_subdivisions};
use tropcount::trop_poly::{corner_locus, TropicalPolynomial};

fn any_path() -> impl Strategy<Value = LatticePath> {
    (1u32..=6).prop_flat_map(|d| {
        let t = DegreeTriangle::new(d).unwrap();
        let inner: Vec<LatticePoint> =
            t.points().into_iter().filter(|&p| p != t.min_point() && p != t.max_point()).collect();
        prop::collection::vec(any::<bool>(), inner.len()).prop_map(move |keep| {
            let mut pts: Vec<LatticePoint> = inner.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
            pts.extend([t.min_point(), t.max_point()]);
            pts.sort();
            LatticePath::new(d, pts).unwrap()
        })
    })
}

fn any_polynomial() -> impl Strategy<Value = TropicalPolynomial> {
    prop::collection::btree_map((-5i64..6, -5i64..6), (-1000i64..1000, 1i64..50), 3..14).prop_map(|terms| {
        TropicalPolynomial::new(
            terms
                .into_iter()
                .map(|((i, j), (n, d))| (LatticePoint::new(i, j), BigRational::new(BigInt::from(n), BigInt::from(d)))),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn paths_round_trip(path in any_path()) {
        let text = path_doc(&path).to_json();
        prop_assert_eq!(parse_path(&text).unwrap(), path);
        prop_assert_eq!(parse_document(&text).unwrap().kind(), "path");
    }

    #[test]
    fn polynomials_and_curves_round_trip(p in any_polynomial()) {
        let text = polynomial_doc(&p).unwrap().to_json();
        prop_assert_eq!(parse_polynomial(&text).unwrap(), p.clone());
        if let Ok(curve) = corner_locus(&p) {
            let text = Document::Curve(curve.clone()).to_json();
            prop_assert_eq!(parse_curve(&text).unwrap(), curve);
        }
    }

    #[test]
    fn garbage_is_an_error_not_a_panic(text in ".{0,200}") {
        let _ = parse_document(&text);
        let _ = parse_path(&text);
        let _ = parse_subdivision(&text);
        let _ = parse_polynomial(&text);
        let _ = parse_curve(&text);
        let _ = parse_count(&text);
    }
}

#[test]
fn every_small_subdivision_round_trips() {
    for d in 1..=3u32 {
        for path in enumerate_paths(d).unwrap() {
            for (s, m) in possible_subdivisions(&path) {
                let text = subdivision_doc(&s, Some(&path), Some(&m)).to_json();
                assert_eq!(parse_subdivision(&text).unwrap(), s);
            }
        }
    }
}

#[test]
fn counts_round_trip() {
    for d in 1..=3 {
        let r = count(d).unwrap();
        let doc = parse_count(&count_doc(&r).to_json()).unwrap();
        assert_eq!(doc.quadratic, r.quadratic.to_string());
        assert_eq!(doc.paths.len(), r.per_path.len());
    }
}

#[test]
fn kinds_are_checked() {
    let path = enumerate_paths(2).unwrap().next().unwrap();
    let text = path_doc(&path).to_json();
    assert!(matches!(parse_polynomial(&text), Err(IoError::WrongKind { expected: "polynomial", found: "path" })));
    assert!(matches!(parse_document("{\"kind\":\"triangle\"}"), Err(IoError::Json(_))));
    let outside = r#"{"kind":"path","degree":1,"points":[[0,1],[1,1],[1,0]]}"#;
    assert!(matches!(parse_path(outside), Err(IoError::Geometry(_))));
    let bad_form = r#"{"kind":"subdivision","degree":1,"triangles":[[[0,0],[1,0],[0,1]]],"multiplicity":"⟨0⟩"}"#;
    assert!(matches!(parse_subdivision(bad_form), Err(IoError::Gw(_))));
}
