use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tropcount::geometry::{LatticeParallelogram, LatticePath, LatticePoint, LatticeTriangle};
use tropcount::path_count::{enumerate_paths, possible_subdivisions};
use tropcount::render::{render_curve, render_path, render_subdivision, RenderConfig, RenderError};
use tropcount::subdivision::DualSubdivision;
use tropcount::trop_poly::{corner_locus, TropicalCurve, TropicalPolynomial};

fn pt(i: i64, j: i64) -> LatticePoint {
    LatticePoint::new(i, j)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cubic_path() -> LatticePath {
    let pts = [(0, 3), (0, 2), (0, 1), (0, 0), (1, 2), (1, 1), (1, 0), (2, 0), (3, 0)];
    LatticePath::new(3, pts.iter().map(|&(i, j)| pt(i, j)).collect()).unwrap()
}

fn config(scale: BigRational, margin: BigRational) -> RenderConfig {
    RenderConfig::new(scale, margin, q(2, 1), true).unwrap()
}

/// `(x1, y1, x2, y2)` of every `<line>` of the given class.
fn lines(svg: &str, class: &str) -> Vec<[BigRational; 4]> {
    let parse = |s: &str| -> BigRational {
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let value = BigRational::new(digits.parse::<BigInt>().unwrap(), BigInt::from(10).pow(frac.len() as u32));
        if negative { -value } else { value }
    };
    let attr = |line: &str, name: &str| -> BigRational {
        let start = line.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
        let end = start + line[start..].find('"').unwrap();
        parse(&line[start..end])
    };
    svg.lines()
        .filter(|l| l.starts_with("<line") && l.contains(&format!("class=\"{class}\"")))
        .map(|l| [attr(l, "x1"), attr(l, "y1"), attr(l, "x2"), attr(l, "y2")])
        .collect()
}

#[test]
fn path_documents() {
    let unit = LatticePath::new(1, vec![pt(0, 1), pt(0, 0), pt(1, 0)]).unwrap();
    let cfg = RenderConfig::default();
    assert_eq!(lines(&render_path(&unit, &cfg), "path-segment").len(), 2);
    assert_eq!(lines(&render_path(&cubic_path(), &cfg), "path-segment").len(), 8);
    assert_eq!(render_path(&cubic_path(), &cfg), render_path(&cubic_path(), &cfg));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinates_are_affine_images(path_index in 0usize..286, sn in 1i64..200, sd in 1i64..9, mn in 0i64..100, md in 1i64..9) {
        let path = enumerate_paths(4).unwrap().nth(path_index).unwrap();
        let (scale, margin) = (q(sn, sd), q(mn, md));
        let svg = render_path(&path, &config(scale.clone(), margin.clone()));
        prop_assert_eq!(&svg, &render_path(&path, &config(scale.clone(), margin.clone())));
        let top = q(4, 1);
        let tolerance = q(1, 20_000);
        let segments = lines(&svg, "path-segment");
        prop_assert_eq!(segments.len(), path.steps());
        for (w, drawn) in path.points().windows(2).zip(&segments) {
            let want = [
                &margin + q(w[0].i, 1) * &scale,
                &margin + (&top - q(w[0].j, 1)) * &scale,
                &margin + q(w[1].i, 1) * &scale,
                &margin + (&top - q(w[1].j, 1)) * &scale,
            ];
            for (a, b) in want.iter().zip(drawn) {
                let gap = if a > b { a - b } else { b - a };
                prop_assert!(gap <= tolerance);
                if sd == 1 && md == 1 {
                    prop_assert_eq!(a, b);
                }
            }
        }
    }
}

#[test]
fn unit_triangulations_draw_every_cell() {
    for d in 1..=5u32 {
        let mut triangles = Vec::new();
        for i in 0..d as i64 {
            for j in 0..d as i64 - i {
                triangles.push(LatticeTriangle::new(pt(i, j), pt(i + 1, j), pt(i, j + 1)));
                if i + j + 2 <= d as i64 {
                    triangles.push(LatticeTriangle::new(pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)));
                }
            }
        }
        let s = DualSubdivision::new(d, triangles, Vec::<LatticeParallelogram>::new()).unwrap();
        let svg = render_subdivision(&s, &RenderConfig::default());
        assert_eq!(svg.matches("class=\"cell\"").count(), (d * d) as usize);
        assert!(!svg.contains("class=\"weight\""));
        assert_eq!(svg, render_subdivision(&s, &RenderConfig::default()));
    }
}

#[test]
fn cubic_path_subdivisions_draw_differently() {
    let subs = possible_subdivisions(&cubic_path());
    assert_eq!(subs.len(), 2);
    let docs: BTreeSet<String> = subs.iter().map(|(s, _)| render_subdivision(s, &RenderConfig::default())).collect();
    assert_eq!(docs.len(), 2);
}

#[test]
fn curve_documents() {
    let line = TropicalPolynomial::new([(pt(1, 0), q(0, 1)), (pt(0, 1), q(0, 1)), (pt(0, 0), q(-1, 1))]).unwrap();
    let curve = corner_locus(&line).unwrap();
    let svg = render_curve(&curve, &RenderConfig::default()).unwrap();
    let ends = lines(&svg, "end");
    assert_eq!(ends.len(), 3);
    let starts: BTreeSet<(BigRational, BigRational)> = ends.iter().map(|e| (e[0].clone(), e[1].clone())).collect();
    assert_eq!(starts.len(), 1, "all rays leave the single vertex");
    assert!(svg.contains("marker-end=\"url(#arrow)\""));
    assert_eq!(svg, render_curve(&curve, &RenderConfig::default()).unwrap());

    let empty = render_curve(&TropicalCurve::default(), &RenderConfig::default()).unwrap();
    assert!(empty.contains("width=\"40\" height=\"40\""));
    assert!(!empty.contains("<line"));

    let mut broken = curve.clone();
    broken.ends[0].weight = 2;
    assert!(matches!(render_curve(&broken, &RenderConfig::default()), Err(RenderError::Unbalanced(v)) if v == vec![0]));

    let doubled = TropicalPolynomial::new([(pt(2, 0), q(0, 1)), (pt(0, 2), q(0, 1)), (pt(0, 0), q(0, 1))]).unwrap();
    let svg = render_curve(&corner_locus(&doubled).unwrap(), &RenderConfig::default()).unwrap();
    assert_eq!(svg.matches("class=\"weight\"").count(), 3);
    let quiet = RenderConfig::new(q(40, 1), q(20, 1), q(2, 1), false).unwrap();
    assert!(!render_curve(&corner_locus(&doubled).unwrap(), &quiet).unwrap().contains("class=\"weight\""));
}

#[test]
fn config_is_validated() {
    assert!(matches!(RenderConfig::new(q(0, 1), q(1, 1), q(1, 1), true), Err(RenderError::Scale)));
    assert!(matches!(RenderConfig::new(q(1, 1), q(-1, 1), q(1, 1), true), Err(RenderError::Margin)));
    assert!(matches!(RenderConfig::new(q(1, 1), q(0, 1), q(0, 1), true), Err(RenderError::EndLength)));
}
