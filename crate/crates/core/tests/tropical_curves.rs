use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tropcount::geometry::{DegreeTriangle, LatticePoint};
use tropcount::trop_poly::{
    boundary_normals, check_balancing, corner_locus, curve_of, end_directions, maximizers, regular_subdivision,
    BoundedEdge, End, RationalPoint, TropError, TropicalCurve, TropicalPolynomial,
};

fn pt(i: i64, j: i64) -> LatticePoint {
    LatticePoint::new(i, j)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn poly(terms: &[((i64, i64), BigRational)]) -> TropicalPolynomial {
    TropicalPolynomial::new(terms.iter().map(|((i, j), c)| (pt(*i, *j), c.clone()))).unwrap()
}

fn full_support(d: u32) -> Vec<LatticePoint> {
    DegreeTriangle::new(d).unwrap().points()
}

fn coefficient() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..7).prop_map(|(n, d)| q(n, d))
}

fn polynomial_on_triangle() -> impl Strategy<Value = TropicalPolynomial> {
    (1u32..=4).prop_flat_map(|d| {
        let support = full_support(d);
        prop::collection::vec(coefficient(), support.len())
            .prop_map(move |cs| TropicalPolynomial::new(support.iter().copied().zip(cs)).unwrap())
    })
}

/// Triples of exponents whose lifts span a face with every other lift
/// strictly below it. For lifts with no four points coplanar these are
/// exactly the cells of the regular subdivision.
fn upper_triangles(p: &TropicalPolynomial) -> Option<BTreeSet<BTreeSet<LatticePoint>>> {
    let pts: Vec<(LatticePoint, &BigRational)> = p.terms().iter().map(|(e, c)| (*e, c)).collect();
    let zero = q(0, 1);
    let mut out = BTreeSet::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for c in b + 1..pts.len() {
                let (pa, pb, pc) = (pts[a].0, pts[b].0, pts[c].0);
                let orient = (pb.i - pa.i) * (pc.j - pa.j) - (pb.j - pa.j) * (pc.i - pa.i);
                if orient == 0 {
                    continue;
                }
                let mut upper = true;
                for (r, (pr, hr)) in pts.iter().enumerate() {
                    if r == a || r == b || r == c {
                        continue;
                    }
                    // 3×3 determinant of the lifted differences, expanded along the height column
                    let h = |x: &BigRational| x - pts[a].1;
                    let m = |u: LatticePoint| (q(u.i - pa.i, 1), q(u.j - pa.j, 1));
                    let (bx, by) = m(pb);
                    let (cx, cy) = m(pc);
                    let (rx, ry) = m(*pr);
                    let det = &h(hr) * (&bx * &cy - &by * &cx) - &h(pts[c].1) * (&bx * &ry - &by * &rx)
                        + &h(pts[b].1) * (&cx * &ry - &cy * &rx);
                    let signed = if orient > 0 { det } else { -det };
                    if signed == zero {
                        return None;
                    }
                    if signed > zero {
                        upper = false;
                        break;
                    }
                }
                if upper {
                    out.insert([pa, pb, pc].into_iter().collect());
                }
            }
        }
    }
    Some(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn corner_loci_are_balanced(p in polynomial_on_triangle()) {
        let curve = corner_locus(&p).unwrap();
        let report = check_balancing(&curve);
        prop_assert!(report.is_balanced(), "{:?}", report.unbalanced_vertices());
        curve.validate().unwrap();
    }

    #[test]
    fn ends_are_dual_to_the_boundary(p in polynomial_on_triangle()) {
        let sub = regular_subdivision(&p).unwrap();
        let curve = curve_of(&sub);
        prop_assert_eq!(end_directions(&curve), boundary_normals(&sub.newton_polygon));
        let d = p.terms().keys().map(|e| e.i + e.j).max().unwrap() as u64;
        let expected = BTreeMap::from([((-1, 0), d), ((0, -1), d), ((1, 1), d)]);
        prop_assert_eq!(end_directions(&curve), expected);
    }

    #[test]
    fn vertices_sit_where_their_cells_tie(p in polynomial_on_triangle()) {
        let sub = regular_subdivision(&p).unwrap();
        let curve = curve_of(&sub);
        for (cell, v) in sub.cells.iter().zip(&curve.vertices) {
            let tied: BTreeSet<LatticePoint> = cell.points.iter().copied().collect();
            prop_assert_eq!(maximizers(&p, &v.x, &v.y), tied);
        }
        let area: u64 = sub.cells.iter().map(|c| c.normalized_area()).sum();
        let d = p.terms().keys().map(|e| e.i + e.j).max().unwrap() as u64;
        prop_assert_eq!(area, d * d);
    }

    #[test]
    fn generic_cells_match_brute_force_hull(p in polynomial_on_triangle()) {
        let Some(expected) = upper_triangles(&p) else { return Ok(()) };
        let sub = regular_subdivision(&p).unwrap();
        let got: BTreeSet<BTreeSet<LatticePoint>> =
            sub.cells.iter().map(|c| c.vertices.iter().copied().collect()).collect();
        prop_assert!(sub.cells.iter().all(|c| c.vertices.len() == 3));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn concave_lifts_of_the_conic_triangle_give_unit_triangles(noise in prop::collection::vec(0i64..10, 6)) {
        let terms: Vec<((i64, i64), BigRational)> = full_support(2)
            .into_iter()
            .zip(noise)
            .map(|(e, n)| ((e.i, e.j), q(-(e.i * e.i + e.i * e.j + e.j * e.j) * 100 + n, 100)))
            .collect();
        let p = poly(&terms);
        let sub = regular_subdivision(&p).unwrap();
        prop_assert_eq!(sub.cells.len(), 4);
        prop_assert!(sub.cells.iter().all(|c| c.normalized_area() == 1));
        if let Some(oracle) = upper_triangles(&p) {
            prop_assert_eq!(oracle.len(), 4);
        }
    }
}

#[test]
fn tropical_line() {
    let line = poly(&[((1, 0), q(0, 1)), ((0, 1), q(0, 1)), ((0, 0), q(-1, 1))]);
    let sub = regular_subdivision(&line).unwrap();
    assert_eq!(sub.cells.len(), 1);
    assert_eq!(sub.cells[0].normalized_area(), 1);
    let curve = corner_locus(&line).unwrap();
    assert_eq!(curve.vertices, vec![RationalPoint { x: q(-1, 1), y: q(-1, 1) }]);
    assert!(curve.bounded_edges.is_empty());
    let ends: BTreeSet<((i64, i64), u64)> = curve.ends.iter().map(|e| (e.direction, e.weight)).collect();
    assert_eq!(ends, BTreeSet::from([((-1, 0), 1), ((0, -1), 1), ((1, 1), 1)]));
    assert_eq!(check_balancing(&curve).residuals, vec![(BigInt::from(0), BigInt::from(0))]);
}

#[test]
fn shifted_line_vertex_found_by_sampling() {
    let p = poly(&[((1, 0), q(0, 1)), ((0, 1), q(0, 1)), ((0, 0), q(5, 1))]);
    let curve = corner_locus(&p).unwrap();
    assert_eq!(curve.vertices, vec![RationalPoint { x: q(5, 1), y: q(5, 1) }]);
    let mut triple = Vec::new();
    for x in 0..=40 {
        for y in 0..=40 {
            let (x, y) = (q(x, 4), q(y, 4));
            if maximizers(&p, &x, &y).len() == 3 {
                triple.push((x, y));
            }
        }
    }
    assert_eq!(triple, vec![(q(5, 1), q(5, 1))]);
}

#[test]
fn flat_lifts_give_one_cell() {
    let flat = poly(&full_support(2).into_iter().map(|e| ((e.i, e.j), q(0, 1))).collect::<Vec<_>>());
    let sub = regular_subdivision(&flat).unwrap();
    assert_eq!(sub.cells.len(), 1);
    assert_eq!(sub.cells[0].normalized_area(), 4);
    assert_eq!(sub.cells[0].points.len(), 6);

    let no_x_squared = poly(&[((0, 0), q(0, 1)), ((1, 0), q(0, 1)), ((0, 1), q(0, 1)), ((1, 1), q(0, 1)), ((0, 2), q(0, 1))]);
    let sub = regular_subdivision(&no_x_squared).unwrap();
    let curve = curve_of(&sub);
    assert_eq!(sub.cells.len(), 1);
    assert_eq!(curve.vertices.len(), 1);
    assert!(curve.bounded_edges.is_empty());
    assert_eq!(end_directions(&curve), boundary_normals(&sub.newton_polygon));
    assert!(check_balancing(&curve).is_balanced());
}

#[test]
fn weight_two_vertex_balances() {
    let origin = RationalPoint { x: q(0, 1), y: q(0, 1) };
    let curve = TropicalCurve {
        vertices: vec![origin],
        bounded_edges: vec![],
        ends: vec![
            End { vertex: 0, direction: (-2, 1), weight: 1 },
            End { vertex: 0, direction: (0, -1), weight: 1 },
            End { vertex: 0, direction: (1, 0), weight: 2 },
        ],
    };
    assert!(check_balancing(&curve).is_balanced());
}

#[test]
fn corrupted_weight_is_caught_at_one_vertex() {
    let p = poly(
        &full_support(2)
            .into_iter()
            .map(|e| ((e.i, e.j), q(-(e.i * e.i + e.i * e.j + e.j * e.j), 1)))
            .collect::<Vec<_>>(),
    );
    let mut curve = corner_locus(&p).unwrap();
    assert!(check_balancing(&curve).is_balanced());
    let victim = curve.ends[0].vertex;
    curve.ends[0].weight += 1;
    assert_eq!(check_balancing(&curve).unbalanced_vertices(), vec![victim]);

    let mut edge_broken = corner_locus(&p).unwrap();
    let BoundedEdge { from, to, .. } = edge_broken.bounded_edges[0].clone();
    edge_broken.bounded_edges[0].weight = 3;
    let bad = check_balancing(&edge_broken).unbalanced_vertices();
    assert_eq!(bad, { let mut v = vec![from, to]; v.sort(); v });
}

#[test]
fn degenerate_supports_are_rejected() {
    let collinear = poly(&[((0, 0), q(0, 1)), ((1, 1), q(0, 1)), ((2, 2), q(1, 1))]);
    assert_eq!(regular_subdivision(&collinear).unwrap_err(), TropError::DegenerateSupport);
    let two = poly(&[((0, 0), q(0, 1)), ((1, 0), q(0, 1))]);
    assert_eq!(corner_locus(&two).unwrap_err(), TropError::DegenerateSupport);
    assert!(matches!(
        TropicalPolynomial::new([(pt(0, 0), q(0, 1)), (pt(0, 0), q(1, 1))]),
        Err(TropError::DuplicateExponent(_))
    ));
}

#[test]
fn valuations_are_negated() {
    let p = TropicalPolynomial::from_valuations([(pt(1, 0), q(0, 1)), (pt(0, 1), q(0, 1)), (pt(0, 0), q(1, 1))]).unwrap();
    assert_eq!(corner_locus(&p).unwrap().vertices, vec![RationalPoint { x: q(-1, 1), y: q(-1, 1) }]);
}
