//! Tropicalization in the max-convention: regular subdivisions of Newton
//! polygons and the corner locus of a tropical polynomial.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cross, edge_lattice_length, LatticePoint};

/// Largest accepted number of monomials; the hull search is cubic in it.
pub const MAX_TERMS: usize = 64;
/// Bound on `|i|`, `|j|` of exponents.
pub const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropError {
    #[error("support has no three affinely independent exponents")]
    DegenerateSupport,
    #[error("{0} terms exceed the limit of {MAX_TERMS}")]
    TooManyTerms(usize),
    #[error("exponent {0} out of range")]
    ExponentRange(LatticePoint),
    #[error("duplicate exponent {0}")]
    DuplicateExponent(LatticePoint),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
}

/// `max_{(i,j)} (c_ij + i·x + j·y)` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    terms: BTreeMap<LatticePoint, BigRational>,
}

impl TropicalPolynomial {
    pub fn new(terms: impl IntoIterator<Item = (LatticePoint, BigRational)>) -> Result<Self, TropError> {
        let mut map = BTreeMap::new();
        for (p, c) in terms {
            if p.i.abs() > MAX_EXPONENT || p.j.abs() > MAX_EXPONENT {
                return Err(TropError::ExponentRange(p));
            }
            if map.insert(p, c).is_some() {
                return Err(TropError::DuplicateExponent(p));
            }
            if map.len() > MAX_TERMS {
                return Err(TropError::TooManyTerms(map.len()));
            }
        }
        Ok(TropicalPolynomial { terms: map })
    }

    /// From leading exponents of Puiseux coefficients: the tropical
    /// coefficient is minus the valuation.
    pub fn from_valuations(
        vals: impl IntoIterator<Item = (LatticePoint, BigRational)>,
    ) -> Result<Self, TropError> {
        Self::new(vals.into_iter().map(|(p, v)| (p, -v)))
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, BigRational> {
        &self.terms
    }

    /// Value at a point of ℚ².
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> Option<BigRational> {
        self.terms.iter().map(|(p, c)| monomial(p, c, x, y)).max()
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn monomial(p: &LatticePoint, c: &BigRational, x: &BigRational, y: &BigRational) -> BigRational {
    c + rat(p.i) * x + rat(p.j) * y
}

/// A 2-cell of the regular subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Polygon vertices, counterclockwise, without collinear points.
    pub vertices: Vec<LatticePoint>,
    /// Every exponent lifted onto the cell's face, vertices included.
    pub points: Vec<LatticePoint>,
    /// The face is `c = offset + slope.0·i + slope.1·j`.
    pub slope: (BigRational, BigRational),
    pub offset: BigRational,
}

impl Cell {
    pub fn normalized_area(&self) -> u64 {
        polygon_area(&self.vertices)
    }
}

fn polygon_area(vs: &[LatticePoint]) -> u64 {
    let twice: i64 = vs.iter().zip(vs.iter().cycle().skip(1)).map(|(p, q)| p.i * q.j - p.j * q.i).sum();
    twice.unsigned_abs()
}

/// Counterclockwise convex hull without collinear points.
fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| (p.i, p.j)).collect();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().map(|(i, j)| LatticePoint::new(i, j)).collect();
    }
    let turn = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| cross((a.0 - o.0, a.1 - o.1), (b.0 - o.0, b.1 - o.1));
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull.into_iter().map(|(i, j)| LatticePoint::new(i, j)).collect()
}

/// Regular subdivision induced by lifting each exponent to its coefficient:
/// the projections of the upper faces of the lifted hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubdivision {
    pub cells: Vec<Cell>,
    /// Newton polygon, counterclockwise.
    pub newton_polygon: Vec<LatticePoint>,
}

impl RegularSubdivision {
    /// Cell edges with the cells containing them (one for boundary edges).
    pub fn edges(&self) -> BTreeMap<(LatticePoint, LatticePoint), Vec<usize>> {
        let mut out: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (k, cell) in self.cells.iter().enumerate() {
            let vs = &cell.vertices;
            for (p, q) in vs.iter().zip(vs.iter().cycle().skip(1)) {
                let key = if p < q { (*p, *q) } else { (*q, *p) };
                out.entry(key).or_default().push(k);
            }
        }
        out
    }
}

pub fn regular_subdivision(poly: &TropicalPolynomial) -> Result<RegularSubdivision, TropError> {
    let pts: Vec<LatticePoint> = poly.terms.keys().copied().collect();
    let coef: Vec<&BigRational> = poly.terms.values().collect();
    let n = pts.len();
    let mut cells: Vec<Cell> = Vec::new();
    let mut covered: Vec<u64> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let tri = (1u64 << a) | (1 << b) | (1 << c);
                if covered.iter().any(|m| m & tri == tri) {
                    continue;
                }
                let Some((slope, offset)) = plane(&pts, &coef, a, b, c) else { continue };
                let height = |k: usize| &offset + &slope.0 * rat(pts[k].i) + &slope.1 * rat(pts[k].j);
                let mut on = 0u64;
                let mut upper = true;
                for k in 0..n {
                    let h = height(k);
                    if *coef[k] > h {
                        upper = false;
                        break;
                    }
                    if *coef[k] == h {
                        on |= 1 << k;
                    }
                }
                if !upper {
                    continue;
                }
                let members: Vec<LatticePoint> = (0..n).filter(|k| on >> k & 1 == 1).map(|k| pts[k]).collect();
                covered.push(on);
                cells.push(Cell { vertices: convex_hull(&members), points: members, slope, offset });
            }
        }
    }
    if cells.is_empty() {
        return Err(TropError::DegenerateSupport);
    }
    cells.sort_by(|x, y| x.vertices.cmp(&y.vertices));
    Ok(RegularSubdivision { cells, newton_polygon: convex_hull(&pts) })
}

/// Plane through three lifted points, if they are affinely independent.
fn plane(
    pts: &[LatticePoint],
    coef: &[&BigRational],
    a: usize,
    b: usize,
    c: usize,
) -> Option<((BigRational, BigRational), BigRational)> {
    let (u, v) = (pts[b].sub(pts[a]), pts[c].sub(pts[a]));
    let det = cross(u, v);
    if det == 0 {
        return None;
    }
    let (dc1, dc2) = (coef[b] - coef[a], coef[c] - coef[a]);
    let det = rat(det);
    let beta = (&dc1 * rat(v.1) - &dc2 * rat(u.1)) / &det;
    let gamma = (&dc2 * rat(u.0) - &dc1 * rat(v.0)) / &det;
    let alpha = coef[a] - &beta * rat(pts[a].i) - &gamma * rat(pts[a].j);
    Some(((beta, gamma), alpha))
}

mod rational_text {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        let (n, den) = match text.split_once('/') {
            Some((n, den)) => (n, den),
            None => (text.as_str(), "1"),
        };
        let n = n.trim().parse().map_err(D::Error::custom)?;
        let den: num_bigint::BigInt = den.trim().parse().map_err(D::Error::custom)?;
        if den == num_bigint::BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, den))
    }
}

/// A point of ℚ²; serialized with each coordinate as `"p/q"` text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RationalPoint {
    #[serde(with = "rational_text")]
    pub x: BigRational,
    #[serde(with = "rational_text")]
    pub y: BigRational,
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedEdge {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct End {
    pub vertex: usize,
    pub direction: (i64, i64),
    pub weight: u64,
}

/// An embedded plane tropical curve.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCurve {
    pub vertices: Vec<RationalPoint>,
    pub bounded_edges: Vec<BoundedEdge>,
    pub ends: Vec<End>,
}

impl TropicalCurve {
    /// Index bounds, positive weights and nonzero end directions.
    pub fn validate(&self) -> Result<(), TropError> {
        let n = self.vertices.len();
        for e in &self.bounded_edges {
            if e.from >= n || e.to >= n {
                return Err(TropError::InvalidCurve(format!("edge {}–{} has no such vertex", e.from, e.to)));
            }
            if e.weight == 0 {
                return Err(TropError::InvalidCurve("edge of weight 0".into()));
            }
            if self.vertices[e.from] == self.vertices[e.to] {
                return Err(TropError::InvalidCurve(format!("edge {}–{} has length 0", e.from, e.to)));
            }
        }
        for e in &self.ends {
            if e.vertex >= n {
                return Err(TropError::InvalidCurve(format!("end at missing vertex {}", e.vertex)));
            }
            if e.weight == 0 || e.direction == (0, 0) {
                return Err(TropError::InvalidCurve("end of weight 0 or without direction".into()));
            }
        }
        Ok(())
    }
}

/// The corner locus: where the maximum is attained at least twice.
pub fn corner_locus(poly: &TropicalPolynomial) -> Result<TropicalCurve, TropError> {
    let sub = regular_subdivision(poly)?;
    Ok(curve_of(&sub))
}

/// The tropical curve dual to a regular subdivision.
pub fn curve_of(sub: &RegularSubdivision) -> TropicalCurve {
    let vertices: Vec<RationalPoint> =
        sub.cells.iter().map(|c| RationalPoint { x: -c.slope.0.clone(), y: -c.slope.1.clone() }).collect();
    let mut curve = TropicalCurve { vertices, ..Default::default() };
    for ((p, q), owners) in sub.edges() {
        let weight = edge_lattice_length(p, q).expect("cell edges have distinct ends");
        match owners[..] {
            [a, b] => curve.bounded_edges.push(BoundedEdge { from: a, to: b, weight }),
            [a] => {
                // outward normal of a counterclockwise edge p → q is (dy, −dx)
                let vs = &sub.cells[a].vertices;
                let k = vs.iter().position(|v| *v == p).expect("edge endpoint is a vertex");
                let (from, to) = if vs[(k + 1) % vs.len()] == q { (p, q) } else { (q, p) };
                let (dx, dy) = to.sub(from);
                let g = dx.gcd(&dy);
                curve.ends.push(End { vertex: a, direction: (dy / g, -dx / g), weight });
            }
            _ => unreachable!("an edge of a regular subdivision lies in one or two cells"),
        }
    }
    curve
}

/// Primitive integer direction of a nonzero rational vector.
fn primitive(dx: &BigRational, dy: &BigRational) -> (BigInt, BigInt) {
    let l = dx.denom().lcm(dy.denom());
    let (x, y) = ((dx * BigRational::from_integer(l.clone())).to_integer(), (dy * BigRational::from_integer(l)).to_integer());
    let g = x.gcd(&y);
    if g.is_zero() {
        return (x, y);
    }
    (x / &g, y / &g)
}

/// Per-vertex sums of weighted outgoing primitive directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancingReport {
    pub residuals: Vec<(BigInt, BigInt)>,
}

impl BalancingReport {
    pub fn is_balanced(&self) -> bool {
        self.residuals.iter().all(|(x, y)| x.is_zero() && y.is_zero())
    }

    pub fn unbalanced_vertices(&self) -> Vec<usize> {
        self.residuals
            .iter()
            .enumerate()
            .filter(|(_, (x, y))| !(x.is_zero() && y.is_zero()))
            .map(|(k, _)| k)
            .collect()
    }
}

/// `Σ weight · direction` at every vertex. Indices are assumed in range
/// (see [`TropicalCurve::validate`]).
pub fn check_balancing(curve: &TropicalCurve) -> BalancingReport {
    let mut residuals = vec![(BigInt::zero(), BigInt::zero()); curve.vertices.len()];
    for e in &curve.bounded_edges {
        let (a, b) = (&curve.vertices[e.from], &curve.vertices[e.to]);
        let (dx, dy) = primitive(&(&b.x - &a.x), &(&b.y - &a.y));
        let w = BigInt::from(e.weight);
        residuals[e.from].0 += &dx * &w;
        residuals[e.from].1 += &dy * &w;
        residuals[e.to].0 -= &dx * &w;
        residuals[e.to].1 -= &dy * &w;
    }
    for e in &curve.ends {
        let w = BigInt::from(e.weight);
        residuals[e.vertex].0 += BigInt::from(e.direction.0) * &w;
        residuals[e.vertex].1 += BigInt::from(e.direction.1) * &w;
    }
    BalancingReport { residuals }
}

/// End directions with multiplicity (weight), sorted.
pub fn end_directions(curve: &TropicalCurve) -> BTreeMap<(i64, i64), u64> {
    let mut out = BTreeMap::new();
    for e in &curve.ends {
        *out.entry(e.direction).or_insert(0) += e.weight;
    }
    out
}

/// Outward primitive normals of a counterclockwise lattice polygon, with
/// lattice-length multiplicity.
pub fn boundary_normals(polygon: &[LatticePoint]) -> BTreeMap<(i64, i64), u64> {
    let mut out = BTreeMap::new();
    for (p, q) in polygon.iter().zip(polygon.iter().cycle().skip(1)) {
        let (dx, dy) = q.sub(*p);
        let g = dx.gcd(&dy);
        *out.entry((dy / g, -dx / g)).or_insert(0) += g.unsigned_abs();
    }
    out
}

/// Exponents attaining the maximum at a point.
pub fn maximizers(poly: &TropicalPolynomial, x: &BigRational, y: &BigRational) -> BTreeSet<LatticePoint> {
    let Some(best) = poly.evaluate(x, y) else { return BTreeSet::new() };
    poly.terms.iter().filter(|(p, c)| monomial(p, c, x, y) == best).map(|(p, _)| *p).collect()
}
