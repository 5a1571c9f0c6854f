//! Lattice geometry of the degree triangle `Δ_d = conv{(0,0), (d,0), (0,d)}`.
//!
//! Lattice points are ordered by `λ(x, y) = x − εy` for a tiny irrational
//! `ε`, which on integer points is the exact rule "`i < i'`, or `i = i'` and
//! `j > j'`". `ε` itself never appears.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("degree {0} exceeds the supported maximum of {max}", max = DegreeTriangle::MAX_DEGREE)]
    DegreeTooLarge(u32),
    #[error("path must have at least two points")]
    PathTooShort,
    #[error("path starts at {0}, expected (0,{1})")]
    BadStart(LatticePoint, u32),
    #[error("path ends at {0}, expected ({1},0)")]
    BadEnd(LatticePoint, u32),
    #[error("point {0} lies outside the degree-{1} triangle")]
    OutsideTriangle(LatticePoint, u32),
    #[error("path is not λ-increasing at step {0}")]
    NotIncreasing(usize),
    #[error("turn index {index} out of range for a path with {steps} steps")]
    TurnIndex { index: usize, steps: usize },
    #[error("edge endpoints coincide")]
    ZeroEdge,
    #[error("degenerate triangle {0}")]
    DegenerateTriangle(LatticeTriangle),
}

/// A point of ℤ². `Ord` is the λ-order, not the lexicographic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub i: i64,
    pub j: i64,
}

impl LatticePoint {
    pub const fn new(i: i64, j: i64) -> Self {
        LatticePoint { i, j }
    }

    pub fn sub(self, other: LatticePoint) -> (i64, i64) {
        (self.i - other.i, self.j - other.j)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([i, j]: [i64; 2]) -> Self {
        LatticePoint { i, j }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.i, p.j]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.i.cmp(&other.i).then(other.j.cmp(&self.j))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `p < q` in the λ-order.
pub fn lambda_less(p: LatticePoint, q: LatticePoint) -> bool {
    p < q
}

pub(crate) fn cross(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

/// The triangle `Δ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeTriangle {
    d: u32,
}

impl DegreeTriangle {
    /// Lattice points are indexed into a `u128` bitmask by the path counter.
    pub const MAX_DEGREE: u32 = 14;

    pub fn new(d: u32) -> Result<Self, GeometryError> {
        match d {
            0 => Err(GeometryError::ZeroDegree),
            d if d > Self::MAX_DEGREE => Err(GeometryError::DegreeTooLarge(d)),
            d => Ok(DegreeTriangle { d }),
        }
    }

    pub fn degree(self) -> u32 {
        self.d
    }

    pub fn num_points(self) -> usize {
        let d = self.d as usize;
        (d + 1) * (d + 2) / 2
    }

    pub fn contains(self, p: LatticePoint) -> bool {
        p.i >= 0 && p.j >= 0 && p.j <= self.d as i64 - p.i
    }

    /// Position of `p` in the λ-order of the lattice points of `Δ_d`.
    pub fn index_of(self, p: LatticePoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let (d, i, j) = (self.d as i64, p.i, p.j);
        Some((i * (d + 1) - i * (i - 1) / 2 + (d - i - j)) as usize)
    }

    /// All lattice points in increasing λ-order.
    pub fn points(self) -> Vec<LatticePoint> {
        let d = self.d as i64;
        (0..=d).flat_map(|i| (0..=d - i).rev().map(move |j| LatticePoint::new(i, j))).collect()
    }

    pub fn min_point(self) -> LatticePoint {
        LatticePoint::new(0, self.d as i64)
    }

    pub fn max_point(self) -> LatticePoint {
        LatticePoint::new(self.d as i64, 0)
    }

    /// Corners in counterclockwise order.
    pub fn corners(self) -> [LatticePoint; 3] {
        let d = self.d as i64;
        [LatticePoint::new(0, 0), LatticePoint::new(d, 0), LatticePoint::new(0, d)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Left,
    Right,
    Straight,
}

/// A λ-increasing lattice path in `Δ_d` from `(0,d)` to `(d,0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    triangle: DegreeTriangle,
    points: Vec<LatticePoint>,
}

impl LatticePath {
    pub fn new(degree: u32, points: Vec<LatticePoint>) -> Result<Self, GeometryError> {
        let triangle = DegreeTriangle::new(degree)?;
        if points.len() < 2 {
            return Err(GeometryError::PathTooShort);
        }
        if points[0] != triangle.min_point() {
            return Err(GeometryError::BadStart(points[0], degree));
        }
        let last = *points.last().unwrap();
        if last != triangle.max_point() {
            return Err(GeometryError::BadEnd(last, degree));
        }
        if let Some(p) = points.iter().find(|p| !triangle.contains(**p)) {
            return Err(GeometryError::OutsideTriangle(*p, degree));
        }
        if let Some(k) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(GeometryError::NotIncreasing(k + 1));
        }
        Ok(LatticePath { triangle, points })
    }

    /// Builds a path known to be valid.
    pub(crate) fn from_trusted(triangle: DegreeTriangle, points: Vec<LatticePoint>) -> Self {
        debug_assert!(LatticePath::new(triangle.degree(), points.clone()).is_ok());
        LatticePath { triangle, points }
    }

    pub fn degree(&self) -> u32 {
        self.triangle.degree()
    }

    pub fn triangle(&self) -> DegreeTriangle {
        self.triangle
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Number of steps `n` (the path is `γ: [0, n] → Δ_d`).
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    /// Direction of the turn at `γ(k)`, `1 ≤ k ≤ n − 1`.
    pub fn turn_at(&self, k: usize) -> Result<Turn, GeometryError> {
        if k == 0 || k >= self.steps() {
            return Err(GeometryError::TurnIndex { index: k, steps: self.steps() });
        }
        Ok(turn(self.points[k - 1], self.points[k], self.points[k + 1]))
    }
}

/// Left iff `det(b − a, c − b) > 0`.
pub fn turn(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Turn {
    match cross(b.sub(a), c.sub(b)).cmp(&0) {
        Ordering::Greater => Turn::Left,
        Ordering::Less => Turn::Right,
        Ordering::Equal => Turn::Straight,
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.points.iter().enumerate() {
            if k > 0 {
                f.write_str("-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// `(δ₊, δ₋)`: unit steps along the hypotenuse, and along the two legs
/// through `(0,0)`.
pub fn boundary_paths(d: u32) -> Result<(LatticePath, LatticePath), GeometryError> {
    let t = DegreeTriangle::new(d)?;
    let d = d as i64;
    let plus = (0..=d).map(|i| LatticePoint::new(i, d - i)).collect();
    let minus = (0..=d)
        .rev()
        .map(|j| LatticePoint::new(0, j))
        .chain((1..=d).map(|i| LatticePoint::new(i, 0)))
        .collect();
    Ok((LatticePath::from_trusted(t, plus), LatticePath::from_trusted(t, minus)))
}

/// `gcd(|Δi|, |Δj|)`.
pub fn edge_lattice_length(p: LatticePoint, q: LatticePoint) -> Result<u64, GeometryError> {
    if p == q {
        return Err(GeometryError::ZeroEdge);
    }
    let (di, dj) = q.sub(p);
    Ok(di.unsigned_abs().gcd(&dj.unsigned_abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[LatticePoint; 3]", into = "[LatticePoint; 3]")]
pub struct LatticeTriangle {
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub c: LatticePoint,
}

impl From<[LatticePoint; 3]> for LatticeTriangle {
    fn from([a, b, c]: [LatticePoint; 3]) -> Self {
        LatticeTriangle { a, b, c }
    }
}

impl From<LatticeTriangle> for [LatticePoint; 3] {
    fn from(t: LatticeTriangle) -> Self {
        t.vertices()
    }
}

impl fmt::Display for LatticeTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl LatticeTriangle {
    pub fn new(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Self {
        LatticeTriangle { a, b, c }
    }

    pub fn vertices(&self) -> [LatticePoint; 3] {
        [self.a, self.b, self.c]
    }

    /// `|det(b − a, c − a)|`, twice the Euclidean area.
    pub fn normalized_area(&self) -> u64 {
        cross(self.b.sub(self.a), self.c.sub(self.a)).unsigned_abs()
    }

    pub fn is_degenerate(&self) -> bool {
        self.normalized_area() == 0
    }

    /// Lattice lengths of the sides `ab`, `bc`, `ca`.
    pub fn side_lengths(&self) -> Result<[u64; 3], GeometryError> {
        Ok([
            edge_lattice_length(self.a, self.b)?,
            edge_lattice_length(self.b, self.c)?,
            edge_lattice_length(self.c, self.a)?,
        ])
    }

    /// Lattice points strictly inside, counted by scanning the bounding box.
    pub fn interior_points(&self) -> Result<u64, GeometryError> {
        if self.is_degenerate() {
            return Err(GeometryError::DegenerateTriangle(*self));
        }
        let vs = self.vertices();
        let (lo_i, hi_i) = (vs.iter().map(|p| p.i).min().unwrap(), vs.iter().map(|p| p.i).max().unwrap());
        let (lo_j, hi_j) = (vs.iter().map(|p| p.j).min().unwrap(), vs.iter().map(|p| p.j).max().unwrap());
        let orient = cross(self.b.sub(self.a), self.c.sub(self.a)).signum();
        let mut count = 0;
        for i in lo_i..=hi_i {
            for j in lo_j..=hi_j {
                let p = LatticePoint::new(i, j);
                let strictly_inside = [(self.a, self.b), (self.b, self.c), (self.c, self.a)]
                    .iter()
                    .all(|&(u, v)| cross(v.sub(u), p.sub(u)).signum() == orient);
                if strictly_inside {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    pub fn contained_in(&self, t: DegreeTriangle) -> bool {
        self.vertices().iter().all(|p| t.contains(*p))
    }
}

/// The parallelogram with vertices `a, b, c, a + c − b` (in boundary order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[LatticePoint; 4]", into = "[LatticePoint; 4]")]
pub struct LatticeParallelogram {
    pub vertices: [LatticePoint; 4],
}

impl From<[LatticePoint; 4]> for LatticeParallelogram {
    fn from(vertices: [LatticePoint; 4]) -> Self {
        LatticeParallelogram { vertices }
    }
}

impl From<LatticeParallelogram> for [LatticePoint; 4] {
    fn from(p: LatticeParallelogram) -> Self {
        p.vertices
    }
}

impl LatticeParallelogram {
    /// Completes the corner `a, b, c` at `b`.
    pub fn complete(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Self {
        let d = LatticePoint::new(a.i + c.i - b.i, a.j + c.j - b.j);
        LatticeParallelogram { vertices: [a, b, c, d] }
    }

    /// `|det|` of the spanning vectors at the first vertex.
    pub fn normalized_area(&self) -> u64 {
        let [a, b, _, d] = self.vertices;
        2 * cross(b.sub(a), d.sub(a)).unsigned_abs()
    }

    /// True when the four vertices really are a parallelogram in boundary order.
    pub fn is_well_formed(&self) -> bool {
        let [a, b, c, d] = self.vertices;
        b.sub(a) == c.sub(d) && cross(b.sub(a), d.sub(a)) != 0
    }

    pub fn contained_in(&self, t: DegreeTriangle) -> bool {
        self.vertices.iter().all(|p| t.contains(*p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(i: i64, j: i64) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    #[test]
    fn lambda_order_examples() {
        assert!(lambda_less(pt(0, 3), pt(0, 0)));
        assert!(!lambda_less(pt(1, 2), pt(0, 0)));
        assert!(!lambda_less(pt(2, 2), pt(2, 2)));
    }

    #[test]
    fn order_is_total_on_triangle() {
        for d in 1..=6 {
            let t = DegreeTriangle::new(d).unwrap();
            let pts = t.points();
            assert_eq!(pts.len(), t.num_points());
            assert_eq!(pts[0], t.min_point());
            assert_eq!(*pts.last().unwrap(), t.max_point());
            for (k, w) in pts.windows(2).enumerate() {
                assert!(lambda_less(w[0], w[1]));
                assert_eq!(t.index_of(w[0]), Some(k));
            }
            for p in &pts {
                for q in &pts {
                    assert_eq!(p == q, !lambda_less(*p, *q) && !lambda_less(*q, *p));
                }
            }
        }
    }

    #[test]
    fn boundary_path_shapes() {
        let (plus, minus) = boundary_paths(1).unwrap();
        assert_eq!(plus.points(), [pt(0, 1), pt(1, 0)]);
        assert_eq!(minus.points(), [pt(0, 1), pt(0, 0), pt(1, 0)]);
        let (plus, minus) = boundary_paths(3).unwrap();
        assert_eq!(plus.points().len(), 4);
        assert_eq!(minus.points().len(), 7);
        let (_, minus) = boundary_paths(2).unwrap();
        assert_eq!(minus.points(), [pt(0, 2), pt(0, 1), pt(0, 0), pt(1, 0), pt(2, 0)]);
    }

    #[test]
    fn boundary_paths_partition_boundary() {
        for d in 1..=7u32 {
            let (plus, minus) = boundary_paths(d).unwrap();
            let t = plus.triangle();
            let boundary: Vec<_> = t
                .points()
                .into_iter()
                .filter(|p| p.i == 0 || p.j == 0 || p.i + p.j == d as i64)
                .collect();
            let mut union: Vec<_> = plus.points().iter().chain(minus.points()).copied().collect();
            union.sort();
            union.dedup();
            assert_eq!(union, boundary);
            let shared: Vec<_> = plus.points().iter().filter(|p| minus.points().contains(p)).collect();
            assert_eq!(shared, [&t.min_point(), &t.max_point()]);
        }
    }

    #[test]
    fn turn_examples() {
        let (_, minus) = boundary_paths(1).unwrap();
        assert_eq!(minus.turn_at(1).unwrap(), Turn::Left);
        assert_eq!(turn(pt(0, 0), pt(1, 1), pt(2, 2)), Turn::Straight);
        // mirror image of the δ₋ corner
        assert_eq!(turn(pt(0, 0), pt(0, -1), pt(-1, -1)), Turn::Right);
        assert!(matches!(minus.turn_at(0), Err(GeometryError::TurnIndex { .. })));
        assert!(matches!(minus.turn_at(2), Err(GeometryError::TurnIndex { .. })));
    }

    #[test]
    fn measurements() {
        let t = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| LatticeTriangle::new(pt(a.0, a.1), pt(b.0, b.1), pt(c.0, c.1));
        assert_eq!(t((0, 0), (1, 0), (0, 1)).normalized_area(), 1);
        assert_eq!(t((0, 0), (2, 0), (0, 2)).normalized_area(), 4);
        assert_eq!(t((0, 0), (1, 1), (2, 2)).normalized_area(), 0);
        assert_eq!(edge_lattice_length(pt(0, 0), pt(2, 0)).unwrap(), 2);
        assert_eq!(edge_lattice_length(pt(0, 0), pt(2, 1)).unwrap(), 1);
        assert_eq!(edge_lattice_length(pt(1, 1), pt(4, 4)).unwrap(), 3);
        assert_eq!(edge_lattice_length(pt(1, 1), pt(1, 1)), Err(GeometryError::ZeroEdge));
        assert_eq!(t((0, 0), (1, 0), (0, 1)).interior_points().unwrap(), 0);
        assert_eq!(t((0, 0), (2, 0), (0, 2)).interior_points().unwrap(), 0);
        assert_eq!(t((0, 0), (3, 0), (0, 3)).interior_points().unwrap(), 1);
        assert!(t((0, 0), (1, 1), (2, 2)).interior_points().is_err());
    }

    #[test]
    fn path_validation() {
        assert!(LatticePath::new(1, vec![pt(0, 1), pt(0, 0), pt(1, 0)]).is_ok());
        assert_eq!(LatticePath::new(0, vec![]), Err(GeometryError::ZeroDegree));
        assert_eq!(LatticePath::new(1, vec![pt(0, 1)]), Err(GeometryError::PathTooShort));
        assert_eq!(
            LatticePath::new(1, vec![pt(0, 0), pt(1, 0)]),
            Err(GeometryError::BadStart(pt(0, 0), 1))
        );
        assert_eq!(
            LatticePath::new(2, vec![pt(0, 2), pt(1, 1), pt(0, 0), pt(2, 0)]),
            Err(GeometryError::NotIncreasing(2))
        );
        assert_eq!(
            LatticePath::new(2, vec![pt(0, 2), pt(1, 2), pt(2, 0)]),
            Err(GeometryError::OutsideTriangle(pt(1, 2), 2))
        );
    }

    #[test]
    fn parallelogram_area() {
        let p = LatticeParallelogram::complete(pt(0, 1), pt(0, 0), pt(1, 0));
        assert_eq!(p.vertices[3], pt(1, 1));
        assert_eq!(p.normalized_area(), 2);
        assert!(p.is_well_formed());
    }
}
