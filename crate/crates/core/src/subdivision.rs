//! Dual subdivisions of `Δ_d` into triangles and parallelograms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{cross, DegreeTriangle, GeometryError, LatticeParallelogram, LatticePoint, LatticeTriangle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate triangle cell {0}")]
    DegenerateTriangle(LatticeTriangle),
    #[error("malformed parallelogram cell {0:?}")]
    MalformedParallelogram([LatticePoint; 4]),
    #[error("cell leaves the degree-{0} triangle")]
    OutsideTriangle(u32),
    #[error("cell areas sum to {got}, expected {expected}")]
    AreaMismatch { got: u64, expected: u64 },
}

/// A multiset of cells meant to tile `Δ_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualSubdivision {
    degree: u32,
    triangles: Vec<LatticeTriangle>,
    parallelograms: Vec<LatticeParallelogram>,
}

impl DualSubdivision {
    /// Builds and validates a subdivision.
    pub fn new(
        degree: u32,
        triangles: Vec<LatticeTriangle>,
        parallelograms: Vec<LatticeParallelogram>,
    ) -> Result<Self, SubdivisionError> {
        let s = DualSubdivision { degree, triangles, parallelograms };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_trusted(
        degree: u32,
        triangles: Vec<LatticeTriangle>,
        parallelograms: Vec<LatticeParallelogram>,
    ) -> Self {
        DualSubdivision { degree, triangles, parallelograms }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn triangles(&self) -> &[LatticeTriangle] {
        &self.triangles
    }

    pub fn parallelograms(&self) -> &[LatticeParallelogram] {
        &self.parallelograms
    }

    /// Cells as vertex lists in boundary order.
    pub fn polygons(&self) -> Vec<Vec<LatticePoint>> {
        self.triangles
            .iter()
            .map(|t| t.vertices().to_vec())
            .chain(self.parallelograms.iter().map(|p| p.vertices.to_vec()))
            .collect()
    }

    /// Area accounting and containment: every cell is non-degenerate and
    /// inside `Δ_d`, and the normalized areas add up to `d²`.
    pub fn validate(&self) -> Result<(), SubdivisionError> {
        let t = DegreeTriangle::new(self.degree)?;
        let mut total = 0u64;
        for tri in &self.triangles {
            if !tri.contained_in(t) {
                return Err(SubdivisionError::OutsideTriangle(self.degree));
            }
            if tri.is_degenerate() {
                return Err(SubdivisionError::DegenerateTriangle(*tri));
            }
            total += tri.normalized_area();
        }
        for p in &self.parallelograms {
            if !p.contained_in(t) {
                return Err(SubdivisionError::OutsideTriangle(self.degree));
            }
            if !p.is_well_formed() {
                return Err(SubdivisionError::MalformedParallelogram(p.vertices));
            }
            total += p.normalized_area();
        }
        let expected = (self.degree as u64).pow(2);
        if total != expected {
            return Err(SubdivisionError::AreaMismatch { got: total, expected });
        }
        Ok(())
    }

    /// Exact pairwise interior-disjointness by separating axes.
    pub fn interiors_disjoint(&self) -> bool {
        let polys = self.polygons();
        for (a, pa) in polys.iter().enumerate() {
            for pb in &polys[a + 1..] {
                if !separated(pa, pb) {
                    return false;
                }
            }
        }
        true
    }
}

impl DualSubdivision {
    /// Whether the dual tropical curve is connected, i.e. the curve it comes
    /// from is irreducible.
    ///
    /// Cells are glued along shared sides. A triangle joins its three sides
    /// at one vertex of the curve; a parallelogram is a crossing of two edges,
    /// so it only joins opposite sides.
    pub fn dual_curve_connected(&self) -> bool {
        let mut sides: Vec<(LatticePoint, LatticePoint)> = Vec::new();
        let mut key = |p: LatticePoint, q: LatticePoint| {
            let e = if p < q { (p, q) } else { (q, p) };
            match sides.iter().position(|x| *x == e) {
                Some(k) => k,
                None => {
                    sides.push(e);
                    sides.len() - 1
                }
            }
        };
        let mut links = Vec::new();
        for t in &self.triangles {
            let [a, b, c] = t.vertices();
            let (x, y, z) = (key(a, b), key(b, c), key(c, a));
            links.push((x, y));
            links.push((y, z));
        }
        for p in &self.parallelograms {
            let [a, b, c, d] = p.vertices;
            links.push((key(a, b), key(c, d)));
            links.push((key(b, c), key(d, a)));
        }
        let mut parent: Vec<usize> = (0..sides.len()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut classes = sides.len();
        for (x, y) in links {
            let (rx, ry) = (root(&mut parent, x), root(&mut parent, y));
            if rx != ry {
                parent[rx] = ry;
                classes -= 1;
            }
        }
        classes <= 1
    }
}

/// Two convex polygons have disjoint interiors iff some edge normal of one
/// of them separates their projections.
fn separated(a: &[LatticePoint], b: &[LatticePoint]) -> bool {
    let normals = a.iter().zip(a.iter().cycle().skip(1)).chain(b.iter().zip(b.iter().cycle().skip(1)));
    for (p, q) in normals {
        let (dx, dy) = q.sub(*p);
        let proj = |poly: &[LatticePoint]| {
            // dot product with the edge normal (-dy, dx)
            let vals = poly.iter().map(|v| cross((dx, dy), (v.i, v.j)));
            let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
            (lo, hi)
        };
        let (alo, ahi) = proj(a);
        let (blo, bhi) = proj(b);
        if ahi <= blo || bhi <= alo {
            return true;
        }
    }
    false
}
