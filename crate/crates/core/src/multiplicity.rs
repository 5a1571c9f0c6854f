//! Vertex and map multiplicities: complex (area), real (two variants) and
//! quadratically enriched (GW-valued).

use thiserror::Error;

use crate::geometry::{GeometryError, LatticeTriangle};
use crate::gw::{GwElement, SquareClass};
use crate::subdivision::{DualSubdivision, SubdivisionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiplicityError {
    #[error("degenerate dual cell {0}")]
    Degenerate(LatticeTriangle),
    #[error("real multiplicity {real} is inconsistent with complex multiplicity {complex}")]
    ParityMismatch { complex: u64, real: i8 },
    #[error("complex multiplicity must be positive")]
    ZeroComplex,
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

/// Measurements of the dual triangle `Δ_v` of a trivalent vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexData {
    pub triangle: LatticeTriangle,
    /// Lattice lengths of the sides, ascending.
    pub weights: [u64; 3],
    pub area: u64,
    pub interior: u64,
}

impl VertexData {
    pub fn new(triangle: LatticeTriangle) -> Result<Self, MultiplicityError> {
        let area = triangle.normalized_area();
        if area == 0 {
            return Err(MultiplicityError::Degenerate(triangle));
        }
        let mut weights = triangle.side_lengths().map_err(|_| MultiplicityError::Degenerate(triangle))?;
        weights.sort_unstable();
        let interior = match triangle.interior_points() {
            Ok(n) => n,
            Err(GeometryError::DegenerateTriangle(t)) => return Err(MultiplicityError::Degenerate(t)),
            Err(_) => unreachable!("interior_points only fails on degenerate input"),
        };
        debug_assert_eq!(area + 2, 2 * interior + weights.iter().sum::<u64>());
        Ok(VertexData { triangle, weights, area, interior })
    }

    pub fn weight_product(&self) -> u64 {
        self.weights.iter().product()
    }
}

/// `mult(v) = |det|`, the normalized area of the dual triangle.
pub fn vertex_mult_complex(v: &VertexData) -> u64 {
    v.area
}

/// `((m−1)/2)·ℍ + ⟨(−1)^i·w₁w₂w₃⟩` for odd area `m`, `(m/2)·ℍ` for even.
pub fn vertex_mult_gw(v: &VertexData) -> GwElement {
    let half = (v.area / 2) as i64;
    if v.area % 2 == 0 {
        return GwElement::hyperbolic(half);
    }
    let w = v.weight_product() as i64;
    let a = if v.interior % 2 == 0 { w } else { -w };
    GwElement::hyperbolic(half) + GwElement::from_class(SquareClass::from_integer(a).expect("nonzero weights"), 1)
}

/// `0` for even area, `+1` for area ≡ 1 (mod 4), `−1` for area ≡ 3 (mod 4).
pub fn vertex_mult_real_modfour(v: &VertexData) -> i8 {
    match v.area % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// `0` if some side has even lattice length, otherwise `(−1)^interior`.
pub fn vertex_mult_real_interior(v: &VertexData) -> i8 {
    if v.weights.iter().any(|w| w % 2 == 0) {
        0
    } else if v.interior % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Map-level enriched multiplicity from the complex and real multiplicities.
pub fn map_mult_gw_from_pair(mult_complex: u64, mult_real: i8) -> Result<GwElement, MultiplicityError> {
    if mult_complex == 0 {
        return Err(MultiplicityError::ZeroComplex);
    }
    let odd = mult_complex % 2 == 1;
    let consistent = match mult_real {
        0 => !odd,
        1 | -1 => odd,
        _ => false,
    };
    if !consistent {
        return Err(MultiplicityError::ParityMismatch { complex: mult_complex, real: mult_real });
    }
    let half = (mult_complex / 2) as i64;
    Ok(if odd {
        GwElement::hyperbolic(half) + GwElement::unit(mult_real as i64).expect("±1")
    } else {
        GwElement::hyperbolic(half)
    })
}

/// `Π_v mult_{A¹}(Δ_v)` over the triangle cells; parallelograms contribute `⟨1⟩`.
pub fn subdivision_mult_gw(cells: &DualSubdivision) -> Result<GwElement, MultiplicityError> {
    cells.validate()?;
    cells
        .triangles()
        .iter()
        .map(|t| VertexData::new(*t).map(|v| vertex_mult_gw(&v)))
        .product()
}

/// A commutative semiring in which path multiplicities can be evaluated.
///
/// The lattice-path recursion only needs `0`, `1`, `+`, `·` and a value per
/// dual triangle, so the same code computes complex, real, enriched and
/// branch-counting multiplicities.
pub trait PathWeight: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn of_vertex(v: &VertexData) -> Self;
}

impl PathWeight for GwElement {
    fn zero() -> Self {
        GwElement::zero()
    }
    fn one() -> Self {
        GwElement::one()
    }
    fn is_zero(&self) -> bool {
        GwElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn of_vertex(v: &VertexData) -> Self {
        vertex_mult_gw(v)
    }
}

/// Integer weight with complex vertex multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComplexWeight(pub u128);

/// Integer weight with the mod-4 real vertex multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RealWeight(pub i128);

/// Counts branches of the recursion: every triangle weighs 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BranchCount(pub u128);

macro_rules! integer_weight {
    ($ty:ident, $vertex:expr) => {
        impl PathWeight for $ty {
            fn zero() -> Self {
                $ty(0)
            }
            fn one() -> Self {
                $ty(1)
            }
            fn is_zero(&self) -> bool {
                self.0 == 0
            }
            fn add(&self, other: &Self) -> Self {
                $ty(self.0 + other.0)
            }
            fn mul(&self, other: &Self) -> Self {
                $ty(self.0 * other.0)
            }
            fn of_vertex(v: &VertexData) -> Self {
                $ty($vertex(v))
            }
        }
    };
}

integer_weight!(ComplexWeight, |v: &VertexData| vertex_mult_complex(v) as u128);
integer_weight!(RealWeight, |v: &VertexData| vertex_mult_real_modfour(v) as i128);
integer_weight!(BranchCount, |_: &VertexData| 1u128);
