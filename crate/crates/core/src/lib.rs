//! Enriched (A¹-) counts of rational plane curves through tropical lattice paths.
//!
//! The crate computes the Grothendieck–Witt valued count of degree-`d`
//! rational curves through `3d − 1` points by the lattice-path
//! algorithm, together with the complex and real specializations, and ships
//! the supporting tropical geometry: dual subdivisions, tropicalization of
//! polynomials over ℚ with a valuation, and SVG rendering.
//!
//! ```
//! let r = tropcount::path_count::count(3).unwrap();
//! assert_eq!(r.quadratic.to_string(), "2ℍ + 8⟨1⟩");
//! assert_eq!((r.complex_count, r.real_count), (12, 8));
//! ```

mod arith;
pub mod geometry;
pub mod gw;
pub mod io;
pub mod multiplicity;
pub mod path_count;
pub mod render;
pub mod subdivision;
pub mod trop_poly;
