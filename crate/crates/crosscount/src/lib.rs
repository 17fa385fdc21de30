//! Exact counting of boundary crossings between two simple polygons, the
//! extremal constructions, the disjointness-graph bounds, executable forms of
//! the structural lemmas about associated pairs, Erdős–Szekeres style Ramsey
//! tools, and a randomized search for extremal odd/odd configurations.
//!
//! The geometry is generic over an exact [`Scalar`] field. The aliases below
//! fix the arbitrary-precision rationals used by everything downstream.

mod frame;

pub mod constructions;
pub mod disjointness;
pub mod geom;
pub mod io;
pub mod polygon;
pub mod ramsey;
pub mod search;
pub mod structure;

pub use geom::Scalar;

/// Arbitrary-precision rational; canonical form is kept after every operation.
pub type Rational = num_rational::BigRational;
pub type Point2 = geom::Point<Rational>;
pub type Segment2 = geom::Segment<Rational>;
pub type Polygon = polygon::SimplePolygon<Rational>;
pub type Cone2 = geom::Cone<Rational>;
