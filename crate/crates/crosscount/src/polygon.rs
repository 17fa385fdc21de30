//! Simple polygons and exact boundary-crossing counts.

use serde::Serialize;
use thiserror::Error;

use crate::frame::Frame;
use crate::geom::{check_general_position, general_position_of, line_meet, ElementRef, GpViolation, Point, Role, Scalar, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {found}")]
    TooFewVertices { found: usize },
    /// Sides `first < second` meet illegally. For a repeated vertex the
    /// indices are those of the two equal vertices.
    #[error("polygon is not simple: sides {first} and {second} meet illegally")]
    NotSimple { first: usize, second: usize },
    #[error("general position violated: {0}")]
    GeneralPosition(GpViolation),
}

/// A closed polygonal curve whose sides meet only at shared endpoints of
/// consecutive sides. Side `i` runs from vertex `i` to vertex `i + 1 mod m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplePolygon<T> {
    vertices: Vec<Point<T>>,
    sides: Vec<Segment<T>>,
}

/// Validates simplicity and returns the polygon, or the first offending
/// side pair in lexicographic order.
pub fn validate_simple<T: Scalar>(vertices: Vec<Point<T>>) -> Result<SimplePolygon<T>, PolygonError> {
    let m = vertices.len();
    if m < 3 {
        return Err(PolygonError::TooFewVertices { found: m });
    }
    let frame = Frame::new(&vertices);
    if let Some((first, second)) = frame.first_simplicity_violation(0, m) {
        return Err(PolygonError::NotSimple { first, second });
    }
    let sides = (0..m)
        .map(|i| Segment::new(vertices[i].clone(), vertices[(i + 1) % m].clone()).expect("distinct vertices"))
        .collect();
    Ok(SimplePolygon { vertices, sides })
}

impl<T: Scalar> SimplePolygon<T> {
    pub fn new(vertices: Vec<Point<T>>) -> Result<Self, PolygonError> {
        validate_simple(vertices)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; a simple polygon has at least three vertices.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn sides(&self) -> &[Segment<T>] {
        &self.sides
    }

    /// Side `i`, indices taken modulo the side count.
    pub fn side(&self, i: isize) -> &Segment<T> {
        &self.sides[self.wrap(i)]
    }

    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.len() as isize) as usize
    }

    /// Sides `i` and `j` share a vertex.
    pub fn consecutive(&self, i: usize, j: usize) -> bool {
        let m = self.len();
        (i + 1) % m == j || (j + 1) % m == i
    }

    /// The vertex list with coordinates mapped by `f`; the caller is
    /// responsible for `f` preserving simplicity.
    pub fn map_vertices(&self, f: impl Fn(&Point<T>) -> Point<T>) -> Result<Self, PolygonError> {
        validate_simple(self.vertices.iter().map(f).collect())
    }
}

/// Dense `m × n` boolean matrix indexed by (P side, Q side).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl PairMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        PairMatrix { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.cols + j] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Set entries in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    pub fn transposed(&self) -> PairMatrix {
        let mut t = PairMatrix::new(self.cols, self.rows);
        for (i, j) in self.ones() {
            t.set(j, i, true);
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport<T> {
    pub total: usize,
    /// Entry `(i, j)` is set iff side `p_i` properly crosses side `q_j`.
    pub per_pair: PairMatrix,
    /// Crossing points in row-major order of `per_pair`.
    pub points: Vec<Point<T>>,
}

/// Pairwise contact data for all side pairs of two polygons.
pub(crate) struct Contacts {
    pub crossing: PairMatrix,
    pub touching: PairMatrix,
}

pub(crate) fn contacts<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Contacts {
    let (m, n) = (p.len(), q.len());
    let frame = Frame::new(p.vertices().iter().chain(q.vertices()));
    let mut crossing = PairMatrix::new(m, n);
    let mut touching = PairMatrix::new(m, n);
    for i in 0..m {
        for j in 0..n {
            let c = frame.contact((i, (i + 1) % m), (m + j, m + (j + 1) % n));
            crossing.set(i, j, c.proper);
            touching.set(i, j, c.touching);
        }
    }
    Contacts { crossing, touching }
}

/// Exact number of proper crossings between the boundaries of `p` and `q`.
pub fn crossing_count<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Result<CrossingReport<T>, PolygonError> {
    check_general_position(p, q).map_err(PolygonError::GeneralPosition)?;
    let per_pair = contacts(p, q).crossing;
    let points = per_pair
        .ones()
        .map(|(i, j)| line_meet(&p.sides()[i], &q.sides()[j]).expect("crossing sides are not parallel"))
        .collect();
    Ok(CrossingReport { total: per_pair.count(), per_pair, points })
}

/// Crossing total only; skips the general-position check and the crossing
/// points. Callers must have established general position themselves.
pub(crate) fn crossing_total_unchecked<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> usize {
    contacts(p, q).crossing.count()
}

/// Number of sides of `q` properly crossed by the segment `s`.
pub fn segment_polygon_crossings<T: Scalar>(s: &Segment<T>, q: &SimplePolygon<T>) -> Result<usize, PolygonError> {
    let n = q.len();
    let points: Vec<&Point<T>> = q.vertices().iter().chain([s.a(), s.b()]).collect();
    let mut labels: Vec<ElementRef> = (0..n).map(|i| ElementRef { role: Role::Q, index: i }).collect();
    labels.push(ElementRef { role: Role::Probe, index: 0 });
    labels.push(ElementRef { role: Role::Probe, index: 0 });
    let mut sides: Vec<(usize, usize)> = (0..n).map(|j| (j, (j + 1) % n)).collect();
    sides.push((n, n + 1));
    general_position_of(&points, &labels, &sides).map_err(PolygonError::GeneralPosition)?;
    let frame = Frame::new(points.iter().copied());
    Ok((0..n).filter(|&j| frame.contact((n, n + 1), (j, (j + 1) % n)).proper).count())
}

/// Number of sides of `q` crossed by the full line through `a` and `b`.
/// No vertex of `q` may lie on the line.
pub fn line_polygon_crossings<T: Scalar>(a: &Point<T>, b: &Point<T>, q: &SimplePolygon<T>) -> Result<usize, PolygonError> {
    let n = q.len();
    let frame = Frame::new(q.vertices().iter().chain([a, b]));
    let signs: Vec<i8> = (0..n).map(|k| frame.side_of_line(n, n + 1, k)).collect();
    if let Some(k) = signs.iter().position(|&s| s == 0) {
        let probe = ElementRef { role: Role::Probe, index: 0 };
        return Err(PolygonError::GeneralPosition(GpViolation::CollinearVertices {
            vertices: [probe, probe, ElementRef { role: Role::Q, index: k }],
        }));
    }
    Ok((0..n).filter(|&k| signs[k] != signs[(k + 1) % n]).count())
}
