//! Exact points, segments and cones, and the predicates every other module
//! is built on.

use std::fmt::{self, Debug};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::frame::Frame;
use crate::polygon::SimplePolygon;

/// An exact ordered field usable as a coordinate type.
///
/// Implemented for `Ratio<I>` over integer backings that widen losslessly
/// into `BigInt`. Floating-point types cannot implement it: they are not
/// `Ord`, and a rounded orientation test would make the auditors meaningless.
pub trait Scalar: Clone + Ord + Hash + Debug + Num + Signed + Send + Sync + 'static {
    /// The exact value as an arbitrary-precision rational.
    fn to_big(&self) -> BigRational;

    /// `num / den`. Panics when `den == 0`.
    fn from_frac(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_frac(n, 1)
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Clone + Integer + Signed + Hash + Debug + Send + Sync + 'static + Into<BigInt> + From<i64>,
{
    fn to_big(&self) -> BigRational {
        BigRational::new_raw(self.numer().clone().into(), self.denom().clone().into())
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(I::from(num), I::from(den))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("cone undefined: {0}")]
    ConeUndefined(&'static str),
    #[error("stabbing undefined: {0}")]
    StabUndefined(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(T::from_int(x), T::from_int(y))
    }

    /// The vector `self - other`.
    pub fn minus(&self, other: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() - other.x.clone(), self.y.clone() - other.y.clone())
    }

    pub fn plus(&self, v: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() + v.x.clone(), self.y.clone() + v.y.clone())
    }

    pub fn scaled(&self, k: &T) -> Point<T> {
        Point::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// z-component of the cross product of two vectors.
pub fn cross<T: Scalar>(u: &Point<T>, v: &Point<T>) -> T {
    u.x.clone() * v.y.clone() - u.y.clone() * v.x.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Ccw => 1,
            Orientation::Cw => -1,
            Orientation::Collinear => 0,
        }
    }

    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    fn of<T: Scalar>(v: &T) -> Orientation {
        if v.is_positive() {
            Orientation::Ccw
        } else if v.is_negative() {
            Orientation::Cw
        } else {
            Orientation::Collinear
        }
    }
}

/// Sign of `det(q - p, r - p)`.
pub fn orientation<T: Scalar>(p: &Point<T>, q: &Point<T>, r: &Point<T>) -> Orientation {
    Orientation::of(&cross(&q.minus(p), &r.minus(p)))
}

/// A closed segment with distinct endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment<T> {
    a: Point<T>,
    b: Point<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point<T>, b: Point<T>) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point<T> {
        &self.a
    }

    pub fn b(&self) -> &Point<T> {
        &self.b
    }

    pub fn direction(&self) -> Point<T> {
        self.b.minus(&self.a)
    }

    pub fn has_endpoint(&self, p: &Point<T>) -> bool {
        &self.a == p || &self.b == p
    }

    /// Slope and intercept of the supporting line, or `None` if vertical.
    pub fn slope_intercept(&self) -> Option<(T, T)> {
        let d = self.direction();
        if d.x.is_zero() {
            return None;
        }
        let slope = d.y / d.x;
        let intercept = self.a.y.clone() - slope.clone() * self.a.x.clone();
        Some((slope, intercept))
    }
}

/// True iff `p` lies on the closed segment `s`.
pub fn on_segment<T: Scalar>(p: &Point<T>, s: &Segment<T>) -> bool {
    if orientation(&s.a, &s.b, p) != Orientation::Collinear {
        return false;
    }
    let (lo_x, hi_x) = minmax(&s.a.x, &s.b.x);
    let (lo_y, hi_y) = minmax(&s.a.y, &s.b.y);
    lo_x <= &p.x && &p.x <= hi_x && lo_y <= &p.y && &p.y <= hi_y
}

fn minmax<'a, T: Ord>(a: &'a T, b: &'a T) -> (&'a T, &'a T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True iff the closed segments share at least one point.
pub fn segments_intersect<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> bool {
    let o1 = orientation(&s.a, &s.b, &t.a);
    let o2 = orientation(&s.a, &s.b, &t.b);
    let o3 = orientation(&t.a, &t.b, &s.a);
    let o4 = orientation(&t.a, &t.b, &s.b);
    if o1.sign() * o2.sign() < 0 && o3.sign() * o4.sign() < 0 {
        return true;
    }
    (o1 == Orientation::Collinear && on_segment(&t.a, s))
        || (o2 == Orientation::Collinear && on_segment(&t.b, s))
        || (o3 == Orientation::Collinear && on_segment(&s.a, t))
        || (o4 == Orientation::Collinear && on_segment(&s.b, t))
}

/// True iff the segments meet in exactly one point interior to both.
pub fn proper_cross<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> bool {
    let o1 = orientation(&s.a, &s.b, &t.a).sign();
    let o2 = orientation(&s.a, &s.b, &t.b).sign();
    let o3 = orientation(&t.a, &t.b, &s.a).sign();
    let o4 = orientation(&t.a, &t.b, &s.b).sign();
    o1 * o2 < 0 && o3 * o4 < 0
}

pub fn parallel<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> bool {
    cross(&s.direction(), &t.direction()).is_zero()
}

/// Intersection of the supporting lines; `None` iff they are parallel.
pub fn line_meet<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> Option<Point<T>> {
    let d = s.direction();
    let e = t.direction();
    let den = cross(&d, &e);
    if den.is_zero() {
        return None;
    }
    let lambda = cross(&t.a.minus(&s.a), &e) / den;
    Some(s.a.plus(&d.scaled(&lambda)))
}

/// Neither segment contains the meeting point of the supporting lines.
pub fn is_avoiding<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> bool {
    match line_meet(s, t) {
        Some(i) => !on_segment(&i, s) && !on_segment(&i, t),
        None => false,
    }
}

/// The common endpoint of two segments, if they share exactly one.
pub fn shared_endpoint<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> Option<Point<T>> {
    let shared: Vec<&Point<T>> = [&s.a, &s.b].into_iter().filter(|p| t.has_endpoint(p)).collect();
    match shared.as_slice() {
        [p] => Some((*p).clone()),
        _ => None,
    }
}

/// The closed convex cone at an apex, spanned by two non-parallel directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<T> {
    apex: Point<T>,
    ray1: Point<T>,
    ray2: Point<T>,
}

impl<T: Scalar> Cone<T> {
    pub fn new(apex: Point<T>, ray1: Point<T>, ray2: Point<T>) -> Result<Self, GeomError> {
        if cross(&ray1, &ray2).is_zero() {
            return Err(GeomError::ConeUndefined("ray directions are parallel"));
        }
        Ok(Cone { apex, ray1, ray2 })
    }

    pub fn apex(&self) -> &Point<T> {
        &self.apex
    }

    pub fn ray1(&self) -> &Point<T> {
        &self.ray1
    }

    pub fn ray2(&self) -> &Point<T> {
        &self.ray2
    }

    /// Coordinates of `p - apex` in the ray basis, as signs.
    pub fn basis_signs(&self, p: &Point<T>) -> (i8, i8) {
        let v = p.minus(&self.apex);
        let c = Orientation::of(&cross(&self.ray1, &self.ray2)).sign();
        let alpha = Orientation::of(&cross(&v, &self.ray2)).sign() * c;
        let beta = Orientation::of(&cross(&self.ray1, &v)).sign() * c;
        (alpha, beta)
    }

    pub fn contains(&self, p: &Point<T>, interior_only: bool) -> bool {
        let (alpha, beta) = self.basis_signs(p);
        if interior_only {
            alpha > 0 && beta > 0
        } else {
            alpha >= 0 && beta >= 0
        }
    }
}

/// `Cone(s, t)`: apex at `I(s, t)`, bounded by the ray from the apex through
/// `s` and the ray from the apex through `t`.
///
/// Defined when the segments share exactly one endpoint (the apex) or are
/// avoiding.
pub fn cone_of<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> Result<Cone<T>, GeomError> {
    if parallel(s, t) {
        return Err(GeomError::ConeUndefined("segments are parallel"));
    }
    if proper_cross(s, t) {
        return Err(GeomError::ConeUndefined("segments cross"));
    }
    let apex = match shared_endpoint(s, t) {
        Some(v) => v,
        None => {
            let i = line_meet(s, t).expect("non-parallel lines meet");
            if on_segment(&i, s) || on_segment(&i, t) {
                return Err(GeomError::ConeUndefined("segments are neither consecutive nor avoiding"));
            }
            i
        }
    };
    let far = |seg: &Segment<T>| if seg.a == apex { seg.b.clone() } else { seg.a.clone() };
    Cone::new(apex.clone(), far(s).minus(&apex), far(t).minus(&apex))
}

pub fn cone_contains<T: Scalar>(c: &Cone<T>, p: &Point<T>, interior_only: bool) -> bool {
    c.contains(p, interior_only)
}

/// `q` stabs `t` when the supporting lines meet on `t`.
pub fn stabs<T: Scalar>(q: &Segment<T>, t: &Segment<T>) -> Result<bool, GeomError> {
    let i = line_meet(q, t).ok_or(GeomError::StabUndefined("segments are parallel"))?;
    if segments_intersect(q, t) {
        return Err(GeomError::StabUndefined("segments are not disjoint"));
    }
    let on_q = on_segment(&i, q);
    let on_t = on_segment(&i, t);
    if !on_q && !on_t {
        return Err(GeomError::StabUndefined("segments are avoiding"));
    }
    Ok(on_t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Role {
    P,
    Q,
    /// A free segment tested against a polygon.
    Probe,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::P => f.write_str("P"),
            Role::Q => f.write_str("Q"),
            Role::Probe => f.write_str("probe"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ElementRef {
    pub role: Role,
    pub index: usize,
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.role, self.index)
    }
}

/// First witness that a configuration is not in general position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GpViolation {
    /// Three vertices on a common line.
    CollinearVertices { vertices: [ElementRef; 3] },
    /// Two sides with parallel supporting lines.
    ParallelSides { sides: [ElementRef; 2] },
}

impl fmt::Display for GpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GpViolation::CollinearVertices { vertices: [a, b, c] } => {
                write!(f, "vertices {a}, {b}, {c} are collinear")
            }
            GpViolation::ParallelSides { sides: [a, b] } => write!(f, "sides {a} and {b} are parallel"),
        }
    }
}

/// Checks that no three vertices of `P ∪ Q` are collinear and no two sides
/// are parallel. Vertex refs use polygon-local indices; side `i` runs from
/// vertex `i` to vertex `i + 1`.
pub fn check_general_position<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Result<(), GpViolation> {
    let mut labels = Vec::with_capacity(p.len() + q.len());
    labels.extend((0..p.len()).map(|i| ElementRef { role: Role::P, index: i }));
    labels.extend((0..q.len()).map(|i| ElementRef { role: Role::Q, index: i }));
    let points: Vec<&Point<T>> = p.vertices().iter().chain(q.vertices()).collect();
    let m = p.len();
    let mut sides = Vec::with_capacity(p.len() + q.len());
    sides.extend((0..m).map(|i| (i, (i + 1) % m)));
    sides.extend((0..q.len()).map(|j| (m + j, m + (j + 1) % q.len())));
    general_position_of(&points, &labels, &sides)
}

/// General position of an arbitrary labelled point set with sides given as
/// index pairs. Side labels are taken from the label of the first endpoint.
pub(crate) fn general_position_of<T: Scalar>(
    points: &[&Point<T>],
    labels: &[ElementRef],
    sides: &[(usize, usize)],
) -> Result<(), GpViolation> {
    let frame = Frame::new(points.iter().copied());
    if let Some((i, j, k)) = frame.first_collinear_triple() {
        return Err(GpViolation::CollinearVertices { vertices: [labels[i], labels[j], labels[k]] });
    }
    if let Some((s, t)) = frame.first_parallel_pair(sides) {
        return Err(GpViolation::ParallelSides { sides: [labels[sides[s].0], labels[sides[t].0]] });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::from_ints(x, y)
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment<Rational> {
        Segment::new(pt(a.0, a.1), pt(b.0, b.1)).unwrap()
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&pt(0, 0), &pt(1, 0), &pt(0, 1)), Orientation::Ccw);
        assert_eq!(orientation(&pt(0, 0), &pt(1, 1), &pt(2, 2)), Orientation::Collinear);
        assert_eq!(orientation(&pt(0, 0), &pt(0, 1), &pt(1, 1)), Orientation::Cw);
    }

    #[test]
    fn proper_cross_examples() {
        assert!(proper_cross(&seg((0, 0), (2, 2)), &seg((0, 2), (2, 0))));
        assert!(!proper_cross(&seg((0, 0), (1, 0)), &seg((2, 0), (3, 0))));
        assert!(!proper_cross(&seg((0, 0), (1, 0)), &seg((1, 0), (1, 1))));
        assert!(segments_intersect(&seg((0, 0), (1, 0)), &seg((1, 0), (1, 1))));
    }

    #[test]
    fn line_meet_examples() {
        assert_eq!(line_meet(&seg((0, 0), (1, 0)), &seg((0, 1), (1, 2))), Some(pt(-1, 0)));
        assert_eq!(line_meet(&seg((0, 0), (1, 0)), &seg((0, 1), (1, 1))), None);
        assert_eq!(line_meet(&seg((1, 0), (2, 0)), &seg((0, 1), (0, 2))), Some(pt(0, 0)));
    }

    #[test]
    fn avoiding_examples() {
        assert!(is_avoiding(&seg((1, 0), (2, 0)), &seg((0, 1), (0, 2))));
        assert!(!is_avoiding(&seg((0, 0), (2, 0)), &seg((1, -1), (1, 1))));
        assert!(!is_avoiding(&seg((-1, 0), (2, 0)), &seg((1, 1), (1, 2))));
    }

    #[test]
    fn cone_examples() {
        let c = cone_of(&seg((0, 0), (1, 0)), &seg((0, 0), (0, 1))).unwrap();
        assert!(c.contains(&pt(1, 1), false));
        assert!(!c.contains(&pt(-1, 1), false));
        assert!(!c.contains(&pt(1, 0), true));
        assert!(c.contains(&pt(1, 0), false));
        // Avoiding pair: apex at the meeting point of the lines.
        let c = cone_of(&seg((1, 0), (2, 0)), &seg((0, 1), (0, 2))).unwrap();
        assert_eq!(c.apex(), &pt(0, 0));
        assert!(c.contains(&pt(3, 3), true));
    }

    #[test]
    fn cone_errors() {
        assert!(matches!(
            cone_of(&seg((0, 0), (2, 2)), &seg((0, 2), (2, 0))),
            Err(GeomError::ConeUndefined(_))
        ));
        assert!(matches!(
            cone_of(&seg((0, 0), (1, 0)), &seg((0, 1), (1, 1))),
            Err(GeomError::ConeUndefined(_))
        ));
    }

    #[test]
    fn stabbing_examples() {
        let q = seg((5, -1), (5, -5));
        let t = seg((0, 0), (10, 0));
        assert_eq!(stabs(&q, &t), Ok(true));
        assert_eq!(stabs(&t, &q), Ok(false));
        assert!(matches!(
            stabs(&seg((1, 0), (2, 0)), &seg((0, 1), (0, 2))),
            Err(GeomError::StabUndefined(_))
        ));
    }

    #[test]
    fn segment_rejects_coincident_endpoints() {
        assert_eq!(Segment::new(pt(1, 1), pt(1, 1)), Err(GeomError::DegenerateSegment));
    }

    #[test]
    fn small_backing_agrees() {
        type R64 = Ratio<i64>;
        let p = Point::<R64>::from_ints(0, 0);
        let q = Point::<R64>::from_ints(3, 1);
        let r = Point::new(R64::from_frac(1, 3), R64::from_frac(1, 7));
        assert_eq!(orientation(&p, &q, &r), Orientation::Ccw);
    }
}
