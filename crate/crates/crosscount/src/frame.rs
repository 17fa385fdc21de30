//! Batch predicates on integer coordinates.
//!
//! A frame rescales a set of rational points by the lcm of their
//! denominators, so every orientation test afterwards is a plain integer
//! determinant. When all scaled coordinates fit in 62 bits the determinants
//! fit in `i128` and no allocation happens at all.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::geom::{Point, Scalar};

pub(crate) trait Coord: Clone + Ord + Signed {}
impl Coord for i128 {}
impl Coord for BigInt {}

pub(crate) enum Frame {
    Small(Vec<[i128; 2]>),
    Big(Vec<[BigInt; 2]>),
}

macro_rules! dispatch {
    ($frame:expr, $pts:ident => $body:expr) => {
        match $frame {
            Frame::Small($pts) => $body,
            Frame::Big($pts) => $body,
        }
    };
}

/// How two closed segments meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Contact {
    pub proper: bool,
    pub touching: bool,
}

impl Frame {
    pub fn new<'a, T: Scalar>(points: impl IntoIterator<Item = &'a Point<T>>) -> Frame {
        let coords: Vec<_> = points.into_iter().map(|p| (p.x.to_big(), p.y.to_big())).collect();
        let mut lcm = BigInt::one();
        for (x, y) in &coords {
            lcm = lcm.lcm(x.denom()).lcm(y.denom());
        }
        let scale = |r: &num_rational::BigRational| r.numer() * (&lcm / r.denom());
        let big: Vec<[BigInt; 2]> = coords.iter().map(|(x, y)| [scale(x), scale(y)]).collect();
        if big.iter().flatten().all(|c| c.bits() <= 62) {
            Frame::Small(big.iter().map(|[x, y]| [x.to_i128().unwrap(), y.to_i128().unwrap()]).collect())
        } else {
            Frame::Big(big)
        }
    }

    pub fn orient(&self, i: usize, j: usize, k: usize) -> i8 {
        dispatch!(self, pts => orient(&pts[i], &pts[j], &pts[k]))
    }

    pub fn first_collinear_triple(&self) -> Option<(usize, usize, usize)> {
        dispatch!(self, pts => first_collinear_triple(pts))
    }

    /// First pair of sides (as positions in `sides`) with parallel lines.
    pub fn first_parallel_pair(&self, sides: &[(usize, usize)]) -> Option<(usize, usize)> {
        dispatch!(self, pts => first_parallel_pair(pts, sides))
    }

    pub fn contact(&self, s: (usize, usize), t: (usize, usize)) -> Contact {
        dispatch!(self, pts => contact(&pts[s.0], &pts[s.1], &pts[t.0], &pts[t.1]))
    }

    /// First offending side pair of the cyclic polygon on vertices
    /// `offset..offset + m`, in lexicographic order of side indices.
    pub fn first_simplicity_violation(&self, offset: usize, m: usize) -> Option<(usize, usize)> {
        dispatch!(self, pts => first_simplicity_violation(&pts[offset..offset + m]))
    }

    /// Vertices not on the line through `a`, `b`, as signs; zero if on it.
    pub fn side_of_line(&self, a: usize, b: usize, k: usize) -> i8 {
        self.orient(a, b, k)
    }
}

fn sign<N: Coord>(v: &N) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn det<N: Coord>(p: &[N; 2], q: &[N; 2], r: &[N; 2]) -> N {
    (q[0].clone() - p[0].clone()) * (r[1].clone() - p[1].clone())
        - (q[1].clone() - p[1].clone()) * (r[0].clone() - p[0].clone())
}

fn orient<N: Coord>(p: &[N; 2], q: &[N; 2], r: &[N; 2]) -> i8 {
    sign(&det(p, q, r))
}

/// `p` lies in the bounding box of `a b`; with collinearity this means on it.
fn in_box<N: Coord>(p: &[N; 2], a: &[N; 2], b: &[N; 2]) -> bool {
    (0..2).all(|c| {
        let (lo, hi) = if a[c] <= b[c] { (&a[c], &b[c]) } else { (&b[c], &a[c]) };
        lo <= &p[c] && &p[c] <= hi
    })
}

fn contact<N: Coord>(a: &[N; 2], b: &[N; 2], c: &[N; 2], d: &[N; 2]) -> Contact {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let proper = o1 * o2 < 0 && o3 * o4 < 0;
    let touching = proper
        || (o1 == 0 && in_box(c, a, b))
        || (o2 == 0 && in_box(d, a, b))
        || (o3 == 0 && in_box(a, c, d))
        || (o4 == 0 && in_box(b, c, d));
    Contact { proper, touching }
}

fn first_collinear_triple<N: Coord>(pts: &[[N; 2]]) -> Option<(usize, usize, usize)> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(&pts[i], &pts[j], &pts[k]) == 0 {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

fn first_parallel_pair<N: Coord>(pts: &[[N; 2]], sides: &[(usize, usize)]) -> Option<(usize, usize)> {
    let dirs: Vec<[N; 2]> = sides
        .iter()
        .map(|&(a, b)| [pts[b][0].clone() - pts[a][0].clone(), pts[b][1].clone() - pts[a][1].clone()])
        .collect();
    for s in 0..dirs.len() {
        for t in s + 1..dirs.len() {
            let c = dirs[s][0].clone() * dirs[t][1].clone() - dirs[s][1].clone() * dirs[t][0].clone();
            if c.is_zero() {
                return Some((s, t));
            }
        }
    }
    None
}

fn first_simplicity_violation<N: Coord>(v: &[[N; 2]]) -> Option<(usize, usize)> {
    let m = v.len();
    for i in 0..m {
        for j in i + 1..m {
            if v[i] == v[j] {
                // A repeated vertex makes the sides leaving both copies meet.
                return Some((i, j));
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let ok = if j == i + 1 || (i == 0 && j == m - 1) {
                // Consecutive sides: they may only share the common vertex.
                let (shared, u, w) = if j == i + 1 { (j, i, (j + 1) % m) } else { (0, 1, m - 1) };
                !folds_back(&v[u], &v[shared], &v[w])
            } else {
                !contact(&v[i], &v[(i + 1) % m], &v[j], &v[(j + 1) % m]).touching
            };
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

/// Sides `u v` and `v w` overlap beyond `v`.
fn folds_back<N: Coord>(u: &[N; 2], v: &[N; 2], w: &[N; 2]) -> bool {
    if orient(u, v, w) != 0 {
        return false;
    }
    let dot = (u[0].clone() - v[0].clone()) * (w[0].clone() - v[0].clone())
        + (u[1].clone() - v[1].clone()) * (w[1].clone() - v[1].clone());
    dot.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn small_and_big_frames_agree() {
        let pts: Vec<Point<Rational>> = vec![
            Point::new(Rational::from_frac(1, 3), Rational::from_frac(2, 7)),
            Point::new(Rational::from_frac(5, 11), Rational::from_frac(-1, 13)),
            Point::new(Rational::from_frac(-4, 9), Rational::from_frac(3, 5)),
        ];
        let small = Frame::new(&pts);
        assert!(matches!(small, Frame::Small(_)));
        let huge = Rational::new(BigInt::one() << 80u32, BigInt::from(3));
        let mut shifted = pts.clone();
        for p in &mut shifted {
            p.x += huge.clone();
            p.y += huge.clone();
        }
        let big = Frame::new(&shifted);
        assert!(matches!(big, Frame::Big(_)));
        assert_eq!(small.orient(0, 1, 2), big.orient(0, 1, 2));
        assert_eq!(small.orient(0, 1, 2), crate::geom::orientation(&pts[0], &pts[1], &pts[2]).sign());
    }
}
