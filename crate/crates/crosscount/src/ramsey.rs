//! Constructive Ramsey-type tools: transitive sub-tournaments, cups and caps
//! of points and of lines, monotone subsequences, and the Erdős–Szekeres
//! numbers.
//!
//! Duality used throughout: the line `y = a·x + b` corresponds to the point
//! `(a, −b)`. Slope order of lines is x-order of their duals, and a cup
//! (cap) of lines is exactly a cup (cap) of the dual points.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::frame::Frame;
use crate::geom::{orientation, Orientation, Point, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("ES(r, s) needs r, s ≥ 2 (got r={r}, s={s})")]
    DomainError { r: usize, s: usize },
    #[error("need at least {needed} elements, got {found}")]
    TooFew { needed: String, found: usize },
    #[error("elements {first} and {second} share an x-coordinate (or slope)")]
    DuplicateX { first: usize, second: usize },
    #[error("elements {0}, {1}, {2} are collinear (or the lines are concurrent)")]
    Collinear(usize, usize, usize),
    #[error("entries {first} and {second} are equal")]
    DuplicateEntries { first: usize, second: usize },
    #[error("relation is not a tournament at ({0}, {1})")]
    NotATournament(usize, usize),
    #[error("no {r}-cup and no {s}-cap found; the guarantee was violated")]
    GuaranteeViolated { r: usize, s: usize },
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `ES(r, s) = C(r + s − 4, r − 2)`: more points than this in general
/// position always contain an `r`-cup or an `s`-cap.
pub fn es_number(r: usize, s: usize) -> Result<BigUint, RamseyError> {
    if r < 2 || s < 2 {
        return Err(RamseyError::DomainError { r, s });
    }
    Ok(binomial(r + s - 4, r - 2))
}

/// Minimum input size `ES(r, s) + 1` as a machine integer, if it fits.
fn threshold(r: usize, s: usize) -> Result<(BigUint, Option<usize>), RamseyError> {
    let need = es_number(r, s)? + BigUint::one();
    let small = usize::try_from(&need).ok();
    Ok((need, small))
}

/// A complete directed graph: exactly one of `beats(x, y)`, `beats(y, x)`
/// for every `x ≠ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tournament {
    size: usize,
    beats: Vec<bool>,
}

impl Tournament {
    /// Tournament where `i` beats `j` (for `i < j`) iff `f(i, j)`.
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut beats = vec![false; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let w = f(i, j);
                beats[i * size + j] = w;
                beats[j * size + i] = !w;
            }
        }
        Tournament { size, beats }
    }

    /// Validates an explicit relation.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self, RamseyError> {
        let size = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size || row[i] {
                return Err(RamseyError::NotATournament(i, i));
            }
            for j in i + 1..size {
                if row[j] == rows[j][i] {
                    return Err(RamseyError::NotATournament(i, j));
                }
            }
        }
        Ok(Tournament { size, beats: rows.iter().flatten().copied().collect() })
    }

    pub fn random(size: usize, rng: &mut impl Rng) -> Self {
        let mut beats = vec![false; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let w = rng.gen_bool(0.5);
                beats[i * size + j] = w;
                beats[j * size + i] = !w;
            }
        }
        Tournament { size, beats }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn beats(&self, x: usize, y: usize) -> bool {
        self.beats[x * self.size + y]
    }
}

/// A transitive sub-tournament with every earlier node beating every later
/// one, of size at least `1 + ⌊log₂ size⌋`.
///
/// Repeatedly takes the lowest-index remaining node and keeps the larger of
/// its out- and in-neighbourhoods (out on ties).
pub fn transitive_subtournament(t: &Tournament) -> Vec<usize> {
    let mut front = Vec::new();
    let mut back = Vec::new();
    let mut rest: Vec<usize> = (0..t.size()).collect();
    while let Some((&v, others)) = rest.split_first() {
        let (out, inn): (Vec<usize>, Vec<usize>) = others.iter().partition(|&&u| t.beats(v, u));
        if out.len() >= inn.len() {
            front.push(v);
            rest = out;
        } else {
            back.push(v);
            rest = inn;
        }
    }
    front.extend(back.into_iter().rev());
    front
}

pub fn is_transitive_order(t: &Tournament, order: &[usize]) -> bool {
    order.iter().enumerate().all(|(k, &x)| order[k + 1..].iter().all(|&y| t.beats(x, y)))
}

/// `1 + ⌊log₂ n⌋` for `n ≥ 1`.
pub fn log_bound(n: usize) -> usize {
    1 + (usize::BITS - 1 - n.max(1).leading_zeros()) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CupCapKind {
    Cup,
    Cap,
}

impl CupCapKind {
    fn turn(self) -> Orientation {
        match self {
            CupCapKind::Cup => Orientation::Ccw,
            CupCapKind::Cap => Orientation::Cw,
        }
    }
}

/// Indices into the caller's input, ordered by x-coordinate (or slope).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupCapResult {
    pub kind: CupCapKind,
    pub indices: Vec<usize>,
}

/// Whether `indices` (in increasing x order) form a cup or cap of `pts`:
/// every interior point lies strictly below (cup) or above (cap) the line
/// through its neighbours.
pub fn forms<T: Scalar>(kind: CupCapKind, pts: &[Point<T>], indices: &[usize]) -> bool {
    indices.windows(2).all(|w| pts[w[0]].x < pts[w[1]].x)
        && indices.windows(3).all(|w| orientation(&pts[w[0]], &pts[w[1]], &pts[w[2]]) == kind.turn())
}

/// Longest cup or cap over the x-sorted points, lexicographically smallest
/// among the longest, as positions in the sorted order.
fn longest_chain<T: Scalar>(sorted: &[&Point<T>], kind: CupCapKind) -> Vec<usize> {
    let n = sorted.len();
    if n < 2 {
        return (0..n).collect();
    }
    let turn = kind.turn();
    let ok = |a: usize, b: usize, c: usize| orientation(sorted[a], sorted[b], sorted[c]) == turn;
    // len[i][j]: longest chain whose first two elements are i < j.
    let mut len = vec![vec![0usize; n]; n];
    for j in (0..n).rev() {
        for i in 0..j {
            len[i][j] = 2 + (j + 1..n).filter(|&k| ok(i, j, k)).map(|k| len[j][k] - 1).max().unwrap_or(0);
        }
    }
    let best = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| len[i][j]).max().unwrap();
    let (i, j) = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| len[i][j] == best).unwrap();
    let mut chain = vec![i, j];
    while chain.len() < best {
        let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
        let need = best - chain.len() + 1;
        let k = (b + 1..n).find(|&k| ok(a, b, k) && len[b][k] == need).unwrap();
        chain.push(k);
    }
    chain
}

fn check_points<T: Scalar>(pts: &[Point<T>], needed: &BigUint, small: Option<usize>) -> Result<Vec<usize>, RamseyError> {
    if small.is_none_or(|k| pts.len() < k) {
        return Err(RamseyError::TooFew { needed: needed.to_string(), found: pts.len() });
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].x.cmp(&pts[b].x));
    if let Some(w) = order.windows(2).find(|w| pts[w[0]].x == pts[w[1]].x) {
        return Err(RamseyError::DuplicateX { first: w[0].min(w[1]), second: w[0].max(w[1]) });
    }
    if let Some((i, j, k)) = Frame::new(pts).first_collinear_triple() {
        return Err(RamseyError::Collinear(i, j, k));
    }
    Ok(order)
}

/// An `r`-cup or an `s`-cap among `pts` (cup preferred), which must number
/// at least `ES(r, s) + 1`, have distinct x-coordinates and contain no three
/// collinear points.
pub fn find_cup_or_cap_points<T: Scalar>(pts: &[Point<T>], r: usize, s: usize) -> Result<CupCapResult, RamseyError> {
    let (needed, small) = threshold(r, s)?;
    let order = check_points(pts, &needed, small)?;
    let found = longest_cup_or_cap(pts, &order, r, s).ok_or(RamseyError::GuaranteeViolated { r, s })?;
    debug_assert!(forms(found.kind, pts, &found.indices));
    Ok(found)
}

fn longest_cup_or_cap<T: Scalar>(pts: &[Point<T>], order: &[usize], r: usize, s: usize) -> Option<CupCapResult> {
    let sorted: Vec<&Point<T>> = order.iter().map(|&i| &pts[i]).collect();
    for (kind, want) in [(CupCapKind::Cup, r), (CupCapKind::Cap, s)] {
        let chain = longest_chain(&sorted, kind);
        if chain.len() >= want {
            return Some(CupCapResult { kind, indices: chain[..want].iter().map(|&k| order[k]).collect() });
        }
    }
    None
}

/// The longest cup and the longest cap of a point set in general position,
/// without any size requirement. Indices into `pts`, x-ordered.
pub fn longest_cup_and_cap<T: Scalar>(pts: &[Point<T>]) -> Result<(Vec<usize>, Vec<usize>), RamseyError> {
    let order = check_points(pts, &BigUint::one(), Some(0))?;
    let sorted: Vec<&Point<T>> = order.iter().map(|&i| &pts[i]).collect();
    let map = |c: Vec<usize>| c.into_iter().map(|k| order[k]).collect();
    Ok((map(longest_chain(&sorted, CupCapKind::Cup)), map(longest_chain(&sorted, CupCapKind::Cap))))
}

/// The non-vertical line `y = slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Line<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> Line<T> {
    pub fn new(slope: T, intercept: T) -> Self {
        Line { slope, intercept }
    }

    pub fn dual(&self) -> Point<T> {
        Point::new(self.slope.clone(), -self.intercept.clone())
    }

    pub fn at(&self, x: &T) -> T {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }
}

/// Whether `indices` (in increasing slope order) form a cup or cap of lines:
/// the neighbours of every interior line meet strictly below (cup) or above
/// (cap) it. Evaluated directly, without duality.
pub fn lines_form<T: Scalar>(kind: CupCapKind, lines: &[Line<T>], indices: &[usize]) -> bool {
    indices.windows(2).all(|w| lines[w[0]].slope < lines[w[1]].slope)
        && indices.windows(3).all(|w| {
            let (l0, l1, l2) = (&lines[w[0]], &lines[w[1]], &lines[w[2]]);
            let x = (l2.intercept.clone() - l0.intercept.clone()) / (l0.slope.clone() - l2.slope.clone());
            let meet = l0.at(&x);
            let mid = l1.at(&x);
            match kind {
                CupCapKind::Cup => meet < mid,
                CupCapKind::Cap => meet > mid,
            }
        })
}

/// An `r`-cup or `s`-cap of lines, through the dual point set.
pub fn find_cup_or_cap_lines<T: Scalar>(lines: &[Line<T>], r: usize, s: usize) -> Result<CupCapResult, RamseyError> {
    let duals: Vec<Point<T>> = lines.iter().map(Line::dual).collect();
    let found = find_cup_or_cap_points(&duals, r, s)?;
    if !lines_form(found.kind, lines, &found.indices) {
        return Err(RamseyError::GuaranteeViolated { r, s });
    }
    Ok(found)
}

/// Longest cup and longest cap of lines, without a size requirement.
pub fn longest_line_cup_and_cap<T: Scalar>(lines: &[Line<T>]) -> Result<(Vec<usize>, Vec<usize>), RamseyError> {
    let duals: Vec<Point<T>> = lines.iter().map(Line::dual).collect();
    longest_cup_and_cap(&duals)
}

/// Positions of a longest increasing and a longest decreasing subsequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monotone {
    pub increasing: Vec<usize>,
    pub decreasing: Vec<usize>,
}

impl Monotone {
    pub fn longest(&self) -> usize {
        self.increasing.len().max(self.decreasing.len())
    }
}

fn longest_chain_by<T>(seq: &[T], before: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let mut tails: Vec<usize> = Vec::new();
    let mut prev: Vec<Option<usize>> = vec![None; seq.len()];
    for i in 0..seq.len() {
        let pos = tails.partition_point(|&t| before(&seq[t], &seq[i]));
        prev[i] = pos.checked_sub(1).map(|p| tails[p]);
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(i);
        cur = prev[i];
    }
    out.reverse();
    out
}

/// Longest strictly increasing and strictly decreasing subsequences of a
/// sequence of distinct values, by patience sorting.
pub fn longest_monotone<T: Ord>(seq: &[T]) -> Result<Monotone, RamseyError> {
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by(|&a, &b| seq[a].cmp(&seq[b]).then(a.cmp(&b)));
    if let Some(w) = order.windows(2).find(|w| seq[w[0]] == seq[w[1]]) {
        return Err(RamseyError::DuplicateEntries { first: w[0], second: w[1] });
    }
    Ok(Monotone {
        increasing: longest_chain_by(seq, |a, b| a < b),
        decreasing: longest_chain_by(seq, |a, b| a > b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Point2, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn es_examples() {
        assert_eq!(es_number(2, 2).unwrap(), BigUint::from(1u8));
        assert_eq!(es_number(5, 5).unwrap(), BigUint::from(20u8));
        assert_eq!((es_number(37, 37).unwrap() + 1u8).to_string(), "112186277816662845433");
        assert_eq!(es_number(1, 4), Err(RamseyError::DomainError { r: 1, s: 4 }));
        assert_eq!(es_number(4, 7), es_number(7, 4));
    }

    #[test]
    fn three_cycle() {
        let t = Tournament::from_matrix(&[vec![false, true, false], vec![false, false, true], vec![true, false, false]]).unwrap();
        let order = transitive_subtournament(&t);
        assert_eq!(order.len(), 2);
        assert!(is_transitive_order(&t, &order));
    }

    #[test]
    fn transitive_input_is_recovered() {
        let t = Tournament::from_fn(8, |_, _| true);
        assert_eq!(transitive_subtournament(&t), (0..8).collect::<Vec<_>>());
        let rev = Tournament::from_fn(8, |_, _| false);
        let order = transitive_subtournament(&rev);
        assert!(order.len() >= 4 && is_transitive_order(&rev, &order));
    }

    #[test]
    fn rejects_non_tournaments() {
        assert!(Tournament::from_matrix(&[vec![false, true], vec![true, false]]).is_err());
    }

    #[test]
    fn log_bound_values() {
        assert_eq!(log_bound(1), 1);
        assert_eq!(log_bound(3), 2);
        assert_eq!(log_bound(32), 6);
        assert_eq!(log_bound(33), 6);
    }

    fn parabola(ts: &[i64], sign: i64) -> Vec<Point2> {
        ts.iter().map(|&t| Point::from_ints(t, sign * t * t)).collect()
    }

    #[test]
    fn parabola_cup() {
        let pts = parabola(&[3, -2, 0, 1, -1], 1);
        let r = find_cup_or_cap_points(&pts, 5, 3).unwrap();
        assert_eq!(r, CupCapResult { kind: CupCapKind::Cup, indices: vec![1, 4, 2, 3, 0] });
        let r = find_cup_or_cap_points(&parabola(&[0, 1, 2, 3, 4], -1), 5, 3).unwrap();
        assert_eq!(r.kind, CupCapKind::Cap);
        assert_eq!(r.indices.len(), 3);
    }

    #[test]
    fn random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let pts: Vec<Point2> = (0..3).map(|i| Point::from_ints(i * 10 + rng.gen_range(0..5), rng.gen_range(-50..50))).collect();
            match find_cup_or_cap_points(&pts, 3, 3) {
                Ok(r) => assert!(forms(r.kind, &pts, &r.indices)),
                Err(e) => assert!(matches!(e, RamseyError::Collinear(..))),
            }
        }
    }

    #[test]
    fn point_preconditions() {
        let pts = parabola(&[0, 1], 1);
        assert!(matches!(find_cup_or_cap_points(&pts, 3, 3), Err(RamseyError::TooFew { .. })));
        let dup: Vec<Point2> = vec![Point::from_ints(0, 0), Point::from_ints(0, 1), Point::from_ints(2, 5)];
        assert_eq!(find_cup_or_cap_points(&dup, 3, 3), Err(RamseyError::DuplicateX { first: 0, second: 1 }));
        let col: Vec<Point2> = vec![Point::from_ints(0, 0), Point::from_ints(1, 1), Point::from_ints(2, 2)];
        assert_eq!(find_cup_or_cap_points(&col, 3, 3), Err(RamseyError::Collinear(0, 1, 2)));
    }

    #[test]
    fn tangents_to_upward_parabola_form_a_cup() {
        // Tangent to y = x² at t: y = 2t·x − t².
        let lines: Vec<Line<Rational>> =
            [-2i64, 0, 1, 3, 4].iter().map(|&t| Line::new(Rational::from_int(2 * t), Rational::from_int(-t * t))).collect();
        let r = find_cup_or_cap_lines(&lines, 5, 3).unwrap();
        assert_eq!(r.kind, CupCapKind::Cup);
        assert_eq!(r.indices, vec![0, 1, 2, 3, 4]);
        let down: Vec<Line<Rational>> = lines.iter().map(|l| Line::new(-l.slope.clone(), -l.intercept.clone())).collect();
        let r = find_cup_or_cap_lines(&down, 5, 3).unwrap();
        assert_eq!(r.kind, CupCapKind::Cap);
    }

    #[test]
    fn monotone_examples() {
        let m = longest_monotone(&[5, 1, 4, 2, 3]).unwrap();
        assert_eq!(m.increasing, vec![1, 3, 4]);
        assert_eq!(m.decreasing.len(), 3);
        assert!(m.decreasing.windows(2).all(|w| [5, 1, 4, 2, 3][w[0]] > [5, 1, 4, 2, 3][w[1]]));
        let sorted: Vec<i32> = (0..9).collect();
        assert_eq!(longest_monotone(&sorted).unwrap().increasing.len(), 9);
        assert_eq!(longest_monotone(&[1, 2, 1]), Err(RamseyError::DuplicateEntries { first: 0, second: 2 }));
    }
}
