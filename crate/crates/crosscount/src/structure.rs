//! Quadrant walks, associated pairs of consecutive sides, hooking, the axis
//! property, and an auditor for the hooking exclusion between two pairs.
//!
//! Two sides `s`, `t` (consecutive or avoiding) cut the plane into four
//! quadrants, `I = Cone(s, t)` and then `II`, `III`, `IV` in rotational
//! order. Every side of a polygon that meets `s` or `t` moves between two
//! quadrants, which makes the polygon a closed walk in a fixed five-edge
//! multigraph `G₀`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::disjointness::{DisjointnessGraph, Side};
use crate::geom::{cone_of, is_avoiding, orientation, segments_intersect, shared_endpoint, GeomError, Point, Scalar, Segment};
use crate::polygon::SimplePolygon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];

    /// Quadrant of a point from its coordinate signs in the basis
    /// (direction of `s`, direction of `t`).
    fn from_signs(alpha: i8, beta: i8) -> Option<Quadrant> {
        match (alpha, beta) {
            (1, 1) => Some(Quadrant::I),
            (-1, 1) => Some(Quadrant::II),
            (-1, -1) => Some(Quadrant::III),
            (1, -1) => Some(Quadrant::IV),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    /// The side meets `s` (and not `t`).
    A,
    /// The side meets `t` (and not `s`).
    B,
    /// Moves between II and IV; which of `s`, `t` is met is not recorded.
    Star,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "a",
            Label::B => "b",
            Label::Star => "*",
        })
    }
}

/// The five edges of `G₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum G0Edge {
    E1,
    E2,
    E3,
    E4,
    E5,
}

impl G0Edge {
    pub const ALL: [G0Edge; 5] = [G0Edge::E1, G0Edge::E2, G0Edge::E3, G0Edge::E4, G0Edge::E5];

    pub fn ends(self) -> (Quadrant, Quadrant) {
        use Quadrant::*;
        match self {
            G0Edge::E1 => (II, IV),
            G0Edge::E2 => (I, IV),
            G0Edge::E3 => (I, II),
            G0Edge::E4 | G0Edge::E5 => (I, III),
        }
    }

    pub fn label(self) -> Label {
        match self {
            G0Edge::E1 => Label::Star,
            G0Edge::E2 | G0Edge::E4 => Label::A,
            G0Edge::E3 | G0Edge::E5 => Label::B,
        }
    }

    /// The far end when leaving `from`, if the edge is incident to it.
    pub fn other_end(self, from: Quadrant) -> Option<Quadrant> {
        let (x, y) = self.ends();
        if from == x {
            Some(y)
        } else if from == y {
            Some(x)
        } else {
            None
        }
    }
}

/// One traversed edge: polygon side `side` goes from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WalkStep {
    pub side: usize,
    pub from: Quadrant,
    pub to: Quadrant,
    pub edge: G0Edge,
}

/// A closed walk in `G₀`, one step per polygon side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G0Walk {
    pub steps: Vec<WalkStep>,
}

impl G0Walk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.steps.iter().map(|s| s.edge.label()).collect()
    }

    pub fn is_closed(&self) -> bool {
        let k = self.steps.len();
        k > 0 && (0..k).all(|i| self.steps[i].to == self.steps[(i + 1) % k].from)
    }

    /// Positions `k` such that steps `k` and `k + 1` (cyclically) carry the
    /// labels `a` and `b` in some order.
    pub fn ab_positions(&self) -> Vec<usize> {
        let labels = self.labels();
        ab_positions(&labels)
    }
}

fn ab_positions(labels: &[Label]) -> Vec<usize> {
    let k = labels.len();
    (0..k)
        .filter(|&i| {
            matches!((labels[i], labels[(i + 1) % k]), (Label::A, Label::B) | (Label::B, Label::A))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("segments do not span a cone: {0}")]
    NotConeable(GeomError),
    #[error("vertex {vertex} lies on the line through one of the two segments")]
    VertexOnLine { vertex: usize },
    #[error("side {side} meets neither segment")]
    SideMissesBoth { side: usize },
    #[error("sides {first} and {second} lie in the same component")]
    SameComponent { first: usize, second: usize },
    #[error("sides {first} and {second} are neither consecutive nor avoiding")]
    NotAdmissible { first: usize, second: usize },
    #[error("no associated pair found for sides {first} and {second}")]
    NotFound { first: usize, second: usize },
    #[error("associated pair for sides {first} and {second} is neither hooking nor hooked")]
    NoHooking { first: usize, second: usize },
    #[error("axis is degenerate: the two apexes coincide")]
    DegenerateAxis,
}

/// Maps every side of `q` to an edge of `G₀` relative to the quadrants of
/// `s` and `t`. Each side must meet `s` or `t`.
pub fn classify_walk<T: Scalar>(q: &SimplePolygon<T>, s: &Segment<T>, t: &Segment<T>) -> Result<G0Walk, StructureError> {
    let cone = cone_of(s, t).map_err(StructureError::NotConeable)?;
    let quadrants = q
        .vertices()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (alpha, beta) = cone.basis_signs(v);
            Quadrant::from_signs(alpha, beta).ok_or(StructureError::VertexOnLine { vertex: k })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = q.len();
    let mut steps = Vec::with_capacity(n);
    for (j, side) in q.sides().iter().enumerate() {
        let meets_s = segments_intersect(side, s);
        let meets_t = segments_intersect(side, t);
        if !meets_s && !meets_t {
            return Err(StructureError::SideMissesBoth { side: j });
        }
        let (from, to) = (quadrants[j], quadrants[(j + 1) % n]);
        use Quadrant::*;
        let edge = match (from.min(to), from.max(to)) {
            (I, II) => G0Edge::E3,
            (I, IV) => G0Edge::E2,
            (II, IV) => G0Edge::E1,
            // A side from I to III passes through IV (meeting only s) or
            // through II (meeting only t).
            (I, III) if meets_s => G0Edge::E4,
            (I, III) => G0Edge::E5,
            // Any other transition stays off both segments; unreachable
            // once the side is known to meet one of them.
            _ => return Err(StructureError::SideMissesBoth { side: j }),
        };
        steps.push(WalkStep { side: j, from, to, edge });
    }
    Ok(G0Walk { steps })
}

/// Result of the exhaustive odd-walk check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkCensus {
    /// `(length, closed walks of that length)` for every odd length checked.
    pub walks_per_length: Vec<(usize, u64)>,
    /// The graph obtained by splitting I and III by label is a path.
    pub unfolded_is_path: bool,
    pub unfolded_is_bipartite: bool,
}

/// A closed walk as a start node and a sequence of edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RawWalk {
    pub start: Quadrant,
    pub edges: Vec<G0Edge>,
}

/// Enumerates every closed walk in `G₀` of odd length `3 ≤ L ≤ max_len`
/// (walks with a distinguished start and direction) and checks that each has
/// two cyclically consecutive edges labelled `a` and `b`.
pub fn check_odd_walks_g0(max_len: usize) -> Result<WalkCensus, RawWalk> {
    let mut walks_per_length = Vec::new();
    for len in (1..=max_len).filter(|l| l % 2 == 1) {
        let mut count = 0u64;
        for start in Quadrant::ALL {
            let mut path = Vec::with_capacity(len);
            enumerate_closed(start, start, len, &mut path, &mut |edges| {
                count += 1;
                let labels: Vec<Label> = edges.iter().map(|e| e.label()).collect();
                if ab_positions(&labels).is_empty() {
                    Err(RawWalk { start, edges: edges.to_vec() })
                } else {
                    Ok(())
                }
            })?;
        }
        walks_per_length.push((len, count));
    }
    let (unfolded_is_path, unfolded_is_bipartite) = unfolded_shape();
    Ok(WalkCensus { walks_per_length, unfolded_is_path, unfolded_is_bipartite })
}

fn enumerate_closed<E>(
    start: Quadrant,
    at: Quadrant,
    remaining: usize,
    path: &mut Vec<G0Edge>,
    visit: &mut impl FnMut(&[G0Edge]) -> Result<(), E>,
) -> Result<(), E> {
    if remaining == 0 {
        return if at == start { visit(path) } else { Ok(()) };
    }
    for e in G0Edge::ALL {
        if let Some(next) = e.other_end(at) {
            path.push(e);
            enumerate_closed(start, next, remaining - 1, path, visit)?;
            path.pop();
        }
    }
    Ok(())
}

/// Builds `G₀′` (I and III split by edge label) and reports whether it is a
/// path and whether it is bipartite.
fn unfolded_shape() -> (bool, bool) {
    // Nodes: II, IV, I_a, I_b, III_a, III_b.
    let node = |q: Quadrant, l: Label| -> usize {
        match (q, l) {
            (Quadrant::II, _) => 0,
            (Quadrant::IV, _) => 1,
            (Quadrant::I, Label::A) => 2,
            (Quadrant::I, _) => 3,
            (Quadrant::III, Label::A) => 4,
            (Quadrant::III, _) => 5,
        }
    };
    let edges: Vec<(usize, usize)> = G0Edge::ALL
        .iter()
        .map(|e| {
            let (x, y) = e.ends();
            (node(x, e.label()), node(y, e.label()))
        })
        .collect();
    let v = 6;
    let mut adj = vec![Vec::new(); v];
    for &(x, y) in &edges {
        adj[x].push(y);
        adj[y].push(x);
    }
    let mut color = vec![None; v];
    let mut bipartite = true;
    let mut components = 0;
    for s in 0..v {
        if color[s].is_some() {
            continue;
        }
        components += 1;
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!color[x].unwrap());
                        stack.push(y);
                    }
                    Some(c) if c == color[x].unwrap() => bipartite = false,
                    _ => {}
                }
            }
        }
    }
    let is_path = components == 1 && edges.len() == v - 1 && adj.iter().all(|a| a.len() <= 2);
    (is_path, bipartite)
}

/// Number of closed walks of length `len` in `G₀`, as the trace of the
/// `len`-th power of its adjacency matrix.
pub fn closed_walk_count(len: usize) -> u64 {
    let mut adj = [[0u64; 4]; 4];
    for e in G0Edge::ALL {
        let (x, y) = e.ends();
        adj[x as usize][y as usize] += 1;
        adj[y as usize][x as usize] += 1;
    }
    let mut power = [[0u64; 4]; 4];
    for (i, row) in power.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..len {
        let mut next = [[0u64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|k| power[i][k] * adj[k][j]).sum();
            }
        }
        power = next;
    }
    (0..4).map(|i| power[i][i]).sum()
}

/// A pair of sides `q_j, q_{j + dir}` associated to the sides `p_a, p_b`:
/// `p_a` misses `q_j` and meets `q_{j + dir}`, `p_b` misses `q_{j + dir}`
/// and meets `q_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociatedPair<T> {
    pub p_index: usize,
    pub p_partner: usize,
    pub q_index: usize,
    pub q_direction: i8,
    /// `I(q_j, q_{j±1}) ∈ Cone(p_a, p_b)`.
    pub hooking_p: bool,
    /// `I(p_a, p_b) ∈ Cone(q_j, q_{j±1})`.
    pub hooking_q: bool,
    #[serde(skip)]
    pub apex_p: Point<T>,
    #[serde(skip)]
    pub apex_q: Point<T>,
}

impl<T: Scalar> AssociatedPair<T> {
    pub fn q_partner(&self, n: usize) -> usize {
        (self.q_index as isize + self.q_direction as isize).rem_euclid(n as isize) as usize
    }

    /// Two points spanning the axis line.
    pub fn axis(&self) -> (&Point<T>, &Point<T>) {
        (&self.apex_p, &self.apex_q)
    }
}

/// Fills in the hooking flags and apexes for a candidate `(j, dir)`.
fn evaluate_pair<T: Scalar>(
    p: &SimplePolygon<T>,
    a: usize,
    b: usize,
    q: &SimplePolygon<T>,
    j: usize,
    dir: i8,
) -> Result<AssociatedPair<T>, StructureError> {
    let (pa, pb) = (&p.sides()[a], &p.sides()[b]);
    let (qj, qk) = (q.side(j as isize), q.side(j as isize + dir as isize));
    let cone_p = cone_of(pa, pb).map_err(StructureError::NotConeable)?;
    let cone_q = cone_of(qj, qk).map_err(StructureError::NotConeable)?;
    let apex_q = shared_endpoint(qj, qk).expect("consecutive sides share a vertex");
    let apex_p = cone_p.apex().clone();
    Ok(AssociatedPair {
        p_index: a,
        p_partner: b,
        q_index: j,
        q_direction: dir,
        hooking_p: cone_p.contains(&apex_q, false),
        hooking_q: cone_q.contains(&apex_p, false),
        apex_p,
        apex_q,
    })
}

fn check_admissible<T: Scalar>(
    p: &SimplePolygon<T>,
    a: usize,
    b: usize,
    g: &DisjointnessGraph,
) -> Result<(), StructureError> {
    if g.component(Side::p(a)) == g.component(Side::p(b)) {
        return Err(StructureError::SameComponent { first: a, second: b });
    }
    if !p.consecutive(a, b) && !is_avoiding(&p.sides()[a], &p.sides()[b]) {
        return Err(StructureError::NotAdmissible { first: a, second: b });
    }
    Ok(())
}

/// The associated pair of `p_i, p_{i+1}` found from the quadrant walk of
/// `q`: the first cyclic position carrying labels `a`, `b`, with `q_j` the
/// `b`-labelled side and the direction pointing at its `a`-labelled
/// neighbour.
pub fn find_associated_pair<T: Scalar>(
    p: &SimplePolygon<T>,
    i: usize,
    q: &SimplePolygon<T>,
    g: &DisjointnessGraph,
) -> Result<AssociatedPair<T>, StructureError> {
    find_associated_pair_for(p, i, (i + 1) % p.len(), q, g)
}

/// As [`find_associated_pair`] for two explicit sides `p_a`, `p_b`, which
/// must be consecutive or avoiding and lie in different components.
pub fn find_associated_pair_for<T: Scalar>(
    p: &SimplePolygon<T>,
    a: usize,
    b: usize,
    q: &SimplePolygon<T>,
    g: &DisjointnessGraph,
) -> Result<AssociatedPair<T>, StructureError> {
    check_admissible(p, a, b, g)?;
    let walk = classify_walk(q, &p.sides()[a], &p.sides()[b])?;
    let n = q.len();
    let k = *walk.ab_positions().first().ok_or(StructureError::NotFound { first: a, second: b })?;
    let (first, second) = (walk.steps[k], walk.steps[(k + 1) % n]);
    let (j, dir) = if first.edge.label() == Label::B { (first.side, 1) } else { (second.side, -1) };
    let pair = evaluate_pair(p, a, b, q, j, dir)?;
    if !pair.hooking_p && !pair.hooking_q {
        return Err(StructureError::NoHooking { first: a, second: b });
    }
    Ok(pair)
}

/// Every consecutive pair of `q` with the associated disjoint/meeting
/// pattern relative to `p_a`, `p_b`, found by direct intersection tests.
pub fn all_associated_pairs<T: Scalar>(
    p: &SimplePolygon<T>,
    a: usize,
    b: usize,
    q: &SimplePolygon<T>,
) -> Result<Vec<AssociatedPair<T>>, StructureError> {
    let (pa, pb) = (&p.sides()[a], &p.sides()[b]);
    let n = q.len();
    let mut out = Vec::new();
    for j in 0..n {
        for dir in [1i8, -1] {
            let qj = q.side(j as isize);
            let qk = q.side(j as isize + dir as isize);
            if !segments_intersect(pa, qj) && !segments_intersect(pb, qk) && segments_intersect(pa, qk) && segments_intersect(pb, qj) {
                out.push(evaluate_pair(p, a, b, q, j, dir)?);
            }
        }
    }
    Ok(out)
}

/// Whether the axis strictly separates `p_a`, `q_{j±1}` from `p_b`, `q_j`.
pub fn check_axis<T: Scalar>(ap: &AssociatedPair<T>, p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Result<bool, StructureError> {
    let (o, d) = ap.axis();
    if o == d {
        return Err(StructureError::DegenerateAxis);
    }
    let n = q.len();
    let side_sign = |seg: &Segment<T>| -> Option<i8> {
        let signs: Vec<i8> = [seg.a(), seg.b()]
            .into_iter()
            .filter(|v| *v != o && *v != d)
            .map(|v| orientation(o, d, v).sign())
            .collect();
        match signs.as_slice() {
            [s] if *s != 0 => Some(*s),
            [s, t] if *s != 0 && s == t => Some(*s),
            _ => None,
        }
    };
    let group1 = [&p.sides()[ap.p_index], &q.sides()[ap.q_partner(n)]];
    let group2 = [&p.sides()[ap.p_partner], &q.sides()[ap.q_index]];
    let Some(sigma) = side_sign(group1[0]) else { return Ok(false) };
    let ok = group1.iter().all(|s| side_sign(s) == Some(sigma)) && group2.iter().all(|s| side_sign(s) == Some(-sigma));
    Ok(ok)
}

/// Rechecks an associated pair from scratch: the miss/meet pattern, the
/// hooking flags recomputed from both cones (at least one must hold), and
/// axis separation.
pub fn verify_associated_pair<T: Scalar>(ap: &AssociatedPair<T>, p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> bool {
    let n = q.len();
    let (pa, pb) = (&p.sides()[ap.p_index], &p.sides()[ap.p_partner]);
    let (qj, qk) = (&q.sides()[ap.q_index], &q.sides()[ap.q_partner(n)]);
    let pattern = !segments_intersect(pa, qj) && segments_intersect(pa, qk) && segments_intersect(pb, qj) && !segments_intersect(pb, qk);
    let (Ok(cp), Ok(cq)) = (cone_of(pa, pb), cone_of(qj, qk)) else { return false };
    let hooking_p = cp.contains(cq.apex(), false);
    let hooking_q = cq.contains(cp.apex(), false);
    pattern
        && (hooking_p || hooking_q)
        && hooking_p == ap.hooking_p
        && hooking_q == ap.hooking_q
        && check_axis(ap, p, q) == Ok(true)
}

/// Hooking status of one eligible consecutive pair across all of its
/// associated pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub index: usize,
    pub associated: usize,
    pub hooking: bool,
    pub hooked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma2Violation {
    /// Which polygon plays the role of `P` in the failing run.
    pub role: crate::geom::Role,
    pub first: PairClass,
    pub second: PairClass,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    /// Pairs of consecutive pairs with four distinct components examined,
    /// summed over both roles.
    pub pairs_examined: usize,
    pub violations: Vec<Lemma2Violation>,
}

impl Lemma2Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that no two consecutive pairs whose four sides lie in four
/// distinct components are both hooking or both hooked, with respect to any
/// of their associated pairs. Runs with `P` and with `Q` in the first role.
pub fn audit_lemma2<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>, g: &DisjointnessGraph) -> Result<Lemma2Report, StructureError> {
    let mut report = Lemma2Report::default();
    audit_role(p, q, g, crate::geom::Role::P, &mut report)?;
    audit_role(q, p, &g.swapped(), crate::geom::Role::Q, &mut report)?;
    Ok(report)
}

fn audit_role<T: Scalar>(
    p: &SimplePolygon<T>,
    q: &SimplePolygon<T>,
    g: &DisjointnessGraph,
    role: crate::geom::Role,
    report: &mut Lemma2Report,
) -> Result<(), StructureError> {
    let m = p.len();
    let comp = |i: usize| g.component(Side::p(i % m));
    let mut classes = Vec::new();
    for i in (0..m).filter(|&i| comp(i) != comp(i + 1)) {
        let cands = all_associated_pairs(p, i, (i + 1) % m, q)?;
        if cands.is_empty() {
            return Err(StructureError::NotFound { first: i, second: (i + 1) % m });
        }
        classes.push(PairClass {
            index: i,
            associated: cands.len(),
            hooking: cands.iter().any(|c| c.hooking_p),
            hooked: cands.iter().any(|c| c.hooking_q),
        });
    }
    for (x, cx) in classes.iter().enumerate() {
        for cy in &classes[x + 1..] {
            let mut comps = [comp(cx.index), comp(cx.index + 1), comp(cy.index), comp(cy.index + 1)];
            comps.sort_unstable();
            if comps.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            report.pairs_examined += 1;
            if (cx.hooking && cy.hooking) || (cx.hooked && cy.hooked) {
                report.violations.push(Lemma2Violation { role, first: cx.clone(), second: cy.clone() });
            }
        }
    }
    Ok(())
}

/// Eligible consecutive pairs of `p`: indices `i` with `p_i`, `p_{i+1}` in
/// different components.
pub fn eligible_pairs(m: usize, g: &DisjointnessGraph) -> Vec<usize> {
    (0..m).filter(|&i| g.component(Side::p(i)) != g.component(Side::p((i + 1) % m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjointness::build_graph;
    use crate::polygon::validate_simple;
    use crate::Polygon;

    fn poly(v: &[(i64, i64)]) -> Polygon {
        validate_simple(v.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn odd_walks_up_to_thirteen() {
        let census = check_odd_walks_g0(13).unwrap();
        assert!(census.unfolded_is_path);
        assert!(census.unfolded_is_bipartite);
        for (len, count) in census.walks_per_length {
            assert_eq!(count, closed_walk_count(len), "length {len}");
        }
    }

    #[test]
    fn length_three_walks() {
        let census = check_odd_walks_g0(3).unwrap();
        assert_eq!(census.walks_per_length, vec![(1, 0), (3, closed_walk_count(3))]);
        assert!(closed_walk_count(3) > 0);
    }

    #[test]
    fn star_of_david_walk() {
        let p = poly(&[(0, 0), (6, 1), (2, 6)]);
        let q = poly(&[(1, 4), (3, -2), (6, 4)]);
        let walk = classify_walk(&q, &p.sides()[0], &p.sides()[1]).unwrap();
        assert_eq!(walk.len(), 3);
        assert!(walk.is_closed());
        assert!(!walk.ab_positions().is_empty());
    }

    #[test]
    fn walk_needs_every_side_to_meet() {
        let p = poly(&[(0, 0), (6, 1), (2, 6)]);
        let far = poly(&[(100, 7), (109, 2), (104, 13)]);
        assert!(matches!(
            classify_walk(&far, &p.sides()[0], &p.sides()[1]),
            Err(StructureError::SideMissesBoth { side: 0 })
        ));
    }

    #[test]
    fn associated_pair_in_star_of_david() {
        let p = poly(&[(0, 0), (6, 1), (2, 6)]);
        let q = poly(&[(1, 4), (3, -2), (6, 4)]);
        let g = build_graph(&p, &q).unwrap();
        for i in eligible_pairs(3, &g) {
            let ap = find_associated_pair(&p, i, &q, &g).unwrap();
            assert!(ap.hooking_p || ap.hooking_q);
            assert_eq!(check_axis(&ap, &p, &q), Ok(true));
            assert!(all_associated_pairs(&p, i, (i + 1) % 3, &q).unwrap().contains(&ap));
        }
        assert!(audit_lemma2(&p, &q, &g).unwrap().ok());
    }
}
