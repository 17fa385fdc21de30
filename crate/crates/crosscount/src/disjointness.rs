//! The disjointness graph of two polygons and the component-count bounds.
//!
//! Nodes are the sides of `P` (indices `0..m`) and of `Q` (indices
//! `m..m + n`); `p_i` and `q_j` are adjacent iff the closed segments are
//! disjoint.

use serde::Serialize;
use thiserror::Error;

use crate::geom::{check_general_position, GpViolation, Role, Scalar};
use crate::polygon::{contacts, PairMatrix, SimplePolygon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DisjointnessError {
    #[error("both polygons must have an odd number of sides (m={m}, n={n})")]
    ParityError { m: usize, n: usize },
    #[error("general position violated: {0}")]
    GeneralPosition(GpViolation),
}

/// A side of either polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Side {
    pub role: Role,
    pub index: usize,
}

impl Side {
    pub fn p(index: usize) -> Side {
        Side { role: Role::P, index }
    }

    pub fn q(index: usize) -> Side {
        Side { role: Role::Q, index }
    }
}

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessGraph {
    m: usize,
    n: usize,
    disjoint: PairMatrix,
    /// Component label per node: the smallest node index in the component.
    labels: Vec<usize>,
    component_count: usize,
}

impl DisjointnessGraph {
    /// Graph from an `m × n` matrix whose set entries are the disjoint pairs.
    pub fn from_disjoint_pairs(disjoint: PairMatrix) -> Self {
        let (m, n) = (disjoint.rows(), disjoint.cols());
        let mut uf = UnionFind::new(m + n);
        for (i, j) in disjoint.ones() {
            uf.union(i, m + j);
        }
        let mut smallest = vec![usize::MAX; m + n];
        for v in 0..m + n {
            let r = uf.find(v);
            smallest[r] = smallest[r].min(v);
        }
        let labels: Vec<usize> = (0..m + n).map(|v| smallest[uf.find(v)]).collect();
        let component_count = labels.iter().enumerate().filter(|&(v, &l)| v == l).count();
        DisjointnessGraph { m, n, disjoint, labels, component_count }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.disjoint.get(i, j)
    }

    pub fn edge_count(&self) -> usize {
        self.disjoint.count()
    }

    /// Edges `(i, j)` meaning `p_i ∩ q_j = ∅`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.disjoint.ones()
    }

    pub fn node(&self, side: Side) -> usize {
        match side.role {
            Role::P => side.index,
            Role::Q => self.m + side.index,
            Role::Probe => panic!("probe segments are not graph nodes"),
        }
    }

    pub fn side_of_node(&self, v: usize) -> Side {
        if v < self.m {
            Side::p(v)
        } else {
            Side::q(v - self.m)
        }
    }

    /// Component label of a side (the smallest node index in its component).
    pub fn component(&self, side: Side) -> usize {
        self.labels[self.node(side)]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Components as sorted node lists, ordered by label.
    pub fn components(&self) -> Vec<Vec<Side>> {
        let mut groups: Vec<(usize, Vec<Side>)> = Vec::new();
        for v in 0..self.m + self.n {
            let l = self.labels[v];
            match groups.iter_mut().find(|(label, _)| *label == l) {
                Some((_, g)) => g.push(self.side_of_node(v)),
                None => groups.push((l, vec![self.side_of_node(v)])),
            }
        }
        groups.into_iter().map(|(_, g)| g).collect()
    }

    /// The same graph with the roles of `P` and `Q` exchanged.
    pub fn swapped(&self) -> DisjointnessGraph {
        DisjointnessGraph::from_disjoint_pairs(self.disjoint.transposed())
    }
}

/// Builds the disjointness graph; general position is required.
pub fn build_graph<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Result<DisjointnessGraph, DisjointnessError> {
    check_general_position(p, q).map_err(DisjointnessError::GeneralPosition)?;
    Ok(graph_unchecked(p, q))
}

pub(crate) fn graph_unchecked<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> DisjointnessGraph {
    let touching = contacts(p, q).touching;
    let mut disjoint = PairMatrix::new(p.len(), q.len());
    for i in 0..p.len() {
        for j in 0..q.len() {
            disjoint.set(i, j, !touching.get(i, j));
        }
    }
    DisjointnessGraph::from_disjoint_pairs(disjoint)
}

pub fn component_count(g: &DisjointnessGraph) -> usize {
    g.component_count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub m: usize,
    pub n: usize,
    pub edges: usize,
    pub components: usize,
    pub crossings: usize,
    /// `edges ≥ m + n − components`, `crossings = mn − edges` and
    /// `crossings ≤ mn − (m + n) + components`.
    pub holds: bool,
}

/// Spanning-forest bound relating crossings to components.
pub fn check_component_bound<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Result<ComponentReport, DisjointnessError> {
    check_general_position(p, q).map_err(DisjointnessError::GeneralPosition)?;
    let g = graph_unchecked(p, q);
    let crossings = contacts(p, q).crossing.count();
    Ok(component_report(&g, crossings))
}

pub(crate) fn component_report(g: &DisjointnessGraph, crossings: usize) -> ComponentReport {
    let (m, n) = (g.m(), g.n());
    let edges = g.edge_count();
    let components = g.component_count();
    let holds = edges + components >= m + n && crossings + edges == m * n && crossings + m + n <= m * n + components;
    ComponentReport { m, n, edges, components, crossings, holds }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakBoundReport {
    pub m: usize,
    pub n: usize,
    pub components: usize,
    /// `(n + 5) / 2`.
    pub component_bound: usize,
    pub crossings: usize,
    /// `mn − (m + (n − 5) / 2)`.
    pub crossing_bound: i64,
    pub holds: bool,
}

/// Component and crossing bounds for odd/odd pairs.
///
/// Both are theorems, so `holds == false` means an implementation bug.
pub fn check_weak_bound<T: Scalar>(p: &SimplePolygon<T>, q: &SimplePolygon<T>) -> Result<WeakBoundReport, DisjointnessError> {
    let (m, n) = (p.len(), q.len());
    if m % 2 == 0 || n % 2 == 0 {
        return Err(DisjointnessError::ParityError { m, n });
    }
    check_general_position(p, q).map_err(DisjointnessError::GeneralPosition)?;
    let g = graph_unchecked(p, q);
    let crossings = contacts(p, q).crossing.count();
    Ok(weak_bound_report(&g, crossings))
}

pub(crate) fn weak_bound_report(g: &DisjointnessGraph, crossings: usize) -> WeakBoundReport {
    let (m, n) = (g.m(), g.n());
    let components = g.component_count();
    let component_bound = (n + 5) / 2;
    let crossing_bound = (m * n) as i64 - m as i64 - (n as i64 - 5) / 2;
    let holds = components <= component_bound && (crossings as i64) <= crossing_bound;
    WeakBoundReport { m, n, components, component_bound, crossings, crossing_bound, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::polygon::validate_simple;
    use crate::Polygon;

    fn poly(v: &[(i64, i64)]) -> Polygon {
        validate_simple(v.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn star_of_david_graph() {
        let p = poly(&[(0, 0), (6, 1), (2, 6)]);
        let q = poly(&[(1, 4), (3, -2), (6, 4)]);
        let g = build_graph(&p, &q).unwrap();
        assert_eq!(g.edge_count(), 3);
        // Brute force: each side of a Star-of-David triangle misses exactly
        // one side of the other, and those three edges form a matching.
        assert_eq!(g.component_count(), 3);
        let r = check_component_bound(&p, &q).unwrap();
        assert!(r.holds);
        assert_eq!(r.crossings, 6);
    }

    #[test]
    fn far_apart_is_complete_bipartite() {
        let p = poly(&[(0, 0), (3, 1), (1, 4)]);
        let q = poly(&[(100, 7), (109, 3), (105, 14), (101, 12)]);
        let g = build_graph(&p, &q).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.component_count(), 1);
        assert_eq!(g.component(Side::q(3)), 0);
    }

    #[test]
    fn labels_are_smallest_member() {
        let mut d = PairMatrix::new(2, 3);
        d.set(1, 2, true);
        let g = DisjointnessGraph::from_disjoint_pairs(d);
        assert_eq!(g.component_count(), 4);
        assert_eq!(g.component(Side::q(2)), 1);
        assert_eq!(g.component(Side::q(0)), 2);
        assert_eq!(g.swapped().component(Side::p(2)), 2);
        assert_eq!(g.components().len(), 4);
    }

    #[test]
    fn weak_bound_needs_odd_sizes() {
        let p = poly(&[(0, 0), (3, 1), (1, 4)]);
        let q = poly(&[(100, 7), (109, 3), (105, 14), (101, 12)]);
        assert_eq!(check_weak_bound(&p, &q), Err(DisjointnessError::ParityError { m: 3, n: 4 }));
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 3));
        assert!(uf.union(3, 4));
        assert!(!uf.union(0, 4));
        assert_eq!(uf.find(4), uf.find(0));
        assert_ne!(uf.find(1), uf.find(0));
    }
}
