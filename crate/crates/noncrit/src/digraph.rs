//! Core digraph representation: simple directed graphs without loops or
//! multiple arcs, adjacency-based degrees, strong-connectivity primitives,
//! and degree-sum hypothesis classification.
//!
//! The degree convention is central to everything downstream: `degree(v)` is
//! the number of *distinct vertices adjacent to* `v`. A neighbor connected by
//! arcs in both directions is counted once. It is *not* in-degree plus
//! out-degree.

use std::fmt;

use thiserror::Error;

/// Index of a vertex; vertices are always the dense range `0..n`.
pub type VertexId = usize;

/// Errors produced while building or querying digraphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop rejected: arc ({0}, {0}) is not allowed")]
    LoopRejected(VertexId),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(VertexId, VertexId),
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: VertexId, n: usize },
    #[error("digraph must have at least one vertex")]
    NoVertices,
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("digraph has {0} vertices; at least 4 are required")]
    TooSmall(usize),
    #[error("vertex set is empty")]
    EmptySet,
}

/// A set of vertices of a fixed universe `0..n`, stored as a bitset.
///
/// For `n <= 64` this is a single machine word; larger universes spill into
/// additional words with identical behavior.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    blocks: Vec<u64>,
}

impl VertexSet {
    /// The empty set over the universe `0..n`.
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    /// The full universe `0..n`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for b in 0..s.blocks.len() {
            s.blocks[b] = !0;
        }
        let tail = n % 64;
        if tail != 0 {
            *s.blocks.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        s
    }

    pub fn singleton(n: usize, v: VertexId) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// Size of the universe this set lives in (not the member count).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: VertexId) {
        assert!(v < self.n, "vertex {v} out of range for universe {}", self.n);
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: VertexId) {
        assert!(v < self.n, "vertex {v} out of range for universe {}", self.n);
        self.blocks[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.n && self.blocks[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<VertexId> {
        for (i, &b) in self.blocks.iter().enumerate() {
            if b != 0 {
                return Some(i * 64 + b.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &b)| {
            let mut bits = b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn complement(&self) -> VertexSet {
        let mut out = Self::full(self.n);
        for (o, s) in out.blocks.iter_mut().zip(&self.blocks) {
            *o &= !s;
        }
        out
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (o, s) in out.blocks.iter_mut().zip(&other.blocks) {
            *o |= s;
        }
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (o, s) in out.blocks.iter_mut().zip(&other.blocks) {
            *o &= s;
        }
        out
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.n == other.n
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An immutable simple digraph: no loops, at most one arc per ordered pair.
/// Arcs in both directions between the same two vertices are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(VertexId, VertexId)>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    degrees: Vec<usize>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs)
    }
}

impl Digraph {
    /// Builds a validated digraph on `n` vertices from an arc list.
    ///
    /// Rejects loops, repeated ordered pairs, and out-of-range endpoints.
    pub fn build(
        n: usize,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Digraph, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut list: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in arcs {
            if u >= n {
                return Err(GraphError::IndexOutOfRange { index: u, n });
            }
            if v >= n {
                return Err(GraphError::IndexOutOfRange { index: v, n });
            }
            if u == v {
                return Err(GraphError::LoopRejected(u));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateArc(w[0].0, w[0].1));
            }
        }

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for l in in_adj.iter_mut() {
            l.sort_unstable();
        }
        // out_adj is already sorted because the arc list is.

        let degrees = (0..n)
            .map(|v| count_distinct_sorted(&out_adj[v], &in_adj[v]))
            .collect();

        Ok(Digraph {
            n,
            arcs: list,
            out_adj,
            in_adj,
            degrees,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs in sorted order.
    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    /// Number of distinct vertices adjacent to `v` (a two-way neighbor counts
    /// once).
    pub fn degree(&self, v: VertexId) -> usize {
        assert!(v < self.n, "vertex {v} out of range for {} vertices", self.n);
        self.degrees[v]
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    /// Whether `u` and `v` are joined by at least one arc in either direction.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// Every unordered pair of adjacent vertices, each listed once as
    /// `(min, max)`, in sorted order.
    pub fn adjacent_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let mut pairs: Vec<(VertexId, VertexId)> = self
            .arcs
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// True iff every ordered pair of vertices is joined by a directed path.
    /// A single vertex is strongly connected.
    pub fn is_strongly_connected(&self) -> bool {
        self.is_strongly_connected_within(&VertexSet::full(self.n))
    }

    /// Strong connectivity of the subgraph induced by `set`.
    ///
    /// The empty set is vacuously strongly connected; callers that need a
    /// nonempty set must check first.
    pub fn is_strongly_connected_within(&self, set: &VertexSet) -> bool {
        let Some(start) = set.first() else {
            return true;
        };
        let target = set.len();
        self.reach_count(start, set, Direction::Forward) == target
            && self.reach_count(start, set, Direction::Backward) == target
    }

    /// Strong connectivity of the subgraph obtained by deleting one vertex.
    pub fn is_strongly_connected_without(&self, v: VertexId) -> bool {
        let mut set = VertexSet::full(self.n);
        set.remove(v);
        self.is_strongly_connected_within(&set)
    }

    fn reach_count(&self, start: VertexId, allowed: &VertexSet, dir: Direction) -> usize {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            let next = match dir {
                Direction::Forward => &self.out_adj[u],
                Direction::Backward => &self.in_adj[u],
            };
            for &w in next {
                if !seen[w] && allowed.contains(w) {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// Vertices reachable from `start` (or reaching `start`, for
    /// [`Direction::Backward`]) inside `allowed`, including `start` itself.
    pub fn reachable_within(
        &self,
        start: VertexId,
        allowed: &VertexSet,
        dir: Direction,
    ) -> VertexSet {
        let mut out = VertexSet::empty(self.n);
        if !allowed.contains(start) {
            return out;
        }
        out.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let next = match dir {
                Direction::Forward => &self.out_adj[u],
                Direction::Backward => &self.in_adj[u],
            };
            for &w in next {
                if allowed.contains(w) && !out.contains(w) {
                    out.insert(w);
                    stack.push(w);
                }
            }
        }
        out
    }

    /// The subgraph induced by `set`, re-indexed to `0..set.len()`.
    ///
    /// `vertex_map[new]` gives the original index of re-indexed vertex `new`.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let vertex_map: Vec<VertexId> = set.iter().collect();
        let mut back = vec![usize::MAX; self.n];
        for (new, &old) in vertex_map.iter().enumerate() {
            back[old] = new;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(u, v)| set.contains(u) && set.contains(v))
            .map(|&(u, v)| (back[u], back[v]));
        let digraph = Digraph::build(vertex_map.len(), arcs)
            .expect("induced arcs of a valid digraph are valid");
        Ok(InducedSubgraph {
            digraph,
            vertex_map,
        })
    }
}

/// Traversal direction for reachability helpers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// An induced subgraph together with the map back to original vertex ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub digraph: Digraph,
    /// `vertex_map[new]` = original id of the re-indexed vertex `new`.
    pub vertex_map: Vec<VertexId>,
}

fn count_distinct_sorted(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() || j < b.len() {
        count += 1;
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    count
}

/// Which witness guarantee the adjacent degree sums of a digraph unlock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessGuarantee {
    /// Some adjacent pair has degree sum below `n + 1`; nothing is promised.
    None,
    /// Every adjacent pair sums to at least `n + 1`: one noncritical vertex.
    One,
    /// Every adjacent pair sums to at least `n + 2`: two noncritical vertices.
    Two,
}

/// Degree statistics of a strongly connected digraph and the guarantee class
/// they place it in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisClass {
    pub n: usize,
    pub guarantee: WitnessGuarantee,
    /// Minimum of `degree(x) + degree(y)` over adjacent pairs `{x, y}`.
    pub min_adjacent_degree_sum: usize,
    pub min_degree: usize,
    /// `2 * min_degree >= n + 1`: the minimum degree alone already implies
    /// the one-witness guarantee.
    pub min_degree_implies_one: bool,
    /// `2 * min_degree >= n + 2`: implies the two-witness guarantee.
    pub min_degree_implies_two: bool,
}

/// Classifies a strongly connected digraph with at least 4 vertices by its
/// minimum adjacent degree sum.
pub fn classify_hypothesis(d: &Digraph) -> Result<HypothesisClass, GraphError> {
    let n = d.vertex_count();
    if n < 4 {
        return Err(GraphError::TooSmall(n));
    }
    if !d.is_strongly_connected() {
        return Err(GraphError::NotStronglyConnected);
    }
    let min_adjacent_degree_sum = d
        .adjacent_pairs()
        .iter()
        .map(|&(x, y)| d.degree(x) + d.degree(y))
        .min()
        .expect("a strongly connected digraph on n >= 2 vertices has arcs");
    let guarantee = if min_adjacent_degree_sum >= n + 2 {
        WitnessGuarantee::Two
    } else if min_adjacent_degree_sum >= n + 1 {
        WitnessGuarantee::One
    } else {
        WitnessGuarantee::None
    };
    let min_degree = d.min_degree();
    Ok(HypothesisClass {
        n,
        guarantee,
        min_adjacent_degree_sum,
        min_degree,
        min_degree_implies_one: 2 * min_degree >= n + 1,
        min_degree_implies_two: 2 * min_degree >= n + 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Complete symmetric digraph: both arcs between every pair.
    pub(crate) fn complete(n: usize) -> Digraph {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Digraph::build(n, arcs).unwrap()
    }

    #[test]
    fn build_accepts_three_cycle() {
        let d = Digraph::build(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(d.vertex_count(), 3);
        assert_eq!(d.arc_count(), 3);
    }

    #[test]
    fn build_rejects_duplicate_arc() {
        assert_eq!(
            Digraph::build(2, [(0, 1), (1, 0), (0, 1)]),
            Err(GraphError::DuplicateArc(0, 1))
        );
    }

    #[test]
    fn build_rejects_loop() {
        assert_eq!(Digraph::build(4, [(0, 0)]), Err(GraphError::LoopRejected(0)));
    }

    #[test]
    fn build_rejects_out_of_range() {
        assert_eq!(
            Digraph::build(2, [(0, 2)]),
            Err(GraphError::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn strong_connectivity_basics() {
        assert!(cycle(3).is_strongly_connected());
        let path = Digraph::build(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!path.is_strongly_connected());
        let single = Digraph::build(1, []).unwrap();
        assert!(single.is_strongly_connected());
    }

    #[test]
    fn two_cycle_degree_counts_mutual_neighbor_once() {
        let d = Digraph::build(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(d.degree(0), 1);
        assert_eq!(d.degree(1), 1);
    }

    #[test]
    fn adjacent_pairs_examples() {
        let two = Digraph::build(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(two.adjacent_pairs(), vec![(0, 1)]);
        assert_eq!(cycle(3).adjacent_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn degree_is_adjacent_pair_count() {
        let d = complete(5);
        let pairs = d.adjacent_pairs();
        for v in 0..5 {
            let in_pairs = pairs.iter().filter(|&&(a, b)| a == v || b == v).count();
            assert_eq!(d.degree(v), in_pairs);
        }
    }

    #[test]
    fn classify_complete_symmetric_five() {
        let c = classify_hypothesis(&complete(5)).unwrap();
        assert_eq!(c.min_adjacent_degree_sum, 8);
        assert_eq!(c.guarantee, WitnessGuarantee::Two);
        assert!(c.min_degree_implies_two);
    }

    #[test]
    fn classify_rejects_small_or_disconnected() {
        assert_eq!(
            classify_hypothesis(&cycle(3)),
            Err(GraphError::TooSmall(3))
        );
        let path = Digraph::build(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            classify_hypothesis(&path),
            Err(GraphError::NotStronglyConnected)
        );
    }

    #[test]
    fn induced_subgraph_of_cycle_loses_strong_connectivity() {
        let d = cycle(3);
        let mut s = VertexSet::full(3);
        s.remove(2);
        let sub = d.induced_subgraph(&s).unwrap();
        assert_eq!(sub.digraph.vertex_count(), 2);
        assert_eq!(sub.digraph.arc_count(), 1);
        assert!(!sub.digraph.is_strongly_connected());
        assert_eq!(sub.vertex_map, vec![0, 1]);
    }

    #[test]
    fn induced_subgraph_of_complete_stays_complete() {
        let d = complete(4);
        let s = VertexSet::from_members(4, [0, 2, 3]);
        let sub = d.induced_subgraph(&s).unwrap();
        assert_eq!(sub.digraph.arc_count(), 6);
        assert!(sub.digraph.is_strongly_connected());
    }

    #[test]
    fn induced_subgraph_rejects_empty_set() {
        let d = cycle(3);
        assert!(matches!(
            d.induced_subgraph(&VertexSet::empty(3)),
            Err(GraphError::EmptySet)
        ));
    }

    #[test]
    fn vertex_set_ops() {
        let mut s = VertexSet::empty(70);
        s.insert(0);
        s.insert(65);
        assert!(s.contains(65));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_vec(), vec![0, 65]);
        assert_eq!(s.complement().len(), 68);
        assert_eq!(s.first(), Some(0));
        assert!(s.is_subset_of(&VertexSet::full(70)));
    }
}
