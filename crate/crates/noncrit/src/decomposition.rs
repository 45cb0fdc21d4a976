//! Maximal proper strongly connected subgraphs (MPSS).
//!
//! A proper strongly connected induced subgraph `S` of a strongly connected
//! digraph `D` is *maximal* when no strictly larger proper induced subgraph
//! is strongly connected. Such an `S` is characterized by three certificate
//! conditions on its complement:
//!
//! 1. every arc leaving `S` ends at a single vertex `omega_in`,
//! 2. every arc entering `S` starts at a single vertex `omega_out`,
//! 3. `D` contains exactly one simple path from `omega_in` to `omega_out`,
//!    and its vertex set is exactly the complement of `S`.
//!
//! This module grows an MPSS from a seed by repeatedly attaching shortest
//! handles (ears through the complement), verifies the three conditions
//! directly, and provides a brute-force enumeration oracle for small graphs.

use thiserror::Error;

use crate::digraph::{Digraph, Direction, VertexId, VertexSet};

/// Default budget for the condition-3 simple-path enumeration, counted in
/// partial paths explored.
pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000;

/// Default vertex-count cap for [`enumerate_mpss`].
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("no handle found; input violates the preconditions")]
    NoHandle,
    #[error("cannot decompose a single-vertex digraph")]
    DegenerateWhole,
    #[error("seed set does not induce a strongly connected subgraph")]
    SeedNotStronglyConnected,
    #[error("seed set is not a proper subset of the vertices")]
    SeedNotProper,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("path enumeration budget of {budget} partial paths exceeded")]
    PathBudgetExceeded { budget: u64 },
    #[error("{n} vertices exceed the enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// A path that leaves `S`, runs through distinct vertices of the complement,
/// and re-enters `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandlePath {
    /// Arc from a vertex of `S` to `interior[0]`.
    pub entry: (VertexId, VertexId),
    /// The vertices outside `S`, in path order. Never empty.
    pub interior: Vec<VertexId>,
    /// Arc from the last interior vertex back into `S`.
    pub exit: (VertexId, VertexId),
}

/// A maximal proper strongly connected subgraph together with the witness
/// data that certifies maximality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpssCertificate {
    /// The subgraph's vertex set.
    pub members: VertexSet,
    /// Target of every arc leaving `members`.
    pub omega_in: VertexId,
    /// Source of every arc entering `members`.
    pub omega_out: VertexId,
    /// The unique simple `omega_in -> omega_out` path covering the
    /// complement. Equals `omega_in` alone when the complement is a single
    /// vertex.
    pub handle: HandlePath,
}

impl MpssCertificate {
    pub fn complement(&self) -> VertexSet {
        self.members.complement()
    }
}

/// Why a vertex set fails the maximality conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lemma1Violation {
    /// Two arcs leave the set toward different heads.
    MultipleEntryHeads {
        arc_a: (VertexId, VertexId),
        arc_b: (VertexId, VertexId),
    },
    /// Two arcs enter the set from different tails.
    MultipleExitTails {
        arc_a: (VertexId, VertexId),
        arc_b: (VertexId, VertexId),
    },
    /// More than one simple `omega_in -> omega_out` path exists.
    PathNotUnique {
        first: Vec<VertexId>,
        second: Vec<VertexId>,
    },
    /// The unique path does not cover the complement exactly.
    PathMissesComplement {
        path: Vec<VertexId>,
        complement: Vec<VertexId>,
    },
    /// No simple path at all (impossible in a strongly connected digraph).
    NoPath,
}

impl Lemma1Violation {
    /// Index (1, 2 or 3) of the first violated condition.
    pub fn condition(&self) -> u8 {
        match self {
            Lemma1Violation::MultipleEntryHeads { .. } => 1,
            Lemma1Violation::MultipleExitTails { .. } => 2,
            _ => 3,
        }
    }
}

/// Outcome of checking the three maximality conditions for a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lemma1Outcome {
    Certified(Box<MpssCertificate>),
    Violated(Lemma1Violation),
}

/// Finds a handle of minimum interior length for `set`, by multi-source BFS
/// through the complement from the heads of leaving arcs to the tails of
/// entering arcs.
///
/// Ties break toward lowest vertex indices, so the result is deterministic.
pub fn shortest_handle(d: &Digraph, set: &VertexSet) -> Result<HandlePath, DecompositionError> {
    let n = d.vertex_count();
    debug_assert_eq!(set.universe(), n);
    if set.is_empty() {
        return Err(DecompositionError::EmptySet);
    }
    if set.len() == n {
        return Err(DecompositionError::SeedNotProper);
    }

    // Heads of arcs leaving the set (BFS sources, interior length 1) and
    // tails of arcs entering it (BFS targets).
    let mut sources = VertexSet::empty(n);
    let mut targets = VertexSet::empty(n);
    for &(u, v) in d.arcs() {
        if set.contains(u) && !set.contains(v) {
            sources.insert(v);
        }
        if !set.contains(u) && set.contains(v) {
            targets.insert(u);
        }
    }
    if sources.is_empty() || targets.is_empty() {
        return Err(DecompositionError::NoHandle);
    }

    // Level-synchronous BFS keeps parent choices lowest-index-first.
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut frontier: Vec<VertexId> = sources.iter().collect();
    for &v in &frontier {
        dist[v] = 1;
    }
    let mut best_target: Option<VertexId> = frontier
        .iter()
        .copied()
        .find(|&v| targets.contains(v));
    while best_target.is_none() && !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in d.out_neighbors(u) {
                if !set.contains(w) && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        // Re-pick parents lowest-index-first within the finished level.
        for &w in &next {
            for &p in d.in_neighbors(w) {
                if dist[p] == dist[w] - 1 && !set.contains(p) {
                    parent[w] = p;
                    break;
                }
            }
        }
        best_target = next.iter().copied().find(|&v| targets.contains(v));
        frontier = next;
    }
    let Some(tail) = best_target else {
        return Err(DecompositionError::NoHandle);
    };

    let mut interior = vec![tail];
    let mut cur = tail;
    while parent[cur] != usize::MAX {
        cur = parent[cur];
        interior.push(cur);
    }
    interior.reverse();

    let head = interior[0];
    let entry_tail = set
        .iter()
        .find(|&s| d.has_arc(s, head))
        .expect("head of a leaving arc has a tail in the set");
    let exit_head = set
        .iter()
        .find(|&s| d.has_arc(tail, s))
        .expect("tail of an entering arc has a head in the set");
    Ok(HandlePath {
        entry: (entry_tail, head),
        interior,
        exit: (tail, exit_head),
    })
}

/// Grows a maximal proper strongly connected subgraph from a single seed
/// vertex.
pub fn grow_mpss(d: &Digraph, seed: VertexId) -> Result<MpssCertificate, DecompositionError> {
    if d.vertex_count() == 1 {
        return Err(DecompositionError::DegenerateWhole);
    }
    if !d.is_strongly_connected() {
        return Err(DecompositionError::NotStronglyConnected);
    }
    grow_from(d, VertexSet::singleton(d.vertex_count(), seed))
}

/// Grows a maximal proper strongly connected subgraph from a seed set, which
/// must itself induce a strongly connected proper subgraph.
pub fn grow_mpss_from_set(
    d: &Digraph,
    seed_set: &VertexSet,
) -> Result<MpssCertificate, DecompositionError> {
    if seed_set.is_empty() {
        return Err(DecompositionError::EmptySet);
    }
    if seed_set.len() >= d.vertex_count() {
        return Err(DecompositionError::SeedNotProper);
    }
    if !d.is_strongly_connected_within(seed_set) {
        return Err(DecompositionError::SeedNotStronglyConnected);
    }
    if !d.is_strongly_connected() {
        return Err(DecompositionError::NotStronglyConnected);
    }
    grow_from(d, seed_set.clone())
}

fn grow_from(d: &Digraph, mut set: VertexSet) -> Result<MpssCertificate, DecompositionError> {
    loop {
        let handle = shortest_handle(d, &set)?;
        let complement_size = d.vertex_count() - set.len();
        if handle.interior.len() == complement_size {
            // No shorter detour exists, so no proper strongly connected
            // superset exists either: the set is maximal.
            let omega_in = handle.interior[0];
            let omega_out = *handle.interior.last().unwrap();
            return Ok(MpssCertificate {
                members: set,
                omega_in,
                omega_out,
                handle,
            });
        }
        for &v in &handle.interior {
            set.insert(v);
        }
        debug_assert!(
            d.is_strongly_connected_within(&set),
            "attaching a handle must preserve strong connectivity"
        );
    }
}

/// Checks the three maximality conditions for `set` literally, returning a
/// certificate or the first violated condition with a counterexample.
///
/// Condition 3 enumerates simple paths in the whole digraph with a budget of
/// `DEFAULT_PATH_BUDGET` partial paths; use [`verify_lemma1_budgeted`] to
/// override.
pub fn verify_lemma1(d: &Digraph, set: &VertexSet) -> Result<Lemma1Outcome, DecompositionError> {
    verify_lemma1_budgeted(d, set, DEFAULT_PATH_BUDGET)
}

pub fn verify_lemma1_budgeted(
    d: &Digraph,
    set: &VertexSet,
    budget: u64,
) -> Result<Lemma1Outcome, DecompositionError> {
    let n = d.vertex_count();
    if set.is_empty() {
        return Err(DecompositionError::EmptySet);
    }
    if set.len() >= n {
        return Err(DecompositionError::SeedNotProper);
    }
    if !d.is_strongly_connected_within(set) {
        return Err(DecompositionError::SeedNotStronglyConnected);
    }
    if !d.is_strongly_connected() {
        return Err(DecompositionError::NotStronglyConnected);
    }

    // Condition 1: all leaving arcs share one head.
    let mut entry: Option<(VertexId, VertexId)> = None;
    let mut exit: Option<(VertexId, VertexId)> = None;
    for &(u, v) in d.arcs() {
        if set.contains(u) && !set.contains(v) {
            match entry {
                None => entry = Some((u, v)),
                Some(first) if first.1 != v => {
                    return Ok(Lemma1Outcome::Violated(
                        Lemma1Violation::MultipleEntryHeads {
                            arc_a: first,
                            arc_b: (u, v),
                        },
                    ));
                }
                _ => {}
            }
        }
        if !set.contains(u) && set.contains(v) {
            match exit {
                None => exit = Some((u, v)),
                Some(first) if first.0 != u => {
                    return Ok(Lemma1Outcome::Violated(
                        Lemma1Violation::MultipleExitTails {
                            arc_a: first,
                            arc_b: (u, v),
                        },
                    ));
                }
                _ => {}
            }
        }
    }
    // Strong connectivity of D with a proper subset guarantees both arcs.
    let entry = entry.expect("some arc leaves a proper subset");
    let exit = exit.expect("some arc enters a proper subset");
    let omega_in = entry.1;
    let omega_out = exit.0;

    // Condition 3: exactly one simple path omega_in -> omega_out in D, and
    // it covers the complement exactly.
    let complement = set.complement();
    let paths = enumerate_simple_paths(d, omega_in, omega_out, 2, budget)?;
    let path = match paths.as_slice() {
        [] => return Ok(Lemma1Outcome::Violated(Lemma1Violation::NoPath)),
        [p] => p.clone(),
        [p, q, ..] => {
            return Ok(Lemma1Outcome::Violated(Lemma1Violation::PathNotUnique {
                first: p.clone(),
                second: q.clone(),
            }));
        }
    };
    let path_set = VertexSet::from_members(n, path.iter().copied());
    if path_set != complement {
        return Ok(Lemma1Outcome::Violated(
            Lemma1Violation::PathMissesComplement {
                path,
                complement: complement.to_vec(),
            },
        ));
    }

    Ok(Lemma1Outcome::Certified(Box::new(MpssCertificate {
        members: set.clone(),
        omega_in,
        omega_out,
        handle: HandlePath {
            entry,
            interior: path,
            exit,
        },
    })))
}

/// Enumerates up to `limit` simple paths from `from` to `to` by depth-first
/// search, pruned to vertices that can still reach `to`. Consumes one unit
/// of `budget` per visited partial path.
fn enumerate_simple_paths(
    d: &Digraph,
    from: VertexId,
    to: VertexId,
    limit: usize,
    budget: u64,
) -> Result<Vec<Vec<VertexId>>, DecompositionError> {
    // Vertices from which `to` is reachable; branches outside contribute
    // no paths, so skipping them keeps the count exact.
    let feasible = d.reachable_within(to, &VertexSet::full(d.vertex_count()), Direction::Backward);
    if !feasible.contains(from) {
        return Ok(Vec::new());
    }

    let mut paths = Vec::new();
    let mut on_path = vec![false; d.vertex_count()];
    let mut path = Vec::new();
    let mut remaining = budget;
    dfs_paths(d, from, to, &feasible, &mut on_path, &mut path, &mut paths, limit, &mut remaining)?;
    Ok(paths)
}

#[allow(clippy::too_many_arguments)]
fn dfs_paths(
    d: &Digraph,
    cur: VertexId,
    to: VertexId,
    feasible: &VertexSet,
    on_path: &mut Vec<bool>,
    path: &mut Vec<VertexId>,
    paths: &mut Vec<Vec<VertexId>>,
    limit: usize,
    budget: &mut u64,
) -> Result<(), DecompositionError> {
    if *budget == 0 {
        return Err(DecompositionError::PathBudgetExceeded {
            budget: DEFAULT_PATH_BUDGET,
        });
    }
    *budget -= 1;
    path.push(cur);
    on_path[cur] = true;
    if cur == to {
        paths.push(path.clone());
    } else {
        for &w in d.out_neighbors(cur) {
            if paths.len() >= limit {
                break;
            }
            if !on_path[w] && feasible.contains(w) {
                dfs_paths(d, w, to, feasible, on_path, path, paths, limit, budget)?;
            }
        }
    }
    on_path[cur] = false;
    path.pop();
    Ok(())
}

/// All vertex-set-maximal proper strongly connected induced subgraphs, by
/// direct subset enumeration. Feasible only for small digraphs; refuses more
/// than [`DEFAULT_ENUMERATION_CAP`] vertices.
pub fn enumerate_mpss(d: &Digraph) -> Result<Vec<VertexSet>, DecompositionError> {
    enumerate_mpss_capped(d, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_mpss_capped(
    d: &Digraph,
    cap: usize,
) -> Result<Vec<VertexSet>, DecompositionError> {
    let n = d.vertex_count();
    if n > cap || n >= usize::BITS as usize {
        return Err(DecompositionError::TooLarge { n, cap });
    }
    let full: usize = (1 << n) - 1;

    let mut strong = vec![false; full + 1];
    for mask in 1..=full {
        let set = mask_to_set(n, mask);
        strong[mask] = d.is_strongly_connected_within(&set);
    }

    // extendable[m]: some proper strongly connected strict superset of m
    // exists. Scanning masks downward sees every superset first.
    let mut extendable = vec![false; full + 1];
    for mask in (1..full).rev() {
        for v in 0..n {
            let bit = 1 << v;
            if mask & bit == 0 {
                let sup = mask | bit;
                if sup != full && (strong[sup] || extendable[sup]) {
                    extendable[mask] = true;
                    break;
                }
            }
        }
    }

    let mut result: Vec<VertexSet> = (1..full)
        .filter(|&m| strong[m] && !extendable[m])
        .map(|m| mask_to_set(n, m))
        .collect();
    result.sort_by_key(|s| s.to_vec());
    Ok(result)
}

fn mask_to_set(n: usize, mask: usize) -> VertexSet {
    VertexSet::from_members(n, (0..n).filter(|&v| mask & (1 << v) != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Digraph {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Digraph::build(n, arcs).unwrap()
    }

    #[test]
    fn shortest_handle_on_four_cycle() {
        let d = cycle(4);
        let h = shortest_handle(&d, &VertexSet::singleton(4, 0)).unwrap();
        assert_eq!(h.interior, vec![1, 2, 3]);
        assert_eq!(h.entry, (0, 1));
        assert_eq!(h.exit, (3, 0));
    }

    #[test]
    fn shortest_handle_prefers_short_detour() {
        let d = complete(4);
        let h = shortest_handle(&d, &VertexSet::from_members(4, [0, 1])).unwrap();
        assert_eq!(h.interior, vec![2]);
    }

    #[test]
    fn grow_on_four_cycle_stays_singleton() {
        let cert = grow_mpss(&cycle(4), 0).unwrap();
        assert_eq!(cert.members.to_vec(), vec![0]);
        assert_eq!(cert.complement().to_vec(), vec![1, 2, 3]);
        assert_eq!(cert.omega_in, 1);
        assert_eq!(cert.omega_out, 3);
    }

    #[test]
    fn grow_on_complete_four_reaches_triple() {
        let cert = grow_mpss(&complete(4), 0).unwrap();
        assert_eq!(cert.members.len(), 3);
        assert_eq!(cert.complement().len(), 1);
        assert_eq!(cert.omega_in, cert.omega_out);
    }

    #[test]
    fn grow_rejects_single_vertex() {
        let d = Digraph::build(1, []).unwrap();
        assert_eq!(grow_mpss(&d, 0), Err(DecompositionError::DegenerateWhole));
    }

    #[test]
    fn grow_from_set_validates_seed() {
        let d = complete(4);
        let bad = VertexSet::from_members(4, [0, 1, 2, 3]);
        assert_eq!(
            grow_mpss_from_set(&d, &bad),
            Err(DecompositionError::SeedNotProper)
        );
        let disconnected = Digraph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let seed = VertexSet::from_members(4, [0, 2]);
        assert_eq!(
            grow_mpss_from_set(&disconnected, &seed),
            Err(DecompositionError::SeedNotStronglyConnected)
        );
    }

    #[test]
    fn grow_from_triangle_inside_complete_four() {
        let d = complete(4);
        let seed = VertexSet::from_members(4, [0, 1, 2]);
        let cert = grow_mpss_from_set(&d, &seed).unwrap();
        assert_eq!(cert.members, seed);
        assert_eq!(cert.complement().to_vec(), vec![3]);
    }

    #[test]
    fn verify_certifies_four_cycle_singleton() {
        let d = cycle(4);
        let outcome = verify_lemma1(&d, &VertexSet::singleton(4, 0)).unwrap();
        match outcome {
            Lemma1Outcome::Certified(cert) => {
                assert_eq!(cert.omega_in, 1);
                assert_eq!(cert.omega_out, 3);
                assert_eq!(cert.handle.interior, vec![1, 2, 3]);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn verify_flags_condition_one_on_complete_four() {
        let d = complete(4);
        let outcome = verify_lemma1(&d, &VertexSet::from_members(4, [0, 1])).unwrap();
        match outcome {
            Lemma1Outcome::Violated(v) => assert_eq!(v.condition(), 1),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn verify_flags_non_maximal_singleton_in_complete_four() {
        // {0} is strongly connected but not maximal: the complement is a
        // triangle with many paths between any two of its vertices.
        let d = complete(4);
        let outcome = verify_lemma1(&d, &VertexSet::singleton(4, 0)).unwrap();
        assert!(matches!(outcome, Lemma1Outcome::Violated(_)));
    }

    #[test]
    fn path_budget_is_reported() {
        let d = complete(6);
        let err = verify_lemma1_budgeted(&d, &VertexSet::from_members(6, [0]), 3).unwrap_err();
        assert!(matches!(err, DecompositionError::PathBudgetExceeded { .. }));
    }

    #[test]
    fn enumerate_four_cycle_gives_singletons() {
        let sets = enumerate_mpss(&cycle(4)).unwrap();
        let got: Vec<Vec<VertexId>> = sets.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn enumerate_complete_four_gives_triples() {
        let sets = enumerate_mpss(&complete(4)).unwrap();
        let got: Vec<Vec<VertexId>> = sets.iter().map(|s| s.to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
    }

    #[test]
    fn enumerate_respects_cap() {
        let d = cycle(5);
        assert_eq!(
            enumerate_mpss_capped(&d, 4),
            Err(DecompositionError::TooLarge { n: 5, cap: 4 })
        );
    }

    #[test]
    fn grown_certificates_verify() {
        // Every grow result must pass the literal condition check.
        for n in 2..=6 {
            let d = complete(n);
            for seed in 0..n {
                let cert = grow_mpss(&d, seed).unwrap();
                let outcome = verify_lemma1(&d, &cert.members).unwrap();
                match outcome {
                    Lemma1Outcome::Certified(v) => {
                        assert_eq!(v.omega_in, cert.omega_in);
                        assert_eq!(v.omega_out, cert.omega_out);
                    }
                    other => panic!("grow produced a non-maximal set: {other:?}"),
                }
            }
        }
    }
}
