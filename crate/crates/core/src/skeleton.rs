//! Adjacency and distance on the skeleton of the perfect matching polytope.
//!
//! Two perfect matchings are adjacent exactly when their symmetric difference
//! is a single cycle. The flip graph has all perfect matchings as vertices
//! and these adjacencies as edges; [`skeleton_distance`] runs an exact BFS
//! over it and serves as the ground-truth oracle for everything else. Its
//! neighbor generation deliberately goes through directed-cycle enumeration
//! ([`alternating_cycles`]) rather than [`is_adjacent`], so the two
//! adjacency routes stay independently checkable.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{
    matching_to_orientation, same_base, BipartiteGraph, Cycle, EdgeId, Orientation,
    PerfectMatching, Vertex,
};

/// The unique decomposition of a symmetric difference of two perfect
/// matchings into vertex-disjoint even cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Cycle>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Union of the cycles' edge ids, sorted.
    pub fn edge_union(&self, graph: &BipartiteGraph) -> Vec<EdgeId> {
        let mut edges: Vec<EdgeId> = self
            .cycles
            .iter()
            .flat_map(|c| c.edge_ids(graph).expect("cycles live in the graph"))
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// A replayable sequence of alternating-cycle flips from a start matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPath {
    start: PerfectMatching,
    steps: Vec<Cycle>,
}

impl FlipPath {
    pub fn new(start: PerfectMatching, steps: Vec<Cycle>) -> Self {
        FlipPath { start, steps }
    }

    pub fn start(&self) -> &PerfectMatching {
        &self.start
    }

    pub fn steps(&self) -> &[Cycle] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays `M <- M Δ C` over all steps, validating that every
    /// intermediate stays a perfect matching. Returns all matchings, the
    /// start included.
    pub fn replay(&self) -> Result<Vec<PerfectMatching>> {
        let mut out = vec![self.start.clone()];
        for step in &self.steps {
            let next = out.last().unwrap().flip(step)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<PerfectMatching> {
        Ok(self.replay()?.pop().unwrap())
    }

    /// The orientation sequence `D_0, ..., D_t` induced by the path, each
    /// step cycle re-directed to match the orientation it is flipped in.
    pub fn replay_orientations(&self) -> Result<(Vec<Orientation>, Vec<Cycle>)> {
        let mut orientations = vec![matching_to_orientation(&self.start)];
        let mut directed_steps = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let current = orientations.last().unwrap();
            let directed = if current.is_directed_cycle(step) {
                step.clone()
            } else {
                let rev = step.reversed();
                current.check_directed(&rev)?;
                rev
            };
            orientations.push(crate::graph::flip_cycle(current, &directed)?);
            directed_steps.push(directed);
        }
        Ok((orientations, directed_steps))
    }
}

fn require_same_base(m1: &PerfectMatching, m2: &PerfectMatching) -> Result<()> {
    if !same_base(m1.graph(), m2.graph()) {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

fn sym_diff_edges(m1: &PerfectMatching, m2: &PerfectMatching) -> Vec<EdgeId> {
    let mut edges: Vec<EdgeId> = m1
        .edge_ids()
        .iter()
        .filter(|e| !m2.contains(**e))
        .chain(m2.edge_ids().iter().filter(|e| !m1.contains(**e)))
        .copied()
        .collect();
    edges.sort_unstable();
    edges
}

/// True when the two matchings are adjacent on the skeleton, i.e. their
/// symmetric difference is a single (nonempty, connected) cycle.
pub fn is_adjacent(m1: &PerfectMatching, m2: &PerfectMatching) -> Result<bool> {
    require_same_base(m1, m2)?;
    let diff = sym_diff_edges(m1, m2);
    if diff.is_empty() {
        return Ok(false);
    }
    // Every vertex touched by the difference has degree exactly two in it
    // (one edge from each matching), so the components are cycles; the
    // difference is a single cycle exactly when it is connected.
    let g = m1.graph();
    let mut incident: HashMap<Vertex, Vec<EdgeId>> = HashMap::new();
    for &e in &diff {
        let (u, v) = g.endpoints(e);
        incident.entry(u).or_default().push(e);
        incident.entry(v).or_default().push(e);
    }
    let mut seen_edges = vec![false; diff.len()];
    let pos = |e: EdgeId| diff.binary_search(&e).unwrap();
    let mut stack = vec![diff[0]];
    seen_edges[0] = true;
    let mut reached = 1;
    while let Some(e) = stack.pop() {
        let (u, v) = g.endpoints(e);
        for w in [u, v] {
            for &f in &incident[&w] {
                let p = pos(f);
                if !seen_edges[p] {
                    seen_edges[p] = true;
                    reached += 1;
                    stack.push(f);
                }
            }
        }
    }
    Ok(reached == diff.len())
}

/// Decomposes `M1 Δ M2` into vertex-disjoint even cycles, each directed so
/// that it is a directed cycle in the orientation of `m1`.
pub fn sym_diff_decompose(
    m1: &PerfectMatching,
    m2: &PerfectMatching,
) -> Result<CycleDecomposition> {
    require_same_base(m1, m2)?;
    let g = m1.graph();
    let diff = sym_diff_edges(m1, m2);
    let mut unused: HashMap<Vertex, Vec<EdgeId>> = HashMap::new();
    for &e in &diff {
        let (u, v) = g.endpoints(e);
        unused.entry(u).or_default().push(e);
        unused.entry(v).or_default().push(e);
    }
    let mut vertices: Vec<Vertex> = unused.keys().copied().collect();
    vertices.sort_unstable();
    let mut consumed: HashMap<EdgeId, bool> = diff.iter().map(|&e| (e, false)).collect();
    let mut cycles = Vec::new();
    for &start in &vertices {
        // Start each walk along the m1-edge so the cycle comes out directed
        // in the orientation of m1 (start vertices are side A, which leaves
        // through its matching edge).
        let first = unused[&start]
            .iter()
            .copied()
            .find(|&e| m1.contains(e) && !consumed[&e]);
        let Some(first) = first else { continue };
        let mut cycle = vec![start];
        let mut edge = first;
        let mut at = start;
        loop {
            consumed.insert(edge, true);
            at = g.opposite(edge, at);
            if at == start {
                break;
            }
            cycle.push(at);
            // Alternate matchings: leave through the edge of the other one.
            let want_m1 = !m1.contains(edge);
            edge = unused[&at]
                .iter()
                .copied()
                .find(|&e| !consumed[&e] && m1.contains(e) == want_m1)
                .expect("difference vertices have one unused edge per matching");
        }
        cycles.push(Cycle::new(cycle).expect("walk visits distinct vertices"));
    }
    Ok(CycleDecomposition { cycles })
}

/// All perfect matchings of `g`, by backtracking over the A-side vertices in
/// ascending order, choosing edges in ascending id order. Errors out as soon
/// as more than `cap` matchings exist.
pub fn enumerate_perfect_matchings(
    g: &Arc<BipartiteGraph>,
    cap: usize,
) -> Result<Vec<PerfectMatching>> {
    let n = g.n_side();
    let mut out: Vec<PerfectMatching> = Vec::new();
    let mut b_used = vec![false; n];
    let mut chosen: Vec<EdgeId> = Vec::with_capacity(n);

    fn go(
        g: &Arc<BipartiteGraph>,
        i: usize,
        b_used: &mut [bool],
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<PerfectMatching>,
        cap: usize,
    ) -> Result<()> {
        let n = g.n_side();
        if i == n {
            if out.len() == cap {
                return Err(Error::CapExceeded { cap });
            }
            out.push(PerfectMatching::new(g.clone(), chosen.clone())?);
            return Ok(());
        }
        for &e in g.incident_edges(g.a_vertex(i)) {
            let (_, b) = g.edge_pair(e);
            if !b_used[b] {
                b_used[b] = true;
                chosen.push(e);
                go(g, i + 1, b_used, chosen, out, cap)?;
                chosen.pop();
                b_used[b] = false;
            }
        }
        Ok(())
    }

    go(g, 0, &mut b_used, &mut chosen, &mut out, cap)?;
    Ok(out)
}

/// All directed cycles of length at most `max_len` in the orientation of
/// `m`; every one is an alternating cycle for `m`. Deterministic order.
pub fn alternating_cycles(m: &PerfectMatching, max_len: usize) -> Vec<Cycle> {
    debug_assert!(max_len >= 4 && max_len.is_multiple_of(2));
    matching_to_orientation(m).directed_cycles(max_len)
}

/// Exact BFS distance between two matchings in the flip graph, lazily
/// materialized: the neighbors of a matching are all of its single
/// alternating-cycle flips, in deterministic enumeration order.
///
/// Returns `Ok(None)` when `m2` is unreachable from `m1`, and
/// [`Error::CapExceeded`] once more than `cap` matchings have been visited.
pub fn skeleton_distance(
    m1: &PerfectMatching,
    m2: &PerfectMatching,
    cap: usize,
) -> Result<Option<usize>> {
    require_same_base(m1, m2)?;
    if m1 == m2 {
        return Ok(Some(0));
    }
    let full_len = m1.graph().vertex_count();
    let key = |m: &PerfectMatching| m.edge_ids().to_vec();
    let target = key(m2);
    let mut dist: HashMap<Vec<EdgeId>, usize> = HashMap::new();
    dist.insert(key(m1), 0);
    let mut frontier = vec![m1.clone()];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for m in &frontier {
            for cycle in alternating_cycles(m, full_len.max(4)) {
                let neighbor = m.flip(&cycle)?;
                let k = key(&neighbor);
                if k == target {
                    return Ok(Some(depth));
                }
                if !dist.contains_key(&k) {
                    if dist.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    dist.insert(k, depth);
                    next.push(neighbor);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Finds one perfect matching by augmenting paths, or `None` when the graph
/// has no perfect matching. Deterministic.
pub fn find_perfect_matching(g: &Arc<BipartiteGraph>) -> Option<PerfectMatching> {
    let n = g.n_side();
    let mut match_of_b: Vec<Option<EdgeId>> = vec![None; n];
    let mut match_of_a: Vec<Option<EdgeId>> = vec![None; n];

    fn augment(
        g: &BipartiteGraph,
        a: usize,
        visited: &mut [bool],
        match_of_a: &mut [Option<EdgeId>],
        match_of_b: &mut [Option<EdgeId>],
    ) -> bool {
        for &e in g.incident_edges(g.a_vertex(a)) {
            let (_, b) = g.edge_pair(e);
            if visited[b] {
                continue;
            }
            visited[b] = true;
            let free = match match_of_b[b] {
                None => true,
                Some(f) => {
                    let (a2, _) = g.edge_pair(f);
                    augment(g, a2, visited, match_of_a, match_of_b)
                }
            };
            if free {
                match_of_a[a] = Some(e);
                match_of_b[b] = Some(e);
                return true;
            }
        }
        false
    }

    for a in 0..n {
        let mut visited = vec![false; n];
        if !augment(g, a, &mut visited, &mut match_of_a, &mut match_of_b) {
            return None;
        }
    }
    let edges: Vec<EdgeId> = match_of_a.into_iter().map(Option::unwrap).collect();
    Some(PerfectMatching::new(g.clone(), edges).expect("augmenting paths built a matching"))
}
