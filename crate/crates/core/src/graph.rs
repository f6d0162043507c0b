//! Graph, orientation, and matching value types.
//!
//! Vertices of a bipartite graph get dense global indices: side A occupies
//! `0..n_side`, side B occupies `n_side..2*n_side`. Edges are index pairs into
//! the two sides and carry a stable id (their rank in the sorted edge list).
//! All values are immutable after construction; derived objects share the
//! graph through an `Arc`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Global vertex index (side A first, then side B).
pub type Vertex = usize;
/// Stable edge index into the canonical (sorted) edge list.
pub type EdgeId = usize;

/// A balanced bipartite graph with dense integer vertices.
#[derive(Debug)]
pub struct BipartiteGraph {
    n_side: usize,
    /// Canonical edge list: `(a_index, b_index)` pairs, sorted, no duplicates.
    edges: Vec<(usize, usize)>,
    /// Incident edge ids per global vertex, ascending.
    adj: Vec<Vec<EdgeId>>,
    lookup: HashMap<(usize, usize), EdgeId>,
}

impl PartialEq for BipartiteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n_side == other.n_side && self.edges == other.edges
    }
}
impl Eq for BipartiteGraph {}

impl BipartiteGraph {
    /// Builds a balanced bipartite graph from side sizes and `(a, b)` side-index pairs.
    ///
    /// Edges are sorted into canonical order; parallel edges are rejected.
    pub fn build(n_a: usize, n_b: usize, edges: &[(usize, usize)]) -> Result<Arc<Self>> {
        if n_a != n_b {
            return Err(Error::UnbalancedSides { n_a, n_b });
        }
        let n_side = n_a;
        let mut sorted: Vec<(usize, usize)> = edges.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge {
                    a: w[0].0,
                    b: w[0].1,
                });
            }
        }
        let mut adj = vec![Vec::new(); 2 * n_side];
        let mut lookup = HashMap::with_capacity(sorted.len());
        for (id, &(a, b)) in sorted.iter().enumerate() {
            if a >= n_side || b >= n_side {
                return Err(Error::InvalidEndpoint { a, b });
            }
            adj[a].push(id);
            adj[n_side + b].push(id);
            lookup.insert((a, b), id);
        }
        Ok(Arc::new(BipartiteGraph {
            n_side,
            edges: sorted,
            adj,
            lookup,
        }))
    }

    pub fn n_side(&self) -> usize {
        self.n_side
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n_side
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Global vertex id of the `i`-th A-side vertex.
    pub fn a_vertex(&self, i: usize) -> Vertex {
        debug_assert!(i < self.n_side);
        i
    }

    /// Global vertex id of the `j`-th B-side vertex.
    pub fn b_vertex(&self, j: usize) -> Vertex {
        debug_assert!(j < self.n_side);
        self.n_side + j
    }

    pub fn is_a_side(&self, v: Vertex) -> bool {
        v < self.n_side
    }

    /// Edge endpoints as global vertex ids, A endpoint first.
    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        let (a, b) = self.edges[e];
        (a, self.n_side + b)
    }

    /// Raw side-index pair of an edge.
    pub fn edge_pair(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_pairs(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Looks up the edge joining two global vertices, in either argument order.
    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let (x, y) = if u < v { (u, v) } else { (v, u) };
        if x >= self.n_side || y < self.n_side {
            return None;
        }
        self.lookup.get(&(x, y - self.n_side)).copied()
    }

    pub fn incident_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_subcubic(&self) -> bool {
        self.max_degree() <= 3
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                let (x, y) = self.endpoints(e);
                let w = if x == v { y } else { x };
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }

    /// The other endpoint of `e` as seen from `v`.
    pub fn opposite(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (x, y) = self.endpoints(e);
        if x == v {
            y
        } else {
            x
        }
    }
}

/// Base-graph identity check shared by all binary operations.
pub(crate) fn same_base(g1: &Arc<BipartiteGraph>, g2: &Arc<BipartiteGraph>) -> bool {
    Arc::ptr_eq(g1, g2) || g1 == g2
}

/// A simple digraph on dense integer vertices (no parallel arcs, no loops).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn build(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut sorted = arcs.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateArc {
                    from: w[0].0,
                    to: w[0].1,
                });
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &sorted {
            if u >= n || v >= n {
                return Err(Error::InvalidArc { from: u, to: v });
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        Ok(Digraph {
            n,
            arcs: sorted,
            out_adj,
            in_adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// Every vertex has in- and out-degree at least one (each gadget tree
    /// then has at least one leaf).
    pub fn is_reduction_ready(&self) -> bool {
        (0..self.n).all(|v| self.out_degree(v) >= 1 && self.in_degree(v) >= 1)
    }

    pub fn is_directed_cycle(&self, c: &Cycle) -> bool {
        c.arcs().all(|(u, v)| self.has_arc(u, v))
    }

    pub fn is_hamiltonian_cycle(&self, c: &Cycle) -> bool {
        c.len() == self.n && self.is_directed_cycle(c)
    }

    /// All simple directed cycles of length at most `max_len`, canonically
    /// rooted at their smallest vertex, in deterministic order. The flag is
    /// false when enumeration stopped at `cap` cycles.
    pub fn directed_cycles_capped(&self, max_len: usize, cap: usize) -> (Vec<Cycle>, bool) {
        directed_cycles_from_adj(&self.out_adj, max_len, cap)
    }

    pub fn directed_cycles(&self, max_len: usize) -> Vec<Cycle> {
        self.directed_cycles_capped(max_len, usize::MAX).0
    }
}

/// Enumerates simple directed cycles by DFS from each root vertex, visiting
/// only vertices larger than the root so every cycle appears exactly once.
pub(crate) fn directed_cycles_from_adj(
    out_adj: &[Vec<usize>],
    max_len: usize,
    cap: usize,
) -> (Vec<Cycle>, bool) {
    let n = out_adj.len();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    let mut path: Vec<usize> = Vec::new();
    // Iterative DFS with explicit next-neighbor cursors.
    for root in 0..n {
        path.clear();
        path.push(root);
        on_path[root] = true;
        let mut cursors = vec![0usize];
        while let Some(&v) = path.last() {
            let cursor = cursors.last_mut().unwrap();
            let neighbors = &out_adj[v];
            if *cursor < neighbors.len() && path.len() <= max_len {
                let w = neighbors[*cursor];
                *cursor += 1;
                if w == root && path.len() >= 2 {
                    if cycles.len() == cap {
                        for &x in path.iter() {
                            on_path[x] = false;
                        }
                        return (cycles, false);
                    }
                    cycles.push(Cycle::new_unchecked(path.clone()));
                } else if w > root && !on_path[w] && path.len() < max_len {
                    path.push(w);
                    on_path[w] = true;
                    cursors.push(0);
                }
            } else {
                on_path[v] = false;
                path.pop();
                cursors.pop();
            }
        }
    }
    (cycles, true)
}

/// A simple cycle given by its closed vertex sequence `x_0, ..., x_{k-1}`.
///
/// The sequence is canonically rotated to start at the smallest vertex; the
/// traversal direction is preserved (it is meaningful whenever the cycle is
/// used as a directed cycle of an orientation or digraph).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::NotACycle {
                reason: "fewer than two vertices",
            });
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotACycle {
                reason: "repeated vertex",
            });
        }
        Ok(Self::new_unchecked(vertices))
    }

    pub(crate) fn new_unchecked(vertices: Vec<Vertex>) -> Self {
        let mut c = Cycle { vertices };
        c.rotate_canonical();
        c
    }

    fn rotate_canonical(&mut self) {
        let min_pos = self
            .vertices
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        self.vertices.rotate_left(min_pos);
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Consecutive vertex pairs in traversal order, wrapping around.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// The same cycle traversed in the opposite direction.
    pub fn reversed(&self) -> Cycle {
        let mut vs = self.vertices.clone();
        vs[1..].reverse();
        Cycle::new_unchecked(vs)
    }

    /// Edge ids of the cycle within a bipartite host graph, when all
    /// consecutive pairs are edges.
    pub fn edge_ids(&self, graph: &BipartiteGraph) -> Option<Vec<EdgeId>> {
        self.arcs().map(|(u, v)| graph.edge_between(u, v)).collect()
    }

    /// Canonical key that identifies the cycle as an undirected edge set.
    pub fn undirected_key(&self) -> Vec<Vertex> {
        let k = self.vertices.len();
        if k == 2 {
            return self.vertices.clone();
        }
        if self.vertices[1] <= self.vertices[k - 1] {
            self.vertices.clone()
        } else {
            self.reversed().vertices
        }
    }
}

/// A perfect matching of a bipartite graph, stored as sorted edge ids.
#[derive(Debug, Clone)]
pub struct PerfectMatching {
    graph: Arc<BipartiteGraph>,
    edges: Vec<EdgeId>,
    /// Matched partner per global vertex.
    partner: Vec<Vertex>,
}

impl PartialEq for PerfectMatching {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.graph, &other.graph) && self.edges == other.edges
    }
}
impl Eq for PerfectMatching {}

impl PerfectMatching {
    pub fn new(graph: Arc<BipartiteGraph>, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let n = graph.vertex_count();
        let mut partner = vec![usize::MAX; n];
        for &e in &edges {
            if e >= graph.edge_count() {
                return Err(Error::Internal(format!(
                    "matching edge id {e} out of range for {} edges",
                    graph.edge_count()
                )));
            }
            let (u, v) = graph.endpoints(e);
            for w in [u, v] {
                if partner[w] != usize::MAX {
                    return Err(Error::NotAMatching { vertex: w });
                }
            }
            partner[u] = v;
            partner[v] = u;
        }
        if let Some(v) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(Error::NotAMatching { vertex: v });
        }
        Ok(PerfectMatching {
            graph,
            edges,
            partner,
        })
    }

    pub fn graph(&self) -> &Arc<BipartiteGraph> {
        &self.graph
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn partner(&self, v: Vertex) -> Vertex {
        self.partner[v]
    }

    /// The matching `M Δ C` obtained by flipping an alternating cycle.
    ///
    /// Fails with [`Error::NotAMatching`] when the cycle is not alternating
    /// for this matching, and [`Error::NotACycle`] when a pair along the
    /// cycle is not an edge of the base graph.
    pub fn flip(&self, cycle: &Cycle) -> Result<PerfectMatching> {
        let Some(ids) = cycle.edge_ids(&self.graph) else {
            return Err(Error::NotACycle {
                reason: "cycle uses a non-edge of the base graph",
            });
        };
        let mut edges: Vec<EdgeId> = self.edges.clone();
        for e in ids {
            match edges.binary_search(&e) {
                Ok(pos) => {
                    edges.remove(pos);
                }
                Err(pos) => {
                    edges.insert(pos, e);
                }
            }
        }
        PerfectMatching::new(self.graph.clone(), edges)
    }
}

/// An arc-direction assignment for every edge of a bipartite graph.
///
/// `toward_b[e]` is true when edge `e` is directed from its A endpoint to its
/// B endpoint.
#[derive(Debug, Clone)]
pub struct Orientation {
    graph: Arc<BipartiteGraph>,
    toward_b: Vec<bool>,
}

impl PartialEq for Orientation {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.graph, &other.graph) && self.toward_b == other.toward_b
    }
}
impl Eq for Orientation {}

impl Orientation {
    pub fn new(graph: Arc<BipartiteGraph>, toward_b: Vec<bool>) -> Result<Self> {
        if toward_b.len() != graph.edge_count() {
            return Err(Error::Internal(format!(
                "orientation has {} direction flags for {} edges",
                toward_b.len(),
                graph.edge_count()
            )));
        }
        Ok(Orientation { graph, toward_b })
    }

    pub fn graph(&self) -> &Arc<BipartiteGraph> {
        &self.graph
    }

    pub fn toward_b(&self) -> &[bool] {
        &self.toward_b
    }

    /// Arc of edge `e` as an ordered global-vertex pair.
    pub fn arc(&self, e: EdgeId) -> (Vertex, Vertex) {
        let (a, b) = self.graph.endpoints(e);
        if self.toward_b[e] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// True when the arc of some edge runs `from -> to`.
    pub fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        match self.graph.edge_between(from, to) {
            Some(e) => self.arc(e) == (from, to),
            None => false,
        }
    }

    /// Out-neighbor lists `(target, edge)` per vertex, each sorted by target.
    pub fn out_adjacency(&self) -> Vec<Vec<(Vertex, EdgeId)>> {
        let mut out = vec![Vec::new(); self.graph.vertex_count()];
        for e in 0..self.toward_b.len() {
            let (from, to) = self.arc(e);
            out[from].push((to, e));
        }
        for list in &mut out {
            list.sort_unstable();
        }
        out
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.graph
            .incident_edges(v)
            .iter()
            .filter(|&&e| self.arc(e).0 == v)
            .count()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.graph.degree(v) - self.out_degree(v)
    }

    /// Checks that `c` is consistently directed here; returns the offending
    /// position otherwise.
    pub fn check_directed(&self, c: &Cycle) -> Result<()> {
        for (i, (u, v)) in c.arcs().enumerate() {
            if !self.has_arc(u, v) {
                return Err(Error::NotDirected { position: i });
            }
        }
        Ok(())
    }

    pub fn is_directed_cycle(&self, c: &Cycle) -> bool {
        self.check_directed(c).is_ok()
    }

    /// All simple directed cycles of length at most `max_len`, deterministic.
    pub fn directed_cycles(&self, max_len: usize) -> Vec<Cycle> {
        self.directed_cycles_capped(max_len, usize::MAX).0
    }

    /// Capped variant: the flag is false when enumeration stopped early.
    pub fn directed_cycles_capped(&self, max_len: usize, cap: usize) -> (Vec<Cycle>, bool) {
        let out = self.out_adjacency();
        let adj: Vec<Vec<usize>> = out
            .into_iter()
            .map(|l| l.into_iter().map(|(t, _)| t).collect())
            .collect();
        directed_cycles_from_adj(&adj, max_len, cap)
    }

    /// Edge set on which two orientations of one graph disagree.
    pub fn difference(&self, other: &Orientation) -> Result<Vec<EdgeId>> {
        if !same_base(&self.graph, &other.graph) {
            return Err(Error::BaseMismatch);
        }
        Ok((0..self.toward_b.len())
            .filter(|&e| self.toward_b[e] != other.toward_b[e])
            .collect())
    }
}

/// Directs every matching edge from A to B and every other edge from B to A,
/// so side A gets out-degree one and side B gets in-degree one.
pub fn matching_to_orientation(m: &PerfectMatching) -> Orientation {
    let g = m.graph().clone();
    let toward_b = (0..g.edge_count()).map(|e| m.contains(e)).collect();
    Orientation::new(g, toward_b).expect("edge count matches by construction")
}

/// Inverse of [`matching_to_orientation`]: reads the matching off the A-to-B
/// arcs, after checking the out/in-degree-one conditions.
pub fn orientation_to_matching(o: &Orientation) -> Result<PerfectMatching> {
    let g = o.graph();
    for i in 0..g.n_side() {
        let a = g.a_vertex(i);
        if o.out_degree(a) != 1 {
            return Err(Error::DegreeViolation { vertex: a });
        }
        let b = g.b_vertex(i);
        if o.in_degree(b) != 1 {
            return Err(Error::DegreeViolation { vertex: b });
        }
    }
    let edges: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| o.toward_b()[e]).collect();
    PerfectMatching::new(g.clone(), edges)
}

/// Reverts the orientation of every arc on a cycle directed in `o`.
pub fn flip_cycle(o: &Orientation, c: &Cycle) -> Result<Orientation> {
    o.check_directed(c)?;
    let mut toward_b = o.toward_b().to_vec();
    for (u, v) in c.arcs() {
        let e = o.graph().edge_between(u, v).expect("checked directed");
        toward_b[e] = !toward_b[e];
    }
    Orientation::new(o.graph().clone(), toward_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C4: two A vertices, two B vertices, all four edges.
    pub(crate) fn c4() -> Arc<BipartiteGraph> {
        BipartiteGraph::build(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    fn matching(g: &Arc<BipartiteGraph>, pairs: &[(usize, usize)]) -> PerfectMatching {
        let ids: Vec<EdgeId> = pairs
            .iter()
            .map(|&(a, b)| g.edge_between(g.a_vertex(a), g.b_vertex(b)).unwrap())
            .collect();
        PerfectMatching::new(g.clone(), ids).unwrap()
    }

    #[test]
    fn c4_matching_orientation_directions() {
        let g = c4();
        let m1 = matching(&g, &[(0, 0), (1, 1)]);
        let o = matching_to_orientation(&m1);
        assert!(o.has_arc(g.a_vertex(0), g.b_vertex(0)));
        assert!(o.has_arc(g.a_vertex(1), g.b_vertex(1)));
        assert!(o.has_arc(g.b_vertex(1), g.a_vertex(0)));
        assert!(o.has_arc(g.b_vertex(0), g.a_vertex(1)));
    }

    #[test]
    fn single_edge_graph_orients_the_edge() {
        let g = BipartiteGraph::build(1, 1, &[(0, 0)]).unwrap();
        let m = PerfectMatching::new(g.clone(), vec![0]).unwrap();
        let o = matching_to_orientation(&m);
        assert!(o.has_arc(g.a_vertex(0), g.b_vertex(0)));
        assert_eq!(orientation_to_matching(&o).unwrap(), m);
    }

    #[test]
    fn c4_round_trip_is_identity() {
        let g = c4();
        let m1 = matching(&g, &[(0, 0), (1, 1)]);
        let back = orientation_to_matching(&matching_to_orientation(&m1)).unwrap();
        assert_eq!(back, m1);
    }

    #[test]
    fn degree_violation_detected() {
        let g = c4();
        // a0->b0, a1->b0, b1->a0, b1->a1: b0 has in-degree 2.
        let dirs = [g.edge_between(0, 2).unwrap(), g.edge_between(1, 2).unwrap()];
        let toward_b = (0..g.edge_count()).map(|e| dirs.contains(&e)).collect();
        let o = Orientation::new(g.clone(), toward_b).unwrap();
        match orientation_to_matching(&o) {
            Err(Error::DegreeViolation { vertex }) => assert_eq!(vertex, g.b_vertex(0)),
            other => panic!("expected DegreeViolation, got {other:?}"),
        }
    }

    #[test]
    fn flip_c4_swaps_matchings() {
        let g = c4();
        let m1 = matching(&g, &[(0, 0), (1, 1)]);
        let m2 = matching(&g, &[(0, 1), (1, 0)]);
        let o1 = matching_to_orientation(&m1);
        // The unique directed cycle: a0 -> b0 -> a1 -> b1 -> a0.
        let cyc = Cycle::new(vec![0, 2, 1, 3]).unwrap();
        let o2 = flip_cycle(&o1, &cyc).unwrap();
        assert_eq!(orientation_to_matching(&o2).unwrap(), m2);
        // Flipping twice is the identity.
        let back = flip_cycle(&o2, &cyc.reversed()).unwrap();
        assert_eq!(back, o1);
    }

    #[test]
    fn flip_rejects_undirected_cycle() {
        let g = c4();
        let m1 = matching(&g, &[(0, 0), (1, 1)]);
        let o1 = matching_to_orientation(&m1);
        let wrong_way = Cycle::new(vec![0, 3, 1, 2]).unwrap();
        assert!(matches!(
            flip_cycle(&o1, &wrong_way),
            Err(Error::NotDirected { .. })
        ));
    }

    #[test]
    fn duplicate_edges_rejected() {
        let err = BipartiteGraph::build(2, 2, &[(0, 0), (0, 0)]).unwrap_err();
        assert_eq!(err, Error::DuplicateEdge { a: 0, b: 0 });
    }

    #[test]
    fn unbalanced_sides_rejected() {
        assert!(matches!(
            BipartiteGraph::build(2, 3, &[]),
            Err(Error::UnbalancedSides { .. })
        ));
    }

    #[test]
    fn digraph_rejects_loops_and_parallels() {
        assert!(matches!(
            Digraph::build(2, &[(0, 0)]),
            Err(Error::SelfLoop { vertex: 0 })
        ));
        assert!(matches!(
            Digraph::build(2, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateArc { .. })
        ));
    }

    #[test]
    fn digraph_cycle_enumeration_triangle() {
        let d = Digraph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let (cycles, complete) = d.directed_cycles_capped(10, 100);
        assert!(complete);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices(), &[0, 1, 2]);
        assert!(d.is_hamiltonian_cycle(&cycles[0]));
    }

    #[test]
    fn cycle_canonical_rotation_and_reverse() {
        let c = Cycle::new(vec![5, 3, 8, 4]).unwrap();
        assert_eq!(c.vertices(), &[3, 8, 4, 5]);
        assert_eq!(c.reversed().vertices(), &[3, 5, 4, 8]);
        assert_eq!(c.undirected_key(), c.reversed().undirected_key());
    }
}
