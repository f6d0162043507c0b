//! Long-cycle recovery from flip traces.
//!
//! Given orientations `D_0, ..., D_t` of one graph obtained by successively
//! flipping directed cycles, and a directed cycle `C` in `D_t` with
//! `|C| > ell^(t+1)`, [`recover_long_cycle`] computes a directed cycle of
//! length at least `ell` in `D_0` in polynomial time.
//!
//! The machinery follows the proof: recompute the flipped cycles from the
//! orientation differences, form the union subgraph `H` of the flipped
//! cycles and check that every component of `H` induces a strongly connected
//! subdigraph of `D_0`, translate `C` into a weighted multigraph on the
//! component labels, decompose that multigraph into arc-disjoint simple
//! cycles, and stitch each one back into a directed cycle of `D_0` whose
//! length is at least its weight. When no stitched cycle is long enough, a
//! counting argument guarantees some flipped cycle is itself long enough to
//! recurse on with a shorter trace.

use std::collections::HashMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{flip_cycle, same_base, BipartiteGraph, Cycle, EdgeId, Orientation, Vertex};

/// A sequence of orientations `D_0, ..., D_t` where each step flips one
/// directed cycle, together with those cycles `C_1, ..., C_t`.
#[derive(Debug, Clone)]
pub struct FlipTrace {
    orientations: Vec<Orientation>,
    flipped: Vec<Cycle>,
}

impl FlipTrace {
    /// Builds a trace from its orientation sequence, recomputing and
    /// verifying the flipped cycles from the pairwise differences.
    pub fn new(orientations: Vec<Orientation>) -> Result<Self> {
        if orientations.is_empty() {
            return Err(Error::Internal(
                "trace needs at least one orientation".into(),
            ));
        }
        for o in &orientations[1..] {
            if !same_base(orientations[0].graph(), o.graph()) {
                return Err(Error::BaseMismatch);
            }
        }
        let flipped = compute_flip_cycles(&orientations)?;
        Ok(FlipTrace {
            orientations,
            flipped,
        })
    }

    /// Builds a trace by flipping the given cycles in order, starting from `d0`.
    pub fn from_flips(d0: Orientation, cycles: &[Cycle]) -> Result<Self> {
        let mut orientations = vec![d0];
        for c in cycles {
            let next = flip_cycle(orientations.last().unwrap(), c)?;
            orientations.push(next);
        }
        Ok(FlipTrace {
            orientations,
            flipped: cycles.to_vec(),
        })
    }

    /// Number of flips `t`.
    pub fn flip_count(&self) -> usize {
        self.flipped.len()
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orientations
    }

    pub fn flipped(&self) -> &[Cycle] {
        &self.flipped
    }

    pub fn initial(&self) -> &Orientation {
        &self.orientations[0]
    }

    pub fn last(&self) -> &Orientation {
        self.orientations.last().unwrap()
    }

    /// The prefix trace `D_0, ..., D_{i-1}` with the first `i - 1` flips.
    pub fn prefix(&self, i: usize) -> FlipTrace {
        FlipTrace {
            orientations: self.orientations[..i].to_vec(),
            flipped: self.flipped[..i.saturating_sub(1)].to_vec(),
        }
    }
}

/// Recomputes `C_1, ..., C_t` from consecutive orientation differences.
///
/// Fails with [`Error::NotAFlip`] when some difference is not a single cycle
/// directed in the earlier orientation.
pub fn compute_flip_cycles(orientations: &[Orientation]) -> Result<Vec<Cycle>> {
    let mut cycles = Vec::new();
    for (step, pair) in orientations.windows(2).enumerate() {
        let (before, after) = (&pair[0], &pair[1]);
        let diff = before.difference(after)?;
        let cycle = single_directed_cycle_from_edges(before, &diff)
            .ok_or(Error::NotAFlip { step: step + 1 })?;
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Interprets an edge set as one directed cycle of `o`, if it is one.
fn single_directed_cycle_from_edges(o: &Orientation, edges: &[EdgeId]) -> Option<Cycle> {
    if edges.is_empty() {
        return None;
    }
    // Outgoing arc per vertex within the edge set; a directed cycle has
    // exactly one per covered vertex.
    let mut out: HashMap<Vertex, Vertex> = HashMap::new();
    let mut start = usize::MAX;
    for &e in edges {
        let (from, to) = o.arc(e);
        if out.insert(from, to).is_some() {
            return None;
        }
        start = start.min(from);
    }
    let mut seq = vec![start];
    let mut at = *out.get(&start)?;
    while at != start {
        seq.push(at);
        at = *out.get(&at)?;
        if seq.len() > edges.len() {
            return None;
        }
    }
    if seq.len() != edges.len() {
        return None; // disconnected difference
    }
    Cycle::new(seq).ok()
}

/// The union subgraph `H` of the flipped cycles, with its connected
/// components and the verified strong-connectivity property in `D_0`.
#[derive(Debug, Clone)]
pub struct CycleUnion {
    /// Sorted vertex set of `H`.
    vertices: Vec<Vertex>,
    /// Sorted edge ids of `H`.
    edges: Vec<EdgeId>,
    /// Component index per global vertex (`None` outside `H`).
    component_of: Vec<Option<usize>>,
    /// Component vertex sets, each sorted, ordered by smallest vertex.
    components: Vec<Vec<Vertex>>,
}

impl CycleUnion {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn components(&self) -> &[Vec<Vertex>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_of(&self, v: Vertex) -> Option<usize> {
        self.component_of.get(v).copied().flatten()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.component_of(v).is_some()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

/// Forward/backward reachability check: does `verts` induce a strongly
/// connected subdigraph of `o`?
fn strongly_connected_in(o: &Orientation, verts: &[Vertex]) -> bool {
    if verts.is_empty() {
        return true;
    }
    let g = o.graph();
    let in_set: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let reach = |forward: bool| -> usize {
        let mut seen = vec![false; verts.len()];
        seen[0] = true;
        let mut stack = vec![verts[0]];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &e in g.incident_edges(v) {
                let (from, to) = o.arc(e);
                let w = if forward {
                    if from != v {
                        continue;
                    }
                    to
                } else {
                    if to != v {
                        continue;
                    }
                    from
                };
                if let Some(&i) = in_set.get(&w) {
                    if !seen[i] {
                        seen[i] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
        }
        count
    };
    reach(true) == verts.len() && reach(false) == verts.len()
}

/// Builds `H` as the union of the flipped cycles and checks that every
/// component induces a strongly connected subdigraph of `d0`.
pub fn build_union_components(cycles: &[Cycle], d0: &Orientation) -> Result<CycleUnion> {
    let g = d0.graph();
    let mut edge_set: Vec<EdgeId> = Vec::new();
    for c in cycles {
        let ids = c.edge_ids(g).ok_or(Error::NotACycle {
            reason: "flipped cycle uses a non-edge of the base graph",
        })?;
        edge_set.extend(ids);
    }
    edge_set.sort_unstable();
    edge_set.dedup();

    let mut vertices: Vec<Vertex> = edge_set
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.endpoints(e);
            [u, v]
        })
        .collect();
    vertices.sort_unstable();
    vertices.dedup();

    // Undirected components of H.
    let mut component_of: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut incident: HashMap<Vertex, Vec<EdgeId>> = HashMap::new();
    for &e in &edge_set {
        let (u, v) = g.endpoints(e);
        incident.entry(u).or_default().push(e);
        incident.entry(v).or_default().push(e);
    }
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    for &v in &vertices {
        if component_of[v].is_some() {
            continue;
        }
        let idx = components.len();
        let mut comp = vec![v];
        component_of[v] = Some(idx);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &e in &incident[&x] {
                let y = g.opposite(e, x);
                if component_of[y].is_none() {
                    component_of[y] = Some(idx);
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }

    for (r, comp) in components.iter().enumerate() {
        if !strongly_connected_in(d0, comp) {
            return Err(Error::ClaimViolation { component: r });
        }
    }

    Ok(CycleUnion {
        vertices,
        edges: edge_set,
        component_of,
        components,
    })
}

/// One arc of the auxiliary multigraph: a maximal subsequence of `C` whose
/// interior avoids `H`, recorded with its full vertex path along `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiArc {
    pub from: usize,
    pub to: usize,
    /// Number of `C`-arcs the subsequence represents.
    pub weight: usize,
    /// Vertex path `x_i, ..., x_j` (endpoints included; equal endpoints mean
    /// the subsequence wraps all of `C`).
    pub path: Vec<Vertex>,
}

/// The weighted directed multigraph on component labels built from `C`.
#[derive(Debug, Clone)]
pub struct ComponentMultigraph {
    label_count: usize,
    arcs: Vec<MultiArc>,
}

impl ComponentMultigraph {
    /// Assembles a multigraph directly from parts.
    pub fn from_parts(label_count: usize, arcs: Vec<MultiArc>) -> Self {
        ComponentMultigraph { label_count, arcs }
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn arcs(&self) -> &[MultiArc] {
        &self.arcs
    }

    pub fn total_weight(&self) -> usize {
        self.arcs.iter().map(|a| a.weight).sum()
    }
}

/// Builds the label multigraph of a directed cycle `c` against the union
/// subgraph: one arc per maximal subsequence of `c` whose interior avoids
/// `H`, weighted by its arc count.
pub fn build_label_multigraph(c: &Cycle, u: &CycleUnion) -> Result<ComponentMultigraph> {
    let verts = c.vertices();
    let k = verts.len();
    let hits: Vec<usize> = (0..k).filter(|&i| u.contains_vertex(verts[i])).collect();
    if hits.is_empty() {
        return Err(Error::Internal(
            "cycle is disjoint from the union subgraph; the driver handles this case".into(),
        ));
    }
    let mut arcs = Vec::with_capacity(hits.len());
    for (pos, &i) in hits.iter().enumerate() {
        let j = hits[(pos + 1) % hits.len()];
        let weight = if hits.len() == 1 { k } else { (j + k - i) % k };
        let mut path = Vec::with_capacity(weight + 1);
        for step in 0..=weight {
            path.push(verts[(i + step) % k]);
        }
        arcs.push(MultiArc {
            from: u.component_of(verts[i]).unwrap(),
            to: u.component_of(verts[j]).unwrap(),
            weight,
            path,
        });
    }
    let m = ComponentMultigraph {
        label_count: u.component_count(),
        arcs,
    };
    debug_assert_eq!(m.total_weight(), k);
    debug_assert_eq!(m.arcs.len(), hits.len());
    Ok(m)
}

/// Decomposes the multigraph into arc-disjoint simple directed cycles
/// (loops included), returned as lists of arc indices, by deterministic
/// cycle peeling. Requires every label to have equal in- and out-degree.
pub fn eulerian_cycle_decomposition(m: &ComponentMultigraph) -> Result<Vec<Vec<usize>>> {
    let mut in_deg = vec![0usize; m.label_count];
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); m.label_count];
    for (i, a) in m.arcs.iter().enumerate() {
        in_deg[a.to] += 1;
        out_arcs[a.from].push(i);
    }
    for (label, outs) in out_arcs.iter().enumerate() {
        if in_deg[label] != outs.len() {
            return Err(Error::Unbalanced {
                label,
                in_deg: in_deg[label],
                out_deg: outs.len(),
            });
        }
    }

    let mut used = vec![false; m.arcs.len()];
    let mut cursor = vec![0usize; m.label_count];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for seed in 0..m.arcs.len() {
        if used[seed] {
            continue;
        }
        // Walk from the seed, peeling a simple cycle whenever the walk
        // returns to a label it already departed from.
        let mut walk: Vec<usize> = Vec::new();
        let mut departed: HashMap<usize, usize> = HashMap::new();
        let push = |walk: &mut Vec<usize>,
                    departed: &mut HashMap<usize, usize>,
                    used: &mut Vec<bool>,
                    arc: usize,
                    m: &ComponentMultigraph| {
            departed.insert(m.arcs[arc].from, walk.len());
            walk.push(arc);
            used[arc] = true;
        };
        push(&mut walk, &mut departed, &mut used, seed, m);
        loop {
            let here = m.arcs[*walk.last().unwrap()].to;
            if let Some(&j) = departed.get(&here) {
                let cycle: Vec<usize> = walk.split_off(j);
                for &a in &cycle {
                    departed.remove(&m.arcs[a].from);
                }
                cycles.push(cycle);
                if walk.is_empty() {
                    break;
                }
                continue;
            }
            let next = out_arcs[here][cursor[here]..]
                .iter()
                .copied()
                .find(|&a| !used[a]);
            // Balance guarantees an unused out-arc whenever the walk sits at
            // a label it has entered more often than departed.
            let next = next.ok_or_else(|| {
                Error::Internal("balanced multigraph ran out of out-arcs mid-walk".into())
            })?;
            while cursor[here] < out_arcs[here].len() && used[out_arcs[here][cursor[here]]] {
                cursor[here] += 1;
            }
            push(&mut walk, &mut departed, &mut used, next, m);
        }
    }
    debug_assert_eq!(
        cycles.iter().map(Vec::len).sum::<usize>(),
        m.arcs.len(),
        "decomposition must cover all arcs"
    );
    Ok(cycles)
}

/// Shortest directed path between two vertices inside one component of the
/// union subgraph, through arcs of `d0`. BFS with ascending tie-breaking.
fn connector_path(
    d0: &Orientation,
    u: &CycleUnion,
    component: usize,
    from: Vertex,
    to: Vertex,
) -> Result<Vec<Vertex>> {
    if from == to {
        return Ok(vec![from]);
    }
    let g = d0.graph();
    let comp = &u.components()[component];
    let index: HashMap<Vertex, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut prev: Vec<Option<Vertex>> = vec![None; comp.len()];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    prev[index[&from]] = Some(from);
    while let Some(v) = queue.pop_front() {
        let mut next: Vec<Vertex> = g
            .incident_edges(v)
            .iter()
            .filter_map(|&e| {
                let (a, b) = d0.arc(e);
                (a == v).then_some(b)
            })
            .filter(|w| index.contains_key(w))
            .collect();
        next.sort_unstable();
        for w in next {
            let i = index[&w];
            if prev[i].is_none() {
                prev[i] = Some(v);
                if w == to {
                    let mut path = vec![to];
                    let mut at = to;
                    while at != from {
                        at = prev[index[&at]].unwrap();
                        path.push(at);
                    }
                    path.reverse();
                    return Ok(path);
                }
                queue.push_back(w);
            }
        }
    }
    Err(Error::ClaimViolation { component })
}

/// Shortest directed cycle through `v` inside one component, in `d0`.
fn shortest_cycle_through(
    d0: &Orientation,
    u: &CycleUnion,
    component: usize,
    v: Vertex,
) -> Result<Cycle> {
    let g = d0.graph();
    // Successors of v within the component; BFS each back to v.
    let mut best: Option<Vec<Vertex>> = None;
    let mut succ: Vec<Vertex> = g
        .incident_edges(v)
        .iter()
        .filter_map(|&e| {
            let (a, b) = d0.arc(e);
            (a == v).then_some(b)
        })
        .filter(|&w| u.component_of(w) == Some(component))
        .collect();
    succ.sort_unstable();
    for w in succ {
        if let Ok(path) = connector_path(d0, u, component, w, v) {
            let len = path.len();
            if best.as_ref().is_none_or(|b| len < b.len()) {
                best = Some(path);
            }
        }
    }
    let mut path = best.ok_or(Error::ClaimViolation { component })?;
    // path runs w -> ... -> v; prepend v to close v -> w -> ... -> v.
    path.pop();
    let mut seq = vec![v];
    seq.extend(path);
    Cycle::new(seq)
}

/// Checks whether a multi-arc's stored path is directed in `d0`.
fn path_directed(d0: &Orientation, path: &[Vertex]) -> bool {
    path.windows(2).all(|w| d0.has_arc(w[0], w[1]))
}

/// Stitches one simple cycle of the multigraph decomposition into a directed
/// cycle of `d0` with length at least the walk's total weight.
///
/// Path segments lying outside `H` keep their orientation from `D_t`;
/// segments that are a single arc inside `H` (always a loop in the
/// multigraph) are rerouted through their strongly connected component.
pub fn stitch_cycle(
    walk: &[usize],
    m: &ComponentMultigraph,
    u: &CycleUnion,
    d0: &Orientation,
) -> Result<Cycle> {
    if walk.is_empty() {
        return Err(Error::Internal("empty walk".into()));
    }
    let g = d0.graph();
    let weight: usize = walk.iter().map(|&a| m.arcs[a].weight).sum();

    // Loop whose path wraps the whole cycle: the path is itself a directed
    // cycle of D_0 (all its arcs avoid H).
    if walk.len() == 1 {
        let arc = &m.arcs[walk[0]];
        if arc.path.first() == arc.path.last() && arc.path.len() > 1 {
            let seq: Vec<Vertex> = arc.path[..arc.path.len() - 1].to_vec();
            let k = Cycle::new(seq)?;
            d0.check_directed(&k)
                .map_err(|_| Error::Internal("wrap-around segment not directed in D0".into()))?;
            return finish_stitch(k, weight, d0);
        }
        // Single arc whose edge lies inside H: its D_0 orientation is not
        // guaranteed, so use any short directed cycle of the component.
        if arc.weight == 1 {
            let e = g
                .edge_between(arc.path[0], arc.path[1])
                .ok_or(Error::Internal("multi-arc path uses a non-edge".into()))?;
            if u.contains_edge(e) {
                let k = shortest_cycle_through(d0, u, arc.from, arc.path[0])?;
                return finish_stitch(k, weight, d0);
            }
        }
    }

    // General case: concatenate the path segments, joined by connector
    // paths inside the strongly connected components at the junctions.
    let s = walk.len();
    let mut seq: Vec<Vertex> = Vec::new();
    for j in 0..s {
        let prev = &m.arcs[walk[(j + s - 1) % s]];
        let here = &m.arcs[walk[j]];
        if !path_directed(d0, &here.path) {
            return Err(Error::Internal(
                "segment outside H changed orientation between D_0 and D_t".into(),
            ));
        }
        let junction_component = here.from;
        let arrive = *prev.path.last().unwrap();
        let depart = here.path[0];
        let connector = connector_path(d0, u, junction_component, arrive, depart)?;
        seq.extend(&connector[..connector.len() - 1]);
        seq.extend(&here.path[..here.path.len() - 1]);
    }
    let k = Cycle::new(seq)?;
    finish_stitch(k, weight, d0)
}

fn finish_stitch(k: Cycle, weight: usize, d0: &Orientation) -> Result<Cycle> {
    d0.check_directed(&k)
        .map_err(|_| Error::Internal("stitched cycle not directed in D0".into()))?;
    if k.len() < weight {
        return Err(Error::Internal(format!(
            "stitched cycle of length {} shorter than walk weight {}",
            k.len(),
            weight
        )));
    }
    Ok(k)
}

/// The complete recovery driver: returns a directed cycle of `D_0` with
/// length at least `ell`, given a directed cycle `c` of `D_t` with
/// `|c| > ell^(t+1)`.
pub fn recover_long_cycle(ell: usize, trace: &FlipTrace, c: &Cycle) -> Result<Cycle> {
    let out = recover_inner(ell, trace, c)?;
    // Every output is verifiable in isolation; check before handing it out.
    trace
        .initial()
        .check_directed(&out)
        .map_err(|_| Error::Internal("recovered cycle not directed in D0".into()))?;
    if out.len() < ell {
        return Err(Error::Internal(format!(
            "recovered cycle of length {} below ell = {ell}",
            out.len()
        )));
    }
    Ok(out)
}

fn recover_inner(ell: usize, trace: &FlipTrace, c: &Cycle) -> Result<Cycle> {
    let t = trace.flip_count();
    trace.last().check_directed(c)?;
    let bound = (ell as u128).pow(t as u32 + 1);
    if (c.len() as u128) <= bound {
        return Err(Error::PreconditionViolated {
            len: c.len(),
            bound,
        });
    }
    if t == 0 {
        return Ok(c.clone());
    }

    let union = build_union_components(trace.flipped(), trace.initial())?;
    if c.vertices().iter().all(|&v| !union.contains_vertex(v)) {
        // Disjoint from every flipped cycle, hence already directed in D_0.
        return Ok(c.clone());
    }

    let m = build_label_multigraph(c, &union)?;
    if m.total_weight() != c.len() {
        return Err(Error::Internal(
            "multigraph weight does not conserve |C|".into(),
        ));
    }
    let walks = eulerian_cycle_decomposition(&m)?;
    for walk in &walks {
        let k = stitch_cycle(walk, &m, &union, trace.initial())?;
        if k.len() >= ell {
            return Ok(k);
        }
    }

    // All stitched cycles were short; some flipped cycle must be long.
    for i in 1..=t {
        let threshold = (ell as u128).pow(i as u32);
        let ci = &trace.flipped()[i - 1];
        if (ci.len() as u128) > threshold {
            return recover_inner(ell, &trace.prefix(i), ci);
        }
    }
    Err(Error::NoPigeonholeCycle)
}

/// Longest directed cycle found by bounded enumeration; exact whenever the
/// enumeration completes within the cap.
pub fn longest_directed_cycle(o: &Orientation, cap: usize) -> (Option<Cycle>, bool) {
    let (cycles, complete) = o.directed_cycles_capped(o.graph().vertex_count().max(4), cap);
    let longest = cycles.into_iter().max_by_key(|c| {
        // Stable: prefer longer, then canonical order among equals.
        (c.len(), std::cmp::Reverse(c.vertices().to_vec()))
    });
    (longest, complete)
}

/// Random test traces: a random bipartite graph and orientation, then up to
/// `t` flips of randomly chosen directed cycles. The actual number of flips
/// can be smaller when an intermediate orientation becomes acyclic.
pub fn random_flip_trace(seed: u64, n_side: usize, p: f64, t: usize) -> Result<FlipTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n_side {
        for b in 0..n_side {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let graph = BipartiteGraph::build(n_side, n_side, &edges)?;
    let toward_b: Vec<bool> = (0..graph.edge_count()).map(|_| rng.gen_bool(0.5)).collect();
    let d0 = Orientation::new(graph, toward_b)?;
    let mut orientations = vec![d0];
    let mut flips = Vec::new();
    for _ in 0..t {
        let current = orientations.last().unwrap();
        let (cycles, _) = current.directed_cycles_capped(2 * n_side, 2000);
        if cycles.is_empty() {
            break;
        }
        let pick = cycles[rng.gen_range(0..cycles.len())].clone();
        orientations.push(flip_cycle(current, &pick)?);
        flips.push(pick);
    }
    Ok(FlipTrace {
        orientations,
        flipped: flips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{matching_to_orientation, BipartiteGraph, PerfectMatching};
    use std::sync::Arc;

    fn c4() -> Arc<BipartiteGraph> {
        BipartiteGraph::build(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    #[test]
    fn empty_trace_has_no_flip_cycles() {
        let g = c4();
        let m = PerfectMatching::new(g, vec![0, 3]).unwrap();
        let trace = FlipTrace::new(vec![matching_to_orientation(&m)]).unwrap();
        assert_eq!(trace.flip_count(), 0);
        assert!(trace.flipped().is_empty());
    }

    #[test]
    fn single_flip_recovered_exactly() {
        let g = c4();
        let m = PerfectMatching::new(g, vec![0, 3]).unwrap();
        let d0 = matching_to_orientation(&m);
        let cycle = d0.directed_cycles(4).pop().unwrap();
        let d1 = flip_cycle(&d0, &cycle).unwrap();
        let recovered = compute_flip_cycles(&[d0, d1]).unwrap();
        assert_eq!(recovered, vec![cycle]);
    }

    #[test]
    fn corrupted_trace_is_rejected() {
        let g = c4();
        let m = PerfectMatching::new(g.clone(), vec![0, 3]).unwrap();
        let d0 = matching_to_orientation(&m);
        // Change a single edge direction by hand: not a cycle flip.
        let mut flags = d0.toward_b().to_vec();
        flags[0] = !flags[0];
        let broken = Orientation::new(g, flags).unwrap();
        assert!(matches!(
            compute_flip_cycles(&[d0, broken]),
            Err(Error::NotAFlip { step: 1 })
        ));
    }

    #[test]
    fn single_flipped_cycle_forms_one_strong_component() {
        let g = c4();
        let m = PerfectMatching::new(g, vec![0, 3]).unwrap();
        let d0 = matching_to_orientation(&m);
        let cycle = d0.directed_cycles(4).pop().unwrap();
        let union = build_union_components(std::slice::from_ref(&cycle), &d0).unwrap();
        assert_eq!(union.component_count(), 1);
        assert_eq!(union.components()[0].len(), 4);
    }

    #[test]
    fn disjoint_flipped_cycles_form_two_components() {
        // Two disjoint C4 blocks.
        let g = BipartiteGraph::build(
            4,
            4,
            &[
                (0, 0),
                (0, 1),
                (1, 0),
                (1, 1),
                (2, 2),
                (2, 3),
                (3, 2),
                (3, 3),
            ],
        )
        .unwrap();
        let edge = |a: usize, b: usize| g.edge_between(a, 4 + b).unwrap();
        let m = PerfectMatching::new(
            g.clone(),
            vec![edge(0, 0), edge(1, 1), edge(2, 2), edge(3, 3)],
        )
        .unwrap();
        let d0 = matching_to_orientation(&m);
        let cycles = d0.directed_cycles(8);
        assert_eq!(cycles.len(), 2);
        let union = build_union_components(&cycles, &d0).unwrap();
        assert_eq!(union.component_count(), 2);
    }

    #[test]
    fn recover_with_empty_trace_returns_input() {
        let g = c4();
        let m = PerfectMatching::new(g, vec![0, 3]).unwrap();
        let d0 = matching_to_orientation(&m);
        let cycle = d0.directed_cycles(4).pop().unwrap();
        let trace = FlipTrace::new(vec![d0]).unwrap();
        let out = recover_long_cycle(3, &trace, &cycle).unwrap();
        assert_eq!(out, cycle);
        // Precondition gate: |c| = 4 must exceed ell^(t+1).
        assert!(matches!(
            recover_long_cycle(4, &trace, &cycle),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn recover_returns_disjoint_cycle_unchanged() {
        // Two disjoint C4 blocks: flip one, ask about the other.
        let g = BipartiteGraph::build(
            4,
            4,
            &[
                (0, 0),
                (0, 1),
                (1, 0),
                (1, 1),
                (2, 2),
                (2, 3),
                (3, 2),
                (3, 3),
            ],
        )
        .unwrap();
        let edge = |a: usize, b: usize| g.edge_between(a, 4 + b).unwrap();
        let m = PerfectMatching::new(
            g.clone(),
            vec![edge(0, 0), edge(1, 1), edge(2, 2), edge(3, 3)],
        )
        .unwrap();
        let d0 = matching_to_orientation(&m);
        let cycles = d0.directed_cycles(8);
        let (first, second) = (cycles[0].clone(), cycles[1].clone());
        let trace = FlipTrace::from_flips(d0, &[first]).unwrap();
        // |c| = 4 > 1^2, and the disjoint branch hands c back unchanged.
        let out = recover_long_cycle(1, &trace, &second).unwrap();
        assert_eq!(out, second);
    }

    #[test]
    fn eulerian_decomposition_examples() {
        // A single loop of weight 7.
        let m = ComponentMultigraph {
            label_count: 1,
            arcs: vec![MultiArc {
                from: 0,
                to: 0,
                weight: 7,
                path: vec![0; 8],
            }],
        };
        let walks = eulerian_cycle_decomposition(&m).unwrap();
        assert_eq!(walks, vec![vec![0]]);
        assert_eq!(m.arcs()[0].weight, 7);

        // Arcs 1->2, 2->1, 1->2, 2->1: two arc-disjoint 2-cycles.
        let arc = |from: usize, to: usize| MultiArc {
            from,
            to,
            weight: 1,
            path: vec![0, 1],
        };
        let m = ComponentMultigraph {
            label_count: 2,
            arcs: vec![arc(0, 1), arc(1, 0), arc(0, 1), arc(1, 0)],
        };
        let walks = eulerian_cycle_decomposition(&m).unwrap();
        assert_eq!(walks.len(), 2);
        let mut all: Vec<usize> = walks.into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);

        // Unbalanced multigraph is rejected.
        let m = ComponentMultigraph {
            label_count: 2,
            arcs: vec![arc(0, 1)],
        };
        assert!(matches!(
            eulerian_cycle_decomposition(&m),
            Err(Error::Unbalanced { .. })
        ));
    }
}
