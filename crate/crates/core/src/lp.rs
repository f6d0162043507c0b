//! The linear-programming view of the matching polytope.
//!
//! The polytope is `{ x >= 0 : sum of x_e over e incident to v equals 1 }`;
//! its vertices are exactly the perfect-matching incidence vectors, and its
//! circuits are the signed even-cycle vectors. A circuit move from a vertex
//! walks a skeleton edge, so pivot rules over circuits trace monotone
//! skeleton paths. All arithmetic here is exact rational; there is no
//! floating point anywhere in this module.

use std::cmp::Ordering;
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{
    matching_to_orientation, same_base, BipartiteGraph, Cycle, EdgeId, PerfectMatching, Vertex,
};
use crate::skeleton::{is_adjacent, FlipPath};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Nonnegative exact rational weight per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    graph: Arc<BipartiteGraph>,
    weights: Vec<Rational>,
}

impl WeightFunction {
    pub fn new(graph: Arc<BipartiteGraph>, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != graph.edge_count() {
            return Err(Error::Internal(format!(
                "{} weights for {} edges",
                weights.len(),
                graph.edge_count()
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Internal("negative edge weight".into()));
        }
        Ok(WeightFunction { graph, weights })
    }

    pub fn graph(&self) -> &Arc<BipartiteGraph> {
        &self.graph
    }

    pub fn weight(&self, e: EdgeId) -> &Rational {
        &self.weights[e]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn matching_weight(&self, m: &PerfectMatching) -> Rational {
        m.edge_ids().iter().map(|&e| &self.weights[e]).sum()
    }
}

/// Monotone witness weights for a distance-two pair `(m1, m2)` with
/// midpoint `m_mid`:
/// a witness edge of `m1` gets weight 0, edges of `m2` get `1 + 1/N`, and
/// everything else gets 1. Then `m2` is the unique maximum-weight perfect
/// matching and `w(m1) < w(m_mid) < w(m2)`.
pub fn monotone_weights(
    m1: &PerfectMatching,
    m_mid: &PerfectMatching,
    m2: &PerfectMatching,
) -> Result<WeightFunction> {
    let g = m1.graph();
    if !same_base(g, m_mid.graph()) || !same_base(g, m2.graph()) {
        return Err(Error::BaseMismatch);
    }
    let distance_two = m1 != m_mid
        && m_mid != m2
        && m1 != m2
        && is_adjacent(m1, m_mid)?
        && is_adjacent(m_mid, m2)?
        && !is_adjacent(m1, m2)?;
    if !distance_two {
        return Err(Error::NotDistanceTwo);
    }
    let e0 = m1
        .edge_ids()
        .iter()
        .copied()
        .find(|&e| !m2.contains(e) && !m_mid.contains(e))
        .ok_or(Error::NoWitnessEdge)?;
    let n = g.vertex_count() as i64;
    let heavy = rational(n + 1, n);
    let weights = (0..g.edge_count())
        .map(|e| {
            if e == e0 {
                Rational::zero()
            } else if m2.contains(e) {
                heavy.clone()
            } else {
                Rational::one()
            }
        })
        .collect();
    WeightFunction::new(g.clone(), weights)
}

/// A circuit of the polytope: `+alpha` on one alternation class of an even
/// cycle, `-alpha` on the other, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitVector {
    graph: Arc<BipartiteGraph>,
    cycle: Cycle,
    magnitude: Rational,
    positive: Vec<EdgeId>,
    negative: Vec<EdgeId>,
}

impl CircuitVector {
    /// Builds the circuit over `cycle` with magnitude `alpha`; `plus_first`
    /// puts the positive sign on the edge leaving the cycle's first vertex.
    pub fn new(
        graph: Arc<BipartiteGraph>,
        cycle: Cycle,
        alpha: Rational,
        plus_first: bool,
    ) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::Internal("circuit magnitude must be positive".into()));
        }
        if !cycle.len().is_multiple_of(2) || cycle.len() < 4 {
            return Err(Error::NotACycle {
                reason: "circuit support must be an even cycle",
            });
        }
        let ids = cycle.edge_ids(&graph).ok_or(Error::NotACycle {
            reason: "cycle uses a non-edge of the base graph",
        })?;
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (i, e) in ids.into_iter().enumerate() {
            if (i % 2 == 0) == plus_first {
                positive.push(e);
            } else {
                negative.push(e);
            }
        }
        positive.sort_unstable();
        negative.sort_unstable();
        Ok(CircuitVector {
            graph,
            cycle,
            magnitude: alpha,
            positive,
            negative,
        })
    }

    /// The move direction that flips `cycle` out of matching `m`: positive
    /// on the non-matching edges, negative on the matching edges.
    pub fn for_flip(m: &PerfectMatching, cycle: Cycle, alpha: Rational) -> Result<Self> {
        let first_edge = m
            .graph()
            .edge_between(cycle.vertices()[0], cycle.vertices()[1])
            .ok_or(Error::NotACycle {
                reason: "cycle uses a non-edge of the base graph",
            })?;
        let plus_first = !m.contains(first_edge);
        CircuitVector::new(m.graph().clone(), cycle, alpha, plus_first)
    }

    pub fn graph(&self) -> &Arc<BipartiteGraph> {
        &self.graph
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn magnitude(&self) -> &Rational {
        &self.magnitude
    }

    pub fn positive_edges(&self) -> &[EdgeId] {
        &self.positive
    }

    pub fn negative_edges(&self) -> &[EdgeId] {
        &self.negative
    }

    pub fn coefficient(&self, e: EdgeId) -> Rational {
        if self.positive.binary_search(&e).is_ok() {
            self.magnitude.clone()
        } else if self.negative.binary_search(&e).is_ok() {
            -self.magnitude.clone()
        } else {
            Rational::zero()
        }
    }

    /// The kernel condition of the equality system: coefficients sum to zero
    /// at every vertex.
    pub fn sums_to_zero_everywhere(&self) -> bool {
        (0..self.graph.vertex_count()).all(|v| {
            self.graph
                .incident_edges(v)
                .iter()
                .map(|&e| self.coefficient(e))
                .sum::<Rational>()
                .is_zero()
        })
    }
}

/// An exact rational point of the polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopePoint {
    graph: Arc<BipartiteGraph>,
    coords: Vec<Rational>,
}

impl PolytopePoint {
    /// Validates both constraint families exactly.
    pub fn new(graph: Arc<BipartiteGraph>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != graph.edge_count() {
            return Err(Error::Internal(format!(
                "{} coordinates for {} edges",
                coords.len(),
                graph.edge_count()
            )));
        }
        let point = PolytopePoint { graph, coords };
        point.check_feasible()?;
        Ok(point)
    }

    pub fn from_matching(m: &PerfectMatching) -> Self {
        let coords = (0..m.graph().edge_count())
            .map(|e| {
                if m.contains(e) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        PolytopePoint {
            graph: m.graph().clone(),
            coords,
        }
    }

    pub fn check_feasible(&self) -> Result<()> {
        for (e, x) in self.coords.iter().enumerate() {
            if x.is_negative() {
                let (u, _) = self.graph.endpoints(e);
                return Err(Error::InfeasiblePoint { vertex: u });
            }
        }
        for v in 0..self.graph.vertex_count() {
            let sum: Rational = self
                .graph
                .incident_edges(v)
                .iter()
                .map(|&e| self.coords[e].clone())
                .sum();
            if !sum.is_one() {
                return Err(Error::InfeasiblePoint { vertex: v });
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Arc<BipartiteGraph> {
        &self.graph
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_vertex(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero() || x.is_one())
    }

    pub fn to_matching(&self) -> Result<PerfectMatching> {
        if !self.is_vertex() {
            return Err(Error::NotAVertex);
        }
        let edges = (0..self.coords.len())
            .filter(|&e| self.coords[e].is_one())
            .collect();
        PerfectMatching::new(self.graph.clone(), edges)
    }
}

/// One maximal feasible step `x + t* g` from a polytope vertex along a
/// circuit. Returns the new point and `t*`; from a vertex, `t* * alpha = 1`
/// and the result is the adjacent vertex obtained by flipping the circuit's
/// cycle.
pub fn circuit_move(x: &PolytopePoint, g: &CircuitVector) -> Result<(PolytopePoint, Rational)> {
    if !same_base(x.graph(), g.graph()) {
        return Err(Error::BaseMismatch);
    }
    if !x.is_vertex() {
        return Err(Error::NotAVertex);
    }
    // Only the nonnegativity constraints bind along a kernel direction:
    // t* = min over negative-support edges of x_e / alpha.
    let t_star = g
        .negative_edges()
        .iter()
        .map(|&e| x.coords()[e].clone() / g.magnitude().clone())
        .min()
        .expect("even cycles have a nonempty negative class");
    if t_star.is_zero() {
        return Err(Error::ZeroStep);
    }
    let coords: Vec<Rational> = (0..x.coords().len())
        .map(|e| x.coords()[e].clone() + t_star.clone() * g.coefficient(e))
        .collect();
    let moved = PolytopePoint::new(x.graph().clone(), coords)?;
    Ok((moved, t_star))
}

/// All simple cycles of the underlying undirected graph with length at most
/// `max_len`, each found once, in deterministic order.
fn undirected_cycles(g: &BipartiteGraph, max_len: usize) -> Vec<Cycle> {
    let n = g.vertex_count();
    let adj: Vec<Vec<Vertex>> = (0..n)
        .map(|v| {
            let mut ns: Vec<Vertex> = g
                .incident_edges(v)
                .iter()
                .map(|&e| g.opposite(e, v))
                .collect();
            ns.sort_unstable();
            ns
        })
        .collect();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    for root in 0..n {
        let mut path = vec![root];
        on_path[root] = true;
        let mut cursors = vec![0usize];
        while let Some(&v) = path.last() {
            let cursor = cursors.last_mut().unwrap();
            if *cursor < adj[v].len() && path.len() <= max_len {
                let w = adj[v][*cursor];
                *cursor += 1;
                if w == root && path.len() >= 3 {
                    // Each cycle appears in both directions; keep one.
                    if path[1] < *path.last().unwrap() {
                        cycles.push(Cycle::new(path.clone()).expect("DFS path is simple"));
                    }
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
    cycles
}

/// One canonical circuit per even cycle of length at most `max_len`:
/// magnitude one, positive sign on the class holding the smallest edge id.
pub fn circuit_vectors(g: &Arc<BipartiteGraph>, max_len: usize) -> Vec<CircuitVector> {
    let mut out = Vec::new();
    for cycle in undirected_cycles(g, max_len) {
        let ids = cycle.edge_ids(g).expect("enumerated over graph edges");
        let min_pos = ids
            .iter()
            .enumerate()
            .min_by_key(|&(_, e)| *e)
            .map(|(i, _)| i)
            .unwrap();
        let plus_first = min_pos % 2 == 0;
        out.push(
            CircuitVector::new(g.clone(), cycle, Rational::one(), plus_first)
                .expect("even simple cycle"),
        );
    }
    out
}

/// Pluggable pivot rules for [`pivot_run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Best strictly improving 4-cycle flip, ties by enumeration order.
    Greedy4Cycle,
    /// First positive-gain cycle found by exact positive-cycle detection on
    /// the matching orientation.
    AnyImproving,
    /// Shortest strictly improving alternating cycle, ties by canonical
    /// order.
    ShortestImproving,
}

impl PivotRule {
    pub const ALL: [PivotRule; 3] = [
        PivotRule::Greedy4Cycle,
        PivotRule::AnyImproving,
        PivotRule::ShortestImproving,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            PivotRule::Greedy4Cycle => "greedy-4cycle",
            PivotRule::AnyImproving => "any-improving",
            PivotRule::ShortestImproving => "shortest-improving",
        }
    }
}

impl FromStr for PivotRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy-4cycle" => Ok(PivotRule::Greedy4Cycle),
            "any-improving" => Ok(PivotRule::AnyImproving),
            "shortest-improving" => Ok(PivotRule::ShortestImproving),
            other => Err(Error::UnknownRule(other.to_string())),
        }
    }
}

/// Outcome of a pivot run: the flip path, the weight after every state, and
/// whether the run stopped at the step cap instead of at a rule fixpoint.
#[derive(Debug, Clone)]
pub struct PivotRun {
    pub path: FlipPath,
    pub weight_trace: Vec<Rational>,
    pub truncated: bool,
}

impl PivotRun {
    pub fn steps(&self) -> usize {
        self.path.len()
    }

    pub fn terminal_weight(&self) -> &Rational {
        self.weight_trace.last().unwrap()
    }
}

fn cycle_gain(w: &WeightFunction, m: &PerfectMatching, cycle: &Cycle) -> Rational {
    let ids = cycle
        .edge_ids(m.graph())
        .expect("alternating cycles live in the graph");
    let mut gain = Rational::zero();
    for e in ids {
        if m.contains(e) {
            gain -= w.weight(e).clone();
        } else {
            gain += w.weight(e).clone();
        }
    }
    gain
}

/// Exact positive-gain directed cycle detection on the orientation of `m`:
/// matching arcs cost `+w`, non-matching arcs cost `-w`, and any
/// negative-cost directed cycle is a strictly improving flip. Deterministic
/// Bellman-Ford over all vertices at once.
fn find_improving_cycle(w: &WeightFunction, m: &PerfectMatching) -> Option<Cycle> {
    let g = m.graph();
    let o = matching_to_orientation(m);
    let n = g.vertex_count();
    let arcs: Vec<(Vertex, Vertex, Rational)> = (0..g.edge_count())
        .map(|e| {
            let (from, to) = o.arc(e);
            let cost = if m.contains(e) {
                w.weight(e).clone()
            } else {
                -w.weight(e).clone()
            };
            (from, to, cost)
        })
        .collect();
    let mut dist: Vec<Rational> = vec![Rational::zero(); n];
    let mut prev: Vec<Option<Vertex>> = vec![None; n];
    let mut updated_vertex = None;
    // n - 1 passes settle everything when no negative cycle exists; an
    // update on the n-th pass witnesses one.
    for _ in 0..n {
        updated_vertex = None;
        for &(from, to, ref cost) in &arcs {
            let candidate = dist[from].clone() + cost.clone();
            if candidate < dist[to] {
                dist[to] = candidate;
                prev[to] = Some(from);
                updated_vertex = Some(to);
            }
        }
        updated_vertex?;
    }
    let start = updated_vertex.expect("loop returned early otherwise");
    if let Some(cycle) = predecessor_cycle(&prev, start, n) {
        if cycle_gain(w, m, &cycle).is_positive() {
            return Some(cycle);
        }
    }
    // Exhaustive fallback; exact but slower.
    let full = g.vertex_count().max(4);
    crate::skeleton::alternating_cycles(m, full)
        .into_iter()
        .find(|c| cycle_gain(w, m, c).is_positive())
}

/// Extracts a cycle of the predecessor graph by walking back from `start`
/// until a vertex repeats.
fn predecessor_cycle(prev: &[Option<Vertex>], start: Vertex, n: usize) -> Option<Cycle> {
    let mut order: Vec<Vertex> = Vec::new();
    let mut seen = vec![false; n];
    let mut at = start;
    loop {
        if seen[at] {
            let pos = order.iter().position(|&v| v == at).unwrap();
            let mut cycle: Vec<Vertex> = order[pos..].to_vec();
            // The walk ran backwards along arcs; reverse into arc order.
            cycle.reverse();
            return Cycle::new(cycle).ok();
        }
        seen[at] = true;
        order.push(at);
        at = prev[at]?;
    }
}

fn rule_step(w: &WeightFunction, m: &PerfectMatching, rule: PivotRule) -> Option<Cycle> {
    match rule {
        PivotRule::Greedy4Cycle => {
            let mut best: Option<(Rational, Cycle)> = None;
            for c in crate::skeleton::alternating_cycles(m, 4) {
                let gain = cycle_gain(w, m, &c);
                if gain.is_positive() && best.as_ref().is_none_or(|(bg, _)| gain > *bg) {
                    best = Some((gain, c));
                }
            }
            best.map(|(_, c)| c)
        }
        PivotRule::AnyImproving => find_improving_cycle(w, m),
        PivotRule::ShortestImproving => {
            let full = m.graph().vertex_count().max(4);
            crate::skeleton::alternating_cycles(m, full)
                .into_iter()
                .filter(|c| cycle_gain(w, m, c).is_positive())
                .min_by(|a, b| match a.len().cmp(&b.len()) {
                    Ordering::Equal => a.vertices().cmp(b.vertices()),
                    o => o,
                })
        }
    }
}

/// Runs a pivot rule from `start` until no improving move is found or
/// `step_cap` flips have been made. The weight trace is strictly
/// increasing; each step's cycle is alternating in the matching current at
/// that step.
pub fn pivot_run(
    w: &WeightFunction,
    start: &PerfectMatching,
    rule: PivotRule,
    step_cap: usize,
) -> Result<PivotRun> {
    if !same_base(w.graph(), start.graph()) {
        return Err(Error::BaseMismatch);
    }
    let mut current = start.clone();
    let mut steps: Vec<Cycle> = Vec::new();
    let mut weight_trace = vec![w.matching_weight(&current)];
    let mut truncated = false;
    loop {
        if steps.len() == step_cap {
            truncated = true;
            break;
        }
        let Some(cycle) = rule_step(w, &current, rule) else {
            break;
        };
        current = current.flip(&cycle)?;
        let next_weight = w.matching_weight(&current);
        if next_weight <= *weight_trace.last().unwrap() {
            return Err(Error::Internal(
                "pivot rule proposed a non-improving move".into(),
            ));
        }
        weight_trace.push(next_weight);
        steps.push(cycle);
    }
    Ok(PivotRun {
        path: FlipPath::new(start.clone(), steps),
        weight_trace,
        truncated,
    })
}
