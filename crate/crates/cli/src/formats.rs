//! Text and JSON file formats with byte-exact canonical emission.
//!
//! Line formats (UTF-8, LF endings):
//!
//! - graph: `bip <nA> <nB> <m>` then `m` lines `a b` of side indices, in
//!   canonical sorted order;
//! - digraph: `dig <n> <m>` then `m` lines `u v`, sorted;
//! - matching: one edge index per line, ascending;
//! - weights: `<edge> <p>/<q>` per line, ascending edge, reduced fraction;
//! - orientation: one line of `0`/`1` over the canonical edge order
//!   (`1` = directed from side A to side B);
//! - cycle: `cyc <k>` then `k` lines of vertex ids.
//!
//! Traces, reduction bundles, and experiment reports nest, so they are JSON
//! documents (pretty-printed, stable field order, trailing newline).

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use matchpoly::lp::WeightFunction;
use matchpoly::recovery::FlipTrace;
use matchpoly::reduction::ReductionInstance;
use matchpoly::{BipartiteGraph, Cycle, Digraph, Orientation, PerfectMatching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn fields(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn parse_num<T: FromStr>(token: &str, line: usize, what: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        message: format!("invalid {what}: {token:?}"),
    })
}

// ---- graph ----------------------------------------------------------------

pub fn emit_graph(g: &BipartiteGraph) -> String {
    let mut out = format!("bip {} {} {}\n", g.n_side(), g.n_side(), g.edge_count());
    for &(a, b) in g.edge_pairs() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Arc<BipartiteGraph>, ParseError> {
    let mut lines = text.lines().enumerate();
    let (line, header) = lines.next().ok_or(ParseError {
        line: 1,
        message: "empty graph file".into(),
    })?;
    let h = fields(header);
    if h.len() != 4 || h[0] != "bip" {
        return err(line + 1, "expected header `bip <nA> <nB> <m>`");
    }
    let n_a: usize = parse_num(h[1], line + 1, "side size")?;
    let n_b: usize = parse_num(h[2], line + 1, "side size")?;
    let m: usize = parse_num(h[3], line + 1, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let f = fields(text);
        if f.is_empty() {
            continue;
        }
        if f.len() != 2 {
            return err(line + 1, "expected `a b`");
        }
        edges.push((
            parse_num(f[0], line + 1, "A-side index")?,
            parse_num(f[1], line + 1, "B-side index")?,
        ));
    }
    if edges.len() != m {
        return err(
            1,
            format!("header declares {m} edges, found {}", edges.len()),
        );
    }
    BipartiteGraph::build(n_a, n_b, &edges).map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

// ---- digraph ---------------------------------------------------------------

pub fn emit_digraph(d: &Digraph) -> String {
    let mut out = format!("dig {} {}\n", d.vertex_count(), d.arc_count());
    for &(u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = text.lines().enumerate();
    let (line, header) = lines.next().ok_or(ParseError {
        line: 1,
        message: "empty digraph file".into(),
    })?;
    let h = fields(header);
    if h.len() != 3 || h[0] != "dig" {
        return err(line + 1, "expected header `dig <n> <m>`");
    }
    let n: usize = parse_num(h[1], line + 1, "vertex count")?;
    let m: usize = parse_num(h[2], line + 1, "arc count")?;
    let mut arcs = Vec::with_capacity(m);
    for (line, text) in lines {
        let f = fields(text);
        if f.is_empty() {
            continue;
        }
        if f.len() != 2 {
            return err(line + 1, "expected `u v`");
        }
        arcs.push((
            parse_num(f[0], line + 1, "vertex")?,
            parse_num(f[1], line + 1, "vertex")?,
        ));
    }
    if arcs.len() != m {
        return err(1, format!("header declares {m} arcs, found {}", arcs.len()));
    }
    Digraph::build(n, &arcs).map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

// ---- matching --------------------------------------------------------------

pub fn emit_matching(m: &PerfectMatching) -> String {
    let mut out = String::new();
    for &e in m.edge_ids() {
        let _ = writeln!(out, "{e}");
    }
    out
}

pub fn parse_matching(
    text: &str,
    graph: &Arc<BipartiteGraph>,
) -> Result<PerfectMatching, ParseError> {
    let mut ids = Vec::new();
    for (line, t) in text.lines().enumerate() {
        let f = fields(t);
        if f.is_empty() {
            continue;
        }
        if f.len() != 1 {
            return err(line + 1, "expected one edge index per line");
        }
        let id: usize = parse_num(f[0], line + 1, "edge index")?;
        if id >= graph.edge_count() {
            return err(
                line + 1,
                format!(
                    "edge {id} does not exist (graph has {} edges)",
                    graph.edge_count()
                ),
            );
        }
        ids.push(id);
    }
    PerfectMatching::new(graph.clone(), ids).map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

// ---- weights ---------------------------------------------------------------

pub fn emit_weights(w: &WeightFunction) -> String {
    let mut out = String::new();
    for (e, value) in w.weights().iter().enumerate() {
        let _ = writeln!(out, "{e} {}/{}", value.numer(), value.denom());
    }
    out
}

pub fn parse_rational(token: &str, line: usize) -> Result<BigRational, ParseError> {
    let (p, q) = match token.split_once('/') {
        Some((p, q)) => (p, q),
        None => (token, "1"),
    };
    let numer = parse_num(p, line, "numerator")?;
    let denom: num::BigInt = parse_num(q, line, "denominator")?;
    if denom == num::BigInt::from(0) {
        return err(line, "zero denominator");
    }
    Ok(BigRational::new(numer, denom))
}

pub fn parse_weights(
    text: &str,
    graph: &Arc<BipartiteGraph>,
) -> Result<WeightFunction, ParseError> {
    let mut values = vec![None; graph.edge_count()];
    for (line, t) in text.lines().enumerate() {
        let f = fields(t);
        if f.is_empty() {
            continue;
        }
        if f.len() != 2 {
            return err(line + 1, "expected `<edge> <p>/<q>`");
        }
        let id: usize = parse_num(f[0], line + 1, "edge index")?;
        if id >= graph.edge_count() {
            return err(line + 1, format!("edge {id} does not exist"));
        }
        values[id] = Some(parse_rational(f[1], line + 1)?);
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        return err(1, format!("no weight for edge {missing}"));
    }
    WeightFunction::new(
        graph.clone(),
        values.into_iter().map(Option::unwrap).collect(),
    )
    .map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

// ---- orientation -----------------------------------------------------------

pub fn emit_orientation(o: &Orientation) -> String {
    let mut out: String = o
        .toward_b()
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    out.push('\n');
    out
}

pub fn parse_orientation(
    text: &str,
    graph: &Arc<BipartiteGraph>,
) -> Result<Orientation, ParseError> {
    let bits = text.trim();
    if bits.len() != graph.edge_count() {
        return err(
            1,
            format!(
                "orientation has {} bits for {} edges",
                bits.len(),
                graph.edge_count()
            ),
        );
    }
    let mut toward_b = Vec::with_capacity(bits.len());
    for c in bits.chars() {
        match c {
            '0' => toward_b.push(false),
            '1' => toward_b.push(true),
            other => return err(1, format!("invalid orientation bit {other:?}")),
        }
    }
    Orientation::new(graph.clone(), toward_b).map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

// ---- cycle -----------------------------------------------------------------

pub fn emit_cycle(c: &Cycle) -> String {
    let mut out = format!("cyc {}\n", c.len());
    for &v in c.vertices() {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn parse_cycle(text: &str) -> Result<Cycle, ParseError> {
    let mut lines = text.lines().enumerate();
    let (line, header) = lines.next().ok_or(ParseError {
        line: 1,
        message: "empty cycle file".into(),
    })?;
    let h = fields(header);
    if h.len() != 2 || h[0] != "cyc" {
        return err(line + 1, "expected header `cyc <k>`");
    }
    let k: usize = parse_num(h[1], line + 1, "length")?;
    let mut vertices = Vec::with_capacity(k);
    for (line, t) in lines {
        let f = fields(t);
        if f.is_empty() {
            continue;
        }
        if f.len() != 1 {
            return err(line + 1, "expected one vertex per line");
        }
        vertices.push(parse_num(f[0], line + 1, "vertex")?);
    }
    if vertices.len() != k {
        return err(
            1,
            format!("header declares {k} vertices, found {}", vertices.len()),
        );
    }
    Cycle::new(vertices).map_err(|e| ParseError {
        line: 1,
        message: e.to_string(),
    })
}

// ---- JSON documents --------------------------------------------------------

pub const TRACE_SCHEMA: &str = "matchpoly-trace-v1";
pub const BUNDLE_SCHEMA: &str = "matchpoly-bundle-v1";
pub const REPORT_SCHEMA: &str = "matchpoly-report-v1";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDto {
    pub n_side: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDto {
    pub fn from_graph(g: &BipartiteGraph) -> Self {
        GraphDto {
            n_side: g.n_side(),
            edges: g.edge_pairs().to_vec(),
        }
    }

    pub fn to_graph(&self) -> Result<Arc<BipartiteGraph>, ParseError> {
        BipartiteGraph::build(self.n_side, self.n_side, &self.edges).map_err(|e| ParseError {
            line: 0,
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DigraphDto {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl DigraphDto {
    pub fn from_digraph(d: &Digraph) -> Self {
        DigraphDto {
            n: d.vertex_count(),
            arcs: d.arcs().to_vec(),
        }
    }

    pub fn to_digraph(&self) -> Result<Digraph, ParseError> {
        Digraph::build(self.n, &self.arcs).map_err(|e| ParseError {
            line: 0,
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceDto {
    pub schema: String,
    pub graph: GraphDto,
    /// One bit-vector per orientation over the canonical edge order.
    pub orientations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flipped: Option<Vec<Vec<usize>>>,
}

impl TraceDto {
    pub fn from_trace(t: &FlipTrace) -> Self {
        TraceDto {
            schema: TRACE_SCHEMA.to_string(),
            graph: GraphDto::from_graph(t.initial().graph()),
            orientations: t
                .orientations()
                .iter()
                .map(|o| emit_orientation(o).trim().to_string())
                .collect(),
            flipped: Some(t.flipped().iter().map(|c| c.vertices().to_vec()).collect()),
        }
    }

    /// Rebuilds and re-validates the trace; the stored flipped list, when
    /// present, must match the recomputed one.
    pub fn to_trace(&self) -> Result<FlipTrace, ParseError> {
        if self.schema != TRACE_SCHEMA {
            return err(0, format!("unknown trace schema {:?}", self.schema));
        }
        let graph = self.graph.to_graph()?;
        let mut orientations = Vec::with_capacity(self.orientations.len());
        for bits in &self.orientations {
            orientations.push(parse_orientation(bits, &graph)?);
        }
        let trace = FlipTrace::new(orientations).map_err(|e| ParseError {
            line: 0,
            message: e.to_string(),
        })?;
        if let Some(flipped) = &self.flipped {
            let recomputed: Vec<Vec<usize>> = trace
                .flipped()
                .iter()
                .map(|c| c.vertices().to_vec())
                .collect();
            if *flipped != recomputed {
                return err(0, "stored flipped cycles disagree with the orientations");
            }
        }
        Ok(trace)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GadgetDto {
    pub owner: usize,
    pub cycle: [usize; 4],
    pub in_ports: Vec<usize>,
    pub out_ports: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BundleDto {
    pub schema: String,
    pub digraph: DigraphDto,
    pub ham: Option<Vec<usize>>,
    pub graph: GraphDto,
    /// Orientation encoding `m1`, as a bit-vector.
    pub orientation: String,
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    pub owner_of: Vec<usize>,
    pub gadgets: Vec<GadgetDto>,
}

impl BundleDto {
    pub fn from_instance(r: &ReductionInstance) -> Self {
        BundleDto {
            schema: BUNDLE_SCHEMA.to_string(),
            digraph: DigraphDto::from_digraph(r.source()),
            ham: r.planted_ham().map(|h| h.vertices().to_vec()),
            graph: GraphDto::from_graph(r.graph()),
            orientation: emit_orientation(r.d_prime()).trim().to_string(),
            m1: r.m1().edge_ids().to_vec(),
            m2: r.m2().edge_ids().to_vec(),
            owner_of: r.owner_table().to_vec(),
            gadgets: r
                .gadgets()
                .iter()
                .map(|g| GadgetDto {
                    owner: g.owner(),
                    cycle: g.cycle_vertices(),
                    in_ports: (0..g.in_degree()).map(|k| g.in_port(k)).collect(),
                    out_ports: (0..g.out_degree()).map(|k| g.out_port(k)).collect(),
                })
                .collect(),
        }
    }
}

pub fn emit_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        message: e.to_string(),
    })
}
