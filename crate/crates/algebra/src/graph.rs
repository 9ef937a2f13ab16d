//! Edge-labeled graphs and trail enumeration.
//!
//! Vertices are indexed `0..n` in the fixed order `v_1..v_n`; edges are
//! indexed in insertion order. Parallel edges are allowed, self-loops are not.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::rings::{gcd_many, lcm_many, Ring, RingElement, RingError};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Default cap on explored trails before enumeration gives up.
pub const DEFAULT_MAX_TRAILS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub label: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub label: RingElement,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// One broken graph invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    ZeroVertexLabel { vertex: VertexId },
    ZeroEdgeLabel { edge: EdgeId },
    VertexRingMismatch { vertex: VertexId },
    EdgeRingMismatch { edge: EdgeId },
    SelfLoop { edge: EdgeId },
    UnknownEndpoint { edge: EdgeId, endpoint: VertexId },
    Disconnected { unreachable: Vec<VertexId> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::ZeroVertexLabel { vertex } => {
                write!(f, "vertex v{} has label 0", vertex + 1)
            }
            Violation::ZeroEdgeLabel { edge } => write!(f, "edge e{} has label 0", edge + 1),
            Violation::VertexRingMismatch { vertex } => {
                write!(
                    f,
                    "label of vertex v{} is not in the graph ring",
                    vertex + 1
                )
            }
            Violation::EdgeRingMismatch { edge } => {
                write!(f, "label of edge e{} is not in the graph ring", edge + 1)
            }
            Violation::SelfLoop { edge } => write!(f, "edge e{} is a self-loop", edge + 1),
            Violation::UnknownEndpoint { edge, endpoint } => {
                write!(
                    f,
                    "edge e{} references missing vertex index {endpoint}",
                    edge + 1
                )
            }
            Violation::Disconnected { unreachable } => {
                let names: Vec<String> =
                    unreachable.iter().map(|v| format!("v{}", v + 1)).collect();
                write!(f, "disconnected: unreachable from v1: {}", names.join(", "))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("trail enumeration from v{} to v{} exceeded the cap of {cap} trails", .from + 1, .to + 1)]
    TrailCapExceeded {
        from: VertexId,
        to: VertexId,
        cap: usize,
    },
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("trails need distinct endpoints (got v{} twice)", .0 + 1)]
    SameEndpoints(VertexId),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Collects vertices and edges, then validates them all at once.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    ring: Ring,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new(ring: Ring) -> Self {
        GraphBuilder {
            ring,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertex(&mut self, name: impl Into<String>, label: RingElement) -> VertexId {
        self.vertices.push(Vertex {
            name: name.into(),
            label,
        });
        self.vertices.len() - 1
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId, label: RingElement) -> EdgeId {
        self.edges.push(Edge { u, v, label });
        self.edges.len() - 1
    }

    /// Every violated invariant, in a deterministic order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.vertices.len();
        if n == 0 {
            out.push(Violation::NoVertices);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.label.ring() != &self.ring {
                out.push(Violation::VertexRingMismatch { vertex: i });
            } else if v.label.is_zero() {
                out.push(Violation::ZeroVertexLabel { vertex: i });
            }
        }
        let mut endpoints_ok = true;
        for (k, e) in self.edges.iter().enumerate() {
            for endpoint in [e.u, e.v] {
                if endpoint >= n {
                    out.push(Violation::UnknownEndpoint { edge: k, endpoint });
                    endpoints_ok = false;
                }
            }
            if e.u == e.v {
                out.push(Violation::SelfLoop { edge: k });
            }
            if e.label.ring() != &self.ring {
                out.push(Violation::EdgeRingMismatch { edge: k });
            } else if e.label.is_zero() {
                out.push(Violation::ZeroEdgeLabel { edge: k });
            }
        }
        if n > 0 && endpoints_ok {
            let adj = adjacency(n, &self.edges);
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(x) = queue.pop_front() {
                for &(_, y) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            let unreachable: Vec<VertexId> = (0..n).filter(|&i| !seen[i]).collect();
            if !unreachable.is_empty() {
                out.push(Violation::Disconnected { unreachable });
            }
        }
        out
    }

    pub fn build(self) -> Result<LabeledGraph, GraphError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let adjacency = adjacency(self.vertices.len(), &self.edges);
        Ok(LabeledGraph {
            ring: self.ring,
            vertices: self.vertices,
            edges: self.edges,
            adjacency,
        })
    }
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<(EdgeId, VertexId)>> {
    let mut adj = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        adj[e.u].push((k, e.v));
        adj[e.v].push((k, e.u));
    }
    adj
}

/// A validated, immutable edge-labeled graph: connected, at least one
/// vertex, no self-loops, every label nonzero and in the graph's ring.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    ring: Ring,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
}

impl LabeledGraph {
    pub fn builder(ring: Ring) -> GraphBuilder {
        GraphBuilder::new(ring)
    }

    /// Convenience constructor from labels; vertex names default to `v1..vn`.
    pub fn from_labels(
        ring: Ring,
        vertex_labels: Vec<RingElement>,
        edges: Vec<(VertexId, VertexId, RingElement)>,
    ) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(ring);
        for (i, m) in vertex_labels.into_iter().enumerate() {
            b.vertex(format!("v{}", i + 1), m);
        }
        for (u, v, r) in edges {
            b.edge(u, v, r);
        }
        b.build()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_label(&self, v: VertexId) -> &RingElement {
        &self.vertices[v].label
    }

    pub fn edge_label(&self, e: EdgeId) -> &RingElement {
        &self.edges[e].label
    }

    /// Incident `(edge, neighbour)` pairs in edge order.
    pub fn neighbours(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[v]
    }

    /// The same graph with every vertex label replaced.
    pub fn with_vertex_labels(&self, labels: Vec<RingElement>) -> Result<Self, GraphError> {
        assert_eq!(labels.len(), self.vertex_count());
        let mut b = GraphBuilder::new(self.ring.clone());
        for (v, m) in self.vertices.iter().zip(labels) {
            b.vertex(v.name.clone(), m);
        }
        for e in &self.edges {
            b.edge(e.u, e.v, e.label.clone());
        }
        b.build()
    }

    /// The same graph under a new vertex order: new vertex `k` is old vertex
    /// `order[k]`.
    pub fn permuted(&self, order: &[VertexId]) -> Result<Self, GraphError> {
        let n = self.vertex_count();
        assert_eq!(order.len(), n);
        let mut new_index = vec![usize::MAX; n];
        for (k, &old) in order.iter().enumerate() {
            new_index[old] = k;
        }
        let mut b = GraphBuilder::new(self.ring.clone());
        for &old in order {
            b.vertex(
                self.vertices[old].name.clone(),
                self.vertices[old].label.clone(),
            );
        }
        for e in &self.edges {
            b.edge(new_index[e.u], new_index[e.v], e.label.clone());
        }
        b.build()
    }

    fn check_pair(&self, from: VertexId, to: VertexId) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for v in [from, to] {
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
        }
        if from == to {
            return Err(GraphError::SameEndpoints(from));
        }
        Ok(())
    }
}

/// A walk from `vertices[0]` to its last vertex that repeats no edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trail {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Trail {
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("trail has vertices")
    }

    /// Structural check against `g`: incidence, no repeated edge, nonempty.
    pub fn is_valid_in(&self, g: &LabeledGraph) -> bool {
        if self.edges.is_empty() || self.vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let mut used = vec![false; g.edge_count()];
        for (k, &e) in self.edges.iter().enumerate() {
            if e >= g.edge_count() || used[e] {
                return false;
            }
            used[e] = true;
            let edge = &g.edges[e];
            let (a, b) = (self.vertices[k], self.vertices[k + 1]);
            if !((edge.u == a && edge.v == b) || (edge.u == b && edge.v == a)) {
                return false;
            }
        }
        true
    }

    /// gcd of the trail's edge labels.
    pub fn label_gcd(&self, g: &LabeledGraph) -> Result<RingElement, RingError> {
        gcd_many(g.ring(), self.edges.iter().map(|&e| g.edge_label(e)))
    }
}

/// Which trails feed the trail constraint `[{(P_ji)}]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TrailMode {
    /// Every trail from `v_j` to `v_i`.
    #[default]
    All,
    /// Only trails whose edge set is not strictly contained in the edge set
    /// of another trail between the same endpoints.
    Maximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrailOptions {
    pub max_trails: usize,
    pub mode: TrailMode,
}

impl Default for TrailOptions {
    fn default() -> Self {
        TrailOptions {
            max_trails: DEFAULT_MAX_TRAILS,
            mode: TrailMode::All,
        }
    }
}

/// Depth-first trail search from `from`. `visit` sees every trail prefix
/// (as edge and vertex stacks) and its running label gcd, and returns whether
/// to extend it further. Every explored prefix counts against the cap.
struct TrailSearch<'g, F> {
    g: &'g LabeledGraph,
    used: Vec<bool>,
    edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
    explored: usize,
    cap: usize,
    visit: F,
}

impl<F> TrailSearch<'_, F>
where
    F: FnMut(&[VertexId], &[EdgeId], &RingElement) -> Result<bool, RingError>,
{
    fn run(&mut self, at: VertexId, running: &RingElement) -> Result<bool, RingError> {
        let g = self.g;
        for &(e, next) in g.neighbours(at) {
            if self.used[e] {
                continue;
            }
            self.explored += 1;
            if self.explored > self.cap {
                return Ok(false);
            }
            let gcd = running.gcd(g.edge_label(e))?;
            self.used[e] = true;
            self.edges.push(e);
            self.vertices.push(next);
            let extend = (self.visit)(&self.vertices, &self.edges, &gcd)?;
            let finished = !extend || self.run(next, &gcd)?;
            self.vertices.pop();
            self.edges.pop();
            self.used[e] = false;
            if !finished {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn search<F>(
    g: &LabeledGraph,
    from: VertexId,
    to: VertexId,
    cap: usize,
    visit: F,
) -> Result<(), GraphError>
where
    F: FnMut(&[VertexId], &[EdgeId], &RingElement) -> Result<bool, RingError>,
{
    let mut s = TrailSearch {
        g,
        used: vec![false; g.edge_count()],
        edges: Vec::new(),
        vertices: vec![from],
        explored: 0,
        cap,
        visit,
    };
    let zero = g.ring().zero();
    if s.run(from, &zero)? {
        Ok(())
    } else {
        Err(GraphError::TrailCapExceeded { from, to, cap })
    }
}

/// All trails from `from` to `to`, in depth-first order over the input edge
/// order. Trails may pass through `to` and continue.
pub fn trails_between(
    g: &LabeledGraph,
    from: VertexId,
    to: VertexId,
    opts: &TrailOptions,
) -> Result<Vec<Trail>, GraphError> {
    g.check_pair(from, to)?;
    let mut out = Vec::new();
    search(g, from, to, opts.max_trails, |vs, es, _| {
        if *vs.last().expect("nonempty") == to {
            out.push(Trail {
                vertices: vs.to_vec(),
                edges: es.to_vec(),
            });
        }
        Ok(true)
    })?;
    if opts.mode == TrailMode::Maximal {
        out = maximal_only(g, out);
    }
    Ok(out)
}

fn maximal_only(g: &LabeledGraph, trails: Vec<Trail>) -> Vec<Trail> {
    let sets: Vec<Vec<bool>> = trails
        .iter()
        .map(|t| {
            let mut s = vec![false; g.edge_count()];
            for &e in &t.edges {
                s[e] = true;
            }
            s
        })
        .collect();
    let strictly_inside = |a: usize, b: usize| {
        trails[a].edges.len() < trails[b].edges.len() && trails[a].edges.iter().all(|&e| sets[b][e])
    };
    trails
        .iter()
        .enumerate()
        .filter(|&(a, _)| !(0..trails.len()).any(|b| strictly_inside(a, b)))
        .map(|(_, t)| t.clone())
        .collect()
}

/// `[{(P_ji)}]`: the lcm over trails from `from` to `to` of the gcd of each
/// trail's edge labels, in normal form.
///
/// In [`TrailMode::All`] a prefix whose running gcd already divides the
/// accumulated lcm is not extended, since no extension can change the lcm.
pub fn trail_constraint(
    g: &LabeledGraph,
    from: VertexId,
    to: VertexId,
    opts: &TrailOptions,
) -> Result<RingElement, GraphError> {
    g.check_pair(from, to)?;
    match opts.mode {
        TrailMode::All => {
            let mut acc = g.ring().one();
            search(g, from, to, opts.max_trails, |vs, _, gcd| {
                if gcd.divides(&acc) {
                    return Ok(false);
                }
                if *vs.last().expect("nonempty") == to {
                    acc = acc.lcm(gcd)?;
                }
                Ok(true)
            })?;
            Ok(acc)
        }
        TrailMode::Maximal => {
            let trails = trails_between(g, from, to, opts)?;
            let mut gcds: Vec<RingElement> = Vec::new();
            for t in &trails {
                let d = t.label_gcd(g)?;
                if !gcds.contains(&d) {
                    gcds.push(d);
                }
            }
            Ok(lcm_many(g.ring(), &gcds)?)
        }
    }
}
