//! Cylinder graphs `G_n × H`: a path of `n` layers times a fixed fiber graph `H`.
//!
//! Vertices are indexed layer-major, fiber-minor: vertex `(i, j)` with layer
//! `i ∈ 0..n` and fiber `j ∈ 0..h` has id `i * h + j`. Edges are stored in a
//! canonical order: first every horizontal (layer-bridging) edge ordered by
//! `(k, j)`, where edge `(k, j)` joins `(k, j)` and `(k + 1, j)`; then every
//! vertical edge ordered by `(i, e)` where `e` indexes the edge list of `H`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest fiber the bitmask representation supports.
pub const MAX_FIBER: usize = 30;

/// The fiber graph `H`, on vertices `0..h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGraph {
    h: usize,
    edges: Vec<(usize, usize)>,
}

impl HGraph {
    /// Validates and stores an undirected edge list. Each edge is normalized
    /// so that the smaller endpoint comes first; the input order is kept.
    pub fn new(h: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidGraph("fiber graph needs at least one vertex".into()));
        }
        if h > MAX_FIBER {
            return Err(Error::Capacity {
                what: "fiber size h",
                got: h,
                limit: MAX_FIBER,
            });
        }
        let mut seen = vec![false; h * h];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= h || b >= h {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{h}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if seen[lo * h + hi] {
                return Err(Error::InvalidGraph(format!("duplicate edge ({lo}, {hi})")));
            }
            seen[lo * h + hi] = true;
            normalized.push((lo, hi));
        }
        Ok(Self {
            h,
            edges: normalized,
        })
    }

    pub fn single() -> Self {
        Self { h: 1, edges: vec![] }
    }

    /// `h` isolated vertices.
    pub fn empty(h: usize) -> Result<Self> {
        Self::new(h, vec![])
    }

    pub fn path(h: usize) -> Result<Self> {
        Self::new(h, (1..h).map(|j| (j - 1, j)).collect())
    }

    /// Cycle on `h ≥ 3` vertices; smaller `h` falls back to the path.
    pub fn cycle(h: usize) -> Result<Self> {
        if h < 3 {
            return Self::path(h);
        }
        let mut edges: Vec<_> = (1..h).map(|j| (j - 1, j)).collect();
        edges.push((0, h - 1));
        Self::new(h, edges)
    }

    pub fn complete(h: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..h {
            for b in a + 1..h {
                edges.push((a, b));
            }
        }
        Self::new(h, edges)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, j: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == j || b == j).count()
    }
}

/// Whether an edge joins two layers or lies inside one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Joins `(layer, fiber)` and `(layer + 1, fiber)`; belongs to the cut `𝓔_layer`.
    Horizontal { layer: usize, fiber: usize },
    /// Copy of fiber edge `h_edge` inside `layer`.
    Vertical { layer: usize, h_edge: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

/// The product graph `G_n × H` with precomputed lookup tables.
#[derive(Clone, Debug)]
pub struct CylinderGraph {
    n: usize,
    fiber: HGraph,
    /// `fiber_nbrs[j]` is the bitmask of fiber neighbours of `j`.
    fiber_nbrs: Vec<u32>,
    /// `h_edge_of[a * h + b]` is the index of fiber edge `{a, b}`.
    h_edge_of: Vec<Option<usize>>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl CylinderGraph {
    pub fn new(n: usize, fiber: HGraph) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("cylinder needs at least one layer".into()));
        }
        let h = fiber.h;
        let mut fiber_nbrs = vec![0u32; h];
        let mut h_edge_of = vec![None; h * h];
        for (e, &(a, b)) in fiber.edges.iter().enumerate() {
            fiber_nbrs[a] |= 1 << b;
            fiber_nbrs[b] |= 1 << a;
            h_edge_of[a * h + b] = Some(e);
            h_edge_of[b * h + a] = Some(e);
        }
        let mut edges = Vec::with_capacity((n - 1) * h + n * fiber.edges.len());
        for k in 0..n - 1 {
            for j in 0..h {
                edges.push(Edge {
                    u: k * h + j,
                    v: (k + 1) * h + j,
                    kind: EdgeKind::Horizontal { layer: k, fiber: j },
                });
            }
        }
        for i in 0..n {
            for (e, &(a, b)) in fiber.edges.iter().enumerate() {
                edges.push(Edge {
                    u: i * h + a,
                    v: i * h + b,
                    kind: EdgeKind::Vertical { layer: i, h_edge: e },
                });
            }
        }
        let mut incident = vec![Vec::new(); n * h];
        for (idx, e) in edges.iter().enumerate() {
            incident[e.u].push(idx);
            incident[e.v].push(idx);
        }
        Ok(Self {
            n,
            fiber,
            fiber_nbrs,
            h_edge_of,
            edges,
            incident,
        })
    }

    /// A path on `n` vertices (`H` a single vertex).
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, HGraph::single())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.fiber.h
    }

    pub fn fiber(&self) -> &HGraph {
        &self.fiber
    }

    pub fn n_vertices(&self) -> usize {
        self.n * self.fiber.h
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_horizontal(&self) -> usize {
        (self.n - 1) * self.fiber.h
    }

    pub fn vertex_id(&self, layer: usize, fiber: usize) -> usize {
        debug_assert!(layer < self.n && fiber < self.fiber.h);
        layer * self.fiber.h + fiber
    }

    /// `(layer, fiber)` of a vertex id.
    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.fiber.h, v % self.fiber.h)
    }

    pub fn layer_of(&self, v: usize) -> usize {
        v / self.fiber.h
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Canonical index of horizontal edge `(k, j)`.
    pub fn horizontal_edge(&self, k: usize, j: usize) -> usize {
        debug_assert!(k + 1 < self.n);
        k * self.fiber.h + j
    }

    /// Canonical index of the copy of fiber edge `e` in layer `i`.
    pub fn vertical_edge(&self, i: usize, e: usize) -> usize {
        self.n_horizontal() + i * self.fiber.edges.len() + e
    }

    /// Canonical index of the vertical edge between fibers `a` and `b` of layer `i`.
    pub fn vertical_between(&self, i: usize, a: usize, b: usize) -> Option<usize> {
        self.h_edge_of[a * self.fiber.h + b].map(|e| self.vertical_edge(i, e))
    }

    pub fn fiber_neighbors(&self, j: usize) -> u32 {
        self.fiber_nbrs[j]
    }

    /// Indices of the edges in the cut between layers `k` and `k + 1`.
    pub fn cut_edges(&self, k: usize) -> std::ops::Range<usize> {
        let h = self.fiber.h;
        k * h..(k + 1) * h
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The other endpoint of edge `idx` seen from `v`.
    pub fn opposite(&self, idx: usize, v: usize) -> usize {
        let e = &self.edges[idx];
        if e.u == v {
            e.v
        } else {
            e.u
        }
    }

    pub fn is_horizontal(&self, idx: usize) -> bool {
        idx < self.n_horizontal()
    }
}
