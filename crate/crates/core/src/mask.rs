//! Which vertices carry the tilt factor `e^x`, and which vertices are
//! removed to form a principal subgraph.

use crate::graph::CylinderGraph;
use std::collections::BTreeSet;

/// Predicate over vertices selecting the monomers counted by the tilt.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum CountingMask {
    #[default]
    All,
    /// Vertices whose layer lies in `start..end` (0-based, half open).
    Layers { start: usize, end: usize },
    Set(BTreeSet<usize>),
}

impl CountingMask {
    pub fn layers(start: usize, end: usize) -> Self {
        CountingMask::Layers { start, end }
    }

    pub fn set<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        CountingMask::Set(vertices.into_iter().collect())
    }

    pub fn counts(&self, g: &CylinderGraph, v: usize) -> bool {
        match self {
            CountingMask::All => true,
            CountingMask::Layers { start, end } => {
                let layer = g.layer_of(v);
                layer >= *start && layer < *end
            }
            CountingMask::Set(s) => s.contains(&v),
        }
    }
}

/// A set of removed vertices. The complement induces the principal subgraph
/// the engines work on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    removed: Vec<bool>,
}

impl VertexSet {
    pub fn none(g: &CylinderGraph) -> Self {
        Self {
            removed: vec![false; g.n_vertices()],
        }
    }

    pub fn of<I: IntoIterator<Item = usize>>(g: &CylinderGraph, vertices: I) -> Self {
        let mut s = Self::none(g);
        for v in vertices {
            s.removed[v] = true;
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.removed[v] = true;
    }

    pub fn contains(&self, v: usize) -> bool {
        self.removed[v]
    }

    pub fn len(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Present-vertex test shared by the engines.
pub(crate) fn is_present(removed: Option<&VertexSet>, v: usize) -> bool {
    removed.is_none_or(|s| !s.contains(v))
}
