//! Layer-by-layer transfer engine.
//!
//! After processing layer `i`, the table `f_i(S)` summarizes every matching
//! of the layers seen so far in which exactly the fiber set `S` of layer `i`
//! is reserved for horizontal dimers into layer `i + 1`. Processing the next
//! layer takes the covered set `S` of incoming dimers, picks the set `S'`
//! reserved for the following layer, and resolves the remaining vertices `B`
//! of the layer by `Q(B)`, the sum over matchings of the induced fiber
//! subgraph on `B` with monomer factors on the uncovered vertices:
//!
//! ```text
//! f_{i+1}(S') = e^{ω(S')} ⊗ ⊕_{S ⊆ P \ S'} f_i(S) ⊗ Q_{i+1}(P \ S \ S')
//! ```
//!
//! where `P` is the set of present vertices of the layer. `Q` follows the
//! one-vertex recurrence: its lowest vertex is either a monomer or matched to
//! a neighbour.

use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::mask::{is_present, CountingMask, VertexSet};
use crate::polynomial::MonomerPolynomial;
use crate::real::Real;
use crate::semiring::{LogPoly, LogScalar, Moments, TransferValue};
use crate::weights::WeightAssignment;
use serde::Serialize;
use std::ops::Range;

static ALL_VERTICES: CountingMask = CountingMask::All;

/// Size limits of the two engine modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest fiber in polynomial mode.
    pub poly_fiber: usize,
    /// Largest layer count in polynomial mode.
    pub poly_layers: usize,
    /// Largest fiber in scalar mode.
    pub scalar_fiber: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            poly_fiber: 6,
            poly_layers: 1024,
            scalar_fiber: 12,
        }
    }
}

/// A transfer computation: graph, weights, counting mask, removed vertices,
/// layer window and tilt.
#[derive(Clone, Debug)]
pub struct Problem<'a, T: Real> {
    graph: &'a CylinderGraph,
    weights: &'a WeightAssignment<T>,
    mask: &'a CountingMask,
    removed: Option<&'a VertexSet>,
    layers: Range<usize>,
    tilt: T,
    caps: Caps,
}

/// One processed layer, kept for backward passes.
#[derive(Clone, Debug)]
pub struct LayerTable<S> {
    pub layer: usize,
    /// Incoming table indexed by the set covered by dimers from the previous
    /// layer, horizontal weights included.
    pub incoming: Vec<S>,
    /// `Q(B)` for every subset `B` of the layer.
    pub within: Vec<S>,
    pub present: u32,
    pub forward: u32,
}

#[derive(Clone, Debug)]
pub struct Tables<S> {
    pub layers: Vec<LayerTable<S>>,
    pub value: S,
}

pub(crate) fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

impl<'a, T: Real> Problem<'a, T> {
    pub fn new(graph: &'a CylinderGraph, weights: &'a WeightAssignment<T>) -> Self {
        Self {
            graph,
            weights,
            mask: &ALL_VERTICES,
            removed: None,
            layers: 0..graph.n(),
            tilt: T::zero(),
            caps: Caps::default(),
        }
    }

    pub fn mask(mut self, mask: &'a CountingMask) -> Self {
        self.mask = mask;
        self
    }

    /// Restrict to the layers `range` (0-based, half open).
    pub fn layers(mut self, range: Range<usize>) -> Self {
        self.layers = range;
        self
    }

    pub fn without(mut self, removed: &'a VertexSet) -> Self {
        self.removed = Some(removed);
        self
    }

    pub fn tilt(mut self, x: T) -> Self {
        self.tilt = x;
        self
    }

    pub fn caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn graph(&self) -> &'a CylinderGraph {
        self.graph
    }

    pub fn weights(&self) -> &'a WeightAssignment<T> {
        self.weights
    }

    pub fn layer_range(&self) -> Range<usize> {
        self.layers.clone()
    }

    pub fn removed(&self) -> Option<&'a VertexSet> {
        self.removed
    }

    pub fn is_present(&self, v: usize) -> bool {
        is_present(self.removed, v)
    }

    pub fn counts(&self, v: usize) -> bool {
        self.mask.counts(self.graph, v)
    }

    fn check<S: TransferValue<T>>(&self) -> Result<()> {
        let Range { start, end } = self.layers;
        if start >= end || end > self.graph.n() {
            return Err(Error::BadRange {
                start,
                end,
                layers: self.graph.n(),
            });
        }
        let h = self.graph.h();
        let (limit, what) = if S::POLYNOMIAL {
            (self.caps.poly_fiber, "fiber size h (polynomial mode)")
        } else {
            (self.caps.scalar_fiber, "fiber size h (scalar mode)")
        };
        if h > limit {
            return Err(Error::Capacity {
                what,
                got: h,
                limit,
            });
        }
        if S::POLYNOMIAL && end - start > self.caps.poly_layers {
            return Err(Error::Capacity {
                what: "layer count (polynomial mode)",
                got: end - start,
                limit: self.caps.poly_layers,
            });
        }
        Ok(())
    }

    /// Present fibers of layer `i`.
    pub fn present_mask(&self, i: usize) -> u32 {
        (0..self.graph.h())
            .filter(|&j| self.is_present(self.graph.vertex_id(i, j)))
            .fold(0, |m, j| m | 1 << j)
    }

    /// Fibers of layer `i` that may carry a horizontal dimer to layer `i + 1`.
    pub fn forward_mask(&self, i: usize) -> u32 {
        if i + 1 >= self.layers.end {
            return 0;
        }
        let both = self.present_mask(i) & self.present_mask(i + 1);
        bits(both)
            .filter(|&j| self.weights.omega()[self.graph.horizontal_edge(i, j)] != T::neg_infinity())
            .fold(0, |m, j| m | 1 << j)
    }

    /// `Q(B)` for every subset `B` of layer `i`.
    pub fn within_table<S: TransferValue<T>>(&self, i: usize) -> Vec<S> {
        let g = self.graph;
        let size = 1usize << g.h();
        let present = self.present_mask(i);
        let nu = self.weights.nu();
        let omega = self.weights.omega();
        let mut q: Vec<S> = Vec::with_capacity(size);
        q.push(S::one());
        for r in 1..size as u32 {
            if r & !present != 0 {
                q.push(S::zero());
                continue;
            }
            let v = r.trailing_zeros() as usize;
            let rest = r & !(1 << v);
            let vid = g.vertex_id(i, v);
            let mut acc = S::monomer(nu[vid], self.counts(vid), self.tilt).mul(&q[rest as usize]);
            for u in bits(g.fiber_neighbors(v) & rest) {
                let e = g.vertical_between(i, v, u).expect("fiber edge");
                if omega[e] == T::neg_infinity() {
                    continue;
                }
                let tail = &q[(rest & !(1 << u)) as usize];
                if tail.is_zero() {
                    continue;
                }
                acc.add_assign(&S::weight(omega[e]).mul(tail));
            }
            q.push(acc);
        }
        q
    }

    /// Product of the horizontal weights `(i, j) – (i + 1, j)` over `j ∈ set`.
    pub fn forward_weight<S: TransferValue<T>>(&self, i: usize, set: u32) -> S {
        let omega = self.weights.omega();
        let log_w = bits(set).fold(T::zero(), |acc, j| acc + omega[self.graph.horizontal_edge(i, j)]);
        S::weight(log_w)
    }

    fn step<S: TransferValue<T>>(incoming: &[S], within: &[S], present: u32, forward: u32) -> Vec<S> {
        let size = within.len();
        let sources: Vec<u32> = (0..size as u32)
            .filter(|&s| !incoming[s as usize].is_zero())
            .collect();
        let mut out = vec![S::zero(); size];
        for s_out in 0..size as u32 {
            if s_out & !forward != 0 {
                continue;
            }
            let avail = present & !s_out;
            let mut acc = S::zero();
            for &s_in in &sources {
                if s_in & !avail != 0 {
                    continue;
                }
                let q = &within[(avail & !s_in) as usize];
                if q.is_zero() {
                    continue;
                }
                acc.add_assign(&incoming[s_in as usize].mul(q));
            }
            out[s_out as usize] = acc;
        }
        out
    }

    fn sweep<S: TransferValue<T>>(&self, keep: bool) -> Result<Tables<S>> {
        self.check::<S>()?;
        let size = 1usize << self.graph.h();
        let mut incoming = vec![S::zero(); size];
        incoming[0] = S::one();
        let mut kept = Vec::new();
        let mut last = Vec::new();
        for i in self.layers.clone() {
            let within = self.within_table::<S>(i);
            let present = self.present_mask(i);
            let forward = self.forward_mask(i);
            let out = Self::step(&incoming, &within, present, forward);
            let next: Vec<S> = out
                .iter()
                .enumerate()
                .map(|(s, v)| {
                    if v.is_zero() || s == 0 {
                        v.clone()
                    } else {
                        v.mul(&self.forward_weight(i, s as u32))
                    }
                })
                .collect();
            if keep {
                kept.push(LayerTable {
                    layer: i,
                    incoming: std::mem::take(&mut incoming),
                    within,
                    present,
                    forward,
                });
            }
            last = out;
            incoming = next;
        }
        Ok(Tables {
            layers: kept,
            value: last.swap_remove(0),
        })
    }

    /// Runs the engine and returns the contracted value.
    pub fn run<S: TransferValue<T>>(&self) -> Result<S> {
        Ok(self.sweep::<S>(false)?.value)
    }

    /// Runs the engine keeping every layer table for a backward pass.
    pub fn tables<S: TransferValue<T>>(&self) -> Result<Tables<S>> {
        self.sweep::<S>(true)
    }

    pub fn n_present(&self) -> usize {
        let h = self.graph.h();
        (self.layers.start * h..self.layers.end * h)
            .filter(|&v| self.is_present(v))
            .count()
    }

    pub fn n_counted(&self) -> usize {
        let h = self.graph.h();
        (self.layers.start * h..self.layers.end * h)
            .filter(|&v| self.is_present(v) && self.counts(v))
            .count()
    }

    /// `log Z` at the configured tilt (scalar mode).
    pub fn log_z(&self) -> Result<T> {
        Ok(self.run::<LogScalar<T>>()?.0)
    }

    /// `log Z` with the mean and variance of the counted monomers (scalar mode).
    pub fn moments(&self) -> Result<Moments<T>> {
        self.run::<Moments<T>>()
    }

    /// Full coefficient sequence (polynomial mode). The tilt is ignored.
    pub fn polynomial(&self) -> Result<MonomerPolynomial<T>> {
        let LogPoly(coeffs) = self.run::<LogPoly<T>>()?;
        MonomerPolynomial::new(coeffs, self.n_counted(), self.n_present())
    }
}

/// Partition polynomial of the whole graph with the given counting mask.
pub fn partition_polynomial<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    mask: &CountingMask,
) -> Result<MonomerPolynomial<T>> {
    Problem::new(g, w).mask(mask).polynomial()
}

/// Partition polynomial of the layers `k..=l` (1-based, inclusive).
pub fn restricted_polynomial<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    k: usize,
    l: usize,
    mask: &CountingMask,
) -> Result<MonomerPolynomial<T>> {
    if k == 0 || k > l || l > g.n() {
        return Err(Error::BadRange {
            start: k,
            end: l,
            layers: g.n(),
        });
    }
    Problem::new(g, w).mask(mask).layers(k - 1..l).polynomial()
}

/// `log Z_n(x)` in scalar mode.
pub fn log_partition<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, x: T) -> Result<T> {
    Problem::new(g, w).tilt(x).log_z()
}

fn check_cut(g: &CylinderGraph, cut: usize) -> Result<()> {
    if cut == 0 || cut >= g.n() {
        return Err(Error::BadRange {
            start: cut,
            end: cut + 1,
            layers: g.n(),
        });
    }
    Ok(())
}

/// Decomposition remainder `R_{n,k} = log Z_n − log Z_{[1:k]} − log Z_{[k+1:n]}`
/// at tilt `x`; `cut = k` is the number of layers left of the cut.
pub fn remainder<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, cut: usize, x: T) -> Result<T> {
    check_cut(g, cut)?;
    let whole = Problem::new(g, w).tilt(x).log_z()?;
    let left = Problem::new(g, w).tilt(x).layers(0..cut).log_z()?;
    let right = Problem::new(g, w).tilt(x).layers(cut..g.n()).log_z()?;
    Ok(whole - left - right)
}

/// Upper bounds on the remainder over the cut edges: `Σ (1 + |ω̃_e|)` and the
/// sharper `Σ log(1 + e^{ω̃_e})`, with `ω̃_e = ω_e − ν_u − ν_v`.
pub fn remainder_bounds<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, cut: usize) -> Result<(T, T)> {
    check_cut(g, cut)?;
    let mut coarse = T::zero();
    let mut sharp = T::zero();
    for e in g.cut_edges(cut - 1) {
        let edge = g.edge(e);
        let omega = w.omega()[e];
        if omega == T::neg_infinity() {
            continue;
        }
        let z = omega - w.nu()[edge.u] - w.nu()[edge.v];
        coarse = coarse + T::one() + z.abs();
        sharp = sharp + crate::real::log1p_exp(z);
    }
    Ok((coarse, sharp))
}

/// `Cov_μ(U_{[1:k]}, U_{[k+1:n]})` by polarization of three masked variances
/// computed from partition polynomials.
pub fn section_covariance<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, cut: usize) -> Result<T> {
    let s = section_variances(g, w, cut)?;
    Ok(s.covariance)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectionStats<T> {
    pub var_total: T,
    pub var_left: T,
    pub var_right: T,
    pub covariance: T,
}

/// Variances of `U`, `U_{[1:k]}`, `U_{[k+1:n]}` (polynomial route).
pub fn section_variances<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    cut: usize,
) -> Result<SectionStats<T>> {
    check_cut(g, cut)?;
    let var = |mask: CountingMask| -> Result<T> {
        Ok(partition_polynomial(g, w, &mask)?.cumulants(T::zero(), 2)?[1])
    };
    let var_total = var(CountingMask::All)?;
    let var_left = var(CountingMask::layers(0, cut))?;
    let var_right = var(CountingMask::layers(cut, g.n()))?;
    Ok(SectionStats {
        var_total,
        var_left,
        var_right,
        covariance: (var_total - var_left - var_right) / T::lit(2.0),
    })
}

/// The same three variances from the scalar moment engine; usable beyond
/// the polynomial-mode caps.
pub fn section_variances_scalar<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    cut: usize,
) -> Result<SectionStats<T>> {
    check_cut(g, cut)?;
    let var = |mask: CountingMask| -> Result<T> { Ok(Problem::new(g, w).mask(&mask).moments()?.var) };
    let var_total = var(CountingMask::All)?;
    let var_left = var(CountingMask::layers(0, cut))?;
    let var_right = var(CountingMask::layers(cut, g.n()))?;
    Ok(SectionStats {
        var_total,
        var_left,
        var_right,
        covariance: (var_total - var_left - var_right) / T::lit(2.0),
    })
}

/// One block of the dyadic subdivision.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicNode {
    pub generation: usize,
    /// Layers `start..end` of the block (0-based, half open).
    pub start: usize,
    pub end: usize,
    /// Terminal-layer error `log Z_block − log Z_{block minus last layer}`,
    /// present when the block length is odd.
    pub terminal: Option<f64>,
    /// Central remainder of the (even) block after the terminal drop.
    pub remainder: f64,
    /// Central finite difference `∂_x R` with step `1e-4`.
    pub remainder_slope: f64,
    /// `Σ (1 + |ω̃|)` over the central cut.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DyadicReport {
    pub nodes: Vec<DyadicNode>,
    pub max_abs_remainder: f64,
    pub max_abs_slope: f64,
    pub max_abs_terminal: f64,
    pub bound_holds: bool,
}

/// Dyadic subdivision of the layers down to `depth` generations.
pub fn dyadic_report<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, depth: usize) -> Result<DyadicReport> {
    let max_depth = usize::BITS as usize - 1 - g.n().leading_zeros() as usize;
    if depth > max_depth {
        return Err(Error::Input(format!(
            "depth {depth} exceeds log2(n) = {max_depth}"
        )));
    }
    let logz = |start: usize, end: usize, x: T| -> Result<T> {
        Problem::new(g, w).tilt(x).layers(start..end).log_z()
    };
    let step = T::lit(1e-4);
    let mut nodes = Vec::new();
    let mut blocks = vec![(0usize, g.n())];
    for generation in 0..depth {
        let mut next = Vec::new();
        for &(start, end) in &blocks {
            let len = end - start;
            if len < 2 {
                continue;
            }
            let (terminal, even_end) = if len % 2 == 1 {
                let t = logz(start, end, T::zero())? - logz(start, end - 1, T::zero())?;
                (Some(t.to_f64_lossy()), end - 1)
            } else {
                (None, end)
            };
            let mid = start + (even_end - start) / 2;
            let r_at = |x: T| -> Result<T> {
                Ok(logz(start, even_end, x)? - logz(start, mid, x)? - logz(mid, even_end, x)?)
            };
            let r = r_at(T::zero())?;
            let slope = (r_at(step)? - r_at(-step)?) / (T::lit(2.0) * step);
            let bound = remainder_bounds(g, w, mid)?.0;
            nodes.push(DyadicNode {
                generation,
                start,
                end,
                terminal,
                remainder: r.to_f64_lossy(),
                remainder_slope: slope.to_f64_lossy(),
                bound: bound.to_f64_lossy(),
            });
            next.push((start, mid));
            next.push((mid, even_end));
        }
        blocks = next;
    }
    let fold = |f: fn(&DyadicNode) -> f64| nodes.iter().map(f).fold(0.0f64, f64::max);
    Ok(DyadicReport {
        max_abs_remainder: fold(|n| n.remainder.abs()),
        max_abs_slope: fold(|n| n.remainder_slope.abs()),
        max_abs_terminal: fold(|n| n.terminal.map_or(0.0, f64::abs)),
        bound_holds: nodes.iter().all(|n| n.remainder <= n.bound + 1e-9),
        nodes,
    })
}

/// Trivial bounds `Σ_v ν_v ≤ log Z ≤ Σ_v log(1 + e^{ν_v} + Σ_{w∼v} e^{ω_{vw}})`.
pub fn trivial_bounds<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>) -> (T, T) {
    let lower = w.gauge_offset();
    let upper = (0..g.n_vertices()).fold(T::zero(), |acc, v| {
        let s = g
            .incident_edges(v)
            .iter()
            .fold(T::one() + w.nu()[v].exp(), |s, &e| s + w.omega()[e].exp());
        acc + s.ln()
    });
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HGraph;

    fn exp_coeffs(p: &MonomerPolynomial<f64>) -> Vec<f64> {
        p.log_coeffs().iter().map(|c| c.exp()).collect()
    }

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn single_monomer() {
        let g = CylinderGraph::path(1).unwrap();
        let w = WeightAssignment::new(&g, vec![0.7], vec![]).unwrap();
        let p = partition_polynomial(&g, &w, &CountingMask::All).unwrap();
        assert_eq!(p.log_coeff(0), f64::NEG_INFINITY);
        assert!((p.log_coeff(1) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn path2_two_matchings() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let p = partition_polynomial(&g, &w, &CountingMask::All).unwrap();
        close(&exp_coeffs(&p), &[1.0, 0.0, 1.0]);
        assert!((p.log_z(0.0) - 2f64.ln()).abs() < 1e-15);

        let w = WeightAssignment::new(&g, vec![0.3, -0.4], vec![1.7]).unwrap();
        let z = log_partition(&g, &w, 0.0f64).unwrap().exp();
        assert!((z - ((0.3f64 - 0.4).exp() + 1.7f64.exp())).abs() < 1e-12);
    }

    #[test]
    fn path4_and_c4_counts() {
        let p4 = CylinderGraph::path(4).unwrap();
        let p = partition_polynomial(&p4, &WeightAssignment::zeros(&p4), &CountingMask::All).unwrap();
        close(&exp_coeffs(&p), &[1.0, 0.0, 3.0, 0.0, 1.0]);

        let c4 = CylinderGraph::new(2, HGraph::complete(2).unwrap()).unwrap();
        let p = partition_polynomial(&c4, &WeightAssignment::zeros(&c4), &CountingMask::All).unwrap();
        close(&exp_coeffs(&p), &[2.0, 0.0, 4.0, 0.0, 1.0]);
        assert!((p.log_z(0.0) - 7f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn restricted_examples() {
        let p3 = CylinderGraph::path(3).unwrap();
        let w = WeightAssignment::zeros(&p3);
        let mid = restricted_polynomial(&p3, &w, 2, 2, &CountingMask::All).unwrap();
        close(&exp_coeffs(&mid), &[0.0, 1.0]);

        let p4 = CylinderGraph::path(4).unwrap();
        let w = WeightAssignment::zeros(&p4);
        let left = restricted_polynomial(&p4, &w, 1, 2, &CountingMask::All).unwrap();
        let right = restricted_polynomial(&p4, &w, 3, 4, &CountingMask::All).unwrap();
        assert!((left.log_z(0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((right.log_z(0.0) - 2f64.ln()).abs() < 1e-15);
        let whole = restricted_polynomial(&p4, &w, 1, 4, &CountingMask::All).unwrap();
        assert_eq!(whole, partition_polynomial(&p4, &w, &CountingMask::All).unwrap());
        assert!(restricted_polynomial(&p4, &w, 3, 2, &CountingMask::All).is_err());
        assert!(restricted_polynomial(&p4, &w, 0, 2, &CountingMask::All).is_err());
        assert!(restricted_polynomial(&p4, &w, 1, 5, &CountingMask::All).is_err());
    }

    #[test]
    fn path2_remainder_closed_form() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::new(&g, vec![0.2, -1.1], vec![0.9]).unwrap();
        let r = remainder(&g, &w, 1, 0.0).unwrap();
        let wt: f64 = 0.9 - 0.2 + 1.1;
        assert!((r - (1.0f64 + wt.exp()).ln()).abs() < 1e-14);
    }

    #[test]
    fn single_edge_remainder_meets_sharp_bound() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::new(&g, vec![1.0, 1.0], vec![5.0]).unwrap();
        let r = remainder(&g, &w, 1, 0.0f64).unwrap();
        let (coarse, sharp) = remainder_bounds(&g, &w, 1).unwrap();
        assert!((r - sharp).abs() < 1e-14);
        assert!(r <= coarse);
    }

    #[test]
    fn disabled_cut_has_no_remainder() {
        let g = CylinderGraph::new(4, HGraph::path(2).unwrap()).unwrap();
        let mut omega = vec![0.3; g.n_edges()];
        for e in g.cut_edges(1) {
            omega[e] = -1e6;
        }
        let w = WeightAssignment::new(&g, vec![0.1; 8], omega.clone()).unwrap();
        assert!(remainder(&g, &w, 2, 0.0f64).unwrap().abs() <= 1e-6);
        for e in g.cut_edges(1) {
            omega[e] = f64::NEG_INFINITY;
        }
        let w = WeightAssignment::new(&g, vec![0.1; 8], omega).unwrap();
        assert!(remainder(&g, &w, 2, 0.0).unwrap().abs() <= 1e-12);
        assert!(section_covariance(&g, &w, 2).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn capacity_errors_name_the_limit() {
        let g = CylinderGraph::new(2, HGraph::path(7).unwrap()).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        match partition_polynomial(&g, &w, &CountingMask::All) {
            Err(Error::Capacity { limit, got, .. }) => {
                assert_eq!((limit, got), (6, 7));
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
        assert!(log_partition(&g, &w, 0.0).is_ok());
        let big = CylinderGraph::new(2, HGraph::path(13).unwrap()).unwrap();
        let w = WeightAssignment::<f64>::zeros(&big);
        assert!(matches!(log_partition(&big, &w, 0.0), Err(Error::Capacity { limit: 12, .. })));
    }

    #[test]
    fn scalar_modes_agree_with_polynomial() {
        let g = CylinderGraph::new(5, HGraph::cycle(3).unwrap()).unwrap();
        let nu: Vec<f64> = (0..g.n_vertices()).map(|i| ((i * 7 % 5) as f64 - 2.0) * 0.3).collect();
        let omega: Vec<f64> = (0..g.n_edges()).map(|i| ((i * 3 % 7) as f64 - 3.0) * 0.25).collect();
        let w = WeightAssignment::new(&g, nu, omega).unwrap();
        let p = partition_polynomial(&g, &w, &CountingMask::All).unwrap();
        for x in [-1.0, 0.0, 0.7] {
            let lz = log_partition(&g, &w, x).unwrap();
            assert!((lz - p.log_z(x)).abs() < 1e-12);
            let m = Problem::new(&g, &w).tilt(x).moments().unwrap();
            let k = p.cumulants(x, 2).unwrap();
            assert!((m.log_mass - lz).abs() < 1e-12);
            assert!((m.mean - k[0]).abs() < 1e-10);
            assert!((m.var - k[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn dyadic_depth_one_is_central_remainder() {
        let g = CylinderGraph::path(4).unwrap();
        let w = WeightAssignment::new(&g, vec![0.5; 4], vec![0.5; 3]).unwrap();
        let rep = dyadic_report(&g, &w, 1).unwrap();
        assert_eq!(rep.nodes.len(), 1);
        let r = remainder(&g, &w, 2, 0.0).unwrap();
        assert!((rep.nodes[0].remainder - r).abs() < 1e-14);
        assert!(dyadic_report(&g, &w, 3).is_err());
    }

    #[test]
    fn dyadic_identical_blocks() {
        let g = CylinderGraph::new(16, HGraph::path(2).unwrap()).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let rep = dyadic_report(&g, &w, 4).unwrap();
        for gen in 0..4 {
            let rs: Vec<f64> = rep.nodes.iter().filter(|n| n.generation == gen).map(|n| n.remainder).collect();
            assert_eq!(rs.len(), 1 << gen);
            assert!(rs.iter().all(|r| (r - rs[0]).abs() < 1e-12));
        }
        assert!(rep.bound_holds);
    }

    #[test]
    fn dyadic_odd_blocks_drop_terminal_layer() {
        let g = CylinderGraph::path(7).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let rep = dyadic_report(&g, &w, 2).unwrap();
        let root = &rep.nodes[0];
        // Fib: Z_7 = 21, Z_6 = 13
        assert!((root.terminal.unwrap() - (21f64 / 13.0).ln()).abs() < 1e-13);
        assert_eq!((rep.nodes[1].start, rep.nodes[1].end), (0, 3));
    }

    #[test]
    fn f32_agrees_with_f64() {
        let g = CylinderGraph::new(6, HGraph::path(2).unwrap()).unwrap();
        let nu: Vec<f64> = (0..g.n_vertices()).map(|i| (i as f64 * 0.37).sin()).collect();
        let omega: Vec<f64> = (0..g.n_edges()).map(|i| (i as f64 * 0.91).cos()).collect();
        let w = WeightAssignment::new(&g, nu, omega).unwrap();
        let w32: WeightAssignment<f32> = w.cast(&g).unwrap();
        let a = log_partition(&g, &w, 0.0).unwrap();
        let b = log_partition(&g, &w32, 0.0).unwrap();
        assert!((a - b as f64).abs() < 1e-4);
    }
}
