//! Exact Gibbs sampling by a backward pass over the transfer tables, and
//! matching observables.

use crate::disorder::{Domain, RngSeed, UniformStream};
use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::real::Real;
use crate::semiring::{LogScalar, MaxPlus, TransferValue};
use crate::transfer::{bits, Problem, Tables};
use crate::weights::WeightAssignment;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// A set of pairwise disjoint edges, stored as sorted canonical edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    edges: Vec<usize>,
}

impl Matching {
    pub fn new(g: &CylinderGraph, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        let mut used = vec![false; g.n_vertices()];
        for (k, &e) in edges.iter().enumerate() {
            if e >= g.n_edges() {
                return Err(Error::InvalidMatching(format!("edge {e} is not in the graph")));
            }
            if k > 0 && edges[k - 1] == e {
                return Err(Error::InvalidMatching(format!("edge {e} listed twice")));
            }
            let edge = g.edge(e);
            for v in [edge.u, edge.v] {
                if used[v] {
                    return Err(Error::InvalidMatching(format!("vertex {v} covered twice")));
                }
                used[v] = true;
            }
        }
        Ok(Self { edges })
    }

    pub fn empty() -> Self {
        Self { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn covered(&self, g: &CylinderGraph) -> Vec<bool> {
        let mut c = vec![false; g.n_vertices()];
        for &e in &self.edges {
            c[g.edge(e).u] = true;
            c[g.edge(e).v] = true;
        }
        c
    }

    pub fn unpaired(&self, g: &CylinderGraph) -> Vec<usize> {
        let c = self.covered(g);
        (0..g.n_vertices()).filter(|&v| !c[v]).collect()
    }

    pub fn hamiltonian<T: Real>(&self, g: &CylinderGraph, w: &WeightAssignment<T>) -> T {
        crate::brute::hamiltonian(g, w, None, &self.edges)
    }
}

/// Scores of the backward pass: log-weights or max-plus values.
pub(crate) trait Scored<T: Real>: TransferValue<T> {
    fn score(&self) -> T;
}

impl<T: Real> Scored<T> for LogScalar<T> {
    fn score(&self) -> T {
        self.0
    }
}

impl<T: Real> Scored<T> for MaxPlus<T> {
    fn score(&self) -> T {
        self.0
    }
}

/// Picks one of the candidate scores, listed in canonical block order.
pub(crate) trait Chooser<T> {
    fn choose(&mut self, scores: &[T]) -> usize;
}

/// First candidate attaining the maximum.
pub(crate) struct FirstMax;

impl<T: Real> Chooser<T> for FirstMax {
    fn choose(&mut self, scores: &[T]) -> usize {
        let best = scores.iter().copied().fold(T::neg_infinity(), T::max);
        scores.iter().position(|&s| s == best).expect("nonempty candidates")
    }
}

/// Draws a candidate with probability proportional to `e^{score}`.
pub(crate) struct Categorical<'a>(pub &'a mut UniformStream);

impl<T: Real> Chooser<T> for Categorical<'_> {
    fn choose(&mut self, scores: &[T]) -> usize {
        let max = scores.iter().copied().fold(T::neg_infinity(), T::max);
        let weights: Vec<f64> = scores.iter().map(|&s| (s - max).to_f64_lossy().exp()).collect();
        let total: f64 = weights.iter().sum();
        let target = self.0.next_open01() * total;
        let mut acc = 0.0;
        for (k, w) in weights.iter().enumerate() {
            acc += w;
            if target < acc {
                return k;
            }
        }
        weights.iter().rposition(|&w| w > 0.0).expect("positive weight")
    }
}

/// Walks the stored tables from the last layer back to the first, choosing
/// one block per layer: the incoming set, then the within-layer matching
/// vertex by vertex (monomer first, then neighbours in fiber order).
pub(crate) fn backtrack<T: Real, S: Scored<T>, C: Chooser<T>>(
    p: &Problem<'_, T>,
    tables: &Tables<S>,
    chooser: &mut C,
) -> Vec<usize> {
    let g = p.graph();
    let w = p.weights();
    let mut edges = Vec::new();
    let mut s_out = 0u32;
    let mut candidates: Vec<(u32, T)> = Vec::new();
    for t in tables.layers.iter().rev() {
        let i = t.layer;
        let avail = t.present & !s_out;
        candidates.clear();
        for s_in in 0..t.incoming.len() as u32 {
            if s_in & !avail != 0 || t.incoming[s_in as usize].is_zero() {
                continue;
            }
            let q = &t.within[(avail & !s_in) as usize];
            if q.is_zero() {
                continue;
            }
            candidates.push((s_in, t.incoming[s_in as usize].mul(q).score()));
        }
        let scores: Vec<T> = candidates.iter().map(|c| c.1).collect();
        let s_in = candidates[chooser.choose(&scores)].0;
        // within-layer matching on the remaining vertices
        let mut rest = avail & !s_in;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let r = rest & !(1 << v);
            let vid = g.vertex_id(i, v);
            let mut opts: Vec<(Option<(usize, usize)>, T)> = Vec::new();
            let mono = S::monomer(w.nu()[vid], p.counts(vid), T::zero()).mul(&t.within[r as usize]);
            if !mono.is_zero() {
                opts.push((None, mono.score()));
            }
            for u in bits(g.fiber_neighbors(v) & r) {
                let e = g.vertical_between(i, v, u).expect("fiber edge");
                let tail = &t.within[(r & !(1 << u)) as usize];
                if w.omega()[e] == T::neg_infinity() || tail.is_zero() {
                    continue;
                }
                opts.push((Some((u, e)), S::weight(w.omega()[e]).mul(tail).score()));
            }
            let scores: Vec<T> = opts.iter().map(|o| o.1).collect();
            match opts[chooser.choose(&scores)].0 {
                None => rest = r,
                Some((u, e)) => {
                    edges.push(e);
                    rest = r & !(1 << u);
                }
            }
        }
        for j in bits(s_in) {
            edges.push(g.horizontal_edge(i - 1, j));
        }
        s_out = s_in;
    }
    edges.sort_unstable();
    edges
}

/// Forward tables at `x = 0`, reused across draws.
pub struct GibbsSampler<'a, T: Real> {
    problem: Problem<'a, T>,
    tables: Tables<LogScalar<T>>,
}

impl<'a, T: Real> GibbsSampler<'a, T> {
    pub fn new(g: &'a CylinderGraph, w: &'a WeightAssignment<T>) -> Result<Self> {
        let problem = Problem::new(g, w);
        let tables = problem.tables::<LogScalar<T>>()?;
        Ok(Self { problem, tables })
    }

    pub fn log_z(&self) -> T {
        self.tables.value.0
    }

    pub fn draw(&self, u: &mut UniformStream) -> Matching {
        Matching {
            edges: backtrack(&self.problem, &self.tables, &mut Categorical(u)),
        }
    }

    /// `count` independent draws from the `Gibbs` stream of `seed`.
    pub fn samples(&self, seed: RngSeed, count: usize) -> Vec<Matching> {
        let mut u = seed.uniforms(Domain::Gibbs);
        (0..count).map(|_| self.draw(&mut u)).collect()
    }
}

/// `count` exact draws from the Gibbs measure of `(g, w)`.
pub fn exact_sample<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    seed: RngSeed,
    count: usize,
) -> Result<Vec<Matching>> {
    Ok(GibbsSampler::new(g, w)?.samples(seed, count))
}

/// Dyadic grid `{0, 1/2^k, …, 1}`.
pub fn dyadic_grid(k: u32) -> Vec<f64> {
    let m = 1usize << k;
    (0..=m).map(|i| i as f64 / m as f64).collect()
}

/// Unpaired counts of a matching.
#[derive(Clone, Debug, PartialEq)]
pub struct Observables {
    /// `U = N − 2|m|`.
    pub u: usize,
    /// `U_{[1:k]}` for `k = 0..=n`.
    pub prefix: Vec<usize>,
}

impl Observables {
    pub fn of(g: &CylinderGraph, m: &Matching) -> Self {
        let covered = m.covered(g);
        let mut prefix = vec![0usize; g.n() + 1];
        for i in 0..g.n() {
            let free = (0..g.h()).filter(|&j| !covered[g.vertex_id(i, j)]).count();
            prefix[i + 1] = prefix[i] + free;
        }
        Self {
            u: g.n_vertices() - 2 * m.len(),
            prefix,
        }
    }

    /// `U_{[1:k]}`.
    pub fn left(&self, k: usize) -> usize {
        self.prefix[k]
    }

    /// `U_{[k+1:n]}`.
    pub fn right(&self, k: usize) -> usize {
        self.u - self.prefix[k]
    }

    /// `θ(t) = U_{[1:⌊nt⌋]}` and `θ̂(t) = n^{-1/2}(θ(t) − n t u)` on `grid`.
    pub fn height(&self, grid: &[f64], u: f64) -> HeightSeries {
        let n = (self.prefix.len() - 1) as f64;
        let theta: Vec<usize> = grid.iter().map(|&t| self.prefix[(n * t).floor() as usize]).collect();
        let theta_hat = theta
            .iter()
            .zip(grid)
            .map(|(&th, &t)| (th as f64 - n * t * u) / n.sqrt())
            .collect();
        HeightSeries {
            t: grid.to_vec(),
            theta,
            theta_hat,
        }
    }
}

/// `U`, the section counts and the height series of a validated matching.
pub fn observables(
    g: &CylinderGraph,
    edges: &[usize],
    grid: &[f64],
    u: f64,
) -> Result<(Observables, HeightSeries)> {
    let m = Matching::new(g, edges.to_vec())?;
    let obs = Observables::of(g, &m);
    let height = obs.height(grid, u);
    Ok((obs, height))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightSeries {
    pub t: Vec<f64>,
    pub theta: Vec<usize>,
    pub theta_hat: Vec<f64>,
}

impl HeightSeries {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["t", "theta", "theta_hat"])?;
        for k in 0..self.t.len() {
            wtr.write_record([
                self.t[k].to_string(),
                self.theta[k].to_string(),
                self.theta_hat[k].to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Matchings as a JSON array of edge-index arrays.
pub fn matchings_to_json(ms: &[Matching]) -> Result<String> {
    let lists: Vec<&[usize]> = ms.iter().map(|m| m.edges()).collect();
    Ok(serde_json::to_string(&lists)?)
}
