//! Exhaustive enumeration of matchings for small graphs. Used as a
//! reference by the tests and by `exact --check`.

use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::mask::{is_present, CountingMask, VertexSet};
use crate::polynomial::MonomerPolynomial;
use crate::real::{log_sum_exp, Real};
use crate::weights::WeightAssignment;

/// Largest vertex count accepted by the enumerator.
pub const MAX_BRUTE_VERTICES: usize = 22;

/// Every matching of the principal subgraph, as sorted edge lists.
pub fn matchings(g: &CylinderGraph, removed: Option<&VertexSet>) -> Result<Vec<Vec<usize>>> {
    if g.n_vertices() > MAX_BRUTE_VERTICES {
        return Err(Error::Capacity {
            what: "vertex count (enumeration)",
            got: g.n_vertices(),
            limit: MAX_BRUTE_VERTICES,
        });
    }
    let mut out = Vec::new();
    let mut used = vec![false; g.n_vertices()];
    let mut current = Vec::new();
    extend(g, removed, 0, &mut used, &mut current, &mut out);
    for m in &mut out {
        m.sort_unstable();
    }
    Ok(out)
}

fn extend(
    g: &CylinderGraph,
    removed: Option<&VertexSet>,
    v: usize,
    used: &mut [bool],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if v == g.n_vertices() {
        out.push(current.clone());
        return;
    }
    if used[v] || !is_present(removed, v) {
        extend(g, removed, v + 1, used, current, out);
        return;
    }
    // v stays unmatched
    extend(g, removed, v + 1, used, current, out);
    for &e in g.incident_edges(v) {
        let u = g.opposite(e, v);
        if u > v && !used[u] && is_present(removed, u) {
            used[v] = true;
            used[u] = true;
            current.push(e);
            extend(g, removed, v + 1, used, current, out);
            current.pop();
            used[v] = false;
            used[u] = false;
        }
    }
}

/// `H(m)`: sum of `ν` over present uncovered vertices and `ω` over `m`.
pub fn hamiltonian<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    removed: Option<&VertexSet>,
    m: &[usize],
) -> T {
    let mut covered = vec![false; g.n_vertices()];
    let mut h = T::zero();
    for &e in m {
        let edge = g.edge(e);
        covered[edge.u] = true;
        covered[edge.v] = true;
        h = h + w.omega()[e];
    }
    (0..g.n_vertices())
        .filter(|&v| !covered[v] && is_present(removed, v))
        .fold(h, |acc, v| acc + w.nu()[v])
}

fn counted_monomers(g: &CylinderGraph, mask: &CountingMask, removed: Option<&VertexSet>, m: &[usize]) -> usize {
    let mut covered = vec![false; g.n_vertices()];
    for &e in m {
        covered[g.edge(e).u] = true;
        covered[g.edge(e).v] = true;
    }
    (0..g.n_vertices())
        .filter(|&v| !covered[v] && is_present(removed, v) && mask.counts(g, v))
        .count()
}

/// Partition polynomial by enumeration.
pub fn polynomial<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    mask: &CountingMask,
    removed: Option<&VertexSet>,
) -> Result<MonomerPolynomial<T>> {
    let ms = matchings(g, removed)?;
    let n_present = (0..g.n_vertices()).filter(|&v| is_present(removed, v)).count();
    let mask_size = (0..g.n_vertices())
        .filter(|&v| is_present(removed, v) && mask.counts(g, v))
        .count();
    let mut terms: Vec<Vec<T>> = vec![Vec::new(); n_present + 1];
    for m in &ms {
        let hm = hamiltonian(g, w, removed, m);
        if hm != T::neg_infinity() {
            terms[counted_monomers(g, mask, removed, m)].push(hm);
        }
    }
    MonomerPolynomial::new(terms.iter().map(|t| log_sum_exp(t)).collect(), mask_size, n_present)
}

/// Largest `H(m)` and every matching attaining it (within `tol`).
pub fn ground_states<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    removed: Option<&VertexSet>,
    tol: T,
) -> Result<(T, Vec<Vec<usize>>)> {
    let ms = matchings(g, removed)?;
    let values: Vec<T> = ms.iter().map(|m| hamiltonian(g, w, removed, m)).collect();
    let best = values.iter().copied().fold(T::neg_infinity(), T::max);
    let arg = ms
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v >= best - tol)
        .map(|(m, _)| m)
        .collect();
    Ok((best, arg))
}

/// Gibbs probabilities of every matching at `β = 1`.
pub fn gibbs<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>) -> Result<Vec<(Vec<usize>, f64)>> {
    let ms = matchings(g, None)?;
    let hs: Vec<f64> = ms.iter().map(|m| hamiltonian(g, w, None, m).to_f64_lossy()).collect();
    let lz = log_sum_exp(&hs);
    Ok(ms.into_iter().zip(hs).map(|(m, h)| (m, (h - lz).exp())).collect())
}
