//! Ground states: the maximum of `H(m)` over matchings.

use crate::error::Result;
use crate::graph::CylinderGraph;
use crate::real::{log_sum_exp, Real};
use crate::sampler::{backtrack, FirstMax, Matching};
use crate::semiring::MaxPlus;
use crate::transfer::Problem;
use crate::weights::WeightAssignment;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState<T> {
    pub value: T,
    pub argmax: Matching,
}

/// `M_n` and one optimal matching; ties go to the first block in canonical
/// order (lowest incoming set, then monomer before dimer, neighbours by fiber).
pub fn max_weight<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>) -> Result<GroundState<T>> {
    let p = Problem::new(g, w);
    let tables = p.tables::<MaxPlus<T>>()?;
    let edges = backtrack(&p, &tables, &mut FirstMax);
    Ok(GroundState {
        value: tables.value.0,
        argmax: Matching::new(g, edges)?,
    })
}

/// `M` of the layers `range` (0-based, half open).
pub fn max_weight_layers<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    range: std::ops::Range<usize>,
) -> Result<T> {
    Ok(Problem::new(g, w).layers(range).run::<MaxPlus<T>>()?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GseRemainder {
    pub cut: usize,
    pub remainder: f64,
    /// `Σ_{cut edges} (ω − ν_u − ν_v)_+`.
    pub bound: f64,
}

/// `M_n − M_{[1:k]} − M_{[k+1:n]}` with its bound.
pub fn gse_remainder<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, cut: usize) -> Result<GseRemainder> {
    if cut == 0 || cut >= g.n() {
        return Err(crate::error::Error::BadRange {
            start: cut,
            end: cut + 1,
            layers: g.n(),
        });
    }
    let whole = max_weight_layers(g, w, 0..g.n())?;
    let left = max_weight_layers(g, w, 0..cut)?;
    let right = max_weight_layers(g, w, cut..g.n())?;
    let bound = g.cut_edges(cut - 1).fold(0.0, |acc, e| {
        let edge = g.edge(e);
        let wt = w.omega()[e] - w.nu()[edge.u] - w.nu()[edge.v];
        acc + wt.to_f64_lossy().max(0.0)
    });
    Ok(GseRemainder {
        cut,
        remainder: (whole - left - right).to_f64_lossy(),
        bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderPoint {
    pub beta: f64,
    /// `β^{-1} log Z_β`.
    pub free_energy: f64,
    /// `β^{-1} log Z_β − M_n`.
    pub gap: f64,
}

/// `β^{-1} log Z_β` for weights scaled by `β`, against `M_n`.
pub fn zero_temperature_ladder(
    g: &CylinderGraph,
    w: &WeightAssignment<f64>,
    betas: &[f64],
) -> Result<(f64, Vec<LadderPoint>)> {
    let m = max_weight(g, w)?.value;
    let mut out = Vec::with_capacity(betas.len());
    for &beta in betas {
        let scaled = w.scaled(g, beta)?;
        let lz = Problem::new(g, &scaled).log_z()?;
        out.push(LadderPoint {
            beta,
            free_energy: lz / beta,
            gap: lz / beta - m,
        });
    }
    Ok((m, out))
}

/// The same ladder from coefficient sequences already computed at each `β`.
pub fn ladder_from_polynomials<T: Real>(
    ladder: &[(f64, crate::polynomial::MonomerPolynomial<T>)],
    m: f64,
) -> Vec<LadderPoint> {
    ladder
        .iter()
        .map(|(beta, p)| {
            let lz = log_sum_exp(p.log_coeffs()).to_f64_lossy();
            LadderPoint {
                beta: *beta,
                free_energy: lz / beta,
                gap: lz / beta - m,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_examples() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::new(&g, vec![0.0, 0.0], vec![1.0]).unwrap();
        let gs = max_weight(&g, &w).unwrap();
        assert_eq!((gs.value, gs.argmax.edges()), (1.0, &[0usize][..]));
        let w = WeightAssignment::new(&g, vec![0.0, 0.0], vec![-1.0]).unwrap();
        let gs = max_weight(&g, &w).unwrap();
        assert_eq!(gs.value, 0.0);
        assert!(gs.argmax.is_empty());

        let g = CylinderGraph::path(3).unwrap();
        let w = WeightAssignment::new(&g, vec![0.0; 3], vec![1.0, 2.0]).unwrap();
        let gs = max_weight(&g, &w).unwrap();
        assert_eq!((gs.value, gs.argmax.edges()), (2.0, &[1usize][..]));
    }

    #[test]
    fn ties_prefer_canonical_order() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let gs = max_weight(&g, &w).unwrap();
        assert_eq!(gs.value, 0.0);
        assert_eq!(gs.argmax, max_weight(&g, &w).unwrap().argmax);
    }

    #[test]
    fn remainder_examples() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::new(&g, vec![0.0, 0.0], vec![3.0]).unwrap();
        let r = gse_remainder(&g, &w, 1).unwrap();
        assert_eq!((r.remainder, r.bound), (3.0, 3.0));
        let w = WeightAssignment::new(&g, vec![0.5, 0.25], vec![f64::NEG_INFINITY]).unwrap();
        assert_eq!(gse_remainder(&g, &w, 1).unwrap().remainder, 0.0);
    }

    #[test]
    fn ladder_closed_form() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::new(&g, vec![0.0, 0.0], vec![1.0]).unwrap();
        let (m, pts) = zero_temperature_ladder(&g, &w, &[1.0, 2.0, 4.0, 8.0, 16.0]).unwrap();
        assert_eq!(m, 1.0);
        for p in &pts {
            let want = (1.0 + p.beta.exp()).ln() / p.beta - 1.0;
            assert!((p.gap - want).abs() < 1e-14);
            assert!(p.gap <= 2f64.ln() / p.beta + 1e-15);
        }
        assert!(pts.windows(2).all(|w| w[1].gap < w[0].gap));
    }
}
