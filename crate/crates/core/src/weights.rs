//! Vertex and edge weights, the gauge transformation, and JSON dumps.

use crate::disorder::{DisorderSpec, Domain, RngSeed};
use crate::error::{Error, Result};
use crate::graph::{CylinderGraph, HGraph};
use crate::real::Real;
use serde::{Deserialize, Serialize};

/// Weights `ν` (canonical vertex order) and `ω` (canonical edge order),
/// together with the gauge-transformed edge weights
/// `ω̃_{uv} = ω_{uv} − ν_u − ν_v` and the offset `Σ_v ν_v`.
///
/// `-inf` marks a disabled vertex or edge. A disabled edge stays disabled
/// under the gauge; a disabled vertex makes the gauge undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAssignment<T: Real> {
    nu: Vec<T>,
    omega: Vec<T>,
    omega_tilde: Vec<T>,
    gauge_offset: T,
    seed: Option<RngSeed>,
}

fn check_weight<T: Real>(x: T, what: &str, idx: usize) -> Result<()> {
    if x.is_nan() || x == T::infinity() {
        return Err(Error::Input(format!("{what}[{idx}] = {x} is not finite")));
    }
    Ok(())
}

impl<T: Real> WeightAssignment<T> {
    pub fn new(g: &CylinderGraph, nu: Vec<T>, omega: Vec<T>) -> Result<Self> {
        if nu.len() != g.n_vertices() {
            return Err(Error::Input(format!(
                "expected {} vertex weights, got {}",
                g.n_vertices(),
                nu.len()
            )));
        }
        if omega.len() != g.n_edges() {
            return Err(Error::Input(format!(
                "expected {} edge weights, got {}",
                g.n_edges(),
                omega.len()
            )));
        }
        for (i, &x) in nu.iter().enumerate() {
            check_weight(x, "nu", i)?;
        }
        for (i, &x) in omega.iter().enumerate() {
            check_weight(x, "omega", i)?;
        }
        let omega_tilde = g
            .edges()
            .iter()
            .zip(&omega)
            .map(|(e, &w)| {
                if w == T::neg_infinity() {
                    w
                } else {
                    w - nu[e.u] - nu[e.v]
                }
            })
            .collect();
        let gauge_offset = nu.iter().fold(T::zero(), |acc, &x| acc + x);
        Ok(Self {
            nu,
            omega,
            omega_tilde,
            gauge_offset,
            seed: None,
        })
    }

    /// All vertex weights `nu`, all edge weights `omega`.
    pub fn constant(g: &CylinderGraph, nu: T, omega: T) -> Result<Self> {
        Self::new(g, vec![nu; g.n_vertices()], vec![omega; g.n_edges()])
    }

    pub fn zeros(g: &CylinderGraph) -> Self {
        Self::constant(g, T::zero(), T::zero()).expect("zero weights are valid")
    }

    pub fn nu(&self) -> &[T] {
        &self.nu
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn omega_tilde(&self) -> &[T] {
        &self.omega_tilde
    }

    pub fn gauge_offset(&self) -> T {
        self.gauge_offset
    }

    pub fn seed(&self) -> Option<RngSeed> {
        self.seed
    }

    pub fn with_seed(mut self, seed: RngSeed) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn has_finite_vertices(&self) -> bool {
        self.nu.iter().all(|x| x.is_finite())
    }

    /// The equivalent weights with `ν ≡ 0` and `ω = ω̃`; the partition
    /// function drops by exactly `e^{gauge_offset}`.
    pub fn gauge_transformed(&self, g: &CylinderGraph) -> Result<Self> {
        if !self.has_finite_vertices() {
            return Err(Error::Input(
                "gauge transformation needs finite vertex weights".into(),
            ));
        }
        let mut out = Self::new(g, vec![T::zero(); self.nu.len()], self.omega_tilde.clone())?;
        out.seed = self.seed;
        Ok(out)
    }

    /// Every weight multiplied by `beta` (inverse temperature).
    pub fn scaled(&self, g: &CylinderGraph, beta: T) -> Result<Self> {
        let scale = |x: T| if x == T::neg_infinity() { x } else { x * beta };
        let mut out = Self::new(
            g,
            self.nu.iter().map(|&x| scale(x)).collect(),
            self.omega.iter().map(|&x| scale(x)).collect(),
        )?;
        out.seed = self.seed;
        Ok(out)
    }

    /// Weighted degree `Δ_v = Σ_{e ∼ v} exp(ω̃_e)`.
    pub fn weighted_degree(&self, g: &CylinderGraph, v: usize) -> T {
        g.incident_edges(v)
            .iter()
            .fold(T::zero(), |acc, &e| acc + self.omega_tilde[e].exp())
    }

    pub fn cast<U: Real>(&self, g: &CylinderGraph) -> Result<WeightAssignment<U>> {
        let conv = |x: &T| U::lit(x.to_f64_lossy());
        let mut out = WeightAssignment::new(
            g,
            self.nu.iter().map(conv).collect(),
            self.omega.iter().map(conv).collect(),
        )?;
        out.seed = self.seed;
        Ok(out)
    }
}

/// Draws `ν` and `ω` from `spec`.
///
/// Draws are consumed layer by layer: the `h` vertex weights of layer `i`,
/// then its vertical edges, then the `h` horizontal edges towards layer
/// `i + 1` (drawn and discarded on the last layer). A graph with fewer
/// layers therefore sees a prefix of the environment of a longer one under
/// the same seed.
pub fn sample_weights<T: Real>(
    g: &CylinderGraph,
    spec: &DisorderSpec,
    seed: RngSeed,
) -> Result<WeightAssignment<T>> {
    spec.validate()?;
    let h = g.h();
    let n_h_edges = g.fiber().edges().len();
    let mut nu = vec![T::zero(); g.n_vertices()];
    let mut omega = vec![T::zero(); g.n_edges()];
    let mut u = seed.uniforms(Domain::Weights);
    for i in 0..g.n() {
        for j in 0..h {
            nu[g.vertex_id(i, j)] = T::lit(u.draw(&spec.vertex));
        }
        for e in 0..n_h_edges {
            omega[g.vertical_edge(i, e)] = T::lit(u.draw(&spec.edge));
        }
        for j in 0..h {
            let x = u.draw(&spec.edge);
            if i + 1 < g.n() {
                omega[g.horizontal_edge(i, j)] = T::lit(x);
            }
        }
    }
    Ok(WeightAssignment::new(g, nu, omega)?.with_seed(seed))
}

/// JSON form of a graph plus weights. `-inf` weights are written as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightDump {
    pub n: usize,
    pub h: usize,
    pub h_edges: Vec<(usize, usize)>,
    pub nu: Vec<Option<f64>>,
    pub omega: Vec<Option<f64>>,
    pub seed: Option<RngSeed>,
}

pub(crate) fn encode_log(x: f64) -> Option<f64> {
    if x == f64::NEG_INFINITY {
        None
    } else {
        Some(x)
    }
}

pub(crate) fn decode_log(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NEG_INFINITY)
}

impl WeightDump {
    pub fn from_weights(g: &CylinderGraph, w: &WeightAssignment<f64>) -> Self {
        Self {
            n: g.n(),
            h: g.h(),
            h_edges: g.fiber().edges().to_vec(),
            nu: w.nu().iter().map(|&x| encode_log(x)).collect(),
            omega: w.omega().iter().map(|&x| encode_log(x)).collect(),
            seed: w.seed(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_parts(self) -> Result<(CylinderGraph, WeightAssignment<f64>)> {
        let g = CylinderGraph::new(self.n, HGraph::new(self.h, self.h_edges)?)?;
        let mut w = WeightAssignment::new(
            &g,
            self.nu.into_iter().map(decode_log).collect(),
            self.omega.into_iter().map(decode_log).collect(),
        )?;
        w.seed = self.seed;
        Ok((g, w))
    }
}
