//! Lee-Yang zeroes of the gauge-transformed partition polynomial.
//!
//! With `ν ≡ 0` the polynomial is `Z̃(w) = Σ_m Π_{e∈m} e^{ω̃_e} w^{N−2|m|}`.
//! At `w = iy` it equals `i^N μ(y)`, where `μ` is the weighted matching
//! polynomial `Σ_k (−1)^k m_k y^{N−2k}`. Its roots are real and symmetric,
//! so the zeroes of `Z̃` are `±iλ_j`.
//!
//! The `λ_j` are located by bisection on a counting function. Ordering the
//! vertices canonically, `μ(G_{≤v}) / μ(G_{<v})` is negative at `y` for
//! exactly as many `v` as there are roots of `μ(G)` above `y` (the ratio is
//! the reciprocal of a Stieltjes function, so each vertex adds at most one
//! root above `y`). Each `μ(G_{≤v}, y)` is read off a profile sweep over the
//! last `h` vertices, so no coefficient is ever formed. The result is checked
//! by expanding `Π (w² + λ_j²) · w^{zero_mult}` against the transfer
//! coefficients.

use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::mask::{is_present, CountingMask, VertexSet};
use crate::polynomial::MonomerPolynomial;
use crate::real::{log_add_exp, Real};
use crate::semiring::MaxPlus;
use crate::transfer::{bits, Problem};
use crate::weights::WeightAssignment;
use serde::{Deserialize, Serialize};

/// Relative tolerance of the coefficient reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Positive half `λ_1 ≤ … ≤ λ_m` of the zeroes and the multiplicity of the
/// zero at the origin; `2m + zero_mult = N`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeeYangSpectrum<T: Real> {
    lambdas: Vec<T>,
    zero_mult: usize,
    n_vertices: usize,
    /// Largest relative coefficient residual of the reconstruction, when the
    /// polynomial was available to compare against.
    residual: Option<T>,
}

fn non_imaginary(msg: impl Into<String>) -> Error {
    Error::NonImaginaryZero(msg.into())
}

/// `μ(G_{≤v}, y)` along the canonical vertex chain.
struct Chain<'a, T: Real> {
    g: &'a CylinderGraph,
    /// `e^{ω̃_e}`; zero for disabled edges.
    w: Vec<T>,
    removed: Option<&'a VertexSet>,
}

impl<'a, T: Real> Chain<'a, T> {
    fn new(g: &'a CylinderGraph, omega_tilde: &[T], removed: Option<&'a VertexSet>) -> Self {
        Self {
            g,
            w: omega_tilde.iter().map(|x| x.exp()).collect(),
            removed,
        }
    }

    /// Number of roots of `μ(G)` strictly above `y > 0`.
    ///
    /// `f[T] = μ(G_{≤v} − T)` for subsets `T` of the last `h` vertices; slot
    /// `j'` holds `(i, j')` for `j' < j` and `(i − 1, j')` otherwise. Adding
    /// `x` gives `μ(G + x − T) = y μ(G − T) − Σ_{u∼x, u∉T} w_{xu} μ(G − T − u)`.
    fn count_above(&self, y: T) -> usize {
        let g = self.g;
        let size = 1usize << g.h();
        let mut f = vec![T::one(); size];
        let mut next = vec![T::zero(); size];
        let mut prev_negative = false;
        let mut count = 0;
        for x in 0..g.n_vertices() {
            let (i, j) = g.coords(x);
            let bit = 1u32 << j;
            if !is_present(self.removed, x) {
                for t in 0..size {
                    next[t] = f[t & !(bit as usize)];
                }
                std::mem::swap(&mut f, &mut next);
                continue;
            }
            let mut nbrs: Vec<(u32, T)> = Vec::with_capacity(g.h() + 1);
            if i > 0 && is_present(self.removed, x - g.h()) {
                let we = self.w[g.horizontal_edge(i - 1, j)];
                if we > T::zero() {
                    nbrs.push((bit, we));
                }
            }
            for jp in bits(g.fiber_neighbors(j) & (bit - 1)) {
                if !is_present(self.removed, g.vertex_id(i, jp)) {
                    continue;
                }
                let we = self.w[g.vertical_between(i, j, jp).expect("fiber edge")];
                if we > T::zero() {
                    nbrs.push((1 << jp, we));
                }
            }
            for t in 0..size as u32 {
                let old = t & !bit;
                next[t as usize] = if t & bit != 0 {
                    f[old as usize]
                } else {
                    nbrs.iter()
                        .filter(|(u, _)| old & u == 0)
                        .fold(y * f[old as usize], |acc, &(u, we)| acc - we * f[(old | u) as usize])
                };
            }
            let scale = next.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            if scale > T::zero() {
                next.iter_mut().for_each(|v| *v = *v / scale);
            }
            std::mem::swap(&mut f, &mut next);
            let negative = f[0] < T::zero();
            if negative != prev_negative {
                count += 1;
            }
            prev_negative = negative;
        }
        count
    }
}

/// Size of a maximum matching of the principal subgraph.
fn matching_number<T: Real>(
    g: &CylinderGraph,
    omega_tilde: &[T],
    removed: Option<&VertexSet>,
) -> Result<usize> {
    let nu = vec![T::zero(); g.n_vertices()];
    let omega = omega_tilde
        .iter()
        .map(|&x| if x == T::neg_infinity() { x } else { T::one() })
        .collect();
    let unit = WeightAssignment::new(g, nu, omega)?;
    let mut p = Problem::new(g, &unit);
    if let Some(r) = removed {
        p = p.without(r);
    }
    let MaxPlus(m) = p.run::<MaxPlus<T>>()?;
    Ok(m.round().to_usize().expect("matching size"))
}

/// Bound on the largest `λ`: the maximal row sum `Σ_v e^{ω̃_{uv}/2}`.
fn root_bound<T: Real>(g: &CylinderGraph, omega_tilde: &[T]) -> T {
    (0..g.n_vertices())
        .map(|u| {
            g.incident_edges(u)
                .iter()
                .fold(T::zero(), |acc, &e| acc + (omega_tilde[e] / T::lit(2.0)).exp())
        })
        .fold(T::zero(), T::max)
}

fn isolate<T: Real>(chain: &Chain<T>, lo: T, hi: T, c_lo: usize, c_hi: usize, out: &mut Vec<T>) {
    if c_lo == c_hi {
        return;
    }
    let width = hi - lo;
    if width <= T::lit(4.0) * T::epsilon() * hi || width <= T::min_positive_value() {
        let mid = lo + width / T::lit(2.0);
        out.extend(std::iter::repeat_n(mid, c_lo - c_hi));
        return;
    }
    let mid = lo + width / T::lit(2.0);
    let c_mid = chain.count_above(mid);
    // counts can only fall with y; guard against rounding at a root
    let c_mid = c_mid.clamp(c_hi, c_lo);
    isolate(chain, lo, mid, c_lo, c_mid, out);
    isolate(chain, mid, hi, c_mid, c_hi, out);
}

/// Connected components of the present vertices under the enabled edges,
/// each sorted, in order of their lowest vertex.
fn components<T: Real>(g: &CylinderGraph, omega_tilde: &[T], removed: Option<&VertexSet>) -> Vec<Vec<usize>> {
    let n = g.n_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (e, edge) in g.edges().iter().enumerate() {
        if omega_tilde[e] == T::neg_infinity() || !is_present(removed, edge.u) || !is_present(removed, edge.v) {
            continue;
        }
        let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in (0..n).filter(|&v| is_present(removed, v)) {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = out.len();
            out.push(Vec::new());
        }
        out[index[r]].push(v);
    }
    out
}

/// The `λ` of the principal subgraph without `removed`, by bisection on the
/// root count below `hi`.
fn locate<T: Real>(g: &CylinderGraph, omega_tilde: &[T], removed: &VertexSet, hi: T) -> Result<Vec<T>> {
    let m = matching_number(g, omega_tilde, Some(removed))?;
    let chain = Chain::new(g, omega_tilde, Some(removed));
    let mut lambdas = Vec::with_capacity(m);
    if m > 0 {
        let c_hi = chain.count_above(hi);
        if c_hi != 0 {
            return Err(non_imaginary(format!("{c_hi} roots above the row-sum bound")));
        }
        isolate(&chain, T::zero(), hi, m, 0, &mut lambdas);
    }
    if lambdas.len() != m {
        return Err(non_imaginary(format!("located {} of {m} conjugate pairs", lambdas.len())));
    }
    Ok(lambdas)
}

impl<T: Real> LeeYangSpectrum<T> {
    /// Zeroes of the gauge-transformed polynomial of `g` with the vertices in
    /// `removed` deleted. The expansion check runs whenever the polynomial is
    /// within polynomial-mode caps.
    pub fn compute(g: &CylinderGraph, w: &WeightAssignment<T>, removed: Option<&VertexSet>) -> Result<Self> {
        let gauge = w.gauge_transformed(g)?;
        let omega_tilde = gauge.omega();
        let h = g.h();
        let caps = crate::transfer::Caps::default();
        if h > caps.scalar_fiber {
            return Err(Error::Capacity {
                what: "fiber size h (spectrum)",
                got: h,
                limit: caps.scalar_fiber,
            });
        }
        let n_vertices = (0..g.n_vertices()).filter(|&v| is_present(removed, v)).count();
        // Components are solved separately, so that exact symmetries between
        // them give bit-identical (rather than noise-split) repeated roots.
        let hi = root_bound(g, omega_tilde) * T::lit(1.5) + T::min_positive_value();
        let mut lambdas = Vec::new();
        let mut m = 0;
        for comp in components(g, omega_tilde, removed) {
            match comp.as_slice() {
                [_] => {}
                [u, v] => {
                    let e = g
                        .incident_edges(*u)
                        .iter()
                        .copied()
                        .find(|&e| g.opposite(e, *u) == *v)
                        .expect("component edge");
                    lambdas.push((omega_tilde[e] / T::lit(2.0)).exp());
                    m += 1;
                }
                _ => {
                    let mut keep = vec![false; g.n_vertices()];
                    comp.iter().for_each(|&v| keep[v] = true);
                    let others = VertexSet::of(g, (0..g.n_vertices()).filter(|&v| !keep[v]));
                    let found = locate(g, omega_tilde, &others, hi)?;
                    m += found.len();
                    lambdas.extend(found);
                }
            }
        }
        lambdas.sort_by(|a, b| a.partial_cmp(b).expect("finite root"));
        let mut spec = Self {
            lambdas,
            zero_mult: n_vertices - 2 * m,
            n_vertices,
            residual: None,
        };
        if h <= caps.poly_fiber && g.n() <= caps.poly_layers {
            let mut p = Problem::new(g, &gauge);
            if let Some(r) = removed {
                p = p.without(r);
            }
            let poly = p.polynomial()?;
            let residual = spec.reconstruction_residual(&poly)?;
            if residual.to_f64_lossy() > RECONSTRUCTION_TOL {
                return Err(non_imaginary(format!(
                    "expansion of the zeroes misses the coefficients by {:e}", residual.to_f64_lossy()
                )));
            }
            spec.residual = Some(residual);
        }
        Ok(spec)
    }

    pub fn from_parts(mut lambdas: Vec<T>, zero_mult: usize) -> Result<Self> {
        if lambdas.iter().any(|l| !l.is_finite() || *l < T::zero()) {
            return Err(Error::Input("λ values must be finite and nonnegative".into()));
        }
        lambdas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(Self {
            n_vertices: 2 * lambdas.len() + zero_mult,
            lambdas,
            zero_mult,
            residual: None,
        })
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn zero_mult(&self) -> usize {
        self.zero_mult
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn residual(&self) -> Option<T> {
        self.residual
    }

    pub fn max_lambda(&self) -> T {
        self.lambdas.last().copied().unwrap_or(T::zero())
    }

    /// All `N` zeroes as signed reals `−λ_m ≤ … ≤ 0 ≤ … ≤ λ_m`.
    pub fn signed(&self) -> Vec<T> {
        let mut out: Vec<T> = self.lambdas.iter().rev().map(|&l| -l).collect();
        out.extend(std::iter::repeat_n(T::zero(), self.zero_mult));
        out.extend(self.lambdas.iter().copied());
        out
    }

    /// Log-coefficients of `Π_j (w² + λ_j²) · w^{zero_mult}`, indexed by the
    /// power of `w`.
    pub fn expand(&self) -> Vec<T> {
        let ninf = T::neg_infinity();
        // coefficients in s = w², lowest degree first
        let mut c = vec![T::zero()];
        for &l in &self.lambdas {
            let log_l2 = T::lit(2.0) * l.ln();
            let mut next = vec![ninf; c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k] = log_add_exp(next[k], ck + log_l2);
                next[k + 1] = log_add_exp(next[k + 1], ck);
            }
            c = next;
        }
        let mut out = vec![ninf; self.n_vertices + 1];
        for (k, ck) in c.into_iter().enumerate() {
            out[self.zero_mult + 2 * k] = ck;
        }
        out
    }

    /// Largest `|â_j / a_j − 1|` between the expansion and `p`; a coefficient
    /// that is zero on one side only counts as infinite.
    pub fn reconstruction_residual(&self, p: &MonomerPolynomial<T>) -> Result<T> {
        if p.n_vertices() != self.n_vertices {
            return Err(Error::Input(format!(
                "polynomial has degree {}, spectrum {}",
                p.n_vertices(),
                self.n_vertices
            )));
        }
        let ninf = T::neg_infinity();
        let mut worst = T::zero();
        for (j, rec) in self.expand().into_iter().enumerate() {
            let a = p.log_coeff(j);
            let r = match (a == ninf, rec == ninf) {
                (true, true) => T::zero(),
                (false, false) => (rec - a).exp_m1().abs(),
                _ => T::infinity(),
            };
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

/// JSON form `{N, zero_mult, lambdas}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDump {
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub zero_mult: usize,
    pub lambdas: Vec<f64>,
}

impl<T: Real> From<&LeeYangSpectrum<T>> for SpectrumDump {
    fn from(s: &LeeYangSpectrum<T>) -> Self {
        Self {
            n_vertices: s.n_vertices,
            zero_mult: s.zero_mult,
            lambdas: s.lambdas.iter().map(|l| l.to_f64_lossy()).collect(),
        }
    }
}

impl SpectrumDump {
    pub fn into_spectrum(self) -> Result<LeeYangSpectrum<f64>> {
        let s = LeeYangSpectrum::from_parts(self.lambdas, self.zero_mult)?;
        if s.n_vertices != self.n_vertices {
            return Err(Error::Input("N does not match 2|lambdas| + zero_mult".into()));
        }
        Ok(s)
    }
}

/// Atomic measure on the signed zeroes, with both normalizations at hand.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure<T: Real> {
    atoms: Vec<T>,
    layers: usize,
}

impl<T: Real> EmpiricalMeasure<T> {
    pub fn new(spec: &LeeYangSpectrum<T>, layers: usize) -> Self {
        Self {
            atoms: spec.signed(),
            layers,
        }
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    /// Divisor `n`: total mass `N / n`.
    pub fn per_layer(&self) -> T {
        T::one() / T::from_usize_exact(self.layers)
    }

    /// Divisor `N`: total mass 1.
    pub fn per_vertex(&self) -> T {
        T::one() / T::from_usize_exact(self.atoms.len())
    }

    pub fn integrate_per_layer(&self, f: impl Fn(T) -> T) -> T {
        self.atoms.iter().fold(T::zero(), |acc, &l| acc + f(l)) * self.per_layer()
    }

    pub fn integrate_per_vertex(&self, f: impl Fn(T) -> T) -> T {
        self.atoms.iter().fold(T::zero(), |acc, &l| acc + f(l)) * self.per_vertex()
    }
}

/// `u_n(x) = n^{-1}⟨U⟩` and `n^{-1} Var U` at tilt `x`, from the zeroes.
pub fn density_functionals<T: Real>(spec: &LeeYangSpectrum<T>, layers: usize, x: T) -> (T, T) {
    let rho = EmpiricalMeasure::new(spec, layers);
    let e = (-T::lit(2.0) * x).exp();
    let u = rho.integrate_per_layer(|l| T::one() / (T::one() + l * l * e));
    let var = rho.integrate_per_layer(|l| {
        let q = l * l * e;
        T::lit(2.0) * q / ((T::one() + q) * (T::one() + q))
    });
    (u, var)
}

/// `F(z) = ∫ z / (z + λ²)` against the probability-normalized measure.
pub fn transform_f<T: Real>(spec: &LeeYangSpectrum<T>, z: T) -> Result<T> {
    if z <= T::zero() || z.is_nan() {
        return Err(Error::Input(format!("transform argument must be positive, got {z}")));
    }
    if spec.n_vertices == 0 {
        return Err(Error::Input("empty spectrum".into()));
    }
    let rho = EmpiricalMeasure::new(spec, 1);
    Ok(rho.integrate_per_vertex(|l| if z.is_infinite() { T::one() } else { z / (z + l * l) }))
}

/// Checks `p_k ≤ c_k ≤ p_{k+1}` on the signed zeroes of a parent and of a
/// child with one vertex fewer.
pub fn verify_interlacing<T: Real>(parent: &LeeYangSpectrum<T>, child: &LeeYangSpectrum<T>) -> Result<bool> {
    if child.n_vertices + 1 != parent.n_vertices {
        return Err(Error::DegreeMismatch {
            parent: parent.n_vertices,
            child: child.n_vertices,
        });
    }
    let p = parent.signed();
    let c = child.signed();
    let slack = |x: T| T::lit(1e-9) * (T::one() + x.abs());
    Ok(c
        .iter()
        .enumerate()
        .all(|(k, &ck)| p[k] <= ck + slack(ck) && ck <= p[k + 1] + slack(ck)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Localization {
    /// `max_u Δ_u` with `Δ_u = Σ_{e∼u} e^{ω̃_e}`.
    pub bound: f64,
    pub max_lambda: f64,
    /// `max λ ≤ bound + 1e-9`.
    pub ok: bool,
    /// `max_u Σ_{e∼u} e^{ω̃_e/2}`, which bounds the zeroes for all weights.
    pub row_sum_bound: f64,
    pub row_sum_ok: bool,
}

pub fn localization_check<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    spec: &LeeYangSpectrum<T>,
) -> Result<Localization> {
    let gauge = w.gauge_transformed(g)?;
    let bound = (0..g.n_vertices())
        .map(|v| gauge.weighted_degree(g, v).to_f64_lossy())
        .fold(0.0, f64::max);
    let row_sum_bound = root_bound(g, gauge.omega()).to_f64_lossy();
    let max_lambda = spec.max_lambda().to_f64_lossy();
    Ok(Localization {
        bound,
        max_lambda,
        ok: max_lambda <= bound + 1e-9,
        row_sum_bound,
        row_sum_ok: max_lambda <= row_sum_bound * (1.0 + 1e-12) + 1e-9,
    })
}

/// Recurrence residual at a vertex `u` of the terminal layer:
/// `|log Z − log(e^{ν_u} Z^{∖u} + Σ_{v∼u} e^{ω_{uv}} Z^{∖u,v})|`.
pub fn recurrence_residual<T: Real>(g: &CylinderGraph, w: &WeightAssignment<T>, u: usize) -> Result<T> {
    if g.layer_of(u) + 1 != g.n() {
        return Err(Error::Input(format!("vertex {u} is not in the terminal layer")));
    }
    let lz = |removed: &VertexSet| -> Result<T> {
        if removed.len() == g.n_vertices() {
            return Ok(T::zero());
        }
        Problem::new(g, w).without(removed).log_z()
    };
    let whole = Problem::new(g, w).log_z()?;
    let mut rhs = w.nu()[u] + lz(&VertexSet::of(g, [u]))?;
    for &e in g.incident_edges(u) {
        let v = g.opposite(e, u);
        let term = w.omega()[e] + lz(&VertexSet::of(g, [u, v]))?;
        rhs = log_add_exp(rhs, term);
    }
    Ok((whole - rhs).abs())
}

/// Polynomial of the principal subgraph without `removed`, all counted.
pub fn gauge_polynomial<T: Real>(
    g: &CylinderGraph,
    w: &WeightAssignment<T>,
    removed: Option<&VertexSet>,
) -> Result<MonomerPolynomial<T>> {
    let gauge = w.gauge_transformed(g)?;
    let mask = CountingMask::All;
    let mut p = Problem::new(g, &gauge).mask(&mask);
    if let Some(r) = removed {
        p = p.without(r);
    }
    p.polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HGraph;

    fn spec_of(g: &CylinderGraph, w: &WeightAssignment<f64>) -> LeeYangSpectrum<f64> {
        LeeYangSpectrum::compute(g, w, None).unwrap()
    }

    #[test]
    fn two_vertices() {
        let g = CylinderGraph::path(2).unwrap();
        for (nu, omega) in [(0.0, 0.0), (0.4, -1.3), (-2.0, 3.0)] {
            let w = WeightAssignment::new(&g, vec![nu, -nu / 2.0], vec![omega]).unwrap();
            let s = spec_of(&g, &w);
            let wt = omega - nu + nu / 2.0;
            assert_eq!(s.zero_mult(), 0);
            assert!((s.lambdas()[0] - (wt / 2.0).exp()).abs() <= 1e-12 * (wt / 2.0).exp());
        }
    }

    #[test]
    fn path3_and_c4() {
        let p3 = CylinderGraph::path(3).unwrap();
        let s = spec_of(&p3, &WeightAssignment::zeros(&p3));
        assert_eq!(s.zero_mult(), 1);
        assert!((s.lambdas()[0] - 2f64.sqrt()).abs() < 1e-13);

        let c4 = CylinderGraph::new(2, HGraph::complete(2).unwrap()).unwrap();
        let s = spec_of(&c4, &WeightAssignment::zeros(&c4));
        let r2 = 2f64.sqrt();
        assert!((s.lambdas()[0] - (2.0 - r2).sqrt()).abs() < 1e-13);
        assert!((s.lambdas()[1] - (2.0 + r2).sqrt()).abs() < 1e-13);
        assert!(s.residual().unwrap() < 1e-12);
    }

    #[test]
    fn repeated_roots_of_disconnected_copies() {
        let g = CylinderGraph::new(2, HGraph::empty(3).unwrap()).unwrap();
        let s = spec_of(&g, &WeightAssignment::zeros(&g));
        assert_eq!(s.lambdas().len(), 3);
        assert!(s.lambdas().iter().all(|l| (l - 1.0).abs() < 1e-13));
    }

    #[test]
    fn split_path_gives_identical_pairs() {
        let g = CylinderGraph::new(7, HGraph::path(1).unwrap()).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let s = LeeYangSpectrum::compute(&g, &w, Some(&VertexSet::of(&g, [3]))).unwrap();
        assert_eq!((s.lambdas().len(), s.zero_mult()), (2, 2));
        assert_eq!(s.lambdas()[0], s.lambdas()[1]);
        assert!(s.residual().unwrap() < 1e-12);
    }

    #[test]
    fn no_edges_means_all_zero() {
        let g = CylinderGraph::new(1, HGraph::empty(4).unwrap()).unwrap();
        let s = spec_of(&g, &WeightAssignment::zeros(&g));
        assert_eq!((s.lambdas().len(), s.zero_mult()), (0, 4));
    }

    #[test]
    fn interlacing_examples() {
        let p3 = CylinderGraph::path(3).unwrap();
        let parent = spec_of(&p3, &WeightAssignment::zeros(&p3));
        let p2 = CylinderGraph::path(2).unwrap();
        let child = spec_of(&p2, &WeightAssignment::zeros(&p2));
        assert!(verify_interlacing(&parent, &child).unwrap());
        assert!(matches!(
            verify_interlacing(&parent, &parent),
            Err(Error::DegreeMismatch { .. })
        ));
        let bad = LeeYangSpectrum::from_parts(vec![5.0], 0).unwrap();
        assert!(!verify_interlacing(&parent, &bad).unwrap());
    }

    #[test]
    fn removed_terminal_vertex_matches_shorter_graph() {
        let p3 = CylinderGraph::path(3).unwrap();
        let w = WeightAssignment::new(&p3, vec![0.1, 0.2, 0.3], vec![0.5, -0.5]).unwrap();
        let s = LeeYangSpectrum::compute(&p3, &w, Some(&VertexSet::of(&p3, [2]))).unwrap();
        let p2 = CylinderGraph::path(2).unwrap();
        let w2 = WeightAssignment::new(&p2, vec![0.1, 0.2], vec![0.5]).unwrap();
        let t = spec_of(&p2, &w2);
        assert_eq!(s.n_vertices(), 2);
        assert!((s.lambdas()[0] - t.lambdas()[0]).abs() < 1e-14);
    }

    #[test]
    fn localization_examples() {
        let p2 = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::zeros(&p2);
        let l = localization_check(&p2, &w, &spec_of(&p2, &w)).unwrap();
        assert!(l.ok && (l.bound - 1.0).abs() < 1e-15);
        let p3 = CylinderGraph::path(3).unwrap();
        let w = WeightAssignment::zeros(&p3);
        let l = localization_check(&p3, &w, &spec_of(&p3, &w)).unwrap();
        assert!(l.ok && (l.bound - 2.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_degree_bound_fails_for_light_edges() {
        let p2 = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::new(&p2, vec![0.0, 0.0], vec![-2.0]).unwrap();
        let l = localization_check(&p2, &w, &spec_of(&p2, &w)).unwrap();
        assert!((l.max_lambda - (-1f64).exp()).abs() < 1e-14);
        assert!(!l.ok);
        assert!(l.row_sum_ok);
    }

    #[test]
    fn functionals_path2() {
        let p2 = CylinderGraph::path(2).unwrap();
        let s = spec_of(&p2, &WeightAssignment::zeros(&p2));
        let (u, v) = density_functionals(&s, 2, 0.0);
        // n = 2 layers, ⟨U⟩ = 1, Var U = 1
        assert!((u - 0.5).abs() < 1e-14);
        assert!((v - 0.5).abs() < 1e-14);
        assert!((transform_f(&s, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((transform_f(&s, 1e12).unwrap() - 1.0).abs() < 1e-9);
        assert!(transform_f(&s, 1e-14).unwrap() < 1e-9);
        assert!(transform_f(&s, 0.0).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let c4 = CylinderGraph::new(2, HGraph::complete(2).unwrap()).unwrap();
        let s = spec_of(&c4, &WeightAssignment::zeros(&c4));
        let d = SpectrumDump::from(&s);
        let text = serde_json::to_string(&d).unwrap();
        let back: SpectrumDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_spectrum().unwrap().lambdas(), s.lambdas());
    }

    #[test]
    fn recurrence_on_ladder() {
        let g = CylinderGraph::new(3, HGraph::path(2).unwrap()).unwrap();
        let nu: Vec<f64> = (0..6).map(|i| 0.3 * i as f64 - 0.7).collect();
        let omega: Vec<f64> = (0..g.n_edges()).map(|i| 0.5 - 0.2 * i as f64).collect();
        let w = WeightAssignment::new(&g, nu, omega).unwrap();
        for u in [4, 5] {
            assert!(recurrence_residual(&g, &w, u).unwrap() < 1e-12);
        }
        assert!(recurrence_residual(&g, &w, 0).is_err());
    }
}
