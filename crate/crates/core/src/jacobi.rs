//! The `h = 1` case through tridiagonal matrices.
//!
//! `A_n` has diagonal `i e^{ν_k}` and off-diagonals `e^{ω_k/2}`, so its
//! determinant obeys `D_k = i e^{ν_k} D_{k−1} − e^{ω_{k−1}} D_{k−2}` and
//! `D_n = i^n Z_n`. Conjugating by `diag(e^{−ν_k/2})` gives `iI + Ω̃` with
//! `Ω̃` real symmetric, zero on the diagonal and `e^{ω̃_k/2}` off it; its
//! eigenvalues are the signed Lee-Yang zeroes.

use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::real::{log_add_exp, Real};
use crate::weights::WeightAssignment;
use serde::Serialize;

/// Tridiagonal matrix with diagonal `i e^{log_diag[k]}` and symmetric
/// off-diagonals `e^{log_off[k]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiMatrix<T: Real> {
    log_diag: Vec<T>,
    log_off: Vec<T>,
}

/// `log |det|` and the power `p` with `det = i^p |det|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogDet<T> {
    pub log_abs: T,
    pub phase: u8,
}

fn require_path(g: &CylinderGraph) -> Result<()> {
    if g.h() != 1 {
        return Err(Error::Input(format!("tridiagonal form needs h = 1, got h = {}", g.h())));
    }
    Ok(())
}

impl<T: Real> JacobiMatrix<T> {
    pub fn new(log_diag: Vec<T>, log_off: Vec<T>) -> Result<Self> {
        if log_diag.is_empty() || log_off.len() + 1 != log_diag.len() {
            return Err(Error::Input("need n diagonal and n − 1 off-diagonal entries".into()));
        }
        Ok(Self { log_diag, log_off })
    }

    /// `A_n` of a path with weights `w`.
    pub fn from_weights(g: &CylinderGraph, w: &WeightAssignment<T>) -> Result<Self> {
        require_path(g)?;
        let two = T::lit(2.0);
        let off = (0..g.n() - 1).map(|k| w.omega()[g.horizontal_edge(k, 0)] / two).collect();
        Self::new(w.nu().to_vec(), off)
    }

    pub fn n(&self) -> usize {
        self.log_diag.len()
    }

    pub fn log_diag(&self) -> &[T] {
        &self.log_diag
    }

    pub fn log_off(&self) -> &[T] {
        &self.log_off
    }

    /// `D A D` for the diagonal matrix `D = diag(e^{log_d[k]})`.
    pub fn conjugate(&self, log_d: &[T]) -> Result<Self> {
        if log_d.len() != self.n() {
            return Err(Error::Input("scaling has the wrong length".into()));
        }
        let two = T::lit(2.0);
        Self::new(
            self.log_diag.iter().zip(log_d).map(|(&a, &d)| a + two * d).collect(),
            self.log_off
                .iter()
                .enumerate()
                .map(|(k, &b)| b + log_d[k] + log_d[k + 1])
                .collect(),
        )
    }

    /// `D A D` with `D = diag(e^{−ν_k/2})`: unit imaginary diagonal and
    /// off-diagonals `e^{ω̃_k/2}`.
    pub fn gauge(&self) -> Result<Self> {
        let d: Vec<T> = self.log_diag.iter().map(|&x| -x / T::lit(2.0)).collect();
        self.conjugate(&d)
    }

    /// Determinant by the three-term recurrence in `(log |D|, phase)` form.
    /// The two terms of each step must carry the same phase.
    pub fn log_det(&self) -> Result<LogDet<T>> {
        let mut prev2 = LogDet {
            log_abs: T::zero(),
            phase: 0,
        };
        let mut prev = LogDet {
            log_abs: self.log_diag[0],
            phase: 1,
        };
        for k in 1..self.n() {
            let a = LogDet {
                log_abs: self.log_diag[k] + prev.log_abs,
                phase: (prev.phase + 1) % 4,
            };
            let b = LogDet {
                log_abs: T::lit(2.0) * self.log_off[k - 1] + prev2.log_abs,
                phase: (prev2.phase + 2) % 4,
            };
            let next = if b.log_abs == T::neg_infinity() {
                a
            } else if a.phase == b.phase {
                LogDet {
                    log_abs: log_add_exp(a.log_abs, b.log_abs),
                    phase: a.phase,
                }
            } else {
                return Err(Error::Input(format!(
                    "phases {} and {} meet at step {k}",
                    a.phase, b.phase
                )));
            };
            prev2 = prev;
            prev = next;
        }
        Ok(prev)
    }

    /// Eigenvalues of the real part: zero diagonal, off-diagonals
    /// `e^{log_off}`; sorted ascending.
    pub fn real_part_eigenvalues(&self) -> Vec<T> {
        let n = self.n();
        let mut d = vec![T::zero(); n];
        let mut e: Vec<T> = self.log_off.iter().map(|x| x.exp()).collect();
        e.push(T::zero());
        tridiagonal_eigenvalues(&mut d, &mut e);
        d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalue"));
        d
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `d` holds the diagonal and receives the eigenvalues; `e[k]` couples `k`
/// and `k + 1` (`e[n − 1]` is scratch).
pub fn tridiagonal_eigenvalues<T: Real>(d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m] == T::zero() {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60 * n.max(1), "QL iteration did not converge");
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}

/// `⟨U⟩ = e^{2x} tr[(Ω̃² + e^{2x})^{-1}]` from the eigenvalues of `Ω̃`.
pub fn resolvent_u<T: Real>(eigenvalues: &[T], x: T) -> T {
    let z = (T::lit(2.0) * x).exp();
    eigenvalues.iter().fold(T::zero(), |acc, &l| acc + z / (l * l + z))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetCheck {
    pub n: usize,
    pub log_det: f64,
    pub log_z: f64,
    pub residual: f64,
    pub phase: u8,
    pub phase_ok: bool,
    /// `|log|det(DAD)| − (log Z − Σν)|`.
    pub gauge_residual: f64,
}

/// Compares `|det A_n|` and `|det D A_n D|` with the transfer `log Z`.
pub fn det_check(g: &CylinderGraph, w: &WeightAssignment<f64>) -> Result<DetCheck> {
    let a = JacobiMatrix::from_weights(g, w)?;
    let det = a.log_det()?;
    let log_z = crate::transfer::Problem::new(g, w).log_z()?;
    let gauge = a.gauge()?.log_det()?;
    Ok(DetCheck {
        n: g.n(),
        log_det: det.log_abs,
        log_z,
        residual: (det.log_abs - log_z).abs(),
        phase: det.phase,
        phase_ok: det.phase as usize == g.n() % 4 && gauge.phase == det.phase,
        gauge_residual: (gauge.log_abs - (log_z - w.gauge_offset())).abs(),
    })
}

/// Per-`n` replica means for the Thouless-type relation
/// `f = γ(0) + 𝔼ν`, with `γ̂(0) = n^{-1} log Z̃_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThoulessRow {
    pub n: usize,
    pub replicas: usize,
    pub f_hat: f64,
    pub gamma_hat: f64,
    /// `|f̂ − (γ̂ + 𝔼ν)|`.
    pub gap: f64,
    /// `|f̂ − (γ̂ − 𝔼ν)|`.
    pub gap_reversed_sign: f64,
    /// `4 sd(ν) / √(n R)`.
    pub envelope: f64,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThoulessReport {
    pub rows: Vec<ThoulessRow>,
    /// Every gap inside its envelope, and the envelopes decrease along `n`.
    pub shrinking: bool,
}

/// `samples[k] = (n, log Z_n, log Z̃_n)` for each replica; `nu_mean`,
/// `nu_sd` describe the vertex law.
pub fn lyapunov_check(samples: &[(usize, f64, f64)], nu_mean: f64, nu_sd: f64) -> ThoulessReport {
    let mut ns: Vec<usize> = samples.iter().map(|s| s.0).collect();
    ns.sort_unstable();
    ns.dedup();
    let rows: Vec<ThoulessRow> = ns
        .into_iter()
        .map(|n| {
            let rs: Vec<&(usize, f64, f64)> = samples.iter().filter(|s| s.0 == n).collect();
            let r = rs.len() as f64;
            let nf = n as f64;
            let f_hat = rs.iter().map(|s| s.1).sum::<f64>() / (r * nf);
            let gamma_hat = rs.iter().map(|s| s.2).sum::<f64>() / (r * nf);
            let gap = (f_hat - (gamma_hat + nu_mean)).abs();
            let envelope = 4.0 * nu_sd / (nf * r).sqrt();
            ThoulessRow {
                n,
                replicas: rs.len(),
                f_hat,
                gamma_hat,
                gap,
                gap_reversed_sign: (f_hat - (gamma_hat - nu_mean)).abs(),
                envelope,
                within: gap <= envelope + 1e-12,
            }
        })
        .collect();
    let shrinking = rows.iter().all(|r| r.within) && rows.windows(2).all(|w| w[1].envelope <= w[0].envelope);
    ThoulessReport { rows, shrinking }
}
