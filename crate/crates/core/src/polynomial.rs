//! The monomer-count polynomial `Z(x) = Σ_j a_j e^{jx}`, stored as `log a_j`.

use crate::error::{Error, Result};
use crate::real::{log_sum_exp, Real};
use crate::weights::{decode_log, encode_log};
use serde::{Deserialize, Serialize};

/// Nonnegative coefficients `a_j` indexed by the number `j` of counted
/// monomers, kept in log space (`-inf` for `a_j = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct MonomerPolynomial<T: Real> {
    log_coeffs: Vec<T>,
    mask_size: usize,
    n_vertices: usize,
}

impl<T: Real> MonomerPolynomial<T> {
    /// `log_coeffs` is padded with `-inf` up to length `n_vertices + 1`.
    pub fn new(mut log_coeffs: Vec<T>, mask_size: usize, n_vertices: usize) -> Result<Self> {
        if mask_size > n_vertices {
            return Err(Error::Input(format!(
                "mask size {mask_size} exceeds vertex count {n_vertices}"
            )));
        }
        if log_coeffs.len() > n_vertices + 1 {
            let tail_nonzero = log_coeffs[n_vertices + 1..]
                .iter()
                .any(|&c| c != T::neg_infinity());
            if tail_nonzero {
                return Err(Error::Input("coefficient beyond the vertex count".into()));
            }
            log_coeffs.truncate(n_vertices + 1);
        }
        log_coeffs.resize(n_vertices + 1, T::neg_infinity());
        if log_coeffs.iter().any(|c| c.is_nan() || *c == T::infinity()) {
            return Err(Error::Input("non-finite polynomial coefficient".into()));
        }
        if log_coeffs.iter().all(|&c| c == T::neg_infinity()) {
            return Err(Error::Input("polynomial has no positive coefficient".into()));
        }
        Ok(Self {
            log_coeffs,
            mask_size,
            n_vertices,
        })
    }

    pub fn log_coeffs(&self) -> &[T] {
        &self.log_coeffs
    }

    pub fn log_coeff(&self, j: usize) -> T {
        self.log_coeffs.get(j).copied().unwrap_or(T::neg_infinity())
    }

    pub fn coeff(&self, j: usize) -> T {
        self.log_coeff(j).exp()
    }

    pub fn mask_size(&self) -> usize {
        self.mask_size
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Indices with `a_j > 0`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.log_coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != T::neg_infinity())
            .map(|(j, _)| j)
    }

    pub fn lowest_index(&self) -> usize {
        self.support().next().expect("nonzero polynomial")
    }

    pub fn highest_index(&self) -> usize {
        self.support().last().expect("nonzero polynomial")
    }

    /// `log Σ_j a_j e^{jx}`.
    pub fn log_z(&self, x: T) -> T {
        let terms: Vec<T> = self
            .support()
            .map(|j| self.log_coeffs[j] + T::from_usize_exact(j) * x)
            .collect();
        log_sum_exp(&terms)
    }

    /// Probabilities of `U = j` under the tilted measure, over the support.
    pub fn pmf(&self, x: T) -> Vec<(usize, T)> {
        let lz = self.log_z(x);
        self.support()
            .map(|j| (j, (self.log_coeffs[j] + T::from_usize_exact(j) * x - lz).exp()))
            .collect()
    }

    /// Cumulants `κ_1..κ_order` (order ≤ 4) of the counted monomer number at
    /// tilt `x`; `κ_k = ∂_x^k log Z(x)`.
    pub fn cumulants(&self, x: T, order: usize) -> Result<Vec<T>> {
        if order == 0 || order > 4 {
            return Err(Error::Input(format!("cumulant order {order} not in 1..=4")));
        }
        let pmf = self.pmf(x);
        let mean = pmf
            .iter()
            .fold(T::zero(), |acc, &(j, p)| acc + p * T::from_usize_exact(j));
        let central = |k: i32| {
            pmf.iter().fold(T::zero(), |acc, &(j, p)| {
                acc + p * (T::from_usize_exact(j) - mean).powi(k)
            })
        };
        let (m2, m3, m4) = (central(2), central(3), central(4));
        let all = [mean, m2, m3, m4 - T::lit(3.0) * m2 * m2];
        Ok(all[..order].to_vec())
    }

    /// `true` when `a_N = 1` (up to `tol` in log space), i.e. the polynomial
    /// came from gauge-transformed weights with every vertex counted.
    pub fn is_monic(&self, tol: T) -> bool {
        self.log_coeff(self.n_vertices).abs() <= tol
    }

    pub fn cast<U: Real>(&self) -> MonomerPolynomial<U> {
        MonomerPolynomial {
            log_coeffs: self
                .log_coeffs
                .iter()
                .map(|c| U::lit(c.to_f64_lossy()))
                .collect(),
            mask_size: self.mask_size,
            n_vertices: self.n_vertices,
        }
    }
}

/// JSON form `{N, mask_size, log_coeffs}` with `-inf` written as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDump {
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub mask_size: usize,
    pub log_coeffs: Vec<Option<f64>>,
}

impl From<&MonomerPolynomial<f64>> for PolynomialDump {
    fn from(p: &MonomerPolynomial<f64>) -> Self {
        Self {
            n_vertices: p.n_vertices,
            mask_size: p.mask_size,
            log_coeffs: p.log_coeffs.iter().map(|&c| encode_log(c)).collect(),
        }
    }
}

impl PolynomialDump {
    pub fn into_polynomial(self) -> Result<MonomerPolynomial<f64>> {
        MonomerPolynomial::new(
            self.log_coeffs.into_iter().map(decode_log).collect(),
            self.mask_size,
            self.n_vertices,
        )
    }
}
