//! Value types carried by the layer transfer engine.
//!
//! The engine only needs `⊕`, `⊗` and the two leaf constructors (a plain
//! weight `e^w` and a monomer factor). Swapping the value type switches the
//! engine between partition functions, polynomials in the monomer fugacity,
//! moment tracking and max-plus ground states.

use crate::real::{log_add_exp, Real};

pub trait TransferValue<T: Real>: Clone + Send + Sync {
    /// Whether the value grows with the number of counted monomers
    /// (selects the polynomial-mode capacity limits).
    const POLYNOMIAL: bool = false;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Uncounted factor `e^{log_w}`.
    fn weight(log_w: T) -> Self;
    /// Factor of an uncovered vertex with weight `log_w`; `counted` vertices
    /// also receive the tilt.
    fn monomer(log_w: T, counted: bool, tilt: T) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
}

/// `log Z` at a fixed tilt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScalar<T>(pub T);

impl<T: Real> TransferValue<T> for LogScalar<T> {
    fn zero() -> Self {
        LogScalar(T::neg_infinity())
    }
    fn one() -> Self {
        LogScalar(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.0 == T::neg_infinity()
    }
    fn weight(log_w: T) -> Self {
        LogScalar(log_w)
    }
    fn monomer(log_w: T, counted: bool, tilt: T) -> Self {
        if counted && log_w != T::neg_infinity() {
            LogScalar(log_w + tilt)
        } else {
            LogScalar(log_w)
        }
    }
    fn add_assign(&mut self, other: &Self) {
        self.0 = log_add_exp(self.0, other.0);
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        LogScalar(self.0 + other.0)
    }
}

/// Log-coefficients of a polynomial in `e^x`; entry `j` is `log a_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPoly<T>(pub Vec<T>);

impl<T: Real> TransferValue<T> for LogPoly<T> {
    const POLYNOMIAL: bool = true;

    fn zero() -> Self {
        LogPoly(Vec::new())
    }
    fn one() -> Self {
        LogPoly(vec![T::zero()])
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == T::neg_infinity())
    }
    fn weight(log_w: T) -> Self {
        if log_w == T::neg_infinity() {
            Self::zero()
        } else {
            LogPoly(vec![log_w])
        }
    }
    fn monomer(log_w: T, counted: bool, _tilt: T) -> Self {
        if log_w == T::neg_infinity() {
            Self::zero()
        } else if counted {
            LogPoly(vec![T::neg_infinity(), log_w])
        } else {
            LogPoly(vec![log_w])
        }
    }
    fn add_assign(&mut self, other: &Self) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), T::neg_infinity());
        }
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = log_add_exp(*a, b);
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::zero();
        }
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let len = long.len() + short.len() - 1;
        let ninf = T::neg_infinity();
        let mut out = vec![ninf; len];
        let mut terms: Vec<T> = Vec::with_capacity(short.len());
        for (k, slot) in out.iter_mut().enumerate() {
            terms.clear();
            let lo = k.saturating_sub(long.len() - 1);
            let hi = k.min(short.len() - 1);
            let mut max = ninf;
            for d in lo..=hi {
                let (a, b) = (long[k - d], short[d]);
                if a == ninf || b == ninf {
                    continue;
                }
                let t = a + b;
                max = max.max(t);
                terms.push(t);
            }
            if max == ninf {
                continue;
            }
            let s = terms.iter().fold(T::zero(), |acc, &t| acc + (t - max).exp());
            *slot = max + s.ln();
        }
        LogPoly(out)
    }
}

/// `log Z` together with the mean and variance of the counted monomers.
///
/// Sums mix the moments with mixture weights; products add them (the two
/// factors describe disjoint sets of vertices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments<T> {
    pub log_mass: T,
    pub mean: T,
    pub var: T,
}

impl<T: Real> TransferValue<T> for Moments<T> {
    fn zero() -> Self {
        Moments {
            log_mass: T::neg_infinity(),
            mean: T::zero(),
            var: T::zero(),
        }
    }
    fn one() -> Self {
        Moments {
            log_mass: T::zero(),
            mean: T::zero(),
            var: T::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.log_mass == T::neg_infinity()
    }
    fn weight(log_w: T) -> Self {
        Moments {
            log_mass: log_w,
            mean: T::zero(),
            var: T::zero(),
        }
    }
    fn monomer(log_w: T, counted: bool, tilt: T) -> Self {
        if counted && log_w != T::neg_infinity() {
            Moments {
                log_mass: log_w + tilt,
                mean: T::one(),
                var: T::zero(),
            }
        } else {
            Self::weight(log_w)
        }
    }
    fn add_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = *other;
            return;
        }
        let total = log_add_exp(self.log_mass, other.log_mass);
        let p = (self.log_mass - total).exp();
        let q = (other.log_mass - total).exp();
        let mean = p * self.mean + q * other.mean;
        let da = self.mean - mean;
        let db = other.mean - mean;
        let var = p * (self.var + da * da) + q * (other.var + db * db);
        *self = Moments {
            log_mass: total,
            mean,
            var,
        };
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Moments {
            log_mass: self.log_mass + other.log_mass,
            mean: self.mean + other.mean,
            var: self.var + other.var,
        }
    }
}

/// Max-plus value: the largest Hamiltonian over the configurations summarized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxPlus<T>(pub T);

impl<T: Real> TransferValue<T> for MaxPlus<T> {
    fn zero() -> Self {
        MaxPlus(T::neg_infinity())
    }
    fn one() -> Self {
        MaxPlus(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.0 == T::neg_infinity()
    }
    fn weight(log_w: T) -> Self {
        MaxPlus(log_w)
    }
    fn monomer(log_w: T, counted: bool, tilt: T) -> Self {
        if counted && log_w != T::neg_infinity() {
            MaxPlus(log_w + tilt)
        } else {
            MaxPlus(log_w)
        }
    }
    fn add_assign(&mut self, other: &Self) {
        if other.0 > self.0 {
            self.0 = other.0;
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        MaxPlus(self.0 + other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_product_is_convolution() {
        // (1 + 2y)(3 + y + y^2) = 3 + 7y + 3y^2 + 2y^3
        let a = LogPoly(vec![0.0f64, 2f64.ln()]);
        let b = LogPoly(vec![3f64.ln(), 0.0, 0.0]);
        let c = a.mul(&b);
        let expect = [3.0, 7.0, 3.0, 2.0];
        for (got, want) in c.0.iter().zip(expect) {
            assert!((got.exp() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn poly_sum_pads() {
        let mut a = LogPoly(vec![0.0f64]);
        a.add_assign(&LogPoly(vec![f64::NEG_INFINITY, 0.0]));
        assert_eq!(a.0, vec![0.0, 0.0]);
    }

    #[test]
    fn moments_mixture() {
        // U uniform on {0, 2}: mean 1, variance 1
        let mut m = Moments::<f64>::one();
        let two = Moments::monomer(0.0, true, 0.0).mul(&Moments::monomer(0.0, true, 0.0));
        m.add_assign(&two);
        assert!((m.log_mass - 2f64.ln()).abs() < 1e-15);
        assert!((m.mean - 1.0).abs() < 1e-15);
        assert!((m.var - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_annihilates() {
        assert!(LogScalar::<f64>::zero().mul(&LogScalar(3.0)).is_zero());
        assert!(MaxPlus::<f64>::zero().mul(&MaxPlus(3.0)).is_zero());
        assert!(LogPoly::<f64>::zero().mul(&LogPoly(vec![1.0])).is_zero());
        assert!(Moments::<f64>::zero().mul(&Moments::one()).is_zero());
    }
}
