//! Dense univariate polynomials over [`Scalar`]: resultants and squarefree tests.

use std::fmt;

use num_traits::{One, Zero};

use super::matrix::QMat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        let mut p = UPoly::new(vec![Scalar::one()]);
        for r in roots {
            p = p.mul(&UPoly::new(vec![-r, Scalar::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_int(i as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::new(vec![]);
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn rem(&self, divisor: &UPoly) -> Result<UPoly> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let inv = divisor.lead().unwrap().inv();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] * &inv;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    let d = &q * c;
                    r[k - dd + i] -= &d;
                }
            }
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        Ok(UPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.lead() {
            Some(l) => a.scale(&l.inv()),
            None => a,
        }
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative()).degree() == Some(0))
    }

    /// Sylvester matrix of `self` (degree m) and `other` (degree n), size (m+n)x(m+n).
    pub fn sylvester(&self, other: &UPoly) -> Result<QMat> {
        let m = self.degree().ok_or(Error::ZeroPolynomial)?;
        let n = other.degree().ok_or(Error::ZeroPolynomial)?;
        let size = m + n;
        let mut s = QMat::zeros(size, size);
        for row in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                s[(row, row + k)] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                s[(n + row, row + k)] = c.clone();
            }
        }
        Ok(s)
    }

    /// Resultant as the Sylvester determinant.
    pub fn resultant(&self, other: &UPoly) -> Result<Scalar> {
        self.sylvester(other)?.det()
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_of_linear_factors() {
        let a = Scalar::from_int(5);
        let b = Scalar::from_ratio(-2, 3);
        let p = UPoly::from_roots(std::slice::from_ref(&a));
        let q = UPoly::from_roots(std::slice::from_ref(&b));
        assert_eq!(p.resultant(&q).unwrap(), a - b);
    }

    #[test]
    fn resultant_of_quadratics() {
        // prod (sqrt2 -+ sqrt3)(-sqrt2 -+ sqrt3) = (2 - 3)^2 = 1
        let p = UPoly::from_i64(&[-2, 0, 1]);
        let q = UPoly::from_i64(&[-3, 0, 1]);
        assert_eq!(p.resultant(&q).unwrap(), Scalar::one());
    }

    #[test]
    fn resultant_vanishes_on_common_root() {
        let p = UPoly::from_i64(&[3, -4, 1]);
        let q = UPoly::from_i64(&[-3, 2, 1]);
        assert!(p.resultant(&q).unwrap().is_zero());
    }

    #[test]
    fn squarefree() {
        assert!(UPoly::from_i64(&[2, -3, 1]).is_squarefree().unwrap());
        assert!(!UPoly::from_i64(&[1, -2, 1]).is_squarefree().unwrap());
        assert!(UPoly::new(vec![]).is_squarefree().is_err());
    }

    #[test]
    fn zero_input_rejected() {
        let p = UPoly::from_i64(&[1, 1]);
        assert_eq!(p.resultant(&UPoly::new(vec![])), Err(Error::ZeroPolynomial));
    }
}
