//! Canonical projective points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::QMat;
use super::mpoly::MPoly;
use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

/// A point of projective space in canonical form.
///
/// Rational points are scaled to a primitive integer vector whose first
/// nonzero entry is positive; points with extension coordinates are scaled
/// so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let Some(pivot) = coords.iter().find(|c| !c.is_zero()) else {
            return Err(Error::ZeroPoint);
        };
        let inv = pivot.inv();
        let monic: Vec<Scalar> = coords.iter().map(|c| c * &inv).collect();
        let rats: Option<Vec<Rational>> = monic.iter().map(|c| c.as_rational().cloned()).collect();
        let coords = match rats {
            Some(r) => primitive(&r).into_iter().map(Scalar::from).collect(),
            None => monic,
        };
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(|c| c.as_rational().is_some())
    }

    pub fn dot(&self, other: &ProjPoint) -> Scalar {
        dot(&self.coords, &other.coords)
    }

    pub fn transform(&self, m: &QMat) -> Result<ProjPoint> {
        ProjPoint::new(m.mul_vec(&self.coords))
    }

    /// Integer coordinates, when the point is rational.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coords
            .iter()
            .map(|c| c.as_rational().and_then(|r| r.to_integer().to_i64()))
            .collect()
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|r| (r * Rational::from(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from(x / &g * &sign))
        .collect()
}

impl serde::Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The unique conic through five points of the plane.
pub fn conic_through(points: &[ProjPoint]) -> Result<MPoly> {
    if points.len() != 5 || points.iter().any(|p| p.len() != 3) {
        return Err(Error::Dimension(
            "conic_through needs 5 points of P^2".into(),
        ));
    }
    let exps: Vec<[u32; 3]> = vec![
        [2, 0, 0],
        [1, 1, 0],
        [1, 0, 1],
        [0, 2, 0],
        [0, 1, 1],
        [0, 0, 2],
    ];
    let mut m = QMat::zeros(5, 6);
    for (i, p) in points.iter().enumerate() {
        let c = p.coords();
        for (j, e) in exps.iter().enumerate() {
            let mut v = Scalar::one();
            for k in 0..3 {
                if e[k] > 0 {
                    v *= &c[k].pow(e[k]);
                }
            }
            m[(i, j)] = v;
        }
    }
    let ker = m.kernel();
    if ker.len() != 1 {
        return Err(Error::Degenerate(format!(
            "{}-dimensional family of conics through the points",
            ker.len()
        )));
    }
    MPoly::from_terms(
        3,
        exps.iter()
            .zip(&ker[0])
            .map(|(e, c)| (e.to_vec(), c.clone()))
            .collect(),
    )
}
