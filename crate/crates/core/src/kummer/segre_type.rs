use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{
    build_surface, hudson_form, hudson_from_squares, normalize_coefficients, KummerSurface, Params,
};
use crate::algebra::{MPoly, QMat, Rational, Scalar};
use crate::error::{Error, Result};

/// A Kummer quartic `Q(z1^2, ..., z4^2) = 0` whose dual quadric has zero diagonal.
#[derive(Clone, Debug)]
pub struct SegreType {
    pub b: [Scalar; 3],
    /// Matrix of the dual quadric.
    pub dual: QMat,
    /// Matrix of the quadric, the inverse of `dual`.
    pub quadric: QMat,
    pub hudson: [Scalar; 5],
    pub f: MPoly,
    /// Present when every `b_i` is a rational square.
    pub surface: Option<KummerSurface>,
}

fn klein_pattern(q: &[Scalar; 4]) -> QMat {
    let idx = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    let mut m = QMat::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = q[idx[i][j]].clone();
        }
    }
    m
}

fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    let r = x.as_rational()?;
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    let n = root(r.numer())?;
    let d = root(r.denom())?;
    Some(Scalar::from(Rational::new(n, d)))
}

pub fn segre_type_surface(b2: &Scalar, b3: &Scalar, b4: &Scalar) -> Result<SegreType> {
    if [b2, b3, b4].iter().any(|b| b.is_zero()) {
        return Err(Error::InvalidParams("b_i must be nonzero".into()));
    }
    let z = Scalar::zero();
    let dual = klein_pattern(&[z, b2.clone(), b3.clone(), b4.clone()]);

    // The dual matrix preserves span(e1+e3, e2+e4) and span(e1-e3, e2-e4).
    let s = b2 + b4;
    let d = b2 - b4;
    let det1 = b3 * b3 - &s * &s;
    let det2 = b3 * b3 - &d * &d;
    if det1.is_zero() || det2.is_zero() {
        return Err(Error::Singular("dual quadric block".into()));
    }
    let (i1, i2) = (det1.inv(), det2.inv());
    // A^-1 (e1+e3) = (b3 (e1+e3) - (b2+b4)(e2+e4)) / det1
    let p = [b3 * &i1, -(&s * &i1)];
    // A^-1 (e1-e3) = (-b3 (e1-e3) + (b4-b2)(e2-e4)) / det2
    let m = [-(b3 * &i2), -(&d * &i2)];
    let half = Scalar::from_ratio(1, 2);
    let col0 = [
        &(&p[0] + &m[0]) * &half,
        &(&p[1] + &m[1]) * &half,
        &(&p[0] - &m[0]) * &half,
        &(&p[1] - &m[1]) * &half,
    ];
    let quadric = klein_pattern(&col0);
    if &dual * &quadric != QMat::identity(4) {
        return Err(Error::Certificate(
            "block inverse does not invert the dual quadric".into(),
        ));
    }

    let mut raw = col0.to_vec();
    raw.push(Scalar::zero());
    let hudson: [Scalar; 5] = normalize_coefficients(&raw)?.try_into().unwrap();
    let expected = normalize_coefficients(&hudson_from_squares(b2, b3, b4))?;
    if hudson.as_slice() != expected.as_slice() {
        return Err(Error::Certificate(
            "quadric disagrees with the coefficient formulas".into(),
        ));
    }
    let roots: Option<Vec<Scalar>> = [b2, b3, b4].iter().map(|b| rational_sqrt(b)).collect();
    let surface = match roots {
        Some(r) => {
            let mut a = vec![Scalar::zero()];
            a.extend(r);
            let s = build_surface(&Params::new(a)?)?;
            if s.hudson != hudson {
                return Err(Error::Certificate(
                    "quadric disagrees with the surface built from a".into(),
                ));
            }
            Some(s)
        }
        None => None,
    };
    Ok(SegreType {
        b: [b2.clone(), b3.clone(), b4.clone()],
        dual,
        quadric,
        f: hudson_form(&hudson),
        hudson,
        surface,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussCase {
    /// Coordinates allowed to be nonzero.
    pub support: Vec<usize>,
    pub outcome: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussReport {
    /// Value of the dual quadric at (1,1,1,1).
    pub dual_at_unit: String,
    pub cases: Vec<GaussCase>,
    pub passed: bool,
}

/// Case analysis showing the Gauss map of `Q(z^2) = 0` has no fixed point.
///
/// A fixed point with support `I` forces `Q_II x = 1` for `x = z^2`
/// (after scaling), and then `Q(x) = sum(x)` must vanish.
pub fn gauss_fixedpoint_certificate(s: &SegreType) -> GaussReport {
    let ones = vec![Scalar::one(); 4];
    let dual_at_unit = crate::algebra::dot(&ones, &s.dual.mul_vec(&ones));
    let mut cases = Vec::new();
    for mask in 1u32..16 {
        let support: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
        let k = support.len();
        let mut sub = QMat::zeros(k, k);
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                sub[(r, c)] = s.quadric[(i, j)].clone();
            }
        }
        let outcome = match sub.solve(&ones[..k]) {
            None => "inconsistent",
            Some(_) if sub.rank() < k => "inconclusive",
            Some(x) => {
                if x.iter().any(Scalar::is_zero) {
                    "smaller support"
                } else if !x.iter().fold(Scalar::zero(), |a, v| a + v).is_zero() {
                    "off the surface"
                } else {
                    "fixed point"
                }
            }
        };
        cases.push(GaussCase { support, outcome });
    }
    let passed = !dual_at_unit.is_zero()
        && cases
            .iter()
            .all(|c| !matches!(c.outcome, "inconclusive" | "fixed point"));
    GaussReport {
        dual_at_unit: dual_at_unit.to_string(),
        cases,
        passed,
    }
}
