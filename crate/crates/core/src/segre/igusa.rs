use std::collections::BTreeSet;

use num_traits::Zero;

use super::{from_chart, perfect_matchings, power_sum, to_chart, to_chart_poly};
use crate::algebra::{dot, linear_forms, MPoly, ProjPoint, QMat, Scalar};
use crate::error::{Error, Result};
use crate::kummer::verify_singular_points;

/// `s2^2 - 4 s4` on the chart of `s1 = 0`.
pub fn igusa_quartic() -> Result<MPoly> {
    let s2 = power_sum(6, 2);
    let s4 = power_sum(6, 4);
    to_chart_poly(&(&(&s2 * &s2) - &s4.scale(&Scalar::from_int(4))))
}

/// Tangent hyperplane of the cubic at a chart point, as a point of the dual
/// chart: `x_i^2 - s2/6`.
pub fn dual_point(p: &ProjPoint) -> Result<ProjPoint> {
    let x = from_chart(p.coords());
    let s2 = x.iter().fold(Scalar::zero(), |a, c| a + c * c);
    let mean = s2 * Scalar::from_ratio(1, 6);
    let y: Vec<Scalar> = x.iter().map(|c| c * c - &mean).collect();
    to_chart(&y)
}

/// The quartic cut on the Igusa quartic by its tangent hyperplane at `point`.
#[derive(Clone, Debug)]
pub struct TangentSection {
    pub point: ProjPoint,
    /// Normal of the tangent hyperplane in chart coordinates.
    pub hyperplane: Vec<Scalar>,
    /// Columns span the hyperplane; section coordinates `c` map to `basis * c`.
    pub basis: QMat,
    pub quartic: MPoly,
    /// The tangency point and the 15 traces of the singular lines, in section coordinates.
    pub nodes: Vec<ProjPoint>,
}

pub fn tangent_section(point: &ProjPoint) -> Result<TangentSection> {
    let s = igusa_quartic()?;
    let c = point.coords();
    if c.len() != 5 {
        return Err(Error::Dimension(format!(
            "expected a point of P^4, got {} coordinates",
            c.len()
        )));
    }
    if !s.eval(c).is_zero() {
        return Err(Error::InvalidParams(format!(
            "{point} is not on the quartic"
        )));
    }
    let normal: Vec<Scalar> = s.gradient().iter().map(|d| d.eval(c)).collect();
    if normal.iter().all(Scalar::is_zero) {
        return Err(Error::Singular(format!(
            "{point} is a singular point of the quartic"
        )));
    }
    let basis = QMat::from_rows(QMat::from_rows(vec![normal.clone()])?.kernel())?.transpose();
    let quartic = s.compose(&linear_forms(&basis))?;
    let coords_of = |x: &[Scalar]| -> Result<ProjPoint> {
        let sol = basis
            .solve(x)
            .ok_or_else(|| Error::Certificate("point is off the hyperplane".into()))?;
        ProjPoint::new(sol)
    };

    let mut nodes = vec![coords_of(c)?];
    // Singular lines: x_i = x_j, x_k = x_l, x_m = x_n on s1 = 0.
    for m in perfect_matchings(6) {
        let vector = |plus: usize, minus: usize| {
            let mut v = vec![Scalar::zero(); 6];
            for &i in &[m[plus].0, m[plus].1] {
                v[i] = Scalar::from_int(1);
            }
            for &i in &[m[minus].0, m[minus].1] {
                v[i] = Scalar::from_int(-1);
            }
            v[..5].to_vec()
        };
        let (v1, v2) = (vector(0, 1), vector(0, 2));
        let (a, b) = (dot(&normal, &v2), -dot(&normal, &v1));
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidParams(format!(
                "singular line {m:?} lies in the tangent hyperplane"
            )));
        }
        let x: Vec<Scalar> = v1.iter().zip(&v2).map(|(p, q)| &a * p + &b * q).collect();
        nodes.push(coords_of(&x)?);
    }
    let distinct: BTreeSet<&ProjPoint> = nodes.iter().collect();
    if distinct.len() != 16 {
        return Err(Error::InvalidParams(format!(
            "{point} lies on a singular line: only {} distinct singular points",
            distinct.len()
        )));
    }
    verify_singular_points(&quartic, &nodes, 3)?;
    Ok(TangentSection {
        point: point.clone(),
        hyperplane: normal,
        basis,
        quartic,
        nodes,
    })
}

/// Whether the discriminant of the projection from `P` is dual to the tangent
/// section at the dual point of `P`: the Gauss image of the discriminant,
/// carried to section coordinates, lies on the section.
///
/// Chart points of `s1 = 0` pair through `x . y + (sum x)(sum y)`; a plane in
/// the projection target is a hyperplane of `P^4` through `P`, whose dual point
/// lies on the tangent hyperplane at the dual point.
pub fn duality_certificate(pd: &super::ProjectionData, ts: &TangentSection) -> Result<bool> {
    let n = 5;
    let mut pairing = QMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            pairing[(i, j)] += &Scalar::from_int(1);
        }
    }
    let to_forms = pd.frame.transpose().inverse()?;
    let pairing_inv = pairing.inverse()?;
    let mut k = QMat::zeros(4, 4);
    for j in 0..4 {
        let mut eta = vec![Scalar::zero(); n];
        eta[j + 1] = Scalar::from_int(1);
        let y = pairing_inv.mul_vec(&to_forms.mul_vec(&eta));
        let c = ts
            .basis
            .solve(&y)
            .ok_or_else(|| Error::Certificate("dual plane is off the tangent hyperplane".into()))?;
        for i in 0..4 {
            k[(i, j)] = c[i].clone();
        }
    }
    let grad = pd.f.gradient();
    let subs: Vec<MPoly> = (0..4)
        .map(|i| (0..4).fold(MPoly::zero(4), |acc, j| &acc + &grad[j].scale(&k[(i, j)])))
        .collect();
    Ok(ts.quartic.compose(&subs)?.reduce_by(&pd.f)?.is_zero())
}
