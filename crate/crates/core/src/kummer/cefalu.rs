use num_traits::Zero;
use serde_json::{json, Value};

use super::{build_surface, cefalu_frame, ints, project_from_node, Params};
use crate::algebra::{json as js, MPoly, ProjPoint, QMat, Scalar};
use crate::error::{Error, Result};

/// `(sum z_i^2)^2 - 3 sum z_i^4`.
pub fn cefalu_quartic() -> MPoly {
    let s2 = (0..4)
        .map(|i| MPoly::var(4, i).pow(2))
        .fold(MPoly::zero(4), |a, b| &a + &b);
    let s4 = (0..4)
        .map(|i| MPoly::var(4, i).pow(4))
        .fold(MPoly::zero(4), |a, b| &a + &b);
    &s2.pow(2) - &s4.scale(&Scalar::from_int(3))
}

#[derive(Clone, Debug)]
pub struct CrossRatioReport {
    pub center: ProjPoint,
    pub tangency_points: Vec<ProjPoint>,
    pub values: Vec<Scalar>,
    pub normalized: Vec<Scalar>,
    pub barycenter: Scalar,
}

impl CrossRatioReport {
    pub fn to_json(&self) -> Value {
        json!({
            "center": js::point(&self.center),
            "tangency_points": self.tangency_points.iter().map(js::point).collect::<Vec<_>>(),
            "values": js::scalars(&self.values),
            "normalized": js::scalars(&self.normalized),
            "barycenter": js::scalar(&self.barycenter),
        })
    }
}

/// Point where the line `l . w = 0` touches the conic.
fn tangency_point(conic: &MPoly, line: &[Scalar]) -> Result<ProjPoint> {
    let m = QMat::from_rows(vec![line.to_vec()])?;
    let basis = m.kernel();
    let (p, q) = (&basis[0], &basis[1]);
    let sum: Vec<Scalar> = p.iter().zip(q).map(|(a, b)| a + b).collect();
    let a = conic.eval(p);
    let c = conic.eval(q);
    let b = conic.eval(&sum) - &a - &c;
    if &b * &b != Scalar::from_int(4) * &a * &c {
        return Err(Error::Certificate(
            "line is not tangent to the conic".into(),
        ));
    }
    let (s, t) = if a.is_zero() {
        (Scalar::from_int(1), Scalar::zero())
    } else {
        (-b, Scalar::from_int(2) * &a)
    };
    ProjPoint::new(p.iter().zip(q).map(|(x, y)| &s * x + &t * y).collect())
}

/// Projects the six tangency points of the trope lines with `phi = 0`
/// from one of them and reads off the affine values of the other five.
pub fn cefalu_crossratio_certificate() -> Result<CrossRatioReport> {
    let s = build_surface(&Params::from_i64([0, 1, 1, 1])?)?;
    let node = ProjPoint::from_i64(&[1, 1, 1, 0])?;
    let idx = s.nodes().iter().position(|p| *p == node).unwrap();
    let proj = project_from_node(&s, idx, Some(&cefalu_frame()))?;

    // Coordinates (w2, w3, w4).
    let center_line = MPoly::linear(&ints(&[-1, 0, 1]));
    let mut center = None;
    let mut others = Vec::new();
    for l in &proj.lines {
        let coeffs: Vec<Scalar> = (0..3)
            .map(|i| {
                let mut e = vec![0; 3];
                e[i] = 1;
                l.coeff(&e)
            })
            .collect();
        let t = tangency_point(&proj.phi, &coeffs)?;
        if l.proportionality(&center_line).is_some() {
            center = Some(t);
        } else {
            others.push(t);
        }
    }
    let center = center.ok_or_else(|| Error::Certificate("no trope line w4 = w2".into()))?;
    if center != ProjPoint::from_i64(&[-2, 1, -2])? {
        return Err(Error::Certificate(format!("unexpected centre {center}")));
    }
    let mut values = Vec::new();
    for p in &others {
        let c = p.coords();
        let den = &c[2] - &c[0];
        if den.is_zero() {
            return Err(Error::Certificate(format!("{p} projects to infinity")));
        }
        values.push((&c[2] + Scalar::from_int(2) * &c[1]) / den);
    }
    values.sort();
    let n = Scalar::from_int(values.len() as i64);
    let mean = values.iter().fold(Scalar::zero(), |a, v| a + v) / &n;
    let normalized: Vec<Scalar> = values.iter().map(|v| v - &mean).collect();
    let barycenter = normalized.iter().fold(Scalar::zero(), |a, v| a + v) / n;
    if values != ints(&[-2, 0, 1, 2, 4])
        || normalized != ints(&[-3, -1, 0, 1, 3])
        || !barycenter.is_zero()
    {
        return Err(Error::Certificate("cross-ratio values differ".into()));
    }
    Ok(CrossRatioReport {
        center,
        tangency_points: others,
        values,
        normalized,
        barycenter,
    })
}
