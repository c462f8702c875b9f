use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{json as js, MPoly, ProjPoint, QMat, Scalar};
use crate::error::{Error, Result};

/// Rows are the face forms `w_i` of the tetrahedron: `w_i` vanishes at every
/// vertex except the i-th, and is scaled to 1 at `(1,...,1)` when possible.
pub fn face_forms(tetrad: &[ProjPoint]) -> Result<QMat> {
    let n = tetrad.len();
    let mut m = QMat::zeros(n, n);
    for (j, p) in tetrad.iter().enumerate() {
        if p.len() != n {
            return Err(Error::Dimension("tetrad point has wrong length".into()));
        }
        for i in 0..n {
            m[(i, j)] = p.coords()[i].clone();
        }
    }
    let mut w = m
        .inverse()
        .map_err(|_| Error::Degenerate("tetrad points are linearly dependent".into()))?;
    for i in 0..n {
        let at_unit = w.row(i).iter().fold(Scalar::zero(), |acc, x| acc + x);
        if !at_unit.is_zero() {
            let s = at_unit.inv();
            for j in 0..n {
                w[(i, j)] = &w[(i, j)] * &s;
            }
        }
    }
    Ok(w)
}

#[derive(Clone, Debug)]
pub struct CremonaImage {
    pub point: ProjPoint,
    /// Image `(1/w_i)` in the w-frame; `None` when the point lies on a face.
    pub w_image: Option<ProjPoint>,
    /// The same image expressed back in z-coordinates.
    pub z_image: Option<ProjPoint>,
    /// Whether `z_image` is a singular point of F.
    pub z_image_singular: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct CremonaReport {
    pub invariant: bool,
    pub frame: QMat,
    pub f_w: MPoly,
    pub images: Vec<CremonaImage>,
}

impl CremonaReport {
    pub fn to_json(&self) -> Value {
        let imgs: Vec<Value> = self
            .images
            .iter()
            .map(|i| {
                json!({
                    "point": js::point(&i.point),
                    "w_image": i.w_image.as_ref().map(js::point),
                    "z_image": i.z_image.as_ref().map(js::point),
                    "z_image_singular": i.z_image_singular,
                })
            })
            .collect();
        json!({ "invariant": self.invariant, "frame": js::matrix(&self.frame), "images": imgs })
    }
}

/// Tests whether `(w_i) -> (1/w_i)` maps `F = 0` to itself, and records the
/// images of the given points.
pub fn cremona_test(
    f: &MPoly,
    tetrad: &[ProjPoint],
    frame: Option<&QMat>,
    points: &[ProjPoint],
) -> Result<CremonaReport> {
    let n = f.nvars();
    if tetrad.len() != n {
        return Err(Error::Dimension(format!("need {n} tetrad points")));
    }
    let w = match frame {
        Some(w) => {
            for i in 0..n {
                for (j, p) in tetrad.iter().enumerate() {
                    let v = crate::algebra::dot(&w.row(i), p.coords());
                    if v.is_zero() != (i != j) {
                        return Err(Error::InvalidParams(format!(
                            "form {i} does not cut out the face opposite vertex {i}"
                        )));
                    }
                }
            }
            w.clone()
        }
        None => face_forms(tetrad)?,
    };
    let w_inv = w
        .inverse()
        .map_err(|_| Error::Degenerate("face forms are dependent".into()))?;
    let f_w = f.substitute_linear(&w_inv)?;
    let d = f.degree().unwrap_or(0);
    let invariant = if d % 2 == 1 {
        false
    } else {
        let top = d / 2;
        let mut terms = Vec::new();
        let mut ok = true;
        for (m, c) in f_w.terms() {
            if m.0.iter().any(|&e| e > top) {
                ok = false;
                break;
            }
            terms.push((m.0.iter().map(|&e| top - e).collect(), c.clone()));
        }
        if ok {
            let image = MPoly::from_terms(n, terms)?;
            image.proportionality(&f_w).is_some()
        } else {
            false
        }
    };

    let grad = f.gradient();
    let images = points
        .iter()
        .map(|p| {
            let wv = w.mul_vec(p.coords());
            if wv.iter().any(Scalar::is_zero) {
                return Ok(CremonaImage {
                    point: p.clone(),
                    w_image: None,
                    z_image: None,
                    z_image_singular: None,
                });
            }
            let inv: Vec<Scalar> = wv.iter().map(Scalar::inv).collect();
            let z = ProjPoint::new(w_inv.mul_vec(&inv))?;
            let singular =
                f.eval(z.coords()).is_zero() && grad.iter().all(|g| g.eval(z.coords()).is_zero());
            Ok(CremonaImage {
                point: p.clone(),
                w_image: Some(ProjPoint::new(inv)?),
                z_image: Some(z),
                z_image_singular: Some(singular),
            })
        })
        .collect::<Result<_>>()?;
    Ok(CremonaReport {
        invariant,
        frame: w,
        f_w,
        images,
    })
}
