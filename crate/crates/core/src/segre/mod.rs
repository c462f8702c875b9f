//! The Segre cubic threefold `s1 = s3 = 0`, discriminants of its projections
//! from smooth points, the Igusa quartic, and a gallery of self-dual hypersurfaces.
//!
//! Everything lives in the chart of the hyperplane `s1 = 0` obtained by
//! eliminating the last coordinate: `x_{n-1} = -(x_0 + ... + x_{n-2})`.

mod gallery;
mod igusa;

pub use gallery::{gallery, goryunov_forms, perazzo, segre_node_orbit, GalleryItem};
pub use igusa::{dual_point, duality_certificate, igusa_quartic, tangent_section, TangentSection};

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{linear_forms, MPoly, ProjPoint, QMat, Scalar, UPoly};
use crate::error::{Error, Result};
use crate::kummer::{node_frame, verify_singular_points};

/// Power sum `x_0^k + ... + x_{n-1}^k`.
pub fn power_sum(n: usize, k: u32) -> MPoly {
    (0..n).fold(MPoly::zero(n), |acc, i| &acc + &MPoly::var(n, i).pow(k))
}

/// Elementary symmetric polynomial of degree `k` in `n` variables.
pub fn elementary(n: usize, k: usize) -> MPoly {
    let mut terms = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == k {
            let e = (0..n).map(|i| mask >> i & 1).collect();
            terms.push((e, Scalar::one()));
        }
    }
    MPoly::from_terms(n, terms).expect("homogeneous by construction")
}

/// The `n` linear forms in `n - 1` chart variables expressing `x` on `s1 = 0`.
pub fn chart_forms(n: usize) -> Vec<MPoly> {
    let m = n - 1;
    let mut forms: Vec<MPoly> = (0..m).map(|i| MPoly::var(m, i)).collect();
    forms.push(MPoly::linear(&vec![-Scalar::one(); m]));
    forms
}

/// Restricts a form in `n` variables to the chart of `s1 = 0`.
pub fn to_chart_poly(p: &MPoly) -> Result<MPoly> {
    p.compose(&chart_forms(p.nvars()))
}

/// Drops the last coordinate of a point with coordinate sum zero.
pub fn to_chart(x: &[Scalar]) -> Result<ProjPoint> {
    let s = x.iter().fold(Scalar::zero(), |a, b| a + b);
    if !s.is_zero() {
        return Err(Error::InvalidParams("point is not on s1 = 0".into()));
    }
    ProjPoint::new(x[..x.len() - 1].to_vec())
}

/// Appends the eliminated coordinate.
pub fn from_chart(y: &[Scalar]) -> Vec<Scalar> {
    let mut x = y.to_vec();
    x.push(-y.iter().fold(Scalar::zero(), |a, b| a + b));
    x
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

/// Perfect matchings of `{0, ..., n-1}`, `n` even, in lexicographic order.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&i, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        for (k, &j) in tail.iter().enumerate() {
            let remaining: Vec<usize> = tail
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != k)
                .map(|(_, &x)| x)
                .collect();
            cur.push((i, j));
            rec(&remaining, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

/// A plane of the cubic: the matching it comes from and two chart forms cutting it out.
#[derive(Clone, Debug)]
pub struct Plane {
    pub matching: Vec<(usize, usize)>,
    pub forms: [MPoly; 2],
}

impl Plane {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.forms.iter().all(|l| l.eval(p.coords()).is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct SegreCubic {
    /// Equation in the 5 chart variables.
    pub f: MPoly,
    pub nodes: Vec<ProjPoint>,
    pub planes: Vec<Plane>,
}

pub fn segre_cubic() -> Result<SegreCubic> {
    let f = to_chart_poly(&power_sum(6, 3))?;
    let nodes = segre_node_orbit(2)?;
    verify_singular_points(&f, &nodes, 4)?;
    let mut planes = Vec::new();
    for matching in perfect_matchings(6) {
        let form = |&(i, j): &(usize, usize)| {
            let mut c = vec![Scalar::zero(); 6];
            c[i] = Scalar::one();
            c[j] = Scalar::one();
            to_chart_poly(&MPoly::linear(&c))
        };
        let forms = [form(&matching[0])?, form(&matching[1])?];
        // The plane lies on the cubic: F vanishes on a parametrization.
        let coeffs: Vec<Vec<Scalar>> = forms
            .iter()
            .map(|l| (0..5).map(|i| l.coeff(&unit(5, i))).collect())
            .collect();
        let basis = QMat::from_rows(coeffs)?.kernel();
        let param = QMat::from_rows(basis)?.transpose();
        if !f.compose(&linear_forms(&param))?.is_zero() {
            return Err(Error::Certificate(format!(
                "plane {matching:?} is not on the cubic"
            )));
        }
        planes.push(Plane { matching, forms });
    }
    Ok(SegreCubic { f, nodes, planes })
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Coefficient vector of a linear form.
fn linear_coeffs(l: &MPoly) -> Vec<Scalar> {
    (0..l.nvars())
        .map(|i| l.coeff(&unit(l.nvars(), i)))
        .collect()
}

/// `F(uP + T w) = L(w) u^2 + 2 Q(w) u + G(w)` with `f = L G - Q^2`.
#[derive(Clone, Debug)]
pub struct ProjectionData {
    pub center: ProjPoint,
    pub frame: QMat,
    pub l: MPoly,
    pub q: MPoly,
    pub g: MPoly,
    pub f: MPoly,
    pub node_images: Vec<ProjPoint>,
}

pub fn project(cubic: &SegreCubic, p: &ProjPoint) -> Result<ProjectionData> {
    let c = p.coords();
    if c.len() != 5 {
        return Err(Error::Dimension(format!(
            "expected a point of P^4, got {} coordinates",
            c.len()
        )));
    }
    if !cubic.f.eval(c).is_zero() {
        return Err(Error::InvalidParams(format!("{p} is not on the cubic")));
    }
    if cubic.f.gradient().iter().all(|d| d.eval(c).is_zero()) {
        return Err(Error::InvalidParams(format!("{p} is a singular point")));
    }
    if let Some(pl) = cubic.planes.iter().find(|pl| pl.contains(p)) {
        return Err(Error::InvalidParams(format!(
            "{p} lies on the plane {:?}; the discriminant would have a singular line",
            pl.matching
        )));
    }
    let frame = node_frame(p);
    let h = cubic.f.substitute_linear(&frame)?;
    if !h.coefficient_of(0, 3).is_zero() {
        return Err(Error::Certificate("u^3 term present".into()));
    }
    let l = h.coefficient_of(0, 2);
    if l.is_zero() {
        return Err(Error::InvalidParams("L vanishes identically".into()));
    }
    let q = h.coefficient_of(0, 1).scale(&Scalar::from_ratio(1, 2));
    let g = h.coefficient_of(0, 0);
    let f = l.checked_mul(&g)?.checked_sub(&q.checked_mul(&q)?)?;

    // L df = LG dL - 2QL dQ + L^2 dG for every partial.
    let lg = &l * &g;
    let ql2 = (&q * &l).scale(&Scalar::from_int(2));
    let l2 = &l * &l;
    for i in 0..4 {
        let lhs = &l * &f.partial(i);
        let rhs = &(&(&lg * &l.partial(i)) - &(&ql2 * &q.partial(i))) + &(&l2 * &g.partial(i));
        if lhs != rhs {
            return Err(Error::Certificate(format!(
                "derivative identity fails for x{i}"
            )));
        }
    }

    let inv = frame.inverse()?;
    let mut node_images = Vec::new();
    for n in &cubic.nodes {
        let w = inv.mul_vec(n.coords());
        node_images.push(
            ProjPoint::new(w[1..].to_vec())
                .map_err(|_| Error::InvalidParams(format!("{p} coincides with the node {n}")))?,
        );
    }
    verify_singular_points(&f, &node_images, 3)?;
    let distinct: BTreeSet<&ProjPoint> = node_images.iter().collect();
    if distinct.len() != node_images.len() {
        return Err(Error::Certificate("two nodes have the same image".into()));
    }
    Ok(ProjectionData {
        center: p.clone(),
        frame,
        l,
        q,
        g,
        f,
        node_images,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SixteenNodeReport {
    /// Shear `(a, b)`: `y0 -> y0 + a y2`, `y1 -> y1 + b y2` before eliminating `y2`.
    pub shear: (i64, i64),
    /// Dehomogenized resultant, constant term first.
    pub resultant: Vec<String>,
    pub squarefree: bool,
    pub base_points: usize,
    pub projected_nodes: usize,
    pub total_nodes: usize,
    pub f_in_ideal: bool,
    pub gradient_in_ideal: bool,
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> UPoly {
    let mut acc = UPoly::new(vec![]);
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let others: Vec<Scalar> = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x.clone())
            .collect();
        let basis = UPoly::from_roots(&others);
        let denom = others.iter().fold(Scalar::one(), |d, xj| d * (xi - xj));
        let term = basis.scale(&(yi * &denom.inv()));
        let len = acc.coeffs().len().max(term.coeffs().len());
        let sum = (0..len)
            .map(|k| {
                let a = acc.coeffs().get(k).cloned().unwrap_or_else(Scalar::zero);
                let b = term.coeffs().get(k).cloned().unwrap_or_else(Scalar::zero);
                a + b
            })
            .collect();
        acc = UPoly::new(sum);
    }
    acc
}

/// Polynomial in the last of three variables after setting `(y0, y1) = (t, 1)`.
fn specialize(p: &MPoly, t: &Scalar) -> UPoly {
    let d = p.degree().unwrap_or(0);
    let pt = [t.clone(), Scalar::one()];
    UPoly::new((0..=d).map(|k| p.coefficient_of(2, k).eval(&pt)).collect())
}

/// Certifies that `L = Q = G = 0` is six distinct points, giving with the ten
/// projected nodes sixteen singular points of `f`.
pub fn sixteen_node_certificate(pd: &ProjectionData) -> Result<SixteenNodeReport> {
    let lc = linear_coeffs(&pd.l);
    let (q3, _) = crate::kummer::restrict_to_plane(&pd.q, &lc)?;
    let (g3, _) = crate::kummer::restrict_to_plane(&pd.g, &lc)?;
    let shears = [
        (0, 0),
        (1, 0),
        (0, 1),
        (1, 1),
        (2, 1),
        (1, 2),
        (3, 1),
        (1, 3),
        (2, 3),
        (3, 2),
    ];
    let mut found = None;
    for &(a, b) in &shears {
        let m = QMat::from_i64(&[&[1, 0, a], &[0, 1, b], &[0, 0, 1]]);
        let qs = q3.substitute_linear(&m)?;
        let gs = g3.substitute_linear(&m)?;
        if qs.coeff(&[0, 0, 2]).is_zero() || gs.coeff(&[0, 0, 3]).is_zero() {
            continue;
        }
        let xs: Vec<Scalar> = (0..=6).map(Scalar::from_int).collect();
        let ys: Vec<Scalar> = xs
            .iter()
            .map(|t| specialize(&qs, t).resultant(&specialize(&gs, t)))
            .collect::<Result<_>>()?;
        let r = interpolate(&xs, &ys);
        if r.degree() == Some(6) && r.is_squarefree()? {
            found = Some(((a, b), r));
            break;
        }
    }
    let ((a, b), r) = found.ok_or_else(|| {
        Error::Certificate(
            "resultant is not a squarefree sextic for any shear; the centre is on the branch locus"
                .into(),
        )
    })?;

    let f_in_ideal = pd.f == &(&pd.l * &pd.g) - &(&pd.q * &pd.q);
    let two = Scalar::from_int(2);
    let gradient_in_ideal = (0..4).all(|i| {
        let rhs = &(&(&pd.g * &pd.l.partial(i)) + &(&pd.l * &pd.g.partial(i)))
            - &(&pd.q * &pd.q.partial(i)).scale(&two);
        pd.f.partial(i) == rhs
    });
    // The ten images are not base points.
    for n in &pd.node_images {
        let c = n.coords();
        if [&pd.l, &pd.q, &pd.g].iter().all(|h| h.eval(c).is_zero()) {
            return Err(Error::Certificate(format!(
                "node image {n} is a base point"
            )));
        }
    }
    Ok(SixteenNodeReport {
        shear: (a, b),
        resultant: r.coeffs().iter().map(ToString::to_string).collect(),
        squarefree: true,
        base_points: 6,
        projected_nodes: pd.node_images.len(),
        total_nodes: 6 + pd.node_images.len(),
        f_in_ideal,
        gradient_in_ideal,
    })
}

/// First admissible integral centre in the box `|x_i| <= bound`, scanning
/// lexicographically; admissible means smooth, off the planes, and passing
/// the sixteen-node certificate.
pub fn search_center(
    cubic: &SegreCubic,
    bound: i64,
) -> Result<(ProjectionData, SixteenNodeReport)> {
    let side = 2 * bound + 1;
    let total = side.pow(5);
    let mut seen = BTreeSet::new();
    for idx in 0..total {
        let mut x = [0i64; 6];
        let mut r = idx;
        for xi in x.iter_mut().take(5).rev() {
            *xi = r % side - bound;
            r /= side;
        }
        x[5] = -x[..5].iter().sum::<i64>();
        if x[5].abs() > bound
            || x.iter().all(|&v| v == 0)
            || x.iter().map(|v| v * v * v).sum::<i64>() != 0
        {
            continue;
        }
        let p = ProjPoint::new(ints(&x[..5]))?;
        if !seen.insert(p.clone()) {
            continue;
        }
        let Ok(pd) = project(cubic, &p) else { continue };
        if let Ok(rep) = sixteen_node_certificate(&pd) {
            return Ok((pd, rep));
        }
    }
    Err(Error::Certificate(format!(
        "no admissible centre with height <= {bound}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matchings() {
        assert_eq!(perfect_matchings(6).len(), 15);
        assert_eq!(perfect_matchings(8).len(), 105);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UPoly::from_i64(&[3, 0, -1, 2]);
        let xs: Vec<Scalar> = (0..4).map(Scalar::from_int).collect();
        let ys: Vec<Scalar> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }

    #[test]
    fn elementary_and_power_sums() {
        let e2 = elementary(3, 2);
        assert_eq!(e2.num_terms(), 3);
        // s2 = e1^2 - 2 e2
        let e1 = elementary(3, 1);
        assert_eq!(
            &(&e1 * &e1) - &e2.scale(&Scalar::from_int(2)),
            power_sum(3, 2)
        );
    }
}
