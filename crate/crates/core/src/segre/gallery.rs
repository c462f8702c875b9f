use num_traits::One;
use serde::Serialize;

use super::{elementary, power_sum, to_chart, to_chart_poly};
use crate::algebra::{rat, ratio, MPoly, Modulus, ProjPoint, Scalar};
use crate::error::Result;
use crate::kummer::{self_duality_certificate, verify_singular_points};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryItem {
    pub name: String,
    pub equation: String,
    pub certificate: String,
    pub passed: bool,
}

/// `x_0 ... x_n + c y_0 ... y_n` in variables `(x_0, ..., x_n, y_0, ..., y_n)`.
pub fn perazzo(n: usize, c: &Scalar) -> MPoly {
    let m = 2 * (n + 1);
    let block = |start: usize| {
        let e: Vec<u32> = (0..m)
            .map(|i| u32::from(i >= start && i < start + n + 1))
            .collect();
        e
    };
    MPoly::from_terms(
        m,
        vec![(block(0), Scalar::one()), (block(n + 1), c.clone())],
    )
    .expect("homogeneous by construction")
}

/// Nodes of the Segre cubic in `P^{2h+2}` cut by `s1 = 0`, as chart points:
/// vectors with `h + 1` entries `1` and `h + 1` entries `-1`, up to sign.
pub fn segre_node_orbit(h: usize) -> Result<Vec<ProjPoint>> {
    let n = 2 * h + 2;
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != h + 1 || mask & 1 == 0 {
            continue;
        }
        let x: Vec<Scalar> = (0..n)
            .map(|i| Scalar::from_int(if mask >> i & 1 == 1 { 1 } else { -1 }))
            .collect();
        out.push(to_chart(&x)?);
    }
    out.sort();
    Ok(out)
}

/// The two displayed forms of the Goryunov cubic `T(m-1)`, `m = 2h + 1`, in
/// variables `(x_0, ..., x_m, z)` restricted to `s1 = 0`:
/// `sigma3 + z sigma2 + h(h+1)(h+2)/12 z^3` and `2 s3 - 3 z s2 + h(h+1)(h+2)/2 z^3`.
pub fn goryunov_forms(h: usize) -> Result<(MPoly, MPoly)> {
    let n = 2 * h + 2;
    let k = (h * (h + 1) * (h + 2)) as i64;
    // Chart in x, then append z as the last variable.
    let lift = |p: &MPoly| -> Result<MPoly> { Ok(to_chart_poly(p)?.insert_var(n - 1)) };
    let zv = MPoly::var(n, n - 1);
    let z3 = zv.pow(3);
    let first = &(&lift(&elementary(n, 3))? + &(&zv * &lift(&elementary(n, 2))?))
        + &z3.scale(&Scalar::from_ratio(k, 12));
    let second = &(&lift(&power_sum(n, 3))?.scale(&Scalar::from_int(2))
        - &(&zv * &lift(&power_sum(n, 2))?).scale(&Scalar::from_int(3)))
        + &z3.scale(&Scalar::from_ratio(k, 2));
    Ok((first, second))
}

fn self_dual_item(name: &str, f: &MPoly) -> Result<GalleryItem> {
    let passed = self_duality_certificate(f)?;
    Ok(GalleryItem {
        name: name.into(),
        equation: f.to_string(),
        certificate: "F(grad F) = 0 mod F".into(),
        passed,
    })
}

fn node_count_item(h: usize) -> Result<GalleryItem> {
    let n = 2 * h + 2;
    let f = to_chart_poly(&power_sum(n, 3))?;
    let nodes = segre_node_orbit(h)?;
    verify_singular_points(&f, &nodes, n - 2)?;
    let m = 2 * h;
    let expected = binomial(m + 1, m / 2);
    Ok(GalleryItem {
        name: format!("Segre cubic in P^{m}"),
        equation: format!("s1 = s3 = 0 in P^{}", m + 1),
        certificate: format!(
            "{} nodes, binomial({}, {}) = {expected}",
            nodes.len(),
            m + 1,
            m / 2
        ),
        passed: nodes.len() == expected,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn gallery() -> Result<Vec<GalleryItem>> {
    let mut items = Vec::new();

    let m = Modulus::new(vec![ratio(1, 27), rat(0), rat(1)])?;
    let lambda = Scalar::generator(&m);
    let xyz = MPoly::from_terms(
        4,
        vec![
            (vec![1, 1, 1, 0], Scalar::one()),
            (vec![0, 0, 0, 3], -lambda),
        ],
    )?;
    items.push(self_dual_item("xyz = l w^3, 27 l^2 = -1", &xyz)?);

    let cayley = elementary(4, 3);
    let coord: Vec<ProjPoint> = (0..4)
        .map(|i| {
            let mut v = [0; 4];
            v[i] = 1;
            ProjPoint::from_i64(&v)
        })
        .collect::<Result<_>>()?;
    let passed = verify_singular_points(&cayley, &coord, 3).is_ok();
    items.push(GalleryItem {
        name: "Cayley cubic".into(),
        equation: cayley.to_string(),
        certificate: "nodes at the 4 coordinate points".into(),
        passed,
    });

    items.push(self_dual_item(
        "Perazzo n = 1",
        &perazzo(1, &-Scalar::one()),
    )?);
    items.push(self_dual_item(
        "Perazzo n = 3",
        &perazzo(3, &-Scalar::one()),
    )?);
    let i = Scalar::generator(&Modulus::new(vec![rat(1), rat(0), rat(1)])?);
    items.push(self_dual_item("Perazzo n = 2, l^2 = -1", &perazzo(2, &i))?);

    items.push(node_count_item(2)?);
    items.push(node_count_item(3)?);

    for h in [1, 2] {
        let (a, b) = goryunov_forms(h)?;
        let ratio = b.proportionality(&a);
        items.push(GalleryItem {
            name: format!("Goryunov T({})", 2 * h),
            equation: a.to_string(),
            certificate: "both displayed forms agree up to the factor 6".into(),
            passed: ratio == Some(Scalar::from_int(6)),
        });
    }
    Ok(items)
}
