use serde::Serialize;

use super::{Configuration, KummerSurface};
use crate::algebra::{conic_through, MPoly, ProjPoint, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub hessian_ranks: Vec<usize>,
}

/// Ranks of the Hessian of `f` at each point.
pub fn hessian_ranks(f: &MPoly, points: &[ProjPoint]) -> Vec<usize> {
    points
        .iter()
        .map(|p| f.hessian_at(p.coords()).rank())
        .collect()
}

/// Checks `f(P) = 0`, `grad f(P) = 0` and Hessian rank `rank` at every point.
pub fn verify_singular_points(f: &MPoly, points: &[ProjPoint], rank: usize) -> Result<NodeReport> {
    let grad = f.gradient();
    let mut ranks = Vec::with_capacity(points.len());
    for p in points {
        let c = p.coords();
        if !f.eval(c).is_zero() {
            return Err(Error::Certificate(format!(
                "{p} does not lie on the surface"
            )));
        }
        if let Some(i) = grad.iter().position(|g| !g.eval(c).is_zero()) {
            return Err(Error::Certificate(format!("partial {i} is nonzero at {p}")));
        }
        let r = f.hessian_at(c).rank();
        if r != rank {
            return Err(Error::Certificate(format!(
                "Hessian rank {r} at {p}, expected {rank}"
            )));
        }
        ranks.push(r);
    }
    Ok(NodeReport {
        hessian_ranks: ranks,
    })
}

/// All 16 nodes are ordinary double points of F.
pub fn verify_nodes(s: &KummerSurface) -> Result<NodeReport> {
    verify_singular_points(&s.f, s.nodes(), 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationReport {
    pub row_sums: Vec<usize>,
    pub column_sums: Vec<usize>,
    pub pair_intersections_all_two: bool,
}

pub fn configuration_check(c: &Configuration) -> Result<ConfigurationReport> {
    let n = c.nodes.len();
    let row_sums: Vec<usize> = c
        .incidence
        .iter()
        .map(|r| r.iter().map(|&x| x as usize).sum())
        .collect();
    let column_sums: Vec<usize> = (0..c.tropes.len())
        .map(|j| c.incidence.iter().map(|r| r[j] as usize).sum())
        .collect();
    for j in 0..c.tropes.len() {
        for k in j + 1..c.tropes.len() {
            let common = (0..n)
                .filter(|&i| c.incidence[i][j] == 1 && c.incidence[i][k] == 1)
                .count();
            if common != 2 {
                return Err(Error::Certificate(format!(
                    "tropes {j} and {k} share {common} nodes"
                )));
            }
        }
    }
    if let Some(i) = row_sums.iter().position(|&s| s != 6) {
        return Err(Error::Certificate(format!(
            "node {i} lies on {} tropes",
            row_sums[i]
        )));
    }
    if let Some(j) = column_sums.iter().position(|&s| s != 6) {
        return Err(Error::Certificate(format!(
            "trope {j} contains {} nodes",
            column_sums[j]
        )));
    }
    Ok(ConfigurationReport {
        row_sums,
        column_sums,
        pair_intersections_all_two: true,
    })
}

/// Restricts `f` to the plane `t . z = 0` by solving for the last variable
/// with nonzero coefficient; returns the restriction and that variable.
pub(crate) fn restrict_to_plane(f: &MPoly, t: &[Scalar]) -> Result<(MPoly, usize)> {
    let n = f.nvars();
    let k = t
        .iter()
        .rposition(|x| !x.is_zero())
        .ok_or(Error::ZeroPoint)?;
    let inv = t[k].inv();
    let mut subs = Vec::with_capacity(n);
    let mut m = 0;
    for i in 0..n {
        if i == k {
            let coeffs: Vec<Scalar> = (0..n)
                .filter(|&j| j != k)
                .map(|j| -(&t[j] * &inv))
                .collect();
            subs.push(MPoly::linear(&coeffs));
        } else {
            subs.push(MPoly::var(n - 1, m));
            m += 1;
        }
    }
    Ok((f.compose(&subs)?, k))
}

/// `F` restricted to trope `j` equals `c * C^2` for the conic `C` through its nodes.
pub fn trope_double_conic(s: &KummerSurface, j: usize) -> Result<(MPoly, Scalar)> {
    let trope = s
        .tropes()
        .get(j)
        .ok_or_else(|| Error::InvalidParams(format!("no trope {j}")))?;
    let (restricted, k) = restrict_to_plane(&s.f, trope.coords())?;
    let plane_points: Vec<ProjPoint> = s
        .config
        .nodes_on(j)
        .iter()
        .map(|&i| {
            let mut c = s.nodes()[i].coords().to_vec();
            c.remove(k);
            ProjPoint::new(c)
        })
        .collect::<Result<_>>()?;
    if plane_points.len() != 6 {
        return Err(Error::Certificate(format!(
            "trope {j} contains {} nodes",
            plane_points.len()
        )));
    }
    let conic = conic_through(&plane_points[..5])?;
    if !conic.eval(plane_points[5].coords()).is_zero() {
        return Err(Error::Certificate(format!(
            "sixth node of trope {j} is off the conic"
        )));
    }
    let c = restricted
        .proportionality(&conic.pow(2))
        .ok_or_else(|| Error::Certificate(format!("trope {j} section is not a double conic")))?;
    Ok((conic, c))
}

/// Normal form of `F(grad F)` modulo `F`.
pub fn self_dual_remainder(f: &MPoly) -> Result<MPoly> {
    let g = f.compose(&f.gradient())?;
    g.reduce_by(f)
}

/// Whether `F(grad F)` is divisible by `F`, i.e. the Gauss image of the
/// hypersurface lies on the hypersurface itself. Irreducibility of `F` is
/// assumed, not tested.
pub fn self_duality_certificate(f: &MPoly) -> Result<bool> {
    Ok(self_dual_remainder(f)?.is_zero())
}
