use num_traits::One;

use super::KummerSurface;
use crate::algebra::{MPoly, ProjPoint, QMat, Scalar};
use crate::error::{Error, Result};

/// `F(u P + w) = u^2 phi(w) + 2 u psi(w) + f(w)` in a frame whose first column is the node.
#[derive(Clone, Debug)]
pub struct NodeProjection {
    pub frame: QMat,
    pub phi: MPoly,
    pub psi: MPoly,
    pub f: MPoly,
    pub sextic: MPoly,
    /// Images of the six tropes through the node, as linear forms in `w`.
    pub lines: Vec<MPoly>,
    /// `sextic = scale * prod(lines)`.
    pub scale: Scalar,
}

/// Frame with the point as first column, completed by standard basis vectors.
pub fn node_frame(p: &ProjPoint) -> QMat {
    let n = p.len();
    let k = p.coords().iter().position(|x| !x.is_zero()).unwrap();
    let mut t = QMat::zeros(n, n);
    for i in 0..n {
        t[(i, 0)] = p.coords()[i].clone();
    }
    let mut col = 1;
    for j in (0..n).filter(|&j| j != k) {
        t[(j, col)] = Scalar::one();
        col += 1;
    }
    t
}

/// `z1 = u, z2 = u + w2, z3 = u - w3, z4 = w4`, centred at the node (1,1,1,0).
pub fn cefalu_frame() -> QMat {
    QMat::from_i64(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 0, -1, 0], &[0, 0, 0, 1]])
}

pub fn project_from_node(
    s: &KummerSurface,
    node: usize,
    frame: Option<&QMat>,
) -> Result<NodeProjection> {
    let p = s
        .nodes()
        .get(node)
        .ok_or_else(|| Error::InvalidParams(format!("no node {node}")))?;
    let frame = match frame {
        Some(t) => {
            if ProjPoint::new(t.col(0))? != *p {
                return Err(Error::InvalidParams(
                    "frame does not start at the node".into(),
                ));
            }
            t.clone()
        }
        None => node_frame(p),
    };
    let g = s.f.substitute_linear(&frame)?;
    for e in [3, 4] {
        if !g.coefficient_of(0, e).is_zero() {
            return Err(Error::Certificate(format!(
                "u^{e} term present: point is not a node"
            )));
        }
    }
    let half = Scalar::from_ratio(1, 2);
    let phi = g.coefficient_of(0, 2);
    let psi = g.coefficient_of(0, 1).scale(&half);
    let f = g.coefficient_of(0, 0);
    let sextic = psi.checked_mul(&psi)?.checked_sub(&phi.checked_mul(&f)?)?;

    let ft = frame.transpose();
    let mut lines = Vec::new();
    for j in s.config.tropes_through(node) {
        let l = ft.mul_vec(s.tropes()[j].coords());
        debug_assert!(l[0].is_zero());
        lines.push(MPoly::linear(&l[1..]));
    }
    let product = lines
        .iter()
        .fold(MPoly::constant(3, Scalar::one()), |acc, l| &acc * l);
    let scale = sextic.proportionality(&product).ok_or_else(|| {
        Error::Certificate("branch sextic is not the product of the trope lines".into())
    })?;
    Ok(NodeProjection {
        frame,
        phi,
        psi,
        f,
        sextic,
        lines,
        scale,
    })
}
