//! The rank-17 lattice spanned by the hyperplane class `H` and the 16 nodal
//! classes `E_i`, with the projection involution and the node/trope switch.
//!
//! Node indices are 0-based; classes print as `E1..E16`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{QMat, Scalar};
use crate::error::{Error, Result};

pub const RANK: usize = 17;

/// Gram matrix `diag(4, -2, ..., -2)` in the basis `(H, E_1, ..., E_16)`.
pub fn gram() -> QMat {
    let mut d = vec![Scalar::from_int(-2); RANK];
    d[0] = Scalar::from_int(4);
    QMat::diagonal(&d)
}

/// A rational class in the basis `(H, E_1, ..., E_16)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsVector(pub Vec<Scalar>);

impl NsVector {
    pub fn zero() -> Self {
        NsVector(vec![Scalar::zero(); RANK])
    }

    pub fn h() -> Self {
        Self::basis(0)
    }

    pub fn e(i: usize) -> Self {
        Self::basis(i + 1)
    }

    fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = Scalar::one();
        v
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn pair(&self, other: &NsVector) -> Scalar {
        let mut s = &self.0[0] * &other.0[0] * Scalar::from_int(4);
        for k in 1..RANK {
            s = s - &self.0[k] * &other.0[k] * Scalar::from_int(2);
        }
        s
    }

    pub fn square(&self) -> Scalar {
        self.pair(self)
    }

    pub fn is_integral(&self) -> bool {
        self.0
            .iter()
            .all(|c| c.as_rational().is_some_and(|r| r.is_integer()))
    }

    pub fn add(&self, other: &NsVector) -> NsVector {
        NsVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &NsVector) -> NsVector {
        NsVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Scalar) -> NsVector {
        NsVector(self.0.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for NsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if k == 0 {
                "H".to_string()
            } else {
                format!("E{k}")
            };
            let neg = c.signum() == Some(-1);
            let abs = if neg { -c } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            if abs.is_one() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{abs}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn sum_e(indices: impl IntoIterator<Item = usize>) -> NsVector {
    indices
        .into_iter()
        .fold(NsVector::zero(), |acc, j| acc.add(&NsVector::e(j)))
}

/// A matrix whose columns are the images of the basis classes, checked to
/// preserve the Gram form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry(QMat);

impl Isometry {
    pub fn from_images(images: &[NsVector]) -> Result<Self> {
        if images.len() != RANK {
            return Err(Error::Dimension(format!(
                "expected {RANK} images, got {}",
                images.len()
            )));
        }
        let mut m = QMat::zeros(RANK, RANK);
        for (j, v) in images.iter().enumerate() {
            for i in 0..RANK {
                m[(i, j)] = v.0[i].clone();
            }
        }
        Self::new(m)
    }

    pub fn new(m: QMat) -> Result<Self> {
        let q = gram();
        if m.transpose().checked_mul(&q)?.checked_mul(&m)? != q {
            return Err(Error::Certificate(
                "matrix does not preserve the intersection form".into(),
            ));
        }
        Ok(Isometry(m))
    }

    pub fn matrix(&self) -> &QMat {
        &self.0
    }

    pub fn apply(&self, v: &NsVector) -> NsVector {
        NsVector(self.0.mul_vec(&v.0))
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry(&self.0 * &other.0)
    }

    pub fn is_involution(&self) -> bool {
        &self.0 * &self.0 == QMat::identity(RANK)
    }
}

fn check_node(i: usize) -> Result<()> {
    if i >= 16 {
        return Err(Error::InvalidParams(format!("node index {i} out of range")));
    }
    Ok(())
}

/// Projection from node `i`: `H -> 3H - 4E_i`, `E_i -> 2H - 3E_i`, other `E_j` fixed.
pub fn iota(i: usize) -> Result<Isometry> {
    check_node(i)?;
    let (h, ei) = (NsVector::h(), NsVector::e(i));
    let mut images: Vec<NsVector> = (0..RANK).map(NsVector::basis).collect();
    images[0] = h
        .scale(&Scalar::from_int(3))
        .sub(&ei.scale(&Scalar::from_int(4)));
    images[i + 1] = h
        .scale(&Scalar::from_int(2))
        .sub(&ei.scale(&Scalar::from_int(3)));
    let m = Isometry::from_images(&images)?;
    if !m.is_involution() {
        return Err(Error::Certificate(format!(
            "projection from node {i} is not an involution"
        )));
    }
    Ok(m)
}

fn check_incidence(incidence: &[Vec<u8>]) -> Result<()> {
    if incidence.len() != 16 || incidence.iter().any(|r| r.len() != 16) {
        return Err(Error::Dimension("incidence must be 16x16".into()));
    }
    for (i, r) in incidence.iter().enumerate() {
        let s: u32 = r.iter().map(|&x| x as u32).sum();
        if s != 6 {
            return Err(Error::Certificate(format!(
                "row {i} of the incidence has {s} entries"
            )));
        }
    }
    Ok(())
}

/// `D_i = (H - sum of E_j over the nodes j on trope i) / 2`.
pub fn trope_class(i: usize, incidence: &[Vec<u8>]) -> Result<NsVector> {
    check_node(i)?;
    check_incidence(incidence)?;
    let on: Vec<usize> = (0..16).filter(|&j| incidence[j][i] == 1).collect();
    if on.len() != 6 {
        return Err(Error::Certificate(format!(
            "trope {i} contains {} nodes",
            on.len()
        )));
    }
    let d = NsVector::h()
        .sub(&sum_e(on.iter().copied()))
        .scale(&Scalar::from_ratio(1, 2));
    if d.square() != Scalar::from_int(-2) {
        return Err(Error::Certificate(format!(
            "D{} has square {}",
            i + 1,
            d.square()
        )));
    }
    for j in 0..16 {
        let expected = Scalar::from_int(on.contains(&j) as i64);
        if d.pair(&NsVector::e(j)) != expected {
            return Err(Error::Certificate(format!(
                "D{} . E{} is wrong",
                i + 1,
                j + 1
            )));
        }
    }
    Ok(d)
}

/// Node/trope switch: `H -> 3H - sum E`, `E_i -> D_i`.
pub fn switch_isometry(incidence: &[Vec<u8>]) -> Result<Isometry> {
    let mut images = vec![NsVector::h().scale(&Scalar::from_int(3)).sub(&sum_e(0..16))];
    for i in 0..16 {
        images.push(trope_class(i, incidence)?);
    }
    let m = Isometry::from_images(&images)?;
    if !m.is_involution() {
        return Err(Error::Certificate("switch is not an involution".into()));
    }
    Ok(m)
}

/// Swap of `E_a` and `E_b` fixing `H` and the other nodal classes.
pub fn swap_isometry(a: usize, b: usize) -> Result<Isometry> {
    check_node(a)?;
    check_node(b)?;
    let mut images: Vec<NsVector> = (0..RANK).map(NsVector::basis).collect();
    images.swap(a + 1, b + 1);
    Isometry::from_images(&images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteOrderReport {
    /// Basis of the invariant 3-space, in row/column order of `m`.
    pub basis: Vec<String>,
    pub m: Vec<Vec<String>>,
    /// Characteristic polynomial, constant term first.
    pub charpoly: Vec<String>,
    pub rank_m_minus_identity: usize,
    pub nilpotency_index: Option<u32>,
    /// Smallest k in 1..=checked_powers with M^k = I, if any.
    pub finite_order: Option<u32>,
    pub checked_powers: u32,
    pub unipotent: bool,
    pub infinite_order: bool,
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// `phi = g . iota_a`, where `g` swaps `E_a` and `E_b`, restricted to
/// `span(H, E_a, E_b)`; infinite order follows from unipotence with `M != I`.
pub fn infinite_order_certificate(a: usize, b: usize) -> Result<InfiniteOrderReport> {
    if a == b {
        return Err(Error::InvalidParams("swap needs two distinct nodes".into()));
    }
    let phi = swap_isometry(a, b)?.compose(&iota(a)?);
    let idx = [0, a + 1, b + 1];
    let full = phi.matrix();
    // The span must be invariant: no other coordinates in the images.
    for &j in &idx {
        for i in (0..RANK).filter(|i| !idx.contains(i)) {
            if !full[(i, j)].is_zero() {
                return Err(Error::Certificate(
                    "span(H, E_a, E_b) is not invariant".into(),
                ));
            }
        }
    }
    let mut m = QMat::zeros(3, 3);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(r, c)] = full[(i, j)].clone();
        }
    }
    let id = QMat::identity(3);
    let n = &m - &id;
    let nilpotency_index = (1..=3).find(|&k| n.pow(k).is_zero());
    let charpoly = m.charpoly()?;
    let checked_powers = 100;
    let mut p = QMat::identity(3);
    let mut finite_order = None;
    for k in 1..=checked_powers {
        p = &p * &m;
        if p == id {
            finite_order = Some(k);
            break;
        }
    }
    let unipotent = charpoly == ints(&[-1, 3, -3, 1]);
    Ok(InfiniteOrderReport {
        basis: vec!["H".into(), format!("E{}", a + 1), format!("E{}", b + 1)],
        m: (0..3).map(|r| strings(&m.row(r))).collect(),
        charpoly: strings(&charpoly),
        rank_m_minus_identity: n.rank(),
        nilpotency_index,
        finite_order,
        checked_powers,
        unipotent,
        infinite_order: unipotent && !n.is_zero() && finite_order.is_none(),
    })
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}
