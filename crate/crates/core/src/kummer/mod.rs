//! Kummer quartics in Hudson normal form: parameters, nodes, tropes and
//! coefficients, plus the per-surface certificates.

mod cefalu;
mod certs;
mod cremona;
mod projection;
mod segre_type;

pub use cefalu::{cefalu_crossratio_certificate, cefalu_quartic, CrossRatioReport};
pub(crate) use certs::restrict_to_plane;
pub use certs::{
    configuration_check, hessian_ranks, self_dual_remainder, self_duality_certificate,
    trope_double_conic, verify_nodes, verify_singular_points, ConfigurationReport, NodeReport,
};
pub use cremona::{cremona_test, face_forms, CremonaImage, CremonaReport};
pub use projection::{cefalu_frame, node_frame, project_from_node, NodeProjection};
pub use segre_type::{gauss_fixedpoint_certificate, segre_type_surface, GaussReport, SegreType};

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{json as js, MPoly, ProjPoint, QMat, Scalar};
use crate::error::{Error, Result};
use crate::groups::kummer_group;

/// A parameter point `a` of P^3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    a: [Scalar; 4],
}

impl Params {
    pub fn new(a: Vec<Scalar>) -> Result<Self> {
        let a: [Scalar; 4] = a.try_into().map_err(|v: Vec<Scalar>| {
            Error::InvalidParams(format!("expected 4 coordinates, got {}", v.len()))
        })?;
        if a.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroPoint);
        }
        Ok(Params { a })
    }

    pub fn from_i64(a: [i64; 4]) -> Result<Self> {
        Self::new(a.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn parse(args: &[String]) -> Result<Self> {
        Self::new(args.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[Scalar; 4] {
        &self.a
    }

    pub fn squares(&self) -> [Scalar; 4] {
        self.a.clone().map(|x| &x * &x)
    }

    pub fn product(&self) -> Scalar {
        &(&self.a[0] * &self.a[1]) * &(&self.a[2] * &self.a[3])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub failures: Vec<Failure>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_params(p: &Params) -> ValidityReport {
    let a = p.coords();
    let b = p.squares();
    let mut failures = Vec::new();
    let mut fail = |condition, detail: String| failures.push(Failure { condition, detail });

    let zeros = a.iter().filter(|x| x.is_zero()).count();
    if zeros >= 2 {
        fail("I", format!("{zeros} coordinates vanish"));
    }
    let sum: Scalar = b.iter().fold(Scalar::zero(), |acc, x| acc + x);
    if sum.is_zero() {
        fail("I", "sum of squares vanishes".into());
    }
    for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let p1 = &a[i] * &a[j];
        let p2 = &a[k] * &a[l];
        for (sign, v) in [("+", &p1 + &p2), ("-", &p1 - &p2)] {
            if v.is_zero() {
                fail(
                    "II",
                    format!("a{}a{} {sign} a{}a{} = 0", i + 1, j + 1, k + 1, l + 1),
                );
            }
        }
        if (&b[i] + &b[j]) == (&b[k] + &b[l]) {
            fail(
                "III",
                format!("a{}^2 + a{}^2 = a{}^2 + a{}^2", i + 1, j + 1, k + 1, l + 1),
            );
        }
    }
    ValidityReport { failures }
}

/// Random valid integer parameters with entries in `-range..=range`.
pub fn random_valid_params<R: Rng>(rng: &mut R, range: i64) -> Params {
    loop {
        let a = [0; 4].map(|_: i64| rng.gen_range(-range..=range));
        if let Ok(p) = Params::from_i64(a) {
            if validate_params(&p).is_valid() {
                return p;
            }
        }
    }
}

/// The b = 0 coefficients for a1 = 0, in terms of b2, b3, b4.
pub fn hudson_from_squares(b2: &Scalar, b3: &Scalar, b4: &Scalar) -> [Scalar; 5] {
    let (s2, s3, s4) = (b2 * b2, b3 * b3, b4 * b4);
    [
        Scalar::from_int(2) * b2 * b3 * b4,
        b2 * &(&s2 - &s3 - &s4),
        b3 * &(&s3 - &s4 - &s2),
        b4 * &(&s4 - &s2 - &s3),
        Scalar::zero(),
    ]
}

/// The 4x5 linear system whose kernel gives the coefficients when b != 0.
pub fn hudson_matrix(p: &Params) -> QMat {
    let b = p.squares();
    let prod = p.product();
    let rows = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    let mut m = QMat::zeros(4, 5);
    for (r, idx) in rows.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(r, c)] = &b[r] * &b[j];
        }
        m[(r, 4)] = prod.clone();
    }
    m
}

/// Scales a coefficient vector to canonical form (primitive integers when rational).
pub fn normalize_coefficients(v: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(ProjPoint::new(v.to_vec())?.coords().to_vec())
}

/// Hudson coefficients `(a0, a01, a10, a11, beta)` in canonical scale.
pub fn hudson_coefficients(p: &Params) -> Result<[Scalar; 5]> {
    let a = p.coords();
    let raw: [Scalar; 5] = match a.iter().position(Scalar::is_zero) {
        None => {
            let ker = hudson_matrix(p).kernel();
            if ker.len() != 1 {
                return Err(Error::Degenerate(format!(
                    "coefficient system has {}-dimensional kernel",
                    ker.len()
                )));
            }
            ker.into_iter().next().unwrap().try_into().unwrap()
        }
        Some(k) => {
            let b = p.squares();
            let mut perm = [0, 1, 2, 3];
            perm.swap(0, k);
            let mut h = hudson_from_squares(&b[perm[1]], &b[perm[2]], &b[perm[3]]);
            // Moving the zero back from slot 1 to slot k permutes the pairings.
            match k {
                1 => h.swap(2, 3),
                2 => h.swap(1, 3),
                3 => h.swap(1, 2),
                _ => {}
            }
            h
        }
    };
    let n = normalize_coefficients(&raw)?;
    Ok(n.try_into().unwrap())
}

/// The quartic with the given Hudson coefficients.
pub fn hudson_form(h: &[Scalar; 5]) -> MPoly {
    let mut terms: Vec<(Vec<u32>, Scalar)> = Vec::new();
    for i in 0..4 {
        let mut e = vec![0; 4];
        e[i] = 4;
        terms.push((e, h[0].clone()));
    }
    let two = Scalar::from_int(2);
    for (c, pairs) in [
        (&h[1], [(0, 1), (2, 3)]),
        (&h[2], [(0, 2), (1, 3)]),
        (&h[3], [(0, 3), (1, 2)]),
    ] {
        for (i, j) in pairs {
            let mut e = vec![0; 4];
            e[i] = 2;
            e[j] = 2;
            terms.push((e, &two * c));
        }
    }
    terms.push((vec![1, 1, 1, 1], Scalar::from_int(4) * &h[4]));
    MPoly::from_terms(4, terms).expect("homogeneous quartic")
}

/// Points, planes and their incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub nodes: Vec<ProjPoint>,
    pub tropes: Vec<ProjPoint>,
    pub incidence: Vec<Vec<u8>>,
}

impl Configuration {
    /// The orbit of `a` and the planes orthogonal to it; no validity check.
    pub fn from_point(p: &Params) -> Result<Self> {
        let a = ProjPoint::new(p.coords().to_vec())?;
        let nodes = kummer_group().orbit(&a)?;
        if nodes.len() != 16 {
            return Err(Error::Degenerate(format!(
                "orbit has {} points",
                nodes.len()
            )));
        }
        let tropes = nodes.clone();
        let incidence = nodes
            .iter()
            .map(|n| {
                tropes
                    .iter()
                    .map(|t| u8::from(n.dot(t).is_zero()))
                    .collect()
            })
            .collect();
        Ok(Configuration {
            nodes,
            tropes,
            incidence,
        })
    }

    /// Indices of nodes on trope `j`.
    pub fn nodes_on(&self, j: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.incidence[i][j] == 1)
            .collect()
    }

    /// Indices of tropes through node `i`.
    pub fn tropes_through(&self, i: usize) -> Vec<usize> {
        (0..self.tropes.len())
            .filter(|&j| self.incidence[i][j] == 1)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerSurface {
    pub params: Params,
    pub b: [Scalar; 4],
    pub b_prod: Scalar,
    pub hudson: [Scalar; 5],
    pub f: MPoly,
    pub config: Configuration,
}

impl KummerSurface {
    pub fn nodes(&self) -> &[ProjPoint] {
        &self.config.nodes
    }

    pub fn tropes(&self) -> &[ProjPoint] {
        &self.config.tropes
    }

    pub fn incidence(&self) -> &[Vec<u8>] {
        &self.config.incidence
    }

    pub fn to_json(&self, certificates: Value) -> Value {
        json!({
            "params": js::scalars(self.params.coords()),
            "b": js::scalars(&self.b),
            "b_prod": js::scalar(&self.b_prod),
            "hudson": js::scalars(&self.hudson),
            "F": js::mpoly(&self.f),
            "nodes": self.nodes().iter().map(js::point).collect::<Vec<_>>(),
            "tropes": self.tropes().iter().map(js::point).collect::<Vec<_>>(),
            "incidence": self.incidence(),
            "certificates": certificates,
        })
    }
}

/// Builds the Kummer quartic with nodes the orbit of `a`.
pub fn build_surface(p: &Params) -> Result<KummerSurface> {
    let report = validate_params(p);
    if !report.is_valid() {
        let msg: Vec<String> = report
            .failures
            .iter()
            .map(|f| format!("({}) {}", f.condition, f.detail))
            .collect();
        return Err(Error::InvalidParams(msg.join("; ")));
    }
    let hudson = hudson_coefficients(p)?;
    let f = hudson_form(&hudson);
    Ok(KummerSurface {
        params: p.clone(),
        b: p.squares(),
        b_prod: p.product(),
        hudson,
        f,
        config: Configuration::from_point(p)?,
    })
}

pub(crate) fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}
