//! Finite groups given by generators: projective 4x4 matrices, linear
//! matrices and permutations. Closure, orbits, abelianization, Sylow-2.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;

use serde_json::{json, Value};

use crate::algebra::{json as js, ProjPoint, QMat, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_BOUND: usize = 4096;

pub trait GroupElement: Clone + Ord + Debug {
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn identity_like(&self) -> Self;

    fn power(&self, mut e: u64) -> Self {
        let mut acc = self.identity_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    fn conjugate_by(&self, x: &Self) -> Self {
        x.compose(self).compose(&x.inverse())
    }
}

/// Invertible square matrix up to a nonzero scalar, scaled so the first
/// nonzero entry (row-major) is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PMat(QMat);

impl PMat {
    pub fn new(m: QMat) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Dimension("projective matrix must be square".into()));
        }
        if m.det()?.is_zero() {
            return Err(Error::Singular("projective matrix".into()));
        }
        let n = m.rows();
        let pivot = (0..n * n)
            .map(|k| &m[(k / n, k % n)])
            .find(|x| !x.is_zero())
            .unwrap()
            .inv();
        let mut c = m;
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] = &c[(i, j)] * &pivot;
            }
        }
        Ok(PMat(c))
    }

    pub fn matrix(&self) -> &QMat {
        &self.0
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        p.transform(&self.0)
    }
}

impl GroupElement for PMat {
    fn compose(&self, other: &Self) -> Self {
        PMat::new(&self.0 * &other.0).expect("product of invertible matrices")
    }

    fn inverse(&self) -> Self {
        PMat::new(self.0.inverse().expect("invertible")).unwrap()
    }

    fn identity_like(&self) -> Self {
        PMat(QMat::identity(self.0.rows()))
    }
}

/// Linear action, no scalar identification.
impl GroupElement for QMat {
    fn compose(&self, other: &Self) -> Self {
        self * other
    }

    fn inverse(&self) -> Self {
        QMat::inverse(self).expect("invertible")
    }

    fn identity_like(&self) -> Self {
        QMat::identity(self.rows())
    }
}

/// Permutation of `0..n`; `(p q)(i) = p(q(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u8>);

impl GroupElement for Perm {
    fn compose(&self, other: &Self) -> Self {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    fn identity_like(&self) -> Self {
        Perm((0..self.0.len() as u8).collect())
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup<E: GroupElement> {
    generators: Vec<E>,
    elements: BTreeSet<E>,
}

pub type MatGroup = FiniteGroup<PMat>;
pub type LinGroup = FiniteGroup<QMat>;
pub type PermGroup = FiniteGroup<Perm>;

impl<E: GroupElement> FiniteGroup<E> {
    /// Breadth-first closure of the generators.
    pub fn close(generators: Vec<E>, bound: usize) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Degenerate("empty generator list".into()))?;
        let id = first.identity_like();
        let mut elements = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.compose(g);
                if !elements.contains(&y) {
                    if elements.len() >= bound {
                        return Err(Error::ClosureBound(bound));
                    }
                    elements.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(FiniteGroup {
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &E) -> bool {
        self.elements.contains(x)
    }

    pub fn identity(&self) -> E {
        self.generators[0].identity_like()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Subgroup generated by `gens` (which must lie in `self`).
    pub fn subgroup(&self, mut gens: Vec<E>) -> Self {
        if gens.is_empty() {
            gens.push(self.identity());
        }
        Self::close(gens, self.order()).expect("subgroup closure within parent")
    }

    fn normalizes(&self, x: &E) -> bool {
        self.generators
            .iter()
            .all(|g| self.contains(&g.conjugate_by(x)))
    }

    /// Smallest normal subgroup of `self` containing `seeds`.
    pub fn normal_closure(&self, seeds: Vec<E>) -> Self {
        let mut n = self.subgroup(seeds);
        loop {
            let extra = self
                .generators
                .iter()
                .flat_map(|g| n.generators.iter().map(move |s| s.conjugate_by(g)))
                .find(|c| !n.contains(c));
            match extra {
                Some(c) => {
                    let mut gens = n.generators.clone();
                    gens.push(c);
                    n = self.subgroup(gens);
                }
                None => return n,
            }
        }
    }

    pub fn derived_subgroup(&self) -> Self {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.compose(b).compose(&a.inverse()).compose(&b.inverse());
                comms.push(c);
            }
        }
        self.normal_closure(comms)
    }

    /// Invariant factors `d_1 | d_2 | ...` of the abelianization (empty for a perfect group).
    pub fn abelianization(&self) -> Vec<u64> {
        let d = self.derived_subgroup();
        let index = (self.order() / d.order()) as u64;
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for (p, _) in factorize(index) {
            // count[k] = number of elements of the quotient killed by p^k.
            let mut counts = vec![1u64];
            let mut k = 1;
            loop {
                let e = p.pow(k);
                let killed = self
                    .elements
                    .iter()
                    .filter(|x| d.contains(&x.power(e)))
                    .count() as u64
                    / d.order() as u64;
                counts.push(killed);
                if killed == counts[k as usize - 1] {
                    break;
                }
                k += 1;
            }
            // ranks[k] = number of cyclic factors of order >= p^k.
            let ranks: Vec<u32> = counts.windows(2).map(|w| ilog(w[1] / w[0], p)).collect();
            let mut exps = Vec::new();
            for (k, r) in ranks.iter().enumerate() {
                let next = ranks.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(r - next) {
                    exps.push(p.pow(k as u32 + 1));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(exps);
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| {
                per_prime
                    .iter()
                    .map(|v| v.get(i).copied().unwrap_or(1))
                    .product()
            })
            .collect();
        factors.reverse();
        factors
    }

    /// A Sylow 2-subgroup, grown one normalizing involution-mod-P at a time.
    pub fn sylow2(&self) -> Result<Self> {
        let target = 1usize << self.order().trailing_zeros();
        let mut p = self.subgroup(vec![]);
        while p.order() < target {
            let x = self
                .elements
                .iter()
                .find(|x| !p.contains(x) && p.contains(&x.compose(x)) && p.normalizes(x))
                .cloned()
                .ok_or_else(|| Error::Certificate("Sylow-2 extension not found".into()))?;
            let mut gens: Vec<E> = p
                .generators
                .iter()
                .filter(|g| **g != g.identity_like())
                .cloned()
                .collect();
            gens.push(x);
            p = self.subgroup(gens);
        }
        Ok(p)
    }
}

impl MatGroup {
    /// Orbit of a projective point, sorted.
    pub fn orbit(&self, p: &ProjPoint) -> Result<Vec<ProjPoint>> {
        let pts: BTreeSet<ProjPoint> = self
            .elements
            .iter()
            .map(|g| g.apply(p))
            .collect::<Result<_>>()?;
        Ok(pts.into_iter().collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "generators": self.generators.iter().map(|g| js::matrix(g.matrix())).collect::<Vec<_>>(),
        })
    }
}

impl LinGroup {
    /// Orbit of a vector under the linear action, sorted.
    pub fn vector_orbit(&self, v: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        if v.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroPoint);
        }
        let set: BTreeSet<Vec<Scalar>> = self.elements.iter().map(|g| g.mul_vec(v)).collect();
        Ok(set.into_iter().collect())
    }
}

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

pub fn permutation_matrix(perm: &[usize]) -> QMat {
    let n = perm.len();
    let mut m = QMat::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(j, i)] = Scalar::from_int(1);
    }
    m
}

pub fn sign_diagonal(signs: &[i64]) -> QMat {
    QMat::diagonal(
        &signs
            .iter()
            .map(|&s| Scalar::from_int(s))
            .collect::<Vec<_>>(),
    )
}

fn kummer_generators() -> Vec<QMat> {
    vec![
        permutation_matrix(&[1, 0, 3, 2]),
        permutation_matrix(&[2, 3, 0, 1]),
        sign_diagonal(&[1, 1, -1, -1]),
        sign_diagonal(&[1, -1, 1, -1]),
    ]
}

fn signed_permutation_generators() -> Vec<QMat> {
    vec![
        permutation_matrix(&[1, 0, 2, 3]),
        permutation_matrix(&[1, 2, 3, 0]),
        sign_diagonal(&[-1, 1, 1, 1]),
    ]
}

fn projectivize(gens: Vec<QMat>) -> Vec<PMat> {
    gens.into_iter().map(|m| PMat::new(m).unwrap()).collect()
}

/// The group (Z/2)^4 acting on P^3 by double transpositions and sign changes.
pub fn kummer_group() -> MatGroup {
    MatGroup::close(projectivize(kummer_generators()), DEFAULT_BOUND).unwrap()
}

/// Linear lift of [`kummer_group`] (order 32, contains -I).
pub fn kummer_group_linear() -> LinGroup {
    LinGroup::close(kummer_generators(), DEFAULT_BOUND).unwrap()
}

/// Signed permutation matrices modulo +-I (order 192).
pub fn signed_permutation_group() -> MatGroup {
    MatGroup::close(projectivize(signed_permutation_generators()), DEFAULT_BOUND).unwrap()
}

/// All signed permutation matrices (order 384).
pub fn signed_permutation_group_linear() -> LinGroup {
    LinGroup::close(signed_permutation_generators(), DEFAULT_BOUND).unwrap()
}

/// Permutation matrices of S4.
pub fn symmetric_group_matrices() -> MatGroup {
    MatGroup::close(
        projectivize(vec![
            permutation_matrix(&[1, 0, 2, 3]),
            permutation_matrix(&[1, 2, 3, 0]),
        ]),
        DEFAULT_BOUND,
    )
    .unwrap()
}

fn f4_mul(a: u8, b: u8) -> u8 {
    // Elements 0, 1, w, w^2 = w + 1 encoded as 0, 1, 2, 3; log base w.
    const LOG: [u8; 4] = [0, 0, 1, 2];
    const EXP: [u8; 3] = [1, 2, 3];
    if a == 0 || b == 0 {
        return 0;
    }
    EXP[((LOG[a as usize] + LOG[b as usize]) % 3) as usize]
}

fn affine_perm(m: [[u8; 2]; 2], t: [u8; 2]) -> Perm {
    Perm(
        (0u8..16)
            .map(|idx| {
                let (x, y) = (idx >> 2, idx & 3);
                let nx = f4_mul(m[0][0], x) ^ f4_mul(m[0][1], y) ^ t[0];
                let ny = f4_mul(m[1][0], x) ^ f4_mul(m[1][1], y) ^ t[1];
                (nx << 2) | ny
            })
            .collect(),
    )
}

/// AL(2, F4) = F4^2 semidirect SL(2, F4), as permutations of the 16 points of the affine plane.
pub fn affine_f4_group() -> PermGroup {
    let id = [[1, 0], [0, 1]];
    let gens = vec![
        affine_perm([[1, 1], [0, 1]], [0, 0]),
        affine_perm([[1, 0], [1, 1]], [0, 0]),
        affine_perm([[2, 0], [0, 3]], [0, 0]),
        affine_perm(id, [1, 0]),
        affine_perm(id, [0, 1]),
    ];
    PermGroup::close(gens, DEFAULT_BOUND).unwrap()
}
