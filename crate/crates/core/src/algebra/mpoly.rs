//! Sparse homogeneous multivariate polynomials over [`Scalar`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::matrix::QMat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with variable 0 largest).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneous polynomial in `nvars` variables. The zero polynomial has no degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, i), Scalar::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { nvars, terms }
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = MPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    /// Collects terms, merging duplicates; fails if the result is not homogeneous.
    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, Scalar)>) -> Result<Self> {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VarMismatch(e.len(), nvars));
            }
            p.add_term(Monomial(e), c);
        }
        if !p.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn check_compatible(&self, other: &MPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a != b {
                return Err(Error::DegreeMismatch(a, b));
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, Scalar::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            out.add_term(Monomial(exp), c * Scalar::from_int(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn hessian_at(&self, point: &[Scalar]) -> QMat {
        let grad = self.gradient();
        let n = self.nvars;
        let mut h = QMat::zeros(n, n);
        for (i, gi) in grad.iter().enumerate() {
            for j in 0..n {
                h[(i, j)] = gi.partial(j).eval(point);
            }
        }
        h
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong length");
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Composition `p(q_0, ..., q_{n-1})`; all `q_i` share one variable count and degree.
    pub fn compose(&self, subs: &[MPoly]) -> Result<MPoly> {
        if subs.len() != self.nvars {
            return Err(Error::VarMismatch(subs.len(), self.nvars));
        }
        let target = subs.first().map(MPoly::nvars).unwrap_or(0);
        for s in subs {
            if s.nvars != target {
                return Err(Error::VarMismatch(s.nvars, target));
            }
        }
        let subs_deg: Vec<Option<u32>> = subs.iter().map(MPoly::degree).collect();
        let known: Vec<u32> = subs_deg.iter().flatten().copied().collect();
        if known.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::NotHomogeneous);
        }
        // Powers are cached per variable.
        let mut cache: Vec<Vec<MPoly>> = subs
            .iter()
            .map(|s| vec![MPoly::constant(target, Scalar::one()), s.clone()])
            .collect();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Linear change of coordinates `x = M y`, i.e. `p(M y)`. `M` must be invertible.
    pub fn substitute_linear(&self, m: &QMat) -> Result<MPoly> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(Error::Dimension(format!(
                "substitution matrix {}x{} for {} variables",
                m.rows(),
                m.cols(),
                self.nvars
            )));
        }
        if m.rank() != self.nvars {
            return Err(Error::Singular("substitution matrix".into()));
        }
        self.compose(&linear_forms(m))
    }

    /// Coefficient of `x_var^power`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: usize, power: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            if m.0[var] == power {
                let mut e = m.0.clone();
                e.remove(var);
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Embeds into a ring with `nvars + 1` variables by inserting a fresh variable at `pos`.
    pub fn insert_var(&self, pos: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(pos, 0);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// `Some(c)` when `self = c * other` for a nonzero scalar `c`.
    pub fn proportionality(&self, other: &MPoly) -> Option<Scalar> {
        if self.nvars != other.nvars {
            return None;
        }
        if other.is_zero() {
            return None;
        }
        let (m, c) = other.leading_term().unwrap();
        let ratio = self.coeff(&m.0) / c;
        if ratio.is_zero() {
            return None;
        }
        if *self == other.scale(&ratio) {
            Some(ratio)
        } else {
            None
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Normal form of `self` modulo the principal ideal `(f)` under graded lex.
    ///
    /// The result is zero iff `f` divides `self`.
    pub fn reduce_by(&self, f: &MPoly) -> Result<MPoly> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.nvars != f.nvars {
            return Err(Error::VarMismatch(self.nvars, f.nvars));
        }
        // Work with a monic divisor so each step needs no inversion.
        let f = f.monic();
        let (lm, _) = f.leading_term().unwrap();
        let lm = lm.clone();
        let tail: Vec<(Monomial, Scalar)> = f
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut g = self.terms.clone();
        let mut remainder = MPoly::zero(self.nvars);
        while let Some((m, c)) = g.pop_last() {
            if lm.divides(&m) {
                let q = lm.quotient_of(&m);
                for (tm, tc) in &tail {
                    let key = tm.mul(&q);
                    let delta = -(tc * &c);
                    match g.get_mut(&key) {
                        Some(v) => {
                            *v += &delta;
                            if v.is_zero() {
                                g.remove(&key);
                            }
                        }
                        None => {
                            g.insert(key, delta);
                        }
                    }
                }
            } else {
                remainder.terms.insert(m, c);
            }
        }
        Ok(remainder)
    }
}

/// Rows of `M` as linear forms: entry `i` is `sum_j M[i][j] y_j`.
pub fn linear_forms(m: &QMat) -> Vec<MPoly> {
    (0..m.rows()).map(|i| MPoly::linear(&m.row(i))).collect()
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.checked_add(rhs)
            .expect("incompatible polynomials in add")
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.checked_sub(rhs)
            .expect("incompatible polynomials in sub")
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.checked_mul(rhs)
            .expect("incompatible polynomials in mul")
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
