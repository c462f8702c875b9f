//! Exact scalars: reduced rationals, or residues in a simple extension
//! `Q[t]/(m(t))` with `m` monic irreducible of degree 2..=4.
//!
//! A residue whose non-constant part vanishes is demoted to a rational, so
//! structural equality coincides with equality of field elements.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Monic irreducible modulus `t^d + c_{d-1} t^{d-1} + ... + c_0`, stored low to high.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    coeffs: Vec<Rational>,
}

impl Modulus {
    /// Builds a modulus from low-to-high coefficients, normalizing to monic.
    pub fn new(coeffs: Vec<Rational>) -> Result<Arc<Self>> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let deg = coeffs.len().saturating_sub(1);
        if !(2..=4).contains(&deg) {
            return Err(Error::InvalidModulus(format!("degree {deg} outside 2..=4")));
        }
        let lead = coeffs[deg].clone();
        for c in coeffs.iter_mut() {
            *c = &*c / &lead;
        }
        if !is_irreducible(&coeffs) {
            return Err(Error::InvalidModulus(
                "polynomial is reducible over Q".into(),
            ));
        }
        Ok(Arc::new(Modulus { coeffs }))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

/// Rational-root test plus, in degree 4, a search for integer quadratic factors.
fn is_irreducible(monic: &[Rational]) -> bool {
    let deg = monic.len() - 1;
    // y = D t turns the monic rational polynomial into a monic integer one.
    let mut den = BigInt::one();
    for c in monic {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = (0..=deg)
        .map(|i| {
            let scale = num_traits::pow(den.clone(), deg - i);
            (&monic[i] * Rational::from_integer(scale)).to_integer()
        })
        .collect();
    let c0 = &ints[0];
    if c0.is_zero() {
        return false;
    }
    let divisors = small_divisors(c0);
    let eval = |x: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for c in ints.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for d in &divisors {
        if eval(d).is_zero() || eval(&-d).is_zero() {
            return false;
        }
    }
    if deg < 4 {
        return true;
    }
    // (y^2 + a y + b)(y^2 + c y + e) with b e = c0.
    let (c1, c2, c3) = (&ints[1], &ints[2], &ints[3]);
    for d in &divisors {
        for b in [d.clone(), -d.clone()] {
            let e = c0 / &b;
            if b == e {
                if *c1 != &b * c3 {
                    continue;
                }
                // a + c = c3, a c = c2 - 2b
                let disc = c3 * c3 - BigInt::from(4) * (c2 - BigInt::from(2) * &b);
                if !disc.is_negative() {
                    let r = disc.sqrt();
                    if &r * &r == disc {
                        return false;
                    }
                }
            } else {
                let num = c1 - &b * c3;
                let den = &e - &b;
                if (&num % &den).is_zero() {
                    let a = num / den;
                    let c = c3 - &a;
                    if &b + &e + &a * &c == *c2 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let limit = n
        .to_u64()
        .expect("modulus constant too large for factor search");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= limit {
        if limit.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != limit {
                out.push(BigInt::from(limit / d));
            }
        }
        d += 1;
    }
    out
}

/// A residue class `c_0 + c_1 t + ... ` modulo a [`Modulus`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElem {
    coeffs: Vec<Rational>,
    modulus: Arc<Modulus>,
}

impl ExtElem {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }
}

/// Element of Q or of a simple extension of Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Ext(ExtElem),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(rat(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(ratio(n, d))
    }

    /// The class of `t` in `Q[t]/(m)`.
    pub fn generator(modulus: &Arc<Modulus>) -> Self {
        let mut coeffs = vec![Rational::zero(); modulus.degree()];
        coeffs[1] = Rational::one();
        Scalar::Ext(ExtElem {
            coeffs,
            modulus: modulus.clone(),
        })
    }

    /// Residue with the given low-to-high coefficients (reduced modulo `m`).
    pub fn from_residue(coeffs: Vec<Rational>, modulus: &Arc<Modulus>) -> Self {
        let reduced = poly_rem(&coeffs, modulus.coeffs());
        Self::normalize_ext(reduced, modulus)
    }

    fn normalize_ext(mut coeffs: Vec<Rational>, modulus: &Arc<Modulus>) -> Self {
        coeffs.resize(modulus.degree(), Rational::zero());
        if coeffs[1..].iter().all(|c| c.is_zero()) {
            Scalar::Rat(coeffs.swap_remove(0))
        } else {
            Scalar::Ext(ExtElem {
                coeffs,
                modulus: modulus.clone(),
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Ext(_) => None,
        }
    }

    pub fn modulus(&self) -> Option<&Arc<Modulus>> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Ext(e) => Some(&e.modulus),
        }
    }

    /// Coefficient vector over Q in the power basis of the given extension.
    fn lift(&self, modulus: &Arc<Modulus>) -> Vec<Rational> {
        match self {
            Scalar::Rat(r) => {
                let mut v = vec![Rational::zero(); modulus.degree()];
                v[0] = r.clone();
                v
            }
            Scalar::Ext(e) => {
                assert!(
                    e.modulus == *modulus,
                    "arithmetic across different extensions"
                );
                e.coeffs.clone()
            }
        }
    }

    fn common_modulus<'a>(&'a self, other: &'a Scalar) -> Option<&'a Arc<Modulus>> {
        self.modulus().or(other.modulus())
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "division by zero scalar");
                Scalar::Rat(r.recip())
            }
            Scalar::Ext(e) => {
                let inv = poly_inverse_mod(&e.coeffs, e.modulus.coeffs());
                Self::normalize_ext(inv, &e.modulus)
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of a rational scalar; `None` for extension elements.
    pub fn signum(&self) -> Option<i32> {
        self.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_rational().and_then(|r| r.to_f64())
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rat(Rational::one())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Rat(Rational::from_integer(n))
    }
}

fn add_scalars(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
        _ => {
            let m = a.common_modulus(b).unwrap().clone();
            let (x, y) = (a.lift(&m), b.lift(&m));
            let sum = x.iter().zip(&y).map(|(p, q)| p + q).collect();
            Scalar::normalize_ext(sum, &m)
        }
    }
}

fn mul_scalars(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
        (Scalar::Rat(x), Scalar::Ext(e)) | (Scalar::Ext(e), Scalar::Rat(x)) => {
            if x.is_zero() {
                return Scalar::zero();
            }
            let coeffs = e.coeffs.iter().map(|c| c * x).collect();
            Scalar::normalize_ext(coeffs, &e.modulus)
        }
        (Scalar::Ext(e), Scalar::Ext(f)) => {
            assert!(
                e.modulus == f.modulus,
                "arithmetic across different extensions"
            );
            let prod = poly_mul(&e.coeffs, &f.coeffs);
            Scalar::normalize_ext(poly_rem(&prod, e.modulus.coeffs()), &e.modulus)
        }
    }
}

fn neg_scalar(a: &Scalar) -> Scalar {
    match a {
        Scalar::Rat(x) => Scalar::Rat(-x),
        Scalar::Ext(e) => Scalar::Ext(ExtElem {
            coeffs: e.coeffs.iter().map(|c| -c).collect(),
            modulus: e.modulus.clone(),
        }),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl<'b> $trait<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_scalars);
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| add_scalars(
    a,
    &neg_scalar(b)
));
forward_binop!(Mul, mul, mul_scalars);
forward_binop!(Div, div, |a: &Scalar, b: &Scalar| mul_scalars(a, &b.inv()));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_scalar(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_scalar(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = add_scalars(self, rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = add_scalars(self, &neg_scalar(rhs));
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_scalars(self, rhs);
    }
}

/// Canonical total order: rationals by value, then extension elements by
/// modulus and coefficient vector. Not a field order.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Rat(_), Scalar::Ext(_)) => Ordering::Less,
            (Scalar::Ext(_), Scalar::Rat(_)) => Ordering::Greater,
            (Scalar::Ext(a), Scalar::Ext(b)) => a
                .modulus
                .coeffs
                .cmp(&b.modulus.coeffs)
                .then_with(|| a.coeffs.cmp(&b.coeffs)),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_rat_list(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Ext(e) => write!(
                f,
                "{}@{}",
                fmt_rat_list(&e.coeffs),
                fmt_rat_list(&e.modulus.coeffs)
            ),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    Rational::from_str(s).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

fn parse_rat_list(s: &str) -> Result<Vec<Rational>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [..] list, got {s:?}")))?;
    inner.split(',').map(parse_rational).collect()
}

/// Parses `"p/q"`, `"n"`, or `"[c0,c1,..]@[m0,m1,..]"`.
impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('@') {
            None => parse_rational(s).map(Scalar::Rat),
            Some((c, m)) => {
                let modulus = Modulus::new(parse_rat_list(m)?)?;
                let coeffs = parse_rat_list(c)?;
                Ok(Scalar::from_residue(coeffs, &modulus))
            }
        }
    }
}

// Dense Q[t] helpers, low to high.

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (q, r)
}

fn poly_rem(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    poly_divrem(a, m).1
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Inverse of `a` modulo irreducible `m` by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
    assert!(!r1.is_empty(), "division by zero scalar");
    let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c = r1[0].clone();
    s1.iter().map(|x| x / &c).collect()
}
