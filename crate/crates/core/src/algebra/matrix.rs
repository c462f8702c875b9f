//! Dense exact matrices. Rank, determinant and kernel use fraction-free
//! (Bareiss) elimination.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Row-echelon form produced by Bareiss elimination.
struct Echelon {
    mat: QMat,
    pivots: Vec<usize>,
    swaps: usize,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn checked_mul(&self, other: &QMat) -> Result<QMat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        out[(i, j)] += &p;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> QMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = QMat::identity(self.rows);
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    fn echelon(&self) -> Echelon {
        let mut a = self.clone();
        let (m, n) = (self.rows, self.cols);
        let mut prev = Scalar::one();
        let mut r = 0;
        let mut pivots = Vec::new();
        let mut swaps = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..n {
                    a.data.swap(p * n + j, r * n + j);
                }
                swaps += 1;
            }
            let pivot = a[(r, c)].clone();
            for i in r + 1..m {
                let lead = a[(i, c)].clone();
                for j in c + 1..n {
                    let v = (&pivot * &a[(i, j)] - &lead * &a[(r, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, c)] = Scalar::zero();
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        Echelon {
            mat: a,
            pivots,
            swaps,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let e = self.echelon();
        if e.pivots.len() < n {
            return Ok(Scalar::zero());
        }
        let d = e.mat[(n - 1, n - 1)].clone();
        Ok(if e.swaps % 2 == 1 { -d } else { d })
    }

    /// Basis of the right null space, one vector per free column, by back-substitution.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let e = self.echelon();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); n];
                v[f] = Scalar::one();
                for (row, &pc) in e.pivots.iter().enumerate().rev() {
                    let mut acc = Scalar::zero();
                    for j in pc + 1..n {
                        if !v[j].is_zero() && !e.mat[(row, j)].is_zero() {
                            acc += &(&e.mat[(row, j)] * &v[j]);
                        }
                    }
                    v[pc] = -acc / &e.mat[(row, pc)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<QMat> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[(i, c)].is_zero())
                .ok_or_else(|| Error::Singular("matrix inverse".into()))?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let scale = a[(c, c)].inv();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &scale;
                inv[(c, j)] = &inv[(c, j)] * &scale;
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..n {
                    let da = &f * &a[(c, j)];
                    let di = &f * &inv[(c, j)];
                    a[(i, j)] -= &da;
                    inv[(i, j)] -= &di;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self x = b`; `None` if inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let e = aug.echelon();
        if e.pivots.contains(&self.cols) {
            return None;
        }
        let n = self.cols;
        let mut x = vec![Scalar::zero(); n];
        for (row, &pc) in e.pivots.iter().enumerate().rev() {
            let mut acc = e.mat[(row, n)].clone();
            for j in pc + 1..n {
                if !x[j].is_zero() {
                    acc -= &(&e.mat[(row, j)] * &x[j]);
                }
            }
            x[pc] = acc / &e.mat[(row, pc)];
        }
        Some(x)
    }

    /// Characteristic polynomial `det(t I - A)`, coefficients low to high
    /// (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Result<Vec<Scalar>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("charpoly of non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut mk = QMat::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &mk;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            mk = next;
            let tr = (self * &mk).trace();
            coeffs[n - k] = -tr / Scalar::from_int(k as i64);
        }
        Ok(coeffs)
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl Sub for &QMat {
    type Output = QMat;
    fn sub(self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Display for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
