//! Genus-2 theta functions in double precision: characteristics, the
//! second-order basis, half-period shifts, and the numerical Kummer embedding.
//!
//! `e(x) = exp(2 pi i x)`. Index `mu` of the second-order basis runs over
//! `00, 10, 01, 11`, i.e. `mu = mu1 + 2 mu2`.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-12;
/// Largest truncation radius tried before giving up.
const MAX_RADIUS: usize = 1000;

fn e(x: C) -> C {
    (C::i() * 2.0 * PI * x).exp()
}

/// A point of the Siegel upper half-space of degree 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiegelTau {
    m: [[C; 2]; 2],
    lambda_min: f64,
}

impl SiegelTau {
    pub fn new(m: [[C; 2]; 2]) -> Result<Self> {
        if (m[0][1] - m[1][0]).norm() > 1e-14 {
            return Err(Error::Numeric("tau is not symmetric".into()));
        }
        let (a, b, d) = (m[0][0].im, m[0][1].im, m[1][1].im);
        // Cholesky of Im tau.
        if a <= 0.0 || a * d - b * b <= 0.0 {
            return Err(Error::Numeric("Im tau is not positive definite".into()));
        }
        let lambda_min = 0.5 * (a + d - ((a - d).powi(2) + 4.0 * b * b).sqrt());
        Ok(SiegelTau { m, lambda_min })
    }

    /// `tau = re + i im` from real and imaginary parts.
    pub fn from_parts(re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> Result<Self> {
        let c = |i: usize, j: usize| C::new(re[i][j], im[i][j]);
        Self::new([[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]])
    }

    pub fn matrix(&self) -> [[C; 2]; 2] {
        self.m
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn scale(&self, s: f64) -> SiegelTau {
        SiegelTau {
            m: self.m.map(|r| r.map(|x| x * s)),
            lambda_min: self.lambda_min * s,
        }
    }

    fn im(&self) -> [[f64; 2]; 2] {
        self.m.map(|r| r.map(|x| x.im))
    }

    fn quad(&self, n: [C; 2], k: [C; 2]) -> C {
        n[0] * (self.m[0][0] * k[0] + self.m[0][1] * k[1])
            + n[1] * (self.m[1][0] * k[0] + self.m[1][1] * k[1])
    }

    /// `tau * v`.
    pub fn apply(&self, v: [C; 2]) -> [C; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }
}

/// Truncation radius `R` such that
/// `sum over |n - c| > R of 8(2k+2) exp(-pi lambda k^2)`, `k = floor|n - c|`,
/// is below `eps`. Each term of the theta series is at most
/// `exp(pi v Y^-1 v) exp(-pi lambda |n - c|^2)` with `c = -Y^-1 v`, `v = Im w`,
/// so the truncation error is below `eps * exp(pi v Y^-1 v)`.
pub fn truncation_radius(lambda: f64, eps: f64) -> Result<usize> {
    for r in 1..MAX_RADIUS {
        let tail: f64 = (r..r + 200)
            .map(|k| 8.0 * (2.0 * k as f64 + 2.0) * (-PI * lambda * (k * k) as f64).exp())
            .sum();
        if tail < eps {
            return Ok(r);
        }
    }
    Err(Error::Numeric(format!(
        "no truncation radius below {MAX_RADIUS} reaches {eps}"
    )))
}

/// `theta[a,b](w, tau) = sum over p in Z^2 of e(1/2 (p+a)' tau (p+a) + (p+a)'(w+b))`.
pub fn theta_char(a: [f64; 2], b: [f64; 2], w: [C; 2], tau: &SiegelTau, eps: f64) -> Result<C> {
    let y = tau.im();
    let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
    let v = [w[0].im, w[1].im];
    // c = -Y^-1 v, centre of the Gaussian envelope in n = p + a.
    let c = [
        -(y[1][1] * v[0] - y[0][1] * v[1]) / det,
        -(-y[1][0] * v[0] + y[0][0] * v[1]) / det,
    ];
    let r = truncation_radius(tau.lambda_min(), eps)? as f64 + 1.0;
    let wb = [w[0] + b[0], w[1] + b[1]];
    let mut sum = C::new(0.0, 0.0);
    let p0_lo = (c[0] - a[0] - r).floor() as i64;
    let p0_hi = (c[0] - a[0] + r).ceil() as i64;
    for p0 in p0_lo..=p0_hi {
        let n0 = p0 as f64 + a[0];
        let rest = r * r - (n0 - c[0]).powi(2);
        if rest < 0.0 {
            continue;
        }
        let h = rest.sqrt();
        for p1 in (c[1] - a[1] - h).floor() as i64..=(c[1] - a[1] + h).ceil() as i64 {
            let n = [C::new(n0, 0.0), C::new(p1 as f64 + a[1], 0.0)];
            sum += e(0.5 * tau.quad(n, n) + n[0] * wb[0] + n[1] * wb[1]);
        }
    }
    Ok(sum)
}

/// Riemann theta `theta[0,0]`.
pub fn theta(z: [C; 2], tau: &SiegelTau, eps: f64) -> Result<C> {
    theta_char([0.0; 2], [0.0; 2], z, tau, eps)
}

fn mu_bits(mu: usize) -> [u8; 2] {
    [(mu & 1) as u8, (mu >> 1 & 1) as u8]
}

/// `theta_mu(z, tau) = theta[mu/2, 0](2z, 2tau)` for `mu = 00, 10, 01, 11`.
pub fn theta2_basis(z: [C; 2], tau: &SiegelTau, eps: f64) -> Result<[C; 4]> {
    let tau2 = tau.scale(2.0);
    let z2 = [z[0] * 2.0, z[1] * 2.0];
    let mut out = [C::new(0.0, 0.0); 4];
    for (mu, slot) in out.iter_mut().enumerate() {
        let m = mu_bits(mu);
        *slot = theta_char(
            [m[0] as f64 / 2.0, m[1] as f64 / 2.0],
            [0.0; 2],
            z2,
            &tau2,
            eps,
        )?;
    }
    Ok(out)
}

/// `theta_mu(z + eps/2 + tau eps'/2) = factor * theta_index(z)`, with
/// `factor = e(-1/4 eps' tau eps' - eps' z + 1/2 eps mu)` and `index = mu + eps'`.
pub fn halfperiod_action(
    mu: usize,
    eps: [u8; 2],
    eps_p: [u8; 2],
    z: [C; 2],
    tau: &SiegelTau,
) -> (C, usize) {
    let ep = [C::new(eps_p[0] as f64, 0.0), C::new(eps_p[1] as f64, 0.0)];
    let m = mu_bits(mu);
    let phase = -0.25 * tau.quad(ep, ep) - (ep[0] * z[0] + ep[1] * z[1])
        + C::new(0.5 * (eps[0] * m[0] + eps[1] * m[1]) as f64, 0.0);
    let index = mu ^ (eps_p[0] as usize | (eps_p[1] as usize) << 1);
    (e(phase), index)
}

/// `z + eps/2 + tau eps'/2`.
pub fn half_period(eps: [u8; 2], eps_p: [u8; 2], z: [C; 2], tau: &SiegelTau) -> [C; 2] {
    let t = tau.apply([C::new(eps_p[0] as f64, 0.0), C::new(eps_p[1] as f64, 0.0)]);
    [
        z[0] + eps[0] as f64 / 2.0 + t[0] / 2.0,
        z[1] + eps[1] as f64 / 2.0 + t[1] / 2.0,
    ]
}

/// Largest residual of the half-period identity over all `mu`, relative to
/// `max(1, |theta_mu(z + half period)|)`: the shifted point has a larger
/// imaginary part, and the series error scales with the values there.
pub fn halfperiod_residual(
    eps: [u8; 2],
    eps_p: [u8; 2],
    z: [C; 2],
    tau: &SiegelTau,
    tol: f64,
) -> Result<f64> {
    let lhs = theta2_basis(half_period(eps, eps_p, z, tau), tau, tol)?;
    let base = theta2_basis(z, tau, tol)?;
    let scale = lhs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    Ok((0..4)
        .map(|mu| {
            let (f, idx) = halfperiod_action(mu, eps, eps_p, z, tau);
            (lhs[mu] - f * base[idx]).norm() / scale
        })
        .fold(0.0, f64::max))
}

/// `|theta(z+u) theta(z-u) - sum_mu theta_mu(u) theta_mu(z)|`.
pub fn addition_residual(z: [C; 2], u: [C; 2], tau: &SiegelTau, eps: f64) -> Result<f64> {
    let lhs =
        theta([z[0] + u[0], z[1] + u[1]], tau, eps)? * theta([z[0] - u[0], z[1] - u[1]], tau, eps)?;
    let tu = theta2_basis(u, tau, eps)?;
    let tz = theta2_basis(z, tau, eps)?;
    let rhs: C = (0..4).map(|m| tu[m] * tz[m]).sum();
    Ok((lhs - rhs).norm())
}

/// `x + Y y` with `x` in `[0,1)^2` and `y` in `[-1/4, 1/4]^2`.
pub fn sample_point<R: Rng>(rng: &mut R, tau: &SiegelTau) -> [C; 2] {
    let x = [rng.gen::<f64>(), rng.gen::<f64>()];
    let y = [rng.gen_range(-0.25..=0.25), rng.gen_range(-0.25..=0.25)];
    let im = tau.im();
    [
        C::new(x[0], im[0][0] * y[0] + im[0][1] * y[1]),
        C::new(x[1], im[1][0] * y[0] + im[1][1] * y[1]),
    ]
}

/// Largest residuals of the functional identities over random samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub samples: usize,
    /// Addition formula at `(z, u)`.
    pub addition_max: f64,
    /// Half-period shift, cycling through the 16 characteristics.
    pub halfperiod_max: f64,
    /// `theta[a,b](-w) = (-1)^(4 a.b) theta[a,b](w)`, cycling through the 16 characteristics.
    pub parity_max: f64,
}

pub fn identity_residuals(
    tau: &SiegelTau,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<IdentityResiduals> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = IdentityResiduals {
        samples,
        addition_max: 0.0,
        halfperiod_max: 0.0,
        parity_max: 0.0,
    };
    for s in 0..samples {
        let z = sample_point(&mut rng, tau);
        let u = sample_point(&mut rng, tau);
        out.addition_max = out.addition_max.max(addition_residual(z, u, tau, eps)?);

        let k = (s % 16) as u8;
        let (e1, e2) = ([k & 1, k >> 1 & 1], [k >> 2 & 1, k >> 3 & 1]);
        out.halfperiod_max = out
            .halfperiod_max
            .max(halfperiod_residual(e1, e2, z, tau, eps)?);

        let a = [e1[0] as f64 / 2.0, e1[1] as f64 / 2.0];
        let b = [e2[0] as f64 / 2.0, e2[1] as f64 / 2.0];
        let sign = if (e1[0] * e2[0] + e1[1] * e2[1]) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let lhs = theta_char(a, b, [-u[0], -u[1]], tau, eps)?;
        let rhs = sign * theta_char(a, b, u, tau, eps)?;
        out.parity_max = out.parity_max.max((lhs - rhs).norm());
    }
    Ok(out)
}

/// Numeric Hudson quartic at `z` with coefficients `h`.
pub fn hudson_eval(h: &[C; 5], z: &[C; 4]) -> C {
    let sq = z.map(|x| x * x);
    h[0] * sq.iter().map(|s| s * s).sum::<C>()
        + 2.0 * h[1] * (sq[0] * sq[1] + sq[2] * sq[3])
        + 2.0 * h[2] * (sq[0] * sq[2] + sq[1] * sq[3])
        + 2.0 * h[3] * (sq[0] * sq[3] + sq[1] * sq[2])
        + 4.0 * h[4] * z[0] * z[1] * z[2] * z[3]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullSpace {
    pub vector: Vec<[f64; 2]>,
    /// Pivot moduli in elimination order.
    pub pivots: Vec<f64>,
    pub rank: usize,
}

/// One-dimensional null space of a 4x5 system by elimination with complete
/// pivoting; pivots below `rel_tol` times the first are treated as zero.
pub fn null_space_4x5(m: [[C; 5]; 4], rel_tol: f64) -> Result<NullSpace> {
    let mut a = m;
    let mut cols: Vec<usize> = (0..5).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for k in 0..4 {
        let (mut bi, mut bj, mut best) = (k, k, -1.0);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.norm() > best {
                    (bi, bj, best) = (i, j, x.norm());
                }
            }
        }
        if pivots.first().is_some_and(|&p0: &f64| best < rel_tol * p0) || best == 0.0 {
            pivots.push(best);
            break;
        }
        a.swap(k, bi);
        for row in a.iter_mut() {
            row.swap(k, bj);
        }
        cols.swap(k, bj);
        pivots.push(best);
        rank += 1;
        for i in k + 1..4 {
            let f = a[i][k] / a[k][k];
            for j in k..5 {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    if rank != 4 {
        return Err(Error::Degenerate(format!(
            "coefficient system has numerical rank {rank}"
        )));
    }
    // Free variable is the last permuted column.
    let mut x = [C::new(0.0, 0.0); 5];
    x[4] = C::new(1.0, 0.0);
    for k in (0..4).rev() {
        let s: C = (k + 1..5).map(|j| a[k][j] * x[j]).sum();
        x[k] = -s / a[k][k];
    }
    let mut v = [C::new(0.0, 0.0); 5];
    for (k, &c) in cols.iter().enumerate() {
        v[c] = x[k];
    }
    let v = normalize(&v);
    Ok(NullSpace {
        vector: v.iter().map(|c| [c.re, c.im]).collect(),
        pivots,
        rank,
    })
}

/// Divides by the coordinate of largest modulus.
pub fn normalize(v: &[C]) -> Vec<C> {
    let big = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C::new(1.0, 0.0));
    v.iter().map(|x| x / big).collect()
}

/// The coefficient system `B(a)` with `b = a^2`.
pub fn hudson_matrix_numeric(a: &[C; 4]) -> [[C; 5]; 4] {
    let b = a.map(|x| x * x);
    let prod = a[0] * a[1] * a[2] * a[3];
    let rows = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    let mut m = [[C::new(0.0, 0.0); 5]; 4];
    for (r, idx) in rows.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[r][c] = b[r] * b[j];
        }
        m[r][4] = prod;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionDiagnostics {
    /// Smallest relative size of each condition's quantities.
    pub nonvanishing: f64,
    pub products: f64,
    pub square_sums: f64,
    pub failures: Vec<String>,
}

/// Numeric analogues of the validity conditions, relative to `max |a|`.
pub fn condition_diagnostics(a: &[C; 4], tol: f64) -> ConditionDiagnostics {
    let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let s2 = scale * scale;
    let b = a.map(|x| x * x);
    let mut failures = Vec::new();
    let nonvanishing = a
        .iter()
        .map(|x| x.norm() / scale)
        .fold(f64::INFINITY, f64::min);
    let sum_b = b.iter().sum::<C>().norm() / s2;
    let mut products = f64::INFINITY;
    let mut square_sums = f64::INFINITY;
    for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        for sign in [1.0, -1.0] {
            let v = (a[i] * a[j] + sign * a[k] * a[l]).norm() / s2;
            if v < tol {
                failures.push(format!(
                    "II: a{}a{} {} a{}a{} ~ 0",
                    i + 1,
                    j + 1,
                    if sign > 0.0 { "+" } else { "-" },
                    k + 1,
                    l + 1
                ));
            }
            products = products.min(v);
        }
        let v = (b[i] + b[j] - b[k] - b[l]).norm() / s2;
        if v < tol {
            failures.push(format!(
                "III: a{}^2 + a{}^2 ~ a{}^2 + a{}^2",
                i + 1,
                j + 1,
                k + 1,
                l + 1
            ));
        }
        square_sums = square_sums.min(v);
    }
    if a.iter().filter(|x| x.norm() / scale < tol).count() >= 2 {
        failures.insert(0, "I: two coordinates vanish".into());
    }
    if sum_b < tol {
        failures.insert(0, "I: sum of squares vanishes".into());
    }
    ConditionDiagnostics {
        nonvanishing,
        products,
        square_sums,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub tau: [[[f64; 2]; 2]; 2],
    pub epsilon: f64,
    pub thetanull: Vec<[f64; 2]>,
    pub diagnostics: ConditionDiagnostics,
    pub null_space: Option<NullSpace>,
    pub hudson_numeric: Option<Vec<[f64; 2]>>,
    pub samples: usize,
    pub residual_max: Option<f64>,
    pub match_distance_max: Option<f64>,
    pub matched_two_torsion: bool,
    pub certified: bool,
}

/// Thresholds of the numeric pipeline.
pub const CONDITION_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const MATCH_TOL: f64 = 1e-8;

fn to_pairs(v: &[C]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

/// Greedy nearest matching of normalized point sets; returns the largest
/// matched distance, or `None` when a point has no unused partner.
pub fn match_projective(xs: &[Vec<C>], ys: &[Vec<C>]) -> Option<f64> {
    let xs: Vec<Vec<C>> = xs.iter().map(|v| normalize(v)).collect();
    let ys: Vec<Vec<C>> = ys.iter().map(|v| normalize(v)).collect();
    let dist = |a: &[C], b: &[C]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    let mut used = vec![false; ys.len()];
    let mut worst: f64 = 0.0;
    for x in &xs {
        let (j, d) = ys
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, dist(x, y)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// Thetanullwerte, numeric Hudson coefficients, embedding residuals at
/// `samples` random points, and the two-torsion images against the orbit of
/// the thetanull point.
pub fn kummer_from_tau(
    tau: &SiegelTau,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<PipelineReport> {
    let zero = [C::new(0.0, 0.0); 2];
    let p0 = theta2_basis(zero, tau, eps)?;
    let diagnostics = condition_diagnostics(&p0, CONDITION_TOL);
    let mut report = PipelineReport {
        tau: tau.matrix().map(|r| r.map(|c| [c.re, c.im])),
        epsilon: eps,
        thetanull: to_pairs(&p0),
        diagnostics,
        null_space: None,
        hudson_numeric: None,
        samples,
        residual_max: None,
        match_distance_max: None,
        matched_two_torsion: false,
        certified: false,
    };
    if !report.diagnostics.failures.is_empty() {
        return Ok(report);
    }
    let ns = null_space_4x5(hudson_matrix_numeric(&p0), CONDITION_TOL)?;
    let h: [C; 5] = std::array::from_fn(|k| C::new(ns.vector[k][0], ns.vector[k][1]));
    report.hudson_numeric = Some(ns.vector.clone());
    report.null_space = Some(ns);

    let hnorm: f64 = h.iter().map(|c| c.norm()).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z = sample_point(&mut rng, tau);
        let v = theta2_basis(z, tau, eps)?;
        let vn = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        worst = worst.max(hudson_eval(&h, &v).norm() / (hnorm * vn.powi(4)));
    }
    report.residual_max = Some(worst);

    let mut images = Vec::new();
    let mut orbit = Vec::new();
    for k in 0..16u8 {
        let (eps_, eps_p) = ([k & 1, k >> 1 & 1], [k >> 2 & 1, k >> 3 & 1]);
        images.push(theta2_basis(half_period(eps_, eps_p, zero, tau), tau, eps)?.to_vec());
        orbit.push(
            (0..4)
                .map(|mu| {
                    let (f, idx) = halfperiod_action(mu, eps_, eps_p, zero, tau);
                    // Projectively only the sign and the index matter.
                    let sign = f / halfperiod_action(0, eps_, eps_p, zero, tau).0;
                    sign * p0[idx]
                })
                .collect::<Vec<C>>(),
        );
    }
    let distinct = (0..16).all(|i| {
        (i + 1..16)
            .all(|j| match_projective(&orbit[i..=i], &orbit[j..=j]).is_some_and(|d| d > 1e-6))
    });
    let d = match_projective(&images, &orbit);
    report.match_distance_max = d;
    report.matched_two_torsion = distinct && d.is_some_and(|d| d < MATCH_TOL);
    report.certified = worst < RESIDUAL_TOL && report.matched_two_torsion;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_grows_as_tolerance_shrinks() {
        let a = truncation_radius(1.0, 1e-6).unwrap();
        let b = truncation_radius(1.0, 1e-12).unwrap();
        assert!(a <= b);
        assert!(truncation_radius(1e-9, 1e-12).is_err());
    }

    #[test]
    fn rejects_bad_tau() {
        let i = C::i();
        assert!(SiegelTau::new([[i, i * 2.0], [i, i]]).is_err());
        assert!(SiegelTau::new([[i, i * 2.0], [i * 2.0, i]]).is_err());
    }

    #[test]
    fn null_space_of_rank_four() {
        let one = C::new(1.0, 0.0);
        let z = C::new(0.0, 0.0);
        let mut m = [[z; 5]; 4];
        for k in 0..4 {
            m[k][k] = one;
            m[k][4] = -one;
        }
        let ns = null_space_4x5(m, 1e-8).unwrap();
        assert!(ns
            .vector
            .iter()
            .all(|c| (c[0] - 1.0).abs() < 1e-15 && c[1].abs() < 1e-15));
        m[3] = m[2];
        assert!(null_space_4x5(m, 1e-8).is_err());
    }
}
