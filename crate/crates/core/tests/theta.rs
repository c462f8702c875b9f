use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kummer_core::theta::*;

const EPS: f64 = DEFAULT_EPSILON;
const TOL: f64 = 50.0 * EPS;

fn tau_a() -> SiegelTau {
    SiegelTau::from_parts([[0.0; 2]; 2], [[2.0, 1.0], [1.0, 2.0]]).unwrap()
}

fn tau_b() -> SiegelTau {
    SiegelTau::from_parts([[0.3, 0.2], [0.2, -0.1]], [[1.1, 0.4], [0.4, 1.3]]).unwrap()
}

fn product_tau() -> SiegelTau {
    SiegelTau::from_parts([[0.0; 2]; 2], [[1.0, 0.0], [0.0, 1.0]]).unwrap()
}

/// Genus-1 theta with characteristic, summed directly.
fn theta1(a: f64, w: C, tau: C) -> C {
    (-60..=60)
        .map(|p| {
            let n = p as f64 + a;
            (C::i() * 2.0 * std::f64::consts::PI * (0.5 * n * n * tau + n * w)).exp()
        })
        .sum()
}

#[test]
fn diagonal_tau_factors() {
    let tau = SiegelTau::from_parts([[0.1, 0.0], [0.0, -0.2]], [[0.9, 0.0], [0.0, 1.4]]).unwrap();
    let m = tau.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for a in [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5], [0.5, 0.5]] {
        let w = sample_point(&mut rng, &tau);
        let two = theta_char(a, [0.0; 2], w, &tau, EPS).unwrap();
        let one = theta1(a[0], w[0], m[0][0]) * theta1(a[1], w[1], m[1][1]);
        assert!((two - one).norm() < TOL, "{two} vs {one}");
    }
}

#[test]
fn parity_of_characteristics() {
    let tau = tau_b();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let halves: [[f64; 2]; 4] = [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5], [0.5, 0.5]];
    for a in halves {
        for b in halves {
            let w = sample_point(&mut rng, &tau);
            let minus = [-w[0], -w[1]];
            let sign = if (4.0 * (a[0] * b[0] + a[1] * b[1])).round() as i64 % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let lhs = theta_char(a, b, minus, &tau, EPS).unwrap();
            let rhs = sign * theta_char(a, b, w, &tau, EPS).unwrap();
            assert!((lhs - rhs).norm() < TOL);
        }
    }
}

#[test]
fn doubling_against_direct_sum() {
    // theta_mu(z) = sum over p of e((p+a)' tau (p+a) + 2 (p+a)' z), a = mu/2.
    let tau = tau_b();
    let m = tau.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = sample_point(&mut rng, &tau);
    let basis = theta2_basis(z, &tau, EPS).unwrap();
    for (mu, value) in basis.iter().enumerate() {
        let a = [(mu & 1) as f64 / 2.0, (mu >> 1) as f64 / 2.0];
        let mut s = C::new(0.0, 0.0);
        for p in -25i32..=25 {
            for q in -25i32..=25 {
                let n = [p as f64 + a[0], q as f64 + a[1]];
                let quad =
                    m[0][0] * n[0] * n[0] + 2.0 * m[0][1] * n[0] * n[1] + m[1][1] * n[1] * n[1];
                s += (C::i()
                    * 2.0
                    * std::f64::consts::PI
                    * (quad + 2.0 * (n[0] * z[0] + n[1] * z[1])))
                    .exp();
            }
        }
        assert!((s - value).norm() < TOL);
    }
}

#[test]
fn second_order_thetas_are_even() {
    for tau in [tau_a(), tau_b()] {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let z = sample_point(&mut rng, &tau);
            let a = theta2_basis(z, &tau, EPS).unwrap();
            let b = theta2_basis([-z[0], -z[1]], &tau, EPS).unwrap();
            assert!((0..4).all(|k| (a[k] - b[k]).norm() < TOL));
        }
    }
}

#[test]
fn addition_formula() {
    for tau in [tau_a(), tau_b()] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let z = sample_point(&mut rng, &tau);
            let u = sample_point(&mut rng, &tau);
            assert!(addition_residual(z, u, &tau, EPS).unwrap() < TOL);
        }
    }
}

#[test]
fn halfperiod_shifts() {
    let tau = tau_b();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let z = sample_point(&mut rng, &tau);
    let (f, idx) = halfperiod_action(2, [0, 0], [0, 0], z, &tau);
    assert_eq!((f, idx), (C::new(1.0, 0.0), 2));
    for k in 0..16u8 {
        let (e, ep) = ([k & 1, k >> 1 & 1], [k >> 2 & 1, k >> 3 & 1]);
        for _ in 0..5 {
            let z = sample_point(&mut rng, &tau);
            assert!(
                halfperiod_residual(e, ep, z, &tau, EPS).unwrap() < TOL,
                "{e:?} {ep:?}"
            );
        }
    }
    // The eps shift alone is a sign.
    for mu in 0..4 {
        let (f, idx) = halfperiod_action(mu, [1, 1], [0, 0], z, &tau);
        assert_eq!(idx, mu);
        assert!((f.norm() - 1.0).abs() < 1e-15 && f.im.abs() < 1e-15);
    }
}

#[test]
fn pipeline_certifies_indecomposable_tau() {
    for tau in [tau_a(), tau_b()] {
        let r = kummer_from_tau(&tau, EPS, 100, 7).unwrap();
        assert!(r.diagnostics.failures.is_empty());
        assert!(r.residual_max.unwrap() < 1e-8, "{:?}", r.residual_max);
        assert!(r.matched_two_torsion, "{:?}", r.match_distance_max);
        assert!(r.certified);
    }
}

#[test]
fn thetanull_is_theta2_at_zero() {
    let tau = tau_a();
    let r = kummer_from_tau(&tau, EPS, 1, 0).unwrap();
    let t = theta2_basis([C::new(0.0, 0.0); 2], &tau, EPS).unwrap();
    for k in 0..4 {
        assert_eq!(r.thetanull[k], [t[k].re, t[k].im]);
    }
}

#[test]
fn product_tau_gives_diagnostic() {
    let r = kummer_from_tau(&product_tau(), EPS, 10, 0).unwrap();
    assert!(!r.certified);
    assert!(r.hudson_numeric.is_none());
    assert!(
        r.diagnostics.failures.iter().any(|f| f.starts_with("II")),
        "{:?}",
        r.diagnostics
    );
}

#[test]
fn perturbed_coefficients_leave_the_surface() {
    let tau = tau_b();
    let r = kummer_from_tau(&tau, EPS, 1, 0).unwrap();
    let mut h: [C; 5] = std::array::from_fn(|k| {
        let v = r.hudson_numeric.as_ref().unwrap()[k];
        C::new(v[0], v[1])
    });
    h[0] += 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let v = theta2_basis(sample_point(&mut rng, &tau), &tau, EPS).unwrap();
    assert!(hudson_eval(&h, &v).norm() > 1e-8);
}

#[test]
fn identity_residuals_for_three_fixtures() {
    let diag = SiegelTau::from_parts([[0.1, 0.0], [0.0, -0.2]], [[0.9, 0.0], [0.0, 1.4]]).unwrap();
    for tau in [tau_a(), tau_b(), diag] {
        let r = identity_residuals(&tau, EPS, 32, 9).unwrap();
        assert_eq!(r.samples, 32);
        assert!(
            r.addition_max < TOL && r.halfperiod_max < TOL && r.parity_max < TOL,
            "{r:?}"
        );
    }
}
