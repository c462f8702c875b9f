use kummer_core::algebra::{MPoly, ProjPoint, Scalar};
use kummer_core::kummer::*;
use kummer_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn surface(a: [i64; 4]) -> KummerSurface {
    build_surface(&Params::from_i64(a).unwrap()).unwrap()
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

fn node_index(s: &KummerSurface, p: &[i64]) -> usize {
    let p = ProjPoint::from_i64(p).unwrap();
    s.nodes().iter().position(|n| *n == p).unwrap()
}

/// Polynomial in 3 variables from (coefficient, exponent) pairs.
fn poly3(terms: &[(i64, [u32; 3])]) -> MPoly {
    MPoly::from_terms(
        3,
        terms
            .iter()
            .map(|(c, e)| (e.to_vec(), Scalar::from_int(*c)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn nodes_are_ordinary_double_points() {
    for a in [[0, 1, 1, 1], [1, 2, 3, 4]] {
        let s = surface(a);
        let r = verify_nodes(&s).unwrap();
        assert_eq!(r.hessian_ranks, vec![3; 16]);
    }
}

#[test]
fn cefalu_node_by_hand() {
    let f = cefalu_quartic();
    let p = ints(&[1, 1, 1, 0]);
    assert!(f.eval(&p).is_zero());
    assert!(f.gradient().iter().all(|g| g.eval(&p).is_zero()));
}

#[test]
fn configuration_for_random_params() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let p = random_valid_params(&mut rng, 12);
        let s = build_surface(&p).unwrap();
        configuration_check(&s.config).unwrap();
        assert_eq!(s.nodes(), s.tropes());
    }
}

#[test]
fn cefalu_trope_through_six_nodes() {
    let s = surface([0, 1, 1, 1]);
    let j = node_index(&s, &[0, 1, 1, 1]);
    let on: Vec<String> = s
        .config
        .nodes_on(j)
        .iter()
        .map(|&i| s.nodes()[i].to_string())
        .collect();
    assert_eq!(on.len(), 6);
    // z_j = 0, z_1 = a_j, z_k = e a_h, z_h = -e a_k for {j,h,k} = {2,3,4}
    for p in [
        "[1,0,1,-1]",
        "[1,0,-1,1]",
        "[1,1,0,-1]",
        "[1,-1,0,1]",
        "[1,1,-1,0]",
        "[1,-1,1,0]",
    ] {
        assert!(on.iter().any(|q| q == p), "{p} missing from {on:?}");
    }
}

#[test]
fn degenerate_configuration_detected() {
    let p = Params::from_i64([5, 10, 11, 2]).unwrap();
    assert!(!validate_params(&p).is_valid());
    let c = Configuration::from_point(&p).unwrap();
    match configuration_check(&c) {
        Err(Error::Certificate(msg)) => assert!(msg.contains("share"), "{msg}"),
        other => panic!("expected a pair-count failure, got {other:?}"),
    }
}

#[test]
fn tropes_are_double_conics() {
    for a in [[0, 1, 1, 1], [1, 2, 3, 4]] {
        let s = surface(a);
        for j in 0..16 {
            trope_double_conic(&s, j).unwrap();
        }
    }
}

#[test]
fn cefalu_trope_conic_matches() {
    let s = surface([0, 1, 1, 1]);
    let j = node_index(&s, &[0, 1, 1, 1]);
    let (c, _) = trope_double_conic(&s, j).unwrap();
    let expected = poly3(&[
        (-1, [2, 0, 0]),
        (1, [0, 2, 0]),
        (1, [0, 0, 2]),
        (1, [0, 1, 1]),
    ]);
    assert!(c.proportionality(&expected).is_some(), "{c}");
}

#[test]
fn cefalu_is_self_dual() {
    assert!(self_duality_certificate(&surface([0, 1, 1, 1]).f).unwrap());
}

#[test]
fn generic_surface_is_self_dual() {
    assert!(self_duality_certificate(&surface([1, 2, 3, 4]).f).unwrap());
}

#[test]
fn fermat_is_not_self_dual() {
    let fermat = (0..4)
        .map(|i| MPoly::var(4, i).pow(4))
        .fold(MPoly::zero(4), |a, b| &a + &b);
    assert!(!self_duality_certificate(&fermat).unwrap());
}

#[test]
fn self_duality_invariant_under_group_action() {
    // (2,1,4,3) and (1,-2,3,-4) are images of (1,2,3,4) under the group.
    for a in [[2, 1, 4, 3], [1, -2, 3, -4]] {
        let s = surface(a);
        assert_eq!(s.nodes(), surface([1, 2, 3, 4]).nodes());
        assert!(self_duality_certificate(&s.f).unwrap());
    }
}

#[test]
fn cefalu_branch_sextic_in_shifted_frame() {
    let s = surface([0, 1, 1, 1]);
    let i = node_index(&s, &[1, 1, 1, 0]);
    let pr = project_from_node(&s, i, Some(&cefalu_frame())).unwrap();
    // (w4^2 - w2^2)(w4^2 - w3^2)(w4^2 - (w2+w3)^2) in variables (w2, w3, w4)
    let w2 = MPoly::var(3, 0);
    let w3 = MPoly::var(3, 1);
    let w4sq = MPoly::var(3, 2).pow(2);
    let expected =
        &(&(&w4sq - &w2.pow(2)) * &(&w4sq - &w3.pow(2))) * &(&w4sq - &(&w2 + &w3).pow(2));
    assert!(pr.sextic.proportionality(&expected).is_some());
    let phi = poly3(&[
        (-8, [2, 0, 0]),
        (-8, [1, 1, 0]),
        (-8, [0, 2, 0]),
        (6, [0, 0, 2]),
    ]);
    // The Hudson form here is minus the displayed Cefalu equation.
    assert_eq!(pr.phi.proportionality(&phi), Some(Scalar::from_int(-1)));
}

#[test]
fn generic_branch_sextic_every_node() {
    let s = surface([1, 2, 3, 4]);
    for i in 0..16 {
        let pr = project_from_node(&s, i, None).unwrap();
        assert_eq!(pr.lines.len(), 6);
        assert_eq!(pr.f.degree(), Some(4));
    }
}

#[test]
fn cremona_on_cefalu_tetrad() {
    let s = surface([0, 1, 1, 1]);
    let tetrad: Vec<ProjPoint> = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
        .iter()
        .map(|p| ProjPoint::from_i64(p).unwrap())
        .collect();
    let node = ProjPoint::from_i64(&[0, 1, 1, -1]).unwrap();
    let r = cremona_test(&s.f, &tetrad, None, &[node]).unwrap();
    // Normalized faces are s - 3 z_i.
    assert_eq!(r.frame.row(0), ints(&[-2, 1, 1, 1]));
    assert!(r.invariant);
    let img = &r.images[0];
    let expected_w = ProjPoint::new(vec![
        Scalar::from_int(-1),
        Scalar::from_ratio(1, 2),
        Scalar::from_ratio(1, 2),
        Scalar::from_ratio(-1, 4),
    ])
    .unwrap();
    assert_eq!(img.w_image.as_ref(), Some(&expected_w));
    assert_eq!(
        img.z_image.as_ref().unwrap(),
        &ProjPoint::from_i64(&[-1, 1, 1, 0]).unwrap()
    );
    assert_eq!(img.z_image_singular, Some(true));
}

#[test]
fn cremona_with_unnormalized_frame() {
    let s = surface([0, 1, 1, 1]);
    let tetrad: Vec<ProjPoint> = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
        .iter()
        .map(|p| ProjPoint::from_i64(p).unwrap())
        .collect();
    let w = kummer_core::algebra::QMat::from_i64(&[
        &[2, -1, -1, -1],
        &[-1, 2, -1, -1],
        &[-1, -1, 2, -1],
        &[-1, -1, -1, 2],
    ]);
    let node = ProjPoint::from_i64(&[0, 1, 1, -1]).unwrap();
    let r = cremona_test(&s.f, &tetrad, Some(&w), &[node]).unwrap();
    assert_eq!(
        r.images[0].w_image.as_ref().unwrap(),
        &ProjPoint::from_i64(&[4, -2, -2, 1]).unwrap()
    );
}

#[test]
fn cremona_coordinate_tetrahedron() {
    let coord: Vec<ProjPoint> = (0..4)
        .map(|i| {
            let mut v = [0; 4];
            v[i] = 1;
            ProjPoint::from_i64(&v).unwrap()
        })
        .collect();
    let h = hudson_form(&ints(&[0, 1, 2, 3, 1]).try_into().unwrap());
    assert!(cremona_test(&h, &coord, None, &[]).unwrap().invariant);
    let fermat = (0..4)
        .map(|i| MPoly::var(4, i).pow(4))
        .fold(MPoly::zero(4), |a, b| &a + &b);
    assert!(!cremona_test(&fermat, &coord, None, &[]).unwrap().invariant);
    let dependent: Vec<ProjPoint> = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1]]
        .iter()
        .map(|p| ProjPoint::from_i64(p).unwrap())
        .collect();
    assert!(matches!(
        cremona_test(&fermat, &dependent, None, &[]),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn segre_type_examples() {
    let one = Scalar::from_int(1);
    let t = segre_type_surface(&one, &one, &one).unwrap();
    assert_eq!(t.hudson.to_vec(), ints(&[2, -1, -1, -1, 0]));
    assert!(t.f.proportionality(&cefalu_quartic()).is_some());
    assert!(t.surface.is_some());

    let t = segre_type_surface(&one, &one, &Scalar::from_int(4)).unwrap();
    assert_eq!(t.hudson.to_vec(), ints(&[1, -2, -2, 7, 0]));

    // b3^2 = (b2 + b4)^2
    let e = segre_type_surface(&one, &Scalar::from_int(3), &Scalar::from_int(2));
    assert!(matches!(e, Err(Error::Singular(_))));

    // Non-square b still builds, with no node set over Q.
    let t = segre_type_surface(
        &Scalar::from_int(2),
        &Scalar::from_int(3),
        &Scalar::from_int(7),
    )
    .unwrap();
    assert!(t.surface.is_none());
}

#[test]
fn cefalu_gauss_map_has_no_fixed_point() {
    let one = Scalar::from_int(1);
    let t = segre_type_surface(&one, &one, &one).unwrap();
    let r = gauss_fixedpoint_certificate(&t);
    assert!(r.passed, "{r:?}");
    assert_eq!(r.dual_at_unit, "12");
    let three: Vec<_> = r.cases.iter().filter(|c| c.support.len() == 3).collect();
    assert!(three.iter().all(|c| c.outcome == "inconsistent"));
    let two: Vec<_> = r.cases.iter().filter(|c| c.support.len() == 2).collect();
    assert!(two.iter().all(|c| c.outcome == "off the surface"));
}

#[test]
fn crossratio_values() {
    let r = cefalu_crossratio_certificate().unwrap();
    assert_eq!(r.values, ints(&[-2, 0, 1, 2, 4]));
    assert_eq!(r.normalized, ints(&[-3, -1, 0, 1, 3]));
    assert!(r.barycenter.is_zero());
}

#[test]
fn cefalu_self_duality_float_oracle() {
    // Points of F = 0: fix (z1, z2, z3) and solve the quadratic in u = z4^2,
    // -2u^2 + 2su + s^2 - 3q = 0. Then F(grad F) must vanish numerically.
    use num_complex::Complex64 as C;
    use rand::Rng;
    let f = |z: &[C; 4]| {
        let s: C = z.iter().map(|x| x * x).sum();
        let q: C = z.iter().map(|x| x.powi(4)).sum();
        s * s - 3.0 * q
    };
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for _ in 0..200 {
        let w: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let s: f64 = w.iter().map(|x| x * x).sum();
        let q: f64 = w.iter().map(|x| x.powi(4)).sum();
        let disc = C::new(4.0 * s * s + 8.0 * (s * s - 3.0 * q), 0.0).sqrt();
        let u = (C::new(-2.0 * s, 0.0) + disc) / -4.0;
        let z = [
            C::new(w[0], 0.0),
            C::new(w[1], 0.0),
            C::new(w[2], 0.0),
            u.sqrt(),
        ];
        assert!(f(&z).norm() < 1e-9);
        let sz: C = z.iter().map(|x| x * x).sum();
        let grad = z.map(|x| 4.0 * x * sz - 12.0 * x.powi(3));
        let scale = grad.iter().map(|g| g.norm()).fold(1.0, f64::max).powi(4);
        assert!(f(&grad).norm() / scale < 1e-10);
    }
}
