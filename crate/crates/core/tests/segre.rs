use kummer_core::algebra::{ProjPoint, Scalar};
use kummer_core::kummer::self_duality_certificate;
use kummer_core::segre::*;
use kummer_core::Error;

/// First admissible centre found by `search_center` with bound 5.
fn fixture_center() -> ProjPoint {
    ProjPoint::from_i64(&[5, 1, -4, 1, 1]).unwrap()
}

#[test]
fn cubic_nodes_and_planes() {
    let c = segre_cubic().unwrap();
    assert_eq!(c.nodes.len(), 10);
    assert_eq!(c.planes.len(), 15);
    assert_eq!(c.f.degree(), Some(3));
    for n in &c.nodes {
        assert!(c.f.gradient().iter().all(|d| d.eval(n.coords()).is_zero()));
    }
}

#[test]
fn center_search_is_pinned() {
    let c = segre_cubic().unwrap();
    let (pd, rep) = search_center(&c, 5).unwrap();
    assert_eq!(pd.center, fixture_center());
    assert_eq!(rep.total_nodes, 16);
}

#[test]
fn projection_discriminant() {
    let c = segre_cubic().unwrap();
    let pd = project(&c, &fixture_center()).unwrap();
    assert_eq!(pd.f.degree(), Some(4));
    assert_eq!(pd.node_images.len(), 10);
    let rep = sixteen_node_certificate(&pd).unwrap();
    assert!(rep.squarefree && rep.f_in_ideal && rep.gradient_in_ideal);
    assert_eq!(rep.resultant.len(), 7);
    assert_eq!(
        (rep.base_points, rep.projected_nodes, rep.total_nodes),
        (6, 10, 16)
    );
}

#[test]
fn discriminant_dual_to_tangent_section() {
    let c = segre_cubic().unwrap();
    let pd = project(&c, &fixture_center()).unwrap();
    let t = tangent_section(&dual_point(&fixture_center()).unwrap()).unwrap();
    assert!(duality_certificate(&pd, &t).unwrap());
    // Outside Hudson coordinates the plain self-duality test does not apply.
    assert!(!self_duality_certificate(&pd.f).unwrap());
}

#[test]
fn centre_on_a_plane_rejected() {
    let c = segre_cubic().unwrap();
    // (1,-1,2,-2,3,-3) lies on x0+x1 = x2+x3 = x4+x5 = 0.
    let p = ProjPoint::from_i64(&[1, -1, 2, -2, 3]).unwrap();
    match project(&c, &p) {
        Err(Error::InvalidParams(msg)) => assert!(msg.contains("singular line"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(project(&c, &c.nodes[0]).is_err());
    assert!(project(&c, &ProjPoint::from_i64(&[1, 0, 0, 0, 0]).unwrap()).is_err());
}

#[test]
fn igusa_tangent_section() {
    let s = igusa_quartic().unwrap();
    assert_eq!(s.degree(), Some(4));
    let q = dual_point(&fixture_center()).unwrap();
    assert!(s.eval(q.coords()).is_zero());
    assert!(s.gradient().iter().any(|d| !d.eval(q.coords()).is_zero()));
    let t = tangent_section(&q).unwrap();
    assert_eq!(t.nodes.len(), 16);
    assert_eq!(t.quartic.degree(), Some(4));
}

#[test]
fn igusa_singular_point_rejected() {
    // (1,1,0,0,-1,-1) lies on a singular line of the quartic.
    let p = ProjPoint::from_i64(&[1, 1, 0, 0, -1]).unwrap();
    assert!(tangent_section(&p).is_err());
}

#[test]
fn gallery_items() {
    let items = gallery().unwrap();
    for it in &items {
        assert!(it.passed, "{} failed", it.name);
    }
    assert!(items
        .iter()
        .any(|it| it.certificate.starts_with("35 nodes")));
    assert!(items
        .iter()
        .any(|it| it.certificate.starts_with("10 nodes")));
}

#[test]
fn gallery_controls_fail() {
    // Rational coefficient instead of the root of 27 l^2 + 1.
    let xyz = kummer_core::algebra::MPoly::from_terms(
        4,
        vec![
            (vec![1, 1, 1, 0], Scalar::from_int(1)),
            (vec![0, 0, 0, 3], Scalar::from_int(-1)),
        ],
    )
    .unwrap();
    assert!(!self_duality_certificate(&xyz).unwrap());
    // n even needs l^2 = -1.
    assert!(!self_duality_certificate(&perazzo(2, &Scalar::from_int(-1))).unwrap());
}

#[test]
fn perazzo_stable_under_swapping_blocks() {
    let f = perazzo(3, &Scalar::from_int(-1));
    let mut perm: Vec<usize> = (4..8).chain(0..4).collect();
    perm.swap(0, 1);
    let swapped = f
        .compose(
            &perm
                .iter()
                .map(|&i| kummer_core::algebra::MPoly::var(8, i))
                .collect::<Vec<_>>(),
        )
        .unwrap();
    assert!(self_duality_certificate(&swapped).unwrap());
}

#[test]
fn node_orbit_sizes() {
    assert_eq!(segre_node_orbit(2).unwrap().len(), 10);
    assert_eq!(segre_node_orbit(3).unwrap().len(), 35);
}
