//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line,
//! followed by its failing sub-checks. Some sub-checks state claims that the
//! exact computation refutes; they are listed in `KNOWN_FAILURES` and the test
//! asserts that exactly those fail.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kummer_core::algebra::{MPoly, ProjPoint, Scalar};
use kummer_core::enriques::{
    build_graph, double_cover_graph, invariants, max_independent_sets, orbit_coverage,
};
use kummer_core::groups::{
    affine_f4_group, kummer_group, signed_permutation_group, signed_permutation_group_linear,
};
use kummer_core::kummer::*;
use kummer_core::picard::{
    infinite_order_certificate, iota, switch_isometry, trope_class, NsVector,
};
use kummer_core::segre::{gallery, search_center, segre_cubic};
use kummer_core::theta::{identity_residuals, kummer_from_tau, SiegelTau, DEFAULT_EPSILON};

/// (criterion, sub-check) pairs expected to fail.
const KNOWN_FAILURES: &[(u32, &str)] = &[
    (7, "distance profile (6,6,3) from every vertex"),
    (7, "every maximum set lies in the G-orbit of M1, M2 or M3"),
];

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

fn surface(a: [i64; 4]) -> KummerSurface {
    build_surface(&Params::from_i64(a).unwrap()).unwrap()
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

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

fn points(v: &[[i64; 4]]) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = v.iter().map(|p| ProjPoint::from_i64(p).unwrap()).collect();
    out.sort();
    out
}

fn c1_cefalu_construction() -> Criterion {
    let mut c = Criterion::new(1, "Cefalu construction");
    let s = surface([0, 1, 1, 1]);
    let h = normalize_coefficients(&s.hudson).unwrap();
    c.check(
        "hudson ~ (2,-1,-1,-1,0)",
        h == normalize_coefficients(&ints(&[2, -1, -1, -1, 0])).unwrap(),
    );
    c.check(
        "F ~ (sum z^2)^2 - 3 sum z^4",
        s.f.proportionality(&cefalu_quartic()).is_some(),
    );
    c
}

fn c2_nodes() -> Criterion {
    let mut c = Criterion::new(2, "node certificate");
    for a in [[0, 1, 1, 1], [1, 2, 3, 4]] {
        let r = verify_nodes(&surface(a));
        c.check(
            format!("{a:?}: 16 nodes of Hessian rank 3"),
            r.is_ok_and(|r| r.hessian_ranks == vec![3; 16]),
        );
    }
    c
}

fn c3_configuration() -> Criterion {
    let mut c = Criterion::new(3, "(16_6, 16_6) configuration");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let p = random_valid_params(&mut rng, 20);
        let s = build_surface(&p).unwrap();
        let ok = configuration_check(&s.config).is_ok_and(|r| {
            r.row_sums.iter().chain(&r.column_sums).all(|&x| x == 6) && r.pair_intersections_all_two
        });
        let name: Vec<String> = p.coords().iter().map(ToString::to_string).collect();
        c.check(format!("a = ({})", name.join(",")), ok);
    }
    c
}

fn c4_tropes() -> Criterion {
    let mut c = Criterion::new(4, "double-conic tropes");
    for a in [[0, 1, 1, 1], [1, 2, 3, 4]] {
        let s = surface(a);
        c.check(
            format!("{a:?}: all 16 tropes"),
            (0..16).all(|j| trope_double_conic(&s, j).is_ok()),
        );
    }
    let s = surface([0, 1, 1, 1]);
    let t = ProjPoint::from_i64(&[0, 1, 1, 1]).unwrap();
    let j = s.tropes().iter().position(|p| *p == t).unwrap();
    let (conic, _) = trope_double_conic(&s, j).unwrap();
    let expected = poly3(&[
        (-1, [2, 0, 0]),
        (1, [0, 2, 0]),
        (1, [0, 0, 2]),
        (1, [0, 1, 1]),
    ]);
    c.check(
        "z2+z3+z4 = 0 gives -z1^2+z2^2+z3^2+z2z3",
        conic.proportionality(&expected).is_some(),
    );
    c
}

fn c5_self_duality() -> Criterion {
    let mut c = Criterion::new(5, "strict self-duality");
    c.check(
        "Cefalu",
        self_duality_certificate(&surface([0, 1, 1, 1]).f).unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let p = random_valid_params(&mut rng, 9);
        let s = build_surface(&p).unwrap();
        let name: Vec<String> = p.coords().iter().map(ToString::to_string).collect();
        c.check(
            format!("a = ({})", name.join(",")),
            self_duality_certificate(&s.f).unwrap(),
        );
    }
    let fermat = (0..4)
        .map(|i| MPoly::var(4, i).pow(4))
        .fold(MPoly::zero(4), |a, b| &a + &b);
    c.check(
        "Fermat control has nonzero remainder",
        !self_dual_remainder(&fermat).unwrap().is_zero(),
    );
    c
}

fn c6_branch_sextic() -> Criterion {
    let mut c = Criterion::new(6, "branch sextic");
    let s = surface([0, 1, 1, 1]);
    let p1 = ProjPoint::from_i64(&[1, 1, 1, 0]).unwrap();
    let i = s.nodes().iter().position(|p| *p == p1).unwrap();
    let pr = project_from_node(&s, i, Some(&cefalu_frame())).unwrap();
    let (w2, w3, w4sq) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2).pow(2));
    let expected =
        &(&(&w4sq - &w2.pow(2)) * &(&w4sq - &w3.pow(2))) * &(&w4sq - &(&w2 + &w3).pow(2));
    c.check(
        "Cefalu at P1 in the given frame",
        pr.sextic.proportionality(&expected).is_some(),
    );
    let s = surface([1, 2, 3, 4]);
    let all = (0..16).all(|i| project_from_node(&s, i, None).is_ok_and(|p| p.lines.len() == 6));
    c.check("(1,2,3,4): product of six trope lines at every node", all);
    c
}

fn c7_graph() -> Criterion {
    let mut c = Criterion::new(7, "Enriques graph");
    let s = surface([0, 1, 1, 1]);
    let g = build_graph(s.nodes()).unwrap();
    let inv = invariants(&g);
    c.check(
        "(V,E,T,euler) = (16,48,32,0)",
        (inv.vertices, inv.edges, inv.triangles, inv.euler) == (16, 48, 32, 0),
    );
    c.check(
        "distance profile (6,6,3) from every vertex",
        inv.distance_profiles.iter().all(|p| p == &vec![6, 6, 3]),
    );
    c.check(
        "every edge in exactly 2 triangles",
        inv.edge_triangle_counts.iter().all(|&k| k == 2),
    );
    let sets = max_independent_sets(&g);
    c.check(
        "maximum independent size 4, no 5-set",
        sets.max_size == 4 && sets.count_of_size_five == 0,
    );
    let m1 = points(&[[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]]);
    let refs = vec![
        m1.clone(),
        points(&[[1, 1, 1, 0], [1, 1, -1, 0], [1, -1, 1, 0], [-1, 1, 1, 0]]),
        points(&[[1, 1, 1, 0], [1, 1, 0, -1], [1, 0, 1, -1], [0, 1, 1, -1]]),
    ];
    let found: BTreeSet<Vec<ProjPoint>> = sets
        .sets
        .iter()
        .map(|s| {
            let mut v: Vec<ProjPoint> = s.iter().map(|&i| g.vertices[i].clone()).collect();
            v.sort();
            v
        })
        .collect();
    c.check("M1 is a maximum independent set", found.contains(&m1));
    let cov = orbit_coverage(&g, &sets, &signed_permutation_group(), &refs).unwrap();
    c.check(
        "every maximum set lies in the G-orbit of M1, M2 or M3",
        cov.complete(),
    );
    c
}

fn c8_double_cover() -> Criterion {
    let mut c = Criterion::new(8, "double cover graph");
    let v = signed_permutation_group_linear()
        .vector_orbit(&ints(&[1, 1, 1, 0]))
        .unwrap();
    let r = double_cover_graph(&v).unwrap().report;
    c.check(
        "32 vertices, 96 edges, euler 0",
        (r.vertices, r.edges, r.euler) == (32, 96, 0),
    );
    c.check("2-to-1 covering", r.covering);
    c
}

fn c9_groups() -> Criterion {
    let mut c = Criterion::new(9, "groups");
    let k = kummer_group();
    let g = signed_permutation_group();
    c.check("|K| = 16", k.order() == 16);
    c.check("|G| = 192", g.order() == 192);
    let p = ProjPoint::from_i64(&[1, 1, 1, 0]).unwrap();
    let mut nodes = surface([0, 1, 1, 1]).nodes().to_vec();
    nodes.sort();
    c.check(
        "K-orbit of (1,1,1,0) is the node set",
        k.orbit(&p).unwrap() == nodes,
    );
    c.check(
        "G-orbit of (1,1,1,0) is the node set",
        g.orbit(&p).unwrap() == nodes,
    );
    c.check(
        "Sylow-2(G)^ab = (Z/2)^3",
        g.sylow2().unwrap().abelianization() == vec![2, 2, 2],
    );
    c.check(
        "Sylow-2(Gamma)^ab = (Z/2)^4",
        affine_f4_group().sylow2().unwrap().abelianization() == vec![2, 2, 2, 2],
    );
    c
}

fn c10_picard() -> Criterion {
    let mut c = Criterion::new(10, "Picard lattice");
    let s = surface([0, 1, 1, 1]);
    c.check(
        "iota preserves the form, squares to 1",
        iota(0).is_ok_and(|m| m.is_involution()),
    );
    c.check(
        "sigma preserves the form, squares to 1",
        switch_isometry(s.incidence()).is_ok_and(|m| m.is_involution()),
    );
    let d_sum = (0..16).fold(NsVector::zero(), |acc, i| {
        acc.add(&trope_class(i, s.incidence()).unwrap())
    });
    let e_sum = (0..16).fold(NsVector::zero(), |acc, i| acc.add(&NsVector::e(i)));
    let expected = NsVector::h()
        .scale(&Scalar::from_int(8))
        .sub(&e_sum.scale(&Scalar::from_int(3)));
    c.check("sum D_i = 8H - 3 sum E_i", d_sum == expected);
    let r = infinite_order_certificate(0, 1).unwrap();
    c.check("charpoly (x-1)^3", r.charpoly == ["-1", "3", "-3", "1"]);
    c.check("rank(M - I) = 2", r.rank_m_minus_identity == 2);
    c.check("(M - I)^2 != 0", r.nilpotency_index == Some(3));
    c.check(
        "M^k != I for k <= 100",
        r.finite_order.is_none() && r.checked_powers >= 100,
    );
    c
}

fn c11_segre() -> Criterion {
    let mut c = Criterion::new(11, "Segre cubic projection");
    let cubic = segre_cubic().unwrap();
    c.check("10 nodes", cubic.nodes.len() == 10);
    c.check("15 planes on the cubic", cubic.planes.len() == 15);
    match search_center(&cubic, 5) {
        Ok((pd, r)) => {
            c.check(
                "10 projected nodes singular on f",
                pd.node_images.len() == 10 && r.projected_nodes == 10,
            );
            c.check(
                "squarefree resultant sextic, 16 nodes",
                r.squarefree && r.total_nodes == 16,
            );
            c.check("derivative identity", r.f_in_ideal && r.gradient_in_ideal);
        }
        Err(e) => c.check(format!("admissible centre: {e}"), false),
    }
    c
}

fn c12_gallery() -> Criterion {
    let mut c = Criterion::new(12, "gallery");
    let items = gallery().unwrap();
    for name in [
        "xyz = l w^3, 27 l^2 = -1",
        "Perazzo n = 1",
        "Perazzo n = 3",
        "Cayley cubic",
        "Segre cubic in P^4",
        "Segre cubic in P^6",
    ] {
        let ok = items.iter().any(|i| i.name == name && i.passed);
        c.check(name, ok);
    }
    c
}

fn c13_theta() -> Criterion {
    let mut c = Criterion::new(13, "theta functions");
    let eps = DEFAULT_EPSILON;
    let fixtures = [
        (
            "i[[2,1],[1,2]]",
            SiegelTau::from_parts([[0.0; 2]; 2], [[2.0, 1.0], [1.0, 2.0]]).unwrap(),
        ),
        (
            "mixed",
            SiegelTau::from_parts([[0.3, 0.2], [0.2, -0.1]], [[1.1, 0.4], [0.4, 1.3]]).unwrap(),
        ),
        (
            "diagonal",
            SiegelTau::from_parts([[0.1, 0.0], [0.0, -0.2]], [[0.9, 0.0], [0.0, 1.4]]).unwrap(),
        ),
    ];
    for (name, tau) in &fixtures {
        let r = identity_residuals(tau, eps, 100, 13).unwrap();
        c.check(
            format!("{name}: addition < 50 eps"),
            r.addition_max < 50.0 * eps,
        );
        c.check(
            format!("{name}: half-period, parity < 50 eps"),
            r.halfperiod_max < 50.0 * eps && r.parity_max < 50.0 * eps,
        );
    }
    let p = kummer_from_tau(&fixtures[1].1, eps, 100, 13).unwrap();
    c.check("thetanull nonvanishing", p.diagnostics.failures.is_empty());
    c.check(
        "embedding residual < 1e-8",
        p.residual_max.is_some_and(|x| x < 1e-8),
    );
    c.check(
        "two-torsion images match the K-orbit of P0",
        p.matched_two_torsion,
    );
    c
}

fn main() {
    let criteria = [
        c1_cefalu_construction(),
        c2_nodes(),
        c3_configuration(),
        c4_tropes(),
        c5_self_duality(),
        c6_branch_sextic(),
        c7_graph(),
        c8_double_cover(),
        c9_groups(),
        c10_picard(),
        c11_segre(),
        c12_gallery(),
        c13_theta(),
    ];
    let mut failing = BTreeSet::new();
    for cr in &criteria {
        println!(
            "criterion {:>2} {:<28} {}",
            cr.id,
            cr.title,
            if cr.passed() { "PASS" } else { "FAIL" }
        );
        for (name, ok) in &cr.checks {
            if !ok {
                let known = KNOWN_FAILURES.contains(&(cr.id, name.as_str()));
                println!("    FAIL {name}{}", if known { " (known)" } else { "" });
                failing.insert((cr.id, name.clone()));
            }
        }
    }
    let expected: BTreeSet<(u32, String)> = KNOWN_FAILURES
        .iter()
        .map(|&(i, n)| (i, n.to_string()))
        .collect();
    if failing != expected {
        eprintln!("failing sub-checks differ from the known list");
        std::process::exit(1);
    }
    println!(
        "acceptance: {} criteria, failures match the known list",
        criteria.len()
    );
}
