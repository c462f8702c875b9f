use std::collections::BTreeSet;

use kummer_core::algebra::{ProjPoint, Scalar};
use kummer_core::enriques::*;
use kummer_core::groups::{signed_permutation_group, signed_permutation_group_linear};
use kummer_core::kummer::{build_surface, Params};

fn graph(a: [i64; 4]) -> KGraph {
    let s = build_surface(&Params::from_i64(a).unwrap()).unwrap();
    build_graph(s.nodes()).unwrap()
}

fn points(v: &[[i64; 4]]) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = v.iter().map(|p| ProjPoint::from_i64(p).unwrap()).collect();
    out.sort();
    out
}

#[test]
fn cefalu_graph_invariants() {
    let inv = invariants(&graph([0, 1, 1, 1]));
    assert_eq!(
        (inv.vertices, inv.edges, inv.triangles, inv.euler),
        (16, 48, 32, 0)
    );
    assert!(inv.degrees.iter().all(|&d| d == 6));
    // Diameter 2: [0,1,-1,-1] is a common neighbour of [1,1,1,0] and [1,1,0,1].
    assert!(inv.distance_profiles.iter().all(|p| p == &vec![6, 9]));
    assert!(inv.edge_triangle_counts.iter().all(|&c| c == 2));
    // Each link is two disjoint triangles: the neighbours form two orthogonal frames.
    assert!(inv.link_components.iter().all(|&c| c == 2));
}

#[test]
fn generic_graph_matches_cefalu() {
    // The orthogonality graph is not special to the Cefalu parameters.
    let inv = invariants(&graph([1, 2, 3, 4]));
    assert_eq!((inv.edges, inv.triangles, inv.euler), (48, 32, 0));
}

#[test]
fn group_acts_by_automorphisms() {
    assert!(group_preserves_graph(&signed_permutation_group(), &graph([0, 1, 1, 1])).unwrap());
}

#[test]
fn maximum_independent_sets() {
    let g = graph([0, 1, 1, 1]);
    let r = max_independent_sets(&g);
    assert_eq!(r.max_size, 4);
    assert_eq!(r.count_of_size_five, 0);
    assert_eq!(r.sets.len(), 24);
    let m1 = points(&[[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]]);
    assert!(r.sets.iter().any(|s| {
        let mut v: Vec<ProjPoint> = s.iter().map(|&i| g.vertices[i].clone()).collect();
        v.sort();
        v == m1
    }));
    let mut sigs: Vec<(Vec<usize>, usize)> = r
        .classes
        .iter()
        .map(|c| (c.block_signature.clone(), c.count))
        .collect();
    sigs.sort();
    assert_eq!(
        sigs,
        vec![(vec![1, 1, 1, 1], 8), (vec![2, 2], 12), (vec![4], 4)]
    );
    // Every pair inside a maximum set is at distance 2.
    assert!(r.classes.iter().all(|c| c.distances.keys().eq([2].iter())));
}

#[test]
fn reference_orbits_cover_half_the_maximum_sets() {
    let g = graph([0, 1, 1, 1]);
    let r = max_independent_sets(&g);
    let refs = vec![
        points(&[[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]]),
        points(&[[1, 1, 1, 0], [1, 1, -1, 0], [1, -1, 1, 0], [-1, 1, 1, 0]]),
        points(&[[1, 1, 1, 0], [1, 1, 0, -1], [1, 0, 1, -1], [0, 1, 1, -1]]),
    ];
    let c = orbit_coverage(&g, &r, &signed_permutation_group(), &refs).unwrap();
    assert_eq!(c.orbit_sizes, vec![8, 4, 8]);
    assert_eq!(c.coincident, vec![(0, 2)]);
    assert_eq!(c.covered, 12);
    assert_eq!(c.uncovered.len(), 12);
    // The leftover sets meet two blocks in two vertices each.
    let first: BTreeSet<usize> = c.uncovered[0]
        .iter()
        .map(|p| p.coords().iter().position(|x| x.is_zero()).unwrap())
        .collect();
    assert_eq!(first.len(), 2);
}

#[test]
fn connected_double_cover() {
    let one = Scalar::from_int(1);
    let zero = Scalar::from_int(0);
    let vectors = signed_permutation_group_linear()
        .vector_orbit(&[one.clone(), one.clone(), one, zero])
        .unwrap();
    let c = double_cover_graph(&vectors).unwrap();
    let r = &c.report;
    assert_eq!((r.vertices, r.edges, r.triangles, r.euler), (32, 96, 64, 0));
    assert!(r.connected && r.covering && r.all_edges_orthogonal);
    // The triangles close up into 8 tetrahedra meeting at vertices, so the
    // first cohomology is larger than that of a torus.
    assert_eq!(r.cocycle_dimension - r.coboundary_dimension, 9);
}

#[test]
fn dot_export_counts() {
    let dot = graph([0, 1, 1, 1]).to_dot("K");
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 48);
    assert_eq!(dot.lines().filter(|l| l.contains("label=")).count(), 16);
}
