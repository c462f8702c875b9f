//! The orthogonality graph on the 16 nodes, its invariants, maximum
//! independent sets, and a connected double cover on the 32 signed vectors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;

use serde::Serialize;

use crate::algebra::{dot, ProjPoint, Scalar};
use crate::error::{Error, Result};
use crate::groups::MatGroup;

/// Simple graph on canonical points; `i ~ j` iff `P_i . P_j = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGraph {
    pub vertices: Vec<ProjPoint>,
    pub adj: Vec<Vec<bool>>,
}

pub fn build_graph(nodes: &[ProjPoint]) -> Result<KGraph> {
    if nodes.len() != 16 {
        return Err(Error::InvalidParams(format!(
            "expected 16 nodes, got {}",
            nodes.len()
        )));
    }
    let distinct: BTreeSet<&ProjPoint> = nodes.iter().collect();
    if distinct.len() != 16 {
        return Err(Error::InvalidParams("nodes are not distinct".into()));
    }
    Ok(orthogonality_graph(nodes))
}

fn orthogonality_graph(nodes: &[ProjPoint]) -> KGraph {
    let n = nodes.len();
    let adj = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && nodes[i].dot(&nodes[j]).is_zero())
                .collect()
        })
        .collect();
    KGraph {
        vertices: nodes.to_vec(),
        adj,
    }
}

impl KGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adj[i][j])
            .collect()
    }

    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (i, j) in self.edges() {
            for k in j + 1..self.len() {
                if self.adj[i][k] && self.adj[j][k] {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let du = dist[u].unwrap();
            for v in 0..self.len() {
                if self.adj[u][v] && dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    q.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.len()).map(|s| self.distances_from(s)).collect()
    }

    /// DOT text with vertices in canonical order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(s, "  {i} [label=\"{v}\"];").unwrap();
        }
        for (i, j) in self.edges() {
            writeln!(s, "  {i} -- {j};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub degrees: Vec<usize>,
    pub triangles: usize,
    pub euler: i64,
    /// Per vertex, the number of vertices at distance 1, 2, 3, ...
    pub distance_profiles: Vec<Vec<usize>>,
    pub edge_triangle_counts: Vec<usize>,
    /// Connected components of each vertex link (1 everywhere for a closed surface).
    pub link_components: Vec<usize>,
}

pub fn invariants(g: &KGraph) -> GraphInvariants {
    let edges = g.edges();
    let tris = g.triangles();
    let degrees = g
        .adj
        .iter()
        .map(|r| r.iter().filter(|&&b| b).count())
        .collect();
    let distance_profiles = (0..g.len())
        .map(|s| {
            let d = g.distances_from(s);
            let max = d.iter().flatten().copied().max().unwrap_or(0);
            (1..=max)
                .map(|k| d.iter().filter(|&&x| x == Some(k)).count())
                .collect()
        })
        .collect();
    let edge_triangle_counts = edges
        .iter()
        .map(|&(i, j)| (0..g.len()).filter(|&k| g.adj[i][k] && g.adj[j][k]).count())
        .collect();
    let link_components = (0..g.len()).map(|v| link_components(g, v)).collect();
    GraphInvariants {
        vertices: g.len(),
        edges: edges.len(),
        degrees,
        triangles: tris.len(),
        euler: g.len() as i64 - edges.len() as i64 + tris.len() as i64,
        distance_profiles,
        edge_triangle_counts,
        link_components,
    }
}

fn link_components(g: &KGraph, v: usize) -> usize {
    let nbrs: Vec<usize> = (0..g.len()).filter(|&u| g.adj[v][u]).collect();
    let mut seen = vec![false; g.len()];
    let mut comps = 0;
    for &s in &nbrs {
        if seen[s] {
            continue;
        }
        comps += 1;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            stack.extend(nbrs.iter().filter(|&&y| g.adj[x][y] && !seen[y]));
        }
    }
    comps
}

/// Block of a node: the class of its coordinatewise absolute value.
fn block_key(p: &ProjPoint) -> Vec<Scalar> {
    p.coords()
        .iter()
        .map(|c| {
            if c.signum() == Some(-1) {
                -c
            } else {
                c.clone()
            }
        })
        .collect()
}

/// Maximum independent sets sharing a block signature and distance pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetClass {
    /// Sizes of the blocks met by the set, descending.
    pub block_signature: Vec<usize>,
    /// Pairwise distance -> number of pairs.
    pub distances: BTreeMap<usize, usize>,
    pub count: usize,
    pub representative: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentSetReport {
    pub max_size: usize,
    pub count_of_size_five: usize,
    /// All maximum independent sets, as sorted vertex indices.
    pub sets: Vec<Vec<usize>>,
    pub classes: Vec<SetClass>,
}

fn extend_independent(g: &KGraph, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    out.push(cur.clone());
    for v in start..g.len() {
        if cur.iter().all(|&u| !g.adj[u][v]) {
            cur.push(v);
            extend_independent(g, cur, v + 1, out);
            cur.pop();
        }
    }
}

/// All independent sets, exhaustively.
pub fn independent_sets(g: &KGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    extend_independent(g, &mut Vec::new(), 0, &mut out);
    out
}

fn set_key(
    g: &KGraph,
    dist: &[Vec<Option<usize>>],
    set: &[usize],
) -> (Vec<usize>, BTreeMap<usize, usize>) {
    let mut blocks: BTreeMap<Vec<Scalar>, usize> = BTreeMap::new();
    for &i in set {
        *blocks.entry(block_key(&g.vertices[i])).or_insert(0) += 1;
    }
    let mut signature: Vec<usize> = blocks.into_values().collect();
    signature.sort_unstable_by(|a, b| b.cmp(a));
    let mut distances = BTreeMap::new();
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a + 1..] {
            // usize::MAX marks a pair in different components.
            *distances
                .entry(dist[i][j].unwrap_or(usize::MAX))
                .or_insert(0) += 1;
        }
    }
    (signature, distances)
}

pub fn max_independent_sets(g: &KGraph) -> IndependentSetReport {
    let all = independent_sets(g);
    let max_size = all.iter().map(Vec::len).max().unwrap_or(0);
    let sets: Vec<Vec<usize>> = all
        .iter()
        .filter(|s| s.len() == max_size)
        .cloned()
        .collect();
    let dist = g.distance_matrix();
    let mut classes: Vec<SetClass> = Vec::new();
    for s in &sets {
        let (block_signature, distances) = set_key(g, &dist, s);
        match classes
            .iter_mut()
            .find(|c| c.block_signature == block_signature && c.distances == distances)
        {
            Some(c) => c.count += 1,
            None => classes.push(SetClass {
                block_signature,
                distances,
                count: 1,
                representative: s.clone(),
            }),
        }
    }
    IndependentSetReport {
        max_size,
        count_of_size_five: all.iter().filter(|s| s.len() == 5).count(),
        sets,
        classes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCoverage {
    /// Orbit size of each reference set.
    pub orbit_sizes: Vec<usize>,
    /// Number of maximum sets in the union of the reference orbits.
    pub covered: usize,
    /// Maximum sets outside every reference orbit.
    pub uncovered: Vec<Vec<ProjPoint>>,
    /// Pairs (i, j) of reference sets lying in the same orbit.
    pub coincident: Vec<(usize, usize)>,
}

impl OrbitCoverage {
    pub fn complete(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Compares the maximum independent sets with the group orbits of reference sets.
pub fn orbit_coverage(
    g: &KGraph,
    report: &IndependentSetReport,
    group: &MatGroup,
    refs: &[Vec<ProjPoint>],
) -> Result<OrbitCoverage> {
    let orbits: Vec<BTreeSet<Vec<ProjPoint>>> = refs
        .iter()
        .map(|r| set_orbit(group, r))
        .collect::<Result<_>>()?;
    let union: BTreeSet<&Vec<ProjPoint>> = orbits.iter().flatten().collect();
    let mut covered = 0;
    let mut uncovered = Vec::new();
    for s in &report.sets {
        let mut pts: Vec<ProjPoint> = s.iter().map(|&i| g.vertices[i].clone()).collect();
        pts.sort();
        if union.contains(&pts) {
            covered += 1;
        } else {
            uncovered.push(pts);
        }
    }
    let mut coincident = Vec::new();
    for i in 0..orbits.len() {
        for j in i + 1..orbits.len() {
            if orbits[i] == orbits[j] {
                coincident.push((i, j));
            }
        }
    }
    Ok(OrbitCoverage {
        orbit_sizes: orbits.iter().map(BTreeSet::len).collect(),
        covered,
        uncovered,
        coincident,
    })
}

/// Orbit of a point set under a projective group, each image sorted.
pub fn set_orbit(group: &MatGroup, set: &[ProjPoint]) -> Result<BTreeSet<Vec<ProjPoint>>> {
    group
        .elements()
        .map(|g| {
            let mut img: Vec<ProjPoint> = set.iter().map(|p| g.apply(p)).collect::<Result<_>>()?;
            img.sort();
            Ok(img)
        })
        .collect()
}

/// Whether every group element maps edges to edges.
pub fn group_preserves_graph(group: &MatGroup, g: &KGraph) -> Result<bool> {
    let index: BTreeMap<&ProjPoint, usize> =
        g.vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
    for el in group.elements() {
        let perm: Vec<usize> = g
            .vertices
            .iter()
            .map(|p| {
                el.apply(p).and_then(|q| {
                    index
                        .get(&q)
                        .copied()
                        .ok_or_else(|| Error::Certificate(format!("{q} is not a vertex")))
                })
            })
            .collect::<Result<_>>()?;
        for (i, j) in g.edges() {
            if !g.adj[perm[i]][perm[j]] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// GF(2) vectors of length <= 64 as bitmasks.

fn gf2_reduce(basis: &mut Vec<u64>, v: u64) -> bool {
    let mut v = v;
    for &b in basis.iter() {
        let top = 63 - b.leading_zeros();
        if v >> top & 1 == 1 {
            v ^= b;
        }
    }
    if v != 0 {
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    } else {
        false
    }
}

/// Null space of a GF(2) matrix with `ncols` columns (row bitmasks), one basis vector per free column.
fn gf2_nullspace(rows: &[u64], ncols: usize) -> Vec<u64> {
    let mut m: Vec<u64> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i] >> c & 1 == 1) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] >> c & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = 1u64 << f;
            for (row, &pc) in pivots.iter().enumerate() {
                if m[row] >> f & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub euler: i64,
    pub connected: bool,
    pub covering: bool,
    pub all_edges_orthogonal: bool,
    pub cocycle_dimension: usize,
    pub coboundary_dimension: usize,
}

#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub vectors: Vec<Vec<Scalar>>,
    pub graph: KGraph,
    /// Projective class of each vector, as a base vertex index.
    pub projection: Vec<usize>,
    /// Voltage on each base edge, in `base.edges()` order.
    pub voltages: Vec<u8>,
    pub report: CoverReport,
}

/// The 32 vectors over the 16 base vertices, joined along a Z/2 voltage that is a
/// cocycle on the triangle complex but not a coboundary.
pub fn double_cover_graph(vectors: &[Vec<Scalar>]) -> Result<DoubleCover> {
    if vectors.len() != 32 {
        return Err(Error::InvalidParams(format!(
            "expected 32 vectors, got {}",
            vectors.len()
        )));
    }
    let classes: Vec<ProjPoint> = vectors
        .iter()
        .map(|v| ProjPoint::new(v.clone()))
        .collect::<Result<_>>()?;
    let base_vertices: Vec<ProjPoint> = classes
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let base = build_graph(&base_vertices)?;
    let projection: Vec<usize> = classes
        .iter()
        .map(|c| base_vertices.binary_search(c).unwrap())
        .collect();
    let mut fibers = vec![Vec::new(); 16];
    for (i, &b) in projection.iter().enumerate() {
        fibers[b].push(i);
    }
    if fibers.iter().any(|f| f.len() != 2) {
        return Err(Error::Certificate("fibres are not pairs +-v".into()));
    }

    let edges = base.edges();
    let edge_index: BTreeMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let tri_rows: Vec<u64> = base
        .triangles()
        .iter()
        .map(|t| {
            [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
                .iter()
                .fold(0u64, |acc, e| acc | 1 << edge_index[e])
        })
        .collect();
    let cocycles = gf2_nullspace(&tri_rows, edges.len());
    let mut coboundaries = Vec::new();
    for v in 0..16 {
        let d = edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| i == v || j == v)
            .fold(0u64, |acc, (k, _)| acc | 1 << k);
        gf2_reduce(&mut coboundaries, d);
    }
    let voltage = cocycles
        .iter()
        .copied()
        .find(|&c| gf2_reduce(&mut coboundaries.clone(), c))
        .ok_or_else(|| Error::Certificate("every cocycle is a coboundary".into()))?;

    // Reference lift of each base vertex: its canonical vector.
    let sign_of = |i: usize| -> i64 {
        let v = &vectors[i];
        let c = base_vertices[projection[i]].coords();
        let k = c.iter().position(|x| !x.is_zero()).unwrap();
        if (&v[k] / &c[k]).signum() == Some(1) {
            1
        } else {
            -1
        }
    };
    let signs: Vec<i64> = (0..32).map(sign_of).collect();
    let n = 32;
    let mut adj = vec![vec![false; n]; n];
    for (k, &(p, q)) in edges.iter().enumerate() {
        let flip = if voltage >> k & 1 == 1 { -1 } else { 1 };
        for &x in &fibers[p] {
            for &y in &fibers[q] {
                if signs[x] * signs[y] == flip {
                    adj[x][y] = true;
                    adj[y][x] = true;
                }
            }
        }
    }
    let graph = KGraph {
        vertices: classes,
        adj,
    };
    let cover_edges = graph.edges();
    let all_edges_orthogonal = cover_edges
        .iter()
        .all(|&(i, j)| dot(&vectors[i], &vectors[j]).is_zero());
    let covering = (0..n).all(|x| {
        let images: BTreeSet<usize> = (0..n)
            .filter(|&y| graph.adj[x][y])
            .map(|y| projection[y])
            .collect();
        let base_nbrs: BTreeSet<usize> = (0..16).filter(|&w| base.adj[projection[x]][w]).collect();
        let degree = (0..n).filter(|&y| graph.adj[x][y]).count();
        images == base_nbrs && degree == base_nbrs.len()
    });
    let tris = graph.triangles().len();
    let report = CoverReport {
        vertices: n,
        edges: cover_edges.len(),
        triangles: tris,
        euler: n as i64 - cover_edges.len() as i64 + tris as i64,
        connected: graph.is_connected(),
        covering,
        all_edges_orthogonal,
        cocycle_dimension: cocycles.len(),
        coboundary_dimension: coboundaries.len(),
    };
    Ok(DoubleCover {
        vectors: vectors.to_vec(),
        graph,
        projection,
        voltages: (0..edges.len()).map(|k| (voltage >> k & 1) as u8).collect(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_triangle_boundary() {
        // One triangle on edges 0,1,2: cocycles have even weight.
        let ns = gf2_nullspace(&[0b111], 3);
        assert_eq!(ns.len(), 2);
        assert!(ns.iter().all(|v| v.count_ones() % 2 == 0));
    }

    #[test]
    fn empty_graph_dot() {
        let pts: Vec<ProjPoint> = [[1, 1], [1, 2]]
            .iter()
            .map(|p| ProjPoint::from_i64(p).unwrap())
            .collect();
        let g = orthogonality_graph(&pts);
        let dot = g.to_dot("G");
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 0);
        assert_eq!(dot.lines().filter(|l| l.contains("label")).count(), 2);
    }

    #[test]
    fn wrong_vertex_count() {
        let pts: Vec<ProjPoint> = (1..16)
            .map(|i| ProjPoint::from_i64(&[1, i, 0, 0]).unwrap())
            .collect();
        assert!(build_graph(&pts).is_err());
    }
}
