//! Named instances, seeded random instance generators, and exhaustive
//! small-graph enumeration. Everything here is deterministic: random
//! generation is keyed by an explicit seed.

use crate::graph::{ArcCost, CostFunction, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The Petersen graph: outer 5-cycle, inner pentagram, five spokes.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        edges.push((i, i + 5));
    }
    for i in 0..5 {
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).unwrap()
}

pub fn k4() -> Graph {
    Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

pub fn triangle() -> Graph {
    Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
}

pub fn digon() -> Graph {
    Graph::new(2, vec![(0, 1), (0, 1)]).unwrap()
}

/// Seeded random 2-edge-connected multigraph: a random spanning cycle
/// plus extra random chords/parallels. Guaranteed 2-edge-connected.
pub fn random_two_edge_connected(seed: u64, n: usize, m: usize) -> Graph {
    assert!(n >= 2);
    assert!(m >= n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((order[i], order[(i + 1) % n]));
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n);
        if v == u {
            v = (v + 1) % n;
        }
        edges.push((u, v));
    }
    let g = Graph::new(n, edges).unwrap();
    debug_assert!(g.is_two_edge_connected());
    g
}

/// Seeded random costs in `[0, max_cost]`, optionally symmetric, with an
/// optional probability of marking one direction of an edge forbidden.
pub fn random_costs(
    seed: u64,
    g: &Graph,
    max_cost: i64,
    symmetric: bool,
    forbidden_prob: f64,
) -> CostFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut entries = Vec::with_capacity(g.edge_count());
    for _ in 0..g.edge_count() {
        let a = rng.gen_range(0..=max_cost);
        if symmetric {
            entries.push((ArcCost::Finite(a), ArcCost::Finite(a)));
        } else {
            let b = rng.gen_range(0..=max_cost);
            let mut fwd = ArcCost::Finite(a);
            let mut bwd = ArcCost::Finite(b);
            if forbidden_prob > 0.0 && rng.gen_bool(forbidden_prob) {
                if rng.gen_bool(0.5) {
                    fwd = ArcCost::Forbidden;
                } else {
                    bwd = ArcCost::Forbidden;
                }
            }
            entries.push((fwd, bwd));
        }
    }
    CostFunction::new(g, entries).unwrap()
}

/// All connected 2-edge-connected multigraphs with at most `max_m` edges,
/// up to isomorphism-lite deduplication (canonical sorted degree/edge
/// signature). Vertex counts range over 2..=max_m since 2-edge-connected
/// graphs need m >= n.
pub fn enumerate_two_edge_connected(max_m: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for n in 2..=max_m {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        // Multiset counts per vertex pair; at most max_m edges total.
        let mut counts = vec![0usize; pairs.len()];
        loop {
            let m: usize = counts.iter().sum();
            if m >= n && m <= max_m {
                let mut edges = Vec::with_capacity(m);
                for (i, &p) in pairs.iter().enumerate() {
                    for _ in 0..counts[i] {
                        edges.push(p);
                    }
                }
                // Every vertex must appear: degree >= 2 is necessary.
                let g = Graph::new(n, edges).unwrap();
                if (0..n).all(|v| g.degree(v) >= 2) && g.is_two_edge_connected() {
                    if seen.insert(canonical_signature(&g)) {
                        out.push(g);
                    }
                }
            }
            // Advance the multiset odometer, capped so the total stays small.
            let mut i = 0;
            loop {
                if i == counts.len() {
                    if n == max_m {
                        return out;
                    }
                    counts.clear();
                    break;
                }
                counts[i] += 1;
                if counts.iter().sum::<usize>() <= max_m {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if counts.is_empty() {
                break;
            }
        }
    }
    out
}

/// Cheap canonical form: minimum edge-multiset signature over all vertex
/// permutations. Exponential in n but the enumeration only runs on tiny
/// graphs.
fn canonical_signature(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut sig: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p[u], p[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        sig.sort_unstable();
        if best.as_ref().map_or(true, |b| sig < *b) {
            best = Some(sig);
        }
    });
    best.unwrap()
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}
