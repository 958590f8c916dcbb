//! Constructive nowhere-zero 6-flow on 2-edge-connected multigraphs, the
//! Eulerian 2-flow special case, and a brute-force minimum-cost oracle
//! for small instances.
//!
//! The 6-flow construction reduces the graph to 3-edge-connected pieces
//! (suppressing degree-2 vertices and splitting or contracting across
//! 2-edge-cuts), then runs a growth procedure: starting from one vertex,
//! repeatedly absorb either a single vertex with two edges into the grown
//! part or a connected even subgraph (union of two edge-disjoint trails)
//! with two attachment edges. Peeling the growth order backwards yields a
//! mod-3 circulation that is nonzero on every edge outside the even
//! pieces; the pieces carry an Eulerian +-1 flow. Converting the mod-3
//! circulation to an integer 3-flow and composing gives values in
//! [-5, -1] u [1, 5]. The output is re-verified before being returned.

use crate::circulation::maxflow::MaxFlow;
use crate::flow::{compose_nowhere_zero, Flow};
use crate::graph::{ArcCost, ArcRef, CostFunction, Direction, Graph};
use crate::lp::KBound;
use crate::verify::verify_nowhere_zero_k_flow;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Nz6Error {
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BruteForceError {
    #[error("search budget exceeded ({0} nodes)")]
    BudgetExceeded(u64),
}

/// Nowhere-zero 6-flow on a 2-edge-connected multigraph; the result is
/// checked against the independent verifier before being returned.
pub fn nz6_flow(g: &Graph) -> Result<Flow, Nz6Error> {
    if !g.is_two_edge_connected() {
        return Err(Nz6Error::NotTwoEdgeConnected);
    }
    let values = nz6_values(g);
    let f = Flow::new(g, values).expect("construction conserves flow");
    assert_eq!(
        verify_nowhere_zero_k_flow(g, &f, Some(6)),
        Ok(()),
        "constructed flow failed verification"
    );
    Ok(f)
}

/// All-degrees-even graphs carry an all-+-1 flow along Eulerian circuits;
/// everything else has none.
pub fn nz2_or_none(g: &Graph) -> Option<Flow> {
    if (0..g.vertex_count()).any(|v| g.degree(v) % 2 == 1) {
        return None;
    }
    let mut values = vec![0i64; g.edge_count()];
    let adj = g.adjacency();
    let mut used = vec![false; g.edge_count()];
    for start in 0..g.vertex_count() {
        if adj[start].iter().all(|&(_, e)| used[e]) {
            continue;
        }
        for (from, edge) in eulerian_circuit(g, &adj, &mut used, start) {
            let (tail, _) = g.endpoints(edge);
            values[edge] = if tail == from { 1 } else { -1 };
        }
    }
    let f = Flow::new(g, values).expect("eulerian orientation conserves");
    debug_assert!(f.len() == 0 || verify_nowhere_zero_k_flow(g, &f, Some(2)).is_ok());
    Some(f)
}

/// Hierholzer circuit over the unused edges reachable from `start`;
/// returns (from_vertex, edge) steps.
fn eulerian_circuit(
    g: &Graph,
    adj: &[Vec<(usize, usize)>],
    used: &mut [bool],
    start: usize,
) -> Vec<(usize, usize)> {
    let mut cursor = vec![0usize; g.vertex_count()];
    let mut stack = vec![start];
    let mut trail_edges: Vec<usize> = Vec::new();
    let mut circuit: Vec<(usize, usize)> = Vec::new();
    while let Some(&v) = stack.last() {
        let mut advanced = false;
        while cursor[v] < adj[v].len() {
            let (w, e) = adj[v][cursor[v]];
            cursor[v] += 1;
            if !used[e] {
                used[e] = true;
                stack.push(w);
                trail_edges.push(e);
                advanced = true;
                break;
            }
        }
        if !advanced {
            stack.pop();
            if let (Some(&prev), Some(e)) = (stack.last(), trail_edges.pop()) {
                circuit.push((prev, e));
            }
        }
    }
    circuit.reverse();
    circuit
}

// ---------------------------------------------------------------------
// Reduction tower: small cases, degree-2 vertices, 2-edge-cuts.
// ---------------------------------------------------------------------

fn nz6_values(g: &Graph) -> Vec<i64> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if m == 0 {
        return Vec::new();
    }
    if n == 2 {
        return parallel_class_values(g);
    }
    if let Some(u) = (0..n).find(|&v| g.degree(v) == 2) {
        return suppress_degree_two(g, u);
    }
    if let Some((e, f)) = find_two_edge_cut(g) {
        return split_two_edge_cut(g, e, f);
    }
    seymour_construct(g)
}

/// Two vertices joined by p >= 2 parallel edges: signed values summing to
/// zero with every |value| in [1, 2].
fn parallel_class_values(g: &Graph) -> Vec<i64> {
    let m = g.edge_count();
    assert!(m >= 2);
    // Relative to a common direction: alternate +-1, patching odd counts
    // with a (1, 1, -2) block.
    let mut rel = vec![0i64; m];
    if m % 2 == 0 {
        for (i, r) in rel.iter_mut().enumerate() {
            *r = if i % 2 == 0 { 1 } else { -1 };
        }
    } else {
        rel[0] = 1;
        rel[1] = 1;
        rel[2] = -2;
        for i in 3..m {
            rel[i] = if i % 2 == 1 { 1 } else { -1 };
        }
    }
    let (a, _) = g.endpoints(0);
    (0..m)
        .map(|e| {
            let (t, _) = g.endpoints(e);
            if t == a {
                rel[e]
            } else {
                -rel[e]
            }
        })
        .collect()
}

/// Removes a degree-2 vertex: a pendant digon gets a local unit
/// circulation; otherwise the two incident edges are replaced by a single
/// edge whose recursive value routes through the suppressed vertex.
fn suppress_degree_two(g: &Graph, u: usize) -> Vec<i64> {
    let incident = g.incident_edges(u);
    assert_eq!(incident.len(), 2);
    let (e1, e2) = (incident[0], incident[1]);
    let other = |e: usize| {
        let (a, b) = g.endpoints(e);
        if a == u {
            b
        } else {
            a
        }
    };
    let (a, b) = (other(e1), other(e2));

    let keep: Vec<bool> = (0..g.vertex_count()).map(|v| v != u).collect();
    let sub = induced_subgraph(g, &keep);

    if a == b {
        // Pendant digon: unit circulation around u, rest independent.
        let inner = nz6_values(&sub.graph);
        let mut values = vec![0i64; g.edge_count()];
        for (sub_e, &orig_e) in sub.edge_to_parent.iter().enumerate() {
            values[orig_e] = inner[sub_e];
        }
        // Route one unit a -> u -> a.
        values[e1] = if g.endpoints(e1).0 == a { 1 } else { -1 };
        values[e2] = if g.endpoints(e2).0 == u { 1 } else { -1 };
        return values;
    }

    // Replace the path a - u - b by a new edge (a, b).
    let mut edges: Vec<(usize, usize)> = sub.graph.edges().to_vec();
    edges.push((sub.vertex_to_sub[a].unwrap(), sub.vertex_to_sub[b].unwrap()));
    let reduced = Graph::new(sub.graph.vertex_count(), edges).unwrap();
    let inner = nz6_values(&reduced);
    let mut values = vec![0i64; g.edge_count()];
    for (sub_e, &orig_e) in sub.edge_to_parent.iter().enumerate() {
        values[orig_e] = inner[sub_e];
    }
    let v = inner[reduced.edge_count() - 1];
    // v flows a -> u -> b when positive.
    values[e1] = if g.endpoints(e1).0 == a { v } else { -v };
    values[e2] = if g.endpoints(e2).0 == u { v } else { -v };
    values
}

/// Any pair {e, f} whose removal disconnects the graph, or None when the
/// graph is 3-edge-connected.
fn find_two_edge_cut(g: &Graph) -> Option<(usize, usize)> {
    for e in 0..g.edge_count() {
        let rest: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &p)| p)
            .collect();
        let mut bridges = Graph::new(g.vertex_count(), rest).unwrap().bridges();
        if let Some(b) = bridges.pop() {
            // Bridge indices in the reduced graph shift past e.
            let b = if b >= e { b + 1 } else { b };
            return Some((e, b));
        }
    }
    None
}

fn split_two_edge_cut(g: &Graph, e: usize, f: usize) -> Vec<i64> {
    let (eu, ev) = g.endpoints(e);
    let (fu, fv) = g.endpoints(f);
    if (eu.min(ev), eu.max(ev)) == (fu.min(fv), fu.max(fv)) {
        // Parallel pair forming the whole cut: both sides are independent
        // 2-edge-connected graphs plus a unit circulation through e, f.
        let side = component_without(g, e, f, eu);
        let mut values = vec![0i64; g.edge_count()];
        for keep_side in [true, false] {
            let keep: Vec<bool> = (0..g.vertex_count())
                .map(|v| side[v] == keep_side)
                .collect();
            let sub = induced_subgraph(g, &keep);
            if sub.graph.edge_count() == 0 {
                continue;
            }
            let inner = nz6_values(&sub.graph);
            for (sub_e, &orig_e) in sub.edge_to_parent.iter().enumerate() {
                values[orig_e] = inner[sub_e];
            }
        }
        values[e] = if g.endpoints(e).0 == eu { 1 } else { -1 };
        values[f] = if g.endpoints(f).0 == ev { 1 } else { -1 };
        return values;
    }

    // Contract e = (eu, ev): merge ev into eu. No other edge is parallel
    // to e (it would enlarge the 2-cut), so no loops appear.
    let (u, v) = (eu, ev);
    let remap = |w: usize| -> usize {
        let w = if w == v { u } else { w };
        if w > v {
            w - 1
        } else {
            w
        }
    };
    let mut edges = Vec::with_capacity(g.edge_count() - 1);
    let mut edge_map = Vec::with_capacity(g.edge_count() - 1);
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if i == e {
            continue;
        }
        edges.push((remap(a), remap(b)));
        edge_map.push(i);
    }
    let contracted = Graph::new(g.vertex_count() - 1, edges).unwrap();
    let inner = nz6_values(&contracted);
    let mut values = vec![0i64; g.edge_count()];
    for (sub_e, &orig_e) in edge_map.iter().enumerate() {
        values[orig_e] = inner[sub_e];
    }
    // The contracted flow conserves at the merged vertex; the balancing
    // value at u equals the flow on the cut partner f, so it lands in
    // [-5, -1] u [1, 5] automatically.
    let mut imbalance = 0i64;
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if i == e {
            continue;
        }
        if a == u {
            imbalance += values[i];
        }
        if b == u {
            imbalance -= values[i];
        }
    }
    values[e] = if g.endpoints(e).0 == u {
        -imbalance
    } else {
        imbalance
    };
    assert!(values[e] != 0 && values[e].abs() <= 5);
    values
}

/// Vertex membership of the component of `v0` in g - e - f.
fn component_without(g: &Graph, e: usize, f: usize, v0: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    seen[v0] = true;
    let mut stack = vec![v0];
    while let Some(u) = stack.pop() {
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if i == e || i == f {
                continue;
            }
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

struct SubgraphMap {
    graph: Graph,
    edge_to_parent: Vec<usize>,
    vertex_to_sub: Vec<Option<usize>>,
}

fn induced_subgraph(g: &Graph, keep: &[bool]) -> SubgraphMap {
    let mut vertex_to_sub = vec![None; g.vertex_count()];
    let mut count = 0usize;
    for v in 0..g.vertex_count() {
        if keep[v] {
            vertex_to_sub[v] = Some(count);
            count += 1;
        }
    }
    let mut edges = Vec::new();
    let mut edge_to_parent = Vec::new();
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if let (Some(x), Some(y)) = (vertex_to_sub[a], vertex_to_sub[b]) {
            edges.push((x, y));
            edge_to_parent.push(i);
        }
    }
    SubgraphMap {
        graph: Graph::new(count, edges).unwrap(),
        edge_to_parent,
        vertex_to_sub,
    }
}

// ---------------------------------------------------------------------
// 3-edge-connected construction.
// ---------------------------------------------------------------------

struct Piece {
    vertices: Vec<usize>,
    /// Even connected edge set (empty for singleton pieces).
    edges: Vec<usize>,
}

fn seymour_construct(g: &Graph) -> Vec<i64> {
    let pieces = grow_pieces(g);
    let psi = assign_mod3(g, &pieces);
    let f3 = mod3_to_integer_flow(g, &psi);
    let f2 = pieces_two_flow(g, &pieces);
    let f2_flow = Flow::new(g, f2).expect("eulerian piece flow conserves");
    let f3_flow = Flow::new(g, f3).expect("mod-3 lift conserves");
    let composed =
        compose_nowhere_zero(&f2_flow, 2, &f3_flow, 3).expect("piece edges cover the mod-3 zeros");
    composed.values().to_vec()
}

/// Growth procedure on a 3-edge-connected graph: vertex-disjoint pieces
/// covering V, each later piece attached to the union of earlier ones by
/// at least two edges; non-singleton pieces are connected even subgraphs.
fn grow_pieces(g: &Graph) -> Vec<Piece> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut covered = vec![false; n];
    covered[0] = true;
    let mut pieces = vec![Piece {
        vertices: vec![0],
        edges: Vec::new(),
    }];

    while covered.iter().any(|c| !c) {
        let edges_to_covered =
            |w: usize| -> usize { adj[w].iter().filter(|&&(x, _)| covered[x]).count() };
        if let Some(w) = (0..n).find(|&w| !covered[w] && edges_to_covered(w) >= 2) {
            covered[w] = true;
            pieces.push(Piece {
                vertices: vec![w],
                edges: Vec::new(),
            });
            continue;
        }
        // Every uncovered vertex has at most one edge into the covered
        // part. Take a touching component; 3-edge-connectivity guarantees
        // it contains a bridgeless block with two attachment vertices.
        let seed = (0..n)
            .find(|&w| !covered[w] && edges_to_covered(w) >= 1)
            .expect("connected graph always touches the covered part");
        let comp = uncovered_component(g, &covered, seed);
        let keep: Vec<bool> = (0..n).map(|v| comp.contains(&v)).collect();
        let sub = induced_subgraph(g, &keep);
        let block = leaf_block_vertices(&sub.graph);
        let attached: Vec<usize> = block
            .iter()
            .map(|&sv| parent_vertex(&sub, sv))
            .filter(|&v| adj[v].iter().any(|&(x, _)| covered[x]))
            .collect();
        assert!(
            attached.len() >= 2,
            "3-edge-connectivity guarantees two attachments on a leaf block"
        );
        let (x, y) = (attached[0], attached[1]);
        let piece_edges = two_edge_disjoint_trails(g, &sub, &block, x, y);
        let mut vertices: Vec<usize> = Vec::new();
        for &e in &piece_edges {
            let (a, b) = g.endpoints(e);
            for v in [a, b] {
                if !vertices.contains(&v) {
                    vertices.push(v);
                }
            }
        }
        vertices.sort_unstable();
        for &v in &vertices {
            covered[v] = true;
        }
        pieces.push(Piece {
            vertices,
            edges: piece_edges,
        });
    }
    pieces
}

fn parent_vertex(sub: &SubgraphMap, sv: usize) -> usize {
    sub.vertex_to_sub
        .iter()
        .position(|&m| m == Some(sv))
        .expect("subgraph vertex has a parent")
}

fn uncovered_component(g: &Graph, covered: &[bool], seed: usize) -> Vec<usize> {
    let adj = g.adjacency();
    let mut seen = vec![false; g.vertex_count()];
    seen[seed] = true;
    let mut stack = vec![seed];
    let mut comp = vec![seed];
    while let Some(u) = stack.pop() {
        for &(w, _) in &adj[u] {
            if !covered[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
                comp.push(w);
            }
        }
    }
    comp.sort_unstable();
    comp
}

/// Vertices (in subgraph ids) of a bridgeless leaf block of `sub`: a
/// 2-edge-connected component incident to at most one bridge. The whole
/// graph qualifies when it has no bridges.
fn leaf_block_vertices(sub: &Graph) -> Vec<usize> {
    let bridges = sub.bridges();
    if bridges.is_empty() {
        return (0..sub.vertex_count()).collect();
    }
    let is_bridge: Vec<bool> = {
        let mut b = vec![false; sub.edge_count()];
        for &e in &bridges {
            b[e] = true;
        }
        b
    };
    // 2-edge-connected components: connectivity over non-bridge edges.
    let mut comp = vec![usize::MAX; sub.vertex_count()];
    let mut comp_count = 0usize;
    for v in 0..sub.vertex_count() {
        if comp[v] != usize::MAX {
            continue;
        }
        comp[v] = comp_count;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for (i, &(a, b)) in sub.edges().iter().enumerate() {
                if is_bridge[i] {
                    continue;
                }
                let w = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if comp[w] == usize::MAX {
                    comp[w] = comp_count;
                    stack.push(w);
                }
            }
        }
        comp_count += 1;
    }
    let mut incident_bridges = vec![0usize; comp_count];
    for &e in &bridges {
        let (a, b) = sub.endpoints(e);
        incident_bridges[comp[a]] += 1;
        incident_bridges[comp[b]] += 1;
    }
    let leaf = (0..comp_count)
        .find(|&c| incident_bridges[c] == 1)
        .expect("a bridge tree has leaves");
    (0..sub.vertex_count())
        .filter(|&v| comp[v] == leaf)
        .collect()
}

/// Union of two edge-disjoint x-y trails inside the given block, as
/// original edge ids. The union is a connected even subgraph containing
/// both attachment vertices.
fn two_edge_disjoint_trails(
    _g: &Graph,
    sub: &SubgraphMap,
    block: &[usize],
    x: usize,
    y: usize,
) -> Vec<usize> {
    let in_block: Vec<bool> = {
        let mut b = vec![false; sub.graph.vertex_count()];
        for &v in block {
            b[v] = true;
        }
        b
    };
    let sx = sub.vertex_to_sub[x].unwrap();
    let sy = sub.vertex_to_sub[y].unwrap();
    assert!(in_block[sx] && in_block[sy] && sx != sy);

    // Unit-capacity flow in both directions of each block edge; opposite
    // usage cancels afterwards.
    let mut mf = MaxFlow::<i64>::new(sub.graph.vertex_count());
    let mut arc_ids = Vec::new();
    for (i, &(a, b)) in sub.graph.edges().iter().enumerate() {
        if in_block[a] && in_block[b] {
            let fwd = mf.add_arc(a, b, 1);
            let bwd = mf.add_arc(b, a, 1);
            arc_ids.push((i, fwd, bwd));
        }
    }
    let pushed = mf.max_flow(sx, sy);
    assert!(
        pushed >= 2,
        "a 2-edge-connected block carries two disjoint trails"
    );

    // Net usage per edge: -1, 0, or +1 relative to the stored direction.
    let mut usage: Vec<i64> = vec![0; sub.graph.edge_count()];
    for &(i, fwd, bwd) in &arc_ids {
        usage[i] = mf.flow_on(fwd) - mf.flow_on(bwd);
    }
    // Trim the flow to exactly two units by walking two trails and taking
    // the union of their edges.
    let mut result = Vec::new();
    for _ in 0..2 {
        let mut v = sx;
        while v != sy {
            let (i, w) = sub
                .graph
                .edges()
                .iter()
                .enumerate()
                .find_map(|(i, &(a, b))| {
                    if usage[i] > 0 && a == v {
                        Some((i, b))
                    } else if usage[i] < 0 && b == v {
                        Some((i, a))
                    } else {
                        None
                    }
                })
                .expect("flow conservation feeds the trail");
            if usage[i] > 0 {
                usage[i] -= 1;
            } else {
                usage[i] += 1;
            }
            result.push(sub.edge_to_parent[i]);
            v = w;
        }
    }
    result.sort_unstable();
    result.dedup();
    result
}

/// Mod-3 classes per edge (value of the forward arc in {0, 1, 2}):
/// nonzero on every non-piece edge, conserving at every vertex.
fn assign_mod3(g: &Graph, pieces: &[Piece]) -> Vec<u8> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut piece_of = vec![usize::MAX; n];
    for (pi, p) in pieces.iter().enumerate() {
        for &v in &p.vertices {
            piece_of[v] = pi;
        }
    }
    let mut is_piece_edge = vec![false; m];
    for p in pieces {
        for &e in &p.edges {
            is_piece_edge[e] = true;
        }
    }

    let mut psi = vec![0u8; m];
    // Chords (both ends in one piece, not a piece edge) take class 1.
    // Cross edges are assigned when their later piece is peeled.
    let mut cross_by_high: Vec<Vec<usize>> = vec![Vec::new(); pieces.len()];
    for e in 0..m {
        if is_piece_edge[e] {
            continue;
        }
        let (a, b) = g.endpoints(e);
        let (pa, pb) = (piece_of[a], piece_of[b]);
        if pa == pb {
            psi[e] = 1;
        } else {
            cross_by_high[pa.max(pb)].push(e);
        }
    }

    // Peel from the last piece down: at piece i the edges to earlier
    // pieces are still free, and there are at least two of them, enough
    // to hit any residue mod 3.
    let piece_div = |psi: &[u8], pi: usize, piece_of: &[usize], g: &Graph| -> i64 {
        let mut d = 0i64;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if piece_of[a] == pi {
                d += psi[e] as i64;
            }
            if piece_of[b] == pi {
                d -= psi[e] as i64;
            }
        }
        d.rem_euclid(3)
    };
    for pi in (1..pieces.len()).rev() {
        let free = &cross_by_high[pi];
        assert!(
            free.len() >= 2,
            "every piece is attached by at least two edges"
        );
        for &e in &free[..free.len() - 2] {
            psi[e] = 1;
        }
        let (e1, e2) = (free[free.len() - 2], free[free.len() - 1]);
        let fixed = piece_div(&psi, pi, &piece_of, g);
        let sign = |e: usize| -> i64 {
            let (a, _) = g.endpoints(e);
            if piece_of[a] == pi {
                1
            } else {
                -1
            }
        };
        let mut done = false;
        'outer: for c1 in 1..=2i64 {
            for c2 in 1..=2i64 {
                if (fixed + sign(e1) * c1 + sign(e2) * c2).rem_euclid(3) == 0 {
                    psi[e1] = c1 as u8;
                    psi[e2] = c2 as u8;
                    done = true;
                    break 'outer;
                }
            }
        }
        assert!(done, "two free classes always reach any residue");
    }
    assert_eq!(
        piece_div(&psi, 0, &piece_of, g),
        0,
        "first piece balances automatically"
    );

    // Vertex-level correction inside each even piece, routed over a
    // spanning tree of the piece; zeros are fine here since piece edges
    // are covered by the Eulerian 2-flow.
    for p in pieces.iter().filter(|p| !p.edges.is_empty()) {
        fix_piece(g, p, &mut psi);
    }

    // Every vertex must now conserve mod 3.
    for v in 0..n {
        let mut d = 0i64;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if a == v {
                d += psi[e] as i64;
            }
            if b == v {
                d -= psi[e] as i64;
            }
        }
        assert_eq!(d.rem_euclid(3), 0, "mod-3 conservation at vertex {v}");
    }
    psi
}

/// Adjusts the classes on a piece's edges so that every piece vertex
/// conserves mod 3, via leaf-up tree routing.
fn fix_piece(g: &Graph, piece: &Piece, psi: &mut [u8]) {
    // Residual requirement at each piece vertex.
    let mut need = std::collections::HashMap::new();
    for &v in &piece.vertices {
        let mut d = 0i64;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if a == v {
                d += psi[e] as i64;
            }
            if b == v {
                d -= psi[e] as i64;
            }
        }
        need.insert(v, d.rem_euclid(3));
    }
    // Spanning tree of the piece subgraph by DFS over its edges.
    let root = piece.vertices[0];
    let mut parent_edge: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut order = vec![root];
    let mut seen: std::collections::HashSet<usize> = [root].into_iter().collect();
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &e in &piece.edges {
            let (a, b) = g.endpoints(e);
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if seen.insert(w) {
                parent_edge.insert(w, e);
                order.push(w);
                stack.push(w);
            }
        }
    }
    assert_eq!(
        order.len(),
        piece.vertices.len(),
        "piece subgraph is connected"
    );
    // Leaves first: push each vertex's requirement into its parent edge.
    for &v in order.iter().skip(1).rev() {
        let e = parent_edge[&v];
        let (a, _) = g.endpoints(e);
        // Class c on the forward arc contributes +c at the tail.
        let deficit = (3 - need[&v]).rem_euclid(3);
        let class = if a == v {
            deficit
        } else {
            (3 - deficit).rem_euclid(3)
        };
        psi[e] = class as u8;
        // Recompute the two endpoints' requirements.
        let (a, b) = g.endpoints(e);
        *need.get_mut(&a).unwrap() = (need[&a] + class).rem_euclid(3);
        *need.get_mut(&b).unwrap() = (need[&b] - class).rem_euclid(3);
        assert_eq!(need[&v], 0);
    }
    assert_eq!(need[&root], 0, "piece total divergence is zero mod 3");
}

/// Lifts a mod-3 circulation to an integer flow with the same support and
/// |values| <= 2, via a unit-capacity flow that fixes the divergence.
fn mod3_to_integer_flow(g: &Graph, psi: &[u8]) -> Vec<i64> {
    let n = g.vertex_count();
    let mut div = vec![0i64; n];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        div[a] += psi[e] as i64;
        div[b] -= psi[e] as i64;
    }
    let (s, t) = (n, n + 1);
    let mut mf = MaxFlow::<i64>::new(n + 2);
    let mut arc_of_edge = vec![usize::MAX; g.edge_count()];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if psi[e] > 0 {
            arc_of_edge[e] = mf.add_arc(a, b, 1);
        }
    }
    let mut total = 0i64;
    for v in 0..n {
        assert_eq!(div[v] % 3, 0);
        let b = div[v] / 3;
        if b > 0 {
            mf.add_arc(s, v, b);
            total += b;
        } else if b < 0 {
            mf.add_arc(v, t, -b);
        }
    }
    let pushed = mf.max_flow(s, t);
    assert_eq!(
        pushed, total,
        "a class-preserving integer lift always exists"
    );
    (0..g.edge_count())
        .map(|e| {
            if psi[e] == 0 {
                0
            } else {
                psi[e] as i64 - 3 * mf.flow_on(arc_of_edge[e])
            }
        })
        .collect()
}

/// +-1 flow along an Eulerian circuit of every piece's edge set.
fn pieces_two_flow(g: &Graph, pieces: &[Piece]) -> Vec<i64> {
    let mut values = vec![0i64; g.edge_count()];
    for p in pieces.iter().filter(|p| !p.edges.is_empty()) {
        let keep: Vec<bool> = {
            let mut k = vec![false; g.vertex_count()];
            for &v in &p.vertices {
                k[v] = true;
            }
            k
        };
        let sub = induced_subgraph(g, &keep);
        // Restrict to the piece's own edges.
        let in_piece: std::collections::HashSet<usize> = p.edges.iter().copied().collect();
        let mut edges = Vec::new();
        let mut map = Vec::new();
        for (i, &pe) in sub.edge_to_parent.iter().enumerate() {
            if in_piece.contains(&pe) {
                edges.push(sub.graph.edges()[i]);
                map.push(pe);
            }
        }
        let pg = Graph::new(sub.graph.vertex_count(), edges).unwrap();
        let adj = pg.adjacency();
        let mut used = vec![false; pg.edge_count()];
        let start = 0;
        let circuit = eulerian_circuit(&pg, &adj, &mut used, start);
        assert!(
            used.iter().all(|&u| u),
            "piece edge set is connected and even"
        );
        for (from, e) in circuit {
            let (tail, _) = pg.endpoints(e);
            values[map[e]] = if tail == from { 1 } else { -1 };
        }
    }
    values
}

// ---------------------------------------------------------------------
// Brute-force oracle.
// ---------------------------------------------------------------------

/// Exact minimum-cost nowhere-zero k-flow by depth-first assignment over
/// a cycle basis: non-tree edges are enumerated, tree edge values are
/// forced by conservation in postorder, and branches are cut by cost
/// bounds. `None` means no nowhere-zero k-flow exists.
///
/// The search iteratively deepens a cost budget starting from a
/// parity-aware lower bound (every odd-degree vertex forces an incident
/// value of magnitude at least two), so cheap optima are confirmed
/// without exploring expensive assignments. The overall budget is a node
/// counter; `BudgetExceeded` reports an instance too large for the
/// oracle rather than silently degrading.
pub fn brute_force_min_nzk(
    g: &Graph,
    c: &CostFunction,
    k: KBound,
) -> Result<Option<(Flow, i64)>, BruteForceError> {
    let m = g.edge_count();
    if m == 0 {
        return Ok(Some((Flow::zero(0), 0)));
    }
    let max_abs = match k {
        KBound::Finite(k) => {
            assert!(k >= 2);
            k - 1
        }
        // A minimum-cost nowhere-zero flow exists with per-edge values
        // bounded by six per edge of the graph; the cap keeps the search
        // finite and is far above anything an optimal solution needs.
        KBound::Unbounded => 6 * m as i64,
    };

    let search = SearchPlan::build(g, c, max_abs);
    // Base lower bound: cheapest arc per edge, plus one extra cheapest
    // unit per pair of odd-degree vertices (a heavy edge covers two).
    let odd = (0..g.vertex_count())
        .filter(|&v| g.degree(v) % 2 == 1)
        .count() as i64;
    let global_min = search.min_edge_cost.iter().copied().min().unwrap_or(0);
    let base_lb = search.min_cost_total + (odd + 1) / 2 * global_min;

    let mut nodes_used = 0u64;
    let mut extra = 0i64;
    loop {
        let budget = base_lb + extra;
        let mut state = SearchState {
            values: vec![0i64; m],
            best: None,
            nodes: nodes_used,
            lower_bound_remaining: search.min_cost_total,
            partial_cost: 0,
            budget,
            stop_at: base_lb,
            cost_pruned: false,
        };
        search.run(&mut state, 0)?;
        nodes_used = state.nodes;
        match state.best {
            Some((values, cost)) => {
                let f = Flow::new(g, values).expect("search enforces conservation");
                debug_assert!(verify_nowhere_zero_k_flow(g, &f, k.finite()).is_ok());
                return Ok(Some((f, cost)));
            }
            None if !state.cost_pruned => return Ok(None),
            None => extra = if extra == 0 { 1 } else { extra * 2 },
        }
    }
}

const NODE_BUDGET: u64 = 400_000_000;

struct SearchPlan<'a> {
    g: &'a Graph,
    c: &'a CostFunction,
    max_abs: i64,
    /// Per-processing-step: either branch on an edge or force it at a vertex.
    steps: Vec<Step>,
    min_cost_total: i64,
    min_edge_cost: Vec<i64>,
}

enum Step {
    Branch(usize),
    /// Force this edge's value from conservation at the given vertex.
    Force {
        edge: usize,
        vertex: usize,
    },
    /// Verify conservation at the root vertex.
    CheckRoot(usize),
}

struct SearchState {
    values: Vec<i64>,
    best: Option<(Vec<i64>, i64)>,
    nodes: u64,
    lower_bound_remaining: i64,
    partial_cost: i64,
    /// Hard ceiling of the current deepening round.
    budget: i64,
    /// Nothing can beat this; finding it ends the search.
    stop_at: i64,
    /// Whether any branch died on cost alone; if not, an exhausted round
    /// proves infeasibility outright.
    cost_pruned: bool,
}

impl SearchState {
    fn done(&self) -> bool {
        matches!(&self.best, Some((_, b)) if *b <= self.stop_at)
    }
}

impl<'a> SearchPlan<'a> {
    fn build(g: &'a Graph, c: &'a CostFunction, max_abs: i64) -> SearchPlan<'a> {
        let n = g.vertex_count();
        let adj = g.adjacency();
        // DFS tree from vertex 0; assume the graph is connected.
        let mut parent_edge = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &(w, e) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = e;
                    stack.push(w);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "oracle requires a connected graph");
        let is_tree: Vec<bool> = {
            let mut t = vec![false; g.edge_count()];
            for v in 1..n {
                if parent_edge[v] != usize::MAX {
                    t[parent_edge[v]] = true;
                }
            }
            t
        };
        // Postorder: process children before parents; at each vertex,
        // branch on its untouched non-tree edges, then force its parent
        // edge from conservation.
        let mut steps = Vec::new();
        let mut touched = vec![false; g.edge_count()];
        for &v in order.iter().rev() {
            for &(_, e) in &adj[v] {
                if !is_tree[e] && !touched[e] {
                    touched[e] = true;
                    steps.push(Step::Branch(e));
                }
            }
            if v != order[0] {
                steps.push(Step::Force {
                    edge: parent_edge[v],
                    vertex: v,
                });
            } else {
                steps.push(Step::CheckRoot(v));
            }
        }
        let min_edge_cost: Vec<i64> = (0..g.edge_count())
            .map(|e| {
                let fwd = c.arc_cost(ArcRef::forward(e)).finite();
                let bwd = c.arc_cost(ArcRef::backward(e)).finite();
                match (fwd, bwd) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => 0, // infeasible edge, caught during search
                }
            })
            .collect();
        let min_cost_total = min_edge_cost.iter().sum();
        SearchPlan {
            g,
            c,
            max_abs,
            steps,
            min_cost_total,
            min_edge_cost,
        }
    }

    fn edge_cost(&self, e: usize, v: i64) -> Option<i64> {
        let dir = if v > 0 {
            Direction::Forward
        } else {
            Direction::Backward
        };
        match self.c.arc_cost(ArcRef { edge: e, dir }) {
            ArcCost::Finite(c) => Some(c * v.abs()),
            ArcCost::Forbidden => None,
        }
    }

    fn run(&self, st: &mut SearchState, step: usize) -> Result<(), BruteForceError> {
        st.nodes += 1;
        if st.nodes > NODE_BUDGET {
            return Err(BruteForceError::BudgetExceeded(st.nodes));
        }
        if st.done() {
            return Ok(());
        }
        if step == self.steps.len() {
            let cost = st.partial_cost;
            if st.best.as_ref().map_or(true, |(_, b)| cost < *b) {
                st.best = Some((st.values.clone(), cost));
            }
            return Ok(());
        }
        match &self.steps[step] {
            Step::Branch(e) => {
                let e = *e;
                for mag in 1..=self.max_abs {
                    let mut any_affordable = false;
                    for v in [mag, -mag] {
                        let Some(cost) = self.edge_cost(e, v) else {
                            continue;
                        };
                        if self.affordable(st, e, cost) {
                            any_affordable = true;
                            self.descend(st, step, e, v, cost)?;
                            if st.done() {
                                return Ok(());
                            }
                        } else {
                            st.cost_pruned = true;
                        }
                    }
                    // Costs grow with magnitude; once neither direction
                    // fits the budget, no larger one will.
                    if !any_affordable {
                        break;
                    }
                }
                Ok(())
            }
            Step::Force { edge, vertex } => {
                let e = *edge;
                let needed = self.balancing_value(st, *vertex, e);
                if needed == 0 || needed.abs() > self.max_abs {
                    return Ok(());
                }
                let Some(cost) = self.edge_cost(e, needed) else {
                    return Ok(());
                };
                if !self.affordable(st, e, cost) {
                    st.cost_pruned = true;
                    return Ok(());
                }
                self.descend(st, step, e, needed, cost)
            }
            Step::CheckRoot(v) => {
                let mut div = 0i64;
                for (e, &(a, b)) in self.g.edges().iter().enumerate() {
                    if a == *v {
                        div += st.values[e];
                    }
                    if b == *v {
                        div -= st.values[e];
                    }
                }
                if div == 0 {
                    self.run(st, step + 1)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Does assigning `e` at this cost keep the optimistic total within
    /// both the round budget and the incumbent?
    fn affordable(&self, st: &SearchState, e: usize, cost: i64) -> bool {
        let optimistic = st.partial_cost + cost + st.lower_bound_remaining - self.min_edge_cost[e];
        if optimistic > st.budget {
            return false;
        }
        st.best.as_ref().map_or(true, |(_, b)| optimistic < *b)
    }

    fn descend(
        &self,
        st: &mut SearchState,
        step: usize,
        e: usize,
        v: i64,
        cost: i64,
    ) -> Result<(), BruteForceError> {
        st.values[e] = v;
        st.partial_cost += cost;
        st.lower_bound_remaining -= self.min_edge_cost[e];
        let result = self.run(st, step + 1);
        st.values[e] = 0;
        st.partial_cost -= cost;
        st.lower_bound_remaining += self.min_edge_cost[e];
        result
    }

    /// Signed value on `edge` that balances `vertex`, given every other
    /// incident edge is already assigned.
    fn balancing_value(&self, st: &SearchState, vertex: usize, edge: usize) -> i64 {
        let mut div = 0i64;
        for (e, &(a, b)) in self.g.edges().iter().enumerate() {
            if e == edge {
                continue;
            }
            if a == vertex {
                div += st.values[e];
            }
            if b == vertex {
                div -= st.values[e];
            }
        }
        let (a, _) = self.g.endpoints(edge);
        if a == vertex {
            -div
        } else {
            div
        }
    }
}
