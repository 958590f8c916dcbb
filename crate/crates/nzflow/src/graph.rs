//! Multigraph representation, bidirection, cuts, and connectivity checks.
//!
//! Edges are identified by their position in the edge list, so parallel
//! edges are distinct objects with stable ids. Every edge `e = (u, v)`
//! carries two opposite arcs: the forward arc `u -> v` and the backward
//! arc `v -> u`, addressed as [`ArcRef`]s.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {0} out of range (n = {1})")]
    IndexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("edge index {0} out of range (m = {1})")]
    EdgeOutOfRange(usize, usize),
    #[error("negative cost {0} on an arc")]
    NegativeCost(i64),
    #[error("expected one cost entry pair per edge: got {0}, graph has {1} edges")]
    CostLengthMismatch(usize, usize),
}

/// Direction of an arc relative to its underlying edge `(tail, head)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// tail -> head, the arc `e+`.
    Forward,
    /// head -> tail, the arc `e-`.
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    /// +1 for forward, -1 for backward.
    pub fn sign(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// One of the two arcs of an edge in the bidirected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcRef {
    pub edge: usize,
    pub dir: Direction,
}

impl ArcRef {
    pub fn forward(edge: usize) -> ArcRef {
        ArcRef {
            edge,
            dir: Direction::Forward,
        }
    }

    pub fn backward(edge: usize) -> ArcRef {
        ArcRef {
            edge,
            dir: Direction::Backward,
        }
    }

    pub fn reversed(self) -> ArcRef {
        ArcRef {
            edge: self.edge,
            dir: self.dir.reversed(),
        }
    }
}

/// Undirected multigraph with stable integer edge ids. Self-loops are
/// rejected at construction; parallel edges are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph, GraphError> {
        for &(u, v) in &edges {
            if u >= n {
                return Err(GraphError::IndexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::IndexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    /// (source, target) of an arc: the forward arc runs tail -> head.
    pub fn arc_endpoints(&self, arc: ArcRef) -> (usize, usize) {
        let (u, v) = self.edges[arc.edge];
        match arc.dir {
            Direction::Forward => (u, v),
            Direction::Backward => (v, u),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Edge ids incident to `v`, in edge order. Parallel edges appear once
    /// per id; an edge incident to `v` at both ends cannot exist (no loops).
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                a == v || b == v
            })
            .collect()
    }

    /// True iff the graph is connected and has no bridge.
    ///
    /// A single vertex (with no possible edges) counts as 2-edge-connected,
    /// as does the empty graph.
    pub fn is_two_edge_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let adj = self.adjacency();
        // Connectivity first: every vertex reachable from 0.
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return false;
        }
        self.bridges().is_empty()
    }

    /// Bridge edges found by a lowpoint DFS. Skipping only the tree edge
    /// (by id, not by endpoint) keeps parallel edges from being reported.
    pub fn bridges(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![usize::MAX; self.n];
        let mut bridges = Vec::new();
        let mut timer = 0usize;
        // Iterative DFS: (vertex, parent edge, adjacency cursor).
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, pe, ref mut cursor)) = stack.last_mut() {
                if *cursor < adj[u].len() {
                    let (w, e) = adj[u][*cursor];
                    *cursor += 1;
                    if e == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[u]);
                        if low[u] > disc[p] {
                            bridges.push(pe);
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Edges with exactly one endpoint inside `u_set`, sorted by id.
    pub fn cut_edges(&self, u_set: &VertexSet) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                u_set.contains(a) != u_set.contains(b)
            })
            .collect()
    }

    /// Arcs of oriented edges whose chosen direction exits `u_set`;
    /// undecided edges are excluded.
    pub fn out_arcs(&self, o: &PartialOrientation, u_set: &VertexSet) -> Vec<ArcRef> {
        let mut arcs = Vec::new();
        for e in 0..self.edges.len() {
            if let Some(dir) = o.dir(e) {
                let arc = ArcRef { edge: e, dir };
                let (src, dst) = self.arc_endpoints(arc);
                if u_set.contains(src) && !u_set.contains(dst) {
                    arcs.push(arc);
                }
            }
        }
        arcs
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }
}

/// Vertex subset as a bit set, for graphs with at most 128 vertices.
/// Cheap enough that brute-force cut enumeration over 2^n subsets stays
/// practical for n <= 20.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    bits: u128,
}

pub const MAX_BITSET_VERTICES: usize = 128;

impl VertexSet {
    pub fn empty() -> VertexSet {
        VertexSet { bits: 0 }
    }

    pub fn from_bits(bits: u128) -> VertexSet {
        VertexSet { bits }
    }

    pub fn singleton(v: usize) -> VertexSet {
        assert!(v < MAX_BITSET_VERTICES);
        VertexSet { bits: 1u128 << v }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(vs: I) -> VertexSet {
        let mut s = VertexSet::empty();
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < MAX_BITSET_VERTICES);
        self.bits |= 1u128 << v;
    }

    pub fn contains(&self, v: usize) -> bool {
        v < MAX_BITSET_VERTICES && self.bits >> v & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Complement relative to the vertex set {0, .., n-1}.
    pub fn complement(&self, n: usize) -> VertexSet {
        assert!(n <= MAX_BITSET_VERTICES);
        let all = if n == MAX_BITSET_VERTICES {
            !0u128
        } else {
            (1u128 << n) - 1
        };
        VertexSet {
            bits: all & !self.bits,
        }
    }

    /// Nonempty and not the whole vertex set {0, .., n-1}.
    pub fn is_proper_nonempty(&self, n: usize) -> bool {
        !self.is_empty() && self.len() < n
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_BITSET_VERTICES).filter(move |&v| self.contains(v))
    }
}

/// Full orientation: one direction per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    dirs: Vec<Direction>,
}

impl Orientation {
    pub fn new(dirs: Vec<Direction>) -> Orientation {
        Orientation { dirs }
    }

    pub fn all_forward(m: usize) -> Orientation {
        Orientation {
            dirs: vec![Direction::Forward; m],
        }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dir(&self, edge: usize) -> Direction {
        self.dirs[edge]
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn arc(&self, edge: usize) -> ArcRef {
        ArcRef {
            edge,
            dir: self.dirs[edge],
        }
    }

    pub fn reversed(&self) -> Orientation {
        Orientation {
            dirs: self.dirs.iter().map(|d| d.reversed()).collect(),
        }
    }

    pub fn to_partial(&self) -> PartialOrientation {
        PartialOrientation {
            dirs: self.dirs.iter().map(|&d| Some(d)).collect(),
        }
    }
}

/// Orientation of a subset of edges; `None` marks an undecided edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrientation {
    dirs: Vec<Option<Direction>>,
}

impl PartialOrientation {
    pub fn new(dirs: Vec<Option<Direction>>) -> PartialOrientation {
        PartialOrientation { dirs }
    }

    pub fn undecided(m: usize) -> PartialOrientation {
        PartialOrientation {
            dirs: vec![None; m],
        }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dir(&self, edge: usize) -> Option<Direction> {
        self.dirs[edge]
    }

    pub fn set(&mut self, edge: usize, dir: Direction) {
        self.dirs[edge] = Some(dir);
    }

    pub fn clear(&mut self, edge: usize) {
        self.dirs[edge] = None;
    }

    /// Ids of oriented edges, ascending.
    pub fn oriented_edges(&self) -> Vec<usize> {
        (0..self.dirs.len())
            .filter(|&e| self.dirs[e].is_some())
            .collect()
    }

    pub fn oriented_count(&self) -> usize {
        self.dirs.iter().filter(|d| d.is_some()).count()
    }

    /// All edges oriented -> a full Orientation.
    pub fn complete(&self) -> Option<Orientation> {
        let dirs: Option<Vec<Direction>> = self.dirs.iter().copied().collect();
        dirs.map(Orientation::new)
    }

    /// True iff every decided edge of `self` has the same direction in `other`.
    pub fn is_refined_by(&self, other: &PartialOrientation) -> bool {
        self.dirs.len() == other.dirs.len()
            && self
                .dirs
                .iter()
                .zip(&other.dirs)
                .all(|(a, b)| a.is_none() || a == b)
    }
}

/// Cost of a single arc: a finite nonnegative integer or forbidden.
/// Forbidden arcs must be excluded from any feasible support; there is
/// no numeric "infinity" anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcCost {
    Finite(i64),
    Forbidden,
}

impl ArcCost {
    pub fn finite(&self) -> Option<i64> {
        match self {
            ArcCost::Finite(c) => Some(*c),
            ArcCost::Forbidden => None,
        }
    }

    pub fn is_forbidden(&self) -> bool {
        matches!(self, ArcCost::Forbidden)
    }
}

/// Nonnegative integer cost per arc (two entries per edge), possibly
/// asymmetric, with a forbidden-arc marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostFunction {
    costs: Vec<(ArcCost, ArcCost)>,
}

impl CostFunction {
    pub fn new(g: &Graph, costs: Vec<(ArcCost, ArcCost)>) -> Result<CostFunction, GraphError> {
        if costs.len() != g.edge_count() {
            return Err(GraphError::CostLengthMismatch(costs.len(), g.edge_count()));
        }
        for &(f, b) in &costs {
            for c in [f, b] {
                if let ArcCost::Finite(x) = c {
                    if x < 0 {
                        return Err(GraphError::NegativeCost(x));
                    }
                }
            }
        }
        Ok(CostFunction { costs })
    }

    pub fn uniform(m: usize, c: i64) -> CostFunction {
        assert!(c >= 0);
        CostFunction {
            costs: vec![(ArcCost::Finite(c), ArcCost::Finite(c)); m],
        }
    }

    pub fn unit(m: usize) -> CostFunction {
        CostFunction::uniform(m, 1)
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn arc_cost(&self, arc: ArcRef) -> ArcCost {
        let (f, b) = self.costs[arc.edge];
        match arc.dir {
            Direction::Forward => f,
            Direction::Backward => b,
        }
    }

    pub fn entries(&self) -> &[(ArcCost, ArcCost)] {
        &self.costs
    }

    /// Forward = backward on every edge and no forbidden entry.
    pub fn is_symmetric(&self) -> bool {
        self.costs.iter().all(|&(f, b)| match (f, b) {
            (ArcCost::Finite(a), ArcCost::Finite(c)) => a == c,
            _ => false,
        })
    }

    /// The common cost of both arcs of `edge`; only meaningful when symmetric.
    pub fn symmetric_cost(&self, edge: usize) -> i64 {
        match self.costs[edge].0 {
            ArcCost::Finite(c) => c,
            ArcCost::Forbidden => panic!("symmetric_cost on a forbidden arc"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn build_graph_examples() {
        let t = triangle();
        assert_eq!(t.edge_count(), 3);
        assert!(Graph::new(2, vec![(0, 1), (0, 1)]).is_ok());
        assert_eq!(Graph::new(2, vec![(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::new(2, vec![(0, 3)]),
            Err(GraphError::IndexOutOfRange(3, 2))
        );
    }

    #[test]
    fn two_edge_connectivity() {
        assert!(triangle().is_two_edge_connected());
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(!path.is_two_edge_connected());
        let digon = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(digon.is_two_edge_connected());
        let single = Graph::new(1, vec![]).unwrap();
        assert!(single.is_two_edge_connected());
        let disconnected = Graph::new(4, vec![(0, 1), (0, 1), (2, 3), (2, 3)]).unwrap();
        assert!(!disconnected.is_two_edge_connected());
        assert!(crate::corpus::petersen().is_two_edge_connected());
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = Graph::new(3, vec![(0, 1), (0, 1), (1, 2), (1, 2)]).unwrap();
        assert!(g.bridges().is_empty());
        let g = Graph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.bridges(), vec![2]);
    }

    #[test]
    fn cut_edges_examples() {
        let t = triangle();
        assert_eq!(t.cut_edges(&VertexSet::singleton(0)), vec![0, 2]);
        assert_eq!(t.cut_edges(&VertexSet::empty()), Vec::<usize>::new());
        let digon = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(digon.cut_edges(&VertexSet::singleton(0)), vec![0, 1]);
    }

    #[test]
    fn out_arcs_examples() {
        let t = triangle();
        // 0 -> 1 -> 2 -> 0: every edge forward.
        let o = Orientation::all_forward(3).to_partial();
        assert_eq!(
            t.out_arcs(&o, &VertexSet::singleton(0)),
            vec![ArcRef::forward(0)]
        );
        assert_eq!(
            t.out_arcs(&o, &VertexSet::from_iter([0, 1])),
            vec![ArcRef::forward(1)]
        );
        let undecided = PartialOrientation::undecided(3);
        assert!(t.out_arcs(&undecided, &VertexSet::singleton(0)).is_empty());
    }

    #[test]
    fn cut_matches_out_plus_in() {
        let g = Graph::new(
            5,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)],
        )
        .unwrap();
        let o = Orientation::all_forward(g.edge_count());
        for bits in 0..1u128 << g.vertex_count() {
            let u = VertexSet::from_bits(bits);
            let cut = g.cut_edges(&u).len();
            let out = g.out_arcs(&o.to_partial(), &u).len();
            let back = g.out_arcs(&o.reversed().to_partial(), &u).len();
            assert_eq!(cut, out + back);
            assert_eq!(cut, g.cut_edges(&u.complement(g.vertex_count())).len());
        }
    }

    #[test]
    fn bridgeless_agrees_with_edge_removal_brute_force() {
        // All graphs on <= 4 vertices with <= 8 edges (multiplicity <= 3).
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut graphs_checked = 0usize;
        for n in 2..=4usize {
            let avail: Vec<_> = pairs.iter().filter(|&&(a, b)| a < n && b < n).collect();
            let mut counts = vec![0usize; avail.len()];
            'odometer: loop {
                let mut edges = Vec::new();
                for (i, &&p) in avail.iter().enumerate() {
                    for _ in 0..counts[i] {
                        edges.push(p);
                    }
                }
                if edges.len() >= 2 && edges.len() <= 8 {
                    let g = Graph::new(n, edges.clone()).unwrap();
                    let brute = is_connected(&g)
                        && (0..edges.len()).all(|skip| {
                            let rest: Vec<_> = edges
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &e)| e)
                                .collect();
                            is_connected(&Graph::new(n, rest).unwrap())
                        });
                    assert_eq!(g.is_two_edge_connected(), brute, "graph {edges:?}");
                    graphs_checked += 1;
                }
                // Next multiset with entries <= 3.
                let mut i = 0;
                loop {
                    if i == counts.len() {
                        break 'odometer;
                    }
                    counts[i] += 1;
                    if counts[i] <= 3 {
                        break;
                    }
                    counts[i] = 0;
                    i += 1;
                }
            }
        }
        assert_eq!(
            graphs_checked, 1812,
            "enumeration must cover all three sizes"
        );
    }

    fn is_connected(g: &Graph) -> bool {
        if g.vertex_count() == 0 {
            return true;
        }
        let adj = g.adjacency();
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
