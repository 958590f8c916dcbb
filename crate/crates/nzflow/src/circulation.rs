//! Integral circulation engines: Hoffman feasibility with lower/upper
//! bounds, min-cost circulation via successive shortest paths, and
//! negative-cycle detection.
//!
//! Feasibility is decided by the lower-bound-elimination max-flow
//! reduction; when infeasible, the max-flow min-cut yields a vertex set
//! `U` with `lower(into U) > upper(out of U)`, which callers use as a
//! cut-balancedness refutation certificate.

use crate::graph::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CirculationError {
    #[error("vertex index {0} out of range (n = {1})")]
    IndexOutOfRange(usize, usize),
    #[error("arc has lower bound {0} > upper bound {1}")]
    BadBounds(i64, i64),
    #[error("negative lower bound {0}")]
    NegativeLower(i64),
    #[error("|cost| * capacity * arc count would overflow the 62-bit budget")]
    InstanceTooLarge,
    #[error("no feasible circulation exists")]
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedArc {
    pub tail: usize,
    pub head: usize,
    pub lower: i64,
    pub upper: i64,
    pub cost: i64,
}

/// Digraph with per-arc flow bounds `[lower, upper]` and signed costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedDigraph {
    n: usize,
    arcs: Vec<BoundedArc>,
}

impl BoundedDigraph {
    pub fn new(n: usize, arcs: Vec<BoundedArc>) -> Result<BoundedDigraph, CirculationError> {
        let mut budget: i64 = 0;
        for a in &arcs {
            if a.tail >= n {
                return Err(CirculationError::IndexOutOfRange(a.tail, n));
            }
            if a.head >= n {
                return Err(CirculationError::IndexOutOfRange(a.head, n));
            }
            if a.lower < 0 {
                return Err(CirculationError::NegativeLower(a.lower));
            }
            if a.lower > a.upper {
                return Err(CirculationError::BadBounds(a.lower, a.upper));
            }
            let term = a
                .cost
                .unsigned_abs()
                .max(1)
                .checked_mul(a.upper.unsigned_abs().max(1))
                .ok_or(CirculationError::InstanceTooLarge)?;
            let term = i64::try_from(term).map_err(|_| CirculationError::InstanceTooLarge)?;
            budget = budget
                .checked_add(term)
                .filter(|&b| b < 1 << 62)
                .ok_or(CirculationError::InstanceTooLarge)?;
        }
        Ok(BoundedDigraph { n, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[BoundedArc] {
        &self.arcs
    }
}

/// Integral per-arc flow respecting a [`BoundedDigraph`]'s bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circulation {
    pub flow: Vec<i64>,
}

impl Circulation {
    pub fn cost(&self, d: &BoundedDigraph) -> i64 {
        self.flow
            .iter()
            .zip(d.arcs())
            .map(|(&f, a)| f * a.cost)
            .sum()
    }

    pub fn respects(&self, d: &BoundedDigraph) -> bool {
        if self.flow.len() != d.arcs().len() {
            return false;
        }
        if self
            .flow
            .iter()
            .zip(d.arcs())
            .any(|(&f, a)| f < a.lower || f > a.upper)
        {
            return false;
        }
        let mut div = vec![0i64; d.vertex_count()];
        for (&f, a) in self.flow.iter().zip(d.arcs()) {
            div[a.tail] += f;
            div[a.head] -= f;
        }
        div.iter().all(|&x| x == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible(Circulation),
    /// Vertex set with `lower(into U) > upper(out of U)`.
    Infeasible(VertexSet),
}

/// Hoffman feasibility: an integral circulation within bounds, or the
/// violating vertex set from the max-flow min-cut.
pub fn feasible_circulation(d: &BoundedDigraph) -> FeasibilityResult {
    let n = d.vertex_count();
    let (s, t) = (n, n + 1);
    let mut mf = maxflow::MaxFlow::<i64>::new(n + 2);
    let mut excess = vec![0i64; n];
    let mut arc_ids = Vec::with_capacity(d.arcs().len());
    for a in d.arcs() {
        arc_ids.push(mf.add_arc(a.tail, a.head, a.upper - a.lower));
        excess[a.head] += a.lower;
        excess[a.tail] -= a.lower;
    }
    let mut total = 0i64;
    for (v, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            mf.add_arc(s, v, ex);
            total += ex;
        } else if ex < 0 {
            mf.add_arc(v, t, -ex);
        }
    }
    let pushed = mf.max_flow(s, t);
    if pushed == total {
        let flow = d
            .arcs()
            .iter()
            .zip(&arc_ids)
            .map(|(a, &id)| a.lower + mf.flow_on(id))
            .collect();
        let circ = Circulation { flow };
        debug_assert!(circ.respects(d));
        FeasibilityResult::Feasible(circ)
    } else {
        let reach = mf.residual_reachable(s);
        let u_set = VertexSet::from_iter((0..n).filter(|&v| reach[v]));
        debug_assert!(certificate_violates(d, &u_set));
        FeasibilityResult::Infeasible(u_set)
    }
}

/// Recheck of the Hoffman infeasibility certificate straight from the
/// definition.
pub fn certificate_violates(d: &BoundedDigraph, u_set: &VertexSet) -> bool {
    let mut lower_in = 0i64;
    let mut upper_out = 0i64;
    for a in d.arcs() {
        let tail_in = u_set.contains(a.tail);
        let head_in = u_set.contains(a.head);
        if !tail_in && head_in {
            lower_in += a.lower;
        } else if tail_in && !head_in {
            upper_out += a.upper;
        }
    }
    lower_in > upper_out
}

/// Min-cost integral circulation by successive shortest augmenting paths
/// with vertex potentials, after an initial saturation of negative-cost
/// arcs. Costs are integers, so termination is exact.
pub fn min_cost_circulation(d: &BoundedDigraph) -> Result<Circulation, CirculationError> {
    let n = d.vertex_count();
    let (s, t) = (n, n + 1);
    let mut net = mcmf::McmfNetwork::new(n + 2);
    let mut excess = vec![0i64; n];
    // Arc bookkeeping: (network arc id, base flow, sign of x in f = base + sign*x).
    let mut recover: Vec<(usize, i64, i64)> = Vec::with_capacity(d.arcs().len());
    for a in d.arcs() {
        excess[a.head] += a.lower;
        excess[a.tail] -= a.lower;
        let cap = a.upper - a.lower;
        if a.cost >= 0 {
            let id = net.add_arc(a.tail, a.head, cap, a.cost);
            recover.push((id, a.lower, 1));
        } else {
            // Saturate, then sell back along the reverse arc at -cost >= 0.
            excess[a.head] += cap;
            excess[a.tail] -= cap;
            let id = net.add_arc(a.head, a.tail, cap, -a.cost);
            recover.push((id, a.upper, -1));
        }
    }
    let mut total = 0i64;
    for (v, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            net.add_arc(s, v, ex, 0);
            total += ex;
        } else if ex < 0 {
            net.add_arc(v, t, -ex, 0);
        }
    }
    let pushed = net.run(s, t);
    if pushed != total {
        return Err(CirculationError::Infeasible);
    }
    let flow = recover
        .iter()
        .map(|&(id, base, sign)| base + sign * net.flow_on(id))
        .collect();
    let circ = Circulation { flow };
    debug_assert!(circ.respects(d));
    debug_assert!(
        find_negative_cycle(d.vertex_count(), &residual_arcs(d, &circ)).is_none(),
        "min-cost circulation left a negative residual cycle"
    );
    Ok(circ)
}

/// Residual arcs of `circ` in `d` as `(tail, head, weight)` triples.
pub fn residual_arcs(d: &BoundedDigraph, circ: &Circulation) -> Vec<(usize, usize, i64)> {
    let mut arcs = Vec::new();
    for (a, &f) in d.arcs().iter().zip(&circ.flow) {
        if f < a.upper {
            arcs.push((a.tail, a.head, a.cost));
        }
        if f > a.lower {
            arcs.push((a.head, a.tail, -a.cost));
        }
    }
    arcs
}

/// Simple directed cycle of strictly negative total weight, as arc indices
/// into `arcs` in traversal order, or `None`.
pub fn find_negative_cycle(n: usize, arcs: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    // Bellman-Ford from a virtual source connected to every vertex.
    let mut dist = vec![0i64; n];
    let mut parent_arc = vec![usize::MAX; n];
    let mut changed_vertex = None;
    for round in 0..n {
        changed_vertex = None;
        for (i, &(u, v, w)) in arcs.iter().enumerate() {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                parent_arc[v] = i;
                changed_vertex = Some(v);
            }
        }
        if changed_vertex.is_none() {
            return None;
        }
        let _ = round;
    }
    // A relaxation in round n proves a negative cycle; walk parents n times
    // to land on it, then collect the repeated stretch of the parent chain.
    let mut v = changed_vertex?;
    for _ in 0..n {
        v = arcs[parent_arc[v]].0;
    }
    let mut order = vec![usize::MAX; n];
    let mut chain = Vec::new();
    while order[v] == usize::MAX {
        order[v] = chain.len();
        chain.push(parent_arc[v]);
        v = arcs[parent_arc[v]].0;
    }
    let mut cycle: Vec<usize> = chain[order[v]..].to_vec();
    cycle.reverse();
    let weight: i64 = cycle.iter().map(|&a| arcs[a].2).sum();
    assert!(weight < 0, "parent cycle must be strictly negative");
    Some(cycle)
}

/// Cycle-canceling min-cost circulation. Kept as an independent
/// cross-check for [`min_cost_circulation`] and as the pseudo-polynomial
/// route used by the local-search solver.
pub fn min_cost_circulation_cycle_canceling(
    d: &BoundedDigraph,
) -> Result<Circulation, CirculationError> {
    let mut circ = match feasible_circulation(d) {
        FeasibilityResult::Feasible(c) => c,
        FeasibilityResult::Infeasible(_) => return Err(CirculationError::Infeasible),
    };
    loop {
        // Residual arcs annotated with (arc index, direction).
        let mut arcs = Vec::new();
        let mut tags = Vec::new();
        for (i, (a, &f)) in d.arcs().iter().zip(&circ.flow).enumerate() {
            if f < a.upper {
                arcs.push((a.tail, a.head, a.cost));
                tags.push((i, 1i64));
            }
            if f > a.lower {
                arcs.push((a.head, a.tail, -a.cost));
                tags.push((i, -1i64));
            }
        }
        let Some(cycle) = find_negative_cycle(d.vertex_count(), &arcs) else {
            break;
        };
        let delta = cycle
            .iter()
            .map(|&ri| {
                let (i, dir) = tags[ri];
                let a = &d.arcs()[i];
                if dir > 0 {
                    a.upper - circ.flow[i]
                } else {
                    circ.flow[i] - a.lower
                }
            })
            .min()
            .expect("nonempty cycle");
        debug_assert!(delta >= 1);
        for &ri in &cycle {
            let (i, dir) = tags[ri];
            circ.flow[i] += dir * delta;
        }
    }
    debug_assert!(circ.respects(d));
    Ok(circ)
}

pub mod maxflow {
    //! Dinic blocking-flow max-flow, generic over the capacity type so the
    //! same engine serves integral Hoffman reductions and exact-rational
    //! separation cuts.

    use std::collections::VecDeque;
    use std::ops::{Add, Sub};

    pub trait Capacity: Clone + Ord + Add<Output = Self> + Sub<Output = Self> {
        fn zero() -> Self;
    }

    impl Capacity for i64 {
        fn zero() -> Self {
            0
        }
    }

    impl Capacity for num_rational::BigRational {
        fn zero() -> Self {
            num_traits::Zero::zero()
        }
    }

    pub struct MaxFlow<T> {
        to: Vec<usize>,
        residual: Vec<T>,
        original: Vec<T>,
        adj: Vec<Vec<usize>>,
        level: Vec<usize>,
        iter: Vec<usize>,
    }

    impl<T: Capacity> MaxFlow<T> {
        pub fn new(n: usize) -> Self {
            MaxFlow {
                to: Vec::new(),
                residual: Vec::new(),
                original: Vec::new(),
                adj: vec![Vec::new(); n],
                level: vec![usize::MAX; n],
                iter: vec![0; n],
            }
        }

        /// Adds `u -> v` with capacity `cap`; returns the arc id usable
        /// with [`Self::flow_on`].
        pub fn add_arc(&mut self, u: usize, v: usize, cap: T) -> usize {
            let id = self.to.len();
            self.to.push(v);
            self.residual.push(cap.clone());
            self.original.push(cap);
            self.adj[u].push(id);
            self.to.push(u);
            self.residual.push(T::zero());
            self.original.push(T::zero());
            self.adj[v].push(id + 1);
            id
        }

        pub fn flow_on(&self, id: usize) -> T {
            self.original[id].clone() - self.residual[id].clone()
        }

        fn bfs(&mut self, s: usize, t: usize) -> bool {
            self.level.iter_mut().for_each(|l| *l = usize::MAX);
            let mut q = VecDeque::new();
            self.level[s] = 0;
            q.push_back(s);
            while let Some(u) = q.pop_front() {
                for &id in &self.adj[u] {
                    let v = self.to[id];
                    if self.level[v] == usize::MAX && self.residual[id] > T::zero() {
                        self.level[v] = self.level[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            self.level[t] != usize::MAX
        }

        fn dfs(&mut self, u: usize, t: usize, limit: Option<T>) -> Option<T> {
            if u == t {
                return limit;
            }
            while self.iter[u] < self.adj[u].len() {
                let id = self.adj[u][self.iter[u]];
                let v = self.to[id];
                if self.residual[id] > T::zero() && self.level[v] == self.level[u] + 1 {
                    let cap = self.residual[id].clone();
                    let pass = match &limit {
                        Some(l) => Some(l.clone().min(cap)),
                        None => Some(cap),
                    };
                    if let Some(found) = self.dfs(v, t, pass) {
                        self.residual[id] = self.residual[id].clone() - found.clone();
                        self.residual[id ^ 1] = self.residual[id ^ 1].clone() + found.clone();
                        return Some(found);
                    }
                }
                self.iter[u] += 1;
            }
            None
        }

        pub fn max_flow(&mut self, s: usize, t: usize) -> T {
            let mut total = T::zero();
            while self.bfs(s, t) {
                self.iter.iter_mut().for_each(|i| *i = 0);
                while let Some(found) = self.dfs(s, t, None) {
                    total = total + found;
                }
            }
            total
        }

        /// Vertices reachable from `s` through positive residual arcs.
        pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
            let mut seen = vec![false; self.adj.len()];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &id in &self.adj[u] {
                    let v = self.to[id];
                    if !seen[v] && self.residual[id] > T::zero() {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        }
    }
}

mod mcmf {
    //! Successive shortest paths with vertex potentials; all arc costs are
    //! nonnegative by construction, so Dijkstra applies throughout.

    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    const INF: i64 = i64::MAX / 4;

    pub struct McmfNetwork {
        to: Vec<usize>,
        residual: Vec<i64>,
        original: Vec<i64>,
        cost: Vec<i64>,
        adj: Vec<Vec<usize>>,
    }

    impl McmfNetwork {
        pub fn new(n: usize) -> Self {
            McmfNetwork {
                to: Vec::new(),
                residual: Vec::new(),
                original: Vec::new(),
                cost: Vec::new(),
                adj: vec![Vec::new(); n],
            }
        }

        pub fn add_arc(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
            debug_assert!(cost >= 0);
            let id = self.to.len();
            self.to.push(v);
            self.residual.push(cap);
            self.original.push(cap);
            self.cost.push(cost);
            self.adj[u].push(id);
            self.to.push(u);
            self.residual.push(0);
            self.original.push(0);
            self.cost.push(-cost);
            self.adj[v].push(id + 1);
            id
        }

        pub fn flow_on(&self, id: usize) -> i64 {
            self.original[id] - self.residual[id]
        }

        /// Pushes as much s-t flow as possible at minimum cost; returns the
        /// amount pushed.
        pub fn run(&mut self, s: usize, t: usize) -> i64 {
            let n = self.adj.len();
            let mut potential = vec![0i64; n];
            let mut pushed_total = 0i64;
            loop {
                let mut dist = vec![INF; n];
                let mut parent = vec![usize::MAX; n];
                let mut heap = BinaryHeap::new();
                dist[s] = 0;
                heap.push(Reverse((0i64, s)));
                while let Some(Reverse((du, u))) = heap.pop() {
                    if du > dist[u] {
                        continue;
                    }
                    for &id in &self.adj[u] {
                        if self.residual[id] <= 0 {
                            continue;
                        }
                        let v = self.to[id];
                        let rc = self.cost[id] + potential[u] - potential[v];
                        debug_assert!(rc >= 0, "reduced cost must stay nonnegative");
                        if du + rc < dist[v] {
                            dist[v] = du + rc;
                            parent[v] = id;
                            heap.push(Reverse((dist[v], v)));
                        }
                    }
                }
                if dist[t] == INF {
                    return pushed_total;
                }
                for v in 0..n {
                    if dist[v] < INF {
                        potential[v] += dist[v];
                    }
                }
                // Bottleneck along the shortest path.
                let mut delta = i64::MAX;
                let mut v = t;
                while v != s {
                    let id = parent[v];
                    delta = delta.min(self.residual[id]);
                    v = self.to[id ^ 1];
                }
                let mut v = t;
                while v != s {
                    let id = parent[v];
                    self.residual[id] -= delta;
                    self.residual[id ^ 1] += delta;
                    v = self.to[id ^ 1];
                }
                pushed_total += delta;
            }
        }
    }
}
