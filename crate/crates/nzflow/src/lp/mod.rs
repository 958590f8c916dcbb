//! Exact LP machinery for the two relaxations: the flow relaxation with
//! per-edge sum bounds, and the orientation relaxation with exponentially
//! many cut constraints handled by a separation oracle.
//!
//! Everything is exact rational; optimal points come from a basic simplex
//! solution and are therefore extreme points of the solved system.

pub mod simplex;

use crate::circulation::maxflow::MaxFlow;
use crate::flow::Flow;
use crate::graph::{ArcRef, CostFunction, Direction, Graph, VertexSet};
use crate::rational::{is_integral, rat, rat_frac, Rational};
use num_traits::{Signed, Zero};
use simplex::{Cmp, LinearProgram, LpRow, SimplexOutcome};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("relaxation is infeasible")]
    Infeasible,
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("solution violates the extreme-point structure: {0}")]
    StructureViolation(String),
}

/// Flow-value bound: finite k or the unbounded variant that drops the
/// per-edge upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KBound {
    Finite(i64),
    Unbounded,
}

impl KBound {
    pub fn finite(&self) -> Option<i64> {
        match self {
            KBound::Finite(k) => Some(*k),
            KBound::Unbounded => None,
        }
    }
}

/// Exact per-arc solution of a relaxation, flagged as an extreme point
/// when it came out of a basic simplex solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// 2m entries: `[e+, e-]` interleaved per edge id.
    values: Vec<Rational>,
    pub objective: Rational,
    pub extreme: bool,
}

impl LpSolution {
    pub fn from_parts(values: Vec<Rational>, objective: Rational, extreme: bool) -> LpSolution {
        assert!(values.len() % 2 == 0);
        LpSolution {
            values,
            objective,
            extreme,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.values.len() / 2
    }

    pub fn arc_value(&self, edge: usize, dir: Direction) -> &Rational {
        match dir {
            Direction::Forward => &self.values[2 * edge],
            Direction::Backward => &self.values[2 * edge + 1],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Partition of the edges of an extreme optimal flow-relaxation point:
/// integral edges carry the signed integral value, fractional edges have
/// both arc values exactly one half.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowLpClassification {
    pub integral_flow: Flow,
    pub fractional_edges: Vec<usize>,
}

fn arc_var_cost(c: &CostFunction, arc: ArcRef) -> Option<i64> {
    c.arc_cost(arc).finite()
}

/// Solves the flow relaxation: conservation at every vertex,
/// `1 <= z(e+) + z(e-) <= k-1` per edge (upper bound dropped when
/// unbounded), nonnegativity, minimizing the arc costs. Forbidden arcs are
/// fixed to zero and removed from the column set. The returned point is a
/// basic optimal solution made unique-enough for classification by a
/// second-stage objective that minimizes the total arc mass over the
/// optimal face.
pub fn solve_wnzf_lp(g: &Graph, c: &CostFunction, k: KBound) -> Result<LpSolution, LpError> {
    if !g.is_two_edge_connected() {
        return Err(LpError::NotTwoEdgeConnected);
    }
    if let KBound::Finite(k) = k {
        assert!(k >= 2, "flow bound must be at least 2");
    }
    let m = g.edge_count();
    // Column map: arcs with finite cost get a variable.
    let mut var_of = vec![None; 2 * m];
    let mut cost_of = Vec::new();
    let mut arcs = Vec::new();
    for e in 0..m {
        for dir in [Direction::Forward, Direction::Backward] {
            let arc = ArcRef { edge: e, dir };
            if let Some(cost) = arc_var_cost(c, arc) {
                var_of[arc_slot(arc)] = Some(arcs.len());
                cost_of.push(rat(cost));
                arcs.push(arc);
            }
        }
        if var_of[2 * e].is_none() && var_of[2 * e + 1].is_none() {
            return Err(LpError::Infeasible);
        }
    }

    let mut rows = Vec::new();
    for v in 0..g.vertex_count() {
        let mut coeffs = Vec::new();
        for (idx, arc) in arcs.iter().enumerate() {
            let (tail, head) = g.arc_endpoints(*arc);
            if tail == v {
                coeffs.push((idx, rat(1)));
            } else if head == v {
                coeffs.push((idx, rat(-1)));
            }
        }
        if !coeffs.is_empty() {
            rows.push(LpRow {
                coeffs,
                cmp: Cmp::Eq,
                rhs: rat(0),
            });
        }
    }
    for e in 0..m {
        let coeffs: Vec<(usize, Rational)> = [2 * e, 2 * e + 1]
            .iter()
            .filter_map(|&slot| var_of[slot].map(|idx| (idx, rat(1))))
            .collect();
        rows.push(LpRow {
            coeffs: coeffs.clone(),
            cmp: Cmp::Ge,
            rhs: rat(1),
        });
        if let KBound::Finite(k) = k {
            rows.push(LpRow {
                coeffs,
                cmp: Cmp::Le,
                rhs: rat(k - 1),
            });
        }
    }

    let stage1 = LinearProgram {
        num_vars: arcs.len(),
        objective: cost_of.clone(),
        rows: rows.clone(),
    };
    let opt = match simplex::solve(&stage1) {
        SimplexOutcome::Optimal { objective, .. } => objective,
        SimplexOutcome::Infeasible => return Err(LpError::Infeasible),
        SimplexOutcome::Unbounded => unreachable!("nonnegative costs bound the relaxation below"),
    };

    // Second stage: among cost-optimal points, minimize total arc mass.
    // This pins down an extreme point of the optimal face on which an edge
    // carried in both directions always has arc sum exactly one.
    let mut rows2 = rows;
    rows2.push(LpRow {
        coeffs: cost_of
            .iter()
            .cloned()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect(),
        cmp: Cmp::Eq,
        rhs: opt.clone(),
    });
    let stage2 = LinearProgram {
        num_vars: arcs.len(),
        objective: vec![rat(1); arcs.len()],
        rows: rows2,
    };
    let values = match simplex::solve(&stage2) {
        SimplexOutcome::Optimal { values, .. } => values,
        other => unreachable!("optimal face is a nonempty polytope: {other:?}"),
    };

    let mut full = vec![Rational::zero(); 2 * m];
    for (idx, arc) in arcs.iter().enumerate() {
        full[arc_slot(*arc)] = values[idx].clone();
    }
    Ok(LpSolution {
        values: full,
        objective: opt,
        extreme: true,
    })
}

fn arc_slot(arc: ArcRef) -> usize {
    match arc.dir {
        Direction::Forward => 2 * arc.edge,
        Direction::Backward => 2 * arc.edge + 1,
    }
}

/// Splits an extreme optimal point of the flow relaxation into its
/// integral flow and its fractional (half/half) edges, rejecting any
/// point that violates the extreme-point structure.
pub fn classify_flow_extreme_point(
    g: &Graph,
    sol: &LpSolution,
    k: KBound,
) -> Result<FlowLpClassification, LpError> {
    assert_eq!(sol.edge_count(), g.edge_count());
    let mut values = vec![0i64; g.edge_count()];
    let mut fractional = Vec::new();
    let half = rat_frac(1, 2);
    for e in 0..g.edge_count() {
        let plus = sol.arc_value(e, Direction::Forward);
        let minus = sol.arc_value(e, Direction::Backward);
        if plus.is_negative() || minus.is_negative() {
            return Err(LpError::StructureViolation(format!(
                "edge {e}: negative arc value"
            )));
        }
        match (is_integral(plus), is_integral(minus)) {
            (true, true) => {
                if !plus.is_zero() && !minus.is_zero() {
                    return Err(LpError::StructureViolation(format!(
                        "edge {e}: both integral arcs carry flow"
                    )));
                }
                let signed = plus.clone() - minus.clone();
                let v = crate::rational::to_i64(&signed)
                    .expect("integral arc values fit in i64 for sane instances");
                if let KBound::Finite(k) = k {
                    if v.abs() > k - 1 {
                        return Err(LpError::StructureViolation(format!(
                            "edge {e}: integral value {v} exceeds k-1"
                        )));
                    }
                }
                values[e] = v;
            }
            (false, false) => {
                if *plus != half || *minus != half {
                    return Err(LpError::StructureViolation(format!(
                        "edge {e}: fractional arcs are not both one half"
                    )));
                }
                fractional.push(e);
            }
            _ => {
                return Err(LpError::StructureViolation(format!(
                    "edge {e}: one arc integral, the other fractional"
                )));
            }
        }
    }
    let integral_flow = Flow::new(g, values).map_err(|e| {
        LpError::StructureViolation(format!("integral arcs do not form a flow: {e}"))
    })?;
    Ok(FlowLpClassification {
        integral_flow,
        fractional_edges: fractional,
    })
}

/// Solves the orientation relaxation by cutting planes: per-edge pairing
/// rows plus a working set of cut constraints seeded with all singleton
/// cuts, growing by exact separation until no violated cut remains. The
/// final point lies in the full polytope and is extreme for the solved
/// relaxation, hence extreme for the polytope.
pub fn solve_wcbo_lp(g: &Graph, c: &CostFunction, k: i64) -> Result<LpSolution, LpError> {
    assert!(k >= 2, "cut-balance parameter must be at least 2");
    if !g.is_two_edge_connected() {
        return Err(LpError::NotTwoEdgeConnected);
    }
    let m = g.edge_count();
    let n = g.vertex_count();

    // Forbidden arcs: variable fixed to 0, the partner forced to 1.
    #[derive(Clone, Copy, PartialEq)]
    enum Slot {
        Var(usize),
        Fixed(i64),
    }
    let mut slots = vec![Slot::Fixed(0); 2 * m];
    let mut arcs = Vec::new();
    let mut costs = Vec::new();
    let mut fixed_cost = 0i64;
    for e in 0..m {
        let fwd = ArcRef::forward(e);
        let bwd = ArcRef::backward(e);
        match (arc_var_cost(c, fwd), arc_var_cost(c, bwd)) {
            (Some(cf), Some(cb)) => {
                slots[arc_slot(fwd)] = Slot::Var(arcs.len());
                costs.push(rat(cf));
                arcs.push(fwd);
                slots[arc_slot(bwd)] = Slot::Var(arcs.len());
                costs.push(rat(cb));
                arcs.push(bwd);
            }
            (Some(cf), None) => {
                slots[arc_slot(fwd)] = Slot::Fixed(1);
                slots[arc_slot(bwd)] = Slot::Fixed(0);
                fixed_cost += cf;
            }
            (None, Some(cb)) => {
                slots[arc_slot(fwd)] = Slot::Fixed(0);
                slots[arc_slot(bwd)] = Slot::Fixed(1);
                fixed_cost += cb;
            }
            (None, None) => return Err(LpError::Infeasible),
        }
    }

    let mut rows = Vec::new();
    for e in 0..m {
        if let (Slot::Var(i), Slot::Var(j)) = (
            slots[arc_slot(ArcRef::forward(e))],
            slots[arc_slot(ArcRef::backward(e))],
        ) {
            rows.push(LpRow {
                coeffs: vec![(i, rat(1)), (j, rat(1))],
                cmp: Cmp::Eq,
                rhs: rat(1),
            });
        }
    }

    let cut_row = |u: &VertexSet| -> LpRow {
        let mut coeffs: Vec<(usize, Rational)> = Vec::new();
        let cut = g.cut_edges(u);
        let mut rhs = rat_frac((k - 1) * cut.len() as i64, k);
        for &e in &cut {
            let (tail, _) = g.endpoints(e);
            let exit = if u.contains(tail) {
                ArcRef::forward(e)
            } else {
                ArcRef::backward(e)
            };
            match slots[arc_slot(exit)] {
                Slot::Var(i) => coeffs.push((i, rat(1))),
                Slot::Fixed(x) => rhs -= rat(x),
            }
        }
        LpRow {
            coeffs,
            cmp: Cmp::Le,
            rhs,
        }
    };

    let mut added: Vec<VertexSet> = Vec::new();
    for v in 0..n {
        for u in [
            VertexSet::singleton(v),
            VertexSet::singleton(v).complement(n),
        ] {
            if u.is_proper_nonempty(n) {
                rows.push(cut_row(&u));
                added.push(u);
            }
        }
    }

    loop {
        let lp = LinearProgram {
            num_vars: arcs.len(),
            objective: costs.clone(),
            rows: rows.clone(),
        };
        let (values, objective) = match simplex::solve(&lp) {
            SimplexOutcome::Optimal { values, objective } => (values, objective),
            SimplexOutcome::Infeasible => return Err(LpError::Infeasible),
            SimplexOutcome::Unbounded => {
                unreachable!("pairing rows keep every variable in [0, 1]")
            }
        };
        let mut full = vec![Rational::zero(); 2 * m];
        for slot in 0..2 * m {
            full[slot] = match slots[slot] {
                Slot::Var(i) => values[i].clone(),
                Slot::Fixed(x) => rat(x),
            };
        }
        match separate_cut_constraint(g, &full, k) {
            Some(u) => {
                assert!(
                    !added.contains(&u),
                    "separation returned an already-added cut; exact arithmetic bug"
                );
                rows.push(cut_row(&u));
                added.push(u);
            }
            None => {
                return Ok(LpSolution {
                    values: full,
                    objective: objective + rat(fixed_cost),
                    extreme: true,
                });
            }
        }
    }
}

/// Finds a nonempty proper vertex set whose cut constraint is violated at
/// exact arithmetic, or proves none exists.
///
/// Scaling the constraint by k turns the search into minimizing a
/// submodular quadratic pseudo-Boolean function: each crossing edge
/// contributes a direction-dependent weight, and the two weights of an
/// edge sum to k-2 >= 0. The minimum is found with 2(n-1) s-t min-cuts
/// (one endpoint fixed inside, the other iterated).
pub fn separate_cut_constraint(g: &Graph, y: &[Rational], k: i64) -> Option<VertexSet> {
    let n = g.vertex_count();
    let m = g.edge_count();
    assert_eq!(y.len(), 2 * m);
    debug_assert!(y.iter().all(|v| !v.is_negative()));
    debug_assert!((0..m).all(|e| (y[2 * e].clone() + y[2 * e + 1].clone()) == rat(1)));
    if n < 2 {
        return None;
    }

    // Per-edge exit weight when the head side exits; the matching tail-side
    // weight is (k-2) minus it since y(e+) + y(e-) = 1.
    let beta: Vec<Rational> = (0..m)
        .map(|e| rat(k - 1) - rat(k) * y[2 * e + 1].clone())
        .collect();

    let mut best: Option<(Rational, VertexSet)> = None;
    let mut consider = |u: VertexSet, value: Rational| {
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, u));
        }
    };

    // Unary weights from the normal form of the pseudo-Boolean objective.
    let mut unary = vec![Rational::zero(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        unary[v] = unary[v].clone() + beta[e].clone();
        unary[u] = unary[u].clone() - beta[e].clone();
    }
    let inf: Rational = {
        let mut t = rat((k - 2) * m as i64 + 1);
        for w in &unary {
            t += crate::rational::abs(w);
        }
        t
    };

    let run_cut = |s: usize, t: usize| -> (Rational, VertexSet) {
        let (src, snk) = (n, n + 1);
        let mut mf = MaxFlow::<Rational>::new(n + 2);
        let mut constant = Rational::zero();
        for &(u, v) in g.edges() {
            mf.add_arc(u, v, rat(k - 2));
        }
        for (z, w) in unary.iter().enumerate() {
            if w.is_positive() {
                mf.add_arc(z, snk, w.clone());
            } else if w.is_negative() {
                constant += w.clone();
                mf.add_arc(src, z, -w.clone());
            }
        }
        mf.add_arc(src, s, inf.clone());
        mf.add_arc(t, snk, inf.clone());
        let cut = mf.max_flow(src, snk);
        let reach = mf.residual_reachable(src);
        let u_set = VertexSet::from_iter((0..n).filter(|&z| reach[z]));
        (cut + constant, u_set)
    };

    for other in 1..n {
        let (val, u) = run_cut(0, other);
        consider(u, val);
        let (val, u) = run_cut(other, 0);
        consider(u, val);
    }

    let (value, u) = best.expect("n >= 2 yields at least one candidate");
    if value.is_negative() {
        debug_assert!(cut_violation(g, y, k, &u).is_positive());
        Some(u)
    } else {
        None
    }
}

/// Exact violation amount `y(out(U)) - (k-1)/k * |cut(U)|`.
pub fn cut_violation(g: &Graph, y: &[Rational], k: i64, u: &VertexSet) -> Rational {
    let cut = g.cut_edges(u);
    let mut lhs = Rational::zero();
    for &e in &cut {
        let (tail, _) = g.endpoints(e);
        let slot = if u.contains(tail) { 2 * e } else { 2 * e + 1 };
        lhs += y[slot].clone();
    }
    lhs - rat_frac((k - 1) * cut.len() as i64, k)
}

/// Brute-force separation over all nonempty proper subsets; n <= 16.
pub fn separate_cut_constraint_brute(g: &Graph, y: &[Rational], k: i64) -> Option<VertexSet> {
    let n = g.vertex_count();
    assert!(n <= 16);
    let mut best: Option<(Rational, VertexSet)> = None;
    for bits in 1..(1u128 << n) - 1 {
        let u = VertexSet::from_bits(bits);
        let viol = cut_violation(g, y, k, &u);
        if viol.is_positive() && best.as_ref().map_or(true, |(b, _)| viol > *b) {
            best = Some((viol, u));
        }
    }
    best.map(|(_, u)| u)
}
