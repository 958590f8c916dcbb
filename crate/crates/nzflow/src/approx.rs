//! The three approximation pipelines: the (6,6)-approximation for
//! weighted nowhere-zero k-flows, the (k,6)-approximation for weighted
//! k-cut-balanced orientations with the partial-orientation extension
//! step, and the local-search 3-approximation for symmetric costs.
//!
//! Every pipeline re-verifies its output with the independent checkers
//! and returns a certificate pinning the proven cost ratio and the flow
//! bound the output was verified at.

use crate::circulation::{
    feasible_circulation, min_cost_circulation, BoundedArc, BoundedDigraph, FeasibilityResult,
};
use crate::flow::{compose_nowhere_zero, flow_cost, negate, support_orientation, Flow};
use crate::graph::{
    ArcCost, ArcRef, CostFunction, Direction, Graph, Orientation, PartialOrientation, VertexSet,
};
use crate::lp::{classify_flow_extreme_point, solve_wcbo_lp, solve_wnzf_lp, KBound, LpError};
use crate::nz6::{nz6_flow, Nz6Error};
use crate::rational::{rat, Rational};
use crate::verify::{
    verify_cut_balanced, verify_locally_optimal, verify_nowhere_zero_k_flow, CutCheckMethod,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApproxError {
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("relaxation is infeasible")]
    Infeasible,
    #[error("cost function must be symmetric")]
    NotSymmetric,
    #[error("orientation is not cut-balanced; witness cut {0:?}")]
    NotCutBalanced(Vec<usize>),
    #[error("lp structure violation: {0}")]
    Structure(String),
    #[error("output uses a forbidden arc")]
    ForbiddenArcUsed,
}

impl From<LpError> for ApproxError {
    fn from(e: LpError) -> ApproxError {
        match e {
            LpError::Infeasible => ApproxError::Infeasible,
            LpError::NotTwoEdgeConnected => ApproxError::NotTwoEdgeConnected,
            LpError::StructureViolation(s) => ApproxError::Structure(s),
        }
    }
}

impl From<Nz6Error> for ApproxError {
    fn from(_: Nz6Error) -> ApproxError {
        ApproxError::NotTwoEdgeConnected
    }
}

/// Proof object accompanying every approximation output: the relaxation
/// value (an exact lower bound for the compared optimum), the achieved
/// cost, the claimed ratio, and the flow bound the output was verified
/// at. Construction checks `output_cost <= claimed_ratio * lp_value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxCertificate {
    #[serde(with = "ratio_serde")]
    pub lp_value: Rational,
    pub output_cost: i64,
    #[serde(with = "ratio_serde", rename = "ratio")]
    pub claimed_ratio: Rational,
    pub flow_bound: i64,
}

impl ApproxCertificate {
    pub fn new(
        lp_value: Rational,
        output_cost: i64,
        claimed_ratio: Rational,
        flow_bound: i64,
    ) -> ApproxCertificate {
        let cert = ApproxCertificate {
            lp_value,
            output_cost,
            claimed_ratio,
            flow_bound,
        };
        assert!(cert.holds(), "certificate bound violated: {cert:?}");
        cert
    }

    pub fn holds(&self) -> bool {
        rat(self.output_cost) <= self.claimed_ratio.clone() * self.lp_value.clone()
    }
}

mod ratio_serde {
    use crate::rational::{format_ratio, parse_ratio, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).ok_or_else(|| serde::de::Error::custom("expected num/den"))
    }
}

/// Builds the nowhere-zero k-flow induced by a k-cut-balanced
/// orientation, via a circulation with bounds [1, k-1] on the chosen
/// arcs. A Hoffman infeasibility certificate is returned as the
/// refutation witness when the orientation is not k-cut-balanced.
pub fn flow_from_cut_balanced(g: &Graph, o: &Orientation, k: i64) -> Result<Flow, ApproxError> {
    assert!(k >= 2);
    let arcs = (0..g.edge_count())
        .map(|e| {
            let (tail, head) = g.arc_endpoints(o.arc(e));
            BoundedArc {
                tail,
                head,
                lower: 1,
                upper: k - 1,
                cost: 0,
            }
        })
        .collect();
    let d = BoundedDigraph::new(g.vertex_count(), arcs).expect("tiny bounds");
    match feasible_circulation(&d) {
        FeasibilityResult::Feasible(circ) => {
            let values = (0..g.edge_count())
                .map(|e| match o.dir(e) {
                    Direction::Forward => circ.flow[e],
                    Direction::Backward => -circ.flow[e],
                })
                .collect();
            let f = Flow::new(g, values).expect("circulation conserves");
            debug_assert!(verify_nowhere_zero_k_flow(g, &f, Some(k)).is_ok());
            Ok(f)
        }
        FeasibilityResult::Infeasible(u) => Err(ApproxError::NotCutBalanced(u.iter().collect())),
    }
}

/// The (6,6)-approximation: solve the flow relaxation, read off the
/// integral k-flow part f of the extreme point, compute any nowhere-zero
/// 6-flow g6, and return the cheaper of 6f+g6 and 6f-g6. For finite k
/// the output is a verified nowhere-zero 6k-flow of cost at most six
/// times the relaxation value; for unbounded k the certificate records
/// the concrete verified flow bound.
pub fn wnzf_bicriteria(
    g: &Graph,
    c: &CostFunction,
    k: KBound,
) -> Result<(Flow, ApproxCertificate), ApproxError> {
    let sol = solve_wnzf_lp(g, c, k)?;
    let classification = classify_flow_extreme_point(g, &sol, k)?;
    let f = classification.integral_flow;
    let g6 = nz6_flow(g)?;

    let cap = f.max_abs() + 1;
    let plus = compose_nowhere_zero(&f, cap, &g6, 6).expect("supports cover all edges");
    let minus = compose_nowhere_zero(&f, cap, &negate(&g6), 6).expect("supports cover all edges");
    let cost_plus = flow_cost(&plus, c).map_err(|_| ApproxError::ForbiddenArcUsed)?;
    let cost_minus = flow_cost(&minus, c).map_err(|_| ApproxError::ForbiddenArcUsed)?;
    // Ties return the +g6 composition.
    let (out, cost) = if cost_minus < cost_plus {
        (minus, cost_minus)
    } else {
        (plus, cost_plus)
    };

    let flow_bound = match k {
        KBound::Finite(k) => 6 * k,
        KBound::Unbounded => 6 * cap,
    };
    assert_eq!(
        verify_nowhere_zero_k_flow(g, &out, Some(flow_bound)),
        Ok(())
    );
    let cert = ApproxCertificate::new(sol.objective.clone(), cost, rat(6), flow_bound);
    Ok((out, cert))
}

/// Extends a partial orientation into a partial k-cut-balanced
/// orientation when possible, or returns the violating cut. The
/// construction runs a circulation with bounds [1, k-1] on the oriented
/// arcs and [0, k-1] on both arcs of every free edge, then cancels
/// two-sided flow per edge.
pub fn extend_partial_cut_balanced(
    g: &Graph,
    e1: &PartialOrientation,
    k: i64,
) -> Result<PartialOrientation, VertexSet> {
    assert!(k >= 2);
    assert_eq!(e1.len(), g.edge_count());
    let mut arcs = Vec::new();
    // Arc bookkeeping: (edge, direction) per digraph arc.
    let mut tags = Vec::new();
    for e in 0..g.edge_count() {
        match e1.dir(e) {
            Some(dir) => {
                let (tail, head) = g.arc_endpoints(ArcRef { edge: e, dir });
                arcs.push(BoundedArc {
                    tail,
                    head,
                    lower: 1,
                    upper: k - 1,
                    cost: 0,
                });
                tags.push((e, dir));
            }
            None => {
                for dir in [Direction::Forward, Direction::Backward] {
                    let (tail, head) = g.arc_endpoints(ArcRef { edge: e, dir });
                    arcs.push(BoundedArc {
                        tail,
                        head,
                        lower: 0,
                        upper: k - 1,
                        cost: 0,
                    });
                    tags.push((e, dir));
                }
            }
        }
    }
    let d = BoundedDigraph::new(g.vertex_count(), arcs).expect("tiny bounds");
    match feasible_circulation(&d) {
        FeasibilityResult::Feasible(circ) => {
            // Per-edge net value: cancel two-sided flow on free edges.
            let mut net = vec![0i64; g.edge_count()];
            for (i, &(e, dir)) in tags.iter().enumerate() {
                net[e] += dir.sign() * circ.flow[i];
            }
            let mut out = PartialOrientation::undecided(g.edge_count());
            for e in 0..g.edge_count() {
                if net[e] > 0 {
                    out.set(e, Direction::Forward);
                } else if net[e] < 0 {
                    out.set(e, Direction::Backward);
                }
            }
            debug_assert!(
                e1.is_refined_by(&out),
                "oriented arcs carry at least one unit"
            );
            debug_assert!(crate::verify::verify_partial_cut_balanced(g, &out, k).is_ok());
            Ok(out)
        }
        FeasibilityResult::Infeasible(u) => {
            // Hoffman certifies lower(into U) > upper(out of U); the
            // partial-balance condition fails at the complement.
            let x = u.complement(g.vertex_count());
            debug_assert!(partial_cut_violated(g, e1, k, &x));
            Err(x)
        }
    }
}

fn partial_cut_violated(g: &Graph, po: &PartialOrientation, k: i64, u: &VertexSet) -> bool {
    let out = g.out_arcs(po, u).len() as i64;
    let cut = g.cut_edges(u).len() as i64;
    k * out > (k - 1) * cut
}

/// The (k,6)-approximation for cut-balanced orientations: take the arcs
/// the relaxation sets to one, extend them to a partial k-cut-balanced
/// orientation, induce its partial k-flow f, and orient everything by
/// 6f + g6 for a nowhere-zero 6-flow g6. The output is verified
/// 6k-cut-balanced of orientation cost at most k times the relaxation.
pub fn wcbo_bicriteria(
    g: &Graph,
    c: &CostFunction,
    k: i64,
) -> Result<(Orientation, ApproxCertificate), ApproxError> {
    assert!(k >= 2);
    let sol = solve_wcbo_lp(g, c, k)?;
    let one = rat(1);
    let mut e1 = PartialOrientation::undecided(g.edge_count());
    for e in 0..g.edge_count() {
        if *sol.arc_value(e, Direction::Forward) == one {
            e1.set(e, Direction::Forward);
        } else if *sol.arc_value(e, Direction::Backward) == one {
            e1.set(e, Direction::Backward);
        }
    }
    let extended = extend_partial_cut_balanced(g, &e1, k)
        .expect("a feasible relaxation point dominates its integral arcs");

    // Partial k-flow induced on the extended orientation's edge set.
    let f = partial_flow_on(g, &extended, k)?;
    let g6 = nz6_flow(g)?;
    let composed = compose_nowhere_zero(&f, k, &g6, 6).expect("g6 covers the free edges");
    let (_, po) = support_orientation(&composed);
    let o = po.complete().expect("composition is nowhere-zero");

    assert_eq!(
        verify_cut_balanced(g, &o, 6 * k, CutCheckMethod::Hoffman),
        Ok(())
    );
    let cost = orientation_cost(c, &o).ok_or(ApproxError::ForbiddenArcUsed)?;
    let cert = ApproxCertificate::new(sol.objective.clone(), cost, rat(k), 6 * k);
    Ok((o, cert))
}

/// Total cost of the chosen arcs; `None` if a forbidden arc is chosen.
pub fn orientation_cost(c: &CostFunction, o: &Orientation) -> Option<i64> {
    let mut total = 0i64;
    for e in 0..o.len() {
        match c.arc_cost(o.arc(e)) {
            ArcCost::Finite(x) => total += x,
            ArcCost::Forbidden => return None,
        }
    }
    Some(total)
}

/// Nowhere-zero k-flow on the subgraph of oriented edges, zero elsewhere.
fn partial_flow_on(g: &Graph, po: &PartialOrientation, k: i64) -> Result<Flow, ApproxError> {
    let arcs: Vec<BoundedArc> = po
        .oriented_edges()
        .iter()
        .map(|&e| {
            let (tail, head) = g.arc_endpoints(ArcRef {
                edge: e,
                dir: po.dir(e).unwrap(),
            });
            BoundedArc {
                tail,
                head,
                lower: 1,
                upper: k - 1,
                cost: 0,
            }
        })
        .collect();
    if arcs.is_empty() {
        return Ok(Flow::zero(g.edge_count()));
    }
    let d = BoundedDigraph::new(g.vertex_count(), arcs).expect("tiny bounds");
    match feasible_circulation(&d) {
        FeasibilityResult::Feasible(circ) => {
            let mut values = vec![0i64; g.edge_count()];
            for (i, &e) in po.oriented_edges().iter().enumerate() {
                values[e] = po.dir(e).unwrap().sign() * circ.flow[i];
            }
            Ok(Flow::new(g, values).expect("circulation conserves"))
        }
        FeasibilityResult::Infeasible(u) => Err(ApproxError::NotCutBalanced(u.iter().collect())),
    }
}

/// Local-search 3-approximation for symmetric costs: start from any
/// nowhere-zero 6-flow, solve one min-cost circulation on the reversed
/// support arcs with costs c(e)(3 - f(e)) and capacities [0, 1], and
/// apply the resulting flips. The output is a locally optimal
/// nowhere-zero 6-flow of cost at most 3 times any nowhere-zero k-flow,
/// k >= 6 or unbounded.
pub fn swnzf_local_search(
    g: &Graph,
    c: &CostFunction,
) -> Result<(Flow, ApproxCertificate), ApproxError> {
    let f0 = nz6_flow(g)?;
    swnzf_local_search_from(g, c, &f0)
}

/// Local search seeded with a caller-provided nowhere-zero 6-flow.
pub fn swnzf_local_search_from(
    g: &Graph,
    c: &CostFunction,
    f0: &Flow,
) -> Result<(Flow, ApproxCertificate), ApproxError> {
    if !c.is_symmetric() {
        return Err(ApproxError::NotSymmetric);
    }
    assert_eq!(verify_nowhere_zero_k_flow(g, f0, Some(6)), Ok(()));
    // Min-cost circulation on the reversed support arcs.
    let arcs: Vec<BoundedArc> = (0..g.edge_count())
        .map(|e| {
            let dir = if f0.value(e) > 0 {
                Direction::Backward
            } else {
                Direction::Forward
            };
            let (tail, head) = g.arc_endpoints(ArcRef { edge: e, dir });
            BoundedArc {
                tail,
                head,
                lower: 0,
                upper: 1,
                cost: c.symmetric_cost(e) * (3 - f0.value(e).abs()),
            }
        })
        .collect();
    let d = BoundedDigraph::new(g.vertex_count(), arcs).expect("bounded by 3 * max cost");
    let g_star = min_cost_circulation(&d).expect("zero circulation is feasible");
    // f + 6g: an arc with g = 1 flips its edge by six units.
    let values: Vec<i64> = (0..g.edge_count())
        .map(|e| {
            let v = f0.value(e);
            v - 6 * g_star.flow[e] * v.signum()
        })
        .collect();
    let out = Flow::new(g, values).expect("cycle flips conserve");
    finish_swnzf(g, c, out)
}

fn finish_swnzf(
    g: &Graph,
    c: &CostFunction,
    out: Flow,
) -> Result<(Flow, ApproxCertificate), ApproxError> {
    assert_eq!(verify_nowhere_zero_k_flow(g, &out, Some(6)), Ok(()));
    assert_eq!(verify_locally_optimal(g, c, &out), Ok(Ok(())));
    let cost = flow_cost(&out, c).expect("symmetric costs have no forbidden arcs");
    // Any nowhere-zero flow pays at least the plain edge-cost sum, which
    // certifies the factor-3 bound against every optimum.
    let lower_bound: i64 = (0..g.edge_count()).map(|e| c.symmetric_cost(e)).sum();
    let cert = ApproxCertificate::new(rat(lower_bound), cost, rat(3), 6);
    Ok((out, cert))
}

/// Pseudo-polynomial variant: repeatedly find a cycle violating local
/// optimality and push six units along its reverse. Same output contract
/// as the min-cost-circulation route.
pub fn swnzf_cycle_canceling(g: &Graph, c: &CostFunction) -> Result<Flow, ApproxError> {
    let f0 = nz6_flow(g)?;
    swnzf_cycle_canceling_from(g, c, &f0)
}

/// Cycle canceling seeded with a caller-provided nowhere-zero 6-flow.
pub fn swnzf_cycle_canceling_from(
    g: &Graph,
    c: &CostFunction,
    f0: &Flow,
) -> Result<Flow, ApproxError> {
    if !c.is_symmetric() {
        return Err(ApproxError::NotSymmetric);
    }
    assert_eq!(verify_nowhere_zero_k_flow(g, f0, Some(6)), Ok(()));
    let mut values = f0.values().to_vec();
    loop {
        let arcs: Vec<(usize, usize, i64)> = (0..g.edge_count())
            .map(|e| {
                let dir = if values[e] > 0 {
                    Direction::Forward
                } else {
                    Direction::Backward
                };
                let (tail, head) = g.arc_endpoints(ArcRef { edge: e, dir });
                (tail, head, c.symmetric_cost(e) * (3 - values[e].abs()))
            })
            .collect();
        let Some(cycle) = crate::circulation::find_negative_cycle(g.vertex_count(), &arcs) else {
            break;
        };
        for idx in cycle {
            // Arc index equals edge index by construction.
            values[idx] -= 6 * values[idx].signum();
        }
    }
    let out = Flow::new(g, values).expect("cycle pushes conserve");
    assert_eq!(verify_nowhere_zero_k_flow(g, &out, Some(6)), Ok(()));
    assert_eq!(verify_locally_optimal(g, c, &out), Ok(Ok(())));
    Ok(out)
}
