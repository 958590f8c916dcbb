//! Independent checkers for every solution concept. These recompute
//! conservation sums and cut counts directly from definitions and never
//! share state with the constructors they check; every returned witness
//! re-validates when evaluated straight from the definition.

use crate::circulation::{feasible_circulation, BoundedArc, BoundedDigraph, FeasibilityResult};
use crate::flow::Flow;
use crate::graph::{
    ArcRef, CostFunction, Direction, Graph, Orientation, PartialOrientation, VertexSet,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("input flow is not a nowhere-zero 6-flow")]
    NotNz6Flow,
    #[error("cost function must be symmetric")]
    NotSymmetric,
}

/// Witness of a failed check; each payload re-validates independently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Conservation { vertex: usize },
    ZeroEdge { edge: usize },
    RangeExceeded { edge: usize },
    CutUnbalanced { vertices: Vec<usize> },
    NegativeCycle { arcs: Vec<ArcRef> },
}

impl Violation {
    pub fn cut(u: &VertexSet) -> Violation {
        Violation::CutUnbalanced {
            vertices: u.iter().collect(),
        }
    }

    pub fn cut_set(&self) -> Option<VertexSet> {
        match self {
            Violation::CutUnbalanced { vertices } => {
                Some(VertexSet::from_iter(vertices.iter().copied()))
            }
            _ => None,
        }
    }
}

pub type Check = Result<(), Violation>;

/// ok iff conservation holds at every vertex, no edge carries zero, and
/// every |value| is within [1, k-1]. For unbounded k the range check is
/// only the nonzero requirement.
pub fn verify_nowhere_zero_k_flow(g: &Graph, f: &Flow, k: Option<i64>) -> Check {
    assert_eq!(f.len(), g.edge_count());
    let mut div = vec![0i64; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        div[u] += f.value(e);
        div[v] -= f.value(e);
    }
    if let Some(vertex) = div.iter().position(|&d| d != 0) {
        return Err(Violation::Conservation { vertex });
    }
    for e in 0..f.len() {
        if f.value(e) == 0 {
            return Err(Violation::ZeroEdge { edge: e });
        }
    }
    if let Some(k) = k {
        for e in 0..f.len() {
            if f.value(e).abs() > k - 1 {
                return Err(Violation::RangeExceeded { edge: e });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutCheckMethod {
    Hoffman,
    Brute,
}

/// ok iff every nonempty proper U has at least a 1/k fraction of its cut
/// edges leaving: |out(U)| >= |cut(U)| / k.
pub fn verify_cut_balanced(g: &Graph, o: &Orientation, k: i64, method: CutCheckMethod) -> Check {
    assert_eq!(o.len(), g.edge_count());
    assert!(k >= 2);
    match method {
        CutCheckMethod::Brute => {
            assert!(g.vertex_count() <= 20, "brute cut check needs n <= 20");
            let po = o.to_partial();
            for bits in 1..(1u128 << g.vertex_count()) - 1 {
                let u = VertexSet::from_bits(bits);
                let cut = g.cut_edges(&u).len() as i64;
                let out = g.out_arcs(&po, &u).len() as i64;
                if k * out < cut {
                    return Err(Violation::cut(&u));
                }
            }
            Ok(())
        }
        CutCheckMethod::Hoffman => {
            // An orientation is k-cut-balanced iff it induces a circulation
            // with bounds [1, k-1] on its arcs; the Hoffman certificate is
            // exactly a violating cut.
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
            let d = BoundedDigraph::new(g.vertex_count(), arcs).expect("bounds are tiny");
            match feasible_circulation(&d) {
                FeasibilityResult::Feasible(_) => Ok(()),
                FeasibilityResult::Infeasible(u) => {
                    debug_assert!(recheck_cut(g, o, k, &u));
                    Err(Violation::cut(&u))
                }
            }
        }
    }
}

fn recheck_cut(g: &Graph, o: &Orientation, k: i64, u: &VertexSet) -> bool {
    let cut = g.cut_edges(u).len() as i64;
    let out = g.out_arcs(&o.to_partial(), u).len() as i64;
    k * out < cut
}

/// ok iff |out_F(U)| <= (k-1)/k * |cut_F(U)| for every U, with the cut
/// measured relative to the oriented subset F only.
pub fn verify_partial_cut_balanced(g: &Graph, po: &PartialOrientation, k: i64) -> Check {
    assert_eq!(po.len(), g.edge_count());
    assert!(k >= 2);
    // Over the oriented subgraph the partial condition is the cut-balanced
    // condition of the complement side, so Hoffman applies on (V, F).
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
        return Ok(());
    }
    let d = BoundedDigraph::new(g.vertex_count(), arcs).expect("bounds are tiny");
    match feasible_circulation(&d) {
        FeasibilityResult::Feasible(_) => Ok(()),
        FeasibilityResult::Infeasible(u) => {
            // Hoffman certifies lower(into U) > upper(out of U); the partial
            // condition fails at the complement of U.
            let w = u.complement(g.vertex_count());
            debug_assert!(recheck_partial_cut(g, po, k, &w));
            Err(Violation::cut(&w))
        }
    }
}

/// Brute-force variant of the partial check, n <= 20; used as an
/// independent cross-check.
pub fn verify_partial_cut_balanced_brute(g: &Graph, po: &PartialOrientation, k: i64) -> Check {
    assert!(g.vertex_count() <= 20, "brute cut check needs n <= 20");
    for bits in 1..(1u128 << g.vertex_count()) - 1 {
        let u = VertexSet::from_bits(bits);
        if recheck_partial_cut(g, po, k, &u) {
            return Err(Violation::cut(&u));
        }
    }
    Ok(())
}

fn recheck_partial_cut(g: &Graph, po: &PartialOrientation, k: i64, u: &VertexSet) -> bool {
    let cut_f = g
        .cut_edges(u)
        .iter()
        .filter(|&&e| po.dir(e).is_some())
        .count() as i64;
    let out = g.out_arcs(po, u).len() as i64;
    k * out > (k - 1) * cut_f
}

/// ok iff no directed cycle of supp+(f) has negative total weight under
/// c(e) * (3 - f(e)); a violating cycle is returned as the witness.
pub fn verify_locally_optimal(g: &Graph, c: &CostFunction, f: &Flow) -> Result<Check, VerifyError> {
    if !c.is_symmetric() {
        return Err(VerifyError::NotSymmetric);
    }
    if verify_nowhere_zero_k_flow(g, f, Some(6)).is_err() {
        return Err(VerifyError::NotNz6Flow);
    }
    let mut arcs = Vec::with_capacity(g.edge_count());
    let mut arc_refs = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let dir = if f.value(e) > 0 {
            Direction::Forward
        } else {
            Direction::Backward
        };
        let arc = ArcRef { edge: e, dir };
        let (tail, head) = g.arc_endpoints(arc);
        arcs.push((tail, head, c.symmetric_cost(e) * (3 - f.value(e).abs())));
        arc_refs.push(arc);
    }
    match crate::circulation::find_negative_cycle(g.vertex_count(), &arcs) {
        None => Ok(Ok(())),
        Some(cycle) => Ok(Err(Violation::NegativeCycle {
            arcs: cycle.into_iter().map(|i| arc_refs[i]).collect(),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::Orientation;

    fn cycle_flow(n: usize, v: i64) -> (Graph, Flow) {
        let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap();
        let f = Flow::new(&g, vec![v; n]).unwrap();
        (g, f)
    }

    #[test]
    fn nz_flow_checker_examples() {
        let (g, f) = cycle_flow(3, 1);
        assert_eq!(verify_nowhere_zero_k_flow(&g, &f, Some(2)), Ok(()));

        // (1,1,2) consistently oriented around a triangle is not conserved.
        let g3 = corpus::triangle();
        let bad = Flow::from_raw_values(vec![1, 1, 2]);
        assert_eq!(
            verify_nowhere_zero_k_flow(&g3, &bad, Some(3)),
            Err(Violation::Conservation { vertex: 0 })
        );

        let (g, f) = cycle_flow(3, 3);
        assert_eq!(
            verify_nowhere_zero_k_flow(&g, &f, Some(3)),
            Err(Violation::RangeExceeded { edge: 0 })
        );
        assert_eq!(verify_nowhere_zero_k_flow(&g, &f, Some(4)), Ok(()));
        assert_eq!(verify_nowhere_zero_k_flow(&g, &f, None), Ok(()));
        assert_eq!(
            verify_nowhere_zero_k_flow(&g, &Flow::zero(3), Some(4)),
            Err(Violation::ZeroEdge { edge: 0 })
        );
    }

    #[test]
    fn cut_balanced_examples() {
        let g = corpus::triangle();
        let cyclic = Orientation::all_forward(3);
        for method in [CutCheckMethod::Brute, CutCheckMethod::Hoffman] {
            assert_eq!(verify_cut_balanced(&g, &cyclic, 3, method), Ok(()));
        }
        // 0->1, 2->1, 0->2 has a sink at vertex 1.
        let sink = Orientation::new(vec![
            Direction::Forward,
            Direction::Backward,
            Direction::Backward,
        ]);
        for method in [CutCheckMethod::Brute, CutCheckMethod::Hoffman] {
            let witness = verify_cut_balanced(&g, &sink, 6, method).unwrap_err();
            let u = witness.cut_set().unwrap();
            assert!(recheck_cut(&g, &sink, 6, &u), "witness must re-validate");
        }
    }

    #[test]
    fn hoffman_and_brute_agree_on_random_orientations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(n..=n + 6);
            let g = corpus::random_two_edge_connected(trial, n, m);
            let o = Orientation::new(
                (0..m)
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            Direction::Forward
                        } else {
                            Direction::Backward
                        }
                    })
                    .collect(),
            );
            let k = rng.gen_range(2..=6);
            let brute = verify_cut_balanced(&g, &o, k, CutCheckMethod::Brute);
            let hoffman = verify_cut_balanced(&g, &o, k, CutCheckMethod::Hoffman);
            assert_eq!(brute.is_ok(), hoffman.is_ok(), "trial {trial}");
            if let Err(v) = hoffman {
                assert!(recheck_cut(&g, &o, k, &v.cut_set().unwrap()));
            }
        }
    }

    #[test]
    fn partial_cut_balanced_examples() {
        let g = corpus::triangle();
        assert_eq!(
            verify_partial_cut_balanced(&g, &PartialOrientation::undecided(3), 6),
            Ok(())
        );
        let mut single = PartialOrientation::undecided(3);
        single.set(0, Direction::Forward);
        let witness = verify_partial_cut_balanced(&g, &single, 6).unwrap_err();
        let u = witness.cut_set().unwrap();
        assert!(recheck_partial_cut(&g, &single, 6, &u));
        assert!(verify_partial_cut_balanced_brute(&g, &single, 6).is_err());
    }

    #[test]
    fn partial_hoffman_agrees_with_brute() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for trial in 0..200 {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(n..=n + 5);
            let g = corpus::random_two_edge_connected(1000 + trial, n, m);
            let po = PartialOrientation::new(
                (0..m)
                    .map(|_| match rng.gen_range(0..3) {
                        0 => Some(Direction::Forward),
                        1 => Some(Direction::Backward),
                        _ => None,
                    })
                    .collect(),
            );
            let k = rng.gen_range(2..=6);
            let brute = verify_partial_cut_balanced_brute(&g, &po, k);
            let hoffman = verify_partial_cut_balanced(&g, &po, k);
            assert_eq!(brute.is_ok(), hoffman.is_ok(), "trial {trial}");
        }
    }

    #[test]
    fn local_opt_examples() {
        let (g, f3) = cycle_flow(4, 3);
        let unit = CostFunction::unit(4);
        assert_eq!(verify_locally_optimal(&g, &unit, &f3).unwrap(), Ok(()));

        let (_, f5) = cycle_flow(4, 5);
        let witness = verify_locally_optimal(&g, &unit, &f5).unwrap().unwrap_err();
        match witness {
            Violation::NegativeCycle { arcs } => {
                let w: i64 = arcs
                    .iter()
                    .map(|a| unit.symmetric_cost(a.edge) * (3 - f5.arc_value(*a).abs()))
                    .sum();
                assert!(w < 0);
                assert_eq!(arcs.len(), 4);
            }
            other => panic!("expected a negative cycle, got {other:?}"),
        }

        let (_, f1) = cycle_flow(4, 1);
        assert_eq!(verify_locally_optimal(&g, &unit, &f1).unwrap(), Ok(()));

        let (_, f7) = cycle_flow(4, 7);
        assert_eq!(
            verify_locally_optimal(&g, &unit, &f7),
            Err(VerifyError::NotNz6Flow)
        );
    }
}
