//! Signed-extension representation of k-flows and their algebra.
//!
//! A flow stores one signed integer per edge: value `v` on edge `e`
//! means the forward arc carries `v` and the backward arc carries `-v`,
//! so antisymmetry holds by construction. Conservation is validated on
//! every constructor and rechecked (debug builds) after each operation.

use crate::graph::{ArcCost, ArcRef, CostFunction, Direction, Graph, PartialOrientation};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("flow conservation violated at vertex {0}")]
    ConservationViolated(usize),
    #[error("value {0} on an oriented edge must be >= 1")]
    NonpositiveValue(i64),
    #[error("expected {expected} values (one per oriented edge), got {got}")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error("flows live on different graphs ({0} vs {1} edges)")]
    GraphMismatch(usize, usize),
    #[error("supports do not cover edge {0}")]
    SupportNotCovering(usize),
    #[error("edge {edge} carries {value}, outside the {k}-flow range")]
    BoundViolated { edge: usize, value: i64, k: i64 },
    #[error("forbidden arc of edge {0} carries flow")]
    ForbiddenArcUsed(usize),
}

/// Integer flow in extension form: `value(e)` is the flow on the forward
/// arc, its negation the flow on the backward arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    values: Vec<i64>,
}

impl Flow {
    /// Validates conservation against `g` before accepting the values.
    pub fn new(g: &Graph, values: Vec<i64>) -> Result<Flow, FlowError> {
        assert_eq!(values.len(), g.edge_count());
        if let Some(v) = conservation_violation(g, &values) {
            return Err(FlowError::ConservationViolated(v));
        }
        Ok(Flow { values })
    }

    /// Wraps values without checking conservation. Deserialized solution
    /// files go through here so the verifiers get to judge them.
    pub fn from_raw_values(values: Vec<i64>) -> Flow {
        Flow { values }
    }

    pub fn zero(m: usize) -> Flow {
        Flow { values: vec![0; m] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, edge: usize) -> i64 {
        self.values[edge]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Flow on a specific arc (negated for the backward copy).
    pub fn arc_value(&self, arc: ArcRef) -> i64 {
        match arc.dir {
            Direction::Forward => self.values[arc.edge],
            Direction::Backward => -self.values[arc.edge],
        }
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.values.iter().all(|&v| v != 0)
    }
}

fn divergence(g: &Graph, values: &[i64]) -> Vec<i64> {
    let mut div = vec![0i64; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        div[u] += values[e];
        div[v] -= values[e];
    }
    div
}

fn conservation_violation(g: &Graph, values: &[i64]) -> Option<usize> {
    divergence(g, values).iter().position(|&d| d != 0)
}

/// Builds the extension of a partial k-flow: `values` gives one positive
/// integer per oriented edge, in increasing edge-id order.
pub fn extend(g: &Graph, po: &PartialOrientation, values: &[i64]) -> Result<Flow, FlowError> {
    let oriented = po.oriented_edges();
    if values.len() != oriented.len() {
        return Err(FlowError::ValueCountMismatch {
            expected: oriented.len(),
            got: values.len(),
        });
    }
    let mut signed = vec![0i64; g.edge_count()];
    for (&e, &val) in oriented.iter().zip(values) {
        if val < 1 {
            return Err(FlowError::NonpositiveValue(val));
        }
        signed[e] = match po.dir(e).expect("oriented edge") {
            Direction::Forward => val,
            Direction::Backward => -val,
        };
    }
    Flow::new(g, signed)
}

pub fn negate(f: &Flow) -> Flow {
    Flow {
        values: f.values.iter().map(|v| -v).collect(),
    }
}

/// The linear combination `a*f1 + b*f2`; conservation is preserved by
/// linearity, so only the graphs must match.
pub fn scale_add(a: i64, f1: &Flow, b: i64, f2: &Flow) -> Result<Flow, FlowError> {
    if f1.len() != f2.len() {
        return Err(FlowError::GraphMismatch(f1.len(), f2.len()));
    }
    let values = f1
        .values
        .iter()
        .zip(&f2.values)
        .map(|(&x, &y)| a * x + b * y)
        .collect();
    Ok(Flow { values })
}

/// Composes a k1-flow and a k2-flow with covering supports into the
/// nowhere-zero k1*k2-flow `k2*f1 + f2`. The output keeps f1's
/// orientation on supp(f1) and f2's on the rest.
pub fn compose_nowhere_zero(f1: &Flow, k1: i64, f2: &Flow, k2: i64) -> Result<Flow, FlowError> {
    if f1.len() != f2.len() {
        return Err(FlowError::GraphMismatch(f1.len(), f2.len()));
    }
    for (e, &v) in f1.values.iter().enumerate() {
        if v.abs() > k1 - 1 {
            return Err(FlowError::BoundViolated {
                edge: e,
                value: v,
                k: k1,
            });
        }
    }
    for (e, &v) in f2.values.iter().enumerate() {
        if v.abs() > k2 - 1 {
            return Err(FlowError::BoundViolated {
                edge: e,
                value: v,
                k: k2,
            });
        }
    }
    if let Some(e) = (0..f1.len()).find(|&e| f1.values[e] == 0 && f2.values[e] == 0) {
        return Err(FlowError::SupportNotCovering(e));
    }
    let out = scale_add(k2, f1, 1, f2)?;
    debug_assert!(out.is_nowhere_zero());
    debug_assert!(out.max_abs() <= k1 * k2 - 1);
    for e in 0..f1.len() {
        debug_assert!(
            f1.values[e] == 0 || out.values[e].signum() == f1.values[e].signum(),
            "composition must keep f1's orientation on its support"
        );
    }
    Ok(out)
}

/// Support edges of `f` and the partial orientation given by the sign of
/// each nonzero value.
pub fn support_orientation(f: &Flow) -> (Vec<usize>, PartialOrientation) {
    let mut support = Vec::new();
    let mut po = PartialOrientation::undecided(f.len());
    for (e, &v) in f.values.iter().enumerate() {
        if v > 0 {
            support.push(e);
            po.set(e, Direction::Forward);
        } else if v < 0 {
            support.push(e);
            po.set(e, Direction::Backward);
        }
    }
    (support, po)
}

/// Total cost: for each support edge, the cost of its chosen arc times the
/// magnitude of the flow. Errors if the support uses a forbidden arc.
pub fn flow_cost(f: &Flow, c: &CostFunction) -> Result<i64, FlowError> {
    assert_eq!(f.len(), c.len());
    let mut total = 0i64;
    for (e, &v) in f.values.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let dir = if v > 0 {
            Direction::Forward
        } else {
            Direction::Backward
        };
        match c.arc_cost(ArcRef { edge: e, dir }) {
            ArcCost::Finite(cost) => total += cost * v.abs(),
            ArcCost::Forbidden => return Err(FlowError::ForbiddenArcUsed(e)),
        }
    }
    Ok(total)
}
