//! Instance generators for the two hardness constructions, used as
//! structured test corpora: the orientation-completion gadget built from
//! restricted SAT, and the unit-cost minimum-flow gadget built from
//! NAE3SAT, together with its witness-flow builder.

use crate::flow::Flow;
use crate::graph::{ArcCost, CostFunction, Direction, Graph, Orientation, PartialOrientation};
use crate::verify::verify_nowhere_zero_k_flow;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal {0} references a variable out of range")]
    VarOutOfRange(i32),
    #[error("clause {0} repeats or complements a variable")]
    MalformedClause(usize),
    #[error("formula is not restricted SAT (a variable occurs more than 3 times)")]
    NotRestrictedSat,
    #[error("completion gadget needs k >= 4, got {0}")]
    KTooSmall(i64),
    #[error("formula is not NAE3SAT (every clause needs exactly 3 distinct variables)")]
    NotNae3Sat,
    #[error("assignment does not NAE-satisfy clause {0}")]
    AssignmentNotNaeSatisfying(usize),
    #[error("assignment has {got} values for {want} variables")]
    AssignmentLength { got: usize, want: usize },
}

/// CNF formula with 1-based signed literals (negative = negated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Literals may repeat within a clause (padded clauses are how small
    /// unsatisfiable NAE instances arise); generators that need distinct
    /// variables per clause check for themselves.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<CnfFormula, GadgetError> {
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(GadgetError::EmptyClause(j));
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(GadgetError::VarOutOfRange(lit));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// True iff every clause mentions each variable at most once.
    pub fn has_distinct_clause_vars(&self) -> bool {
        self.clauses.iter().all(|clause| {
            let mut vars: Vec<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            vars.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Occurrence counts (positive, negative) for variable `v` (1-based).
    pub fn occurrences(&self, v: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for clause in &self.clauses {
            for &lit in clause {
                if lit == v as i32 {
                    pos += 1;
                } else if lit == -(v as i32) {
                    neg += 1;
                }
            }
        }
        (pos, neg)
    }

    /// Every variable occurs in at most 3 clauses.
    pub fn is_restricted_sat(&self) -> bool {
        (1..=self.num_vars).all(|v| {
            let (p, n) = self.occurrences(v);
            p + n <= 3
        })
    }

    /// Every clause has exactly 3 literals (over distinct variables, which
    /// the constructor enforces).
    pub fn is_nae3sat(&self) -> bool {
        self.clauses.iter().all(|c| c.len() == 3)
    }

    pub fn satisfied_literals(&self, clause: usize, assignment: &[bool]) -> usize {
        self.clauses[clause]
            .iter()
            .filter(|&&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                (lit > 0) == value
            })
            .count()
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        (0..self.clauses.len()).all(|j| self.satisfied_literals(j, assignment) >= 1)
    }

    pub fn is_nae_satisfied(&self, assignment: &[bool]) -> bool {
        (0..self.clauses.len()).all(|j| {
            let t = self.satisfied_literals(j, assignment);
            t >= 1 && t < self.clauses[j].len()
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<CnfFormula, String> {
        let mut num_vars = None;
        let mut expected_clauses = 0usize;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 || toks[0] != "cnf" {
                    return Err("bad problem line, expected `p cnf <vars> <clauses>`".into());
                }
                num_vars = Some(toks[1].parse::<usize>().map_err(|e| e.to_string())?);
                expected_clauses = toks[2]
                    .parse()
                    .map_err(|e: std::num::ParseIntError| e.to_string())?;
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| format!("bad literal `{tok}`"))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let num_vars = num_vars.ok_or("missing `p cnf` line")?;
        if clauses.len() != expected_clauses {
            return Err(format!(
                "declared {expected_clauses} clauses, found {}",
                clauses.len()
            ));
        }
        CnfFormula::new(num_vars, clauses).map_err(|e| e.to_string())
    }
}

/// Output of the completion-hardness generator: the gadget graph, the
/// forced partial orientation, and the ids of the per-variable undecided
/// edges in the order of `variables`.
#[derive(Debug, Clone)]
pub struct CompletionInstance {
    pub graph: Graph,
    pub partial: PartialOrientation,
    /// Original (1-based) variable ids that survived preprocessing.
    pub variables: Vec<usize>,
    /// Undecided edge per surviving variable, aligned with `variables`.
    pub variable_edges: Vec<usize>,
}

impl CompletionInstance {
    /// Orients each variable edge per the assignment (false: u -> u',
    /// true: u' -> u); assignment is over `variables`, in order.
    pub fn completion_for(&self, assignment: &[bool]) -> Orientation {
        assert_eq!(assignment.len(), self.variables.len());
        let mut po = self.partial.clone();
        for (idx, &e) in self.variable_edges.iter().enumerate() {
            let dir = if assignment[idx] {
                Direction::Backward
            } else {
                Direction::Forward
            };
            po.set(e, dir);
        }
        po.complete().expect("all edges oriented")
    }
}

/// Builds the orientation-completion gadget for a restricted SAT formula:
/// the partial orientation extends to a k-cut-balanced orientation of the
/// graph exactly when the formula is satisfiable.
///
/// Preprocessing assigns one-sided variables and deletes their clauses
/// until every surviving variable occurs both ways.
pub fn gen_completion_hardness(
    phi: &CnfFormula,
    k: i64,
) -> Result<CompletionInstance, GadgetError> {
    if k < 4 {
        return Err(GadgetError::KTooSmall(k));
    }
    if !phi.is_restricted_sat() {
        return Err(GadgetError::NotRestrictedSat);
    }
    if let Some(j) = (0..phi.clauses.len()).find(|&j| {
        let mut vars: Vec<u32> = phi.clauses[j].iter().map(|l| l.unsigned_abs()).collect();
        vars.sort_unstable();
        vars.windows(2).any(|w| w[0] == w[1])
    }) {
        return Err(GadgetError::MalformedClause(j));
    }

    // Fixpoint preprocessing over live clauses.
    let mut live: Vec<Vec<i32>> = phi.clauses.to_vec();
    loop {
        let mut one_sided = None;
        for v in 1..=phi.num_vars {
            let pos = live.iter().flatten().filter(|&&l| l == v as i32).count();
            let neg = live.iter().flatten().filter(|&&l| l == -(v as i32)).count();
            if pos + neg > 0 && (pos == 0 || neg == 0) {
                one_sided = Some(v as i32);
                break;
            }
        }
        match one_sided {
            Some(v) => live.retain(|c| !c.iter().any(|&l| l.unsigned_abs() as i32 == v)),
            None => break,
        }
    }
    let variables: Vec<usize> = (1..=phi.num_vars)
        .filter(|&v| {
            live.iter()
                .flatten()
                .any(|&l| l.unsigned_abs() as usize == v)
        })
        .collect();

    // Vertex layout: r = 0, then u_i, u'_i pairs, then clause nodes.
    let u_of = |vi: usize| 1 + 2 * vi; // index into `variables`
    let up_of = |vi: usize| 2 + 2 * vi;
    let clause_node = |j: usize| 1 + 2 * variables.len() + j;
    let n = 1 + 2 * variables.len() + live.len();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut dirs: Vec<Option<Direction>> = Vec::new();
    let push_arc = |edges: &mut Vec<(usize, usize)>,
                    dirs: &mut Vec<Option<Direction>>,
                    from: usize,
                    to: usize| {
        edges.push((from, to));
        dirs.push(Some(Direction::Forward));
    };

    for (vi, &v) in variables.iter().enumerate() {
        let pos = live.iter().flatten().filter(|&&l| l == v as i32).count() as i64;
        let neg = live.iter().flatten().filter(|&&l| l == -(v as i32)).count() as i64;
        debug_assert!(pos >= 1 && neg >= 1 && pos + neg <= 3);
        push_arc(&mut edges, &mut dirs, 0, u_of(vi));
        for _ in 0..(k - pos - 2) {
            push_arc(&mut edges, &mut dirs, u_of(vi), 0);
        }
        push_arc(&mut edges, &mut dirs, 0, up_of(vi));
        for _ in 0..(k - neg - 2) {
            push_arc(&mut edges, &mut dirs, up_of(vi), 0);
        }
    }
    for (j, clause) in live.iter().enumerate() {
        for &lit in clause {
            let vi = variables
                .iter()
                .position(|&v| v == lit.unsigned_abs() as usize)
                .expect("surviving clause references surviving variables");
            let from = if lit > 0 { u_of(vi) } else { up_of(vi) };
            push_arc(&mut edges, &mut dirs, from, clause_node(j));
        }
        for _ in 0..=clause.len() {
            push_arc(&mut edges, &mut dirs, clause_node(j), 0);
        }
    }
    let mut variable_edges = Vec::with_capacity(variables.len());
    for vi in 0..variables.len() {
        variable_edges.push(edges.len());
        edges.push((u_of(vi), up_of(vi)));
        dirs.push(None);
    }

    let graph = Graph::new(n, edges).expect("gadget indices are consistent");
    let partial = PartialOrientation::new(dirs);
    Ok(CompletionInstance {
        graph,
        partial,
        variables,
        variable_edges,
    })
}

/// Zero/forbidden cost pattern realizing a forced partial orientation:
/// cost 0 on the oriented arcs, forbidden on their reverses, 0 on both
/// arcs of undecided edges.
pub fn zero_infinity_costs(g: &Graph, po: &PartialOrientation) -> CostFunction {
    let entries = (0..g.edge_count())
        .map(|e| match po.dir(e) {
            Some(Direction::Forward) => (ArcCost::Finite(0), ArcCost::Forbidden),
            Some(Direction::Backward) => (ArcCost::Forbidden, ArcCost::Finite(0)),
            None => (ArcCost::Finite(0), ArcCost::Finite(0)),
        })
        .collect();
    CostFunction::new(g, entries).expect("all finite entries are zero")
}

/// Output of the NAE3SAT generator: graph, unit costs, and the wiring
/// metadata needed to build witness flows.
#[derive(Debug, Clone)]
pub struct NaeInstance {
    pub graph: Graph,
    pub costs: CostFunction,
    pub formula: CnfFormula,
    /// d_i = max(positive, negative occurrences) per variable (1-based
    /// variables, index 0 unused variables keep d = 0 and no cycle).
    pub d: Vec<usize>,
    /// Target: |E| + sum of d_i, the minimum total flow value achieved
    /// exactly when the formula is NAE-satisfiable.
    pub target_value: i64,
    /// Cycle arc ids per variable: cycle_edges[i][s] is the edge
    /// (u^i_{s+1}, u^i_{s+2 mod 2d}).
    cycle_edges: Vec<Vec<usize>>,
    /// Spoke edge id and cycle slot (variable, 1-based slot t) per
    /// (clause, literal position).
    clause_spokes: Vec<Vec<(usize, usize, usize)>>,
    /// Spokes to the hub: (edge id, variable, slot).
    hub_spokes: Vec<(usize, usize, usize)>,
    /// Edge id of (v_j, v_0) per clause.
    clause_hub_edges: Vec<usize>,
}

/// Builds the unit-cost NAE3SAT gadget: a cycle of length 2*d_i per
/// variable, odd slots wired to clauses with positive occurrences, even
/// slots to negative ones, unused slots to the hub, plus one hub edge per
/// clause. The minimum total value of a nowhere-zero flow equals
/// |E| + sum d_i exactly when the formula is NAE-satisfiable.
pub fn gen_nae3sat_instance(phi: &CnfFormula) -> Result<NaeInstance, GadgetError> {
    if !phi.is_nae3sat() {
        return Err(GadgetError::NotNae3Sat);
    }
    let nv = phi.num_vars;
    let mut d = vec![0usize; nv + 1];
    for v in 1..=nv {
        let (p, n) = phi.occurrences(v);
        d[v] = p.max(n);
    }
    // Vertex layout: hub = 0, then cycle vertices per variable, then
    // clause nodes.
    let mut cycle_base = vec![0usize; nv + 1];
    let mut next = 1usize;
    for v in 1..=nv {
        cycle_base[v] = next;
        next += 2 * d[v];
    }
    let clause_node_base = next;
    let n_vertices = next + phi.clauses.len();
    let node = |v: usize, t: usize| cycle_base[v] + (t - 1); // slot t in 1..=2d

    let mut edges = Vec::new();
    let mut cycle_edges = vec![Vec::new(); nv + 1];
    for v in 1..=nv {
        for s in 1..=2 * d[v] {
            let to = if s == 2 * d[v] { 1 } else { s + 1 };
            cycle_edges[v].push(edges.len());
            edges.push((node(v, s), node(v, to)));
        }
    }

    // Slot queues: odd slots serve positive literals, even slots negative.
    let mut next_odd = vec![1usize; nv + 1];
    let mut next_even = vec![2usize; nv + 1];
    let mut used = vec![Vec::new(); nv + 1];
    let mut clause_spokes = Vec::with_capacity(phi.clauses.len());
    for (j, clause) in phi.clauses.iter().enumerate() {
        let mut spokes = Vec::with_capacity(3);
        for &lit in clause {
            let v = lit.unsigned_abs() as usize;
            let slot = if lit > 0 {
                let t = next_odd[v];
                next_odd[v] += 2;
                t
            } else {
                let t = next_even[v];
                next_even[v] += 2;
                t
            };
            debug_assert!(slot <= 2 * d[v]);
            used[v].push(slot);
            spokes.push((edges.len(), v, slot));
            edges.push((node(v, slot), clause_node_base + j));
        }
        clause_spokes.push(spokes);
    }
    let mut hub_spokes = Vec::new();
    for v in 1..=nv {
        for t in 1..=2 * d[v] {
            if !used[v].contains(&t) {
                hub_spokes.push((edges.len(), v, t));
                edges.push((node(v, t), 0));
            }
        }
    }
    let mut clause_hub_edges = Vec::with_capacity(phi.clauses.len());
    for j in 0..phi.clauses.len() {
        clause_hub_edges.push(edges.len());
        edges.push((clause_node_base + j, 0));
    }

    let graph = Graph::new(n_vertices, edges).expect("gadget indices consistent");
    let costs = CostFunction::unit(graph.edge_count());
    let target_value = graph.edge_count() as i64 + d.iter().map(|&x| x as i64).sum::<i64>();
    Ok(NaeInstance {
        graph,
        costs,
        formula: phi.clone(),
        d,
        target_value,
        cycle_edges,
        clause_spokes,
        hub_spokes,
        clause_hub_edges,
    })
}

/// Builds the witness nowhere-zero 3-flow of total value exactly
/// `target_value` from a NAE-satisfying assignment.
pub fn witness_flow_from_assignment(
    inst: &NaeInstance,
    assignment: &[bool],
) -> Result<Flow, GadgetError> {
    let phi = &inst.formula;
    if assignment.len() != phi.num_vars {
        return Err(GadgetError::AssignmentLength {
            got: assignment.len(),
            want: phi.num_vars,
        });
    }
    for j in 0..phi.clauses.len() {
        let t = phi.satisfied_literals(j, assignment);
        if t == 0 || t == phi.clauses[j].len() {
            return Err(GadgetError::AssignmentNotNaeSatisfying(j));
        }
    }
    let g = &inst.graph;
    let mut values = vec![0i64; g.edge_count()];
    // Cycles: oriented along storage; odd arcs start at odd slots.
    for v in 1..=phi.num_vars {
        for (s0, &e) in inst.cycle_edges[v].iter().enumerate() {
            let slot = s0 + 1;
            let odd_arc = slot % 2 == 1;
            let heavy_on_even = assignment[v - 1];
            values[e] = if odd_arc == heavy_on_even { 1 } else { 2 };
        }
    }
    // Spokes: true literals point into the clause node; the same rule
    // routes unused slots into the hub.
    let spoke_value = |v: usize, slot: usize| -> i64 {
        let odd_slot = slot % 2 == 1;
        // Odd slots carry the positive side: they point outward exactly
        // when the variable is true.
        if odd_slot == assignment[v - 1] {
            1
        } else {
            -1
        }
    };
    for spokes in &inst.clause_spokes {
        for &(e, v, slot) in spokes {
            values[e] = spoke_value(v, slot);
        }
    }
    for &(e, v, slot) in &inst.hub_spokes {
        values[e] = spoke_value(v, slot);
    }
    for (j, &e) in inst.clause_hub_edges.iter().enumerate() {
        let t = phi.satisfied_literals(j, assignment);
        values[e] = match t {
            2 => 1,  // two in, one out: forward (v_j -> hub)
            1 => -1, // one in, two out: backward (hub -> v_j)
            _ => unreachable!("nae-satisfaction checked above"),
        };
    }
    let f = Flow::new(g, values).expect("witness construction conserves");
    assert_eq!(verify_nowhere_zero_k_flow(g, &f, Some(3)), Ok(()));
    let total: i64 = f.values().iter().map(|x| x.abs()).sum();
    assert_eq!(total, inst.target_value, "witness hits the target exactly");
    Ok(f)
}

/// Cycle graph with unit symmetric costs.
pub fn gen_cycle(n: usize) -> (Graph, CostFunction) {
    assert!(n >= 2);
    let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap();
    let c = CostFunction::unit(n);
    (g, c)
}
