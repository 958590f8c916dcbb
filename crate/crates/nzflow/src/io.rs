//! Text formats for graphs, flows, orientations, and LP solutions.
//!
//! Graph format (`.nzg`): header `nzg <n> <m>`, then m lines
//! `u v c_plus c_minus` where each cost is a nonnegative integer or the
//! literal `X` for a forbidden arc. Lines starting with `#` are comments.
//!
//! Flow format (`.nzf`): header `nzf <m>`, then m lines
//! `edge_index signed_value`.
//!
//! Orientation format (`.nzo`): header `nzo <m>`, then m lines
//! `edge_index dir` with dir one of `+` (forward), `-` (backward),
//! `?` (undecided).
//!
//! LP solution format (`.nzl`): header `nzl <m>`, then 2m lines
//! `edge_index dir num/den`, then a final line `objective num/den`.

use crate::flow::Flow;
use crate::graph::{ArcCost, CostFunction, Direction, Graph, PartialOrientation};
use crate::lp::LpSolution;
use crate::rational::{format_ratio, parse_ratio};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("{0}")]
    Invalid(String),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn bad(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed(line, msg.into())
}

pub fn write_graph(g: &Graph, c: &CostFunction) -> String {
    let mut out = format!("nzg {} {}\n", g.vertex_count(), g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (fwd, bwd) = c.entries()[e];
        let fmt = |a: ArcCost| match a {
            ArcCost::Finite(x) => x.to_string(),
            ArcCost::Forbidden => "X".to_string(),
        };
        out.push_str(&format!("{} {} {} {}\n", u, v, fmt(fwd), fmt(bwd)));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<(Graph, CostFunction), ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::Invalid("empty graph file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("nzg") {
        return Err(bad(ln, "expected header `nzg <n> <m>`"));
    }
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(ln, "bad vertex count"))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(ln, "bad edge count"))?;
    let mut edges = Vec::with_capacity(m);
    let mut costs = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Invalid(format!("expected {m} edge lines")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(bad(ln, "expected `u v c_plus c_minus`"));
        }
        let u: usize = toks[0].parse().map_err(|_| bad(ln, "bad tail index"))?;
        let v: usize = toks[1].parse().map_err(|_| bad(ln, "bad head index"))?;
        let cost = |t: &str| -> Result<ArcCost, ParseError> {
            if t == "X" {
                Ok(ArcCost::Forbidden)
            } else {
                let x: i64 = t.parse().map_err(|_| bad(ln, "bad cost"))?;
                if x < 0 {
                    return Err(bad(ln, "negative cost"));
                }
                Ok(ArcCost::Finite(x))
            }
        };
        edges.push((u, v));
        costs.push((cost(toks[2])?, cost(toks[3])?));
    }
    let g = Graph::new(n, edges).map_err(|e| ParseError::Invalid(e.to_string()))?;
    let c = CostFunction::new(&g, costs).map_err(|e| ParseError::Invalid(e.to_string()))?;
    Ok((g, c))
}

pub fn write_flow(f: &Flow) -> String {
    let mut out = format!("nzf {}\n", f.len());
    for e in 0..f.len() {
        out.push_str(&format!("{} {}\n", e, f.value(e)));
    }
    out
}

pub fn parse_flow(text: &str) -> Result<Flow, ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::Invalid("empty flow file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("nzf") {
        return Err(bad(ln, "expected header `nzf <m>`"));
    }
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(ln, "bad edge count"))?;
    let mut values = vec![None; m];
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Invalid(format!("expected {m} flow lines")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(bad(ln, "expected `edge_index value`"));
        }
        let e: usize = toks[0].parse().map_err(|_| bad(ln, "bad edge index"))?;
        let v: i64 = toks[1].parse().map_err(|_| bad(ln, "bad value"))?;
        if e >= m {
            return Err(bad(ln, "edge index out of range"));
        }
        if values[e].replace(v).is_some() {
            return Err(bad(ln, "duplicate edge index"));
        }
        values[e] = Some(v);
    }
    let values: Vec<i64> = values.into_iter().map(|v| v.unwrap()).collect();
    Ok(Flow::from_raw_values(values))
}

pub fn write_partial_orientation(po: &PartialOrientation) -> String {
    let mut out = format!("nzo {}\n", po.len());
    for e in 0..po.len() {
        let d = match po.dir(e) {
            Some(Direction::Forward) => "+",
            Some(Direction::Backward) => "-",
            None => "?",
        };
        out.push_str(&format!("{} {}\n", e, d));
    }
    out
}

pub fn parse_partial_orientation(text: &str) -> Result<PartialOrientation, ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::Invalid("empty orientation file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("nzo") {
        return Err(bad(ln, "expected header `nzo <m>`"));
    }
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(ln, "bad edge count"))?;
    let mut dirs = vec![None; m];
    let mut seen = vec![false; m];
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Invalid(format!("expected {m} orientation lines")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(bad(ln, "expected `edge_index dir`"));
        }
        let e: usize = toks[0].parse().map_err(|_| bad(ln, "bad edge index"))?;
        if e >= m {
            return Err(bad(ln, "edge index out of range"));
        }
        if seen[e] {
            return Err(bad(ln, "duplicate edge index"));
        }
        seen[e] = true;
        dirs[e] = match toks[1] {
            "+" => Some(Direction::Forward),
            "-" => Some(Direction::Backward),
            "?" => None,
            other => return Err(bad(ln, format!("bad direction `{other}`"))),
        };
    }
    Ok(PartialOrientation::new(dirs))
}

pub fn write_lp_solution(sol: &LpSolution) -> String {
    let m = sol.edge_count();
    let mut out = format!("nzl {}\n", m);
    for e in 0..m {
        out.push_str(&format!(
            "{} + {}\n",
            e,
            format_ratio(sol.arc_value(e, Direction::Forward))
        ));
        out.push_str(&format!(
            "{} - {}\n",
            e,
            format_ratio(sol.arc_value(e, Direction::Backward))
        ));
    }
    out.push_str(&format!("objective {}\n", format_ratio(&sol.objective)));
    out
}

pub fn parse_lp_solution(text: &str) -> Result<LpSolution, ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::Invalid("empty lp solution file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("nzl") {
        return Err(bad(ln, "expected header `nzl <m>`"));
    }
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(ln, "bad edge count"))?;
    let mut values = vec![None; 2 * m];
    for _ in 0..2 * m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Invalid(format!("expected {} arc lines", 2 * m)))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(bad(ln, "expected `edge_index dir num/den`"));
        }
        let e: usize = toks[0].parse().map_err(|_| bad(ln, "bad edge index"))?;
        if e >= m {
            return Err(bad(ln, "edge index out of range"));
        }
        let slot = match toks[1] {
            "+" => 2 * e,
            "-" => 2 * e + 1,
            other => return Err(bad(ln, format!("bad direction `{other}`"))),
        };
        let v = parse_ratio(toks[2]).ok_or_else(|| bad(ln, "bad rational"))?;
        if values[slot].replace(v).is_some() {
            return Err(bad(ln, "duplicate arc"));
        }
    }
    let (ln, line) = lines
        .next()
        .ok_or_else(|| ParseError::Invalid("missing objective line".into()))?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "objective" {
        return Err(bad(ln, "expected `objective num/den`"));
    }
    let objective = parse_ratio(toks[1]).ok_or_else(|| bad(ln, "bad rational"))?;
    let values: Vec<_> = values.into_iter().map(|v| v.unwrap()).collect();
    Ok(LpSolution::from_parts(values, objective, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn graph_round_trip_with_comments_and_forbidden() {
        let g = corpus::triangle();
        let c = CostFunction::new(
            &g,
            vec![
                (ArcCost::Finite(3), ArcCost::Finite(0)),
                (ArcCost::Finite(1), ArcCost::Forbidden),
                (ArcCost::Finite(0), ArcCost::Finite(7)),
            ],
        )
        .unwrap();
        let text = write_graph(&g, &c);
        let with_comments = format!("# a triangle\n{text}# trailing\n");
        let (g2, c2) = parse_graph(&with_comments).unwrap();
        assert_eq!(g, g2);
        assert_eq!(c, c2);
    }

    #[test]
    fn flow_round_trip() {
        let g = corpus::triangle();
        let f = Flow::new(&g, vec![2, 2, 2]).unwrap();
        assert_eq!(parse_flow(&write_flow(&f)).unwrap(), f);
    }

    #[test]
    fn orientation_round_trip() {
        let mut po = PartialOrientation::undecided(3);
        po.set(0, Direction::Forward);
        po.set(2, Direction::Backward);
        assert_eq!(
            parse_partial_orientation(&write_partial_orientation(&po)).unwrap(),
            po
        );
    }

    #[test]
    fn lp_solution_round_trip() {
        use crate::rational::{rat, rat_frac};
        let values = vec![rat(1), rat(0), rat_frac(1, 2), rat_frac(1, 2)];
        let sol = LpSolution::from_parts(values, rat(5), true);
        let parsed = parse_lp_solution(&write_lp_solution(&sol)).unwrap();
        assert_eq!(parsed.values(), sol.values());
        assert_eq!(parsed.objective, sol.objective);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse_graph("nzg 2").is_err());
        assert!(parse_graph("nzg 2 1\n0 1 -3 0").is_err());
        assert!(parse_graph("nzg 2 1\n0 0 1 1").is_err());
        assert!(parse_flow("nzf 2\n0 1\n0 2").is_err());
        assert!(parse_partial_orientation("nzo 1\n0 *").is_err());
    }
}
