//! Command-line front end: solvers, verifiers, brute-force oracles, and
//! instance generators over the text formats.
//!
//! Solution artifacts go to stdout (or `--out`); certificates are JSON on
//! stderr (or `--cert`). Exit codes: 0 success, 1 failed verification,
//! 2 malformed input, 3 precondition failure (e.g. a graph that is not
//! 2-edge-connected, or asymmetric costs where symmetry is required).

use clap::{Parser, Subcommand};
use nzflow::approx::{swnzf_local_search, wcbo_bicriteria, wnzf_bicriteria, ApproxError};
use nzflow::corpus;
use nzflow::gadgets::{
    gen_completion_hardness, gen_cycle, gen_nae3sat_instance, zero_infinity_costs, CnfFormula,
};
use nzflow::graph::{CostFunction, Graph};
use nzflow::io;
use nzflow::lp::KBound;
use nzflow::nz6::{brute_force_min_nzk, nz6_flow};
use nzflow::rational::format_ratio;
use nzflow::verify::{
    verify_cut_balanced, verify_locally_optimal, verify_nowhere_zero_k_flow,
    verify_partial_cut_balanced, CutCheckMethod, Violation,
};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VIOLATION: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nzflow",
    about = "Minimum-cost nowhere-zero flows and cut-balanced orientations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximation solvers; write the solution to stdout or --out and a
    /// certificate JSON to stderr or --cert.
    Solve {
        #[command(subcommand)]
        problem: SolveProblem,
    },
    /// Construct a nowhere-zero 6-flow.
    Nz6 {
        /// Graph file (- or omitted: stdin).
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file; exit 0 when it verifies, 1 with a violation
    /// JSON on stdout otherwise.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Instance generators.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Brute-force oracles for small instances.
    Brute {
        #[command(subcommand)]
        kind: BruteKind,
    },
    /// Run the flow solver over every .nzg file in a directory and print
    /// a result table ordered by instance name.
    Bench {
        corpus_dir: PathBuf,
        /// Flow bound passed to the solver.
        #[arg(long, default_value = "6")]
        k: String,
    },
}

#[derive(Subcommand)]
enum SolveProblem {
    /// Weighted nowhere-zero k-flow, (6,6)-approximation.
    Wnzf {
        graph: Option<PathBuf>,
        /// Flow bound: an integer >= 6, or `inf`.
        #[arg(long)]
        k: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Also dump the relaxation solution.
        #[arg(long)]
        lp_out: Option<PathBuf>,
    },
    /// Weighted k-cut-balanced orientation, (k,6)-approximation.
    Wcbo {
        graph: Option<PathBuf>,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        lp_out: Option<PathBuf>,
    },
    /// Symmetric-cost nowhere-zero flow, local-search 3-approximation.
    Swnzf {
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Nowhere-zero k-flow check.
    Flow {
        graph: PathBuf,
        solution: PathBuf,
        /// Integer bound or `inf` for the nowhere-zero-only check.
        #[arg(long)]
        k: String,
    },
    /// k-cut-balanced orientation check.
    Cbo {
        graph: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        k: i64,
        /// Use the brute-force cut enumeration instead of the circulation
        /// route (needs n <= 20).
        #[arg(long)]
        brute: bool,
    },
    /// Partial k-cut-balanced orientation check.
    PartialCbo {
        graph: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        k: i64,
    },
    /// Local optimality of a nowhere-zero 6-flow under symmetric costs.
    LocalOpt { graph: PathBuf, solution: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    /// Orientation-completion gadget from a restricted SAT formula in
    /// DIMACS CNF; emits the graph (zero/forbidden costs) and the partial
    /// orientation.
    SatCompletion {
        cnf: Option<PathBuf>,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        po_out: Option<PathBuf>,
    },
    /// Unit-cost NAE3SAT gadget from a DIMACS CNF file.
    Nae3sat {
        cnf: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cycle graph with unit costs.
    Cycle {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random 2-edge-connected instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_cost: i64,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BruteKind {
    /// Exact minimum-cost nowhere-zero k-flow by exhaustive search.
    MinNzk {
        graph: Option<PathBuf>,
        #[arg(long)]
        k: String,
    },
    /// Brute-force cut enumeration check of a k-cut-balanced orientation.
    CboCheck {
        graph: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        k: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_MALFORMED,
        message: msg.into(),
    }
}

fn precondition(msg: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_PRECONDITION,
        message: msg.into(),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| malformed(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| malformed(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Option<PathBuf>) -> Result<(Graph, CostFunction), CliError> {
    let text = read_input(path)?;
    io::parse_graph(&text).map_err(|e| malformed(e.to_string()))
}

fn load_graph_file(path: &Path) -> Result<(Graph, CostFunction), CliError> {
    let text = read_file(path)?;
    io::parse_graph(&text).map_err(|e| malformed(e.to_string()))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError {
            code: EXIT_MALFORMED,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_cert(cert_path: &Option<PathBuf>, cert_json: &str) -> Result<(), CliError> {
    match cert_path {
        Some(p) => std::fs::write(p, cert_json).map_err(|e| CliError {
            code: EXIT_MALFORMED,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            eprintln!("{cert_json}");
            Ok(())
        }
    }
}

fn parse_k_bound(s: &str) -> Result<KBound, CliError> {
    if s == "inf" {
        Ok(KBound::Unbounded)
    } else {
        let k: i64 = s.parse().map_err(|_| malformed(format!("bad k `{s}`")))?;
        if k < 2 {
            return Err(malformed("k must be at least 2"));
        }
        Ok(KBound::Finite(k))
    }
}

fn approx_error(e: ApproxError) -> CliError {
    match e {
        ApproxError::NotTwoEdgeConnected => precondition("graph is not 2-edge-connected"),
        ApproxError::Infeasible => precondition("relaxation is infeasible"),
        ApproxError::NotSymmetric => CliError {
            code: EXIT_MALFORMED,
            message: "symmetric costs required".into(),
        },
        other => CliError {
            code: EXIT_PRECONDITION,
            message: other.to_string(),
        },
    }
}

fn violation_exit(v: &Violation) -> Result<ExitCode, CliError> {
    println!(
        "{}",
        serde_json::to_string(v).expect("violations serialize")
    );
    Ok(ExitCode::from(EXIT_VIOLATION))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve { problem } => run_solve(problem),
        Command::Nz6 { graph, out } => {
            let (g, _) = load_graph(&graph)?;
            let f = nz6_flow(&g).map_err(|_| precondition("graph is not 2-edge-connected"))?;
            emit(&out, &io::write_flow(&f))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { kind } => run_verify(kind),
        Command::Gen { kind } => run_gen(kind),
        Command::Brute { kind } => run_brute(kind),
        Command::Bench { corpus_dir, k } => run_bench(&corpus_dir, &k),
    }
}

fn run_solve(problem: SolveProblem) -> Result<ExitCode, CliError> {
    match problem {
        SolveProblem::Wnzf {
            graph,
            k,
            out,
            cert,
            lp_out,
        } => {
            let k = parse_k_bound(&k)?;
            let (g, c) = load_graph(&graph)?;
            if let Some(lp_path) = &lp_out {
                let sol =
                    nzflow::lp::solve_wnzf_lp(&g, &c, k).map_err(|e| approx_error(e.into()))?;
                emit(&Some(lp_path.clone()), &io::write_lp_solution(&sol))?;
            }
            let (f, certificate) = wnzf_bicriteria(&g, &c, k).map_err(approx_error)?;
            emit(&out, &io::write_flow(&f))?;
            emit_cert(
                &cert,
                &serde_json::to_string(&certificate).expect("serializable"),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        SolveProblem::Wcbo {
            graph,
            k,
            out,
            cert,
            lp_out,
        } => {
            if k < 2 {
                return Err(malformed("k must be at least 2"));
            }
            let (g, c) = load_graph(&graph)?;
            if let Some(lp_path) = &lp_out {
                let sol =
                    nzflow::lp::solve_wcbo_lp(&g, &c, k).map_err(|e| approx_error(e.into()))?;
                emit(&Some(lp_path.clone()), &io::write_lp_solution(&sol))?;
            }
            let (o, certificate) = wcbo_bicriteria(&g, &c, k).map_err(approx_error)?;
            emit(&out, &io::write_partial_orientation(&o.to_partial()))?;
            emit_cert(
                &cert,
                &serde_json::to_string(&certificate).expect("serializable"),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        SolveProblem::Swnzf { graph, out, cert } => {
            let (g, c) = load_graph(&graph)?;
            if !c.is_symmetric() {
                return Err(malformed("swnzf requires symmetric costs"));
            }
            let (f, certificate) = swnzf_local_search(&g, &c).map_err(approx_error)?;
            emit(&out, &io::write_flow(&f))?;
            emit_cert(
                &cert,
                &serde_json::to_string(&certificate).expect("serializable"),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_verify(kind: VerifyKind) -> Result<ExitCode, CliError> {
    match kind {
        VerifyKind::Flow { graph, solution, k } => {
            let (g, _) = load_graph_file(&graph)?;
            let f = io::parse_flow(&read_file(&solution)?).map_err(|e| malformed(e.to_string()))?;
            if f.len() != g.edge_count() {
                return Err(malformed("flow and graph disagree on the edge count"));
            }
            let bound = match parse_k_bound(&k)? {
                KBound::Finite(k) => Some(k),
                KBound::Unbounded => None,
            };
            match verify_nowhere_zero_k_flow(&g, &f, bound) {
                Ok(()) => Ok(ExitCode::SUCCESS),
                Err(v) => violation_exit(&v),
            }
        }
        VerifyKind::Cbo {
            graph,
            solution,
            k,
            brute,
        } => {
            let (g, _) = load_graph_file(&graph)?;
            let po = io::parse_partial_orientation(&read_file(&solution)?)
                .map_err(|e| malformed(e.to_string()))?;
            if po.len() != g.edge_count() {
                return Err(malformed(
                    "orientation and graph disagree on the edge count",
                ));
            }
            let o = po
                .complete()
                .ok_or_else(|| malformed("orientation has undecided edges"))?;
            let method = if brute {
                CutCheckMethod::Brute
            } else {
                CutCheckMethod::Hoffman
            };
            match verify_cut_balanced(&g, &o, k, method) {
                Ok(()) => Ok(ExitCode::SUCCESS),
                Err(v) => violation_exit(&v),
            }
        }
        VerifyKind::PartialCbo { graph, solution, k } => {
            let (g, _) = load_graph_file(&graph)?;
            let po = io::parse_partial_orientation(&read_file(&solution)?)
                .map_err(|e| malformed(e.to_string()))?;
            if po.len() != g.edge_count() {
                return Err(malformed(
                    "orientation and graph disagree on the edge count",
                ));
            }
            match verify_partial_cut_balanced(&g, &po, k) {
                Ok(()) => Ok(ExitCode::SUCCESS),
                Err(v) => violation_exit(&v),
            }
        }
        VerifyKind::LocalOpt { graph, solution } => {
            let (g, c) = load_graph_file(&graph)?;
            let f = io::parse_flow(&read_file(&solution)?).map_err(|e| malformed(e.to_string()))?;
            if f.len() != g.edge_count() {
                return Err(malformed("flow and graph disagree on the edge count"));
            }
            match verify_locally_optimal(&g, &c, &f) {
                Ok(Ok(())) => Ok(ExitCode::SUCCESS),
                Ok(Err(v)) => violation_exit(&v),
                Err(e) => Err(precondition(e.to_string())),
            }
        }
    }
}

fn run_gen(kind: GenKind) -> Result<ExitCode, CliError> {
    match kind {
        GenKind::SatCompletion {
            cnf,
            k,
            out,
            po_out,
        } => {
            let phi = CnfFormula::parse_dimacs(&read_input(&cnf)?).map_err(malformed)?;
            let inst = gen_completion_hardness(&phi, k).map_err(|e| malformed(e.to_string()))?;
            let costs = zero_infinity_costs(&inst.graph, &inst.partial);
            let graph_text = io::write_graph(&inst.graph, &costs);
            let po_text = io::write_partial_orientation(&inst.partial);
            match (&out, &po_out) {
                (None, None) => {
                    // Both artifacts concatenate losslessly on stdout.
                    print!("{graph_text}{po_text}");
                }
                _ => {
                    emit(&out, &graph_text)?;
                    emit(&po_out, &po_text)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        GenKind::Nae3sat { cnf, out } => {
            let phi = CnfFormula::parse_dimacs(&read_input(&cnf)?).map_err(malformed)?;
            let inst = gen_nae3sat_instance(&phi).map_err(|e| malformed(e.to_string()))?;
            eprintln!(
                "target_value {} (edges {} plus cycle slack {})",
                inst.target_value,
                inst.graph.edge_count(),
                inst.target_value - inst.graph.edge_count() as i64
            );
            emit(&out, &io::write_graph(&inst.graph, &inst.costs))?;
            Ok(ExitCode::SUCCESS)
        }
        GenKind::Cycle { n, out } => {
            if n < 2 {
                return Err(malformed("cycle needs n >= 2"));
            }
            let (g, c) = gen_cycle(n);
            emit(&out, &io::write_graph(&g, &c))?;
            Ok(ExitCode::SUCCESS)
        }
        GenKind::Random {
            n,
            m,
            seed,
            max_cost,
            symmetric,
            out,
        } => {
            if n < 2 || m < n {
                return Err(malformed("random instance needs n >= 2 and m >= n"));
            }
            let g = corpus::random_two_edge_connected(seed, n, m);
            let c = corpus::random_costs(seed, &g, max_cost, symmetric, 0.0);
            emit(&out, &io::write_graph(&g, &c))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_brute(kind: BruteKind) -> Result<ExitCode, CliError> {
    match kind {
        BruteKind::MinNzk { graph, k } => {
            let k = parse_k_bound(&k)?;
            let (g, c) = load_graph(&graph)?;
            match brute_force_min_nzk(&g, &c, k).map_err(|e| precondition(e.to_string()))? {
                Some((f, cost)) => {
                    println!("minimum {cost}");
                    print!("{}", io::write_flow(&f));
                }
                None => println!("infeasible"),
            }
            Ok(ExitCode::SUCCESS)
        }
        BruteKind::CboCheck { graph, solution, k } => {
            let (g, _) = load_graph_file(&graph)?;
            let po = io::parse_partial_orientation(&read_file(&solution)?)
                .map_err(|e| malformed(e.to_string()))?;
            let o = po
                .complete()
                .ok_or_else(|| malformed("orientation has undecided edges"))?;
            match verify_cut_balanced(&g, &o, k, CutCheckMethod::Brute) {
                Ok(()) => {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                }
                Err(v) => violation_exit(&v),
            }
        }
    }
}

fn run_bench(dir: &Path, k: &str) -> Result<ExitCode, CliError> {
    let k = parse_k_bound(k)?;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| malformed(format!("{}: {e}", dir.display())))?
        .filter_map(|r| r.ok().map(|d| d.path()))
        .filter(|p| p.extension().map_or(false, |x| x == "nzg"))
        .collect();
    entries.sort();
    println!(
        "{:<24} {:>12} {:>12} {:>8} {:>10} {:>10}",
        "instance", "lp_value", "output", "ratio", "flow_bound", "time_ms"
    );
    for path in entries {
        let (g, c) = load_graph_file(&path)?;
        let start = std::time::Instant::now();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default();
        match wnzf_bicriteria(&g, &c, k) {
            Ok((_, cert)) => {
                let elapsed = start.elapsed().as_millis();
                let ratio = if cert.lp_value == nzflow::rational::rat(0) {
                    "inf".to_string()
                } else {
                    let r = nzflow::rational::rat(cert.output_cost) / cert.lp_value.clone();
                    format!("{:.3}", ratio_to_f64(&r))
                };
                println!(
                    "{:<24} {:>12} {:>12} {:>8} {:>10} {:>10}",
                    name,
                    format_ratio(&cert.lp_value),
                    cert.output_cost,
                    ratio,
                    cert.flow_bound,
                    elapsed
                );
            }
            Err(e) => {
                println!("{:<24} failed: {}", name, approx_error(e).message);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn ratio_to_f64(r: &nzflow::rational::Rational) -> f64 {
    let num: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}
