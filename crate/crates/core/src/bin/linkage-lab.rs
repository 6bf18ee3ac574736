use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use linkage_lab::bounds::{m_bound, omega_bound, t_bound, theta, untangle_bound, DEFAULT_EXACT_LIMIT};
use linkage_lab::corpus::{random_pairs, random_planar};
use linkage_lab::cylgrid::CylGrid;
use linkage_lab::gammoid::{matroid_intersection, Gammoid};
use linkage_lab::insulation::{decompose, index_pattern, protection_depth};
use linkage_lab::pattern::{solve_bruteforce, Pattern};
use linkage_lab::reducer::{reduce, Feasibility, Mode};
use linkage_lab::surface::{classify, EmbeddedGraph, SurfaceSignature};
use linkage_lab::{Error, Graph};

#[derive(Parser)]
#[command(name = "linkage-lab", version, about = "Disjoint-path routing on embedded graphs")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for `random:` graph and pattern arguments.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for the exhaustive oracle.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Safe,
    Trusting,
}

#[derive(Subcommand)]
enum Cmd {
    /// Surface signature of an embedded graph.
    Classify {
        #[arg(long)]
        graph: String,
    },
    /// Decide a pattern by exhaustive search.
    Solve {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        pattern: String,
    },
    /// Route a boundary pattern in an (m, n) cylindrical grid.
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: String,
    },
    /// Gammoid rank of a set.
    Rank {
        #[arg(long)]
        graph: String,
        #[arg(long, value_delimiter = ',')]
        v1: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        v2: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Matroid intersection of two gammoids with a certificate.
    Intersect {
        #[arg(long)]
        graph0: String,
        #[arg(long, value_delimiter = ',')]
        ground0: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        targets0: Vec<usize>,
        #[arg(long)]
        graph1: String,
        /// Listed in the same order as `ground0`; element i maps to element i.
        #[arg(long, value_delimiter = ',')]
        ground1: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        targets1: Vec<usize>,
        #[arg(long)]
        target: usize,
    },
    /// Explicit bound functions.
    Bounds {
        #[command(subcommand)]
        which: BoundCmd,
    },
    /// Protection depth of a vertex.
    Protect {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        pattern: String,
    },
    /// Disc-with-strips decomposition around a protected vertex.
    Decompose {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        pattern: String,
    },
    /// Delete protected vertices.
    Reduce {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 2)]
        threshold: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Safe)]
        mode: ModeArg,
        /// Write the reduced embedding here.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    Theta {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: u64,
    },
    T {
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        c: usize,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: u64,
    },
    M {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    Untangle {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    Omega {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c: Option<u64>,
    },
}

enum Fail {
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Input(e.to_string())
    }
}

type Out = Result<(u8, serde_json::Value, String), Fail>;

struct Ctx {
    rng: ChaCha8Rng,
}

impl Ctx {
    fn read(path: &str) -> Result<String, Fail> {
        fs::read_to_string(path).map_err(|e| Fail::Input(format!("{path}: {e}")))
    }

    fn embedded(&mut self, arg: &str) -> Result<EmbeddedGraph, Fail> {
        if let Some(n) = arg.strip_prefix("random:") {
            let n: usize = n.parse().map_err(|_| Fail::Input(format!("bad size in `{arg}`")))?;
            return Ok(random_planar(&mut self.rng, n, 0.25));
        }
        Ok(EmbeddedGraph::parse(&Self::read(arg)?)?)
    }

    /// Plain graphs, or embedded ones reduced to their labelled graph.
    fn graph(&mut self, arg: &str) -> Result<Graph, Fail> {
        if arg.starts_with("random:") {
            return Ok(self.embedded(arg)?.to_graph());
        }
        let text = Self::read(arg)?;
        if text.lines().any(|l| l.trim_start().starts_with("V ")) {
            Ok(EmbeddedGraph::parse(&text)?.to_graph())
        } else {
            Ok(Graph::parse(&text)?)
        }
    }

    fn pattern(&mut self, arg: &str, labels: &[usize]) -> Result<Pattern, Fail> {
        if let Some(k) = arg.strip_prefix("random:") {
            let k: usize = k.parse().map_err(|_| Fail::Input(format!("bad size in `{arg}`")))?;
            return Ok(random_pairs(&mut self.rng, labels, k));
        }
        Ok(Pattern::parse(&Self::read(arg)?)?)
    }
}

fn paths_text(paths: &[Vec<usize>]) -> String {
    paths
        .iter()
        .map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

fn run(cli: Cli) -> Out {
    let mut cx = Ctx { rng: ChaCha8Rng::seed_from_u64(cli.seed) };
    match cli.cmd {
        Cmd::Classify { graph } => {
            let g = cx.embedded(&graph)?;
            let s = classify(&g)?;
            let text = format!("{s}\neuler {}\ngenus {}\norientable {}", s.euler(), s.genus(), s.orientable());
            Ok((0, json!({"signature": s, "euler": s.euler(), "genus": s.genus(), "orientable": s.orientable()}), text))
        }
        Cmd::Solve { graph, pattern } => {
            let g = cx.graph(&graph)?;
            let labels: Vec<usize> = g.vertices().collect();
            let p = cx.pattern(&pattern, &labels)?;
            match solve_bruteforce(&g, &p, cli.budget) {
                Ok(Some(l)) => Ok((0, json!({"verdict": "feasible", "linkage": l}), format!("feasible\n{}", paths_text(&l.paths)))),
                Ok(None) => Ok((1, json!({"verdict": "infeasible"}), "infeasible".into())),
                Err(Error::BudgetExhausted(b)) => {
                    Ok((2, json!({"verdict": "unknown", "budget": b}), format!("unknown: budget of {b} nodes exhausted")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Grid { m, n, pattern } => {
            let grid = CylGrid::build(m, n)?;
            let labels: Vec<usize> = grid.ring(0);
            let p = cx.pattern(&pattern, &labels)?;
            match grid.realize(&p) {
                Ok(l) => Ok((0, json!({"linkage": l}), paths_text(&l.paths))),
                Err(e @ (Error::NotCrossFree | Error::TooManyPairs { .. })) => {
                    Ok((1, json!({"violated": e.to_string()}), format!("violated: {e}")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Rank { graph, v1, v2, set: a } => {
            let g = cx.graph(&graph)?;
            let gm = Gammoid::new(g, set(&v1), set(&v2))?;
            let w = gm.rank_witness(&set(&a))?;
            let r = w.paths.len();
            Ok((0, json!({"rank": r, "paths": w.paths}), format!("rank {r}\n{}", paths_text(&w.paths))))
        }
        Cmd::Intersect { graph0, ground0, targets0, graph1, ground1, targets1, target } => {
            if ground0.len() != ground1.len() {
                return Err(Fail::Input("ground sets differ in size".into()));
            }
            let g0 = Gammoid::new(cx.graph(&graph0)?, set(&ground0), set(&targets0))?;
            let g1 = Gammoid::new(cx.graph(&graph1)?, set(&ground1), set(&targets1))?;
            let copy: BTreeMap<usize, usize> = ground0.iter().copied().zip(ground1.iter().copied()).collect();
            let c = matroid_intersection(&g0, &g1, &copy, target)?;
            let text = format!(
                "common {:?}\nsize {}\ntarget {} {}\npartition A {:?} B {:?}\nbound {}",
                c.common,
                c.common.len(),
                c.target,
                if c.meets_target() { "met" } else { "not met" },
                c.a,
                c.b,
                c.bound
            );
            Ok((if c.meets_target() { 0 } else { 1 }, json!(c), text))
        }
        Cmd::Bounds { which } => bounds(which),
        Cmd::Protect { graph, vertex, pattern } => {
            let g = cx.embedded(&graph)?;
            let p = cx.pattern(&pattern, g.labels())?;
            let v = g.index_of(vertex).ok_or(Error::UnknownVertex(vertex))?;
            let prot = protection_depth(&g, v, &index_pattern(&g, &p)?)?;
            let cycles: Vec<Vec<usize>> = prot.cycles.iter().map(|c| c.iter().map(|&x| g.label(x)).collect()).collect();
            let text = format!("depth {}\n{}", prot.depth, paths_text(&cycles));
            Ok((0, json!({"depth": prot.depth, "cycles": cycles}), text))
        }
        Cmd::Decompose { graph, vertex, pattern } => {
            let g = cx.embedded(&graph)?;
            let p = cx.pattern(&pattern, g.labels())?;
            let v = g.index_of(vertex).ok_or(Error::UnknownVertex(vertex))?;
            let pi = index_pattern(&g, &p)?;
            let prot = protection_depth(&g, v, &pi)?;
            if prot.depth == 0 {
                return Ok((1, json!({"depth": 0}), "vertex is not protected".into()));
            }
            match decompose(&g, &pi, v, prot.cycles) {
                Ok(d) => {
                    let mut text = format!(
                        "depth {}\ncontractible classes {} (bound {}) {}\nnon-contractible classes {} (bound {}) {}\nsplits {}\n",
                        d.cycles.len(),
                        d.contractible_classes,
                        2 * d.k,
                        if d.contractible_ok { "ok" } else { "VIOLATED" },
                        d.non_contractible_classes,
                        3 * d.genus,
                        if d.non_contractible_ok { "ok" } else { "VIOLATED" },
                        d.splits
                    );
                    for s in &d.strips {
                        let lab = |xs: &[usize]| xs.iter().map(|&x| g.label(x)).collect::<Vec<_>>();
                        text.push_str(&format!(
                            "strip {:?} edges {:?} ends {:?} | {:?}{}\n",
                            s.kind,
                            s.edges,
                            lab(&s.ends[0]),
                            lab(&s.ends[1]),
                            if s.matching { "" } else { " (not a matching)" }
                        ));
                    }
                    let code = if d.contractible_ok && d.non_contractible_ok { 0 } else { 1 };
                    Ok((code, json!(d), text.trim_end().to_string()))
                }
                Err(e @ Error::InvalidInsulation(_)) => Ok((1, json!({"insulated": false, "reason": e.to_string()}), e.to_string())),
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Reduce { graph, pattern, threshold, mode, out } => {
            let g = cx.embedded(&graph)?;
            let p = cx.pattern(&pattern, g.labels())?;
            let mode = match mode {
                ModeArg::Safe => Mode::Safe,
                ModeArg::Trusting => Mode::Trusting,
            };
            let log = reduce(&g, &p, threshold, mode, cli.budget)?;
            if let Some(path) = out {
                fs::write(&path, log.final_graph.to_text()).map_err(|e| Fail::Input(format!("{path}: {e}")))?;
            }
            let mut text = String::new();
            for s in &log.steps {
                text.push_str(&format!(
                    "{:?} vertex {} depth {} before {:?} after {:?}\n",
                    s.outcome, s.vertex, s.depth, s.before, s.after
                ));
            }
            text.push_str(&format!(
                "deleted {} discrepancies {} vertices {} final {:?}",
                log.deleted,
                log.discrepancies,
                log.final_graph.vertex_count(),
                log.final_feasibility
            ));
            let code = if log.final_feasibility == Feasibility::Unknown { 2 } else { 0 };
            Ok((code, json!(log), text))
        }
    }
}

fn bounds(which: BoundCmd) -> Out {
    let big = |n: num_bigint::BigUint| (0, json!(n.to_string()), n.to_string());
    match which {
        BoundCmd::Theta { k, n, exact_limit } => {
            let d = theta(k, n, exact_limit);
            Ok((0, json!(d), d.to_string()))
        }
        BoundCmd::T { a, b, c, k, exact_limit } => {
            let d = t_bound(SurfaceSignature::new(a, b, c), k, exact_limit)?;
            Ok((0, json!(d), d.to_string()))
        }
        BoundCmd::M { k, n } => Ok(big(m_bound(k, n))),
        BoundCmd::Untangle { k, n } => Ok(big(untangle_bound(k, n))),
        BoundCmd::Omega { k, n, c } => Ok(big(omega_bound(k, n, c)?)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok((code, j, text)) => {
            let out = match format {
                Format::Text => text,
                Format::Json => serde_json::to_string_pretty(&j).expect("json"),
            };
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::from(code)
        }
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
