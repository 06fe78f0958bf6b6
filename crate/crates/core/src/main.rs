use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use liberatrix::catalog::catalog;
use liberatrix::exact::parse_rat_matrix;
use liberatrix::graph::{EdgeSet, Graph};
use liberatrix::liberation::directsum::directsum_liberation;
use liberatrix::liberation::liberate::{liberate, LiberateOptions};
use liberatrix::liberation::realize::{realize_on_graph_with, realize_spectrum, shape_graph, RealizeOptions, Shape};
use liberatrix::liberation::{
    enumerate_minimal_liberation_sets, is_graph_liberation_set, is_liberation_set, CheckMode, GraphVerdict,
};
use liberatrix::matrix::{to_f64, RatMatrix};
use liberatrix::numeric::{expand_spectrum, Mat, SymMatrix};
use liberatrix::report::RunReport;
use liberatrix::reproduce::{reproduce_with, TARGETS};
use liberatrix::strong::{has_strong_property, has_strong_property_f64, has_strong_property_wrt, Kind};
use liberatrix::zeroforcing::{
    closure, is_local_zf_cover, is_zf_cover, local_closure, parse_product_set, zero_forcing_number, zf_liberation,
    Product, DEFAULT_BOUND,
};
use liberatrix::{par, Error, Result};

#[derive(Parser)]
#[command(name = "liberatrix", version, about = "Liberation sets and strong properties for graph matrices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, env = "LIBERATRIX_SEED", default_value_t = 0)]
    seed: u64,
    /// Tolerance for floating-point rank and eigenvalue decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Random samples per sampling mode in graph-level checks.
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Strong property of a matrix, optionally with respect to a supergraph.
    Verify {
        #[arg(long, default_value = "ssp")]
        kind: Kind,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        wrt: Option<String>,
    },
    /// Move a matrix into S(G + β) keeping its spectrum (SSP) or nullity (SAP).
    Liberate {
        #[arg(long, default_value = "ssp")]
        kind: Kind,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        beta: String,
        /// Write the liberated matrix here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify β for a matrix, or list its minimal liberation sets.
    Libset {
        #[arg(long, default_value = "ssp")]
        kind: Kind,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, required_unless_present = "enumerate")]
        beta: Option<String>,
        /// Accepted for readability; certification is the default action.
        #[arg(long)]
        check: bool,
        /// Enumerate minimal liberation sets up to this size.
        #[arg(long, conflicts_with = "beta")]
        enumerate: Option<usize>,
        /// Run all four criteria instead of the rank test alone.
        #[arg(long)]
        full: bool,
    },
    /// Liberation sets of A ⊕ B; β uses labels 1..m for A and m+1..m+n for B.
    Directsum {
        #[arg(long, default_value = "ssp")]
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Added to the diagonal of B before the check.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        shift: f64,
        #[arg(long)]
        beta: String,
    },
    /// Whether β liberates every matrix of a graph (sampled).
    GraphLibset {
        #[arg(long, default_value = "ssp")]
        kind: Kind,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        beta: String,
    },
    /// Zero forcing: numbers, sets and covers, including local covers on products.
    Zf {
        /// Graph to play on; with --h, the first factor of G □ H.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        number: bool,
        /// Check that these vertices force the graph (`u:v` on products).
        #[arg(long)]
        set: Option<String>,
        /// Check a zero forcing cover (a local cover on products).
        #[arg(long)]
        cover: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Translate a product cover to β and certify it for A ⊕ B.
    ZfLiberate {
        #[arg(long, default_value = "ssp")]
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Cover as `u:v` pairs, `v` local to B.
        #[arg(long)]
        cover: String,
    },
    /// A matrix with a prescribed spectrum, e.g. `-1,0^2,2`.
    Realize {
        #[arg(long, allow_hyphen_values = true)]
        spectrum: String,
        /// One of path, star, complete, diagonal.
        #[arg(long, conflicts_with = "graph")]
        shape: Option<Shape>,
        /// Any graph, by Gauss-Newton with restarts.
        #[arg(long)]
        graph: Option<String>,
        /// Keep only outputs with this property.
        #[arg(long)]
        require: Option<Kind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild and re-verify a worked example or the six-vertex table.
    Reproduce {
        #[arg(required_unless_present = "list")]
        target: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// `catalog:NAME` or a path to an edge-list file.
fn load_graph(spec: &str) -> Result<Graph> {
    match spec.strip_prefix("catalog:") {
        Some(name) => catalog(name),
        None => Graph::parse_text(&read(Path::new(spec))?),
    }
}

fn load_matrix(path: &Path) -> Result<RatMatrix> {
    parse_rat_matrix(&read(path)?)
}

fn matrix_text(m: &Mat) -> String {
    let mut s = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn emit_matrix(m: &Mat, out: Option<&Path>) -> Result<()> {
    let text = matrix_text(m);
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `value^multiplicity` items separated by commas.
fn parse_spectrum(s: &str) -> Result<Vec<(f64, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (v, k) = t.split_once('^').unwrap_or((t, "1"));
            let bad = || Error::Parse(format!("bad spectrum item {t:?}"));
            Ok((v.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn run(cmd: &Command, g: &Global, r: &mut RunReport) -> Result<()> {
    let seed = g.seed;
    match cmd {
        Command::Verify { kind, graph, matrix, wrt } => {
            let (gr, a) = (load_graph(graph)?, load_matrix(matrix)?);
            r.input("graph", graph).input("matrix", matrix.display()).input("kind", kind);
            match wrt {
                Some(h) => {
                    r.input("wrt", h);
                    let ok = has_strong_property_wrt(&a, &gr, &load_graph(h)?, *kind)?;
                    r.stage(format!("{kind} with respect to {h}"), ok, "exact rank of the restricted Ψ");
                }
                None => {
                    let rep = has_strong_property(&a, &gr, *kind)?;
                    r.stage(kind.to_string(), rep.answer, format!("rank {}, nullity {}", rep.rank, rep.nullity));
                    r.certificate("strong", &rep);
                    println!("{kind}: {} (rank {}, nullity {})", rep.answer, rep.rank, rep.nullity);
                }
            }
        }
        Command::Liberate { kind, graph, matrix, beta, out } => {
            let (gr, a) = (load_graph(graph)?, load_matrix(matrix)?);
            let beta_set = EdgeSet::parse(gr.order(), beta)?;
            r.input("graph", graph).input("matrix", matrix.display()).input("beta", beta).input("kind", kind);
            let opts = LiberateOptions { seed, ..Default::default() };
            let res = liberate(&to_f64(&a), &gr, &beta_set, *kind, &opts)?;
            r.stage("liberate", res.strong, format!("invariant error {:.1e}", res.invariant_error));
            r.certificate("liberated", &res);
            r.certificate("matrix", &(0..res.matrix.rows()).map(|i| res.matrix.row(i).to_vec()).collect::<Vec<_>>());
            emit_matrix(&res.matrix, out.as_deref())?;
        }
        Command::Libset { kind, graph, matrix, beta, enumerate, full, .. } => {
            let (gr, a) = (load_graph(graph)?, load_matrix(matrix)?);
            r.input("graph", graph).input("matrix", matrix.display()).input("kind", kind);
            if let Some(size) = enumerate {
                let sets = enumerate_minimal_liberation_sets(&a, &gr, *kind, *size)?;
                let shown: Vec<String> = sets.iter().map(ToString::to_string).collect();
                for s in &shown {
                    println!("{{{s}}}");
                }
                r.stage("enumerate", !sets.is_empty(), format!("{} minimal sets of size ≤ {size}", sets.len()));
                r.certificate("sets", &shown);
            } else if let Some(beta) = beta {
                r.input("beta", beta);
                let beta_set = EdgeSet::parse(gr.order(), beta)?;
                let mode = if *full { CheckMode::Full } else { CheckMode::default() };
                let cert = is_liberation_set(&a, &gr, &beta_set, *kind, mode, seed)?;
                println!("{{{beta_set}}} is {}a liberation set", if cert.verdict { "" } else { "not " });
                r.stage("liberation set", cert.verdict, format!("{:?}", cert.criteria));
                r.certificate("liberation", &cert);
            }
        }
        Command::Directsum { kind, a, b, shift, beta } => {
            let am = SymMatrix::new(to_f64(&load_matrix(a)?))?;
            let bm = SymMatrix::new(to_f64(&load_matrix(b)?))?.shifted(*shift);
            r.input("a", a.display()).input("b", b.display()).input("shift", shift).input("beta", beta);
            let beta_set = EdgeSet::parse(am.order() + bm.order(), beta)?;
            let cert = directsum_liberation(&am, &bm, &beta_set, *kind, g.tol)?;
            let full = cert.checks.iter().all(|c| c.full_matrix);
            println!("Sylvester dimension {}, verdict {}, full check {full}", cert.dim, cert.verdict);
            r.stage("solution space", cert.verdict, format!("dimension {}", cert.dim));
            r.stage("full verification matrix", full, "strong property of A ⊕ B with respect to every β'");
            r.certificate("directsum", &cert);
        }
        Command::GraphLibset { kind, graph, beta } => {
            let gr = load_graph(graph)?;
            r.input("graph", graph).input("beta", beta).input("kind", kind).input("trials", g.trials);
            let beta_set = EdgeSet::parse(gr.order(), beta)?;
            let verdict = is_graph_liberation_set(&gr, &beta_set, *kind, g.trials, seed)?;
            match &verdict {
                GraphVerdict::ProbabilisticYes { trials } => println!("no counterexample in {trials} samples"),
                GraphVerdict::CertifiedCounterexample { source, .. } => println!("counterexample ({source})"),
            }
            r.stage("graph liberation set", verdict.is_yes(), "yes is probabilistic; no is certified");
            r.certificate("verdict", &verdict);
        }
        Command::Zf { graph, h, number, set, cover, bound } => {
            let gr = load_graph(graph)?;
            r.input("graph", graph);
            let product = match h {
                Some(h) => {
                    r.input("h", h);
                    Some(Product::new(&gr, &load_graph(h)?))
                }
                None => None,
            };
            let target = product.as_ref().map_or(&gr, |p| &p.graph);
            let parse_set = |s: &str| -> Result<Vec<usize>> {
                match &product {
                    Some(p) => p.flatten(&parse_product_set(s)?),
                    None => s
                        .split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad vertex {t:?}"))))
                        .collect(),
                }
            };
            if *number {
                let z = zero_forcing_number(target, *bound)?;
                println!("{}", z.value);
                r.stage("zero forcing number", true, format!("Z = {}", z.value));
                r.certificate("number", &z);
            }
            if let Some(s) = set {
                let state = closure(target, &parse_set(s)?)?;
                r.stage("zero forcing set", state.complete, format!("{} of {} blue", state.blue.len(), target.order()));
                r.certificate("closure", &state);
                if let Some(p) = &product {
                    let local = local_closure(p, &parse_product_set(s)?)?;
                    r.certificate("local_closure", &local);
                }
            }
            if let Some(c) = cover {
                let ok = match &product {
                    Some(p) => is_local_zf_cover(p, &parse_product_set(c)?)?,
                    None => is_zf_cover(target, &parse_set(c)?)?,
                };
                let what = if product.is_some() { "local zero forcing cover" } else { "zero forcing cover" };
                println!("{what}: {ok}");
                r.stage(what, ok, c.clone());
            }
            if !*number && set.is_none() && cover.is_none() {
                return Err(Error::InvalidParameter("zf needs --number, --set or --cover".into()));
            }
        }
        Command::ZfLiberate { kind, a, b, cover } => {
            let am = SymMatrix::new(to_f64(&load_matrix(a)?))?;
            let bm = SymMatrix::new(to_f64(&load_matrix(b)?))?;
            r.input("a", a.display()).input("b", b.display()).input("cover", cover).input("kind", kind);
            let z = zf_liberation(&am, &bm, &parse_product_set(cover)?, *kind, g.tol)?;
            println!("β = {{{}}}, cover {}, certified {}", z.beta, z.is_cover, z.certificate.verdict);
            r.stage("cover", z.is_cover, z.beta.clone());
            r.stage("certificate", z.certificate.verdict, format!("{} checks", z.certificate.checks.len()));
            r.certificate("zf_liberation", &z);
        }
        Command::Realize { spectrum, shape, graph, require, out } => {
            let target = parse_spectrum(spectrum)?;
            r.input("spectrum", spectrum);
            let (m, gr) = match (shape, graph) {
                (Some(s), _) => {
                    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
                    let n = target.iter().map(|t| t.1).sum();
                    (realize_spectrum(&target, *s, &mut rng)?.into_matrix(), shape_graph(*s, n)?)
                }
                (None, Some(gs)) => {
                    r.input("graph", gs);
                    let gr = load_graph(gs)?;
                    let opts = RealizeOptions { seed, ..Default::default() };
                    let m = realize_on_graph_with(&gr, &expand_spectrum(&target), &opts, |m| match require {
                        Some(k) => has_strong_property_f64(m, &gr, *k, g.tol).unwrap_or(false),
                        None => true,
                    })?;
                    (m, gr)
                }
                (None, None) => return Err(Error::InvalidParameter("realize needs --shape or --graph".into())),
            };
            let strong = has_strong_property_f64(&m, &gr, Kind::Ssp, g.tol)?;
            r.stage("realize", true, format!("SSP {strong}"));
            emit_matrix(&m, out.as_deref())?;
        }
        Command::Reproduce { .. } => unreachable!("handled in main"),
    }
    Ok(())
}

fn write_report(r: &RunReport, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p == Path::new("-") => {
            println!("{}", r.to_json());
            Ok(())
        }
        Some(p) => fs::write(p, r.to_json() + "\n").map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => Ok(()),
    }
}

/// Bad files, names or arguments, as opposed to a failed computation.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::UnknownGraph(_)
            | Error::LoopEdge(_)
            | Error::VertexOutOfRange { .. }
            | Error::DuplicateEdge(..)
            | Error::EdgeAlreadyPresent(..)
            | Error::EmptyBeta
            | Error::BetaIntersectsEdges(..)
            | Error::InvalidParameter(_)
    )
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Liberate { .. } => "liberate",
        Command::Libset { .. } => "libset",
        Command::Directsum { .. } => "directsum",
        Command::GraphLibset { .. } => "graph-libset",
        Command::Zf { .. } => "zf",
        Command::ZfLiberate { .. } => "zf-liberate",
        Command::Realize { .. } => "realize",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    match g.jobs {
        Some(j) => par::configure_jobs(j),
        // the table fans out by default; everything else stays on one thread
        None => par::set_parallel(matches!(cli.command, Command::Reproduce { .. })),
    }
    let start = Instant::now();
    let report = match &cli.command {
        Command::Reproduce { list: true, .. } => {
            let mut out = std::io::stdout().lock();
            for t in TARGETS {
                if writeln!(out, "{t}").is_err() {
                    break;
                }
            }
            return ExitCode::SUCCESS;
        }
        Command::Reproduce { target: Some(t), .. } => reproduce_with(t, g.seed, g.timings),
        Command::Reproduce { target: None, .. } => unreachable!("clap requires a target"),
        cmd => {
            let mut r = RunReport::new(command_name(cmd), g.seed);
            match run(cmd, g, &mut r) {
                Ok(()) => {}
                Err(e) if is_input_error(&e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                Err(e) => {
                    r.stage("error", false, e.to_string());
                }
            }
            if g.timings {
                r.time("total", start);
            }
            Ok(r)
        }
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json_on_stdout = g.json.as_deref() == Some(Path::new("-"));
    if report.command == "reproduce" && !json_on_stdout {
        for s in &report.stages {
            println!("[{}] {}: {}", if s.passed { "ok" } else { "FAIL" }, s.name, s.detail);
        }
        for c in &report.claims {
            println!("claim {}: {}", if c.passed { "holds" } else { "FAILS" }, c.statement);
        }
    }
    if let Some(f) = report.first_failure() {
        eprintln!("failed at {f}");
    }
    if let Err(e) = write_report(&report, g.json.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
