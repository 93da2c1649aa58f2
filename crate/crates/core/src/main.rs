use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subforge::certify::{verify_subdivision, CertVerdict, Mode, SubdivisionCertificate};
use subforge::embed::{drc_th3, embed_balanced, embed_dense_short, embed_large_degree, embed_sparse_th, EmbeddingOutcome};
use subforge::expander::extract_expander;
use subforge::experiments::{lowerbound_on_host, lowerbound_suite, reports_to_csv};
use subforge::gadgets::{build_octopus, build_simple_adjuster, build_unit, build_web, chain_adjusters, validate_gadget, GadgetRecord};
use subforge::graph::{average_degree, ratio_f64, stats, HostGraph, VertexSet};
use subforge::io::{format_edge_list, read_graph};
use subforge::patterns::{biseparate, gen_sbm, gen_standard, Family, SbmParams};
use subforge::{Error, RunConfig};

const EXIT_MISS: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_REJECT: u8 = 1;

#[derive(Parser)]
#[command(name = "subforge", version, about = "Build and verify graph subdivisions in expanding hosts")]
struct Cli {
    /// key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = LogLevel::Quiet)]
    log_level: LogLevel,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogLevel {
    Quiet,
    Info,
    Trace,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Balanced,
    Sparse,
    Dense,
    Drc,
    Large,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    Unit,
    Web,
    Adjuster,
    Chain,
    Octopus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph: clique N | complete-bipartite A B | random-bipartite A B P |
    /// gnp N P | grid A B | hypercube D | cycle N | path N | star LEAVES | sbm N T K P Q.
    Generate {
        family: String,
        params: Vec<String>,
    },
    /// Extract a bipartite expanding subgraph; writes its edge list and prints a summary.
    ExtractExpander { graph: PathBuf },
    /// Embed a pattern and write the certificate.
    FindSubdivision {
        graph: PathBuf,
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Balanced)]
        engine: Engine,
        /// Subdivision length for the large-degree engine.
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Bounded mode for the large-degree engine.
        #[arg(long)]
        bounded: bool,
        /// Largest piece size when separating the pattern for the dense engine.
        #[arg(long, default_value_t = 4)]
        piece_cap: usize,
    },
    /// Build one gadget and write it as JSON.
    BuildGadget {
        graph: PathBuf,
        #[arg(long, value_enum)]
        kind: GadgetKind,
        /// Vertices to avoid, comma separated.
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        h0: usize,
        #[arg(long, default_value_t = 2)]
        h1: usize,
        #[arg(long, default_value_t = 2)]
        h2: usize,
        #[arg(long, default_value_t = 2)]
        h3: usize,
        /// Expansion size of adjusters.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Adjusters chained, or adjusters attached to an octopus.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Longest attachment path of an octopus.
        #[arg(long, default_value_t = 4)]
        reach: usize,
    },
    /// Check a certificate against host and pattern, or a gadget record against a host.
    Verify {
        graph: PathBuf,
        /// Pattern file; omit with --gadget.
        pattern: Option<PathBuf>,
        /// Certificate JSON, or the gadget record with --gadget.
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        gadget: bool,
    },
    /// Missing-edge statistics for injections into random bipartite hosts.
    Lowerbound {
        /// Pattern file; defaults to a clique of --clique vertices.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        clique: usize,
        #[arg(long, default_value_t = 100)]
        n1: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Number of seeds, starting at the configured seed.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Enumerate every injection instead of sampling (tiny inputs only).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Degree statistics of a graph.
    Stats { graph: PathBuf },
}

fn emit(out: Option<&Path>, text: &str) -> subforge::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn num<T: std::str::FromStr>(params: &[String], i: usize) -> subforge::Result<T> {
    let raw = params.get(i).ok_or_else(|| Error::Invalid(format!("missing parameter {}", i + 1)))?;
    raw.parse().map_err(|_| Error::Invalid(format!("bad parameter {raw:?}")))
}

fn generate(family: &str, p: &[String], seed: u64) -> subforge::Result<HostGraph> {
    let fam = match family {
        "clique" => Family::Clique(num(p, 0)?),
        "complete-bipartite" => Family::CompleteBipartite(num(p, 0)?, num(p, 1)?),
        "random-bipartite" => Family::RandomBipartite(num(p, 0)?, num(p, 1)?, num(p, 2)?, seed),
        "gnp" => Family::Gnp(num(p, 0)?, num(p, 1)?, seed),
        "grid" => Family::Grid(num(p, 0)?, num(p, 1)?),
        "hypercube" => Family::Hypercube(num(p, 0)?),
        "cycle" => Family::Cycle(num(p, 0)?),
        "path" => Family::Path(num(p, 0)?),
        "star" => Family::Star(num(p, 0)?),
        "sbm" => {
            let s = SbmParams { n: num(p, 0)?, t: num(p, 1)?, k_blocks: num(p, 2)?, p: num(p, 3)?, q: num(p, 4)?, seed };
            return gen_sbm(&s);
        }
        other => return Err(Error::Invalid(format!("unknown family {other:?}"))),
    };
    gen_standard(&fam)
}

fn find(g: &HostGraph, h: &HostGraph, engine: Engine, ell: usize, bounded: bool, piece_cap: usize, cfg: &RunConfig) -> subforge::Result<EmbeddingOutcome> {
    match engine {
        Engine::Balanced => embed_balanced(g, h, cfg),
        Engine::Sparse => embed_sparse_th(g, h, cfg),
        Engine::Drc => Ok(drc_th3(g, h, cfg)?.0),
        Engine::Large => embed_large_degree(g, h, if bounded { Mode::Bounded(ell) } else { Mode::Balanced(ell) }, cfg),
        Engine::Dense => {
            let b = biseparate(h, piece_cap.max(1))?.ok_or_else(|| Error::Precondition("pattern has no separation with that piece size".into()))?;
            embed_dense_short(g, h, &b, cfg)
        }
    }
}

fn build_gadget(g: &HostGraph, kind: GadgetKind, avoid: &VertexSet, a: &GadgetArgs) -> subforge::Result<Result<GadgetRecord, String>> {
    Ok(match kind {
        GadgetKind::Unit => build_unit(g, avoid, a.h1, a.h2, a.h3, None)?.map(GadgetRecord::Unit).map_err(|e| e.to_string()),
        GadgetKind::Web => build_web(g, avoid, a.h0, a.h1, a.h2, a.h3, None)?.map(GadgetRecord::Web).map_err(|e| e.to_string()),
        GadgetKind::Adjuster => build_simple_adjuster(g, avoid, a.d, a.m)?.map(GadgetRecord::Adjuster).map_err(|e| e.to_string()),
        GadgetKind::Chain => chain_adjusters(g, avoid, a.d, a.m, a.r)?.map(GadgetRecord::Adjuster).map_err(|e| e.to_string()),
        GadgetKind::Octopus => build_octopus(g, avoid, a.d, a.m, a.r, a.reach)?.map(GadgetRecord::Octopus).map_err(|e| e.to_string()),
    })
}

struct GadgetArgs {
    h0: usize,
    h1: usize,
    h2: usize,
    h3: usize,
    d: usize,
    m: usize,
    r: usize,
    reach: usize,
}

#[derive(Serialize)]
struct ExtractSummary {
    n_in: usize,
    n_out: usize,
    input_avg: f64,
    output_avg: f64,
    rounds: usize,
    original_ids: Vec<usize>,
}

#[derive(Serialize)]
struct GraphStats {
    n: usize,
    edges: usize,
    average_degree: f64,
    min_degree: usize,
    max_degree: usize,
    bipartite: bool,
    components: usize,
}

fn run(cli: Cli) -> subforge::Result<u8> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply_env()?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Generate { family, params } => {
            let g = generate(&family, &params, cfg.seed)?;
            emit(out, &format_edge_list(&g))?;
            Ok(0)
        }
        Command::ExtractExpander { graph } => {
            let g = read_graph(&graph)?;
            let d = ratio_f64(average_degree(&g));
            let x = extract_expander(&g, &cfg.expander_params(cfg.eps2 * d), true, &cfg)?;
            let summary = ExtractSummary {
                n_in: g.n(),
                n_out: x.graph.n(),
                input_avg: ratio_f64(x.input_avg),
                output_avg: ratio_f64(x.output_avg),
                rounds: x.rounds,
                original_ids: x.original_ids.clone(),
            };
            match out {
                Some(p) => {
                    std::fs::write(p, format_edge_list(&x.graph))?;
                    print!("{}", to_json(&summary));
                }
                None => print!("{}", to_json(&summary)),
            }
            Ok(0)
        }
        Command::FindSubdivision { graph, pattern, engine, ell, bounded, piece_cap } => {
            let g = read_graph(&graph)?;
            let h = read_graph(&pattern)?;
            let outcome = find(&g, &h, engine, ell, bounded, piece_cap, &cfg)?;
            for s in &outcome.stages {
                log::info!("[{}] {}", s.stage, s.detail);
            }
            match &outcome.certificate {
                Some(c) => {
                    let mut text = c.to_json();
                    text.push('\n');
                    emit(out, &text)?;
                    Ok(0)
                }
                None => {
                    eprintln!("no certificate: {}", outcome.stages.last().map_or("", |s| s.detail.as_str()));
                    Ok(EXIT_MISS)
                }
            }
        }
        Command::BuildGadget { graph, kind, avoid, h0, h1, h2, h3, d, m, r, reach } => {
            let g = read_graph(&graph)?;
            let avoid: VertexSet = avoid.into_iter().collect();
            let args = GadgetArgs { h0, h1, h2, h3, d, m, r, reach };
            match build_gadget(&g, kind, &avoid, &args)? {
                Ok(rec) => {
                    if !validate_gadget(&g, &rec).is_valid() {
                        return Err(Error::Invalid("built gadget failed validation".into()));
                    }
                    emit(out, &to_json(&rec))?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("gadget not built: {e}");
                    Ok(EXIT_MISS)
                }
            }
        }
        Command::Verify { graph, pattern, cert, gadget } => {
            let g = read_graph(&graph)?;
            let text = std::fs::read_to_string(&cert)?;
            let (accepted, line) = if gadget {
                let rec: GadgetRecord = serde_json::from_str(&text)?;
                let v = validate_gadget(&g, &rec);
                (v.is_valid(), format!("{v:?}"))
            } else {
                let p = pattern.ok_or_else(|| Error::Invalid("verify needs a pattern file".into()))?;
                let h = read_graph(&p)?;
                let c = SubdivisionCertificate::from_json(&text)?;
                match verify_subdivision(&g, &h, &c) {
                    CertVerdict::Accept => (true, "accept".to_string()),
                    CertVerdict::Reject(v) => (false, format!("reject: {v:?}")),
                }
            };
            emit(out, &format!("{}\n", if accepted { "accept" } else { &line }))?;
            Ok(if accepted { 0 } else { EXIT_REJECT })
        }
        Command::Lowerbound { pattern, clique, n1, samples, seeds, jobs, exhaustive, format } => {
            let h = match pattern {
                Some(p) => read_graph(&p)?,
                None => gen_standard(&Family::Clique(clique))?,
            };
            let seed_list: Vec<u64> = (cfg.seed..cfg.seed + seeds).collect();
            let reports = if exhaustive {
                seed_list
                    .iter()
                    .map(|&s| lowerbound_on_host(&gen_standard(&Family::RandomBipartite(n1, n1, 0.5, s))?, &h, None, s))
                    .collect::<subforge::Result<Vec<_>>>()?
            } else {
                lowerbound_suite(&h, n1, samples, &seed_list, jobs)?
            };
            let text = match format {
                Format::Json => to_json(&reports),
                Format::Csv => reports_to_csv(&reports),
            };
            emit(out, &text)?;
            Ok(0)
        }
        Command::Stats { graph } => {
            let g = read_graph(&graph)?;
            let st = stats(&g)?;
            let s = GraphStats {
                n: g.n(),
                edges: g.edge_count(),
                average_degree: ratio_f64(st.avg),
                min_degree: st.min,
                max_degree: st.max,
                bipartite: g.is_bipartite(),
                components: g.components(&vec![true; g.n()]).len(),
            };
            emit(out, &to_json(&s))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.log_level {
        LogLevel::Quiet => log::LevelFilter::Error,
        LogLevel::Info => log::LevelFilter::Info,
        LogLevel::Trace => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Precondition(_) | Error::Invalid(_) | Error::Json(_) => EXIT_PRECONDITION,
                Error::Io(_) => 1,
            })
        }
    }
}

