use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use isorich::{
    bipartite_rm_capped, blowup, blowup_iso_bound, blowup_rm_transfer,
    canonical_form, certificate_from_text, certificate_to_text, count_induced_iso_classes_capped,
    derive_constants, es_bound, generate_graph, graph6_encode, parse_decimal_rational,
    ramsey_extract, read_graphs, rm_number_capped, rng, run_pipeline_with, run_sweep,
    sample_induced_iso_classes, verify_certificate, ConstantOverrides, ExtractOutcome, Graph,
    PipelineOptions, SweepConfig, DEFAULT_BIPARTITE_CAP, DEFAULT_ISO_COUNT_CAP, DEFAULT_RM_CAP,
};

#[derive(Parser)]
#[command(
    name = "isorich",
    version,
    about = "Induced-subgraph richness and homogeneous-set certificates for finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphInput {
    /// Read graphs from a file: graph6 (one per line) or "n\nx y\n..." edge list
    #[arg(long = "in", value_name = "FILE", conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Generate a graph: gnp:N:P | complete:N | empty:N | cycle:N | path:N | g6:STRING
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Seed for --gen gnp (also the pipeline seed where applicable)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GraphInput {
    fn load(&self) -> Result<Vec<Graph>> {
        match (&self.input, &self.gen) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(read_graphs(&text)?)
            }
            (None, Some(spec)) => Ok(vec![generate_graph(spec, self.seed)?]),
            _ => bail!("provide exactly one of --in or --gen"),
        }
    }
}

#[derive(Args, Clone, Default)]
struct OverrideArgs {
    /// Override the block size m1*
    #[arg(long)]
    m1_star: Option<u64>,
    /// Override the diagonal threshold m2*
    #[arg(long)]
    m2_star: Option<u64>,
    #[arg(long)]
    c2: Option<String>,
    #[arg(long)]
    c3: Option<String>,
    #[arg(long)]
    c4: Option<String>,
    #[arg(long)]
    c5: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
}

impl OverrideArgs {
    fn to_overrides(&self) -> Result<ConstantOverrides> {
        let parse = |s: &Option<String>| -> Result<Option<isorich::Rat>> {
            Ok(match s {
                Some(t) => Some(parse_decimal_rational(t)?),
                None => None,
            })
        };
        Ok(ConstantOverrides {
            m1_star: self.m1_star,
            m2_star: self.m2_star.map(u128::from),
            c2: parse(&self.c2)?,
            c3: parse(&self.c3)?,
            c4: parse(&self.c4)?,
            c5: parse(&self.c5)?,
            epsilon: parse(&self.epsilon)?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Largest homogeneous set: max of clique and independence numbers
    Rm {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_RM_CAP)]
        cap: usize,
    },
    /// Largest k with disjoint k-sets joined completely or not at all
    Bipartite {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_BIPARTITE_CAP)]
        cap: usize,
    },
    /// Number of induced-subgraph isomorphism classes (exact up to the cap,
    /// sampled lower bound above it)
    CountIso {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_ISO_COUNT_CAP)]
        cap: usize,
        /// Sample count for graphs above the cap
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// The threshold C(r1+r2-2, r1-1) guaranteeing a clique of size r1 or an
    /// independent set of size r2
    EsBound { r1: u64, r2: u64 },
    /// Greedy extraction of a clique of size r1 or independent set of size r2
    RamseyExtract {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        r1: usize,
        #[arg(long)]
        r2: usize,
    },
    /// Fiber blow-up of the first input graph
    Blowup {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the (m+1)^n class-count ceiling
        #[arg(long)]
        iso_bound: bool,
        /// Check that the blow-up has no clique of size R1 and no
        /// independent set of size m*R2
        #[arg(long, num_args = 2, value_names = ["R1", "R2"])]
        transfer: Option<Vec<usize>>,
    },
    /// Generate graphs as graph6 lines
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the pipeline constant tuple from c1
    Constants {
        #[arg(long)]
        c1: String,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run the certificate pipeline on the first input graph
    Pipeline {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        c1: String,
        #[command(flatten)]
        overrides: OverrideArgs,
        #[arg(long, default_value_t = 64)]
        max_attempts: u32,
        /// Evidence budget for iso-rich certificates
        #[arg(long, default_value_t = 256)]
        evidence: usize,
        /// Re-verify the certificate and print the verdict
        #[arg(long)]
        verify: bool,
        /// Write the certificate (with embedded graph) to a file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a config-driven sweep and write CSV
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate file against its graph
    Verify {
        #[arg(long)]
        cert: PathBuf,
        /// Graph file; optional when the certificate embeds its graph
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

/// Optional on-disk memo for class counts, keyed by canonical form. Enabled
/// by setting ISORICH_CACHE_DIR to a writable directory.
fn cached_count(g: &Graph, cap: usize) -> Result<usize> {
    let Some(dir) = std::env::var_os("ISORICH_CACHE_DIR") else {
        return Ok(count_induced_iso_classes_capped(g, cap)?);
    };
    let dir = PathBuf::from(dir);
    fs::create_dir_all(&dir)?;
    let path = dir.join("iso-counts.txt");
    let key = canonical_form(g).hex();
    if let Ok(text) = fs::read_to_string(&path) {
        for line in text.lines() {
            if let Some((k, v)) = line.split_once(' ') {
                if k == key {
                    if let Ok(count) = v.trim().parse() {
                        return Ok(count);
                    }
                }
            }
        }
    }
    let count = count_induced_iso_classes_capped(g, cap)?;
    let mut f = fs::OpenOptions::new().create(true).append(true).open(&path)?;
    writeln!(f, "{key} {count}")?;
    Ok(count)
}

fn graph_summary(path: Option<&Path>, idx: usize, total: usize) -> String {
    match (path, total) {
        (_, 1) => String::new(),
        (Some(p), _) => format!("{}:{} ", p.display(), idx + 1),
        (None, _) => format!("{} ", idx + 1),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Rm { input, cap } => {
            let graphs = input.load()?;
            let total = graphs.len();
            for (i, g) in graphs.iter().enumerate() {
                let prefix = graph_summary(input.input.as_deref(), i, total);
                let (k, witness) = rm_number_capped(g, cap)?;
                println!("{prefix}rm {k}");
                println!("{prefix}witness {} {}", witness.kind, witness.members);
            }
        }
        Command::Bipartite { input, cap } => {
            let graphs = input.load()?;
            let total = graphs.len();
            for (i, g) in graphs.iter().enumerate() {
                let prefix = graph_summary(input.input.as_deref(), i, total);
                let (k, a1, a2) = bipartite_rm_capped(g, cap)?;
                println!("{prefix}bipartite {k}");
                println!("{prefix}witness {a1} | {a2}");
            }
        }
        Command::CountIso {
            input,
            cap,
            samples,
        } => {
            let graphs = input.load()?;
            let total = graphs.len();
            for (i, g) in graphs.iter().enumerate() {
                let prefix = graph_summary(input.input.as_deref(), i, total);
                if g.n() <= cap {
                    println!("{prefix}count {}", cached_count(g, cap)?);
                } else {
                    let est = sample_induced_iso_classes(g, samples, input.seed);
                    println!(
                        "{prefix}count-lower-bound {} samples {}",
                        est.distinct, est.samples
                    );
                }
            }
        }
        Command::EsBound { r1, r2 } => {
            println!("es-bound {}", es_bound(r1, r2)?);
        }
        Command::RamseyExtract { input, r1, r2 } => {
            let graphs = input.load()?;
            let total = graphs.len();
            for (i, g) in graphs.iter().enumerate() {
                let prefix = graph_summary(input.input.as_deref(), i, total);
                match ramsey_extract(g, r1, r2) {
                    ExtractOutcome::Found(h) => {
                        println!("{prefix}found {} {}", h.kind, h.members);
                    }
                    ExtractOutcome::Failed {
                        partial_clique,
                        partial_independent,
                    } => {
                        println!(
                            "{prefix}failure partial-clique {partial_clique} partial-independent {partial_independent}"
                        );
                    }
                }
            }
        }
        Command::Blowup {
            input,
            m,
            out,
            iso_bound,
            transfer,
        } => {
            let graphs = input.load()?;
            let base = graphs.first().context("no input graph")?;
            let g = blowup(base, m)?;
            write_out(&out, &format!("{}\n", graph6_encode(&g)))?;
            if iso_bound {
                println!("iso-bound {}", blowup_iso_bound(base, m));
            }
            if let Some(rs) = transfer {
                println!("transfer {}", blowup_rm_transfer(base, m, rs[0], rs[1])?);
            }
        }
        Command::Gen {
            spec,
            seed,
            count,
            out,
        } => {
            let mut text = String::new();
            for k in 0..count {
                let s = if count == 1 { seed } else { rng::derive_seed(seed, k) };
                text.push_str(&graph6_encode(&generate_graph(&spec, s)?));
                text.push('\n');
            }
            write_out(&out, &text)?;
        }
        Command::Constants { c1, overrides } => {
            let c = derive_constants(parse_decimal_rational(&c1)?, &overrides.to_overrides()?)?;
            println!("{c}");
        }
        Command::Pipeline {
            input,
            c1,
            overrides,
            max_attempts,
            evidence,
            verify,
            out,
        } => {
            let graphs = input.load()?;
            let g = graphs.first().context("no input graph")?;
            let constants =
                derive_constants(parse_decimal_rational(&c1)?, &overrides.to_overrides()?)?;
            println!("constants {constants}");
            let opts = PipelineOptions {
                max_attempts,
                evidence_budget: evidence,
            };
            let run = run_pipeline_with(g, &constants, input.seed, &opts)?;
            print!("{}", run.trace);
            match &run.certificate {
                Some(cert) => {
                    let text = certificate_to_text(cert, Some(g));
                    print!("{text}");
                    if let Some(p) = &out {
                        fs::write(p, &text)
                            .with_context(|| format!("writing {}", p.display()))?;
                    }
                    if verify {
                        let rep = verify_certificate(g, cert);
                        println!("{rep}");
                        println!("{}", if rep.ok { "VERIFIED" } else { "VERIFY-FAILED" });
                    }
                }
                None => {
                    println!("no certificate (distinguishing-set sampling exhausted)");
                }
            }
        }
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let cfg = SweepConfig::from_toml(&text)?;
            let file_text = match &cfg.file {
                Some(f) => {
                    Some(fs::read_to_string(f).with_context(|| format!("reading {f}"))?)
                }
                None => None,
            };
            let csv = run_sweep(&cfg, file_text.as_deref())?;
            let target = out.or_else(|| cfg.output.as_ref().map(PathBuf::from));
            write_out(&target, &csv)?;
        }
        Command::Verify { cert, input } => {
            let text = fs::read_to_string(&cert)
                .with_context(|| format!("reading {}", cert.display()))?;
            let (embedded, parsed) = certificate_from_text(&text)?;
            let graph = match (embedded, &input) {
                (_, Some(path)) => {
                    let gtext = fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let graphs = read_graphs(&gtext)?;
                    graphs.into_iter().next().context("no graph in --in file")?
                }
                (Some(g), None) => g,
                (None, None) => bail!("certificate has no embedded graph; pass --in"),
            };
            let rep = verify_certificate(&graph, &parsed);
            println!("{rep}");
            println!("{}", if rep.ok { "VERIFIED" } else { "INVALID" });
        }
    }
    Ok(())
}
