//! Command-line front-end for the symmetric-circuit second-moment toolkit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symdesign::cayley::{self, GeneratingSet, GraphKind};
use symdesign::hilbert::{self, Symmetry};
use symdesign::markov;
use symdesign::moment::{self, BlockType, MomentOrder};
use symdesign::oracle;
use symdesign::report::{self, Format, RunConfig};
use symdesign::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "symdesign", version, about = "Second-moment spectral gaps of U(1)- and SU(d)-symmetric random circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the symmetry sectors with dimensions and multiplicities.
    Sectors(Common),
    /// Full gap pipeline: all blocks, sandwiches, global gap and depth.
    Gap(Common),
    /// Cayley-graph gap of the generating set.
    Cayley(Common),
    /// Per-sector Markov-chain gap comparisons.
    Chains(Common),
    /// Dense-oracle, Haar-commutant and unit-eigenspace checks on small blocks.
    Verify(Common),
    /// Monte Carlo estimate of one moment block.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Block type to sample.
        #[arg(long, value_enum, default_value = "type3")]
        block: BlockArg,
        /// First sector index.
        #[arg(long, default_value_t = 1)]
        sector: usize,
        /// Second sector index (Type 1/2 blocks).
        #[arg(long)]
        mu: Option<usize>,
    },
    /// Circuit depth for an epsilon-approximate 2-design.
    Depth {
        #[command(flatten)]
        common: Common,
        /// Use this gap instead of running the pipeline.
        #[arg(long)]
        gap: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SymArg {
    U1,
    Sud,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BlockArg {
    Type1,
    Type2,
    Type3,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Symmetry group.
    #[arg(long, value_enum, default_value = "u1")]
    symmetry: SymArg,
    /// Local dimension for SU(d).
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Number of sites.
    #[arg(long)]
    n: usize,
    /// Transposition generating set.
    #[arg(long, value_enum, default_value = "chain")]
    graph: GraphKind,
    /// Custom transpositions, e.g. `1:2,2:3,1:4`.
    #[arg(long, value_parser = parse_edges)]
    edges: Option<Edges>,
    /// Target accuracy of the design.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Random seed (recorded in the output).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop at the first violated inequality.
    #[arg(long)]
    fail_fast: bool,
}

/// Parsed `--edges` list.
#[derive(Clone, Debug)]
struct Edges(Vec<(usize, usize)>);

fn parse_edges(s: &str) -> std::result::Result<Edges, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.trim().split_once(':').ok_or_else(|| format!("edge {t:?} is not of the form i:j"))?;
            let a = a.parse::<usize>().map_err(|e| format!("edge {t:?}: {e}"))?;
            let b = b.parse::<usize>().map_err(|e| format!("edge {t:?}: {e}"))?;
            Ok((a, b))
        })
        .collect::<std::result::Result<Vec<_>, String>>()
        .map(Edges)
}

impl Common {
    fn symmetry(&self) -> Symmetry {
        match self.symmetry {
            SymArg::U1 => Symmetry::U1,
            SymArg::Sud => Symmetry::SUd { d: self.d },
        }
    }

    fn config(&self) -> RunConfig {
        let mut c = RunConfig::new(self.symmetry(), self.n).with_graph(self.graph);
        c.edges = self.edges.as_ref().map(|e| e.0.clone());
        c.epsilon = self.eps;
        c.seed = self.seed;
        c.samples = self.samples;
        c
    }

    fn generating_set(&self) -> Result<GeneratingSet> {
        GeneratingSet::new(self.graph, self.n, self.edges.as_ref().map(|e| e.0.as_slice()))
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::Io { path: p.display().to_string(), message: e.to_string() }),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }

    fn write_json(&self, v: &Value) -> Result<()> {
        if self.format != Format::Json {
            return Err(Error::Unsupported("this subcommand emits JSON only".into()));
        }
        self.write(&serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?)
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()))
}

/// Runs a subcommand; `Ok(false)` means a check failed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Sectors(c) => {
            c.config().validate()?;
            let sectors = hilbert::sectors(c.symmetry(), c.n)?;
            match c.format {
                Format::Json => c.write_json(&Value::Array(sectors.iter().map(|s| s.summary()).collect()))?,
                Format::Csv => {
                    let mut text = String::from("index,label,dim,mult\n");
                    for (i, s) in sectors.iter().enumerate() {
                        text.push_str(&format!("{i},\"{}\",{},{}\n", s.label, s.dim, s.multiplicity));
                    }
                    c.write(text.trim_end())?;
                }
            }
            Ok(true)
        }
        Command::Gap(c) => {
            let r = report::run_gap(&c.config())?;
            c.write(&report::render(&r, c.format)?)?;
            for f in r.failures() {
                eprintln!("violated: {f}");
            }
            Ok(r.pass())
        }
        Command::Cayley(c) => {
            let g = c.generating_set()?;
            let t = g.len() as f64;
            let gap = cayley::standard_rep_gap(&g)?;
            let mut v = json!({
                "graph": g.id(),
                "transpositions": g.transpositions,
                "lambda1": t,
                "lambda2": t - gap,
                "gap": gap,
            });
            if g.kind != GraphKind::Custom {
                v["closed_form"] = to_value(&cayley::closed_form_gap(g.kind, g.n)?)?;
            }
            if g.n <= 6 {
                let ev = cayley::bruteforce_spectrum(&g)?;
                v["brute_force"] = json!({ "lambda1": ev[0], "lambda2": ev[1], "gap": ev[0] - ev[1] });
            }
            c.write_json(&v)?;
            Ok(true)
        }
        Command::Chains(c) => {
            let model = c.config().model()?;
            let mut out = Vec::new();
            let mut pass = true;
            for s in 0..model.sectors.len() {
                let r = markov::sandwich_report(&model, s, report::DEFAULT_SLACK)?;
                let ok = r.pass();
                if !ok {
                    for chk in r.checks.iter().filter(|x| !x.pass) {
                        eprintln!("violated: sector {}: {} ({} vs {})", r.label, chk.name, chk.lhs, chk.rhs);
                    }
                }
                out.push(to_value(&r)?);
                pass &= ok;
                if !ok && c.fail_fast {
                    break;
                }
            }
            c.write_json(&Value::Array(out))?;
            Ok(pass)
        }
        Command::Verify(c) => {
            let model = c.config().model()?;
            let terms = moment::swap_moment_terms(MomentOrder::K2);
            let ns = model.sectors.len();
            let mut tasks: Vec<(BlockType, usize, Option<usize>)> = (0..ns).map(|s| (BlockType::Type3, s, None)).collect();
            for l in 0..ns {
                for m in 0..ns {
                    if l != m {
                        tasks.push((BlockType::Type1, l, Some(m)));
                        tasks.push((BlockType::Type2, l, Some(m)));
                    }
                }
            }
            let mut out = Vec::new();
            let mut pass = true;
            for (bt, l, m) in tasks {
                let basis = moment::filtered_basis(&model, bt, l, m)?;
                let dense = match oracle::dense_operator(&model, &basis, &terms) {
                    Ok(d) => d,
                    Err(Error::Budget { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let block = moment::assemble_block(&model, &terms, &basis)?;
                let diff = (dense.filtered_submatrix(&basis) - block.matrix.to_dense()).amax();
                let unit = oracle::unit_eigenspace_match(&block, &basis)?;
                let ok = diff < 1e-10 && unit.matches(1e-8);
                pass &= ok;
                out.push(json!({
                    "block_type": bt,
                    "sectors": basis.sectors,
                    "dim": basis.len(),
                    "dense_vs_filtered": diff,
                    "unit": unit,
                    "pass": ok,
                }));
                if !ok && c.fail_fast {
                    break;
                }
            }
            let pairwise = if model.symmetry == Symmetry::U1 {
                (0..ns)
                    .filter_map(|s| oracle::pairwise_swap_unit_multiplicity(&model, s).ok().map(|k| json!({ "sector": s, "unit_multiplicity": k })))
                    .collect()
            } else {
                Vec::new()
            };
            c.write_json(&json!({ "blocks": out, "pairwise_swap": pairwise, "pass": pass }))?;
            Ok(pass)
        }
        Command::Sample { common: c, block, sector, mu } => {
            let model = c.config().model()?;
            let bt = match block {
                BlockArg::Type1 => BlockType::Type1,
                BlockArg::Type2 => BlockType::Type2,
                BlockArg::Type3 => BlockType::Type3,
            };
            let basis = moment::filtered_basis(&model, bt, sector, mu)?;
            let r = oracle::monte_carlo_moment(&model, &basis, c.samples, c.seed)?;
            c.write_json(&json!({
                "block": { "block_type": bt, "sectors": basis.sectors, "dim": basis.len() },
                "N": r.samples,
                "seed": r.seed,
                "rng": "chacha8",
                "max_dev": r.max_dev,
                "max_z": r.max_z,
            }))?;
            Ok(true)
        }
        Command::Depth { common: c, gap } => {
            let cfg = c.config();
            cfg.validate()?;
            let gap = match gap {
                Some(g) => g,
                None => report::run_gap(&cfg)?.global.gap.ok_or(Error::NoGap(0.0))?,
            };
            let p = report::convergence_depth(gap, cfg.k, cfg.n, cfg.symmetry.local_dim(), cfg.epsilon)?;
            c.write_json(&json!({ "gap": gap, "k": cfg.k, "n": cfg.n, "d": cfg.symmetry.local_dim(), "epsilon": cfg.epsilon, "depth": p, "log_base": "natural" }))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Some(t) = std::env::var("SYMDESIGN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if t > 0 {
            // Fails only if a pool already exists, which cannot happen this early.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
