//! The end-to-end gap pipeline: enumerate sectors, assemble every filtered
//! block of the second-moment operator, split and compare, take the global
//! minimum, convert it to a circuit depth, and serialize the result.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{GeneratingSet, GraphKind};
use crate::error::{Error, Result};
use crate::hilbert::Symmetry;
use crate::markov::{self, Check, GapComparison};
use crate::moment::{self, BlockType, MomentOrder, Model};

/// Schema tag written into every JSON report.
pub const SCHEMA: &str = "symdesign/1";

/// Default slack for all gap inequalities.
pub const DEFAULT_SLACK: f64 = 1e-8;

/// Everything that determines a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub symmetry: Symmetry,
    pub n: usize,
    pub graph: GraphKind,
    /// Transpositions `(i, j)` (1-based) for [`GraphKind::Custom`].
    pub edges: Option<Vec<(usize, usize)>>,
    /// Moment order; only `2` is supported.
    pub k: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub samples: usize,
    /// Slack applied to every inequality check.
    pub slack: f64,
    /// Restrict the run to these sector indices (`None` = all).
    pub sectors: Option<Vec<usize>>,
    /// Include the mixed-sector (Type 1/2) blocks.
    pub include_mixed: bool,
}

impl RunConfig {
    /// Defaults: chain graph, `ε = 10⁻⁶`, seed 0, `10⁴` samples, all blocks.
    pub fn new(symmetry: Symmetry, n: usize) -> Self {
        RunConfig {
            symmetry,
            n,
            graph: GraphKind::Chain,
            edges: None,
            k: 2,
            epsilon: 1e-6,
            seed: 0,
            samples: 10_000,
            slack: DEFAULT_SLACK,
            sectors: None,
            include_mixed: true,
        }
    }

    pub fn with_graph(mut self, graph: GraphKind) -> Self {
        self.graph = graph;
        self
    }

    /// Checks the documented invariants.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.k != 2 {
            return Err(Error::Unsupported(format!("moment order k = {}; only k = 2 is implemented", self.k)));
        }
        if let Symmetry::SUd { d } = self.symmetry {
            if d < 2 {
                return Err(Error::InvalidArgument(format!("SU(d) needs d >= 2, got {d}")));
            }
        }
        Ok(())
    }

    /// The generating set described by `graph` and `edges`.
    pub fn generating_set(&self) -> Result<GeneratingSet> {
        GeneratingSet::new(self.graph, self.n, self.edges.as_deref())
    }

    /// Builds the validated model.
    pub fn model(&self) -> Result<Model> {
        self.validate()?;
        Model::new(self.symmetry, self.n, self.generating_set()?)
    }

    fn includes(&self, sector: usize) -> bool {
        self.sectors.as_ref().map_or(true, |s| s.contains(&sector))
    }
}

/// One sector of the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorRecord {
    pub index: usize,
    pub label: String,
    pub dim: usize,
    pub multiplicity: u64,
}

/// Spectral data of one block of `T₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub block_id: String,
    pub block_type: BlockType,
    pub sectors: Vec<usize>,
    /// Dimensions of the sectors involved.
    pub dims: Vec<usize>,
    /// Size of the filtered basis.
    pub dim: usize,
    /// Leading eigenvalues, descending.
    pub eigen_head: Vec<f64>,
    /// Number of unit eigenvalues.
    pub unit_multiplicity: usize,
    /// Largest eigenvalue outside the unit eigenspace.
    pub lambda2: Option<f64>,
    /// `1 − lambda2`; `None` when the block has no state outside the unit eigenspace.
    pub gap: Option<f64>,
    /// Upper bound on `lambda2` (mixed-sector blocks only).
    pub bound: Option<f64>,
    pub pass: bool,
}

/// Global quantities of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalSummary {
    /// Minimum gap of `T₂` over the included blocks.
    pub gap: Option<f64>,
    /// Minimum gap of the modified operator `M₂` over the sandwiched sectors.
    pub gap_modified: Option<f64>,
    /// Minimum gap of the Cayley kernel over the sandwiched sectors.
    pub gap_cayley: Option<f64>,
    /// Constant `c` in `c·Δ(Cay) ≤ Δ(M₂)` (1/10 for U(1), 1/14 for SU(d)).
    pub cayley_constant: f64,
    pub checks: Vec<Check>,
    /// Circuit depth for an `ε`-approximate 2-design.
    pub depth: Option<u64>,
    /// Logarithm used in the depth formula.
    pub log_base: String,
}

/// Result of [`run_gap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub schema: String,
    pub config: RunConfig,
    pub generating_set: Vec<(usize, usize)>,
    pub sectors: Vec<SectorRecord>,
    pub blocks: Vec<BlockRecord>,
    pub sandwiches: Vec<GapComparison>,
    pub global: GlobalSummary,
}

impl SpectralReport {
    /// True when every block, sandwich and global check passes.
    pub fn pass(&self) -> bool {
        self.blocks.iter().all(|b| b.pass) && self.sandwiches.iter().all(|s| s.pass()) && self.global.checks.iter().all(|c| c.pass)
    }

    /// Every failed inequality, labelled by where it occurred.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in self.blocks.iter().filter(|b| !b.pass) {
            out.push(format!("{}: lambda2 {:?} > bound {:?}", b.block_id, b.lambda2, b.bound));
        }
        for s in &self.sandwiches {
            for c in s.checks.iter().filter(|c| !c.pass) {
                out.push(format!("sector {}: {} ({} vs {})", s.label, c.name, c.lhs, c.rhs));
            }
        }
        for c in self.global.checks.iter().filter(|c| !c.pass) {
            out.push(format!("global: {} ({} vs {})", c.name, c.lhs, c.rhs));
        }
        out
    }
}

/// Depth `p = ⌈(2kn ln d + ln(1/ε))/Δ⌉` (natural logarithms).
pub fn convergence_depth(gap: f64, k: usize, n: usize, d: usize, epsilon: f64) -> Result<u64> {
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::NoGap(gap));
    }
    if !(epsilon > 0.0) || d == 0 {
        return Err(Error::InvalidArgument(format!("depth needs epsilon > 0 and d >= 1 (got {epsilon}, {d})")));
    }
    let num = 2.0 * k as f64 * n as f64 * (d as f64).ln() + (1.0 / epsilon).ln();
    Ok(((num / gap).ceil() as u64).max(1))
}

fn block_id(model: &Model, bt: BlockType, sectors: &[usize]) -> String {
    let t = match bt {
        BlockType::Type1 => "type1",
        BlockType::Type2 => "type2",
        BlockType::Type3 => "type3",
    };
    let labels: Vec<String> = sectors.iter().map(|&s| model.sectors[s].label.to_string()).collect();
    format!("{t}:{}", labels.join("|"))
}

fn type3_record(model: &Model, sector: usize) -> Result<BlockRecord> {
    let dim = model.sectors[sector].dim;
    let basis = moment::filtered_basis(model, BlockType::Type3, sector, None)?;
    let mut rec = BlockRecord {
        block_id: block_id(model, BlockType::Type3, &[sector]),
        block_type: BlockType::Type3,
        sectors: vec![sector],
        dims: vec![dim],
        dim: basis.len(),
        eigen_head: vec![1.0],
        unit_multiplicity: 1,
        lambda2: None,
        gap: None,
        bound: None,
        pass: true,
    };
    if dim < 2 {
        return Ok(rec);
    }
    // The unit eigenspace is spanned by one vector in S_A and one in S_D;
    // S_B and S_C carry none, so the block's gap is the smallest subspace gap.
    let block = moment::assemble_block(model, &moment::swap_moment_terms(MomentOrder::K2), &basis)?;
    let split = moment::subspace_split(&block, &basis)?;
    let mut head = Vec::new();
    let mut gap = f64::INFINITY;
    for sub in [&split.a, &split.b, &split.c, &split.d] {
        let k = sub.matrix.nrows().min(2);
        if k == 0 {
            continue;
        }
        head.extend(moment::spectral_head(&sub.matrix, k)?.eigenvalues);
        if let Some(g) = markov::subspace_gap(sub)? {
            gap = gap.min(g);
        }
    }
    head.sort_by(|a, b| b.total_cmp(a));
    rec.unit_multiplicity = head.iter().filter(|&&v| v > 1.0 - moment::UNIT_TOL).count();
    rec.eigen_head = head;
    if gap.is_finite() {
        rec.gap = Some(gap);
        rec.lambda2 = Some(1.0 - gap);
    }
    Ok(rec)
}

fn mixed_record(model: &Model, bt: BlockType, lambda: usize, mu: usize, slack: f64) -> Result<BlockRecord> {
    let r = moment::type12_gap_check(model, bt, lambda, mu, slack)?;
    let lambda2 = r.lambda2.is_finite().then_some(r.lambda2);
    Ok(BlockRecord {
        block_id: block_id(model, bt, &[lambda, mu]),
        block_type: bt,
        sectors: vec![lambda, mu],
        dims: vec![model.sectors[lambda].dim, model.sectors[mu].dim],
        dim: r.dim,
        eigen_head: r.eigen_head,
        unit_multiplicity: r.unit_multiplicity,
        lambda2,
        gap: lambda2.map(|l| 1.0 - l),
        bound: Some(r.bound),
        pass: r.pass,
    })
}

enum Task {
    Type3(usize),
    Mixed(BlockType, usize, usize),
}

/// Runs the full pipeline for `config`.
///
/// Mixed-sector blocks are computed once per unordered sector pair: the
/// `(μ, λ)` block is the `(λ, μ)` block with the factor pairs exchanged.
pub fn run_gap(config: &RunConfig) -> Result<SpectralReport> {
    let model = config.model()?;
    model.require_closed_form_support()?;
    let ns = model.sectors.len();
    let included: Vec<usize> = (0..ns).filter(|&s| config.includes(s)).collect();

    let mut tasks: Vec<Task> = included.iter().map(|&s| Task::Type3(s)).collect();
    if config.include_mixed {
        for (i, &l) in included.iter().enumerate() {
            for &m in &included[i + 1..] {
                tasks.push(Task::Mixed(BlockType::Type1, l, m));
                tasks.push(Task::Mixed(BlockType::Type2, l, m));
            }
        }
    }
    let blocks = tasks
        .par_iter()
        .map(|t| match *t {
            Task::Type3(s) => type3_record(&model, s),
            Task::Mixed(bt, l, m) => mixed_record(&model, bt, l, m, config.slack),
        })
        .collect::<Result<Vec<_>>>()?;
    let sandwiches = included
        .par_iter()
        .map(|&s| markov::sandwich_report(&model, s, config.slack))
        .collect::<Result<Vec<_>>>()?;

    let global = global_summary(config, &model, &blocks, &sandwiches)?;
    Ok(SpectralReport {
        schema: SCHEMA.to_string(),
        config: config.clone(),
        generating_set: model.gen_set.transpositions.clone(),
        sectors: model
            .sectors
            .iter()
            .enumerate()
            .map(|(i, s)| SectorRecord { index: i, label: s.label.to_string(), dim: s.dim, multiplicity: s.multiplicity })
            .collect(),
        blocks,
        sandwiches,
        global,
    })
}

fn min_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.reduce(f64::min)
}

fn global_summary(config: &RunConfig, model: &Model, blocks: &[BlockRecord], sandwiches: &[GapComparison]) -> Result<GlobalSummary> {
    let gap = min_of(blocks.iter().filter_map(|b| b.gap));
    let gap_t3 = min_of(blocks.iter().filter(|b| b.block_type == BlockType::Type3).filter_map(|b| b.gap));
    let gap_modified = min_of(sandwiches.iter().filter_map(|s| s.m2_gap()));
    let gap_cayley = min_of(sandwiches.iter().filter_map(|s| s.cayley_gap()));
    let cayley_constant = match model.symmetry {
        Symmetry::U1 => 0.1,
        Symmetry::SUd { .. } => 1.0 / 14.0,
    };
    let mut checks = Vec::new();
    if let (Some(m), Some(c)) = (gap_modified, gap_cayley) {
        checks.push(Check::le("cayley_fraction_le_delta_modified", cayley_constant * c, m, config.slack));
        checks.push(Check::le("delta_modified_le_four_delta_cayley", m, 4.0 * c, config.slack));
    }
    if let (Some(m), Some(t)) = (gap_modified, gap_t3) {
        checks.push(Check::le("delta_modified_le_delta_t", m, t, config.slack));
    }
    let depth = match gap {
        Some(g) => Some(convergence_depth(g, config.k, config.n, model.symmetry.local_dim(), config.epsilon)?),
        None => None,
    };
    Ok(GlobalSummary { gap, gap_modified, gap_cayley, cayley_constant, checks, depth, log_base: "natural".into() })
}

/// Output formats of [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Serializes a report: pretty JSON, or CSV with columns
/// `block_id, dim, lambda2, gap, bound, pass` (one row per block).
pub fn render(report: &SpectralReport, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map_err(|e| Error::Internal(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Internal(e.to_string());
            w.write_record(["block_id", "dim", "lambda2", "gap", "bound", "pass"]).map_err(io)?;
            for b in &report.blocks {
                w.write_record([b.block_id.clone(), b.dim.to_string(), opt(b.lambda2), opt(b.gap), opt(b.bound), b.pass.to_string()])
                    .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

/// Writes [`render`]`(report, format)` to `path`.
pub fn emit(report: &SpectralReport, format: Format, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Parses a JSON report written by [`emit`].
pub fn parse_json(text: &str) -> Result<SpectralReport> {
    let r: SpectralReport = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if r.schema != SCHEMA {
        return Err(Error::Malformed(format!("unknown schema {:?}", r.schema)));
    }
    Ok(r)
}
