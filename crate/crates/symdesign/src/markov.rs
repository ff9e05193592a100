//! Moment blocks read as reversible Markov chains: stationary distributions,
//! spectral gaps, induced (first-return) chains, Dirichlet forms, canonical
//! paths with their congestion ratio, the closed-form per-generator blocks,
//! and the per-sector gap comparisons.
//!
//! State ordering: `s_ab` with `a < b` in lexicographic order, then the
//! diagonal states `v_aa` ordered by `a`.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Symmetry;
use crate::linalg;
use crate::moment::{self, BlockType, MomentOrder, Model, SubBlock, SubspaceKind};

/// Tolerance for stochasticity (row sums, negativity) of assembled chains.
pub const STOCHASTIC_TOL: f64 = 1e-10;

/// Transitions with probability above this count as edges.
pub const EDGE_TOL: f64 = 1e-12;

/// Default slack for the gap inequalities.
pub const GAP_SLACK: f64 = 1e-8;

/// A finite reversible Markov chain.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    /// State labels `(a, b)`.
    pub labels: Vec<(usize, usize)>,
    /// Row-stochastic transition matrix.
    pub p: DMatrix<f64>,
    /// Stationary distribution.
    pub pi: Vec<f64>,
}

impl MarkovChain {
    /// Validates stochasticity, irreducibility and reversibility, and computes
    /// the stationary distribution from detailed balance.
    pub fn new(labels: Vec<(usize, usize)>, p: DMatrix<f64>) -> Result<Self> {
        let n = p.nrows();
        if p.ncols() != n || labels.len() != n {
            return Err(Error::InvalidArgument("transition matrix must be square and labelled".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("a chain needs at least one state".into()));
        }
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                let v = p[(i, j)];
                if v < -STOCHASTIC_TOL {
                    return Err(Error::NotStochastic(format!("negative entry P({i},{j}) = {v:e}")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic(format!("row {i} sums to {sum}")));
            }
        }
        // Detailed balance along a BFS tree of the positive pattern; this also
        // establishes irreducibility.
        let mut weight = vec![f64::NAN; n];
        weight[0] = 1.0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if weight[y].is_nan() && p[(x, y)] > EDGE_TOL {
                    if p[(y, x)] <= EDGE_TOL {
                        return Err(Error::NotStochastic(format!("transition {x}->{y} has no reverse; chain is not reversible")));
                    }
                    weight[y] = weight[x] * p[(x, y)] / p[(y, x)];
                    queue.push_back(y);
                }
            }
        }
        if let Some(u) = weight.iter().position(|w| w.is_nan()) {
            return Err(Error::NotStochastic(format!("chain is reducible: state {u} is unreachable from state 0")));
        }
        let total: f64 = weight.iter().sum();
        let pi: Vec<f64> = weight.iter().map(|w| w / total).collect();
        for x in 0..n {
            for y in x + 1..n {
                let (f, b) = (pi[x] * p[(x, y)], pi[y] * p[(y, x)]);
                if (f - b).abs() > STOCHASTIC_TOL * pi[x].max(pi[y]) {
                    return Err(Error::NotStochastic(format!("detailed balance fails between {x} and {y}: {f:e} vs {b:e}")));
                }
            }
        }
        Ok(MarkovChain { labels, p, pi })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `diag(π)^{1/2} P diag(π)^{−1/2}`, symmetric for reversible chains.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let s: Vec<f64> = self.pi.iter().map(|x| x.sqrt()).collect();
        DMatrix::from_fn(self.len(), self.len(), |i, j| s[i] * self.p[(i, j)] / s[j])
    }

    /// Index of a state label.
    pub fn index_of(&self, label: (usize, usize)) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

/// Interprets a compressed block on `S_A`, `S_D` or `Sym` as a Markov chain.
pub fn chain_from_block(block: &SubBlock) -> Result<MarkovChain> {
    if !matches!(block.kind, SubspaceKind::A | SubspaceKind::D | SubspaceKind::Sym) {
        return Err(Error::InvalidArgument(format!("{:?} blocks are not stochastic", block.kind)));
    }
    MarkovChain::new(block.labels.clone(), block.matrix.to_dense())
}

/// All eigenvalues (descending) of a reversible chain.
pub fn chain_spectrum(chain: &MarkovChain) -> Result<Vec<f64>> {
    linalg::sym_eigenvalues(&chain.symmetrized())
}

/// `Δ = 1 − λ₂`. Errors for single-state chains, where no gap is defined.
pub fn spectral_gap(chain: &MarkovChain) -> Result<f64> {
    if chain.len() < 2 {
        return Err(Error::InvalidArgument("a single-state chain has no second eigenvalue".into()));
    }
    let sym = linalg::SparseMatrix::from_dense(&chain.symmetrized());
    let ev = linalg::top_eigenvalues(&sym, 2)?;
    Ok(1.0 - ev[1])
}

/// First-return chain on `kept`: `P̃ = P_SS + P_SC (I − P_CC)^{−1} P_CS`.
pub fn induced_chain(chain: &MarkovChain, kept: &[usize]) -> Result<MarkovChain> {
    let n = chain.len();
    if kept.is_empty() {
        return Err(Error::InvalidArgument("induced chain needs a nonempty state subset".into()));
    }
    let mut in_s = vec![false; n];
    for &k in kept {
        if k >= n || in_s[k] {
            return Err(Error::InvalidArgument(format!("kept state {k} is out of range or repeated")));
        }
        in_s[k] = true;
    }
    let comp: Vec<usize> = (0..n).filter(|&i| !in_s[i]).collect();
    let (s, c) = (kept.len(), comp.len());
    let pss = DMatrix::from_fn(s, s, |i, j| chain.p[(kept[i], kept[j])]);
    let p = if c == 0 {
        pss
    } else {
        let psc = DMatrix::from_fn(s, c, |i, j| chain.p[(kept[i], comp[j])]);
        let pcs = DMatrix::from_fn(c, s, |i, j| chain.p[(comp[i], kept[j])]);
        let a = DMatrix::from_fn(c, c, |i, j| if i == j { 1.0 } else { 0.0 } - chain.p[(comp[i], comp[j])]);
        let x = a
            .lu()
            .solve(&pcs)
            .ok_or_else(|| Error::Internal("I − P_CC is singular; the chain cannot be irreducible".into()))?;
        pss + psc * x
    };
    MarkovChain::new(kept.iter().map(|&k| chain.labels[k]).collect(), p)
}

/// `½ Σ_{x,y} (f(x) − f(y))² π(x) P(x,y)`.
pub fn dirichlet(chain: &MarkovChain, f: &[f64]) -> Result<f64> {
    if f.len() != chain.len() {
        return Err(Error::Mismatch(format!("function has {} values for {} states", f.len(), chain.len())));
    }
    let mut e = 0.0;
    for x in 0..chain.len() {
        for y in 0..chain.len() {
            let df = f[x] - f[y];
            e += df * df * chain.pi[x] * chain.p[(x, y)];
        }
    }
    Ok(0.5 * e)
}

/// Canonical paths: for each source transition `(x, y)` a walk in the target.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PathFamily {
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

impl PathFamily {
    /// Longest path length (number of edges).
    pub fn max_len(&self) -> usize {
        self.paths.values().map(|p| p.len() - 1).max().unwrap_or(0)
    }
}

fn shares_labels(z: (usize, usize), x: (usize, usize), y: (usize, usize)) -> bool {
    let pool = [x.0, x.1, y.0, y.1];
    pool.contains(&z.0) && pool.contains(&z.1)
}

/// Builds length-1 paths where the target has the same transition and
/// length-2 paths through an intermediate otherwise, preferring the
/// intermediate formed from the labels of the endpoints (lexicographically
/// smallest among ties). Both chains must share the same state labels.
pub fn build_paths(source: &MarkovChain, target: &MarkovChain) -> Result<PathFamily> {
    if source.labels != target.labels {
        return Err(Error::Mismatch("source and target chains have different state labels".into()));
    }
    let n = source.len();
    let mut fam = PathFamily::default();
    for x in 0..n {
        for y in x + 1..n {
            if source.p[(x, y)] <= EDGE_TOL && source.p[(y, x)] <= EDGE_TOL {
                continue;
            }
            let path = if target.p[(x, y)] > EDGE_TOL {
                vec![x, y]
            } else {
                let candidates: Vec<usize> =
                    (0..n).filter(|&z| z != x && z != y && target.p[(x, z)] > EDGE_TOL && target.p[(z, y)] > EDGE_TOL).collect();
                let pick = candidates
                    .iter()
                    .copied()
                    .find(|&z| shares_labels(target.labels[z], target.labels[x], target.labels[y]))
                    .or_else(|| candidates.first().copied())
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "no target path of length <= 2 between {:?} and {:?}",
                            source.labels[x], source.labels[y]
                        ))
                    })?;
                vec![x, pick, y]
            };
            let mut rev = path.clone();
            rev.reverse();
            fam.paths.insert((x, y), path);
            fam.paths.insert((y, x), rev);
        }
    }
    Ok(fam)
}

/// `A = max_{(p,q)} Σ_{γ_xy ∋ (p,q)} π_s(x) P_s(x,y) |γ_xy| / (π_t(p) P_t(p,q))`.
pub fn congestion_ratio(source: &MarkovChain, target: &MarkovChain, paths: &PathFamily) -> Result<f64> {
    let mut load: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (&(x, y), path) in &paths.paths {
        let flow = source.pi[x] * source.p[(x, y)] * (path.len() - 1) as f64;
        for w in path.windows(2) {
            *load.entry((w[0], w[1])).or_insert(0.0) += flow;
        }
    }
    let mut a = 0.0f64;
    for (&(p, q), &l) in &load {
        let cap = target.pi[p] * target.p[(p, q)];
        if cap <= 0.0 {
            return Err(Error::Internal(format!("path uses the impossible target transition {p}->{q}")));
        }
        a = a.max(l / cap);
    }
    Ok(a)
}

/// Interaction pattern of one generator with a pair of labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauPattern {
    /// `τ` exchanges the two labels: states `(s_ab, v_aa, v_bb)`.
    PairSwap,
    /// `τ` moves both labels elsewhere: states `(s_ab, s_cd, s_ad, s_cb)`.
    DoubleMove,
    /// `τ` moves one label: states `(s_ab, s_cb)`.
    SingleMove,
    /// `τ` fixes both labels up to sign.
    Fixed,
}

/// The exact per-generator block (already divided by 8) on `S_A`, `S_D` or
/// `Sym`. `inv_r2` holds `1/r²` for the moved labels (`[q]` for pair-swap
/// and single-move, `[q_ac, q_bd]` for double-move); `U(1)` uses `1/r² = 0`.
pub fn predicted_tau_block(symmetry: Symmetry, pattern: TauPattern, subspace: SubspaceKind, inv_r2: Option<&[f64]>) -> Result<DMatrix<f64>> {
    if !matches!(subspace, SubspaceKind::A | SubspaceKind::D | SubspaceKind::Sym) {
        return Err(Error::InvalidArgument(format!("no closed form on {subspace:?}")));
    }
    let needed = match pattern {
        TauPattern::PairSwap | TauPattern::SingleMove => 1,
        TauPattern::DoubleMove => 2,
        TauPattern::Fixed => 0,
    };
    let q: Vec<f64> = match (symmetry, inv_r2) {
        (Symmetry::U1, None) => vec![0.0; needed],
        (_, Some(v)) if v.len() == needed => v.to_vec(),
        (Symmetry::SUd { .. }, None) => return Err(Error::InvalidArgument("SU(d) closed forms need the axial distances".into())),
        (_, Some(v)) => return Err(Error::InvalidArgument(format!("{pattern:?} needs {needed} axial distances, got {}", v.len()))),
    };
    let m = match pattern {
        TauPattern::Fixed => DMatrix::from_element(1, 1, 8.0),
        TauPattern::PairSwap => {
            let (q, s) = (q[0], 1.0 - q[0]);
            match subspace {
                SubspaceKind::A => DMatrix::from_row_slice(3, 3, &[4.0 + 4.0 * q, 2.0 * s, 2.0 * s, 2.0 * s, 6.0 + 2.0 * q, 0.0, 2.0 * s, 0.0, 6.0 + 2.0 * q]),
                SubspaceKind::D => DMatrix::from_element(1, 1, 8.0),
                _ => DMatrix::from_row_slice(3, 3, &[6.0 + 2.0 * q, s, s, 2.0 * s, 6.0 + 2.0 * q, 0.0, 2.0 * s, 0.0, 6.0 + 2.0 * q]),
            }
        }
        TauPattern::SingleMove => {
            let (q, s) = (q[0], 1.0 - q[0]);
            DMatrix::from_row_slice(2, 2, &[7.0 + q, s, s, 7.0 + q])
        }
        TauPattern::DoubleMove => {
            let (q1, q2) = (q[0], q[1]);
            let dg = 6.0 + q1 + q2;
            DMatrix::from_row_slice(
                4,
                4,
                &[dg, 0.0, 1.0 - q2, 1.0 - q1, 0.0, dg, 1.0 - q1, 1.0 - q2, 1.0 - q2, 1.0 - q1, dg, 0.0, 1.0 - q1, 1.0 - q2, 0.0, dg],
            )
        }
    };
    Ok(m / 8.0)
}

/// How one generator acts on one basis label: its partner (if moved) and
/// the squared diagonal entry `1/r²`.
fn label_action(model: &Model, sector: usize, tau_idx: usize, a: usize) -> (Option<usize>, f64) {
    let col = model.swap(sector, tau_idx).column(a);
    let diag = col.iter().find(|&&(i, _)| i == a).map_or(0.0, |&(_, v)| v);
    let partner = col.iter().find(|&&(i, v)| i != a && v.abs() > EDGE_TOL).map(|&(i, _)| i);
    (partner, if partner.is_some() { diag * diag } else { 1.0 })
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Pattern, state tuple and `1/r²` values of the per-generator orbit of a
/// state label on the given subspace.
fn orbit(model: &Model, sector: usize, tau_idx: usize, label: (usize, usize), kind: SubspaceKind) -> (TauPattern, Vec<(usize, usize)>, Vec<f64>) {
    let (a, b) = label;
    let (pa, qa) = label_action(model, sector, tau_idx, a);
    if a == b {
        return match pa {
            None => (TauPattern::Fixed, vec![(a, a)], vec![]),
            Some(c) => (TauPattern::PairSwap, vec![pair(a, c), (a.min(c), a.min(c)), (a.max(c), a.max(c))], vec![qa]),
        };
    }
    let (pb, qb) = label_action(model, sector, tau_idx, b);
    match (pa, pb) {
        (Some(c), _) if c == b => {
            if kind == SubspaceKind::D {
                (TauPattern::PairSwap, vec![(a, b)], vec![qa])
            } else {
                (TauPattern::PairSwap, vec![(a, b), (a, a), (b, b)], vec![qa])
            }
        }
        (None, None) => (TauPattern::Fixed, vec![(a, b)], vec![]),
        (Some(c), None) => (TauPattern::SingleMove, vec![(a, b), pair(c, b)], vec![qa]),
        (None, Some(d)) => (TauPattern::SingleMove, vec![(a, b), pair(a, d)], vec![qb]),
        (Some(c), Some(d)) => (TauPattern::DoubleMove, vec![(a, b), pair(c, d), pair(a, d), pair(c, b)], vec![qa, qb]),
    }
}

/// Largest deviation between the assembled per-generator blocks (`M₂^τ` on
/// `S_A` and `S_D`, the Cayley kernel on `Sym`) of one sector and the
/// closed forms of [`predicted_tau_block`], including any mass outside the
/// predicted orbit.
pub fn closed_form_residue(model: &Model, sector: usize, tau_idx: usize) -> Result<f64> {
    model.require_closed_form_support()?;
    let basis = moment::filtered_basis(model, BlockType::Type3, sector, None)?;
    let m = moment::assemble_tau_block(model, &moment::swap_moment_terms(MomentOrder::K2Modified), &basis, tau_idx)?;
    let cay = moment::assemble_tau_block(model, &moment::swap_moment_terms(MomentOrder::CayleyKernel), &basis, tau_idx)?;
    let mut worst = 0.0f64;
    for (kind, block) in [(SubspaceKind::A, &m), (SubspaceKind::D, &m), (SubspaceKind::Sym, &cay)] {
        let sub = moment::restrict(&block.matrix, &moment::subspace_basis(&basis, kind)?);
        worst = worst.max(sub.leakage);
        let index: std::collections::HashMap<(usize, usize), usize> = sub.labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        for (x, &label) in sub.labels.iter().enumerate() {
            let (pattern, states, q) = orbit(model, sector, tau_idx, label, kind);
            let pred = predicted_tau_block(model.symmetry, pattern, kind, Some(&q))?;
            let pos = states.iter().position(|&s| s == label).expect("orbit contains its seed");
            let ids: Vec<usize> = states
                .iter()
                .map(|s| index.get(s).copied().ok_or_else(|| Error::Internal(format!("orbit state {s:?} missing from {kind:?}"))))
                .collect::<Result<_>>()?;
            let mut row = vec![0.0; sub.labels.len()];
            for (y, v) in sub.matrix.row(x) {
                row[y] = v;
            }
            for (k, &y) in ids.iter().enumerate() {
                worst = worst.max((row[y] - pred[(pos, k)]).abs());
                row[y] = 0.0;
            }
            worst = worst.max(row.iter().fold(0.0f64, |acc, v| acc.max(v.abs())));
        }
    }
    Ok(worst)
}

/// One inequality `lhs ≤ rhs` (with slack) of a gap comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: &str, lhs: f64, rhs: f64, slack: f64) -> Self {
        Check { name: name.to_string(), lhs, rhs, pass: lhs <= rhs + slack }
    }

    pub fn lt(name: &str, lhs: f64, rhs: f64) -> Self {
        Check { name: name.to_string(), lhs, rhs, pass: lhs < rhs }
    }
}

/// Gaps and inequality checks for one sector's Type-3 block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapComparison {
    pub sector: usize,
    pub label: String,
    pub dim: usize,
    /// Sectors of dimension 1 carry no comparison.
    pub trivial: bool,
    /// Gap of `M₂` on `S_A`.
    pub delta_a: Option<f64>,
    /// Gap of `M₂` on `S_D`.
    pub delta_d: Option<f64>,
    /// Gap of the `S_A` chain induced on the off-diagonal states.
    pub delta_induced: Option<f64>,
    /// Gap of the Cayley kernel on `Sym`.
    pub delta_cay_sym: Option<f64>,
    /// Largest eigenvalue of `M₂` on `S_B ⊕ S_C`.
    pub lambda1_offdiag: Option<f64>,
    /// Second eigenvalue of the Cayley kernel on the whole Type-3 block.
    pub lambda2_cay: Option<f64>,
    /// Congestion ratio of the induced `S_A` chain against `S_D`.
    pub congestion: Option<f64>,
    /// Constant `c` in `Δ(induced) ≤ c Δ_D` (5 for U(1), 7 for SU(d)).
    pub constant: f64,
    pub checks: Vec<Check>,
}

impl GapComparison {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The sector's contribution to the global `M₂` gap:
    /// `min{Δ_A, Δ_D, 1 − λ₁(S_B ⊕ S_C)}`.
    pub fn m2_gap(&self) -> Option<f64> {
        [self.delta_a, self.delta_d, self.lambda1_offdiag.map(|l| 1.0 - l)].into_iter().flatten().reduce(f64::min)
    }

    /// `1 − λ₂(Cay)` for this sector.
    pub fn cayley_gap(&self) -> Option<f64> {
        self.lambda2_cay.map(|l| 1.0 - l)
    }
}

/// Runs every per-sector comparison: `¼Δ_A ≤ Δ(Cay_Sym) ≤ 2Δ_A`,
/// `Δ_A ≤ Δ(induced) ≤ cΔ_D`, `Δ_D ≤ Δ(induced)`, `λ₁(S_B ⊕ S_C) ≤ λ₂(Cay)`,
/// the congestion bound and the path-comparison inequality.
pub fn sandwich_report(model: &Model, sector: usize, slack: f64) -> Result<GapComparison> {
    model.require_closed_form_support()?;
    let desc = model
        .sectors
        .get(sector)
        .ok_or_else(|| Error::InvalidArgument(format!("sector index {sector} out of range")))?;
    let su = matches!(model.symmetry, Symmetry::SUd { .. });
    let constant = if su { 7.0 } else { 5.0 };
    let mut out = GapComparison {
        sector,
        label: desc.label.to_string(),
        dim: desc.dim,
        trivial: desc.dim < 2,
        delta_a: None,
        delta_d: None,
        delta_induced: None,
        delta_cay_sym: None,
        lambda1_offdiag: None,
        lambda2_cay: None,
        congestion: None,
        constant,
        checks: Vec::new(),
    };
    if out.trivial {
        return Ok(out);
    }
    let basis = moment::filtered_basis(model, BlockType::Type3, sector, None)?;
    let m = moment::assemble_block(model, &moment::swap_moment_terms(MomentOrder::K2Modified), &basis)?;
    let cay = moment::assemble_block(model, &moment::swap_moment_terms(MomentOrder::CayleyKernel), &basis)?;
    let ms = moment::subspace_split(&m, &basis)?;
    let cs = moment::subspace_split(&cay, &basis)?;

    let chain_a = chain_from_block(&ms.a)?;
    let chain_d = chain_from_block(&ms.d)?;
    let chain_sym = chain_from_block(cs.sym.as_ref().expect("Cayley split has Sym"))?;
    let d = desc.dim;
    let off: Vec<usize> = (0..d * (d - 1) / 2).collect();
    let induced = induced_chain(&chain_a, &off)?;

    let delta_a = spectral_gap(&chain_a)?;
    let delta_sym = spectral_gap(&chain_sym)?;
    let lambda1_bc = moment::spectral_head(&ms.bc.matrix, 1)?.eigenvalues[0];
    let lambda2_cay = moment::spectral_head(&cay.matrix, 2)?.lambda2.expect("dim >= 2");
    out.delta_a = Some(delta_a);
    out.delta_cay_sym = Some(delta_sym);
    out.lambda1_offdiag = Some(lambda1_bc);
    out.lambda2_cay = Some(lambda2_cay);

    out.checks.push(Check::le("quarter_delta_a_le_delta_cay_sym", 0.25 * delta_a, delta_sym, slack));
    out.checks.push(Check::le("delta_cay_sym_le_twice_delta_a", delta_sym, 2.0 * delta_a, slack));
    out.checks.push(Check::le("lambda1_offdiag_le_lambda2_cay", lambda1_bc, lambda2_cay, slack));

    if off.len() >= 2 {
        let delta_d = spectral_gap(&chain_d)?;
        let delta_ind = spectral_gap(&induced)?;
        let paths = build_paths(&induced, &chain_d)?;
        let a = congestion_ratio(&induced, &chain_d, &paths)?;
        let ratio = induced.pi.iter().zip(&chain_d.pi).map(|(x, y)| (x / y).max(y / x)).fold(1.0f64, f64::max);
        out.delta_d = Some(delta_d);
        out.delta_induced = Some(delta_ind);
        out.congestion = Some(a);
        out.checks.push(Check::le("delta_a_le_delta_induced", delta_a, delta_ind, slack));
        out.checks.push(Check::le("delta_induced_le_c_delta_d", delta_ind, constant * delta_d, slack));
        out.checks.push(Check::le("delta_d_le_delta_induced", delta_d, delta_ind, slack));
        out.checks.push(Check::le("path_comparison", delta_ind, a * ratio * delta_d, slack));
        out.checks.push(if su { Check::lt("congestion_lt_7", a, 7.0) } else { Check::le("congestion_le_5", a, 5.0, slack) });
    }
    Ok(out)
}

/// Gaps of the full and modified operators on one invariant subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModifiedComparison {
    pub sector: usize,
    pub kind: SubspaceKind,
    pub dim: usize,
    /// Gap of `T₂` on the subspace.
    pub delta_t: f64,
    /// Gap of `M₂` on the subspace.
    pub delta_m: f64,
    /// `Δ(M) ≤ Δ(T)` and `Δ(T) ≤ 2Δ(M)`.
    pub checks: Vec<Check>,
}

impl ModifiedComparison {
    pub fn ratio(&self) -> f64 {
        self.delta_t / self.delta_m
    }
}

/// Gap of a subspace block: `1 − λ₂` on `S_A`/`S_D` (each carries one unit
/// eigenvector), `1 − λ₁` on `S_B`/`S_C` (no unit eigenvector). `None` when
/// the subspace has no state outside the unit eigenvector.
pub fn subspace_gap(block: &SubBlock) -> Result<Option<f64>> {
    let dim = block.matrix.nrows();
    let skip = usize::from(matches!(block.kind, SubspaceKind::A | SubspaceKind::D));
    if dim <= skip {
        return Ok(None);
    }
    let head = moment::spectral_head(&block.matrix, skip + 1)?;
    Ok(Some(1.0 - head.eigenvalues[skip]))
}

/// Compares the gaps of `T₂` and its modified operator `M₂` on each of
/// `S_A … S_D` of one sector's Type-3 block.
pub fn modified_gap_ordering(model: &Model, sector: usize, slack: f64) -> Result<Vec<ModifiedComparison>> {
    let desc = model
        .sectors
        .get(sector)
        .ok_or_else(|| Error::InvalidArgument(format!("sector index {sector} out of range")))?;
    if desc.dim < 2 {
        return Ok(Vec::new());
    }
    let basis = moment::filtered_basis(model, BlockType::Type3, sector, None)?;
    let t = moment::subspace_split(&moment::assemble_block(model, &moment::swap_moment_terms(MomentOrder::K2), &basis)?, &basis)?;
    let m = moment::subspace_split(&moment::assemble_block(model, &moment::swap_moment_terms(MomentOrder::K2Modified), &basis)?, &basis)?;
    let mut out = Vec::new();
    for (bt, bm) in [(&t.a, &m.a), (&t.b, &m.b), (&t.c, &m.c), (&t.d, &m.d)] {
        if let (Some(delta_t), Some(delta_m)) = (subspace_gap(bt)?, subspace_gap(bm)?) {
            out.push(ModifiedComparison {
                sector,
                kind: bt.kind,
                dim: bt.matrix.nrows(),
                delta_t,
                delta_m,
                checks: vec![
                    Check::le("delta_m_le_delta_t", delta_m, delta_t, slack),
                    Check::le("delta_t_le_twice_delta_m", delta_t, 2.0 * delta_m, slack),
                ],
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lbl(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, i)).collect()
    }

    #[test]
    fn two_state_gap() {
        let p = 0.3;
        let c = MarkovChain::new(lbl(2), DMatrix::from_row_slice(2, 2, &[1.0 - p, p, p, 1.0 - p])).unwrap();
        assert!((spectral_gap(&c).unwrap() - 2.0 * p).abs() < 1e-12);
    }

    #[test]
    fn identity_chain_is_rejected_as_reducible_but_single_state_is_fine() {
        assert!(MarkovChain::new(lbl(2), DMatrix::identity(2, 2)).is_err());
        let c = MarkovChain::new(lbl(1), DMatrix::identity(1, 1)).unwrap();
        assert_eq!(c.pi, vec![1.0]);
    }

    #[test]
    fn induced_three_state_example() {
        let p = DMatrix::from_row_slice(3, 3, &[0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5]);
        let c = MarkovChain::new(lbl(3), p).unwrap();
        let ind = induced_chain(&c, &[0, 1]).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[0.625, 0.375, 0.375, 0.625]);
        assert!((ind.p - expect).amax() < 1e-12);
        let all = induced_chain(&c, &[0, 1, 2]).unwrap();
        assert!((all.p - &c.p).amax() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        let c = MarkovChain::new(lbl(2), DMatrix::from_element(2, 2, 0.5)).unwrap();
        assert!((dirichlet(&c, &[0.0, 1.0]).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(dirichlet(&c, &[3.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn identical_chains_have_unit_congestion() {
        let p = DMatrix::from_row_slice(3, 3, &[0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5]);
        let c = MarkovChain::new(lbl(3), p).unwrap();
        let paths = build_paths(&c, &c).unwrap();
        assert_eq!(paths.max_len(), 1);
        assert!((congestion_ratio(&c, &c, &paths).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_examples() {
        let m = predicted_tau_block(Symmetry::U1, TauPattern::PairSwap, SubspaceKind::A, None).unwrap();
        assert_eq!(m * 8.0, DMatrix::from_row_slice(3, 3, &[4.0, 2.0, 2.0, 2.0, 6.0, 0.0, 2.0, 0.0, 6.0]));
        let m = predicted_tau_block(Symmetry::U1, TauPattern::SingleMove, SubspaceKind::D, None).unwrap();
        assert_eq!(m * 8.0, DMatrix::from_row_slice(2, 2, &[7.0, 1.0, 1.0, 7.0]));
        let su = predicted_tau_block(Symmetry::SUd { d: 2 }, TauPattern::PairSwap, SubspaceKind::A, Some(&[0.0])).unwrap();
        let u1 = predicted_tau_block(Symmetry::U1, TauPattern::PairSwap, SubspaceKind::A, None).unwrap();
        assert_eq!(su, u1);
        assert!(predicted_tau_block(Symmetry::SUd { d: 2 }, TauPattern::PairSwap, SubspaceKind::A, None).is_err());
    }
}
