//! Second-moment operators restricted to phase-filtered bases.
//!
//! Tensor convention: the four factors are ordered `U ⊗ U ⊗ Ū ⊗ Ū`, i.e. an
//! element `E^a_b ⊗ E^c_d` is stored as the index pattern `(a, c, b, d)`
//! (ket, ket, bra, bra). A placement such as `τIτI` applies the swap action
//! to factors 1 and 3 and the identity to factors 2 and 4. Every swap
//! representation used here is real orthogonal and symmetric, so complex
//! conjugation is trivial.
//!
//! The phase (Wick) projection is implemented by restriction: an operator is
//! assembled only on the span of the filtered basis, and components that
//! leave the span are discarded. Nothing ever touches the full `d⁴` space.
//!
//! Filtered bases per block:
//! * Type 1 `(λ, μ)`: patterns `(a, c, a, c)`, i.e. `E^a_a ⊗ E^c_c`, `a ∈ λ`, `c ∈ μ`.
//! * Type 2 `(λ, μ)`: patterns `(a, c, c, a)`, i.e. `|a c⟩⟨c a|`.
//! * Type 3 `(λ)`: homogeneous `(a, b, a, b)` for all `a, b`, then swapped
//!   `(a, b, b, a)` for `a ≠ b`.
//!
//! Type-3 blocks split further into the invariant subspaces `S_A … S_D`
//! (and `Sym` for the Cayley kernel); see [`SubspaceKind`].

use std::collections::HashMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cayley::{self, GeneratingSet, GraphKind};
use crate::error::{Error, Result};
use crate::hilbert::{self, SectorDescriptor, SwapAction, Symmetry};
use crate::linalg::{self, SparseMatrix};

/// Eigenvalues above `1 - UNIT_TOL` count as unit eigenvalues.
pub const UNIT_TOL: f64 = 1e-8;

/// Tolerance for structural checks (leakage out of an invariant subspace,
/// symmetry of an assembled block).
pub const STRUCT_TOL: f64 = 1e-10;

/// Moment operator selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentOrder {
    /// First moment `½(II + ττ)` on two factors.
    K1,
    /// Second moment `T₂^τ` of the swap exponential.
    K2,
    /// Modified second moment `M₂^τ`.
    K2Modified,
    /// Two-sided swap kernel of the Cayley moment operator.
    CayleyKernel,
    /// Any other caller-defined combination.
    Custom,
}

/// One term `coefficient · (A₁ ⊗ … ⊗ A_k)` with `A_i ∈ {I, τ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Rational64,
    /// `true` where the swap acts, `false` for the identity.
    pub placement: Vec<bool>,
}

impl Term {
    /// Placement written as a string over `{I, t}` (e.g. `"ItIt"`).
    pub fn placement_string(&self) -> String {
        self.placement.iter().map(|&t| if t { 't' } else { 'I' }).collect()
    }
}

/// Weighted list of swap placements; the operator is
/// `normalization · Σ coefficient · placement`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentTermSet {
    pub order: MomentOrder,
    pub terms: Vec<Term>,
    pub normalization: Rational64,
}

impl MomentTermSet {
    /// Builds a term set from `(coefficient, "ItIt")` pairs.
    pub fn custom(order: MomentOrder, terms: &[(i64, &str)], normalization: Rational64) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        let mut arity = None;
        for &(c, p) in terms {
            let placement = p
                .chars()
                .map(|ch| match ch {
                    'I' => Ok(false),
                    't' | 'T' | 'τ' => Ok(true),
                    other => Err(Error::InvalidArgument(format!("placement character {other:?} is not I or t"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            if *arity.get_or_insert(placement.len()) != placement.len() {
                return Err(Error::InvalidArgument("placements of different lengths".into()));
            }
            out.push(Term { coefficient: Rational64::from_integer(c), placement });
        }
        Ok(MomentTermSet { order, terms: out, normalization })
    }

    /// Number of tensor factors.
    pub fn arity(&self) -> usize {
        self.terms.first().map_or(0, |t| t.placement.len())
    }

    /// The operator's value when `τ` acts trivially (`Σ coefficient · normalization`).
    pub fn value_at_identity(&self) -> Rational64 {
        self.terms.iter().map(|t| t.coefficient).fold(Rational64::from_integer(0), |a, b| a + b) * self.normalization
    }
}

/// The term list of a named moment operator.
pub fn swap_moment_terms(order: MomentOrder) -> MomentTermSet {
    let eighth = Rational64::new(1, 8);
    let built = match order {
        MomentOrder::K1 => MomentTermSet::custom(order, &[(1, "II"), (1, "tt")], Rational64::new(1, 2)),
        MomentOrder::K2 => MomentTermSet::custom(
            order,
            &[(3, "IIII"), (3, "tttt"), (1, "ItIt"), (1, "IttI"), (1, "tIIt"), (1, "tItI"), (-1, "IItt"), (-1, "ttII")],
            eighth,
        ),
        MomentOrder::K2Modified => MomentTermSet::custom(
            order,
            &[(6, "IIII"), (1, "ItIt"), (1, "tItI"), (1, "tIIt"), (1, "IttI"), (-1, "IItt"), (-1, "ttII")],
            eighth,
        ),
        MomentOrder::CayleyKernel => MomentTermSet::custom(order, &[(6, "IIII"), (1, "tItI"), (1, "ItIt")], eighth),
        MomentOrder::Custom => MomentTermSet::custom(order, &[(1, "IIII")], Rational64::from_integer(1)),
    };
    built.expect("built-in placements are well formed")
}

/// The combination `IττI + τIIτ − IIττ − ττII` (scaled by 1/8), which is
/// the difference `M₂^τ − Cay^τ`. It vanishes identically on Type-1 blocks
/// and on one-dimensional sectors.
pub fn vanishing_terms() -> MomentTermSet {
    MomentTermSet::custom(MomentOrder::Custom, &[(1, "IttI"), (1, "tIIt"), (-1, "IItt"), (-1, "ttII")], Rational64::new(1, 8))
        .expect("well formed")
}

/// The three filtered block families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockType {
    Type1,
    Type2,
    Type3,
}

/// Sectors, generating set and cached swap actions for one `(symmetry, n, T)`.
#[derive(Clone, Debug)]
pub struct Model {
    pub symmetry: Symmetry,
    pub n: usize,
    pub gen_set: GeneratingSet,
    pub sectors: Vec<SectorDescriptor>,
    swaps: Vec<Vec<SwapAction>>,
}

impl Model {
    /// Decomposes the Hilbert space and caches the action of every generator
    /// on every sector.
    pub fn new(symmetry: Symmetry, n: usize, gen_set: GeneratingSet) -> Result<Self> {
        if gen_set.n != n {
            return Err(Error::Mismatch(format!("generating set is on {} sites but n = {n}", gen_set.n)));
        }
        gen_set.validate()?;
        let sectors = hilbert::sectors(symmetry, n)?;
        let swaps = sectors
            .iter()
            .map(|s| gen_set.transpositions.iter().map(|&t| hilbert::swap_action(s, t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Model { symmetry, n, gen_set, sectors, swaps })
    }

    /// Convenience constructor for a named generating-set family.
    pub fn with_graph(symmetry: Symmetry, n: usize, kind: GraphKind) -> Result<Self> {
        Self::new(symmetry, n, GeneratingSet::new(kind, n, None)?)
    }

    pub fn num_taus(&self) -> usize {
        self.gen_set.len()
    }

    /// The action of generator `tau_idx` on sector `sector`.
    pub fn swap(&self, sector: usize, tau_idx: usize) -> &SwapAction {
        &self.swaps[sector][tau_idx]
    }

    /// Index of the sector with the given label, if present.
    pub fn sector_index(&self, label: &hilbert::SectorLabel) -> Option<usize> {
        self.sectors.iter().position(|s| &s.label == label)
    }

    /// Errors when the Young-orthogonal-form closed forms do not apply
    /// (`SU(d)` with non-nearest-neighbour generators).
    pub fn require_closed_form_support(&self) -> Result<()> {
        if matches!(self.symmetry, Symmetry::SUd { .. }) && !self.gen_set.is_adjacent_only() {
            return Err(Error::Unsupported(format!(
                "SU(d) analysis admits only nearest-neighbour generating sets, got {}",
                self.gen_set.id()
            )));
        }
        Ok(())
    }
}

/// Ordered index patterns spanning one filtered block.
#[derive(Clone, Debug)]
pub struct FilteredBasis {
    pub block_type: BlockType,
    /// Model sector indices: `[λ]` for Type 3, `[λ, μ]` otherwise.
    pub sectors: Vec<usize>,
    /// Sector of each tensor factor.
    pub factor_sectors: [usize; 4],
    elements: Vec<[u32; 4]>,
    lookup: HashMap<[u32; 4], usize>,
}

impl FilteredBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[[u32; 4]] {
        &self.elements
    }

    /// Position of a pattern, if it belongs to the basis.
    pub fn index(&self, pattern: [u32; 4]) -> Option<usize> {
        self.lookup.get(&pattern).copied()
    }

    /// Sector dimension of a Type-3 block.
    fn type3_dim(&self) -> usize {
        ((1.0 + (1.0 + 8.0 * self.len() as f64).sqrt()) / 4.0).round() as usize
    }
}

/// Builds the filtered basis of a block. `mu` must be `None` for Type 3 and a
/// different sector for Types 1 and 2.
pub fn filtered_basis(model: &Model, block_type: BlockType, lambda: usize, mu: Option<usize>) -> Result<FilteredBasis> {
    let ns = model.sectors.len();
    let check = |s: usize| {
        if s >= ns {
            Err(Error::InvalidArgument(format!("sector index {s} out of range ({ns} sectors)")))
        } else {
            Ok(())
        }
    };
    check(lambda)?;
    let mut elements = Vec::new();
    let (sectors, factor_sectors) = match (block_type, mu) {
        (BlockType::Type3, None) => {
            let d = model.sectors[lambda].dim as u32;
            for a in 0..d {
                for b in 0..d {
                    elements.push([a, b, a, b]);
                }
            }
            for a in 0..d {
                for b in 0..d {
                    if a != b {
                        elements.push([a, b, b, a]);
                    }
                }
            }
            (vec![lambda], [lambda; 4])
        }
        (BlockType::Type3, Some(_)) => return Err(Error::InvalidArgument("Type3 blocks take a single sector".into())),
        (_, None) => return Err(Error::InvalidArgument("Type1/Type2 blocks need two sectors".into())),
        (t, Some(mu)) => {
            check(mu)?;
            if mu == lambda {
                return Err(Error::InvalidArgument("Type1/Type2 blocks need two distinct sectors".into()));
            }
            let (dl, dm) = (model.sectors[lambda].dim as u32, model.sectors[mu].dim as u32);
            for a in 0..dl {
                for c in 0..dm {
                    elements.push(if t == BlockType::Type1 { [a, c, a, c] } else { [a, c, c, a] });
                }
            }
            let fs = if t == BlockType::Type1 { [lambda, mu, lambda, mu] } else { [lambda, mu, mu, lambda] };
            (vec![lambda, mu], fs)
        }
    };
    let lookup = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    Ok(FilteredBasis { block_type, sectors, factor_sectors, elements, lookup })
}

/// Context attached to an assembled block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMeta {
    pub symmetry: Symmetry,
    pub n: usize,
    pub gen_set: String,
    pub order: MomentOrder,
    /// The single generator for a per-`τ` block, `None` for the average.
    pub tau: Option<(usize, usize)>,
}

/// An assembled operator on a filtered basis: entry `(i, j)` is
/// `⟨e_i, Op e_j⟩` (Hilbert–Schmidt inner product of basis patterns).
#[derive(Clone, Debug)]
pub struct MomentBlock {
    pub block_type: BlockType,
    pub sectors: Vec<usize>,
    pub matrix: SparseMatrix,
    pub meta: BlockMeta,
}

fn accumulate(
    model: &Model,
    terms: &MomentTermSet,
    basis: &FilteredBasis,
    tau_idx: usize,
    weight: f64,
    out: &mut Vec<(usize, usize, f64)>,
) -> Result<()> {
    if terms.arity() != 4 {
        return Err(Error::InvalidArgument(format!("block assembly needs 4-factor terms, got {}", terms.arity())));
    }
    let norm = *terms.normalization.numer() as f64 / *terms.normalization.denom() as f64;
    let coefs: Vec<f64> = terms.terms.iter().map(|t| weight * norm * (*t.coefficient.numer() as f64 / *t.coefficient.denom() as f64)).collect();
    let actions: Vec<&SwapAction> = basis.factor_sectors.iter().map(|&s| model.swap(s, tau_idx)).collect();
    let mut ident = [[(0usize, 1.0f64)]; 4];
    for (j, e) in basis.elements.iter().enumerate() {
        for k in 0..4 {
            ident[k][0].0 = e[k] as usize;
        }
        for (term, &c) in terms.terms.iter().zip(&coefs) {
            let cols: [&[(usize, f64)]; 4] = std::array::from_fn(|k| {
                if term.placement[k] {
                    actions[k].column(e[k] as usize)
                } else {
                    &ident[k][..]
                }
            });
            for &(i0, v0) in cols[0] {
                for &(i1, v1) in cols[1] {
                    let v01 = v0 * v1;
                    for &(i2, v2) in cols[2] {
                        let v012 = v01 * v2;
                        for &(i3, v3) in cols[3] {
                            if let Some(&i) = basis.lookup.get(&[i0 as u32, i1 as u32, i2 as u32, i3 as u32]) {
                                out.push((i, j, c * v012 * v3));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `(1/|T|) Σ_τ` of the term-weighted four-fold swap action, restricted to
/// the filtered basis.
pub fn assemble_block(model: &Model, terms: &MomentTermSet, basis: &FilteredBasis) -> Result<MomentBlock> {
    let w = 1.0 / model.num_taus() as f64;
    let mut trip = Vec::new();
    for t in 0..model.num_taus() {
        accumulate(model, terms, basis, t, w, &mut trip)?;
    }
    Ok(MomentBlock {
        block_type: basis.block_type,
        sectors: basis.sectors.clone(),
        matrix: SparseMatrix::from_triplets(basis.len(), basis.len(), trip),
        meta: BlockMeta { symmetry: model.symmetry, n: model.n, gen_set: model.gen_set.id(), order: terms.order, tau: None },
    })
}

/// The contribution of the single generator `tau_idx` (no averaging).
pub fn assemble_tau_block(model: &Model, terms: &MomentTermSet, basis: &FilteredBasis, tau_idx: usize) -> Result<MomentBlock> {
    if tau_idx >= model.num_taus() {
        return Err(Error::InvalidArgument(format!("generator index {tau_idx} out of range")));
    }
    let mut trip = Vec::new();
    accumulate(model, terms, basis, tau_idx, 1.0, &mut trip)?;
    Ok(MomentBlock {
        block_type: basis.block_type,
        sectors: basis.sectors.clone(),
        matrix: SparseMatrix::from_triplets(basis.len(), basis.len(), trip),
        meta: BlockMeta {
            symmetry: model.symmetry,
            n: model.n,
            gen_set: model.gen_set.id(),
            order: terms.order,
            tau: Some(model.gen_set.transpositions[tau_idx]),
        },
    })
}

/// Commutant vectors of a block in filtered coordinates: the identity for
/// Type 1, the swap for Type 2, and both for Type 3.
pub fn commutant_vectors(basis: &FilteredBasis) -> Vec<Vec<f64>> {
    match basis.block_type {
        BlockType::Type1 | BlockType::Type2 => vec![vec![1.0; basis.len()]],
        BlockType::Type3 => {
            let ident = basis.elements.iter().map(|e| if e[0] == e[2] { 1.0 } else { 0.0 }).collect();
            let swap = basis.elements.iter().map(|e| if e[0] == e[3] { 1.0 } else { 0.0 }).collect();
            vec![ident, swap]
        }
    }
}

/// Largest deviation `‖Op v − v‖_∞` over the commutant vectors.
pub fn unitality_residue(block: &MomentBlock, basis: &FilteredBasis) -> f64 {
    let mut worst = 0.0f64;
    for v in commutant_vectors(basis) {
        let mut w = vec![0.0; v.len()];
        block.matrix.matvec(&v, &mut w);
        worst = worst.max(w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    worst
}

/// Invariant subspaces of a Type-3 block.
///
/// With `h(a,b) = E^a_a ⊗ E^b_b` and `s(a,b) = E^a_b ⊗ E^b_a`, for `a < b`:
/// * `S_A`: `½[h(a,b) + h(b,a) + s(a,b) + s(b,a)]`, plus `h(a,a)`;
/// * `S_B`: `½[(h(a,b) − h(b,a)) − (s(a,b) − s(b,a))]`;
/// * `S_C`: `½[(h(a,b) − h(b,a)) + (s(a,b) − s(b,a))]`;
/// * `S_D`: `½[(h(a,b) + h(b,a)) − (s(a,b) + s(b,a))]`;
/// * `Sym`: `½[h(a,b) + h(b,a)]`, plus `h(a,a)` (not normalized);
/// * `BC` and `AD` are the direct sums in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceKind {
    A,
    B,
    C,
    D,
    Sym,
    BC,
    AD,
}

/// Basis vectors of a subspace as sparse combinations of filtered patterns.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    pub kind: SubspaceKind,
    /// State labels `(a, b)`: `a < b` pairs first (lexicographic), then `(a, a)`.
    pub labels: Vec<(usize, usize)>,
    pub vectors: Vec<Vec<(usize, f64)>>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Builds the basis of `kind` inside a Type-3 filtered basis.
pub fn subspace_basis(basis: &FilteredBasis, kind: SubspaceKind) -> Result<SubspaceBasis> {
    if basis.block_type != BlockType::Type3 {
        return Err(Error::InvalidArgument("subspaces are defined on Type3 blocks only".into()));
    }
    match kind {
        SubspaceKind::BC | SubspaceKind::AD => {
            let (x, y) = if kind == SubspaceKind::BC { (SubspaceKind::B, SubspaceKind::C) } else { (SubspaceKind::A, SubspaceKind::D) };
            let mut first = subspace_basis(basis, x)?;
            let second = subspace_basis(basis, y)?;
            first.kind = kind;
            first.labels.extend(second.labels);
            first.vectors.extend(second.vectors);
            return Ok(first);
        }
        _ => {}
    }
    let d = basis.type3_dim() as u32;
    let idx = |p: [u32; 4]| basis.index(p).expect("Type3 pattern present");
    let mut labels = Vec::new();
    let mut vectors = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let (hab, hba, sab, sba) = (idx([a, b, a, b]), idx([b, a, b, a]), idx([a, b, b, a]), idx([b, a, a, b]));
            let v = match kind {
                SubspaceKind::A => vec![(hab, 0.5), (hba, 0.5), (sab, 0.5), (sba, 0.5)],
                SubspaceKind::B => vec![(hab, 0.5), (hba, -0.5), (sab, -0.5), (sba, 0.5)],
                SubspaceKind::C => vec![(hab, 0.5), (hba, -0.5), (sab, 0.5), (sba, -0.5)],
                SubspaceKind::D => vec![(hab, 0.5), (hba, 0.5), (sab, -0.5), (sba, -0.5)],
                SubspaceKind::Sym => vec![(hab, 0.5), (hba, 0.5)],
                SubspaceKind::BC | SubspaceKind::AD => unreachable!(),
            };
            labels.push((a as usize, b as usize));
            vectors.push(v);
        }
    }
    if matches!(kind, SubspaceKind::A | SubspaceKind::Sym) {
        for a in 0..d {
            labels.push((a as usize, a as usize));
            vectors.push(vec![(idx([a, a, a, a]), 1.0)]);
        }
    }
    Ok(SubspaceBasis { kind, labels, vectors })
}

/// An operator compressed to a subspace, in Markov-chain orientation:
/// `matrix[(x, y)]` is the coefficient of `u_y` in `Op u_x`, i.e.
/// `⟨u_y, Op u_x⟩ / ⟨u_y, u_y⟩`.
#[derive(Clone, Debug)]
pub struct SubBlock {
    pub kind: SubspaceKind,
    pub labels: Vec<(usize, usize)>,
    pub matrix: SparseMatrix,
    /// `max_x ‖Op u_x − Σ_y matrix[(x,y)] u_y‖_∞`: zero iff the subspace is invariant.
    pub leakage: f64,
}

/// Compresses an assembled matrix (`(i, j) = ⟨e_i, Op e_j⟩`) to a subspace.
pub fn restrict(matrix: &SparseMatrix, sub: &SubspaceBasis) -> SubBlock {
    let n = matrix.nrows();
    let mt = matrix.transpose();
    let mut membership: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut norm2 = vec![0.0; sub.dim()];
    for (y, v) in sub.vectors.iter().enumerate() {
        for &(i, c) in v {
            membership[i].push((y, c));
            norm2[y] += c * c;
        }
    }
    // Dense scratch vectors with explicit "touched" markers (values may
    // cancel to exactly zero, so zero cannot serve as the marker).
    let mut w = vec![0.0; n];
    let mut wmark = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut g = vec![0.0; sub.dim()];
    let mut gmark = vec![false; sub.dim()];
    let mut gtouched: Vec<usize> = Vec::new();
    let mut trip = Vec::new();
    let mut leakage = 0.0f64;
    fn add(i: usize, v: f64, w: &mut [f64], wmark: &mut [bool], touched: &mut Vec<usize>) {
        if !wmark[i] {
            wmark[i] = true;
            touched.push(i);
        }
        w[i] += v;
    }
    for (x, ux) in sub.vectors.iter().enumerate() {
        for &(j, c) in ux {
            for (i, v) in mt.row(j) {
                add(i, c * v, &mut w, &mut wmark, &mut touched);
            }
        }
        for &i in &touched {
            for &(y, c) in &membership[i] {
                if !gmark[y] {
                    gmark[y] = true;
                    gtouched.push(y);
                }
                g[y] += c * w[i];
            }
        }
        gtouched.sort_unstable();
        for &y in &gtouched {
            let p = g[y] / norm2[y];
            if p != 0.0 {
                trip.push((x, y, p));
                for &(i, c) in &sub.vectors[y] {
                    add(i, -p * c, &mut w, &mut wmark, &mut touched);
                }
            }
            g[y] = 0.0;
            gmark[y] = false;
        }
        for &i in &touched {
            leakage = leakage.max(w[i].abs());
            w[i] = 0.0;
            wmark[i] = false;
        }
        touched.clear();
        gtouched.clear();
    }
    SubBlock { kind: sub.kind, labels: sub.labels.clone(), matrix: SparseMatrix::from_triplets(sub.dim(), sub.dim(), trip), leakage }
}

/// The Type-3 block split into its invariant pieces.
#[derive(Clone, Debug)]
pub struct SplitBlocks {
    pub a: SubBlock,
    pub b: SubBlock,
    pub c: SubBlock,
    pub d: SubBlock,
    pub bc: SubBlock,
    /// Present for the Cayley kernel.
    pub sym: Option<SubBlock>,
    /// Largest leakage over the decomposition that is invariant for this
    /// operator: `A, B, C, D` for the moment operators; `A ⊕ D`, `B ⊕ C` and
    /// `Sym` for the Cayley kernel (which mixes `S_A` with `S_D` and `S_B`
    /// with `S_C`, so its `a`–`d` entries are compressions only).
    pub invariant_leakage: f64,
}

/// Changes basis to the invariant subspaces and verifies block-diagonality.
pub fn subspace_split(block: &MomentBlock, basis: &FilteredBasis) -> Result<SplitBlocks> {
    if block.block_type != BlockType::Type3 || basis.block_type != BlockType::Type3 {
        return Err(Error::InvalidArgument("subspace_split needs a Type3 block".into()));
    }
    if block.matrix.nrows() != basis.len() {
        return Err(Error::Mismatch("block and basis sizes differ".into()));
    }
    let get = |k| -> Result<SubBlock> { Ok(restrict(&block.matrix, &subspace_basis(basis, k)?)) };
    let (a, b, c, d, bc) = (get(SubspaceKind::A)?, get(SubspaceKind::B)?, get(SubspaceKind::C)?, get(SubspaceKind::D)?, get(SubspaceKind::BC)?);
    let (sym, invariant_leakage) = if block.meta.order == MomentOrder::CayleyKernel {
        let sym = get(SubspaceKind::Sym)?;
        let ad = get(SubspaceKind::AD)?;
        let leak = ad.leakage.max(bc.leakage).max(sym.leakage);
        (Some(sym), leak)
    } else {
        (None, a.leakage.max(b.leakage).max(c.leakage).max(d.leakage))
    };
    if invariant_leakage > STRUCT_TOL {
        return Err(Error::Internal(format!("cross-subspace leakage {invariant_leakage:.3e} exceeds {STRUCT_TOL:e}")));
    }
    Ok(SplitBlocks { a, b, c, d, bc, sym, invariant_leakage })
}

/// Spectrum summary of a symmetric block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    /// Eigenvalues in descending order (possibly only the leading ones).
    pub eigenvalues: Vec<f64>,
    /// Second eigenvalue, when the block has at least two states.
    pub lambda2: Option<f64>,
    /// `1 − λ₂`.
    pub gap: Option<f64>,
    /// Number of eigenvalues above `1 − UNIT_TOL` (within the computed head).
    pub unit_multiplicity: usize,
}

impl SpectralData {
    fn from_eigenvalues(ev: Vec<f64>) -> Self {
        let lambda2 = ev.get(1).copied();
        let unit_multiplicity = ev.iter().filter(|&&x| x > 1.0 - UNIT_TOL).count();
        SpectralData { gap: lambda2.map(|l| 1.0 - l), lambda2, eigenvalues: ev, unit_multiplicity }
    }
}

fn require_symmetric(m: &SparseMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("spectral data needs a square matrix".into()));
    }
    let asym = m.asymmetry();
    if asym > STRUCT_TOL {
        return Err(Error::InvalidArgument(format!(
            "matrix is not symmetric (asymmetry {asym:.3e}); symmetrize reversible chains by their stationary distribution first"
        )));
    }
    Ok(())
}

/// Full spectrum of a symmetric block (dense solve).
pub fn spectral_data(m: &SparseMatrix) -> Result<SpectralData> {
    require_symmetric(m)?;
    Ok(SpectralData::from_eigenvalues(linalg::sym_eigenvalues(&m.to_dense())?))
}

/// The `k` leading eigenvalues of a symmetric block (Lanczos for large blocks).
pub fn spectral_head(m: &SparseMatrix, k: usize) -> Result<SpectralData> {
    require_symmetric(m)?;
    Ok(SpectralData::from_eigenvalues(linalg::top_eigenvalues(m, k)?))
}

/// Bound on `λ₂` of mixed-sector (Type 1/2) blocks: `1 − Δ_G / (8|T|)`,
/// where `Δ_G` is the Cayley-graph gap. For the named families this is
/// `1 − (1 − cos(π/n))/(4(n−1))` (chain), `1 − 1/(8(n−1))` (star) and
/// `1 − 1/(4(n−1))` (complete).
pub fn type12_bound(gen: &GeneratingSet) -> Result<f64> {
    let n = gen.n as f64;
    Ok(match gen.kind {
        GraphKind::Chain => 1.0 - (1.0 - (std::f64::consts::PI / n).cos()) / (4.0 * (n - 1.0)),
        GraphKind::Star => 1.0 - 1.0 / (8.0 * (n - 1.0)),
        GraphKind::Complete => 1.0 - 1.0 / (4.0 * (n - 1.0)),
        GraphKind::Custom => 1.0 - cayley::standard_rep_gap(gen)? / (8.0 * gen.len() as f64),
    })
}

/// Result of a Type-1/2 check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type12Report {
    pub block_type: BlockType,
    pub sectors: Vec<usize>,
    pub dim: usize,
    pub lambda2: f64,
    pub bound: f64,
    pub unit_multiplicity: usize,
    /// Leading eigenvalues, descending.
    pub eigen_head: Vec<f64>,
    pub pass: bool,
}

/// Assembles the `T₂` block of type `block_type` on `(λ, μ)` and checks its
/// second eigenvalue against [`type12_bound`] at `slack`.
pub fn type12_gap_check(model: &Model, block_type: BlockType, lambda: usize, mu: usize, slack: f64) -> Result<Type12Report> {
    if block_type == BlockType::Type3 {
        return Err(Error::InvalidArgument("type12_gap_check takes Type1 or Type2".into()));
    }
    let basis = filtered_basis(model, block_type, lambda, Some(mu))?;
    let block = assemble_block(model, &swap_moment_terms(MomentOrder::K2), &basis)?;
    let head = spectral_head(&block.matrix, 2)?;
    let lambda2 = head.lambda2.unwrap_or(f64::NEG_INFINITY);
    let bound = type12_bound(&model.gen_set)?;
    Ok(Type12Report {
        block_type,
        sectors: vec![lambda, mu],
        dim: basis.len(),
        lambda2,
        bound,
        unit_multiplicity: head.unit_multiplicity,
        eigen_head: head.eigenvalues,
        pass: lambda2 <= bound + slack,
    })
}

/// `max |(M₂^τ)² − T₂^τ|` on a filtered basis for generator `tau_idx`.
pub fn m2_square_check(model: &Model, basis: &FilteredBasis, tau_idx: usize) -> Result<f64> {
    let m = assemble_tau_block(model, &swap_moment_terms(MomentOrder::K2Modified), basis, tau_idx)?;
    let t = assemble_tau_block(model, &swap_moment_terms(MomentOrder::K2), basis, tau_idx)?;
    Ok(m.matrix.mul(&m.matrix).max_abs_diff(&t.matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u1(n: usize) -> Model {
        Model::with_graph(Symmetry::U1, n, GraphKind::Chain).unwrap()
    }

    #[test]
    fn term_sets_are_unital() {
        for o in [MomentOrder::K1, MomentOrder::K2, MomentOrder::K2Modified, MomentOrder::CayleyKernel] {
            assert_eq!(swap_moment_terms(o).value_at_identity(), Rational64::from_integer(1));
        }
        assert_eq!(swap_moment_terms(MomentOrder::K2).terms.len(), 8);
        assert_eq!(vanishing_terms().value_at_identity(), Rational64::from_integer(0));
    }

    #[test]
    fn filtered_basis_counts() {
        let m = u1(4);
        assert_eq!(filtered_basis(&m, BlockType::Type3, 2, None).unwrap().len(), 2 * 36 - 6);
        assert_eq!(filtered_basis(&m, BlockType::Type3, 0, None).unwrap().len(), 1);
        assert_eq!(filtered_basis(&m, BlockType::Type1, 1, Some(2)).unwrap().len(), 24);
        assert!(filtered_basis(&m, BlockType::Type1, 1, Some(1)).is_err());
        assert!(filtered_basis(&m, BlockType::Type3, 1, Some(2)).is_err());
    }

    #[test]
    fn subspace_dimensions() {
        let m = u1(4);
        let b = filtered_basis(&m, BlockType::Type3, 1, None).unwrap();
        let dims: Vec<usize> = [SubspaceKind::A, SubspaceKind::B, SubspaceKind::C, SubspaceKind::D, SubspaceKind::Sym]
            .iter()
            .map(|&k| subspace_basis(&b, k).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![10, 6, 6, 6, 10]);
    }

    #[test]
    fn polarized_sector_block_is_one() {
        let m = u1(3);
        let b = filtered_basis(&m, BlockType::Type3, 0, None).unwrap();
        let blk = assemble_block(&m, &swap_moment_terms(MomentOrder::K2), &b).unwrap();
        assert_eq!(blk.matrix.to_dense()[(0, 0)], 1.0);
    }

    #[test]
    fn identity_block_spectrum() {
        let s = spectral_data(&SparseMatrix::identity(3)).unwrap();
        assert_eq!(s.unit_multiplicity, 3);
        assert_eq!(s.gap, Some(0.0));
    }
}
