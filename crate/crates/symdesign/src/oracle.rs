//! Ground-truth constructions for small sectors: dense four-fold tensor
//! operators built by Kronecker products, the projector onto the commutant
//! (the Haar moment operator of the symmetric unitary group), a sampler for
//! the circuit ensemble itself, and a Monte Carlo estimator of its moment
//! blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{self, SectorBasis};
use crate::linalg;
use crate::moment::{self, FilteredBasis, MomentBlock, MomentOrder, MomentTermSet, Model, UNIT_TOL};

/// Largest product dimension `d₁d₂d₃d₄` a dense operator may have.
pub const DENSE_PRODUCT_LIMIT: usize = 4096;

/// An operator on the full product space of a block's four factors.
#[derive(Clone, Debug)]
pub struct DenseBlockOperator {
    /// Dimension of each tensor factor.
    pub dims: [usize; 4],
    /// Matrix on the product basis, row-major index
    /// `((i₁ d₂ + i₂) d₃ + i₃) d₄ + i₄`.
    pub matrix: DMatrix<f64>,
}

impl DenseBlockOperator {
    /// Product-basis index of a pattern.
    pub fn product_index(&self, p: [u32; 4]) -> usize {
        let d = self.dims;
        ((p[0] as usize * d[1] + p[1] as usize) * d[2] + p[2] as usize) * d[3] + p[3] as usize
    }

    /// The rows and columns belonging to the filtered patterns, in basis order.
    pub fn filtered_submatrix(&self, basis: &FilteredBasis) -> DMatrix<f64> {
        let idx: Vec<usize> = basis.elements().iter().map(|&p| self.product_index(p)).collect();
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])])
    }
}

/// The averaged term-weighted four-fold swap action on the full product
/// space of the block's factors, followed by the explicit orthogonal
/// projector onto the filtered span: `Π (1/|T|) Σ_τ Σ c·A₁⊗A₂⊗A₃⊗A₄ Π`.
pub fn dense_operator(model: &Model, basis: &FilteredBasis, terms: &MomentTermSet) -> Result<DenseBlockOperator> {
    if terms.arity() != 4 {
        return Err(Error::InvalidArgument("dense operators need 4-factor terms".into()));
    }
    let dims: [usize; 4] = std::array::from_fn(|k| model.sectors[basis.factor_sectors[k]].dim);
    let total: usize = dims.iter().product();
    if total > DENSE_PRODUCT_LIMIT {
        return Err(Error::Budget { what: "dense four-fold operator".into(), needed: total, limit: DENSE_PRODUCT_LIMIT });
    }
    let norm = *terms.normalization.numer() as f64 / *terms.normalization.denom() as f64;
    let mut full = DMatrix::<f64>::zeros(total, total);
    for t in 0..model.num_taus() {
        let swaps: Vec<DMatrix<f64>> = basis.factor_sectors.iter().map(|&s| model.swap(s, t).to_dense()).collect();
        for term in &terms.terms {
            let c = norm * *term.coefficient.numer() as f64 / *term.coefficient.denom() as f64 / model.num_taus() as f64;
            let factor = |k: usize| if term.placement[k] { swaps[k].clone() } else { DMatrix::identity(dims[k], dims[k]) };
            let kron = factor(0).kronecker(&factor(1)).kronecker(&factor(2)).kronecker(&factor(3));
            full.zip_apply(&kron, |a, b| *a += c * b);
        }
    }
    let mut op = DenseBlockOperator { dims, matrix: DMatrix::zeros(0, 0) };
    let mut mask = vec![0.0; total];
    for &p in basis.elements() {
        mask[op.product_index(p)] = 1.0;
    }
    // The projector onto the filtered span is diagonal in the product basis,
    // so `Π A Π` is `A` with the rows and columns outside the span zeroed.
    for j in 0..total {
        for i in 0..total {
            full[(i, j)] *= mask[i] * mask[j];
        }
    }
    op.matrix = full;
    Ok(op)
}

/// Orthogonal projector (in filtered coordinates) onto the span of the
/// block's commutant vectors: rank 1 for Types 1/2, rank 2 for Type 3
/// (rank 1 when the sector is one-dimensional and the two vectors coincide).
pub fn haar_commutant_projector(basis: &FilteredBasis) -> DMatrix<f64> {
    let vecs = moment::commutant_vectors(basis);
    let m = DMatrix::from_fn(basis.len(), vecs.len(), |i, j| vecs[j][i]);
    let q = linalg::orthonormal_basis(&m, 1e-12);
    &q * q.transpose()
}

/// Comparison of a block's unit eigenspace with the commutant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitMatch {
    pub unit_multiplicity: usize,
    pub projector_rank: usize,
    /// Largest principal angle (radians); `π/2` when the ranks differ.
    pub angle: f64,
}

impl UnitMatch {
    pub fn matches(&self, tol: f64) -> bool {
        self.unit_multiplicity == self.projector_rank && self.angle < tol
    }
}

/// Principal angle between the unit eigenspace of an assembled block and the
/// range of [`haar_commutant_projector`].
pub fn unit_eigenspace_match(block: &MomentBlock, basis: &FilteredBasis) -> Result<UnitMatch> {
    let (vals, vecs) = linalg::sym_eigen(&block.matrix.to_dense())?;
    let k = vals.iter().filter(|&&v| v > 1.0 - UNIT_TOL).count();
    let unit = vecs.columns(0, k).into_owned();
    let vecs_c = moment::commutant_vectors(basis);
    let c = DMatrix::from_fn(basis.len(), vecs_c.len(), |i, j| vecs_c[j][i]);
    let q = linalg::orthonormal_basis(&c, 1e-12);
    Ok(UnitMatch { unit_multiplicity: k, projector_rank: q.ncols(), angle: linalg::max_principal_angle(&unit, &q) })
}

/// Number of unit eigenvalues of the unprojected pairwise operator
/// `(1/|T|) Σ_τ τ ⊗ τ` on one sector.
pub fn pairwise_swap_unit_multiplicity(model: &Model, sector: usize) -> Result<usize> {
    let d = model.sectors[sector].dim;
    if d * d > DENSE_PRODUCT_LIMIT {
        return Err(Error::Budget { what: "pairwise swap operator".into(), needed: d * d, limit: DENSE_PRODUCT_LIMIT });
    }
    let mut op = DMatrix::<f64>::zeros(d * d, d * d);
    for t in 0..model.num_taus() {
        let s = model.swap(sector, t).to_dense();
        op += s.kronecker(&s) / model.num_taus() as f64;
    }
    Ok(linalg::sym_eigenvalues(&op)?.iter().filter(|&&v| v > 1.0 - UNIT_TOL).count())
}

/// One draw from the circuit ensemble, stored per sector.
#[derive(Clone, Debug)]
pub struct SampledUnitary {
    /// Unitary block of each sector.
    pub blocks: Vec<DMatrix<Complex64>>,
    /// The generator used (1-based sites).
    pub tau: (usize, usize),
    pub theta: f64,
    pub seed: u64,
}

/// Explicit parameters of one draw.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleParams {
    pub tau_idx: usize,
    pub theta: f64,
    /// `β_kl` for `k < l`, row-major over pairs.
    pub beta: Vec<f64>,
    pub beta_prime: Vec<f64>,
}

impl SampleParams {
    /// Draws the generator uniformly from the model's generating set and all
    /// angles uniformly from `[0, 2π)`.
    pub fn draw<R: Rng>(model: &Model, rng: &mut R) -> Self {
        let pairs = model.n * (model.n - 1) / 2;
        let two_pi = std::f64::consts::TAU;
        let tau_idx = rng.random_range(0..model.num_taus());
        let theta = rng.random::<f64>() * two_pi;
        let beta = (0..pairs).map(|_| rng.random::<f64>() * two_pi).collect();
        let beta_prime = (0..pairs).map(|_| rng.random::<f64>() * two_pi).collect();
        SampleParams { tau_idx, theta, beta, beta_prime }
    }
}

/// Diagonal phase generator `Σ_{k<l} β_kl D_k D_l` per basis state, where
/// `D_k` is `Z_k` (`Z|0⟩ = +|0⟩`) for `U(1)` and the Jucys–Murphy element
/// `X_k` (acting as the content of `k`) for `SU(d)`.
fn phase_exponents(model: &Model, sector: usize, beta: &[f64]) -> Vec<f64> {
    let n = model.n;
    let diag: Vec<Vec<f64>> = match &model.sectors[sector].basis {
        SectorBasis::Bitstrings(bits) => {
            bits.iter().map(|&x| (1..=n).map(|i| 1.0 - 2.0 * hilbert::bit(x, n, i) as f64).collect()).collect()
        }
        SectorBasis::Young(yb) => (0..yb.dim()).map(|t| yb.content(t).iter().map(|&c| c as f64).collect()).collect(),
    };
    diag.iter()
        .map(|v| {
            let mut acc = 0.0;
            let mut p = 0;
            for k in 0..n {
                for l in k + 1..n {
                    acc += beta[p] * v[k] * v[l];
                    p += 1;
                }
            }
            acc
        })
        .collect()
}

/// Builds the sampled unitary `W(β) · (cos θ I − i sin θ τ) · W(β')` per
/// sector, with `W(β) = exp(−i Σ β_kl D_k D_l)` diagonal.
pub fn unitary_from_params(model: &Model, params: &SampleParams, seed: u64) -> SampledUnitary {
    let blocks = (0..model.sectors.len())
        .map(|s| {
            let d = model.sectors[s].dim;
            let left = phase_exponents(model, s, &params.beta);
            let right = phase_exponents(model, s, &params.beta_prime);
            let swap = model.swap(s, params.tau_idx).to_dense();
            let (c, sn) = (params.theta.cos(), params.theta.sin());
            DMatrix::from_fn(d, d, |i, j| {
                let mid = Complex64::new(if i == j { c } else { 0.0 }, -sn * swap[(i, j)]);
                Complex64::from_polar(1.0, -left[i]) * mid * Complex64::from_polar(1.0, -right[j])
            })
        })
        .collect();
    SampledUnitary { blocks, tau: model.gen_set.transpositions[params.tau_idx], theta: params.theta, seed }
}

/// One seeded draw from the ensemble.
pub fn sample_cqa_unitary(model: &Model, seed: u64) -> SampledUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = SampleParams::draw(model, &mut rng);
    unitary_from_params(model, &params, seed)
}

/// `max ‖U†U − I‖_max` over the blocks of a sample.
pub fn unitarity_residue(u: &SampledUnitary) -> f64 {
    u.blocks
        .iter()
        .map(|b| {
            let g = b.adjoint() * b;
            let d = g.nrows();
            (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| (g[(i, j)] - if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Matrix elements `⟨e_i, (U ⊗ U ⊗ Ū ⊗ Ū) e_j⟩` of one sample on a filtered
/// basis (real part; the imaginary part vanishes in expectation).
pub fn sample_block(u: &SampledUnitary, basis: &FilteredBasis) -> DMatrix<f64> {
    let f = basis.factor_sectors;
    let el = basis.elements();
    DMatrix::from_fn(el.len(), el.len(), |i, j| {
        let (p, q) = (el[i], el[j]);
        let v = u.blocks[f[0]][(p[0] as usize, q[0] as usize)]
            * u.blocks[f[1]][(p[1] as usize, q[1] as usize)]
            * u.blocks[f[2]][(p[2] as usize, q[2] as usize)].conj()
            * u.blocks[f[3]][(p[3] as usize, q[3] as usize)].conj();
        v.re
    })
}

/// Monte Carlo estimate of a moment block.
#[derive(Clone, Debug)]
pub struct MonteCarloReport {
    pub samples: usize,
    pub seed: u64,
    pub estimate: DMatrix<f64>,
    /// `max |estimate − exact|` over entries.
    pub max_dev: f64,
    /// `max |estimate − exact| / (σ/√N)` over entries with `σ > 0`.
    pub max_z: f64,
}

const MC_CHUNK: usize = 1024;

/// Averages [`sample_block`] over `samples` draws. Draws are generated in
/// fixed chunks, each from its own ChaCha stream, so the result does not
/// depend on the number of worker threads.
pub fn monte_carlo_moment(model: &Model, basis: &FilteredBasis, samples: usize, seed: u64) -> Result<MonteCarloReport> {
    let mut r = monte_carlo_moments(model, std::slice::from_ref(basis), samples, seed)?;
    Ok(r.remove(0))
}

/// [`monte_carlo_moment`] for several blocks at once, all estimated from the
/// same draws.
pub fn monte_carlo_moments(model: &Model, bases: &[FilteredBasis], samples: usize, seed: u64) -> Result<Vec<MonteCarloReport>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least one sample".into()));
    }
    let terms = moment::swap_moment_terms(MomentOrder::K2);
    let exact = bases
        .iter()
        .map(|b| Ok(moment::assemble_block(model, &terms, b)?.matrix.to_dense()))
        .collect::<Result<Vec<_>>>()?;
    let zeros = || bases.iter().map(|b| (DMatrix::<f64>::zeros(b.len(), b.len()), DMatrix::<f64>::zeros(b.len(), b.len()))).collect::<Vec<_>>();
    let chunks = samples.div_ceil(MC_CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut acc = zeros();
            for _ in 0..count {
                let params = SampleParams::draw(model, &mut rng);
                let u = unitary_from_params(model, &params, seed);
                for (basis, (s, s2)) in bases.iter().zip(acc.iter_mut()) {
                    let b = sample_block(&u, basis);
                    *s2 += b.component_mul(&b);
                    *s += b;
                }
            }
            acc
        })
        .reduce(zeros, |mut a, b| {
            for ((s, s2), (t, t2)) in a.iter_mut().zip(b) {
                *s += t;
                *s2 += t2;
            }
            a
        });
    let nf = samples as f64;
    Ok(sums
        .into_iter()
        .zip(exact)
        .map(|((sum, sumsq), exact)| {
            let estimate = sum / nf;
            let mut max_dev = 0.0f64;
            let mut max_z = 0.0f64;
            for i in 0..estimate.nrows() {
                for j in 0..estimate.ncols() {
                    let dev = (estimate[(i, j)] - exact[(i, j)]).abs();
                    max_dev = max_dev.max(dev);
                    let var = (sumsq[(i, j)] / nf - estimate[(i, j)].powi(2)).max(0.0);
                    let se = (var / nf).sqrt();
                    if se > 1e-14 {
                        max_z = max_z.max(dev / se);
                    }
                }
            }
            MonteCarloReport { samples, seed, estimate, max_dev, max_z }
        })
        .collect())
}
