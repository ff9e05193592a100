//! Symmetry sectors of the n-qudit Hilbert space.
//!
//! * `U(1)` (qubits): charge sectors of fixed Hamming weight `r`, dimension
//!   `C(n, r)`, basis = bitstrings of weight `r` in lexicographic order.
//! * `SU(d)`: Schur–Weyl blocks labelled by partitions of `n` with at most
//!   `d` rows; the `S_n` irrep `S^λ` in its Young basis, with multiplicity
//!   `dim W_λ` from the hook-content formula.
//!
//! Bitstring convention: qubit position `i` (1-based, left to right) is bit
//! `n - i` of the stored integer, so numeric order equals lexicographic
//! order of the strings.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snrep::{self, Partition, SparseColumn, YoungBasis};

/// Which conservation law the circuit respects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// Qubits with conserved total `Z` (Hamming weight).
    U1,
    /// Qudits of local dimension `d` with global `SU(d)` symmetry.
    SUd { d: usize },
}

impl Symmetry {
    /// Local dimension of one site.
    pub fn local_dim(&self) -> usize {
        match self {
            Symmetry::U1 => 2,
            Symmetry::SUd { d } => *d,
        }
    }
}

/// Sector label: a Hamming weight or a Young diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SectorLabel {
    Weight(usize),
    Shape(Partition),
}

impl std::fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectorLabel::Weight(r) => write!(f, "r={r}"),
            SectorLabel::Shape(p) => write!(f, "{p}"),
        }
    }
}

/// Ordered basis of a sector.
#[derive(Clone, Debug)]
pub enum SectorBasis {
    /// Computational basis states of fixed weight, ascending.
    Bitstrings(Vec<u64>),
    /// Young basis of `S^λ` in canonical tableau order.
    Young(YoungBasis),
}

/// One symmetry sector.
#[derive(Clone, Debug)]
pub struct SectorDescriptor {
    pub symmetry: Symmetry,
    pub n: usize,
    pub label: SectorLabel,
    pub dim: usize,
    pub multiplicity: u64,
    pub basis: SectorBasis,
}

impl SectorDescriptor {
    /// JSON summary `{symmetry, label, dim, mult}`.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "symmetry": match self.symmetry { Symmetry::U1 => "u1".to_string(), Symmetry::SUd { d } => format!("su{d}") },
            "label": self.label,
            "dim": self.dim,
            "mult": self.multiplicity,
        })
    }

    /// Bitstrings of a `U(1)` sector.
    pub fn bitstrings(&self) -> Option<&[u64]> {
        match &self.basis {
            SectorBasis::Bitstrings(b) => Some(b),
            SectorBasis::Young(_) => None,
        }
    }

    /// Young basis of an `SU(d)` sector.
    pub fn young(&self) -> Option<&YoungBasis> {
        match &self.basis {
            SectorBasis::Young(y) => Some(y),
            SectorBasis::Bitstrings(_) => None,
        }
    }
}

/// Binomial coefficient as `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Value (`0` or `1`) of qubit `i` (1-based) in bitstring `x` of length `n`.
pub fn bit(x: u64, n: usize, i: usize) -> u64 {
    (x >> (n - i)) & 1
}

/// The `n + 1` charge sectors of `n` qubits, `r = 0..=n`.
pub fn u1_sectors(n: usize) -> Result<Vec<SectorDescriptor>> {
    if n == 0 || n > 62 {
        return Err(Error::InvalidArgument(format!("u1_sectors needs 1 <= n <= 62, got {n}")));
    }
    let mut by_weight: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    if n > 24 {
        return Err(Error::Budget { what: "bitstring enumeration".into(), needed: n, limit: 24 });
    }
    for x in 0..(1u64 << n) {
        by_weight[x.count_ones() as usize].push(x);
    }
    Ok(by_weight
        .into_iter()
        .enumerate()
        .map(|(r, bits)| SectorDescriptor {
            symmetry: Symmetry::U1,
            n,
            label: SectorLabel::Weight(r),
            dim: bits.len(),
            multiplicity: 1,
            basis: SectorBasis::Bitstrings(bits),
        })
        .collect())
}

/// `dim W_λ` for `SU(d)`: `Π_boxes (d + col - row) / hook`.
pub fn schur_weyl_multiplicity(lambda: &Partition, d: usize) -> u64 {
    let mut num = Rational64::from_integer(1);
    for (r, c) in lambda.boxes() {
        num *= Rational64::new(d as i64 + c as i64 - r as i64, lambda.hook(r, c) as i64);
    }
    debug_assert!(num.is_integer());
    num.to_integer().max(0) as u64
}

/// Schur–Weyl sectors of `n` qudits of dimension `d`: one per partition of
/// `n` with at most `d` rows. Completeness `Σ dim·mult = dⁿ` is verified.
pub fn schur_weyl_sectors(n: usize, d: usize) -> Result<Vec<SectorDescriptor>> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidArgument(format!("schur_weyl_sectors needs n >= 1, d >= 2 (got n={n}, d={d})")));
    }
    let sectors: Vec<SectorDescriptor> = snrep::enumerate_partitions(n, Some(d))
        .into_iter()
        .map(|lambda| {
            let basis = YoungBasis::new(&lambda);
            SectorDescriptor {
                symmetry: Symmetry::SUd { d },
                n,
                dim: basis.dim(),
                multiplicity: schur_weyl_multiplicity(&lambda, d),
                label: SectorLabel::Shape(lambda),
                basis: SectorBasis::Young(basis),
            }
        })
        .collect();
    let total: u128 = sectors.iter().map(|s| s.dim as u128 * s.multiplicity as u128).sum();
    if total != (d as u128).pow(n as u32) {
        return Err(Error::Internal(format!("Schur–Weyl completeness failed: {total} != {d}^{n}")));
    }
    Ok(sectors)
}

/// Sectors for either symmetry.
pub fn sectors(symmetry: Symmetry, n: usize) -> Result<Vec<SectorDescriptor>> {
    match symmetry {
        Symmetry::U1 => u1_sectors(n),
        Symmetry::SUd { d } => schur_weyl_sectors(n, d),
    }
}

/// Phase constants of a `U(1)` sector: `C_0 = 1`,
/// `C_1 = Tr(Σ_i Z_i)/(n·dim)`, `C_2 = 2/(n(n-1)) Σ_{i<j} Tr(Z_i Z_j)/dim`,
/// with `Z|0⟩ = |0⟩`. Evaluated exactly by summing over the sector basis.
pub fn u1_phase_constant(n: usize, j: usize, sector: &SectorDescriptor) -> Result<Rational64> {
    let bits = sector
        .bitstrings()
        .ok_or_else(|| Error::Mismatch("phase constants are defined for U(1) sectors".into()))?;
    if sector.n != n {
        return Err(Error::Mismatch(format!("sector has n={}, requested n={n}", sector.n)));
    }
    let dim = bits.len() as i64;
    let z = |x: u64, i: usize| 1 - 2 * bit(x, n, i) as i64;
    match j {
        0 => Ok(Rational64::from_integer(1)),
        1 => {
            let s: i64 = bits.iter().map(|&x| (1..=n).map(|i| z(x, i)).sum::<i64>()).sum();
            Ok(Rational64::new(s, n as i64 * dim))
        }
        2 => {
            if n < 2 {
                return Ok(Rational64::from_integer(1));
            }
            let s: i64 = bits
                .iter()
                .map(|&x| {
                    let mut acc = 0;
                    for a in 1..=n {
                        for b in a + 1..=n {
                            acc += z(x, a) * z(x, b);
                        }
                    }
                    acc
                })
                .sum();
            Ok(Rational64::new(2 * s, n as i64 * (n as i64 - 1) * dim))
        }
        _ => Err(Error::Unsupported(format!("phase constant C_{j}: only j <= 2 is supported"))),
    }
}

/// Irreps `{(n-s, s) : s = 0..=r}` in the permutation module of the two-row
/// label `(n-r, r)`; `r > n/2` is reflected to `n - r`.
pub fn permutation_module_irreps(n: usize, r: usize) -> Result<Vec<Partition>> {
    if r > n {
        return Err(Error::InvalidArgument(format!("weight {r} exceeds n={n}")));
    }
    let r = r.min(n - r);
    (0..=r).map(|s| Partition::two_row(n, s)).collect()
}

/// The matrix of a transposition on one sector, stored by columns.
#[derive(Clone, Debug)]
pub struct SwapAction {
    pub tau: (usize, usize),
    pub dim: usize,
    columns: Vec<SparseColumn>,
}

impl SwapAction {
    /// Nonzero entries of column `j`.
    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Entrywise (Hadamard) square, as a dense matrix.
    pub fn hadamard_square(&self) -> DMatrix<f64> {
        self.to_dense().map(|x| x * x)
    }
}

/// The action of the transposition `tau = (i, j)` (1-based sites) on a
/// sector: a permutation of bitstrings for `U(1)`, Young's orthogonal form
/// (or a product of adjacent factors for non-adjacent `tau`) for `SU(d)`.
pub fn swap_action(sector: &SectorDescriptor, tau: (usize, usize)) -> Result<SwapAction> {
    let n = sector.n;
    let (i, j) = (tau.0.min(tau.1), tau.0.max(tau.1));
    if i == 0 || j > n || i == j {
        return Err(Error::InvalidArgument(format!("({},{}) is not a transposition of sites 1..={n}", tau.0, tau.1)));
    }
    let columns = match &sector.basis {
        SectorBasis::Bitstrings(bits) => {
            let index: HashMap<u64, usize> = bits.iter().enumerate().map(|(k, &x)| (x, k)).collect();
            bits.iter()
                .map(|&x| {
                    let (bi, bj) = (bit(x, n, i), bit(x, n, j));
                    let y = if bi == bj { x } else { x ^ (1 << (n - i)) ^ (1 << (n - j)) };
                    vec![(index[&y], 1.0)]
                })
                .collect()
        }
        SectorBasis::Young(yb) => {
            if j == i + 1 {
                yb.adjacent_swap_columns(i)?
            } else {
                let m = snrep::permutation_matrix(yb.shape(), &snrep::transposition_one_line(n, i, j)?)?;
                (0..m.ncols())
                    .map(|c| (0..m.nrows()).filter(|&r| m[(r, c)].abs() > 1e-15).map(|r| (r, m[(r, c)])).collect())
                    .collect()
            }
        }
    };
    Ok(SwapAction { tau: (i, j), dim: sector.dim, columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u1_dimensions() {
        let dims: Vec<usize> = u1_sectors(4).unwrap().iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![1, 4, 6, 4, 1]);
        assert_eq!(u1_sectors(1).unwrap().iter().map(|s| s.dim).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(u1_sectors(8).unwrap()[4].dim, 70);
    }

    #[test]
    fn schur_weyl_small_cases() {
        let s = schur_weyl_sectors(2, 2).unwrap();
        assert_eq!(s.iter().map(|x| (x.dim, x.multiplicity)).collect::<Vec<_>>(), vec![(1, 3), (1, 1)]);
        let s = schur_weyl_sectors(3, 2).unwrap();
        assert_eq!(s.iter().map(|x| (x.dim, x.multiplicity)).collect::<Vec<_>>(), vec![(1, 4), (2, 2)]);
        let s = schur_weyl_sectors(1, 5).unwrap();
        assert_eq!(s.iter().map(|x| (x.dim, x.multiplicity)).collect::<Vec<_>>(), vec![(1, 5)]);
    }

    #[test]
    fn phase_constant_examples() {
        let secs = u1_sectors(4).unwrap();
        assert_eq!(u1_phase_constant(4, 1, &secs[1]).unwrap(), Rational64::new(1, 2));
        assert_eq!(u1_phase_constant(4, 2, &secs[0]).unwrap(), Rational64::from_integer(1));
        assert_eq!(u1_phase_constant(4, 0, &secs[3]).unwrap(), Rational64::from_integer(1));
        assert!(u1_phase_constant(4, 3, &secs[1]).is_err());
    }

    #[test]
    fn permutation_module_examples() {
        let two_two = permutation_module_irreps(4, 2).unwrap();
        assert_eq!(two_two.len(), 3);
        let dims: u64 = two_two.iter().map(snrep::irrep_dimension).sum();
        assert_eq!(dims, 6);
        assert_eq!(permutation_module_irreps(5, 0).unwrap().len(), 1);
        assert_eq!(permutation_module_irreps(4, 3).unwrap().len(), 2);
    }

    #[test]
    fn swap_action_examples() {
        let secs = u1_sectors(2).unwrap();
        let s = swap_action(&secs[1], (1, 2)).unwrap().to_dense();
        assert_eq!(s, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let su = schur_weyl_sectors(3, 2).unwrap();
        let m = swap_action(&su[1], (2, 3)).unwrap().to_dense();
        assert!((m[(0, 0)].abs() - 0.5).abs() < 1e-12 && (m[(0, 0)] + m[(1, 1)]).abs() < 1e-12);
        assert!(swap_action(&su[1], (0, 1)).is_err());
        // A swap of two equal bits fixes the state.
        let secs = u1_sectors(3).unwrap();
        let a = swap_action(&secs[3], (1, 3)).unwrap();
        assert_eq!(a.column(0), &[(0, 1.0)]);
    }
}
