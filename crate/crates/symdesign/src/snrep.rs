//! Exact representation theory of the symmetric group `S_n`: partitions,
//! standard Young tableaux, content vectors, Young's orthogonal form,
//! Young–Jucys–Murphy (YJM) operators and transposition characters.
//!
//! Combinatorial data (partitions, hooks, contents, characters) is exact
//! integer/rational arithmetic; representation matrices are `f64` because
//! Young's orthogonal form involves square roots.
//!
//! Basis order: the standard tableaux of a shape are sorted by
//! lexicographically *decreasing* content vector. For `λ = (5,1)` this lists
//! the tableau with `6` in the second row first and the one with `2` in the
//! second row last.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition / Young diagram: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Validates and wraps a list of parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Malformed(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Malformed(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Two-row partition `(n - r, r)` (a single row when `r = 0`).
    pub fn two_row(n: usize, r: usize) -> Result<Self> {
        if 2 * r > n {
            return Err(Error::InvalidArgument(format!("({}, {r}) is not a partition", n as i64 - r as i64)));
        }
        let mut parts = vec![n - r];
        if r > 0 {
            parts.push(r);
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.0.len()
    }

    /// Length of column `c` (0-based).
    pub fn column_len(&self, c: usize) -> usize {
        self.0.iter().take_while(|&&p| p > c).count()
    }

    /// The conjugate (transposed) diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.0.first().copied().unwrap_or(0);
        Partition((0..cols).map(|c| self.column_len(c)).collect())
    }

    /// Boxes `(row, col)` in row-major order, 0-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// Hook length of box `(row, col)`.
    pub fn hook(&self, row: usize, col: usize) -> usize {
        (self.0[row] - col - 1) + (self.column_len(col) - row - 1) + 1
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Number of partitions of `n` with at most `max_rows` parts (`None` = unbounded).
pub fn partition_count(n: usize, max_rows: Option<usize>) -> u64 {
    let k = max_rows.unwrap_or(n).min(n.max(1));
    // p(m, j): partitions of m into at most j parts = partitions into parts <= j.
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for part in 1..=k {
        for m in part..=n {
            table[m] += table[m - part];
        }
    }
    table[n]
}

/// All partitions of `n` with at most `max_rows` parts, in reverse
/// lexicographic order (a linear extension of the dominance order, so a
/// partition never precedes one it is dominated by). `n = 0` yields the
/// empty partition.
pub fn enumerate_partitions(n: usize, max_rows: Option<usize>) -> Vec<Partition> {
    fn rec(rem: usize, max_part: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_rows.unwrap_or(n.max(1)), &mut Vec::new(), &mut out);
    out
}

/// Prime-exponent bookkeeping so that `n! / Π hooks` is evaluated without
/// intermediate overflow.
fn add_factors(mut x: usize, sign: i64, exps: &mut HashMap<usize, i64>) {
    let mut p = 2;
    while p * p <= x {
        while x % p == 0 {
            *exps.entry(p).or_insert(0) += sign;
            x /= p;
        }
        p += 1;
    }
    if x > 1 {
        *exps.entry(x).or_insert(0) += sign;
    }
}

/// Dimension of the irrep `S^λ` by the hook-length formula `n!/Π hooks`.
pub fn irrep_dimension(lambda: &Partition) -> u64 {
    let mut exps = HashMap::new();
    for k in 2..=lambda.n() {
        add_factors(k, 1, &mut exps);
    }
    for (r, c) in lambda.boxes() {
        add_factors(lambda.hook(r, c), -1, &mut exps);
    }
    exps.into_iter().fold(1u64, |acc, (p, e)| {
        debug_assert!(e >= 0, "hook-length quotient must be an integer");
        acc.checked_mul((p as u64).checked_pow(e as u32).expect("dimension overflow")).expect("dimension overflow")
    })
}

/// Content vector of a standard tableau: entry `i-1` is `col - row` of the
/// box holding `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContentVector(pub Vec<i64>);

/// A standard Young tableau stored as its rows (entries `1..=n`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    /// Validates a filling: each of `1..=n` exactly once, rows and columns
    /// strictly increasing.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())?;
        let n = shape.n();
        let mut seen = vec![false; n + 1];
        for (ri, row) in rows.iter().enumerate() {
            for (ci, &v) in row.iter().enumerate() {
                if v == 0 || v > n || seen[v] {
                    return Err(Error::Malformed(format!("tableau entry {v} repeated or out of range")));
                }
                seen[v] = true;
                if ci > 0 && row[ci - 1] >= v {
                    return Err(Error::Malformed("tableau row not increasing".into()));
                }
                if ri > 0 && rows[ri - 1][ci] >= v {
                    return Err(Error::Malformed("tableau column not increasing".into()));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// See [`content_vector`].
    pub fn content_vector(&self) -> ContentVector {
        content_vector(self)
    }
}

/// All standard tableaux of shape `λ` in canonical order (content vectors
/// lexicographically decreasing).
pub fn enumerate_tableaux(lambda: &Partition) -> Vec<StandardTableau> {
    fn rec(k: usize, n: usize, shape: &[usize], rows: &mut Vec<Vec<usize>>, out: &mut Vec<StandardTableau>) {
        if k > n {
            out.push(StandardTableau { shape: Partition(shape.to_vec()), rows: rows.clone() });
            return;
        }
        for r in 0..shape.len() {
            let len = rows[r].len();
            if len < shape[r] && (r == 0 || rows[r - 1].len() > len) {
                rows[r].push(k);
                rec(k + 1, n, shape, rows, out);
                rows[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut rows = vec![Vec::new(); lambda.num_rows()];
    rec(1, lambda.n(), lambda.parts(), &mut rows, &mut out);
    out.sort_by_cached_key(|t| std::cmp::Reverse(content_vector(t)));
    out
}

/// Content vector `(col(i) - row(i))_{i=1..n}` of a tableau.
pub fn content_vector(t: &StandardTableau) -> ContentVector {
    let n = t.shape.n();
    let mut c = vec![0i64; n];
    for (r, row) in t.rows.iter().enumerate() {
        for (col, &v) in row.iter().enumerate() {
            c[v - 1] = col as i64 - r as i64;
        }
    }
    ContentVector(c)
}

/// `α_λ`: the sum of `col - row` over all boxes of `λ`.
pub fn content_sum(lambda: &Partition) -> i64 {
    lambda.boxes().map(|(r, c)| c as i64 - r as i64).sum()
}

/// A sparse column of a representation matrix: `(row, value)` pairs.
pub type SparseColumn = Vec<(usize, f64)>;

/// The Young (Gelfand–Tsetlin) basis of one irrep, with content-vector lookup.
#[derive(Clone, Debug)]
pub struct YoungBasis {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
    contents: Vec<Vec<i64>>,
    lookup: HashMap<Vec<i64>, usize>,
}

impl YoungBasis {
    pub fn new(shape: &Partition) -> Self {
        let tableaux = enumerate_tableaux(shape);
        let contents: Vec<Vec<i64>> = tableaux.iter().map(|t| content_vector(t).0).collect();
        let lookup = contents.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        YoungBasis { shape: shape.clone(), tableaux, contents, lookup }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    /// Content vector of basis element `k`.
    pub fn content(&self, k: usize) -> &[i64] {
        &self.contents[k]
    }

    /// Index of the tableau with the given content vector, if standard.
    pub fn index_of(&self, content: &[i64]) -> Option<usize> {
        self.lookup.get(content).copied()
    }

    /// Axial distance `r = α_T(j+1) - α_T(j)` of basis element `k` for the
    /// adjacent transposition `(j, j+1)` (1-based `j`).
    pub fn axial_distance(&self, k: usize, j: usize) -> i64 {
        self.contents[k][j] - self.contents[k][j - 1]
    }

    /// Columns of Young's orthogonal form for `(j, j+1)`, `1 <= j < n`:
    /// `(j,j+1)|T⟩ = (1/r)|T⟩ + sqrt(1 - 1/r²)|T'⟩` where `T'` swaps `j`
    /// and `j+1`; when `T'` is not standard `r = ±1` and the column is `±|T⟩`.
    pub fn adjacent_swap_columns(&self, j: usize) -> Result<Vec<SparseColumn>> {
        let n = self.shape.n();
        if j == 0 || j >= n {
            return Err(Error::InvalidArgument(format!("adjacent transposition ({j},{}) out of range for n={n}", j + 1)));
        }
        let mut cols = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let r = self.axial_distance(k, j);
            let mut swapped = self.contents[k].clone();
            swapped.swap(j - 1, j);
            let partner = self.index_of(&swapped);
            let rf = r as f64;
            match (r.abs(), partner) {
                (1, None) => cols.push(vec![(k, 1.0 / rf)]),
                (1, Some(_)) => {
                    return Err(Error::Internal(format!("axial distance ±1 with standard partner at tableau {k}, j={j}")))
                }
                (_, Some(p)) => cols.push(vec![(k, 1.0 / rf), (p, (1.0 - 1.0 / (rf * rf)).sqrt())]),
                (_, None) => return Err(Error::Internal(format!("|r| = {} but swapped tableau not standard", r.abs()))),
            }
        }
        Ok(cols)
    }
}

fn columns_to_dense(dim: usize, cols: &[SparseColumn]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for &(r, v) in col {
            m[(r, c)] += v;
        }
    }
    m
}

/// Matrix of the adjacent transposition `(j, j+1)` on `S^λ` in Young's
/// orthogonal form.
pub fn adjacent_swap_matrix(lambda: &Partition, j: usize) -> Result<DMatrix<f64>> {
    let basis = YoungBasis::new(lambda);
    Ok(columns_to_dense(basis.dim(), &basis.adjacent_swap_columns(j)?))
}

/// The YJM element `X_i = (1,i) + … + (i-1,i)` on `S^λ`: diagonal with the
/// `i`-th content of each tableau. `X_1 = 0`.
pub fn yjm_matrix(lambda: &Partition, i: usize) -> Result<DMatrix<f64>> {
    let n = lambda.n();
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("YJM index {i} out of range 1..={n}")));
    }
    let basis = YoungBasis::new(lambda);
    Ok(DMatrix::from_fn(basis.dim(), basis.dim(), |r, c| if r == c { basis.content(r)[i - 1] as f64 } else { 0.0 }))
}

/// Validates a permutation in one-line notation (`σ(1), …, σ(n)`, values `1..=n`).
pub fn check_one_line(sigma: &[usize]) -> Result<()> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for &v in sigma {
        if v == 0 || v > n || seen[v] {
            return Err(Error::Malformed(format!("{sigma:?} is not a permutation of 1..={n}")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// One-line notation of the transposition `(i, j)` in `S_n`.
pub fn transposition_one_line(n: usize, i: usize, j: usize) -> Result<Vec<usize>> {
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(Error::InvalidArgument(format!("({i},{j}) is not a transposition of S_{n}")));
    }
    let mut s: Vec<usize> = (1..=n).collect();
    s.swap(i - 1, j - 1);
    Ok(s)
}

/// Composition `(σ τ)(x) = σ(τ(x))` in one-line notation.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t - 1]).collect()
}

/// Factor `σ = s_{j_1} s_{j_2} … s_{j_k}` into adjacent transpositions
/// `s_j = (j, j+1)` by bubble sort (`O(n²)`, deterministic).
pub fn adjacent_factorization(sigma: &[usize]) -> Result<Vec<usize>> {
    check_one_line(sigma)?;
    let mut s = sigma.to_vec();
    let mut found = Vec::new();
    loop {
        match (0..s.len().saturating_sub(1)).find(|&i| s[i] > s[i + 1]) {
            Some(i) => {
                // σ ∘ s_{i+1} swaps one-line positions i, i+1 and removes one inversion.
                s.swap(i, i + 1);
                found.push(i + 1);
            }
            None => break,
        }
    }
    // σ s_{f_1} … s_{f_k} = id  ⇒  σ = s_{f_k} … s_{f_1}.
    found.reverse();
    Ok(found)
}

/// Orthogonal matrix of `σ` (one-line notation) on `S^λ`, as the product of
/// Young orthogonal forms of its bubble-sort adjacent factors.
pub fn permutation_matrix(lambda: &Partition, sigma: &[usize]) -> Result<DMatrix<f64>> {
    if sigma.len() != lambda.n() {
        return Err(Error::Mismatch(format!("permutation of {} points for a partition of {}", sigma.len(), lambda.n())));
    }
    let factors = adjacent_factorization(sigma)?;
    permutation_matrix_from_adjacent(lambda, &factors)
}

/// Matrix of the product `s_{j_1} s_{j_2} … s_{j_k}` on `S^λ`.
pub fn permutation_matrix_from_adjacent(lambda: &Partition, factors: &[usize]) -> Result<DMatrix<f64>> {
    let basis = YoungBasis::new(lambda);
    let mut m = DMatrix::identity(basis.dim(), basis.dim());
    for &j in factors {
        let s = columns_to_dense(basis.dim(), &basis.adjacent_swap_columns(j)?);
        m *= s;
    }
    Ok(m)
}

/// The two exact routes to `χ_λ(transposition) / dim S^λ`:
/// `2/(n(n-1)) Σ_i [C(λ_i, 2) - C(λ'_i, 2)]` and `2 α_λ / (n(n-1))`.
pub fn character_ratio_routes(lambda: &Partition) -> (Rational64, Rational64) {
    let n = lambda.n() as i64;
    if n < 2 {
        return (Rational64::from_integer(1), Rational64::from_integer(1));
    }
    let binom2 = |x: usize| (x as i64) * (x as i64 - 1) / 2;
    let rows: i64 = lambda.parts().iter().map(|&p| binom2(p)).sum();
    let cols: i64 = lambda.conjugate().parts().iter().map(|&p| binom2(p)).sum();
    let route_binomial = Rational64::new(2 * (rows - cols), n * (n - 1));
    let route_content = Rational64::new(2 * content_sum(lambda), n * (n - 1));
    (route_binomial, route_content)
}

/// `χ_λ(transposition) / dim S^λ`, exact. Both routes of
/// [`character_ratio_routes`] are evaluated and must agree.
pub fn transposition_character_ratio(lambda: &Partition) -> Result<Rational64> {
    let (a, b) = character_ratio_routes(lambda);
    if a != b {
        return Err(Error::Internal(format!("character routes disagree for {lambda}: {a} vs {b}")));
    }
    Ok(a)
}

/// Outcome of comparing two partitions in the dominance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    /// `λ ⊵ μ` and `λ ≠ μ`.
    Dominates,
    /// `μ ⊵ λ` and `λ ≠ μ`.
    Dominated,
    /// `λ = μ`.
    Equal,
    /// Neither dominates the other.
    Incomparable,
}

/// Dominance comparison of two partitions of the same `n`.
pub fn dominates(lambda: &Partition, mu: &Partition) -> Result<Dominance> {
    if lambda.n() != mu.n() {
        return Err(Error::Mismatch(format!("{lambda} and {mu} partition different integers")));
    }
    if lambda == mu {
        return Ok(Dominance::Equal);
    }
    let len = lambda.num_rows().max(mu.num_rows());
    let (mut sl, mut sm) = (0usize, 0usize);
    let (mut ge, mut le) = (true, true);
    for i in 0..len {
        sl += lambda.parts().get(i).copied().unwrap_or(0);
        sm += mu.parts().get(i).copied().unwrap_or(0);
        ge &= sl >= sm;
        le &= sl <= sm;
    }
    Ok(match (ge, le) {
        (true, _) => Dominance::Dominates,
        (_, true) => Dominance::Dominated,
        _ => Dominance::Incomparable,
    })
}
