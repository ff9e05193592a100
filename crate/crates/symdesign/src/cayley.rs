//! Cayley graphs of `S_n` generated by transpositions: closed-form spectra
//! for the chain, star and complete generating sets, brute-force spectra
//! for tiny `n`, and the standard-representation (swap-graph Laplacian)
//! shortcut for the spectral gap.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Named families of transposition generating sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Nearest neighbours `(i, i+1)`.
    Chain,
    /// `(i, n)` for `i < n`.
    Star,
    /// All pairs `(i, j)`.
    Complete,
    /// Caller-supplied edges.
    Custom,
}

/// A set of transpositions `(i, j)` on sites `1..=n`, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    pub kind: GraphKind,
    pub n: usize,
    pub transpositions: Vec<(usize, usize)>,
}

impl GeneratingSet {
    /// Builds a named family (or a custom set from `edges`) and validates it.
    pub fn new(kind: GraphKind, n: usize, edges: Option<&[(usize, usize)]>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("a generating set needs n >= 2, got {n}")));
        }
        let transpositions: Vec<(usize, usize)> = match kind {
            GraphKind::Chain => (1..n).map(|i| (i, i + 1)).collect(),
            GraphKind::Star => (1..n).map(|i| (i, n)).collect(),
            GraphKind::Complete => (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect(),
            GraphKind::Custom => {
                let e = edges.ok_or_else(|| Error::InvalidArgument("custom generating set needs edges".into()))?;
                let mut t = Vec::new();
                for &(a, b) in e {
                    if a == 0 || b == 0 || a > n || b > n || a == b {
                        return Err(Error::InvalidArgument(format!("({a},{b}) is not a transposition of 1..={n}")));
                    }
                    let p = (a.min(b), a.max(b));
                    if !t.contains(&p) {
                        t.push(p);
                    }
                }
                t
            }
        };
        let g = GeneratingSet { kind, n, transpositions };
        g.validate()?;
        Ok(g)
    }

    pub fn chain(n: usize) -> Result<Self> {
        Self::new(GraphKind::Chain, n, None)
    }

    pub fn star(n: usize) -> Result<Self> {
        Self::new(GraphKind::Star, n, None)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(GraphKind::Complete, n, None)
    }

    pub fn custom(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(GraphKind::Custom, n, Some(edges))
    }

    /// Number of transpositions `|T|`.
    pub fn len(&self) -> usize {
        self.transpositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transpositions.is_empty()
    }

    /// Connected components of the swap graph on `[n]` (union–find).
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.transpositions {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (1..=self.n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Errors unless the transpositions generate `S_n` (connected swap graph).
    pub fn validate(&self) -> Result<()> {
        let c = self.components();
        if c != 1 {
            return Err(Error::NotGenerating { n: self.n, components: c });
        }
        Ok(())
    }

    /// True when every transposition is nearest-neighbour `(i, i+1)`.
    pub fn is_adjacent_only(&self) -> bool {
        self.transpositions.iter().all(|&(a, b)| b == a + 1)
    }

    /// Short identifier such as `chain:5`.
    pub fn id(&self) -> String {
        let k = match self.kind {
            GraphKind::Chain => "chain",
            GraphKind::Star => "star",
            GraphKind::Complete => "complete",
            GraphKind::Custom => "custom",
        };
        format!("{k}:{}", self.n)
    }
}

/// Top of the adjacency spectrum of a Cayley graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CayleyGap {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
}

/// Closed-form `(λ₁, λ₂, Δ)` of the adjacency matrix for the named families.
pub fn closed_form_gap(kind: GraphKind, n: usize) -> Result<CayleyGap> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("closed forms need n >= 2, got {n}")));
    }
    let nf = n as f64;
    let (l1, l2) = match kind {
        GraphKind::Chain => (nf - 1.0, nf - 3.0 + 2.0 * (std::f64::consts::PI / nf).cos()),
        GraphKind::Star => (nf - 1.0, nf - 2.0),
        GraphKind::Complete => (nf * (nf - 1.0) / 2.0, (nf - 1.0) * (nf - 2.0) / 2.0 - 1.0),
        GraphKind::Custom => return Err(Error::Unsupported("no closed form for custom generating sets".into())),
    };
    Ok(CayleyGap { lambda1: l1, lambda2: l2, gap: l1 - l2 })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, n, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out
}

/// Full adjacency spectrum (descending) of the Cayley graph, built as the
/// sum of right-regular representation matrices `σ ↦ σ τ`. `n <= 6`.
pub fn bruteforce_spectrum(gen: &GeneratingSet) -> Result<Vec<f64>> {
    let n = gen.n;
    if n > 6 {
        return Err(Error::Budget { what: "brute-force Cayley graph".into(), needed: n, limit: 6 });
    }
    let perms = permutations(n);
    let index: std::collections::HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut a = DMatrix::zeros(perms.len(), perms.len());
    for (i, p) in perms.iter().enumerate() {
        for &(x, y) in &gen.transpositions {
            // (σ τ)(k) = σ(τ(k)): swap one-line positions x, y.
            let mut q = p.clone();
            q.swap(x - 1, y - 1);
            a[(index[&q], i)] += 1.0;
        }
    }
    linalg::sym_eigenvalues(&a)
}

/// Laplacian `L = D - A` of the swap graph on `[n]`.
pub fn swap_graph_laplacian(gen: &GeneratingSet) -> DMatrix<f64> {
    let n = gen.n;
    let mut l = DMatrix::zeros(n, n);
    for &(a, b) in &gen.transpositions {
        let (a, b) = (a - 1, b - 1);
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
    }
    l
}

/// Spectral gap of the Cayley graph via the second-smallest eigenvalue of the
/// swap-graph Laplacian (the gap is attained in the standard representation).
pub fn standard_rep_gap(gen: &GeneratingSet) -> Result<f64> {
    gen.validate()?;
    let ev = linalg::sym_eigenvalues(&swap_graph_laplacian(gen))?;
    // Descending order: the smallest is 0, the gap is the next one up.
    Ok(ev[ev.len() - 2])
}

/// `λ₂(A_G)/|T|` for any generating set, using the standard-representation gap.
pub fn normalized_lambda2(gen: &GeneratingSet) -> Result<f64> {
    let t = gen.len() as f64;
    Ok((t - standard_rep_gap(gen)?) / t)
}

/// The bound `½(1 + λ₂(A_G)/|T|)` on the second eigenvalue of the averaged
/// two-sided swap kernel `(1/|T|) Σ_τ ½(τIτI + IτIτ)`.
pub fn cayley_kernel_bound(gen: &GeneratingSet) -> Result<f64> {
    Ok(0.5 * (1.0 + normalized_lambda2(gen)?))
}
