//! Structural properties of the assembled moment blocks.

use proptest::prelude::*;

use symdesign::cayley::{GeneratingSet, GraphKind};
use symdesign::hilbert::Symmetry;
use symdesign::linalg;
use symdesign::moment::{self, BlockType, FilteredBasis, Model, MomentOrder};

fn all_bases(m: &Model) -> Vec<FilteredBasis> {
    let ns = m.sectors.len();
    let mut out = Vec::new();
    for l in 0..ns {
        out.push(moment::filtered_basis(m, BlockType::Type3, l, None).unwrap());
        for mu in (0..ns).filter(|&mu| mu != l) {
            out.push(moment::filtered_basis(m, BlockType::Type1, l, Some(mu)).unwrap());
            out.push(moment::filtered_basis(m, BlockType::Type2, l, Some(mu)).unwrap());
        }
    }
    out
}

fn small_models() -> Vec<Model> {
    vec![
        Model::with_graph(Symmetry::U1, 4, GraphKind::Chain).unwrap(),
        Model::with_graph(Symmetry::U1, 4, GraphKind::Complete).unwrap(),
        Model::with_graph(Symmetry::SUd { d: 2 }, 4, GraphKind::Chain).unwrap(),
        Model::with_graph(Symmetry::SUd { d: 3 }, 3, GraphKind::Chain).unwrap(),
    ]
}

#[test]
fn commutant_vectors_are_fixed_by_every_moment_operator() {
    for m in small_models() {
        // The Cayley kernel conjugates a single tensor copy, so it is not
        // unital on the swap; only the genuine moment operators are.
        for order in [MomentOrder::K2, MomentOrder::K2Modified] {
            let terms = moment::swap_moment_terms(order);
            for b in all_bases(&m) {
                let block = moment::assemble_block(&m, &terms, &b).unwrap();
                assert!(moment::unitality_residue(&block, &b) < 1e-12, "{order:?} {:?} {:?}", b.block_type, b.sectors);
            }
        }
    }
}

#[test]
fn moment_blocks_are_symmetric_contractions() {
    for m in small_models() {
        let terms = moment::swap_moment_terms(MomentOrder::K2);
        for b in all_bases(&m) {
            let block = moment::assemble_block(&m, &terms, &b).unwrap();
            assert!(block.matrix.asymmetry() < 1e-12);
            let ev = linalg::sym_eigenvalues(&block.matrix.to_dense()).unwrap();
            assert!(ev.iter().all(|&x| (-1.0 - 1e-12..=1.0 + 1e-12).contains(&x)), "{:?}", ev);
        }
    }
}

#[test]
fn difference_of_modified_and_cayley_operators_is_the_vanishing_combination() {
    let k2m = moment::swap_moment_terms(MomentOrder::K2Modified);
    let cay = moment::swap_moment_terms(MomentOrder::CayleyKernel);
    let van = moment::vanishing_terms();
    for m in small_models() {
        for b in all_bases(&m) {
            for t in 0..m.num_taus() {
                let a = moment::assemble_tau_block(&m, &k2m, &b, t).unwrap().matrix;
                let c = moment::assemble_tau_block(&m, &cay, &b, t).unwrap().matrix;
                let v = moment::assemble_tau_block(&m, &van, &b, t).unwrap().matrix;
                assert!(a.lincomb(1.0, &c, -1.0).max_abs_diff(&v) < 1e-12);
                if b.block_type == BlockType::Type1 {
                    // Identity-type mixed blocks see no difference at all.
                    assert!(v.max_abs_diff(&linalg::SparseMatrix::from_triplets(v.nrows(), v.ncols(), vec![])) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn type3_blocks_split_without_leakage() {
    for m in small_models() {
        for order in [MomentOrder::K2, MomentOrder::K2Modified, MomentOrder::CayleyKernel] {
            let terms = moment::swap_moment_terms(order);
            for s in 0..m.sectors.len() {
                let b = moment::filtered_basis(&m, BlockType::Type3, s, None).unwrap();
                let block = moment::assemble_block(&m, &terms, &b).unwrap();
                let split = moment::subspace_split(&block, &b).unwrap();
                assert!(split.invariant_leakage < 1e-10);
                let dims = split.a.matrix.nrows() + split.b.matrix.nrows() + split.c.matrix.nrows() + split.d.matrix.nrows();
                assert_eq!(dims, b.len());
            }
        }
    }
}

#[test]
fn second_moment_terms_are_normalized_at_the_identity() {
    use num_rational::Rational64;
    for order in [MomentOrder::K2, MomentOrder::K2Modified, MomentOrder::CayleyKernel] {
        assert_eq!(moment::swap_moment_terms(order).value_at_identity(), Rational64::from_integer(1), "{order:?}");
    }
}

/// A random connected set of transpositions on `n` sites.
fn connected_edges(n: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    proptest::sample::subsequence(all.clone(), n - 1..=all.len())
        .prop_filter("connected", move |e| GeneratingSet::custom(n, e).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mixed_blocks_respect_the_generic_bound(edges in connected_edges(4)) {
        let g = GeneratingSet::custom(4, &edges).unwrap();
        let m = Model::new(Symmetry::U1, 4, g).unwrap();
        let ns = m.sectors.len();
        for l in 0..ns {
            for mu in (0..ns).filter(|&mu| mu != l) {
                for bt in [BlockType::Type1, BlockType::Type2] {
                    let r = moment::type12_gap_check(&m, bt, l, mu, 1e-8).unwrap();
                    prop_assert!(r.pass, "{:?} {} {} lambda2 {:?} bound {}", bt, l, mu, r.lambda2, r.bound);
                }
            }
        }
    }

    #[test]
    fn unit_eigenvalues_match_the_commutant_for_random_generators(edges in connected_edges(4)) {
        let g = GeneratingSet::custom(4, &edges).unwrap();
        let m = Model::new(Symmetry::U1, 4, g).unwrap();
        let terms = moment::swap_moment_terms(MomentOrder::K2);
        for b in all_bases(&m) {
            let block = moment::assemble_block(&m, &terms, &b).unwrap();
            let u = symdesign::oracle::unit_eigenspace_match(&block, &b).unwrap();
            prop_assert!(u.matches(1e-8), "{:?} {:?} {:?}", b.block_type, b.sectors, u);
        }
    }
}
