//! Property suite: structural invariants checked over randomized and
//! exhaustive inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;

use ua_core::digraph::{gamma, outer_sections, OuterSection};
use ua_core::iso::{are_isomorphic, canonical_form, digraph_canonical_code, is_homomorphic_bijection};
use ua_core::powers::{apply_pointwise, enumerate_monogenic_up_to_iso, generate_subpower, Tuple};
use ua_core::{Limits, UnaryAlgebra};

fn algebra_strategy(max_carrier: usize, max_ops: usize) -> impl Strategy<Value = UnaryAlgebra> {
    (1..=max_carrier).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(0..n, n), 0..=max_ops).prop_map(
            move |tables| {
                let ops = tables
                    .into_iter()
                    .enumerate()
                    .map(|(index, table)| (format!("f{index}"), table))
                    .collect();
                UnaryAlgebra::new(None::<&str>, n, ops).unwrap()
            },
        )
    })
}

fn bijective_algebra_strategy(
    max_carrier: usize,
    max_ops: usize,
) -> impl Strategy<Value = UnaryAlgebra> {
    (1..=max_carrier).prop_flat_map(move |n| {
        proptest::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 1..=max_ops)
            .prop_map(move |perms| {
                let ops = perms
                    .into_iter()
                    .enumerate()
                    .map(|(index, table)| (format!("f{index}"), table))
                    .collect();
                UnaryAlgebra::new(None::<&str>, n, ops).unwrap()
            })
    })
}

fn algebra_and_permutation(
    max_carrier: usize,
    max_ops: usize,
) -> impl Strategy<Value = (UnaryAlgebra, Vec<usize>)> {
    algebra_strategy(max_carrier, max_ops).prop_flat_map(|algebra| {
        let n = algebra.carrier_size();
        (
            Just(algebra),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
    })
}

fn apply_word(algebra: &UnaryAlgebra, word: &[usize], tuple: &Tuple) -> Tuple {
    let names = algebra.sorted_op_names();
    let mut current = tuple.clone();
    if names.is_empty() {
        return current;
    }
    for &letter in word {
        current = apply_pointwise(algebra, names[letter % names.len()], &current).unwrap();
    }
    current
}

proptest! {
    /// A tuple's kernel only coarsens along operation words, and stays put
    /// exactly when the word acts injectively on the tuple's image.
    #[test]
    fn format_coarsens_along_operation_words(
        algebra in algebra_strategy(4, 3),
        positions in 1usize..=5,
        word in proptest::collection::vec(0usize..16, 0..=4),
        seed in any::<u64>(),
    ) {
        let entries: Vec<usize> = (0..positions)
            .map(|i| (seed as usize).wrapping_mul(31).wrapping_add(i * 7919) % algebra.carrier_size())
            .collect();
        let tuple = Tuple(entries);
        let image = apply_word(&algebra, &word, &tuple);
        prop_assert!(tuple.format().refines(&image.format()));

        let mapped: BTreeSet<usize> = tuple
            .content()
            .iter()
            .map(|&x| apply_word(&algebra, &word, &Tuple(vec![x])).entries()[0])
            .collect();
        let injective_on_content = mapped.len() == tuple.content().len();
        prop_assert_eq!(tuple.format() == image.format(), injective_on_content);
    }

    /// Generated subpowers are closed, contain their generators, and list
    /// elements in strictly increasing lexicographic order.
    #[test]
    fn generated_subpowers_are_closed_and_sorted(
        algebra in algebra_strategy(4, 3),
        n_positions in 1usize..=3,
        generator_seeds in proptest::collection::vec(any::<u64>(), 1..=3),
    ) {
        let limits = Limits::default();
        let n = algebra.carrier_size();
        let generators: Vec<Tuple> = generator_seeds
            .iter()
            .map(|&seed| {
                Tuple((0..n_positions).map(|i| (seed as usize >> (4 * i)) % n).collect())
            })
            .collect();
        let subpower = generate_subpower(&algebra, n_positions, &generators, &limits).unwrap();
        prop_assert!(subpower.is_closed());
        for generator in &generators {
            prop_assert!(subpower.contains(generator));
        }
        prop_assert!(subpower.elements().windows(2).all(|w| w[0] < w[1]));
    }

    /// Isomorphism searches return genuine morphisms, and relabelings are
    /// always recognized.
    #[test]
    fn isomorphism_results_are_valid_morphisms(
        (algebra, perm) in algebra_and_permutation(4, 2),
    ) {
        let relabeled = algebra.relabel(&perm).unwrap();
        let phi = are_isomorphic(&algebra, &relabeled).unwrap();
        prop_assert!(phi.is_some());
        prop_assert!(is_homomorphic_bijection(&algebra, &relabeled, &phi.unwrap()));
        prop_assert_eq!(canonical_form(&algebra), canonical_form(&relabeled));
    }

    /// Outer sections are a relabeling invariant: both computations succeed
    /// or fail together, and the section shapes agree as multisets.
    #[test]
    fn outer_sections_are_relabeling_invariant(
        (algebra, perm) in algebra_and_permutation(5, 2),
    ) {
        let relabeled = algebra.relabel(&perm).unwrap();
        let left = outer_sections(&algebra);
        let right = outer_sections(&relabeled);
        prop_assert_eq!(left.is_ok(), right.is_ok());
        if let (Ok(left), Ok(right)) = (left, right) {
            let codes = |sections: Vec<OuterSection>| {
                let mut codes: Vec<_> = sections
                    .iter()
                    .map(|section| digraph_canonical_code(&section.to_digraph()))
                    .collect();
                codes.sort();
                codes
            };
            prop_assert_eq!(codes(left), codes(right));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The monogenic census is stable from exponent `n` onward.
    #[test]
    fn monogenic_census_stabilizes_at_the_carrier_size(
        algebra in algebra_strategy(3, 2),
    ) {
        let limits = Limits::default();
        let n = algebra.carrier_size();
        let at_n = enumerate_monogenic_up_to_iso(&algebra, n, &limits).unwrap();
        let beyond = enumerate_monogenic_up_to_iso(&algebra, n + 1, &limits).unwrap();
        prop_assert_eq!(at_n, beyond);
    }

    /// When every operation is a permutation, mutual reachability and
    /// undirected connectivity coincide.
    #[test]
    fn bijective_algebras_have_sccs_equal_to_components(
        algebra in bijective_algebra_strategy(5, 3),
    ) {
        let analysis = gamma(&algebra).analyze();
        prop_assert_eq!(analysis.sccs(), analysis.connected_components());
    }
}

/// For algebras whose operations are each a permutation or a constant,
/// a nonempty set of pairs is closed under all operations exactly when it
/// is closed under the permutations and contains the diagonal pair of every
/// basic constant. Exhausts every such algebra and subset for carriers 2
/// and 3.
#[test]
fn closure_over_pairs_reduces_to_permutations_plus_forced_diagonals() {
    for n in [2usize, 3] {
        // All self-maps on n elements that are a permutation or constant.
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut indices = vec![0usize; n];
        'outer: loop {
            let table = indices.clone();
            let kind = ua_core::op_kind(&table);
            if matches!(kind, ua_core::OpKind::Bijection | ua_core::OpKind::Constant) {
                maps.push(table);
            }
            for i in (0..n).rev() {
                indices[i] += 1;
                if indices[i] < n {
                    continue 'outer;
                }
                indices[i] = 0;
            }
            break;
        }
        assert_eq!(maps.len(), if n == 2 { 4 } else { 9 });

        // Precompute each map's action on pair indices a*n + b.
        let pair_count = n * n;
        let actions: Vec<Vec<usize>> = maps
            .iter()
            .map(|table| {
                (0..pair_count)
                    .map(|pair| table[pair / n] * n + table[pair % n])
                    .collect()
            })
            .collect();

        for op_mask in 0u32..(1 << maps.len()) {
            let chosen: Vec<usize> = (0..maps.len())
                .filter(|&i| op_mask & (1 << i) != 0)
                .collect();
            let permutation_ops: Vec<usize> = chosen
                .iter()
                .copied()
                .filter(|&i| ua_core::op_kind(&maps[i]) == ua_core::OpKind::Bijection)
                .collect();
            let forced_pairs: Vec<usize> = chosen
                .iter()
                .filter_map(|&i| match ua_core::op_kind(&maps[i]) {
                    ua_core::OpKind::Constant => Some(maps[i][0] * n + maps[i][0]),
                    _ => None,
                })
                .collect();

            for subset in 1u32..(1 << pair_count) {
                let closed_under = |op: usize| {
                    (0..pair_count)
                        .filter(|&pair| subset & (1 << pair) != 0)
                        .all(|pair| subset & (1 << actions[op][pair]) != 0)
                };
                let closed_all = chosen.iter().all(|&op| closed_under(op));
                let closed_reduced = permutation_ops.iter().all(|&op| closed_under(op))
                    && forced_pairs.iter().all(|&pair| subset & (1 << pair) != 0);
                assert_eq!(
                    closed_all, closed_reduced,
                    "n={n} ops={chosen:?} subset={subset:#b}"
                );
            }
        }
    }
}
