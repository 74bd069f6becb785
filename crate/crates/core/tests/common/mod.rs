//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use ua_core::powers::Tuple;
use ua_core::UnaryAlgebra;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    assert!(n <= 8, "factorial blow-up guard");
    let mut result = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        result.push(current.clone());
        // Next permutation in place; stop after the last one.
        let Some(pivot) = current.windows(2).rposition(|w| w[0] < w[1]) else {
            return result;
        };
        let successor = current
            .iter()
            .rposition(|&v| v > current[pivot])
            .expect("a successor exists right of the pivot");
        current.swap(pivot, successor);
        current[pivot + 1..].reverse();
    }
}

/// Exhaustive isomorphism oracle: tries every carrier bijection.
pub fn brute_force_isomorphism(
    left: &UnaryAlgebra,
    right: &UnaryAlgebra,
) -> Option<Vec<usize>> {
    if left.carrier_size() != right.carrier_size() {
        return None;
    }
    if left.sorted_op_names() != right.sorted_op_names() {
        return None;
    }
    let n = left.carrier_size();
    'next: for phi in permutations(n) {
        for name in left.sorted_op_names() {
            let f = left.op(name).expect("name from this algebra");
            let g = right.op(name).expect("checked equal name sets");
            for x in 0..n {
                if g.apply(phi[x]) != phi[f.apply(x)] {
                    continue 'next;
                }
            }
        }
        return Some(phi);
    }
    None
}

/// A random algebra with carrier size in `1..=max_carrier` and up to
/// `max_ops` operations named `f0`, `f1`, ...
pub fn random_algebra(rng: &mut StdRng, max_carrier: usize, max_ops: usize) -> UnaryAlgebra {
    let n = rng.gen_range(1..=max_carrier);
    let op_count = rng.gen_range(0..=max_ops);
    let ops: Vec<(String, Vec<usize>)> = (0..op_count)
        .map(|index| {
            let table: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            (format!("f{index}"), table)
        })
        .collect();
    UnaryAlgebra::new(None::<&str>, n, ops).expect("random tables are in range")
}

/// A random tuple over the carrier `0..carrier_size`.
pub fn random_tuple(rng: &mut StdRng, carrier_size: usize, len: usize) -> Tuple {
    Tuple((0..len).map(|_| rng.gen_range(0..carrier_size)).collect())
}

/// A uniformly random permutation of `0..n` (Fisher-Yates).
pub fn random_permutation(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
