//! Congruence lattices and subdirect irreducibility.
//!
//! A congruence of a unary algebra is a partition of the carrier such that
//! every operation maps each block into a single block. The lattice is found
//! by enumerating all partitions (Bell-number growth, hence the carrier
//! cap) and keeping the compatible ones.

use crate::algebra::UnaryAlgebra;
use crate::error::{Error, Result};
use crate::partition::{for_each_partition, Partition};
use crate::Limits;

/// A partition of the carrier compatible with every basic operation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence(Partition);

impl Congruence {
    /// Validates compatibility and wraps the partition.
    pub fn new(algebra: &UnaryAlgebra, partition: Partition) -> Result<Self> {
        if partition.size() != algebra.carrier_size() {
            return Err(Error::InvalidPartition(format!(
                "partition of {} elements on a carrier of {}",
                partition.size(),
                algebra.carrier_size()
            )));
        }
        if !is_compatible(algebra, &partition) {
            return Err(Error::InvalidPartition(
                "partition is not compatible with the operations".into(),
            ));
        }
        Ok(Congruence(partition))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.0.blocks()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_one_block()
    }
}

/// True when every operation maps each block of `partition` into one block.
pub fn is_compatible(algebra: &UnaryAlgebra, partition: &Partition) -> bool {
    for op in algebra.ops() {
        let mut image_class = vec![usize::MAX; partition.num_classes()];
        for x in 0..algebra.carrier_size() {
            let class = partition.class_of(x);
            let target = partition.class_of(op.apply(x));
            if image_class[class] == usize::MAX {
                image_class[class] = target;
            } else if image_class[class] != target {
                return false;
            }
        }
    }
    true
}

impl UnaryAlgebra {
    /// All congruences, in restricted-growth enumeration order (the full
    /// relation first, the identity last).
    ///
    /// The carrier is capped by [`Limits::max_congruence_carrier`]; the
    /// enumeration visits every partition of the carrier.
    pub fn congruence_lattice(&self, limits: &Limits) -> Result<Vec<Congruence>> {
        let n = self.carrier_size();
        if n > limits.max_congruence_carrier {
            return Err(Error::Capacity {
                what: "congruence lattice carrier",
                requested: n as u128,
                limit: limits.max_congruence_carrier as u128,
            });
        }
        let mut lattice = Vec::new();
        for_each_partition(n, |partition| {
            if is_compatible(self, partition) {
                lattice.push(Congruence(partition.clone()));
            }
        });
        Ok(lattice)
    }

    /// True when the non-identity congruences have a unique minimal element;
    /// equivalently, when their meet is itself non-identity.
    ///
    /// One-element algebras return `false` by convention (their lattice has
    /// a single element, so there is no monolith).
    pub fn is_subdirectly_irreducible(&self, limits: &Limits) -> Result<bool> {
        let n = self.carrier_size();
        if n == 1 {
            return Ok(false);
        }
        let lattice = self.congruence_lattice(limits)?;
        let mut meet: Option<Partition> = None;
        for congruence in &lattice {
            if congruence.is_identity() {
                continue;
            }
            meet = Some(match meet {
                None => congruence.partition().clone(),
                Some(acc) => acc.meet(congruence.partition()),
            });
        }
        // With n >= 2 the full relation is always a non-identity congruence.
        let meet = meet.expect("a non-trivial carrier has the full congruence");
        Ok(!meet.is_identity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize, ops: &[(&str, &[usize])]) -> UnaryAlgebra {
        UnaryAlgebra::new(
            None::<&str>,
            n,
            ops.iter()
                .map(|(name, table)| (name.to_string(), table.to_vec()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn chain_lattice_is_exactly_three_congruences() {
        // Oracle: check each of the five partitions of a 3-set by hand.
        // {{0,1,2}} ok; {{0,1},{2}} ok since f{0,1}={0}, f{2}={1};
        // {{0,2},{1}} fails: f{0,2}={0,1} straddles; {{1,2},{0}} fails the
        // same way; singletons ok.
        let a = alg(3, &[("f", &[0, 0, 1])]);
        let lattice = a.congruence_lattice(&Limits::default()).unwrap();
        let blocks: Vec<Vec<Vec<usize>>> = lattice.iter().map(Congruence::blocks).collect();
        assert_eq!(
            blocks,
            vec![
                vec![vec![0, 1, 2]],
                vec![vec![0, 1], vec![2]],
                vec![vec![0], vec![1], vec![2]],
            ]
        );
    }

    #[test]
    fn lattice_always_contains_identity_and_full() {
        for a in [
            alg(2, &[("s", &[1, 0])]),
            alg(4, &[("f", &[1, 2, 3, 0]), ("g", &[0, 0, 0, 0])]),
            alg(1, &[]),
        ] {
            let lattice = a.congruence_lattice(&Limits::default()).unwrap();
            assert!(lattice.iter().any(Congruence::is_identity));
            assert!(lattice.iter().any(Congruence::is_full));
        }
    }

    #[test]
    fn empty_signature_admits_every_partition() {
        let lattice = alg(4, &[]).congruence_lattice(&Limits::default()).unwrap();
        assert_eq!(lattice.len(), 15); // Bell(4)
    }

    #[test]
    fn lattice_is_closed_under_meet() {
        let a = alg(4, &[("f", &[1, 0, 3, 2])]);
        let lattice = a.congruence_lattice(&Limits::default()).unwrap();
        for x in &lattice {
            for y in &lattice {
                let meet = x.partition().meet(y.partition());
                assert!(lattice.iter().any(|c| c.partition() == &meet));
            }
        }
    }

    #[test]
    fn carrier_cap_is_enforced() {
        let tables: Vec<usize> = vec![0; 10];
        let a = alg(10, &[("z", &tables)]);
        assert!(matches!(
            a.congruence_lattice(&Limits::default()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn chain_is_subdirectly_irreducible() {
        let a = alg(3, &[("f", &[0, 0, 1])]);
        assert!(a.is_subdirectly_irreducible(&Limits::default()).unwrap());
    }

    #[test]
    fn two_element_bare_set_is_si_but_larger_ones_are_not() {
        assert!(alg(2, &[])
            .is_subdirectly_irreducible(&Limits::default())
            .unwrap());
        assert!(!alg(3, &[])
            .is_subdirectly_irreducible(&Limits::default())
            .unwrap());
        assert!(!alg(4, &[])
            .is_subdirectly_irreducible(&Limits::default())
            .unwrap());
    }

    #[test]
    fn one_element_algebra_is_not_si_by_convention() {
        assert!(!alg(1, &[("f", &[0])])
            .is_subdirectly_irreducible(&Limits::default())
            .unwrap());
    }

    /// Brute-force oracle: the set of non-identity congruences has a unique
    /// minimal element under refinement.
    fn unique_minimal_oracle(a: &UnaryAlgebra) -> bool {
        if a.carrier_size() == 1 {
            return false;
        }
        let lattice = a.congruence_lattice(&Limits::default()).unwrap();
        let nontrivial: Vec<&Congruence> =
            lattice.iter().filter(|c| !c.is_identity()).collect();
        let minimal: Vec<&&Congruence> = nontrivial
            .iter()
            .filter(|c| {
                !nontrivial.iter().any(|d| {
                    d.partition() != c.partition() && d.partition().refines(c.partition())
                })
            })
            .collect();
        minimal.len() == 1
    }

    #[test]
    fn si_matches_unique_minimal_oracle_on_small_algebras() {
        let candidates = [
            alg(1, &[]),
            alg(2, &[]),
            alg(3, &[("f", &[0, 0, 1])]),
            alg(3, &[("c", &[1, 2, 0])]),
            alg(4, &[("f", &[0, 0, 2, 2])]),
            alg(4, &[("f", &[1, 0, 3, 2]), ("g", &[2, 3, 0, 1])]),
            alg(4, &[("f", &[0, 0, 0, 1])]),
            alg(3, &[("f", &[0, 0, 1]), ("g", &[1, 1, 2])]),
        ];
        for a in candidates {
            assert_eq!(
                a.is_subdirectly_irreducible(&Limits::default()).unwrap(),
                unique_minimal_oracle(&a),
                "disagreement on {a}"
            );
        }
    }
}
