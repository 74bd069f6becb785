//! Worked examples around the three-element chain algebra.
//!
//! The chain (carrier `{0, 1, 2}`, single operation `f` with `f(2) = 1`
//! and `f(1) = f(0) = 0`) is the smallest algebra of uncountable type, and
//! several of its powers can be analyzed in closed form. This module
//! collects those computations:
//!
//! * [`tuple_cycle_length`]: in a power of an algebra whose operations are
//!   bijections, a tuple returns to itself after the least common multiple
//!   of its entries' cycle lengths;
//! * [`transposition_distance`]: the minimal number of value swaps turning
//!   one tuple into another, defined exactly when the two tuples have the
//!   same format;
//! * [`boolean_power`] and [`boolean_power_profile`]: the subpower carved
//!   out of a direct power by a field of sets, and the predecessor
//!   statistics that distinguish chain powers over different fields.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::UnaryAlgebra;
use crate::error::{Error, Result};
use crate::powers::{Subpower, Tuple};
use crate::Limits;

/// The three-element chain: one operation `f` sliding `2 -> 1 -> 0 -> 0`.
pub fn chain_algebra() -> UnaryAlgebra {
    UnaryAlgebra::new(Some("chain"), 3, vec![("f".into(), vec![0, 0, 1])])
        .expect("the chain is a valid algebra")
}

/// Least common multiple of the given cycle lengths: the number of steps
/// after which a tuple with these entrywise cycle lengths first repeats.
///
/// Errors on an empty list, a zero length, or an lcm beyond `u64`.
pub fn tuple_cycle_length(cycle_lengths: &[u64]) -> Result<u64> {
    if cycle_lengths.is_empty() {
        return Err(Error::EmptyInput);
    }
    if cycle_lengths.contains(&0) {
        return Err(Error::InvalidTuple("cycle lengths must be positive".into()));
    }
    let mut acc: u128 = 1;
    for &length in cycle_lengths {
        acc = acc.lcm(&u128::from(length));
        if acc > u128::from(u64::MAX) {
            return Err(Error::Capacity {
                what: "cycle length lcm",
                requested: acc,
                limit: u128::from(u64::MAX),
            });
        }
    }
    Ok(acc as u64)
}

/// Fewest transpositions of carrier values (swapping two values everywhere
/// they occur) that turn `from` into `to`, with both tuples over the
/// carrier `{0, .., carrier_size-1}`.
///
/// Returns `Ok(None)` when `to` is unreachable, which happens exactly when
/// the two formats differ: value swaps are bijections on values, so they
/// preserve the format, and conversely transpositions generate every
/// permutation of the carrier.
pub fn transposition_distance(
    carrier_size: usize,
    from: &Tuple,
    to: &Tuple,
) -> Result<Option<usize>> {
    if from.len() != to.len() {
        return Err(Error::LengthMismatch {
            left: from.len(),
            right: to.len(),
        });
    }
    if carrier_size == 0 {
        return Err(Error::InvalidTuple("the carrier must be non-empty".into()));
    }
    for tuple in [from, to] {
        if let Some(&entry) = tuple.entries().iter().find(|&&e| e >= carrier_size) {
            return Err(Error::InvalidTuple(format!(
                "entry {entry} is outside the carrier of size {carrier_size}"
            )));
        }
    }
    if from.format() != to.format() {
        return Ok(None);
    }
    if from == to {
        return Ok(Some(0));
    }

    let mut distance: HashMap<Vec<usize>, usize> = HashMap::new();
    distance.insert(from.entries().to_vec(), 0);
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    queue.push_back(from.entries().to_vec());
    while let Some(current) = queue.pop_front() {
        let steps = distance[&current];
        for a in 0..carrier_size {
            for b in (a + 1)..carrier_size {
                let next: Vec<usize> = current
                    .iter()
                    .map(|&e| {
                        if e == a {
                            b
                        } else if e == b {
                            a
                        } else {
                            e
                        }
                    })
                    .collect();
                if next == *to.entries() {
                    return Ok(Some(steps + 1));
                }
                if !distance.contains_key(&next) {
                    distance.insert(next.clone(), steps + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    // The format check above already decided reachability; the search can
    // only get here if that reasoning were wrong.
    unreachable!("equal formats guarantee reachability by transpositions")
}

/// A field of sets over the ground set `{0, .., ground_size-1}`: a family
/// of subsets containing the empty set and the ground set and closed under
/// complement and union (hence intersection). Subsets are bitmasks with
/// bit `i` standing for element `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldOfSets {
    ground_size: usize,
    members: BTreeSet<u64>,
}

impl FieldOfSets {
    /// Validates closure. The ground set may have at most 63 elements so
    /// that every subset fits a `u64` mask.
    pub fn new(ground_size: usize, members: BTreeSet<u64>) -> Result<Self> {
        if ground_size == 0 || ground_size > 63 {
            return Err(Error::InvalidFieldOfSets(format!(
                "ground size {ground_size} is outside 1..=63"
            )));
        }
        let full: u64 = (1 << ground_size) - 1;
        if let Some(&stray) = members.iter().find(|&&s| s & !full != 0) {
            return Err(Error::InvalidFieldOfSets(format!(
                "member {stray:#b} uses elements outside the ground set"
            )));
        }
        if !members.contains(&0) {
            return Err(Error::InvalidFieldOfSets("the empty set is missing".into()));
        }
        if !members.contains(&full) {
            return Err(Error::InvalidFieldOfSets("the ground set is missing".into()));
        }
        for &s in &members {
            if !members.contains(&(full & !s)) {
                return Err(Error::InvalidFieldOfSets(format!(
                    "complement of {s:#b} is missing"
                )));
            }
            for &t in &members {
                if !members.contains(&(s | t)) {
                    return Err(Error::InvalidFieldOfSets(format!(
                        "union of {s:#b} and {t:#b} is missing"
                    )));
                }
            }
        }
        Ok(FieldOfSets {
            ground_size,
            members,
        })
    }

    /// The full powerset of `{0, .., ground_size-1}`.
    pub fn powerset(ground_size: usize) -> Result<Self> {
        if ground_size == 0 || ground_size > 20 {
            return Err(Error::InvalidFieldOfSets(format!(
                "powerset ground size {ground_size} is outside 1..=20"
            )));
        }
        let members: BTreeSet<u64> = (0..(1u64 << ground_size)).collect();
        FieldOfSets::new(ground_size, members)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn block_masks(tuple: &Tuple, carrier_size: usize) -> Vec<u64> {
    let mut masks = vec![0u64; carrier_size];
    for (position, &value) in tuple.entries().iter().enumerate() {
        masks[value] |= 1 << position;
    }
    masks
}

/// The Boolean power of `algebra` by `field`: all tuples over the ground
/// set whose level sets all belong to the field. It is a subuniverse of
/// the direct power because operations only merge level sets, and unions
/// of members are members.
pub fn boolean_power(
    algebra: &UnaryAlgebra,
    field: &FieldOfSets,
    limits: &Limits,
) -> Result<Subpower> {
    let n = algebra.carrier_size();
    let positions = field.ground_size();
    let total = (n as u128)
        .checked_pow(positions as u32)
        .ok_or(Error::Capacity {
            what: "boolean power candidates",
            requested: u128::MAX,
            limit: limits.max_elements as u128,
        })?;
    limits.check_elements("boolean power candidates", total)?;

    let mut elements: Vec<Tuple> = Vec::new();
    let mut current = vec![0usize; positions];
    loop {
        let tuple = Tuple(current.clone());
        if block_masks(&tuple, n)
            .iter()
            .all(|&mask| mask == 0 || field.contains(mask))
        {
            elements.push(tuple);
        }
        // Advance the odometer, most significant position first, so the
        // elements come out in lexicographic order.
        let mut index = positions;
        loop {
            if index == 0 {
                let generators = elements.clone();
                return Ok(Subpower::from_sorted_parts(
                    algebra.clone(),
                    positions,
                    elements,
                    generators,
                ));
            }
            index -= 1;
            current[index] += 1;
            if current[index] < n {
                break;
            }
            current[index] = 0;
        }
    }
}

/// Predecessor statistics of a Boolean power of the chain.
///
/// The power's digraph is a tree of depth two hanging from one fixed
/// point, so the record below pins it up to isomorphism: the sink, how
/// many tuples map onto it, and how many predecessors each of those
/// tuples has in turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BooleanPowerProfile {
    /// Number of tuples in the power.
    pub size: usize,
    /// The unique fixed point (the all-zero tuple).
    pub sink: Tuple,
    /// Tuples other than the sink itself that map onto the sink.
    pub sink_predecessors: usize,
    /// Strict predecessor counts over the sink's predecessors: how many
    /// of them have each count.
    pub predecessor_counts: BTreeMap<usize, usize>,
}

/// Profiles a Boolean power of the chain (any algebra with carrier 3 and
/// the single table `[0, 0, 1]` qualifies, whatever its names).
pub fn boolean_power_profile(
    algebra: &UnaryAlgebra,
    field: &FieldOfSets,
    limits: &Limits,
) -> Result<BooleanPowerProfile> {
    let is_chain = algebra.carrier_size() == 3
        && algebra.ops().len() == 1
        && algebra.ops()[0].table() == [0, 0, 1];
    if !is_chain {
        return Err(Error::NotChainAlgebra);
    }
    let power = boolean_power(algebra, field, limits)?;
    let op_name = algebra.ops()[0].name().to_string();

    let images: Vec<Tuple> = power
        .elements()
        .iter()
        .map(|tuple| crate::powers::apply_pointwise(algebra, &op_name, tuple))
        .collect::<Result<_>>()?;
    let mut strict_preds = vec![0usize; power.len()];
    for (index, image) in images.iter().enumerate() {
        if *image != power.elements()[index] {
            let target = power.position(image).expect("boolean powers are closed");
            strict_preds[target] += 1;
        }
    }

    let sink = Tuple::constant(field.ground_size(), 0);
    let sink_position = power.position(&sink).expect("the zero diagonal is a member");
    let mut predecessor_counts = BTreeMap::new();
    let mut sink_predecessors = 0;
    for (index, image) in images.iter().enumerate() {
        if index != sink_position && *image == sink {
            sink_predecessors += 1;
            *predecessor_counts.entry(strict_preds[index]).or_insert(0) += 1;
        }
    }
    Ok(BooleanPowerProfile {
        size: power.len(),
        sink,
        sink_predecessors,
        predecessor_counts,
    })
}
