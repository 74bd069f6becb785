//! Partitions of an index set `{0, .., size-1}`.
//!
//! One partition type serves three roles in the crate: congruence blocks on a
//! carrier, tuple formats (kernels) on coordinate positions, and vertex
//! groupings (connected components, strong components) in digraphs.
//!
//! The representation is normalised: class ids are assigned in order of first
//! occurrence, so equal partitions compare equal structurally and block lists
//! always come out ordered by least member.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Partition {
    /// Builds a partition from an arbitrary class assignment; ids are
    /// renumbered by first occurrence.
    pub fn from_class_assignment(assignment: &[usize]) -> Self {
        let mut remap: Vec<Option<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(assignment.len());
        let mut next = 0;
        for &raw in assignment {
            if raw >= remap.len() {
                remap.resize(raw + 1, None);
            }
            let id = *remap[raw].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            class_of.push(id);
        }
        Partition {
            class_of,
            num_classes: next,
        }
    }

    /// Builds a partition from explicit blocks, which must cover
    /// `{0, .., size-1}` exactly once.
    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut class_of = vec![usize::MAX; size];
        for (id, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {id} is empty")));
            }
            for &x in block {
                if x >= size {
                    return Err(Error::InvalidPartition(format!(
                        "member {x} is out of range 0..{size}"
                    )));
                }
                if class_of[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "member {x} appears in more than one block"
                    )));
                }
                class_of[x] = id;
            }
        }
        if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "member {x} is not covered by any block"
            )));
        }
        Ok(Partition::from_class_assignment(&class_of))
    }

    /// The finest partition: every element alone.
    pub fn singletons(size: usize) -> Self {
        Partition {
            class_of: (0..size).collect(),
            num_classes: size,
        }
    }

    /// The coarsest partition: one block (no block at all when `size == 0`).
    pub fn one_block(size: usize) -> Self {
        Partition {
            class_of: vec![0; size],
            num_classes: if size == 0 { 0 } else { 1 },
        }
    }

    pub fn size(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// The normalised class assignment, one id per element.
    pub fn assignment(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Blocks ordered by least member, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            blocks[c].push(x);
        }
        blocks
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        assert_eq!(self.size(), coarser.size(), "partition sizes differ");
        let mut image = vec![usize::MAX; self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            let target = coarser.class_of[x];
            if image[c] == usize::MAX {
                image[c] = target;
            } else if image[c] != target {
                return false;
            }
        }
        true
    }

    /// The coarsest partition refining both (blockwise intersection).
    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.size(), other.size(), "partition sizes differ");
        // Pair ids are bounded by num_classes^2; map them densely.
        let width = other.num_classes.max(1);
        let raw: Vec<usize> = self
            .class_of
            .iter()
            .zip(&other.class_of)
            .map(|(&a, &b)| a * width + b)
            .collect();
        Partition::from_class_assignment(&raw)
    }

    /// True for the all-singletons partition.
    pub fn is_identity(&self) -> bool {
        self.num_classes == self.size()
    }

    /// True for the one-block partition (vacuously true when empty).
    pub fn is_one_block(&self) -> bool {
        self.num_classes <= 1
    }
}

/// Enumerates every partition of `{0, .., size-1}` in restricted-growth
/// order, calling `visit` on each.
///
/// Restricted growth: element 0 gets class 0, and each later element gets a
/// class id at most one larger than the maximum used so far. Enumeration
/// order is lexicographic on the assignment vector, so the one-block
/// partition comes first and the all-singletons partition last.
pub fn for_each_partition<F: FnMut(&Partition)>(size: usize, mut visit: F) {
    if size == 0 {
        visit(&Partition::from_class_assignment(&[]));
        return;
    }
    let mut assignment = vec![0usize; size];
    loop {
        visit(&Partition::from_class_assignment(&assignment));
        // Advance to the next restricted-growth string.
        let mut i = size;
        loop {
            if i == 1 {
                return;
            }
            i -= 1;
            let max_prefix = assignment[..i].iter().copied().max().unwrap();
            if assignment[i] <= max_prefix {
                assignment[i] += 1;
                for slot in assignment.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}
