//! The transformation monoid generated by the basic operations.
//!
//! Elements are discovered breadth-first over generator words, shortest
//! words first and lexicographically smallest (by operation name) within a
//! length. Each element keeps the word that first produced it, so the
//! ordering, and everything derived from it, is deterministic.

use std::collections::HashSet;

use crate::algebra::UnaryAlgebra;
use crate::error::{Error, Result};
use crate::Limits;

/// One element of the monoid: a self-map of the carrier plus a shortest
/// generator word producing it. Words index into
/// [`TransformationMonoid::generator_names`]; the identity has the empty
/// word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidElement {
    table: Vec<usize>,
    word: Vec<usize>,
}

impl MonoidElement {
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Generator word as indices into the sorted generator-name list.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(x, &v)| x == v)
    }

    /// Number of distinct values the table takes.
    pub fn image_size(&self) -> usize {
        let mut seen = vec![false; self.table.len()];
        let mut count = 0;
        for &v in &self.table {
            if !seen[v] {
                seen[v] = true;
                count += 1;
            }
        }
        count
    }

    pub fn is_constant(&self) -> bool {
        self.image_size() == 1
    }
}

/// The full transformation monoid of an algebra, in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationMonoid {
    generator_names: Vec<String>,
    elements: Vec<MonoidElement>,
}

impl TransformationMonoid {
    /// Generator names sorted lexicographically; word indices refer here.
    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// Elements in discovery order: by word length, then lexicographically
    /// by word. The identity comes first.
    pub fn elements(&self) -> &[MonoidElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the identity is always present
    }

    pub fn contains_table(&self, table: &[usize]) -> bool {
        self.elements.iter().any(|e| e.table == table)
    }

    /// Renders an element's word as operation names; the identity shows as
    /// `id`.
    pub fn word_names(&self, element: &MonoidElement) -> String {
        if element.word.is_empty() {
            return "id".to_string();
        }
        element
            .word
            .iter()
            .map(|&i| self.generator_names[i].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Values of the constant maps in the monoid, ascending.
    pub fn constant_images(&self) -> Vec<usize> {
        let mut values: Vec<usize> = self
            .elements
            .iter()
            .filter(|e| e.is_constant())
            .map(|e| e.table[0])
            .collect();
        values.sort_unstable();
        values.dedup();
        values
    }
}

impl UnaryAlgebra {
    /// Generates the transformation monoid: the closure of the identity and
    /// the basic operations under composition.
    ///
    /// The carrier is capped by [`Limits::max_monoid_carrier`] because the
    /// monoid can reach `n^n` elements.
    pub fn generate_monoid(&self, limits: &Limits) -> Result<TransformationMonoid> {
        let n = self.carrier_size();
        if n > limits.max_monoid_carrier {
            return Err(Error::Capacity {
                what: "monoid generation carrier",
                requested: n as u128,
                limit: limits.max_monoid_carrier as u128,
            });
        }

        // Generators sorted by name so that word indices compare like names.
        let mut generators: Vec<(&str, &[usize])> = self
            .ops()
            .iter()
            .map(|op| (op.name(), op.table()))
            .collect();
        generators.sort_unstable_by_key(|&(name, _)| name);

        let identity: Vec<usize> = (0..n).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(identity.clone());
        let mut elements = vec![MonoidElement {
            table: identity,
            word: Vec::new(),
        }];

        // Breadth-first over word length; within a level, elements are
        // visited in discovery order and generators in name order, which
        // enumerates candidate words of the next length lexicographically.
        let mut level_start = 0;
        while level_start < elements.len() {
            let level_end = elements.len();
            for i in level_start..level_end {
                for (g, (_, g_table)) in generators.iter().enumerate() {
                    let table: Vec<usize> =
                        elements[i].table.iter().map(|&x| g_table[x]).collect();
                    if seen.insert(table.clone()) {
                        let mut word = elements[i].word.clone();
                        word.push(g);
                        elements.push(MonoidElement { table, word });
                    }
                }
            }
            level_start = level_end;
        }

        Ok(TransformationMonoid {
            generator_names: generators
                .into_iter()
                .map(|(name, _)| name.to_string())
                .collect(),
            elements,
        })
    }

    /// Picks a non-constant monoid element of minimal image size.
    ///
    /// Defined only for algebras of uncountable type; there the minimum is
    /// strictly between 1 and the carrier size. Ties break towards the
    /// earliest element in monoid order.
    pub fn min_image_nonconstant(&self, limits: &Limits) -> Result<MonoidElement> {
        if !self.classify_type().is_uncountable() {
            return Err(Error::NotUncountable);
        }
        let monoid = self.generate_monoid(limits)?;
        let mut best: Option<(usize, &MonoidElement)> = None;
        for element in monoid.elements() {
            let size = element.image_size();
            if size < 2 {
                continue;
            }
            if best.map_or(true, |(min, _)| size < min) {
                best = Some((size, element));
            }
        }
        // Uncountable type guarantees a non-constant, non-bijective witness.
        let (_, element) = best.expect("uncountable type implies a non-constant element");
        Ok(element.clone())
    }
}
