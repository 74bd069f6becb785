//! Finite powers of an algebra: tuples, generated subpowers, diagonals.
//!
//! A tuple is an element of `A^N` with `N >= 1` positions. Its *content* is
//! the set of carrier elements it uses; its *format* is the kernel
//! partition of positions holding equal entries. Operations act pointwise,
//! so formats only coarsen along operation application, with equality
//! exactly when the map is injective on the content.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::UnaryAlgebra;
use crate::error::{Error, Result};
use crate::iso::{canonical_form, CanonicalCode};
use crate::partition::Partition;
use crate::Limits;

/// The format of a tuple: the partition of positions by equal entries.
pub type IndexPartition = Partition;

/// An element of a finite power, stored as one entry per position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Tuple(pub Vec<usize>);

impl Tuple {
    pub fn constant(n_positions: usize, value: usize) -> Self {
        Tuple(vec![value; n_positions])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// The set of carrier elements appearing in the tuple.
    pub fn content(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    /// The kernel partition: positions sharing an entry share a class.
    pub fn format(&self) -> IndexPartition {
        Partition::from_class_assignment(&self.0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Tuple {
    /// Literal syntax `(2,0,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Tuple {
    type Err = Error;

    /// Parses the literal syntax `(2, 0, 1)`; whitespace around entries is
    /// ignored.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidTuple(format!("`{s}` is not parenthesised")))?;
        let mut entries = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::InvalidTuple(format!("empty entry in `{s}`")));
            }
            entries.push(
                part.parse::<usize>()
                    .map_err(|_| Error::InvalidTuple(format!("`{part}` is not a number")))?,
            );
        }
        if entries.is_empty() {
            return Err(Error::InvalidTuple("tuple has no entries".into()));
        }
        Ok(Tuple(entries))
    }
}

/// Applies one operation pointwise to a tuple.
pub fn apply_pointwise(algebra: &UnaryAlgebra, op_name: &str, tuple: &Tuple) -> Result<Tuple> {
    let op = algebra
        .op(op_name)
        .ok_or_else(|| Error::UnknownOp(op_name.to_string()))?;
    Ok(Tuple(tuple.0.iter().map(|&x| op.apply(x)).collect()))
}

/// A set of tuples in `A^N` closed under the pointwise operations, together
/// with a generating subset. Elements are kept sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subpower {
    base: UnaryAlgebra,
    n_positions: usize,
    elements: Vec<Tuple>,
    generators: Vec<Tuple>,
}

impl Subpower {
    /// Internal constructor; callers guarantee sortedness and closure.
    pub(crate) fn from_sorted_parts(
        base: UnaryAlgebra,
        n_positions: usize,
        elements: Vec<Tuple>,
        generators: Vec<Tuple>,
    ) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(generators.windows(2).all(|w| w[0] < w[1]));
        Subpower {
            base,
            n_positions,
            elements,
            generators,
        }
    }

    pub fn base(&self) -> &UnaryAlgebra {
        &self.base
    }

    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> &[Tuple] {
        &self.elements
    }

    /// The generating tuples, sorted, each also an element.
    pub fn generators(&self) -> &[Tuple] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.elements.binary_search(tuple).is_ok()
    }

    /// Index of a tuple in element order.
    pub fn position(&self, tuple: &Tuple) -> Option<usize> {
        self.elements.binary_search(tuple).ok()
    }

    /// Verifies closure under every basic operation. Generated subpowers
    /// are closed by construction; assembled ones (diagonals, unions) can
    /// be checked here.
    pub fn is_closed(&self) -> bool {
        self.base.ops().iter().all(|op| {
            self.elements.iter().all(|tuple| {
                let image = Tuple(tuple.0.iter().map(|&x| op.apply(x)).collect());
                self.contains(&image)
            })
        })
    }

    /// True when every position is mapped onto the whole carrier.
    pub fn is_subdirect(&self) -> bool {
        let n = self.base.carrier_size();
        (0..self.n_positions).all(|i| {
            let mut seen = vec![false; n];
            let mut count = 0;
            for tuple in &self.elements {
                let v = tuple.0[i];
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                }
            }
            count == n
        })
    }

    /// Reifies the subpower as an algebra: carrier elements are the tuples
    /// in lexicographic order, operations act pointwise. The returned map
    /// sends each new carrier element to its tuple.
    pub fn induced_algebra(&self) -> Result<InducedAlgebra> {
        if self.elements.is_empty() {
            return Err(Error::EmptySubpower);
        }
        let mut ops = Vec::with_capacity(self.base.ops().len());
        for op in self.base.ops() {
            let mut table = Vec::with_capacity(self.elements.len());
            for tuple in &self.elements {
                let image = Tuple(tuple.0.iter().map(|&x| op.apply(x)).collect());
                let target = self.position(&image).ok_or_else(|| Error::NotClosed {
                    op: op.name().to_string(),
                })?;
                table.push(target);
            }
            ops.push((op.name().to_string(), table));
        }
        let algebra = UnaryAlgebra::new(self.base.name(), self.elements.len(), ops)?;
        Ok(InducedAlgebra {
            algebra,
            tuples: self.elements.clone(),
        })
    }

    /// Merges subpowers over the same base and exponent. The result is
    /// closed whenever every part is (a union of closed sets is closed
    /// under unary operations).
    pub fn union(parts: &[&Subpower]) -> Result<Subpower> {
        let first = parts.first().ok_or(Error::EmptyInput)?;
        let mut elements: BTreeSet<Tuple> = BTreeSet::new();
        let mut generators: BTreeSet<Tuple> = BTreeSet::new();
        for part in parts {
            if part.base != first.base || part.n_positions != first.n_positions {
                return Err(Error::InvalidTuple(
                    "subpower union requires a common base and exponent".into(),
                ));
            }
            elements.extend(part.elements.iter().cloned());
            generators.extend(part.generators.iter().cloned());
        }
        Ok(Subpower {
            base: first.base.clone(),
            n_positions: first.n_positions,
            elements: elements.into_iter().collect(),
            generators: generators.into_iter().collect(),
        })
    }

    /// Intersection of two subpowers over the same base and exponent, as a
    /// sorted tuple list (an intersection of closed sets is closed).
    pub fn intersect_elements(&self, other: &Subpower) -> Vec<Tuple> {
        self.elements
            .iter()
            .filter(|t| other.contains(t))
            .cloned()
            .collect()
    }
}

/// A subpower reified as an algebra, with the tuple belonging to each new
/// carrier element.
#[derive(Debug, Clone)]
pub struct InducedAlgebra {
    pub algebra: UnaryAlgebra,
    pub tuples: Vec<Tuple>,
}

/// Generates the least subpower of `A^N` containing `generators`.
///
/// Closure is breadth-first; the element order of the result is
/// lexicographic regardless of discovery order. Empty generator lists give
/// the empty subpower. Growth is capped by [`Limits::max_elements`].
pub fn generate_subpower(
    algebra: &UnaryAlgebra,
    n_positions: usize,
    generators: &[Tuple],
    limits: &Limits,
) -> Result<Subpower> {
    if n_positions == 0 {
        return Err(Error::InvalidTuple("exponent must be at least 1".into()));
    }
    for tuple in generators {
        if tuple.len() != n_positions {
            return Err(Error::LengthMismatch {
                left: tuple.len(),
                right: n_positions,
            });
        }
        if let Some(&v) = tuple.entries().iter().find(|&&v| v >= algebra.carrier_size()) {
            return Err(Error::InvalidTuple(format!(
                "entry {v} is outside the carrier 0..{}",
                algebra.carrier_size()
            )));
        }
    }

    let mut seen: HashSet<Tuple> = HashSet::new();
    let mut queue: Vec<Tuple> = Vec::new();
    for tuple in generators {
        if seen.insert(tuple.clone()) {
            queue.push(tuple.clone());
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let current = queue[head].clone();
        head += 1;
        for op in algebra.ops() {
            let image = Tuple(current.0.iter().map(|&x| op.apply(x)).collect());
            if seen.insert(image.clone()) {
                if seen.len() > limits.max_elements {
                    return Err(Error::Capacity {
                        what: "subpower closure",
                        requested: seen.len() as u128,
                        limit: limits.max_elements as u128,
                    });
                }
                queue.push(image);
            }
        }
    }

    let mut elements: Vec<Tuple> = queue;
    elements.sort_unstable();
    let mut generator_list: Vec<Tuple> = generators.to_vec();
    generator_list.sort_unstable();
    generator_list.dedup();
    Ok(Subpower::from_sorted_parts(
        algebra.clone(),
        n_positions,
        elements,
        generator_list,
    ))
}

/// The three diagonal tuple sets of `A^N`.
#[derive(Debug, Clone)]
pub struct Diagonals {
    /// All constant tuples; always closed.
    pub d: Subpower,
    /// Constant tuples over values of constant maps in the transformation
    /// monoid; always closed.
    pub d0: Subpower,
    /// Constant tuples over values of constant *basic* operations. A subset
    /// of `d0`; it need not be closed when a bijection moves one of those
    /// values (check with [`Subpower::is_closed`]).
    pub dc: Subpower,
}

/// Computes the diagonal sets `D`, `D_0` and `D_c` of `A^N`.
///
/// Needs the transformation monoid for `D_0`, so the monoid carrier cap
/// applies.
pub fn diagonals(algebra: &UnaryAlgebra, n_positions: usize, limits: &Limits) -> Result<Diagonals> {
    if n_positions == 0 {
        return Err(Error::InvalidTuple("exponent must be at least 1".into()));
    }
    let diagonal = |values: &[usize]| -> Subpower {
        let elements: Vec<Tuple> = values
            .iter()
            .map(|&v| Tuple::constant(n_positions, v))
            .collect();
        Subpower::from_sorted_parts(
            algebra.clone(),
            n_positions,
            elements.clone(),
            elements,
        )
    };

    let all: Vec<usize> = (0..algebra.carrier_size()).collect();
    let monoid = algebra.generate_monoid(limits)?;
    let monoid_constants = monoid.constant_images();
    let mut basic_constants: Vec<usize> = algebra
        .ops()
        .iter()
        .filter(|op| op.kind() == crate::OpKind::Constant)
        .map(|op| op.table()[0])
        .collect();
    basic_constants.sort_unstable();
    basic_constants.dedup();

    Ok(Diagonals {
        d: diagonal(&all),
        d0: diagonal(&monoid_constants),
        dc: diagonal(&basic_constants),
    })
}

/// Canonical codes of the monogenic subpowers of `A^N`, deduplicated and
/// sorted.
///
/// Enumerates all `n^N` generating tuples, so `n^N` is capped by
/// [`Limits::max_elements`]. The count stabilises once `N` reaches the
/// carrier size: every monogenic subpower of a higher power is isomorphic
/// to one generated in `A^n`.
pub fn enumerate_monogenic_up_to_iso(
    algebra: &UnaryAlgebra,
    n_positions: usize,
    limits: &Limits,
) -> Result<Vec<CanonicalCode>> {
    if n_positions == 0 {
        return Err(Error::InvalidTuple("exponent must be at least 1".into()));
    }
    let n = algebra.carrier_size();
    let total = (n as u128)
        .checked_pow(n_positions as u32)
        .ok_or(Error::Capacity {
            what: "monogenic enumeration",
            requested: u128::MAX,
            limit: limits.max_elements as u128,
        })?;
    limits.check_elements("monogenic enumeration", total)?;

    let mut codes: BTreeSet<CanonicalCode> = BTreeSet::new();
    let mut tuple = vec![0usize; n_positions];
    loop {
        let generator = Tuple(tuple.clone());
        let subpower = generate_subpower(algebra, n_positions, &[generator], limits)?;
        let induced = subpower.induced_algebra()?;
        codes.insert(canonical_form(&induced.algebra));

        // Odometer step through A^N.
        let mut i = n_positions;
        loop {
            if i == 0 {
                return Ok(codes.into_iter().collect());
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}
