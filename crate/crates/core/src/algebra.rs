//! Finite unary algebras and their type classification.
//!
//! An algebra is a carrier `{0, .., n-1}` with finitely many named unary
//! operations, each stored as a value table. The type dichotomy implemented
//! by [`UnaryAlgebra::classify_type`]: an algebra has, up to isomorphism,
//! only countably many subdirect powers exactly when every basic operation
//! is a bijection or a constant; a single operation that is neither already
//! forces uncountably many.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A named unary operation given by its value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    name: String,
    table: Vec<usize>,
}

impl Operation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn kind(&self) -> OpKind {
        op_kind(&self.table)
    }
}

/// How an operation table acts on the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OpKind {
    Bijection,
    Constant,
    Other,
}

/// Classifies a table as a bijection, a constant, or neither.
///
/// On a one-element carrier the sole table is both; it reports `Bijection`.
pub fn op_kind(table: &[usize]) -> OpKind {
    let n = table.len();
    let mut seen = vec![false; n];
    let mut injective = true;
    for &v in table {
        if seen[v] {
            injective = false;
            break;
        }
        seen[v] = true;
    }
    if injective {
        return OpKind::Bijection;
    }
    if table.iter().all(|&v| v == table[0]) {
        return OpKind::Constant;
    }
    OpKind::Other
}

/// Verdict of the type classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TypeVerdict {
    /// Every basic operation is a bijection or a constant; the algebra has
    /// only countably many subdirect powers up to isomorphism.
    Countable {
        bijections: Vec<String>,
        constants: Vec<String>,
    },
    /// `witness` names a basic operation that is neither bijective nor
    /// constant; the algebra has uncountably many subdirect powers.
    Uncountable { witness: String },
}

impl TypeVerdict {
    pub fn is_uncountable(&self) -> bool {
        matches!(self, TypeVerdict::Uncountable { .. })
    }
}

/// A finite unary algebra: carrier `{0, .., carrier_size-1}` plus named
/// operations in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryAlgebra {
    name: Option<String>,
    carrier_size: usize,
    ops: Vec<Operation>,
}

impl UnaryAlgebra {
    /// Validates and builds an algebra.
    ///
    /// Requirements: `carrier_size >= 1`, every table has length
    /// `carrier_size` with entries in range, and operation names are
    /// non-empty and pairwise distinct. An empty operation list is allowed.
    pub fn new<S: Into<String>>(
        name: Option<S>,
        carrier_size: usize,
        ops: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        if carrier_size == 0 {
            return Err(Error::InvalidAlgebra("carrier must be non-empty".into()));
        }
        let mut seen_names: Vec<&str> = Vec::new();
        for (op_name, table) in &ops {
            if op_name.is_empty() {
                return Err(Error::InvalidAlgebra("operation name is empty".into()));
            }
            if op_name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation name `{op_name}` contains whitespace"
                )));
            }
            if seen_names.contains(&op_name.as_str()) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate operation name `{op_name}`"
                )));
            }
            seen_names.push(op_name);
            if table.len() != carrier_size {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{op_name}` has table length {}, expected {carrier_size}",
                    table.len()
                )));
            }
            if let Some(&v) = table.iter().find(|&&v| v >= carrier_size) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{op_name}` maps into {v}, outside the carrier 0..{carrier_size}"
                )));
            }
        }
        Ok(UnaryAlgebra {
            name: name.map(Into::into),
            carrier_size,
            ops: ops
                .into_iter()
                .map(|(name, table)| Operation { name, table })
                .collect(),
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    /// Operations in insertion order.
    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|op| op.name == name)
    }

    /// Operation names in insertion order.
    pub fn op_names(&self) -> Vec<&str> {
        self.ops.iter().map(|op| op.name.as_str()).collect()
    }

    /// Operation names sorted lexicographically.
    pub fn sorted_op_names(&self) -> Vec<&str> {
        let mut names = self.op_names();
        names.sort_unstable();
        names
    }

    /// Decides the countable/uncountable dichotomy.
    ///
    /// The `Uncountable` witness is the first operation in insertion order
    /// that is neither a bijection nor a constant.
    pub fn classify_type(&self) -> TypeVerdict {
        let mut bijections = Vec::new();
        let mut constants = Vec::new();
        for op in &self.ops {
            match op.kind() {
                OpKind::Bijection => bijections.push(op.name.clone()),
                OpKind::Constant => constants.push(op.name.clone()),
                OpKind::Other => {
                    return TypeVerdict::Uncountable {
                        witness: op.name.clone(),
                    }
                }
            }
        }
        TypeVerdict::Countable {
            bijections,
            constants,
        }
    }

    /// Transports the algebra along a carrier permutation: element `x`
    /// becomes `perm[x]`. Operation names and order are preserved.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.carrier_size;
        if perm.len() != n {
            return Err(Error::InvalidAlgebra(format!(
                "permutation has length {}, expected {n}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in perm {
            if v >= n || seen[v] {
                return Err(Error::InvalidAlgebra(
                    "relabelling is not a permutation of the carrier".into(),
                ));
            }
            seen[v] = true;
        }
        let ops = self
            .ops
            .iter()
            .map(|op| {
                let mut table = vec![0; n];
                for x in 0..n {
                    table[perm[x]] = perm[op.table[x]];
                }
                (op.name.clone(), table)
            })
            .collect();
        UnaryAlgebra::new(self.name.clone(), n, ops)
    }

    /// Restricts the algebra to a subset of the carrier that is closed under
    /// every operation.
    ///
    /// `vertices` must be sorted, duplicate-free and closed. Returns the
    /// restricted algebra (carrier renumbered `0..k`) together with the map
    /// from new elements back to members of `vertices`.
    pub fn induced_on(&self, vertices: &[usize]) -> Result<(UnaryAlgebra, Vec<usize>)> {
        if vertices.is_empty() {
            return Err(Error::InvalidAlgebra(
                "induced carrier must be non-empty".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlgebra(
                "induced carrier must be sorted and duplicate-free".into(),
            ));
        }
        if *vertices.last().unwrap() >= self.carrier_size {
            return Err(Error::InvalidAlgebra(
                "induced carrier member out of range".into(),
            ));
        }
        let mut rank = vec![usize::MAX; self.carrier_size];
        for (i, &v) in vertices.iter().enumerate() {
            rank[v] = i;
        }
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let mut table = Vec::with_capacity(vertices.len());
            for &v in vertices {
                let image = rank[op.table[v]];
                if image == usize::MAX {
                    return Err(Error::NotClosed {
                        op: op.name.clone(),
                    });
                }
                table.push(image);
            }
            ops.push((op.name.clone(), table));
        }
        let sub = UnaryAlgebra::new(self.name.clone(), vertices.len(), ops)?;
        Ok((sub, vertices.to_vec()))
    }
}

impl fmt::Display for UnaryAlgebra {
    /// Renders the text format parsed by [`crate::format::parse_algebra`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "algebra {name}")?;
        }
        writeln!(f, "carrier {}", self.carrier_size)?;
        for op in &self.ops {
            write!(f, "op {}", op.name)?;
            for &v in &op.table {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn alg(n: usize, ops: &[(&str, &[usize])]) -> UnaryAlgebra {
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
    fn op_kind_distinguishes_the_three_cases() {
        assert_eq!(op_kind(&[0, 0, 1]), OpKind::Other);
        assert_eq!(op_kind(&[1, 0]), OpKind::Bijection);
        assert_eq!(op_kind(&[2, 2, 2]), OpKind::Constant);
        assert_eq!(op_kind(&[1, 2, 0]), OpKind::Bijection);
    }

    #[test]
    fn one_element_table_counts_as_bijection() {
        assert_eq!(op_kind(&[0]), OpKind::Bijection);
    }

    #[test]
    fn classify_reports_first_witness_in_insertion_order() {
        let a = alg(3, &[("g", &[1, 2, 0]), ("f", &[0, 0, 1]), ("h", &[1, 1, 0])]);
        assert_eq!(
            a.classify_type(),
            TypeVerdict::Uncountable {
                witness: "f".into()
            }
        );
    }

    #[test]
    fn classify_partitions_countable_ops() {
        let a = alg(2, &[("s", &[1, 0]), ("c", &[0, 0]), ("i", &[0, 1])]);
        assert_eq!(
            a.classify_type(),
            TypeVerdict::Countable {
                bijections: vec!["s".into(), "i".into()],
                constants: vec!["c".into()],
            }
        );
    }

    #[test]
    fn empty_operation_list_is_allowed_and_countable() {
        let a = alg(4, &[]);
        assert!(!a.classify_type().is_uncountable());
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let err = |r: Result<UnaryAlgebra>| r.unwrap_err();
        assert!(matches!(
            err(UnaryAlgebra::new(None::<&str>, 0, vec![])),
            Error::InvalidAlgebra(_)
        ));
        assert!(matches!(
            err(UnaryAlgebra::new(
                None::<&str>,
                2,
                vec![("f".into(), vec![0])]
            )),
            Error::InvalidAlgebra(_)
        ));
        assert!(matches!(
            err(UnaryAlgebra::new(
                None::<&str>,
                2,
                vec![("f".into(), vec![0, 2])]
            )),
            Error::InvalidAlgebra(_)
        ));
        assert!(matches!(
            err(UnaryAlgebra::new(
                None::<&str>,
                2,
                vec![("f".into(), vec![0, 1]), ("f".into(), vec![1, 0])]
            )),
            Error::InvalidAlgebra(_)
        ));
    }

    #[test]
    fn relabel_transports_tables() {
        let a = alg(3, &[("f", &[0, 0, 1])]);
        // Send 0 -> 2, 1 -> 0, 2 -> 1.
        let b = a.relabel(&[2, 0, 1]).unwrap();
        // New f: new 2 (old 0) -> new 2, new 0 (old 1) -> new 2, new 1 (old 2) -> new 0.
        assert_eq!(b.op("f").unwrap().table(), &[2, 0, 2]);
        assert!(b.classify_type().is_uncountable());
    }

    #[test]
    fn induced_on_closed_subset_renames_consistently() {
        let a = alg(3, &[("f", &[0, 0, 1])]);
        let (sub, map) = a.induced_on(&[0, 1]).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(sub.op("f").unwrap().table(), &[0, 0]);
        assert!(matches!(
            a.induced_on(&[1, 2]),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn display_round_trips_header_and_tables() {
        let a = UnaryAlgebra::new(Some("chain"), 3, vec![("f".into(), vec![0, 0, 1])]).unwrap();
        assert_eq!(a.to_string(), "algebra chain\ncarrier 3\nop f 0 0 1\n");
    }
}
