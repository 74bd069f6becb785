//! Canonical forms and isomorphism of unary algebras and digraphs.
//!
//! Both problems reduce to canonical labelling of an edge-layered digraph
//! (one layer per operation; plain digraphs have a single layer). The
//! canonicaliser is iterative colour refinement plus
//! individualisation-and-refinement backtracking: vertices are coloured by
//! their layered in/out neighbourhoods until stable, then a vertex of the
//! first smallest ambiguous colour class is split off and the search
//! recurses, keeping the least leaf labelling. Equal canonical codes are
//! therefore equivalent to isomorphism (over a common operation-name set).
//!
//! Isomorphism search decomposes by connected components first and prunes
//! with cheap invariants (component size, strong-component size multiset,
//! top-component count, outer-section digraph codes) before canonicalising.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::UnaryAlgebra;
use crate::digraph::{gamma, outer_sections, Digraph};
use crate::error::{Error, Result};

/// A relabelling-invariant byte string: equal codes mean isomorphic
/// structures (for algebras, over a common operation-name set).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Outcome of a budgeted isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// The search finished: either a carrier bijection or a definite no.
    Decided(Option<Vec<usize>>),
    /// The node budget ran out before the search finished.
    BudgetExhausted,
}

/// Node budget for the backtracking search; every search-tree node costs
/// one unit.
#[derive(Debug, Clone, Copy)]
struct SearchBudget {
    remaining: u64,
}

struct BudgetExhausted;

impl SearchBudget {
    fn unlimited() -> Self {
        SearchBudget {
            remaining: u64::MAX,
        }
    }

    fn consume(&mut self) -> std::result::Result<(), BudgetExhausted> {
        if self.remaining == 0 {
            return Err(BudgetExhausted);
        }
        self.remaining -= 1;
        Ok(())
    }
}

/// Edge-layered digraph prepared for canonicalisation.
struct Layered {
    n: usize,
    out: Vec<Vec<Vec<usize>>>,
    inn: Vec<Vec<Vec<usize>>>,
}

impl Layered {
    fn from_algebra(algebra: &UnaryAlgebra) -> Self {
        let n = algebra.carrier_size();
        let mut names = algebra.sorted_op_names();
        names.dedup();
        let mut out = Vec::with_capacity(names.len());
        let mut inn = Vec::with_capacity(names.len());
        for name in names {
            let op = algebra.op(name).expect("sorted name exists");
            let mut layer_out = vec![Vec::with_capacity(1); n];
            let mut layer_in = vec![Vec::new(); n];
            for x in 0..n {
                let y = op.apply(x);
                layer_out[x].push(y);
                layer_in[y].push(x);
            }
            out.push(layer_out);
            inn.push(layer_in);
        }
        Layered { n, out, inn }
    }

    fn from_digraph(digraph: &Digraph) -> Self {
        let n = digraph.vertex_count();
        let mut layer_out = vec![Vec::new(); n];
        let mut layer_in = vec![Vec::new(); n];
        for &(u, v) in digraph.edges() {
            layer_out[u].push(v);
            layer_in[v].push(u);
        }
        Layered {
            n,
            out: vec![layer_out],
            inn: vec![layer_in],
        }
    }

    /// Refines `colors` to the coarsest stable colouring below it. New
    /// colour ids are assigned by sorted signature, so they depend only on
    /// the structure, never on vertex numbering.
    fn refine(&self, colors: &mut Vec<usize>) {
        const SEP: usize = usize::MAX;
        let mut distinct = colors.iter().collect::<std::collections::HashSet<_>>().len();
        loop {
            let mut signatures: Vec<(Vec<usize>, usize)> = Vec::with_capacity(self.n);
            for v in 0..self.n {
                let mut signature = vec![colors[v]];
                for (out, inn) in self.out.iter().zip(&self.inn) {
                    signature.push(SEP);
                    let mut targets: Vec<usize> = out[v].iter().map(|&u| colors[u]).collect();
                    targets.sort_unstable();
                    signature.extend(targets);
                    signature.push(SEP);
                    let mut sources: Vec<usize> = inn[v].iter().map(|&u| colors[u]).collect();
                    sources.sort_unstable();
                    signature.extend(sources);
                }
                signatures.push((signature, v));
            }
            signatures.sort_unstable();
            let mut next = 0;
            let mut new_colors = vec![0; self.n];
            for i in 0..signatures.len() {
                if i > 0 && signatures[i].0 != signatures[i - 1].0 {
                    next += 1;
                }
                new_colors[signatures[i].1] = next;
            }
            let new_distinct = next + 1;
            *colors = new_colors;
            if new_distinct == distinct {
                return;
            }
            distinct = new_distinct;
        }
    }

    /// Individualisation-refinement search for the least leaf labelling.
    /// Returns `(leaf code, permutation old vertex -> canonical label)`.
    fn canonicalize(
        &self,
        budget: &mut SearchBudget,
    ) -> std::result::Result<(Vec<usize>, Vec<usize>), BudgetExhausted> {
        let mut colors = vec![0; self.n];
        if self.n > 0 {
            self.refine(&mut colors);
        }
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        self.search(colors, budget, &mut best)?;
        Ok(best.expect("search visits at least one leaf"))
    }

    fn search(
        &self,
        colors: Vec<usize>,
        budget: &mut SearchBudget,
        best: &mut Option<(Vec<usize>, Vec<usize>)>,
    ) -> std::result::Result<(), BudgetExhausted> {
        budget.consume()?;
        let num_colors = colors.iter().copied().max().map_or(0, |c| c + 1);
        if num_colors == self.n {
            // Discrete colouring: the colours are the canonical labels.
            let code = self.leaf_code(&colors);
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                *best = Some((code, colors));
            }
            return Ok(());
        }

        // Target cell: the smallest colour class with several members,
        // lowest colour id on ties.
        let mut sizes = vec![0usize; num_colors];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..num_colors)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete colouring has an ambiguous class");

        for v in 0..self.n {
            if colors[v] != target {
                continue;
            }
            let mut child = colors.clone();
            child[v] = self.n; // fresh colour beyond every current id
            self.refine(&mut child);
            self.search(child, budget, best)?;
        }
        Ok(())
    }

    /// Serialises the graph under a discrete colouring: per layer and per
    /// canonical vertex, the sorted relabelled out-neighbourhood, with a
    /// sentinel closing each vertex.
    fn leaf_code(&self, perm: &[usize]) -> Vec<usize> {
        const SEP: usize = usize::MAX;
        let mut old_of = vec![0; self.n];
        for (old, &new) in perm.iter().enumerate() {
            old_of[new] = old;
        }
        let mut code = Vec::new();
        for out in &self.out {
            for &old in &old_of {
                let mut targets: Vec<usize> = out[old].iter().map(|&u| perm[u]).collect();
                targets.sort_unstable();
                code.extend(targets);
                code.push(SEP);
            }
        }
        code
    }
}

fn push_u32(bytes: &mut Vec<u8>, value: usize) {
    let v = u32::try_from(value.min(u32::MAX as usize)).expect("bounded value");
    bytes.extend_from_slice(&v.to_le_bytes());
}

fn code_bytes(header: &[&str], n: usize, leaf: &[usize]) -> CanonicalCode {
    let mut bytes = Vec::new();
    push_u32(&mut bytes, n);
    push_u32(&mut bytes, header.len());
    for name in header {
        bytes.extend_from_slice(name.as_bytes());
        bytes.push(0);
    }
    for &value in leaf {
        push_u32(&mut bytes, if value == usize::MAX { u32::MAX as usize } else { value });
    }
    CanonicalCode(bytes)
}

/// Canonical code of an algebra. Two algebras over the same operation-name
/// set get equal codes exactly when they are isomorphic.
pub fn canonical_form(algebra: &UnaryAlgebra) -> CanonicalCode {
    canonical_form_with_morphism(algebra).0
}

/// Canonical code plus the carrier permutation realising it (element `x`
/// receives canonical label `perm[x]`).
pub fn canonical_form_with_morphism(algebra: &UnaryAlgebra) -> (CanonicalCode, Vec<usize>) {
    let layered = Layered::from_algebra(algebra);
    let (leaf, perm) = layered
        .canonicalize(&mut SearchBudget::unlimited())
        .unwrap_or_else(|_| unreachable!("unlimited budget"));
    let names = algebra.sorted_op_names();
    (code_bytes(&names, algebra.carrier_size(), &leaf), perm)
}

/// Canonical code of a plain digraph.
pub fn digraph_canonical_code(digraph: &Digraph) -> CanonicalCode {
    let layered = Layered::from_digraph(digraph);
    let (leaf, _) = layered
        .canonicalize(&mut SearchBudget::unlimited())
        .unwrap_or_else(|_| unreachable!("unlimited budget"));
    code_bytes(&[], digraph.vertex_count(), &leaf)
}

/// True when two plain digraphs are isomorphic.
pub fn digraph_isomorphic(left: &Digraph, right: &Digraph) -> bool {
    left.vertex_count() == right.vertex_count()
        && left.edges().len() == right.edges().len()
        && digraph_canonical_code(left) == digraph_canonical_code(right)
}

/// Cheap relabelling invariants of one connected component, used to prune
/// the isomorphism search before any canonicalisation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct InvariantKey {
    size: usize,
    scc_sizes: Vec<usize>,
    top_count: usize,
    has_bottom: bool,
    section_codes: Vec<CanonicalCode>,
}

fn invariant_key(component: &UnaryAlgebra) -> InvariantKey {
    let analysis = gamma(component).analyze();
    let mut scc_sizes: Vec<usize> = analysis.sccs().blocks().iter().map(Vec::len).collect();
    scc_sizes.sort_unstable();
    let has_bottom = analysis.bottom_scc_per_component()[0].is_some();
    let mut section_codes = Vec::new();
    if has_bottom {
        let sections = outer_sections(component).expect("component is connected with bottom");
        section_codes = sections
            .iter()
            .map(|s| digraph_canonical_code(&s.to_digraph()))
            .collect();
        section_codes.sort_unstable();
    }
    InvariantKey {
        size: component.carrier_size(),
        scc_sizes,
        top_count: analysis.top_scc_count(),
        has_bottom,
        section_codes,
    }
}

/// Splits an algebra into its connected components, each restricted to its
/// own algebra. Returns `(component algebra, member vertices)` pairs,
/// ordered by least vertex.
pub fn connected_components_of(algebra: &UnaryAlgebra) -> Vec<(UnaryAlgebra, Vec<usize>)> {
    gamma(algebra)
        .analyze()
        .connected_components()
        .blocks()
        .iter()
        .map(|block| {
            algebra
                .induced_on(block)
                .expect("components are closed under every operation")
        })
        .collect()
}

/// Decides isomorphism and, on success, returns a bijection `phi` with
/// `phi[x]` the image of `x` (so `phi(f(x)) = f(phi(x))` for every
/// operation).
///
/// Errors with [`Error::OpSignatureMismatch`] when the operation-name sets
/// differ; carrier-size mismatch is an ordinary `None`.
pub fn are_isomorphic(left: &UnaryAlgebra, right: &UnaryAlgebra) -> Result<Option<Vec<usize>>> {
    match are_isomorphic_budgeted(left, right, u64::MAX)? {
        IsoOutcome::Decided(result) => Ok(result),
        IsoOutcome::BudgetExhausted => unreachable!("unlimited budget"),
    }
}

/// [`are_isomorphic`] with a node budget on the backtracking search; every
/// search-tree node (including those spent on canonical codes of sections)
/// costs one unit.
pub fn are_isomorphic_budgeted(
    left: &UnaryAlgebra,
    right: &UnaryAlgebra,
    node_budget: u64,
) -> Result<IsoOutcome> {
    let left_names: Vec<&str> = left.sorted_op_names();
    let right_names: Vec<&str> = right.sorted_op_names();
    if left_names != right_names {
        return Err(Error::OpSignatureMismatch {
            left: left_names.iter().map(|s| s.to_string()).collect(),
            right: right_names.iter().map(|s| s.to_string()).collect(),
        });
    }
    if left.carrier_size() != right.carrier_size() {
        return Ok(IsoOutcome::Decided(None));
    }

    let left_components = connected_components_of(left);
    let right_components = connected_components_of(right);
    if left_components.len() != right_components.len() {
        return Ok(IsoOutcome::Decided(None));
    }

    // Invariant pruning: the multisets of cheap component invariants must
    // coincide.
    let mut left_keys: Vec<InvariantKey> =
        left_components.iter().map(|(c, _)| invariant_key(c)).collect();
    let mut right_keys: Vec<InvariantKey> =
        right_components.iter().map(|(c, _)| invariant_key(c)).collect();
    left_keys.sort_unstable();
    right_keys.sort_unstable();
    if left_keys != right_keys {
        return Ok(IsoOutcome::Decided(None));
    }

    // Full decision: canonicalise every component and match equal codes.
    let mut budget = SearchBudget {
        remaining: node_budget,
    };
    let mut canonical =
        |component: &UnaryAlgebra| -> std::result::Result<(Vec<usize>, Vec<usize>), BudgetExhausted> {
            Layered::from_algebra(component).canonicalize(&mut budget)
        };

    let mut left_coded = Vec::with_capacity(left_components.len());
    for (component, vertices) in &left_components {
        match canonical(component) {
            Ok((code, perm)) => left_coded.push((code, perm, vertices)),
            Err(BudgetExhausted) => return Ok(IsoOutcome::BudgetExhausted),
        }
    }
    let mut right_coded = Vec::with_capacity(right_components.len());
    for (component, vertices) in &right_components {
        match canonical(component) {
            Ok((code, perm)) => right_coded.push((code, perm, vertices)),
            Err(BudgetExhausted) => return Ok(IsoOutcome::BudgetExhausted),
        }
    }
    left_coded.sort();
    right_coded.sort();

    let n = left.carrier_size();
    let mut phi = vec![usize::MAX; n];
    for ((left_code, left_perm, left_vertices), (right_code, right_perm, right_vertices)) in
        left_coded.iter().zip(&right_coded)
    {
        if left_code != right_code || left_vertices.len() != right_vertices.len() {
            return Ok(IsoOutcome::Decided(None));
        }
        // phi = right_perm^{-1} . left_perm, transported to global ids.
        let mut right_old_of = vec![0; right_vertices.len()];
        for (local, &label) in right_perm.iter().enumerate() {
            right_old_of[label] = local;
        }
        for (local, &global) in left_vertices.iter().enumerate() {
            phi[global] = right_vertices[right_old_of[left_perm[local]]];
        }
    }

    debug_assert!(is_homomorphic_bijection(left, right, &phi));
    Ok(IsoOutcome::Decided(Some(phi)))
}

/// Checks that `phi` is a bijection commuting with every operation.
pub fn is_homomorphic_bijection(
    left: &UnaryAlgebra,
    right: &UnaryAlgebra,
    phi: &[usize],
) -> bool {
    let n = left.carrier_size();
    if right.carrier_size() != n || phi.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in phi {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    left.ops().iter().all(|op| {
        let image = match right.op(op.name()) {
            Some(image) => image,
            None => return false,
        };
        (0..n).all(|x| phi[op.apply(x)] == image.apply(phi[x]))
    })
}
