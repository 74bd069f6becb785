//! The labelled digraph of a unary algebra and its component structure.
//!
//! The digraph of an algebra has the carrier as vertices and one edge
//! `a -> f(a)` per vertex and operation, labelled by the operation. Because
//! isomorphisms of unary algebras are exactly label-respecting digraph
//! isomorphisms, most structural invariants live here: connected components,
//! strong components with their reachability order, top and bottom
//! components, and the outer sections (what remains after deleting the
//! bottom component).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::UnaryAlgebra;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Labelled digraph of an algebra. Edges are `(source, target, op index)`
/// sorted by `(source, op index)`; op indices refer to [`Self::op_names`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDigraph {
    vertex_count: usize,
    op_names: Vec<String>,
    edges: Vec<(usize, usize, usize)>,
}

/// Plain directed graph, used where edge labels are deliberately forgotten
/// (outer-section comparison). Edges are sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertex_count || v >= vertex_count)
        {
            return Err(Error::InvalidAlgebra(format!(
                "edge ({u}, {v}) is out of range for {vertex_count} vertices"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Digraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn analyze(&self) -> ComponentAnalysis {
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
        }
        analyze_adjacency(&adjacency)
    }
}

/// Component structure of a digraph.
///
/// Strong components are numbered by least vertex; `scc_reaches(i, j)` is
/// the reflexive-transitive reachability order between them. Top components
/// are the maximal ones (no other component reaches them); a bottom is
/// recorded for a connected component exactly when that component has a
/// unique minimal strong component, i.e. one reachable from all of its
/// strong components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentAnalysis {
    connected_components: Partition,
    sccs: Partition,
    scc_reach: Vec<Vec<bool>>,
    top_sccs: Vec<usize>,
    bottom_scc_per_component: Vec<Option<usize>>,
}

impl ComponentAnalysis {
    /// Partition of the vertices into (weakly) connected components,
    /// numbered by least vertex.
    pub fn connected_components(&self) -> &Partition {
        &self.connected_components
    }

    /// Partition of the vertices into strong components, numbered by least
    /// vertex.
    pub fn sccs(&self) -> &Partition {
        &self.sccs
    }

    /// True when strong component `i` reaches strong component `j`
    /// (reflexive).
    pub fn scc_reaches(&self, i: usize, j: usize) -> bool {
        self.scc_reach[i][j]
    }

    /// Strong components no other strong component reaches, ascending.
    pub fn top_sccs(&self) -> &[usize] {
        &self.top_sccs
    }

    pub fn top_scc_count(&self) -> usize {
        self.top_sccs.len()
    }

    /// For each connected component: its unique minimal strong component,
    /// or `None` when several minimal ones tie.
    pub fn bottom_scc_per_component(&self) -> &[Option<usize>] {
        &self.bottom_scc_per_component
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components.num_classes() == 1
    }
}

/// Computes the component structure from a directed adjacency list.
pub(crate) fn analyze_adjacency(adjacency: &[Vec<usize>]) -> ComponentAnalysis {
    let n = adjacency.len();

    // Weakly connected components by undirected traversal.
    let mut undirected = vec![BTreeSet::new(); n];
    for (u, targets) in adjacency.iter().enumerate() {
        for &v in targets {
            undirected[u].insert(v);
            undirected[v].insert(u);
        }
    }
    let mut component_raw = vec![usize::MAX; n];
    let mut next_component = 0;
    for start in 0..n {
        if component_raw[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component_raw[start] = next_component;
        while let Some(u) = stack.pop() {
            for &v in &undirected[u] {
                if component_raw[v] == usize::MAX {
                    component_raw[v] = next_component;
                    stack.push(v);
                }
            }
        }
        next_component += 1;
    }
    let connected_components = Partition::from_class_assignment(&component_raw);

    // Strong components: iterative Tarjan.
    let scc_raw = tarjan_sccs(adjacency);
    let sccs = Partition::from_class_assignment(&scc_raw);
    let k = sccs.num_classes();

    // Condensation adjacency over normalised scc ids.
    let mut condensation = vec![BTreeSet::new(); k];
    for (u, targets) in adjacency.iter().enumerate() {
        let cu = sccs.class_of(u);
        for &v in targets {
            let cv = sccs.class_of(v);
            if cu != cv {
                condensation[cu].insert(cv);
            }
        }
    }

    // Reflexive-transitive closure by depth-first search per component.
    let mut scc_reach = vec![vec![false; k]; k];
    for i in 0..k {
        let mut stack = vec![i];
        scc_reach[i][i] = true;
        while let Some(c) = stack.pop() {
            for &d in &condensation[c] {
                if !scc_reach[i][d] {
                    scc_reach[i][d] = true;
                    stack.push(d);
                }
            }
        }
    }

    // Top components: never reached from elsewhere.
    let mut has_incoming = vec![false; k];
    for (c, targets) in condensation.iter().enumerate() {
        for &d in targets {
            let _ = c;
            has_incoming[d] = true;
        }
    }
    let top_sccs: Vec<usize> = (0..k).filter(|&c| !has_incoming[c]).collect();

    // Bottom per connected component: the unique sink if there is one.
    let scc_component: Vec<usize> = sccs
        .blocks()
        .iter()
        .map(|block| connected_components.class_of(block[0]))
        .collect();
    let mut sinks_per_component = vec![Vec::new(); connected_components.num_classes()];
    for c in 0..k {
        if condensation[c].is_empty() {
            sinks_per_component[scc_component[c]].push(c);
        }
    }
    let bottom_scc_per_component = sinks_per_component
        .into_iter()
        .map(|sinks| match sinks.as_slice() {
            [only] => Some(*only),
            _ => None,
        })
        .collect();

    ComponentAnalysis {
        connected_components,
        sccs,
        scc_reach,
        top_sccs,
        bottom_scc_per_component,
    }
}

/// Iterative Tarjan; returns a raw scc id per vertex.
fn tarjan_sccs(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut index = vec![usize::MAX; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut scc_of = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut next_scc = 0;

    // Explicit call stack: (vertex, next child position).
    let mut call_stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call_stack.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = call_stack.last_mut() {
            if *child < adjacency[v].len() {
                let w = adjacency[v][*child];
                *child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        scc_of[w] = next_scc;
                        if w == v {
                            break;
                        }
                    }
                    next_scc += 1;
                }
            }
        }
    }
    scc_of
}

impl AlgebraDigraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Operation names in the parent algebra's insertion order; edge labels
    /// index into this list.
    pub fn op_names(&self) -> &[String] {
        &self.op_names
    }

    /// Edges as `(source, target, op index)`, sorted by `(source, op)`.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// Edges with their labels resolved to names.
    pub fn labeled_edges(&self) -> impl Iterator<Item = (usize, usize, &str)> {
        self.edges
            .iter()
            .map(|&(u, v, op)| (u, v, self.op_names[op].as_str()))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for &(u, v, _) in &self.edges {
            adjacency[u].push(v);
        }
        adjacency
    }

    /// Component structure: connected components, strong components with
    /// their reachability order, top components, and per-component bottoms.
    pub fn analyze(&self) -> ComponentAnalysis {
        analyze_adjacency(&self.adjacency())
    }

    /// For each vertex, the number of strict predecessors under one
    /// operation: vertices `u != v` with an `op`-edge `u -> v`.
    pub fn predecessor_profile(&self, op_name: &str) -> Result<Vec<usize>> {
        let op = self
            .op_names
            .iter()
            .position(|name| name == op_name)
            .ok_or_else(|| Error::UnknownOp(op_name.to_string()))?;
        let mut counts = vec![0; self.vertex_count];
        for &(u, v, e) in &self.edges {
            if e == op && u != v {
                counts[v] += 1;
            }
        }
        Ok(counts)
    }

    /// GraphViz rendering with one labelled edge per (vertex, operation).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph algebra {\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  {v};");
        }
        for (u, v, label) in self.labeled_edges() {
            let _ = writeln!(out, "  {u} -> {v} [label={label}];");
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the labelled digraph of an algebra: one edge `a -> f(a)` per
/// vertex `a` and operation `f`.
pub fn gamma(algebra: &UnaryAlgebra) -> AlgebraDigraph {
    let n = algebra.carrier_size();
    let mut edges = Vec::with_capacity(n * algebra.ops().len());
    for a in 0..n {
        for (i, op) in algebra.ops().iter().enumerate() {
            edges.push((a, op.apply(a), i));
        }
    }
    AlgebraDigraph {
        vertex_count: n,
        op_names: algebra.ops().iter().map(|op| op.name().to_string()).collect(),
        edges,
    }
}

/// One outer section: a connected chunk of the digraph left after deleting
/// the bottom component. Vertices and edges keep the parent numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterSection {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize, usize)>,
}

impl OuterSection {
    /// Section vertices in parent numbering, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Induced labelled edges in parent numbering.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// The section as an unlabelled digraph with vertices renumbered
    /// `0..len`; sections are compared in this form.
    pub fn to_digraph(&self) -> Digraph {
        let rank = |v: usize| self.vertices.binary_search(&v).expect("section vertex");
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, _)| (rank(u), rank(v)))
            .collect();
        Digraph::new(self.vertices.len(), edges).expect("section edges are in range")
    }
}

/// Outer sections of a connected algebra with a bottom component: the
/// connected components of the digraph induced on carrier minus bottom,
/// ordered by least vertex.
///
/// Errors: [`Error::NotConnected`] when the digraph is disconnected,
/// [`Error::NoBottom`] when no unique minimal strong component exists.
pub fn outer_sections(algebra: &UnaryAlgebra) -> Result<Vec<OuterSection>> {
    let digraph = gamma(algebra);
    let analysis = digraph.analyze();
    if !analysis.is_connected() {
        return Err(Error::NotConnected);
    }
    let bottom = analysis.bottom_scc_per_component()[0].ok_or(Error::NoBottom)?;
    let bottom_vertices: BTreeSet<usize> = analysis.sccs().blocks()[bottom]
        .iter()
        .copied()
        .collect();

    let outside: Vec<usize> = (0..digraph.vertex_count())
        .filter(|v| !bottom_vertices.contains(v))
        .collect();
    let rank = |v: usize| outside.binary_search(&v).expect("outside vertex");
    let induced: Vec<(usize, usize, usize)> = digraph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v, _)| !bottom_vertices.contains(&u) && !bottom_vertices.contains(&v))
        .collect();

    // Connected components of the induced subgraph, in local numbering.
    let mut adjacency = vec![Vec::new(); outside.len()];
    for &(u, v, _) in &induced {
        adjacency[rank(u)].push(rank(v));
    }
    let local = analyze_adjacency(&adjacency);

    let mut sections = vec![
        OuterSection {
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        local.connected_components().num_classes()
    ];
    for (i, &v) in outside.iter().enumerate() {
        sections[local.connected_components().class_of(i)]
            .vertices
            .push(v);
    }
    for &(u, v, op) in &induced {
        sections[local.connected_components().class_of(rank(u))]
            .edges
            .push((u, v, op));
    }
    Ok(sections)
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

    fn chain() -> UnaryAlgebra {
        alg(3, &[("f", &[0, 0, 1])])
    }

    #[test]
    fn gamma_emits_one_edge_per_vertex_and_op() {
        let digraph = gamma(&chain());
        assert_eq!(digraph.edges(), &[(0, 0, 0), (1, 0, 0), (2, 1, 0)]);
        let two_ops = alg(2, &[("f", &[1, 0]), ("g", &[0, 0])]);
        let digraph = gamma(&two_ops);
        assert_eq!(digraph.vertex_count(), 2);
        assert_eq!(digraph.edges().len(), 4);
        assert_eq!(
            digraph.labeled_edges().collect::<Vec<_>>(),
            vec![(0, 1, "f"), (0, 0, "g"), (1, 0, "f"), (1, 0, "g")]
        );
    }

    #[test]
    fn chain_has_three_singleton_sccs_in_a_line() {
        let analysis = gamma(&chain()).analyze();
        assert!(analysis.is_connected());
        assert_eq!(analysis.sccs().num_classes(), 3);
        assert_eq!(
            analysis.sccs().blocks(),
            vec![vec![0], vec![1], vec![2]]
        );
        // 2 reaches 1 reaches 0, never backwards.
        assert!(analysis.scc_reaches(2, 1) && analysis.scc_reaches(1, 0));
        assert!(analysis.scc_reaches(2, 0));
        assert!(!analysis.scc_reaches(0, 1) && !analysis.scc_reaches(1, 2));
        assert_eq!(analysis.top_sccs(), &[2]);
        assert_eq!(analysis.bottom_scc_per_component(), &[Some(0)]);
    }

    #[test]
    fn cycle_is_one_scc_and_its_own_top_and_bottom() {
        let analysis = gamma(&alg(3, &[("c", &[1, 2, 0])])).analyze();
        assert_eq!(analysis.sccs().num_classes(), 1);
        assert_eq!(analysis.top_sccs(), &[0]);
        assert_eq!(analysis.bottom_scc_per_component(), &[Some(0)]);
    }

    #[test]
    fn two_sinks_mean_no_bottom() {
        // 0 -> 1 (f), 0 -> 2 (g); 1 and 2 are fixed by both ops.
        let a = alg(3, &[("f", &[1, 1, 2]), ("g", &[2, 1, 2])]);
        let analysis = gamma(&a).analyze();
        assert!(analysis.is_connected());
        assert_eq!(analysis.bottom_scc_per_component(), &[None]);
        assert!(matches!(outer_sections(&a), Err(Error::NoBottom)));
    }

    #[test]
    fn disconnected_digraph_is_detected() {
        let a = alg(4, &[("f", &[1, 0, 3, 2])]);
        let analysis = gamma(&a).analyze();
        assert_eq!(analysis.connected_components().num_classes(), 2);
        assert!(matches!(outer_sections(&a), Err(Error::NotConnected)));
    }

    #[test]
    fn all_bijections_collapse_sccs_to_components() {
        let a = alg(6, &[("f", &[1, 2, 0, 4, 3, 5]), ("g", &[0, 1, 2, 3, 4, 5])]);
        let analysis = gamma(&a).analyze();
        assert_eq!(
            analysis.sccs().blocks(),
            analysis.connected_components().blocks()
        );
    }

    #[test]
    fn chain_outer_section_is_the_two_top_vertices() {
        let sections = outer_sections(&chain()).unwrap();
        assert_eq!(sections.len(), 1);
        assert_eq!(sections[0].vertices(), &[1, 2]);
        assert_eq!(sections[0].edges(), &[(2, 1, 0)]);
        let digraph = sections[0].to_digraph();
        assert_eq!(digraph.vertex_count(), 2);
        assert_eq!(digraph.edges(), &[(1, 0)]);
    }

    #[test]
    fn cycle_has_zero_outer_sections() {
        let sections = outer_sections(&alg(4, &[("c", &[1, 2, 3, 0])])).unwrap();
        assert!(sections.is_empty());
    }

    #[test]
    fn deep_tree_splits_into_several_sections() {
        // Star into 0: 1 -> 0, 2 -> 0, 3 -> 1 under f; bottom is {0};
        // sections are {1, 3} and {2}.
        let a = alg(4, &[("f", &[0, 0, 0, 1])]);
        let sections = outer_sections(&a).unwrap();
        assert_eq!(sections.len(), 2);
        assert_eq!(sections[0].vertices(), &[1, 3]);
        assert_eq!(sections[1].vertices(), &[2]);
    }

    #[test]
    fn predecessor_profile_counts_strict_preds() {
        let digraph = gamma(&chain());
        // 0 <- 1 only (the loop at 0 is not strict), 1 <- 2, 2 <- nothing.
        assert_eq!(digraph.predecessor_profile("f").unwrap(), vec![1, 1, 0]);
        assert!(matches!(
            digraph.predecessor_profile("nope"),
            Err(Error::UnknownOp(_))
        ));
    }

    #[test]
    fn dot_output_is_stable() {
        let dot = gamma(&chain()).to_dot();
        assert_eq!(
            dot,
            "digraph algebra {\n  0;\n  1;\n  2;\n  0 -> 0 [label=f];\n  1 -> 0 [label=f];\n  2 -> 1 [label=f];\n}\n"
        );
    }

    #[test]
    fn scc_oracle_on_a_known_digraph() {
        // Two 2-cycles joined by a one-way edge: {0,1} -> {2,3}.
        let a = alg(4, &[("f", &[1, 0, 3, 2]), ("g", &[0, 2, 2, 3])]);
        let analysis = gamma(&a).analyze();
        assert_eq!(analysis.sccs().blocks(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(analysis.top_sccs(), &[0]);
        assert!(analysis.scc_reaches(0, 1));
        assert!(!analysis.scc_reaches(1, 0));
        assert_eq!(analysis.bottom_scc_per_component(), &[Some(1)]);
    }
}
