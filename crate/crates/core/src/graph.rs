//! Finite simple vertex-weighted graphs and the named families used to model
//! correlation experiments.
//!
//! Adjacency is stored as one dense bitset row per vertex. Graphs are
//! immutable once built; every "modifying" operation returns a new graph.

use crate::rational::{self, Rational};
use fixedbitset::FixedBitSet;
use num_traits::{One, Signed};
use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex index {index} out of range for a graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("negative weight {weight} on vertex {vertex}")]
    NegativeWeight { vertex: usize, weight: String },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("circulant needs at least 3 vertices, got {0}")]
    CirculantTooSmall(usize),
    #[error("circulant offset set is empty")]
    EmptyOffsets,
    #[error("circulant offset {offset} outside 1..={max}")]
    OffsetOutOfRange { offset: usize, max: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
    weights: Vec<Rational>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate and reversed pairs collapse to
    /// one edge. Missing weights default to 1.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        weights: Option<Vec<Rational>>,
    ) -> Result<Self, GraphError> {
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in edges {
            for index in [u, v] {
                if index >= n {
                    return Err(GraphError::IndexOutOfRange { index, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        let weights = match weights {
            None => vec![Rational::one(); n],
            Some(w) => {
                if w.len() != n {
                    return Err(GraphError::WeightCount {
                        expected: n,
                        got: w.len(),
                    });
                }
                if let Some((vertex, weight)) = w.iter().enumerate().find(|(_, w)| w.is_negative())
                {
                    return Err(GraphError::NegativeWeight {
                        vertex,
                        weight: rational::format(weight),
                    });
                }
                w
            }
        };
        Ok(Self {
            rows,
            weights,
            labels: None,
        })
    }

    fn from_rows(
        rows: Vec<FixedBitSet>,
        weights: Vec<Rational>,
        labels: Option<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(rows.len(), weights.len());
        Self {
            rows,
            weights,
            labels,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_rows(
            vec![FixedBitSet::with_capacity(n); n],
            vec![Rational::one(); n],
            None,
        )
    }

    pub fn complete(n: usize) -> Self {
        let rows = (0..n)
            .map(|v| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert_range(..);
                row.remove(v);
                row
            })
            .collect();
        Self::from_rows(rows, vec![Rational::one(); n], None)
    }

    /// Circulant graph: vertex `i` adjacent to `i ± d (mod n)` for each offset `d`.
    pub fn circulant(n: usize, offsets: &[usize]) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::CirculantTooSmall(n));
        }
        if offsets.is_empty() {
            return Err(GraphError::EmptyOffsets);
        }
        let max = n / 2;
        let mut edges = Vec::with_capacity(n * offsets.len());
        for &d in offsets {
            if d == 0 || d > max {
                return Err(GraphError::OffsetOutOfRange { offset: d, max });
            }
            edges.extend((0..n).map(|i| (i, (i + d) % n)));
        }
        Self::new(n, &edges, None)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        Self::circulant(n, &[1])
    }

    /// Möbius ladder `M_m` on `2m` vertices, realized as `Ci_{2m}(1, m)`.
    pub fn mobius_ladder(m: usize) -> Result<Self, GraphError> {
        Self::circulant(2 * m, &[1, m])
    }

    /// Prism `Y_m` on `2m` vertices, realized as `Ci_{2m}(2, m)`. This is the
    /// ladder `C_m × K_2` only for odd `m`.
    pub fn prism(m: usize) -> Result<Self, GraphError> {
        Self::circulant(2 * m, &[2, m])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.vertex_count() {
            return Err(GraphError::LabelCount {
                expected: self.vertex_count(),
                got: labels.len(),
            });
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self, GraphError> {
        let g = Self::new(self.vertex_count(), &[], Some(weights))?;
        self.weights = g.weights;
        Ok(self)
    }

    /// Copy of this graph with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        let n = self.vertex_count();
        for index in [u, v] {
            if index >= n {
                return Err(GraphError::IndexOutOfRange { index, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = self.clone();
        g.rows[u].insert(v);
        g.rows[v].insert(u);
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.rows.len() && self.rows[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, row) in self.rows.iter().enumerate() {
            out.extend(row.ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Non-adjacent distinct pairs `(u, v)`, `u < v`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            out.extend(
                (u + 1..n)
                    .filter(|&v| !self.rows[u].contains(v))
                    .map(|v| (u, v)),
            );
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn weight(&self, v: usize) -> &Rational {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(One::is_one)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// Label of `v`, falling back to its index.
    pub fn display_name(&self, v: usize) -> String {
        self.label(v).map_or_else(|| v.to_string(), str::to_string)
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && self.has_edge(u, v))
        })
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && !self.has_edge(u, v))
        })
    }

    pub fn complement(&self) -> Self {
        let n = self.vertex_count();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(v, row)| {
                let mut c = row.clone();
                c.toggle_range(..);
                c.remove(v);
                debug_assert_eq!(c.len(), n);
                c
            })
            .collect();
        Self::from_rows(rows, self.weights.clone(), self.labels.clone())
    }

    /// OR (disjunctive) product: `(g, h) ~ (g', h')` iff `g ~ g'` or `h ~ h'`.
    /// Vertex `(g, h)` has index `g * |V(H)| + h` and weight `w(g) w(h)`.
    pub fn or_product(&self, other: &Graph) -> Self {
        let (n, m) = (self.vertex_count(), other.vertex_count());
        let mut rows = vec![FixedBitSet::with_capacity(n * m); n * m];
        for g in 0..n {
            for h in 0..m {
                let a = g * m + h;
                for g2 in 0..n {
                    for h2 in 0..m {
                        let b = g2 * m + h2;
                        if a != b && (self.has_edge(g, g2) || other.has_edge(h, h2)) {
                            rows[a].insert(b);
                        }
                    }
                }
            }
        }
        let weights = (0..n * m)
            .map(|a| &self.weights[a / m] * &other.weights[a % m])
            .collect();
        let labels = match (&self.labels, &other.labels) {
            (Some(l1), Some(l2)) => Some(
                (0..n * m)
                    .map(|a| format!("({},{})", l1[a / m], l2[a % m]))
                    .collect(),
            ),
            _ => None,
        };
        Self::from_rows(rows, weights, labels)
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        let n = self.vertex_count();
        if let Some(&index) = vertices.iter().find(|&&v| v >= n) {
            return Err(GraphError::IndexOutOfRange { index, n });
        }
        let k = vertices.len();
        let mut rows = vec![FixedBitSet::with_capacity(k); k];
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if self.has_edge(u, v) {
                    rows[i].insert(j);
                }
            }
        }
        let weights = vertices.iter().map(|&v| self.weights[v].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| vertices.iter().map(|&v| l[v].clone()).collect::<Vec<_>>());
        if let Some(l) = &labels {
            let distinct: BTreeSet<&String> = l.iter().collect();
            if distinct.len() != l.len() {
                let dup = l
                    .iter()
                    .find(|x| l.iter().filter(|y| y == x).count() > 1)
                    .cloned()
                    .unwrap_or_default();
                return Err(GraphError::DuplicateLabel(dup));
            }
        }
        Ok(Self::from_rows(rows, weights, labels))
    }

    /// Renders the graph as an undirected DOT document. Edges listed in
    /// `highlight` (either orientation) get a `color=green` attribute.
    pub fn to_dot(&self, highlight: Option<&HashSet<(usize, usize)>>) -> String {
        let mut out = String::from("graph exclusivity {\n  node [shape=circle];\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  {v} [label={}];", dot_quote(&self.display_name(v)));
        }
        for (u, v) in self.edges() {
            let lit = highlight.is_some_and(|h| h.contains(&(u, v)) || h.contains(&(v, u)));
            if lit {
                let _ = writeln!(out, "  {u} -- {v} [color=green, penwidth=2];");
            } else {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn dot_quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            _ => q.push(c),
        }
    }
    q.push('"');
    q
}

/// Block-diagonal union of several graphs with the offsets needed to map a
/// union vertex back to its source graph.
#[derive(Debug, Clone)]
pub struct DisjointUnion {
    pub graph: Graph,
    pub offsets: Vec<usize>,
}

impl DisjointUnion {
    /// `(part index, local index)` of union vertex `v`.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        let part = self.offsets.partition_point(|&o| o <= v) - 1;
        (part, v - self.offsets[part])
    }
}

pub fn disjoint_union(graphs: &[&Graph]) -> DisjointUnion {
    let total: usize = graphs.iter().map(|g| g.vertex_count()).sum();
    let mut rows = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut offsets = Vec::with_capacity(graphs.len());
    let all_labelled = graphs.iter().all(|g| g.labels.is_some());
    let mut labels = Vec::new();
    let mut offset = 0;
    for (p, g) in graphs.iter().enumerate() {
        offsets.push(offset);
        for v in 0..g.vertex_count() {
            let mut row = FixedBitSet::with_capacity(total);
            for u in g.rows[v].ones() {
                row.insert(offset + u);
            }
            rows.push(row);
            weights.push(g.weights[v].clone());
            if all_labelled {
                labels.push(format!("{p}:{}", g.labels.as_ref().unwrap()[v]));
            }
        }
        offset += g.vertex_count();
    }
    let labels = (all_labelled && !graphs.is_empty()).then_some(labels);
    DisjointUnion {
        graph: Graph::from_rows(rows, weights, labels),
        offsets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_graph(n: usize, bits: &[bool]) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits[k % bits.len()] {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::new(n, &edges, None).unwrap()
    }

    fn assert_simple(g: &Graph) {
        for u in 0..g.vertex_count() {
            assert!(!g.has_edge(u, u));
            for v in 0..g.vertex_count() {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn make_graph_examples() {
        let g = Graph::new(0, &[], None).unwrap();
        assert_eq!(g.vertex_count(), 0);
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (2, 0)], None).unwrap();
        assert_eq!(k3, Graph::complete(3));
        let k2 = Graph::new(2, &[(0, 1), (1, 0)], None).unwrap();
        assert_eq!(k2.edge_count(), 1);
    }

    #[test]
    fn make_graph_errors() {
        assert_eq!(
            Graph::new(2, &[(0, 2)], None),
            Err(GraphError::IndexOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(Graph::new(2, &[(1, 1)], None), Err(GraphError::SelfLoop(1)));
        assert!(matches!(
            Graph::new(2, &[], Some(vec![rational::int(1), rational::int(-1)])),
            Err(GraphError::NegativeWeight { vertex: 1, .. })
        ));
        assert!(matches!(
            Graph::empty(2).with_labels(vec!["a".into(), "a".into()]),
            Err(GraphError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn circulant_families() {
        let c5 = Graph::circulant(5, &[1]).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!((0..5).all(|v| c5.degree(v) == 2));

        let m4 = Graph::mobius_ladder(4).unwrap();
        assert_eq!((m4.vertex_count(), m4.edge_count()), (8, 12));
        assert!((0..8).all(|v| m4.degree(v) == 3));

        let y5 = Graph::prism(5).unwrap();
        assert_eq!((y5.vertex_count(), y5.edge_count()), (10, 15));
        assert!((0..10).all(|v| y5.degree(v) == 3));

        assert_eq!(Graph::circulant(6, &[1, 2, 3]).unwrap(), Graph::complete(6));
        assert!(matches!(
            Graph::circulant(6, &[4]),
            Err(GraphError::OffsetOutOfRange { offset: 4, max: 3 })
        ));
        assert!(Graph::circulant(2, &[1]).is_err());
        assert!(Graph::circulant(5, &[]).is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(4).complement(), Graph::empty(4));
        assert_eq!(Graph::empty(3).complement(), Graph::complete(3));
        // C5 is self-complementary under i -> 2i mod 5.
        let c5 = Graph::cycle(5).unwrap();
        let cc = c5.complement();
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(c5.has_edge(u, v), cc.has_edge(2 * u % 5, 2 * v % 5));
            }
        }
    }

    #[test]
    fn disjoint_union_examples() {
        let c5 = Graph::cycle(5).unwrap();
        let u = disjoint_union(&[&c5, &c5]);
        assert_eq!((u.graph.vertex_count(), u.graph.edge_count()), (10, 10));
        assert!(!u.graph.has_edge(4, 5));
        assert_eq!(u.locate(7), (1, 2));

        let k2 = Graph::complete(2);
        let u = disjoint_union(&[&k2, &Graph::empty(1)]);
        assert_eq!((u.graph.vertex_count(), u.graph.edge_count()), (3, 1));

        let m4 = Graph::mobius_ladder(4).unwrap();
        let u = disjoint_union(&[&m4, &m4, &m4]);
        assert_eq!((u.graph.vertex_count(), u.graph.edge_count()), (24, 36));
    }

    #[test]
    fn or_product_examples() {
        assert_eq!(
            Graph::complete(2).or_product(&Graph::complete(2)),
            Graph::complete(4)
        );
        assert_eq!(
            Graph::empty(2).or_product(&Graph::empty(2)),
            Graph::empty(4)
        );
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.or_product(&c5).vertex_count(), 25);
    }

    #[test]
    fn induced_subgraph_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(k5.induced_subgraph(&[0, 1, 2]).unwrap(), Graph::complete(3));
        let c5 = Graph::cycle(5).unwrap();
        let path = c5.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(path.edges(), vec![(0, 1), (1, 2)]);
        let y5 = Graph::prism(5).unwrap();
        let outer = y5.induced_subgraph(&[0, 2, 4, 6, 8]).unwrap();
        assert_eq!(outer, Graph::cycle(5).unwrap());
        assert!(c5.induced_subgraph(&[5]).is_err());
    }

    #[test]
    fn dot_examples() {
        let dot = Graph::empty(1).to_dot(None);
        assert!(dot.contains("0 [label=\"0\"]"));
        assert!(!dot.contains("--"));
        let dot = Graph::complete(2).to_dot(None);
        assert_eq!(dot.matches("--").count(), 1);
        let hl: HashSet<_> = [(1, 0)].into_iter().collect();
        let dot = Graph::complete(3).to_dot(Some(&hl));
        assert_eq!(dot.matches("color=green").count(), 1);
    }

    #[test]
    fn dot_escapes_labels() {
        let g = Graph::empty(1).with_labels(vec!["a\"b".into()]).unwrap();
        assert!(g.to_dot(None).contains(r#"label="a\"b""#));
    }

    proptest! {
        #[test]
        fn constructors_are_simple(n in 1usize..12, bits in proptest::collection::vec(any::<bool>(), 1..80)) {
            let g = random_graph(n, &bits);
            assert_simple(&g);
            assert_simple(&g.complement());
            prop_assert_eq!(g.complement().complement(), g.clone());
            let h = random_graph((n % 4) + 1, &bits);
            assert_simple(&g.or_product(&h));
            let u = disjoint_union(&[&g, &h]);
            prop_assert_eq!(u.graph.vertex_count(), g.vertex_count() + h.vertex_count());
            prop_assert_eq!(u.graph.edge_count(), g.edge_count() + h.edge_count());
        }

        #[test]
        fn circulant_is_regular(n in 3usize..=50, raw in proptest::collection::btree_set(1usize..=25, 1..4)) {
            let offsets: Vec<usize> = raw.into_iter().filter(|&d| d <= n / 2).collect();
            prop_assume!(!offsets.is_empty());
            let g = Graph::circulant(n, &offsets).unwrap();
            assert_simple(&g);
            let residues: BTreeSet<usize> = offsets
                .iter()
                .flat_map(|&d| [d % n, (n - d) % n])
                .collect();
            for v in 0..n {
                prop_assert_eq!(g.degree(v), residues.len());
            }
        }

        #[test]
        fn or_product_edge_count_matches_pair_scan(
            n in 1usize..=6, m in 1usize..=6,
            bits in proptest::collection::vec(any::<bool>(), 15),
            bits2 in proptest::collection::vec(any::<bool>(), 15),
        ) {
            let g = random_graph(n, &bits);
            let h = random_graph(m, &bits2);
            let p = g.or_product(&h);
            // Unordered product pairs that are NOT adjacent: both coordinates
            // non-adjacent-or-equal, minus the diagonal.
            let closed = |x: &Graph| {
                let k = x.vertex_count();
                (0..k).flat_map(|a| (0..k).map(move |b| (a, b)))
                    .filter(|&(a, b)| !x.has_edge(a, b))
                    .count()
            };
            let total = n * m;
            let non_adjacent_ordered = closed(&g) * closed(&h) - total;
            prop_assert_eq!(p.edge_count(), total * (total - 1) / 2 - non_adjacent_ordered / 2);
        }
    }
}
