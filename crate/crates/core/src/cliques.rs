//! Exact clique machinery: maximal-clique enumeration, maximum weight clique /
//! independent set, and verification of fractional clique covers.

use crate::graph::Graph;
use crate::rational::{self, Rational};
use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;

pub const DEFAULT_CLIQUE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliqueError {
    #[error("maximal clique enumeration stopped after {reached} cliques (limit {limit})")]
    Overflow { reached: usize, limit: usize },
    #[error("clique limit must be positive")]
    ZeroLimit,
}

/// A list of cliques of some graph. When `complete` is set the list is exactly
/// the set of maximal cliques, each sorted, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    pub cliques: Vec<Vec<usize>>,
    pub complete: bool,
}

/// Enumerates all maximal cliques with pivoting Bron–Kerbosch. The pivot is
/// the vertex of `P ∪ X` with the most neighbours in `P` (smallest index on
/// ties).
pub fn maximal_cliques(g: &Graph, limit: usize) -> Result<CliqueSet, CliqueError> {
    if limit == 0 {
        return Err(CliqueError::ZeroLimit);
    }
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n > 0 {
        let mut p = FixedBitSet::with_capacity(n);
        p.insert_range(..);
        let x = FixedBitSet::with_capacity(n);
        let mut r = Vec::new();
        bron_kerbosch(g, &mut r, p, x, &mut out, limit)?;
    }
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(CliqueSet {
        cliques: out,
        complete: true,
    })
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> Result<(), CliqueError> {
    if p.is_clear() {
        if x.is_clear() {
            if out.len() == limit {
                return Err(CliqueError::Overflow {
                    reached: out.len(),
                    limit,
                });
            }
            out.push(r.clone());
        }
        return Ok(());
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| (g.neighbors(u).intersection_count(&p), std::cmp::Reverse(u)))
        .expect("P is nonempty");
    let mut candidates = p.clone();
    candidates.difference_with(g.neighbors(pivot));
    for v in candidates.ones() {
        let nv = g.neighbors(v);
        let mut p2 = p.clone();
        p2.intersect_with(nv);
        let mut x2 = x.clone();
        x2.intersect_with(nv);
        r.push(v);
        bron_kerbosch(g, r, p2, x2, out, limit)?;
        r.pop();
        p.remove(v);
        x.insert(v);
    }
    Ok(())
}

/// Scales nonnegative rationals to integers with a common denominator.
fn integer_weights(weights: &[Rational]) -> (Vec<u128>, BigInt) {
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<u128> = weights
        .iter()
        .map(|w| {
            assert!(!w.is_negative(), "negative vertex weight");
            (w.numer() * (&lcm / w.denom()))
                .to_u128()
                .expect("scaled vertex weight does not fit in 128 bits")
        })
        .collect();
    scaled
        .iter()
        .try_fold(0u128, |acc, &w| acc.checked_add(w))
        .expect("total scaled weight does not fit in 128 bits");
    (scaled, lcm)
}

/// Branch-and-bound maximum weight clique with greedy colouring bounds.
struct CliqueSearch<'a> {
    adj: &'a [FixedBitSet],
    w: &'a [u128],
    best: u128,
    best_set: Vec<usize>,
    current: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Orders `p` by greedy colour classes; `bounds[k]` caps the weight of any
    /// clique drawn from `order[..=k]`.
    fn colour_sort(&self, p: &FixedBitSet) -> (Vec<usize>, Vec<u128>) {
        let mut uncoloured = p.clone();
        let mut order = Vec::with_capacity(p.count_ones(..));
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut total = 0u128;
        while !uncoloured.is_clear() {
            let mut q = uncoloured.clone();
            let start = order.len();
            let mut class_max = 0u128;
            while let Some(v) = q.minimum() {
                q.remove(v);
                q.difference_with(&self.adj[v]);
                uncoloured.remove(v);
                order.push(v);
                class_max = class_max.max(self.w[v]);
            }
            total += class_max;
            bounds.extend((start..order.len()).map(|_| total));
        }
        (order, bounds)
    }

    fn expand(&mut self, weight: u128, mut p: FixedBitSet) {
        let (order, bounds) = self.colour_sort(&p);
        for k in (0..order.len()).rev() {
            if weight + bounds[k] <= self.best && !(self.best_set.is_empty() && self.best == 0) {
                return;
            }
            let v = order[k];
            let w = weight + self.w[v];
            self.current.push(v);
            let mut next = p.clone();
            next.intersect_with(&self.adj[v]);
            if next.is_clear() {
                if w > self.best || self.best_set.is_empty() {
                    self.best = w;
                    self.best_set = self.current.clone();
                }
            } else {
                self.expand(w, next);
            }
            self.current.pop();
            p.remove(v);
        }
    }
}

/// Maximum weight clique of `g` under `weights` (one nonnegative rational per
/// vertex). Returns the sorted clique and its exact weight. Deterministic: the
/// first optimum found in the fixed search order wins.
pub fn max_weight_clique(g: &Graph, weights: &[Rational]) -> (Vec<usize>, Rational) {
    let n = g.vertex_count();
    assert_eq!(weights.len(), n, "one weight per vertex");
    if n == 0 {
        return (Vec::new(), Rational::zero());
    }
    let (w, scale) = integer_weights(weights);
    // Relabel by nonincreasing weight, then degree, so low indices are tried
    // last by the colouring order and high-value vertices get small bounds.
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&v| (std::cmp::Reverse(w[v]), std::cmp::Reverse(g.degree(v)), v));
    let mut inv = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        inv[v] = i;
    }
    let adj: Vec<FixedBitSet> = perm
        .iter()
        .map(|&v| {
            let mut row = FixedBitSet::with_capacity(n);
            for u in g.neighbors(v).ones() {
                row.insert(inv[u]);
            }
            row
        })
        .collect();
    let pw: Vec<u128> = perm.iter().map(|&v| w[v]).collect();
    let mut search = CliqueSearch {
        adj: &adj,
        w: &pw,
        best: 0,
        best_set: Vec::new(),
        current: Vec::new(),
    };
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    search.expand(0, p);
    let mut clique: Vec<usize> = search.best_set.iter().map(|&i| perm[i]).collect();
    clique.sort_unstable();
    let value = rational::sum(clique.iter().map(|&v| &weights[v]));
    debug_assert_eq!(value, Rational::new(BigInt::from(search.best), scale));
    (clique, value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    pub vertices: Vec<usize>,
    pub value: Rational,
}

/// Maximum weight independent set (the independence number for unit weights),
/// solved as a maximum weight clique of the complement.
pub fn max_independent_set(g: &Graph) -> IndependentSet {
    let (vertices, value) = max_weight_clique(&g.complement(), g.weights());
    assert!(
        g.is_independent(&vertices),
        "branch and bound returned a non-independent set"
    );
    IndependentSet { vertices, value }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverEntry {
    pub clique: Vec<usize>,
    pub weight: Rational,
}

/// A fractional clique cover: nonnegative weights on cliques such that each
/// vertex `v` is covered with total weight at least `w(v)`. Its total weight
/// bounds the fractional packing number from above.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cover {
    pub entries: Vec<CoverEntry>,
}

impl Cover {
    pub fn new(entries: Vec<CoverEntry>) -> Self {
        Self { entries }
    }

    pub fn unit(cliques: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Self::new(
            cliques
                .into_iter()
                .map(|clique| CoverEntry {
                    clique,
                    weight: Rational::one(),
                })
                .collect(),
        )
    }

    pub fn total_weight(&self) -> Rational {
        rational::sum(self.entries.iter().map(|e| &e.weight))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no vertex is labelled {0:?}")]
pub struct UnknownLabel(pub String);

fn label_index(g: &Graph) -> HashMap<&str, usize> {
    (0..g.vertex_count())
        .filter_map(|v| g.label(v).map(|l| (l, v)))
        .collect()
}

/// A cover whose cliques name vertices by label, as stored in certificate
/// files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelledCover {
    pub cliques: Vec<(Vec<String>, Rational)>,
}

impl LabelledCover {
    pub fn resolve(&self, g: &Graph) -> Result<Cover, UnknownLabel> {
        let index = label_index(g);
        let entries = self
            .cliques
            .iter()
            .map(|(labels, weight)| {
                let clique = labels
                    .iter()
                    .map(|l| {
                        index
                            .get(l.as_str())
                            .copied()
                            .ok_or_else(|| UnknownLabel(l.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CoverEntry {
                    clique,
                    weight: weight.clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Cover::new(entries))
    }

    pub fn from_cover(g: &Graph, cover: &Cover) -> Self {
        Self {
            cliques: cover
                .entries
                .iter()
                .map(|e| {
                    (
                        e.clique.iter().map(|&v| g.display_name(v)).collect(),
                        e.weight.clone(),
                    )
                })
                .collect(),
        }
    }
}

/// Per-vertex values from `(label, value)` pairs; unnamed vertices get 0 and a
/// repeated label accumulates.
pub fn resolve_point(
    g: &Graph,
    values: &[(String, Rational)],
) -> Result<Vec<Rational>, UnknownLabel> {
    let index = label_index(g);
    let mut out = vec![Rational::zero(); g.vertex_count()];
    for (label, value) in values {
        let v = *index
            .get(label.as_str())
            .ok_or_else(|| UnknownLabel(label.clone()))?;
        out[v] += value;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    IndexOutOfRange {
        entry: usize,
        index: usize,
    },
    NegativeWeight {
        entry: usize,
    },
    NotAClique {
        entry: usize,
        u: usize,
        v: usize,
    },
    Uncovered {
        vertex: usize,
        covered: Rational,
        needed: Rational,
    },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IndexOutOfRange { entry, index } => {
                write!(
                    f,
                    "cover entry {entry} names vertex {index}, which does not exist"
                )
            }
            Self::NegativeWeight { entry } => write!(f, "cover entry {entry} has negative weight"),
            Self::NotAClique { entry, u, v } => {
                write!(
                    f,
                    "cover entry {entry} is not a clique: {u} and {v} are not adjacent"
                )
            }
            Self::Uncovered {
                vertex,
                covered,
                needed,
            } => write!(
                f,
                "vertex {vertex} covered with {} but needs {}",
                rational::format(covered),
                rational::format(needed)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCheck {
    pub valid: bool,
    pub bound: Rational,
    pub violation: Option<CoverViolation>,
}

/// Checks that every entry is a clique with nonnegative weight and that every
/// vertex is covered at least up to its own weight. `bound` is the total cover
/// weight whether or not the cover is valid.
pub fn verify_cover(g: &Graph, cover: &Cover) -> CoverCheck {
    let n = g.vertex_count();
    let bound = cover.total_weight();
    let fail = |violation| CoverCheck {
        valid: false,
        bound: bound.clone(),
        violation: Some(violation),
    };
    let mut covered = vec![Rational::zero(); n];
    for (entry, e) in cover.entries.iter().enumerate() {
        if let Some(&index) = e.clique.iter().find(|&&v| v >= n) {
            return fail(CoverViolation::IndexOutOfRange { entry, index });
        }
        if e.weight.is_negative() {
            return fail(CoverViolation::NegativeWeight { entry });
        }
        for (i, &u) in e.clique.iter().enumerate() {
            if let Some(&v) = e.clique[i + 1..].iter().find(|&&v| !g.has_edge(u, v)) {
                return fail(CoverViolation::NotAClique { entry, u, v });
            }
        }
        for &v in &e.clique {
            covered[v] += &e.weight;
        }
    }
    for (vertex, c) in covered.into_iter().enumerate() {
        if &c < g.weight(vertex) {
            return fail(CoverViolation::Uncovered {
                vertex,
                covered: c,
                needed: g.weight(vertex).clone(),
            });
        }
    }
    CoverCheck {
        valid: true,
        bound,
        violation: None,
    }
}
