//! Fractional packing number α*(G): the clique-constrained LP
//!
//! ```text
//! maximise  Σ w(v)·x(v)   subject to   Σ_{v∈Q} x(v) ≤ 1  for every maximal clique Q,  x ≥ 0
//! ```
//!
//! solved exactly over the rationals. The optimal dual is a fractional clique
//! cover whose total weight equals the optimum.

use crate::cliques::{
    self, max_weight_clique, maximal_cliques, verify_cover, CliqueError, CliqueSet, Cover,
    CoverEntry, CoverViolation,
};
use crate::graph::Graph;
use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PackingError {
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error("feasible point has {got} values for a graph on {expected} vertices")]
    PointLength { expected: usize, got: usize },
    #[error("feasible point has a negative value at vertex {vertex}")]
    NegativeValue { vertex: usize },
    #[error("feasible point violates a clique constraint: clique {clique:?} carries {}", rational::format(.load))]
    InfeasiblePoint { clique: Vec<usize>, load: Rational },
    #[error("invalid cover: {0}")]
    InvalidCover(Box<CoverViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSolution {
    /// Optimal `x(v)` per vertex.
    pub values: Vec<Rational>,
    /// `Σ w(v)·x(v)`, i.e. α*(G).
    pub objective: Rational,
    /// Optimal dual: weights on maximal cliques covering each vertex to at
    /// least its own weight.
    pub dual_cover: Cover,
    /// Set when the dual cover checks out and its weight equals the objective.
    pub optimal: bool,
}

pub fn fractional_packing(g: &Graph) -> Result<PackingSolution, PackingError> {
    fractional_packing_with_limit(g, cliques::DEFAULT_CLIQUE_LIMIT)
}

pub fn fractional_packing_with_limit(
    g: &Graph,
    limit: usize,
) -> Result<PackingSolution, PackingError> {
    let cliques = maximal_cliques(g, limit)?;
    Ok(solve_clique_lp(g, &cliques))
}

/// Solves the packing LP over an explicit list of cliques. If the list omits
/// maximal cliques the result is only an upper bound on α*, and `optimal` may
/// still be set since the returned cover is a valid certificate.
pub fn solve_clique_lp(g: &Graph, cliques: &CliqueSet) -> PackingSolution {
    let n = g.vertex_count();
    let rows: Vec<Vec<Rational>> = cliques
        .cliques
        .iter()
        .map(|q| {
            let mut row = vec![Rational::zero(); n];
            for &v in q {
                row[v] = Rational::one();
            }
            row
        })
        .collect();
    let lp = Simplex::maximise(
        rows,
        vec![Rational::one(); cliques.cliques.len()],
        g.weights(),
    );
    let (values, duals, objective) = lp.solve();
    let dual_cover = Cover::new(
        cliques
            .cliques
            .iter()
            .zip(duals)
            .filter(|(_, y)| y.is_positive())
            .map(|(q, weight)| CoverEntry {
                clique: q.clone(),
                weight,
            })
            .collect(),
    );
    let check = verify_cover(g, &dual_cover);
    let optimal = check.valid && check.bound == objective;
    debug_assert!(optimal, "simplex produced a non-optimal certificate");
    PackingSolution {
        values,
        objective,
        dual_cover,
        optimal,
    }
}

/// Result of [`symmetric_packing`]: a point constant on the group's orbits
/// and a cover made of the group images of the reduced dual cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPacking {
    pub values: Vec<Rational>,
    pub value: Rational,
    pub cover: Cover,
}

/// Orbits of the group generated by `group` (vertex permutations), each
/// sorted, ordered by smallest member.
pub fn orbits(n: usize, group: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut orbit_of = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![v];
        orbit_of[v] = id;
        let mut i = 0;
        while i < members.len() {
            for p in group {
                let w = p[members[i]];
                if orbit_of[w] == usize::MAX {
                    orbit_of[w] = id;
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// α* restricted to points that are constant on the orbits of `group`, a
/// list of vertex permutations closed under composition. Cutting planes:
/// maximise over the current clique rows, find the heaviest clique under the
/// result, add it (grown to a maximal clique) while it carries more than 1.
/// Starts from `seed`, plus a maximal clique through any vertex it misses.
///
/// The point always satisfies every clique constraint. The cover spreads
/// each dual weight evenly over the group images of its clique; when
/// `group` consists of automorphisms of the weighted graph it is a valid
/// cover with the same value, which proves the point optimal. Both claims
/// are cheap to check with [`packing_bounds`].
pub fn symmetric_packing(g: &Graph, group: &[Vec<usize>], seed: &[Vec<usize>]) -> SymmetricPacking {
    let n = g.vertex_count();
    assert!(
        group.iter().all(|p| p.len() == n),
        "permutations must act on every vertex"
    );
    let orbits = orbits(n, group);
    let mut orbit_of = vec![0; n];
    for (o, members) in orbits.iter().enumerate() {
        for &v in members {
            orbit_of[v] = o;
        }
    }
    let k = orbits.len();
    let row = |q: &[usize]| {
        let mut r = vec![Rational::zero(); k];
        for &v in q {
            r[orbit_of[v]] += Rational::one();
        }
        r
    };
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut covered = vec![false; n];
    let mut push = |rows: &mut Vec<Vec<Rational>>, covered: &mut [bool], mut q: Vec<usize>| {
        grow_to_maximal(g, &mut q);
        for &v in &q {
            covered[v] = true;
        }
        let r = row(&q);
        let fresh = !rows.contains(&r);
        if fresh {
            rows.push(r);
            cliques.push(q);
        }
        fresh
    };
    for q in seed {
        push(&mut rows, &mut covered, q.clone());
    }
    for v in 0..n {
        if !covered[v] {
            push(&mut rows, &mut covered, vec![v]);
        }
    }
    let objective: Vec<Rational> = orbits
        .iter()
        .map(|members| rational::sum(members.iter().map(|&v| g.weight(v))))
        .collect();
    loop {
        let lp = Simplex::maximise(rows.clone(), vec![Rational::one(); rows.len()], &objective);
        let (y, z, value) = lp.solve();
        let values: Vec<Rational> = (0..n).map(|v| y[orbit_of[v]].clone()).collect();
        let (q, load) = max_weight_clique(g, &values);
        // A violated clique never repeats an existing row: the LP solution
        // satisfies those.
        if load <= Rational::one() || !push(&mut rows, &mut covered, q) {
            let share = Rational::from_integer(group.len().into());
            let mut spread: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
            for (q, zq) in cliques.iter().zip(&z) {
                if zq.is_zero() {
                    continue;
                }
                for p in group {
                    let mut image: Vec<usize> = q.iter().map(|&v| p[v]).collect();
                    image.sort_unstable();
                    *spread.entry(image).or_insert_with(Rational::zero) += zq / &share;
                }
            }
            let cover = Cover::new(
                spread
                    .into_iter()
                    .map(|(clique, weight)| CoverEntry { clique, weight })
                    .collect(),
            );
            return SymmetricPacking {
                values,
                value,
                cover,
            };
        }
    }
}

fn grow_to_maximal(g: &Graph, q: &mut Vec<usize>) {
    for v in 0..g.vertex_count() {
        if !q.contains(&v) && q.iter().all(|&u| g.has_edge(u, v)) {
            q.push(v);
        }
    }
    q.sort_unstable();
}

/// Dense Tucker tableau for `max c·x, A x ≤ b, x ≥ 0` with `b ≥ 0`, so the
/// all-slack basis is feasible. Each row `i` reads
/// `basic_i = rhs_i − Σ_j a_ij · nonbasic_j`; the objective row reads
/// `z = value − Σ_j d_j · nonbasic_j`.
struct Simplex {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    d: Vec<Rational>,
    value: Rational,
    /// Variable ids: `0..n` are structural, `n..n+m` are slacks.
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    n: usize,
}

impl Simplex {
    fn maximise(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: &[Rational]) -> Self {
        let n = c.len();
        let m = a.len();
        assert!(b.iter().all(|x| !x.is_negative()));
        Self {
            a,
            rhs: b,
            d: c.iter().map(|x| -x).collect(),
            value: Rational::zero(),
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            n,
        }
    }

    /// Runs Bland's rule to optimality; returns primal values, constraint
    /// duals, and the optimum.
    fn solve(mut self) -> (Vec<Rational>, Vec<Rational>, Rational) {
        // Bounded: x ≤ 1 holds coordinatewise whenever every variable sits in
        // some constraint row, which the clique LP guarantees.
        while let Some(s) = self.entering() {
            let r = self.leaving(s).expect("packing LP is bounded");
            self.pivot(r, s);
        }
        let m = self.basic.len();
        let mut x = vec![Rational::zero(); self.n];
        for (r, &var) in self.basic.iter().enumerate() {
            if var < self.n {
                x[var] = self.rhs[r].clone();
            }
        }
        let mut y = vec![Rational::zero(); m];
        for (j, &var) in self.nonbasic.iter().enumerate() {
            if var >= self.n {
                y[var - self.n] = self.d[j].clone();
            }
        }
        (x, y, self.value)
    }

    fn entering(&self) -> Option<usize> {
        (0..self.d.len())
            .filter(|&j| self.d[j].is_negative())
            .min_by_key(|&j| self.nonbasic[j])
    }

    fn leaving(&self, s: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..self.a.len() {
            let p = &self.a[r][s];
            if !p.is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / p;
            let better = match &best {
                None => true,
                Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basic[r] < self.basic[*br]),
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.a[r][s].clone();
        let inv = p.recip();
        let width = self.d.len();
        for j in 0..width {
            if j != s && !self.a[r][j].is_zero() {
                self.a[r][j] = &self.a[r][j] * &inv;
            }
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        self.a[r][s] = inv.clone();
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.rhs[r].clone();

        let eliminate = |row: &mut Vec<Rational>, rhs: &mut Rational, f: Rational| {
            for j in 0..width {
                if j != s && !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
            *rhs -= &f * &pivot_rhs;
            row[s] = -(&f * &inv);
        };
        for i in 0..self.a.len() {
            if i == r || self.a[i][s].is_zero() {
                continue;
            }
            let f = self.a[i][s].clone();
            eliminate(&mut self.a[i], &mut self.rhs[i], f);
        }
        if !self.d[s].is_zero() {
            let f = self.d[s].clone();
            eliminate(&mut self.d, &mut self.value, f);
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingBounds {
    pub lower: Rational,
    pub upper: Rational,
}

/// Two-sided α* bounds without enumerating maximal cliques: the feasible point
/// gives `Σ w·x` from below, the cover gives its total weight from above.
///
/// Feasibility is checked exactly by computing the maximum `x`-weight clique,
/// which must not exceed 1.
pub fn packing_bounds(
    g: &Graph,
    feasible: &[Rational],
    cover: &Cover,
) -> Result<PackingBounds, PackingError> {
    let n = g.vertex_count();
    if feasible.len() != n {
        return Err(PackingError::PointLength {
            expected: n,
            got: feasible.len(),
        });
    }
    if let Some(vertex) = feasible.iter().position(|x| x.is_negative()) {
        return Err(PackingError::NegativeValue { vertex });
    }
    let check = verify_cover(g, cover);
    if let Some(v) = check.violation {
        return Err(PackingError::InvalidCover(Box::new(v)));
    }
    // Cheap screen on the certificate's own cliques before the exact search.
    for e in &cover.entries {
        let load = rational::sum(e.clique.iter().map(|&v| &feasible[v]));
        if load > Rational::one() {
            return Err(PackingError::InfeasiblePoint {
                clique: e.clique.clone(),
                load,
            });
        }
    }
    let (clique, load) = max_weight_clique(g, feasible);
    if load > Rational::one() {
        return Err(PackingError::InfeasiblePoint { clique, load });
    }
    let lower = feasible
        .iter()
        .zip(g.weights())
        .fold(Rational::zero(), |acc, (x, w)| acc + x * w);
    Ok(PackingBounds {
        lower,
        upper: check.bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::max_independent_set;
    use crate::graph::disjoint_union;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn alpha_star(g: &Graph) -> Rational {
        let sol = fractional_packing(g).unwrap();
        assert!(sol.optimal);
        sol.objective
    }

    fn from_bits(n: usize, bits: &[bool]) -> Graph {
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

    /// Vertex enumeration in floating point over every clique constraint (not
    /// just maximal ones) plus nonnegativity.
    fn vertex_enumeration_oracle(g: &Graph) -> f64 {
        let n = g.vertex_count();
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if set.len() >= 2 && g.is_clique(&set) {
                rows.push(((0..n).map(|v| f64::from(mask >> v & 1)).collect(), 1.0));
            }
        }
        for v in 0..n {
            let mut r = vec![0.0; n];
            r[v] = 1.0;
            rows.push((r.clone(), 1.0));
            rows.push((r.iter().map(|x| -x).collect(), 0.0));
        }
        let mut best = f64::NEG_INFINITY;
        let mut choose = vec![0usize; n];
        fn rec(
            k: usize,
            start: usize,
            choose: &mut Vec<usize>,
            rows: &[(Vec<f64>, f64)],
            best: &mut f64,
        ) {
            let n = choose.len();
            if k == n {
                let mut a: Vec<Vec<f64>> = choose
                    .iter()
                    .map(|&i| {
                        let mut r = rows[i].0.clone();
                        r.push(rows[i].1);
                        r
                    })
                    .collect();
                for c in 0..n {
                    let p = (c..n)
                        .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
                        .unwrap();
                    if a[p][c].abs() < 1e-9 {
                        return;
                    }
                    a.swap(c, p);
                    for r in 0..n {
                        if r != c {
                            let f = a[r][c] / a[c][c];
                            for j in c..=n {
                                a[r][j] -= f * a[c][j];
                            }
                        }
                    }
                }
                let x: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
                let feasible = rows
                    .iter()
                    .all(|(r, b)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-9);
                if feasible {
                    *best = best.max(x.iter().sum());
                }
                return;
            }
            for i in start..rows.len() {
                choose[k] = i;
                rec(k + 1, i + 1, choose, rows, best);
            }
        }
        rec(0, 0, &mut choose, &rows, &mut best);
        best
    }

    #[test]
    fn packing_examples() {
        assert_eq!(alpha_star(&Graph::cycle(5).unwrap()), ratio(5, 2));
        assert_eq!(alpha_star(&Graph::mobius_ladder(4).unwrap()), int(4));
        assert_eq!(alpha_star(&Graph::prism(5).unwrap()), int(5));
        assert_eq!(alpha_star(&Graph::empty(4)), int(4));
        assert_eq!(alpha_star(&Graph::complete(5)), int(1));
        assert_eq!(alpha_star(&Graph::empty(0)), int(0));
        // prism(3) is the triangular prism: two disjoint triangles cover it.
        assert_eq!(alpha_star(&Graph::prism(3).unwrap()), int(2));
    }

    #[test]
    fn solution_shape() {
        let sol = fractional_packing(&Graph::cycle(5).unwrap()).unwrap();
        assert!(sol.values.iter().all(|x| *x == ratio(1, 2)));
        assert_eq!(sol.dual_cover.total_weight(), ratio(5, 2));
        for q in maximal_cliques(&Graph::cycle(5).unwrap(), 100)
            .unwrap()
            .cliques
        {
            assert!(rational::sum(q.iter().map(|&v| &sol.values[v])) <= Rational::one());
        }
    }

    #[test]
    fn weighted_packing() {
        // A single heavy vertex: the bound must dominate α = 3.
        let g = Graph::new(1, &[], Some(vec![int(3)])).unwrap();
        assert_eq!(alpha_star(&g), int(3));
        let g = Graph::complete(3)
            .with_weights(vec![int(1), int(2), ratio(1, 2)])
            .unwrap();
        assert_eq!(alpha_star(&g), int(2));
        let c5 = Graph::cycle(5)
            .unwrap()
            .with_weights(vec![int(2); 5])
            .unwrap();
        assert_eq!(alpha_star(&c5), int(5));
    }

    #[test]
    fn clique_overflow_propagates() {
        let err = fractional_packing_with_limit(&Graph::cycle(9).unwrap(), 4).unwrap_err();
        assert!(matches!(
            err,
            PackingError::Clique(CliqueError::Overflow { .. })
        ));
    }

    #[test]
    fn bounds_examples() {
        let k3 = Graph::complete(3);
        let b = packing_bounds(
            &k3,
            &[ratio(1, 2), ratio(1, 2), int(0)],
            &Cover::unit([vec![0, 1, 2]]),
        )
        .unwrap();
        assert_eq!((b.lower, b.upper), (int(1), int(1)));

        let c5 = Graph::cycle(5).unwrap();
        let cover = Cover::new(
            [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]
                .iter()
                .map(|c| CoverEntry {
                    clique: c.to_vec(),
                    weight: ratio(1, 2),
                })
                .collect(),
        );
        let b = packing_bounds(&c5, &vec![ratio(1, 2); 5], &cover).unwrap();
        assert_eq!((b.lower, b.upper), (ratio(5, 2), ratio(5, 2)));
    }

    #[test]
    fn bounds_errors() {
        let c5 = Graph::cycle(5).unwrap();
        let cover = Cover::unit([vec![0, 1], vec![2, 3], vec![4, 0]]);
        let err = packing_bounds(&c5, &vec![ratio(2, 3); 5], &cover).unwrap_err();
        assert!(matches!(err, PackingError::InfeasiblePoint { .. }));
        let err = packing_bounds(&c5, &vec![int(0); 5], &Cover::unit([vec![0, 1]])).unwrap_err();
        assert!(
            matches!(err, PackingError::InvalidCover(v) if matches!(*v, CoverViolation::Uncovered { .. }))
        );
        let err = packing_bounds(&c5, &[int(0)], &cover).unwrap_err();
        assert!(matches!(
            err,
            PackingError::PointLength {
                expected: 5,
                got: 1
            }
        ));
        let mut x = vec![int(0); 5];
        x[3] = int(-1);
        assert!(matches!(
            packing_bounds(&c5, &x, &cover).unwrap_err(),
            PackingError::NegativeValue { vertex: 3 }
        ));
        // Violation outside the certificate's own cliques is still caught.
        let k3 = Graph::complete(3);
        let err = packing_bounds(
            &k3,
            &[ratio(1, 2), ratio(1, 2), ratio(1, 2)],
            &Cover::unit([vec![0, 1, 2]]),
        )
        .unwrap_err();
        assert!(matches!(err, PackingError::InfeasiblePoint { .. }));
    }

    #[test]
    fn symmetric_packing_on_rotated_cycles() {
        for n in 4..=9 {
            let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            let g = Graph::new(n, &edges, None).unwrap();
            let group: Vec<Vec<usize>> = (0..n)
                .map(|r| (0..n).map(|v| (v + r) % n).collect())
                .collect();
            let sol = symmetric_packing(&g, &group, &[]);
            assert_eq!(sol.value, ratio(n as i64, 2));
            assert!(sol.values.iter().all(|x| *x == ratio(1, 2)));
            let b = packing_bounds(&g, &sol.values, &sol.cover).unwrap();
            assert_eq!((b.lower, b.upper), (sol.value.clone(), sol.value));
        }
    }

    #[test]
    fn orbits_of_generated_group() {
        let swap = vec![1, 0, 2, 3, 4];
        let cycle = vec![0, 1, 3, 4, 2];
        assert_eq!(orbits(5, &[swap, cycle]), vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(orbits(2, &[]), vec![vec![0], vec![1]]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn symmetric_packing_with_trivial_group_is_alpha_star(
            n in 1usize..=10, bits in proptest::collection::vec(any::<bool>(), 1..50),
        ) {
            let g = from_bits(n, &bits);
            let sol = symmetric_packing(&g, &[(0..n).collect()], &[]);
            prop_assert_eq!(&sol.value, &alpha_star(&g));
            let b = packing_bounds(&g, &sol.values, &sol.cover).unwrap();
            prop_assert_eq!(b.lower, sol.value.clone());
            prop_assert_eq!(b.upper, sol.value);
        }

        #[test]
        fn matches_vertex_enumeration(n in 1usize..=5, bits in proptest::collection::vec(any::<bool>(), 1..20)) {
            let g = from_bits(n, &bits);
            let exact = rational::to_f64(&alpha_star(&g));
            let oracle = vertex_enumeration_oracle(&g);
            prop_assert!((exact - oracle).abs() < 1e-7, "{} vs {}", exact, oracle);
        }

        #[test]
        fn duality_and_sandwich(n in 1usize..=12, bits in proptest::collection::vec(any::<bool>(), 1..70)) {
            let g = from_bits(n, &bits);
            let sol = fractional_packing(&g).unwrap();
            prop_assert!(sol.optimal);
            prop_assert_eq!(&sol.dual_cover.total_weight(), &sol.objective);
            prop_assert!(max_independent_set(&g).value <= sol.objective);
            prop_assert!(sol.values.iter().all(|x| !x.is_negative() && *x <= Rational::one()));
        }

        #[test]
        fn additive_and_edge_monotone(
            n in 1usize..=8, m in 1usize..=8,
            bits in proptest::collection::vec(any::<bool>(), 1..30),
            bits2 in proptest::collection::vec(any::<bool>(), 1..30),
            pick in any::<prop::sample::Index>(),
        ) {
            let g = from_bits(n, &bits);
            let h = from_bits(m, &bits2);
            let u = disjoint_union(&[&g, &h]);
            prop_assert_eq!(alpha_star(&u.graph), alpha_star(&g) + alpha_star(&h));
            let non_edges = g.non_edges();
            if !non_edges.is_empty() {
                let (a, b) = non_edges[pick.index(non_edges.len())];
                prop_assert!(alpha_star(&g.with_edge(a, b).unwrap()) <= alpha_star(&g));
            }
        }
    }
}
