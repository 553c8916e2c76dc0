//! Monogamy verdicts for experiments run together.
//!
//! Sum-type experiments with classical bounds α(G_i) are monogamous when their
//! joint value cannot exceed Σ α(G_i). The exclusivity bound is α* of the union
//! graph (Theorem 1 checks α* ≤ Σα); the quantum bound is its Lovász number
//! (Theorem 2 checks ϑ ≤ Σα).

use crate::cliques::{
    max_independent_set, resolve_point, verify_cover, IndependentSet, LabelledCover, UnknownLabel,
    DEFAULT_CLIQUE_LIMIT,
};
use crate::events::{
    build_exclusivity_graph, union_scenario, EventsError, ExclusivityRule, Scenario,
};
use crate::graph::Graph;
use crate::packing::{
    fractional_packing, fractional_packing_with_limit, packing_bounds, PackingError,
    PackingSolution,
};
use crate::rational::{self, Rational};
use crate::theta::{lovasz_theta, ThetaError, ThetaResult};
use num_traits::Zero;

/// Default tolerance for calling ϑ equal to Σα.
pub const TIGHT_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonogamyError {
    #[error("need at least 2 experiments, got {0}")]
    TooFewParts(usize),
    #[error("building the exclusivity graph of part {part}: {source}")]
    PartGraph { part: usize, source: EventsError },
    #[error("building the union scenario: {0}")]
    Union(EventsError),
    #[error("fractional packing of the union: {0}")]
    UnionPacking(PackingError),
    #[error("checking the supplied certificates: {0}")]
    Certificate(PackingError),
    #[error("certificate names an event not in the union: {0:?}")]
    CertificateLabel(String),
    #[error("Lovász number of part {part}: {source}")]
    PartTheta { part: usize, source: ThetaError },
    #[error("Lovász number of the union: {0}")]
    UnionTheta(ThetaError),
    #[error("fractional packing: {0}")]
    Packing(PackingError),
    #[error("Lovász number: {0}")]
    Theta(ThetaError),
}

impl From<UnknownLabel> for MonogamyError {
    fn from(e: UnknownLabel) -> Self {
        Self::CertificateLabel(e.0)
    }
}

/// Outcome of a check whose evidence may be inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn as_option(self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::Undecided => None,
        }
    }
}

/// α, α* and ϑ of one graph. α* is `None` when the maximal cliques overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphNumbers {
    pub alpha: IndependentSet,
    pub alpha_star: Option<PackingSolution>,
    pub theta: Option<ThetaResult>,
}

impl GraphNumbers {
    /// Computes α always, α* when `clique_limit` is given and not hit, and ϑ
    /// when `theta_tol` is given.
    pub fn compute(
        g: &Graph,
        clique_limit: Option<usize>,
        theta_tol: Option<f64>,
    ) -> Result<Self, ThetaError> {
        let alpha = max_independent_set(g);
        let alpha_star =
            clique_limit.and_then(|limit| fractional_packing_with_limit(g, limit).ok());
        let theta = theta_tol.map(|tol| lovasz_theta(g, tol)).transpose()?;
        Ok(Self {
            alpha,
            alpha_star,
            theta,
        })
    }

    /// The strict separation α < ϑ < α*; see [`is_testable`].
    pub fn testable(&self, tol: f64) -> Verdict {
        match (&self.alpha_star, &self.theta) {
            (Some(p), Some(t)) => testable_from(&self.alpha.value, &p.objective, t, tol),
            _ => Verdict::Undecided,
        }
    }
}

fn testable_from(
    alpha: &Rational,
    alpha_star: &Rational,
    theta: &ThetaResult,
    tol: f64,
) -> Verdict {
    if !theta.converged {
        return Verdict::Undecided;
    }
    let separated = rational::to_f64(alpha) + tol < theta.low
        && theta.high < rational::to_f64(alpha_star) - tol;
    if separated {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// Whether classical, quantum and exclusivity bounds all differ on `g`:
/// α + tol < ϑ_low and ϑ_high < α* − tol. Undecided when the SDP does not
/// converge to `tol`.
pub fn is_testable(g: &Graph, tol: f64) -> Result<Verdict, MonogamyError> {
    let alpha = max_independent_set(g).value;
    let alpha_star = fractional_packing(g)
        .map_err(MonogamyError::Packing)?
        .objective;
    let theta = lovasz_theta(g, tol).map_err(MonogamyError::Theta)?;
    Ok(testable_from(&alpha, &alpha_star, &theta, tol))
}

/// Theorem 1 with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1 {
    pub monogamous: bool,
    pub sum_alpha: Rational,
    pub part_sets: Vec<IndependentSet>,
    pub packing: PackingSolution,
}

fn check_sizes(parts: &[Graph], union: &Graph) {
    let total: usize = parts.iter().map(Graph::vertex_count).sum();
    assert_eq!(
        total,
        union.vertex_count(),
        "union must contain every part's events"
    );
}

/// α*(union) ≤ Σ α(part), compared exactly.
pub fn check_theorem1(parts: &[Graph], union: &Graph) -> Result<Theorem1, PackingError> {
    check_sizes(parts, union);
    let part_sets: Vec<IndependentSet> = parts.iter().map(max_independent_set).collect();
    let sum_alpha = rational::sum(part_sets.iter().map(|s| &s.value));
    let packing = fractional_packing_with_limit(union, DEFAULT_CLIQUE_LIMIT)?;
    Ok(Theorem1 {
        monogamous: packing.objective <= sum_alpha,
        sum_alpha,
        part_sets,
        packing,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2 {
    pub verdict: Verdict,
    pub tight: bool,
    /// ϑ(union), the joint quantum score.
    pub score: f64,
    pub theta: ThetaResult,
}

fn theorem2_from(sum_alpha: &Rational, theta: ThetaResult, tol: f64, tight_tol: f64) -> Theorem2 {
    let s = rational::to_f64(sum_alpha);
    let verdict = if theta.high <= s + tol {
        Verdict::Holds
    } else if theta.low > s + tol || theta.converged {
        Verdict::Fails
    } else {
        Verdict::Undecided
    };
    Theorem2 {
        verdict,
        tight: theta.converged && (theta.value - s).abs() <= tight_tol,
        score: theta.value,
        theta,
    }
}

/// ϑ(union) ≤ Σ α(part) + tol, judged on the certified upper end.
pub fn check_theorem2(parts: &[Graph], union: &Graph, tol: f64) -> Result<Theorem2, ThetaError> {
    check_sizes(parts, union);
    let alphas: Vec<Rational> = parts.iter().map(|g| max_independent_set(g).value).collect();
    let sum_alpha = rational::sum(&alphas);
    let theta = lovasz_theta(union, tol)?;
    Ok(theorem2_from(&sum_alpha, theta, tol, TIGHT_TOLERANCE))
}

/// Certificates to fall back on when the union has too many maximal cliques.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificates {
    /// Fractional clique cover over union labels.
    pub cover: Option<LabelledCover>,
    /// Packing point over union labels; unnamed events get 0.
    pub point: Option<Vec<(String, Rational)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    /// Certified SDP width and slack for verdicts.
    pub tol: f64,
    pub tight_tol: f64,
    pub skip_theta: bool,
    pub clique_limit: usize,
    pub certificates: Certificates,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            tight_tol: TIGHT_TOLERANCE,
            skip_theta: false,
            clique_limit: DEFAULT_CLIQUE_LIMIT,
            certificates: Certificates::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartReport {
    /// Event labels, indexing the sets below.
    pub labels: Vec<String>,
    pub alpha: IndependentSet,
    pub alpha_star: Option<Rational>,
    pub theta: Option<ThetaResult>,
    pub testable: Verdict,
}

/// How α*(union) was pinned down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnionPacking {
    /// Exact LP over all maximal cliques.
    Solved(PackingSolution),
    /// Supplied certificates, checked exactly. Without a point, the lower end
    /// is the largest part α (each part is an induced subgraph).
    Bounded {
        lower: Rational,
        upper: Rational,
        point: Option<Vec<Rational>>,
    },
}

impl UnionPacking {
    pub fn lower(&self) -> &Rational {
        match self {
            UnionPacking::Solved(s) => &s.objective,
            UnionPacking::Bounded { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            UnionPacking::Solved(s) => &s.objective,
            UnionPacking::Bounded { upper, .. } => upper,
        }
    }

    /// α* when both ends agree.
    pub fn exact(&self) -> Option<&Rational> {
        (self.lower() == self.upper()).then(|| self.lower())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyReport {
    pub parts: Vec<PartReport>,
    pub sum_alpha: Rational,
    /// Union event labels, indexing every union-level vertex set.
    pub union_labels: Vec<String>,
    pub union_vertices: usize,
    pub union_edges: usize,
    pub cross_edges: usize,
    pub union_packing: UnionPacking,
    pub union_theta: Option<ThetaResult>,
    pub theorem1: Verdict,
    /// `None` when ϑ was skipped.
    pub theorem2: Option<Verdict>,
    pub tight: Option<bool>,
    /// ϑ(union) midpoint.
    pub score: Option<f64>,
}

impl MonogamyReport {
    pub fn union_alpha_star(&self) -> Option<&Rational> {
        self.union_packing.exact()
    }
}

/// Builds every graph, computes the numbers (parts in parallel) and applies
/// both theorems. Theorem 1 holds when the upper end of α*(union) is at most
/// Σα, fails when the lower end exceeds it, and is undecided in between.
pub fn monogamy_report(
    parts: &[Scenario],
    extra_rules: &[ExclusivityRule],
    options: &ReportOptions,
) -> Result<MonogamyReport, MonogamyError> {
    if parts.len() < 2 {
        return Err(MonogamyError::TooFewParts(parts.len()));
    }
    let graphs = parts
        .iter()
        .enumerate()
        .map(|(part, s)| {
            build_exclusivity_graph(s).map_err(|source| MonogamyError::PartGraph { part, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let union = union_scenario(parts, extra_rules).map_err(MonogamyError::Union)?;
    let ug = build_exclusivity_graph(&union.scenario).map_err(MonogamyError::Union)?;

    // Part α* only feeds the testability flag, which also needs ϑ.
    let theta_tol = (!options.skip_theta).then_some(options.tol);
    let part_limit = theta_tol.map(|_| options.clique_limit);
    let numbers: Vec<Result<GraphNumbers, ThetaError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = graphs
            .iter()
            .map(|g| scope.spawn(move || GraphNumbers::compute(g, part_limit, theta_tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("part worker panicked"))
            .collect()
    });
    let parts_out = numbers
        .into_iter()
        .enumerate()
        .map(|(part, r)| {
            let n = r.map_err(|source| MonogamyError::PartTheta { part, source })?;
            Ok(PartReport {
                labels: parts[part].events.iter().map(|e| e.label.clone()).collect(),
                testable: n.testable(options.tol),
                alpha_star: n.alpha_star.map(|p| p.objective),
                alpha: n.alpha,
                theta: n.theta,
            })
        })
        .collect::<Result<Vec<_>, MonogamyError>>()?;
    let sum_alpha = rational::sum(parts_out.iter().map(|p| &p.alpha.value));

    let union_packing = union_packing(&ug, &parts_out, options)?;
    let theorem1 = if union_packing.upper() <= &sum_alpha {
        Verdict::Holds
    } else if union_packing.lower() > &sum_alpha {
        Verdict::Fails
    } else {
        Verdict::Undecided
    };

    let (union_theta, theorem2) = if options.skip_theta {
        (None, None)
    } else {
        let t = lovasz_theta(&ug, options.tol).map_err(MonogamyError::UnionTheta)?;
        let t2 = theorem2_from(&sum_alpha, t, options.tol, options.tight_tol);
        (Some(t2.theta.clone()), Some(t2))
    };

    Ok(MonogamyReport {
        parts: parts_out,
        union_labels: union
            .scenario
            .events
            .iter()
            .map(|e| e.label.clone())
            .collect(),
        union_vertices: ug.vertex_count(),
        union_edges: ug.edge_count(),
        cross_edges: union.cross_edges(&ug).len(),
        union_packing,
        theorem1,
        theorem2: theorem2.as_ref().map(|t| t.verdict),
        tight: theorem2.as_ref().map(|t| t.tight),
        score: theorem2.as_ref().map(|t| t.score),
        union_theta,
        sum_alpha,
    })
}

fn union_packing(
    ug: &Graph,
    parts: &[PartReport],
    options: &ReportOptions,
) -> Result<UnionPacking, MonogamyError> {
    let certs = &options.certificates;
    let solved = fractional_packing_with_limit(ug, options.clique_limit);
    // A point is only useful next to a cover.
    let Some(cover) = &certs.cover else {
        return solved
            .map(UnionPacking::Solved)
            .map_err(MonogamyError::UnionPacking);
    };
    let cover = cover.resolve(ug)?;
    let check = verify_cover(ug, &cover);
    if let Some(v) = check.violation {
        return Err(MonogamyError::Certificate(PackingError::InvalidCover(
            Box::new(v),
        )));
    }
    if let Ok(s) = solved {
        // The exact LP is available; the cover only has to be valid.
        return Ok(UnionPacking::Solved(s));
    }
    match &certs.point {
        Some(point) => {
            let x = resolve_point(ug, point)?;
            let b = packing_bounds(ug, &x, &cover).map_err(MonogamyError::Certificate)?;
            Ok(UnionPacking::Bounded {
                lower: b.lower,
                upper: b.upper,
                point: Some(x),
            })
        }
        None => Ok(UnionPacking::Bounded {
            lower: parts
                .iter()
                .map(|p| p.alpha.value.clone())
                .max()
                .unwrap_or_else(Rational::zero),
            upper: check.bound,
            point: None,
        }),
    }
}
