//! JSON interchange: scenario, rules, cover and point files, plus reports.
//! Exact rationals are always strings such as `"5/2"`.

use crate::cliques::{IndependentSet, LabelledCover};
use crate::events::{
    validate_scenario, Atom, Event, EventsError, ExclusivityRule, Measurement, Scenario,
};
use crate::monogamy::{MonogamyReport, UnionPacking, Verdict};
use crate::packing::PackingSolution;
use crate::rational::{self, Rational};
use crate::theta::ThetaResult;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Bumped whenever a file layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] EventsError),
    #[error("bad rational {value:?} for {field}")]
    Rational { field: String, value: String },
}

type Rule = [(String, u32); 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventJson {
    label: String,
    assignment: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioJson {
    measurements: Vec<Measurement>,
    events: Vec<EventJson>,
    #[serde(default)]
    rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesJson {
    rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverCliqueJson {
    events: Vec<String>,
    weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverJson {
    cliques: Vec<CoverCliqueJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    values: BTreeMap<String, String>,
}

fn parse_rational(field: &str, value: &str) -> Result<Rational, FormatError> {
    rational::parse(value).map_err(|_| FormatError::Rational {
        field: field.to_string(),
        value: value.to_string(),
    })
}

fn rule_to_json(r: &ExclusivityRule) -> Rule {
    [
        (r.0.measurement.clone(), r.0.outcome),
        (r.1.measurement.clone(), r.1.outcome),
    ]
}

fn rule_from_json([(m1, o1), (m2, o2)]: Rule) -> ExclusivityRule {
    ExclusivityRule::new(Atom::new(m1, o1), Atom::new(m2, o2))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, FormatError> {
    let raw: ScenarioJson = serde_json::from_str(text)?;
    let events = raw
        .events
        .into_iter()
        .map(|e| {
            let weight = match &e.weight {
                Some(w) => parse_rational(&format!("weight of {:?}", e.label), w)?,
                None => Rational::one(),
            };
            Ok(Event {
                label: e.label,
                assignment: e.assignment,
                weight,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let scenario = Scenario {
        measurements: raw.measurements,
        events,
        rules: raw.rules.into_iter().map(rule_from_json).collect(),
    };
    let diagnostics = validate_scenario(&scenario);
    if !diagnostics.is_empty() {
        return Err(EventsError::Invalid(diagnostics).into());
    }
    Ok(scenario)
}

/// Canonical text of a scenario: weights equal to 1 are omitted.
pub fn scenario_to_json(s: &Scenario) -> String {
    pretty(&ScenarioJson {
        measurements: s.measurements.clone(),
        events: s
            .events
            .iter()
            .map(|e| EventJson {
                label: e.label.clone(),
                assignment: e.assignment.clone(),
                weight: (!e.weight.is_one()).then(|| rational::format(&e.weight)),
            })
            .collect(),
        rules: s.rules.iter().map(rule_to_json).collect(),
    })
}

pub fn parse_rules(text: &str) -> Result<Vec<ExclusivityRule>, FormatError> {
    let raw: RulesJson = serde_json::from_str(text)?;
    Ok(raw.rules.into_iter().map(rule_from_json).collect())
}

pub fn rules_to_json(rules: &[ExclusivityRule]) -> String {
    pretty(&RulesJson {
        rules: rules.iter().map(rule_to_json).collect(),
    })
}

/// Parses a cover over event labels. Weights must be nonnegative; whether the
/// sets are cliques is checked later against a graph.
pub fn parse_cover(text: &str) -> Result<LabelledCover, FormatError> {
    let raw: CoverJson = serde_json::from_str(text)?;
    let cliques = raw
        .cliques
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let field = format!("weight of clique {i}");
            let w = parse_rational(&field, &c.weight)?;
            if w < Rational::zero() {
                return Err(FormatError::Rational {
                    field,
                    value: c.weight,
                });
            }
            Ok((c.events, w))
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(LabelledCover { cliques })
}

pub fn cover_to_json(cover: &LabelledCover) -> String {
    pretty(&CoverJson {
        cliques: cover
            .cliques
            .iter()
            .map(|(events, w)| CoverCliqueJson {
                events: events.clone(),
                weight: rational::format(w),
            })
            .collect(),
    })
}

/// Parses a packing point: a map from event label to value.
pub fn parse_point(text: &str) -> Result<Vec<(String, Rational)>, FormatError> {
    let raw: PointJson = serde_json::from_str(text)?;
    raw.values
        .into_iter()
        .map(|(label, v)| {
            let x = parse_rational(&format!("value of {label:?}"), &v)?;
            Ok((label, x))
        })
        .collect()
}

/// Writes the nonzero entries of a point, sorted by label.
pub fn point_to_json(point: &[(String, Rational)]) -> String {
    pretty(&PointJson {
        values: point
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(l, x)| (l.clone(), rational::format(x)))
            .collect(),
    })
}

// Reports. Field order is fixed by the struct definitions, so exact fields
// serialize byte-identically across runs.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaJson {
    pub low: f64,
    pub high: f64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Edge entries `[i, j, m_ij]` of the dual certificate.
    pub dual_certificate: Vec<(usize, usize, f64)>,
}

impl From<&ThetaResult> for ThetaJson {
    fn from(t: &ThetaResult) -> Self {
        Self {
            low: t.low,
            high: t.high,
            value: t.value,
            iterations: t.iterations,
            converged: t.converged,
            dual_certificate: t.dual_certificate.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSetJson {
    pub value: String,
    pub events: Vec<String>,
}

impl IndependentSetJson {
    pub fn new(set: &IndependentSet, labels: &[String]) -> Self {
        Self {
            value: rational::format(&set.value),
            events: set.vertices.iter().map(|&v| labels[v].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEntryJson {
    pub events: Vec<String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingJson {
    /// `"lp"` for the full clique LP, `"certificates"` for supplied bounds.
    pub method: String,
    pub lower: String,
    pub upper: String,
    /// Set when both ends agree.
    pub exact: Option<String>,
    /// Nonzero entries of the packing point.
    pub point: BTreeMap<String, String>,
    pub cover: Vec<CoverEntryJson>,
}

fn point_map(values: &[Rational], labels: &[String]) -> BTreeMap<String, String> {
    values
        .iter()
        .zip(labels)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, l)| (l.clone(), rational::format(x)))
        .collect()
}

impl PackingJson {
    pub fn from_solution(s: &PackingSolution, labels: &[String]) -> Self {
        let v = rational::format(&s.objective);
        Self {
            method: "lp".into(),
            lower: v.clone(),
            upper: v.clone(),
            exact: Some(v),
            point: point_map(&s.values, labels),
            cover: s
                .dual_cover
                .entries
                .iter()
                .map(|e| CoverEntryJson {
                    events: e.clique.iter().map(|&v| labels[v].clone()).collect(),
                    weight: rational::format(&e.weight),
                })
                .collect(),
        }
    }

    fn from_union(p: &UnionPacking, labels: &[String]) -> Self {
        match p {
            UnionPacking::Solved(s) => Self::from_solution(s, labels),
            UnionPacking::Bounded { point, .. } => Self {
                method: "certificates".into(),
                lower: rational::format(p.lower()),
                upper: rational::format(p.upper()),
                exact: p.exact().map(rational::format),
                point: point
                    .as_deref()
                    .map(|x| point_map(x, labels))
                    .unwrap_or_default(),
                // The supplied cover file is the certificate; not repeated.
                cover: Vec::new(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartJson {
    pub alpha: IndependentSetJson,
    pub alpha_star: Option<String>,
    pub theta: Option<ThetaJson>,
    pub testable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub tool_version: String,
    pub schema_version: u32,
    pub inputs: Vec<InputDigest>,
    pub tol: f64,
    pub parts: Vec<PartJson>,
    pub sum_alpha: String,
    pub union_vertices: usize,
    pub union_edges: usize,
    pub cross_edges: usize,
    pub union_alpha_star: Option<String>,
    pub union_packing: PackingJson,
    pub union_theta: Option<ThetaJson>,
    pub theorem1_monogamous: Option<bool>,
    pub theorem2_monogamous: Option<bool>,
    pub tight: Option<bool>,
    pub score: Option<f64>,
    pub elapsed_ms: u128,
}

impl ReportJson {
    pub fn new(r: &MonogamyReport, inputs: Vec<InputDigest>, tol: f64, elapsed_ms: u128) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            schema_version: SCHEMA_VERSION,
            inputs,
            tol,
            parts: r
                .parts
                .iter()
                .map(|p| PartJson {
                    alpha: IndependentSetJson::new(&p.alpha, &p.labels),
                    alpha_star: p.alpha_star.as_ref().map(rational::format),
                    theta: p.theta.as_ref().map(ThetaJson::from),
                    testable: p.testable.as_option(),
                })
                .collect(),
            sum_alpha: rational::format(&r.sum_alpha),
            union_vertices: r.union_vertices,
            union_edges: r.union_edges,
            cross_edges: r.cross_edges,
            union_alpha_star: r.union_alpha_star().map(rational::format),
            union_packing: PackingJson::from_union(&r.union_packing, &r.union_labels),
            union_theta: r.union_theta.as_ref().map(ThetaJson::from),
            theorem1_monogamous: r.theorem1.as_option(),
            theorem2_monogamous: r.theorem2.and_then(Verdict::as_option),
            tight: r.tight,
            score: r.score,
            elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::scenarios::{gen_bell_loop, gen_kcbs_pair, gen_ncycle, kcbs_pair_cover};
    use proptest::prelude::*;

    #[test]
    fn scenario_round_trip() {
        let mut s = gen_ncycle(5, 1, false).unwrap();
        s.events[0].weight = ratio(3, 2);
        s.rules
            .push(ExclusivityRule::new(Atom::new("1", 0), Atom::new("3", 1)));
        let text = scenario_to_json(&s);
        assert_eq!(parse_scenario(&text).unwrap(), s);
        assert!(text.contains("\"3/2\""));
    }

    #[test]
    fn rejects_invalid_scenarios() {
        let undeclared =
            r#"{"measurements": [], "events": [{"label": "x", "assignment": {"a": 0}}]}"#;
        assert!(matches!(
            parse_scenario(undeclared),
            Err(FormatError::Invalid(_))
        ));
        let weight = r#"{"measurements": [], "events": [{"label": "x", "assignment": {}, "weight": "0.5"}]}"#;
        assert!(matches!(
            parse_scenario(weight),
            Err(FormatError::Rational { .. })
        ));
        let extra = r#"{"measurements": [], "events": [], "colour": 1}"#;
        assert!(matches!(parse_scenario(extra), Err(FormatError::Json(_))));
        assert!(matches!(parse_scenario("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn empty_scenario_parses() {
        let s = parse_scenario(r#"{"measurements": [], "events": []}"#).unwrap();
        assert_eq!(s, Scenario::default());
    }

    #[test]
    fn rules_cover_point_round_trip() {
        let f = gen_bell_loop(4, 2).unwrap();
        assert_eq!(parse_rules(&rules_to_json(&f.rules)).unwrap(), f.rules);
        let c = kcbs_pair_cover();
        assert_eq!(parse_cover(&cover_to_json(&c)).unwrap(), c);
        let p = vec![
            ("a".to_string(), ratio(1, 8)),
            ("b".to_string(), ratio(2, 1)),
        ];
        assert_eq!(parse_point(&point_to_json(&p)).unwrap(), p);
        assert!(parse_cover(r#"{"cliques": [{"events": ["a"], "weight": "-1"}]}"#).is_err());
    }

    #[test]
    fn kcbs_files_round_trip() {
        for s in gen_kcbs_pair().parts {
            assert_eq!(parse_scenario(&scenario_to_json(&s)).unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn parsers_never_panic(text in ".{0,200}") {
            let _ = parse_scenario(&text);
            let _ = parse_rules(&text);
            let _ = parse_cover(&text);
            let _ = parse_point(&text);
        }

        #[test]
        fn ncycle_files_round_trip(n in 3usize..12, j in 1usize..4, comp in any::<bool>()) {
            let s = gen_ncycle(n, j.min(n), comp).unwrap();
            let text = scenario_to_json(&s);
            let back = parse_scenario(&text).unwrap();
            prop_assert_eq!(scenario_to_json(&back), text);
            prop_assert_eq!(back, s);
        }
    }
}
