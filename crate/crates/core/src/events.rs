//! Measurement events, exclusivity rules, and compilation of a scenario into
//! its exclusivity graph.
//!
//! Two events are exclusive when they assign different outcomes to a shared
//! measurement, or when a declared rule forbids one atom of each from
//! occurring together.

use crate::graph::{Graph, GraphError};
use crate::rational::{self, Rational};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Measurement {
    pub id: String,
    pub arity: u32,
}

impl Measurement {
    pub fn new(id: impl Into<String>, arity: u32) -> Self {
        Self {
            id: id.into(),
            arity,
        }
    }

    pub fn dichotomic(id: impl Into<String>) -> Self {
        Self::new(id, 2)
    }
}

/// A partial outcome assignment over measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub label: String,
    pub assignment: BTreeMap<String, u32>,
    pub weight: Rational,
}

impl Event {
    pub fn new<I, S>(label: impl Into<String>, assignment: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        Self {
            label: label.into(),
            assignment: assignment.into_iter().map(|(m, o)| (m.into(), o)).collect(),
            weight: Rational::one(),
        }
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }

    pub fn outcome(&self, measurement: &str) -> Option<u32> {
        self.assignment.get(measurement).copied()
    }
}

/// One side of an exclusivity rule: measurement `measurement` yields `outcome`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub measurement: String,
    pub outcome: u32,
}

impl Atom {
    pub fn new(measurement: impl Into<String>, outcome: u32) -> Self {
        Self {
            measurement: measurement.into(),
            outcome,
        }
    }

    fn holds_in(&self, e: &Event) -> bool {
        e.outcome(&self.measurement) == Some(self.outcome)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.measurement, self.outcome)
    }
}

/// Two atoms declared jointly impossible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExclusivityRule(pub Atom, pub Atom);

impl ExclusivityRule {
    pub fn new(a: Atom, b: Atom) -> Self {
        Self(a, b)
    }

    fn separates(&self, e1: &Event, e2: &Event) -> bool {
        (self.0.holds_in(e1) && self.1.holds_in(e2)) || (self.1.holds_in(e1) && self.0.holds_in(e2))
    }
}

impl fmt::Display for ExclusivityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ⟂ {}]", self.0, self.1)
    }
}

/// Every pairwise rule on outcome `outcome` among `measurements`; this is how a
/// declared "these k measurements cannot all/any two yield `outcome`" is encoded.
pub fn pairwise_rules(measurements: &[&str], outcome: u32) -> Vec<ExclusivityRule> {
    let mut out = Vec::new();
    for (i, a) in measurements.iter().enumerate() {
        for b in &measurements[i + 1..] {
            out.push(ExclusivityRule::new(
                Atom::new(*a, outcome),
                Atom::new(*b, outcome),
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scenario {
    pub measurements: Vec<Measurement>,
    pub events: Vec<Event>,
    pub rules: Vec<ExclusivityRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateMeasurement(String),
    BadArity {
        measurement: String,
        arity: u32,
    },
    DuplicateLabel(String),
    UndeclaredMeasurement {
        event: String,
        measurement: String,
    },
    OutcomeOutOfRange {
        event: String,
        measurement: String,
        outcome: u32,
        arity: u32,
    },
    NegativeWeight {
        event: String,
        weight: String,
    },
    RuleUndeclaredMeasurement {
        rule: String,
        measurement: String,
    },
    RuleOutcomeOutOfRange {
        rule: String,
        measurement: String,
        outcome: u32,
    },
    RuleSameMeasurement {
        rule: String,
        measurement: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match self {
            DuplicateMeasurement(m) => write!(f, "measurement {m:?} declared twice"),
            BadArity { measurement, arity } => {
                write!(
                    f,
                    "measurement {measurement:?} has arity {arity} (must be >= 2)"
                )
            }
            DuplicateLabel(l) => write!(f, "event label {l:?} used twice"),
            UndeclaredMeasurement { event, measurement } => {
                write!(
                    f,
                    "event {event:?} references undeclared measurement {measurement:?}"
                )
            }
            OutcomeOutOfRange {
                event,
                measurement,
                outcome,
                arity,
            } => write!(
                f,
                "event {event:?} assigns outcome {outcome} to {measurement:?} of arity {arity}"
            ),
            NegativeWeight { event, weight } => {
                write!(f, "event {event:?} has negative weight {weight}")
            }
            RuleUndeclaredMeasurement { rule, measurement } => {
                write!(
                    f,
                    "rule {rule} references undeclared measurement {measurement:?}"
                )
            }
            RuleOutcomeOutOfRange {
                rule,
                measurement,
                outcome,
            } => write!(
                f,
                "rule {rule} uses outcome {outcome} outside the arity of {measurement:?}"
            ),
            RuleSameMeasurement { rule, measurement } => {
                write!(
                    f,
                    "rule {rule} pairs two atoms of the same measurement {measurement:?}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EventsError {
    #[error("invalid scenario: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("measurement {id:?} declared with arity {first} and {second} in different parts")]
    ArityConflict { id: String, first: u32, second: u32 },
    #[error("rule {rule} references unknown measurement {measurement:?}")]
    UnknownRuleMeasurement { rule: String, measurement: String },
    #[error("label {0:?} collides after part prefixing")]
    LabelCollision(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Lists every invariant violation; an empty list means the scenario is valid.
pub fn validate_scenario(s: &Scenario) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut arity: HashMap<&str, u32> = HashMap::new();
    for m in &s.measurements {
        if arity.insert(&m.id, m.arity).is_some() {
            diags.push(Diagnostic::DuplicateMeasurement(m.id.clone()));
        }
        if m.arity < 2 {
            diags.push(Diagnostic::BadArity {
                measurement: m.id.clone(),
                arity: m.arity,
            });
        }
    }
    let mut labels = HashSet::new();
    for e in &s.events {
        if !labels.insert(e.label.as_str()) {
            diags.push(Diagnostic::DuplicateLabel(e.label.clone()));
        }
        for (m, &o) in &e.assignment {
            match arity.get(m.as_str()) {
                None => diags.push(Diagnostic::UndeclaredMeasurement {
                    event: e.label.clone(),
                    measurement: m.clone(),
                }),
                Some(&a) if o >= a => diags.push(Diagnostic::OutcomeOutOfRange {
                    event: e.label.clone(),
                    measurement: m.clone(),
                    outcome: o,
                    arity: a,
                }),
                Some(_) => {}
            }
        }
        if e.weight.is_negative() {
            diags.push(Diagnostic::NegativeWeight {
                event: e.label.clone(),
                weight: rational::format(&e.weight),
            });
        }
    }
    for r in &s.rules {
        if r.0.measurement == r.1.measurement {
            diags.push(Diagnostic::RuleSameMeasurement {
                rule: r.to_string(),
                measurement: r.0.measurement.clone(),
            });
        }
        for atom in [&r.0, &r.1] {
            match arity.get(atom.measurement.as_str()) {
                None => diags.push(Diagnostic::RuleUndeclaredMeasurement {
                    rule: r.to_string(),
                    measurement: atom.measurement.clone(),
                }),
                Some(&a) if atom.outcome >= a => diags.push(Diagnostic::RuleOutcomeOutOfRange {
                    rule: r.to_string(),
                    measurement: atom.measurement.clone(),
                    outcome: atom.outcome,
                }),
                Some(_) => {}
            }
        }
    }
    diags
}

/// Whether two events cannot occur together. Identical events are never
/// exclusive with themselves.
pub fn events_exclusive(e1: &Event, e2: &Event, rules: &[ExclusivityRule]) -> bool {
    if std::ptr::eq(e1, e2) || e1 == e2 {
        return false;
    }
    let (small, large) = if e1.assignment.len() <= e2.assignment.len() {
        (e1, e2)
    } else {
        (e2, e1)
    };
    let conflict = small
        .assignment
        .iter()
        .any(|(m, o)| large.assignment.get(m).is_some_and(|o2| o2 != o));
    conflict || rules.iter().any(|r| r.separates(e1, e2))
}

/// One vertex per event (same order, labels, and weights); an edge for every
/// exclusive pair.
pub fn build_exclusivity_graph(s: &Scenario) -> Result<Graph, EventsError> {
    let diags = validate_scenario(s);
    if !diags.is_empty() {
        return Err(EventsError::Invalid(diags));
    }
    let n = s.events.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if events_exclusive(&s.events[i], &s.events[j], &s.rules) {
                edges.push((i, j));
            }
        }
    }
    let weights = s.events.iter().map(|e| e.weight.clone()).collect();
    let labels = s.events.iter().map(|e| e.label.clone()).collect();
    Ok(Graph::new(n, &edges, Some(weights))?.with_labels(labels)?)
}

/// Several scenarios run together.
#[derive(Debug, Clone)]
pub struct UnionScenario {
    pub scenario: Scenario,
    /// `part_map[v] = (part index, local event index)`.
    pub part_map: Vec<(usize, usize)>,
    pub part_sizes: Vec<usize>,
}

impl UnionScenario {
    pub fn part_count(&self) -> usize {
        self.part_sizes.len()
    }

    /// Union edges whose endpoints come from different parts.
    pub fn cross_edges(&self, union_graph: &Graph) -> Vec<(usize, usize)> {
        union_graph
            .edges()
            .into_iter()
            .filter(|&(u, v)| self.part_map[u].0 != self.part_map[v].0)
            .collect()
    }
}

/// Label used for event `label` of part `part` inside a union.
pub fn union_label(part: usize, label: &str) -> String {
    format!("{part}:{label}")
}

/// Concatenates the parts' events (labels prefixed with `"<part>:"`), merges
/// measurements by id, and collects every part's rules plus `extra_rules`.
pub fn union_scenario(
    parts: &[Scenario],
    extra_rules: &[ExclusivityRule],
) -> Result<UnionScenario, EventsError> {
    let mut measurements: Vec<Measurement> = Vec::new();
    let mut arity: HashMap<String, u32> = HashMap::new();
    let mut events = Vec::new();
    let mut part_map = Vec::new();
    let mut rules: Vec<ExclusivityRule> = Vec::new();
    let mut labels = HashSet::new();
    for (p, s) in parts.iter().enumerate() {
        for m in &s.measurements {
            match arity.get(&m.id) {
                Some(&a) if a != m.arity => {
                    return Err(EventsError::ArityConflict {
                        id: m.id.clone(),
                        first: a,
                        second: m.arity,
                    })
                }
                Some(_) => {}
                None => {
                    arity.insert(m.id.clone(), m.arity);
                    measurements.push(m.clone());
                }
            }
        }
        for (i, e) in s.events.iter().enumerate() {
            let label = union_label(p, &e.label);
            if !labels.insert(label.clone()) {
                return Err(EventsError::LabelCollision(label));
            }
            events.push(Event { label, ..e.clone() });
            part_map.push((p, i));
        }
        for r in &s.rules {
            if !rules.contains(r) {
                rules.push(r.clone());
            }
        }
    }
    for r in extra_rules {
        for atom in [&r.0, &r.1] {
            if !arity.contains_key(&atom.measurement) {
                return Err(EventsError::UnknownRuleMeasurement {
                    rule: r.to_string(),
                    measurement: atom.measurement.clone(),
                });
            }
        }
        if !rules.contains(r) {
            rules.push(r.clone());
        }
    }
    Ok(UnionScenario {
        scenario: Scenario {
            measurements,
            events,
            rules,
        },
        part_map,
        part_sizes: parts.iter().map(|s| s.events.len()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjoint_union;
    use proptest::prelude::*;

    fn ev(label: &str, pairs: &[(&str, u32)]) -> Event {
        Event::new(label, pairs.iter().map(|&(m, o)| (m, o)))
    }

    fn pentagon(suffix: &str) -> Scenario {
        let id = |i: usize| format!("{i}{suffix}");
        Scenario {
            measurements: (1..=5).map(|i| Measurement::dichotomic(id(i))).collect(),
            events: (1..=5)
                .map(|i| {
                    let j = i % 5 + 1;
                    Event::new(format!("01|{}{}", id(i), id(j)), [(id(i), 0), (id(j), 1)])
                })
                .collect(),
            rules: vec![],
        }
    }

    #[test]
    fn empty_scenario_is_valid() {
        assert!(validate_scenario(&Scenario::default()).is_empty());
    }

    #[test]
    fn undeclared_measurement_is_named() {
        let s = Scenario {
            measurements: vec![Measurement::dichotomic("x")],
            events: vec![ev("e", &[("x", 0), ("z", 1)])],
            rules: vec![],
        };
        let d = validate_scenario(&s);
        assert_eq!(d.len(), 1);
        assert!(d[0].to_string().contains("\"z\""));
    }

    #[test]
    fn same_measurement_rule_is_diagnosed() {
        let s = Scenario {
            measurements: vec![Measurement::dichotomic("x")],
            events: vec![],
            rules: vec![ExclusivityRule::new(Atom::new("x", 0), Atom::new("x", 1))],
        };
        assert!(matches!(
            validate_scenario(&s).as_slice(),
            [Diagnostic::RuleSameMeasurement { .. }]
        ));
    }

    #[test]
    fn other_diagnostics() {
        let s = Scenario {
            measurements: vec![
                Measurement::new("x", 1),
                Measurement::dichotomic("y"),
                Measurement::dichotomic("y"),
            ],
            events: vec![
                ev("e", &[("y", 2)]),
                ev("e", &[]).with_weight(rational::int(-1)),
            ],
            rules: vec![ExclusivityRule::new(Atom::new("y", 5), Atom::new("q", 0))],
        };
        let d = validate_scenario(&s);
        assert!(d.contains(&Diagnostic::BadArity {
            measurement: "x".into(),
            arity: 1
        }));
        assert!(d.contains(&Diagnostic::DuplicateMeasurement("y".into())));
        assert!(d.contains(&Diagnostic::DuplicateLabel("e".into())));
        assert!(d
            .iter()
            .any(|x| matches!(x, Diagnostic::OutcomeOutOfRange { .. })));
        assert!(d
            .iter()
            .any(|x| matches!(x, Diagnostic::NegativeWeight { .. })));
        assert!(d
            .iter()
            .any(|x| matches!(x, Diagnostic::RuleOutcomeOutOfRange { .. })));
        assert!(d
            .iter()
            .any(|x| matches!(x, Diagnostic::RuleUndeclaredMeasurement { .. })));
    }

    #[test]
    fn exclusivity_examples() {
        let a = ev("00|0_A0_B", &[("0_A", 0), ("0_B", 0)]);
        let b = ev("10|0_A0_C", &[("0_A", 1), ("0_C", 0)]);
        assert!(events_exclusive(&a, &b, &[]));

        let rule = ExclusivityRule::new(Atom::new("1", 0), Atom::new("1'", 0));
        let p = ev("01|12", &[("1", 0), ("2", 1)]);
        let q = ev("01|1'2'", &[("1'", 0), ("2'", 1)]);
        assert!(!events_exclusive(&p, &q, &[]));
        assert!(events_exclusive(&p, &q, std::slice::from_ref(&rule)));
        assert!(events_exclusive(&q, &p, &[rule]));

        let c = ev("00|1_A1_B", &[("1_A", 0), ("1_B", 0)]);
        assert!(!events_exclusive(&a, &c, &[]));
        assert!(!events_exclusive(&a, &a, &[]));
    }

    #[test]
    fn pentagon_compiles_to_c5() {
        let g = build_exclusivity_graph(&pentagon("")).unwrap();
        assert_eq!(
            g,
            crate::graph::Graph::cycle(5)
                .unwrap()
                .with_labels(g.labels().unwrap().to_vec())
                .unwrap()
        );
        assert_eq!(g.label(0), Some("01|12"));
    }

    #[test]
    fn invalid_scenario_is_rejected() {
        let s = Scenario {
            measurements: vec![],
            events: vec![ev("e", &[("z", 0)])],
            rules: vec![],
        };
        assert!(matches!(
            build_exclusivity_graph(&s),
            Err(EventsError::Invalid(_))
        ));
    }

    #[test]
    fn disjoint_parts_union_to_disjoint_graph() {
        let (a, b) = (pentagon(""), pentagon("'"));
        let u = union_scenario(&[a.clone(), b.clone()], &[]).unwrap();
        let g = build_exclusivity_graph(&u.scenario).unwrap();
        let ga = build_exclusivity_graph(&a).unwrap();
        let gb = build_exclusivity_graph(&b).unwrap();
        let du = disjoint_union(&[&ga, &gb]);
        assert_eq!(g.edges(), du.graph.edges());
        assert_eq!(g.labels(), du.graph.labels());
        assert!(u.cross_edges(&g).is_empty());
        assert_eq!(u.part_map[7], (1, 2));
    }

    #[test]
    fn union_errors() {
        let a = pentagon("");
        let mut b = pentagon("");
        b.measurements[0].arity = 3;
        assert!(matches!(
            union_scenario(&[a.clone(), b], &[]),
            Err(EventsError::ArityConflict { .. })
        ));
        let rule = ExclusivityRule::new(Atom::new("1", 0), Atom::new("nope", 0));
        assert!(matches!(
            union_scenario(&[a], &[rule]),
            Err(EventsError::UnknownRuleMeasurement { .. })
        ));
    }

    fn arb_scenario() -> impl Strategy<Value = (Scenario, Vec<ExclusivityRule>)> {
        let meas = 4usize;
        let event = proptest::collection::vec(proptest::option::of(0u32..2), meas);
        let events = proptest::collection::vec(event, 1..9);
        let rule = (0..meas, 0u32..2, 0..meas, 0u32..2);
        let rules = proptest::collection::vec(rule, 0..4);
        (events, rules).prop_map(move |(events, rules)| {
            let measurements = (0..meas)
                .map(|i| Measurement::dichotomic(format!("m{i}")))
                .collect();
            let events = events
                .into_iter()
                .enumerate()
                .map(|(k, outs)| {
                    Event::new(
                        format!("e{k}"),
                        outs.into_iter()
                            .enumerate()
                            .filter_map(|(i, o)| o.map(|o| (format!("m{i}"), o))),
                    )
                })
                .collect();
            let rules = rules
                .into_iter()
                .filter(|(a, _, b, _)| a != b)
                .map(|(a, oa, b, ob)| {
                    ExclusivityRule::new(
                        Atom::new(format!("m{a}"), oa),
                        Atom::new(format!("m{b}"), ob),
                    )
                })
                .collect();
            (
                Scenario {
                    measurements,
                    events,
                    rules: vec![],
                },
                rules,
            )
        })
    }

    proptest! {
        #[test]
        fn exclusivity_symmetric_irreflexive((s, rules) in arb_scenario()) {
            for e1 in &s.events {
                prop_assert!(!events_exclusive(e1, e1, &rules));
                for e2 in &s.events {
                    prop_assert_eq!(events_exclusive(e1, e2, &rules), events_exclusive(e2, e1, &rules));
                }
            }
        }

        #[test]
        fn rules_only_add_edges((s, rules) in arb_scenario()) {
            let base = build_exclusivity_graph(&s).unwrap();
            let with_rules = build_exclusivity_graph(&Scenario { rules, ..s.clone() }).unwrap();
            prop_assert_eq!(base.labels(), with_rules.labels());
            for (u, v) in base.edges() {
                prop_assert!(with_rules.has_edge(u, v));
            }
        }
    }
}
