//! Generators for the concrete experiment families: n-cycle inequalities,
//! CHSH-type rings, stars and chains, the paired KCBS test, and Svetlichny
//! scenarios including the three-experiment arrangement over parties A–F.
//!
//! Bell-type measurements are named `"<setting>_<party>"` (e.g. `"1_B"`) and
//! events are labelled `"<outcomes>|<measurements>"` in the same order.

use crate::cliques::LabelledCover;
use crate::events::{
    build_exclusivity_graph, union_label, union_scenario, Atom, Event, EventsError,
    ExclusivityRule, Measurement, Scenario, UnionScenario,
};
use crate::packing::symmetric_packing;
use crate::rational::Rational;
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("an n-cycle needs n >= 3, got {0}")]
    CycleTooShort(usize),
    #[error("flipped context index must lie in 1..={n}, got {j}")]
    BadContext { j: usize, n: usize },
    #[error("need at least {min} parties, got {got}")]
    TooFewParties { got: usize, min: usize },
    #[error("need at least 2 settings per party, got {0}")]
    TooFewSettings(usize),
    #[error("Svetlichny scenarios are generated for 2..={max} parties, got {got}")]
    SvetlichnyParties { got: usize, max: usize },
}

/// Several experiments run together, plus the exclusivity rules that relate
/// their measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub parts: Vec<Scenario>,
    pub rules: Vec<ExclusivityRule>,
}

impl Family {
    pub fn union(&self) -> Result<UnionScenario, EventsError> {
        union_scenario(&self.parts, &self.rules)
    }

    /// The same experiments with every cross-experiment rule dropped.
    pub fn without_rules(&self) -> Self {
        Self {
            parts: self.parts.clone(),
            rules: Vec::new(),
        }
    }
}

/// Party names A, B, … Z, then P26, P27, …
pub fn party_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("P{i}")
    }
}

fn obs(setting: usize, party: &str) -> String {
    format!("{setting}_{party}")
}

fn pair_events(contexts: &[(String, String, u32)]) -> Vec<Event> {
    let mut events = Vec::with_capacity(2 * contexts.len());
    for (x, y, parity) in contexts {
        for a in 0..2 {
            let b = a ^ parity;
            events.push(Event::new(
                format!("{a}{b}|{x}{y}"),
                [(x.clone(), a), (y.clone(), b)],
            ));
        }
    }
    events
}

/// The n-cycle scenario: dichotomic measurements `1..n` with contexts
/// `(i, i+1)`; context `j` requires odd outcome parity, the others even
/// (reversed when `complementary`). Labels read `ab|i,i+1`.
pub fn gen_ncycle(n: usize, j: usize, complementary: bool) -> Result<Scenario, ScenarioError> {
    if n < 3 {
        return Err(ScenarioError::CycleTooShort(n));
    }
    if !(1..=n).contains(&j) {
        return Err(ScenarioError::BadContext { j, n });
    }
    let mut events = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let next = i % n + 1;
        let parity = u32::from((i == j) != complementary);
        for a in 0..2 {
            let b = a ^ parity;
            events.push(Event::new(
                format!("{a}{b}|{i},{next}"),
                [(i.to_string(), a), (next.to_string(), b)],
            ));
        }
    }
    Ok(Scenario {
        measurements: (1..=n)
            .map(|i| Measurement::dichotomic(i.to_string()))
            .collect(),
        events,
        rules: Vec::new(),
    })
}

/// A 2m-cycle Bell test between parties `p` and `q`: the chain
/// `0_p, 0_q, 1_p, 1_q, …, (m−1)_q` closed back to `0_p`, with the closing
/// context `((m−1)_q, 0_p)` anticorrelated and all others correlated. For
/// m = 2 this is CHSH.
fn bell_cycle(p: &str, q: &str, m: usize) -> Scenario {
    let mut contexts = Vec::with_capacity(2 * m);
    for k in 0..m {
        contexts.push((obs(k, p), obs(k, q), 0));
        contexts.push((obs(k, q), obs((k + 1) % m, p), u32::from(k == m - 1)));
    }
    let mut measurements = Vec::with_capacity(2 * m);
    for party in [p, q] {
        for k in 0..m {
            measurements.push(Measurement::dichotomic(obs(k, party)));
        }
    }
    Scenario {
        measurements,
        events: pair_events(&contexts),
        rules: Vec::new(),
    }
}

/// Same-setting observables of two parties that cannot both give the same
/// outcome: `((k_P, a), (k_Q, a))` for every setting k and outcome a.
fn xor_rules(p: &str, q: &str, m: usize) -> Vec<ExclusivityRule> {
    let mut rules = Vec::with_capacity(2 * m);
    for k in 0..m {
        for a in 0..2 {
            rules.push(ExclusivityRule::new(
                Atom::new(obs(k, p), a),
                Atom::new(obs(k, q), a),
            ));
        }
    }
    rules
}

fn check_settings(m: usize) -> Result<(), ScenarioError> {
    if m < 2 {
        return Err(ScenarioError::TooFewSettings(m));
    }
    Ok(())
}

/// Ring of `n` parties where neighbours run a 2m-cycle test; non-adjacent
/// parties get xor rules.
pub fn gen_bell_loop(n: usize, m: usize) -> Result<Family, ScenarioError> {
    if n < 3 {
        return Err(ScenarioError::TooFewParties { got: n, min: 3 });
    }
    check_settings(m)?;
    let names: Vec<String> = (0..n).map(party_name).collect();
    let parts = (0..n)
        .map(|i| bell_cycle(&names[i], &names[(i + 1) % n], m))
        .collect();
    let mut rules = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if !(i == 0 && j == n - 1) {
                rules.extend(xor_rules(&names[i], &names[j], m));
            }
        }
    }
    Ok(Family { parts, rules })
}

/// Alice (`A`) tests with each of `B1 … Bn`; distinct Bobs get xor rules.
pub fn gen_star(n_bobs: usize, m: usize) -> Result<Family, ScenarioError> {
    if n_bobs < 2 {
        return Err(ScenarioError::TooFewParties {
            got: n_bobs,
            min: 2,
        });
    }
    check_settings(m)?;
    let bobs: Vec<String> = (1..=n_bobs).map(|i| format!("B{i}")).collect();
    let parts = bobs.iter().map(|b| bell_cycle("A", b, m)).collect();
    let mut rules = Vec::new();
    for i in 0..n_bobs {
        for j in i + 1..n_bobs {
            rules.extend(xor_rules(&bobs[i], &bobs[j], m));
        }
    }
    Ok(Family { parts, rules })
}

/// Parties A, B, C, … on a path; neighbours test, non-neighbours get xor
/// rules.
pub fn gen_chain(n: usize, m: usize) -> Result<Family, ScenarioError> {
    if n < 3 {
        return Err(ScenarioError::TooFewParties { got: n, min: 3 });
    }
    check_settings(m)?;
    let names: Vec<String> = (0..n).map(party_name).collect();
    let parts = (0..n - 1)
        .map(|i| bell_cycle(&names[i], &names[i + 1], m))
        .collect();
    let mut rules = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            rules.extend(xor_rules(&names[i], &names[j], m));
        }
    }
    Ok(Family { parts, rules })
}

fn pentagon(prime: &str) -> Scenario {
    let id = |i: usize| format!("{i}{prime}");
    Scenario {
        measurements: (1..=5).map(|i| Measurement::dichotomic(id(i))).collect(),
        events: (1..=5)
            .map(|i| {
                let next = i % 5 + 1;
                Event::new(
                    format!("01|{}{}", id(i), id(next)),
                    [(id(i), 0), (id(next), 1)],
                )
            })
            .collect(),
        rules: Vec::new(),
    }
}

/// Two KCBS pentagons over `1…5` and `1'…5'`, where no two of `1, 1', 2'`
/// and no two of `4, 5, 5'` both yield 0.
pub fn gen_kcbs_pair() -> Family {
    let mut rules = crate::events::pairwise_rules(&["1", "1'", "2'"], 0);
    rules.extend(crate::events::pairwise_rules(&["4", "5", "5'"], 0));
    Family {
        parts: vec![pentagon(""), pentagon("'")],
        rules,
    }
}

/// Two triangles across the pentagons plus one edge inside each, total 4.
pub fn kcbs_pair_cover() -> LabelledCover {
    let clique = |labels: &[(usize, &str)]| {
        (
            labels.iter().map(|&(p, l)| union_label(p, l)).collect(),
            Rational::one(),
        )
    };
    LabelledCover {
        cliques: vec![
            clique(&[(0, "01|12"), (1, "01|1'2'"), (1, "01|2'3'")]),
            clique(&[(0, "01|45"), (0, "01|51"), (1, "01|5'1'")]),
            clique(&[(0, "01|23"), (0, "01|34")]),
            clique(&[(1, "01|3'4'"), (1, "01|4'5'")]),
        ],
    }
}

/// Signed expansion of the Svetlichny operator into correlator terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvetlichnyPolynomial {
    pub n: usize,
    /// `(settings, sign)`; character i of `settings` is party i's setting.
    pub terms: Vec<(String, i8)>,
}

impl SvetlichnyPolynomial {
    pub fn sign(&self, settings: &str) -> Option<i8> {
        self.terms
            .iter()
            .find(|(s, _)| s == settings)
            .map(|&(_, sign)| sign)
    }
}

pub const SVETLICHNY_MAX_PARTIES: usize = 10;

/// `S_2 = 00 + 01 + 10 − 11` and `S_n = S_{n−1}·1_n + S̄_{n−1}·0_n`, where the
/// bar swaps settings 0 and 1 of every earlier party.
pub fn svetlichny_polynomial(n: usize) -> Result<SvetlichnyPolynomial, ScenarioError> {
    if !(2..=SVETLICHNY_MAX_PARTIES).contains(&n) {
        return Err(ScenarioError::SvetlichnyParties {
            got: n,
            max: SVETLICHNY_MAX_PARTIES,
        });
    }
    let mut terms: Vec<(String, i8)> = vec![
        ("00".into(), 1),
        ("01".into(), 1),
        ("10".into(), 1),
        ("11".into(), -1),
    ];
    for _ in 3..=n {
        let mut next = Vec::with_capacity(2 * terms.len());
        for (s, sign) in &terms {
            next.push((format!("{s}1"), *sign));
        }
        for (s, sign) in &terms {
            let bar: String = s
                .chars()
                .map(|c| if c == '0' { '1' } else { '0' })
                .collect();
            next.push((format!("{bar}0"), *sign));
        }
        terms = next;
    }
    Ok(SvetlichnyPolynomial { n, terms })
}

fn bits(mut v: usize, width: usize) -> String {
    let mut s = vec![b'0'; width];
    for i in (0..width).rev() {
        s[i] = b'0' + (v & 1) as u8;
        v >>= 1;
    }
    String::from_utf8(s).expect("ascii")
}

/// Events of an n-party correlation experiment: for every setting string the
/// outcome strings of the given parity, labelled `"<outcomes>|<settings>"`.
fn parity_scenario(parties: &[String], parity: impl Fn(&str) -> u32) -> Scenario {
    let n = parties.len();
    let mut measurements = Vec::with_capacity(2 * n);
    for p in parties {
        for k in 0..2 {
            measurements.push(Measurement::dichotomic(obs(k, p)));
        }
    }
    let mut events = Vec::new();
    for sv in 0..1usize << n {
        let settings = bits(sv, n);
        let want = parity(&settings);
        for ov in 0..1usize << n {
            if ov.count_ones() % 2 != want {
                continue;
            }
            let outcomes = bits(ov, n);
            let assignment = parties.iter().enumerate().map(|(i, p)| {
                let k = usize::from(settings.as_bytes()[i] - b'0');
                (obs(k, p), u32::from(outcomes.as_bytes()[i] - b'0'))
            });
            events.push(Event::new(format!("{outcomes}|{settings}"), assignment));
        }
    }
    Scenario {
        measurements,
        events,
        rules: Vec::new(),
    }
}

fn sign_to_parity(sign: i8) -> u32 {
    u32::from(sign < 0)
}

/// The n-party Svetlichny test as events: a `+` term admits even outcome
/// parity, a `−` term odd parity.
pub fn gen_svetlichny(n: usize) -> Result<(SvetlichnyPolynomial, Scenario), ScenarioError> {
    let poly = svetlichny_polynomial(n)?;
    let parties: Vec<String> = (0..n).map(party_name).collect();
    let scenario = parity_scenario(&parties, |s| {
        sign_to_parity(poly.sign(s).expect("every setting string has a term"))
    });
    Ok((poly, scenario))
}

/// Packing table for the three four-party experiments ABCD, CDEF, EFAB: each
/// row is one consistent global setting of A–F, written per experiment with
/// the sign of that correlator term.
pub const SVETLICHNY_TABLE: [[&str; 3]; 16] = [
    ["-1111", "-1111", "+1111"],
    ["+1100", "+0010", "-1011"],
    ["+1101", "+0101", "-0111"],
    ["-1110", "-1000", "-0011"],
    ["-0000", "-0000", "+0000"],
    ["-0001", "-0111", "-1100"],
    ["+0010", "+1010", "-1000"],
    ["+0011", "+1101", "-0100"],
    ["+0111", "+1110", "-1001"],
    ["+0100", "+0001", "-0101"],
    ["+0101", "+0100", "+0001"],
    ["+0110", "+1011", "-1101"],
    ["+1011", "+1100", "-0010"],
    ["+1000", "+0011", "+1110"],
    ["+1010", "+1001", "-0110"],
    ["+1001", "+0110", "-1010"],
];

pub const SVETLICHNY_TRIPLE_PARTIES: [[&str; 4]; 3] = [
    ["A", "B", "C", "D"],
    ["C", "D", "E", "F"],
    ["E", "F", "A", "B"],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvetlichnyTriple {
    pub family: Family,
    /// 24 twelve-cliques and 12 eight-cliques over union labels.
    pub cover: LabelledCover,
}

/// Exact α* of the triple union with its certificates, over union labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePacking {
    pub value: Rational,
    /// Packing point; every event appears, most with a positive value.
    pub point: Vec<(String, Rational)>,
    /// Fractional clique cover of total weight `value`.
    pub cover: LabelledCover,
}

impl SvetlichnyTriple {
    /// Outcome flips of a party set that meets every experiment in an even
    /// number of parties. They keep each experiment's parities, so they
    /// permute the union's events and preserve exclusivity. Each element is a
    /// permutation of union event indices; the 16 flips form a group.
    pub fn flip_group(union: &UnionScenario) -> Vec<Vec<usize>> {
        let events = &union.scenario.events;
        let index: std::collections::HashMap<&str, usize> = events
            .iter()
            .enumerate()
            .map(|(v, e)| (e.label.as_str(), v))
            .collect();
        let party_bit = |name: &str| (name.as_bytes()[0] - b'A') as u32;
        let mut group = Vec::new();
        for t in 0..64u32 {
            let even = SVETLICHNY_TRIPLE_PARTIES
                .iter()
                .all(|ps| ps.iter().filter(|p| t >> party_bit(p) & 1 == 1).count() % 2 == 0);
            if !even {
                continue;
            }
            let perm = events
                .iter()
                .map(|e| {
                    let (part, local) = e.label.split_once(':').expect("union label");
                    let (outcomes, settings) = local.split_once('|').expect("event label");
                    let parties = &SVETLICHNY_TRIPLE_PARTIES[part.parse::<usize>().expect("part")];
                    let flipped: String = outcomes
                        .chars()
                        .zip(parties)
                        .map(|(c, p)| match (c, t >> party_bit(p) & 1) {
                            (c, 0) => c,
                            ('0', _) => '1',
                            _ => '0',
                        })
                        .collect();
                    index[union_label(
                        part.parse().expect("part"),
                        &format!("{flipped}|{settings}"),
                    )
                    .as_str()]
                })
                .collect();
            group.push(perm);
        }
        group
    }

    /// Computes α* of the union by cutting planes over flip-invariant points
    /// (see [`symmetric_packing`]). Nothing here is trusted: check the point
    /// and cover with [`crate::packing::packing_bounds`].
    pub fn packing(&self) -> Result<TriplePacking, EventsError> {
        let union = self.family.union()?;
        let g = build_exclusivity_graph(&union.scenario)?;
        let seed = self.cover.resolve(&g).expect("cover uses union labels");
        let seed: Vec<Vec<usize>> = seed.entries.into_iter().map(|e| e.clique).collect();
        let sol = symmetric_packing(&g, &Self::flip_group(&union), &seed);
        let point = union
            .scenario
            .events
            .iter()
            .zip(sol.values)
            .map(|(e, x)| (e.label.clone(), x))
            .collect();
        Ok(TriplePacking {
            value: sol.value,
            point,
            cover: LabelledCover::from_cover(&g, &sol.cover),
        })
    }
}

/// Three Svetlichny experiments on parties ABCD, CDEF, EFAB. ABCD uses S_4
/// directly; CDEF uses S_4 with the party order reversed; EFAB is the
/// complementary form (every parity flipped).
pub fn gen_svetlichny_triple() -> SvetlichnyTriple {
    let s4 = svetlichny_polynomial(4).expect("4 parties");
    let reversed = |s: &str| s.chars().rev().collect::<String>();
    let signs: [&dyn Fn(&str) -> i8; 3] = [
        &|s| s4.sign(s).expect("term"),
        &|s| s4.sign(&reversed(s)).expect("term"),
        &|s| -s4.sign(s).expect("term"),
    ];
    let parts: Vec<Scenario> = SVETLICHNY_TRIPLE_PARTIES
        .iter()
        .zip(&signs)
        .map(|(names, sign)| {
            let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            parity_scenario(&names, |s| sign_to_parity(sign(s)))
        })
        .collect();

    let mut cliques = Vec::new();
    // Events of experiment `part` at `settings` whose first and second
    // outcome pairs have parities `q1` and `q2`.
    let select = |part: usize, settings: &str, q1: u32, q2: u32| -> Vec<String> {
        (0..16u32)
            .filter(|o| ((o >> 3) ^ (o >> 2)) & 1 == q1 && ((o >> 1) ^ o) & 1 == q2)
            .map(|o| union_label(part, &format!("{}|{settings}", bits(o as usize, 4))))
            .collect()
    };
    for row in SVETLICHNY_TABLE {
        let settings: Vec<&str> = row.iter().map(|c| &c[1..]).collect();
        let p: Vec<u32> = (0..3)
            .map(|i| sign_to_parity(signs[i](settings[i])))
            .collect();
        if p[0] ^ p[1] ^ p[2] == 1 {
            // Shared pairs must disagree in parity between neighbouring
            // experiments, which closes up exactly when the row parity is odd.
            for u in 0..2 {
                let cd = u ^ p[0];
                let cd2 = 1 ^ cd;
                let ef = cd2 ^ p[1];
                let ef2 = 1 ^ ef;
                let ab2 = 1 ^ u;
                let mut clique = select(0, settings[0], u, cd);
                clique.extend(select(1, settings[1], cd2, ef));
                clique.extend(select(2, settings[2], ef2, ab2));
                cliques.push((clique, Rational::one()));
            }
        } else {
            for (part, s) in settings.iter().enumerate() {
                let clique: Vec<String> = (0..16usize)
                    .filter(|o| o.count_ones() % 2 == p[part])
                    .map(|o| union_label(part, &format!("{}|{s}", bits(o, 4))))
                    .collect();
                cliques.push((clique, Rational::one()));
            }
        }
    }
    SvetlichnyTriple {
        family: Family {
            parts,
            rules: Vec::new(),
        },
        cover: LabelledCover { cliques },
    }
}
