//! The three-party CHSH ring written out by hand, event by event.

use exclusivity::events::{Event, Measurement, Scenario};

/// Parses `"ab|xXyY"` such as `"01|0_C1_B"` into an event.
fn event(label: &str) -> Event {
    let (outcomes, ms) = label.split_once('|').unwrap();
    let ms: Vec<String> = vec![ms[..3].to_string(), ms[3..].to_string()];
    let o: Vec<u32> = outcomes.chars().map(|c| c.to_digit(2).unwrap()).collect();
    Event::new(label, [(ms[0].clone(), o[0]), (ms[1].clone(), o[1])])
}

fn experiment(parties: [&str; 2], labels: [&str; 8]) -> Scenario {
    let mut measurements = Vec::new();
    for p in parties {
        for k in 0..2 {
            measurements.push(Measurement::dichotomic(format!("{k}_{p}")));
        }
    }
    Scenario {
        measurements,
        events: labels.iter().map(|l| event(l)).collect(),
        rules: Vec::new(),
    }
}

/// The published table, with the second and third columns of the last
/// experiment restored to the column pattern the other two follow.
pub fn table() -> Vec<Scenario> {
    vec![
        experiment(
            ["A", "B"],
            [
                "00|0_A0_B",
                "00|0_B1_A",
                "01|1_A1_B",
                "00|1_B0_A",
                "11|0_A0_B",
                "11|0_B1_A",
                "10|1_A1_B",
                "11|1_B0_A",
            ],
        ),
        experiment(
            ["A", "C"],
            [
                "01|0_A0_C",
                "00|0_C1_A",
                "00|1_A1_C",
                "00|1_C0_A",
                "10|0_A0_C",
                "11|0_C1_A",
                "11|1_A1_C",
                "11|1_C0_A",
            ],
        ),
        experiment(
            ["C", "B"],
            [
                "00|0_C0_B",
                "01|0_B1_C",
                "00|1_C1_B",
                "00|1_B0_C",
                "11|0_C0_B",
                "10|0_B1_C",
                "11|1_C1_B",
                "11|1_B0_C",
            ],
        ),
    ]
}
