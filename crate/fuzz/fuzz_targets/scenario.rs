#![no_main]

use exclusivity::events::build_exclusivity_graph;
use exclusivity::format::{parse_scenario, scenario_to_json};
use libfuzzer_sys::fuzz_target;

// Accepted scenarios must build a graph and survive a round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(scenario) = parse_scenario(text) else {
        return;
    };
    let graph = build_exclusivity_graph(&scenario).expect("parsed scenarios are valid");
    assert_eq!(graph.vertex_count(), scenario.events.len());
    let again = parse_scenario(&scenario_to_json(&scenario)).expect("round trip");
    assert_eq!(again, scenario);
});
