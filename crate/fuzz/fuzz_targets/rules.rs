#![no_main]

use exclusivity::format::{parse_rules, rules_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rules) = parse_rules(text) {
        assert_eq!(parse_rules(&rules_to_json(&rules)).expect("round trip"), rules);
    }
});
