#![no_main]

use exclusivity::format::{cover_to_json, parse_cover};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cover) = parse_cover(text) {
        assert_eq!(parse_cover(&cover_to_json(&cover)).expect("round trip"), cover);
    }
});
