//! The mixture JSON parser must reject arbitrary input gracefully: any
//! byte string either parses to a validated mixture or returns an error,
//! never panics.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = hypheat::hyperboloid::Mixture::from_json_str(s);
    }
});
