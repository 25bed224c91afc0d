//! The polynomial-table JSON decoder is an untrusted input boundary; it
//! must never panic on arbitrary JSON (including huge exponents or
//! malformed coefficient strings).

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(s) {
            let _ = hypheat::poly::PTable::from_json(&v);
        }
    }
});
