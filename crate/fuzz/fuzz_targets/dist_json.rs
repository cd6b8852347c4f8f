#![no_main]

use borncraft::dist::{from_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = from_json(src) {
        let text = to_json(&d);
        assert_eq!(from_json(&text).expect("encoded distributions decode"), d);
    }
});
