#![no_main]

use borncraft::circuit::parse_circuit;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse_circuit(src) {
        let again = parse_circuit(&c.to_string()).expect("printed circuits parse");
        assert_eq!(again, c);
    }
});
