#![no_main]

use borncraft::harness::parse_grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = parse_grid(src) {
        let text = serde_json::to_string(&grid).expect("grids serialize");
        assert_eq!(parse_grid(&text).expect("serialized grids parse"), grid);
    }
});
