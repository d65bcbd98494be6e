#![no_main]

use libfuzzer_sys::fuzz_target;
use nilpotent::parse_finite_presentation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(fp) = parse_finite_presentation(text) {
        assert_eq!(parse_finite_presentation(&fp.to_text()).expect("to_text output parses"), fp);
    }
});
