#![no_main]

use libfuzzer_sys::fuzz_target;
use nilpotent::{check_consistency, parse_presentation};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = parse_presentation(text) else {
        return;
    };
    // Serialization must parse back to the same presentation.
    let again = parse_presentation(&p.to_text()).expect("to_text output parses");
    assert_eq!(again, p);
    if p.num_generators() <= 6 && text.len() < 512 {
        let _ = check_consistency(&p);
    }
});
