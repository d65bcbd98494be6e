#![no_main]

use libfuzzer_sys::fuzz_target;
use nilpotent::{groups, parse_word, Group};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(w) = parse_word(text, 3) else {
        return;
    };
    assert_eq!(parse_word(&w.to_string(), 3).expect("display parses"), w);
    // Large exponents collect in logarithmic time, so this stays cheap.
    if text.len() < 1024 {
        let g = Group::new(groups::heisenberg());
        let x = g.word_to_coords(&w).unwrap();
        assert_eq!(g.word_to_coords(&w.inverse()).unwrap(), g.invert(&x));
    }
});
