#![no_main]

use libfuzzer_sys::fuzz_target;
use nilpotent::{groups, parse_slp, slp_to_coords, Group};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(slp) = parse_slp(text) else {
        return;
    };
    assert_eq!(parse_slp(&slp.to_text()).expect("to_text output parses"), slp);
    if slp.generator_bound() <= 6 && slp.size() < 256 {
        let g = Group::new(groups::unitriangular4());
        let x = slp_to_coords(&g, &slp).unwrap();
        // Short outputs can be checked against plain collection.
        if let Ok(w) = slp.expand(4096) {
            assert_eq!(g.word_to_coords(&w).unwrap(), x);
        }
    }
});
