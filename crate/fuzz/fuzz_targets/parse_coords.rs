#![no_main]

use libfuzzer_sys::fuzz_target;
use nilpotent::parse_coords;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(x) = parse_coords(text) {
            assert_eq!(parse_coords(&x.to_string()).unwrap(), x);
        }
    }
});
