#![no_main]

use copolarity::io::parse_rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(q) = parse_rational(text) {
            assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
        }
    }
});
