#![no_main]

use copolarity::io::parse_weight_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ws) = parse_weight_list(text) {
            let joined: Vec<String> = ws.iter().map(i64::to_string).collect();
            assert_eq!(parse_weight_list(&joined.join(",")).unwrap(), ws);
        }
    }
});
