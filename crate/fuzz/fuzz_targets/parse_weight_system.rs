#![no_main]

use copolarity::io::{parse_weight_system, weight_system_to_json};
use libfuzzer_sys::{fuzz_target, Corpus};

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(ws) = parse_weight_system(text) else {
        return Corpus::Keep;
    };
    let again = parse_weight_system(&weight_system_to_json(&ws).to_string()).expect("canonical output parses");
    assert_eq!(again, ws);
    let _ = ws.is_faithful();
    let _ = ws.cohomogeneity();
    Corpus::Keep
});
