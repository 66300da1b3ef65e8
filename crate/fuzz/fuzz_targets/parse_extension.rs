#![no_main]

use copolarity::io::{extension_to_json, parse_extension};
use libfuzzer_sys::{fuzz_target, Corpus};

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(ext) = parse_extension(text) else {
        return Corpus::Keep;
    };
    let again = parse_extension(&extension_to_json(&ext).to_string()).expect("canonical output parses");
    assert_eq!(again.omega, ext.omega);
    assert_eq!(again.adjoint, ext.adjoint);
    if ext.validate().is_ok() {
        let _ = ext.is_nice_involution();
        let _ = ext.codim();
    }
    Corpus::Keep
});
